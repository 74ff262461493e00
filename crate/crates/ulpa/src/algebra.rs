//! The Leavitt path algebra of a finite ultragraph.
//!
//! Elements are exact-field linear combinations of monomials
//! `s_alpha p_A s_beta*`. The algebra object owns the graph and the field;
//! elements are plain data. Equality is decided through a canonical normal
//! form: middles split into singletons, then every non-sink monomial in a
//! degree class expanded (projection = sum over out-edges of
//! edge-conjugates) until word depths agree.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Field;
use crate::graph::{EdgeId, PathWord, Ultragraph, VertexId, VertexSet, Violation};
use crate::linalg::{self, Equation};

/// A spanning monomial `s_alpha p_A s_beta*`.
///
/// Invariant: `mid` is nonempty and contained in the effective ranges of
/// both words (the range of the last edge; no constraint for an empty
/// word). Degree is `|alpha| - |beta|`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    alpha: PathWord,
    mid: VertexSet,
    beta: PathWord,
}

impl Monomial {
    pub fn alpha(&self) -> &PathWord {
        &self.alpha
    }

    pub fn mid(&self) -> &VertexSet {
        &self.mid
    }

    pub fn beta(&self) -> &PathWord {
        &self.beta
    }

    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    fn min_len(&self) -> usize {
        self.alpha.len().min(self.beta.len())
    }
}

/// A finitely supported combination of monomials. No explicit zero
/// coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LpaElem<F: Field> {
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Default for LpaElem<F> {
    fn default() -> Self {
        LpaElem::zero()
    }
}

impl<F: Field> LpaElem<F> {
    pub fn zero() -> Self {
        LpaElem { terms: BTreeMap::new() }
    }

    /// Wrap an already-collected term map (no zero coefficients).
    pub(crate) fn from_raw(terms: BTreeMap<Monomial, F::Elem>) -> Self {
        LpaElem { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// An element in canonical form; see [`Lpa::normal_form`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalForm<F: Field> {
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> NormalForm<F> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn into_elem(self) -> LpaElem<F> {
        LpaElem { terms: self.terms }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum AlgebraError {
    #[error("word is not a valid path in this ultragraph")]
    InvalidWord,
    #[error("unknown edge id")]
    UnknownEdge,
    #[error("invalid ultragraph: {0:?}")]
    InvalidGraph(Vec<Violation>),
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum InnerInverseError {
    #[error("element is zero")]
    ZeroElement,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("no inner inverse found within depth {depth_max}")]
    NotFoundWithinDepth { depth_max: usize },
}

/// The Leavitt path algebra of a validated finite ultragraph over an
/// exact field.
#[derive(Clone, Debug)]
pub struct Lpa<F: Field> {
    graph: Ultragraph,
    field: F,
}

impl<F: Field> Lpa<F> {
    pub fn new(graph: Ultragraph, field: F) -> Result<Self, AlgebraError> {
        let violations = graph.validate();
        if !violations.is_empty() {
            return Err(AlgebraError::InvalidGraph(violations));
        }
        Ok(Lpa { graph, field })
    }

    pub fn graph(&self) -> &Ultragraph {
        &self.graph
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Effective range of a word: range of its last edge, or every vertex
    /// for the empty word.
    fn effective_range(&self, word: &PathWord) -> VertexSet {
        match self.graph.path_range(word) {
            Some(r) => r.clone(),
            None => self.graph.full_vertex_set(),
        }
    }

    /// The monomial `s_alpha p_A s_beta*` as an element; the middle is
    /// intersected with both effective ranges, and an empty result is the
    /// zero element.
    pub fn monomial(
        &self,
        alpha: PathWord,
        mid: VertexSet,
        beta: PathWord,
    ) -> Result<LpaElem<F>, AlgebraError> {
        if !self.graph.is_valid_path(&alpha) || !self.graph.is_valid_path(&beta) {
            return Err(AlgebraError::InvalidWord);
        }
        let mid = mid
            .intersect(&self.effective_range(&alpha))
            .intersect(&self.effective_range(&beta));
        if mid.is_empty() {
            return Ok(LpaElem::zero());
        }
        let mono = Monomial { alpha, mid, beta };
        Ok(LpaElem { terms: BTreeMap::from([(mono, self.field.one())]) })
    }

    /// The projection `p_A`.
    pub fn p(&self, set: &VertexSet) -> LpaElem<F> {
        self.monomial(PathWord::empty(), set.clone(), PathWord::empty())
            .expect("empty words are always valid")
    }

    pub fn p_vertex(&self, v: VertexId) -> LpaElem<F> {
        self.p(&VertexSet::singleton(v))
    }

    /// The partial isometry `s_e`.
    pub fn s(&self, e: EdgeId) -> LpaElem<F> {
        self.monomial(PathWord::new(vec![e]), self.graph.range(e).clone(), PathWord::empty())
            .expect("single edges are valid words")
    }

    /// The adjoint generator `s_e*`.
    pub fn s_star(&self, e: EdgeId) -> LpaElem<F> {
        self.monomial(PathWord::empty(), self.graph.range(e).clone(), PathWord::new(vec![e]))
            .expect("single edges are valid words")
    }

    /// `s_alpha` for a word (the product of its edge generators).
    pub fn s_word(&self, word: &PathWord) -> Result<LpaElem<F>, AlgebraError> {
        if word.is_empty() {
            return Ok(self.unit());
        }
        self.monomial(word.clone(), self.effective_range(word), PathWord::empty())
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, F::Elem)>) -> LpaElem<F> {
        let mut out = LpaElem::zero();
        for (m, c) in terms {
            add_term(&self.field, &mut out.terms, m, c);
        }
        out
    }

    /// The multiplicative identity `sum_v p_v` (finite ultragraphs are
    /// always unital).
    pub fn unit(&self) -> LpaElem<F> {
        let mut out = LpaElem::zero();
        for v in self.graph.vertices() {
            add_term(
                &self.field,
                &mut out.terms,
                Monomial {
                    alpha: PathWord::empty(),
                    mid: VertexSet::singleton(v),
                    beta: PathWord::empty(),
                },
                self.field.one(),
            );
        }
        out
    }

    pub fn add(&self, a: &LpaElem<F>, b: &LpaElem<F>) -> LpaElem<F> {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            add_term(&self.field, &mut out.terms, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, a: &LpaElem<F>) -> LpaElem<F> {
        LpaElem {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, a: &LpaElem<F>, b: &LpaElem<F>) -> LpaElem<F> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: &F::Elem, a: &LpaElem<F>) -> LpaElem<F> {
        if self.field.is_zero(c) {
            return LpaElem::zero();
        }
        LpaElem {
            terms: a
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), self.field.mul(c, k)))
                .collect(),
        }
    }

    /// Product of two monomials: zero or a single monomial, by the prefix
    /// relation between the inner words.
    pub fn mono_mul(&self, m1: &Monomial, m2: &Monomial) -> Option<Monomial> {
        let beta = &m1.beta;
        let gamma = &m2.alpha;
        if beta.len() == gamma.len() {
            if beta != gamma {
                return None;
            }
            let mid = m1.mid.intersect(&m2.mid);
            if mid.is_empty() {
                return None;
            }
            Some(Monomial { alpha: m1.alpha.clone(), mid, beta: m2.beta.clone() })
        } else if gamma.len() > beta.len() {
            if &gamma.as_slice()[..beta.len()] != beta.as_slice() {
                return None;
            }
            let w = gamma.suffix_from(beta.len());
            if !m1.mid.contains(self.graph.source(w.first().unwrap())) {
                return None;
            }
            Some(Monomial {
                alpha: m1.alpha.concat(&w),
                mid: m2.mid.clone(),
                beta: m2.beta.clone(),
            })
        } else {
            if &beta.as_slice()[..gamma.len()] != gamma.as_slice() {
                return None;
            }
            let w = beta.suffix_from(gamma.len());
            if !m2.mid.contains(self.graph.source(w.first().unwrap())) {
                return None;
            }
            Some(Monomial {
                alpha: m1.alpha.clone(),
                mid: m1.mid.clone(),
                beta: m2.beta.concat(&w),
            })
        }
    }

    /// Bilinear extension of [`Lpa::mono_mul`].
    pub fn mul(&self, a: &LpaElem<F>, b: &LpaElem<F>) -> LpaElem<F> {
        let mut out = LpaElem::zero();
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                if let Some(m) = self.mono_mul(m1, m2) {
                    add_term(&self.field, &mut out.terms, m, self.field.mul(c1, c2));
                }
            }
        }
        out
    }

    /// The involution `s_alpha p_A s_beta* -> s_beta p_A s_alpha*`
    /// (coefficients fixed).
    pub fn involution(&self, a: &LpaElem<F>) -> LpaElem<F> {
        LpaElem {
            terms: a
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial {
                            alpha: m.beta.clone(),
                            mid: m.mid.clone(),
                            beta: m.alpha.clone(),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Split into homogeneous components keyed by degree.
    pub fn degree_components(&self, a: &LpaElem<F>) -> BTreeMap<i64, LpaElem<F>> {
        let mut out: BTreeMap<i64, LpaElem<F>> = BTreeMap::new();
        for (m, c) in &a.terms {
            out.entry(m.degree())
                .or_insert_with(LpaElem::zero)
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Projection onto the degree-`n` component.
    pub fn graded_component(&self, a: &LpaElem<F>, n: i64) -> LpaElem<F> {
        self.degree_components(a).remove(&n).unwrap_or_default()
    }

    /// Canonical normal form. Middles are split into singletons; within
    /// each degree class every monomial whose shorter word is below the
    /// class depth gets expanded through its middle vertex's out-edges
    /// (sink middles are terminal); like terms collect and zeros drop.
    pub fn normal_form(&self, a: &LpaElem<F>) -> NormalForm<F> {
        self.normal_form_with_floor(a, &BTreeMap::new())
    }

    /// Normal form with per-degree depth floors, used to put several
    /// elements into one common spanning family.
    pub(crate) fn normal_form_with_floor(
        &self,
        a: &LpaElem<F>,
        floor: &BTreeMap<i64, usize>,
    ) -> NormalForm<F> {
        let split = self.split_singletons(&a.terms);
        let mut depth: BTreeMap<i64, usize> = floor.clone();
        for m in split.keys() {
            let d = depth.entry(m.degree()).or_insert(0);
            *d = (*d).max(m.min_len());
        }
        let mut done: BTreeMap<Monomial, F::Elem> = BTreeMap::new();
        let mut work: Vec<(Monomial, F::Elem)> = split.into_iter().collect();
        while let Some((m, c)) = work.pop() {
            let target = depth[&m.degree()];
            let v = m.mid.iter().next().expect("singleton middle");
            if m.min_len() >= target || self.graph.out_edges(v).is_empty() {
                add_term(&self.field, &mut done, m, c);
                continue;
            }
            for &e in self.graph.out_edges(v) {
                for u in self.graph.range(e).iter() {
                    let mut alpha = m.alpha.clone();
                    alpha.push(e);
                    let mut beta = m.beta.clone();
                    beta.push(e);
                    work.push((
                        Monomial { alpha, mid: VertexSet::singleton(u), beta },
                        c.clone(),
                    ));
                }
            }
        }
        NormalForm { terms: done }
    }

    /// Natural per-degree depths of an element (after singleton split).
    pub(crate) fn natural_depths(&self, a: &LpaElem<F>) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for m in a.terms.keys() {
            let d = out.entry(m.degree()).or_insert(0usize);
            *d = (*d).max(m.min_len());
        }
        out
    }

    fn split_singletons(&self, terms: &BTreeMap<Monomial, F::Elem>) -> BTreeMap<Monomial, F::Elem> {
        let mut out = BTreeMap::new();
        for (m, c) in terms {
            for v in m.mid.iter() {
                add_term(
                    &self.field,
                    &mut out,
                    Monomial {
                        alpha: m.alpha.clone(),
                        mid: VertexSet::singleton(v),
                        beta: m.beta.clone(),
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    pub fn is_zero(&self, a: &LpaElem<F>) -> bool {
        self.normal_form(a).is_zero()
    }

    pub fn eq(&self, a: &LpaElem<F>, b: &LpaElem<F>) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// Search for `y` homogeneous of opposite degree with `x y x = x`, by
    /// exact linear solving over candidate monomials of growing word
    /// depth. This is a semi-decision: failure reports the depth reached,
    /// never global nonexistence. Any returned witness has been
    /// re-verified by direct multiplication.
    pub fn inner_inverse(
        &self,
        x: &LpaElem<F>,
        depth_max: usize,
    ) -> Result<LpaElem<F>, InnerInverseError> {
        let nf = self.normal_form(x);
        if nf.is_zero() {
            return Err(InnerInverseError::ZeroElement);
        }
        let mut degrees: Vec<i64> = nf.terms.keys().map(|m| m.degree()).collect();
        degrees.sort_unstable();
        degrees.dedup();
        if degrees.len() != 1 {
            return Err(InnerInverseError::NotHomogeneous);
        }
        let n = degrees[0];

        for depth in 0..=depth_max {
            let candidates = self.candidate_monomials(-n, depth);
            if candidates.is_empty() {
                continue;
            }
            // Common spanning family: expand x and every product to the
            // deepest natural depth among them.
            let products: Vec<LpaElem<F>> = candidates
                .iter()
                .map(|m| {
                    let y = LpaElem {
                        terms: BTreeMap::from([(m.clone(), self.field.one())]),
                    };
                    self.mul(&self.mul(x, &y), x)
                })
                .collect();
            let mut floor = self.natural_depths(x);
            for p in &products {
                for (d, l) in self.natural_depths(p) {
                    let entry = floor.entry(d).or_insert(0);
                    *entry = (*entry).max(l);
                }
            }
            let target = self.normal_form_with_floor(x, &floor);
            let product_nfs: Vec<NormalForm<F>> = products
                .iter()
                .map(|p| self.normal_form_with_floor(p, &floor))
                .collect();

            let mut row_keys: Vec<&Monomial> = target.terms.keys().collect();
            for p in &product_nfs {
                row_keys.extend(p.terms.keys());
            }
            row_keys.sort();
            row_keys.dedup();

            let eqs: Vec<Equation<F>> = row_keys
                .iter()
                .map(|key| Equation {
                    coeffs: product_nfs
                        .iter()
                        .map(|p| p.terms.get(*key).cloned().unwrap_or_else(|| self.field.zero()))
                        .collect(),
                    rhs: target.terms.get(*key).cloned().unwrap_or_else(|| self.field.zero()),
                })
                .collect();

            if let Some(solution) = linalg::solve(&self.field, candidates.len(), &eqs) {
                let y = self.from_terms(
                    candidates
                        .into_iter()
                        .zip(solution)
                        .filter(|(_, c)| !self.field.is_zero(c)),
                );
                let check = self.mul(&self.mul(x, &y), x);
                if self.eq(&check, x) {
                    return Ok(y);
                }
                // An exact solution that fails re-verification would mean
                // the spanning family was dependent; treat as not found at
                // this depth.
            }
        }
        Err(InnerInverseError::NotFoundWithinDepth { depth_max })
    }

    /// All singleton-middled monomials of the given degree whose shorter
    /// word has length at most `depth`.
    fn candidate_monomials(&self, degree: i64, depth: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let (extra_a, extra_b) = if degree >= 0 {
            (degree as usize, 0)
        } else {
            (0, (-degree) as usize)
        };
        for t in 0..=depth {
            let alphas = self.words_of_length(t + extra_a);
            let betas = self.words_of_length(t + extra_b);
            for alpha in &alphas {
                let ra = self.effective_range(alpha);
                for beta in &betas {
                    let eff = ra.intersect(&self.effective_range(beta));
                    for v in eff.iter() {
                        out.push(Monomial {
                            alpha: alpha.clone(),
                            mid: VertexSet::singleton(v),
                            beta: beta.clone(),
                        });
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Every valid word of the exact length.
    pub fn words_of_length(&self, len: usize) -> Vec<PathWord> {
        let mut acc = vec![PathWord::empty()];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &acc {
                match w.last() {
                    None => {
                        for e in self.graph.edge_ids() {
                            let mut ext = w.clone();
                            ext.push(e);
                            next.push(ext);
                        }
                    }
                    Some(last) => {
                        for e in self.graph.edge_ids() {
                            if self.graph.range(last).contains(self.graph.source(e)) {
                                let mut ext = w.clone();
                                ext.push(e);
                                next.push(ext);
                            }
                        }
                    }
                }
            }
            acc = next;
        }
        acc
    }
}

fn add_term<F: Field>(
    field: &F,
    terms: &mut BTreeMap<Monomial, F::Elem>,
    m: Monomial,
    c: F::Elem,
) {
    use std::collections::btree_map::Entry;
    if field.is_zero(&c) {
        return;
    }
    match terms.entry(m) {
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
        Entry::Occupied(mut slot) => {
            let sum = field.add(slot.get(), &c);
            if field.is_zero(&sum) {
                slot.remove();
            } else {
                slot.insert(sum);
            }
        }
    }
}
