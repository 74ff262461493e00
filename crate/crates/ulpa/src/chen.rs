//! Modules with basis a tail-equivalence class of infinite paths.
//!
//! For a base path `p`, the vector space on the class of `p` carries the
//! algebra action `p_A . q = q` (when the source lies in `A`),
//! `s_e . q = eq`, `s*_e . q = tau_{>1}(q)` (when `q` starts with `e`).
//! Over a rational base `c^inf` the module can be twisted by an
//! irreducible Laurent polynomial `f`: basis vectors carry a residue power
//! `t^j mod f`, and whenever recanonicalizing a basis path winds the
//! cycle, the accumulated arrow degree folds into a power of `t`. The
//! divisibility of that fold by `|c|` is checked at runtime.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{Lpa, LpaElem, Monomial};
use crate::field::Field;
use crate::graph::{EdgeId, PathError, PathWord, Ultragraph, VertexSet};
use crate::groupoid::ensure_sink_free;
use crate::path::{InfinitePath, ShiftedTail};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ChenError {
    #[error("twisted modules require an eventually periodic base")]
    TwistNeedsRationalBase,
    #[error("polynomial is reducible: root found")]
    Reducible,
    #[error("polynomial must be nonzero of degree at least 1 after removing unit factors")]
    BadPolynomial,
    #[error("the module requires a sink-free ultragraph (found sink {0})")]
    SinkedGraph(String),
    #[error(
        "finite ultragraphs have no generalized vertex emitting infinitely many edges, so no module is based at a finite path"
    )]
    NoInfiniteEmitters,
    #[error("residue index out of range")]
    BadResidue,
    #[error("arrow-degree fold {0} is not divisible by the cycle length {1}")]
    ShiftNotDivisible(i64, usize),
    #[error("path error: {0}")]
    Path(#[from] PathError),
}

/// How the irreducibility of a polynomial was established.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IrreducibilityEvidence {
    DegreeOne,
    /// Degree 2 or 3 with an exhaustive or rational-root search finding no
    /// root.
    VerifiedRootFree,
    /// The caller's assertion; nothing was checked.
    Asserted,
}

/// A unit-normalized irreducible polynomial in the Laurent ring: monic,
/// nonzero constant term (powers of `t` are units and are stripped).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IrreduciblePoly<F: Field> {
    coeffs: Vec<F::Elem>,
    evidence: IrreducibilityEvidence,
}

impl<F: Field> IrreduciblePoly<F> {
    pub fn new(field: &F, coeffs: Vec<F::Elem>) -> Result<Self, ChenError> {
        let deg = coeffs
            .iter()
            .rposition(|c| !field.is_zero(c))
            .ok_or(ChenError::BadPolynomial)?;
        let val = coeffs
            .iter()
            .position(|c| !field.is_zero(c))
            .expect("nonzero polynomial");
        let body: Vec<F::Elem> = coeffs[val..=deg].to_vec();
        if body.len() < 2 {
            // A unit (u * t^k) generates the whole ring.
            return Err(ChenError::BadPolynomial);
        }
        let lead_inv = field.inv(body.last().unwrap()).expect("leading coeff nonzero");
        let coeffs: Vec<F::Elem> = body.iter().map(|c| field.mul(c, &lead_inv)).collect();
        let degree = coeffs.len() - 1;
        let evidence = if degree == 1 {
            IrreducibilityEvidence::DegreeOne
        } else if degree <= 3 {
            match field.roots_of_poly(&coeffs) {
                Some(roots) if roots.is_empty() => IrreducibilityEvidence::VerifiedRootFree,
                Some(_) => return Err(ChenError::Reducible),
                None => IrreducibilityEvidence::Asserted,
            }
        } else {
            IrreducibilityEvidence::Asserted
        };
        Ok(IrreduciblePoly { coeffs, evidence })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn evidence(&self) -> IrreducibilityEvidence {
        self.evidence
    }
}

/// Arithmetic in `K[t, t^-1] / (f)`, elements as coefficient vectors of
/// length `deg f`.
struct Residues<'a, F: Field> {
    field: &'a F,
    modulus: &'a IrreduciblePoly<F>,
}

impl<F: Field> Residues<'_, F> {
    fn dim(&self) -> usize {
        self.modulus.degree()
    }

    fn unit_at(&self, j: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[j] = self.field.one();
        v
    }

    /// Multiply by `t`: shift up, reduce `t^d = -(c_0 + .. + c_{d-1} t^{d-1})`.
    fn t_times(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let d = self.dim();
        let top = v[d - 1].clone();
        let mut out = vec![self.field.zero(); d];
        out[1..d].clone_from_slice(&v[..d - 1]);
        for (i, c) in self.modulus.coeffs[..d].iter().enumerate() {
            let delta = self.field.mul(&top, c);
            out[i] = self.field.sub(&out[i], &delta);
        }
        out
    }

    /// Multiply by `t^{-1}`: shift down, the constant term contributing
    /// `r_0 t^{-1} = -(r_0 / c_0)(c_1 + .. + c_d t^{d-1})`.
    fn t_inv_times(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let d = self.dim();
        let c0_inv = self
            .field
            .inv(&self.modulus.coeffs[0])
            .expect("constant term nonzero by normalization");
        let factor = self.field.neg(&self.field.mul(&v[0], &c0_inv));
        let mut out = vec![self.field.zero(); d];
        out[..d - 1].clone_from_slice(&v[1..d]);
        for (i, slot) in out.iter_mut().enumerate() {
            let delta = self.field.mul(&factor, &self.modulus.coeffs[i + 1]);
            *slot = self.field.add(slot, &delta);
        }
        out
    }

    fn t_pow_times(&self, v: &[F::Elem], d: i64) -> Vec<F::Elem> {
        let mut out = v.to_vec();
        if d >= 0 {
            for _ in 0..d {
                out = self.t_times(&out);
            }
        } else {
            for _ in 0..(-d) {
                out = self.t_inv_times(&out);
            }
        }
        out
    }
}

/// A canonical basis vector: a canonical shifted tail over the module's
/// base, plus a residue power index (always 0 for untwisted modules).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ChenKey {
    tail: ShiftedTail,
    residue: usize,
}

impl ChenKey {
    pub fn tail(&self) -> &ShiftedTail {
        &self.tail
    }

    pub fn residue(&self) -> usize {
        self.residue
    }
}

/// A finitely supported combination of basis vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModuleVector<F: Field> {
    terms: BTreeMap<ChenKey, F::Elem>,
}

impl<F: Field> ModuleVector<F> {
    pub fn zero() -> Self {
        ModuleVector { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChenKey, &F::Elem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// An algebra generator, as an operator on module vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Generator {
    P(VertexSet),
    S(EdgeId),
    SStar(EdgeId),
}

/// The module over a fixed base path, optionally twisted.
pub struct ChenModule<F: Field> {
    alg: Lpa<F>,
    base: InfinitePath,
    twist: Option<IrreduciblePoly<F>>,
}

impl<F: Field> ChenModule<F> {
    /// The untwisted module on the tail class of `base`.
    pub fn new(alg: Lpa<F>, base: InfinitePath) -> Result<Self, ChenError> {
        ensure_sink_free(alg.graph()).map_err(|_| {
            let v = alg.graph().sinks().iter().next().expect("sink witnessed");
            ChenError::SinkedGraph(alg.graph().vertex_name(v).to_string())
        })?;
        Ok(ChenModule { alg, base, twist: None })
    }

    /// The module whose basis indexes finite ultrapaths sharing the range
    /// of a finite path with infinitely many emitted edges. A finite
    /// ultragraph has no such range, so the request is always rejected;
    /// the surface exists to say why.
    pub fn range_module(alg: &Lpa<F>) -> Result<Self, ChenError> {
        let _ = alg;
        Err(ChenError::NoInfiniteEmitters)
    }

    /// The module on the class of a rational base, twisted by `f`. The
    /// base is replaced by its pure eventual cycle.
    pub fn twisted(
        alg: Lpa<F>,
        base: InfinitePath,
        f: IrreduciblePoly<F>,
    ) -> Result<Self, ChenError> {
        let cycle = base.cycle_word().ok_or(ChenError::TwistNeedsRationalBase)?.clone();
        let pure = InfinitePath::periodic(alg.graph(), PathWord::empty(), cycle)?;
        let mut module = ChenModule::new(alg, pure)?;
        module.twist = Some(f);
        Ok(module)
    }

    pub fn algebra(&self) -> &Lpa<F> {
        &self.alg
    }

    pub fn graph(&self) -> &Ultragraph {
        self.alg.graph()
    }

    pub fn base(&self) -> &InfinitePath {
        &self.base
    }

    pub fn twist(&self) -> Option<&IrreduciblePoly<F>> {
        self.twist.as_ref()
    }

    fn residue_dim(&self) -> usize {
        self.twist.as_ref().map_or(1, |f| f.degree())
    }

    /// The basis vector `word . tau_{>shift}(base)` (times `t^residue`
    /// when twisted), canonicalized.
    pub fn basis(
        &self,
        word: PathWord,
        shift: usize,
        residue: usize,
    ) -> Result<ModuleVector<F>, ChenError> {
        if residue >= self.residue_dim() {
            return Err(ChenError::BadResidue);
        }
        if !self.graph().is_valid_path(&word) {
            return Err(ChenError::Path(PathError::NotAPath));
        }
        if let Some(last) = word.last() {
            let tail_src = self.graph().source(self.base.letter(shift));
            if !self.graph().range(last).contains(tail_src) {
                return Err(ChenError::Path(PathError::NotAPath));
            }
        }
        let tail = ShiftedTail::new(word, shift, self.base.clone()).canonicalize();
        let key = ChenKey { tail, residue };
        Ok(ModuleVector {
            terms: BTreeMap::from([(key, self.alg.field().one())]),
        })
    }

    /// The base point itself as a basis vector.
    pub fn base_vector(&self) -> ModuleVector<F> {
        self.basis(PathWord::empty(), 0, 0).expect("base is always a member")
    }

    pub fn add(&self, a: &ModuleVector<F>, b: &ModuleVector<F>) -> ModuleVector<F> {
        let field = self.alg.field();
        let mut out = a.clone();
        for (k, c) in &b.terms {
            merge(field, &mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F::Elem, a: &ModuleVector<F>) -> ModuleVector<F> {
        let field = self.alg.field();
        ModuleVector {
            terms: a
                .terms
                .iter()
                .filter_map(|(k, k0)| {
                    let v = field.mul(k0, c);
                    if field.is_zero(&v) {
                        None
                    } else {
                        Some((k.clone(), v))
                    }
                })
                .collect(),
        }
    }

    pub fn sub(&self, a: &ModuleVector<F>, b: &ModuleVector<F>) -> ModuleVector<F> {
        let minus_one = self.alg.field().neg(&self.alg.field().one());
        self.add(a, &self.scale(&minus_one, b))
    }

    pub fn eq(&self, a: &ModuleVector<F>, b: &ModuleVector<F>) -> bool {
        self.sub(a, b).is_zero()
    }

    /// Act by one generator.
    pub fn act_gen(&self, g: &Generator, m: &ModuleVector<F>) -> Result<ModuleVector<F>, ChenError> {
        let field = self.alg.field();
        let mut out = ModuleVector::zero();
        for (key, coeff) in &m.terms {
            let graph = self.graph();
            let source = graph.source(key.tail.letter(0));
            match g {
                Generator::P(a) => {
                    if a.contains(source) {
                        merge(field, &mut out.terms, key.clone(), coeff.clone());
                    }
                }
                Generator::S(e) => {
                    if graph.range(*e).contains(source) {
                        let word = PathWord::new(vec![*e]).concat(key.tail.word());
                        let raw = ShiftedTail::new(word, key.tail.shift(), self.base.clone());
                        self.push_folded(&mut out, raw, key.residue, coeff)?;
                    }
                }
                Generator::SStar(e) => {
                    if key.tail.letter(0) == *e {
                        let raw = match key.tail.word().len() {
                            0 => ShiftedTail::new(
                                PathWord::empty(),
                                key.tail.shift() + 1,
                                self.base.clone(),
                            ),
                            _ => ShiftedTail::new(
                                key.tail.word().suffix_from(1),
                                key.tail.shift(),
                                self.base.clone(),
                            ),
                        };
                        self.push_folded(&mut out, raw, key.residue, coeff)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Canonicalize a raw shifted tail and fold the arrow-degree change
    /// into the residue (twisted), or forget it (untwisted: the basis is
    /// the path alone).
    fn push_folded(
        &self,
        out: &mut ModuleVector<F>,
        raw: ShiftedTail,
        residue: usize,
        coeff: &F::Elem,
    ) -> Result<(), ChenError> {
        let field = self.alg.field();
        let raw_degree = raw.degree();
        let canonical = raw.canonicalize();
        let fold = raw_degree - canonical.degree();
        match &self.twist {
            None => {
                merge(field, &mut out.terms, ChenKey { tail: canonical, residue: 0 }, coeff.clone());
            }
            Some(f) => {
                let period = self
                    .base
                    .cycle_word()
                    .expect("twisted modules have periodic bases")
                    .len() as i64;
                if fold % period != 0 {
                    return Err(ChenError::ShiftNotDivisible(fold, period as usize));
                }
                let d = fold / period;
                let res = Residues { field, modulus: f };
                let folded = res.t_pow_times(&res.unit_at(residue), d);
                for (j, c) in folded.into_iter().enumerate() {
                    let v = field.mul(&c, coeff);
                    merge(field, &mut out.terms, ChenKey { tail: canonical.clone(), residue: j }, v);
                }
            }
        }
        Ok(())
    }

    /// Act by an algebra element: each monomial `s_alpha p_A s_beta*`
    /// strips `beta` off the front, filters through `A`, then prepends
    /// `alpha` (the starred word acts first).
    pub fn act_elem(&self, a: &LpaElem<F>, m: &ModuleVector<F>) -> Result<ModuleVector<F>, ChenError> {
        let mut out = ModuleVector::zero();
        for (mono, c) in a.terms() {
            let acted = self.act_monomial(mono, m)?;
            out = self.add(&out, &self.scale(c, &acted));
        }
        Ok(out)
    }

    fn act_monomial(&self, mono: &Monomial, m: &ModuleVector<F>) -> Result<ModuleVector<F>, ChenError> {
        let mut v = m.clone();
        for e in mono.beta().iter() {
            v = self.act_gen(&Generator::SStar(e), &v)?;
            if v.is_zero() {
                return Ok(v);
            }
        }
        v = self.act_gen(&Generator::P(mono.mid().clone()), &v)?;
        for &e in mono.alpha().as_slice().iter().rev() {
            v = self.act_gen(&Generator::S(e), &v)?;
            if v.is_zero() {
                return Ok(v);
            }
        }
        Ok(v)
    }

    /// Multiply by `t^d` (twisted modules only).
    pub fn t_pow(&self, m: &ModuleVector<F>, d: i64) -> Result<ModuleVector<F>, ChenError> {
        let f = self.twist.as_ref().ok_or(ChenError::TwistNeedsRationalBase)?;
        let field = self.alg.field();
        let res = Residues { field, modulus: f };
        let mut out = ModuleVector::zero();
        for (key, coeff) in &m.terms {
            let folded = res.t_pow_times(&res.unit_at(key.residue), d);
            for (j, c) in folded.into_iter().enumerate() {
                let v = field.mul(&c, coeff);
                merge(field, &mut out.terms, ChenKey { tail: key.tail.clone(), residue: j }, v);
            }
        }
        Ok(out)
    }

    /// Apply a polynomial in `t` (twisted modules only).
    pub fn poly_apply(
        &self,
        coeffs: &[F::Elem],
        m: &ModuleVector<F>,
    ) -> Result<ModuleVector<F>, ChenError> {
        let field = self.alg.field();
        let mut out = ModuleVector::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            let powered = self.t_pow(m, i as i64)?;
            out = self.add(&out, &self.scale(c, &powered));
        }
        Ok(out)
    }

    /// A monomial operator sending the first basis path to the second,
    /// found by a bounded search for matching tails.
    pub fn transporter(&self, from: &ShiftedTail, to: &ShiftedTail) -> Option<Monomial> {
        let q = from.realize();
        let q2 = to.realize();
        let bound = from.word().len()
            + to.word().len()
            + 2 * self.base.prefix_word().len()
            + 2 * self.base.cycle_word().map_or(1, |c| c.len())
            + 4;
        for a in 0..=bound {
            for b in 0..=bound {
                if q.tau_gt(a).equals(&q2.tau_gt(b)).unwrap_or(false) {
                    let alpha = q2.tau_le(b);
                    let beta = q.tau_le(a);
                    let mid = VertexSet::singleton(self.graph().source(q.letter(a)));
                    let elem = self.alg.monomial(alpha, mid, beta).ok()?;
                    let mono = elem.terms().next()?.0.clone();
                    return Some(mono);
                }
            }
        }
        None
    }
}

fn merge<F: Field>(
    field: &F,
    terms: &mut BTreeMap<ChenKey, F::Elem>,
    key: ChenKey,
    c: F::Elem,
) {
    use std::collections::btree_map::Entry;
    if field.is_zero(&c) {
        return;
    }
    match terms.entry(key) {
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

/// Outcome of the representation-property suite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepresentationReport {
    pub relation_checks: usize,
    pub associativity_checks: usize,
    pub failures: Vec<String>,
}

impl RepresentationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run the defining relations as operators on random vectors, plus the
/// representation property `act(ab, m) = act(a, act(b, m))`.
pub fn check_representation<F: Field, R: Rng>(
    module: &ChenModule<F>,
    rng: &mut R,
    relation_vectors: usize,
    associativity_samples: usize,
) -> Result<RepresentationReport, ChenError> {
    let alg = module.algebra();
    let g = alg.graph().clone();
    let mut failures = Vec::new();
    let mut relation_checks = 0usize;

    // Relation differences as elements; each must annihilate every vector.
    let mut relation_elems: Vec<(String, LpaElem<F>)> = Vec::new();
    let fam = g.generalized_vertices();
    for a in fam.iter().take(4) {
        for b in fam.iter().take(4) {
            let lhs = alg.mul(&alg.p(a), &alg.p(b));
            let rhs = alg.p(&a.intersect(b));
            relation_elems.push(("p_A p_B - p_(A cap B)".into(), alg.sub(&lhs, &rhs)));
            let union = alg.p(&a.union(b));
            let sum = alg.sub(&alg.add(&alg.p(a), &alg.p(b)), &rhs);
            relation_elems.push(("union relation".into(), alg.sub(&union, &sum)));
        }
    }
    for e in g.edge_ids() {
        let se = alg.s(e);
        let sse = alg.s_star(e);
        let ps = alg.p_vertex(g.source(e));
        let pr = alg.p(g.range(e));
        relation_elems.push((
            format!("p_s s - s for {}", g.edge_name(e)),
            alg.sub(&alg.mul(&ps, &se), &se),
        ));
        relation_elems.push((
            format!("s p_r - s for {}", g.edge_name(e)),
            alg.sub(&alg.mul(&se, &pr), &se),
        ));
        relation_elems.push((
            format!("p_r s* - s* for {}", g.edge_name(e)),
            alg.sub(&alg.mul(&pr, &sse), &sse),
        ));
        for f in g.edge_ids() {
            let prod = alg.mul(&alg.s_star(e), &alg.s(f));
            let expected = if e == f { pr.clone() } else { LpaElem::zero() };
            relation_elems.push((
                format!("s*_{} s_{} - delta p_r", g.edge_name(e), g.edge_name(f)),
                alg.sub(&prod, &expected),
            ));
        }
    }
    for v in g.regular_vertices().iter() {
        let mut sum = LpaElem::zero();
        for &e in g.out_edges(v) {
            sum = alg.add(&sum, &alg.mul(&alg.s(e), &alg.s_star(e)));
        }
        relation_elems.push((
            format!("CK relation at {}", g.vertex_name(v)),
            alg.sub(&alg.p_vertex(v), &sum),
        ));
    }

    let vectors: Vec<ModuleVector<F>> = (0..relation_vectors)
        .filter_map(|_| random_vector(module, rng))
        .collect();
    for (name, elem) in &relation_elems {
        for m in &vectors {
            relation_checks += 1;
            let acted = module.act_elem(elem, m)?;
            if !acted.is_zero() {
                failures.push(format!("relation operator did not vanish: {name}"));
            }
        }
    }

    // act(ab, m) = act(a, act(b, m)).
    let mut associativity_checks = 0usize;
    let mut guard = 0usize;
    while associativity_checks < associativity_samples && guard < associativity_samples * 50 {
        guard += 1;
        let Some(a) = random_element(alg, rng) else { continue };
        let Some(b) = random_element(alg, rng) else { continue };
        let Some(m) = random_vector(module, rng) else { continue };
        let lhs = module.act_elem(&alg.mul(&a, &b), &m)?;
        let rhs = module.act_elem(&a, &module.act_elem(&b, &m)?)?;
        associativity_checks += 1;
        if !module.eq(&lhs, &rhs) {
            failures.push("act(ab, m) != act(a, act(b, m))".to_string());
        }
    }

    Ok(RepresentationReport { relation_checks, associativity_checks, failures })
}

/// A random basis vector: a bounded backward extension of a shifted tail
/// of the base.
pub fn random_vector<F: Field, R: Rng>(
    module: &ChenModule<F>,
    rng: &mut R,
) -> Option<ModuleVector<F>> {
    let g = module.graph();
    let shift = rng.gen_range(0..=4usize);
    let mut word: Vec<EdgeId> = Vec::new();
    let len = rng.gen_range(0..=3usize);
    let mut target = g.source(module.base().letter(shift));
    for _ in 0..len {
        let candidates: Vec<EdgeId> = g
            .edge_ids()
            .filter(|e| g.range(*e).contains(target))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let e = candidates[rng.gen_range(0..candidates.len())];
        word.insert(0, e);
        target = g.source(e);
    }
    let residue = rng.gen_range(0..module.residue_dim().max(1));
    module.basis(PathWord::new(word), shift, residue).ok()
}

fn random_element<F: Field, R: Rng>(alg: &Lpa<F>, rng: &mut R) -> Option<LpaElem<F>> {
    let g = alg.graph();
    let mut out = LpaElem::zero();
    let terms = rng.gen_range(1..=2usize);
    for _ in 0..terms {
        let la = rng.gen_range(0..=2);
        let lb = rng.gen_range(0..=2);
        let alpha = crate::samples::random_path(rng, g, la)?;
        let beta = crate::samples::random_path(rng, g, lb)?;
        let mid = crate::samples::random_vertex_set(rng, g);
        let elem = alg.monomial(alpha, mid, beta).ok()?;
        let coeff = alg.field().from_i64(rng.gen_range(-3..=3));
        out = alg.add(&out, &alg.scale(&coeff, &elem));
    }
    Some(out)
}
