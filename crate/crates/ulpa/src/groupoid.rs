//! The groupoid convolution model of the algebra.
//!
//! Arrows shift tails of infinite paths: `(x.mu, |x|-|y|, y.mu)` for
//! ultrapaths `x, y` with a common range. Basic compact open bisections
//! ("cylinders") `A(x,y)` support indicator functions whose convolution
//! algebra mirrors the path algebra; the generator map sends
//! `s_alpha p_A s_beta*` to the indicator of `A((alpha,A),(beta,A))`.
//! Everything here requires a sink-free graph, where every cylinder splits
//! exactly along one-step edge extensions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{Lpa, LpaElem, Monomial};
use crate::field::Field;
use crate::graph::{EdgeId, PathError, Ultragraph, VertexSet};
use crate::path::{tails_equal_with_offset, InfinitePath, Ultrapath};

/// A basic compact open bisection `A(x, y)`: the arrows from `y.mu` to
/// `x.mu` over all compatible tails `mu`.
///
/// Invariant: `x` and `y` share the same (nonempty) range set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Cylinder {
    x: Ultrapath,
    y: Ultrapath,
}

impl Cylinder {
    pub fn new(x: Ultrapath, y: Ultrapath) -> Result<Self, GroupoidError> {
        if x.range() != y.range() {
            return Err(GroupoidError::RangeMismatch);
        }
        Ok(Cylinder { x, y })
    }

    /// The diagonal cylinder `A(x, x)`.
    pub fn diagonal(x: Ultrapath) -> Self {
        Cylinder { y: x.clone(), x }
    }

    pub fn x(&self) -> &Ultrapath {
        &self.x
    }

    pub fn y(&self) -> &Ultrapath {
        &self.y
    }

    /// Shared range set.
    pub fn range(&self) -> &VertexSet {
        self.x.range()
    }

    /// Value of the grading functor on every arrow of this cylinder.
    pub fn degree(&self) -> i64 {
        self.x.len() as i64 - self.y.len() as i64
    }

    pub fn inverse(&self) -> Cylinder {
        Cylinder { x: self.y.clone(), y: self.x.clone() }
    }

    fn min_len(&self) -> usize {
        self.x.len().min(self.y.len())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum GroupoidError {
    #[error("cylinder legs must share one range set")]
    RangeMismatch,
    #[error("the groupoid model requires a sink-free ultragraph (found sink {0})")]
    SinkedGraph(String),
    #[error("exclusion edges must be emitted by the shared range")]
    BadExclusion,
    #[error("not a groupoid point: tails never meet at the stated degree")]
    InvalidPoint,
    #[error("degree must be positive")]
    NonPositiveDegree,
    #[error("path error: {0}")]
    Path(#[from] PathError),
}

pub fn ensure_sink_free(g: &Ultragraph) -> Result<(), GroupoidError> {
    match g.sinks().iter().next() {
        None => Ok(()),
        Some(v) => Err(GroupoidError::SinkedGraph(g.vertex_name(v).to_string())),
    }
}

/// Compose two cylinders as bisections: `A(x,y) A(y',z)` is empty unless
/// the inner words are prefix-comparable, and is again a basic cylinder.
/// This mirrors monomial multiplication on the algebra side.
pub fn cyl_compose(g: &Ultragraph, c1: &Cylinder, c2: &Cylinder) -> Option<Cylinder> {
    let beta = c1.y.word();
    let gamma = c2.x.word();
    if beta.len() == gamma.len() {
        if beta != gamma {
            return None;
        }
        let shared = c1.range().intersect(c2.range());
        if shared.is_empty() {
            return None;
        }
        let x = c1.x.restrict(&shared)?;
        let y = c2.y.restrict(&shared)?;
        Some(Cylinder { x, y })
    } else if gamma.len() > beta.len() {
        if &gamma.as_slice()[..beta.len()] != beta.as_slice() {
            return None;
        }
        let w = gamma.suffix_from(beta.len());
        if !c1.range().contains(g.source(w.first().unwrap())) {
            return None;
        }
        let x = Ultrapath::new(g, c1.x.word().concat(&w), c2.range().clone())
            .expect("extension stays valid");
        Some(Cylinder { x, y: c2.y.clone() })
    } else {
        if &beta.as_slice()[..gamma.len()] != gamma.as_slice() {
            return None;
        }
        let w = beta.suffix_from(gamma.len());
        if !c2.range().contains(g.source(w.first().unwrap())) {
            return None;
        }
        let y = Ultrapath::new(g, c2.y.word().concat(&w), c1.range().clone())
            .expect("extension stays valid");
        Some(Cylinder { x: c1.x.clone(), y })
    }
}

/// A finitely supported combination of cylinders kept in canonical
/// disjoint form: singleton range sets, uniform word depth per degree
/// class. Mirrors the algebra normal form, so zero testing is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SteinbergElement<F: Field> {
    terms: BTreeMap<Cylinder, F::Elem>,
}

impl<F: Field> SteinbergElement<F> {
    pub fn zero() -> Self {
        SteinbergElement { terms: BTreeMap::new() }
    }

    /// Canonicalize a raw combination.
    pub fn from_terms(
        alg: &Lpa<F>,
        terms: impl IntoIterator<Item = (Cylinder, F::Elem)>,
    ) -> Result<Self, GroupoidError> {
        ensure_sink_free(alg.graph())?;
        let field = alg.field();
        let g = alg.graph();
        // Split shared ranges into singletons (a disjoint decomposition of
        // the arrow set).
        let mut split: Vec<(Cylinder, F::Elem)> = Vec::new();
        for (c, coeff) in terms {
            if field.is_zero(&coeff) {
                continue;
            }
            for v in c.range().iter() {
                let single = VertexSet::singleton(v);
                let x = c.x.restrict(&single).expect("singleton within range");
                let y = c.y.restrict(&single).expect("singleton within range");
                split.push((Cylinder { x, y }, coeff.clone()));
            }
        }
        let mut depth: BTreeMap<i64, usize> = BTreeMap::new();
        for (c, _) in &split {
            let d = depth.entry(c.degree()).or_insert(0);
            *d = (*d).max(c.min_len());
        }
        // One-step partition: A(x,y) = disjoint union over edges e from the
        // (singleton) range of A(x.e, y.e), with range r(e) re-split.
        let mut done: BTreeMap<Cylinder, F::Elem> = BTreeMap::new();
        let mut work = split;
        while let Some((c, coeff)) = work.pop() {
            if c.min_len() >= depth[&c.degree()] {
                merge_term(field, &mut done, c, coeff);
                continue;
            }
            let v = c.range().iter().next().expect("singleton range");
            for &e in g.out_edges(v) {
                for u in g.range(e).iter() {
                    let single = VertexSet::singleton(u);
                    let x = c
                        .x
                        .extend_edge(g, e)
                        .and_then(|p| p.restrict(&single))
                        .expect("one-step extension valid");
                    let y = c
                        .y
                        .extend_edge(g, e)
                        .and_then(|p| p.restrict(&single))
                        .expect("one-step extension valid");
                    work.push((Cylinder { x, y }, coeff.clone()));
                }
            }
        }
        Ok(SteinbergElement { terms: done })
    }

    pub fn indicator(alg: &Lpa<F>, c: Cylinder) -> Result<Self, GroupoidError> {
        Self::from_terms(alg, [(c, alg.field().one())])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Cylinder, &F::Elem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn merge_term<F: Field>(
    field: &F,
    terms: &mut BTreeMap<Cylinder, F::Elem>,
    c: Cylinder,
    coeff: F::Elem,
) {
    use std::collections::btree_map::Entry;
    if field.is_zero(&coeff) {
        return;
    }
    match terms.entry(c) {
        Entry::Vacant(slot) => {
            slot.insert(coeff);
        }
        Entry::Occupied(mut slot) => {
            let sum = field.add(slot.get(), &coeff);
            if field.is_zero(&sum) {
                slot.remove();
            } else {
                slot.insert(sum);
            }
        }
    }
}

pub fn st_add<F: Field>(
    alg: &Lpa<F>,
    a: &SteinbergElement<F>,
    b: &SteinbergElement<F>,
) -> Result<SteinbergElement<F>, GroupoidError> {
    SteinbergElement::from_terms(
        alg,
        a.terms
            .iter()
            .chain(b.terms.iter())
            .map(|(c, k)| (c.clone(), k.clone())),
    )
}

pub fn st_sub<F: Field>(
    alg: &Lpa<F>,
    a: &SteinbergElement<F>,
    b: &SteinbergElement<F>,
) -> Result<SteinbergElement<F>, GroupoidError> {
    SteinbergElement::from_terms(
        alg,
        a.terms
            .iter()
            .map(|(c, k)| (c.clone(), k.clone()))
            .chain(b.terms.iter().map(|(c, k)| (c.clone(), alg.field().neg(k)))),
    )
}

pub fn st_eq<F: Field>(
    alg: &Lpa<F>,
    a: &SteinbergElement<F>,
    b: &SteinbergElement<F>,
) -> Result<bool, GroupoidError> {
    Ok(st_sub(alg, a, b)?.is_zero())
}

/// Convolution: bilinear extension of bisection composition, followed by
/// re-canonicalization.
pub fn st_convolve<F: Field>(
    alg: &Lpa<F>,
    a: &SteinbergElement<F>,
    b: &SteinbergElement<F>,
) -> Result<SteinbergElement<F>, GroupoidError> {
    let g = alg.graph();
    let field = alg.field();
    let mut raw = Vec::new();
    for (c1, k1) in &a.terms {
        for (c2, k2) in &b.terms {
            if let Some(c) = cyl_compose(g, c1, c2) {
                raw.push((c, field.mul(k1, k2)));
            }
        }
    }
    SteinbergElement::from_terms(alg, raw)
}

/// A groupoid arrow `(q, k, p)`: the tails of `q` and `p` meet at offset
/// difference `k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GroupoidPoint {
    range_path: InfinitePath,
    degree: i64,
    source_path: InfinitePath,
}

impl GroupoidPoint {
    pub fn new(q: InfinitePath, k: i64, p: InfinitePath) -> Result<Self, GroupoidError> {
        if !tails_equal_with_offset(&q, &p, k)? {
            return Err(GroupoidError::InvalidPoint);
        }
        Ok(GroupoidPoint { range_path: q, degree: k, source_path: p })
    }

    pub fn range_path(&self) -> &InfinitePath {
        &self.range_path
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn source_path(&self) -> &InfinitePath {
        &self.source_path
    }
}

/// Does the arrow `pt` lie in the cylinder?
pub fn membership(
    g: &Ultragraph,
    c: &Cylinder,
    pt: &GroupoidPoint,
) -> Result<bool, PathError> {
    let la = c.x.len();
    let lb = c.y.len();
    if pt.degree != la as i64 - lb as i64 {
        return Ok(false);
    }
    if !pt.range_path.starts_with(c.x.word()) || !pt.source_path.starts_with(c.y.word()) {
        return Ok(false);
    }
    let tail = pt.range_path.tau_gt(la);
    if !tail.equals(&pt.source_path.tau_gt(lb))? {
        return Ok(false);
    }
    Ok(c.range().contains(tail.source(g)))
}

/// Evaluate the function at a groupoid point: the sum of coefficients of
/// the cylinders containing it (at most one in canonical disjoint form).
pub fn st_eval<F: Field>(
    alg: &Lpa<F>,
    f: &SteinbergElement<F>,
    pt: &GroupoidPoint,
) -> Result<F::Elem, PathError> {
    let field = alg.field();
    let mut acc = field.zero();
    for (c, k) in &f.terms {
        if membership(alg.graph(), c, pt)? {
            acc = field.add(&acc, k);
        }
    }
    Ok(acc)
}

/// The generator map from the algebra to the convolution model:
/// `s_alpha p_A s_beta*` goes to the indicator of `A((alpha,A),(beta,A))`,
/// extended linearly. Rejects graphs with sinks.
pub fn pi_g<F: Field>(alg: &Lpa<F>, a: &LpaElem<F>) -> Result<SteinbergElement<F>, GroupoidError> {
    ensure_sink_free(alg.graph())?;
    let g = alg.graph();
    let raw: Vec<(Cylinder, F::Elem)> = a
        .terms()
        .map(|(m, c)| (monomial_cylinder(g, m), c.clone()))
        .collect();
    SteinbergElement::from_terms(alg, raw)
}

/// The cylinder image of one monomial.
pub fn monomial_cylinder(g: &Ultragraph, m: &Monomial) -> Cylinder {
    let x = Ultrapath::new(g, m.alpha().clone(), m.mid().clone()).expect("monomial invariant");
    let y = Ultrapath::new(g, m.beta().clone(), m.mid().clone()).expect("monomial invariant");
    Cylinder { x, y }
}

/// Isotropy group of the unit at an infinite path: infinite cyclic with
/// generator degree the minimal eventual period for rational paths,
/// trivial for promised-aperiodic streams.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IsotropyResult {
    Trivial,
    InfiniteCyclic { generator_degree: usize },
}

pub fn isotropy(mu: &InfinitePath) -> IsotropyResult {
    match mu.cycle_word() {
        Some(c) => IsotropyResult::InfiniteCyclic { generator_degree: c.len() },
        None => IsotropyResult::Trivial,
    }
}

/// Factor a positive-degree arrow into degree-1 arrows whose composite is
/// the input: peel the range path one letter at a time.
pub fn factor_positive(pt: &GroupoidPoint) -> Result<Vec<GroupoidPoint>, GroupoidError> {
    let n = pt.degree;
    if n <= 0 {
        return Err(GroupoidError::NonPositiveDegree);
    }
    let n = n as usize;
    let mut out = Vec::with_capacity(n);
    for i in 1..n {
        out.push(GroupoidPoint::new(
            pt.range_path.tau_gt(i - 1),
            1,
            pt.range_path.tau_gt(i),
        )?);
    }
    out.push(GroupoidPoint::new(
        pt.range_path.tau_gt(n - 1),
        1,
        pt.source_path.clone(),
    )?);
    Ok(out)
}

/// `A(x, y, K, Q)`: the basic cylinder minus the one-step extensions along
/// `K` and the range restrictions along `Q`, expressed exactly as a finite
/// disjoint union of plain cylinders.
pub fn cyl_make(
    g: &Ultragraph,
    x: &Ultrapath,
    y: &Ultrapath,
    k: &BTreeSet<EdgeId>,
    q: &[VertexSet],
) -> Result<Vec<Cylinder>, GroupoidError> {
    ensure_sink_free(g)?;
    if x.range() != y.range() {
        return Err(GroupoidError::RangeMismatch);
    }
    let shared = x.range();
    for &e in k {
        if !shared.contains(g.source(e)) {
            return Err(GroupoidError::BadExclusion);
        }
    }
    if k.is_empty() && q.is_empty() {
        return Ok(vec![Cylinder { x: x.clone(), y: y.clone() }]);
    }
    let mut out = Vec::new();
    for v in shared.iter() {
        if q.iter().any(|c| c.contains(v)) {
            // Fully removed by a range restriction.
            continue;
        }
        let single = VertexSet::singleton(v);
        let xv = x.restrict(&single).expect("singleton within range");
        let yv = y.restrict(&single).expect("singleton within range");
        let excluded: Vec<EdgeId> = g
            .out_edges(v)
            .iter()
            .copied()
            .filter(|e| k.contains(e))
            .collect();
        if excluded.is_empty() {
            out.push(Cylinder { x: xv, y: yv });
        } else {
            // Expand one step and drop the excluded branches.
            for &e in g.out_edges(v) {
                if k.contains(&e) {
                    continue;
                }
                let xe = xv.extend_edge(g, e).expect("source in singleton range");
                let ye = yv.extend_edge(g, e).expect("source in singleton range");
                out.push(Cylinder { x: xe, y: ye });
            }
        }
    }
    Ok(out)
}
