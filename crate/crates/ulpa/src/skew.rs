//! Skew-product ultragraphs and the smash product of the algebra with
//! the integers.
//!
//! The skew product duplicates each vertex at every integer level and
//! sends an edge at level `n` to range copies at level `n - 1` (the
//! default; the opposite step is accepted via [`LevelStep`] but never
//! mixed). The infinite object is truncated to a window of levels; checks
//! against the smash product restrict to relation instances away from the
//! boundary and report what was skipped.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, Lpa, LpaElem, Monomial};
use crate::field::Field;
use crate::graph::{EdgeId, Ultragraph, VertexId, VertexSet};

/// Direction of the level shift applied to edge ranges.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum LevelStep {
    /// `r((e, n))` lives at level `n - 1`.
    #[default]
    Decrease,
    /// `r((e, n))` lives at level `n + 1`.
    Increase,
}

impl LevelStep {
    fn apply(self, n: i64) -> i64 {
        match self {
            LevelStep::Decrease => n - 1,
            LevelStep::Increase => n + 1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SkewError {
    #[error("window radius must be at least 1")]
    RadiusTooSmall,
    #[error("algebra error: {0}")]
    Algebra(#[from] AlgebraError),
}

/// A finite window of the skew-product ultragraph: vertices `(v, n)` for
/// `|n| <= radius`, edges `(e, n)` whenever both the source and the range
/// level fit inside the window.
#[derive(Clone, Debug)]
pub struct SkewWindow {
    radius: i64,
    step: LevelStep,
    base: Ultragraph,
    graph: Ultragraph,
    vertex_level: BTreeMap<(VertexId, i64), VertexId>,
    edge_level: BTreeMap<(EdgeId, i64), EdgeId>,
}

/// Build the window. Level-decorated names are `v@n` and `e@n`.
pub fn build_skew(base: &Ultragraph, radius: i64, step: LevelStep) -> Result<SkewWindow, SkewError> {
    if radius < 1 {
        return Err(SkewError::RadiusTooSmall);
    }
    let mut vertex_level = BTreeMap::new();
    let mut vertex_names = Vec::new();
    for n in -radius..=radius {
        for v in base.vertices() {
            let id = VertexId(vertex_names.len() as u32);
            vertex_names.push(format!("{}@{}", base.vertex_name(v), n));
            vertex_level.insert((v, n), id);
        }
    }
    let mut edge_level = BTreeMap::new();
    let mut edges = Vec::new();
    for n in -radius..=radius {
        let target = step.apply(n);
        if target.abs() > radius {
            continue;
        }
        for e in base.edge_ids() {
            let id = EdgeId(edges.len() as u32);
            let source = vertex_level[&(base.source(e), n)];
            let range: VertexSet = base
                .range(e)
                .iter()
                .map(|u| vertex_level[&(u, target)])
                .collect();
            edges.push((format!("{}@{}", base.edge_name(e), n), source, range));
            edge_level.insert((e, n), id);
        }
    }
    let graph = Ultragraph::from_parts(vertex_names, edges);
    debug_assert!(graph.validate().is_empty());
    Ok(SkewWindow { radius, step, base: base.clone(), graph, vertex_level, edge_level })
}

impl SkewWindow {
    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn step(&self) -> LevelStep {
        self.step
    }

    pub fn base(&self) -> &Ultragraph {
        &self.base
    }

    /// The generated window ultragraph.
    pub fn graph(&self) -> &Ultragraph {
        &self.graph
    }

    pub fn vertex_at(&self, v: VertexId, level: i64) -> Option<VertexId> {
        self.vertex_level.get(&(v, level)).copied()
    }

    pub fn edge_at(&self, e: EdgeId, level: i64) -> Option<EdgeId> {
        self.edge_level.get(&(e, level)).copied()
    }

    /// Base pair of a window edge.
    pub fn edge_origin(&self, id: EdgeId) -> (EdgeId, i64) {
        self.edge_level
            .iter()
            .find(|(_, v)| **v == id)
            .map(|(k, _)| *k)
            .expect("window edge")
    }

    /// Base pair of a window vertex.
    pub fn vertex_origin(&self, id: VertexId) -> (VertexId, i64) {
        self.vertex_level
            .iter()
            .find(|(_, v)| **v == id)
            .map(|(k, _)| *k)
            .expect("window vertex")
    }

    /// Levels whose edges are fully inside the window.
    pub fn edge_levels(&self) -> Vec<i64> {
        (-self.radius..=self.radius)
            .filter(|n| self.step.apply(*n).abs() <= self.radius)
            .collect()
    }
}

/// Acyclicity of the window, established by topological sort (computed,
/// not assumed: the level strictly moves along every edge).
pub fn is_acyclic(w: &SkewWindow) -> bool {
    let g = w.graph();
    let mut indegree = vec![0usize; g.vertex_count()];
    for e in g.edge_ids() {
        for u in g.range(e).iter() {
            indegree[u.index()] += 1;
        }
    }
    let mut queue: Vec<VertexId> = g.vertices().filter(|v| indegree[v.index()] == 0).collect();
    let mut removed = 0usize;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &e in g.out_edges(v) {
            for u in g.range(e).iter() {
                indegree[u.index()] -= 1;
                if indegree[u.index()] == 0 {
                    queue.push(u);
                }
            }
        }
    }
    removed == g.vertex_count()
}

/// An element of the smash product: a finitely supported mapping from
/// `(monomial, level)` to scalars, denoting `sum r^(n) p_n`. The monomial
/// component at a level is unrestricted in degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmashElem<F: Field> {
    terms: BTreeMap<(Monomial, i64), F::Elem>,
}

impl<F: Field> SmashElem<F> {
    pub fn zero() -> Self {
        SmashElem { terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, i64), &F::Elem)> {
        self.terms.iter()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Group the terms by level.
    pub fn components(&self) -> BTreeMap<i64, LpaElem<F>> {
        let mut out: BTreeMap<i64, BTreeMap<Monomial, F::Elem>> = BTreeMap::new();
        for ((m, n), c) in &self.terms {
            out.entry(*n).or_default().insert(m.clone(), c.clone());
        }
        out.into_iter().map(|(n, map)| (n, LpaElem::from_raw(map))).collect()
    }
}

/// Operations on smash-product elements over the base algebra.
pub struct Smash<'a, F: Field> {
    alg: &'a Lpa<F>,
}

impl<'a, F: Field> Smash<'a, F> {
    pub fn new(alg: &'a Lpa<F>) -> Self {
        Smash { alg }
    }

    pub fn algebra(&self) -> &'a Lpa<F> {
        self.alg
    }

    pub fn from_parts(
        &self,
        parts: impl IntoIterator<Item = (LpaElem<F>, i64, F::Elem)>,
    ) -> SmashElem<F> {
        let field = self.alg.field();
        let mut out = SmashElem::zero();
        for (elem, level, coeff) in parts {
            for (m, c) in elem.terms() {
                merge(field, &mut out.terms, (m.clone(), level), field.mul(c, &coeff));
            }
        }
        out
    }

    /// `r p_n` with unit coefficient.
    pub fn at_level(&self, r: &LpaElem<F>, n: i64) -> SmashElem<F> {
        self.from_parts([(r.clone(), n, self.alg.field().one())])
    }

    pub fn add(&self, a: &SmashElem<F>, b: &SmashElem<F>) -> SmashElem<F> {
        let field = self.alg.field();
        let mut out = a.clone();
        for (k, c) in &b.terms {
            merge(field, &mut out.terms, k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self, a: &SmashElem<F>) -> SmashElem<F> {
        let field = self.alg.field();
        SmashElem {
            terms: a.terms.iter().map(|(k, c)| (k.clone(), field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, a: &SmashElem<F>, b: &SmashElem<F>) -> SmashElem<F> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: &F::Elem, a: &SmashElem<F>) -> SmashElem<F> {
        let field = self.alg.field();
        SmashElem {
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

    /// `(r p_m)(s p_n) = (r . s_{m-n}) p_n`: only the degree `m - n`
    /// component of the right term's ring part survives.
    pub fn mul(&self, a: &SmashElem<F>, b: &SmashElem<F>) -> SmashElem<F> {
        let field = self.alg.field();
        let mut out = SmashElem::zero();
        for ((m1, lv1), c1) in &a.terms {
            for ((m2, lv2), c2) in &b.terms {
                if m2.degree() != lv1 - lv2 {
                    continue;
                }
                if let Some(m) = self.alg.mono_mul(m1, m2) {
                    merge(field, &mut out.terms, (m, *lv2), field.mul(c1, c2));
                }
            }
        }
        out
    }

    /// Equality per level through the base algebra's normal form.
    pub fn eq(&self, a: &SmashElem<F>, b: &SmashElem<F>) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    pub fn is_zero(&self, a: &SmashElem<F>) -> bool {
        a.components().values().all(|c| self.alg.is_zero(c))
    }
}

fn merge<F: Field>(
    field: &F,
    terms: &mut BTreeMap<(Monomial, i64), F::Elem>,
    key: (Monomial, i64),
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

/// The generator images of the window algebra inside the smash product
/// (decrease convention): `p_{(v,n)} -> p_v p_n`, `s_{(e,n)} -> s_e
/// p_{n-1}`, `s*_{(e,n)} -> s*_e p_n`.
pub struct GeneratorMap<'a, F: Field> {
    window: &'a SkewWindow,
    smash: Smash<'a, F>,
}

impl<'a, F: Field> GeneratorMap<'a, F> {
    pub fn new(window: &'a SkewWindow, alg: &'a Lpa<F>) -> Self {
        assert_eq!(
            window.step(),
            LevelStep::Decrease,
            "the generator map is defined for the decreasing convention"
        );
        GeneratorMap { window, smash: Smash::new(alg) }
    }

    fn alg(&self) -> &'a Lpa<F> {
        self.smash.alg
    }

    /// Image of a window vertex-set projection.
    pub fn phi_p(&self, set: &VertexSet) -> SmashElem<F> {
        let parts: Vec<(LpaElem<F>, i64, F::Elem)> = set
            .iter()
            .map(|wv| {
                let (v, n) = self.window.vertex_origin(wv);
                (self.alg().p_vertex(v), n, self.alg().field().one())
            })
            .collect();
        self.smash.from_parts(parts)
    }

    /// Image of a window edge generator.
    pub fn phi_s(&self, we: EdgeId) -> SmashElem<F> {
        let (e, n) = self.window.edge_origin(we);
        self.smash.at_level(&self.alg().s(e), n - 1)
    }

    /// Image of a starred window edge generator.
    pub fn phi_s_star(&self, we: EdgeId) -> SmashElem<F> {
        let (e, n) = self.window.edge_origin(we);
        self.smash.at_level(&self.alg().s_star(e), n)
    }

    /// Image of a window monomial, composed generator by generator:
    /// `s_a1 .. s_an p_A s*_bm .. s*_b1` for `beta = b1 .. bm`.
    pub fn phi_monomial(&self, m: &Monomial) -> SmashElem<F> {
        let mut acc = self.phi_p(m.mid());
        for &we in m.alpha().as_slice().iter().rev() {
            acc = self.smash.mul(&self.phi_s(we), &acc);
        }
        for &we in m.beta().as_slice().iter().rev() {
            acc = self.smash.mul(&acc, &self.phi_s_star(we));
        }
        acc
    }

    pub fn phi_elem(&self, a: &LpaElem<F>) -> SmashElem<F> {
        let mut acc = SmashElem::zero();
        for (m, c) in a.terms() {
            let img = self.phi_monomial(m);
            acc = self.smash.add(&acc, &self.smash.scale(c, &img));
        }
        acc
    }
}

/// Outcome of the relation and multiplicativity suite for the generator
/// map on one window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiReport {
    pub relation_instances: usize,
    pub product_samples: usize,
    /// Boundary relation-(4) instances that were skipped, as `v@n` names.
    pub skipped_boundary: Vec<String>,
    pub failures: Vec<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check that the generator images satisfy every interior defining
/// relation of the window algebra, plus multiplicativity on sampled
/// window monomial pairs.
pub fn verify_phi<F: Field, R: Rng>(
    base_alg: &Lpa<F>,
    radius: i64,
    rng: &mut R,
    product_samples: usize,
) -> Result<PhiReport, SkewError> {
    let window = build_skew(base_alg.graph(), radius, LevelStep::Decrease)?;
    let wg = window.graph().clone();
    let walg = Lpa::new(wg.clone(), base_alg.field().clone())?;
    let map = GeneratorMap::new(&window, base_alg);
    let smash = Smash::new(base_alg);
    let mut relation_instances = 0usize;
    let mut failures = Vec::new();
    let check = |failures: &mut Vec<String>, count: &mut usize, name: String, ok: bool| {
        *count += 1;
        if !ok {
            failures.push(name);
        }
    };

    // Relation (1) on sampled window vertex sets (the full family is
    // exponential in the window size).
    for _ in 0..24 {
        let a = crate::samples::random_vertex_set(rng, &wg);
        let b = crate::samples::random_vertex_set(rng, &wg);
        let pa = map.phi_p(&a);
        let pb = map.phi_p(&b);
        let lhs = smash.mul(&pa, &pb);
        let rhs = map.phi_p(&a.intersect(&b));
        check(
            &mut failures,
            &mut relation_instances,
            "p_A p_B = p_(A cap B)".to_string(),
            smash.eq(&lhs, &rhs),
        );
        let union = map.phi_p(&a.union(&b));
        let sum = smash.sub(&smash.add(&pa, &pb), &rhs);
        check(
            &mut failures,
            &mut relation_instances,
            "p_(A cup B) = p_A + p_B - p_(A cap B)".to_string(),
            smash.eq(&union, &sum),
        );
    }

    // Relations (2) and (3) for every window edge (all instances are
    // interior: a window edge's source and range exist by construction).
    for we in wg.edge_ids() {
        let s = map.phi_s(we);
        let ss = map.phi_s_star(we);
        let p_src = map.phi_p(&VertexSet::singleton(wg.source(we)));
        let p_rng = map.phi_p(wg.range(we));
        let name = wg.edge_name(we).to_string();
        check(
            &mut failures,
            &mut relation_instances,
            format!("p_s s = s for {name}"),
            smash.eq(&smash.mul(&p_src, &s), &s),
        );
        check(
            &mut failures,
            &mut relation_instances,
            format!("s p_r = s for {name}"),
            smash.eq(&smash.mul(&s, &p_rng), &s),
        );
        check(
            &mut failures,
            &mut relation_instances,
            format!("p_r s* = s* for {name}"),
            smash.eq(&smash.mul(&p_rng, &ss), &ss),
        );
        check(
            &mut failures,
            &mut relation_instances,
            format!("s* p_s = s* for {name}"),
            smash.eq(&smash.mul(&ss, &p_src), &ss),
        );
        for wf in wg.edge_ids() {
            let prod = smash.mul(&map.phi_s_star(we), &map.phi_s(wf));
            let expected = if we == wf { p_rng.clone() } else { SmashElem::zero() };
            check(
                &mut failures,
                &mut relation_instances,
                format!("s*_{name} s_{} = delta p_r", wg.edge_name(wf)),
                smash.eq(&prod, &expected),
            );
        }
    }

    // Relation (4) at regular window vertices; base-regular vertices at
    // the outflow boundary level have no window out-edges and are skipped.
    let mut skipped_boundary = Vec::new();
    for wv in wg.vertices() {
        let (v, _n) = window.vertex_origin(wv);
        if wg.out_edges(wv).is_empty() {
            if !base_alg.graph().out_edges(v).is_empty() {
                skipped_boundary.push(wg.vertex_name(wv).to_string());
            }
            continue;
        }
        let lhs = map.phi_p(&VertexSet::singleton(wv));
        let mut rhs = SmashElem::zero();
        for &we in wg.out_edges(wv) {
            rhs = smash.add(&rhs, &smash.mul(&map.phi_s(we), &map.phi_s_star(we)));
        }
        check(
            &mut failures,
            &mut relation_instances,
            format!("CK relation at {}", wg.vertex_name(wv)),
            smash.eq(&lhs, &rhs),
        );
    }

    // Multiplicativity on sampled window monomials.
    let mut products_run = 0usize;
    let mut guard = 0usize;
    while products_run < product_samples && guard < product_samples * 50 {
        guard += 1;
        let Some(x) = random_window_monomial(rng, &walg) else { continue };
        let Some(y) = random_window_monomial(rng, &walg) else { continue };
        let xy = walg.mul(&x, &y);
        let lhs = map.phi_elem(&xy);
        let rhs = smash.mul(&map.phi_elem(&x), &map.phi_elem(&y));
        products_run += 1;
        if !smash.eq(&lhs, &rhs) {
            failures.push(format!("phi(xy) != phi(x)phi(y) for {x:?}, {y:?}"));
        }
    }

    Ok(PhiReport {
        relation_instances,
        product_samples: products_run,
        skipped_boundary,
        failures,
    })
}

fn random_window_monomial<F: Field, R: Rng>(rng: &mut R, walg: &Lpa<F>) -> Option<LpaElem<F>> {
    let g = walg.graph();
    let la = rng.gen_range(0..=2);
    let lb = rng.gen_range(0..=2);
    let alpha = crate::samples::random_path(rng, g, la)?;
    let beta = crate::samples::random_path(rng, g, lb)?;
    let mid = crate::samples::random_vertex_set(rng, g);
    let elem = walg.monomial(alpha, mid, beta).ok()?;
    if elem.is_structurally_zero() {
        None
    } else {
        Some(elem)
    }
}
