//! Sample graphs, random generators, and independent reference oracles.
//!
//! The fixtures here pin down the small graphs used across the test
//! suites and the documentation. The oracles are deliberately written
//! against different algorithms than the operations they check.

use rand::Rng;
use std::sync::Arc;

use crate::algebra::{Lpa, LpaElem};
use crate::field::Field;
use crate::graph::{EdgeId, PathWord, Ultragraph, VertexId, VertexSet};
use crate::groupoid::GroupoidPoint;
use crate::path::{InfinitePath, StreamRef};

/// Two vertices; `e` fans from `v` onto both, `f` loops at `w`.
pub fn fan_and_loop() -> Ultragraph {
    Ultragraph::new(&["v", "w"], &[("e", "v", &["v", "w"]), ("f", "w", &["w"])]).unwrap()
}

/// One vertex with a single loop `l`.
pub fn single_loop() -> Ultragraph {
    Ultragraph::new(&["v"], &[("l", "v", &["v"])]).unwrap()
}

/// One vertex with two loops `a`, `b` (a rose with two petals).
pub fn two_petal_rose() -> Ultragraph {
    Ultragraph::new(&["v"], &[("a", "v", &["v"]), ("b", "v", &["v"])]).unwrap()
}

/// Two vertices and one edge `v -> {w}`; `w` is a sink.
pub fn single_arrow() -> Ultragraph {
    Ultragraph::new(&["v", "w"], &[("e", "v", &["w"])]).unwrap()
}

/// The Thue-Morse sequence over two loop edges at a common vertex. The
/// sequence is aperiodic; the promise recorded on the stream is sound.
pub fn thue_morse_stream(g: &Ultragraph, a: EdgeId, b: EdgeId) -> InfinitePath {
    debug_assert_eq!(g.source(a), g.source(b));
    let name = format!("thue-morse({},{})", g.edge_name(a), g.edge_name(b));
    InfinitePath::stream(StreamRef::new(
        name,
        Arc::new(move |i: usize| if i.count_ones().is_multiple_of(2) { a } else { b }),
    ))
}

/// Thue-Morse shifted by `offset` letters; still aperiodic.
pub fn thue_morse_shifted(g: &Ultragraph, a: EdgeId, b: EdgeId, offset: usize) -> InfinitePath {
    debug_assert_eq!(g.source(a), g.source(b));
    let name = format!("thue-morse+{offset}({},{})", g.edge_name(a), g.edge_name(b));
    InfinitePath::stream(StreamRef::new(
        name,
        Arc::new(move |i: usize| if (i + offset).count_ones().is_multiple_of(2) { a } else { b }),
    ))
}

/// A random ultragraph with up to `max_v` vertices and `max_e` edges.
pub fn random_ultragraph<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> Ultragraph {
    let nv = rng.gen_range(1..=max_v);
    let ne = rng.gen_range(0..=max_e);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..ne {
        let source = VertexId(rng.gen_range(0..nv) as u32);
        let mut range = VertexSet::new();
        let size = rng.gen_range(1..=nv);
        while range.len() < size {
            range.insert(VertexId(rng.gen_range(0..nv) as u32));
        }
        edges.push((format!("e{i}"), source, range));
    }
    Ultragraph::from_parts(vertices, edges)
}

/// A random ultragraph without sinks: every vertex emits at least one edge.
pub fn random_sink_free<R: Rng>(rng: &mut R, max_v: usize, max_e: usize) -> Ultragraph {
    loop {
        let g = random_ultragraph(rng, max_v, max_e.max(max_v));
        if g.is_sink_free() && g.edge_count() <= max_e.max(max_v) {
            return g;
        }
        // Patch the sinks with loops instead of resampling forever.
        let sinks = g.sinks();
        if g.edge_count() + sinks.len() > max_e.max(max_v) {
            continue;
        }
        let mut edges: Vec<(String, VertexId, VertexSet)> = g
            .edge_ids()
            .map(|e| (g.edge_name(e).to_string(), g.source(e), g.range(e).clone()))
            .collect();
        for (i, v) in sinks.iter().enumerate() {
            edges.push((format!("loop{i}"), v, VertexSet::singleton(v)));
        }
        let vertices = g.vertices().map(|v| g.vertex_name(v).to_string()).collect();
        return Ultragraph::from_parts(vertices, edges);
    }
}

/// A uniformly random valid word of the exact length, if one exists.
pub fn random_path<R: Rng>(rng: &mut R, g: &Ultragraph, len: usize) -> Option<PathWord> {
    for _ in 0..64 {
        let mut word = Vec::new();
        let mut ok = true;
        for i in 0..len {
            let candidates: Vec<EdgeId> = if i == 0 {
                g.edge_ids().collect()
            } else {
                let prev: EdgeId = *word.last().unwrap();
                g.edge_ids()
                    .filter(|e| g.range(prev).contains(g.source(*e)))
                    .collect()
            };
            if candidates.is_empty() {
                ok = false;
                break;
            }
            word.push(candidates[rng.gen_range(0..candidates.len())]);
        }
        if ok {
            return Some(PathWord::new(word));
        }
    }
    None
}

/// A random nonempty vertex set.
pub fn random_vertex_set<R: Rng>(rng: &mut R, g: &Ultragraph) -> VertexSet {
    let nv = g.vertex_count();
    let size = rng.gen_range(1..=nv);
    let mut set = VertexSet::new();
    while set.len() < size {
        set.insert(VertexId(rng.gen_range(0..nv) as u32));
    }
    set
}

/// A random eventually periodic path: a cycle reached from a random start,
/// with a random slice of the approach as preperiod.
pub fn random_periodic_path<R: Rng>(rng: &mut R, g: &Ultragraph) -> Option<InfinitePath> {
    // Walk forward until a vertex repeats; the segment between the two
    // visits is a cycle.
    let start = VertexId(rng.gen_range(0..g.vertex_count()) as u32);
    let mut at = start;
    let mut visits: Vec<(VertexId, Option<EdgeId>)> = vec![(at, None)];
    for _ in 0..(g.vertex_count() * 2 + 2) {
        let outs = g.out_edges(at);
        if outs.is_empty() {
            return None;
        }
        let e = outs[rng.gen_range(0..outs.len())];
        let range: Vec<VertexId> = g.range(e).iter().collect();
        at = range[rng.gen_range(0..range.len())];
        visits.push((at, Some(e)));
        if let Some(pos) = visits[..visits.len() - 1].iter().position(|(v, _)| *v == at) {
            let prefix: Vec<EdgeId> = visits[1..=pos].iter().map(|(_, e)| e.unwrap()).collect();
            let cycle: Vec<EdgeId> =
                visits[pos + 1..].iter().map(|(_, e)| e.unwrap()).collect();
            let cut = rng.gen_range(0..=prefix.len());
            return InfinitePath::periodic(
                g,
                PathWord::new(prefix[prefix.len() - cut..].to_vec()),
                PathWord::new(cycle),
            )
            .ok();
        }
    }
    None
}

/// A random element: up to `max_terms` monomials with word lengths up to
/// `max_len` and small integer coefficients. May be the zero element.
pub fn random_element<F: Field, R: Rng>(
    rng: &mut R,
    alg: &Lpa<F>,
    max_terms: usize,
    max_len: usize,
) -> LpaElem<F> {
    let g = alg.graph();
    let mut out = LpaElem::zero();
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let la = rng.gen_range(0..=max_len);
        let lb = rng.gen_range(0..=max_len);
        let (Some(alpha), Some(beta)) = (random_path(rng, g, la), random_path(rng, g, lb)) else {
            continue;
        };
        let mid = random_vertex_set(rng, g);
        let Ok(elem) = alg.monomial(alpha, mid, beta) else { continue };
        let coeff = alg.field().from_i64(rng.gen_range(-3..=3));
        out = alg.add(&out, &alg.scale(&coeff, &elem));
    }
    out
}

/// A random nonzero homogeneous element of some degree, or `None` when
/// sampling failed to produce one.
pub fn random_homogeneous<F: Field, R: Rng>(
    rng: &mut R,
    alg: &Lpa<F>,
    max_terms: usize,
    max_len: usize,
) -> Option<LpaElem<F>> {
    let g = alg.graph();
    let degree = rng.gen_range(-(max_len as i64)..=max_len as i64);
    let mut out = LpaElem::zero();
    let terms = rng.gen_range(1..=max_terms);
    for _ in 0..terms {
        let extra = rng.gen_range(0..=max_len.saturating_sub(degree.unsigned_abs() as usize));
        let (la, lb) = if degree >= 0 {
            (extra + degree as usize, extra)
        } else {
            (extra, extra + (-degree) as usize)
        };
        let (Some(alpha), Some(beta)) = (random_path(rng, g, la), random_path(rng, g, lb)) else {
            continue;
        };
        let mid = random_vertex_set(rng, g);
        let Ok(elem) = alg.monomial(alpha, mid, beta) else { continue };
        let mut c = rng.gen_range(-3..=3i64);
        if c == 0 {
            c = 1;
        }
        out = alg.add(&out, &alg.scale(&alg.field().from_i64(c), &elem));
    }
    if alg.is_zero(&out) {
        None
    } else {
        Some(out)
    }
}

/// A random degree-`k` (`k >= 0`) groupoid point on a sink-free graph:
/// a shared periodic tail prepended by words whose lengths differ by `k`.
pub fn random_point<R: Rng>(rng: &mut R, g: &Ultragraph, k: i64) -> Option<GroupoidPoint> {
    debug_assert!(g.is_sink_free());
    if k < 0 {
        return None;
    }
    for _ in 0..32 {
        let j = rng.gen_range(0..=2usize);
        let start = VertexId(rng.gen_range(0..g.vertex_count()) as u32);
        let Some(mu) = periodic_from(rng, g, start) else { continue };
        let target = mu.source(g);
        let Some(x) = backward_word(rng, g, target, k as usize + j) else { continue };
        let Some(y) = backward_word(rng, g, target, j) else { continue };
        let (Ok(q), Ok(p)) = (mu.prepend(g, &x), mu.prepend(g, &y)) else { continue };
        if let Ok(pt) = GroupoidPoint::new(q, k, p) {
            return Some(pt);
        }
    }
    None
}

/// A random valid word of the exact length ending at an edge whose range
/// contains `target`.
fn backward_word<R: Rng>(
    rng: &mut R,
    g: &Ultragraph,
    target: VertexId,
    len: usize,
) -> Option<PathWord> {
    let mut word: Vec<EdgeId> = Vec::new();
    let mut tgt = target;
    for _ in 0..len {
        let candidates: Vec<EdgeId> = g
            .edge_ids()
            .filter(|e| g.range(*e).contains(tgt))
            .collect();
        if candidates.is_empty() {
            return None;
        }
        let e = candidates[rng.gen_range(0..candidates.len())];
        word.insert(0, e);
        tgt = g.source(e);
    }
    Some(PathWord::new(word))
}

/// A random eventually periodic path starting at the given vertex.
fn periodic_from<R: Rng>(rng: &mut R, g: &Ultragraph, start: VertexId) -> Option<InfinitePath> {
    let mut at = start;
    let mut visits: Vec<(VertexId, Option<EdgeId>)> = vec![(at, None)];
    for _ in 0..(g.vertex_count() * 2 + 2) {
        let outs = g.out_edges(at);
        if outs.is_empty() {
            return None;
        }
        let e = outs[rng.gen_range(0..outs.len())];
        let range: Vec<VertexId> = g.range(e).iter().collect();
        at = range[rng.gen_range(0..range.len())];
        visits.push((at, Some(e)));
        if let Some(pos) = visits[..visits.len() - 1].iter().position(|(v, _)| *v == at) {
            let prefix: Vec<EdgeId> = visits[1..=pos].iter().map(|(_, e)| e.unwrap()).collect();
            let cycle: Vec<EdgeId> = visits[pos + 1..].iter().map(|(_, e)| e.unwrap()).collect();
            return InfinitePath::periodic(g, PathWord::new(prefix), PathWord::new(cycle)).ok();
        }
    }
    None
}

/// Independent reference procedures, written against different algorithms
/// than the operations they check.
pub mod oracle {
    use super::*;
    use crate::graph::FirstReturnVerdict;

    /// Size class of a first-return language.
    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    pub enum LanguageClass {
        Zero,
        One,
        TwoPlus,
    }

    pub fn verdict_class(v: &FirstReturnVerdict) -> LanguageClass {
        match v {
            FirstReturnVerdict::None => LanguageClass::Zero,
            FirstReturnVerdict::ExactlyOne(_) => LanguageClass::One,
            FirstReturnVerdict::TwoOrMore(..) => LanguageClass::TwoPlus,
        }
    }

    /// Classify the first-return language at `v` by dynamic programming:
    /// count accepted walks of each length with saturating arithmetic, and
    /// use the pumping bound (an accepted walk of length in `(m, 2m]`
    /// exists iff the language is infinite, `m` the number of edges).
    pub fn first_return_class(g: &Ultragraph, v: VertexId) -> LanguageClass {
        let m = g.edge_count();
        if m == 0 {
            return LanguageClass::Zero;
        }
        let cap = |x: u64| x.min(2);
        // counts[e] = number of first-return prefixes of the current length
        // ending at edge e (saturated at 2).
        let mut counts: Vec<u64> = g
            .edge_ids()
            .map(|e| u64::from(g.source(e) == v))
            .collect();
        let accepting: Vec<bool> = g.edge_ids().map(|e| g.range(e).contains(v)).collect();
        let mut total = 0u64;
        let mut long_accepted = false;
        for len in 1..=(2 * m) {
            let accepted_now: u64 = counts
                .iter()
                .zip(&accepting)
                .filter(|(_, acc)| **acc)
                .map(|(c, _)| *c)
                .sum();
            total = cap(total + cap(accepted_now));
            if len > m && accepted_now > 0 {
                long_accepted = true;
            }
            let mut next = vec![0u64; m];
            for e in g.edge_ids() {
                if counts[e.index()] == 0 {
                    continue;
                }
                for f in g.edge_ids() {
                    if g.source(f) != v && g.range(e).contains(g.source(f)) {
                        next[f.index()] = cap(next[f.index()] + counts[e.index()]);
                    }
                }
            }
            counts = next;
        }
        if long_accepted {
            // An accepted walk longer than the state count pumps to
            // infinitely many.
            return LanguageClass::TwoPlus;
        }
        // Otherwise every accepted walk has length <= m and has been counted.
        match total {
            0 => LanguageClass::Zero,
            1 => LanguageClass::One,
            _ => LanguageClass::TwoPlus,
        }
    }

    /// Reachability by bounded-length dynamic programming: `w >= v` iff
    /// some path of length at most `|V| * |E|` witnesses it (or `w == v`).
    pub fn reaches_bounded(g: &Ultragraph, w: VertexId, v: VertexId) -> bool {
        if w == v {
            return true;
        }
        let bound = g.vertex_count() * g.edge_count();
        let mut at_step: Vec<bool> = g.vertices().map(|u| u == w).collect();
        for _ in 0..bound {
            let mut next = vec![false; g.vertex_count()];
            let mut hit = false;
            for u in g.vertices() {
                if !at_step[u.index()] {
                    continue;
                }
                for &e in g.out_edges(u) {
                    if g.range(e).contains(v) {
                        return true;
                    }
                    for t in g.range(e).iter() {
                        if !next[t.index()] {
                            next[t.index()] = true;
                            hit = true;
                        }
                    }
                }
            }
            if !hit {
                break;
            }
            at_step = next;
        }
        false
    }

    /// Brute-force minimal eventual period of an eventually periodic path,
    /// found by scanning realized letters.
    pub fn minimal_period(p: &InfinitePath, probe: usize) -> usize {
        let window: Vec<EdgeId> = (0..probe).map(|i| p.letter(i)).collect();
        'period: for d in 1..=probe / 3 {
            // Require periodicity with period d on the last two thirds.
            for i in probe / 3..probe - d {
                if window[i] != window[i + d] {
                    continue 'period;
                }
            }
            return d;
        }
        panic!("probe window too small for this path");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn fixtures_are_valid() {
        for g in [fan_and_loop(), single_loop(), two_petal_rose(), single_arrow()] {
            assert!(g.validate().is_empty());
        }
    }

    #[test]
    fn random_graphs_validate() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_ultragraph(&mut rng, 5, 8);
            assert!(g.validate().is_empty());
            let sf = random_sink_free(&mut rng, 4, 8);
            assert!(sf.validate().is_empty());
            assert!(sf.is_sink_free());
        }
    }

    #[test]
    fn random_periodic_paths_are_valid() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..50 {
            let g = random_sink_free(&mut rng, 4, 6);
            let p = random_periodic_path(&mut rng, &g).expect("sink-free graphs have cycles");
            p.validate_prefix(&g, 12).unwrap();
        }
    }

    #[test]
    fn oracle_agrees_on_fixtures() {
        use oracle::{first_return_class, LanguageClass};
        let g = single_loop();
        let v = g.vertex_by_name("v").unwrap();
        assert_eq!(first_return_class(&g, v), LanguageClass::One);
        let g = two_petal_rose();
        let v = g.vertex_by_name("v").unwrap();
        assert_eq!(first_return_class(&g, v), LanguageClass::TwoPlus);
        let g = single_arrow();
        let v = g.vertex_by_name("v").unwrap();
        assert_eq!(first_return_class(&g, v), LanguageClass::Zero);
    }
}
