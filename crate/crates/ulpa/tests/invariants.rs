//! Property suites for the path category and the algebra.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ulpa::algebra::Lpa;
use ulpa::field::{Field, Rationals};
use ulpa::graph::{PathWord, Ultragraph, VertexSet};
use ulpa::path::{tail_equivalent, up_product, ShiftedTail, Ultrapath};
use ulpa::samples::{self, oracle};

/// Every ultrapath with word length at most 2 over the graph.
fn all_ultrapaths(g: &Ultragraph, max_len: usize) -> Vec<Ultrapath> {
    let mut words = vec![PathWord::empty()];
    let mut acc = vec![PathWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &acc {
            for e in g.edge_ids() {
                let ok = match w.last() {
                    None => true,
                    Some(last) => g.range(last).contains(g.source(e)),
                };
                if ok {
                    let mut ext = w.clone();
                    ext.push(e);
                    next.push(ext);
                }
            }
        }
        words.extend(next.iter().cloned());
        acc = next;
    }
    let mut out = Vec::new();
    for w in words {
        let eff: Vec<_> = match g.path_range(&w) {
            Some(r) => r.iter().collect(),
            None => g.vertices().collect(),
        };
        // All nonempty subsets of the effective range.
        let n = eff.len();
        for mask in 1u32..(1 << n) {
            let set: VertexSet = eff
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect();
            out.push(Ultrapath::new(g, w.clone(), set).unwrap());
        }
    }
    out
}

#[test]
fn up_product_associative_exhaustively() {
    // All ultrapaths of word length <= 2 over graphs with <= 3 edges.
    let graphs = [
        samples::fan_and_loop(),
        samples::two_petal_rose(),
        Ultragraph::new(
            &["u", "v", "w"],
            &[("a", "u", &["v", "w"]), ("b", "v", &["w"]), ("c", "w", &["u", "v"])],
        )
        .unwrap(),
    ];
    for g in graphs {
        let all = all_ultrapaths(&g, 2);
        for x in &all {
            for y in &all {
                let xy = up_product(&g, x, y);
                for z in &all {
                    let yz = up_product(&g, y, z);
                    let left = xy.as_ref().and_then(|p| up_product(&g, p, z));
                    let right = yz.as_ref().and_then(|p| up_product(&g, x, p));
                    if let (Some(l), Some(r)) = (&left, &right) {
                        assert_eq!(l, r, "bracketings disagree on {x:?}, {y:?}, {z:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn generalized_vertices_closure_matches_brute_force() {
    // Closure properties, plus agreement with the brute-force answer on
    // small graphs: with every singleton present, the closure is the full
    // power set minus the empty set.
    let mut rng = StdRng::seed_from_u64(200);
    for _ in 0..60 {
        let g = samples::random_ultragraph(&mut rng, 4, 6);
        let fam = g.generalized_vertices();
        for v in g.vertices() {
            assert!(fam.contains(&VertexSet::singleton(v)));
        }
        for e in g.edge_ids() {
            assert!(fam.contains(g.range(e)));
        }
        for a in &fam {
            for b in &fam {
                assert!(fam.contains(&a.union(b)));
                let i = a.intersect(b);
                assert!(i.is_empty() || fam.contains(&i));
            }
        }
        assert_eq!(fam.len(), (1usize << g.vertex_count()) - 1);
    }
}

#[test]
fn reaches_is_reflexive_transitive_and_matches_dp() {
    let mut rng = StdRng::seed_from_u64(201);
    for _ in 0..200 {
        let g = samples::random_ultragraph(&mut rng, 6, 8);
        for a in g.vertices() {
            assert!(g.reaches(a, a));
            for b in g.vertices() {
                assert_eq!(g.reaches(a, b), oracle::reaches_bounded(&g, a, b));
                for c in g.vertices() {
                    if g.reaches(a, b) && g.reaches(b, c) {
                        assert!(g.reaches(a, c));
                    }
                }
            }
        }
    }
}

#[test]
fn first_return_agrees_with_counting_oracle() {
    let mut rng = StdRng::seed_from_u64(202);
    for _ in 0..120 {
        let g = samples::random_ultragraph(&mut rng, 5, 8);
        for v in g.vertices() {
            let verdict = g.first_return(v);
            let class = oracle::first_return_class(&g, v);
            assert_eq!(oracle::verdict_class(&verdict), class, "at {}", g.vertex_name(v));
            // Witnesses must be genuine first-return paths.
            let witnesses: Vec<&PathWord> = match &verdict {
                ulpa::graph::FirstReturnVerdict::None => vec![],
                ulpa::graph::FirstReturnVerdict::ExactlyOne(w) => vec![w],
                ulpa::graph::FirstReturnVerdict::TwoOrMore(w1, w2) => {
                    assert_ne!(w1, w2);
                    vec![w1, w2]
                }
            };
            for w in witnesses {
                assert!(g.is_valid_path(w));
                assert!(g.is_cycle(w).unwrap());
                assert_eq!(g.path_source(w), Some(v));
                for e in w.iter().skip(1) {
                    assert_ne!(g.source(e), v);
                }
            }
        }
    }
}

#[test]
fn condition_k_agrees_with_oracle_on_random_graphs() {
    let mut rng = StdRng::seed_from_u64(203);
    for _ in 0..100 {
        let g = samples::random_ultragraph(&mut rng, 5, 8);
        let ck = ulpa::structure::condition_k(&g);
        let oracle_holds = g
            .vertices()
            .all(|v| oracle::first_return_class(&g, v) != oracle::LanguageClass::One);
        assert_eq!(ck.holds, oracle_holds);
    }
}

#[test]
fn tail_equivalence_is_an_equivalence_relation() {
    let mut rng = StdRng::seed_from_u64(204);
    let mut paths = Vec::new();
    let g = samples::random_sink_free(&mut rng, 4, 6);
    while paths.len() < 100 {
        if let Some(p) = samples::random_periodic_path(&mut rng, &g) {
            paths.push(p);
        }
    }
    for p in &paths {
        assert!(tail_equivalent(p, p).unwrap());
    }
    for p in &paths {
        for q in &paths {
            assert_eq!(tail_equivalent(p, q).unwrap(), tail_equivalent(q, p).unwrap());
            for r in &paths {
                if tail_equivalent(p, q).unwrap() && tail_equivalent(q, r).unwrap() {
                    assert!(tail_equivalent(p, r).unwrap());
                }
            }
        }
    }
}

#[test]
fn canonicalize_matches_realized_prefix_agreement() {
    // Two shifted tails over one base canonicalize equal iff their
    // realized paths agree on a long enough prefix.
    let mut rng = StdRng::seed_from_u64(205);
    let mut compared = 0;
    while compared < 300 {
        let g = samples::random_sink_free(&mut rng, 4, 6);
        let Some(base) = samples::random_periodic_path(&mut rng, &g) else { continue };
        let mut tails = Vec::new();
        for _ in 0..6 {
            let shift = rng.gen_range(0..5usize);
            let len = rng.gen_range(0..3usize);
            let mut word = Vec::new();
            let mut target = g.source(base.letter(shift));
            for _ in 0..len {
                let candidates: Vec<_> = g
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
            tails.push(ShiftedTail::new(PathWord::new(word), shift, base.clone()));
        }
        let period = base.cycle_word().unwrap().len();
        let pre = base.prefix_word().len();
        for s in &tails {
            for t in &tails {
                compared += 1;
                let cs = s.clone().canonicalize();
                let ct = t.clone().canonicalize();
                // Idempotence.
                assert_eq!(cs.clone().canonicalize(), cs);
                let horizon = s.word().len() + t.word().len() + 2 * (pre + 2 * period) + 8;
                let prefixes_equal =
                    (0..horizon).all(|i| s.letter(i) == t.letter(i));
                assert_eq!(cs == ct, prefixes_equal);
            }
        }
    }
}

#[test]
fn multiplication_is_associative_on_random_triples() {
    let mut rng = StdRng::seed_from_u64(206);
    let graphs = [samples::fan_and_loop(), samples::two_petal_rose(), samples::single_arrow()];
    let mut done = 0;
    while done < 200 {
        let g = &graphs[rng.gen_range(0..graphs.len())];
        let alg = Lpa::new(g.clone(), Rationals).unwrap();
        let a = samples::random_element(&mut rng, &alg, 3, 2);
        let b = samples::random_element(&mut rng, &alg, 3, 2);
        let c = samples::random_element(&mut rng, &alg, 3, 2);
        let left = alg.mul(&alg.mul(&a, &b), &c);
        let right = alg.mul(&a, &alg.mul(&b, &c));
        assert!(alg.eq(&left, &right));
        done += 1;
    }
}

#[test]
fn grading_adds_under_multiplication() {
    let mut rng = StdRng::seed_from_u64(207);
    let graphs = [samples::fan_and_loop(), samples::two_petal_rose()];
    let mut done = 0;
    while done < 200 {
        let g = &graphs[rng.gen_range(0..graphs.len())];
        let alg = Lpa::new(g.clone(), Rationals).unwrap();
        let Some(x) = samples::random_homogeneous(&mut rng, &alg, 2, 2) else { continue };
        let Some(y) = samples::random_homogeneous(&mut rng, &alg, 2, 2) else { continue };
        let dx = alg.degree_components(&x).into_keys().next().unwrap();
        let dy = alg.degree_components(&y).into_keys().next().unwrap();
        let xy = alg.mul(&x, &y);
        if alg.is_zero(&xy) {
            continue;
        }
        let degrees: Vec<i64> = alg.degree_components(&xy).into_keys().collect();
        assert_eq!(degrees, vec![dx + dy]);
        done += 1;
    }
}

#[test]
fn component_degrees_convolve() {
    // degree_components of a product match the convolution of the factor
    // component degrees.
    let mut rng = StdRng::seed_from_u64(208);
    let g = samples::fan_and_loop();
    let alg = Lpa::new(g, Rationals).unwrap();
    for _ in 0..100 {
        let a = samples::random_element(&mut rng, &alg, 3, 2);
        let b = samples::random_element(&mut rng, &alg, 3, 2);
        let prod = alg.mul(&a, &b);
        let comps = alg.degree_components(&prod);
        // Reassembly.
        let mut back = ulpa::algebra::LpaElem::zero();
        for c in comps.values() {
            back = alg.add(&back, c);
        }
        assert!(alg.eq(&back, &prod));
        // Each product component is the sum over degree splits.
        for (n, comp) in &comps {
            let mut acc = ulpa::algebra::LpaElem::zero();
            for (da, ca) in alg.degree_components(&a) {
                let db = n - da;
                let cb = alg.graded_component(&b, db);
                acc = alg.add(&acc, &alg.mul(&ca, &cb));
            }
            assert!(alg.eq(comp, &acc));
        }
    }
}

#[test]
fn involution_is_an_antimultiplicative_involution() {
    let mut rng = StdRng::seed_from_u64(209);
    let g = samples::two_petal_rose();
    let alg = Lpa::new(g, Rationals).unwrap();
    for _ in 0..100 {
        let a = samples::random_element(&mut rng, &alg, 3, 2);
        let b = samples::random_element(&mut rng, &alg, 3, 2);
        assert!(alg.eq(&alg.involution(&alg.involution(&a)), &a));
        let lhs = alg.involution(&alg.mul(&a, &b));
        let rhs = alg.mul(&alg.involution(&b), &alg.involution(&a));
        assert!(alg.eq(&lhs, &rhs));
        let sum = alg.involution(&alg.add(&a, &b));
        assert!(alg.eq(&sum, &alg.add(&alg.involution(&a), &alg.involution(&b))));
    }
}

#[test]
fn unit_is_two_sided_identity_on_random_elements() {
    let mut rng = StdRng::seed_from_u64(210);
    for _ in 0..20 {
        let g = samples::random_ultragraph(&mut rng, 5, 6);
        let alg = Lpa::new(g, Rationals).unwrap();
        let unit = alg.unit();
        for _ in 0..10 {
            let a = samples::random_element(&mut rng, &alg, 3, 2);
            assert!(alg.eq(&alg.mul(&unit, &a), &a));
            assert!(alg.eq(&alg.mul(&a, &unit), &a));
        }
    }
}

#[test]
fn relation_suite_on_random_graphs() {
    let mut rng = StdRng::seed_from_u64(211);
    for _ in 0..25 {
        let g = samples::random_ultragraph(&mut rng, 5, 8);
        let alg = Lpa::new(g.clone(), Rationals).unwrap();
        // Sampled generalized vertices (the family can be exponential).
        let fam = g.generalized_vertices();
        let sample: Vec<&VertexSet> = fam.iter().take(6).collect();
        for a in &sample {
            for b in &sample {
                let lhs = alg.mul(&alg.p(a), &alg.p(b));
                assert!(alg.eq(&lhs, &alg.p(&a.intersect(b))));
                let union = alg.p(&a.union(b));
                let rhs = alg.sub(&alg.add(&alg.p(a), &alg.p(b)), &alg.p(&a.intersect(b)));
                assert!(alg.eq(&union, &rhs));
            }
        }
        for e in g.edge_ids() {
            let se = alg.s(e);
            let sse = alg.s_star(e);
            assert!(alg.eq(&alg.mul(&alg.p_vertex(g.source(e)), &se), &se));
            assert!(alg.eq(&alg.mul(&se, &alg.p(g.range(e))), &se));
            assert!(alg.eq(&alg.mul(&alg.p(g.range(e)), &sse), &sse));
            assert!(alg.eq(&alg.mul(&sse, &alg.p_vertex(g.source(e))), &sse));
            for f in g.edge_ids() {
                let prod = alg.mul(&alg.s_star(e), &alg.s(f));
                if e == f {
                    assert!(alg.eq(&prod, &alg.p(g.range(e))));
                } else {
                    assert!(alg.is_zero(&prod));
                }
            }
        }
        for v in g.regular_vertices().iter() {
            let mut sum = ulpa::algebra::LpaElem::zero();
            for &e in g.out_edges(v) {
                sum = alg.add(&sum, &alg.mul(&alg.s(e), &alg.s_star(e)));
            }
            assert!(alg.eq(&alg.p_vertex(v), &sum));
        }
    }
}

#[test]
fn inner_inverse_witnesses_verify() {
    let mut rng = StdRng::seed_from_u64(212);
    let graphs = [samples::fan_and_loop(), samples::two_petal_rose()];
    let mut found = 0;
    while found < 30 {
        let g = &graphs[rng.gen_range(0..graphs.len())];
        let alg = Lpa::new(g.clone(), Rationals).unwrap();
        let Some(x) = samples::random_homogeneous(&mut rng, &alg, 2, 2) else { continue };
        match alg.inner_inverse(&x, 4) {
            Ok(y) => {
                found += 1;
                let xyx = alg.mul(&alg.mul(&x, &y), &x);
                assert!(alg.eq(&xyx, &x));
                // The witness is homogeneous of opposite degree when nonzero.
                if !alg.is_zero(&y) {
                    let dx = alg.degree_components(&x).into_keys().next().unwrap();
                    let dy: Vec<i64> = alg.degree_components(&y).into_keys().collect();
                    assert_eq!(dy, vec![-dx]);
                }
            }
            Err(e) => panic!("inner inverse not found: {e}"),
        }
    }
}

#[test]
fn strongly_graded_verdicts_track_sinks_and_pass_bounded_check() {
    let mut rng = StdRng::seed_from_u64(213);
    for _ in 0..60 {
        let g = samples::random_ultragraph(&mut rng, 4, 6);
        match ulpa::structure::strongly_graded(&g) {
            ulpa::structure::StrongGradingVerdict::Holds { infinite_emitters } => {
                assert!(g.is_sink_free());
                assert_eq!(infinite_emitters, 0);
                let report =
                    ulpa::structure::bounded_condition2(&g, 6, 2 * g.edge_count() + 2);
                assert!(report.passed(), "failures: {:?}", report.failures);
            }
            ulpa::structure::StrongGradingVerdict::NotApplicableSinks => {
                assert!(!g.is_sink_free());
            }
        }
    }
}

#[test]
fn simplicity_never_true_when_condition_k_fails() {
    let mut rng = StdRng::seed_from_u64(214);
    for _ in 0..80 {
        let g = samples::random_ultragraph(&mut rng, 5, 7);
        let verdict = ulpa::structure::simplicity_sufficient(&g);
        if matches!(verdict, ulpa::structure::SimplicityVerdict::Simple { .. }) {
            assert!(ulpa::structure::condition_k(&g).holds);
        }
    }
}

#[test]
fn prime_field_relation_suite() {
    // The algebra over a prime field satisfies the same relations.
    use ulpa::field::PrimeField;
    let field = PrimeField::new(7).unwrap();
    let g = samples::fan_and_loop();
    let alg = Lpa::new(g.clone(), field).unwrap();
    for v in g.regular_vertices().iter() {
        let mut sum = ulpa::algebra::LpaElem::zero();
        for &e in g.out_edges(v) {
            sum = alg.add(&sum, &alg.mul(&alg.s(e), &alg.s_star(e)));
        }
        assert!(alg.eq(&alg.p_vertex(v), &sum));
    }
    let e = g.edge_by_name("e").unwrap();
    let x = alg.scale(&field.from_i64(3), &alg.s(e));
    let y = alg.inner_inverse(&x, 2).unwrap();
    assert!(alg.eq(&alg.mul(&alg.mul(&x, &y), &x), &x));
}
