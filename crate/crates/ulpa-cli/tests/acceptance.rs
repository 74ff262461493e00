//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`). All
//! arithmetic is exact; no tolerances anywhere.

use std::collections::BTreeMap;
use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ulpa::algebra::{Lpa, LpaElem};
use ulpa::field::{Field, Rationals};
use ulpa::graph::{PathWord, Ultragraph};
use ulpa::groupoid::{factor_positive, isotropy, pi_g, st_convolve, st_eq, IsotropyResult};
use ulpa::path::InfinitePath;
use ulpa::samples::{self, oracle};
use ulpa::structure;

fn rational_algebra(g: Ultragraph) -> Lpa<Rationals> {
    Lpa::new(g, Rationals).unwrap()
}

fn fixtures() -> [Ultragraph; 4] {
    [
        samples::fan_and_loop(),
        samples::single_loop(),
        samples::two_petal_rose(),
        samples::single_arrow(),
    ]
}

/// Criterion 1: every instance of the defining relations normalizes to
/// zero on the fixtures and 50 random ultragraphs.
#[test]
fn criterion_01_relation_suite() {
    let mut rng = StdRng::seed_from_u64(1001);
    let mut graphs: Vec<Ultragraph> = fixtures().to_vec();
    for _ in 0..50 {
        graphs.push(samples::random_ultragraph(&mut rng, 5, 8));
    }
    let mut instances = 0usize;
    for g in &graphs {
        let alg = rational_algebra(g.clone());
        let fam = g.generalized_vertices();
        for a in &fam {
            for b in &fam {
                let d1 = alg.sub(&alg.mul(&alg.p(a), &alg.p(b)), &alg.p(&a.intersect(b)));
                assert!(alg.is_zero(&d1));
                let d2 = alg.sub(
                    &alg.p(&a.union(b)),
                    &alg.sub(&alg.add(&alg.p(a), &alg.p(b)), &alg.p(&a.intersect(b))),
                );
                assert!(alg.is_zero(&d2));
                instances += 2;
            }
        }
        for e in g.edge_ids() {
            let se = alg.s(e);
            let sse = alg.s_star(e);
            let ps = alg.p_vertex(g.source(e));
            let pr = alg.p(g.range(e));
            for diff in [
                alg.sub(&alg.mul(&ps, &se), &se),
                alg.sub(&alg.mul(&se, &pr), &se),
                alg.sub(&alg.mul(&pr, &sse), &sse),
                alg.sub(&alg.mul(&sse, &ps), &sse),
            ] {
                assert!(alg.is_zero(&diff));
                instances += 1;
            }
            for f in g.edge_ids() {
                let prod = alg.mul(&alg.s_star(e), &alg.s(f));
                let expected = if e == f { pr.clone() } else { LpaElem::zero() };
                assert!(alg.is_zero(&alg.sub(&prod, &expected)));
                instances += 1;
            }
        }
        for v in g.regular_vertices().iter() {
            let mut sum = LpaElem::zero();
            for &e in g.out_edges(v) {
                sum = alg.add(&sum, &alg.mul(&alg.s(e), &alg.s_star(e)));
            }
            assert!(alg.is_zero(&alg.sub(&alg.p_vertex(v), &sum)));
            instances += 1;
        }
    }
    println!(
        "criterion 01 (relation suite): PASS - {} relation instances on {} graphs, all zero",
        instances,
        graphs.len()
    );
}

/// Criterion 2: the generator map intertwines multiplication with
/// convolution, and zero detection agrees, on 200+ random pairs over
/// sink-free samples.
#[test]
fn criterion_02_cross_model_isomorphism() {
    let mut rng = StdRng::seed_from_u64(1002);
    let mut graphs = vec![
        samples::fan_and_loop(),
        samples::single_loop(),
        samples::two_petal_rose(),
    ];
    graphs.push(samples::random_sink_free(&mut rng, 4, 6));
    graphs.push(samples::random_sink_free(&mut rng, 4, 6));
    let mut pairs = 0usize;
    while pairs < 200 {
        let g = &graphs[pairs % graphs.len()];
        let alg = rational_algebra(g.clone());
        let a = samples::random_element(&mut rng, &alg, 3, 3);
        let b = samples::random_element(&mut rng, &alg, 3, 3);
        let lhs = pi_g(&alg, &alg.mul(&a, &b)).unwrap();
        let rhs = st_convolve(&alg, &pi_g(&alg, &a).unwrap(), &pi_g(&alg, &b).unwrap()).unwrap();
        assert!(st_eq(&alg, &lhs, &rhs).unwrap());
        assert_eq!(alg.is_zero(&a), pi_g(&alg, &a).unwrap().is_zero());
        assert_eq!(alg.is_zero(&b), pi_g(&alg, &b).unwrap().is_zero());
        pairs += 1;
    }
    println!(
        "criterion 02 (cross-model isomorphism): PASS - {} pairs over {} sink-free graphs",
        pairs,
        graphs.len()
    );
}

/// Criterion 3: degree additivity on 200 homogeneous pairs and the
/// decomposition-reassembly identity on 200 elements.
#[test]
fn criterion_03_grading() {
    let mut rng = StdRng::seed_from_u64(1003);
    let graphs = [samples::fan_and_loop(), samples::two_petal_rose()];
    let mut additive = 0usize;
    while additive < 200 {
        let g = &graphs[additive % graphs.len()];
        let alg = rational_algebra(g.clone());
        let Some(x) = samples::random_homogeneous(&mut rng, &alg, 2, 2) else { continue };
        let Some(y) = samples::random_homogeneous(&mut rng, &alg, 2, 2) else { continue };
        let dx = alg.degree_components(&x).into_keys().next().unwrap();
        let dy = alg.degree_components(&y).into_keys().next().unwrap();
        let xy = alg.mul(&x, &y);
        if !alg.is_zero(&xy) {
            let degrees: Vec<i64> = alg.degree_components(&xy).into_keys().collect();
            assert_eq!(degrees, vec![dx + dy]);
        }
        additive += 1;
    }
    let mut reassembled = 0usize;
    while reassembled < 200 {
        let g = &graphs[reassembled % graphs.len()];
        let alg = rational_algebra(g.clone());
        let a = samples::random_element(&mut rng, &alg, 3, 3);
        let mut back = LpaElem::zero();
        for (_, comp) in alg.degree_components(&a) {
            back = alg.add(&back, &comp);
        }
        assert!(alg.eq(&back, &a));
        reassembled += 1;
    }
    println!(
        "criterion 03 (grading): PASS - {additive} homogeneous products, {reassembled} reassemblies"
    );
}

/// Criterion 4: isotropy groups match brute-force minimal periods on 50
/// periodic paths; promised-aperiodic streams are trivial.
#[test]
fn criterion_04_isotropy() {
    let mut rng = StdRng::seed_from_u64(1004);
    let mut periodic = 0usize;
    while periodic < 50 {
        let g = samples::random_sink_free(&mut rng, 4, 6);
        let Some(p) = samples::random_periodic_path(&mut rng, &g) else { continue };
        let probe = 3 * (p.prefix_word().len() + p.cycle_word().unwrap().len() + 4);
        let expected = oracle::minimal_period(&p, probe);
        assert_eq!(
            isotropy(&p),
            IsotropyResult::InfiniteCyclic { generator_degree: expected }
        );
        periodic += 1;
    }
    let rose = samples::two_petal_rose();
    let a = rose.edge_by_name("a").unwrap();
    let b = rose.edge_by_name("b").unwrap();
    let mut aperiodic = 0usize;
    for offset in 0..5 {
        let stream = samples::thue_morse_shifted(&rose, a, b, offset);
        assert_eq!(isotropy(&stream), IsotropyResult::Trivial);
        aperiodic += 1;
    }
    println!(
        "criterion 04 (isotropy): PASS - {periodic} periodic paths matched the brute-force period, {aperiodic} streams trivial"
    );
}

/// Criterion 5: inner inverses found and re-verified for 100 random
/// nonzero homogeneous elements on the fan and rose graphs within depth 4.
#[test]
fn criterion_05_graded_regularity() {
    let mut rng = StdRng::seed_from_u64(1005);
    let graphs = [samples::fan_and_loop(), samples::two_petal_rose()];
    let mut found = 0usize;
    while found < 100 {
        let g = &graphs[found % graphs.len()];
        let alg = rational_algebra(g.clone());
        let Some(x) = samples::random_homogeneous(&mut rng, &alg, 2, 2) else { continue };
        let y = alg
            .inner_inverse(&x, 4)
            .expect("graded regularity witness within depth 4");
        let xyx = alg.mul(&alg.mul(&x, &y), &x);
        assert!(alg.eq(&xyx, &x));
        found += 1;
    }
    println!("criterion 05 (graded regularity): PASS - {found} verified witnesses within depth 4");
}

/// Criterion 6: positive-degree points factor into degree-1 points that
/// recompose to the input, for 100 random points of degree up to 5.
#[test]
fn criterion_06_unperforation() {
    let mut rng = StdRng::seed_from_u64(1006);
    let mut graphs = vec![
        samples::fan_and_loop(),
        samples::single_loop(),
        samples::two_petal_rose(),
    ];
    for _ in 0..3 {
        graphs.push(samples::random_sink_free(&mut rng, 4, 6));
    }
    let mut checked = 0usize;
    while checked < 100 {
        let g = &graphs[checked % graphs.len()];
        let k = rng.gen_range(1..=5i64);
        let Some(pt) = samples::random_point(&mut rng, g, k) else { continue };
        let factors = factor_positive(&pt).unwrap();
        assert_eq!(factors.len(), k as usize);
        for f in &factors {
            assert_eq!(f.degree(), 1);
        }
        assert!(factors[0].range_path().equals(pt.range_path()).unwrap());
        assert!(factors
            .last()
            .unwrap()
            .source_path()
            .equals(pt.source_path())
            .unwrap());
        for pair in factors.windows(2) {
            assert!(pair[0].source_path().equals(pair[1].range_path()).unwrap());
        }
        checked += 1;
    }
    println!("criterion 06 (unperforation): PASS - {checked} factorizations recompose");
}

/// Criterion 7: the pinned simplicity verdicts on the fixtures and the
/// Condition (K) agreement with the counting oracle on 100 random graphs.
#[test]
fn criterion_07_condition_k_and_simplicity() {
    // Single loop: inconclusive by Condition (K).
    match structure::simplicity_sufficient(&samples::single_loop()) {
        structure::SimplicityVerdict::Inconclusive(failures) => {
            assert!(failures
                .iter()
                .all(|f| matches!(f, structure::SimplicityFailure::ConditionK { .. })));
        }
        other => panic!("single loop should be inconclusive, got {other:?}"),
    }
    // Rose: simple.
    assert!(matches!(
        structure::simplicity_sufficient(&samples::two_petal_rose()),
        structure::SimplicityVerdict::Simple { .. }
    ));
    // Fan graph: inconclusive with the condition-2 witness e^inf at w.
    let fan = samples::fan_and_loop();
    let e = fan.edge_by_name("e").unwrap();
    let w = fan.vertex_by_name("w").unwrap();
    match structure::simplicity_sufficient(&fan) {
        structure::SimplicityVerdict::Inconclusive(failures) => {
            let connectivity_witnessed = failures.iter().any(|f| match f {
                structure::SimplicityFailure::Connectivity { vertex, counterexample } => {
                    *vertex == w
                        && counterexample.prefix_word().is_empty()
                        && counterexample.cycle_word().map(|c| c.as_slice() == [e]) == Some(true)
                }
                _ => false,
            });
            assert!(connectivity_witnessed, "expected the e^inf witness at w");
        }
        other => panic!("fan graph should be inconclusive, got {other:?}"),
    }

    let mut rng = StdRng::seed_from_u64(1007);
    for _ in 0..100 {
        let g = samples::random_ultragraph(&mut rng, 5, 8);
        let ck = structure::condition_k(&g);
        let oracle_holds = g
            .vertices()
            .all(|v| oracle::first_return_class(&g, v) != oracle::LanguageClass::One);
        assert_eq!(ck.holds, oracle_holds);
        for (v, verdict) in &ck.verdicts {
            assert_eq!(oracle::verdict_class(verdict), oracle::first_return_class(&g, *v));
        }
    }
    println!(
        "criterion 07 (condition K and simplicity): PASS - fixture verdicts pinned, 100 random graphs agree with the oracle"
    );
}

/// Criterion 8: the strong-grading verdict holds exactly on sink-free
/// inputs, and the independent condition-2 checker confirms every verdict.
#[test]
fn criterion_08_strong_grading() {
    let mut rng = StdRng::seed_from_u64(1008);
    let mut holds = 0usize;
    let mut sinks = 0usize;
    for _ in 0..100 {
        let g = samples::random_ultragraph(&mut rng, 5, 8);
        match structure::strongly_graded(&g) {
            structure::StrongGradingVerdict::Holds { infinite_emitters } => {
                assert!(g.is_sink_free());
                assert_eq!(infinite_emitters, 0);
                let report = structure::bounded_condition2(&g, 6, 2 * g.edge_count() + 2);
                assert!(report.passed(), "failures: {:?}", report.failures);
                holds += 1;
            }
            structure::StrongGradingVerdict::NotApplicableSinks => {
                assert!(!g.is_sink_free());
                sinks += 1;
            }
        }
    }
    println!(
        "criterion 08 (strong grading): PASS - {holds} sink-free graphs confirmed by the bounded checker, {sinks} sinked graphs flagged"
    );
}

/// Criterion 9: the generator map into the smash product passes every
/// interior relation instance and 100 sampled interior products per
/// fixture at window radius 3, with every window acyclic.
#[test]
fn criterion_09_skew_smash() {
    let mut rng = StdRng::seed_from_u64(1009);
    let mut relations = 0usize;
    let mut products = 0usize;
    for g in [samples::fan_and_loop(), samples::single_loop(), samples::two_petal_rose()] {
        let alg = rational_algebra(g.clone());
        let report = ulpa::skew::verify_phi(&alg, 3, &mut rng, 100).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(report.product_samples >= 100);
        assert!(!report.skipped_boundary.is_empty());
        relations += report.relation_instances;
        products += report.product_samples;
        let window = ulpa::skew::build_skew(&g, 3, ulpa::skew::LevelStep::Decrease).unwrap();
        assert!(ulpa::skew::is_acyclic(&window));
    }
    for _ in 0..20 {
        let g = samples::random_ultragraph(&mut rng, 4, 6);
        let window = ulpa::skew::build_skew(&g, 2, ulpa::skew::LevelStep::Decrease).unwrap();
        assert!(ulpa::skew::is_acyclic(&window));
    }
    println!(
        "criterion 09 (skew/smash): PASS - {relations} interior relation instances, {products} interior products, all windows acyclic"
    );
}

/// Criterion 10: the module suites. The stream-based module on the rose
/// and the twisted modules over the loop tail of the fan graph satisfy
/// the relation operators and the representation property; the modulus
/// annihilates; the degree-one twist matches the untwisted module.
#[test]
fn criterion_10_chen_modules() {
    let mut rng = StdRng::seed_from_u64(1010);

    // V over an aperiodic stream base on the rose.
    let rose = samples::two_petal_rose();
    let a = rose.edge_by_name("a").unwrap();
    let b = rose.edge_by_name("b").unwrap();
    let stream = samples::thue_morse_stream(&rose, a, b);
    let module = ulpa::chen::ChenModule::new(rational_algebra(rose.clone()), stream).unwrap();
    let report = ulpa::chen::check_representation(&module, &mut rng, 10, 200).unwrap();
    assert!(report.passed(), "failures: {:?}", report.failures);
    assert!(report.associativity_checks >= 200);

    // Twisted modules over f^inf on the fan graph.
    let fan = samples::fan_and_loop();
    let fe = fan.edge_by_name("f").unwrap();
    let base = InfinitePath::periodic(&fan, PathWord::empty(), PathWord::new(vec![fe])).unwrap();
    let field = Rationals;
    let polys: Vec<(&str, Vec<_>)> = vec![
        ("t-1", vec![field.from_i64(-1), field.one()]),
        ("t-2", vec![field.from_i64(-2), field.one()]),
        ("t^2-t-1", vec![field.from_i64(-1), field.from_i64(-1), field.one()]),
    ];
    for (name, coeffs) in &polys {
        let poly = ulpa::chen::IrreduciblePoly::new(&field, coeffs.clone()).unwrap();
        let module = ulpa::chen::ChenModule::twisted(
            rational_algebra(fan.clone()),
            base.clone(),
            poly,
        )
        .unwrap();
        let report = ulpa::chen::check_representation(&module, &mut rng, 8, 70).unwrap();
        assert!(report.passed(), "{name} failures: {:?}", report.failures);
        // The modulus annihilates every sampled vector.
        for _ in 0..20 {
            let Some(m) = ulpa::chen::random_vector(&module, &mut rng) else { continue };
            assert!(module.poly_apply(coeffs, &m).unwrap().is_zero(), "{name}");
        }
    }

    // The t - 1 twist is the untwisted module: the key bijection
    // intertwines all generator actions on samples.
    let poly = ulpa::chen::IrreduciblePoly::new(&field, polys[0].1.clone()).unwrap();
    let twisted =
        ulpa::chen::ChenModule::twisted(rational_algebra(fan.clone()), base.clone(), poly).unwrap();
    let untwisted = ulpa::chen::ChenModule::new(rational_algebra(fan.clone()), base).unwrap();
    let mut intertwined = 0usize;
    for _ in 0..120 {
        let Some(m) = ulpa::chen::random_vector(&untwisted, &mut rng) else { continue };
        let elem = samples::random_element(&mut rng, untwisted.algebra(), 2, 2);
        let via_untwisted = untwisted.act_elem(&elem, &m).unwrap();
        // Transport m through the bijection (residue is always 0).
        let mt = transport(&twisted, &m);
        let via_twisted = twisted.act_elem(&elem, &mt).unwrap();
        assert_eq!(render_keys(&via_untwisted), render_keys(&via_twisted));
        intertwined += 1;
    }
    println!(
        "criterion 10 (modules): PASS - stream and twisted suites green, modulus annihilates, {intertwined} intertwining samples"
    );
}

fn transport(
    module: &ulpa::chen::ChenModule<Rationals>,
    m: &ulpa::chen::ModuleVector<Rationals>,
) -> ulpa::chen::ModuleVector<Rationals> {
    let mut out = ulpa::chen::ModuleVector::zero();
    for (key, coeff) in m.terms() {
        let basis = module
            .basis(key.tail().word().clone(), key.tail().shift(), 0)
            .expect("same base");
        out = module.add(&out, &module.scale(coeff, &basis));
    }
    out
}

fn render_keys(
    m: &ulpa::chen::ModuleVector<Rationals>,
) -> BTreeMap<(PathWord, usize), String> {
    m.terms()
        .map(|(k, c)| ((k.tail().word().clone(), k.tail().shift()), Rationals.render(c)))
        .collect()
}

/// Criterion 11: all commands produce byte-stable outputs matching the
/// golden files, and documents round-trip canonically.
#[test]
fn criterion_11_cli_goldens() {
    let data = |name: &str| {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/data")
            .join(name)
            .to_string_lossy()
            .into_owned()
    };
    let golden = |name: &str| -> String {
        std::fs::read_to_string(
            Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name),
        )
        .unwrap_or_else(|_| panic!("missing golden {name}"))
    };
    let cases: Vec<(&str, i32, Vec<String>)> = vec![
        ("analyze_fan_loop.txt", 0, vec!["analyze".into(), data("fan_loop.json")]),
        ("analyze_single_loop.txt", 0, vec!["analyze".into(), data("single_loop.json")]),
        ("analyze_two_petal_rose.txt", 0, vec!["analyze".into(), data("two_petal_rose.json")]),
        ("analyze_single_arrow.txt", 0, vec!["analyze".into(), data("single_arrow.json")]),
        (
            "analyze_fan_loop.json",
            0,
            vec!["analyze".into(), data("fan_loop.json"), "--json".into()],
        ),
        (
            "reduce_fan_loop.txt",
            0,
            vec![
                "reduce".into(),
                data("fan_loop.json"),
                "p{v} - s[e]*s*[e]".into(),
                "--cross-check".into(),
            ],
        ),
        (
            "eq_fan_loop.txt",
            0,
            vec![
                "eq".into(),
                data("fan_loop.json"),
                "s*[e]*s[e]".into(),
                "p{v,w}".into(),
                "--cross-check".into(),
            ],
        ),
        (
            "mul_fan_loop.txt",
            0,
            vec![
                "mul".into(),
                data("fan_loop.json"),
                "s[e]".into(),
                "s[f]".into(),
                "--cross-check".into(),
            ],
        ),
        ("skew_single_loop.txt", 0, vec!["skew".into(), data("single_loop.json"), "2".into()]),
        ("dot_fan_loop.txt", 0, vec!["dot".into(), data("fan_loop.json")]),
        (
            "module_act_fan_loop.txt",
            0,
            vec![
                "module-act".into(),
                data("fan_loop.json"),
                "s[e]+2*p{w}".into(),
                "--base".into(),
                "|f".into(),
            ],
        ),
        (
            "inner_inverse_rose.txt",
            0,
            vec![
                "inner-inverse".into(),
                data("two_petal_rose.json"),
                "s[a]+s[b]".into(),
                "--depth".into(),
                "3".into(),
            ],
        ),
        (
            "factor_rose.txt",
            0,
            vec![
                "factor".into(),
                data("two_petal_rose.json"),
                "a,b|a".into(),
                "2".into(),
                "|a".into(),
            ],
        ),
        (
            "groupoid_eval_fan_loop.txt",
            0,
            vec![
                "groupoid-eval".into(),
                data("fan_loop.json"),
                "2*s[e] - p{w}".into(),
                "e|f".into(),
                "1".into(),
                "|f".into(),
            ],
        ),
        (
            "error_depth_exhausted.txt",
            3,
            vec![
                "inner-inverse".into(),
                data("fan_loop.json"),
                "s[e]*p{v}*s*[e] + 2*s[e]*p{w}*s*[e]".into(),
                "--depth".into(),
                "0".into(),
            ],
        ),
    ];
    for (name, code, args) in &cases {
        let outcome = ulpa_cli::run_stable(args.clone());
        assert_eq!(outcome.code, *code, "{name}: {}", outcome.stderr);
        let observed = if *code == 0 { &outcome.stdout } else { &outcome.stderr };
        assert_eq!(observed, &golden(name), "golden mismatch for {name}");
    }
    // Canonical document round-trip on the fixtures.
    for name in ["fan_loop.json", "single_loop.json", "two_petal_rose.json", "single_arrow.json"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let doc = ulpa_cli::document::UltragraphDocument::parse(&text).unwrap();
        let canonical = doc.canonical_text();
        let again = ulpa_cli::document::UltragraphDocument::parse(&canonical).unwrap();
        assert_eq!(again.canonical_text(), canonical);
    }
    println!(
        "criterion 11 (CLI goldens): PASS - {} invocations byte-stable against goldens",
        cases.len()
    );
}
