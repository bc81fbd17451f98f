//! End-to-end acceptance gate: eleven numbered checks covering exact
//! generator sets, presentation identities, randomized battery suites, the
//! brute-force module oracle, scripted exit codes, and byte-determinism.
//! Each test prints one `PASS criterion N` line and enforces its own wall
//! budget.

use frobkit::algebra::{
    is_surjective, make_algebra, make_map, map_kernel, quotient_algebra, AlgebraMap,
    PresentedAlgebra,
};
use frobkit::config::EngineConfig;
use frobkit::field_poly::{MonomialOrder, PrimePoly};
use frobkit::finmod::{
    enumeration_rings, free_module, is_pure_finite, regular_module, tensor_map, FiniteModule,
    ModuleMap,
};
use frobkit::frobenius::{bracket_power, certify_f_finite, purity_witness, radu_andre_pushout};
use frobkit::groebner::{eliminate, ideal_equal, module_finiteness, FinitenessVerdict, Ideal};
use frobkit::linalg::FpMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

const ORD: MonomialOrder = MonomialOrder::GrevLex;

fn config() -> EngineConfig {
    EngineConfig::default()
}

fn scalars(p: u64) -> PresentedAlgebra {
    make_algebra(p, &[], &[]).unwrap()
}

fn unit_map(b: &PresentedAlgebra) -> AlgebraMap {
    make_map(&scalars(b.context().modulus()), b, vec![]).unwrap()
}

fn texts(polys: &[PrimePoly]) -> BTreeSet<String> {
    polys.iter().map(|g| g.to_text(&ORD)).collect()
}

fn within(budget_s: u64, started: Instant, label: &str) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(budget_s),
        "{label} exceeded its {budget_s}s budget: {elapsed:?}"
    );
}

#[test]
fn criterion_01_polynomial_ring_generators() {
    let cfg = config();
    for p in [2u64, 3, 5] {
        let started = Instant::now();
        let b = make_algebra(p, &["x"], &[]).unwrap();
        let verdict = certify_f_finite(&unit_map(&b), 1, &cfg).unwrap();
        let cert = verdict.certificate().expect("the polynomial ring is F-finite");
        let want: BTreeSet<String> = (0..p)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                k => format!("x^{k}"),
            })
            .collect();
        assert_eq!(texts(&cert.generators), want, "generator set at p={p}");
        within(1, started, &format!("p={p} generator computation"));
    }
    println!("PASS criterion 1: twist-1 generators are exactly {{1, x, .., x^(p-1)}} for p in {{2,3,5}}");
}

#[test]
fn criterion_02_quotient_kernel_is_the_bracket_power() {
    let started = Instant::now();
    let cfg = config();
    let gcfg = &cfg.groebner;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let pool = ["x", "y", "x^2", "x*y", "y^2", "x^3", "y^3"];

    let mut checked = 0u64;
    for trial in 0..10 {
        let p = [2u64, 3][trial % 2];
        let a = make_algebra(p, &["x", "y"], &[]).unwrap();

        // 1–2 random generators of degree <= 3 with random nonzero scalars.
        let n_gens = rng.gen_range(1..=2);
        let mut gens = Vec::new();
        for _ in 0..n_gens {
            let mut g = PrimePoly::zero(a.context());
            for t in pool {
                if rng.gen_bool(0.35) {
                    let c = rng.gen_range(1..p);
                    let term = a.parse(t).unwrap().mul(&PrimePoly::constant(a.context(), c)).unwrap();
                    g = g.add(&term).unwrap();
                }
            }
            if g.is_zero() {
                g = a.parse("x^2").unwrap();
            }
            gens.push(g);
        }
        let ideal = Ideal::new(a.context(), gens).unwrap();
        let (_, proj) = quotient_algebra(&a, &ideal, gcfg).unwrap();

        for e in [1u64, 2] {
            let pd = radu_andre_pushout(&proj, e, &cfg).unwrap();
            let n_b = proj.target().context().num_vars();
            let front: Vec<usize> = (0..n_b).collect();
            let source_only = eliminate(pd.pushout.relations(), &front, gcfg).unwrap();
            let positions: Vec<usize> = (0..a.context().num_vars()).collect();
            let lifted: Vec<PrimePoly> = source_only
                .generators()
                .iter()
                .map(|g| g.embed(a.context(), &positions).unwrap())
                .collect();
            let lifted = Ideal::new(a.context(), lifted).unwrap();
            let expected = bracket_power(&ideal, e).unwrap();
            assert!(
                ideal_equal(&lifted, &expected, &ORD, gcfg).unwrap(),
                "instance {trial} at p={p}, twist {e}: eliminated kernel differs from the bracket power"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 20, "10 instances at two twists each");
    within(10, started, "quotient identification sweep");
    println!("PASS criterion 2: pushout kernels of 10 seeded quotients equal bracket powers at e=1,2");
}

#[test]
fn criterion_03_localization_comparison_is_an_isomorphism() {
    let started = Instant::now();
    let cfg = config();
    let gcfg = &cfg.groebner;

    let instances: Vec<(PresentedAlgebra, &str, u64)> = vec![
        (make_algebra(2, &["x"], &[]).unwrap(), "x", 1),
        (make_algebra(2, &["x"], &[]).unwrap(), "x", 2),
        (make_algebra(3, &["x"], &[]).unwrap(), "x^2+1", 1),
        (make_algebra(2, &["x", "y"], &["x*y"]).unwrap(), "x", 1),
        (make_algebra(5, &["x"], &[]).unwrap(), "x", 1),
    ];
    let count = instances.len();

    for (a, f_text, e) in instances {
        let f = a.parse(f_text).unwrap();
        let (loc, to_loc) = frobkit::algebra::localize_principal(&a, &f, gcfg).unwrap();
        assert!(!loc.is_zero_ring(), "localization at {f_text} should be nonzero");
        let pd = radu_andre_pushout(&to_loc, e, &cfg).unwrap();
        assert!(
            is_surjective(&pd.phi, gcfg).unwrap(),
            "comparison map not surjective for localization at {f_text}, twist {e}"
        );
        // The eliminated kernel ideal always contains the source presentation's
        // relations; "kernel (0)" means every generator is zero in the source.
        let kernel = map_kernel(&pd.phi, gcfg).unwrap();
        for g in kernel.generators() {
            assert!(
                pd.phi.source().nf(g).unwrap().is_zero(),
                "comparison map has nonzero kernel for localization at {f_text}, twist {e}: {}",
                g.to_text(&ORD)
            );
        }
    }
    within(10, started, "localization sweep");
    println!("PASS criterion 3: comparison maps of {count} principal localizations are bijective (surjective, kernel (0))");
}

#[test]
fn criterion_04_transfer_battery_has_no_violations() {
    let started = Instant::now();
    let report = frobkit::lemma_suite::run_suite("lemma_2_2", 0, 600, &config()).unwrap();
    assert_eq!(report.violations, 0, "battery violations: {report:?}");
    let names: BTreeSet<&str> = report.scenarios.iter().map(|s| s.name.as_str()).collect();
    for expected in [
        "e_independence",
        "composition_finite",
        "right_factor_finite",
        "base_change_transport",
        "absolute_two_out_of_three",
    ] {
        assert!(names.contains(expected), "missing scenario {expected}");
    }
    let total: u64 = report.scenarios.iter().map(|s| s.instances).sum();
    assert!(total >= 50, "battery ran only {total} instances");
    within(60, started, "transfer battery");
    println!("PASS criterion 4: transfer battery clean over {total} instances");
}

#[test]
fn criterion_05_naturality_and_factorization() {
    let started = Instant::now();
    let report = frobkit::lemma_suite::run_suite("naturality", 0, 600, &config()).unwrap();
    assert_eq!(report.violations, 0, "naturality violations: {report:?}");
    assert_eq!(report.scenarios.len(), 2);
    for s in &report.scenarios {
        assert!(
            s.instances >= 50,
            "{} ran only {} instances (needs 50)",
            s.name,
            s.instances
        );
    }
    let total: u64 = report.scenarios.iter().map(|s| s.instances).sum();
    within(30, started, "naturality suite");
    println!("PASS criterion 5: naturality squares and twist factorization hold on {total} instances");
}

#[test]
fn criterion_06_nilpotent_and_finite_injective_implications() {
    let started = Instant::now();
    let cfg = config();
    let mut counts = Vec::new();
    for suite in ["nilpotent", "finite_injective"] {
        let report = frobkit::lemma_suite::run_suite(suite, 0, 600, &cfg).unwrap();
        assert_eq!(report.violations, 0, "{suite} violations: {report:?}");
        let total: u64 = report.scenarios.iter().map(|s| s.instances).sum();
        assert!(total >= 20, "{suite} ran only {total} instances (needs 20)");
        counts.push(total);
    }
    within(30, started, "implication suites");
    println!(
        "PASS criterion 6: nilpotent ({}) and finite-injective ({}) implication suites clean",
        counts[0], counts[1]
    );
}

#[test]
fn criterion_07_products_certify_and_projections_validate() {
    let started = Instant::now();
    let report = frobkit::lemma_suite::run_suite("products", 0, 600, &config()).unwrap();
    assert_eq!(report.violations, 0, "products violations: {report:?}");
    assert_eq!(report.scenarios.len(), 2);
    for s in &report.scenarios {
        assert!(s.instances >= 10, "{} ran only {} pairs (needs 10)", s.name, s.instances);
    }
    let product_factors = report
        .scenarios
        .iter()
        .find(|s| s.name == "product_factors")
        .expect("product_factors scenario");
    assert!(
        product_factors
            .notes
            .iter()
            .any(|n| n.contains("validated as homomorphisms")),
        "projection validation note missing: {:?}",
        product_factors.notes
    );
    within(30, started, "product suite");
    println!("PASS criterion 7: tensor and direct products certified; projections validate as homomorphisms");
}

#[test]
fn criterion_08_brute_force_descent_and_purity_cross_check() {
    let started = Instant::now();

    // Enumerated surjectivity-descent sweep over the four fixed local rings.
    let report = frobkit::finmod::verify_surjectivity_descent(600, 0).unwrap();
    assert!(report.instances >= 500, "only {} instances enumerated", report.instances);
    assert_eq!(report.violations, 0, "descent violations: {:?}", report.notes);

    // Purity-splitness cross-check: a split inclusion R -> R^2 must stay
    // injective after tensoring with every module in the enumeration library.
    for ring in enumeration_rings().unwrap() {
        let p = ring.context().modulus();
        let reg = regular_module(&ring).unwrap();
        let free2 = free_module(&ring, 2).unwrap();
        let d = reg.dim();
        let mut rows = vec![vec![0u64; d]; 2 * d];
        for (i, row) in rows.iter_mut().enumerate().take(d) {
            row[i] = 1;
        }
        let include = ModuleMap::new(&reg, &free2, FpMatrix::from_rows(p, &rows)).unwrap();
        assert!(is_pure_finite(&include), "a split inclusion must test pure");

        let library = [
            FiniteModule::zero(&ring),
            FiniteModule::trivial(&ring, 1).unwrap(),
            FiniteModule::trivial(&ring, 2).unwrap(),
            reg.clone(),
        ];
        for m in &library {
            let tensored = tensor_map(m, &include).unwrap();
            assert!(
                tensored.is_injective(),
                "pure map lost injectivity after tensoring over {}",
                ring.describe()
            );
        }
    }

    within(120, started, "brute-force module sweep");
    println!(
        "PASS criterion 8: {} enumerated instances clean; purity survives tensoring across the library",
        report.instances
    );
}

#[test]
fn criterion_09_main_theorem_instances() {
    let started = Instant::now();
    let cfg = config();
    let report = frobkit::lemma_suite::run_suite("main_theorem_instances", 0, 600, &cfg).unwrap();
    assert_eq!(report.violations, 0, "main-instance violations: {report:?}");
    let scenario = &report.scenarios[0];
    assert!(scenario.instances >= 5, "only {} instance triples ran", scenario.instances);
    assert!(
        scenario.notes.iter().any(|n| n.contains("maximal ideals extend properly")),
        "coverage note missing: {:?}",
        scenario.notes
    );

    // Re-verify one triple end to end through the public interface:
    // B = F_2[x]/(x^3+x+1), C = B[t], bound 2p.
    let b = make_algebra(2, &["x"], &["x^3+x+1"]).unwrap();
    let c = make_algebra(2, &["x", "t"], &["x^3+x+1"]).unwrap();
    let g = make_map(&b, &c, vec![c.var(0)]).unwrap();
    let pd = radu_andre_pushout(&g, 1, &cfg).unwrap();
    let outcome = purity_witness(&pd, 4, &cfg).unwrap();
    assert!(outcome.is_pure(), "polynomial extension should be pure at bound 2p");
    let gf = certify_f_finite(&unit_map(&c), 1, &cfg).unwrap();
    assert!(gf.is_finite(), "composite certificate must exist");
    let conclusion = certify_f_finite(&unit_map(&b), 1, &cfg).unwrap();
    assert!(conclusion.is_finite(), "conclusion certificate must validate");

    within(60, started, "main-theorem instances");
    println!(
        "PASS criterion 9: {} extension triples pure at bound 2p with validated conclusion certificates",
        scenario.instances
    );
}

#[test]
fn criterion_10_negative_control() {
    let started = Instant::now();
    let cfg = config();

    let a = make_algebra(2, &["t"], &[]).unwrap();
    let b = make_algebra(2, &["x", "y"], &[]).unwrap();
    let f = make_map(&a, &b, vec![b.var(0)]).unwrap();
    match module_finiteness(&f, &cfg.groebner).unwrap() {
        FinitenessVerdict::Infinite { witness_variable } => {
            assert_eq!(witness_variable, "y", "the unbounded direction must be y");
        }
        FinitenessVerdict::Finite(_) => panic!("t -> x cannot be module-finite"),
    }
    within(1, started, "negative-control verdict");

    // Scripted form: `--expect finite` must exit 1 on the Infinite verdict.
    let exe = env!("CARGO_BIN_EXE_frobkit");
    let program = "p=2; ring A = poly(t); ring B = poly(x,y); \
                   map f : A -> B = { t -> x }; ffinite f;";
    let mut child = Command::new(exe)
        .args(["run", "-", "--expect", "finite"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(program.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1), "stdout: {}", String::from_utf8_lossy(&out.stdout));
    println!("PASS criterion 10: infinite verdict in direction y; --expect finite exits 1");
}

#[test]
fn criterion_11_verification_reports_are_byte_identical() {
    let exe = env!("CARGO_BIN_EXE_frobkit");
    let run = || {
        Command::new(exe)
            .args(["verify", "all", "--seed", "0", "--json"])
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(second.status.code(), Some(0));
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout, "verification reports must be byte-identical");
    println!("PASS criterion 11: verify all --seed 0 --json is byte-identical across runs");
}
