//! Acceptance gate: nine criteria, one test and one pass/fail line each.
//! The tests serialize themselves on a mutex so every timing bound is
//! measured against the criterion's own work, and the heavyweight Morita
//! corpus is built once and shared.

use algebroid::algebra::{matrix_algebra, Algebra};
use algebroid::basechange::{
    base_change_algebroid, base_change_coefficient, canonical_coefficient, check_sayd,
    enveloping_total_iso, twisted_canonical_coefficient, BaseChange, ChangedCoefficient,
    Coefficient,
};
use algebroid::cyclic::{
    cyclic_cohomology, cyclic_homology, hochschild_cohomology, hochschild_homology,
    para_cocyclic_module, para_cyclic_module, ParaCyclicModule,
};
use algebroid::hopfalgebroid::{check_left_hopf, enveloping_hopf_algebroid, LeftHopfAlgebroid};
use algebroid::linalg::Matrix;
use algebroid::maps::{
    check_cocyclic_comparison, check_cyclic_comparison, cocyclic_comparison, cyclic_comparison,
    CyclicComparison,
};
use algebroid::morita::{matrix_context, MoritaContext};
use algebroid::{oracle, Error, Report};
use std::sync::{Arc, Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

/// Ambient cap generous enough for the three by three context in degree 3.
const LIMIT: usize = 200_000;

fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn assert_all_pass(report: &Report, what: &str) {
    for item in report.failures() {
        match &item.detail {
            Some(d) => eprintln!("{what}: FAIL {}: {d}", item.name),
            None => eprintln!("{what}: FAIL {}", item.name),
        }
    }
    assert!(report.all_pass(), "{what}: report has failures");
}

fn item_fails(report: &Report, name: &str) -> bool {
    report.items.iter().any(|i| i.name == name && !i.pass)
}

fn assert_within(start: Instant, bound: Duration, what: &str) {
    let took = start.elapsed();
    eprintln!("{what}: {took:?}");
    assert!(took < bound, "{what} took {took:?}, bound is {bound:?}");
}

/// The bases of the axiom corpus.
fn bases() -> Vec<(&'static str, Algebra)> {
    vec![
        ("rationals", Algebra::rationals()),
        ("dual numbers", Algebra::dual_numbers()),
        ("split pair", Algebra::split_pair()),
        ("two by two matrices", matrix_algebra(&Algebra::rationals(), 2)),
    ]
}

/// Everything the Morita criteria share for one context.
struct Prepared {
    name: &'static str,
    ctx: MoritaContext,
    env: Arc<LeftHopfAlgebroid>,
    coeff: Coefficient,
    bc: BaseChange,
    changed: ChangedCoefficient,
    source: ParaCyclicModule,
    target: ParaCyclicModule,
}

/// The base change corpus: matrix contexts of size 2 and 3 over the
/// rationals and size 2 over the dual numbers, with M = R throughout and
/// both chain complexes built through degree 3.
fn corpus() -> &'static [Prepared] {
    static CORPUS: OnceLock<Vec<Prepared>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let specs: [(&'static str, Algebra, usize); 3] = [
            ("matrix(rationals, 2)", Algebra::rationals(), 2),
            ("matrix(rationals, 3)", Algebra::rationals(), 3),
            ("matrix(dual numbers, 2)", Algebra::dual_numbers(), 2),
        ];
        specs
            .into_iter()
            .map(|(name, base, k)| {
                let r = Arc::new(base);
                let ctx = matrix_context(&r, k, LIMIT).unwrap();
                let env = Arc::new(enveloping_hopf_algebroid(&r, LIMIT).unwrap());
                let coeff = canonical_coefficient(&env, LIMIT).unwrap();
                let bc = base_change_algebroid(&ctx, &env, LIMIT).unwrap();
                let changed = base_change_coefficient(&bc, &coeff, LIMIT).unwrap();
                let source = para_cyclic_module(&coeff, 3, LIMIT).unwrap();
                let target = para_cyclic_module(&changed.coefficient, 3, LIMIT).unwrap();
                Prepared {
                    name,
                    ctx,
                    env,
                    coeff,
                    bc,
                    changed,
                    source,
                    target,
                }
            })
            .collect()
    })
}

fn homology_dims(pm: &ParaCyclicModule, cyclic: bool) -> Vec<usize> {
    (0..=2)
        .map(|n| {
            if cyclic {
                cyclic_homology(pm, n).unwrap()
            } else {
                hochschild_homology(pm, n).unwrap()
            }
        })
        .collect()
}

/// Criterion 1: the enveloping algebroid of each corpus base passes every
/// bialgebroid and left Hopf axiom exactly, within ten seconds.
#[test]
fn criterion_1_axiom_suite() {
    let _guard = serial();
    let start = Instant::now();
    for (name, base) in bases() {
        let r = Arc::new(base);
        let h = Arc::new(enveloping_hopf_algebroid(&r, LIMIT).unwrap());
        assert_all_pass(&check_left_hopf(&h), &format!("axioms over {name}"));
    }
    assert_within(start, Duration::from_secs(10), "criterion 1");
}

/// Criterion 2: each corpus base change yields a full left Hopf algebroid
/// and an exact algebra isomorphism onto the enveloping algebra of the new
/// base, within sixty seconds; an undersized cap fails cleanly.
#[test]
fn criterion_2_base_change_soundness() {
    let _guard = serial();
    let start = Instant::now();
    for p in corpus() {
        assert_all_pass(
            &check_left_hopf(&p.bc.hopf),
            &format!("changed axioms for {}", p.name),
        );
        enveloping_total_iso(&p.bc)
            .unwrap_or_else(|e| panic!("total iso for {}: {e}", p.name));
    }
    let small = corpus()
        .iter()
        .find(|p| p.name == "matrix(dual numbers, 2)")
        .unwrap();
    match base_change_algebroid(&small.ctx, &small.env, 100) {
        Err(Error::SizeLimit { .. }) => {}
        other => panic!("undersized cap must fail with SizeLimit, got {other:?}"),
    }
    assert_within(start, Duration::from_secs(60), "criterion 2");
}

/// Criterion 3: the closed-form cyclic operator on the changed chains
/// equals the generic one as exact matrices in degrees 0 through 2, within
/// two minutes.
#[test]
fn criterion_3_cyclic_operator_closed_form() {
    let _guard = serial();
    let start = Instant::now();
    for p in corpus() {
        let comp = cyclic_comparison(&p.bc, &p.changed, &p.source, &p.target, 2).unwrap();
        for n in 0..=2 {
            assert_eq!(
                comp.closed_cyclic[n], p.target.cyclic[n],
                "closed cyclic operator differs in degree {n} for {}",
                p.name
            );
        }
    }
    assert_within(start, Duration::from_secs(120), "criterion 3");
}

fn flip(matrices: &[Matrix], at: usize) -> Vec<Matrix> {
    let mut out = matrices.to_vec();
    out[at] = out[at].neg();
    out
}

/// Criterion 4: transfer chain maps, the contracting homotopy, and cyclic
/// compatibility hold exactly in degrees 0 through 2, and each single-sign
/// perturbation of the three families is detected.
#[test]
fn criterion_4_transfer_homotopy_and_negative_controls() {
    let _guard = serial();
    let start = Instant::now();
    for p in corpus() {
        let comp = cyclic_comparison(&p.bc, &p.changed, &p.source, &p.target, 2).unwrap();
        assert_all_pass(
            &check_cyclic_comparison(&p.source, &p.target, &comp),
            &format!("transfer identities for {}", p.name),
        );
    }
    // Negative controls run over the dual numbers, where the degree 1
    // boundary is nonzero, so a sign flip cannot hide.
    let p = corpus()
        .iter()
        .find(|p| p.name == "matrix(dual numbers, 2)")
        .unwrap();
    let good = cyclic_comparison(&p.bc, &p.changed, &p.source, &p.target, 2).unwrap();
    let controls: [(&str, CyclicComparison); 3] = [
        (
            "transfer into the base change is a chain map",
            CyclicComparison {
                cap: good.cap,
                into: flip(&good.into, 1),
                back: good.back.clone(),
                homotopy: good.homotopy.clone(),
                closed_cyclic: good.closed_cyclic.clone(),
            },
        ),
        (
            "transfer back from the base change is a chain map",
            CyclicComparison {
                cap: good.cap,
                into: good.into.clone(),
                back: flip(&good.back, 1),
                homotopy: good.homotopy.clone(),
                closed_cyclic: good.closed_cyclic.clone(),
            },
        ),
        (
            "homotopy contracts the transfer round trip",
            CyclicComparison {
                cap: good.cap,
                into: good.into.clone(),
                back: good.back.clone(),
                homotopy: flip(&good.homotopy, 1),
                closed_cyclic: good.closed_cyclic.clone(),
            },
        ),
    ];
    for (must_fail, perturbed) in &controls {
        let report = check_cyclic_comparison(&p.source, &p.target, perturbed);
        assert!(
            !report.all_pass(),
            "sign perturbation went undetected ({must_fail})"
        );
        assert!(
            item_fails(&report, must_fail),
            "perturbation was detected, but not by the expected item ({must_fail})"
        );
    }
    assert_within(start, Duration::from_secs(120), "criterion 4");
}

/// Criterion 5: Hochschild and cyclic homology dimensions agree exactly
/// across the base change in degrees 0 through 2 for the whole corpus.
#[test]
fn criterion_5_homology_invariance() {
    let _guard = serial();
    let start = Instant::now();
    for p in corpus() {
        let hh_source = homology_dims(&p.source, false);
        let hh_changed = homology_dims(&p.target, false);
        assert_eq!(hh_source, hh_changed, "Hochschild dimensions for {}", p.name);
        let hc_source = homology_dims(&p.source, true);
        let hc_changed = homology_dims(&p.target, true);
        assert_eq!(hc_source, hc_changed, "cyclic dimensions for {}", p.name);
    }
    assert_within(start, Duration::from_secs(300), "criterion 5");
}

/// Criterion 6: the cochain mirror of criteria 4 and 5 over the rationals
/// and the dual numbers at matrix size 2: cochain transfers, the cochain
/// homotopy, and equality of cohomology dimensions, all exact.
#[test]
fn criterion_6_cohomology_mirror() {
    let _guard = serial();
    let start = Instant::now();
    for p in corpus() {
        if p.name == "matrix(rationals, 3)" {
            continue;
        }
        let co_source = para_cocyclic_module(&p.coeff, 3, LIMIT).unwrap();
        let co_target = para_cocyclic_module(&p.changed.coefficient, 3, LIMIT).unwrap();
        let comp = cocyclic_comparison(&p.bc, &p.changed, &co_source, &co_target, 2).unwrap();
        assert_all_pass(
            &check_cocyclic_comparison(&co_source, &co_target, &comp),
            &format!("cochain transfer identities for {}", p.name),
        );
        for n in 0..=2 {
            assert_eq!(
                hochschild_cohomology(&co_source, n).unwrap(),
                hochschild_cohomology(&co_target, n).unwrap(),
                "Hochschild cohomology dimension in degree {n} for {}",
                p.name
            );
            assert_eq!(
                cyclic_cohomology(&co_source, n).unwrap(),
                cyclic_cohomology(&co_target, n).unwrap(),
                "cyclic cohomology dimension in degree {n} for {}",
                p.name
            );
        }
    }
    assert_within(start, Duration::from_secs(300), "criterion 6");
}

/// Criterion 7: classical dimensions against the standalone resolution:
/// Hochschild homology of the dual numbers is (2, 1, 1), of the two by two
/// matrices (1, 0, 0), cyclic homology of the rationals is (1, 0, 1), and
/// the pipeline matches the oracle exactly; within two minutes.
#[test]
fn criterion_7_classical_dimensions_against_oracle() {
    let _guard = serial();
    let start = Instant::now();
    let cases: [(&str, Algebra, Vec<usize>); 2] = [
        ("dual numbers", Algebra::dual_numbers(), vec![2, 1, 1]),
        (
            "two by two matrices",
            matrix_algebra(&Algebra::rationals(), 2),
            vec![1, 0, 0],
        ),
    ];
    for (name, base, expected) in cases {
        let r = Arc::new(base);
        let dense = oracle::dense_structure(&r);
        let regular = oracle::OracleBimodule::regular(&dense);
        let from_oracle = oracle::hochschild_dims(&dense, &regular, 2);
        assert_eq!(from_oracle, expected, "oracle Hochschild dimensions for {name}");
        let env = Arc::new(enveloping_hopf_algebroid(&r, LIMIT).unwrap());
        let coeff = canonical_coefficient(&env, LIMIT).unwrap();
        let pm = para_cyclic_module(&coeff, 3, LIMIT).unwrap();
        assert_eq!(
            homology_dims(&pm, false),
            from_oracle,
            "pipeline Hochschild dimensions for {name}"
        );
    }
    let q = Arc::new(Algebra::rationals());
    let dense = oracle::dense_structure(&q);
    let from_oracle = oracle::cyclic_dims(&dense, 2);
    assert_eq!(from_oracle, vec![1, 0, 1], "oracle cyclic dimensions of the rationals");
    let env = Arc::new(enveloping_hopf_algebroid(&q, LIMIT).unwrap());
    let coeff = canonical_coefficient(&env, LIMIT).unwrap();
    let pm = para_cyclic_module(&coeff, 3, LIMIT).unwrap();
    assert_eq!(
        homology_dims(&pm, true),
        from_oracle,
        "pipeline cyclic dimensions of the rationals"
    );
    assert_within(start, Duration::from_secs(120), "criterion 7");
}

/// Criterion 8: the canonical coefficient and its base change satisfy
/// every stability and compatibility law across the corpus, and a twisted
/// coefficient that deliberately violates stability fails on both sides.
#[test]
fn criterion_8_stability_checks() {
    let _guard = serial();
    let start = Instant::now();
    for p in corpus() {
        assert_all_pass(&check_sayd(&p.coeff), &format!("stability for {}", p.name));
        assert_all_pass(
            &check_sayd(&p.changed.coefficient),
            &format!("changed stability for {}", p.name),
        );
    }
    let p = corpus()
        .iter()
        .find(|p| p.name == "matrix(dual numbers, 2)")
        .unwrap();
    let alpha = Matrix::from_rows_i64(&[&[1, 0], &[0, 2]]);
    let bad = twisted_canonical_coefficient(&p.env, &alpha, LIMIT).unwrap();
    assert!(
        item_fails(&check_sayd(&bad), "coefficient is stable"),
        "twisted coefficient must fail stability"
    );
    let moved = base_change_coefficient(&p.bc, &bad, LIMIT).unwrap();
    assert!(
        item_fails(&check_sayd(&moved.coefficient), "coefficient is stable"),
        "twisted coefficient must fail stability after the base change"
    );
    assert_within(start, Duration::from_secs(120), "criterion 8");
}

const DETERMINISM_CONFIG: &str = r#"
size_limit = 200000

[algebras.q]
kind = "rationals"

[algebras.dual]
kind = "dual_numbers"

[algebras.pair]
kind = "split_pair"

[algebras.m2]
kind = "matrix"
base = "q"
k = 2

[contexts.q2]
kind = "matrix"
base = "q"
k = 2

[contexts.q3]
kind = "matrix"
base = "q"
k = 3

[contexts.dual2]
kind = "matrix"
base = "dual"
k = 2

[algebroids.env_q]
kind = "enveloping"
base = "q"

[algebroids.env_dual]
kind = "enveloping"
base = "dual"

[algebroids.env_pair]
kind = "enveloping"
base = "pair"

[algebroids.env_m2]
kind = "enveloping"
base = "m2"

[algebroids.moved]
kind = "base_change"
context = "dual2"
algebroid = "env_dual"

[coefficients.can_q]
kind = "canonical_r"
algebroid = "env_q"

[coefficients.can_dual]
kind = "canonical_r"
algebroid = "env_dual"

[[jobs]]
verb = "check-axioms"
algebroid = "env_q"

[[jobs]]
verb = "check-axioms"
algebroid = "env_dual"

[[jobs]]
verb = "check-axioms"
algebroid = "env_pair"

[[jobs]]
verb = "check-axioms"
algebroid = "env_m2"

[[jobs]]
verb = "check-axioms"
algebroid = "moved"

[[jobs]]
verb = "base-change"
context = "q2"
algebroid = "env_q"

[[jobs]]
verb = "base-change"
context = "q3"
algebroid = "env_q"

[[jobs]]
verb = "base-change"
context = "dual2"
algebroid = "env_dual"

[[jobs]]
verb = "check-sayd"
coefficient = "can_dual"

[[jobs]]
verb = "homology"
coefficient = "can_dual"
cap = 3

[[jobs]]
verb = "cohomology"
coefficient = "can_dual"
cap = 3

[[jobs]]
verb = "verify-morita"
context = "q2"
coefficient = "can_q"
cap = 3

[[jobs]]
verb = "verify-morita"
context = "dual2"
coefficient = "can_dual"
cap = 2

[[jobs]]
verb = "classical"
base = "q"
k = 2
cap = 2
"#;

fn run_binary(config: &std::path::Path, out: &std::path::Path, parallel: bool) {
    let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_algebroid"));
    cmd.arg("--config").arg(config).arg("--out").arg(out);
    if parallel {
        cmd.arg("--parallel");
    }
    let status = cmd.status().expect("binary should launch");
    assert!(status.success(), "run into {} must pass", out.display());
}

fn read_outputs(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|name| {
            let bytes = std::fs::read(dir.join(&name)).unwrap();
            (name, bytes)
        })
        .collect()
}

/// Criterion 9: two runs of the full job suite produce byte-identical
/// machine-readable outputs, and a parallel run matches as well.
#[test]
fn criterion_9_deterministic_outputs() {
    let _guard = serial();
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("jobs.toml");
    std::fs::write(&config, DETERMINISM_CONFIG).unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    let parallel = dir.path().join("parallel");
    run_binary(&config, &first, false);
    run_binary(&config, &second, false);
    run_binary(&config, &parallel, true);
    let baseline = read_outputs(&first);
    assert!(
        baseline.iter().any(|(name, _)| name == "summary.json"),
        "run must produce a summary"
    );
    assert_eq!(
        baseline,
        read_outputs(&second),
        "two sequential runs must be byte-identical"
    );
    assert_eq!(
        baseline,
        read_outputs(&parallel),
        "a parallel run must be byte-identical to a sequential one"
    );
    assert_within(start, Duration::from_secs(300), "criterion 9");
}
