//! One test per acceptance criterion. Each prints a single `PASS`/`FAIL`
//! line to standard error (uncaptured) and then asserts.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use evans_selberg::asymptotics::{
    b_max_of_family, empirical_exponents, minimize_b_max, Domain, ExponentSampling,
};
use evans_selberg::green::{nakai_limit, nakai_shifted_green, normalization_residual, AnnulusSpec};
use evans_selberg::kernel::{
    default_h_sequence, fundamental_metric_limit, Potential, PuncturedPotential,
    TwicePuncturedPotential,
};
use evans_selberg::verify::suite::{
    annulus_suite, draw_punctured, draw_twice_punctured, punctured_suite, twice_punctured_suite,
    AnnulusSuiteConfig, SuiteConfig,
};
use evans_selberg::verify::{
    compare_sublevel_sets, nakai_convergence_study, standard_sample_set, sublevel_crossings,
    PropertyReport, DEFAULT_SEED,
};
use evans_selberg::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: u32, passed: bool, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "{verdict} criterion {criterion}: {detail}"
    );
}

fn conclude(criterion: u32, passed: bool, detail: String) {
    report(criterion, passed, &detail);
    assert!(passed, "criterion {criterion}: {detail}");
}

#[test]
fn criterion_1_nakai_convergence() {
    let start = Instant::now();
    let samples = standard_sample_set(DEFAULT_SEED);
    let ts = [1.0, 2.0, 3.0, 4.0];
    let study = nakai_convergence_study(&samples, &ts, 1e-12).unwrap();
    let elapsed = start.elapsed();

    // Diagnostic: the error decomposes as log(1 - e^{-2t}) + log|p| log|q| / (4t)
    // plus the product over images, which is O(e^{-4t}); the remainder is
    // reported to show that the measured error is this decomposition and not
    // an evaluation defect.
    let remainder: Vec<f64> = ts
        .iter()
        .map(|&t| {
            samples.iter().fold(0.0f64, |worst, &(p, q)| {
                let err = nakai_shifted_green(p, q, t, 1e-14).unwrap() - nakai_limit(p, q).unwrap();
                let known =
                    (-(-2.0 * t).exp()).ln_1p() + p.ln_modulus() * q.ln_modulus() / (4.0 * t);
                worst.max((err - known).abs())
            })
        })
        .collect();
    let decreasing = study.strictly_decreasing();
    let last = *study.errors.last().unwrap();
    let fast = elapsed < Duration::from_secs(5);
    conclude(
        1,
        decreasing && last < 1e-4 && fast,
        format!(
            "errors {:?} strictly decreasing = {decreasing}; error at t = 4 is {last:.3e} (threshold 1e-4); \
             runtime {elapsed:?}; fitted rate {:?}; max |error - log(1-e^(-2t)) - log|p|log|q|/(4t)| per t {remainder:?}",
            study.errors, study.fitted_rate
        ),
    );
}

#[test]
fn criterion_2_normalization_identity() {
    let mut worst = 0.0f64;
    let mut values = Vec::new();
    for t in [1.0f64, 2.0, 5.0, 10.0] {
        let annulus = AnnulusSpec::from_t(t, 1e-12).unwrap();
        // independent series for log(1 - x) = -sum x^n / n
        let x = (-2.0 * t).exp();
        let series: f64 = -(1..200).map(|n| x.powi(n) / n as f64).sum::<f64>();
        let residual = annulus.half_log_r() + annulus.big_t();
        worst = worst.max((residual - series).abs());
        values.push(normalization_residual(t));
    }
    let monotone = values.windows(2).all(|w| w[0] < w[1]) && values.iter().all(|v| *v < 0.0);
    conclude(
        2,
        worst <= 1e-15 && monotone && values[3].abs() < 1e-8,
        format!("max identity residual {worst:.2e} (threshold 1e-15); log(1-e^(-2t)) over t = 1,2,5,10: {values:?}"),
    );
}

#[test]
fn criterion_3_green_kernel() {
    let start = Instant::now();
    let config = AnnulusSuiteConfig {
        r: 0.1,
        tol: 1e-10,
        pairs: 1000,
        boundary_delta: 1e-6,
        boundary_tol: 1e-4,
        include_oracle: true,
        oracle_resolutions: (64, 128),
        oracle_refinement: 3.5,
        ..AnnulusSuiteConfig::default()
    };
    let suite = annulus_suite(&config, &SuiteConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let names = [
        "boundary_vanishing",
        "interior_negativity",
        "symmetry",
        "oracle_refinement",
    ];
    let mut ok = elapsed < Duration::from_secs(60);
    let mut detail = Vec::new();
    for name in names {
        let check = suite.get(name).unwrap_or_else(|| panic!("missing {name}"));
        ok &= check.passed;
        detail.push(format!(
            "{name} {:.3e} <= {:.3e}: {}",
            check.measured, check.threshold, check.passed
        ));
    }
    let sym = suite.get("symmetry").unwrap();
    ok &= sym.threshold == 2.0 * config.tol;
    let refinement = 1.0 / suite.get("oracle_refinement").unwrap().measured;
    conclude(
        3,
        ok,
        format!(
            "{}; oracle reduction {refinement:.2}x; runtime {elapsed:?}",
            detail.join("; ")
        ),
    );
}

fn unexpected(report: &PropertyReport) -> Vec<String> {
    report
        .unexpected()
        .map(|c| format!("{} ({:.3e} vs {:.3e})", c.name, c.measured, c.threshold))
        .collect()
}

#[test]
fn criterion_4_axiom_suite() {
    let config = SuiteConfig::default();
    let draws = 20;
    let mut failures = Vec::new();
    let mut checks = 0usize;
    let mut families = Vec::new();
    for (label, symmetric, seed) in [
        ("C\\{0} potentials", false, 11u64),
        ("C\\{0} kernels", true, 13),
    ] {
        for params in draw_punctured(seed, draws, symmetric) {
            let rep = punctured_suite(params, &config);
            checks += rep.checks.len();
            failures.extend(
                unexpected(&rep)
                    .into_iter()
                    .map(|f| format!("{label} {params:?}: {f}")),
            );
        }
        families.push(label);
    }
    for (label, symmetric, seed) in [
        ("C\\{0,1} potentials", false, 17u64),
        ("C\\{0,1} kernels", true, 19),
    ] {
        for params in draw_twice_punctured(seed, draws, symmetric) {
            let rep = twice_punctured_suite(params, &config);
            checks += rep.checks.len();
            failures.extend(
                unexpected(&rep)
                    .into_iter()
                    .map(|f| format!("{label} {params:?}: {f}")),
            );
        }
        families.push(label);
    }
    // the Green kernel does not diverge at its boundary: the control must fail
    let annulus = annulus_suite(
        &AnnulusSuiteConfig {
            pairs: 10,
            ..AnnulusSuiteConfig::default()
        },
        &config,
    )
    .unwrap();
    let controls: Vec<_> = annulus
        .checks
        .iter()
        .filter(|c| c.name.ends_with("green_control"))
        .collect();
    let green_controls_fail = controls.len() == 2 && controls.iter().all(|c| !c.passed);
    conclude(
        4,
        failures.is_empty() && green_controls_fail,
        format!(
            "{draws} draws x {} families, {checks} checks, unexpected outcomes: {failures:?}; \
             Green boundary-divergence controls fail as required: {green_controls_fail}",
            families.len()
        ),
    );
}

#[test]
fn criterion_5_exponent_extremals() {
    let c0 = minimize_b_max::<f64>(Domain::Punctured, 1e-3).unwrap();
    let c01 = minimize_b_max::<f64>(Domain::TwicePunctured, 1e-3).unwrap();
    let mut deviation = 0.0f64;
    for best in [&c0, &c01] {
        let analytic = b_max_of_family(&best.argmin).unwrap();
        let empirical = empirical_exponents(&best.argmin, &ExponentSampling::default()).unwrap();
        deviation = deviation.max(analytic.max_deviation(&empirical));
    }
    let ok0 = (c0.min_b_max - 0.5).abs() <= 5e-4;
    let ok01 = (c01.min_b_max - 1.0 / 3.0).abs() <= 1e-3;
    conclude(
        5,
        ok0 && ok01 && deviation <= 1e-3,
        format!(
            "C\\{{0}}: {:.6} at {:?}; C\\{{0,1}}: {:.6} at {:?}; max regression deviation {deviation:.2e}",
            c0.min_b_max, c0.argmin, c01.min_b_max, c01.argmin
        ),
    );
}

#[test]
fn criterion_6_metric_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst = 0.0f64;
    let point = |rng: &mut ChaCha8Rng| loop {
        let z = Point::from_polar(
            rng.gen_range(0.2f64.ln()..5f64.ln()).exp(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        if z.dist(&Point::one()) > 0.1 {
            break z;
        }
    };
    for params in draw_punctured(23, 10, false) {
        let z = point(&mut rng);
        let pot = PuncturedPotential { params };
        let h = default_h_sequence(pot.boundary_distance(z).min(1.0));
        let limit = fundamental_metric_limit(z, &pot, &h).unwrap();
        let exact = z.modulus().powf(-(params.k() + params.l()));
        worst = worst.max((limit / exact - 1.0).abs());
    }
    for params in draw_twice_punctured(29, 10, false) {
        let z = point(&mut rng);
        let pot = TwicePuncturedPotential { params };
        let h = default_h_sequence(pot.boundary_distance(z).min(1.0));
        let limit = fundamental_metric_limit(z, &pot, &h).unwrap();
        let exact = z.modulus().powf(-(params.k() + params.l()))
            * (z - Point::one())
                .modulus()
                .powf(-(params.m() + params.n()));
        worst = worst.max((limit / exact - 1.0).abs());
    }
    conclude(
        6,
        worst <= 1e-6,
        format!("max relative error {worst:.2e} over 2 x 10 seeded points (threshold 1e-6)"),
    );
}

#[test]
fn criterion_7_sublevel_sets() {
    let ts = [2.0, 4.0, 8.0];
    let mut axis = 0.0f64;
    let mut at_pi = Vec::new();
    let mut max_overall = Vec::new();
    for t in ts {
        let (outer, inner) = sublevel_crossings(t, 0.0);
        axis = axis
            .max((outer.ln() - 2.0 * t).abs())
            .max((inner.ln() + 2.0 * t).abs());
        let (outer, _) = sublevel_crossings(t, std::f64::consts::PI);
        at_pi.push((outer.ln() - 2.0 * t).abs());
        max_overall.push(compare_sublevel_sets(t, 64).max_radial_log_discrepancy);
    }
    let decreasing = at_pi.windows(2).all(|w| w[1] < w[0]);
    conclude(
        7,
        axis <= 1e-10 && decreasing,
        format!(
            "angle-0 discrepancy {axis:.1e}; angle-pi discrepancy over t = 2,4,8: {at_pi:?}; \
             max over 64 angles (reported only, the sets differ away from the positive axis): {max_overall:?}"
        ),
    );
}

#[test]
fn criterion_8_cli_contract() {
    let bin = env!("CARGO_BIN_EXE_evans");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let grid = [
        "grid",
        "--domain",
        "c01",
        "--kernel",
        "evans",
        "--k",
        "0.3",
        "--m",
        "0.3",
        "--q",
        "2+1i",
        "--x-min",
        "-2",
        "--x-max",
        "2",
        "--y-min",
        "-2",
        "--y-max",
        "2",
        "--nx",
        "41",
        "--ny",
        "41",
        "--mask-radius",
        "0.05",
    ];
    let grid_same = run(&grid).stdout == run(&grid).stdout;
    let converge = ["converge", "--seed", "99"];
    let converge_same = run(&converge).stdout == run(&converge).stdout;

    let matrix: &[(&[&str], i32)] = &[
        (
            &[
                "eval", "--domain", "c0", "--kernel", "evans", "--l", "0.5", "--p", "1+0i", "--q",
                "-1+0i",
            ],
            0,
        ),
        (
            &[
                "eval", "--domain", "c0", "--kernel", "evans", "--l", "0.5", "--p", "1+0i", "--q",
                "1+0i",
            ],
            2,
        ),
        (
            &[
                "eval",
                "--domain",
                "c0",
                "--kernel",
                "evans-selberg",
                "--k",
                "0",
                "--l",
                "0.5",
                "--p",
                "2",
                "--q",
                "1",
            ],
            2,
        ),
        (
            &[
                "eval",
                "--domain",
                "annulus",
                "--kernel",
                "green",
                "--r",
                "0.999999",
                "--p",
                "1",
                "--q",
                "1.0000001i",
                "--tol",
                "1e-300",
            ],
            3,
        ),
        (
            &[
                "grid", "--domain", "c0", "--kernel", "metric", "--s", "1", "--x-min", "0",
                "--x-max", "1", "--y-min", "0", "--y-max", "1", "--nx", "0", "--ny", "2",
            ],
            2,
        ),
        (&["converge", "--t-list", "1,2"], 0),
        (&["verify", "--domain", "c0", "--k", "0.5", "--l", "0.5"], 0),
        (&["verify", "--domain", "c0", "--k", "1.5"], 2),
        (&["bmax", "--domain", "c0", "--grid-step", "0.5"], 0),
        (&["eval", "--bogus"], 2),
    ];
    let mismatches: Vec<String> = matrix
        .iter()
        .filter_map(|(args, want)| {
            let got = run(args).status.code();
            (got != Some(*want)).then(|| format!("{args:?}: got {got:?}, want {want}"))
        })
        .collect();
    conclude(
        8,
        grid_same && converge_same && mismatches.is_empty(),
        format!(
            "grid byte-identical {grid_same}; converge byte-identical {converge_same}; \
             {} exit-code cases, mismatches {mismatches:?}",
            matrix.len()
        ),
    );
}
