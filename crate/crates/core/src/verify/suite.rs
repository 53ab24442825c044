//! Complete property suites for the planar potential families and for the
//! annulus Green kernel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::checks::{
    approach_radii, check_boundary_divergence, check_harmonic_on, check_kernel_boundary_difference,
    check_pole_regularity, DEFAULT_DIFFERENCE_TOL, DEFAULT_DIVERGENCE_BAR, DEFAULT_POLE_THRESHOLD,
};
use super::oracle::{fd_green_oracle, oracle_sup_deviation};
use super::{Check, PropertyReport, Witness};
use crate::error::Result;
use crate::green::{AnnulusGreen, AnnulusSpec};
use crate::kernel::{
    default_h_sequence, fundamental_metric, fundamental_metric_limit, BoundaryElement, FnPotential,
    MetricParams, Potential, PuncturedParams, PuncturedPotential, TwicePuncturedParams,
    TwicePuncturedPotential,
};
use crate::Point;

/// Thresholds shared by all suites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Stencil step of the five-point Laplacian.
    pub h: f64,
    pub laplacian_tol: f64,
    /// Admissible band for the ratio of Laplacian estimates at `h` and `h/2`.
    pub ratio_band: (f64, f64),
    pub pole_threshold: f64,
    pub divergence_bar: f64,
    pub difference_tol: f64,
    pub metric_rel_tol: f64,
    pub symmetry_tol: f64,
    /// Angle of the rays along which boundary elements are approached.
    pub approach_angle: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            h: 1e-3,
            laplacian_tol: 1e-5,
            ratio_band: (2.5, 6.0),
            pole_threshold: DEFAULT_POLE_THRESHOLD,
            divergence_bar: DEFAULT_DIVERGENCE_BAR,
            difference_tol: DEFAULT_DIFFERENCE_TOL,
            metric_rel_tol: 1e-6,
            symmetry_tol: 1e-12,
            approach_angle: std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Offset of the Laplacian probe from the pole. At this distance the
/// `O(h^2)` truncation term of the stencil dominates rounding, so the
/// refinement ratio is close to 4.
fn probe_offset(distance: f64) -> Point {
    Point::from_polar(distance, std::f64::consts::FRAC_PI_4)
}

const PUNCTURED_POLE: Point = Point { re: 1.5, im: 0.0 };
const TWICE_PUNCTURED_POLE: Point = Point { re: -1.5, im: 1.0 };

fn ratio_measure(ratio: f64, (lo, hi): (f64, f64)) -> f64 {
    if ratio > 0.0 && ratio.is_finite() {
        (lo / ratio).max(ratio / hi)
    } else {
        f64::INFINITY
    }
}

fn harmonic_checks<P: Potential<f64> + ?Sized>(
    potential: &P,
    q: Point,
    probe: Point,
    config: &SuiteConfig,
) -> PropertyReport {
    let mut report = PropertyReport::default();
    let witness = Some(Witness::Pair(probe, q));
    match check_harmonic_on(potential, q, probe, config.h) {
        Ok(h) => {
            report.push(Check::new(
                "harmonic_laplacian",
                h.laplacian.abs(),
                config.laplacian_tol,
                witness,
            ));
            report.push(Check::new(
                "harmonic_refinement_ratio",
                ratio_measure(h.refinement_ratio, config.ratio_band),
                1.0,
                witness,
            ));
        }
        Err(_) => {
            report.push(Check::new(
                "harmonic_laplacian",
                f64::INFINITY,
                config.laplacian_tol,
                witness,
            ));
        }
    }
    report
}

fn pole_check<P: Potential<f64> + ?Sized>(potential: &P, q: Point, config: &SuiteConfig) -> Check {
    let h = default_h_sequence(potential.boundary_distance(q).min(1.0));
    check_pole_regularity(potential, q, &h, config.pole_threshold)
}

/// `E_q(p) = log|p - q|^2`: a double pole, so pole regularity must fail.
fn double_pole_control(
    boundary: Vec<BoundaryElement<f64>>,
    q: Point,
    config: &SuiteConfig,
) -> Check {
    let broken = FnPotential::new(
        |p: Point, q: Point| Ok(2.0 * (p - q).ln_modulus()),
        boundary,
    );
    let mut check = pole_check(&broken, q, config).negative_control();
    check.name = "pole_regularity_double_pole_control".into();
    check
}

/// Harmonicity, pole regularity and divergence at every boundary element.
pub fn axiom_checks<P: Potential<f64> + ?Sized>(
    potential: &P,
    q: Point,
    probe: Point,
    config: &SuiteConfig,
) -> PropertyReport {
    let mut report = harmonic_checks(potential, q, probe, config);
    report.push(pole_check(potential, q, config));
    for element in potential.boundary() {
        report.push(check_boundary_divergence(
            potential,
            q,
            &element,
            &approach_radii(&element, 1.0),
            config.approach_angle,
            config.divergence_bar,
        ));
    }
    report
}

/// Symmetry on a few pairs and boundedness of `E(., q) - E(., q2)` near
/// every boundary element.
pub fn kernel_checks<P: Potential<f64> + ?Sized>(
    kernel: &P,
    q: Point,
    q2: Point,
    config: &SuiteConfig,
) -> PropertyReport {
    let mut report = PropertyReport::default();
    report.push(symmetry_check(
        kernel,
        &[
            (q, q2),
            (q + probe_offset(0.75), q2),
            (Point::new(-0.4, -2.2), q),
        ],
        config.symmetry_tol,
    ));
    for element in kernel.boundary() {
        report.push(check_kernel_boundary_difference(
            kernel,
            q,
            q2,
            &element,
            &approach_radii(&element, 1.0),
            config.approach_angle,
            config.difference_tol,
        ));
    }
    report
}

fn symmetry_check<P: Potential<f64> + ?Sized>(
    kernel: &P,
    pairs: &[(Point, Point)],
    tol: f64,
) -> Check {
    let mut worst = (0.0f64, None);
    for &(p, q) in pairs {
        let dev = match (kernel.value(p, q), kernel.value(q, p)) {
            (Ok(a), Ok(b)) => (a - b).abs(),
            _ => f64::INFINITY,
        };
        if dev > worst.0 || worst.1.is_none() {
            worst = (worst.0.max(dev), Some(Witness::Pair(p, q)));
        }
    }
    Check::new("symmetry", worst.0, tol, worst.1)
}

fn metric_check<P: Potential<f64> + ?Sized>(
    potential: &P,
    params: &MetricParams<f64>,
    points: &[Point],
    config: &SuiteConfig,
) -> Check {
    let mut worst = (0.0f64, None);
    for &z in points {
        let h = default_h_sequence(potential.boundary_distance(z).min(1.0));
        let rel = match (
            fundamental_metric_limit(z, potential, &h),
            fundamental_metric(z, params),
        ) {
            (Ok(limit), Ok(exact)) => ((limit - exact) / exact).abs(),
            _ => f64::INFINITY,
        };
        if rel > worst.0 || worst.1.is_none() {
            worst = (worst.0.max(rel), Some(Witness::Point(z)));
        }
    }
    Check::new("metric_limit", worst.0, config.metric_rel_tol, worst.1)
}

const METRIC_POINTS: [Point; 3] = [
    Point { re: 2.0, im: 0.5 },
    Point { re: -0.7, im: 1.3 },
    Point { re: 0.4, im: -3.0 },
];

/// Full suite for the family on `C \ {0}`; kernel checks are added when the
/// parameters are symmetric.
pub fn punctured_suite(params: PuncturedParams<f64>, config: &SuiteConfig) -> PropertyReport {
    let potential = PuncturedPotential { params };
    let q = PUNCTURED_POLE;
    let mut report = axiom_checks(&potential, q, q + probe_offset(0.75), config);
    if params.is_symmetric() {
        report.extend(kernel_checks(&potential, q, Point::new(0.0, 2.0), config));
    }
    report.push(metric_check(
        &potential,
        &MetricParams::from_punctured(&params),
        &METRIC_POINTS,
        config,
    ));
    report.push(double_pole_control(potential.boundary(), q, config));
    report
}

/// Full suite for the family on `C \ {0, 1}`.
pub fn twice_punctured_suite(
    params: TwicePuncturedParams<f64>,
    config: &SuiteConfig,
) -> PropertyReport {
    let potential = TwicePuncturedPotential { params };
    let q = TWICE_PUNCTURED_POLE;
    let mut report = axiom_checks(&potential, q, q + probe_offset(0.75), config);
    if params.is_symmetric() {
        report.extend(kernel_checks(&potential, q, Point::new(2.0, -0.5), config));
    }
    report.push(metric_check(
        &potential,
        &MetricParams::from_twice_punctured(&params),
        &METRIC_POINTS,
        config,
    ));
    report.push(double_pole_control(potential.boundary(), q, config));
    report
}

/// Configuration of the annulus suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusSuiteConfig {
    pub r: f64,
    pub tol: f64,
    pub seed: u64,
    /// Number of random pairs for the negativity and symmetry checks.
    pub pairs: usize,
    /// Distance from the circles at which vanishing is probed.
    pub boundary_delta: f64,
    pub boundary_tol: f64,
    pub boundary_angles: usize,
    pub include_oracle: bool,
    /// Oracle resolutions; the refinement check compares the first two.
    pub oracle_resolutions: (usize, usize),
    pub oracle_tol: f64,
    pub oracle_refinement: f64,
}

impl Default for AnnulusSuiteConfig {
    fn default() -> Self {
        Self {
            r: 0.1,
            tol: 1e-12,
            seed: super::DEFAULT_SEED,
            pairs: 1000,
            boundary_delta: 1e-6,
            boundary_tol: 1e-4,
            boundary_angles: 16,
            include_oracle: false,
            oracle_resolutions: (64, 128),
            oracle_tol: 1e-2,
            oracle_refinement: 3.5,
        }
    }
}

/// Seeded interior points, log-uniform in modulus with a margin of 2% of
/// `log(1/r)` to each circle.
pub fn annulus_points(
    annulus: &AnnulusSpec<f64>,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Point> {
    let span = -annulus.log_r();
    let margin = 0.02 * span;
    (0..count)
        .map(|_| {
            let s = rng.gen_range(annulus.log_r() + margin..span - margin);
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            Point::from_polar(s.exp(), angle)
        })
        .collect()
}

/// The pole and Laplacian probe used by the annulus suite.
fn annulus_pole_and_probe(annulus: &AnnulusSpec<f64>) -> (Point, Point) {
    let q = Point::real(1.2);
    let probe = q + probe_offset(0.75);
    let fits = |z: Point, margin: f64| {
        z.modulus() > annulus.r() + margin && z.modulus() < annulus.outer_radius() - margin
    };
    if fits(q, 0.1) && fits(probe, 0.1) {
        (q, probe)
    } else {
        // thin annulus: pole on the unit circle, probe scaled to the width
        let q = Point::one();
        let width = annulus.outer_radius() - annulus.r();
        (q, q + probe_offset(0.2 * width))
    }
}

/// Boundary vanishing, negativity, symmetry, harmonicity and pole regularity
/// of the annulus Green kernel, its boundary-divergence negative control,
/// and optionally the finite-difference oracle comparison.
pub fn annulus_suite(
    annulus_config: &AnnulusSuiteConfig,
    config: &SuiteConfig,
) -> Result<PropertyReport> {
    let annulus = AnnulusSpec::new(annulus_config.r, annulus_config.tol)?;
    let green = AnnulusGreen::new(annulus);
    let mut rng = ChaCha8Rng::seed_from_u64(annulus_config.seed);
    let (q, probe) = annulus_pole_and_probe(&annulus);
    let mut report = PropertyReport::default();

    let h_config = SuiteConfig {
        h: config.h.min(0.05 * probe.dist(&q)),
        ..*config
    };
    report.extend(harmonic_checks(&green, q, probe, &h_config));
    report.push(pole_check(&green, q, config));

    // boundary vanishing at distance delta inside both circles
    let mut worst = (0.0f64, None);
    let delta = annulus_config.boundary_delta;
    for k in 0..annulus_config.boundary_angles {
        let angle = std::f64::consts::TAU * k as f64 / annulus_config.boundary_angles as f64;
        for radius in [annulus.r() + delta, annulus.outer_radius() - delta] {
            let p = Point::from_polar(radius, angle);
            let v = green.value(p, q).map_or(f64::INFINITY, f64::abs);
            if v > worst.0 || worst.1.is_none() {
                worst = (worst.0.max(v), Some(Witness::Pair(p, q)));
            }
        }
    }
    report.push(Check::new(
        "boundary_vanishing",
        worst.0,
        annulus_config.boundary_tol,
        worst.1,
    ));

    // negativity and symmetry on seeded pairs
    let ps = annulus_points(&annulus, annulus_config.pairs, &mut rng);
    let qs = annulus_points(&annulus, annulus_config.pairs, &mut rng);
    let pairs: Vec<(Point, Point)> = ps.into_iter().zip(qs).filter(|(p, q)| p != q).collect();
    let mut max_value = (f64::NEG_INFINITY, None);
    for &(p, q) in &pairs {
        let v = green.value(p, q).unwrap_or(f64::INFINITY);
        if v > max_value.0 || max_value.1.is_none() {
            max_value = (max_value.0.max(v), Some(Witness::Pair(p, q)));
        }
    }
    // strict negativity: the largest value must lie below zero
    report.push(Check::new(
        "interior_negativity",
        max_value.0,
        -f64::MIN_POSITIVE,
        max_value.1,
    ));
    report.push(symmetry_check(&green, &pairs, 2.0 * annulus_config.tol));

    for element in green.boundary() {
        let mut check = check_boundary_divergence(
            &green,
            q,
            &element,
            &approach_radii(&element, 1.0),
            0.3,
            config.divergence_bar,
        )
        .negative_control();
        check.name = format!("{}_green_control", check.name);
        report.push(check);
    }

    if annulus_config.include_oracle {
        let (coarse, fine) = annulus_config.oracle_resolutions;
        let (d_coarse, _) = oracle_sup_deviation(
            &fd_green_oracle(annulus.r(), q, coarse, coarse)?,
            annulus.tol(),
        )?;
        let (d_fine, at) =
            oracle_sup_deviation(&fd_green_oracle(annulus.r(), q, fine, fine)?, annulus.tol())?;
        report.push(Check::new(
            "oracle_sup_deviation",
            d_fine,
            annulus_config.oracle_tol,
            Some(Witness::Pair(at, q)),
        ));
        report.push(Check::new(
            "oracle_refinement",
            d_fine / d_coarse,
            1.0 / annulus_config.oracle_refinement,
            Some(Witness::Pair(at, q)),
        ));
    }
    Ok(report)
}

/// Margin kept from the edges of the admissible parameter regions, so that
/// divergence rises exceed the default bar over the sampled radii.
pub const DRAW_MARGIN: f64 = 0.02;

/// Seeded admissible `(k, l)`; with `symmetric`, `k = l`.
pub fn draw_punctured(seed: u64, count: usize, symmetric: bool) -> Vec<PuncturedParams<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = DRAW_MARGIN..1.0 - DRAW_MARGIN;
    (0..count)
        .map(|_| {
            let k = rng.gen_range(range.clone());
            let l = if symmetric {
                k
            } else {
                rng.gen_range(range.clone())
            };
            PuncturedParams::new(k, l).expect("draw lies in the admissible region")
        })
        .collect()
}

/// Seeded admissible `(k, l, m, n)`; with `symmetric`, `k = l` and `m = n`.
pub fn draw_twice_punctured(
    seed: u64,
    count: usize,
    symmetric: bool,
) -> Vec<TwicePuncturedParams<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair = |rng: &mut ChaCha8Rng| {
        let a = rng.gen_range(DRAW_MARGIN..1.0 - 2.0 * DRAW_MARGIN);
        let b = rng.gen_range(DRAW_MARGIN..1.0 - DRAW_MARGIN - a);
        (a, b)
    };
    (0..count)
        .map(|_| {
            let (k, m) = pair(&mut rng);
            let (l, n) = if symmetric { (k, m) } else { pair(&mut rng) };
            TwicePuncturedParams::new(k, l, m, n).expect("draw lies in the admissible region")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_all_ok(report: &PropertyReport) {
        let bad: Vec<_> = report.unexpected().collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn punctured_kernel_passes() {
        let report = punctured_suite(
            PuncturedParams::symmetric(0.5).unwrap(),
            &SuiteConfig::default(),
        );
        assert_all_ok(&report);
        for name in [
            "harmonic_laplacian",
            "symmetry",
            "metric_limit",
            "boundary_divergence_0",
            "boundary_divergence_inf",
        ] {
            assert!(report.get(name).is_some(), "{name}");
        }
        assert!(
            !report
                .get("pole_regularity_double_pole_control")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn twice_punctured_potential_passes() {
        let params = TwicePuncturedParams::new(0.3, 0.2, 0.4, 0.5).unwrap();
        let report = twice_punctured_suite(params, &SuiteConfig::default());
        assert_all_ok(&report);
        assert!(report.get("boundary_divergence_1").is_some());
        assert!(report.get("symmetry").is_none());
    }

    #[test]
    fn draws_are_admissible_and_reproducible() {
        assert_eq!(draw_punctured(3, 5, false), draw_punctured(3, 5, false));
        assert!(draw_punctured(3, 5, true).iter().all(|p| p.is_symmetric()));
        for p in draw_twice_punctured(3, 50, false) {
            assert!(p.k() + p.m() <= 1.0 - DRAW_MARGIN && p.l() + p.n() <= 1.0 - DRAW_MARGIN);
        }
    }

    #[test]
    fn annulus_suite_passes() {
        let cfg = AnnulusSuiteConfig {
            pairs: 50,
            ..Default::default()
        };
        let report = annulus_suite(&cfg, &SuiteConfig::default()).unwrap();
        assert_all_ok(&report);
        assert!(report.get("oracle_sup_deviation").is_none());
        let control = report
            .get("boundary_divergence_circle_0.1_green_control")
            .unwrap();
        assert!(!control.passed && control.ok());
    }

    #[test]
    fn thin_annulus_still_probes_inside() {
        let annulus = AnnulusSpec::new(0.8, 1e-12).unwrap();
        let (q, probe) = annulus_pole_and_probe(&annulus);
        assert!(annulus.contains(q, false) && annulus.contains(probe, false));
    }
}
