use super::{boundary_label, Check, Witness};
use crate::error::{Error, Result};
use crate::kernel::{BoundaryElement, Potential};
use crate::richardson::extrapolate_to_zero;
use crate::Point;

pub const DEFAULT_POLE_THRESHOLD: f64 = 1e-6;
pub const DEFAULT_DIVERGENCE_BAR: f64 = 5.0;
pub const DEFAULT_DIFFERENCE_TOL: f64 = 1e-3;

/// Five-point Laplacian at `h` and the ratio of the estimates at `h` and `h/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Harmonic {
    pub laplacian: f64,
    pub laplacian_half: f64,
    pub refinement_ratio: f64,
}

fn five_point<F>(field: &F, at: Point, h: f64) -> Result<f64>
where
    F: Fn(Point) -> Result<f64>,
{
    let centre = field(at)?;
    let sum = field(at + Point::real(h))?
        + field(at - Point::real(h))?
        + field(at + Point::new(0.0, h))?
        + field(at - Point::new(0.0, h))?;
    Ok((sum - 4.0 * centre) / (h * h))
}

/// Any evaluation failure inside the stencil is reported as a domain error.
pub fn check_harmonic<F>(field: F, at: Point, h: f64) -> Result<Harmonic>
where
    F: Fn(Point) -> Result<f64>,
{
    if !(h > 0.0) {
        return Err(Error::parameter(format!(
            "stencil step {h} must be positive"
        )));
    }
    let to_domain = |e: Error| match e {
        Error::Domain(_) | Error::Pole => Error::Domain(format!(
            "stencil of radius {h} around {at} leaves the domain ({e})"
        )),
        other => other,
    };
    let laplacian = five_point(&field, at, h).map_err(to_domain)?;
    let laplacian_half = five_point(&field, at, 0.5 * h).map_err(to_domain)?;
    Ok(Harmonic {
        laplacian,
        laplacian_half,
        refinement_ratio: laplacian / laplacian_half,
    })
}

/// [`check_harmonic`] for `p -> E_q(p)`, first enforcing that the disc of
/// radius `2h` around `at` avoids both the boundary and the pole.
pub fn check_harmonic_on<P: Potential<f64> + ?Sized>(
    potential: &P,
    q: Point,
    at: Point,
    h: f64,
) -> Result<Harmonic> {
    let room = potential.boundary_distance(at).min(at.dist(&q));
    if !(room > 2.0 * h) {
        return Err(Error::Domain(format!(
            "disc of radius {} around {at} meets the boundary or the pole",
            2.0 * h
        )));
    }
    check_harmonic(|p| potential.value(p, q), at, h)
}

fn directions() -> [Point; 4] {
    [Point::one(), Point::i(), -Point::one(), -Point::i()]
}

/// Oscillation of `E_q(q + h u) - log h` after extrapolation to `h = 0`,
/// over the four axis directions `u`.
pub fn check_pole_regularity<P: Potential<f64> + ?Sized>(
    potential: &P,
    q: Point,
    h_sequence: &[f64],
    threshold: f64,
) -> Check {
    let name = "pole_regularity";
    let mut limits = Vec::new();
    let mut worst_step = 0.0f64;
    let mut witness = None;
    for u in directions() {
        let values: Result<Vec<f64>> = h_sequence
            .iter()
            .map(|&h| Ok(potential.value(q + u.scale(h), q)? - h.ln()))
            .collect();
        let last = q + u.scale(*h_sequence.last().unwrap_or(&0.0));
        let ex = values.and_then(|v| extrapolate_to_zero(h_sequence, &v));
        match ex {
            Ok(ex) if ex.value.is_finite() => {
                let step = ex.last_difference();
                if step > worst_step || witness.is_none() {
                    worst_step = worst_step.max(step);
                    witness = Some(Witness::Pair(last, q));
                }
                limits.push(ex.value);
            }
            _ => {
                return Check::new(name, f64::INFINITY, threshold, Some(Witness::Pair(last, q)));
            }
        }
    }
    let hi = limits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = limits.iter().copied().fold(f64::INFINITY, f64::min);
    Check::new(name, (hi - lo).max(worst_step), threshold, witness)
}

/// Point at distance `radius` from `element` along `angle` (for circles the
/// distance is measured inward, toward the unit circle).
pub fn approach_point(element: &BoundaryElement<f64>, radius: f64, angle: f64) -> Point {
    let u = Point::from_polar(1.0, angle);
    match *element {
        BoundaryElement::Puncture(c) => c + u.scale(radius),
        BoundaryElement::Infinity => u.scale(radius),
        BoundaryElement::Circle(r) if r < 1.0 => u.scale(r + radius),
        BoundaryElement::Circle(r) => u.scale(r - radius),
    }
}

/// Default sample radii toward `element`: every second decade from
/// `1e-2 * scale` down to `1e-300` for punctures, from `1e2 * scale` up to
/// `1e300` for infinity, and from `1e-2 * scale` down to `1e-12 * scale`
/// for circles.
pub fn approach_radii(element: &BoundaryElement<f64>, scale: f64) -> Vec<f64> {
    match element {
        BoundaryElement::Puncture(_) => (1..=150i32)
            .map(|k| scale * 10f64.powi(-2 * k))
            .collect::<Vec<f64>>(),
        BoundaryElement::Infinity => (1..=150i32).map(|k| scale * 10f64.powi(2 * k)).collect(),
        BoundaryElement::Circle(_) => (1..=6i32).map(|k| scale * 10f64.powi(-2 * k)).collect(),
    }
    .into_iter()
    .filter(|r| r.is_finite() && *r > 0.0 && *r < 1e300)
    .collect()
}

/// `E_q(p)` must increase along the approach and rise by at least `bar`.
/// Reported as `measured = first - last` against `threshold = -bar`
/// (infinite when the samples are not increasing or fail to evaluate).
pub fn check_boundary_divergence<P: Potential<f64> + ?Sized>(
    potential: &P,
    q: Point,
    element: &BoundaryElement<f64>,
    radii: &[f64],
    angle: f64,
    bar: f64,
) -> Check {
    let name = format!("boundary_divergence_{}", boundary_label(element));
    let points: Vec<Point> = radii
        .iter()
        .map(|&r| approach_point(element, r, angle))
        .collect();
    let values: Result<Vec<f64>> = points.iter().map(|&p| potential.value(p, q)).collect();
    let witness = points.last().map(|&p| Witness::Pair(p, q));
    let measured = match values {
        Ok(v)
            if v.len() >= 2
                && v.iter().all(|x| x.is_finite())
                && v.windows(2).all(|w| w[1] > w[0]) =>
        {
            v[0] - v[v.len() - 1]
        }
        _ => f64::INFINITY,
    };
    Check::new(name, measured, -bar, witness)
}

/// `E(p, q) - E(p, q2)` must settle near the boundary element: the last two
/// samples may differ by at most `tol`.
pub fn check_kernel_boundary_difference<P: Potential<f64> + ?Sized>(
    kernel: &P,
    q: Point,
    q2: Point,
    element: &BoundaryElement<f64>,
    radii: &[f64],
    angle: f64,
    tol: f64,
) -> Check {
    let name = format!("kernel_difference_bounded_{}", boundary_label(element));
    let points: Vec<Point> = radii
        .iter()
        .map(|&r| approach_point(element, r, angle))
        .collect();
    let diffs: Result<Vec<f64>> = points
        .iter()
        .map(|&p| Ok(kernel.value(p, q)? - kernel.value(p, q2)?))
        .collect();
    let witness = points.last().map(|&p| Witness::Pair(p, q));
    let measured = match diffs {
        Ok(d) if d.len() >= 2 && d.iter().all(|x| x.is_finite()) => {
            (d[d.len() - 1] - d[d.len() - 2]).abs()
        }
        _ => f64::INFINITY,
    };
    Check::new(name, measured, tol, witness)
}
