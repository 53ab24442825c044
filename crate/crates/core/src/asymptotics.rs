//! Logarithmic growth exponents at the punctures and at infinity.
//!
//! Near a puncture `c` a potential behaves like `-b_c log|p - c|`, near
//! infinity like `b_inf log|p|`. The exponents are estimated by regressing the
//! potential against `log(radius)` along a ray, and known in closed form for
//! the explicit families.

use crate::error::{Error, Result};
use crate::kernel::{Potential, PuncturedPotential, TwicePuncturedPotential};
use crate::point::CPoint;
use crate::scalar::Real;

/// Least-squares fit of `value ~ intercept + slope * log(radius)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Max absolute deviation of the samples from the fitted line.
    pub residual: T,
    pub ray_angle: T,
    /// `(min radius, max radius)`.
    pub sample_range: (T, T),
}

pub const DEFAULT_RESIDUAL_CAP: f64 = 1e-2;

/// `per_decade` points per decade from `from` to `to` (either direction),
/// both ends included.
pub fn geometric_radii<T: Real>(from: T, to: T, per_decade: usize) -> Vec<T> {
    let (a, b) = (from.log10(), to.log10());
    let steps = ((b - a).abs() * T::from_count(per_decade))
        .round()
        .to_usize()
        .unwrap_or(0)
        .max(1);
    (0..=steps)
        .map(|i| {
            let x = a + (b - a) * T::from_count(i) / T::from_count(steps);
            T::lit(10.0).powf(x)
        })
        .collect()
}

/// Fits the potential `field` along `center + radius * e^{i angle}`.
pub fn estimate_exponent<T, F>(
    field: F,
    center: CPoint<T>,
    ray_angle: T,
    radii: &[T],
) -> Result<SlopeFit<T>>
where
    T: Real,
    F: Fn(CPoint<T>) -> Result<T>,
{
    estimate_exponent_with(
        field,
        center,
        ray_angle,
        radii,
        T::lit(DEFAULT_RESIDUAL_CAP),
    )
}

pub fn estimate_exponent_with<T, F>(
    field: F,
    center: CPoint<T>,
    ray_angle: T,
    radii: &[T],
    residual_cap: T,
) -> Result<SlopeFit<T>>
where
    T: Real,
    F: Fn(CPoint<T>) -> Result<T>,
{
    if radii.len() < 2 || radii.iter().any(|r| !(*r > T::zero() && r.is_finite())) {
        return Err(Error::parameter("need at least two positive finite radii"));
    }
    let (u, samples) = (CPoint::from_polar(T::one(), ray_angle), radii.len());
    let xs: Vec<T> = radii.iter().map(|r| r.ln()).collect();
    let ys = radii
        .iter()
        .map(|&r| field(center + u.scale(r)))
        .collect::<Result<Vec<T>>>()?;
    let n = T::from_count(samples);
    let mean_x = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let mean_y = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (sxy, sxx) = xs
        .iter()
        .zip(&ys)
        .fold((T::zero(), T::zero()), |(sxy, sxx), (&x, &y)| {
            let dx = x - mean_x;
            (sxy + dx * (y - mean_y), sxx + dx * dx)
        });
    if sxx == T::zero() {
        return Err(Error::parameter("radii must not all coincide"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (y - intercept - slope * x).abs())
        .fold(T::zero(), T::max);
    if !(residual <= residual_cap) {
        return Err(Error::Fit {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            cap: residual_cap.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lo = radii.iter().copied().fold(T::infinity(), T::min);
    let hi = radii.iter().copied().fold(T::neg_infinity(), T::max);
    Ok(SlopeFit {
        slope,
        intercept,
        residual,
        ray_angle,
        sample_range: (lo, hi),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `C \ {0}`
    Punctured,
    /// `C \ {0, 1}`
    TwicePunctured,
}

/// The symmetric (kernel) slots used for the growth-exponent problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family<T> {
    Punctured { k: T },
    TwicePunctured { k: T, m: T },
}

impl<T: Real> Family<T> {
    pub fn domain(&self) -> Domain {
        match self {
            Family::Punctured { .. } => Domain::Punctured,
            Family::TwicePunctured { .. } => Domain::TwicePunctured,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Family::Punctured { k } => PuncturedPotential::kernel(k).map(|_| ()),
            Family::TwicePunctured { k, m } => TwicePuncturedPotential::kernel(k, m).map(|_| ()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentReport<T> {
    pub b0: T,
    /// Exponent at `1` (twice-punctured plane only).
    pub b1: Option<T>,
    pub b_inf: T,
    pub b_max: T,
}

impl<T: Real> ExponentReport<T> {
    fn new(b0: T, b1: Option<T>, b_inf: T) -> Self {
        let b_max = b1.map_or(b0.max(b_inf), |b1| b0.max(b1).max(b_inf));
        Self {
            b0,
            b1,
            b_inf,
            b_max,
        }
    }

    /// Largest absolute difference between corresponding exponents.
    pub fn max_deviation(&self, other: &Self) -> T {
        let d1 = match (self.b1, other.b1) {
            (Some(a), Some(b)) => (a - b).abs(),
            (None, None) => T::zero(),
            _ => T::infinity(),
        };
        (self.b0 - other.b0)
            .abs()
            .max((self.b_inf - other.b_inf).abs())
            .max(d1)
    }
}

/// Closed-form exponents: `(k, 1 - k)` on `C \ {0}`, `(k, m, 1 - k - m)` on
/// `C \ {0, 1}`.
pub fn b_max_of_family<T: Real>(family: &Family<T>) -> Result<ExponentReport<T>> {
    family.validate()?;
    Ok(match *family {
        Family::Punctured { k } => ExponentReport::new(k, None, T::one() - k),
        Family::TwicePunctured { k, m } => ExponentReport::new(k, Some(m), T::one() - k - m),
    })
}

/// Regression settings for [`empirical_exponents`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentSampling<T> {
    pub pole: CPoint<T>,
    pub ray_angle: T,
    /// Radii toward a puncture run from `near.0` down to `near.1`.
    pub near: (T, T),
    /// Radii toward infinity run from `far.0` up to `far.1`.
    pub far: (T, T),
    pub per_decade: usize,
}

impl<T: Real> Default for ExponentSampling<T> {
    fn default() -> Self {
        Self {
            pole: CPoint::new(T::lit(0.6), T::lit(0.8)),
            ray_angle: T::lit(0.7),
            near: (T::lit(1e-4), T::lit(1e-7)),
            far: (T::lit(1e4), T::lit(1e7)),
            per_decade: 4,
        }
    }
}

/// Exponents of the family's Evans kernel estimated by [`estimate_exponent`].
pub fn empirical_exponents<T: Real>(
    family: &Family<T>,
    sampling: &ExponentSampling<T>,
) -> Result<ExponentReport<T>> {
    let near = geometric_radii(sampling.near.0, sampling.near.1, sampling.per_decade);
    let far = geometric_radii(sampling.far.0, sampling.far.1, sampling.per_decade);
    let q = sampling.pole;
    let fit = |pot: &dyn Potential<T>, center: CPoint<T>, radii: &[T]| {
        estimate_exponent(|p| pot.value(p, q), center, sampling.ray_angle, radii).map(|f| f.slope)
    };
    match *family {
        Family::Punctured { k } => {
            let pot = PuncturedPotential::kernel(k)?;
            let b0 = -fit(&pot, CPoint::zero(), &near)?;
            let b_inf = fit(&pot, CPoint::zero(), &far)?;
            Ok(ExponentReport::new(b0, None, b_inf))
        }
        Family::TwicePunctured { k, m } => {
            let pot = TwicePuncturedPotential::kernel(k, m)?;
            let b0 = -fit(&pot, CPoint::zero(), &near)?;
            let b1 = -fit(&pot, CPoint::one(), &near)?;
            let b_inf = fit(&pot, CPoint::zero(), &far)?;
            Ok(ExponentReport::new(b0, Some(b1), b_inf))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimizer<T> {
    pub argmin: Family<T>,
    pub min_b_max: T,
}

/// Grid search for the smallest `b_max` over the admissible kernel slots.
/// Grid points are `i * grid_step`; ties keep the lexicographically smallest
/// parameter tuple.
pub fn minimize_b_max<T: Real>(domain: Domain, grid_step: T) -> Result<Minimizer<T>> {
    if !(grid_step > T::zero() && grid_step < T::one()) {
        return Err(Error::parameter(format!(
            "grid step {grid_step} must lie in (0, 1)"
        )));
    }
    let at = |i: usize| T::from_count(i) * grid_step;
    let mut best: Option<Minimizer<T>> = None;
    // values within a few ulps are ties; the first (smallest) tuple stays
    let tie = T::lit(4.0) * T::epsilon();
    let mut consider = |argmin: Family<T>, value: T| {
        if best.is_none_or(|b| value < b.min_b_max - tie) {
            best = Some(Minimizer {
                argmin,
                min_b_max: value,
            });
        }
    };
    match domain {
        Domain::Punctured => {
            for k in (1..).map(at).take_while(|&k| k < T::one()) {
                consider(Family::Punctured { k }, k.max(T::one() - k));
            }
        }
        Domain::TwicePunctured => {
            for i in (1..).take_while(|&i| at(i) < T::one()) {
                for j in (1..).take_while(|&j| at(i + j) < T::one()) {
                    let (k, m) = (at(i), at(j));
                    consider(
                        Family::TwicePunctured { k, m },
                        k.max(m).max(T::one() - k - m),
                    );
                }
            }
        }
    }
    best.ok_or_else(|| {
        Error::parameter(format!("grid step {grid_step} leaves no admissible point"))
    })
}
