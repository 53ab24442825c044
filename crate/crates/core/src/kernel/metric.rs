use super::{avoid_punctures, once, twice, MetricParams, Potential};
use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::richardson::{extrapolate_to_zero, halving_sequence};
use crate::scalar::Real;

/// Conformal factor `|z|^{-s}` of the fundamental metric on `C \ {0}`.
pub fn fundamental_metric_punctured<T: Real>(z: CPoint<T>, s: T) -> Result<T> {
    let params = MetricParams::punctured(s)?;
    avoid_punctures(z, "z", &once())?;
    Ok((-params.s() * z.ln_modulus()).exp())
}

/// Conformal factor `|z|^{-s} |z - 1|^{-j}` of the fundamental metric on
/// `C \ {0, 1}`.
pub fn fundamental_metric_twice<T: Real>(z: CPoint<T>, s: T, j: T) -> Result<T> {
    MetricParams::twice_punctured(s, j)?;
    avoid_punctures(z, "z", &twice())?;
    let log_factor = -(s * z.ln_modulus() + j * (z - CPoint::one()).ln_modulus());
    Ok(log_factor.exp())
}

/// Dispatches on whether `params` carries the exponent at `1`.
pub fn fundamental_metric<T: Real>(z: CPoint<T>, params: &MetricParams<T>) -> Result<T> {
    match params.j() {
        None => fundamental_metric_punctured(z, params.s()),
        Some(j) => fundamental_metric_twice(z, params.s(), j),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricLimitConfig<T> {
    /// Maximum allowed difference between the last two extrapolants.
    pub tol: T,
}

impl<T: Real> Default for MetricLimitConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::epsilon().sqrt(),
        }
    }
}

/// `h_0 = 1e-2 * dist`, halved five times.
pub fn default_h_sequence<T: Real>(dist: T) -> Vec<T> {
    halving_sequence(T::lit(1e-2) * dist, 6)
}

/// Numerical fundamental metric: `exp lim_{q -> z} (E_q(z) - log|z - q|)`.
///
/// The pole approaches `z` along the four directions `1, i, -1, -i`; the
/// direction average is extrapolated to `h = 0`.
pub fn fundamental_metric_limit<T: Real, P: Potential<T> + ?Sized>(
    z: CPoint<T>,
    potential: &P,
    h_sequence: &[T],
) -> Result<T> {
    fundamental_metric_limit_with(z, potential, h_sequence, &MetricLimitConfig::default())
}

pub fn fundamental_metric_limit_with<T: Real, P: Potential<T> + ?Sized>(
    z: CPoint<T>,
    potential: &P,
    h_sequence: &[T],
    config: &MetricLimitConfig<T>,
) -> Result<T> {
    let z = z.checked()?;
    let dist = potential.boundary_distance(z);
    if dist <= T::zero() {
        return Err(Error::domain(format!("z = {z} lies on the boundary")));
    }
    if h_sequence.is_empty()
        || h_sequence.iter().any(|h| !(*h > T::zero()))
        || h_sequence.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::parameter(
            "step sizes must be positive and strictly decreasing",
        ));
    }
    if h_sequence[0] >= dist * T::half() {
        return Err(Error::parameter(format!(
            "largest step {} must be below half the boundary distance {}",
            h_sequence[0], dist
        )));
    }
    let directions = [
        CPoint::one(),
        CPoint::i(),
        -CPoint::<T>::one(),
        -CPoint::<T>::i(),
    ];
    let quarter = T::lit(0.25);
    let samples = h_sequence
        .iter()
        .map(|&h| {
            let sum = directions.iter().try_fold(T::zero(), |acc, u| {
                Ok::<_, Error>(acc + potential.value(z, z + u.scale(h))? - h.ln())
            })?;
            Ok(sum * quarter)
        })
        .collect::<Result<Vec<T>>>()?;
    let ex = extrapolate_to_zero(h_sequence, &samples)?;
    let difference = ex.last_difference();
    if difference > config.tol {
        return Err(Error::Convergence {
            difference: difference.to_f64().unwrap_or(f64::NAN),
            tol: config.tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ex.value.exp())
}
