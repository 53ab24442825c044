use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::green::{nakai_limit, nakai_shifted_green};
use crate::Point;

pub const DEFAULT_SEED: u64 = 20_150_109;
pub const STANDARD_SAMPLE_COUNT: usize = 12;

/// Sup-errors of `G_t + log(e^t - e^{-t})` against the limiting kernel.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub t_values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log(error)` against `t`; absent with fewer than
    /// two finite, positive errors.
    pub fitted_rate: Option<f64>,
}

impl ConvergenceReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.errors.windows(2).all(|w| w[1] < w[0])
    }
}

/// Seeded pairs with `0.5 <= |p|, |q| <= 2`, log-uniform in modulus and
/// uniform in angle.
pub fn standard_sample_set(seed: u64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (0.5f64.ln(), 2f64.ln());
    let mut draw = || {
        let modulus = rng.gen_range(lo..=hi).exp();
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        Point::from_polar(modulus, angle)
    };
    (0..STANDARD_SAMPLE_COUNT)
        .map(|_| (draw(), draw()))
        .collect()
}

fn fitted_rate(ts: &[f64], errors: &[f64]) -> Option<f64> {
    if ts.len() < 2 || errors.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return None;
    }
    let n = ts.len() as f64;
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = ts.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = ts.iter().map(|x| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `errors[i] = max_samples |G_{t_i}(p, q) + log(e^{t_i} - e^{-t_i}) - log(|p - q| / sqrt|pq|)|`.
pub fn nakai_convergence_study(
    samples: &[(Point, Point)],
    t_values: &[f64],
    tol: f64,
) -> Result<ConvergenceReport> {
    if samples.iter().any(|(p, q)| p == q) {
        return Err(Error::Pole);
    }
    if t_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::parameter("t values must be strictly increasing"));
    }
    let limits = samples
        .iter()
        .map(|&(p, q)| nakai_limit(p, q))
        .collect::<Result<Vec<f64>>>()?;
    let errors = t_values
        .iter()
        .map(|&t| {
            samples
                .iter()
                .zip(&limits)
                .try_fold(0.0f64, |worst, (&(p, q), &limit)| {
                    Ok(worst.max((nakai_shifted_green(p, q, t, tol)? - limit).abs()))
                })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ConvergenceReport {
        t_values: t_values.to_vec(),
        fitted_rate: fitted_rate(t_values, &errors),
        errors,
    })
}
