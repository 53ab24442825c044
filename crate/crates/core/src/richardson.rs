//! Richardson extrapolation of `h -> 0` limits.
//!
//! The samples `values[i] = A(h_i)` are assumed to follow
//! `A(h) = A_0 + c_1 h + c_2 h^2 + ...`; the table is Neville's scheme for the
//! interpolating polynomial evaluated at `h = 0`.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Extrapolation<T> {
    /// Highest-order extrapolant.
    pub value: T,
    /// `diagonal[n]` uses the first `n + 1` samples.
    pub diagonal: Vec<T>,
}

impl<T: Real> Extrapolation<T> {
    /// Difference between the last two diagonal entries.
    pub fn last_difference(&self) -> T {
        match self.diagonal.len() {
            0 | 1 => T::zero(),
            n => (self.diagonal[n - 1] - self.diagonal[n - 2]).abs(),
        }
    }
}

pub fn extrapolate_to_zero<T: Real>(steps: &[T], values: &[T]) -> Result<Extrapolation<T>> {
    if steps.is_empty() || steps.len() != values.len() {
        return Err(Error::parameter(format!(
            "need matching non-empty step/value lists (got {} and {})",
            steps.len(),
            values.len()
        )));
    }
    if steps.windows(2).any(|w| w[1] == w[0]) {
        return Err(Error::parameter("extrapolation steps must be distinct"));
    }
    let n = steps.len();
    // row[i] holds P_{i, i+level}(0)
    let mut row = values.to_vec();
    let mut diagonal = Vec::with_capacity(n);
    diagonal.push(row[0]);
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (steps[i], steps[i + level]);
            row[i] = (hi * row[i + 1] - hj * row[i]) / (hi - hj);
        }
        diagonal.push(row[0]);
    }
    Ok(Extrapolation {
        value: row[0],
        diagonal,
    })
}

/// `h_0, h_0/2, ..., h_0/2^{levels-1}`.
pub fn halving_sequence<T: Real>(h0: T, levels: usize) -> Vec<T> {
    std::iter::successors(Some(h0), |h| Some(*h * T::half()))
        .take(levels)
        .collect()
}
