//! Closed-form Evans-Selberg potentials, Evans kernels and fundamental
//! metrics on `C \ {0}` and `C \ {0, 1}`.
//!
//! Every value is assembled from real logarithms of moduli. Nothing here
//! takes the logarithm of a complex product, so no branch cut is involved.

mod metric;
mod params;

pub use metric::{
    default_h_sequence, fundamental_metric, fundamental_metric_limit,
    fundamental_metric_limit_with, fundamental_metric_punctured, fundamental_metric_twice,
    MetricLimitConfig,
};
pub use params::{MetricParams, PuncturedParams, TwicePuncturedParams};

use crate::error::{Error, Result};
use crate::point::CPoint;
use crate::scalar::Real;

/// Part of the ideal boundary of a planar domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryElement<T> {
    /// An isolated puncture.
    Puncture(CPoint<T>),
    /// The point at infinity.
    Infinity,
    /// A circle `|z| = radius` (annulus boundaries).
    Circle(T),
}

/// A function `E_q(p)` with a logarithmic pole at `q`, defined on a planar
/// domain described by its boundary elements.
pub trait Potential<T: Real> {
    /// `E_q(p)`.
    fn value(&self, p: CPoint<T>, q: CPoint<T>) -> Result<T>;

    fn boundary(&self) -> Vec<BoundaryElement<T>>;

    /// Whether `value(p, q) == value(q, p)` is part of the contract.
    fn is_symmetric(&self) -> bool {
        false
    }

    /// Euclidean distance from `p` to the finite part of the boundary.
    fn boundary_distance(&self, p: CPoint<T>) -> T {
        self.boundary()
            .into_iter()
            .filter_map(|b| match b {
                BoundaryElement::Puncture(c) => Some(p.dist(&c)),
                BoundaryElement::Circle(radius) => Some((p.modulus() - radius).abs()),
                BoundaryElement::Infinity => None,
            })
            .fold(T::infinity(), T::min)
    }
}

fn check_point<T: Real>(p: CPoint<T>, what: &str) -> Result<()> {
    if p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} = {p} is not finite")))
    }
}

fn avoid_punctures<T: Real>(p: CPoint<T>, what: &str, punctures: &[CPoint<T>]) -> Result<()> {
    check_point(p, what)?;
    match punctures.iter().find(|&&c| p == c) {
        Some(c) => Err(Error::domain(format!("{what} = {p} is the puncture {c}"))),
        None => Ok(()),
    }
}

fn check_pair<T: Real>(p: CPoint<T>, q: CPoint<T>, punctures: &[CPoint<T>]) -> Result<()> {
    avoid_punctures(p, "p", punctures)?;
    avoid_punctures(q, "q", punctures)?;
    if p == q {
        Err(Error::Pole)
    } else {
        Ok(())
    }
}

fn once<T: Real>() -> [CPoint<T>; 1] {
    [CPoint::zero()]
}

fn twice<T: Real>() -> [CPoint<T>; 2] {
    [CPoint::zero(), CPoint::one()]
}

/// `log |p - q| - k log|p| - l log|q|`.
pub fn evans_selberg_punctured<T: Real>(
    p: CPoint<T>,
    q: CPoint<T>,
    params: &PuncturedParams<T>,
) -> Result<T> {
    check_pair(p, q, &once())?;
    Ok(punctured_unchecked(p, q, params.k(), params.l()))
}

#[inline]
fn punctured_unchecked<T: Real>(p: CPoint<T>, q: CPoint<T>, k: T, l: T) -> T {
    (p - q).ln_modulus() - (k * p.ln_modulus() + l * q.ln_modulus())
}

/// `log |p - q| - l log|pq|`, symmetric in `(p, q)` bit for bit.
pub fn evans_kernel_punctured<T: Real>(p: CPoint<T>, q: CPoint<T>, l: T) -> Result<T> {
    let params = PuncturedParams::symmetric(l)?;
    evans_selberg_punctured(p, q, &params)
}

/// `log |p - q| - k log|p| - l log|q| - m log|p - 1| - n log|q - 1|`.
pub fn evans_selberg_twice<T: Real>(
    p: CPoint<T>,
    q: CPoint<T>,
    params: &TwicePuncturedParams<T>,
) -> Result<T> {
    check_pair(p, q, &twice())?;
    let one = CPoint::one();
    let at_zero = params.k() * p.ln_modulus() + params.l() * q.ln_modulus();
    let at_one = params.m() * (p - one).ln_modulus() + params.n() * (q - one).ln_modulus();
    Ok((p - q).ln_modulus() - (at_zero + at_one))
}

/// `log |p - q| - k log|pq| - m log|(p - 1)(q - 1)|`, symmetric bit for bit.
pub fn evans_kernel_twice<T: Real>(p: CPoint<T>, q: CPoint<T>, k: T, m: T) -> Result<T> {
    let params = TwicePuncturedParams::symmetric(k, m)?;
    evans_selberg_twice(p, q, &params)
}

/// Evans-Selberg potential family on `C \ {0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PuncturedPotential<T> {
    pub params: PuncturedParams<T>,
}

impl<T: Real> PuncturedPotential<T> {
    pub fn new(k: T, l: T) -> Result<Self> {
        Ok(Self {
            params: PuncturedParams::new(k, l)?,
        })
    }

    /// The Evans kernel `log |p - q| / |pq|^l`.
    pub fn kernel(l: T) -> Result<Self> {
        Ok(Self {
            params: PuncturedParams::symmetric(l)?,
        })
    }
}

impl<T: Real> Potential<T> for PuncturedPotential<T> {
    fn value(&self, p: CPoint<T>, q: CPoint<T>) -> Result<T> {
        evans_selberg_punctured(p, q, &self.params)
    }

    fn boundary(&self) -> Vec<BoundaryElement<T>> {
        vec![
            BoundaryElement::Puncture(CPoint::zero()),
            BoundaryElement::Infinity,
        ]
    }

    fn is_symmetric(&self) -> bool {
        self.params.is_symmetric()
    }
}

/// Evans-Selberg potential family on `C \ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwicePuncturedPotential<T> {
    pub params: TwicePuncturedParams<T>,
}

impl<T: Real> TwicePuncturedPotential<T> {
    pub fn new(k: T, l: T, m: T, n: T) -> Result<Self> {
        Ok(Self {
            params: TwicePuncturedParams::new(k, l, m, n)?,
        })
    }

    /// The Evans kernel `log |p - q| / (|pq|^k |(p-1)(q-1)|^m)`.
    pub fn kernel(k: T, m: T) -> Result<Self> {
        Ok(Self {
            params: TwicePuncturedParams::symmetric(k, m)?,
        })
    }
}

impl<T: Real> Potential<T> for TwicePuncturedPotential<T> {
    fn value(&self, p: CPoint<T>, q: CPoint<T>) -> Result<T> {
        evans_selberg_twice(p, q, &self.params)
    }

    fn boundary(&self) -> Vec<BoundaryElement<T>> {
        vec![
            BoundaryElement::Puncture(CPoint::zero()),
            BoundaryElement::Puncture(CPoint::one()),
            BoundaryElement::Infinity,
        ]
    }

    fn is_symmetric(&self) -> bool {
        self.params.is_symmetric()
    }
}

/// Wraps an arbitrary closure as a potential, e.g. for negative controls.
pub struct FnPotential<T, F> {
    pub f: F,
    pub boundary: Vec<BoundaryElement<T>>,
    pub symmetric: bool,
}

impl<T: Real, F> FnPotential<T, F>
where
    F: Fn(CPoint<T>, CPoint<T>) -> Result<T>,
{
    pub fn new(f: F, boundary: Vec<BoundaryElement<T>>) -> Self {
        Self {
            f,
            boundary,
            symmetric: false,
        }
    }
}

impl<T: Real, F> Potential<T> for FnPotential<T, F>
where
    F: Fn(CPoint<T>, CPoint<T>) -> Result<T>,
{
    fn value(&self, p: CPoint<T>, q: CPoint<T>) -> Result<T> {
        (self.f)(p, q)
    }

    fn boundary(&self) -> Vec<BoundaryElement<T>> {
        self.boundary.clone()
    }

    fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}
