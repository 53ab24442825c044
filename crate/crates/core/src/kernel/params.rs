use crate::error::{Error, Result};
use crate::scalar::Real;

fn open_unit<T: Real>(name: &str, x: T) -> Result<T> {
    if x.is_finite() && x > T::zero() && x < T::one() {
        Ok(x)
    } else {
        Err(Error::parameter(format!("{name} = {x} must lie in (0, 1)")))
    }
}

fn positive<T: Real>(name: &str, x: T) -> Result<T> {
    if x.is_finite() && x > T::zero() {
        Ok(x)
    } else {
        Err(Error::parameter(format!("{name} = {x} must be positive")))
    }
}

/// Exponents `(k, l)` of the potentials on the once-punctured plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PuncturedParams<T> {
    k: T,
    l: T,
}

impl<T: Real> PuncturedParams<T> {
    /// Requires `0 < k < 1` and `0 < l < 1`.
    pub fn new(k: T, l: T) -> Result<Self> {
        Ok(Self {
            k: open_unit("k", k)?,
            l: open_unit("l", l)?,
        })
    }

    /// The symmetric slot `k = l`, which makes the potential a kernel.
    pub fn symmetric(l: T) -> Result<Self> {
        Self::new(l, l)
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn is_symmetric(&self) -> bool {
        self.k == self.l
    }
}

/// Exponents `(k, l, m, n)` of the potentials on the twice-punctured plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwicePuncturedParams<T> {
    k: T,
    l: T,
    m: T,
    n: T,
}

impl<T: Real> TwicePuncturedParams<T> {
    /// Requires all exponents positive, `k + m < 1` and `l + n < 1`.
    pub fn new(k: T, l: T, m: T, n: T) -> Result<Self> {
        let (k, l, m, n) = (
            positive("k", k)?,
            positive("l", l)?,
            positive("m", m)?,
            positive("n", n)?,
        );
        if k + m >= T::one() {
            return Err(Error::parameter(format!("k + m = {} must be < 1", k + m)));
        }
        if l + n >= T::one() {
            return Err(Error::parameter(format!("l + n = {} must be < 1", l + n)));
        }
        Ok(Self { k, l, m, n })
    }

    /// Kernel slots `k = l`, `m = n`.
    pub fn symmetric(k: T, m: T) -> Result<Self> {
        Self::new(k, k, m, m)
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn l(&self) -> T {
        self.l
    }

    pub fn m(&self) -> T {
        self.m
    }

    pub fn n(&self) -> T {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.k == self.l && self.m == self.n
    }
}

/// Exponents of the fundamental metric `|z|^{-s} |z-1|^{-j} |dz|^2`; `j` is
/// absent on the once-punctured plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricParams<T> {
    s: T,
    j: Option<T>,
}

impl<T: Real> MetricParams<T> {
    /// `0 < s < 2`.
    pub fn punctured(s: T) -> Result<Self> {
        if s.is_finite() && s > T::zero() && s < T::two() {
            Ok(Self { s, j: None })
        } else {
            Err(Error::parameter(format!("s = {s} must lie in (0, 2)")))
        }
    }

    /// `s, j > 0` and `s + j < 2`.
    pub fn twice_punctured(s: T, j: T) -> Result<Self> {
        let (s, j) = (positive("s", s)?, positive("j", j)?);
        if s + j >= T::two() {
            return Err(Error::parameter(format!("s + j = {} must be < 2", s + j)));
        }
        Ok(Self { s, j: Some(j) })
    }

    /// Metric induced by a once-punctured potential: `s = k + l`.
    pub fn from_punctured(params: &PuncturedParams<T>) -> Self {
        Self {
            s: params.k + params.l,
            j: None,
        }
    }

    /// Metric induced by a twice-punctured potential: `s = k + l`, `j = m + n`.
    pub fn from_twice_punctured(params: &TwicePuncturedParams<T>) -> Self {
        Self {
            s: params.k + params.l,
            j: Some(params.m + params.n),
        }
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn j(&self) -> Option<T> {
        self.j
    }
}
