//! Negative Green kernel of the symmetric annulus `{r < |z| < 1/r}`.
//!
//! The kernel is the product formula
//!
//! ```text
//! g(p, q) = log r^{1/2} - log|p| log|q| / (2 log r) + log(|p - q| / sqrt|pq|)
//!         + sum_j [ log|1 - (p/q) r^{4j}| + log|1 - (q/p) r^{4j}|
//!                 - log|1 - p conj(q) r^{4j-2}| - log|1 - r^{4j-2} / (p conj(q))| ]
//! ```
//!
//! truncated after `J` factors per family, with `J` chosen per evaluation so
//! that the omitted tail is certified below the requested tolerance.

use crate::error::{Error, Result};
use crate::kernel::{evans_kernel_punctured, BoundaryElement, Potential};
use crate::point::CPoint;
use crate::scalar::Real;

/// Default cap on the number of product factors.
pub const DEFAULT_J_MAX: usize = 1_000_000;

/// The annulus `{r < |z| < 1/r}` together with the truncation tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusSpec<T> {
    r: T,
    t: T,
    tol: T,
}

impl<T: Real> AnnulusSpec<T> {
    /// Requires `0 < r < 1` and `tol > 0`.
    pub fn new(r: T, tol: T) -> Result<Self> {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::parameter(format!("r = {r} must lie in (0, 1)")));
        }
        Self::check_tol(tol)?;
        Ok(Self {
            r,
            t: -T::half() * r.ln(),
            tol,
        })
    }

    /// The exhaustion annulus with `r = e^{-2t}`, `t > 0`.
    pub fn from_t(t: T, tol: T) -> Result<Self> {
        if !(t > T::zero() && t.is_finite()) {
            return Err(Error::parameter(format!("t = {t} must be positive")));
        }
        Self::check_tol(tol)?;
        Ok(Self {
            r: (-T::two() * t).exp(),
            t,
            tol,
        })
    }

    fn check_tol(tol: T) -> Result<()> {
        if tol > T::zero() && tol.is_finite() {
            Ok(())
        } else {
            Err(Error::parameter(format!("tol = {tol} must be positive")))
        }
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    /// `t = -log(r) / 2`.
    pub fn t(&self) -> T {
        self.t
    }

    /// `log r = -2t`.
    pub fn log_r(&self) -> T {
        -T::two() * self.t
    }

    /// `log r^{1/2} = -t`.
    pub fn half_log_r(&self) -> T {
        -self.t
    }

    /// `T = log(e^t - e^{-t})`, evaluated as `t + log(1 - e^{-2t})`.
    pub fn big_t(&self) -> T {
        self.t + normalization_residual(self.t)
    }

    pub fn outer_radius(&self) -> T {
        self.r.recip()
    }

    /// Whether `r < |p| < 1/r`. With `closed`, points on the circles are
    /// accepted up to a few ulps of rounding in `|p|`.
    pub fn contains(&self, p: CPoint<T>, closed: bool) -> bool {
        let m = p.modulus();
        if closed {
            let slack = T::lit(8.0) * T::epsilon();
            m >= self.r * (T::one() - slack) && m <= self.outer_radius() * (T::one() + slack)
        } else {
            m > self.r && m < self.outer_radius()
        }
    }
}

/// Number of product factors and the certified bound on what is left out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPlan<T> {
    pub factors: usize,
    pub tail_bound: T,
}

/// Evaluation switches for [`green_negative_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreenOptions {
    /// Accept points on the two boundary circles.
    pub allow_boundary: bool,
    pub j_max: usize,
}

impl Default for GreenOptions {
    fn default() -> Self {
        Self {
            allow_boundary: false,
            j_max: DEFAULT_J_MAX,
        }
    }
}

/// `log M` with `M = max(|p/q|, |q/p|, |pq|, 1/|pq|)`.
fn log_factor_bound<T: Real>(p: CPoint<T>, q: CPoint<T>) -> T {
    let (lp, lq) = (p.ln_modulus(), q.ln_modulus());
    (lp - lq).abs().max((lp + lq).abs())
}

/// Smallest `J >= 1` with `8 M r^{4J+2} / (1 - r^4) <= tol` and
/// `M r^{4J+2} <= 1/2`; the second condition makes `|log(1 - x)| <= 2|x|`
/// valid for every omitted factor.
pub fn truncation_plan<T: Real>(
    p: CPoint<T>,
    q: CPoint<T>,
    annulus: &AnnulusSpec<T>,
) -> Result<TruncationPlan<T>> {
    truncation_plan_with(p, q, annulus, DEFAULT_J_MAX)
}

pub fn truncation_plan_with<T: Real>(
    p: CPoint<T>,
    q: CPoint<T>,
    annulus: &AnnulusSpec<T>,
    j_max: usize,
) -> Result<TruncationPlan<T>> {
    let failure = || Error::Truncation {
        j_max,
        tol: annulus.tol.to_f64().unwrap_or(f64::NAN),
    };
    let log_r = annulus.log_r();
    let log_m = log_factor_bound(p, q);
    // -log(1 - r^4) >= 0
    let log_geometric = -(-(T::lit(4.0) * log_r).exp_m1()).ln();
    let log_eight = T::lit(8.0).ln();
    let log_tail = |j: T| log_eight + log_m + (T::lit(4.0) * j + T::two()) * log_r + log_geometric;
    let log_lead = |j: T| log_m + (T::lit(4.0) * j + T::two()) * log_r;
    let ok = |j: T| log_tail(j) <= annulus.tol.ln() && log_lead(j) <= -T::two().ln();

    // both conditions are linear in J; solve and then settle rounding by stepping
    let need_tail =
        ((annulus.tol.ln() - log_eight - log_m - log_geometric) / log_r - T::two()) / T::lit(4.0);
    let need_lead = ((-T::two().ln() - log_m) / log_r - T::two()) / T::lit(4.0);
    let estimate = need_tail.max(need_lead).ceil().max(T::one());
    if !estimate.is_finite() || estimate > T::from_count(j_max) {
        return Err(failure());
    }
    let mut j = estimate.to_usize().ok_or_else(failure)?.max(1);
    while j > 1 && ok(T::from_count(j - 1)) {
        j -= 1;
    }
    while !ok(T::from_count(j)) {
        j += 1;
        if j > j_max {
            return Err(failure());
        }
    }
    Ok(TruncationPlan {
        factors: j,
        tail_bound: log_tail(T::from_count(j)).exp(),
    })
}

/// `log|1 - w|` for `w = z * x` with real `x`, accurate when `|w|` is small.
#[inline]
fn ln_abs_one_minus<T: Real>(z: CPoint<T>, x: T) -> T {
    let (wr, wi) = (z.re * x, z.im * x);
    T::half() * (wr * wr + wi * wi - T::two() * wr).ln_1p()
}

/// Negative Green kernel `g(p, q)` of the annulus (`<= 0`, zero on both
/// circles, `log|p - q|` singularity at the pole).
pub fn green_negative<T: Real>(p: CPoint<T>, q: CPoint<T>, annulus: &AnnulusSpec<T>) -> Result<T> {
    green_negative_with(p, q, annulus, &GreenOptions::default())
}

pub fn green_negative_with<T: Real>(
    p: CPoint<T>,
    q: CPoint<T>,
    annulus: &AnnulusSpec<T>,
    options: &GreenOptions,
) -> Result<T> {
    for (what, z) in [("p", p), ("q", q)] {
        let z = z.checked()?;
        if !annulus.contains(z, options.allow_boundary) {
            return Err(Error::domain(format!(
                "{what} = {z} lies outside the annulus {} < |z| < {}",
                annulus.r(),
                annulus.outer_radius()
            )));
        }
    }
    if p == q {
        return Err(Error::Pole);
    }
    let plan = truncation_plan_with(p, q, annulus, options.j_max)?;

    let (lp, lq) = (p.ln_modulus(), q.ln_modulus());
    let log_r = annulus.log_r();
    let head = annulus.half_log_r() - lp * lq / (T::two() * log_r) + (p - q).ln_modulus()
        - T::half() * (lp + lq);

    let ratio = p / q;
    let inv_ratio = q / p;
    let image = p * q.conj();
    let inv_image = CPoint::one() / image;
    let r2 = (T::two() * log_r).exp();
    let r4 = r2 * r2;
    let (mut even, mut odd) = (r4, r2);
    let mut sum = T::zero();
    for _ in 0..plan.factors {
        sum = sum + (ln_abs_one_minus(ratio, even) + ln_abs_one_minus(inv_ratio, even))
            - (ln_abs_one_minus(image, odd) + ln_abs_one_minus(inv_image, odd));
        even = even * r4;
        odd = odd * r4;
        if odd == T::zero() {
            break;
        }
    }
    Ok(head + sum)
}

/// `G_t(p, q) + log(e^t - e^{-t})` on the annulus `e^{-2t} < |z| < e^{2t}`.
pub fn nakai_shifted_green<T: Real>(p: CPoint<T>, q: CPoint<T>, t: T, tol: T) -> Result<T> {
    let annulus = AnnulusSpec::from_t(t, tol)?;
    Ok(green_negative(p, q, &annulus)? + annulus.big_t())
}

/// `log r^{1/2} + T` for `r = e^{-2t}`, i.e. `log(1 - e^{-2t})`. Negative,
/// increasing in `t`, tending to zero. Only meaningful for `t > 0`.
pub fn normalization_residual<T: Real>(t: T) -> T {
    (-(-T::two() * t).exp()).ln_1p()
}

/// The limit of [`nakai_shifted_green`] as `t -> infinity`.
pub fn nakai_limit<T: Real>(p: CPoint<T>, q: CPoint<T>) -> Result<T> {
    evans_kernel_punctured(p, q, T::half())
}

/// The annulus Green kernel as a [`Potential`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusGreen<T> {
    pub annulus: AnnulusSpec<T>,
    pub options: GreenOptions,
}

impl<T: Real> AnnulusGreen<T> {
    pub fn new(annulus: AnnulusSpec<T>) -> Self {
        Self {
            annulus,
            options: GreenOptions::default(),
        }
    }
}

impl<T: Real> Potential<T> for AnnulusGreen<T> {
    fn value(&self, p: CPoint<T>, q: CPoint<T>) -> Result<T> {
        green_negative_with(p, q, &self.annulus, &self.options)
    }

    fn boundary(&self) -> Vec<BoundaryElement<T>> {
        vec![
            BoundaryElement::Circle(self.annulus.r()),
            BoundaryElement::Circle(self.annulus.outer_radius()),
        ]
    }

    fn is_symmetric(&self) -> bool {
        true
    }
}
