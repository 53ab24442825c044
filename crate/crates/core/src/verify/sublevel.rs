//! Compares the annulus `{e^{-2t} < |p| < e^{2t}}` with the sublevel set
//! `{|p - 1| / sqrt|p| < e^t - e^{-t}}` of the Evans kernel with pole `1`.

use serde::Serialize;

/// Crossing radii of the level curve along one ray.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SublevelEntry {
    pub angle: f64,
    pub outer_radius: f64,
    pub inner_radius: f64,
    /// `|log(outer_radius) - 2t|`
    pub outer_discrepancy: f64,
    /// `|log(inner_radius) + 2t|`
    pub inner_discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SublevelReport {
    pub t: f64,
    pub max_radial_log_discrepancy: f64,
    pub entries: Vec<SublevelEntry>,
}

/// `|e^s e^{i angle} - 1| / e^{s/2} - level`.
fn level_gap(s: f64, angle: f64, level: f64) -> f64 {
    // |p - 1|^2 / |p| = |p| + 1/|p| - 2 cos(angle)
    let rho_term = 2.0 * s.cosh();
    (rho_term - 2.0 * angle.cos()).max(0.0).sqrt() - level
}

/// Bisection on `[lo, hi]` in log-radius; `gap` must change sign.
fn bisect(mut lo: f64, mut hi: f64, gap: impl Fn(f64) -> f64) -> f64 {
    let rising = gap(hi) > gap(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (gap(mid) > 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Outer and inner crossing radii of `|p - 1| / sqrt|p| = e^t - e^{-t}`
/// along the ray at `angle`.
pub fn sublevel_crossings(t: f64, angle: f64) -> (f64, f64) {
    let level = 2.0 * t.sinh();
    let gap = |s: f64| level_gap(s, angle, level);
    let mut hi = 1.0;
    while gap(hi) <= 0.0 {
        hi *= 2.0;
    }
    let outer = bisect(0.0, hi, gap);
    let inner = bisect(-hi, 0.0, gap);
    (outer.exp(), inner.exp())
}

/// Samples `angular_samples` equally spaced rays starting at angle `0`.
pub fn compare_sublevel_sets(t: f64, angular_samples: usize) -> SublevelReport {
    let entries: Vec<SublevelEntry> = (0..angular_samples.max(1))
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / angular_samples.max(1) as f64;
            let (outer, inner) = sublevel_crossings(t, angle);
            SublevelEntry {
                angle,
                outer_radius: outer,
                inner_radius: inner,
                outer_discrepancy: (outer.ln() - 2.0 * t).abs(),
                inner_discrepancy: (inner.ln() + 2.0 * t).abs(),
            }
        })
        .collect();
    let max_radial_log_discrepancy = entries
        .iter()
        .map(|e| e.outer_discrepancy.max(e.inner_discrepancy))
        .fold(0.0, f64::max);
    SublevelReport {
        t,
        max_radial_log_discrepancy,
        entries,
    }
}
