//! Finite-difference Green function of the annulus, independent of the
//! product formula.
//!
//! The pole is split off: `u = v + log|p - q|` where `v` is harmonic with
//! boundary data `-log|p - q|`. The Laplace problem for `v` is discretized
//! on a grid uniform in `(log|p|, arg p)`, where the Laplacian is a constant
//! coefficient five-point stencil. The angular direction is periodic, so
//! each discrete Fourier mode decouples into a tridiagonal system in the
//! radial direction, solved exactly; the discrete residual is then checked.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::green::{green_negative, AnnulusSpec};
use crate::Point;

/// Cap on the scaled residual of the discrete Laplace equation.
pub const ORACLE_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct FDOracleGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub r: f64,
    pub q: Point,
    /// `u` at node `(i, j)`, row-major in `i`; rows `0` and `n_r` are the circles.
    pub values: Vec<f64>,
    /// The harmonic part `v = u - log|p - q|`.
    pub regular: Vec<f64>,
    /// Max residual of the discrete equation divided by its diagonal coefficient.
    pub residual: f64,
}

impl FDOracleGrid {
    pub fn ds(&self) -> f64 {
        -2.0 * self.r.ln() / self.n_r as f64
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    pub fn node(&self, i: usize, j: usize) -> Point {
        let s = self.r.ln() + i as f64 * self.ds();
        Point::from_polar(s.exp(), j as f64 * self.dtheta())
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_theta + j]
    }

    pub fn regular_part(&self, i: usize, j: usize) -> f64 {
        self.regular[i * self.n_theta + j]
    }

    /// Bilinear interpolation of the regular part in `(log|p|, arg p)`, plus
    /// the pole term.
    pub fn interpolate(&self, p: Point) -> Result<f64> {
        let s = p.ln_modulus() - self.r.ln();
        let x = s / self.ds();
        if !(x >= 0.0 && x <= self.n_r as f64) {
            return Err(Error::domain(format!("{p} lies outside the oracle grid")));
        }
        let y = p.arg().rem_euclid(TAU) / self.dtheta();
        let (i0, j0) = (
            (x.floor() as usize).min(self.n_r - 1),
            y.floor() as usize % self.n_theta,
        );
        let (fx, fy) = (x - i0 as f64, y - y.floor());
        let j1 = (j0 + 1) % self.n_theta;
        let v = (1.0 - fx)
            * ((1.0 - fy) * self.regular_part(i0, j0) + fy * self.regular_part(i0, j1))
            + fx * ((1.0 - fy) * self.regular_part(i0 + 1, j0)
                + fy * self.regular_part(i0 + 1, j1));
        Ok(v + (p - self.q).ln_modulus())
    }
}

/// Thomas algorithm for the constant tridiagonal system
/// `off x_{i-1} + diag x_i + off x_{i+1} = rhs_i`.
fn solve_tridiagonal(off: f64, diag: f64, rhs: &mut [f64]) {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut beta = diag;
    rhs[0] /= beta;
    for i in 1..n {
        c[i] = off / beta;
        beta = diag - off * c[i];
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i + 1] * rhs[i + 1];
    }
}

pub fn fd_green_oracle(r: f64, q: Point, n_r: usize, n_theta: usize) -> Result<FDOracleGrid> {
    let annulus = AnnulusSpec::new(r, 1.0)?;
    if n_r < 64 || n_theta < 64 {
        return Err(Error::parameter(format!(
            "oracle resolutions ({n_r}, {n_theta}) must both be at least 64"
        )));
    }
    if !annulus.contains(q.checked()?, false) {
        return Err(Error::domain(format!("pole {q} lies outside the annulus")));
    }
    let mut grid = FDOracleGrid {
        n_r,
        n_theta,
        r,
        q,
        values: vec![0.0; (n_r + 1) * n_theta],
        regular: vec![0.0; (n_r + 1) * n_theta],
        residual: 0.0,
    };
    let (ds, dt) = (grid.ds(), grid.dtheta());
    let (cos, sin): (Vec<f64>, Vec<f64>) = (0..n_theta)
        .map(|k| {
            let a = TAU * k as f64 / n_theta as f64;
            (a.cos(), a.sin())
        })
        .unzip();

    // boundary data and its DFT
    let boundary: Vec<Vec<f64>> = [0, n_r]
        .iter()
        .map(|&i| {
            (0..n_theta)
                .map(|j| -(grid.node(i, j) - q).ln_modulus())
                .collect()
        })
        .collect();
    let dft = |row: &[f64], m: usize| {
        row.iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (j, &x)| {
                let k = (j * m) % n_theta;
                (re + x * cos[k], im - x * sin[k])
            })
    };

    // per-mode radial solves; modes[m] = (re, im) over interior rows 1..n_r
    let interior = n_r - 1;
    let off = -1.0 / (ds * ds);
    let mut modes_re = vec![vec![0.0; interior]; n_theta];
    let mut modes_im = vec![vec![0.0; interior]; n_theta];
    for m in 0..n_theta {
        let angular = (2.0 - 2.0 * cos[m]) / (dt * dt);
        let diag = 2.0 / (ds * ds) + angular;
        let (b0, b1) = (dft(&boundary[0], m), dft(&boundary[1], m));
        let (re, im) = (&mut modes_re[m], &mut modes_im[m]);
        re[0] -= off * b0.0;
        im[0] -= off * b0.1;
        re[interior - 1] -= off * b1.0;
        im[interior - 1] -= off * b1.1;
        solve_tridiagonal(off, diag, re);
        solve_tridiagonal(off, diag, im);
    }

    for j in 0..n_theta {
        grid.regular[j] = boundary[0][j];
        grid.regular[n_r * n_theta + j] = boundary[1][j];
    }
    let scale = 1.0 / n_theta as f64;
    for i in 1..n_r {
        for j in 0..n_theta {
            let v = (0..n_theta).fold(0.0, |acc, m| {
                let k = (j * m) % n_theta;
                acc + modes_re[m][i - 1] * cos[k] - modes_im[m][i - 1] * sin[k]
            });
            grid.regular[i * n_theta + j] = v * scale;
        }
    }

    // discrete residual, scaled by the diagonal coefficient
    let diag = 2.0 / (ds * ds) + 2.0 / (dt * dt);
    let v = |i: usize, j: usize| grid.regular[i * n_theta + j];
    let mut residual = 0.0f64;
    for i in 1..n_r {
        for j in 0..n_theta {
            let (jm, jp) = ((j + n_theta - 1) % n_theta, (j + 1) % n_theta);
            let lap = (v(i + 1, j) - 2.0 * v(i, j) + v(i - 1, j)) / (ds * ds)
                + (v(i, jp) - 2.0 * v(i, j) + v(i, jm)) / (dt * dt);
            residual = residual.max(lap.abs() / diag);
        }
    }
    if !(residual <= ORACLE_RESIDUAL_TOL) {
        return Err(Error::Solve(format!(
            "discrete residual {residual:e} exceeds {ORACLE_RESIDUAL_TOL:e}"
        )));
    }
    grid.residual = residual;

    for i in 1..n_r {
        for j in 0..n_theta {
            let idx = i * n_theta + j;
            grid.values[idx] = grid.regular[idx] + (grid.node(i, j) - q).ln_modulus();
        }
    }
    // rows 0 and n_r stay exactly zero
    Ok(grid)
}

/// Max over interior nodes of the deviation between the oracle and the
/// product formula, compared on the regular part so that nodes near the pole
/// do not lose digits. Returns the deviation and the worst node.
pub fn oracle_sup_deviation(grid: &FDOracleGrid, tol: f64) -> Result<(f64, Point)> {
    let annulus = AnnulusSpec::new(grid.r, tol)?;
    let mut worst = (0.0f64, grid.q);
    for i in 1..grid.n_r {
        for j in 0..grid.n_theta {
            let p = grid.node(i, j);
            if p == grid.q {
                continue;
            }
            let exact = green_negative(p, grid.q, &annulus)? - (p - grid.q).ln_modulus();
            let dev = (grid.regular_part(i, j) - exact).abs();
            if dev > worst.0 {
                worst = (dev, p);
            }
        }
    }
    Ok(worst)
}
