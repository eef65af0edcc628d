//! Two-sided polygonal enclosures of the complex numerical range `W_C(A)`.
//!
//! For each angle `θ` the top eigenpair `(λ, x)` of
//! `H_θ = (e^{−iθ} A + e^{iθ} A*) / 2` gives the support value `λ` of
//! `W_C(A)` in direction `e^{iθ}` and an attained boundary point `x*Ax`.
//! The hull of the boundary points is an inner approximation; the
//! intersection of the support half-planes is an outer one.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexRegion, RegionPair};
use crate::linalg::{hermitian_eig, CMatrix};
use crate::{Error, Result};

pub const DEFAULT_GRID: usize = 720;
pub const MIN_GRID: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportSample {
    pub theta: f64,
    pub lambda_max: f64,
    /// `x*Ax` for the top eigenvector `x` of `H_θ`.
    pub point: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub regions: RegionPair,
    pub m: usize,
    pub support_values: Vec<SupportSample>,
}

pub fn grid_angle(k: usize, m: usize) -> f64 {
    TAU * (k as f64) / (m as f64)
}

fn check_grid(m: usize) -> Result<()> {
    if m < MIN_GRID {
        Err(Error::InvalidGrid(m))
    } else {
        Ok(())
    }
}

/// `(e^{−iθ} A + e^{iθ} A*) / 2`.
pub fn rotated_hermitian_part(a: &CMatrix, theta: f64) -> CMatrix {
    let e = Complex64::from_polar(1.0, -theta);
    let m = a * e;
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn support_sample(a: &CMatrix, theta: f64) -> Result<SupportSample> {
    let eig = hermitian_eig(&rotated_hermitian_part(a, theta))?;
    let (lambda_max, x) = eig.top();
    let point = (x.adjoint() * a * &x)[(0, 0)] / x.norm_squared();
    Ok(SupportSample {
        theta,
        lambda_max,
        point,
    })
}

/// Top eigenvalues of `H_θ` on the uniform grid of `m` angles.
pub fn support_values(a: &CMatrix, m: usize) -> Result<Vec<f64>> {
    check_grid(m)?;
    (0..m)
        .into_par_iter()
        .map(|k| Ok(hermitian_eig(&rotated_hermitian_part(a, grid_angle(k, m)))?.values[0]))
        .collect()
}

/// Intersection of the half-planes `Re(e^{−iθ_k} z) ≤ h_k` for a uniform
/// grid of `θ_k`, with every line tangent to a common convex set.
pub fn halfplane_polygon(support: &[(f64, f64)]) -> ConvexRegion {
    let m = support.len();
    let corners = (0..m).map(|k| {
        let (t0, h0) = support[k];
        let (t1, h1) = support[(k + 1) % m];
        let (s0, c0) = t0.sin_cos();
        let (s1, c1) = t1.sin_cos();
        let det = c0 * s1 - s0 * c1;
        Complex64::new((h0 * s1 - h1 * s0) / det, (c0 * h1 - c1 * h0) / det)
    });
    ConvexRegion::hull(corners)
}

pub fn sweep(a: &CMatrix, m: usize) -> Result<SweepResult> {
    check_grid(m)?;
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let samples: Vec<SupportSample> = (0..m)
        .into_par_iter()
        .map(|k| support_sample(a, grid_angle(k, m)))
        .collect::<Result<_>>()?;
    Ok(SweepResult::from_samples(samples))
}

impl SweepResult {
    fn from_samples(samples: Vec<SupportSample>) -> Self {
        let inner = ConvexRegion::hull(samples.iter().map(|s| s.point));
        let lines: Vec<(f64, f64)> = samples.iter().map(|s| (s.theta, s.lambda_max)).collect();
        let outer = halfplane_polygon(&lines);
        Self {
            regions: RegionPair::new(inner, outer),
            m: samples.len(),
            support_values: samples,
        }
    }

    pub fn inner(&self) -> &ConvexRegion {
        &self.regions.inner
    }

    pub fn outer(&self) -> &ConvexRegion {
        &self.regions.outer
    }

    /// Hausdorff distance between the inner and outer polygons.
    pub fn gap(&self) -> f64 {
        self.regions.gap()
    }

    /// The sweep of `A*` on the same grid, using `h_{A*}(θ) = h_A(−θ)` and
    /// conjugated boundary points.
    pub fn adjoint(&self) -> Self {
        let m = self.m;
        let samples = (0..m)
            .map(|k| {
                let src = self.support_values[(m - k) % m];
                SupportSample {
                    theta: grid_angle(k, m),
                    lambda_max: src.lambda_max,
                    point: src.point.conj(),
                }
            })
            .collect();
        Self::from_samples(samples)
    }

    /// CSV `theta,lambda_max,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta,lambda_max,re,im\n");
        for v in &self.support_values {
            let _ = writeln!(s, "{},{},{},{}", v.theta, v.lambda_max, v.point.re, v.point.im);
        }
        s
    }
}

/// Lower and upper bounds on a numerical radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusEnclosure {
    pub lo: f64,
    pub hi: f64,
}

impl RadiusEnclosure {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value >= self.lo - tol && value <= self.hi + tol
    }
}

/// `[max |v| over inner vertices, max |v| over outer vertices]`.
pub fn cradius(a: &CMatrix, m: usize) -> Result<RadiusEnclosure> {
    let sw = sweep(a, m)?;
    Ok(sweep_radius(&sw))
}

pub fn sweep_radius(sw: &SweepResult) -> RadiusEnclosure {
    RadiusEnclosure {
        lo: sw.inner().max_modulus().unwrap_or(0.0),
        hi: sw.outer().max_modulus().unwrap_or(0.0),
    }
}

/// Whether `W_C(A) = W_C(A*)`, tested by comparing `λ_max(H_θ)` with
/// `λ_max(H_{−θ})` on the grid.
pub fn conj_symmetric(a: &CMatrix, m: usize, tol: f64) -> Result<bool> {
    let h = support_values(a, m)?;
    Ok(max_conj_asymmetry(&h) <= tol)
}

/// `max_k |h(θ_k) − h(−θ_k)|` for support values on a uniform grid.
pub fn max_conj_asymmetry(h: &[f64]) -> f64 {
    let m = h.len();
    (0..m).map(|k| (h[k] - h[(m - k) % m]).abs()).fold(0.0, f64::max)
}

/// Default tolerance for [`conj_symmetric`]: `1e−9 (1 + ‖A‖_∞)`.
pub fn default_conj_tol(a: &CMatrix) -> f64 {
    1e-9 * (1.0 + crate::linalg::inf_norm(a))
}
