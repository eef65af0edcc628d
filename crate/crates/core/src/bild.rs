//! Upper bild assembly, membership in `W_H(A)` and the numerical radius.
//!
//! For complex `A`,
//! `B+(A) = conv{W_C+(A), W_C+(A*), v_min, v_max}` where `W_C+` is the part
//! of the complex numerical range in the closed upper half-plane. Cheaper
//! shortcuts apply when `A` is a scalar, Hermitian, has `W_C(A) = W_C(A*)`,
//! is 2×2, or has a definite skew part.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::band::{band, BandOptions, BandResult, BandStatus, FeasiblePoint};
use crate::crange::{default_conj_tol, max_conj_asymmetry, sweep, sweep_radius, RadiusEnclosure, DEFAULT_GRID};
use crate::geometry::{ConvexRegion, RegionPair};
use crate::linalg::{canonical_form, hermitian_eig, CMatrix, CanonicalForm, Definiteness};
use crate::quat::{class_rep, QMatrix, Quaternion, DEFAULT_SIMILARITY_TOL};
use crate::{Error, Result, SCHEMA_VERSION};

/// Default tolerance for [`member`].
pub const DEFAULT_MEMBER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BildPath {
    General,
    Definite,
    ConjSymmetric,
    TwoByTwoIndefinite,
    TwoByTwoPosDef,
    TwoByTwoPosSemi,
    Hermitian,
    Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BildOptions {
    pub grid: usize,
    pub band: BandOptions,
    /// Tolerance for the `W_C(A) = W_C(A*)` test; `None` selects
    /// [`default_conj_tol`].
    pub conj_tol: Option<f64>,
}

impl Default for BildOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            band: BandOptions::default(),
            conj_tol: None,
        }
    }
}

/// The upper halves of `W_C(A)` and `W_C(A*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generators {
    pub range: RegionPair,
    pub adjoint_range: RegionPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub m: usize,
    pub starts: usize,
    pub kkt_residual: f64,
    /// Hausdorff distance between the inner and outer upper bild.
    pub gap: f64,
    pub canonical_residual: f64,
    /// `max_k |h(θ_k) − h(−θ_k)|` over the sweep, zero when no sweep ran.
    pub conj_asymmetry: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BildResult {
    pub schema: u32,
    /// Inner polygon and outer enclosure of `B+(A)`.
    pub upper: RegionPair,
    pub generators: Generators,
    pub v_band: BandResult,
    pub definiteness: Definiteness,
    pub path: BildPath,
    pub m: usize,
    /// False when the band optimizer stopped without certifying its
    /// extremes; such results must be checked against the sampling oracle.
    pub verified: bool,
    pub diagnostics: Diagnostics,
}

impl BildResult {
    /// `B(A) ∩ C−`, the mirror image of the upper bild.
    pub fn lower(&self) -> RegionPair {
        self.upper.mirror()
    }

    /// Membership of `q` in `W_H(A)` through its class representative,
    /// decided against the outer enclosure.
    pub fn contains(&self, q: Quaternion, tol: f64) -> bool {
        self.upper.outer.contains(class_rep(q), tol)
    }

    /// Whether the class of `q` lies inside the inner polygon with margin
    /// `margin`.
    pub fn strictly_contains(&self, q: Quaternion, margin: f64) -> bool {
        self.upper.inner.contains(class_rep(q), -margin)
    }
}

fn check_square(a: &CMatrix) -> Result<()> {
    if a.is_square() && a.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

fn with_points(r: &RegionPair, extra: &[Complex64]) -> RegionPair {
    let add = |c: &ConvexRegion| ConvexRegion::hull(c.vertices().iter().copied().chain(extra.iter().copied()));
    RegionPair::new(add(&r.inner), add(&r.outer))
}

fn hull_pairs(a: &RegionPair, b: &RegionPair) -> RegionPair {
    RegionPair::new(
        ConvexRegion::union_hull([&a.inner, &b.inner]),
        ConvexRegion::union_hull([&a.outer, &b.outer]),
    )
}

fn band_points(b: &BandResult) -> Vec<Complex64> {
    [b.v_min, b.v_max]
        .into_iter()
        .flatten()
        .map(|v| Complex64::new(v, 0.0))
        .collect()
}

struct Parts {
    upper: RegionPair,
    generators: Generators,
    v_band: BandResult,
    path: BildPath,
    asymmetry: f64,
}

/// Computes `B+(A)` for a complex square matrix.
pub fn upper_bild(a: &CMatrix, opts: &BildOptions) -> Result<BildResult> {
    check_square(a)?;
    let cf = canonical_form(a)?;
    let definiteness = cf.definiteness();
    let parts = if a.nrows() == 1 {
        scalar(&cf)?
    } else if definiteness == Definiteness::Zero {
        hermitian(&cf)?
    } else {
        swept(&cf, opts)?
    };
    Ok(finish(&cf, parts, opts))
}

fn finish(cf: &CanonicalForm, parts: Parts, opts: &BildOptions) -> BildResult {
    let verified = parts.v_band.status != BandStatus::MaxIterations;
    let diagnostics = Diagnostics {
        m: opts.grid,
        starts: parts.v_band.starts_used,
        kkt_residual: parts.v_band.kkt_residual,
        gap: parts.upper.gap(),
        canonical_residual: cf.residual(),
        conj_asymmetry: parts.asymmetry,
    };
    BildResult {
        schema: SCHEMA_VERSION,
        upper: parts.upper,
        generators: parts.generators,
        v_band: parts.v_band,
        definiteness: cf.definiteness(),
        path: parts.path,
        m: opts.grid,
        verified,
        diagnostics,
    }
}

fn scalar(cf: &CanonicalForm) -> Result<Parts> {
    let z = cf.original[(0, 0)];
    let rep = Complex64::new(z.re, z.im.abs());
    let point = RegionPair::new(ConvexRegion::point(rep), ConvexRegion::point(rep));
    let clip = |w: Complex64| {
        let r = ConvexRegion::point(w).clip_upper();
        RegionPair::new(r.clone(), r)
    };
    Ok(Parts {
        upper: point,
        generators: Generators {
            range: clip(z),
            adjoint_range: clip(z.conj()),
        },
        v_band: band(cf, &BandOptions::default())?,
        path: BildPath::Scalar,
        asymmetry: 0.0,
    })
}

fn hermitian(cf: &CanonicalForm) -> Result<Parts> {
    let eig = hermitian_eig(&cf.h)?;
    let seg = ConvexRegion::hull([
        Complex64::new(eig.values[eig.values.len() - 1], 0.0),
        Complex64::new(eig.values[0], 0.0),
    ]);
    let pair = RegionPair::new(seg.clone(), seg);
    Ok(Parts {
        upper: pair.clone(),
        generators: Generators {
            range: pair.clone(),
            adjoint_range: pair,
        },
        v_band: band(cf, &BandOptions::default())?,
        path: BildPath::Hermitian,
        asymmetry: 0.0,
    })
}

fn sweep_generators(cf: &CanonicalForm, grid: usize) -> Result<(Generators, f64)> {
    let sw = sweep(&cf.original, grid)?;
    let adj = sw.adjoint();
    let h: Vec<f64> = sw.support_values.iter().map(|s| s.lambda_max).collect();
    let generators = Generators {
        range: sw.regions.clip_upper(),
        adjoint_range: adj.regions.clip_upper(),
    };
    Ok((generators, max_conj_asymmetry(&h)))
}

fn swept(cf: &CanonicalForm, opts: &BildOptions) -> Result<Parts> {
    let (generators, asymmetry) = sweep_generators(cf, opts.grid)?;
    let tol = opts.conj_tol.unwrap_or_else(|| default_conj_tol(&cf.original));
    if asymmetry <= tol {
        let v_band = band(cf, &opts.band)?;
        let upper = with_points(&generators.range, &band_points(&v_band));
        return Ok(Parts {
            upper,
            generators,
            v_band,
            path: BildPath::ConjSymmetric,
            asymmetry,
        });
    }
    if cf.n() == 2 {
        return Ok(two_by_two_parts(cf, generators, asymmetry));
    }
    let v_band = band(cf, &opts.band)?;
    let (base, path) = match cf.definiteness() {
        Definiteness::PositiveDefinite => (generators.range.clone(), BildPath::Definite),
        Definiteness::NegativeDefinite => (generators.adjoint_range.clone(), BildPath::Definite),
        _ => (
            hull_pairs(&generators.range, &generators.adjoint_range),
            BildPath::General,
        ),
    };
    Ok(Parts {
        upper: with_points(&base, &band_points(&v_band)),
        generators,
        v_band,
        path,
        asymmetry,
    })
}

fn two_by_two_parts(cf: &CanonicalForm, generators: Generators, asymmetry: f64) -> Parts {
    let (v_band, path) = two_by_two_band(cf);
    let base = match cf.definiteness() {
        Definiteness::PositiveDefinite | Definiteness::PositiveSemiDefinite => generators.range.clone(),
        Definiteness::NegativeDefinite | Definiteness::NegativeSemiDefinite => generators.adjoint_range.clone(),
        _ => hull_pairs(&generators.range, &generators.adjoint_range),
    };
    Parts {
        upper: with_points(&base, &band_points(&v_band)),
        generators,
        v_band,
        path,
        asymmetry,
    }
}

/// `B+(A)` for a 2×2 matrix with nonzero skew part, from the closed forms
/// for the real band.
pub fn two_by_two(cf: &CanonicalForm, grid: usize) -> Result<BildResult> {
    if cf.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: cf.n(),
        });
    }
    if cf.definiteness() == Definiteness::Zero {
        return Err(Error::InvalidArgument("skew part is zero".into()));
    }
    let (generators, asymmetry) = sweep_generators(cf, grid)?;
    let opts = BildOptions {
        grid,
        ..BildOptions::default()
    };
    Ok(finish(cf, two_by_two_parts(cf, generators, asymmetry), &opts))
}

/// Closed-form real band of a 2×2 canonical form `H + i diag(λ1, λ2)`,
/// `λ1 ≥ λ2`, with witnesses.
fn two_by_two_band(cf: &CanonicalForm) -> (BandResult, BildPath) {
    let (l1, l2) = (cf.s[0], cf.s[1]);
    let h11 = cf.h[(0, 0)].re;
    let h22 = cf.h[(1, 1)].re;
    let h12 = cf.h[(0, 1)];
    let zero = Complex64::new(0.0, 0.0);
    let real = |v: f64| Complex64::new(v, 0.0);
    let solved = |lo: f64, hi: f64, wlo: FeasiblePoint, whi: FeasiblePoint| BandResult {
        v_min: Some(lo),
        v_max: Some(hi),
        status: BandStatus::Solved,
        witness_min: Some(wlo),
        witness_max: Some(whi),
        starts_used: 0,
        kkt_residual: 0.0,
    };
    match cf.definiteness() {
        Definiteness::PositiveDefinite | Definiteness::NegativeDefinite => {
            let v = (h11 * l2 + h22 * l1) / (l1 + l2);
            let w = FeasiblePoint {
                x: vec![real((l2 / (l1 + l2)).sqrt()), zero],
                y: vec![zero, real((l1 / (l1 + l2)).sqrt())],
            };
            (solved(v, v, w.clone(), w), BildPath::TwoByTwoPosDef)
        }
        Definiteness::PositiveSemiDefinite | Definiteness::NegativeSemiDefinite => {
            let k = if l1.abs() <= l2.abs() { 0 } else { 1 };
            let v = cf.h[(k, k)].re;
            let mut x = vec![zero, zero];
            x[k] = real(1.0);
            let w = FeasiblePoint { x, y: vec![zero, zero] };
            (solved(v, v, w.clone(), w), BildPath::TwoByTwoPosSemi)
        }
        _ => {
            let a = (-l2 / (l1 - l2)).sqrt();
            let b = (l1 / (l1 - l2)).sqrt();
            let spread = 2.0 * h12.norm() * a * b;
            let center = h11 * a * a + h22 * b * b;
            let phase = Complex64::from_polar(1.0, -h12.arg());
            let w = |sign: f64| FeasiblePoint {
                x: vec![real(a), phase * (sign * b)],
                y: vec![zero, zero],
            };
            (
                solved(center - spread, center + spread, w(-1.0), w(1.0)),
                BildPath::TwoByTwoIndefinite,
            )
        }
    }
}

/// The same assembly as [`upper_bild`] with every shortcut except the
/// scalar and Hermitian ones disabled.
pub fn general_bild(a: &CMatrix, opts: &BildOptions) -> Result<BildResult> {
    check_square(a)?;
    let cf = canonical_form(a)?;
    if a.nrows() == 1 || cf.definiteness() == Definiteness::Zero {
        return upper_bild(a, opts);
    }
    let (generators, asymmetry) = sweep_generators(&cf, opts.grid)?;
    let v_band = band(&cf, &opts.band)?;
    let upper = with_points(
        &hull_pairs(&generators.range, &generators.adjoint_range),
        &band_points(&v_band),
    );
    let parts = Parts {
        upper,
        generators,
        v_band,
        path: BildPath::General,
        asymmetry,
    };
    Ok(finish(&cf, parts, opts))
}

/// Whether `q ∈ W_H(A)`, decided on the outer enclosure of `B+(A)`.
pub fn member(a: &CMatrix, q: Quaternion, tol: f64) -> Result<bool> {
    Ok(upper_bild(a, &BildOptions::default())?.contains(q, tol))
}

/// Enclosure of the quaternionic numerical radius of a complex matrix,
/// which coincides with the complex numerical radius.
pub fn qradius(a: &QMatrix, grid: usize) -> Result<RadiusEnclosure> {
    let c = a.to_complex(DEFAULT_SIMILARITY_TOL)?;
    Ok(sweep_radius(&sweep(&c, grid)?))
}
