//! The real band `[v_min, v_max] = [min, max] B(A) ∩ R`.
//!
//! In canonical coordinates `A = H + Si`, the quaternion `q = x + yj` gives
//! `q*Aq = x*Hx + y*Hy + i(x*Sx − y*Sy) + 2(x*Sy)k`. The value is real
//! exactly on `D0 ∩ D1 = {x*Sy = 0, x*Sx = y*Sy}`, where it equals
//! `f(x, y) = x*Hx + y*Hy`. The band is found by optimizing `f` over that
//! set with a multi-start augmented Lagrangian.
//!
//! All quantities are Rayleigh quotients of `z = (x, y) ∈ C^{2n}`, so the
//! unit sphere is handled by the quotient and only the three constraints
//! `Re(x*Sy)`, `Im(x*Sy)`, `x*Sx − y*Sy` carry multipliers.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eig, inf_norm, CMatrix, CanonicalForm, Definiteness};
use crate::quat::{class_rep, QMatrix, QVector, Quaternion};
use crate::rng::substream;
use crate::{Error, Result};

pub const DEFAULT_STARTS: usize = 64;
pub const DEFAULT_EPS_REAL: f64 = 1e-3;
/// Bound on `|x*Sy|` and `|x*Sx − y*Sy|` for a feasible point.
pub const FEAS_TOL: f64 = 1e-8;
pub const NORM_TOL: f64 = 1e-10;
pub const KKT_TOL: f64 = 1e-7;

const SAMPLER_RETRIES: usize = 1000;
const ORACLE_CHUNK: usize = 4096;
const PROJECTION_ITERS: usize = 60;
const LBFGS_MEMORY: usize = 8;

type CVec = DVector<Complex64>;

/// A pair `(x, y)` in canonical coordinates, `q = x + yj`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasiblePoint {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `| |x|² + |y|² − 1 |`.
    pub norm: f64,
    /// `max(|Re x*Sy|, |Im x*Sy|)`.
    pub d0: f64,
    /// `|x*Sx − y*Sy|`.
    pub d1: f64,
}

impl FeasiblePoint {
    fn from_z(z: &CVec) -> Self {
        let n = z.len() / 2;
        Self {
            x: z.rows(0, n).iter().copied().collect(),
            y: z.rows(n, n).iter().copied().collect(),
        }
    }

    fn to_z(&self) -> CVec {
        CVec::from_iterator(self.x.len() * 2, self.x.iter().chain(&self.y).copied())
    }

    pub fn residuals(&self, s: &[f64]) -> Residuals {
        let mut xsy = Complex64::new(0.0, 0.0);
        let mut d1 = 0.0;
        let mut mass = 0.0;
        for ((xk, yk), &sk) in self.x.iter().zip(&self.y).zip(s) {
            xsy += xk.conj() * yk * sk;
            d1 += sk * (xk.norm_sqr() - yk.norm_sqr());
            mass += xk.norm_sqr() + yk.norm_sqr();
        }
        Residuals {
            norm: (mass - 1.0).abs(),
            d0: xsy.re.abs().max(xsy.im.abs()),
            d1: d1.abs(),
        }
    }

    pub fn is_feasible(&self, s: &[f64]) -> bool {
        let r = self.residuals(s);
        r.norm <= NORM_TOL && r.d0 <= FEAS_TOL && r.d1 <= FEAS_TOL
    }

    /// `x*Hx + y*Hy`.
    pub fn value(&self, h: &CMatrix) -> f64 {
        let x = DVector::from_column_slice(&self.x);
        let y = DVector::from_column_slice(&self.y);
        x.dotc(&(h * &x)).re + y.dotc(&(h * &y)).re
    }

    /// The quaternionic vector `Ux + (Uy) j` in the original coordinates.
    pub fn quaternion(&self, u: &CMatrix) -> Result<QVector> {
        let x = u * DVector::from_column_slice(&self.x);
        let y = u * DVector::from_column_slice(&self.y);
        QVector::from_complex_pair(x.as_slice(), y.as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandStatus {
    Solved,
    Empty,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandResult {
    pub v_min: Option<f64>,
    pub v_max: Option<f64>,
    pub status: BandStatus,
    pub witness_min: Option<FeasiblePoint>,
    pub witness_max: Option<FeasiblePoint>,
    pub starts_used: usize,
    /// Larger of the two scaled KKT residuals.
    pub kkt_residual: f64,
}

impl BandResult {
    fn empty() -> Self {
        Self {
            v_min: None,
            v_max: None,
            status: BandStatus::Empty,
            witness_min: None,
            witness_max: None,
            starts_used: 0,
            kkt_residual: 0.0,
        }
    }

    /// `(v_min, v_max)` when both exist.
    pub fn interval(&self) -> Option<(f64, f64)> {
        self.v_min.zip(self.v_max)
    }

    /// Shifts the band by a real constant, as for `A + cI`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            v_min: self.v_min.map(|v| v + c),
            v_max: self.v_max.map(|v| v + c),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandOptions {
    pub starts: usize,
    pub seed: u64,
    pub mu0: f64,
    pub mu_factor: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub grad_tol: f64,
    pub kkt_tol: f64,
}

impl Default for BandOptions {
    fn default() -> Self {
        Self {
            starts: DEFAULT_STARTS,
            seed: 42,
            mu0: 10.0,
            mu_factor: 10.0,
            max_outer: 8,
            max_inner: 1000,
            grad_tol: 1e-9,
            kkt_tol: KKT_TOL,
        }
    }
}

/// Draws a random point of `D0 ∩ D1`.
///
/// `y` is made orthogonal to `Sx`, which kills `x*Sy`; then the mass split
/// between `x` and `y` is chosen to balance `x*Sx` against `y*Sy`. When
/// the two have opposite signs no split works, and the draw is turned into
/// an isotropic pair with `x*Sx = y*Sy = 0` instead, or rejected.
pub fn feasible_sample<R: Rng + ?Sized>(s: &[f64], rng: &mut R) -> Result<FeasiblePoint> {
    let n = s.len();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
    }
    let tol = crate::linalg::default_def_tol(s);
    if n == 1 && s[0].abs() > tol {
        return Err(Error::Infeasible);
    }
    for _ in 0..SAMPLER_RETRIES {
        let mut x = gaussian_vec(n, rng);
        let mut y = gaussian_vec(n, rng);
        let w: CVec = CVec::from_iterator(n, x.iter().zip(s).map(|(v, &sk)| v * sk));
        let ww = w.norm_squared();
        if ww > 0.0 {
            let proj = w.dotc(&y) / ww;
            y -= &w * proj;
        }
        let (nx, ny) = (x.norm(), y.norm());
        if nx == 0.0 || ny == 0.0 {
            continue;
        }
        x /= Complex64::from(nx);
        y /= Complex64::from(ny);
        let sx = weighted(&x, s);
        let sy = weighted(&y, s);
        let a2 = if sx.abs() <= tol && sy.abs() <= tol {
            0.5
        } else if sx * sy >= 0.0 {
            sy / (sx + sy)
        } else {
            match isotropic_pair(x, s, tol, rng) {
                Some(pair) => return Ok(pair),
                None => continue,
            }
        };
        x *= Complex64::from(a2.sqrt());
        y *= Complex64::from((1.0 - a2).sqrt());
        return Ok(FeasiblePoint {
            x: x.iter().copied().collect(),
            y: y.iter().copied().collect(),
        });
    }
    Err(Error::RetriesExhausted(SAMPLER_RETRIES))
}

/// A point with `x*Sx = y*Sy = 0`, built from `x` by rescaling its
/// positive and negative `S`-parts against each other and then drawing
/// `y ⊥ Sx` on the zero set of `y*Sy`.
fn isotropic_pair<R: Rng + ?Sized>(mut x: CVec, s: &[f64], tol: f64, rng: &mut R) -> Option<FeasiblePoint> {
    let n = s.len();
    let pos: f64 = x
        .iter()
        .zip(s)
        .filter(|(_, &sk)| sk > 0.0)
        .map(|(v, &sk)| sk * v.norm_sqr())
        .sum();
    let neg: f64 = x
        .iter()
        .zip(s)
        .filter(|(_, &sk)| sk < 0.0)
        .map(|(v, &sk)| -sk * v.norm_sqr())
        .sum();
    if pos == 0.0 || neg == 0.0 {
        return None;
    }
    let t = (neg / pos).sqrt();
    for (v, &sk) in x.iter_mut().zip(s) {
        if sk > 0.0 {
            *v *= t;
        }
    }
    let w: CVec = CVec::from_iterator(n, x.iter().zip(s).map(|(v, &sk)| v * sk));
    let ww = w.norm_squared();
    let perp = |v: CVec| {
        let proj = w.dotc(&v) / ww;
        v - &w * proj
    };
    let y1 = perp(gaussian_vec(n, rng));
    let q1 = weighted(&y1, s);
    let y = if q1.abs() <= tol * y1.norm_squared() {
        y1
    } else {
        let y2 = perp(gaussian_vec(n, rng));
        let q2 = weighted(&y2, s);
        let b = y1
            .iter()
            .zip(y2.iter())
            .zip(s)
            .map(|((a, c), &sk)| sk * (a.conj() * c).re)
            .sum::<f64>();
        let disc = b * b - q1 * q2;
        if disc < 0.0 || q2 == 0.0 {
            return None;
        }
        let t = (-b + disc.sqrt()) / q2;
        y1 + rscale(&y2, t)
    };
    let (nx, ny) = (x.norm(), y.norm());
    if nx == 0.0 || ny == 0.0 {
        return None;
    }
    let h = 0.5f64.sqrt();
    Some(FeasiblePoint {
        x: x.iter().map(|v| v * (h / nx)).collect(),
        y: y.iter().map(|v| v * (h / ny)).collect(),
    })
}

fn gaussian_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn weighted(v: &CVec, s: &[f64]) -> f64 {
    v.iter().zip(s).map(|(c, &sk)| sk * c.norm_sqr()).sum()
}

fn rdot(a: &CVec, b: &CVec) -> f64 {
    a.dotc(b).re
}

fn rscale(v: &CVec, t: f64) -> CVec {
    v.map(|c| c * t)
}

#[derive(Debug, Clone, Copy)]
enum Form {
    F,
    G1,
    G2,
    G3,
}

const CONSTRAINTS: [Form; 3] = [Form::G1, Form::G2, Form::G3];

/// The Hermitian forms on `C^{2n}`: `F = diag(H, H)`,
/// `G1 = [[0, S/2], [S/2, 0]]`, `G2 = [[0, −iS/2], [iS/2, 0]]`,
/// `G3 = diag(S, −S)`.
struct Problem<'a> {
    h: &'a CMatrix,
    s: &'a [f64],
    n: usize,
}

impl<'a> Problem<'a> {
    fn new(cf: &'a CanonicalForm) -> Self {
        Self {
            h: &cf.h,
            s: &cf.s,
            n: cf.n(),
        }
    }

    fn apply(&self, form: Form, z: &CVec) -> CVec {
        let n = self.n;
        let x = z.rows(0, n);
        let y = z.rows(n, n);
        let mut out = CVec::zeros(2 * n);
        let half_i = Complex64::new(0.0, 0.5);
        match form {
            Form::F => {
                out.rows_mut(0, n).copy_from(&(self.h * x));
                out.rows_mut(n, n).copy_from(&(self.h * y));
            }
            Form::G1 => {
                for k in 0..n {
                    out[k] = y[k] * (0.5 * self.s[k]);
                    out[n + k] = x[k] * (0.5 * self.s[k]);
                }
            }
            Form::G2 => {
                for k in 0..n {
                    out[k] = -half_i * y[k] * self.s[k];
                    out[n + k] = half_i * x[k] * self.s[k];
                }
            }
            Form::G3 => {
                for k in 0..n {
                    out[k] = x[k] * self.s[k];
                    out[n + k] = -y[k] * self.s[k];
                }
            }
        }
        out
    }

    /// Rayleigh quotient `r = z*Mz / |z|²` and its gradient `2(Mz − rz)/|z|²`.
    fn quotient(&self, form: Form, z: &CVec) -> (f64, CVec) {
        let mz = self.apply(form, z);
        let nn = z.norm_squared();
        let r = rdot(z, &mz) / nn;
        let g = rscale(&(mz - rscale(z, r)), 2.0 / nn);
        (r, g)
    }

    fn constraints(&self, z: &CVec) -> ([f64; 3], [CVec; 3]) {
        let [(c1, g1), (c2, g2), (c3, g3)] = CONSTRAINTS.map(|f| self.quotient(f, z));
        ([c1, c2, c3], [g1, g2, g3])
    }

    fn lagrangian(&self, z: &CVec, sign: f64, lambda: &[f64; 3], mu: f64) -> (f64, CVec) {
        let (f, gf) = self.quotient(Form::F, z);
        let (c, gc) = self.constraints(z);
        let mut value = sign * f;
        let mut grad = rscale(&gf, sign);
        for k in 0..3 {
            value += lambda[k] * c[k] + 0.5 * mu * c[k] * c[k];
            grad += rscale(&gc[k], lambda[k] + mu * c[k]);
        }
        (value, grad)
    }

    /// Minimum-norm Gauss-Newton steps onto `D0 ∩ D1`, with step halving
    /// whenever the constraint norm would grow.
    fn project(&self, z: &CVec) -> CVec {
        let mut z = normalized(z);
        let (mut c, mut grads) = self.constraints(&z);
        for _ in 0..PROJECTION_ITERS {
            let cn = norm3(&c);
            if cn <= 1e-15 {
                break;
            }
            let j = real_jacobian(&grads);
            let pinv = j.pseudo_inverse(1e-12).expect("nonnegative epsilon");
            let step = from_reals(&(pinv * DVector::from_column_slice(&c)));
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-6 {
                let trial = normalized(&(&z - rscale(&step, t)));
                let (tc, tg) = self.constraints(&trial);
                if norm3(&tc) < cn {
                    z = trial;
                    c = tc;
                    grads = tg;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        z
    }

    /// Least-squares stationarity residual `min_ν |∇f − Σ ν_k ∇g_k|`.
    fn kkt_residual(&self, z: &CVec) -> f64 {
        let (_, gf) = self.quotient(Form::F, z);
        let (_, grads) = self.constraints(z);
        let jt = real_jacobian(&grads).transpose();
        let gf = to_reals(&gf);
        let pinv = jt.clone().pseudo_inverse(1e-10).expect("nonnegative epsilon");
        let nu = pinv * &gf;
        (gf - jt * nu).norm()
    }
}

fn norm3(c: &[f64; 3]) -> f64 {
    c.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn normalized(z: &CVec) -> CVec {
    rscale(z, 1.0 / z.norm())
}

fn to_reals(v: &CVec) -> DVector<f64> {
    DVector::from_iterator(2 * v.len(), v.iter().flat_map(|c| [c.re, c.im]))
}

fn from_reals(v: &DVector<f64>) -> CVec {
    CVec::from_iterator(
        v.len() / 2,
        v.as_slice().chunks_exact(2).map(|p| Complex64::new(p[0], p[1])),
    )
}

fn real_jacobian(grads: &[CVec; 3]) -> DMatrix<f64> {
    let cols = 2 * grads[0].len();
    DMatrix::from_fn(3, cols, |r, k| {
        let c = grads[r][k / 2];
        if k % 2 == 0 {
            c.re
        } else {
            c.im
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Converged,
    /// Accepted steps no longer change the objective beyond roundoff.
    Stalled,
    MaxIterations,
}

/// L-BFGS with Armijo backtracking under the real inner product `Re(a*b)`.
fn lbfgs(obj: impl Fn(&CVec) -> (f64, CVec), z0: CVec, grad_tol: f64, max_iter: usize) -> (CVec, Exit) {
    let mut z = z0;
    let (mut f, mut g) = obj(&z);
    let mut hist: VecDeque<(CVec, CVec, f64)> = VecDeque::with_capacity(LBFGS_MEMORY);
    let mut flat = 0;
    for _ in 0..max_iter {
        let gnorm = g.norm();
        if gnorm <= grad_tol {
            return (z, Exit::Converged);
        }
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = rho * rdot(s, &q);
            q -= rscale(y, a);
            alphas.push(a);
        }
        let gamma = match hist.back() {
            Some((s, y, _)) => rdot(s, y) / y.norm_squared(),
            None => 1.0 / gnorm,
        };
        let mut r = rscale(&q, gamma);
        for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
            let b = rho * rdot(y, &r);
            r += rscale(s, a - b);
        }
        let mut d = -r;
        let mut slope = rdot(&g, &d);
        if slope >= 0.0 {
            hist.clear();
            d = rscale(&g, -1.0 / gnorm);
            slope = rdot(&g, &d);
        }
        let mut t = 1.0;
        let accepted = loop {
            let trial = &z + rscale(&d, t);
            let (ft, gt) = obj(&trial);
            if ft <= f + 1e-4 * t * slope {
                break Some((trial, ft, gt));
            }
            t *= 0.5;
            if t < 1e-20 {
                break None;
            }
        };
        let Some((zn, fn_, gn)) = accepted else {
            if hist.is_empty() {
                return (z, Exit::Stalled);
            }
            hist.clear();
            continue;
        };
        if f - fn_ <= 4.0 * f64::EPSILON * (1.0 + f.abs()) {
            flat += 1;
            if flat >= 3 {
                return (zn, Exit::Stalled);
            }
        } else {
            flat = 0;
        }
        let s = &zn - &z;
        let y = &gn - &g;
        let sy = rdot(&s, &y);
        if sy > 1e-300 {
            if hist.len() == LBFGS_MEMORY {
                hist.pop_front();
            }
            hist.push_back((s, y, 1.0 / sy));
        }
        z = zn;
        f = fn_;
        g = gn;
    }
    (z, Exit::MaxIterations)
}

struct LocalSolution {
    z: CVec,
    value: f64,
    feasible: bool,
    kkt: f64,
}

fn solve_from(p: &Problem, start: &CVec, sign: f64, opts: &BandOptions) -> LocalSolution {
    let mut z = normalized(start);
    let mut lambda = [0.0; 3];
    let mut mu = opts.mu0;
    for _ in 0..opts.max_outer {
        let (zn, exit) = lbfgs(|v| p.lagrangian(v, sign, &lambda, mu), z, opts.grad_tol, opts.max_inner);
        z = normalized(&zn);
        let (c, _) = p.constraints(&z);
        for k in 0..3 {
            lambda[k] += mu * c[k];
        }
        if exit != Exit::MaxIterations && norm3(&c) <= 1e-12 {
            break;
        }
        mu *= opts.mu_factor;
    }
    let z = p.project(&z);
    let point = FeasiblePoint::from_z(&z);
    LocalSolution {
        value: p.quotient(Form::F, &z).0,
        feasible: point.is_feasible(p.s),
        kkt: p.kkt_residual(&z),
        z,
    }
}

/// Best of the local solutions: feasible ones first, then by objective
/// (smallest for `sign = 1`, largest for `sign = −1`), ties to the lowest
/// start index.
fn best(solutions: &[&LocalSolution], sign: f64) -> usize {
    let mut best = 0;
    for (k, s) in solutions.iter().enumerate().skip(1) {
        let b = solutions[best];
        let better = match (s.feasible, b.feasible) {
            (true, false) => true,
            (false, true) => false,
            _ => sign * s.value < sign * b.value,
        };
        if better {
            best = k;
        }
    }
    best
}

/// Computes `v_min` and `v_max` over `D0 ∩ D1`.
pub fn band(cf: &CanonicalForm, opts: &BandOptions) -> Result<BandResult> {
    let n = cf.n();
    let definiteness = cf.definiteness();
    if n == 1 && definiteness != Definiteness::Zero {
        return Ok(BandResult::empty());
    }
    if definiteness == Definiteness::Zero {
        return hermitian_band(cf);
    }
    if opts.starts == 0 {
        return Err(Error::InvalidArgument("at least one start is required".into()));
    }
    let p = Problem::new(cf);
    let runs: Vec<(LocalSolution, LocalSolution)> = (0..opts.starts)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(opts.seed, k as u64);
            let start = feasible_sample(&cf.s, &mut rng)?.to_z();
            Ok((solve_from(&p, &start, 1.0, opts), solve_from(&p, &start, -1.0, opts)))
        })
        .collect::<Result<_>>()?;
    let mins: Vec<&LocalSolution> = runs.iter().map(|r| &r.0).collect();
    let maxs: Vec<&LocalSolution> = runs.iter().map(|r| &r.1).collect();
    let lo = mins[best(&mins, 1.0)];
    let hi = maxs[best(&maxs, -1.0)];
    let scale = 1.0 + inf_norm(&cf.h);
    let kkt = (lo.kkt / scale).max(hi.kkt / scale);
    let solved = lo.feasible && hi.feasible && kkt <= opts.kkt_tol && lo.value <= hi.value;
    Ok(BandResult {
        v_min: Some(lo.value),
        v_max: Some(hi.value),
        status: if solved {
            BandStatus::Solved
        } else {
            BandStatus::MaxIterations
        },
        witness_min: Some(FeasiblePoint::from_z(&lo.z)),
        witness_max: Some(FeasiblePoint::from_z(&hi.z)),
        starts_used: opts.starts,
        kkt_residual: kkt,
    })
}

/// With `S = 0` every unit pair is feasible and the band is the spectrum
/// range of `H`, attained at `y = 0`.
fn hermitian_band(cf: &CanonicalForm) -> Result<BandResult> {
    let eig = hermitian_eig(&cf.h)?;
    let n = cf.n();
    let witness = |k: usize| FeasiblePoint {
        x: eig.vectors.column(k).iter().copied().collect(),
        y: vec![Complex64::new(0.0, 0.0); n],
    };
    Ok(BandResult {
        v_min: Some(eig.values[n - 1]),
        v_max: Some(eig.values[0]),
        status: BandStatus::Solved,
        witness_min: Some(witness(n - 1)),
        witness_max: Some(witness(0)),
        starts_used: 0,
        kkt_residual: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandEstimate {
    pub v_min: f64,
    pub v_max: f64,
    /// Raw quaternionic samples whose class representative fell within
    /// `eps_real` of the real axis.
    pub real_hits: usize,
}

/// Independent inner estimate of the band.
///
/// Takes the extremes of `f` over `samples` draws of [`feasible_sample`],
/// and over raw uniform quaternionic vectors whose value `q*Aq` lies within
/// `eps_real` of the real axis. The latter are first moved onto
/// `D0 ∩ D1` so that every value counted is attained.
pub fn band_oracle(cf: &CanonicalForm, samples: usize, eps_real: f64, seed: u64) -> Result<BandEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let n = cf.n();
    if n == 1 && cf.definiteness() != Definiteness::Zero {
        return Err(Error::Infeasible);
    }
    let p = Problem::new(cf);
    let qa = QMatrix::from_complex(&cf.original);
    let chunks = samples.div_ceil(ORACLE_CHUNK);
    let parts: Vec<(f64, f64, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = ORACLE_CHUNK.min(samples - c * ORACLE_CHUNK);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut rng = substream(seed, 2 * c as u64);
            for _ in 0..len {
                let v = feasible_sample(&cf.s, &mut rng)?.value(&cf.h);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let mut rng = substream(seed, 2 * c as u64 + 1);
            let mut hits = 0;
            for _ in 0..len {
                let q: Vec<Quaternion> = (0..n)
                    .map(|_| {
                        Quaternion::new(
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                            rng.sample(StandardNormal),
                        )
                    })
                    .collect();
                let norm = q.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
                let q: Vec<Quaternion> = q.into_iter().map(|e| e.scale(1.0 / norm)).collect();
                if class_rep(qa.form(&q)).im > eps_real {
                    continue;
                }
                let (a, b): (Vec<Complex64>, Vec<Complex64>) = q.iter().map(|e| e.complex_pair()).unzip();
                let x = cf.u.adjoint() * DVector::from_vec(a);
                let y = cf.u.adjoint() * DVector::from_vec(b);
                let z = CVec::from_iterator(2 * n, x.iter().chain(y.iter()).copied());
                let snapped = FeasiblePoint::from_z(&p.project(&z));
                if snapped.is_feasible(&cf.s) {
                    let v = snapped.value(&cf.h);
                    lo = lo.min(v);
                    hi = hi.max(v);
                    hits += 1;
                }
            }
            Ok((lo, hi, hits))
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().fold(
        BandEstimate {
            v_min: f64::INFINITY,
            v_max: f64::NEG_INFINITY,
            real_hits: 0,
        },
        |acc, (lo, hi, hits)| BandEstimate {
            v_min: acc.v_min.min(lo),
            v_max: acc.v_max.max(hi),
            real_hits: acc.real_hits + hits,
        },
    ))
}
