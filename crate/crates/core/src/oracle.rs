//! Monte-Carlo ground truth for `W_H(A)`.
//!
//! Unit vectors are drawn uniformly from the quaternionic sphere by
//! normalizing Gaussian vectors in `R^{4n}`, pushed through `q*Aq` and
//! reduced to similarity representatives. Work is split into fixed chunks,
//! each with its own random substream, so results do not depend on the
//! thread count.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bild::{upper_bild, BildOptions, BildResult};
use crate::geometry::{hausdorff, ConvexRegion};
use crate::linalg::CMatrix;
use crate::quat::{class_rep, QMatrix, Quaternion, DEFAULT_SIMILARITY_TOL, UNIT_TOL};
use crate::rng::substream;
use crate::{Error, Result, SCHEMA_VERSION};

pub const CHUNK: usize = 4096;
pub const DEFAULT_SAMPLES: usize = 100_000;
/// Containment tolerance of [`validate`].
pub const CONTAINMENT_TOL: f64 = 1e-6;
pub const POLISH_STEPS: usize = 200;
const POLISH_STARTS: usize = 8;
const RANDOM_STARTS: usize = 16;
const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleCloud {
    /// Class representatives, all in the closed upper half-plane.
    pub reps: Vec<Complex64>,
    pub samples: usize,
    pub seed: u64,
}

impl SampleCloud {
    pub fn hull(&self) -> ConvexRegion {
        ConvexRegion::hull(self.reps.iter().copied())
    }

    pub fn max_modulus(&self) -> f64 {
        self.reps.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// CSV `re,im` with at most `max_rows` evenly strided rows.
    pub fn to_csv(&self, max_rows: usize) -> String {
        let stride = self.reps.len().div_ceil(max_rows.max(1)).max(1);
        let mut s = String::from("re,im\n");
        for z in self.reps.iter().step_by(stride) {
            let _ = writeln!(s, "{},{}", z.re, z.im);
        }
        s
    }
}

fn unit_sample(n: usize, rng: &mut ChaCha8Rng) -> Vec<Quaternion> {
    loop {
        let v: Vec<Quaternion> = (0..n)
            .map(|_| {
                Quaternion::new(
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                )
            })
            .collect();
        let norm = v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|q| q.scale(1.0 / norm)).collect();
        }
    }
}

/// Runs `f(len, rng)` on each chunk of `samples` and returns the chunk
/// results in chunk order.
fn chunked<T: Send>(samples: usize, seed: u64, f: impl Fn(usize, &mut ChaCha8Rng) -> T + Sync) -> Vec<T> {
    (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, c as u64);
            f(CHUNK.min(samples - c * CHUNK), &mut rng)
        })
        .collect()
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        Err(Error::InvalidArgument("at least one sample is required".into()))
    } else {
        Ok(())
    }
}

/// Samples `W_H(A)` modulo similarity.
pub fn sample_range(a: &QMatrix, samples: usize, seed: u64) -> Result<SampleCloud> {
    check_samples(samples)?;
    let n = a.n();
    let reps = chunked(samples, seed, |len, rng| {
        (0..len)
            .map(|_| class_rep(a.form(&unit_sample(n, rng))))
            .collect::<Vec<_>>()
    })
    .concat();
    Ok(SampleCloud { reps, samples, seed })
}

/// Projected gradient ascent of `objective(v*Av / |v|²)` on the unit
/// sphere of `H^n`, with central-difference gradients and a step that
/// doubles on success and halves on failure.
pub fn polish(
    a: &QMatrix,
    start: &[Quaternion],
    objective: impl Fn(Quaternion) -> f64,
    steps: usize,
) -> (Vec<Quaternion>, f64) {
    let eval = |v: &[f64]| {
        let q: Vec<Quaternion> = v
            .chunks_exact(4)
            .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
            .collect();
        let nn: f64 = v.iter().map(|x| x * x).sum();
        objective(a.form(&q).scale(1.0 / nn))
    };
    let normalize = |v: &mut Vec<f64>| {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    };
    let mut v: Vec<f64> = start.iter().flat_map(|q| q.to_array()).collect();
    normalize(&mut v);
    let mut best = eval(&v);
    let mut step = 1e-2;
    for _ in 0..steps {
        let grad: Vec<f64> = (0..v.len())
            .map(|k| {
                let mut p = v.clone();
                let mut m = v.clone();
                p[k] += FD_STEP;
                m[k] -= FD_STEP;
                (eval(&p) - eval(&m)) / (2.0 * FD_STEP)
            })
            .collect();
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm == 0.0 {
            break;
        }
        let mut trial: Vec<f64> = v.iter().zip(&grad).map(|(x, g)| x + step * g / gnorm).collect();
        normalize(&mut trial);
        let value = eval(&trial);
        if value > best {
            v = trial;
            best = value;
            step *= 2.0;
        } else {
            step *= 0.5;
        }
    }
    let q = v
        .chunks_exact(4)
        .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
        .collect();
    (q, best)
}

/// The best `k` sampled vectors for `objective(q*Aq)`, in descending order.
fn top_samples(
    a: &QMatrix,
    samples: usize,
    seed: u64,
    k: usize,
    objective: &(impl Fn(Quaternion) -> f64 + Sync),
) -> Vec<(f64, Vec<Quaternion>)> {
    let n = a.n();
    let keep = |mut best: Vec<(f64, Vec<Quaternion>)>| {
        best.sort_by(|x, y| y.0.total_cmp(&x.0));
        best.truncate(k);
        best
    };
    let parts = chunked(samples, seed, |len, rng| {
        let mut best = Vec::with_capacity(2 * k);
        for _ in 0..len {
            let v = unit_sample(n, rng);
            best.push((objective(a.form(&v)), v));
            if best.len() >= 2 * k {
                best = keep(best);
            }
        }
        keep(best)
    });
    keep(parts.concat())
}

/// Best sampled value of `objective(q*Aq)` and the value after polishing
/// the top samples and a few fresh random vectors.
pub fn sampled_max(
    a: &QMatrix,
    samples: usize,
    seed: u64,
    objective: impl Fn(Quaternion) -> f64 + Sync,
) -> Result<(f64, f64, Vec<Quaternion>)> {
    check_samples(samples)?;
    let top = top_samples(a, samples, seed, POLISH_STARTS, &objective);
    let sampled = top[0].0;
    let mut best = (sampled, top[0].1.clone());
    let mut rng = substream(seed, u64::MAX);
    let random: Vec<Vec<Quaternion>> = (0..RANDOM_STARTS).map(|_| unit_sample(a.n(), &mut rng)).collect();
    let polished: Vec<_> = top
        .iter()
        .map(|(_, v)| v)
        .chain(&random)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| polish(a, v, &objective, POLISH_STEPS))
        .collect();
    for (w, value) in polished {
        if value > best.0 {
            best = (value, w);
        }
    }
    Ok((sampled, best.0, best.1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub sampled: f64,
    pub polished: f64,
}

/// Lower estimate of `w_H(A) = max |q*Aq|` by sampling and polishing.
pub fn sampled_radius(a: &QMatrix, samples: usize, seed: u64) -> Result<RadiusEstimate> {
    let (sampled, polished, _) = sampled_max(a, samples, seed, |q| q.norm_sqr())?;
    Ok(RadiusEstimate {
        sampled: sampled.sqrt(),
        polished: polished.sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub schema: u32,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Samples farther than `tol` outside the outer upper bild.
    pub violations: usize,
    /// Largest signed distance of a sample from the outer upper bild.
    pub max_excess: f64,
    /// Hausdorff distance between the sample hull and the inner upper bild.
    pub coverage: f64,
    pub passed: bool,
}

/// Checks a computed bild against direct sampling of `W_H(A)`.
pub fn validate(a: &CMatrix, bild: &BildResult, samples: usize, seed: u64) -> Result<ValidationReport> {
    validate_with_tol(a, bild, samples, seed, CONTAINMENT_TOL)
}

/// [`validate`] with an explicit containment tolerance.
pub fn validate_with_tol(
    a: &CMatrix,
    bild: &BildResult,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ValidationReport> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    let cloud = sample_range(&QMatrix::from_complex(a), samples, seed)?;
    let outer = &bild.upper.outer;
    if outer.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let excess: Vec<f64> = cloud.reps.iter().map(|&z| outer.signed_distance(z)).collect();
    let violations = excess.iter().filter(|&&d| d > tol).count();
    let max_excess = excess.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let coverage = hausdorff(&cloud.hull(), &bild.upper.inner)?;
    Ok(ValidationReport {
        schema: SCHEMA_VERSION,
        samples,
        seed,
        tol,
        violations,
        max_excess,
        coverage,
        passed: violations == 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusNormReport {
    pub schema: u32,
    pub h: Quaternion,
    /// `w(A) = 3/2` for `A = [[1, h], [0, 1]]`.
    pub omega_a: f64,
    /// Sampled and polished lower bound for `w(A)`.
    pub omega_a_lower: f64,
    /// Sampled and polished estimate of `w(iA)`.
    pub omega_ia_est: f64,
    /// `3/2 − omega_ia_est`.
    pub gap: f64,
    pub ih_complex: bool,
}

/// `A = [[1, h], [0, 1]]` for a unit quaternion `h`.
pub fn radius_norm_matrix(h: Quaternion) -> QMatrix {
    QMatrix::from_fn(2, |r, c| match (r, c) {
        (0, 1) => h,
        (1, 0) => Quaternion::ZERO,
        _ => Quaternion::ONE,
    })
}

/// Compares `w(A)` with `w(iA)` for `A = [[1, h], [0, 1]]`: the two agree
/// when `ih` is complex and `w(iA) < w(A)` otherwise.
pub fn radius_norm_demo(h: Quaternion, samples: usize, seed: u64) -> Result<RadiusNormReport> {
    if (h.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm: h.norm() });
    }
    let a = radius_norm_matrix(h);
    let ia = a.mul_left(Quaternion::I);
    let omega_a_lower = sampled_radius(&a, samples, seed)?.polished;
    let omega_ia_est = sampled_radius(&ia, samples, seed.wrapping_add(1))?.polished;
    Ok(RadiusNormReport {
        schema: SCHEMA_VERSION,
        h,
        omega_a: 1.5,
        omega_a_lower,
        omega_ia_est,
        gap: 1.5 - omega_ia_est,
        ih_complex: (Quaternion::I * h).is_complex(DEFAULT_SIMILARITY_TOL),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub schema: u32,
    pub conjectured: ConvexRegion,
    pub square: ConvexRegion,
    /// Inner upper bild computed by [`upper_bild`].
    pub computed: ConvexRegion,
    pub computed_hausdorff: f64,
    pub samples: usize,
    /// Samples at distance at least `margin` from the conjectured region.
    pub outside_conjectured: usize,
    /// Samples outside the square beyond [`CONTAINMENT_TOL`].
    pub outside_square: usize,
    pub margin: f64,
    /// Polished sample maximizing `Re z − |Im z|²`, whose maximum over the
    /// square is the vertex 1.
    pub witness: Complex64,
    pub witness_excess: f64,
    /// Hausdorff distance between the sample hulls of `A` and the unitarily
    /// equivalent `diag(−1+i, −1+i, 1+i, 1+i)`.
    pub equivalent_hausdorff: f64,
    /// Real `T` on the grid for which `conv{−1+i, 1+i, T}` contains the square.
    pub triangles_containing_square: usize,
    pub triangles_checked: usize,
}

impl ConjectureReport {
    pub fn refutes_conjecture(&self) -> bool {
        self.outside_conjectured > 0
            && self.outside_square == 0
            && self.witness_excess >= self.margin
            && self.triangles_containing_square == 0
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `diag(−1−i, −1−i, 1+i, 1+i)`: its upper bild is a square, larger than
/// the triangle `conv{W_C+(A), W_C+(A*), 0}`.
pub fn conjecture_matrix() -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::dvector![c(-1., -1.), c(-1., -1.), c(1., 1.), c(1., 1.)])
}

pub fn conjecture_demo(samples: usize, seed: u64) -> Result<ConjectureReport> {
    let a = conjecture_matrix();
    let qa = QMatrix::from_complex(&a);
    let conjectured = ConvexRegion::hull([c(-1., 1.), c(1., 1.), c(0., 0.)]);
    let square = ConvexRegion::hull([c(-1., 1.), c(1., 1.), c(-1., 0.), c(1., 0.)]);
    let computed = upper_bild(&a, &BildOptions::default())?.upper.inner;
    let cloud = sample_range(&qa, samples, seed)?;
    let margin = 0.3;
    let outside_conjectured = cloud
        .reps
        .iter()
        .filter(|&&z| conjectured.distance(z) >= margin)
        .count();
    let outside_square = cloud
        .reps
        .iter()
        .filter(|&&z| square.signed_distance(z) > CONTAINMENT_TOL)
        .count();
    let (_, _, v) = sampled_max(&qa, samples, seed.wrapping_add(1), |q| q.re() - q.im().norm_sqr())?;
    let witness = class_rep(qa.form(&v));

    let tilde = CMatrix::from_diagonal(&nalgebra::dvector![c(-1., 1.), c(-1., 1.), c(1., 1.), c(1., 1.)]);
    let tilde_cloud = sample_range(&QMatrix::from_complex(&tilde), samples, seed)?;
    let equivalent_hausdorff = hausdorff(&cloud.hull(), &tilde_cloud.hull())?;

    let grid: Vec<f64> = (0..=400).map(|k| -2.0 + 0.01 * k as f64).collect();
    let triangles_containing_square = grid
        .iter()
        .filter(|&&t| {
            let tri = ConvexRegion::hull([c(-1., 1.), c(1., 1.), c(t, 0.)]);
            square.vertices().iter().all(|&v| tri.contains(v, 1e-9))
        })
        .count();

    Ok(ConjectureReport {
        schema: SCHEMA_VERSION,
        computed_hausdorff: hausdorff(&computed, &square)?,
        witness_excess: conjectured.distance(witness),
        conjectured,
        square,
        computed,
        samples,
        outside_conjectured,
        outside_square,
        margin,
        witness,
        equivalent_hausdorff,
        triangles_containing_square,
        triangles_checked: grid.len(),
    })
}
