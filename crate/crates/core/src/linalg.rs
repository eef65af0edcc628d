//! Dense complex linear algebra at small `n`.
//!
//! The Hermitian eigensolver is a cyclic Jacobi iteration. It is used to
//! diagonalize the skew-Hermitian part of `A` and, in [`crate::crange`], to
//! find the top eigenpair of every rotated Hermitian part.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quat::QMatrix;
use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const JACOBI_MAX_SWEEPS: usize = 40;
const JACOBI_OFF_TOL: f64 = 1e-13;

/// Maximum absolute row sum.
pub fn inf_norm(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    inf_norm(&(m - m.adjoint()))
}

/// `‖M − M*‖_∞ ≤ 1e−12 (1 + ‖M‖_∞)`.
pub fn is_hermitian(m: &CMatrix) -> bool {
    m.is_square() && hermitian_deviation(m) <= 1e-12 * (1.0 + inf_norm(m))
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

/// Eigenvalues in descending order with orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn top(&self) -> (f64, nalgebra::DVector<Complex64>) {
        (self.values[0], self.vectors.column(0).into_owned())
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Sweeps until the off-diagonal Frobenius mass is at most `1e−13 ‖M‖_F`.
/// Ties in the descending sort keep the order the rotations left them in.
pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEigen> {
    check_square(m)?;
    let n = m.nrows();
    let dev = hermitian_deviation(m);
    if dev > 1e-12 * (1.0 + inf_norm(m)) {
        return Err(Error::NotHermitian { deviation: dev });
    }

    let mut a = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v = CMatrix::identity(n, n);
    let target = JACOBI_OFF_TOL * a.norm();

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// The rotation is `G = D R` where `D = diag(1, e^{−iφ})` makes the pivot
/// real and `R` is the real symmetric Schur rotation for the resulting
/// 2x2 block. `A ← G* A G`, `V ← V G`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase_conj = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = phase_conj * -s;
    let gqq = phase_conj * c;

    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// `A = U (H + S i) U*` with `H` Hermitian and `S` real diagonal.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// Hermitian part in the rotated basis.
    pub h: CMatrix,
    /// Diagonal of `S`, descending.
    pub s: Vec<f64>,
    /// Unitary diagonalizing the skew-Hermitian part of `original`.
    pub u: CMatrix,
    pub original: CMatrix,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `H + i diag(S)`.
    pub fn assembled(&self) -> CMatrix {
        let mut m = self.h.clone();
        for (k, &s) in self.s.iter().enumerate() {
            m[(k, k)] += Complex64::new(0.0, s);
        }
        m
    }

    pub fn def_tol(&self) -> f64 {
        default_def_tol(&self.s)
    }

    pub fn definiteness(&self) -> Definiteness {
        classify(&self.s, self.def_tol())
    }

    /// `max(‖U*U − I‖_∞, ‖U* A U − (H + iS)‖_∞ / (1 + ‖A‖_∞))`.
    pub fn residual(&self) -> f64 {
        let n = self.n();
        let unitary = inf_norm(&(self.u.adjoint() * &self.u - CMatrix::identity(n, n)));
        let recon = inf_norm(&(self.u.adjoint() * &self.original * &self.u - self.assembled()))
            / (1.0 + inf_norm(&self.original));
        unitary.max(recon)
    }
}

/// Rotates `A` so that its skew-Hermitian part becomes `i diag(S)`.
///
/// Matrices with entries in `span{1, q}` for a pure unit quaternion `q`
/// must be rotated to complex form by the caller first.
pub fn canonical_form(a: &CMatrix) -> Result<CanonicalForm> {
    check_square(a)?;
    let half = Complex64::new(0.5, 0.0);
    let h_hat = (a + a.adjoint()) * half;
    let s_hat = (a - a.adjoint()) * half;
    // -i Ŝ is Hermitian; its eigenvectors diagonalize Ŝ.
    let mut skew = s_hat * Complex64::new(0.0, -1.0);
    skew = (&skew + skew.adjoint()) * half;
    let eig = hermitian_eig(&skew)?;
    let u = eig.vectors;
    let h = u.adjoint() * h_hat * &u;
    let h = (&h + h.adjoint()) * half;
    Ok(CanonicalForm {
        h,
        s: eig.values,
        u,
        original: a.clone(),
    })
}

/// `χ(A) = [[A1, A2], [−conj(A2), conj(A1)]]` for `A = A1 + A2 j`.
pub fn complexify(a: &QMatrix) -> CMatrix {
    let n = a.n();
    CMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (a1, a2) = a[(r % n, c % n)].complex_pair();
        match (r < n, c < n) {
            (true, true) => a1,
            (true, false) => a2,
            (false, true) => -a2.conj(),
            (false, false) => a1.conj(),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemiDefinite,
    NegativeDefinite,
    NegativeSemiDefinite,
    Indefinite,
    Zero,
}

impl Definiteness {
    /// Positive definite or semi-definite.
    pub fn is_positive(self) -> bool {
        matches!(self, Self::PositiveDefinite | Self::PositiveSemiDefinite)
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Self::NegativeDefinite | Self::NegativeSemiDefinite)
    }
}

/// `1e−9 (1 + max |S_k|)`.
pub fn default_def_tol(s: &[f64]) -> f64 {
    1e-9 * (1.0 + s.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// Sign classification of a real diagonal with zero band `[−tol, tol]`.
pub fn classify(s: &[f64], tol: f64) -> Definiteness {
    let pos = s.iter().filter(|&&v| v > tol).count();
    let neg = s.iter().filter(|&&v| v < -tol).count();
    let zero = s.len() - pos - neg;
    match (pos, neg, zero) {
        (0, 0, _) => Definiteness::Zero,
        (_, 0, 0) => Definiteness::PositiveDefinite,
        (_, 0, _) => Definiteness::PositiveSemiDefinite,
        (0, _, 0) => Definiteness::NegativeDefinite,
        (0, _, _) => Definiteness::NegativeSemiDefinite,
        _ => Definiteness::Indefinite,
    }
}

#[cfg(test)]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_complex(n: usize, rng: &mut impl Rng) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        let m = random_complex(n, rng);
        (&m + m.adjoint()) * c(0.5, 0.0)
    }

    fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
        random_complex(n, rng).qr().q()
    }

    fn check_eig(m: &CMatrix, eig: &HermitianEigen) {
        let n = m.nrows();
        let scale = 1.0 + inf_norm(m);
        for k in 0..n {
            let v = eig.vectors.column(k);
            let resid = (m * v - v * c(eig.values[k], 0.0)).norm();
            assert!(resid <= 1e-9 * scale, "residual {resid}");
        }
        for w in eig.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let gram = eig.vectors.adjoint() * &eig.vectors - CMatrix::identity(n, n);
        assert!(inf_norm(&gram) <= 1e-10);
        let recon = &eig.vectors
            * CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                eig.values.iter().map(|&l| c(l, 0.0)),
            ))
            * eig.vectors.adjoint();
        assert!(inf_norm(&(recon - m)) <= 1e-9 * scale);
    }

    #[test]
    fn eig_diagonal() {
        let m = CMatrix::from_diagonal(&nalgebra::dvector![c(2.0, 0.0), c(-1.0, 0.0)]);
        let eig = hermitian_eig(&m).unwrap();
        assert_eq!(eig.values, vec![2.0, -1.0]);
        assert_eq!(eig.vectors, CMatrix::identity(2, 2));
    }

    #[test]
    fn eig_swap() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let eig = hermitian_eig(&m).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-15);
        assert!((eig.values[1] + 1.0).abs() < 1e-15);
        check_eig(&m, &eig);
    }

    #[test]
    fn eig_complex_2x2() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)]);
        let eig = hermitian_eig(&m).unwrap();
        assert!((eig.values[0] - 2.0).abs() < 1e-14);
        assert!(eig.values[1].abs() < 1e-14);
        check_eig(&m, &eig);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_zero_and_empty_inputs() {
        let eig = hermitian_eig(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
        assert_eq!(eig.vectors, CMatrix::identity(3, 3));
        assert!(hermitian_eig(&CMatrix::zeros(0, 0)).unwrap().values.is_empty());
    }

    #[test]
    fn eig_random_matches_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 3, 5, 8, 16, 32] {
            let m = random_hermitian(n, &mut rng);
            let eig = hermitian_eig(&m).unwrap();
            check_eig(&m, &eig);
            let mut reference: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
            reference.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in eig.values.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-10 * (1.0 + inf_norm(&m)));
            }
        }
    }

    #[test]
    fn eig_repeated_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = random_unitary(4, &mut rng);
        let d = CMatrix::from_diagonal(&nalgebra::dvector![
            c(3.0, 0.0),
            c(3.0, 0.0),
            c(-1.0, 0.0),
            c(-1.0, 0.0)
        ]);
        let m = &u * d * u.adjoint();
        let m = (&m + m.adjoint()) * c(0.5, 0.0);
        let eig = hermitian_eig(&m).unwrap();
        check_eig(&m, &eig);
    }

    #[test]
    fn canonical_hermitian_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(3, &mut rng);
        let cf = canonical_form(&a).unwrap();
        assert!(cf.s.iter().all(|&s| s.abs() < 1e-15));
        assert_eq!(cf.u, CMatrix::identity(3, 3));
        assert!(inf_norm(&(&cf.h - &a)) < 1e-15);
        assert_eq!(cf.definiteness(), Definiteness::Zero);
    }

    #[test]
    fn canonical_diagonal_input() {
        let a = CMatrix::from_diagonal(&nalgebra::dvector![c(1.0, 1.0), c(2.0, -3.0)]);
        let cf = canonical_form(&a).unwrap();
        assert_eq!(cf.s, vec![1.0, -3.0]);
        assert!((cf.h[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((cf.h[(1, 1)].re - 2.0).abs() < 1e-15);
        assert_eq!(cf.definiteness(), Definiteness::Indefinite);
    }

    #[test]
    fn canonical_jordan_block() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        let cf = canonical_form(&a).unwrap();
        assert!((cf.s[0] - 1.5).abs() < 1e-14);
        assert!((cf.s[1] - 0.5).abs() < 1e-14);
        assert!(cf.residual() < 1e-12);
    }

    #[test]
    fn canonical_invariants_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            let a = random_complex(n, &mut rng);
            let cf = canonical_form(&a).unwrap();
            assert!(cf.residual() <= 1e-10, "residual {}", cf.residual());
            assert!(is_hermitian(&cf.h));
        }
    }

    #[test]
    fn canonical_spectrum_is_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let n = rng.random_range(1..=5);
            let a = random_complex(n, &mut rng);
            let v = random_unitary(n, &mut rng);
            let b = v.adjoint() * &a * &v;
            let sa = canonical_form(&a).unwrap().s;
            let sb = canonical_form(&b).unwrap().s;
            for (x, y) in sa.iter().zip(&sb) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn complexify_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_complex(2, &mut rng);
        let chi = complexify(&QMatrix::from_complex(&a));
        let zero = CMatrix::zeros(2, 2);
        assert_eq!(chi.view((0, 0), (2, 2)), a);
        assert_eq!(chi.view((0, 2), (2, 2)), zero);
        assert_eq!(chi.view((2, 0), (2, 2)), zero);
        assert_eq!(chi.view((2, 2), (2, 2)), a.map(|z| z.conj()));

        let j = QMatrix::from_fn(1, |_, _| Quaternion::J);
        assert_eq!(
            complexify(&j),
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)])
        );
        let k = QMatrix::from_fn(1, |_, _| Quaternion::K);
        assert_eq!(
            complexify(&k),
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)])
        );
    }

    #[test]
    fn complexify_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rq = |rng: &mut ChaCha8Rng| {
            QMatrix::from_fn(3, |_, _| {
                Quaternion::new(
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                    rng.sample(StandardNormal),
                )
            })
        };
        for _ in 0..20 {
            let a = rq(&mut rng);
            let b = rq(&mut rng);
            let lhs = complexify(&a.matmul(&b));
            let rhs = complexify(&a) * complexify(&b);
            assert!(inf_norm(&(lhs - rhs)) < 1e-10);
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&[1.0, 2.0], 1e-9), Definiteness::PositiveDefinite);
        assert_eq!(classify(&[1.0, 1.0, -1.0], 1e-9), Definiteness::Indefinite);
        assert_eq!(classify(&[1.0, 0.0], 1e-9), Definiteness::PositiveSemiDefinite);
        assert_eq!(classify(&[-1.0, -2.0], 1e-9), Definiteness::NegativeDefinite);
        assert_eq!(classify(&[0.0, -2.0], 1e-9), Definiteness::NegativeSemiDefinite);
        assert_eq!(classify(&[1e-12, -1e-12], 1e-9), Definiteness::Zero);
        assert_eq!(classify(&[], 1e-9), Definiteness::Zero);
    }

    proptest! {
        #[test]
        fn classify_matches_sign_pattern(s in prop::collection::vec(-2.0f64..2.0, 1..6)) {
            let tol = 1e-9;
            let d = classify(&s, tol);
            let all_pos = s.iter().all(|&v| v > tol);
            let all_nonneg = s.iter().all(|&v| v >= -tol);
            let all_neg = s.iter().all(|&v| v < -tol);
            let all_nonpos = s.iter().all(|&v| v <= tol);
            match d {
                Definiteness::PositiveDefinite => prop_assert!(all_pos),
                Definiteness::PositiveSemiDefinite => prop_assert!(all_nonneg && !all_pos && !all_nonpos),
                Definiteness::NegativeDefinite => prop_assert!(all_neg),
                Definiteness::NegativeSemiDefinite => prop_assert!(all_nonpos && !all_neg && !all_nonneg),
                Definiteness::Zero => prop_assert!(all_nonneg && all_nonpos),
                Definiteness::Indefinite => prop_assert!(!all_nonneg && !all_nonpos),
            }
        }
    }
}
