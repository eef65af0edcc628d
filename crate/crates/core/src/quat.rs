//! Real quaternions, quaternionic vectors and matrices.
//!
//! Quaternions are stored as four `f64` coefficients of `1, i, j, k`.
//! Every equality test is tolerance based; [`DEFAULT_SIMILARITY_TOL`] is the
//! default for similarity checks.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::CMatrix;
use crate::{Error, Result};

pub const DEFAULT_SIMILARITY_TOL: f64 = 1e-10;

/// Allowed deviation of `|v|` from 1 in [`qform`].
pub const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    /// Builds `a + b j` from two complex numbers.
    pub fn from_complex_pair(a: Complex64, b: Complex64) -> Self {
        Self::new(a.re, a.im, b.re, b.im)
    }

    /// Splits `q = a + b j` into `(a, b)`.
    pub fn complex_pair(self) -> (Complex64, Complex64) {
        (Complex64::new(self.w, self.x), Complex64::new(self.y, self.z))
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> Quaternion {
        Self::new(0.0, self.x, self.y, self.z)
    }

    pub fn im_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product in `R^4`.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// True when the `j` and `k` parts vanish within `tol`.
    pub fn is_complex(self, tol: f64) -> bool {
        self.y.abs() <= tol && self.z.abs() <= tol
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn similarity_class(self) -> SimilarityClass {
        SimilarityClass {
            re: self.w,
            imnorm: self.im_norm(),
        }
    }

    pub fn project(self, subfield: Subfield) -> Complex64 {
        match subfield {
            Subfield::Real => Complex64::new(self.w, 0.0),
            Subfield::Complex => Complex64::new(self.w, self.x),
        }
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

/// Real subfields of `H` used by [`Quaternion::project`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subfield {
    Real,
    Complex,
}

pub fn project(q: Quaternion, subfield: Subfield) -> Complex64 {
    q.project(subfield)
}

/// Similarity class `[q] = { s* q s : |s| = 1 }`, determined by
/// `Re q` and `|Im q|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityClass {
    pub re: f64,
    pub imnorm: f64,
}

impl SimilarityClass {
    /// The representative in the closed upper half-plane.
    pub fn rep(self) -> Complex64 {
        Complex64::new(self.re, self.imnorm)
    }
}

/// `Re q + |Im q| i`.
pub fn class_rep(q: Quaternion) -> Complex64 {
    q.similarity_class().rep()
}

pub fn similar(a: Quaternion, b: Quaternion) -> bool {
    similar_with_tol(a, b, DEFAULT_SIMILARITY_TOL)
}

pub fn similar_with_tol(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a.re() - b.re()).abs() <= tol && (a.im_norm() - b.im_norm()).abs() <= tol
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QVector(Vec<Quaternion>);

impl QVector {
    pub fn new(entries: Vec<Quaternion>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        Ok(Self(entries))
    }

    /// `x + y j` for complex vectors `x`, `y` of equal length.
    pub fn from_complex_pair(x: &[Complex64], y: &[Complex64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                actual: y.len(),
            });
        }
        Self::new(
            x.iter()
                .zip(y)
                .map(|(&a, &b)| Quaternion::from_complex_pair(a, b))
                .collect(),
        )
    }

    /// Inverse of [`QVector::from_complex_pair`].
    pub fn complex_pair(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        self.0.iter().map(|q| q.complex_pair()).unzip()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn unit(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self(self.0.iter().map(|q| q.scale(1.0 / norm)).collect()))
    }

    /// Flattened `R^{4n}` coordinates.
    pub fn to_reals(&self) -> Vec<f64> {
        self.0.iter().flat_map(|q| q.to_array()).collect()
    }

    pub fn from_reals(r: &[f64]) -> Result<Self> {
        if !r.len().is_multiple_of(4) {
            return Err(Error::InvalidArgument(format!(
                "length {} is not a multiple of 4",
                r.len()
            )));
        }
        Self::new(
            r.chunks_exact(4)
                .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
                .collect(),
        )
    }

    /// Right scalar multiplication `v s`.
    pub fn mul_right(&self, s: Quaternion) -> Self {
        Self(self.0.iter().map(|&q| q * s).collect())
    }
}

impl Index<usize> for QVector {
    type Output = Quaternion;
    fn index(&self, i: usize) -> &Quaternion {
        &self.0[i]
    }
}

/// Square quaternionic matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QMatrix {
    n: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Quaternion::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |r, c| if r == c { Quaternion::ONE } else { Quaternion::ZERO })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_complex(a: &CMatrix) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "complex matrix must be square");
        Self::from_fn(a.nrows(), |r, c| Quaternion::from_complex(a[(r, c)]))
    }

    /// The complex matrix with the same entries, if every entry is complex.
    pub fn to_complex(&self, tol: f64) -> Result<CMatrix> {
        if !self.is_complex(tol) {
            return Err(Error::NotComplex);
        }
        Ok(CMatrix::from_fn(self.n, self.n, |r, c| {
            self[(r, c)].project(Subfield::Complex)
        }))
    }

    pub fn is_complex(&self, tol: f64) -> bool {
        self.data.iter().all(|q| q.is_complex(tol))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |r, c| self[(c, r)].conj())
    }

    /// Left scalar multiplication `s A`.
    pub fn mul_left(&self, s: Quaternion) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&q| s * q).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |r, c| {
            (0..self.n).fold(Quaternion::ZERO, |acc, k| acc + self[(r, k)] * other[(k, c)])
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }

    /// `v* A v` without the unit-norm check.
    pub(crate) fn form(&self, v: &[Quaternion]) -> Quaternion {
        let mut acc = Quaternion::ZERO;
        for r in 0..self.n {
            let mut row = Quaternion::ZERO;
            for (a, x) in self.data[r * self.n..(r + 1) * self.n].iter().zip(v) {
                row += *a * *x;
            }
            acc += v[r].conj() * row;
        }
        acc
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.data[r * self.n + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.n + c]
    }
}

/// The quadratic form `v* A v` for a unit vector `v`.
pub fn qform(a: &QMatrix, v: &QVector) -> Result<Quaternion> {
    if v.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            actual: v.len(),
        });
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm });
    }
    Ok(a.form(v.entries()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn arb_quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_array)
    }

    #[test]
    fn basis_products() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        let minus_one = Quaternion::real(-1.0);
        assert_eq!(i * i, minus_one);
        assert_eq!(j * j, minus_one);
        assert_eq!(k * k, minus_one);
        assert_eq!(i * j * k, minus_one);
        assert_eq!(qmul(i, j), k);
        assert_eq!(j * i, -k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
    }

    #[test]
    fn product_examples() {
        let q = Quaternion::new(0.3, -1.2, 2.0, 0.5);
        assert_eq!(q * Quaternion::ONE, q);
        // (1+i)(1+j) = 1 + j + i + ij = 1 + i + j + k
        let lhs = Quaternion::new(1.0, 1.0, 0.0, 0.0) * Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(lhs, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn similarity_examples() {
        assert!(similar(Quaternion::J, Quaternion::I));
        assert!(similar(
            Quaternion::new(1.0, 1.0, 0.0, 0.0),
            Quaternion::new(1.0, -1.0, 0.0, 0.0)
        ));
        assert!(!similar(
            Quaternion::new(1.0, 1.0, 0.0, 0.0),
            Quaternion::new(2.0, 1.0, 0.0, 0.0)
        ));
    }

    #[test]
    fn class_rep_examples() {
        assert_eq!(class_rep(Quaternion::new(1.0, 0.0, 1.0, 0.0)), Complex64::new(1.0, 1.0));
        assert_eq!(class_rep(Quaternion::real(3.0)), Complex64::new(3.0, 0.0));
        let r = class_rep(Quaternion::new(1.0, 1.0, 1.0, 1.0));
        assert_eq!(r.re, 1.0);
        assert!((r.im - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn projections() {
        let q = Quaternion::new(1.0, 1.0, 1.0, 0.0);
        assert_eq!(project(q, Subfield::Complex), Complex64::new(1.0, 1.0));
        assert_eq!(project(Quaternion::K, Subfield::Real), Complex64::new(0.0, 0.0));
        assert_eq!(
            project(Quaternion::new(2.0, 0.0, 0.0, -3.0), Subfield::Complex),
            Complex64::new(2.0, 0.0)
        );
    }

    #[test]
    fn qform_examples() {
        let v = QVector::new(vec![
            Quaternion::new(0.5, 0.5, 0.0, 0.0),
            Quaternion::new(0.0, 0.0, 0.5, -0.5),
        ])
        .unwrap();
        let one = qform(&QMatrix::identity(2), &v).unwrap();
        assert!(close(one, Quaternion::ONE, 1e-15));

        let mut d = QMatrix::zeros(2);
        d[(0, 0)] = Quaternion::I;
        d[(1, 1)] = -Quaternion::I;
        let e1 = QVector::new(vec![Quaternion::ONE, Quaternion::ZERO]).unwrap();
        assert_eq!(qform(&d, &e1).unwrap(), Quaternion::I);

        // [[1,h],[0,1]] at (1,1)/sqrt2 gives 1 + h/2.
        let h = Quaternion::new(0.0, 0.6, 0.0, 0.8);
        let mut a = QMatrix::identity(2);
        a[(0, 1)] = h;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = QVector::new(vec![Quaternion::real(s), Quaternion::real(s)]).unwrap();
        let got = qform(&a, &v).unwrap();
        assert!(close(got, Quaternion::ONE + h.scale(0.5), 1e-15));
    }

    #[test]
    fn qform_rejects_non_unit() {
        let v = QVector::new(vec![Quaternion::real(2.0)]).unwrap();
        assert!(matches!(qform(&QMatrix::identity(1), &v), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn hermitian_complex_form_is_real() {
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, -2.0),
                Complex64::new(0.5, 2.0),
                Complex64::new(-3.0, 0.0),
            ],
        );
        let a = QMatrix::from_complex(&h);
        let v = QVector::new(vec![
            Quaternion::new(0.6, 0.0, 0.0, 0.0),
            Quaternion::new(0.0, 0.8, 0.0, 0.0),
        ])
        .unwrap();
        let w = qform(&a, &v).unwrap();
        assert!(w.x.abs() < 1e-12 && w.y.abs() < 1e-12 && w.z.abs() < 1e-12);
    }

    #[test]
    fn unit_of_zero_is_error() {
        let v = QVector::new(vec![Quaternion::ZERO; 3]).unwrap();
        assert_eq!(v.unit(), Err(Error::ZeroVector));
        assert!(QVector::new(vec![]).is_err());
    }

    #[test]
    fn adjoint_is_involution() {
        let a = QMatrix::from_fn(3, |r, c| Quaternion::new(r as f64, c as f64, 0.5, -((r * c) as f64)));
        assert_eq!(a.adjoint().adjoint(), a);
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in arb_quat(), b in arb_quat()) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }

        #[test]
        fn norm_squared_matches_conjugate_product(a in arb_quat()) {
            let p = a * a.conj();
            prop_assert!((p.w - a.norm_sqr()).abs() <= 1e-14 * (1.0 + a.norm_sqr()));
            prop_assert!(p.im_norm() <= 1e-14 * (1.0 + a.norm_sqr()));
        }

        #[test]
        fn unit_has_norm_one(a in prop::collection::vec(arb_quat(), 1..6)) {
            let v = QVector::new(a).unwrap();
            prop_assume!(v.norm() > 1e-6);
            prop_assert!((v.unit().unwrap().norm() - 1.0).abs() <= 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn class_rep_is_similarity_invariant(q in arb_quat(), s in arb_quat()) {
            prop_assume!(s.norm() > 1e-3);
            let s = s.scale(1.0 / s.norm());
            let conjugated = s.conj() * q * s;
            let (a, b) = (class_rep(conjugated), class_rep(q));
            prop_assert!((a - b).norm() <= 1e-9 * (1.0 + q.norm()));
        }
    }
}
