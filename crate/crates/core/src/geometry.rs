//! Planar convex regions represented by counterclockwise vertex lists.
//!
//! Points, segments and the empty set are first-class regions: the bild of a
//! Hermitian matrix is a real segment and the upper half of `W_C(A*)` is
//! empty whenever `W_C(A)` lies strictly above the real axis.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative collinearity tolerance for hull construction.
pub const COLLINEAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Empty,
    Point,
    Segment,
    Polygon,
}

/// A closed convex set in the complex plane given by its extreme points.
///
/// Vertices are in convex position, counterclockwise, starting from the
/// lexicographically smallest `(re, im)` vertex.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConvexRegion {
    vertices: Vec<Complex64>,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Left turn at `a`. Nearly collinear continuations, with the sine of the
/// turn angle below [`COLLINEAR_TOL`], count as straight.
fn left_turn(o: Complex64, a: Complex64, b: Complex64) -> bool {
    let c = cross(o, a, b);
    if c <= 0.0 {
        return false;
    }
    let (u, v) = (a - o, b - a);
    let forward = u.re * v.re + u.im * v.im > 0.0;
    !(forward && c <= COLLINEAR_TOL * u.norm() * v.norm())
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

impl ConvexRegion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point(z: Complex64) -> Self {
        Self { vertices: vec![z] }
    }

    /// Convex hull by Andrew's monotone chain.
    pub fn hull<I: IntoIterator<Item = Complex64>>(points: I) -> Self {
        let mut pts: Vec<Complex64> = points
            .into_iter()
            .filter(|z| z.re.is_finite() && z.im.is_finite())
            .collect();
        if pts.is_empty() {
            return Self::empty();
        }
        pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

        let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (pts[0].re, pts[0].re, pts[0].im, pts[0].im);
        for p in &pts {
            lo_re = lo_re.min(p.re);
            hi_re = hi_re.max(p.re);
            lo_im = lo_im.min(p.im);
            hi_im = hi_im.max(p.im);
        }
        let scale = (hi_re - lo_re).hypot(hi_im - lo_im);
        let merge = COLLINEAR_TOL * scale;
        pts.dedup_by(|b, a| (*b - *a).norm() <= merge);
        if pts.len() == 1 || scale == 0.0 {
            return Self::point(pts[0]);
        }

        let mut lower: Vec<Complex64> = Vec::with_capacity(pts.len());
        for &p in &pts {
            while lower.len() >= 2 && !left_turn(lower[lower.len() - 2], lower[lower.len() - 1], p) {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Complex64> = Vec::with_capacity(pts.len());
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && !left_turn(upper[upper.len() - 2], upper[upper.len() - 1], p) {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() == 2 && (lower[0] - lower[1]).norm() <= merge {
            lower.pop();
        }
        Self { vertices: lower }
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn kind(&self) -> RegionKind {
        match self.vertices.len() {
            0 => RegionKind::Empty,
            1 => RegionKind::Point,
            2 => RegionKind::Segment,
            _ => RegionKind::Polygon,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Closed edges `(v_k, v_{k+1})`; a segment yields its two orientations.
    fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    /// Signed Euclidean distance to the boundary: negative inside a
    /// polygon, zero on the boundary, positive outside. `+∞` when empty.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        match self.kind() {
            RegionKind::Empty => f64::INFINITY,
            RegionKind::Point => (z - self.vertices[0]).norm(),
            RegionKind::Segment => segment_distance(z, self.vertices[0], self.vertices[1]),
            RegionKind::Polygon => {
                let mut inside = true;
                let mut edge_dist = f64::INFINITY;
                for (a, b) in self.edges() {
                    let len = (b - a).norm();
                    // signed distance to the supporting line, positive inward
                    let h = cross(a, b, z) / len;
                    if h < 0.0 {
                        inside = false;
                    }
                    edge_dist = edge_dist.min(segment_distance(z, a, b));
                }
                if inside {
                    -edge_dist
                } else {
                    edge_dist
                }
            }
        }
    }

    /// `z` lies within signed distance `tol` of the region; a negative
    /// `tol` asks for strict interior points.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        (tol >= 0.0 && self.inside_polygon(z)) || self.signed_distance(z) <= tol
    }

    /// Distance from `z` to the region (zero inside).
    pub fn distance(&self, z: Complex64) -> f64 {
        if self.inside_polygon(z) {
            return 0.0;
        }
        self.signed_distance(z).max(0.0)
    }

    /// Logarithmic-time membership test for polygons; `false` for lower
    /// dimensional regions.
    fn inside_polygon(&self, z: Complex64) -> bool {
        let v = &self.vertices;
        let n = v.len();
        if self.kind() != RegionKind::Polygon || cross(v[0], v[1], z) < 0.0 || cross(v[0], v[n - 1], z) > 0.0 {
            return false;
        }
        let (mut lo, mut hi) = (1, n - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if cross(v[0], v[mid], z) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        cross(v[lo], v[lo + 1], z) >= 0.0
    }

    /// Support function `max_v Re(e^{−iθ} v)`.
    pub fn support(&self, theta: f64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let (s, c) = theta.sin_cos();
        Ok(self
            .vertices
            .iter()
            .map(|v| v.re * c + v.im * s)
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Intersection with the closed upper half-plane `Im ≥ 0`.
    ///
    /// Edge crossings are placed exactly on the real axis.
    pub fn clip_upper(&self) -> Self {
        match self.kind() {
            RegionKind::Empty => Self::empty(),
            RegionKind::Point => {
                if self.vertices[0].im >= 0.0 {
                    self.clone()
                } else {
                    Self::empty()
                }
            }
            _ => {
                let mut out = Vec::with_capacity(self.vertices.len() + 2);
                for (a, b) in self.edges() {
                    if a.im >= 0.0 {
                        out.push(a);
                    }
                    if (a.im >= 0.0) != (b.im >= 0.0) {
                        let t = a.im / (a.im - b.im);
                        out.push(Complex64::new(a.re + t * (b.re - a.re), 0.0));
                    }
                }
                Self::hull(out)
            }
        }
    }

    /// Reflection across the real axis.
    pub fn mirror(&self) -> Self {
        Self::hull(self.vertices.iter().map(|v| v.conj()))
    }

    pub fn translate(&self, by: Complex64) -> Self {
        Self::hull(self.vertices.iter().map(|v| v + by))
    }

    /// Homothety about `center` with factor `factor`.
    pub fn scale_about(&self, center: Complex64, factor: f64) -> Self {
        Self::hull(self.vertices.iter().map(|v| center + (v - center) * factor))
    }

    /// Convex hull of the union.
    pub fn union_hull<'a, I: IntoIterator<Item = &'a ConvexRegion>>(regions: I) -> Self {
        Self::hull(regions.into_iter().flat_map(|r| r.vertices.iter().copied()))
    }

    pub fn centroid(&self) -> Option<Complex64> {
        if self.is_empty() {
            return None;
        }
        let sum: Complex64 = self.vertices.iter().sum();
        Some(sum / self.vertices.len() as f64)
    }

    pub fn max_modulus(&self) -> Option<f64> {
        self.vertices.iter().map(|v| v.norm()).reduce(f64::max)
    }

    pub fn min_im(&self) -> Option<f64> {
        self.vertices.iter().map(|v| v.im).reduce(f64::min)
    }

    /// The real interval `region ∩ R`, if nonempty.
    pub fn real_interval(&self) -> Option<(f64, f64)> {
        let clipped = self.clip_upper().clip_lower();
        let lo = clipped.vertices.iter().map(|v| v.re).reduce(f64::min)?;
        let hi = clipped.vertices.iter().map(|v| v.re).reduce(f64::max)?;
        Some((lo, hi))
    }

    fn clip_lower(&self) -> Self {
        self.mirror().clip_upper().mirror()
    }

    /// CSV with header `re,im`, one vertex per row, counterclockwise.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im\n");
        for v in &self.vertices {
            let _ = writeln!(s, "{},{}", v.re, v.im);
        }
        s
    }
}

/// Symmetric Hausdorff distance between two nonempty convex regions.
///
/// Computed as `sup_θ |h_a(θ) − h_b(θ)|` by merging the edge normals of both
/// regions, in linear time after sorting.
pub fn hausdorff(a: &ConvexRegion, b: &ConvexRegion) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut events: Vec<(f64, usize, usize)> = Vec::new();
    for (r, region) in [a, b].into_iter().enumerate() {
        let v = &region.vertices;
        if v.len() < 2 {
            continue;
        }
        for k in 0..v.len() {
            let d = v[(k + 1) % v.len()] - v[k];
            events.push(((-d.re).atan2(d.im).rem_euclid(TAU), r, (k + 1) % v.len()));
        }
    }
    if events.is_empty() {
        return Ok((a.vertices[0] - b.vertices[0]).norm());
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    // extreme vertex of each region on the arc preceding the first event
    let mut cur = [0usize; 2];
    for &(_, r, k) in &events {
        cur[r] = k;
    }
    let mut best: f64 = 0.0;
    let mut prev = events[events.len() - 1].0 - TAU;
    for &(angle, r, k) in &events {
        let d = a.vertices[cur[0]] - b.vertices[cur[1]];
        let (s, c) = angle.sin_cos();
        best = best.max((d.re * c + d.im * s).abs());
        let psi = d.im.atan2(d.re);
        for target in [psi, psi + PI] {
            let t = (target - prev).rem_euclid(TAU);
            if t > 0.0 && t < angle - prev {
                best = best.max(d.norm());
            }
        }
        cur[r] = k;
        prev = angle;
    }
    Ok(best)
}

/// `max_{v ∈ a} dist(v, b)`.
pub fn directed_hausdorff(a: &ConvexRegion, b: &ConvexRegion) -> f64 {
    a.vertices.iter().map(|&v| b.distance(v)).fold(0.0, f64::max)
}

/// Inner and outer polygonal approximations of one convex set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPair {
    pub inner: ConvexRegion,
    pub outer: ConvexRegion,
}

impl RegionPair {
    pub fn new(inner: ConvexRegion, outer: ConvexRegion) -> Self {
        Self { inner, outer }
    }

    /// Hausdorff distance between the two approximations.
    pub fn gap(&self) -> f64 {
        hausdorff(&self.inner, &self.outer).unwrap_or(0.0)
    }

    /// Every inner vertex lies in the outer region within `tol`.
    pub fn is_nested(&self, tol: f64) -> bool {
        self.inner.vertices.iter().all(|&v| self.outer.contains(v, tol))
    }

    pub fn mirror(&self) -> Self {
        Self::new(self.inner.mirror(), self.outer.mirror())
    }

    pub fn clip_upper(&self) -> Self {
        Self::new(self.inner.clip_upper(), self.outer.clip_upper())
    }
}
