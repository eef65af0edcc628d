//! Minimal static SVG plots of planar regions.

use std::fmt::Write as _;

use num_complex::Complex64;
use qbild::geometry::{ConvexRegion, RegionKind};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 0.1;

pub const FILL: &str = "fill:#9ecae1;stroke:none";
pub const OUTLINE: &str = "fill:none;stroke:#08519c;stroke-width:1.5";
pub const DASHED: &str = "fill:none;stroke:#d95f02;stroke-width:1.2;stroke-dasharray:6 4";
pub const DOTTED: &str = "fill:none;stroke:#444;stroke-width:1;stroke-dasharray:2 3";

pub struct Plot {
    origin: Complex64,
    scale: f64,
    body: String,
}

impl Plot {
    /// A square viewport around `bounds` with a 10% margin on every side.
    pub fn new<'a>(bounds: impl IntoIterator<Item = &'a ConvexRegion>) -> Self {
        let pts: Vec<Complex64> = bounds.into_iter().flat_map(|r| r.vertices().iter().copied()).collect();
        let (mut lo, mut hi) = (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0));
        if !pts.is_empty() {
            lo = Complex64::new(f64::INFINITY, f64::INFINITY);
            hi = -lo;
            for z in &pts {
                lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
                hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
            }
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
        let half = span * (0.5 + MARGIN);
        let center = (lo + hi) * 0.5;
        let mut plot = Plot {
            origin: center - Complex64::new(half, half),
            scale: SIZE / (2.0 * half),
            body: String::new(),
        };
        plot.axes();
        plot
    }

    fn map(&self, z: Complex64) -> (f64, f64) {
        let d = z - self.origin;
        (d.re * self.scale, SIZE - d.im * self.scale)
    }

    fn axes(&mut self) {
        let (x0, y0) = self.map(Complex64::new(0.0, 0.0));
        if (0.0..=SIZE).contains(&y0) {
            let _ = writeln!(
                self.body,
                r#"<line x1="0" y1="{y0:.2}" x2="{SIZE}" y2="{y0:.2}" style="{DOTTED}"/>"#
            );
        }
        if (0.0..=SIZE).contains(&x0) {
            let _ = writeln!(
                self.body,
                r#"<line x1="{x0:.2}" y1="0" x2="{x0:.2}" y2="{SIZE}" style="{DOTTED}"/>"#
            );
        }
    }

    pub fn region(&mut self, r: &ConvexRegion, style: &str) {
        let points: Vec<String> = r
            .vertices()
            .iter()
            .map(|&z| {
                let (x, y) = self.map(z);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let points = points.join(" ");
        let _ = match r.kind() {
            RegionKind::Empty => Ok(()),
            RegionKind::Point => {
                let (x, y) = self.map(r.vertices()[0]);
                writeln!(
                    self.body,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" style="{style};stroke:#08519c"/>"#
                )
            }
            RegionKind::Segment => writeln!(
                self.body,
                r#"<polyline points="{points}" style="{style};stroke:#08519c;stroke-width:2"/>"#
            ),
            RegionKind::Polygon => writeln!(self.body, r#"<polygon points="{points}" style="{style}"/>"#),
        };
    }

    /// A short vertical mark on the real axis.
    pub fn tick(&mut self, x: f64) {
        let (px, py) = self.map(Complex64::new(x, 0.0));
        let _ = writeln!(
            self.body,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" style="stroke:#a50f15;stroke-width:2"/>"#,
            py - 8.0,
            py + 8.0
        );
    }

    pub fn points(&mut self, pts: &[Complex64]) {
        for &z in pts {
            let (x, y) = self.map(z);
            let _ = writeln!(
                self.body,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="0.8" fill="#636363"/>"##
            );
        }
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}
