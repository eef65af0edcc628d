use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use qbild::band::{band, BandOptions, BandStatus, KKT_TOL};
use qbild::bild::{upper_bild, BildOptions, BildResult};
use qbild::crange::{sweep, sweep_radius, MIN_GRID};
use qbild::geometry::ConvexRegion;
use qbild::linalg::canonical_form;
use qbild::oracle::{
    conjecture_demo, radius_norm_demo, radius_norm_matrix, sample_range, validate_with_tol, ConjectureReport,
    RadiusNormReport, CONTAINMENT_TOL,
};
use qbild::quat::Quaternion;
use qbild::SCHEMA_VERSION;

use crate::error::{CliError, Result};
use crate::matrix::MatrixFile;
use crate::output::OutDir;
use crate::svg::{Plot, DASHED, FILL, OUTLINE};

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Number of sweep angles.
    #[arg(long, default_value_t = 720)]
    pub grid: usize,
    /// Band optimizer multi-starts.
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    /// Oracle sample count.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Command specific tolerance: conjugate-symmetry test for `bild`,
    /// containment for `validate`, KKT residual for `band`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also write SVG plots.
    #[arg(long)]
    pub svg: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

impl RunArgs {
    pub fn check(&self) -> Result<()> {
        if self.grid < MIN_GRID {
            return Err(CliError::Config(format!(
                "m ≥ {MIN_GRID} required, got --grid {}",
                self.grid
            )));
        }
        if self.starts == 0 || self.samples == 0 {
            return Err(CliError::Config("--starts and --samples must be positive".into()));
        }
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::Config(format!("--tol must be positive, got {tol}")));
            }
        }
        Ok(())
    }

    fn band_options(&self) -> BandOptions {
        BandOptions {
            starts: self.starts,
            seed: self.seed,
            ..BandOptions::default()
        }
    }

    fn bild_options(&self) -> BildOptions {
        BildOptions {
            grid: self.grid,
            band: self.band_options(),
            conj_tol: self.tol,
        }
    }
}

fn plot_bild(b: &BildResult) -> String {
    let mut plot = Plot::new([
        &b.upper.outer,
        &b.generators.range.outer,
        &b.generators.adjoint_range.outer,
    ]);
    plot.region(&b.upper.inner, FILL);
    plot.region(&b.upper.outer, OUTLINE);
    plot.region(&b.generators.range.inner, DASHED);
    plot.region(&b.generators.adjoint_range.inner, DASHED);
    if let Some((lo, hi)) = b.v_band.interval() {
        plot.tick(lo);
        plot.tick(hi);
    }
    plot.finish()
}

pub fn bild(input: &Path, run: &RunArgs) -> Result<()> {
    let a = MatrixFile::read(input)?.complex()?;
    let b = upper_bild(&a, &run.bild_options())?;
    let out = OutDir::create(&run.out_dir)?;
    let check = if b.verified {
        None
    } else {
        let report = validate_with_tol(&a, &b, run.samples, run.seed, CONTAINMENT_TOL)?;
        out.write_json("validation.json", &report)?;
        Some(report)
    };
    if check.as_ref().is_some_and(|r| !r.passed) {
        return Err(CliError::Validation(
            "unverified bild failed the sampling check, nothing written".into(),
        ));
    }
    out.write_json("bild.json", &b)?;
    out.write("bild_inner.csv", &b.upper.inner.to_csv())?;
    out.write("bild_outer.csv", &b.upper.outer.to_csv())?;
    out.write("bild_lower.csv", &b.lower().inner.to_csv())?;
    out.write("range_upper.csv", &b.generators.range.inner.to_csv())?;
    out.write("adjoint_range_upper.csv", &b.generators.adjoint_range.inner.to_csv())?;
    if run.svg {
        out.write("bild.svg", &plot_bild(&b))?;
    }
    println!("path: {:?}", b.path);
    match b.v_band.interval() {
        Some((lo, hi)) => println!("band: [{lo}, {hi}]"),
        None => println!("band: empty"),
    }
    println!("gap: {:e}", b.diagnostics.gap);
    if check.is_some() {
        return Err(CliError::NoConvergence(format!(
            "band optimizer stopped with KKT residual {:e}; sampling check passed",
            b.diagnostics.kkt_residual
        )));
    }
    Ok(())
}

pub fn crange(input: &Path, run: &RunArgs) -> Result<()> {
    let a = MatrixFile::read(input)?.complex()?;
    let sw = sweep(&a, run.grid)?;
    let out = OutDir::create(&run.out_dir)?;
    out.write("crange_support.csv", &sw.to_csv())?;
    out.write("crange_inner.csv", &sw.inner().to_csv())?;
    out.write("crange_outer.csv", &sw.outer().to_csv())?;
    if run.svg {
        let mut plot = Plot::new([sw.outer()]);
        plot.region(sw.inner(), FILL);
        plot.region(sw.outer(), OUTLINE);
        out.write("crange.svg", &plot.finish())?;
    }
    let r = sweep_radius(&sw);
    println!("radius_lo,radius_hi");
    println!("{},{}", r.lo, r.hi);
    Ok(())
}

pub fn validate(input: &Path, bild_path: Option<&Path>, run: &RunArgs) -> Result<()> {
    let a = MatrixFile::read(input)?.complex()?;
    let b = match bild_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
            let origin = path.display().to_string();
            let b: BildResult = serde_json::from_str(&text).map_err(|e| CliError::json(&origin, e))?;
            if b.schema != SCHEMA_VERSION {
                return Err(CliError::Format {
                    path: origin,
                    message: format!("unsupported schema {}", b.schema),
                });
            }
            b
        }
        None => upper_bild(&a, &run.bild_options())?,
    };
    let report = validate_with_tol(&a, &b, run.samples, run.seed, run.tol.unwrap_or(CONTAINMENT_TOL))?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    if !report.passed {
        return Err(CliError::Validation(format!(
            "{} of {} samples outside the bild (max excess {:e})",
            report.violations, report.samples, report.max_excess
        )));
    }
    Ok(())
}

pub fn band_cmd(input: &Path, run: &RunArgs) -> Result<()> {
    let a = MatrixFile::read(input)?.complex()?;
    let cf = canonical_form(&a)?;
    let opts = BandOptions {
        kkt_tol: run.tol.unwrap_or(KKT_TOL),
        ..run.band_options()
    };
    let r = band(&cf, &opts)?;
    OutDir::create(&run.out_dir)?.write_json("band.json", &r)?;
    println!("v_min,v_max");
    match r.interval() {
        Some((lo, hi)) => println!("{lo},{hi}"),
        None => println!(","),
    }
    if r.status == BandStatus::MaxIterations {
        return Err(CliError::NoConvergence(format!("KKT residual {:e}", r.kkt_residual)));
    }
    Ok(())
}

pub fn sample(input: &Path, rows: usize, run: &RunArgs) -> Result<()> {
    let a = MatrixFile::read(input)?.quaternion();
    let cloud = sample_range(&a, run.samples, run.seed)?;
    let out = OutDir::create(&run.out_dir)?;
    out.write("sample.csv", &cloud.to_csv(rows))?;
    let hull = cloud.hull();
    out.write("sample_hull.csv", &hull.to_csv())?;
    if run.svg {
        let mut plot = Plot::new([&hull]);
        let stride = cloud.reps.len().div_ceil(2000).max(1);
        let shown: Vec<_> = cloud.reps.iter().step_by(stride).copied().collect();
        plot.points(&shown);
        plot.region(&hull, OUTLINE);
        out.write("sample.svg", &plot.finish())?;
    }
    println!("samples: {}", cloud.samples);
    println!("max modulus: {}", cloud.max_modulus());
    println!("hull vertices: {}", hull.vertices().len());
    Ok(())
}

fn conjecture_text(r: &ConjectureReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Square example, A = diag(-1-i, -1-i, 1+i, 1+i)");
    let _ = writeln!(s, "  computed bild vs square: hausdorff {:.3e}", r.computed_hausdorff);
    let _ = writeln!(
        s,
        "  samples outside the conjectured triangle by more than {}: {} of {}",
        r.margin, r.outside_conjectured, r.samples
    );
    let _ = writeln!(s, "  samples outside the square: {}", r.outside_square);
    let _ = writeln!(
        s,
        "  witness {:.6}{:+.6}i lies {:.4} outside the triangle",
        r.witness.re, r.witness.im, r.witness_excess
    );
    let _ = writeln!(
        s,
        "  triangles conv{{-1+i, 1+i, t}} containing the square: {} of {}",
        r.triangles_containing_square, r.triangles_checked
    );
    let _ = writeln!(s, "  conjecture refuted: {}", r.refutes_conjecture());
    s
}

fn radius_text(r: &RadiusNormReport) -> String {
    let h = r.h.to_array();
    format!(
        "A = [[1, h], [0, 1]] with h = {h:?}\n  w(A) = {} (sampled lower bound {:.6})\n  w(iA) ~ {:.6}\n  gap {:.6}, ih complex: {}\n",
        r.omega_a, r.omega_a_lower, r.omega_ia_est, r.gap, r.ih_complex
    )
}

pub fn demos(run: &RunArgs) -> Result<()> {
    let out = OutDir::create(&run.out_dir)?;
    let conj = conjecture_demo(run.samples, run.seed)?;
    let j = radius_norm_demo(Quaternion::J, run.samples, run.seed)?;
    let i = radius_norm_demo(Quaternion::I, run.samples, run.seed)?;
    out.write_json("conjecture.json", &conj)?;
    out.write_json("radius_norm_j.json", &j)?;
    out.write_json("radius_norm_i.json", &i)?;

    let mut plot = Plot::new([&conj.conjectured, &conj.square]);
    plot.region(&conj.computed, FILL);
    plot.region(&conj.square, OUTLINE);
    plot.region(&conj.conjectured, DASHED);
    plot.points(&[conj.witness]);
    out.write("conjecture.svg", &plot.finish())?;

    let a = radius_norm_matrix(Quaternion::J);
    let hull_a = sample_range(&a, run.samples, run.seed)?.hull();
    let hull_ia = sample_range(&a.mul_left(Quaternion::I), run.samples, run.seed)?.hull();
    let circle = ConvexRegion::hull(
        (0..=180).map(|k| num_complex::Complex64::from_polar(1.5, k as f64 * std::f64::consts::PI / 180.0)),
    );
    let mut plot = Plot::new([&circle, &hull_a, &hull_ia]);
    plot.region(&hull_a, FILL);
    plot.region(&hull_ia, OUTLINE);
    plot.region(&circle, DASHED);
    out.write("radius_norm.svg", &plot.finish())?;

    let report = format!("{}\n{}\n{}", conjecture_text(&conj), radius_text(&j), radius_text(&i));
    out.write("demos.txt", &report)?;
    print!("{report}");

    let mut failures = Vec::new();
    if !conj.refutes_conjecture() {
        failures.push("square bild matches the conjectured triangle");
    }
    if j.gap <= 0.01 {
        failures.push("no radius gap for h = j");
    }
    if i.gap.abs() > 1e-3 {
        failures.push("radius gap for h = i");
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(failures.join("; ")))
    }
}
