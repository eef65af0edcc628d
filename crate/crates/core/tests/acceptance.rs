//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits nonzero if any fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DVector;
use qbild::band::{band, BandOptions};
use qbild::bild::{general_bild, two_by_two, upper_bild, BildOptions, BildPath};
use qbild::crange::{conj_symmetric, cradius, default_conj_tol, sweep};
use qbild::geometry::{hausdorff, ConvexRegion};
use qbild::linalg::{canonical_form, complexify, CMatrix, Definiteness};
use qbild::oracle::{radius_norm_demo, sampled_radius, validate};
use qbild::quat::{qform, QMatrix, QVector, Quaternion};
use qbild::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn diag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_column_slice(entries))
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    random_complex(n, rng).qr().q()
}

fn report(criterion: &str, pass: bool, detail: String) -> bool {
    println!("{} {criterion}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn disk_polygon(center: Complex64, r: f64, k: usize) -> impl Iterator<Item = Complex64> {
    (0..k).map(move |t| center + Complex64::from_polar(r, TAU * t as f64 / k as f64))
}

fn square_bild() -> bool {
    let a = diag(&[c(-1., -1.), c(-1., -1.), c(1., 1.), c(1., 1.)]);
    let start = Instant::now();
    let b = upper_bild(&a, &BildOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let square = ConvexRegion::hull([c(-1., 1.), c(1., 1.), c(-1., 0.), c(1., 0.)]);
    let d = hausdorff(&b.upper.inner, &square).unwrap();
    let (lo, hi) = b.v_band.interval().unwrap();
    let pass = d <= 1e-3 && (lo + 1.0).abs() <= 1e-6 && (hi - 1.0).abs() <= 1e-6 && elapsed < Duration::from_secs(5);
    report(
        "square_bild",
        pass,
        format!(
            "hausdorff {d:.3e}, band [{lo:.9}, {hi:.9}], {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn disk_band_quarter() -> bool {
    let a = CMatrix::from_row_slice(
        3,
        3,
        &[
            c(0., 1.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 1.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 1.),
        ],
    );
    let start = Instant::now();
    let b = upper_bild(&a, &BildOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let (lo, hi) = b.v_band.interval().unwrap();
    let expected = ConvexRegion::hull(disk_polygon(c(0., 1.), 0.5, 20_000).chain([c(-0.25, 0.), c(0.25, 0.)]));
    let d = hausdorff(&b.upper.inner, &expected).unwrap();
    let pass = (lo + 0.25).abs() <= 1e-4 && (hi - 0.25).abs() <= 1e-4 && d <= 1e-3 && elapsed < Duration::from_secs(30);
    report(
        "disk_band_quarter",
        pass,
        format!(
            "band [{lo:.9}, {hi:.9}] vs [-0.25, 0.25], hausdorff {d:.3e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn conj_symmetric_half_ellipse() -> bool {
    let a = CMatrix::from_row_slice(
        3,
        3,
        &[
            c(0., 1.),
            c(0., 0.),
            c(1., 0.),
            c(0., 0.),
            c(0., 1.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., -1.),
        ],
    );
    let symmetric = conj_symmetric(&a, 1440, default_conj_tol(&a)).unwrap();
    let b = upper_bild(
        &a,
        &BildOptions {
            grid: 1440,
            ..BildOptions::default()
        },
    )
    .unwrap();
    let major = 5f64.sqrt() / 2.0;
    let half = ConvexRegion::hull((0..=10_000).map(|k| {
        let t = PI * k as f64 / 10_000.0;
        c(0.5 * t.cos(), major * t.sin())
    }));
    let d = hausdorff(&b.upper.inner, &half).unwrap();
    let pass = symmetric && b.path == BildPath::ConjSymmetric && d <= 1e-3;
    report(
        "conj_symmetric_half_ellipse",
        pass,
        format!("conj_symmetric {symmetric}, path {:?}, hausdorff {d:.3e}", b.path),
    )
}

fn indefinite_diagonal_band_extends_generators() -> bool {
    let a = diag(&[c(1., 1.), c(1., 1.), c(0., -1.)]);
    let b = upper_bild(&a, &BildOptions::default()).unwrap();
    let expected = ConvexRegion::hull([c(0., 1.), c(0.5, 0.), c(1., 0.), c(1., 1.)]);
    let d = hausdorff(&b.upper.inner, &expected).unwrap();
    let hi = b.v_band.v_max.unwrap();
    let generators = ConvexRegion::union_hull([&b.generators.range.inner, &b.generators.adjoint_range.inner]);
    let excess = generators.distance(c(hi, 0.));
    let pass = d <= 1e-3 && (hi - 1.0).abs() <= 1e-5 && excess > 0.1;
    report(
        "indefinite_diagonal_band_extends_generators",
        pass,
        format!("hausdorff {d:.3e}, v_max {hi:.9}, distance of v_max from conv of generators {excess:.3}"),
    )
}

fn quaternionic_radius_equals_complex_radius() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let n = 1 + k % 5;
        let a = random_complex(n, &mut rng);
        let w = cradius(&a, 720).unwrap();
        let est = sampled_radius(&QMatrix::from_complex(&a), 100_000, 500 + k as u64).unwrap();
        worst = worst.max(w.lo - est.polished);
        if est.polished < w.lo - 1e-3 || est.polished > w.hi + 1e-6 {
            failures.push(format!("#{k} n={n}: {} not in [{}, {}]", est.polished, w.lo, w.hi));
        }
    }
    report(
        "quaternionic_radius_equals_complex_radius",
        failures.is_empty(),
        format!("50 matrices, worst shortfall {worst:.2e}; {failures:?}"),
    )
}

fn radius_is_not_a_norm() -> bool {
    let j = radius_norm_demo(Quaternion::J, 100_000, 6).unwrap();
    let i = radius_norm_demo(Quaternion::I, 100_000, 7).unwrap();
    let pass = j.omega_a_lower >= 1.5 - 1e-3 && !j.ih_complex && j.gap > 0.01 && i.ih_complex && i.gap <= 1e-3;
    report(
        "radius_is_not_a_norm",
        pass,
        format!(
            "h=j: w(A) >= {:.6}, w(iA) ~ {:.6}, gap {:.4}; h=i: gap {:.2e}",
            j.omega_a_lower, j.omega_ia_est, j.gap, i.gap
        ),
    )
}

fn two_by_two_fast_path_matches_general() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = BildOptions {
        grid: 1440,
        ..BildOptions::default()
    };
    let mut worst: f64 = 0.0;
    let mut classes = std::collections::BTreeSet::new();
    let mut failures = Vec::new();
    for k in 0..200 {
        let l1: f64 = 0.2 + 2.0 * rng.random::<f64>();
        let l2: f64 = 0.2 + 2.0 * rng.random::<f64>();
        let s = match k % 5 {
            0 => [l1, l2],
            1 => [-l1, -l2],
            2 => [l1, -l2],
            3 => [l1, 0.0],
            _ => [0.0, -l2],
        };
        let h = random_complex(2, &mut rng);
        let h = (&h + h.adjoint()) * c(0.5, 0.0);
        let u = random_unitary(2, &mut rng);
        let a = &u * (h + diag(&[c(0., s[0]), c(0., s[1])])) * u.adjoint();
        let cf = canonical_form(&a).unwrap();
        classes.insert(format!("{:?}", cf.definiteness()));
        let fast = two_by_two(&cf, 1440).unwrap();
        let slow = general_bild(&a, &opts).unwrap();
        let d = hausdorff(&fast.upper.inner, &slow.upper.inner).unwrap();
        worst = worst.max(d);
        if d > 1e-4 {
            failures.push(format!("#{k} {:?}: {d:.2e}", cf.definiteness()));
        }
    }
    let mut collapse: f64 = 0.0;
    for _ in 0..50 {
        let h11: f64 = rng.sample(StandardNormal);
        let h22: f64 = rng.sample(StandardNormal);
        let l1: f64 = 0.2 + 2.0 * rng.random::<f64>();
        let l2: f64 = 0.2 + 2.0 * rng.random::<f64>();
        let cf = canonical_form(&diag(&[c(h11, l1), c(h22, l2)])).unwrap();
        assert_eq!(cf.definiteness(), Definiteness::PositiveDefinite);
        let (lam1, lam2) = (cf.s[0], cf.s[1]);
        let (g11, g22) = (cf.h[(0, 0)].re, cf.h[(1, 1)].re);
        let v = (g11 * lam2 + g22 * lam1) / (lam1 + lam2);
        let r = band(&cf, &BandOptions::default()).unwrap();
        let (lo, hi) = r.interval().unwrap();
        collapse = collapse.max((lo - v).abs()).max((hi - v).abs());
    }
    let pass = failures.is_empty() && collapse <= 1e-6 && classes.len() >= 5;
    report(
        "two_by_two_fast_path_matches_general",
        pass,
        format!("200 matrices over {classes:?}, worst hausdorff {worst:.2e}; closed-form band error {collapse:.2e}; {failures:?}"),
    )
}

fn sampled_range_inside_bild() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut violations = 0;
    for k in 0..100 {
        let n = 1 + k % 5;
        let a = random_complex(n, &mut rng);
        let b = upper_bild(&a, &BildOptions::default()).unwrap();
        let r = validate(&a, &b, 20_000, 800 + k as u64).unwrap();
        violations += r.violations;
        let inside = [&b.generators.range.inner, &b.generators.adjoint_range.inner]
            .iter()
            .all(|g| g.vertices().iter().all(|&v| b.upper.inner.contains(v, 1e-8)));
        if !r.passed || !inside {
            failures.push(format!(
                "#{k} n={n}: violations {}, generators inside {inside}",
                r.violations
            ));
        }
    }
    report(
        "sampled_range_inside_bild",
        failures.is_empty(),
        format!("100 matrices, {violations} samples outside; {failures:?}"),
    )
}

fn complexification_is_hull_of_ranges() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = 23_040;
    let mut worst: f64 = 0.0;
    let mut worst_support: f64 = 0.0;
    for _ in 0..20 {
        let a = random_complex(3, &mut rng);
        let chi = complexify(&QMatrix::from_complex(&a));
        let s_chi = sweep(&chi, m).unwrap();
        let s_a = sweep(&a, m).unwrap();
        let s_adj = s_a.adjoint();
        let conv = ConvexRegion::union_hull([s_a.inner(), s_adj.inner()]);
        worst = worst.max(hausdorff(s_chi.inner(), &conv).unwrap());
        for ((x, y), z) in s_chi
            .support_values
            .iter()
            .zip(&s_a.support_values)
            .zip(&s_adj.support_values)
        {
            worst_support = worst_support.max((x.lambda_max - y.lambda_max.max(z.lambda_max)).abs());
        }
    }
    report(
        "complexification_is_hull_of_ranges",
        worst <= 1e-6,
        format!("20 matrices at m = {m}: hausdorff {worst:.2e}, support identity {worst_support:.2e}"),
    )
}

fn form_identity() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_jk: f64 = 0.0;
    let mut worst_complex: f64 = 0.0;
    for k in 0..10_000 {
        let n = 1 + k % 5;
        let a = random_complex(n, &mut rng);
        let s = (&a - a.adjoint()) * c(0.0, -0.5);
        let qa = QMatrix::from_complex(&a);
        let x = DVector::from_fn(n, |_, _| gaussian(&mut rng));
        let mut y = DVector::from_fn(n, |_, _| gaussian(&mut rng));
        let norm = (x.norm_squared() + y.norm_squared()).sqrt();
        let (x, y0) = (x / c(norm, 0.0), y.clone() / c(norm, 0.0));
        let q = QVector::from_complex_pair(x.as_slice(), y0.as_slice()).unwrap();
        let value = qform(&qa, &q).unwrap();
        let t = x.dotc(&(&s * &y0)) * c(2.0, 0.0);
        // t k = Re(t) k − Im(t) j
        worst_jk = worst_jk.max((value.y + t.im).abs()).max((value.z - t.re).abs());

        let w = &s * &x;
        if w.norm_squared() > 1e-12 {
            y -= &w * (w.dotc(&y) / c(w.norm_squared(), 0.0));
        }
        let norm = (x.norm_squared() + y.norm_squared()).sqrt();
        let (x, y) = (x / c(norm, 0.0), y / c(norm, 0.0));
        let q = QVector::from_complex_pair(x.as_slice(), y.as_slice()).unwrap();
        let value = qform(&qa, &q).unwrap();
        let expected = x.dotc(&(&a * &x)) + y.dotc(&(a.adjoint() * &y));
        let got = Complex64::new(value.w, value.x);
        worst_complex = worst_complex
            .max((got - expected).norm())
            .max(value.y.abs())
            .max(value.z.abs());
    }
    report(
        "form_identity",
        worst_jk <= 1e-10 && worst_complex <= 1e-10,
        format!("10^4 draws: j,k identity {worst_jk:.2e}, x*Sy = 0 case {worst_complex:.2e}"),
    )
}

type Criterion = (&'static str, fn() -> bool);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("square_bild", square_bild),
        ("disk_band_quarter", disk_band_quarter),
        ("conj_symmetric_half_ellipse", conj_symmetric_half_ellipse),
        (
            "indefinite_diagonal_band_extends_generators",
            indefinite_diagonal_band_extends_generators,
        ),
        (
            "quaternionic_radius_equals_complex_radius",
            quaternionic_radius_equals_complex_radius,
        ),
        ("radius_is_not_a_norm", radius_is_not_a_norm),
        (
            "two_by_two_fast_path_matches_general",
            two_by_two_fast_path_matches_general,
        ),
        ("sampled_range_inside_bild", sampled_range_inside_bild),
        ("complexification_is_hull_of_ranges", complexification_is_hull_of_ranges),
        ("form_identity", form_identity),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, criterion) in criteria {
        let pass = std::panic::catch_unwind(criterion).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            println!("FAIL {name}: panicked: {msg}");
            false
        });
        failed += usize::from(!pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
