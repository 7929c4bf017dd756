//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p nkcurves-cli --test acceptance`.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use nkcurves::curves::seeds::associativity_residual;
use nkcurves::curves::{
    cr_residual, curve_volume, great_sphere_curve, riemannian_area, sphere_in_plane, CurveMesh,
};
use nkcurves::moduli::{
    continue_curve, curve_hausdorff, g2_orbit_family, hausdorff_distance, stokes_check,
    subtorus_path, volume_drift, ContinuationOptions, Drive,
};
use nkcurves::nk::{
    find_nk_metric, lambda_estimate, s3s3_background, s3s3_type_residual, s6_background,
    second_structure_equation_residual, structure_invariants, type_residual, BackgroundSpec,
    DerivativeMethod, NKBackground, S3S3MetricParams, TrigPoly,
};
use nkcurves::octonion::associator;
use nkcurves::{random_g2, G2Path, ImOctonion, Octonion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn random_octonion(rng: &mut ChaCha8Rng) -> Octonion<f64> {
    Octonion::new(std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
}

fn rel(a: &Octonion<f64>, b: &Octonion<f64>) -> f64 {
    (*a - *b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

fn octonions() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut norm, mut alt, mut moufang) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let x = random_octonion(&mut rng);
        let y = random_octonion(&mut rng);
        let z = random_octonion(&mut rng);
        norm = norm.max(((x * y).norm() - x.norm() * y.norm()).abs() / (x.norm() * y.norm()));
        alt = alt.max(rel(&((x * x) * y), &(x * (x * y))));
        alt = alt.max(rel(&((y * x) * x), &(y * (x * x))));
        moufang = moufang.max(rel(&(z * (x * (z * y))), &(((z * x) * z) * y)));
    }
    let e = |i| Octonion::<f64>::unit(i);
    let witness = associator(&e(1), &e(2), &e(4)).norm();
    verdict(
        norm < 1e-12 && alt < 1e-12 && moufang < 1e-12 && witness > 1.0,
        format!("norm {norm:.1e}, alternativity {alt:.1e}, Moufang {moufang:.1e}, |[e1,e2,e4]| = {witness}"),
    )
}

fn s6_structure() -> Verdict {
    let bg = s6_background();
    let points = bg.sample_points(1000, 2);
    let inv = structure_invariants(&bg, &points, 2);
    let (re, _) = bg.omega_3_0.clone().expect("S⁶ carries Ω");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut equivariance = 0.0f64;
    for (k, p) in points.iter().take(200).enumerate() {
        let g = random_g2(k as u64);
        let v: Vec<Vec<f64>> = (0..3).map(|_| bg.random_tangent(p, &mut rng)).collect();
        let gp = g.apply_slice(p);
        let gv: Vec<Vec<f64>> = v.iter().map(|x| g.apply_slice(x)).collect();
        let w = bg.omega.eval_vecs(p, &v[..2]) - bg.omega.eval_vecs(&gp, &gv[..2]);
        let r = re.eval_vecs(p, &v) - re.eval_vecs(&gp, &gv);
        equivariance = equivariance.max(w.abs()).max(r.abs());
    }
    verdict(
        inv.max() < 1e-10 && equivariance < 1e-10,
        format!(
            "J² {:.1e}, compatibility {:.1e}, ω {:.1e}, G₂-equivariance {equivariance:.1e}",
            inv.j_squared, inv.compatibility, inv.omega_consistency
        ),
    )
}

fn s6_hypothesis() -> Verdict {
    let bg = s6_background();
    let points = bg.sample_points(100, 4);
    let types = type_residual(&bg, &points).unwrap();
    let l = lambda_estimate(&bg, &points).unwrap();
    let second = second_structure_equation_residual(&bg, &points, l.lambda_mean).unwrap();
    let spread = l.lambda_std / l.lambda_mean.abs();
    verdict(
        types.max_fraction < 1e-6 && spread < 1e-5 && l.max_residual < 1e-5 && second < 1e-5,
        format!(
            "mixed fraction {:.1e}, λ = {:.13}, λ_std/λ_mean {spread:.1e}, residuals {:.1e} / {second:.1e}",
            types.max_fraction, l.lambda_mean, l.max_residual
        ),
    )
}

/// `dω` from `ω = Σ w_ij ξ^i∧ξ^j` and `dξ_i = −ξ_j∧ξ_k` (cyclic in each factor).
fn exterior_oracle(bg: &NKBackground, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    let p = vec![0.0; 6];
    let e = |i: usize| {
        let mut v = vec![0.0; 6];
        v[i] = 1.0;
        v
    };
    let d_xi = |i: usize, a: &[f64], b: &[f64]| {
        let base = i / 3 * 3;
        let (j, k) = (base + (i + 1) % 3, base + (i + 2) % 3);
        -(a[j] * b[k] - a[k] * b[j])
    };
    // (μ ∧ ν)(X, Y, Z) for a 2-form μ and 1-form ν.
    let wedge21 = |mu: &dyn Fn(&[f64], &[f64]) -> f64, nu: usize| {
        mu(x, y) * z[nu] - mu(x, z) * y[nu] + mu(y, z) * x[nu]
    };
    let mut total = 0.0;
    for i in 0..6 {
        for j in (i + 1)..6 {
            let w = bg.omega.eval(&p, &[&e(i), &e(j)]);
            total += w * (wedge21(&|a, b| d_xi(i, a, b), j) - wedge21(&|a, b| d_xi(j, a, b), i));
        }
    }
    total
}

fn s3s3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut exact = 0.0f64;
    for b in [-0.5, 0.0, 0.3] {
        let bg = s3s3_background(S3S3MetricParams {
            a: 1.0,
            b,
            swap_factors: false,
        })
        .unwrap();
        assert_eq!(bg.domega_method, DerivativeMethod::MaurerCartan);
        for _ in 0..50 {
            let v: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..6).map(|_| rng.random_range(-1.0..1.0)).collect())
                .collect();
            let lib = bg.domega.eval_vecs(&[0.0; 6], &v);
            exact = exact.max((lib - exterior_oracle(&bg, &v[0], &v[1], &v[2])).abs());
        }
    }
    let r0 = s3s3_type_residual(0.0, false).unwrap();
    let s = find_nk_metric(-0.95, 0.95, 1e-8).unwrap();
    verdict(
        exact < 1e-12 && r0 > 0.01 && s.residual < 1e-8,
        format!(
            "Maurer–Cartan vs exterior oracle {exact:.1e}, r(0) = {r0:.3}, b* = {:.12} with r = {:.1e}",
            s.b_star, s.residual
        ),
    )
}

fn curves() -> Verdict {
    let bg = s6_background();
    let triple = [1, 2, 3].map(ImOctonion::<f64>::unit);
    let cr5 = cr_residual(&bg, &great_sphere_curve(&triple, 5).unwrap())
        .unwrap()
        .l2;
    let mut hs = vec![];
    let mut errs = vec![];
    let mut wirtinger = 0.0f64;
    for level in 2..=6 {
        let c = great_sphere_curve(&triple, level).unwrap();
        let v = curve_volume(&bg, &c).unwrap();
        let a = riemannian_area(&bg, &c).unwrap();
        hs.push(c.mesh_size().ln());
        errs.push(((v - 4.0 * PI) / (4.0 * PI)).abs().ln());
        if level >= 5 {
            wirtinger = wirtinger.max((a - v).abs() / a);
        }
    }
    let tilted = great_sphere_curve(&triple, 4)
        .unwrap()
        .apply_g2(&random_g2(9));
    let (vt, at) = (
        curve_volume(&bg, &tilted).unwrap(),
        riemannian_area(&bg, &tilted).unwrap(),
    );
    wirtinger = wirtinger.max((at - vt).abs() / at);
    // Least-squares slope of log error against log mesh size.
    let n = hs.len() as f64;
    let (mh, me) = (hs.iter().sum::<f64>() / n, errs.iter().sum::<f64>() / n);
    let order = hs
        .iter()
        .zip(&errs)
        .map(|(h, e)| (h - mh) * (e - me))
        .sum::<f64>()
        / hs.iter().map(|h| (h - mh).powi(2)).sum::<f64>();
    let err6 = errs.last().unwrap().exp();
    let rough = sphere_in_plane(
        [1, 2, 4].map(|i| ImOctonion::<f64>::unit(i).coeffs.to_vec()),
        4,
    )
    .unwrap();
    let (vr, ar) = (
        curve_volume(&bg, &rough).unwrap(),
        riemannian_area(&bg, &rough).unwrap(),
    );
    let gap = (ar - vr) / ar;
    verdict(
        cr5 < 1e-8 && err6 < 1e-5 && order >= 2.0 && wirtinger < 1e-5 && gap > 1e-3,
        format!(
            "CR(level 5) {cr5:.1e}, volume error(level 6) {err6:.1e}, order {order:.3}, \
             Wirtinger defect {wirtinger:.1e}, gap on (e1,e2,e4) sphere {gap:.3}"
        ),
    )
}

/// Hausdorff distance between the curve and its radial projection onto the
/// great sphere through the best-fit 3-plane of its vertices, with the
/// associativity of that plane. The projection has the same combinatorics,
/// so both vertex sets sample their surfaces at the same density.
fn nearest_great_sphere(bg: &NKBackground, c: &CurveMesh) -> (f64, f64) {
    let mut m = DMatrix::<f64>::zeros(7, 7);
    for v in &c.vertices {
        for i in 0..7 {
            for j in 0..7 {
                m[(i, j)] += v.point[i] * v.point[j];
            }
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..7).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let basis: [Vec<f64>; 3] =
        std::array::from_fn(|k| eig.eigenvectors.column(order[k]).iter().copied().collect());
    let assoc = associativity_residual(&basis);
    let projected = c.mapped(|x| {
        let mut y = vec![0.0; 7];
        for b in &basis {
            let coeff: f64 = b.iter().zip(x).map(|(u, v)| u * v).sum();
            for (yi, bi) in y.iter_mut().zip(b) {
                *yi += coeff * bi;
            }
        }
        let n = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        y.into_iter().map(|v| v / n).collect()
    });
    (curve_hausdorff(bg, c, &projected).unwrap(), assoc)
}

fn main_theorem() -> Verdict {
    let start = Instant::now();
    let bg = s6_background();
    let sphere = great_sphere_curve(&[1, 2, 3].map(ImOctonion::unit), 3).unwrap();

    let orbit = g2_orbit_family(&bg, &sphere, &G2Path::random(7), 20, 1e-8, 0.5).unwrap();
    let a = volume_drift(&bg, &orbit).unwrap().relative_drift;
    let a_stokes = stokes_check(&bg, &orbit, 1e-5).unwrap();

    let opts = ContinuationOptions {
        steps: 20,
        ..ContinuationOptions::default()
    };
    let drive = Drive::RandomNormal {
        magnitude: 1e-2,
        seed: 11,
    };
    let continued = continue_curve(&bg, &sphere, &drive, &opts).unwrap();
    let b = volume_drift(&bg, &continued).unwrap().relative_drift;
    let b_budget = continued
        .residuals
        .iter()
        .all(|r| *r < opts.residual_budget);
    let moved = curve_hausdorff(&bg, &sphere, continued.curves.last().unwrap()).unwrap();
    let (fit, assoc) = nearest_great_sphere(&bg, continued.curves.last().unwrap());
    let d_stokes = stokes_check(&bg, &continued, 1e-5).unwrap();
    let absurd = Drive::RandomNormal {
        magnitude: 10.0,
        seed: 11,
    };
    let absurd_fails = continue_curve(
        &bg,
        &sphere,
        &absurd,
        &ContinuationOptions {
            max_bisections: 3,
            ..opts.clone()
        },
    )
    .is_err();

    let spec = BackgroundSpec::Torus {
        field: TrigPoly::parse("sin(x5)").unwrap(),
    };
    let torus = spec.build().unwrap();
    let s = 0.25;
    let family = subtorus_path(&torus, [0.0, 0.0, s, 0.0], 8, 128, 1e-8, 0.1).unwrap();
    let c_drift = volume_drift(&torus, &family).unwrap().relative_drift;
    let c_stokes = stokes_check(&torus, &family, 1e-5).unwrap();
    let lhs_oracle = TAU * TAU * ((TAU * s).sin().exp() - 1.0);
    // Composite Simpson on ∫₀¹ d/dt Vol dt with 2·10⁴ panels.
    let panels = 20_000;
    let f = |t: f64| TAU * TAU * (TAU * s * t).sin().exp() * TAU * s * (TAU * s * t).cos();
    let hq = 1.0 / panels as f64;
    let rhs_oracle = hq / 3.0
        * (0..=panels)
            .map(|k| {
                let w = if k == 0 || k == panels {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * f(k as f64 * hq)
            })
            .sum::<f64>();
    let tol = 1e-5 * c_stokes.lhs.abs();
    let c_ok = c_drift > 1e-2
        && c_stokes.residual < tol
        && (c_stokes.lhs - lhs_oracle).abs() < tol
        && (c_stokes.rhs - rhs_oracle).abs() < tol;

    let scale = 1e-5 * a_stokes.volume_scale;
    let d_ok = d_stokes.rhs.abs() < scale && a_stokes.rhs.abs() < scale;
    let elapsed = start.elapsed();
    verdict(
        a < 1e-8
            && b < 1e-4
            && b_budget
            && moved > 1e-3
            && fit < 5e-2
            && absurd_fails
            && c_ok
            && d_ok
            && elapsed < Duration::from_secs(300),
        format!(
            "(a) drift {a:.1e}; (b) drift {b:.1e}, moved {moved:.2e}, nearest great sphere {fit:.1e} \
             (associativity {assoc:.1e}), magnitude 10 fails: {absurd_fails}; (c) drift {c_drift:.3}, \
             Stokes |lhs−rhs|/|lhs| {:.1e}, oracle gaps {:.1e} / {:.1e}; (d) |∫dω| {:.1e} and {:.1e} vs {scale:.1e}; {:.1?}",
            c_stokes.residual / c_stokes.lhs.abs(),
            (c_stokes.lhs - lhs_oracle).abs() / lhs_oracle,
            (c_stokes.rhs - rhs_oracle).abs() / rhs_oracle,
            d_stokes.rhs.abs(),
            a_stokes.rhs.abs(),
            elapsed
        ),
    )
}

fn hausdorff() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sample = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
        let n = rng.random_range(1..10);
        (0..n)
            .map(|_| (0..7).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect()
    };
    let mut axioms = true;
    for _ in 0..1000 {
        let (x, y, z) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
        let d = |a: &[Vec<f64>], b: &[Vec<f64>]| hausdorff_distance(a, b).unwrap();
        axioms &= d(&x, &y) >= 0.0
            && d(&x, &y) == d(&y, &x)
            && d(&x, &x) == 0.0
            && (d(&x, &y) > 0.0 || x.iter().all(|p| y.contains(p)))
            && d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12;
    }
    let bg = s6_background();
    let a = great_sphere_curve(&[1, 2, 3].map(ImOctonion::unit), 3).unwrap();
    let b = great_sphere_curve(&[1, 4, 5].map(ImOctonion::unit), 3).unwrap();
    let lib = curve_hausdorff(&bg, &a, &b).unwrap();
    let dist = |p: &[f64], q: &[f64]| {
        p.iter()
            .zip(q)
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let directed = |x: &CurveMesh, y: &CurveMesh| {
        let mut sup = 0.0f64;
        for p in &x.vertices {
            let mut inf = f64::INFINITY;
            for q in &y.vertices {
                inf = inf.min(dist(&p.point, &q.point));
            }
            sup = sup.max(inf);
        }
        sup
    };
    let brute = directed(&a, &b).max(directed(&b, &a));
    verdict(
        axioms && (lib - brute).abs() < 1e-12,
        format!("axioms on 10³ triples: {axioms}; d_H = {lib:.15} vs brute force {brute:.15}"),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_nkcurves"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .ok()?
        .status
        .code()
}

fn strip_timestamp(text: &str) -> Option<String> {
    let mut v: serde_json::Value = serde_json::from_str(text).ok()?;
    v.as_object_mut()?.remove("timestamp");
    serde_json::to_string(&v).ok()
}

fn reproducibility() -> Verdict {
    let dir = std::env::temp_dir().join(format!("nkcurves-acceptance-{}", std::process::id()));
    let cases: &[&[&str]] = &[
        &["verify-structure", "--background", "s6", "--points", "20"],
        &[
            "verify-structure",
            "--background",
            "torus",
            "--points",
            "20",
        ],
        &["find-nk-metric"],
        &["curve-volume", "--resolution", "3"],
        &["hausdorff", "--resolution", "3"],
        &["family", "--resolution", "2"],
        &[
            "family",
            "--drive",
            "random",
            "--resolution",
            "2",
            "--steps",
            "5",
        ],
        &[
            "stokes-check",
            "--background",
            "torus",
            "--resolution",
            "4",
            "--steps",
            "32",
        ],
    ];
    let mut identical = 0;
    for args in cases {
        let name = args[0];
        let report = dir.join(format!("{name}.json"));
        let table = dir.join(format!("{name}.csv"));
        let first_code = run_cli(&dir, args);
        let first = std::fs::read_to_string(&report).ok();
        let first_table = std::fs::read(&table).ok();
        let saved = dir.join("replayed-config.json");
        if let Some(text) = &first {
            let _ = std::fs::write(&saved, text);
        }
        let second_code = run_cli(&dir, &[name, "--config", saved.to_str().unwrap()]);
        let second = std::fs::read_to_string(&report).ok();
        let same = first.is_some()
            && first_code == second_code
            && first.as_deref().and_then(strip_timestamp)
                == second.as_deref().and_then(strip_timestamp)
            && first_table == std::fs::read(&table).ok();
        identical += same as usize;
        let _ = std::fs::remove_file(&table);
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(
        identical == cases.len(),
        format!(
            "{identical}/{} reports regenerate bit-identically from their embedded config",
            cases.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict, Duration);

fn main() {
    let criteria: [Criterion; 8] = [
        ("octonion identities", octonions, Duration::from_secs(5)),
        ("S⁶ almost Hermitian structure", s6_structure, Duration::MAX),
        (
            "S⁶ type condition and structure equations",
            s6_hypothesis,
            Duration::from_secs(60),
        ),
        ("S³×S³ nearly Kähler metric", s3s3, Duration::from_secs(10)),
        ("discrete curves", curves, Duration::MAX),
        (
            "volume constancy and Stokes identity",
            main_theorem,
            Duration::from_secs(300),
        ),
        ("Hausdorff distance", hausdorff, Duration::MAX),
        ("report reproducibility", reproducibility, Duration::MAX),
    ];
    let mut failures = 0;
    for (k, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let passed = v.passed && elapsed < budget;
        failures += !passed as usize;
        println!(
            "criterion {}: {} {name} ({:.2?}): {}",
            k + 1,
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            v.detail
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
