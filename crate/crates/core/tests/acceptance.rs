//! Acceptance criteria 1-8. Each test prints one PASS/FAIL line.
//!
//! Reference values are recomputed here from first principles (direct
//! convolution, closed-form lattice vectors, FFT autocorrelation) instead of
//! being read back from the library.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;
use std::time::Instant;

use gc_vsa::experiments::path_integration::{run_with, PathIntegrationParams, PathIntegrator};
use gc_vsa::experiments::{run_family_tree_analogy, run_scene_experiment, FamilyTree, SceneParams};
use gc_vsa::rotation::{decode_angle, rotate};
use gc_vsa::run::{execute, Experiment, RunConfig};
use gc_vsa::spatial::{
    receptive_field, Lattice, ModuleGeometry, Neuron, Point2D, PositionCodebook, Rect,
};
use gc_vsa::{bundle, GcTensor, GridConfig, PhaseTensor};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

fn report(criterion: u32, title: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion} [{verdict}] {title}: {detail}");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn default_config() -> Arc<GridConfig> {
    GridConfig::default().shared().unwrap()
}

#[test]
fn criterion_1_algebra_properties() {
    let cfg = default_config();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst_roundtrip = 1.0f64;
    let mut worst = [0.0f64; 4];
    for _ in 0..1000 {
        let a = GcTensor::random_symbol(&cfg, &mut rng);
        let b = GcTensor::random_symbol(&cfg, &mut rng);
        let c = GcTensor::random_symbol(&cfg, &mut rng);
        let ab = a.bind(&b).unwrap();
        worst_roundtrip =
            worst_roundtrip.min(ab.unbind(&b).unwrap().cosine_similarity(&a).unwrap());
        worst[0] = worst[0].max(ab.max_abs_diff(&b.bind(&a).unwrap()));
        let left = ab.bind(&c).unwrap();
        let right = a.bind(&b.bind(&c).unwrap()).unwrap();
        worst[1] = worst[1].max(left.max_abs_diff(&right));
        let (wb, wc) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let mix = bundle([&b, &c], Some(&[wb, wc])).unwrap();
        let spread = bundle([&ab, &a.bind(&c).unwrap()], Some(&[wb, wc])).unwrap();
        worst[2] = worst[2].max(a.bind(&mix).unwrap().max_abs_diff(&spread));
        let g = PhaseTensor::random(&cfg, &mut rng);
        let (x, y) = (rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
        let sum = g
            .fractional_power(x)
            .materialize()
            .bind(&g.fractional_power(y).materialize())
            .unwrap();
        worst[3] = worst[3].max(sum.max_abs_diff(&g.fractional_power(x + y).materialize()));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst_roundtrip > 1.0 - 1e-9 && worst.iter().all(|&w| w <= 1e-9) && secs < 10.0;
    report(
        1,
        "algebra properties, 1000 cases",
        pass,
        format!(
            "min round-trip cos {worst_roundtrip:.12}, max deviations commut {:.1e} assoc {:.1e} distrib {:.1e} fpe {:.1e}, {secs:.2}s",
            worst[0], worst[1], worst[2], worst[3]
        ),
    );
}

fn direct_convolution(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = 0.0;
                for p in 0..n {
                    for q in 0..n {
                        for r in 0..n {
                            acc += a[idx(p, q, r)]
                                * b[idx((i + n - p) % n, (j + n - q) % n, (k + n - r) % n)];
                        }
                    }
                }
                out[idx(i, j, k)] = acc;
            }
        }
    }
    out
}

#[test]
fn criterion_2_convolution_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = [3, 3, 4, 5][case % 4];
        let cfg = GridConfig {
            n,
            n_theta: 1,
            n_s: 1,
            ..Default::default()
        }
        .shared()
        .unwrap();
        let len = n * n * n;
        let a: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fast = GcTensor::from_vec(&cfg, a.clone())
            .unwrap()
            .bind(&GcTensor::from_vec(&cfg, b.clone()).unwrap())
            .unwrap();
        let slow = direct_convolution(&a, &b, n);
        for (x, y) in fast.data().iter().zip(&slow) {
            worst = worst.max((x - y).abs());
        }
    }
    report(
        2,
        "FFT bind vs direct 3D circular convolution, 100 modules",
        worst <= 1e-9,
        format!("max abs diff {worst:.2e}"),
    );
}

#[test]
fn criterion_3_path_integration() {
    let cfg = default_config();
    let params = PathIntegrationParams::default();
    let start = Instant::now();
    let pi = PathIntegrator::new(&cfg, params.arena).unwrap();
    let mut mses: Vec<f64> = (0..10u64)
        .map(|seed| run_with(&pi, &params, seed).unwrap().mse)
        .collect();
    let secs = start.elapsed().as_secs_f64();
    mses.sort_by(f64::total_cmp);
    let median = 0.5 * (mses[4] + mses[5]);
    report(
        3,
        "path integration, 10 seeds",
        median <= 0.5 && secs < 60.0,
        format!(
            "median MSE {median:.4} px^2 (range {:.4}..{:.4}), {secs:.1}s",
            mses[0], mses[9]
        ),
    );
}

#[test]
fn criterion_4_scene_resonator() {
    let cfg = default_config();
    let params = SceneParams::default();
    let mut all_correct = 0;
    let mut max_iter = 0;
    let mut traces_ok = true;
    for seed in 0..20u64 {
        let rep = run_scene_experiment(&cfg, &params, seed).unwrap();
        if rep.all_correct() {
            all_correct += 1;
        }
        max_iter = max_iter.max(rep.max_iterations());
        for r in &rep.results {
            let Some(state) = &r.resonator else {
                traces_ok = false;
                continue;
            };
            let mut buf = Vec::new();
            state.write_trace_csv(&mut buf).unwrap();
            let rows = String::from_utf8(buf).unwrap().lines().count() - 1;
            traces_ok &= state.iterations > 0 && rows == state.iterations * (64 + 64 + 4);
        }
    }
    report(
        4,
        "scene query by identity, 20 seeds",
        all_correct >= 18 && max_iter <= 50 && traces_ok,
        format!("{all_correct}/20 runs fully correct, max {max_iter} iterations, traces emitted: {traces_ok}"),
    );
}

#[test]
fn criterion_5_rotation() {
    let alphas = [30.0f64, 90.0, 137.0].map(f64::to_radians);
    let bin = TAU / 23.0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut good = 0;
    let mut worst_pos = 0.0f64;
    let mut worst_ang = 0.0f64;
    let mut case = 0;
    for geom_seed in 0..5u64 {
        let cfg = GridConfig::default().with_seed(geom_seed).shared().unwrap();
        let geom = ModuleGeometry::new(&cfg);
        let book = PositionCodebook::build(&geom, Lattice::new(Rect::centered(10.0), 0.5).unwrap())
            .unwrap();
        for _ in 0..10 {
            let r = rng.random_range(2.0..=8.0);
            let phi = rng.random_range(0.0..TAU);
            let alpha = alphas[case % 3];
            case += 1;
            let (s, c) = phi.sin_cos();
            let p = Point2D::new(r * c, r * s);
            let (sa, ca) = alpha.sin_cos();
            let expected = Point2D::new(ca * p.x - sa * p.y, sa * p.x + ca * p.y);
            let v = geom.encode(p);
            let rotated = rotate(&v, alpha).unwrap();
            let (decoded, _) = book.decode(&rotated).unwrap();
            let pos_err = decoded.distance(expected);
            let ang_err = match decode_angle(&rotated, &v) {
                Ok(a) => {
                    let d = (a - alpha).rem_euclid(TAU);
                    d.min(TAU - d)
                }
                Err(_) => PI,
            };
            worst_pos = worst_pos.max(pos_err);
            worst_ang = worst_ang.max(ang_err);
            if pos_err <= 1.0 && ang_err <= bin {
                good += 1;
            }
        }
    }
    report(
        5,
        "rotation position and angle decode, 50 cases",
        good * 100 >= 95 * 50,
        format!("{good}/50 within tolerance, worst position error {worst_pos:.3} px, worst angle error {worst_ang:.4} rad (bin {bin:.4})"),
    );
}

#[test]
fn criterion_6_family_tree() {
    let cfg = default_config();
    let (a, b) = (FamilyTree::tree_a(), FamilyTree::tree_b());
    let expected = [
        ("Alice", "Fred"),
        ("Bob", "George"),
        ("Charles", "Harry"),
        ("Dora", "Igor"),
        ("Emil", "James"),
    ];
    let mut perfect = 0;
    for seed in 0..20u64 {
        let ok = expected.iter().all(|(probe, want)| {
            run_family_tree_analogy(&cfg, &a, &b, probe, seed)
                .unwrap()
                .answer
                == *want
        });
        perfect += ok as usize;
    }
    report(
        6,
        "family-tree analogy, 5 probes x 20 seeds",
        perfect == 20,
        format!("{perfect}/20 seeds with all probes correct"),
    );
}

/// Mean-removed autocorrelation normalised by overlap, via zero-padded FFT.
fn autocorrelation(values: &[f64], w: usize, h: usize) -> (Vec<f64>, usize, usize) {
    let (pw, ph) = (2 * w, 2 * h);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mut buf = vec![Complex64::default(); pw * ph];
    for y in 0..h {
        for x in 0..w {
            buf[y * pw + x] = Complex64::new(values[y * w + x] - mean, 0.0);
        }
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft2 = |buf: &mut Vec<Complex64>, inverse: bool, planner: &mut FftPlanner<f64>| {
        let row = if inverse {
            planner.plan_fft_inverse(pw)
        } else {
            planner.plan_fft_forward(pw)
        };
        for r in buf.chunks_exact_mut(pw) {
            row.process(r);
        }
        let col = if inverse {
            planner.plan_fft_inverse(ph)
        } else {
            planner.plan_fft_forward(ph)
        };
        let mut tmp = vec![Complex64::default(); ph];
        for x in 0..pw {
            for y in 0..ph {
                tmp[y] = buf[y * pw + x];
            }
            col.process(&mut tmp);
            for y in 0..ph {
                buf[y * pw + x] = tmp[y];
            }
        }
    };
    fft2(&mut buf, false, &mut planner);
    for c in buf.iter_mut() {
        *c = Complex64::new(c.norm_sqr(), 0.0);
    }
    fft2(&mut buf, true, &mut planner);
    let mut out = vec![0.0; pw * ph];
    for y in 0..ph {
        for x in 0..pw {
            let dx = if x >= w {
                x as i64 - pw as i64
            } else {
                x as i64
            };
            let dy = if y >= h {
                y as i64 - ph as i64
            } else {
                y as i64
            };
            let overlap = (w as i64 - dx.abs()) * (h as i64 - dy.abs());
            if overlap > 0 {
                out[y * pw + x] = buf[y * pw + x].re / overlap as f64;
            }
        }
    }
    (out, pw, ph)
}

#[test]
fn criterion_7_receptive_field() {
    let cfg = default_config();
    let geom = ModuleGeometry::new(&cfg);
    let coarsest = cfg.n_s - 1;
    let neuron = Neuron::new(coarsest, 0, 0, 0, 0);
    let size = 128;
    let field = receptive_field(
        neuron,
        &Lattice::new(Rect::arena(size), 1.0).unwrap(),
        &geom,
    )
    .unwrap();
    let (ac, pw, ph) = autocorrelation(field.values(), size, size);
    let at = |dx: i64, dy: i64| {
        ac[(dy.rem_euclid(ph as i64) as usize) * pw + dx.rem_euclid(pw as i64) as usize]
    };

    let span = 40i64;
    let mut peaks = Vec::new();
    for dy in -span..=span {
        for dx in -span..=span {
            if dx * dx + dy * dy < 25 {
                continue;
            }
            let v = at(dx, dy);
            let is_peak = (-1..=1)
                .all(|ey| (-1..=1).all(|ex| (ex == 0 && ey == 0) || v > at(dx + ex, dy + ey)));
            if is_peak {
                // sub-pixel parabolic refinement along each axis
                let refine = |m: f64, c: f64, p: f64| {
                    let den = m - 2.0 * c + p;
                    if den.abs() > 1e-15 {
                        0.5 * (m - p) / den
                    } else {
                        0.0
                    }
                };
                let ox = refine(at(dx - 1, dy), v, at(dx + 1, dy));
                let oy = refine(at(dx, dy - 1), v, at(dx, dy + 1));
                peaks.push((dx as f64 + ox, dy as f64 + oy));
            }
        }
    }
    peaks.sort_by(|a, b| a.0.hypot(a.1).total_cmp(&b.0.hypot(b.1)));
    let six: Vec<f64> = peaks.iter().take(6).map(|p| p.0.hypot(p.1)).collect();
    let mean = six.iter().sum::<f64>() / six.len().max(1) as f64;
    let spread = six.iter().fold(0.0f64, |m, r| m.max((r - mean).abs())) / mean;
    let seventh = peaks.get(6).map_or(f64::INFINITY, |p| p.0.hypot(p.1));
    let expected_spacing = geom.scales()[coarsest] * 2.0 / 3f64.sqrt();

    // lattice periodicity: the neuron's phases advance by whole periods
    // along s * A^-1 e_i rotated back by the module orientation
    let theta = geom.orientation(coarsest, 0);
    let s = geom.scales()[coarsest];
    let root3 = 3f64.sqrt();
    let (st, ct) = theta.sin_cos();
    let unrot = |x: f64, y: f64| Point2D::new(ct * x + st * y, -st * x + ct * y);
    let basis = [unrot(-s / root3, -s), unrot(s / root3, -s)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_period = 0.0f64;
    for _ in 0..500 {
        let p = Point2D::new(rng.random_range(0.0..128.0), rng.random_range(0.0..128.0));
        for b in basis {
            let d = geom.neuron_activation(neuron, p + b) - geom.neuron_activation(neuron, p);
            worst_period = worst_period.max(d.abs());
        }
    }

    let pass = six.len() == 6 && spread <= 0.05 && seventh > mean * 1.05 && worst_period <= 1e-6;
    report(
        7,
        "coarsest receptive field is hexagonal and lattice-periodic",
        pass,
        format!(
            "6 peaks at mean radius {mean:.3} px (expected {expected_spacing:.3}), radial spread {:.2}%, next peak {seventh:.2} px, periodicity error {worst_period:.1e}",
            spread * 100.0
        ),
    );
}

#[test]
fn criterion_8_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let mut identical = true;
    let mut names = Vec::new();
    for experiment in [
        Experiment::PathIntegration,
        Experiment::Scene,
        Experiment::FamilyTree,
        Experiment::Rotate,
    ] {
        let mut cfg = RunConfig {
            experiment,
            seed: 11,
            ..RunConfig::default()
        };
        let mut outputs = Vec::new();
        for run in 0..2 {
            cfg.out = tmp.path().join(format!("{}-{run}", experiment.name()));
            execute(&cfg, 1).unwrap();
            outputs.push(std::fs::read(cfg.out.join("metrics.json")).unwrap());
        }
        // the provenance copy reproduces the run
        let copy = std::fs::read_to_string(cfg.out.join("config.toml")).unwrap();
        let mut again = RunConfig::from_toml_with(&copy, &Default::default()).unwrap();
        again.out = tmp.path().join(format!("{}-copy", experiment.name()));
        execute(&again, 1).unwrap();
        outputs.push(std::fs::read(again.out.join("metrics.json")).unwrap());
        let same = outputs.windows(2).all(|w| w[0] == w[1]);
        identical &= same;
        names.push(format!(
            "{}={}",
            experiment.name(),
            if same { "identical" } else { "differs" }
        ));
    }
    report(
        8,
        "metrics.json byte-identical across runs",
        identical,
        names.join(", "),
    );
}
