//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if
//! any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_8, PI};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cvgauss::criteria::{analytic_pt_spectrum, negativity_p13, tripartite_bound_suite};
use cvgauss::factory::{Coupling, FourModeLinearParams, FourModeSquareParams, StateSpec, TripartiteParams};
use cvgauss::gaussian::{enumerate_bipartitions, partial_transpose, ppt_report, symplectic_spectrum, DEFAULT_PPT_TOL};
use cvgauss::oracle::crosscheck;
use cvgauss::{DoubleDouble, Family};
use cvgauss_cli::sweep::{self, SweepSpec};
use cvgauss_cli::Evaluator;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn FnOnce() -> Outcome>);

fn open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect()
}

fn closed_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    closed_grid(lo.log10(), hi.log10(), n).into_iter().map(|e| 10f64.powf(e)).collect()
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let t0 = Instant::now();
    let out = f();
    let dt = t0.elapsed();
    match (out, limit) {
        (Ok(msg), Some(l)) if dt > l => Err(format!("{msg}; took {dt:.2?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg}; {dt:.2?}")),
        (Err(msg), _) => Err(format!("{msg}; {dt:.2?}")),
    }
}

fn random_phase(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-PI..PI)
}

fn random_spec(rng: &mut ChaCha8Rng, k: usize) -> StateSpec {
    let x = 10f64.powf(rng.random_range(-1.0..1.0));
    let gz = rng.random_range(0.0..3.0);
    let c = 1.0 / (1.0 + x * x).sqrt();
    let (g1, g2) = (Coupling::from_polar(c, random_phase(rng)), Coupling::from_polar(c * x, random_phase(rng)));
    match k % 3 {
        0 => StateSpec::Tri(TripartiteParams::new(g1, g2, gz).unwrap()),
        1 => StateSpec::Lin4(FourModeLinearParams::new(g1, g2, gz).unwrap()),
        _ => {
            let phi = rng.random_range(0.0..FRAC_PI_2);
            StateSpec::Sq4(FourModeSquareParams::new(1.0, phi, rng.random_range(0.0..2.0)).unwrap())
        }
    }
}

fn purity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut worst = 0.0f64;
    for k in 0..510 {
        let spec = random_spec(&mut rng, k);
        let st = spec.build::<DoubleDouble>().map_err(|e| format!("{spec:?}: {e}"))?;
        let report = st.covariance.validate().map_err(|e| e.to_string())?;
        if !report.physical {
            return Err(format!("{spec:?} fails validation: {report:?}"));
        }
        let nu = symplectic_spectrum(st.covariance.matrix()).map_err(|e| e.to_string())?;
        let dev = nu.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        worst = worst.max(dev);
        if !(dev < 1e-9) {
            return Err(format!("{spec:?}: symplectic eigenvalues deviate from 1 by {dev:e}"));
        }
    }
    Ok(format!("510 points physical, max |ν−1| = {worst:.2e}"))
}

fn oracle_equivalence() -> Outcome {
    let mut specs = Vec::new();
    for theta in [0.0, FRAC_PI_8, 2.0 * FRAC_PI_8, 3.0 * FRAC_PI_8] {
        for gz in [0.5, 1.0, 2.0] {
            specs.push(StateSpec::Tri(TripartiteParams::from_theta(theta, gz).unwrap()));
        }
    }
    for x in [0.5, 1.0, 2.0] {
        for gz in [0.5, 1.0] {
            specs.push(StateSpec::Lin4(FourModeLinearParams::from_ratio(x, gz).unwrap()));
        }
    }
    for phi in [0.0, FRAC_PI_3, FRAC_PI_2] {
        for gz in [0.5, 1.0] {
            specs.push(StateSpec::Sq4(FourModeSquareParams::new(1.0, phi, gz).unwrap()));
        }
    }
    let mut worst = 0.0f64;
    for spec in &specs {
        let dev = crosscheck(spec).map_err(|e| e.to_string())?;
        worst = worst.max(dev);
        if !(dev < 1e-8) {
            return Err(format!("{spec:?}: oracle deviation {dev:e}"));
        }
    }
    Ok(format!("{} grid points, max deviation {worst:.2e}", specs.len()))
}

fn spectra_agree(specs: impl IntoIterator<Item = StateSpec>, tol: f64) -> Result<(usize, f64), String> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for spec in specs {
        let v = spec.build::<DoubleDouble>().map_err(|e| e.to_string())?.covariance;
        for a in spec.family().partitions() {
            let pt = partial_transpose(&v, &a).map_err(|e| e.to_string())?;
            let numeric = symplectic_spectrum(&pt).map_err(|e| e.to_string())?;
            let analytic = analytic_pt_spectrum(&spec, &a).map_err(|e| e.to_string())?;
            let dev = numeric.max_deviation(&analytic);
            worst = worst.max(dev);
            count += 1;
            if !(dev < tol) {
                let label = spec.family().partition_label(&a);
                return Err(format!("{spec:?} partition {label}: deviation {dev:e}"));
            }
        }
    }
    Ok((count, worst))
}

fn table_tripartite() -> Outcome {
    let specs = open_grid(0.0, FRAC_PI_2, 20).into_iter().flat_map(|theta| {
        open_grid(0.0, 3.0, 20)
            .into_iter()
            .map(move |gz| StateSpec::Tri(TripartiteParams::from_theta(theta, gz).unwrap()))
    });
    let (n, worst) = spectra_agree(specs, 1e-9)?;
    Ok(format!("{n} spectra, max deviation {worst:.2e}"))
}

fn table_linear() -> Outcome {
    let specs = log_grid(0.1, 10.0, 20).into_iter().flat_map(|x| {
        open_grid(0.0, 3.0, 20)
            .into_iter()
            .map(move |gz| StateSpec::Lin4(FourModeLinearParams::from_ratio(x, gz).unwrap()))
    });
    let (n, worst) = spectra_agree(specs, 1e-9)?;
    Ok(format!("{n} spectra, max deviation {worst:.2e}"))
}

fn table_square() -> Outcome {
    let specs = closed_grid(0.0, FRAC_PI_2, 20).into_iter().flat_map(|phi| {
        (1..=20).map(move |k| StateSpec::Sq4(FourModeSquareParams::new(1.0, phi, 0.1 * k as f64).unwrap()))
    });
    let (n, worst) = spectra_agree(specs, 1e-9)?;
    let p12 = Family::Sq4.parse_partition("{1,2}").unwrap();
    let mut flat = 0.0f64;
    for k in 1..=20 {
        let spec = StateSpec::Sq4(FourModeSquareParams::new(1.0, FRAC_PI_2, 0.1 * k as f64).unwrap());
        let v = spec.build::<DoubleDouble>().unwrap().covariance;
        let s = symplectic_spectrum(&partial_transpose(&v, &p12).unwrap()).unwrap();
        flat = s.values().iter().map(|x| (x - 1.0).abs()).fold(flat, f64::max);
    }
    if !(flat < 1e-9) {
        return Err(format!("{{1,2}} spectrum at φ₋ = π/2 deviates from 1 by {flat:e}"));
    }
    Ok(format!("{n} spectra, max deviation {worst:.2e}; {{1,2}} at π/2 within {flat:.1e} of 1"))
}

fn thresholds() -> Outcome {
    let ys = closed_grid(0.0, 3.0, 400);
    let cell = ys[1] - ys[0];
    let mut worst = 0.0f64;
    for x in [0.1, 0.3, 0.5, 1.0, 2.0, 3.0, 10.0] {
        let suites: Vec<_> = ys
            .iter()
            .map(|&gz| tripartite_bound_suite(&TripartiteParams::from_ratio(x, gz).unwrap()).unwrap())
            .collect();
        for (mode, expect) in [(1, 0.5 * (1.0 + x * x).ln()), (2, 0.5 * (1.0 + 1.0 / (x * x)).ln())] {
            let onset = suites
                .iter()
                .zip(&ys)
                .find(|(s, _)| s.partitions[mode].violated)
                .map(|(_, &gz)| gz)
                .ok_or_else(|| format!("x={x}: mode {mode} never violated"))?;
            // the scan must also stay violated past the onset
            let stays = suites.iter().zip(&ys).filter(|(_, &gz)| gz >= onset).all(|(s, _)| s.partitions[mode].violated);
            let err = (onset - expect).abs();
            worst = worst.max(err / cell);
            if err > cell || !stays {
                return Err(format!("x={x} mode {mode}: onset {onset}, expected {expect}"));
            }
        }
    }
    Ok(format!("7 ratios × 2 modes, worst onset offset {worst:.2} cells"))
}

fn golden_ratio_and_gain() -> Outcome {
    let p = FourModeLinearParams::from_ratio(1.0, 1.0).unwrap();
    let phi2 = ((1.0 + 5f64.sqrt()) / 2.0).powi(2);
    let ratio = p.lambda_s() / p.lambda_d();
    if !((ratio - phi2).abs() < 1e-12) {
        return Err(format!("Λ_S/Λ_D = {ratio}, Φ² = {phi2}"));
    }
    let gain = |lx: f64| {
        let p = FourModeLinearParams::from_ratio(10f64.powf(lx), 1.0).unwrap();
        p.lambda_s() / p.g_bar()
    };
    // golden-section search on log₁₀ x ∈ [−1, 1]
    let inv = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (-1.0f64, 1.0f64);
    let mut c = b - inv * (b - a);
    let mut d = a + inv * (b - a);
    while b - a > 1e-12 {
        if gain(c) > gain(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv * (b - a);
        d = a + inv * (b - a);
    }
    let lx = 0.5 * (a + b);
    let (x, g) = (10f64.powf(lx), gain(lx));
    let target = 2.0 / 3f64.sqrt();
    if !((g - target).abs() < 1e-9 && (x - 2f64.sqrt()).abs() < 1e-6) {
        return Err(format!("max Λ_S/ḡ = {g} at x = {x}"));
    }
    Ok(format!(
        "|Λ_S/Λ_D − Φ²| = {:.1e}; max Λ_S/ḡ = {g:.12} at x = {x:.9}",
        (ratio - phi2).abs()
    ))
}

fn negativity_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let a = Family::Lin4.parse_partition("{1,3}").unwrap();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let g1 = Coupling::from_polar(rng.random_range(0.0..2.0), random_phase(&mut rng));
        let g2 = Coupling::from_polar(rng.random_range(0.05..2.0), random_phase(&mut rng));
        let p = FourModeLinearParams::new(g1, g2, rng.random_range(0.0..1.5)).unwrap();
        let v = StateSpec::Lin4(p).build::<DoubleDouble>().unwrap().covariance;
        let r = ppt_report(&v, &a, DEFAULT_PPT_TOL).unwrap();
        let en = -r.sub_unity.iter().map(|x| x.log2()).sum::<f64>();
        let dev = (en - negativity_p13(&p)).abs();
        worst = worst.max(dev);
        if !(dev < 1e-9) {
            return Err(format!("{p:?}: {en} vs {}", negativity_p13(&p)));
        }
    }
    Ok(format!("100 random points, max deviation {worst:.2e}"))
}

fn sufficiency() -> Outcome {
    let eval = Evaluator::default();
    let mut flagged = 0;
    let mut converse = 0;
    let mut rows_total = 0;
    for family in [Family::Tri, Family::Lin4] {
        let rows = sweep::run(&SweepSpec::new(family), &eval).map_err(|e| e.to_string())?;
        rows_total += rows.len();
        for row in &rows {
            let r = &row.result;
            let violated = r.bound.as_ref().is_some_and(|b| b.violated);
            if violated {
                flagged += 1;
                if !r.entangled {
                    let label = family.partition_label(&r.partition);
                    return Err(format!("{family} x={} y={} {label}: bound violated but PPT silent", row.x, row.y));
                }
            } else if r.entangled {
                converse += 1;
            }
        }
    }
    let p = TripartiteParams::from_ratio(10.0, 0.5).unwrap();
    let suite = tripartite_bound_suite(&p).map_err(|e| e.to_string())?;
    let v = StateSpec::Tri(p).build::<DoubleDouble>().unwrap().covariance;
    let ppt = ppt_report(&v, &Family::Tri.parse_partition("{1}").unwrap(), DEFAULT_PPT_TOL).unwrap();
    if suite.partitions[1].violated || !ppt.entangled() {
        return Err("tri x=10, ḡz=0.5 is not a converse counterexample".into());
    }
    if converse == 0 {
        return Err("converse never fails on the grids".into());
    }
    Ok(format!(
        "{rows_total} rows: {flagged} bound-flagged all PPT-entangled; {converse} PPT-only; tri x=10 ḡz=0.5 mode 1 PPT-only"
    ))
}

fn bipartitions() -> Outcome {
    for n in 2..=10 {
        let got = enumerate_bipartitions(n).map_err(|e| e.to_string())?.len();
        if got != (1 << (n - 1)) - 1 {
            return Err(format!("N={n}: {got}"));
        }
    }
    if Family::Tri.partitions().len() != 3 || Family::Lin4.partitions().len() != 7 {
        return Err("family partition counts".into());
    }
    Ok("N=3 → 3, N=4 → 7, 2^(N−1)−1 up to N=10".into())
}

fn main() {
    let five = Some(Duration::from_secs(5));
    let criteria: Vec<Criterion> = vec![
        ("purity", Box::new(move || timed(five, purity))),
        ("oracle-equivalence", Box::new(move || timed(five, oracle_equivalence))),
        ("tripartite-spectra", Box::new(|| timed(None, table_tripartite))),
        ("linear-spectra", Box::new(|| timed(None, table_linear))),
        ("square-spectra", Box::new(|| timed(None, table_square))),
        ("thresholds", Box::new(|| timed(None, thresholds))),
        ("golden-ratio-gain", Box::new(|| timed(None, golden_ratio_and_gain))),
        ("negativity", Box::new(|| timed(None, negativity_identity))),
        ("sufficiency", Box::new(|| timed(None, sufficiency))),
        ("bipartitions", Box::new(|| timed(None, bipartitions))),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.into_iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
