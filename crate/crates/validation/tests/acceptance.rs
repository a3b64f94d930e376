//! One PASS/FAIL line per acceptance criterion; exits non-zero if any criterion fails.

use std::path::Path;
use std::time::Instant;

use mipt_qfi_cli::config::{
    CriticalConfig, FbarConfig, OracleConfig, QuenchConfig, WitnessConfig,
};
use mipt_qfi_cli::{execute, run_experiment, Experiment, ExperimentConfig, Outcome, Results};
use mipt_qfi_core::dynamics::evolve_amplitudes;
use mipt_qfi_core::{
    init_state, ising_ground_amplitudes, mode_qfi_coefficients, mode_system, pfaffian,
    qfi_quench, r_matrix, GaussianEvolver, InitialState, ModelParams, RMethod, C64,
};
use mipt_qfi_oracle::{
    evolve_unnormalized, o_gamma_covariance_qfi, qfi_finite_difference, DenseState,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Line {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn run(config: ExperimentConfig) -> Result<Outcome, String> {
    run_experiment(&config).map_err(|e| e.to_string())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISS"
    }
}

fn c1() -> Line {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut passed = true;
    for (gamma, eta, tol) in [(0.75, 1.5, 0.15), (4.5, 1.0, 0.1)] {
        let cfg = WitnessConfig { gamma, expected_exponent: Some(eta), exponent_tolerance: tol, ..Default::default() };
        match single_threaded(|| run(ExperimentConfig::WitnessScaling(cfg))) {
            Ok(o) => {
                let c = o.results.check("eta").unwrap();
                passed &= c.passed;
                parts.push(format!("gamma={gamma}: eta={:.3} (want {eta}+-{tol}) {}", c.value, verdict(c.passed)));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("gamma={gamma}: error {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let fast = secs < 600.0;
    parts.push(format!("{secs:.1}s single-threaded (< 600s) {}", verdict(fast)));
    Line { id: "C1", title: "witness scaling", passed: passed && fast, detail: parts.join("; ") }
}

fn c2() -> Line {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut passed = true;
    for (gamma, tol) in [(2.0, 0.1), (0.2, 0.15)] {
        let cfg = QuenchConfig {
            n_sites: 64,
            h: 0.3,
            gamma,
            expected_rate_over_gamma: Some(2.0),
            rate_tolerance: tol,
            ..Default::default()
        };
        match run(ExperimentConfig::QuenchSeries(cfg)) {
            Ok(o) => {
                let c = o.results.check("rate_over_gamma").unwrap();
                passed &= c.passed;
                parts.push(format!(
                    "gamma={gamma}: rate={:.4} vs 2gamma={} (+-{:.0}%) {}",
                    c.value * gamma,
                    2.0 * gamma,
                    tol * 100.0,
                    verdict(c.passed)
                ));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("gamma={gamma}: error {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let fast = secs < 60.0;
    parts.push(format!("{secs:.1}s (< 60s) {}", verdict(fast)));
    Line { id: "C2", title: "quench growth rate", passed: passed && fast, detail: parts.join("; ") }
}

fn checks_line(id: &'static str, title: &'static str, results: Result<Results, String>, secs: f64, limit: f64) -> Line {
    match results {
        Ok(r) => {
            let mut parts: Vec<String> = r
                .checks
                .iter()
                .map(|c| format!("{}={:.4} {}", c.name, c.value, verdict(c.passed)))
                .collect();
            let fast = secs < limit;
            parts.push(format!("{secs:.1}s (< {limit}s) {}", verdict(fast)));
            Line { id, title, passed: r.failed() == 0 && fast, detail: parts.join("; ") }
        }
        Err(e) => Line { id, title, passed: false, detail: format!("error {e}") },
    }
}

fn c3() -> Line {
    let start = Instant::now();
    let r = run(ExperimentConfig::FbarSweep(FbarConfig::default())).map(|o| o.results);
    checks_line("C3", "F-bar peak and flank asymmetry", r, start.elapsed().as_secs_f64(), 60.0)
}

fn c4() -> Line {
    let start = Instant::now();
    let r = run(ExperimentConfig::CriticalExponent(CriticalConfig::default())).map(|o| o.results);
    checks_line("C4", "critical-mode exponents", r, start.elapsed().as_secs_f64(), 60.0)
}

fn oracle_summary(r: &Results, prefixes: &[&str]) -> (usize, usize, Vec<String>) {
    let mut total = 0;
    let mut failed = 0;
    let mut parts = Vec::new();
    for p in prefixes {
        let sel: Vec<_> = r.checks.iter().filter(|c| c.name.starts_with(p)).collect();
        let worst = sel.iter().map(|c| c.value).fold(0.0, f64::max);
        let bad = sel.iter().filter(|c| !c.passed).count();
        total += sel.len();
        failed += bad;
        parts.push(format!("{p}: {} points, worst {worst:.2e}, {bad} over tolerance", sel.len()));
    }
    (total, failed, parts)
}

fn c5_c6() -> (Line, Line) {
    let start = Instant::now();
    let out = run(ExperimentConfig::OracleCheck(OracleConfig::default()));
    let secs = start.elapsed().as_secs_f64();
    match out {
        Ok(o) => {
            let (n5, f5, mut p5) = oracle_summary(&o.results, &["quench-vs-fd", "quench-vs-sneddon", "fd-vs-sneddon"]);
            let (n6, f6, mut p6) = oracle_summary(&o.results, &["witness-vs-dense", "max |<S_x>|"]);
            p5.push(format!("{secs:.1}s for the whole oracle suite (< 300s)"));
            p6.push(format!("{secs:.1}s for the whole oracle suite (< 300s)"));
            (
                Line { id: "C5", title: "oracle equivalence, quench QFI", passed: n5 == 3 * 81 && f5 == 0 && secs < 300.0, detail: p5.join("; ") },
                Line { id: "C6", title: "oracle equivalence, witness QFI", passed: n6 == 25 && f6 == 0 && secs < 300.0, detail: p6.join("; ") },
            )
        }
        Err(e) => (
            Line { id: "C5", title: "oracle equivalence, quench QFI", passed: false, detail: format!("error {e}") },
            Line { id: "C6", title: "oracle equivalence, witness QFI", passed: false, detail: format!("error {e}") },
        ),
    }
}

fn r_closed_vs_quadrature(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let k = rng.random_range(0.0..std::f64::consts::PI);
        let h = rng.random_range(-1.2..1.2);
        let g = rng.random_range(0.0..6.0);
        let t = rng.random_range(0.05..3.0);
        let p = ModelParams::periodic(4, h, g).unwrap();
        let (m, s) = mode_system(&p, k);
        let a = r_matrix(&m, &s, t, RMethod::ClosedForm).unwrap().matrix();
        let b = r_matrix(&m, &s, t, RMethod::Quadrature).unwrap().matrix();
        worst = worst.max((a - b).max_abs() / b.max_abs().max(1.0));
    }
    (worst <= 1e-8, format!("R closed vs quadrature worst {worst:.1e} (<= 1e-8) {}", verdict(worst <= 1e-8)))
}

fn pfaffian_vs_det(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst = 0.0f64;
    for half in 1..=8 {
        for _ in 0..10 {
            let n = 2 * half;
            let mut m = DMatrix::<C64>::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    m[(i, j)] = z;
                    m[(j, i)] = -z;
                }
            }
            let pf = pfaffian(&m).unwrap();
            let det = m.clone().determinant();
            worst = worst.max((pf * pf - det).norm() / det.norm());
        }
    }
    (worst <= 1e-10, format!("Pf^2 vs det worst {worst:.1e} (<= 1e-10) {}", verdict(worst <= 1e-10)))
}

fn frame_stays_orthonormal() -> (bool, String) {
    let mut worst = 0.0f64;
    for &g in &[0.75, 4.5] {
        let p = ModelParams::open(32, 0.0, g).unwrap();
        let ev = GaussianEvolver::new(&p, 0.05).unwrap();
        let mut s = init_state(32, InitialState::Vacuum).unwrap();
        for i in 0..200 {
            s = ev.step(&s, i).unwrap();
            worst = worst.max(s.orthonormality_defect());
        }
    }
    (worst <= 1e-10, format!("max |U^dag U + V^dag V - I| {worst:.1e} (<= 1e-10) {}", verdict(worst <= 1e-10)))
}

fn zero_time() -> (bool, String) {
    let p = ModelParams::periodic(6, 0.3, 1.0).unwrap();
    let vals = [
        qfi_quench(&ModelParams::periodic(64, 0.3, 2.0).unwrap(), 0.0).unwrap(),
        qfi_finite_difference(&p, 0.0, 1e-5).unwrap(),
        o_gamma_covariance_qfi(&p, 0.0).unwrap(),
    ];
    let ok = vals.iter().all(|&v| v == 0.0);
    (ok, format!("F(t=0) mode/fd/sneddon = {vals:?} {}", verdict(ok)))
}

fn unitary_at_zero_gamma() -> (bool, String) {
    let mut worst = 0.0f64;
    let p = ModelParams::periodic(8, 0.4, 0.0).unwrap();
    let ed = evolve_unnormalized(&p, 6.0, &DenseState::ghz_x(8).unwrap()).unwrap();
    worst = worst.max((ed.norm() - 1.0).abs());
    let amps = ising_ground_amplitudes(&ModelParams::periodic(64, 1.7, 0.0).unwrap()).unwrap();
    let ev = evolve_amplitudes(&amps, &ModelParams::periodic(64, 0.4, 0.0).unwrap(), 6.0).unwrap();
    for m in &ev.modes {
        worst = worst.max((m.norm_sqr() - 1.0).abs());
    }
    let q = ModelParams::open(32, 0.4, 0.0).unwrap();
    let evo = GaussianEvolver::new(&q, 0.05).unwrap();
    let s = init_state(32, InitialState::Vacuum).unwrap();
    let raw = mipt_qfi_core::GaussianState::from_frame(evo.propagate(&s)).unwrap();
    worst = worst.max(raw.orthonormality_defect());
    (worst <= 1e-12, format!("gamma=0 norm drift {worst:.1e} (<= 1e-12) {}", verdict(worst <= 1e-12)))
}

fn decomposition_converges() -> (bool, String) {
    let ts = [2.5, 5.0, 10.0, 20.0];
    let mut ok = true;
    let mut parts = Vec::new();
    for &g in &[4.5, 6.0] {
        let p = ModelParams::periodic(16, 0.3, g).unwrap();
        let dec = mode_qfi_coefficients(&p).unwrap();
        let errs: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let f = qfi_quench(&p, t).unwrap();
                (dec.evaluate(t) - f).abs() / f
            })
            .collect();
        let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
        let small = *errs.last().unwrap() < 1e-2;
        ok &= decreasing && small;
        parts.push(format!(
            "gamma={g}: rel err {} {}",
            errs.iter().map(|e| format!("{e:.1e}")).collect::<Vec<_>>().join(" "),
            verdict(decreasing && small)
        ));
    }
    (ok, format!("decomposition vs F at t={ts:?}: {}", parts.join(", ")))
}

fn c7() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let parts = [
        r_closed_vs_quadrature(&mut rng),
        pfaffian_vs_det(&mut rng),
        frame_stays_orthonormal(),
        zero_time(),
        unitary_at_zero_gamma(),
        decomposition_converges(),
    ];
    Line {
        id: "C7",
        title: "structural invariants",
        passed: parts.iter().all(|(ok, _)| *ok),
        detail: parts.iter().map(|(_, s)| s.as_str()).collect::<Vec<_>>().join("; "),
    }
}

fn files_equal(a: &Path, b: &Path) -> bool {
    std::fs::read(a).ok().zip(std::fs::read(b).ok()).is_some_and(|(x, y)| x == y)
}

fn c8() -> Line {
    let root = tempfile::tempdir().unwrap();
    let mut parts = Vec::new();
    let mut passed = true;
    for e in [
        Experiment::Spectrum,
        Experiment::WitnessScaling,
        Experiment::QuenchSeries,
        Experiment::FbarSweep,
        Experiment::CriticalExponent,
        Experiment::OracleCheck,
    ] {
        let mut written = Vec::new();
        for (run_id, threads) in [(0, 1usize), (1, 4), (2, 4)] {
            let dir = root.path().join(format!("{}-{run_id}", e.name()));
            match execute(e, None, Some(&dir), threads) {
                Ok((_, w)) => written.push(w),
                Err(err) => {
                    parts.push(format!("{}: error {err}", e.name()));
                    passed = false;
                }
            }
        }
        let same = written.len() == 3
            && written.windows(2).all(|w| files_equal(&w[0].csv, &w[1].csv) && files_equal(&w[0].summary, &w[1].summary));
        passed &= same;
        parts.push(format!("{} {}", e.name(), if same { "identical" } else { "DIFFERS" }));
    }
    Line { id: "C8", title: "determinism across reruns and 1/4 threads", passed, detail: parts.join("; ") }
}

fn main() {
    let mut lines = Vec::new();
    let mut report = |l: Line| {
        println!("{} {} {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.id, l.title, l.detail);
        lines.push(l.passed);
    };
    report(c1());
    report(c2());
    report(c3());
    report(c4());
    let (l5, l6) = c5_c6();
    report(l5);
    report(l6);
    report(c7());
    report(c8());
    let passed = lines.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", lines.len());
    if passed != lines.len() {
        std::process::exit(1);
    }
}
