use mipt_qfi_core::spectral::grid_modes;
use mipt_qfi_core::{
    critical_gamma, critical_mode_coefficient, entanglement_depth, evolve, fbar,
    fit_exponential_rate, fit_power_law, init_state, qfi_quench, witness_qfi, GaussianEvolver,
    InitialState, ModelParams,
};
use mipt_qfi_oracle::{
    evolve_dense, o_gamma_covariance_qfi, qfi_finite_difference, sx_variance_dense, DenseState,
};
use rayon::prelude::*;

use crate::config::*;
use crate::error::CliError;
use crate::report::{Bound, Check, NamedFit, Outcome, Results};

type Res<T> = std::result::Result<T, CliError>;

/// Shortest round-trip text; exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

pub fn run_experiment(config: &ExperimentConfig) -> Res<Outcome> {
    config.validate()?;
    let (header, rows, results) = match config {
        ExperimentConfig::Spectrum(c) => spectrum(c)?,
        ExperimentConfig::WitnessScaling(c) => witness(c)?,
        ExperimentConfig::QuenchSeries(c) => quench(c)?,
        ExperimentConfig::FbarSweep(c) => fbar_sweep(c)?,
        ExperimentConfig::CriticalExponent(c) => critical(c)?,
        ExperimentConfig::OracleCheck(c) => oracle(c)?,
    };
    Ok(Outcome { config: config.clone(), header, rows, results })
}

type Table = (&'static str, Vec<String>, Results);

fn spectrum(c: &SpectrumConfig) -> Res<Table> {
    let p = ModelParams::periodic(c.n_sites, c.h, c.gamma)?;
    let rows = grid_modes(&p)?
        .into_iter()
        .map(|(m, s)| format!("{},{},{}", num(m.k), num(s.energy), num(s.decay)))
        .collect();
    Ok(("k,E,Gamma", rows, Results::default()))
}

fn witness(c: &WitnessConfig) -> Res<Table> {
    let steps = (c.t / c.dt).round() as usize;
    let fs: Vec<f64> = c
        .sizes
        .par_iter()
        .map(|&n| -> Res<f64> {
            let p = ModelParams::open(n, c.h, c.gamma)?;
            let s0 = init_state(n, c.initial)?;
            let s = GaussianEvolver::new(&p, c.dt)?.evolve(&s0, steps)?;
            let f = witness_qfi(&s);
            if !f.is_finite() {
                return Err(CliError::Numerical(format!("witness QFI is not finite at N={n}")));
            }
            Ok(f)
        })
        .collect::<Res<_>>()?;
    let rows = c
        .sizes
        .iter()
        .zip(&fs)
        .map(|(&n, &f)| format!("{n},{},{},{}", num(f), num(f / n as f64), entanglement_depth(f, n)))
        .collect();
    let ns: Vec<f64> = c.sizes.iter().map(|&n| n as f64).collect();
    let fit = fit_power_law(&ns, &fs)?;
    let mut results = Results::default();
    if let Some(eta) = c.expected_exponent {
        results.checks.push(Check::new(
            "eta",
            fit.exponent_or_rate,
            Bound::Within { target: eta, tolerance: c.exponent_tolerance },
        ));
    }
    results.fits.push(NamedFit { name: "eta".into(), fit });
    Ok(("N,F,F_over_N,depth", rows, results))
}

fn quench(c: &QuenchConfig) -> Res<Table> {
    let p = ModelParams::periodic(c.n_sites, c.h, c.gamma)?;
    let ts = c.time_grid();
    let fs: Vec<f64> = ts.par_iter().map(|&t| qfi_quench(&p, t)).collect::<Result<_, _>>()?;
    let rows = ts.iter().zip(&fs).map(|(t, f)| format!("{},{}", num(*t), num(*f))).collect();
    let fit = fit_exponential_rate(&ts, &fs, c.fit_window)?;
    let mut results = Results::default();
    if let Some(r) = c.expected_rate_over_gamma {
        results.checks.push(Check::new(
            "rate_over_gamma",
            fit.exponent_or_rate / c.gamma,
            Bound::Within { target: r, tolerance: c.rate_tolerance * r.abs() },
        ));
    }
    results.fits.push(NamedFit { name: "rate".into(), fit });
    Ok(("t,F", rows, results))
}

fn fbar_sweep(c: &FbarConfig) -> Res<Table> {
    let gc = critical_gamma(c.h)?;
    let gammas = c.gamma_grid(gc);
    let base = ModelParams::periodic(c.n_sites, c.h, 0.0)?;
    let eval = |g: f64| fbar(&base.with_gamma(g));
    let vals: Vec<f64> = gammas.par_iter().map(|&g| eval(g)).collect::<Result<_, _>>()?;
    let rows = gammas.iter().zip(&vals).map(|(g, v)| format!("{},{}", num(*g), num(*v))).collect();

    let mut results = Results::default();
    let peak = (0..vals.len())
        .filter(|&i| vals[i].is_finite())
        .max_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .ok_or_else(|| CliError::Numerical("F-bar sweep produced no finite values".into()))?;
    let nearest = gammas.iter().map(|g| (g - gc).abs()).fold(f64::INFINITY, f64::min);
    results.checks.push(Check::new(
        "peak_distance_to_gamma_c",
        (gammas[peak] - gc).abs(),
        Bound::AtMost { max: nearest * (1.0 + 1e-12) },
    ));
    let lo = eval(gc - c.flank)?;
    let hi = eval(gc + c.flank)?;
    results.checks.push(Check::new(
        "flank_asymmetry",
        (hi - lo).abs() / hi.abs().max(lo.abs()),
        Bound::AtLeast { min: c.min_asymmetry },
    ));
    Ok(("gamma,Fbar", rows, results))
}

fn critical(c: &CriticalConfig) -> Res<Table> {
    let gc = critical_gamma(c.h)?;
    let ds = c.deltas();
    // below in ascending gamma, then above in ascending gamma
    let points: Vec<(f64, &'static str)> = ds
        .iter()
        .rev()
        .map(|d| (gc - d, "below"))
        .chain(ds.iter().map(|d| (gc + d, "above")))
        .collect();
    let vals: Vec<f64> = points
        .par_iter()
        .map(|&(g, _)| critical_mode_coefficient(c.h, g))
        .collect::<Result<_, _>>()?;
    let rows = points
        .iter()
        .zip(&vals)
        .map(|((g, side), v)| format!("{},{},{side}", num(*g), num(*v)))
        .collect();
    let mut results = Results::default();
    for (side, expected) in [("above", c.expected_above), ("below", c.expected_below)] {
        let (xs, ys): (Vec<f64>, Vec<f64>) = points
            .iter()
            .zip(&vals)
            .filter(|((_, s), _)| *s == side)
            .map(|((g, _), v)| ((g - gc).abs(), *v))
            .unzip();
        let fit = fit_power_law(&xs, &ys).map_err(|e| CliError::from(e).context(side))?;
        let name = format!("slope_{side}");
        results.checks.push(Check::new(
            name.clone(),
            fit.exponent_or_rate,
            Bound::Within { target: expected, tolerance: c.slope_tolerance },
        ));
        results.fits.push(NamedFit { name, fit });
    }
    Ok(("gamma,F_kc,side", rows, results))
}

struct Comparison {
    kind: &'static str,
    n: usize,
    h: f64,
    gamma: f64,
    t: f64,
    lhs: f64,
    rhs: f64,
    tol: f64,
}

impl Comparison {
    fn row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.kind,
            self.n,
            num(self.h),
            num(self.gamma),
            num(self.t),
            num(self.lhs),
            num(self.rhs),
            num(rel(self.lhs, self.rhs))
        )
    }

    fn check(&self) -> Check {
        Check::new(
            format!("{} N={} h={} gamma={} t={}", self.kind, self.n, self.h, self.gamma, self.t),
            rel(self.lhs, self.rhs),
            Bound::AtMost { max: self.tol },
        )
    }
}

fn oracle(c: &OracleConfig) -> Res<Table> {
    let mut qpoints = Vec::new();
    for &n in &c.quench_sizes {
        for &h in &c.fields {
            for &g in &c.gammas {
                for &t in &c.times {
                    qpoints.push((n, h, g, t));
                }
            }
        }
    }
    let quench: Vec<Vec<Comparison>> = qpoints
        .par_iter()
        .map(|&(n, h, gamma, t)| -> Res<Vec<Comparison>> {
            let p = ModelParams::periodic(n, h, gamma)?;
            let f = qfi_quench(&p, t)?;
            let fd = qfi_finite_difference(&p, t, c.fd_delta)?;
            let og = o_gamma_covariance_qfi(&p, t)?;
            let mk = |kind, lhs, rhs, tol| Comparison { kind, n, h, gamma, t, lhs, rhs, tol };
            Ok(vec![
                mk("quench-vs-fd", f, fd, c.quench_tolerance),
                mk("quench-vs-sneddon", f, og, c.quench_tolerance),
                mk("fd-vs-sneddon", fd, og, c.oracle_pair_tolerance),
            ])
        })
        .collect::<Res<_>>()?;

    let mut wpoints = Vec::new();
    for &n in &c.witness_sizes {
        for &g in &c.witness_gammas {
            wpoints.push((n, g));
        }
    }
    let witness: Vec<(Vec<Comparison>, f64)> = wpoints
        .par_iter()
        .map(|&(n, gamma)| -> Res<(Vec<Comparison>, f64)> {
            let p = ModelParams::open(n, c.witness_h, gamma)?;
            let mut out = Vec::new();
            let mut parity = 0.0f64;
            let mut s = init_state(n, InitialState::Vacuum)?;
            let mut t_prev = 0.0;
            for &t in &c.witness_times {
                let steps = ((t - t_prev) / c.witness_dt).round() as usize;
                s = evolve(&s, &p, c.witness_dt, steps)?;
                t_prev = t;
                let ed = evolve_dense(&p, t, &DenseState::vacuum(n)?)?;
                parity = parity.max(ed.sx_mean().abs());
                out.push(Comparison {
                    kind: "witness-vs-dense",
                    n,
                    h: c.witness_h,
                    gamma,
                    t,
                    lhs: witness_qfi(&s),
                    rhs: 4.0 * sx_variance_dense(&ed),
                    tol: c.witness_tolerance,
                });
            }
            Ok((out, parity))
        })
        .collect::<Res<_>>()?;

    let mut rows = Vec::new();
    let mut results = Results::default();
    for cmp in quench.iter().flatten().chain(witness.iter().flat_map(|(w, _)| w)) {
        rows.push(cmp.row());
        results.checks.push(cmp.check());
    }
    let parity = witness.iter().map(|(_, p)| *p).fold(0.0, f64::max);
    results.checks.push(Check::new("max |<S_x>| on dense states", parity, Bound::AtMost { max: c.parity_tolerance }));
    Ok(("kind,N,h,gamma,t,lhs,rhs,rel_err", rows, results))
}
