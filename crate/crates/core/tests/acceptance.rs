// Copyright 2026 The gedoublet Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria. Runs every criterion at its stated tolerance, prints
//! one PASS/FAIL line each and exits nonzero if any failed.
//!
//! Run alone with `cargo test -p gedoublet --test acceptance`.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use statrs::function::erf::erf;

use gedoublet::analytic;
use gedoublet::channel::{self, SimulationParams};
use gedoublet::envelope::{average_rabi, EnvelopeKind, EnvelopeSpec, Parity};
use gedoublet::sweep::{self, count_local_maxima, first_crossing, SweepConfig, SweepResult};
use gedoublet::twolevel;
use gedoublet::units::{au_to_ev, ev_to_au};
use gedoublet::validate::{self, Setup, CORE_KINDS};
use gedoublet::EnergyGrid;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn base(kind: EnvelopeKind) -> SimulationParams {
    SimulationParams::helium(EnvelopeSpec::new(kind, 1000.0).unwrap())
}

fn at_area(kind: EnvelopeKind, theta: f64) -> SimulationParams {
    sweep::cell_params(&base(kind), theta, 0.0).unwrap().unwrap()
}

fn default_grid() -> EnergyGrid {
    EnergyGrid::symmetric(ev_to_au(1.0), 801).unwrap()
}

/// Energy window for the population and entropy sweeps.
fn sweep_grid() -> EnergyGrid {
    EnergyGrid::symmetric(ev_to_au(1.5), 1501).unwrap()
}

fn area_axis(step_pi: f64) -> Vec<f64> {
    let n = (10.0 / step_pi).round() as usize;
    (0..=n).map(|k| k as f64 * step_pi * PI).collect()
}

fn axis_pi(r: &SweepResult) -> Vec<f64> {
    r.area_axis.iter().map(|a| a / PI).collect()
}

/// Resonant area sweeps 0..10pi in 0.05pi steps, shared by several criteria.
fn area_sweep(kind: EnvelopeKind) -> &'static SweepResult {
    static CELLS: [OnceLock<SweepResult>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let i = CORE_KINDS.iter().position(|k| *k == kind).expect("core kind");
    CELLS[i].get_or_init(|| sweep::sweep_area(&SweepConfig::new(base(kind), area_axis(0.05), sweep_grid())).unwrap())
}

fn column(r: &SweepResult, d: usize, f: fn(&sweep::CellRecord) -> f64) -> Vec<f64> {
    r.area_row(d).iter().map(f).collect()
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("none".into(), |v| format!("{v:.3}pi"))
}

fn max_finite(v: &[f64]) -> f64 {
    v.iter()
        .copied()
        .filter(|x| x.is_finite())
        .fold(f64::NEG_INFINITY, f64::max)
}

fn norm_closure() -> Outcome {
    let t0 = Instant::now();
    let grid = EnergyGrid::symmetric(ev_to_au(10.0), 4001).unwrap();
    let mut cells = Vec::new();
    for kind in CORE_KINDS {
        for a in [1.0, 4.0, 10.0] {
            for d in [0.0, 0.1] {
                cells.push((kind, a, d));
            }
        }
    }
    let res: Vec<(f64, String)> = cells
        .par_iter()
        .map(|&(kind, a, d)| {
            let p = sweep::cell_params(&base(kind), a * PI, ev_to_au(d)).unwrap().unwrap();
            let amps = channel::final_amplitudes(&p, &grid).unwrap();
            let pops = channel::ion_populations(&amps);
            let r = (amps.survival.powi(2) + pops.p_ion - 1.0).abs();
            (r, format!("{} {a}pi dw={d}", kind.name()))
        })
        .collect();
    let (worst, at) = res
        .iter()
        .cloned()
        .fold((0.0, String::new()), |w, c| if c.0 > w.0 { c } else { w });
    let secs = t0.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-3 && secs <= 120.0,
        format!(
            "max residual {worst:.2e} at {at} over {} cells, {secs:.1}s (limits 1e-3, 120s)",
            res.len()
        ),
    )
}

/// Signed area `theta(t)` in closed form for the four core envelopes.
fn exact_area(p: &SimulationParams, t: f64) -> f64 {
    let om = p.omega0_rabi();
    let tau = p.env.tau();
    let a = 2.0 * std::f64::consts::LN_2 / (tau * tau);
    let gauss_cum = |t: f64| 0.5 * om * (PI / a).sqrt() * (1.0 + erf(a.sqrt() * t));
    let h = 0.5 * tau;
    match p.env.kind() {
        EnvelopeKind::Gaussian => gauss_cum(t),
        EnvelopeKind::ZeroGaussian => {
            if t <= 0.0 {
                gauss_cum(t)
            } else {
                2.0 * gauss_cum(0.0) - gauss_cum(t)
            }
        }
        EnvelopeKind::Flattop => om * (t.clamp(-h, h) + h),
        EnvelopeKind::ZeroFlattop => {
            if t <= 0.0 {
                om * (t.clamp(-h, 0.0) + h)
            } else {
                om * (h - t.min(h))
            }
        }
        k => unreachable!("{k:?}"),
    }
}

fn area_theorem() -> Outcome {
    let mut worst: (f64, &str) = (0.0, "");
    for kind in CORE_KINDS {
        let p = at_area(kind, 10.0 * PI);
        let grid = p.time_grid(&default_grid()).unwrap();
        let traj = twolevel::propagate(&p.twolevel(), &grid).unwrap();
        for (t, a) in traj.times.iter().zip(&traj.a) {
            let r = (a.norm_sqr() - (0.5 * exact_area(&p, *t)).cos().powi(2)).abs();
            if r > worst.0 {
                worst = (r, kind.name());
            }
        }
    }
    outcome(
        worst.0 <= 1e-7,
        format!(
            "max |P_a(t) - cos^2(theta(t)/2)| = {:.2e} ({}), limit 1e-7",
            worst.0, worst.1
        ),
    )
}

fn field_anchors() -> Outcome {
    let p = base(EnvelopeKind::Gaussian);
    let om = au_to_ev(p.omega0_rabi());
    let ratio = average_rabi(&p.env, p.omega0_rabi()).unwrap() / p.omega0_rabi();
    let bar = ratio * om;
    let ok = (om - 0.2).abs() <= 0.05 * 0.2
        && (om - 0.1916).abs() <= 5e-4
        && (ratio - (2.0f64 / 3.0).sqrt()).abs() <= 1e-6
        && (bar - 0.16).abs() <= 0.05 * 0.16;
    outcome(
        ok,
        format!(
            "Omega0 = {om:.5} eV, Omega_bar/Omega0 = {ratio:.8} (sqrt(2/3) = {:.8}), Omega_bar = {bar:.5} eV",
            (2.0f64 / 3.0).sqrt()
        ),
    )
}

fn odd_kinds() -> Vec<EnvelopeKind> {
    EnvelopeKind::ALL
        .into_iter()
        .filter(|k| EnvelopeSpec::new(*k, 1.0).unwrap().symmetry_class().unwrap().parity == Parity::Odd)
        .collect()
}

fn parity_suppression() -> Outcome {
    let s = Setup::helium();
    let mut lines = Vec::new();
    let mut pass = true;
    for a in [4.0, 10.0] {
        let (r, at) = validate::parity_suppression(&s, a).unwrap();
        pass &= r <= 1e-10;
        lines.push(format!("undepleted {a}pi {r:.1e} ({at})"));
    }
    let (r, at) = validate::depleted_parity(&s, 10.0).unwrap();
    pass &= r <= 1e-2;
    lines.push(format!("depleted 10pi total(0)/max {r:.2e} ({at})"));
    let kinds: Vec<&str> = odd_kinds().iter().map(|k| k.name()).collect();
    outcome(pass, format!("{}; envelopes {}", lines.join(", "), kinds.join("/")))
}

fn oracle_equivalence() -> Outcome {
    let s = Setup::helium();
    let (r, at) = validate::oracle_equivalence(&s, &[1.0, 2.0, 4.0, 8.0]).unwrap();
    outcome(
        r <= 1e-3,
        format!("max |num - closed| / max |closed| = {r:.2e} ({at}), |eps| <= 3 Omega0, limit 1e-3"),
    )
}

/// Local maxima of at least half the global maximum.
fn dominant_maxima(v: &[f64]) -> Vec<usize> {
    let m = max_finite(v);
    (1..v.len() - 1)
        .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] >= 0.5 * m)
        .collect()
}

/// Two dominant maxima with a central dip to at most half the peak.
fn resolved(v: &[f64], zero: usize) -> bool {
    dominant_maxima(v).len() >= 2 && v[zero] <= 0.5 * max_finite(v)
}

fn doublet() -> Outcome {
    let grid = default_grid();
    let p = at_area(EnvelopeKind::Gaussian, 10.0 * PI);
    let half_bar = 0.5 * average_rabi(&p.env, p.omega0_rabi()).unwrap();
    let total = channel::spectrum(&channel::final_amplitudes(&p, &grid).unwrap()).total;
    let peaks: Vec<f64> = dominant_maxima(&total).iter().map(|&i| grid.value(i)).collect();
    let located = peaks.len() == 2
        && peaks[0] < 0.0
        && (peaks[0] + half_bar).abs() <= grid.spacing()
        && (peaks[1] - half_bar).abs() <= grid.spacing();

    let axis: Vec<f64> = (20..=70).map(|k| k as f64 * 0.05 * PI).collect();
    let r = sweep::sweep_area(&SweepConfig::new(base(EnvelopeKind::Gaussian), axis, grid)).unwrap();
    let first = |pick: fn(&channel::Spectrum) -> &Vec<f64>| {
        (0..r.area_axis.len())
            .find(|&i| resolved(pick(r.spectrum(0, i).unwrap()), grid.zero_index()))
            .map(|i| r.area_axis[i] / PI)
    };
    let ground = first(|s| &s.alpha_abs2);
    let excited = first(|s| &s.beta_abs2);
    let within = |x: Option<f64>, c: f64| x.is_some_and(|x| (x - c).abs() <= 0.5);
    let peaks_ev: Vec<String> = peaks.iter().map(|e| format!("{:+.4}", au_to_ev(*e))).collect();
    outcome(
        located && within(ground, 2.0) && within(excited, 3.0),
        format!(
            "10pi maxima [{}] eV vs +-{:.4} eV (step {:.4}); ground resolved at {}, excited at {} (targets 2pi, 3pi +-0.5pi)",
            peaks_ev.join(", "),
            au_to_ev(half_bar),
            au_to_ev(grid.spacing()),
            fmt_opt(ground),
            fmt_opt(excited)
        ),
    )
}

fn modulation_counts() -> Outcome {
    let g = area_sweep(EnvelopeKind::Gaussian);
    let z = area_sweep(EnvelopeKind::ZeroGaussian);
    let count = |r: &SweepResult| count_local_maxima(&column(r, 0, |c| c.p_a));
    let ratio_count = |r: &SweepResult| {
        let v: Vec<f64> = r.area_row(0).iter().skip(1).map(|c| c.p_a / c.p_ion).collect();
        count_local_maxima(&v)
    };
    let (ng, nz) = (count(g), count(z));
    outcome(
        (4..=6).contains(&ng) && (2..=3).contains(&nz),
        format!(
            "local maxima of P_a: gaussian {ng} (target 5+-1), zero_gaussian {nz} (target 2-3); of P_a/P_ion: {} and {}",
            ratio_count(g),
            ratio_count(z)
        ),
    )
}

fn overlap_at(kind: EnvelopeKind) -> f64 {
    let amps = channel::final_amplitudes(&at_area(kind, 4.0 * PI), &sweep_grid()).unwrap();
    channel::overlap_metric(&amps).unwrap()
}

fn channel_avoidance() -> Outcome {
    let (o, e) = (
        overlap_at(EnvelopeKind::ZeroGaussian),
        overlap_at(EnvelopeKind::Gaussian),
    );
    let (fo, fe) = (overlap_at(EnvelopeKind::ZeroFlattop), overlap_at(EnvelopeKind::Flattop));
    outcome(
        o / e <= 0.2,
        format!(
            "O(zero_gaussian)/O(gaussian) = {o:.4}/{e:.4} = {:.3} (limit 0.2); flattop pair {fo:.4}/{fe:.4} = {:.3}",
            o / e,
            fo / fe
        ),
    )
}

fn entanglement_delay() -> Outcome {
    let cross = |kind| {
        let r = area_sweep(kind);
        first_crossing(&axis_pi(r), &column(r, 0, |c| c.s_vn), 0.95)
    };
    let (f, zf) = (cross(EnvelopeKind::Flattop), cross(EnvelopeKind::ZeroFlattop));
    let zg = max_finite(&column(area_sweep(EnvelopeKind::ZeroGaussian), 0, |c| c.s_vn));
    let within = |x: Option<f64>, c: f64| x.is_some_and(|x| (x - c).abs() <= 0.25);
    outcome(
        within(f, 2.0) && within(zf, 4.0) && (zg - 0.98).abs() <= 0.02,
        format!(
            "S = 0.95 first at flattop {} (2pi+-0.25pi), zero_flattop {} (4pi+-0.25pi), ratio {}; zero_gaussian peak S {zg:.4} (0.98+-0.02)",
            fmt_opt(f),
            fmt_opt(zf),
            match (f, zf) {
                (Some(a), Some(b)) => format!("{:.3}", b / a),
                _ => "n/a".into(),
            }
        ),
    )
}

fn detuning_trends() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for kind in [EnvelopeKind::Gaussian, EnvelopeKind::ZeroGaussian] {
        let mut cfg = SweepConfig::new(base(kind), area_axis(0.1), sweep_grid());
        cfg.detuning_axis = vec![ev_to_au(0.1), ev_to_au(0.2)];
        cfg.outputs.spectra = false;
        cfg.outputs.channel_spectra = false;
        let detuned = sweep::sweep_detuning(&cfg).unwrap();
        let resonant = area_sweep(kind);
        let mut s10 = vec![column(resonant, 0, |c| c.s_vn).last().copied().unwrap()];
        let mut cross = vec![first_crossing(
            &axis_pi(resonant),
            &column(resonant, 0, |c| c.s_vn),
            0.9,
        )];
        for d in 0..2 {
            let s = column(&detuned, d, |c| c.s_vn);
            s10.push(*s.last().unwrap());
            cross.push(first_crossing(&axis_pi(&detuned), &s, 0.9));
        }
        let s_dec = s10.windows(2).all(|w| w[1] < w[0]);
        let c_dec = cross
            .windows(2)
            .all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b < a));
        pass &= s_dec && c_dec;
        let cs: Vec<String> = cross.iter().map(|c| fmt_opt(*c)).collect();
        parts.push(format!(
            "{}: S(10pi) {:.4}/{:.4}/{:.4} {}, S=0.9 at {} {}",
            kind.name(),
            s10[0],
            s10[1],
            s10[2],
            if s_dec { "decreasing" } else { "not decreasing" },
            cs.join("/"),
            if c_dec { "decreasing" } else { "not decreasing" }
        ));
    }
    outcome(pass, format!("|dw| = 0/0.1/0.2 eV; {}", parts.join("; ")))
}

fn cep_invariance() -> Outcome {
    let s = Setup::helium();
    let mut worst = (0.0, String::new());
    for a in [4.0, 10.0] {
        let (r, at) = validate::cep_invariance(&s, a).unwrap();
        if r >= worst.0 {
            worst = (r, format!("{a}pi {at}"));
        }
    }
    outcome(
        worst.0 <= 1e-12,
        format!(
            "max spectral change over cep 0, pi/4, pi/2 = {:.2e} of max ({}), limit 1e-12",
            worst.0, worst.1
        ),
    )
}

fn zero_crossings(x: &[f64], y: &[f64]) -> Vec<f64> {
    (0..x.len().saturating_sub(1))
        .filter(|&i| y[i] * y[i + 1] < 0.0)
        .map(|i| x[i] - y[i] * (x[i + 1] - x[i]) / (y[i + 1] - y[i]))
        .collect()
}

fn spa_structure() -> Outcome {
    let mut p = at_area(EnvelopeKind::ZeroGaussian, 6.0 * PI);
    p.depletion_enabled = false;
    let grid = default_grid();
    let amps = channel::final_amplitudes(&p, &grid).unwrap();
    let om = p.omega0_rabi();
    let step = grid.spacing();

    let mut xs = Vec::new();
    let (mut num, mut spa) = (Vec::new(), Vec::new());
    let mut worst_eta: (f64, f64) = (0.0, 0.0);
    for i in 0..grid.len() {
        let e = grid.value(i);
        if e.abs() <= step || e.abs() >= 0.5 * om - step {
            continue;
        }
        let Ok(r) = analytic::spa_amplitudes(&p, e) else {
            continue;
        };
        // Both alpha's are purely imaginary; compare alpha / i.
        xs.push(e);
        num.push(amps.alpha[i].im);
        spa.push(r.alpha.im);
        let exact = amps.alpha[i].norm_sqr() + amps.beta[i].norm_sqr();
        if (0.05 * om..=0.4 * om).contains(&e.abs()) {
            let dev = (r.eta * r.eta / exact - 1.0).abs();
            if dev > worst_eta.0 {
                worst_eta = (dev, e);
            }
        }
    }
    // The crossing finder works on each side of eps = 0 separately.
    let split = xs.iter().position(|e| *e > 0.0).unwrap_or(xs.len());
    let mut cn = zero_crossings(&xs[..split], &num[..split]);
    cn.extend(zero_crossings(&xs[split..], &num[split..]));
    let mut cs = zero_crossings(&xs[..split], &spa[..split]);
    cs.extend(zero_crossings(&xs[split..], &spa[split..]));
    let matched = !cs.is_empty() && cs.len() == cn.len() && cs.iter().zip(&cn).all(|(a, b)| (a - b).abs() <= step);
    let show = |v: &[f64]| {
        v.iter()
            .map(|e| format!("{:+.4}", au_to_ev(*e)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    outcome(
        matched && worst_eta.0 <= 0.1,
        format!(
            "alpha zeros: SPA [{}] vs numerical [{}] eV (step {:.4}); max |eta^2/(|alpha|^2+|beta|^2) - 1| = {:.3} at {:.4} eV over 0.05-0.4 Omega0 (limit 0.1)",
            show(&cs),
            show(&cn),
            au_to_ev(step),
            worst_eta.0,
            au_to_ev(worst_eta.1)
        ),
    )
}

fn run_sweep(config: &Path, mode: &str, threads: usize, out: &Path) {
    let status = Command::new(env!("CARGO_BIN_EXE_gedoublet"))
        .args(["sweep", "--config"])
        .arg(config)
        .args(["--mode", mode, "--threads", &threads.to_string(), "--out"])
        .arg(out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "[envelope]\nkind = \"zero_gaussian\"\narea_pi = 1.0\n\
         [grids]\nepsilon_points = 201\n\
         [sweep]\narea_pi_max = 4.0\narea_points = 9\ndetuning_ev_max = 0.2\ndetuning_points = 3\n",
    )
    .unwrap();
    let mut compared = 0;
    let mut differ = Vec::new();
    for mode in ["area", "detuning"] {
        let runs: Vec<_> = [(1, "a"), (4, "b"), (4, "c")]
            .iter()
            .map(|(t, tag)| {
                let out = dir.path().join(format!("{mode}-{tag}"));
                run_sweep(&config, mode, *t, &out);
                out
            })
            .collect();
        for file in ["sweep.csv", "populations.csv"] {
            let reference = std::fs::read(runs[0].join(file)).unwrap();
            for r in &runs[1..] {
                compared += 1;
                if std::fs::read(r.join(file)).unwrap() != reference {
                    differ.push(format!("{mode}/{file}"));
                }
            }
        }
    }
    outcome(
        differ.is_empty(),
        format!(
            "{compared} CSV comparisons across 1 and 4 threads, differing: [{}]",
            differ.join(", ")
        ),
    )
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("norm closure", norm_closure),
        ("area theorem", area_theorem),
        ("field-strength anchors", field_anchors),
        ("parity suppression", parity_suppression),
        ("closed-form equivalence", oracle_equivalence),
        ("doublet anchors", doublet),
        ("modulation counts", modulation_counts),
        ("channel avoidance", channel_avoidance),
        ("entanglement delay", entanglement_delay),
        ("detuning trends", detuning_trends),
        ("cep invariance", cep_invariance),
        ("stationary-phase structure", spa_structure),
        ("determinism", determinism),
    ];
    // A panicking criterion is reported as a failure; keep the default hook
    // from printing a backtrace banner in the middle of the table.
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, (label, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !r.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {:<27} {} ({:.1}s)",
            if r.pass { "PASS" } else { "FAIL" },
            n + 1,
            label,
            r.detail,
            t0.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
