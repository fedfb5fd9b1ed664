use crate::config::{config_error, OracleChoice, RunConfig, SweepConfig};
use crate::error::{CliError, Result};
use crate::exit;
use crate::output::{
    axes_csv, sci, series_csv, series_row, write_file, write_snapshots, Summary, SERIES_HEADER,
};
use crate::plot::{LinePlot, Series};
use blowup_core::dynamics::{
    evolve, fit_time_shape, picard_iterate, PicardConfig, PicardReport, RunResult, RunStatus,
};
use blowup_core::oracles::{oracle_error_run, OracleCase, OracleKind};
use blowup_core::setup::check_blowup_conditions;
use blowup_core::spectral::Snapshot;
use blowup_core::virial::{
    blowup_time, check_identity, comparison_check, fit_c2, riccati_c1, riccati_j, RiccatiParams,
    COMPARISON_TOL,
};
use blowup_core::Error as CoreError;
use rayon::prelude::*;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

macro_rules! say {
    ($log:expr, $($arg:tt)*) => {
        // console output is best-effort
        let _ = writeln!($log, $($arg)*);
    };
}

pub fn status_code(status: RunStatus) -> i32 {
    match status {
        RunStatus::Completed => exit::OK,
        RunStatus::BlowupDetected => exit::BLOWUP,
        RunStatus::DtUnderflow => exit::DT_UNDERFLOW,
        RunStatus::Diverged => exit::INTERNAL,
    }
}

/// Riccati fit and comparison for a finished run.
pub fn riccati_summary(
    run: &RunResult,
    dim: usize,
    kappa: f64,
    fit_fraction: f64,
    summary: &mut Summary,
) -> Result<()> {
    let c1 = riccati_c1(dim, kappa)?;
    summary.num("riccati.c1", c1);
    let Some(first) = run.samples.first() else {
        return Ok(());
    };
    summary.num("I0", first.i);
    let c2 = match fit_c2(&run.samples, c1, fit_fraction) {
        Ok(c2) => c2,
        Err(CoreError::TooFewSnapshots { got, .. }) => {
            summary.push("riccati.c2_hat", format!("unavailable ({got} samples)"));
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    summary.num("riccati.c2_hat", c2);
    let p = RiccatiParams::new(c1, c2, first.i)?;
    summary.num("riccati.margin", p.margin());
    match blowup_time(&p) {
        Ok(t) => summary.num("riccati.t_star", t),
        Err(e) => summary.push("riccati.t_star", format!("none ({e})")),
    }
    let verdict = comparison_check(&run.samples, &p, COMPARISON_TOL)?;
    summary.push("comparison.checked", verdict.checked);
    summary.push("comparison.violations", verdict.violations.len());
    summary.push(
        "comparison.verdict",
        if verdict.passed() { "pass" } else { "fail" },
    );
    if let Some(v) = verdict.first_violation() {
        summary.push(
            "comparison.first_violation",
            format!("t = {}, I = {}, J = {}", sci(v.t), sci(v.i), sci(v.j)),
        );
    }
    Ok(())
}

/// Longest prefix of snapshots with uniform spacing.
fn uniform_prefix(snaps: &[Snapshot]) -> &[Snapshot] {
    if snaps.len() < 3 {
        return snaps;
    }
    let dt = snaps[1].time - snaps[0].time;
    let end = snaps
        .windows(2)
        .position(|w| ((w[1].time - w[0].time) - dt).abs() > 1e-9 * dt.max(w[1].time))
        .map_or(snaps.len(), |k| k + 1);
    &snaps[..end]
}

pub fn run_plots(run: &RunResult) -> Vec<(&'static str, LinePlot)> {
    let pick = |f: fn(&blowup_core::dynamics::TrajectoryRecord) -> f64| -> Vec<(f64, f64)> {
        run.samples.iter().map(|r| (r.t, f(r))).collect()
    };
    vec![
        (
            "I.svg",
            LinePlot::new("virial functional", "t", "I(t)").with(Series::line("I", pick(|r| r.i))),
        ),
        (
            "hs_norm.svg",
            LinePlot::new("Sobolev norm", "t", "||u||_{H^s}")
                .log_y()
                .with(Series::line("hs_norm", pick(|r| r.hs_norm))),
        ),
        (
            "dt.svg",
            LinePlot::new("accepted steps", "t", "dt")
                .log_y()
                .with(Series::scatter("dt", pick(|r| r.dt))),
        ),
    ]
}

pub fn cmd_run(cfg: &RunConfig, out: &Path, log: &mut dyn Write) -> Result<i32> {
    let prep = cfg.prepare()?;
    let run = evolve(&prep.u0, &prep.coeff, &prep.solver)?;

    write_file(&out.join("series.csv"), &series_csv(&run.samples))?;
    write_file(
        &out.join("series_axes.csv"),
        &axes_csv(&run.samples, cfg.dim),
    )?;
    write_snapshots(&out.join("snapshots"), &run.snapshots)?;
    for (name, plot) in run_plots(&run) {
        write_file(&out.join("plots").join(name), &plot.to_svg())?;
    }

    let mut summary = Summary::default();
    summary.push("status", run.status);
    summary.push(
        "reason",
        run.reason.map_or("none".to_string(), |r| r.to_string()),
    );
    summary.num("t_final", run.t_final);
    if run.status == RunStatus::BlowupDetected {
        summary.num("t_detect", run.t_final);
    } else {
        summary.push("t_detect", "none");
    }
    summary.push("steps", run.steps());
    summary.num("dt_smallest", run.dt_smallest);
    summary.push("seed", cfg.seed);
    riccati_summary(&run, cfg.dim, cfg.kappa, cfg.fit_fraction, &mut summary)?;
    let snaps = uniform_prefix(&run.snapshots);
    if snaps.len() >= 3 {
        let r = check_identity(snaps, &prep.coeff, &prep.weight, prep.solver.dealias)?;
        summary.num("identity.residual", r);
    }
    let text = summary.render();
    write_file(&out.join("summary.txt"), &text)?;
    say!(log, "{}", text.trim_end());
    Ok(status_code(run.status))
}

pub fn cmd_check(cfg: &RunConfig, log: &mut dyn Write) -> Result<i32> {
    let prep = cfg.prepare()?;
    let report = check_blowup_conditions(
        &prep.u0,
        prep.coeff.field(),
        &prep.weight,
        prep.solver.sobolev_index,
        cfg.frak_c,
        cfg.m_star,
    )?;
    say!(log, "{report}");
    Ok(if report.all_hold() {
        exit::OK
    } else {
        exit::CONDITIONS_FAIL
    })
}

/// At least four successive differences shrink.
pub fn decays_geometrically(report: &PicardReport) -> bool {
    let r = report.ratios();
    r.len() >= 4 && r[..4].iter().all(|&q| q < 1.0)
}

pub fn cmd_picard(cfg: &RunConfig, out: &Path, log: &mut dyn Write) -> Result<i32> {
    let prep = cfg.prepare()?;
    let mut csv = String::from("T,iterate,sup_difference,ratio\n");
    let mut summary = Summary::default();
    let mut pass = true;
    let mut reports = Vec::new();
    for &horizon in &cfg.picard.horizons {
        let pc = PicardConfig {
            horizon,
            slices: cfg.picard.slices,
            iterations: cfg.picard.iterations,
            sobolev_index: prep.solver.sobolev_index,
            dealias: prep.solver.dealias,
        };
        let r = picard_iterate(&prep.u0, prep.coeff.field(), &pc)?;
        let ratios = r.ratios();
        say!(
            log,
            "T = {horizon}: smallness = {:.6e}, contraction = {:.6e}",
            r.smallness,
            r.contraction_factor
        );
        say!(log, "  m  sup_difference           ratio");
        for (m, d) in r.sup_differences.iter().enumerate() {
            let q = if m == 0 { f64::NAN } else { ratios[m - 1] };
            csv.push_str(&format!("{},{m},{},{}\n", sci(horizon), sci(*d), sci(q)));
            say!(log, "  {m:<2} {d:<24.16e} {q:.6e}");
        }
        let key = |k: &str| format!("T[{horizon}].{k}");
        summary.num(&key("smallness"), r.smallness);
        summary.num(&key("c1_hat"), r.c1_hat);
        summary.num(&key("cb_hat"), r.cb_hat);
        summary.num(&key("kernel_gain"), r.kernel_gain);
        summary.num(&key("algebra_hat"), r.algebra_hat);
        summary.num(&key("bilinear_ratio"), r.bilinear_ratio);
        summary.num(&key("contraction_factor"), r.contraction_factor);
        let verdict = if r.smallness >= 1.0 {
            say!(
                log,
                "  warning: smallness {:.3} >= 1, contraction not asserted",
                r.smallness
            );
            "not asserted (smallness >= 1)"
        } else if !r.diverged && decays_geometrically(&r) {
            "geometric decay"
        } else {
            pass = false;
            "FAIL: no geometric decay"
        };
        summary.push(&key("verdict"), verdict);
        reports.push(r);
    }
    if reports.len() >= 3 {
        let ts: Vec<f64> = reports.iter().map(|r| r.horizon).collect();
        let cb: Vec<f64> = reports.iter().map(|r| r.cb_hat).collect();
        let fit = fit_time_shape(&ts, &cb)?;
        summary.num("cb_shape.alpha", fit.alpha);
        summary.num("cb_shape.beta", fit.beta);
        summary.num("cb_shape.r_squared", fit.r_squared);
        if fit.r_squared <= 0.99 {
            pass = false;
        }
        say!(
            log,
            "CB_hat ~ {:.4e} T + {:.4e} sqrt(T), R^2 = {:.6}",
            fit.alpha,
            fit.beta,
            fit.r_squared
        );
    }
    write_file(&out.join("picard.csv"), &csv)?;
    write_file(&out.join("picard_summary.txt"), &summary.render())?;
    Ok(if pass { exit::OK } else { exit::PROPERTY_FAIL })
}

pub fn cmd_oracle(cfg: &RunConfig, out: &Path, log: &mut dyn Write) -> Result<i32> {
    let mut prep = cfg.prepare()?;
    let kind = match cfg.oracle.kind {
        OracleChoice::ColeHopf => OracleKind::ColeHopf,
        OracleChoice::HeatMode => OracleKind::HeatMode,
    };
    let spec = cfg.coefficient_spec()?;
    let case =
        OracleCase::new(kind, prep.u0.clone(), &spec, cfg.oracle.horizon).map_err(|e| match e {
            CoreError::OracleMismatch(_) => CliError::config("oracle.kind", e.to_string()),
            CoreError::NotSingleMode => CliError::config("initial.family", e.to_string()),
            CoreError::ExpOverflow(_) => CliError::config("initial.A", e.to_string()),
            other => config_error(other),
        })?;
    prep.solver.diagnostics.snapshot_interval = Some(cfg.oracle.interval);
    let run = evolve(&prep.u0, &prep.coeff, &prep.solver)?;
    let report = oracle_error_run(&case, &run, prep.solver.sobolev_index)?;

    let mut csv = format!("{SERIES_HEADER},err_linf,err_hs\n");
    for e in &report.samples {
        if let Some(r) = run.samples.iter().find(|r| r.t == e.t) {
            csv.push_str(&format!(
                "{},{},{}\n",
                series_row(r),
                sci(e.linf),
                sci(e.hs)
            ));
        }
    }
    write_file(&out.join("oracle.csv"), &csv)?;
    write_file(&out.join("series.csv"), &series_csv(&run.samples))?;

    let within = report.max_linf <= cfg.oracle.tol;
    let completed = run.status == RunStatus::Completed;
    let mut summary = Summary::default();
    summary.push("oracle", format!("{kind:?}"));
    summary.push("status", run.status);
    summary.num("horizon", cfg.oracle.horizon);
    summary.num("max_err_linf", report.max_linf);
    summary.num("max_err_hs", report.max_hs);
    summary.num("tol", cfg.oracle.tol);
    summary.push("verdict", if within && completed { "pass" } else { "fail" });
    let text = summary.render();
    write_file(&out.join("summary.txt"), &text)?;
    say!(log, "{}", text.trim_end());
    Ok(if within && completed {
        exit::OK
    } else {
        exit::PROPERTY_FAIL
    })
}

pub fn cmd_riccati(c1: f64, c2: f64, i0: f64, times: &[f64], log: &mut dyn Write) -> Result<i32> {
    let p =
        RiccatiParams::new(c1, c2, i0).map_err(|e| CliError::config("riccati", e.to_string()))?;
    let t_star = match blowup_time(&p) {
        Ok(t) => t,
        Err(e @ CoreError::RiccatiDomain { .. }) => {
            say!(log, "{e}");
            return Ok(exit::RICCATI_DOMAIN);
        }
        Err(e) => return Err(e.into()),
    };
    say!(log, "t* = {}", sci(t_star));
    for &t in times {
        match riccati_j(&p, t) {
            Ok(j) => {
                say!(log, "J({t}) = {}", sci(j));
            }
            Err(e) => {
                say!(log, "J({t}) undefined: {e}");
            }
        }
    }
    Ok(exit::OK)
}

/// One line of the sweep matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub status: RunStatus,
    pub t_detect: Option<f64>,
    pub max_i: f64,
    pub max_hs: f64,
}

fn sweep_one(cfg: &RunConfig) -> Result<SweepRow> {
    let prep = cfg.prepare()?;
    let run = evolve(&prep.u0, &prep.coeff, &prep.solver)?;
    Ok(SweepRow {
        value: f64::NAN,
        status: run.status,
        t_detect: (run.status == RunStatus::BlowupDetected).then_some(run.t_final),
        max_i: run
            .samples
            .iter()
            .map(|r| r.i)
            .fold(f64::NEG_INFINITY, f64::max),
        max_hs: run.samples.iter().map(|r| r.hs_norm).fold(0.0, f64::max),
    })
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Runs every value on a worker pool; rows come back in value order.
pub fn sweep_rows(sweep: &SweepConfig) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(sweep.workers)
        .build()
        .map_err(|e| CliError::config("sweep.workers", e.to_string()))?;
    let results: Vec<std::result::Result<Result<SweepRow>, String>> = pool.install(|| {
        sweep
            .runs
            .par_iter()
            .map(|cfg| catch_unwind(AssertUnwindSafe(|| sweep_one(cfg))).map_err(panic_message))
            .collect()
    });
    results
        .into_iter()
        .zip(&sweep.values)
        .map(|(r, &value)| match r {
            Ok(Ok(row)) => Ok(SweepRow { value, ..row }),
            Ok(Err(e)) => Err(e),
            Err(message) => Err(CliError::WorkerPanic {
                param: sweep.param.name().to_string(),
                value,
                message,
            }),
        })
        .collect()
}

pub fn sweep_csv(param: &str, rows: &[SweepRow]) -> String {
    let mut out = format!("{param},status,t_detect,max_I,max_hs_norm\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sci(r.value),
            r.status,
            sci(r.t_detect.unwrap_or(f64::NAN)),
            sci(r.max_i),
            sci(r.max_hs)
        ));
    }
    out
}

pub fn cmd_sweep(sweep: &SweepConfig, out: &Path, log: &mut dyn Write) -> Result<i32> {
    let rows = sweep_rows(sweep)?;
    let name = sweep.param.name();
    write_file(&out.join("sweep.csv"), &sweep_csv(name, &rows))?;
    let points = |s: RunStatus| -> Vec<(f64, f64)> {
        rows.iter()
            .filter(|r| r.status == s)
            .map(|r| (r.value, r.max_hs))
            .collect()
    };
    let mut plot = LinePlot::new("regime map", name, "max ||u||_{H^s}").log_y();
    for s in [
        RunStatus::Completed,
        RunStatus::BlowupDetected,
        RunStatus::DtUnderflow,
        RunStatus::Diverged,
    ] {
        let p = points(s);
        if !p.is_empty() {
            plot = plot.with(Series::scatter(s.to_string(), p));
        }
    }
    write_file(&out.join("regime.svg"), &plot.to_svg())?;
    for r in &rows {
        say!(log, "{name} = {:<12} {}", r.value, r.status);
    }
    Ok(exit::OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riccati_codes() {
        let mut buf = Vec::new();
        assert_eq!(
            cmd_riccati(1.0, 1.0, 2.0, &[0.1], &mut buf).unwrap(),
            exit::OK
        );
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("t* = 5.49306144334054"), "{text}");
        let mut buf = Vec::new();
        assert_eq!(
            cmd_riccati(1.0, 1.0, 1.0, &[], &mut buf).unwrap(),
            exit::RICCATI_DOMAIN
        );
        assert!(String::from_utf8(buf)
            .unwrap()
            .contains("I(0)√c1 − √c2 must be positive"));
        assert!(cmd_riccati(-1.0, 1.0, 1.0, &[], &mut Vec::new()).is_err());
    }

    #[test]
    fn uniform_prefix_drops_ragged_tail() {
        let g = blowup_core::spectral::GridSpec::new(1, 8, 1.0).unwrap();
        let f = blowup_core::spectral::ScalarField::zeros(g);
        let snaps: Vec<Snapshot> = [0.0, 0.1, 0.2, 0.3, 0.35]
            .iter()
            .map(|&t| Snapshot::new("u", t, f.clone()))
            .collect();
        assert_eq!(uniform_prefix(&snaps).len(), 4);
    }
}
