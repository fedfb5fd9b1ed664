//! CSV series, summaries and snapshot files.

use crate::error::{CliError, Result};
use blowup_core::dynamics::TrajectoryRecord;
use blowup_core::spectral::Snapshot;
use std::fmt::Write as _;
use std::path::Path;

pub const SERIES_HEADER: &str = "t,I,hs_norm,grad_sup,dt,tail_mass,A,B,I2,I3";

/// 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn series_row(r: &TrajectoryRecord) -> String {
    let (a, b, i2, i3) = r
        .terms
        .as_ref()
        .map_or((f64::NAN, f64::NAN, f64::NAN, f64::NAN), |t| {
            (t.a, t.b, t.i2, t.i3)
        });
    [
        r.t,
        r.i,
        r.hs_norm,
        r.grad_sup,
        r.dt,
        r.tail_mass,
        a,
        b,
        i2,
        i3,
    ]
    .iter()
    .map(|&v| sci(v))
    .collect::<Vec<_>>()
    .join(",")
}

pub fn series_csv(samples: &[TrajectoryRecord]) -> String {
    let mut out = String::with_capacity(samples.len() * 240);
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for r in samples {
        out.push_str(&series_row(r));
        out.push('\n');
    }
    out
}

/// `t,I1_axis_0,...`: per-axis lower-bound terms, one row per sample.
pub fn axes_csv(samples: &[TrajectoryRecord], dim: usize) -> String {
    let mut out = String::from("t");
    for i in 0..dim {
        let _ = write!(out, ",I1_axis_{i}");
    }
    out.push('\n');
    for r in samples {
        out.push_str(&sci(r.t));
        for i in 0..dim {
            let v = r.terms.as_ref().map_or(f64::NAN, |t| t.per_axis_i1[i]);
            out.push(',');
            out.push_str(&sci(v));
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn write_snapshots(dir: &Path, snapshots: &[Snapshot]) -> Result<()> {
    for (k, snap) in snapshots.iter().enumerate() {
        write_file(&dir.join(format!("u_{k:04}.field")), &snap.to_text())?;
    }
    Ok(())
}

/// `key = value` lines in insertion order.
#[derive(Debug, Default, Clone)]
pub struct Summary {
    lines: Vec<(String, String)>,
}

impl Summary {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn num(&mut self, key: &str, value: f64) {
        self.push(key, sci(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.lines
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_have_seventeen_digits() {
        let r = TrajectoryRecord {
            t: 0.1,
            i: 1.0 / 3.0,
            hs_norm: 2.0,
            grad_sup: 3.0,
            dt: 0.0,
            tail_mass: 0.0,
            terms: None,
        };
        let row = series_row(&r);
        assert_eq!(row.split(',').count(), 10);
        assert!(row.starts_with("1.0000000000000001e-1,3.3333333333333331e-1"));
        assert!(row.ends_with("NaN,NaN,NaN,NaN"));
    }
}
