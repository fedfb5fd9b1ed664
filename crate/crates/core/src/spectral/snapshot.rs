//! Plain-text field snapshots.
//!
//! Layout (one item per line, UTF-8):
//!
//! ```text
//! # blowup-field v1
//! dim <n>
//! points <N>
//! half_length <L>
//! name <identifier without whitespace>
//! time <t>
//! <N^n sample values, row-major, axis 0 slowest>
//! ```
//!
//! Reals are written with `{:.16e}`, which round-trips every `f64` exactly.

use super::field::ScalarField;
use super::grid::GridSpec;
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

const MAGIC: &str = "# blowup-field v1";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub name: String,
    pub time: f64,
    pub field: ScalarField,
}

impl Snapshot {
    pub fn new(name: impl Into<String>, time: f64, field: ScalarField) -> Self {
        Self {
            name: name.into(),
            time,
            field,
        }
    }

    pub fn to_text(&self) -> String {
        let g = self.field.grid();
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "dim {}", g.dim());
        let _ = writeln!(s, "points {}", g.points());
        let _ = writeln!(s, "half_length {:.16e}", g.half_length());
        let _ = writeln!(s, "name {}", self.name);
        let _ = writeln!(s, "time {:.16e}", self.time);
        for v in self.field.values() {
            let _ = writeln!(s, "{v:.16e}");
        }
        s
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing {what}")))?
                .map_err(Error::from)
        };
        if next("header")?.trim() != MAGIC {
            return Err(Error::Format("bad magic line".into()));
        }
        let mut field = |key: &str| -> Result<String> {
            let line = next(key)?;
            let rest = line
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| Error::Format(format!("expected `{key}` line, got `{line}`")))?;
            Ok(rest.trim().to_string())
        };
        let num = |s: String, key: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::Format(format!("bad value for {key}: `{s}`")))
        };
        let dim: usize = field("dim")?
            .parse()
            .map_err(|_| Error::Format("bad dim".into()))?;
        let points: usize = field("points")?
            .parse()
            .map_err(|_| Error::Format("bad points".into()))?;
        let half_length = num(field("half_length")?, "half_length")?;
        let name = field("name")?;
        let time = num(field("time")?, "time")?;
        let grid = GridSpec::new(dim, points, half_length)?;
        let mut values = Vec::with_capacity(grid.len());
        for line in lines {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            values.push(num(t.to_string(), "sample")?);
        }
        Ok(Self {
            name,
            time,
            field: ScalarField::new(grid, values)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = GridSpec::new(2, 8, 1.5).unwrap();
        let f = ScalarField::from_fn(g, |x| (x[0] * 1.3).sin() * x[1].exp() / 7.0);
        let snap = Snapshot::new("u", 0.125, f);
        let text = snap.to_text();
        let back = Snapshot::read_from(text.as_bytes()).unwrap();
        assert_eq!(back, snap);
    }

    #[test]
    fn rejects_truncated() {
        let g = GridSpec::new(1, 8, 1.0).unwrap();
        let text = Snapshot::new("u", 0.0, ScalarField::zeros(g)).to_text();
        let cut: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(Snapshot::read_from(cut.as_bytes()).is_err());
        assert!(Snapshot::read_from("nope\n".as_bytes()).is_err());
    }
}
