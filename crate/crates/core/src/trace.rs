//! Spectrum/trace records and their delimited text format.
//!
//! Files carry a `#`-prefixed header block (settings, seed, units) and
//! two tab-separated columns. Everything needed to regenerate a trace
//! bit-exactly lives in the header.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Result, SimError};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub axis: Vec<f64>,
    pub values: Vec<f64>,
    pub axis_label: String,
    pub value_label: String,
    pub metadata: BTreeMap<String, String>,
}

impl SpectrumTrace {
    pub fn new(
        axis: Vec<f64>,
        values: Vec<f64>,
        axis_label: impl Into<String>,
        value_label: impl Into<String>,
    ) -> Result<Self> {
        if axis.len() != values.len() {
            return Err(SimError::config("trace axis/value length mismatch"));
        }
        if axis.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SimError::config("trace axis must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(SimError::config("trace values must be finite"));
        }
        Ok(Self {
            axis,
            values,
            axis_label: axis_label.into(),
            value_label: value_label.into(),
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn len(&self) -> usize {
        self.axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    /// Index of the maximum value, optionally restricted to an axis window.
    pub fn argmax(&self, window: Option<(f64, f64)>) -> Option<usize> {
        self.axis
            .iter()
            .enumerate()
            .filter(|(_, x)| window.map_or(true, |(lo, hi)| **x >= lo && **x <= hi))
            .max_by(|a, b| self.values[a.0].total_cmp(&self.values[b.0]))
            .map(|(i, _)| i)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# sbs-trace v1\n");
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "# columns: {}\t{}", self.axis_label, self.value_label);
        for (x, y) in self.axis.iter().zip(&self.values) {
            let _ = writeln!(out, "{x}\t{y}");
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut metadata = BTreeMap::new();
        let mut axis_label = String::from("axis");
        let mut value_label = String::from("value");
        let mut axis = Vec::new();
        let mut values = Vec::new();

        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(cols) = rest.strip_prefix("columns:") {
                    let mut parts = cols.trim().split_whitespace();
                    if let Some(a) = parts.next() {
                        axis_label = a.to_string();
                    }
                    if let Some(v) = parts.next() {
                        value_label = v.to_string();
                    }
                } else if let Some((k, v)) = rest.split_once('=') {
                    metadata.insert(k.trim().to_string(), v.trim().to_string());
                }
                continue;
            }
            let mut cols = line.split_whitespace();
            let x = cols
                .next()
                .ok_or_else(|| SimError::TraceParse {
                    line: lineno,
                    message: "missing axis column".into(),
                })?
                .parse::<f64>()
                .map_err(|e| SimError::TraceParse {
                    line: lineno,
                    message: format!("bad axis value: {e}"),
                })?;
            let y = cols
                .next()
                .ok_or_else(|| SimError::TraceParse {
                    line: lineno,
                    message: "missing value column".into(),
                })?
                .parse::<f64>()
                .map_err(|e| SimError::TraceParse {
                    line: lineno,
                    message: format!("bad value: {e}"),
                })?;
            axis.push(x);
            values.push(y);
        }

        if axis.is_empty() {
            return Err(SimError::TraceParse {
                line: text.lines().count().max(1),
                message: "no data rows".into(),
            });
        }
        let mut trace = SpectrumTrace::new(axis, values, axis_label, value_label)?;
        trace.metadata = metadata;
        Ok(trace)
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip_is_exact() {
        let trace = SpectrumTrace::new(
            vec![1.0, 2.0, 3.5],
            vec![-67.0, -66.123456789012345, -70.0],
            "frequency_hz",
            "power_dbm",
        )
        .unwrap()
        .with_meta("seed", 42)
        .with_meta("rbw", "10 kHz");

        let parsed = SpectrumTrace::parse(&trace.to_text()).unwrap();
        assert_eq!(parsed, trace);
        // Shortest-roundtrip float formatting keeps the bytes stable too.
        assert_eq!(parsed.to_text(), trace.to_text());
    }

    #[test]
    fn parse_error_carries_line_number() {
        let text = "# sbs-trace v1\n1.0\t-67.0\nnot-a-number\t-66.0\n";
        match SpectrumTrace::parse(text) {
            Err(SimError::TraceParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn axis_must_increase() {
        assert!(SpectrumTrace::new(vec![1.0, 1.0], vec![0.0, 0.0], "x", "y").is_err());
        assert!(SpectrumTrace::new(vec![2.0, 1.0], vec![0.0, 0.0], "x", "y").is_err());
    }

    #[test]
    fn missing_column_reports_line() {
        let text = "1.0\t-67.0\n2.0\n";
        match SpectrumTrace::parse(text) {
            Err(SimError::TraceParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
