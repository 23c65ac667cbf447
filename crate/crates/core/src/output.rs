//! Numeric tables as CSV or JSON.
//!
//! Floats are written with 17 significant digits in scientific notation, so
//! every value round-trips exactly and output is byte-stable across runs.
//! Lines end in `\n`.

use std::fmt::Write;

/// A header plus rows of floats.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// `{:.16e}`: one leading digit plus sixteen decimals.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// An array of objects keyed by the header. Numbers use the same
    /// formatting as CSV; non-finite values become `null`.
    pub fn to_json(&self) -> String {
        let keys: Vec<String> =
            self.header.iter().map(|h| serde_json::to_string(h).expect("string keys serialize")).collect();
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (k, &x)) in keys.iter().zip(row).enumerate() {
                let value = if x.is_finite() { format_float(x) } else { "null".into() };
                let _ = write!(out, "{}{k}: {value}", if j == 0 { "" } else { ", " });
            }
            out.push('}');
        }
        out.push_str(if self.rows.is_empty() { "]\n" } else { "\n]\n" });
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        let mut t = Table::new(&["t", "D"]);
        t.push(vec![0.0, 1.5]);
        t.push(vec![1.0, -0.25]);
        assert_eq!(t.to_csv(), "t,D\n0.0000000000000000e0,1.5000000000000000e0\n1.0000000000000000e0,-2.5000000000000000e-1\n");
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[1]["D"], -0.25);
        assert_eq!(v.as_array().unwrap().len(), 2);
        assert_eq!(Table::new(&["x"]).to_json(), "[]\n");
    }

    #[test]
    fn round_trip_digits() {
        for x in [std::f64::consts::PI, 1e-300, 123456.789, -5e-17] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
