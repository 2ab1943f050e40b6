//! Result rows and their CSV / JSON export.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub const CSV_HEADER: [&str; 15] = [
    "dataset",
    "method",
    "seed",
    "b",
    "n",
    "m",
    "num_communities",
    "objective",
    "cost1",
    "nonempty_fraction",
    "cost2_total_bits",
    "bits_per_link",
    "detect_ms",
    "order_ms",
    "cost_ms",
];

/// One `(dataset, method, b)` measurement. Optional fields are written as
/// empty CSV cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub method: String,
    pub seed: u64,
    pub b: usize,
    pub n: usize,
    pub m: usize,
    pub num_communities: Option<usize>,
    /// Modularity, or codelength for infomap.
    pub objective: Option<f64>,
    pub cost1: usize,
    pub nonempty_fraction: f64,
    pub cost2_total_bits: f64,
    pub bits_per_link: f64,
    pub detect_ms: Option<f64>,
    pub order_ms: Option<f64>,
    pub cost_ms: Option<f64>,
}

impl ReportRow {
    /// Rechecks the derived columns against the raw counts.
    pub fn check(&self) -> Result<()> {
        let bad = |what: &str| {
            Err(BenchError::Runtime(format!(
                "row {}/{}/b={}: {what}",
                self.dataset, self.method, self.b
            )))
        };
        let reals = [
            Some(self.nonempty_fraction),
            Some(self.cost2_total_bits),
            Some(self.bits_per_link),
            self.objective,
            self.detect_ms,
            self.order_ms,
            self.cost_ms,
        ];
        if reals.iter().flatten().any(|x| !x.is_finite()) {
            return bad("non-finite value");
        }
        if self.m == 0 || self.b == 0 {
            return bad("m and b must be positive");
        }
        let expected_bpl = self.cost2_total_bits / self.m as f64;
        if (self.bits_per_link - expected_bpl).abs() > 1e-9 * expected_bpl.abs().max(1.0) {
            return bad("bits_per_link != cost2_total_bits / m");
        }
        let side = self.n.div_ceil(self.b) as f64;
        let expected_fraction = self.cost1 as f64 / (side * side);
        if (self.nonempty_fraction - expected_fraction).abs() > 1e-12 {
            return bad("nonempty_fraction != cost1 / ceil(n/b)^2");
        }
        Ok(())
    }

    fn csv_record(&self) -> [String; 15] {
        let opt_int = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let opt_real = |v: Option<f64>| v.map(format_sig6).unwrap_or_default();
        [
            self.dataset.clone(),
            self.method.clone(),
            self.seed.to_string(),
            self.b.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            opt_int(self.num_communities),
            opt_real(self.objective),
            self.cost1.to_string(),
            format_sig6(self.nonempty_fraction),
            format_sig6(self.cost2_total_bits),
            format_sig6(self.bits_per_link),
            opt_real(self.detect_ms),
            opt_real(self.order_ms),
            opt_real(self.cost_ms),
        ]
    }
}

/// Six significant digits in the style of C's `%g`: fixed notation for
/// decimal exponents in `-4..6`, scientific otherwise, trailing zeros removed.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_owned()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

fn check_rows(rows: &[ReportRow]) -> Result<()> {
    if rows.is_empty() {
        return Err(BenchError::Runtime("no rows to write".into()));
    }
    rows.iter().try_for_each(ReportRow::check)
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    check_rows(rows)?;
    let mut w = csv::Writer::from_writer(out);
    let to_io = |e: csv::Error| BenchError::Io(e.into());
    w.write_record(CSV_HEADER).map_err(to_io)?;
    for row in rows {
        w.write_record(row.csv_record()).map_err(to_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the CSV table. Nothing is created when the rows are empty or fail
/// their checks.
pub fn emit_csv(rows: &[ReportRow], path: &Path) -> Result<()> {
    check_rows(rows)?;
    let mut out = BufWriter::new(File::create(path)?);
    write_csv(rows, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn emit_json(rows: &[ReportRow], path: &Path) -> Result<()> {
    check_rows(rows)?;
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<Vec<ReportRow>> {
    let file = std::io::BufReader::new(File::open(path)?);
    Ok(serde_json::from_reader(file)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_row() -> ReportRow {
        ReportRow {
            dataset: "cycle".into(),
            method: "identity".into(),
            seed: 0,
            b: 2,
            n: 4,
            m: 4,
            num_communities: None,
            objective: None,
            cost1: 4,
            nonempty_fraction: 1.0,
            cost2_total_bits: 24.0,
            bits_per_link: 6.0,
            detect_ms: None,
            order_ms: None,
            cost_ms: None,
        }
    }

    #[test]
    fn sig6_matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (6.0, "6"),
            (0.5, "0.5"),
            (24.0, "24"),
            (123456.0, "123456"),
            (1234567.0, "1.23457e+06"),
            (999999.5, "1e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (3.25159265, "3.25159"),
            (-2.5, "-2.5"),
            (0.4349123456, "0.434912"),
            (26.5101, "26.5101"),
            (9.9999996, "10"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig6(x), want, "{x}");
        }
    }

    #[test]
    fn one_row_gives_two_lines() {
        let mut out = Vec::new();
        write_csv(&[cycle_row()], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert_eq!(lines[1], "cycle,identity,0,2,4,4,,,4,1,24,6,,,");
    }

    #[test]
    fn empty_rows_create_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        assert!(emit_csv(&[], &path).is_err());
        assert!(!path.exists());
        assert!(emit_json(&[], &path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn inconsistent_rows_are_rejected() {
        let mut r = cycle_row();
        r.bits_per_link = 5.0;
        assert!(r.check().is_err());
        let mut r = cycle_row();
        r.nonempty_fraction = 0.5;
        assert!(r.check().is_err());
        let mut r = cycle_row();
        r.objective = Some(f64::NAN);
        assert!(r.check().is_err());
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let mut second = cycle_row();
        second.method = "multilevel".into();
        second.num_communities = Some(2);
        second.objective = Some(0.1234567890123);
        second.detect_ms = Some(0.1);
        let rows = vec![cycle_row(), second];
        emit_json(&rows, &path).unwrap();
        assert_eq!(read_json(&path).unwrap(), rows);
    }

    #[test]
    fn dataset_names_with_commas_are_quoted() {
        let mut r = cycle_row();
        r.dataset = "a,b".into();
        let mut out = Vec::new();
        write_csv(&[r], &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().contains("\"a,b\",identity"));
    }
}
