//! Key-value reports and CSV helpers.

use std::fmt::{self, Display};
use std::fs::File;
use std::io::Write;
use std::path::Path;

/// Lines of `key = value`, printed in insertion order.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(String, String)>,
    pub exit_code: u8,
}

impl Report {
    /// A report that prints nothing.
    pub fn empty() -> Self {
        Report::default()
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }
}

impl Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// Fifteen significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        format!("{:.*}", (14 - mag).max(0) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

pub fn join_f64(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(",")
}

pub fn csv_writer(path: &Path) -> std::io::Result<csv::Writer<File>> {
    let file = File::create(path)?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file))
}

pub fn write_rows<W: Write, const C: usize>(
    w: &mut csv::Writer<W>,
    header: &[&str; C],
    rows: &[[f64; C]],
) -> csv::Result<()> {
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}
