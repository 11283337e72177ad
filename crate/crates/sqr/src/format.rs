//! Output encodings. CSV numbers carry 17 significant digits; JSON numbers
//! use the shortest decimal that round-trips.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::CliError;

pub fn csv_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// One CSV line from already formatted fields.
pub fn csv_row<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = String::new();
    for (i, f) in fields.into_iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push_str(f.as_ref());
    }
    line.push('\n');
    line
}

pub fn csv_numbers(values: &[f64]) -> String {
    csv_row(values.iter().map(|&v| csv_number(v)))
}

/// Header plus rows of numbers.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = csv_row(header);
    for r in rows {
        let _ = write!(out, "{}", csv_numbers(&r));
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::numeric(format!("cannot encode JSON: {e}")))?;
    s.push('\n');
    Ok(s)
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<num_complex::Complex64> for JsonComplex {
    fn from(z: num_complex::Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}
