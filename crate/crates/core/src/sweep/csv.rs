use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::SweepResult;
use crate::error::{Error, Result};

const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits: plain decimal for moderate
/// magnitudes, scientific otherwise, without trailing zeros.
pub fn format_value(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let sign = if negative { "-" } else { "" };
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let plain = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        } else {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        };
        let plain = plain.trim_end_matches('0').trim_end_matches('.');
        format!("{sign}{plain}")
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

pub fn to_csv_string(result: &SweepResult) -> String {
    let mut out = String::from("sweep_var");
    for c in &result.columns {
        out.push(',');
        out.push_str(c);
    }
    out.push_str(",hierarchy_ok\n");
    for row in &result.rows {
        out.push_str(&format_value(row.sweep_value));
        for v in &row.values {
            out.push(',');
            if let Some(v) = v {
                out.push_str(&format_value(*v));
            }
        }
        let _ = writeln!(out, ",{}", row.hierarchy_ok);
    }
    out
}

pub fn write_csv_to(result: &SweepResult, w: &mut impl Write) -> std::io::Result<()> {
    w.write_all(to_csv_string(result).as_bytes())
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::invalid("no rows to write"));
    }
    fs::write(path, to_csv_string(result)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Numeric fields of a CSV row (sweep value first) and its `hierarchy_ok` flag.
pub type CsvRow = (Vec<Option<f64>>, bool);

/// Parses CSV text produced by [`write_csv`] into the full header and rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<CsvRow>)> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::invalid("empty CSV"))?
        .split(',')
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::invalid(format!(
                "row {} has {} fields, header has {}",
                i + 1,
                fields.len(),
                header.len()
            )));
        }
        let (flag, nums) = fields.split_last().expect("non-empty row");
        let values = nums
            .iter()
            .map(|f| {
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse::<f64>()
                        .map(Some)
                        .map_err(|e| Error::invalid(format!("row {}: `{f}`: {e}", i + 1)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ok = flag
            .parse::<bool>()
            .map_err(|e| Error::invalid(format!("row {}: `{flag}`: {e}", i + 1)))?;
        rows.push((values, ok));
    }
    Ok((header, rows))
}
