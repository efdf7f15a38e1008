//! Reading pair-table CSV files and rendering pipeline reports.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pipeline::{PairFlag, PairPosteriorSummary, PairTableRecord};

pub(crate) const HEADER: &str = "year,item_i,item_j,n11,n12,n21,n22";

/// Output layout for [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Upper-triangular grid of `mean (low, high)` cells, NA where absent.
    MatrixText,
    /// One row per pair, 17-significant-digit floats.
    Csv,
    /// Pretty-printed JSON array of summaries, 17-significant-digit floats.
    Json,
}

fn parse_count(field: &str, line: usize) -> Result<u64> {
    let trimmed = field.trim();
    if let Ok(signed) = trimmed.parse::<i64>() {
        if signed < 0 {
            return Err(Error::NegativeCount {
                line,
                reason: format!("count {signed} is negative"),
            });
        }
    }
    trimmed.parse().map_err(|_| Error::ParseError {
        line,
        reason: format!("`{trimmed}` is not a nonnegative integer count"),
    })
}

/// Parses pair-table CSV text (header `year,item_i,item_j,n11,n12,n21,n22`).
/// Records come back sorted by (item_i, item_j, year); duplicate
/// (year, item_i, item_j) keys are rejected.
pub fn parse_pair_tables(text: &str) -> Result<Vec<PairTableRecord>> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::ParseError { line: 1, reason: "empty file".to_string() });
    };
    if header.trim() != HEADER {
        return Err(Error::ParseError {
            line: 1,
            reason: format!("expected header `{HEADER}`, got `{}`", header.trim()),
        });
    }

    let mut records = Vec::new();
    let mut seen: HashMap<(i32, u32, u32), usize> = HashMap::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::ParseError {
                line,
                reason: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let year: i32 = fields[0].trim().parse().map_err(|_| Error::ParseError {
            line,
            reason: format!("`{}` is not a valid year", fields[0].trim()),
        })?;
        let item = |s: &str| -> Result<u32> {
            s.trim().parse().map_err(|_| Error::ParseError {
                line,
                reason: format!("`{}` is not a valid item number", s.trim()),
            })
        };
        let (item_i, item_j) = (item(fields[1])?, item(fields[2])?);
        if item_i >= item_j {
            return Err(Error::ParseError {
                line,
                reason: format!("item_i must be < item_j, got ({item_i}, {item_j})"),
            });
        }
        if seen.insert((year, item_i, item_j), line).is_some() {
            return Err(Error::DuplicateKey { line, year, item_i, item_j });
        }
        records.push(PairTableRecord {
            year,
            item_i,
            item_j,
            n11: parse_count(fields[3], line)?,
            n12: parse_count(fields[4], line)?,
            n21: parse_count(fields[5], line)?,
            n22: parse_count(fields[6], line)?,
        });
    }
    records.sort_by_key(|r| (r.item_i, r.item_j, r.year));
    Ok(records)
}

/// Reads and parses a pair-table CSV file.
pub fn load_pair_tables(path: impl AsRef<Path>) -> Result<Vec<PairTableRecord>> {
    parse_pair_tables(&fs::read_to_string(path)?)
}

/// Writes records in the pair-table CSV format accepted by
/// [`load_pair_tables`].
pub fn write_pair_tables(path: impl AsRef<Path>, records: &[PairTableRecord]) -> Result<()> {
    let mut out = String::with_capacity(32 * (records.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.year, r.item_i, r.item_j, r.n11, r.n12, r.n21, r.n22
        );
    }
    fs::write(path, out)?;
    Ok(())
}

fn flag_label(flag: &PairFlag) -> &'static str {
    match flag {
        PairFlag::Analyzed => "analyzed",
        PairFlag::Excluded => "excluded",
        PairFlag::NoData => "no_data",
        PairFlag::Error(_) => "error",
    }
}

fn csv_quote(text: &str) -> String {
    format!("\"{}\"", text.replace('"', "\"\""))
}

fn summaries_csv(summaries: &[PairPosteriorSummary]) -> String {
    let mut out = String::new();
    out.push_str(
        "item_i,item_j,flag,years_used,posterior_mean_gamma_prime,credible_low,credible_high,note\n",
    );
    for s in summaries {
        let float = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.16e}"));
        let note = match &s.flag {
            PairFlag::Error(message) => csv_quote(message),
            _ => String::new(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.item_i,
            s.item_j,
            flag_label(&s.flag),
            s.years_used,
            float(s.posterior_mean_gamma_prime),
            float(s.credible_low),
            float(s.credible_high),
            note
        );
    }
    out
}

fn matrix_text(summaries: &[PairPosteriorSummary]) -> String {
    let mut items: Vec<u32> = summaries.iter().flat_map(|s| [s.item_i, s.item_j]).collect();
    items.sort_unstable();
    items.dedup();
    if items.is_empty() {
        return String::new();
    }

    let mut cells: HashMap<(u32, u32), String> = HashMap::new();
    for s in summaries {
        let text = match (s.posterior_mean_gamma_prime, s.credible_low, s.credible_high) {
            (Some(mean), Some(lo), Some(hi)) => {
                format!("{mean:.3} ({lo:.3}, {hi:.3})")
            }
            _ => "NA".to_string(),
        };
        cells.insert((s.item_i, s.item_j), text);
    }

    let width = cells.values().map(String::len).max().unwrap_or(2).max(2) + 2;
    let label_width = items.iter().map(|i| i.to_string().len()).max().unwrap_or(1) + 1;
    let mut out = String::new();
    // Column heads: every item but the first; row heads: every item but the last.
    let _ = write!(out, "{:label_width$}", "");
    for &j in &items[1..] {
        let _ = write!(out, "{j:>width$}");
    }
    out.push('\n');
    for &i in &items[..items.len() - 1] {
        let _ = write!(out, "{i:<label_width$}");
        for &j in &items[1..] {
            if j <= i {
                let _ = write!(out, "{:>width$}", "");
            } else {
                let text = cells.get(&(i, j)).map_or("NA", String::as_str);
                let _ = write!(out, "{text:>width$}");
            }
        }
        out.push('\n');
    }
    out
}

/// Renders summaries in the requested format.
pub fn emit_report(summaries: &[PairPosteriorSummary], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::MatrixText => Ok(matrix_text(summaries)),
        ReportFormat::Csv => Ok(summaries_csv(summaries)),
        ReportFormat::Json => crate::jsonfmt::to_pretty_json17(&summaries),
    }
}
