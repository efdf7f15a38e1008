//! CSV serialization of priors and posteriors.
//!
//! The format is a two-column CSV whose single header line carries the scale
//! tag in the first column name: `support_<tag>,probability`. Values are
//! written with 17 significant digits, which round-trips every finite double
//! bit-exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::bayes::{DiscretePosterior, DiscretePrior, ScaleTag};
use crate::error::{Error, Result};

/// Writes one distribution as CSV to any sink.
pub fn write_distribution<W: Write>(
    mut w: W,
    support: &[f64],
    prob: &[f64],
    tag: ScaleTag,
) -> Result<()> {
    writeln!(w, "support_{},probability", tag.as_str())?;
    for (s, p) in support.iter().zip(prob) {
        writeln!(w, "{s:.16e},{p:.16e}")?;
    }
    Ok(())
}

/// Reads a distribution from any CSV source, returning support,
/// probabilities, and the scale tag from the header.
pub fn read_distribution<R: BufRead>(r: R) -> Result<(Vec<f64>, Vec<f64>, ScaleTag)> {
    let mut lines = r.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::ParseError {
        line: 1,
        reason: "empty distribution file".to_string(),
    })?;
    let header = header?;
    let tag = header
        .strip_prefix("support_")
        .and_then(|rest| rest.strip_suffix(",probability"))
        .and_then(ScaleTag::parse)
        .ok_or_else(|| Error::ParseError {
            line: 1,
            reason: format!("expected header 'support_<scale>,probability', got '{header}'"),
        })?;
    let mut support = Vec::new();
    let mut prob = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (s, p) = line.split_once(',').ok_or_else(|| Error::ParseError {
            line: line_no,
            reason: "expected two comma-separated values".to_string(),
        })?;
        let parse = |txt: &str, what: &str| {
            txt.trim().parse::<f64>().map_err(|e| Error::ParseError {
                line: line_no,
                reason: format!("bad {what} '{}': {e}", txt.trim()),
            })
        };
        support.push(parse(s, "support value")?);
        prob.push(parse(p, "probability")?);
    }
    Ok((support, prob, tag))
}

/// Writes a posterior to a CSV file.
pub fn write_posterior_csv(path: &Path, post: &DiscretePosterior) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    write_distribution(file, post.support(), post.probabilities(), post.scale_tag())
}

/// Writes a raw-scale prior to a CSV file (tagged `log_or`).
pub fn write_prior_csv(path: &Path, prior: &DiscretePrior) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    write_distribution(file, prior.support(), prior.probabilities(), ScaleTag::LogOr)
}

/// Reads any distribution CSV from a file.
pub fn read_distribution_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>, ScaleTag)> {
    read_distribution(BufReader::new(File::open(path)?))
}

/// Reads a prior from a CSV file; the file must be tagged with the raw
/// (`log_or`) scale, since priors feed the dressing step.
pub fn read_prior_csv(path: &Path) -> Result<DiscretePrior> {
    let (support, prob, tag) = read_distribution_csv(path)?;
    if tag != ScaleTag::LogOr {
        return Err(Error::ScaleMismatch {
            expected: ScaleTag::LogOr.as_str(),
            found: tag.as_str(),
        });
    }
    DiscretePrior::new(support, prob)
}
