//! Item-pair exclusions for the batch analysis.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Pairs excluded from analysis by default: item combinations of the standard
/// 17-item coding whose cross-classification is not interpretable as
/// co-occurrence.
const DEFAULT_EXCLUSIONS: [(u32, u32); 8] =
    [(1, 10), (2, 11), (3, 4), (5, 15), (7, 14), (13, 15), (13, 17), (15, 17)];

/// The exclusion set: the standard 8 pairs when `default` is true, empty
/// otherwise. With 17 items this leaves 128 of the 136 unordered pairs
/// analyzable.
pub fn exclusion_set(default: bool) -> BTreeSet<(u32, u32)> {
    if default {
        DEFAULT_EXCLUSIONS.into_iter().collect()
    } else {
        BTreeSet::new()
    }
}

/// Parses a custom exclusion list: one `i,j` pair per line, `#` comments and
/// blank lines ignored, i < j enforced.
pub fn parse_exclusion_pairs(text: &str) -> Result<BTreeSet<(u32, u32)>> {
    let mut pairs = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split(',').map(str::trim);
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::ParseError {
                line,
                reason: format!("expected `i,j`, got `{content}`"),
            });
        };
        let parse = |s: &str| -> Result<u32> {
            s.parse().map_err(|_| Error::ParseError {
                line,
                reason: format!("`{s}` is not a valid item number"),
            })
        };
        let (i, j) = (parse(a)?, parse(b)?);
        if i >= j {
            return Err(Error::ParseError {
                line,
                reason: format!("pair must satisfy item_i < item_j, got ({i}, {j})"),
            });
        }
        pairs.insert((i, j));
    }
    Ok(pairs)
}
