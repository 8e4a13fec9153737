//! The discrepancy ledger: one row per place where a corpus file departs
//! from the text it transcribes.

use anyhow::{bail, Context, Result};

const HEADER: &str = "location | observed | normalized | rationale";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyEntry {
    /// `file#Spec`, relative to the corpus root.
    pub location: String,
    pub observed: String,
    pub normalized: String,
    pub rationale: String,
}

impl DiscrepancyEntry {
    /// The file part of the location.
    pub fn file(&self) -> &str {
        self.location.split('#').next().unwrap_or_default()
    }
}

/// Reads the pipe-separated ledger. Blank lines and `#` comments are skipped;
/// the first remaining line must be the header.
pub fn parse_ledger(text: &str) -> Result<Vec<DiscrepancyEntry>> {
    let mut rows = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    match rows.next() {
        Some((_, l)) if collapse(l) == HEADER => {}
        Some((i, _)) => bail!("line {}: expected header `{HEADER}`", i + 1),
        None => bail!("empty ledger"),
    }
    rows.map(|(i, l)| {
        let cells: Vec<&str> = l.split('|').map(str::trim).collect();
        let [location, observed, normalized, rationale] = cells[..] else {
            bail!("line {}: expected 4 cells, found {}", i + 1, cells.len());
        };
        if cells.iter().any(|c| c.is_empty()) {
            bail!("line {}: empty cell", i + 1);
        }
        Ok(DiscrepancyEntry {
            location: location.into(),
            observed: observed.into(),
            normalized: normalized.into(),
            rationale: rationale.into(),
        })
    })
    .collect::<Result<_>>()
    .context("reading the ledger")
}

/// Checks an entry against the text of the file it names: the normalized
/// text is present, and the observed text is gone unless it is part of the
/// normalized one.
pub fn verify_entry(entry: &DiscrepancyEntry, file_text: &str) -> Result<(), String> {
    let text = collapse(file_text);
    let observed = collapse(&entry.observed);
    let normalized = collapse(&entry.normalized);
    if observed == normalized {
        return Err(format!("{}: observed and normalized text are the same", entry.location));
    }
    if !text.contains(&normalized) {
        return Err(format!("{}: normalized text not found: {normalized}", entry.location));
    }
    if !normalized.contains(&observed) && text.contains(&observed) {
        return Err(format!("{}: observed text still present: {observed}", entry.location));
    }
    Ok(())
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
