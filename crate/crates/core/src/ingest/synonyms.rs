use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::tables::{normalize, split_tsv};
use crate::error::{Error, Result};

/// Flat synonym lists exported from a lexical database, one headword per
/// line: `word<TAB>syn1,syn2,...`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymTable {
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl SynonymTable {
    /// Self-references are dropped.
    pub fn insert(&mut self, word: &str, synonym: &str) {
        let (w, s) = (normalize(word), normalize(synonym));
        if w != s && !s.is_empty() {
            self.entries.entry(w).or_default().insert(s);
        }
    }

    pub fn get(&self, word: &str) -> impl Iterator<Item = &str> {
        self.entries
            .get(&normalize(word))
            .into_iter()
            .flat_map(|set| set.iter().map(String::as_str))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(content: &str, origin: impl AsRef<Path>) -> Result<Self> {
        let mut table = SynonymTable::default();
        for (i, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, syns) = split_tsv(line, &origin, i + 1)?;
            for syn in syns.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                table.insert(word, syn);
            }
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SynonymTable::parse(&content, path)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (word, syns) in &self.entries {
            let joined: Vec<&str> = syns.iter().map(String::as_str).collect();
            let _ = writeln!(out, "{word}\t{}", joined.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_drops_self_maps() {
        let t = SynonymTable::parse("constructing\tbuilding,Constructing, making\n", "s").unwrap();
        let syns: Vec<&str> = t.get("Constructing").collect();
        assert_eq!(syns, vec!["building", "making"]);
    }

    #[test]
    fn missing_tab_is_format_error() {
        assert!(matches!(SynonymTable::parse("oops\n", "s"), Err(Error::Format { line: 1, .. })));
    }
}
