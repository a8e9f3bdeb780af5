//! Frequency-derived lookup tables: unigram probabilities, idf scores and the
//! per-word tag lexicon. All lookups are case-insensitive; keys are stored
//! lowercased.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::corpus::AnnotatedSentence;
use crate::error::{Error, Result};

pub fn normalize(word: &str) -> String {
    word.to_lowercase()
}

/// Add-one smoothed unigram distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct UnigramTable {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl UnigramTable {
    pub fn from_counts(counts: BTreeMap<String, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::EmptyCorpus);
        }
        Ok(UnigramTable { counts, total })
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(&normalize(word)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn vocab_size(&self) -> usize {
        self.counts.len()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    /// `(count(w) + 1) / (total + vocab_size)`.
    pub fn prob(&self, word: &str) -> f64 {
        (self.count(word) + 1) as f64 / (self.total + self.vocab_size() as u64) as f64
    }

    pub fn ln_prob(&self, word: &str) -> f64 {
        self.prob(word).ln()
    }

    /// `ln P_U(s) = Σ ln P(w)` over the sentence's tokens.
    pub fn sentence_ln_prob<'a>(&self, words: impl IntoIterator<Item = &'a str>) -> f64 {
        words.into_iter().map(|w| self.ln_prob(w)).sum()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (word, count) in &self.counts {
            let _ = writeln!(out, "{word}\t{count}");
        }
        out
    }

    pub fn from_tsv(content: &str, origin: impl AsRef<Path>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (i, line) in content.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (word, value) = split_tsv(line, &origin, i + 1)?;
            let count: u64 = value
                .parse()
                .map_err(|_| Error::format(&origin, i + 1, format!("bad count {value:?}")))?;
            counts.insert(normalize(word), count);
        }
        UnigramTable::from_counts(counts).map_err(|_| Error::format(&origin, 0, "unigram table is empty"))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        UnigramTable::from_tsv(&content, path)
    }
}

/// Sentence-level inverse document frequency, `ln(N / (1 + df)) + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    scores: BTreeMap<String, f64>,
    default_idf: f64,
}

const DEFAULT_KEY: &str = "#default";

impl IdfTable {
    pub fn new(scores: BTreeMap<String, f64>, default_idf: f64) -> Result<Self> {
        if !default_idf.is_finite() || default_idf < 0.0 {
            return Err(Error::InvalidArgument(format!("default idf {default_idf} must be finite and nonnegative")));
        }
        if let Some((w, v)) = scores.iter().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!("idf of {w:?} is {v}")));
        }
        Ok(IdfTable { scores, default_idf })
    }

    pub fn idf(&self, word: &str) -> f64 {
        self.scores.get(&normalize(word)).copied().unwrap_or(self.default_idf)
    }

    pub fn default_idf(&self) -> f64 {
        self.default_idf
    }

    pub fn contains(&self, word: &str) -> bool {
        self.scores.contains_key(&normalize(word))
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.scores.keys().map(String::as_str)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("{DEFAULT_KEY}\t{}\n", self.default_idf);
        for (word, score) in &self.scores {
            let _ = writeln!(out, "{word}\t{score}");
        }
        out
    }

    pub fn from_tsv(content: &str, origin: impl AsRef<Path>) -> Result<Self> {
        let mut scores = BTreeMap::new();
        let mut default_idf = None;
        for (i, line) in content.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (word, value) = split_tsv(line, &origin, i + 1)?;
            let score: f64 = value
                .parse()
                .map_err(|_| Error::format(&origin, i + 1, format!("bad idf {value:?}")))?;
            if i == 0 && word == DEFAULT_KEY {
                default_idf = Some(score);
            } else {
                scores.insert(normalize(word), score);
            }
        }
        let default_idf = default_idf.ok_or_else(|| Error::format(&origin, 1, "missing #default line"))?;
        IdfTable::new(scores, default_idf)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        IdfTable::from_tsv(&content, path)
    }
}

/// POS/dependency tag pairs observed for each word in the simple corpus.
/// Substitution uses it to check that a substitute can fill the slot.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TagLexicon {
    entries: BTreeMap<String, BTreeSet<(String, String)>>,
}

impl TagLexicon {
    pub fn from_corpus(corpus: &[AnnotatedSentence]) -> Self {
        let mut entries: BTreeMap<String, BTreeSet<(String, String)>> = BTreeMap::new();
        for token in corpus.iter().flat_map(|s| s.tokens()) {
            entries
                .entry(normalize(&token.text))
                .or_default()
                .insert((token.pos.clone(), token.dep.clone()));
        }
        TagLexicon { entries }
    }

    pub fn insert(&mut self, word: &str, pos: &str, dep: &str) {
        self.entries
            .entry(normalize(word))
            .or_default()
            .insert((pos.to_string(), dep.to_string()));
    }

    pub fn has_tags(&self, word: &str, pos: &str, dep: &str) -> bool {
        self.entries
            .get(&normalize(word))
            .is_some_and(|tags| tags.contains(&(pos.to_string(), dep.to_string())))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `word<TAB>POS/dep,POS/dep`
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (word, tags) in &self.entries {
            let joined: Vec<String> = tags.iter().map(|(p, d)| format!("{p}/{d}")).collect();
            let _ = writeln!(out, "{word}\t{}", joined.join(","));
        }
        out
    }

    pub fn from_tsv(content: &str, origin: impl AsRef<Path>) -> Result<Self> {
        let mut lexicon = TagLexicon::default();
        for (i, line) in content.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (word, value) = split_tsv(line, &origin, i + 1)?;
            for pair in value.split(',') {
                let (pos, dep) = pair
                    .rsplit_once('/')
                    .ok_or_else(|| Error::format(&origin, i + 1, format!("bad tag pair {pair:?}")))?;
                lexicon.insert(word, pos, dep);
            }
        }
        Ok(lexicon)
    }
}

pub(crate) fn split_tsv<'a>(line: &'a str, origin: impl AsRef<Path>, line_no: usize) -> Result<(&'a str, &'a str)> {
    match line.split_once('\t') {
        Some((word, value)) if !word.is_empty() => Ok((word, value)),
        _ => Err(Error::format(origin, line_no, "expected word<TAB>value")),
    }
}

/// Builds the unigram and idf tables from a corpus of simple sentences.
pub fn build_frequency_tables(corpus: &[AnnotatedSentence]) -> Result<(UnigramTable, IdfTable)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut doc_freq: BTreeMap<String, u64> = BTreeMap::new();
    for sentence in corpus {
        let mut seen = BTreeSet::new();
        for token in sentence.tokens() {
            let word = normalize(&token.text);
            *counts.entry(word.clone()).or_default() += 1;
            seen.insert(word);
        }
        for word in seen {
            *doc_freq.entry(word).or_default() += 1;
        }
    }
    let n = corpus.len() as f64;
    let scores = doc_freq
        .into_iter()
        .map(|(w, df)| (w, (n / (1.0 + df as f64)).ln() + 1.0))
        .collect();
    let idf = IdfTable::new(scores, n.ln() + 1.0)?;
    Ok((UnigramTable::from_counts(counts)?, idf))
}
