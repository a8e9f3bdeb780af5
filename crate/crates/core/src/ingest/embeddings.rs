//! Word vectors in the plain-text `word v1 ... vD` format used by GloVe and
//! word2vec exports.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::tables::normalize;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize, vectors: BTreeMap<String, Vec<f64>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be positive".into()));
        }
        for (word, v) in &vectors {
            if v.len() != dimension {
                return Err(Error::InvalidArgument(format!(
                    "vector for {word:?} has {} components, expected {dimension}",
                    v.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("vector for {word:?} is not finite")));
            }
        }
        Ok(EmbeddingTable { dimension, vectors })
    }

    /// Parses the text format. Words are lowercased; the first occurrence of a
    /// duplicate wins.
    pub fn parse(content: &str, origin: impl AsRef<Path>) -> Result<Self> {
        let mut dimension = None;
        let mut vectors = BTreeMap::new();
        for (i, line) in content.lines().enumerate() {
            let line_no = i + 1;
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else { continue };
            let values = fields
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::format(&origin, line_no, format!("non-numeric field {f:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            match dimension {
                None if values.is_empty() => return Err(Error::format(&origin, line_no, "word without a vector")),
                None => dimension = Some(values.len()),
                Some(d) if d != values.len() => {
                    return Err(Error::format(
                        &origin,
                        line_no,
                        format!("expected {d} components, found {}", values.len()),
                    ))
                }
                Some(_) => {}
            }
            vectors.entry(normalize(word)).or_insert(values);
        }
        let dimension = dimension.ok_or_else(|| Error::format(&origin, 0, "no vectors"))?;
        EmbeddingTable::new(dimension, vectors)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        EmbeddingTable::parse(&content, path)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(&normalize(word)).map(Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.vectors.keys().map(String::as_str)
    }

    /// The `k` words closest to `word` by Euclidean distance, excluding the
    /// word itself. Ties are broken alphabetically. Empty when `word` has no
    /// vector.
    pub fn nearest(&self, word: &str, k: usize) -> Vec<(&str, f64)> {
        let key = normalize(word);
        let Some(query) = self.vectors.get(&key) else {
            return Vec::new();
        };
        let mut scored: Vec<(&str, f64)> = self
            .vectors
            .iter()
            .filter(|(w, _)| **w != key)
            .map(|(w, v)| (w.as_str(), euclidean(query, v)))
            .collect();
        scored.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
        scored.truncate(k);
        scored
    }

    /// Cosine similarity of two words, if both have vectors.
    pub fn similarity(&self, a: &str, b: &str) -> Option<f64> {
        Some(cosine(self.get(a)?, self.get(b)?))
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Cosine similarity; zero when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}
