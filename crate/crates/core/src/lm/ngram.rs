//! Interpolated n-gram model over composite `word/POS/dep` tokens.
//!
//! Three stages are mixed with fixed weights:
//!
//! 1. an n-gram over full composites,
//! 2. an n-gram over the `POS/dep` pair times the emission probability of the
//!    composite given its pair,
//! 3. a uniform distribution over the composite vocabulary.
//!
//! Each n-gram stage conditions on the longest suffix of the history that was
//! observed during training, so every stage is a normalized distribution for
//! any history. Words never seen with a given tag pair share that pair's
//! unknown slot, which keeps rare-but-well-formed tokens above the uniform
//! floor.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SyntaxAwareLM;
use crate::error::{Error, Result};
use crate::ingest::{normalize, AnnotatedSentence, AnnotatedToken};

pub const DEFAULT_ORDER: usize = 3;
pub const DEFAULT_WEIGHTS: [f64; 3] = [0.7, 0.2, 0.1];

const FORMAT: &str = "edsimp-ngram";
const VERSION: u32 = 1;

/// Position in the composite vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// A composite seen in training.
    Known(u32),
    /// An unseen word whose tag pair was seen.
    UnknownWord(u32),
    /// Unseen tag pair.
    Unknown,
    /// Sentence end marker.
    End,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Counts {
    grams: BTreeMap<Vec<u32>, u64>,
    contexts: BTreeMap<Vec<u32>, u64>,
}

impl Counts {
    fn add(&mut self, gram: &[u32]) {
        *self.grams.entry(gram.to_vec()).or_default() += 1;
        *self.contexts.entry(gram[..gram.len() - 1].to_vec()).or_default() += 1;
    }

    fn from_grams(grams: BTreeMap<Vec<u32>, u64>) -> Self {
        let mut contexts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (gram, count) in &grams {
            *contexts.entry(gram[..gram.len() - 1].to_vec()).or_default() += count;
        }
        Counts { grams, contexts }
    }

    /// Maximum-likelihood estimate under the longest observed history suffix.
    fn prob(&self, history: &[u32], next: u32) -> f64 {
        for k in (0..=history.len()).rev() {
            let ctx = &history[history.len() - k..];
            if let Some(&total) = self.contexts.get(ctx) {
                let mut key = ctx.to_vec();
                key.push(next);
                let count = self.grams.get(&key).copied().unwrap_or(0);
                return count as f64 / total as f64;
            }
        }
        0.0
    }
}

/// Reference backend for [`SyntaxAwareLM`].
#[derive(Debug, Clone, PartialEq)]
pub struct NGramBackend {
    order: usize,
    weights: [f64; 3],
    composites: BTreeMap<(String, String, String), u32>,
    composite_pd: Vec<u32>,
    composite_counts: Vec<u64>,
    pds: BTreeMap<(String, String), u32>,
    pd_counts: Vec<u64>,
    full: Counts,
    tags: Counts,
}

// Stage-local ids for the markers, appended after the real vocabulary.
fn end_id(n: usize) -> u32 {
    n as u32
}
fn bos_id(n: usize) -> u32 {
    n as u32 + 1
}
fn unk_id(n: usize) -> u32 {
    n as u32 + 2
}

fn composite_key(token: &AnnotatedToken) -> (String, String, String) {
    (normalize(&token.text), token.pos.clone(), token.dep.clone())
}

impl NGramBackend {
    pub fn train(corpus: &[AnnotatedSentence], order: usize) -> Result<Self> {
        Self::train_with_weights(corpus, order, DEFAULT_WEIGHTS)
    }

    pub fn train_with_weights(corpus: &[AnnotatedSentence], order: usize, weights: [f64; 3]) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        if !(2..=5).contains(&order) {
            return Err(Error::InvalidArgument(format!("n-gram order {order} outside [2, 5]")));
        }
        check_weights(&weights)?;

        // Ids are assigned in sorted key order so the model does not depend on
        // corpus order beyond the counts themselves.
        let mut composite_counts_by_key: BTreeMap<(String, String, String), u64> = BTreeMap::new();
        for token in corpus.iter().flat_map(|s| s.tokens()) {
            *composite_counts_by_key.entry(composite_key(token)).or_default() += 1;
        }
        let mut pd_counts_by_key: BTreeMap<(String, String), u64> = BTreeMap::new();
        for ((_, p, d), c) in &composite_counts_by_key {
            *pd_counts_by_key.entry((p.clone(), d.clone())).or_default() += c;
        }
        let pds: BTreeMap<(String, String), u32> =
            pd_counts_by_key.keys().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect();
        let pd_counts: Vec<u64> = pd_counts_by_key.values().copied().collect();
        let composites: BTreeMap<(String, String, String), u32> = composite_counts_by_key
            .keys()
            .enumerate()
            .map(|(i, k)| (k.clone(), i as u32))
            .collect();
        let composite_counts: Vec<u64> = composite_counts_by_key.values().copied().collect();
        let composite_pd = composite_counts_by_key
            .keys()
            .map(|(_, p, d)| pds[&(p.clone(), d.clone())])
            .collect();

        let mut model = NGramBackend {
            order,
            weights,
            composites,
            composite_pd,
            composite_counts,
            pds,
            pd_counts,
            full: Counts::default(),
            tags: Counts::default(),
        };
        let mut full = Counts::default();
        let mut tags = Counts::default();
        for sentence in corpus {
            let (full_seq, tag_seq) = model.padded_sequences(sentence.tokens());
            for i in (order - 1)..full_seq.len() {
                for k in 0..order {
                    full.add(&full_seq[i - k..=i]);
                    tags.add(&tag_seq[i - k..=i]);
                }
            }
        }
        model.full = full;
        model.tags = tags;
        Ok(model)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights
    }

    /// Size of the composite vocabulary the model distributes mass over:
    /// seen composites, one unknown slot per tag pair, the end marker and a
    /// global unknown.
    pub fn vocabulary_size(&self) -> usize {
        self.composites.len() + self.pds.len() + 2
    }

    pub fn vocabulary(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = (0..self.composites.len() as u32).map(Symbol::Known).collect();
        out.extend((0..self.pds.len() as u32).map(Symbol::UnknownWord));
        out.push(Symbol::End);
        out.push(Symbol::Unknown);
        out
    }

    pub fn symbol(&self, token: &AnnotatedToken) -> Symbol {
        if let Some(&id) = self.composites.get(&composite_key(token)) {
            return Symbol::Known(id);
        }
        match self.pds.get(&(token.pos.clone(), token.dep.clone())) {
            Some(&pd) => Symbol::UnknownWord(pd),
            None => Symbol::Unknown,
        }
    }

    fn stage_ids(&self, symbol: Symbol) -> (u32, u32) {
        let (nc, np) = (self.composites.len(), self.pds.len());
        match symbol {
            Symbol::Known(c) => (c, self.composite_pd[c as usize]),
            Symbol::UnknownWord(pd) => (unk_id(nc), pd),
            Symbol::Unknown => (unk_id(nc), unk_id(np)),
            Symbol::End => (end_id(nc), end_id(np)),
        }
    }

    fn padded_sequences(&self, tokens: &[AnnotatedToken]) -> (Vec<u32>, Vec<u32>) {
        let (nc, np) = (self.composites.len(), self.pds.len());
        let mut full = vec![bos_id(nc); self.order - 1];
        let mut tags = vec![bos_id(np); self.order - 1];
        for symbol in tokens.iter().map(|t| self.symbol(t)).chain(std::iter::once(Symbol::End)) {
            let (f, t) = self.stage_ids(symbol);
            full.push(f);
            tags.push(t);
        }
        (full, tags)
    }

    fn history(&self, history: &[AnnotatedToken]) -> (Vec<u32>, Vec<u32>) {
        let (nc, np) = (self.composites.len(), self.pds.len());
        let mut full = vec![bos_id(nc); self.order - 1];
        let mut tags = vec![bos_id(np); self.order - 1];
        for token in history {
            let (f, t) = self.stage_ids(self.symbol(token));
            full.push(f);
            tags.push(t);
        }
        let keep = self.order - 1;
        (full[full.len() - keep..].to_vec(), tags[tags.len() - keep..].to_vec())
    }

    fn prob_with(&self, full_hist: &[u32], tag_hist: &[u32], next: Symbol) -> f64 {
        let [w_full, w_tags, w_uniform] = self.weights;
        let (nc, np) = (self.composites.len(), self.pds.len());
        let full = match next {
            Symbol::Known(c) => self.full.prob(full_hist, c),
            Symbol::End => self.full.prob(full_hist, end_id(nc)),
            _ => 0.0,
        };
        let tags = match next {
            Symbol::Known(c) => {
                let pd = self.composite_pd[c as usize];
                let emission = self.composite_counts[c as usize] as f64 / (self.pd_counts[pd as usize] + 1) as f64;
                self.tags.prob(tag_hist, pd) * emission
            }
            Symbol::UnknownWord(pd) => self.tags.prob(tag_hist, pd) / (self.pd_counts[pd as usize] + 1) as f64,
            Symbol::End => self.tags.prob(tag_hist, end_id(np)),
            Symbol::Unknown => 0.0,
        };
        w_full * full + w_tags * tags + w_uniform / self.vocabulary_size() as f64
    }

    /// `P(next | history)` where `history` is the sentence prefix (without
    /// begin markers).
    pub fn conditional(&self, history: &[AnnotatedToken], next: Symbol) -> f64 {
        let (full, tags) = self.history(history);
        self.prob_with(&full, &tags, next)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        NGramBackend::from_json(&content)
    }

    pub fn to_json(&self) -> String {
        let composites: Vec<ModelComposite> = self
            .composites
            .iter()
            .map(|((w, p, d), &id)| ModelComposite {
                word: w.clone(),
                pos: p.clone(),
                dep: d.clone(),
                count: self.composite_counts[id as usize],
            })
            .collect();
        let file = ModelFile {
            format: FORMAT.to_string(),
            version: VERSION,
            order: self.order,
            weights: self.weights,
            composites,
            full_grams: self.full.grams.iter().map(|(k, v)| (k.clone(), *v)).collect(),
            tag_grams: self.tags.grams.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        };
        let mut out = serde_json::to_string(&file).expect("model serialization cannot fail");
        out.push('\n');
        out
    }

    pub fn from_json(content: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(content)?;
        if file.format != FORMAT || file.version != VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported model format {} v{}",
                file.format, file.version
            )));
        }
        check_weights(&file.weights)?;
        if !(2..=5).contains(&file.order) {
            return Err(Error::InvalidArgument(format!("n-gram order {} outside [2, 5]", file.order)));
        }
        let mut pd_counts_by_key: BTreeMap<(String, String), u64> = BTreeMap::new();
        for c in &file.composites {
            *pd_counts_by_key.entry((c.pos.clone(), c.dep.clone())).or_default() += c.count;
        }
        let pds: BTreeMap<(String, String), u32> =
            pd_counts_by_key.keys().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect();
        let mut composites = BTreeMap::new();
        let mut composite_pd = Vec::new();
        let mut composite_counts = Vec::new();
        for (i, c) in file.composites.iter().enumerate() {
            composites.insert((c.word.clone(), c.pos.clone(), c.dep.clone()), i as u32);
            composite_pd.push(pds[&(c.pos.clone(), c.dep.clone())]);
            composite_counts.push(c.count);
        }
        if composites.len() != file.composites.len() {
            return Err(Error::InvalidArgument("duplicate composite in model file".into()));
        }
        // Marker ids sit just past each stage's vocabulary.
        let limits = [composites.len() as u32 + 2, pds.len() as u32 + 2];
        for (grams, limit) in [(&file.full_grams, limits[0]), (&file.tag_grams, limits[1])] {
            for (gram, _) in grams.iter() {
                if gram.is_empty() || gram.len() > file.order || gram.iter().any(|&id| id > limit) {
                    return Err(Error::InvalidArgument(format!("malformed n-gram {gram:?} in model file")));
                }
            }
        }
        Ok(NGramBackend {
            order: file.order,
            weights: file.weights,
            composites,
            composite_pd,
            composite_counts,
            pds,
            pd_counts: pd_counts_by_key.values().copied().collect(),
            full: Counts::from_grams(file.full_grams.into_iter().collect()),
            tags: Counts::from_grams(file.tag_grams.into_iter().collect()),
        })
    }

    /// Lowercased words the model has seen.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.composites.keys().map(|(w, _, _)| w.as_str())
    }
}

fn check_weights(weights: &[f64; 3]) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || (sum - 1.0).abs() > 1e-9 || weights[2] <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "interpolation weights {weights:?} must be nonnegative, sum to 1 and give the uniform stage positive mass"
        )));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ModelComposite {
    word: String,
    pos: String,
    dep: String,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    order: usize,
    weights: [f64; 3],
    composites: Vec<ModelComposite>,
    full_grams: Vec<(Vec<u32>, u64)>,
    tag_grams: Vec<(Vec<u32>, u64)>,
}

impl SyntaxAwareLM for NGramBackend {
    fn logprob(&self, tokens: &[AnnotatedToken]) -> f64 {
        let (full, tags) = self.padded_sequences(tokens);
        let symbols = tokens.iter().map(|t| self.symbol(t)).chain(std::iter::once(Symbol::End));
        let h = self.order - 1;
        symbols
            .enumerate()
            .map(|(i, sym)| self.prob_with(&full[i..i + h], &tags[i..i + h], sym).ln())
            .sum()
    }

    fn backend_id(&self) -> String {
        format!("ngram-{}", self.order)
    }
}

/// Trains the reference backend.
pub fn train_lm(corpus: &[AnnotatedSentence], order: usize) -> Result<NGramBackend> {
    NGramBackend::train(corpus, order)
}
