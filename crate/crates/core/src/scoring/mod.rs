//! The product-of-experts objective.
//!
//! ```text
//! f(s) = f_eslor(s)^α · f_fre(s)^β · (1/|s|)^γ · f_entity(s)^δ · f_cos(s)
//! ```
//!
//! `f_cos` is a hard 0/1 filter against the original sentence, and sentences
//! at or below `min_length` tokens are rejected outright (score zero).

pub mod readability;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{cosine, AnnotatedSentence, EmbeddingTable, IdfTable, UnigramTable};
use crate::lm::{slor, SyntaxAwareLM};
use crate::resources::ResourceBundle;

/// Upper clamp for the reading-ease factor: the score of a one-word,
/// one-syllable sentence.
pub const FRE_MAX: f64 = 121.22;
pub const FRE_MIN: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub tau: f64,
    pub min_length: usize,
    pub entity_offset: usize,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig::newsela()
    }
}

impl ScoringConfig {
    pub fn newsela() -> Self {
        ScoringConfig {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            delta: 1.0,
            tau: 0.7,
            min_length: 6,
            entity_offset: 1,
        }
    }

    pub fn wikilarge() -> Self {
        ScoringConfig {
            alpha: 0.5,
            beta: 1.0,
            gamma: 0.25,
            delta: 1.0,
            ..ScoringConfig::newsela()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma), ("delta", self.delta)] {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Config(format!("{name} must be finite and nonnegative, got {w}")));
            }
        }
        if !(-1.0..=1.0).contains(&self.tau) {
            return Err(Error::Config(format!("tau must lie in [-1, 1], got {}", self.tau)));
        }
        if self.min_length < 1 {
            return Err(Error::Config("min_length must be at least 1".into()));
        }
        Ok(())
    }
}

/// Every factor of the objective for one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub slor_raw: f64,
    pub f_eslor: f64,
    pub f_fre: f64,
    pub len_factor: f64,
    pub f_entity: f64,
    pub f_cos: f64,
    pub length_rejected: bool,
    pub total: f64,
}

pub fn f_eslor(sentence: &AnnotatedSentence, lm: &dyn SyntaxAwareLM, unigrams: &UnigramTable) -> f64 {
    slor(sentence, lm, unigrams).exp()
}

/// Flesch reading ease of the sentence on its own, clamped to
/// `[FRE_MIN, FRE_MAX]`.
pub fn f_fre(sentence: &AnnotatedSentence) -> f64 {
    let (words, syllables) = readability::word_stats(sentence.texts());
    readability::flesch_reading_ease(words, 1, syllables).clamp(FRE_MIN, FRE_MAX)
}

/// `Some(1/|s|)`, or `None` when the sentence is too short to be accepted.
pub fn len_factor(sentence: &AnnotatedSentence, min_length: usize) -> Option<f64> {
    (sentence.len() > min_length).then(|| 1.0 / sentence.len() as f64)
}

pub fn f_entity(sentence: &AnnotatedSentence, entity_offset: usize) -> f64 {
    (sentence.entity_count() + entity_offset) as f64
}

/// Idf-weighted average of the word vectors of in-vocabulary tokens.
pub fn sentence_embedding(sentence: &AnnotatedSentence, embeddings: &EmbeddingTable, idf: &IdfTable) -> Option<Vec<f64>> {
    let mut sum = vec![0.0; embeddings.dimension()];
    let mut weight = 0.0;
    for token in sentence.tokens() {
        if let Some(v) = embeddings.get(&token.text) {
            let w = idf.idf(&token.text);
            weight += w;
            sum.iter_mut().zip(v).for_each(|(acc, x)| *acc += w * x);
        }
    }
    (weight > 0.0).then(|| sum.into_iter().map(|x| x / weight).collect())
}

fn cos_filter(candidate: Option<&[f64]>, original: Option<&[f64]>, tau: f64) -> f64 {
    match (candidate, original) {
        (Some(c), Some(o)) if cosine(c, o) > tau => 1.0,
        _ => 0.0,
    }
}

/// Hard meaning-preservation filter: 1 iff the cosine between the sentence
/// embeddings exceeds `tau`. A sentence without in-vocabulary tokens fails.
pub fn f_cos(
    candidate: &AnnotatedSentence,
    original: &AnnotatedSentence,
    embeddings: &EmbeddingTable,
    idf: &IdfTable,
    tau: f64,
) -> f64 {
    let c = sentence_embedding(candidate, embeddings, idf);
    let o = sentence_embedding(original, embeddings, idf);
    cos_filter(c.as_deref(), o.as_deref(), tau)
}

/// Combines factors; rejected or filtered sentences score zero.
pub fn combine(config: &ScoringConfig, slor_raw: f64, fre: f64, length: usize, entity: f64, cos: f64) -> ScoreBreakdown {
    let length_rejected = length <= config.min_length;
    let len_factor = 1.0 / length.max(1) as f64;
    let f_eslor = slor_raw.exp();
    let total = if length_rejected || cos == 0.0 {
        0.0
    } else {
        f_eslor.powf(config.alpha) * fre.powf(config.beta) * len_factor.powf(config.gamma) * entity.powf(config.delta) * cos
    };
    ScoreBreakdown {
        slor_raw,
        f_eslor,
        f_fre: fre,
        len_factor,
        f_entity: entity,
        f_cos: cos,
        length_rejected,
        total,
    }
}

/// Scores candidates against one fixed original sentence, caching the
/// original's embedding.
pub struct Scorer<'a> {
    resources: &'a ResourceBundle,
    config: ScoringConfig,
    original_embedding: Option<Vec<f64>>,
}

impl<'a> Scorer<'a> {
    pub fn new(original: &AnnotatedSentence, resources: &'a ResourceBundle, config: ScoringConfig) -> Self {
        let original_embedding = sentence_embedding(original, resources.primary_embeddings(), &resources.idf);
        Scorer {
            resources,
            config,
            original_embedding,
        }
    }

    pub fn config(&self) -> &ScoringConfig {
        &self.config
    }

    pub fn score(&self, candidate: &AnnotatedSentence) -> ScoreBreakdown {
        let r = self.resources;
        let cand_embedding = sentence_embedding(candidate, r.primary_embeddings(), &r.idf);
        let cos = cos_filter(cand_embedding.as_deref(), self.original_embedding.as_deref(), self.config.tau);
        combine(
            &self.config,
            slor(candidate, r.lm.as_ref(), &r.unigrams),
            f_fre(candidate),
            candidate.len(),
            f_entity(candidate, self.config.entity_offset),
            cos,
        )
    }
}

/// Scores `candidate` as a simplification of `original`.
pub fn score(
    candidate: &AnnotatedSentence,
    original: &AnnotatedSentence,
    resources: &ResourceBundle,
    config: &ScoringConfig,
) -> ScoreBreakdown {
    Scorer::new(original, resources, *config).score(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{AnnotatedToken, ParseTree};

    fn sentence(words: &[&str], entities: &[usize]) -> AnnotatedSentence {
        let tokens: Vec<_> = words
            .iter()
            .enumerate()
            .map(|(i, w)| AnnotatedToken::new(*w, "NN", "dep", entities.contains(&i)))
            .collect();
        let leaves = words.iter().enumerate().map(|(i, w)| ParseTree::leaf("NN", *w, i)).collect();
        AnnotatedSentence::new(tokens, ParseTree::node("S", leaves)).unwrap()
    }

    #[test]
    fn fre_examples() {
        assert!((f_fre(&sentence(&["go"], &[])) - 121.22).abs() < 1e-9);
        assert!((f_fre(&sentence(&["The", "cat", "sat", "."], &[])) - 119.19).abs() < 1e-9);
        let long = sentence(&["incomprehensibilities", "internationalization"], &[]);
        assert_eq!(f_fre(&long), 1.0);
    }

    #[test]
    fn length_factor_and_rejection() {
        let words: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        assert_eq!(len_factor(&sentence(&refs, &[]), 6), Some(0.1));
        assert_eq!(len_factor(&sentence(&refs[..6], &[]), 6), None);
        assert_eq!(len_factor(&sentence(&refs[..7], &[]), 6), Some(1.0 / 7.0));
    }

    #[test]
    fn entity_counts_with_offset() {
        assert_eq!(f_entity(&sentence(&["a", "b"], &[]), 1), 1.0);
        assert_eq!(f_entity(&sentence(&["a", "b", "c", "d"], &[0, 1, 3]), 1), 4.0);
    }

    #[test]
    fn cosine_filter_cases() {
        let emb = EmbeddingTable::parse("cat 1 0\ndog 0 1\n", "e").unwrap();
        let idf = IdfTable::new(Default::default(), 1.0).unwrap();
        let cat = sentence(&["cat"], &[]);
        let dog = sentence(&["dog"], &[]);
        assert_eq!(f_cos(&cat, &cat, &emb, &idf, 0.99), 1.0);
        assert_eq!(f_cos(&dog, &cat, &emb, &idf, 0.5), 0.0);
        let oov = sentence(&["zebra"], &[]);
        assert_eq!(f_cos(&oov, &cat, &emb, &idf, -1.0), 0.0);
    }

    #[test]
    fn zero_weights_leave_only_the_filter() {
        let config = ScoringConfig {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
            delta: 0.0,
            ..ScoringConfig::newsela()
        };
        assert_eq!(combine(&config, -3.2, 80.0, 10, 2.0, 1.0).total, 1.0);
        assert_eq!(combine(&config, -3.2, 80.0, 10, 2.0, 0.0).total, 0.0);
    }

    #[test]
    fn rejection_zeroes_total() {
        let b = combine(&ScoringConfig::newsela(), 1.0, 80.0, 6, 2.0, 1.0);
        assert!(b.length_rejected);
        assert_eq!(b.total, 0.0);
        assert!((b.len_factor - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn eslor_is_exp_of_slor() {
        let b = combine(&ScoringConfig::newsela(), 2.0, 50.0, 8, 1.0, 1.0);
        assert!((b.f_eslor - 7.38905609893065).abs() < 1e-12);
        assert!((combine(&ScoringConfig::newsela(), 0.0, 50.0, 8, 1.0, 1.0).f_eslor - 1.0).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(ScoringConfig::newsela().validate().is_ok());
        assert!(ScoringConfig { tau: 1.5, ..ScoringConfig::newsela() }.validate().is_err());
        assert!(ScoringConfig { alpha: -1.0, ..ScoringConfig::newsela() }.validate().is_err());
        assert!(ScoringConfig { min_length: 0, ..ScoringConfig::newsela() }.validate().is_err());
    }
}
