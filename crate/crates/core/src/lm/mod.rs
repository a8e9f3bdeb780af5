//! Syntax-aware language modelling and the SLOR fluency estimate.

mod ngram;

pub use ngram::{train_lm, NGramBackend, Symbol, DEFAULT_ORDER, DEFAULT_WEIGHTS};

use crate::ingest::{AnnotatedSentence, AnnotatedToken, UnigramTable};

/// A language model that reads words together with their POS and dependency
/// tags.
///
/// `logprob` must be finite and non-positive for any non-empty token list.
/// Sentence boundary markers are the backend's business; callers pass only
/// real tokens.
pub trait SyntaxAwareLM: Send + Sync {
    fn logprob(&self, tokens: &[AnnotatedToken]) -> f64;

    fn backend_id(&self) -> String;
}

/// SLOR from precomputed log-probabilities: `(ln P_LM − ln P_U) / |s|`.
pub fn slor_from_parts(ln_p_lm: f64, ln_p_unigram: f64, length: usize) -> f64 {
    assert!(length > 0, "SLOR needs a non-empty sentence");
    (ln_p_lm - ln_p_unigram) / length as f64
}

/// Syntactic log-odds ratio of a sentence. Markers do not count towards the
/// length.
pub fn slor(sentence: &AnnotatedSentence, lm: &dyn SyntaxAwareLM, unigrams: &UnigramTable) -> f64 {
    let ln_lm = lm.logprob(sentence.tokens());
    let ln_u = unigrams.sentence_ln_prob(sentence.tokens().iter().map(|t| t.text.as_str()));
    slor_from_parts(ln_lm, ln_u, sentence.len())
}
