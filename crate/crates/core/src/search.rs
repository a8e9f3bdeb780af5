//! Greedy iterative editing. Each iteration generates candidates with every
//! enabled operator, keeps those whose score beats the current sentence by
//! the operator's multiplicative threshold, and accepts the best one.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::edits::{
    detect_phrases, gen_extraction, gen_removal, gen_reordering, gen_substitution, Candidate, EditConfig, EditOp,
    OpKind, OpSet,
};
use crate::error::{Error, Result};
use crate::ingest::AnnotatedSentence;
use crate::resources::ResourceBundle;
use crate::scoring::{ScoreBreakdown, Scorer, ScoringConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpThresholds {
    pub removal: f64,
    pub extraction: f64,
    pub reordering: f64,
    pub substitution: f64,
}

impl Default for OpThresholds {
    fn default() -> Self {
        OpThresholds::newsela()
    }
}

impl OpThresholds {
    pub fn uniform(r: f64) -> Self {
        OpThresholds {
            removal: r,
            extraction: r,
            reordering: r,
            substitution: r,
        }
    }

    pub fn newsela() -> Self {
        OpThresholds::uniform(1.25)
    }

    pub fn wikilarge() -> Self {
        OpThresholds {
            removal: 1.25,
            extraction: 5.0,
            reordering: 1.25,
            substitution: 0.8,
        }
    }

    pub fn get(&self, op: OpKind) -> f64 {
        match op {
            OpKind::Removal => self.removal,
            OpKind::Extraction => self.extraction,
            OpKind::Reordering => self.reordering,
            OpKind::Substitution => self.substitution,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for op in OpKind::ALL {
            let r = self.get(op);
            if r.is_nan() || r <= 0.0 {
                return Err(Error::Config(format!("threshold for {op} must be positive, got {r}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub thresholds: OpThresholds,
    pub max_iterations: usize,
    pub revisit_guard: bool,
    pub ops: OpSet,
    pub edit: EditConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            thresholds: OpThresholds::newsela(),
            max_iterations: 20,
            revisit_guard: true,
            ops: OpSet::all(),
            edit: EditConfig::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        self.thresholds.validate()?;
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if self.edit.sub_similarity_threshold.is_nan() {
            return Err(Error::Config("substitution similarity threshold is NaN".into()));
        }
        Ok(())
    }
}

/// All candidates of the enabled operators, in operator order, with repeated
/// token sequences dropped (the first one generated is kept).
pub fn generate_candidates(sentence: &AnnotatedSentence, resources: &ResourceBundle, config: &SearchConfig) -> Vec<Candidate> {
    let phrases = detect_phrases(sentence.tree(), &config.edit.phrase_tags);
    let mut all = Vec::new();
    for op in config.ops.iter() {
        all.extend(match op {
            OpKind::Removal => gen_removal(sentence, &phrases),
            OpKind::Extraction => gen_extraction(sentence, &phrases),
            OpKind::Reordering => gen_reordering(sentence, &phrases, config.edit.reorder_scope),
            OpKind::Substitution => gen_substitution(sentence, &phrases, resources, &config.edit),
        });
    }
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    all.retain(|c| seen.insert(c.sentence.texts().into_iter().map(str::to_string).collect()));
    all
}

fn pick(current_total: f64, candidates: Vec<Candidate>, thresholds: &OpThresholds) -> Option<(Candidate, f64)> {
    let mut best: Option<(Candidate, f64)> = None;
    for candidate in candidates {
        let total = candidate.breakdown.expect("scored").total;
        if total == 0.0 {
            continue;
        }
        let ratio = total / current_total;
        if ratio <= thresholds.get(candidate.op.kind()) {
            continue;
        }
        let better = match &best {
            None => true,
            Some((b, _)) => {
                let bt = b.breakdown.expect("scored").total;
                total > bt || (total == bt && candidate.op.kind() < b.op.kind())
            }
        };
        if better {
            best = Some((candidate, ratio));
        }
    }
    best
}

/// One greedy step from `current`. Returns the accepted candidate (scored)
/// and its ratio to the current score, or `None` when nothing passes.
pub fn iterate_once(
    current: &AnnotatedSentence,
    original: &AnnotatedSentence,
    resources: &ResourceBundle,
    scoring: &ScoringConfig,
    config: &SearchConfig,
) -> Result<Option<(Candidate, f64)>> {
    let scorer = Scorer::new(original, resources, *scoring);
    step_with(&scorer, current, resources, config)
}

fn step_with(
    scorer: &Scorer<'_>,
    current: &AnnotatedSentence,
    resources: &ResourceBundle,
    config: &SearchConfig,
) -> Result<Option<(Candidate, f64)>> {
    let here = scorer.score(current);
    if here.f_cos == 0.0 {
        return Err(Error::DegenerateState);
    }
    if here.total == 0.0 {
        return Ok(None);
    }
    let mut candidates = generate_candidates(current, resources, config);
    for c in &mut candidates {
        c.breakdown = Some(scorer.score(&c.sentence));
    }
    Ok(pick(here.total, candidates, &config.thresholds))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// No candidate passed its threshold.
    Converged,
    MaxIterations,
    /// The best candidate had already been visited.
    Revisit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub op: EditOp,
    pub sentence: AnnotatedSentence,
    pub breakdown: ScoreBreakdown,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplificationTrace {
    pub original: AnnotatedSentence,
    pub initial: ScoreBreakdown,
    pub steps: Vec<Step>,
    #[serde(rename = "final")]
    pub final_sentence: AnnotatedSentence,
    pub stop: StopReason,
}

impl SimplificationTrace {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("trace serialization cannot fail")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        Ok(serde_json::from_str(line)?)
    }

    pub fn ops(&self) -> impl Iterator<Item = OpKind> + '_ {
        self.steps.iter().map(|s| s.op.kind())
    }
}

impl fmt::Display for SimplificationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}  [{:.6}]", self.original.text(), self.initial.total)?;
        for step in &self.steps {
            writeln!(f, "  {}  (x{:.4})", step.op, step.ratio)?;
            writeln!(f, "  -> {}  [{:.6}]", step.sentence.text(), step.breakdown.total)?;
        }
        Ok(())
    }
}

/// Runs the search from `original` until no candidate passes, the iteration
/// cap is hit, or (with the guard on) the search would revisit a sentence.
pub fn simplify(
    original: &AnnotatedSentence,
    resources: &ResourceBundle,
    scoring: &ScoringConfig,
    config: &SearchConfig,
) -> Result<SimplificationTrace> {
    let scorer = Scorer::new(original, resources, *scoring);
    let initial = scorer.score(original);
    let mut visited: HashSet<Vec<String>> = HashSet::new();
    visited.insert(original.texts().into_iter().map(str::to_string).collect());
    let mut steps: Vec<Step> = Vec::new();
    let mut current = original.clone();
    let mut stop = StopReason::MaxIterations;
    for _ in 0..config.max_iterations {
        let Some((candidate, ratio)) = step_with(&scorer, &current, resources, config)? else {
            stop = StopReason::Converged;
            break;
        };
        let key: Vec<String> = candidate.sentence.texts().into_iter().map(str::to_string).collect();
        if !visited.insert(key) && config.revisit_guard {
            stop = StopReason::Revisit;
            break;
        }
        current = candidate.sentence.clone();
        steps.push(Step {
            op: candidate.op,
            sentence: candidate.sentence,
            breakdown: candidate.breakdown.expect("scored"),
            ratio,
        });
    }
    Ok(SimplificationTrace {
        original: original.clone(),
        initial,
        steps,
        final_sentence: current,
        stop,
    })
}

/// A sentence whose search failed, with its position in the corpus.
#[derive(Debug)]
pub struct SentenceError {
    pub index: usize,
    pub error: Error,
}

/// Runs [`simplify`] over every sentence; failures are reported per
/// sentence and do not stop the rest.
pub fn simplify_corpus(
    corpus: &[AnnotatedSentence],
    resources: &ResourceBundle,
    scoring: &ScoringConfig,
    config: &SearchConfig,
) -> Vec<std::result::Result<SimplificationTrace, SentenceError>> {
    corpus
        .iter()
        .enumerate()
        .map(|(index, s)| simplify(s, resources, scoring, config).map_err(|error| SentenceError { index, error }))
        .collect()
}
