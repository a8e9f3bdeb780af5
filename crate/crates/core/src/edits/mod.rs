//! Candidate generation: phrase detection on the constituency tree and the
//! four edit operators (removal, extraction, reordering, lexical
//! substitution).
//!
//! Every operator returns candidates that are themselves valid
//! [`AnnotatedSentence`]s: token annotations are carried over from the
//! source and the tree is spliced, never re-parsed.

mod splice;
mod substitution;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use splice::{extract_subtree, move_subtree, remove_subtree};
pub use substitution::{gen_substitution, is_inflection, select_complex_word, stem};

use crate::error::{Error, Result};
use crate::ingest::{AnnotatedSentence, NodePath, ParseTree, Span};
use crate::scoring::ScoreBreakdown;

pub const DEFAULT_PHRASE_TAGS: [&str; 7] = ["S", "SBAR", "NP", "VP", "PP", "ADJP", "ADVP"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Removal,
    Extraction,
    Reordering,
    Substitution,
}

impl OpKind {
    pub const ALL: [OpKind; 4] = [OpKind::Removal, OpKind::Extraction, OpKind::Reordering, OpKind::Substitution];

    pub fn short_name(self) -> &'static str {
        match self {
            OpKind::Removal => "rm",
            OpKind::Extraction => "ex",
            OpKind::Reordering => "ro",
            OpKind::Substitution => "ls",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::Removal => "removal",
            OpKind::Extraction => "extraction",
            OpKind::Reordering => "reordering",
            OpKind::Substitution => "substitution",
        })
    }
}

/// A subset of operators, written `rm+ex+ls+ro`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpSet(BTreeSet<OpKind>);

impl OpSet {
    pub fn all() -> Self {
        OpSet(OpKind::ALL.into_iter().collect())
    }

    pub fn contains(&self, op: OpKind) -> bool {
        self.0.contains(&op)
    }

    pub fn iter(&self) -> impl Iterator<Item = OpKind> + '_ {
        self.0.iter().copied()
    }
}

impl Default for OpSet {
    fn default() -> Self {
        OpSet::all()
    }
}

impl FromIterator<OpKind> for OpSet {
    fn from_iter<I: IntoIterator<Item = OpKind>>(iter: I) -> Self {
        OpSet(iter.into_iter().collect())
    }
}

impl FromStr for OpSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut set = BTreeSet::new();
        for part in s.split('+').map(str::trim) {
            let op = OpKind::ALL
                .into_iter()
                .find(|op| op.short_name().eq_ignore_ascii_case(part) || op.to_string().eq_ignore_ascii_case(part))
                .ok_or_else(|| Error::InvalidArgument(format!("unknown operator {part:?} (expected rm, ex, ro or ls)")))?;
            set.insert(op);
        }
        Ok(OpSet(set))
    }
}

impl fmt::Display for OpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(|op| op.short_name()).collect();
        f.write_str(&names.join("+"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReorderScope {
    /// Only phrases sharing a parent are moved around each other.
    Siblings,
    /// Any two non-overlapping phrases.
    All,
}

impl FromStr for ReorderScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "siblings" => Ok(ReorderScope::Siblings),
            "all" => Ok(ReorderScope::All),
            other => Err(Error::InvalidArgument(format!("unknown reorder scope {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EditConfig {
    pub k_neighbors: usize,
    pub sub_similarity_threshold: f64,
    pub phrase_tags: BTreeSet<String>,
    pub reorder_scope: ReorderScope,
}

impl Default for EditConfig {
    fn default() -> Self {
        EditConfig {
            k_neighbors: 10,
            sub_similarity_threshold: 0.5,
            phrase_tags: DEFAULT_PHRASE_TAGS.iter().map(|t| t.to_string()).collect(),
            reorder_scope: ReorderScope::Siblings,
        }
    }
}

/// A clause- or phrase-level constituent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phrase {
    pub path: NodePath,
    pub span: Span,
    pub label: String,
}

/// What an edit did, in terms of token positions of the sentence it was
/// applied to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EditOp {
    Removal {
        start: usize,
        end: usize,
        label: String,
        text: String,
    },
    Extraction {
        start: usize,
        end: usize,
        label: String,
        text: String,
    },
    Reordering {
        moved_start: usize,
        moved_end: usize,
        anchor_start: usize,
        anchor_end: usize,
        after: bool,
        text: String,
    },
    Substitution {
        index: usize,
        original: String,
        substitute: String,
    },
}

impl EditOp {
    pub fn kind(&self) -> OpKind {
        match self {
            EditOp::Removal { .. } => OpKind::Removal,
            EditOp::Extraction { .. } => OpKind::Extraction,
            EditOp::Reordering { .. } => OpKind::Reordering,
            EditOp::Substitution { .. } => OpKind::Substitution,
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::Removal { text, label, .. } => write!(f, "remove {label} \"{text}\""),
            EditOp::Extraction { text, label, .. } => write!(f, "extract {label} \"{text}\""),
            EditOp::Reordering { text, after, .. } => {
                write!(f, "move \"{text}\" {} its anchor", if *after { "after" } else { "before" })
            }
            EditOp::Substitution { original, substitute, .. } => write!(f, "replace \"{original}\" with \"{substitute}\""),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub sentence: AnnotatedSentence,
    pub op: EditOp,
    pub breakdown: Option<ScoreBreakdown>,
}

impl Candidate {
    fn new(sentence: AnnotatedSentence, op: EditOp) -> Self {
        Candidate {
            sentence,
            op,
            breakdown: None,
        }
    }
}

/// Strips function tags and indices: `NP-SBJ-1` → `NP`, `PP=2` → `PP`.
pub fn base_label(label: &str) -> &str {
    if label.starts_with('-') {
        return label;
    }
    label.split(['-', '=']).next().unwrap_or(label)
}

/// Constituents at any depth whose label is a phrase tag, in pre-order. The
/// root is excluded since it spans the whole sentence.
pub fn detect_phrases(tree: &ParseTree, phrase_tags: &BTreeSet<String>) -> Vec<Phrase> {
    tree.preorder()
        .into_iter()
        .filter(|(path, node)| !path.is_empty() && phrase_tags.contains(base_label(&node.label)))
        .map(|(path, node)| Phrase {
            path,
            span: node.span,
            label: node.label.clone(),
        })
        .collect()
}

fn span_text(sentence: &AnnotatedSentence, span: Span) -> String {
    sentence.texts()[span.start..span.end].join(" ")
}

/// One candidate per multi-token phrase, with the phrase deleted.
pub fn gen_removal(sentence: &AnnotatedSentence, phrases: &[Phrase]) -> Vec<Candidate> {
    phrases
        .iter()
        .filter(|p| p.span.len() > 1 && p.span.len() < sentence.len())
        .map(|p| {
            let (tokens, tree) = remove_subtree(sentence, &p.path);
            let edited = AnnotatedSentence::new(tokens, tree).expect("removal keeps the tree tiled");
            Candidate::new(
                edited,
                EditOp::Removal {
                    start: p.span.start,
                    end: p.span.end,
                    label: p.label.clone(),
                    text: span_text(sentence, p.span),
                },
            )
        })
        .collect()
}

/// One candidate per phrase, consisting of the phrase alone.
pub fn gen_extraction(sentence: &AnnotatedSentence, phrases: &[Phrase]) -> Vec<Candidate> {
    phrases
        .iter()
        .map(|p| {
            let (tokens, tree) = extract_subtree(sentence, &p.path);
            let edited = AnnotatedSentence::new(tokens, tree).expect("extraction keeps the tree tiled");
            Candidate::new(
                edited,
                EditOp::Extraction {
                    start: p.span.start,
                    end: p.span.end,
                    label: p.label.clone(),
                    text: span_text(sentence, p.span),
                },
            )
        })
        .collect()
}

fn parent(path: &[usize]) -> &[usize] {
    &path[..path.len().saturating_sub(1)]
}

/// Moves each phrase immediately before and after every other
/// non-overlapping phrase (restricted to siblings by default). Moves that
/// leave the token order unchanged and repeated orders are skipped.
pub fn gen_reordering(sentence: &AnnotatedSentence, phrases: &[Phrase], scope: ReorderScope) -> Vec<Candidate> {
    let identity: Vec<usize> = (0..sentence.len()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    for moved in phrases {
        for anchor in phrases {
            if moved.span.overlaps(&anchor.span) {
                continue;
            }
            if scope == ReorderScope::Siblings && parent(&moved.path) != parent(&anchor.path) {
                continue;
            }
            for after in [false, true] {
                let (order, tree) = move_subtree(sentence.tree(), &moved.path, &anchor.path, after);
                if order == identity || !seen.insert(order.clone()) {
                    continue;
                }
                let tokens = order.iter().map(|&i| sentence.tokens()[i].clone()).collect();
                let edited = AnnotatedSentence::new(tokens, tree).expect("reordering keeps the tree tiled");
                out.push(Candidate::new(
                    edited,
                    EditOp::Reordering {
                        moved_start: moved.span.start,
                        moved_end: moved.span.end,
                        anchor_start: anchor.span.start,
                        anchor_end: anchor.span.end,
                        after,
                        text: span_text(sentence, moved.span),
                    },
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
