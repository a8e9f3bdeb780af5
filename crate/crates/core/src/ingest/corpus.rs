//! Annotated sentences and the line-delimited corpus format.
//!
//! One record per line:
//! `{"tokens":[{"t":"The","p":"DT","d":"det","e":false},...],"parse":"(S ...)"}`

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tree::{parse_bracketed_tree, ParseTree};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnnotatedToken {
    #[serde(rename = "t")]
    pub text: String,
    #[serde(rename = "p")]
    pub pos: String,
    #[serde(rename = "d")]
    pub dep: String,
    #[serde(rename = "e")]
    pub is_entity: bool,
}

impl AnnotatedToken {
    pub fn new(text: impl Into<String>, pos: impl Into<String>, dep: impl Into<String>, is_entity: bool) -> Self {
        AnnotatedToken {
            text: text.into(),
            pos: pos.into(),
            dep: dep.into(),
            is_entity,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.text.is_empty() || self.pos.is_empty() || self.dep.is_empty() {
            return Err(Error::InvalidSentence(format!(
                "token fields must be non-empty (text={:?}, pos={:?}, dep={:?})",
                self.text, self.pos, self.dep
            )));
        }
        if self.text.chars().any(char::is_whitespace) {
            return Err(Error::InvalidSentence(format!("token {:?} contains whitespace", self.text)));
        }
        Ok(())
    }
}

/// A tokenized, tagged and parsed sentence; the unit the search edits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Record", into = "Record")]
pub struct AnnotatedSentence {
    tokens: Vec<AnnotatedToken>,
    tree: ParseTree,
}

#[derive(Clone, Serialize, Deserialize)]
struct Record {
    tokens: Vec<AnnotatedToken>,
    parse: String,
}

impl TryFrom<Record> for AnnotatedSentence {
    type Error = Error;

    fn try_from(record: Record) -> Result<Self> {
        let tree = parse_bracketed_tree(&record.parse)?;
        AnnotatedSentence::new(record.tokens, tree)
    }
}

impl From<AnnotatedSentence> for Record {
    fn from(sentence: AnnotatedSentence) -> Self {
        Record {
            parse: sentence.tree.to_bracketed(),
            tokens: sentence.tokens,
        }
    }
}

impl AnnotatedSentence {
    pub fn new(tokens: Vec<AnnotatedToken>, tree: ParseTree) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::InvalidSentence("sentence has no tokens".into()));
        }
        for token in &tokens {
            token.validate()?;
        }
        let leaves = tree.leaf_count();
        if leaves != tokens.len() {
            return Err(Error::InvalidSentence(format!(
                "{} tokens but the parse has {} leaves",
                tokens.len(),
                leaves
            )));
        }
        if tree.span.start != 0 || tree.span.end != tokens.len() {
            return Err(Error::InvalidSentence(format!(
                "root span {} does not cover {} tokens",
                tree.span,
                tokens.len()
            )));
        }
        tree.check_tiling()?;
        Ok(AnnotatedSentence { tokens, tree })
    }

    pub fn tokens(&self) -> &[AnnotatedToken] {
        &self.tokens
    }

    pub fn tree(&self) -> &ParseTree {
        &self.tree
    }

    /// Token count, `|s|`.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.text.as_str()).collect()
    }

    /// Tokens joined by single spaces.
    pub fn text(&self) -> String {
        self.texts().join(" ")
    }

    pub fn entity_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.is_entity).count()
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let record: Record = serde_json::from_str(line)?;
        AnnotatedSentence::try_from(record)
    }

    /// Canonical serialized record (no trailing newline).
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }
}

/// Reads a corpus file. Blank lines are skipped; errors name the 1-based line.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<AnnotatedSentence>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&content, path)
}

pub fn parse_corpus(content: &str, origin: impl AsRef<Path>) -> Result<Vec<AnnotatedSentence>> {
    let mut sentences = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let sentence = AnnotatedSentence::from_json_line(line).map_err(|e| Error::format(&origin, i + 1, e.to_string()))?;
        sentences.push(sentence);
    }
    Ok(sentences)
}

pub fn write_corpus<W: Write>(mut out: W, corpus: &[AnnotatedSentence]) -> std::io::Result<()> {
    for sentence in corpus {
        writeln!(out, "{}", sentence.to_json_line())?;
    }
    Ok(())
}
