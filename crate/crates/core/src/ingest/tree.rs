//! Constituency trees in bracketed (Penn Treebank style) notation.

use std::fmt;

use crate::error::{Error, Result};

/// Half-open interval of token indices `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

/// A constituent. Leaves are preterminals: they carry the surface word and
/// cover exactly one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub label: String,
    pub span: Span,
    pub children: Vec<ParseTree>,
    pub word: Option<String>,
}

/// Child-index path from the root to a node. The root is the empty path.
pub type NodePath = Vec<usize>;

impl ParseTree {
    pub fn leaf(label: impl Into<String>, word: impl Into<String>, index: usize) -> Self {
        ParseTree {
            label: label.into(),
            span: Span::new(index, index + 1),
            children: Vec::new(),
            word: Some(word.into()),
        }
    }

    /// Builds an internal node; the span is taken from the first and last child.
    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> Self {
        let start = children.first().map_or(0, |c| c.span.start);
        let end = children.last().map_or(0, |c| c.span.end);
        ParseTree {
            label: label.into(),
            span: Span::new(start, end),
            children,
            word: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(ParseTree::leaf_count).sum()
        }
    }

    /// Surface words in left-to-right order.
    pub fn words(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_words(&mut out);
        out
    }

    fn collect_words<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.word {
            Some(w) => out.push(w),
            None => self.children.iter().for_each(|c| c.collect_words(out)),
        }
    }

    pub fn get(&self, path: &[usize]) -> Option<&ParseTree> {
        let mut node = self;
        for &i in path {
            node = node.children.get(i)?;
        }
        Some(node)
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut ParseTree> {
        let mut node = self;
        for &i in path {
            node = node.children.get_mut(i)?;
        }
        Some(node)
    }

    /// Pre-order traversal yielding each node with its path.
    pub fn preorder(&self) -> Vec<(NodePath, &ParseTree)> {
        let mut out = Vec::new();
        let mut stack: Vec<(NodePath, &ParseTree)> = vec![(Vec::new(), self)];
        while let Some((path, node)) = stack.pop() {
            for (i, child) in node.children.iter().enumerate().rev() {
                let mut p = path.clone();
                p.push(i);
                stack.push((p, child));
            }
            out.push((path, node));
        }
        out
    }

    /// Reassigns spans so leaves are numbered consecutively from `start`.
    /// Returns the end offset.
    pub fn renumber(&mut self, start: usize) -> usize {
        if self.is_leaf() {
            self.span = Span::new(start, start + 1);
            return start + 1;
        }
        let mut pos = start;
        for child in &mut self.children {
            pos = child.renumber(pos);
        }
        self.span = Span::new(start, pos);
        pos
    }

    /// Drops internal nodes that lost all of their children.
    pub fn prune_empty(&mut self) {
        for child in &mut self.children {
            child.prune_empty();
        }
        self.children.retain(|c| c.is_leaf() && c.word.is_some() || !c.children.is_empty());
    }

    /// Checks the tiling invariant: children are contiguous, ordered and
    /// cover the parent exactly; leaves cover a single token.
    pub fn check_tiling(&self) -> Result<()> {
        self.check_node(self.span.start)?;
        Ok(())
    }

    fn check_node(&self, expected_start: usize) -> Result<()> {
        if self.span.start != expected_start {
            return Err(Error::InvalidTree(format!(
                "node {} starts at {} but {} was expected",
                self.label, self.span.start, expected_start
            )));
        }
        if self.is_leaf() {
            if self.word.is_none() {
                return Err(Error::InvalidTree(format!("internal node {} has no children", self.label)));
            }
            if self.span.len() != 1 {
                return Err(Error::InvalidTree(format!("leaf {} spans {}", self.label, self.span)));
            }
            return Ok(());
        }
        if self.word.is_some() {
            return Err(Error::InvalidTree(format!("internal node {} carries a word", self.label)));
        }
        let mut pos = self.span.start;
        for child in &self.children {
            child.check_node(pos)?;
            pos = child.span.end;
        }
        if pos != self.span.end {
            return Err(Error::InvalidTree(format!(
                "children of {} end at {} but the node ends at {}",
                self.label, pos, self.span.end
            )));
        }
        Ok(())
    }

    /// Canonical single-line bracketed form.
    pub fn to_bracketed(&self) -> String {
        let mut out = String::new();
        self.write_bracketed(&mut out);
        out
    }

    fn write_bracketed(&self, out: &mut String) {
        out.push('(');
        out.push_str(&self.label);
        match &self.word {
            Some(w) => {
                out.push(' ');
                out.push_str(w);
            }
            None => {
                for child in &self.children {
                    out.push(' ');
                    child.write_bracketed(out);
                }
            }
        }
        out.push(')');
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracketed())
    }
}

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Option<(usize, Tok<'a>)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= bytes.len() {
            return None;
        }
        let start = self.pos;
        match bytes[start] {
            b'(' => {
                self.pos += 1;
                Some((start, Tok::Open))
            }
            b')' => {
                self.pos += 1;
                Some((start, Tok::Close))
            }
            _ => {
                while self.pos < bytes.len()
                    && !bytes[self.pos].is_ascii_whitespace()
                    && bytes[self.pos] != b'('
                    && bytes[self.pos] != b')'
                {
                    self.pos += 1;
                }
                Some((start, Tok::Atom(&self.src[start..self.pos])))
            }
        }
    }
}

/// Parses a single-rooted bracketed tree such as
/// `(S (NP (DT the) (NN cat)) (VP (VBD sat)))`.
///
/// An unlabeled outer bracket wrapping a single tree, as emitted by some
/// treebank tools (`( (S ...) )`), is unwrapped.
pub fn parse_bracketed_tree(source: &str) -> Result<ParseTree> {
    if source.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut lexer = Lexer { src: source, pos: 0 };
    let mut next_leaf = 0;
    let tree = match lexer.next() {
        Some((_, Tok::Open)) => parse_node(&mut lexer, &mut next_leaf)?,
        Some((offset, _)) => return Err(parse_err(offset, "expected '('")),
        None => return Err(Error::EmptyInput),
    };
    if let Some((offset, _)) = lexer.next() {
        return Err(parse_err(offset, "trailing input after the root bracket"));
    }
    Ok(tree)
}

fn parse_err(offset: usize, message: &str) -> Error {
    Error::TreeParse {
        offset,
        message: message.to_string(),
    }
}

// Called after the opening bracket has been consumed.
fn parse_node(lexer: &mut Lexer<'_>, next_leaf: &mut usize) -> Result<ParseTree> {
    let label = match lexer.next() {
        Some((_, Tok::Atom(label))) => label.to_string(),
        Some((_, Tok::Open)) => {
            // Unlabeled wrapper around a single tree.
            let inner = parse_node(lexer, next_leaf)?;
            return match lexer.next() {
                Some((_, Tok::Close)) => Ok(inner),
                Some((offset, _)) => Err(parse_err(offset, "unlabeled bracket must wrap exactly one tree")),
                None => Err(parse_err(lexer.src.len(), "unexpected end of input")),
            };
        }
        Some((offset, Tok::Close)) => return Err(parse_err(offset, "empty bracket")),
        None => return Err(parse_err(lexer.src.len(), "unexpected end of input")),
    };
    match lexer.next() {
        Some((_, Tok::Atom(word))) => {
            let leaf = ParseTree::leaf(label, word, *next_leaf);
            *next_leaf += 1;
            match lexer.next() {
                Some((_, Tok::Close)) => Ok(leaf),
                Some((offset, _)) => Err(parse_err(offset, "a word must be the only child of its preterminal")),
                None => Err(parse_err(lexer.src.len(), "unexpected end of input")),
            }
        }
        Some((_, Tok::Open)) => {
            let mut children = vec![parse_node(lexer, next_leaf)?];
            loop {
                match lexer.next() {
                    Some((_, Tok::Open)) => children.push(parse_node(lexer, next_leaf)?),
                    Some((_, Tok::Close)) => break,
                    Some((offset, Tok::Atom(_))) => {
                        return Err(parse_err(offset, "bare word mixed with bracketed children"))
                    }
                    None => return Err(parse_err(lexer.src.len(), "unexpected end of input")),
                }
            }
            Ok(ParseTree::node(label, children))
        }
        Some((offset, Tok::Close)) => Err(parse_err(offset, "constituent without children")),
        None => Err(parse_err(lexer.src.len(), "unexpected end of input")),
    }
}
