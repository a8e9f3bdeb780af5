#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use edsimp::edits::{base_label, gen_substitution, Phrase};
use edsimp::ingest::NodePath;
use edsimp::resources::build_bundle;
use edsimp::scoring::Scorer;
use edsimp::{
    load_corpus, AnnotatedSentence, AnnotatedToken, EditConfig, OpKind, ParseTree, ResourceBundle, ScoringConfig,
    SearchConfig, Span,
};
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn toy_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/toy")
}

pub fn toy_embedding_paths() -> Vec<PathBuf> {
    vec![toy_dir().join("embeddings-a.txt"), toy_dir().join("embeddings-b.txt")]
}

pub fn toy_simple() -> Vec<AnnotatedSentence> {
    load_corpus(toy_dir().join("simple.jsonl")).unwrap()
}

pub fn toy_complex() -> Vec<AnnotatedSentence> {
    load_corpus(toy_dir().join("complex.jsonl")).unwrap()
}

pub fn toy_bundle() -> ResourceBundle {
    build_bundle(&toy_simple(), &toy_embedding_paths(), &toy_dir().join("synonyms.tsv"), 3).unwrap()
}

/// Every distinct annotated token of the toy corpora.
pub fn toy_vocabulary() -> Vec<AnnotatedToken> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in toy_complex().iter().chain(toy_simple().iter()) {
        for t in s.tokens() {
            if seen.insert(t.clone()) {
                out.push(t.clone());
            }
        }
    }
    out
}

const LABELS: [&str; 10] = ["S", "NP", "VP", "PP", "ADJP", "ADVP", "SBAR", "NP-SBJ", "QP", "FRAG"];

fn random_node<R: Rng>(rng: &mut R, tokens: &[AnnotatedToken], start: usize, end: usize, depth: usize) -> ParseTree {
    if end - start == 1 && rng.random_bool(0.6) {
        return ParseTree::leaf(tokens[start].pos.clone(), tokens[start].text.clone(), start);
    }
    let label = *LABELS.choose(rng).unwrap();
    if depth >= 3 || end - start == 1 {
        let leaves = (start..end).map(|i| ParseTree::leaf(tokens[i].pos.clone(), tokens[i].text.clone(), i)).collect();
        return ParseTree::node(label, leaves);
    }
    let parts = rng.random_range(2..=3usize).min(end - start);
    let mut cuts: Vec<usize> = (start + 1..end).collect();
    cuts.sort_by_key(|_| rng.random::<u32>());
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![start];
    bounds.extend(cuts);
    bounds.push(end);
    let children = bounds.windows(2).map(|w| random_node(rng, tokens, w[0], w[1], depth + 1)).collect();
    ParseTree::node(label, children)
}

/// A random sentence of `min_len..=max_len` tokens drawn from `vocab`, with a
/// random constituency tree at most four levels deep.
pub fn random_sentence<R: Rng>(rng: &mut R, vocab: &[AnnotatedToken], min_len: usize, max_len: usize) -> AnnotatedSentence {
    let n = rng.random_range(min_len..=max_len);
    let tokens: Vec<AnnotatedToken> = (0..n).map(|_| vocab.choose(rng).unwrap().clone()).collect();
    let tree = random_node(rng, &tokens, 0, n, 0);
    let tree = if tree.is_leaf() { ParseTree::node("S", vec![tree]) } else { tree };
    AnnotatedSentence::new(tokens, tree).unwrap()
}

/// Phrases with their parent, found by a direct walk of the tree.
fn oracle_phrases(tree: &ParseTree, config: &EditConfig) -> Vec<(Span, Option<usize>, NodePath)> {
    fn walk(node: &ParseTree, path: NodePath, parent: Option<usize>, ids: &mut usize, config: &EditConfig, out: &mut Vec<(Span, Option<usize>, NodePath)>) {
        let id = *ids;
        *ids += 1;
        if !path.is_empty() && config.phrase_tags.contains(base_label(&node.label)) {
            out.push((node.span, parent, path.clone()));
        }
        for (i, c) in node.children.iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            walk(c, p, Some(id), ids, config, out);
        }
    }
    let mut out = Vec::new();
    walk(tree, Vec::new(), None, &mut 0, config, &mut out);
    out
}

fn flat(tokens: Vec<AnnotatedToken>) -> AnnotatedSentence {
    let leaves = tokens.iter().enumerate().map(|(i, t)| ParseTree::leaf(t.pos.clone(), t.text.clone(), i)).collect();
    AnnotatedSentence::new(tokens, ParseTree::node("S", leaves)).unwrap()
}

pub struct OraclePick {
    pub texts: Vec<String>,
    pub kind: OpKind,
    pub ratio: f64,
    pub total: f64,
}

/// Exhaustive enumeration of every operator's output over token index
/// lists, scored candidate by candidate. Substitutes come from the library
/// generator since their lookup is a table query, not a search.
pub fn oracle_pick(
    current: &AnnotatedSentence,
    original: &AnnotatedSentence,
    resources: &ResourceBundle,
    scoring: &ScoringConfig,
    search: &SearchConfig,
) -> Option<OraclePick> {
    let scorer = Scorer::new(original, resources, *scoring);
    let here = scorer.score(current).total;
    if here == 0.0 {
        return None;
    }
    let n = current.len();
    let toks = current.tokens();
    let phrases = oracle_phrases(current.tree(), &search.edit);
    let mut cands: Vec<(OpKind, Vec<AnnotatedToken>)> = Vec::new();
    if search.ops.contains(OpKind::Removal) {
        for (span, _, _) in &phrases {
            if span.len() > 1 && span.len() < n {
                let t = (0..n).filter(|i| !(span.start..span.end).contains(i)).map(|i| toks[i].clone()).collect();
                cands.push((OpKind::Removal, t));
            }
        }
    }
    if search.ops.contains(OpKind::Extraction) {
        for (span, _, _) in &phrases {
            cands.push((OpKind::Extraction, toks[span.start..span.end].to_vec()));
        }
    }
    if search.ops.contains(OpKind::Reordering) {
        let mut seen = HashSet::new();
        let identity: Vec<usize> = (0..n).collect();
        for (m, mp, _) in &phrases {
            for (a, ap, _) in &phrases {
                if m.start < a.end && a.start < m.end || mp != ap {
                    continue;
                }
                for after in [false, true] {
                    let rest: Vec<usize> = (0..n).filter(|i| !(m.start..m.end).contains(i)).collect();
                    let at = if after { a.end } else { a.start };
                    let pos = rest.iter().position(|&i| i >= at).unwrap_or(rest.len());
                    let mut order = rest[..pos].to_vec();
                    order.extend(m.start..m.end);
                    order.extend_from_slice(&rest[pos..]);
                    if order != identity && seen.insert(order.clone()) {
                        cands.push((OpKind::Reordering, order.iter().map(|&i| toks[i].clone()).collect()));
                    }
                }
            }
        }
    }
    if search.ops.contains(OpKind::Substitution) {
        let lib_phrases: Vec<Phrase> = phrases
            .iter()
            .map(|(span, _, path)| Phrase {
                path: path.clone(),
                span: *span,
                label: current.tree().get(path).unwrap().label.clone(),
            })
            .collect();
        for c in gen_substitution(current, &lib_phrases, resources, &search.edit) {
            cands.push((OpKind::Substitution, c.sentence.tokens().to_vec()));
        }
    }
    let mut seen = HashSet::new();
    let mut best: Option<OraclePick> = None;
    for (kind, tokens) in cands {
        let texts: Vec<String> = tokens.iter().map(|t| t.text.clone()).collect();
        if !seen.insert(texts.clone()) {
            continue;
        }
        let total = scorer.score(&flat(tokens)).total;
        let ratio = total / here;
        if total == 0.0 || ratio <= search.thresholds.get(kind) {
            continue;
        }
        if best.as_ref().is_none_or(|b| total > b.total) {
            best = Some(OraclePick { texts, kind, ratio, total });
        }
    }
    best
}

/// Structural checks on an edited sentence against its source. Returns a
/// description of the first violation.
pub fn structural_violation(source: &AnnotatedSentence, edited: &AnnotatedSentence) -> Option<String> {
    let tree = edited.tree();
    if let Err(e) = tree.check_tiling() {
        return Some(format!("tiling: {e}"));
    }
    if tree.span != Span::new(0, edited.len()) {
        return Some(format!("root span {} for {} tokens", tree.span, edited.len()));
    }
    if tree.words() != edited.texts() {
        return Some("tree leaves differ from tokens".into());
    }
    let mut pool: Vec<&str> = source.tokens().iter().filter(|t| t.is_entity).map(|t| t.text.as_str()).collect();
    for t in edited.tokens().iter().filter(|t| t.is_entity) {
        match pool.iter().position(|w| *w == t.text) {
            Some(i) => {
                pool.swap_remove(i);
            }
            None => return Some(format!("entity token {:?} altered or invented", t.text)),
        }
    }
    None
}
