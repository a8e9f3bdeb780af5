//! Lexical substitution of the most complex word in each phrase.

use std::collections::HashSet;

use super::{Candidate, EditConfig, EditOp, Phrase};
use crate::ingest::{normalize, AnnotatedSentence, IdfTable, ParseTree};
use crate::resources::ResourceBundle;

const SUFFIXES: [&str; 5] = ["ing", "ed", "es", "s", "e"];

/// Strips one inflectional ending (`ing`, `ed`, `es`, `s`, `e`), keeping at
/// least two characters.
pub fn stem(word: &str) -> String {
    let lower = normalize(word);
    for suffix in SUFFIXES {
        if let Some(rest) = lower.strip_suffix(suffix) {
            if rest.chars().count() >= 2 {
                return rest.to_string();
            }
        }
    }
    lower
}

/// Two words count as inflections of each other when their stems are equal
/// or one stem is a prefix of the other.
pub fn is_inflection(a: &str, b: &str) -> bool {
    let (sa, sb) = (stem(a), stem(b));
    sa == sb || sa.starts_with(&sb) || sb.starts_with(&sa)
}

/// Index of the non-entity token with the highest idf in `phrase`; the
/// leftmost wins ties. `None` when every token is an entity.
pub fn select_complex_word(sentence: &AnnotatedSentence, phrase: &Phrase, idf: &IdfTable) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in phrase.span.start..phrase.span.end {
        let token = &sentence.tokens()[i];
        if token.is_entity {
            continue;
        }
        let score = idf.idf(&token.text);
        if best.is_none_or(|(_, b)| score > b) {
            best = Some((i, score));
        }
    }
    best.map(|(i, _)| i)
}

fn match_case(template: &str, word: &str) -> String {
    let starts_upper = template.chars().next().is_some_and(char::is_uppercase);
    if !starts_upper {
        return word.to_string();
    }
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn replace_leaf(tree: &mut ParseTree, index: usize, word: &str) {
    if tree.is_leaf() {
        if tree.span.start == index {
            tree.word = Some(word.to_string());
        }
        return;
    }
    for child in &mut tree.children {
        if child.span.start <= index && index < child.span.end {
            replace_leaf(child, index, word);
        }
    }
}

/// Synonym-table entries followed by the nearest embedding neighbours from
/// every table, without repeats.
fn substitute_pool(word: &str, resources: &ResourceBundle, config: &EditConfig) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut pool = Vec::new();
    let from_synonyms = resources.synonyms.get(word).map(str::to_string);
    let from_embeddings = resources
        .embeddings
        .iter()
        .flat_map(|table| table.nearest(word, config.k_neighbors))
        .map(|(w, _)| w.to_string());
    for candidate in from_synonyms.chain(from_embeddings) {
        if seen.insert(candidate.clone()) {
            pool.push(candidate);
        }
    }
    pool
}

/// Highest embedding cosine between the two words over all tables that know
/// both; `None` if no table does.
fn best_similarity(a: &str, b: &str, resources: &ResourceBundle) -> Option<f64> {
    resources
        .embeddings
        .iter()
        .filter_map(|t| t.similarity(a, b))
        .max_by(f64::total_cmp)
}

/// For each phrase, replaces its most complex word with every substitute
/// that has a lower idf, is not an inflection, is similar enough in
/// embedding space and attested with the same POS and dependency tags.
pub fn gen_substitution(
    sentence: &AnnotatedSentence,
    phrases: &[Phrase],
    resources: &ResourceBundle,
    config: &EditConfig,
) -> Vec<Candidate> {
    let mut done: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    for phrase in phrases {
        let Some(index) = select_complex_word(sentence, phrase, &resources.idf) else {
            continue;
        };
        if !done.insert(index) {
            continue;
        }
        let token = &sentence.tokens()[index];
        let word = normalize(&token.text);
        let word_idf = resources.idf.idf(&word);
        for substitute in substitute_pool(&word, resources, config) {
            if substitute == word
                || resources.idf.idf(&substitute) >= word_idf
                || is_inflection(&word, &substitute)
                || !best_similarity(&word, &substitute, resources).is_some_and(|c| c > config.sub_similarity_threshold)
                || !resources.lexicon.has_tags(&substitute, &token.pos, &token.dep)
            {
                continue;
            }
            let surface = match_case(&token.text, &substitute);
            let mut tokens = sentence.tokens().to_vec();
            tokens[index].text = surface.clone();
            let mut tree = sentence.tree().clone();
            replace_leaf(&mut tree, index, &surface);
            let edited = AnnotatedSentence::new(tokens, tree).expect("substitution keeps the tree tiled");
            out.push(Candidate::new(
                edited,
                EditOp::Substitution {
                    index,
                    original: token.text.clone(),
                    substitute: surface,
                },
            ));
        }
    }
    out
}
