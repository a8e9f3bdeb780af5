use std::collections::BTreeMap;

use super::*;
use crate::ingest::{parse_bracketed_tree, AnnotatedToken, EmbeddingTable, IdfTable, SynonymTable, TagLexicon};
use crate::lm::NGramBackend;
use crate::resources::ResourceBundle;

fn parsed(src: &str) -> AnnotatedSentence {
    let tree = parse_bracketed_tree(src).unwrap();
    let tokens = tree
        .preorder()
        .into_iter()
        .filter(|(_, n)| n.is_leaf())
        .map(|(_, n)| AnnotatedToken::new(n.word.clone().unwrap(), n.label.clone(), "dep", n.label == "NNP"))
        .collect();
    AnnotatedSentence::new(tokens, tree).unwrap()
}

fn tags() -> BTreeSet<String> {
    EditConfig::default().phrase_tags
}

const CAT: &str = "(S (NP (DT The) (NN cat)) (VP (VBD sat) (PP (IN on) (NP (DT the) (NN mat)))))";

#[test]
fn base_labels() {
    assert_eq!(base_label("NP-SBJ-1"), "NP");
    assert_eq!(base_label("PP=2"), "PP");
    assert_eq!(base_label("-NONE-"), "-NONE-");
    assert_eq!(base_label("S"), "S");
}

#[test]
fn phrases_in_preorder_without_root() {
    let s = parsed(CAT);
    let p = detect_phrases(s.tree(), &tags());
    let got: Vec<(&str, usize, usize)> = p.iter().map(|p| (p.label.as_str(), p.span.start, p.span.end)).collect();
    assert_eq!(got, vec![("NP", 0, 2), ("VP", 2, 6), ("PP", 3, 6), ("NP", 4, 6)]);
}

#[test]
fn function_tags_do_not_hide_phrases() {
    let s = parsed("(S (NP-SBJ (DT The) (NN cat)) (VP (VBD sat)))");
    let p = detect_phrases(s.tree(), &tags());
    assert_eq!(p.len(), 2);
}

#[test]
fn removal_candidates() {
    let s = parsed(CAT);
    let c = gen_removal(&s, &detect_phrases(s.tree(), &tags()));
    let texts: Vec<String> = c.iter().map(|c| c.sentence.text()).collect();
    assert_eq!(texts, vec!["sat on the mat", "The cat", "The cat sat", "The cat sat on"]);
    assert!(matches!(c[2].op, EditOp::Removal { start: 3, end: 6, .. }));
}

#[test]
fn removal_skips_single_tokens() {
    let s = parsed("(S (NP (NNP Ann)) (VP (VBD left) (ADVP (RB early))))");
    let c = gen_removal(&s, &detect_phrases(s.tree(), &tags()));
    let texts: Vec<String> = c.iter().map(|c| c.sentence.text()).collect();
    assert_eq!(texts, vec!["Ann"]);
}

#[test]
fn extraction_candidates() {
    let s = parsed(CAT);
    let c = gen_extraction(&s, &detect_phrases(s.tree(), &tags()));
    let texts: Vec<String> = c.iter().map(|c| c.sentence.text()).collect();
    assert_eq!(texts, vec!["The cat", "sat on the mat", "on the mat", "the mat"]);
    assert_eq!(c[2].sentence.tree().span, Span::new(0, 3));
}

#[test]
fn sibling_reorderings_of_three_phrases() {
    let s = parsed("(S (NP (DT a) (NN b)) (PP (IN c) (NN d)) (ADVP (RB e) (RB f)))");
    let c = gen_reordering(&s, &detect_phrases(s.tree(), &tags()), ReorderScope::Siblings);
    let texts: Vec<String> = c.iter().map(|c| c.sentence.text()).collect();
    assert_eq!(texts, vec!["c d a b e f", "c d e f a b", "a b e f c d", "e f a b c d"]);
    for cand in &c {
        cand.sentence.tree().check_tiling().unwrap();
        assert_eq!(cand.sentence.tree().words(), cand.sentence.texts());
    }
}

#[test]
fn reordering_scope_all_crosses_levels() {
    let s = parsed(CAT);
    let phrases = detect_phrases(s.tree(), &tags());
    let sib = gen_reordering(&s, &phrases, ReorderScope::Siblings);
    let all = gen_reordering(&s, &phrases, ReorderScope::All);
    assert_eq!(sib.iter().map(|c| c.sentence.text()).collect::<Vec<_>>(), vec!["sat on the mat The cat"]);
    assert!(all.len() > sib.len());
    assert!(all.iter().any(|c| c.sentence.text() == "on the mat The cat sat"));
}

#[test]
fn reordering_keeps_annotations_with_their_words() {
    let s = parsed("(S (NP (NNP Ann) (NNP Lee)) (VP (VBD left) (ADVP (RB very) (RB early))))");
    let c = gen_reordering(&s, &detect_phrases(s.tree(), &tags()), ReorderScope::Siblings);
    let moved = &c[0].sentence;
    assert_eq!(moved.text(), "left very early Ann Lee");
    assert!(moved.tokens()[3].is_entity && moved.tokens()[4].is_entity);
    assert_eq!(moved.tokens()[0].pos, "VBD");
}

#[test]
fn stems_and_inflections() {
    assert_eq!(stem("building"), "build");
    assert_eq!(stem("builds"), "build");
    assert_eq!(stem("Used"), "us");
    assert_eq!(stem("is"), "is");
    assert!(is_inflection("construct", "constructing"));
    assert!(is_inflection("house", "houses"));
    assert!(!is_inflection("build", "construct"));
}

fn idf(pairs: &[(&str, f64)]) -> IdfTable {
    IdfTable::new(pairs.iter().map(|(w, v)| (w.to_string(), *v)).collect::<BTreeMap<_, _>>(), 9.0).unwrap()
}

#[test]
fn complex_word_is_rarest_non_entity() {
    let s = parsed("(S (NP (NNP Seattle) (NN reporter)) (VP (VBD wrote) (NN notes)))");
    let table = idf(&[("seattle", 8.0), ("reporter", 3.0), ("wrote", 3.0), ("notes", 2.0)]);
    let phrases = detect_phrases(s.tree(), &tags());
    assert_eq!(select_complex_word(&s, &phrases[0], &table), Some(1));
    assert_eq!(select_complex_word(&s, &phrases[1], &table), Some(2));
    let only = parsed("(S (NP (NNP Seattle)) (VP (VBD rains)))");
    let p = detect_phrases(only.tree(), &tags());
    assert_eq!(select_complex_word(&only, &p[0], &table), None);
}

fn bundle(synonyms: &[(&str, &str)], lexicon: &[(&str, &str)]) -> ResourceBundle {
    let corpus = [parsed("(S (NP (DT the) (NN cat)) (VP (VBD sat)))")];
    let lm = NGramBackend::train(&corpus, 2).unwrap();
    let (unigrams, _) = crate::ingest::build_frequency_tables(&corpus).unwrap();
    let idf = idf(&[
        ("constructing", 6.0),
        ("building", 2.0),
        ("erecting", 7.0),
        ("constructs", 1.0),
        ("banana", 1.0),
        ("making", 1.5),
        ("parks", 2.0),
    ]);
    let emb = EmbeddingTable::parse(
        "constructing 1 0 0\nbuilding 0.9 0.1 0\nerecting 0.95 0.05 0\nconstructs 1 0.01 0\nbanana 0 0 1\nmaking 0.2 1 0\nparks 0 1 1\n",
        "emb",
    )
    .unwrap();
    let mut syn = SynonymTable::default();
    for (a, b) in synonyms {
        syn.insert(a, b);
    }
    let mut lex = TagLexicon::default();
    for (w, p) in lexicon {
        lex.insert(w, p, "dep");
    }
    ResourceBundle::with_ngram(lm, unigrams, idf, vec![emb], syn, lex).unwrap()
}

fn substitutes(sentence: &AnnotatedSentence, resources: &ResourceBundle) -> Vec<String> {
    let phrases = detect_phrases(sentence.tree(), &tags());
    gen_substitution(sentence, &phrases, resources, &EditConfig::default())
        .into_iter()
        .map(|c| match c.op {
            EditOp::Substitution { substitute, .. } => substitute,
            _ => unreachable!(),
        })
        .collect()
}

#[test]
fn substitution_filters() {
    let s = parsed("(S (VP (VBG constructing) (NP (NNS parks))))");
    let all_tagged = [("building", "VBG"), ("erecting", "VBG"), ("constructs", "VBG"), ("banana", "VBG"), ("making", "VBG")];
    // building passes every condition; erecting has a higher idf, constructs
    // is an inflection, banana and making are too dissimilar.
    let r = bundle(&[("constructing", "banana")], &all_tagged);
    assert_eq!(substitutes(&s, &r), vec!["building"]);
    // Without lexicon support for VBG the substitute is dropped.
    let r = bundle(&[], &[("building", "NN")]);
    assert!(substitutes(&s, &r).is_empty());
}

#[test]
fn substitution_matches_case_and_keeps_tree_in_sync() {
    let s = parsed("(S (VP (VBG Constructing) (NP (NNS parks))))");
    let r = bundle(&[], &[("building", "VBG")]);
    let phrases = detect_phrases(s.tree(), &tags());
    let c = gen_substitution(&s, &phrases, &r, &EditConfig::default());
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].sentence.text(), "Building parks");
    assert_eq!(c[0].sentence.tree().words(), vec!["Building", "parks"]);
    assert_eq!(c[0].sentence.tokens()[0].pos, "VBG");
}

#[test]
fn opset_parsing() {
    let ops: OpSet = "rm+ex+ls".parse().unwrap();
    assert!(ops.contains(OpKind::Substitution));
    assert!(!ops.contains(OpKind::Reordering));
    assert_eq!(ops.to_string(), "rm+ex+ls");
    assert_eq!("ro+rm".parse::<OpSet>().unwrap().to_string(), "rm+ro");
    assert!("rm+zz".parse::<OpSet>().is_err());
    assert_eq!(OpSet::all().to_string(), "rm+ex+ro+ls");
}

#[test]
fn edit_ops_serialize_with_kind_tag() {
    let op = EditOp::Substitution {
        index: 3,
        original: "constructing".into(),
        substitute: "building".into(),
    };
    let json = serde_json::to_string(&op).unwrap();
    assert!(json.contains("\"kind\":\"substitution\""));
    assert_eq!(serde_json::from_str::<EditOp>(&json).unwrap(), op);
}
