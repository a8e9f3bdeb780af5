//! Fixtures shared by the benchmarks.

use std::path::PathBuf;

use edsimp::{load_corpus, load_bundle, AnnotatedSentence, ResourceBundle};

pub fn toy_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/toy")
}

pub fn toy_bundle() -> ResourceBundle {
    load_bundle(toy_dir().join("bundle")).expect("toy bundle")
}

pub fn toy_corpus() -> Vec<AnnotatedSentence> {
    load_corpus(toy_dir().join("complex.jsonl")).expect("toy corpus")
}
