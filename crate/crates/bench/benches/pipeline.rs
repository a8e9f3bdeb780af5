use std::fs;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use edsimp::metrics::records_from_lines;
use edsimp::scoring::Scorer;
use edsimp::search::{generate_candidates, simplify};
use edsimp::{evaluate, ScoringConfig, SearchConfig};
use edsimp_bench::{toy_bundle, toy_corpus, toy_dir};

fn scoring(c: &mut Criterion) {
    let bundle = toy_bundle();
    let corpus = toy_corpus();
    let scorer = Scorer::new(&corpus[0], &bundle, ScoringConfig::newsela());
    c.bench_function("score_sentence", |b| b.iter(|| scorer.score(black_box(&corpus[0]))));
    c.bench_function("lm_logprob", |b| b.iter(|| bundle.lm.logprob(black_box(corpus[0].tokens()))));
}

fn candidates(c: &mut Criterion) {
    let bundle = toy_bundle();
    let corpus = toy_corpus();
    let config = SearchConfig::default();
    c.bench_function("generate_candidates", |b| b.iter(|| generate_candidates(black_box(&corpus[0]), &bundle, &config)));
}

fn search(c: &mut Criterion) {
    let bundle = toy_bundle();
    let corpus = toy_corpus();
    let (scoring, config) = (ScoringConfig::newsela(), SearchConfig::default());
    c.bench_function("simplify_showcase", |b| b.iter(|| simplify(black_box(&corpus[0]), &bundle, &scoring, &config)));
    c.bench_function("simplify_corpus", |b| {
        b.iter(|| corpus.iter().map(|s| simplify(s, &bundle, &scoring, &config).unwrap().final_sentence.len()).sum::<usize>())
    });
}

fn metrics(c: &mut Criterion) {
    let read = |f: &str| fs::read_to_string(toy_dir().join(f)).unwrap();
    let refs = [read("refs-0.txt"), read("refs-1.txt")];
    let records = records_from_lines(&read("complex.txt"), &read("refs-0.txt"), &refs).unwrap();
    c.bench_function("evaluate", |b| b.iter(|| evaluate(black_box(&records)).unwrap()));
}

criterion_group!(benches, scoring, candidates, search, metrics);
criterion_main!(benches);
