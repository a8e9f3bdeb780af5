//! Frozen micro-examples for SARI and BLEU. Each expected value is written
//! out as its per-n arithmetic so a change in counting conventions shows up
//! as a specific wrong fraction.

use edsimp::metrics::{bleu, evaluate, geometric_mean, sari, sari_with, SariDelete, BLEU_EPSILON};
use edsimp::EvalRecord;
use proptest::prelude::*;

const TOL: f64 = 1e-6;

fn rec(src: &str, out: &str, refs: &[&str]) -> EvalRecord {
    EvalRecord::from_text(src, out, refs).unwrap()
}

fn f1(p: f64, r: f64) -> f64 {
    2.0 * p * r / (p + r)
}

fn close(got: f64, want: f64, what: &str) {
    assert!((got - want).abs() < TOL, "{what}: got {got}, want {want}");
}

#[test]
fn sari_identity() {
    let s = sari(&[rec("the cat sat down", "the cat sat down", &["the cat sat down"])], 4).unwrap();
    close(s.sari, 100.0, "sari");
    close(s.add, 100.0, "add");
    close(s.delete, 100.0, "delete");
    close(s.keep, 100.0, "keep");
}

#[test]
fn sari_copy_against_shorter_reference_bigrams() {
    // n=1: nothing added or deleted by either side except the reference
    // dropping b. keep P = 2/3, R = 1.
    // n=2: the reference adds bigram "a c", the output adds nothing; keep
    // has no overlap with the reference.
    let add = (1.0 + 0.0) / 2.0;
    let delete = (0.0 + 0.0) / 2.0;
    let keep = (f1(2.0 / 3.0, 1.0) + 0.0) / 2.0;
    let s = sari(&[rec("a b c", "a b c", &["a c"])], 2).unwrap();
    close(s.add, 100.0 * add, "add");
    close(s.delete, 100.0 * delete, "delete");
    close(s.keep, 100.0 * keep, "keep");
    close(s.sari, 100.0 * (add + delete + keep) / 3.0, "sari");
    close(s.sari, 30.0, "sari literal");
}

#[test]
fn sari_total_rewrite() {
    // Output shares nothing with the source: add has no reference support,
    // keep is empty. Everything is deleted; the reference deletes the
    // n-grams touching "e", one per order.
    let delete = (f1(1.0 / 5.0, 1.0) + f1(1.0 / 4.0, 1.0) + f1(1.0 / 3.0, 1.0) + f1(1.0 / 2.0, 1.0)) / 4.0;
    let s = sari(&[rec("a b c d e", "x y z w", &["a b c d"])], 4).unwrap();
    close(s.add, 0.0, "add");
    close(s.keep, 0.0, "keep");
    close(s.delete, 100.0 * delete, "delete");
    close(s.delete, 47.5, "delete literal");
    close(s.sari, 15.833333, "sari");
}

#[test]
fn sari_two_references() {
    // Source and output counts are doubled (two references); reference
    // counts are summed.
    // n=1 keep: P = (1/2 + 1 + 1)/3, R = 1.   delete: P = (1/2 + 1 + 1)/3, R = (1/3 + 1 + 1)/3
    // n=2 keep: P = (1/2 + 1)/2,     R = 1.   delete: P = 1, R = 3/4
    // n=3 keep: P = 1/2,             R = 1.   delete: P = 1, R = 3/4
    // n=4 nothing survives in output or references: keep and add are 1,
    // delete is 1.
    // add: the only reference-side addition is "a"-initial n-grams, never
    // produced, so 0 for n = 1..3.
    let keep = (f1(5.0 / 6.0, 1.0) + f1(3.0 / 4.0, 1.0) + f1(1.0 / 2.0, 1.0) + 1.0) / 4.0;
    let delete = (f1(5.0 / 6.0, 7.0 / 9.0) + f1(1.0, 3.0 / 4.0) + f1(1.0, 3.0 / 4.0) + 1.0) / 4.0;
    let add = 0.25;
    let s = sari(&[rec("the cat sat on the mat", "the cat sat", &["the cat sat", "a cat sat"])], 4).unwrap();
    close(s.keep, 100.0 * keep, "keep");
    close(s.delete, 100.0 * delete, "delete");
    close(s.add, 100.0 * add, "add");
    close(s.sari, 66.264865, "sari");
    close(s.keep, 85.822511, "keep literal");
    close(s.delete, 87.972085, "delete literal");
}

#[test]
fn sari_copy_against_truncated_reference() {
    // Nothing deleted while the reference deletes one n-gram per order;
    // keep precision is (k-1)/k for k output n-grams.
    let keep = (f1(4.0 / 5.0, 1.0) + f1(3.0 / 4.0, 1.0) + f1(2.0 / 3.0, 1.0) + f1(1.0 / 2.0, 1.0)) / 4.0;
    let s = sari(&[rec("a b c d e", "a b c d e", &["a b c d"])], 4).unwrap();
    close(s.add, 100.0, "add");
    close(s.delete, 0.0, "delete");
    close(s.keep, 100.0 * keep, "keep");
    close(s.sari, 60.105820, "sari");
}

#[test]
fn sari_precision_only_delete() {
    let r = [rec("the cat sat on the mat", "the cat sat", &["the cat sat", "a cat sat"])];
    let s = sari_with(&r, 4, SariDelete::Precision).unwrap();
    let delete = (5.0 / 6.0 + 1.0 + 1.0 + 1.0) / 4.0;
    close(s.delete, 100.0 * delete, "delete");
}

#[test]
fn sari_is_mean_of_sentences() {
    let a = rec("a b c", "a b c", &["a c"]);
    let b = rec("a b c d e", "x y z w", &["a b c d"]);
    let both = sari(&[a.clone(), b.clone()], 2).unwrap().sari;
    let sa = sari(&[a], 2).unwrap().sari;
    let sb = sari(&[b], 2).unwrap().sari;
    close(both, (sa + sb) / 2.0, "mean");
}

#[test]
fn bleu_identity() {
    close(bleu(&[rec("x", "the cat sat down", &["the cat sat down"])], 4).unwrap(), 100.0, "bleu");
}

#[test]
fn bleu_corpus_with_zero_four_gram() {
    // Hypothesis length 7, closest reference lengths 4 + 4 = 8: BP = e^{-1/7}.
    // Unigram to trigram precisions are 1; no 4-gram matches.
    let r = [
        rec("x", "the cat sat", &["the cat sat down"]),
        rec("x", "a dog ran fast", &["a dog ran", "the dog ran fast"]),
    ];
    let want = 100.0 * (-1.0f64 / 7.0).exp() * BLEU_EPSILON.powf(0.25);
    close(bleu(&r, 4).unwrap(), want, "bleu");
    close(bleu(&r, 4).unwrap(), 0.48748127, "bleu literal");
}

#[test]
fn bleu_clipping() {
    // Unigram "a" clipped to 2 of 4; no bigram matches; no brevity penalty.
    let want = 100.0 * (0.5 * BLEU_EPSILON).sqrt();
    close(bleu(&[rec("x", "a a a a", &["a b a"])], 2).unwrap(), want, "bleu");
    close(bleu(&[rec("x", "a a a a", &["a b a"])], 2).unwrap(), 0.0022360680, "bleu literal");
}

#[test]
fn bleu_brevity_penalty() {
    close(bleu(&[rec("x", "a b", &["a b c d"])], 2).unwrap(), 100.0 * (-1.0f64).exp(), "bleu");
}

#[test]
fn bleu_prefers_shorter_reference_on_ties() {
    close(bleu(&[rec("x", "a b c d", &["a b c", "a b c d e"])], 1).unwrap(), 100.0, "bleu");
}

#[test]
fn geometric_mean_matches_report() {
    let r = [
        rec("the cat sat on the mat", "the cat sat", &["the cat sat", "a cat sat"]),
        rec("a b c d e", "a b c d e", &["a b c d"]),
    ];
    let m = evaluate(&r).unwrap();
    close(m.gm, (m.sari * m.bleu).sqrt(), "gm");
    assert!((geometric_mean(27.11, 26.21) - 26.66).abs() < 0.01);
}

fn sentence() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e", "f"]), 1..9)
        .prop_map(|v| v.into_iter().map(String::from).collect())
}

proptest! {
    #[test]
    fn sari_components_bounded(src in sentence(), out in sentence(), refs in prop::collection::vec(sentence(), 1..4)) {
        let r = EvalRecord::new(src, out, refs).unwrap();
        for n in 1..=4 {
            let s = sari(std::slice::from_ref(&r), n).unwrap();
            for v in [s.sari, s.add, s.delete, s.keep] {
                prop_assert!((0.0..=100.0 + 1e-9).contains(&v), "{v}");
            }
        }
        let b = bleu(std::slice::from_ref(&r), 4).unwrap();
        prop_assert!((0.0..=100.0 + 1e-9).contains(&b));
    }

    #[test]
    fn reference_order_is_irrelevant(src in sentence(), out in sentence(), mut refs in prop::collection::vec(sentence(), 2..4)) {
        let a = EvalRecord::new(src.clone(), out.clone(), refs.clone()).unwrap();
        refs.reverse();
        let b = EvalRecord::new(src, out, refs).unwrap();
        let (sa, sb) = (sari(&[a.clone()], 4).unwrap(), sari(&[b.clone()], 4).unwrap());
        prop_assert!((sa.sari - sb.sari).abs() < 1e-9);
        prop_assert!((bleu(&[a], 4).unwrap() - bleu(&[b], 4).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn record_order_is_irrelevant(recs in prop::collection::vec((sentence(), sentence(), sentence()), 1..6)) {
        let mut r: Vec<EvalRecord> = recs.into_iter().map(|(s, o, f)| EvalRecord::new(s, o, vec![f]).unwrap()).collect();
        let a = evaluate(&r).unwrap();
        r.reverse();
        let b = evaluate(&r).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}
