//! Simplification metrics: SARI (add, delete, keep), multi-reference
//! corpus BLEU, pooled FKGL and FRE, their geometric mean and average
//! output length. Tokens are lowercased before any comparison.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::normalize;
use crate::scoring::readability::{flesch_kincaid_grade, flesch_reading_ease, word_stats};

pub const BLEU_EPSILON: f64 = 1e-9;
pub const DEFAULT_MAX_N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    #[serde(rename = "src")]
    pub source: Vec<String>,
    #[serde(rename = "out")]
    pub output: Vec<String>,
    #[serde(rename = "refs")]
    pub references: Vec<Vec<String>>,
}

fn tokens(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_string).collect()
}

impl EvalRecord {
    pub fn new(source: Vec<String>, output: Vec<String>, references: Vec<Vec<String>>) -> Result<Self> {
        let record = EvalRecord {
            source,
            output,
            references,
        };
        record.validate()?;
        Ok(record)
    }

    /// Builds a record from whitespace-tokenized strings.
    pub fn from_text(source: &str, output: &str, references: &[&str]) -> Result<Self> {
        EvalRecord::new(tokens(source), tokens(output), references.iter().map(|r| tokens(r)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.source.is_empty() || self.output.is_empty() {
            return Err(Error::InvalidArgument("source and output must be non-empty".into()));
        }
        if self.references.is_empty() || self.references.iter().any(Vec::is_empty) {
            return Err(Error::InvalidArgument("need at least one non-empty reference".into()));
        }
        Ok(())
    }
}

/// Reads `{"src":[...],"out":[...],"refs":[[...],...]}` lines.
pub fn parse_records(content: &str, origin: impl AsRef<Path>) -> Result<Vec<EvalRecord>> {
    let origin = origin.as_ref();
    let mut out = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: EvalRecord =
            serde_json::from_str(line).map_err(|e| Error::format(origin, i + 1, e.to_string()))?;
        record.validate().map_err(|e| Error::format(origin, i + 1, e.to_string()))?;
        out.push(record);
    }
    Ok(out)
}

pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<EvalRecord>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records(&content, path)
}

/// Zips parallel one-sentence-per-line files. Every reference file must have
/// as many lines as the source.
pub fn records_from_lines(src: &str, out: &str, refs: &[String]) -> Result<Vec<EvalRecord>> {
    let src: Vec<&str> = src.lines().collect();
    let out: Vec<&str> = out.lines().collect();
    if out.len() != src.len() {
        return Err(Error::InvalidArgument(format!("{} source lines but {} output lines", src.len(), out.len())));
    }
    let refs: Vec<Vec<&str>> = refs.iter().map(|r| r.lines().collect()).collect();
    if let Some(bad) = refs.iter().find(|r| r.len() != src.len()) {
        return Err(Error::InvalidArgument(format!("{} source lines but a reference file has {}", src.len(), bad.len())));
    }
    (0..src.len())
        .map(|i| {
            let r: Vec<&str> = refs.iter().map(|r| r[i]).collect();
            EvalRecord::from_text(src[i], out[i], &r)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SariDelete {
    #[default]
    F1,
    Precision,
}

impl FromStr for SariDelete {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(SariDelete::F1),
            "precision" => Ok(SariDelete::Precision),
            other => Err(Error::InvalidArgument(format!("unknown sari_delete mode {other:?}"))),
        }
    }
}

type Counts = HashMap<Vec<String>, f64>;

fn ngrams(tokens: &[String], n: usize) -> Counts {
    let mut counts = Counts::new();
    for w in tokens.windows(n) {
        *counts.entry(w.to_vec()).or_default() += 1.0;
    }
    counts
}

fn lower(tokens: &[String]) -> Vec<String> {
    tokens.iter().map(|t| normalize(t)).collect()
}

fn scaled(c: &Counts, k: f64) -> Counts {
    c.iter().map(|(g, v)| (g.clone(), v * k)).collect()
}

fn get(c: &Counts, g: &[String]) -> f64 {
    c.get(g).copied().unwrap_or(0.0)
}

fn intersect(a: &Counts, b: &Counts) -> Counts {
    a.iter()
        .filter_map(|(g, &v)| {
            let m = v.min(get(b, g));
            (m > 0.0).then(|| (g.clone(), m))
        })
        .collect()
}

fn subtract(a: &Counts, b: &Counts) -> Counts {
    a.iter()
        .filter_map(|(g, &v)| {
            let d = v - get(b, g);
            (d > 0.0).then(|| (g.clone(), d))
        })
        .collect()
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// `(precision, recall)` with both sets empty scored as perfect and exactly
/// one empty as zero.
fn pr(produced_empty: bool, target_empty: bool, p: impl FnOnce() -> f64, r: impl FnOnce() -> f64) -> (f64, f64) {
    match (produced_empty, target_empty) {
        (true, true) => (1.0, 1.0),
        (true, false) | (false, true) => (0.0, 0.0),
        (false, false) => (p(), r()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct SariParts {
    add: f64,
    delete: f64,
    keep: f64,
}

fn sari_ngram(source: &Counts, output: &Counts, refs: &Counts, num_refs: f64, delete_mode: SariDelete) -> SariParts {
    let s_rep = scaled(source, num_refs);
    let c_rep = scaled(output, num_refs);

    let keep = intersect(&s_rep, &c_rep);
    let keep_good = intersect(&keep, refs);
    let keep_all = intersect(&s_rep, refs);
    let (kp, kr) = pr(
        keep.is_empty(),
        keep_all.is_empty(),
        || keep.iter().map(|(g, v)| get(&keep_good, g) / v).sum::<f64>() / keep.len() as f64,
        || {
            keep_all
                .iter()
                .map(|(g, v)| get(&keep_good, g) / v)
                .sum::<f64>()
                / keep_all.len() as f64
        },
    );

    let del = subtract(&s_rep, &c_rep);
    let del_good = subtract(&del, refs);
    let del_all = subtract(&s_rep, refs);
    let (dp, dr) = pr(
        del.is_empty(),
        del_all.is_empty(),
        || del.iter().map(|(g, v)| get(&del_good, g) / v).sum::<f64>() / del.len() as f64,
        || {
            del_all
                .iter()
                .map(|(g, v)| get(&del_good, g) / v)
                .sum::<f64>()
                / del_all.len() as f64
        },
    );
    let delete = match delete_mode {
        SariDelete::F1 => f1(dp, dr),
        SariDelete::Precision => dp,
    };

    let s_set: HashSet<&Vec<String>> = source.keys().collect();
    let r_set: HashSet<&Vec<String>> = refs.keys().collect();
    let add: HashSet<&Vec<String>> = output.keys().filter(|g| !s_set.contains(g)).collect();
    let add_all: HashSet<&Vec<String>> = r_set.difference(&s_set).copied().collect();
    let good = add.intersection(&r_set).count() as f64;
    let (ap, ar) = pr(
        add.is_empty(),
        add_all.is_empty(),
        || good / add.len() as f64,
        || good / add_all.len() as f64,
    );

    SariParts {
        add: f1(ap, ar),
        delete,
        keep: f1(kp, kr),
    }
}

fn sari_sentence(record: &EvalRecord, max_n: usize, delete_mode: SariDelete) -> SariParts {
    let src = lower(&record.source);
    let out = lower(&record.output);
    let refs: Vec<Vec<String>> = record.references.iter().map(|r| lower(r)).collect();
    let num_refs = refs.len() as f64;
    let mut sum = SariParts {
        add: 0.0,
        delete: 0.0,
        keep: 0.0,
    };
    for n in 1..=max_n {
        let mut r_counts = Counts::new();
        for r in &refs {
            for (g, v) in ngrams(r, n) {
                *r_counts.entry(g).or_default() += v;
            }
        }
        let p = sari_ngram(&ngrams(&src, n), &ngrams(&out, n), &r_counts, num_refs, delete_mode);
        sum.add += p.add;
        sum.delete += p.delete;
        sum.keep += p.keep;
    }
    let k = max_n as f64;
    SariParts {
        add: sum.add / k,
        delete: sum.delete / k,
        keep: sum.keep / k,
    }
}

fn check(records: &[EvalRecord], max_n: usize) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(1..=4).contains(&max_n) {
        return Err(Error::InvalidArgument(format!("max_n must be in 1..=4, got {max_n}")));
    }
    records.iter().try_for_each(EvalRecord::validate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SariScore {
    pub sari: f64,
    pub add: f64,
    pub delete: f64,
    pub keep: f64,
}

/// Mean sentence-level SARI over `records`, as percentages.
pub fn sari(records: &[EvalRecord], max_n: usize) -> Result<SariScore> {
    sari_with(records, max_n, SariDelete::F1)
}

pub fn sari_with(records: &[EvalRecord], max_n: usize, delete_mode: SariDelete) -> Result<SariScore> {
    check(records, max_n)?;
    let (mut add, mut delete, mut keep) = (0.0, 0.0, 0.0);
    for r in records {
        let p = sari_sentence(r, max_n, delete_mode);
        add += p.add;
        delete += p.delete;
        keep += p.keep;
    }
    let m = records.len() as f64 / 100.0;
    let (add, delete, keep) = (add / m, delete / m, keep / m);
    Ok(SariScore {
        sari: (add + delete + keep) / 3.0,
        add,
        delete,
        keep,
    })
}

/// Corpus BLEU as a percentage. Zero clipped counts are replaced by
/// [`BLEU_EPSILON`] before taking logs.
pub fn bleu(records: &[EvalRecord], max_n: usize) -> Result<f64> {
    check(records, max_n)?;
    let mut clipped = vec![0.0; max_n];
    let mut total = vec![0.0; max_n];
    let (mut hyp_len, mut ref_len) = (0usize, 0usize);
    for record in records {
        let out = lower(&record.output);
        let refs: Vec<Vec<String>> = record.references.iter().map(|r| lower(r)).collect();
        hyp_len += out.len();
        ref_len += refs
            .iter()
            .map(Vec::len)
            .min_by_key(|&l| (l.abs_diff(out.len()), l))
            .expect("validated non-empty");
        for n in 1..=max_n {
            let mut max_ref = Counts::new();
            for r in &refs {
                for (g, v) in ngrams(r, n) {
                    let e = max_ref.entry(g).or_default();
                    *e = f64::max(*e, v);
                }
            }
            for (g, v) in ngrams(&out, n) {
                clipped[n - 1] += v.min(get(&max_ref, &g));
                total[n - 1] += v;
            }
        }
    }
    let log_sum: f64 = (0..max_n)
        .map(|i| {
            let p = if clipped[i] > 0.0 { clipped[i] / total[i] } else { BLEU_EPSILON };
            p.ln()
        })
        .sum();
    let bp = if hyp_len > ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };
    Ok(100.0 * bp * (log_sum / max_n as f64).exp())
}

fn pooled_stats(records: &[EvalRecord]) -> (usize, usize, usize) {
    let (mut words, mut syllables) = (0, 0);
    for r in records {
        let (w, s) = word_stats(r.output.iter().map(String::as_str));
        words += w;
        syllables += s;
    }
    (words, records.len(), syllables)
}

/// Grade level over all outputs pooled together.
pub fn fkgl(records: &[EvalRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (w, n, s) = pooled_stats(records);
    Ok(flesch_kincaid_grade(w, n, s))
}

pub fn fre(records: &[EvalRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (w, n, s) = pooled_stats(records);
    Ok(flesch_reading_ease(w, n, s))
}

pub fn geometric_mean(sari: f64, bleu: f64) -> f64 {
    (sari * bleu).max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub sari: f64,
    pub sari_add: f64,
    pub sari_delete: f64,
    pub sari_keep: f64,
    pub bleu: f64,
    pub gm: f64,
    pub fkgl: f64,
    pub fre: f64,
    pub avg_len: f64,
}

impl MetricReport {
    pub const HEADER: [&'static str; 9] = ["SARI", "Add", "Delete", "Keep", "BLEU", "GM", "FKGL", "FRE", "Len"];

    pub fn values(&self) -> [f64; 9] {
        [
            self.sari,
            self.sari_add,
            self.sari_delete,
            self.sari_keep,
            self.bleu,
            self.gm,
            self.fkgl,
            self.fre,
            self.avg_len,
        ]
    }

    pub fn table_header() -> String {
        Self::HEADER.iter().map(|h| format!("{h:>8}")).collect::<Vec<_>>().join(" ")
    }

    pub fn table_row(&self) -> String {
        self.values().iter().map(|v| format!("{v:>8.2}")).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", Self::table_header())?;
        write!(f, "{}", self.table_row())
    }
}

pub fn evaluate(records: &[EvalRecord]) -> Result<MetricReport> {
    evaluate_with(records, SariDelete::F1)
}

pub fn evaluate_with(records: &[EvalRecord], delete_mode: SariDelete) -> Result<MetricReport> {
    let s = sari_with(records, DEFAULT_MAX_N, delete_mode)?;
    let b = bleu(records, DEFAULT_MAX_N)?;
    Ok(MetricReport {
        sari: s.sari,
        sari_add: s.add,
        sari_delete: s.delete,
        sari_keep: s.keep,
        bleu: b,
        gm: geometric_mean(s.sari, b),
        fkgl: fkgl(records)?,
        fre: fre(records)?,
        avg_len: records.iter().map(|r| r.output.len()).sum::<usize>() as f64 / records.len() as f64,
    })
}
