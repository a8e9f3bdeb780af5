//! Unsupervised sentence simplification by iterative, scored edits.
//!
//! A complex sentence (tokens with POS, dependency and entity annotations
//! plus a constituency parse) is rewritten by phrase removal, extraction,
//! reordering and lexical substitution. Candidates are ranked by a product
//! of fluency, readability, length, entity and meaning-preservation factors,
//! and the search greedily accepts the best candidate that beats the current
//! sentence by a per-operation factor.
//!
//! ```no_run
//! use edsimp::{load_bundle, load_corpus, simplify, ScoringConfig, SearchConfig};
//!
//! let bundle = load_bundle("bundle")?;
//! for sentence in load_corpus("complex.jsonl")? {
//!     let trace = simplify(&sentence, &bundle, &ScoringConfig::newsela(), &SearchConfig::default())?;
//!     println!("{}", trace.final_sentence.text());
//! }
//! # Ok::<(), edsimp::Error>(())
//! ```

pub mod config;
pub mod edits;
pub mod error;
pub mod ingest;
pub mod lm;
pub mod metrics;
pub mod resources;
pub mod scoring;
pub mod search;

pub use config::{resolve, ConfigLayer, Profile, Settings};
pub use edits::{Candidate, EditConfig, EditOp, OpKind, OpSet, Phrase, ReorderScope};
pub use error::{Error, Result};
pub use ingest::{load_corpus, AnnotatedSentence, AnnotatedToken, ParseTree, Span};
pub use lm::{NGramBackend, SyntaxAwareLM};
pub use metrics::{evaluate, EvalRecord, MetricReport};
pub use resources::{build_bundle, load_bundle, validate_bundle, ResourceBundle};
pub use scoring::{ScoreBreakdown, Scorer, ScoringConfig};
pub use search::{iterate_once, simplify, simplify_corpus, OpThresholds, SearchConfig, SimplificationTrace};
