//! Readers for every external input: annotated corpora, bracketed parses,
//! embedding tables, frequency tables and synonym lists.

mod corpus;
mod embeddings;
mod synonyms;
mod tables;
mod tree;

pub use corpus::{load_corpus, parse_corpus, write_corpus, AnnotatedSentence, AnnotatedToken};
pub use embeddings::{cosine, euclidean, EmbeddingTable};
pub use synonyms::SynonymTable;
pub use tables::{build_frequency_tables, normalize, IdfTable, TagLexicon, UnigramTable};
pub use tree::{parse_bracketed_tree, NodePath, ParseTree, Span};
