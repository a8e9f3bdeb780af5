//! The read-only assets consumed by scoring, edits and search, and their
//! on-disk form: a directory of member files plus a manifest of SHA-256
//! content hashes.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ingest::{build_frequency_tables, AnnotatedSentence, EmbeddingTable, IdfTable, SynonymTable, TagLexicon, UnigramTable};
use crate::lm::{NGramBackend, SyntaxAwareLM};

pub const MANIFEST_FILE: &str = "manifest.json";
const BUNDLE_FORMAT: &str = "edsimp-bundle";
const BUNDLE_VERSION: u32 = 1;

pub struct ResourceBundle {
    pub lm: Box<dyn SyntaxAwareLM>,
    pub unigrams: UnigramTable,
    pub idf: IdfTable,
    /// One or more tables; sentence embeddings use the first, substitute
    /// lookup unions the neighbours of all of them.
    pub embeddings: Vec<EmbeddingTable>,
    pub synonyms: SynonymTable,
    pub lexicon: TagLexicon,
    model_file: Option<String>,
    lm_words: BTreeSet<String>,
}

impl fmt::Debug for ResourceBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResourceBundle")
            .field("lm", &self.lm.backend_id())
            .field("unigram_vocab", &self.unigrams.vocab_size())
            .field("embedding_tables", &self.embeddings.len())
            .field("synonym_entries", &self.synonyms.len())
            .finish()
    }
}

impl ResourceBundle {
    /// Assembles a bundle around the reference n-gram backend.
    pub fn with_ngram(
        lm: NGramBackend,
        unigrams: UnigramTable,
        idf: IdfTable,
        embeddings: Vec<EmbeddingTable>,
        synonyms: SynonymTable,
        lexicon: TagLexicon,
    ) -> Result<Self> {
        let model_file = Some(lm.to_json());
        let lm_words = lm.words().map(str::to_string).collect();
        let mut bundle = Self::assemble(Box::new(lm), model_file, unigrams, idf, embeddings, synonyms, lexicon)?;
        bundle.lm_words = lm_words;
        Ok(bundle)
    }

    /// Assembles a bundle around any language model. Such bundles can be used
    /// in memory but not saved.
    pub fn with_lm(
        lm: Box<dyn SyntaxAwareLM>,
        unigrams: UnigramTable,
        idf: IdfTable,
        embeddings: Vec<EmbeddingTable>,
        synonyms: SynonymTable,
        lexicon: TagLexicon,
    ) -> Result<Self> {
        Self::assemble(lm, None, unigrams, idf, embeddings, synonyms, lexicon)
    }

    fn assemble(
        lm: Box<dyn SyntaxAwareLM>,
        model_file: Option<String>,
        unigrams: UnigramTable,
        idf: IdfTable,
        embeddings: Vec<EmbeddingTable>,
        synonyms: SynonymTable,
        lexicon: TagLexicon,
    ) -> Result<Self> {
        if embeddings.is_empty() {
            return Err(Error::InvalidArgument("a bundle needs at least one embedding table".into()));
        }
        Ok(ResourceBundle {
            lm,
            unigrams,
            idf,
            embeddings,
            synonyms,
            lexicon,
            model_file,
            lm_words: BTreeSet::new(),
        })
    }

    pub fn primary_embeddings(&self) -> &EmbeddingTable {
        &self.embeddings[0]
    }

    /// Writes every member and the manifest into `dir`, creating it if
    /// needed.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<Manifest> {
        let dir = dir.as_ref();
        let model = self
            .model_file
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("language model {} cannot be persisted", self.lm.backend_id())))?;
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut members = vec![
            (Role::LanguageModel, "lm.json".to_string(), model.clone()),
            (Role::Unigrams, "unigrams.tsv".to_string(), self.unigrams.to_tsv()),
            (Role::Idf, "idf.tsv".to_string(), self.idf.to_tsv()),
            (Role::Synonyms, "synonyms.tsv".to_string(), self.synonyms.to_tsv()),
            (Role::Lexicon, "lexicon.tsv".to_string(), self.lexicon.to_tsv()),
        ];
        for (i, table) in self.embeddings.iter().enumerate() {
            members.push((Role::Embeddings, format!("embeddings-{i}.txt"), embeddings_to_text(table)));
        }
        let mut manifest = Manifest {
            format: BUNDLE_FORMAT.to_string(),
            version: BUNDLE_VERSION,
            lm_backend: self.lm.backend_id(),
            members: Vec::new(),
        };
        for (role, file, content) in members {
            let path = dir.join(&file);
            fs::write(&path, &content).map_err(|e| Error::io(&path, e))?;
            manifest.members.push(Member {
                role,
                file,
                sha256: sha256_hex(content.as_bytes()),
            });
        }
        let path = dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(manifest)
    }
}

fn embeddings_to_text(table: &EmbeddingTable) -> String {
    let mut out = String::new();
    for word in table.words() {
        out.push_str(word);
        for x in table.get(word).expect("word comes from the table") {
            out.push(' ');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    LanguageModel,
    Unigrams,
    Idf,
    Embeddings,
    Synonyms,
    Lexicon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub role: Role,
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    pub lm_backend: String,
    pub members: Vec<Member>,
}

impl Manifest {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let path = dir.as_ref().join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let manifest: Manifest = serde_json::from_str(&text)?;
        if manifest.format != BUNDLE_FORMAT || manifest.version != BUNDLE_VERSION {
            return Err(Error::Corrupt {
                member: MANIFEST_FILE.into(),
                message: format!("unsupported bundle format {} v{}", manifest.format, manifest.version),
            });
        }
        Ok(manifest)
    }
}

/// Trains the language model and frequency tables on the simple corpus and
/// loads the embedding and synonym files.
pub fn build_bundle(
    simple_corpus: &[AnnotatedSentence],
    embedding_paths: &[PathBuf],
    synonym_path: &Path,
    lm_order: usize,
) -> Result<ResourceBundle> {
    build_bundle_with_weights(simple_corpus, embedding_paths, synonym_path, lm_order, crate::lm::DEFAULT_WEIGHTS)
}

pub fn build_bundle_with_weights(
    simple_corpus: &[AnnotatedSentence],
    embedding_paths: &[PathBuf],
    synonym_path: &Path,
    lm_order: usize,
    lm_weights: [f64; 3],
) -> Result<ResourceBundle> {
    if simple_corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if embedding_paths.is_empty() {
        return Err(Error::InvalidArgument("at least one embedding file is required".into()));
    }
    let lm = NGramBackend::train_with_weights(simple_corpus, lm_order, lm_weights)?;
    let (unigrams, idf) = build_frequency_tables(simple_corpus)?;
    let embeddings = embedding_paths.iter().map(EmbeddingTable::load).collect::<Result<Vec<_>>>()?;
    let synonyms = SynonymTable::load(synonym_path)?;
    let lexicon = TagLexicon::from_corpus(simple_corpus);
    ResourceBundle::with_ngram(lm, unigrams, idf, embeddings, synonyms, lexicon)
}

fn read_member(dir: &Path, member: &Member) -> Result<String> {
    let path = dir.join(&member.file);
    let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let actual = sha256_hex(&bytes);
    if actual != member.sha256 {
        return Err(Error::Corrupt {
            member: member.file.clone(),
            message: format!("sha256 {actual} does not match manifest {}", member.sha256),
        });
    }
    String::from_utf8(bytes).map_err(|_| Error::Corrupt {
        member: member.file.clone(),
        message: "not valid UTF-8".into(),
    })
}

fn corrupt(member: &Member, err: Error) -> Error {
    Error::Corrupt {
        member: member.file.clone(),
        message: err.to_string(),
    }
}

/// Loads a saved bundle, verifying every member against the manifest.
pub fn load_bundle(dir: impl AsRef<Path>) -> Result<ResourceBundle> {
    let dir = dir.as_ref();
    let manifest = Manifest::load(dir)?;
    let find = |role: Role| -> Result<&Member> {
        manifest.members.iter().find(|m| m.role == role).ok_or_else(|| Error::Corrupt {
            member: MANIFEST_FILE.into(),
            message: format!("no {role:?} member"),
        })
    };
    let m = find(Role::LanguageModel)?;
    let lm = NGramBackend::from_json(&read_member(dir, m)?).map_err(|e| corrupt(m, e))?;
    let m = find(Role::Unigrams)?;
    let unigrams = UnigramTable::from_tsv(&read_member(dir, m)?, &m.file).map_err(|e| corrupt(m, e))?;
    let m = find(Role::Idf)?;
    let idf = IdfTable::from_tsv(&read_member(dir, m)?, &m.file).map_err(|e| corrupt(m, e))?;
    let m = find(Role::Synonyms)?;
    let synonyms = SynonymTable::parse(&read_member(dir, m)?, &m.file).map_err(|e| corrupt(m, e))?;
    let m = find(Role::Lexicon)?;
    let lexicon = TagLexicon::from_tsv(&read_member(dir, m)?, &m.file).map_err(|e| corrupt(m, e))?;
    let mut embeddings = Vec::new();
    for m in manifest.members.iter().filter(|m| m.role == Role::Embeddings) {
        embeddings.push(EmbeddingTable::parse(&read_member(dir, m)?, &m.file).map_err(|e| corrupt(m, e))?);
    }
    ResourceBundle::with_ngram(lm, unigrams, idf, embeddings, synonyms, lexicon)
}

/// Findings from [`validate_bundle`]. Errors make the bundle unusable;
/// warnings flag legal but suspicious combinations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Re-checks member invariants and cross-member consistency.
pub fn validate_bundle(bundle: &ResourceBundle) -> ValidationReport {
    let mut report = ValidationReport::default();
    if bundle.embeddings.is_empty() {
        report.errors.push("no embedding tables".into());
    }
    if bundle.unigrams.total() != bundle.unigrams.words().map(|w| bundle.unigrams.count(w)).sum::<u64>() {
        report.errors.push("unigram total does not match its counts".into());
    }
    for word in bundle.unigrams.words() {
        let p = bundle.unigrams.prob(word);
        if !(p > 0.0 && p <= 1.0) {
            report.errors.push(format!("unigram probability of {word:?} is {p}"));
        }
    }
    let dims: BTreeSet<usize> = bundle.embeddings.iter().map(EmbeddingTable::dimension).collect();
    if dims.len() > 1 {
        report.warnings.push(format!("embedding tables have different dimensions {dims:?}"));
    }
    let idf_words: BTreeSet<&str> = bundle.idf.words().collect();
    let lm_words: BTreeSet<&str> = bundle.lm_words.iter().map(String::as_str).collect();
    if !lm_words.is_empty() && lm_words.is_disjoint(&idf_words) {
        report
            .warnings
            .push("language-model vocabulary and idf vocabulary are disjoint".into());
    }
    if let Some(table) = bundle.embeddings.first() {
        if table.words().all(|w| !idf_words.contains(w)) {
            report.warnings.push("no embedding word has an idf entry".into());
        }
    }
    report
}
