//! Layered settings: a shipped profile, then a TOML file, then explicit
//! overrides (usually command-line flags). Later layers win field by field.
//!
//! ```toml
//! profile = "wikilarge"
//!
//! [scoring]
//! gamma = 0.5
//!
//! [search]
//! r_substitution = 1.0
//! ops = "rm+ex+ls"
//! ```

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::SariDelete;
use crate::scoring::ScoringConfig;
use crate::search::{OpThresholds, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Newsela,
    Wikilarge,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "newsela" => Ok(Profile::Newsela),
            "wikilarge" => Ok(Profile::Wikilarge),
            other => Err(Error::Config(format!("unknown profile {other:?} (expected newsela or wikilarge)"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Newsela => "newsela",
            Profile::Wikilarge => "wikilarge",
        })
    }
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub scoring: ScoringConfig,
    pub search: SearchConfig,
    pub sari_delete: SariDelete,
}

impl Settings {
    pub fn from_profile(profile: Profile) -> Self {
        match profile {
            Profile::Newsela => Settings {
                scoring: ScoringConfig::newsela(),
                search: SearchConfig::default(),
                sari_delete: SariDelete::F1,
            },
            Profile::Wikilarge => Settings {
                scoring: ScoringConfig::wikilarge(),
                search: SearchConfig {
                    thresholds: OpThresholds::wikilarge(),
                    ..SearchConfig::default()
                },
                sari_delete: SariDelete::F1,
            },
        }
    }

    /// Applies every field set in `layer`. The layer's `profile` is ignored
    /// here; see [`resolve`].
    pub fn apply(&mut self, layer: &ConfigLayer) -> Result<()> {
        let s = &layer.scoring;
        let sc = &mut self.scoring;
        set(&mut sc.alpha, s.alpha);
        set(&mut sc.beta, s.beta);
        set(&mut sc.gamma, s.gamma);
        set(&mut sc.delta, s.delta);
        set(&mut sc.tau, s.tau);
        set(&mut sc.min_length, s.min_length);
        set(&mut sc.entity_offset, s.entity_offset);

        let q = &layer.search;
        let sr = &mut self.search;
        if let Some(r) = q.r_all {
            sr.thresholds = OpThresholds::uniform(r);
        }
        set(&mut sr.thresholds.removal, q.r_removal);
        set(&mut sr.thresholds.extraction, q.r_extraction);
        set(&mut sr.thresholds.reordering, q.r_reordering);
        set(&mut sr.thresholds.substitution, q.r_substitution);
        set(&mut sr.max_iterations, q.max_iterations);
        set(&mut sr.revisit_guard, q.revisit_guard);
        if let Some(ops) = &q.ops {
            sr.ops = ops.parse()?;
        }

        let e = &layer.edits;
        set(&mut sr.edit.k_neighbors, e.k_neighbors);
        set(&mut sr.edit.sub_similarity_threshold, e.sub_similarity_threshold);
        if let Some(tags) = &e.phrase_tags {
            sr.edit.phrase_tags = tags.iter().cloned().collect();
        }
        if let Some(scope) = &e.reorder_scope {
            sr.edit.reorder_scope = scope.parse()?;
        }

        if let Some(mode) = &layer.metrics.sari_delete {
            self.sari_delete = mode.parse()?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.scoring.validate()?;
        self.search.validate()?;
        if self.search.edit.phrase_tags.is_empty() {
            return Err(Error::Config("phrase_tags must not be empty".into()));
        }
        Ok(())
    }
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoringLayer {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub tau: Option<f64>,
    pub min_length: Option<usize>,
    pub entity_offset: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchLayer {
    /// Sets all four thresholds; the per-operator keys still override it.
    pub r_all: Option<f64>,
    pub r_removal: Option<f64>,
    pub r_extraction: Option<f64>,
    pub r_reordering: Option<f64>,
    pub r_substitution: Option<f64>,
    pub max_iterations: Option<usize>,
    pub revisit_guard: Option<bool>,
    pub ops: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EditsLayer {
    pub k_neighbors: Option<usize>,
    pub sub_similarity_threshold: Option<f64>,
    pub phrase_tags: Option<Vec<String>>,
    pub reorder_scope: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsLayer {
    pub sari_delete: Option<String>,
}

/// One partial layer of settings, as read from a config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub profile: Option<Profile>,
    #[serde(default)]
    pub scoring: ScoringLayer,
    #[serde(default)]
    pub search: SearchLayer,
    #[serde(default)]
    pub edits: EditsLayer,
    #[serde(default)]
    pub metrics: MetricsLayer,
}

impl ConfigLayer {
    pub fn parse(content: &str) -> Result<Self> {
        toml::from_str(content).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ConfigLayer::parse(&content).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Resolves the final settings. The profile comes from the first of
/// `overrides`, `file` or the default that names one.
pub fn resolve(file: Option<&ConfigLayer>, overrides: &ConfigLayer) -> Result<Settings> {
    let profile = overrides
        .profile
        .or_else(|| file.and_then(|f| f.profile))
        .unwrap_or_default();
    let mut settings = Settings::from_profile(profile);
    if let Some(f) = file {
        settings.apply(f)?;
    }
    settings.apply(overrides)?;
    settings.validate()?;
    Ok(settings)
}

impl Default for Settings {
    fn default() -> Self {
        Settings::from_profile(Profile::Newsela)
    }
}
