//! Versioned, self-describing checkpoint files written atomically.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LeaderboardEntry, SearchError};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Candidates handed to evaluation.
    pub evaluated: u128,
    pub entries: u128,
    pub discarded: u128,
    pub filtered: u128,
    pub skipped: u128,
    /// Entries whose `c` exceeds the config's record floor.
    #[serde(default)]
    pub above_floor: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub config_fingerprint: String,
    /// Every enumeration index below the cursor has been fully processed.
    pub cursor: u128,
    pub stats: SearchStats,
    pub leaderboard: Vec<LeaderboardEntry>,
}

impl Checkpoint {
    pub fn fresh(config_fingerprint: String) -> Self {
        Checkpoint {
            format_version: CHECKPOINT_FORMAT_VERSION,
            config_fingerprint,
            cursor: 0,
            stats: SearchStats::default(),
            leaderboard: Vec::new(),
        }
    }

    pub fn check_compatible(&self, fingerprint: &str) -> Result<(), SearchError> {
        if self.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(SearchError::UnsupportedFormat(self.format_version));
        }
        if self.config_fingerprint != fingerprint {
            return Err(SearchError::FingerprintMismatch {
                expected: fingerprint.to_string(),
                found: self.config_fingerprint.clone(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }

    /// Write to a temporary sibling and rename over `path`.
    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let persist_err = |source| SearchError::Persist {
            path: path.to_path_buf(),
            source,
        };
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(persist_err)?;
        tmp.write_all(self.to_json().as_bytes())
            .and_then(|_| tmp.write_all(b"\n"))
            .and_then(|_| tmp.as_file().sync_all())
            .map_err(persist_err)?;
        tmp.persist(path).map_err(|e| persist_err(e.error))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, SearchError> {
        let text = std::fs::read_to_string(path).map_err(|source| SearchError::Persist {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| SearchError::MalformedCheckpoint(e.to_string()))
    }
}
