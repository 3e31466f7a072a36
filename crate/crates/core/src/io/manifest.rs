use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::format::{DIAGNOSTICS_SCHEMA_VERSION, FLUX_SCHEMA_VERSION};
use crate::error::{Result, SqgError};
use crate::solver::{BlowUpReport, RunStatus, Schedule, SolverConfig};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

/// Content hash in git's object framing, computed with SHA-256:
/// sha256("blob <len>\0" ‖ bytes).
pub fn content_checksum(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub step: u64,
    pub t: f64,
    /// Relative to the run directory.
    pub path: String,
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamEntry {
    pub path: String,
    /// Present once the stream is closed.
    pub checksum: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub diagnostics_schema_version: u32,
    pub flux_schema_version: u32,
    pub config: SolverConfig,
    pub schedule: Schedule,
    /// (s, l) used for the B^s_{l,l} column, when α < 1.
    pub besov_parameters: Option<(f64, u32)>,
    /// c₀l², reported because the threshold argument wants it below 1/2.
    pub c0_l_squared: Option<f64>,
    pub diagnostics: StreamEntry,
    pub flux: Option<StreamEntry>,
    pub snapshots: Vec<SnapshotEntry>,
    pub status: RunStatus,
    pub blow_up: Option<BlowUpReport>,
    pub warnings: Vec<String>,
    /// Wall-clock seconds since the Unix epoch.
    pub started_unix: u64,
    pub finished_unix: Option<u64>,
}

impl RunManifest {
    pub fn new(
        config: SolverConfig,
        schedule: Schedule,
        besov_parameters: Option<(f64, u32)>,
    ) -> Self {
        RunManifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            diagnostics_schema_version: DIAGNOSTICS_SCHEMA_VERSION,
            flux_schema_version: FLUX_SCHEMA_VERSION,
            c0_l_squared: besov_parameters.map(|(_, l)| config.c0 * (l * l) as f64),
            besov_parameters,
            diagnostics: StreamEntry {
                path: "diagnostics.jsonl".into(),
                checksum: None,
            },
            flux: config.flux_table.then(|| StreamEntry {
                path: "flux.csv".into(),
                checksum: None,
            }),
            snapshots: Vec::new(),
            status: RunStatus::Aborted,
            blow_up: None,
            warnings: config.warnings(),
            config,
            schedule,
            started_unix: now_unix(),
            finished_unix: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: RunManifest = serde_json::from_str(text)?;
        if m.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(SqgError::Schema(format!(
                "manifest schema {} is not supported (expected {MANIFEST_SCHEMA_VERSION})",
                m.schema_version
            )));
        }
        Ok(m)
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| SqgError::io(&path, e))?;
        Self::from_json(&text)
    }

    /// Write atomically through a temporary file.
    pub fn store(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_FILE);
        let tmp = dir.join(".manifest.json.tmp");
        fs::write(&tmp, self.to_json()?).map_err(|e| SqgError::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| SqgError::io(&path, e))
    }

    pub fn artifact_path(dir: &Path, rel: &str) -> PathBuf {
        dir.join(rel)
    }
}

pub(crate) fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Result of a checksum audit.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checked: usize,
    pub status: RunStatus,
}

/// Check that every artifact named in the manifest exists and hashes to its
/// recorded checksum. The first mismatch is returned as a corruption error.
pub fn verify_run(dir: &Path) -> Result<VerifyReport> {
    let m = RunManifest::load(dir)?;
    let mut checked = 0;
    let check = |rel: &str, want: &str| -> Result<()> {
        let path = dir.join(rel);
        let bytes = fs::read(&path).map_err(|_| SqgError::Corruption {
            path: path.clone(),
            reason: "artifact is missing".into(),
        })?;
        let got = content_checksum(&bytes);
        if got != want {
            return Err(SqgError::Corruption {
                path,
                reason: format!("checksum {got} does not match recorded {want}"),
            });
        }
        Ok(())
    };
    for s in &m.snapshots {
        check(&s.path, &s.checksum)?;
        checked += 1;
    }
    for stream in std::iter::once(&m.diagnostics).chain(m.flux.as_ref()) {
        match &stream.checksum {
            Some(c) => check(&stream.path, c)?,
            None => {
                let path = dir.join(&stream.path);
                if !path.exists() {
                    return Err(SqgError::Corruption {
                        path,
                        reason: "artifact is missing".into(),
                    });
                }
            }
        }
        checked += 1;
    }
    Ok(VerifyReport {
        checked,
        status: m.status,
    })
}
