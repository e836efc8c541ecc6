//! Provenance record embedded in every JSON report.

use std::collections::BTreeMap;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    pub started_at: String,
    pub finished_at: Option<String>,
    pub version: String,
    /// SHA-256 of each textual input (morphism rules, literal words, files).
    pub input_digests: BTreeMap<String, String>,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

impl RunManifest {
    pub fn start(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            started_at: now(),
            finished_at: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digests: BTreeMap::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(name.to_string(), value.to_string());
        self
    }

    pub fn input(&mut self, name: &str, data: &[u8]) -> &mut Self {
        self.input_digests.insert(name.to_string(), sha256_hex(data));
        self
    }

    pub fn finish(&mut self) {
        self.finished_at = Some(now());
    }
}
