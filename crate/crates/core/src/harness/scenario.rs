//! Scenario files: JSON documents naming a cell set, a spectrum size, the
//! traffic and the algorithm under test.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::adversary::{star_network, AdversaryKind};
use crate::error::Error;
use crate::hexnet::{CellId, Network};
use crate::offline_opt::OptLimits;
use crate::online_algs::Algorithm;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Traffic {
    /// Explicit request list, one cell per call, in arrival order.
    Requests(Vec<CellId>),
    Adversary(AdversaryKind),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub omega: u32,
    pub cells: Vec<CellId>,
    pub traffic: Traffic,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub verify_certificate: bool,
    #[serde(default)]
    pub compute_opt: bool,
    /// Overrides the exact solver's size limits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt_limits: Option<OptLimits>,
}

impl ScenarioConfig {
    pub fn network(&self) -> Network {
        Network::new(self.cells.iter().copied())
    }

    /// Replace the seed of random adversary traffic; other traffic is untouched.
    pub fn with_seed(mut self, seed: u64) -> Self {
        if let Traffic::Adversary(AdversaryKind::Random { length, .. }) = self.traffic {
            self.traffic = Traffic::Adversary(AdversaryKind::Random { seed, length });
        }
        self
    }

    /// Check every invariant, reporting the first violation with the field it
    /// concerns and, if `text` is the source document, the line it sits on.
    pub fn validate(&self, path: &str, text: Option<&str>) -> Result<(), HarnessError> {
        let at = |field: String, line: Option<usize>, error: Error| HarnessError::Invalid {
            path: path.into(),
            line,
            field,
            error,
        };
        let key_line = |key: &str| text.and_then(|t| locate::key(t, key));

        if self.omega == 0 {
            return Err(at("omega".into(), key_line("omega"), Error::ZeroOmega));
        }
        if let Err(e) = self.algorithm.partition(self.omega) {
            return Err(at("omega".into(), key_line("omega"), e));
        }
        let mut seen = BTreeSet::new();
        for (k, &c) in self.cells.iter().enumerate() {
            if !seen.insert(c) {
                let line = text.and_then(|t| locate::element(t, "cells", k));
                return Err(at(
                    format!("cells[{k}]"),
                    line,
                    Error::Invalid(format!("duplicate cell {c}")),
                ));
            }
        }
        let network = self.network();
        if self.algorithm == Algorithm::Caco2 && !network.is_triangle_free() {
            return Err(at(
                "cells".into(),
                key_line("cells"),
                Error::NotTriangleFree,
            ));
        }
        match &self.traffic {
            Traffic::Requests(reqs) => {
                if let Some((index, &cell)) = reqs
                    .iter()
                    .enumerate()
                    .find(|(_, c)| !network.contains(**c))
                {
                    let line = text.and_then(|t| locate::element(t, "requests", index));
                    return Err(at(
                        format!("traffic.requests[{index}]"),
                        line,
                        Error::UnknownRequestCell { index, cell },
                    ));
                }
            }
            Traffic::Adversary(AdversaryKind::Fig2 | AdversaryKind::Fig3) => {
                let star = star_network();
                if network != star {
                    let cells: Vec<String> = star.cells().iter().map(|c| c.to_string()).collect();
                    return Err(at(
                        "cells".into(),
                        key_line("cells"),
                        Error::Invalid(format!(
                            "star adversaries run on exactly the cells {}",
                            cells.join(" ")
                        )),
                    ));
                }
            }
            Traffic::Adversary(AdversaryKind::Random { length, .. }) => {
                if *length > 0 && network.is_empty() {
                    return Err(at(
                        "cells".into(),
                        key_line("cells"),
                        Error::Invalid("random traffic needs at least one cell".into()),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parse and validate a scenario document; `path` is only used in messages.
pub fn parse_scenario(text: &str, path: &str) -> Result<ScenarioConfig, HarnessError> {
    let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| HarnessError::Parse {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    config.validate(path, Some(text))?;
    Ok(config)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig, HarnessError> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|error| HarnessError::Io {
        path: shown.clone(),
        error,
    })?;
    parse_scenario(&text, &shown)
}

pub fn scenario_to_json(config: &ScenarioConfig) -> String {
    serde_json::to_string_pretty(config).expect("scenario configs always serialize")
}

pub fn save_scenario(config: &ScenarioConfig, path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    std::fs::write(path, scenario_to_json(config) + "\n").map_err(|error| HarnessError::Io {
        path: path.display().to_string(),
        error,
    })
}

/// Rough source positions inside a JSON document, for error messages only.
mod locate {
    fn line_at(text: &str, byte: usize) -> usize {
        text[..byte].matches('\n').count() + 1
    }

    fn key_offset(text: &str, key: &str) -> Option<usize> {
        let needle = format!("\"{key}\"");
        let mut from = 0;
        while let Some(pos) = text[from..].find(&needle) {
            let after = from + pos + needle.len();
            if text[after..].trim_start().starts_with(':') {
                return Some(after);
            }
            from = after;
        }
        None
    }

    pub fn key(text: &str, key: &str) -> Option<usize> {
        key_offset(text, key).map(|o| line_at(text, o))
    }

    /// Line of the `index`-th `[q, r]` pair in the array stored under `key`.
    pub fn element(text: &str, key: &str, index: usize) -> Option<usize> {
        let start = key_offset(text, key)?;
        let open = start + text[start..].find('[')?;
        let mut depth = 0usize;
        let mut count = 0usize;
        for (o, ch) in text[open..].char_indices() {
            match ch {
                '[' => {
                    depth += 1;
                    if depth == 2 {
                        if count == index {
                            return Some(line_at(text, open + o));
                        }
                        count += 1;
                    }
                }
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        return None;
                    }
                }
                _ => {}
            }
        }
        None
    }
}
