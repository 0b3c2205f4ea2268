//! Fixed few-shot exemplar sets loaded from versioned fixture files.

use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::RunnerError;

/// One worked example. `plan` is required by plan-rendering modes and
/// must be absent for direct mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exemplar {
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<String>,
    pub target: String,
}

/// An ordered exemplar set of size `k`. The paper evaluates with 2 to
/// 4 shots; the hard bounds here are wider only to allow ablations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FewShotSet {
    pub exemplars: Vec<Exemplar>,
    pub k: usize,
}

impl FewShotSet {
    pub fn new(exemplars: Vec<Exemplar>, k: usize) -> Result<Self, RunnerError> {
        let set = FewShotSet { exemplars, k };
        set.check()?;
        Ok(set)
    }

    pub fn check(&self) -> Result<(), RunnerError> {
        if self.k == 0 || self.k > 8 {
            return Err(RunnerError::Invalid(format!("k must be in 1..=8, got {}", self.k)));
        }
        if self.k != self.exemplars.len() {
            return Err(RunnerError::Invalid(format!(
                "k={} but the set holds {} exemplars",
                self.k,
                self.exemplars.len()
            )));
        }
        for (i, exemplar) in self.exemplars.iter().enumerate() {
            if exemplar.input.trim().is_empty() || exemplar.target.trim().is_empty() {
                return Err(RunnerError::Invalid(format!(
                    "exemplar {i} has an empty input or target"
                )));
            }
        }
        Ok(())
    }

    /// The query must never appear among the exemplars, otherwise the
    /// run leaks its own answer.
    pub fn check_against_query(&self, query_input: &str) -> Result<(), RunnerError> {
        if let Some(i) = self.exemplars.iter().position(|e| e.input == query_input) {
            return Err(RunnerError::Invalid(format!(
                "exemplar {i} equals the query input; pick exemplars disjoint from the benchmark"
            )));
        }
        Ok(())
    }
}

/// Loads the first `k` exemplars from a JSONL fixture file.
pub fn load_fewshot(path: &Path, k: usize) -> Result<FewShotSet, RunnerError> {
    let file = std::fs::File::open(path)
        .map_err(|source| RunnerError::Io { path: path.display().to_string(), source })?;
    let mut exemplars = Vec::new();
    for (number, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line =
            line.map_err(|source| RunnerError::Io { path: path.display().to_string(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let exemplar: Exemplar = serde_json::from_str(&line).map_err(|e| {
            RunnerError::Invalid(format!("{}:{}: {e}", path.display(), number + 1))
        })?;
        exemplars.push(exemplar);
        if exemplars.len() == k {
            break;
        }
    }
    if exemplars.len() < k {
        return Err(RunnerError::Invalid(format!(
            "{} holds {} exemplars but k={k} were requested",
            path.display(),
            exemplars.len()
        )));
    }
    FewShotSet::new(exemplars, k)
}
