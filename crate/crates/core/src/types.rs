//! Domain records exchanged between pipeline stages.

use codeplan_lint::ValidationReport;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Shared `Display`-via-`as_str` body for the small string enums.
macro_rules! fmt_as_str {
    () => {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str(self.as_str())
        }
    };
}

/// One raw prompt-response pair from an instruction corpus. Ids missing
/// in the raw file are synthesized by the parser as `<source>-<line>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptResponsePair {
    pub id: String,
    pub prompt: String,
    pub response: String,
    /// Free-form provenance label.
    pub source: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanKind {
    Code,
    Nl,
    Exec,
}

impl PlanKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlanKind::Code => "code",
            PlanKind::Nl => "nl",
            PlanKind::Exec => "exec",
        }
    }
}

impl std::str::FromStr for PlanKind {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s {
            "code" => Ok(PlanKind::Code),
            "nl" => Ok(PlanKind::Nl),
            "exec" => Ok(PlanKind::Exec),
            other => Err(CoreError::InvalidValue(format!("unknown plan kind '{other}'"))),
        }
    }
}

/// How a plan was produced: which model, which sampling settings, when.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationMeta {
    pub model: String,
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// RFC 3339 wall-clock time of the annotation request.
    pub timestamp: String,
}

/// An accepted (prompt, plan, response) training record.
///
/// On disk the validation report and annotation provenance fold into a
/// single `meta` object; see the wire structs below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "TripleWire", try_from = "TripleWire")]
pub struct TrainingTriple {
    pub id: String,
    pub prompt: String,
    pub plan: String,
    pub response: String,
    pub plan_kind: PlanKind,
    pub validation: ValidationReport,
    pub annotation_meta: AnnotationMeta,
}

#[derive(Serialize, Deserialize)]
struct TripleWire {
    id: String,
    prompt: String,
    plan: String,
    response: String,
    plan_kind: PlanKind,
    meta: TripleMeta,
}

#[derive(Serialize, Deserialize)]
struct TripleMeta {
    model: String,
    temperature: f64,
    top_p: f64,
    max_tokens: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    timestamp: String,
    validation: ValidationReport,
}

impl From<TrainingTriple> for TripleWire {
    fn from(t: TrainingTriple) -> Self {
        TripleWire {
            id: t.id,
            prompt: t.prompt,
            plan: t.plan,
            response: t.response,
            plan_kind: t.plan_kind,
            meta: TripleMeta {
                model: t.annotation_meta.model,
                temperature: t.annotation_meta.temperature,
                top_p: t.annotation_meta.top_p,
                max_tokens: t.annotation_meta.max_tokens,
                seed: t.annotation_meta.seed,
                timestamp: t.annotation_meta.timestamp,
                validation: t.validation,
            },
        }
    }
}

impl TryFrom<TripleWire> for TrainingTriple {
    type Error = String;
    fn try_from(w: TripleWire) -> Result<Self, String> {
        if w.plan.trim().is_empty() {
            return Err(format!("triple '{}' has an empty plan", w.id));
        }
        Ok(TrainingTriple {
            id: w.id,
            prompt: w.prompt,
            plan: w.plan,
            response: w.response,
            plan_kind: w.plan_kind,
            validation: w.meta.validation,
            annotation_meta: AnnotationMeta {
                model: w.meta.model,
                temperature: w.meta.temperature,
                top_p: w.meta.top_p,
                max_tokens: w.meta.max_tokens,
                seed: w.meta.seed,
                timestamp: w.meta.timestamp,
            },
        })
    }
}

/// Plan-free control record: the same pair, no plan attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanillaRecord {
    pub id: String,
    pub prompt: String,
    pub response: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Boolean,
    CoinFlip,
    LastLetter,
    Dyck,
    #[serde(rename = "multihopqa")]
    MultiHopQa,
    Math,
    Generic,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Boolean => "boolean",
            Task::CoinFlip => "coinflip",
            Task::LastLetter => "lastletter",
            Task::Dyck => "dyck",
            Task::MultiHopQa => "multihopqa",
            Task::Math => "math",
            Task::Generic => "generic",
        }
    }
}

impl std::fmt::Display for Task {
    fmt_as_str!();
}

impl std::str::FromStr for Task {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s {
            "boolean" => Ok(Task::Boolean),
            "coinflip" => Ok(Task::CoinFlip),
            "lastletter" => Ok(Task::LastLetter),
            "dyck" => Ok(Task::Dyck),
            "multihopqa" => Ok(Task::MultiHopQa),
            "math" => Ok(Task::Math),
            "generic" => Ok(Task::Generic),
            other => Err(CoreError::InvalidValue(format!("unknown task '{other}'"))),
        }
    }
}

/// One evaluation item. `gold` holds every acceptable answer string;
/// `hops` is present exactly for multi-hop QA items; `context` carries
/// reference passages when the task provides them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkItem {
    pub id: String,
    pub task: Task,
    pub input: String,
    pub gold: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hops: Option<u8>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<Vec<String>>,
}

impl BenchmarkItem {
    pub fn check(&self) -> Result<(), CoreError> {
        let err = |m: String| Err(CoreError::InvalidRecord { id: self.id.clone(), message: m });
        if self.gold.is_empty() {
            return err("gold is empty".to_string());
        }
        if self.gold.iter().any(|g| g.trim().is_empty()) {
            return err("gold contains an empty entry".to_string());
        }
        match (self.task, self.hops) {
            (Task::MultiHopQa, None) => err("multihopqa item is missing hops".to_string()),
            (Task::MultiHopQa, Some(h)) if !(2..=4).contains(&h) => {
                err(format!("hops must be 2, 3, or 4, got {h}"))
            }
            (t, Some(h)) if t != Task::MultiHopQa => {
                err(format!("hops={h} present on a {t} item"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "direct")]
    Direct,
    #[serde(rename = "ps")]
    PlanAndSolve,
    #[serde(rename = "codeplan")]
    CodePlan,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Direct => "direct",
            Mode::PlanAndSolve => "ps",
            Mode::CodePlan => "codeplan",
        }
    }

    /// Plan-producing modes render and expect a fenced plan block.
    pub fn uses_plan(self) -> bool {
        !matches!(self, Mode::Direct)
    }
}

impl std::fmt::Display for Mode {
    fmt_as_str!();
}

impl std::str::FromStr for Mode {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s {
            "direct" => Ok(Mode::Direct),
            "ps" => Ok(Mode::PlanAndSolve),
            "codeplan" => Ok(Mode::CodePlan),
            other => Err(CoreError::InvalidValue(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenCounts {
    pub prompt: u32,
    pub completion: u32,
}

/// One model run on one benchmark item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationTrace {
    pub item_id: String,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<String>,
    pub response: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extracted_answer: Option<String>,
    pub token_counts: TokenCounts,
    pub latency_ms: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl GenerationTrace {
    pub fn check(&self) -> Result<(), CoreError> {
        if self.plan.is_some() != self.mode.uses_plan() {
            return Err(CoreError::InvalidRecord {
                id: self.item_id.clone(),
                message: format!(
                    "plan must be present exactly when mode is not direct (mode={}, plan={})",
                    self.mode,
                    if self.plan.is_some() { "present" } else { "absent" }
                ),
            });
        }
        if !self.latency_ms.is_finite() || self.latency_ms < 0.0 {
            return Err(CoreError::InvalidRecord {
                id: self.item_id.clone(),
                message: format!("latency_ms must be finite and non-negative, got {}", self.latency_ms),
            });
        }
        Ok(())
    }
}

/// A run that could not produce a trace for an item. Recorded in the
/// trace file so failures are never silently dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFailure {
    pub item_id: String,
    pub error: String,
}

/// One line of a trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceRecord {
    Trace(GenerationTrace),
    Failure(TraceFailure),
}

impl TraceRecord {
    pub fn item_id(&self) -> &str {
        match self {
            TraceRecord::Trace(t) => &t.item_id,
            TraceRecord::Failure(f) => &f.item_id,
        }
    }
}

/// Teacher-forced score of one target sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageScore {
    /// Sum of per-token negative log probabilities.
    pub sum_nll: f64,
    pub n_tokens: u32,
    /// `sum_nll / n_tokens`.
    pub mean_nll: f64,
}

impl StageScore {
    pub fn new(sum_nll: f64, n_tokens: u32) -> Self {
        StageScore { sum_nll, n_tokens, mean_nll: sum_nll / n_tokens as f64 }
    }
}

/// Per-record two-stage scores: stage 1 is the plan given the prompt,
/// stage 2 the response given prompt and plan. Plan-free records carry
/// no stage 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage1: Option<StageScore>,
    pub stage2: StageScore,
}

/// Aggregate NLL decomposition. `overall` is always the sum of the two
/// stage terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NllReport {
    pub stage1: f64,
    pub stage2: f64,
    pub overall: f64,
}

impl NllReport {
    pub fn new(stage1: f64, stage2: f64) -> Result<Self, CoreError> {
        if !(stage1 >= 0.0 && stage2 >= 0.0) {
            return Err(CoreError::InvalidValue(format!(
                "NLL terms must be non-negative, got stage1={stage1} stage2={stage2}"
            )));
        }
        Ok(NllReport { stage1, stage2, overall: stage1 + stage2 })
    }

    pub fn check(&self) -> Result<(), CoreError> {
        if (self.overall - (self.stage1 + self.stage2)).abs() > 1e-9 {
            return Err(CoreError::InvalidValue(format!(
                "overall {} is not stage1 {} + stage2 {}",
                self.overall, self.stage1, self.stage2
            )));
        }
        if self.stage1 < 0.0 || self.stage2 < 0.0 || self.overall < 0.0 {
            return Err(CoreError::InvalidValue("NLL terms must be non-negative".to_string()));
        }
        Ok(())
    }
}
