//! Structural validation of plan text.
//!
//! A plan is rejected when any rule fires:
//!
//! - R1: unbalanced `()`, `[]`, `{}` (stack check, families must match)
//! - R2: unterminated string literal
//! - R3: structurally incomplete, e.g. the final line ends mid-token or
//!   a block header has no indented body after it
//! - R4: empty once comments and blank lines are stripped
//! - R5: longer than the word budget
//! - R6: no function definition and no executable statement (optional)
//!
//! Validation is a pure function of the text and options, so running it
//! on the same input twice yields identical reports.

use serde::{Deserialize, Serialize};

use crate::token::{tokenize_plan, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidateOptions {
    /// R5 budget: maximum number of whitespace-delimited words.
    pub max_words: usize,
    /// Whether R6 is applied.
    pub require_structure: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self { max_words: 200, require_structure: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleFailure {
    pub rule: RuleId,
    pub message: String,
    /// 1-based line the failure is attributed to.
    pub line: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureCounts {
    pub defs: u32,
    pub calls: u32,
    pub if_branches: u32,
    pub for_loops: u32,
    pub while_loops: u32,
    pub returns: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub verdict: Verdict,
    pub failures: Vec<RuleFailure>,
    pub word_count: usize,
    pub feature_counts: FeatureCounts,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    /// Rule ids of every failure, for rejection-reason reporting.
    pub fn failed_rules(&self) -> Vec<RuleId> {
        self.failures.iter().map(|f| f.rule).collect()
    }
}

/// Word and line counts plus feature counts, for corpus reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStats {
    pub word_count: usize,
    pub line_count: usize,
    pub feature_counts: FeatureCounts,
}

const ASSIGN_OPS: [&str; 12] =
    ["=", "+=", "-=", "*=", "/=", "%=", "//=", "**=", "&=", "|=", "^=", ":="];

/// Symbol operators that cannot legally end a statement.
const TRAILING_OPS: [&str; 29] = [
    "+", "-", "*", "/", "%", "**", "//", "==", "!=", "<", "<=", ">", ">=", "=", "+=", "-=",
    "*=", "/=", "%=", "//=", "**=", "&", "|", "^", "<<", ">>", ":=", "->", ".",
];

/// Word operators that cannot legally end a statement.
const TRAILING_WORDS: [&str; 5] = ["and", "or", "not", "in", "is"];

/// One logical line: meaningful tokens between bracket-depth-zero
/// newlines. Continuation lines inside brackets fold into the line
/// they continue.
struct LogicalLine<'a> {
    tokens: Vec<&'a Token>,
    indent: u32,
}

pub fn validate_plan(text: &str, opts: &ValidateOptions) -> ValidationReport {
    let lexed = tokenize_plan(text);
    let mut failures = Vec::new();

    if let Some(f) = check_balance(&lexed.tokens) {
        failures.push(f);
    }
    if let Some(&line) = lexed.unterminated_strings.first() {
        failures.push(RuleFailure {
            rule: RuleId::R2,
            message: "string literal is never closed".to_string(),
            line,
        });
    }

    let indents = line_indents(text);
    let lines = logical_lines(&lexed.tokens, &indents);
    failures.extend(check_incomplete(&lines));

    let empty = lines.is_empty();
    if empty {
        failures.push(RuleFailure {
            rule: RuleId::R4,
            message: "no content after stripping comments and blank lines".to_string(),
            line: 1,
        });
    }

    let word_count = text.split_whitespace().count();
    if word_count > opts.max_words {
        failures.push(RuleFailure {
            rule: RuleId::R5,
            message: format!("{} words exceeds the budget of {}", word_count, opts.max_words),
            line: word_budget_line(text, opts.max_words),
        });
    }

    let features = count_features(&lines);
    if opts.require_structure && !empty && !has_structure(&lines, &features) {
        failures.push(RuleFailure {
            rule: RuleId::R6,
            message: "no function definition or executable statement".to_string(),
            line: lines[0].tokens[0].line,
        });
    }

    failures.sort_by_key(|f| (f.rule as u8, f.line));
    ValidationReport {
        verdict: if failures.is_empty() { Verdict::Accepted } else { Verdict::Rejected },
        failures,
        word_count,
        feature_counts: features,
        notes: lexed.notes,
    }
}

pub fn plan_stats(text: &str) -> PlanStats {
    let lexed = tokenize_plan(text);
    let indents = line_indents(text);
    let lines = logical_lines(&lexed.tokens, &indents);
    PlanStats {
        word_count: text.split_whitespace().count(),
        line_count: text.lines().count(),
        feature_counts: count_features(&lines),
    }
}

/// R1 stack oracle over delimiter tokens. String and comment interiors
/// never reach here because the lexer folds them into single tokens.
fn check_balance(tokens: &[Token]) -> Option<RuleFailure> {
    let mut stack: Vec<&Token> = Vec::new();
    for t in tokens.iter().filter(|t| t.kind == TokenKind::Delimiter) {
        match t.text.as_str() {
            "(" | "[" | "{" => stack.push(t),
            close => match stack.pop() {
                None => {
                    return Some(RuleFailure {
                        rule: RuleId::R1,
                        message: format!("'{close}' has no matching opener"),
                        line: t.line,
                    });
                }
                Some(open) => {
                    if expected_closer(&open.text) != close {
                        return Some(RuleFailure {
                            rule: RuleId::R1,
                            message: format!("'{}' closed by '{close}'", open.text),
                            line: t.line,
                        });
                    }
                }
            },
        }
    }
    stack.first().map(|open| RuleFailure {
        rule: RuleId::R1,
        message: format!("'{}' is never closed", open.text),
        line: open.line,
    })
}

fn expected_closer(open: &str) -> &'static str {
    match open {
        "(" => ")",
        "[" => "]",
        _ => "}",
    }
}

/// Indentation columns per physical line, tabs counted as four.
fn line_indents(text: &str) -> Vec<u32> {
    text.lines()
        .map(|l| {
            let mut col = 0;
            for c in l.chars() {
                match c {
                    ' ' => col += 1,
                    '\t' => col += 4,
                    _ => break,
                }
            }
            col
        })
        .collect()
}

fn logical_lines<'a>(tokens: &'a [Token], indents: &[u32]) -> Vec<LogicalLine<'a>> {
    let mut lines = Vec::new();
    let mut current: Vec<&Token> = Vec::new();
    for t in tokens {
        match t.kind {
            TokenKind::Newline => {
                if !current.is_empty() {
                    lines.push(take_line(&mut current, indents));
                }
            }
            TokenKind::Indent | TokenKind::Dedent | TokenKind::Comment => {}
            _ => current.push(t),
        }
    }
    if !current.is_empty() {
        lines.push(take_line(&mut current, indents));
    }
    lines
}

fn take_line<'a>(current: &mut Vec<&'a Token>, indents: &[u32]) -> LogicalLine<'a> {
    let indent = indents.get(current[0].line as usize - 1).copied().unwrap_or(0);
    LogicalLine { tokens: std::mem::take(current), indent }
}

/// R3: truncation and degeneration checks.
///
/// The final line must not end mid-token (trailing binary operator,
/// trailing comma, trailing open delimiter). Every block header (a line
/// whose last token is `:`) must be followed somewhere below by a line
/// indented deeper than itself; a header at end of input therefore
/// always fires.
fn check_incomplete(lines: &[LogicalLine]) -> Vec<RuleFailure> {
    let mut failures = Vec::new();
    if let Some(last) = lines.last() {
        let t = *last.tokens.last().unwrap();
        let fail = |message: String| RuleFailure { rule: RuleId::R3, message, line: t.line };
        match t.kind {
            TokenKind::Operator if t.text == "," => {
                failures.push(fail("final line ends with a comma".to_string()));
            }
            TokenKind::Operator if TRAILING_OPS.contains(&t.text.as_str()) => {
                failures.push(fail(format!("final line ends with operator '{}'", t.text)));
            }
            TokenKind::Identifier if TRAILING_WORDS.contains(&t.text.as_str()) => {
                failures.push(fail(format!("final line ends with operator '{}'", t.text)));
            }
            TokenKind::Delimiter if matches!(t.text.as_str(), "(" | "[" | "{") => {
                failures.push(fail(format!("final line ends with open '{}'", t.text)));
            }
            _ => {}
        }
    }
    for (i, line) in lines.iter().enumerate() {
        let last = *line.tokens.last().unwrap();
        if last.kind == TokenKind::Operator && last.text == ":" {
            let has_body = lines[i + 1..].iter().any(|l| l.indent > line.indent);
            if !has_body {
                failures.push(RuleFailure {
                    rule: RuleId::R3,
                    message: format!("block header at line {} has no indented body", last.line),
                    line: last.line,
                });
            }
        }
    }
    failures
}

/// Physical line on which the word budget is crossed.
fn word_budget_line(text: &str, max_words: usize) -> u32 {
    let mut seen = 0;
    for (i, l) in text.lines().enumerate() {
        seen += l.split_whitespace().count();
        if seen > max_words {
            return i as u32 + 1;
        }
    }
    1
}

fn count_features(lines: &[LogicalLine]) -> FeatureCounts {
    let mut f = FeatureCounts::default();
    for line in lines {
        for (i, t) in line.tokens.iter().enumerate() {
            match t.kind {
                TokenKind::Keyword => match t.text.as_str() {
                    "def" => f.defs += 1,
                    "if" | "elif" => f.if_branches += 1,
                    "for" => f.for_loops += 1,
                    "while" => f.while_loops += 1,
                    "return" => f.returns += 1,
                    _ => {}
                },
                TokenKind::Identifier => {
                    let next_is_open = line.tokens.get(i + 1).is_some_and(|n| {
                        n.kind == TokenKind::Delimiter && n.text == "("
                    });
                    let after_def = i > 0
                        && line.tokens[i - 1].kind == TokenKind::Keyword
                        && line.tokens[i - 1].text == "def";
                    if next_is_open && !after_def {
                        f.calls += 1;
                    }
                }
                _ => {}
            }
        }
    }
    f
}

/// R6 passes when the plan shows any program structure: a keyword
/// statement, an assignment, or a call.
fn has_structure(lines: &[LogicalLine], features: &FeatureCounts) -> bool {
    if features.calls > 0 {
        return true;
    }
    lines.iter().flat_map(|l| &l.tokens).any(|t| match t.kind {
        TokenKind::Keyword => true,
        TokenKind::Operator => ASSIGN_OPS.contains(&t.text.as_str()),
        _ => false,
    })
}
