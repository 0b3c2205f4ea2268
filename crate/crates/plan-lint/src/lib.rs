//! Tolerant lexer and structural validator for code-form plans.
//!
//! Plans are short pseudo-Python programs produced by a language model.
//! The lexer never fails: any byte sequence tokenizes, with problems
//! (unterminated strings, inconsistent dedents) reported on the side.
//! The validator applies structural rules R1..R6 to decide whether a
//! plan is a valid, complete program sketch or a truncated/degenerate
//! generation that should be filtered out of training data.

pub mod token;
pub mod validate;

pub use token::{tokenize_plan, Token, TokenKind, TokenizedPlan};
pub use validate::{
    plan_stats, validate_plan, FeatureCounts, PlanStats, RuleFailure, RuleId, ValidateOptions,
    ValidationReport, Verdict,
};
