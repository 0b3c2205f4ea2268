//! Deterministic item generators for the four symbolic tasks.
//!
//! Each item is drawn from a ChaCha stream keyed by (seed, item index),
//! so item `i` is the same whether the batch is generated front to back,
//! in parallel, or one item at a time.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use codeplan_core::{BenchmarkItem, Task};

use crate::error::BenchError;
use crate::oracle::{coin_heads_up, dyck_completion, eval_boolean, last_letters, BRACKET_PAIRS};

const NAMES: &str = include_str!("../data/names.txt");
const COINFLIP_TEMPLATE: &str = include_str!("../data/template_coinflip.txt");
const LASTLETTER_TEMPLATE: &str = include_str!("../data/template_lastletter.txt");
const BOOLEAN_TEMPLATE: &str = include_str!("../data/template_boolean.txt");
const DYCK_TEMPLATE: &str = include_str!("../data/template_dyck.txt");

/// Upper bound on rejection-sampling retries for a single item.
const MAX_DRAWS: u32 = 10_000;

/// The built-in first-name lexicon used for coin-flip actors and
/// last-letter words.
pub fn builtin_names() -> Vec<String> {
    NAMES.lines().filter(|l| !l.is_empty()).map(str::to_string).collect()
}

/// One bracket family for the balanced-sequence task.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BracketFamily {
    pub open: char,
    pub close: char,
}

/// All four families, in canonical order.
pub fn all_families() -> Vec<BracketFamily> {
    BRACKET_PAIRS.iter().map(|&(open, close)| BracketFamily { open, close }).collect()
}

impl BracketFamily {
    /// Parses "()", "[]", "{}", or "<>".
    pub fn parse(s: &str) -> Result<Self, BenchError> {
        let mut chars = s.chars();
        if let (Some(open), Some(close), None) = (chars.next(), chars.next(), chars.next()) {
            if BRACKET_PAIRS.contains(&(open, close)) {
                return Ok(BracketFamily { open, close });
            }
        }
        Err(BenchError::Spec(format!("'{s}' is not a bracket family (expected e.g. \"()\")")))
    }
}

/// Task-specific generation parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum TaskSpec {
    CoinFlip {
        num_flips: usize,
    },
    LastLetter {
        num_words: usize,
        /// None selects the built-in name lexicon.
        lexicon: Option<Vec<String>>,
    },
    Boolean {
        max_depth: usize,
        min_atoms: usize,
        max_atoms: usize,
    },
    Dyck {
        min_prefix: usize,
        max_prefix: usize,
        families: Vec<BracketFamily>,
    },
}

impl TaskSpec {
    pub fn coinflip() -> Self {
        TaskSpec::CoinFlip { num_flips: 4 }
    }

    pub fn lastletter() -> Self {
        TaskSpec::LastLetter { num_words: 4, lexicon: None }
    }

    pub fn boolean() -> Self {
        TaskSpec::Boolean { max_depth: 3, min_atoms: 2, max_atoms: 4 }
    }

    pub fn dyck() -> Self {
        TaskSpec::Dyck { min_prefix: 4, max_prefix: 16, families: all_families() }
    }

    pub fn task(&self) -> Task {
        match self {
            TaskSpec::CoinFlip { .. } => Task::CoinFlip,
            TaskSpec::LastLetter { .. } => Task::LastLetter,
            TaskSpec::Boolean { .. } => Task::Boolean,
            TaskSpec::Dyck { .. } => Task::Dyck,
        }
    }
}

/// A complete, validated request for one batch of items.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub seed: u64,
    pub task: TaskSpec,
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |m: String| Err(BenchError::Spec(m));
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        match &self.task {
            TaskSpec::CoinFlip { num_flips } => {
                let lexicon = builtin_names().len();
                if *num_flips == 0 {
                    return fail("num_flips must be at least 1".into());
                }
                if *num_flips > lexicon {
                    return fail(format!(
                        "num_flips {num_flips} exceeds the {lexicon} available names"
                    ));
                }
            }
            TaskSpec::LastLetter { num_words, lexicon } => {
                if *num_words == 0 {
                    return fail("num_words must be at least 1".into());
                }
                let words = lexicon.as_ref().map_or_else(|| builtin_names().len(), Vec::len);
                if *num_words > words {
                    return fail(format!("num_words {num_words} exceeds the {words} lexicon entries"));
                }
                if let Some(lex) = lexicon {
                    if lex.iter().any(|w| w.trim().is_empty() || w.contains(char::is_whitespace)) {
                        return fail("lexicon entries must be non-empty single words".into());
                    }
                }
            }
            TaskSpec::Boolean { max_depth, min_atoms, max_atoms } => {
                if !(1..=16).contains(max_depth) {
                    return fail(format!("max_depth must be within 1..=16, got {max_depth}"));
                }
                if *min_atoms == 0 || min_atoms > max_atoms {
                    return fail(format!(
                        "atom range {min_atoms}..={max_atoms} must satisfy 1 <= min <= max"
                    ));
                }
                if *max_atoms > 1usize << *max_depth {
                    return fail(format!(
                        "max_atoms {max_atoms} does not fit in an expression of depth {max_depth}"
                    ));
                }
            }
            TaskSpec::Dyck { min_prefix, max_prefix, families } => {
                if *min_prefix == 0 || min_prefix > max_prefix {
                    return fail(format!(
                        "prefix range {min_prefix}..={max_prefix} must satisfy 1 <= min <= max"
                    ));
                }
                if *max_prefix > 512 {
                    return fail(format!("max_prefix {max_prefix} exceeds the limit of 512"));
                }
                if families.is_empty() {
                    return fail("at least one bracket family is required".into());
                }
            }
        }
        Ok(())
    }
}

/// Generates the full batch described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<Vec<BenchmarkItem>, BenchError> {
    spec.validate()?;
    (0..spec.n).map(|index| gen_item_unchecked(spec, index)).collect()
}

/// Generates item `index` of the batch on its own. The result is
/// byte-identical to `generate(spec)[index]`.
pub fn gen_item(spec: &GenSpec, index: usize) -> Result<BenchmarkItem, BenchError> {
    spec.validate()?;
    if index >= spec.n {
        return Err(BenchError::Spec(format!("index {index} out of range for n={}", spec.n)));
    }
    gen_item_unchecked(spec, index)
}

fn gen_item_unchecked(spec: &GenSpec, index: usize) -> Result<BenchmarkItem, BenchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let task = spec.task.task();
    let (input, gold) = match &spec.task {
        TaskSpec::CoinFlip { num_flips } => draw_coinflip(&mut rng, *num_flips),
        TaskSpec::LastLetter { num_words, lexicon } => {
            draw_lastletter(&mut rng, *num_words, lexicon.as_deref())?
        }
        TaskSpec::Boolean { max_depth, min_atoms, max_atoms } => {
            draw_boolean(&mut rng, *max_depth, *min_atoms, *max_atoms, index)?
        }
        TaskSpec::Dyck { min_prefix, max_prefix, families } => {
            draw_dyck(&mut rng, *min_prefix, *max_prefix, families, index)?
        }
    };
    Ok(BenchmarkItem {
        id: format!("{}-{}-{}", task.as_str(), spec.seed, index),
        task,
        input,
        gold: vec![gold],
        hops: None,
        seed: spec.seed,
        context: None,
    })
}

fn fill(template: &str, placeholder: &str, value: &str) -> String {
    let at = template
        .find(placeholder)
        .unwrap_or_else(|| panic!("template is missing {placeholder}"));
    let mut out = String::with_capacity(template.len() + value.len());
    out.push_str(&template[..at]);
    out.push_str(value);
    out.push_str(&template[at + placeholder.len()..]);
    out
}

fn draw_names(rng: &mut ChaCha8Rng, lexicon: &[String], count: usize) -> Vec<String> {
    sample(rng, lexicon.len(), count).iter().map(|i| lexicon[i].clone()).collect()
}

fn draw_coinflip(rng: &mut ChaCha8Rng, num_flips: usize) -> (String, String) {
    let lexicon = builtin_names();
    let actors = draw_names(rng, &lexicon, num_flips);
    let flips: Vec<bool> = (0..num_flips).map(|_| rng.random_bool(0.5)).collect();
    let mut narrative = String::new();
    for (actor, &flipped) in actors.iter().zip(&flips) {
        if flipped {
            narrative.push_str(&format!("{actor} flips the coin. "));
        } else {
            narrative.push_str(&format!("{actor} does not flip the coin. "));
        }
    }
    let input = fill(COINFLIP_TEMPLATE, "{{flips}}", &narrative);
    let gold = if coin_heads_up(true, &flips) { "yes" } else { "no" };
    (input, gold.to_string())
}

fn draw_lastletter(
    rng: &mut ChaCha8Rng,
    num_words: usize,
    lexicon: Option<&[String]>,
) -> Result<(String, String), BenchError> {
    let builtin;
    let lexicon = match lexicon {
        Some(words) => words,
        None => {
            builtin = builtin_names();
            &builtin
        }
    };
    let words = draw_names(rng, lexicon, num_words).join(" ");
    let gold = last_letters(&words)?;
    Ok((fill(LASTLETTER_TEMPLATE, "{{words}}", &words), gold))
}

// Expression tree for the Boolean task. Every leaf carries the same
// literal; rejection sampling keeps only trees whose value differs from
// it, so the answer never appears in the rendered expression.
enum Expr {
    Leaf,
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn eval(&self, leaf: bool) -> bool {
        match self {
            Expr::Leaf => leaf,
            Expr::Not(x) => !x.eval(leaf),
            Expr::And(l, r) => l.eval(leaf) && r.eval(leaf),
            Expr::Or(l, r) => l.eval(leaf) || r.eval(leaf),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Leaf => 4,
            Expr::Not(_) => 3,
            Expr::And(..) => 2,
            Expr::Or(..) => 1,
        }
    }

    fn render(&self, leaf: &str, min_prec: u8, out: &mut String) {
        let wrap = self.precedence() < min_prec;
        if wrap {
            out.push_str("( ");
        }
        match self {
            Expr::Leaf => out.push_str(leaf),
            Expr::Not(x) => {
                out.push_str("not ");
                x.render(leaf, 3, out);
            }
            Expr::And(l, r) => {
                l.render(leaf, 2, out);
                out.push_str(" and ");
                r.render(leaf, 3, out);
            }
            Expr::Or(l, r) => {
                l.render(leaf, 1, out);
                out.push_str(" or ");
                r.render(leaf, 2, out);
            }
        }
        if wrap {
            out.push_str(" )");
        }
    }
}

// Builds a random tree holding exactly `atoms` leaves within height
// `depth`. Returns the tree and its actual height.
fn build_expr(rng: &mut ChaCha8Rng, atoms: usize, depth: usize) -> (Expr, usize) {
    debug_assert!(atoms <= 1 << depth);
    if atoms == 1 {
        let mut expr = Expr::Leaf;
        let mut height = 0;
        while height < depth && rng.random_bool(0.4) {
            expr = Expr::Not(Box::new(expr));
            height += 1;
        }
        return (expr, height);
    }
    let half_cap = 1usize << (depth - 1);
    let lo = atoms.saturating_sub(half_cap).max(1);
    let hi = (atoms - 1).min(half_cap);
    let left_atoms = rng.random_range(lo..=hi);
    let (left, lh) = build_expr(rng, left_atoms, depth - 1);
    let (right, rh) = build_expr(rng, atoms - left_atoms, depth - 1);
    let mut expr = if rng.random_bool(0.5) {
        Expr::And(Box::new(left), Box::new(right))
    } else {
        Expr::Or(Box::new(left), Box::new(right))
    };
    let mut height = 1 + lh.max(rh);
    while height < depth && rng.random_bool(0.2) {
        expr = Expr::Not(Box::new(expr));
        height += 1;
    }
    (expr, height)
}

fn draw_boolean(
    rng: &mut ChaCha8Rng,
    max_depth: usize,
    min_atoms: usize,
    max_atoms: usize,
    index: usize,
) -> Result<(String, String), BenchError> {
    for _ in 0..MAX_DRAWS {
        let literal = rng.random_bool(0.5);
        let atoms = rng.random_range(min_atoms..=max_atoms);
        let (expr, _) = build_expr(rng, atoms, max_depth);
        let value = expr.eval(literal);
        if value == literal {
            continue;
        }
        let leaf = if literal { "True" } else { "False" };
        let mut rendered = String::new();
        expr.render(leaf, 0, &mut rendered);
        debug_assert_eq!(eval_boolean(&rendered).ok(), Some(value));
        let gold = if value { "True" } else { "False" };
        let input = fill(BOOLEAN_TEMPLATE, "{{expression}}", &rendered);
        if !input.contains(gold) {
            return Ok((input, gold.to_string()));
        }
    }
    Err(BenchError::Exhausted { index, attempts: MAX_DRAWS })
}

// Appends a uniformly drawn balanced word of `pairs` bracket pairs.
fn balanced_word(rng: &mut ChaCha8Rng, pairs: usize, families: &[BracketFamily], out: &mut Vec<char>) {
    if pairs == 0 {
        return;
    }
    let inner = rng.random_range(0..pairs);
    let family = families[rng.random_range(0..families.len())];
    out.push(family.open);
    balanced_word(rng, inner, families, out);
    out.push(family.close);
    balanced_word(rng, pairs - 1 - inner, families, out);
}

fn draw_dyck(
    rng: &mut ChaCha8Rng,
    min_prefix: usize,
    max_prefix: usize,
    families: &[BracketFamily],
    index: usize,
) -> Result<(String, String), BenchError> {
    for _ in 0..MAX_DRAWS {
        let len = rng.random_range(min_prefix..=max_prefix);
        let min_pairs = len / 2 + 1;
        let pairs = rng.random_range(min_pairs..=len.max(min_pairs));
        let mut word = Vec::with_capacity(2 * pairs);
        balanced_word(rng, pairs, families, &mut word);
        let prefix: Vec<String> = word[..len].iter().map(|c| c.to_string()).collect();
        let prefix = prefix.join(" ");
        let gold = dyck_completion(&prefix).expect("truncated balanced word is legal");
        if gold.is_empty() {
            continue;
        }
        let input = fill(DYCK_TEMPLATE, "{{prefix}}", &prefix);
        if !input.contains(&gold) {
            return Ok((input, gold));
        }
    }
    Err(BenchError::Exhausted { index, attempts: MAX_DRAWS })
}
