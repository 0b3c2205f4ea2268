//! Exact solvers for the symbolic tasks.
//!
//! Every generator in this crate derives its gold answers from these
//! functions, and the test suites check them against brute-force
//! reimplementations, so they are deliberately small and direct.

use crate::error::BenchError;

/// Tracks a coin through a sequence of flips.
///
/// `flips[i]` is true when actor `i` actually flips (reverses) the coin.
/// Returns true when the coin ends heads up: the initial orientation
/// XORed with the parity of the flip count.
pub fn coin_heads_up(initial_heads: bool, flips: &[bool]) -> bool {
    let reversals = flips.iter().filter(|&&f| f).count();
    initial_heads ^ (reversals % 2 == 1)
}

/// Concatenates the last letter of each word, lowercased.
///
/// Words are whitespace-separated. An empty input or a word with no
/// characters cannot happen from `str::split_whitespace`, so the only
/// error is an input with no words at all.
pub fn last_letters(words: &str) -> Result<String, BenchError> {
    let mut out = String::new();
    for word in words.split_whitespace() {
        let last = word.chars().last().expect("split_whitespace yields non-empty");
        out.extend(last.to_lowercase());
    }
    if out.is_empty() {
        return Err(BenchError::EmptyInput("no words to take letters from".into()));
    }
    Ok(out)
}

/// Evaluates a Boolean expression over `True`/`False` with `not`, `and`,
/// `or`, and parentheses. Precedence is `not` > `and` > `or`.
///
/// Errors carry the byte offset of the offending token.
pub fn eval_boolean(expr: &str) -> Result<bool, BenchError> {
    let tokens = bool_tokens(expr)?;
    let mut parser = BoolParser { tokens: &tokens, pos: 0 };
    let value = parser.or_expr()?;
    if let Some(tok) = parser.peek() {
        return Err(BenchError::BoolSyntax {
            offset: tok.offset,
            message: format!("unexpected '{}' after complete expression", tok.text),
        });
    }
    Ok(value)
}

struct BoolToken<'a> {
    text: &'a str,
    offset: usize,
}

fn bool_tokens(expr: &str) -> Result<Vec<BoolToken<'_>>, BenchError> {
    let mut tokens = Vec::new();
    let bytes = expr.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == '(' || c == ')' {
            tokens.push(BoolToken { text: &expr[i..i + 1], offset: i });
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                i += 1;
            }
            tokens.push(BoolToken { text: &expr[start..i], offset: start });
        } else {
            return Err(BenchError::BoolSyntax {
                offset: i,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(tokens)
}

struct BoolParser<'a, 'b> {
    tokens: &'b [BoolToken<'a>],
    pos: usize,
}

impl<'a, 'b> BoolParser<'a, 'b> {
    fn peek(&self) -> Option<&BoolToken<'a>> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&BoolToken<'a>> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn end_offset(&self) -> usize {
        self.tokens.last().map_or(0, |t| t.offset + t.text.len())
    }

    fn or_expr(&mut self) -> Result<bool, BenchError> {
        let mut value = self.and_expr()?;
        while self.peek().is_some_and(|t| t.text == "or") {
            self.pos += 1;
            let rhs = self.and_expr()?;
            value = value || rhs;
        }
        Ok(value)
    }

    fn and_expr(&mut self) -> Result<bool, BenchError> {
        let mut value = self.not_expr()?;
        while self.peek().is_some_and(|t| t.text == "and") {
            self.pos += 1;
            let rhs = self.not_expr()?;
            value = value && rhs;
        }
        Ok(value)
    }

    fn not_expr(&mut self) -> Result<bool, BenchError> {
        if self.peek().is_some_and(|t| t.text == "not") {
            self.pos += 1;
            return Ok(!self.not_expr()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<bool, BenchError> {
        let end = self.end_offset();
        let Some(tok) = self.bump() else {
            return Err(BenchError::BoolSyntax {
                offset: end,
                message: "expression ends where a value was expected".into(),
            });
        };
        match tok.text {
            "True" => Ok(true),
            "False" => Ok(false),
            "(" => {
                let offset = tok.offset;
                let value = self.or_expr()?;
                match self.bump() {
                    Some(t) if t.text == ")" => Ok(value),
                    Some(t) => Err(BenchError::BoolSyntax {
                        offset: t.offset,
                        message: format!("expected ')' but found '{}'", t.text),
                    }),
                    None => Err(BenchError::BoolSyntax {
                        offset,
                        message: "'(' is never closed".into(),
                    }),
                }
            }
            other => Err(BenchError::BoolSyntax {
                offset: tok.offset,
                message: format!("expected a value but found '{other}'"),
            }),
        }
    }
}

/// The four bracket families used by the balanced-sequence task.
pub const BRACKET_PAIRS: [(char, char); 4] = [('(', ')'), ('[', ']'), ('{', '}'), ('<', '>')];

fn closer_for(open: char) -> Option<char> {
    BRACKET_PAIRS.iter().find(|&&(o, _)| o == open).map(|&(_, c)| c)
}

fn is_closer(c: char) -> bool {
    BRACKET_PAIRS.iter().any(|&(_, close)| close == c)
}

/// Computes the unique shortest completion that balances a bracket
/// sequence: the closers for every still-open bracket, innermost first,
/// space-separated. A sequence that is already balanced completes to "".
///
/// Tokens are whitespace-separated single brackets; anything else is an
/// error carrying the byte offset of the offending token.
pub fn dyck_completion(prefix: &str) -> Result<String, BenchError> {
    let mut stack: Vec<char> = Vec::new();
    let mut offset = 0;
    for token in prefix.split_whitespace() {
        offset = find_from(prefix, token, offset);
        let mut chars = token.chars();
        let c = chars.next().expect("split_whitespace yields non-empty");
        if chars.next().is_some() {
            return Err(BenchError::DyckSyntax {
                offset,
                message: format!("'{token}' is not a single bracket"),
            });
        }
        if let Some(close) = closer_for(c) {
            stack.push(close);
        } else if is_closer(c) {
            match stack.pop() {
                Some(expected) if expected == c => {}
                Some(expected) => {
                    return Err(BenchError::DyckSyntax {
                        offset,
                        message: format!("'{c}' closes a bracket that needs '{expected}'"),
                    });
                }
                None => {
                    return Err(BenchError::DyckSyntax {
                        offset,
                        message: format!("'{c}' has no open bracket to close"),
                    });
                }
            }
        } else {
            return Err(BenchError::DyckSyntax {
                offset,
                message: format!("'{c}' is not a bracket"),
            });
        }
        offset += token.len();
    }
    let closers: Vec<String> = stack.iter().rev().map(|c| c.to_string()).collect();
    Ok(closers.join(" "))
}

/// True when the whitespace-separated bracket sequence is balanced.
pub fn dyck_balanced(sequence: &str) -> bool {
    matches!(dyck_completion(sequence).as_deref(), Ok(""))
}

// Byte offset of the next occurrence of `token` at or after `from`.
// Tokens come from split_whitespace on the same string, so this always finds one.
fn find_from(haystack: &str, token: &str, from: usize) -> usize {
    haystack[from..].find(token).map_or(from, |i| from + i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coin_parity_matches_step_simulation() {
        for k in 0..=8u32 {
            for pattern in 0..(1u32 << k) {
                let flips: Vec<bool> = (0..k).map(|i| pattern >> i & 1 == 1).collect();
                let mut heads = true;
                for &f in &flips {
                    if f {
                        heads = !heads;
                    }
                }
                assert_eq!(coin_heads_up(true, &flips), heads, "pattern {pattern:b}");
                assert_eq!(coin_heads_up(false, &flips), !heads);
            }
        }
    }

    #[test]
    fn last_letters_lowercases_and_concatenates() {
        assert_eq!(last_letters("Ofe Aliza Betzy Rohan").unwrap(), "eayn");
        assert_eq!(last_letters("Whitney Erica").unwrap(), "ya");
        assert_eq!(last_letters("single").unwrap(), "e");
    }

    #[test]
    fn last_letters_rejects_blank_input() {
        assert!(matches!(last_letters("  \t "), Err(BenchError::EmptyInput(_))));
    }

    #[test]
    fn boolean_precedence_is_not_then_and_then_or() {
        assert!(eval_boolean("True").unwrap());
        assert!(!eval_boolean("not True").unwrap());
        assert!(eval_boolean("not ( True and False )").unwrap());
        assert!(eval_boolean("True or False and False").unwrap());
        assert!(!eval_boolean("( True or False ) and False").unwrap());
        assert!(eval_boolean("not not True").unwrap());
        assert!(eval_boolean("not False and True").unwrap());
    }

    #[test]
    fn boolean_errors_carry_offsets() {
        match eval_boolean("True and") {
            Err(BenchError::BoolSyntax { offset, .. }) => assert_eq!(offset, 8),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match eval_boolean("True True") {
            Err(BenchError::BoolSyntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match eval_boolean("( True") {
            Err(BenchError::BoolSyntax { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match eval_boolean("True & False") {
            Err(BenchError::BoolSyntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn dyck_closes_innermost_first() {
        assert_eq!(dyck_completion("( [").unwrap(), "] )");
        assert_eq!(dyck_completion("( [ { } ").unwrap(), "] )");
        assert_eq!(dyck_completion("< { ( ) }").unwrap(), ">");
        assert_eq!(dyck_completion("( )").unwrap(), "");
        assert_eq!(dyck_completion("").unwrap(), "");
    }

    #[test]
    fn dyck_rejects_illegal_tokens() {
        match dyck_completion("( ]") {
            Err(BenchError::DyckSyntax { offset, message }) => {
                assert_eq!(offset, 2);
                assert!(message.contains("')'"), "{message}");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        match dyck_completion(") (") {
            Err(BenchError::DyckSyntax { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match dyck_completion("( x )") {
            Err(BenchError::DyckSyntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match dyck_completion("( ()") {
            Err(BenchError::DyckSyntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn completion_always_balances() {
        let prefixes = ["( [", "{ < ( ) >", "[ [ [", "( ) ( ["];
        for prefix in prefixes {
            let gold = dyck_completion(prefix).unwrap();
            let full = format!("{prefix} {gold}");
            assert!(dyck_balanced(&full), "{full:?}");
        }
    }
}
