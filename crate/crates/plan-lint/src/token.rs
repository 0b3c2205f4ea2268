//! Total lexer for pseudo-Python plan text.
//!
//! Tokenization never fails. Concatenating token texts in stream order,
//! together with the whitespace skipped between them, reconstructs the
//! input byte-exactly; `Indent` and `Dedent` carry empty text.

use serde::Serialize;

/// Keywords recognized by the plan grammar. Everything else that looks
/// like a word is an `Identifier`.
pub const KEYWORDS: [&str; 7] = ["def", "return", "for", "if", "elif", "else", "while"];

/// Multi-character operators, longest first so maximal munch works by
/// scanning the list in order.
const MULTI_OPS: [&str; 24] = [
    "**=", "//=", "<<=", ">>=", "...", "==", "!=", "<=", ">=", "->", ":=", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "@=", "**", "//", "<<", ">>",
];

const OP_CHARS: &str = "+-*/%=<>!&|^~:.;,@?\\";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Keyword,
    Identifier,
    Delimiter,
    StringLiteral,
    Operator,
    Newline,
    Indent,
    Dedent,
    Comment,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offset of the token start in the source.
    pub offset: usize,
    /// 1-based physical line of the token start.
    pub line: u32,
}

/// Lexer output: the token stream plus non-fatal observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedPlan {
    pub tokens: Vec<Token>,
    /// Lines on which a string literal ran to end of line or input
    /// without a closing quote.
    pub unterminated_strings: Vec<u32>,
    /// Indentation oddities, e.g. a dedent to a level never opened.
    pub notes: Vec<String>,
}

impl TokenizedPlan {
    /// Tokens that carry program content: everything except layout
    /// (`Newline`, `Indent`, `Dedent`) and comments.
    pub fn meaningful(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| {
            !matches!(
                t.kind,
                TokenKind::Newline | TokenKind::Indent | TokenKind::Dedent | TokenKind::Comment
            )
        })
    }
}

struct Lexer<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    /// Index into `chars`.
    pos: usize,
    line: u32,
    /// Open-bracket depth; newlines inside brackets are plain whitespace.
    depth: u32,
    indent_stack: Vec<u32>,
    at_line_start: bool,
    out: TokenizedPlan,
}

pub fn tokenize_plan(text: &str) -> TokenizedPlan {
    let mut lx = Lexer {
        src: text,
        chars: text.char_indices().collect(),
        pos: 0,
        line: 1,
        depth: 0,
        indent_stack: vec![0],
        at_line_start: true,
        out: TokenizedPlan { tokens: Vec::new(), unterminated_strings: Vec::new(), notes: Vec::new() },
    };
    lx.run();
    lx.out
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn peek_at(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(o, _)| o)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        if c == '\n' {
            self.line += 1;
        }
        self.pos += 1;
        Some(c)
    }

    fn emit(&mut self, kind: TokenKind, start: usize, line: u32) {
        let end = self.offset();
        self.out.tokens.push(Token { kind, text: self.src[start..end].to_string(), offset: start, line });
    }

    fn run(&mut self) {
        while self.pos < self.chars.len() {
            if self.at_line_start && self.depth == 0 {
                self.handle_line_start();
                if self.pos >= self.chars.len() {
                    break;
                }
            }
            let start = self.offset();
            let line = self.line;
            let c = self.peek().unwrap();
            match c {
                '\n' => {
                    self.bump();
                    if self.depth == 0 {
                        self.out.tokens.push(Token {
                            kind: TokenKind::Newline,
                            text: "\n".to_string(),
                            offset: start,
                            line,
                        });
                    }
                    self.at_line_start = true;
                }
                ' ' | '\t' | '\r' => {
                    self.bump();
                }
                '#' => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                    self.emit(TokenKind::Comment, start, line);
                }
                '"' | '\'' => self.scan_string(c),
                '(' | '[' | '{' => {
                    self.bump();
                    self.depth += 1;
                    self.emit(TokenKind::Delimiter, start, line);
                }
                ')' | ']' | '}' => {
                    self.bump();
                    self.depth = self.depth.saturating_sub(1);
                    self.emit(TokenKind::Delimiter, start, line);
                }
                c if c.is_alphabetic() || c == '_' => {
                    while let Some(c) = self.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let text = &self.src[start..self.offset()];
                    let kind = if KEYWORDS.contains(&text) { TokenKind::Keyword } else { TokenKind::Identifier };
                    self.emit(kind, start, line);
                }
                c if c.is_ascii_digit() => {
                    self.scan_number();
                    self.emit(TokenKind::Other, start, line);
                }
                c if OP_CHARS.contains(c) => {
                    self.scan_operator();
                    self.emit(TokenKind::Operator, start, line);
                }
                _ => {
                    self.bump();
                    self.emit(TokenKind::Other, start, line);
                }
            }
        }
    }

    /// Measure indentation at a logical line start and emit Indent or
    /// Dedent tokens against the indent stack. Blank and comment-only
    /// lines do not move the stack. Tabs count as four columns.
    fn handle_line_start(&mut self) {
        self.at_line_start = false;
        let mut col: u32 = 0;
        while let Some(c) = self.peek() {
            match c {
                ' ' => col += 1,
                '\t' => col += 4,
                _ => break,
            }
            self.bump();
        }
        match self.peek() {
            None | Some('\n') | Some('\r') | Some('#') => return,
            _ => {}
        }
        let offset = self.offset();
        let line = self.line;
        let top = *self.indent_stack.last().unwrap();
        if col > top {
            self.indent_stack.push(col);
            self.out.tokens.push(Token { kind: TokenKind::Indent, text: String::new(), offset, line });
        } else if col < top {
            while *self.indent_stack.last().unwrap() > col {
                self.indent_stack.pop();
                self.out.tokens.push(Token { kind: TokenKind::Dedent, text: String::new(), offset, line });
            }
            if *self.indent_stack.last().unwrap() != col {
                // Tolerated in pseudocode: align to the new level.
                self.out.notes.push(format!("inconsistent dedent to column {col} at line {line}"));
                self.indent_stack.push(col);
            }
        }
    }

    fn scan_string(&mut self, quote: char) {
        let start = self.offset();
        let line = self.line;
        self.bump();
        let triple = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if triple {
            self.bump();
            self.bump();
        }
        let mut terminated = false;
        while let Some(c) = self.peek() {
            if c == '\\' {
                self.bump();
                self.bump();
                continue;
            }
            if triple {
                if c == quote && self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                    self.bump();
                    self.bump();
                    self.bump();
                    terminated = true;
                    break;
                }
                self.bump();
            } else {
                if c == '\n' {
                    // Leave the newline for line handling.
                    break;
                }
                self.bump();
                if c == quote {
                    terminated = true;
                    break;
                }
            }
        }
        if !terminated {
            self.out.unterminated_strings.push(line);
        }
        self.emit(TokenKind::StringLiteral, start, line);
    }

    fn scan_number(&mut self) {
        let first = self.bump().unwrap();
        if first == '0' && matches!(self.peek(), Some('x' | 'X' | 'b' | 'B' | 'o' | 'O')) {
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                self.bump();
            }
            return;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '_') {
            self.bump();
        }
        if self.peek() == Some('.') && matches!(self.peek_at(1), Some(c) if c.is_ascii_digit()) {
            self.bump();
            while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '_') {
                self.bump();
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let mut ahead = 1;
            if matches!(self.peek_at(1), Some('+' | '-')) {
                ahead = 2;
            }
            if matches!(self.peek_at(ahead), Some(c) if c.is_ascii_digit()) {
                for _ in 0..=ahead {
                    self.bump();
                }
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.bump();
                }
            }
        }
    }

    fn scan_operator(&mut self) {
        let rest = &self.src[self.offset()..];
        for op in MULTI_OPS {
            if rest.starts_with(op) {
                for _ in 0..op.len() {
                    self.bump();
                }
                return;
            }
        }
        self.bump();
    }
}
