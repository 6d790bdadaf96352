//! Tokenizer for Java source text.
//!
//! Positions are 0-based lines and columns counted in chars; `end_col` is
//! exclusive. `<`, `>` and `=` are always emitted on their own so that
//! nested generics (`List<List<T>>`) need no splitting later.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokKind {
    Ident,
    Number,
    Str,
    Char,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokKind,
    pub text: String,
    pub line: u32,
    pub col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Token {
    pub fn is(&self, s: &str) -> bool {
        self.text == s && self.kind != TokKind::Str && self.kind != TokKind::Char
    }

    /// Identifier that is not a reserved word.
    pub fn is_name(&self) -> bool {
        self.kind == TokKind::Ident && !is_keyword(&self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line + 1, self.col + 1, self.message)
    }
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const", "continue",
    "default", "do", "double", "else", "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long", "native", "new", "package", "private",
    "protected", "public", "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while", "true", "false", "null",
];

pub const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub fn is_primitive(s: &str) -> bool {
    PRIMITIVES.contains(&s)
}

const PUNCT2: &[&str] =
    &["->", "::", "==", "!=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="];

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    col: u32,
    _src: &'a str,
}

impl Cursor<'_> {
    fn peek(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 0;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c))
    }

    fn err(&self, message: impl Into<String>) -> LexError {
        LexError { line: self.line, col: self.col, message: message.into() }
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut c = Cursor { chars: src.chars().collect(), pos: 0, line: 0, col: 0, _src: src };
    let mut out = Vec::new();
    // a leading byte-order mark is not part of the program
    if c.peek(0) == Some('\u{feff}') {
        c.pos += 1;
    }
    while let Some(ch) = c.peek(0) {
        if ch.is_whitespace() {
            c.bump();
            continue;
        }
        if c.starts_with("//") {
            while c.peek(0).is_some_and(|x| x != '\n') {
                c.bump();
            }
            continue;
        }
        if c.starts_with("/*") {
            c.bump();
            c.bump();
            loop {
                if c.starts_with("*/") {
                    c.bump();
                    c.bump();
                    break;
                }
                if c.bump().is_none() {
                    return Err(c.err("unterminated comment"));
                }
            }
            continue;
        }
        let (line, col) = (c.line, c.col);
        let start = c.pos;
        let kind = if ch.is_alphabetic() || ch == '_' || ch == '$' {
            while c.peek(0).is_some_and(|x| x.is_alphanumeric() || x == '_' || x == '$') {
                c.bump();
            }
            TokKind::Ident
        } else if ch.is_ascii_digit() || (ch == '.' && c.peek(1).is_some_and(|x| x.is_ascii_digit())) {
            lex_number(&mut c);
            TokKind::Number
        } else if c.starts_with("\"\"\"") {
            for _ in 0..3 {
                c.bump();
            }
            loop {
                if c.starts_with("\\") {
                    c.bump();
                    c.bump();
                    continue;
                }
                if c.starts_with("\"\"\"") {
                    for _ in 0..3 {
                        c.bump();
                    }
                    break;
                }
                if c.bump().is_none() {
                    return Err(c.err("unterminated text block"));
                }
            }
            TokKind::Str
        } else if ch == '"' || ch == '\'' {
            c.bump();
            loop {
                match c.bump() {
                    None | Some('\n') => return Err(c.err("unterminated literal")),
                    Some('\\') => {
                        c.bump();
                    }
                    Some(x) if x == ch => break,
                    Some(_) => {}
                }
            }
            if ch == '"' {
                TokKind::Str
            } else {
                TokKind::Char
            }
        } else {
            let n = if c.starts_with("...") {
                3
            } else if PUNCT2.iter().any(|p| c.starts_with(p)) {
                2
            } else {
                1
            };
            for _ in 0..n {
                c.bump();
            }
            if !"(){}[];,.@=<>!~?:+-*/&|^%".contains(ch) {
                return Err(LexError { line, col, message: format!("unexpected character `{ch}`") });
            }
            TokKind::Punct
        };
        let text: String = c.chars[start..c.pos].iter().collect();
        out.push(Token { kind, text, line, col, end_line: c.line, end_col: c.col });
    }
    Ok(out)
}

fn lex_number(c: &mut Cursor<'_>) {
    if c.starts_with("0x") || c.starts_with("0X") || c.starts_with("0b") || c.starts_with("0B") {
        c.bump();
        c.bump();
    }
    let mut prev = ' ';
    while let Some(x) = c.peek(0) {
        let exp_sign = (x == '+' || x == '-') && matches!(prev, 'e' | 'E' | 'p' | 'P');
        let dot = x == '.' && !c.peek(1).is_some_and(|d| d.is_alphabetic() && d != 'e' && d != 'E');
        if x.is_ascii_alphanumeric() || x == '_' || dot || exp_sign {
            prev = x;
            c.bump();
        } else {
            break;
        }
    }
}
