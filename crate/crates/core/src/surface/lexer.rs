//! Tokenizer. Unicode operators are mapped onto their ASCII spellings.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `0`, `1` or `2`.
    Num(u8),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Comma,
    Colon,
    Semi,
    Dot,
    Pipe,
    Backslash,
    Arrow,
    MapsTo,
    DefEq,
    At,
    Proj1,
    Proj2,
    Le,
    EqEq,
    And,
    Or,
    Implies,
    Hash(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Num(n) => return write!(f, "`{n}`"),
            Tok::Hash(s) => return write!(f, "`#{s}`"),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LAngle => "<",
            Tok::RAngle => ">",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Dot => ".",
            Tok::Pipe => "|",
            Tok::Backslash => "\\",
            Tok::Arrow => "->",
            Tok::MapsTo => "|->",
            Tok::DefEq => ":=",
            Tok::At => "@",
            Tok::Proj1 => ".1",
            Tok::Proj2 => ".2",
            Tok::Le => "<=",
            Tok::EqEq => "==",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Implies => "=>",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

/// 1-based line and byte column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// Byte offset into the source.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: unexpected character {ch:?}")]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub ch: char,
}

fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() || c == '_') && !matches!(c, 'λ' | 'Σ')
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() || c == '_' || c == '\'') && !matches!(c, 'λ' | 'Σ')
}

/// ASCII spellings, longest first, followed by Unicode aliases.
const SYMBOLS: &[(&str, Tok)] = &[
    ("|->", Tok::MapsTo),
    ("->", Tok::Arrow),
    (":=", Tok::DefEq),
    ("<=", Tok::Le),
    ("==", Tok::EqEq),
    ("/\\", Tok::And),
    ("\\/", Tok::Or),
    ("=>", Tok::Implies),
    (".1", Tok::Proj1),
    (".2", Tok::Proj2),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("[", Tok::LBracket),
    ("]", Tok::RBracket),
    ("<", Tok::LAngle),
    (">", Tok::RAngle),
    (",", Tok::Comma),
    (":", Tok::Colon),
    (";", Tok::Semi),
    (".", Tok::Dot),
    ("|", Tok::Pipe),
    ("\\", Tok::Backslash),
    ("@", Tok::At),
    ("λ", Tok::Backslash),
    ("→", Tok::Arrow),
    ("↦", Tok::MapsTo),
    ("≔", Tok::DefEq),
    ("≤", Tok::Le),
    ("≡", Tok::EqEq),
    ("∧", Tok::And),
    ("∨", Tok::Or),
    ("⇒", Tok::Implies),
    ("⟨", Tok::LAngle),
    ("⟩", Tok::RAngle),
];

/// Unicode spellings of keywords.
const WORD_ALIASES: &[(&str, &str)] = &[("Σ", "Sig"), ("⊤", "TOP"), ("⊥", "BOT"), ("𝟚", "2")];

pub fn lex(src: &str) -> Result<Vec<Token>, LexError> {
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    while i < src.len() {
        let rest = &src[i..];
        let c = rest.chars().next().expect("non-empty remainder");
        let pos = Pos { line, col: i - line_start + 1 };
        if c == '\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if rest.starts_with("--") {
            i += rest.find('\n').unwrap_or(rest.len());
            continue;
        }
        let offset = i;
        let push = move |out: &mut Vec<Token>, tok: Tok| out.push(Token { tok, pos, offset });
        if let Some((alias, word)) = WORD_ALIASES.iter().find(|(a, _)| rest.starts_with(a)) {
            let tok = if *word == "2" { Tok::Num(2) } else { Tok::Ident(word.to_string()) };
            push(&mut out, tok);
            i += alias.len();
            continue;
        }
        if c == '#' {
            let word: String = rest[1..].chars().take_while(|c| is_ident_char(*c)).collect();
            if word.is_empty() {
                return Err(LexError { line: pos.line, col: pos.col, ch: c });
            }
            i += 1 + word.len();
            push(&mut out, Tok::Hash(word));
            continue;
        }
        if c.is_ascii_digit() {
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            match digits.as_str() {
                "0" | "1" | "2" => push(&mut out, Tok::Num(digits.as_bytes()[0] - b'0')),
                _ => return Err(LexError { line: pos.line, col: pos.col, ch: c }),
            }
            i += digits.len();
            continue;
        }
        if is_ident_start(c) {
            let word: String = rest.chars().take_while(|c| is_ident_char(*c)).collect();
            i += word.len();
            push(&mut out, Tok::Ident(word));
            continue;
        }
        if let Some((sym, tok)) = SYMBOLS.iter().find(|(s, _)| rest.starts_with(s)) {
            push(&mut out, tok.clone());
            i += sym.len();
            continue;
        }
        return Err(LexError { line: pos.line, col: pos.col, ch: c });
    }
    let pos = Pos { line, col: src.len() - line_start + 1 };
    out.push(Token { tok: Tok::Eof, pos, offset: src.len() });
    Ok(out)
}
