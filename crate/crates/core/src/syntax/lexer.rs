//! A small Java tokenizer.
//!
//! It never fails: unterminated literals and comments run to end of input.

use super::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Number,
    String,
    Char,
    LineComment,
    BlockComment,
    Operator,
    Whitespace,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

impl Token {
    pub fn text<'s>(&self, source: &'s str) -> &'s str {
        &source[self.span.start..self.span.end]
    }

    pub fn is_trivia(&self) -> bool {
        self.kind == TokenKind::Whitespace
    }
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null",
];

// Longest first so that greedy matching works.
const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
    ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

/// Tokenize `source`, including whitespace tokens. Token spans tile the input.
pub fn tokenize(source: &str) -> Vec<Token> {
    let bytes = source.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < source.len() {
        let rest = &source[i..];
        let c = rest.chars().next().expect("non-empty rest");
        let (kind, len) = if c.is_whitespace() {
            let len = rest.find(|ch: char| !ch.is_whitespace()).unwrap_or(rest.len());
            (TokenKind::Whitespace, len)
        } else if rest.starts_with("//") {
            let len = rest.find(['\n', '\r']).unwrap_or(rest.len());
            (TokenKind::LineComment, len)
        } else if rest.starts_with("/*") {
            let len = rest[2..].find("*/").map(|p| p + 4).unwrap_or(rest.len());
            (TokenKind::BlockComment, len)
        } else if rest.starts_with("\"\"\"") {
            (TokenKind::String, text_block_len(rest))
        } else if c == '"' {
            (TokenKind::String, quoted_len(rest, b'"'))
        } else if c == '\'' {
            (TokenKind::Char, quoted_len(rest, b'\''))
        } else if c.is_ascii_digit()
            || (c == '.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit()))
        {
            (TokenKind::Number, number_len(rest))
        } else if is_ident_start(c) {
            let len = rest.find(|ch: char| !is_ident_part(ch)).unwrap_or(rest.len());
            let kind = if is_keyword(&rest[..len]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            };
            (kind, len)
        } else if let Some(op) = OPERATORS.iter().find(|op| rest.starts_with(**op)) {
            (TokenKind::Operator, op.len())
        } else if c.is_ascii_punctuation() {
            (TokenKind::Operator, 1)
        } else {
            (TokenKind::Unknown, c.len_utf8())
        };
        out.push(Token { kind, span: Span::new(i, i + len) });
        i += len;
    }
    out
}

/// Tokens without whitespace.
pub fn significant_tokens(source: &str) -> Vec<Token> {
    tokenize(source).into_iter().filter(|t| !t.is_trivia()).collect()
}

/// Texts of the non-whitespace tokens.
pub fn token_texts(source: &str) -> Vec<&str> {
    significant_tokens(source).iter().map(|t| t.text(source)).collect()
}

/// Every distinct identifier occurring in `source` outside literals and comments.
pub fn identifiers(source: &str) -> std::collections::HashSet<&str> {
    tokenize(source)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Identifier)
        .map(|t| t.text(source))
        .collect()
}

fn quoted_len(rest: &str, quote: u8) -> usize {
    let b = rest.as_bytes();
    let mut j = 1;
    while j < b.len() {
        match b[j] {
            b'\\' => j += 2,
            b'\n' => return j,
            x if x == quote => return j + 1,
            _ => j += 1,
        }
    }
    b.len()
}

fn text_block_len(rest: &str) -> usize {
    let b = rest.as_bytes();
    let mut j = 3;
    while j < b.len() {
        if b[j] == b'\\' {
            j += 2;
        } else if rest[j..].starts_with("\"\"\"") {
            return j + 3;
        } else {
            j += 1;
        }
    }
    b.len()
}

fn number_len(rest: &str) -> usize {
    let b = rest.as_bytes();
    let mut j = 0;
    if rest.starts_with("0x") || rest.starts_with("0X") || rest.starts_with("0b") || rest.starts_with("0B")
    {
        j = 2;
        while j < b.len() && (b[j].is_ascii_hexdigit() || b[j] == b'_') {
            j += 1;
        }
        if j < b.len() && (b[j] == b'L' || b[j] == b'l') {
            j += 1;
        }
        return j;
    }
    while j < b.len() {
        let x = b[j];
        let exponent_sign = (x == b'+' || x == b'-') && j > 0 && matches!(b[j - 1], b'e' | b'E');
        if x.is_ascii_digit() || x == b'_' || x == b'.' || x == b'e' || x == b'E' || exponent_sign {
            j += 1;
        } else {
            break;
        }
    }
    if j < b.len() && matches!(b[j], b'f' | b'F' | b'd' | b'D' | b'l' | b'L') {
        j += 1;
    }
    j
}
