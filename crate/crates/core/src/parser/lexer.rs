use std::fmt;

use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    Word(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Lt,
    Gt,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Not => f.write_str("`~`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::Lt => f.write_str("`<`"),
            Tok::Gt => f.write_str("`>`"),
        }
    }
}

#[derive(Clone, Debug)]
pub(super) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(super) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'[' => Some(Tok::LBracket),
            b']' => Some(Tok::RBracket),
            b'{' => Some(Tok::LBrace),
            b'}' => Some(Tok::RBrace),
            b',' => Some(Tok::Comma),
            b'~' => Some(Tok::Not),
            b'&' => Some(Tok::And),
            b'|' => Some(Tok::Or),
            b'>' => Some(Tok::Gt),
            _ => None,
        };
        let tok = if let Some(t) = single {
            i += 1;
            t
        } else if text[i..].starts_with("<->") {
            i += 3;
            Tok::Iff
        } else if text[i..].starts_with("->") {
            i += 2;
            Tok::Implies
        } else if c == b'<' {
            i += 1;
            Tok::Lt
        } else if c == b'"' || c == b'\'' {
            let close = text[i + 1..].find(c as char).ok_or_else(|| {
                ParseError::new(ParseErrorKind::Lexical, SourceSpan::new(start, text.len()), "unterminated string")
            })?;
            let s = text[i + 1..i + 1 + close].to_string();
            i += close + 2;
            Tok::Str(s)
        } else if c.is_ascii_alphanumeric() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Word(text[start..i].to_string())
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            return Err(ParseError::new(
                ParseErrorKind::Lexical,
                SourceSpan::new(start, start + ch.len_utf8()),
                format!("unexpected character {ch:?}"),
            ));
        };
        out.push(Token {
            tok,
            span: SourceSpan::new(start, i),
        });
    }
    Ok(out)
}

/// Reports the first unmatched or mismatched bracket of any kind.
pub(super) fn check_balance(tokens: &[Token]) -> Result<(), ParseError> {
    let mut stack: Vec<&Token> = Vec::new();
    for t in tokens {
        let closes = match t.tok {
            Tok::LParen | Tok::LBracket | Tok::LBrace => {
                stack.push(t);
                continue;
            }
            Tok::RParen => Tok::LParen,
            Tok::RBracket => Tok::LBracket,
            Tok::RBrace => Tok::LBrace,
            _ => continue,
        };
        match stack.pop() {
            Some(open) if open.tok == closes => {}
            Some(open) => {
                return Err(ParseError::new(
                    ParseErrorKind::UnbalancedParens,
                    t.span,
                    format!("{} does not match {} at {}", t.tok, open.tok, open.span),
                ))
            }
            None => {
                return Err(ParseError::new(
                    ParseErrorKind::UnbalancedParens,
                    t.span,
                    format!("{} has no matching opener", t.tok),
                ))
            }
        }
    }
    match stack.pop() {
        Some(open) => Err(ParseError::new(
            ParseErrorKind::UnbalancedParens,
            open.span,
            format!("{} is never closed", open.tok),
        )),
        None => Ok(()),
    }
}
