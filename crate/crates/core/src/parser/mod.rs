//! Concrete ASCII syntax.
//!
//! ```text
//! formula := "true" | "false" | OUTCOME | "rep(" AGENT "," OUTCOME "," OUTCOME ")"
//!          | "~" formula | formula ("&" | "|" | "->" | "<->") formula
//!          | "<" coalition ">" formula | "[" coalition "]" formula
//!          | "pref(" AGENT ")" formula | "Pref(" AGENT ")" formula
//!          | "(" formula ")" | macro
//! coalition := "{" agents? "}" | "N"
//! ```
//!
//! Binding strength, tightest first: prefix operators, `&`, `|`, `->`,
//! `<->`; the last two associate to the right.

mod lexer;
mod print;

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::domain::{AgentId, Coalition, LinearOrder, Outcome, Profile, ScfTable, StateSpace};
use crate::encodings::{self, Encoder, RhoForm};
use crate::logic::Formula;
use lexer::{Tok, Token};

pub use print::print;

/// Byte range into the parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    UnbalancedParens,
    UnknownAgent,
    UnknownOutcome,
    MalformedCoalition,
    UnexpectedToken,
    UnexpectedEnd,
    Macro,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} (at {span})")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }

    /// The message followed by the input line with the span underlined.
    pub fn render(&self, input: &str) -> String {
        let start = self.span.start.min(input.len());
        let width = (self.span.end.min(input.len()) - start).max(1);
        let pad: String = input[..start].chars().map(|_| ' ').collect();
        format!("error: {}\n  {}\n  {}{}", self.message, input, pad, "^".repeat(width))
    }
}

/// Resolves `scf("path")` arguments to SCF tables.
pub type ScfLoader = dyn Fn(&str, &Arc<StateSpace>) -> Result<ScfTable, String> + Send + Sync;

/// What the parser needs to know: the space, and optionally how to load SCF files.
pub struct ParseContext {
    space: Arc<StateSpace>,
    encoder: OnceLock<Encoder>,
    loader: Option<Box<ScfLoader>>,
}

impl ParseContext {
    pub fn new(space: &Arc<StateSpace>) -> Self {
        ParseContext {
            space: space.clone(),
            encoder: OnceLock::new(),
            loader: None,
        }
    }

    pub fn with_loader(mut self, loader: Box<ScfLoader>) -> Self {
        self.loader = Some(loader);
        self
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    pub fn encoder(&self) -> &Encoder {
        self.encoder.get_or_init(|| Encoder::new(&self.space))
    }

    pub fn parse(&self, text: &str) -> Result<Formula, ParseError> {
        parse_with(text, self)
    }
}

/// Parses `text` over `space`; `scf(...)` is unavailable without a loader.
pub fn parse(text: &str, space: &Arc<StateSpace>) -> Result<Formula, ParseError> {
    parse_with(text, &ParseContext::new(space))
}

pub fn parse_with(text: &str, ctx: &ParseContext) -> Result<Formula, ParseError> {
    let tokens = lexer::lex(text)?;
    lexer::check_balance(&tokens)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        ctx,
        end: text.len(),
    };
    let phi = p.iff()?;
    if let Some(t) = p.peek() {
        return Err(ParseError::new(
            ParseErrorKind::UnexpectedToken,
            t.span,
            format!("unexpected {} after a complete formula", t.tok),
        ));
    }
    Ok(phi)
}

struct Parser<'c> {
    tokens: Vec<Token>,
    pos: usize,
    ctx: &'c ParseContext,
    end: usize,
}

const MACROS: &[&str] = &[
    "ballot",
    "ballotAll",
    "better",
    "trueprofile",
    "citsov",
    "nodict",
    "br",
    "dom",
    "mon",
    "strproof",
    "scf",
];

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn end_span(&self) -> SourceSpan {
        SourceSpan::new(self.end, self.end)
    }

    fn next(&mut self, what: &str) -> Result<Token, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(ParseError::new(
                ParseErrorKind::UnexpectedEnd,
                self.end_span(),
                format!("input ended where {what} was expected"),
            )),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<SourceSpan, ParseError> {
        let t = self.next(what)?;
        if t.tok == tok {
            Ok(t.span)
        } else {
            Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                format!("expected {what}, found {}", t.tok),
            ))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.implication()?;
        if self.eat(&Tok::Iff) {
            let right = self.iff()?;
            return Ok(left.iff(right));
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let right = self.implication()?;
            return Ok(left.implies(right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            acc = acc.or(self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let t = self.next("a formula")?;
        match &t.tok {
            Tok::Not => Ok(self.unary()?.not()),
            Tok::Lt => {
                let c = self.coalition()?;
                self.expect(Tok::Gt, "`>` closing the coalition")?;
                Ok(Formula::diamond(c, self.unary()?))
            }
            Tok::LBracket => {
                let c = self.coalition()?;
                self.expect(Tok::RBracket, "`]` closing the coalition")?;
                Ok(Formula::boxed(c, self.unary()?))
            }
            Tok::LParen => {
                let phi = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(phi)
            }
            Tok::Word(w) => self.word(w.clone(), t.span),
            other => Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                format!("expected a formula, found {other}"),
            )),
        }
    }

    fn word(&mut self, w: String, span: SourceSpan) -> Result<Formula, ParseError> {
        match w.as_str() {
            "true" => Ok(Formula::top()),
            "false" => Ok(Formula::bottom()),
            "rep" => {
                self.expect(Tok::LParen, "`(` after rep")?;
                let agent = self.agent()?;
                self.expect(Tok::Comma, "`,`")?;
                let x = self.outcome()?;
                self.expect(Tok::Comma, "`,`")?;
                let y = self.outcome()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::rep(agent, x, y))
            }
            "pref" | "Pref" => {
                self.expect(Tok::LParen, "`(` after pref")?;
                let agent = self.agent()?;
                self.expect(Tok::RParen, "`)`")?;
                let inner = self.unary()?;
                Ok(if w == "pref" {
                    Formula::pref(agent, inner)
                } else {
                    Formula::pref_box(agent, inner)
                })
            }
            m if MACROS.contains(&m) => self.macro_call(m, span),
            _ => match self.ctx.space.outcomes().index_of(&w) {
                Some(x) => Ok(Formula::out(self.ctx.space.outcomes().get(x).clone())),
                None => Err(ParseError::new(
                    ParseErrorKind::UnknownOutcome,
                    span,
                    format!("`{w}` is not an outcome of this space ({})", self.outcome_list()),
                )),
            },
        }
    }

    fn outcome_list(&self) -> String {
        self.ctx
            .space
            .outcomes()
            .iter()
            .map(|o| o.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    fn agent(&mut self) -> Result<AgentId, ParseError> {
        let t = self.next("an agent number")?;
        let n = self.ctx.space.agents();
        match &t.tok {
            Tok::Word(w) => match w.parse::<usize>() {
                Ok(i) if (1..=n).contains(&i) => Ok(AgentId::new(i)),
                Ok(i) => Err(ParseError::new(
                    ParseErrorKind::UnknownAgent,
                    t.span,
                    format!("agent {i} is not among 1..={n}"),
                )),
                Err(_) => Err(ParseError::new(
                    ParseErrorKind::UnknownAgent,
                    t.span,
                    format!("`{w}` is not an agent number"),
                )),
            },
            other => Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                format!("expected an agent number, found {other}"),
            )),
        }
    }

    fn outcome(&mut self) -> Result<Outcome, ParseError> {
        let t = self.next("an outcome")?;
        match &t.tok {
            Tok::Word(w) => match self.ctx.space.outcomes().index_of(w) {
                Some(x) => Ok(self.ctx.space.outcomes().get(x).clone()),
                None => Err(ParseError::new(
                    ParseErrorKind::UnknownOutcome,
                    t.span,
                    format!("`{w}` is not an outcome of this space ({})", self.outcome_list()),
                )),
            },
            other => Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                format!("expected an outcome, found {other}"),
            )),
        }
    }

    fn coalition(&mut self) -> Result<Coalition, ParseError> {
        let t = self.next("a coalition")?;
        match &t.tok {
            Tok::Word(w) if w == "N" => Ok(self.ctx.space.grand_coalition()),
            Tok::LBrace => {
                let mut c = Coalition::EMPTY;
                if self.eat(&Tok::RBrace) {
                    return Ok(c);
                }
                loop {
                    let t = self.next("an agent number")?;
                    let n = self.ctx.space.agents();
                    let agent = match &t.tok {
                        Tok::Word(w) => match w.parse::<usize>() {
                            Ok(i) if (1..=n).contains(&i) => AgentId::new(i),
                            Ok(i) => {
                                return Err(ParseError::new(
                                    ParseErrorKind::UnknownAgent,
                                    t.span,
                                    format!("agent {i} is not among 1..={n}"),
                                ))
                            }
                            Err(_) => {
                                return Err(ParseError::new(
                                    ParseErrorKind::MalformedCoalition,
                                    t.span,
                                    format!("`{w}` is not an agent number"),
                                ))
                            }
                        },
                        other => {
                            return Err(ParseError::new(
                                ParseErrorKind::MalformedCoalition,
                                t.span,
                                format!("expected an agent number in the coalition, found {other}"),
                            ))
                        }
                    };
                    if c.contains(agent) {
                        return Err(ParseError::new(
                            ParseErrorKind::MalformedCoalition,
                            t.span,
                            format!("agent {agent} is listed twice"),
                        ));
                    }
                    c = c.with(agent);
                    let sep = self.next("`,` or `}`")?;
                    match sep.tok {
                        Tok::Comma => continue,
                        Tok::RBrace => return Ok(c),
                        other => {
                            return Err(ParseError::new(
                                ParseErrorKind::MalformedCoalition,
                                sep.span,
                                format!("expected `,` or `}}` in the coalition, found {other}"),
                            ))
                        }
                    }
                }
            }
            other => Err(ParseError::new(
                ParseErrorKind::MalformedCoalition,
                t.span,
                format!("expected a coalition `{{...}}` or `N`, found {other}"),
            )),
        }
    }

    /// `[x, y, ...]` as a linear order of the space's outcomes.
    fn order(&mut self) -> Result<LinearOrder, ParseError> {
        let open = self.expect(Tok::LBracket, "`[` starting a ranking")?;
        let mut names = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                names.push(self.outcome()?);
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `]` in the ranking")?;
            }
        }
        let close = self.tokens[self.pos - 1].span;
        let names: Vec<&str> = names.iter().map(|o| o.as_str()).collect();
        LinearOrder::from_names(&names, self.ctx.space.outcomes()).map_err(|e| {
            ParseError::new(ParseErrorKind::Macro, SourceSpan::new(open.start, close.end), e.to_string())
        })
    }

    fn profile(&mut self) -> Result<Profile, ParseError> {
        let open = self.expect(Tok::LBracket, "`[` starting a profile")?;
        let mut orders = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                orders.push(self.order()?);
                if self.eat(&Tok::RBracket) {
                    break;
                }
                self.expect(Tok::Comma, "`,` or `]` in the profile")?;
            }
        }
        let close = self.tokens[self.pos - 1].span;
        let n = self.ctx.space.agents();
        if orders.len() != n {
            return Err(ParseError::new(
                ParseErrorKind::Macro,
                SourceSpan::new(open.start, close.end),
                format!("a profile needs {n} rankings, found {}", orders.len()),
            ));
        }
        Ok(Profile::new(orders))
    }

    fn macro_call(&mut self, name: &str, span: SourceSpan) -> Result<Formula, ParseError> {
        let enc = self.ctx.encoder();
        let outcomes = self.ctx.space.outcomes();
        match name {
            "citsov" => Ok(enc.citsov()),
            "nodict" => Ok(enc.nodict()),
            "dom" => Ok(enc.dom()),
            "mon" => Ok(enc.mon()),
            "strproof" => Ok(enc.strproof()),
            "br" => {
                self.expect(Tok::LParen, "`(` after br")?;
                let i = self.agent()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(enc.br(i))
            }
            "ballot" => {
                self.expect(Tok::LParen, "`(` after ballot")?;
                let i = self.agent()?;
                self.expect(Tok::Comma, "`,`")?;
                let order = self.order()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(encodings::ballot_agent(i, &order, outcomes))
            }
            "ballotAll" => {
                self.expect(Tok::LParen, "`(` after ballotAll")?;
                let p = self.profile()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(encodings::ballot_profile(&p, outcomes))
            }
            "trueprofile" => {
                self.expect(Tok::LParen, "`(` after trueprofile")?;
                let p = self.profile()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(enc.trueprofile(&p))
            }
            "better" => {
                self.expect(Tok::LParen, "`(` after better")?;
                let i = self.agent()?;
                self.expect(Tok::Comma, "`,`")?;
                let psi = self.iff()?;
                self.expect(Tok::Comma, "`,`")?;
                let phi = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(enc.better(i, &psi, &phi))
            }
            "scf" => {
                self.expect(Tok::LParen, "`(` after scf")?;
                let t = self.next("a quoted path")?;
                let path = match &t.tok {
                    Tok::Str(s) => s.clone(),
                    other => {
                        return Err(ParseError::new(
                            ParseErrorKind::UnexpectedToken,
                            t.span,
                            format!("expected a quoted path, found {other}"),
                        ))
                    }
                };
                let form = if self.eat(&Tok::Comma) {
                    let f = self.next("diamond or implication")?;
                    match &f.tok {
                        Tok::Word(w) => w.parse::<RhoForm>().map_err(|e| ParseError::new(ParseErrorKind::Macro, f.span, e))?,
                        other => {
                            return Err(ParseError::new(
                                ParseErrorKind::UnexpectedToken,
                                f.span,
                                format!("expected diamond or implication, found {other}"),
                            ))
                        }
                    }
                } else {
                    RhoForm::Diamond
                };
                let close = self.expect(Tok::RParen, "`)`")?;
                let whole = SourceSpan::new(span.start, close.end);
                let loader = self.ctx.loader.as_ref().ok_or_else(|| {
                    ParseError::new(ParseErrorKind::Macro, whole, "scf(...) needs a file loader in this context")
                })?;
                let table = loader(&path, &self.ctx.space)
                    .map_err(|e| ParseError::new(ParseErrorKind::Macro, t.span, format!("cannot load `{path}`: {e}")))?;
                Ok(enc.rho(&table, form))
            }
            _ => unreachable!("listed macro"),
        }
    }
}
