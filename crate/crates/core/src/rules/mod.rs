//! The rule language.
//!
//! One rule per statement:
//!
//! ```text
//! [<id> :] IF <var> IS [NOT] <cat> ((AND|OR) <var> IS [NOT] <cat>)* THEN <outvar> IS <cat>
//! ```
//!
//! Keywords are case-insensitive, identifiers are `[A-Za-z_][A-Za-z0-9_]*` and
//! case-sensitive. A rule uses a single connective throughout; mixing AND and
//! OR is rejected rather than given a precedence. Consequents cannot be negated.
//!
//! In a rule block each non-blank line is one rule and `#` starts a comment.
//! Rules without an explicit id are numbered `r1`, `r2`, ... in file order.

mod lexer;
mod validate;

use std::fmt;

use thiserror::Error;

use lexer::{tokenize, Keyword, Token, TokenKind};

pub use validate::{validate_ruleset, Finding, Severity, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub variable: String,
    pub category: String,
    pub negated: bool,
}

impl Clause {
    pub fn new(variable: impl Into<String>, category: impl Into<String>) -> Self {
        Clause {
            variable: variable.into(),
            category: category.into(),
            negated: false,
        }
    }

    pub fn negated(mut self) -> Self {
        self.negated = !self.negated;
        self
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "{} IS NOT {}", self.variable, self.category)
        } else {
            write!(f, "{} IS {}", self.variable, self.category)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Connective {
    #[default]
    And,
    Or,
}

impl Connective {
    fn keyword(self) -> &'static str {
        match self {
            Connective::And => "AND",
            Connective::Or => "OR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub id: String,
    pub antecedent: Vec<Clause>,
    pub connective: Connective,
    pub consequent: Clause,
}

impl fmt::Display for Rule {
    /// Canonical form: upper-case keywords, single spaces, explicit id.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: IF ", self.id)?;
        for (i, clause) in self.antecedent.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", self.connective.keyword())?;
            }
            write!(f, "{clause}")?;
        }
        write!(f, " THEN {}", self.consequent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub output_variable: String,
}

impl RuleSet {
    pub fn new(rules: Vec<Rule>, output_variable: impl Into<String>) -> Self {
        RuleSet {
            rules,
            output_variable: output_variable.into(),
        }
    }

    /// Parses a rule block (see module docs).
    pub fn parse(text: &str, output_variable: impl Into<String>) -> Result<Self, Vec<ParseError>> {
        parse_rules(text).map(|rules| RuleSet::new(rules, output_variable))
    }
}

/// What the parser would have accepted at an error position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expected {
    Keyword(&'static str),
    Identifier,
    Colon,
    EndOfInput,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Keyword(k) => f.write_str(k),
            Expected::Identifier => f.write_str("identifier"),
            Expected::Colon => f.write_str("`:`"),
            Expected::EndOfInput => f.write_str("end of input"),
        }
    }
}

fn join_expected(expected: &[Expected]) -> String {
    expected
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: expected one of [{}], found {found}", join_expected(.expected))]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<Expected>,
        found: String,
    },
    #[error("{line}:{column}: {found} mixes connectives; rule already uses {first}")]
    MixedConnective {
        line: usize,
        column: usize,
        first: &'static str,
        found: &'static str,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::MixedConnective { line, column, .. } => (*line, *column),
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i]
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &[Expected]) -> ParseError {
        let tok = self.peek();
        ParseError::Syntax {
            line: tok.line,
            column: tok.column,
            expected: expected.to_vec(),
            found: tok.kind.to_string(),
        }
    }

    fn keyword(&mut self, kw: Keyword) -> Result<(), ParseError> {
        if self.peek().kind == TokenKind::Keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[Expected::Keyword(kw.as_str())]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&[Expected::Identifier])),
        }
    }

    fn clause(&mut self, allow_not: bool) -> Result<Clause, ParseError> {
        let variable = self.ident()?;
        self.keyword(Keyword::Is)?;
        let negated = allow_not && self.peek().kind == TokenKind::Keyword(Keyword::Not);
        if negated {
            self.bump();
        }
        let category = self.ident().map_err(|e| {
            if allow_not && !negated {
                self.error(&[Expected::Keyword("NOT"), Expected::Identifier])
            } else {
                e
            }
        })?;
        Ok(Clause {
            variable,
            category,
            negated,
        })
    }

    fn rule(&mut self) -> Result<(Option<String>, Rule), ParseError> {
        let id = match (&self.peek().kind, &self.peek_at(1).kind) {
            (TokenKind::Ident(_), TokenKind::Colon) => {
                let id = self.ident()?;
                self.bump();
                Some(id)
            }
            (TokenKind::Keyword(Keyword::If), _) => None,
            (TokenKind::Ident(_), _) => {
                // an identifier that is not followed by `:` cannot start a rule
                self.bump();
                return Err(self.error(&[Expected::Colon]));
            }
            _ => return Err(self.error(&[Expected::Identifier, Expected::Keyword("IF")])),
        };
        self.keyword(Keyword::If)?;
        let mut antecedent = vec![self.clause(true)?];
        let mut connective: Option<Connective> = None;
        loop {
            let next = match self.peek().kind {
                TokenKind::Keyword(Keyword::And) => Connective::And,
                TokenKind::Keyword(Keyword::Or) => Connective::Or,
                TokenKind::Keyword(Keyword::Then) => break,
                _ => {
                    return Err(self.error(&[
                        Expected::Keyword("AND"),
                        Expected::Keyword("OR"),
                        Expected::Keyword("THEN"),
                    ]))
                }
            };
            match connective {
                Some(first) if first != next => {
                    let tok = self.peek();
                    return Err(ParseError::MixedConnective {
                        line: tok.line,
                        column: tok.column,
                        first: first.keyword(),
                        found: next.keyword(),
                    });
                }
                _ => connective = Some(next),
            }
            self.bump();
            antecedent.push(self.clause(true)?);
        }
        self.keyword(Keyword::Then)?;
        let consequent = self.clause(false)?;
        if self.peek().kind != TokenKind::End {
            return Err(self.error(&[Expected::EndOfInput]));
        }
        Ok((
            id.clone(),
            Rule {
                id: id.unwrap_or_default(),
                antecedent,
                connective: connective.unwrap_or_default(),
                consequent,
            },
        ))
    }
}

fn parse_statement(text: &str, line: usize) -> Result<(Option<String>, Rule), ParseError> {
    let mut parser = Parser {
        tokens: tokenize(text, line),
        pos: 0,
    };
    parser.rule()
}

/// Parses a single rule statement. Without an explicit id the rule is `r1`.
pub fn parse_rule(text: &str) -> Result<Rule, ParseError> {
    parse_rule_at(text, 1, 1)
}

/// Parses one statement that sits at `line` of a larger document and is the
/// `ordinal`-th rule there (1-based), which fixes its default id.
pub fn parse_rule_at(text: &str, line: usize, ordinal: usize) -> Result<Rule, ParseError> {
    let (explicit, mut rule) = parse_statement(text, line)?;
    if explicit.is_none() {
        rule.id = format!("r{ordinal}");
    }
    Ok(rule)
}

/// Removes a trailing `#` comment.
pub fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses a rule block, one rule per line. Every malformed line is reported.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, Vec<ParseError>> {
    let mut rules = Vec::new();
    let mut errors = Vec::new();
    let mut ordinal = 0;
    for (i, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        ordinal += 1;
        match parse_rule_at(body, i + 1, ordinal) {
            Ok(rule) => rules.push(rule),
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(rules)
    } else {
        Err(errors)
    }
}
