//! Readers for problem, rule and definition files.

pub mod defs;
pub mod problem;
pub mod rules;

pub use defs::{parse_definitions, ArgValue, ConstRef, DefTemplate, DefinitionSet, DefinitionSpec, Param};
pub use problem::{
    find_problem, parse_extra_clause, parse_problem, parse_problems_file, parse_statement_text, problem_texts, Clause,
    Construction, ProblemSpec,
};
pub use rules::{parse_rules, RuleSpec, Template};

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown definition `{name}`")]
    UnknownDefinition { name: String, line: usize, col: usize },
    #[error("{line}:{col}: point `{name}` used before it was introduced")]
    UndeclaredPoint { name: String, line: usize, col: usize },
    #[error("{line}:{col}: point `{name}` introduced twice")]
    DuplicatePoint { name: String, line: usize, col: usize },
    #[error("{line}:{col}: unknown predicate `{name}`")]
    UnknownPredicate { name: String, line: usize, col: usize },
    #[error("rule {rule}: conclusion variable `{var}` does not appear in any premise")]
    UnboundConclusionVariable { rule: String, var: String },
    #[error("definition {def}: unknown sketch routine `{sketch}`")]
    UnknownSketch { def: String, sketch: String },
    #[error("{line}:{col}: {source}")]
    Model { line: usize, col: usize, source: ModelError },
    #[error("no problem named `{0}`")]
    UnknownProblem(String),
}

/// A word or punctuation mark with its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub col: usize,
}

impl<'a> Token<'a> {
    pub fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }
}

/// Splits on whitespace; every char of `punct` becomes a token of its own.
/// `#` starts a comment running to the end of the line.
pub(crate) fn tokenize<'a>(text: &'a str, punct: &str) -> Vec<Token<'a>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let mut start: Option<usize> = None;
        let col_of = |byte: usize| line[..byte].chars().count() + 1;
        for (i, ch) in line.char_indices() {
            let is_punct = punct.contains(ch);
            if ch.is_whitespace() || is_punct {
                if let Some(s) = start.take() {
                    out.push(Token { text: &line[s..i], line: li + 1, col: col_of(s) });
                }
                if is_punct {
                    out.push(Token { text: &line[i..i + ch.len_utf8()], line: li + 1, col: col_of(i) });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            out.push(Token { text: &line[s..], line: li + 1, col: col_of(s) });
        }
    }
    out
}

/// Splits a file into blocks separated by blank lines; returns `(first line number, text)`.
pub(crate) fn blocks(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut first = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        if line.trim().is_empty() {
            if !cur.is_empty() {
                out.push((first, std::mem::take(&mut cur)));
            }
            continue;
        }
        if cur.is_empty() {
            first = i + 1;
        }
        cur.push_str(line.trim_end());
        cur.push('\n');
    }
    if !cur.is_empty() {
        out.push((first, cur));
    }
    out
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
