use std::collections::HashMap;
use std::fmt;

use super::{blocks, tokenize, ParseError, Token};
use crate::model::{canonicalize, Constant, ConstantSlot, PointId, PredicateKind, Statement};

/// A statement pattern over rule variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub kind: PredicateKind,
    pub vars: Vec<usize>,
    pub constant: Option<Constant>,
}

impl Template {
    /// Instantiates the pattern; `None` when the instance is degenerate.
    pub fn instantiate(&self, binding: &[PointId]) -> Option<Statement> {
        let args: Vec<PointId> = self.vars.iter().map(|&v| binding[v]).collect();
        let stmt = Statement::new(self.kind, &args, self.constant).ok()?;
        (!stmt.is_degenerate()).then_some(stmt)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSpec {
    pub id: String,
    pub title: String,
    pub vars: Vec<String>,
    pub premises: Vec<Template>,
    pub conclusions: Vec<Template>,
}

impl RuleSpec {
    /// Same rule with its premises reordered by `order` (a permutation of premise indices).
    pub fn with_premise_order(&self, order: &[usize]) -> RuleSpec {
        let mut r = self.clone();
        r.premises = order.iter().map(|&i| self.premises[i].clone()).collect();
        r
    }

    /// Premises sorted by ascending argument count, stable on ties.
    pub fn sorted_by_arity(&self) -> RuleSpec {
        let mut order: Vec<usize> = (0..self.premises.len()).collect();
        order.sort_by_key(|&i| self.premises[i].vars.len());
        self.with_premise_order(&order)
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.id, self.title)?;
        let render = |t: &Template| {
            let mut s = t.kind.tag().to_string();
            for &v in &t.vars {
                s.push(' ');
                s.push_str(&self.vars[v]);
            }
            if let Some(c) = t.constant {
                s.push(' ');
                s.push_str(&c.to_string());
            }
            s
        };
        let prem: Vec<_> = self.premises.iter().map(render).collect();
        let conc: Vec<_> = self.conclusions.iter().map(render).collect();
        write!(f, "{} => {}", prem.join(", "), conc.join(", "))
    }
}

/// Parses a rules file: blocks of `rNN Title` followed by `premises => conclusions`.
pub fn parse_rules(text: &str) -> Result<Vec<RuleSpec>, ParseError> {
    let mut rules = Vec::new();
    for (first_line, block) in blocks(text) {
        let mut lines = block.lines();
        let header = lines.next().unwrap_or_default();
        let body: String = lines.collect::<Vec<_>>().join(" ");
        let (id, title) = match header.trim().split_once(char::is_whitespace) {
            Some((id, t)) => (id.to_string(), t.trim().to_string()),
            None => (header.trim().to_string(), String::new()),
        };
        if body.trim().is_empty() {
            return Err(ParseError::Syntax {
                line: first_line,
                col: 1,
                msg: format!("rule {id} has no body"),
            });
        }
        let shifted = format!("{}{}", "\n".repeat(first_line), body);
        let toks = tokenize(&shifted, ",");
        rules.push(parse_rule_body(id, title, &toks)?);
    }
    Ok(rules)
}

fn parse_rule_body(id: String, title: String, toks: &[Token<'_>]) -> Result<RuleSpec, ParseError> {
    let arrow = toks
        .iter()
        .position(|t| t.text == "=>")
        .ok_or_else(|| toks[0].syntax("missing `=>`"))?;
    let mut vars: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let premises = parse_templates(&toks[..arrow], &mut vars, &mut index)?;
    let n_premise_vars = vars.len();
    let conclusions = parse_templates(&toks[arrow + 1..], &mut vars, &mut index)?;
    if let Some(v) = vars.get(n_premise_vars) {
        return Err(ParseError::UnboundConclusionVariable { rule: id, var: v.clone() });
    }
    if premises.is_empty() || conclusions.is_empty() {
        return Err(toks[arrow].syntax("rule needs premises and conclusions"));
    }
    Ok(RuleSpec { id, title, vars, premises, conclusions })
}

fn parse_templates(
    toks: &[Token<'_>],
    vars: &mut Vec<String>,
    index: &mut HashMap<String, usize>,
) -> Result<Vec<Template>, ParseError> {
    let mut out = Vec::new();
    for group in toks.split(|t| t.text == ",") {
        let Some(head) = group.first() else {
            continue;
        };
        let kind: PredicateKind = head.text.parse().map_err(|_| ParseError::UnknownPredicate {
            name: head.text.to_string(),
            line: head.line,
            col: head.col,
        })?;
        let mut rest = &group[1..];
        let mut constant = None;
        if kind.constant_slot() != ConstantSlot::None {
            let last = rest.last().ok_or_else(|| head.syntax("missing constant"))?;
            constant = Some(Constant::parse(kind.constant_slot(), last.text).map_err(|e| {
                ParseError::Model { line: last.line, col: last.col, source: e }
            })?);
            rest = &rest[..rest.len() - 1];
        }
        let mut ids = Vec::with_capacity(rest.len());
        for t in rest {
            if !super::is_identifier(t.text) {
                return Err(t.syntax(format!("bad variable `{}`", t.text)));
            }
            let id = match index.get(t.text) {
                Some(&i) => i,
                None => {
                    let i = vars.len();
                    vars.push(t.text.to_string());
                    index.insert(t.text.to_string(), i);
                    i
                }
            };
            ids.push(id);
        }
        canonicalize(kind, &ids, constant)
            .map_err(|e| ParseError::Model { line: head.line, col: head.col, source: e })?;
        out.push(Template { kind, vars: ids, constant });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_rule() {
        let r = parse_rules("r51 Midpoint splits in two\nmidp M A B => rconst M A A B 1/2\n").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].premises.len(), 1);
        assert_eq!(r[0].conclusions[0].constant, Some(Constant::Ratio(crate::model::Q::new(1, 2))));
    }

    #[test]
    fn pythagoras_rule() {
        let r = parse_rules("r57 Pythagoras theorem\nPythagoreanPremises a b c => PythagoreanConclusions a b c\n").unwrap();
        assert_eq!(r[0].premises[0].kind, PredicateKind::PythagoreanPremises);
        assert_eq!(r[0].conclusions[0].kind, PredicateKind::PythagoreanConclusions);
    }

    #[test]
    fn unknown_predicate() {
        let e = parse_rules("rX bad\nfoo A B => para A B A B\n").unwrap_err();
        assert!(matches!(e, ParseError::UnknownPredicate { ref name, line: 2, .. } if name == "foo"), "{e:?}");
    }

    #[test]
    fn unbound_conclusion_variable() {
        let e = parse_rules("rY bad\npara A B C D => para A B E F\n").unwrap_err();
        assert!(matches!(e, ParseError::UnboundConclusionVariable { .. }));
    }

    #[test]
    fn two_conclusions() {
        let r = parse_rules(
            "r52 Properties of similar triangles (Direct)\nsimtri A B C P Q R => eqangle B A B C Q P Q R, eqratio B A B C Q P Q R\n",
        )
        .unwrap();
        assert_eq!(r[0].conclusions.len(), 2);
    }

    #[test]
    fn display_round_trip() {
        let text = "r07 Thales Theorem I\npara A B C D, coll O A C, coll O B D => eqratio3 A B C D O O\n";
        let r = parse_rules(text).unwrap();
        let again = parse_rules(&format!("{}\n", r[0])).unwrap();
        assert_eq!(r, again);
    }
}
