use std::fmt;

use super::defs::{ArgValue, DefinitionSet, Param};
use super::{blocks, tokenize, ParseError, Token};
use crate::model::{Constant, ConstantSlot, PointId, PointTable, PredicateKind, Pt, Statement};

/// One definition applied inside a clause; `args` follow the definition header.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub def: String,
    pub args: Vec<ArgValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clause {
    pub points: Vec<PointId>,
    pub pins: Vec<Option<Pt>>,
    pub constructions: Vec<Construction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub points: PointTable,
    pub clauses: Vec<Clause>,
    pub goals: Vec<Statement>,
}

impl ProblemSpec {
    /// Renders the problem back into the construction language.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn has_pins(&self) -> bool {
        self.clauses.iter().any(|c| c.pins.iter().any(Option::is_some))
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |p: PointId| self.points.name(p);
        let mut clauses = Vec::new();
        for c in &self.clauses {
            let pts: Vec<String> = c
                .points
                .iter()
                .zip(&c.pins)
                .map(|(&p, pin)| match pin {
                    Some(xy) => format!("{}@{}_{}", name(p), xy.x, xy.y),
                    None => name(p).to_string(),
                })
                .collect();
            let cons: Vec<String> = c
                .constructions
                .iter()
                .map(|k| {
                    let mut s = k.def.clone();
                    for a in &k.args {
                        s.push(' ');
                        match a {
                            ArgValue::Point(p) => s.push_str(name(*p)),
                            ArgValue::Const(t) => s.push_str(t),
                        }
                    }
                    s
                })
                .collect();
            clauses.push(format!("{} = {}", pts.join(" "), cons.join(", ")));
        }
        write!(f, "{}", clauses.join("; "))?;
        if !self.goals.is_empty() {
            let goals: Vec<String> = self.goals.iter().map(|g| self.points.text(g)).collect();
            write!(f, " ? {}", goals.join("; "))?;
        }
        Ok(())
    }
}

/// Parses one problem: `clause; clause; ... ? goal; goal`.
pub fn parse_problem(text: &str, name: &str, defs: &DefinitionSet) -> Result<ProblemSpec, ParseError> {
    let toks = tokenize(text, ";=,?");
    if toks.is_empty() {
        return Err(ParseError::Syntax { line: 1, col: 1, msg: "empty problem".into() });
    }
    let q = toks.iter().position(|t| t.text == "?");
    let (body, goal_toks) = match q {
        Some(i) => (&toks[..i], &toks[i + 1..]),
        None => (&toks[..], &toks[0..0]),
    };
    if let Some(i) = q {
        if let Some(extra) = toks[i + 1..].iter().find(|t| t.text == "?") {
            return Err(extra.syntax("second `?`"));
        }
    }
    let mut points = PointTable::new();
    let mut clauses = Vec::new();
    for clause in body.split(|t| t.text == ";") {
        if clause.is_empty() {
            continue;
        }
        clauses.push(parse_clause(clause, &mut points, defs)?);
    }
    if clauses.is_empty() {
        return Err(toks[0].syntax("problem has no clause"));
    }
    let mut goals = Vec::new();
    for g in goal_toks.split(|t| t.text == ";") {
        if g.is_empty() {
            continue;
        }
        goals.push(parse_statement(g, &points)?);
    }
    if q.is_some() && goals.is_empty() {
        return Err(toks[toks.len() - 1].syntax("`?` not followed by a goal"));
    }
    Ok(ProblemSpec { name: name.to_string(), points, clauses, goals })
}

fn parse_pin(t: &Token<'_>) -> Result<(String, Option<Pt>), ParseError> {
    match t.text.split_once('@') {
        None => Ok((t.text.to_string(), None)),
        Some((name, coords)) => {
            let (x, y) = coords
                .split_once('_')
                .ok_or_else(|| t.syntax("pinned point needs `name@x_y`"))?;
            let x: f64 = x.parse().map_err(|_| t.syntax(format!("bad coordinate `{x}`")))?;
            let y: f64 = y.parse().map_err(|_| t.syntax(format!("bad coordinate `{y}`")))?;
            if !x.is_finite() || !y.is_finite() {
                return Err(t.syntax("coordinates must be finite"));
            }
            Ok((name.to_string(), Some(Pt::new(x, y))))
        }
    }
}

fn parse_clause(toks: &[Token<'_>], points: &mut PointTable, defs: &DefinitionSet) -> Result<Clause, ParseError> {
    let eq = toks
        .iter()
        .position(|t| t.text == "=")
        .ok_or_else(|| toks[0].syntax("clause needs `points = constructions`"))?;
    if eq == 0 {
        return Err(toks[0].syntax("clause introduces no point"));
    }
    let mut new_names = Vec::new();
    let mut pins = Vec::new();
    for t in &toks[..eq] {
        let (name, pin) = parse_pin(t)?;
        if !super::is_identifier(&name) {
            return Err(t.syntax(format!("bad point name `{name}`")));
        }
        if points.get(&name).is_some() || new_names.iter().any(|(n, _)| *n == name) {
            return Err(ParseError::DuplicatePoint { name, line: t.line, col: t.col });
        }
        new_names.push((name, t));
        pins.push(pin);
    }
    let ids: Vec<PointId> = new_names
        .iter()
        .map(|(n, _)| points.add(n).expect("checked unique"))
        .collect();
    let is_new = |p: PointId| ids.contains(&p);

    let mut constructions = Vec::new();
    let mut covered = vec![false; ids.len()];
    for group in toks[eq + 1..].split(|t| t.text == ",") {
        let head = group.first().ok_or_else(|| toks[eq].syntax("empty construction"))?;
        let def = defs.get(head.text).ok_or_else(|| ParseError::UnknownDefinition {
            name: head.text.to_string(),
            line: head.line,
            col: head.col,
        })?;
        let given = &group[1..];
        let full = given.len() == def.params.len();
        if !full && given.len() != def.n_without_outputs() {
            return Err(head.syntax(format!(
                "{} takes {} arguments ({} without outputs), got {}",
                def.name,
                def.params.len(),
                def.n_without_outputs(),
                given.len()
            )));
        }
        if !full && def.outs.len() != ids.len() {
            return Err(head.syntax(format!(
                "{} creates {} points but the clause names {}",
                def.name,
                def.outs.len(),
                ids.len()
            )));
        }
        let mut args: Vec<Option<ArgValue>> = vec![None; def.params.len()];
        if !full {
            for (k, &o) in def.outs.iter().enumerate() {
                args[o] = Some(ArgValue::Point(ids[k]));
            }
        }
        let mut it = given.iter();
        for i in 0..def.params.len() {
            if args[i].is_some() {
                continue;
            }
            let t = it.next().expect("count checked");
            let v = match &def.params[i] {
                Param::Const(_) => ArgValue::Const(t.text.to_string()),
                Param::Point(_) => {
                    let p = points.get(t.text).ok_or_else(|| ParseError::UndeclaredPoint {
                        name: t.text.to_string(),
                        line: t.line,
                        col: t.col,
                    })?;
                    let is_out = def.outs.contains(&i);
                    if is_out && !is_new(p) {
                        return Err(t.syntax(format!("output `{}` is not a point of this clause", t.text)));
                    }
                    if !is_out && is_new(p) {
                        return Err(ParseError::UndeclaredPoint { name: t.text.to_string(), line: t.line, col: t.col });
                    }
                    ArgValue::Point(p)
                }
            };
            args[i] = Some(v);
        }
        let args: Vec<ArgValue> = args.into_iter().map(|a| a.expect("all filled")).collect();
        for &o in &def.outs {
            if let ArgValue::Point(p) = args[o] {
                if let Some(k) = ids.iter().position(|&q| q == p) {
                    covered[k] = true;
                }
            }
        }
        def.instantiate(&args)
            .map_err(|e| ParseError::Model { line: head.line, col: head.col, source: e })?;
        constructions.push(Construction { def: def.name.clone(), args });
    }
    if let Some(k) = covered.iter().position(|c| !c) {
        let t = new_names[k].1;
        return Err(t.syntax(format!("point `{}` is not produced by any construction", new_names[k].0)));
    }
    Ok(Clause { points: ids, pins, constructions })
}

/// Parses `<tag> <points...> [constant]` against known point names.
pub(crate) fn parse_statement(toks: &[Token<'_>], points: &PointTable) -> Result<Statement, ParseError> {
    let head = &toks[0];
    let kind: PredicateKind = head.text.parse().map_err(|_| ParseError::UnknownPredicate {
        name: head.text.to_string(),
        line: head.line,
        col: head.col,
    })?;
    let mut rest = &toks[1..];
    let mut constant = None;
    if kind.constant_slot() != ConstantSlot::None {
        let c = rest.last().ok_or_else(|| head.syntax("missing constant"))?;
        constant = Some(
            Constant::parse(kind.constant_slot(), c.text)
                .map_err(|e| ParseError::Model { line: c.line, col: c.col, source: e })?,
        );
        rest = &rest[..rest.len() - 1];
    }
    let mut args = Vec::with_capacity(rest.len());
    for t in rest {
        args.push(points.get(t.text).ok_or_else(|| ParseError::UndeclaredPoint {
            name: t.text.to_string(),
            line: t.line,
            col: t.col,
        })?);
    }
    Statement::new(kind, &args, constant).map_err(|e| ParseError::Model { line: head.line, col: head.col, source: e })
}

/// Parses a statement written in problem syntax, e.g. `perp a d b c`.
pub fn parse_statement_text(text: &str, points: &PointTable) -> Result<Statement, ParseError> {
    let toks = tokenize(text, "");
    if toks.is_empty() {
        return Err(ParseError::Syntax { line: 1, col: 1, msg: "empty statement".into() });
    }
    parse_statement(&toks, points)
}

/// Extends `problem` with one more clause, written `points = constructions`.
pub fn parse_extra_clause(
    text: &str,
    problem: &ProblemSpec,
    defs: &DefinitionSet,
) -> Result<(PointTable, Clause), ParseError> {
    let toks = tokenize(text, ";=,?");
    if toks.is_empty() {
        return Err(ParseError::Syntax { line: 1, col: 1, msg: "empty clause".into() });
    }
    if let Some(t) = toks.iter().find(|t| t.text == ";" || t.text == "?") {
        return Err(t.syntax("one clause expected"));
    }
    let mut points = problem.points.clone();
    let clause = parse_clause(&toks, &mut points, defs)?;
    Ok((points, clause))
}

/// Splits a problems file into `(name, problem text)` pairs: blocks separated by blank
/// lines, the first line of each block naming the problem.
pub fn problem_texts(text: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (_, block) in blocks(text) {
        let mut lines = block.lines();
        let name = lines.next().unwrap_or_default().trim().to_string();
        let body: Vec<&str> = lines.collect();
        out.push((name, body.join("\n")));
    }
    out
}

/// Parses every problem of a problems file.
pub fn parse_problems_file(text: &str, defs: &DefinitionSet) -> Result<Vec<ProblemSpec>, ParseError> {
    problem_texts(text)
        .into_iter()
        .map(|(name, body)| parse_problem(&body, &name, defs))
        .collect()
}

/// Finds and parses the problem called `name`.
pub fn find_problem(text: &str, name: &str, defs: &DefinitionSet) -> Result<ProblemSpec, ParseError> {
    let (_, body) = problem_texts(text)
        .into_iter()
        .find(|(n, _)| n == name)
        .ok_or_else(|| ParseError::UnknownProblem(name.to_string()))?;
    parse_problem(&body, name, defs)
}
