use std::collections::{BTreeMap, HashMap};

use super::{blocks, tokenize, ParseError, Token};
use crate::model::{canonicalize, Constant, ConstantSlot, ModelError, PointId, PredicateKind, Statement};
use crate::sketch::ROUTINES;

/// A parameter of a definition header: a point, or a constant written `$name`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Param {
    Point(String),
    Const(String),
}

/// Reference to a constant inside a definition statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstRef {
    Literal(Constant),
    Param(usize),
}

/// A statement a definition adds to the proof state, over header positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefTemplate {
    pub kind: PredicateKind,
    pub args: Vec<usize>,
    pub constant: Option<ConstRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionSpec {
    pub name: String,
    pub params: Vec<Param>,
    /// Header positions of the points the definition creates.
    pub outs: Vec<usize>,
    /// Header positions of the existing points it reads.
    pub ins: Vec<usize>,
    pub statements: Vec<DefTemplate>,
    pub sketch: String,
    /// Header positions passed to the sketch routine.
    pub sketch_args: Vec<usize>,
}

/// Argument given to a construction, aligned with the definition header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgValue {
    Point(PointId),
    Const(String),
}

impl ArgValue {
    pub fn point(&self) -> Option<PointId> {
        match self {
            ArgValue::Point(p) => Some(*p),
            ArgValue::Const(_) => None,
        }
    }
}

impl DefinitionSpec {
    pub fn param_name(&self, i: usize) -> &str {
        match &self.params[i] {
            Param::Point(s) | Param::Const(s) => s,
        }
    }

    /// Number of arguments a construction passes when it omits the outputs.
    pub fn n_without_outputs(&self) -> usize {
        self.params.len() - self.outs.len()
    }

    /// Statements generated by a construction whose arguments follow the header.
    pub fn instantiate(&self, args: &[ArgValue]) -> Result<Vec<Statement>, ModelError> {
        let mut out = Vec::with_capacity(self.statements.len());
        for t in &self.statements {
            let pts: Vec<PointId> = t
                .args
                .iter()
                .map(|&i| args[i].point().expect("template positions are points"))
                .collect();
            let constant = match &t.constant {
                None => None,
                Some(ConstRef::Literal(c)) => Some(*c),
                Some(ConstRef::Param(i)) => match &args[*i] {
                    ArgValue::Const(text) => Some(Constant::parse(t.kind.constant_slot(), text)?),
                    ArgValue::Point(_) => return Err(ModelError::BadConstant(self.param_name(*i).into())),
                },
            };
            out.push(Statement::new(t.kind, &pts, constant)?);
        }
        Ok(out)
    }
}

/// Definitions keyed by name, in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DefinitionSet {
    defs: BTreeMap<String, DefinitionSpec>,
    order: Vec<String>,
}

impl DefinitionSet {
    pub fn get(&self, name: &str) -> Option<&DefinitionSpec> {
        self.defs.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &DefinitionSpec> {
        self.order.iter().map(|n| &self.defs[n])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The definitions shipped with the crate.
    pub fn builtin() -> DefinitionSet {
        parse_definitions(crate::data::DEFS).expect("shipped definitions parse")
    }
}

/// Parses a definitions file.
///
/// ```text
/// midpoint x a b
/// x : a b
/// midp x a b
/// sketch midpoint a b
/// ```
///
/// Header line, then `outputs : inputs`, then generated statements, then the sketch line.
/// Constant parameters are written `$name` in the header and in statements.
pub fn parse_definitions(text: &str) -> Result<DefinitionSet, ParseError> {
    let mut set = DefinitionSet::default();
    for (first_line, block) in blocks(text) {
        let shifted = format!("{}{}", "\n".repeat(first_line - 1), block);
        let toks = tokenize(&shifted, ":");
        let def = parse_block(&toks)?;
        if set.defs.contains_key(&def.name) {
            return Err(toks[0].syntax(format!("definition `{}` defined twice", def.name)));
        }
        set.order.push(def.name.clone());
        set.defs.insert(def.name.clone(), def);
    }
    Ok(set)
}

fn parse_block(toks: &[Token<'_>]) -> Result<DefinitionSpec, ParseError> {
    let mut lines: Vec<Vec<&Token<'_>>> = Vec::new();
    for t in toks {
        match lines.last_mut() {
            Some(l) if l[0].line == t.line => l.push(t),
            _ => lines.push(vec![t]),
        }
    }
    if lines.len() < 3 {
        return Err(toks[0].syntax("definition needs a header, a signature and a sketch line"));
    }
    let header = &lines[0];
    let name = header[0].text.to_string();
    let mut params = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for t in &header[1..] {
        let (param, key) = match t.text.strip_prefix('$') {
            Some(c) if super::is_identifier(c) => (Param::Const(c.to_string()), t.text),
            None if super::is_identifier(t.text) => (Param::Point(t.text.to_string()), t.text),
            _ => return Err(t.syntax(format!("bad parameter `{}`", t.text))),
        };
        if index.insert(key, params.len()).is_some() {
            return Err(t.syntax(format!("parameter `{}` repeated", t.text)));
        }
        params.push(param);
    }
    let lookup = |t: &Token<'_>| -> Result<usize, ParseError> {
        index.get(t.text).copied().ok_or_else(|| t.syntax(format!("`{}` is not a parameter of {name}", t.text)))
    };

    let sig = &lines[1];
    let colon = sig
        .iter()
        .position(|t| t.text == ":")
        .ok_or_else(|| sig[0].syntax("signature line needs `outputs : inputs`"))?;
    let outs = sig[..colon].iter().map(|t| lookup(t)).collect::<Result<Vec<_>, _>>()?;
    let ins = sig[colon + 1..].iter().map(|t| lookup(t)).collect::<Result<Vec<_>, _>>()?;
    if outs.is_empty() {
        return Err(sig[0].syntax("definition creates no point"));
    }
    for (i, p) in params.iter().enumerate() {
        let listed = outs.contains(&i) || ins.contains(&i);
        if !listed {
            return Err(header[i + 1].syntax(format!("parameter `{}` missing from the signature", header[i + 1].text)));
        }
        if matches!(p, Param::Const(_)) && outs.contains(&i) {
            return Err(header[i + 1].syntax("a constant cannot be an output"));
        }
    }

    let last = lines.last().expect("checked length");
    if last[0].text != "sketch" || last.len() < 2 {
        return Err(last[0].syntax("last line must be `sketch <routine> [args]`"));
    }
    let sketch = last[1].text.to_string();
    if !ROUTINES.contains(&sketch.as_str()) {
        return Err(ParseError::UnknownSketch { def: name, sketch });
    }
    let sketch_args = last[2..].iter().map(|t| lookup(t)).collect::<Result<Vec<_>, _>>()?;

    let mut statements = Vec::new();
    for line in &lines[2..lines.len() - 1] {
        let head = line[0];
        let kind: PredicateKind = head.text.parse().map_err(|_| ParseError::UnknownPredicate {
            name: head.text.to_string(),
            line: head.line,
            col: head.col,
        })?;
        let mut rest = &line[1..];
        let mut constant = None;
        if kind.constant_slot() != ConstantSlot::None {
            let c = rest.last().ok_or_else(|| head.syntax("missing constant"))?;
            constant = Some(if c.text.starts_with('$') {
                let i = lookup(c)?;
                if !matches!(params[i], Param::Const(_)) {
                    return Err(c.syntax("constant slot names a point"));
                }
                ConstRef::Param(i)
            } else {
                ConstRef::Literal(
                    Constant::parse(kind.constant_slot(), c.text)
                        .map_err(|e| ParseError::Model { line: c.line, col: c.col, source: e })?,
                )
            });
            rest = &rest[..rest.len() - 1];
        }
        let mut args = Vec::with_capacity(rest.len());
        for t in rest {
            let i = lookup(t)?;
            if !matches!(params[i], Param::Point(_)) {
                return Err(t.syntax("constant used as a point"));
            }
            args.push(i);
        }
        let probe = constant.as_ref().map(|_| match kind.constant_slot() {
            ConstantSlot::Angle => Constant::Angle(0.into()),
            ConstantSlot::Length => Constant::Length(1.into()),
            _ => Constant::Ratio(1.into()),
        });
        canonicalize(kind, &args, probe).map_err(|e| ParseError::Model { line: head.line, col: head.col, source: e })?;
        statements.push(DefTemplate { kind, args, constant });
    }
    Ok(DefinitionSpec { name, params, outs, ins, statements, sketch, sketch_args })
}
