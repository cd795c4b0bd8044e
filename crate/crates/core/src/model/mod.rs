//! Points, predicates, statements and their numerical meaning.

pub mod constant;
pub mod numeric;
pub mod predicate;
pub mod pretty;
pub mod statement;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use constant::{Constant, Q};
pub use numeric::{check_numerical, Coords, NumericError, Pt, ATOL};
pub use predicate::{Arity, ConstantSlot, PredicateKind};
pub use pretty::{display_name, pretty};
pub use statement::{canonicalize, Args, Statement};

/// Index of a point in introduction order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointId(pub u16);

impl PointId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{kind} does not take {got} points")]
    ArityMismatch { kind: PredicateKind, got: usize },
    #[error("constant does not fit {0}")]
    ConstantMismatch(PredicateKind),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("bad constant `{0}`")]
    BadConstant(String),
}

/// Names of the points of a problem, in introduction order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointTable {
    names: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, PointId>,
}

impl PointTable {
    pub fn new() -> PointTable {
        PointTable::default()
    }

    /// Adds a name, returning `None` when it already exists.
    pub fn add(&mut self, name: &str) -> Option<PointId> {
        if self.index.contains_key(name) {
            return None;
        }
        let id = PointId(self.names.len() as u16);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Some(id)
    }

    pub fn get(&self, name: &str) -> Option<PointId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, p: PointId) -> &str {
        &self.names[p.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> {
        (0..self.names.len() as u16).map(PointId)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn pretty(&self, stmt: &Statement) -> String {
        pretty::pretty(stmt, |p| self.name(p))
    }

    /// Problem-file syntax, e.g. `perp a d b c`.
    pub fn text(&self, stmt: &Statement) -> String {
        statement::StatementText { stmt, name: |p| self.name(p) }.to_string()
    }
}
