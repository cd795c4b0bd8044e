//! Statements with the dependencies that justify them, and proof extraction.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{PointTable, Statement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StmtId(pub u32);

impl StmtId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Intrinsic {
    /// Points of merged lines are collinear.
    Coll,
    /// Points of merged circles are concyclic.
    Cyclic,
    /// A statement restated with other points of the same lines.
    Subst,
    /// Equal distances from a center give a circle, and back.
    Circle,
}

impl Intrinsic {
    pub fn tag(self) -> &'static str {
        match self {
            Intrinsic::Coll => "i-coll",
            Intrinsic::Cyclic => "i-cyclic",
            Intrinsic::Subst => "i-subst",
            Intrinsic::Circle => "i-circle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "id", rename_all = "snake_case")]
pub enum Reason {
    Construction,
    Rule(String),
    Intrinsic(Intrinsic),
    ArAngle,
    ArRatio,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Construction => f.write_str("construction"),
            Reason::Rule(id) => f.write_str(id),
            Reason::Intrinsic(i) => f.write_str(i.tag()),
            Reason::ArAngle => f.write_str("Angle chase"),
            Reason::ArRatio => f.write_str("Ratio chase"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dependency {
    pub premises: Vec<StmtId>,
    pub conclusion: StmtId,
    pub reason: Reason,
    /// Diagram-only side conditions that held when the step was taken.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DepError {
    #[error("premise {0} is not established")]
    UnjustifiedPremise(String),
    #[error("conclusion {0} is false on the diagram")]
    NumericallyFalseConclusion(String),
    #[error("goal {0} is not proven")]
    GoalNotProven(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Added {
    pub id: StmtId,
    pub new_statement: bool,
    pub inserted: bool,
}

#[derive(Debug, Clone, Default)]
pub struct DepGraph {
    stmts: Vec<Statement>,
    index: HashMap<Statement, StmtId>,
    deps: Vec<Dependency>,
    justified_by: Vec<Vec<usize>>,
    aux: Vec<bool>,
    seen: HashSet<(Vec<StmtId>, StmtId, Reason)>,
}

/// An ordered, self-contained derivation of one goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedProof {
    pub goal: StmtId,
    pub premises: Vec<StmtId>,
    pub aux: Vec<StmtId>,
    pub steps: Vec<Dependency>,
}

impl DepGraph {
    pub fn new() -> DepGraph {
        DepGraph::default()
    }

    pub fn len(&self) -> usize {
        self.stmts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stmts.is_empty()
    }

    pub fn statement(&self, id: StmtId) -> &Statement {
        &self.stmts[id.index()]
    }

    pub fn statements(&self) -> &[Statement] {
        &self.stmts
    }

    pub fn id_of(&self, s: &Statement) -> Option<StmtId> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Statement) -> bool {
        self.index.contains_key(s)
    }

    pub fn dependencies(&self) -> &[Dependency] {
        &self.deps
    }

    /// The dependency that first justified `id`.
    pub fn first_dependency(&self, id: StmtId) -> &Dependency {
        &self.deps[self.justified_by[id.index()][0]]
    }

    pub fn is_root(&self, id: StmtId) -> bool {
        self.first_dependency(id).reason == Reason::Construction
    }

    pub fn is_aux(&self, id: StmtId) -> bool {
        self.aux[id.index()]
    }

    pub fn add_root(&mut self, conclusion: Statement, aux: bool) -> Added {
        let added = self.add(&[], conclusion, Reason::Construction, vec![]).expect("roots need no premises");
        if added.new_statement {
            self.aux[added.id.index()] = aux;
        }
        added
    }

    /// Records that `premises` justify `conclusion`. Duplicates are ignored.
    pub fn add(
        &mut self,
        premises: &[StmtId],
        conclusion: Statement,
        reason: Reason,
        checks: Vec<Statement>,
    ) -> Result<Added, DepError> {
        if let Some(bad) = premises.iter().find(|p| p.index() >= self.stmts.len()) {
            return Err(DepError::UnjustifiedPremise(format!("#{}", bad.0)));
        }
        let mut prem: Vec<StmtId> = premises.to_vec();
        prem.sort();
        prem.dedup();
        let (id, new_statement) = match self.index.get(&conclusion) {
            Some(&id) => (id, false),
            None => {
                let id = StmtId(self.stmts.len() as u32);
                self.index.insert(conclusion.clone(), id);
                self.stmts.push(conclusion);
                self.justified_by.push(vec![]);
                self.aux.push(false);
                (id, true)
            }
        };
        if prem.contains(&id) {
            return Ok(Added { id, new_statement, inserted: false });
        }
        let key = (prem.clone(), id, reason.clone());
        if !self.seen.insert(key) {
            return Ok(Added { id, new_statement, inserted: false });
        }
        self.justified_by[id.index()].push(self.deps.len());
        self.deps.push(Dependency { premises: prem, conclusion: id, reason, checks });
        Ok(Added { id, new_statement, inserted: true })
    }

    /// Same as [`DepGraph::add`] with premises given as statements.
    pub fn add_by_statements(
        &mut self,
        premises: &[Statement],
        conclusion: Statement,
        reason: Reason,
    ) -> Result<Added, DepError> {
        let mut ids = Vec::new();
        for p in premises {
            ids.push(self.id_of(p).ok_or_else(|| DepError::UnjustifiedPremise(format!("{p:?}")))?);
        }
        self.add(&ids, conclusion, reason, vec![])
    }

    /// Walks first dependencies back from the goal.
    pub fn traceback(&self, goal: &Statement) -> Result<ReducedProof, DepError> {
        let gid = self.id_of(goal).ok_or_else(|| DepError::GoalNotProven(format!("{goal:?}")))?;
        Ok(self.traceback_id(gid))
    }

    pub fn traceback_id(&self, goal: StmtId) -> ReducedProof {
        let mut needed: BTreeSet<StmtId> = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(s) = stack.pop() {
            if !needed.insert(s) {
                continue;
            }
            stack.extend(self.first_dependency(s).premises.iter().copied());
        }
        let steps: Vec<Dependency> = needed
            .iter()
            .filter(|&&s| !self.is_root(s))
            .map(|&s| self.first_dependency(s).clone())
            .collect();
        let roots = (0..self.stmts.len() as u32).map(StmtId).filter(|&s| self.is_root(s));
        let (aux, premises): (Vec<StmtId>, Vec<StmtId>) = roots.partition(|&s| self.is_aux(s));
        ReducedProof { goal, premises, aux, steps }
    }

    /// Per-depth counts of the statements a proof uses, starting at the goal.
    pub fn width_profile(&self, proof: &ReducedProof) -> Vec<usize> {
        let by_conclusion: HashMap<StmtId, &Dependency> = proof.steps.iter().map(|d| (d.conclusion, d)).collect();
        let mut depth: HashMap<StmtId, usize> = HashMap::new();
        let mut queue = VecDeque::from([(proof.goal, 0usize)]);
        while let Some((s, d)) = queue.pop_front() {
            if depth.contains_key(&s) {
                continue;
            }
            depth.insert(s, d);
            if let Some(dep) = by_conclusion.get(&s) {
                for &p in &dep.premises {
                    queue.push_back((p, d + 1));
                }
            }
        }
        let max = depth.values().copied().max().unwrap_or(0);
        let mut widths = vec![0; max + 1];
        for d in depth.values() {
            widths[*d] += 1;
        }
        widths
    }

    pub fn to_json(&self, points: &PointTable, proof: Option<&ReducedProof>) -> serde_json::Value {
        let node = |id: StmtId| {
            let s = self.statement(id);
            serde_json::json!({
                "id": id.0,
                "text": points.text(s),
                "pretty": points.pretty(s),
                "kind": s.kind.tag(),
                "root": self.is_root(id),
                "aux": self.is_aux(id),
            })
        };
        let edge = |d: &Dependency| {
            serde_json::json!({
                "premises": d.premises.iter().map(|p| p.0).collect::<Vec<_>>(),
                "conclusion": d.conclusion.0,
                "reason": d.reason.to_string(),
            })
        };
        let full = serde_json::json!({
            "nodes": (0..self.stmts.len() as u32).map(|i| node(StmtId(i))).collect::<Vec<_>>(),
            "edges": self.deps.iter().map(edge).collect::<Vec<_>>(),
        });
        let reduced = proof.map(|p| {
            let mut ids: BTreeSet<StmtId> = p.steps.iter().flat_map(|d| d.premises.iter().copied().chain([d.conclusion])).collect();
            ids.insert(p.goal);
            serde_json::json!({
                "goal": p.goal.0,
                "nodes": ids.iter().map(|&i| node(i)).collect::<Vec<_>>(),
                "edges": p.steps.iter().map(edge).collect::<Vec<_>>(),
                "widths": self.width_profile(p),
            })
        });
        serde_json::json!({ "full": full, "reduced": reduced })
    }
}

/// Whether every step only uses roots or conclusions of earlier steps, ending at the goal.
pub fn is_valid_proof(proof: &ReducedProof) -> bool {
    let mut known: HashSet<StmtId> = proof.premises.iter().chain(&proof.aux).copied().collect();
    if proof.steps.is_empty() {
        return known.contains(&proof.goal);
    }
    for step in &proof.steps {
        if !step.premises.iter().all(|p| known.contains(p)) {
            return false;
        }
        known.insert(step.conclusion);
    }
    known.contains(&proof.goal)
}
