//! The proof state and the deduction rounds that grow it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use log::{debug, info, warn};
use serde::Serialize;

use crate::ar::{compile_statement, derived_statement, is_algebraic, ArEngine, LinearEquation, Provenance, Symbol, TableKind};
use crate::depgraph::{DepGraph, Intrinsic, Reason, ReducedProof, StmtId};
use crate::matcher::{fingerprint, load_or_build, Facts, Match, MatchIndex, Matcher, Profile};
use crate::model::constant::rational_sqrt;
use crate::model::{check_numerical, Constant, PointId, PredicateKind, Pt, Statement, Q};
use crate::parse::{parse_extra_clause, parse_statement_text, Clause, DefinitionSet, ParseError, ProblemSpec, RuleSpec};
use crate::sketch::{build_diagram, clause_statements, extend_diagram, Diagram, SketchError};

#[derive(Debug, thiserror::Error)]
pub enum KernelError {
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Running,
    Solved,
    Saturated,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Running => "running",
            Status::Solved => "solved",
            Status::Saturated => "saturated",
        })
    }
}

#[derive(Debug, Clone)]
pub struct KernelOptions {
    /// Match against the numeric index; otherwise every candidate tuple is tested on the diagram.
    pub use_cache: bool,
    /// Where the index is persisted between runs.
    pub cache_dir: Option<PathBuf>,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { use_cache: true, cache_dir: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "state", content = "id", rename_all = "snake_case")]
pub enum GoalState {
    Open,
    Proven(StmtId),
    /// Diagram-only goal that holds numerically.
    Checked,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RoundReport {
    pub round: usize,
    pub new_statements: Vec<StmtId>,
    pub matches: usize,
    pub applied: usize,
}

fn seg_pairs(st: &Statement) -> Vec<(PointId, PointId)> {
    let a = &st.args;
    match st.kind {
        PredicateKind::Para | PredicateKind::Perp | PredicateKind::Aconst => vec![(a[0], a[1]), (a[2], a[3])],
        PredicateKind::Eqangle => vec![(a[0], a[1]), (a[2], a[3]), (a[4], a[5]), (a[6], a[7])],
        _ => vec![],
    }
}

fn lconst(a: PointId, b: PointId, l: Q) -> Option<Statement> {
    Statement::new(PredicateKind::Lconst, &[a, b], Some(Constant::length(l).ok()?)).ok()
}

/// Index of the first clause whose points the goals do not mention, counted from the end.
pub fn aux_start(problem: &ProblemSpec) -> usize {
    let goal_pts: BTreeSet<PointId> = problem.goals.iter().flat_map(|g| g.args.iter().copied()).collect();
    problem
        .clauses
        .iter()
        .rposition(|c| c.points.iter().any(|p| goal_pts.contains(p)))
        .map_or(0, |i| i + 1)
}

pub struct ProofState {
    pub problem: ProblemSpec,
    pub defs: DefinitionSet,
    pub rules: Vec<RuleSpec>,
    pub diagram: Diagram,
    pub graph: DepGraph,
    pub symbols: crate::symbols::SymbolsGraph,
    pub ar: ArEngine,
    index: Option<MatchIndex>,
    pub cache_loaded: bool,
    pub status: Status,
    pub round: usize,
    pub profile: Profile,
    pub rule_applications: usize,
    /// Table contradictions and false intrinsic or algebraic derivations. Empty on a sound run.
    pub errors: Vec<String>,
    /// Rule instances dropped because a conclusion fails on the diagram (degenerate configurations).
    pub rejected: usize,
    pub goal_states: Vec<GoalState>,
    grown_lines: BTreeSet<usize>,
    grown_circles: BTreeSet<usize>,
}

impl ProofState {
    pub fn new(
        problem: ProblemSpec,
        defs: DefinitionSet,
        rules: Vec<RuleSpec>,
        seed: u64,
        options: KernelOptions,
    ) -> Result<ProofState, KernelError> {
        let diagram = build_diagram(&problem, &defs, seed)?;
        ProofState::with_diagram(problem, defs, rules, diagram, options)
    }

    /// State over a diagram that is already drawn.
    pub fn with_diagram(
        problem: ProblemSpec,
        defs: DefinitionSet,
        rules: Vec<RuleSpec>,
        diagram: Diagram,
        options: KernelOptions,
    ) -> Result<ProofState, KernelError> {
        let mut profile = Profile::default();
        let (index, cache_loaded) = if options.use_cache {
            let fp = fingerprint(&problem.to_text(), diagram.seed);
            let (idx, loaded) = load_or_build(options.cache_dir.as_deref(), &fp, &problem.points, &diagram.coords);
            profile.candidate_checks += idx.checks;
            (Some(idx), loaded)
        } else {
            (None, false)
        };
        let n_goals = problem.goals.len();
        let mut state = ProofState {
            problem,
            defs,
            rules,
            diagram,
            graph: DepGraph::new(),
            symbols: Default::default(),
            ar: ArEngine::new(),
            index,
            cache_loaded,
            status: Status::Running,
            round: 0,
            profile,
            rule_applications: 0,
            errors: Vec::new(),
            rejected: 0,
            goal_states: vec![GoalState::Open; n_goals],
            grown_lines: BTreeSet::new(),
            grown_circles: BTreeSet::new(),
        };
        let aux = aux_start(&state.problem);
        for (i, clause) in state.problem.clauses.clone().iter().enumerate() {
            state.expand_clause(clause, i >= aux)?;
        }
        state.intrinsic_closure();
        if state.check_goals() {
            state.status = Status::Solved;
        }
        Ok(state)
    }

    pub fn points(&self) -> &crate::model::PointTable {
        &self.problem.points
    }

    pub fn index(&self) -> Option<&MatchIndex> {
        self.index.as_ref()
    }

    /// Adds the statements of a clause as construction roots.
    pub fn expand_clause(&mut self, clause: &Clause, aux: bool) -> Result<Vec<StmtId>, KernelError> {
        let mut out = Vec::new();
        for st in clause_statements(clause, &self.defs)? {
            if st.is_degenerate() || st.is_trivial() {
                continue;
            }
            let added = self.graph.add_root(st, aux);
            if added.new_statement {
                self.on_new(added.id);
            }
            out.push(added.id);
        }
        Ok(out)
    }

    fn on_new(&mut self, id: StmtId) {
        let st = self.graph.statement(id).clone();
        debug!("new [{}] {}", id.0, self.problem.points.pretty(&st));
        match st.kind {
            PredicateKind::Coll => {
                let noted = self.symbols.note_collinear(&st.args, id);
                for m in &noted.merges {
                    let (a, b) = self.symbols.line(m.absorbed).def;
                    let (c, d) = self.symbols.line(m.survivor).def;
                    let eq = LinearEquation {
                        table: TableKind::Angle,
                        terms: BTreeMap::from([(Symbol::Direction(m.absorbed), Q::from(1)), (Symbol::Direction(m.survivor), Q::from(-1))]),
                        constant: Q::from(0),
                    };
                    if let Err(e) = self.ar.insert(&eq, Provenance::LineMerge([a, b, c, d])) {
                        self.errors.push(format!("line merge: {e}"));
                    }
                }
                if let (true, Some(r)) = (noted.grew, noted.root) {
                    self.grown_lines.insert(r);
                }
            }
            PredicateKind::Cyclic => {
                let noted = self.symbols.note_concyclic(&st.args, id);
                if let (true, Some(r)) = (noted.grew, noted.root) {
                    self.grown_circles.insert(r);
                }
            }
            PredicateKind::Circle => {
                let a = &st.args;
                for (x, y) in [(a[1], a[2]), (a[1], a[3])] {
                    let cong = Statement::make(PredicateKind::Cong, &[a[0], x, a[0], y]);
                    self.insert_ar(&cong, Provenance::Stmt(id));
                }
                if let Some(c) = self.symbols.circle_containing(&a[1..]) {
                    self.symbols.set_center(c, a[0]);
                }
            }
            k if is_algebraic(k) || k == PredicateKind::Eqratio3 => self.insert_ar(&st, Provenance::Stmt(id)),
            _ => {}
        }
    }

    fn insert_ar(&mut self, st: &Statement, prov: Provenance) {
        let symbols = &mut self.symbols;
        match compile_statement(st, &mut |a, b| symbols.ensure_line(a, b)) {
            Ok(eqs) => {
                for eq in eqs {
                    if let Err(e) = self.ar.insert(&eq, prov) {
                        self.errors.push(format!("{}: {e}", self.problem.points.text(st)));
                    }
                }
            }
            Err(e) => self.errors.push(format!("{}: {e}", self.problem.points.text(st))),
        }
    }

    /// Equations of a statement over the current lines, with unknown lines as fresh symbols.
    fn compile_lookup(&self, st: &Statement) -> Option<Vec<LinearEquation>> {
        let mut fresh: HashMap<(PointId, PointId), usize> = HashMap::new();
        let mut next = 1usize << 30;
        compile_statement(st, &mut |a, b| {
            self.symbols.line_through(a, b).unwrap_or_else(|| {
                let key = if a <= b { (a, b) } else { (b, a) };
                *fresh.entry(key).or_insert_with(|| {
                    next += 1;
                    next
                })
            })
        })
        .ok()
    }

    fn ar_holds(&self, st: &Statement) -> bool {
        self.compile_lookup(st).is_some_and(|eqs| eqs.iter().all(|e| self.ar.implies(e)))
    }

    /// Symbolic presence: stored, on a known line or circle, or implied by the tables.
    pub fn holds(&self, st: &Statement) -> bool {
        use PredicateKind::*;
        if self.graph.contains(st) {
            return true;
        }
        if st.kind.is_numeric_only() {
            return check_numerical(st, &self.diagram) == Ok(true);
        }
        match st.kind {
            Coll => self.symbols.line_containing(&st.args).is_some(),
            Cyclic => self.symbols.circle_containing(&st.args).is_some(),
            Circle => {
                let a = &st.args;
                [(a[1], a[2]), (a[1], a[3])]
                    .iter()
                    .all(|&(x, y)| self.ar_holds(&Statement::make(Cong, &[a[0], x, a[0], y])))
            }
            PythagoreanPremises => self.pythagoras(&st.args).is_some(),
            k if is_algebraic(k) => self.ar_holds(st),
            _ => false,
        }
    }

    /// Makes a symbolically established statement explicit, returning its id.
    pub fn justify(&mut self, st: &Statement) -> Option<StmtId> {
        use PredicateKind::*;
        if let Some(id) = self.graph.id_of(st) {
            return Some(id);
        }
        match st.kind {
            Coll => {
                let ids = self.symbols.coll_support(&st.args)?;
                self.add_fact(&ids, st.clone(), Reason::Intrinsic(Intrinsic::Coll), vec![])
            }
            Cyclic => {
                let ids = self.symbols.cyclic_support(&st.args)?;
                self.add_fact(&ids, st.clone(), Reason::Intrinsic(Intrinsic::Cyclic), vec![])
            }
            Circle => {
                let a = st.args.clone();
                let mut ids = Vec::new();
                for (x, y) in [(a[1], a[2]), (a[1], a[3])] {
                    let cong = Statement::make(Cong, &[a[0], x, a[0], y]);
                    if cong.is_trivial() {
                        continue;
                    }
                    ids.push(self.justify(&cong)?);
                }
                self.add_fact(&ids, st.clone(), Reason::Intrinsic(Intrinsic::Circle), vec![])
            }
            k if is_algebraic(k) => self.ar_justify(st),
            _ => None,
        }
    }

    fn ar_justify(&mut self, st: &Statement) -> Option<StmtId> {
        let eqs = self.compile_lookup(st)?;
        let mut provs: BTreeSet<Provenance> = BTreeSet::new();
        let mut angle = false;
        for eq in &eqs {
            angle |= eq.table == TableKind::Angle;
            provs.extend(self.ar.why(eq)?);
        }
        let mut premises: BTreeSet<StmtId> = provs
            .iter()
            .filter_map(|p| match p {
                Provenance::Stmt(id) => Some(*id),
                Provenance::LineMerge(_) => None,
            })
            .collect();
        if angle {
            let mut groups: BTreeMap<usize, BTreeSet<PointId>> = BTreeMap::new();
            let mut segs = seg_pairs(st);
            for p in &provs {
                match p {
                    Provenance::Stmt(id) => segs.extend(seg_pairs(self.graph.statement(*id))),
                    Provenance::LineMerge(pts) => segs.extend([(pts[0], pts[1]), (pts[2], pts[3])]),
                }
            }
            for (a, b) in segs {
                if let Some(l) = self.symbols.line_through(a, b) {
                    groups.entry(l).or_default().extend([a, b]);
                }
            }
            for g in groups.values().filter(|g| g.len() >= 3) {
                let pts: Vec<PointId> = g.iter().copied().collect();
                premises.extend(self.symbols.coll_support(&pts).unwrap_or_default());
            }
        }
        let stmt_provs: Vec<StmtId> = provs
            .iter()
            .filter_map(|p| if let Provenance::Stmt(id) = p { Some(*id) } else { None })
            .collect();
        let reason = if provs.len() == 1 && stmt_provs.len() == 1 && self.graph.statement(stmt_provs[0]).kind == st.kind {
            Reason::Intrinsic(Intrinsic::Subst)
        } else if angle {
            Reason::ArAngle
        } else {
            Reason::ArRatio
        };
        let premises: Vec<StmtId> = premises.into_iter().collect();
        self.add_fact(&premises, st.clone(), reason, vec![])
    }

    /// Records a derivation after checking its conclusion on the diagram.
    pub fn add_fact(&mut self, premises: &[StmtId], st: Statement, reason: Reason, checks: Vec<Statement>) -> Option<StmtId> {
        if !self.graph.contains(&st) && check_numerical(&st, &self.diagram) != Ok(true) {
            if matches!(reason, Reason::Rule(_)) {
                debug!("dropped {} by {reason}", self.problem.points.text(&st));
                self.rejected += 1;
                return None;
            }
            let msg = format!("{} by {reason} is false on the diagram", self.problem.points.text(&st));
            warn!("{msg}");
            self.errors.push(msg);
            return None;
        }
        match self.graph.add(premises, st, reason, checks) {
            Ok(added) => {
                if added.new_statement {
                    self.on_new(added.id);
                }
                Some(added.id)
            }
            Err(e) => {
                self.errors.push(e.to_string());
                None
            }
        }
    }

    /// The right angle and two known sides behind a Pythagoras step, and the third side.
    fn pythagoras(&self, args: &[PointId]) -> Option<(Vec<Statement>, Statement)> {
        let (a, b, c) = (args[0], args[1], args[2]);
        let perp = Statement::make(PredicateKind::Perp, &[a, b, a, c]);
        if !self.ar_holds(&perp) && !self.graph.contains(&perp) {
            return None;
        }
        let ab = self.ar.length_of(a, b);
        let ac = self.ar.length_of(a, c);
        let bc = self.ar.length_of(b, c);
        let (known, concl) = match (ab, ac, bc) {
            (Some(x), Some(y), None) => ([lconst(a, b, x)?, lconst(a, c, y)?], lconst(b, c, rational_sqrt(x * x + y * y)?)?),
            (Some(x), None, Some(z)) if z > x => ([lconst(a, b, x)?, lconst(b, c, z)?], lconst(a, c, rational_sqrt(z * z - x * x)?)?),
            (None, Some(y), Some(z)) if z > y => ([lconst(a, c, y)?, lconst(b, c, z)?], lconst(a, b, rational_sqrt(z * z - y * y)?)?),
            _ => return None,
        };
        Some((vec![perp, known[0].clone(), known[1].clone()], concl))
    }

    fn apply_match(&mut self, m: &Match) -> usize {
        let rule = self.rules[m.rule].clone();
        let mut checks = m.checks.clone();
        checks.sort();
        checks.dedup();
        let (premises, conclusions) = if rule.conclusions.iter().any(|c| c.kind == PredicateKind::PythagoreanConclusions) {
            let Some(pre) = m.premises.iter().find(|p| p.kind == PredicateKind::PythagoreanPremises) else { return 0 };
            match self.pythagoras(&pre.args) {
                Some((p, c)) => (p, vec![c]),
                None => return 0,
            }
        } else {
            let concl: Vec<Statement> = rule
                .conclusions
                .iter()
                .filter_map(|t| t.instantiate(&m.binding))
                .filter(|s| !s.is_trivial())
                .collect();
            (m.premises.clone(), concl)
        };
        if conclusions.iter().all(|c| self.holds(c)) {
            return 0;
        }
        let mut ids = Vec::new();
        for p in &premises {
            match self.justify(p) {
                Some(id) => ids.push(id),
                None => {
                    self.errors.push(format!("{}: stale premise {}", rule.id, self.problem.points.text(p)));
                    return 0;
                }
            }
        }
        self.rule_applications += 1;
        let mut new = 0;
        for c in conclusions {
            if self.graph.contains(&c) {
                continue;
            }
            if self.add_fact(&ids, c, Reason::Rule(rule.id.clone()), checks.clone()).is_some() {
                new += 1;
            }
        }
        new
    }

    /// Emits every two-symbol relation the tables determine.
    pub fn ar_saturate(&mut self) -> usize {
        let before = self.graph.len();
        let roots: Vec<usize> = self.symbols.lines().map(|l| l.id).collect();
        let mut derived = self.ar.angle_relations(&roots);
        derived.extend(self.ar.ratio_relations());
        for d in derived {
            let Some(st) = derived_statement(&d, |l| self.symbols.line(l).def) else { continue };
            if st.is_degenerate() || st.is_trivial() || self.graph.contains(&st) {
                continue;
            }
            self.ar_justify(&st);
        }
        self.graph.len() - before
    }

    /// All current matches of the given rules, in rule order then substitution order.
    pub fn matches(&mut self, rules: &[usize]) -> Vec<Match> {
        let (all, prof) = {
            let matcher = Matcher::new(&*self, self.index.as_ref());
            let mut all = Vec::new();
            for &i in rules {
                all.extend(matcher.match_rule(i, &self.rules[i]));
            }
            let prof = matcher.profile.borrow().clone();
            (all, prof)
        };
        self.profile.merge(&prof);
        all
    }

    /// Line and circle unions written out as statements.
    pub fn intrinsic_closure(&mut self) -> usize {
        let before = self.graph.len();
        for l in std::mem::take(&mut self.grown_lines) {
            let root = self.symbols.line_root(l);
            let members: Vec<PointId> = self.symbols.line(root).members.iter().copied().collect();
            if members.len() < 3 {
                continue;
            }
            let st = Statement::make(PredicateKind::Coll, &members);
            if !self.graph.contains(&st) {
                if let Some(ids) = self.symbols.coll_support(&members) {
                    self.add_fact(&ids, st, Reason::Intrinsic(Intrinsic::Coll), vec![]);
                }
            }
        }
        for c in std::mem::take(&mut self.grown_circles) {
            let root = self.symbols.circle_root(c);
            let members: Vec<PointId> = self.symbols.circle(root).members.iter().copied().collect();
            if members.len() < 4 {
                continue;
            }
            let st = Statement::make(PredicateKind::Cyclic, &members);
            if !self.graph.contains(&st) {
                if let Some(ids) = self.symbols.cyclic_support(&members) {
                    self.add_fact(&ids, st, Reason::Intrinsic(Intrinsic::Cyclic), vec![]);
                }
            }
        }
        self.grown_lines.clear();
        self.grown_circles.clear();
        self.graph.len() - before
    }

    /// Resolves one goal; compute goals become the constant statement they ask for.
    pub fn check_goal(&mut self, goal: &Statement) -> GoalState {
        use PredicateKind::*;
        if goal.kind.is_numeric_only() {
            return if check_numerical(goal, &self.diagram) == Ok(true) { GoalState::Checked } else { GoalState::Open };
        }
        let a = goal.args.clone();
        let target = match goal.kind {
            Acompute => {
                let (Some(l1), Some(l2)) = (self.symbols.line_through(a[0], a[1]), self.symbols.line_through(a[2], a[3])) else {
                    return GoalState::Open;
                };
                let Some(v) = self.ar.angle_value(l1, l2) else { return GoalState::Open };
                Statement::new(Aconst, &a, Some(Constant::angle(v))).ok()
            }
            Rcompute => self
                .ar
                .ratio_value(a[0], a[1], a[2], a[3])
                .and_then(|r| Statement::new(Rconst, &a, Some(Constant::ratio(r).ok()?)).ok()),
            Lcompute => self.ar.length_of(a[0], a[1]).and_then(|l| lconst(a[0], a[1], l)),
            _ => Some(goal.clone()),
        };
        let Some(target) = target else { return GoalState::Open };
        if !self.holds(&target) {
            return GoalState::Open;
        }
        match self.justify(&target) {
            Some(id) => GoalState::Proven(id),
            None => GoalState::Open,
        }
    }

    /// Updates goal states; true when every goal is settled.
    pub fn check_goals(&mut self) -> bool {
        for i in 0..self.problem.goals.len() {
            if self.goal_states[i] == GoalState::Open {
                let g = self.problem.goals[i].clone();
                self.goal_states[i] = self.check_goal(&g);
            }
        }
        self.goal_states.iter().all(|g| *g != GoalState::Open)
    }

    fn finish_round(&mut self, mut report: RoundReport, before: usize, saturate: bool) -> RoundReport {
        self.intrinsic_closure();
        let solved = self.check_goals();
        report.new_statements = (before..self.graph.len()).map(|i| StmtId(i as u32)).collect();
        self.status = if solved {
            Status::Solved
        } else if saturate && report.new_statements.is_empty() {
            Status::Saturated
        } else {
            Status::Running
        };
        info!(
            "round {}: {} matches, {} applied, {} new statements, {} total, {}",
            report.round,
            report.matches,
            report.applied,
            report.new_statements.len(),
            self.graph.len(),
            self.status
        );
        report
    }

    /// One round: table saturation, every rule match, then the intrinsic closure.
    pub fn saturation_step(&mut self) -> RoundReport {
        if self.status != Status::Running {
            return RoundReport { round: self.round, ..Default::default() };
        }
        self.round += 1;
        let before = self.graph.len();
        self.ar_saturate();
        let all: Vec<usize> = (0..self.rules.len()).collect();
        let matches = self.matches(&all);
        let mut report = RoundReport { round: self.round, matches: matches.len(), ..Default::default() };
        for m in &matches {
            if self.apply_match(m) > 0 {
                report.applied += 1;
            }
        }
        self.finish_round(report, before, true)
    }

    /// Applies every current match of one rule.
    pub fn apply_rule(&mut self, rule_id: &str) -> Result<RoundReport, KernelError> {
        let i = self
            .rules
            .iter()
            .position(|r| r.id == rule_id)
            .ok_or_else(|| KernelError::UnknownRule(rule_id.to_string()))?;
        let before = self.graph.len();
        let matches = self.matches(&[i]);
        let mut report = RoundReport { round: self.round, matches: matches.len(), ..Default::default() };
        for m in &matches {
            if self.apply_match(m) > 0 {
                report.applied += 1;
            }
        }
        if self.status == Status::Solved {
            report.new_statements = (before..self.graph.len()).map(|i| StmtId(i as u32)).collect();
            return Ok(report);
        }
        Ok(self.finish_round(report, before, false))
    }

    /// Adds a construction during the run; its statements count as auxiliary.
    pub fn add_clause(&mut self, text: &str) -> Result<Vec<StmtId>, KernelError> {
        let (points, clause) = parse_extra_clause(text, &self.problem, &self.defs)?;
        let mut diagram = self.diagram.clone();
        let k = self.problem.clauses.len();
        extend_diagram(&mut diagram, &clause, k, &self.defs, k as u64)?;
        self.diagram = diagram;
        self.problem.points = points;
        self.problem.clauses.push(clause.clone());
        if self.index.is_some() {
            let idx = MatchIndex::build(&self.diagram.coords);
            self.profile.candidate_checks += idx.checks;
            self.index = Some(idx);
        }
        let before = self.graph.len();
        self.expand_clause(&clause, true)?;
        let report = RoundReport { round: self.round, ..Default::default() };
        if self.status == Status::Saturated {
            self.status = Status::Running;
        }
        let r = self.finish_round(report, before, false);
        Ok(r.new_statements)
    }

    /// Symbolic and numeric truth of a statement written in problem syntax.
    pub fn check_statement(&self, text: &str) -> Result<(bool, Option<bool>), KernelError> {
        let st = parse_statement_text(text, &self.problem.points)?;
        let numeric = check_numerical(&st, &self.diagram).ok();
        let symbolic = if st.kind.is_compute() { false } else { self.holds(&st) };
        Ok((symbolic, numeric))
    }

    /// Reduced proofs of the proven goals.
    pub fn proofs(&self) -> Vec<ReducedProof> {
        self.goal_states
            .iter()
            .filter_map(|g| match g {
                GoalState::Proven(id) => Some(self.graph.traceback_id(*id)),
                _ => None,
            })
            .collect()
    }

    /// Derived statements that fail on the diagram.
    pub fn audit(&self) -> Vec<String> {
        (0..self.graph.len())
            .map(|i| StmtId(i as u32))
            .filter(|&id| !self.graph.is_root(id))
            .filter(|&id| check_numerical(self.graph.statement(id), &self.diagram) != Ok(true))
            .map(|id| self.problem.points.text(self.graph.statement(id)))
            .collect()
    }

    pub fn statement_texts(&self) -> Vec<String> {
        self.graph.statements().iter().map(|s| self.problem.points.text(s)).collect()
    }
}

impl Facts for ProofState {
    fn holds(&self, s: &Statement) -> bool {
        ProofState::holds(self, s)
    }

    fn explicit(&self, kind: PredicateKind) -> Vec<Statement> {
        self.graph.statements().iter().filter(|s| s.kind == kind).cloned().collect()
    }

    fn lines(&self) -> Vec<Vec<PointId>> {
        self.symbols
            .lines()
            .filter(|l| l.members.len() >= 3)
            .map(|l| l.members.iter().copied().collect())
            .collect()
    }

    fn circles(&self) -> Vec<Vec<PointId>> {
        self.symbols
            .circles()
            .filter(|c| c.members.len() >= 4)
            .map(|c| c.members.iter().copied().collect())
            .collect()
    }

    fn coords(&self) -> &[Pt] {
        &self.diagram.coords
    }
}
