//! Finding rule instances whose premises are all established.

pub mod index;

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::model::{check_numerical, PointId, PredicateKind, Pt, Statement};
use crate::parse::{RuleSpec, Template};

pub use index::{fingerprint, load_or_build, MatchIndex};

/// What the matcher may ask about the proof state.
pub trait Facts {
    /// Symbolic presence, including what the algebraic tables imply.
    fn holds(&self, s: &Statement) -> bool;
    /// Stored statements of one kind.
    fn explicit(&self, kind: PredicateKind) -> Vec<Statement>;
    /// Point sets of known lines with at least three points.
    fn lines(&self) -> Vec<Vec<PointId>>;
    /// Point sets of known circles with at least four points.
    fn circles(&self) -> Vec<Vec<PointId>>;
    fn coords(&self) -> &[Pt];
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Match {
    pub rule: usize,
    pub binding: Vec<PointId>,
    pub premises: Vec<Statement>,
    /// Diagram-only premises.
    pub checks: Vec<Statement>,
}

/// Time spent enumerating premises of each kind, and numeric tests done while matching.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Profile {
    pub per_kind: BTreeMap<String, Duration>,
    pub candidate_checks: u64,
}

impl Profile {
    pub fn total(&self) -> Duration {
        self.per_kind.values().sum()
    }

    pub fn merge(&mut self, other: &Profile) {
        for (k, d) in &other.per_kind {
            *self.per_kind.entry(k.clone()).or_default() += *d;
        }
        self.candidate_checks += other.candidate_checks;
    }

    /// Share of matching time per kind, largest first.
    pub fn report(&self) -> String {
        let total = self.total().as_secs_f64().max(1e-12);
        let mut rows: Vec<(&String, &Duration)> = self.per_kind.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        let mut s = String::from("kind        seconds   share\n");
        for (k, d) in rows {
            s.push_str(&format!("{:<10} {:>9.4} {:>6.1}%\n", k, d.as_secs_f64(), 100.0 * d.as_secs_f64() / total));
        }
        s.push_str(&format!("total      {:>9.4}\n", self.total().as_secs_f64()));
        s
    }
}

type Binding = Vec<Option<PointId>>;

fn assign(b: &Binding, vars: &[usize], pts: &[PointId]) -> Option<Binding> {
    let mut nb = b.clone();
    for (&v, &p) in vars.iter().zip(pts) {
        match nb[v] {
            Some(q) if q != p => return None,
            Some(_) => {}
            None => nb[v] = Some(p),
        }
    }
    Some(nb)
}

/// All ways of binding the unbound variables among `vars` to points of `domain`.
fn free_assignments(b: &Binding, vars: &[usize], domain: &[PointId]) -> Vec<Binding> {
    let mut free: Vec<usize> = vars.iter().copied().filter(|&v| b[v].is_none()).collect();
    free.sort();
    free.dedup();
    let mut out = vec![b.clone()];
    for v in free {
        let mut next = Vec::with_capacity(out.len() * domain.len());
        for partial in &out {
            for &p in domain {
                let mut nb = partial.clone();
                nb[v] = Some(p);
                next.push(nb);
            }
        }
        out = next;
    }
    out
}

fn pair_options(b: &Binding, x: usize, y: usize, n: usize) -> Vec<(PointId, PointId)> {
    if x == y {
        return vec![];
    }
    let all = || (0..n as u16).map(PointId);
    let xs: Vec<PointId> = b[x].map_or_else(|| all().collect(), |p| vec![p]);
    let ys: Vec<PointId> = b[y].map_or_else(|| all().collect(), |p| vec![p]);
    let mut out = Vec::new();
    for &p in &xs {
        for &q in &ys {
            if p != q {
                out.push((p, q));
            }
        }
    }
    out
}

fn bound_count(b: &Binding, vars: &[usize]) -> usize {
    vars.iter().filter(|&&v| b[v].is_some()).count()
}

/// Argument relabelings under which a stored statement of `kind` keeps its meaning.
fn orbit(kind: PredicateKind) -> Vec<Vec<usize>> {
    use PredicateKind::*;
    match kind {
        Simtri | Simtrir | Contri | Contrir => {
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let mut out = Vec::new();
            for p in perms {
                out.push(vec![p[0], p[1], p[2], 3 + p[0], 3 + p[1], 3 + p[2]]);
                out.push(vec![3 + p[0], 3 + p[1], 3 + p[2], p[0], p[1], p[2]]);
            }
            out
        }
        Eqratio3 => vec![vec![0, 1, 2, 3, 4, 5], vec![1, 0, 3, 2, 5, 4], vec![2, 3, 0, 1, 4, 5], vec![3, 2, 1, 0, 5, 4]],
        _ => vec![],
    }
}

/// Matches rules against a frozen view of the proof state.
pub struct Matcher<'a, F: Facts> {
    facts: &'a F,
    index: Option<&'a MatchIndex>,
    n: usize,
    memo: RefCell<HashMap<Statement, bool>>,
    explicit: RefCell<HashMap<PredicateKind, Vec<Statement>>>,
    lines: Vec<Vec<PointId>>,
    circles: Vec<Vec<PointId>>,
    pub profile: RefCell<Profile>,
}

impl<'a, F: Facts> Matcher<'a, F> {
    /// `index = None` enumerates every point tuple and tests it on the diagram.
    pub fn new(facts: &'a F, index: Option<&'a MatchIndex>) -> Matcher<'a, F> {
        Matcher {
            n: facts.coords().len(),
            lines: facts.lines(),
            circles: facts.circles(),
            facts,
            index,
            memo: RefCell::new(HashMap::new()),
            explicit: RefCell::new(HashMap::new()),
            profile: RefCell::new(Profile::default()),
        }
    }

    fn points(&self) -> Vec<PointId> {
        (0..self.n as u16).map(PointId).collect()
    }

    fn holds(&self, s: &Statement) -> bool {
        if let Some(&v) = self.memo.borrow().get(s) {
            return v;
        }
        let v = self.facts.holds(s);
        self.memo.borrow_mut().insert(s.clone(), v);
        v
    }

    fn numeric(&self, s: &Statement) -> bool {
        check_numerical(s, self.facts.coords()) == Ok(true)
    }

    fn explicit(&self, kind: PredicateKind) -> Vec<Statement> {
        self.explicit.borrow_mut().entry(kind).or_insert_with(|| self.facts.explicit(kind)).clone()
    }

    /// Candidate bindings for one premise, before filtering.
    fn candidates(&self, t: &Template, b: &Binding) -> Vec<Binding> {
        use PredicateKind::*;
        let Some(idx) = self.index else {
            return free_assignments(b, &t.vars, &self.points());
        };
        let v = &t.vars;
        let mut out = Vec::new();
        match t.kind {
            Coll | Cyclic => {
                let objects = if t.kind == Coll { &self.lines } else { &self.circles };
                for obj in objects {
                    if v.iter().all(|&x| b[x].map_or(true, |p| obj.contains(&p))) {
                        out.extend(free_assignments(b, v, obj));
                    }
                }
            }
            Para | Perp | Cong => {
                let (a, o) = if bound_count(b, &v[2..4]) > bound_count(b, &v[0..2]) { (2, 0) } else { (0, 2) };
                for (p, q) in pair_options(b, v[a], v[a + 1], self.n) {
                    let Some(nb) = assign(b, &v[a..a + 2], &[p, q]) else { continue };
                    let target = match t.kind {
                        Para => Some((idx.dir_class(p, q), true)),
                        Perp => idx.perp.get(&idx.dir_class(p, q)).map(|&c| (c, true)),
                        _ => Some((idx.len_class(p, q), false)),
                    };
                    let Some((c, is_dir)) = target else { continue };
                    let members = if is_dir { idx.dirs.members(c) } else { idx.lens.members(c) };
                    for &(r, s) in members {
                        for (x, y) in [(r, s), (s, r)] {
                            if let Some(fb) = assign(&nb, &v[o..o + 2], &[x, y]) {
                                out.push(fb);
                            }
                        }
                    }
                }
            }
            Eqangle | Eqratio => {
                let (a, o) = if bound_count(b, &v[4..8]) > bound_count(b, &v[0..4]) { (4, 0) } else { (0, 4) };
                let angle = t.kind == Eqangle;
                let class = |p: PointId, q: PointId| if angle { idx.dir_class(p, q) } else { idx.len_class(p, q) };
                let members = |c: u32| if angle { idx.dirs.members(c) } else { idx.lens.members(c) };
                for (p, q) in pair_options(b, v[a], v[a + 1], self.n) {
                    let Some(b1) = assign(b, &v[a..a + 2], &[p, q]) else { continue };
                    for (r, s) in pair_options(&b1, v[a + 2], v[a + 3], self.n) {
                        let Some(b2) = assign(&b1, &v[a + 2..a + 4], &[r, s]) else { continue };
                        let (c1, c2) = (class(p, q), class(r, s));
                        let others = if angle { idx.same_angle_pairs(c1, c2) } else { idx.same_ratio_pairs(c1, c2) };
                        for (c3, c4) in others {
                            for &(e, f) in members(c3) {
                                for (x, y) in [(e, f), (f, e)] {
                                    let Some(b3) = assign(&b2, &v[o..o + 2], &[x, y]) else { continue };
                                    for &(g, h) in members(c4) {
                                        for (z, w) in [(g, h), (h, g)] {
                                            if let Some(b4) = assign(&b3, &v[o + 2..o + 4], &[z, w]) {
                                                out.push(b4);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Circle => {
                let centers: Vec<PointId> = b[v[0]].map_or_else(|| self.points(), |p| vec![p]);
                for o in centers {
                    let Some(nb) = assign(b, &v[0..1], &[o]) else { continue };
                    let mut groups: BTreeMap<u32, Vec<PointId>> = BTreeMap::new();
                    for x in self.points() {
                        if x != o {
                            groups.entry(idx.len_class(o, x)).or_default().push(x);
                        }
                    }
                    for g in groups.values() {
                        if v[1..].iter().all(|&x| nb[x].map_or(true, |p| g.contains(&p))) {
                            out.extend(free_assignments(&nb, &v[1..], g));
                        }
                    }
                }
            }
            Midp => {
                for &(m, p, q) in &idx.midps {
                    for pts in [[m, p, q], [m, q, p]] {
                        if let Some(nb) = assign(b, v, &pts) {
                            out.push(nb);
                        }
                    }
                }
            }
            Simtri | Simtrir | Contri | Contrir | Eqratio3 => {
                for st in self.explicit(t.kind) {
                    for perm in orbit(t.kind) {
                        let pts: Vec<PointId> = perm.iter().map(|&i| st.args[i]).collect();
                        if let Some(nb) = assign(b, v, &pts) {
                            out.push(nb);
                        }
                    }
                }
            }
            PythagoreanPremises => {
                let all = self.points();
                for a in b[v[0]].map_or_else(|| all.clone(), |p| vec![p]) {
                    for bb in b[v[1]].map_or_else(|| all.clone(), |p| vec![p]) {
                        if bb == a {
                            continue;
                        }
                        let Some(&pc) = idx.perp.get(&idx.dir_class(a, bb)) else { continue };
                        for &c in &all {
                            if c != a && c != bb && idx.dir_class(a, c) == pc {
                                if let Some(nb) = assign(b, v, &[a, bb, c]) {
                                    out.push(nb);
                                }
                            }
                        }
                    }
                }
            }
            _ => out = free_assignments(b, v, &self.points()),
        }
        out
    }

    /// Bindings extending `b` under which the premise is established.
    fn extend(&self, t: &Template, b: &Binding) -> Vec<(Binding, Statement)> {
        let start = Instant::now();
        let mut seen: HashSet<Binding> = HashSet::new();
        let mut out = Vec::new();
        let mut counted = 0u64;
        for nb in self.candidates(t, b) {
            if !seen.insert(nb.clone()) {
                continue;
            }
            let full: Vec<PointId> = nb.iter().map(|p| p.unwrap_or(PointId(u16::MAX))).collect();
            let Some(stmt) = t.instantiate(&full) else { continue };
            if stmt.is_trivial() {
                continue;
            }
            let ok = if t.kind.is_numeric_only() {
                self.numeric(&stmt)
            } else if self.index.is_none() {
                counted += 1;
                self.numeric(&stmt) && self.holds(&stmt)
            } else {
                self.holds(&stmt)
            };
            if ok {
                out.push((nb, stmt));
            }
        }
        let mut prof = self.profile.borrow_mut();
        *prof.per_kind.entry(t.kind.tag().to_string()).or_default() += start.elapsed();
        prof.candidate_checks += counted;
        out
    }

    fn search(&self, rule: &RuleSpec, k: usize, b: &Binding, stmts: &mut Vec<Statement>, out: &mut BTreeMap<Vec<PointId>, Vec<Statement>>) {
        if k == rule.premises.len() {
            let binding: Vec<PointId> = b.iter().map(|p| p.expect("all variables occur in premises")).collect();
            out.entry(binding).or_insert_with(|| stmts.clone());
            return;
        }
        for (nb, st) in self.extend(&rule.premises[k], b) {
            stmts.push(st);
            self.search(rule, k + 1, &nb, stmts, out);
            stmts.pop();
        }
    }

    /// Every instance of the rule with all premises established, ordered by substitution.
    pub fn match_rule(&self, rule_index: usize, rule: &RuleSpec) -> Vec<Match> {
        let mut found = BTreeMap::new();
        let b: Binding = vec![None; rule.vars.len()];
        self.search(rule, 0, &b, &mut Vec::new(), &mut found);
        found
            .into_iter()
            .map(|(binding, stmts)| {
                let (checks, premises): (Vec<Statement>, Vec<Statement>) =
                    stmts.into_iter().partition(|s| s.kind.is_numeric_only());
                let premises: Vec<Statement> = premises.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
                Match { rule: rule_index, binding, premises, checks }
            })
            .collect()
    }
}
