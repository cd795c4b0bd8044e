//! Algebraic reasoning: angle chasing over line directions and ratio chasing over log-lengths.

pub mod lattice;
pub mod rational;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::depgraph::StmtId;
use crate::model::{Constant, PointId, PredicateKind, Statement, Q};

pub use lattice::{ZTable, ZTerms};
pub use rational::{Insert, QTable, Sym, Terms, R};

/// Ratio-table columns at or above this index stand for `log p` of a prime `p`.
pub const LOGCONST_BASE: Sym = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// Direction of a line node, in units of π.
    Direction(usize),
    LogLength(PointId, PointId),
    /// `log p` for a prime `p`.
    LogConst(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Angle,
    Ratio,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEquation {
    pub table: TableKind,
    pub terms: BTreeMap<Symbol, Q>,
    /// Angle table: units of π in `[0, 1)`. Ratio table: always zero.
    pub constant: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArError {
    #[error("{0} has no linear meaning")]
    UnsupportedKind(PredicateKind),
    #[error("constant {0} has a prime factor too large for the ratio table")]
    ConstantTooLarge(Q),
    #[error("contradictory equations: {0:?}")]
    InconsistentTable(Vec<Provenance>),
}

/// Where a logged equation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Stmt(StmtId),
    /// Two line nodes became one; the four points are their defining pairs.
    LineMerge([PointId; 4]),
}

fn seg(a: PointId, b: PointId) -> Symbol {
    if a <= b {
        Symbol::LogLength(a, b)
    } else {
        Symbol::LogLength(b, a)
    }
}

fn add(terms: &mut BTreeMap<Symbol, Q>, s: Symbol, c: i64) {
    let e = terms.entry(s).or_insert_with(Q::zero);
    *e += Q::from_integer(c);
    if e.is_zero() {
        terms.remove(&s);
    }
}

fn factor(mut n: i64) -> Option<Vec<(u32, i64)>> {
    let mut out = Vec::new();
    let mut p = 2i64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p as u32, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((u32::try_from(n).ok()?, 1));
    }
    Some(out)
}

/// `log r` as a combination of prime logs.
pub fn log_terms(r: Q) -> Result<BTreeMap<Symbol, Q>, ArError> {
    let mut terms = BTreeMap::new();
    for (p, e) in factor(*r.numer()).ok_or(ArError::ConstantTooLarge(r))? {
        add(&mut terms, Symbol::LogConst(p), e);
    }
    for (p, e) in factor(*r.denom()).ok_or(ArError::ConstantTooLarge(r))? {
        add(&mut terms, Symbol::LogConst(p), -e);
    }
    Ok(terms)
}

/// Translates a statement into the equations it asserts. `line` names the line node through two points.
pub fn compile_statement(
    stmt: &Statement,
    line: &mut dyn FnMut(PointId, PointId) -> usize,
) -> Result<Vec<LinearEquation>, ArError> {
    use PredicateKind::*;
    let a = &stmt.args;
    let mut d = |i: usize| Symbol::Direction(line(a[i], a[i + 1]));
    let angle = |pairs: &[(Symbol, i64)], c: Q| {
        let mut terms = BTreeMap::new();
        for &(s, k) in pairs {
            add(&mut terms, s, k);
        }
        LinearEquation { table: TableKind::Angle, terms, constant: crate::model::constant::reduce_mod_one(c) }
    };
    let ratio = |pairs: &[(Symbol, i64)], extra: BTreeMap<Symbol, Q>| {
        let mut terms = BTreeMap::new();
        for &(s, k) in pairs {
            add(&mut terms, s, k);
        }
        for (s, c) in extra {
            let e = terms.entry(s).or_insert_with(Q::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(&s);
            }
        }
        LinearEquation { table: TableKind::Ratio, terms, constant: Q::zero() }
    };
    let neg = |m: BTreeMap<Symbol, Q>| m.into_iter().map(|(s, c)| (s, -c)).collect::<BTreeMap<_, _>>();
    let eqs = match stmt.kind {
        Para => vec![angle(&[(d(0), 1), (d(2), -1)], Q::zero())],
        Perp => vec![angle(&[(d(2), 1), (d(0), -1)], Q::new(1, 2))],
        Aconst => {
            let c = stmt.constant.map(|c| c.value()).unwrap_or_else(Q::zero);
            vec![angle(&[(d(2), 1), (d(0), -1)], c)]
        }
        Eqangle => vec![angle(&[(d(2), 1), (d(0), -1), (d(6), -1), (d(4), 1)], Q::zero())],
        Cong => vec![ratio(&[(seg(a[0], a[1]), 1), (seg(a[2], a[3]), -1)], BTreeMap::new())],
        Eqratio => vec![ratio(
            &[(seg(a[0], a[1]), 1), (seg(a[2], a[3]), -1), (seg(a[4], a[5]), -1), (seg(a[6], a[7]), 1)],
            BTreeMap::new(),
        )],
        Rconst => {
            let r = stmt.constant.map(|c| c.value()).unwrap_or_else(Q::one);
            vec![ratio(&[(seg(a[0], a[1]), 1), (seg(a[2], a[3]), -1)], neg(log_terms(r)?))]
        }
        Lconst => {
            let l = stmt.constant.map(|c| c.value()).unwrap_or_else(Q::one);
            vec![ratio(&[(seg(a[0], a[1]), 1)], neg(log_terms(l)?))]
        }
        Eqratio3 => {
            let (pa, pb, pc, pd, m, n) = (a[0], a[1], a[2], a[3], a[4], a[5]);
            vec![
                ratio(&[(seg(m, pa), 1), (seg(m, pc), -1), (seg(n, pb), -1), (seg(n, pd), 1)], BTreeMap::new()),
                ratio(&[(seg(m, pa), 1), (seg(pa, pc), -1), (seg(n, pb), -1), (seg(pb, pd), 1)], BTreeMap::new()),
            ]
        }
        k => return Err(ArError::UnsupportedKind(k)),
    };
    Ok(eqs.into_iter().filter(|e| !(e.terms.is_empty() && e.constant.is_zero())).collect())
}

/// Whether statements of this kind are decided by the tables.
pub fn is_algebraic(kind: PredicateKind) -> bool {
    use PredicateKind::*;
    matches!(kind, Para | Perp | Aconst | Eqangle | Cong | Eqratio | Rconst | Lconst)
}

/// A relation between at most two symbols implied by a table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Derived {
    /// `d(second) - d(first) = c`, lines given by node ids.
    Angle { first: usize, second: usize, constant: Q },
    /// `|first| / |second| = r`.
    Ratio { first: (PointId, PointId), second: (PointId, PointId), ratio: Q },
    Length { seg: (PointId, PointId), length: Q },
}

#[derive(Debug, Clone, Default)]
pub struct ArEngine {
    angle: ZTable,
    ratio: QTable,
    angle_prov: Vec<Provenance>,
    ratio_prov: Vec<Provenance>,
    segs: HashMap<(PointId, PointId), Sym>,
    seg_pts: Vec<(PointId, PointId)>,
}

fn q_to_r(q: Q) -> R {
    R::new(*q.numer() as i128, *q.denom() as i128)
}

impl ArEngine {
    pub fn new() -> ArEngine {
        ArEngine::default()
    }

    pub fn angle_table(&self) -> &ZTable {
        &self.angle
    }

    pub fn ratio_table(&self) -> &QTable {
        &self.ratio
    }

    pub fn equation_count(&self) -> (usize, usize) {
        (self.angle.log().len(), self.ratio.log().len())
    }

    fn seg_sym(&mut self, a: PointId, b: PointId) -> Sym {
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(&s) = self.segs.get(&key) {
            return s;
        }
        let s = self.seg_pts.len() as Sym;
        self.segs.insert(key, s);
        self.seg_pts.push(key);
        s
    }

    fn lookup_seg(&self, a: PointId, b: PointId) -> Option<Sym> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.segs.get(&key).copied()
    }

    fn ratio_terms(&mut self, eq: &LinearEquation) -> Terms {
        for s in eq.terms.keys() {
            if let Symbol::LogLength(a, b) = *s {
                self.seg_sym(a, b);
            }
        }
        self.lookup_ratio_terms(eq).expect("symbols created")
    }

    fn lookup_ratio_terms(&self, eq: &LinearEquation) -> Option<Terms> {
        let mut t = Terms::new();
        for (s, c) in &eq.terms {
            let sym = match *s {
                Symbol::LogLength(a, b) => self.lookup_seg(a, b)?,
                Symbol::LogConst(p) => LOGCONST_BASE + p,
                Symbol::Direction(_) => unreachable!("angle symbol in ratio equation"),
            };
            t.insert(sym, q_to_r(*c));
        }
        Some(t)
    }

    fn angle_terms(eq: &LinearEquation) -> ZTerms {
        eq.terms
            .iter()
            .map(|(s, c)| match s {
                Symbol::Direction(l) => (*l as Sym, *c.numer()),
                _ => unreachable!("length symbol in angle equation"),
            })
            .collect()
    }

    /// Logs an equation. Returns whether the table's content grew.
    pub fn insert(&mut self, eq: &LinearEquation, prov: Provenance) -> Result<bool, ArError> {
        match eq.table {
            TableKind::Angle => match self.angle.add(&Self::angle_terms(eq), eq.constant) {
                Insert::Independent => {
                    self.angle_prov.push(prov);
                    Ok(true)
                }
                Insert::Redundant => {
                    self.angle_prov.push(prov);
                    Ok(false)
                }
                Insert::Inconsistent(ids) => Err(ArError::InconsistentTable(self.provs(TableKind::Angle, &ids, prov))),
            },
            TableKind::Ratio => {
                let t = self.ratio_terms(eq);
                let red = self.ratio.reduce(&t);
                if !red.residual.is_empty() && red.residual.keys().all(|k| *k >= LOGCONST_BASE) {
                    // a relation among constants only: true only if it vanishes numerically
                    let v: f64 = red
                        .residual
                        .iter()
                        .map(|(k, c)| (*c.numer() as f64 / *c.denom() as f64) * ((k - LOGCONST_BASE) as f64).ln())
                        .sum();
                    if v.abs() > 1e-9 {
                        let ids: Vec<usize> = red.combo.keys().copied().collect();
                        return Err(ArError::InconsistentTable(self.provs(TableKind::Ratio, &ids, prov)));
                    }
                }
                match self.ratio.add(&t, R::zero()) {
                    Insert::Independent => {
                        self.ratio_prov.push(prov);
                        Ok(true)
                    }
                    Insert::Redundant => {
                        self.ratio_prov.push(prov);
                        Ok(false)
                    }
                    Insert::Inconsistent(ids) => {
                        Err(ArError::InconsistentTable(self.provs(TableKind::Ratio, &ids, prov)))
                    }
                }
            }
        }
    }

    fn provs(&self, table: TableKind, ids: &[usize], extra: Provenance) -> Vec<Provenance> {
        let log = match table {
            TableKind::Angle => &self.angle_prov,
            TableKind::Ratio => &self.ratio_prov,
        };
        ids.iter().map(|&i| log.get(i).copied().unwrap_or(extra)).collect()
    }

    /// Whether the tables imply the equation.
    pub fn implies(&self, eq: &LinearEquation) -> bool {
        match eq.table {
            TableKind::Angle => self.angle.implies(&Self::angle_terms(eq), eq.constant).is_some(),
            TableKind::Ratio => match self.lookup_ratio_terms(eq) {
                Some(t) => self.ratio.implies(&t, R::zero()).is_some(),
                None => false,
            },
        }
    }

    /// Subset-minimal sources of an implied equation.
    pub fn why(&self, eq: &LinearEquation) -> Option<Vec<Provenance>> {
        let ids = match eq.table {
            TableKind::Angle => {
                let terms = Self::angle_terms(eq);
                let support = self.angle.implies(&terms, eq.constant)?;
                let sub: Vec<(ZTerms, Q)> = support.iter().map(|&i| self.angle.log()[i].clone()).collect();
                lattice::minimize(&sub, &terms, eq.constant)?.into_iter().map(|k| support[k]).collect::<Vec<_>>()
            }
            TableKind::Ratio => {
                let terms = self.lookup_ratio_terms(eq)?;
                let support = self.ratio.implies(&terms, R::zero())?;
                let sub: Vec<(Terms, R)> = support.iter().map(|&i| self.ratio.log()[i].clone()).collect();
                rational::minimize(&sub, &terms, R::zero())?.into_iter().map(|k| support[k]).collect::<Vec<_>>()
            }
        };
        let log = match eq.table {
            TableKind::Angle => &self.angle_prov,
            TableKind::Ratio => &self.ratio_prov,
        };
        let mut out: Vec<Provenance> = ids.iter().map(|&i| log[i]).collect();
        out.sort();
        out.dedup();
        Some(out)
    }

    /// `d(second) - d(first)` when the angle table determines it.
    pub fn angle_value(&self, first: usize, second: usize) -> Option<Q> {
        if first == second {
            return Some(Q::zero());
        }
        let terms = ZTerms::from([(first as Sym, -1), (second as Sym, 1)]);
        self.angle.reduce(&terms).map(|r| r.value)
    }

    /// `|ab| / |cd|` when the ratio table determines it.
    pub fn ratio_value(&self, a: PointId, b: PointId, c: PointId, d: PointId) -> Option<Q> {
        let s1 = self.lookup_seg(a, b)?;
        let s2 = self.lookup_seg(c, d)?;
        let mut t = Terms::from([(s1, R::one())]);
        *t.entry(s2).or_insert_with(R::zero) -= R::one();
        t.retain(|_, v| !v.is_zero());
        self.constant_part(&t)
    }

    /// `|ab|` when the ratio table determines it.
    pub fn length_of(&self, a: PointId, b: PointId) -> Option<Q> {
        let s = self.lookup_seg(a, b)?;
        self.constant_part(&Terms::from([(s, R::one())]))
    }

    fn constant_part(&self, t: &Terms) -> Option<Q> {
        let red = self.ratio.reduce(t);
        if red.residual.keys().any(|k| *k < LOGCONST_BASE) {
            return None;
        }
        prime_product(&red.residual)
    }

    /// Every determined direction difference among `lines` (node ids), each pair once.
    pub fn angle_relations(&self, lines: &[usize]) -> Vec<Derived> {
        let known: std::collections::BTreeSet<Sym> = self.angle.symbols().into_iter().collect();
        let mut ls: Vec<usize> = lines.iter().copied().filter(|l| known.contains(&(*l as Sym))).collect();
        ls.sort();
        ls.dedup();
        let mut out = Vec::new();
        for (i, &l1) in ls.iter().enumerate() {
            for &l2 in &ls[i + 1..] {
                let terms = ZTerms::from([(l1 as Sym, -1), (l2 as Sym, 1)]);
                if let Some(r) = self.angle.reduce(&terms) {
                    out.push(Derived::Angle { first: l1, second: l2, constant: r.value });
                }
            }
        }
        out
    }

    /// Every determined length and length ratio between segments with known symbols.
    pub fn ratio_relations(&self) -> Vec<Derived> {
        let mut groups: BTreeMap<Vec<(Sym, R)>, Vec<(Sym, Terms)>> = BTreeMap::new();
        for s in 0..self.seg_pts.len() as Sym {
            let red = self.ratio.reduce(&Terms::from([(s, R::one())]));
            let (consts, free): (Terms, Terms) = red.residual.into_iter().partition(|(k, _)| *k >= LOGCONST_BASE);
            groups.entry(free.into_iter().collect()).or_default().push((s, consts));
        }
        let mut out = Vec::new();
        for (free, members) in groups {
            if free.is_empty() {
                for (s, consts) in &members {
                    if let Some(l) = prime_product(consts) {
                        out.push(Derived::Length { seg: self.seg_pts[*s as usize], length: l });
                    }
                }
            }
            for (i, (s1, c1)) in members.iter().enumerate() {
                for (s2, c2) in &members[i + 1..] {
                    let mut diff = c1.clone();
                    for (k, v) in c2 {
                        let e = diff.entry(*k).or_insert_with(R::zero);
                        *e -= v;
                        if e.is_zero() {
                            diff.remove(k);
                        }
                    }
                    if let Some(r) = prime_product(&diff) {
                        out.push(Derived::Ratio { first: self.seg_pts[*s1 as usize], second: self.seg_pts[*s2 as usize], ratio: r });
                    }
                }
            }
        }
        out
    }

    /// Text dump of both tables' equation logs.
    pub fn dump(&self) -> String {
        let mut s = String::from("angle table (units of pi, mod 1)\n");
        for (i, (t, c)) in self.angle.log().iter().enumerate() {
            let lhs: Vec<String> = t.iter().map(|(k, v)| format!("{v:+}*d{k}")).collect();
            s.push_str(&format!("  a{i}: {} = {c}\n", lhs.join(" ")));
        }
        s.push_str("ratio table (log lengths)\n");
        for (i, (t, _)) in self.ratio.log().iter().enumerate() {
            let lhs: Vec<String> = t
                .iter()
                .map(|(k, v)| {
                    if *k >= LOGCONST_BASE {
                        format!("{v:+}*log{}", k - LOGCONST_BASE)
                    } else {
                        let (a, b) = self.seg_pts[*k as usize];
                        format!("{v:+}*l{}_{}", a.0, b.0)
                    }
                })
                .collect();
            s.push_str(&format!("  r{i}: {} = 0\n", lhs.join(" ")));
        }
        s
    }
}

/// `Π p^e` when the residual holds only prime logs with integer exponents.
fn prime_product(consts: &Terms) -> Option<Q> {
    let mut num: i64 = 1;
    let mut den: i64 = 1;
    for (k, e) in consts {
        if !e.is_integer() {
            return None;
        }
        let p = (k - LOGCONST_BASE) as i64;
        let e = e.to_integer();
        let pow = p.checked_pow(u32::try_from(e.abs()).ok()?)?;
        if e > 0 {
            num = num.checked_mul(pow)?;
        } else {
            den = den.checked_mul(pow)?;
        }
    }
    Some(Q::new(num, den))
}

/// Statement for a derived relation, using each line's defining pair.
pub fn derived_statement(d: &Derived, line_def: impl Fn(usize) -> (PointId, PointId)) -> Option<Statement> {
    match *d {
        Derived::Angle { first, second, constant } => {
            let (a, b) = line_def(first);
            let (c, e) = line_def(second);
            let args = [a, b, c, e];
            if constant.is_zero() {
                Some(Statement::make(PredicateKind::Para, &args))
            } else if constant == Q::new(1, 2) {
                Some(Statement::make(PredicateKind::Perp, &args))
            } else {
                Statement::new(PredicateKind::Aconst, &args, Some(Constant::angle(constant))).ok()
            }
        }
        Derived::Ratio { first, second, ratio } => {
            let args = [first.0, first.1, second.0, second.1];
            if ratio.is_one() {
                Some(Statement::make(PredicateKind::Cong, &args))
            } else {
                Statement::new(PredicateKind::Rconst, &args, Constant::ratio(ratio).ok()).ok()
            }
        }
        Derived::Length { seg, length } => {
            Statement::new(PredicateKind::Lconst, &[seg.0, seg.1], Constant::length(length).ok()).ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: u16) -> PointId {
        PointId(i)
    }

    /// Every pair of points gets its own line id.
    fn lines() -> impl FnMut(PointId, PointId) -> usize {
        |a: PointId, b: PointId| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            a.index() * 100 + b.index()
        }
    }

    fn stmt(kind: PredicateKind, args: &[u16], c: Option<&str>) -> Statement {
        let args: Vec<PointId> = args.iter().map(|&i| p(i)).collect();
        let constant = c.map(|t| Constant::parse(kind.constant_slot(), t).unwrap());
        Statement::new(kind, &args, constant).unwrap()
    }

    fn compile(s: &Statement) -> Vec<LinearEquation> {
        compile_statement(s, &mut lines()).unwrap()
    }

    fn eq(table: TableKind, terms: &[(Symbol, i64)], c: Q) -> LinearEquation {
        LinearEquation { table, terms: terms.iter().map(|&(s, k)| (s, Q::from_integer(k))).collect(), constant: c }
    }

    #[test]
    fn perp_compiles_with_half_turn() {
        let e = compile(&stmt(PredicateKind::Perp, &[0, 1, 2, 3], None));
        let d = |a: usize, b: usize| Symbol::Direction(a * 100 + b);
        assert_eq!(e, vec![eq(TableKind::Angle, &[(d(2, 3), 1), (d(0, 1), -1)], Q::new(1, 2))]);
    }

    fn dir(s: &Statement, i: usize) -> Symbol {
        let a = &s.args;
        let (x, y) = if a[i] <= a[i + 1] { (a[i], a[i + 1]) } else { (a[i + 1], a[i]) };
        Symbol::Direction(x.index() * 100 + y.index())
    }

    fn len(s: &Statement, i: usize) -> Symbol {
        seg(s.args[i], s.args[i + 1])
    }

    #[test]
    fn cong_compiles_to_log_difference() {
        let s = stmt(PredicateKind::Cong, &[0, 1, 2, 3], None);
        assert_eq!(compile(&s), vec![eq(TableKind::Ratio, &[(len(&s, 0), 1), (len(&s, 2), -1)], Q::zero())]);
    }

    #[test]
    fn para_compiles_to_equal_directions() {
        let s = stmt(PredicateKind::Para, &[0, 1, 2, 3], None);
        assert_eq!(compile(&s), vec![eq(TableKind::Angle, &[(dir(&s, 0), 1), (dir(&s, 2), -1)], Q::zero())]);
    }

    #[test]
    fn eqangle_compiles_to_four_directions() {
        let s = stmt(PredicateKind::Eqangle, &[0, 1, 2, 3, 4, 5, 6, 7], None);
        let want = eq(TableKind::Angle, &[(dir(&s, 2), 1), (dir(&s, 0), -1), (dir(&s, 6), -1), (dir(&s, 4), 1)], Q::zero());
        assert_eq!(compile(&s), vec![want]);
    }

    #[test]
    fn eqratio_compiles_to_four_lengths() {
        let s = stmt(PredicateKind::Eqratio, &[0, 1, 2, 3, 4, 5, 6, 7], None);
        let want = eq(TableKind::Ratio, &[(len(&s, 0), 1), (len(&s, 2), -1), (len(&s, 4), -1), (len(&s, 6), 1)], Q::zero());
        assert_eq!(compile(&s), vec![want]);
    }

    #[test]
    fn aconst_constant_is_reduced_mod_pi() {
        let s = stmt(PredicateKind::Aconst, &[0, 1, 2, 3], Some("120o"));
        let c = s.constant.unwrap().value();
        assert_eq!(compile(&s), vec![eq(TableKind::Angle, &[(dir(&s, 2), 1), (dir(&s, 0), -1)], c)]);
        assert!(c >= Q::zero() && c < Q::one());
        // 300° and 480° are the same direction change as 120° modulo π
        for t in ["300o", "480o", "-60o"] {
            let other = stmt(PredicateKind::Aconst, &[0, 1, 2, 3], Some(t));
            assert_eq!(compile(&other), compile(&s), "{t}");
        }
        let raw = Statement { kind: PredicateKind::Aconst, args: s.args.clone(), constant: Some(Constant::Angle(c + Q::from_integer(2))) };
        assert_eq!(compile(&raw)[0].constant, c);
    }

    #[test]
    fn trivial_cong_is_dropped() {
        let s = Statement { kind: PredicateKind::Cong, args: [p(0), p(1), p(0), p(1)].into_iter().collect(), constant: None };
        assert!(compile(&s).is_empty());
    }

    #[test]
    fn lconst_uses_prime_logs() {
        let e = compile(&stmt(PredicateKind::Lconst, &[0, 1], Some("12")));
        assert_eq!(
            e,
            vec![LinearEquation {
                table: TableKind::Ratio,
                terms: BTreeMap::from([
                    (Symbol::LogLength(p(0), p(1)), Q::from_integer(1)),
                    (Symbol::LogConst(2), Q::from_integer(-2)),
                    (Symbol::LogConst(3), Q::from_integer(-1)),
                ]),
                constant: Q::zero(),
            }]
        );
    }

    #[test]
    fn para_and_perp_give_perp() {
        let mut ar = ArEngine::new();
        let mut l = lines();
        for (i, s) in [stmt(PredicateKind::Para, &[0, 1, 2, 3], None), stmt(PredicateKind::Perp, &[0, 1, 4, 5], None)].iter().enumerate() {
            for e in compile_statement(s, &mut l).unwrap() {
                ar.insert(&e, Provenance::Stmt(StmtId(i as u32))).unwrap();
            }
        }
        let goal = &compile(&stmt(PredicateKind::Perp, &[2, 3, 4, 5], None))[0];
        assert!(ar.implies(goal));
        assert_eq!(ar.why(goal).unwrap(), vec![Provenance::Stmt(StmtId(0)), Provenance::Stmt(StmtId(1))]);
        let rel = ar.angle_relations(&[1, 203, 405]);
        assert!(rel.contains(&Derived::Angle { first: 203, second: 405, constant: Q::new(1, 2) }));
    }

    #[test]
    fn cong_and_lconst_give_lconst() {
        let mut ar = ArEngine::new();
        let mut l = lines();
        for (i, s) in [stmt(PredicateKind::Cong, &[0, 1, 2, 3], None), stmt(PredicateKind::Lconst, &[0, 1], Some("2"))].iter().enumerate() {
            for e in compile_statement(s, &mut l).unwrap() {
                ar.insert(&e, Provenance::Stmt(StmtId(i as u32))).unwrap();
            }
        }
        let goal = &compile(&stmt(PredicateKind::Lconst, &[2, 3], Some("2")))[0];
        assert!(ar.implies(goal));
        let rel = ar.ratio_relations();
        assert!(rel.contains(&Derived::Length { seg: (p(2), p(3)), length: Q::from_integer(2) }));
        assert!(rel.contains(&Derived::Ratio { first: (p(0), p(1)), second: (p(2), p(3)), ratio: Q::one() }));
    }

    #[test]
    fn midpoint_ratio_chain() {
        let mut ar = ArEngine::new();
        let mut l = lines();
        let s = stmt(PredicateKind::Rconst, &[0, 1, 1, 2], Some("1/2"));
        for e in compile_statement(&s, &mut l).unwrap() {
            ar.insert(&e, Provenance::Stmt(StmtId(0))).unwrap();
        }
        let s = stmt(PredicateKind::Lconst, &[1, 2], Some("6"));
        for e in compile_statement(&s, &mut l).unwrap() {
            ar.insert(&e, Provenance::Stmt(StmtId(1))).unwrap();
        }
        let rel = ar.ratio_relations();
        assert!(rel.contains(&Derived::Length { seg: (p(0), p(1)), length: Q::from_integer(3) }));
    }

    #[test]
    fn contradiction_is_reported() {
        let mut ar = ArEngine::new();
        let mut l = lines();
        let s = stmt(PredicateKind::Para, &[0, 1, 2, 3], None);
        ar.insert(&compile_statement(&s, &mut l).unwrap()[0], Provenance::Stmt(StmtId(0))).unwrap();
        let s = stmt(PredicateKind::Perp, &[0, 1, 2, 3], None);
        let r = ar.insert(&compile_statement(&s, &mut l).unwrap()[0], Provenance::Stmt(StmtId(1)));
        assert!(matches!(r, Err(ArError::InconsistentTable(_))));
    }
}
