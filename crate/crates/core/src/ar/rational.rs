//! Sparse linear system over the rationals kept in reduced row-echelon form.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type R = Ratio<i128>;
pub type Sym = u32;

/// Sparse linear form.
pub type Terms = BTreeMap<Sym, R>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert {
    /// Added a pivot.
    Independent,
    /// Already implied by earlier equations.
    Redundant,
    /// Contradicts the table; carries the equations producing `0 = c`.
    Inconsistent(Vec<usize>),
}

#[derive(Debug, Clone)]
struct Row {
    terms: Terms,
    constant: R,
    combo: BTreeMap<usize, R>,
}

/// Result of reducing a linear form against the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduced {
    /// Part of the form that the table cannot eliminate.
    pub residual: Terms,
    /// Value of the eliminated part.
    pub value: R,
    /// Coefficients of logged equations used.
    pub combo: BTreeMap<usize, R>,
}

/// `Σ terms = constant` equations with every row tracked as a combination of the log.
#[derive(Debug, Clone, Default)]
pub struct QTable {
    rows: BTreeMap<Sym, Row>,
    log: Vec<(Terms, R)>,
}

fn axpy(acc: &mut Terms, k: R, x: &Terms) {
    for (s, c) in x {
        let e = acc.entry(*s).or_insert_with(R::zero);
        *e += k * c;
        if e.is_zero() {
            acc.remove(s);
        }
    }
}

fn axpy_combo(acc: &mut BTreeMap<usize, R>, k: R, x: &BTreeMap<usize, R>) {
    for (s, c) in x {
        let e = acc.entry(*s).or_insert_with(R::zero);
        *e += k * c;
        if e.is_zero() {
            acc.remove(s);
        }
    }
}

impl QTable {
    pub fn new() -> QTable {
        QTable::default()
    }

    pub fn log(&self) -> &[(Terms, R)] {
        &self.log
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, s: Sym) -> bool {
        self.rows.contains_key(&s)
    }

    /// Every symbol appearing in the table.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self.log.iter().flat_map(|(t, _)| t.keys().copied()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Adds `terms = constant`. Inconsistent equations are not logged.
    pub fn add(&mut self, terms: &Terms, constant: R) -> Insert {
        let id = self.log.len();
        let mut row = Row { terms: terms.clone(), constant, combo: BTreeMap::from([(id, R::one())]) };
        row.terms.retain(|_, c| !c.is_zero());
        let pivots: Vec<Sym> = row.terms.keys().copied().filter(|s| self.rows.contains_key(s)).collect();
        for p in pivots {
            let k = match row.terms.get(&p) {
                Some(k) => *k,
                None => continue,
            };
            let r = &self.rows[&p];
            axpy(&mut row.terms, -k, &r.terms);
            row.constant -= k * r.constant;
            axpy_combo(&mut row.combo, -k, &r.combo);
        }
        let Some((&pivot, &lead)) = row.terms.iter().next() else {
            if row.constant.is_zero() {
                self.log.push((terms.clone(), constant));
                return Insert::Redundant;
            }
            let mut culprits: Vec<usize> = row.combo.keys().copied().filter(|&i| i != id).collect();
            culprits.push(id);
            return Insert::Inconsistent(culprits);
        };
        self.log.push((terms.clone(), constant));
        let inv = lead.recip();
        for c in row.terms.values_mut() {
            *c *= inv;
        }
        row.constant *= inv;
        for c in row.combo.values_mut() {
            *c *= inv;
        }
        for other in self.rows.values_mut() {
            if let Some(k) = other.terms.get(&pivot).copied() {
                axpy(&mut other.terms, -k, &row.terms);
                other.constant -= k * row.constant;
                axpy_combo(&mut other.combo, -k, &row.combo);
            }
        }
        self.rows.insert(pivot, row);
        Insert::Independent
    }

    /// Eliminates pivots from `terms`: `terms·x = residual·x + value` on every solution.
    pub fn reduce(&self, terms: &Terms) -> Reduced {
        let mut acc = terms.clone();
        acc.retain(|_, c| !c.is_zero());
        let mut value = R::zero();
        let mut combo = BTreeMap::new();
        let pivots: Vec<Sym> = acc.keys().copied().filter(|s| self.rows.contains_key(s)).collect();
        for p in pivots {
            let Some(k) = acc.get(&p).copied() else { continue };
            let r = &self.rows[&p];
            axpy(&mut acc, -k, &r.terms);
            value += k * r.constant;
            axpy_combo(&mut combo, k, &r.combo);
        }
        Reduced { residual: acc, value, combo }
    }

    /// Logged equations combining into `terms = constant`, if implied.
    pub fn implies(&self, terms: &Terms, constant: R) -> Option<Vec<usize>> {
        let red = self.reduce(terms);
        (red.residual.is_empty() && red.value == constant).then(|| red.combo.keys().copied().collect())
    }

    /// `x_s` as an affine form over free symbols: (coefficients, constant).
    pub fn expression(&self, s: Sym) -> (Terms, R) {
        match self.rows.get(&s) {
            Some(r) => {
                let mut t: Terms = r.terms.iter().filter(|(k, _)| **k != s).map(|(k, c)| (*k, -*c)).collect();
                t.retain(|_, c| !c.is_zero());
                (t, r.constant)
            }
            None => (BTreeMap::from([(s, R::one())]), R::zero()),
        }
    }

    /// Basis, in reduced echelon form over `(u_i, u_j, v)`, of all implied
    /// equations `u_i x_i + u_j x_j = v`.
    pub fn pair_relations(&self, i: Sym, j: Sym) -> Vec<[R; 3]> {
        let (ai, bi) = self.expression(i);
        let (aj, bj) = self.expression(j);
        let mut basis: Vec<[R; 3]> = Vec::new();
        if ai.is_empty() && aj.is_empty() {
            basis.push([R::one(), R::zero(), bi]);
            basis.push([R::zero(), R::one(), bj]);
        } else if ai.is_empty() {
            basis.push([R::one(), R::zero(), bi]);
        } else if aj.is_empty() {
            basis.push([R::zero(), R::one(), bj]);
        } else {
            // u_i a_i + u_j a_j = 0 has a nonzero solution iff a_j is a multiple of a_i
            let (&k, &ci) = ai.iter().next().expect("non-empty");
            let s = aj.get(&k).copied().unwrap_or_else(R::zero) / ci;
            let proportional = ai.len() == aj.len() && ai.iter().all(|(sym, c)| aj.get(sym).map_or(false, |d| *d == s * c));
            if proportional && !s.is_zero() {
                // s·(a_i) = a_j  ⇒  s x_i - x_j = s b_i - b_j
                let v = s * bi - bj;
                basis.push([R::one(), -s.recip(), v / s]);
            }
        }
        basis
    }

    /// Value of `x_s` when the table determines it.
    pub fn value_of(&self, s: Sym) -> Option<R> {
        let (t, c) = self.expression(s);
        t.is_empty().then_some(c)
    }
}

/// Greedy deletion over the support of a derivation, re-solving each time.
/// `None` when the target is not implied by `log`.
pub fn minimize(log: &[(Terms, R)], terms: &Terms, constant: R) -> Option<Vec<usize>> {
    let solve = |ids: &[usize]| {
        let mut t = QTable::new();
        for &i in ids {
            t.add(&log[i].0, log[i].1);
        }
        t.implies(terms, constant).map(|combo| combo.into_iter().map(|k| ids[k]).collect::<Vec<usize>>())
    };
    let all: Vec<usize> = (0..log.len()).collect();
    let mut keep = solve(&all)?;
    keep.sort();
    for i in (0..keep.len()).rev() {
        let mut trial = keep.clone();
        let removed = trial.remove(i);
        if solve(&trial).is_some() {
            keep = trial;
        } else {
            debug_assert!(keep.contains(&removed));
        }
    }
    Some(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> R {
        R::from_integer(n)
    }

    fn t(pairs: &[(Sym, i128)]) -> Terms {
        pairs.iter().map(|&(s, c)| (s, q(c))).collect()
    }

    #[test]
    fn substitution_derives_value() {
        let mut tab = QTable::new();
        assert_eq!(tab.add(&t(&[(0, 1), (1, -1)]), q(0)), Insert::Independent);
        assert_eq!(tab.add(&t(&[(0, 1)]), q(2)), Insert::Independent);
        assert_eq!(tab.value_of(1), Some(q(2)));
        assert_eq!(tab.implies(&t(&[(1, 1)]), q(2)), Some(vec![0, 1]));
        assert_eq!(tab.add(&t(&[(1, 1)]), q(2)), Insert::Redundant);
        assert!(matches!(tab.add(&t(&[(1, 1)]), q(3)), Insert::Inconsistent(_)));
    }

    #[test]
    fn empty_equation_is_redundant() {
        let mut tab = QTable::new();
        assert_eq!(tab.add(&Terms::new(), q(0)), Insert::Redundant);
    }

    #[test]
    fn pair_relation_of_proportional_symbols() {
        let mut tab = QTable::new();
        tab.add(&t(&[(0, 2), (1, -1), (2, 1)]), q(1));
        tab.add(&t(&[(0, 1), (2, 1)]), q(0));
        // x0 = -x2, x1 = 2x0 + x2 - 1 = -x2 - 1  ⇒  x0 - x1 = 1
        let rel = tab.pair_relations(0, 1);
        assert_eq!(rel, vec![[q(1), q(-1), q(1)]]);
        assert!(tab.pair_relations(0, 3).is_empty());
    }

    #[test]
    fn minimize_drops_irrelevant() {
        let log = vec![(t(&[(0, 1), (1, -1)]), q(0)), (t(&[(5, 1)]), q(9)), (t(&[(1, 1), (2, -1)]), q(0))];
        assert_eq!(minimize(&log, &t(&[(0, 1), (2, -1)]), q(0)), Some(vec![0, 2]));
        assert_eq!(minimize(&log, &t(&[(5, 1)]), q(9)), Some(vec![1]));
        assert_eq!(minimize(&log, &t(&[(3, 1)]), q(0)), None);
    }
}
