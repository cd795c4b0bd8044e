//! Integer equations with constants taken mod 1, kept as an echelon basis of their lattice.
//!
//! Angles live in R/πZ, where halving is not allowed: from `2x = 0` nothing
//! follows about `x`. Only integer combinations of equations are sound, so the
//! table stores a Hermite-style basis instead of a rational row echelon form.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::model::constant::reduce_mod_one;
use crate::model::Q;

use super::rational::Sym;
use super::rational::Insert;

pub type ZTerms = BTreeMap<Sym, i64>;

#[derive(Debug, Clone)]
struct Row {
    terms: ZTerms,
    constant: Q,
    combo: BTreeMap<usize, i64>,
}

impl Row {
    fn lead(&self) -> Option<(Sym, i64)> {
        self.terms.iter().next().map(|(s, c)| (*s, *c))
    }

    fn scaled_add(&self, k: i64, other: &Row, l: i64) -> Row {
        let mut terms = ZTerms::new();
        for (s, c) in &self.terms {
            *terms.entry(*s).or_insert(0) += k * c;
        }
        for (s, c) in &other.terms {
            *terms.entry(*s).or_insert(0) += l * c;
        }
        terms.retain(|_, c| *c != 0);
        let mut combo = BTreeMap::new();
        for (s, c) in &self.combo {
            *combo.entry(*s).or_insert(0) += k * c;
        }
        for (s, c) in &other.combo {
            *combo.entry(*s).or_insert(0) += l * c;
        }
        combo.retain(|_, c| *c != 0);
        let constant = reduce_mod_one(self.constant * Q::from_integer(k) + other.constant * Q::from_integer(l));
        Row { terms, constant, combo }
    }
}

/// `Σ terms ≡ constant (mod 1)` equations over integer coefficients.
#[derive(Debug, Clone, Default)]
pub struct ZTable {
    rows: BTreeMap<Sym, Row>,
    log: Vec<(ZTerms, Q)>,
}

/// Outcome of reducing a form: its value when it lies in the lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZReduced {
    pub value: Q,
    pub combo: BTreeMap<usize, i64>,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

impl ZTable {
    pub fn new() -> ZTable {
        ZTable::default()
    }

    pub fn log(&self) -> &[(ZTerms, Q)] {
        &self.log
    }

    pub fn symbols(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self.log.iter().flat_map(|(t, _)| t.keys().copied()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&mut self, terms: &ZTerms, constant: Q) -> Insert {
        let id = self.log.len();
        let mut row = Row {
            terms: terms.iter().filter(|(_, c)| **c != 0).map(|(s, c)| (*s, *c)).collect(),
            constant: reduce_mod_one(constant),
            combo: BTreeMap::from([(id, 1)]),
        };
        let mut changed = false;
        let mut staged = self.rows.clone();
        loop {
            let Some((p, b)) = row.lead() else { break };
            let Some(base) = staged.get(&p) else {
                if b < 0 {
                    row = row.scaled_add(-1, &row.clone(), 0);
                }
                staged.insert(p, row.clone());
                changed = true;
                row.terms.clear();
                row.constant = Q::zero();
                break;
            };
            let a = base.terms[&p];
            if b % a == 0 {
                row = row.scaled_add(1, base, -(b / a));
                continue;
            }
            let (g, s, t) = ext_gcd(a, b);
            let mut pivot = base.scaled_add(s, &row, t);
            if pivot.terms[&p] < 0 {
                pivot = pivot.scaled_add(-1, &pivot.clone(), 0);
            }
            let rest = base.scaled_add(b / g, &row, -(a / g));
            staged.insert(p, pivot);
            changed = true;
            row = rest;
        }
        if !row.constant.is_zero() {
            let mut ids: Vec<usize> = row.combo.keys().copied().collect();
            ids.sort();
            return Insert::Inconsistent(ids);
        }
        self.log.push((terms.clone(), reduce_mod_one(constant)));
        if changed {
            self.rows = staged;
            Insert::Independent
        } else {
            Insert::Redundant
        }
    }

    /// Value of the form when it is an integer combination of the table.
    pub fn reduce(&self, terms: &ZTerms) -> Option<ZReduced> {
        let mut row = Row {
            terms: terms.iter().filter(|(_, c)| **c != 0).map(|(s, c)| (*s, *c)).collect(),
            constant: Q::zero(),
            combo: BTreeMap::new(),
        };
        while let Some((p, b)) = row.lead() {
            let base = self.rows.get(&p)?;
            let a = base.terms[&p];
            if b % a != 0 {
                return None;
            }
            row = row.scaled_add(1, base, -(b / a));
        }
        // row = terms - Σ k·rows has no terms, so terms ≡ Σ k·constants
        let value = reduce_mod_one(-row.constant);
        let combo = row.combo.into_iter().map(|(k, c)| (k, -c)).collect();
        Some(ZReduced { value, combo })
    }

    pub fn implies(&self, terms: &ZTerms, constant: Q) -> Option<Vec<usize>> {
        let r = self.reduce(terms)?;
        (r.value == reduce_mod_one(constant)).then(|| r.combo.keys().copied().collect())
    }
}

pub fn minimize(log: &[(ZTerms, Q)], terms: &ZTerms, constant: Q) -> Option<Vec<usize>> {
    let solve = |ids: &[usize]| {
        let mut t = ZTable::new();
        for &i in ids {
            t.add(&log[i].0, log[i].1);
        }
        t.implies(terms, constant)
            .map(|combo| combo.into_iter().map(|k| ids[k]).collect::<Vec<usize>>())
    };
    let all: Vec<usize> = (0..log.len()).collect();
    let mut keep = solve(&all)?;
    keep.sort();
    for i in (0..keep.len()).rev() {
        let mut trial = keep.clone();
        trial.remove(i);
        if solve(&trial).is_some() {
            keep = trial;
        }
    }
    Some(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(pairs: &[(Sym, i64)]) -> ZTerms {
        pairs.iter().copied().collect()
    }

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn halving_is_not_derivable() {
        let mut t = ZTable::new();
        t.add(&z(&[(0, 2)]), q(0, 1));
        assert_eq!(t.reduce(&z(&[(0, 1)])), None);
        assert_eq!(t.implies(&z(&[(0, 4)]), q(0, 1)), Some(vec![0]));
    }

    #[test]
    fn perpendiculars_compose_to_parallel() {
        let mut t = ZTable::new();
        t.add(&z(&[(0, -1), (1, 1)]), q(1, 2));
        t.add(&z(&[(1, -1), (2, 1)]), q(1, 2));
        let r = t.reduce(&z(&[(0, -1), (2, 1)])).unwrap();
        assert_eq!(r.value, q(0, 1));
        assert_eq!(r.combo.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn gcd_step_keeps_lattice() {
        let mut t = ZTable::new();
        t.add(&z(&[(0, 2), (1, 1)]), q(1, 3));
        t.add(&z(&[(0, 3), (1, 1)]), q(1, 2));
        // difference: x0 ≡ 1/6
        assert_eq!(t.reduce(&z(&[(0, 1)])).unwrap().value, q(1, 6));
        assert_eq!(t.reduce(&z(&[(1, 1)])).unwrap().value, q(0, 1));
        assert!(matches!(t.add(&z(&[(0, 1)]), q(1, 5)), Insert::Inconsistent(_)));
        assert_eq!(t.add(&z(&[(0, 1)]), q(7, 6)), Insert::Redundant);
    }

    #[test]
    fn minimize_keeps_needed_angles() {
        let log = vec![
            (z(&[(0, -1), (1, 1)]), q(1, 2)),
            (z(&[(3, 1)]), q(1, 4)),
            (z(&[(1, -1), (2, 1)]), q(1, 2)),
        ];
        assert_eq!(minimize(&log, &z(&[(0, -1), (2, 1)]), q(0, 1)), Some(vec![0, 2]));
    }
}
