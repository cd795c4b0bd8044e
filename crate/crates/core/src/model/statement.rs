use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::constant::{Constant, Q};
use super::predicate::{ConstantSlot, PredicateKind};
use super::{ModelError, PointId};

pub type Args = SmallVec<[PointId; 8]>;

/// A predicate applied to points, always held in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Statement {
    pub kind: PredicateKind,
    pub args: Args,
    pub constant: Option<Constant>,
}

impl Statement {
    pub fn new(
        kind: PredicateKind,
        args: &[PointId],
        constant: Option<Constant>,
    ) -> Result<Statement, ModelError> {
        let (args, constant) = canonicalize(kind, args, constant)?;
        Ok(Statement { kind, args: Args::from_vec(args), constant })
    }

    /// Builds a statement from arguments already known to be valid for `kind`.
    pub fn make(kind: PredicateKind, args: &[PointId]) -> Statement {
        Statement::new(kind, args, None).expect("arity checked by caller")
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> + '_ {
        self.args.iter().copied()
    }

    /// True when the arguments cannot denote a meaningful instance: a segment or line
    /// with equal endpoints, or a point set with too few distinct members.
    pub fn is_degenerate(&self) -> bool {
        is_degenerate(self.kind, &self.args)
    }

    /// True for statements that hold by their shape alone (`para a b a b`, `cong a b a b`).
    pub fn is_trivial(&self) -> bool {
        use PredicateKind::*;
        let a = &self.args;
        match self.kind {
            Para | Cong => a[0..2] == a[2..4],
            Eqangle | Eqratio => a[0..4] == a[4..8] || (a[0..2] == a[2..4] && a[4..6] == a[6..8]) || (a[0..2] == a[4..6] && a[2..4] == a[6..8]),
            Simtri | Contri => a[0..3] == a[3..6],
            Rconst => a[0..2] == a[2..4] && self.constant == Some(Constant::Ratio(Q::one())),
            Aconst => a[0..2] == a[2..4] && self.constant == Some(Constant::Angle(Q::zero())),
            _ => false,
        }
    }
}

fn is_degenerate(kind: PredicateKind, a: &[PointId]) -> bool {
    use PredicateKind::*;
    let pair_bad = |i: usize| a[i] == a[i + 1];
    let distinct = |xs: &[PointId]| {
        let mut v: Vec<_> = xs.to_vec();
        v.sort();
        v.dedup();
        v.len()
    };
    match kind {
        Coll | Ncoll => distinct(a) < 3,
        Cyclic => distinct(a) < 4,
        Para | Npara | Perp | Cong | Aconst | Rconst | Acompute | Rcompute => pair_bad(0) || pair_bad(2),
        Lconst | Lcompute => pair_bad(0),
        Eqangle | Eqratio => (0..4).any(|k| pair_bad(2 * k)),
        Midp => a[1] == a[2] || a[0] == a[1] || a[0] == a[2],
        Circle => distinct(&a[1..]) < 3 || a[1..].contains(&a[0]),
        Eqratio3 => a[4] == a[0] || a[4] == a[2] || a[5] == a[1] || a[5] == a[3] || a[0] == a[2] || a[1] == a[3],
        Sameside | Nsameside => a[0] == a[1] || a[0] == a[2] || a[3] == a[4] || a[3] == a[5],
        Sameclock | Simtri | Simtrir | Contri | Contrir => distinct(&a[0..3]) < 3 || distinct(&a[3..6]) < 3,
        PythagoreanPremises | PythagoreanConclusions => distinct(a) < 3,
    }
}

const D4: [[usize; 4]; 8] = [
    [0, 1, 2, 3],
    [2, 3, 0, 1],
    [1, 0, 3, 2],
    [3, 2, 1, 0],
    [0, 2, 1, 3],
    [1, 3, 0, 2],
    [2, 0, 3, 1],
    [3, 1, 2, 0],
];

const S3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn sorted_pair<P: Ord + Copy>(a: P, b: P) -> [P; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Returns the least representative of `raw_args` under the symmetry group of `kind`.
///
/// | kind | group |
/// |---|---|
/// | coll, ncoll, cyclic | any permutation (stored as the sorted set) |
/// | para, npara, perp, cong | swap within each pair, swap the pairs |
/// | midp | swap the two endpoints |
/// | circle | any permutation of the three circle points |
/// | eqangle, eqratio | swap within each pair, and the eight-element group on the four pairs |
/// | aconst | swap within each pair; swapping the lines negates the angle |
/// | rconst | swap within each pair; swapping the segments inverts the ratio |
/// | lconst, lcompute | swap the endpoints |
/// | acompute, rcompute | swap within each pair |
/// | sameside, nsameside | swap positions 2,3 and 5,6, swap the triples |
/// | sameclock, simtri*, contri* | the same permutation on both triangles, swap the triangles |
/// | eqratio3 | the four-element group fixing the proportion |
/// | Pythagorean* | swap the two legs |
///
/// For `aconst` and `rconst` the order compares the constant first, then the points.
pub fn canonicalize<P: Ord + Copy>(
    kind: PredicateKind,
    raw_args: &[P],
    constant: Option<Constant>,
) -> Result<(Vec<P>, Option<Constant>), ModelError> {
    use PredicateKind::*;
    if !kind.arity().accepts(raw_args.len()) {
        return Err(ModelError::ArityMismatch { kind, got: raw_args.len() });
    }
    match (kind.constant_slot(), constant) {
        (ConstantSlot::None, None) => {}
        (slot, Some(c)) if slot == c.slot() => {}
        _ => return Err(ModelError::ConstantMismatch(kind)),
    }
    let a = raw_args;
    let args: Vec<P> = match kind {
        Coll | Ncoll | Cyclic => {
            let mut v = a.to_vec();
            v.sort();
            v.dedup();
            v
        }
        Para | Npara | Perp | Cong => {
            let p = sorted_pair(a[0], a[1]);
            let q = sorted_pair(a[2], a[3]);
            if p <= q {
                vec![p[0], p[1], q[0], q[1]]
            } else {
                vec![q[0], q[1], p[0], p[1]]
            }
        }
        Midp => {
            let p = sorted_pair(a[1], a[2]);
            vec![a[0], p[0], p[1]]
        }
        Circle => {
            let mut rest = a[1..4].to_vec();
            rest.sort();
            vec![a[0], rest[0], rest[1], rest[2]]
        }
        Eqangle | Eqratio => {
            let pairs: [[P; 2]; 4] = [
                sorted_pair(a[0], a[1]),
                sorted_pair(a[2], a[3]),
                sorted_pair(a[4], a[5]),
                sorted_pair(a[6], a[7]),
            ];
            D4.iter()
                .map(|perm| perm.iter().flat_map(|&i| pairs[i]).collect::<Vec<P>>())
                .min()
                .expect("group is non-empty")
        }
        Aconst => {
            let c = constant.expect("checked above");
            let p = sorted_pair(a[0], a[1]);
            let q = sorted_pair(a[2], a[3]);
            let swapped = match c {
                Constant::Angle(v) => Constant::angle(-v),
                _ => unreachable!(),
            };
            let first = (c, [p[0], p[1], q[0], q[1]]);
            let second = (swapped, [q[0], q[1], p[0], p[1]]);
            let best = if first <= second { first } else { second };
            return Ok((best.1.to_vec(), Some(best.0)));
        }
        Rconst => {
            let c = constant.expect("checked above");
            let p = sorted_pair(a[0], a[1]);
            let q = sorted_pair(a[2], a[3]);
            let swapped = match c {
                Constant::Ratio(v) => Constant::Ratio(v.recip()),
                _ => unreachable!(),
            };
            let first = (c, [p[0], p[1], q[0], q[1]]);
            let second = (swapped, [q[0], q[1], p[0], p[1]]);
            let best = if first <= second { first } else { second };
            return Ok((best.1.to_vec(), Some(best.0)));
        }
        Lconst | Lcompute => sorted_pair(a[0], a[1]).to_vec(),
        Acompute | Rcompute => {
            let p = sorted_pair(a[0], a[1]);
            let q = sorted_pair(a[2], a[3]);
            vec![p[0], p[1], q[0], q[1]]
        }
        Sameside | Nsameside => {
            let t1 = [a[0], a[1].min(a[2]), a[1].max(a[2])];
            let t2 = [a[3], a[4].min(a[5]), a[4].max(a[5])];
            if t1 <= t2 {
                [t1, t2].concat()
            } else {
                [t2, t1].concat()
            }
        }
        Sameclock | Simtri | Simtrir | Contri | Contrir => {
            let mut best: Option<Vec<P>> = None;
            for perm in S3.iter() {
                let t1: Vec<P> = perm.iter().map(|&i| a[i]).collect();
                let t2: Vec<P> = perm.iter().map(|&i| a[3 + i]).collect();
                for cand in [[t1.clone(), t2.clone()].concat(), [t2, t1].concat()] {
                    if best.as_ref().map_or(true, |b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
            best.expect("group is non-empty")
        }
        Eqratio3 => {
            let orbit = [
                [a[0], a[1], a[2], a[3], a[4], a[5]],
                [a[1], a[0], a[3], a[2], a[5], a[4]],
                [a[2], a[3], a[0], a[1], a[4], a[5]],
                [a[3], a[2], a[1], a[0], a[5], a[4]],
            ];
            orbit.iter().min().expect("non-empty").to_vec()
        }
        PythagoreanPremises | PythagoreanConclusions => {
            let p = sorted_pair(a[1], a[2]);
            vec![a[0], p[0], p[1]]
        }
    };
    Ok((args, constant))
}

/// Formats a statement in the problem-file syntax using the supplied point names.
pub struct StatementText<'a, F: Fn(PointId) -> &'a str> {
    pub stmt: &'a Statement,
    pub name: F,
}

impl<'a, F: Fn(PointId) -> &'a str> fmt::Display for StatementText<'a, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.stmt.kind.tag())?;
        for p in self.stmt.points() {
            write!(f, " {}", (self.name)(p))?;
        }
        if let Some(c) = self.stmt.constant {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon(kind: PredicateKind, args: &[char], c: Option<Constant>) -> (String, Option<Constant>) {
        let (v, c) = canonicalize(kind, args, c).unwrap();
        (v.into_iter().collect(), c)
    }

    #[test]
    fn cong_example() {
        assert_eq!(canon(PredicateKind::Cong, &['b', 'a', 'd', 'c'], None).0, "abcd");
    }

    #[test]
    fn cyclic_example() {
        assert_eq!(canon(PredicateKind::Cyclic, &['d', 'b', 'a', 'c'], None).0, "abcd");
    }

    #[test]
    fn rconst_example() {
        let (args, c) = canon(PredicateKind::Rconst, &['m', 'a', 'a', 'b'], Some(Constant::Ratio(Q::new(1, 2))));
        assert_eq!(args, "amab");
        assert_eq!(c, Some(Constant::Ratio(Q::new(1, 2))));
        let (args, c) = canon(PredicateKind::Rconst, &['a', 'b', 'm', 'a'], Some(Constant::Ratio(Q::from_integer(2))));
        assert_eq!(args, "amab");
        assert_eq!(c, Some(Constant::Ratio(Q::new(1, 2))));
    }

    #[test]
    fn aconst_line_swap_negates() {
        let (args, c) = canon(PredicateKind::Aconst, &['c', 'd', 'a', 'b'], Some(Constant::Angle(Q::new(2, 3))));
        assert_eq!(args, "abcd");
        assert_eq!(c, Some(Constant::Angle(Q::new(1, 3))));
    }

    #[test]
    fn arity_and_constant_errors() {
        assert!(matches!(
            canonicalize(PredicateKind::Cong, &['a', 'b', 'c'], None),
            Err(ModelError::ArityMismatch { .. })
        ));
        assert!(matches!(
            canonicalize(PredicateKind::Cong, &['a', 'b', 'c', 'd'], Some(Constant::Length(Q::one()))),
            Err(ModelError::ConstantMismatch(_))
        ));
        assert!(matches!(
            canonicalize(PredicateKind::Lconst, &['a', 'b'], None),
            Err(ModelError::ConstantMismatch(_))
        ));
    }

    #[test]
    fn eqangle_orbit_has_one_representative() {
        let base = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'];
        let want = canon(PredicateKind::Eqangle, &base, None).0;
        for perm in D4 {
            let mut v = Vec::new();
            for (k, &i) in perm.iter().enumerate() {
                let pair = [base[2 * i], base[2 * i + 1]];
                if k % 2 == 0 {
                    v.extend([pair[1], pair[0]]);
                } else {
                    v.extend(pair);
                }
            }
            assert_eq!(canon(PredicateKind::Eqangle, &v, None).0, want);
        }
    }

    #[test]
    fn degeneracy() {
        let s = Statement::make(PredicateKind::Para, &[PointId(0), PointId(0), PointId(1), PointId(2)]);
        assert!(s.is_degenerate());
        let s = Statement::make(PredicateKind::Para, &[PointId(0), PointId(1), PointId(0), PointId(2)]);
        assert!(!s.is_degenerate());
        let s = Statement::make(PredicateKind::Cyclic, &[PointId(0), PointId(1), PointId(1), PointId(2)]);
        assert!(s.is_degenerate());
    }

    #[test]
    fn triviality() {
        let p = |i| PointId(i);
        assert!(Statement::make(PredicateKind::Para, &[p(1), p(0), p(0), p(1)]).is_trivial());
        assert!(Statement::make(PredicateKind::Eqangle, &[p(0), p(1), p(2), p(3), p(0), p(1), p(2), p(3)]).is_trivial());
        assert!(!Statement::make(PredicateKind::Eqangle, &[p(0), p(1), p(2), p(3), p(0), p(1), p(2), p(4)]).is_trivial());
    }
}
