//! Seeded numerical realization of problems.

mod routines;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{check_numerical, PointId, Pt, Statement};
use crate::parse::{ArgValue, Clause, DefinitionSet, ProblemSpec};

pub use routines::{realize, Object, ROUTINES};

/// Redraws allowed before a problem is declared numerically false.
pub const MAX_ATTEMPTS: u32 = 10_000;

/// Points closer than this are treated as the same point.
pub const MIN_SEPARATION: f64 = 1e-9;

/// Candidates of an intersection closer than this to an existing point are dropped.
const COINCIDENCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SketchError {
    #[error("goals are numerically false on every one of {attempts} attempts")]
    GoalNumericallyFalse { attempts: u32 },
    #[error("clause {clause} cannot be realized: {msg}")]
    Unrealizable { clause: usize, msg: String },
    #[error("the objects do not intersect")]
    NoIntersection,
    #[error("unknown definition `{0}`")]
    UnknownDefinition(String),
}

/// Which of several intersection candidates a point took.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchChoice {
    pub point: PointId,
    pub chosen: usize,
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagram {
    pub coords: Vec<Pt>,
    pub seed: u64,
    pub attempts_used: u32,
    pub branches: Vec<BranchChoice>,
}

impl Diagram {
    pub fn at(&self, p: PointId) -> Pt {
        self.coords[p.index()]
    }

    /// Largest coordinate magnitude, at least 1.
    pub fn scale(&self) -> f64 {
        self.coords.iter().fold(1.0_f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
    }
}

impl crate::model::Coords for Diagram {
    fn get(&self, p: PointId) -> Option<Pt> {
        <[Pt]>::get(&self.coords, p.index()).copied()
    }
}

/// Random source of one attempt; `used` tells whether any draw happened.
pub struct Stream {
    rng: ChaCha8Rng,
    used: bool,
}

impl Stream {
    /// Stream `k` of `seed`: a pure function of both.
    pub fn new(seed: u64, k: u64) -> Stream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        Stream { rng, used: false }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.used = true;
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.used = true;
        self.rng.gen_range(0..n)
    }

    pub fn point(&mut self) -> Pt {
        let x = self.uniform(-1.0, 1.0);
        let y = self.uniform(-1.0, 1.0);
        Pt::new(x, y)
    }

    pub fn used(&self) -> bool {
        self.used
    }
}

/// Picks one of the intersection candidates, ignoring those that coincide with `avoid`.
/// Returns the point and its index among the distinct remaining candidates.
pub fn choose_intersection(candidates: &[Pt], avoid: &[Pt], stream: &mut Stream) -> Result<(Pt, usize, usize), SketchError> {
    let mut distinct: Vec<Pt> = Vec::new();
    for &c in candidates {
        if !c.is_finite() {
            continue;
        }
        let tol = COINCIDENCE * (1.0 + c.norm());
        if distinct.iter().any(|d| d.dist(c) < tol) || avoid.iter().any(|a| a.dist(c) < tol) {
            continue;
        }
        distinct.push(c);
    }
    match distinct.len() {
        0 => Err(SketchError::NoIntersection),
        1 => Ok((distinct[0], 0, 1)),
        n => {
            let k = stream.index(n);
            Ok((distinct[k], k, n))
        }
    }
}

/// Coordinates for the points of one clause, appended to `coords`.
pub fn sketch_clause(
    clause: &Clause,
    clause_index: usize,
    defs: &DefinitionSet,
    coords: &mut Vec<Pt>,
    stream: &mut Stream,
    branches: &mut Vec<BranchChoice>,
) -> Result<(), SketchError> {
    let fail = |msg: String| SketchError::Unrealizable { clause: clause_index, msg };
    let n_new = clause.points.len();
    let mut loci: Vec<Object> = Vec::new();
    let mut fixed: Option<Vec<(PointId, Pt)>> = None;
    let all_pinned = clause.pins.iter().all(Option::is_some);
    if !all_pinned {
        for cons in &clause.constructions {
            let def = defs.get(&cons.def).ok_or_else(|| SketchError::UnknownDefinition(cons.def.clone()))?;
            let args: Vec<routines::Arg> = def
                .sketch_args
                .iter()
                .map(|&i| match &cons.args[i] {
                    ArgValue::Point(p) => routines::Arg::Pt(coords[p.index()]),
                    ArgValue::Const(t) => routines::Arg::Const(t.clone()),
                })
                .collect();
            match realize(&def.sketch, &args, stream).map_err(fail)? {
                Object::Points(pts) => {
                    if fixed.is_none() {
                        let outs: Vec<PointId> = def
                            .outs
                            .iter()
                            .map(|&o| cons.args[o].point().expect("outputs are points"))
                            .collect();
                        fixed = Some(outs.into_iter().zip(pts).collect());
                    }
                }
                obj => loci.push(obj),
            }
        }
    }
    let base = coords.len();
    let mut placed: Vec<Option<Pt>> = clause.pins.clone();
    if !all_pinned {
        if let Some(f) = fixed {
            for (p, xy) in f {
                let k = clause.points.iter().position(|&q| q == p).expect("output of this clause");
                if placed[k].is_none() {
                    placed[k] = Some(xy);
                }
            }
        } else if n_new == 1 {
            let xy = match loci.len() {
                0 => return Err(fail("no construction places the point".into())),
                1 => loci[0].sample(stream),
                _ => {
                    let cands = loci[0].intersect(&loci[1]);
                    let (xy, chosen, n) = choose_intersection(&cands, coords, stream)?;
                    if n > 1 {
                        branches.push(BranchChoice { point: clause.points[0], chosen, candidates: n });
                    }
                    xy
                }
            };
            placed[0] = Some(xy);
        }
    }
    for (k, p) in placed.into_iter().enumerate() {
        let p = p.ok_or_else(|| fail(format!("point {} has no position", k)))?;
        if !p.is_finite() {
            return Err(fail("non-finite coordinate".into()));
        }
        coords.push(p);
    }
    debug_assert_eq!(coords.len(), base + n_new);
    for i in base..coords.len() {
        for j in 0..i {
            if coords[i].dist(coords[j]) < MIN_SEPARATION {
                return Err(fail("two points coincide".into()));
            }
        }
    }
    for st in clause_statements(clause, defs)? {
        if check_numerical(&st, coords.as_slice()) != Ok(true) {
            return Err(fail("a generated statement fails numerically".into()));
        }
    }
    Ok(())
}

/// Statements generated by every construction of a clause.
pub fn clause_statements(clause: &Clause, defs: &DefinitionSet) -> Result<Vec<Statement>, SketchError> {
    let mut out = Vec::new();
    for cons in &clause.constructions {
        let def = defs.get(&cons.def).ok_or_else(|| SketchError::UnknownDefinition(cons.def.clone()))?;
        let stmts = def
            .instantiate(&cons.args)
            .map_err(|e| SketchError::Unrealizable { clause: 0, msg: e.to_string() })?;
        out.extend(stmts);
    }
    Ok(out)
}

fn attempt(problem: &ProblemSpec, defs: &DefinitionSet, stream: &mut Stream) -> Result<(Vec<Pt>, Vec<BranchChoice>, bool), SketchError> {
    let mut coords = Vec::with_capacity(problem.points.len());
    let mut branches = Vec::new();
    for (i, clause) in problem.clauses.iter().enumerate() {
        sketch_clause(clause, i, defs, &mut coords, stream, &mut branches)?;
    }
    let goals_ok = problem.goals.iter().all(|g| check_numerical(g, coords.as_slice()) == Ok(true));
    Ok((coords, branches, goals_ok))
}

/// Draws coordinates for every point, redrawing until the goals hold numerically.
pub fn build_diagram(problem: &ProblemSpec, defs: &DefinitionSet, seed: u64) -> Result<Diagram, SketchError> {
    build_diagram_with_budget(problem, defs, seed, MAX_ATTEMPTS)
}

pub fn build_diagram_with_budget(
    problem: &ProblemSpec,
    defs: &DefinitionSet,
    seed: u64,
    budget: u32,
) -> Result<Diagram, SketchError> {
    let mut last_err = None;
    let mut goal_failures = 0;
    let mut made = 0;
    for k in 0..budget {
        made = k + 1;
        let mut stream = Stream::new(seed, k as u64);
        match attempt(problem, defs, &mut stream) {
            Ok((coords, branches, true)) => {
                return Ok(Diagram { coords, seed, attempts_used: k + 1, branches });
            }
            Ok(_) => goal_failures += 1,
            Err(e @ SketchError::UnknownDefinition(_)) => return Err(e),
            Err(e) => last_err = Some(e),
        }
        if !stream.used() {
            break;
        }
    }
    match last_err {
        Some(e) if goal_failures == 0 => Err(e),
        _ => Err(SketchError::GoalNumericallyFalse { attempts: made }),
    }
}

/// Places the points of a clause added during a run, on stream `2^32 + step` of the seed.
pub fn extend_diagram(
    diagram: &mut Diagram,
    clause: &Clause,
    clause_index: usize,
    defs: &DefinitionSet,
    step: u64,
) -> Result<(), SketchError> {
    let mut last = SketchError::NoIntersection;
    for k in 0..1000u64 {
        let mut stream = Stream::new(diagram.seed, (1 << 32) + step * 1000 + k);
        let mut coords = diagram.coords.clone();
        let mut branches = diagram.branches.clone();
        match sketch_clause(clause, clause_index, defs, &mut coords, &mut stream, &mut branches) {
            Ok(()) => {
                diagram.coords = coords;
                diagram.branches = branches;
                return Ok(());
            }
            Err(e) => last = e,
        }
        if !stream.used() {
            break;
        }
    }
    Err(last)
}
