//! Lines and circles known to contain given points, merged only on symbolic facts.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::depgraph::StmtId;
use crate::model::{PointId, PointTable};

/// A statement that put its points on one object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub stmt: StmtId,
    pub points: Vec<PointId>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LineNode {
    pub id: usize,
    pub members: BTreeSet<PointId>,
    /// The two points the node was created from; its direction symbol refers to them.
    pub def: (PointId, PointId),
    pub facts: Vec<Fact>,
    parent: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircleNode {
    pub id: usize,
    pub members: BTreeSet<PointId>,
    pub facts: Vec<Fact>,
    pub center: Option<PointId>,
    parent: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Line,
    Circle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergeEvent {
    pub kind: ObjectKind,
    pub survivor: usize,
    pub absorbed: usize,
    pub fact: StmtId,
}

#[derive(Debug, Clone, Default)]
pub struct SymbolsGraph {
    lines: Vec<LineNode>,
    circles: Vec<CircleNode>,
    pair_line: HashMap<(PointId, PointId), usize>,
    triple_circle: HashMap<[PointId; 3], usize>,
    merges: Vec<MergeEvent>,
}

fn pair(a: PointId, b: PointId) -> (PointId, PointId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn triple(a: PointId, b: PointId, c: PointId) -> [PointId; 3] {
    let mut t = [a, b, c];
    t.sort();
    t
}

fn distinct(points: &[PointId]) -> Vec<PointId> {
    let mut v = points.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Outcome of noting a fact.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Noted {
    pub root: Option<usize>,
    pub merges: Vec<MergeEvent>,
    /// True when the fact added a point or a merge.
    pub grew: bool,
}

impl SymbolsGraph {
    pub fn new() -> SymbolsGraph {
        SymbolsGraph::default()
    }

    fn find_line(&self, mut i: usize) -> usize {
        while self.lines[i].parent != i {
            i = self.lines[i].parent;
        }
        i
    }

    fn find_circle(&self, mut i: usize) -> usize {
        while self.circles[i].parent != i {
            i = self.circles[i].parent;
        }
        i
    }

    pub fn line(&self, id: usize) -> &LineNode {
        &self.lines[id]
    }

    pub fn circle(&self, id: usize) -> &CircleNode {
        &self.circles[id]
    }

    /// Current node standing for `id` after merges.
    pub fn line_root(&self, id: usize) -> usize {
        self.find_line(id)
    }

    pub fn circle_root(&self, id: usize) -> usize {
        self.find_circle(id)
    }

    pub fn merges(&self) -> &[MergeEvent] {
        &self.merges
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> impl Iterator<Item = &LineNode> {
        self.lines.iter().filter(|l| l.parent == l.id)
    }

    pub fn circles(&self) -> impl Iterator<Item = &CircleNode> {
        self.circles.iter().filter(|c| c.parent == c.id)
    }

    /// The known line through both points, if any.
    pub fn line_through(&self, a: PointId, b: PointId) -> Option<usize> {
        if a == b {
            return None;
        }
        self.pair_line.get(&pair(a, b)).map(|&i| self.find_line(i))
    }

    /// The line through `a` and `b`, created as a two-point line when unknown.
    pub fn ensure_line(&mut self, a: PointId, b: PointId) -> usize {
        if let Some(l) = self.line_through(a, b) {
            return l;
        }
        let id = self.lines.len();
        let (p, q) = pair(a, b);
        self.lines.push(LineNode { id, members: [p, q].into_iter().collect(), def: (p, q), facts: vec![], parent: id });
        self.pair_line.insert((p, q), id);
        id
    }

    /// The known line containing all the points (at least two distinct).
    pub fn line_containing(&self, points: &[PointId]) -> Option<usize> {
        let pts = distinct(points);
        if pts.len() < 2 {
            return None;
        }
        let root = self.line_through(pts[0], pts[1])?;
        pts.iter().all(|p| self.lines[root].members.contains(p)).then_some(root)
    }

    pub fn circle_containing(&self, points: &[PointId]) -> Option<usize> {
        let pts = distinct(points);
        if pts.len() < 3 {
            return None;
        }
        let root = self.find_circle(*self.triple_circle.get(&triple(pts[0], pts[1], pts[2]))?);
        pts.iter().all(|p| self.circles[root].members.contains(p)).then_some(root)
    }

    /// Records that the points are collinear, merging lines sharing two of them.
    pub fn note_collinear(&mut self, points: &[PointId], fact: StmtId) -> Noted {
        let pts = distinct(points);
        if pts.len() < 3 {
            return Noted::default();
        }
        let mut roots: Vec<usize> = Vec::new();
        for (i, &p) in pts.iter().enumerate() {
            for &q in &pts[i + 1..] {
                if let Some(r) = self.line_through(p, q) {
                    if !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        let mut out = Noted::default();
        let survivor = match roots.first() {
            Some(&r) => r,
            None => {
                let id = self.lines.len();
                self.lines.push(LineNode {
                    id,
                    members: pts.iter().copied().collect(),
                    def: (pts[0], pts[1]),
                    facts: vec![Fact { stmt: fact, points: pts.clone() }],
                    parent: id,
                });
                self.register_line_pairs(id);
                out.root = Some(id);
                out.grew = true;
                return out;
            }
        };
        let before = self.lines[survivor].members.len();
        for &r in &roots[1..] {
            self.absorb_line(survivor, r, fact, &mut out);
        }
        let new_points = pts.iter().any(|p| !self.lines[survivor].members.contains(p));
        if new_points || !out.merges.is_empty() {
            self.lines[survivor].facts.push(Fact { stmt: fact, points: pts.clone() });
        }
        self.lines[survivor].members.extend(pts.iter().copied());
        // cascade: any other line now sharing two members must join
        loop {
            let members: Vec<PointId> = self.lines[survivor].members.iter().copied().collect();
            let mut other = None;
            'scan: for (i, &p) in members.iter().enumerate() {
                for &q in &members[i + 1..] {
                    if let Some(r) = self.line_through(p, q) {
                        if r != survivor {
                            other = Some(r);
                            break 'scan;
                        }
                    }
                }
            }
            match other {
                Some(r) => self.absorb_line(survivor, r, fact, &mut out),
                None => break,
            }
        }
        self.register_line_pairs(survivor);
        out.grew = out.grew || self.lines[survivor].members.len() > before || !out.merges.is_empty();
        out.root = Some(survivor);
        out
    }

    fn absorb_line(&mut self, survivor: usize, absorbed: usize, fact: StmtId, out: &mut Noted) {
        let node = std::mem::take(&mut self.lines[absorbed].facts);
        let members = self.lines[absorbed].members.clone();
        self.lines[absorbed].parent = survivor;
        self.lines[absorbed].facts = node.clone();
        self.lines[survivor].members.extend(members);
        for f in node {
            if !self.lines[survivor].facts.contains(&f) {
                self.lines[survivor].facts.push(f);
            }
        }
        let ev = MergeEvent { kind: ObjectKind::Line, survivor, absorbed, fact };
        self.merges.push(ev.clone());
        out.merges.push(ev);
    }

    fn register_line_pairs(&mut self, root: usize) {
        let members: Vec<PointId> = self.lines[root].members.iter().copied().collect();
        for (i, &p) in members.iter().enumerate() {
            for &q in &members[i + 1..] {
                self.pair_line.insert((p, q), root);
            }
        }
    }

    /// Records that the points are concyclic, merging circles sharing three of them.
    pub fn note_concyclic(&mut self, points: &[PointId], fact: StmtId) -> Noted {
        let pts = distinct(points);
        if pts.len() < 4 {
            return Noted::default();
        }
        let mut roots: Vec<usize> = Vec::new();
        for_each_triple(&pts, |t| {
            if let Some(&c) = self.triple_circle.get(&t) {
                let r = self.find_circle(c);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        });
        roots.sort();
        let mut out = Noted::default();
        let Some(&survivor) = roots.first() else {
            let id = self.circles.len();
            self.circles.push(CircleNode {
                id,
                members: pts.iter().copied().collect(),
                facts: vec![Fact { stmt: fact, points: pts.clone() }],
                center: None,
                parent: id,
            });
            self.register_circle_triples(id);
            out.root = Some(id);
            out.grew = true;
            return out;
        };
        let before = self.circles[survivor].members.len();
        for &r in &roots[1..] {
            self.absorb_circle(survivor, r, fact, &mut out);
        }
        let new_points = pts.iter().any(|p| !self.circles[survivor].members.contains(p));
        if new_points || !out.merges.is_empty() {
            self.circles[survivor].facts.push(Fact { stmt: fact, points: pts.clone() });
        }
        self.circles[survivor].members.extend(pts.iter().copied());
        loop {
            let members: Vec<PointId> = self.circles[survivor].members.iter().copied().collect();
            let mut other = None;
            for_each_triple(&members, |t| {
                if other.is_none() {
                    if let Some(&c) = self.triple_circle.get(&t) {
                        let r = self.find_circle(c);
                        if r != survivor {
                            other = Some(r);
                        }
                    }
                }
            });
            match other {
                Some(r) => self.absorb_circle(survivor, r, fact, &mut out),
                None => break,
            }
        }
        self.register_circle_triples(survivor);
        out.grew = out.grew || self.circles[survivor].members.len() > before || !out.merges.is_empty();
        out.root = Some(survivor);
        out
    }

    fn absorb_circle(&mut self, survivor: usize, absorbed: usize, fact: StmtId, out: &mut Noted) {
        let facts = self.circles[absorbed].facts.clone();
        let members = self.circles[absorbed].members.clone();
        self.circles[absorbed].parent = survivor;
        self.circles[survivor].members.extend(members);
        if self.circles[survivor].center.is_none() {
            self.circles[survivor].center = self.circles[absorbed].center;
        }
        for f in facts {
            if !self.circles[survivor].facts.contains(&f) {
                self.circles[survivor].facts.push(f);
            }
        }
        let ev = MergeEvent { kind: ObjectKind::Circle, survivor, absorbed, fact };
        self.merges.push(ev.clone());
        out.merges.push(ev);
    }

    fn register_circle_triples(&mut self, root: usize) {
        let members: Vec<PointId> = self.circles[root].members.iter().copied().collect();
        for_each_triple(&members, |t| {
            self.triple_circle.insert(t, root);
        });
    }

    pub fn set_center(&mut self, circle: usize, center: PointId) {
        let r = self.find_circle(circle);
        self.circles[r].center = Some(center);
    }

    /// A subset-minimal set of collinearity facts placing all the points on one line.
    pub fn coll_support(&self, points: &[PointId]) -> Option<Vec<StmtId>> {
        let pts = distinct(points);
        let root = self.line_containing(&pts)?;
        minimal_cover(&self.lines[root].facts, &pts, 2)
    }

    /// A subset-minimal set of concyclicity facts placing all the points on one circle.
    pub fn cyclic_support(&self, points: &[PointId]) -> Option<Vec<StmtId>> {
        let pts = distinct(points);
        let root = self.circle_containing(&pts)?;
        minimal_cover(&self.circles[root].facts, &pts, 3)
    }

    pub fn to_json(&self, names: &PointTable) -> serde_json::Value {
        let name = |p: &PointId| names.name(*p).to_string();
        let lines: Vec<_> = self
            .lines()
            .filter(|l| l.members.len() >= 3)
            .map(|l| serde_json::json!({ "id": format!("line{}", l.id), "points": l.members.iter().map(name).collect::<Vec<_>>() }))
            .collect();
        let circles: Vec<_> = self
            .circles()
            .map(|c| {
                serde_json::json!({
                    "id": format!("circle{}", c.id),
                    "points": c.members.iter().map(name).collect::<Vec<_>>(),
                    "center": c.center.as_ref().map(name),
                })
            })
            .collect();
        serde_json::json!({
            "points": names.names(),
            "lines": lines,
            "circles": circles,
        })
    }
}

fn for_each_triple(pts: &[PointId], mut f: impl FnMut([PointId; 3])) {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                f(triple(pts[i], pts[j], pts[k]));
            }
        }
    }
}

/// Whether some chain of facts, linked by sharing `link` points, covers `target`.
fn covers(facts: &[&Fact], target: &[PointId], link: usize) -> bool {
    let mut groups: Vec<BTreeSet<PointId>> = facts.iter().map(|f| f.points.iter().copied().collect()).collect();
    loop {
        let mut merged = false;
        'outer: for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                if groups[i].intersection(&groups[j]).count() >= link {
                    let g = groups.swap_remove(j);
                    groups[i].extend(g);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    groups.iter().any(|g| target.iter().all(|p| g.contains(p)))
}

fn minimal_cover(facts: &[Fact], target: &[PointId], link: usize) -> Option<Vec<StmtId>> {
    let mut sorted: Vec<&Fact> = facts.iter().collect();
    sorted.sort_by_key(|f| f.stmt);
    if let Some(f) = sorted.iter().find(|f| target.iter().all(|p| f.points.contains(p))) {
        return Some(vec![f.stmt]);
    }
    if !covers(&sorted, target, link) {
        return None;
    }
    let mut keep = sorted.clone();
    for i in (0..sorted.len()).rev() {
        let trial: Vec<&Fact> = keep.iter().copied().filter(|f| f.stmt != sorted[i].stmt).collect();
        if covers(&trial, target, link) {
            keep = trial;
        }
    }
    let mut out: Vec<StmtId> = keep.iter().map(|f| f.stmt).collect();
    out.sort();
    out.dedup();
    Some(out)
}
