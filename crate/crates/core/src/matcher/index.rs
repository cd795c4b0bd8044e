//! Numerically true facts about a diagram, grouped so that rule premises can be
//! enumerated without testing every point tuple.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::model::numeric::{circumcenter, collinear, direction, near_zero};
use crate::model::{PointId, PointTable, PredicateKind, Pt, Statement, ATOL};
use crate::parse::parse_statement_text;

const FORMAT: &str = "geoprove-match-cache 1";

pub type Seg = (PointId, PointId);

fn seg(a: PointId, b: PointId) -> Seg {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache file is for another problem")]
    Mismatch,
    #[error("cache file is malformed: {0}")]
    Malformed(String),
}

/// Partition of items into classes with stable numbering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Classes<K: Ord + Copy + std::hash::Hash> {
    of: HashMap<K, u32>,
    members: Vec<Vec<K>>,
}

impl<K: Ord + Copy + std::hash::Hash> Classes<K> {
    fn from_groups(mut groups: Vec<Vec<K>>) -> Classes<K> {
        for g in groups.iter_mut() {
            g.sort();
            g.dedup();
        }
        groups.retain(|g| !g.is_empty());
        groups.sort();
        let mut of = HashMap::new();
        for (i, g) in groups.iter().enumerate() {
            for k in g {
                of.insert(*k, i as u32);
            }
        }
        Classes { of, members: groups }
    }

    pub fn class_of(&self, k: &K) -> Option<u32> {
        self.of.get(k).copied()
    }

    pub fn members(&self, c: u32) -> &[K] {
        &self.members[c as usize]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<K>> {
        self.members.iter()
    }
}

/// Groups values that are within `close` of a neighbour, optionally wrapping at `period`.
fn cluster<K: Copy>(mut items: Vec<(f64, K)>, close: impl Fn(f64, f64) -> bool, period: Option<f64>) -> Vec<Vec<K>> {
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<Vec<K>> = Vec::new();
    let mut last = f64::NAN;
    for (v, k) in &items {
        if groups.is_empty() || !close(last, *v) {
            groups.push(vec![*k]);
        } else {
            groups.last_mut().expect("non-empty").push(*k);
        }
        last = *v;
    }
    if let (Some(p), true) = (period, groups.len() > 1) {
        let first = items.first().expect("non-empty").0;
        let last = items.last().expect("non-empty").0;
        if close(last - p, first) {
            let tail = groups.pop().expect("several groups");
            groups[0].extend(tail);
        }
    }
    groups
}

fn same_angle(a: f64, b: f64) -> bool {
    (b - a).abs() < ATOL
}

fn same_length(a: f64, b: f64) -> bool {
    near_zero(b - a, a.abs().max(b.abs()))
}

/// Everything the rule matcher needs to enumerate numerically true premises.
#[derive(Debug, Clone, Default)]
pub struct MatchIndex {
    pub n: usize,
    pub dirs: Classes<Seg>,
    pub lens: Classes<Seg>,
    /// Perpendicular direction class of each direction class.
    pub perp: HashMap<u32, u32>,
    /// Ordered pairs of distinct direction classes with equal angles.
    pub angles: Classes<(u32, u32)>,
    /// Ordered pairs of distinct length classes with equal ratios.
    pub ratios: Classes<(u32, u32)>,
    pub lines: Vec<Vec<PointId>>,
    pub circles: Vec<Vec<PointId>>,
    pub midps: Vec<(PointId, PointId, PointId)>,
    /// Numeric evaluations spent building this index.
    pub checks: u64,
}

impl MatchIndex {
    pub fn build(coords: &[Pt]) -> MatchIndex {
        let n = coords.len();
        let ids: Vec<PointId> = (0..n as u16).map(PointId).collect();
        let mut checks = 0u64;
        let mut segs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                segs.push((ids[i], ids[j]));
            }
        }
        let at = |p: PointId| coords[p.index()];
        let dir_items: Vec<(f64, Seg)> = segs.iter().map(|&(a, b)| (direction(at(a), at(b)), (a, b))).collect();
        checks += segs.len() as u64;
        let dirs = Classes::from_groups(cluster(dir_items, same_angle, Some(std::f64::consts::PI)));
        let len_items: Vec<(f64, Seg)> = segs.iter().map(|&(a, b)| (at(a).dist(at(b)), (a, b))).collect();
        checks += segs.len() as u64;
        let lens = Classes::from_groups(cluster(len_items, same_length, None));

        let dir_value: Vec<f64> = dirs.iter().map(|m| direction(at(m[0].0), at(m[0].1))).collect();
        let mut angle_items = Vec::new();
        let pi = std::f64::consts::PI;
        for c1 in 0..dirs.len() {
            for c2 in 0..dirs.len() {
                if c1 != c2 {
                    let v = (dir_value[c2] - dir_value[c1]).rem_euclid(pi);
                    angle_items.push((v, (c1 as u32, c2 as u32)));
                }
            }
        }
        checks += angle_items.len() as u64;
        let mut perp = HashMap::new();
        for &(v, (c1, c2)) in &angle_items {
            if (v - pi / 2.0).abs() < ATOL {
                perp.insert(c1, c2);
            }
        }
        let angles = Classes::from_groups(cluster(angle_items, same_angle, Some(pi)));

        let len_value: Vec<f64> = lens.iter().map(|m| at(m[0].0).dist(at(m[0].1))).collect();
        let mut ratio_items = Vec::new();
        for c1 in 0..lens.len() {
            for c2 in 0..lens.len() {
                if c1 != c2 {
                    ratio_items.push(((len_value[c1] / len_value[c2]).ln(), (c1 as u32, c2 as u32)));
                }
            }
        }
        checks += ratio_items.len() as u64;
        let ratios = Classes::from_groups(cluster(ratio_items, |a, b| (b - a).abs() < ATOL, None));

        let mut lines: Vec<Vec<PointId>> = Vec::new();
        for &(a, b) in &segs {
            if lines.iter().any(|l| l.contains(&a) && l.contains(&b)) {
                continue;
            }
            let members: Vec<PointId> = ids.iter().copied().filter(|&p| p == a || p == b || collinear(at(a), at(b), at(p))).collect();
            checks += n as u64;
            if members.len() >= 3 {
                lines.push(members);
            }
        }
        let mut circles: Vec<Vec<PointId>> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (ids[i], ids[j], ids[k]);
                    if circles.iter().any(|m| m.contains(&a) && m.contains(&b) && m.contains(&c)) {
                        continue;
                    }
                    checks += 1;
                    let Some(o) = circumcenter(at(a), at(b), at(c)) else { continue };
                    let r = o.dist(at(a));
                    let members: Vec<PointId> = ids.iter().copied().filter(|&p| near_zero(o.dist(at(p)) - r, r)).collect();
                    checks += n as u64;
                    if members.len() >= 4 {
                        circles.push(members);
                    }
                }
            }
        }
        let mut midps = Vec::new();
        for &m in &ids {
            for &(a, b) in &segs {
                if m != a && m != b {
                    checks += 1;
                    if at(m).close(at(a).add(at(b)).scale(0.5)) {
                        midps.push((m, a, b));
                    }
                }
            }
        }
        MatchIndex { n, dirs, lens, perp, angles, ratios, lines, circles, midps, checks }
    }

    pub fn dir_class(&self, a: PointId, b: PointId) -> u32 {
        self.dirs.class_of(&seg(a, b)).expect("every segment has a direction")
    }

    pub fn len_class(&self, a: PointId, b: PointId) -> u32 {
        self.lens.class_of(&seg(a, b)).expect("every segment has a length")
    }

    /// Ordered direction-class pairs with the same angle as `(c1, c2)`.
    pub fn same_angle_pairs(&self, c1: u32, c2: u32) -> Vec<(u32, u32)> {
        if c1 == c2 {
            return (0..self.dirs.len() as u32).map(|c| (c, c)).collect();
        }
        match self.angles.class_of(&(c1, c2)) {
            Some(k) => self.angles.members(k).to_vec(),
            None => vec![(c1, c2)],
        }
    }

    pub fn same_ratio_pairs(&self, c1: u32, c2: u32) -> Vec<(u32, u32)> {
        if c1 == c2 {
            return (0..self.lens.len() as u32).map(|c| (c, c)).collect();
        }
        match self.ratios.class_of(&(c1, c2)) {
            Some(k) => self.ratios.members(k).to_vec(),
            None => vec![(c1, c2)],
        }
    }

    /// Canonical statements describing the index, grouped by kind.
    pub fn to_text(&self, fingerprint: &str, names: &PointTable) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{FORMAT}");
        let _ = writeln!(out, "fingerprint {fingerprint}");
        let _ = writeln!(out, "points {}", self.n);
        let text = |kind: PredicateKind, args: &[PointId]| names.text(&Statement::make(kind, args));
        let section = |out: &mut String, name: &str, lines: Vec<String>| {
            let _ = writeln!(out, "[{name}]");
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
        };
        section(&mut out, "coll", self.lines.iter().map(|l| text(PredicateKind::Coll, l)).collect());
        section(&mut out, "cyclic", self.circles.iter().map(|c| text(PredicateKind::Cyclic, c)).collect());
        let chains = |classes: &Classes<Seg>, kind: PredicateKind| -> Vec<String> {
            classes
                .iter()
                .flat_map(|m| m.windows(2).map(|w| text(kind, &[w[0].0, w[0].1, w[1].0, w[1].1])).collect::<Vec<_>>())
                .collect()
        };
        section(&mut out, "para", chains(&self.dirs, PredicateKind::Para));
        section(&mut out, "cong", chains(&self.lens, PredicateKind::Cong));
        let mut perps: Vec<(u32, u32)> = self.perp.iter().map(|(a, b)| (*a, *b)).filter(|(a, b)| a < b).collect();
        perps.sort();
        section(
            &mut out,
            "perp",
            perps
                .iter()
                .map(|&(a, b)| {
                    let (p, q) = (self.dirs.members(a)[0], self.dirs.members(b)[0]);
                    text(PredicateKind::Perp, &[p.0, p.1, q.0, q.1])
                })
                .collect(),
        );
        let pair_chains = |classes: &Classes<(u32, u32)>, base: &Classes<Seg>, kind: PredicateKind| -> Vec<String> {
            let rep = |c: u32| base.members(c)[0];
            classes
                .iter()
                .flat_map(|m| {
                    m.windows(2)
                        .map(|w| {
                            let (a, b, c, d) = (rep(w[0].0), rep(w[0].1), rep(w[1].0), rep(w[1].1));
                            text(kind, &[a.0, a.1, b.0, b.1, c.0, c.1, d.0, d.1])
                        })
                        .collect::<Vec<_>>()
                })
                .collect()
        };
        section(&mut out, "eqangle", pair_chains(&self.angles, &self.dirs, PredicateKind::Eqangle));
        section(&mut out, "eqratio", pair_chains(&self.ratios, &self.lens, PredicateKind::Eqratio));
        section(&mut out, "midp", self.midps.iter().map(|&(m, a, b)| text(PredicateKind::Midp, &[m, a, b])).collect());
        out
    }

    /// Rebuilds an index from its text form without evaluating anything.
    pub fn from_text(text: &str, fingerprint: &str, names: &PointTable) -> Result<MatchIndex, CacheError> {
        let bad = |m: &str| CacheError::Malformed(m.to_string());
        let mut lines = text.lines();
        if lines.next() != Some(FORMAT) {
            return Err(bad("format line"));
        }
        if lines.next() != Some(&format!("fingerprint {fingerprint}")) {
            return Err(CacheError::Mismatch);
        }
        let n: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("points "))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("points line"))?;
        if n != names.len() {
            return Err(CacheError::Mismatch);
        }
        let mut sections: BTreeMap<String, Vec<Statement>> = BTreeMap::new();
        let mut current = String::new();
        for l in lines {
            if let Some(name) = l.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                current = name.to_string();
                sections.entry(current.clone()).or_default();
                continue;
            }
            if l.trim().is_empty() {
                continue;
            }
            let st = parse_statement_text(l, names).map_err(|e| bad(&e.to_string()))?;
            sections.entry(current.clone()).or_default().push(st);
        }
        let get = |k: &str| sections.get(k).cloned().unwrap_or_default();
        let ids: Vec<PointId> = (0..n as u16).map(PointId).collect();
        let mut segs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                segs.push((ids[i], ids[j]));
            }
        }
        let dirs = classes_from_links(&segs, get("para").iter().map(|s| (seg(s.args[0], s.args[1]), seg(s.args[2], s.args[3]))));
        let lens = classes_from_links(&segs, get("cong").iter().map(|s| (seg(s.args[0], s.args[1]), seg(s.args[2], s.args[3]))));
        let mut perp = HashMap::new();
        for s in get("perp") {
            let a = dirs.class_of(&seg(s.args[0], s.args[1])).ok_or_else(|| bad("perp"))?;
            let b = dirs.class_of(&seg(s.args[2], s.args[3])).ok_or_else(|| bad("perp"))?;
            perp.insert(a, b);
            perp.insert(b, a);
        }
        let pairs_of = |classes: &Classes<Seg>| -> Vec<(u32, u32)> {
            let k = classes.len() as u32;
            (0..k).flat_map(|a| (0..k).filter(move |&b| b != a).map(move |b| (a, b))).collect()
        };
        // x:y = z:w also gives x:z = y:w; both forms and their reverses are linked,
        // so the links do not depend on which symmetric form was written
        let links = |stmts: Vec<Statement>, classes: &Classes<Seg>| {
            let mut out = Vec::new();
            for s in stmts {
                let c = |i: usize| classes.class_of(&seg(s.args[i], s.args[i + 1])).expect("all segments classified");
                let (x, y, z, w) = (c(0), c(2), c(4), c(6));
                out.push(((x, y), (z, w)));
                out.push(((y, x), (w, z)));
                out.push(((x, z), (y, w)));
                out.push(((z, x), (w, y)));
            }
            out
        };
        let angles = classes_from_links(&pairs_of(&dirs), links(get("eqangle"), &dirs).into_iter());
        let ratios = classes_from_links(&pairs_of(&lens), links(get("eqratio"), &lens).into_iter());
        let lines_ = get("coll").into_iter().map(|s| s.args.to_vec()).collect();
        let circles = get("cyclic").into_iter().map(|s| s.args.to_vec()).collect();
        let midps = get("midp").into_iter().map(|s| (s.args[0], s.args[1], s.args[2])).collect();
        Ok(MatchIndex { n, dirs, lens, perp, angles, ratios, lines: lines_, circles, midps, checks: 0 })
    }
}

fn classes_from_links<K: Ord + Copy + std::hash::Hash>(items: &[K], links: impl Iterator<Item = (K, K)>) -> Classes<K> {
    let pos: HashMap<K, usize> = items.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut parent: Vec<usize> = (0..items.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (a, b) in links {
        if let (Some(&i), Some(&j)) = (pos.get(&a), pos.get(&b)) {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            parent[ri] = rj;
        }
    }
    let mut groups: BTreeMap<usize, Vec<K>> = BTreeMap::new();
    for (i, k) in items.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(*k);
    }
    Classes::from_groups(groups.into_values().collect())
}

/// Hash of the problem text and the seed naming a cache file.
pub fn fingerprint(problem_text: &str, seed: u64) -> String {
    let mut h = Sha256::new();
    h.update(FORMAT.as_bytes());
    h.update(problem_text.as_bytes());
    h.update(seed.to_le_bytes());
    h.finalize().iter().take(16).map(|b| format!("{b:02x}")).collect()
}

pub fn cache_path(dir: &Path, fingerprint: &str) -> PathBuf {
    dir.join(format!("{fingerprint}.cache"))
}

/// Loads the cache for `fingerprint` from `dir`, or builds and stores it.
/// I/O failures only lose persistence.
pub fn load_or_build(dir: Option<&Path>, fingerprint: &str, names: &PointTable, coords: &[Pt]) -> (MatchIndex, bool) {
    if let Some(dir) = dir {
        let path = cache_path(dir, fingerprint);
        if let Ok(text) = std::fs::read_to_string(&path) {
            match MatchIndex::from_text(&text, fingerprint, names) {
                Ok(idx) => return (idx, true),
                Err(e) => log::info!("rebuilding match cache: {e}"),
            }
        }
    }
    let idx = MatchIndex::build(coords);
    if let Some(dir) = dir {
        let write = std::fs::create_dir_all(dir)
            .and_then(|_| std::fs::write(cache_path(dir, fingerprint), idx.to_text(fingerprint, names)));
        if let Err(e) = write {
            log::warn!("match cache not saved: {e}");
        }
    }
    (idx, false)
}
