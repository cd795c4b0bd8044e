//! Proof listings, figures, graph pages and run metadata in the environment layout.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::depgraph::{is_valid_proof, ReducedProof, StmtId};
use crate::kernel::{aux_start, ProofState};
use crate::model::numeric::circumcenter;
use crate::model::{PointId, PredicateKind, Pt};

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("proof step uses a statement that is not yet established")]
    InvalidProof,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const RULE: &str = "==========================";

fn points_line(state: &ProofState, pts: &[PointId]) -> String {
    let names: Vec<String> = pts.iter().map(|&p| state.points().name(p).to_uppercase()).collect();
    format!("{} : Points", names.join(" "))
}

/// The textual proof listing. Statements are numbered in order of appearance.
pub fn proof_text(state: &ProofState, proof: &ReducedProof) -> Result<String, OutputError> {
    if !is_valid_proof(proof) {
        return Err(OutputError::InvalidProof);
    }
    let mut num: HashMap<StmtId, usize> = HashMap::new();
    let pretty = |id: StmtId| state.points().pretty(state.graph.statement(id));
    let mut out = String::new();
    let split = aux_start(&state.problem);
    let clause_points = |r: std::ops::Range<usize>| -> Vec<PointId> {
        state.problem.clauses[r].iter().flat_map(|c| c.points.iter().copied()).collect()
    };
    out.push_str(RULE);
    out.push_str("\n * From theorem premises:\n");
    out.push_str(&points_line(state, &clause_points(0..split)));
    out.push('\n');
    for &p in &proof.premises {
        let k = num.len();
        num.insert(p, k);
        writeln!(out, "{} [{:02}]", pretty(p), k).unwrap();
    }
    if !proof.aux.is_empty() || split < state.problem.clauses.len() {
        out.push_str("\n * Auxiliary Constructions:\n");
        out.push_str(&points_line(state, &clause_points(split..state.problem.clauses.len())));
        out.push('\n');
        for &p in &proof.aux {
            let k = num.len();
            num.insert(p, k);
            writeln!(out, "{} [{:02}]", pretty(p), k).unwrap();
        }
    }
    if !proof.steps.is_empty() {
        out.push_str("\n * Proof steps:\n");
    }
    for (i, step) in proof.steps.iter().enumerate() {
        let prem: Vec<String> = step.premises.iter().map(|&p| format!("{} [{:02}]", pretty(p), num[&p])).collect();
        let k = num.len();
        num.insert(step.conclusion, k);
        writeln!(out, "{:03}. {} ({})⇒  {} [{:02}]", i + 1, prem.join(" & "), step.reason, pretty(step.conclusion), k).unwrap();
    }
    out.push_str(RULE);
    out.push('\n');
    Ok(out)
}

/// Re-checks a listing from its text: every bracketed reference in a step
/// names a statement introduced earlier. Returns the number of steps.
pub fn validate_proof_text(text: &str) -> Result<usize, String> {
    let refs = |s: &str| -> Vec<usize> {
        s.split('[').skip(1).filter_map(|t| t.split(']').next()?.parse().ok()).collect()
    };
    if !text.lines().any(|l| l == " * From theorem premises:") {
        return Err("no premises section".into());
    }
    let mut known: BTreeSet<usize> = BTreeSet::new();
    let mut steps = 0;
    for line in text.lines() {
        let is_step = line.len() > 4 && line.as_bytes()[..3].iter().all(u8::is_ascii_digit) && &line[3..4] == ".";
        if is_step {
            let (lhs, rhs) = line.split_once('⇒').ok_or_else(|| format!("step without conclusion: {line}"))?;
            for r in refs(lhs) {
                if !known.contains(&r) {
                    return Err(format!("step {} uses [{r:02}] before it is introduced", &line[..3]));
                }
            }
            let c = refs(rhs);
            let &[c] = c.as_slice() else { return Err(format!("step {} has no conclusion index", &line[..3])) };
            known.insert(c);
            steps += 1;
        } else {
            known.extend(refs(line));
        }
    }
    Ok(steps)
}

/// What to draw besides the labeled points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureContent {
    /// Lines and circles stated by the construction.
    Construction,
    /// Every line and circle in the symbols graph.
    Full,
}

struct Frame {
    min: Pt,
    k: f64,
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

impl Frame {
    fn new(pts: &[Pt]) -> Frame {
        let (mut lo, mut hi) = (Pt::new(f64::MAX, f64::MAX), Pt::new(f64::MIN, f64::MIN));
        for p in pts {
            lo = Pt::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Pt::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if pts.is_empty() {
            lo = Pt::new(0.0, 0.0);
            hi = Pt::new(1.0, 1.0);
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        Frame { min: lo, k: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, p: Pt) -> (f64, f64) {
        (MARGIN + (p.x - self.min.x) * self.k, SIZE - MARGIN - (p.y - self.min.y) * self.k)
    }
}

/// SVG drawing of the diagram; `highlight` points are drawn in red.
pub fn figure_svg(state: &ProofState, content: FigureContent, highlight: &BTreeSet<PointId>) -> String {
    let coords = &state.diagram.coords;
    let frame = Frame::new(coords);
    let mut lines: Vec<Vec<PointId>> = Vec::new();
    let mut circles: Vec<Vec<PointId>> = Vec::new();
    match content {
        FigureContent::Full => {
            lines.extend(state.symbols.lines().map(|l| l.members.iter().copied().collect()));
            circles.extend(state.symbols.circles().map(|c| c.members.iter().copied().collect()));
        }
        FigureContent::Construction => {
            for i in 0..state.graph.len() {
                let id = StmtId(i as u32);
                if !state.graph.is_root(id) {
                    continue;
                }
                let s = state.graph.statement(id);
                match s.kind {
                    PredicateKind::Coll => lines.push(s.args.to_vec()),
                    PredicateKind::Cyclic => circles.push(s.args.to_vec()),
                    PredicateKind::Circle => circles.push(s.args[1..].to_vec()),
                    _ => {}
                }
            }
        }
    }
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for members in &lines {
        let pts: Vec<Pt> = members.iter().map(|p| coords[p.index()]).collect();
        let Some((a, b)) = extremes(&pts) else { continue };
        let ((x1, y1), (x2, y2)) = (frame.map(a), frame.map(b));
        writeln!(svg, "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#555\" stroke-width=\"1\"/>").unwrap();
    }
    for members in &circles {
        if members.len() < 3 {
            continue;
        }
        let [a, b, c] = [0, 1, 2].map(|i| coords[members[i].index()]);
        let Some(o) = circumcenter(a, b, c) else { continue };
        let (cx, cy) = frame.map(o);
        let r = o.dist(a) * frame.k;
        writeln!(svg, "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"none\" stroke=\"#38c\" stroke-width=\"1\"/>").unwrap();
    }
    for p in state.points().ids() {
        let (x, y) = frame.map(coords[p.index()]);
        let color = if highlight.contains(&p) { "#c22" } else { "black" };
        let name = crate::model::display_name(state.points().name(p));
        writeln!(svg, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"{color}\"/>").unwrap();
        writeln!(svg, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" font-family=\"sans-serif\" fill=\"{color}\">{name}</text>", x + 5.0, y - 5.0).unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}

fn extremes(pts: &[Pt]) -> Option<(Pt, Pt)> {
    let mut best: Option<(Pt, Pt, f64)> = None;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = a.dist(*b);
            if best.map_or(true, |(_, _, m)| d > m) {
                best = Some((*a, *b, d));
            }
        }
    }
    best.map(|(a, b, _)| (a, b))
}

/// Points mentioned by a proof.
pub fn proof_points(state: &ProofState, proof: &ReducedProof) -> BTreeSet<PointId> {
    let mut ids: Vec<StmtId> = proof.steps.iter().flat_map(|d| d.premises.iter().copied().chain([d.conclusion])).collect();
    ids.push(proof.goal);
    ids.iter().flat_map(|&i| state.graph.statement(i).args.to_vec()).collect()
}

/// Text companion of the proof figure.
pub fn proof_figure_text(state: &ProofState, proof: &ReducedProof) -> String {
    let mut s = String::new();
    let pts = proof_points(state, proof);
    writeln!(s, "goal: {}", state.points().pretty(state.graph.statement(proof.goal))).unwrap();
    writeln!(s, "points: {}", pts.iter().map(|&p| crate::model::display_name(state.points().name(p))).collect::<Vec<_>>().join(" ")).unwrap();
    writeln!(s, "steps: {}", proof.steps.len()).unwrap();
    writeln!(s, "widths: {:?}", state.graph.width_profile(proof)).unwrap();
    s
}

#[derive(Debug, Clone, Default)]
pub struct RunTimings {
    pub seconds: f64,
    pub profile: bool,
}

pub fn run_infos(state: &ProofState, timings: &RunTimings) -> String {
    let mut s = String::new();
    let d = &state.diagram;
    writeln!(s, "problem: {}", state.problem.name).unwrap();
    writeln!(s, "status: {}", state.status).unwrap();
    writeln!(s, "seed: {}", d.seed).unwrap();
    writeln!(s, "attempts_used: {}", d.attempts_used).unwrap();
    writeln!(s, "rounds: {}", state.round).unwrap();
    writeln!(s, "statements: {}", state.graph.len()).unwrap();
    writeln!(s, "dependencies: {}", state.graph.dependencies().len()).unwrap();
    writeln!(s, "rule_applications: {}", state.rule_applications).unwrap();
    writeln!(s, "rejected_instances: {}", state.rejected).unwrap();
    writeln!(s, "errors: {}", state.errors.len()).unwrap();
    for b in &d.branches {
        writeln!(s, "branch: {} chose {} of {}", state.points().name(b.point), b.chosen, b.candidates).unwrap();
    }
    writeln!(s, "runtime_seconds: {:.3}", timings.seconds).unwrap();
    if timings.profile {
        s.push_str("matching profile:\n");
        s.push_str(&state.profile.report());
    }
    s
}

fn html_page(title: &str, json: &serde_json::Value, body: &str, script: &str) -> String {
    let data = json.to_string().replace("</", "<\\/");
    format!(
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>{title}</title>\n<style>body{{font-family:sans-serif;margin:1em}} .node{{font-size:12px}} pre{{background:#f6f6f6;padding:.5em}}</style>\n</head><body>\n<h1>{title}</h1>\n{body}\n<script id=\"data\" type=\"application/json\">{data}</script>\n<script>\nconst DATA = JSON.parse(document.getElementById('data').textContent);\n{script}\n</script>\n</body></html>\n"
    )
}

const GRAPH_SCRIPT: &str = r#"function render(g, el) {
  if (!g) { el.textContent = 'no graph'; return; }
  const depth = {};
  const byConcl = {};
  g.edges.forEach(e => { (byConcl[e.conclusion] = byConcl[e.conclusion] || []).push(e); });
  const d = id => {
    if (depth[id] !== undefined) return depth[id];
    depth[id] = 0;
    const es = byConcl[id] || [];
    if (es.length) depth[id] = 1 + Math.max(...es[0].premises.map(d), -1);
    return depth[id];
  };
  g.nodes.forEach(n => d(n.id));
  const cols = {};
  g.nodes.forEach(n => { (cols[depth[n.id]] = cols[depth[n.id]] || []).push(n); });
  const ns = 'http://www.w3.org/2000/svg';
  const svg = document.createElementNS(ns, 'svg');
  const pos = {};
  let w = 0, h = 0;
  Object.keys(cols).forEach(c => cols[c].forEach((n, i) => {
    pos[n.id] = [40 + c * 220, 30 + i * 24]; w = Math.max(w, pos[n.id][0] + 220); h = Math.max(h, pos[n.id][1] + 30);
  }));
  svg.setAttribute('width', w); svg.setAttribute('height', h);
  g.edges.forEach(e => e.premises.forEach(p => {
    const l = document.createElementNS(ns, 'line');
    const [x1, y1] = pos[p] || [0, 0], [x2, y2] = pos[e.conclusion] || [0, 0];
    l.setAttribute('x1', x1); l.setAttribute('y1', y1); l.setAttribute('x2', x2); l.setAttribute('y2', y2);
    l.setAttribute('stroke', '#bbb');
    const t = document.createElementNS(ns, 'title'); t.textContent = e.reason; l.appendChild(t);
    svg.appendChild(l);
  }));
  g.nodes.forEach(n => {
    const t = document.createElementNS(ns, 'text');
    t.setAttribute('x', pos[n.id][0]); t.setAttribute('y', pos[n.id][1]); t.setAttribute('class', 'node');
    t.setAttribute('fill', n.root ? (n.aux ? '#a50' : '#05a') : 'black');
    t.textContent = n.pretty; svg.appendChild(t);
  });
  el.appendChild(svg);
}"#;

/// Paths of the files written for one problem.
#[derive(Debug, Clone)]
pub struct Written {
    pub problem_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Writes the environment tree: rules and definitions at the top (kept if present), then the problem folder.
pub fn write_environment(
    state: &ProofState,
    env_dir: &Path,
    rules_text: &str,
    defs_text: &str,
    timings: &RunTimings,
) -> Result<Written, OutputError> {
    let dir = env_dir.join(&state.problem.name);
    let html = dir.join("html");
    std::fs::create_dir_all(&html)?;
    let mut files = Vec::new();
    let mut put = |path: PathBuf, text: &str| -> Result<(), OutputError> {
        std::fs::write(&path, text)?;
        files.push(path);
        Ok(())
    };
    for (name, text) in [("rules.txt", rules_text), ("defs.txt", defs_text)] {
        if !env_dir.join(name).exists() {
            put(env_dir.join(name), text)?;
        }
    }
    let goals: String = state.problem.goals.iter().map(|g| state.points().text(g) + "\n").collect();
    put(dir.join("goals.txt"), &goals)?;
    put(dir.join("construction_figure.svg"), &figure_svg(state, FigureContent::Construction, &BTreeSet::new()))?;
    let full = figure_svg(state, FigureContent::Full, &BTreeSet::new());
    put(html.join("figure.svg"), &full)?;
    put(dir.join("run_infos.txt"), &run_infos(state, timings))?;
    let proofs = state.proofs();
    let mut listing = String::new();
    for p in &proofs {
        listing.push_str(&proof_text(state, p)?);
    }
    if let Some(p) = proofs.first() {
        put(dir.join("proof_steps.txt"), &listing)?;
        put(dir.join("proof_figure.txt"), &proof_figure_text(state, p))?;
        put(dir.join("proof_figure.svg"), &figure_svg(state, FigureContent::Full, &proof_points(state, p)))?;
    } else {
        for stale in ["proof_steps.txt", "proof_figure.txt", "proof_figure.svg"] {
            let _ = std::fs::remove_file(dir.join(stale));
        }
    }
    let symbols = state.symbols.to_json(state.points());
    let dependency = state.graph.to_json(state.points(), proofs.first());
    put(
        html.join("symbols_graph.html"),
        &html_page(
            "Symbols graph",
            &symbols,
            "<div id=\"out\"></div>",
            "const out = document.getElementById('out');\nfor (const k of ['lines', 'circles']) { const h = document.createElement('h2'); h.textContent = k; out.appendChild(h); DATA[k].forEach(o => { const p = document.createElement('p'); p.textContent = o.id + ': ' + o.points.join(' ') + (o.center ? ' (center ' + o.center + ')' : ''); out.appendChild(p); }); }",
        ),
    )?;
    put(
        html.join("dependency_graph.html"),
        &html_page(
            "Dependency graph",
            &dependency,
            "<h2>Reduced</h2><div id=\"reduced\"></div><h2>Full</h2><div id=\"full\"></div>",
            &format!("{GRAPH_SCRIPT}\nrender(DATA.reduced, document.getElementById('reduced'));\nrender(DATA.full, document.getElementById('full'));"),
        ),
    )?;
    let index_body = format!(
        "<p>{} : {}</p>\n<p><a href=\"symbols_graph.html\">symbols graph</a> | <a href=\"dependency_graph.html\">dependency graph</a></p>\n<img src=\"figure.svg\" alt=\"figure\">\n<pre id=\"proof\"></pre>",
        state.problem.name, state.status
    );
    let index_json = serde_json::json!({ "problem": state.problem.to_text(), "status": state.status, "proof": listing });
    put(
        html.join("index.html"),
        &html_page("Problem", &index_json, &index_body, "document.getElementById('proof').textContent = DATA.proof || 'no proof';"),
    )?;
    Ok(Written { problem_dir: dir, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validator_accepts_forward_references_only() {
        let ok = "==\n * From theorem premises:\nA B : Points\nx [00]\n\n * Proof steps:\n001. x [00] (r01)⇒  y [01]\n002. y [01] & x [00] (r02)⇒  z [02]\n==\n";
        assert_eq!(validate_proof_text(ok), Ok(2));
        let bad = ok.replace("001. x [00]", "001. z [02]");
        assert!(validate_proof_text(&bad).is_err());
    }

    #[test]
    fn extremes_pick_the_farthest_pair() {
        let pts = [Pt::new(0.0, 0.0), Pt::new(1.0, 1.0), Pt::new(3.0, 3.0)];
        assert_eq!(extremes(&pts), Some((pts[0], pts[2])));
        assert_eq!(extremes(&pts[..1]), None);
    }
}
