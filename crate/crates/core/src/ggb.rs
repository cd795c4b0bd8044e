//! Import of GeoGebra constructions (`.ggb` archives) as problems with pinned coordinates.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use crate::parse::{parse_problem, DefinitionSet, ParseError, ProblemSpec};
use crate::sketch::{build_diagram, Diagram, SketchError};

#[derive(Debug, thiserror::Error)]
pub enum GgbError {
    #[error("not a zip archive: {0}")]
    NotAnArchive(String),
    #[error("archive has no geogebra.xml")]
    MissingConstructionDocument,
    #[error("malformed construction xml: {0}")]
    MalformedXml(String),
    #[error("unsupported tool `{0}`")]
    UnsupportedTool(String),
    #[error("goals file not found")]
    MissingGoalsFile,
    #[error("a goal is false on the construction")]
    GoalNumericallyFalse,
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Sketch(SketchError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GgbElement {
    pub label: String,
    /// Command name, or `FreePoint` for a point with no defining command.
    pub tool: String,
    pub inputs: Vec<String>,
    /// Point coordinates; None for lines and circles.
    pub coords: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GgbConstruction {
    pub elements: Vec<GgbElement>,
}

const DOCUMENT: &str = "geogebra.xml";

pub fn load_ggb(path: &Path) -> Result<GgbConstruction, GgbError> {
    let file = std::fs::File::open(path)?;
    let mut zip = zip::ZipArchive::new(file).map_err(|e| GgbError::NotAnArchive(e.to_string()))?;
    let mut entry = zip.by_name(DOCUMENT).map_err(|_| GgbError::MissingConstructionDocument)?;
    let mut xml = String::new();
    entry.read_to_string(&mut xml).map_err(|e| GgbError::MalformedXml(e.to_string()))?;
    parse_construction(&xml)
}

/// Reads the `<construction>` element of a GeoGebra document.
pub fn parse_construction(xml: &str) -> Result<GgbConstruction, GgbError> {
    let doc = roxmltree::Document::parse(xml).map_err(|e| GgbError::MalformedXml(e.to_string()))?;
    let cons = doc
        .descendants()
        .find(|n| n.has_tag_name("construction"))
        .ok_or_else(|| GgbError::MalformedXml("no <construction> element".into()))?;
    let mut point_xy: HashMap<String, (f64, f64)> = HashMap::new();
    let mut types: HashMap<String, String> = HashMap::new();
    for el in cons.children().filter(|n| n.has_tag_name("element")) {
        let label = el.attribute("label").unwrap_or_default().to_string();
        let ty = el.attribute("type").unwrap_or_default().to_string();
        if ty == "point" {
            let c = el
                .children()
                .find(|n| n.has_tag_name("coords"))
                .ok_or_else(|| GgbError::MalformedXml(format!("point {label} has no coords")))?;
            let num = |k: &str| -> Result<f64, GgbError> {
                c.attribute(k)
                    .unwrap_or("1")
                    .parse::<f64>()
                    .map_err(|_| GgbError::MalformedXml(format!("bad {k} on {label}")))
            };
            let (x, y, z) = (num("x")?, num("y")?, num("z")?);
            if z == 0.0 || !(x / z).is_finite() || !(y / z).is_finite() {
                return Err(GgbError::MalformedXml(format!("point {label} is at infinity")));
            }
            point_xy.insert(label.clone(), (x / z, y / z));
        }
        types.insert(label, ty);
    }
    let attrs = |n: roxmltree::Node| -> Vec<String> {
        let mut v: Vec<(usize, String)> = n
            .attributes()
            .filter_map(|a| Some((a.name().strip_prefix('a')?.parse().ok()?, a.value().to_string())))
            .collect();
        v.sort();
        v.into_iter().map(|(_, s)| s).collect()
    };
    let mut defined: HashSet<String> = HashSet::new();
    let mut elements = Vec::new();
    for node in cons.children().filter(|n| n.is_element()) {
        if node.has_tag_name("command") {
            let tool = node.attribute("name").unwrap_or_default().to_string();
            let inputs = node.children().find(|n| n.has_tag_name("input")).map(attrs).unwrap_or_default();
            let outputs = node.children().find(|n| n.has_tag_name("output")).map(attrs).unwrap_or_default();
            for out in outputs.into_iter().filter(|o| !o.is_empty()) {
                defined.insert(out.clone());
                elements.push(GgbElement {
                    coords: point_xy.get(&out).copied(),
                    label: out,
                    tool: tool.clone(),
                    inputs: inputs.clone(),
                });
            }
        } else if node.has_tag_name("element") {
            let label = node.attribute("label").unwrap_or_default();
            if defined.contains(label) {
                continue;
            }
            let ty = types.get(label).map(String::as_str).unwrap_or_default();
            if ty != "point" {
                return Err(GgbError::UnsupportedTool(format!("free {ty}")));
            }
            defined.insert(label.to_string());
            elements.push(GgbElement {
                label: label.to_string(),
                tool: "FreePoint".into(),
                inputs: vec![],
                coords: point_xy.get(label).copied(),
            });
        }
    }
    let mut seen = HashSet::new();
    for e in &elements {
        if !seen.insert(&e.label) {
            return Err(GgbError::MalformedXml(format!("label {} defined twice", e.label)));
        }
    }
    Ok(GgbConstruction { elements })
}

/// Lowercase identifier for a GeoGebra label, unique among `taken`.
pub fn sanitize_label(label: &str, taken: &HashSet<String>) -> String {
    let mut s: String = label
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    s = s.trim_matches('_').to_string();
    if !s.starts_with(|c: char| c.is_ascii_alphabetic()) {
        s = format!("p{s}");
    }
    if !taken.contains(&s) {
        return s;
    }
    (1..).map(|i| format!("{s}_{i}")).find(|c| !taken.contains(c)).expect("unbounded")
}

/// Lines and circles known by their defining points.
#[derive(Debug, Clone)]
enum Locus {
    Through(String, String),
    Tline(String, String, String),
    Pline(String, String, String),
    Bline(String, String),
    Bisector(String, String, String),
    Circle(String, String),
}

impl Locus {
    /// A pair whose direction is parallel (`false`) or perpendicular (`true`) to the line.
    fn direction(&self) -> Option<(&str, &str, bool)> {
        match self {
            Locus::Through(a, b) | Locus::Pline(_, a, b) => Some((a, b, false)),
            Locus::Tline(_, a, b) | Locus::Bline(a, b) => Some((a, b, true)),
            _ => None,
        }
    }

    fn construction(&self, x: &str) -> String {
        match self {
            Locus::Through(a, b) => format!("on_line {x} {a} {b}"),
            Locus::Tline(p, a, b) => format!("on_tline {x} {p} {a} {b}"),
            Locus::Pline(p, a, b) => format!("on_pline {x} {p} {a} {b}"),
            Locus::Bline(a, b) => format!("on_bline {x} {a} {b}"),
            Locus::Bisector(a, b, c) => format!("angle_bisector {x} {a} {b} {c}"),
            Locus::Circle(o, a) => format!("on_circle {x} {o} {a}"),
        }
    }
}

#[derive(Debug)]
pub struct Imported {
    pub problem: ProblemSpec,
    pub diagram: Diagram,
    /// GeoGebra label to point name, for labels that changed.
    pub renames: BTreeMap<String, String>,
}

/// Converts a construction and goals text into a problem over the drawn coordinates.
pub fn to_problem(
    g: &GgbConstruction,
    goals_text: Option<&str>,
    name: &str,
    defs: &DefinitionSet,
) -> Result<Imported, GgbError> {
    let goals_text = goals_text.ok_or(GgbError::MissingGoalsFile)?;
    let mut taken: HashSet<String> = HashSet::new();
    let mut names: HashMap<String, String> = HashMap::new();
    let mut renames = BTreeMap::new();
    let mut loci: HashMap<String, Locus> = HashMap::new();
    let mut clauses: Vec<String> = Vec::new();

    for e in &g.elements {
        let pt = |l: &String| names.get(l).cloned().ok_or_else(|| GgbError::UnknownObject(l.clone()));
        let locus = |l: &String| loci.get(l).cloned().ok_or_else(|| GgbError::UnknownObject(l.clone()));
        let unsupported = || GgbError::UnsupportedTool(e.tool.clone());
        let new_locus = match (e.tool.as_str(), e.inputs.len()) {
            ("Line", 2) | ("Segment", 2) => Some(Locus::Through(pt(&e.inputs[0])?, pt(&e.inputs[1])?)),
            ("PerpendicularLine", 2) | ("OrthogonalLine", 2) | ("ParallelLine", 2) => {
                let p = pt(&e.inputs[0])?;
                let l = locus(&e.inputs[1])?;
                let (a, b, perp) = l.direction().ok_or_else(unsupported)?;
                let (a, b) = (a.to_string(), b.to_string());
                if perp ^ (e.tool == "ParallelLine") {
                    Some(Locus::Pline(p, a, b))
                } else {
                    Some(Locus::Tline(p, a, b))
                }
            }
            ("PerpendicularBisector", 2) | ("LineBisector", 2) => Some(Locus::Bline(pt(&e.inputs[0])?, pt(&e.inputs[1])?)),
            ("AngleBisector", 3) => Some(Locus::Bisector(pt(&e.inputs[0])?, pt(&e.inputs[1])?, pt(&e.inputs[2])?)),
            ("Circle", 2) => Some(Locus::Circle(pt(&e.inputs[0])?, pt(&e.inputs[1])?)),
            _ => None,
        };
        if let Some(l) = new_locus {
            loci.insert(e.label.clone(), l);
            continue;
        }
        let x = sanitize_label(&e.label, &taken);
        let c = match (e.tool.as_str(), e.inputs.len()) {
                ("FreePoint", 0) => vec![format!("free {x}")],
                ("Midpoint", 2) => vec![format!("midpoint {x} {} {}", pt(&e.inputs[0])?, pt(&e.inputs[1])?)],
                ("Intersect", 2) | ("Intersect", 3) => {
                    let l1 = locus(&e.inputs[0])?;
                    let l2 = locus(&e.inputs[1])?;
                    vec![l1.construction(&x), l2.construction(&x)]
                }
                ("Point", 1) => vec![locus(&e.inputs[0])?.construction(&x)],
                ("Reflect", 2) | ("Mirror", 2) => match locus(&e.inputs[1])? {
                    Locus::Through(a, b) => vec![format!("reflect {x} {} {a} {b}", pt(&e.inputs[0])?)],
                    _ => return Err(unsupported()),
                },
                _ => return Err(unsupported()),
            };
            taken.insert(x.clone());
            if x != e.label {
                renames.insert(e.label.clone(), x.clone());
            }
            names.insert(e.label.clone(), x.clone());
            let (px, py) = e.coords.ok_or_else(|| GgbError::MalformedXml(format!("point {} has no coords", e.label)))?;
            clauses.push(format!("{x}@{px}_{py} = {}", c.join(", ")));
    }

    let goals: Vec<String> = goals_text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|w| names.get(w).map_or(w, String::as_str))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let mut text = clauses.join("; ");
    if !goals.is_empty() {
        text.push_str(" ? ");
        text.push_str(&goals.join("; "));
    }
    let problem = parse_problem(&text, name, defs)?;
    let diagram = match build_diagram(&problem, defs, 0) {
        Ok(d) => d,
        Err(SketchError::GoalNumericallyFalse { .. }) => return Err(GgbError::GoalNumericallyFalse),
        Err(e) => return Err(GgbError::Sketch(e)),
    };
    Ok(Imported { problem, diagram, renames })
}

/// Reads `problem.ggb` and `goals.txt` from a problem folder.
pub fn import_folder(dir: &Path, defs: &DefinitionSet) -> Result<Imported, GgbError> {
    let g = load_ggb(&dir.join("problem.ggb"))?;
    let goals = std::fs::read_to_string(dir.join("goals.txt")).ok();
    let name = dir.file_name().and_then(|s| s.to_str()).unwrap_or("problem");
    to_problem(&g, goals.as_deref(), name, defs)
}
