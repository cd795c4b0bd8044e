use std::io::Write;
use std::path::Path;

use geoprove_core::data;
use geoprove_core::ggb::{import_folder, load_ggb, GgbError};
use geoprove_core::kernel::{KernelOptions, ProofState, Status};
use geoprove_core::parse::{parse_definitions, parse_rules, DefinitionSet};

fn defs() -> DefinitionSet {
    parse_definitions(data::DEFS).unwrap()
}

fn doc(body: &str) -> String {
    format!("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<geogebra format=\"5.0\"><construction title=\"\">\n{body}\n</construction></geogebra>")
}

fn point(label: &str, x: f64, y: f64) -> String {
    format!("<element type=\"point\" label=\"{label}\"><coords x=\"{x}\" y=\"{y}\" z=\"1\"/></element>")
}

fn write_ggb(path: &Path, files: &[(&str, &str)]) {
    let mut zip = zip::ZipWriter::new(std::fs::File::create(path).unwrap());
    let opts = zip::write::SimpleFileOptions::default();
    for (name, text) in files {
        zip.start_file(*name, opts).unwrap();
        zip.write_all(text.as_bytes()).unwrap();
    }
    zip.finish().unwrap();
}

fn folder(xml: &str, goals: Option<&str>) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    write_ggb(&dir.path().join("problem.ggb"), &[("geogebra.xml", xml)]);
    if let Some(g) = goals {
        std::fs::write(dir.path().join("goals.txt"), g).unwrap();
    }
    dir
}

fn midpoint_xml() -> String {
    doc(&[
        point("A", 0.0, 0.0),
        point("B", 4.0, 0.0),
        point("C", 1.0, 3.0),
        "<command name=\"Midpoint\"><input a0=\"A\" a1=\"B\"/><output a0=\"M\"/></command>".into(),
        point("M", 2.0, 0.0),
    ]
    .join("\n"))
}

#[test]
fn midpoint_construction_imports_and_solves() {
    let dir = folder(&midpoint_xml(), Some("cong a m m b\n"));
    let imported = import_folder(dir.path(), &defs()).unwrap();
    let text = imported.problem.to_text();
    assert!(text.contains("midpoint m a b"), "{text}");
    assert_eq!(imported.problem.points.len(), 4);
    assert_eq!(imported.diagram.coords[3].x, 2.0);
    assert!(imported.renames.is_empty() || imported.renames.keys().all(|k| k.chars().any(|c| c.is_uppercase())));
    let mut s = ProofState::with_diagram(imported.problem, defs(), parse_rules(data::RULES).unwrap(), imported.diagram, KernelOptions::default()).unwrap();
    while s.status == Status::Running {
        s.saturation_step();
    }
    assert_eq!(s.status, Status::Solved);
}

#[test]
fn intersection_of_perpendiculars_gives_orthocenter() {
    let xml = doc(&[
        point("A", 0.0, 0.0),
        point("B", 4.0, 0.0),
        point("C", 1.0, 3.0),
        "<command name=\"Line\"><input a0=\"A\" a1=\"C\"/><output a0=\"f\"/></command>".into(),
        "<command name=\"Line\"><input a0=\"A\" a1=\"B\"/><output a0=\"g\"/></command>".into(),
        "<command name=\"PerpendicularLine\"><input a0=\"B\" a1=\"f\"/><output a0=\"h\"/></command>".into(),
        "<command name=\"PerpendicularLine\"><input a0=\"C\" a1=\"g\"/><output a0=\"k\"/></command>".into(),
        "<command name=\"Intersect\"><input a0=\"h\" a1=\"k\"/><output a0=\"H_1\"/></command>".into(),
        point("H_1", 1.0, 1.0),
    ]
    .join("\n"));
    let dir = folder(&xml, Some("perp A H_1 B C"));
    let imported = import_folder(dir.path(), &defs()).unwrap();
    assert_eq!(imported.renames.get("H_1").map(String::as_str), Some("h_1"));
    let text = imported.problem.to_text();
    assert!(text.contains("on_tline h_1 b a c"), "{text}");
    assert!(text.ends_with("perp a h_1 b c"), "{text}");
}

#[test]
fn archive_without_document_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("problem.ggb");
    write_ggb(&path, &[("geogebra_thumbnail.png", "x")]);
    assert!(matches!(load_ggb(&path), Err(GgbError::MissingConstructionDocument)));
}

#[test]
fn non_zip_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("problem.ggb");
    std::fs::write(&path, "not a zip").unwrap();
    assert!(matches!(load_ggb(&path), Err(GgbError::NotAnArchive(_))));
}

#[test]
fn malformed_xml_is_rejected() {
    let dir = folder("<geogebra><construction>", Some("cong a m m b"));
    assert!(matches!(import_folder(dir.path(), &defs()), Err(GgbError::MalformedXml(_))));
}

#[test]
fn unsupported_tool_is_named() {
    let xml = doc(&[
        point("A", 0.0, 0.0),
        point("B", 4.0, 0.0),
        "<command name=\"Conic\"><input a0=\"A\" a1=\"B\"/><output a0=\"c\"/></command>".into(),
        "<command name=\"Point\"><input a0=\"c\"/><output a0=\"P\"/></command>".into(),
        point("P", 1.0, 1.0),
    ]
    .join("\n"));
    let dir = folder(&xml, Some("cong a p b p"));
    match import_folder(dir.path(), &defs()) {
        Err(GgbError::UnsupportedTool(t)) => assert_eq!(t, "Conic"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_goals_file_is_an_error() {
    let dir = folder(&midpoint_xml(), None);
    assert!(matches!(import_folder(dir.path(), &defs()), Err(GgbError::MissingGoalsFile)));
}

#[test]
fn false_goal_is_reported() {
    let dir = folder(&midpoint_xml(), Some("perp a b a c"));
    assert!(matches!(import_folder(dir.path(), &defs()), Err(GgbError::GoalNumericallyFalse)));
}
