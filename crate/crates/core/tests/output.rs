use geoprove_core::data;
use geoprove_core::kernel::{KernelOptions, ProofState, Status};
use geoprove_core::output::{proof_text, run_infos, validate_proof_text, write_environment, RunTimings};
use geoprove_core::parse::{find_problem, parse_definitions, parse_rules};

fn solved(name: &str, rounds: usize) -> ProofState {
    let defs = parse_definitions(data::DEFS).unwrap();
    let problem = find_problem(data::PROBLEMS, name, &defs).unwrap();
    let mut s = ProofState::new(problem, defs, parse_rules(data::RULES).unwrap(), 0, KernelOptions::default()).unwrap();
    while s.status == Status::Running && s.round < rounds {
        s.saturation_step();
    }
    s
}

#[test]
fn listing_has_premises_aux_and_numbered_steps() {
    let s = solved("orthocenter_aux", 100);
    let p = &s.proofs()[0];
    let text = proof_text(&s, p).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("=========="));
    assert_eq!(lines[1], " * From theorem premises:");
    assert_eq!(lines[2], "A B C D : Points");
    assert!(text.contains(" * Auxiliary Constructions:\nE : Points"), "{text}");
    assert!(text.contains(" * Proof steps:\n001. "), "{text}");
    let n = validate_proof_text(&text).unwrap();
    assert_eq!(n, p.steps.len());
    // every step names a reason and ends in a numbered conclusion
    for l in lines.iter().filter(|l| l.len() > 4 && l[..3].chars().all(|c| c.is_ascii_digit())) {
        assert!(l.contains(")⇒  "), "{l}");
        assert!(l.ends_with(']'), "{l}");
    }
    let last = lines.iter().rev().find(|l| l.contains("⇒")).unwrap();
    assert!(last.contains("AD ⟂ BC"), "{last}");
}

#[test]
fn validator_rejects_references_to_later_statements() {
    let s = solved("orthocenter_aux", 100);
    let text = proof_text(&s, &s.proofs()[0]).unwrap();
    let broken = text.replacen("001. ", "001. x [99] & ", 1);
    assert!(validate_proof_text(&broken).is_err());
    assert!(validate_proof_text("no proof here").is_err());
}

#[test]
fn environment_tree_is_written() {
    let s = solved("orthocenter_aux", 100);
    let env = tempfile::tempdir().unwrap();
    std::fs::write(env.path().join("rules.txt"), "custom").unwrap();
    let w = write_environment(&s, env.path(), data::RULES, data::DEFS, &RunTimings { seconds: 0.5, profile: true }).unwrap();
    let dir = env.path().join("orthocenter_aux");
    assert_eq!(w.problem_dir, dir);
    for f in [
        "goals.txt",
        "construction_figure.svg",
        "run_infos.txt",
        "proof_steps.txt",
        "proof_figure.txt",
        "proof_figure.svg",
        "html/figure.svg",
        "html/index.html",
        "html/symbols_graph.html",
        "html/dependency_graph.html",
    ] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    assert_eq!(std::fs::read_to_string(env.path().join("rules.txt")).unwrap(), "custom");
    assert_eq!(std::fs::read_to_string(env.path().join("defs.txt")).unwrap(), data::DEFS);
    assert_eq!(std::fs::read_to_string(dir.join("goals.txt")).unwrap(), "perp a d b c\n");
    let fig = std::fs::read_to_string(dir.join("proof_figure.svg")).unwrap();
    let labels = fig.matches("</text>").count();
    assert_eq!(labels, 5);
    for name in ["A", "B", "C", "D", "E"] {
        assert!(fig.contains(&format!(">{name}</text>")), "{name}");
    }
    let steps = std::fs::read_to_string(dir.join("proof_steps.txt")).unwrap();
    assert!(validate_proof_text(&steps).is_ok());
}

#[test]
fn unsolved_rerun_removes_stale_proof() {
    let env = tempfile::tempdir().unwrap();
    let done = solved("orthocenter_aux", 100);
    write_environment(&done, env.path(), data::RULES, data::DEFS, &RunTimings::default()).unwrap();
    let fresh = solved("orthocenter_aux", 0);
    write_environment(&fresh, env.path(), data::RULES, data::DEFS, &RunTimings::default()).unwrap();
    let dir = env.path().join("orthocenter_aux");
    assert!(!dir.join("proof_steps.txt").exists());
    assert!(!dir.join("proof_figure.svg").exists());
    assert!(dir.join("run_infos.txt").exists());
}

#[test]
fn run_infos_record_seed_and_counts() {
    let s = solved("orthocenter_aux", 100);
    let info = run_infos(&s, &RunTimings { seconds: 1.25, profile: false });
    assert!(info.contains("status: solved"));
    assert!(info.contains("seed: 0"));
    assert!(info.contains(&format!("rounds: {}", s.round)));
    assert!(info.contains("runtime_seconds: 1.250"));
    assert!(!info.contains("matching profile"));
}

#[test]
fn graphs_html_embeds_json() {
    let s = solved("orthocenter_aux", 100);
    let env = tempfile::tempdir().unwrap();
    write_environment(&s, env.path(), data::RULES, data::DEFS, &RunTimings::default()).unwrap();
    let html = std::fs::read_to_string(env.path().join("orthocenter_aux/html/dependency_graph.html")).unwrap();
    let start = html.find("application/json\">").unwrap() + "application/json\">".len();
    let end = start + html[start..].find("</script>").unwrap();
    let v: serde_json::Value = serde_json::from_str(&html[start..end].replace("<\\/", "</")).unwrap();
    assert!(v["full"]["nodes"].as_array().unwrap().len() > v["reduced"]["nodes"].as_array().unwrap().len());
}
