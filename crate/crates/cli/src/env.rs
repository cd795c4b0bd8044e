//! Environment resolution and headless runs.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use log::info;

use geoprove_core::agents::{parse_script, run_agent, AgentKind, Budget, RunOutcome, Session};
use geoprove_core::data;
use geoprove_core::ggb::import_folder;
use geoprove_core::kernel::{KernelOptions, ProofState, Status};
use geoprove_core::output::{write_environment, RunTimings};
use geoprove_core::parse::{find_problem, parse_definitions, parse_problem, parse_rules};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogLevel {
    Quiet,
    Info,
    Debug,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AgentArg {
    Ddarn,
    Human,
    Flemmard,
}

impl From<AgentArg> for AgentKind {
    fn from(a: AgentArg) -> AgentKind {
        match a {
            AgentArg::Ddarn => AgentKind::Ddarn,
            AgentArg::Human => AgentKind::Human,
            AgentArg::Flemmard => AgentKind::Flemmard,
        }
    }
}

/// Solve a geometry problem from an environment folder.
#[derive(Debug, Clone, Parser)]
#[command(name = "geoprove", version)]
pub struct Args {
    /// Environment folder; outputs are written here.
    pub env: PathBuf,
    /// Problem name: a folder with problem.ggb or problem.txt, or an entry of problems.txt.
    pub problem: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = AgentArg::Ddarn)]
    pub agent: AgentArg,
    #[arg(long)]
    pub rules: Option<PathBuf>,
    #[arg(long)]
    pub defs: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub max_rounds: usize,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long, value_enum, default_value_t = LogLevel::Info)]
    pub log: LogLevel,
    #[arg(long)]
    pub show_ar_matrices: bool,
    #[arg(long)]
    pub profile_matching: bool,
    /// Action script for the human agent, one action per line.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Serve the session API on this port instead of running headless.
    #[arg(long)]
    pub serve: Option<u16>,
    /// Match by testing every candidate on the diagram instead of using the index.
    #[arg(long)]
    pub no_cache: bool,
}

/// First existing file among the candidates, with its text.
fn first_text(candidates: &[PathBuf]) -> Result<Option<(PathBuf, String)>> {
    for c in candidates {
        if c.is_file() {
            let t = std::fs::read_to_string(c).with_context(|| format!("reading {}", c.display()))?;
            return Ok(Some((c.clone(), t)));
        }
    }
    Ok(None)
}

pub struct Resolved {
    pub rules_text: String,
    pub defs_text: String,
    pub state: ProofState,
}

/// Loads rules, definitions and the problem; the problem folder overrides the environment root.
pub fn resolve(args: &Args) -> Result<Resolved> {
    let pdir = args.env.join(&args.problem);
    let pick = |flag: &Option<PathBuf>, file: &str, builtin: &str| -> Result<String> {
        if let Some(f) = flag {
            return std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()));
        }
        Ok(first_text(&[pdir.join(file), args.env.join(file)])?.map_or_else(|| builtin.to_string(), |(_, t)| t))
    };
    let rules_text = pick(&args.rules, "rules.txt", data::RULES)?;
    let defs_text = pick(&args.defs, "defs.txt", data::DEFS)?;
    let defs = parse_definitions(&defs_text).context("definitions")?;
    let rules = parse_rules(&rules_text).context("rules")?;
    let options = KernelOptions { use_cache: !args.no_cache, cache_dir: Some(args.env.join(".cache")) };
    let state = if pdir.join("problem.ggb").is_file() {
        let imported = import_folder(&pdir, &defs)?;
        for (from, to) in &imported.renames {
            info!("label {from} renamed to {to}");
        }
        ProofState::with_diagram(imported.problem, defs, rules, imported.diagram, options)?
    } else {
        let problem = if let Some((_, text)) = first_text(&[pdir.join("problem.txt")])? {
            parse_problem(text.trim(), &args.problem, &defs)?
        } else {
            let text = first_text(&[args.env.join("problems.txt")])?.map_or_else(|| data::PROBLEMS.to_string(), |(_, t)| t);
            find_problem(&text, &args.problem, &defs)?
        };
        ProofState::new(problem, defs, rules, args.seed, options)?
    };
    Ok(Resolved { rules_text, defs_text, state })
}

#[derive(Debug)]
pub struct Outcome {
    pub run: RunOutcome,
    pub problem_dir: PathBuf,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.run.status == Status::Solved {
            0
        } else {
            1
        }
    }
}

pub fn budget(args: &Args) -> Budget {
    Budget { max_rounds: args.max_rounds, timeout: args.timeout.map(Duration::from_secs_f64) }
}

/// Runs the selected agent headless and writes every output.
pub fn solve(args: &Args) -> Result<Outcome> {
    let t = Instant::now();
    let resolved = resolve(args)?;
    let mut session = Session::new(resolved.state);
    let actions = match (&args.script, args.agent) {
        (Some(p), _) => parse_script(&std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)?,
        (None, AgentArg::Human) => bail!("the human agent needs --script or --serve"),
        _ => vec![],
    };
    let run = run_agent(args.agent.into(), &mut session, budget(args), actions)?;
    if run.budget_exceeded {
        info!("budget exhausted after {} rounds", run.rounds);
    }
    if args.show_ar_matrices {
        println!("{}", session.state.ar.dump());
    }
    if args.profile_matching {
        println!("{}", session.state.profile.report());
    }
    let written = finish(&session, args, &resolved.rules_text, &resolved.defs_text, t.elapsed().as_secs_f64())?;
    Ok(Outcome { run, problem_dir: written })
}

pub fn finish(session: &Session, args: &Args, rules_text: &str, defs_text: &str, seconds: f64) -> Result<PathBuf> {
    let timings = RunTimings { seconds, profile: args.profile_matching };
    let w = write_environment(&session.state, &args.env, rules_text, defs_text, &timings)?;
    Ok(w.problem_dir)
}

pub fn init_logging(level: LogLevel) {
    let filter = match level {
        LogLevel::Quiet => "error",
        LogLevel::Info => "info",
        LogLevel::Debug => "debug",
    };
    let _ = env_logger::Builder::new().parse_filters(filter).format_timestamp(None).try_init();
}

/// Whether a path looks like an environment folder that can be written to.
pub fn ensure_env(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))
}
