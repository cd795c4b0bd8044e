//! Agents drive a proof state through actions: DDARN saturates, the human agent
//! executes what it is told, flemmard does nothing.

use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::depgraph::StmtId;
use crate::kernel::{KernelError, ProofState, Status};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum AgentAction {
    MatchAndApplyRule { rule: String },
    RunSaturationStep,
    AddClause { clause: String },
    CheckStatement { statement: String },
    QueryGraphs,
    Stop,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionParseError {
    #[error("line {line}: unknown action `{word}`")]
    UnknownAction { line: usize, word: String },
    #[error("line {line}: `{word}` needs an argument")]
    MissingArgument { line: usize, word: String },
}

impl AgentAction {
    /// Script syntax, one action per line.
    pub fn to_line(&self) -> String {
        match self {
            AgentAction::MatchAndApplyRule { rule } => format!("match {rule}"),
            AgentAction::RunSaturationStep => "step".into(),
            AgentAction::AddClause { clause } => format!("clause {clause}"),
            AgentAction::CheckStatement { statement } => format!("check {statement}"),
            AgentAction::QueryGraphs => "graphs".into(),
            AgentAction::Stop => "stop".into(),
        }
    }

    fn parse_at(line: &str, n: usize) -> Result<AgentAction, ActionParseError> {
        let line = line.trim();
        let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let need = |w: &str| {
            if rest.is_empty() {
                Err(ActionParseError::MissingArgument { line: n, word: w.to_string() })
            } else {
                Ok(rest.to_string())
            }
        };
        match word {
            "match" => Ok(AgentAction::MatchAndApplyRule { rule: need(word)? }),
            "step" => Ok(AgentAction::RunSaturationStep),
            "clause" => Ok(AgentAction::AddClause { clause: need(word)? }),
            "check" => Ok(AgentAction::CheckStatement { statement: need(word)? }),
            "graphs" => Ok(AgentAction::QueryGraphs),
            "stop" => Ok(AgentAction::Stop),
            _ => Err(ActionParseError::UnknownAction { line: n, word: word.to_string() }),
        }
    }
}

impl FromStr for AgentAction {
    type Err = ActionParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgentAction::parse_at(s, 1)
    }
}

/// Blank lines and `#` comments are skipped.
pub fn parse_script(text: &str) -> Result<Vec<AgentAction>, ActionParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| AgentAction::parse_at(l, i + 1))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub symbolic: bool,
    /// None when the diagram cannot evaluate the statement.
    pub numeric: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub action: AgentAction,
    pub new_statements: Vec<String>,
    pub status: Status,
    pub round: usize,
    pub millis: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graphs: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistoryEntry {
    pub action: AgentAction,
    pub report: StepReport,
    /// Statement count after the action; the state is monotonic so this is a snapshot.
    pub statements: usize,
}

/// Symbols and dependency graphs, with the reduced proof when one exists.
pub fn graphs_json(state: &ProofState) -> serde_json::Value {
    let proof = state.proofs().into_iter().next();
    serde_json::json!({
        "symbols": state.symbols.to_json(state.points()),
        "dependency": state.graph.to_json(state.points(), proof.as_ref()),
    })
}

/// A proof state plus the actions taken on it.
pub struct Session {
    pub state: ProofState,
    pub history: Vec<HistoryEntry>,
    pub stopped: bool,
}

impl Session {
    pub fn new(state: ProofState) -> Session {
        Session { state, history: Vec::new(), stopped: false }
    }

    pub fn execute(&mut self, action: AgentAction) -> Result<StepReport, KernelError> {
        let t = Instant::now();
        let before = self.state.graph.len();
        let mut check = None;
        let mut graphs = None;
        match &action {
            AgentAction::MatchAndApplyRule { rule } => {
                self.state.apply_rule(rule)?;
            }
            AgentAction::RunSaturationStep => {
                self.state.saturation_step();
            }
            AgentAction::AddClause { clause } => {
                self.state.add_clause(clause)?;
            }
            AgentAction::CheckStatement { statement } => {
                let (symbolic, numeric) = self.state.check_statement(statement)?;
                check = Some(CheckResult { symbolic, numeric });
            }
            AgentAction::QueryGraphs => graphs = Some(graphs_json(&self.state)),
            AgentAction::Stop => self.stopped = true,
        }
        let new_statements = (before..self.state.graph.len())
            .map(|i| self.state.points().text(self.state.graph.statement(StmtId(i as u32))))
            .collect();
        let report = StepReport {
            action: action.clone(),
            new_statements,
            status: self.state.status,
            round: self.state.round,
            millis: t.elapsed().as_secs_f64() * 1000.0,
            check,
            graphs,
        };
        let mut logged = report.clone();
        logged.graphs = None;
        self.history.push(HistoryEntry { action, report: logged, statements: self.state.graph.len() });
        Ok(report)
    }

    /// Statements and status as they were after action `k` (0-based).
    pub fn snapshot(&self, k: usize) -> Option<serde_json::Value> {
        let h = self.history.get(k)?;
        let texts: Vec<String> = self.state.statement_texts().into_iter().take(h.statements).collect();
        Some(serde_json::json!({
            "action": h.action,
            "report": h.report,
            "statements": texts,
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Ddarn,
    Human,
    Flemmard,
}

impl FromStr for AgentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ddarn" => Ok(AgentKind::Ddarn),
            "human" => Ok(AgentKind::Human),
            "flemmard" => Ok(AgentKind::Flemmard),
            _ => Err(format!("unknown agent `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_rounds: usize,
    pub timeout: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_rounds: 10_000, timeout: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub status: Status,
    pub rounds: usize,
    pub budget_exceeded: bool,
    pub seconds: f64,
    pub rule_applications: usize,
}

/// Runs an agent to completion. The human agent pulls actions from `actions`
/// until it is exhausted or sees `stop`; other agents ignore it.
pub fn run_agent(
    kind: AgentKind,
    session: &mut Session,
    budget: Budget,
    actions: impl IntoIterator<Item = AgentAction>,
) -> Result<RunOutcome, KernelError> {
    let t = Instant::now();
    let over_time = |t: &Instant| budget.timeout.is_some_and(|d| t.elapsed() >= d);
    let mut exceeded = false;
    match kind {
        AgentKind::Flemmard => {}
        AgentKind::Ddarn => {
            while session.state.status == Status::Running {
                if session.state.round >= budget.max_rounds || over_time(&t) {
                    exceeded = true;
                    break;
                }
                session.execute(AgentAction::RunSaturationStep)?;
            }
        }
        AgentKind::Human => {
            for a in actions {
                if over_time(&t) {
                    exceeded = true;
                    break;
                }
                session.execute(a)?;
                if session.stopped {
                    break;
                }
            }
        }
    }
    Ok(RunOutcome {
        status: session.state.status,
        rounds: session.state.round,
        budget_exceeded: exceeded,
        seconds: t.elapsed().as_secs_f64(),
        rule_applications: session.state.rule_applications,
    })
}
