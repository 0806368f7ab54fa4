use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use fsgame_core::bisim::{bisimilar, n_bisimilar};
use fsgame_core::game::{minimal_separating_with, solve_with, GamePosition, SolverConfig, DEFAULT_NODE_LIMIT};
use fsgame_core::hierarchy::{ee_set, v_level, v_level_extended, vv_set, DEFAULT_LEVEL_CEILING, EXTENDED_LEVEL_CEILING};
use fsgame_core::logic::{eval_ml, fo_size, make_phi, parse_ml, MlFormula, SizeConvention};
use fsgame_core::{ModelSet, PointedModel};
use serde::Serialize;

use crate::experiment::{run_experiment, ExperimentOptions};
use crate::format::{read_model, read_model_set, read_position, to_json, ModelJson, VerdictJson};
use crate::play::{play, Outcome, Role};
use crate::CliError;

/// Environment variable overriding the solver's position limit.
pub const MEMO_LIMIT_VAR: &str = "FSGAME_MEMO_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "fsgame", version, about = "Formula-size games for basic modal logic")]
pub struct Cli {
    /// Worker threads for the experiment grid.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Solver position limit (overrides FSGAME_MEMO_LIMIT).
    #[arg(long, global = true)]
    pub node_limit: Option<u64>,
    /// Disable the shared-type shortcut in the solver.
    #[arg(long, global = true)]
    pub no_cutoff: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    #[value(name = "S", alias = "s")]
    S,
    #[value(name = "D", alias = "d")]
    D,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a modal formula at a pointed model.
    Eval {
        model: PathBuf,
        formula: String,
        /// Report the worlds satisfying each subformula.
        #[arg(long)]
        trace: bool,
    },
    /// Decide (n-)bisimilarity of two pointed models.
    Bisim {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        depth: Option<u32>,
        /// Dump the relation layers.
        #[arg(long)]
        witness: bool,
    },
    /// Solve a formula-size game.
    #[command(group(ArgGroup::new("input").required(true).args(["position", "left"])))]
    Solve {
        position: Option<PathBuf>,
        #[arg(long, requires_all = ["right", "m", "k"])]
        left: Option<PathBuf>,
        #[arg(long)]
        right: Option<PathBuf>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Pareto-minimal budgets at which the two sets are separable.
    Minimal {
        left: PathBuf,
        right: PathBuf,
        /// Largest m + k considered.
        #[arg(long)]
        max_size: u32,
    },
    /// Generate hierarchy models or the first-order separator.
    #[command(group(ArgGroup::new("what").required(true).args(["level", "vv", "ee", "phi"])))]
    Gen {
        #[arg(long)]
        level: Option<usize>,
        #[arg(long)]
        vv: Option<usize>,
        #[arg(long)]
        ee: Option<usize>,
        #[arg(long)]
        phi: Option<u32>,
        /// Permit enumerating level 5 (65536 sets).
        #[arg(long)]
        allow_level_5: bool,
        /// Write one model file per member into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the FO-versus-ML succinctness experiment at level n.
    Experiment {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long)]
        k_max: Option<u32>,
        #[arg(long)]
        frontier_budget: Option<u32>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Play a game interactively against the solver.
    Play {
        position: PathBuf,
        #[arg(long = "as", value_enum)]
        role: Side,
    },
}

fn solver_config(cli: &Cli) -> Result<SolverConfig, CliError> {
    let env_limit = match std::env::var(MEMO_LIMIT_VAR) {
        Ok(v) => Some(
            v.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Input(format!("{MEMO_LIMIT_VAR}={v} is not a number")))?,
        ),
        Err(_) => None,
    };
    Ok(SolverConfig {
        node_limit: cli.node_limit.or(env_limit).unwrap_or(DEFAULT_NODE_LIMIT),
        shared_type_cutoff: !cli.no_cutoff,
    })
}

#[derive(Serialize)]
struct TraceEntry {
    formula: String,
    worlds: Vec<String>,
}

#[derive(Serialize)]
struct EvalReport {
    formula: String,
    holds: bool,
    trace: Option<Vec<TraceEntry>>,
}

fn subformulas<'a>(f: &'a MlFormula, out: &mut Vec<&'a MlFormula>) {
    match f {
        MlFormula::And(l, r) | MlFormula::Or(l, r) => {
            subformulas(l, out);
            subformulas(r, out);
        }
        MlFormula::Diamond(g) | MlFormula::Box(g) => subformulas(g, out),
        _ => {}
    }
    if !out.contains(&f) {
        out.push(f);
    }
}

fn eval_cmd(model: &Path, text: &str, trace: bool) -> Result<String, CliError> {
    let p = read_model(model)?;
    let f = parse_ml(text).map_err(|e| CliError::Input(e.to_string()))?;
    let holds = eval_ml(&p, &f).map_err(|e| CliError::Input(e.to_string()))?;
    let trace = if trace {
        let mut subs = Vec::new();
        subformulas(&f, &mut subs);
        let m = p.model();
        let mut entries = Vec::new();
        for g in subs {
            let mut worlds = Vec::new();
            for w in 0..m.world_count() as u32 {
                if eval_ml(&p.repoint(w), g).map_err(|e| CliError::Input(e.to_string()))? {
                    worlds.push(m.world_name(w).to_string());
                }
            }
            entries.push(TraceEntry { formula: g.to_string(), worlds });
        }
        Some(entries)
    } else {
        None
    };
    Ok(to_json(&EvalReport { formula: f.to_string(), holds, trace }))
}

#[derive(Serialize)]
struct BisimReport {
    bisimilar: bool,
    depth: Option<u32>,
    verdict: String,
    witness: Option<Vec<Vec<(String, String)>>>,
}

fn bisim_cmd(a: &Path, b: &Path, depth: Option<u32>, witness: bool) -> Result<String, CliError> {
    let (p, q) = (read_model(a)?, read_model(b)?);
    let input = |e: fsgame_core::ModelError| CliError::Input(e.to_string());
    let (related, verdict) = match depth {
        Some(n) => {
            let r = are_related(&p, &q, n)?;
            (r, format!("{}{n}-bisimilar", if r { "" } else { "not " }))
        }
        None => {
            let r = bisimilar(&p, &q).map_err(input)?;
            (r, format!("{}bisimilar", if r { "" } else { "not " }))
        }
    };
    // on finite models full bisimilarity is reached by depth |W_a| + |W_b|
    let layer_depth = depth.unwrap_or((p.model().world_count() + q.model().world_count()) as u32);
    let witness = match (witness, related) {
        (true, true) => n_bisimilar(&p, &q, layer_depth).map_err(input)?.map(|w| {
            w.layers
                .iter()
                .map(|z| {
                    z.iter()
                        .map(|&(v, u)| (p.model().world_name(v).to_string(), q.model().world_name(u).to_string()))
                        .collect()
                })
                .collect()
        }),
        _ => None,
    };
    Ok(to_json(&BisimReport { bisimilar: related, depth, verdict, witness }))
}

fn are_related(p: &PointedModel, q: &PointedModel, n: u32) -> Result<bool, CliError> {
    Ok(n_bisimilar(p, q, n).map_err(|e| CliError::Input(e.to_string()))?.is_some())
}

fn solve_cmd(pos: &GamePosition, config: SolverConfig) -> Result<String, CliError> {
    let sol = solve_with(pos, config)?;
    Ok(to_json(&VerdictJson::from_solution(&sol)?))
}

#[derive(Serialize)]
struct FrontierJson {
    cs: u32,
    formula: String,
    k: u32,
    m: u32,
    ms: u32,
}

#[derive(Serialize)]
struct MinimalReport {
    frontier: Vec<FrontierJson>,
    max_size: u32,
}

fn minimal_cmd(left: &Path, right: &Path, max_size: u32, config: SolverConfig) -> Result<String, CliError> {
    let (a, b) = (read_model_set(left)?, read_model_set(right)?);
    let frontier = minimal_separating_with(&a, &b, max_size, config)?
        .into_iter()
        .map(|e| {
            let sz = e.formula.sizes();
            FrontierJson {
                cs: sz.cs,
                formula: e.formula.to_string(),
                k: e.k,
                m: e.m,
                ms: sz.ms,
            }
        })
        .collect();
    Ok(to_json(&MinimalReport { frontier, max_size }))
}

#[derive(Serialize)]
struct PhiReport {
    formula: String,
    n: u32,
    size: u64,
    size_strict: u64,
}

#[derive(Serialize)]
struct GenReport {
    count: usize,
    files: Vec<String>,
    kind: String,
    n: usize,
}

fn write_models(kind: &str, n: usize, members: &[PointedModel], dir: Option<&Path>) -> Result<String, CliError> {
    let Some(dir) = dir else {
        let models: Vec<ModelJson> = members.iter().map(ModelJson::from_pointed).collect();
        return Ok(to_json(&models));
    };
    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for (i, p) in members.iter().enumerate() {
        let path = dir.join(format!("{kind}{n}_{i:0width$}.json", width = members.len().to_string().len()));
        fs::write(&path, to_json(&ModelJson::from_pointed(p)) + "\n")
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        files.push(path.display().to_string());
    }
    Ok(to_json(&GenReport { count: files.len(), files, kind: kind.into(), n }))
}

fn hierarchy_error(e: fsgame_core::hierarchy::HierarchyError) -> CliError {
    CliError::Refused(e.to_string())
}

fn set_members(s: ModelSet) -> Vec<PointedModel> {
    s.into_iter().collect()
}

fn gen_cmd(
    level: Option<usize>,
    vv: Option<usize>,
    ee: Option<usize>,
    phi: Option<u32>,
    allow_level_5: bool,
    out: Option<&Path>,
) -> Result<String, CliError> {
    if let Some(n) = phi {
        let f = make_phi(n).map_err(|e| CliError::Input(e.to_string()))?;
        return Ok(to_json(&PhiReport {
            formula: f.to_string(),
            n,
            size: fo_size(&f, SizeConvention::AtomsCounted),
            size_strict: fo_size(&f, SizeConvention::AtomsFree),
        }));
    }
    if let Some(n) = level {
        let sets = if n <= DEFAULT_LEVEL_CEILING {
            v_level(n)
        } else if n == EXTENDED_LEVEL_CEILING && !allow_level_5 {
            return Err(CliError::Refused(format!(
                "level {n} has 65536 members; pass --allow-level-5 to enumerate it"
            )));
        } else {
            v_level_extended(n)
        }
        .map_err(hierarchy_error)?;
        let members: Vec<PointedModel> = sets.iter().map(|s| s.model()).collect();
        return write_models("v", n, &members, out);
    }
    if let Some(n) = vv {
        return write_models("vv", n, &set_members(vv_set(n).map_err(hierarchy_error)?), out);
    }
    if let Some(n) = ee {
        return write_models("ee", n, &set_members(ee_set(n).map_err(hierarchy_error)?), out);
    }
    Err(CliError::Input("gen needs one of --level, --vv, --ee, --phi".into()))
}

fn play_cmd(position: &Path, role: Side, config: SolverConfig) -> Result<String, CliError> {
    let pos = read_position(position)?;
    let role = match role {
        Side::S => Role::Spoiler,
        Side::D => Role::Duplicator,
    };
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout().lock();
    let outcome = play(pos, role, config, &mut input, &mut out)?;
    let verdict = match outcome {
        Outcome::SpoilerWon(_) => "S wins",
        Outcome::DuplicatorWon => "D wins",
        Outcome::Quit => "quit",
    };
    writeln!(out, "game over: {verdict}").map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(String::new())
}

/// Executes a parsed command and returns its stdout text.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let config = solver_config(cli)?;
    match &cli.command {
        Command::Eval { model, formula, trace } => eval_cmd(model, formula, *trace),
        Command::Bisim { a, b, depth, witness } => bisim_cmd(a, b, *depth, *witness),
        Command::Solve { position, left, right, m, k } => {
            let pos = match (position, left, right, m, k) {
                (Some(p), None, ..) => read_position(p)?,
                (None, Some(l), Some(r), Some(m), Some(k)) => GamePosition::new(*m, *k, read_model_set(l)?, read_model_set(r)?),
                _ => return Err(CliError::Input("give a position file or --left, --right, --m and --k".into())),
            };
            solve_cmd(&pos, config)
        }
        Command::Minimal { left, right, max_size } => minimal_cmd(left, right, *max_size, config),
        Command::Gen { level, vv, ee, phi, allow_level_5, out } => {
            gen_cmd(*level, *vv, *ee, *phi, *allow_level_5, out.as_deref())
        }
        Command::Experiment { n, m_max, k_max, frontier_budget, timings } => {
            let report = run_experiment(&ExperimentOptions {
                n: *n,
                m_max: *m_max,
                k_max: *k_max,
                frontier_budget: *frontier_budget,
                timings: *timings,
                threads: cli.threads,
                config,
            })?;
            Ok(to_json(&report))
        }
        Command::Play { position, role } => play_cmd(position, *role, config),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            if !text.is_empty() {
                println!("{text}");
            }
            0
        }
        Err(e) => {
            eprintln!("fsgame: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn subformulas_are_listed_bottom_up_once() {
        let f = parse_ml("[]F | []F").unwrap();
        let mut subs = Vec::new();
        subformulas(&f, &mut subs);
        let text: Vec<String> = subs.iter().map(|g| g.to_string()).collect();
        assert_eq!(text.len(), 3);
        assert_eq!(text.last().unwrap(), &f.to_string());
    }
}
