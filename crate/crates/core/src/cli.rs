//! Command-line pipelines. The `psakit` binary is a thin wrapper around
//! [`run`].

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::powers::maximal_contexts;
use crate::psa::search_binary_valuation;
use crate::relations::{classify, joint_outcome_distribution, tested_pairs, RelationMode};
use crate::report::{self, Report};
use crate::sampler::{empirical_verdict, run_experiment};
use crate::scenario::{default_stat_threshold, parse_scenario, ScenarioSpec};

#[derive(Debug, Parser)]
#[command(name = "psakit", version, about = "Power graphs, PSAs and intensive/effective relations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the bipartite state of a scenario.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// List the nodes, edges and maximal contexts of a graph.
    Graph {
        file: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Sample effective valuations and compare with the exact verdict.
    Sample {
        file: PathBuf,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        stat_threshold: Option<f64>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Search for a global binary valuation.
    Ks {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Designated,
    AllMatched,
}

impl From<ModeArg> for RelationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Designated => RelationMode::DesignatedPairs,
            ModeArg::AllMatched => RelationMode::AllMatchedContexts,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Print wall-clock timing to stderr (never part of the report).
    #[arg(long)]
    pub timing: bool,
}

/// `--tol-<name>` overrides, applied last.
#[derive(Debug, Clone, Default, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_herm: Option<f64>,
    #[arg(long)]
    pub tol_trace: Option<f64>,
    #[arg(long)]
    pub tol_psd: Option<f64>,
    #[arg(long)]
    pub tol_num: Option<f64>,
    #[arg(long)]
    pub tol_comm: Option<f64>,
    #[arg(long)]
    pub tol_proj: Option<f64>,
    #[arg(long)]
    pub tol_recon: Option<f64>,
    #[arg(long)]
    pub tol_intensive: Option<f64>,
    #[arg(long)]
    pub tol_effective: Option<f64>,
    #[arg(long)]
    pub tol_schmidt: Option<f64>,
    #[arg(long)]
    pub tol_pure: Option<f64>,
    #[arg(long)]
    pub max_dim: Option<usize>,
}

impl TolArgs {
    pub fn apply(&self, mut t: Tolerances) -> Result<Tolerances> {
        let fields: [(&str, Option<f64>, &mut f64); 11] = [
            ("herm", self.tol_herm, &mut t.herm),
            ("trace", self.tol_trace, &mut t.trace),
            ("psd", self.tol_psd, &mut t.psd),
            ("num", self.tol_num, &mut t.num),
            ("comm", self.tol_comm, &mut t.comm),
            ("proj", self.tol_proj, &mut t.proj),
            ("recon", self.tol_recon, &mut t.recon),
            ("intensive", self.tol_intensive, &mut t.intensive),
            ("effective", self.tol_effective, &mut t.effective),
            ("schmidt", self.tol_schmidt, &mut t.schmidt),
            ("pure", self.tol_pure, &mut t.pure),
        ];
        for (name, value, slot) in fields {
            if let Some(v) = value {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::Schema {
                        field: format!("--tol-{name}"),
                        reason: format!("must be a non-negative number, got {v}"),
                    });
                }
                *slot = v;
            }
        }
        if let Some(d) = self.max_dim {
            t.max_dim = d;
        }
        Ok(t)
    }
}

/// Loads a scenario and resolves tolerances: defaults, file, environment,
/// then command-line overrides.
pub fn load(file: &PathBuf, tol: &TolArgs) -> Result<(ScenarioSpec, Tolerances)> {
    let spec = parse_scenario(file)?;
    let t = tol.apply(spec.tolerances())?;
    Ok((spec, t))
}

pub fn cmd_classify(spec: &ScenarioSpec, tol: &Tolerances, mode: Option<RelationMode>) -> Result<Report> {
    let s = spec.build_joint_with_mode(tol, mode)?;
    let verdict = classify(&s, tol)?;
    let pairs = tested_pairs(&s, tol)?;
    let tables = pairs
        .iter()
        .map(|p| joint_outcome_distribution(&s, &p.a, &p.b, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(report::classify_report(spec, tol, &verdict, &pairs, &tables))
}

pub fn cmd_graph(spec: &ScenarioSpec, tol: &Tolerances) -> Result<Report> {
    let g = spec.build_graph(tol)?;
    let contexts = maximal_contexts(&g, tol)?;
    Ok(report::graph_report(spec, tol, &g, &contexts))
}

pub fn cmd_sample(
    spec: &ScenarioSpec,
    tol: &Tolerances,
    shots: Option<u64>,
    seed: Option<u64>,
    stat_threshold: Option<f64>,
    mode: Option<RelationMode>,
) -> Result<Report> {
    let shots = shots.or(spec.sampling.as_ref().map(|s| s.shots)).ok_or_else(|| Error::Schema {
        field: "sampling.shots".into(),
        reason: "pass --shots or set sampling.shots".into(),
    })?;
    let seed = seed.or(spec.sampling.as_ref().map(|s| s.seed)).ok_or_else(|| Error::Schema {
        field: "sampling.seed".into(),
        reason: "pass --seed or set sampling.seed".into(),
    })?;
    let threshold = stat_threshold
        .or(spec.sampling.as_ref().map(|s| s.stat_threshold))
        .unwrap_or_else(default_stat_threshold);
    let s = spec.build_joint_with_mode(tol, mode)?;
    let verdict = classify(&s, tol)?;
    let run = run_experiment(&s, shots, seed, tol)?;
    let convergence = empirical_verdict(&run, threshold)?;
    Ok(report::sample_report(spec, tol, &verdict, &run, &convergence))
}

pub fn cmd_ks(spec: &ScenarioSpec, tol: &Tolerances, budget: Option<u64>) -> Result<Report> {
    let mut t = *tol;
    if let Some(b) = budget {
        t.search_budget = b;
    }
    let g = spec.build_graph(&t)?;
    let search = search_binary_valuation(&g, &t)?;
    Ok(report::ks_report(spec, &t, &g, &search))
}

/// What a command produced: the rendered report and its exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub rendered: String,
    pub exit_code: i32,
}

fn finish(report: Report, out: &OutputArgs) -> Result<Outcome> {
    let rendered = match out.format {
        Format::Json => report.to_json(),
        Format::Table => {
            if report.value.get("verdict").is_some() {
                report::render_table(&report)?
            } else if let Some(s) = report.value.get("summary").and_then(|s| s.as_str()) {
                format!("{s}\n")
            } else {
                report.to_json()
            }
        }
    };
    let exit_code = match report.classification() {
        Some("EffectiveOnlyAnomaly") => 2,
        _ => 0,
    };
    Ok(Outcome {
        report,
        rendered,
        exit_code,
    })
}

/// Runs one command without touching stdout.
pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Classify { file, mode, out, tol } => {
            let (spec, t) = load(file, tol)?;
            finish(cmd_classify(&spec, &t, mode.map(Into::into))?, out)
        }
        Command::Graph { file, out, tol } => {
            let (spec, t) = load(file, tol)?;
            finish(cmd_graph(&spec, &t)?, out)
        }
        Command::Sample {
            file,
            shots,
            seed,
            stat_threshold,
            mode,
            out,
            tol,
        } => {
            let (spec, t) = load(file, tol)?;
            finish(cmd_sample(&spec, &t, *shots, *seed, *stat_threshold, mode.map(Into::into))?, out)
        }
        Command::Ks { file, budget, out, tol } => {
            let (spec, t) = load(file, tol)?;
            finish(cmd_ks(&spec, &t, *budget)?, out)
        }
    }
}

fn output_args(c: &Command) -> &OutputArgs {
    match c {
        Command::Classify { out, .. }
        | Command::Graph { out, .. }
        | Command::Sample { out, .. }
        | Command::Ks { out, .. } => out,
    }
}

/// Full CLI behavior; returns the process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let started = Instant::now();
    let out = output_args(&cli.command).clone();
    let result = execute(&cli.command).and_then(|o| {
        match &out.out {
            Some(path) => {
                // write-then-rename so a failure never leaves a partial report
                let tmp = path.with_extension("partial");
                std::fs::write(&tmp, &o.rendered)?;
                std::fs::rename(&tmp, path)?;
            }
            None => stdout.write_all(o.rendered.as_bytes())?,
        }
        Ok(o.exit_code)
    });
    if out.timing {
        let _ = writeln!(stderr, "elapsed_ms: {}", started.elapsed().as_millis());
    }
    match result {
        Ok(code) => {
            if code == 2 {
                let _ = writeln!(stderr, "warning: EffectiveOnlyAnomaly verdict");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            1
        }
    }
}
