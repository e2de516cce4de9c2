//! Argument parsing and dispatch for the `matchest` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use matchest_core::hard::{verify_gap, GapInstance};
use matchest_core::stream::{churn_stream, materialize, stream_from_graph, EdgeOrder};

use crate::error::{CliError, Result};
use crate::experiment::{run_experiment, ExperimentConfig, ModeArg, Report, Task};
use crate::family::{FamilyArgs, FileFormat, Manifest, PromiseRecord};
use crate::formats::{read_graph, read_stream, read_text, write_graph, write_stream, write_text};

#[derive(Debug, Parser)]
#[command(name = "matchest", version, about = "Streaming maximum-matching-size estimation and hard-instance toolkit")]
pub struct Cli {
    /// Master seed; trial i runs with seed + i.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1)]
    pub trials: usize,
    /// Write `<kind>.csv` and `<kind>.summary.json` here.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Run the experiment described by a TOML or JSON file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print rows as JSON lines instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph (or a stream of it) from a named family.
    Gen(GenArgs),
    /// Check instances against their promised maximum matching size.
    VerifyGap(VerifyArgs),
    /// Run the matching-size tester matching the stream's mode.
    Tester {
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        k: u64,
        /// Yes-threshold factor of the dynamic tester.
        #[arg(long)]
        gamma: Option<f64>,
        /// Groups per unit of k for the dynamic tester.
        #[arg(long)]
        group_factor: Option<u32>,
    },
    /// Estimate the maximum matching size within a factor of order alpha.
    Estimate {
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        alpha: u64,
        /// Reject alpha outside the sampling range instead of solving exactly.
        #[arg(long)]
        no_fallback: bool,
    },
    /// sqrt(n)-approximation from L0 sketches of a sampled neighbourhood.
    Folklore {
        #[arg(long)]
        stream: PathBuf,
        /// File listing the left side of a bipartite input, or `none` to
        /// sample from all vertices.
        #[arg(long)]
        bipartition: Option<PathBuf>,
        /// Sketch repetitions; `7 * ceil(log2 n)` by default.
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Exact TVD between Mx and its complement for a random parity set.
    Tvd {
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// The set has 2^(n - c) elements.
        #[arg(long)]
        c: usize,
        #[arg(long, default_value_t = 100)]
        matchings: usize,
    },
    /// Tester words across thresholds k.
    Bench {
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128,256")]
        ks: Vec<u64>,
        #[arg(long, default_value_t = 1024)]
        n: usize,
    },
    /// L0 sketch accuracy on a churned update stream.
    L0Test {
        #[arg(long)]
        universe: u64,
        #[arg(long)]
        support: u64,
        /// Decoys inserted and deleted, per surviving item.
        #[arg(long, default_value_t = 0.0)]
        churn: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Natural,
    Shuffled,
    Adversarial,
    Churn,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Output file; the instance is printed when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Emit a stream in this order instead of a graph.
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,
    /// Decoy factor for `--order churn`.
    #[arg(long, default_value_t = 1.0)]
    pub churn: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Generate `--trials` instances of this family and check each.
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Instance graph file; overrides the manifest's own file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Manifest with the promise; defaults to `<graph>.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// Path of the manifest written next to `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn emit(report: &Report, json: bool, out_dir: Option<&PathBuf>) -> Result<()> {
    if let Some(dir) = out_dir {
        report.write_to(dir)?;
    }
    let text = if json { report.to_json_lines() } else { report.to_csv()? };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
    if report.failures > 0 {
        return Err(CliError::GapFailure { failed: report.failures, total: report.rows.len() });
    }
    Ok(())
}

fn gen(args: &GenArgs, seed: u64, json: bool) -> Result<()> {
    let spec = args.family.to_family()?;
    let inst = spec.generate(seed)?;
    let (text, format) = match args.order {
        None => (write_graph(&inst.graph), FileFormat::Graph),
        Some(o) => {
            let s = match o {
                OrderArg::Natural => stream_from_graph(&inst.graph, EdgeOrder::Natural),
                OrderArg::Shuffled => stream_from_graph(&inst.graph, EdgeOrder::Shuffled(seed)),
                OrderArg::Adversarial => stream_from_graph(&inst.graph, EdgeOrder::Adversarial),
                OrderArg::Churn => churn_stream(&inst.graph, args.churn, seed)?,
            };
            (write_stream(&s), FileFormat::Stream)
        }
    };
    let mpath = args.manifest.clone().or_else(|| args.out.as_deref().map(manifest_path));
    let file = match (&args.out, &mpath) {
        (Some(out), Some(m)) => Some(relative_to(out, m)),
        _ => None,
    };
    let manifest = Manifest {
        id: inst.id.clone(),
        seed,
        spec,
        promise: inst.promise.map(PromiseRecord::from_bound),
        file,
        format: args.out.as_ref().map(|_| format),
    };
    let manifest_text = serde_json::to_string_pretty(&manifest)? + "\n";
    if let Some(out) = &args.out {
        write_text(out, &text)?;
    } else {
        print!("{text}");
    }
    if let Some(m) = &mpath {
        write_text(m, &manifest_text)?;
    }
    if json && args.out.is_some() {
        print!("{manifest_text}");
    }
    Ok(())
}

/// `file` as seen from the directory of `manifest`.
fn relative_to(file: &Path, manifest: &Path) -> PathBuf {
    let dir = manifest.parent().unwrap_or(Path::new(""));
    match (file.parent(), file.file_name()) {
        (Some(p), Some(name)) if p == dir => PathBuf::from(name),
        _ => std::path::absolute(file).unwrap_or_else(|_| file.to_path_buf()),
    }
}

fn load_instance(graph: Option<&PathBuf>, manifest: Option<&PathBuf>) -> Result<(GapInstance, String)> {
    let mpath = match (manifest, graph) {
        (Some(m), _) => m.clone(),
        (None, Some(g)) => manifest_path(g),
        (None, None) => return Err(CliError::Config("verify-gap needs --family, --graph or --manifest".into())),
    };
    let m: Manifest = serde_json::from_str(&read_text(&mpath)?)?;
    let promise = m.promise.as_ref().map(PromiseRecord::to_bound).transpose()?;
    let file = graph.cloned().or_else(|| m.file.as_ref().map(|f| mpath.parent().unwrap_or(Path::new("")).join(f)));
    let (g, source) = match file {
        Some(f) => {
            let g = match m.format {
                Some(FileFormat::Stream) => materialize(&read_stream(&f)?)?,
                _ => read_graph(&f)?,
            };
            (g, f.display().to_string())
        }
        None => (m.spec.generate(m.seed)?.graph, format!("regenerated from {}", mpath.display())),
    };
    Ok((GapInstance { id: m.id, graph: g, promise }, source))
}

fn verify_file(graph: Option<&PathBuf>, manifest: Option<&PathBuf>, json: bool) -> Result<()> {
    let (inst, source) = load_instance(graph, manifest)?;
    let rep = verify_gap(&inst)?;
    if json {
        println!(
            "{}",
            serde_json::json!({
                "instance": rep.instance, "direction": rep.promise.direction(),
                "promise": rep.promise.value(), "measured": rep.measured, "pass": rep.pass,
            })
        );
    } else {
        println!(
            "{} {} {} {} measured={} ({source})",
            rep.instance,
            if rep.pass { "PASS" } else { "FAIL" },
            rep.promise.direction(),
            rep.promise.value(),
            rep.measured,
        );
    }
    if rep.pass {
        Ok(())
    } else {
        Err(CliError::GapFailure { failed: 1, total: 1 })
    }
}

fn task_of(cmd: &Command) -> Option<Task> {
    Some(match cmd {
        Command::Gen(_) | Command::VerifyGap(_) => return None,
        Command::Tester { stream, k, gamma, group_factor } => {
            Task::Tester { stream: stream.clone(), k: *k, gamma: *gamma, group_factor: *group_factor }
        }
        Command::Estimate { stream, alpha, no_fallback } => {
            Task::Estimate { stream: stream.clone(), alpha: *alpha, fallback: !no_fallback }
        }
        Command::Folklore { stream, bipartition, reps } => {
            Task::Folklore { stream: stream.clone(), bipartition: bipartition.clone().filter(|p| p.as_os_str() != "none"), reps: *reps }
        }
        Command::Tvd { n, c, matchings } => Task::Tvd { n: *n, c: *c, matchings: *matchings },
        Command::Bench { mode, ks, n } => Task::Bench { mode: *mode, ks: ks.clone(), n: *n },
        Command::L0Test { universe, support, churn } => Task::L0Test { universe: *universe, support: *support, churn: *churn },
    })
}

pub fn run(cli: Cli) -> Result<()> {
    match (&cli.config, &cli.command) {
        (Some(path), None) => {
            let cfg = ExperimentConfig::load(path)?;
            let out_dir = cli.out_dir.clone().or_else(|| cfg.out_dir.clone());
            emit(&run_experiment(&cfg)?, cli.json, out_dir.as_ref())
        }
        (Some(_), Some(_)) => Err(CliError::Config("--config cannot be combined with a subcommand".into())),
        (None, None) => Err(CliError::Config("no subcommand given; see --help".into())),
        (None, Some(Command::Gen(args))) => gen(args, cli.seed, cli.json),
        (None, Some(Command::VerifyGap(v))) if !v.family.is_set() => verify_file(v.graph.as_ref(), v.manifest.as_ref(), cli.json),
        (None, Some(Command::VerifyGap(v))) if v.graph.is_some() || v.manifest.is_some() => {
            Err(CliError::Config("--family cannot be combined with --graph or --manifest".into()))
        }
        (None, Some(Command::VerifyGap(v))) => {
            let cfg = ExperimentConfig {
                task: Task::VerifyGap { spec: v.family.to_family()? },
                seed: cli.seed,
                trials: cli.trials,
                out_dir: cli.out_dir.clone(),
            };
            emit(&run_experiment(&cfg)?, cli.json, cli.out_dir.as_ref())
        }
        (None, Some(cmd)) => {
            let task = task_of(cmd).expect("experiment subcommand");
            let cfg = ExperimentConfig { task, seed: cli.seed, trials: cli.trials, out_dir: cli.out_dir.clone() };
            emit(&run_experiment(&cfg)?, cli.json, cli.out_dir.as_ref())
        }
    }
}
