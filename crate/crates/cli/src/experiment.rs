//! Seeded, repeatable experiment runs emitting a CSV table and a JSON summary.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rand::seq::{index, SliceRandom};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use matchest_core::estimator::{meta_estimate, Branch, EstimatorConfig};
use matchest_core::folklore::{folklore_estimate, FolkloreConfig, FolkloreSide};
use matchest_core::hard::{tvd_experiment, verify_gap};
use matchest_core::l0::L0Sketch;
use matchest_core::rng::rng_from_seed;
use matchest_core::space::{log_log_slope, SpaceAccounted};
use matchest_core::stream::{feed, stream_from_graph, EdgeOrder};
use matchest_core::tester::{Answer, AnyTester, DynamicTesterConfig, MatchingSizeTester};
use matchest_core::{EdgeStream, Graph, StreamMode};

use crate::error::{CliError, Result};
use crate::family::Family;
use crate::formats::{parse_vertex_list, read_stream, read_text, write_text};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Insertion,
    Dynamic,
}

impl From<ModeArg> for StreamMode {
    fn from(m: ModeArg) -> StreamMode {
        match m {
            ModeArg::Insertion => StreamMode::InsertionOnly,
            ModeArg::Dynamic => StreamMode::Dynamic,
        }
    }
}

fn yes() -> bool {
    true
}

fn hundred() -> usize {
    100
}

fn one() -> usize {
    1
}

fn default_bench_n() -> usize {
    1024
}

/// One experiment; every variant is run once per trial seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    /// Matching-size tester chosen by the stream's mode.
    Tester {
        stream: PathBuf,
        k: u64,
        #[serde(default)]
        gamma: Option<f64>,
        #[serde(default)]
        group_factor: Option<u32>,
    },
    Estimate {
        stream: PathBuf,
        alpha: u64,
        #[serde(default = "yes")]
        fallback: bool,
    },
    Folklore {
        stream: PathBuf,
        /// File listing the left side of a bipartite input; all vertices
        /// when absent.
        #[serde(default)]
        bipartition: Option<PathBuf>,
        /// Sketch repetitions; `7 * ceil(log2 n)` when absent.
        #[serde(default)]
        reps: Option<usize>,
    },
    VerifyGap {
        spec: Family,
    },
    Tvd {
        n: usize,
        c: usize,
        #[serde(default = "hundred")]
        matchings: usize,
    },
    /// Tester words against `k` on a perfect matching of `n / 2` edges.
    Bench {
        mode: ModeArg,
        ks: Vec<u64>,
        #[serde(default = "default_bench_n")]
        n: usize,
    },
    L0Test {
        universe: u64,
        support: u64,
        #[serde(default)]
        churn: f64,
    },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Tester { .. } => "tester",
            Task::Estimate { .. } => "estimate",
            Task::Folklore { .. } => "folklore",
            Task::VerifyGap { .. } => "verify-gap",
            Task::Tvd { .. } => "tvd",
            Task::Bench { .. } => "bench",
            Task::L0Test { .. } => "l0-test",
        }
    }
}

/// A task with its master seed, trial count and output directory.
///
/// Trial `i` runs with seed `seed + i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub task: Task,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Load a `.json` or `.toml` file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            _ => Self::from_toml(&text),
        }
    }

    /// SHA-256 over the task, seed and trial count; the output directory is excluded.
    pub fn config_hash(&self) -> String {
        let canon = serde_json::to_string(&(&self.task, self.seed, self.trials)).expect("config serializes");
        Sha256::digest(canon.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn trial_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }
}

/// Rows, summary and check failures of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub kind: &'static str,
    pub config_hash: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Map<String, Value>,
    /// Failed gap checks (only `verify-gap` produces any).
    pub failures: usize,
}

impl Report {
    pub fn column(&self, name: &str) -> impl Iterator<Item = &Value> + '_ {
        let idx = self.columns.iter().position(|c| *c == name);
        self.rows.iter().filter_map(move |r| idx.map(|i| &r[i]))
    }

    /// CSV with a leading `# schema` comment line.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell))?;
        }
        let body = String::from_utf8(w.into_inner().map_err(|e| CliError::io("<csv>", e.into_error()))?).expect("csv output is utf-8");
        Ok(format!("# schema v{SCHEMA_VERSION} kind={} config={}\n{body}", self.kind, self.config_hash))
    }

    /// One JSON object per row.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let obj: Map<String, Value> = self.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect();
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary serializes");
        s.push('\n');
        s
    }

    /// Write `<kind>.csv` and `<kind>.summary.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        let csv_path = dir.join(format!("{}.csv", self.kind));
        let json_path = dir.join(format!("{}.summary.json", self.kind));
        write_text(&csv_path, &self.to_csv()?)?;
        write_text(&json_path, &self.summary_json())?;
        Ok((csv_path, json_path))
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn median(mut xs: Vec<f64>) -> Value {
    if xs.is_empty() {
        return Value::Null;
    }
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    json!(if xs.len() % 2 == 1 { xs[m] } else { (xs[m - 1] + xs[m]) / 2.0 })
}

fn numbers<'a>(vals: impl Iterator<Item = &'a Value>) -> Vec<f64> {
    vals.filter_map(Value::as_f64).collect()
}

fn rate<'a>(vals: impl Iterator<Item = &'a Value>) -> f64 {
    let (mut hit, mut total) = (0usize, 0usize);
    for v in vals {
        total += 1;
        hit += (v == &Value::Bool(true)) as usize;
    }
    if total == 0 {
        0.0
    } else {
        hit as f64 / total as f64
    }
}

fn answer_str(a: Answer) -> &'static str {
    match a {
        Answer::Yes => "yes",
        Answer::No => "no",
    }
}

fn branch_str(b: Branch) -> String {
    match b {
        Branch::AllFail => "all-fail".into(),
        Branch::AllPass => "all-pass".into(),
        Branch::Mixed { beta_star } => format!("mixed:{beta_star}"),
        Branch::Fallback => "fallback".into(),
    }
}

/// Updates `(item, delta)` with `support` surviving items and
/// `floor(churn * support)` decoys that are inserted and later deleted.
pub fn l0_churn_updates(universe: u64, support: u64, churn: f64, seed: u64) -> Result<Vec<(u32, i64)>> {
    if !(churn >= 0.0 && churn.is_finite()) {
        return Err(CliError::Config(format!("churn factor {churn} must be finite and non-negative")));
    }
    let decoys = (churn * support as f64).floor() as u64;
    let total = support + decoys;
    if universe == 0 || universe > 1 << 32 || total > universe {
        return Err(CliError::Config(format!("{total} distinct items do not fit a universe of {universe}")));
    }
    let mut rng = rng_from_seed(seed);
    let items: Vec<u32> = index::sample(&mut rng, universe as usize, total as usize).into_iter().map(|i| i as u32).collect();
    let mut tokens: Vec<(u32, bool)> = items.iter().enumerate().map(|(i, &x)| (x, (i as u64) < support)).collect();
    tokens.extend(items[support as usize..].iter().map(|&x| (x, false)));
    tokens.shuffle(&mut rng);
    let mut open = std::collections::HashSet::new();
    Ok(tokens.into_iter().map(|(x, keep)| if keep || open.insert(x) { (x, 1) } else { (x, -1) }).collect())
}

fn bench_stream(n: usize, mode: StreamMode, seed: u64) -> Result<EdgeStream> {
    let g = Graph::from_edges(n, (0..(n / 2) as u32).map(|i| (i, n as u32 - 1 - i)))?;
    let s = stream_from_graph(&g, EdgeOrder::Shuffled(seed));
    Ok(if mode == StreamMode::Dynamic { s.into_dynamic() } else { s })
}

fn dyn_cfg(gamma: Option<f64>, group_factor: Option<u32>) -> DynamicTesterConfig {
    let d = DynamicTesterConfig::default();
    DynamicTesterConfig { gamma: gamma.unwrap_or(d.gamma), group_factor: group_factor.unwrap_or(d.group_factor) }
}

fn per_trial<F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<Vec<Value>>>
where
    F: Fn(usize, u64) -> Result<Vec<Vec<Value>>> + Sync,
{
    let chunks: Vec<Vec<Vec<Value>>> = (0..cfg.trials).into_par_iter().map(|i| f(i, cfg.trial_seed(i))).collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Run `cfg.task` once per trial seed. Rows come back in trial order, so
/// the output depends only on the configuration and the input files.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    if cfg.trials == 0 {
        return Err(CliError::Config("trials must be at least 1".into()));
    }
    let mut summary = Map::new();
    let mut failures = 0;
    let (columns, rows): (Vec<&'static str>, Vec<Vec<Value>>) = match &cfg.task {
        Task::Tester { stream, k, gamma, group_factor } => {
            let s = read_stream(stream)?;
            let dc = dyn_cfg(*gamma, *group_factor);
            let rows = per_trial(cfg, |i, seed| {
                let mut t = AnyTester::for_mode(s.mode(), *k, dc, seed)?;
                feed(&mut t, s.replay())?;
                let v = t.verdict();
                Ok(vec![vec![json!(i), json!(seed), json!(answer_str(v.answer)), json!(v.estimate), json!(t.words_used())]])
            })?;
            let r = rows.iter().filter(|r| r[2] == "yes").count() as f64 / rows.len() as f64;
            summary.insert("yes_rate".into(), json!(r));
            summary.insert("median_words_used".into(), median(numbers(rows.iter().map(|r| &r[4]))));
            (vec!["trial", "seed", "answer", "estimate", "words_used"], rows)
        }
        Task::Estimate { stream, alpha, fallback } => {
            let s = read_stream(stream)?;
            let rows = per_trial(cfg, |i, seed| {
                let mut ec = EstimatorConfig::new(s.n(), *alpha, s.mode(), seed);
                ec.allow_fallback = *fallback;
                let rep = meta_estimate(&s, &ec)?;
                Ok(vec![vec![
                    json!(i),
                    json!(seed),
                    json!(rep.estimate),
                    json!(branch_str(rep.branch)),
                    json!(rep.words_used),
                    json!(rep.word_budget),
                ]])
            })?;
            summary.insert("median_estimate".into(), median(numbers(rows.iter().map(|r| &r[2]))));
            summary.insert("median_words_used".into(), median(numbers(rows.iter().map(|r| &r[4]))));
            (vec!["trial", "seed", "estimate", "branch", "words_used", "word_budget"], rows)
        }
        Task::Folklore { stream, bipartition, reps } => {
            let s = read_stream(stream)?;
            let side = match bipartition {
                Some(p) => FolkloreSide::Bipartite { left: parse_vertex_list(&read_text(p)?)? },
                None => FolkloreSide::General,
            };
            let rows = per_trial(cfg, |i, seed| {
                let mut fc = FolkloreConfig::new(s.n(), side.clone(), seed);
                if let Some(r) = reps {
                    fc.repetitions = *r;
                }
                let rep = folklore_estimate(&s, &fc)?;
                Ok(vec![vec![json!(i), json!(seed), json!(rep.k), json!(rep.median_l0), json!(rep.experimental), json!(rep.words_used)]])
            })?;
            summary.insert("median_k".into(), median(numbers(rows.iter().map(|r| &r[2]))));
            (vec!["trial", "seed", "k", "median_l0", "experimental", "words_used"], rows)
        }
        Task::VerifyGap { spec } => {
            let rows = per_trial(cfg, |i, seed| {
                let inst = spec.generate(seed)?;
                let rep = verify_gap(&inst)?;
                Ok(vec![vec![
                    json!(i),
                    json!(seed),
                    json!(rep.instance),
                    json!(rep.promise.direction()),
                    json!(rep.promise.value()),
                    json!(rep.measured),
                    json!(rep.pass),
                ]])
            })?;
            failures = rows.iter().filter(|r| r[6] == false).count();
            summary.insert("family".into(), json!(spec.name()));
            summary.insert("pass_rate".into(), json!(rate(rows.iter().map(|r| &r[6]))));
            summary.insert("failures".into(), json!(failures));
            (vec!["trial", "seed", "instance", "direction", "promise", "measured", "pass"], rows)
        }
        Task::Tvd { n, c, matchings } => {
            let rows = per_trial(cfg, |i, seed| {
                Ok(vec![vec![json!(i), json!(seed), json!(n), json!(c), json!(tvd_experiment(*n, *c, *matchings, seed)?)]])
            })?;
            let vals = numbers(rows.iter().map(|r| &r[4]));
            summary.insert("mean_tvd".into(), json!(vals.iter().sum::<f64>() / vals.len() as f64));
            (vec!["trial", "seed", "n", "c", "mean_tvd"], rows)
        }
        Task::Bench { mode, ks, n } => {
            if ks.is_empty() {
                return Err(CliError::Config("bench needs at least one k".into()));
            }
            let mode: StreamMode = (*mode).into();
            let rows = per_trial(cfg, |i, seed| {
                let s = bench_stream(*n, mode, seed)?;
                ks.iter()
                    .map(|&k| {
                        let mut t = AnyTester::for_mode(mode, k, DynamicTesterConfig::default(), seed)?;
                        feed(&mut t, s.replay())?;
                        Ok(vec![json!(i), json!(seed), json!(k), json!(t.words_used())])
                    })
                    .collect()
            })?;
            let mut points = Vec::new();
            for &k in ks {
                let words = numbers(rows.iter().filter(|r| r[2] == json!(k)).map(|r| &r[3]));
                if let Some(m) = median(words).as_f64() {
                    points.push((k as f64, m));
                }
            }
            let log_n = (*n as f64).log2().max(1.0);
            let constant =
                points.iter().map(|&(k, w)| if mode == StreamMode::Dynamic { w / (k * k) } else { w / (k * log_n) }).fold(0.0, f64::max);
            summary.insert("slope".into(), json!(if points.len() >= 2 { log_log_slope(&points) } else { f64::NAN }));
            summary.insert("words_constant".into(), json!(constant));
            (vec!["trial", "seed", "k", "words_used"], rows)
        }
        Task::L0Test { universe, support, churn } => {
            let rows = per_trial(cfg, |i, seed| {
                let updates = l0_churn_updates(*universe, *support, *churn, seed)?;
                let mut sk = L0Sketch::new(*universe, seed)?;
                for (x, d) in updates {
                    sk.update(x, d)?;
                }
                let e = sk.estimate();
                let ok = if *support == 0 { e == 0 } else { 2 * e >= *support && e <= 2 * support };
                Ok(vec![vec![json!(i), json!(seed), json!(support), json!(e), json!(ok), json!(sk.words_used())]])
            })?;
            summary.insert("within_factor_two".into(), json!(rate(rows.iter().map(|r| &r[4]))));
            (vec!["trial", "seed", "true_l0", "estimate", "within_factor_two", "words_used"], rows)
        }
    };
    let hash = cfg.config_hash();
    summary.insert("schema".into(), json!(SCHEMA_VERSION));
    summary.insert("kind".into(), json!(cfg.task.kind()));
    summary.insert("config_hash".into(), json!(hash));
    summary.insert("seed".into(), json!(cfg.seed));
    summary.insert("trials".into(), json!(cfg.trials));
    summary.insert("rows".into(), json!(rows.len()));
    summary.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    Ok(Report { kind: cfg.task.kind(), config_hash: hash, columns, rows, summary, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(task: Task, trials: usize) -> ExperimentConfig {
        ExperimentConfig { task, seed: 11, trials, out_dir: None }
    }

    #[test]
    fn l0_updates_net_to_the_support() {
        let ups = l0_churn_updates(1 << 16, 100, 2.5, 3).unwrap();
        assert_eq!(ups.len(), 100 + 2 * 250);
        let mut net = std::collections::HashMap::new();
        for (x, d) in ups {
            *net.entry(x).or_insert(0i64) += d;
            assert!(net[&x] >= 0);
        }
        assert_eq!(net.values().filter(|&&v| v != 0).count(), 100);
        assert!(l0_churn_updates(10, 8, 1.0, 0).is_err());
        assert!(l0_churn_updates(10, 2, -1.0, 0).is_err());
    }

    #[test]
    fn bench_slopes() {
        let ks = vec![8, 16, 32, 64, 128, 256];
        let ins = run_experiment(&cfg(Task::Bench { mode: ModeArg::Insertion, ks: ks.clone(), n: 1024 }, 2)).unwrap();
        let s = ins.summary["slope"].as_f64().unwrap();
        assert!((s - 1.0).abs() <= 0.1, "{s}");
        let dynr = run_experiment(&cfg(Task::Bench { mode: ModeArg::Dynamic, ks, n: 1024 }, 1)).unwrap();
        let s = dynr.summary["slope"].as_f64().unwrap();
        assert!((s - 2.0).abs() <= 0.1, "{s}");
        assert_eq!(dynr.rows.len(), 6);
    }

    #[test]
    fn verify_gap_counts_failures() {
        let spec = Family::Bhh { n: 16, t: 2, label: crate::family::LabelArg::No };
        let r = run_experiment(&cfg(Task::VerifyGap { spec }, 5)).unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.summary["pass_rate"], json!(1.0));
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("# schema v1 kind=verify-gap config="));
        assert_eq!(csv.lines().count(), 2 + 5);
    }

    #[test]
    fn hash_ignores_out_dir() {
        let mut a = cfg(Task::Tvd { n: 8, c: 2, matchings: 10 }, 3);
        let h = a.config_hash();
        a.out_dir = Some("elsewhere".into());
        assert_eq!(a.config_hash(), h);
        a.seed += 1;
        assert_ne!(a.config_hash(), h);
        assert_eq!(h.len(), 64);
    }

    #[test]
    fn toml_config_parses() {
        let text = "seed = 4\ntrials = 2\n[task]\nkind = \"verify-gap\"\n[task.spec]\nfamily = \"sms\"\nn = 32\nk = 4\nprofile = \"yes\"\n";
        let c = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(c.trials, 2);
        assert!(matches!(c.task, Task::VerifyGap { spec: Family::Sms { .. } }));
        assert!(ExperimentConfig::from_toml("[task]\nkind = \"nope\"\n").is_err());
    }
}
