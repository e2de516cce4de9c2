//! The meta estimator: testers on vertex-sampled subgraphs across a
//! geometric schedule of β values, combined into an `O(α)` approximation.
//!
//! With `L = ceil(log2 n)`, each `β ∈ {L, 2L, 4L, …, α}` runs a tester with
//! threshold `ceil(L²/2)` on the subgraph induced by vertices sampled with
//! probability `min(1, L/β)`. One extra tester with threshold
//! `ceil(n L² / α²)` runs on the `β = α` sample. All testers share the pass.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, InducedSubgraph};
use crate::hashing::{sample_predicate, SamplePredicate, SampleSpec};
use crate::matching::max_matching;
use crate::rng::split_seed;
use crate::space::SpaceAccounted;
use crate::stream::{EdgeStream, EventKind, StreamConsumer, StreamEvent, StreamMode};
use crate::tester::{AnyTester, DynamicTesterConfig, MatchingSizeTester, TesterVerdict, INSERTION_GAMMA};
use crate::util::{ceil_log2, ceil_sqrt, floor_f64};

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorConfig {
    pub n: usize,
    pub alpha: u64,
    pub mode: StreamMode,
    pub seed: u64,
    /// Run the exact fallback when α is outside `[L, ceil(sqrt n)]`;
    /// otherwise such an α is a configuration error.
    pub allow_fallback: bool,
    pub dynamic: DynamicTesterConfig,
}

impl EstimatorConfig {
    pub fn new(n: usize, alpha: u64, mode: StreamMode, seed: u64) -> Self {
        EstimatorConfig { n, alpha, mode, seed, allow_fallback: true, dynamic: DynamicTesterConfig::default() }
    }

    /// `L = ceil(log2 n)`, at least 1.
    pub fn log_n(&self) -> u64 {
        (ceil_log2(self.n as u64) as u64).max(1)
    }

    /// `{L, 2L, 4L, …}` below α, then α itself.
    pub fn schedule(&self) -> Vec<u64> {
        let l = self.log_n();
        let mut out = Vec::new();
        let mut beta = l;
        while beta < self.alpha {
            out.push(beta);
            beta *= 2;
        }
        out.push(self.alpha.max(1));
        out
    }

    pub fn sampling_probability(&self, beta: u64) -> f64 {
        let l = self.log_n();
        if beta <= l {
            1.0
        } else {
            l as f64 / beta as f64
        }
    }

    /// Threshold of every scheduled tester, `ceil(L² / 2)`.
    pub fn small_threshold(&self) -> u64 {
        let l = self.log_n();
        (l * l).div_ceil(2)
    }

    /// Threshold of the extra α tester, `ceil(n L² / α²)`.
    pub fn big_threshold(&self) -> u64 {
        let l = self.log_n();
        let a = self.alpha.max(1);
        (self.n as u64 * l * l).div_ceil(a * a).max(1)
    }

    pub fn in_meta_range(&self) -> bool {
        self.log_n() <= self.alpha && self.alpha <= ceil_sqrt(self.n as u64)
    }

    /// γ used to turn a Yes of the α tester into a matching-size estimate.
    pub fn gamma(&self) -> f64 {
        match self.mode {
            StreamMode::InsertionOnly => INSERTION_GAMMA,
            StreamMode::Dynamic => self.dynamic.gamma,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    AllFail,
    AllPass,
    Mixed { beta_star: u64 },
    Fallback,
}

/// One tester of the run.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaRun {
    pub beta: u64,
    pub probability: f64,
    pub sample_seed: u64,
    pub tester_seed: u64,
    pub threshold: u64,
    pub verdict: TesterVerdict,
    pub words_used: u64,
    pub word_budget: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub estimate: u64,
    pub branch: Branch,
    pub runs: Vec<BetaRun>,
    pub big: Option<BetaRun>,
    pub seed: u64,
    pub gamma: f64,
    pub words_used: u64,
    pub word_budget: u64,
}

/// Events of the subgraph induced by the vertices `pred` keeps.
#[derive(Clone, Debug)]
pub struct SampledEvents<I> {
    inner: I,
    pred: SamplePredicate,
}

impl<I: Iterator<Item = StreamEvent>> Iterator for SampledEvents<I> {
    type Item = StreamEvent;

    fn next(&mut self) -> Option<StreamEvent> {
        let pred = &self.pred;
        self.inner.by_ref().find(|e| pred.keeps_edge(e.u, e.v))
    }
}

/// One-pass view of `stream` restricted to the sampled vertices.
pub fn sample_composition<'a>(stream: &'a EdgeStream, spec: &SampleSpec) -> SampledEvents<impl Iterator<Item = StreamEvent> + 'a> {
    SampledEvents { inner: stream.replay(), pred: sample_predicate(spec) }
}

/// Offline counterpart of [`sample_composition`].
pub fn sample_graph(g: &Graph, spec: &SampleSpec) -> InducedSubgraph {
    let pred = sample_predicate(spec);
    g.induced_subgraph(|v| pred.contains(v))
}

struct Slot {
    beta: u64,
    spec: SampleSpec,
    tester_seed: u64,
    threshold: u64,
    pred: Option<SamplePredicate>,
    tester: AnyTester,
}

impl Slot {
    fn new(cfg: &EstimatorConfig, beta: u64, spec: SampleSpec, tester_seed: u64, threshold: u64) -> Result<Self> {
        let pred = if spec.p() < 1.0 { Some(sample_predicate(&spec)) } else { None };
        let tester = AnyTester::for_mode(cfg.mode, threshold, cfg.dynamic, tester_seed)?;
        Ok(Slot { beta, spec, tester_seed, threshold, pred, tester })
    }

    fn saturated(&self) -> bool {
        matches!(&self.tester, AnyTester::Insertion(t) if t.m() >= t.cap())
    }

    fn process(&mut self, ev: StreamEvent) -> Result<()> {
        if ev.kind == EventKind::Insert && self.saturated() {
            return Ok(());
        }
        if self.pred.as_ref().is_none_or(|p| p.keeps_edge(ev.u, ev.v)) {
            self.tester.process(ev)?;
        }
        Ok(())
    }

    fn pred_words(&self) -> u64 {
        self.pred.as_ref().map_or(0, |p| p.words_used())
    }

    fn run(&self) -> BetaRun {
        BetaRun {
            beta: self.beta,
            probability: self.spec.p(),
            sample_seed: self.spec.seed(),
            tester_seed: self.tester_seed,
            threshold: self.threshold,
            verdict: self.tester.verdict(),
            words_used: self.tester.words_used() + self.pred_words(),
            word_budget: self.tester.word_budget() + self.pred_words(),
        }
    }
}

/// Words for `n`, `α` and the master seed.
const META_OVERHEAD: u64 = 3;

/// Estimate the maximum matching size of the streamed graph.
pub fn meta_estimate(stream: &EdgeStream, cfg: &EstimatorConfig) -> Result<EstimateReport> {
    if stream.n() != cfg.n {
        return Err(Error::Config("stream universe differs from the configured n".into()));
    }
    if stream.mode() == StreamMode::Dynamic && cfg.mode == StreamMode::InsertionOnly {
        return Err(Error::Config("insertion-only estimator given a dynamic stream".into()));
    }
    meta_estimate_events(stream.replay(), cfg)
}

/// [`meta_estimate`] over any in-order event source on `[0, cfg.n)`.
pub fn meta_estimate_events<I>(events: I, cfg: &EstimatorConfig) -> Result<EstimateReport>
where
    I: IntoIterator<Item = StreamEvent>,
{
    if !cfg.in_meta_range() {
        if cfg.allow_fallback {
            return fallback_events(events, cfg);
        }
        return Err(Error::Config("alpha lies outside [ceil(log2 n), ceil(sqrt n)] and fallback is disabled".into()));
    }
    let schedule = cfg.schedule();
    let mut slots = Vec::with_capacity(schedule.len() + 1);
    for (i, &beta) in schedule.iter().enumerate() {
        let spec = SampleSpec::new(cfg.sampling_probability(beta), split_seed(cfg.seed, 2 * i as u64))?;
        slots.push(Slot::new(cfg, beta, spec, split_seed(cfg.seed, 2 * i as u64 + 1), cfg.small_threshold())?);
    }
    // The extra tester reads the same G^α sample as the last scheduled β.
    let alpha_spec = slots.last().expect("schedule is nonempty").spec;
    let big_seed = split_seed(cfg.seed, 2 * schedule.len() as u64 + 1);
    slots.push(Slot::new(cfg, cfg.alpha, alpha_spec, big_seed, cfg.big_threshold())?);

    for ev in events {
        if ev.u as usize >= cfg.n || ev.v as usize >= cfg.n {
            let bad = if ev.u as usize >= cfg.n { ev.u } else { ev.v };
            return Err(Error::VertexOutOfRange { vertex: bad, n: cfg.n });
        }
        for slot in &mut slots {
            slot.process(ev)?;
        }
    }

    let big_slot = slots.pop().expect("big slot pushed above");
    let runs: Vec<BetaRun> = slots.iter().map(Slot::run).collect();
    // The big tester shares the α sample, so its hash is not charged twice.
    let mut big = big_slot.run();
    big.words_used -= big_slot.pred_words();
    big.word_budget -= big_slot.pred_words();

    let gamma = cfg.gamma();
    let (estimate, branch) = combine(cfg, &runs, &big, gamma);
    let words_used = META_OVERHEAD + runs.iter().map(|r| r.words_used).sum::<u64>() + big.words_used;
    let word_budget = META_OVERHEAD + runs.iter().map(|r| r.word_budget).sum::<u64>() + big.word_budget;
    Ok(EstimateReport { estimate, branch, runs, big: Some(big), seed: cfg.seed, gamma, words_used, word_budget })
}

fn combine(cfg: &EstimatorConfig, runs: &[BetaRun], big: &BetaRun, gamma: f64) -> (u64, Branch) {
    let l = cfg.log_n();
    if let Some(first_fail) = runs.iter().position(|r| !r.verdict.is_yes()) {
        if runs.iter().all(|r| !r.verdict.is_yes()) {
            let base = runs[0].verdict.estimate.unwrap_or(0);
            // The β = L tester sees the whole graph, but in dynamic mode its
            // grouping can hide every edge while another sample still sees one.
            let est = if base > 0 {
                base
            } else {
                runs.iter().chain(core::iter::once(big)).filter_map(|r| r.verdict.estimate).max().unwrap_or(0)
            };
            return (est, Branch::AllFail);
        }
        let beta_star = runs[first_fail].beta;
        return ((beta_star / 2).max(1), Branch::Mixed { beta_star });
    }
    let opt_alpha = match big.verdict.estimate {
        Some(e) => e as f64,
        None => gamma * big.threshold as f64,
    };
    let scaled = floor_f64(cfg.alpha as f64 * opt_alpha / (l * l) as f64);
    (cfg.alpha.max(scaled), Branch::AllPass)
}

/// Exact-ish estimate used when α is too small (or too large) for the
/// sampling schedule: a maximal matching in insertion mode, full edge
/// recovery plus an exact matching in dynamic mode.
pub fn fallback_small_alpha(stream: &EdgeStream, cfg: &EstimatorConfig) -> Result<EstimateReport> {
    if stream.n() != cfg.n {
        return Err(Error::Config("stream universe differs from the configured n".into()));
    }
    fallback_events(stream.replay(), cfg)
}

struct GreedyState {
    matched: Vec<bool>,
    size: u64,
}

fn fallback_events<I>(events: I, cfg: &EstimatorConfig) -> Result<EstimateReport>
where
    I: IntoIterator<Item = StreamEvent>,
{
    let n = cfg.n;
    let (estimate, words) = match cfg.mode {
        StreamMode::InsertionOnly => {
            let mut st = GreedyState { matched: alloc::vec![false; n], size: 0 };
            for ev in events {
                if ev.kind == EventKind::Delete {
                    return Err(Error::WrongMode);
                }
                check(n, &ev)?;
                let (u, v) = (ev.u as usize, ev.v as usize);
                if !st.matched[u] && !st.matched[v] {
                    st.matched[u] = true;
                    st.matched[v] = true;
                    st.size += 1;
                }
            }
            (st.size, 3 + 4 * st.size)
        }
        StreamMode::Dynamic => {
            let mut g = Graph::new(n);
            for ev in events {
                match ev.kind {
                    EventKind::Insert => g.add_edge(ev.u, ev.v)?,
                    EventKind::Delete => g.remove_edge(ev.u, ev.v)?,
                }
            }
            let slots = (n as u64) * (n as u64).saturating_sub(1) / 2;
            (max_matching(&g).0 as u64, 3 + slots)
        }
    };
    Ok(EstimateReport {
        estimate,
        branch: Branch::Fallback,
        runs: Vec::new(),
        big: None,
        seed: cfg.seed,
        gamma: cfg.gamma(),
        words_used: words,
        word_budget: words,
    })
}

fn check(n: usize, ev: &StreamEvent) -> Result<()> {
    if ev.u == ev.v {
        return Err(Error::SelfLoop { vertex: ev.u });
    }
    for w in [ev.u, ev.v] {
        if w as usize >= n {
            return Err(Error::VertexOutOfRange { vertex: w, n });
        }
    }
    Ok(())
}

/// Smallest `c >= 1` with `opt / (c α) <= estimate`, or infinity when the
/// estimate is zero but `opt` is not.
pub fn lower_factor(opt: u64, estimate: u64, alpha: u64) -> f64 {
    if opt == 0 {
        return 1.0;
    }
    if estimate == 0 {
        return f64::INFINITY;
    }
    (opt as f64 / (alpha as f64 * estimate as f64)).max(1.0)
}

/// Smallest `c' >= 1` with `estimate <= c' opt`.
pub fn upper_factor(opt: u64, estimate: u64) -> f64 {
    if estimate == 0 {
        return 1.0;
    }
    if opt == 0 {
        return f64::INFINITY;
    }
    (estimate as f64 / opt as f64).max(1.0)
}
