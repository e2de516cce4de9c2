//! Matching-size testers.
//!
//! A γ-tester with threshold `k` answers Yes when `opt >= k`, and otherwise
//! may answer No together with an estimate in `[γ·opt, opt]`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::hashing::{group_assign, GroupAssignment};
use crate::matching::max_matching;
use crate::rng::split_seed;
use crate::space::SpaceAccounted;
use crate::stream::{feed, EdgeStream, EventKind, StreamConsumer, StreamEvent, StreamMode};
use crate::util::ceil_f64;

/// γ of the maximal-matching tester.
pub const INSERTION_GAMMA: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
}

/// Tester output; `estimate` is present exactly when the answer is No.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TesterVerdict {
    pub answer: Answer,
    pub estimate: Option<u64>,
}

impl TesterVerdict {
    pub fn yes() -> Self {
        TesterVerdict { answer: Answer::Yes, estimate: None }
    }

    pub fn no(estimate: u64) -> Self {
        TesterVerdict { answer: Answer::No, estimate: Some(estimate) }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// `ceil(gamma * k)`, tolerant of rounding noise in the product.
pub fn yes_threshold(gamma: f64, k: u64) -> u64 {
    ceil_f64(gamma * k as f64 - 1e-9)
}

/// Common interface of the streaming testers.
pub trait MatchingSizeTester: StreamConsumer + SpaceAccounted {
    fn k(&self) -> u64;
    fn gamma(&self) -> f64;
    fn verdict(&self) -> TesterVerdict;
    /// Worst-case words this tester may ever charge.
    fn word_budget(&self) -> u64;
}

/// Greedy maximal matching, stopped once `ceil(k/2)` edges are stored.
#[derive(Clone, Debug)]
pub struct InsertionTester {
    k: u64,
    cap: u64,
    matched: BTreeSet<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl InsertionTester {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("tester threshold k must be at least 1".into()));
        }
        Ok(InsertionTester { k, cap: k.div_ceil(2), matched: BTreeSet::new(), edges: Vec::new() })
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Current matching size.
    pub fn m(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn matching(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    fn words_for(m: u64) -> u64 {
        // k, cap, m plus two words per matched vertex and per stored edge.
        3 + 4 * m
    }
}

impl StreamConsumer for InsertionTester {
    fn process(&mut self, ev: StreamEvent) -> Result<()> {
        if ev.kind == EventKind::Delete {
            return Err(Error::WrongMode);
        }
        if self.m() >= self.cap || ev.u == ev.v {
            return Ok(());
        }
        if !self.matched.contains(&ev.u) && !self.matched.contains(&ev.v) {
            self.matched.insert(ev.u);
            self.matched.insert(ev.v);
            self.edges.push(ev.edge());
        }
        Ok(())
    }
}

impl SpaceAccounted for InsertionTester {
    fn words_used(&self) -> u64 {
        Self::words_for(self.m())
    }
}

impl MatchingSizeTester for InsertionTester {
    fn k(&self) -> u64 {
        self.k
    }

    fn gamma(&self) -> f64 {
        INSERTION_GAMMA
    }

    fn verdict(&self) -> TesterVerdict {
        if self.m() >= self.cap {
            TesterVerdict::yes()
        } else {
            TesterVerdict::no(self.m())
        }
    }

    fn word_budget(&self) -> u64 {
        Self::words_for(self.cap)
    }
}

/// Insertion-only tester over a whole stream.
pub fn insertion_tester(stream: &EdgeStream, k: u64) -> Result<TesterVerdict> {
    if stream.mode() != StreamMode::InsertionOnly {
        return Err(Error::WrongMode);
    }
    let mut t = InsertionTester::new(k)?;
    feed(&mut t, stream.replay())?;
    Ok(t.verdict())
}

/// Constants of the vertex-grouping tester.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicTesterConfig {
    /// Groups per unit of `k`.
    pub group_factor: u32,
    /// Answer Yes iff the group matching reaches `ceil(gamma * k)`.
    pub gamma: f64,
}

impl Default for DynamicTesterConfig {
    fn default() -> Self {
        DynamicTesterConfig { group_factor: 8, gamma: 0.25 }
    }
}

/// Signed edge counters between random vertex groups.
#[derive(Clone, Debug)]
pub struct DynamicTester {
    k: u64,
    gamma: f64,
    groups: GroupAssignment,
    counters: BTreeMap<(u32, u32), i64>,
    touched: bool,
}

impl DynamicTester {
    pub fn new(k: u64, cfg: DynamicTesterConfig, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("tester threshold k must be at least 1".into()));
        }
        if cfg.group_factor == 0 || !(cfg.gamma > 0.0 && cfg.gamma <= 1.0) {
            return Err(Error::Parameter("group factor must be positive and gamma in (0, 1]".into()));
        }
        let g = k
            .checked_mul(cfg.group_factor as u64)
            .filter(|&g| g <= u32::MAX as u64)
            .ok_or_else(|| Error::Parameter("group count overflows".into()))?;
        Ok(DynamicTester { k, gamma: cfg.gamma, groups: group_assign(g as u32, seed)?, counters: BTreeMap::new(), touched: false })
    }

    pub fn group_count(&self) -> u32 {
        self.groups.groups()
    }

    pub fn counter(&self, a: u32, b: u32) -> i64 {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.counters.get(&key).copied().unwrap_or(0)
    }

    /// Simple graph on the groups with an edge wherever a counter is positive.
    pub fn group_graph(&self) -> Graph {
        let mut g = Graph::new(self.group_count() as usize);
        for (&(a, b), &c) in &self.counters {
            if c > 0 {
                g.add_edge(a, b).expect("group ids are distinct and in range");
            }
        }
        g
    }

    /// Maximum matching size of the group graph.
    pub fn group_matching_size(&self) -> u64 {
        max_matching(&self.group_graph()).0 as u64
    }

    fn overhead(&self) -> u64 {
        // k, group count, gamma threshold, and the grouping hash.
        3 + self.groups.words_used()
    }

    fn dense_words(&self) -> u64 {
        let g = self.group_count() as u64;
        g * (g - 1) / 2
    }
}

impl StreamConsumer for DynamicTester {
    fn process(&mut self, ev: StreamEvent) -> Result<()> {
        self.touched = true;
        let (ga, gb) = (self.groups.group_of(ev.u), self.groups.group_of(ev.v));
        if ga == gb {
            return Ok(());
        }
        let key = if ga < gb { (ga, gb) } else { (gb, ga) };
        let slot = self.counters.entry(key).or_insert(0);
        *slot += ev.delta();
        if *slot < 0 {
            let (u, v) = ev.edge();
            return Err(Error::PrefixViolation { u, v });
        }
        if *slot == 0 {
            self.counters.remove(&key);
        }
        Ok(())
    }
}

impl SpaceAccounted for DynamicTester {
    /// Counters are stored sparsely but charged at the dense bound of one
    /// word per group pair once the first event arrives.
    fn words_used(&self) -> u64 {
        if self.touched {
            self.overhead() + self.dense_words()
        } else {
            self.overhead()
        }
    }
}

impl MatchingSizeTester for DynamicTester {
    fn k(&self) -> u64 {
        self.k
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn verdict(&self) -> TesterVerdict {
        let m = self.group_matching_size();
        if m >= yes_threshold(self.gamma, self.k) {
            TesterVerdict::yes()
        } else {
            TesterVerdict::no(m)
        }
    }

    fn word_budget(&self) -> u64 {
        self.overhead() + self.dense_words()
    }
}

/// Dynamic tester over a whole stream with the default constants.
pub fn dynamic_tester(stream: &EdgeStream, k: u64, seed: u64) -> Result<TesterVerdict> {
    dynamic_tester_with(stream, k, DynamicTesterConfig::default(), seed)
}

pub fn dynamic_tester_with(stream: &EdgeStream, k: u64, cfg: DynamicTesterConfig, seed: u64) -> Result<TesterVerdict> {
    let mut t = DynamicTester::new(k, cfg, seed)?;
    feed(&mut t, stream.replay())?;
    Ok(t.verdict())
}

/// Either tester, chosen by stream mode.
#[derive(Clone, Debug)]
pub enum AnyTester {
    Insertion(InsertionTester),
    Dynamic(DynamicTester),
}

impl AnyTester {
    pub fn for_mode(mode: StreamMode, k: u64, cfg: DynamicTesterConfig, seed: u64) -> Result<Self> {
        Ok(match mode {
            StreamMode::InsertionOnly => AnyTester::Insertion(InsertionTester::new(k)?),
            StreamMode::Dynamic => AnyTester::Dynamic(DynamicTester::new(k, cfg, seed)?),
        })
    }

    fn inner(&self) -> &dyn MatchingSizeTester {
        match self {
            AnyTester::Insertion(t) => t,
            AnyTester::Dynamic(t) => t,
        }
    }
}

impl StreamConsumer for AnyTester {
    fn process(&mut self, ev: StreamEvent) -> Result<()> {
        match self {
            AnyTester::Insertion(t) => t.process(ev),
            AnyTester::Dynamic(t) => t.process(ev),
        }
    }
}

impl SpaceAccounted for AnyTester {
    fn words_used(&self) -> u64 {
        self.inner().words_used()
    }
}

impl MatchingSizeTester for AnyTester {
    fn k(&self) -> u64 {
        self.inner().k()
    }

    fn gamma(&self) -> f64 {
        self.inner().gamma()
    }

    fn verdict(&self) -> TesterVerdict {
        self.inner().verdict()
    }

    fn word_budget(&self) -> u64 {
        self.inner().word_budget()
    }
}

/// Outcome of [`calibrate_dynamic_gamma`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaCalibration {
    pub gamma: f64,
    /// Fraction of trials answering Yes at the chosen gamma.
    pub yes_rate: f64,
    pub trials: usize,
}

/// Lower `cfg.gamma` until the tester answers Yes on at least `target` of
/// `trials` random groupings of a matching of size exactly `k`.
pub fn calibrate_dynamic_gamma(k: u64, cfg: DynamicTesterConfig, trials: usize, target: f64, seed: u64) -> Result<GammaCalibration> {
    if trials == 0 || !(0.0..=1.0).contains(&target) {
        return Err(Error::Parameter("calibration needs trials > 0 and a target in [0, 1]".into()));
    }
    let n = 2 * k as usize;
    let events: Vec<StreamEvent> = (0..k as Vertex).map(|i| StreamEvent::insert(2 * i, 2 * i + 1)).collect();
    let stream = EdgeStream::new(n, StreamMode::Dynamic, events)?;
    let mut sizes = Vec::with_capacity(trials);
    for i in 0..trials {
        let mut t = DynamicTester::new(k, cfg, split_seed(seed, i as u64))?;
        feed(&mut t, stream.replay())?;
        sizes.push(t.group_matching_size());
    }
    sizes.sort_unstable();
    let idx = (((1.0 - target) * trials as f64) as usize).min(trials - 1);
    let q = sizes[idx];
    let gamma = if yes_threshold(cfg.gamma, k) <= q { cfg.gamma } else { q.max(1) as f64 / k as f64 };
    let th = yes_threshold(gamma, k);
    let yes = sizes.iter().filter(|&&s| s >= th).count();
    Ok(GammaCalibration { gamma, yes_rate: yes as f64 / trials as f64, trials })
}
