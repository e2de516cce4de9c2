//! `O(sqrt n)`-approximate matching size from the neighbourhood of a random
//! vertex set, in polylogarithmic space.
//!
//! Pick `S` of `ceil(sqrt n)` vertices from the left side and estimate
//! `|N(S)|` with L0 sketches over the dynamic stream. The output is
//! `k = min(|N(S)|, ceil(sqrt n))`.

use alloc::vec::Vec;

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::l0::{L0Sketch, DEFAULT_CELLS};
use crate::rng::{rng_from_seed, split_seed};
use crate::space::SpaceAccounted;
use crate::stream::{feed, EdgeStream, StreamConsumer, StreamEvent};
use crate::util::{ceil_log2, ceil_sqrt};

/// Where `S` is drawn from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FolkloreSide {
    /// The declared left side of a bipartite graph.
    Bipartite { left: Vec<Vertex> },
    /// All vertices. Not covered by the bipartite argument; experimental.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolkloreConfig {
    pub n: usize,
    pub side: FolkloreSide,
    /// Number of independent sketches whose median is taken.
    pub repetitions: usize,
    pub cells: usize,
    pub seed: u64,
}

impl FolkloreConfig {
    /// `R = 7 * ceil(log2 n)` repetitions.
    pub fn new(n: usize, side: FolkloreSide, seed: u64) -> Self {
        let reps = 7 * (ceil_log2(n as u64).max(1) as usize);
        FolkloreConfig { n, side, repetitions: reps, cells: DEFAULT_CELLS, seed }
    }

    pub fn sample_size(&self) -> usize {
        ceil_sqrt(self.n as u64) as usize
    }

    pub fn is_experimental(&self) -> bool {
        matches!(self.side, FolkloreSide::General)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolkloreReport {
    pub k: u64,
    pub median_l0: u64,
    pub sample: Vec<Vertex>,
    pub experimental: bool,
    pub words_used: u64,
}

/// Streaming state: the sample `S` and `R` L0 sketches of `N(S)`.
#[derive(Clone, Debug)]
pub struct FolkloreEstimator {
    cap: u64,
    general: bool,
    sample: Vec<Vertex>,
    sketches: Vec<L0Sketch>,
}

impl FolkloreEstimator {
    pub fn new(cfg: &FolkloreConfig) -> Result<Self> {
        if cfg.n == 0 || cfg.repetitions == 0 {
            return Err(Error::Parameter("folklore estimator needs n > 0 and at least one repetition".into()));
        }
        let pool: Vec<Vertex> = match &cfg.side {
            FolkloreSide::Bipartite { left } => {
                if let Some(&bad) = left.iter().find(|&&v| v as usize >= cfg.n) {
                    return Err(Error::VertexOutOfRange { vertex: bad, n: cfg.n });
                }
                let mut l = left.clone();
                l.sort_unstable();
                l.dedup();
                l
            }
            FolkloreSide::General => (0..cfg.n as Vertex).collect(),
        };
        let s = cfg.sample_size().min(pool.len());
        let mut rng = rng_from_seed(cfg.seed);
        let mut sample: Vec<Vertex> = sample(&mut rng, pool.len(), s).into_iter().map(|i| pool[i]).collect();
        sample.sort_unstable();
        let sketches = (0..cfg.repetitions)
            .map(|i| L0Sketch::with_cells(cfg.n as u64, cfg.cells, split_seed(cfg.seed, i as u64 + 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FolkloreEstimator { cap: cfg.sample_size() as u64, general: cfg.is_experimental(), sample, sketches })
    }

    pub fn sample(&self) -> &[Vertex] {
        &self.sample
    }

    fn in_sample(&self, v: Vertex) -> bool {
        self.sample.binary_search(&v).is_ok()
    }

    fn push(&mut self, item: Vertex, delta: i64) -> Result<()> {
        for sk in &mut self.sketches {
            sk.update(item, delta)?;
        }
        Ok(())
    }

    pub fn median_l0(&self) -> u64 {
        let mut est: Vec<u64> = self.sketches.iter().map(L0Sketch::estimate).collect();
        est.sort_unstable();
        est[est.len() / 2]
    }

    pub fn finish(&self) -> FolkloreReport {
        let median = self.median_l0();
        FolkloreReport {
            k: median.min(self.cap),
            median_l0: median,
            sample: self.sample.clone(),
            experimental: self.general,
            words_used: self.words_used(),
        }
    }
}

impl StreamConsumer for FolkloreEstimator {
    fn process(&mut self, ev: StreamEvent) -> Result<()> {
        let d = ev.delta();
        if self.in_sample(ev.u) {
            self.push(ev.v, d)?;
        }
        if self.in_sample(ev.v) {
            self.push(ev.u, d)?;
        }
        Ok(())
    }
}

impl SpaceAccounted for FolkloreEstimator {
    fn words_used(&self) -> u64 {
        2 + self.sample.len() as u64 + self.sketches.iter().map(|s| s.words_used()).sum::<u64>()
    }
}

pub fn folklore_estimate(stream: &EdgeStream, cfg: &FolkloreConfig) -> Result<FolkloreReport> {
    if stream.n() != cfg.n {
        return Err(Error::Config("stream universe differs from the configured n".into()));
    }
    let mut est = FolkloreEstimator::new(cfg)?;
    feed(&mut est, stream.replay())?;
    Ok(est.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::stream::{churn_stream, stream_from_graph, EdgeOrder, StreamMode};
    use alloc::vec;

    fn left(n: usize) -> FolkloreSide {
        FolkloreSide::Bipartite { left: (0..(n / 2) as Vertex).collect() }
    }

    #[test]
    fn empty_graph_gives_zero() {
        let s = EdgeStream::new(4096, StreamMode::Dynamic, vec![]).unwrap();
        let r = folklore_estimate(&s, &FolkloreConfig::new(4096, left(4096), 1)).unwrap();
        assert_eq!(r.k, 0);
        assert_eq!(r.sample.len(), 64);
        assert!(!r.experimental);
    }

    #[test]
    fn perfect_matching_hits_the_cap() {
        let n = 4096;
        let g = Graph::from_edges(n, (0..2048).map(|i| (i, i + 2048))).unwrap();
        let s = churn_stream(&g, 1.0, 3).unwrap();
        let mut hit = 0;
        for seed in 0..20 {
            let r = folklore_estimate(&s, &FolkloreConfig::new(n, left(n), seed)).unwrap();
            assert!(r.k <= 64);
            if r.k >= 32 {
                hit += 1;
            }
        }
        assert!(hit >= 18, "{hit}");
    }

    #[test]
    fn single_hub_is_usually_small() {
        let n = 4096;
        let g = Graph::from_edges(n, (2048..4096).map(|v| (0, v))).unwrap();
        let s = stream_from_graph(&g, EdgeOrder::Shuffled(1));
        let small = (0..50).filter(|&seed| folklore_estimate(&s, &FolkloreConfig::new(n, left(n), seed)).unwrap().k <= 2).count();
        assert!(small >= 45, "{small}");
    }

    #[test]
    fn general_mode_is_flagged() {
        let g = Graph::from_edges(16, [(0, 1), (2, 3)]).unwrap();
        let s = stream_from_graph(&g, EdgeOrder::Natural);
        let r = folklore_estimate(&s, &FolkloreConfig::new(16, FolkloreSide::General, 0)).unwrap();
        assert!(r.experimental);
        assert!(r.k <= 4);
    }

    #[test]
    fn bad_side_rejected() {
        let cfg = FolkloreConfig::new(8, FolkloreSide::Bipartite { left: vec![9] }, 0);
        assert!(FolkloreEstimator::new(&cfg).is_err());
    }
}
