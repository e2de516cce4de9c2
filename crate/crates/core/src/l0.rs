//! Level-sampling L0 (distinct support) sketch for turnstile updates.
//!
//! Level `l` keeps the items whose level hash lies below `P / 2^l`, so each
//! level subsamples the previous one by half. Every level hashes its items
//! into a row of cells; a cell stores the count, the id sum and a fingerprint
//! `sum(delta * r^id) mod P`, which makes it a 1-sparse recovery structure.
//! All three fields are linear in the frequency vector.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hashing::{add_mod, mul_mod, pow_mod, PolyHash, MERSENNE_61};
use crate::rng::{rng_from_seed, split_seed};
use crate::space::SpaceAccounted;
use crate::util::{ceil_log2, ln};

/// Default cells per level.
pub const DEFAULT_CELLS: usize = 128;

/// Words charged per cell: count, sum, fingerprint.
const CELL_WORDS: u64 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Cell {
    count: i64,
    sum: i64,
    fingerprint: u64,
}

impl Cell {
    fn is_empty(&self) -> bool {
        self.count == 0 && self.sum == 0 && self.fingerprint == 0
    }
}

/// What a single cell holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellState {
    Empty,
    /// Exactly one item with the given net frequency.
    OneSparse {
        item: u32,
        count: i64,
    },
    /// More than one item, or a state the fingerprint rejects.
    Collision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L0Sketch {
    universe: u64,
    levels: usize,
    cells: usize,
    level_hash: PolyHash,
    bucket_hash: PolyHash,
    r: u64,
    table: Vec<Cell>,
}

impl L0Sketch {
    /// Sketch for items in `[0, universe)`, with `ceil(log2 universe) + 1` levels.
    pub fn new(universe: u64, seed: u64) -> Result<Self> {
        Self::with_cells(universe, DEFAULT_CELLS, seed)
    }

    pub fn with_cells(universe: u64, cells: usize, seed: u64) -> Result<Self> {
        if universe == 0 || universe > 1 << 32 {
            return Err(Error::Parameter("L0 universe must lie in [1, 2^32]".into()));
        }
        if cells < 4 {
            return Err(Error::Parameter("L0 sketch needs at least 4 cells per level".into()));
        }
        let levels = ceil_log2(universe) as usize + 1;
        let mut rng = rng_from_seed(seed);
        let level_hash = PolyHash::draw_with(2, MERSENNE_61, &mut rng)?;
        let bucket_hash = PolyHash::draw_with(2, MERSENNE_61, &mut rng_from_seed(split_seed(seed, 1)))?;
        let r = rng.gen_range(1..MERSENNE_61);
        Ok(L0Sketch { universe, levels, cells, level_hash, bucket_hash, r, table: vec![Cell::default(); levels * cells] })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn cells_per_level(&self) -> usize {
        self.cells
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    /// Deepest level that admits `item`.
    fn depth_of(&self, item: u32) -> usize {
        let h = self.level_hash.eval(item as u64);
        let mut l = 0;
        while l + 1 < self.levels && h < (MERSENNE_61 >> (l + 1)) {
            l += 1;
        }
        l
    }

    /// Add `delta` to the frequency of `item`.
    pub fn update(&mut self, item: u32, delta: i64) -> Result<()> {
        if item as u64 >= self.universe {
            return Err(Error::VertexOutOfRange { vertex: item, n: self.universe as usize });
        }
        if delta == 0 {
            return Ok(());
        }
        let depth = self.depth_of(item);
        let bucket = (self.bucket_hash.eval(item as u64) % self.cells as u64) as usize;
        let term = signed_mul(delta, pow_mod(self.r, item as u64, MERSENNE_61));
        for l in 0..=depth {
            let c = &mut self.table[l * self.cells + bucket];
            c.count += delta;
            c.sum += delta * item as i64;
            c.fingerprint = add_mod(c.fingerprint, term, MERSENNE_61);
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.table.iter().all(Cell::is_empty)
    }

    /// Classify cell `idx` of level `level`.
    pub fn cell_state(&self, level: usize, idx: usize) -> CellState {
        let c = self.table[level * self.cells + idx];
        if c.is_empty() {
            return CellState::Empty;
        }
        if c.count == 0 || c.sum % c.count != 0 {
            return CellState::Collision;
        }
        let id = c.sum / c.count;
        if id < 0 || id as u64 >= self.universe {
            return CellState::Collision;
        }
        let expect = signed_mul(c.count, pow_mod(self.r, id as u64, MERSENNE_61));
        if expect == c.fingerprint {
            CellState::OneSparse { item: id as u32, count: c.count }
        } else {
            CellState::Collision
        }
    }

    /// `(nonempty cells, verified 1-sparse cells)` at `level`.
    fn occupancy(&self, level: usize) -> (usize, usize) {
        let mut nonempty = 0;
        let mut single = 0;
        for i in 0..self.cells {
            match self.cell_state(level, i) {
                CellState::Empty => {}
                CellState::OneSparse { .. } => {
                    nonempty += 1;
                    single += 1;
                }
                CellState::Collision => nonempty += 1,
            }
        }
        (nonempty, single)
    }

    /// Estimated number of items with nonzero frequency.
    ///
    /// Uses the shallowest level whose row is at most a quarter occupied.
    /// If every occupied cell there verifies as 1-sparse the recovered items
    /// are counted exactly; otherwise the occupancy is inverted as in linear
    /// counting. The count is scaled by `2^level`.
    pub fn estimate(&self) -> u64 {
        let limit = self.cells / 4;
        let mut chosen = self.levels - 1;
        for l in 0..self.levels {
            if self.occupancy(l).0 <= limit {
                chosen = l;
                break;
            }
        }
        let (nonempty, single) = self.occupancy(chosen);
        if nonempty == 0 {
            return 0;
        }
        let support = if nonempty == single {
            single as f64
        } else {
            let b = self.cells as f64;
            let frac = (nonempty as f64 / b).min(1.0 - 0.5 / b);
            -b * ln(1.0 - frac)
        };
        let scaled = support * (1u64 << chosen) as f64;
        (scaled + 0.5) as u64
    }
}

fn signed_mul(delta: i64, x: u64) -> u64 {
    let m = mul_mod(delta.unsigned_abs() % MERSENNE_61, x, MERSENNE_61);
    if delta < 0 && m != 0 {
        MERSENNE_61 - m
    } else {
        m
    }
}

impl SpaceAccounted for L0Sketch {
    fn words_used(&self) -> u64 {
        // Table, both hashes, r, and the three size parameters.
        self.table.len() as u64 * CELL_WORDS + self.level_hash.words_used() + self.bucket_hash.words_used() + 4
    }
}

pub fn l0_update(sk: &mut L0Sketch, item: u32, delta: i64) -> Result<()> {
    sk.update(item, delta)
}

pub fn l0_estimate(sk: &L0Sketch) -> u64 {
    sk.estimate()
}
