//! Hard input distributions and exact checks of their matching-size gaps.
//!
//! Every generator is a pure function of its parameters and seed. Each
//! generated instance carries the bound its construction promises on the
//! maximum matching size, and [`verify_gap`] checks that bound with the
//! exact matcher.

use alloc::format;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matching::max_matching;

pub mod bhh;
pub mod dense;
pub mod eps;
pub mod rs_builder;
pub mod sms;
pub mod tvd;

pub use bhh::{bhh_gap_instance, bhh_to_matching_graph, gen_bhh0, BhhGraph, BhhInstance};
pub use dense::{gen_dense_alpha, DenseAlphaInstance};
pub use eps::{gen_eps_instance, EpsInstance, EpsVariant, Party, PartyEdges};
pub use rs_builder::{build_rs_graph, RsBuild};
pub use sms::{gen_sms, SmsInstance};
pub use tvd::{single_parity_set, tvd_experiment, tvd_for_set};

/// Yes/No label of a promise problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Yes,
    No,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Yes => "yes",
            Label::No => "no",
        }
    }
}

/// A promised bound on the maximum matching size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Exactly(u64),
    AtLeast(u64),
    AtMost(u64),
    GreaterThan(u64),
}

impl Bound {
    pub fn holds(&self, x: u64) -> bool {
        match *self {
            Bound::Exactly(v) => x == v,
            Bound::AtLeast(v) => x >= v,
            Bound::AtMost(v) => x <= v,
            Bound::GreaterThan(v) => x > v,
        }
    }

    pub fn value(&self) -> u64 {
        match *self {
            Bound::Exactly(v) | Bound::AtLeast(v) | Bound::AtMost(v) | Bound::GreaterThan(v) => v,
        }
    }

    /// `"eq"`, `"ge"`, `"le"` or `"gt"`.
    pub fn direction(&self) -> &'static str {
        match self {
            Bound::Exactly(_) => "eq",
            Bound::AtLeast(_) => "ge",
            Bound::AtMost(_) => "le",
            Bound::GreaterThan(_) => "gt",
        }
    }

    pub fn from_parts(direction: &str, value: u64) -> Option<Bound> {
        Some(match direction {
            "eq" => Bound::Exactly(value),
            "ge" => Bound::AtLeast(value),
            "le" => Bound::AtMost(value),
            "gt" => Bound::GreaterThan(value),
            _ => return None,
        })
    }
}

/// A generated graph together with its promised matching-size bound.
pub trait HardInstance {
    fn id(&self) -> String;
    fn graph(&self) -> &Graph;
    /// `None` when the construction promises nothing (e.g. mixed labels).
    fn promise(&self) -> Option<Bound>;
}

/// A plain graph-plus-promise pair, e.g. read back from a manifest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapInstance {
    pub id: String,
    pub graph: Graph,
    pub promise: Option<Bound>,
}

impl HardInstance for GapInstance {
    fn id(&self) -> String {
        self.id.clone()
    }

    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn promise(&self) -> Option<Bound> {
        self.promise
    }
}

/// Outcome of [`verify_gap`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub instance: String,
    pub promise: Bound,
    pub measured: u64,
    pub pass: bool,
}

/// Vertex budget of the exact matcher in [`verify_gap`].
pub const GAP_VERTEX_LIMIT: usize = 50_000;
/// Edge budget (distinct pairs) of the exact matcher in [`verify_gap`].
pub const GAP_EDGE_LIMIT: usize = 5_000_000;

/// Measure the maximum matching of the instance and compare it with its promise.
pub fn verify_gap<I: HardInstance + ?Sized>(inst: &I) -> Result<GapReport> {
    let g = inst.graph();
    if g.n() > GAP_VERTEX_LIMIT {
        return Err(Error::ResourceGuard { what: "gap-check vertex count", limit: GAP_VERTEX_LIMIT, actual: g.n() });
    }
    if g.edge_count() > GAP_EDGE_LIMIT {
        return Err(Error::ResourceGuard { what: "gap-check edge count", limit: GAP_EDGE_LIMIT, actual: g.edge_count() });
    }
    let promise = inst.promise().ok_or_else(|| Error::Parameter(format!("instance {} carries no promise", inst.id())))?;
    let measured = max_matching(g).0 as u64;
    Ok(GapReport { instance: inst.id(), promise, measured, pass: promise.holds(measured) })
}
