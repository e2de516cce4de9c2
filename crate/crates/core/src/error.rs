use alloc::string::String;
use core::fmt;

use crate::graph::Vertex;

/// Errors produced by the core algorithms and generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An edge `(v, v)` was supplied.
    SelfLoop { vertex: Vertex },
    /// A vertex id is outside `[0, n)`.
    VertexOutOfRange { vertex: Vertex, n: usize },
    /// A deletion would drive an edge multiplicity (or counter) below zero.
    PrefixViolation { u: Vertex, v: Vertex },
    /// A delete event reached a consumer that only accepts insertions.
    WrongMode,
    /// The input exceeds a fixed computational budget.
    ResourceGuard { what: &'static str, limit: usize, actual: usize },
    /// Inconsistent or out-of-range configuration.
    Config(String),
    /// A BHH label cannot be realised under the parity and weight constraints.
    InfeasibleLabel(String),
    /// A size does not satisfy a divisibility requirement.
    Size(String),
    /// A generator parameter is invalid.
    Parameter(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SelfLoop { vertex } => write!(f, "self-loop on vertex {vertex}"),
            Error::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for n = {n}")
            }
            Error::PrefixViolation { u, v } => {
                write!(f, "delete of ({u}, {v}) underflows its multiplicity")
            }
            Error::WrongMode => f.write_str("delete event in an insertion-only context"),
            Error::ResourceGuard { what, limit, actual } => {
                write!(f, "{what} = {actual} exceeds the limit {limit}")
            }
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::InfeasibleLabel(msg) => write!(f, "infeasible label: {msg}"),
            Error::Size(msg) => write!(f, "size error: {msg}"),
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
