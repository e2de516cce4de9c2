//! Named graph families, shared by `gen`, `verify-gap` and config files.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rand::Rng;
use serde::{Deserialize, Serialize};

use matchest_core::hard::{
    bhh_gap_instance, build_rs_graph, gen_bhh0, gen_dense_alpha, gen_eps_instance, gen_sms, Bound, EpsVariant, GapInstance, HardInstance,
    Label, RsBuild,
};
use matchest_core::rng::{rng_from_seed, split_seed};
use matchest_core::{Graph, RsGraph};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LabelArg {
    Yes,
    No,
}

impl From<LabelArg> for Label {
    fn from(l: LabelArg) -> Label {
        match l {
            LabelArg::Yes => Label::Yes,
            LabelArg::No => Label::No,
        }
    }
}

fn default_restarts() -> usize {
    100
}

/// Shape of the RS graph underlying the dense and (1 + eps) families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsParams {
    pub rs_n: usize,
    pub r: usize,
    pub t: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
}

/// A graph family and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Reduction graph of a hidden-hypermatching instance.
    Bhh { n: usize, t: usize, label: LabelArg },
    /// Multi-player low-arboricity instance; `profile` is `yes`, `no`, or
    /// one Y/N letter per player.
    Sms { n: usize, k: usize, profile: String },
    /// Players holding RS copies with one hidden special matching.
    DenseAlpha {
        #[serde(flatten)]
        rs: RsParams,
        alpha: usize,
        theta: u8,
    },
    /// Insertion-only instance separating opt from (1 - eps) opt.
    EpsInsert {
        #[serde(flatten)]
        rs: RsParams,
        eps: f64,
        label: LabelArg,
    },
    /// Dynamic-stream instance separating opt from (1 - eps) opt.
    EpsDynamic {
        #[serde(flatten)]
        rs: RsParams,
        eps: f64,
        label: LabelArg,
    },
    /// Union of a greedily built RS graph.
    Rs {
        #[serde(flatten)]
        rs: RsParams,
    },
    /// Erdos-Renyi G(n, p).
    Random { n: usize, p: f64 },
    /// `size` disjoint edges `(i, n - 1 - i)` on `n` vertices.
    PerfectMatching { n: usize, size: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Bhh,
    Sms,
    DenseAlpha,
    EpsInsert,
    EpsDynamic,
    Rs,
    Random,
    PerfectMatching,
}

/// Command-line form of [`Family`]: a family name plus whichever
/// parameters it needs.
#[derive(Clone, Debug, Default, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Vertex count (bhh, sms, random, perfect-matching).
    #[arg(long)]
    pub n: Option<usize>,
    /// Hyperedge arity (bhh) or induced matching count (RS families).
    #[arg(long)]
    pub t: Option<usize>,
    /// Player count (sms).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub label: Option<LabelArg>,
    #[arg(long)]
    pub profile: Option<String>,
    /// Vertex count of the RS graph.
    #[arg(long)]
    pub rs_n: Option<usize>,
    /// Induced matching size of the RS graph.
    #[arg(long)]
    pub r: Option<usize>,
    /// RS construction restarts.
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub alpha: Option<usize>,
    #[arg(long)]
    pub theta: Option<u8>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Edge probability (random).
    #[arg(long)]
    pub p: Option<f64>,
    /// Matching size (perfect-matching).
    #[arg(long)]
    pub size: Option<usize>,
}

fn need<T: Clone>(v: &Option<T>, flag: &str, fam: &str) -> Result<T> {
    v.clone().ok_or_else(|| CliError::Config(format!("--family {fam} needs --{flag}")))
}

impl FamilyArgs {
    pub fn is_set(&self) -> bool {
        self.family.is_some()
    }

    pub fn to_family(&self) -> Result<Family> {
        let kind = self.family.ok_or_else(|| CliError::Config("--family is required".into()))?;
        let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
        let f = name.as_str();
        let rs = || -> Result<RsParams> {
            Ok(RsParams {
                rs_n: need(&self.rs_n, "rs-n", f)?,
                r: need(&self.r, "r", f)?,
                t: need(&self.t, "t", f)?,
                restarts: self.restarts.unwrap_or_else(default_restarts),
            })
        };
        Ok(match kind {
            FamilyKind::Bhh => Family::Bhh { n: need(&self.n, "n", f)?, t: need(&self.t, "t", f)?, label: need(&self.label, "label", f)? },
            FamilyKind::Sms => {
                Family::Sms { n: need(&self.n, "n", f)?, k: need(&self.k, "k", f)?, profile: need(&self.profile, "profile", f)? }
            }
            FamilyKind::DenseAlpha => {
                Family::DenseAlpha { rs: rs()?, alpha: need(&self.alpha, "alpha", f)?, theta: need(&self.theta, "theta", f)? }
            }
            FamilyKind::EpsInsert => {
                Family::EpsInsert { rs: rs()?, eps: need(&self.eps, "eps", f)?, label: need(&self.label, "label", f)? }
            }
            FamilyKind::EpsDynamic => {
                Family::EpsDynamic { rs: rs()?, eps: need(&self.eps, "eps", f)?, label: need(&self.label, "label", f)? }
            }
            FamilyKind::Rs => Family::Rs { rs: rs()? },
            FamilyKind::Random => Family::Random { n: need(&self.n, "n", f)?, p: need(&self.p, "p", f)? },
            FamilyKind::PerfectMatching => Family::PerfectMatching { n: need(&self.n, "n", f)?, size: need(&self.size, "size", f)? },
        })
    }
}

fn parse_profile(profile: &str, k: usize) -> Result<Vec<Label>> {
    match profile.to_ascii_lowercase().as_str() {
        "yes" => return Ok(vec![Label::Yes; k]),
        "no" => return Ok(vec![Label::No; k]),
        _ => {}
    }
    profile
        .chars()
        .map(|c| match c.to_ascii_uppercase() {
            'Y' => Ok(Label::Yes),
            'N' => Ok(Label::No),
            _ => Err(CliError::Config(format!("profile letter {c:?} is not Y or N"))),
        })
        .collect()
}

fn rs_graph(p: &RsParams, seed: u64) -> Result<RsGraph> {
    let RsParams { rs_n, r, t, restarts } = *p;
    match build_rs_graph(rs_n, r, t, split_seed(seed, 0x5253), restarts)? {
        RsBuild::Built(rs) => Ok(rs),
        RsBuild::Failure { best_t, attempts } => {
            Err(CliError::Config(format!("no ({r},{t})-RS graph on {rs_n} vertices found in {attempts} attempts (best t = {best_t})")))
        }
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Bhh { .. } => "bhh",
            Family::Sms { .. } => "sms",
            Family::DenseAlpha { .. } => "dense-alpha",
            Family::EpsInsert { .. } => "eps-insert",
            Family::EpsDynamic { .. } => "eps-dynamic",
            Family::Rs { .. } => "rs",
            Family::Random { .. } => "random",
            Family::PerfectMatching { .. } => "perfect-matching",
        }
    }

    /// Draw one instance; families without a gap claim carry no promise.
    pub fn generate(&self, seed: u64) -> Result<GapInstance> {
        let plain = |id: String, graph: Graph| GapInstance { id, graph, promise: None };
        let bundle = |h: &dyn HardInstance| GapInstance { id: h.id(), graph: h.graph().clone(), promise: h.promise() };
        Ok(match *self {
            Family::Bhh { n, t, label } => bundle(&bhh_gap_instance(gen_bhh0(n, t, label.into(), seed)?, seed)?),
            Family::Sms { n, k, ref profile } => bundle(&gen_sms(n, k, &parse_profile(profile, k)?, seed)?),
            Family::DenseAlpha { ref rs, alpha, theta } => {
                if theta > 1 {
                    return Err(CliError::Config("theta must be 0 or 1".into()));
                }
                bundle(&gen_dense_alpha(&rs_graph(rs, seed)?, alpha, theta == 1, seed)?)
            }
            Family::EpsInsert { ref rs, eps, label } => {
                bundle(&gen_eps_instance(EpsVariant::InsertionOnly, &rs_graph(rs, seed)?, eps, label.into(), seed)?)
            }
            Family::EpsDynamic { ref rs, eps, label } => {
                bundle(&gen_eps_instance(EpsVariant::Dynamic, &rs_graph(rs, seed)?, eps, label.into(), seed)?)
            }
            Family::Rs { ref rs } => plain(format!("rs-N{}-r{}-t{}-s{seed}", rs.rs_n, rs.r, rs.t), rs_graph(rs, seed)?.union_graph()),
            Family::Random { n, p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::Config(format!("edge probability {p} is outside [0, 1]")));
                }
                let mut rng = rng_from_seed(seed);
                let mut g = Graph::new(n);
                for u in 0..n as u32 {
                    for v in u + 1..n as u32 {
                        if rng.gen_bool(p) {
                            g.add_edge(u, v)?;
                        }
                    }
                }
                plain(format!("random-n{n}-p{p}-s{seed}"), g)
            }
            Family::PerfectMatching { n, size } => {
                if 2 * size > n {
                    return Err(CliError::Config(format!("{size} disjoint edges do not fit on {n} vertices")));
                }
                let g = Graph::from_edges(n, (0..size as u32).map(|i| (i, n as u32 - 1 - i)))?;
                plain(format!("pm-n{n}-m{size}"), g)
            }
        })
    }
}

/// How a generated instance was written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    Graph,
    Stream,
}

/// Sidecar describing a generated instance and its promised bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub id: String,
    pub seed: u64,
    pub spec: Family,
    pub promise: Option<PromiseRecord>,
    /// Instance file, relative to the manifest's directory.
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<FileFormat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromiseRecord {
    pub direction: String,
    pub value: u64,
}

impl PromiseRecord {
    pub fn from_bound(b: Bound) -> Self {
        PromiseRecord { direction: b.direction().to_string(), value: b.value() }
    }

    pub fn to_bound(&self) -> Result<Bound> {
        Bound::from_parts(&self.direction, self.value)
            .ok_or_else(|| CliError::Config(format!("unknown promise direction {:?}", self.direction)))
    }
}
