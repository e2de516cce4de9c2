//! Edge streams: events, orderings, churn, one-pass consumption.
//!
//! Algorithms never index into a stream. They implement [`StreamConsumer`]
//! and receive events strictly in order, once. Streams can be replayed for
//! repeated trials, which keeps experiments deterministic.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{ordered, Graph, Vertex};
use crate::rng::{rng_from_seed, split_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    Insert,
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StreamEvent {
    pub kind: EventKind,
    pub u: Vertex,
    pub v: Vertex,
}

impl StreamEvent {
    pub fn insert(u: Vertex, v: Vertex) -> Self {
        StreamEvent { kind: EventKind::Insert, u, v }
    }

    pub fn delete(u: Vertex, v: Vertex) -> Self {
        StreamEvent { kind: EventKind::Delete, u, v }
    }

    /// The edge as an ordered pair `(min, max)`.
    pub fn edge(&self) -> (Vertex, Vertex) {
        ordered(self.u, self.v)
    }

    /// `+1` for insertions, `-1` for deletions.
    pub fn delta(&self) -> i64 {
        match self.kind {
            EventKind::Insert => 1,
            EventKind::Delete => -1,
        }
    }

    /// The same edge with the opposite kind.
    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            EventKind::Insert => EventKind::Delete,
            EventKind::Delete => EventKind::Insert,
        };
        StreamEvent { kind, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StreamMode {
    InsertionOnly,
    Dynamic,
}

/// Anything that consumes a stream one event at a time.
pub trait StreamConsumer {
    fn process(&mut self, event: StreamEvent) -> Result<()>;
}

/// Deliver `events` to `consumer` in order.
pub fn feed<C, I>(consumer: &mut C, events: I) -> Result<()>
where
    C: StreamConsumer + ?Sized,
    I: IntoIterator<Item = StreamEvent>,
{
    for ev in events {
        consumer.process(ev)?;
    }
    Ok(())
}

/// An in-memory, validated edge stream over the universe `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeStream {
    n: usize,
    mode: StreamMode,
    events: Vec<StreamEvent>,
}

impl EdgeStream {
    /// Validate endpoints, mode and prefix-validity.
    pub fn new(n: usize, mode: StreamMode, events: Vec<StreamEvent>) -> Result<Self> {
        let mut live: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
        for ev in &events {
            check_event(n, ev)?;
            match ev.kind {
                EventKind::Insert => *live.entry(ev.edge()).or_insert(0) += 1,
                EventKind::Delete => {
                    if mode == StreamMode::InsertionOnly {
                        return Err(Error::WrongMode);
                    }
                    let (u, v) = ev.edge();
                    match live.get_mut(&(u, v)) {
                        Some(c) if *c > 1 => *c -= 1,
                        Some(_) => {
                            live.remove(&(u, v));
                        }
                        None => return Err(Error::PrefixViolation { u, v }),
                    }
                }
            }
        }
        Ok(EdgeStream { n, mode, events })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> StreamMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// A fresh in-order pass over the events.
    pub fn replay(&self) -> impl Iterator<Item = StreamEvent> + Clone + '_ {
        self.events.iter().copied()
    }

    /// The same events reported as a dynamic stream.
    pub fn into_dynamic(self) -> EdgeStream {
        EdgeStream { mode: StreamMode::Dynamic, ..self }
    }

    pub fn into_events(self) -> Vec<StreamEvent> {
        self.events
    }
}

fn check_event(n: usize, ev: &StreamEvent) -> Result<()> {
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

/// Builds the multigraph of surviving edges.
#[derive(Clone, Debug)]
pub struct Materializer {
    graph: Graph,
}

impl Materializer {
    pub fn new(n: usize) -> Self {
        Materializer { graph: Graph::new(n) }
    }

    pub fn finish(self) -> Graph {
        self.graph
    }
}

impl StreamConsumer for Materializer {
    fn process(&mut self, ev: StreamEvent) -> Result<()> {
        match ev.kind {
            EventKind::Insert => self.graph.add_edge(ev.u, ev.v),
            EventKind::Delete => self.graph.remove_edge(ev.u, ev.v),
        }
    }
}

/// The graph left after applying every event of `s`.
pub fn materialize(s: &EdgeStream) -> Result<Graph> {
    materialize_events(s.n(), s.replay())
}

/// Materialise an arbitrary event sequence over `[0, n)`.
pub fn materialize_events<I>(n: usize, events: I) -> Result<Graph>
where
    I: IntoIterator<Item = StreamEvent>,
{
    let mut m = Materializer::new(n);
    feed(&mut m, events)?;
    Ok(m.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrder {
    /// Lexicographic by `(u, v)`.
    Natural,
    /// Uniformly shuffled.
    Shuffled(u64),
    /// Ascending endpoint degree sum, so edges at high-degree vertices
    /// arrive last. Ties in lexicographic order.
    Adversarial,
}

fn edge_list(g: &Graph) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::with_capacity(g.total_multiplicity() as usize);
    for ((u, v), m) in g.edges_with_multiplicity() {
        for _ in 0..m {
            out.push((u, v));
        }
    }
    out
}

/// Insertion-only stream whose materialisation is `g`.
pub fn stream_from_graph(g: &Graph, order: EdgeOrder) -> EdgeStream {
    let mut edges = edge_list(g);
    match order {
        EdgeOrder::Natural => {}
        EdgeOrder::Shuffled(seed) => edges.shuffle(&mut rng_from_seed(seed)),
        EdgeOrder::Adversarial => {
            let deg = g.degrees();
            edges.sort_by_key(|&(u, v)| (deg[u as usize] + deg[v as usize], u, v));
        }
    }
    let events = edges.into_iter().map(|(u, v)| StreamEvent::insert(u, v)).collect();
    EdgeStream { n: g.n(), mode: StreamMode::InsertionOnly, events }
}

/// Dynamic stream that inserts `g` together with `floor(c * |E(g)|)` decoy
/// edges drawn uniformly from the non-edges of `g`, and deletes every decoy
/// after inserting it. Insertions of `g` and decoy events are interleaved
/// uniformly at random.
///
/// With `c = 0` the events coincide with `stream_from_graph(g, Shuffled(seed))`.
pub fn churn_stream(g: &Graph, churn_factor: f64, seed: u64) -> Result<EdgeStream> {
    if !churn_factor.is_finite() || churn_factor < 0.0 {
        return Err(Error::Parameter("churn factor must be a finite non-negative number".into()));
    }
    let edges = edge_list(g);
    let decoys = crate::util::floor_f64(churn_factor * edges.len() as f64) as usize;
    let n = g.n();
    let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if decoys > 0 && pairs <= g.edge_count() as u64 {
        return Err(Error::Parameter("churn requested but the graph has no non-edges".into()));
    }

    #[derive(Clone, Copy)]
    enum Token {
        Edge(usize),
        Decoy(usize),
    }

    let mut drng = rng_from_seed(split_seed(seed, 1));
    let mut decoy_edges = Vec::with_capacity(decoys);
    while decoy_edges.len() < decoys {
        let u = drng.gen_range(0..n as Vertex);
        let v = drng.gen_range(0..n as Vertex);
        if u != v && !g.has_edge(u, v) {
            decoy_edges.push(ordered(u, v));
        }
    }

    let mut tokens: Vec<Token> = (0..edges.len()).map(Token::Edge).collect();
    for d in 0..decoys {
        tokens.push(Token::Decoy(d));
        tokens.push(Token::Decoy(d));
    }
    if decoys == 0 {
        // Shuffle the edge list itself so c = 0 reproduces the shuffled order.
        let mut shuffled = edges;
        shuffled.shuffle(&mut rng_from_seed(seed));
        let events = shuffled.into_iter().map(|(u, v)| StreamEvent::insert(u, v)).collect();
        return Ok(EdgeStream { n, mode: StreamMode::Dynamic, events });
    }
    tokens.shuffle(&mut rng_from_seed(seed));
    let mut seen = alloc::vec![false; decoys];
    let events = tokens
        .into_iter()
        .map(|t| match t {
            Token::Edge(i) => StreamEvent::insert(edges[i].0, edges[i].1),
            Token::Decoy(d) => {
                let (u, v) = decoy_edges[d];
                if seen[d] {
                    StreamEvent::delete(u, v)
                } else {
                    seen[d] = true;
                    StreamEvent::insert(u, v)
                }
            }
        })
        .collect();
    Ok(EdgeStream { n, mode: StreamMode::Dynamic, events })
}
