//! Dynamic weighted graph model: snapshots over a shared vertex universe.

mod binary;
mod ingest;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use binary::{read_network, write_network};
pub use ingest::{ingest_edge_stream, IngestOptions, WeightMode};

/// Dense vertex id in `0..vertex_count`.
pub type VertexId = u32;

/// Index into the snapshot sequence.
pub type Timestamp = usize;

/// Undirected edge with endpoints stored in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        debug_assert_ne!(a, b, "self-loop edge");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(self) -> VertexId {
        self.0
    }

    pub fn v(self) -> VertexId {
        self.1
    }
}

/// One weighted snapshot. Adjacency lists are kept sorted by neighbor id and
/// every edge is stored in both directions with the same weight in `(0,1]`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GraphInstance {
    adj: Vec<Vec<(VertexId, f64)>>,
    edge_count: usize,
}

fn check_weight(w: f64) -> Result<()> {
    if w > 0.0 && w <= 1.0 {
        Ok(())
    } else {
        Err(Error::Invariant(format!("edge weight {w} outside (0,1]")))
    }
}

impl GraphInstance {
    pub fn empty(vertex_count: usize) -> Self {
        GraphInstance {
            adj: vec![Vec::new(); vertex_count],
            edge_count: 0,
        }
    }

    /// Builds a snapshot from `(u, v, w)` triples. Rejects self-loops,
    /// duplicate pairs, out-of-range endpoints and weights outside `(0,1]`.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let mut g = GraphInstance::empty(vertex_count);
        for (u, v, w) in edges {
            if u == v {
                return Err(Error::Invariant(format!("self-loop on vertex {u}")));
            }
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::Invariant(format!(
                    "edge ({u},{v}) outside vertex universe of size {vertex_count}"
                )));
            }
            check_weight(w)?;
            g.adj[u as usize].push((v, w));
            g.adj[v as usize].push((u, w));
            g.edge_count += 1;
        }
        for list in &mut g.adj {
            list.sort_by_key(|&(n, _)| n);
            if list.windows(2).any(|p| p[0].0 == p[1].0) {
                return Err(Error::Invariant("duplicate edge".into()));
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, f64)] {
        self.adj.get(v as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Neighbor count of `v`; 0 for isolated or unknown vertices.
    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let list = self.neighbors(u);
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.weight(e.u(), e.v()).is_some()
    }

    /// All edges with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as VertexId;
            list.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, w)| (Edge(u, v), w))
        })
    }

    /// Vertices with at least one incident edge.
    pub fn active_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(v, _)| v as VertexId)
    }

    /// Subgraph containing exactly `edge_set` (and its endpoints), weights
    /// taken from `self`.
    pub fn induced_by_edges(&self, edge_set: &[Edge]) -> Result<GraphInstance> {
        let mut triples = Vec::with_capacity(edge_set.len());
        let mut sorted = edge_set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for e in sorted {
            let w = self.weight(e.u(), e.v()).ok_or_else(|| {
                Error::Invariant(format!("edge ({},{}) not in graph", e.u(), e.v()))
            })?;
            triples.push((e.u(), e.v(), w));
        }
        GraphInstance::from_edges(self.vertex_count(), triples)
    }

    /// Inserts or reweights `(u,v)`. Returns the previous weight.
    pub fn set_edge(&mut self, u: VertexId, v: VertexId, w: f64) -> Result<Option<f64>> {
        if u == v {
            return Err(Error::Invariant(format!("self-loop on vertex {u}")));
        }
        if u as usize >= self.adj.len() || v as usize >= self.adj.len() {
            return Err(Error::Invariant(format!("edge ({u},{v}) outside vertex universe")));
        }
        check_weight(w)?;
        let old = upsert(&mut self.adj[u as usize], v, w);
        upsert(&mut self.adj[v as usize], u, w);
        if old.is_none() {
            self.edge_count += 1;
        }
        Ok(old)
    }

    /// Removes `(u,v)`, returning its weight if it was present.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Option<f64> {
        let old = remove(self.adj.get_mut(u as usize)?, v)?;
        remove(&mut self.adj[v as usize], u);
        self.edge_count -= 1;
        Some(old)
    }

    pub(crate) fn adjacency(&self) -> &[Vec<(VertexId, f64)>] {
        &self.adj
    }
}

fn upsert(list: &mut Vec<(VertexId, f64)>, n: VertexId, w: f64) -> Option<f64> {
    match list.binary_search_by_key(&n, |&(x, _)| x) {
        Ok(i) => Some(std::mem::replace(&mut list[i].1, w)),
        Err(i) => {
            list.insert(i, (n, w));
            None
        }
    }
}

fn remove(list: &mut Vec<(VertexId, f64)>, n: VertexId) -> Option<f64> {
    let i = list.binary_search_by_key(&n, |&(x, _)| x).ok()?;
    Some(list.remove(i).1)
}

/// Neighbor count of `v` in `g`.
pub fn degree(v: VertexId, g: &GraphInstance) -> usize {
    g.degree(v)
}

/// Ordered snapshots over one vertex universe, plus the external label map.
#[derive(Clone, Debug, PartialEq)]
pub struct DynamicNetwork {
    snapshots: Vec<GraphInstance>,
    labels: Vec<String>,
    by_label: HashMap<String, VertexId>,
}

impl DynamicNetwork {
    pub fn new(labels: Vec<String>, snapshots: Vec<GraphInstance>) -> Result<Self> {
        let n = labels.len();
        if let Some(bad) = snapshots.iter().position(|g| g.vertex_count() != n) {
            return Err(Error::Invariant(format!(
                "snapshot {bad} has {} vertices, expected {n}",
                snapshots[bad].vertex_count()
            )));
        }
        let mut by_label = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if by_label.insert(l.clone(), i as VertexId).is_some() {
                return Err(Error::Invariant(format!("duplicate vertex label {l:?}")));
            }
        }
        Ok(DynamicNetwork {
            snapshots,
            labels,
            by_label,
        })
    }

    /// Convenience constructor with labels `"0".."n-1"`.
    pub fn from_snapshot_edges(
        vertex_count: usize,
        snapshots: Vec<Vec<(VertexId, VertexId, f64)>>,
    ) -> Result<Self> {
        let labels = (0..vertex_count).map(|i| i.to_string()).collect();
        let snaps = snapshots
            .into_iter()
            .map(|es| GraphInstance::from_edges(vertex_count, es))
            .collect::<Result<Vec<_>>>()?;
        DynamicNetwork::new(labels, snaps)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn num_snapshots(&self) -> usize {
        self.snapshots.len()
    }

    pub fn snapshot(&self, t: Timestamp) -> &GraphInstance {
        &self.snapshots[t]
    }

    pub fn snapshots(&self) -> &[GraphInstance] {
        &self.snapshots
    }

    pub(crate) fn snapshot_mut(&mut self, t: Timestamp) -> &mut GraphInstance {
        &mut self.snapshots[t]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.by_label.get(label).copied()
    }

    /// Resolves a label, failing with a parameter error when unknown.
    pub fn resolve(&self, label: &str) -> Result<VertexId> {
        self.vertex(label)
            .ok_or_else(|| Error::Param(format!("unknown vertex label {label:?}")))
    }

    pub fn full_window(&self) -> Window {
        Window::new(0, self.num_snapshots().saturating_sub(1))
    }
}

/// Inclusive snapshot interval `[start, end]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Window {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl Window {
    pub fn new(start: Timestamp, end: Timestamp) -> Self {
        Window { start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    pub fn contains(&self, t: Timestamp) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<Timestamp> {
        self.start..=self.end
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryParams {
    pub q: VertexId,
    pub k: u32,
    pub theta: f64,
    pub window: Window,
    pub alpha: f64,
}

impl QueryParams {
    pub fn new(q: VertexId, k: u32, theta: f64, window: Window) -> Self {
        QueryParams {
            q,
            k,
            theta,
            window,
            alpha: 1.0,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self, net: &DynamicNetwork) -> Result<()> {
        if self.window.start > self.window.end {
            return Err(Error::Param(format!(
                "window start {} after end {}",
                self.window.start, self.window.end
            )));
        }
        if self.window.end >= net.num_snapshots() {
            return Err(Error::Param(format!(
                "window end {} beyond last snapshot {}",
                self.window.end,
                net.num_snapshots() as isize - 1
            )));
        }
        if self.k == 0 {
            return Err(Error::Param("k must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::Param(format!("theta {} outside [0,1]", self.theta)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Param(format!("alpha {} must be finite and >= 0", self.alpha)));
        }
        if self.q as usize >= net.vertex_count() {
            return Err(Error::Param(format!("query vertex {} out of range", self.q)));
        }
        Ok(())
    }
}
