//! Weighted core forest index.
//!
//! For each snapshot `t` and each `k` up to the snapshot's largest core
//! number, a forest groups the k-indexed vertices by their θ-threshold: the
//! largest grid value `θ'` for which the vertex still lies in a k-core of
//! `G_t[E≥θ']`. A node holds the vertices that first reach the k-core at its
//! level within one connected region, and its subtree is contained in one
//! `(θ',k)`-core component. Parents always sit at strictly lower levels.

mod io;

use std::collections::HashMap;

use serde::Serialize;

use crate::community::Subgraph;
use crate::compress::AuxiliaryTable;
use crate::coredec::{filtered_adjacency, kcore_component, peel_core_numbers};
use crate::dyngraph::{DynamicNetwork, Edge, GraphInstance, Timestamp, VertexId, Window};
use crate::error::{Error, Result};

pub use io::{encoded_len, load, save, to_debug_json};

/// Ascending list of admissible threshold values, starting at 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaGrid {
    values: Vec<f64>,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        ThetaGrid::standard()
    }
}

impl ThetaGrid {
    /// `{0.0, 0.1, …, 1.0}`.
    pub fn standard() -> Self {
        ThetaGrid {
            values: (0..=10).map(|i| i as f64 / 10.0).collect(),
        }
    }

    /// `steps` equal steps over `[0,1]`.
    pub fn uniform(steps: u8) -> Result<Self> {
        if steps == 0 || steps == u8::MAX {
            return Err(Error::Config(format!("grid steps {steps} outside 1..=254")));
        }
        ThetaGrid::new((0..=steps).map(|i| i as f64 / steps as f64).collect())
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.first() != Some(&0.0) {
            return Err(Error::Config("theta grid must start at 0".into()));
        }
        if values.len() > u8::MAX as usize {
            return Err(Error::Config(format!("theta grid has {} values, at most 255 allowed", values.len())));
        }
        if values.windows(2).any(|w| w[0] >= w[1] || w[0].is_nan()) || values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Config("theta grid must be strictly increasing within [0,1]".into()));
        }
        Ok(ThetaGrid { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, level: u8) -> f64 {
        self.values[level as usize]
    }

    /// Index of the largest grid value `≤ x`; `x` must be `≥ 0`.
    pub fn floor_index(&self, x: f64) -> u8 {
        (self.values.partition_point(|&g| g <= x).max(1) - 1) as u8
    }

    pub fn top(&self) -> u8 {
        (self.values.len() - 1) as u8
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NodePayload {
    Vertices(Vec<VertexId>),
    Virtual(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    /// Grid level of the node's θ-threshold.
    pub theta: u8,
    pub parent: Option<u32>,
    pub children: Vec<u32>,
    pub payload: NodePayload,
}

/// All θ-trees of one `(k,t)` pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Forest {
    pub(crate) nodes: Vec<TreeNode>,
    /// `(vertex, node id)` sorted by vertex.
    #[serde(skip)]
    pub(crate) locator: Vec<(VertexId, u32)>,
}

impl Forest {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node_of(&self, v: VertexId) -> Option<u32> {
        self.locator
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| self.locator[i].1)
    }

    pub fn vertex_count(&self) -> usize {
        self.locator.len()
    }

    pub fn roots(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.nodes.len() as u32).filter(|&i| self.nodes[i as usize].parent.is_none())
    }
}

/// Index data for one snapshot.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SnapshotIndex {
    /// `forests[k-1]`.
    pub(crate) forests: Vec<Forest>,
    /// `max_component[k-1]`: largest connected k-core component of `G_t`.
    pub(crate) max_component: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WcfIndex {
    pub(crate) grid: ThetaGrid,
    pub(crate) vertex_count: usize,
    pub(crate) snapshots: Vec<SnapshotIndex>,
    pub(crate) aux: AuxiliaryTable,
}

/// Canonical node: level, vertex set and parent's `(level, vertex set)`.
pub type CanonicalNode = (u8, Vec<VertexId>, Option<(u8, Vec<VertexId>)>);

/// Per-vertex threshold levels: `th[v][k-1]` for `k = 1..=core(v)`.
pub fn thresholds(g: &GraphInstance, grid: &ThetaGrid) -> Vec<Vec<u8>> {
    let n = g.vertex_count();
    let mut th: Vec<Vec<u8>> = vec![Vec::new(); n];
    for level in (0..grid.len()).rev() {
        let cores = peel_core_numbers(&filtered_adjacency(g, grid.values[level]));
        for v in 0..n {
            while (th[v].len() as u32) < cores[v] {
                th[v].push(level as u8);
            }
        }
    }
    th
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns `(winner, loser)` roots, or `None` if already joined.
    fn union(&mut self, a: u32, b: u32) -> Option<(u32, u32)> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        Some((ra, rb))
    }
}

/// Builds the θ-trees over `region` (sorted). `level_of(v)` gives the
/// k-threshold level of each region vertex. Returns the nodes with parent
/// links set and the size of the largest connected component of the region.
pub(crate) fn build_trees(
    g: &GraphInstance,
    grid: &ThetaGrid,
    region: &[VertexId],
    level_of: &dyn Fn(VertexId) -> u8,
) -> (Vec<TreeNode>, usize) {
    let m = region.len();
    let local = |v: VertexId| region.binary_search(&v).ok();
    let levels = grid.len();
    let mut verts_at: Vec<Vec<u32>> = vec![Vec::new(); levels];
    let mut edges_at: Vec<Vec<(u32, u32)>> = vec![Vec::new(); levels];
    let lv: Vec<u8> = region.iter().map(|&v| level_of(v)).collect();
    for (i, &v) in region.iter().enumerate() {
        verts_at[lv[i] as usize].push(i as u32);
        for &(u, w) in g.neighbors(v) {
            if u <= v {
                continue;
            }
            if let Some(j) = local(u) {
                let l = lv[i].min(lv[j]).min(grid.floor_index(w));
                edges_at[l as usize].push((i as u32, j as u32));
            }
        }
    }

    let mut uf = UnionFind::new(m);
    let mut tops: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut nodes: Vec<TreeNode> = Vec::new();
    for level in (0..levels).rev() {
        for &(a, b) in &edges_at[level] {
            if let Some((win, lose)) = uf.union(a, b) {
                let moved = std::mem::take(&mut tops[lose as usize]);
                tops[win as usize].extend(moved);
            }
        }
        let mut groups: HashMap<u32, Vec<VertexId>> = HashMap::new();
        for &i in &verts_at[level] {
            groups.entry(uf.find(i)).or_default().push(region[i as usize]);
        }
        let mut keys: Vec<u32> = groups.keys().copied().collect();
        keys.sort_unstable_by_key(|r| groups[r].iter().min().copied());
        for root in keys {
            let mut vs = groups.remove(&root).unwrap();
            vs.sort_unstable();
            let id = nodes.len() as u32;
            for &c in &tops[root as usize] {
                nodes[c as usize].parent = Some(id);
            }
            nodes.push(TreeNode {
                theta: level as u8,
                parent: None,
                children: Vec::new(),
                payload: NodePayload::Vertices(vs),
            });
            tops[root as usize] = vec![id];
        }
    }
    let mut largest = 0;
    for i in 0..m as u32 {
        if uf.find(i) == i {
            largest = largest.max(uf.size[i as usize] as usize);
        }
    }
    (nodes, largest)
}

/// Forests and component sizes for one snapshot.
pub(crate) fn build_snapshot(g: &GraphInstance, grid: &ThetaGrid) -> SnapshotIndex {
    let th = thresholds(g, grid);
    let kmax = th.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = SnapshotIndex::default();
    for k in 1..=kmax {
        let region: Vec<VertexId> = (0..g.vertex_count() as VertexId)
            .filter(|&v| th[v as usize].len() >= k)
            .collect();
        let (nodes, largest) = build_trees(g, grid, &region, &|v| th[v as usize][k - 1]);
        let mut f = Forest {
            nodes,
            locator: Vec::new(),
        };
        relink(&mut f, &AuxiliaryTable::default());
        out.forests.push(f);
        out.max_component.push(largest as u32);
    }
    out
}

/// Recomputes children lists (ascending ids) and the vertex locator from
/// parent links and payloads.
pub(crate) fn relink(f: &mut Forest, aux: &AuxiliaryTable) {
    for n in f.nodes.iter_mut() {
        n.children.clear();
    }
    for i in 0..f.nodes.len() {
        if let Some(p) = f.nodes[i].parent {
            f.nodes[p as usize].children.push(i as u32);
        }
    }
    let mut loc = Vec::new();
    for (i, n) in f.nodes.iter().enumerate() {
        let vs = match &n.payload {
            NodePayload::Vertices(vs) => vs.as_slice(),
            NodePayload::Virtual(id) => aux.get(*id).unwrap_or(&[]),
        };
        loc.extend(vs.iter().map(|&v| (v, i as u32)));
    }
    loc.sort_unstable();
    f.locator = loc;
}

impl WcfIndex {
    /// Builds the index over the standard grid.
    pub fn build(net: &DynamicNetwork) -> Self {
        Self::build_with_grid(net, ThetaGrid::standard())
    }

    pub fn build_with_grid(net: &DynamicNetwork, grid: ThetaGrid) -> Self {
        #[cfg(feature = "parallel")]
        let snapshots = {
            use rayon::prelude::*;
            net.snapshots().par_iter().map(|g| build_snapshot(g, &grid)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let snapshots = net.snapshots().iter().map(|g| build_snapshot(g, &grid)).collect();
        WcfIndex {
            grid,
            vertex_count: net.vertex_count(),
            snapshots,
            aux: AuxiliaryTable::default(),
        }
    }

    pub fn grid(&self) -> &ThetaGrid {
        &self.grid
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn num_snapshots(&self) -> usize {
        self.snapshots.len()
    }

    pub fn aux(&self) -> &AuxiliaryTable {
        &self.aux
    }

    pub fn is_compressed(&self) -> bool {
        !self.aux.is_empty()
    }

    /// Largest k with a non-empty forest at `t`.
    pub fn k_max(&self, t: Timestamp) -> u32 {
        self.snapshots[t].forests.len() as u32
    }

    pub fn forest(&self, k: u32, t: Timestamp) -> Option<&Forest> {
        if k == 0 {
            return None;
        }
        self.snapshots.get(t)?.forests.get(k as usize - 1)
    }

    /// Vertices stored in `node`, resolving virtual references.
    pub fn node_vertices<'a>(&'a self, node: &'a TreeNode) -> Result<&'a [VertexId]> {
        match &node.payload {
            NodePayload::Vertices(vs) => Ok(vs),
            NodePayload::Virtual(id) => self.aux.get(*id).ok_or(Error::DanglingRef(*id)),
        }
    }

    /// Grid level of `v`'s k-threshold at `t`.
    pub fn threshold(&self, k: u32, t: Timestamp, v: VertexId) -> Option<u8> {
        let f = self.forest(k, t)?;
        f.node_of(v).map(|n| f.nodes[n as usize].theta)
    }

    pub fn threshold_value(&self, k: u32, t: Timestamp, v: VertexId) -> Option<f64> {
        self.threshold(k, t, v).map(|l| self.grid.value(l))
    }

    /// Largest connected k-core component of `G_t` (unweighted).
    pub fn max_component(&self, k: u32, t: Timestamp) -> usize {
        if k == 0 {
            return 0;
        }
        self.snapshots[t]
            .max_component
            .get(k as usize - 1)
            .copied()
            .unwrap_or(0) as usize
    }

    pub fn v_k_max(&self, k: u32, window: Window) -> usize {
        window.iter().map(|t| self.max_component(k, t)).max().unwrap_or(0)
    }

    /// Stored vertex entries with virtual nodes expanded: `Σ_t Σ_v core(v,G_t)`.
    pub fn vertex_slots(&self) -> usize {
        self.snapshots
            .iter()
            .flat_map(|s| &s.forests)
            .map(Forest::vertex_count)
            .sum()
    }

    pub fn check_compatible(&self, net: &DynamicNetwork) -> Result<()> {
        if self.vertex_count != net.vertex_count() || self.snapshots.len() != net.num_snapshots() {
            return Err(Error::Config(format!(
                "index covers {} vertices / {} snapshots, network has {} / {}",
                self.vertex_count,
                self.snapshots.len(),
                net.vertex_count(),
                net.num_snapshots()
            )));
        }
        Ok(())
    }

    /// The `(θ,k)`-core component of `q` in `G_t`, answered from the index.
    ///
    /// Regions are grown through vertices whose threshold reaches
    /// `floor(θ)` on the grid, absorbing whole subtrees when their level
    /// guarantees connectivity above `θ`. For off-grid `θ` the collected
    /// region is peeled once more.
    pub fn query_c1(&self, net: &DynamicNetwork, k: u32, theta: f64, t: Timestamp, q: VertexId) -> Option<Subgraph> {
        let f = self.forest(k, t)?;
        let g = net.snapshot(t);
        let level = self.grid.floor_index(theta.max(0.0));
        let qn = f.node_of(q)?;
        if f.nodes[qn as usize].theta < level {
            return None;
        }
        let on_grid = self.grid.value(level) == theta;
        let mut seen = vec![false; g.vertex_count()];
        let mut absorbed = vec![false; f.nodes.len()];
        let mut queue: Vec<VertexId> = Vec::new();

        let mut admit = |v: VertexId, queue: &mut Vec<VertexId>, seen: &mut Vec<bool>| {
            let Some(n) = f.node_of(v) else { return };
            let node = &f.nodes[n as usize];
            if node.theta < level || seen[v as usize] {
                return;
            }
            if node.theta > level || on_grid {
                let mut stack = vec![n];
                while let Some(x) = stack.pop() {
                    if absorbed[x as usize] {
                        continue;
                    }
                    absorbed[x as usize] = true;
                    let nx = &f.nodes[x as usize];
                    for &u in self.node_vertices(nx).unwrap_or(&[]) {
                        if !seen[u as usize] {
                            seen[u as usize] = true;
                            queue.push(u);
                        }
                    }
                    stack.extend(nx.children.iter().copied());
                }
            } else {
                seen[v as usize] = true;
                queue.push(v);
            }
        };

        admit(q, &mut queue, &mut seen);
        let mut i = 0;
        while i < queue.len() {
            let v = queue[i];
            i += 1;
            for &(u, w) in g.neighbors(v) {
                if w >= theta && !seen[u as usize] {
                    admit(u, &mut queue, &mut seen);
                }
            }
        }
        queue.sort_unstable();
        let mut edges = Vec::new();
        for &v in &queue {
            for &(u, w) in g.neighbors(v) {
                if u > v && w >= theta && seen[u as usize] {
                    edges.push(Edge::new(v, u));
                }
            }
        }
        edges.sort_unstable();
        if on_grid {
            Some(Subgraph {
                vertices: queue,
                edges,
            })
        } else {
            kcore_component(&edges, k, q)
        }
    }

    /// Forest of `(k,t)` as a sorted list of canonical nodes.
    pub fn canonical_forest(&self, k: u32, t: Timestamp) -> Vec<CanonicalNode> {
        let Some(f) = self.forest(k, t) else {
            return Vec::new();
        };
        let vs = |n: &TreeNode| self.node_vertices(n).map(<[_]>::to_vec).unwrap_or_default();
        let mut out: Vec<CanonicalNode> = f
            .nodes
            .iter()
            .map(|n| {
                let parent = n.parent.map(|p| {
                    let pn = &f.nodes[p as usize];
                    (pn.theta, vs(pn))
                });
                (n.theta, vs(n), parent)
            })
            .collect();
        out.sort();
        out
    }

    /// Structural equality: same grid, snapshot count, per-`(k,t)` node
    /// partitions, levels, parent relations and component sizes. Node ids
    /// and compression are ignored.
    pub fn structurally_equal(&self, other: &WcfIndex) -> bool {
        if self.grid != other.grid
            || self.vertex_count != other.vertex_count
            || self.snapshots.len() != other.snapshots.len()
        {
            return false;
        }
        (0..self.snapshots.len()).all(|t| {
            self.k_max(t) == other.k_max(t)
                && self.snapshots[t].max_component == other.snapshots[t].max_component
                && (1..=self.k_max(t)).all(|k| self.canonical_forest(k, t) == other.canonical_forest(k, t))
        })
    }
}
