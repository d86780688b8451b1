//! Core decomposition and local k-core extraction.

use std::collections::VecDeque;

use crate::community::Subgraph;
use crate::dyngraph::{Edge, GraphInstance, VertexId};

/// Core number per vertex, indexed by [`VertexId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreNumbers(pub Vec<u32>);

impl CoreNumbers {
    pub fn get(&self, v: VertexId) -> u32 {
        self.0.get(v as usize).copied().unwrap_or(0)
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

/// Bucket-queue peeling (Batagelj–Zaversnik). `adj` must be symmetric.
pub(crate) fn peel_core_numbers(adj: &[Vec<u32>]) -> Vec<u32> {
    let n = adj.len();
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let md = deg.iter().copied().max().unwrap_or(0);
    let mut bin = vec![0usize; md + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let cnt = *b;
        *b = start;
        start += cnt;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v;
        bin[deg[v]] += 1;
    }
    for d in (1..=md).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i];
        for &u in &adj[v] {
            let u = u as usize;
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    deg.into_iter().map(|d| d as u32).collect()
}

/// Unweighted adjacency of `g` keeping only edges with weight `≥ theta`.
pub(crate) fn filtered_adjacency(g: &GraphInstance, theta: f64) -> Vec<Vec<u32>> {
    g.adjacency()
        .iter()
        .map(|l| l.iter().filter(|&&(_, w)| w >= theta).map(|&(n, _)| n).collect())
        .collect()
}

/// Exact core numbers of `g` in `O(|V| + |E|)`.
pub fn core_decompose(g: &GraphInstance) -> CoreNumbers {
    CoreNumbers(peel_core_numbers(&filtered_adjacency(g, f64::NEG_INFINITY)))
}

/// Core numbers of `G[E≥θ]`.
pub fn core_decompose_filtered(g: &GraphInstance, theta: f64) -> CoreNumbers {
    CoreNumbers(peel_core_numbers(&filtered_adjacency(g, theta)))
}

/// Removes vertices of degree `< k` until none remain. `alive` marks the
/// starting set and is updated in place.
pub(crate) fn peel_to_kcore(adj: &[Vec<u32>], alive: &mut [bool], k: usize) {
    let mut deg: Vec<usize> = adj
        .iter()
        .enumerate()
        .map(|(v, l)| if alive[v] { l.iter().filter(|&&u| alive[u as usize]).count() } else { 0 })
        .collect();
    let mut queue: VecDeque<usize> = (0..adj.len()).filter(|&v| alive[v] && deg[v] < k).collect();
    for &v in &queue {
        alive[v] = false;
    }
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            let u = u as usize;
            if alive[u] {
                deg[u] -= 1;
                if deg[u] < k {
                    alive[u] = false;
                    queue.push_back(u);
                }
            }
        }
    }
}

/// Compact graph over the endpoints of an edge list.
pub(crate) struct LocalGraph {
    pub verts: Vec<VertexId>,
    pub adj: Vec<Vec<u32>>,
}

impl LocalGraph {
    pub fn from_edges(edges: &[Edge]) -> Self {
        let mut verts: Vec<VertexId> = edges.iter().flat_map(|e| [e.u(), e.v()]).collect();
        verts.sort_unstable();
        verts.dedup();
        let mut adj = vec![Vec::new(); verts.len()];
        for e in edges {
            let a = verts.binary_search(&e.u()).unwrap();
            let b = verts.binary_search(&e.v()).unwrap();
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        LocalGraph { verts, adj }
    }

    pub fn local(&self, v: VertexId) -> Option<usize> {
        self.verts.binary_search(&v).ok()
    }
}

fn component_from(adj: &[Vec<u32>], alive: &[bool], start: usize) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut out = vec![start];
    seen[start] = true;
    let mut i = 0;
    while i < out.len() {
        let v = out[i];
        i += 1;
        for &u in &adj[v] {
            let u = u as usize;
            if alive[u] && !seen[u] {
                seen[u] = true;
                out.push(u);
            }
        }
    }
    out
}

/// Connected component containing `q` of the k-core of the graph formed by
/// `edges`, with all of `edges` between retained vertices.
pub fn kcore_component(edges: &[Edge], k: u32, q: VertexId) -> Option<Subgraph> {
    let lg = LocalGraph::from_edges(edges);
    let ql = lg.local(q)?;
    let mut alive = vec![true; lg.verts.len()];
    peel_to_kcore(&lg.adj, &mut alive, k as usize);
    if !alive[ql] {
        return None;
    }
    let mut comp = component_from(&lg.adj, &alive, ql);
    comp.sort_unstable();
    let mut member = vec![false; lg.verts.len()];
    for &v in &comp {
        member[v] = true;
    }
    let vertices: Vec<VertexId> = comp.iter().map(|&i| lg.verts[i]).collect();
    let mut out: Vec<Edge> = edges
        .iter()
        .copied()
        .filter(|e| member[lg.local(e.u()).unwrap()] && member[lg.local(e.v()).unwrap()])
        .collect();
    out.sort_unstable();
    out.dedup();
    Some(Subgraph {
        vertices,
        edges: out,
    })
}

/// Edges of the connected component of `q` in `G[E≥θ]`.
fn component_edges(g: &GraphInstance, theta: f64, q: VertexId) -> Vec<Edge> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![q];
    seen[q as usize] = true;
    let mut edges = Vec::new();
    while let Some(v) = stack.pop() {
        for &(u, w) in g.neighbors(v) {
            if w < theta {
                continue;
            }
            if v < u {
                edges.push(Edge::new(v, u));
            }
            if !seen[u as usize] {
                seen[u as usize] = true;
                stack.push(u);
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Local maximal `(θ,k)`-core containing `q`: the `q`-component of the
/// k-core of `G[E≥θ]`, with every filtered edge between its vertices.
pub fn theta_k_core(g: &GraphInstance, theta: f64, k: u32, q: VertexId) -> Option<Subgraph> {
    if q as usize >= g.vertex_count() || g.degree(q) < k as usize {
        return None;
    }
    kcore_component(&component_edges(g, theta, q), k, q)
}

/// Local maximal k-core containing `q` (no weight filter).
pub fn local_max_kcore(g: &GraphInstance, k: u32, q: VertexId) -> Option<Subgraph> {
    theta_k_core(g, f64::NEG_INFINITY, k, q)
}

/// Size of the largest connected component of the k-core of `g`.
pub fn largest_kcore_component(g: &GraphInstance, k: u32) -> usize {
    let adj = filtered_adjacency(g, f64::NEG_INFINITY);
    let mut alive: Vec<bool> = adj.iter().map(|l| !l.is_empty()).collect();
    peel_to_kcore(&adj, &mut alive, k as usize);
    let mut seen = vec![false; adj.len()];
    let mut best = 0;
    for s in 0..adj.len() {
        if alive[s] && !seen[s] {
            let comp = component_from(&adj, &alive, s);
            for &v in &comp {
                seen[v] = true;
            }
            best = best.max(comp.len());
        }
    }
    best
}
