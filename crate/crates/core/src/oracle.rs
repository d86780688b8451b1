//! Brute-force reference answers for small instances.
//!
//! Nothing here shares code with the search modules: peeling, connectivity
//! and the tie-break are re-implemented directly from the definitions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::community::{Community, SCORE_EPS};
use crate::coredec::CoreNumbers;
use crate::dyngraph::{DynamicNetwork, Edge, GraphInstance, QueryParams, VertexId, Window};
use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 15;
pub const MAX_SNAPSHOTS: usize = 5;

/// Core numbers by repeated removal: `v` has core `≥ k` iff it survives
/// deleting vertices of degree `< k` until nothing changes.
pub fn naive_core_numbers(g: &GraphInstance) -> CoreNumbers {
    let n = g.vertex_count();
    let edges: Vec<Edge> = g.edges().map(|(e, _)| e).collect();
    let mut core = vec![0u32; n];
    let mut k = 1u32;
    loop {
        let alive = survivors(n, &edges, k);
        if !alive.iter().any(|&a| a) {
            break;
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
        k += 1;
    }
    CoreNumbers(core)
}

fn survivors(n: usize, edges: &[Edge], k: u32) -> Vec<bool> {
    let mut alive = vec![false; n];
    for e in edges {
        alive[e.u() as usize] = true;
        alive[e.v() as usize] = true;
    }
    loop {
        let mut deg = vec![0u32; n];
        for e in edges {
            if alive[e.u() as usize] && alive[e.v() as usize] {
                deg[e.u() as usize] += 1;
                deg[e.v() as usize] += 1;
            }
        }
        let mut changed = false;
        for v in 0..n {
            if alive[v] && deg[v] < k {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}

fn reach(n: usize, edges: &[Edge], alive: &[bool], from: VertexId) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[from as usize] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for e in edges {
            let (a, b) = (e.u() as usize, e.v() as usize);
            if alive[a] && alive[b] && seen[a] != seen[b] {
                seen[a] = true;
                seen[b] = true;
                changed = true;
            }
        }
    }
    seen
}

/// `q`-component of the k-core of the graph formed by `edges`.
fn q_core(n: usize, edges: &[Edge], k: u32, q: VertexId) -> Option<(Vec<VertexId>, Vec<Edge>)> {
    let alive = survivors(n, edges, k);
    if !alive[q as usize] {
        return None;
    }
    let comp = reach(n, edges, &alive, q);
    let vs: Vec<VertexId> = (0..n as VertexId).filter(|&v| comp[v as usize]).collect();
    let es: Vec<Edge> = edges
        .iter()
        .copied()
        .filter(|e| comp[e.u() as usize] && comp[e.v() as usize])
        .collect();
    Some((vs, es))
}

/// Largest connected k-core component of any snapshot in `window`.
pub fn naive_v_k_max(net: &DynamicNetwork, k: u32, window: Window) -> usize {
    let n = net.vertex_count();
    let mut best = 0;
    for t in window.iter() {
        let edges: Vec<Edge> = net.snapshot(t).edges().map(|(e, _)| e).collect();
        let alive = survivors(n, &edges, k);
        let mut done = vec![false; n];
        for s in 0..n {
            if alive[s] && !done[s] {
                let comp = reach(n, &edges, &alive, s as VertexId);
                let size = comp.iter().filter(|&&c| c).count();
                for v in 0..n {
                    done[v] |= comp[v];
                }
                best = best.max(size);
            }
        }
    }
    best
}

fn naive_score(size: usize, duration: usize, v_k_max: usize, window_len: usize, alpha: f64) -> f64 {
    if size == 0 || duration == 0 {
        return 0.0;
    }
    let nv = size as f64 / v_k_max as f64;
    let nt = duration as f64 / window_len as f64;
    (1.0 + alpha * alpha) * nv * nt / (alpha * alpha * nv + nt)
}

/// Edges present with weight `≥ θ` in every snapshot of `interval`.
fn persistent_edges(net: &DynamicNetwork, theta: f64, interval: Window) -> Vec<Edge> {
    let first = net.snapshot(interval.start);
    first
        .edges()
        .filter(|&(e, _)| {
            interval
                .iter()
                .all(|t| net.snapshot(t).weight(e.u(), e.v()).is_some_and(|w| w >= theta))
        })
        .map(|(e, _)| e)
        .collect()
}

/// Maximal community containing `q` whose edge set persists over exactly
/// the snapshots of `interval`.
pub fn maximal_crc(net: &DynamicNetwork, params: &QueryParams, interval: Window) -> Option<(Vec<VertexId>, Vec<Edge>)> {
    let edges = persistent_edges(net, params.theta, interval);
    q_core(net.vertex_count(), &edges, params.k, params.q)
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub interval: Window,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub score: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub best_score: f64,
    pub best_community: Option<Community>,
    pub all_candidates: Vec<Candidate>,
}

/// Sort key under which the preferred candidate is smallest, once scores
/// are within tolerance.
fn prefer(a: &Candidate, b: &Candidate) -> bool {
    if (a.score - b.score).abs() > SCORE_EPS {
        return a.score > b.score;
    }
    let ka = (usize::MAX - a.interval.len(), a.interval.start, a.vertices.len(), &a.vertices);
    let kb = (usize::MAX - b.interval.len(), b.interval.start, b.vertices.len(), &b.vertices);
    ka < kb
}

/// Whether an arbitrary edge set is a valid community for `params` over
/// `interval`, straight from the definition.
pub fn is_valid_crc(net: &DynamicNetwork, params: &QueryParams, interval: Window, edges: &[Edge]) -> bool {
    let n = net.vertex_count();
    let mut deg = vec![0u32; n];
    for e in edges {
        deg[e.u() as usize] += 1;
        deg[e.v() as usize] += 1;
    }
    if deg[params.q as usize] == 0 {
        return false;
    }
    if deg.iter().any(|&d| d > 0 && d < params.k) {
        return false;
    }
    let used: Vec<bool> = deg.iter().map(|&d| d > 0).collect();
    let comp = reach(n, edges, &used, params.q);
    if (0..n).any(|v| used[v] && !comp[v]) {
        return false;
    }
    interval.iter().all(|t| {
        edges
            .iter()
            .all(|e| net.snapshot(t).weight(e.u(), e.v()).is_some_and(|w| w >= params.theta))
    })
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Random edge subsets checked against the maximal construction.
    pub subset_samples: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            subset_samples: 1000,
            seed: 0x5eed,
        }
    }
}

/// Exhaustive answer over every interval of the query window.
pub fn brute_force_query(net: &DynamicNetwork, params: &QueryParams) -> Result<OracleResult> {
    brute_force_query_with(net, params, OracleOptions::default())
}

pub fn brute_force_query_with(net: &DynamicNetwork, params: &QueryParams, opts: OracleOptions) -> Result<OracleResult> {
    if net.vertex_count() > MAX_VERTICES || net.num_snapshots() > MAX_SNAPSHOTS {
        return Err(Error::OracleGuard(format!(
            "{} vertices / {} snapshots exceeds the {MAX_VERTICES}/{MAX_SNAPSHOTS} limit",
            net.vertex_count(),
            net.num_snapshots()
        )));
    }
    params.validate(net)?;
    let w = params.window;
    let v_k_max = naive_v_k_max(net, params.k, w);
    let mut all = Vec::new();
    let mut per_interval = Vec::new();
    if v_k_max > 0 {
        for a in w.iter() {
            for b in a..=w.end {
                let iv = Window::new(a, b);
                let edges = persistent_edges(net, params.theta, iv);
                per_interval.push((iv, edges.clone()));
                if let Some((vs, es)) = q_core(net.vertex_count(), &edges, params.k, params.q) {
                    if !is_valid_crc(net, params, iv, &es) {
                        return Err(Error::Invariant(format!("oracle candidate over {iv:?} fails the definition")));
                    }
                    let score = naive_score(vs.len(), iv.len(), v_k_max, w.len(), params.alpha);
                    all.push(Candidate {
                        interval: iv,
                        vertices: vs,
                        edges: es,
                        score,
                    });
                }
            }
        }
    }

    subset_check(net, params, &per_interval, &all, opts)?;

    let mut best: Option<&Candidate> = None;
    for c in &all {
        if best.is_none_or(|b| prefer(c, b)) {
            best = Some(c);
        }
    }
    let best_community = best.map(|c| Community {
        vertices: c.vertices.clone(),
        edges: c.edges.clone(),
        interval: c.interval,
        score: c.score,
    });
    Ok(OracleResult {
        best_score: best.map_or(0.0, |c| c.score),
        best_community,
        all_candidates: all,
    })
}

/// Every valid community over an interval must sit inside the maximal one
/// built for that interval.
fn subset_check(
    net: &DynamicNetwork,
    params: &QueryParams,
    per_interval: &[(Window, Vec<Edge>)],
    all: &[Candidate],
    opts: OracleOptions,
) -> Result<()> {
    let pool: Vec<&(Window, Vec<Edge>)> = per_interval.iter().filter(|(_, es)| !es.is_empty()).collect();
    if pool.is_empty() {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.subset_samples {
        let (iv, edges) = pool[rng.gen_range(0..pool.len())];
        let keep = rng.gen_range(0.3..1.0);
        let mut sub: Vec<Edge> = edges.iter().copied().filter(|_| rng.gen_bool(keep)).collect();
        sub.shuffle(&mut rng);
        sub.sort_unstable();
        if !is_valid_crc(net, params, *iv, &sub) {
            continue;
        }
        let Some(max) = all.iter().find(|c| c.interval == *iv) else {
            return Err(Error::Invariant(format!("valid community over {iv:?} but no maximal candidate")));
        };
        if sub.iter().any(|e| max.edges.binary_search(e).is_err()) {
            return Err(Error::Invariant(format!("edge subset over {iv:?} escapes the maximal candidate")));
        }
    }
    Ok(())
}

/// Shape of a random dynamic network.
#[derive(Clone, Copy, Debug)]
pub struct RandomSpec {
    pub vertices: usize,
    pub snapshots: usize,
    /// Probability that a vertex pair is in the base graph.
    pub density: f64,
    /// Probability that a base edge is present in a given snapshot.
    pub presence: f64,
}

/// Random dynamic network: a base graph whose edges flicker across
/// snapshots, with weights in steps of 0.05 (so both grid and off-grid
/// values appear).
pub fn random_network(spec: RandomSpec, seed: u64) -> DynamicNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_network_with(spec, &mut rng)
}

pub fn random_network_with<R: Rng>(spec: RandomSpec, rng: &mut R) -> DynamicNetwork {
    let n = spec.vertices as u32;
    let base: Vec<(u32, u32)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(spec.density))
        .collect();
    let snaps = (0..spec.snapshots)
        .map(|_| {
            let mut es = Vec::new();
            for &(u, v) in &base {
                if rng.gen_bool(spec.presence) {
                    es.push((u, v, rng.gen_range(1..=20) as f64 / 20.0));
                }
            }
            es
        })
        .collect();
    DynamicNetwork::from_snapshot_edges(spec.vertices, snaps).unwrap()
}
