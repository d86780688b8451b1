//! Online search by eligible-edge filtering.
//!
//! Each snapshot contributes the edges of the `(θ,k)`-core component of `q`.
//! An edge's lasting time counts how many consecutive snapshots, ending at
//! the current one, it has stayed in that set. Edges lasting at least `d`
//! at `t_n` contain every community over `[t_n−d+1, t_n]`, so one core
//! extraction per `(t_n, d)` pair finds the maximal one.

use serde::Serialize;

use crate::community::{offer, Community, SCORE_EPS};
use crate::coredec::{kcore_component, theta_k_core};
use crate::dyngraph::{DynamicNetwork, Edge, GraphInstance, QueryParams, Timestamp, Window};
use crate::error::{Error, Result};
use crate::reliability::{max_kcore_size, score, ubr_edge_set, ReliabilityContext};

/// Eligible edges at one snapshot with their lasting times.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EligibleEdgeState {
    edges: Vec<Edge>,
    lasting: Vec<u32>,
}

impl EligibleEdgeState {
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Lasting time of `e`, 0 when it is not eligible.
    pub fn lasting(&self, e: Edge) -> u32 {
        self.edges
            .binary_search(&e)
            .map_or(0, |i| self.lasting[i])
    }

    /// Edges that have lasted at least `d` snapshots.
    pub fn lasting_at_least(&self, d: u32) -> Vec<Edge> {
        self.edges
            .iter()
            .zip(&self.lasting)
            .filter(|&(_, &l)| l >= d)
            .map(|(&e, _)| e)
            .collect()
    }

    fn count_at_least(&self, d: u32) -> usize {
        self.lasting.iter().filter(|&&l| l >= d).count()
    }
}

/// Advances the lasting times by one snapshot and returns the bound for
/// duration-1 communities ending here.
pub fn scan_snapshot(
    g: &GraphInstance,
    params: &QueryParams,
    prev: &EligibleEdgeState,
    ctx: &ReliabilityContext,
) -> (EligibleEdgeState, f64) {
    let Some(core) = theta_k_core(g, params.theta, params.k, params.q) else {
        return (EligibleEdgeState::default(), 0.0);
    };
    let lasting = core.edges.iter().map(|&e| prev.lasting(e) + 1).collect();
    let state = EligibleEdgeState {
        edges: core.edges,
        lasting,
    };
    let ubr1 = ubr_edge_set(state.len(), params.k, 1, ctx);
    (state, ubr1)
}

/// Lasting-time states for every snapshot of the query window.
pub fn eligible_states(net: &DynamicNetwork, params: &QueryParams, ctx: &ReliabilityContext) -> Vec<(EligibleEdgeState, f64)> {
    let mut out: Vec<(EligibleEdgeState, f64)> = Vec::with_capacity(params.window.len());
    let empty = EligibleEdgeState::default();
    for t in params.window.iter() {
        let prev = out.last().map_or(&empty, |(s, _)| s);
        let next = scan_snapshot(net.snapshot(t), params, prev, ctx);
        out.push(next);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Density and upper-bound pruning. Turning it off only costs time.
    pub pruning: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { pruning: true }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// k-core extractions over candidate edge sets.
    pub core_extractions: usize,
    /// Candidates skipped for having fewer than `k(k+1)/2` edges.
    pub pruned_density: usize,
    /// Candidates or whole groups skipped by an upper bound.
    pub pruned_bound: usize,
}

/// Context for a query, or `None` when the window holds no k-core at all.
pub(crate) fn context_for(v_k_max: usize, params: &QueryParams) -> Result<Option<ReliabilityContext>> {
    if v_k_max == 0 {
        return Ok(None);
    }
    ReliabilityContext::new(v_k_max, params.window.len(), params.alpha).map(Some)
}

pub fn eef_query(net: &DynamicNetwork, params: &QueryParams) -> Result<Option<Community>> {
    eef_query_with(net, params, SearchOptions::default()).map(|(c, _)| c)
}

pub fn eef_query_with(
    net: &DynamicNetwork,
    params: &QueryParams,
    opts: SearchOptions,
) -> Result<(Option<Community>, SearchStats)> {
    params.validate(net)?;
    let mut stats = SearchStats::default();
    let Some(ctx) = context_for(max_kcore_size(net, params.k, params.window), params)? else {
        return Ok((None, stats));
    };
    let states = eligible_states(net, params, &ctx);
    let start = params.window.start;
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by(|&a, &b| states[b].1.total_cmp(&states[a].1));

    let k = params.k as usize;
    let min_edges = k * (k + 1) / 2;
    let mut best: Option<Community> = None;
    let incumbent = |best: &Option<Community>| best.as_ref().map_or(f64::NEG_INFINITY, |c| c.score);

    for i in order {
        let (state, _) = &states[i];
        let t_n: Timestamp = start + i;
        let max_d = i + 1;
        if opts.pruning {
            if state.len() < min_edges {
                stats.pruned_density += 1;
                continue;
            }
            if ubr_edge_set(state.len(), params.k, max_d, &ctx) < incumbent(&best) - SCORE_EPS {
                stats.pruned_bound += 1;
                continue;
            }
        }
        for d in 1..=max_d {
            let m = state.count_at_least(d as u32);
            if opts.pruning {
                if m < min_edges {
                    // lasting sets only shrink as d grows
                    stats.pruned_density += max_d - d + 1;
                    break;
                }
                if ubr_edge_set(m, params.k, d, &ctx) < incumbent(&best) - SCORE_EPS {
                    stats.pruned_bound += 1;
                    continue;
                }
            }
            if m == 0 {
                continue;
            }
            stats.core_extractions += 1;
            let Some(sub) = kcore_component(&state.lasting_at_least(d as u32), params.k, params.q) else {
                continue;
            };
            let interval = Window::new(t_n + 1 - d, t_n);
            let s = score(sub.len(), d, &ctx);
            let cand = Community::from_subgraph(sub, interval, s);
            if !cand.verify(net, params) {
                return Err(Error::Invariant(format!("community over {interval:?} fails re-verification")));
            }
            offer(&mut best, cand);
        }
    }
    Ok((best, stats))
}
