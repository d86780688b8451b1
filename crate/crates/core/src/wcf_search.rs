//! Index-based search: a two-layer dynamic program over durations.
//!
//! `C(1,t)` comes straight from the index. The maximal community over
//! `[t−d+1, t]` is the `q`-component of the k-core of the edges shared by
//! `C(d−1,t−1)` and `C(d−1,t)`. Snapshots without `C(1,t)` (anchors) split
//! the window into independent intervals, which are visited best bound
//! first.

use serde::Serialize;

use crate::community::{intersect_edges, offer, Community, Subgraph, SCORE_EPS};
use crate::coredec::kcore_component;
use crate::dyngraph::{DynamicNetwork, QueryParams, Timestamp, Window};
use crate::eef::{context_for, SearchOptions, SearchStats};
use crate::error::{Error, Result};
use crate::reliability::{score, ubr_interval, ReliabilityContext};
use crate::wcf::WcfIndex;

/// Maximal anchor-free runs of the window with their duration-1 bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalPlan {
    pub intervals: Vec<(Window, f64)>,
}

/// `C(1,t)` for every snapshot of the query window.
pub fn fetch_c1(net: &DynamicNetwork, idx: &WcfIndex, params: &QueryParams) -> Vec<Option<Subgraph>> {
    params
        .window
        .iter()
        .map(|t| idx.query_c1(net, params.k, params.theta, t, params.q))
        .collect()
}

pub fn plan_intervals(c1: &[Option<Subgraph>], window: Window, ctx: &ReliabilityContext) -> IntervalPlan {
    let mut intervals = Vec::new();
    let mut i = 0;
    while i < c1.len() {
        if c1[i].is_none() {
            i += 1;
            continue;
        }
        let s = i;
        while i < c1.len() && c1[i].is_some() {
            i += 1;
        }
        let sizes: Vec<usize> = c1[s..i].iter().map(|c| c.as_ref().map_or(0, Subgraph::len)).collect();
        let iv = Window::new(window.start + s, window.start + i - 1);
        intervals.push((iv, ubr_interval(&sizes, 1, ctx)));
    }
    IntervalPlan { intervals }
}

fn layer_sizes(layer: &[Option<Subgraph>]) -> Vec<usize> {
    layer.iter().map(|c| c.as_ref().map_or(0, Subgraph::len)).collect()
}

/// Runs the interval DP from precomputed `C(1,·)`.
pub(crate) fn search_from_c1(
    c1: &[Option<Subgraph>],
    params: &QueryParams,
    ctx: &ReliabilityContext,
    opts: SearchOptions,
    stats: &mut SearchStats,
) -> Option<Community> {
    let window = params.window;
    let mut plan = plan_intervals(c1, window, ctx).intervals;
    plan.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut best: Option<Community> = None;
    let incumbent = |best: &Option<Community>| best.as_ref().map_or(f64::NEG_INFINITY, |c| c.score);

    for (iv, ubr1) in plan {
        if opts.pruning && ubr1 < incumbent(&best) - SCORE_EPS {
            stats.pruned_bound += 1;
            continue;
        }
        let off = iv.start - window.start;
        // layer[i] holds C(d, iv.start + i)
        let mut layer: Vec<Option<Subgraph>> = c1[off..off + iv.len()].to_vec();
        for d in 1..=iv.len() {
            for (i, c) in layer.iter().enumerate() {
                if let Some(sub) = c {
                    let t: Timestamp = iv.start + i;
                    let s = score(sub.len(), d, ctx);
                    offer(&mut best, Community::from_subgraph(sub.clone(), Window::new(t + 1 - d, t), s));
                }
            }
            if d == iv.len() {
                break;
            }
            if opts.pruning && ubr_interval(&layer_sizes(&layer), d, ctx) < incumbent(&best) - SCORE_EPS {
                stats.pruned_bound += 1;
                break;
            }
            let mut next: Vec<Option<Subgraph>> = vec![None; layer.len()];
            for i in d..layer.len() {
                if let (Some(a), Some(b)) = (&layer[i - 1], &layer[i]) {
                    let shared = intersect_edges(&a.edges, &b.edges);
                    let k = params.k as usize;
                    if opts.pruning && shared.len() < k * (k + 1) / 2 {
                        stats.pruned_density += 1;
                        continue;
                    }
                    stats.core_extractions += 1;
                    next[i] = kcore_component(&shared, params.k, params.q);
                }
            }
            if next.iter().all(Option::is_none) {
                break;
            }
            layer = next;
        }
    }
    best
}

pub fn wcf_query(net: &DynamicNetwork, idx: &WcfIndex, params: &QueryParams) -> Result<Option<Community>> {
    wcf_query_with(net, idx, params, SearchOptions::default()).map(|(c, _)| c)
}

pub fn wcf_query_with(
    net: &DynamicNetwork,
    idx: &WcfIndex,
    params: &QueryParams,
    opts: SearchOptions,
) -> Result<(Option<Community>, SearchStats)> {
    params.validate(net)?;
    idx.check_compatible(net)?;
    let mut stats = SearchStats::default();
    let Some(ctx) = context_for(idx.v_k_max(params.k, params.window), params)? else {
        return Ok((None, stats));
    };
    let c1 = fetch_c1(net, idx, params);
    let best = search_from_c1(&c1, params, &ctx, opts, &mut stats);
    if let Some(c) = &best {
        if !c.verify(net, params) {
            return Err(Error::Invariant(format!("community over {:?} fails re-verification", c.interval)));
        }
    }
    Ok((best, stats))
}

/// Optimal community for each `α`, sharing the index retrievals.
pub fn alpha_sweep(
    net: &DynamicNetwork,
    idx: &WcfIndex,
    params: &QueryParams,
    alphas: &[f64],
) -> Result<Vec<(f64, Option<Community>)>> {
    params.validate(net)?;
    idx.check_compatible(net)?;
    let v_k_max = idx.v_k_max(params.k, params.window);
    let c1 = if v_k_max > 0 { fetch_c1(net, idx, params) } else { Vec::new() };
    alphas
        .iter()
        .map(|&alpha| {
            let p = params.clone().with_alpha(alpha);
            p.validate(net)?;
            let Some(ctx) = context_for(v_k_max, &p)? else {
                return Ok((alpha, None));
            };
            let mut stats = SearchStats::default();
            Ok((alpha, search_from_c1(&c1, &p, &ctx, SearchOptions::default(), &mut stats)))
        })
        .collect()
}
