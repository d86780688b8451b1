use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use log::info;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use relcom::coredec::core_decompose;
use relcom::dyngraph::Window;
use relcom::eef::eef_query;
use relcom::wcf_search::wcf_query;
use relcom::{DynamicNetwork, VertexId, WcfIndex};

use crate::output::Report;
use crate::{load_index, load_net, ParamArgs};

#[derive(Args, Clone, Debug)]
pub struct BenchArgs {
    net: PathBuf,
    /// Prebuilt index; built on the fly when absent.
    #[arg(long)]
    index: Option<PathBuf>,
    /// Number of sampled query vertices.
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads running queries.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    params: ParamArgs,
}

/// Largest core number each vertex reaches within `window`.
fn window_cores(net: &DynamicNetwork, window: Window) -> Vec<u32> {
    let mut best = vec![0u32; net.vertex_count()];
    for t in window.iter() {
        for (b, c) in best.iter_mut().zip(core_decompose(net.snapshot(t)).as_slice()) {
            *b = (*b).max(*c);
        }
    }
    best
}

/// Samples vertices so that their core numbers are spread uniformly over
/// the core values present in `[1, k_max]`: a core value is drawn first,
/// then a vertex holding it.
pub fn sample_queries(cores: &[u32], n: usize, seed: u64) -> Vec<VertexId> {
    let k_max = cores.iter().copied().max().unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); k_max + 1];
    for (v, &c) in cores.iter().enumerate() {
        buckets[c as usize].push(v as VertexId);
    }
    let levels: Vec<&Vec<VertexId>> = buckets.iter().skip(1).filter(|b| !b.is_empty()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if levels.is_empty() {
        return Vec::new();
    }
    (0..n)
        .map(|_| *levels.choose(&mut rng).unwrap().choose(&mut rng).unwrap())
        .collect()
}

pub fn run(args: &BenchArgs) -> Result<Report> {
    let net = load_net(&args.net)?;
    let (idx, build_ms) = match &args.index {
        Some(p) => (load_index(p, Some(&net))?, None),
        None => {
            let t0 = Instant::now();
            let idx = WcfIndex::build(&net);
            (idx, Some(t0.elapsed().as_secs_f64() * 1e3))
        }
    };
    let base = args.params.resolve(&net, 0)?;
    let cores = window_cores(&net, base.window);
    let sample = sample_queries(&cores, args.queries, args.seed);
    info!("benchmarking {} queries on {} threads", sample.len(), args.threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.max(1))
        .build()
        .context("cannot start worker pool")?;
    let results = pool.install(|| {
        sample
            .par_iter()
            .map(|&q| -> Result<_> {
                let p = relcom::QueryParams { q, ..base.clone() };
                let t0 = Instant::now();
                let e = eef_query(&net, &p)?;
                let eef_ms = t0.elapsed().as_secs_f64() * 1e3;
                let t1 = Instant::now();
                let w = wcf_query(&net, &idx, &p)?;
                let wcf_ms = t1.elapsed().as_secs_f64() * 1e3;
                Ok((q, eef_ms, wcf_ms, e, w))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::new();
    let mut per_query = Vec::new();
    let (mut sum_e, mut sum_w, mut agree) = (0.0, 0.0, 0usize);
    for (q, eef_ms, wcf_ms, e, w) in &results {
        let score = e.as_ref().map_or(0.0, |c| c.score);
        let same = e == w;
        agree += same as usize;
        sum_e += eef_ms;
        sum_w += wcf_ms;
        let label = net.label(*q);
        rows.push(vec![
            label.to_string(),
            cores[*q as usize].to_string(),
            format!("{eef_ms:.3}"),
            format!("{wcf_ms:.3}"),
            score.to_string(),
            same.to_string(),
        ]);
        per_query.push(json!({
            "q": label,
            "core": cores[*q as usize],
            "eef_ms": eef_ms,
            "wcf_ms": wcf_ms,
            "score": score,
            "agree": same,
        }));
    }
    let n = results.len().max(1) as f64;
    Ok(Report::new(
        "bench",
        json!({
            "k": base.k,
            "theta": base.theta,
            "window": [base.window.start, base.window.end],
            "alpha": base.alpha,
            "seed": args.seed,
            "threads": args.threads,
            "index_build_ms": build_ms,
            "mean_eef_ms": sum_e / n,
            "mean_wcf_ms": sum_w / n,
            "agreeing": agree,
            "queries": per_query,
        }),
    )
    .table(vec!["q", "core", "eef_ms", "wcf_ms", "score", "agree"], rows))
}
