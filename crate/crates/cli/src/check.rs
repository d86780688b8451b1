use anyhow::Result;
use clap::Args;
use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use relcom::compress::{compress, expand};
use relcom::eef::eef_query;
use relcom::maint::{apply_delta, EdgeUpdate, GraphDelta};
use relcom::oracle::{brute_force_query, random_network_with, RandomSpec, MAX_SNAPSHOTS, MAX_VERTICES};
use relcom::wcf_search::wcf_query;
use relcom::{DynamicNetwork, QueryParams, VertexId, WcfIndex};

use crate::output::Report;

#[derive(Args, Clone, Debug)]
pub struct CheckArgs {
    /// Number of random networks.
    #[arg(long, default_value_t = 100)]
    graphs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    max_vertices: usize,
    #[arg(long, default_value_t = 4)]
    max_snapshots: usize,
}

const KS: [u32; 3] = [1, 2, 3];
const THETAS: [f64; 3] = [0.0, 0.3, 0.6];
const ALPHAS: [f64; 3] = [0.0, 1.0, 2.0];

fn random_update<R: Rng>(net: &DynamicNetwork, t: usize, rng: &mut R) -> EdgeUpdate {
    let n = net.vertex_count() as VertexId;
    let (u, v) = loop {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            break (u, v);
        }
    };
    let w = rng.gen_range(1..=20) as f64 / 20.0;
    match (net.snapshot(t).weight(u, v).is_some(), rng.gen_bool(0.5)) {
        (false, _) => EdgeUpdate::Insert { u, v, w },
        (true, true) => EdgeUpdate::Delete { u, v },
        (true, false) => EdgeUpdate::Reweight { u, v, w },
    }
}

/// Returns the report and whether everything agreed.
pub fn run(args: &CheckArgs) -> Result<(Report, bool)> {
    let max_v = args.max_vertices.clamp(2, MAX_VERTICES);
    let max_t = args.max_snapshots.clamp(1, MAX_SNAPSHOTS);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (mut queries, mut updates) = (0usize, 0usize);
    let mut failures = Vec::new();
    for g in 0..args.graphs {
        let spec = RandomSpec {
            vertices: rng.gen_range(2..=max_v),
            snapshots: rng.gen_range(1..=max_t),
            density: rng.gen_range(0.3..0.8),
            presence: rng.gen_range(0.6..1.0),
        };
        let mut net = random_network_with(spec, &mut rng);
        let q = rng.gen_range(0..spec.vertices as VertexId);
        let mut idx = WcfIndex::build(&net);
        for k in KS {
            for theta in THETAS {
                for alpha in ALPHAS {
                    let p = QueryParams::new(q, k, theta, net.full_window()).with_alpha(alpha);
                    let oracle = brute_force_query(&net, &p)?;
                    let e = eef_query(&net, &p)?;
                    let w = wcf_query(&net, &idx, &p)?;
                    queries += 1;
                    if e != oracle.best_community || w != oracle.best_community {
                        warn!("graph {g}: query mismatch for k={k} theta={theta} alpha={alpha}");
                        failures.push(json!({ "graph": g, "check": "query", "k": k, "theta": theta, "alpha": alpha }));
                    }
                }
            }
        }
        let (c, aux) = compress(&idx)?;
        if expand(&c, &aux)? != idx {
            failures.push(json!({ "graph": g, "check": "compression" }));
        }
        for _ in 0..3 {
            let t = rng.gen_range(0..spec.snapshots);
            let upd = random_update(&net, t, &mut rng);
            apply_delta(&mut idx, &mut net, &GraphDelta { snapshot: t, updates: vec![upd] })?;
            updates += 1;
            if !idx.structurally_equal(&WcfIndex::build(&net)) {
                warn!("graph {g}: maintained index differs from rebuild after {upd:?}");
                failures.push(json!({ "graph": g, "check": "maintenance", "snapshot": t }));
            }
        }
    }
    info!("{queries} queries, {updates} updates, {} failures", failures.len());
    let ok = failures.is_empty();
    let report = Report::new(
        "oracle-check",
        json!({
            "seed": args.seed,
            "graphs": args.graphs,
            "queries": queries,
            "updates": updates,
            "passed": ok,
            "failures": failures,
        }),
    )
    .table(
        vec!["graphs", "queries", "updates", "failures"],
        vec![vec![args.graphs.to_string(), queries.to_string(), updates.to_string(), failures.len().to_string()]],
    );
    Ok((report, ok))
}
