//! Community quality over the snapshots of its interval.

use serde::Serialize;

use crate::community::Community;
use crate::coredec::core_decompose;
use crate::dyngraph::{DynamicNetwork, GraphInstance, Timestamp, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SnapshotQuality {
    pub t: Timestamp,
    pub size: usize,
    pub density: f64,
    pub avg_core: f64,
    pub conductance: f64,
}

/// Averages over the interval: size (ASS), density (ASD), core number
/// (ASCore) and conductance (ASCond).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QualityReport {
    pub ass: f64,
    pub asd: f64,
    pub ascore: f64,
    pub ascond: f64,
    pub per_snapshot: Vec<SnapshotQuality>,
}

fn snapshot_quality(g: &GraphInstance, t: Timestamp, members: &[VertexId]) -> SnapshotQuality {
    let inside = |v: VertexId| members.binary_search(&v).is_ok();
    let mut internal = Vec::new();
    let mut cut = 0usize;
    let mut vol_in = 0usize;
    for &v in members {
        for &(u, w) in g.neighbors(v) {
            vol_in += 1;
            if inside(u) {
                if v < u {
                    internal.push((v, u, w));
                }
            } else {
                cut += 1;
            }
        }
    }
    let vol_out = 2 * g.edge_count() - vol_in;
    let n = members.len() as f64;
    let density = 2.0 * internal.len() as f64 / (n * (n - 1.0));
    let sub = GraphInstance::from_edges(g.vertex_count(), internal).expect("edges copied from a valid snapshot");
    let cores = core_decompose(&sub);
    let avg_core = members.iter().map(|&v| cores.get(v) as f64).sum::<f64>() / n;
    let conductance = if cut == 0 {
        0.0
    } else {
        cut as f64 / vol_in.min(vol_out) as f64
    };
    SnapshotQuality {
        t,
        size: members.len(),
        density,
        avg_core,
        conductance,
    }
}

pub fn evaluate(net: &DynamicNetwork, community: &Community) -> Result<QualityReport> {
    let iv = community.interval;
    if iv.is_empty() || iv.end >= net.num_snapshots() {
        return Err(Error::Param(format!("interval {iv:?} outside the network")));
    }
    if community.vertices.len() < 2 {
        return Err(Error::Metric("density needs at least two vertices".into()));
    }
    let mut members = community.vertices.clone();
    members.sort_unstable();
    members.dedup();
    let per_snapshot: Vec<SnapshotQuality> = iv.iter().map(|t| snapshot_quality(net.snapshot(t), t, &members)).collect();
    let mean = |f: &dyn Fn(&SnapshotQuality) -> f64| per_snapshot.iter().map(f).sum::<f64>() / per_snapshot.len() as f64;
    Ok(QualityReport {
        ass: mean(&|s| s.size as f64),
        asd: mean(&|s| s.density),
        ascore: mean(&|s| s.avg_core),
        ascond: mean(&|s| s.conductance),
        per_snapshot,
    })
}
