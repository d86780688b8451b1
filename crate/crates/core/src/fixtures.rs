//! Small hand-built networks used by tests, the CLI and the demo.

use crate::dyngraph::{DynamicNetwork, GraphInstance, VertexId};

const FIG1_BASE: [(u32, u32, f64); 20] = [
    (2, 3, 0.8),
    (3, 4, 0.8),
    (2, 4, 0.7),
    (0, 1, 0.6),
    (0, 2, 0.5),
    (1, 3, 0.5),
    (0, 3, 0.4),
    (0, 4, 0.4),
    (7, 8, 0.7),
    (8, 9, 0.7),
    (7, 9, 0.7),
    (5, 6, 0.4),
    (6, 7, 0.3),
    (0, 6, 0.1),
    (2, 5, 0.1),
    (3, 8, 0.1),
    (5, 8, 0.2),
    (6, 8, 0.1),
    (5, 7, 0.1),
    (2, 7, 0.1),
];

fn fig1_snapshot(t: usize) -> Vec<(VertexId, VertexId, f64)> {
    FIG1_BASE
        .iter()
        .map(|&(u, v, w)| match (t, u, v) {
            (1, 0, 1) => (u, v, 0.7),
            (2, 0, 1) => (u, v, 0.5),
            (2, 3, 4) => (u, v, 0.3),
            _ => (u, v, w),
        })
        .collect()
}

/// Ten vertices `v0..v9` over three snapshots. The strong group
/// `{v0..v4}` loses edge `v3-v4` at the last snapshot, `{v7,v8,v9}` is a
/// stable triangle and `{v5,v6}` hangs on low-weight edges.
pub fn fig1() -> DynamicNetwork {
    let labels = (0..10).map(|i| format!("v{i}")).collect();
    let snaps = (0..3)
        .map(|t| GraphInstance::from_edges(10, fig1_snapshot(t)).unwrap())
        .collect();
    DynamicNetwork::new(labels, snaps).unwrap()
}

/// [`fig1`] as `u v t w` edge-list text. Edges are ordered by their
/// larger endpoint so that ingestion numbers the labels `v0..v9` in order.
pub fn fig1_edge_list() -> String {
    let mut out = String::from("# u v t w\n");
    for t in 0..3 {
        let mut es = fig1_snapshot(t);
        es.sort_by_key(|&(u, v, _)| (u.max(v), u.min(v)));
        for (u, v, w) in es {
            out.push_str(&format!("v{u} v{v} {t} {w}\n"));
        }
    }
    out
}

/// Eight vertices, six snapshots, all weights 0.5. Around `0` sits a
/// triangle present throughout, a 5-cycle through it for the first four
/// snapshots and a larger ring for the first two, so bigger communities
/// last shorter.
pub fn tradeoff() -> DynamicNetwork {
    let tri = [(0, 1), (1, 2), (0, 2)];
    let mid = [(2, 3), (3, 4), (0, 4)];
    let outer = [(4, 5), (5, 6), (6, 7), (0, 7)];
    let snaps = (0..6)
        .map(|t| {
            let mut es: Vec<(u32, u32, f64)> = tri.iter().map(|&(u, v)| (u, v, 0.5)).collect();
            if t < 4 {
                es.extend(mid.iter().map(|&(u, v)| (u, v, 0.5)));
            }
            if t < 2 {
                es.extend(outer.iter().map(|&(u, v)| (u, v, 0.5)));
            }
            es
        })
        .collect();
    DynamicNetwork::from_snapshot_edges(8, snaps).unwrap()
}
