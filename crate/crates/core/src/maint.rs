//! Incremental index maintenance under edge updates.
//!
//! Every update is handled as a weight change between grid levels `a` and
//! `b` (`−1` standing for an absent edge). Only levels strictly between
//! `min(a,b)` and `max(a,b)` see a different graph, so per `k`:
//!
//! * on an increase, only vertices with threshold in `[a, b)` can rise
//!   (plus unindexed ones when the edge is new);
//! * on a decrease, only vertices with threshold in `(b, a]` can drop.
//!
//! Vertices that do change stay connected to `u` or `v` through other
//! changing vertices, so the candidates are the in-range vertices reachable
//! from the endpoints. Their thresholds are recomputed by peeling the
//! candidates level by level against the fixed membership of everyone
//! else, then the trees over the affected component are rebuilt.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use serde::Serialize;

use crate::coredec::{core_decompose, largest_kcore_component, CoreNumbers};
use crate::dyngraph::{DynamicNetwork, Edge, GraphInstance, Timestamp, VertexId};
use crate::error::{Error, Result};
use crate::wcf::{build_trees, relink, Forest, NodePayload, TreeNode, WcfIndex};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum EdgeUpdate {
    Insert { u: VertexId, v: VertexId, w: f64 },
    Delete { u: VertexId, v: VertexId },
    Reweight { u: VertexId, v: VertexId, w: f64 },
}

impl EdgeUpdate {
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        match *self {
            EdgeUpdate::Insert { u, v, .. } | EdgeUpdate::Delete { u, v } | EdgeUpdate::Reweight { u, v, .. } => (u, v),
        }
    }
}

/// Updates to one snapshot, applied in order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphDelta {
    pub snapshot: Timestamp,
    pub updates: Vec<EdgeUpdate>,
}

/// Parses `I u v w` / `D u v` / `W u v w` lines with vertex labels.
pub fn parse_delta<R: BufRead>(reader: R, net: &DynamicNetwork, snapshot: Timestamp) -> Result<GraphDelta> {
    let mut updates = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let vertex = |s: &str| net.vertex(s).ok_or_else(|| err(format!("unknown vertex {s:?}")));
        let weight = |s: &str| s.parse::<f64>().map_err(|_| err(format!("invalid weight {s:?}")));
        let upd = match (toks[0], toks.len()) {
            ("I", 4) => EdgeUpdate::Insert {
                u: vertex(toks[1])?,
                v: vertex(toks[2])?,
                w: weight(toks[3])?,
            },
            ("D", 3) => EdgeUpdate::Delete {
                u: vertex(toks[1])?,
                v: vertex(toks[2])?,
            },
            ("W", 4) => EdgeUpdate::Reweight {
                u: vertex(toks[1])?,
                v: vertex(toks[2])?,
                w: weight(toks[3])?,
            },
            _ => return Err(err(format!("expected `I u v w`, `D u v` or `W u v w`, got {body:?}"))),
        };
        updates.push(upd);
    }
    Ok(GraphDelta { snapshot, updates })
}

/// Threshold changes at one `k`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LevelReport {
    pub k: u32,
    pub candidates: Vec<VertexId>,
    /// `(vertex, old level, new level)`; `None` means not indexed.
    pub changed: Vec<(VertexId, Option<u8>, Option<u8>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpdateReport {
    pub snapshot: Timestamp,
    pub edge: Edge,
    pub old_weight: Option<f64>,
    pub new_weight: Option<f64>,
    pub levels: Vec<LevelReport>,
}

impl UpdateReport {
    pub fn changed_vertices(&self) -> BTreeSet<VertexId> {
        self.levels
            .iter()
            .flat_map(|l| l.changed.iter().map(|c| c.0))
            .collect()
    }
}

fn check_new_weight(w: f64, index: usize) -> Result<()> {
    if w > 0.0 && w <= 1.0 {
        Ok(())
    } else {
        Err(Error::Delta {
            index,
            msg: format!("weight {w} outside (0,1]"),
        })
    }
}

/// Old and new weight of an update, checking that it applies to `g`.
fn resolve(g: &GraphInstance, upd: &EdgeUpdate, index: usize) -> Result<(Option<f64>, Option<f64>)> {
    let (u, v) = upd.endpoints();
    let n = g.vertex_count() as VertexId;
    if u == v || u >= n || v >= n {
        return Err(Error::Delta {
            index,
            msg: format!("invalid endpoints ({u},{v})"),
        });
    }
    let old = g.weight(u, v);
    match *upd {
        EdgeUpdate::Insert { w, .. } => {
            check_new_weight(w, index)?;
            if old.is_some() {
                return Err(Error::Delta {
                    index,
                    msg: format!("edge ({u},{v}) already present"),
                });
            }
            Ok((None, Some(w)))
        }
        EdgeUpdate::Delete { .. } | EdgeUpdate::Reweight { .. } if old.is_none() => Err(Error::Delta {
            index,
            msg: format!("edge ({u},{v}) not present"),
        }),
        EdgeUpdate::Delete { .. } => Ok((old, None)),
        EdgeUpdate::Reweight { w, .. } => {
            check_new_weight(w, index)?;
            Ok((old, Some(w)))
        }
    }
}

/// Applies a delta to the network and keeps the index equal to a rebuild.
/// The whole delta is validated before anything changes.
pub fn apply_delta(idx: &mut WcfIndex, net: &mut DynamicNetwork, delta: &GraphDelta) -> Result<Vec<UpdateReport>> {
    idx.check_compatible(net)?;
    if delta.snapshot >= net.num_snapshots() {
        return Err(Error::Param(format!("snapshot {} out of range", delta.snapshot)));
    }
    if idx.is_compressed() {
        return Err(Error::Config("expand the index before maintenance".into()));
    }
    let mut scratch = net.snapshot(delta.snapshot).clone();
    for (i, upd) in delta.updates.iter().enumerate() {
        let (_, new) = resolve(&scratch, upd, i)?;
        let (u, v) = upd.endpoints();
        match new {
            Some(w) => {
                scratch.set_edge(u, v, w)?;
            }
            None => {
                scratch.remove_edge(u, v);
            }
        }
    }
    delta
        .updates
        .iter()
        .enumerate()
        .map(|(i, upd)| apply_update(idx, net, delta.snapshot, upd, i))
        .collect()
}

/// Old k-threshold levels looked up from the index.
struct OldLevels<'a> {
    forests: &'a [Forest],
}

impl OldLevels<'_> {
    fn level(&self, k: u32, x: VertexId) -> i32 {
        self.forests
            .get(k as usize - 1)
            .and_then(|f| f.node_of(x).map(|n| f.nodes[n as usize].theta as i32))
            .unwrap_or(-1)
    }

    fn core(&self, x: VertexId) -> u32 {
        self.forests.iter().take_while(|f| f.node_of(x).is_some()).count() as u32
    }
}

fn grid_level(idx: &WcfIndex, w: Option<f64>) -> i32 {
    w.map_or(-1, |w| idx.grid.floor_index(w) as i32)
}

/// Neighbors of `x` in `g`, plus `extra` when it is incident to `x` and
/// missing from `g`.
fn neighbors_with(g: &GraphInstance, x: VertexId, extra: Option<Edge>) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = g.neighbors(x).iter().map(|&(y, _)| y).collect();
    if let Some(e) = extra {
        let other = if e.u() == x {
            Some(e.v())
        } else if e.v() == x {
            Some(e.u())
        } else {
            None
        };
        if let Some(o) = other {
            if g.weight(x, o).is_none() {
                out.push(o);
            }
        }
    }
    out
}

/// Vertices reachable from `seeds` through vertices satisfying `keep`.
fn reach(g: &GraphInstance, seeds: &[VertexId], extra: Option<Edge>, keep: &dyn Fn(VertexId) -> bool) -> Vec<VertexId> {
    let mut seen: HashMap<VertexId, ()> = HashMap::new();
    let mut stack: Vec<VertexId> = Vec::new();
    for &s in seeds {
        if keep(s) && seen.insert(s, ()).is_none() {
            stack.push(s);
        }
    }
    let mut out = Vec::new();
    while let Some(x) = stack.pop() {
        out.push(x);
        for y in neighbors_with(g, x, extra) {
            if !seen.contains_key(&y) && keep(y) {
                seen.insert(y, ());
                stack.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Applies one update at snapshot `t`. `index` identifies it in errors.
pub fn apply_update(
    idx: &mut WcfIndex,
    net: &mut DynamicNetwork,
    t: Timestamp,
    upd: &EdgeUpdate,
    index: usize,
) -> Result<UpdateReport> {
    let (old_w, new_w) = resolve(net.snapshot(t), upd, index)?;
    let (u, v) = upd.endpoints();
    let edge = Edge::new(u, v);
    let a = grid_level(idx, old_w);
    let b = grid_level(idx, new_w);
    {
        let g = net.snapshot_mut(t);
        match new_w {
            Some(w) => {
                g.set_edge(u, v, w)?;
            }
            None => {
                g.remove_edge(u, v);
            }
        }
    }
    let mut report = UpdateReport {
        snapshot: t,
        edge,
        old_weight: old_w,
        new_weight: new_w,
        levels: Vec::new(),
    };
    if a == b {
        return Ok(report);
    }
    let increase = b > a;
    let g = net.snapshot(t);
    let grid = idx.grid.clone();
    let old_forests = idx.snapshots[t].forests.clone();
    let old = OldLevels { forests: &old_forests };
    let k_top = old.core(u).min(old.core(v)) + u32::from(increase);
    // the edge is present in the "with" graph: new graph on increase, old on decrease
    let extra = (!increase).then_some(edge);

    for k in 1..=k_top {
        let in_range = |x: VertexId| {
            let l = old.level(k, x);
            if increase {
                l >= a && l < b && (k == 1 || old.level(k - 1, x) >= 0)
            } else {
                l > b && l <= a
            }
        };
        let candidates = reach(g, &[u, v], extra, &in_range);
        let cand_pos = |x: VertexId| candidates.binary_search(&x).ok();

        // restricted sweep
        let (lo, hi) = if increase { (a + 1, b) } else { (b + 1, a) };
        let lo = lo.max(0);
        let mut alive: Vec<bool> = vec![true; candidates.len()];
        let mut new_level: Vec<i32> = candidates
            .iter()
            .map(|&x| if increase { old.level(k, x) } else { b })
            .collect();
        for level in lo..=hi {
            let gv = grid.value(level as u8);
            if !increase {
                for (i, &x) in candidates.iter().enumerate() {
                    if old.level(k, x) < level {
                        alive[i] = false;
                    }
                }
            }
            let member = |y: VertexId, alive: &[bool]| match cand_pos(y) {
                Some(j) => alive[j],
                None => old.level(k, y) >= level,
            };
            let mut deg: Vec<usize> = candidates
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    if !alive[i] {
                        return 0;
                    }
                    g.neighbors(x).iter().filter(|&&(y, w)| w >= gv && member(y, &alive)).count()
                })
                .collect();
            let mut queue: Vec<usize> = (0..candidates.len()).filter(|&i| alive[i] && deg[i] < k as usize).collect();
            for &i in &queue {
                alive[i] = false;
            }
            while let Some(i) = queue.pop() {
                for &(y, w) in g.neighbors(candidates[i]) {
                    if w < gv {
                        continue;
                    }
                    if let Some(j) = cand_pos(y) {
                        if alive[j] {
                            deg[j] -= 1;
                            if deg[j] < k as usize {
                                alive[j] = false;
                                queue.push(j);
                            }
                        }
                    }
                }
            }
            for (i, &al) in alive.iter().enumerate() {
                if al {
                    new_level[i] = new_level[i].max(level);
                }
            }
        }
        let changed: Vec<(VertexId, Option<u8>, Option<u8>)> = candidates
            .iter()
            .zip(&new_level)
            .filter(|&(&x, &nl)| old.level(k, x) != nl)
            .map(|(&x, &nl)| {
                let to = |l: i32| (l >= 0).then_some(l as u8);
                (x, to(old.level(k, x)), to(nl))
            })
            .collect();
        let new_of = |x: VertexId| match cand_pos(x) {
            Some(i) => new_level[i],
            None => old.level(k, x),
        };

        // with-edge state decides the affected region
        let with_level = |x: VertexId| if increase { new_of(x) } else { old.level(k, x) };
        let region = if with_level(u) >= 0 && with_level(v) >= 0 {
            reach(g, &[u], extra, &|x| with_level(x) >= 0)
        } else {
            debug_assert!(changed.is_empty());
            Vec::new()
        };
        if !region.is_empty() {
            retree(idx, g, t, k, &region, &new_of, &old, (a < 0).then_some(edge), extra);
        }
        report.levels.push(LevelReport {
            k,
            candidates,
            changed,
        });
    }
    let s = &mut idx.snapshots[t];
    while s.forests.last().is_some_and(|f| f.nodes.is_empty()) {
        s.forests.pop();
        s.max_component.pop();
    }
    Ok(report)
}

/// Component sizes of the k-indexed graph restricted to `region`.
fn component_sizes(g: &GraphInstance, region: &[VertexId], indexed: &dyn Fn(VertexId) -> bool, skip: Option<Edge>, extra: Option<Edge>) -> Vec<usize> {
    let inside = |x: VertexId| region.binary_search(&x).is_ok() && indexed(x);
    let mut done: HashMap<VertexId, ()> = HashMap::new();
    let mut sizes = Vec::new();
    for &s in region {
        if !inside(s) || done.contains_key(&s) {
            continue;
        }
        done.insert(s, ());
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for y in neighbors_with(g, x, extra) {
                if skip == Some(Edge::new(x, y)) {
                    continue;
                }
                if inside(y) && !done.contains_key(&y) {
                    done.insert(y, ());
                    stack.push(y);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

/// Replaces the trees covering `region` with ones built from the new
/// thresholds, then refreshes the largest-component size. `new_edge` is
/// the edge absent from the old graph (increase from nothing), `extra` the
/// edge absent from the new graph (decrease).
#[allow(clippy::too_many_arguments)]
fn retree(
    idx: &mut WcfIndex,
    g: &GraphInstance,
    t: Timestamp,
    k: u32,
    region: &[VertexId],
    new_of: &dyn Fn(VertexId) -> i32,
    old: &OldLevels,
    new_edge: Option<Edge>,
    extra: Option<Edge>,
) {
    let grid = idx.grid.clone();
    let kept: Vec<VertexId> = region.iter().copied().filter(|&x| new_of(x) >= 0).collect();
    let (fresh, new_in_region_max) = build_trees(g, &grid, &kept, &|x| new_of(x) as u8);

    let old_in_region_max = component_sizes(g, region, &|x| old.level(k, x) >= 0, new_edge, extra)
        .into_iter()
        .max()
        .unwrap_or(0);

    let s = &mut idx.snapshots[t];
    while s.forests.len() < k as usize {
        s.forests.push(Forest::default());
        s.max_component.push(0);
    }
    let f = &mut s.forests[k as usize - 1];
    let in_region = |n: &TreeNode| match &n.payload {
        NodePayload::Vertices(vs) => vs.iter().any(|x| region.binary_search(x).is_ok()),
        NodePayload::Virtual(_) => false,
    };
    let mut remap: Vec<Option<u32>> = vec![None; f.nodes.len()];
    let mut nodes: Vec<TreeNode> = Vec::with_capacity(f.nodes.len() + fresh.len());
    for (i, n) in f.nodes.iter().enumerate() {
        if !in_region(n) {
            remap[i] = Some(nodes.len() as u32);
            nodes.push(n.clone());
        }
    }
    for n in nodes.iter_mut() {
        n.parent = n.parent.map(|p| remap[p as usize].expect("tree crosses region boundary"));
    }
    let offset = nodes.len() as u32;
    nodes.extend(fresh.into_iter().map(|mut n| {
        n.parent = n.parent.map(|p| p + offset);
        n
    }));
    f.nodes = nodes;
    relink(f, &idx.aux);

    // components outside the region are untouched
    let old_max = s.max_component[k as usize - 1] as usize;
    let new_max = if old_max > old_in_region_max {
        old_max.max(new_in_region_max)
    } else if new_in_region_max >= old_max {
        new_in_region_max
    } else {
        largest_kcore_component(g, k)
    };
    s.max_component[k as usize - 1] = new_max as u32;
}

/// Vertices with the same core number as `u`, connected to it through such
/// vertices.
pub fn subcore(g: &GraphInstance, u: VertexId) -> Vec<VertexId> {
    let core = core_decompose(g);
    let cu = core.get(u);
    reach(g, &[u], None, &|x| core.get(x) == cu)
}

fn purecore_with(g: &GraphInstance, core: &CoreNumbers, u: VertexId) -> Vec<VertexId> {
    let cu = core.get(u);
    let qualifies = |w: VertexId| {
        core.get(w) == cu
            && g.neighbors(w)
                .iter()
                .filter(|&&(x, _)| core.get(x) >= core.get(w))
                .count()
                > cu as usize
    };
    reach(g, &[u], None, &qualifies)
}

/// Vertices with the same core number as `u` that have more than
/// `core(u)` neighbors of core number at least their own, connected to `u`
/// through such vertices.
pub fn purecore(g: &GraphInstance, u: VertexId) -> Vec<VertexId> {
    purecore_with(g, &core_decompose(g), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{naive_core_numbers, random_network, RandomSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ids(net: &DynamicNetwork, ls: &[&str]) -> Vec<VertexId> {
        let mut v: Vec<VertexId> = ls.iter().map(|l| net.resolve(l).unwrap()).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn example_insertion() {
        let mut net = fixtures::fig1();
        let mut idx = WcfIndex::build(&net);
        let (v3, v5) = (net.resolve("v3").unwrap(), net.resolve("v5").unwrap());
        let delta = GraphDelta {
            snapshot: 0,
            updates: vec![EdgeUpdate::Insert { u: v3, v: v5, w: 0.3 }],
        };
        let reports = apply_delta(&mut idx, &mut net, &delta).unwrap();
        let changed: Vec<VertexId> = reports[0].changed_vertices().into_iter().collect();
        assert_eq!(changed, ids(&net, &["v5", "v6"]));
        assert_eq!(idx.threshold_value(2, 0, v5), Some(0.3));
        assert!(idx.structurally_equal(&WcfIndex::build(&net)));

        // {v5,v6} now parents both {v0,v1} and {v7,v8,v9}
        let canon = idx.canonical_forest(2, 0);
        let z = ids(&net, &["v5", "v6"]);
        let kids: Vec<_> = canon.iter().filter(|n| n.2.as_ref().map(|p| &p.1) == Some(&z)).map(|n| n.1.clone()).collect();
        assert_eq!(kids, vec![ids(&net, &["v0", "v1"]), ids(&net, &["v7", "v8", "v9"])]);
    }

    #[test]
    fn example_purecore() {
        let net = fixtures::fig1();
        let v3 = net.resolve("v3").unwrap();
        assert_eq!(purecore(net.snapshot(0), v3), ids(&net, &["v0", "v2", "v3", "v5", "v6", "v7", "v8"]));
    }

    #[test]
    fn sub_and_pure_core_boundaries() {
        let tri = GraphInstance::from_edges(4, [(0, 1, 0.5), (1, 2, 0.5), (0, 2, 0.5), (2, 3, 0.5)]).unwrap();
        assert_eq!(subcore(&tri, 0), vec![0, 1, 2]);
        assert_eq!(subcore(&tri, 3), vec![3]);
        // the pendant vertex has a single neighbor, not more than core(3) = 1
        assert!(purecore(&tri, 3).is_empty());
        // triangle vertices have exactly 2 = core neighbors of core >= 2 except 2 (3 neighbors, one of core 1)
        assert!(purecore(&tri, 0).is_empty());
    }

    /// Definition-level oracles for the two sets.
    fn subcore_oracle(g: &GraphInstance, u: VertexId) -> Vec<VertexId> {
        let core = naive_core_numbers(g);
        let n = g.vertex_count() as VertexId;
        let ok: Vec<bool> = (0..n).map(|x| core.get(x) == core.get(u)).collect();
        let mut set = vec![u];
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..n {
                if ok[x as usize] && !set.contains(&x) && set.iter().any(|&s| g.has_edge(Edge::new(s, x))) {
                    set.push(x);
                    changed = true;
                }
            }
        }
        set.sort_unstable();
        set
    }

    fn purecore_oracle(g: &GraphInstance, u: VertexId) -> Vec<VertexId> {
        let core = naive_core_numbers(g);
        let n = g.vertex_count() as VertexId;
        let cu = core.get(u);
        let ok: Vec<bool> = (0..n)
            .map(|w| {
                let big = (0..n).filter(|&x| x != w && g.has_edge(Edge::new(w, x)) && core.get(x) >= core.get(w)).count();
                core.get(w) == cu && big > cu as usize
            })
            .collect();
        if !ok[u as usize] {
            return Vec::new();
        }
        let mut set = vec![u];
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..n {
                if ok[x as usize] && !set.contains(&x) && set.iter().any(|&s| g.has_edge(Edge::new(s, x))) {
                    set.push(x);
                    changed = true;
                }
            }
        }
        set.sort_unstable();
        set
    }

    #[test]
    fn sub_and_pure_core_match_oracles() {
        for seed in 0..15 {
            let net = random_network(
                RandomSpec {
                    vertices: 20,
                    snapshots: 1,
                    density: 0.25,
                    presence: 1.0,
                },
                seed,
            );
            let g = net.snapshot(0);
            for u in 0..20 {
                if g.degree(u) == 0 {
                    continue;
                }
                assert_eq!(subcore(g, u), subcore_oracle(g, u));
                assert_eq!(purecore(g, u), purecore_oracle(g, u));
            }
        }
    }

    #[test]
    fn equal_weight_reweight_is_noop() {
        let mut net = fixtures::fig1();
        let mut idx = WcfIndex::build(&net);
        let before = idx.clone();
        let r = apply_update(&mut idx, &mut net, 0, &EdgeUpdate::Reweight { u: 0, v: 1, w: 0.6 }, 0).unwrap();
        assert!(r.levels.is_empty());
        assert_eq!(idx, before);
        // same grid cell: weights change, structure does not
        apply_update(&mut idx, &mut net, 0, &EdgeUpdate::Reweight { u: 0, v: 1, w: 0.65 }, 0).unwrap();
        assert_eq!(idx, before);
        assert_eq!(net.snapshot(0).weight(0, 1), Some(0.65));
    }

    #[test]
    fn insert_then_delete_restores() {
        let mut net = fixtures::fig1();
        let mut idx = WcfIndex::build(&net);
        let before = idx.clone();
        apply_update(&mut idx, &mut net, 1, &EdgeUpdate::Insert { u: 1, v: 4, w: 0.9 }, 0).unwrap();
        assert!(idx.structurally_equal(&WcfIndex::build(&net)));
        apply_update(&mut idx, &mut net, 1, &EdgeUpdate::Delete { u: 1, v: 4 }, 1).unwrap();
        assert!(idx.structurally_equal(&before));
    }

    #[test]
    fn rejects_inapplicable_updates() {
        let mut net = fixtures::fig1();
        let mut idx = WcfIndex::build(&net);
        let before = (net.clone(), idx.clone());
        let bad = GraphDelta {
            snapshot: 0,
            updates: vec![
                EdgeUpdate::Insert { u: 1, v: 4, w: 0.5 },
                EdgeUpdate::Insert { u: 0, v: 1, w: 0.5 },
            ],
        };
        assert!(matches!(apply_delta(&mut idx, &mut net, &bad), Err(Error::Delta { index: 1, .. })));
        assert_eq!((net.clone(), idx.clone()), before);
        for upd in [
            EdgeUpdate::Delete { u: 1, v: 4 },
            EdgeUpdate::Reweight { u: 1, v: 4, w: 0.2 },
            EdgeUpdate::Reweight { u: 0, v: 1, w: 0.0 },
            EdgeUpdate::Insert { u: 2, v: 2, w: 0.5 },
        ] {
            assert!(apply_update(&mut idx, &mut net, 0, &upd, 0).is_err());
        }
    }

    #[test]
    fn parse_delta_lines() {
        let net = fixtures::fig1();
        let text = "# changes\nI v3 v5 0.3\nD v0 v1\nW v2 v3 0.1\n";
        let d = parse_delta(text.as_bytes(), &net, 0).unwrap();
        assert_eq!(d.updates.len(), 3);
        assert_eq!(d.updates[1], EdgeUpdate::Delete { u: 0, v: 1 });
        assert!(matches!(parse_delta("X v0 v1".as_bytes(), &net, 0), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_delta("\nI v0 zz 0.5".as_bytes(), &net, 0), Err(Error::Parse { line: 2, .. })));
    }

    pub(crate) fn random_update<R: Rng>(g: &GraphInstance, rng: &mut R) -> EdgeUpdate {
        let n = g.vertex_count() as VertexId;
        loop {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v {
                continue;
            }
            let w = rng.gen_range(1..=20) as f64 / 20.0;
            return match (g.weight(u, v).is_some(), rng.gen_range(0..2)) {
                (false, _) => EdgeUpdate::Insert { u, v, w },
                (true, 0) => EdgeUpdate::Delete { u, v },
                (true, _) => EdgeUpdate::Reweight { u, v, w },
            };
        }
    }

    #[test]
    fn random_updates_match_rebuild() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut net = random_network(
            RandomSpec {
                vertices: 30,
                snapshots: 2,
                density: 0.25,
                presence: 0.9,
            },
            3,
        );
        let mut idx = WcfIndex::build(&net);
        for i in 0..60 {
            let t = rng.gen_range(0..2);
            let before = idx.clone();
            let upd = random_update(net.snapshot(t), &mut rng);
            let r = apply_update(&mut idx, &mut net, t, &upd, i).unwrap();
            let fresh = WcfIndex::build(&net);
            assert!(idx.structurally_equal(&fresh), "update {i}: {upd:?}");
            // vertices outside the reported changes keep their thresholds
            let changed = r.changed_vertices();
            for k in 1..=before.k_max(t).max(idx.k_max(t)) {
                for x in 0..30 {
                    if !changed.contains(&x) {
                        assert_eq!(before.threshold(k, t, x), idx.threshold(k, t, x));
                    }
                }
            }
        }
    }
}
