//! Virtual-node compression.
//!
//! A tree-node vertex set that occurs `f` times across the whole index can
//! be stored once in an auxiliary table and referenced by id, saving
//! `f·(|X|−1) − |X|` vertex slots.

use std::collections::{BTreeMap, HashMap};

use serde::{Serialize, Serializer};

use crate::dyngraph::VertexId;
use crate::error::{Error, Result};
use crate::wcf::{relink, NodePayload, WcfIndex};

/// Dense table of virtual node contents.
#[derive(Clone, Debug, Default)]
pub struct AuxiliaryTable {
    entries: Vec<Vec<VertexId>>,
    by_content: HashMap<Vec<VertexId>, u32>,
}

impl PartialEq for AuxiliaryTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Serialize for AuxiliaryTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl AuxiliaryTable {
    pub fn from_entries(entries: Vec<Vec<VertexId>>) -> Self {
        let by_content = entries
            .iter()
            .enumerate()
            .map(|(i, vs)| (vs.clone(), i as u32))
            .collect();
        AuxiliaryTable { entries, by_content }
    }

    pub fn get(&self, id: u32) -> Option<&[VertexId]> {
        self.entries.get(id as usize).map(Vec::as_slice)
    }

    pub fn lookup(&self, vertices: &[VertexId]) -> Option<u32> {
        self.by_content.get(vertices).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Vec<VertexId>> {
        self.entries.iter()
    }

    /// Vertex slots held by the table.
    pub fn slots(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }
}

pub fn space_gain(node_size: usize, frequency: usize) -> i64 {
    frequency as i64 * (node_size as i64 - 1) - node_size as i64
}

/// Vertex slots actually stored: one per plain vertex, one per virtual
/// reference, plus the auxiliary table.
pub fn stored_slots(idx: &WcfIndex) -> usize {
    let nodes: usize = idx
        .snapshots
        .iter()
        .flat_map(|s| &s.forests)
        .flat_map(|f| &f.nodes)
        .map(|n| match &n.payload {
            NodePayload::Vertices(vs) => vs.len(),
            NodePayload::Virtual(_) => 1,
        })
        .sum();
    nodes + idx.aux.slots()
}

/// How often each node vertex set occurs across all forests.
pub fn node_frequencies(idx: &WcfIndex) -> Result<BTreeMap<Vec<VertexId>, usize>> {
    let mut freq: BTreeMap<Vec<VertexId>, usize> = BTreeMap::new();
    for s in &idx.snapshots {
        for f in &s.forests {
            for n in &f.nodes {
                *freq.entry(idx.node_vertices(n)?.to_vec()).or_default() += 1;
            }
        }
    }
    Ok(freq)
}

/// Replaces every node whose vertex set has positive space gain with a
/// virtual reference. An already compressed index is expanded first. The
/// returned index carries a copy of the table so it stays queryable.
pub fn compress(idx: &WcfIndex) -> Result<(WcfIndex, AuxiliaryTable)> {
    let base = if idx.aux.is_empty() {
        idx.clone()
    } else {
        expand(idx, &idx.aux)?
    };
    let chosen: Vec<Vec<VertexId>> = node_frequencies(&base)?
        .into_iter()
        .filter(|(vs, f)| space_gain(vs.len(), *f) > 0)
        .map(|(vs, _)| vs)
        .collect();
    let aux = AuxiliaryTable::from_entries(chosen);
    let mut out = base;
    for s in out.snapshots.iter_mut() {
        for f in s.forests.iter_mut() {
            for n in f.nodes.iter_mut() {
                if let NodePayload::Vertices(vs) = &n.payload {
                    if let Some(id) = aux.lookup(vs) {
                        n.payload = NodePayload::Virtual(id);
                    }
                }
            }
        }
    }
    out.aux = aux.clone();
    Ok((out, aux))
}

/// Resolves every virtual reference through `aux`.
pub fn expand(idx: &WcfIndex, aux: &AuxiliaryTable) -> Result<WcfIndex> {
    let mut out = idx.clone();
    out.aux = AuxiliaryTable::default();
    for s in out.snapshots.iter_mut() {
        for f in s.forests.iter_mut() {
            for n in f.nodes.iter_mut() {
                if let NodePayload::Virtual(id) = n.payload {
                    let vs = aux.get(id).ok_or(Error::DanglingRef(id))?;
                    n.payload = NodePayload::Vertices(vs.to_vec());
                }
            }
            relink(f, &out.aux);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyngraph::DynamicNetwork;
    use crate::fixtures;
    use crate::wcf::encoded_len;

    #[test]
    fn gain_formula() {
        assert_eq!(space_gain(5, 1), -1);
        assert_eq!(space_gain(1, 9), -1);
        assert_eq!(space_gain(3, 2), 1);
        assert_eq!(space_gain(2, 3), 1);
        assert_eq!(space_gain(4, 5), 11);
    }

    #[test]
    fn repeated_path_node() {
        // a path with equal weights forms one k=1 node per snapshot
        let snap: Vec<(u32, u32, f64)> = vec![(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5)];
        let net = DynamicNetwork::from_snapshot_edges(4, vec![snap; 5]).unwrap();
        let idx = WcfIndex::build(&net);
        let (c, aux) = compress(&idx).unwrap();
        assert_eq!(aux.len(), 1);
        assert_eq!(stored_slots(&idx) - stored_slots(&c), 11);
        assert!(encoded_len(&c) < encoded_len(&idx));
        assert_eq!(expand(&c, &aux).unwrap(), idx);
    }

    #[test]
    fn unique_nodes_stay_plain() {
        let net = DynamicNetwork::from_snapshot_edges(3, vec![vec![(0, 1, 0.5), (1, 2, 0.9)]]).unwrap();
        let idx = WcfIndex::build(&net);
        let (c, aux) = compress(&idx).unwrap();
        assert!(aux.is_empty());
        assert_eq!(c, idx);
        assert_eq!(expand(&idx, &AuxiliaryTable::default()).unwrap(), idx);
    }

    #[test]
    fn dangling_reference() {
        let net = fixtures::fig1();
        let (c, _) = compress(&WcfIndex::build(&net)).unwrap();
        assert!(matches!(expand(&c, &AuxiliaryTable::default()), Err(Error::DanglingRef(_))));
    }

    #[test]
    fn compressed_queries_are_transparent() {
        let net = fixtures::fig1();
        let idx = WcfIndex::build(&net);
        let (c, _) = compress(&idx).unwrap();
        assert!(c.is_compressed());
        assert!(c.structurally_equal(&idx));
        for t in 0..3 {
            for k in 1..=4 {
                for theta in [0.0, 0.3, 0.45, 0.5, 0.7] {
                    for q in 0..10 {
                        assert_eq!(c.query_c1(&net, k, theta, t, q), idx.query_c1(&net, k, theta, t, q));
                    }
                }
            }
        }
    }
}
