//! Binary index file and JSON debug export.
//!
//! Layout: magic `WCFI`, version, grid values, vertex and snapshot counts,
//! then per snapshot the forest count and per forest the largest component
//! size and node records `{level u8, parent u32, tag u8, payload}`. Tag 0
//! carries a vertex count and ids, tag 1 a virtual id. The auxiliary table
//! trails the forests, followed by a CRC-32 of everything before it.

use std::io::{Read, Write};

use serde_json::{json, Value};

use super::{relink, Forest, NodePayload, SnapshotIndex, ThetaGrid, TreeNode, WcfIndex};
use crate::codec::{check_header, ByteReader, ByteWriter};
use crate::compress::AuxiliaryTable;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"WCFI";
const VERSION: u16 = 1;
const NO_PARENT: u32 = u32::MAX;

pub(crate) fn encode(idx: &WcfIndex) -> ByteWriter {
    let mut w = ByteWriter::new();
    w.bytes(MAGIC);
    w.u16(VERSION);
    w.u8(idx.grid.len() as u8);
    for &g in idx.grid.values() {
        w.f64(g);
    }
    w.u32(idx.vertex_count as u32);
    w.u32(idx.snapshots.len() as u32);
    for s in &idx.snapshots {
        w.u32(s.forests.len() as u32);
        for (f, &mc) in s.forests.iter().zip(&s.max_component) {
            w.u32(mc);
            w.u32(f.nodes.len() as u32);
            for n in &f.nodes {
                w.u8(n.theta);
                w.u32(n.parent.unwrap_or(NO_PARENT));
                match &n.payload {
                    NodePayload::Vertices(vs) => {
                        w.u8(0);
                        w.u32(vs.len() as u32);
                        for &v in vs {
                            w.u32(v);
                        }
                    }
                    NodePayload::Virtual(id) => {
                        w.u8(1);
                        w.u32(*id);
                    }
                }
            }
        }
    }
    w.u32(idx.aux.len() as u32);
    for vs in idx.aux.entries() {
        w.u32(vs.len() as u32);
        for &v in vs {
            w.u32(v);
        }
    }
    w
}

/// Serialized size in bytes, checksum included.
pub fn encoded_len(idx: &WcfIndex) -> usize {
    let mut buf = Vec::new();
    encode(idx).finish(&mut buf).expect("writing to memory");
    buf.len()
}

pub fn save<W: Write>(idx: &WcfIndex, w: W) -> Result<()> {
    encode(idx).finish(w)
}

fn read_vertices(r: &mut ByteReader, n: usize) -> Result<Vec<u32>> {
    let len = r.count(4)?;
    let vs = (0..len).map(|_| r.u32()).collect::<Result<Vec<u32>>>()?;
    if vs.windows(2).any(|p| p[0] >= p[1]) || vs.iter().any(|&v| v as usize >= n) {
        return Err(Error::Corrupt("vertex list not sorted or out of range".into()));
    }
    Ok(vs)
}

pub fn load<R: Read>(src: R) -> Result<WcfIndex> {
    let mut r = ByteReader::load(src)?;
    check_header(&mut r, MAGIC, "WCF index", VERSION)?;
    let levels = r.u8()? as usize;
    let grid = ThetaGrid::new((0..levels).map(|_| r.f64()).collect::<Result<_>>()?)
        .map_err(|e| Error::Corrupt(e.to_string()))?;
    let n = r.u32()? as usize;
    let t_count = r.count(4)?;
    let mut snapshots = Vec::with_capacity(t_count);
    let mut pending: Vec<Forest> = Vec::new();
    let mut shape: Vec<usize> = Vec::new();
    for _ in 0..t_count {
        let kc = r.count(8)?;
        let mut s = SnapshotIndex::default();
        for _ in 0..kc {
            s.max_component.push(r.u32()?);
            let nc = r.count(6)?;
            let mut nodes = Vec::with_capacity(nc);
            for _ in 0..nc {
                let theta = r.u8()?;
                if theta as usize >= levels {
                    return Err(Error::Corrupt(format!("node level {theta} beyond grid")));
                }
                let parent = match r.u32()? {
                    NO_PARENT => None,
                    p if (p as usize) < nc => Some(p),
                    p => return Err(Error::Corrupt(format!("parent {p} out of range"))),
                };
                let payload = match r.u8()? {
                    0 => NodePayload::Vertices(read_vertices(&mut r, n)?),
                    1 => NodePayload::Virtual(r.u32()?),
                    tag => return Err(Error::Corrupt(format!("unknown node tag {tag}"))),
                };
                nodes.push(TreeNode {
                    theta,
                    parent,
                    children: Vec::new(),
                    payload,
                });
            }
            pending.push(Forest {
                nodes,
                locator: Vec::new(),
            });
        }
        shape.push(kc);
        snapshots.push(s);
    }
    let ac = r.count(4)?;
    let mut entries = Vec::with_capacity(ac);
    for _ in 0..ac {
        entries.push(read_vertices(&mut r, n)?);
    }
    r.finish()?;
    let aux = AuxiliaryTable::from_entries(entries);

    let mut it = pending.into_iter();
    for (s, kc) in snapshots.iter_mut().zip(shape) {
        for _ in 0..kc {
            let mut f = it.next().unwrap();
            for node in &f.nodes {
                if let NodePayload::Virtual(id) = node.payload {
                    aux.get(id).ok_or(Error::DanglingRef(id))?;
                }
            }
            relink(&mut f, &aux);
            s.forests.push(f);
        }
    }
    Ok(WcfIndex {
        grid,
        vertex_count: n,
        snapshots,
        aux,
    })
}

/// JSON mirror of the index structure.
pub fn to_debug_json(idx: &WcfIndex) -> Value {
    let snaps: Vec<Value> = idx
        .snapshots
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let forests: Vec<Value> = s
                .forests
                .iter()
                .enumerate()
                .map(|(ki, f)| {
                    let nodes: Vec<Value> = f
                        .nodes
                        .iter()
                        .enumerate()
                        .map(|(i, n)| {
                            let mut o = json!({
                                "id": i,
                                "theta": idx.grid.value(n.theta),
                                "parent": n.parent,
                                "children": n.children,
                            });
                            match &n.payload {
                                NodePayload::Vertices(vs) => o["vertices"] = json!(vs),
                                NodePayload::Virtual(id) => o["virtual"] = json!(id),
                            }
                            o
                        })
                        .collect();
                    json!({ "k": ki + 1, "max_component": s.max_component[ki], "nodes": nodes })
                })
                .collect();
            json!({ "t": t, "forests": forests })
        })
        .collect();
    json!({
        "grid": idx.grid.values(),
        "vertex_count": idx.vertex_count,
        "snapshots": snaps,
        "aux": idx.aux.entries().collect::<Vec<_>>(),
    })
}
