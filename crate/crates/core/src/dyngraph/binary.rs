//! Binary snapshot format:
//! `"RCDN" | version u16 | |V| u32 | |T| u32`, then per snapshot CSR arrays
//! (`|V|+1` u64 offsets, u32 neighbors, f64 weights; both directions stored),
//! then the label block, then a CRC-32 of everything before it.

use std::io::{Read, Write};

use super::{DynamicNetwork, GraphInstance};
use crate::codec::{check_header, ByteReader, ByteWriter};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"RCDN";
const VERSION: u16 = 1;

pub fn write_network<W: Write>(net: &DynamicNetwork, w: W) -> Result<()> {
    let mut out = ByteWriter::new();
    out.bytes(MAGIC);
    out.u16(VERSION);
    out.u32(net.vertex_count() as u32);
    out.u32(net.num_snapshots() as u32);
    for g in net.snapshots() {
        let mut off = 0u64;
        out.u64(off);
        for list in g.adjacency() {
            off += list.len() as u64;
            out.u64(off);
        }
        for list in g.adjacency() {
            for &(n, _) in list {
                out.u32(n);
            }
        }
        for list in g.adjacency() {
            for &(_, wt) in list {
                out.f64(wt);
            }
        }
    }
    for l in net.labels() {
        out.str(l);
    }
    out.finish(w)
}

pub fn read_network<R: Read>(r: R) -> Result<DynamicNetwork> {
    let mut r = ByteReader::load(r)?;
    check_header(&mut r, MAGIC, "network", VERSION)?;
    let n = r.u32()? as usize;
    let t = r.u32()? as usize;
    let mut snapshots = Vec::with_capacity(t);
    for _ in 0..t {
        let mut offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            offsets.push(r.u64()? as usize);
        }
        if offsets[0] != 0 || offsets.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::Corrupt("non-monotone CSR offsets".into()));
        }
        let nnz = offsets[n];
        let mut nbrs = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            nbrs.push(r.u32()?);
        }
        let mut weights = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            weights.push(r.f64()?);
        }
        let mut triples = Vec::with_capacity(nnz / 2);
        for u in 0..n {
            for i in offsets[u]..offsets[u + 1] {
                if (u as u32) < nbrs[i] {
                    triples.push((u as u32, nbrs[i], weights[i]));
                }
            }
        }
        let g = GraphInstance::from_edges(n, triples)
            .map_err(|e| Error::Corrupt(format!("snapshot {}: {e}", snapshots.len())))?;
        if g.edge_count() * 2 != nnz {
            return Err(Error::Corrupt("asymmetric adjacency".into()));
        }
        snapshots.push(g);
    }
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        labels.push(r.str()?);
    }
    r.finish()?;
    DynamicNetwork::new(labels, snapshots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_identical() {
        let net = crate::fixtures::fig1();
        let mut a = Vec::new();
        write_network(&net, &mut a).unwrap();
        let back = read_network(a.as_slice()).unwrap();
        assert_eq!(back, net);
        let mut b = Vec::new();
        write_network(&back, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn truncation_and_version_are_detected() {
        let net = crate::fixtures::fig1();
        let mut a = Vec::new();
        write_network(&net, &mut a).unwrap();
        assert!(matches!(
            read_network(&a[..a.len() - 10]),
            Err(Error::Checksum)
        ));

        let mut bumped = a[..a.len() - 4].to_vec();
        bumped[4] = 9;
        let crc = crc32fast::hash(&bumped);
        bumped.extend_from_slice(&crc.to_le_bytes());
        assert!(matches!(
            read_network(bumped.as_slice()),
            Err(Error::Version { found: 9, .. })
        ));
    }
}
