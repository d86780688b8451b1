use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;

use super::{DynamicNetwork, Edge, GraphInstance, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    /// Use the fourth column; duplicates within a snapshot keep the max.
    Given,
    /// Weight is the number of times a pair occurs within a snapshot.
    Frequency,
}

#[derive(Clone, Debug)]
pub struct IngestOptions {
    pub num_snapshots: usize,
    pub weight_mode: WeightMode,
    /// Min-max normalize weights over the whole stream. When off, given
    /// weights must already lie in `(0,1]`.
    pub normalize: bool,
}

impl IngestOptions {
    pub fn new(num_snapshots: usize, weight_mode: WeightMode) -> Self {
        IngestOptions {
            num_snapshots,
            weight_mode,
            normalize: true,
        }
    }
}

struct Record {
    u: VertexId,
    v: VertexId,
    time: f64,
    weight: f64,
}

fn parse_num(tok: &str, what: &str, line: usize) -> Result<f64> {
    let x: f64 = tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} {tok:?}"),
    })?;
    if !x.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("non-finite {what} {tok:?}"),
        });
    }
    Ok(x)
}

/// Reads a `u v t [w]` edge stream, sorts it chronologically and splits it
/// into `num_snapshots` equal-count partitions (the last one takes the
/// remainder). Self-loops are skipped. Exact-zero weights after
/// normalization are dropped.
pub fn ingest_edge_stream<R: BufRead>(reader: R, opts: &IngestOptions) -> Result<DynamicNetwork> {
    if opts.num_snapshots == 0 {
        return Err(Error::Config("num_snapshots must be at least 1".into()));
    }

    let mut raw: Vec<(String, String, f64, f64, usize)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let need = match opts.weight_mode {
            WeightMode::Given => 4,
            WeightMode::Frequency => 3,
        };
        if toks.len() < need || toks.len() > 4 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {need} columns (u v t{}), got {}", if need == 4 { " w" } else { " [w]" }, toks.len()),
            });
        }
        let time = parse_num(toks[2], "timestamp", line_no)?;
        let weight = match opts.weight_mode {
            WeightMode::Given => {
                let w = parse_num(toks[3], "weight", line_no)?;
                if !opts.normalize && !(w > 0.0 && w <= 1.0) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("weight {w} outside (0,1] with normalization disabled"),
                    });
                }
                w
            }
            WeightMode::Frequency => 1.0,
        };
        if toks[0] == toks[1] {
            continue;
        }
        raw.push((toks[0].to_string(), toks[1].to_string(), time, weight, line_no));
    }

    if opts.num_snapshots > raw.len() {
        return Err(Error::Config(format!(
            "{} snapshots requested but the stream has only {} edges",
            opts.num_snapshots,
            raw.len()
        )));
    }

    // Stable: equal timestamps keep file order.
    raw.sort_by(|a, b| a.2.total_cmp(&b.2));

    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, VertexId> = HashMap::new();
    let mut intern = |s: String| -> VertexId {
        if let Some(&id) = ids.get(&s) {
            return id;
        }
        let id = labels.len() as VertexId;
        labels.push(s.clone());
        ids.insert(s, id);
        id
    };
    let records: Vec<Record> = raw
        .into_iter()
        .map(|(a, b, time, weight, _)| Record {
            u: intern(a),
            v: intern(b),
            time,
            weight,
        })
        .collect();
    debug_assert!(records.windows(2).all(|p| p[0].time <= p[1].time));

    let per = records.len() / opts.num_snapshots;
    let mut parts: Vec<BTreeMap<Edge, f64>> = vec![BTreeMap::new(); opts.num_snapshots];
    for (i, r) in records.iter().enumerate() {
        let p = (i / per).min(opts.num_snapshots - 1);
        let slot = parts[p].entry(Edge::new(r.u, r.v));
        match opts.weight_mode {
            WeightMode::Given => {
                let w = slot.or_insert(f64::NEG_INFINITY);
                *w = w.max(r.weight);
            }
            WeightMode::Frequency => *slot.or_insert(0.0) += 1.0,
        }
    }

    let (lo, hi) = parts
        .iter()
        .flat_map(|m| m.values())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| (lo.min(w), hi.max(w)));
    let normalize = |w: f64| -> f64 {
        if !opts.normalize {
            w
        } else if hi > lo {
            (w - lo) / (hi - lo)
        } else {
            1.0
        }
    };

    let n = labels.len();
    let snapshots = parts
        .into_iter()
        .map(|m| {
            GraphInstance::from_edges(
                n,
                m.into_iter()
                    .map(|(e, w)| (e.u(), e.v(), normalize(w)))
                    .filter(|&(_, _, w)| w > 0.0),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    DynamicNetwork::new(labels, snapshots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ingest(text: &str, t: usize, mode: WeightMode) -> Result<DynamicNetwork> {
        ingest_edge_stream(text.as_bytes(), &IngestOptions::new(t, mode))
    }

    #[test]
    fn equal_split() {
        let text: String = (0..12).map(|i| format!("a{i} b{i} {i} 1\n")).collect();
        let net = ingest(&text, 3, WeightMode::Given).unwrap();
        assert_eq!(net.num_snapshots(), 3);
        for g in net.snapshots() {
            assert_eq!(g.edge_count(), 4);
        }
    }

    #[test]
    fn remainder_goes_to_last_partition() {
        let text: String = (0..11).map(|i| format!("a{i} b{i} {i} 1\n")).collect();
        let net = ingest(&text, 3, WeightMode::Given).unwrap();
        let counts: Vec<_> = net.snapshots().iter().map(|g| g.edge_count()).collect();
        assert_eq!(counts, vec![3, 3, 5]);
    }

    #[test]
    fn min_max_drops_zero_weight() {
        let net = ingest("a b 0 2\nc d 1 5\ne f 2 8\n", 1, WeightMode::Given).unwrap();
        let g = net.snapshot(0);
        let (a, b) = (net.resolve("a").unwrap(), net.resolve("b").unwrap());
        let (c, d) = (net.resolve("c").unwrap(), net.resolve("d").unwrap());
        let (e, f) = (net.resolve("e").unwrap(), net.resolve("f").unwrap());
        assert_eq!(g.weight(a, b), None);
        assert_eq!(g.weight(c, d), Some(0.5));
        assert_eq!(g.weight(e, f), Some(1.0));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn duplicate_pair_keeps_max_weight() {
        // the (x,y) pair appears twice in the same partition, reversed once
        let text = "x y 1 0.3\ny x 2 0.9\np q 3 0.1\n";
        let mut opts = IngestOptions::new(1, WeightMode::Given);
        opts.normalize = false;
        let net = ingest_edge_stream(text.as_bytes(), &opts).unwrap();
        let (x, y) = (net.resolve("x").unwrap(), net.resolve("y").unwrap());
        assert_eq!(net.snapshot(0).weight(x, y), Some(0.9));
        assert_eq!(net.snapshot(0).edge_count(), 2);
    }

    #[test]
    fn frequency_mode_counts_duplicates() {
        let text = "x y 1\nx y 2\nx y 3\np q 4\n";
        let net = ingest(text, 1, WeightMode::Frequency).unwrap();
        let (x, y) = (net.resolve("x").unwrap(), net.resolve("y").unwrap());
        // counts {3,1} -> {1,0}; the single (p,q) is dropped
        assert_eq!(net.snapshot(0).weight(x, y), Some(1.0));
        assert_eq!(net.snapshot(0).edge_count(), 1);
    }

    #[test]
    fn chronological_order_not_file_order() {
        let text = "a b 5 1\nc d 1 1\n";
        let mut opts = IngestOptions::new(2, WeightMode::Given);
        opts.normalize = false;
        let net = ingest_edge_stream(text.as_bytes(), &opts).unwrap();
        let (c, d) = (net.resolve("c").unwrap(), net.resolve("d").unwrap());
        assert!(net.snapshot(0).weight(c, d).is_some());
        assert_eq!(net.labels()[0], "c");
    }

    #[test]
    fn comments_and_errors() {
        let ok = ingest("# header\n\na b 0 1\n", 1, WeightMode::Given);
        assert!(ok.is_ok());
        match ingest("a b 0 1\na b oops 1\n", 1, WeightMode::Given) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match ingest("a b 0\n", 1, WeightMode::Given) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            ingest("a b 0 1\nc d 1 1\n", 3, WeightMode::Given),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn raw_weights_must_be_in_unit_interval() {
        let mut opts = IngestOptions::new(1, WeightMode::Given);
        opts.normalize = false;
        assert!(matches!(
            ingest_edge_stream("a b 0 2.0\n".as_bytes(), &opts),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
