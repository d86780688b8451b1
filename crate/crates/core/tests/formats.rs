use std::io::Cursor;

use relcom::dyngraph::{ingest_edge_stream, read_network, write_network, IngestOptions, WeightMode};
use relcom::maint::parse_delta;
use relcom::wcf::{load, save, to_debug_json};
use relcom::{fixtures, Error, WcfIndex};

#[test]
fn edge_list_to_binary_and_back() {
    let mut opts = IngestOptions::new(3, WeightMode::Given);
    opts.normalize = false;
    let net = ingest_edge_stream(Cursor::new(fixtures::fig1_edge_list()), &opts).unwrap();
    let mut buf = Vec::new();
    write_network(&net, &mut buf).unwrap();
    let back = read_network(Cursor::new(&buf)).unwrap();
    assert_eq!(back.labels(), fixtures::fig1().labels());
    assert_eq!(back.snapshots(), fixtures::fig1().snapshots());

    // any flipped byte is caught
    for i in [0, 5, buf.len() / 2, buf.len() - 1] {
        let mut bad = buf.clone();
        bad[i] ^= 0x40;
        assert!(read_network(Cursor::new(&bad)).is_err(), "byte {i}");
    }
}

#[test]
fn frequency_weights_normalize() {
    let text = "a b 0\na b 0\nb c 0\nc a 1\na b 1\n";
    let net = ingest_edge_stream(Cursor::new(text), &IngestOptions::new(1, WeightMode::Frequency)).unwrap();
    let g = net.snapshot(0);
    let (a, b, c) = (net.resolve("a").unwrap(), net.resolve("b").unwrap(), net.resolve("c").unwrap());
    // counts 3, 1, 1; the minimum maps to zero and is dropped
    assert_eq!(g.weight(a, b), Some(1.0));
    assert!(g.weight(b, c).is_none());
    assert!(g.weight(c, a).is_none());
}

#[test]
fn index_file_round_trip() {
    let net = fixtures::tradeoff();
    let idx = WcfIndex::build(&net);
    let mut buf = Vec::new();
    save(&idx, &mut buf).unwrap();
    let back = load(Cursor::new(&buf)).unwrap();
    assert_eq!(back, idx);
    assert_eq!(to_debug_json(&back), to_debug_json(&idx));
    buf.truncate(buf.len() - 3);
    assert!(matches!(load(Cursor::new(&buf)), Err(Error::Checksum)));
}

#[test]
fn delta_lines() {
    let net = fixtures::fig1();
    let d = parse_delta(Cursor::new("# c\nI v3 v5 0.3\nW v0 v1 0.9\nD v7 v8\n"), &net, 1).unwrap();
    assert_eq!(d.snapshot, 1);
    assert_eq!(d.updates.len(), 3);
    match parse_delta(Cursor::new("I v3 v5 0.3\nX v0 v1\n"), &net, 0) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}
