//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relcom::compress::{compress, expand, space_gain, stored_slots};
use relcom::coredec::{core_decompose, theta_k_core};
use relcom::dyngraph::{DynamicNetwork, Edge, QueryParams, VertexId, Window};
use relcom::eef::{eef_query_with, eligible_states, SearchOptions};
use relcom::fixtures;
use relcom::maint::{apply_delta, EdgeUpdate, GraphDelta};
use relcom::oracle::{brute_force_query, random_network_with, RandomSpec};
use relcom::reliability::{score, ReliabilityContext};
use relcom::wcf::encoded_len;
use relcom::wcf_search::{alpha_sweep, wcf_query_with};
use relcom::WcfIndex;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn labels(net: &DynamicNetwork, vs: &[VertexId]) -> Vec<String> {
    vs.iter().map(|&v| net.label(v).to_string()).collect()
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let net = fixtures::fig1();
    let v = |l: &str| net.resolve(l).unwrap();
    let params = QueryParams::new(v("v0"), 3, 0.4, Window::new(0, 2)).with_alpha(1.0);
    let idx = WcfIndex::build(&net);
    let (e, _) = eef_query_with(&net, &params, SearchOptions::default()).map_err(|e| e.to_string())?;
    let (w, _) = wcf_query_with(&net, &idx, &params, SearchOptions::default()).map_err(|e| e.to_string())?;
    for (name, c) in [("eef", e), ("wcf", w)] {
        let c = c.ok_or(format!("{name}: no community"))?;
        check(
            labels(&net, &c.vertices) == ["v0", "v2", "v3", "v4"] && c.interval == Window::new(0, 1),
            || format!("{name}: got {:?} over {:?}", labels(&net, &c.vertices), c.interval),
        )?;
    }
    let ctx = ReliabilityContext::new(10, 3, 1.0).unwrap();
    let lam: Vec<u32> = eligible_states(&net, &QueryParams::new(v("v0"), 1, 0.6, Window::new(0, 2)), &ctx)
        .iter()
        .map(|(s, _)| s.lasting(Edge::new(v("v0"), v("v1"))))
        .collect();
    check(lam == [1, 2, 0], || format!("lasting times {lam:?}"))?;
    let c1 = idx.query_c1(&net, 2, 0.5, 0, v("v0")).ok_or("query_c1 empty")?;
    check(labels(&net, &c1.vertices) == ["v0", "v1", "v2", "v3", "v4"], || format!("query_c1 {:?}", c1.vertices))?;
    let took = start.elapsed();
    check(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("in {took:?}"))
}

fn score_formula() -> Outcome {
    let mut parts = Vec::new();
    for (size, dur, alpha, want) in [(5, 2, 1.0, 0.57), (5, 2, 2.0, 0.63), (4, 3, 1.0, 0.57), (4, 3, 2.0, 0.77)] {
        let got = score(size, dur, &ReliabilityContext::new(10, 3, alpha).unwrap());
        // 1e-12 absorbs the binary representation of the inclusive boundary
        check((got - want).abs() <= 0.005 + 1e-12, || format!("score({size},{dur},α={alpha}) = {got}, want {want}"))?;
        parts.push(format!("{got:.4}"));
    }
    Ok(parts.join(" "))
}

struct Corpus {
    nets: Vec<(DynamicNetwork, VertexId)>,
}

fn corpus() -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let nets = (0..500)
        .map(|_| {
            let spec = RandomSpec {
                vertices: rng.gen_range(4..=12),
                snapshots: rng.gen_range(1..=4),
                density: rng.gen_range(0.3..0.8),
                presence: rng.gen_range(0.6..1.0),
            };
            let net = random_network_with(spec, &mut rng);
            let active: Vec<VertexId> = (0..spec.vertices as VertexId).filter(|&x| net.snapshot(0).degree(x) > 0).collect();
            let q = if active.is_empty() { 0 } else { active[rng.gen_range(0..active.len())] };
            (net, q)
        })
        .collect();
    Corpus { nets }
}

fn grid() -> impl Iterator<Item = (u32, f64, f64)> {
    [1u32, 2, 3].into_iter().flat_map(|k| {
        [0.0, 0.3, 0.6]
            .into_iter()
            .flat_map(move |th| [0.0, 1.0, 2.0].into_iter().map(move |a| (k, th, a)))
    })
}

fn oracle_equivalence(c: &Corpus) -> Outcome {
    let start = Instant::now();
    let (mut queries, mut found) = (0, 0);
    for (gi, (net, q)) in c.nets.iter().enumerate() {
        let idx = WcfIndex::build(net);
        for (k, theta, alpha) in grid() {
            let params = QueryParams::new(*q, k, theta, net.full_window()).with_alpha(alpha);
            let oracle = brute_force_query(net, &params).map_err(|e| format!("graph {gi}: {e}"))?;
            let (e, _) = eef_query_with(net, &params, SearchOptions::default()).map_err(|e| e.to_string())?;
            let (w, _) = wcf_query_with(net, &idx, &params, SearchOptions::default()).map_err(|e| e.to_string())?;
            let sc = |c: &Option<relcom::Community>| c.as_ref().map_or(0.0, |c| c.score);
            check(sc(&e) == oracle.best_score && sc(&w) == oracle.best_score, || {
                format!("graph {gi} {params:?}: eef {} wcf {} oracle {}", sc(&e), sc(&w), oracle.best_score)
            })?;
            check(e == oracle.best_community && w == oracle.best_community, || {
                format!("graph {gi} {params:?}: communities differ")
            })?;
            queries += 1;
            found += usize::from(e.is_some());
        }
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(300), || format!("took {took:?}"))?;
    Ok(format!("{} graphs, {queries} queries ({found} non-empty) in {took:.1?}", c.nets.len()))
}

fn index_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let mut checked = 0usize;
    for s in 0..50 {
        let spec = RandomSpec {
            vertices: 40,
            snapshots: 1,
            density: rng.gen_range(0.08..0.3),
            presence: 1.0,
        };
        let net = random_network_with(spec, &mut rng);
        let idx = WcfIndex::build(&net);
        let g = net.snapshot(0);
        let core_sum: usize = core_decompose(g).0.iter().map(|&c| c as usize).sum();
        check(idx.vertex_slots() == core_sum, || format!("snapshot {s}: {} slots vs core sum {core_sum}", idx.vertex_slots()))?;
        for k in 1..=idx.k_max(0) + 1 {
            for &theta in idx.grid().values() {
                for q in 0..40 {
                    let got = idx.query_c1(&net, k, theta, 0, q);
                    check(got == theta_k_core(g, theta, k, q), || format!("snapshot {s}: k={k} θ={theta} q={q}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (k,θ,q) point queries"))
}

fn maintenance() -> Outcome {
    // the worked insertion
    let mut net = fixtures::fig1();
    let mut idx = WcfIndex::build(&net);
    let (v3, v5) = (net.resolve("v3").unwrap(), net.resolve("v5").unwrap());
    let delta = GraphDelta {
        snapshot: 0,
        updates: vec![EdgeUpdate::Insert { u: v3, v: v5, w: 0.3 }],
    };
    let rep = apply_delta(&mut idx, &mut net, &delta).map_err(|e| e.to_string())?;
    let changed: Vec<VertexId> = rep[0].changed_vertices().into_iter().collect();
    check(labels(&net, &changed) == ["v5", "v6"], || format!("changed {:?}", labels(&net, &changed)))?;
    check(idx.structurally_equal(&WcfIndex::build(&net)), || "fixture insertion differs from rebuild".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut net = random_network_with(
        RandomSpec {
            vertices: 30,
            snapshots: 4,
            density: 0.2,
            presence: 0.85,
        },
        &mut rng,
    );
    let mut idx = WcfIndex::build(&net);
    let mut updates = 0;
    for d in 0..200 {
        let t = rng.gen_range(0..4);
        let mut scratch = net.snapshot(t).clone();
        let mut ups = Vec::new();
        for _ in 0..rng.gen_range(1..=5) {
            let (u, v) = loop {
                let (u, v) = (rng.gen_range(0..30), rng.gen_range(0..30));
                if u != v {
                    break (u, v);
                }
            };
            let w = rng.gen_range(1..=20) as f64 / 20.0;
            let upd = match (scratch.weight(u, v).is_some(), rng.gen_bool(0.5)) {
                (false, _) => EdgeUpdate::Insert { u, v, w },
                (true, true) => EdgeUpdate::Delete { u, v },
                (true, false) => EdgeUpdate::Reweight { u, v, w },
            };
            match upd {
                EdgeUpdate::Delete { .. } => {
                    scratch.remove_edge(u, v);
                }
                _ => {
                    scratch.set_edge(u, v, w).unwrap();
                }
            }
            ups.push(upd);
        }
        updates += ups.len();
        apply_delta(&mut idx, &mut net, &GraphDelta { snapshot: t, updates: ups }).map_err(|e| format!("delta {d}: {e}"))?;
        check(idx.structurally_equal(&WcfIndex::build(&net)), || format!("delta {d} diverges from rebuild"))?;
    }
    Ok(format!("200 deltas ({updates} updates) match rebuilds; example changes {{v5,v6}}"))
}

fn compression() -> Outcome {
    let fig = fixtures::fig1();
    let mut t1b = fig.snapshot(0).clone();
    t1b.set_edge(3, 5, 0.3).unwrap();
    let pair = DynamicNetwork::new(fig.labels().to_vec(), vec![fig.snapshot(0).clone(), t1b]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut nets = vec![fig, pair.clone(), fixtures::tradeoff()];
    for _ in 0..5 {
        nets.push(random_network_with(
            RandomSpec {
                vertices: 20,
                snapshots: 4,
                density: 0.3,
                presence: 0.95,
            },
            &mut rng,
        ));
    }
    for (i, net) in nets.iter().enumerate() {
        let idx = WcfIndex::build(net);
        let (c, aux) = compress(&idx).map_err(|e| e.to_string())?;
        check(expand(&c, &aux).map_err(|e| e.to_string())? == idx, || format!("network {i}: round trip differs"))?;
        check(c.structurally_equal(&idx), || format!("network {i}: structure differs"))?;
        for t in 0..net.num_snapshots() {
            for k in 1..=idx.k_max(t) {
                for &theta in &[0.0, 0.25, 0.3, 0.5, 0.65, 0.8] {
                    for q in 0..net.vertex_count() as VertexId {
                        check(c.query_c1(net, k, theta, t, q) == idx.query_c1(net, k, theta, t, q), || {
                            format!("network {i}: query_c1 differs at k={k} θ={theta} t={t} q={q}")
                        })?;
                    }
                }
            }
        }
        if !aux.is_empty() {
            check(encoded_len(&c) < encoded_len(&idx), || format!("network {i}: serialized size did not shrink"))?;
        }
    }

    // shared nodes of the two k=2 trees become virtual
    let (c, aux) = compress(&WcfIndex::build(&pair)).map_err(|e| e.to_string())?;
    for group in [["v0", "v1"].as_slice(), &["v2", "v3", "v4"], &["v7", "v8", "v9"]] {
        let ids: Vec<VertexId> = group.iter().map(|l| pair.resolve(l).unwrap()).collect();
        check(aux.lookup(&ids).is_some(), || format!("{group:?} not virtual"))?;
    }
    drop(c);
    let virtual_sets: Vec<String> = aux.entries().map(|vs| format!("{{{}}}", labels(&pair, vs).join(","))).collect();

    // one 4-vertex node repeated 5 times
    let path = vec![(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5)];
    let net = DynamicNetwork::from_snapshot_edges(4, vec![path; 5]).unwrap();
    let idx = WcfIndex::build(&net);
    let (c, _) = compress(&idx).map_err(|e| e.to_string())?;
    let saved = stored_slots(&idx) as i64 - stored_slots(&c) as i64;
    check(saved == 11 && space_gain(4, 5) == 11, || format!("saved {saved} slots"))?;
    let (before, after) = (encoded_len(&idx), encoded_len(&c));
    check(after < before, || format!("{after} >= {before} bytes"))?;
    Ok(format!(
        "{} indices round-trip; example pair virtualizes {}; f=5 |X|=4 saves 11 slots, {before} -> {after} bytes",
        nets.len(),
        virtual_sets.join(" ")
    ))
}

fn pruning(c: &Corpus) -> Outcome {
    let (mut on_calls, mut off_calls) = (0usize, 0usize);
    for (gi, (net, q)) in c.nets.iter().enumerate() {
        let idx = WcfIndex::build(net);
        for (k, theta, alpha) in grid() {
            let params = QueryParams::new(*q, k, theta, net.full_window()).with_alpha(alpha);
            let on = SearchOptions { pruning: true };
            let off = SearchOptions { pruning: false };
            let (e1, se1) = eef_query_with(net, &params, on).map_err(|e| e.to_string())?;
            let (e0, se0) = eef_query_with(net, &params, off).map_err(|e| e.to_string())?;
            let (w1, sw1) = wcf_query_with(net, &idx, &params, on).map_err(|e| e.to_string())?;
            let (w0, sw0) = wcf_query_with(net, &idx, &params, off).map_err(|e| e.to_string())?;
            let sc = |c: &Option<relcom::Community>| c.as_ref().map_or(0.0, |c| c.score);
            check(sc(&e1) == sc(&e0) && sc(&w1) == sc(&w0), || format!("graph {gi} {params:?}: pruning changed the score"))?;
            check(se1.core_extractions <= se0.core_extractions && sw1.core_extractions <= sw0.core_extractions, || {
                format!("graph {gi} {params:?}: more extractions with pruning")
            })?;
            on_calls += se1.core_extractions + sw1.core_extractions;
            off_calls += se0.core_extractions + sw0.core_extractions;
        }
    }
    Ok(format!("core extractions {on_calls} with pruning vs {off_calls} without"))
}

fn alpha_monotone() -> Outcome {
    let net = fixtures::tradeoff();
    let idx = WcfIndex::build(&net);
    let params = QueryParams::new(0, 2, 0.0, net.full_window());
    let alphas = [0.0, 0.5, 1.0, 2.0, 4.0, 6.0];
    let res = alpha_sweep(&net, &idx, &params, &alphas).map_err(|e| e.to_string())?;
    let mut durations = Vec::new();
    let mut sizes = Vec::new();
    for (a, c) in &res {
        let c = c.as_ref().ok_or(format!("α={a}: no community"))?;
        durations.push(c.duration());
        sizes.push(c.size());
    }
    check(durations.windows(2).all(|w| w[0] <= w[1]), || format!("durations {durations:?}"))?;
    check(durations.first() < durations.last(), || format!("no trade-off visible: {durations:?}"))?;
    Ok(format!("durations {durations:?}, sizes {sizes:?}"))
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("1 worked example", Box::new(worked_example)),
        ("2 score formula", Box::new(score_formula)),
        ("3 oracle equivalence", Box::new(|| oracle_equivalence(&corpus))),
        ("4 index correctness", Box::new(index_correctness)),
        ("5 maintenance equivalence", Box::new(maintenance)),
        ("6 compression", Box::new(compression)),
        ("7 pruning soundness", Box::new(|| pruning(&corpus))),
        ("8 alpha-sweep monotonicity", Box::new(alpha_monotone)),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
