use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::json;

use relcom::compress::{compress, stored_slots};
use relcom::coredec::core_decompose;
use relcom::dyngraph::{ingest_edge_stream, read_network, write_network, IngestOptions, WeightMode, Window};
use relcom::eef::{eef_query_with, SearchOptions, SearchStats};
use relcom::maint::{apply_delta, parse_delta};
use relcom::metrics::evaluate;
use relcom::wcf::{self, encoded_len};
use relcom::wcf_search::{alpha_sweep, wcf_query_with};
use relcom::{Community, DynamicNetwork, QueryParams, ThetaGrid, WcfIndex};

mod bench;
mod check;
mod output;

use output::{community_json, community_row, Format, Report, COMMUNITY_HEADER};

#[derive(Parser)]
#[command(name = "relcom", version, about = "Reliable (theta,k)-core community search over dynamic weighted graphs")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a `u v t [w]` edge stream into a binary network file.
    Ingest {
        input: PathBuf,
        output: PathBuf,
        /// Number of equal-count snapshots.
        #[arg(long)]
        snapshots: usize,
        /// Weight a pair by how often it occurs in a snapshot.
        #[arg(long)]
        frequency: bool,
        /// Keep given weights as they are (must lie in (0,1]).
        #[arg(long, conflicts_with = "frequency")]
        raw_weights: bool,
    },
    /// Build the weighted core forest index of a network.
    BuildIndex {
        net: PathBuf,
        index: PathBuf,
        /// Use thresholds 0, 1/n, .., 1 instead of the default 0.1 grid.
        #[arg(long)]
        grid_steps: Option<u8>,
    },
    /// Apply an edge delta to one snapshot and update the index in place.
    Maintain {
        net: PathBuf,
        index: PathBuf,
        #[arg(long)]
        snapshot: usize,
        /// Lines of `I u v w`, `D u v` or `W u v w`.
        #[arg(long)]
        delta: PathBuf,
        /// Where to write the updated network (default: overwrite).
        #[arg(long)]
        net_out: Option<PathBuf>,
        /// Where to write the updated index (default: overwrite).
        #[arg(long)]
        index_out: Option<PathBuf>,
    },
    /// Replace repeated tree nodes by virtual nodes.
    Compress { index: PathBuf, output: PathBuf },
    /// Online search by eligible edge filtering.
    QueryEef {
        net: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        no_pruning: bool,
    },
    /// Index-based search.
    QueryWcf {
        net: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        no_pruning: bool,
    },
    /// Optimal community for several alpha values.
    AlphaSweep {
        net: PathBuf,
        #[arg(long)]
        index: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,4,6")]
        alphas: Vec<f64>,
    },
    /// Quality of the optimal community (size, density, core, conductance).
    Metrics {
        net: PathBuf,
        /// Use the index search instead of the online one.
        #[arg(long)]
        index: Option<PathBuf>,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Time both searches over sampled query vertices.
    Bench(bench::BenchArgs),
    /// Compare both searches, maintenance and compression against
    /// brute force on random small networks.
    OracleCheck(check::CheckArgs),
}

#[derive(Args, Clone, Debug)]
pub struct ParamArgs {
    /// Absolute k, or a percentage of the largest core number in the window.
    #[arg(long, default_value = "40%")]
    pub k: String,
    #[arg(long, default_value_t = 0.4)]
    pub theta: f64,
    /// `start:end`, inclusive. Defaults to the first 12 snapshots.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

#[derive(Args, Clone, Debug)]
pub struct QueryArgs {
    /// Query vertex label.
    #[arg(long)]
    pub q: String,
    #[command(flatten)]
    pub params: ParamArgs,
}

const DEFAULT_WINDOW: usize = 12;

pub fn parse_window(spec: Option<&str>, net: &DynamicNetwork) -> Result<Window> {
    let Some(s) = spec else {
        return Ok(Window::new(0, net.num_snapshots().min(DEFAULT_WINDOW) - 1));
    };
    let (a, b) = s.split_once(':').unwrap_or((s, s));
    let start = a.trim().parse().with_context(|| format!("bad window start in {s:?}"))?;
    let end = b.trim().parse().with_context(|| format!("bad window end in {s:?}"))?;
    Ok(Window::new(start, end))
}

/// Largest core number over the snapshots of `window`.
pub fn window_k_max(net: &DynamicNetwork, window: Window) -> u32 {
    window
        .iter()
        .filter(|&t| t < net.num_snapshots())
        .map(|t| core_decompose(net.snapshot(t)).max())
        .max()
        .unwrap_or(0)
}

/// `"3"` or `"40%"`; percentages round to the nearest integer, at least 1.
pub fn resolve_k(spec: &str, k_max: u32) -> Result<u32> {
    let s = spec.trim();
    if let Some(p) = s.strip_suffix('%') {
        let pct: f64 = p.trim().parse().with_context(|| format!("bad k percentage {spec:?}"))?;
        if !(pct.is_finite() && pct > 0.0) {
            bail!("k percentage must be positive, got {spec:?}");
        }
        return Ok(((pct / 100.0 * k_max as f64).round() as u32).max(1));
    }
    let k: u32 = s.parse().with_context(|| format!("bad k {spec:?}"))?;
    if k == 0 {
        bail!("k must be at least 1");
    }
    Ok(k)
}

impl ParamArgs {
    pub fn resolve(&self, net: &DynamicNetwork, q: u32) -> Result<QueryParams> {
        let window = parse_window(self.window.as_deref(), net)?;
        let p = QueryParams::new(q, 1, self.theta, window).with_alpha(self.alpha);
        p.validate(net)?;
        let k = resolve_k(&self.k, window_k_max(net, window))?;
        let p = QueryParams { k, ..p };
        p.validate(net)?;
        Ok(p)
    }
}

impl QueryArgs {
    fn resolve(&self, net: &DynamicNetwork) -> Result<QueryParams> {
        let q = net.resolve(&self.q)?;
        self.params.resolve(net, q)
    }
}

fn load_net(p: &Path) -> Result<DynamicNetwork> {
    let f = File::open(p).with_context(|| format!("cannot open network {}", p.display()))?;
    read_network(BufReader::new(f)).with_context(|| format!("cannot read network {}", p.display()))
}

fn save_net(net: &DynamicNetwork, p: &Path) -> Result<()> {
    let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
    write_network(net, BufWriter::new(f))?;
    Ok(())
}

fn load_index(p: &Path, net: Option<&DynamicNetwork>) -> Result<WcfIndex> {
    let f = File::open(p).with_context(|| format!("cannot open index {}", p.display()))?;
    let idx = wcf::load(BufReader::new(f)).with_context(|| format!("cannot read index {}", p.display()))?;
    if let Some(net) = net {
        idx.check_compatible(net)
            .with_context(|| format!("index {} does not match the network", p.display()))?;
    }
    Ok(idx)
}

fn save_index(idx: &WcfIndex, p: &Path) -> Result<()> {
    let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
    wcf::save(idx, BufWriter::new(f))?;
    Ok(())
}

fn query_json(net: &DynamicNetwork, p: &QueryParams) -> serde_json::Value {
    json!({
        "q": net.label(p.q),
        "k": p.k,
        "theta": p.theta,
        "window": [p.window.start, p.window.end],
        "alpha": p.alpha,
    })
}

fn query_report(
    command: &'static str,
    net: &DynamicNetwork,
    p: &QueryParams,
    c: Option<&Community>,
    stats: SearchStats,
) -> Report {
    Report::new(
        command,
        json!({
            "query": query_json(net, p),
            "community": community_json(net, c),
            "stats": stats,
        }),
    )
    .table(COMMUNITY_HEADER.to_vec(), vec![community_row(net, c)])
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let report = match &cli.cmd {
        Command::Ingest {
            input,
            output,
            snapshots,
            frequency,
            raw_weights,
        } => {
            let mode = if *frequency { WeightMode::Frequency } else { WeightMode::Given };
            let mut opts = IngestOptions::new(*snapshots, mode);
            opts.normalize = !raw_weights;
            let f = File::open(input).with_context(|| format!("cannot open {}", input.display()))?;
            let net = ingest_edge_stream(BufReader::new(f), &opts)
                .with_context(|| format!("cannot ingest {}", input.display()))?;
            save_net(&net, output)?;
            let edges: Vec<usize> = net.snapshots().iter().map(|g| g.edge_count()).collect();
            info!("ingested {} vertices over {} snapshots", net.vertex_count(), net.num_snapshots());
            let rows = edges.iter().enumerate().map(|(t, e)| vec![t.to_string(), e.to_string()]).collect();
            Report::new(
                "ingest",
                json!({ "vertices": net.vertex_count(), "snapshots": net.num_snapshots(), "edges": edges }),
            )
            .table(vec!["snapshot", "edges"], rows)
        }
        Command::BuildIndex { net, index, grid_steps } => {
            let net = load_net(net)?;
            let grid = match grid_steps {
                Some(n) => ThetaGrid::uniform(*n)?,
                None => ThetaGrid::standard(),
            };
            let idx = WcfIndex::build_with_grid(&net, grid);
            save_index(&idx, index)?;
            let k_max: Vec<u32> = (0..net.num_snapshots()).map(|t| idx.k_max(t)).collect();
            let rows = k_max.iter().enumerate().map(|(t, k)| vec![t.to_string(), k.to_string()]).collect();
            Report::new(
                "build-index",
                json!({
                    "grid": idx.grid().values(),
                    "k_max": k_max,
                    "vertex_slots": idx.vertex_slots(),
                    "bytes": encoded_len(&idx),
                }),
            )
            .table(vec!["snapshot", "k_max"], rows)
        }
        Command::Maintain {
            net: net_path,
            index: index_path,
            snapshot,
            delta,
            net_out,
            index_out,
        } => {
            let mut net = load_net(net_path)?;
            let mut idx = load_index(index_path, Some(&net))?;
            if *snapshot >= net.num_snapshots() {
                bail!("snapshot {snapshot} out of range (network has {})", net.num_snapshots());
            }
            let f = File::open(delta).with_context(|| format!("cannot open delta {}", delta.display()))?;
            let d = parse_delta(BufReader::new(f), &net, *snapshot)
                .with_context(|| format!("cannot parse delta {}", delta.display()))?;
            let reports = apply_delta(&mut idx, &mut net, &d)?;
            save_net(&net, net_out.as_deref().unwrap_or(net_path))?;
            save_index(&idx, index_out.as_deref().unwrap_or(index_path))?;
            let grid = idx.grid().clone();
            let level = |l: Option<u8>| l.map(|l| grid.value(l));
            let mut rows = Vec::new();
            let updates: Vec<_> = reports
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let changes: Vec<_> = r
                        .levels
                        .iter()
                        .flat_map(|l| l.changed.iter().map(move |c| (l.k, c)))
                        .map(|(k, &(v, a, b))| {
                            let fmt = |x: Option<f64>| x.map_or("-".to_string(), |x| x.to_string());
                            rows.push(vec![i.to_string(), k.to_string(), net.label(v).to_string(), fmt(level(a)), fmt(level(b))]);
                            json!({ "k": k, "vertex": net.label(v), "old": level(a), "new": level(b) })
                        })
                        .collect();
                    json!({
                        "edge": [net.label(r.edge.u()), net.label(r.edge.v())],
                        "old_weight": r.old_weight,
                        "new_weight": r.new_weight,
                        "changed": changes,
                    })
                })
                .collect();
            Report::new("maintain", json!({ "snapshot": snapshot, "updates": updates }))
                .table(vec!["update", "k", "vertex", "old", "new"], rows)
        }
        Command::Compress { index, output } => {
            let idx = load_index(index, None)?;
            let (c, aux) = compress(&idx)?;
            save_index(&c, output)?;
            let (b0, b1) = (encoded_len(&idx), encoded_len(&c));
            let (s0, s1) = (stored_slots(&idx), stored_slots(&c));
            Report::new(
                "compress",
                json!({ "virtual_nodes": aux.len(), "slots_before": s0, "slots_after": s1, "bytes_before": b0, "bytes_after": b1 }),
            )
            .table(
                vec!["virtual_nodes", "slots_before", "slots_after", "bytes_before", "bytes_after"],
                vec![[aux.len(), s0, s1, b0, b1].iter().map(|x| x.to_string()).collect()],
            )
        }
        Command::QueryEef { net, query, no_pruning } => {
            let net = load_net(net)?;
            let p = query.resolve(&net)?;
            let (c, stats) = eef_query_with(&net, &p, SearchOptions { pruning: !no_pruning })?;
            query_report("query-eef", &net, &p, c.as_ref(), stats)
        }
        Command::QueryWcf {
            net,
            index,
            query,
            no_pruning,
        } => {
            let net = load_net(net)?;
            let idx = load_index(index, Some(&net))?;
            let p = query.resolve(&net)?;
            let (c, stats) = wcf_query_with(&net, &idx, &p, SearchOptions { pruning: !no_pruning })?;
            query_report("query-wcf", &net, &p, c.as_ref(), stats)
        }
        Command::AlphaSweep {
            net,
            index,
            query,
            alphas,
        } => {
            let net = load_net(net)?;
            let idx = load_index(index, Some(&net))?;
            let p = query.resolve(&net)?;
            let res = alpha_sweep(&net, &idx, &p, alphas)?;
            let rows = res
                .iter()
                .map(|(a, c)| {
                    let mut r = vec![a.to_string()];
                    r.extend(community_row(&net, c.as_ref()));
                    r
                })
                .collect();
            let mut header = vec!["alpha"];
            header.extend(COMMUNITY_HEADER);
            let sweep: Vec<_> = res
                .iter()
                .map(|(a, c)| json!({ "alpha": a, "community": community_json(&net, c.as_ref()) }))
                .collect();
            Report::new("alpha-sweep", json!({ "query": query_json(&net, &p), "sweep": sweep })).table(header, rows)
        }
        Command::Metrics { net, index, query } => {
            let net = load_net(net)?;
            let p = query.resolve(&net)?;
            let c = match index {
                Some(path) => {
                    let idx = load_index(path, Some(&net))?;
                    wcf_query_with(&net, &idx, &p, SearchOptions::default())?.0
                }
                None => eef_query_with(&net, &p, SearchOptions::default())?.0,
            };
            let quality = c.as_ref().map(|c| evaluate(&net, c)).transpose()?;
            let rows = quality
                .iter()
                .map(|q| [q.ass, q.asd, q.ascore, q.ascond].iter().map(|x| x.to_string()).collect())
                .collect();
            Report::new(
                "metrics",
                json!({ "query": query_json(&net, &p), "community": community_json(&net, c.as_ref()), "quality": quality }),
            )
            .table(vec!["avg_size", "avg_density", "avg_core", "avg_conductance"], rows)
        }
        Command::Bench(args) => bench::run(args)?,
        Command::OracleCheck(args) => {
            let (report, ok) = check::run(args)?;
            report.emit(cli.format, cli.out.as_deref())?;
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    };
    report.emit(cli.format, cli.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("RELCOM_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_percent() {
        assert_eq!(resolve_k("40%", 10).unwrap(), 4);
        assert_eq!(resolve_k("20%", 2).unwrap(), 1);
        assert_eq!(resolve_k("25%", 6).unwrap(), 2);
        assert_eq!(resolve_k("1%", 0).unwrap(), 1);
        assert_eq!(resolve_k("7", 3).unwrap(), 7);
        assert!(resolve_k("0", 3).is_err());
        assert!(resolve_k("-5%", 3).is_err());
        assert!(resolve_k("x", 3).is_err());
    }

    #[test]
    fn windows() {
        let net = relcom::fixtures::fig1();
        assert_eq!(parse_window(None, &net).unwrap(), Window::new(0, 2));
        assert_eq!(parse_window(Some("1:2"), &net).unwrap(), Window::new(1, 2));
        assert_eq!(parse_window(Some("1"), &net).unwrap(), Window::new(1, 1));
        assert!(parse_window(Some("a:2"), &net).is_err());
    }
}
