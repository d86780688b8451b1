//! Browser explorer over a small dynamic network: run a community query,
//! sweep alpha, and look at the index trees of one snapshot.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use relcom::coredec::core_decompose;
use relcom::dyngraph::Window;
use relcom::eef::{eef_query_with, SearchOptions};
use relcom::oracle::{random_network, RandomSpec};
use relcom::wcf::NodePayload;
use relcom::wcf_search::{alpha_sweep, wcf_query_with};
use relcom::{fixtures, Community, DynamicNetwork, QueryParams, WcfIndex};

#[wasm_bindgen]
pub struct Explorer {
    net: DynamicNetwork,
    idx: WcfIndex,
}

fn community(net: &DynamicNetwork, c: Option<&Community>) -> Value {
    c.map_or(Value::Null, |c| {
        json!({
            "vertices": c.vertices.iter().map(|&v| net.label(v)).collect::<Vec<_>>(),
            "edges": c.edges.iter().map(|e| [net.label(e.u()), net.label(e.v())]).collect::<Vec<_>>(),
            "interval": [c.interval.start, c.interval.end],
            "size": c.size(),
            "duration": c.duration(),
            "score": c.score,
        })
    })
}

impl Explorer {
    fn wrap(net: DynamicNetwork) -> Self {
        let idx = WcfIndex::build(&net);
        Explorer { net, idx }
    }

    fn params(&self, q: &str, k: u32, theta: f64, start: usize, end: usize, alpha: f64) -> Result<QueryParams, String> {
        let q = self.net.resolve(q).map_err(|e| e.to_string())?;
        let p = QueryParams::new(q, k, theta, Window::new(start, end)).with_alpha(alpha);
        p.validate(&self.net).map_err(|e| e.to_string())?;
        Ok(p)
    }

    pub fn summary_json(&self) -> String {
        let k_max: Vec<u32> = (0..self.net.num_snapshots()).map(|t| self.idx.k_max(t)).collect();
        json!({
            "labels": self.net.labels(),
            "snapshots": self.net.num_snapshots(),
            "k_max": k_max,
        })
        .to_string()
    }

    pub fn snapshot_json(&self, t: usize) -> Result<String, String> {
        if t >= self.net.num_snapshots() {
            return Err(format!("no snapshot {t}"));
        }
        let g = self.net.snapshot(t);
        let cores = core_decompose(g);
        let edges: Vec<Value> = g
            .edges()
            .map(|(e, w)| json!({ "u": self.net.label(e.u()), "v": self.net.label(e.v()), "w": w }))
            .collect();
        Ok(json!({ "edges": edges, "core": cores.as_slice() }).to_string())
    }

    #[allow(clippy::too_many_arguments)]
    pub fn query_json(&self, q: &str, k: u32, theta: f64, start: usize, end: usize, alpha: f64, engine: &str) -> Result<String, String> {
        let p = self.params(q, k, theta, start, end, alpha)?;
        let (c, stats) = match engine {
            "eef" => eef_query_with(&self.net, &p, SearchOptions::default()),
            "wcf" => wcf_query_with(&self.net, &self.idx, &p, SearchOptions::default()),
            other => return Err(format!("unknown engine {other:?}")),
        }
        .map_err(|e| e.to_string())?;
        Ok(json!({ "community": community(&self.net, c.as_ref()), "stats": stats }).to_string())
    }

    pub fn sweep_json(&self, q: &str, k: u32, theta: f64, start: usize, end: usize, alphas: &[f64]) -> Result<String, String> {
        let p = self.params(q, k, theta, start, end, 1.0)?;
        let res = alpha_sweep(&self.net, &self.idx, &p, alphas).map_err(|e| e.to_string())?;
        let rows: Vec<Value> = res
            .iter()
            .map(|(a, c)| json!({ "alpha": a, "community": community(&self.net, c.as_ref()) }))
            .collect();
        Ok(Value::Array(rows).to_string())
    }

    pub fn tree_json(&self, k: u32, t: usize) -> Result<String, String> {
        if t >= self.net.num_snapshots() {
            return Err(format!("no snapshot {t}"));
        }
        let Some(f) = self.idx.forest(k, t) else {
            return Ok("[]".into());
        };
        let nodes: Vec<Value> = f
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let vs = match &n.payload {
                    NodePayload::Vertices(vs) => vs.iter().map(|&v| self.net.label(v)).collect::<Vec<_>>(),
                    NodePayload::Virtual(_) => Vec::new(),
                };
                json!({
                    "id": i,
                    "theta": self.idx.grid().value(n.theta),
                    "parent": n.parent,
                    "vertices": vs,
                })
            })
            .collect();
        Ok(Value::Array(nodes).to_string())
    }
}

#[wasm_bindgen]
impl Explorer {
    /// The ten-vertex, three-snapshot example network.
    #[wasm_bindgen(constructor)]
    pub fn new() -> Explorer {
        Explorer::wrap(fixtures::fig1())
    }

    pub fn random(seed: u32, vertices: usize, snapshots: usize) -> Result<Explorer, JsError> {
        if !(2..=60).contains(&vertices) || !(1..=12).contains(&snapshots) {
            return Err(JsError::new("need 2..=60 vertices and 1..=12 snapshots"));
        }
        let spec = RandomSpec {
            vertices,
            snapshots,
            density: (6.0 / vertices as f64).min(0.6),
            presence: 0.85,
        };
        Ok(Explorer::wrap(random_network(spec, seed as u64)))
    }

    pub fn summary(&self) -> String {
        self.summary_json()
    }

    pub fn snapshot_edges(&self, t: usize) -> Result<String, JsError> {
        self.snapshot_json(t).map_err(|e| JsError::new(&e))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn query(&self, q: &str, k: u32, theta: f64, start: usize, end: usize, alpha: f64, engine: &str) -> Result<String, JsError> {
        self.query_json(q, k, theta, start, end, alpha, engine).map_err(|e| JsError::new(&e))
    }

    pub fn alpha_sweep(&self, q: &str, k: u32, theta: f64, start: usize, end: usize, alphas: Vec<f64>) -> Result<String, JsError> {
        self.sweep_json(q, k, theta, start, end, &alphas).map_err(|e| JsError::new(&e))
    }

    pub fn tree(&self, k: u32, t: usize) -> Result<String, JsError> {
        self.tree_json(k, t).map_err(|e| JsError::new(&e))
    }
}

impl Default for Explorer {
    fn default() -> Self {
        Explorer::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_query() {
        let x = Explorer::new();
        let v: Value = serde_json::from_str(&x.query_json("v0", 3, 0.4, 0, 2, 1.0, "wcf").unwrap()).unwrap();
        assert_eq!(v["community"]["vertices"], json!(["v0", "v2", "v3", "v4"]));
        let e: Value = serde_json::from_str(&x.query_json("v0", 3, 0.4, 0, 2, 1.0, "eef").unwrap()).unwrap();
        assert_eq!(e["community"], v["community"]);
        assert!(x.query_json("v0", 3, 0.4, 0, 2, 1.0, "nope").is_err());
        assert!(x.query_json("zz", 3, 0.4, 0, 2, 1.0, "eef").is_err());
    }

    #[test]
    fn sweep_and_tree() {
        let x = Explorer::new();
        let s: Value = serde_json::from_str(&x.sweep_json("v0", 2, 0.3, 0, 2, &[0.0, 1.0, 3.0]).unwrap()).unwrap();
        assert_eq!(s.as_array().unwrap().len(), 3);
        let t: Value = serde_json::from_str(&x.tree_json(2, 0).unwrap()).unwrap();
        let total: usize = t.as_array().unwrap().iter().map(|n| n["vertices"].as_array().unwrap().len()).sum();
        assert_eq!(total, 10);
        assert_eq!(x.tree_json(9, 0).unwrap(), "[]");
        let g: Value = serde_json::from_str(&x.snapshot_json(2).unwrap()).unwrap();
        assert_eq!(g["edges"].as_array().unwrap().len(), 20);
    }
}
