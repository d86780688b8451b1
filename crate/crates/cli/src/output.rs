use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};

use relcom::{Community, DynamicNetwork};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// What a subcommand produced, in both renderings.
pub struct Report {
    pub command: &'static str,
    pub body: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &'static str, body: Value) -> Self {
        Report {
            command,
            body,
            header: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.header = header;
        self.rows = rows;
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": self.command });
                if let (Value::Object(dst), Value::Object(src)) = (&mut doc, &self.body) {
                    dst.extend(src.clone());
                }
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut s = String::new();
                s.push_str(&self.header.join("\t"));
                s.push('\n');
                for r in &self.rows {
                    s.push_str(&r.join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&Path>) -> io::Result<()> {
        let text = self.render(format);
        match out {
            Some(p) => {
                let mut w = BufWriter::new(File::create(p)?);
                w.write_all(text.as_bytes())?;
                w.flush()
            }
            None => io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

pub fn community_json(net: &DynamicNetwork, c: Option<&Community>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => json!({
            "vertices": c.vertices.iter().map(|&v| net.label(v)).collect::<Vec<_>>(),
            "interval": [c.interval.start, c.interval.end],
            "size": c.size(),
            "duration": c.duration(),
            "score": c.score,
            "edges": c.edges.len(),
        }),
    }
}

pub const COMMUNITY_HEADER: [&str; 6] = ["vertices", "start", "end", "size", "duration", "score"];

pub fn community_row(net: &DynamicNetwork, c: Option<&Community>) -> Vec<String> {
    match c {
        None => vec![String::new(), "-".into(), "-".into(), "0".into(), "0".into(), "0".into()],
        Some(c) => vec![
            c.vertices.iter().map(|&v| net.label(v)).collect::<Vec<_>>().join(","),
            c.interval.start.to_string(),
            c.interval.end.to_string(),
            c.size().to_string(),
            c.duration().to_string(),
            c.score.to_string(),
        ],
    }
}
