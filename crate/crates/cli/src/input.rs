use std::path::Path;

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::Serialize;
use wlnet::graph::{parse_graph6, parse_graph_json};
use wlnet::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    /// `json` for `.json` files, graph6 otherwise.
    Auto,
    Graph6,
    Json,
}

/// Reads one graph. A graph6 file holds the graph on its first non-empty
/// line, optionally after a `>>graph6<<` header.
pub fn read_graph(path: &Path, format: GraphFormat) -> anyhow::Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let format = match format {
        GraphFormat::Auto if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => GraphFormat::Json,
        GraphFormat::Auto => GraphFormat::Graph6,
        f => f,
    };
    match format {
        GraphFormat::Json => parse_graph_json(&text).with_context(|| format!("{}: invalid graph JSON", path.display())),
        _ => {
            let Some(line) = text.lines().map(str::trim).find(|l| !l.is_empty()) else {
                bail!("{}: empty file", path.display());
            };
            let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
            parse_graph6(line).with_context(|| format!("{}: invalid graph6", path.display()))
        }
    }
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_file(path: &Path, text: impl AsRef<[u8]>) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
