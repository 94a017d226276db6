use std::path::Path;

use sha2::{Digest, Sha256};
use specwalk_core::graph::{load_graph, GraphFormat};
use specwalk_core::Graph;

use crate::report::{CliError, InputInfo};

/// A graph together with where it came from.
pub struct LoadedGraph {
    pub graph: Graph,
    pub info: InputInfo,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn format_for(path: &Path) -> GraphFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("g6") | Some("graph6") => GraphFormat::Graph6,
        Some("edgelist") | Some("el") | Some("txt") => GraphFormat::Edgelist,
        _ => GraphFormat::Auto,
    }
}

/// A GRAPH argument is a file if it exists or contains a path separator,
/// and an inline graph6 string otherwise.
pub fn load(arg: &str) -> Result<LoadedGraph, CliError> {
    let path = Path::new(arg);
    if path.exists() {
        let bytes = std::fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{arg} is not UTF-8 text")))?;
        let graph = load_graph(&text, format_for(path)).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
        return Ok(LoadedGraph {
            graph,
            info: InputInfo {
                source: arg.to_string(),
                kind: "file",
                sha256: digest(&bytes),
            },
        });
    }
    if arg.contains(std::path::MAIN_SEPARATOR) || arg.contains('/') {
        return Err(CliError::Usage(format!("no such file: {arg}")));
    }
    let graph = load_graph(arg, GraphFormat::Graph6).map_err(|e| CliError::Usage(format!("inline graph6 {arg:?}: {e}")))?;
    Ok(LoadedGraph {
        graph,
        info: InputInfo {
            source: arg.to_string(),
            kind: "graph6",
            sha256: digest(arg.as_bytes()),
        },
    })
}

/// One graph6 string per non-empty line.
pub fn load_corpus(path: &str) -> Result<(Vec<(usize, String, Graph)>, InputInfo), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{path} is not UTF-8 text")))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = load_graph(line, GraphFormat::Graph6).map_err(|e| CliError::Usage(format!("{path}:{}: {e}", i + 1)))?;
        out.push((i + 1, line.to_string(), g));
    }
    Ok((
        out,
        InputInfo {
            source: path.to_string(),
            kind: "file",
            sha256: digest(&bytes),
        },
    ))
}
