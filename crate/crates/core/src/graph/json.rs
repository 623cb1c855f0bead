//! JSON graph documents.
//!
//! Schema (0-based vertex indices):
//!
//! ```json
//! {"n": 3, "edges": [[0, 1], [1, 2]], "colors": [[0.5], [1.0], [0.5]]}
//! ```
//!
//! `colors` is either empty (uncolored) or holds one row per vertex. Colors
//! are written with the shortest representation that parses back to the same
//! `f64`, so the round trip is lossless. Corpora use one document per line.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum GraphJsonError {
    #[error("line {line}: {source}")]
    Syntax {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: GraphError,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    #[serde(default)]
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    colors: Vec<Vec<f64>>,
}

fn parse_doc(text: &str, line: usize) -> Result<Graph, GraphJsonError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|source| GraphJsonError::Syntax { line, source })?;
    let edges: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
    Graph::new(doc.n, &edges, &doc.colors)
        .map_err(|source| GraphJsonError::Invalid { line, source })
}

pub fn parse_graph_json(text: &str) -> Result<Graph, GraphJsonError> {
    parse_doc(text, 1)
}

/// Parses JSON-lines input, skipping blank lines. Line numbers are 1-based.
pub fn parse_graph_json_lines(text: &str) -> Result<Vec<Graph>, GraphJsonError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_doc(l, i + 1))
        .collect()
}

pub fn write_graph_json(g: &Graph) -> String {
    let doc = GraphDoc {
        n: g.n(),
        edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        colors: g.color_rows(),
    };
    serde_json::to_string(&doc).expect("graph document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_gnp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_single_edge() {
        let g = parse_graph_json(r#"{"n":2,"edges":[[0,1]],"colors":[]}"#).unwrap();
        assert_eq!(g, Graph::uncolored(2, &[(0, 1)]).unwrap());
        assert_eq!(g.color_width(), 0);
    }

    #[test]
    fn rejects_invalid_graphs() {
        let cases = [
            r#"{"n":2,"edges":[[0,0]]}"#,
            r#"{"n":2,"edges":[[0,1],[1,0]]}"#,
            r#"{"n":2,"edges":[[0,2]]}"#,
            r#"{"n":2,"colors":[[1.0],[1.0,2.0]]}"#,
        ];
        for c in cases {
            assert!(
                matches!(parse_graph_json(c), Err(GraphJsonError::Invalid { .. })),
                "{c}"
            );
        }
        assert!(matches!(
            parse_graph_json(r#"{"n":2,"edges":[[0]]}"#),
            Err(GraphJsonError::Syntax { .. })
        ));
    }

    #[test]
    fn round_trip_is_lossless() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for seed in 0..10 {
            let g = random_gnp(8, 0.5, seed).unwrap();
            assert_eq!(parse_graph_json(&write_graph_json(&g)).unwrap(), g);
            let colors: Vec<Vec<f64>> = (0..8)
                .map(|_| vec![rng.random::<f64>() * 1e3 - 500.0, rng.random::<f64>() / 3.0])
                .collect();
            let colored = g.with_colors(&colors).unwrap();
            let back = parse_graph_json(&write_graph_json(&colored)).unwrap();
            for v in 0..8 {
                for (a, b) in back.color(v).iter().zip(colored.color(v)) {
                    assert_eq!(a.to_bits(), b.to_bits());
                }
            }
            assert_eq!(back, colored);
        }
    }

    #[test]
    fn json_lines_report_line_numbers() {
        let text = "{\"n\":1}\n\n{\"n\":2,\"edges\":[[0,1]]}\n{\"n\":1,\"edges\":[[0,0]]}\n";
        match parse_graph_json_lines(text) {
            Err(GraphJsonError::Invalid { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let ok = parse_graph_json_lines("{\"n\":1}\n{\"n\":3}\n").unwrap();
        assert_eq!(ok.len(), 2);
    }
}
