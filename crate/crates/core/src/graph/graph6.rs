//! graph6 codec for graphs with at most 62 vertices.
//!
//! Format: one header byte `63 + n`, followed by the upper triangle of the
//! adjacency matrix in column order (`x(0,1), x(0,2), x(1,2), x(0,3), …`),
//! packed big-endian into 6-bit groups, zero padded, each group offset by 63.

use thiserror::Error;

use super::Graph;

/// Largest vertex count representable with the single-byte header.
pub const MAX_VERTICES: usize = 62;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty input")]
    Empty,
    #[error("byte {byte} at offset {offset} is outside the graph6 alphabet")]
    OutOfRange { offset: usize, byte: u8 },
    #[error("extended size header at offset {offset} is not supported")]
    UnsupportedSize { offset: usize },
    #[error("truncated bit stream: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("unexpected trailing byte at offset {offset}")]
    Trailing { offset: usize },
    #[error("graph has {0} vertices, graph6 writer supports at most 62")]
    TooLarge(usize),
}

impl Graph6Error {
    /// Byte offset the error refers to, when it has one.
    pub fn offset(&self) -> Option<usize> {
        match *self {
            Self::OutOfRange { offset, .. }
            | Self::UnsupportedSize { offset }
            | Self::Trailing { offset } => Some(offset),
            Self::Truncated { found, .. } => Some(found),
            Self::Empty => Some(0),
            Self::TooLarge(_) => None,
        }
    }
}

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Parses one graph6 record. Surrounding ASCII whitespace is ignored.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    parse_graph6_bytes(text.as_bytes())
}

/// Byte-level variant of [`parse_graph6`].
pub fn parse_graph6_bytes(raw: &[u8]) -> Result<Graph, Graph6Error> {
    let bytes = raw.trim_ascii();
    let lead = raw.len() - raw.trim_ascii_start().len();
    let header = *bytes.first().ok_or(Graph6Error::Empty)?;
    if !(63..=126).contains(&header) {
        return Err(Graph6Error::OutOfRange {
            offset: lead,
            byte: header,
        });
    }
    if header == 126 {
        return Err(Graph6Error::UnsupportedSize { offset: lead });
    }
    let n = (header - 63) as usize;
    let expected = 1 + body_len(n);
    for (i, &b) in bytes.iter().enumerate().skip(1) {
        if i >= expected {
            return Err(Graph6Error::Trailing { offset: lead + i });
        }
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::OutOfRange {
                offset: lead + i,
                byte: b,
            });
        }
    }
    if bytes.len() < expected {
        return Err(Graph6Error::Truncated {
            expected,
            found: bytes.len(),
        });
    }

    let body = &bytes[1..];
    let mut adjacency = vec![false; n * n];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let group = body[bit / 6] - 63;
            if group >> (5 - bit % 6) & 1 == 1 {
                adjacency[i * n + j] = true;
                adjacency[j * n + i] = true;
            }
            bit += 1;
        }
    }
    Ok(Graph::from_adjacency(n, adjacency, &[]).expect("graph6 decodes to a simple graph"))
}

/// Encodes the graph structure; vertex colors are not represented.
pub fn write_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.n();
    if n > MAX_VERTICES {
        return Err(Graph6Error::TooLarge(n));
    }
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(63 + n as u8);
    let mut group = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            group = group << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, disjoint_union, random_gnp};

    // Reference strings produced by an independent graph6 implementation.
    #[test]
    fn known_encodings() {
        assert_eq!(write_graph6(&cycle(6).unwrap()).unwrap(), "EhEG");
        let union = disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap()).unwrap();
        assert_eq!(write_graph6(&union).unwrap(), "EwCW");
        assert_eq!(
            write_graph6(&Graph::uncolored(1, &[]).unwrap()).unwrap(),
            "@"
        );
        assert_eq!(write_graph6(&complete(4)).unwrap(), "C~");
        let g = Graph::uncolored(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(write_graph6(&g).unwrap(), "DQc");
    }

    #[test]
    fn petersen_round_trip() {
        let g = parse_graph6("IheA@GUAo\n").unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert_eq!(write_graph6(&g).unwrap(), "IheA@GUAo");
    }

    #[test]
    fn decode_c6() {
        let g = parse_graph6("EhEG").unwrap();
        assert_eq!(g, cycle(6).unwrap());
        assert_eq!(parse_graph6("?").unwrap().n(), 0);
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse_graph6_bytes(&[b'E', b'h', 255, b'G']).unwrap_err();
        assert_eq!(
            err,
            Graph6Error::OutOfRange {
                offset: 2,
                byte: 255
            }
        );
        assert_eq!(err.offset(), Some(2));
        assert_eq!(
            parse_graph6("Eh").unwrap_err(),
            Graph6Error::Truncated {
                expected: 4,
                found: 2
            }
        );
        assert_eq!(
            parse_graph6("EhEGG").unwrap_err(),
            Graph6Error::Trailing { offset: 4 }
        );
        assert_eq!(parse_graph6("~").unwrap_err().offset(), Some(0));
        assert_eq!(parse_graph6("  ").unwrap_err(), Graph6Error::Empty);
        assert!(matches!(
            parse_graph6(" E hEG").unwrap_err(),
            Graph6Error::OutOfRange {
                offset: 2,
                byte: b' '
            }
        ));
    }

    #[test]
    fn too_large_for_writer() {
        let g = Graph::uncolored(63, &[]).unwrap();
        assert_eq!(write_graph6(&g), Err(Graph6Error::TooLarge(63)));
    }

    #[test]
    fn random_round_trips() {
        for n in 0..=32 {
            for seed in 0..4 {
                let g = random_gnp(n, 0.5, seed).unwrap();
                let s = write_graph6(&g).unwrap();
                assert_eq!(parse_graph6(&s).unwrap(), g);
            }
        }
    }
}
