//! Colored simple undirected graphs.
//!
//! A [`Graph`] carries an `n × n` boolean adjacency matrix (symmetric, zero
//! diagonal) and an `n × e` matrix of real vertex features. `e = 0` means the
//! graph is uncolored, which every algorithm treats as a uniform color.

mod encode;
pub mod generators;
pub mod graph6;
pub mod iso;
pub mod json;

pub use encode::{fwl_initial_colors, graph_to_fwl_tensor, graph_to_tensor};
pub use generators::{
    complete, cycle, disjoint_union, empty, random_gnp, rook_4x4, shrikhande, star,
};
pub use graph6::{parse_graph6, parse_graph6_bytes, write_graph6, Graph6Error};
pub use json::{parse_graph_json, parse_graph_json_lines, write_graph_json, GraphJsonError};

use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("adjacency is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("adjacency has {found} entries, expected {expected}")]
    AdjacencyLength { expected: usize, found: usize },
    #[error("expected {expected} color rows, found {found}")]
    ColorRows { expected: usize, found: usize },
    #[error("color row {row} has width {found}, expected {expected}")]
    RaggedColors {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite color at vertex {0}")]
    NonFiniteColor(usize),
    #[error("cycle needs at least 3 vertices, got {0}")]
    CycleTooSmall(usize),
    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("permutation acts on {found} vertices, graph has {expected}")]
    PermutationSize { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
    color_width: usize,
    colors: Vec<f64>,
}

fn flatten_colors(n: usize, colors: &[Vec<f64>]) -> Result<(usize, Vec<f64>), GraphError> {
    if colors.is_empty() {
        return Ok((0, Vec::new()));
    }
    if colors.len() != n {
        return Err(GraphError::ColorRows {
            expected: n,
            found: colors.len(),
        });
    }
    let width = colors[0].len();
    let mut flat = Vec::with_capacity(n * width);
    for (row, c) in colors.iter().enumerate() {
        if c.len() != width {
            return Err(GraphError::RaggedColors {
                row,
                expected: width,
                found: c.len(),
            });
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(GraphError::NonFiniteColor(row));
        }
        flat.extend_from_slice(c);
    }
    Ok((width, flat))
}

impl Graph {
    /// Builds a graph from an edge list. An empty `colors` slice yields an
    /// uncolored graph; otherwise it must hold one row per vertex.
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        colors: &[Vec<f64>],
    ) -> Result<Self, GraphError> {
        let mut adjacency = vec![false; n * n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if adjacency[a * n + b] {
                return Err(GraphError::DuplicateEdge(a.min(b), a.max(b)));
            }
            adjacency[a * n + b] = true;
            adjacency[b * n + a] = true;
        }
        let (color_width, colors) = flatten_colors(n, colors)?;
        Ok(Self {
            n,
            adjacency,
            color_width,
            colors,
        })
    }

    pub fn uncolored(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(n, edges, &[])
    }

    /// Builds a graph from a row-major boolean adjacency matrix.
    pub fn from_adjacency(
        n: usize,
        adjacency: Vec<bool>,
        colors: &[Vec<f64>],
    ) -> Result<Self, GraphError> {
        if adjacency.len() != n * n {
            return Err(GraphError::AdjacencyLength {
                expected: n * n,
                found: adjacency.len(),
            });
        }
        for i in 0..n {
            if adjacency[i * n + i] {
                return Err(GraphError::SelfLoop(i));
            }
            for j in i + 1..n {
                if adjacency[i * n + j] != adjacency[j * n + i] {
                    return Err(GraphError::Asymmetric(i, j));
                }
            }
        }
        let (color_width, colors) = flatten_colors(n, colors)?;
        Ok(Self {
            n,
            adjacency,
            color_width,
            colors,
        })
    }

    /// Replaces the vertex colors.
    pub fn with_colors(&self, colors: &[Vec<f64>]) -> Result<Self, GraphError> {
        let (color_width, colors) = flatten_colors(self.n, colors)?;
        Ok(Self {
            n: self.n,
            adjacency: self.adjacency.clone(),
            color_width,
            colors,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Width `e` of the vertex color vectors.
    #[inline]
    pub fn color_width(&self) -> usize {
        self.color_width
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a * self.n + b]
    }

    pub fn adjacency(&self) -> &[bool] {
        &self.adjacency
    }

    /// Color vector of vertex `v`; empty when uncolored.
    #[inline]
    pub fn color(&self, v: usize) -> &[f64] {
        &self.colors[v * self.color_width..(v + 1) * self.color_width]
    }

    pub fn color_rows(&self) -> Vec<Vec<f64>> {
        if self.color_width == 0 {
            return Vec::new();
        }
        (0..self.n).map(|v| self.color(v).to_vec()).collect()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adjacency[v * self.n..(v + 1) * self.n];
        row.iter()
            .enumerate()
            .filter_map(|(u, &adj)| adj.then_some(u))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// Edges `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count() / 2
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `g(v)`.
    pub fn permute(&self, g: &Permutation) -> Result<Self, GraphError> {
        if g.len() != self.n {
            return Err(GraphError::PermutationSize {
                expected: self.n,
                found: g.len(),
            });
        }
        let n = self.n;
        let mut adjacency = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                adjacency[g.apply(i) * n + g.apply(j)] = self.adjacency[i * n + j];
            }
        }
        let e = self.color_width;
        let mut colors = vec![0.0; n * e];
        for v in 0..n {
            let w = g.apply(v);
            colors[w * e..(w + 1) * e].copy_from_slice(self.color(v));
        }
        Ok(Self {
            n,
            adjacency,
            color_width: e,
            colors,
        })
    }

    /// `tr(A³)`, i.e. six times the number of triangles, from the integer
    /// cube of the adjacency matrix.
    pub fn trace_of_adjacency_cube(&self) -> u64 {
        let a: Vec<u64> = self.adjacency.iter().map(|&b| b as u64).collect();
        let a2 = crate::tensor::matmul(&a, &a, self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|k| a2[i * self.n + k] * a[k * self.n + i])
                    .sum::<u64>()
            })
            .sum()
    }
}

/// `g·G` as a free function.
pub fn permute_graph(g: &Graph, perm: &Permutation) -> Result<Graph, GraphError> {
    g.permute(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_malformed_inputs() {
        assert_eq!(Graph::uncolored(2, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            Graph::uncolored(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(
            Graph::uncolored(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(
            Graph::new(2, &[], &[vec![1.0], vec![1.0, 2.0]]),
            Err(GraphError::RaggedColors {
                row: 1,
                expected: 1,
                found: 2
            })
        );
        assert!(matches!(
            Graph::from_adjacency(2, vec![false, true, false, false], &[]),
            Err(GraphError::Asymmetric(0, 1))
        ));
    }

    #[test]
    fn permute_identity_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..20 {
            let g = random_gnp(7, 0.4, seed).unwrap();
            let colors: Vec<Vec<f64>> = (0..7).map(|v| vec![v as f64 * 0.5]).collect();
            let g = g.with_colors(&colors).unwrap();
            assert_eq!(g.permute(&Permutation::identity(7)).unwrap(), g);
            let p = Permutation::random(7, &mut rng);
            let moved = g.permute(&p).unwrap();
            assert_eq!(moved.permute(&p.inverse()).unwrap(), g);
            for (a, b) in g.edges() {
                assert!(moved.has_edge(p.apply(a), p.apply(b)));
            }
            assert_eq!(moved.color(p.apply(3)), g.color(3));
        }
    }

    #[test]
    fn triangle_trace_counts() {
        assert_eq!(cycle(6).unwrap().trace_of_adjacency_cube(), 0);
        let union = disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap()).unwrap();
        assert_eq!(union.trace_of_adjacency_cube(), 12);
        assert_eq!(complete(4).trace_of_adjacency_cube(), 24);
        assert_eq!(empty(5).trace_of_adjacency_cube(), 0);
    }
}
