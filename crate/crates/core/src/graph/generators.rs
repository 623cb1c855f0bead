//! Deterministic graph families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

/// Cycle `C_m` on vertices `0..m`, edges `(i, i+1 mod m)`.
pub fn cycle(m: usize) -> Result<Graph, GraphError> {
    if m < 3 {
        return Err(GraphError::CycleTooSmall(m));
    }
    let edges: Vec<_> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    Graph::uncolored(m, &edges)
}

pub fn complete(m: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            edges.push((i, j));
        }
    }
    Graph::uncolored(m, &edges).expect("complete graph is simple")
}

pub fn empty(m: usize) -> Graph {
    Graph::uncolored(m, &[]).expect("edgeless graph is simple")
}

/// Star `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::uncolored(leaves + 1, &edges).expect("star is simple")
}

/// `G ⊔ H`: vertices of `h` are shifted by `g.n()`. Both operands must have
/// the same color width (or both be uncolored).
pub fn disjoint_union(g: &Graph, h: &Graph) -> Result<Graph, GraphError> {
    let off = g.n();
    let mut edges = g.edges();
    edges.extend(h.edges().into_iter().map(|(a, b)| (a + off, b + off)));
    let mut colors = g.color_rows();
    colors.extend(h.color_rows());
    if (g.color_width() == 0) != (h.color_width() == 0) {
        return Err(GraphError::ColorRows {
            expected: g.n() + h.n(),
            found: colors.len(),
        });
    }
    Graph::new(g.n() + h.n(), &edges, &colors)
}

/// Erdős–Rényi `G(n, p)`.
///
/// The generator is ChaCha8 seeded with `seed` via `seed_from_u64`; pairs
/// `(i, j)`, `i < j`, are visited in row-major order and each draws one
/// uniform `f64` in `[0, 1)`, the edge being present when the draw is `< p`.
/// ChaCha8 output is platform independent, so corpora are reproducible.
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::Probability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::uncolored(n, &edges)
}

/// 4×4 rook's graph: cell `(r, c)` is vertex `4r + c`; cells sharing a row or
/// a column are adjacent.
pub fn rook_4x4() -> Graph {
    let mut edges = Vec::new();
    for a in 0..16 {
        for b in a + 1..16 {
            if a / 4 == b / 4 || a % 4 == b % 4 {
                edges.push((a, b));
            }
        }
    }
    Graph::uncolored(16, &edges).expect("rook graph is simple")
}

/// Shrikhande graph: Cayley graph on `Z4 × Z4` with connection set
/// `{±(1,0), ±(0,1), ±(1,1)}`; `(x, y)` is vertex `4x + y`.
pub fn shrikhande() -> Graph {
    let steps = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
    let mut edges = Vec::new();
    for a in 0..16usize {
        let (x, y) = (a / 4, a % 4);
        for (dx, dy) in steps {
            let b = (x + dx) % 4 * 4 + (y + dy) % 4;
            if a < b {
                edges.push((a, b));
            }
        }
    }
    Graph::uncolored(16, &edges).expect("Shrikhande graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force strongly-regular parameters `(v, k, λ, μ)`, if any.
    fn srg_parameters(g: &Graph) -> Option<(usize, usize, usize, usize)> {
        let n = g.n();
        let k = g.degree(0);
        if (0..n).any(|v| g.degree(v) != k) {
            return None;
        }
        let (mut lambda, mut mu) = (None, None);
        for a in 0..n {
            for b in a + 1..n {
                let common = (0..n)
                    .filter(|&w| g.has_edge(a, w) && g.has_edge(b, w))
                    .count();
                let slot = if g.has_edge(a, b) {
                    &mut lambda
                } else {
                    &mut mu
                };
                match *slot {
                    None => *slot = Some(common),
                    Some(x) if x != common => return None,
                    _ => {}
                }
            }
        }
        Some((n, k, lambda?, mu?))
    }

    #[test]
    fn cycle_requires_three_vertices() {
        assert_eq!(cycle(2), Err(GraphError::CycleTooSmall(2)));
        let c6 = cycle(6).unwrap();
        assert!((0..6).all(|v| c6.degree(v) == 2));
        assert_eq!(c6.edge_count(), 6);
    }

    #[test]
    fn union_shifts_second_operand() {
        let u = disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap()).unwrap();
        assert_eq!(u.n(), 6);
        assert!(u.has_edge(3, 5) && !u.has_edge(2, 3));
        let colored = Graph::new(1, &[], &[vec![1.0]]).unwrap();
        assert!(disjoint_union(&colored, &empty(1)).is_err());
        let both = disjoint_union(&colored, &colored).unwrap();
        assert_eq!(both.color(1), &[1.0]);
    }

    #[test]
    fn strongly_regular_pair() {
        assert_eq!(srg_parameters(&rook_4x4()), Some((16, 6, 2, 2)));
        assert_eq!(srg_parameters(&shrikhande()), Some((16, 6, 2, 2)));
        assert_eq!(srg_parameters(&cycle(6).unwrap()), None);
        assert_ne!(rook_4x4(), shrikhande());
    }

    #[test]
    fn gnp_is_reproducible() {
        assert_eq!(
            random_gnp(10, 0.3, 42).unwrap(),
            random_gnp(10, 0.3, 42).unwrap()
        );
        assert_ne!(
            random_gnp(10, 0.5, 1).unwrap(),
            random_gnp(10, 0.5, 2).unwrap()
        );
        assert_eq!(random_gnp(6, 0.0, 3).unwrap().edge_count(), 0);
        assert_eq!(random_gnp(6, 1.0, 3).unwrap().edge_count(), 15);
        assert!(random_gnp(3, 1.5, 0).is_err());
    }

    #[test]
    fn star_degrees() {
        let s = star(3);
        assert_eq!(s.degree(0), 3);
        assert!((1..4).all(|v| s.degree(v) == 1));
    }
}
