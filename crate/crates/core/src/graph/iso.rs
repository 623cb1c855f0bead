//! Exact isomorphism testing by backtracking, and exhaustive enumeration of
//! small graphs up to isomorphism.
//!
//! This is deliberately independent of the refinement engine so it can act as
//! ground truth when building comparison corpora.

use std::collections::HashMap;

use super::Graph;

/// Cheap isomorphism invariant: per-vertex (color bits, degree, sorted
/// neighbor degrees), sorted.
fn vertex_profiles(g: &Graph) -> Vec<(Vec<u64>, usize, Vec<usize>)> {
    (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).map(|u| g.degree(u)).collect();
            nd.sort_unstable();
            (
                g.color(v).iter().map(|x| x.to_bits()).collect(),
                g.degree(v),
                nd,
            )
        })
        .collect()
}

fn invariant(g: &Graph) -> (usize, usize, Vec<(Vec<u64>, usize, Vec<usize>)>) {
    let mut p = vertex_profiles(g);
    p.sort();
    (g.n(), g.edge_count(), p)
}

/// True iff some bijection preserves edges and vertex colors exactly.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.color_width() != b.color_width() || a.edge_count() != b.edge_count() {
        return false;
    }
    let pa = vertex_profiles(a);
    let pb = vertex_profiles(b);
    {
        let (mut sa, mut sb) = (pa.clone(), pb.clone());
        sa.sort();
        sb.sort();
        if sa != sb {
            return false;
        }
    }
    let n = a.n();
    // visit vertices of `a` in BFS order so each one is constrained by
    // already-mapped neighbors
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        order.push(root);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for u in a.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    order.push(u);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(a, b, &pa, &pb, &order, 0, &mut map, &mut used)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Graph,
    b: &Graph,
    pa: &[(Vec<u64>, usize, Vec<usize>)],
    pb: &[(Vec<u64>, usize, Vec<usize>)],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..b.n() {
        if used[w] || pa[v] != pb[w] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| a.has_edge(u, v) == b.has_edge(map[u], w));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(a, b, pa, pb, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Groups graphs into isomorphism classes, keeping the first representative
/// of each class in input order.
#[derive(Debug, Default)]
pub struct IsoDedup {
    buckets: HashMap<(usize, usize, Vec<(Vec<u64>, usize, Vec<usize>)>), Vec<usize>>,
    reps: Vec<Graph>,
}

impl IsoDedup {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `g` unless an isomorphic graph is already present; returns
    /// whether it was new.
    pub fn insert(&mut self, g: Graph) -> bool {
        let bucket = self.buckets.entry(invariant(&g)).or_default();
        if bucket.iter().any(|&i| are_isomorphic(&self.reps[i], &g)) {
            return false;
        }
        bucket.push(self.reps.len());
        self.reps.push(g);
        true
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn into_graphs(self) -> Vec<Graph> {
        self.reps
    }
}

/// All uncolored graphs on `n` vertices up to isomorphism, in the order their
/// first labeled representative appears when edge masks are counted upward.
///
/// Exhaustive over `2^(n(n-1)/2)` labeled graphs; intended for `n ≤ 6`.
pub fn enumerate_nonisomorphic(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    assert!(pairs.len() < 32, "exhaustive enumeration limited to n <= 8");
    let mut dedup = IsoDedup::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        dedup.insert(Graph::uncolored(n, &edges).expect("valid mask graph"));
    }
    dedup.into_graphs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, disjoint_union, random_gnp, rook_4x4, shrikhande};
    use crate::perm::Permutation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn permuted_graphs_are_isomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for seed in 0..30 {
            let g = random_gnp(9, 0.4, seed).unwrap();
            let h = g.permute(&Permutation::random(9, &mut rng)).unwrap();
            assert!(are_isomorphic(&g, &h));
        }
    }

    #[test]
    fn classic_non_isomorphic_pairs() {
        let c6 = cycle(6).unwrap();
        let two_triangles = disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap()).unwrap();
        assert!(!are_isomorphic(&c6, &two_triangles));
        assert!(!are_isomorphic(&rook_4x4(), &shrikhande()));
        assert!(are_isomorphic(&shrikhande(), &shrikhande()));
    }

    #[test]
    fn colors_must_match() {
        let a = Graph::new(2, &[(0, 1)], &[vec![1.0], vec![2.0]]).unwrap();
        let b = Graph::new(2, &[(0, 1)], &[vec![2.0], vec![1.0]]).unwrap();
        let c = Graph::new(2, &[(0, 1)], &[vec![2.0], vec![2.0]]).unwrap();
        assert!(are_isomorphic(&a, &b));
        assert!(!are_isomorphic(&a, &c));
    }

    // Known counts of unlabeled graphs on n = 1..6 vertices.
    #[test]
    fn enumeration_matches_known_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_nonisomorphic(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }
}
