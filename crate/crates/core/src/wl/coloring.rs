use std::collections::HashMap;

use rayon::prelude::*;

use super::interner::{ColorId, ColorInterner, Signature};
use super::{tags, WlError};
use crate::graph::Graph;
use crate::perm::Permutation;

/// Most tuples a coloring may hold.
pub const MAX_TUPLES: usize = 1 << 24;

/// Number of `k`-tuples over `n` vertices, rejecting sizes above [`MAX_TUPLES`].
pub fn tuple_count(n: usize, k: usize) -> Result<usize, WlError> {
    u32::try_from(k)
        .ok()
        .and_then(|k| n.checked_pow(k))
        .filter(|&c| c <= MAX_TUPLES)
        .ok_or(WlError::TooLarge { n, k })
}

/// Colors of all `k`-tuples of vertices, indexed row-major over `[n]^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleColoring {
    k: usize,
    n: usize,
    colors: Vec<ColorId>,
}

impl TupleColoring {
    pub fn new(k: usize, n: usize, colors: Vec<ColorId>) -> Result<Self, WlError> {
        let expected = tuple_count(n, k)?;
        if colors.len() != expected {
            return Err(WlError::ColoringLength {
                expected,
                found: colors.len(),
            });
        }
        Ok(Self { k, n, colors })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color_of(&self, tuple: &[usize]) -> ColorId {
        self.colors[encode_index(tuple, self.n)]
    }

    /// Sorted `(color, count)` pairs.
    pub fn histogram(&self) -> Vec<(ColorId, usize)> {
        let mut counts: HashMap<ColorId, usize> = HashMap::new();
        for &c in &self.colors {
            *counts.entry(c).or_default() += 1;
        }
        let mut h: Vec<_> = counts.into_iter().collect();
        h.sort_unstable();
        h
    }

    pub fn num_classes(&self) -> usize {
        let mut ids = self.colors.clone();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    /// `(g·C)[i] = C[g⁻¹(i)]`.
    pub fn permute(&self, g: &Permutation) -> Result<Self, WlError> {
        if g.len() != self.n {
            return Err(WlError::PermutationSize {
                expected: self.n,
                found: g.len(),
            });
        }
        let mut out = vec![ColorId(0); self.colors.len()];
        let mut tuple = vec![0; self.k];
        for (idx, &c) in self.colors.iter().enumerate() {
            decode_index(idx, self.n, &mut tuple);
            let moved: Vec<usize> = tuple.iter().map(|&v| g.apply(v)).collect();
            out[encode_index(&moved, self.n)] = c;
        }
        Ok(Self {
            k: self.k,
            n: self.n,
            colors: out,
        })
    }

    /// True when both colorings induce the same partition of tuples.
    pub fn same_partition(&self, other: &Self) -> bool {
        self.refines(other) && other.refines(self)
    }

    /// True when every color class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        if self.colors.len() != other.colors.len() {
            return false;
        }
        let mut map: HashMap<ColorId, ColorId> = HashMap::new();
        self.colors
            .iter()
            .zip(&other.colors)
            .all(|(&a, &b)| *map.entry(a).or_insert(b) == b)
    }
}

/// Row-major index of a multi-index.
pub fn encode_index(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &v| acc * n + v)
}

/// Inverse of [`encode_index`], written into `out` (length `k`).
pub fn decode_index(mut idx: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
}

fn check_tuple(tuple: &[usize], n: usize) -> Result<(), WlError> {
    match tuple.iter().find(|&&v| v >= n) {
        Some(&v) => Err(WlError::VertexOutOfRange { vertex: v, n }),
        None => Ok(()),
    }
}

/// The `j`-th WL neighborhood (0-based position): the `n` tuples obtained by
/// replacing entry `j` with every vertex, in vertex order.
pub fn neighborhood_wl(tuple: &[usize], j: usize, n: usize) -> Result<Vec<Vec<usize>>, WlError> {
    check_tuple(tuple, n)?;
    if j >= tuple.len() {
        return Err(WlError::PositionOutOfRange {
            position: j,
            k: tuple.len(),
        });
    }
    Ok((0..n)
        .map(|v| {
            let mut t = tuple.to_vec();
            t[j] = v;
            t
        })
        .collect())
}

/// The FWL neighborhood for vertex `w`: the ordered `k` tuples obtained by
/// writing `w` into position `0`, `1`, …, `k-1` in turn.
pub fn neighborhood_fwl(tuple: &[usize], w: usize, n: usize) -> Result<Vec<Vec<usize>>, WlError> {
    check_tuple(tuple, n)?;
    if w >= n {
        return Err(WlError::VertexOutOfRange { vertex: w, n });
    }
    Ok((0..tuple.len())
        .map(|q| {
            let mut t = tuple.to_vec();
            t[q] = w;
            t
        })
        .collect())
}

/// Isomorphism-type signature of a tuple: equality pattern, vertex colors and
/// ordered adjacency pattern.
fn isomorphism_type(g: &Graph, tuple: &[usize]) -> Signature {
    let k = tuple.len();
    let e = g.color_width();
    let mut sig = Vec::with_capacity(3 + 2 * k * k + 2 * k * e);
    sig.extend([tags::INITIAL, k as u32, e as u32]);
    for &a in tuple {
        for &b in tuple {
            sig.push((a == b) as u32);
        }
    }
    for &v in tuple {
        for x in g.color(v) {
            let bits = x.to_bits();
            sig.push((bits >> 32) as u32);
            sig.push(bits as u32);
        }
    }
    for &a in tuple {
        for &b in tuple {
            sig.push(g.has_edge(a, b) as u32);
        }
    }
    sig
}

fn initial_signatures(g: &Graph, k: usize) -> Result<Vec<Signature>, WlError> {
    let count = tuple_count(g.n(), k)?;
    let n = g.n();
    Ok((0..count)
        .into_par_iter()
        .map(|idx| {
            let mut tuple = vec![0; k];
            decode_index(idx, n, &mut tuple);
            isomorphism_type(g, &tuple)
        })
        .collect())
}

/// Colors every `k`-tuple by its isomorphism type. Vertex colors are compared
/// by exact bit equality.
pub fn initial_coloring(
    g: &Graph,
    k: usize,
    interner: &mut ColorInterner,
) -> Result<TupleColoring, WlError> {
    Ok(initial_coloring_joint(&[g], k, interner)?.remove(0))
}

/// [`initial_coloring`] for several graphs sharing one interner batch.
pub fn initial_coloring_joint(
    graphs: &[&Graph],
    k: usize,
    interner: &mut ColorInterner,
) -> Result<Vec<TupleColoring>, WlError> {
    if k == 0 {
        return Err(WlError::InvalidOrder(k));
    }
    let sigs: Vec<Vec<Signature>> = graphs
        .iter()
        .map(|g| initial_signatures(g, k))
        .collect::<Result<_, _>>()?;
    super::refine::intern_groups(sigs, interner)?
        .into_iter()
        .zip(graphs)
        .map(|(colors, g)| TupleColoring::new(k, g.n(), colors))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, random_gnp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_based(v: &[Vec<usize>]) -> Vec<Vec<usize>> {
        v.iter()
            .map(|t| t.iter().map(|x| x + 1).collect())
            .collect()
    }

    #[test]
    fn wl_neighborhoods_of_3_2() {
        // (3,2) in 1-based indexing
        let t = [2, 1];
        assert_eq!(
            one_based(&neighborhood_wl(&t, 0, 3).unwrap()),
            vec![vec![1, 2], vec![2, 2], vec![3, 2]]
        );
        assert_eq!(
            one_based(&neighborhood_wl(&t, 1, 3).unwrap()),
            vec![vec![3, 1], vec![3, 2], vec![3, 3]]
        );
        assert_eq!(neighborhood_wl(&[0], 0, 1).unwrap(), vec![vec![0]]);
        assert!(matches!(
            neighborhood_wl(&t, 2, 3),
            Err(WlError::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn fwl_neighborhoods() {
        assert_eq!(
            one_based(&neighborhood_fwl(&[2, 1], 4, 5).unwrap()),
            vec![vec![5, 2], vec![3, 5]]
        );
        assert_eq!(
            one_based(&neighborhood_fwl(&[0, 1, 2], 3, 4).unwrap()),
            vec![vec![4, 2, 3], vec![1, 4, 3], vec![1, 2, 4]]
        );
        assert_eq!(neighborhood_fwl(&[1], 0, 2).unwrap(), vec![vec![0]]);
        assert!(matches!(
            neighborhood_fwl(&[0, 0], 2, 2),
            Err(WlError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn index_round_trip() {
        let mut t = [0; 3];
        for idx in 0..64 {
            decode_index(idx, 4, &mut t);
            assert_eq!(encode_index(&t, 4), idx);
        }
    }

    // Hand count over the 36 pairs of C6: 6 diagonal, 12 adjacent, 18 other.
    #[test]
    fn c6_pairs_have_three_types() {
        let mut it = ColorInterner::new();
        let c = initial_coloring(&cycle(6).unwrap(), 2, &mut it).unwrap();
        let mut counts: Vec<usize> = c.histogram().into_iter().map(|(_, n)| n).collect();
        counts.sort();
        assert_eq!(counts, vec![6, 12, 18]);
    }

    #[test]
    fn k1_classes_are_vertex_colors() {
        let g = Graph::new(4, &[(0, 1)], &[vec![1.0], vec![2.0], vec![1.0], vec![3.0]]).unwrap();
        let mut it = ColorInterner::new();
        assert_eq!(initial_coloring(&g, 1, &mut it).unwrap().num_classes(), 3);
        let mut it = ColorInterner::new();
        assert_eq!(
            initial_coloring(&cycle(5).unwrap(), 1, &mut it)
                .unwrap()
                .num_classes(),
            1
        );
    }

    #[test]
    fn isomorphic_graphs_share_initial_histograms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for seed in 0..10 {
            let g = random_gnp(6, 0.5, seed).unwrap();
            let h = g.permute(&Permutation::random(6, &mut rng)).unwrap();
            let mut it = ColorInterner::new();
            let cs = initial_coloring_joint(&[&g, &h], 3, &mut it).unwrap();
            assert_eq!(cs[0].histogram(), cs[1].histogram());
        }
    }

    #[test]
    fn permute_and_partition_helpers() {
        let c =
            TupleColoring::new(2, 2, vec![ColorId(0), ColorId(1), ColorId(1), ColorId(2)]).unwrap();
        let g = Permutation::new(vec![1, 0]).unwrap();
        let p = c.permute(&g).unwrap();
        assert_eq!(
            p.colors(),
            &[ColorId(2), ColorId(1), ColorId(1), ColorId(0)]
        );
        let coarse = TupleColoring::new(2, 2, vec![ColorId(5); 4]).unwrap();
        assert!(c.refines(&coarse) && !coarse.refines(&c));
        let renamed =
            TupleColoring::new(2, 2, vec![ColorId(7), ColorId(3), ColorId(3), ColorId(9)]).unwrap();
        assert!(c.same_partition(&renamed));
        assert!(TupleColoring::new(2, 2, vec![ColorId(0); 3]).is_err());
    }
}
