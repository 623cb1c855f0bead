use rayon::prelude::*;

use super::coloring::{decode_index, tuple_count, TupleColoring};
use super::interner::{ColorId, ColorInterner, Signature};
use super::{tags, WlError};
use crate::graph::Graph;

/// Interns several signature lists in one batch and splits the ids back out.
pub(crate) fn intern_groups(
    groups: Vec<Vec<Signature>>,
    interner: &mut ColorInterner,
) -> Result<Vec<Vec<ColorId>>, WlError> {
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let mut ids = interner.intern_batch(groups.into_iter().flatten().collect())?;
    let mut out = Vec::with_capacity(sizes.len());
    for s in sizes.into_iter().rev() {
        out.push(ids.split_off(ids.len() - s));
    }
    out.reverse();
    Ok(out)
}

fn step_joint(
    colorings: &[&TupleColoring],
    interner: &mut ColorInterner,
    signature: impl Fn(&TupleColoring, usize) -> Signature + Sync,
) -> Result<Vec<TupleColoring>, WlError> {
    for c in colorings {
        if c.k() < 2 {
            return Err(WlError::InvalidOrder(c.k()));
        }
    }
    let sigs: Vec<Vec<Signature>> = colorings
        .iter()
        .map(|c| {
            (0..c.len())
                .into_par_iter()
                .map(|idx| signature(c, idx))
                .collect()
        })
        .collect();
    intern_groups(sigs, interner)?
        .into_iter()
        .zip(colorings)
        .map(|(ids, c)| TupleColoring::new(c.k(), c.n(), ids))
        .collect()
}

/// k-WL signature: old color, then for each position `j` the sorted multiset
/// of colors over the `j`-th neighborhood.
fn wl_signature(c: &TupleColoring, idx: usize) -> Signature {
    let (k, n) = (c.k(), c.n());
    let colors = c.colors();
    let mut sig = Vec::with_capacity(2 + k * n);
    sig.push(tags::WL);
    sig.push(colors[idx].0);
    let mut stride = 1;
    let mut multiset = Vec::with_capacity(n);
    for _ in 0..k {
        // positions are visited from last to first; stride = n^(k-1-j)
        let digit = idx / stride % n;
        let base = idx - digit * stride;
        multiset.clear();
        multiset.extend((0..n).map(|v| colors[base + v * stride].0));
        multiset.sort_unstable();
        sig.extend_from_slice(&multiset);
        stride *= n;
    }
    sig
}

/// k-FWL signature: old color, then the sorted multiset over vertices `w` of
/// the ordered `k`-tuple of colors along the FWL neighborhood of `w`.
fn fwl_signature(c: &TupleColoring, idx: usize) -> Signature {
    let (k, n) = (c.k(), c.n());
    let colors = c.colors();
    let mut tuple = vec![0; k];
    decode_index(idx, n, &mut tuple);
    let strides: Vec<usize> = (0..k).map(|q| n.pow((k - 1 - q) as u32)).collect();
    let mut entries: Vec<Vec<u32>> = (0..n)
        .map(|w| {
            (0..k)
                .map(|q| {
                    let shifted = idx + w * strides[q] - tuple[q] * strides[q];
                    colors[shifted].0
                })
                .collect()
        })
        .collect();
    entries.sort_unstable();
    let mut sig = Vec::with_capacity(2 + k * n);
    sig.push(tags::FWL);
    sig.push(colors[idx].0);
    for e in entries {
        sig.extend(e);
    }
    sig
}

/// One k-WL refinement round.
pub fn wl_step(c: &TupleColoring, interner: &mut ColorInterner) -> Result<TupleColoring, WlError> {
    Ok(wl_step_joint(&[c], interner)?.remove(0))
}

/// One k-WL round over several colorings, interned as one batch.
pub fn wl_step_joint(
    colorings: &[&TupleColoring],
    interner: &mut ColorInterner,
) -> Result<Vec<TupleColoring>, WlError> {
    step_joint(colorings, interner, wl_signature)
}

/// One k-FWL refinement round.
pub fn fwl_step(c: &TupleColoring, interner: &mut ColorInterner) -> Result<TupleColoring, WlError> {
    Ok(fwl_step_joint(&[c], interner)?.remove(0))
}

pub fn fwl_step_joint(
    colorings: &[&TupleColoring],
    interner: &mut ColorInterner,
) -> Result<Vec<TupleColoring>, WlError> {
    step_joint(colorings, interner, fwl_signature)
}

fn vertex_signature(g: &Graph, v: usize) -> Signature {
    let mut sig = vec![tags::VERTEX, g.color_width() as u32];
    for x in g.color(v) {
        let bits = x.to_bits();
        sig.push((bits >> 32) as u32);
        sig.push(bits as u32);
    }
    sig
}

/// Vertex coloring by color vector, as a 1-tuple coloring.
pub fn vertex_coloring_joint(
    graphs: &[&Graph],
    interner: &mut ColorInterner,
) -> Result<Vec<TupleColoring>, WlError> {
    let sigs = graphs
        .iter()
        .map(|g| (0..g.n()).map(|v| vertex_signature(g, v)).collect())
        .collect();
    intern_groups(sigs, interner)?
        .into_iter()
        .zip(graphs)
        .map(|(ids, g)| TupleColoring::new(1, g.n(), ids))
        .collect()
}

/// One color-refinement round: each vertex gets (own color, sorted multiset
/// of neighbor colors).
pub fn refine_vertices_joint(
    graphs: &[&Graph],
    colorings: &[&TupleColoring],
    interner: &mut ColorInterner,
) -> Result<Vec<TupleColoring>, WlError> {
    let sigs = graphs
        .iter()
        .zip(colorings)
        .map(|(g, c)| {
            if c.k() != 1 || c.n() != g.n() {
                return Err(WlError::ColoringLength {
                    expected: g.n(),
                    found: c.len(),
                });
            }
            Ok((0..g.n())
                .map(|v| {
                    let mut nb: Vec<u32> = g.neighbors(v).map(|u| c.colors()[u].0).collect();
                    nb.sort_unstable();
                    let mut sig = vec![tags::REFINE, c.colors()[v].0, nb.len() as u32];
                    sig.extend(nb);
                    sig
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;
    intern_groups(sigs, interner)?
        .into_iter()
        .zip(graphs)
        .map(|(ids, g)| TupleColoring::new(1, g.n(), ids))
        .collect()
}

/// Classic color refinement on the vertices of `g`. Returns the colorings of
/// rounds `0, 1, …` up to and including the first round whose partition
/// equals the previous one.
pub fn color_refinement_1wl(
    g: &Graph,
    interner: &mut ColorInterner,
) -> Result<Vec<TupleColoring>, WlError> {
    let mut seq = vertex_coloring_joint(&[g], interner)?;
    loop {
        let last = seq.last().expect("non-empty");
        let next = refine_vertices_joint(&[g], &[last], interner)?.remove(0);
        let stable = next.num_classes() == last.num_classes();
        seq.push(next);
        if stable {
            return Ok(seq);
        }
    }
}

/// Upper bound on useful refinement rounds for `k`-tuples over `n` vertices.
pub fn round_cap(n: usize, k: usize) -> Result<usize, WlError> {
    Ok(tuple_count(n, k)? + 1)
}
