use num_traits::FromPrimitive;

use super::Graph;
use crate::scalar::Scalar;
use crate::tensor::{matmul, DenseTensor3, TensorError};

fn from_f64<T: Scalar + FromPrimitive>(x: f64) -> T {
    T::from_f64(x).expect("finite color converts")
}

/// Encodes `G` as an `n × n × (e+1)` tensor: channels `0..e` hold vertex
/// colors on the diagonal (zero elsewhere), channel `e` is the adjacency.
pub fn graph_to_tensor<T: Scalar + FromPrimitive>(g: &Graph) -> DenseTensor3<T> {
    encode(g, false)
}

/// [`graph_to_tensor`] with an extra identity-matrix channel appended.
pub fn graph_to_fwl_tensor<T: Scalar + FromPrimitive>(g: &Graph) -> DenseTensor3<T> {
    encode(g, true)
}

fn encode<T: Scalar + FromPrimitive>(g: &Graph, identity: bool) -> DenseTensor3<T> {
    let n = g.n();
    let e = g.color_width();
    let c = e + 1 + identity as usize;
    let mut t = DenseTensor3::zeros(n, c);
    for i in 0..n {
        for (j, &x) in g.color(i).iter().enumerate() {
            t.set(i, i, j, from_f64(x));
        }
        for k in g.neighbors(i) {
            t.set(i, k, e, T::one());
        }
        if identity {
            t.set(i, i, e + 1, T::one());
        }
    }
    t
}

/// Initial 2-tuple coloring built from a [`graph_to_fwl_tensor`] encoding.
///
/// For `e ≥ 1` the output has `4e + 1` channels: for each color channel `Y`
/// the products `A·Y`, `(J−A)·Y`, `Y·A`, `Y·(J−A)` (with `J` the all-ones
/// matrix), followed by the identity channel. For `e = 0` the output is the
/// stack `(A, J−A−I, I)`, one indicator per 2-tuple isomorphism type.
pub fn fwl_initial_colors<T: Scalar>(t: &DenseTensor3<T>) -> Result<DenseTensor3<T>, TensorError> {
    let c = t.channels();
    if c < 2 {
        return Err(TensorError::Channels {
            expected: 2,
            found: c,
        });
    }
    let n = t.n();
    let e = c - 2;
    let adj = t.channel(e)?;
    let ident = t.channel(e + 1)?;
    let complement: Vec<T> = adj.iter().map(|a| T::one() - a.clone()).collect();

    let mut channels = Vec::with_capacity(4 * e + 1);
    if e == 0 {
        let non_adjacent = complement
            .iter()
            .zip(&ident)
            .map(|(c, i)| c.clone() - i.clone())
            .collect();
        channels.push(adj);
        channels.push(non_adjacent);
    } else {
        for j in 0..e {
            let y = t.channel(j)?;
            channels.push(matmul(&adj, &y, n));
            channels.push(matmul(&complement, &y, n));
            channels.push(matmul(&y, &adj, n));
            channels.push(matmul(&y, &complement, n));
        }
    }
    channels.push(ident);
    DenseTensor3::from_channels(n, &channels)
}
