use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NetError;
use crate::scalar::Real;
use crate::tensor::DenseTensor3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Identity,
}

impl Activation {
    #[inline]
    pub fn apply<T: Real>(self, x: T) -> T {
        match self {
            Activation::Relu => {
                if x > T::zero() {
                    x
                } else {
                    T::zero()
                }
            }
            Activation::Identity => x,
        }
    }

    /// Derivative at `x`, taking `0` at the rectifier kink.
    #[inline]
    pub fn derivative<T: Real>(self, x: T) -> T {
        match self {
            Activation::Relu => {
                if x > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Activation::Identity => T::one(),
        }
    }
}

/// Multilayer perceptron applied to one feature vector.
///
/// Depth is the number of weight matrices: `hidden_widths.len() + 1`.
/// `activations` has one entry per layer, the last one for the output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MlpSpec {
    pub input_width: usize,
    pub hidden_widths: Vec<usize>,
    pub output_width: usize,
    pub activations: Vec<Activation>,
}

impl MlpSpec {
    /// Every layer uses `activation`.
    pub fn uniform(input: usize, hidden: &[usize], output: usize, activation: Activation) -> Self {
        Self {
            input_width: input,
            hidden_widths: hidden.to_vec(),
            output_width: output,
            activations: vec![activation; hidden.len() + 1],
        }
    }

    /// Rectifier on hidden layers, identity on the output layer.
    pub fn relu_hidden(input: usize, hidden: &[usize], output: usize) -> Self {
        let mut s = Self::uniform(input, hidden, output, Activation::Relu);
        *s.activations.last_mut().expect("at least one layer") = Activation::Identity;
        s
    }

    /// A single affine layer.
    pub fn linear(input: usize, output: usize, activation: Activation) -> Self {
        Self::uniform(input, &[], output, activation)
    }

    pub fn depth(&self) -> usize {
        self.hidden_widths.len() + 1
    }

    /// `[input, hidden…, output]`.
    pub fn widths(&self) -> Vec<usize> {
        let mut w = vec![self.input_width];
        w.extend(&self.hidden_widths);
        w.push(self.output_width);
        w
    }

    /// `Σ (in + 1) · out` over layers.
    pub fn param_count(&self) -> usize {
        self.widths().windows(2).map(|w| (w[0] + 1) * w[1]).sum()
    }

    /// `(offset, in, out, activation)` of each layer relative to the start of
    /// this MLP's parameters. A layer stores `W` (`out × in`, row-major)
    /// followed by the bias (`out`).
    pub fn layers(&self) -> Vec<(usize, usize, usize, Activation)> {
        let mut off = 0;
        self.widths()
            .windows(2)
            .zip(&self.activations)
            .map(|(w, &act)| {
                let l = (off, w[0], w[1], act);
                off += (w[0] + 1) * w[1];
                l
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), NetError> {
        if self.widths().contains(&0) {
            return Err(NetError::Spec("MLP widths must be at least 1".into()));
        }
        if self.activations.len() != self.depth() {
            return Err(NetError::Spec(format!(
                "MLP with {} layers has {} activations",
                self.depth(),
                self.activations.len()
            )));
        }
        Ok(())
    }
}

/// `out = act(W x + b)` for one layer; `params` starts at the layer.
#[inline]
pub(crate) fn affine<T: Real>(params: &[T], x: &[T], out: &mut [T], act: Activation) {
    let (i, o) = (x.len(), out.len());
    let (w, b) = params[..(i + 1) * o].split_at(i * o);
    for (r, slot) in out.iter_mut().enumerate() {
        let row = &w[r * i..(r + 1) * i];
        let mut acc = b[r];
        for (wv, xv) in row.iter().zip(x) {
            acc += *wv * *xv;
        }
        *slot = act.apply(acc);
    }
}

/// Evaluates the MLP on one vector.
pub fn apply_mlp<T: Real>(spec: &MlpSpec, params: &[T], x: &[T]) -> Result<Vec<T>, NetError> {
    check(spec, params, x.len())?;
    let mut cur = x.to_vec();
    for (off, _, out, act) in spec.layers() {
        let mut next = vec![T::zero(); out];
        affine(&params[off..], &cur, &mut next, act);
        cur = next;
    }
    Ok(cur)
}

fn check<T>(spec: &MlpSpec, params: &[T], width: usize) -> Result<(), NetError> {
    spec.validate()?;
    if width != spec.input_width {
        return Err(NetError::Width {
            expected: spec.input_width,
            found: width,
        });
    }
    if params.len() != spec.param_count() {
        return Err(NetError::ParamCount {
            expected: spec.param_count(),
            found: params.len(),
        });
    }
    Ok(())
}

/// One affine layer applied at every position of `t`.
pub(crate) fn affine_featurewise<T: Real>(
    t: &DenseTensor3<T>,
    params: &[T],
    out_width: usize,
    act: Activation,
) -> DenseTensor3<T> {
    let (n, c) = (t.n(), t.channels());
    let mut data = vec![T::zero(); n * n * out_width];
    data.par_chunks_mut(out_width)
        .zip(t.data().par_chunks(c.max(1)))
        .for_each(|(o, x)| affine(params, &x[..c], o, act));
    DenseTensor3::new(n, out_width, data).expect("shape by construction")
}

/// `out[i1, i2, :] = mlp(T[i1, i2, :])`.
pub fn apply_mlp_featurewise<T: Real>(
    t: &DenseTensor3<T>,
    spec: &MlpSpec,
    params: &[T],
) -> Result<DenseTensor3<T>, NetError> {
    check(spec, params, t.channels())?;
    let mut cur = t.clone();
    for (off, _, out, act) in spec.layers() {
        cur = affine_featurewise(&cur, &params[off..], out, act);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(n: usize, c: usize, rng: &mut ChaCha8Rng) -> DenseTensor3<f64> {
        DenseTensor3::new(
            n,
            c,
            (0..n * n * c)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn counts_and_layout() {
        let s = MlpSpec::relu_hidden(3, &[4, 5], 2);
        assert_eq!(s.param_count(), 4 * 4 + 5 * 5 + 6 * 2);
        let l = s.layers();
        assert_eq!(l[1], (16, 4, 5, Activation::Relu));
        assert_eq!(l[2], (41, 5, 2, Activation::Identity));
        assert!(MlpSpec::linear(0, 2, Activation::Relu).validate().is_err());
    }

    #[test]
    fn identity_layer_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_tensor(3, 2, &mut rng);
        let spec = MlpSpec::linear(2, 2, Activation::Identity);
        let params = vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        assert_eq!(apply_mlp_featurewise(&t, &spec, &params).unwrap(), t);
    }

    #[test]
    fn zero_weights_give_bias() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_tensor(4, 3, &mut rng);
        let spec = MlpSpec::linear(3, 1, Activation::Identity);
        let params = vec![0.0, 0.0, 0.0, 2.5];
        let out = apply_mlp_featurewise(&t, &spec, &params).unwrap();
        assert!(out.data().iter().all(|&v| v == 2.5));
    }

    #[test]
    fn hand_computed_two_layer() {
        // h = relu([1 -1] x + 0) ; y = 2 h + 1
        let spec = MlpSpec::relu_hidden(2, &[1], 1);
        let params = vec![1.0, -1.0, 0.0, 2.0, 1.0];
        assert_eq!(apply_mlp(&spec, &params, &[3.0, 1.0]).unwrap(), vec![5.0]);
        assert_eq!(apply_mlp(&spec, &params, &[1.0, 3.0]).unwrap(), vec![1.0]);
        assert!(apply_mlp(&spec, &params, &[1.0]).is_err());
        assert!(apply_mlp(&spec, &params[1..], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn featurewise_is_exactly_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = MlpSpec::relu_hidden(3, &[8], 4);
        let params: Vec<f64> = (0..spec.param_count())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        for _ in 0..10 {
            let t = random_tensor(6, 3, &mut rng);
            let g = Permutation::random(6, &mut rng);
            let lhs = apply_mlp_featurewise(&t.permute(&g).unwrap(), &spec, &params).unwrap();
            let rhs = apply_mlp_featurewise(&t, &spec, &params)
                .unwrap()
                .permute(&g)
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
