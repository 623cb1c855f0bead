//! Reverse-mode differentiation over the network operations.
//!
//! Every forward operation appends a node holding its output (and whatever
//! the backward rule needs). Nodes are appended after their inputs, so the
//! node order is a topological order and the backward sweep walks it in
//! reverse, visiting each node once.

use super::TrainError;
use crate::net::{
    affine_featurewise, channel_matrix, from_channel_matrices, matmul_real, pool_with_argmax,
    Activation, MlpSpec, Pooling,
};
use crate::scalar::Real;
use crate::tensor::{transpose, DenseTensor3};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Input,
    /// One feature-wise affine layer with parameters at `offset`; `pre` is
    /// the pre-activation.
    Affine {
        input: NodeId,
        offset: usize,
        activation: Activation,
    },
    /// Per-channel `left · right`.
    Matmul {
        left: NodeId,
        right: NodeId,
    },
    Concat {
        left: NodeId,
        right: NodeId,
    },
    /// Invariant pooling into a `1 × 1 × 2c` tensor; `argmax` holds the
    /// selected data index per output for max pooling.
    Pool {
        input: NodeId,
        pooling: Pooling,
        argmax: Vec<usize>,
    },
    Add {
        left: NodeId,
        right: NodeId,
    },
}

#[derive(Debug, Clone)]
struct Node<T> {
    op: Op,
    value: DenseTensor3<T>,
    pre: Option<DenseTensor3<T>>,
}

/// Deliberate faults in the backward rules, for negative-control tests of
/// the gradient checker.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Drop the gradient flowing into the right operand of a matrix product.
    MatmulRightOperand,
    /// Route rectifier gradients through inactive units as well.
    ReluPassThrough,
}

#[derive(Debug, Clone)]
pub struct Tape<T> {
    nodes: Vec<Node<T>>,
    param_count: usize,
    consumed: bool,
    fault: Fault,
}

impl<T: Real> Tape<T> {
    /// A tape for a model with `param_count` parameters.
    pub fn new(param_count: usize) -> Self {
        Self {
            nodes: Vec::new(),
            param_count,
            consumed: false,
            fault: Fault::None,
        }
    }

    #[doc(hidden)]
    pub fn inject_fault(&mut self, fault: Fault) {
        self.fault = fault;
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ops(&self) -> impl Iterator<Item = &Op> {
        self.nodes.iter().map(|n| &n.op)
    }

    pub fn value(&self, id: NodeId) -> &DenseTensor3<T> {
        &self.nodes[id].value
    }

    fn push(
        &mut self,
        op: Op,
        value: DenseTensor3<T>,
        pre: Option<DenseTensor3<T>>,
    ) -> Result<NodeId, TrainError> {
        if self.consumed {
            return Err(TrainError::TapeConsumed);
        }
        self.nodes.push(Node { op, value, pre });
        Ok(self.nodes.len() - 1)
    }

    pub fn input(&mut self, t: DenseTensor3<T>) -> Result<NodeId, TrainError> {
        self.push(Op::Input, t, None)
    }

    /// One affine layer, `in → out`, parameters at `params[offset..]`.
    pub fn affine(
        &mut self,
        x: NodeId,
        params: &[T],
        offset: usize,
        out: usize,
        activation: Activation,
    ) -> Result<NodeId, TrainError> {
        let input = &self.nodes[x].value;
        let need = (input.channels() + 1) * out;
        if offset + need > params.len() || params.len() != self.param_count {
            return Err(TrainError::ParamCount {
                expected: self.param_count,
                found: params.len(),
            });
        }
        let pre = affine_featurewise(input, &params[offset..], out, Activation::Identity);
        let value = pre.map(|&v| activation.apply(v));
        self.push(
            Op::Affine {
                input: x,
                offset,
                activation,
            },
            value,
            Some(pre),
        )
    }

    /// All layers of an MLP whose parameters start at `offset`.
    pub fn mlp(
        &mut self,
        x: NodeId,
        spec: &MlpSpec,
        params: &[T],
        offset: usize,
    ) -> Result<NodeId, TrainError> {
        let mut cur = x;
        for (off, _, out, act) in spec.layers() {
            cur = self.affine(cur, params, offset + off, out, act)?;
        }
        Ok(cur)
    }

    pub fn matmul(&mut self, left: NodeId, right: NodeId) -> Result<NodeId, TrainError> {
        let w = crate::net::feature_matmul(&self.nodes[left].value, &self.nodes[right].value)?;
        self.push(Op::Matmul { left, right }, w, None)
    }

    pub fn concat(&mut self, left: NodeId, right: NodeId) -> Result<NodeId, TrainError> {
        let v = self.nodes[left].value.concat(&self.nodes[right].value)?;
        self.push(Op::Concat { left, right }, v, None)
    }

    pub fn pool(&mut self, x: NodeId, pooling: Pooling) -> Result<NodeId, TrainError> {
        let (values, argmax) = pool_with_argmax(&self.nodes[x].value, pooling);
        let width = values.len();
        let v = DenseTensor3::new(1, width, values)?;
        self.push(
            Op::Pool {
                input: x,
                pooling,
                argmax,
            },
            v,
            None,
        )
    }

    pub fn add(&mut self, left: NodeId, right: NodeId) -> Result<NodeId, TrainError> {
        let (a, b) = (&self.nodes[left].value, &self.nodes[right].value);
        if a.n() != b.n() || a.channels() != b.channels() {
            return Err(TrainError::Shape("add operands differ in shape".into()));
        }
        let data = a
            .data()
            .iter()
            .zip(b.data())
            .map(|(x, y)| *x + *y)
            .collect();
        let v = DenseTensor3::new(a.n(), a.channels(), data)?;
        self.push(Op::Add { left, right }, v, None)
    }

    /// Back-propagates `seed = ∂L/∂output` and returns `∂L/∂params`.
    ///
    /// The tape is consumed: cached values are released and later calls
    /// (forward or backward) fail with [`TrainError::TapeConsumed`].
    pub fn backward(
        &mut self,
        output: NodeId,
        seed: &[T],
        params: &[T],
    ) -> Result<Vec<T>, TrainError> {
        self.backward_with_inputs(output, seed, params)
            .map(|(p, _)| p)
    }

    /// [`Tape::backward`], also returning `∂L/∂input` for every input node
    /// reached by the sweep.
    #[allow(clippy::type_complexity)]
    pub fn backward_with_inputs(
        &mut self,
        output: NodeId,
        seed: &[T],
        params: &[T],
    ) -> Result<(Vec<T>, Vec<(NodeId, Vec<T>)>), TrainError> {
        if self.consumed {
            return Err(TrainError::TapeConsumed);
        }
        if params.len() != self.param_count {
            return Err(TrainError::ParamCount {
                expected: self.param_count,
                found: params.len(),
            });
        }
        if seed.len() != self.nodes[output].value.data().len() {
            return Err(TrainError::Shape(
                "seed does not match the output node".into(),
            ));
        }
        self.consumed = true;
        let nodes = std::mem::take(&mut self.nodes);
        let mut grads: Vec<Option<Vec<T>>> = vec![None; nodes.len()];
        grads[output] = Some(seed.to_vec());
        let mut dparams = vec![T::zero(); self.param_count];
        let mut dinputs = Vec::new();

        fn accumulate<T: Real>(slot: &mut Option<Vec<T>>, g: Vec<T>) {
            match slot {
                Some(acc) => acc.iter_mut().zip(g).for_each(|(a, b)| *a += b),
                None => *slot = Some(g),
            }
        }

        for id in (0..=output).rev() {
            let Some(dy) = grads[id].take() else {
                continue;
            };
            let node = &nodes[id];
            match &node.op {
                Op::Input => dinputs.push((id, dy)),
                Op::Affine {
                    input,
                    offset,
                    activation,
                } => {
                    let x = &nodes[*input].value;
                    let pre = node.pre.as_ref().expect("affine keeps its pre-activation");
                    let (i, o) = (x.channels(), node.value.channels());
                    let dz: Vec<T> = dy
                        .iter()
                        .zip(pre.data())
                        .map(|(&d, &z)| {
                            let der = match (self.fault, activation) {
                                (Fault::ReluPassThrough, Activation::Relu) => T::one(),
                                _ => activation.derivative(z),
                            };
                            d * der
                        })
                        .collect();
                    let w = &params[*offset..*offset + i * o];
                    let (dw, db) = dparams[*offset..*offset + (i + 1) * o].split_at_mut(i * o);
                    let mut dx = vec![T::zero(); x.data().len()];
                    for (p, (dzp, xp)) in dz.chunks(o).zip(x.data().chunks(i)).enumerate() {
                        let dxp = &mut dx[p * i..(p + 1) * i];
                        for r in 0..o {
                            let g = dzp[r];
                            if g == T::zero() {
                                continue;
                            }
                            db[r] += g;
                            let wr = &w[r * i..(r + 1) * i];
                            let dwr = &mut dw[r * i..(r + 1) * i];
                            for c in 0..i {
                                dwr[c] += g * xp[c];
                                dxp[c] += g * wr[c];
                            }
                        }
                    }
                    accumulate(&mut grads[*input], dx);
                }
                Op::Matmul { left, right } => {
                    let (u, v) = (&nodes[*left].value, &nodes[*right].value);
                    let n = u.n();
                    let dw = DenseTensor3::new(n, u.channels(), dy)?;
                    let mut du = Vec::with_capacity(u.channels());
                    let mut dv = Vec::with_capacity(u.channels());
                    for ch in 0..u.channels() {
                        let g = channel_matrix(&dw, ch);
                        let (uc, vc) = (channel_matrix(u, ch), channel_matrix(v, ch));
                        du.push(matmul_real(&g, &transpose(&vc, n), n));
                        dv.push(match self.fault {
                            Fault::MatmulRightOperand => vec![T::zero(); n * n],
                            _ => matmul_real(&transpose(&uc, n), &g, n),
                        });
                    }
                    accumulate(&mut grads[*left], from_channel_matrices(n, &du).into_data());
                    accumulate(
                        &mut grads[*right],
                        from_channel_matrices(n, &dv).into_data(),
                    );
                }
                Op::Concat { left, right } => {
                    let (a, b) = (
                        nodes[*left].value.channels(),
                        nodes[*right].value.channels(),
                    );
                    let mut da = Vec::with_capacity(dy.len() / (a + b) * a);
                    let mut db = Vec::with_capacity(dy.len() / (a + b) * b);
                    for pos in dy.chunks(a + b) {
                        da.extend_from_slice(&pos[..a]);
                        db.extend_from_slice(&pos[a..]);
                    }
                    accumulate(&mut grads[*left], da);
                    accumulate(&mut grads[*right], db);
                }
                Op::Pool {
                    input,
                    pooling,
                    argmax,
                } => {
                    let x = &nodes[*input].value;
                    let (n, c) = (x.n(), x.channels());
                    let mut dx = vec![T::zero(); x.data().len()];
                    match pooling {
                        Pooling::Sum => {
                            for i1 in 0..n {
                                for i2 in 0..n {
                                    let slot = if i1 == i2 { 0 } else { 1 };
                                    for ch in 0..c {
                                        dx[(i1 * n + i2) * c + ch] = dy[2 * ch + slot];
                                    }
                                }
                            }
                        }
                        Pooling::Max => {
                            for (o, &idx) in argmax.iter().enumerate() {
                                if idx != usize::MAX {
                                    dx[idx] += dy[o];
                                }
                            }
                        }
                    }
                    accumulate(&mut grads[*input], dx);
                }
                Op::Add { left, right } => {
                    accumulate(&mut grads[*left], dy.clone());
                    accumulate(&mut grads[*right], dy);
                }
            }
        }
        dinputs.reverse();
        Ok((dparams, dinputs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_affine_layer_matches_hand_formula() {
        // y = w·x + b at one position, loss = y; ∂/∂w = x, ∂/∂b = 1
        let params = vec![0.5, -2.0, 0.25];
        let mut tape = Tape::new(3);
        let x = tape
            .input(DenseTensor3::new(1, 2, vec![3.0, 4.0]).unwrap())
            .unwrap();
        let y = tape.affine(x, &params, 0, 1, Activation::Identity).unwrap();
        assert_eq!(tape.value(y).data(), &[0.5 * 3.0 - 2.0 * 4.0 + 0.25]);
        let g = tape.backward(y, &[1.0], &params).unwrap();
        assert_eq!(g, vec![3.0, 4.0, 1.0]);
    }

    #[test]
    fn relu_blocks_inactive_units() {
        let params = vec![-1.0, 0.0];
        let mut tape = Tape::new(2);
        let x = tape
            .input(DenseTensor3::new(1, 1, vec![2.0]).unwrap())
            .unwrap();
        let y = tape.affine(x, &params, 0, 1, Activation::Relu).unwrap();
        assert_eq!(tape.value(y).data(), &[0.0]);
        assert_eq!(tape.backward(y, &[1.0], &params).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn matmul_gradient_at_identity() {
        // W = U V at U = V = I: dU = dW Vᵀ = dW and dV = Uᵀ dW = dW
        let n = 3;
        let mut eye = DenseTensor3::zeros(n, 1);
        for i in 0..n {
            eye.set(i, i, 0, 1.0);
        }
        let dw: Vec<f64> = (0..9).map(|v| v as f64 - 4.0).collect();
        let mut tape = Tape::new(0);
        let u = tape.input(eye.clone()).unwrap();
        let v = tape.input(eye).unwrap();
        let w = tape.matmul(u, v).unwrap();
        let (dp, dx) = tape.backward_with_inputs(w, &dw, &[]).unwrap();
        assert!(dp.is_empty());
        assert_eq!(dx, vec![(u, dw.clone()), (v, dw)]);
    }

    #[test]
    fn tape_cannot_be_reused() {
        let params = vec![1.0, 0.0];
        let mut tape = Tape::new(2);
        let x = tape
            .input(DenseTensor3::new(1, 1, vec![2.0]).unwrap())
            .unwrap();
        let y = tape.affine(x, &params, 0, 1, Activation::Identity).unwrap();
        tape.backward(y, &[1.0], &params).unwrap();
        assert!(matches!(
            tape.backward(y, &[1.0], &params),
            Err(TrainError::TapeConsumed)
        ));
        assert!(matches!(
            tape.input(DenseTensor3::zeros(1, 1)),
            Err(TrainError::TapeConsumed)
        ));
    }

    #[test]
    fn max_pool_routes_to_first_maximum() {
        let mut tape = Tape::<f64>::new(0);
        let t = DenseTensor3::new(2, 1, vec![1.0, 5.0, 5.0, 1.0]).unwrap();
        let x = tape.input(t).unwrap();
        let p = tape.pool(x, Pooling::Max).unwrap();
        assert_eq!(tape.value(p).data(), &[1.0, 5.0]);
        let (_, dx) = tape.backward_with_inputs(p, &[1.0, 1.0], &[]).unwrap();
        // diagonal max at index 0, off-diagonal tie between 1 and 2 goes to 1
        assert_eq!(dx, vec![(x, vec![1.0, 1.0, 0.0, 0.0])]);
    }

    #[test]
    fn sum_pool_broadcasts() {
        let mut tape = Tape::<f64>::new(0);
        let x = tape.input(DenseTensor3::zeros(2, 1)).unwrap();
        let p = tape.pool(x, Pooling::Sum).unwrap();
        let (_, dx) = tape.backward_with_inputs(p, &[2.0, 3.0], &[]).unwrap();
        assert_eq!(dx, vec![(x, vec![2.0, 3.0, 3.0, 2.0])]);
    }
}
