use super::mlp::{apply_mlp, apply_mlp_featurewise, Activation, MlpSpec};
use super::ops::{feature_matmul, invariant_pool, Pooling};
use super::spec::{BlockSpec, Head, ModelSpec, Params, Skip};
use super::NetError;
use crate::scalar::Real;
use crate::tensor::DenseTensor3;

fn mlp_params<'a, T: Real>(
    spec: &ModelSpec,
    params: &'a Params<T>,
    name: &str,
) -> Result<(MlpSpec, &'a [T]), NetError> {
    let slot = spec
        .slot(name)
        .ok_or_else(|| NetError::Spec(format!("no parameters named {name}")))?;
    Ok((slot.mlp.clone(), params.slice(&slot)))
}

/// Forward pass of block `index` of `spec`.
pub fn block_forward<T: Real>(
    t: &DenseTensor3<T>,
    spec: &ModelSpec,
    index: usize,
    params: &Params<T>,
) -> Result<DenseTensor3<T>, NetError> {
    let block: &BlockSpec = spec
        .blocks
        .get(index)
        .ok_or_else(|| NetError::Spec(format!("no block {index}")))?;
    block.validate(t.channels())?;
    let skip = match &block.m3 {
        Skip::Identity => t.clone(),
        Skip::Mlp(_) => {
            let (m, p) = mlp_params(spec, params, &format!("block{index}.m3"))?;
            apply_mlp_featurewise(t, &m, p)?
        }
    };
    let mut out = if block.m1.is_some() {
        let (m1, p1) = mlp_params(spec, params, &format!("block{index}.m1"))?;
        let (m2, p2) = mlp_params(spec, params, &format!("block{index}.m2"))?;
        let u = apply_mlp_featurewise(t, &m1, p1)?;
        let v = apply_mlp_featurewise(t, &m2, p2)?;
        skip.concat(&feature_matmul(&u, &v)?)?
    } else {
        skip
    };
    if block.m4.is_some() {
        let (m4, p4) = mlp_params(spec, params, &format!("block{index}.m4"))?;
        out = apply_mlp_featurewise(&out, &m4, p4)?;
    }
    Ok(out)
}

fn check_finite<T: Real>(values: &[T], stage: &str) -> Result<(), NetError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(NetError::NonFinite(stage.to_string()))
    }
}

/// `F = m ∘ h ∘ B_d ∘ … ∘ B_1` on an input tensor.
pub fn model_forward<T: Real>(
    input: &DenseTensor3<T>,
    spec: &ModelSpec,
    params: &Params<T>,
) -> Result<Vec<T>, NetError> {
    spec.validate()?;
    if input.channels() != spec.input_channels {
        return Err(NetError::Width {
            expected: spec.input_channels,
            found: input.channels(),
        });
    }
    if params.len() != spec.param_count() {
        return Err(NetError::ParamCount {
            expected: spec.param_count(),
            found: params.len(),
        });
    }
    check_finite(input.data(), "input")?;
    let mut cur = input.clone();
    let mut pooled = Vec::with_capacity(spec.blocks.len());
    for i in 0..spec.blocks.len() {
        cur = block_forward(&cur, spec, i, params)?;
        check_finite(cur.data(), &format!("block {i}"))?;
        if matches!(spec.head, Head::SuffixII) {
            pooled.push(invariant_pool(&cur, spec.pooling));
        }
    }
    let out = match &spec.head {
        Head::SuffixI { .. } => {
            let h = invariant_pool(&cur, spec.pooling);
            let (m, p) = mlp_params(spec, params, "head.fc")?;
            apply_mlp(&m, p, &h)?
        }
        Head::SuffixII => {
            let mut acc = vec![T::zero(); spec.output_dim];
            for (i, h) in pooled.iter().enumerate() {
                let (m, p) = mlp_params(spec, params, &format!("head.fc{i}"))?;
                for (a, y) in acc.iter_mut().zip(apply_mlp(&m, p, h)?) {
                    *a += y;
                }
            }
            acc
        }
    };
    check_finite(&out, "output")?;
    Ok(out)
}

/// A two-block network whose output is `tr(A³)` for graphs with `color_width`
/// vertex color channels (the adjacency is the last input channel).
///
/// Block 1 squares the adjacency and keeps the input through `m3`; block 2
/// multiplies `A²` by `A`. The head sums over the diagonal and reads the
/// `A³` channel. All weights are `0` or `1`, so integer graphs give exact
/// results.
pub fn handcrafted_triangle_model_for(color_width: usize) -> (ModelSpec, Params<f64>) {
    let c = color_width + 1;
    let select = |width: usize, index: usize| {
        let mut w = vec![0.0; width + 1];
        w[index] = 1.0;
        w
    };
    let lin = |i| Some(MlpSpec::linear(i, 1, Activation::Identity));
    let spec = ModelSpec {
        input_channels: c,
        blocks: vec![
            BlockSpec {
                m1: lin(c),
                m2: lin(c),
                m3: Skip::Identity,
                m4: None,
            },
            BlockSpec {
                m1: lin(c + 1),
                m2: lin(c + 1),
                m3: Skip::Identity,
                m4: None,
            },
        ],
        head: Head::SuffixI {
            hidden_widths: vec![],
        },
        output_dim: 1,
        pooling: Pooling::Sum,
    };
    // channels after block 2: input (c), A² (index c), A³ (index c + 1);
    // pooled diagonal of channel j sits at 2j
    let mut values = Vec::new();
    values.extend(select(c, c - 1));
    values.extend(select(c, c - 1));
    values.extend(select(c + 1, c));
    values.extend(select(c + 1, c - 1));
    values.extend(select(2 * (c + 2), 2 * (c + 1)));
    let params = Params::from_vec(&spec, values).expect("hand-set layout");
    (spec, params)
}

/// [`handcrafted_triangle_model_for`] uncolored graphs.
pub fn handcrafted_triangle_model() -> (ModelSpec, Params<f64>) {
    handcrafted_triangle_model_for(0)
}
