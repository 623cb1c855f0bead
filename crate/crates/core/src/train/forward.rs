//! The model forward pass recorded on a [`Tape`].

use super::tape::{NodeId, Tape};
use super::TrainError;
use crate::net::{Head, ModelSpec, NetError, Params, Skip};
use crate::scalar::Real;
use crate::tensor::DenseTensor3;

fn slot_offset(spec: &ModelSpec, name: &str) -> Result<(crate::net::MlpSpec, usize), TrainError> {
    let slot = spec
        .slot(name)
        .ok_or_else(|| NetError::Spec(format!("no parameters named {name}")))?;
    Ok((slot.mlp, slot.offset))
}

/// Records the forward pass of `spec` on `input` and returns the output node,
/// a `1 × 1 × output_dim` tensor.
pub fn forward_on_tape<T: Real>(
    tape: &mut Tape<T>,
    input: &DenseTensor3<T>,
    spec: &ModelSpec,
    params: &Params<T>,
) -> Result<NodeId, TrainError> {
    spec.validate()?;
    if input.channels() != spec.input_channels {
        return Err(NetError::Width {
            expected: spec.input_channels,
            found: input.channels(),
        }
        .into());
    }
    if params.len() != spec.param_count() {
        return Err(TrainError::ParamCount {
            expected: spec.param_count(),
            found: params.len(),
        });
    }
    if !input.data().iter().all(|v| v.is_finite()) {
        return Err(TrainError::NonFinite("input".into()));
    }
    let p = params.as_slice();
    let mut cur = tape.input(input.clone())?;
    let mut pooled = Vec::new();
    for (i, block) in spec.blocks.iter().enumerate() {
        let skip = match &block.m3 {
            Skip::Identity => cur,
            Skip::Mlp(_) => {
                let (m, off) = slot_offset(spec, &format!("block{i}.m3"))?;
                tape.mlp(cur, &m, p, off)?
            }
        };
        let mut out = if block.m1.is_some() {
            let (m1, o1) = slot_offset(spec, &format!("block{i}.m1"))?;
            let (m2, o2) = slot_offset(spec, &format!("block{i}.m2"))?;
            let u = tape.mlp(cur, &m1, p, o1)?;
            let v = tape.mlp(cur, &m2, p, o2)?;
            let w = tape.matmul(u, v)?;
            tape.concat(skip, w)?
        } else {
            skip
        };
        if block.m4.is_some() {
            let (m4, o4) = slot_offset(spec, &format!("block{i}.m4"))?;
            out = tape.mlp(out, &m4, p, o4)?;
        }
        if !tape.value(out).data().iter().all(|v| v.is_finite()) {
            return Err(TrainError::NonFinite(format!("block {i}")));
        }
        cur = out;
        if matches!(spec.head, Head::SuffixII) {
            pooled.push(tape.pool(cur, spec.pooling)?);
        }
    }
    // the head is a feature-wise MLP on the 1 × 1 pooled tensor
    let out = match &spec.head {
        Head::SuffixI { .. } => {
            let h = tape.pool(cur, spec.pooling)?;
            let (m, off) = slot_offset(spec, "head.fc")?;
            tape.mlp(h, &m, p, off)?
        }
        Head::SuffixII => {
            let mut acc: Option<NodeId> = None;
            for (i, &h) in pooled.iter().enumerate() {
                let (m, off) = slot_offset(spec, &format!("head.fc{i}"))?;
                let y = tape.mlp(h, &m, p, off)?;
                acc = Some(match acc {
                    Some(a) => tape.add(a, y)?,
                    None => y,
                });
            }
            acc.ok_or_else(|| NetError::Spec("a model needs at least one block".into()))?
        }
    };
    if !tape.value(out).data().iter().all(|v| v.is_finite()) {
        return Err(TrainError::NonFinite("output".into()));
    }
    Ok(out)
}
