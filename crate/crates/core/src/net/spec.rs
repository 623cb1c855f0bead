use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mlp::{Activation, MlpSpec};
use super::ops::Pooling;
use super::NetError;
use crate::scalar::Real;

/// The skip branch `m3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Skip {
    Identity,
    Mlp(MlpSpec),
}

/// One block: `concat(m3(X), m1(X) · m2(X))`, then `m4` if present.
///
/// `m1` and `m2` are both present or both absent; without them the block has
/// no matrix product and reduces to feature-wise maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub m1: Option<MlpSpec>,
    pub m2: Option<MlpSpec>,
    pub m3: Skip,
    #[serde(default)]
    pub m4: Option<MlpSpec>,
}

impl BlockSpec {
    /// `m1, m2: a → b` rectifier MLPs with `depth` weight matrices and hidden
    /// width `b`; `m3` is the identity; no `m4`.
    pub fn matmul(a: usize, b: usize, depth: usize) -> Self {
        let hidden = vec![b; depth.saturating_sub(1)];
        let m = MlpSpec::uniform(a, &hidden, b, Activation::Relu);
        Self {
            m1: Some(m.clone()),
            m2: Some(m),
            m3: Skip::Identity,
            m4: None,
        }
    }

    /// Adds a single-layer rectifier `m4: (a + b) → b`.
    pub fn with_mix(mut self, input_width: usize) -> Self {
        let b = self.product_width();
        let skip = self.skip_width(input_width);
        self.m4 = Some(MlpSpec::linear(skip + b, b.max(1), Activation::Relu));
        self
    }

    /// Feature-wise only: `m3: a → b` rectifier MLP, no product.
    pub fn mlp_only(a: usize, b: usize, depth: usize) -> Self {
        let hidden = vec![b; depth.saturating_sub(1)];
        Self {
            m1: None,
            m2: None,
            m3: Skip::Mlp(MlpSpec::uniform(a, &hidden, b, Activation::Relu)),
            m4: None,
        }
    }

    pub fn product_width(&self) -> usize {
        self.m1.as_ref().map_or(0, |m| m.output_width)
    }

    pub fn skip_width(&self, input_width: usize) -> usize {
        match &self.m3 {
            Skip::Identity => input_width,
            Skip::Mlp(m) => m.output_width,
        }
    }

    pub fn output_width(&self, input_width: usize) -> usize {
        match &self.m4 {
            Some(m) => m.output_width,
            None => self.skip_width(input_width) + self.product_width(),
        }
    }

    pub fn validate(&self, input_width: usize) -> Result<(), NetError> {
        match (&self.m1, &self.m2) {
            (Some(m1), Some(m2)) => {
                for m in [m1, m2] {
                    m.validate()?;
                    if m.input_width != input_width {
                        return Err(NetError::Spec(format!(
                            "m1/m2 take {} channels but the block input has {input_width}",
                            m.input_width
                        )));
                    }
                }
                if m1.output_width != m2.output_width {
                    return Err(NetError::Spec("m1 and m2 output widths differ".into()));
                }
            }
            (None, None) => {}
            _ => {
                return Err(NetError::Spec(
                    "m1 and m2 must both be present or both absent".into(),
                ))
            }
        }
        if let Skip::Mlp(m) = &self.m3 {
            m.validate()?;
            if m.input_width != input_width {
                return Err(NetError::Spec(format!(
                    "m3 takes {} channels but the block input has {input_width}",
                    m.input_width
                )));
            }
        }
        if let Some(m4) = &self.m4 {
            m4.validate()?;
            let expect = self.skip_width(input_width) + self.product_width();
            if m4.input_width != expect {
                return Err(NetError::Spec(format!(
                    "m4 takes {} channels, block produces {expect}",
                    m4.input_width
                )));
            }
        }
        if self.skip_width(input_width) + self.product_width() == 0 {
            return Err(NetError::Spec("block produces no channels".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Head {
    /// Pool after the last block, then a fully connected stack with these
    /// hidden widths (rectifier) and a linear output layer.
    SuffixI { hidden_widths: Vec<usize> },
    /// Pool after every block, one linear layer per block to the output,
    /// outputs summed.
    SuffixII,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub input_channels: usize,
    pub blocks: Vec<BlockSpec>,
    pub head: Head,
    pub output_dim: usize,
    #[serde(default)]
    pub pooling: Pooling,
}

/// Where one MLP's parameters live inside [`Params`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub name: String,
    pub offset: usize,
    pub mlp: MlpSpec,
}

const FORMAT: &str = "wlnet-model";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format: String,
    version: u32,
    spec: ModelSpec,
}

impl ModelSpec {
    /// `d` matmul blocks of width `b` and MLP depth `depth`, with the given
    /// head. Block `i > 0` takes the `a + b` channels of block `i - 1`, or `b`
    /// when `mix` adds an `m4`.
    pub fn matmul_network(
        input_channels: usize,
        blocks: usize,
        b: usize,
        depth: usize,
        mix: bool,
        head: Head,
        output_dim: usize,
        pooling: Pooling,
    ) -> Self {
        let mut specs = Vec::with_capacity(blocks);
        let mut a = input_channels;
        for _ in 0..blocks {
            let mut blk = BlockSpec::matmul(a, b, depth);
            if mix {
                blk = blk.with_mix(a);
            }
            a = blk.output_width(a);
            specs.push(blk);
        }
        Self {
            input_channels,
            blocks: specs,
            head,
            output_dim,
            pooling,
        }
    }

    /// Same shape without matrix products: each block is a feature-wise MLP.
    pub fn mlp_only_network(
        input_channels: usize,
        blocks: usize,
        b: usize,
        depth: usize,
        head: Head,
        output_dim: usize,
        pooling: Pooling,
    ) -> Self {
        let mut specs = Vec::with_capacity(blocks);
        let mut a = input_channels;
        for _ in 0..blocks {
            specs.push(BlockSpec::mlp_only(a, b, depth));
            a = b;
        }
        Self {
            input_channels,
            blocks: specs,
            head,
            output_dim,
            pooling,
        }
    }

    /// Channel count entering each block, then after the last one.
    pub fn channel_chain(&self) -> Vec<usize> {
        let mut out = vec![self.input_channels];
        for b in &self.blocks {
            let a = *out.last().expect("non-empty");
            out.push(b.output_width(a));
        }
        out
    }

    pub fn validate(&self) -> Result<(), NetError> {
        if self.input_channels == 0 || self.output_dim == 0 {
            return Err(NetError::Spec(
                "input and output widths must be at least 1".into(),
            ));
        }
        let chain = self.channel_chain();
        for (b, &a) in self.blocks.iter().zip(&chain) {
            b.validate(a)?;
        }
        if matches!(self.head, Head::SuffixII) && self.blocks.is_empty() {
            return Err(NetError::Spec("suffix II needs at least one block".into()));
        }
        for slot in self.layout() {
            slot.mlp.validate()?;
        }
        Ok(())
    }

    /// Deterministic parameter layout: per block `m1, m2, m3, m4` (those
    /// that carry parameters), then the head.
    pub fn layout(&self) -> Vec<Slot> {
        let mut slots = Vec::new();
        let mut off = 0;
        let mut push = |name: String, mlp: &MlpSpec| {
            slots.push(Slot {
                name,
                offset: off,
                mlp: mlp.clone(),
            });
            off += mlp.param_count();
        };
        for (i, b) in self.blocks.iter().enumerate() {
            if let Some(m) = &b.m1 {
                push(format!("block{i}.m1"), m);
            }
            if let Some(m) = &b.m2 {
                push(format!("block{i}.m2"), m);
            }
            if let Skip::Mlp(m) = &b.m3 {
                push(format!("block{i}.m3"), m);
            }
            if let Some(m) = &b.m4 {
                push(format!("block{i}.m4"), m);
            }
        }
        let chain = self.channel_chain();
        match &self.head {
            Head::SuffixI { hidden_widths } => {
                let c = *chain.last().expect("non-empty");
                push(
                    "head.fc".into(),
                    &MlpSpec::relu_hidden(2 * c, hidden_widths, self.output_dim),
                );
            }
            Head::SuffixII => {
                for (i, &c) in chain[1..].iter().enumerate() {
                    push(
                        format!("head.fc{i}"),
                        &MlpSpec::linear(2 * c, self.output_dim, Activation::Identity),
                    );
                }
            }
        }
        slots
    }

    pub fn slot(&self, name: &str) -> Option<Slot> {
        self.layout().into_iter().find(|s| s.name == name)
    }

    pub fn param_count(&self) -> usize {
        self.layout().iter().map(|s| s.mlp.param_count()).sum()
    }

    /// Versioned JSON document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelDocument {
            format: FORMAT.into(),
            version: VERSION,
            spec: self.clone(),
        })
        .expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, NetError> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| NetError::Format(e.to_string()))?;
        if doc.format != FORMAT || doc.version != VERSION {
            return Err(NetError::Format(format!(
                "unsupported document {} v{}",
                doc.format, doc.version
            )));
        }
        doc.spec.validate()?;
        Ok(doc.spec)
    }
}

const MAGIC: &[u8; 4] = b"WLNP";
const PARAMS_VERSION: u32 = 1;

/// Flat parameter vector; see [`ModelSpec::layout`] for the offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<T> {
    values: Vec<T>,
}

impl<T: Real> Params<T> {
    pub fn zeros(spec: &ModelSpec) -> Self {
        Self {
            values: vec![T::zero(); spec.param_count()],
        }
    }

    pub fn from_vec(spec: &ModelSpec, values: Vec<T>) -> Result<Self, NetError> {
        if values.len() != spec.param_count() {
            return Err(NetError::ParamCount {
                expected: spec.param_count(),
                found: values.len(),
            });
        }
        Ok(Self { values })
    }

    /// Weights uniform in `±1/√fan_in`, biases zero, drawn in layout order
    /// from ChaCha8 seeded with `seed`.
    pub fn init(spec: &ModelSpec, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = vec![T::zero(); spec.param_count()];
        for slot in spec.layout() {
            for (off, i, o, _) in slot.mlp.layers() {
                let scale = 1.0 / (i as f64).sqrt();
                let start = slot.offset + off;
                for w in &mut values[start..start + i * o] {
                    *w = T::from_f64(rng.random_range(-scale..scale)).expect("finite");
                }
            }
        }
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    /// The parameters of one slot.
    pub fn slice(&self, slot: &Slot) -> &[T] {
        &self.values[slot.offset..slot.offset + slot.mlp.param_count()]
    }

    pub fn slice_mut(&mut self, slot: &Slot) -> &mut [T] {
        &mut self.values[slot.offset..slot.offset + slot.mlp.param_count()]
    }

    /// `"WLNP"`, `u32` version, `u64` count (all little-endian), then the
    /// values as little-endian `f64`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 8 * self.values.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&PARAMS_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.values.len() as u64).to_le_bytes());
        for v in &self.values {
            out.extend_from_slice(&v.to_f64().expect("float converts").to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, NetError> {
        let bad = |m: &str| NetError::Format(m.to_string());
        if bytes.len() < 16 || &bytes[..4] != MAGIC {
            return Err(bad("missing parameter header"));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
        if version != PARAMS_VERSION {
            return Err(bad("unsupported parameter version"));
        }
        let count = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
        let body = &bytes[16..];
        if (body.len() as u64) != count.saturating_mul(8) {
            return Err(bad("parameter count does not match payload"));
        }
        let values = body
            .chunks_exact(8)
            .map(|c| {
                T::from_f64(f64::from_le_bytes(c.try_into().expect("8 bytes")))
                    .expect("float converts")
            })
            .collect();
        Ok(Self { values })
    }
}
