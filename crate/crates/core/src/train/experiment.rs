//! The cycle-union experiment: a matrix-product model against the
//! feature-wise baseline on pairs that colour refinement cannot separate.

use serde::{Deserialize, Serialize};

use super::data::make_cycle_union_dataset;
use super::fit::{train, EpochRecord, Optimizer, TrainConfig};
use super::TrainError;
use crate::net::{Head, ModelSpec, Params, Pooling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Architecture {
    /// Blocks with the per-channel matrix product.
    #[default]
    Matmul,
    /// Feature-wise MLP blocks only.
    MlpOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub m_values: Vec<usize>,
    /// Seeds both the vertex relabelling and the initialisation.
    pub seed: u64,
    pub architecture: Architecture,
    pub blocks: usize,
    pub width: usize,
    pub depth: usize,
    pub head: Head,
    pub pooling: Pooling,
    pub mix: bool,
    pub train: TrainConfig,
}

impl Default for Experiment {
    fn default() -> Self {
        Self {
            m_values: vec![3, 4, 5],
            seed: 0,
            architecture: Architecture::Matmul,
            blocks: 2,
            width: 16,
            depth: 2,
            head: Head::SuffixI {
                hidden_widths: vec![],
            },
            pooling: Pooling::Max,
            mix: false,
            train: TrainConfig {
                epochs: 500,
                learning_rate: 0.005,
                decay: 0.9,
                decay_every: 20,
                optimizer: Optimizer::Adam {
                    beta1: 0.9,
                    beta2: 0.999,
                    epsilon: 1e-8,
                },
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub spec: ModelSpec,
    pub params: Params<f64>,
    pub history: Vec<EpochRecord>,
}

impl ExperimentOutcome {
    pub fn final_accuracy(&self) -> f64 {
        self.history.last().map_or(f64::NAN, |r| r.accuracy)
    }

    pub fn final_loss(&self) -> f64 {
        self.history.last().map_or(f64::NAN, |r| r.loss)
    }

    /// First epoch whose accuracy is 1.
    pub fn first_perfect_epoch(&self) -> Option<usize> {
        self.history
            .iter()
            .find(|r| r.accuracy == 1.0)
            .map(|r| r.epoch)
    }
}

impl Experiment {
    pub fn spec(&self) -> ModelSpec {
        match self.architecture {
            Architecture::Matmul => ModelSpec::matmul_network(
                1,
                self.blocks,
                self.width,
                self.depth,
                self.mix,
                self.head.clone(),
                2,
                self.pooling,
            ),
            Architecture::MlpOnly => ModelSpec::mlp_only_network(
                1,
                self.blocks,
                self.width,
                self.depth,
                self.head.clone(),
                2,
                self.pooling,
            ),
        }
    }

    pub fn run(&self) -> Result<ExperimentOutcome, TrainError> {
        let data = make_cycle_union_dataset(&self.m_values, self.seed)?.examples();
        let spec = self.spec();
        spec.validate()?;
        let (params, history) = train(&spec, Params::init(&spec, self.seed), &data, &self.train)?;
        Ok(ExperimentOutcome {
            spec,
            params,
            history,
        })
    }
}
