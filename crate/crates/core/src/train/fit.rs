use super::data::Example;
use super::gradcheck::loss_and_gradient;
use super::loss::{predicted_class, Loss};
use super::TrainError;
use crate::net::{ModelSpec, Params};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Optimizer {
    #[default]
    Sgd,
    Momentum {
        beta: f64,
    },
    Adam {
        beta1: f64,
        beta2: f64,
        epsilon: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Multiplies the learning rate every `decay_every` epochs; in `[0.5, 1]`.
    pub decay: f64,
    pub decay_every: usize,
    pub optimizer: Optimizer,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 500,
            learning_rate: 0.01,
            decay: 0.9,
            decay_every: 20,
            optimizer: Optimizer::Sgd,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(TrainError::Config(format!(
                "learning rate {}",
                self.learning_rate
            )));
        }
        if !(0.5..=1.0).contains(&self.decay) {
            return Err(TrainError::Config(format!(
                "decay {} outside [0.5, 1]",
                self.decay
            )));
        }
        if self.decay_every == 0 {
            return Err(TrainError::Config("decay interval must be positive".into()));
        }
        Ok(())
    }

    /// Learning rate of update `epoch` (1-based).
    pub fn learning_rate_at(&self, epoch: usize) -> f64 {
        let steps = epoch.saturating_sub(1) / self.decay_every;
        self.learning_rate * self.decay.powi(steps as i32)
    }
}

/// One history row. Row `0` is the untrained model; row `e` is the model
/// after `e` updates, the last of which used `learning_rate`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub accuracy: f64,
    pub learning_rate: f64,
}

pub const HISTORY_HEADER: &str = "epoch,loss,accuracy,learning_rate";

pub fn history_to_csv(history: &[EpochRecord]) -> String {
    let mut s = String::from(HISTORY_HEADER);
    s.push('\n');
    for r in history {
        s.push_str(&format!(
            "{},{},{},{}\n",
            r.epoch, r.loss, r.accuracy, r.learning_rate
        ));
    }
    s
}

/// Mean loss, accuracy over classification examples (`NaN` when there are
/// none) and mean gradient.
pub fn evaluate(
    spec: &ModelSpec,
    params: &Params<f64>,
    data: &[Example],
) -> Result<(f64, f64, Vec<f64>), TrainError> {
    if data.is_empty() {
        return Err(TrainError::EmptyDataset);
    }
    let mut total = 0.0;
    let mut grad = vec![0.0; params.len()];
    let (mut correct, mut labelled) = (0usize, 0usize);
    for ex in data {
        let (l, g, out) = loss_and_gradient(spec, params, &ex.input, &ex.loss)?;
        total += l;
        grad.iter_mut().zip(g).for_each(|(a, b)| *a += b);
        if let Loss::CrossEntropy { label } = ex.loss {
            labelled += 1;
            correct += usize::from(predicted_class(&out) == label);
        }
    }
    let scale = 1.0 / data.len() as f64;
    grad.iter_mut().for_each(|g| *g *= scale);
    let accuracy = if labelled == 0 {
        f64::NAN
    } else {
        correct as f64 / labelled as f64
    };
    Ok((total * scale, accuracy, grad))
}

struct State {
    first: Vec<f64>,
    second: Vec<f64>,
    step: i32,
}

fn update(params: &mut [f64], grad: &[f64], lr: f64, opt: Optimizer, st: &mut State) {
    st.step += 1;
    match opt {
        Optimizer::Sgd => params.iter_mut().zip(grad).for_each(|(p, g)| *p -= lr * g),
        Optimizer::Momentum { beta } => {
            for ((p, g), v) in params.iter_mut().zip(grad).zip(&mut st.first) {
                *v = beta * *v + g;
                *p -= lr * *v;
            }
        }
        Optimizer::Adam {
            beta1,
            beta2,
            epsilon,
        } => {
            let c1 = 1.0 - beta1.powi(st.step);
            let c2 = 1.0 - beta2.powi(st.step);
            for (((p, g), m), v) in params
                .iter_mut()
                .zip(grad)
                .zip(&mut st.first)
                .zip(&mut st.second)
            {
                *m = beta1 * *m + (1.0 - beta1) * g;
                *v = beta2 * *v + (1.0 - beta2) * g * g;
                *p -= lr * (*m / c1) / ((*v / c2).sqrt() + epsilon);
            }
        }
    }
}

/// Full-batch gradient descent. Returns the trained parameters and
/// `epochs + 1` history rows.
pub fn train(
    spec: &ModelSpec,
    mut params: Params<f64>,
    data: &[Example],
    config: &TrainConfig,
) -> Result<(Params<f64>, Vec<EpochRecord>), TrainError> {
    config.validate()?;
    if data.is_empty() {
        return Err(TrainError::EmptyDataset);
    }
    let mut state = State {
        first: vec![0.0; params.len()],
        second: vec![0.0; params.len()],
        step: 0,
    };
    let mut history = Vec::with_capacity(config.epochs + 1);
    for epoch in 0..=config.epochs {
        let (loss, accuracy, grad) = evaluate(spec, &params, data).map_err(|e| match e {
            TrainError::NonFinite(detail)
            | TrainError::Net(crate::net::NetError::NonFinite(detail)) => {
                TrainError::Diverged { epoch, detail }
            }
            other => other,
        })?;
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(TrainError::Diverged {
                epoch,
                detail: format!("loss {loss}"),
            });
        }
        history.push(EpochRecord {
            epoch,
            loss,
            accuracy,
            learning_rate: config.learning_rate_at(epoch.max(1)),
        });
        if epoch < config.epochs {
            update(
                params.as_mut_slice(),
                &grad,
                config.learning_rate_at(epoch + 1),
                config.optimizer,
                &mut state,
            );
        }
    }
    Ok((params, history))
}
