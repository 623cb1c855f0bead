//! Analytic gradients against central finite differences.

use super::forward::forward_on_tape;
use super::loss::Loss;
use super::tape::{Fault, Tape};
use super::TrainError;
use crate::net::{model_forward, ModelSpec, Params};
use crate::tensor::DenseTensor3;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckConfig {
    /// Coordinates to compare; all of them when the model is smaller.
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    /// Coordinates where both gradients are at most this large are skipped.
    pub threshold: f64,
}

impl Default for GradCheckConfig {
    fn default() -> Self {
        Self {
            samples: 200,
            seed: 0,
            step: 1e-5,
            threshold: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub max_relative_error: f64,
    /// `(coordinate, analytic, numeric)` for every sampled coordinate.
    pub entries: Vec<(usize, f64, f64)>,
    /// Number of entries above the threshold, i.e. those that were compared.
    pub compared: usize,
    pub worst: Option<usize>,
}

/// Loss and parameter gradient on one input.
pub fn loss_and_gradient(
    spec: &ModelSpec,
    params: &Params<f64>,
    input: &DenseTensor3<f64>,
    loss: &Loss,
) -> Result<(f64, Vec<f64>, Vec<f64>), TrainError> {
    loss_and_gradient_with_fault(spec, params, input, loss, Fault::None)
}

fn loss_and_gradient_with_fault(
    spec: &ModelSpec,
    params: &Params<f64>,
    input: &DenseTensor3<f64>,
    loss: &Loss,
    fault: Fault,
) -> Result<(f64, Vec<f64>, Vec<f64>), TrainError> {
    let mut tape = Tape::new(spec.param_count());
    tape.inject_fault(fault);
    let out = forward_on_tape(&mut tape, input, spec, params)?;
    let output = tape.value(out).data().to_vec();
    let (value, seed) = loss.evaluate(&output)?;
    let grad = tape.backward(out, &seed, params.as_slice())?;
    Ok((value, grad, output))
}

/// Maximum relative error `|a - n| / max(|a|, |n|)` between the analytic
/// gradient `a` and the central difference `n` over a seeded sample of
/// coordinates.
pub fn grad_check(
    spec: &ModelSpec,
    params: &Params<f64>,
    input: &DenseTensor3<f64>,
    loss: &Loss,
    config: &GradCheckConfig,
) -> Result<GradCheckReport, TrainError> {
    grad_check_with_fault(spec, params, input, loss, config, Fault::None)
}

#[doc(hidden)]
pub fn grad_check_with_fault(
    spec: &ModelSpec,
    params: &Params<f64>,
    input: &DenseTensor3<f64>,
    loss: &Loss,
    config: &GradCheckConfig,
    fault: Fault,
) -> Result<GradCheckReport, TrainError> {
    let (_, analytic, _) = loss_and_gradient_with_fault(spec, params, input, loss, fault)?;
    let total = params.len();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut coords = sample(&mut rng, total, config.samples.min(total)).into_vec();
    coords.sort_unstable();

    let eval = |p: &Params<f64>| -> Result<f64, TrainError> {
        let out = model_forward(input, spec, p)?;
        Ok(loss.evaluate(&out)?.0)
    };
    let mut probe = params.clone();
    let mut report = GradCheckReport {
        max_relative_error: 0.0,
        entries: Vec::with_capacity(coords.len()),
        compared: 0,
        worst: None,
    };
    for &c in &coords {
        let orig = probe.as_slice()[c];
        probe.as_mut_slice()[c] = orig + config.step;
        let plus = eval(&probe)?;
        probe.as_mut_slice()[c] = orig - config.step;
        let minus = eval(&probe)?;
        probe.as_mut_slice()[c] = orig;
        let numeric = (plus - minus) / (2.0 * config.step);
        let a = analytic[c];
        report.entries.push((c, a, numeric));
        let scale = a.abs().max(numeric.abs());
        if scale > config.threshold {
            report.compared += 1;
            let rel = (a - numeric).abs() / scale;
            if report.worst.is_none() || rel > report.max_relative_error {
                report.max_relative_error = rel;
                report.worst = Some(c);
            }
        }
    }
    Ok(report)
}

/// Parameters drawn uniformly from `[-scale, scale]`, biases included, so no
/// rectifier sits exactly on its kink.
pub fn random_params(spec: &ModelSpec, seed: u64, scale: f64) -> Params<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..spec.param_count())
        .map(|_| rng.random_range(-scale..scale))
        .collect();
    Params::from_vec(spec, values).expect("length from the spec")
}
