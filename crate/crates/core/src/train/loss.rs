use super::TrainError;
use crate::scalar::Real;

/// Training objective for one graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Loss {
    CrossEntropy { label: usize },
    AbsError { target: Vec<f64> },
}

impl Loss {
    /// Loss value and its gradient with respect to `output`.
    pub fn evaluate<T: Real>(&self, output: &[T]) -> Result<(T, Vec<T>), TrainError> {
        match self {
            Loss::CrossEntropy { label } => loss_cross_entropy(output, *label),
            Loss::AbsError { target } => {
                let target: Vec<T> = target
                    .iter()
                    .map(|&t| T::from(t).ok_or_else(|| TrainError::NonFinite("target".into())))
                    .collect::<Result<_, _>>()?;
                loss_abs_error(output, &target)
            }
        }
    }
}

fn finite<T: Real>(values: &[T], what: &str) -> Result<(), TrainError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(TrainError::NonFinite(what.to_string()))
    }
}

/// `-log softmax(logits)[label]`, computed with a shifted log-sum-exp.
pub fn loss_cross_entropy<T: Real>(logits: &[T], label: usize) -> Result<(T, Vec<T>), TrainError> {
    finite(logits, "logits")?;
    if label >= logits.len() {
        return Err(TrainError::Label {
            label,
            classes: logits.len(),
        });
    }
    let max = logits.iter().copied().fold(T::neg_infinity(), T::max);
    let exps: Vec<T> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: T = exps.iter().copied().sum();
    let loss = sum.ln() + max - logits[label];
    let mut grad: Vec<T> = exps.iter().map(|&e| e / sum).collect();
    grad[label] = grad[label] - T::one();
    Ok((loss, grad))
}

/// `Σ |prediction - target|`; the gradient is the sign, `0` at equality.
pub fn loss_abs_error<T: Real>(prediction: &[T], target: &[T]) -> Result<(T, Vec<T>), TrainError> {
    finite(prediction, "prediction")?;
    finite(target, "target")?;
    if prediction.len() != target.len() {
        return Err(TrainError::Shape(format!(
            "prediction has {} values, target {}",
            prediction.len(),
            target.len()
        )));
    }
    let mut loss = T::zero();
    let grad = prediction
        .iter()
        .zip(target)
        .map(|(&p, &t)| {
            let d = p - t;
            loss += d.abs();
            if d > T::zero() {
                T::one()
            } else if d < T::zero() {
                -T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    Ok((loss, grad))
}

/// Index of the largest logit, ties to the lowest index.
pub fn predicted_class<T: Real>(logits: &[T]) -> usize {
    let mut best = 0;
    for (i, &z) in logits.iter().enumerate() {
        if z > logits[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_logits() {
        for label in 0..2 {
            let (l, g) = loss_cross_entropy(&[0.0, 0.0], label).unwrap();
            assert!((l - std::f64::consts::LN_2).abs() < 1e-15);
            assert_eq!(g[label], -0.5);
            assert_eq!(g[1 - label], 0.5);
        }
    }

    #[test]
    fn large_logits_stay_finite() {
        let (l, _) = loss_cross_entropy(&[1000.0, -1000.0], 1).unwrap();
        assert_eq!(l, 2000.0);
        assert!(loss_cross_entropy(&[f64::NAN, 0.0], 0).is_err());
        assert!(loss_cross_entropy(&[0.0, 0.0], 2).is_err());
    }

    #[test]
    fn abs_error() {
        assert_eq!(loss_abs_error(&[3.0], &[3.0]).unwrap(), (0.0, vec![0.0]));
        let (l, g) = loss_abs_error(&[1.0, -2.0], &[3.0, -5.0]).unwrap();
        assert_eq!(l, 5.0);
        assert_eq!(g, vec![-1.0, 1.0]);
        assert!(loss_abs_error(&[f64::INFINITY], &[0.0]).is_err());
        assert!(loss_abs_error(&[1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn argmax_ties() {
        assert_eq!(predicted_class(&[0.0, 0.0]), 0);
        assert_eq!(predicted_class(&[0.0, 1.0, 1.0]), 1);
    }
}
