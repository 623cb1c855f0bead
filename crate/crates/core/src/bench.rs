//! Timing helpers for the matrix-product scaling measurement.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::net::feature_matmul;
use crate::tensor::DenseTensor3;

#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub n: usize,
    pub channels: usize,
    pub samples: Vec<Duration>,
    /// Bytes held by the two operands and the product.
    pub working_set: usize,
}

impl Timing {
    pub fn median(&self) -> Duration {
        median(&self.samples)
    }
}

pub fn median(samples: &[Duration]) -> Duration {
    let mut s = samples.to_vec();
    s.sort_unstable();
    match s.len() {
        0 => Duration::ZERO,
        l if l % 2 == 1 => s[l / 2],
        l => (s[l / 2 - 1] + s[l / 2]) / 2,
    }
}

/// Times `reps` runs of [`feature_matmul`] on seeded random `n × n × channels`
/// operands.
pub fn time_feature_matmul(n: usize, channels: usize, reps: usize, seed: u64) -> Timing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random = || {
        let data = (0..n * n * channels)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        DenseTensor3::<f64>::new(n, channels, data).expect("shape by construction")
    };
    let (u, v) = (random(), random());
    let samples = (0..reps)
        .map(|_| {
            let start = Instant::now();
            let w = feature_matmul(&u, &v).expect("equal shapes");
            let elapsed = start.elapsed();
            std::hint::black_box(w);
            elapsed
        })
        .collect();
    Timing {
        n,
        channels,
        samples,
        working_set: 3 * n * n * channels * std::mem::size_of::<f64>(),
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Peak resident set size of this process in bytes, where the platform
/// reports it.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [64.0, 128.0, 256.0]
            .iter()
            .map(|&n: &f64| (n, 5.0 * n.powi(3)))
            .collect();
        assert!((log_log_slope(&pts).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(log_log_slope(&pts[..1]), None);
        assert_eq!(log_log_slope(&[(1.0, 1.0), (1.0, 2.0)]), None);
    }

    #[test]
    fn medians() {
        let d = |ms| Duration::from_millis(ms);
        assert_eq!(median(&[d(3), d(1), d(2)]), d(2));
        assert_eq!(
            median(&[d(4), d(1), d(2), d(3)]),
            Duration::from_micros(2500)
        );
    }

    #[test]
    fn one_sample_per_rep() {
        let t = time_feature_matmul(8, 2, 3, 0);
        assert_eq!(t.samples.len(), 3);
        assert_eq!(t.working_set, 3 * 64 * 2 * 8);
    }
}
