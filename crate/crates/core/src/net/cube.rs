use super::NetError;
use crate::perm::Permutation;
use crate::scalar::Real;

/// Single-channel `n × n × n` tensor, row-major over `(i1, i2, i3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeTensor<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> CubeTensor<T> {
    pub fn new(n: usize, data: Vec<T>) -> Result<Self, NetError> {
        if data.len() != n * n * n {
            return Err(NetError::Spec(format!(
                "cube of side {n} needs {} values",
                n * n * n
            )));
        }
        Ok(Self { n, data })
    }

    pub fn filled(n: usize, v: T) -> Self {
        Self {
            n,
            data: vec![v; n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.data[(i * self.n + j) * self.n + k]
    }

    /// `(g·A)[g(i), g(j), g(k)] = A[i, j, k]`.
    pub fn permute(&self, g: &Permutation) -> Result<Self, NetError> {
        let n = self.n;
        if g.len() != n {
            return Err(NetError::Side(g.len(), n));
        }
        let mut out = self.data.clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[(g.apply(i) * n + g.apply(j)) * n + g.apply(k)] = self.get(i, j, k);
                }
            }
        }
        Ok(Self { n, data: out })
    }
}

/// `out[i1, i2, i3] = Σ_j A¹[j, i2, i3] · A²[i1, j, i3] · A³[i1, i2, j]`.
pub fn generalized_matmul3<T: Real>(
    a1: &CubeTensor<T>,
    a2: &CubeTensor<T>,
    a3: &CubeTensor<T>,
) -> Result<CubeTensor<T>, NetError> {
    let n = a1.n;
    for t in [a2, a3] {
        if t.n != n {
            return Err(NetError::Side(n, t.n));
        }
    }
    let mut out = vec![T::zero(); n * n * n];
    for i1 in 0..n {
        for i2 in 0..n {
            for i3 in 0..n {
                let mut acc = T::zero();
                for j in 0..n {
                    acc += a1.get(j, i2, i3) * a2.get(i1, j, i3) * a3.get(i1, i2, j);
                }
                out[(i1 * n + i2) * n + i3] = acc;
            }
        }
    }
    Ok(CubeTensor { n, data: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cube(n: usize, rng: &mut ChaCha8Rng) -> CubeTensor<f64> {
        CubeTensor::new(
            n,
            (0..n * n * n)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn ones_and_zeros() {
        let ones = CubeTensor::filled(4, 1.0);
        let out = generalized_matmul3(&ones, &ones, &ones).unwrap();
        assert!(out.data().iter().all(|&v| v == 4.0));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = random_cube(4, &mut rng);
        let z = CubeTensor::filled(4, 0.0);
        for args in [(&z, &r, &r), (&r, &z, &r), (&r, &r, &z)] {
            assert!(generalized_matmul3(args.0, args.1, args.2)
                .unwrap()
                .data()
                .iter()
                .all(|&v| v == 0.0));
        }
        assert!(generalized_matmul3(&ones, &CubeTensor::filled(3, 1.0), &ones).is_err());
    }

    #[test]
    fn hand_value() {
        // n = 2, A¹ = A² = ones, A³[i1,i2,j] = j + 1: out = 1 + 2 everywhere
        let ones = CubeTensor::filled(2, 1.0);
        let a3 = CubeTensor::new(2, vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, 2.0]).unwrap();
        let out = generalized_matmul3(&ones, &ones, &a3).unwrap();
        assert!(out.data().iter().all(|&v| v == 3.0));
    }

    #[test]
    fn equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let (a, b, c) = (
                random_cube(5, &mut rng),
                random_cube(5, &mut rng),
                random_cube(5, &mut rng),
            );
            let g = Permutation::random(5, &mut rng);
            let lhs = generalized_matmul3(
                &a.permute(&g).unwrap(),
                &b.permute(&g).unwrap(),
                &c.permute(&g).unwrap(),
            )
            .unwrap();
            let rhs = generalized_matmul3(&a, &b, &c)
                .unwrap()
                .permute(&g)
                .unwrap();
            for (x, y) in lhs.data().iter().zip(rhs.data()) {
                assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()));
            }
        }
    }
}
