use super::loss::Loss;
use super::TrainError;
use crate::graph::{cycle, disjoint_union, graph_to_tensor, Graph};
use crate::perm::Permutation;
use crate::tensor::DenseTensor3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const CYCLE_UNION: &str = "cycle-union";

/// Labelled graphs plus what is needed to regenerate them.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub family: String,
    pub seed: u64,
    pub m_values: Vec<usize>,
    pub items: Vec<(Graph, usize)>,
}

/// One training input with its objective.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub input: DenseTensor3<f64>,
    pub loss: Loss,
}

impl SyntheticDataset {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Adjacency tensors with cross-entropy objectives.
    pub fn examples(&self) -> Vec<Example> {
        self.items
            .iter()
            .map(|(g, label)| Example {
                input: graph_to_tensor(g),
                loss: Loss::CrossEntropy { label: *label },
            })
            .collect()
    }
}

/// For each `m`: `(C_2m, 0)` then `(C_m ⊔ C_m, 1)`, each under a random
/// vertex relabelling drawn from `seed`.
pub fn make_cycle_union_dataset(
    m_values: &[usize],
    seed: u64,
) -> Result<SyntheticDataset, TrainError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(2 * m_values.len());
    for &m in m_values {
        if m < 3 {
            return Err(TrainError::CycleLength(m));
        }
        let c = cycle(m).map_err(|e| TrainError::Shape(e.to_string()))?;
        let pair = [
            (
                cycle(2 * m).map_err(|e| TrainError::Shape(e.to_string()))?,
                0,
            ),
            (
                disjoint_union(&c, &c).map_err(|e| TrainError::Shape(e.to_string()))?,
                1,
            ),
        ];
        for (g, label) in pair {
            let p = Permutation::random(2 * m, &mut rng);
            items.push((
                g.permute(&p)
                    .map_err(|e| TrainError::Shape(e.to_string()))?,
                label,
            ));
        }
    }
    Ok(SyntheticDataset {
        family: CYCLE_UNION.to_string(),
        seed,
        m_values: m_values.to_vec(),
        items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wl::{compare_graphs, Variant};

    #[test]
    fn pairs_and_labels() {
        let d = make_cycle_union_dataset(&[3, 4, 5], 7).unwrap();
        assert_eq!(d.len(), 6);
        for (i, (g, label)) in d.items.iter().enumerate() {
            assert_eq!(*label, i % 2);
            let m = d.m_values[i / 2];
            assert_eq!(g.n(), 2 * m);
            assert!((0..g.n()).all(|v| g.degree(v) == 2));
            let closed = if m == 3 && *label == 1 { 12 } else { 0 };
            assert_eq!(g.trace_of_adjacency_cube(), closed);
        }
        assert_eq!(d, make_cycle_union_dataset(&[3, 4, 5], 7).unwrap());
        assert_ne!(
            d.items,
            make_cycle_union_dataset(&[3, 4, 5], 8).unwrap().items
        );
        assert!(matches!(
            make_cycle_union_dataset(&[3, 2], 0),
            Err(TrainError::CycleLength(2))
        ));
    }

    #[test]
    fn pairs_split_refinement_levels() {
        let d = make_cycle_union_dataset(&[3, 4, 5, 6], 1).unwrap();
        for pair in d.items.chunks(2) {
            let (a, b) = (&pair[0].0, &pair[1].0);
            assert!(!compare_graphs(a, b, 1, Variant::Cr1)
                .unwrap()
                .verdict
                .is_distinguished());
            assert!(compare_graphs(a, b, 2, Variant::Fwl)
                .unwrap()
                .verdict
                .is_distinguished());
        }
    }
}
