//! Graph-pair corpora and the verdict table used to check the known
//! relations between the refinement algorithms empirically.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{compare_graphs, Variant, Verdict, WlError};
use crate::graph::iso::{are_isomorphic, enumerate_nonisomorphic};
use crate::graph::{random_gnp, rook_4x4, shrikhande, write_graph6, Graph};

/// Largest order for exhaustive enumeration (156 graphs at `n = 6`).
pub const MAX_EXHAUSTIVE: usize = 6;

/// A refinement algorithm: variant plus tuple order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Algorithm {
    pub k: usize,
    pub variant: Variant,
}

impl Algorithm {
    pub const CR1: Algorithm = Algorithm {
        k: 1,
        variant: Variant::Cr1,
    };
    pub const WL2: Algorithm = Algorithm {
        k: 2,
        variant: Variant::Wl,
    };
    pub const WL3: Algorithm = Algorithm {
        k: 3,
        variant: Variant::Wl,
    };
    pub const FWL2: Algorithm = Algorithm {
        k: 2,
        variant: Variant::Fwl,
    };

    /// The four algorithms the property checks need.
    pub fn standard() -> Vec<Algorithm> {
        vec![Self::CR1, Self::WL2, Self::WL3, Self::FWL2]
    }

    /// Cartesian product of orders and variants, skipping invalid combinations
    /// (`cr1` only at `k = 1`, `wl`/`fwl` only at `k ≥ 2`).
    pub fn product(ks: &[usize], variants: &[Variant]) -> Vec<Algorithm> {
        let mut out = Vec::new();
        for &k in ks {
            for &variant in variants {
                let ok = match variant {
                    Variant::Cr1 => k == 1,
                    _ => k >= 2,
                };
                if ok {
                    out.push(Algorithm { k, variant });
                }
            }
        }
        out
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Variant::Cr1 => write!(f, "cr1"),
            v => write!(f, "{v}{}", self.k),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GraphPair {
    pub id: usize,
    /// Where the pair came from: `exhaustive`, `random` or `srg`.
    pub source: &'static str,
    pub a: Graph,
    pub b: Graph,
}

/// All unordered pairs of non-isomorphic uncolored graphs of equal order
/// `2 ≤ n ≤ n_max`. Pairs of different order are omitted since every
/// algorithm separates them at round 0.
pub fn exhaustive_pairs(n_max: usize) -> Vec<(Graph, Graph)> {
    assert!(
        n_max <= MAX_EXHAUSTIVE,
        "exhaustive enumeration limited to n <= {MAX_EXHAUSTIVE}"
    );
    let mut out = Vec::new();
    for n in 2..=n_max {
        let graphs = enumerate_nonisomorphic(n);
        for i in 0..graphs.len() {
            for j in i + 1..graphs.len() {
                out.push((graphs[i].clone(), graphs[j].clone()));
            }
        }
    }
    out
}

/// `count` seeded pairs of non-isomorphic `G(n, p)` graphs with
/// `n_min ≤ n ≤ n_max` and `p` uniform in `[0.2, 0.8]`.
///
/// Half of the pairs are drawn with equal edge counts so that they are not
/// all separated by the first refinement round.
pub fn random_pairs(count: usize, n_min: usize, n_max: usize, seed: u64) -> Vec<(Graph, Graph)> {
    assert!(2 <= n_min && n_min <= n_max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(n_min..=n_max);
        let p = rng.random_range(0.2..=0.8);
        let a = random_gnp(n, p, rng.random()).expect("valid probability");
        let want_same_size = out.len() % 2 == 0;
        let mut b = random_gnp(n, p, rng.random()).expect("valid probability");
        if want_same_size {
            for _ in 0..64 {
                if b.edge_count() == a.edge_count() {
                    break;
                }
                b = random_gnp(n, p, rng.random()).expect("valid probability");
            }
        }
        if !are_isomorphic(&a, &b) {
            out.push((a, b));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    /// Exhaustive pairs are taken for `n ≤ exhaustive_max`.
    pub exhaustive_max: usize,
    pub random_pairs: usize,
    pub random_n_min: usize,
    pub random_n_max: usize,
    pub seed: u64,
    /// Keep only the first `limit` exhaustive/random pairs.
    pub limit: Option<usize>,
    pub include_srg: bool,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            exhaustive_max: 6,
            random_pairs: 500,
            random_n_min: 4,
            random_n_max: 8,
            seed: 0,
            limit: None,
            include_srg: false,
        }
    }
}

pub fn build_corpus(spec: &CorpusSpec) -> Vec<GraphPair> {
    let mut raw: Vec<(&'static str, Graph, Graph)> = exhaustive_pairs(spec.exhaustive_max)
        .into_iter()
        .map(|(a, b)| ("exhaustive", a, b))
        .collect();
    if spec.random_pairs > 0 {
        raw.extend(
            random_pairs(
                spec.random_pairs,
                spec.random_n_min,
                spec.random_n_max,
                spec.seed,
            )
            .into_iter()
            .map(|(a, b)| ("random", a, b)),
        );
    }
    if let Some(limit) = spec.limit {
        raw.truncate(limit);
    }
    if spec.include_srg {
        raw.push(("srg", rook_4x4(), shrikhande()));
    }
    raw.into_iter()
        .enumerate()
        .map(|(id, (source, a, b))| GraphPair { id, source, a, b })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusRow {
    pub pair: usize,
    pub source: &'static str,
    pub n: usize,
    pub graph_a: String,
    pub graph_b: String,
    pub algorithm: String,
    pub k: usize,
    pub variant: Variant,
    pub distinguished: bool,
    /// Distinguishing round, or the stable round when indistinguishable.
    pub round: usize,
}

impl CorpusRow {
    pub const CSV_HEADER: &'static str =
        "pair,source,n,graph_a,graph_b,algorithm,k,variant,distinguished,round";

    /// One CSV line. graph6 strings use only `?`..`~`, so no quoting is needed.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.pair,
            self.source,
            self.n,
            self.graph_a,
            self.graph_b,
            self.algorithm,
            self.k,
            self.variant,
            self.distinguished,
            self.round
        )
    }
}

/// Runs every algorithm on every pair. Rows come out ordered by pair, then by
/// position in `algorithms`, whatever the thread count.
///
/// `filter` decides per pair which algorithms to run (e.g. to skip 3-WL on
/// large graphs).
pub fn run_corpus(
    pairs: &[GraphPair],
    algorithms: &[Algorithm],
    filter: impl Fn(&GraphPair, Algorithm) -> bool + Sync,
) -> Result<Vec<CorpusRow>, WlError> {
    let jobs: Vec<(&GraphPair, Algorithm)> = pairs
        .iter()
        .flat_map(|p| algorithms.iter().map(move |&a| (p, a)))
        .filter(|(p, a)| filter(p, *a))
        .collect();
    jobs.par_iter()
        .map(|&(p, alg)| {
            let c = compare_graphs(&p.a, &p.b, alg.k, alg.variant)?;
            let (distinguished, round) = match c.verdict {
                Verdict::Distinguished { round } => (true, round),
                Verdict::Indistinguishable { stable_round } => (false, stable_round),
            };
            Ok(CorpusRow {
                pair: p.id,
                source: p.source,
                n: p.a.n(),
                graph_a: write_graph6(&p.a).unwrap_or_default(),
                graph_b: write_graph6(&p.b).unwrap_or_default(),
                algorithm: alg.to_string(),
                k: alg.k,
                variant: alg.variant,
                distinguished,
                round,
            })
        })
        .collect()
}

/// Counts of pairs examined and violating pair ids for one relation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub checked: usize,
    pub violations: Vec<usize>,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    /// `cr1` and `wl2` agree.
    pub cr1_equals_wl2: RelationCheck,
    /// `fwl2` and `wl3` agree.
    pub fwl2_equals_wl3: RelationCheck,
    /// `wl2` distinguishes ⇒ `wl3` distinguishes.
    pub wl2_implies_wl3: RelationCheck,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.cr1_equals_wl2.holds() && self.fwl2_equals_wl3.holds() && self.wl2_implies_wl3.holds()
    }
}

/// Evaluates the three relations on every pair that has the needed verdicts.
pub fn check_properties(rows: &[CorpusRow]) -> PropertyReport {
    let mut by_pair: BTreeMap<usize, BTreeMap<&str, bool>> = BTreeMap::new();
    for r in rows {
        by_pair
            .entry(r.pair)
            .or_default()
            .insert(&r.algorithm, r.distinguished);
    }
    let mut report = PropertyReport::default();
    let relations: [(&str, &str, bool, &mut RelationCheck); 3] = [
        ("cr1", "wl2", true, &mut report.cr1_equals_wl2),
        ("fwl2", "wl3", true, &mut report.fwl2_equals_wl3),
        ("wl2", "wl3", false, &mut report.wl2_implies_wl3),
    ];
    for (lhs, rhs, equivalence, check) in relations {
        for (&pair, verdicts) in &by_pair {
            let (Some(&x), Some(&y)) = (verdicts.get(lhs), verdicts.get(rhs)) else {
                continue;
            };
            check.checked += 1;
            let ok = if equivalence { x == y } else { !x || y };
            if !ok {
                check.violations.push(pair);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let labels: Vec<String> = Algorithm::standard()
            .iter()
            .map(|a| a.to_string())
            .collect();
        assert_eq!(labels, ["cr1", "wl2", "wl3", "fwl2"]);
        let p = Algorithm::product(&[1, 2], &[Variant::Cr1, Variant::Fwl]);
        assert_eq!(p, vec![Algorithm::CR1, Algorithm::FWL2]);
    }

    #[test]
    fn exhaustive_pair_counts() {
        // C(2,2) + C(4,2) + C(11,2)
        assert_eq!(exhaustive_pairs(4).len(), 1 + 6 + 55);
    }

    #[test]
    fn random_pairs_are_reproducible_and_non_isomorphic() {
        let a = random_pairs(20, 4, 7, 11);
        let b = random_pairs(20, 4, 7, 11);
        assert_eq!(a.len(), 20);
        for ((x, y), (u, v)) in a.iter().zip(&b) {
            assert_eq!((x, y), (u, v));
            assert!(x.n() >= 4 && x.n() <= 7 && x.n() == y.n());
            assert!(!are_isomorphic(x, y));
        }
    }

    #[test]
    fn limit_and_srg() {
        let spec = CorpusSpec {
            exhaustive_max: 3,
            random_pairs: 0,
            limit: Some(0),
            include_srg: true,
            ..CorpusSpec::default()
        };
        let c = build_corpus(&spec);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].source, "srg");
    }

    #[test]
    fn small_corpus_satisfies_relations() {
        let spec = CorpusSpec {
            exhaustive_max: 5,
            random_pairs: 40,
            random_n_max: 7,
            seed: 3,
            ..CorpusSpec::default()
        };
        let pairs = build_corpus(&spec);
        let rows = run_corpus(&pairs, &Algorithm::standard(), |_, _| true).unwrap();
        assert_eq!(rows.len(), 4 * pairs.len());
        let report = check_properties(&rows);
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.cr1_equals_wl2.checked, pairs.len());
    }

    #[test]
    fn violations_are_reported() {
        let row = |pair, alg: Algorithm, d| CorpusRow {
            pair,
            source: "test",
            n: 3,
            graph_a: String::new(),
            graph_b: String::new(),
            algorithm: alg.to_string(),
            k: alg.k,
            variant: alg.variant,
            distinguished: d,
            round: 0,
        };
        let rows = vec![
            row(0, Algorithm::CR1, true),
            row(0, Algorithm::WL2, false),
            row(1, Algorithm::WL2, true),
            row(1, Algorithm::WL3, false),
        ];
        let r = check_properties(&rows);
        assert_eq!(r.cr1_equals_wl2.violations, vec![0]);
        assert_eq!(r.wl2_implies_wl3.violations, vec![1]);
        assert_eq!(r.fwl2_equals_wl3.checked, 0);
    }
}
