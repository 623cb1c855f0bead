use std::fmt;

use serde::{Deserialize, Serialize};

use super::coloring::{initial_coloring_joint, TupleColoring};
use super::interner::{ColorId, ColorInterner};
use super::refine::{
    fwl_step_joint, refine_vertices_joint, round_cap, vertex_coloring_joint, wl_step_joint,
};
use super::WlError;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Wl,
    Fwl,
    Cr1,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Wl => "wl",
            Variant::Fwl => "fwl",
            Variant::Cr1 => "cr1",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "wl" => Ok(Variant::Wl),
            "fwl" => Ok(Variant::Fwl),
            "cr1" => Ok(Variant::Cr1),
            other => Err(format!(
                "unknown variant `{other}` (expected wl, fwl or cr1)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Distinguished { round: usize },
    Indistinguishable { stable_round: usize },
}

impl Verdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished { .. })
    }
}

/// Outcome of a joint refinement run, with the histograms of every round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub variant: Variant,
    pub k: usize,
    /// Refinement rounds performed after the initial coloring.
    pub rounds: usize,
    pub verdict: Verdict,
    /// `histograms[r] = [hist(G), hist(G')]` at round `r`.
    pub histograms: Vec<[Vec<(ColorId, usize)>; 2]>,
}

fn joint_classes(cs: &[TupleColoring]) -> usize {
    let mut ids: Vec<ColorId> = cs.iter().flat_map(|c| c.colors().iter().copied()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.len()
}

/// Refines `g` and `h` against one interner and compares their histograms
/// after every round.
///
/// The run stops at the first round whose histograms differ, or when a round
/// leaves the number of classes of the joint partition unchanged. With equal
/// histograms that is the same as both partitions being stable at once.
pub fn compare_graphs(
    g: &Graph,
    h: &Graph,
    k: usize,
    variant: Variant,
) -> Result<Comparison, WlError> {
    match variant {
        Variant::Cr1 if k != 1 => return Err(WlError::VariantOrder { variant, k }),
        Variant::Wl | Variant::Fwl if k < 2 => return Err(WlError::VariantOrder { variant, k }),
        _ => {}
    }
    let mut out = Comparison {
        variant,
        k,
        rounds: 0,
        verdict: Verdict::Distinguished { round: 0 },
        histograms: Vec::new(),
    };
    if g.n() != h.n() {
        return Ok(out);
    }
    let cap = round_cap(g.n(), k)?;
    let mut interner = ColorInterner::new();
    let mut current = match variant {
        Variant::Cr1 => vertex_coloring_joint(&[g, h], &mut interner)?,
        _ => initial_coloring_joint(&[g, h], k, &mut interner)?,
    };
    let mut classes = joint_classes(&current);
    for round in 0..=cap {
        let hist = [current[0].histogram(), current[1].histogram()];
        let differ = hist[0] != hist[1];
        out.histograms.push(hist);
        out.rounds = round;
        if differ {
            out.verdict = Verdict::Distinguished { round };
            return Ok(out);
        }
        if round > 0 {
            let now = joint_classes(&current);
            if now == classes {
                out.verdict = Verdict::Indistinguishable {
                    stable_round: round,
                };
                return Ok(out);
            }
            classes = now;
        }
        let refs = [&current[0], &current[1]];
        current = match variant {
            Variant::Cr1 => refine_vertices_joint(&[g, h], &refs, &mut interner)?,
            Variant::Wl => wl_step_joint(&refs, &mut interner)?,
            Variant::Fwl => fwl_step_joint(&refs, &mut interner)?,
        };
    }
    Err(WlError::RoundLimit(cap))
}
