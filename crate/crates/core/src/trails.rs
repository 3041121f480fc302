//! Promising-differential extraction, deterministic trail generation and
//! scoring.
//!
//! Trail rows are the states *after* each model round: row 0 is the first
//! updated state and the injected input is not listed. The row weight is
//! `hw(ΔL ^ ΔR)` of that row and the total is their integer sum;
//! probabilities `2^-w` only appear when rendering.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diff::paper_round_propagate;
use crate::error::{Error, Result};
use crate::experiments::HwExperiment;
use crate::pddt::DiffTriple;
use crate::word::{hw, DiffState, WordSize};

/// Default trail length; 18 is the alternative round count.
pub const DEFAULT_TRAIL_ROUNDS: usize = 20;

/// Block size of SIMON32 in bits.
pub const SIMON32_BLOCK_BITS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailRow {
    pub round: usize,
    pub state: DiffState,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trail {
    pub start: DiffState,
    pub rows: Vec<TrailRow>,
    pub total_weight: u32,
}

impl Trail {
    pub fn log2p(&self) -> i64 {
        -(self.total_weight as i64)
    }

    pub fn probability(&self) -> f64 {
        (-(self.total_weight as f64)).exp2()
    }

    /// Writes `round,dL,dR,log2p` rows and a `total,,,-W` trailer.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "round,dL,dR,log2p")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{:#06x},{:#06x},{}",
                r.round,
                r.state.dl,
                r.state.dr,
                -(r.weight as i64)
            )?;
        }
        writeln!(w, "total,,,{}", self.log2p())
    }
}

/// Iterates the deterministic round model from `(a, b)` for `rounds` rounds.
pub fn generate_trail(d: &DiffTriple, rounds: usize, ws: WordSize) -> Trail {
    trail_from_state(DiffState::new(d.a, d.b), rounds, ws)
}

pub fn trail_from_state(start: DiffState, rounds: usize, ws: WordSize) -> Trail {
    let mut rows = Vec::with_capacity(rounds);
    let mut s = start;
    for round in 0..rounds {
        s = paper_round_propagate(s, ws).0;
        rows.push(TrailRow {
            round,
            state: s,
            weight: s.xor_weight(),
        });
    }
    let total_weight = rows.iter().map(|r| r.weight).sum();
    Trail {
        start,
        rows,
        total_weight,
    }
}

/// A repeated state along the model orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    /// Number of model rounds before the cycle is entered.
    pub offset: usize,
    pub length: usize,
}

/// Finds the first repeated state when iterating the model from `start`,
/// looking at most `max_steps` rounds ahead.
pub fn detect_cycle(start: DiffState, ws: WordSize, max_steps: usize) -> Option<Cycle> {
    let mut seen = HashMap::new();
    let mut s = start;
    for step in 0..=max_steps {
        if let Some(&first) = seen.get(&s) {
            return Some(Cycle {
                offset: first,
                length: step - first,
            });
        }
        seen.insert(s, step);
        s = paper_round_propagate(s, ws).0;
    }
    None
}

/// Distinguishing power of a trail against a random permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Distinguisher,
    Boundary,
    None,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Distinguisher => "distinguisher",
            Verdict::Boundary => "boundary",
            Verdict::None => "none",
        })
    }
}

pub fn distinguisher_check(t: &Trail, block_bits: u32) -> Verdict {
    match t.total_weight.cmp(&block_bits) {
        std::cmp::Ordering::Less => Verdict::Distinguisher,
        std::cmp::Ordering::Equal => Verdict::Boundary,
        std::cmp::Ordering::Greater => Verdict::None,
    }
}

/// Which HW measure decides whether a significant differential is promising.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PromisingMetric {
    /// `hw(a ^ b) + hw(c)`: model weight of the injected state plus the
    /// weight of the addition output difference. Zero exactly when the
    /// differential leaves no observable difference.
    #[default]
    Transition,
    /// Per-trial HW of an experiment (see [`HwExperiment`]); the observed
    /// value is the best (smallest) trial.
    Experiment,
}

impl FromStr for PromisingMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transition" => Ok(PromisingMetric::Transition),
            "experiment" => Ok(PromisingMetric::Experiment),
            _ => Err(Error::InvalidArgument(format!(
                "unknown promising metric {s:?}"
            ))),
        }
    }
}

impl fmt::Display for PromisingMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PromisingMetric::Transition => "transition",
            PromisingMetric::Experiment => "experiment",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromisingDiff {
    pub triple: DiffTriple,
    pub observed_hw: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct ExtractOptions {
    pub hw_threshold: u32,
    pub metric: PromisingMetric,
    /// Keep the all-zero differential, which always has HW 0.
    pub include_trivial: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            hw_threshold: 0,
            metric: PromisingMetric::Transition,
            include_trivial: false,
        }
    }
}

pub fn transition_hw(d: &DiffTriple) -> u32 {
    hw(d.a ^ d.b) + hw(d.c)
}

/// Members of `sig` whose observed HW is at most `opts.hw_threshold`, sorted
/// by HW and then canonically. `exp` is used by
/// [`PromisingMetric::Experiment`].
pub fn extract_promising(
    sig: &[DiffTriple],
    opts: &ExtractOptions,
    exp: &HwExperiment,
) -> Result<Vec<PromisingDiff>> {
    let observed: Vec<Option<PromisingDiff>> = sig
        .par_iter()
        .map(|d| {
            if !opts.include_trivial && d.a == 0 && d.b == 0 && d.c == 0 {
                return Ok(None);
            }
            let observed_hw = match opts.metric {
                PromisingMetric::Transition => transition_hw(d),
                PromisingMetric::Experiment => exp.run(d)?.into_iter().min().unwrap_or(0),
            };
            Ok((observed_hw <= opts.hw_threshold).then_some(PromisingDiff {
                triple: *d,
                observed_hw,
            }))
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<PromisingDiff> = observed.into_iter().flatten().collect();
    out.sort_by(|x, y| {
        x.observed_hw
            .cmp(&y.observed_hw)
            .then_with(|| x.triple.canonical_cmp(&y.triple))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedTrail {
    pub promising: PromisingDiff,
    pub trail: Trail,
}

/// Generates a trail per promising differential and ranks them by total
/// weight. Ties keep the order in which the pDDT recursion produces the
/// triples (LSB-first), so the MSB differential leads its power-of-two peers.
pub fn trail_report(diffs: &[PromisingDiff], rounds: usize, ws: WordSize) -> Vec<RankedTrail> {
    let mut ranked: Vec<RankedTrail> = diffs
        .par_iter()
        .map(|p| RankedTrail {
            promising: *p,
            trail: generate_trail(&p.triple, rounds, ws),
        })
        .collect();
    ranked.sort_by(|x, y| {
        x.trail
            .total_weight
            .cmp(&y.trail.total_weight)
            .then_with(|| x.promising.triple.generation_cmp(&y.promising.triple, ws))
    });
    ranked
}

/// A published SIMON32 distinguisher, for the comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorResult {
    pub cipher: &'static str,
    pub rounds: u32,
    pub log2p: f64,
    pub year: u32,
    pub reference: &'static str,
}

/// Earlier SIMON32 differential distinguishers.
pub const PRIOR_RESULTS: [PriorResult; 8] = [
    PriorResult {
        cipher: "SIMON32",
        rounds: 13,
        log2p: -29.69,
        year: 2009,
        reference: "Cazenave",
    },
    PriorResult {
        cipher: "SIMON32",
        rounds: 13,
        log2p: -30.2,
        year: 2015,
        reference: "Abed et al.",
    },
    PriorResult {
        cipher: "SIMON32",
        rounds: 14,
        log2p: -30.81,
        year: 2015,
        reference: "Kölbl et al.",
    },
    PriorResult {
        cipher: "SIMON32",
        rounds: 11,
        log2p: -30.0,
        year: 2017,
        reference: "Liu et al.",
    },
    PriorResult {
        cipher: "SIMON32",
        rounds: 15,
        log2p: -32.0,
        year: 2023,
        reference: "Dwivedi et al.",
    },
    PriorResult {
        cipher: "SIMON32",
        rounds: 9,
        log2p: -30.82,
        year: 2024,
        reference: "Qiao et al.",
    },
    PriorResult {
        cipher: "SIMON32",
        rounds: 17,
        log2p: -68.83,
        year: 2024,
        reference: "Qiao et al.",
    },
    PriorResult {
        cipher: "SIMON32",
        rounds: 15,
        log2p: -32.0,
        year: 2024,
        reference: "Cook et al.",
    },
];
