//! Exhaustive reference search and random instance generation.
//!
//! The brute-force search enumerates candidate feedback patterns by
//! cardinality, lexicographically within each level, and reports the
//! lowest level containing a pattern that leaves no structurally fixed
//! modes, together with every optimum at that level. It exists to check
//! the linear-time selection on small instances, so it refuses searches
//! whose candidate count would be impractical rather than attempt them.
//!
//! With the `parallel` feature the candidates of a level are tested on a
//! rayon pool; results are collected in enumeration order, so the outcome
//! is identical to the sequential search.

use crate::sfm::check_no_sfm;
use crate::system::{FeedbackPattern, StructuredMatrix, StructuredSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Hard ceiling on the number of candidates one search may test.
const CANDIDATE_BUDGET: u128 = 1 << 22;

/// Failures of the brute-force search and the instance generator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    /// More candidate links than the bitmask representation supports.
    #[error("the pattern has {links} candidate links; exhaustive search supports at most 64")]
    PatternTooLarge { links: usize },
    /// The requested search would test more candidates than the budget.
    #[error(
        "searching up to cardinality {max_cardinality} means {candidates} candidates, \
         over the budget of {budget}; lower the cardinality bound or shrink the system"
    )]
    BudgetExceeded {
        max_cardinality: usize,
        candidates: u128,
        budget: u128,
    },
    /// Generated systems must have at least one state.
    #[error("cannot generate a system with zero states")]
    EmptySystem,
    /// Edge probabilities live in [0, 1].
    #[error("edge probability {value} is not within [0, 1]")]
    InvalidProbability { value: f64 },
}

/// Outcome of a brute-force search.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Smallest cardinality that avoids fixed modes, if any level up to
    /// the bound contains one.
    pub min_cardinality: Option<usize>,
    /// Every pattern of that cardinality that avoids fixed modes, in
    /// lexicographic order.
    pub all_optima: Vec<FeedbackPattern>,
    /// Number of candidates tested: all levels through the winning one,
    /// or every level up to the bound when none wins.
    pub explored: usize,
}

/// Finds the minimum-cardinality feedback patterns avoiding structurally
/// fixed modes by exhaustive search up to `max_cardinality` links.
///
/// Uses the rayon pool when the `parallel` feature is on; the result is
/// identical to [`brute_force_min_feedback_seq`] either way.
pub fn brute_force_min_feedback(
    sys: &StructuredSystem,
    max_cardinality: usize,
) -> Result<OracleResult, OracleError> {
    #[cfg(feature = "parallel")]
    {
        drive(sys, max_cardinality, winners_par)
    }
    #[cfg(not(feature = "parallel"))]
    {
        drive(sys, max_cardinality, winners_seq)
    }
}

/// Sequential reference search; see [`brute_force_min_feedback`].
pub fn brute_force_min_feedback_seq(
    sys: &StructuredSystem,
    max_cardinality: usize,
) -> Result<OracleResult, OracleError> {
    drive(sys, max_cardinality, winners_seq)
}

fn drive(
    sys: &StructuredSystem,
    max_cardinality: usize,
    winners_of: fn(&StructuredSystem, &[u64]) -> Vec<u64>,
) -> Result<OracleResult, OracleError> {
    let links = sys.input_count() * sys.output_count();
    if links > 64 {
        return Err(OracleError::PatternTooLarge { links });
    }
    let max_cardinality = max_cardinality.min(links);
    let candidates = candidate_count(links, max_cardinality);
    if candidates > CANDIDATE_BUDGET {
        return Err(OracleError::BudgetExceeded {
            max_cardinality,
            candidates,
            budget: CANDIDATE_BUDGET,
        });
    }

    let mut explored = 0usize;
    for cardinality in 0..=max_cardinality {
        let level = level_candidates(links, cardinality);
        explored += level.len();
        let winners = winners_of(sys, &level);
        if !winners.is_empty() {
            return Ok(OracleResult {
                min_cardinality: Some(cardinality),
                all_optima: winners.iter().map(|&mask| pattern_of(sys, mask)).collect(),
                explored,
            });
        }
    }
    Ok(OracleResult {
        min_cardinality: None,
        all_optima: Vec::new(),
        explored,
    })
}

fn winners_seq(sys: &StructuredSystem, level: &[u64]) -> Vec<u64> {
    level
        .iter()
        .copied()
        .filter(|&mask| avoids_fixed_modes(sys, mask))
        .collect()
}

#[cfg(feature = "parallel")]
fn winners_par(sys: &StructuredSystem, level: &[u64]) -> Vec<u64> {
    use rayon::prelude::*;
    let flags: Vec<bool> = level
        .par_iter()
        .map(|&mask| avoids_fixed_modes(sys, mask))
        .collect();
    level
        .iter()
        .zip(flags)
        .filter_map(|(&mask, ok)| ok.then_some(mask))
        .collect()
}

fn avoids_fixed_modes(sys: &StructuredSystem, mask: u64) -> bool {
    check_no_sfm(sys, &pattern_of(sys, mask))
        .expect("pattern dimensions match the system")
        .no_sfm
}

/// Decodes a candidate bitmask over row-major (input, output) positions.
fn pattern_of(sys: &StructuredSystem, mask: u64) -> FeedbackPattern {
    let (m, p) = (sys.input_count(), sys.output_count());
    let entries = (0..m * p)
        .filter(|&pos| mask >> pos & 1 == 1)
        .map(|pos| (pos / p, pos % p));
    FeedbackPattern::from_entries(m, p, entries).expect("positions are in range")
}

/// All cardinality-`k` subsets of `0..links` as bitmasks, lexicographic by
/// ascending position tuple.
fn level_candidates(links: usize, k: usize) -> Vec<u64> {
    if k > links {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().fold(0u64, |mask, &i| mask | (1u64 << i)));
        let Some(pos) = (0..k).rev().find(|&pos| idx[pos] != links - k + pos) else {
            return out;
        };
        idx[pos] += 1;
        for later in pos + 1..k {
            idx[later] = idx[later - 1] + 1;
        }
    }
}

/// Total candidates across levels `0..=max_cardinality`, saturating.
fn candidate_count(links: usize, max_cardinality: usize) -> u128 {
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for k in 0..=max_cardinality {
        total = total.saturating_add(level);
        level = level.saturating_mul((links - k) as u128) / (k as u128 + 1);
    }
    total
}

/// Random system with identity input/output patterns, a self-loop on
/// every state and independent off-diagonal entries. Deterministic in the
/// seed.
pub fn generate_random_system(
    state_count: usize,
    edge_probability: f64,
    seed: u64,
) -> Result<StructuredSystem, OracleError> {
    if state_count == 0 {
        return Err(OracleError::EmptySystem);
    }
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(OracleError::InvalidProbability {
            value: edge_probability,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries: Vec<(usize, usize)> = (0..state_count).map(|i| (i, i)).collect();
    for i in 0..state_count {
        for j in 0..state_count {
            if i != j && rng.gen::<f64>() < edge_probability {
                entries.push((i, j));
            }
        }
    }
    let a = StructuredMatrix::new(state_count, state_count, entries).expect("entries in range");
    Ok(StructuredSystem::new(
        a,
        StructuredMatrix::identity(state_count),
        StructuredMatrix::identity(state_count),
    )
    .expect("identity patterns match the state count"))
}
