//! Small named systems shared by tests, benches and examples.
//!
//! All of them have identity input/output patterns and self-loops on every
//! state, so they satisfy the selection precondition.

use crate::system::{FeedbackPattern, StructuredMatrix, StructuredSystem};

fn dedicated(n: usize, extra: &[(usize, usize)]) -> StructuredSystem {
    let entries = (0..n).map(|i| (i, i)).chain(extra.iter().copied());
    let a = StructuredMatrix::new(n, n, entries).expect("entries are in range");
    StructuredSystem::new(a, StructuredMatrix::identity(n), StructuredMatrix::identity(n))
        .expect("dimensions agree")
}

/// Nine states forming three disjoint directed 3-chains
/// (x1->x2->x3, x4->x5->x6, x7->x8->x9).
pub fn three_chains() -> StructuredSystem {
    dedicated(9, &[(1, 0), (2, 1), (4, 3), (5, 4), (7, 6), (8, 7)])
}

/// Closes each 3-chain onto itself: u1 from y3, u4 from y6, u7 from y9.
/// Three separate feedback-carrying components.
pub fn three_chains_feedback_local() -> FeedbackPattern {
    FeedbackPattern::from_entries(9, 9, [(0, 2), (3, 5), (6, 8)]).expect("entries are in range")
}

/// Chains 1 and 2 feed each other crosswise; chain 3 stays local.
/// Two feedback-carrying components.
pub fn three_chains_feedback_cross() -> FeedbackPattern {
    FeedbackPattern::from_entries(9, 9, [(0, 5), (3, 2), (6, 8)]).expect("entries are in range")
}

/// The three chains close into one big cycle: a single component.
pub fn three_chains_feedback_cycle() -> FeedbackPattern {
    FeedbackPattern::from_entries(9, 9, [(0, 8), (3, 2), (6, 5)]).expect("entries are in range")
}

/// Seven states, two chains merging into x7:
/// x1->x2->{x3, x4->x7} and x5->x6->x7.
pub fn merging_chains() -> StructuredSystem {
    dedicated(7, &[(1, 0), (2, 1), (3, 1), (6, 3), (5, 4), (6, 5)])
}

/// A sparsest pattern for [`merging_chains`]: u1 from y7 and u5 from y3.
pub fn merging_chains_feedback() -> FeedbackPattern {
    FeedbackPattern::from_entries(7, 7, [(0, 6), (4, 2)]).expect("entries are in range")
}

/// A single directed chain x1 -> x2 -> ... -> xn.
pub fn chain_system(n: usize) -> StructuredSystem {
    let extra: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i + 1, i)).collect();
    dedicated(n, &extra)
}
