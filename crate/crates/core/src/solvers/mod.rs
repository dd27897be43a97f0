//! Exact equilibrium computation, used as the verification oracle for the
//! reduction chain: support enumeration for small games, Lemke-Howson with
//! exact rational lexicographic pivoting for the larger pipeline outputs.

use alloc::vec::Vec;

use crate::games::MixedProfile;
use crate::rat::Rat;

mod lemke;
mod linsys;
mod support;

pub use lemke::{lemke_howson, lemke_howson_with_config, LemkeHowsonConfig};
pub use linsys::solve_unique;
pub use support::{support_enumeration, support_enumeration_with_config, SupportEnumConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    SupportEnum,
    LemkeHowson,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveStats {
    pub supports_examined: u64,
    pub pivots: u64,
    /// Positivity shift applied to both payoff matrices (Lemke-Howson only).
    pub shift: Option<Rat>,
}

/// Equilibria found by a solver. Every returned profile satisfies
/// `verify_wsne(game, profile, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub equilibria: Vec<MixedProfile>,
    pub method: SolveMethod,
    pub stats: SolveStats,
}
