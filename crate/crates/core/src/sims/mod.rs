//! Column simulations: rewrite the columns of a payoff matrix that carry a
//! large payoff into blocks of columns and helper rows with smaller payoffs,
//! such that equilibria of the new game project back onto equilibria of the
//! old. Three kinds are used by the chain:
//!
//! * type one halves every payoff `K` (8 -> 4 -> 2),
//! * dual merges a row's two 2s into a single 2,
//! * type two splits a 2 into two 1s.
//!
//! All columns are simulated in parallel within one application. A
//! simulation runs on the row player's matrix `A`; applying it to the column
//! player means conjugating with [`transpose_swap`].

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::games::{transpose_swap, BimatrixGame, MixedProfile};
use crate::matrix::Mat;
use crate::rat::{int, ratio, Rat};

mod dual;
mod single;

pub use dual::{build_dual, encode_dual_pair, prepare_dual, PreparedDual};
pub use single::{
    build_type_one, build_type_two, encode_type_one, encode_type_two, prepare_type_one,
    prepare_type_two, PreparedSingle,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimKind {
    TypeOne,
    Dual,
    TypeTwo,
}

impl SimKind {
    pub fn name(&self) -> &'static str {
        match self {
            SimKind::TypeOne => "type-one",
            SimKind::Dual => "dual",
            SimKind::TypeTwo => "type-two",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimSide {
    Row,
    Column,
}

/// Bijections on the input's rows and columns applied before building;
/// `perm[new] = old`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationPair {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

impl PermutationPair {
    pub fn identity(rows: usize, cols: usize) -> Self {
        PermutationPair {
            row_perm: (0..rows).collect(),
            col_perm: (0..cols).collect(),
        }
    }
}

/// Everything needed to reverse one simulation. For `side == Column` all
/// fields are stored in the swapped orientation the simulation actually ran
/// in; the translate-back conjugates automatically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationRecord {
    pub kind: SimKind,
    pub side: SimSide,
    /// The detected large payoff (8 or 4); type one only.
    pub k_value: Option<i64>,
    /// Number of simulated columns (type one/two) or of two-2 rows (dual).
    pub k: usize,
    pub input_dims: (usize, usize),
    pub output_dims: (usize, usize),
    pub perm: PermutationPair,
    /// The eps the translate-back thresholds are built for; fixed at build
    /// time, and translate-back refuses a different value.
    pub eps: Rat,
}

impl SimulationRecord {
    pub fn with_eps(&self, eps: Rat) -> Self {
        SimulationRecord {
            eps,
            ..self.clone()
        }
    }

    /// Input dims in the unswapped orientation of the chain's games.
    pub fn game_input_dims(&self) -> (usize, usize) {
        match self.side {
            SimSide::Row => self.input_dims,
            SimSide::Column => (self.input_dims.1, self.input_dims.0),
        }
    }

    pub fn game_output_dims(&self) -> (usize, usize) {
        match self.side {
            SimSide::Row => self.output_dims,
            SimSide::Column => (self.output_dims.1, self.output_dims.0),
        }
    }

    /// The input-size parameter the translate-back theorems are stated in.
    pub fn regime_n(&self) -> usize {
        self.input_dims.0.max(self.input_dims.1)
    }

    /// Strict upper bound on eps for this simulation's translate-back:
    /// 1/(240 n^2) for type one, 1/(600 n^2) for dual, 1/(96 n^2) for type
    /// two.
    pub fn regime_bound(&self) -> Rat {
        let n = self.regime_n() as i64;
        let c = match self.kind {
            SimKind::TypeOne => 240,
            SimKind::Dual => 600,
            SimKind::TypeTwo => 96,
        };
        ratio(1, c * n * n)
    }

    /// Per-step eps inflation used when composing translate-backs: the
    /// explicit 1200 n^2 for dual simulations, a configurable conservative
    /// envelope `c n^2` for the others.
    pub fn inflation(&self, envelope_c: i64) -> Rat {
        let n = self.regime_n() as i64;
        match self.kind {
            SimKind::Dual => int(1200 * n * n),
            SimKind::TypeOne | SimKind::TypeTwo => int(envelope_c * n * n),
        }
    }
}

/// Runs one simulation on the chosen side.
pub fn apply(
    kind: SimKind,
    side: SimSide,
    game: &BimatrixGame,
    eps: &Rat,
) -> Result<(BimatrixGame, SimulationRecord), Error> {
    match side {
        SimSide::Row => apply_row(kind, game, eps),
        SimSide::Column => {
            let swapped = transpose_swap(game);
            let (built, mut record) = apply_row(kind, &swapped, eps)?;
            record.side = SimSide::Column;
            Ok((transpose_swap(&built), record))
        }
    }
}

fn apply_row(
    kind: SimKind,
    game: &BimatrixGame,
    eps: &Rat,
) -> Result<(BimatrixGame, SimulationRecord), Error> {
    if eps < &Rat::zero() {
        return Err(Error::Precondition("eps must be nonnegative".into()));
    }
    match kind {
        SimKind::TypeOne => {
            let prepared = prepare_type_one(game)?;
            build_type_one(&prepared, eps)
        }
        SimKind::TypeTwo => {
            let prepared = prepare_type_two(game)?;
            build_type_two(&prepared, eps)
        }
        SimKind::Dual => {
            let prepared = prepare_dual(game)?;
            build_dual(&prepared, eps)
        }
    }
}

/// Maps an eps-WSNE of the built game back to a profile of the simulation's
/// input game. `eps` must equal the value stored in the record and lie below
/// the record's regime bound.
pub fn translate_back(
    record: &SimulationRecord,
    profile: &MixedProfile,
    eps: &Rat,
) -> Result<MixedProfile, Error> {
    if eps != &record.eps {
        return Err(Error::EpsMismatch);
    }
    if eps < &Rat::zero() {
        return Err(Error::Precondition("eps must be nonnegative".into()));
    }
    let bound = record.regime_bound();
    if *eps >= bound {
        return Err(Error::Threshold(alloc::format!(
            "eps = {eps} is not below the {} regime bound {bound}",
            record.kind.name()
        )));
    }
    match record.side {
        SimSide::Row => translate_row(record, profile),
        SimSide::Column => {
            let swapped = profile.swapped();
            let translated = translate_row(record, &swapped)?;
            Ok(translated.swapped())
        }
    }
}

fn translate_row(record: &SimulationRecord, profile: &MixedProfile) -> Result<MixedProfile, Error> {
    if profile.x.len() != record.output_dims.0 || profile.y.len() != record.output_dims.1 {
        return Err(Error::Dimension(alloc::format!(
            "profile is {}x{}, simulation output is {}x{}",
            profile.x.len(),
            profile.y.len(),
            record.output_dims.0,
            record.output_dims.1
        )));
    }
    match record.kind {
        SimKind::TypeOne | SimKind::TypeTwo => single::translate_single(record, profile),
        SimKind::Dual => dual::translate_dual(record, profile),
    }
}

/// Applies `perm[new] = old` maps back to the original ordering.
pub(crate) fn unpermute_profile(
    perm: &PermutationPair,
    x: Vec<Rat>,
    y: Vec<Rat>,
) -> Result<MixedProfile, Error> {
    let mut x_out = alloc::vec![Rat::zero(); x.len()];
    for (new, value) in x.into_iter().enumerate() {
        x_out[perm.row_perm[new]] = value;
    }
    let mut y_out = alloc::vec![Rat::zero(); y.len()];
    for (new, value) in y.into_iter().enumerate() {
        y_out[perm.col_perm[new]] = value;
    }
    MixedProfile::new(x_out, y_out)
}

/// Stable partition: indices satisfying the predicate first. Returns the
/// permutation (`perm[new] = old`) and the count of selected indices.
pub(crate) fn stable_partition(len: usize, selected: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
    let mut perm: Vec<usize> = (0..len).filter(|&i| selected(i)).collect();
    let k = perm.len();
    perm.extend((0..len).filter(|&i| !selected(i)));
    (perm, k)
}

pub(crate) fn permuted_game(game: &BimatrixGame, perm: &PermutationPair) -> BimatrixGame {
    BimatrixGame::new(
        game.a().permuted(&perm.row_perm, &perm.col_perm),
        game.b().permuted(&perm.row_perm, &perm.col_perm),
    )
    .expect("permutation preserves dimensions")
}

/// Block layout constants shared by the two single-column simulations:
/// (rows of S, columns of cb_1, exclusion threshold multiplier).
pub(crate) fn single_geometry(kind: SimKind) -> (usize, usize, i64) {
    match kind {
        SimKind::TypeOne => (2, 2, 11),
        SimKind::TypeTwo => (3, 3, 18),
        SimKind::Dual => unreachable!("dual has its own geometry"),
    }
}

pub(crate) fn s_matrix(kind: SimKind) -> Mat {
    match kind {
        SimKind::TypeOne => Mat::from_ints(&[&[2, 0], &[0, 1]]),
        SimKind::TypeTwo => Mat::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        SimKind::Dual => Mat::from_ints(&[&[1, 0, 0], &[0, 1, 1]]),
    }
}

pub(crate) fn t_matrix(kind: SimKind) -> Mat {
    match kind {
        SimKind::TypeOne => Mat::from_ints(&[&[0, 1], &[1, 0]]),
        SimKind::TypeTwo => Mat::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]),
        SimKind::Dual => unreachable!("dual uses T1/T2"),
    }
}
