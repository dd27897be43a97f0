//! From a balanced bipartite restricted polymatrix game to a square
//! {0,1,2,8}-valued bimatrix game, and back on equilibria.
//!
//! The row player's first 2n actions simulate the n left-side players (a
//! pair of primary actions per player), mirrored for the column player. The
//! last n+2 secondary actions form a generalized matching-pennies structure
//! that forces near-uniform mixing over primary index pairs, leaving the
//! choice inside each pair governed by the embedded polymatrix payoffs.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::games::BimatrixGame;
use crate::matrix::Mat;
use crate::polymatrix::{
    validate_restricted, EdgeMatrix, PolyPlayer, PolymatrixProfile, RestrictedPolymatrixGame,
    Side,
};
use crate::rat::{int, ratio, Rat};

/// The large payoff: strictly more than the maximum utility 2 * 2 a player
/// can collect from two incoming edges.
pub const BIG_K: i64 = 8;

/// Dummy players appended by [`balance_bipartition`], in order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PaddingRecord {
    pub rounds: usize,
    pub added_left: Vec<String>,
    pub added_right: Vec<String>,
}

impl PaddingRecord {
    pub fn is_empty(&self) -> bool {
        self.rounds == 0
    }
}

/// Index layout of the constructed game. Primary action `(i, t)` sits at
/// position `2i + t`; the secondary action with index `s` (an element of
/// `[N] \ [n]`, `N = 2n + 2`) sits at position `n + s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2BimatrixLayout {
    /// Players per side after padding.
    pub n: usize,
    /// Actions per player: 3n + 2.
    pub m: usize,
    /// Index count: 2n + 2.
    pub big_n: usize,
    pub k: i64,
    /// Player indices (into the padded game) simulated by the row player, in
    /// primary-index order; originals come before dummies.
    pub left_players: Vec<usize>,
    /// Same for the column player.
    pub right_players: Vec<usize>,
    /// Number of players of the unpadded game (a prefix of the padded one).
    pub original_players: usize,
    pub padding: PaddingRecord,
}

fn fresh_name(taken: &mut alloc::collections::BTreeSet<String>, base: &str) -> String {
    let mut counter = 0usize;
    loop {
        let candidate = format!("{base}{counter}");
        counter += 1;
        if taken.insert(candidate.clone()) {
            return candidate;
        }
    }
}

/// Equalizes the two sides by repeatedly adding two players to the smaller
/// side and one to the larger, wired pairwise with 2x2 identity matrices in
/// both directions. Original players and their edges are untouched.
pub fn balance_bipartition(
    g: &RestrictedPolymatrixGame,
) -> Result<(RestrictedPolymatrixGame, PaddingRecord), Error> {
    let validation = validate_restricted(g);
    if !validation.passed() {
        return Err(Error::InvalidInstance(validation));
    }
    let mut out = g.clone();
    let mut record = PaddingRecord::default();
    let mut taken: alloc::collections::BTreeSet<String> =
        out.players.iter().map(|p| p.name.clone()).collect();
    loop {
        let left = out.side_players(Side::L).len();
        let right = out.side_players(Side::R).len();
        if left == right {
            break;
        }
        let (small, large) = if left < right {
            (Side::L, Side::R)
        } else {
            (Side::R, Side::L)
        };
        let i = out.players.len();
        out.players.push(PolyPlayer {
            name: fresh_name(&mut taken, "pad"),
            side: small,
        });
        let i_prime = out.players.len();
        out.players.push(PolyPlayer {
            name: fresh_name(&mut taken, "pad"),
            side: small,
        });
        let j = out.players.len();
        out.players.push(PolyPlayer {
            name: fresh_name(&mut taken, "pad"),
            side: large,
        });
        for (a, b) in [(i, j), (i_prime, j)] {
            out.edges.insert((a, b), EdgeMatrix::identity());
            out.edges.insert((b, a), EdgeMatrix::identity());
        }
        let (small_names, large_name) = (
            [out.players[i].name.clone(), out.players[i_prime].name.clone()],
            out.players[j].name.clone(),
        );
        match small {
            Side::L => {
                record.added_left.extend(small_names);
                record.added_right.push(large_name);
            }
            Side::R => {
                record.added_right.extend(small_names);
                record.added_left.push(large_name);
            }
        }
        record.rounds += 1;
    }
    let check = validate_restricted(&out);
    if !check.passed() {
        return Err(Error::Invariant(format!(
            "padding produced an invalid game: {check}"
        )));
    }
    Ok((out, record))
}

fn edge_value(g: &RestrictedPolymatrixGame, to: usize, from: usize, own: usize, other: usize) -> Rat {
    g.edges
        .get(&(to, from))
        .map(|m| m.e[own][other].clone())
        .unwrap_or_else(Rat::zero)
}

fn modulo(a: i64, n: i64) -> i64 {
    ((a % n) + n) % n
}

/// Builds the m x m bimatrix game for a balanced restricted polymatrix game.
pub fn build(
    g: &RestrictedPolymatrixGame,
    padding: PaddingRecord,
    original_players: usize,
) -> Result<(BimatrixGame, Poly2BimatrixLayout), Error> {
    let left = g.side_players(Side::L);
    let right = g.side_players(Side::R);
    if left.len() != right.len() {
        return Err(Error::Precondition(format!(
            "sides must be balanced, got {} and {}",
            left.len(),
            right.len()
        )));
    }
    let n = left.len();
    let m = 3 * n + 2;
    let big_n = 2 * n + 2;
    let k = int(BIG_K);
    let one = int(1);

    // Positions 0..2n hold primary pairs, 2n..m the n+2 secondary indices.
    // index_of[pos]: the index in [N] this position belongs to.
    let index_of = |pos: usize| -> usize {
        if pos < 2 * n {
            pos / 2
        } else {
            n + (pos - 2 * n)
        }
    };
    let bit_of = |pos: usize| -> Option<usize> { (pos < 2 * n).then_some(pos % 2) };

    let mut a = Mat::zero(m, m);
    let mut b = Mat::zero(m, m);
    for row in 0..m {
        let i = index_of(row) as i64;
        for col in 0..m {
            let j = index_of(col) as i64;
            let d = modulo(j - i, big_n as i64);
            match (bit_of(row), bit_of(col)) {
                (Some(s), Some(t)) => {
                    let li = left[row / 2];
                    let rj = right[col / 2];
                    a.set(row, col, edge_value(g, li, rj, s, t));
                    b.set(row, col, edge_value(g, rj, li, t, s));
                }
                (Some(_), None) => {
                    if d == n as i64 + 1 {
                        a.set(row, col, one.clone());
                    }
                    if d == n as i64 + 2 {
                        b.set(row, col, k.clone());
                    }
                }
                (None, Some(_)) => {
                    if d == n as i64 + 1 {
                        a.set(row, col, k.clone());
                    }
                    if d == n as i64 + 2 {
                        b.set(row, col, one.clone());
                    }
                }
                (None, None) => {
                    if d == n as i64 + 1 {
                        a.set(row, col, one.clone());
                    }
                    if d == n as i64 + 2 {
                        b.set(row, col, one.clone());
                    }
                }
            }
        }
    }

    let layout = Poly2BimatrixLayout {
        n,
        m,
        big_n,
        k: BIG_K,
        left_players: left,
        right_players: right,
        original_players,
        padding,
    };
    Ok((BimatrixGame::new(a, b)?, layout))
}

/// Convenience: pads and builds in one step, recording the padding.
pub fn balance_and_build(
    g: &RestrictedPolymatrixGame,
) -> Result<(BimatrixGame, Poly2BimatrixLayout), Error> {
    let original_players = g.players.len();
    let (padded, padding) = balance_bipartition(g)?;
    build(&padded, padding, original_players)
}

/// Maps an eps-WSNE of the bimatrix game to a profile of the *original*
/// (unpadded) polymatrix game together with the guarantee `delta = 3KN eps`.
/// Requires `eps < 1/(6KN)`, the regime in which every primary index is
/// played with positive probability, so `p_i = x_{i1}/x_i` is well defined.
pub fn translate_back(
    layout: &Poly2BimatrixLayout,
    profile: &crate::games::MixedProfile,
    eps: &Rat,
) -> Result<(PolymatrixProfile, Rat), Error> {
    if eps < &Rat::zero() {
        return Err(Error::Precondition("eps must be nonnegative".into()));
    }
    let bound = ratio(1, 6 * layout.k * layout.big_n as i64);
    if *eps >= bound {
        return Err(Error::Threshold(format!(
            "eps = {eps} is not below 1/(6KN) = {bound}"
        )));
    }
    if profile.x.len() != layout.m || profile.y.len() != layout.m {
        return Err(Error::Dimension(format!(
            "profile is {}x{}, layout expects {}x{}",
            profile.x.len(),
            profile.y.len(),
            layout.m,
            layout.m
        )));
    }
    let pair_share = |v: &[Rat], i: usize| -> Result<Rat, Error> {
        let mass = &v[2 * i] + &v[2 * i + 1];
        if mass.is_zero() {
            return Err(Error::DegenerateMass(i));
        }
        Ok(&v[2 * i + 1] / &mass)
    };
    // In the validated regime every index carries positive mass (the
    // positive-probability lemma); any zero mass means the profile was not
    // an eps-WSNE of the constructed game in the first place. Primary pairs
    // are checked first (their ratios are what the map computes), then the
    // secondary actions.
    for side in [&profile.x, &profile.y] {
        for i in 0..layout.n {
            pair_share(side, i)?;
        }
        for (offset, value) in side[2 * layout.n..].iter().enumerate() {
            if value.is_zero() {
                return Err(Error::DegenerateMass(layout.n + offset));
            }
        }
    }
    let mut values = alloc::vec![Rat::zero(); layout.original_players];
    for (i, &player) in layout.left_players.iter().enumerate() {
        if player < layout.original_players {
            values[player] = pair_share(&profile.x, i)?;
        } else {
            pair_share(&profile.x, i)?; // still must be well defined
        }
    }
    for (j, &player) in layout.right_players.iter().enumerate() {
        if player < layout.original_players {
            values[player] = pair_share(&profile.y, j)?;
        } else {
            pair_share(&profile.y, j)?;
        }
    }
    let delta = int(3 * layout.k * layout.big_n as i64) * eps;
    Ok((PolymatrixProfile::new(values)?, delta))
}

/// Probability mass per index (primary pairs summed), for checking the
/// uniform-mixing properties of equilibria.
pub fn index_masses(layout: &Poly2BimatrixLayout, v: &[Rat]) -> Vec<Rat> {
    let mut out = Vec::with_capacity(layout.big_n);
    for i in 0..layout.n {
        out.push(&v[2 * i] + &v[2 * i + 1]);
    }
    for pos in 2 * layout.n..layout.m {
        out.push(v[pos].clone());
    }
    out
}
