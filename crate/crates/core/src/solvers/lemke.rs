//! Lemke-Howson with exact rational arithmetic.
//!
//! Works on the standard pair of best-response polyhedra
//! `P = {x >= 0 : B'ᵀx <= 1}` and `Q = {y >= 0 : A'y <= 1}` after shifting
//! both payoff matrices to be strictly positive (the shift does not change
//! best responses). Pivoting is complementary: dropping one label traces the
//! almost-completely-labeled path until the dropped label is re-covered.
//! Degeneracy is resolved with the lexicographic ratio test over the full
//! tableau rows, so every pivot is uniquely determined and the path cannot
//! cycle.
//!
//! The tableau is kept fraction-free: entries are integers equal to the true
//! rational dictionary scaled by the previous pivot element `d` (Bareiss
//! form), so every division is exact and no gcd normalization happens in the
//! inner loop.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::games::{verify_wsne, BimatrixGame, MixedProfile};
use crate::rat::{int, Rat};
use crate::solvers::{SolveMethod, SolveResult, SolveStats};

#[derive(Debug, Clone)]
pub struct LemkeHowsonConfig {
    pub max_pivots: u64,
}

impl Default for LemkeHowsonConfig {
    fn default() -> Self {
        LemkeHowsonConfig {
            max_pivots: 1_000_000,
        }
    }
}

/// One dictionary. Variable ids are global: in the row player's tableau,
/// id `i < m` is `x_i` and id `m + j` is the column slack `s_j`; in the
/// column player's tableau, id `i < m` is the row slack `r_i` and id
/// `m + j` is `y_j`. A variable and its complement share an id across the
/// two tableaux, and the id is also the variable's label.
struct Tableau {
    /// rows x (1 + nvars), integer entries: `d` times the true dictionary.
    m: Vec<Vec<BigInt>>,
    basis: Vec<usize>,
    /// The previous pivot element; all entries are divisible through it on
    /// the next pivot. Always positive.
    d: BigInt,
}

impl Tableau {
    /// Basis starts as the slack variables `slack_ids[row]`; `coeff(row,
    /// var)` fills the structural columns. Each equation row is scaled by
    /// the lcm of its denominators so the tableau is integral.
    fn new(
        nrows: usize,
        nvars: usize,
        slack_ids: &[usize],
        coeff: impl Fn(usize, usize) -> Rat,
    ) -> Self {
        let mut m = Vec::with_capacity(nrows);
        for row in 0..nrows {
            let values: Vec<Rat> = (0..nvars)
                .map(|var| {
                    if var == slack_ids[row] {
                        int(1)
                    } else {
                        coeff(row, var)
                    }
                })
                .collect();
            let mut scale = BigInt::one();
            for v in &values {
                scale = num_integer::lcm(scale, v.denom().clone());
            }
            let mut r = Vec::with_capacity(nvars + 1);
            r.push(scale.clone()); // rhs = 1, scaled
            for v in &values {
                r.push(v.numer() * (&scale / v.denom()));
            }
            m.push(r);
        }
        Tableau {
            m,
            basis: slack_ids.to_vec(),
            d: BigInt::one(),
        }
    }

    /// Lexicographic min-ratio row for the entering column: the minimum of
    /// `rhs/coeff` with ties refined column by column over the whole
    /// tableau. Ties cannot survive to the end because tableau rows stay
    /// linearly independent.
    fn ratio_row(&self, entering: usize) -> Option<usize> {
        let col = entering + 1;
        let mut tied: Vec<usize> = (0..self.m.len())
            .filter(|&r| self.m[r][col].is_positive())
            .collect();
        if tied.is_empty() {
            return None;
        }
        let width = self.m[0].len();
        for c in 0..width {
            if tied.len() == 1 {
                break;
            }
            // Keep the rows minimizing m[r][c]/m[r][col], comparing by
            // cross-multiplication (coefficients are positive).
            let mut best = alloc::vec![tied[0]];
            for &r in &tied[1..] {
                let champion = best[0];
                let lhs = &self.m[r][c] * &self.m[champion][col];
                let rhs = &self.m[champion][c] * &self.m[r][col];
                match lhs.cmp(&rhs) {
                    core::cmp::Ordering::Less => {
                        best.clear();
                        best.push(r);
                    }
                    core::cmp::Ordering::Equal => best.push(r),
                    core::cmp::Ordering::Greater => {}
                }
            }
            tied = best;
        }
        Some(tied[0])
    }

    /// Brings `entering` into the basis; returns the leaving variable id.
    /// Bareiss update: the pivot row is left as is; every other row becomes
    /// `(pivot * row - row[col] * pivot_row) / d`, an exact division.
    fn pivot(&mut self, entering: usize) -> Result<usize, Error> {
        let row = self.ratio_row(entering).ok_or_else(|| {
            Error::Invariant("Lemke-Howson ratio test found no blocking row".into())
        })?;
        let col = entering + 1;
        let width = self.m[0].len();
        let pivot_value = self.m[row][col].clone();
        for r in 0..self.m.len() {
            if r == row {
                continue;
            }
            let factor = core::mem::replace(&mut self.m[r][col], BigInt::zero());
            if factor.is_zero() {
                for c in 0..width {
                    if !self.m[r][c].is_zero() {
                        self.m[r][c] = &self.m[r][c] * &pivot_value / &self.d;
                    }
                }
            } else {
                for c in 0..width {
                    let scaled = &self.m[r][c] * &pivot_value - &factor * &self.m[row][c];
                    self.m[r][c] = scaled / &self.d;
                }
                // The entering column of a non-pivot row is exactly zero.
                self.m[r][col] = BigInt::zero();
            }
        }
        self.d = pivot_value;
        let leaving = self.basis[row];
        self.basis[row] = entering;
        Ok(leaving)
    }

    /// Unnormalized value of basic variable `id` (the rhs in Bareiss form;
    /// the common scale cancels on renormalization), zero if nonbasic.
    fn value_of(&self, id: usize) -> Rat {
        self.basis
            .iter()
            .position(|&b| b == id)
            .map(|row| Rat::from_integer(self.m[row][0].clone()))
            .unwrap_or_else(Rat::zero)
    }
}

/// Runs Lemke-Howson from the given initial label (`0..rows` are row labels,
/// `rows..rows+cols` column labels) and returns one exact equilibrium,
/// verified to have zero regret before returning.
pub fn lemke_howson(game: &BimatrixGame, initial_label: usize) -> Result<SolveResult, Error> {
    lemke_howson_with_config(game, initial_label, &LemkeHowsonConfig::default())
}

pub fn lemke_howson_with_config(
    game: &BimatrixGame,
    initial_label: usize,
    config: &LemkeHowsonConfig,
) -> Result<SolveResult, Error> {
    let (m, n) = game.dims();
    if initial_label >= m + n {
        return Err(Error::Precondition(alloc::format!(
            "initial label {initial_label} out of range for a {m}x{n} game"
        )));
    }

    // Positivity shift: 1 + |min entry|.
    let min_entry = game
        .a()
        .iter()
        .chain(game.b().iter())
        .min()
        .expect("nonempty game")
        .clone();
    let shift = int(1) + min_entry.abs();

    // Row player's tableau P over ids {x_i = i} u {s_j = m + j}: one
    // equation per column j of the game.
    let slack_p: Vec<usize> = (0..n).map(|j| m + j).collect();
    let mut p = Tableau::new(n, m + n, &slack_p, |row_eq, var| {
        if var < m {
            game.b().get(var, row_eq) + &shift
        } else {
            Rat::zero()
        }
    });
    // Column player's tableau Q over ids {r_i = i} u {y_j = m + j}: one
    // equation per row i.
    let slack_q: Vec<usize> = (0..m).collect();
    let mut q = Tableau::new(m, m + n, &slack_q, |row_eq, var| {
        if var >= m {
            game.a().get(row_eq, var - m) + &shift
        } else {
            Rat::zero()
        }
    });

    let mut entering = initial_label;
    let mut in_p = initial_label < m;
    let mut pivots = 0u64;
    loop {
        pivots += 1;
        if pivots > config.max_pivots {
            return Err(Error::Budget(alloc::format!(
                "pivot budget {} exhausted",
                config.max_pivots
            )));
        }
        let leaving = if in_p {
            p.pivot(entering)?
        } else {
            q.pivot(entering)?
        };
        if leaving == initial_label {
            break;
        }
        entering = leaving;
        in_p = !in_p;
    }

    let x_raw: Vec<Rat> = (0..m).map(|i| p.value_of(i)).collect();
    let y_raw: Vec<Rat> = (0..n).map(|j| q.value_of(m + j)).collect();
    let x = crate::games::renormalize(&x_raw)
        .map_err(|_| Error::Invariant("Lemke-Howson ended with an all-zero row strategy".into()))?;
    let y = crate::games::renormalize(&y_raw)
        .map_err(|_| Error::Invariant("Lemke-Howson ended with an all-zero column strategy".into()))?;
    let profile = MixedProfile::new(x, y)?;
    if !verify_wsne(game, &profile, &Rat::zero())? {
        return Err(Error::Invariant(
            "Lemke-Howson terminated on a profile with positive regret".into(),
        ));
    }
    Ok(SolveResult {
        equilibria: alloc::vec![profile],
        method: SolveMethod::LemkeHowson,
        stats: SolveStats {
            supports_examined: 0,
            pivots,
            shift: Some(shift),
        },
    })
}
