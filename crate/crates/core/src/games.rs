//! Bimatrix games over exact rationals: payoffs, regret, WSNE verification,
//! player swapping, and renormalization.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::matrix::Mat;
use crate::rat::Rat;

/// A two-player strategic-form game `(A, B)`: `a[i][j]` pays the row player
/// and `b[i][j]` the column player when row `i` meets column `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BimatrixGame {
    a: Mat,
    b: Mat,
}

impl BimatrixGame {
    pub fn new(a: Mat, b: Mat) -> Result<Self, Error> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::Dimension(alloc::format!(
                "A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::Dimension("games must have at least one action per player".into()));
        }
        Ok(BimatrixGame { a, b })
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }
}

/// A mixed-strategy profile: `x` over rows and `y` over columns, each an
/// exact probability vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MixedProfile {
    pub x: Vec<Rat>,
    pub y: Vec<Rat>,
}

impl MixedProfile {
    pub fn new(x: Vec<Rat>, y: Vec<Rat>) -> Result<Self, Error> {
        check_distribution(&x)?;
        check_distribution(&y)?;
        Ok(MixedProfile { x, y })
    }

    /// Pure profile playing row `i` against column `j`.
    pub fn pure(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut x = alloc::vec![Rat::zero(); rows];
        let mut y = alloc::vec![Rat::zero(); cols];
        x[i] = Rat::from_integer(1.into());
        y[j] = Rat::from_integer(1.into());
        MixedProfile { x, y }
    }

    /// Swaps the two players' strategies, matching [`transpose_swap`].
    pub fn swapped(&self) -> Self {
        MixedProfile {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    pub fn support_x(&self) -> Vec<usize> {
        support(&self.x)
    }

    pub fn support_y(&self) -> Vec<usize> {
        support(&self.y)
    }
}

pub fn support(v: &[Rat]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, _)| i)
        .collect()
}

fn check_distribution(v: &[Rat]) -> Result<(), Error> {
    if v.is_empty() {
        return Err(Error::NotDistribution("empty vector".into()));
    }
    if v.iter().any(|p| p < &Rat::zero()) {
        return Err(Error::NotDistribution("negative entry".into()));
    }
    let sum: Rat = v.iter().fold(Rat::zero(), |acc, p| acc + p);
    if sum != Rat::from_integer(1.into()) {
        return Err(Error::NotDistribution(alloc::format!(
            "entries sum to {}, not 1",
            sum
        )));
    }
    Ok(())
}

fn check_dims(game: &BimatrixGame, profile: &MixedProfile) -> Result<(), Error> {
    if profile.x.len() != game.rows() || profile.y.len() != game.cols() {
        return Err(Error::Dimension(alloc::format!(
            "game is {}x{}, profile is {}x{}",
            game.rows(),
            game.cols(),
            profile.x.len(),
            profile.y.len()
        )));
    }
    Ok(())
}

/// Expected payoffs `(xᵀAy, xᵀBy)`.
pub fn eval_payoffs(game: &BimatrixGame, profile: &MixedProfile) -> Result<(Rat, Rat), Error> {
    check_dims(game, profile)?;
    let ay = game.a.mul_vec(&profile.y)?;
    let by = game.b.mul_vec(&profile.y)?;
    let dot = |v: &[Rat]| {
        v.iter()
            .zip(&profile.x)
            .filter(|(_, x)| !x.is_zero())
            .map(|(v, x)| v * x)
            .fold(Rat::zero(), |acc, t| acc + t)
    };
    Ok((dot(&ay), dot(&by)))
}

/// Per-pure-strategy expected payoffs: `A·y` for the row player.
pub fn row_payoffs(game: &BimatrixGame, y: &[Rat]) -> Result<Vec<Rat>, Error> {
    game.a.mul_vec(y)
}

/// Per-pure-strategy expected payoffs: `xᵀ·B` for the column player.
pub fn col_payoffs(game: &BimatrixGame, x: &[Rat]) -> Result<Vec<Rat>, Error> {
    game.b.vec_mul(x)
}

/// Exact regret data for a profile. `wsne_eps` is the smallest `eps` for
/// which the profile is an eps-WSNE (every supported pure strategy is an
/// eps-best response); `ne_eps` the smallest for which it is an eps-NE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegretReport {
    pub row_best: Rat,
    pub col_best: Rat,
    pub row_supported_min: Rat,
    pub col_supported_min: Rat,
    pub wsne_eps: Rat,
    pub ne_eps: Rat,
}

pub fn regret(game: &BimatrixGame, profile: &MixedProfile) -> Result<RegretReport, Error> {
    check_dims(game, profile)?;
    let ay = game.a.mul_vec(&profile.y)?;
    let xb = game.b.vec_mul(&profile.x)?;

    let max_of = |v: &[Rat]| v.iter().max().expect("nonempty").clone();
    let supported_min = |v: &[Rat], w: &[Rat]| {
        v.iter()
            .zip(w)
            .filter(|(_, p)| !p.is_zero())
            .map(|(val, _)| val)
            .min()
            .expect("distribution has support")
            .clone()
    };

    let row_best = max_of(&ay);
    let col_best = max_of(&xb);
    let row_supported_min = supported_min(&ay, &profile.x);
    let col_supported_min = supported_min(&xb, &profile.y);

    let row_value: Rat = ay
        .iter()
        .zip(&profile.x)
        .map(|(v, p)| v * p)
        .fold(Rat::zero(), |acc, t| acc + t);
    let col_value: Rat = xb
        .iter()
        .zip(&profile.y)
        .map(|(v, p)| v * p)
        .fold(Rat::zero(), |acc, t| acc + t);

    let wsne_row = &row_best - &row_supported_min;
    let wsne_col = &col_best - &col_supported_min;
    let ne_row = &row_best - &row_value;
    let ne_col = &col_best - &col_value;

    Ok(RegretReport {
        wsne_eps: wsne_row.clone().max(wsne_col.clone()),
        ne_eps: ne_row.clone().max(ne_col.clone()),
        row_best,
        col_best,
        row_supported_min,
        col_supported_min,
    })
}

/// True iff the profile is an `eps`-WSNE.
pub fn verify_wsne(game: &BimatrixGame, profile: &MixedProfile, eps: &Rat) -> Result<bool, Error> {
    if eps < &Rat::zero() {
        return Err(Error::Precondition("eps must be nonnegative".into()));
    }
    Ok(regret(game, profile)?.wsne_eps <= *eps)
}

/// True iff the profile is an `eps`-NE.
pub fn verify_ne(game: &BimatrixGame, profile: &MixedProfile, eps: &Rat) -> Result<bool, Error> {
    if eps < &Rat::zero() {
        return Err(Error::Precondition("eps must be nonnegative".into()));
    }
    Ok(regret(game, profile)?.ne_eps <= *eps)
}

/// Largest payoff difference between supported columns: the quantity bounded
/// by the per-simulation translate-back lemmas for the column player.
pub fn supported_col_spread(game: &BimatrixGame, profile: &MixedProfile) -> Result<Rat, Error> {
    check_dims(game, profile)?;
    let xb = game.b.vec_mul(&profile.x)?;
    spread_over_support(&xb, &profile.y)
}

/// Largest payoff difference between supported rows.
pub fn supported_row_spread(game: &BimatrixGame, profile: &MixedProfile) -> Result<Rat, Error> {
    check_dims(game, profile)?;
    let ay = game.a.mul_vec(&profile.y)?;
    spread_over_support(&ay, &profile.x)
}

fn spread_over_support(vals: &[Rat], probs: &[Rat]) -> Result<Rat, Error> {
    let supported: Vec<&Rat> = vals
        .iter()
        .zip(probs)
        .filter(|(_, p)| !p.is_zero())
        .map(|(v, _)| v)
        .collect();
    let max = supported.iter().max().ok_or(Error::ZeroMass)?;
    let min = supported.iter().min().ok_or(Error::ZeroMass)?;
    Ok(*max - *min)
}

/// `(Bᵀ, Aᵀ)`: swaps the two players. An involution.
pub fn transpose_swap(game: &BimatrixGame) -> BimatrixGame {
    BimatrixGame {
        a: game.b.transpose(),
        b: game.a.transpose(),
    }
}

/// Scales a nonnegative vector to sum to one.
pub fn renormalize(v: &[Rat]) -> Result<Vec<Rat>, Error> {
    if v.iter().any(|p| p < &Rat::zero()) {
        return Err(Error::NotDistribution("negative entry".into()));
    }
    let sum: Rat = v.iter().fold(Rat::zero(), |acc, p| acc + p);
    if sum.is_zero() {
        return Err(Error::ZeroMass);
    }
    Ok(v.iter().map(|p| p / &sum).collect())
}

/// Max payoff minus min payoff over both matrices; an a-priori bound on any
/// regret quantity.
pub fn payoff_spread(game: &BimatrixGame) -> Rat {
    let max = game.a.iter().chain(game.b.iter()).max().expect("nonempty");
    let min = game.a.iter().chain(game.b.iter()).min().expect("nonempty");
    max - min
}
