//! Support enumeration: the exhaustive exact oracle for small games.
//!
//! For every support pair we solve the indifference systems for each side
//! separately and collect the uniquely-determined nonnegative candidate
//! strategies. A cross pair (x, y) is an exact equilibrium iff supp(x) lies
//! in the best responses to y and vice versa, checked with precomputed
//! best-response bitmasks. Solving the sides independently also catches
//! degenerate equilibria whose two supports are pinned by different index
//! sets, which the games built by this crate produce routinely.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::games::{regret, BimatrixGame, MixedProfile};
use crate::matrix::Mat;
use crate::rat::Rat;
use crate::solvers::linsys::{bareiss_unique, solve_unique};
use crate::solvers::{SolveMethod, SolveResult, SolveStats};

#[derive(Debug, Clone)]
pub struct SupportEnumConfig {
    pub max_support: usize,
    /// Upper bound on support pairs examined.
    pub max_pairs: u64,
    /// Upper bound on candidate cross pairs checked.
    pub max_cross: u64,
}

impl Default for SupportEnumConfig {
    fn default() -> Self {
        SupportEnumConfig {
            max_support: usize::MAX,
            max_pairs: 40_000_000,
            max_cross: 200_000_000,
        }
    }
}

/// Number of nonempty subsets of an n-set with at most `max` elements.
fn count_subsets(n: usize, max: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64; // C(n, 0)
    for k in 1..=max.min(n) {
        binom = binom * (n - k + 1) as u64 / k as u64;
        total = total.saturating_add(binom);
    }
    total
}

fn subsets_up_to(n: usize, max: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        if (mask.count_ones() as usize) <= max {
            out.push(mask);
        }
    }
    out
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Integer view of a matrix when every entry is a small integer.
fn int_view(m: &Mat) -> Option<Vec<Vec<i128>>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|r| {
                    if r.denom().to_i64()? == 1 {
                        let n = r.numer().to_i64()? as i128;
                        (n.unsigned_abs() < (1 << 40)).then_some(n)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

/// Solves for a strategy over `strat_set` of one side that makes every index
/// in `indiff_set` of the opposing side exactly indifferent, using the
/// opponent-payoff lookup `payoff(opponent index, strategist index)`.
/// Unknowns are the strategy entries plus the common payoff v; only uniquely
/// determined nonnegative solutions are returned (full-length vectors).
fn indifference_solution(
    int_payoff: Option<&Vec<Vec<i128>>>,
    rat_payoff: &dyn Fn(usize, usize) -> Rat,
    n_strat: usize,
    strat_set: &[usize],
    indiff_set: &[usize],
) -> Option<Vec<Rat>> {
    // Fewer equations than unknowns can never pin the solution.
    if indiff_set.len() < strat_set.len() {
        return None;
    }
    let unknowns = strat_set.len() + 1;
    let solution = if let Some(p) = int_payoff {
        let mut system: Vec<Vec<i128>> = Vec::with_capacity(indiff_set.len() + 1);
        for &i in indiff_set {
            let mut row = Vec::with_capacity(unknowns + 1);
            for &j in strat_set {
                row.push(p[i][j]);
            }
            row.push(-1);
            row.push(0);
            system.push(row);
        }
        let mut norm = alloc::vec![1i128; strat_set.len()];
        norm.push(0);
        norm.push(1);
        system.push(norm);
        match bareiss_unique(system, unknowns) {
            Some(result) => result?,
            // Overflow mid-elimination: redo the system in rationals.
            None => solve_rational(rat_payoff, strat_set, indiff_set, unknowns)?,
        }
    } else {
        solve_rational(rat_payoff, strat_set, indiff_set, unknowns)?
    };
    let probs = &solution[..strat_set.len()];
    if probs.iter().any(|p| p < &Rat::zero()) {
        return None;
    }
    let mut full = alloc::vec![Rat::zero(); n_strat];
    for (&j, p) in strat_set.iter().zip(probs) {
        full[j] = p.clone();
    }
    Some(full)
}

fn solve_rational(
    payoff: &dyn Fn(usize, usize) -> Rat,
    strat_set: &[usize],
    indiff_set: &[usize],
    unknowns: usize,
) -> Option<Vec<Rat>> {
    let mut system: Vec<Vec<Rat>> = Vec::with_capacity(indiff_set.len() + 1);
    for &i in indiff_set {
        let mut row = Vec::with_capacity(unknowns + 1);
        for &j in strat_set {
            row.push(payoff(i, j));
        }
        row.push(-Rat::from_integer(1.into()));
        row.push(Rat::zero());
        system.push(row);
    }
    let mut norm = alloc::vec![Rat::from_integer(1.into()); strat_set.len()];
    norm.push(Rat::zero());
    norm.push(Rat::from_integer(1.into()));
    system.push(norm);
    solve_unique(&system)
}

/// Best-response bitmask: positions attaining the maximum of `values`.
fn argmax_mask(values: &[Rat]) -> u32 {
    let max = values.iter().max().expect("nonempty");
    let mut mask = 0u32;
    for (i, v) in values.iter().enumerate() {
        if v == max {
            mask |= 1 << i;
        }
    }
    mask
}

fn support_mask(values: &[Rat]) -> u32 {
    let mut mask = 0u32;
    for (i, v) in values.iter().enumerate() {
        if !v.is_zero() {
            mask |= 1 << i;
        }
    }
    mask
}

pub fn support_enumeration_with_config(
    game: &BimatrixGame,
    config: &SupportEnumConfig,
) -> Result<SolveResult, Error> {
    let (rows, cols) = game.dims();
    if rows > 31 || cols > 31 {
        return Err(Error::Budget(alloc::format!(
            "support enumeration is limited to 31 strategies per side, game is {rows}x{cols}"
        )));
    }
    let max_support = config.max_support;
    // Budget check before materializing anything.
    let pairs = count_subsets(rows, max_support.min(rows))
        .saturating_mul(count_subsets(cols, max_support.min(cols)));
    if pairs > config.max_pairs {
        return Err(Error::Budget(alloc::format!(
            "{pairs} support pairs exceed the configured budget {}",
            config.max_pairs
        )));
    }
    let row_sets = subsets_up_to(rows, max_support.min(rows));
    let col_sets = subsets_up_to(cols, max_support.min(cols));

    let a = game.a();
    let b = game.b();
    let a_int = int_view(a);
    // Transposed view of B: payoff(column j, row i).
    let bt = b.transpose();
    let bt_int = int_view(&bt);
    let a_fn = |i: usize, j: usize| a.get(i, j).clone();
    let bt_fn = |j: usize, i: usize| bt.get(j, i).clone();

    let mut x_candidates: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut y_candidates: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut examined = 0u64;
    let row_lists: Vec<Vec<usize>> = row_sets.iter().map(|&m| mask_indices(m)).collect();
    let col_lists: Vec<Vec<usize>> = col_sets.iter().map(|&m| mask_indices(m)).collect();
    for rset in &row_lists {
        for cset in &col_lists {
            examined += 1;
            if let Some(y) = indifference_solution(a_int.as_ref(), &a_fn, cols, cset, rset) {
                y_candidates.insert(y);
            }
            if let Some(x) = indifference_solution(bt_int.as_ref(), &bt_fn, rows, rset, cset) {
                x_candidates.insert(x);
            }
        }
    }

    let cross = (x_candidates.len() as u64) * (y_candidates.len() as u64);
    if cross > config.max_cross {
        return Err(Error::Budget(alloc::format!(
            "{cross} candidate pairs exceed the configured budget {}",
            config.max_cross
        )));
    }

    // supp(x) within the best responses to y and vice versa is exactly the
    // zero-regret condition.
    let x_info: Vec<(Vec<Rat>, u32, u32)> = x_candidates
        .into_iter()
        .map(|x| {
            let xb = b.vec_mul(&x).expect("dims fixed");
            let br = argmax_mask(&xb);
            let supp = support_mask(&x);
            (x, br, supp)
        })
        .collect();
    let y_info: Vec<(Vec<Rat>, u32, u32)> = y_candidates
        .into_iter()
        .map(|y| {
            let ay = a.mul_vec(&y).expect("dims fixed");
            let br = argmax_mask(&ay);
            let supp = support_mask(&y);
            (y, br, supp)
        })
        .collect();

    let mut equilibria: Vec<MixedProfile> = Vec::new();
    for (x, x_br_cols, x_supp) in &x_info {
        for (y, y_br_rows, y_supp) in &y_info {
            if x_supp & !y_br_rows == 0 && y_supp & !x_br_cols == 0 {
                equilibria.push(MixedProfile {
                    x: x.clone(),
                    y: y.clone(),
                });
            }
        }
    }
    debug_assert!(equilibria
        .iter()
        .take(8)
        .all(|eq| regret(game, eq).map(|r| r.wsne_eps.is_zero()).unwrap_or(false)));
    equilibria.sort();
    equilibria.dedup();
    Ok(SolveResult {
        equilibria,
        method: SolveMethod::SupportEnum,
        stats: SolveStats {
            supports_examined: examined,
            pivots: 0,
            shift: None,
        },
    })
}

/// Enumerates support pairs up to `max_support` per side and returns every
/// exact equilibrium found. Complete for nondegenerate games when
/// `max_support` reaches the smaller dimension; for degenerate games it
/// returns the equilibria whose strategies are uniquely pinned by some
/// support pair (in particular every extreme equilibrium).
pub fn support_enumeration(game: &BimatrixGame, max_support: usize) -> Result<SolveResult, Error> {
    if max_support == 0 {
        return Err(Error::Precondition("max_support must be at least 1".into()));
    }
    support_enumeration_with_config(
        game,
        &SupportEnumConfig {
            max_support,
            ..SupportEnumConfig::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    fn game(a: Mat, b: Mat) -> BimatrixGame {
        BimatrixGame::new(a, b).unwrap()
    }

    #[test]
    fn s_t_has_unique_equilibrium() {
        let g = game(
            Mat::from_ints(&[&[2, 0], &[0, 1]]),
            Mat::from_ints(&[&[0, 1], &[1, 0]]),
        );
        let result = support_enumeration(&g, 2).unwrap();
        assert_eq!(result.equilibria.len(), 1);
        let eq = &result.equilibria[0];
        assert_eq!(eq.x, alloc::vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(eq.y, alloc::vec![ratio(1, 3), ratio(2, 3)]);
    }

    #[test]
    fn matching_pennies_unique() {
        let g = game(
            Mat::from_ints(&[&[1, 0], &[0, 1]]),
            Mat::from_ints(&[&[0, 1], &[1, 0]]),
        );
        let result = support_enumeration(&g, 2).unwrap();
        assert_eq!(result.equilibria.len(), 1);
        assert_eq!(result.equilibria[0].x, alloc::vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(result.equilibria[0].y, alloc::vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn coordination_has_three() {
        let eye = Mat::from_ints(&[&[1, 0], &[0, 1]]);
        let g = game(eye.clone(), eye);
        let result = support_enumeration(&g, 2).unwrap();
        assert_eq!(result.equilibria.len(), 3);
        for eq in &result.equilibria {
            assert!(regret(&g, eq).unwrap().wsne_eps == int(0));
        }
    }

    #[test]
    fn fractional_payoffs_use_rational_path() {
        let mut a = Mat::zero(2, 2);
        a.set(0, 0, ratio(1, 2));
        a.set(1, 1, ratio(1, 3));
        let b = Mat::from_ints(&[&[0, 1], &[1, 0]]);
        let g = game(a, b);
        let result = support_enumeration(&g, 2).unwrap();
        assert_eq!(result.equilibria.len(), 1);
        // Indifference: y0/2 = y1/3 -> y = (2/5, 3/5).
        assert_eq!(result.equilibria[0].y, alloc::vec![ratio(2, 5), ratio(3, 5)]);
    }

    #[test]
    fn budget_error_when_capped() {
        let g = game(Mat::zero(4, 4), Mat::zero(4, 4));
        let config = SupportEnumConfig {
            max_support: 4,
            max_pairs: 10,
            max_cross: 10,
        };
        assert!(matches!(
            support_enumeration_with_config(&g, &config),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn subset_counts_match_enumeration() {
        for n in 1..=10usize {
            for max in 1..=n {
                assert_eq!(
                    count_subsets(n, max),
                    subsets_up_to(n, max).len() as u64,
                    "n = {n}, max = {max}"
                );
            }
        }
        // An over-budget game errors before any materialization.
        let g = game(Mat::zero(26, 26), Mat::zero(26, 26));
        assert!(matches!(
            support_enumeration(&g, 26),
            Err(Error::Budget(_))
        ));
    }
}
