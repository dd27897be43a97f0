//! Exact solution of small linear systems.
//!
//! `solve_unique` returns the solution of `M z = rhs` only when it exists
//! and is unique; underdetermined and inconsistent systems yield `None`.
//! Support enumeration calls this for every support pair, so there is a
//! fraction-free integer fast path (Bareiss elimination in i128) for the
//! common case of small integer payoffs, with a BigRational fallback that
//! is always correct.

use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::rat::Rat;

/// Unique solution of the `rows x cols` system given as augmented rows
/// `[a_0, ..., a_{cols-1} | b]`, or `None`.
pub fn solve_unique(system: &[Vec<Rat>]) -> Option<Vec<Rat>> {
    if system.is_empty() {
        return None;
    }
    let unknowns = system[0].len() - 1;
    if let Some(int_rows) = to_i128_rows(system) {
        if let Some(result) = bareiss_unique(int_rows, unknowns) {
            return result;
        }
        // Overflow mid-elimination: fall through to the rational path.
    }
    gauss_unique(system, unknowns)
}

fn to_i128_rows(system: &[Vec<Rat>]) -> Option<Vec<Vec<i128>>> {
    system
        .iter()
        .map(|row| {
            row.iter()
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

/// Fraction-free elimination. Outer `None` = overflow (caller must fall
/// back); inner `None` = no unique solution.
pub(crate) fn bareiss_unique(mut m: Vec<Vec<i128>>, unknowns: usize) -> Option<Option<Vec<Rat>>> {
    let rows = m.len();
    let cols = unknowns + 1;
    let mut pivot_row_of_col: Vec<Option<usize>> = alloc::vec![None; unknowns];
    let mut prev_pivot: i128 = 1;
    let mut rank = 0usize;
    for col in 0..unknowns {
        let pivot = (rank..rows).find(|&r| m[r][col] != 0);
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let pv = m[rank][col];
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let factor = m[r][col];
            for c in 0..cols {
                let t1 = pv.checked_mul(m[r][c])?;
                let t2 = factor.checked_mul(m[rank][c])?;
                let num = t1.checked_sub(t2)?;
                // Bareiss: division by the previous pivot is exact.
                m[r][c] = num / prev_pivot;
            }
        }
        prev_pivot = pv;
        pivot_row_of_col[col] = Some(rank);
        rank += 1;
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..rows {
        if m[r][unknowns] != 0 {
            return Some(None);
        }
    }
    if rank < unknowns {
        return Some(None);
    }
    let mut solution = alloc::vec![Rat::zero(); unknowns];
    for col in 0..unknowns {
        let r = pivot_row_of_col[col].expect("full rank");
        solution[col] = Rat::new(m[r][unknowns].into(), m[r][col].into());
    }
    Some(Some(solution))
}

fn gauss_unique(system: &[Vec<Rat>], unknowns: usize) -> Option<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = system.to_vec();
    let rows = m.len();
    let mut pivot_row_of_col: Vec<Option<usize>> = alloc::vec![None; unknowns];
    let mut rank = 0usize;
    for col in 0..unknowns {
        let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let pv = m[rank][col].clone();
        for c in col..=unknowns {
            m[rank][c] = &m[rank][c] / &pv;
        }
        for r in 0..rows {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=unknowns {
                let delta = &factor * &m[rank][c];
                m[r][c] = &m[r][c] - &delta;
            }
        }
        pivot_row_of_col[col] = Some(rank);
        rank += 1;
    }
    for r in rank..rows {
        if !m[r][unknowns].is_zero() {
            return None;
        }
    }
    if rank < unknowns {
        return None;
    }
    Some(
        (0..unknowns)
            .map(|col| m[pivot_row_of_col[col].expect("full rank")][unknowns].clone())
            .collect(),
    )
}
