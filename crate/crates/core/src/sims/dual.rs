//! Dual column simulations: each row of A holding exactly two 2s is merged
//! so the built game carries a single 2 for it. The two columns holding the
//! 2s (each also carrying exactly one 1, in distinct rows) become a
//! five-column group: a three-wide block cb_1 whose first column's
//! probability equals the sum of the other two at equilibrium, plus one
//! dedicated column per original column carrying its B payoffs.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::games::{renormalize, BimatrixGame, MixedProfile};
use crate::matrix::Mat;
use crate::rat::{int, Rat};
use crate::sims::{
    permuted_game, s_matrix, unpermute_profile, PermutationPair, SimKind, SimSide,
    SimulationRecord,
};

#[derive(Debug, Clone)]
pub struct PreparedDual {
    pub game: BimatrixGame,
    pub perm: PermutationPair,
    pub k: usize,
}

fn t1_matrix() -> Mat {
    Mat::from_ints(&[&[0, 1, 0], &[1, 0, 0]])
}

fn t2_matrix() -> Mat {
    Mat::from_ints(&[&[0, 0, 1], &[1, 0, 0]])
}

/// Reorders rows so the two-2 rows come first and columns so row i's 2s sit
/// in columns 2i and 2i+1. Each such column must consist of exactly the 2
/// and one 1, with the pair's 1s in distinct rows.
pub fn prepare_dual(game: &BimatrixGame) -> Result<PreparedDual, Error> {
    let a = game.a();
    for v in a.iter() {
        if !(v.is_zero() || *v == int(1) || *v == int(2)) {
            return Err(Error::Pattern(format!("payoff {v} outside {{0,1,2}}")));
        }
    }
    let (n_r, n_c) = (a.rows(), a.cols());
    let two = int(2);
    let one = int(1);

    let mut paired_rows = Vec::new();
    for i in 0..n_r {
        let twos: Vec<usize> = (0..n_c).filter(|&j| a.get(i, j) == &two).collect();
        if twos.len() == 2 {
            let ones = (0..n_c).filter(|&j| a.get(i, j) == &one).count();
            if ones != 0 {
                return Err(Error::Pattern(format!(
                    "row {i} has two 2s but also {ones} one(s)"
                )));
            }
            paired_rows.push((i, twos[0], twos[1]));
        } else if twos.len() > 2 {
            return Err(Error::Pattern(format!("row {i} has {} twos", twos.len())));
        }
    }
    let k = paired_rows.len();

    // Column pattern: each paired column is exactly {2 at the paired row,
    // one 1 elsewhere}; the two 1s of a pair sit in distinct rows.
    let mut col_used = alloc::vec![false; n_c];
    for &(i, c_even, c_odd) in &paired_rows {
        let mut one_rows = [usize::MAX; 2];
        for (slot, &c) in [c_even, c_odd].iter().enumerate() {
            if col_used[c] {
                return Err(Error::Pattern(format!(
                    "column {c} carries 2s from two different rows"
                )));
            }
            col_used[c] = true;
            let mut ones = Vec::new();
            let mut extra = 0usize;
            for r in 0..n_r {
                let v = a.get(r, c);
                if v.is_zero() {
                    continue;
                }
                if r == i && v == &two {
                    continue;
                }
                if v == &one {
                    ones.push(r);
                } else {
                    extra += 1;
                }
            }
            if ones.len() != 1 || extra != 0 {
                return Err(Error::Pattern(format!(
                    "column {c} paired with row {i} must hold exactly the 2 and one 1, found {} one(s) and {extra} other entr(ies)",
                    ones.len()
                )));
            }
            one_rows[slot] = ones[0];
        }
        if one_rows[0] == one_rows[1] {
            return Err(Error::Pattern(format!(
                "columns {c_even} and {c_odd} carry their 1s in the same row {}",
                one_rows[0]
            )));
        }
    }

    let mut row_perm: Vec<usize> = paired_rows.iter().map(|&(i, _, _)| i).collect();
    row_perm.extend((0..n_r).filter(|i| !paired_rows.iter().any(|&(p, _, _)| p == *i)));
    let mut col_perm: Vec<usize> = Vec::with_capacity(n_c);
    for &(_, c_even, c_odd) in &paired_rows {
        col_perm.push(c_even);
        col_perm.push(c_odd);
    }
    col_perm.extend((0..n_c).filter(|j| !col_used[*j]));
    let perm = PermutationPair { row_perm, col_perm };
    Ok(PreparedDual {
        game: permuted_game(game, &perm),
        perm,
        k,
    })
}

/// Rewrites a pair of columns (2s in row `paired_row`, a 1 each in distinct
/// rows) into the three-column encode block: the 2 in block column 0, the
/// even column's 1 in block column 1, the odd one's in block column 2.
pub fn encode_dual_pair(even: &[Rat], odd: &[Rat], paired_row: usize) -> Result<Mat, Error> {
    let one = int(1);
    let two = int(2);
    let mut out = Mat::zero(even.len(), 3);
    out.set(paired_row, 0, two.clone());
    for (block_col, col) in [(1usize, even), (2usize, odd)] {
        let mut found = None;
        for (r, v) in col.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if r == paired_row && v == &two {
                continue;
            }
            if v == &one && found.is_none() {
                found = Some(r);
            } else {
                return Err(Error::Pattern(format!(
                    "unexpected payoff {v} at row {r} of a paired column"
                )));
            }
        }
        let r = found.ok_or_else(|| {
            Error::Pattern("paired column carries no 1".into())
        })?;
        out.set(r, block_col, one.clone());
    }
    Ok(out)
}

pub fn build_dual(
    prepared: &PreparedDual,
    eps: &Rat,
) -> Result<(BimatrixGame, SimulationRecord), Error> {
    let game = &prepared.game;
    let (n_r, n_c) = game.dims();
    let k = prepared.k;
    let out_rows = 4 * k + n_r;
    let out_cols = 5 * k + (n_c - 2 * k);
    let mut a = Mat::zero(out_rows, out_cols);
    let mut b = Mat::zero(out_rows, out_cols);
    let s = s_matrix(SimKind::Dual);
    let t1 = t1_matrix();
    let t2 = t2_matrix();
    let rb_e = 4 * k;

    for i in 0..k {
        let rb1 = 4 * i;
        let rb2 = 4 * i + 2;
        let cb1 = 5 * i;
        let cb2 = 5 * i + 3;
        let cb3 = 5 * i + 4;
        a.paste(rb1, cb1, &s);
        a.paste(rb2, cb1, &s);
        b.paste(rb1, cb1, &t1);
        b.paste(rb2, cb1, &t2);
        for r in 0..2 {
            a.set(rb1 + r, cb2, int(1));
            a.set(rb2 + r, cb3, int(1));
        }
        let even = game.a().col_vec(2 * i);
        let odd = game.a().col_vec(2 * i + 1);
        let encoded = encode_dual_pair(&even, &odd, i)?;
        a.paste(rb_e, cb1, &encoded);
        b.paste_col(rb_e, cb2, &game.b().col_vec(2 * i));
        b.paste_col(rb_e, cb3, &game.b().col_vec(2 * i + 1));
    }
    for j in 2 * k..n_c {
        let out_col = 5 * k + (j - 2 * k);
        a.paste_col(rb_e, out_col, &game.a().col_vec(j));
        b.paste_col(rb_e, out_col, &game.b().col_vec(j));
    }

    let record = SimulationRecord {
        kind: SimKind::Dual,
        side: SimSide::Row,
        k_value: None,
        k,
        input_dims: (n_r, n_c),
        output_dims: (out_rows, out_cols),
        perm: prepared.perm.clone(),
        eps: eps.clone(),
    };
    Ok((BimatrixGame::new(a, b)?, record))
}

/// x re-normalizes the encoding rows; paired column j reads block column
/// 1 or 2 of its group, zeroed below 3 eps, and passthroughs copy over.
pub(crate) fn translate_dual(
    record: &SimulationRecord,
    profile: &MixedProfile,
) -> Result<MixedProfile, Error> {
    let k = record.k;
    let (n_r, n_c) = record.input_dims;
    let rb_e = 4 * k;

    let x_raw: Vec<Rat> = (0..n_r).map(|i| profile.x[rb_e + i].clone()).collect();
    let x = renormalize(&x_raw)?;

    let threshold = int(3) * &record.eps;
    let mut y_raw = Vec::with_capacity(n_c);
    for j in 0..n_c {
        let group = j / 2;
        if group < k {
            let value = if j % 2 == 0 {
                profile.y[5 * group + 1].clone()
            } else {
                profile.y[5 * group + 2].clone()
            };
            y_raw.push(if value < threshold { Rat::zero() } else { value });
        } else {
            y_raw.push(profile.y[5 * k + (j - 2 * k)].clone());
        }
    }
    let y = renormalize(&y_raw)?;
    unpermute_profile(&record.perm, x, y)
}
