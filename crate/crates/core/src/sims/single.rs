//! The two single-column simulations. They share their block layout: for
//! each simulated column j of A, the built game gets a row block rb^j
//! holding S (and a column of 1s in cb_2^j), a column block cb_1^j whose
//! first column stands for the original column, and the encoding row block
//! rb_e carrying encode(A_j) under cb_1^j, the original B_j under cb_2^j,
//! and the untouched passthrough columns on the right.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::games::{renormalize, BimatrixGame, MixedProfile};
use crate::matrix::Mat;
use crate::rat::{int, Rat};
use crate::sims::{
    permuted_game, s_matrix, single_geometry, stable_partition, t_matrix, unpermute_profile,
    PermutationPair, SimKind, SimSide, SimulationRecord,
};

/// A game reordered so its simulated columns come first.
#[derive(Debug, Clone)]
pub struct PreparedSingle {
    pub kind: SimKind,
    pub game: BimatrixGame,
    pub perm: PermutationPair,
    pub k: usize,
    /// Detected large payoff (type one): 8 or 4; `None` when the matrix has
    /// no large payoffs at all (then `k = 0` and the build is the identity).
    pub k_value: Option<i64>,
}

struct ColumnShape {
    ones: Vec<usize>,
    twos: Vec<usize>,
    bigs: Vec<usize>,
}

fn column_shape(col: &[Rat], k_value: Option<i64>) -> Result<ColumnShape, Error> {
    let mut shape = ColumnShape {
        ones: Vec::new(),
        twos: Vec::new(),
        bigs: Vec::new(),
    };
    for (i, v) in col.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        if *v == int(1) {
            shape.ones.push(i);
        } else if *v == int(2) {
            shape.twos.push(i);
        } else if k_value.is_some_and(|k| *v == int(k)) {
            shape.bigs.push(i);
        } else {
            return Err(Error::Pattern(format!("payoff {v} at row {i} is not allowed")));
        }
    }
    Ok(shape)
}

/// Detects the unique large payoff of `A` (8 or 4). Any other value beyond
/// {0,1,2} is a pattern error; both 8s and 4s present is a scale error.
fn detect_k(a: &Mat) -> Result<Option<i64>, Error> {
    let mut has8 = false;
    let mut has4 = false;
    for v in a.iter() {
        if v.is_zero() || *v == int(1) || *v == int(2) {
            continue;
        }
        if *v == int(8) {
            has8 = true;
        } else if *v == int(4) {
            has4 = true;
        } else {
            return Err(Error::Pattern(format!("payoff {v} outside {{0,1,2,4,8}}")));
        }
    }
    match (has8, has4) {
        (true, true) => Err(Error::MixedScale),
        (true, false) => Ok(Some(8)),
        (false, true) => Ok(Some(4)),
        (false, false) => Ok(None),
    }
}

/// Reorders the columns of `A` (and `B` identically) so the columns
/// containing the large payoff come first; checks each against the encode
/// patterns {K}, {1,K}, {1,1,K}, {2,K}, {1,2,K}, {2,2,K}, {1,1,1,K}.
pub fn prepare_type_one(game: &BimatrixGame) -> Result<PreparedSingle, Error> {
    let a = game.a();
    let k_value = detect_k(a)?;
    let needs_sim: Vec<bool> = (0..a.cols())
        .map(|j| {
            k_value.is_some_and(|k| (0..a.rows()).any(|i| *a.get(i, j) == int(k)))
        })
        .collect();
    let (col_perm, k) = stable_partition(a.cols(), |j| needs_sim[j]);
    let perm = PermutationPair {
        row_perm: (0..a.rows()).collect(),
        col_perm,
    };
    let reordered = permuted_game(game, &perm);
    for j in 0..k {
        let shape = column_shape(&reordered.a().col_vec(j), k_value)?;
        let allowed = matches!(
            (shape.ones.len(), shape.twos.len()),
            (0, 0) | (1, 0) | (2, 0) | (0, 1) | (1, 1) | (0, 2) | (3, 0)
        );
        if shape.bigs.len() != 1 || !allowed {
            return Err(Error::Pattern(format!(
                "column {} (input column {}) has {} K entries, {} ones, {} twos",
                j,
                perm.col_perm[j],
                shape.bigs.len(),
                shape.ones.len(),
                shape.twos.len()
            )));
        }
    }
    Ok(PreparedSingle {
        kind: SimKind::TypeOne,
        game: reordered,
        perm,
        k,
        k_value,
    })
}

/// Reorders the columns of `A` so the columns that do *not* consist of at
/// most three 1s (and no 2) come first; checks each against the encode
/// patterns {2}, {1,2}, {1,1,2}, {1,1,1,2}, {1,1,1,1}.
pub fn prepare_type_two(game: &BimatrixGame) -> Result<PreparedSingle, Error> {
    let a = game.a();
    for v in a.iter() {
        if !(v.is_zero() || *v == int(1) || *v == int(2)) {
            return Err(Error::Pattern(format!("payoff {v} outside {{0,1,2}}")));
        }
    }
    let needs_sim: Vec<bool> = (0..a.cols())
        .map(|j| {
            let col = a.col_vec(j);
            let ones = col.iter().filter(|v| **v == int(1)).count();
            let twos = col.iter().filter(|v| **v == int(2)).count();
            twos > 0 || ones > 3
        })
        .collect();
    let (col_perm, k) = stable_partition(a.cols(), |j| needs_sim[j]);
    let perm = PermutationPair {
        row_perm: (0..a.rows()).collect(),
        col_perm,
    };
    let reordered = permuted_game(game, &perm);
    for j in 0..k {
        let shape = column_shape(&reordered.a().col_vec(j), None)?;
        let allowed = matches!(
            (shape.ones.len(), shape.twos.len()),
            (0, 1) | (1, 1) | (2, 1) | (3, 1) | (4, 0)
        );
        if !allowed {
            return Err(Error::Pattern(format!(
                "column {} (input column {}) has {} ones and {} twos",
                j,
                perm.col_perm[j],
                shape.ones.len(),
                shape.twos.len()
            )));
        }
    }
    Ok(PreparedSingle {
        kind: SimKind::TypeTwo,
        game: reordered,
        perm,
        k,
        k_value: None,
    })
}

/// Per-entry rewrite of a type-one column into its two-column block: a 1
/// stays a 1 in block column 0, a 2 becomes a 1 in block column 1, and the
/// K becomes K/2 in block column 1.
pub fn encode_type_one(col: &[Rat], k_value: i64) -> Result<Mat, Error> {
    let mut out = Mat::zero(col.len(), 2);
    for (i, v) in col.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        if *v == int(1) {
            out.set(i, 0, int(1));
        } else if *v == int(2) {
            out.set(i, 1, int(1));
        } else if *v == int(k_value) {
            out.set(i, 1, int(k_value / 2));
        } else {
            return Err(Error::Pattern(format!("payoff {v} at row {i} is not allowed")));
        }
    }
    Ok(out)
}

/// Rewrite of a type-two column into its three-column block. The 1s keep
/// their rows: the first two go to block column 0, the third to column 1,
/// the fourth to column 2. A 2 becomes a 1 in block columns 1 and 2.
pub fn encode_type_two(col: &[Rat]) -> Result<Mat, Error> {
    let shape = column_shape(col, None)?;
    if shape.twos.len() > 1 || shape.ones.len() > 4 {
        return Err(Error::Pattern(format!(
            "column has {} ones and {} twos",
            shape.ones.len(),
            shape.twos.len()
        )));
    }
    let mut out = Mat::zero(col.len(), 3);
    for (rank, &row) in shape.ones.iter().enumerate() {
        let block_col = match rank {
            0 | 1 => 0,
            2 => 1,
            _ => 2,
        };
        out.set(row, block_col, int(1));
    }
    for &row in &shape.twos {
        out.set(row, 1, int(1));
        out.set(row, 2, int(1));
    }
    Ok(out)
}

pub fn build_type_one(
    prepared: &PreparedSingle,
    eps: &Rat,
) -> Result<(BimatrixGame, SimulationRecord), Error> {
    build_single(prepared, eps)
}

pub fn build_type_two(
    prepared: &PreparedSingle,
    eps: &Rat,
) -> Result<(BimatrixGame, SimulationRecord), Error> {
    build_single(prepared, eps)
}

fn build_single(
    prepared: &PreparedSingle,
    eps: &Rat,
) -> Result<(BimatrixGame, SimulationRecord), Error> {
    let kind = prepared.kind;
    let (block, cb1_width, _) = single_geometry(kind);
    let col_stride = cb1_width + 1;
    let game = &prepared.game;
    let (n_r, n_c) = game.dims();
    let k = prepared.k;
    let out_rows = block * k + n_r;
    let out_cols = col_stride * k + (n_c - k);
    let mut a = Mat::zero(out_rows, out_cols);
    let mut b = Mat::zero(out_rows, out_cols);
    let s = s_matrix(kind);
    let t = t_matrix(kind);
    let rb_e = block * k;

    for j in 0..k {
        let rb = block * j;
        let cb1 = col_stride * j;
        let cb2 = col_stride * j + cb1_width;
        a.paste(rb, cb1, &s);
        b.paste(rb, cb1, &t);
        for r in 0..block {
            a.set(rb + r, cb2, int(1));
        }
        let col = game.a().col_vec(j);
        let encoded = match kind {
            SimKind::TypeOne => encode_type_one(&col, prepared.k_value.unwrap_or(8))?,
            SimKind::TypeTwo => encode_type_two(&col)?,
            SimKind::Dual => unreachable!(),
        };
        a.paste(rb_e, cb1, &encoded);
        b.paste_col(rb_e, cb2, &game.b().col_vec(j));
    }
    for j in k..n_c {
        let out_col = col_stride * k + (j - k);
        a.paste_col(rb_e, out_col, &game.a().col_vec(j));
        b.paste_col(rb_e, out_col, &game.b().col_vec(j));
    }

    let record = SimulationRecord {
        kind,
        side: SimSide::Row,
        k_value: prepared.k_value,
        k,
        input_dims: (n_r, n_c),
        output_dims: (out_rows, out_cols),
        perm: prepared.perm.clone(),
        eps: eps.clone(),
    };
    Ok((BimatrixGame::new(a, b)?, record))
}

/// Shared translate-back: x re-normalizes the encoding rows; y takes the
/// first column of each block, excluding blocks below the threshold, plus
/// the passthrough columns.
pub(crate) fn translate_single(
    record: &SimulationRecord,
    profile: &MixedProfile,
) -> Result<MixedProfile, Error> {
    let (block, cb1_width, threshold_mult) = single_geometry(record.kind);
    let col_stride = cb1_width + 1;
    let k = record.k;
    let (n_r, n_c) = record.input_dims;
    let rb_e = block * k;

    let x_raw: Vec<Rat> = (0..n_r).map(|i| profile.x[rb_e + i].clone()).collect();
    let x = renormalize(&x_raw)?;

    let threshold = int(threshold_mult) * &record.eps;
    let mut y_raw = Vec::with_capacity(n_c);
    for j in 0..n_c {
        if j < k {
            let mass = (0..cb1_width).fold(Rat::zero(), |acc, t| {
                acc + &profile.y[col_stride * j + t]
            });
            y_raw.push(if mass >= threshold {
                profile.y[col_stride * j].clone()
            } else {
                Rat::zero()
            });
        } else {
            y_raw.push(profile.y[col_stride * k + (j - k)].clone());
        }
    }
    let y = renormalize(&y_raw)?;
    unpermute_profile(&record.perm, x, y)
}
