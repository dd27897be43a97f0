//! Validators for the game classes the reduction chain passes through.
//!
//! Each class constrains the rows and columns of `A` and of `Bᵀ`. We check a
//! matrix in "A orientation" (its columns get the column rule, its rows the
//! row rule) and apply the same check to `A` and to `Bᵀ`, mapping locations
//! back to `B`'s native rows and columns in the report.

use alloc::format;
use alloc::string::String;


use num_traits::Zero;

use crate::games::BimatrixGame;
use crate::matrix::Mat;
use crate::rat::{int, Rat};
use crate::report::{Location, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameClass {
    /// Square {0,1,2,8}-valued game with the one-8/two-8s line patterns.
    ResBi,
    /// {0,1,2,4}-valued game after the first pair of halving simulations.
    Stage1,
    /// {0,1,2}-valued game after the second pair, two-2 rows still present.
    Stage2,
    /// {0,1,2}-valued game after the dual simulations, at most one 2 per row.
    Stage3,
    /// {0,1}-valued game with at most three nonzeros per row and column.
    WinLose3Sparse,
}

impl GameClass {
    pub fn name(&self) -> &'static str {
        match self {
            GameClass::ResBi => "resbi",
            GameClass::Stage1 => "stage1",
            GameClass::Stage2 => "stage2",
            GameClass::Stage3 => "stage3",
            GameClass::WinLose3Sparse => "winlose3sparse",
        }
    }

    pub fn parse(s: &str) -> Option<GameClass> {
        match s.to_ascii_lowercase().as_str() {
            "resbi" => Some(GameClass::ResBi),
            "stage1" => Some(GameClass::Stage1),
            "stage2" => Some(GameClass::Stage2),
            "stage3" => Some(GameClass::Stage3),
            "winlose3sparse" | "winlose" => Some(GameClass::WinLose3Sparse),
            _ => None,
        }
    }
}

/// Value histogram of one row or column.
struct LineCounts {
    n1: usize,
    n2: usize,
    n4: usize,
    n8: usize,
    other: usize,
    nonzero: usize,
}

fn count_line<'a>(entries: impl Iterator<Item = &'a Rat>) -> LineCounts {
    let mut c = LineCounts {
        n1: 0,
        n2: 0,
        n4: 0,
        n8: 0,
        other: 0,
        nonzero: 0,
    };
    for e in entries {
        if e.is_zero() {
            continue;
        }
        c.nonzero += 1;
        if *e == int(1) {
            c.n1 += 1;
        } else if *e == int(2) {
            c.n2 += 1;
        } else if *e == int(4) {
            c.n4 += 1;
        } else if *e == int(8) {
            c.n8 += 1;
        } else {
            c.other += 1;
        }
    }
    c
}

fn column_clause(class: GameClass, c: &LineCounts) -> Option<String> {
    if c.other > 0 {
        return Some("contains a value outside the class's payoff set".into());
    }
    match class {
        GameClass::ResBi => {
            let ones_only = c.n8 == 0 && c.n4 == 0 && c.n2 == 0 && (c.n1 == 1 || c.n1 == 2);
            let one_eight = c.n8 == 1 && c.n4 == 0 && c.n1 + c.n2 <= 2;
            (!(ones_only || one_eight))
                .then(|| "column must have one or two 1s, or one 8 and at most two entries from {1,2}".into())
        }
        GameClass::Stage1 => {
            let small = c.n4 == 0 && c.n8 == 0 && c.n1 + c.n2 <= 3 && c.n2 <= 1;
            let one_four = c.n4 == 1 && c.n8 == 0 && c.n2 == 0 && c.n1 <= 3;
            (!(small || one_four)).then(|| {
                "column must have at most three entries from {1,2} with at most one 2, or a single 4 with at most three 1s".into()
            })
        }
        GameClass::Stage2 | GameClass::Stage3 => {
            let ok = c.n4 == 0 && c.n8 == 0 && c.n1 + c.n2 <= 4 && c.n2 <= 1;
            (!ok).then(|| {
                "column must have at most four entries from {1,2} with at most one 2".into()
            })
        }
        GameClass::WinLose3Sparse => {
            let ok = c.n2 == 0 && c.n4 == 0 && c.n8 == 0 && c.nonzero <= 3;
            (!ok).then(|| "column must be {0,1}-valued with at most three 1s".into())
        }
    }
}

fn row_clause(class: GameClass, c: &LineCounts) -> Option<String> {
    if c.other > 0 {
        return Some("contains a value outside the class's payoff set".into());
    }
    match class {
        GameClass::ResBi => {
            let small = c.n8 == 0 && c.n4 == 0 && c.n1 + c.n2 <= 3;
            let two_eights = c.n8 == 2 && c.n4 == 0 && c.n1 == 0 && c.n2 == 0;
            (!(small || two_eights)).then(|| {
                "row must have at most three entries from {1,2}, or exactly two 8s".into()
            })
        }
        GameClass::Stage1 => {
            let ones = c.n4 == 0 && c.n8 == 0 && c.n2 == 0 && c.n1 <= 3;
            let one_two = c.n4 == 0 && c.n8 == 0 && c.n2 == 1 && c.n1 <= 1;
            let two_fours = c.n4 == 2 && c.n8 == 0 && c.n1 == 0 && c.n2 == 0;
            (!(ones || one_two || two_fours)).then(|| {
                "row must have at most three 1s, or a single 2 with at most one 1, or exactly two 4s".into()
            })
        }
        GameClass::Stage2 => {
            let ones = c.n2 == 0 && c.n4 == 0 && c.n8 == 0 && c.n1 <= 3;
            let one_two = c.n2 == 1 && c.n4 == 0 && c.n8 == 0 && c.n1 <= 1;
            let two_twos = c.n2 == 2 && c.n4 == 0 && c.n8 == 0 && c.n1 == 0;
            (!(ones || one_two || two_twos)).then(|| {
                "row must have at most three 1s, or a single 2 with at most one 1, or exactly two 2s".into()
            })
        }
        GameClass::Stage3 => {
            let ones = c.n2 == 0 && c.n4 == 0 && c.n8 == 0 && c.n1 <= 3;
            let one_two = c.n2 == 1 && c.n4 == 0 && c.n8 == 0 && c.n1 <= 1;
            (!(ones || one_two)).then(|| {
                "row must have at most three 1s, or a single 2 with at most one 1".into()
            })
        }
        GameClass::WinLose3Sparse => {
            let ok = c.n2 == 0 && c.n4 == 0 && c.n8 == 0 && c.nonzero <= 3;
            (!ok).then(|| "row must be {0,1}-valued with at most three 1s".into())
        }
    }
}

/// Validates a matrix in A orientation. `loc_row`/`loc_col` map the matrix's
/// own row/column indices to report locations of the original game.
fn validate_matrix(
    m: &Mat,
    class: GameClass,
    loc_row: impl Fn(usize) -> Location,
    loc_col: impl Fn(usize) -> Location,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    for j in 0..m.cols() {
        let counts = count_line((0..m.rows()).map(|i| m.get(i, j)));
        if let Some(clause) = column_clause(class, &counts) {
            report.push(loc_col(j), clause);
        }
    }
    for i in 0..m.rows() {
        let counts = count_line(m.row(i).iter());
        if let Some(clause) = row_clause(class, &counts) {
            report.push(loc_row(i), clause);
        }
    }
    if class == GameClass::Stage2 {
        // A row with exactly two 2s must have each 2 sharing its column with
        // exactly one 1.
        for i in 0..m.rows() {
            let counts = count_line(m.row(i).iter());
            if counts.n2 != 2 {
                continue;
            }
            for (j, e) in m.row(i).iter().enumerate() {
                if *e != int(2) {
                    continue;
                }
                let ones = (0..m.rows()).filter(|&r| *m.get(r, j) == int(1)).count();
                if ones != 1 {
                    report.push(
                        loc_row(i),
                        format!("2s in a two-2 row must share their column with exactly one 1 (column {j} has {ones})"),
                    );
                }
            }
        }
    }
    report
}

/// Checks every row and column of `A` and of `Bᵀ` against the class's
/// definition; ResBi additionally requires the game to be square.
pub fn validate_class(game: &BimatrixGame, class: GameClass) -> ValidationReport {
    let mut report = ValidationReport::new();
    if class == GameClass::ResBi && game.rows() != game.cols() {
        report.push(
            Location::Global,
            format!("game must be square, got {}x{}", game.rows(), game.cols()),
        );
    }
    report.merge(validate_matrix(game.a(), class, Location::ARow, Location::ACol));
    // Bᵀ's columns are B's rows and vice versa.
    let bt = game.b().transpose();
    report.merge(validate_matrix(&bt, class, Location::BCol, Location::BRow));
    report
}

/// All line sparsity counts of both matrices, handy for size bookkeeping.
pub fn max_nonzeros_per_line(game: &BimatrixGame) -> usize {
    let mut worst = 0;
    for m in [game.a(), game.b()] {
        for i in 0..m.rows() {
            worst = worst.max(m.row(i).iter().filter(|e| !e.is_zero()).count());
        }
        for j in 0..m.cols() {
            worst = worst.max((0..m.rows()).filter(|&i| !m.get(i, j).is_zero()).count());
        }
    }
    worst
}

/// Every row and column of both matrices contains an entry `>= 1` -- the
/// hypothesis the best-response arguments of the translate-back proofs rely
/// on.
pub fn every_line_has_unit(game: &BimatrixGame) -> bool {
    let one = int(1);
    for m in [game.a(), game.b()] {
        for i in 0..m.rows() {
            if !m.row(i).iter().any(|e| *e >= one) {
                return false;
            }
        }
        for j in 0..m.cols() {
            if !(0..m.rows()).any(|i| *m.get(i, j) >= one) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::matrix::Mat;

    fn game(a: Mat, b: Mat) -> BimatrixGame {
        BimatrixGame::new(a, b).unwrap()
    }

    /// The 5x5 game produced from a two-variable cycle of NOT gates, written
    /// out by hand from the construction's index rules.
    pub(crate) fn not_cycle_resbi() -> BimatrixGame {
        let a = Mat::from_ints(&[
            &[0, 1, 0, 1, 0],
            &[1, 0, 0, 1, 0],
            &[0, 0, 0, 0, 1],
            &[8, 8, 0, 0, 0],
            &[0, 0, 1, 0, 0],
        ]);
        let b = Mat::from_ints(&[
            &[0, 1, 0, 0, 8],
            &[1, 0, 0, 0, 8],
            &[1, 1, 0, 0, 0],
            &[0, 0, 1, 0, 0],
            &[0, 0, 0, 1, 0],
        ]);
        game(a, b)
    }

    #[test]
    fn not_cycle_game_is_resbi() {
        let r = validate_class(&not_cycle_resbi(), GameClass::ResBi);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn resbi_rejects_overloaded_eight_column() {
        // Column 0 has one 8 and three 1s: "at most two entries from {1,2}"
        // is violated.
        let a = Mat::from_ints(&[
            &[1, 0, 0, 0, 0],
            &[1, 0, 0, 0, 0],
            &[1, 0, 0, 0, 0],
            &[8, 0, 0, 0, 1],
            &[0, 1, 1, 1, 0],
        ]);
        let b = Mat::zero(5, 5);
        let b = {
            let mut b = b;
            b.set(0, 0, int(1));
            b
        };
        let r = validate_class(&game(a, b), GameClass::ResBi);
        assert!(!r.passed());
        assert!(r
            .violations
            .iter()
            .any(|v| v.location == Location::ACol(0)));
    }

    #[test]
    fn identity_is_winlose_3_sparse() {
        let g = game(
            Mat::from_ints(&[&[1, 0], &[0, 1]]),
            Mat::from_ints(&[&[1, 0], &[0, 1]]),
        );
        assert!(validate_class(&g, GameClass::WinLose3Sparse).passed());
    }

    #[test]
    fn winlose_implies_zero_one_entries() {
        let g = game(
            Mat::from_ints(&[&[1, 0, 1], &[0, 1, 0], &[1, 1, 0]]),
            Mat::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
        );
        assert!(validate_class(&g, GameClass::WinLose3Sparse).passed());
        for m in [g.a(), g.b()] {
            for e in m.iter() {
                assert!(*e == int(0) || *e == int(1));
            }
        }
    }

    #[test]
    fn winlose_rejects_four_ones_in_a_row() {
        let g = game(
            Mat::from_ints(&[&[1, 1, 1, 1], &[0; 4], &[0; 4], &[0; 4]]),
            Mat::zero(4, 4),
        );
        assert!(!validate_class(&g, GameClass::WinLose3Sparse).passed());
    }

    #[test]
    fn stage2_cooccurrence_rule() {
        // Row 0 has two 2s; column 0 carries one 1 but column 2 has none.
        let a = Mat::from_ints(&[&[2, 0, 2, 0], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        let b = Mat::from_ints(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let r = validate_class(&game(a, b), GameClass::Stage2);
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.clause.contains("column 2")));
    }

    #[test]
    fn resbi_requires_square() {
        let g = game(Mat::from_ints(&[&[1, 1]]), Mat::from_ints(&[&[1, 0]]));
        let r = validate_class(&g, GameClass::ResBi);
        assert!(r
            .violations
            .iter()
            .any(|v| v.location == Location::Global));
    }
}
