//! Gaussian elimination for the small indifference systems the solvers build.
//!
//! Systems stay exact in rational mode. In float mode, pivots smaller in
//! magnitude than [`FLOAT_MARGIN`](crate::scalar::FLOAT_MARGIN) are treated
//! as zero.

use crate::scalar::{Scalar, FLOAT_MARGIN};

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Unique(Vec<Scalar>),
    Underdetermined,
    Inconsistent,
}

fn is_effectively_zero(x: &Scalar) -> bool {
    match x {
        Scalar::Rational(_) => x.is_zero(),
        Scalar::Float(v) => v.abs() <= FLOAT_MARGIN,
    }
}

/// Solve a (possibly non-square) linear system by row reduction.
///
/// `a` is row-major with `b.len()` rows. Returns [`Solution::Unique`] with one
/// value per column when the system pins every unknown, and classifies rank
/// deficiencies otherwise.
pub fn solve_linear_system(a: &[Vec<Scalar>], b: &[Scalar]) -> Solution {
    let rows = a.len();
    assert_eq!(rows, b.len(), "matrix/rhs row mismatch");
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_row = 0usize;
    let mut pivot_cols = Vec::new();
    for col in 0..cols {
        // Largest-magnitude pivot keeps float mode stable; for rationals any
        // nonzero pivot is exact, and taking the max keeps the scan single.
        let mut best: Option<(usize, Scalar)> = None;
        for (r, row) in aug.iter().enumerate().skip(pivot_row) {
            let candidate = &row[col];
            if is_effectively_zero(candidate) {
                continue;
            }
            let mag = candidate.abs();
            match &best {
                Some((_, m)) if *m >= mag => {}
                _ => best = Some((r, mag)),
            }
        }
        let Some((r, _)) = best else { continue };
        aug.swap(pivot_row, r);
        let pivot = aug[pivot_row][col].clone();
        for x in aug[pivot_row].iter_mut() {
            *x = &*x / &pivot;
        }
        for other in 0..rows {
            if other == pivot_row || is_effectively_zero(&aug[other][col]) {
                continue;
            }
            let factor = aug[other][col].clone();
            // Two rows of `aug` are live at once, so this stays an index loop.
            #[allow(clippy::needless_range_loop)]
            for c in col..=cols {
                let delta = &factor * &aug[pivot_row][c];
                aug[other][c] = &aug[other][c] - &delta;
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }

    for row in aug.iter().skip(pivot_row) {
        if !is_effectively_zero(&row[cols]) {
            return Solution::Inconsistent;
        }
    }
    if pivot_cols.len() < cols {
        return Solution::Underdetermined;
    }

    let mut x = vec![Scalar::zero(); cols];
    for (row, &col) in pivot_cols.iter().enumerate() {
        x[col] = aug[row][cols].clone();
    }
    Solution::Unique(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        Scalar::from_decimal_str(text).unwrap()
    }

    #[test]
    fn solves_exact_two_by_two() {
        // x + y = 1, 0.084*x - 0.09*y = 0  =>  x = 15/29, y = 14/29
        let a = vec![
            vec![s("1"), s("1")],
            vec![s("0.084"), s("-0.09")],
        ];
        let b = vec![s("1"), s("0")];
        let Solution::Unique(x) = solve_linear_system(&a, &b) else {
            panic!("expected unique solution");
        };
        assert_eq!(x[0], s("15/29"));
        assert_eq!(x[1], s("14/29"));
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![vec![s("1"), s("1")], vec![s("2"), s("2")]];
        let b = vec![s("1"), s("3")];
        assert_eq!(solve_linear_system(&a, &b), Solution::Inconsistent);
    }

    #[test]
    fn detects_underdetermined() {
        let a = vec![vec![s("1"), s("1")], vec![s("2"), s("2")]];
        let b = vec![s("1"), s("2")];
        assert_eq!(solve_linear_system(&a, &b), Solution::Underdetermined);
    }

    #[test]
    fn overdetermined_but_consistent_is_unique() {
        let a = vec![vec![s("1")], vec![s("2")]];
        let b = vec![s("3"), s("6")];
        assert_eq!(
            solve_linear_system(&a, &b),
            Solution::Unique(vec![s("3")])
        );
    }

    #[test]
    fn float_mode_solves_with_pivoting() {
        let a = vec![
            vec![Scalar::from_f64(1e-20), Scalar::from_f64(1.0)],
            vec![Scalar::from_f64(1.0), Scalar::from_f64(1.0)],
        ];
        let b = vec![Scalar::from_f64(1.0), Scalar::from_f64(2.0)];
        let Solution::Unique(x) = solve_linear_system(&a, &b) else {
            panic!("expected unique solution");
        };
        assert!((x[0].to_f64() - 1.0).abs() < 1e-9);
        assert!((x[1].to_f64() - 1.0).abs() < 1e-9);
    }
}
