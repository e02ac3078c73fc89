//! Exact Gaussian elimination.

pub(crate) mod modular;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution<T> {
    /// Full column rank and consistent.
    Unique(Vec<T>),
    /// No solution exists.
    Inconsistent { rank: usize },
    /// Consistent, but the null space is nontrivial. `particular` sets every
    /// free variable to zero.
    Underdetermined { rank: usize, particular: Vec<T> },
}

/// Solve `matrix · x = rhs` exactly. `matrix` is row-major; every row must
/// have the same length.
///
/// Pivots are the first nonzero entry in each column, so the result depends
/// only on the input, never on magnitudes.
///
/// Scalar types may answer through [`Scalar::certified_solve`] first; the
/// result is the same either way.
pub fn exact_linear_solve<T: Scalar>(matrix: &[Vec<T>], rhs: &[T]) -> LinearSolution<T> {
    assert_eq!(matrix.len(), rhs.len(), "one right-hand side entry per row");
    if let Some(found) = T::certified_solve(matrix, rhs) {
        return found;
    }
    gaussian_solve(matrix, rhs)
}

/// Plain fraction-exact Gauss elimination, without any fast path.
pub fn gaussian_solve<T: Scalar>(matrix: &[Vec<T>], rhs: &[T]) -> LinearSolution<T> {
    assert_eq!(matrix.len(), rhs.len(), "one right-hand side entry per row");
    let cols = matrix.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<T>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = T::one() / rows[rank][col].clone();
        for v in rows[rank][col..].iter_mut() {
            *v *= &inv;
        }
        let (done, rest) = rows.split_at_mut(rank + 1);
        let pivot_row = &done[rank];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *v -= &factor.mul_ref(p);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }

    if rows[rank..].iter().any(|r| !r[cols].is_zero()) {
        return LinearSolution::Inconsistent { rank };
    }

    let mut x = vec![T::zero(); cols];
    for (i, &col) in pivots.iter().enumerate().rev() {
        let mut v = rows[i][cols].clone();
        for j in col + 1..cols {
            if !rows[i][j].is_zero() && !x[j].is_zero() {
                v -= &rows[i][j].mul_ref(&x[j]);
            }
        }
        x[col] = v;
    }

    if rank == cols {
        LinearSolution::Unique(x)
    } else {
        LinearSolution::Underdetermined { rank, particular: x }
    }
}
