//! Dense exact linear algebra for the small systems the polytope code needs.

use alloc::vec::Vec;

use crate::rational::Rational;

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= &t;
            }
            let t = &f * &b[col];
            b[r] -= &t;
        }
    }
    Some(b)
}

/// Row rank by fraction-exact elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            for c in col..cols {
                let t = &f * &rows[rank][c];
                rows[r][c] -= &t;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use alloc::vec;

    #[test]
    fn solves_and_detects_singular() {
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let x = solve_square(a, vec![q(3, 1), q(5, 1)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        let s = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(solve_square(s, vec![q(1, 1), q(1, 1)]).is_none());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![
            vec![q(1, 1), q(0, 1), q(1, 1)],
            vec![q(2, 1), q(0, 1), q(2, 1)],
            vec![q(0, 1), q(1, 2), q(0, 1)],
        ];
        assert_eq!(rank(rows), 2);
    }
}
