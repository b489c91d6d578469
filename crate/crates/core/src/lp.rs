//! Exact phase-one simplex for `A x = b, x >= 0` feasibility.
//!
//! Pivoting follows Bland's rule, so runs are deterministic and cannot
//! cycle. On infeasibility the phase-one duals give a Farkas vector `y`
//! with `yᵀA <= 0` componentwise and `yᵀb > 0`.

use alloc::vec;
use alloc::vec::Vec;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A nonnegative solution of the system.
    Feasible(Vec<Rational>),
    /// Farkas multipliers, one per row.
    Infeasible(Vec<Rational>),
}

/// Decides `A x = b, x >= 0`. `a` is row-major with `b.len()` rows.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    let m = b.len();
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(a.len(), m, "row count mismatch");
    let width = n + m;

    let mut sign = vec![Rational::one(); m];
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    for i in 0..m {
        assert_eq!(a[i].len(), n, "ragged constraint matrix");
        let flip = b[i].is_negative();
        if flip {
            sign[i] = -Rational::one();
        }
        let mut row: Vec<Rational> = a[i]
            .iter()
            .map(|v| if flip { -v } else { v.clone() })
            .collect();
        row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        rows.push(row);
        rhs.push(if flip { -&b[i] } else { b[i].clone() });
    }
    let mut basis: Vec<usize> = (n..width).collect();

    // Reduced costs for minimizing the sum of artificials.
    let mut reduced = vec![Rational::zero(); width];
    for (j, d) in reduced.iter_mut().enumerate().take(n) {
        *d = -rows.iter().map(|r| &r[j]).sum::<Rational>();
    }
    let mut objective: Rational = rhs.iter().sum();

    while let Some(enter) = reduced.iter().position(Rational::is_negative) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            let t = &rows[i][enter];
            if !t.is_positive() {
                continue;
            }
            let ratio = &rhs[i] / t;
            leave = match leave {
                None => Some((i, ratio)),
                Some((r, best)) => {
                    if ratio < best || (ratio == best && basis[i] < basis[r]) {
                        Some((i, ratio))
                    } else {
                        Some((r, best))
                    }
                }
            };
        }
        // The phase-one objective is bounded below by zero.
        let (r, _) = leave.expect("phase one is bounded");
        pivot(&mut rows, &mut rhs, r, enter);
        let d = reduced[enter].clone();
        for (dj, pj) in reduced.iter_mut().zip(&rows[r]) {
            if !pj.is_zero() {
                *dj -= &(&d * pj);
            }
        }
        objective += &(&d * &rhs[r]);
        basis[r] = enter;
    }

    if objective.is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &j) in basis.iter().enumerate() {
            if j < n {
                x[j] = rhs[i].clone();
            }
        }
        Feasibility::Feasible(x)
    } else {
        let y = (0..m)
            .map(|i| &sign[i] * &(Rational::one() - &reduced[n + i]))
            .collect();
        Feasibility::Infeasible(y)
    }
}

fn pivot(rows: &mut [Vec<Rational>], rhs: &mut [Rational], r: usize, col: usize) {
    let inv = rows[r][col].recip();
    for v in rows[r].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    rhs[r] *= &inv;
    let pivot_row = rows[r].clone();
    let pivot_rhs = rhs[r].clone();
    for i in 0..rows.len() {
        if i == r || rows[i][col].is_zero() {
            continue;
        }
        let f = rows[i][col].clone();
        for (v, p) in rows[i].iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &(&f * p);
            }
        }
        rhs[i] -= &(&f * &pivot_rhs);
    }
}

/// `x >= 0` and `A x = b`, by direct evaluation.
pub fn is_solution(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) -> bool {
    if a.len() != b.len() || a.iter().any(|r| r.len() != x.len()) {
        return false;
    }
    x.iter().all(|v| !v.is_negative())
        && a.iter().zip(b).all(|(row, bi)| {
            row.iter().zip(x).map(|(aij, xj)| aij * xj).sum::<Rational>() == *bi
        })
}

/// `yᵀA <= 0` componentwise and `yᵀb > 0`, by direct evaluation.
pub fn is_farkas(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) -> bool {
    if a.len() != b.len() || y.len() != b.len() {
        return false;
    }
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != n) {
        return false;
    }
    let yb: Rational = y.iter().zip(b).map(|(yi, bi)| yi * bi).sum();
    if !yb.is_positive() {
        return false;
    }
    (0..n).all(|j| {
        let col: Rational = y.iter().zip(a).map(|(yi, row)| yi * &row[j]).sum();
        !col.is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|x| Rational::from(*x)).collect()
    }

    #[test]
    fn feasible_simple() {
        let a = vec![r(&[1, 1, 0]), r(&[0, 1, 1])];
        let b = vec![q(1, 2), q(3, 4)];
        match solve(&a, &b) {
            Feasibility::Feasible(x) => assert!(is_solution(&a, &b, &x)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_gives_farkas() {
        // x1 + x2 = 1 and x1 + x2 = 2
        let a = vec![r(&[1, 1]), r(&[1, 1])];
        let b = r(&[1, 2]);
        match solve(&a, &b) {
            Feasibility::Infeasible(y) => assert!(is_farkas(&a, &b, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs() {
        // -x = -3 is feasible; x = -3 is not
        let a = vec![r(&[-1])];
        assert_eq!(solve(&a, &r(&[-3])), Feasibility::Feasible(r(&[3])));
        let b = r(&[-3]);
        let a = vec![r(&[1])];
        match solve(&a, &b) {
            Feasibility::Infeasible(y) => assert!(is_farkas(&a, &b, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_rows() {
        let a = vec![r(&[1, 1, 1]), r(&[2, 2, 2]), r(&[1, 0, 0])];
        let b = vec![Rational::one(), Rational::from(2), q(1, 3)];
        match solve(&a, &b) {
            Feasibility::Feasible(x) => assert!(is_solution(&a, &b, &x)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn verifiers_reject_bad_witnesses() {
        let a = vec![r(&[1, 1])];
        let b = r(&[1]);
        assert!(!is_solution(&a, &b, &r(&[2, -1])));
        assert!(!is_farkas(&a, &b, &r(&[0])));
        assert!(!is_farkas(&a, &b, &r(&[1])));
    }

    proptest::proptest! {
        #[test]
        fn witness_always_verifies(
            entries in proptest::collection::vec(-3i64..4, 12),
            rhs in proptest::collection::vec(-5i64..6, 3),
        ) {
            let a: Vec<Vec<Rational>> = entries.chunks(4).map(r).collect();
            let b = r(&rhs);
            match solve(&a, &b) {
                Feasibility::Feasible(x) => proptest::prop_assert!(is_solution(&a, &b, &x)),
                Feasibility::Infeasible(y) => proptest::prop_assert!(is_farkas(&a, &b, &y)),
            }
        }
    }
}
