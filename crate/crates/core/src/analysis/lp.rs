//! Exact feasibility for `A x = b, x >= 0` by a phase-one simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::Rational;

/// A nonnegative solution of `a x = b`, or `None` when the system is infeasible.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    // tableau over [x | artificials | rhs], rows normalized to b >= 0
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r = vec![Rational::zero(); width];
        for j in 0..n {
            r[j] = if flip { -row[j].clone() } else { row[j].clone() };
        }
        r[n + i] = Rational::one();
        r[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(r);
    }
    // objective: minimize the sum of artificials, written as reduced costs
    let mut obj = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (row, _) = leave?;
        pivot(&mut t, &mut obj, row, enter);
        basis[row] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], obj: &mut [Rational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            *v -= &f * pv;
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for (v, pv) in obj.iter_mut().zip(&pivot_row) {
            *v -= &f * pv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn solves_small_system() {
        // x + y = 1, y + z = 1, x + z = 1
        let a = vec![
            vec![q(1, 1), q(1, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1), q(1, 1)],
            vec![q(1, 1), q(0, 1), q(1, 1)],
        ];
        let b = vec![q(1, 1); 3];
        assert_eq!(feasible_point(&a, &b).unwrap(), vec![q(1, 2); 3]);
    }

    #[test]
    fn detects_infeasible() {
        // x + y = 1 and x + y = 2
        let a = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        assert!(feasible_point(&a, &[q(1, 1), q(2, 1)]).is_none());
        // x - y = -1 forces y >= 1 but y = 0 below
        let a = vec![vec![q(1, 1), q(-1, 1)], vec![q(0, 1), q(1, 1)]];
        assert!(feasible_point(&a, &[q(-1, 1), q(0, 1)]).is_none());
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        let x = feasible_point(&a, &[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(&x[0] + &x[1], q(1, 1));
    }
}
