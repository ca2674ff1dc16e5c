//! Exact row reduction over a [`Scalar`] field.

#![allow(clippy::needless_range_loop)]

use super::scalar::{Rational, Scalar};

pub type Matrix<K> = Vec<Vec<K>>;

/// Reduced row echelon form: the nonzero rows and their pivot columns.
/// Two row spaces are equal iff their reduced forms are equal.
pub fn rref<K: Scalar>(mut rows: Matrix<K>, ncols: usize) -> (Matrix<K>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for v in rows[r].iter_mut() {
            *v = v.mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let d = f.mul(&rows[r][j]);
                    rows[i][j] = rows[i][j].sub(&d);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A basis of `{x : Σ_j row_j x_j = 0 for every row}`, itself in reduced
/// form.
pub fn kernel<K: Scalar>(rows: Matrix<K>, ncols: usize) -> Matrix<K> {
    let (reduced, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![K::zero(); ncols];
            v[fc] = K::one();
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = row[fc].neg();
            }
            v
        })
        .collect();
    rref(basis, ncols).0
}

/// Solves `a x = b` for square invertible `a`.
pub fn solve<K: Scalar>(a: &Matrix<K>, b: &[K]) -> Option<Vec<K>> {
    let n = a.len();
    let augmented: Matrix<K> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let (reduced, pivots) = rref(augmented, n + 1);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(reduced.into_iter().map(|row| row[n].clone()).collect())
}

/// Leading principal minors `D_1, .., D_n`, by Gaussian elimination
/// without row exchanges (`D_k` is the product of the first `k` pivots).
/// Elimination stops at the first zero pivot; the remaining minors from
/// that point on are not computed and the returned list is shorter.
pub fn leading_minors(m: &Matrix<Rational>) -> Vec<Rational> {
    let n = m.len();
    let mut a = m.clone();
    let mut minors = Vec::with_capacity(n);
    let mut det = Rational::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        det = det.mul(&pivot);
        minors.push(det.clone());
        let Some(inv) = pivot.inv() else {
            break;
        };
        for i in k + 1..n {
            let f = a[i][k].mul(&inv);
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let d = f.mul(&a[k][j]);
                a[i][j] = a[i][j].sub(&d);
            }
        }
    }
    minors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let (a, pa) = rref(m(&[&[2, 4, 0], &[1, 2, 1]]), 3);
        let (b, pb) = rref(m(&[&[1, 2, 1], &[0, 0, 3], &[3, 6, 3]]), 3);
        assert_eq!(a, b);
        assert_eq!(pa, vec![0, 2]);
        assert_eq!(pa, pb);
    }

    #[test]
    fn kernel_of_plane() {
        // x + y = 0
        let k = kernel(m(&[&[1, 1]]), 2);
        assert_eq!(k, m(&[&[1, -1]]));
        assert_eq!(kernel::<Rational>(Vec::new(), 2).len(), 2);
    }

    #[test]
    fn solve_small_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[q(3), q(5)]).unwrap();
        // 2x + y = 3, x + 3y = 5 → x = 4/5, y = 7/5
        assert_eq!(x, vec![Rational::new(4, 5), Rational::new(7, 5)]);
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[q(1), q(2)]).is_none());
    }

    #[test]
    fn minors_match_determinants() {
        let a = m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(leading_minors(&a), vec![q(2), q(3), q(4)]);
        let b = m(&[&[1, 0], &[0, -1]]);
        assert_eq!(leading_minors(&b), vec![q(1), q(-1)]);
    }
}
