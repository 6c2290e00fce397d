//! Dense exact linear algebra over rationals.
//!
//! Dimensions here are tiny (ambient rank at most eight or so), so plain
//! Gaussian elimination with exact pivoting is both simple and fast enough.
//! Matrices are row-major `Vec<Vec<Rat>>`.

use num::{One, Signed, Zero};

use crate::rational::Rat;
use crate::{Error, Result};

pub type Mat = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn transpose(m: &Mat) -> Mat {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Rat::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            acc += x * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &Mat, v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| crate::rational::dot(row, v)).collect()
}

/// Reduced row echelon form; returns `(rref, pivot_columns)`.
///
/// The RREF of a matrix is unique, which several callers exploit to get
/// path-independent canonical bases for row spaces.
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &Mat) -> usize {
    rref(m).1.len()
}

/// Solves the square system `a x = b` exactly.  `None` when `a` is singular.
pub fn solve(a: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut aug: Mat = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for x in aug[c].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=n {
                    let t = &f * &aug[c][j];
                    aug[i][j] -= t;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rat> = (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
        cols.push(solve(a, &e)?);
    }
    Some(transpose(&cols))
}

pub fn determinant(a: &Mat) -> Rat {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rat::zero() };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let t = &f * &m[c][j];
                    m[i][j] -= t;
                }
            }
        }
    }
    det
}

/// Checks positive definiteness of a symmetric matrix via leading principal
/// minors, reporting the first offending order.
pub fn check_positive_definite(a: &Mat) -> Result<()> {
    for k in 1..=a.len() {
        let minor: Mat = a[..k].iter().map(|row| row[..k].to_vec()).collect();
        if !determinant(&minor).is_positive() {
            return Err(Error::input(format!(
                "gram: not positive definite (leading minor of order {k})"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_vec};

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| rat_vec(r)).collect()
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &rat_vec(&[5, 10])).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &rat_vec(&[1, 1])).is_none());
    }

    #[test]
    fn rref_is_canonical() {
        // Two bases of the same row space reduce to the same RREF.
        let (r1, _) = rref(&m(&[&[1, 1, 1], &[0, 1, 2]]));
        let (r2, _) = rref(&m(&[&[2, 3, 4], &[1, 2, 3]]));
        assert_eq!(r1, r2);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4], &[3, 6]])), 1);
    }

    #[test]
    fn definiteness() {
        assert!(check_positive_definite(&m(&[&[2, -1], &[-1, 2]])).is_ok());
        let err = check_positive_definite(&m(&[&[-1]])).unwrap_err();
        assert!(err.to_string().contains("not positive definite"));
        // Semidefinite is rejected too.
        assert!(check_positive_definite(&m(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn determinant_basics() {
        assert_eq!(determinant(&m(&[&[3, 1], &[1, 2]])), rat(5));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), rat(0));
    }
}
