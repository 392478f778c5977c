//! Small dense linear algebra over [`Scalar`] matrices.

use crate::scalar::Scalar;

/// Pivots of Gaussian elimination without row exchanges.
///
/// The `k`-th pivot is the ratio of consecutive leading principal minors, so
/// all leading minors are positive exactly when every pivot is. Elimination
/// stops after the first pivot that is not strictly positive; that pivot is
/// the last element of the result.
pub fn leading_pivots(m: &[Vec<Scalar>]) -> Vec<Scalar> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[k][k].clone();
        pivots.push(p.clone());
        if !p.is_positive() {
            break;
        }
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] = &a[i][j] - &d;
            }
        }
    }
    pivots
}

/// True when the symmetric matrix `m` is positive definite (Sylvester).
pub fn is_positive_definite(m: &[Vec<Scalar>]) -> bool {
    let p = leading_pivots(m);
    p.len() == m.len() && p.iter().all(Scalar::is_positive)
}

/// Inverse by Gauss–Jordan elimination with partial pivoting, or `None` if
/// the matrix is singular.
pub fn inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mode = m.first()?.first()?.mode();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Scalar::from_int(mode, (i == j) as i64))
                .collect()
        })
        .collect();
    for k in 0..n {
        let piv = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .max_by(|&r, &s| {
                a[r][k]
                    .abs()
                    .partial_cmp(&a[s][k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
        a.swap(k, piv);
        inv.swap(k, piv);
        let p = a[k][k].clone();
        for j in 0..n {
            a[k][j] = &a[k][j] / &p;
            inv[k][j] = &inv[k][j] / &p;
        }
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let d = &f * &a[k][j];
                a[i][j] = &a[i][j] - &d;
                let d = &f * &inv[k][j];
                inv[i][j] = &inv[i][j] - &d;
            }
        }
    }
    Some(inv)
}

pub fn mat_vec(m: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(a, b)| a * b)
                .reduce(|x, y| x + y)
                .expect("nonempty row")
        })
        .collect()
}

/// `vᵀ m v`.
pub fn quadratic(m: &[Vec<Scalar>], v: &[Scalar]) -> Scalar {
    mat_vec(m, v)
        .iter()
        .zip(v)
        .map(|(a, b)| a * b)
        .reduce(|x, y| x + y)
        .expect("nonempty vector")
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .map(|(x, brow)| x * &brow[j])
                        .reduce(|p, q| p + q)
                        .expect("nonempty row")
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}
