//! Small exact matrices over the rationals. Everything here is sized by the
//! genus (at most 6), so plain dense algorithms are used.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_i, Rat};

pub type Mat = Vec<Vec<Rat>>;

pub fn is_square(m: &Mat) -> bool {
    let n = m.len();
    m.iter().all(|row| row.len() == n)
}

pub fn is_symmetric(m: &Mat) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Row vector times matrix: `(v M)_j = sum_i v_i M_ij`.
pub fn vec_mat(v: &[Rat], m: &Mat) -> Vec<Rat> {
    let n = m.len();
    debug_assert_eq!(v.len(), n);
    (0..n)
        .map(|j| (0..n).fold(Rat::zero(), |acc, i| acc + &v[i] * &m[i][j]))
        .collect()
}

/// Integer row vector times matrix.
pub fn ivec_mat(v: &[i64], m: &Mat) -> Vec<Rat> {
    let vr: Vec<Rat> = v.iter().map(|x| rat_i(*x)).collect();
    vec_mat(&vr, m)
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rat::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn invert(m: &Mat) -> Result<Mat> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: Mat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::NotPositiveDefinite("singular matrix".into()))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &f * &a[col][j];
                    inv[r][j] = &inv[r][j] - &f * &inv[col][j];
                }
            }
        }
    }
    Ok(inv)
}

/// Gershgorin diagonal-dominance margin `min_i (M_ii - sum_{j != i} |M_ij|)`.
pub fn gershgorin_margin(m: &Mat) -> Rat {
    let n = m.len();
    (0..n)
        .map(|i| {
            let off = (0..n)
                .filter(|&j| j != i)
                .fold(Rat::zero(), |acc, j| acc + m[i][j].abs());
            &m[i][i] - off
        })
        .min()
        .expect("nonempty matrix")
}
