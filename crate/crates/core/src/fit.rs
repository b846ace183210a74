//! Tiny dense least-squares for short-time fits.

use crate::error::{Error, Result};

/// Least-squares coefficients for `ys ~ sum_j c_j * design[j]`, via normal
/// equations and Gaussian elimination with partial pivoting. Meant for a
/// handful of basis functions, not large systems.
pub fn least_squares(design: &[Vec<f64>], ys: &[f64]) -> Result<Vec<f64>> {
    let k = design.len();
    let n = ys.len();
    if k == 0 || n < k {
        return Err(Error::Numeric(format!("least_squares: {n} samples for {k} parameters")));
    }
    if design.iter().any(|col| col.len() != n) {
        return Err(Error::Numeric("least_squares: ragged design matrix".into()));
    }
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = design[i].iter().zip(&design[j]).map(|(x, y)| x * y).sum();
        }
        a[i][k] = design[i].iter().zip(ys).map(|(x, y)| x * y).sum();
    }
    for col in 0..k {
        let piv = (col..k)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        if a[col][col] == 0.0 {
            return Err(Error::Numeric("least_squares: singular normal equations".into()));
        }
        for row in (col + 1)..k {
            let m = a[row][col] / a[col][col];
            for j in col..=k {
                a[row][j] -= m * a[col][j];
            }
        }
    }
    let mut out = vec![0.0; k];
    for i in (0..k).rev() {
        let mut acc = a[i][k];
        for j in (i + 1)..k {
            acc -= a[i][j] * out[j];
        }
        out[i] = acc / a[i][i];
    }
    Ok(out)
}
