//! Symmetric banded matrices with an inertia-based eigensolver.
//!
//! Dense solvers are overkill for the tridiagonal and pentadiagonal operators
//! produced by finite differencing, and pulling in a LAPACK binding for two
//! stencils is not worth the build complexity.  `count_below` runs a banded
//! LDLᵀ sweep and counts negative pivots (Sylvester inertia), eigenvalues come
//! from per-index bisection on that count, and eigenvectors from inverse
//! iteration with a banded partially pivoted LU.  Everything is deterministic:
//! the inverse-iteration start vectors come from a fixed LCG.

use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct SymBanded {
    n: usize,
    bw: usize,
    /// bands[d][i] = A[i][i + d]
    bands: Vec<Vec<f64>>,
}

impl SymBanded {
    pub fn new(n: usize, bw: usize) -> Self {
        assert!(n > 0 && bw < n, "bandwidth must be below the dimension");
        let bands = (0..=bw).map(|d| vec![0.0; n - d]).collect();
        SymBanded { n, bw, bands }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.bw {
            0.0
        } else {
            self.bands[d][lo]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        assert!(d <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        self.bands[d][lo] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let old = self.get(i, j);
        self.set(i, j, old + value);
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.bw);
            let hi = (i + self.bw).min(self.n - 1);
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += self.get(i, j) * x[j];
            }
            *yi = acc;
        }
        y
    }

    /// Interval certain to contain the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let d = self.get(i, i);
            let mut radius = 0.0;
            let a = i.saturating_sub(self.bw);
            let b = (i + self.bw).min(self.n - 1);
            for j in a..=b {
                if j != i {
                    radius += self.get(i, j).abs();
                }
            }
            lo = lo.min(d - radius);
            hi = hi.max(d + radius);
        }
        (lo, hi)
    }

    pub fn magnitude(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs()).max(1.0)
    }

    /// Number of eigenvalues below `mu` (inertia of `A - mu I`).
    ///
    /// Zero pivots are nudged to a tiny negative value, so an exact eigenvalue
    /// hit counts as "below"; bisection on this count is still exact to
    /// machine precision.
    pub fn count_below(&self, mu: f64) -> usize {
        let scale = self.magnitude();
        for attempt in 0..6 {
            let shifted = mu + attempt as f64 * 1e-14 * scale;
            if let Some(c) = self.try_count_below(shifted) {
                return c;
            }
        }
        // Last resort: treat non-finite pivots as negative.
        self.try_count_below_lossy(mu)
    }

    fn try_count_below(&self, mu: f64) -> Option<usize> {
        let b = self.bw;
        let n = self.n;
        let tiny = -f64::MIN_POSITIVE;
        let mut d = vec![0.0f64; n];
        // l[i][t] = L[i][i - b + t] for t = 0..b
        let mut l = vec![vec![0.0f64; b]; n];
        let mut count = 0usize;
        for i in 0..n {
            let base_i = i.saturating_sub(b);
            for j in base_i..i {
                let base_j = j.saturating_sub(b);
                let mut sum = self.get(j, i);
                let kstart = base_i.max(base_j);
                for k in kstart..j {
                    sum -= l[i][k - base_i] * l[j][k - base_j] * d[k];
                }
                l[i][j - base_i] = sum / d[j];
            }
            let mut diag = self.get(i, i) - mu;
            for k in base_i..i {
                let lik = l[i][k - base_i];
                diag -= lik * lik * d[k];
            }
            if !diag.is_finite() {
                return None;
            }
            if diag == 0.0 {
                diag = tiny;
            }
            if diag < 0.0 {
                count += 1;
            }
            d[i] = diag;
        }
        Some(count)
    }

    fn try_count_below_lossy(&self, mu: f64) -> usize {
        let b = self.bw;
        let n = self.n;
        let mut d = vec![0.0f64; n];
        let mut l = vec![vec![0.0f64; b]; n];
        let mut count = 0usize;
        for i in 0..n {
            let base_i = i.saturating_sub(b);
            for j in base_i..i {
                let base_j = j.saturating_sub(b);
                let mut sum = self.get(j, i);
                for k in base_i.max(base_j)..j {
                    sum -= l[i][k - base_i] * l[j][k - base_j] * d[k];
                }
                let denom = if d[j] == 0.0 || !d[j].is_finite() { -f64::MIN_POSITIVE } else { d[j] };
                l[i][j - base_i] = sum / denom;
            }
            let mut diag = self.get(i, i) - mu;
            for k in base_i..i {
                let lik = l[i][k - base_i];
                if lik.is_finite() {
                    diag -= lik * lik * d[k];
                }
            }
            if !(diag > 0.0) {
                count += 1;
            }
            d[i] = if diag == 0.0 { -f64::MIN_POSITIVE } else { diag };
        }
        count
    }

    /// The `k` smallest eigenvalues, ascending, by bisection on the inertia
    /// count.  Runs in parallel across indices.
    pub fn eigenvalues_lowest(&self, k: usize) -> Vec<f64> {
        assert!(k <= self.n, "asked for {k} eigenvalues of a {}-dim matrix", self.n);
        let (glo, ghi) = self.gershgorin();
        (0..k)
            .into_par_iter()
            .map(|j| {
                let mut lo = glo;
                let mut hi = ghi;
                for _ in 0..120 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.count_below(mid) >= j + 1 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            })
            .collect()
    }

    /// Solve `(A - lambda I) x = rhs` with banded LU and partial pivoting.
    /// Row swaps widen the upper band to `2 bw`.
    fn solve_shifted(&self, lambda: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let b = self.bw;
        let width = 3 * b + 1;
        // bb[r][j] = M[i][j] with i = j + r - 2b, r in 0..width
        let mut bb = vec![vec![0.0f64; n]; width];
        for j in 0..n {
            let ilo = j.saturating_sub(b);
            let ihi = (j + b).min(n - 1);
            for i in ilo..=ihi {
                let mut v = self.get(i, j);
                if i == j {
                    v -= lambda;
                }
                bb[2 * b + i - j][j] = v;
            }
        }
        let mut x = rhs.to_vec();
        let scale = self.magnitude();
        for j in 0..n {
            // pivot among rows j..=j+b
            let imax = (j + b).min(n - 1);
            let mut piv_row = j;
            let mut piv_val = bb[2 * b][j].abs();
            for i in (j + 1)..=imax {
                let v = bb[2 * b + i - j][j].abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = i;
                }
            }
            if piv_row != j {
                let chi = (j + 2 * b).min(n - 1);
                for c in j..=chi {
                    // both rows are inside the widened band for these columns
                    let ra = 2 * b + j;
                    let rb = 2 * b + piv_row;
                    if ra >= c && ra - c < width && rb >= c && rb - c < width {
                        let (ia, ib) = (ra - c, rb - c);
                        let tmp = bb[ia][c];
                        bb[ia][c] = bb[ib][c];
                        bb[ib][c] = tmp;
                    }
                }
                x.swap(j, piv_row);
            }
            let mut pivot = bb[2 * b][j];
            if pivot == 0.0 {
                pivot = 1e-30 * scale;
                bb[2 * b][j] = pivot;
            }
            for i in (j + 1)..=imax {
                let m = bb[2 * b + i - j][j] / pivot;
                if m == 0.0 {
                    continue;
                }
                bb[2 * b + i - j][j] = 0.0;
                let chi = (j + 2 * b).min(n - 1);
                for c in (j + 1)..=chi {
                    let contrib = bb[2 * b + j - c][c];
                    if contrib != 0.0 {
                        bb[2 * b + i - c][c] -= m * contrib;
                    }
                }
                x[i] -= m * x[j];
            }
        }
        for j in (0..n).rev() {
            let chi = (j + 2 * b).min(n - 1);
            let mut acc = x[j];
            for c in (j + 1)..=chi {
                acc -= bb[2 * b + j - c][c] * x[c];
            }
            let mut pivot = bb[2 * b][j];
            if pivot == 0.0 {
                pivot = 1e-30 * scale;
            }
            x[j] = acc / pivot;
        }
        x
    }

    /// Inverse iteration at `lambda`; returns the normalized vector and the
    /// residual `max_i |(A v - lambda v)_i|`.  `seed` varies the deterministic
    /// start vector, which matters inside degenerate clusters.
    pub fn inverse_iteration(&self, lambda: f64, seed: u64) -> (Vec<f64>, f64) {
        let n = self.n;
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect();
        normalize(&mut v);
        for _ in 0..4 {
            v = self.solve_shifted(lambda, &v);
            normalize(&mut v);
        }
        // fix the overall sign: largest-magnitude entry positive
        let mut imax = 0;
        for (i, val) in v.iter().enumerate() {
            if val.abs() > v[imax].abs() {
                imax = i;
            }
        }
        if v[imax] < 0.0 {
            for val in v.iter_mut() {
                *val = -*val;
            }
        }
        let av = self.matvec(&v);
        let mut residual = 0.0f64;
        for i in 0..n {
            residual = residual.max((av[i] - lambda * v[i]).abs());
        }
        (v, residual)
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplace_1d(n: usize) -> SymBanded {
        let mut m = SymBanded::new(n, 1);
        for i in 0..n {
            m.set(i, i, 2.0);
            if i + 1 < n {
                m.set(i, i + 1, -1.0);
            }
        }
        m
    }

    #[test]
    fn tridiagonal_spectrum_is_exact() {
        let n = 12;
        let m = laplace_1d(n);
        let eigs = m.eigenvalues_lowest(n);
        for (k, lam) in eigs.iter().enumerate() {
            let expect = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n as f64 + 1.0)).cos();
            assert!((lam - expect).abs() < 1e-12, "k={k}: {lam} vs {expect}");
        }
    }

    #[test]
    fn inertia_counting() {
        let m = laplace_1d(8);
        assert_eq!(m.count_below(0.0), 0);
        assert_eq!(m.count_below(4.1), 8);
        let mid = 2.0; // four eigenvalues below the band center
        assert_eq!(m.count_below(mid), 4);
    }

    #[test]
    fn eigenvector_matches_sine_profile() {
        let n = 30;
        let m = laplace_1d(n);
        let eigs = m.eigenvalues_lowest(3);
        let (v, residual) = m.inverse_iteration(eigs[0], 1);
        assert!(residual < 1e-10, "residual {residual}");
        let norm: f64 = (0..n)
            .map(|i| ((i + 1) as f64 * PI / (n as f64 + 1.0)).sin().powi(2))
            .sum::<f64>()
            .sqrt();
        for i in 0..n {
            let expect = ((i + 1) as f64 * PI / (n as f64 + 1.0)).sin() / norm;
            assert!((v[i] - expect).abs() < 1e-8, "i={i}");
        }
    }

    #[test]
    fn pentadiagonal_square_has_squared_spectrum() {
        // B = T^2 exactly, so spec(B) = spec(T)^2
        let n = 14;
        let t = laplace_1d(n);
        let mut b = SymBanded::new(n, 2);
        for i in 0..n {
            for j in i..(i + 3).min(n) {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += t.get(i, k) * t.get(k, j);
                }
                if acc != 0.0 {
                    b.set(i, j, acc);
                }
            }
        }
        let te = t.eigenvalues_lowest(n);
        let be = b.eigenvalues_lowest(n);
        let mut squared: Vec<f64> = te.iter().map(|x| x * x).collect();
        squared.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in be.iter().zip(squared.iter()) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let mut m = SymBanded::new(6, 1);
        for i in 0..6 {
            m.set(i, i, 1.0);
        }
        let eigs = m.eigenvalues_lowest(6);
        for lam in &eigs {
            assert!((lam - 1.0).abs() < 1e-13);
        }
        let (v, residual) = m.inverse_iteration(1.0, 3);
        assert!(residual < 1e-12);
        let norm: f64 = v.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shifted_solve_recovers_rhs() {
        let m = laplace_1d(9);
        let x_true: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).sin()).collect();
        let shifted_apply: Vec<f64> = {
            let av = m.matvec(&x_true);
            av.iter().zip(&x_true).map(|(a, x)| a - 0.37 * x).collect()
        };
        let x = m.solve_shifted(0.37, &shifted_apply);
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).abs() < 1e-11);
        }
    }
}
