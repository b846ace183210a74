//! Finite-difference spectral solver on a Dirichlet interval.
//!
//! The Hamiltonian for kinetic term `alpha p^2` (or `alpha p^4`) plus a
//! potential is discretized on interior nodes of `[q_min, q_max]` with the
//! 3-point Laplacian, giving a symmetric banded matrix handled by
//! [`crate::banded::SymBanded`]. Eigenvalue error for the quadratic kinetic
//! term scales as `h^2`, so paired runs on a grid and its refinement can be
//! Richardson-extrapolated with [`richardson`].

use crate::banded::SymBanded;
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

/// Uniform grid of `n` interior nodes on `(q_min, q_max)` with Dirichlet
/// boundaries; spacing is `(q_max - q_min) / (n + 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    q_min: f64,
    q_max: f64,
    n: usize,
}

impl GridSpec {
    pub fn new(q_min: f64, q_max: f64, n: usize) -> Result<Self> {
        if !(q_min.is_finite() && q_max.is_finite()) || q_min >= q_max {
            return Err(Error::Config(format!(
                "grid endpoints must be finite with q_min < q_max, got [{q_min}, {q_max}]"
            )));
        }
        if n < 16 {
            return Err(Error::Config(format!("grid needs at least 16 interior nodes, got {n}")));
        }
        Ok(GridSpec { q_min, q_max, n })
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n + 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        self.q_min + (i + 1) as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Halved spacing on the same interval: `2n + 1` interior nodes, and
    /// coarse node `i` coincides exactly with fine node `2i + 1`.
    pub fn refine(&self) -> GridSpec {
        GridSpec { q_min: self.q_min, q_max: self.q_max, n: 2 * self.n + 1 }
    }
}

/// Kinetic term shape: `alpha p^2` (tridiagonal) or `alpha p^4`
/// (pentadiagonal, the squared 3-point Laplacian).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dispersion {
    P2,
    P4,
}

/// Discretized `alpha p^gamma + v(q)` with hbar = 1 and Dirichlet walls.
pub fn hamiltonian(
    alpha: f64,
    pot: &PotentialSpec,
    grid: &GridSpec,
    disp: Dispersion,
) -> Result<SymBanded> {
    pot.validate()?;
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::Config(format!("kinetic coefficient must be positive, got {alpha}")));
    }
    let n = grid.len();
    let h = grid.h();
    let mut m = match disp {
        Dispersion::P2 => {
            let mut m = SymBanded::new(n, 1);
            let t = alpha / (h * h);
            for i in 0..n {
                m.set(i, i, 2.0 * t);
                if i + 1 < n {
                    m.set(i, i + 1, -t);
                }
            }
            m
        }
        Dispersion::P4 => {
            let mut m = SymBanded::new(n, 2);
            let t = alpha / (h * h * h * h);
            for i in 0..n {
                let diag = if i == 0 || i == n - 1 { 5.0 } else { 6.0 };
                m.set(i, i, diag * t);
                if i + 1 < n {
                    m.set(i, i + 1, -4.0 * t);
                }
                if i + 2 < n {
                    m.set(i, i + 2, t);
                }
            }
            m
        }
    };
    for i in 0..n {
        let q = grid.node(i);
        let v = pot.v(q)?;
        if !v.is_finite() {
            return Err(Error::Domain(format!("potential not finite at q = {q}")));
        }
        m.add(i, i, v);
    }
    Ok(m)
}

/// Lowest eigenpairs of the discretized Hamiltonian. Eigenfunctions are
/// normalized so that `h * sum psi^2 = 1` (trapezoid with Dirichlet ends).
#[derive(Clone, Debug)]
pub struct Modes {
    grid: GridSpec,
    energies: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    max_residual: f64,
}

impl Modes {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.energies[n]
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn psi(&self, n: usize) -> &[f64] {
        &self.vectors[n]
    }

    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    /// Diagonal heat density `rho(q_i, q_i; sigma) = sum_n e^{-sigma E_n} psi_n(q_i)^2`.
    pub fn density_at(&self, node_index: usize, sigma: f64) -> f64 {
        self.energies
            .iter()
            .zip(&self.vectors)
            .map(|(e, v)| (-sigma * e).exp() * v[node_index] * v[node_index])
            .sum()
    }

    /// `sum_n e^{-sigma E_n}` over the computed modes.
    pub fn trace_heat(&self, sigma: f64) -> f64 {
        self.energies.iter().map(|e| (-sigma * e).exp()).sum()
    }
}

pub fn eigen_modes(
    alpha: f64,
    pot: &PotentialSpec,
    grid: &GridSpec,
    count: usize,
    disp: Dispersion,
) -> Result<Modes> {
    if count == 0 || count > grid.len() {
        return Err(Error::Config(format!(
            "requested {count} modes from a grid with {} nodes",
            grid.len()
        )));
    }
    let m = hamiltonian(alpha, pot, grid, disp)?;
    let energies = m.eigenvalues_lowest(count);
    let scale = m.magnitude().max(1.0);
    let cluster_tol = 1e-7 * scale;
    let mut raw: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut max_residual = 0.0f64;
    let mut cluster_start = 0;
    for j in 0..count {
        if j > 0 && (energies[j] - energies[j - 1]).abs() >= cluster_tol {
            cluster_start = j;
        }
        let mut accepted = None;
        for attempt in 0..5u64 {
            let (mut v, _) = m.inverse_iteration(energies[j], j as u64 + 1 + 1000 * attempt);
            // within a degenerate cluster, project out the members found so far
            for w in raw.iter().take(j).skip(cluster_start) {
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                for (a, b) in v.iter_mut().zip(w) {
                    *a -= dot * b;
                }
            }
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 {
                for x in v.iter_mut() {
                    *x /= norm;
                }
                accepted = Some(v);
                break;
            }
        }
        let v = accepted.ok_or_else(|| {
            Error::Numeric(format!("inverse iteration failed to separate mode {j}"))
        })?;
        let res = m.matvec(&v);
        let r = res
            .iter()
            .zip(&v)
            .map(|(hv, x)| (hv - energies[j] * x).abs())
            .fold(0.0f64, f64::max);
        max_residual = max_residual.max(r / scale);
        raw.push(v);
    }
    // deterministic sign and h-normalization
    let sqrt_h = grid.h().sqrt();
    for v in raw.iter_mut() {
        let mut imax = 0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > v[imax].abs() {
                imax = i;
            }
        }
        let s = if v[imax] < 0.0 { -1.0 } else { 1.0 };
        for x in v.iter_mut() {
            *x *= s / sqrt_h;
        }
    }
    Ok(Modes { grid: *grid, energies, vectors: raw, max_residual })
}

/// Second-order Richardson step for a quantity with `h^2` leading error
/// computed on a grid and its [`GridSpec::refine`] partner.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}
