//! Harmonic oscillator phase-space reference data.
//!
//! Everything here has a closed form, so this module doubles as the oracle
//! layer for the spectral and Weyl-transform machinery: Wigner functions of
//! the number states, the Weyl symbol of the heat operator `e^{-sigma H}`,
//! its trace, and the energy Green function obtained by integrating the heat
//! symbol over sigma.

use crate::error::{Error, Result};
use crate::phasepoly::Rat;
use crate::quad::integrate;
use num_rational::BigRational;
use num_traits::One;

/// Laguerre polynomial `L_n(x)` by the standard three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let next = ((2 * k + 1) as f64 - x) * cur - k as f64 * prev;
        prev = cur;
        cur = next / (k + 1) as f64;
    }
    cur
}

/// Exact-rational `L_n(x)` for cross-checking the floating recurrence.
pub fn laguerre_rat(n: usize, x: &Rat) -> Rat {
    let mut prev = BigRational::one();
    if n == 0 {
        return prev;
    }
    let mut cur = BigRational::one() - x;
    for k in 1..n {
        let two_k1 = Rat::from_integer((2 * k + 1).into());
        let kk = Rat::from_integer(k.into());
        let next = (&two_k1 - x) * &cur - kk * &prev;
        prev = cur;
        cur = next / Rat::from_integer((k + 1).into());
    }
    cur
}

/// Mass, frequency, and hbar for one oscillator; all strictly positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oscillator {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl Oscillator {
    pub fn new(m: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("omega", omega), ("hbar", hbar)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Oscillator { m, omega, hbar })
    }

    pub fn standard() -> Self {
        Oscillator { m: 1.0, omega: 1.0, hbar: 1.0 }
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.hbar * self.omega * (n as f64 + 0.5)
    }

    /// Scaled phase-space radius `x = 4 H(q, p) / (hbar omega)`.
    pub fn x(&self, q: f64, p: f64) -> f64 {
        2.0 / (self.hbar * self.omega) * (p * p / self.m + self.m * self.omega * self.omega * q * q)
    }

    /// Wigner function of the n-th number state,
    /// `W_n = (-1)^n / (pi hbar) e^{-x/2} L_n(x)`; integrates to 1 over dq dp.
    pub fn wigner(&self, n: usize, q: f64, p: f64) -> f64 {
        let x = self.x(q, p);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign / (std::f64::consts::PI * self.hbar) * (-0.5 * x).exp() * laguerre(n, x)
    }

    /// Weyl symbol of the projector `|n><n|`, i.e. `2 pi hbar W_n`.
    pub fn wigner_symbol(&self, n: usize, q: f64, p: f64) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar * self.wigner(n, q, p)
    }

    /// Weyl symbol of `e^{-sigma H}` in closed form:
    /// `sech(theta) e^{-(x/2) tanh(theta)}` with `theta = hbar omega sigma / 2`.
    pub fn heat_closed(&self, q: f64, p: f64, sigma: f64) -> f64 {
        let theta = 0.5 * self.hbar * self.omega * sigma;
        let x = self.x(q, p);
        (-0.5 * x * theta.tanh()).exp() / theta.cosh()
    }

    /// Mode-sum form of the heat symbol, `sum_n 2 pi hbar W_n e^{-sigma E_n}`
    /// over the first `n_terms` states. Returns the partial sum and a bound on
    /// the dropped tail (each symbol term has magnitude at most 2).
    pub fn heat_mode_sum(&self, q: f64, p: f64, sigma: f64, n_terms: usize) -> (f64, f64) {
        let mut sum = 0.0;
        for n in 0..n_terms {
            sum += self.wigner_symbol(n, q, p) * (-sigma * self.energy(n)).exp();
        }
        (sum, self.heat_tail_bound(sigma, n_terms))
    }

    pub fn heat_tail_bound(&self, sigma: f64, n_terms: usize) -> f64 {
        let s = (-self.hbar * self.omega * sigma).exp();
        2.0 * (-self.hbar * self.omega * sigma * (n_terms as f64 + 0.5)).exp() / (1.0 - s)
    }

    /// `Tr e^{-sigma H} = 1 / (2 sinh(hbar omega sigma / 2))`.
    pub fn trace_closed(&self, sigma: f64) -> f64 {
        0.5 / (0.5 * self.hbar * self.omega * sigma).sinh()
    }

    /// Green-function symbol `G = int_0^inf heat symbol dsigma`, evaluated by
    /// quadrature after the substitution `tanh(theta) = (1 - u^2)/(1 + u^2)`,
    /// which leaves a smooth integrand on `[0, 1]`:
    /// `G = (2 / hbar omega) * 2 int_0^1 (1 + u^2)^{-1} e^{-x (1 - u^2) / (2 (1 + u^2))} du`.
    pub fn green_closed(&self, q: f64, p: f64) -> Result<f64> {
        let x = self.x(q, p);
        let r = integrate(
            |u| {
                let d = 1.0 + u * u;
                (-0.5 * x * (1.0 - u * u) / d).exp() / d
            },
            0.0,
            1.0,
            1e-13,
        )?;
        Ok(4.0 / (self.hbar * self.omega) * r.value)
    }

    /// Same Green function through the substitution `tanh(theta) = sin(phi)`:
    /// `G = (2 / hbar omega) int_0^{pi/2} e^{-(x/2) sin(phi)} dphi`.
    pub fn green_phi(&self, q: f64, p: f64) -> Result<f64> {
        let x = self.x(q, p);
        let r = integrate(|phi| (-0.5 * x * phi.sin()).exp(), 0.0, std::f64::consts::FRAC_PI_2, 1e-13)?;
        Ok(2.0 / (self.hbar * self.omega) * r.value)
    }

    /// Spectral-sum form `G = sum_n 2 pi / (omega (n + 1/2)) W_n`, summed with
    /// adjacent averaging `(S_N + S_{N+1}) / 2` to tame the slow alternation.
    pub fn green_mode_sum(&self, q: f64, p: f64, n_terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut prev_partial = 0.0;
        for n in 0..=n_terms {
            prev_partial = sum;
            sum += 2.0 * std::f64::consts::PI / (self.omega * (n as f64 + 0.5)) * self.wigner(n, q, p);
        }
        0.5 * (sum + prev_partial)
    }
}
