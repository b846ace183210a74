//! Formal power series in σ with [`PhasePoly`] coefficients.

use crate::error::Result;
use crate::phasepoly::{crat_real, CRat, PhasePoly, Rat};
use num_traits::One;

/// `coeffs[k]` multiplies `σ^k`.  Equality ignores trailing zero coefficients;
/// `len` is part of the construction contract (a series built to order N has
/// exactly N + 1 slots).
#[derive(Clone, Debug)]
pub struct SigmaSeries {
    coeffs: Vec<PhasePoly>,
}

impl SigmaSeries {
    pub fn new(coeffs: Vec<PhasePoly>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant slot");
        SigmaSeries { coeffs }
    }

    pub fn zeros(order: usize) -> Self {
        SigmaSeries { coeffs: vec![PhasePoly::zero(); order + 1] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> PhasePoly {
        self.coeffs.get(k).cloned().unwrap_or_else(PhasePoly::zero)
    }

    pub fn coeffs(&self) -> &[PhasePoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PhasePoly::is_zero)
    }

    pub fn add(&self, rhs: &SigmaSeries) -> SigmaSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        SigmaSeries::new(out)
    }

    pub fn sub(&self, rhs: &SigmaSeries) -> SigmaSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) - &rhs.coeff(k));
        }
        SigmaSeries::new(out)
    }

    pub fn scale(&self, c: &CRat) -> SigmaSeries {
        SigmaSeries { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn scale_rat(&self, r: &Rat) -> SigmaSeries {
        self.scale(&crat_real(r.clone()))
    }

    pub fn scale_poly(&self, poly: &PhasePoly) -> Result<SigmaSeries> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.mul(poly)?);
        }
        Ok(SigmaSeries { coeffs: out })
    }

    /// Cauchy product truncated at `max_order`.
    pub fn mul_truncated(&self, rhs: &SigmaSeries, max_order: usize) -> Result<SigmaSeries> {
        let mut out = SigmaSeries::zeros(max_order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > max_order || a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > max_order {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &a.mul(b)?;
            }
        }
        Ok(out)
    }

    pub fn mul_sigma_pow(&self, k: usize) -> SigmaSeries {
        let mut coeffs = vec![PhasePoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        SigmaSeries { coeffs }
    }

    /// Antiderivative in σ with zero constant term.
    pub fn integrate_sigma(&self) -> SigmaSeries {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(PhasePoly::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale_rat(&Rat::new(1.into(), (k as i64 + 1).into())));
        }
        SigmaSeries { coeffs }
    }

    pub fn deriv_sigma(&self) -> SigmaSeries {
        if self.coeffs.len() == 1 {
            return SigmaSeries::zeros(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale_rat(&Rat::new((k as i64).into(), 1.into())))
            .collect();
        SigmaSeries { coeffs }
    }

    pub fn deriv_q(&self) -> SigmaSeries {
        SigmaSeries { coeffs: self.coeffs.iter().map(PhasePoly::deriv_q).collect() }
    }

    pub fn deriv_p(&self) -> SigmaSeries {
        SigmaSeries { coeffs: self.coeffs.iter().map(PhasePoly::deriv_p).collect() }
    }

    /// Substitute `σ -> σ/λ`, i.e. divide the `σ^k` coefficient by `λ^k`.
    pub fn scale_sigma(&self, lambda: &Rat) -> SigmaSeries {
        let mut factor = Rat::one();
        let inv = lambda.recip();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c.scale_rat(&factor);
                factor = factor.clone() * inv.clone();
                out
            })
            .collect();
        SigmaSeries { coeffs }
    }

    pub fn truncate(&self, max_order: usize) -> SigmaSeries {
        let end = (max_order + 1).min(self.coeffs.len());
        SigmaSeries { coeffs: self.coeffs[..end].to_vec() }
    }

    pub fn hbar_coefficient(&self, k: u32) -> SigmaSeries {
        SigmaSeries { coeffs: self.coeffs.iter().map(|c| c.hbar_coefficient(k)).collect() }
    }

    /// Evaluate the series as a polynomial in σ at a rational point.  Only
    /// meaningful when every σ-coefficient beyond `self.order()` vanishes.
    pub fn eval_sigma_rat(&self, sigma: &Rat) -> PhasePoly {
        let mut acc = PhasePoly::zero();
        let mut power = Rat::one();
        for c in &self.coeffs {
            acc = &acc + &c.scale_rat(&power);
            power *= sigma.clone();
        }
        acc
    }
}

impl PartialEq for SigmaSeries {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl Eq for SigmaSeries {}
