//! Correction polynomials for `f = α p^2 + v(q)` in jet coordinates.
//!
//! Instead of fixing a concrete potential, work in the polynomial ring whose
//! generators are `σ`, `p`, `α`, and the jet variables `v, v', v'', ...` of an
//! unspecified `v(q)`.  Writing `Exp(-fσ) = e^{-fσ} Σ_n ħ^n 𝒢_n`, the 𝒢_n
//! satisfy
//!
//! `∂𝒢_n/∂σ = -Σ_{k=1}^{n} (i^k / (2^k k!)) Σ_j (-1)^j C(k,j) f^{(k-j,j)} D_q^j D_p^{k-j} 𝒢_{n-k}`
//!
//! where `D_q = ∂_q - σ f_q` and `D_p = ∂_p - σ f_p` are the commuting twisted
//! derivatives picked up by pulling `e^{-fσ}` through a partial derivative.
//! For this `f` the only nonzero partials are `f^{(k,0)} = v^{(k)}`,
//! `f^{(0,1)} = 2αp` and `f^{(0,2)} = 2α`, which keeps the recursion narrow.
//!
//! This route never touches the star product, so it serves as an independent
//! cross-check of the expansion computed in [`crate::starexp`].

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::phasepoly::{crat_real, CRat, PhasePoly, Rat};
use crate::sigma::SigmaSeries;

/// Number of tracked jet variables: `v^(0)` through `v^(8)`.
pub const JET_VMAX: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct JetExp {
    pub sigma: u16,
    pub p: u16,
    pub alpha: u16,
    pub v: [u16; JET_VMAX],
}

impl JetExp {
    pub const ONE: JetExp = JetExp { sigma: 0, p: 0, alpha: 0, v: [0; JET_VMAX] };
}

fn overflow() -> Error {
    Error::SeriesLimit("jet exponent overflow".into())
}

impl JetExp {
    fn mul(&self, rhs: &JetExp) -> Result<JetExp> {
        let mut v = [0u16; JET_VMAX];
        for i in 0..JET_VMAX {
            v[i] = self.v[i].checked_add(rhs.v[i]).ok_or_else(overflow)?;
        }
        Ok(JetExp {
            sigma: self.sigma.checked_add(rhs.sigma).ok_or_else(overflow)?,
            p: self.p.checked_add(rhs.p).ok_or_else(overflow)?,
            alpha: self.alpha.checked_add(rhs.alpha).ok_or_else(overflow)?,
            v,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JetPoly {
    terms: BTreeMap<JetExp, CRat>,
}

impl JetPoly {
    pub fn zero() -> Self {
        JetPoly::default()
    }

    pub fn one() -> Self {
        JetPoly::term(JetExp::ONE, CRat::one())
    }

    pub fn term(e: JetExp, c: CRat) -> Self {
        let mut out = JetPoly::default();
        out.add_term(e, c);
        out
    }

    fn add_term(&mut self, e: JetExp, c: CRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    slot.insert(sum);
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetExp, &CRat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn add(&self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> JetPoly {
        let mut out = JetPoly::default();
        for (e, c) in &self.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &CRat) -> JetPoly {
        let mut out = JetPoly::default();
        for (e, coeff) in &self.terms {
            out.add_term(*e, coeff.clone() * c.clone());
        }
        out
    }

    fn mul_exp(&self, e: &JetExp, c: &CRat) -> Result<JetPoly> {
        let mut out = JetPoly::default();
        for (exp, coeff) in &self.terms {
            out.add_term(exp.mul(e)?, coeff.clone() * c.clone());
        }
        Ok(out)
    }

    /// Plain ∂_q: chain rule on the jet variables, `v^(i) -> v^(i+1)`.
    pub fn deriv_q(&self) -> Result<JetPoly> {
        let mut out = JetPoly::default();
        for (e, c) in &self.terms {
            for i in 0..JET_VMAX {
                if e.v[i] == 0 {
                    continue;
                }
                if i + 1 >= JET_VMAX {
                    return Err(Error::SeriesLimit(format!(
                        "jet derivative needs v^({}) which is beyond the tracked range",
                        i + 1
                    )));
                }
                let mut v = e.v;
                v[i] -= 1;
                v[i + 1] += 1;
                let factor = crat_real(Rat::from_integer((e.v[i] as i64).into()));
                out.add_term(JetExp { v, ..*e }, c.clone() * factor);
            }
        }
        Ok(out)
    }

    pub fn deriv_p(&self) -> JetPoly {
        let mut out = JetPoly::default();
        for (e, c) in &self.terms {
            if e.p == 0 {
                continue;
            }
            let factor = crat_real(Rat::from_integer((e.p as i64).into()));
            out.add_term(JetExp { p: e.p - 1, ..*e }, c.clone() * factor);
        }
        out
    }

    /// `D_q X = ∂_q X - σ v' X`.
    pub fn twisted_q(&self) -> Result<JetPoly> {
        let mut shift = JetExp::ONE;
        shift.sigma = 1;
        shift.v[1] = 1;
        let correction = self.mul_exp(&shift, &crat_real(-Rat::one()))?;
        Ok(self.deriv_q()?.add(&correction))
    }

    /// `D_p X = ∂_p X - 2 α σ p X`.
    pub fn twisted_p(&self) -> Result<JetPoly> {
        let mut shift = JetExp::ONE;
        shift.sigma = 1;
        shift.p = 1;
        shift.alpha = 1;
        let correction = self.mul_exp(&shift, &crat_real(-Rat::from_integer(2.into())))?;
        Ok(self.deriv_p().add(&correction))
    }

    pub fn integrate_sigma(&self) -> JetPoly {
        let mut out = JetPoly::default();
        for (e, c) in &self.terms {
            let s = e.sigma + 1;
            let factor = crat_real(Rat::new(1.into(), (s as i64).into()));
            out.add_term(JetExp { sigma: s, ..*e }, c.clone() * factor);
        }
        out
    }

    pub fn eval_f64(&self, sigma: f64, p: f64, alpha: f64, vders: &[f64; JET_VMAX]) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut w = sigma.powi(e.sigma as i32) * p.powi(e.p as i32) * alpha.powi(e.alpha as i32);
            for i in 0..JET_VMAX {
                if e.v[i] != 0 {
                    w *= vders[i].powi(e.v[i] as i32);
                }
            }
            let re = c.re.to_f64().unwrap_or(f64::NAN);
            let im = c.im.to_f64().unwrap_or(f64::NAN);
            acc += Complex::new(re * w, im * w);
        }
        acc
    }

    pub fn eval_rat(&self, sigma: &Rat, p: &Rat, alpha: &Rat, vders: &[Rat; JET_VMAX]) -> CRat {
        let mut acc = CRat::zero();
        for (e, c) in &self.terms {
            let mut w = Rat::one();
            for _ in 0..e.sigma {
                w *= sigma.clone();
            }
            for _ in 0..e.p {
                w *= p.clone();
            }
            for _ in 0..e.alpha {
                w *= alpha.clone();
            }
            for i in 0..JET_VMAX {
                for _ in 0..e.v[i] {
                    w *= vders[i].clone();
                }
            }
            acc += c.clone() * crat_real(w);
        }
        acc
    }
}

/// The corrections `𝒢_0 .. 𝒢_{n_max}` from the twisted-derivative recursion.
pub fn gcal_jet(n_max: u32) -> Result<Vec<JetPoly>> {
    let mut g = vec![JetPoly::one()];
    let i_half = CRat::new(Rat::zero(), Rat::new(1.into(), 2.into()));
    for n in 1..=n_max {
        let mut rhs = JetPoly::zero();
        let mut ck = CRat::one();
        for k in 1..=n {
            // ck = i^k / (2^k k!)
            ck = ck * i_half.clone() * crat_real(Rat::new(1.into(), (k as i64).into()));
            let prev = &g[(n - k) as usize];
            if prev.is_zero() {
                continue;
            }
            // j = 0: f^{(k,0)} = v^(k)
            let mut dpk = prev.clone();
            for _ in 0..k {
                dpk = dpk.twisted_p()?;
            }
            let mut vk = JetExp::ONE;
            vk.v[k as usize] = 1;
            let mut term = dpk.mul_exp(&vk, &CRat::one())?;
            // j = k: f^{(0,1)} = 2αp with sign -1, f^{(0,2)} = 2α with sign +1
            if k == 1 {
                let dq = prev.twisted_q()?;
                let mut ap = JetExp::ONE;
                ap.alpha = 1;
                ap.p = 1;
                term = term.add(&dq.mul_exp(&ap, &crat_real(-Rat::from_integer(2.into())))?);
            } else if k == 2 {
                let dq2 = prev.twisted_q()?.twisted_q()?;
                let mut a = JetExp::ONE;
                a.alpha = 1;
                term = term.add(&dq2.mul_exp(&a, &crat_real(Rat::from_integer(2.into())))?);
            }
            rhs = rhs.add(&term.scale(&ck));
        }
        g.push(rhs.neg().integrate_sigma());
    }
    Ok(g)
}

/// Substitute a concrete polynomial `v(q) = Σ v_coeffs[i] q^i` (and a rational
/// α) into a jet polynomial, producing a σ-series of phase-space polynomials.
pub fn jet_to_sigma_series(
    poly: &JetPoly,
    alpha: &Rat,
    v_coeffs: &[Rat],
) -> Result<SigmaSeries> {
    let mut v_poly = PhasePoly::zero();
    for (i, c) in v_coeffs.iter().enumerate() {
        let mono = crate::phasepoly::Monomial { hbar: 0, q: i as u32, p: 0 };
        v_poly = &v_poly + &PhasePoly::monomial(mono, crat_real(c.clone()));
    }
    let mut v_ders = Vec::with_capacity(JET_VMAX);
    v_ders.push(v_poly.clone());
    for _ in 1..JET_VMAX {
        v_ders.push(v_ders.last().unwrap().deriv_q());
    }
    let max_sigma = poly.terms.keys().map(|e| e.sigma).max().unwrap_or(0);
    let mut out = SigmaSeries::zeros(max_sigma as usize);
    let mut slots = vec![PhasePoly::zero(); max_sigma as usize + 1];
    for (e, c) in &poly.terms {
        let mut factor = PhasePoly::constant(c.clone());
        let mut alpha_pow = Rat::one();
        for _ in 0..e.alpha {
            alpha_pow *= alpha.clone();
        }
        factor = factor.scale_rat(&alpha_pow);
        if e.p > 0 {
            factor = factor.mul(&PhasePoly::var_p().pow(e.p as u32)?)?;
        }
        for i in 0..JET_VMAX {
            for _ in 0..e.v[i] {
                factor = factor.mul(&v_ders[i])?;
            }
        }
        slots[e.sigma as usize] = &slots[e.sigma as usize] + &factor;
    }
    for (k, slot) in slots.into_iter().enumerate() {
        out = out.add(&SigmaSeries::new(
            std::iter::repeat(PhasePoly::zero())
                .take(k)
                .chain(std::iter::once(slot))
                .collect(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasepoly::rat;

    fn jexp(sigma: u16, p: u16, alpha: u16, vpows: &[(usize, u16)]) -> JetExp {
        let mut e = JetExp::ONE;
        e.sigma = sigma;
        e.p = p;
        e.alpha = alpha;
        for &(i, pow) in vpows {
            e.v[i] = pow;
        }
        e
    }

    #[test]
    fn gcal2_exact_structure() {
        let g = gcal_jet(2).unwrap();
        assert_eq!(g[0], JetPoly::one());
        assert!(g[1].is_zero());
        let mut expect = JetPoly::zero();
        expect = expect.add(&JetPoly::term(
            jexp(2, 0, 1, &[(2, 1)]),
            crat_real(rat(-1, 4)),
        ));
        expect = expect.add(&JetPoly::term(
            jexp(3, 2, 2, &[(2, 1)]),
            crat_real(rat(1, 6)),
        ));
        expect = expect.add(&JetPoly::term(
            jexp(3, 0, 1, &[(1, 2)]),
            crat_real(rat(1, 12)),
        ));
        assert_eq!(g[2], expect);
        assert!(g[2].is_real());
    }

    #[test]
    fn odd_orders_vanish() {
        let g = gcal_jet(5).unwrap();
        assert!(g[1].is_zero());
        assert!(g[3].is_zero());
        assert!(g[5].is_zero());
        assert!(g[2].is_real());
        assert!(g[4].is_real());
    }

    #[test]
    fn linear_potential_value() {
        // v = q: only v' = 1 survives; 𝒢_4 = α^2 σ^6 / 288
        let g = gcal_jet(4).unwrap();
        let mut vders: [Rat; JET_VMAX] = std::array::from_fn(|_| Rat::zero());
        vders[1] = Rat::one();
        let val = g[4].eval_rat(&Rat::one(), &Rat::zero(), &Rat::one(), &vders);
        assert_eq!(val, crat_real(rat(1, 288)));
    }

    #[test]
    fn substitution_matches_star_route_for_oscillator() {
        // alpha = 1/2, v = q^2/2 reproduces -sigma^2/8 + H sigma^3/12
        let g = gcal_jet(2).unwrap();
        let series =
            jet_to_sigma_series(&g[2], &rat(1, 2), &[Rat::zero(), Rat::zero(), rat(1, 2)])
                .unwrap();
        let h = PhasePoly::parse("1/2 p^2 + 1/2 q^2").unwrap();
        assert_eq!(series.coeff(2), PhasePoly::constant_rat(rat(-1, 8)));
        assert_eq!(series.coeff(3), h.scale_rat(&rat(1, 12)));
    }
}
