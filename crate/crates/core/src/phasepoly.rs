//! Exact polynomials on phase space and the Moyal star product.
//!
//! Coefficients are Gaussian rationals (`Complex<BigRational>`), monomials are
//! `ħ^a q^b p^c`.  Everything here is exact; floating point only enters through
//! the explicit `eval_f64` escape hatch.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type CRat = Complex<BigRational>;

/// Hard ceiling on the total `(q, p)` degree of any monomial.  Operations that
/// would push past it fail instead of silently producing huge objects.
pub const DEGREE_CAP: u32 = 64;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn crat_real(r: Rat) -> CRat {
    Complex::new(r, Rat::zero())
}

pub fn crat_imag(r: Rat) -> CRat {
    Complex::new(Rat::zero(), r)
}

fn c_i() -> CRat {
    crat_imag(Rat::one())
}

fn big_binomial(n: u32, k: u32) -> Rat {
    Rat::from_integer(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

/// `ħ^hbar q^q p^p`.  The derived ordering (ħ, then q, then p) is the term
/// order used for rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub hbar: u32,
    pub q: u32,
    pub p: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { hbar: 0, q: 0, p: 0 };

    pub fn qp_degree(&self) -> u32 {
        self.q + self.p
    }
}

/// Truncation and size limits threaded through star-product evaluations.
///
/// `hbar_truncation: None` means exact arithmetic to all orders; `Some(t)`
/// drops every monomial with an ħ power above `t`.
#[derive(Clone, Copy, Debug)]
pub struct StarContext {
    pub hbar_truncation: Option<u32>,
    pub degree_cap: u32,
}

impl Default for StarContext {
    fn default() -> Self {
        StarContext { hbar_truncation: None, degree_cap: DEGREE_CAP }
    }
}

impl StarContext {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn truncated(order: u32) -> Self {
        StarContext { hbar_truncation: Some(order), degree_cap: DEGREE_CAP }
    }
}

/// Sparse phase-space polynomial in canonical form: no explicit zero
/// coefficients, terms keyed by [`Monomial`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PhasePoly {
    terms: BTreeMap<Monomial, CRat>,
}

impl PhasePoly {
    pub fn zero() -> Self {
        PhasePoly::default()
    }

    pub fn one() -> Self {
        PhasePoly::constant(crat_real(Rat::one()))
    }

    pub fn constant(c: CRat) -> Self {
        let mut poly = PhasePoly::default();
        poly.add_term(Monomial::ONE, c);
        poly
    }

    pub fn constant_rat(r: Rat) -> Self {
        PhasePoly::constant(crat_real(r))
    }

    pub fn int(n: i64) -> Self {
        PhasePoly::constant_rat(rat(n, 1))
    }

    pub fn var_q() -> Self {
        PhasePoly::monomial(Monomial { hbar: 0, q: 1, p: 0 }, crat_real(Rat::one()))
    }

    pub fn var_p() -> Self {
        PhasePoly::monomial(Monomial { hbar: 0, q: 0, p: 1 }, crat_real(Rat::one()))
    }

    pub fn var_hbar() -> Self {
        PhasePoly::monomial(Monomial { hbar: 1, q: 0, p: 0 }, crat_real(Rat::one()))
    }

    pub fn monomial(m: Monomial, c: CRat) -> Self {
        let mut poly = PhasePoly::default();
        poly.add_term(m, c);
        poly
    }

    /// Parse the expression grammar over `q` and `p` with rational literals.
    pub fn parse(input: &str) -> Result<Self> {
        crate::parse::parse_expr(input)
    }

    fn add_term(&mut self, m: Monomial, c: CRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    pub fn coefficient(&self, m: &Monomial) -> CRat {
        self.terms.get(m).cloned().unwrap_or_else(CRat::zero)
    }

    /// Largest `q + p` degree across terms, 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::qp_degree).max().unwrap_or(0)
    }

    pub fn hbar_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.hbar).max().unwrap_or(0)
    }

    /// Coefficient of `ħ^k` as a polynomial in `q, p` (ħ stripped).
    pub fn hbar_coefficient(&self, k: u32) -> PhasePoly {
        let mut out = PhasePoly::default();
        for (m, c) in &self.terms {
            if m.hbar == k {
                out.add_term(Monomial { hbar: 0, ..*m }, c.clone());
            }
        }
        out
    }

    pub fn mul_hbar_pow(&self, k: u32) -> PhasePoly {
        let mut out = PhasePoly::default();
        for (m, c) in &self.terms {
            out.add_term(Monomial { hbar: m.hbar + k, ..*m }, c.clone());
        }
        out
    }

    pub fn truncate_hbar(&self, max: u32) -> PhasePoly {
        let mut out = PhasePoly::default();
        for (m, c) in &self.terms {
            if m.hbar <= max {
                out.add_term(*m, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &CRat) -> PhasePoly {
        if c.is_zero() {
            return PhasePoly::zero();
        }
        let mut out = PhasePoly::default();
        for (m, coeff) in &self.terms {
            out.add_term(*m, coeff.clone() * c.clone());
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> PhasePoly {
        self.scale(&crat_real(r.clone()))
    }

    pub fn mul(&self, rhs: &PhasePoly) -> Result<PhasePoly> {
        self.mul_capped(rhs, DEGREE_CAP)
    }

    pub fn mul_capped(&self, rhs: &PhasePoly, cap: u32) -> Result<PhasePoly> {
        let mut out = PhasePoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = Monomial { hbar: ma.hbar + mb.hbar, q: ma.q + mb.q, p: ma.p + mb.p };
                let degree = m.qp_degree();
                if degree > cap {
                    return Err(Error::DegreeCap { degree, cap });
                }
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<PhasePoly> {
        let mut acc = PhasePoly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn deriv_q(&self) -> PhasePoly {
        let mut out = PhasePoly::default();
        for (m, c) in &self.terms {
            if m.q > 0 {
                let factor = crat_real(rat(m.q as i64, 1));
                out.add_term(Monomial { q: m.q - 1, ..*m }, c.clone() * factor);
            }
        }
        out
    }

    pub fn deriv_p(&self) -> PhasePoly {
        let mut out = PhasePoly::default();
        for (m, c) in &self.terms {
            if m.p > 0 {
                let factor = crat_real(rat(m.p as i64, 1));
                out.add_term(Monomial { p: m.p - 1, ..*m }, c.clone() * factor);
            }
        }
        out
    }

    pub fn deriv(&self, dq: u32, dp: u32) -> PhasePoly {
        let mut out = self.clone();
        for _ in 0..dq {
            out = out.deriv_q();
        }
        for _ in 0..dp {
            out = out.deriv_p();
        }
        out
    }

    pub fn eval_rat(&self, q: &Rat, p: &Rat, hbar: &Rat) -> CRat {
        let mut acc = CRat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            v = v * crat_real(rat_pow(hbar, m.hbar));
            v = v * crat_real(rat_pow(q, m.q));
            v = v * crat_real(rat_pow(p, m.p));
            acc += v;
        }
        acc
    }

    pub fn eval_f64(&self, q: f64, p: f64, hbar: f64) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let re = c.re.to_f64().unwrap_or(f64::NAN);
            let im = c.im.to_f64().unwrap_or(f64::NAN);
            let w = hbar.powi(m.hbar as i32) * q.powi(m.q as i32) * p.powi(m.p as i32);
            acc += Complex::new(re * w, im * w);
        }
        acc
    }

    /// Complex conjugate; `q`, `p`, `ħ` stay real.
    pub fn conj(&self) -> PhasePoly {
        let mut out = PhasePoly::default();
        for (m, c) in &self.terms {
            out.add_term(*m, c.conj());
        }
        out
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn rat_pow(base: &Rat, exp: u32) -> Rat {
    let mut acc = Rat::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

impl std::ops::Add<&PhasePoly> for &PhasePoly {
    type Output = PhasePoly;
    fn add(self, rhs: &PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl std::ops::Sub<&PhasePoly> for &PhasePoly {
    type Output = PhasePoly;
    fn sub(self, rhs: &PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &PhasePoly {
    type Output = PhasePoly;
    fn neg(self) -> PhasePoly {
        let mut out = PhasePoly::default();
        for (m, c) in &self.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

/// Bidifferential `ω_k(f, g) = Σ_j (-1)^j C(k,j) (∂_q^{k-j} ∂_p^j f)(∂_q^j ∂_p^{k-j} g)`.
///
/// `ω_0` is the pointwise product and `ω_1` the Poisson bracket.
pub fn omega_k(f: &PhasePoly, g: &PhasePoly, k: u32) -> Result<PhasePoly> {
    let mut acc = PhasePoly::zero();
    for j in 0..=k {
        let df = f.deriv(k - j, j);
        if df.is_zero() {
            continue;
        }
        let dg = g.deriv(j, k - j);
        if dg.is_zero() {
            continue;
        }
        let mut sign = big_binomial(k, j);
        if j % 2 == 1 {
            sign = -sign;
        }
        acc = &acc + &df.mul(&dg)?.scale_rat(&sign);
    }
    Ok(acc)
}

/// `ω̃_2(f, f) = f_qq f_p^2 - 2 f_qp f_q f_p + f_pp f_q^2`, the quadratic
/// companion of `ω_2` that appears when expanding `ω_2(f, f^m)`.
pub fn omega2_tilde(f: &PhasePoly) -> Result<PhasePoly> {
    let fq = f.deriv_q();
    let fp = f.deriv_p();
    let fqq = fq.deriv_q();
    let fqp = fq.deriv_p();
    let fpp = fp.deriv_p();
    let t1 = fqq.mul(&fp.mul(&fp)?)?;
    let t2 = fqp.mul(&fq.mul(&fp)?)?.scale_rat(&rat(2, 1));
    let t3 = fpp.mul(&fq.mul(&fq)?)?;
    Ok(&(&t1 - &t2) + &t3)
}

/// Moyal star product `f ⋆ g = Σ_k (iħ/2)^k ω_k(f, g) / k!`.
///
/// The sum terminates on its own at `k = min(deg f, deg g)`; `ctx` can
/// additionally truncate in powers of ħ.
pub fn star(f: &PhasePoly, g: &PhasePoly, ctx: &StarContext) -> Result<PhasePoly> {
    let kmax = f.total_degree().min(g.total_degree());
    let mut acc = PhasePoly::zero();
    let mut prefactor = CRat::one();
    for k in 0..=kmax {
        if k > 0 {
            prefactor = prefactor * c_i() * crat_real(rat(1, 2));
        }
        if let Some(t) = ctx.hbar_truncation {
            if k > t && f.hbar_degree() == 0 && g.hbar_degree() == 0 {
                break;
            }
        }
        let w = omega_k(f, g, k)?;
        if w.is_zero() {
            continue;
        }
        let coeff = prefactor.clone() * crat_real(factorial(k).recip());
        let mut term = w.scale(&coeff).mul_hbar_pow(k);
        if let Some(t) = ctx.hbar_truncation {
            term = term.truncate_hbar(t);
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Moyal bracket `[f, g]_M = f ⋆ g - g ⋆ f`, computed directly from the odd
/// part of the series: `2 Σ_{k odd} (iħ/2)^k ω_k(f, g) / k!`.
pub fn moyal_bracket(f: &PhasePoly, g: &PhasePoly, ctx: &StarContext) -> Result<PhasePoly> {
    let kmax = f.total_degree().min(g.total_degree());
    let mut acc = PhasePoly::zero();
    let mut prefactor = c_i() * crat_real(rat(1, 2));
    let mut k = 1u32;
    while k <= kmax {
        if let Some(t) = ctx.hbar_truncation {
            if k > t && f.hbar_degree() == 0 && g.hbar_degree() == 0 {
                break;
            }
        }
        let w = omega_k(f, g, k)?;
        if !w.is_zero() {
            let coeff = prefactor.clone() * crat_real(factorial(k).recip() * rat(2, 1));
            let mut term = w.scale(&coeff).mul_hbar_pow(k);
            if let Some(t) = ctx.hbar_truncation {
                term = term.truncate_hbar(t);
            }
            acc = &acc + &term;
        }
        // advance (iħ/2)^k by two orders
        prefactor = prefactor * crat_real(rat(-1, 4));
        k += 2;
    }
    Ok(acc)
}

/// Iterated star power `f^{⋆n}`, left associated.
pub fn star_power(f: &PhasePoly, n: u32, ctx: &StarContext) -> Result<PhasePoly> {
    if n == 0 {
        return Ok(PhasePoly::one());
    }
    let mut acc = f.clone();
    for _ in 1..n {
        acc = star(&acc, f, ctx)?;
    }
    Ok(acc)
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return out.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (neg, body) = term_body(c, &monomial_str(m));
            if idx == 0 {
                if neg {
                    out.write_str("-")?;
                }
            } else if neg {
                out.write_str(" - ")?;
            } else {
                out.write_str(" + ")?;
            }
            out.write_str(&body)?;
        }
        Ok(())
    }
}

fn monomial_str(m: &Monomial) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (sym, e) in [("ħ", m.hbar), ("q", m.q), ("p", m.p)] {
        match e {
            0 => {}
            1 => parts.push(sym.to_string()),
            k => parts.push(format!("{sym}^{k}")),
        }
    }
    parts.join(" ")
}

fn rat_bare(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractions get parenthesized when they multiply something.
fn rat_mag(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

fn imag_mag(r: &Rat) -> String {
    if r.is_one() {
        "i".to_string()
    } else {
        format!("{} i", rat_mag(r))
    }
}

fn term_body(c: &CRat, mono: &str) -> (bool, String) {
    let (neg, coeff) = if c.im.is_zero() {
        let mag = c.re.abs();
        let s = if mag.is_one() && !mono.is_empty() {
            None
        } else if mono.is_empty() {
            Some(rat_bare(&mag))
        } else {
            Some(rat_mag(&mag))
        };
        (c.re.is_negative(), s)
    } else if c.re.is_zero() {
        (c.im.is_negative(), Some(imag_mag(&c.im.abs())))
    } else {
        let neg = c.re.is_negative();
        let inner = if c.im.is_negative() == neg { "+" } else { "-" };
        let im_part = if c.im.abs().is_one() {
            "i".to_string()
        } else {
            format!("{} i", rat_bare(&c.im.abs()))
        };
        (neg, Some(format!("({} {} {})", rat_bare(&c.re.abs()), inner, im_part)))
    };
    let body = match (coeff, mono.is_empty()) {
        (None, _) => mono.to_string(),
        (Some(cs), true) => cs,
        (Some(cs), false) => format!("{cs} {mono}"),
    };
    (neg, body)
}
