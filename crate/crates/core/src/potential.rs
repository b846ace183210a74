//! Potential specifications shared by the symbolic and spectral layers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};
use crate::jet::JET_VMAX;
use crate::phasepoly::{crat_real, Monomial, PhasePoly, Rat};

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational that deserializes from a JSON number or an `"a/b"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatValue(pub Rat);

impl Serialize for RatValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_str(&self.0.numer().to_string())
        } else {
            s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

impl<'de> Deserialize<'de> for RatValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Float(f64),
            Str(String),
        }
        let repr = Repr::deserialize(d)?;
        let rat = match repr {
            Repr::Int(i) => Rat::from_integer(i.into()),
            Repr::Float(f) => BigRational::from_float(f)
                .ok_or_else(|| D::Error::custom("non-finite rational"))?,
            Repr::Str(s) => parse_rat_str(&s).map_err(D::Error::custom)?,
        };
        Ok(RatValue(rat))
    }
}

fn parse_rat_str(s: &str) -> std::result::Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let numer: BigInt = num.parse().map_err(|_| format!("bad rational '{s}'"))?;
    match den {
        None => Ok(Rat::from_integer(numer)),
        Some(d) => {
            let denom: BigInt = d.parse().map_err(|_| format!("bad rational '{s}'"))?;
            if denom.is_zero() {
                return Err(format!("zero denominator in '{s}'"));
            }
            Ok(Rat::new(numer, denom))
        }
    }
}

/// One-dimensional potential `v(q)`.
///
/// `Polynomial` keeps exact rational coefficients (index = power of q);
/// `Coulomb` is `z/q` and `Yukawa` is `z e^{-μq}/q`, both on the half line
/// `q > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Polynomial { coeffs: Vec<RatValue> },
    Coulomb { z: f64 },
    Yukawa { z: f64, mu: f64 },
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::Polynomial { coeffs } => {
                let cs: Vec<String> = coeffs
                    .iter()
                    .map(|c| {
                        if c.0.is_integer() {
                            c.0.numer().to_string()
                        } else {
                            format!("{}/{}", c.0.numer(), c.0.denom())
                        }
                    })
                    .collect();
                write!(f, "polynomial[{}]", cs.join(", "))
            }
            PotentialSpec::Coulomb { z } => write!(f, "coulomb(z={z})"),
            PotentialSpec::Yukawa { z, mu } => write!(f, "yukawa(z={z}, mu={mu})"),
        }
    }
}

impl PotentialSpec {
    pub fn polynomial(coeffs: Vec<Rat>) -> Self {
        PotentialSpec::Polynomial { coeffs: coeffs.into_iter().map(RatValue).collect() }
    }

    /// `v = (1/2) m ω^2 q^2` together with the kinetic coefficient
    /// `α = 1/(2m)`.
    pub fn harmonic(m: Rat, omega: Rat) -> (Rat, PotentialSpec) {
        let alpha = (Rat::from_integer(2.into()) * m.clone()).recip();
        let c2 = m * omega.clone() * omega / Rat::from_integer(2.into());
        (alpha, PotentialSpec::polynomial(vec![Rat::zero(), Rat::zero(), c2]))
    }

    /// `(q^2 - 1)^2 = 1 - 2 q^2 + q^4`.
    pub fn quartic_double_well() -> Self {
        PotentialSpec::polynomial(vec![
            Rat::one(),
            Rat::zero(),
            -Rat::from_integer(2.into()),
            Rat::zero(),
            Rat::one(),
        ])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Polynomial { .. } => Ok(()),
            PotentialSpec::Coulomb { z } => {
                if z.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Config("coulomb charge must be finite".into()))
                }
            }
            PotentialSpec::Yukawa { z, mu } => {
                if !z.is_finite() || !mu.is_finite() {
                    Err(Error::Config("yukawa parameters must be finite".into()))
                } else if *mu < 0.0 {
                    Err(Error::Config("yukawa screening mu must be nonnegative".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Lower end of the admissible q range, if the potential is singular.
    pub fn domain_min(&self) -> Option<f64> {
        match self {
            PotentialSpec::Polynomial { .. } => None,
            _ => Some(0.0),
        }
    }

    fn check_q(&self, q: f64) -> Result<()> {
        if let Some(min) = self.domain_min() {
            if q <= min {
                return Err(Error::Domain(format!(
                    "{self} is only defined for q > {min}, got q = {q}"
                )));
            }
        }
        Ok(())
    }

    pub fn v(&self, q: f64) -> Result<f64> {
        self.deriv(0, q)
    }

    /// k-th derivative of v at q.
    pub fn deriv(&self, k: usize, q: f64) -> Result<f64> {
        self.check_q(q)?;
        match self {
            PotentialSpec::Polynomial { coeffs } => {
                let mut acc = 0.0;
                // d^k q^i = i!/(i-k)! q^{i-k}
                for (i, c) in coeffs.iter().enumerate() {
                    if i < k {
                        continue;
                    }
                    let mut fall = 1.0;
                    for t in 0..k {
                        fall *= (i - t) as f64;
                    }
                    acc += rat_to_f64(&c.0) * fall * q.powi((i - k) as i32);
                }
                Ok(acc)
            }
            PotentialSpec::Coulomb { z } => {
                // d^k (z/q) = z (-1)^k k! q^{-(k+1)}
                let mut fact = 1.0;
                for t in 1..=k {
                    fact *= t as f64;
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                Ok(z * sign * fact * q.powi(-(k as i32 + 1)))
            }
            PotentialSpec::Yukawa { z, mu } => {
                // Leibniz on e^{-mu q} * q^{-1}
                let mut acc = 0.0;
                let mut binom = 1.0;
                for j in 0..=k {
                    if j > 0 {
                        binom *= (k - j + 1) as f64 / j as f64;
                    }
                    let mut jfact = 1.0;
                    for t in 1..=j {
                        jfact *= t as f64;
                    }
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    acc += binom
                        * (-mu).powi((k - j) as i32)
                        * sign
                        * jfact
                        * q.powi(-(j as i32 + 1));
                }
                Ok(z * (-mu * q).exp() * acc)
            }
        }
    }

    /// `[v, v', ..., v^(8)]` at q, the jet substitution vector.
    pub fn vders9(&self, q: f64) -> Result<[f64; JET_VMAX]> {
        let mut out = [0.0; JET_VMAX];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.deriv(k, q)?;
        }
        Ok(out)
    }

    /// Exact derivative for the polynomial case.
    pub fn deriv_rat(&self, k: usize, q: &Rat) -> Option<Rat> {
        let PotentialSpec::Polynomial { coeffs } = self else {
            return None;
        };
        let mut acc = Rat::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if i < k {
                continue;
            }
            let mut fall = Rat::one();
            for t in 0..k {
                fall *= Rat::from_integer(((i - t) as i64).into());
            }
            let mut qpow = Rat::one();
            for _ in 0..(i - k) {
                qpow *= q.clone();
            }
            acc += c.0.clone() * fall * qpow;
        }
        Some(acc)
    }

    pub fn poly_coeffs(&self) -> Option<Vec<Rat>> {
        match self {
            PotentialSpec::Polynomial { coeffs } => {
                Some(coeffs.iter().map(|c| c.0.clone()).collect())
            }
            _ => None,
        }
    }

    /// The potential as a phase-space polynomial in q (polynomial case only).
    pub fn as_phasepoly(&self) -> Option<PhasePoly> {
        let coeffs = self.poly_coeffs()?;
        let mut acc = PhasePoly::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            let mono = Monomial { hbar: 0, q: i as u32, p: 0 };
            acc = &acc + &PhasePoly::monomial(mono, crat_real(c));
        }
        Some(acc)
    }
}
