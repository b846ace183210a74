//! Short-time expansion of the diagonal heat density for `alpha p^2 + v(q)`.
//!
//! Integrating the semiclassical exponential over momentum leaves
//!
//! ```text
//! rho(q, q; sigma) = prefactor * sigma^{-1/2}
//!     * [ sum_n a_n sigma^n  +  hbar^2 sum_n d2a_n sigma^n + O(hbar^4) ]
//! ```
//!
//! with `a_n = (-v)^n / n!` and the quantum corrections `d2a_n` listed in
//! [`SdwExpansion::delta2`]. The hbar^2 part resums exactly to
//! `e^{-sigma v} (-(alpha/6) v'' sigma^2 + (alpha/12) v'^2 sigma^3)`, which
//! [`SdwExpansion::density_resummed`] uses directly.

use crate::error::{Error, Result};
use crate::phasepoly::{factorial, Rat};
use crate::potential::{rat_to_f64, PotentialSpec};
use num_bigint::BigInt;
use num_traits::One;

/// Overall scale of the density: the raw momentum Gaussian `sqrt(pi/alpha)`
/// per unit sigma^{1/2}, or that divided by `2 pi hbar` so that integrating
/// the density over q reproduces the operator trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Paper,
    Standard,
}

impl Normalization {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Normalization::Paper),
            "standard" => Ok(Normalization::Standard),
            other => Err(Error::Config(format!(
                "unknown normalization '{other}' (expected 'paper' or 'standard')"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Normalization::Paper => "paper",
            Normalization::Standard => "standard",
        }
    }
}

/// `int p^{2k} e^{-alpha sigma p^2} dp` over the whole line.
pub fn momentum_moment(alpha: f64, sigma: f64, k: u32) -> Result<f64> {
    if !(alpha > 0.0 && sigma > 0.0) {
        return Err(Error::Domain(format!(
            "momentum moment needs alpha, sigma > 0 (got {alpha}, {sigma})"
        )));
    }
    let base = (std::f64::consts::PI / (alpha * sigma)).sqrt();
    let mut c = 1.0;
    for j in 1..=k {
        c *= (2 * j - 1) as f64 / (2.0 * alpha * sigma);
    }
    Ok(base * c)
}

/// Exact coefficient `(2k-1)!! / (2 alpha)^k` of `sigma^{-k}` in the moment,
/// relative to `sqrt(pi/alpha) sigma^{-1/2}`.
pub fn moment_coeff(alpha: &Rat, k: u32) -> Rat {
    let mut num = BigInt::one();
    for j in 1..=k {
        num *= BigInt::from(2 * j - 1);
    }
    let two_alpha = Rat::from_integer(2.into()) * alpha;
    let mut denom = Rat::one();
    for _ in 0..k {
        denom *= &two_alpha;
    }
    Rat::from_integer(num) / denom
}

/// `int p^{2k} e^{-alpha sigma |p|^gamma} dp` for even integer `gamma >= 2`:
/// `(2/gamma) Gamma((2k+1)/gamma) (alpha sigma)^{-(2k+1)/gamma}`.
pub fn momentum_moment_gamma(alpha: f64, sigma: f64, k: u32, gamma: u32) -> Result<f64> {
    if gamma < 2 || gamma % 2 != 0 {
        return Err(Error::Domain(format!("dispersion power must be even and >= 2, got {gamma}")));
    }
    if !(alpha > 0.0 && sigma > 0.0) {
        return Err(Error::Domain(format!(
            "momentum moment needs alpha, sigma > 0 (got {alpha}, {sigma})"
        )));
    }
    let g = gamma as f64;
    let exponent = (2 * k + 1) as f64 / g;
    Ok(2.0 / g * statrs::function::gamma::gamma(exponent) * (alpha * sigma).powf(-exponent))
}

/// Power of sigma carried by the momentum integral of `e^{-sigma alpha p^gamma}`,
/// the leading small-sigma behavior of the trace density.
pub fn leading_sigma_power(gamma: u32) -> f64 {
    -1.0 / gamma as f64
}

pub struct SdwExpansion {
    alpha: f64,
    pot: PotentialSpec,
    hbar: f64,
}

impl SdwExpansion {
    pub fn new(alpha: f64, pot: PotentialSpec, hbar: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::Config(format!("alpha must be positive, got {alpha}")));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::Config(format!("hbar must be positive, got {hbar}")));
        }
        pot.validate()?;
        Ok(SdwExpansion { alpha, pot, hbar })
    }

    pub fn prefactor(&self, norm: Normalization) -> f64 {
        let paper = (std::f64::consts::PI / self.alpha).sqrt();
        match norm {
            Normalization::Paper => paper,
            Normalization::Standard => paper / (2.0 * std::f64::consts::PI * self.hbar),
        }
    }

    /// Classical coefficient `a_n(q) = (-v(q))^n / n!`.
    pub fn a(&self, n: u32, q: f64) -> Result<f64> {
        let v = self.pot.v(q)?;
        Ok((-v).powi(n as i32) / rat_to_f64(&factorial(n)))
    }

    /// hbar^2 correction coefficient `d2a_n(q)`; known through n = 4:
    /// `d2a_2 = -alpha v''/6`, `d2a_3 = alpha (v'^2/12 + v v''/6)`,
    /// `d2a_4 = -alpha (v^2 v'' + v v'^2)/12`, zero for n < 2.
    pub fn delta2(&self, n: u32, q: f64) -> Result<f64> {
        let al = self.alpha;
        match n {
            0 | 1 => Ok(0.0),
            2 => Ok(-al * self.pot.deriv(2, q)? / 6.0),
            3 => {
                let v = self.pot.v(q)?;
                let v1 = self.pot.deriv(1, q)?;
                let v2 = self.pot.deriv(2, q)?;
                Ok(al * (v1 * v1 / 12.0 + v * v2 / 6.0))
            }
            4 => {
                let v = self.pot.v(q)?;
                let v1 = self.pot.deriv(1, q)?;
                let v2 = self.pot.deriv(2, q)?;
                Ok(-al * (v * v * v2 + v * v1 * v1) / 12.0)
            }
            _ => Err(Error::SeriesLimit(format!("hbar^2 coefficients known through n = 4, got {n}"))),
        }
    }

    /// Truncated double series through `sigma^order`, `order <= 4`.
    pub fn density_series(
        &self,
        q: f64,
        sigma: f64,
        order: u32,
        norm: Normalization,
    ) -> Result<f64> {
        if order > 4 {
            return Err(Error::SeriesLimit(format!(
                "series density available through order 4, got {order}"
            )));
        }
        if !(sigma > 0.0) {
            return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
        }
        let mut bracket = 0.0;
        let h2 = self.hbar * self.hbar;
        for n in 0..=order {
            bracket += (self.a(n, q)? + h2 * self.delta2(n, q)?) * sigma.powi(n as i32);
        }
        Ok(self.prefactor(norm) * sigma.powf(-0.5) * bracket)
    }

    /// `1 + hbar^2 (-(alpha/6) v'' sigma^2 + (alpha/12) v'^2 sigma^3)`, the
    /// exact ratio of the hbar^2-corrected density to the classical one.
    pub fn correction_factor(&self, q: f64, sigma: f64) -> Result<f64> {
        let v1 = self.pot.deriv(1, q)?;
        let v2 = self.pot.deriv(2, q)?;
        let al = self.alpha;
        Ok(1.0
            + self.hbar * self.hbar * sigma * sigma
                * (-al * v2 / 6.0 + al * v1 * v1 * sigma / 12.0))
    }

    /// Classical density times [`Self::correction_factor`]; agrees with the
    /// order-4 series up to `O(sigma^{4.5})` terms.
    pub fn density_resummed(&self, q: f64, sigma: f64, norm: Normalization) -> Result<f64> {
        if !(sigma > 0.0) {
            return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
        }
        let v = self.pot.v(q)?;
        Ok(self.prefactor(norm) * sigma.powf(-0.5) * (-sigma * v).exp()
            * self.correction_factor(q, sigma)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::gcal_jet;
    use crate::phasepoly::rat;
    use crate::quad::{gauss_hermite, integrate};

    #[test]
    fn gaussian_moments_match_quadrature() {
        for &alpha in &[0.5, 1.0, 2.3] {
            for &sigma in &[0.5, 2.0] {
                for k in 0..=4u32 {
                    let closed = momentum_moment(alpha, sigma, k).unwrap();
                    let cut = (60.0 / (alpha * sigma)).sqrt();
                    let quad = integrate(
                        |p| p.powi(2 * k as i32) * (-alpha * sigma * p * p).exp(),
                        -cut,
                        cut,
                        1e-12 * closed,
                    )
                    .unwrap();
                    assert!(
                        (closed - quad.value).abs() < 1e-9 * closed,
                        "k={k}: {closed} vs {}",
                        quad.value
                    );
                }
            }
        }
    }

    #[test]
    fn moment_coefficients_exact() {
        let half = rat(1, 2);
        for (k, expect) in [(0u32, rat(1, 1)), (1, rat(1, 1)), (2, rat(3, 1)), (3, rat(15, 1))] {
            assert_eq!(moment_coeff(&half, k), expect);
        }
        assert_eq!(moment_coeff(&rat(1, 1), 2), rat(3, 4));
    }

    #[test]
    fn quartic_dispersion_moment() {
        let closed = momentum_moment_gamma(1.0, 1.0, 0, 4).unwrap();
        let quad = integrate(|p: f64| (-p.powi(4)).exp(), -6.0, 6.0, 1e-13).unwrap();
        assert!((closed - quad.value).abs() < 1e-10, "{closed} vs {}", quad.value);
        // gamma = 2 must agree with the Gaussian closed form
        let a = momentum_moment_gamma(0.7, 1.3, 2, 2).unwrap();
        let b = momentum_moment(0.7, 1.3, 2).unwrap();
        assert!((a - b).abs() < 1e-12 * b);
        assert!((leading_sigma_power(4) - (-0.25)).abs() < 1e-15);
    }

    #[test]
    fn harmonic_density_at_origin() {
        let (alpha, pot) = PotentialSpec::harmonic(rat(1, 1), rat(1, 1));
        let sdw = SdwExpansion::new(rat_to_f64(&alpha), pot, 1.0).unwrap();
        for sigma in [0.05, 0.2, 0.5] {
            let expect = (2.0 * std::f64::consts::PI * sigma).powf(-0.5)
                * (1.0 - sigma * sigma / 12.0);
            let got = sdw.density_series(0.0, sigma, 4, Normalization::Standard).unwrap();
            assert!((got - expect).abs() < 1e-14 * expect.abs(), "sigma={sigma}: {got} vs {expect}");
        }
    }

    #[test]
    fn normalizations_differ_by_trace_factor() {
        let (alpha, pot) = PotentialSpec::harmonic(rat(1, 1), rat(1, 1));
        let sdw = SdwExpansion::new(rat_to_f64(&alpha), pot, 1.0).unwrap();
        let p = sdw.density_series(0.3, 0.1, 4, Normalization::Paper).unwrap();
        let s = sdw.density_series(0.3, 0.1, 4, Normalization::Standard).unwrap();
        assert!((p / s - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn series_matches_resummed_at_small_sigma() {
        let pot = PotentialSpec::quartic_double_well();
        let sdw = SdwExpansion::new(0.5, pot, 1.0).unwrap();
        let q = 0.7;
        let sigma = 1e-3;
        let a = sdw.density_series(q, sigma, 4, Normalization::Paper).unwrap();
        let b = sdw.density_resummed(q, sigma, Normalization::Paper).unwrap();
        // both routes agree through sigma^4; the gap is the sigma^5 tail
        assert!((a - b).abs() < 1e-13 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn correction_factor_matches_momentum_integral_of_jet() {
        // Gauss-Hermite integrate e^{-alpha sigma p^2} G_2(q, p, sigma) over p
        // and compare with the closed correction; they must agree exactly
        // because G_2 is quadratic in p.
        let pot = PotentialSpec::quartic_double_well();
        let alpha = 0.5;
        let sigma = 0.3;
        let q = 0.7;
        let sdw = SdwExpansion::new(alpha, pot.clone(), 1.0).unwrap();
        let g = gcal_jet(2).unwrap();
        let g2 = &g[2];
        let vders = pot.vders9(q).unwrap();
        let (nodes, weights) = gauss_hermite(48).unwrap();
        let scale = (alpha * sigma).sqrt();
        let mut integral = 0.0;
        for (t, w) in nodes.iter().zip(&weights) {
            let p = t / scale;
            integral += w * g2.eval_f64(sigma, p, alpha, &vders).re;
        }
        integral /= scale; // dp = dt / sqrt(alpha sigma)
        let classical = momentum_moment(alpha, sigma, 0).unwrap();
        let got = 1.0 + integral / classical;
        let expect = sdw.correction_factor(q, sigma).unwrap();
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
    }

    #[test]
    fn delta2_bounds() {
        let pot = PotentialSpec::quartic_double_well();
        let sdw = SdwExpansion::new(1.0, pot, 1.0).unwrap();
        assert_eq!(sdw.delta2(0, 0.3).unwrap(), 0.0);
        assert_eq!(sdw.delta2(1, 0.3).unwrap(), 0.0);
        assert!(matches!(sdw.delta2(5, 0.3), Err(Error::SeriesLimit(_))));
        assert!(matches!(sdw.density_series(0.3, 0.1, 7, Normalization::Paper), Err(Error::SeriesLimit(_))));
        assert!(momentum_moment_gamma(1.0, 1.0, 0, 3).is_err());
    }
}
