//! Spectral zeta functions from heat traces via the Mellin transform.
//!
//! `zeta(s) = (1 / Gamma(s)) int_0^inf sigma^{s-1} Tr e^{-sigma H} dsigma`
//! needs the small-sigma divergence of the trace removed before quadrature:
//! [`mellin_zeta`] subtracts the listed asymptotic powers on `(0, split)`,
//! integrates them analytically, and cuts the decaying outer integral at a
//! finite upper limit.

use crate::error::{Error, Result};
use crate::quad::integrate;
use statrs::function::gamma::gamma;

/// Small-sigma expansion of the harmonic trace `1 / (2 sinh(sigma/2))`
/// as `(power, coefficient)` pairs: `1/sigma - sigma/24 + 7 sigma^3/5760`.
pub const HARMONIC_TRACE_ASYM: [(f64, f64); 3] =
    [(-1.0, 1.0), (1.0, -1.0 / 24.0), (3.0, 7.0 / 5760.0)];

/// Expansion of the energy-weighted trace `Tr H e^{-sigma H}` for the same
/// oscillator: `cosh(sigma/2) / (4 sinh^2(sigma/2)) = 1/sigma^2 + 1/24 - 21 sigma^2/5760`.
pub const HARMONIC_H_ASYM: [(f64, f64); 3] =
    [(-2.0, 1.0), (0.0, 1.0 / 24.0), (2.0, -21.0 / 5760.0)];

/// Harmonic heat trace with `hbar omega = 1`.
pub fn harmonic_trace(sigma: f64) -> f64 {
    0.5 / (0.5 * sigma).sinh()
}

/// `Tr H e^{-sigma H} = -d/dsigma Tr e^{-sigma H}` for the same oscillator.
pub fn harmonic_h_weighted_trace(sigma: f64) -> f64 {
    let s = (0.5 * sigma).sinh();
    0.25 * (0.5 * sigma).cosh() / (s * s)
}

/// Mellin transform of a heat trace divided by `Gamma(s)`.
///
/// `asym` lists `(a_k, c_k)` such that `trace(sigma) - sum c_k sigma^{a_k}`
/// is integrable against `sigma^{s-1}` at zero; every `s + a_k` must be
/// positive, and `trace` must decay fast enough that cutting at `cut` is
/// harmless.
pub fn mellin_zeta<F: Fn(f64) -> f64>(
    trace: F,
    asym: &[(f64, f64)],
    s: f64,
    split: f64,
    cut: f64,
) -> Result<f64> {
    if !(s > 0.0) || !(split > 0.0) || !(cut > split) {
        return Err(Error::Config(format!(
            "mellin_zeta needs s > 0 and 0 < split < cut (got s={s}, split={split}, cut={cut})"
        )));
    }
    for &(a, _) in asym {
        if s + a <= 0.0 {
            return Err(Error::Domain(format!(
                "sigma^{a} term makes the inner integral diverge at s = {s}"
            )));
        }
    }
    let inner = integrate(
        |sigma| {
            let sub: f64 = asym.iter().map(|&(a, c)| c * sigma.powf(a)).sum();
            sigma.powf(s - 1.0) * (trace(sigma) - sub)
        },
        0.0,
        split,
        1e-13,
    )?;
    let outer = integrate(|sigma| sigma.powf(s - 1.0) * trace(sigma), split, cut, 1e-13)?;
    let analytic: f64 = asym.iter().map(|&(a, c)| c * split.powf(s + a) / (s + a)).sum();
    Ok((inner.value + outer.value + analytic) / gamma(s))
}

/// `sum_n (n + 1/2)^{-s}` by direct summation with an integral tail bound,
/// for cross-checking the Mellin routes.
pub fn zeta_half_integers(s: f64, terms: usize) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("direct sum needs s > 1, got {s}")));
    }
    let mut sum = 0.0;
    for n in 0..terms {
        sum += (n as f64 + 0.5).powf(-s);
    }
    // Euler-Maclaurin tail: integral plus half the first dropped term
    let edge = terms as f64 + 0.5;
    sum += edge.powf(1.0 - s) / (s - 1.0) + 0.5 * edge.powf(-s);
    Ok(sum)
}
