//! Oracle suite and discrepancy ledger.
//!
//! Every closed form this library relies on is re-derived here through an
//! independent route (exact star algebra, jet recursion, quadrature, spectral
//! discretization) and compared numerically. Where the printed source
//! derivation disagrees with the recomputation, the difference is recorded as
//! a [`DiscrepancyEntry`] carrying the printed expression, the replacement the
//! library actually uses, and the first order at which the two diverge.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::fit::least_squares;
use crate::jet::{gcal_jet, jet_to_sigma_series};
use crate::oscillator::{laguerre, Oscillator};
use crate::phasepoly::{omega_k, rat, star, star_power, PhasePoly, Rat, StarContext};
use crate::potential::PotentialSpec;
use crate::quad::{gauss_hermite, integrate_to_inf};
use crate::sdw::{Normalization, SdwExpansion};
use crate::sigma::SigmaSeries;
use crate::spectral::{eigen_modes, richardson, Dispersion, GridSpec};
use crate::starexp::{eps2_general, eps2_potential, f2_g2_truncated, gcal};
use crate::weyl::{Convention, WeylTransform, WignerTable};
use crate::zeta::{
    harmonic_h_weighted_trace, harmonic_trace, mellin_zeta, zeta_half_integers,
    HARMONIC_TRACE_ASYM, HARMONIC_H_ASYM,
};

/// One printed formula that the recomputation contradicts.
#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyEntry {
    pub formula_id: &'static str,
    pub location_quote: &'static str,
    pub paper_expr: &'static str,
    pub computed_expr: &'static str,
    pub first_divergence: &'static str,
}

/// Outcome of a single oracle comparison.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Full report: check outcomes plus the static discrepancy ledger.
#[derive(Debug, Clone, Serialize)]
pub struct LedgerReport {
    pub checks: Vec<OracleCheck>,
    pub discrepancies: Vec<DiscrepancyEntry>,
}

impl LedgerReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&OracleCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// The static ledger of printed formulas that independent recomputation
/// overturns. Quotes are short verbatim anchors into the source text.
pub fn discrepancy_entries() -> Vec<DiscrepancyEntry> {
    vec![
        DiscrepancyEntry {
            formula_id: "moyal_bracket_expansion",
            location_quote: "leading to the standard Moyal bracket",
            paper_expr: "[f,g]_M = i sum_n (-1)^n (2n+1)! 4^{-n} hbar^{2n+1} sum_k (-1)^k C(n,k) (d^n f / dq^{n-k} dp^k)(d^n g / dq^k dp^{n-k})",
            computed_expr: "[f,g]_M = 2 sum_{k odd} (i hbar / 2)^k / k! sum_j (-1)^j C(k,j) (d^k f / dq^{k-j} dp^j)(d^k g / dq^j dp^{k-j})",
            first_divergence: "hbar^1: the printed n = 0 term is i hbar f g, while the leading term of the bracket is i hbar {f,g}_PB; the inner sum must run over 2n+1 derivatives, not n, and (2n+1)! must divide rather than multiply",
        },
        DiscrepancyEntry {
            formula_id: "gcal2_coefficients",
            location_quote: "can be integrated quite readily to give",
            paper_expr: "G_2 = ((1/8) alpha sigma^2 v'' - (1/12) alpha sigma^3 (v'^2 + 2 alpha p^2 v'')) e^{-f sigma}",
            computed_expr: "G_2 = -(alpha/4) sigma^2 v'' + (alpha^2/6) sigma^3 p^2 v'' + (alpha/12) sigma^3 v'^2  (no e^{-f sigma} factor; G_2 multiplies g = e^{-f sigma} by definition)",
            first_divergence: "sigma^2: printed coefficient +(1/8) alpha v'' vs computed -(1/4) alpha v''; at sigma^3 the printed v'^2 and p^2 v'' coefficients also carry the wrong sign, and the overall e^{-f sigma} double-counts the classical factor",
        },
        DiscrepancyEntry {
            formula_id: "gcal4_sigma2_term",
            location_quote: "Straightforward computations yield",
            paper_expr: "G_4 = ... - (1/96) alpha^2 sigma^2 (5 v''^2 + 4 v' v''' + alpha p^2 v'''')",
            computed_expr: "G_4 has no sigma^2 term; its lowest order is -(alpha^2/32) sigma^3 v''''",
            first_divergence: "sigma^2: the recursion integrates sources that start at sigma^2, so G_4 cannot contain sigma^2; re-running the recursion gives a lowest term -(alpha^2/32) sigma^3 v'''', confirmed by the exact star-product route",
        },
        DiscrepancyEntry {
            formula_id: "eps2_g2_prefactor",
            location_quote: "From this it follows that we can write",
            paper_expr: "E_2(f) = -(1/8) omega_2(f,f) F_2(f) - (1/2) omega~_2(f,f) G_2(f)",
            computed_expr: "E_2(f) = -(1/8) omega_2(f,f) F_2(f) - (1/8) omega~_2(f,f) G_2(f)",
            first_divergence: "the omega~_2 G_2 prefactor: resumming -(1/8) sum_n (1/n!) sum_k f^k omega_2(f, f^{n-1-k}) with omega_2(f,f^m) = m f^{m-1} omega_2(f,f) + m(m-1) f^{m-2} omega~_2(f,f) leaves -(1/8) on both terms; the specializations printed later (Coulomb, alpha p^2 + v) all match -(1/8), not -(1/2)",
        },
        DiscrepancyEntry {
            formula_id: "f2_g2_closed_forms",
            location_quote: "The functions $F_2,G_2$ turn out to be",
            paper_expr: "F_2(f) = (1/2) sum_{n>=2} f^{n-2} / (n (n-3)!),  G_2(f) = (1/6) sum_{n>=2} (5n-9) f^{n-3} / (n (n-3)!)",
            computed_expr: "F_2(f) = e^f / 2,  G_2(f) = e^f / 3  (from sum_k (n-1-k) = n(n-1)/2 and sum_k (n-1-k)(n-2-k) = n(n-1)(n-2)/3)",
            first_divergence: "n = 2, 3 terms involve (n-3)! of a negative integer; at n = 4 the printed F_2 coefficient of f^2 is 1/8 vs 1/4 from e^f/2, and the printed G_2 coefficient of f is 11/24 vs 1/3",
        },
        DiscrepancyEntry {
            formula_id: "eps2_momentum_integral_sign",
            location_quote: "leading finally to",
            paper_expr: "E_2 = (1/12) e^{-v sigma} sqrt(alpha pi) sigma^{3/2} (2 v'' - sigma v'^2)",
            computed_expr: "int E_2 dp = -(1/12) sqrt(alpha pi) sigma^{3/2} e^{-sigma v} (2 v'' - sigma v'^2)",
            first_divergence: "overall sign (and the quantity is the p-integral of E_2, not E_2 itself, as the sqrt(pi) Gaussian factor shows); Gauss-Hermite integration of e^{-alpha sigma p^2} G_2 gives the negative value",
        },
        DiscrepancyEntry {
            formula_id: "a2_prefactor",
            location_quote: "For an arbitrary potential in one dimension we would get",
            paper_expr: "a_2 = (pi m / 2) v^2 + O(hbar^2)",
            computed_expr: "a_2 = (1/2) sqrt(2 pi m) v^2 + O(hbar^2)",
            first_divergence: "the prefactor: the Gaussian momentum integral produces sqrt(2 pi m) (= a_0) times the Taylor coefficient v^2/2, so a_2/a_0 = v^2/2; the printed pi m/2 breaks that ratio by sqrt(pi m / 2)",
        },
        DiscrepancyEntry {
            formula_id: "harmonic_sdw_coefficients",
            location_quote: "Taylor expanding the result in",
            paper_expr: "a_1 = -pi m^2 omega q^2 + O(hbar^2),  a_2 = (1/4) pi m^3 omega^2 q^4 + O(hbar^2)",
            computed_expr: "a_1 = -(1/2) sqrt(2 pi m) m omega^2 q^2,  a_2 = (1/8) sqrt(2 pi m) m^2 omega^4 q^4  (from a_n = sqrt(2 pi m) (-v)^n / n! with v = (1/2) m omega^2 q^2)",
            first_divergence: "a_1: both the prefactor (pi m^2 vs (m/2) sqrt(2 pi m)) and the frequency power (omega vs omega^2) disagree; the printed forms follow from the v = (1/2) m omega q^2 typo plus the a_2 prefactor error",
        },
        DiscrepancyEntry {
            formula_id: "delta2_a2_sign",
            location_quote: "to the Schwinger-DeWitt coefficients then become",
            paper_expr: "delta_2 a_2 = (1/6) sqrt(alpha pi) v''",
            computed_expr: "delta_2 a_2 = -(1/6) sqrt(alpha pi) v''",
            first_divergence: "overall sign: the sigma^{3/2} coefficient of int E_2 dp is negative for v'' > 0 (numerically confirmed by Gauss-Hermite integration of the jet-recursion G_2), consistent with the sign flip recorded under eps2_momentum_integral_sign",
        },
        DiscrepancyEntry {
            formula_id: "wigner_mode_normalization",
            location_quote: "is the Wigner function for the harmonic oscillator",
            paper_expr: "W_n(p,q) = ((-1)^n / (hbar pi n!)) e^{-x/2} L_n(x)",
            computed_expr: "W_n(p,q) = ((-1)^n / (pi hbar)) e^{-x/2} L_n(x) with x = (2/(hbar omega))(p^2/m + m omega^2 q^2)",
            first_divergence: "n = 2: the spurious 1/n! makes int W_2 dq dp = 1/2 instead of 1; int_0^inf e^{-s} L_n(2s) ds = (-1)^n forces the n!-free normalization",
        },
        DiscrepancyEntry {
            formula_id: "laguerre_generating_function",
            location_quote: "The generating function for the Laguerre polynomials is",
            paper_expr: "(1/(1-t)) e^{-x t/(1-t)} = sum_n (t^n / n!) L_n(x)",
            computed_expr: "(1/(1-t)) e^{-x t/(1-t)} = sum_n t^n L_n(x)",
            first_divergence: "t^2: at x = 0 the left side expands to 1 + t + t^2 + ..., so the t^2 coefficient is 1, not 1/2! = 1/2",
        },
        DiscrepancyEntry {
            formula_id: "green_function_signs",
            location_quote: "by\nsimply integrating over $\\sigma$",
            paper_expr: "G = H^{-1} = -int_0^inf e^{-H sigma} dsigma;  G(q,p) = -sum_lambda lambda^{-1} W_lambda(q,p);  G(q,p) = sum_n ((-1)^n / (pi hbar^2 omega (n+1/2) n!)) e^{-x/2} L_n(x)",
            computed_expr: "G = H^{-1} = +int_0^inf e^{-H sigma} dsigma;  G(q,p) = sum_n (2 (-1)^n / (hbar omega (n+1/2))) e^{-x/2} L_n(x)",
            first_divergence: "sign: for positive H the sigma integral of e^{-H sigma} is +H^{-1}; at the origin the corrected mode sum gives G(0,0) = +pi/(hbar omega) while the printed prefactor (with the extra 1/n! and 1/(pi hbar^2)) sums to about 0.475/hbar; the third printed display has yet another sign than the first two",
        },
        DiscrepancyEntry {
            formula_id: "trace_normalization",
            location_quote: "point of contact with the Wigner-Weyl-Moyal formalism",
            paper_expr: "Tr A = int A_W(q,p) dq dp",
            computed_expr: "Tr A = (1/(2 pi hbar)) int A_W(q,p) dq dp",
            first_divergence: "any rank-one projector: with W_n normalized to unit phase-space integral, (|n><n|)_W = 2 pi hbar W_n, so the printed rule yields Tr |n><n| = 2 pi hbar instead of 1; the same factor is missing from the mode expansion Exp(-f sigma) = sum_lambda W_lambda e^{-lambda sigma}",
        },
        DiscrepancyEntry {
            formula_id: "harmonic_eps2_frequency_powers",
            location_quote: "the harmonic oscillator, $v(q)=\\frac{1}{2}m\\omega q^2",
            paper_expr: "E_2 = -(1/4) omega F_2 - (1/8) ((omega/m) p^2 + m omega^2 q^2) G_2",
            computed_expr: "E_2 = -(1/4) omega^2 F_2 - (1/8) ((omega^2/m) p^2 + m omega^4 q^2) G_2",
            first_divergence: "every omega power is halved, tracking the v = (1/2) m omega q^2 typo (omega should be omega^2 in the potential); the later star-exponential display for the same oscillator carries the correct omega^2 and omega^4",
        },
    ]
}

fn push(checks: &mut Vec<OracleCheck>, name: &'static str, passed: bool, detail: String) {
    checks.push(OracleCheck { name, passed, detail });
}

/// Closed form of the hbar^2 jet coefficient for `f = alpha p^2 + v(q)`:
/// `-(alpha/4) sigma^2 v'' + (alpha^2/6) sigma^3 p^2 v'' + (alpha/12) sigma^3 v'^2`.
fn gcal2_closed_series(alpha: &Rat, v: &PhasePoly) -> Result<SigmaSeries> {
    let v1 = v.deriv_q();
    let v2 = v1.deriv_q();
    let p2 = PhasePoly::var_p().pow(2)?;
    let c2 = v2.scale_rat(&(-alpha.clone() / rat(4, 1)));
    let c3 = &p2
        .mul(&v2)?
        .scale_rat(&(alpha.clone() * alpha.clone() / rat(6, 1)))
        + &v1.pow(2)?.scale_rat(&(alpha.clone() / rat(12, 1)));
    Ok(SigmaSeries::new(vec![PhasePoly::zero(), PhasePoly::zero(), c2, c3]))
}

fn poly_pow_q(k: u32) -> PhasePoly {
    PhasePoly::var_q().pow(k).expect("small power")
}

/// Runs every cross-check. `quick` skips the spectral-discretization ones,
/// which dominate the runtime.
pub fn run_oracle_suite(quick: bool) -> Result<LedgerReport> {
    let mut checks = Vec::new();
    let ctx = StarContext::exact();
    let q = PhasePoly::var_q();
    let p = PhasePoly::var_p();

    // Star product renders against hand-expanded results.
    {
        let got = star(&q, &p, &ctx)?.render();
        push(&mut checks, "star_product_q_p", got == "q p + (1/2) i ħ", format!("rendered {got:?}"));

        let got = star(&p.pow(2)?, &q.pow(2)?, &ctx)?.render();
        push(
            &mut checks,
            "star_product_p2_q2",
            got == "q^2 p^2 - 2 i ħ q p - (1/2) ħ^2",
            format!("rendered {got:?}"),
        );

        let got = crate::phasepoly::moyal_bracket(&q.pow(2)?, &p.pow(2)?, &ctx)?.render();
        push(&mut checks, "moyal_bracket_q2_p2", got == "4 i ħ q p", format!("rendered {got:?}"));

        let got = crate::phasepoly::moyal_bracket(&q.pow(3)?, &p.pow(3)?, &ctx)?.render();
        push(
            &mut checks,
            "moyal_bracket_q3_p3",
            got == "9 i ħ q^2 p^2 - (3/2) i ħ^3",
            format!("rendered {got:?}"),
        );

        // The bracket of q and p is i hbar {q,p} = i hbar, not i hbar q p as the
        // printed n = 0 term would give.
        let got = crate::phasepoly::moyal_bracket(&q, &p, &ctx)?.render();
        push(&mut checks, "moyal_bracket_leading_order", got == "i ħ", format!("rendered {got:?}"));
    }

    // Algebraic identities of the star product.
    {
        let f = &q.pow(2)? + &p;
        let g = q.mul(&p)?;
        let h = &p.pow(2)? - &q;
        let lhs = star(&star(&f, &g, &ctx)?, &h, &ctx)?;
        let rhs = star(&f, &star(&g, &h, &ctx)?, &ctx)?;
        push(&mut checks, "star_associativity", lhs == rhs, "((f*g)*h vs f*(g*h), exact".into());

        let fg = star(&f, &g, &ctx)?;
        let gf = star(&g, &f, &ctx)?;
        push(
            &mut checks,
            "star_conjugation",
            fg.conj() == gf,
            "conj(f*g) = g*f for real f, g".into(),
        );

        // The printed hbar^2 formula for star powers is one of the displays the
        // recomputation confirms.
        let f = PhasePoly::parse("q^2 p")?;
        let lhs = star_power(&f, 5, &ctx)?.hbar_coefficient(2);
        let mut rhs = PhasePoly::zero();
        for k in 0..=3u32 {
            rhs = &rhs + &f.pow(k)?.mul(&omega_k(&f, &f.pow(4 - k)?, 2)?)?;
        }
        let rhs = rhs.scale_rat(&rat(-1, 8));
        push(
            &mut checks,
            "star_power_hbar2_formula",
            lhs == rhs,
            "hbar^2 part of f^{*5} vs -(1/8) sum_k f^k omega_2(f, f^{4-k})".into(),
        );
    }

    // Jet recursion vs star-exponential route vs closed form, for a family of
    // monomial potentials and both alpha values used downstream.
    {
        let jets = gcal_jet(2)?;
        let mut worst = String::new();
        let mut ok = true;
        let mut closed_ok = true;
        for alpha in [rat(1, 2), rat(1, 1)] {
            for deg in 1..=4u32 {
                let v = poly_pow_q(deg);
                let f = &p.pow(2)?.scale_rat(&alpha) + &v;
                let star_route = gcal(&f, 2, 6)?;
                let mut v_coeffs = vec![rat(0, 1); deg as usize + 1];
                v_coeffs[deg as usize] = rat(1, 1);
                let jet_route = jet_to_sigma_series(&jets[2], &alpha, &v_coeffs)?;
                if jet_route != star_route {
                    ok = false;
                    worst = format!("mismatch at v = q^{deg}, alpha = {alpha}");
                }
                if gcal2_closed_series(&alpha, &v)? != jet_route {
                    closed_ok = false;
                }
            }
        }
        push(
            &mut checks,
            "gcal2_jet_matches_star",
            ok,
            if ok { "jet recursion = star route, v = q..q^4, alpha in {1/2, 1}".into() } else { worst },
        );
        push(
            &mut checks,
            "gcal2_closed_form",
            closed_ok,
            "-(a/4)s^2 v'' + (a^2/6)s^3 p^2 v'' + (a/12)s^3 v'^2 matches the recursion".into(),
        );

        // Numeric comparison against the printed coefficients at a generic point.
        let (alpha, qv, pv, sig) = (0.5f64, 0.7f64, 0.4f64, 0.6f64);
        let (v1, v2) = (3.0 * qv * qv, 6.0 * qv);
        let pot = PotentialSpec::polynomial(vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        let vders = pot.vders9(qv)?;
        let computed = jets[2].eval_f64(sig, pv, alpha, &vders).re;
        let printed = 0.125 * alpha * sig * sig * v2
            - alpha / 12.0 * sig.powi(3) * (v1 * v1 + 2.0 * alpha * pv * pv * v2);
        push(
            &mut checks,
            "gcal2_printed_coefficients_differ",
            (printed - computed).abs() > 0.25 * computed.abs(),
            format!("printed {printed:.6e} vs recursion {computed:.6e} at v = q^3"),
        );
    }

    // Support and closed forms of the hbar^4 jet coefficient.
    {
        let jets = gcal_jet(4)?;
        let min_sigma = jets[4].terms().map(|(e, _)| e.sigma).min().unwrap_or(0);
        let max_sigma = jets[4].terms().map(|(e, _)| e.sigma).max().unwrap_or(0);
        let mut v_coeffs = vec![rat(0, 1); 5];
        v_coeffs[4] = rat(1, 1);
        let series = jet_to_sigma_series(&jets[4], &rat(1, 2), &v_coeffs)?;
        let lead_ok = series.coeff(3) == PhasePoly::constant_rat(rat(-3, 16));
        // Printed sigma^2 term, nonzero at a generic point for v = q^3.
        let (alpha, qv, pv) = (0.5f64, 0.7f64, 0.4f64);
        let (v1, v2, v3, v4) = (3.0 * qv * qv, 6.0 * qv, 6.0f64, 0.0f64);
        let printed_s2 =
            -(alpha * alpha / 96.0) * (5.0 * v2 * v2 + 4.0 * v1 * v3 + alpha * pv * pv * v4);
        push(
            &mut checks,
            "gcal4_sigma_support",
            min_sigma == 3 && max_sigma == 6 && lead_ok && printed_s2 != 0.0,
            format!(
                "recursion support sigma^{min_sigma}..sigma^{max_sigma}, lowest term -(a^2/32) s^3 v''''; printed sigma^2 term evaluates to {printed_s2:.4e}"
            ),
        );

        // Oscillator closed form: 5 s^4/384 - (3/160) H s^5 + (1/288) H^2 s^6.
        let h = (&p.pow(2)? + &q.pow(2)?).scale_rat(&rat(1, 2));
        let expect = SigmaSeries::new(vec![
            PhasePoly::zero(),
            PhasePoly::zero(),
            PhasePoly::zero(),
            PhasePoly::zero(),
            PhasePoly::constant_rat(rat(5, 384)),
            h.scale_rat(&rat(-3, 160)),
            h.pow(2)?.scale_rat(&rat(1, 288)),
        ]);
        let got = jet_to_sigma_series(&jets[4], &rat(1, 2), &[rat(0, 1), rat(0, 1), rat(1, 2)])?;
        push(
            &mut checks,
            "gcal4_oscillator_closed_form",
            got == expect,
            "5s^4/384 - (3/160)Hs^5 + (1/288)H^2s^6 for v = q^2/2".into(),
        );
    }

    // F_2, G_2 resummation.
    {
        let (f2, g2) = f2_g2_truncated(1.0, 60);
        let (f2n, g2n) = f2_g2_truncated(-3.0, 60);
        let e = 1.0f64.exp();
        let en = (-3.0f64).exp();
        let ok = (f2 - e / 2.0).abs() < 1e-12
            && (g2 - e / 3.0).abs() < 1e-12
            && (f2n - en / 2.0).abs() < 1e-12
            && (g2n - en / 3.0).abs() < 1e-12;
        push(
            &mut checks,
            "f2_g2_exponential_sums",
            ok,
            "double sums resum to e^f/2 and e^f/3 at f = 1 and f = -3".into(),
        );

        // True f^2 coefficient of F_2 = e^f/2 is 1/4; the printed closed form
        // gives (1/2) / (n (n-3)!) = 1/8 at n = 4. Likewise G_2's f coefficient
        // is 1/3 vs the printed (1/6)(5n-9)/(n(n-3)!) = 11/24.
        let true_f2 = rat(1, 4);
        let printed_f2 = rat(1, 2) / (rat(4, 1) * rat(1, 1));
        let true_g2 = rat(1, 3);
        let printed_g2 = rat(11, 6) / (rat(4, 1) * rat(1, 1));
        push(
            &mut checks,
            "f2_g2_printed_closed_forms_differ",
            printed_f2 != true_f2 && printed_g2 != true_g2,
            format!("n = 4 coefficients: F_2 {printed_f2} vs {true_f2}, G_2 {printed_g2} vs {true_g2}"),
        );
    }

    // E_2 as the sigma = -1 value of the jet coefficient, and the printed
    // specializations.
    {
        let f = &p.pow(2)? + &q.pow(2)?;
        let series = gcal(&f, 2, 8)?;
        let c2 = series.eval_sigma_rat(&rat(-1, 1));
        let mut ok = true;
        let mut worst = 0.0f64;
        for (qv, pv) in [(0.3, 0.2), (0.8, -0.5), (-0.4, 0.9)] {
            let direct = eps2_general(&f, qv, pv)?;
            let fv = f.eval_f64(qv, pv, 0.0).re;
            let via_series = fv.exp() * c2.eval_f64(qv, pv, 0.0).re;
            let d = (direct - via_series).abs() / direct.abs().max(1.0);
            worst = worst.max(d);
            ok &= d < 1e-12;
        }
        push(
            &mut checks,
            "eps2_matches_star_exponential",
            ok,
            format!("E_2 vs e^f G_2(-1), worst rel diff {worst:.2e}"),
        );

        // Printed -(1/2) G_2 prefactor vs the resummed -(1/8).
        let (qv, pv) = (0.6, 0.3);
        let fv = f.eval_f64(qv, pv, 0.0).re;
        let w2 = omega_k(&f, &f, 2)?.eval_f64(qv, pv, 0.0).re;
        let w2t = crate::phasepoly::omega2_tilde(&f)?.eval_f64(qv, pv, 0.0).re;
        let printed = -0.125 * w2 * fv.exp() / 2.0 - 0.5 * w2t * fv.exp() / 3.0;
        let computed = eps2_general(&f, qv, pv)?;
        push(
            &mut checks,
            "eps2_printed_prefactor_differs",
            (printed - computed).abs() > 0.5 * computed.abs(),
            format!("printed G_2 weight -1/2 gives {printed:.6e}, resummed -1/8 gives {computed:.6e}"),
        );

        // Both printed specializations agree with the -(1/8) form exactly:
        // generic alpha p^2 + v ...
        let alpha = 0.5f64;
        let v = poly_pow_q(3);
        let fav = &p.pow(2)?.scale_rat(&rat(1, 2)) + &v;
        let (qv, pv) = (0.8, 0.5);
        let favv = fav.eval_f64(qv, pv, 0.0).re;
        let (f2v, g2v) = (favv.exp() / 2.0, favv.exp() / 3.0);
        let (v1, v2) = (3.0 * qv * qv, 6.0 * qv);
        let spec_poly = -0.5 * alpha * v2 * f2v
            - 0.25 * (2.0 * alpha * alpha * v2 * pv * pv + alpha * v1 * v1) * g2v;
        let direct_poly = eps2_general(&fav, qv, pv)?;
        // ... and the Coulomb display with m = 1, z = 1.
        let coul = PotentialSpec::Coulomb { z: 1.0 };
        let (qv2, pv2) = (0.9f64, 0.6f64);
        let fc: f64 = 0.5 * pv2 * pv2 + 1.0 / qv2;
        let (f2c, g2c) = (fc.exp() / 2.0, fc.exp() / 3.0);
        let spec_coul = -0.5 * qv2.powi(-3) * f2c
            - 0.25 * (qv2.powi(-3) * pv2 * pv2 + 0.5 * qv2.powi(-4)) * g2c;
        let direct_coul = eps2_potential(0.5, &coul, -1.0, qv2, pv2)?;
        let ok = (spec_poly - direct_poly).abs() < 1e-10 * direct_poly.abs().max(1.0)
            && (spec_coul - direct_coul).abs() < 1e-10 * direct_coul.abs().max(1.0);
        push(
            &mut checks,
            "eps2_specializations_consistent",
            ok,
            format!(
                "potential form diff {:.2e}, Coulomb form diff {:.2e}; both match -(1/8)",
                (spec_poly - direct_poly).abs(),
                (spec_coul - direct_coul).abs()
            ),
        );
    }

    // Oscillator heat symbol, trace, Wigner normalization.
    {
        let osc = Oscillator::standard();
        let f = (&p.pow(2)? + &q.pow(2)?).scale_rat(&rat(1, 2));
        let series = crate::starexp::star_exp_series(&f, 20, &ctx)?;
        let at_half = series.eval_sigma_rat(&rat(1, 2));
        let closed = osc.heat_closed(0.6, 0.0, 0.5);
        let got = at_half.eval_f64(0.6, 0.0, 1.0).re;
        push(
            &mut checks,
            "star_exp_partial_sum_matches_closed",
            (got - closed).abs() < 1e-9,
            format!("sigma-series through f^{{*20}} off by {:.2e} at sigma = 1/2", (got - closed).abs()),
        );

        let (sum, tail) = osc.heat_mode_sum(0.6, 0.0, 0.5, 21);
        push(
            &mut checks,
            "oscillator_heat_mode_sum_tail",
            (sum - closed).abs() <= tail + 1e-12,
            format!("N = 20 mode sum off by {:.2e}, tail bound {tail:.2e}", (sum - closed).abs()),
        );

        let direct: f64 = (0..2000).map(|n| (-osc.energy(n)).exp()).sum();
        push(
            &mut checks,
            "oscillator_trace_closed_vs_modes",
            (osc.trace_closed(1.0) - direct).abs() < 1e-12,
            format!("1/(2 sinh(1/2)) vs mode sum, diff {:.2e}", (osc.trace_closed(1.0) - direct).abs()),
        );

        let mut ok = true;
        let mut detail = String::new();
        for n in [2usize, 3] {
            let val = integrate_to_inf(|s| (-s).exp() * laguerre(n, 2.0 * s), 0.0, 1e-12)?.value;
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            ok &= (val - want).abs() < 1e-9;
            detail = format!("int e^-s L_{n}(2s) ds = {val:.12}; with the printed 1/n! the n = 2 phase-space integral would be 1/2");
        }
        push(&mut checks, "wigner_mode_normalization_integral", ok, detail);

        let ok = (0..=6).all(|n| {
            let want = if n % 2 == 0 { 1.0 / PI } else { -1.0 / PI };
            (osc.wigner(n, 0.0, 0.0) - want).abs() < 1e-14
        });
        push(&mut checks, "wigner_origin_values", ok, "W_n(0,0) = (-1)^n / pi".into());
    }

    // Laguerre generating function.
    {
        let (t, x) = (0.4f64, 0.3f64);
        let closed = (1.0 / (1.0 - t)) * (-x * t / (1.0 - t)).exp();
        let plain: f64 = (0..120usize).map(|n| t.powi(n as i32) * laguerre(n, x)).sum();
        let with_fact: f64 = (0..120usize)
            .scan(1.0f64, |fact, n: usize| {
                if n > 0 {
                    *fact *= n as f64;
                }
                Some(t.powi(n as i32) * laguerre(n, x) / *fact)
            })
            .sum();
        push(
            &mut checks,
            "laguerre_generating_function_check",
            (plain - closed).abs() < 1e-10 && (with_fact - closed).abs() > 0.01,
            format!("sum t^n L_n = {plain:.12} vs closed {closed:.12}; printed 1/n! variant gives {with_fact:.12}"),
        );
    }

    // Green function routes.
    {
        let osc = Oscillator::standard();
        let sigma_quad = integrate_to_inf(|s| osc.heat_closed(0.0, 0.0, s), 0.0, 1e-10)?.value;
        let closed = osc.green_closed(0.0, 0.0)?;
        let phi = osc.green_phi(0.0, 0.0)?;
        let ok = (sigma_quad - PI).abs() < 1e-8
            && (closed - PI).abs() < 1e-10
            && (phi - PI).abs() < 1e-10;
        push(
            &mut checks,
            "green_origin_quadratures",
            ok,
            format!(
                "sigma quadrature {sigma_quad:.10}, closed {closed:.10}, angular {phi:.10} vs pi"
            ),
        );

        let mode = osc.green_mode_sum(0.0, 0.0, 400);
        push(
            &mut checks,
            "green_mode_sum_origin",
            (mode - PI).abs() < 1e-4,
            format!("averaged 400-term mode sum {mode:.8} vs pi"),
        );

        push(
            &mut checks,
            "green_sign_convention",
            closed > 0.0,
            "G(0,0) = +pi/(hbar omega); a leading minus on the sigma integral would flip it".into(),
        );
    }

    // Short-time coefficients.
    {
        let pot = PotentialSpec::polynomial(vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        let sdw = SdwExpansion::new(0.5, pot.clone(), 1.0)?;
        let pref = sdw.prefactor(Normalization::Paper);
        let qv = 0.8f64;
        let v = qv.powi(3);
        let a0 = pref * sdw.a(0, qv)?;
        let a1 = pref * sdw.a(1, qv)?;
        let a2 = pref * sdw.a(2, qv)?;
        let printed_a2 = PI / 2.0 * v * v;
        let ok = (a0 - (2.0 * PI).sqrt()).abs() < 1e-14
            && (a1 + (2.0 * PI).sqrt() * v).abs() < 1e-12
            && (a2 - (2.0 * PI).sqrt() * v * v / 2.0).abs() < 1e-12
            && (printed_a2 - a2).abs() > 0.2 * a2.abs();
        push(
            &mut checks,
            "sdw_a_coefficients_check",
            ok,
            format!("a_0 = sqrt(2 pi), a_1 = -sqrt(2 pi) v, a_2 = {a2:.6} vs printed {printed_a2:.6}"),
        );

        // Momentum integral of the jet coefficient vs the closed correction,
        // fixing the delta_2 a_2 sign.
        let dw = PotentialSpec::quartic_double_well();
        let (alpha, sig, qv) = (0.5f64, 0.3f64, 0.7f64);
        let vders = dw.vders9(qv)?;
        let jets = gcal_jet(2)?;
        let (nodes, weights) = gauss_hermite(48)?;
        let scale = (alpha * sig).sqrt();
        let ratio: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| w * jets[2].eval_f64(sig, t / scale, alpha, &vders).re)
            .sum::<f64>()
            / PI.sqrt();
        let expected = -(alpha / 6.0) * sig * sig * vders[2] + alpha / 12.0 * sig.powi(3) * vders[1] * vders[1];
        push(
            &mut checks,
            "sdw_delta2_momentum_integral",
            (ratio - expected).abs() < 1e-12 * expected.abs().max(1.0),
            format!(
                "int e^(-a s p^2) G_2 dp / classical = {ratio:.10e}, closed {expected:.10e}; leading term -(a/6) s^2 v'' is negative for v'' > 0"
            ),
        );

        // Resummed density equals the direct Gauss-Hermite momentum integral of
        // the corrected symbol (exact: G_2 is quadratic in p).
        let sdw_dw = SdwExpansion::new(alpha, dw.clone(), 0.2)?;
        let dens = sdw_dw.density_resummed(qv, sig, Normalization::Standard)?;
        let hbar = 0.2f64;
        let vq = dw.v(qv)?;
        let gh: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| {
                w * (1.0 + hbar * hbar * jets[2].eval_f64(sig, t / scale, alpha, &vders).re)
            })
            .sum::<f64>()
            / scale
            * (-sig * vq).exp()
            / (2.0 * PI * hbar);
        push(
            &mut checks,
            "sdw_resummed_density_closure",
            (dens - gh).abs() < 1e-12 * dens.abs().max(1.0),
            format!("resummed {dens:.12e} vs direct momentum integral {gh:.12e}"),
        );
    }

    // Zeta routes.
    {
        let z2 = mellin_zeta(harmonic_trace, &HARMONIC_TRACE_ASYM, 2.0, 1.0, 60.0)?;
        push(
            &mut checks,
            "zeta2_mellin_value",
            (z2 - PI * PI / 2.0).abs() < 1e-10,
            format!("zeta(2) = {z2:.12} vs pi^2/2, diff {:.2e}", (z2 - PI * PI / 2.0).abs()),
        );

        let z3 = mellin_zeta(harmonic_trace, &HARMONIC_TRACE_ASYM, 3.0, 1.0, 100.0)?;
        let direct = zeta_half_integers(3.0, 4000)?;
        push(
            &mut checks,
            "zeta3_mellin_vs_direct",
            (z3 - direct).abs() < 1e-8,
            format!("Mellin {z3:.12} vs direct sum {direct:.12}"),
        );

        let z2h = mellin_zeta(harmonic_h_weighted_trace, &HARMONIC_H_ASYM, 3.0, 1.0, 100.0)?;
        push(
            &mut checks,
            "zeta2_h_weighted_route",
            (z2h - PI * PI / 2.0).abs() < 1e-8,
            format!("energy-weighted route gives {z2h:.12} for zeta(2)"),
        );
    }

    // Anharmonic momentum moments.
    {
        let closed = crate::sdw::momentum_moment_gamma(1.0, 0.7, 1, 4)?;
        let quad = 2.0 * integrate_to_inf(|t| t * t * (-0.7 * t.powi(4)).exp(), 0.0, 1e-12)?.value;
        let power = crate::sdw::leading_sigma_power(4);
        push(
            &mut checks,
            "anharmonic_moment_gamma4",
            (closed - quad).abs() < 1e-9 && (power + 0.25).abs() < 1e-15,
            format!("Gamma-function moment {closed:.12} vs quadrature {quad:.12}, leading power {power}"),
        );
    }

    if !quick {
        spectral_checks(&mut checks)?;
    }

    Ok(LedgerReport { checks, discrepancies: discrepancy_entries() })
}

/// The discretization-backed comparisons: grid eigenproblems, Weyl transforms
/// of computed modes, and the short-time fit.
fn spectral_checks(checks: &mut Vec<OracleCheck>) -> Result<()> {
    let harmonic = PotentialSpec::polynomial(vec![rat(0, 1), rat(0, 1), rat(1, 2)]);

    // Ground energy with Richardson extrapolation.
    {
        let coarse = eigen_modes(0.5, &harmonic, &GridSpec::new(-10.0, 10.0, 499)?, 1, Dispersion::P2)?;
        let fine = eigen_modes(0.5, &harmonic, &GridSpec::new(-10.0, 10.0, 999)?, 1, Dispersion::P2)?;
        let extr = richardson(coarse.energy(0), fine.energy(0));
        push(
            checks,
            "spectral_ground_energy_richardson",
            (extr - 0.5).abs() < 5e-9,
            format!("extrapolated lambda_0 = {extr:.12}, err {:.2e}", (extr - 0.5).abs()),
        );
    }

    // Heat trace against the closed form.
    {
        let coarse = eigen_modes(0.5, &harmonic, &GridSpec::new(-10.0, 10.0, 699)?, 70, Dispersion::P2)?;
        let fine = eigen_modes(0.5, &harmonic, &GridSpec::new(-10.0, 10.0, 1399)?, 70, Dispersion::P2)?;
        let extr = richardson(coarse.trace_heat(1.0), fine.trace_heat(1.0));
        let want = Oscillator::standard().trace_closed(1.0);
        push(
            checks,
            "spectral_trace_richardson",
            (extr - want).abs() < 1e-6,
            format!("trace at sigma = 1: {extr:.10} vs {want:.10}"),
        );
    }

    // Wigner function of the third excited state from computed eigenvectors.
    {
        let osc = Oscillator::standard();
        let pts = [-1.0f64, 0.0, 1.0];
        let mut worst = 0.0f64;
        let coarse_modes =
            eigen_modes(0.5, &harmonic, &GridSpec::new(-10.0, 10.0, 749)?, 4, Dispersion::P2)?;
        let fine_modes =
            eigen_modes(0.5, &harmonic, &GridSpec::new(-10.0, 10.0, 1499)?, 4, Dispersion::P2)?;
        let coarse = WeylTransform::projector(&coarse_modes, 3, 1.0)?
            .table(&pts, &pts, Convention::WignerDensity)?;
        let fine = WeylTransform::projector(&fine_modes, 3, 1.0)?
            .table(&pts, &pts, Convention::WignerDensity)?;
        let table = WignerTable::richardson(&coarse, &fine)?;
        for (iq, qv) in pts.iter().enumerate() {
            for (ip, pv) in pts.iter().enumerate() {
                worst = worst.max((table.value(iq, ip) - osc.wigner(3, *qv, *pv)).abs());
            }
        }
        push(
            checks,
            "weyl_w3_table_richardson",
            worst < 1e-4,
            format!("W_3 on a 3x3 table, worst abs err {worst:.2e}"),
        );
    }

    // Heat symbol from the mode sum vs the closed form.
    {
        let coarse_modes =
            eigen_modes(0.5, &harmonic, &GridSpec::new(-10.0, 10.0, 999)?, 80, Dispersion::P2)?;
        let fine_modes =
            eigen_modes(0.5, &harmonic, &GridSpec::new(-10.0, 10.0, 1999)?, 80, Dispersion::P2)?;
        let qs = [0.6f64];
        let ps = [0.0f64];
        let coarse = WeylTransform::heat(&coarse_modes, 0.5, 1.0)?
            .table(&qs, &ps, Convention::WeylSymbol)?;
        let fine =
            WeylTransform::heat(&fine_modes, 0.5, 1.0)?.table(&qs, &ps, Convention::WeylSymbol)?;
        let got = WignerTable::richardson(&coarse, &fine)?.value(0, 0);
        let want = Oscillator::standard().heat_closed(0.6, 0.0, 0.5);
        push(
            checks,
            "heat_symbol_spectral_vs_closed",
            (got - want).abs() < 1e-6,
            format!("Exp(-H sigma) at (0.6, 0), sigma = 0.5: {got:.10} vs {want:.10}"),
        );
    }

    // Short-time density fit at q = 0 recovers the corrected sigma^{3/2}
    // coefficient, sign included.
    {
        let coarse_modes =
            eigen_modes(0.5, &harmonic, &GridSpec::new(-12.0, 12.0, 599)?, 400, Dispersion::P2)?;
        let fine_modes =
            eigen_modes(0.5, &harmonic, &GridSpec::new(-12.0, 12.0, 1199)?, 400, Dispersion::P2)?;
        let sigmas: Vec<f64> = (0..20)
            .map(|i| 0.06 * (5.0f64).powf(i as f64 / 19.0))
            .collect();
        let ys: Vec<f64> = sigmas
            .iter()
            .map(|&s| richardson(coarse_modes.density_at(299, s), fine_modes.density_at(599, s)))
            .collect();
        let design = vec![
            sigmas.iter().map(|s| s.powf(-0.5)).collect::<Vec<_>>(),
            sigmas.iter().map(|s| s.powf(0.5)).collect(),
            sigmas.iter().map(|s| s.powf(1.5)).collect(),
        ];
        let coeffs = least_squares(&design, &ys)?;
        let want = -1.0 / (12.0 * (2.0 * PI).sqrt());
        let rel = (coeffs[2] - want).abs() / want.abs();
        push(
            checks,
            "sdw_density_fit_c2",
            rel < 0.05,
            format!("fitted sigma^1.5 coefficient {:.6e} vs {want:.6e}, rel err {rel:.3}", coeffs[2]),
        );
    }

    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run_oracle_suite(true).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{} failed: {}", c.name, c.detail);
        }
        assert!(report.all_passed());
        assert!(report.failures().is_empty());
    }

    #[test]
    #[ignore = "several large eigenproblems; run explicitly"]
    fn full_suite_passes() {
        let report = run_oracle_suite(false).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{} failed: {}", c.name, c.detail);
        }
    }

    #[test]
    fn ledger_covers_required_formulas() {
        let entries = discrepancy_entries();
        assert!(entries.len() >= 6);
        for id in [
            "gcal2_coefficients",
            "f2_g2_closed_forms",
            "wigner_mode_normalization",
            "laguerre_generating_function",
            "a2_prefactor",
            "delta2_a2_sign",
        ] {
            assert!(
                entries.iter().any(|e| e.formula_id == id),
                "missing ledger entry {id}"
            );
        }
        for e in &entries {
            assert!(!e.location_quote.is_empty());
            assert!(!e.paper_expr.is_empty());
            assert!(!e.computed_expr.is_empty());
            assert!(!e.first_divergence.is_empty());
        }
    }

    #[test]
    fn report_serializes_with_schema_keys() {
        let report = LedgerReport {
            checks: vec![OracleCheck { name: "demo", passed: true, detail: "ok".into() }],
            discrepancies: discrepancy_entries(),
        };
        let json = report.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let first = &value["discrepancies"][0];
        for key in ["formula_id", "paper_expr", "computed_expr", "location_quote"] {
            assert!(first.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(value["checks"][0]["name"], "demo");
    }
}
