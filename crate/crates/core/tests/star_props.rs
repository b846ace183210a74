//! Exact star-algebra properties over a randomized polynomial corpus.
//!
//! Everything here runs in rational arithmetic with zero tolerance; a failure
//! means an algebraic identity broke, not that a cutoff was too tight.

use moyal::phasepoly::{
    crat_real, moyal_bracket, omega_k, rat, star, star_power, Monomial, PhasePoly, StarContext,
};
use proptest::prelude::*;
use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rand_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

/// Random polynomial in q, p with rational coefficients, total degree at most
/// `max_deg`, and a bounded term count.
fn rand_poly(rng: &mut ChaCha8Rng, max_deg: u32, max_terms: usize) -> PhasePoly {
    let terms = 1 + (rng.next_u64() as usize) % max_terms;
    let mut poly = PhasePoly::zero();
    for _ in 0..terms {
        let dq = rand_in(rng, 0, max_deg as i64) as u32;
        let dp = rand_in(rng, 0, (max_deg - dq) as i64) as u32;
        let num = rand_in(rng, -9, 9);
        let den = rand_in(rng, 1, 4);
        if num == 0 {
            continue;
        }
        let mono = Monomial { hbar: 0, q: dq, p: dp };
        poly = &poly + &PhasePoly::monomial(mono, crat_real(rat(num, den)));
    }
    poly
}

fn poisson(f: &PhasePoly, g: &PhasePoly) -> PhasePoly {
    omega_k(f, g, 1).unwrap()
}

#[test]
fn associativity_on_random_corpus() {
    let ctx = StarContext::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..60 {
        let f = rand_poly(&mut rng, 6, 4);
        let g = rand_poly(&mut rng, 6, 4);
        let h = rand_poly(&mut rng, 6, 4);
        let lhs = star(&star(&f, &g, &ctx).unwrap(), &h, &ctx).unwrap();
        let rhs = star(&f, &star(&g, &h, &ctx).unwrap(), &ctx).unwrap();
        assert_eq!(lhs, rhs, "associativity failed on case {case}");
    }
}

#[test]
fn jacobi_identity_on_random_corpus() {
    let ctx = StarContext::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..50 {
        let f = rand_poly(&mut rng, 5, 3);
        let g = rand_poly(&mut rng, 5, 3);
        let h = rand_poly(&mut rng, 5, 3);
        let a = moyal_bracket(&moyal_bracket(&f, &g, &ctx).unwrap(), &h, &ctx).unwrap();
        let b = moyal_bracket(&moyal_bracket(&g, &h, &ctx).unwrap(), &f, &ctx).unwrap();
        let c = moyal_bracket(&moyal_bracket(&h, &f, &ctx).unwrap(), &g, &ctx).unwrap();
        let total = &(&a + &b) + &c;
        assert!(total.is_zero(), "Jacobi failed on case {case}: {}", total.render());
    }
}

#[test]
fn classical_limits_on_random_corpus() {
    let ctx = StarContext::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let i_one = moyal::phasepoly::crat_imag(rat(1, 1));
    for case in 0..50 {
        let f = rand_poly(&mut rng, 6, 4);
        let g = rand_poly(&mut rng, 6, 4);

        // hbar -> 0: the star product degenerates to the pointwise product.
        let prod = star(&f, &g, &ctx).unwrap();
        assert_eq!(prod.hbar_coefficient(0), f.mul(&g).unwrap(), "case {case}");

        // The bracket starts at i hbar {f, g}_PB and contains only odd powers.
        let br = moyal_bracket(&f, &g, &ctx).unwrap();
        assert_eq!(br.hbar_coefficient(1), poisson(&f, &g).scale(&i_one), "case {case}");
        assert!(br.hbar_coefficient(0).is_zero());
        assert!(br.hbar_coefficient(2).is_zero());
        assert!(br.hbar_coefficient(4).is_zero());
    }
}

#[test]
fn star_power_hbar2_formula_on_random_corpus() {
    let ctx = StarContext::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for case in 0..50 {
        let f = rand_poly(&mut rng, 4, 3);
        let n = rand_in(&mut rng, 2, 8) as u32;
        let lhs = star_power(&f, n, &ctx).unwrap().hbar_coefficient(2);
        let mut rhs = PhasePoly::zero();
        for k in 0..=(n - 2) {
            let term = f
                .pow(k)
                .unwrap()
                .mul(&omega_k(&f, &f.pow(n - 1 - k).unwrap(), 2).unwrap())
                .unwrap();
            rhs = &rhs + &term;
        }
        let rhs = rhs.scale_rat(&rat(-1, 8));
        assert_eq!(lhs, rhs, "hbar^2 star-power formula failed on case {case} (n = {n})");
    }
}

#[test]
fn conjugation_reverses_real_products() {
    let ctx = StarContext::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..30 {
        let f = rand_poly(&mut rng, 5, 4);
        let g = rand_poly(&mut rng, 5, 4);
        let fg = star(&f, &g, &ctx).unwrap();
        let gf = star(&g, &f, &ctx).unwrap();
        assert_eq!(fg.conj(), gf);
        // Symmetric and antisymmetric parts: f*g + g*f is real, f*g - g*f is
        // purely imaginary (real f, g).
        assert!((&fg + &gf).is_real());
        let comm = &fg - &gf;
        assert!(comm.conj() == -&comm);
    }
}

#[test]
fn one_is_the_star_identity_and_constants_are_central() {
    let ctx = StarContext::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let one = PhasePoly::one();
    for _ in 0..20 {
        let f = rand_poly(&mut rng, 6, 4);
        assert_eq!(star(&one, &f, &ctx).unwrap(), f);
        assert_eq!(star(&f, &one, &ctx).unwrap(), f);
        let c = PhasePoly::constant_rat(rat(7, 3));
        assert!(moyal_bracket(&c, &f, &ctx).unwrap().is_zero());
    }
}

#[test]
fn truncated_context_agrees_with_exact_below_cut() {
    let ctx = StarContext::exact();
    let cut = StarContext::truncated(3);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let f = rand_poly(&mut rng, 5, 3);
        let g = rand_poly(&mut rng, 5, 3);
        let full = star(&f, &g, &ctx).unwrap();
        let trunc = star(&f, &g, &cut).unwrap();
        assert_eq!(trunc, full.truncate_hbar(3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Rendering then reparsing is the identity on hbar-free polynomials.
    #[test]
    fn render_reparse_round_trip(seed in 0u64..1024) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = rand_poly(&mut rng, 6, 5);
        let text = f.render();
        let back = PhasePoly::parse(&text).unwrap();
        prop_assert_eq!(back, f, "round trip failed for {}", text);
    }

    /// The star product is bilinear over rational scalars.
    #[test]
    fn star_is_bilinear(seed in 0u64..512, num in -6i64..7, den in 1i64..5) {
        let ctx = StarContext::exact();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ca1ab1e);
        let f = rand_poly(&mut rng, 5, 3);
        let g = rand_poly(&mut rng, 5, 3);
        let h = rand_poly(&mut rng, 5, 3);
        let c = rat(num, den);
        let lhs = star(&(&f.scale_rat(&c) + &g), &h, &ctx).unwrap();
        let rhs = &star(&f, &h, &ctx).unwrap().scale_rat(&c) + &star(&g, &h, &ctx).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
