//! Cross-checks for the ħ-corrections of the star exponential.
//!
//! Two fully independent routes produce the same corrections:
//! the direct star-product recursion in `starexp::gcal`, and the
//! twisted-derivative jets in `jet::gcal_jet`.  A third route, the exact
//! closed harmonic symbol expanded through tanh/sech Maclaurin recurrences,
//! pins down the oscillator case without touching either implementation.

use moyal::jet::{gcal_jet, jet_to_sigma_series};
use moyal::phasepoly::{crat_real, rat, Monomial, PhasePoly, Rat, StarContext};
use moyal::sigma::SigmaSeries;
use moyal::starexp::{gcal, star_exp_series};

fn monomial(hbar: u32, q: u32, p: u32, c: Rat) -> PhasePoly {
    PhasePoly::monomial(Monomial { hbar, q, p }, crat_real(c))
}

/// `f = α p^2 + q^deg`.
fn alpha_p2_plus_power(alpha: Rat, deg: u32) -> PhasePoly {
    &monomial(0, 0, 2, alpha) + &monomial(0, deg, 0, rat(1, 1))
}

fn v_coeffs(deg: u32) -> Vec<Rat> {
    let mut c = vec![rat(0, 1); deg as usize + 1];
    c[deg as usize] = rat(1, 1);
    c
}

#[test]
fn jet_recursion_matches_star_route_through_order_four() {
    let jets = gcal_jet(4).unwrap();
    for &deg in &[1u32, 2, 3, 4] {
        for alpha in [rat(1, 2), rat(1, 1)] {
            let f = alpha_p2_plus_power(alpha.clone(), deg);
            for &n in &[2u32, 4] {
                let star_route = gcal(&f, n, 8).unwrap();
                let jet_route =
                    jet_to_sigma_series(&jets[n as usize], &alpha, &v_coeffs(deg)).unwrap();
                assert_eq!(
                    star_route, jet_route,
                    "G_{n} mismatch for alpha = {alpha}, v = q^{deg}"
                );
            }
        }
    }
}

#[test]
fn odd_corrections_vanish() {
    let jets = gcal_jet(3).unwrap();
    assert!(jets[1].is_zero());
    assert!(jets[3].is_zero());
    let f = alpha_p2_plus_power(rat(1, 2), 4);
    assert!(gcal(&f, 1, 6).unwrap().is_zero());
    assert!(gcal(&f, 3, 6).unwrap().is_zero());
}

#[test]
fn gcal2_closed_form_for_polynomial_potentials() {
    // 𝒢_2 = -(α/4) σ^2 v'' + (α^2/6) σ^3 p^2 v'' + (α/12) σ^3 v'^2
    for &deg in &[1u32, 2, 3, 4] {
        for alpha in [rat(1, 2), rat(1, 1)] {
            let f = alpha_p2_plus_power(alpha.clone(), deg);
            let v = monomial(0, deg, 0, rat(1, 1));
            let v1 = v.deriv_q();
            let v2 = v1.deriv_q();
            let alpha_poly = PhasePoly::constant_rat(alpha.clone());
            let p2 = monomial(0, 0, 2, rat(1, 1));

            let s2 = v2.mul(&alpha_poly).unwrap().scale_rat(&rat(-1, 4));
            let s3a = v2
                .mul(&p2)
                .unwrap()
                .mul(&alpha_poly)
                .unwrap()
                .mul(&alpha_poly)
                .unwrap()
                .scale_rat(&rat(1, 6));
            let s3b = v1.mul(&v1).unwrap().mul(&alpha_poly).unwrap().scale_rat(&rat(1, 12));
            let expected = SigmaSeries::new(vec![
                PhasePoly::zero(),
                PhasePoly::zero(),
                s2,
                &s3a + &s3b,
            ]);
            assert_eq!(gcal(&f, 2, 8).unwrap(), expected, "alpha = {alpha}, v = q^{deg}");
        }
    }
}

/// Maclaurin coefficients of tanh from `tanh' = 1 - tanh^2`, tanh(0) = 0.
fn tanh_series(order: usize) -> Vec<Rat> {
    let mut t = vec![rat(0, 1); order + 1];
    for k in 0..order {
        let mut conv = rat(0, 1);
        for i in 0..=k {
            conv += t[i].clone() * t[k - i].clone();
        }
        let mut rhs = -conv;
        if k == 0 {
            rhs += rat(1, 1);
        }
        t[k + 1] = rhs / Rat::from_integer(((k + 1) as i64).into());
    }
    t
}

/// Maclaurin coefficients of sech from `sech' = -sech tanh`, sech(0) = 1.
fn sech_series(order: usize) -> Vec<Rat> {
    let t = tanh_series(order);
    let mut s = vec![rat(0, 1); order + 1];
    s[0] = rat(1, 1);
    for k in 0..order {
        let mut conv = rat(0, 1);
        for i in 0..=k {
            conv += s[i].clone() * t[k - i].clone();
        }
        s[k + 1] = -conv / Rat::from_integer(((k + 1) as i64).into());
    }
    s
}

#[test]
fn tanh_sech_recurrences_reproduce_known_coefficients() {
    let t = tanh_series(7);
    assert_eq!(t[1], rat(1, 1));
    assert_eq!(t[3], rat(-1, 3));
    assert_eq!(t[5], rat(2, 15));
    assert_eq!(t[7], rat(-17, 315));
    let s = sech_series(6);
    assert_eq!(s[0], rat(1, 1));
    assert_eq!(s[2], rat(-1, 2));
    assert_eq!(s[4], rat(5, 24));
    assert_eq!(s[6], rat(-61, 720));
}

/// The closed oscillator symbol is `sech(ħσ/2) exp(-(2H/ħ) tanh(ħσ/2))` with
/// `H = (p^2 + q^2)/2`.  Expanding tanh and sech exactly and collecting powers
/// of ħ must reproduce the corrections computed from the star product, with no
/// tolerance anywhere.
#[test]
fn closed_oscillator_symbol_taylor_matches_gcal_exactly() {
    const ORDER: usize = 8;
    let h = &monomial(0, 2, 0, rat(1, 2)) + &monomial(0, 0, 2, rat(1, 2));
    let t = tanh_series(ORDER);
    let s = sech_series(ORDER);

    // sech(ħσ/2) as a σ-series: slot k holds S_k (ħ/2)^k.
    let sech_part = SigmaSeries::new(
        (0..=ORDER)
            .map(|k| monomial(k as u32, 0, 0, s[k].clone() / Rat::from_integer(2i64.pow(k as u32).into())))
            .collect(),
    );

    // Exponent beyond the classical -Hσ piece:
    // -(2H/ħ) Σ_{k≥3} T_k (ħσ/2)^k = Σ_{k≥3} (-2 T_k / 2^k) H ħ^{k-1} σ^k.
    let mut tail = SigmaSeries::zeros(ORDER);
    for k in 3..=ORDER {
        if t[k] == rat(0, 1) {
            continue;
        }
        let c = -t[k].clone() * rat(2, 1) / Rat::from_integer(2i64.pow(k as u32).into());
        let slot = h.mul(&monomial((k - 1) as u32, 0, 0, c)).unwrap();
        let mut coeffs = vec![PhasePoly::zero(); ORDER + 1];
        coeffs[k] = slot;
        tail = tail.add(&SigmaSeries::new(coeffs));
    }

    // exp(tail): tail starts at σ^3, so two terms reach σ^8 exactly.
    let mut exp_tail = SigmaSeries::new(vec![PhasePoly::one()]);
    exp_tail = exp_tail.add(&tail);
    exp_tail = exp_tail.add(&tail.mul_truncated(&tail, ORDER).unwrap().scale_rat(&rat(1, 2)));

    let regrouped = sech_part.mul_truncated(&exp_tail, ORDER).unwrap();

    for &n in &[0u32, 2, 4, 6] {
        let from_closed = regrouped.hbar_coefficient(n);
        let from_star = gcal(&h, n, ORDER as u32).unwrap();
        assert_eq!(from_closed, from_star, "hbar^{n} corrections differ");
    }

    // The first two corrections in closed form.
    let expected_g2 = SigmaSeries::new(vec![
        PhasePoly::zero(),
        PhasePoly::zero(),
        PhasePoly::constant_rat(rat(-1, 8)),
        h.scale_rat(&rat(1, 12)),
    ]);
    assert_eq!(regrouped.hbar_coefficient(2), expected_g2);

    let h2 = h.mul(&h).unwrap();
    let expected_g4 = SigmaSeries::new(vec![
        PhasePoly::zero(),
        PhasePoly::zero(),
        PhasePoly::zero(),
        PhasePoly::zero(),
        PhasePoly::constant_rat(rat(5, 384)),
        h.scale_rat(&rat(-3, 160)),
        h2.scale_rat(&rat(1, 288)),
    ]);
    assert_eq!(regrouped.hbar_coefficient(4), expected_g4);
}

#[test]
fn star_exp_sigma_squared_slot_for_the_oscillator() {
    let h = &monomial(0, 2, 0, rat(1, 2)) + &monomial(0, 0, 2, rat(1, 2));
    let ctx = StarContext::exact();
    let series = star_exp_series(&h, 2, &ctx).unwrap();
    // (H*H)/2 = (H^2 - ħ^2/4)/2
    let expected = &h.mul(&h).unwrap().scale_rat(&rat(1, 2)) + &monomial(2, 0, 0, rat(-1, 8));
    assert_eq!(series.coeff(2), expected);
    assert_eq!(series.coeff(1), -&h);
    assert_eq!(series.coeff(0), PhasePoly::one());
}

#[test]
fn quartic_gcal4_frozen_slots() {
    // Regression pin for α = 1/2, v = q^4; every slot was cross-confirmed by
    // the jet route in `jet_recursion_matches_star_route_through_order_four`.
    let f = alpha_p2_plus_power(rat(1, 2), 4);
    let g4 = gcal(&f, 4, 8).unwrap();
    assert!(g4.coeff(0).is_zero());
    assert!(g4.coeff(1).is_zero());
    assert!(g4.coeff(2).is_zero());
    assert_eq!(g4.coeff(3), PhasePoly::constant_rat(rat(-3, 16)));
    let s4 = &monomial(0, 0, 2, rat(1, 8)) + &monomial(0, 4, 0, rat(23, 8));
    assert_eq!(g4.coeff(4), s4);
    let s5 = &(&monomial(0, 0, 4, rat(-1, 80)) + &monomial(0, 4, 2, rat(-31, 20)))
        + &monomial(0, 8, 0, rat(-9, 5));
    assert_eq!(g4.coeff(5), s5);
    let s6 = &(&monomial(0, 4, 4, rat(1, 8)) + &monomial(0, 8, 2, rat(1, 3)))
        + &monomial(0, 12, 0, rat(2, 9));
    assert_eq!(g4.coeff(6), s6);
    for k in 7..=8 {
        assert!(g4.coeff(k).is_zero(), "sigma^{k} slot should vanish");
    }
}
