//! Tabulated datasets for the two reference figures.
//!
//! Figure 1: the star exponential of `f = p^2 + q^2` at sigma = -1, summed
//! through hbar orders 0, 2, 4 and compared against the closed form
//! `sech(hbar) e^{(f/hbar) tanh(hbar)}`. Figure 2: the same cumulative orders
//! for a general `alpha p^2 + v(q)` via the jet recursion, aimed at the
//! Coulomb potential on a strictly positive q window.

use crate::error::Result;
use crate::jet::gcal_jet;
use crate::phasepoly::{rat, PhasePoly};
use crate::potential::PotentialSpec;
use crate::starexp::gcal;
use std::io::{self, Write};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureRow {
    pub q: f64,
    pub p: f64,
    pub order: u32,
    pub value: f64,
}

/// Cumulative star-exponential orders for `f = p^2 + q^2` at sigma = -1.
pub fn figure1(qs: &[f64], ps: &[f64], hbar: f64) -> Result<Vec<FigureRow>> {
    let f = PhasePoly::parse("p^2 + q^2").expect("static expression");
    let minus_one = rat(-1, 1);
    // G_n is a sigma polynomial of degree <= 3n/2
    let g2 = gcal(&f, 2, 3)?.eval_sigma_rat(&minus_one);
    let g4 = gcal(&f, 4, 6)?.eval_sigma_rat(&minus_one);
    let h2 = hbar * hbar;
    let mut rows = Vec::with_capacity(qs.len() * ps.len() * 3);
    for &q in qs {
        for &p in ps {
            let base = (q * q + p * p).exp();
            let c2 = g2.eval_f64(q, p, 0.0).re;
            let c4 = g4.eval_f64(q, p, 0.0).re;
            rows.push(FigureRow { q, p, order: 0, value: base });
            rows.push(FigureRow { q, p, order: 2, value: base * (1.0 + h2 * c2) });
            rows.push(FigureRow {
                q,
                p,
                order: 4,
                value: base * (1.0 + h2 * c2 + h2 * h2 * c4),
            });
        }
    }
    Ok(rows)
}

/// Closed form the figure-1 series converges to:
/// `sech(hbar) e^{(q^2 + p^2) tanh(hbar) / hbar}`.
pub fn figure1_closed(q: f64, p: f64, hbar: f64) -> f64 {
    ((q * q + p * p) * hbar.tanh() / hbar).exp() / hbar.cosh()
}

/// Cumulative orders of `e^{-sigma f} (1 + hbar^2 G_2 + hbar^4 G_4)` for
/// `f = alpha p^2 + v(q)` through the jet recursion.
pub fn figure2(
    qs: &[f64],
    ps: &[f64],
    alpha: f64,
    pot: &PotentialSpec,
    sigma: f64,
    hbar: f64,
) -> Result<Vec<FigureRow>> {
    pot.validate()?;
    let g = gcal_jet(4)?;
    let h2 = hbar * hbar;
    let mut rows = Vec::with_capacity(qs.len() * ps.len() * 3);
    for &q in qs {
        let vders = pot.vders9(q)?;
        let v = pot.v(q)?;
        for &p in ps {
            let base = (-sigma * (alpha * p * p + v)).exp();
            let c2 = g[2].eval_f64(sigma, p, alpha, &vders).re;
            let c4 = g[4].eval_f64(sigma, p, alpha, &vders).re;
            rows.push(FigureRow { q, p, order: 0, value: base });
            rows.push(FigureRow { q, p, order: 2, value: base * (1.0 + h2 * c2) });
            rows.push(FigureRow {
                q,
                p,
                order: 4,
                value: base * (1.0 + h2 * c2 + h2 * h2 * c4),
            });
        }
    }
    Ok(rows)
}

/// Long-format CSV: metadata comments, then `q,p,order,value` rows.
pub fn write_figure_csv<W: Write>(
    rows: &[FigureRow],
    meta: &[(&str, String)],
    mut w: W,
) -> io::Result<()> {
    for (key, value) in meta {
        writeln!(w, "# {key}: {value}")?;
    }
    writeln!(w, "q,p,order,value")?;
    for r in rows {
        writeln!(w, "{:.16e},{:.16e},{},{:.16e}", r.q, r.p, r.order, r.value)?;
    }
    Ok(())
}
