//! Weyl transform of operators built from finite-difference eigenmodes.
//!
//! An operator `A = sum_n w_n |psi_n><psi_n|` on the Dirichlet grid has the
//! discretized Weyl symbol
//!
//! ```text
//! A_W(q_i, p) = 2h [ F_0 + 2 sum_{m>=1} F_m cos(2 m h p / hbar) ],
//! F_m(i) = sum_n w_n psi_n[i + m] psi_n[i - m],
//! ```
//!
//! the trapezoid form of `int e^{-i p y / hbar} <q + y/2| A |q - y/2> dy`
//! with `y = 2 m h`. The cosine series limits resolvable momenta to the
//! Nyquist window `|p| <= pi hbar / (2h)`; evaluation outside is an error
//! rather than silent aliasing.

use crate::error::{Error, Result};
use crate::spectral::Modes;
use rayon::prelude::*;
use std::io::{self, Write};

/// Output scaling: the bare Weyl symbol, or the Wigner-style phase-space
/// density `A_W / (2 pi hbar)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    WeylSymbol,
    WignerDensity,
}

impl Convention {
    pub fn label(&self) -> &'static str {
        match self {
            Convention::WeylSymbol => "weyl_symbol",
            Convention::WignerDensity => "wigner_density",
        }
    }
}

pub struct WeylTransform<'a> {
    modes: &'a Modes,
    weights: Vec<f64>,
    hbar: f64,
}

impl<'a> WeylTransform<'a> {
    pub fn new(modes: &'a Modes, weights: Vec<f64>, hbar: f64) -> Result<Self> {
        if weights.len() != modes.len() {
            return Err(Error::Config(format!(
                "{} weights for {} modes",
                weights.len(),
                modes.len()
            )));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::Config(format!("hbar must be positive, got {hbar}")));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Config("weights must be finite".into()));
        }
        Ok(WeylTransform { modes, weights, hbar })
    }

    /// Heat-operator weights `w_n = e^{-sigma E_n}`.
    pub fn heat(modes: &'a Modes, sigma: f64, hbar: f64) -> Result<Self> {
        let weights = modes.energies().iter().map(|e| (-sigma * e).exp()).collect();
        Self::new(modes, weights, hbar)
    }

    /// All weights 1: the symbol of the (truncated) identity.
    pub fn identity(modes: &'a Modes, hbar: f64) -> Result<Self> {
        Self::new(modes, vec![1.0; modes.len()], hbar)
    }

    /// Projector onto mode `n`.
    pub fn projector(modes: &'a Modes, n: usize, hbar: f64) -> Result<Self> {
        if n >= modes.len() {
            return Err(Error::Config(format!("projector index {n} out of {} modes", modes.len())));
        }
        let mut weights = vec![0.0; modes.len()];
        weights[n] = 1.0;
        Self::new(modes, weights, hbar)
    }

    /// Largest momentum before the discrete cosine series aliases.
    pub fn p_max(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 * self.hbar / self.modes.grid().h()
    }

    fn check_p(&self, p: f64) -> Result<()> {
        if !p.is_finite() || p.abs() > self.p_max() * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "momentum {p} outside the Nyquist window |p| <= {:.6}",
                self.p_max()
            )));
        }
        Ok(())
    }

    fn f_coeffs(&self, i: usize) -> Vec<f64> {
        let n = self.modes.grid().len();
        let m_max = i.min(n - 1 - i);
        let mut out = Vec::with_capacity(m_max + 1);
        for m in 0..=m_max {
            let mut acc = 0.0;
            for (k, w) in self.weights.iter().enumerate() {
                let psi = self.modes.psi(k);
                acc += w * psi[i + m] * psi[i - m];
            }
            out.push(acc);
        }
        out
    }

    /// Symbol at grid node `i` for each momentum in `ps`.
    pub fn node_profile(&self, i: usize, ps: &[f64]) -> Result<Vec<f64>> {
        let n = self.modes.grid().len();
        if i >= n {
            return Err(Error::Domain(format!("node index {i} out of {n}")));
        }
        for &p in ps {
            self.check_p(p)?;
        }
        let h = self.modes.grid().h();
        let f = self.f_coeffs(i);
        Ok(ps
            .iter()
            .map(|&p| {
                let freq = 2.0 * h * p / self.hbar;
                let mut acc = f[0];
                for (m, fm) in f.iter().enumerate().skip(1) {
                    acc += 2.0 * fm * (m as f64 * freq).cos();
                }
                2.0 * h * acc
            })
            .collect())
    }

    /// Symbol at arbitrary `q` (linear interpolation between node columns).
    pub fn eval(&self, q: f64, p: f64) -> Result<f64> {
        let grid = self.modes.grid();
        let n = grid.len();
        let lo = grid.node(0);
        let hi = grid.node(n - 1);
        if !q.is_finite() || q < lo || q > hi {
            return Err(Error::Domain(format!("q = {q} outside node range [{lo}, {hi}]")));
        }
        let h = grid.h();
        let pos = (q - lo) / h;
        let i = (pos.floor() as usize).min(n - 1);
        let t = pos - i as f64;
        if t.abs() < 1e-9 || i + 1 == n {
            return Ok(self.node_profile(i, &[p])?[0]);
        }
        let a = self.node_profile(i, &[p])?[0];
        let b = self.node_profile(i + 1, &[p])?[0];
        Ok((1.0 - t) * a + t * b)
    }

    /// `(1 / 2 pi hbar) int A_W^2 dq dp` with the momentum integral done
    /// exactly over one Nyquist period by Parseval; equals `Tr A^2` up to
    /// discretization error.
    pub fn purity(&self) -> f64 {
        let n = self.modes.grid().len();
        let h = self.modes.grid().h();
        let total: f64 = (0..n)
            .into_par_iter()
            .map(|i| {
                let f = self.f_coeffs(i);
                let mut acc = f[0] * f[0];
                for fm in &f[1..] {
                    acc += 2.0 * fm * fm;
                }
                acc
            })
            .sum();
        2.0 * h * h * total
    }

    pub fn table(&self, qs: &[f64], ps: &[f64], convention: Convention) -> Result<WignerTable> {
        let scale = match convention {
            Convention::WeylSymbol => 1.0,
            Convention::WignerDensity => 1.0 / (2.0 * std::f64::consts::PI * self.hbar),
        };
        let mut values = Vec::with_capacity(qs.len() * ps.len());
        for &q in qs {
            for &p in ps {
                values.push(scale * self.eval(q, p)?);
            }
        }
        Ok(WignerTable {
            qs: qs.to_vec(),
            ps: ps.to_vec(),
            values,
            convention,
            hbar: self.hbar,
        })
    }
}

/// Row-major `q x p` table of symbol or density values.
#[derive(Clone, Debug)]
pub struct WignerTable {
    pub qs: Vec<f64>,
    pub ps: Vec<f64>,
    pub values: Vec<f64>,
    pub convention: Convention,
    pub hbar: f64,
}

impl WignerTable {
    pub fn value(&self, iq: usize, ip: usize) -> f64 {
        self.values[iq * self.ps.len() + ip]
    }

    /// Entrywise `(4 fine - coarse) / 3` for tables computed on a grid pair;
    /// the phase-space sample points must match.
    pub fn richardson(coarse: &WignerTable, fine: &WignerTable) -> Result<WignerTable> {
        let same = |a: &[f64], b: &[f64]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
        };
        if coarse.convention != fine.convention
            || !same(&coarse.qs, &fine.qs)
            || !same(&coarse.ps, &fine.ps)
        {
            return Err(Error::Config("richardson tables must share sample points".into()));
        }
        let values = coarse
            .values
            .iter()
            .zip(&fine.values)
            .map(|(c, f)| (4.0 * f - c) / 3.0)
            .collect();
        Ok(WignerTable {
            qs: fine.qs.clone(),
            ps: fine.ps.clone(),
            values,
            convention: fine.convention,
            hbar: fine.hbar,
        })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# convention: {}", self.convention.label())?;
        writeln!(w, "# hbar: {:.16e}", self.hbar)?;
        writeln!(w, "# q_points: {}", self.qs.len())?;
        writeln!(w, "# p_points: {}", self.ps.len())?;
        writeln!(w, "q,p,value")?;
        for (iq, q) in self.qs.iter().enumerate() {
            for (ip, p) in self.ps.iter().enumerate() {
                writeln!(w, "{q:.16e},{p:.16e},{:.16e}", self.value(iq, ip))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasepoly::rat;
    use crate::potential::PotentialSpec;
    use crate::spectral::{eigen_modes, Dispersion, GridSpec};

    fn harmonic_modes(n: usize, count: usize) -> Modes {
        let (alpha, pot) = PotentialSpec::harmonic(rat(1, 1), rat(1, 1));
        let alpha = crate::potential::rat_to_f64(&alpha);
        let g = GridSpec::new(-8.0, 8.0, n).unwrap();
        eigen_modes(alpha, &pot, &g, count, Dispersion::P2).unwrap()
    }

    #[test]
    fn ground_state_symbol_matches_gaussian() {
        let modes = harmonic_modes(499, 1);
        let t = WeylTransform::projector(&modes, 0, 1.0).unwrap();
        for (q, p) in [(0.0, 0.0), (0.5, 0.5), (-1.0, 0.3), (1.2, -0.8)] {
            let got = t.eval(q, p).unwrap();
            let exact = 2.0 * (-(q * q + p * p)).exp();
            assert!((got - exact).abs() < 5e-3, "({q},{p}): {got} vs {exact}");
        }
    }

    #[test]
    fn nyquist_window_enforced() {
        let modes = harmonic_modes(199, 1);
        let t = WeylTransform::projector(&modes, 0, 1.0).unwrap();
        let p_max = t.p_max();
        assert!(t.eval(0.0, 0.9 * p_max).is_ok());
        assert!(matches!(t.eval(0.0, 1.1 * p_max), Err(Error::Domain(_))));
    }

    #[test]
    fn interpolation_is_linear_between_nodes() {
        let modes = harmonic_modes(199, 2);
        let t = WeylTransform::identity(&modes, 1.0).unwrap();
        let g = modes.grid();
        let (q0, q1) = (g.node(70), g.node(71));
        let mid = 0.5 * (q0 + q1);
        let avg = 0.5 * (t.eval(q0, 0.4).unwrap() + t.eval(q1, 0.4).unwrap());
        assert!((t.eval(mid, 0.4).unwrap() - avg).abs() < 1e-12);
    }

    #[test]
    fn pure_state_purity_is_one() {
        let modes = harmonic_modes(499, 1);
        let t = WeylTransform::projector(&modes, 0, 1.0).unwrap();
        let p = t.purity();
        assert!((p - 1.0).abs() < 1e-3, "purity {p}");
    }

    #[test]
    fn richardson_requires_matching_points() {
        let coarse = harmonic_modes(199, 1);
        let fine = harmonic_modes(399, 1);
        let qs = [0.0, 0.5];
        let ps = [0.0, 0.5];
        let tc = WeylTransform::projector(&coarse, 0, 1.0)
            .unwrap()
            .table(&qs, &ps, Convention::WeylSymbol)
            .unwrap();
        let tf = WeylTransform::projector(&fine, 0, 1.0)
            .unwrap()
            .table(&qs, &ps, Convention::WeylSymbol)
            .unwrap();
        let r = WignerTable::richardson(&tc, &tf).unwrap();
        assert_eq!(r.values.len(), 4);
        let other = WeylTransform::projector(&fine, 0, 1.0)
            .unwrap()
            .table(&[0.0, 0.25], &ps, Convention::WeylSymbol)
            .unwrap();
        assert!(WignerTable::richardson(&tc, &other).is_err());
    }

    #[test]
    fn csv_shape() {
        let modes = harmonic_modes(199, 1);
        let table = WeylTransform::projector(&modes, 0, 1.0)
            .unwrap()
            .table(&[0.0, 1.0], &[-0.5, 0.0, 0.5], Convention::WignerDensity)
            .unwrap();
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4 + 1 + 6);
        assert_eq!(lines[0], "# convention: wigner_density");
        assert_eq!(lines[4], "q,p,value");
        assert!(lines[5].starts_with("0.0000000000000000e0,-5.0000000000000000e-1,"));
    }

    #[test]
    fn density_convention_scales() {
        let modes = harmonic_modes(199, 1);
        let t = WeylTransform::projector(&modes, 0, 1.0).unwrap();
        let sym = t.table(&[0.0], &[0.0], Convention::WeylSymbol).unwrap();
        let den = t.table(&[0.0], &[0.0], Convention::WignerDensity).unwrap();
        let ratio = sym.values[0] / den.values[0];
        assert!((ratio - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
