//! Run descriptors: a JSON form of every CLI invocation.
//!
//! The top level is an object with a `command` key naming the job plus the
//! job's own fields. Unknown keys anywhere are rejected, and every descriptor
//! is validated before any computation starts, so a job either runs to
//! completion or fails up front.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::sdw::Normalization;

/// Output encoding for tabular results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl Default for OutputFormat {
    fn default() -> Self {
        OutputFormat::Csv
    }
}

/// Star-product job: print `f*g`, `g*f`, `[f,g]_M` for two expressions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarJob {
    pub f: String,
    pub g: String,
    /// Truncate results above this power of hbar; `None` keeps all orders.
    #[serde(default)]
    pub hbar_order: Option<u32>,
}

/// Figure-data job: long-format CSV of the star exponential at orders 0, 2, 4.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiguresJob {
    pub figure: u32,
    #[serde(default)]
    pub q_min: Option<f64>,
    #[serde(default)]
    pub q_max: Option<f64>,
    #[serde(default)]
    pub p_min: Option<f64>,
    #[serde(default)]
    pub p_max: Option<f64>,
    #[serde(default)]
    pub q_points: Option<usize>,
    #[serde(default)]
    pub p_points: Option<usize>,
    #[serde(default)]
    pub hbar: Option<f64>,
    #[serde(default)]
    pub output: Option<String>,
}

/// Oscillator Wigner-function job: one point or a full table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerJob {
    pub n: usize,
    /// `"q,p"`; when present the job prints a single value.
    #[serde(default)]
    pub at: Option<String>,
    #[serde(default)]
    pub q_min: Option<f64>,
    #[serde(default)]
    pub q_max: Option<f64>,
    #[serde(default)]
    pub p_min: Option<f64>,
    #[serde(default)]
    pub p_max: Option<f64>,
    #[serde(default)]
    pub q_points: Option<usize>,
    #[serde(default)]
    pub p_points: Option<usize>,
    #[serde(default)]
    pub hbar: Option<f64>,
    #[serde(default)]
    pub normalization: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
    #[serde(default)]
    pub output: Option<String>,
}

/// Green-function job for the oscillator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenJob {
    #[serde(default)]
    pub at: Option<String>,
    #[serde(default)]
    pub hbar: Option<f64>,
    /// `closed`, `angular`, or `modes`.
    #[serde(default)]
    pub route: Option<String>,
    #[serde(default)]
    pub terms: Option<usize>,
    #[serde(default)]
    pub output: Option<String>,
}

/// Zeta-function job via the Mellin transform of a heat trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaJob {
    /// Only `harmonic` is available.
    #[serde(default)]
    pub potential: Option<String>,
    pub s: Vec<f64>,
    #[serde(default)]
    pub split: Option<f64>,
    #[serde(default)]
    pub cut: Option<f64>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
    #[serde(default)]
    pub output: Option<String>,
}

/// Short-time density job.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdwJob {
    /// `harmonic`, `quartic-well`, `coulomb`, or comma-separated polynomial
    /// coefficients `c0,c1,...`.
    pub potential: String,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub hbar: Option<f64>,
    pub q: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    #[serde(default)]
    pub sigma_points: Option<usize>,
    #[serde(default)]
    pub order: Option<u32>,
    #[serde(default)]
    pub normalization: Option<String>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
    #[serde(default)]
    pub output: Option<String>,
}

/// Oracle-suite job: run the cross-checks, write the report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleJob {
    #[serde(default)]
    pub quick: bool,
    #[serde(default)]
    pub output: Option<String>,
}

/// A fully described run: one job plus its parameters.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunDescriptor {
    Star(StarJob),
    Figures(FiguresJob),
    Wigner(WignerJob),
    Green(GreenJob),
    Zeta(ZetaJob),
    Sdw(SdwJob),
    OracleCompare(OracleJob),
}

impl RunDescriptor {
    /// Parses and validates a JSON descriptor. The `command` key picks the
    /// job; every other key must belong to that job.
    pub fn from_json(text: &str) -> Result<RunDescriptor> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let mut obj = match value {
            serde_json::Value::Object(m) => m,
            _ => return Err(Error::Config("run descriptor must be a JSON object".into())),
        };
        let command = match obj.remove("command") {
            Some(serde_json::Value::String(s)) => s,
            Some(_) => return Err(Error::Config("\"command\" must be a string".into())),
            None => return Err(Error::Config("missing \"command\" key".into())),
        };
        let rest = serde_json::Value::Object(obj);
        let job = match command.as_str() {
            "star" => RunDescriptor::Star(serde_json::from_value(rest)?),
            "figures" => RunDescriptor::Figures(serde_json::from_value(rest)?),
            "wigner" => RunDescriptor::Wigner(serde_json::from_value(rest)?),
            "green" => RunDescriptor::Green(serde_json::from_value(rest)?),
            "zeta" => RunDescriptor::Zeta(serde_json::from_value(rest)?),
            "sdw" => RunDescriptor::Sdw(serde_json::from_value(rest)?),
            "oracle-compare" => RunDescriptor::OracleCompare(serde_json::from_value(rest)?),
            other => {
                return Err(Error::Config(format!(
                    "unknown command {other:?} (expected star, figures, wigner, green, zeta, sdw, or oracle-compare)"
                )))
            }
        };
        job.validate()?;
        Ok(job)
    }

    /// Checks every parameter before any computation.
    pub fn validate(&self) -> Result<()> {
        match self {
            RunDescriptor::Star(job) => {
                if job.f.trim().is_empty() || job.g.trim().is_empty() {
                    return Err(Error::Config("star: f and g must be non-empty".into()));
                }
            }
            RunDescriptor::Figures(job) => {
                if job.figure != 1 && job.figure != 2 {
                    return Err(Error::Config(format!("figures: figure must be 1 or 2, got {}", job.figure)));
                }
                let (q_lo, q_hi) = figure_q_range(job)?;
                let (p_lo, p_hi) = figure_p_range(job);
                check_range("q", q_lo, q_hi)?;
                check_range("p", p_lo, p_hi)?;
                if job.figure == 2 && q_lo <= 0.0 {
                    return Err(Error::Domain(format!(
                        "figures: figure 2 needs q > 0, got q_min = {q_lo}"
                    )));
                }
                check_points("q_points", job.q_points.unwrap_or(FIGURE_POINTS))?;
                check_points("p_points", job.p_points.unwrap_or(FIGURE_POINTS))?;
                check_positive("hbar", job.hbar.unwrap_or(1.0))?;
            }
            RunDescriptor::Wigner(job) => {
                if job.n > 200 {
                    return Err(Error::Config(format!("wigner: n must be at most 200, got {}", job.n)));
                }
                check_positive("hbar", job.hbar.unwrap_or(1.0))?;
                if let Some(at) = &job.at {
                    parse_point(at)?;
                } else {
                    check_range("q", job.q_min.unwrap_or(-3.0), job.q_max.unwrap_or(3.0))?;
                    check_range("p", job.p_min.unwrap_or(-3.0), job.p_max.unwrap_or(3.0))?;
                    check_points("q_points", job.q_points.unwrap_or(61))?;
                    check_points("p_points", job.p_points.unwrap_or(61))?;
                }
                parse_normalization(job.normalization.as_deref())?;
            }
            RunDescriptor::Green(job) => {
                if let Some(at) = &job.at {
                    parse_point(at)?;
                }
                check_positive("hbar", job.hbar.unwrap_or(1.0))?;
                parse_green_route(job.route.as_deref())?;
                let terms = job.terms.unwrap_or(400);
                if terms == 0 || terms > 100_000 {
                    return Err(Error::Config(format!("green: terms must be in 1..=100000, got {terms}")));
                }
            }
            RunDescriptor::Zeta(job) => {
                match job.potential.as_deref().unwrap_or("harmonic") {
                    "harmonic" => {}
                    other => {
                        return Err(Error::Config(format!(
                            "zeta: only the harmonic trace is available, got {other:?}"
                        )))
                    }
                }
                if job.s.is_empty() {
                    return Err(Error::Config("zeta: need at least one s value".into()));
                }
                for &s in &job.s {
                    if !(s > 1.0) || !s.is_finite() {
                        return Err(Error::Domain(format!(
                            "zeta: s must be finite and greater than 1, got {s}"
                        )));
                    }
                }
                let split = job.split.unwrap_or(1.0);
                let cut = job.cut.unwrap_or(100.0);
                if !(split > 0.0 && cut > split) {
                    return Err(Error::Config(format!(
                        "zeta: need 0 < split < cut, got split = {split}, cut = {cut}"
                    )));
                }
            }
            RunDescriptor::Sdw(job) => {
                parse_potential(&job.potential)?;
                check_positive("alpha", job.alpha.unwrap_or(0.5))?;
                check_positive("hbar", job.hbar.unwrap_or(1.0))?;
                if !job.q.is_finite() {
                    return Err(Error::Config(format!("sdw: q must be finite, got {}", job.q)));
                }
                check_positive("sigma_min", job.sigma_min)?;
                if !(job.sigma_max >= job.sigma_min) || !job.sigma_max.is_finite() {
                    return Err(Error::Config(format!(
                        "sdw: need sigma_min <= sigma_max, got {} and {}",
                        job.sigma_min, job.sigma_max
                    )));
                }
                let order = job.order.unwrap_or(4);
                if order > 4 {
                    return Err(Error::Config(format!("sdw: order must be at most 4, got {order}")));
                }
                let points = job.sigma_points.unwrap_or(1);
                if points == 0 || points > 100_000 {
                    return Err(Error::Config(format!(
                        "sdw: sigma_points must be in 1..=100000, got {points}"
                    )));
                }
                parse_normalization(job.normalization.as_deref())?;
            }
            RunDescriptor::OracleCompare(_) => {}
        }
        Ok(())
    }
}

/// Default number of points per axis for figure grids.
pub const FIGURE_POINTS: usize = 41;

/// Figure q-range with per-figure defaults.
pub fn figure_q_range(job: &FiguresJob) -> Result<(f64, f64)> {
    let defaults = match job.figure {
        2 => (0.2, 2.2),
        _ => (-2.0, 2.0),
    };
    Ok((job.q_min.unwrap_or(defaults.0), job.q_max.unwrap_or(defaults.1)))
}

/// Figure p-range (same default for both figures).
pub fn figure_p_range(job: &FiguresJob) -> (f64, f64) {
    (job.p_min.unwrap_or(-2.0), job.p_max.unwrap_or(2.0))
}

/// Route selector for the Green-function job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenRoute {
    Closed,
    Angular,
    Modes,
}

pub fn parse_green_route(route: Option<&str>) -> Result<GreenRoute> {
    match route.unwrap_or("closed") {
        "closed" => Ok(GreenRoute::Closed),
        "angular" => Ok(GreenRoute::Angular),
        "modes" => Ok(GreenRoute::Modes),
        other => Err(Error::Config(format!(
            "green: route must be closed, angular, or modes, got {other:?}"
        ))),
    }
}

pub fn parse_normalization(norm: Option<&str>) -> Result<Normalization> {
    match norm {
        None => Ok(Normalization::Standard),
        Some(s) => Normalization::parse(s),
    }
}

/// `"q,p"` with finite components.
pub fn parse_point(text: &str) -> Result<(f64, f64)> {
    let mut parts = text.split(',');
    let err = || Error::Config(format!("expected a point \"q,p\", got {text:?}"));
    let q: f64 = parts.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
    let p: f64 = parts.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
    if parts.next().is_some() || !q.is_finite() || !p.is_finite() {
        return Err(err());
    }
    Ok((q, p))
}

/// Named potentials plus comma-separated polynomial coefficients.
pub fn parse_potential(text: &str) -> Result<PotentialSpec> {
    use crate::phasepoly::rat;
    match text {
        "harmonic" => Ok(PotentialSpec::polynomial(vec![rat(0, 1), rat(0, 1), rat(1, 2)])),
        "quartic-well" => Ok(PotentialSpec::quartic_double_well()),
        "coulomb" => Ok(PotentialSpec::Coulomb { z: 1.0 }),
        other => {
            let mut coeffs = Vec::new();
            for piece in other.split(',') {
                let piece = piece.trim();
                let c = parse_rational(piece).ok_or_else(|| {
                    Error::Config(format!(
                        "unknown potential {text:?} (expected harmonic, quartic-well, coulomb, or rational coefficients c0,c1,...)"
                    ))
                })?;
                coeffs.push(c);
            }
            if coeffs.is_empty() {
                return Err(Error::Config("empty potential coefficient list".into()));
            }
            let spec = PotentialSpec::polynomial(coeffs);
            spec.validate()?;
            Ok(spec)
        }
    }
}

fn parse_rational(text: &str) -> Option<crate::phasepoly::Rat> {
    use num_bigint::BigInt;
    use std::str::FromStr;
    if let Some((num, den)) = text.split_once('/') {
        let n = BigInt::from_str(num.trim()).ok()?;
        let d = BigInt::from_str(den.trim()).ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        Some(crate::phasepoly::Rat::new(n, d))
    } else {
        let n = BigInt::from_str(text).ok()?;
        Some(crate::phasepoly::Rat::from_integer(n))
    }
}

fn check_range(name: &str, lo: f64, hi: f64) -> Result<()> {
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(Error::Config(format!("{name} range must be finite with min < max, got [{lo}, {hi}]")));
    }
    Ok(())
}

fn check_points(name: &str, points: usize) -> Result<()> {
    if points < 2 || points > 4096 {
        return Err(Error::Config(format!("{name} must be in 2..=4096, got {points}")));
    }
    Ok(())
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Config(format!("{name} must be positive and finite, got {value}")));
    }
    Ok(())
}
