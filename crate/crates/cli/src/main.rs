//! Command-line front end: star products, figure data, Wigner tables, the
//! oscillator Green function, zeta values, short-time densities, and the
//! oracle cross-check suite.
//!
//! Every invocation is normalized into a [`RunDescriptor`] first, whether it
//! came from subcommand flags or from `--config file.json`, so both entry
//! points run identical code and produce byte-identical output. Exit codes:
//! 0 success, 2 parse/configuration error, 3 degree cap, 4 numeric or oracle
//! failure.

use clap::{Args, Parser, Subcommand};
use moyal::config::{
    figure_p_range, figure_q_range, parse_green_route, parse_normalization, parse_point,
    parse_potential, FiguresJob, GreenJob, GreenRoute, OracleJob, OutputFormat, RunDescriptor,
    SdwJob, StarJob, WignerJob, ZetaJob, FIGURE_POINTS,
};
use moyal::error::{Error, Result};
use moyal::figures;
use moyal::ledger::run_oracle_suite;
use moyal::oscillator::Oscillator;
use moyal::phasepoly::{moyal_bracket, star, PhasePoly, StarContext};
use moyal::potential::PotentialSpec;
use moyal::sdw::SdwExpansion;
use moyal::weyl::{Convention, WignerTable};
use moyal::zeta::{harmonic_trace, mellin_zeta, zeta_half_integers, HARMONIC_TRACE_ASYM};
use std::fmt::Write as _;
use std::fs;

#[derive(Parser)]
#[command(
    name = "moyal",
    version,
    about = "Star products, Wigner functions, and heat-kernel expansions on the phase plane"
)]
struct Cli {
    /// JSON run descriptor; replaces the subcommand form.
    #[arg(long, value_name = "FILE")]
    config: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Print f*g, g*f, and the Moyal bracket of two polynomial expressions.
    Star(StarArgs),
    /// Emit long-format CSV data for reference figure 1 or 2.
    Figures(FiguresArgs),
    /// Oscillator Wigner function at a point or on a grid.
    Wigner(WignerArgs),
    /// Oscillator Green-function symbol at a phase-space point.
    Green(GreenArgs),
    /// Zeta values from the Mellin transform of the harmonic heat trace.
    Zeta(ZetaArgs),
    /// Short-time heat-kernel density and its coefficient table.
    Sdw(SdwArgs),
    /// Run the cross-check suite and write the discrepancy ledger.
    OracleCompare(OracleArgs),
}

#[derive(Args)]
struct StarArgs {
    /// Polynomial in q, p with rational coefficients, e.g. "q^2 + 1/2 p".
    f: String,
    /// Second factor, same syntax.
    g: String,
    /// Drop terms above this power of hbar.
    #[arg(long)]
    hbar_order: Option<u32>,
}

#[derive(Args)]
struct FiguresArgs {
    /// 1 for f = p^2 + q^2, 2 for f = p^2 + 1/q.
    figure: u32,
    #[arg(long, allow_negative_numbers = true)]
    q_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    q_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p_max: Option<f64>,
    #[arg(long)]
    q_points: Option<usize>,
    #[arg(long)]
    p_points: Option<usize>,
    #[arg(long)]
    hbar: Option<f64>,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct WignerArgs {
    /// Mode index.
    #[arg(long)]
    n: usize,
    /// Evaluate at a single "q,p" point instead of emitting a table.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    q_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    q_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p_max: Option<f64>,
    #[arg(long)]
    q_points: Option<usize>,
    #[arg(long)]
    p_points: Option<usize>,
    #[arg(long)]
    hbar: Option<f64>,
    /// "standard" (density) or "paper" (bare Weyl symbol).
    #[arg(long)]
    normalization: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct GreenArgs {
    /// Phase-space point "q,p"; defaults to the origin.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    #[arg(long)]
    hbar: Option<f64>,
    /// closed, angular, or modes.
    #[arg(long)]
    route: Option<String>,
    /// Mode count for the modes route.
    #[arg(long)]
    terms: Option<usize>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct ZetaArgs {
    /// Trace to transform; only "harmonic" is available.
    #[arg(long)]
    potential: Option<String>,
    /// One or more exponents, each greater than 1.
    #[arg(long, required = true, num_args = 1..)]
    s: Vec<f64>,
    /// Boundary between the subtracted small-sigma integral and the plain one.
    #[arg(long)]
    split: Option<f64>,
    /// Upper integration cutoff.
    #[arg(long)]
    cut: Option<f64>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct SdwArgs {
    /// "harmonic", "quartic-well", "coulomb", or coefficients "c0,c1,...".
    #[arg(long)]
    potential: String,
    /// Kinetic coefficient in alpha p^2.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    /// Evaluation point q0.
    #[arg(long, allow_negative_numbers = true)]
    q: f64,
    #[arg(long)]
    sigma_min: f64,
    #[arg(long)]
    sigma_max: f64,
    /// Log-spaced sigma samples between sigma_min and sigma_max.
    #[arg(long)]
    sigma_points: Option<usize>,
    /// Highest sigma power in the bracket, at most 4.
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    normalization: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct OracleArgs {
    /// Skip the large eigenproblem checks.
    #[arg(long)]
    quick: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

fn parse_format(text: Option<&str>) -> Result<Option<OutputFormat>> {
    match text {
        None => Ok(None),
        Some("csv") => Ok(Some(OutputFormat::Csv)),
        Some("json") => Ok(Some(OutputFormat::Json)),
        Some(other) => Err(Error::Config(format!(
            "format must be csv or json, got {other:?}"
        ))),
    }
}

impl Command {
    fn into_descriptor(self) -> Result<RunDescriptor> {
        Ok(match self {
            Command::Star(a) => RunDescriptor::Star(StarJob {
                f: a.f,
                g: a.g,
                hbar_order: a.hbar_order,
            }),
            Command::Figures(a) => RunDescriptor::Figures(FiguresJob {
                figure: a.figure,
                q_min: a.q_min,
                q_max: a.q_max,
                p_min: a.p_min,
                p_max: a.p_max,
                q_points: a.q_points,
                p_points: a.p_points,
                hbar: a.hbar,
                output: a.output,
            }),
            Command::Wigner(a) => RunDescriptor::Wigner(WignerJob {
                n: a.n,
                at: a.at,
                q_min: a.q_min,
                q_max: a.q_max,
                p_min: a.p_min,
                p_max: a.p_max,
                q_points: a.q_points,
                p_points: a.p_points,
                hbar: a.hbar,
                normalization: a.normalization,
                format: parse_format(a.format.as_deref())?,
                output: a.output,
            }),
            Command::Green(a) => RunDescriptor::Green(GreenJob {
                at: a.at,
                hbar: a.hbar,
                route: a.route,
                terms: a.terms,
                output: a.output,
            }),
            Command::Zeta(a) => RunDescriptor::Zeta(ZetaJob {
                potential: a.potential,
                s: a.s,
                split: a.split,
                cut: a.cut,
                format: parse_format(a.format.as_deref())?,
                output: a.output,
            }),
            Command::Sdw(a) => RunDescriptor::Sdw(SdwJob {
                potential: a.potential,
                alpha: a.alpha,
                hbar: a.hbar,
                q: a.q,
                sigma_min: a.sigma_min,
                sigma_max: a.sigma_max,
                sigma_points: a.sigma_points,
                order: a.order,
                normalization: a.normalization,
                format: parse_format(a.format.as_deref())?,
                output: a.output,
            }),
            Command::OracleCompare(a) => RunDescriptor::OracleCompare(OracleJob {
                quick: a.quick,
                output: a.output,
            }),
        })
    }
}

/// Send finished text to the requested file, or stdout when none was given.
fn deliver(output: &Option<String>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn run_star(job: &StarJob) -> Result<()> {
    let ctx = match job.hbar_order {
        Some(order) => StarContext::truncated(order),
        None => StarContext::exact(),
    };
    let f = PhasePoly::parse(&job.f)?;
    let g = PhasePoly::parse(&job.g)?;
    let fg = star(&f, &g, &ctx)?;
    let gf = star(&g, &f, &ctx)?;
    let bracket = moyal_bracket(&f, &g, &ctx)?;
    println!("{}*{} = {}", job.f, job.g, fg.render());
    println!("{}*{} = {}", job.g, job.f, gf.render());
    println!("[{},{}]_M = {}", job.f, job.g, bracket.render());
    Ok(())
}

fn run_figures(job: &FiguresJob) -> Result<()> {
    let (q_lo, q_hi) = figure_q_range(job)?;
    let (p_lo, p_hi) = figure_p_range(job);
    let qs = linspace(q_lo, q_hi, job.q_points.unwrap_or(FIGURE_POINTS));
    let ps = linspace(p_lo, p_hi, job.p_points.unwrap_or(FIGURE_POINTS));
    let hbar = job.hbar.unwrap_or(1.0);
    let mut meta = vec![
        ("figure", job.figure.to_string()),
        ("hbar", format!("{hbar:.16e}")),
        ("q_range", format!("[{q_lo:.16e}, {q_hi:.16e}]")),
        ("p_range", format!("[{p_lo:.16e}, {p_hi:.16e}]")),
    ];
    let rows = match job.figure {
        1 => {
            meta.push(("generator", "p^2 + q^2, sigma = -1".to_string()));
            figures::figure1(&qs, &ps, hbar)?
        }
        _ => {
            meta.push(("generator", "p^2 + 1/q, sigma = -1".to_string()));
            figures::figure2(&qs, &ps, 1.0, &PotentialSpec::Coulomb { z: 1.0 }, -1.0, hbar)?
        }
    };
    let mut buf = Vec::new();
    figures::write_figure_csv(&rows, &meta, &mut buf)?;
    deliver(&job.output, &String::from_utf8(buf).expect("csv is utf-8"))
}

fn run_wigner(job: &WignerJob) -> Result<()> {
    let hbar = job.hbar.unwrap_or(1.0);
    let osc = Oscillator::new(1.0, 1.0, hbar)?;
    let norm = parse_normalization(job.normalization.as_deref())?;
    let density = norm == moyal::sdw::Normalization::Standard;
    let eval = |q: f64, p: f64| {
        if density {
            osc.wigner(job.n, q, p)
        } else {
            osc.wigner_symbol(job.n, q, p)
        }
    };
    if let Some(at) = &job.at {
        let (q, p) = parse_point(at)?;
        return deliver(&job.output, &format!("{:.16e}\n", eval(q, p)));
    }
    let qs = linspace(job.q_min.unwrap_or(-3.0), job.q_max.unwrap_or(3.0), job.q_points.unwrap_or(61));
    let ps = linspace(job.p_min.unwrap_or(-3.0), job.p_max.unwrap_or(3.0), job.p_points.unwrap_or(61));
    let mut values = Vec::with_capacity(qs.len() * ps.len());
    for &q in &qs {
        for &p in &ps {
            values.push(eval(q, p));
        }
    }
    let convention = if density { Convention::WignerDensity } else { Convention::WeylSymbol };
    let table = WignerTable { qs, ps, values, convention, hbar };
    match job.format.unwrap_or_default() {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            deliver(&job.output, &String::from_utf8(buf).expect("csv is utf-8"))
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = table
                .qs
                .iter()
                .enumerate()
                .flat_map(|(iq, &q)| {
                    let table = &table;
                    table.ps.iter().enumerate().map(move |(ip, &p)| {
                        serde_json::json!({"q": q, "p": p, "value": table.value(iq, ip)})
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "n": job.n,
                "hbar": hbar,
                "convention": convention.label(),
                "values": rows,
            });
            deliver(&job.output, &format!("{}\n", serde_json::to_string_pretty(&doc)?))
        }
    }
}

fn run_green(job: &GreenJob) -> Result<()> {
    let (q, p) = match &job.at {
        Some(at) => parse_point(at)?,
        None => (0.0, 0.0),
    };
    let osc = Oscillator::new(1.0, 1.0, job.hbar.unwrap_or(1.0))?;
    let value = match parse_green_route(job.route.as_deref())? {
        GreenRoute::Closed => osc.green_closed(q, p)?,
        GreenRoute::Angular => osc.green_phi(q, p)?,
        GreenRoute::Modes => osc.green_mode_sum(q, p, job.terms.unwrap_or(400)),
    };
    deliver(&job.output, &format!("{value:.16e}\n"))
}

fn run_zeta(job: &ZetaJob) -> Result<()> {
    let split = job.split.unwrap_or(1.0);
    let cut = job.cut.unwrap_or(100.0);
    let mut rows = Vec::with_capacity(job.s.len());
    for &s in &job.s {
        let value = mellin_zeta(harmonic_trace, &HARMONIC_TRACE_ASYM, s, split, cut)?;
        // Cross-route error estimate against the direct eigenvalue sum.
        let direct = zeta_half_integers(s, 200_000)?;
        rows.push((s, value, (value - direct).abs()));
    }
    match job.format.unwrap_or_default() {
        OutputFormat::Csv => {
            let mut out = String::from("s,zeta,error\n");
            for (s, value, err) in &rows {
                writeln!(out, "{s:.16e},{value:.16e},{err:.16e}").expect("string write");
            }
            deliver(&job.output, &out)
        }
        OutputFormat::Json => {
            let doc: Vec<serde_json::Value> = rows
                .iter()
                .map(|(s, value, err)| serde_json::json!({"s": s, "zeta": value, "error": err}))
                .collect();
            deliver(&job.output, &format!("{}\n", serde_json::to_string_pretty(&doc)?))
        }
    }
}

fn run_sdw(job: &SdwJob) -> Result<()> {
    let pot = parse_potential(&job.potential)?;
    let norm = parse_normalization(job.normalization.as_deref())?;
    let order = job.order.unwrap_or(4);
    let expansion = SdwExpansion::new(job.alpha.unwrap_or(0.5), pot.clone(), job.hbar.unwrap_or(1.0))?;
    let q0 = job.q;
    let coeffs: Vec<(u32, f64, f64)> = (0..=order)
        .map(|n| Ok((n, expansion.a(n, q0)?, expansion.delta2(n, q0)?)))
        .collect::<Result<_>>()?;
    let points = job.sigma_points.unwrap_or(1);
    let sigmas: Vec<f64> = if points == 1 {
        vec![job.sigma_min]
    } else {
        (0..points)
            .map(|i| {
                job.sigma_min
                    * (job.sigma_max / job.sigma_min).powf(i as f64 / (points - 1) as f64)
            })
            .collect()
    };
    let densities: Vec<(f64, f64)> = sigmas
        .iter()
        .map(|&s| Ok((s, expansion.density_series(q0, s, order, norm)?)))
        .collect::<Result<_>>()?;
    match job.format.unwrap_or_default() {
        OutputFormat::Csv => {
            let mut out = String::new();
            writeln!(out, "# potential: {pot}").expect("string write");
            writeln!(out, "# q0: {q0:.16e}").expect("string write");
            writeln!(out, "# order: {order}").expect("string write");
            writeln!(out, "# normalization: {}", norm.label()).expect("string write");
            out.push_str("n,a_n,delta2_a_n\n");
            for (n, a, d2) in &coeffs {
                writeln!(out, "{n},{a:.16e},{d2:.16e}").expect("string write");
            }
            out.push('\n');
            out.push_str("sigma,density\n");
            for (s, rho) in &densities {
                writeln!(out, "{s:.16e},{rho:.16e}").expect("string write");
            }
            deliver(&job.output, &out)
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "potential": pot.to_string(),
                "q0": q0,
                "order": order,
                "normalization": norm.label(),
                "coefficients": coeffs
                    .iter()
                    .map(|(n, a, d2)| serde_json::json!({"n": n, "a": a, "delta2": d2}))
                    .collect::<Vec<_>>(),
                "curve": densities
                    .iter()
                    .map(|(s, rho)| serde_json::json!({"sigma": s, "density": rho}))
                    .collect::<Vec<_>>(),
            });
            deliver(&job.output, &format!("{}\n", serde_json::to_string_pretty(&doc)?))
        }
    }
}

fn run_oracle(job: &OracleJob) -> Result<()> {
    let report = run_oracle_suite(job.quick)?;
    deliver(&job.output, &format!("{}\n", report.to_json()?))?;
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        Err(Error::Numeric(format!("oracle checks failed: {}", names.join(", "))))
    }
}

fn run(descriptor: &RunDescriptor) -> Result<()> {
    match descriptor {
        RunDescriptor::Star(job) => run_star(job),
        RunDescriptor::Figures(job) => run_figures(job),
        RunDescriptor::Wigner(job) => run_wigner(job),
        RunDescriptor::Green(job) => run_green(job),
        RunDescriptor::Zeta(job) => run_zeta(job),
        RunDescriptor::Sdw(job) => run_sdw(job),
        RunDescriptor::OracleCompare(job) => run_oracle(job),
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(text) = std::env::var("MOYAL_THREADS") {
        let count: usize = text
            .parse()
            .map_err(|_| Error::Config(format!("MOYAL_THREADS must be a positive integer, got {text:?}")))?;
        if count == 0 {
            return Err(Error::Config("MOYAL_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn real_main(cli: Cli) -> Result<()> {
    configure_threads()?;
    let descriptor = match (cli.config, cli.command) {
        (Some(_), Some(_)) => {
            return Err(Error::Config("--config and a subcommand are mutually exclusive".into()))
        }
        (Some(path), None) => RunDescriptor::from_json(&fs::read_to_string(path)?)?,
        (None, Some(command)) => {
            let descriptor = command.into_descriptor()?;
            descriptor.validate()?;
            descriptor
        }
        (None, None) => {
            return Err(Error::Config("nothing to do: pass a subcommand or --config".into()))
        }
    };
    run(&descriptor)
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = real_main(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
