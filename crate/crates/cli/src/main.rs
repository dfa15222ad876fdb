//! `fraczeta`: tube volumes, dimension estimates, zeta values, complex
//! dimensions, tube formulas and quasiperiodic constructions from the shell.
//!
//! Exit status is 0 on success, 1 when `verify` finds a failing criterion,
//! and 2 for anything the given configuration could not produce.

mod emit;
mod spec;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use fraczeta::dims::{box_dim_fit, content_envelope, geometric_grid, ContentEnvelope, DimFit};
use fraczeta::geometry::{SetDescriptor, Tube, TubeMode};
use fraczeta::quasi::{hyperfractal_truncation, two_qp_set};
use fraczeta::spectrum::{poles, spray_dims, Lattice, PoleDatum, Window};
use fraczeta::tubeformula::{tube_formula, DEFAULT_K};
use fraczeta::zeta::{
    closed_form, distance_zeta_closed, distance_zeta_mc, distance_zeta_via_tube, geometric_zeta_desc, tube_zeta_closed,
    ZetaEstimate,
};

#[derive(Parser)]
#[command(name = "fraczeta", version, about = "Fractal zeta functions, complex dimensions and fractal tube formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Cap on worker threads; all cores by default.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the artifact to this file instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,

    /// Also write (x, y) CSV for external plotting.
    #[arg(long, global = true, value_name = "PATH")]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tube volumes V(t) at the given radii.
    Tube(TubeArgs),
    /// Box-dimension fit and Minkowski content envelope on a geometric grid.
    Dims(DimsArgs),
    /// One value of a zeta function.
    Zeta(ZetaArgs),
    /// Complex dimensions in a window, from a closed form or a spray's ratios.
    Poles(PolesArgs),
    /// Truncated tube formula against the exact tube.
    Tubeformula(TubeFormulaArgs),
    /// Quasiperiodic unions and hyperfractal truncations.
    #[command(subcommand)]
    Quasi(QuasiCommand),
    /// Run acceptance criteria.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// The tube relative to the reference region.
    Inner,
    /// The full Euclidean tube.
    Full,
}

impl From<Mode> for TubeMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Inner => TubeMode::Inner,
            Mode::Full => TubeMode::Full,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SetArg {
    #[arg(long = "set", long_help = spec::SET_HELP)]
    spec: String,

    #[arg(long, value_enum, default_value = "inner")]
    mode: Mode,
}

impl SetArg {
    fn build(&self) -> Result<SetDescriptor, Failure> {
        spec::set(&self.spec).map_err(Failure::Config)
    }
}

#[derive(Args)]
struct TubeArgs {
    #[command(flatten)]
    set: SetArg,

    /// Radii, comma separated.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "grid")]
    t: Option<String>,

    /// Geometric grid t_min:t_max[:per_decade] instead of explicit radii.
    #[arg(long, conflicts_with = "t")]
    grid: Option<String>,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct DimsArgs {
    #[command(flatten)]
    set: SetArg,

    #[arg(long, default_value = "1e-6")]
    t_min: String,

    #[arg(long, default_value = "1e-2")]
    t_max: String,

    #[arg(long, default_value_t = fraczeta::dims::POINTS_PER_DECADE)]
    per_decade: usize,

    /// Trial dimension for the content envelope; the known dimension by default.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Closed form with analytic continuation.
    Closed,
    /// Tube quadrature through the functional equation.
    Quad,
    /// Seeded Monte Carlo over the tube.
    Mc,
    /// Geometric zeta function of a fractal string.
    Geometric,
    /// Tube zeta function from the closed form.
    Tube,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    set: SetArg,

    /// Point s as re or re,im.
    #[arg(long, allow_hyphen_values = true)]
    s: String,

    /// Tube radius δ; the saturation radius by default (twice it for full tubes).
    #[arg(long)]
    delta: Option<String>,

    #[arg(long, value_enum, default_value = "closed")]
    method: Method,

    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,

    /// Monte Carlo seed; required with --method mc.
    #[arg(long)]
    seed: Option<u64>,

    /// Relative quadrature tolerance.
    #[arg(long, default_value = "1e-10")]
    tol: String,
}

#[derive(Args)]
struct PolesArgs {
    /// Set whose closed form is searched.
    #[arg(long = "set", long_help = spec::SET_HELP, required_unless_present = "ratios")]
    spec: Option<String>,

    /// Spray scaling ratios, comma separated, instead of a set.
    #[arg(long, conflicts_with = "spec")]
    ratios: Option<String>,

    #[arg(long, value_enum, default_value = "inner")]
    mode: Mode,

    /// sigma_left:sigma_right:tau_max
    #[arg(long, allow_hyphen_values = true, default_value = "-1:3:20")]
    window: String,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct TubeFormulaArgs {
    #[command(flatten)]
    set: SetArg,

    #[arg(long)]
    t: String,

    /// Lattice truncation: poles with |k| <= K on each vertical line.
    #[arg(long, default_value_t = DEFAULT_K)]
    k: u32,
}

#[derive(Subcommand)]
enum QuasiCommand {
    /// Two Cantor sets of a common dimension with independent quasiperiods.
    Pair {
        #[arg(long)]
        m1: u64,
        #[arg(long)]
        m2: u64,
        #[arg(long)]
        d: String,
        /// Ordinate band |Im s| <= band for the principal dimensions.
        #[arg(long, default_value = "20")]
        band: String,
    },
    /// Union of K scaled Cantor strings of a common dimension.
    Hyper {
        #[arg(long)]
        d: String,
        #[arg(long)]
        k: usize,
        /// m_1,...,m_K
        #[arg(long)]
        m: String,
        /// Scale factors c_1,...,c_K.
        #[arg(long)]
        c: String,
        /// Ordinate band [0, band] for the gap search.
        #[arg(long, default_value = "20")]
        band: String,
        /// Gap levels kept in each component string.
        #[arg(long, default_value_t = 8)]
        levels: u32,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Criterion name, or all.
    #[arg(long, default_value = "all")]
    suite: String,

    /// Text lines, or a JSON report without timings.
    #[arg(long, value_enum, default_value = "text")]
    format: VerifyFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Text,
    Json,
}

enum Failure {
    Config(String),
    Acceptance(String),
}

impl From<fraczeta::Error> for Failure {
    fn from(e: fraczeta::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Acceptance(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    let out = cli.out.as_deref();
    let plot = cli.emit_plot_data.as_deref();
    let (body, points) = match cli.command {
        Command::Tube(a) => tube(a)?,
        Command::Dims(a) => dims(a)?,
        Command::Zeta(a) => (zeta(a)?, Vec::new()),
        Command::Poles(a) => pole_list(a)?,
        Command::Tubeformula(a) => formula(a)?,
        Command::Quasi(q) => quasi(q)?,
        Command::Verify(a) => return verify(a, out),
    };
    emit::write(out, &body).map_err(Failure::Config)?;
    emit::plot(plot, points).map_err(Failure::Config)
}

type Artifact = (String, Vec<(f64, f64)>);

fn num(s: &str) -> Result<f64, Failure> {
    spec::number(s).map_err(Failure::Config)
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    emit::json(value).map_err(Failure::Config)
}

#[derive(Serialize)]
struct TubeOut {
    set: String,
    mode: TubeMode,
    samples: Vec<TubePoint>,
}

#[derive(Serialize)]
struct TubePoint {
    t: f64,
    volume: f64,
}

fn tube(a: TubeArgs) -> Result<Artifact, Failure> {
    let set = a.set.build()?;
    let mode = TubeMode::from(a.set.mode);
    let ts = match (&a.t, &a.grid) {
        (Some(t), _) => spec::numbers(t).map_err(Failure::Config)?,
        (None, Some(g)) => {
            let (lo, hi, n) = spec::grid(g).map_err(Failure::Config)?;
            geometric_grid(lo, hi, n)?
        }
        (None, None) => unreachable!("clap requires --t or --grid"),
    };
    let samples = ts
        .iter()
        .map(|&t| Ok(TubePoint { t, volume: set.tube_volume(t, mode)? }))
        .collect::<Result<Vec<_>, fraczeta::Error>>()?;
    let points: Vec<(f64, f64)> = samples.iter().map(|p| (p.t, p.volume)).collect();
    let body = match a.format {
        Format::Csv => emit::csv(&["t", "volume"], samples.iter().map(|p| vec![p.t, p.volume])),
        Format::Json => json(&TubeOut {
            set: a.set.spec.clone(),
            mode,
            samples,
        })?,
    };
    Ok((body, points))
}

#[derive(Serialize)]
struct DimsOut {
    set: String,
    mode: TubeMode,
    t_min: f64,
    t_max: f64,
    points: usize,
    known_dimension: Option<f64>,
    fit: DimFit,
    envelope: Option<ContentEnvelope>,
}

fn dims(a: DimsArgs) -> Result<Artifact, Failure> {
    let set = a.set.build()?;
    let mode = TubeMode::from(a.set.mode);
    let tube = Tube::new(&set, mode)?;
    let (t_min, t_max) = (num(&a.t_min)?, num(&a.t_max)?);
    let grid = geometric_grid(t_min, t_max, a.per_decade)?;
    let fit = box_dim_fit(&tube, &grid)?;
    let known = set.known_dimension().filter(|d| d.is_finite());
    let trial = match &a.d {
        Some(d) => Some(num(d)?),
        None => known,
    };
    let envelope = trial.map(|d| content_envelope(&tube, d, &grid)).transpose()?;
    let points = fraczeta::dims::sample(&tube, &grid)?
        .into_iter()
        .map(|s| (s.log_t, s.log_v))
        .collect();
    let body = json(&DimsOut {
        set: a.set.spec.clone(),
        mode,
        t_min,
        t_max,
        points: grid.len(),
        known_dimension: known,
        fit,
        envelope,
    })?;
    Ok((body, points))
}

fn zeta(a: ZetaArgs) -> Result<String, Failure> {
    let set = a.set.build()?;
    let mode = TubeMode::from(a.set.mode);
    let s = spec::complex(&a.s).map_err(Failure::Config)?;
    let delta = match &a.delta {
        Some(d) => num(d)?,
        None if mode == TubeMode::Full => 2.0 * set.saturation(),
        None => set.saturation(),
    };
    let exact = |value: Complex64| ZetaEstimate {
        value,
        std_err: None,
        quad_err: None,
        samples: 0,
    };
    let est = match a.method {
        Method::Closed => exact(distance_zeta_closed(&set, s, delta, mode)?),
        Method::Tube => exact(tube_zeta_closed(&set, s, delta, mode)?),
        Method::Geometric => exact(geometric_zeta_desc(&set, s)?),
        Method::Quad => distance_zeta_via_tube(&Tube::new(&set, mode)?, s, delta, num(&a.tol)?)?,
        Method::Mc => {
            let seed = a
                .seed
                .ok_or_else(|| Failure::Config("--method mc needs --seed".into()))?;
            distance_zeta_mc(&set, mode, s, delta, a.n, seed)?
        }
    };
    json(&est)
}

#[derive(Serialize)]
struct PolesOut {
    source: String,
    window: Window,
    lattice: Option<Lattice>,
    poles: Vec<PoleDatum>,
}

fn pole_list(a: PolesArgs) -> Result<Artifact, Failure> {
    let w = spec::window(&a.window).map_err(Failure::Config)?;
    let out = match (&a.spec, &a.ratios) {
        (_, Some(r)) => {
            let ratios = spec::numbers(r).map_err(Failure::Config)?;
            let dims = spray_dims(&ratios, &w)?;
            PolesOut {
                source: format!("ratios:{r}"),
                window: w,
                lattice: dims.lattice,
                poles: dims.poles,
            }
        }
        (Some(name), None) => {
            let set = spec::set(name).map_err(Failure::Config)?;
            let mode = TubeMode::from(a.mode);
            let delta = if mode == TubeMode::Full { 2.0 * set.saturation() } else { set.saturation() };
            let form = closed_form(&set, mode, delta)?;
            PolesOut {
                source: name.clone(),
                window: w,
                lattice: None,
                poles: poles(&form, &w)?,
            }
        }
        (None, None) => unreachable!("clap requires --set or --ratios"),
    };
    let points = out.poles.iter().map(|p| (p.omega.re, p.omega.im)).collect();
    let body = match a.format {
        Format::Json => json(&out)?,
        Format::Csv => emit::csv(
            &["re", "im", "order", "res_re", "res_im"],
            out.poles
                .iter()
                .map(|p| vec![p.omega.re, p.omega.im, f64::from(p.order), p.residue.re, p.residue.im]),
        ),
    };
    Ok((body, points))
}

fn formula(a: TubeFormulaArgs) -> Result<Artifact, Failure> {
    let set = a.set.build()?;
    let report = tube_formula(&set, TubeMode::from(a.set.mode), num(&a.t)?, a.k)?;
    let points = report
        .term_magnitudes
        .iter()
        .enumerate()
        .map(|(i, &m)| (i as f64, m))
        .collect();
    Ok((json(&report)?, points))
}

fn quasi(q: QuasiCommand) -> Result<Artifact, Failure> {
    match q {
        QuasiCommand::Pair { m1, m2, d, band } => {
            let report = two_qp_set(m1, m2, num(&d)?, num(&band)?)?;
            let points = report.principal_dims.iter().map(|z| (z.re, z.im)).collect();
            Ok((json(&report)?, points))
        }
        QuasiCommand::Hyper {
            d,
            k,
            m,
            c,
            band,
            levels,
        } => {
            let ms = spec::integers(&m).map_err(Failure::Config)?;
            let cs = spec::numbers(&c).map_err(Failure::Config)?;
            let h = hyperfractal_truncation(num(&d)?, k, &ms, &cs, num(&band)?, levels)?;
            let points = h.periods.iter().enumerate().map(|(i, &p)| ((i + 1) as f64, p)).collect();
            Ok((json(&h)?, points))
        }
    }
}

#[derive(Serialize)]
struct VerifyOut {
    suite: String,
    passed: usize,
    total: usize,
    outcomes: Vec<OutcomeOut>,
}

#[derive(Serialize)]
struct OutcomeOut {
    id: u32,
    suite: &'static str,
    passed: bool,
    detail: String,
}

fn verify(a: VerifyArgs, out: Option<&std::path::Path>) -> Result<(), Failure> {
    let outcomes = fraczeta::acceptance::run(&a.suite)?;
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let total = outcomes.len();
    let body = match a.format {
        VerifyFormat::Text => {
            let mut lines: Vec<String> = outcomes.iter().map(|o| o.to_string()).collect();
            lines.push(format!("{passed} of {total} criteria passed\n"));
            lines.join("\n")
        }
        VerifyFormat::Json => json(&VerifyOut {
            suite: a.suite.clone(),
            passed,
            total,
            outcomes: outcomes
                .into_iter()
                .map(|o| OutcomeOut {
                    id: o.id,
                    suite: o.suite,
                    passed: o.passed,
                    detail: o.detail,
                })
                .collect(),
        })?,
    };
    emit::write(out, &body).map_err(Failure::Config)?;
    if passed == total {
        Ok(())
    } else {
        Err(Failure::Acceptance(format!("{} of {total} criteria failed", total - passed)))
    }
}
