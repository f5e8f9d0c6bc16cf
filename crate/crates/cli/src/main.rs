//! `legendrian-lab`: verification suites, front plots, zig-zag
//! approximations, contact flows and construction reports.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use legendrian_core::contact::{legendrian_defect, FnMap, GridSpec};
use legendrian_core::flow::{
    builtin, contact_field_from_hamiltonian, integrate_flow, BUILTIN_NAMES,
};
use legendrian_core::report::{
    build_construction_report, plot_fronts, run_suite, FrontSource, Suite, SuiteConfig,
    VerificationReport,
};
use legendrian_core::zigzag::approximate_curve;
use legendrian_core::zoo::{CurveExport, Gamma, GammaInf};
use legendrian_core::{Domain, ParamMap, Point3, Point5};

#[derive(Parser)]
#[command(
    name = "legendrian-lab",
    version,
    about = "Legendrian curve and contact flow laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GridArgs {
    /// Quarter every grid.
    #[arg(long)]
    quick: bool,
    /// Largest frequency in the curve sweeps.
    #[arg(long, default_value_t = 30)]
    m_max: u32,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

impl GridArgs {
    fn config(&self) -> Result<SuiteConfig> {
        let mut c = if self.quick {
            SuiteConfig::quick()
        } else {
            SuiteConfig::default()
        };
        c.m_max = self.m_max;
        if let Some(s) = self.seed {
            c.seed = s;
        }
        c.apply_env()?;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        /// curves, flows, zigzag, schedules, charts or all.
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Draw front projections as SVG.
    Plot {
        /// gamma:M, sigma:M:W, psi:DELTA, birth:TAU or file:PATH; repeat for
        /// side-by-side panels.
        #[arg(long = "source", required = true)]
        sources: Vec<String>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Zig-zag approximation of a curve.
    Approximate {
        #[arg(long, value_enum, default_value_t = Target::Axis)]
        target: Target,
        /// Frequency when the target is gamma.
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Curve file when the target is file.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of base points.
        #[arg(long = "points", default_value_t = 50)]
        points: usize,
        #[arg(long, short = 'd', default_value_t = 0.01)]
        offset: f64,
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Integrate the contact vector field of a named Hamiltonian.
    Flow {
        /// One of zero, reeb, y, p, yp, ball, box.
        #[arg(long)]
        hamiltonian: String,
        /// x,y,z,q,p
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tau0: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        tau1: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Construction report for the first N steps.
    Report {
        #[arg(long, short = 'n', default_value_t = 3)]
        steps: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// The transverse axis t -> (0, 0, t).
    Axis,
    Gamma,
    File,
}

enum Outcome {
    Pass,
    Fail,
}

/// Usage errors exit with 2, everything else with 1.
enum CliError {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Runtime(e.into())
    }
}

fn usage(e: impl Into<anyhow::Error>) -> CliError {
    CliError::Usage(e.into())
}

fn parse_source(s: &str) -> Result<FrontSource> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let nums = |n: usize| -> Result<Vec<f64>> {
        let v: Vec<f64> = rest
            .split(':')
            .filter(|x| !x.is_empty())
            .map(|x| {
                x.parse::<f64>()
                    .with_context(|| format!("bad number {x:?} in {s:?}"))
            })
            .collect::<Result<_>>()?;
        if v.len() != n {
            bail!("{kind} takes {n} parameter(s), got {:?}", rest);
        }
        Ok(v)
    };
    let freq = |x: f64| -> Result<u32> {
        if x.fract() != 0.0 || x < 1.0 {
            bail!("frequency {x} must be a positive integer");
        }
        Ok(x as u32)
    };
    Ok(match kind {
        "gamma" => FrontSource::Gamma(freq(nums(1)?[0])?),
        "sigma" => {
            let v = nums(2)?;
            FrontSource::Sigma {
                m: freq(v[0])?,
                w: v[1],
            }
        }
        "psi" => FrontSource::Psi(nums(1)?[0]),
        "birth" => FrontSource::Birth(nums(1)?[0]),
        "file" => {
            let text = fs::read_to_string(rest).with_context(|| format!("reading {rest}"))?;
            FrontSource::File(CurveExport::from_json(&text)?)
        }
        other => bail!("unknown source kind {other:?}"),
    })
}

fn parse_point(s: &str) -> Result<Point5> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .with_context(|| format!("bad coordinate {x:?}"))
        })
        .collect::<Result<_>>()?;
    let a: [f64; 5] = v
        .try_into()
        .map_err(|v: Vec<f64>| anyhow::anyhow!("start needs 5 coordinates, got {}", v.len()))?;
    Ok(Point5::from_array(a))
}

fn emit(report: &VerificationReport, out: &Option<PathBuf>, started: Instant) -> Result<Outcome> {
    let json = report.to_json()?;
    match out {
        Some(p) => fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{json}"),
    }
    eprint!("{}", report.summary_table());
    eprintln!("elapsed {:.2} s", started.elapsed().as_secs_f64());
    Ok(if report.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

/// Piecewise-linear curve through the `[t, x, y, z]` rows of an export.
fn sampled_curve(curve: &CurveExport) -> Result<impl ParamMap<1, Point = Point3> + '_> {
    let rows = &curve.samples;
    if rows.len() < 2 || rows.windows(2).any(|w| !(w[1][0] > w[0][0])) {
        bail!("curve samples must have at least two rows with increasing t");
    }
    let dom = Domain::new([rows[0][0]], [rows[rows.len() - 1][0]]);
    Ok(FnMap::new(dom, move |u: [f64; 1]| {
        let t = u[0];
        let j = rows.partition_point(|r| r[0] <= t).clamp(1, rows.len() - 1);
        let (a, b) = (rows[j - 1], rows[j]);
        let f = (t - a[0]) / (b[0] - a[0]);
        Point3::new(
            a[1] + f * (b[1] - a[1]),
            a[2] + f * (b[2] - a[2]),
            a[3] + f * (b[3] - a[3]),
        )
    }))
}

fn approximate<M: ParamMap<1, Point = Point3>>(
    target: &M,
    points: usize,
    d: f64,
    samples: usize,
    params: serde_json::Value,
) -> Result<CurveExport> {
    let a = approximate_curve(target, points, d)?;
    let grid = GridSpec::uniform(samples.max(2));
    let e = a.error_to(target, &grid)?;
    let defect = legendrian_defect(&a.lift, &grid)?;
    eprintln!(
        "cusps {}  defect {:.3e}  c0 {:.6e}  front c0 {:.6e}  slope c0 {:.6e}",
        a.cusp_count(),
        defect,
        e.c0,
        e.front_c0,
        e.slope_c0
    );
    Ok(CurveExport::sample("zigzag", params, &a.lift, samples))
}

fn run(cli: Cli) -> std::result::Result<Outcome, CliError> {
    let started = Instant::now();
    match cli.command {
        Command::Verify { suite, grid } => {
            let suite: Suite = suite.parse().map_err(usage)?;
            let config = grid.config().map_err(usage)?;
            let report = run_suite(suite, &config)?;
            Ok(emit(&report, &grid.out, started)?)
        }
        Command::Report { steps, grid } => {
            if steps == 0 {
                return Err(usage(anyhow::anyhow!("--steps must be at least 1")));
            }
            let config = grid.config().map_err(usage)?;
            let report = build_construction_report(steps, &config)?;
            Ok(emit(&report, &grid.out, started)?)
        }
        Command::Plot { sources, out } => {
            let parsed = sources
                .iter()
                .map(|s| parse_source(s))
                .collect::<Result<Vec<_>>>()
                .map_err(usage)?;
            let fig = plot_fronts(&parsed).map_err(usage)?;
            fig.write(&out)?;
            eprintln!(
                "{}: {} panel(s), {} cusp marker(s), {} crossing marker(s)",
                out.display(),
                fig.panels,
                fig.cusp_markers,
                fig.crossing_markers
            );
            Ok(Outcome::Pass)
        }
        Command::Approximate {
            target,
            m,
            input,
            points,
            offset,
            samples,
            out,
        } => {
            if !(offset > 0.0) || points < 2 {
                return Err(usage(anyhow::anyhow!(
                    "need --points >= 2 and a positive offset"
                )));
            }
            let export = match target {
                Target::Axis => approximate(
                    &GammaInf,
                    points,
                    offset,
                    samples,
                    serde_json::json!({ "target": "axis", "points": points, "d": offset }),
                )?,
                Target::Gamma => {
                    if m == 0 {
                        return Err(usage(anyhow::anyhow!("--m must be positive")));
                    }
                    approximate(
                        &Gamma::new(m),
                        points,
                        offset,
                        samples,
                        serde_json::json!({ "target": "gamma_m", "m": m, "points": points, "d": offset }),
                    )?
                }
                Target::File => {
                    let path = input.ok_or_else(|| {
                        usage(anyhow::anyhow!("--input is required for file targets"))
                    })?;
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let curve = CurveExport::from_json(&text)?;
                    let target = sampled_curve(&curve).map_err(usage)?;
                    approximate(
                        &target,
                        points,
                        offset,
                        samples,
                        serde_json::json!({ "target": curve.kind, "points": points, "d": offset }),
                    )?
                }
            };
            let json = export.to_json()?;
            match out {
                Some(p) => fs::write(&p, json + "\n")
                    .with_context(|| format!("writing {}", p.display()))?,
                None => println!("{json}"),
            }
            Ok(Outcome::Pass)
        }
        Command::Flow {
            hamiltonian,
            start,
            tau0,
            tau1,
            step,
        } => {
            let h = builtin(&hamiltonian).ok_or_else(|| {
                usage(anyhow::anyhow!(
                    "unknown Hamiltonian {hamiltonian:?}; expected one of {}",
                    BUILTIN_NAMES.join(", ")
                ))
            })?;
            let p = parse_point(&start).map_err(usage)?;
            if !(step > 0.0) {
                return Err(usage(anyhow::anyhow!("--step must be positive")));
            }
            let field = contact_field_from_hamiltonian(h);
            let tr = integrate_flow(&field, p, (tau0, tau1), step, None)?;
            let mut lock = std::io::stdout().lock();
            lock.write_all(tr.to_json_lines().as_bytes())?;
            Ok(Outcome::Pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
