use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dlf_cli::csvio::{self, SweepData};
use dlf_cli::figures::{butterfly_sweep, fractal_sweep, BetaGrid};
use dlf_cli::schedule::ScheduleSource;
use dlf_cli::verify::{self, Scope};
use dlf_cli::{configure_threads, svg};
use dlf_core::oracle::{cluster, DEFAULT_CLUSTER_GAP};
use dlf_core::{assemble_schedule, build_level_graph, eigensolve, level_spectrum, BoundaryMode};

/// Spectra of magnetic operators on diamond lattice fractal graphs.
#[derive(Parser)]
#[command(name = "dspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Level-m Dirichlet spectrum as `eigenvalue,multiplicity,birth_level`.
    Spectrum(SpectrumArgs),
    /// Level-m spectra over a sweep of the field strength.
    Butterfly(ButterflyArgs),
    /// Renormalized eigenvalues 4^M z over a sweep of the field strength.
    Fractal(FractalArgs),
    /// Run invariant suites; exits nonzero if any check fails.
    Verify(VerifyArgs),
    /// Plot a butterfly or fractal CSV as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FieldArgs {
    /// Uniform field beta_m = beta * r^m.
    #[arg(long, num_args = 2, value_names = ["BETA", "R"], allow_negative_numbers = true)]
    uniform: Option<Vec<f64>>,
    /// Schedule file: `a0 <real>` then `beta <n> <real>` lines.
    #[arg(long, value_name = "FILE")]
    schedule: Option<PathBuf>,
}

impl FieldArgs {
    fn source(&self) -> ScheduleSource {
        match (&self.uniform, &self.schedule) {
            (Some(u), _) => ScheduleSource::Uniform {
                beta: u[0],
                ratio: u[1],
            },
            (None, Some(p)) => ScheduleSource::File(p.clone()),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Decimate,
    Oracle,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_name = "M")]
    level: usize,
    #[arg(long, value_enum, default_value = "decimate")]
    engine: Engine,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Ratio r in beta_m = beta * r^m.
    #[arg(long, default_value_t = 0.24)]
    ratio: f64,
    /// Inclusive beta grid.
    #[arg(long, num_args = 3, value_names = ["MIN", "MAX", "STEPS"], allow_negative_numbers = true)]
    beta_range: Option<Vec<String>>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl SweepArgs {
    fn grid(&self) -> Result<BetaGrid, String> {
        let Some(v) = &self.beta_range else {
            return Ok(BetaGrid::default());
        };
        let real = |s: &str| s.parse::<f64>().map_err(|_| format!("invalid beta bound {s:?}"));
        Ok(BetaGrid {
            min: real(&v[0])?,
            max: real(&v[1])?,
            steps: v[2]
                .parse()
                .map_err(|_| format!("invalid step count {:?}", v[2]))?,
        })
    }
}

#[derive(Args)]
struct ButterflyArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, default_value_t = 5)]
    level: usize,
}

#[derive(Args)]
struct FractalArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    #[arg(long, default_value_t = 11)]
    depth: usize,
    /// Number of eigenvalues per sweep point.
    #[arg(long, default_value_t = 32)]
    count: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// all, schur, oracle, gauge, degrees or multiplicity.
    #[arg(long, default_value = "all")]
    scope: Scope,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Style {
    Butterfly,
    Fractal,
}

#[derive(Args)]
struct RenderArgs {
    /// Sweep CSV written by `butterfly` or `fractal`.
    input: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    /// Expected schema; inferred from the header when omitted.
    #[arg(long, value_enum)]
    style: Option<Style>,
}

type Failure = Box<dyn std::error::Error>;

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn warn_all<'a>(warnings: impl IntoIterator<Item = &'a String>) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    let sched = args.field.source().load(args.level)?;
    let mut out = sink(args.out.as_deref())?;
    match args.engine {
        Engine::Decimate => {
            let table = level_spectrum(&sched, args.level)?;
            warn_all(table.warnings());
            csvio::write_table(&table, &mut out)?;
        }
        Engine::Oracle => {
            let op = assemble_schedule(&build_level_graph(args.level), &sched, BoundaryMode::Dirichlet)?;
            let eig = eigensolve(&op)?;
            csvio::write_clusters(&cluster(&eig.eigenvalues, DEFAULT_CLUSTER_GAP), &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn write_svg(path: &Path, csv: &[u8]) -> Result<(), Failure> {
    let data = csvio::read_sweep(csv)?;
    std::fs::write(path, svg::render(&data))?;
    Ok(())
}

fn butterfly(args: &ButterflyArgs) -> Result<(), Failure> {
    let columns = butterfly_sweep(&args.sweep.grid()?, args.sweep.ratio, args.level)?;
    warn_all(columns.iter().flat_map(|c| c.table.warnings()));
    let mut buf = Vec::new();
    csvio::write_butterfly(&columns, args.sweep.ratio, args.level, &mut buf)?;
    emit(&args.sweep, &buf)
}

fn fractal(args: &FractalArgs) -> Result<(), Failure> {
    let columns = fractal_sweep(&args.sweep.grid()?, args.sweep.ratio, args.depth, args.count)?;
    warn_all(columns.iter().flat_map(|c| &c.spectrum.warnings));
    let mut buf = Vec::new();
    csvio::write_fractal(&columns, args.sweep.ratio, args.depth, &mut buf)?;
    emit(&args.sweep, &buf)
}

fn emit(sweep: &SweepArgs, csv: &[u8]) -> Result<(), Failure> {
    let mut out = sink(sweep.out.as_deref())?;
    out.write_all(csv)?;
    out.flush()?;
    if let Some(path) = &sweep.svg {
        write_svg(path, csv)?;
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<bool, Failure> {
    let reports = verify::run(args.scope)?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
    }
    let passed = reports.iter().all(|r| r.passed());
    text.push_str(if passed { "verify: pass\n" } else { "verify: FAIL\n" });
    print!("{text}");
    if let Some(p) = &args.report {
        std::fs::write(p, &text)?;
    }
    Ok(passed)
}

fn render(args: &RenderArgs) -> Result<(), Failure> {
    let data = csvio::read_sweep(File::open(&args.input)?)?;
    let found = match data {
        SweepData::Butterfly(_) => Style::Butterfly,
        SweepData::Fractal(_) => Style::Fractal,
    };
    if args.style.is_some_and(|s| s != found) {
        return Err("CSV schema does not match the requested style".into());
    }
    std::fs::write(&args.svg, svg::render(&data))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match &cli.command {
        Command::Spectrum(a) => spectrum(a).map(|()| true),
        Command::Butterfly(a) => butterfly(a).map(|()| true),
        Command::Fractal(a) => fractal(a).map(|()| true),
        Command::Verify(a) => run_verify(a),
        Command::Render(a) => render(a).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
