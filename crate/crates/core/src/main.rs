use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thermoshift::error::Error;
use thermoshift::io::{exit_code, run, write_output, CacheConfig, Command, Mode, RunSpec, THREADS_ENV};

#[derive(Parser)]
#[command(name = "thermoshift", version, about = "Zero-temperature analysis of locally constant potentials on SFTs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Enumerate elementary periodic orbits
    Orbits(Opts),
    /// Rotation set of a vector potential
    Rotset(Opts),
    /// Classify the zero-temperature limit
    Classify(Opts),
    /// Track equilibrium masses as temperature goes to zero
    Ztsweep(Opts),
    /// Localized entropy along a rotation-set face
    Facecurve(Opts),
    /// Test whether two potentials are cohomologous
    Cohom(Opts),
}

#[derive(Args)]
struct Opts {
    /// Builtin shift name, JSON file, or inline JSON
    #[arg(long)]
    shift: Option<String>,
    /// Block length for recoding
    #[arg(long)]
    k: Option<usize>,
    /// Builtin potential name, JSON file, or inline JSON
    #[arg(long)]
    potential: Option<String>,
    /// Second potential for cohom
    #[arg(long)]
    against: Option<String>,
    /// Direction, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<String>>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    h_step: Option<f64>,
    #[arg(long)]
    max_orbits: Option<usize>,
    /// Also estimate coefficients from the temperature sweep
    #[arg(long)]
    numeric: bool,
    /// JSON run specification; flags override its fields
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Output directory; the envelope goes to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

fn split(sub: Sub) -> (Command, Opts) {
    match sub {
        Sub::Orbits(o) => (Command::Orbits, o),
        Sub::Rotset(o) => (Command::Rotset, o),
        Sub::Classify(o) => (Command::Classify, o),
        Sub::Ztsweep(o) => (Command::Ztsweep, o),
        Sub::Facecurve(o) => (Command::Facecurve, o),
        Sub::Cohom(o) => (Command::Cohom, o),
    }
}

fn execute(command: Command, o: Opts) -> Result<(), Error> {
    let base = match &o.spec {
        Some(p) => RunSpec::from_json(
            &std::fs::read_to_string(p).map_err(|e| Error::invalid(format!("cannot read {}: {e}", p.display())))?,
        )?,
        None => RunSpec::default(),
    };
    let cli = RunSpec {
        shift: o.shift,
        k: o.k,
        potential: o.potential,
        against: o.against,
        alpha: o.alpha,
        tmax: o.tmax,
        samples: o.samples,
        mode: o.mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }),
        tolerance: o.tolerance,
        h_step: o.h_step,
        max_orbits: o.max_orbits,
        numeric: o.numeric.then_some(true),
    };
    let spec = base.overridden_by(cli);
    let cache = if o.no_cache {
        CacheConfig::disabled()
    } else if let Some(d) = o.cache_dir {
        CacheConfig { dir: Some(d) }
    } else {
        CacheConfig::from_env()
    };
    let out = run(command, &spec, &cache)?;
    for w in &out.envelope.warnings {
        eprintln!("warning: {w}");
    }
    match o.out {
        Some(dir) => {
            for p in write_output(&dir, &out)? {
                eprintln!("wrote {}", p.display());
            }
        }
        None => {
            // a closed pipe downstream is not an error
            let text = serde_json::to_string_pretty(&out.envelope).expect("serializable");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (command, opts) = split(cli.command);
    match execute(command, opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
