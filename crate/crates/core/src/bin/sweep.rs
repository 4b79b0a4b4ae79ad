use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use gl2orbits::sweep::{self, Mode, OutputFormat, PrimeRange, Suite, SweepConfig, DEFAULT_MAX_ELL};
use gl2orbits::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

/// Verify orbit-divisibility statements for subgroups of GL2(F_ell) across a prime range.
///
/// Exit status: 0 when every scenario passes, 1 on a verification failure,
/// 2 on a configuration error.
#[derive(Debug, Parser)]
#[command(name = "sweep", version)]
struct Args {
    /// Inclusive prime range `lo..hi`, or a single prime.
    #[arg(long, default_value = "3..31")]
    primes: String,

    #[arg(long, value_enum, default_value = "sampled")]
    mode: ModeArg,

    /// Scenarios per suite and prime in sampled mode.
    #[arg(long, default_value_t = 50)]
    samples: u64,

    /// Comma-separated suites.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "lemma31,lemma32,lemma33,case1,case2,inert,nonsplit"
    )]
    suites: Vec<String>,

    /// Comma-separated degree parameters d.
    #[arg(long, value_delimiter = ',', default_value = "1,2,6")]
    degrees: Vec<u64>,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Worker threads; does not affect the report.
    #[arg(long, default_value_t = 1)]
    parallelism: usize,

    /// Largest prime allowed for suites that build Borel subgroups.
    #[arg(long, default_value_t = DEFAULT_MAX_ELL)]
    max_ell: u64,

    /// Enumerate full subgroup lattices up to ell = 13 instead of 7.
    #[arg(long)]
    allow_large_exhaustive: bool,

    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,

    /// Record elapsed time in the report and print it to stderr.
    #[arg(long)]
    timing: bool,
}

impl Args {
    fn config(&self) -> Result<SweepConfig, Error> {
        let suites = self
            .suites
            .iter()
            .map(|s| s.parse::<Suite>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SweepConfig {
            primes: self.primes.parse::<PrimeRange>()?,
            mode: match self.mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Sampled => Mode::Sampled,
            },
            samples: self.samples,
            degrees: self.degrees.clone(),
            suites,
            seed: self.seed,
            parallelism: self.parallelism,
            max_ell: self.max_ell,
            allow_large_exhaustive: self.allow_large_exhaustive,
            output_format: match self.format {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Csv => OutputFormat::Csv,
            },
            timing: self.timing,
        })
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_) | Error::PrimeAboveBound { .. } | Error::NotPrime(_) | Error::ModulusOutOfRange(_)
    )
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match args.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("sweep: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match sweep::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("sweep: {e}");
            return ExitCode::from(if is_config_error(&e) { 2 } else { 1 });
        }
    };

    let text = match cfg.output_format {
        OutputFormat::Json => match report.to_json() {
            Ok(t) => t,
            Err(e) => {
                eprintln!("sweep: {e}");
                return ExitCode::from(1);
            }
        },
        OutputFormat::Csv => report.to_csv(),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("sweep: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }

    for s in report.suites.iter().filter(|s| s.fail > 0) {
        eprintln!("sweep: {} at ell={}: {} of {} failed", s.name, s.prime, s.fail, s.total);
    }
    if let Some(ms) = report.elapsed_ms {
        eprintln!("sweep: finished in {ms} ms");
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
