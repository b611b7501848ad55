use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinchsh_cli::commands::{all_routes, DEFAULT_SEED};
use spinchsh_cli::{
    cmd_analyze, cmd_family, cmd_scan, cmd_verify, AnalyzeOptions, CliError, Family, FamilyParams,
    Fault, Output, OutputFormat, ScanRange, VerifyOptions,
};
use spinchsh_core::{OracleConfig, Route};

#[derive(Parser, Debug)]
#[command(
    name = "spinchsh",
    version,
    about = "Maximal CHSH values of two-qudit states under spin measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a JSON state file.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Analyze a named family member against its closed form.
    Family {
        #[arg(value_enum)]
        family: FamilyArg,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep a family parameter and print closed-form vs pipeline γ as CSV.
    Scan {
        #[arg(value_enum)]
        family: FamilyArg,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true, requires = "phi_to")]
        phi_from: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "phi_from")]
        phi_to: Option<f64>,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[arg(long, requires = "d_to", conflicts_with = "phi_from")]
        d_from: Option<usize>,
        #[arg(long, requires = "d_from")]
        d_to: Option<usize>,
    },
    /// Run the consistency checks over seeded random states.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, env = "SPINCHSH_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Where failing states are written.
        #[arg(long, default_value = "spinchsh-quarantine.json")]
        quarantine: PathBuf,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = RouteArg::All)]
    route: RouteArg,
    /// Also maximize numerically and report the gap to the closed form.
    #[arg(long)]
    oracle: bool,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Include per-route wall-clock times (makes output non-deterministic).
    #[arg(long)]
    timings: bool,
    /// Seed for the oracle's random starts.
    #[arg(long, env = "SPINCHSH_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Schmidt weights, comma separated.
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<f64>>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RouteArg {
    All,
    Definition,
    Elements,
    Theorem2,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    Ghz,
    Schmidt,
    TwoTerm,
    Product,
    Werner,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FaultArg {
    TransposeZ,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Self {
        match f {
            FaultArg::TransposeZ => Fault::TransposeZ,
        }
    }
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Ghz => Family::Ghz,
            FamilyArg::Schmidt => Family::Schmidt,
            FamilyArg::TwoTerm => Family::TwoTerm,
            FamilyArg::Product => Family::Product,
            FamilyArg::Werner => Family::Werner,
        }
    }
}

impl OutputArgs {
    fn options(&self) -> AnalyzeOptions {
        let routes = match self.route {
            RouteArg::All => all_routes().to_vec(),
            RouteArg::Definition => vec![Route::Definition],
            RouteArg::Elements => vec![Route::ElementFormulas],
            RouteArg::Theorem2 => vec![Route::Theorem2],
        };
        AnalyzeOptions {
            routes,
            oracle: self.oracle.then(|| OracleConfig {
                rng_seed: self.seed,
                ..OracleConfig::default()
            }),
            timings: self.timings,
            format: if self.csv {
                OutputFormat::Csv
            } else {
                OutputFormat::Json
            },
            fault: self.inject_fault.map(Fault::from),
        }
    }
}

impl ParamArgs {
    fn params(&self) -> FamilyParams {
        FamilyParams {
            d: self.d,
            phi: self.phi,
            mu: self.mu.clone(),
            k: self.k,
            n: self.n,
        }
    }
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Analyze { path, out } => cmd_analyze(&path, &out.options()),
        Command::Family {
            family,
            params,
            out,
        } => cmd_family(family.into(), &params.params(), &out.options()),
        Command::Scan {
            family,
            params,
            phi_from,
            phi_to,
            steps,
            d_from,
            d_to,
        } => {
            let range = match (phi_from, phi_to, d_from, d_to) {
                (Some(from), Some(to), None, None) => ScanRange::Phi { from, to, steps },
                (None, None, Some(from), Some(to)) => ScanRange::Dim { from, to },
                _ => {
                    return Err(CliError::Invalid(
                        "scan needs --phi-from/--phi-to or --d-from/--d-to".into(),
                    ))
                }
            };
            cmd_scan(family.into(), &params.params(), range)
        }
        Command::Verify {
            dims,
            samples,
            seed,
            quarantine,
            inject_fault,
        } => cmd_verify(&VerifyOptions {
            dims,
            samples,
            seed,
            quarantine,
            fault: inject_fault.map(Fault::from),
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let status = match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            out.status
        }
        Err(e) => Err(e),
    };
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinchsh: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
