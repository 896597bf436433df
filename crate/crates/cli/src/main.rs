use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qzeta::exact_algebra::BigRat;
use qzeta::io::{decode_linear_form, parse_qpoint, parse_range};
use qzeta::numerics::SlopeQuantity;
use qzeta_cli::commands::{self, CliError};
use qzeta_cli::{Format, Report};

fn q_arg(s: &str) -> Result<BigRat, String> {
    parse_qpoint(s).map_err(|e| e.to_string())
}

#[derive(Clone, Debug)]
struct Ints(Vec<i64>);

fn range_arg(s: &str) -> Result<Ints, String> {
    parse_range(s).map(Ints).map_err(|e| e.to_string())
}

fn quantity_arg(s: &str) -> Result<SlopeQuantity, String> {
    match s {
        "s_tilde" => Ok(SlopeQuantity::STilde),
        "d_n" => Ok(SlopeQuantity::DN),
        "p_hat_max" => Ok(SlopeQuantity::PHatMax),
        _ => Err(format!("unknown quantity `{s}` (expected s_tilde, d_n or p_hat_max)")),
    }
}

/// Builds and checks q-zeta linear forms, denominators and dimension bounds.
#[derive(Parser)]
#[command(name = "qzeta", version)]
struct Cli {
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Seed for randomised instance draws.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Working precision in bits for interval evaluations.
    #[arg(long, global = true, env = "QZETA_PRECISION", default_value_t = 256)]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FormArgs {
    #[arg(long = "A")]
    a: i64,
    #[arg(long)]
    r: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Build linear forms and check them.
    Form {
        #[command(subcommand)]
        action: FormCmd,
    },
    /// Denominator memberships.
    Denom {
        #[command(subcommand)]
        action: DenomCmd,
    },
    /// Closed forms and the terminating transformation.
    Identity {
        #[command(subcommand)]
        action: IdentityCmd,
    },
    /// Building-block memberships.
    Blocks {
        #[command(subcommand)]
        action: BlocksCmd,
    },
    /// Dimension-bound inequalities.
    Criterion {
        #[command(subcommand)]
        action: CriterionCmd,
    },
    /// Growth slopes against their limits.
    Asymptotics {
        #[command(subcommand)]
        action: AsymptoticsCmd,
    },
    /// Evaluate zeta_q(s) at a rational point.
    Zeta {
        #[command(subcommand)]
        action: ZetaCmd,
    },
}

#[derive(Subcommand)]
enum FormCmd {
    /// Emit the linear-form document.
    Build {
        #[command(flatten)]
        p: FormArgs,
        #[arg(long)]
        n: i64,
    },
    /// Residual enclosures of the linear-form identity.
    Verify {
        #[arg(long = "A", required_unless_present = "input")]
        a: Option<i64>,
        #[arg(long, required_unless_present = "input")]
        r: Option<i64>,
        #[arg(long, value_parser = range_arg, default_value = "0..4")]
        n: Ints,
        #[arg(long, allow_hyphen_values = true, value_parser = q_arg, value_delimiter = ',', default_value = "1/2")]
        q: Vec<BigRat>,
        /// Check this form document instead of building one.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Exact structural identities of the coefficient table.
    Structure {
        #[command(flatten)]
        p: FormArgs,
        #[arg(long, value_parser = range_arg, default_value = "0..4")]
        n: Ints,
    },
}

#[derive(Subcommand)]
enum DenomCmd {
    Verify {
        #[command(flatten)]
        p: FormArgs,
        #[arg(long, value_parser = range_arg, default_value = "1..4")]
        n: Ints,
        /// Use the full power A of d_n(1/q) for the rational part.
        #[arg(long)]
        full: bool,
        /// Also sweep the sufficient condition over A in {0,2,4}, r in {0,1}.
        #[arg(long)]
        sufficient: bool,
    },
}

#[derive(Subcommand)]
enum IdentityCmd {
    Verify {
        #[arg(long, default_value_t = 6)]
        n_max: i64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        applied_n_max: i64,
    },
}

#[derive(Subcommand)]
enum BlocksCmd {
    Verify {
        #[arg(long, default_value_t = 4)]
        n_max: i64,
        #[arg(long, default_value_t = 2)]
        r_max: i64,
        #[arg(long, default_value_t = 3)]
        l_max: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = range_arg, default_value = "-2,-1,1,2")]
        e: Ints,
    },
}

#[derive(Subcommand)]
enum CriterionCmd {
    Table {
        #[arg(long = "A", value_parser = range_arg, default_value = "4,6,8,10,12,14,16,18,20")]
        a: Ints,
    },
    Check,
}

#[derive(Subcommand)]
enum AsymptoticsCmd {
    Sweep {
        #[arg(long, value_parser = quantity_arg)]
        quantity: SlopeQuantity,
        #[command(flatten)]
        p: FormArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = q_arg, default_value = "1/2")]
        q: BigRat,
        #[arg(long, value_parser = range_arg)]
        n: Ints,
        /// Assert each slope against its target with this relative tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ZetaCmd {
    Eval {
        #[arg(long)]
        s: i64,
        #[arg(long, allow_hyphen_values = true, value_parser = q_arg)]
        q: BigRat,
    },
}

enum Output {
    Report(Report),
    Document(String),
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let prec = cli.precision;
    Ok(match &cli.command {
        Command::Form { action } => match action {
            FormCmd::Build { p, n } => Output::Document(commands::form_build(p.a, p.r, *n)?),
            FormCmd::Verify { a, r, n, q, input } => {
                let form = match input {
                    Some(path) => {
                        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                            path: path.display().to_string(),
                            source,
                        })?;
                        Some(decode_linear_form(&text)?)
                    }
                    None => None,
                };
                let (a, r) = match &form {
                    Some(f) => (f.params.a, f.params.r),
                    None => (a.unwrap_or_default(), r.unwrap_or_default()),
                };
                Output::Report(commands::form_verify(a, r, &n.0, q, prec, form.as_ref())?)
            }
            FormCmd::Structure { p, n } => Output::Report(commands::structure_verify(p.a, p.r, &n.0)?),
        },
        Command::Denom {
            action: DenomCmd::Verify { p, n, full, sufficient },
        } => Output::Report(commands::denom_verify(p.a, p.r, &n.0, !full, *sufficient)?),
        Command::Identity {
            action:
                IdentityCmd::Verify {
                    n_max,
                    count,
                    applied_n_max,
                },
        } => Output::Report(commands::identity_verify(*n_max, cli.seed, *count, *applied_n_max)?),
        Command::Blocks {
            action: BlocksCmd::Verify { n_max, r_max, l_max, e },
        } => Output::Report(commands::blocks_verify(*n_max, *r_max, *l_max, &e.0)?),
        Command::Criterion { action } => match action {
            CriterionCmd::Table { a } => Output::Report(commands::criterion_table(&a.0)?),
            CriterionCmd::Check => Output::Report(commands::criterion_check()?),
        },
        Command::Asymptotics {
            action:
                AsymptoticsCmd::Sweep {
                    quantity,
                    p,
                    q,
                    n,
                    tolerance,
                },
        } => Output::Report(commands::asymptotics_sweep(*quantity, p.a, p.r, q, &n.0, *tolerance)?),
        Command::Zeta {
            action: ZetaCmd::Eval { s, q },
        } => Output::Report(commands::zeta_eval(*s, q, prec)?),
    })
}

fn write(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let result = run(&cli).and_then(|out| match out {
        Output::Document(text) => write(&cli, &text).map(|_| true),
        Output::Report(rep) => write(&cli, &rep.render(cli.format)).map(|_| rep.pass),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
