use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxcurve_core::Error;

mod commands;

/// Maximal curves over F_{q^2}: point counts, Weierstrass audits, and
/// one-point codes.
#[derive(Parser, Debug)]
#[command(name = "maxcurve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus, point counts, maximality and genus bounds.
    Curve(CurveCmd),
    /// Order sequences, ramification accounting, embedding and dichotomy checks.
    Audit(AuditCmd),
    /// Build a one-point code and optionally its exact minimum distance.
    Code(CodeCmd),
    /// Search additive F of degree m_1 with F(y) = x^{q+1} maximal.
    Conjecture(ConjectureCmd),
    /// Normalize a y^q + b y = x^m to y^q + y = x^m.
    Normalize(NormalizeCmd),
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u32,
    /// q = p^a.
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    /// Cap on table sizes and exhaustive scans.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Use y^q + y = x^m.
    #[arg(long, conflicts_with_all = ["additive", "d"])]
    pub hermitian_m: Option<u64>,
    /// Coefficients a_0,...,a_e of F; each an integer mod p or a
    /// colon-joined coefficient tuple c0:c1:...
    #[arg(long, requires = "d")]
    pub additive: Option<String>,
    /// Exponent of x for --additive.
    #[arg(long)]
    pub d: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct CurveCmd {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Write the F_{q^2}-points as CSV.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AuditCmd {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Seed for sampling non-rational points when q > 5.
    #[arg(long, default_value_t = 0)]
    pub sample_seed: u64,
    /// Write the order sequences as CSV.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CodeCmd {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long)]
    pub lambda: u64,
    /// Compute the minimum distance by exhaustive scan.
    #[arg(long)]
    pub exact: bool,
    /// Write the generator matrix.
    #[arg(long)]
    pub emit: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ConjectureCmd {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Degree of F, a power of p.
    #[arg(long)]
    pub m1: u64,
}

#[derive(Args, Debug)]
pub struct NormalizeCmd {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Coefficient of y^q, as for --additive.
    #[arg(long)]
    pub coeff_a: String,
    /// Coefficient of y.
    #[arg(long)]
    pub coeff_b: String,
    #[arg(long)]
    pub m: u64,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => 3,
        e if e.is_validation() => 2,
        Error::NotInSubfield { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Curve(c) => commands::curve(c),
        Command::Audit(c) => commands::audit(c),
        Command::Code(c) => commands::code(c),
        Command::Conjecture(c) => commands::conjecture(c),
        Command::Normalize(c) => commands::normalize(c),
    };
    match result {
        Ok((report, ok)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // A closed pipe on stdout is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
