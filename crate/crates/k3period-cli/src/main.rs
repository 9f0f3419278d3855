//! Batch front end: one JSON record per input line, one JSON document (or
//! text line) per record on stdout. Validation failures emit a structured
//! diagnostic naming the violated invariant and set exit code 2; I/O or
//! internal failures exit 1.

mod commands;
mod selftest;

use std::io::{BufRead, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use k3period::lattice::{Frame, LambdaKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FrameArg {
    E8e8,
    D16plus,
}

impl FrameArg {
    fn kind(self) -> LambdaKind {
        match self {
            FrameArg::E8e8 => LambdaKind::E8E8,
            FrameArg::D16plus => LambdaKind::D16Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact period-domain computations for the signature (2,18) lattice:
/// coordinate charts, modular reduction, the large-complex-structure test,
/// plane-stabilizer actions, and fiber-type reports.
#[derive(Parser, Debug)]
#[command(name = "k3period", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rank-16 frame of the ambient lattice.
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "e8e8",
        env = "K3PERIOD_FRAME"
    )]
    frame: FrameArg,

    /// Input path, or `-` for stdin. One JSON record per line.
    #[arg(long, global = true, default_value = "-", env = "K3PERIOD_INPUT")]
    input: String,

    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "json",
        env = "K3PERIOD_FORMAT"
    )]
    format: Format,

    /// Coordinate box for the general root search.
    #[arg(long, global = true, default_value_t = 1, env = "K3PERIOD_BOX_BOUND")]
    box_bound: i64,

    /// Norm bound for factor vectors in the general root search.
    #[arg(
        long,
        global = true,
        default_value_t = 4,
        env = "K3PERIOD_C_NORM_BOUND"
    )]
    c_norm_bound: i64,

    /// Seed for the randomized suites (selftest only).
    #[arg(long, global = true, default_value_t = 0, env = "K3PERIOD_SEED")]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce tau to the closed modular fundamental domain.
    ReduceTau,
    /// Convert a point between the omega, tube, and Narain charts.
    Coords,
    /// Evaluate the large-complex-structure predicate at a Narain point.
    LcsTest,
    /// Apply a plane-stabilizer element (or a general isometry matrix).
    Act,
    /// Root system and fiber-type candidates of a period point.
    AdeType,
    /// Classify a rank-2 primitive isotropic plane by its quotient.
    ClassifyV,
    /// Check root-system constancy across chart heights over (tau, z).
    FiberScan,
    /// Run the built-in invariant suites.
    Selftest,
}

pub struct Ctx {
    frame: Frame,
    box_bound: i64,
    c_norm_bound: i64,
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        frame: Frame::new(cli.frame.kind()),
        box_bound: cli.box_bound,
        c_norm_bound: cli.c_norm_bound,
        format: cli.format,
    };

    if let Command::Selftest = cli.command {
        return if selftest::run(&ctx, cli.seed) {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        };
    }

    let reader: Box<dyn BufRead> = if cli.input == "-" {
        Box::new(std::io::stdin().lock())
    } else {
        match std::fs::File::open(&cli.input) {
            Ok(f) => Box::new(std::io::BufReader::new(f)),
            Err(e) => {
                eprintln!("k3period: cannot open {}: {e}", cli.input);
                return ExitCode::from(1);
            }
        }
    };

    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut had_validation_error = false;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                eprintln!("k3period: read error at line {line_no}: {e}");
                return ExitCode::from(1);
            }
        };
        if line.trim().is_empty() {
            continue;
        }
        let outcome = commands::handle(&cli.command, &ctx, &line);
        match outcome {
            Ok(value) => {
                let rendered = match ctx.format {
                    Format::Json => value.to_string(),
                    Format::Text => commands::render_text(&value),
                };
                if writeln!(out, "{rendered}").is_err() {
                    return ExitCode::from(1);
                }
            }
            Err(diag) => {
                had_validation_error = true;
                let doc = serde_json::json!({
                    "error": {
                        "kind": diag.kind,
                        "detail": diag.detail,
                        "line": line_no,
                    }
                });
                let rendered = match ctx.format {
                    Format::Json => doc.to_string(),
                    Format::Text => format!("error[{}] line {line_no}: {}", diag.kind, diag.detail),
                };
                if writeln!(out, "{rendered}").is_err() {
                    return ExitCode::from(1);
                }
            }
        }
    }
    if out.flush().is_err() {
        return ExitCode::from(1);
    }
    if had_validation_error {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
