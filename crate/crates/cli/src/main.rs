//! `ellstab`: batch verification commands for the elliptic-to-K-theoretic
//! limit calculus.
//!
//! Every command writes JSON lines followed by one summary line
//! `{"summary": {"checks": n, "command": ..., "failed": f, "passed": p, "skipped": s}}`.
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! malformed input.

mod commands;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellstab::hilbcomb::{ChamberSign, ContentSign, ConventionSet};
use ellstab::rat::{parse_q, Q};

#[derive(Parser, Debug)]
#[command(name = "ellstab", version, about = "Verification suites for limits of elliptic stable envelopes")]
struct Cli {
    /// Write JSON lines here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Oddness, quasiperiodicity, the shift law of theta ratios and a
    /// seeded numeric comparison.
    ThetaVerify(ThetaArgs),
    /// Per-diagram data of the Hilbert scheme fixed points.
    YoungReport(YoungArgs),
    /// Floor-difference identity over all pairs in each cyclic component.
    DiflemScan(DiflemArgs),
    /// Components of a cyclic fixed locus, or of a framing subtorus.
    ComponentEnum(ComponentArgs),
    /// Scan of the four sign conventions against the floor-difference
    /// identity.
    Calibrate(CalibrateArgs),
    /// Validate a restriction matrix, apply the double limit and check the
    /// stable-envelope axioms on the result.
    LimitApply(LimitArgs),
    /// Hyperplanes, blocks and cyclic order of a framing point.
    FramingBlocks(FramingArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct ConvArgs {
    /// Content convention of a box in row i, column j.
    #[arg(long, value_enum, default_value_t = ContentArg::IJ)]
    content: ContentArg,
    /// Attracting direction on the one-dimensional torus.
    #[arg(long, value_enum, default_value_t = AttractArg::Neg)]
    attract: AttractArg,
}

impl ConvArgs {
    fn conventions(self) -> ConventionSet {
        ConventionSet {
            content: match self.content {
                ContentArg::IJ => ContentSign::RowMinusColumn,
                ContentArg::JI => ContentSign::ColumnMinusRow,
            },
            chamber: match self.attract {
                AttractArg::Pos => ChamberSign::AttractPositive,
                AttractArg::Neg => ChamberSign::AttractNegative,
            },
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ContentArg {
    #[value(name = "i-j")]
    IJ,
    #[value(name = "j-i")]
    JI,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum AttractArg {
    Pos,
    Neg,
}

/// Form of the floor-difference identity.
#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FormArg {
    /// Floors plus half the moving rank against half the m-difference.
    Corrected,
    /// Bare floors against the full m-difference.
    Literal,
}

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s.trim()).map_err(|e| e.to_string())
}


#[derive(Args, Debug)]
struct ThetaArgs {
    /// Truncation order in q.
    #[arg(long, default_value = "10", value_parser = rational)]
    order: Q,
    /// Largest denominator of the shift-law grid.
    #[arg(long, default_value_t = 6)]
    w_denoms: i64,
    /// Bound on |w| in the shift-law grid.
    #[arg(long, default_value_t = 3)]
    w_max: i64,
    /// Relative tolerance of the numeric comparison.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Value of q in the numeric comparison.
    #[arg(long, default_value_t = 1e-4)]
    q: f64,
    /// Seed of the random numeric sample points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct YoungArgs {
    /// Size of the diagrams.
    #[arg(long)]
    n: usize,
    /// Order of the cyclic subgroup; adds the component label.
    #[arg(long)]
    b: Option<u32>,
    /// Slope; adds both forms of m(w).
    #[arg(long, value_parser = rational)]
    w: Option<Q>,
    #[command(flatten)]
    conv: ConvArgs,
}

#[derive(Args, Debug)]
struct DiflemArgs {
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Denominators 2..=b-max with numerators 1 <= a < 4b.
    #[arg(long, default_value_t = 4)]
    b_max: i64,
    /// Explicit slopes, replacing the grid.
    #[arg(long, value_delimiter = ',', value_parser = rational)]
    w: Option<Vec<Q>>,
    #[arg(long, value_enum, default_value_t = FormArg::Corrected)]
    form: FormArg,
    #[command(flatten)]
    conv: ConvArgs,
}

#[derive(Args, Debug)]
struct ComponentArgs {
    /// Size of the diagrams (Hilbert scheme mode).
    #[arg(long, conflicts_with = "framing")]
    n: Option<usize>,
    /// Order of the cyclic subgroup (Hilbert scheme mode).
    #[arg(long, requires = "n")]
    b: Option<u32>,
    /// Framing vector r_1,...,r_l (quiver mode).
    #[arg(long, value_delimiter = ',', requires_all = ["dims", "w"])]
    framing: Option<Vec<u32>>,
    /// Dimension vector n_1,...,n_l (quiver mode).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<u32>>,
    /// Framing point w_1,...,w_|r| (quiver mode).
    #[arg(long, value_delimiter = ',', value_parser = rational)]
    w: Option<Vec<Q>>,
    #[command(flatten)]
    conv: ConvArgs,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    #[arg(long, default_value_t = 4)]
    b_max: i64,
    #[arg(long, value_enum, default_value_t = FormArg::Corrected)]
    form: FormArg,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Restriction matrix JSON.
    #[arg(long)]
    input: PathBuf,
    /// Slope vector, one entry per equivariant variable.
    #[arg(long, value_delimiter = ',', value_parser = rational)]
    w: Vec<Q>,
    /// Kähler limit per variable: zero or infinity, comma separated.
    #[arg(long, default_value = "zero")]
    chamber: String,
}

#[derive(Args, Debug)]
struct FramingArgs {
    /// Framing point w_1,...,w_|r|.
    #[arg(long, value_delimiter = ',', value_parser = rational)]
    w: Vec<Q>,
    /// Framing vector; with --dims, also enumerates components.
    #[arg(long, value_delimiter = ',', requires = "dims")]
    framing: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<u32>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::ThetaVerify(a) => commands::theta_verify(a),
        Command::YoungReport(a) => commands::young_report(a),
        Command::DiflemScan(a) => commands::diflem_scan(a),
        Command::ComponentEnum(a) => commands::component_enum(a),
        Command::Calibrate(a) => commands::calibrate(a),
        Command::LimitApply(a) => commands::limit_apply(a),
        Command::FramingBlocks(a) => commands::framing_blocks(a),
    };
    let run = match outcome {
        Ok(run) => run,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(err) = write_run(&cli, &run) {
        eprintln!("error: {err:#}");
        return ExitCode::from(2);
    }
    if run.failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn write_run(cli: &Cli, run: &commands::Run) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    for line in &run.lines {
        serde_json::to_writer(&mut out, line)?;
        writeln!(out)?;
    }
    serde_json::to_writer(&mut out, &run.summary())?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
