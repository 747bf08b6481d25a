//! `comeq`: construct and check solutions of `XA - AX = f(X)`.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use comeq::dims;
use comeq::equation::{self, EquationInstance};
use comeq::ladder::{self, ExtendOutcome};
use comeq::polyrec;
use comeq::twoeig::{self, Regime, SolutionFamily, TwoEigInstance, DEFAULT_ENUMERATION_CAP};
use comeq::rational::{self, Rational};
use comeq::{FactoredPoly, RatMatrix};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::json;

use crate::io::{emit, parse_rational, print_json, read_json, read_spectrum, CliError};

#[derive(Parser)]
#[command(name = "comeq", version, about = "Exact solutions of XA - AX = f(X)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Residual of a candidate X, optionally with the ladder block check.
    Verify {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "X")]
        x: PathBuf,
        #[arg(long)]
        f: PathBuf,
        /// Also check the ladder block structure (requires diagonal A and f = x^2 - x^3).
        #[arg(long)]
        ladder: bool,
    },
    /// Solution families for A = diag(mu I_p, lambda I_q).
    Solve2(TwoEigArgs),
    /// Families with both off-diagonal blocks free, plus sampled members.
    Degenerate {
        #[command(flatten)]
        inst: TwoEigArgs,
        /// Members sampled per family.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Partition a spectrum into ladders.
    Ladder {
        #[arg(long)]
        spectrum: PathBuf,
    },
    /// Extend diagonal blocks (top rung first) to a solution of XA - AX = X^2 - X^3.
    Extend {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "Y", num_args = 1.., required = true)]
        y: Vec<PathBuf>,
    },
    /// Variety dimensions for A = diag(I_p, 0_q).
    Dims(DimsArgs),
    /// Rows of the P_s recurrence, one JSON object per line.
    Polyrec {
        #[arg(long = "s-max")]
        s_max: usize,
    },
}

#[derive(Args)]
struct TwoEigArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    mu: Rational,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    lambda: Rational,
    #[arg(long)]
    f: PathBuf,
    /// Use every diagonal (P, S) with entries among the roots of f (default).
    #[arg(long, conflicts_with_all = ["p_block", "s_block"])]
    enumerate: bool,
    #[arg(long = "P", requires = "s_block")]
    p_block: Option<PathBuf>,
    #[arg(long = "S", requires = "p_block")]
    s_block: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct DimsArgs {
    #[arg(long, requires = "q", conflicts_with = "scan")]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    q: Option<u64>,
    /// Scan every 1 <= p <= PMAX, 1 <= q <= QMAX within the ratio bound; CSV output.
    #[arg(long, num_args = 2, value_names = ["PMAX", "QMAX"])]
    scan: Option<Vec<u64>>,
    #[arg(long, value_parser = parse_rational, default_value = "5", requires = "scan")]
    ratio: Rational,
    /// Extra couple `P:Q` reported even when outside the ratio bound.
    #[arg(long, value_parser = parse_couple, requires = "scan")]
    include: Vec<(u64, u64)>,
}

fn parse_couple(s: &str) -> Result<(u64, u64), String> {
    let (p, q) = s.split_once(':').ok_or("expected P:Q")?;
    Ok((
        p.trim().parse().map_err(|e| format!("{e}"))?,
        q.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return report(CliError::validation(e.render().to_string().trim_end()));
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("comeq: {}", e.message);
    emit(&json!({ "error": { "kind": e.kind, "code": e.code, "message": e.message } }).to_string());
    ExitCode::from(e.code)
}

/// `Ok(false)` means the command ran but the requested check failed.
fn run(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Verify { a, x, f, ladder } => verify(a, x, f, ladder),
        Command::Solve2(args) => solve2(&args),
        Command::Degenerate { inst, samples, seed } => degenerate(&inst, samples, seed),
        Command::Ladder { spectrum } => {
            let values = read_spectrum(&spectrum)?;
            print_json(&ladder::partition_spectrum(&values))?;
            Ok(true)
        }
        Command::Extend { a, y } => extend(a, &y),
        Command::Dims(args) => dims_cmd(&args),
        Command::Polyrec { s_max } => {
            for row in polyrec::Recurrence::default().take(s_max + 1) {
                let line = PolyrecRow {
                    s: row.s,
                    coeffs: row.p_coeff_strings(),
                    p_at_1: rational::format(&row.p_s_at_1),
                };
                emit(&serde_json::to_string(&line).expect("plain struct"));
            }
            Ok(true)
        }
    }
}

#[derive(Serialize)]
struct PolyrecRow {
    s: usize,
    coeffs: Vec<String>,
    p_at_1: String,
}

#[derive(Serialize)]
struct Decomposition {
    partition: ladder::LadderPartition,
    report: ladder::DecompositionReport,
}

#[derive(Serialize)]
struct VerifyOut {
    residual: equation::ResidualReport,
    decomposition: Option<Decomposition>,
}

fn verify(a: PathBuf, x: PathBuf, f: PathBuf, with_ladder: bool) -> Result<bool, CliError> {
    let a: RatMatrix = read_json(&a)?;
    let x: RatMatrix = read_json(&x)?;
    let f: FactoredPoly = read_json(&f)?;
    let inst = EquationInstance::new(a.clone(), f.clone())?;
    let residual = equation::residual(&inst, &x)?;
    let mut ok = residual.is_solution;
    let decomposition = if with_ladder && residual.is_solution {
        if f != FactoredPoly::cubic_model() {
            return Err(CliError::validation("--ladder requires f = x^2 - x^3"));
        }
        let (partition, report) = ladder::verify_in_ladder_order(&a, &x)?;
        ok &= report.conforms;
        Some(Decomposition { partition, report })
    } else {
        None
    };
    print_json(&VerifyOut { residual, decomposition })?;
    Ok(ok)
}

fn two_eig_setup(args: &TwoEigArgs) -> Result<(TwoEigInstance, Vec<(RatMatrix, RatMatrix)>), CliError> {
    let f: FactoredPoly = read_json(&args.f)?;
    let inst = TwoEigInstance::new(args.p, args.q, args.mu.clone(), args.lambda.clone(), f)
        .map_err(|e| CliError::validation(e.to_string()))?;
    let pairs = match (&args.p_block, &args.s_block) {
        (Some(p), Some(s)) => vec![(read_json(p)?, read_json(s)?)],
        _ => twoeig::enumerate_diagonal_ps(&inst, DEFAULT_ENUMERATION_CAP)?,
    };
    Ok((inst, pairs))
}

#[derive(Serialize)]
struct FamiliesOut<T> {
    regime: Regime,
    families: Vec<T>,
}

fn solve2(args: &TwoEigArgs) -> Result<bool, CliError> {
    let (inst, pairs) = two_eig_setup(args)?;
    let regime = twoeig::classify(&inst);
    let families = pairs
        .iter()
        .map(|(p, s)| match regime {
            Regime::Degenerate => twoeig::solve_degenerate(&inst, p, s),
            _ => twoeig::solve_triangular(&inst, p, s),
        })
        .collect::<Result<Vec<SolutionFamily>, _>>()?;
    print_json(&FamiliesOut { regime, families })?;
    Ok(true)
}

#[derive(Serialize)]
struct SampledFamily {
    family: SolutionFamily,
    samples: Vec<Sample>,
}

#[derive(Serialize)]
struct Sample {
    #[serde(flatten)]
    member: twoeig::FamilyMember,
    is_solution: bool,
}

fn degenerate(args: &TwoEigArgs, samples: usize, seed: u64) -> Result<bool, CliError> {
    let (inst, pairs) = two_eig_setup(args)?;
    let regime = twoeig::classify(&inst);
    let eq = inst.equation();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut all_ok = true;
    let mut families = Vec::with_capacity(pairs.len());
    for (p, s) in &pairs {
        let family = twoeig::solve_degenerate(&inst, p, s)?;
        let samples = family
            .sample_members(&mut rng, samples)
            .into_iter()
            .map(|member| {
                let is_solution = eq.is_solution(&member.x)?;
                all_ok &= is_solution && member.bilinear_ok;
                Ok(Sample { member, is_solution })
            })
            .collect::<Result<Vec<_>, comeq::Error>>()?;
        families.push(SampledFamily { family, samples });
    }
    print_json(&FamiliesOut { regime, families })?;
    Ok(all_ok)
}

fn extend(a: PathBuf, ys: &[PathBuf]) -> Result<bool, CliError> {
    let a: RatMatrix = read_json(&a)?;
    let blocks = ys.iter().map(|p| read_json(p)).collect::<Result<Vec<RatMatrix>, _>>()?;
    let out = ladder::extend_diagonal_to_solution(&a, &blocks)?;
    let ok = matches!(out, ExtendOutcome::Extended { .. });
    print_json(&out)?;
    Ok(ok)
}

fn dims_cmd(args: &DimsArgs) -> Result<bool, CliError> {
    if let Some(scan) = &args.scan {
        let rep = dims::scan(scan[0], scan[1], &args.ratio, &args.include)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &rep.rows {
            w.serialize(row).map_err(|e| CliError::validation(e.to_string()))?;
        }
        let table = w.into_inner().map_err(|e| CliError::validation(e.to_string()))?;
        emit(String::from_utf8_lossy(&table).trim_end());
        for r in &rep.outside {
            emit(&format!(
                "# outside-ratio p={} q={} rho={} nu={} gap={}",
                r.p, r.q, r.rho, r.nu, r.gap
            ));
        }
        emit(&format!(
            "# summary couples={} exceptions={} fraction={} ({:.4}) table_mismatches={} out_of_band={}",
            rep.rows.len(),
            rep.exceptions,
            rational::format(&rep.exception_fraction),
            rep.fraction_f64(),
            rep.table_mismatches.len(),
            rep.out_of_band.len()
        ));
        return Ok(rep.table_mismatches.is_empty() && rep.out_of_band.is_empty());
    }
    let (p, q) = (args.p.expect("clap enforces"), args.q.expect("clap enforces"));
    let report = dims::nu(p, q).map_err(|e| CliError::validation(e.to_string()))?;
    print_json(&report)?;
    Ok(true)
}
