use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use srlab::acceptance::run_all;
use srlab::partition::SubdivisionStructure;
use srlab::simplicial::{builtin_complex, parse_complex_json, RelativeComplex, BUILTIN_NAMES};
use srlab::verdicts::{self, LefschetzMode, RunParams, TheoremReport, Verdict};
use srlab::{PrimeField, SrError, DEFAULT_PRIME};

#[derive(Parser, Debug)]
#[command(name = "sr-lab", version, about = "Face rings, partition complexes and Lefschetz checks over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Complex JSON file or `builtin:<name>`
    #[arg(long, global = true)]
    input: Option<String>,

    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,

    /// Largest degree for graded tables; defaults to dim + 2
    #[arg(long, global = true)]
    max_degree: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Lefschetz variant: strong, almost or subdivision
    #[arg(long, global = true, default_value = "strong")]
    mode: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// f- and h-vectors
    Fvec,
    /// Reduced relative cohomology
    Cohomology,
    /// Hilbert function of the face module
    Hilbert,
    /// Sample linear systems of parameters
    Lsop,
    /// Depth via Koszul homology
    Depth,
    /// Cohen–Macaulay test, checked against the link condition by `reisner`
    Cm,
    /// Topological against algebraic Cohen–Macaulayness
    Reisner,
    /// Cohomology of the partition complex
    PartitionHomology,
    /// Partition of unity for P*/Θ
    Pou,
    /// Cohomology of the total complex of P ⊗ K
    Tot,
    /// Quotient dimensions against h and Betti numbers
    Schenzel,
    /// Poincaré duality of B
    Pd,
    /// Palindromic h and B
    DehnSommerville,
    /// Lefschetz property (`--mode strong|almost|subdivision`)
    Lefschetz,
    /// Kühnel's inequality
    Kuhnel,
    /// Kernel of the first map of the subdivision partition complex
    SubdivCheck,
    /// Interior partition complex of a disk (Δ, ∂Δ)
    Interior,
    /// Injectivity of A(st°_v) into A and B
    Injectivity,
    /// A(st_v)_j ≅ A(st°_v)_{j+1}
    ConeLemma {
        /// Vertex label; all vertices when omitted
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Run the acceptance suite
    Corpus,
    /// List builtin complexes
    Builtins,
}

fn read_input(spec: &str) -> Result<String, SrError> {
    std::fs::read_to_string(Path::new(spec)).map_err(|e| SrError::Input(format!("{spec}: {e}")))
}

fn load_complex(input: Option<&str>) -> Result<RelativeComplex, SrError> {
    let spec = input.ok_or_else(|| SrError::Input("--input is required".into()))?;
    match spec.strip_prefix("builtin:") {
        Some(name) => builtin_complex(name),
        None => parse_complex_json(&read_input(spec)?).map_err(|e| SrError::Input(format!("{spec}: {e}"))),
    }
}

/// A subdivision file, or `builtin:barycentric(<complex>)` for the
/// barycentric subdivision of a builtin with one cell per face.
fn load_subdivision(input: Option<&str>) -> Result<SubdivisionStructure, SrError> {
    let spec = input.ok_or_else(|| SrError::Input("--input is required".into()))?;
    match spec.strip_prefix("builtin:") {
        Some(name) => {
            let inner = name
                .strip_prefix("barycentric(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| SrError::Input(format!("{name:?}: expected barycentric(<builtin>)")))?;
            SubdivisionStructure::barycentric_of(&builtin_complex(inner)?.delta)
        }
        None => SubdivisionStructure::parse(&read_input(spec)?).map_err(|e| SrError::Input(format!("{spec}: {e}"))),
    }
}

fn run(cli: &Cli) -> Result<TheoremReport, SrError> {
    let field = PrimeField::new(cli.prime).map_err(|_| SrError::Input(format!("{} is not a prime", cli.prime)))?;
    let params = RunParams::new(field, cli.seed, cli.trials);
    let input = cli.input.as_deref();
    let max_degree = |psi: &RelativeComplex| cli.max_degree.unwrap_or_else(|| (psi.dim().unwrap_or(-1) + 2).max(0) as usize);
    let report = match &cli.command {
        Command::SubdivCheck => verdicts::subdivision_report(&load_subdivision(input)?, &params),
        Command::Lefschetz => {
            let mode: LefschetzMode = cli.mode.parse()?;
            if mode == LefschetzMode::Subdivision {
                let s = load_subdivision(input)?;
                let psi = RelativeComplex::absolute(s.delta().clone());
                verdicts::lefschetz_report(&psi, mode, Some(&s), &params)
            } else {
                verdicts::lefschetz_report(&load_complex(input)?, mode, None, &params)
            }
        }
        command => {
            let psi = load_complex(input)?;
            match command {
                Command::Fvec => verdicts::fvec_report(&psi, &params),
                Command::Cohomology => verdicts::cohomology_report(&psi, &params),
                Command::Hilbert => verdicts::hilbert_report(&psi, max_degree(&psi), &params),
                Command::Lsop => verdicts::lsop_report(&psi, &params),
                Command::Depth => verdicts::depth_report(&psi, &params),
                Command::Cm => verdicts::cm_report(&psi, &params),
                Command::Reisner => verdicts::reisner_report(&psi, &params),
                Command::PartitionHomology => verdicts::partition_homology_report(&psi, max_degree(&psi), &params),
                Command::Pou => verdicts::partition_of_unity_report(&psi, &params),
                Command::Tot => verdicts::total_complex_report(&psi, &params),
                Command::Schenzel => verdicts::schenzel_report(&psi, &params),
                Command::Pd => verdicts::pd_report(&psi, &params),
                Command::DehnSommerville => verdicts::dehn_sommerville_report(&psi, &params),
                Command::Kuhnel => verdicts::kuhnel_report(&psi, &params),
                Command::Interior => verdicts::interior_report(&psi, &params),
                Command::Injectivity => verdicts::injectivity_report(&psi, &params),
                Command::ConeLemma { vertex } => {
                    let v = match vertex {
                        Some(label) => Some(
                            psi.labels()
                                .iter()
                                .position(|l| l == label)
                                .ok_or_else(|| SrError::Input(format!("no vertex labelled {label:?}")))?,
                        ),
                        None => None,
                    };
                    verdicts::cone_lemma_report(&psi, v, &params)
                }
                Command::SubdivCheck | Command::Lefschetz | Command::Corpus | Command::Builtins => unreachable!(),
            }
        }
    };
    Ok(report)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => format!("({})", items.iter().map(cell).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

fn render_text(r: &TheoremReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("theorem: {}\ninput:   {}\nprime:   {}\nseeds:   {:?}\n", r.theorem, r.input_hash, r.prime, r.seeds));
    for t in &r.tables {
        out.push_str(&format!("\n[{}]\n", t.name));
        let rows: Vec<Vec<String>> = t.rows.iter().map(|row| row.iter().map(cell).collect()).collect();
        let widths: Vec<usize> = t
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| rows.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(t.columns.iter().map(String::as_str).collect()));
        for row in &rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
    }
    let verdict = serde_json::to_value(r.verdict).unwrap();
    out.push_str(&format!("\nverdict: {}\n", verdict.as_str().unwrap()));
    for d in &r.diagnostics {
        out.push_str(&format!("note: {d}\n"));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Builtins => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            return ExitCode::SUCCESS;
        }
        Command::Corpus => {
            let results = run_all();
            if cli.format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&results).expect("serializable"));
            } else {
                for r in &results {
                    println!("{}", r.line());
                }
            }
            return if results.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
        _ => {}
    }
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", render_text(&report)),
            }
            ExitCode::from(match report.verdict {
                Verdict::Holds => 0,
                Verdict::Fails => 1,
                Verdict::Inconclusive => 3,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
