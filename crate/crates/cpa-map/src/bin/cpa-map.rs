//! Command-line front end: reads a model file and an optional evidence
//! file, runs MAP inference, and writes the MAP state as one ground atom
//! per line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cpa_map::error::Error;
use cpa_map::{
    export_lp, first_iteration_ilp, parse_evidence, parse_mln, solve_map, AtomTable, EngineConfig,
    EvidenceSet,
};

#[derive(Parser, Debug)]
#[command(
    name = "cpa-map",
    about = "MAP inference for Markov logic networks via cutting-plane ILP"
)]
struct Cli {
    /// Model file: domains, predicates, and weighted clauses.
    #[arg(short = 'i', long = "input")]
    input: PathBuf,

    /// Evidence file: one signed ground atom per line.
    #[arg(short = 'e', long = "evidence")]
    evidence: Option<PathBuf>,

    /// Output file for the MAP state (one true atom per line).
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,

    /// Translate each grounding individually instead of aggregating.
    #[arg(long = "no-cpa")]
    no_cpa: bool,

    /// Relative optimality gap in [0, 1); 0 solves exactly.
    #[arg(long = "gap", default_value_t = 0.0)]
    gap: f64,

    /// Worker threads for grounding and aggregation.
    #[arg(long = "threads")]
    threads: Option<usize>,

    /// Stop after this many refinement rounds.
    #[arg(long = "max-iterations")]
    max_iterations: Option<u64>,

    /// Random seed (the pipeline is deterministic; kept for stability).
    #[arg(long = "seed", default_value_t = 0)]
    seed: u64,

    /// Write the integer linear program in LP format to this path.
    #[arg(long = "export-lp")]
    export_lp: Option<PathBuf>,

    /// Only build and export the first-round ILP; skip solving.
    #[arg(long = "export-only", requires = "export_lp")]
    export_only: bool,

    /// Print run statistics to stderr.
    #[arg(long = "stats")]
    stats: bool,
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    if !(0.0..1.0).contains(&cli.gap) {
        eprintln!("error: --gap must lie in [0, 1)");
        return Ok(ExitCode::from(2));
    }
    if cli.output.is_none() && !cli.export_only {
        eprintln!("error: --output is required unless --export-only is given");
        return Ok(ExitCode::from(2));
    }

    let model_text = std::fs::read_to_string(&cli.input)?;
    let model = parse_mln(&model_text)?;
    let atoms = AtomTable::new(&model)?;
    let evidence = match &cli.evidence {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            parse_evidence(&text, &model, &atoms)?
        }
        None => EvidenceSet::empty(&atoms),
    };

    let config = EngineConfig {
        use_cpa: !cli.no_cpa,
        gap: cli.gap,
        max_iterations: cli.max_iterations,
        workers: cli
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
        seed: cli.seed,
        merge_groups: false,
    };

    if cli.export_only {
        let ilp = first_iteration_ilp(&model, &atoms, &evidence, &config)?;
        let path = cli.export_lp.as_ref().expect("required by clap");
        std::fs::write(path, export_lp(&ilp))?;
        return Ok(ExitCode::SUCCESS);
    }

    let result = solve_map(&model, &atoms, &evidence, &config)?;

    if let Some(path) = &cli.export_lp {
        std::fs::write(path, export_lp(&result.ilp))?;
    }
    if cli.stats {
        eprint!("{}", result.report);
    }

    let mut lines: Vec<String> = (0..atoms.len() as u32)
        .map(cpa_map::AtomId)
        .filter(|&a| result.interpretation.is_true(a))
        .map(|a| atoms.render(&model, a))
        .collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    std::fs::write(cli.output.as_ref().expect("checked above"), out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Error::Solve(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
