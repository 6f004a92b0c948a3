//! `sfselect`: structural fixed-mode checks and sparsest feedback
//! selection on JSON instance files.

use clap::{Parser, Subcommand};
use serde::Serialize;
use sfselect_cli::{dot, instance};
use sfselect_core::{
    augment_strong_connectivity, brute_force_min_feedback, build_closed_loop_digraph,
    build_state_digraph, check_assumption, check_no_sfm, generate_random_system,
    select_sparsest_feedback, FeedbackPattern, SelectionCase,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sfselect",
    version,
    about = "Structural fixed-mode checks and sparsest feedback selection"
)]
struct Cli {
    /// Print only the one-line verdict.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the closed loop has structurally fixed modes
    /// (the instance must carry a k pattern).
    CheckSfm { file: PathBuf },
    /// Compute a sparsest feedback pattern avoiding fixed modes
    /// (needs identity input/output patterns and a cyclic state pattern).
    Select { file: PathBuf },
    /// Minimum edge additions making the state digraph strongly
    /// connected.
    Augment { file: PathBuf },
    /// Report the dedicated-input/output and structural-cyclicity checks.
    IsCyclic { file: PathBuf },
    /// Exhaustive minimum-cardinality search for small instances.
    Oracle {
        file: PathBuf,
        /// Largest cardinality to try (default: every link).
        #[arg(long = "max-card")]
        max_card: Option<usize>,
    },
    /// Render the instance as DOT text.
    ExportDot {
        file: PathBuf,
        /// Include input/output vertices and feedback edges.
        #[arg(long = "closed-loop")]
        closed_loop: bool,
        /// Where to write the DOT text.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Generate a random instance with dedicated inputs and outputs.
    Gen {
        /// Number of states.
        #[arg(long)]
        n: usize,
        /// Probability of each off-diagonal state entry.
        #[arg(long = "p")]
        prob: f64,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Where to write the instance file.
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct CheckSfmOutput {
    no_sfm: bool,
    condition_a: bool,
    condition_b: bool,
    violating_states: Vec<usize>,
    cycle_cover: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct SelectOutput {
    cardinality: usize,
    case: &'static str,
    k: Vec<[usize; 2]>,
    added_state_edges: Option<Vec<[usize; 2]>>,
}

#[derive(Serialize)]
struct AugmentOutput {
    already_strongly_connected: bool,
    added_edges: Vec<[usize; 2]>,
    source_components: usize,
    sink_components: usize,
    isolated_components: usize,
}

#[derive(Serialize)]
struct IsCyclicOutput {
    structurally_cyclic: bool,
    b_is_identity: bool,
    c_is_identity: bool,
    all_hold: bool,
}

#[derive(Serialize)]
struct OracleOutput {
    min_cardinality: Option<usize>,
    all_optima: Vec<Vec<[usize; 2]>>,
    explored: usize,
}

#[derive(Serialize)]
struct ExportDotOutput {
    path: String,
    nodes: usize,
    edges: usize,
    feedback_edges: usize,
}

#[derive(Serialize)]
struct GenOutput {
    path: String,
    n: usize,
    m: usize,
    p: usize,
    a_nnz: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::CheckSfm { file } => {
            let inst = load(&file)?;
            let k = inst
                .k
                .ok_or("check-sfm needs a k pattern in the instance file")?;
            let report = check_no_sfm(&inst.system, &k).map_err(|e| e.to_string())?;
            let sd = build_closed_loop_digraph(&inst.system, &k).map_err(|e| e.to_string())?;
            let output = CheckSfmOutput {
                no_sfm: report.no_sfm,
                condition_a: report.condition_a,
                condition_b: report.condition_b,
                violating_states: report.violating_states_a.iter().map(|&i| i + 1).collect(),
                cycle_cover: report.cycle_cover_witness.as_ref().map(|cycles| {
                    cycles
                        .iter()
                        .map(|cycle| cycle.iter().map(|&v| sd.vertex_name(v)).collect())
                        .collect()
                }),
            };
            emit(cli.quiet, &output, format!("no_sfm: {}", report.no_sfm));
            Ok(verdict_code(report.no_sfm))
        }
        Command::Select { file } => {
            let inst = load(&file)?;
            let r = select_sparsest_feedback(&inst.system).map_err(|e| e.to_string())?;
            let output = SelectOutput {
                cardinality: r.cardinality(),
                case: match r.case() {
                    SelectionCase::Irreducible => "irreducible",
                    SelectionCase::Reducible => "reducible",
                },
                k: one_based(r.k().entries()),
                added_state_edges: r
                    .augmentation()
                    .map(|a| one_based(a.added_edges().iter().copied())),
            };
            emit(
                cli.quiet,
                &output,
                format!("cardinality: {}", output.cardinality),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Augment { file } => {
            let inst = load(&file)?;
            let g = build_state_digraph(inst.system.a()).map_err(|e| e.to_string())?;
            let r = augment_strong_connectivity(&g).map_err(|e| e.to_string())?;
            let output = AugmentOutput {
                already_strongly_connected: r.added_edges().is_empty(),
                added_edges: one_based(r.added_edges().iter().copied()),
                source_components: r.source_components(),
                sink_components: r.sink_components(),
                isolated_components: r.isolated_components(),
            };
            emit(
                cli.quiet,
                &output,
                format!("added_edges: {}", output.added_edges.len()),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::IsCyclic { file } => {
            let inst = load(&file)?;
            let verdict = check_assumption(&inst.system);
            let output = IsCyclicOutput {
                structurally_cyclic: verdict.structurally_cyclic,
                b_is_identity: verdict.b_is_identity,
                c_is_identity: verdict.c_is_identity,
                all_hold: verdict.all_hold(),
            };
            emit(
                cli.quiet,
                &output,
                format!("structurally_cyclic: {}", verdict.structurally_cyclic),
            );
            Ok(verdict_code(verdict.structurally_cyclic))
        }
        Command::Oracle { file, max_card } => {
            let inst = load(&file)?;
            let bound = max_card
                .unwrap_or_else(|| inst.system.input_count() * inst.system.output_count());
            let r = brute_force_min_feedback(&inst.system, bound).map_err(|e| e.to_string())?;
            let output = OracleOutput {
                min_cardinality: r.min_cardinality,
                all_optima: r
                    .all_optima
                    .iter()
                    .map(|k| one_based(k.entries()))
                    .collect(),
                explored: r.explored,
            };
            let verdict = match r.min_cardinality {
                Some(c) => format!("min_cardinality: {c}"),
                None => "min_cardinality: none".to_string(),
            };
            emit(cli.quiet, &output, verdict);
            Ok(verdict_code(r.min_cardinality.is_some()))
        }
        Command::ExportDot {
            file,
            closed_loop,
            out,
        } => {
            let inst = load(&file)?;
            let (m, p) = (inst.system.input_count(), inst.system.output_count());
            let k = match inst.k {
                Some(k) => k,
                None => FeedbackPattern::zeros(m, p).map_err(|e| e.to_string())?,
            };
            let sd = build_closed_loop_digraph(&inst.system, &k).map_err(|e| e.to_string())?;
            let text = dot::export_dot(&sd, closed_loop);
            std::fs::write(&out, &text)
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            let output = ExportDotOutput {
                path: out.display().to_string(),
                nodes: if closed_loop {
                    sd.vertex_count()
                } else {
                    sd.state_count()
                },
                edges: if closed_loop {
                    sd.graph().edge_count()
                } else {
                    inst.system.a().nnz()
                },
                feedback_edges: if closed_loop { k.cardinality() } else { 0 },
            };
            emit(cli.quiet, &output, format!("wrote: {}", out.display()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gen { n, prob, seed, out } => {
            let sys = generate_random_system(n, prob, seed).map_err(|e| e.to_string())?;
            let file_form = instance::canonical_file(&sys, None);
            instance::save(&out, &file_form).map_err(|e| e.to_string())?;
            let output = GenOutput {
                path: out.display().to_string(),
                n: sys.state_count(),
                m: sys.input_count(),
                p: sys.output_count(),
                a_nnz: sys.a().nnz(),
            };
            emit(cli.quiet, &output, format!("wrote: {}", out.display()));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &Path) -> Result<instance::Instance, String> {
    instance::load(path).map_err(|e| e.to_string())
}

fn one_based(pairs: impl Iterator<Item = (usize, usize)>) -> Vec<[usize; 2]> {
    pairs.map(|(a, b)| [a + 1, b + 1]).collect()
}

fn emit<T: Serialize>(quiet: bool, value: &T, verdict: String) {
    if quiet {
        println!("{verdict}");
    } else {
        let json = serde_json::to_string_pretty(value).expect("output is serializable");
        println!("{json}");
    }
}

fn verdict_code(positive: bool) -> ExitCode {
    if positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
