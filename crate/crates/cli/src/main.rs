use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use viability::dot::dot_graph;
use viability::gallery::{build_example, gallery_names};
use viability::homology::{gate_boundary_connectedness, OrderComplex};
use viability::instance::{emit_instance, parse_instance, Instance};
use viability::report::{run_report, ReportOptions, RunReport, REPORT_GATE_CAP};
use viability_cli::search::{run_search, Mode, SearchConfig};

#[derive(Parser)]
#[command(
    name = "viability",
    about = "Exact viability filtrations on finite topological models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the engine on an instance file and print a report.
    Analyze {
        path: PathBuf,
        /// Include the witness orbit.
        #[arg(long)]
        orbit: bool,
        /// Include the proposition checklist.
        #[arg(long)]
        propositions: bool,
        /// Include the step-count bound statements.
        #[arg(long)]
        bounds: bool,
        /// Include the first Betti number of the ambient space.
        #[arg(long)]
        betti: bool,
        /// Include the boundary-connectedness gate check.
        #[arg(long)]
        gate: bool,
        /// Write a layered Graphviz rendering to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Generate random instances and hunt for violations.
    Search {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long = "max-cells", default_value_t = 12)]
        max_cells: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Props)]
        mode: ModeArg,
        /// Directory for counterexample and finding dumps.
        #[arg(long = "dump-dir", default_value = ".")]
        dump_dir: PathBuf,
    },
    /// Work with the built-in catalogue of instances.
    Gallery {
        #[command(subcommand)]
        command: GalleryCommand,
    },
    /// Betti numbers and the gate property of an instance's space.
    Cohomology { path: PathBuf },
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// Print the catalogue names.
    List,
    /// Analyze a catalogue instance by name.
    Run {
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Write a catalogue instance to a file in the instance format.
    Export { name: String, path: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Props,
    Theorem4,
    Homotopy,
}

fn main() -> ExitCode {
    // Die quietly when the reader goes away (`viability ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Analyze {
            path,
            orbit,
            propositions,
            bounds,
            betti,
            gate,
            dot,
            json,
        } => {
            let instance = load(&path)?;
            let options = ReportOptions {
                orbit,
                propositions,
                bounds,
                betti,
                gate,
            };
            let report = run_report(&instance, options)?;
            if let Some(out) = dot {
                std::fs::write(&out, dot_graph(&instance.space, &report.viability))
                    .with_context(|| format!("writing {}", out.display()))?;
            }
            print_report(&report, json)?;
            Ok(exit_code(&report))
        }
        Command::Search {
            seed,
            instances,
            max_cells,
            mode,
            dump_dir,
        } => {
            let config = SearchConfig {
                seed,
                instances,
                max_cells,
                mode: match mode {
                    ModeArg::Props => Mode::Props,
                    ModeArg::Theorem4 => Mode::Theorem4,
                    ModeArg::Homotopy => Mode::Homotopy,
                },
                dump_dir,
            };
            let result = run_search(&config)?;
            print!("{}", result.summary);
            Ok(if result.violations > 0 {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Gallery { command } => match command {
            GalleryCommand::List => {
                for name in gallery_names() {
                    println!("{name}");
                }
                Ok(ExitCode::SUCCESS)
            }
            GalleryCommand::Run { name, json } => {
                let instance = Instance::from_gallery(&build_example(&name)?);
                let report = run_report(&instance, ReportOptions::everything())?;
                print_report(&report, json)?;
                Ok(exit_code(&report))
            }
            GalleryCommand::Export { name, path } => {
                let instance = Instance::from_gallery(&build_example(&name)?);
                std::fs::write(&path, emit_instance(&instance))
                    .with_context(|| format!("writing {}", path.display()))?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Cohomology { path } => {
            let instance = load(&path)?;
            let complex = OrderComplex::new(&instance.space);
            let (vertices, edges, triangles) = complex.counts();
            println!("cells: {}", instance.space.len());
            println!("order complex: {vertices} vertices, {edges} edges, {triangles} triangles");
            println!("betti0: {}", complex.b0());
            println!("betti1: {}", complex.b1());
            match gate_boundary_connectedness(&instance.space, REPORT_GATE_CAP) {
                Ok(gate) if gate.holds => println!("gate: holds"),
                Ok(gate) => {
                    let witness = gate
                        .counterexample
                        .map(|s| {
                            s.iter()
                                .map(|x| instance.space.name(x).to_string())
                                .collect::<Vec<_>>()
                                .join(" ")
                        })
                        .unwrap_or_default();
                    println!("gate: fails at open set {witness}");
                }
                Err(reason) => println!("gate: skipped ({reason})"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load(path: &PathBuf) -> anyhow::Result<Instance> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (instance, warnings) =
        parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    Ok(instance)
}

fn print_report(report: &RunReport, json: bool) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(&report.json())?);
    } else {
        print!("{}", report.text());
    }
    Ok(())
}

fn exit_code(report: &RunReport) -> ExitCode {
    if report.falsified() {
        ExitCode::from(3)
    } else if report.mismatched() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
