use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qodesign::cases::uav::{Parameters, UavTaskSpec};
use qodesign::cases::{tracking_bool_model, tracking_model, uav_cost_model, uav_powerset_model};
use qodesign::lax::{classify_cost_to_bool, CheckPolicy};
use qodesign::{Error, ModelDocument};

/// Evaluate co-design models written in the qodesign model format.
#[derive(Parser)]
#[command(name = "qodesign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    Tracking,
    TrackingBool,
    UavCost,
    UavPowerset,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model and evaluate every diagram and query in it.
    Validate {
        file: PathBuf,
        /// Also print cut widths and composition times.
        #[arg(long)]
        sizes: bool,
    },
    /// Evaluate one entry of a diagram.
    Query {
        file: PathBuf,
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        resource: String,
        #[arg(long)]
        functionality: String,
        /// Show the terms of the outermost series join.
        #[arg(long)]
        verbose: bool,
    },
    /// Run a declared sweep and print the table.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List the lax Cost→Bool maps on a finite grid of costs.
    ClassifyLax {
        /// Comma-separated costs; must contain 0 and inf.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Vec<String>,
    },
    /// Check the laxity of a declared map.
    LaxCheck {
        file: PathBuf,
        #[arg(long)]
        map: String,
        /// Random pairs sampled beyond the grid on infinite carriers.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Write one of the built-in case-study models.
    Generate {
        #[arg(value_enum)]
        case: Case,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn load(path: &PathBuf) -> Result<ModelDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(ModelDocument::parse(&text)?)
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { file, sizes } => {
            let doc = load(&file)?;
            doc.validate_all()?;
            println!(
                "ok: {} quantales, {} lax maps, {} categories, {} problems, {} diagrams, {} queries, {} sweeps",
                doc.quantale_names().len(),
                doc.lax_names().len(),
                doc.category_names().len(),
                doc.problem_names().len(),
                doc.diagram_names().len(),
                doc.queries().len(),
                doc.sweep_names().len()
            );
            for (d, r, f) in doc.queries() {
                let v = doc.run_query(d, r, f)?;
                let q = doc.evaluate(d)?.quantale().clone();
                println!("query {d} {r} {f} = {}", q.render_value(&v));
            }
            if sizes {
                for s in doc.size_report()? {
                    println!(
                        "{}: {} x {} objects, max cut {}, cuts {:?}, {:.3}s",
                        s.diagram, s.resources, s.functionalities, s.max_cut, s.cuts, s.seconds
                    );
                }
            }
        }
        Command::Query {
            file,
            diagram,
            resource,
            functionality,
            verbose,
        } => {
            let doc = load(&file)?;
            let q = doc.evaluate(&diagram)?.quantale().clone();
            let t = doc.explain_query(&diagram, &resource, &functionality)?;
            if verbose {
                if let Some(terms) = &t.terms {
                    for (m, v) in terms {
                        println!("via {m}: {}", q.render_value(v));
                    }
                }
            }
            println!("{}", q.render_value(&t.value));
        }
        Command::Sweep { file, spec, csv, json } => {
            let doc = load(&file)?;
            let table = doc.run_sweep(&spec)?;
            print!("{}", table.to_text());
            if let Some(p) = csv {
                write(&p, &table.to_csv()?)?;
            }
            if let Some(p) = json {
                write(&p, &table.to_json())?;
            }
        }
        Command::ClassifyLax { grid } => {
            let mut points = Vec::new();
            for g in &grid {
                let x = match g.trim() {
                    "inf" | "∞" => f64::INFINITY,
                    s => s.parse().map_err(|_| Failure::Usage(format!("`{s}` is not a cost")))?,
                };
                points.push(x);
            }
            for m in classify_cost_to_bool(&points)? {
                let cells: Vec<String> = points
                    .iter()
                    .zip(&m.table)
                    .map(|(x, b)| format!("{}↦{b}", qodesign::quantale::format_sig6(*x)))
                    .collect();
                println!("{:?}: {}", m.class, cells.join(" "));
            }
        }
        Command::LaxCheck { file, map, samples } => {
            let doc = load(&file)?;
            let m = doc.lax_map(&map)?;
            let report = m.check(&CheckPolicy {
                random_pairs: samples,
                ..CheckPolicy::default()
            });
            println!("{map}: {} -> {}: {report}", m.source().id(), m.target().id());
            if !report.verdict.is_lax() {
                return Err(Failure::Invalid(format!("`{map}` is not lax")));
            }
        }
        Command::Generate { case, output } => {
            let p = Parameters::shipped();
            let doc = match case {
                Case::Tracking => tracking_model()?,
                Case::TrackingBool => tracking_bool_model()?,
                Case::UavCost => uav_cost_model(&UavTaskSpec::default(), &p.actuators, &p.batteries)?,
                Case::UavPowerset => uav_powerset_model(&UavTaskSpec::coarse(), &p.actuators, &p.batteries)?,
            };
            match output {
                Some(path) => write(&path, &doc.render())?,
                None => print!("{}", doc.render()),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
