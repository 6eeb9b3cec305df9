use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use treepack::graph::{generate, holes, io as graph_io};
use treepack::packing::PackingExport;
use treepack::scenario::{self, Scenario};
use treepack::verify::check_packing;
use treepack::Graph;

#[derive(Parser)]
#[command(name = "treepack", about = "Pack bounded-degree trees into dense hosts and audit the result")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario (smoke, planted, holes-gnp).
    Run {
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write the host, hub reserve and packing for `audit`.
        #[arg(long)]
        export: bool,
    },
    /// Check a packing against a host graph.
    Audit {
        graph: PathBuf,
        packing: PathBuf,
        /// Hub reserve whose edges connector images may also use.
        #[arg(long)]
        hub: Option<PathBuf>,
    },
    /// Generate a graph: gnp N P | complete N | complete-bipartite A B |
    /// two-cliques M | unbalanced N XI | ternary HEIGHT.
    Gen {
        family: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bi-independence number: exact, or sampled evidence for a bound `r`.
    AlphaTilde {
        graph: PathBuf,
        #[arg(long, conflicts_with = "sample")]
        exact: bool,
        /// `r trials`
        #[arg(long, num_args = 2, value_names = ["R", "TRIALS"])]
        sample: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means the command ran but its audit failed.
fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Run { scenario, seed, out, export } => run(&scenario, seed, &out, export),
        Command::Audit { graph, packing, hub } => audit(&graph, &packing, hub.as_deref()),
        Command::Gen { family, params, seed, out } => {
            let g = generate_graph(&family, &params, seed)?;
            let text = graph_io::to_string(&g);
            match out {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => io::stdout().write_all(text.as_bytes())?,
            }
            Ok(true)
        }
        Command::AlphaTilde { graph, exact, sample, seed } => {
            let g = read_graph(&graph)?;
            match sample {
                Some(v) if !exact => {
                    let verdict = holes::bi_independence_upper_sample(&g, v[0], v[1], seed)?;
                    println!("{}", serde_json::to_string_pretty(&verdict)?);
                }
                _ => println!("{}", holes::bi_independence_exact(&g)?),
            }
            Ok(true)
        }
    }
}

fn run(name: &str, seed: Option<u64>, out: &Path, export: bool) -> Result<bool> {
    let mut sc = if Path::new(name).is_file() {
        let text = fs::read_to_string(name).with_context(|| format!("reading {name}"))?;
        Scenario::parse(&text)?
    } else if let Some(sc) = Scenario::builtin(name) {
        sc
    } else {
        bail!("{name} is neither a scenario file nor a built-in scenario");
    };
    if let Some(seed) = seed {
        sc.seed = seed;
    }
    let a = scenario::run(&sc)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let stem = format!("{}_{}", sc.name, sc.seed);
    let write = |suffix: &str, body: &str| -> Result<()> {
        let path = out.join(format!("{stem}{suffix}"));
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
    };
    write("_report.json", &a.report_json)?;
    let mut csv = format!("{}\n", a.csv_header);
    for row in &a.csv_rows {
        csv.push_str(row);
        csv.push('\n');
    }
    write(".csv", &csv)?;
    write("_failures.jsonl", &a.failures_jsonl)?;
    if export && !a.packing_json.is_empty() {
        write("_host.graph", &a.host_graph)?;
        write("_hub.graph", &a.hub_graph)?;
        write("_packing.json", &a.packing_json)?;
    }
    print!("{csv}");
    if !a.passed {
        eprintln!("audit failed, see {stem}_report.json");
    }
    Ok(a.passed)
}

fn audit(graph: &Path, packing: &Path, hub: Option<&Path>) -> Result<bool> {
    let g = read_graph(graph)?;
    let hub = match hub {
        Some(p) => read_graph(p)?,
        None => Graph::new(g.n())?,
    };
    let text = fs::read_to_string(packing).with_context(|| format!("reading {}", packing.display()))?;
    let export: PackingExport = serde_json::from_str(&text).with_context(|| format!("parsing {}", packing.display()))?;
    let report = check_packing(&g, &hub, &export.trees, &export.hub_vertices);
    println!("{}", serde_json::to_string_pretty(&report)?);
    if !report.is_valid() {
        eprintln!(
            "audit failed: {} duplicated edges, {} invalid images",
            report.duplicated_edges.len(),
            report.invalid_images.len()
        );
    }
    Ok(report.is_valid())
}

fn read_graph(path: &Path) -> Result<Graph> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    graph_io::read_graph(BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

fn generate_graph(family: &str, params: &[String], seed: u64) -> Result<Graph> {
    let arity = |k: usize| -> Result<()> {
        if params.len() != k {
            bail!("{family} takes {k} parameters, got {}", params.len());
        }
        Ok(())
    };
    let int = |i: usize| -> Result<usize> { params[i].parse().with_context(|| format!("bad integer {:?}", params[i])) };
    let real = |i: usize| -> Result<f64> { params[i].parse().with_context(|| format!("bad number {:?}", params[i])) };
    let g = match family {
        "gnp" => {
            arity(2)?;
            generate::erdos_renyi(int(0)?, real(1)?, seed)?
        }
        "complete" => {
            arity(1)?;
            generate::complete(int(0)?)?
        }
        "complete-bipartite" => {
            arity(2)?;
            generate::complete_bipartite(int(0)?, int(1)?)?
        }
        "two-cliques" => {
            arity(1)?;
            generate::two_cliques(int(0)?)?
        }
        "unbalanced" => {
            arity(2)?;
            generate::unbalanced_noisy_bipartite(int(0)?, real(1)?, seed)?
        }
        "ternary" => {
            arity(1)?;
            generate::ternary_tree(params[0].parse().with_context(|| format!("bad height {:?}", params[0]))?)?
        }
        _ => bail!("unknown family {family}"),
    };
    Ok(g)
}
