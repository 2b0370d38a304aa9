use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hypernorm::bounds::{bounds_report, BoundsReport};
use hypernorm::hypergraph::{
    bound_degree_product, bound_neighbor_degree, gen_all_ones, gen_beta_star, gen_cycle, gen_random, gen_star,
    lower_hofmeister, WeightedRGraph,
};
use hypernorm::io::{document_from_json, format_f64, graph_from_json, graph_to_json, tensor_to_json, to_json};
use hypernorm::spectral::{eta_p, rho_nonnegative, spectral_p_norm};
use hypernorm::verify::{run_suite, Suite};
use hypernorm::{symmetrant, SolverOptions, SpectralResult, Tensor};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "hypernorm",
    version,
    about = "Spectral p-norms and p-spectral radii of hypermatrices and hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral p-norm of a tensor (or a graph's adjacency tensor).
    Norm(SolveArgs),
    /// p-spectral radius of a symmetric tensor.
    Eta(SolveArgs),
    /// Spectral radius of a nonnegative cubical tensor.
    Rho {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form lower and upper bounds.
    Bounds {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        with_estimate: bool,
        #[command(flatten)]
        solver: SolverFlags,
        #[arg(long)]
        json: bool,
    },
    /// Writes the symmetrant of a tensor.
    Symmetrant {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Graph conversions and graph bounds.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Generates instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Runs an invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        starts: Option<usize>,
        /// Writes the per-check log as CSV ("-" for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct SolveArgs {
    #[arg(default_value = "-")]
    file: PathBuf,
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SolverFlags {
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Runs starts on one thread.
    #[arg(long)]
    sequential: bool,
}

impl SolverFlags {
    fn options(&self) -> Result<SolverOptions> {
        let mut opts = SolverOptions::default();
        if let Some(s) = self.starts {
            opts.starts = s;
        }
        if let Some(s) = self.seed {
            opts.seed = s;
        }
        if let Some(t) = self.tol {
            opts.tol = t;
        }
        if let Some(m) = self.max_iter {
            opts.max_iter = m;
        }
        if self.sequential {
            opts = opts.sequential();
        }
        opts.validate()?;
        Ok(opts)
    }
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Writes the adjacency tensor of a graph.
    Tensor {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Degree bounds plus the tensor bounds of the adjacency tensor.
    Bounds {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        with_estimate: bool,
        #[command(flatten)]
        solver: SolverFlags,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GenOutput {
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Writes rgraph-v1 instead of the adjacency tensor.
    #[arg(long)]
    as_graph: bool,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Star K_{1,n}.
    Star {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// r-graph whose k edges share exactly one common vertex.
    BetaStar {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// All-ones cubical tensor.
    AllOnes {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cycle C_n.
    Cycle {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// Random r-graph keeping each r-set with probability `density`.
    Random {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        weighted: bool,
        #[command(flatten)]
        out: GenOutput,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: hypernorm::Error| e.to_string())
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_tensor(path: &Path) -> Result<Tensor> {
    Ok(document_from_json(&read_input(path)?)?.into_tensor())
}

fn read_graph(path: &Path) -> Result<WeightedRGraph> {
    Ok(graph_from_json(&read_input(path)?)?)
}

fn write_output(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) if path != Path::new("-") => {
            fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))
        }
        _ => match writeln!(io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            other => other.context("writing standard output"),
        },
    }
}

/// Rounds to 6 decimals for table output.
fn short(v: f64) -> String {
    if !(v.is_finite() && v.abs() < 1e15) {
        return format_f64(v);
    }
    let s = format!("{:.6}", v);
    let s = s.trim_end_matches('0');
    if s.ends_with('.') {
        format!("{s}0")
    } else {
        s.to_string()
    }
}

fn print_result(res: &SpectralResult, json: bool) {
    if json {
        println!("{}", to_json(res));
        return;
    }
    println!("value       {}", short(res.value));
    println!("p           {}", short(res.p));
    println!("converged   {}", res.converged);
    println!("iterations  {}", res.iterations);
    println!("starts      {}", res.starts);
    if let Some((lo, hi)) = res.bracket {
        println!("bracket     [{}, {}]", short(lo), short(hi));
    }
    for (k, x) in res.witness.vectors().iter().enumerate() {
        let parts: Vec<String> = x.iter().map(|&v| short(v)).collect();
        println!("x{k:<10} [{}]", parts.join(", "));
    }
}

fn print_bounds(report: &BoundsReport) {
    for b in &report.lower {
        println!("lower  {:<16} {}", b.name, short(b.value));
    }
    for b in &report.upper {
        println!("upper  {:<16} {}", b.name, short(b.value));
    }
    if let Some(est) = report.estimate {
        println!("estimate                {}", short(est));
    }
    for v in &report.violations {
        println!("violation  {v}");
    }
}

#[derive(Serialize)]
struct GraphBounds {
    degree_product: f64,
    neighbor_degree: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    hofmeister: Option<f64>,
    tensor: BoundsReport,
}

fn gen_graph(graph: WeightedRGraph, out: &GenOutput) -> Result<()> {
    let text = if out.as_graph { graph_to_json(&graph) } else { tensor_to_json(&graph.adjacency_tensor()) };
    write_output(out.output.as_deref(), &text)
}

/// Returns whether verification passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Norm(args) => {
            let opts = args.solver.options()?;
            let a = read_tensor(&args.file)?;
            print_result(&spectral_p_norm(&a, args.p, &opts)?, args.json);
        }
        Command::Eta(args) => {
            let opts = args.solver.options()?;
            let a = read_tensor(&args.file)?;
            print_result(&eta_p(&a, args.p, &opts)?, args.json);
        }
        Command::Rho { file, solver, json } => {
            let opts = solver.options()?;
            print_result(&rho_nonnegative(&read_tensor(&file)?, &opts)?, json);
        }
        Command::Bounds { file, p, with_estimate, solver, json } => {
            let opts = solver.options()?;
            let report = bounds_report(&read_tensor(&file)?, p, &opts, with_estimate)?;
            if json {
                println!("{}", to_json(&report));
            } else {
                print_bounds(&report);
            }
        }
        Command::Symmetrant { file, output } => {
            let (s, _) = symmetrant(&read_tensor(&file)?);
            write_output(output.as_deref(), &tensor_to_json(&s))?;
        }
        Command::Graph(GraphCommand::Tensor { file, output }) => {
            write_output(output.as_deref(), &tensor_to_json(&read_graph(&file)?.adjacency_tensor()))?;
        }
        Command::Graph(GraphCommand::Bounds { file, p, with_estimate, solver, json }) => {
            let opts = solver.options()?;
            let g = read_graph(&file)?;
            let report = GraphBounds {
                degree_product: bound_degree_product(&g),
                neighbor_degree: bound_neighbor_degree(&g),
                hofmeister: (p >= g.r() as f64).then(|| lower_hofmeister(&g, p)).transpose()?,
                tensor: bounds_report(&g.adjacency_tensor(), p, &opts, with_estimate)?,
            };
            if json {
                println!("{}", to_json(&report));
            } else {
                println!("upper  {:<16} {}", "degree_product", short(report.degree_product));
                println!("upper  {:<16} {}", "neighbor_degree", short(report.neighbor_degree));
                if let Some(h) = report.hofmeister {
                    println!("lower  {:<16} {}", "hofmeister", short(h));
                }
                print_bounds(&report.tensor);
            }
        }
        Command::Gen(cmd) => match cmd {
            GenCommand::Star { n, out } => gen_graph(gen_star(n)?, &out)?,
            GenCommand::BetaStar { r, k, out } => gen_graph(gen_beta_star(r, k)?, &out)?,
            GenCommand::Cycle { n, out } => gen_graph(gen_cycle(n)?, &out)?,
            GenCommand::Random { r, n, density, seed, weighted, out } => {
                gen_graph(gen_random(r, n, density, seed, weighted)?, &out)?
            }
            GenCommand::AllOnes { r, n, output } => {
                write_output(output.as_deref(), &tensor_to_json(&gen_all_ones(r, n)?))?
            }
        },
        Command::Verify { suite, trials, seed, starts, csv, json } => {
            let mut opts = SolverOptions::default();
            if let Some(s) = starts {
                opts.starts = s;
            }
            let report = run_suite(suite, trials, seed, &opts)?;
            if let Some(path) = &csv {
                let text = report.to_csv();
                write_output(Some(path), text.trim_end())?;
            }
            if json {
                println!("{}", to_json(&report));
            } else if csv.as_deref() != Some(Path::new("-")) {
                let failed = report.failures().count();
                println!("suite {suite}: {} checks, {failed} failed", report.records.len());
                for r in report.failures().take(20) {
                    eprintln!(
                        "FAIL trial {} seed {} {}: lhs {} rhs {} gap {}",
                        r.trial, r.seed, r.quantity, r.lhs, r.rhs, r.gap
                    );
                }
            }
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
