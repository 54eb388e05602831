use std::io::Read;
use std::process::ExitCode;

use amply_cli::{hgraph, report, search_amply, verify, Verdict};
use amply::generators::{gen_hamming_with_limit, gen_hypercube_with_limit};
use amply::spectral::{adjacency_spectrum_in, DEFAULT_SPECTRUM_CAP};
use amply::*;
use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Stdout writes that end the process quietly when the reader hangs up.
macro_rules! print {
    ($($t:tt)*) => {
        emit(format_args!($($t)*))
    };
}

macro_rules! println {
    ($($t:tt)*) => {
        emit(format_args!("{}\n", format_args!($($t)*)))
    };
}

fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

#[derive(Parser)]
#[command(name = "amply", version, about = "Curvature, diameter and eigenvalue checks for amply regular graphs")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for per-edge work (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Reserved; no command uses randomness
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest vertex count accepted for generated or loaded graphs
    #[arg(long, global = true, default_value_t = generators::DEFAULT_SIZE_LIMIT)]
    size_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated graph as an edge list
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Detect amply regular parameters (n,d,α,β)
    Params { input: String },
    /// Lin–Lu–Yau curvature, or κ_p with --p
    Curvature {
        input: String,
        #[arg(long, num_args = 2, value_names = ["U", "V"], conflicts_with = "all")]
        edge: Option<Vec<usize>>,
        #[arg(long)]
        all: bool,
        /// Idleness for Ollivier κ_p, as num/den
        #[arg(long)]
        p: Option<Rational>,
    },
    /// Run every applicable bound and print a report
    Verify { input: String },
    /// Dump the transport-bipartite graph of an edge
    Hgraph {
        input: String,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Option<Vec<usize>>,
    },
    /// Adjacency eigenvalues
    Spectrum { input: String },
    /// Diameter and girth
    Diameter { input: String },
    /// Exhaustive search for an amply regular graph (n ≤ 10)
    Search { n: usize, d: usize, alpha: usize, beta: usize },
}

#[derive(Subcommand)]
enum Family {
    Hamming { p: usize, q: usize },
    Hypercube { k: usize },
    Paley { q: usize },
    Shrikhande,
    Cocktail { m: usize },
    Complete { n: usize },
    Cycle { n: usize },
}

/// Failure of a stated bound, as opposed to bad input.
#[derive(Debug)]
struct AssertionFailed(String);

impl std::fmt::Display for AssertionFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for AssertionFailed {}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<AssertionFailed>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::OracleMismatch(_) | Error::Certificate(_)) => 1,
        _ => 2,
    }
}

fn read_graph(input: &str, cap: usize) -> anyhow::Result<Graph> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        s
    } else {
        std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?
    };
    let g = load_edge_list(&text).with_context(|| format!("parsing {input}"))?;
    if g.n() > cap {
        return Err(Error::SizeLimit { size: g.n(), limit: cap }.into());
    }
    Ok(g)
}

fn generate(family: &Family, cap: usize) -> Result<Graph> {
    let checked = |g: Graph| {
        if g.n() > cap {
            Err(Error::SizeLimit { size: g.n(), limit: cap })
        } else {
            Ok(g)
        }
    };
    match *family {
        Family::Hamming { p, q } => gen_hamming_with_limit(p, q, cap),
        Family::Hypercube { k } => gen_hypercube_with_limit(k, cap),
        Family::Paley { q } if q > cap => Err(Error::SizeLimit { size: q, limit: cap }),
        Family::Paley { q } => gen_paley(q),
        Family::Shrikhande => checked(gen_shrikhande()),
        Family::Cocktail { m } if m.saturating_mul(2) > cap => Err(Error::SizeLimit { size: m.saturating_mul(2), limit: cap }),
        Family::Cocktail { m } => gen_cocktail(m),
        Family::Complete { n } | Family::Cycle { n } if n > cap => Err(Error::SizeLimit { size: n, limit: cap }),
        Family::Complete { n } => gen_complete(n),
        Family::Cycle { n } => gen_cycle(n),
    }
}

#[derive(Serialize)]
struct GraphJson<'a> {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<&'a str>>,
}

fn graph_json(g: &Graph) -> GraphJson<'_> {
    let labels: Option<Vec<&str>> = (0..g.n()).map(|v| g.label(v)).collect();
    GraphJson {
        n: g.n(),
        edges: g.edges(),
        labels,
    }
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn print_graph(g: &Graph, format: Format) -> anyhow::Result<()> {
    match format {
        Format::Json => print_json(&graph_json(g)),
        Format::Csv => {
            println!("u,v");
            for (u, v) in g.edges() {
                println!("{u},{v}");
            }
            Ok(())
        }
        Format::Text => {
            print!("{}", g.to_edge_list());
            Ok(())
        }
    }
}

fn edge_arg(g: &Graph, edge: &Option<Vec<usize>>) -> anyhow::Result<(usize, usize)> {
    match edge.as_deref() {
        Some(&[u, v]) => Ok((u, v)),
        Some(_) => bail!("--edge takes two vertices"),
        None => g.edges().first().copied().ok_or_else(|| Error::EmptyGraph.into()),
    }
}

#[derive(Serialize)]
struct CurvatureRow {
    u: usize,
    v: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<Rational>,
    kappa: Rational,
}

fn cmd_curvature(g: &Graph, edge: &Option<Vec<usize>>, p: Option<Rational>, format: Format) -> anyhow::Result<()> {
    let edges = match edge {
        Some(_) => vec![edge_arg(g, edge)?],
        None => g.edges(),
    };
    let rows: Vec<CurvatureRow> = match (p, edge) {
        (None, None) => curvature_all_edges(g)?
            .rows
            .into_iter()
            .map(|r| CurvatureRow { u: r.u, v: r.v, p: None, kappa: r.kappa })
            .collect(),
        _ => {
            g.warm_distances();
            edges
                .iter()
                .map(|&(u, v)| {
                    g.distance(u, v)?;
                    let kappa = match p {
                        Some(p) => {
                            if !g.has_edge(u, v) {
                                return Err(Error::NotAnEdge(u, v));
                            }
                            ollivier_kappa_p(g, u, v, p)?
                        }
                        None => lly_curvature(g, u, v)?,
                    };
                    Ok(CurvatureRow { u, v, p, kappa })
                })
                .collect::<Result<_>>()?
        }
    };
    match format {
        Format::Json => print_json(&rows)?,
        Format::Csv => {
            println!("u,v,{}", if p.is_some() { "kappa_p" } else { "kappa" });
            for r in &rows {
                println!("{},{},{}", r.u, r.v, r.kappa);
            }
        }
        Format::Text if edge.is_some() => println!("{}", rows[0].kappa),
        Format::Text => {
            for r in &rows {
                println!("{} {} {}", r.u, r.v, r.kappa);
            }
        }
    }
    Ok(())
}

fn cmd_params(g: &Graph, format: Format) -> anyhow::Result<()> {
    match g.detect_amply_params()? {
        Detection::Amply(p) => match format {
            Format::Json => print_json(&p),
            Format::Csv => {
                let beta = p.beta.map_or("-".to_string(), |b| b.to_string());
                println!("n,d,alpha,beta\n{},{},{},{beta}", p.n, p.d, p.alpha);
                Ok(())
            }
            Format::Text => {
                println!("{p}");
                Ok(())
            }
        },
        Detection::Violation(v) => {
            if format == Format::Json {
                print_json(&serde_json::json!({ "violation": v }))?;
            } else {
                println!("not amply regular: {v}");
            }
            Err(Error::Hypothesis(v.to_string()).into())
        }
    }
}

fn cmd_verify(g: &Graph, name: &str, cap: usize, format: Format) -> anyhow::Result<()> {
    let rep = verify(g, name, cap.min(DEFAULT_SPECTRUM_CAP))?;
    match format {
        Format::Json => print_json(&rep)?,
        Format::Csv => print!("{}", report::render_csv(&rep)),
        Format::Text => print!("{}", report::render_text(&rep)),
    }
    match rep.verdict {
        Verdict::Pass => Ok(()),
        Verdict::Fail => Err(AssertionFailed("verification failed".into()).into()),
        Verdict::Vacuous => Err(Error::Hypothesis("no parameter bound applies".into()).into()),
    }
}

fn cmd_hgraph(g: &Graph, edge: &Option<Vec<usize>>, format: Format) -> anyhow::Result<()> {
    let (x, y) = edge_arg(g, edge)?;
    let dump = hgraph::hgraph_dump(g, x, y)?;
    match format {
        Format::Json => print_json(&dump)?,
        Format::Csv => {
            println!("left,right,class");
            for e in &dump.h.edges {
                println!("{},{},{:?}", e.left, e.right, e.class);
            }
        }
        Format::Text => print!("{}", hgraph::render_text(&dump)),
    }
    match &dump.failure {
        Some(f) => Err(AssertionFailed(f.clone()).into()),
        None => Ok(()),
    }
}

fn cmd_spectrum(g: &Graph, cap: usize, format: Format) -> anyhow::Result<()> {
    let s = adjacency_spectrum_in::<f64>(g, cap.min(DEFAULT_SPECTRUM_CAP))?;
    let values: Vec<String> = s.eigenvalues.iter().map(|&x| report::sig12(x)).collect();
    let regular = g.is_connected() && g.regular_degree().is_some_and(|d| d > 0);
    let sigma = s.second_largest().filter(|_| regular);
    let lambda1 = sigma.zip(g.regular_degree()).map(|(x, d)| 1.0 - x / d as f64);
    match format {
        Format::Json => print_json(&serde_json::json!({
            "eigenvalues": values,
            "sigma": sigma.map(report::sig12),
            "lambda1": lambda1.map(report::sig12),
            "residual": format!("{:.3e}", s.residual),
        }))?,
        Format::Csv => {
            println!("index,eigenvalue");
            for (i, v) in values.iter().enumerate() {
                println!("{},{v}", i + 1);
            }
        }
        Format::Text => {
            println!("{}", values.join(" "));
            if let (Some(x), Some(l)) = (sigma, lambda1) {
                println!("sigma {}\nlambda1 {}", report::sig12(x), report::sig12(l));
            }
            println!("residual {:.3e}", s.residual);
        }
    }
    Ok(())
}

fn cmd_diameter(g: &Graph, format: Format) -> anyhow::Result<()> {
    let diam = g.diameter()?;
    let girth = g.girth();
    match format {
        Format::Json => print_json(&serde_json::json!({ "diameter": diam, "girth": girth }))?,
        Format::Csv => println!("diameter,girth\n{diam},{}", girth.map_or(String::new(), |g| g.to_string())),
        Format::Text => println!("{diam}"),
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    let Cli { format, size_cap: cap, seed: _, command, .. } = cli;
    match &command {
        Command::Gen { family } => print_graph(&generate(family, cap)?, format),
        Command::Params { input } => cmd_params(&read_graph(input, cap)?, format),
        Command::Curvature { input, edge, all: _, p } => cmd_curvature(&read_graph(input, cap)?, edge, *p, format),
        Command::Verify { input } => cmd_verify(&read_graph(input, cap)?, input, cap, format),
        Command::Hgraph { input, edge } => cmd_hgraph(&read_graph(input, cap)?, edge, format),
        Command::Spectrum { input } => cmd_spectrum(&read_graph(input, cap)?, cap, format),
        Command::Diameter { input } => cmd_diameter(&read_graph(input, cap)?, format),
        Command::Search { n, d, alpha, beta } => match search_amply(*n, *d, *alpha, *beta)? {
            Some(g) => print_graph(&g, format),
            None if format == Format::Json => print_json(&serde_json::Value::Null),
            None => {
                println!("none");
                Ok(())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
