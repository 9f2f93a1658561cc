use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use singtope::{
    analyze_with, census, census_with_jobs, generate, laufer_zmin_with, thick_thin, AnalysisReport,
    AnalyzeOptions, CensusBounds, CensusMode, CensusReport, Decomposition, FamilyParams,
    LauferConfig, LauferTrace, WeightedGraph,
};
use std::io::Read;
use std::process::ExitCode;

/// Analyzer for weighted resolution trees: minimal cycles, rationality,
/// thick-thin decompositions, family recognition, and small-graph censuses.
#[derive(Parser)]
#[command(name = "singtope", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format (default: text for trace, json elsewhere)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Census worker threads (0 or absent: library default)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one graph
    Analyze(AnalyzeCmd),
    /// Generate a family member (n,k,l)
    Family(FamilyCmd),
    /// Enumerate all small graphs in bounds and check the classification
    Census(CensusCmd),
    /// Stepwise minimal-cycle computation, one line per addition
    Trace(InputArgs),
    /// Thick-thin decomposition of a rational graph
    Decompose(InputArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Graph: a file path, inline graph text, or `-` for stdin
    input: Option<String>,

    /// Inline star shorthand, e.g. "center=-2 arms=[-2|-2|-2]"
    #[arg(long, conflicts_with = "input")]
    star: Option<String>,

    /// Family parameters n,k,l instead of a graph
    #[arg(long, conflicts_with_all = ["input", "star"], value_name = "N,K,L")]
    family: Option<String>,
}

#[derive(Args)]
struct AnalyzeCmd {
    #[command(flatten)]
    input: InputArgs,

    /// Exit with status 3 when the conicality verdict is refused
    #[arg(long)]
    require_conical: bool,
}

#[derive(Args)]
struct FamilyCmd {
    /// Parameters n,k,l
    #[arg(value_name = "N,K,L")]
    params: String,

    /// Print the generated graph (the default)
    #[arg(long, conflicts_with = "analyze")]
    emit: bool,

    /// Analyze the generated graph instead of printing it
    #[arg(long)]
    analyze: bool,
}

#[derive(Args)]
struct CensusCmd {
    #[arg(long, default_value_t = 7)]
    max_vertices: usize,

    /// Most negative weight; the range is [min-weight, -2]
    #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
    min_weight: i64,

    /// Only trees with at most one vertex of valence ≥ 3
    #[arg(long, conflicts_with = "bamboos")]
    stars: bool,

    /// Only paths with at least two vertices
    #[arg(long)]
    bamboos: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let step_budget = step_budget_from_env()?;
    match cli.command {
        Command::Analyze(cmd) => {
            let g = read_graph(&cmd.input)?;
            let options = AnalyzeOptions { step_budget, ..AnalyzeOptions::default() };
            let report = analyze_with(&g, &options);
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => print_json(&report)?,
                Format::Text => print_report_text(&report),
                Format::Dot => print!("{}", g.to_dot()),
            }
            if cmd.require_conical && report.conical.is_none() {
                eprintln!(
                    "conicality verdict refused: {}",
                    report.conical_reason.as_deref().unwrap_or("see diagnostics")
                );
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Family(cmd) => {
            let params = parse_params(&cmd.params)?;
            let g = generate(&params);
            if cmd.analyze {
                let options = AnalyzeOptions { step_budget, ..AnalyzeOptions::default() };
                let report = analyze_with(&g, &options);
                match cli.format.unwrap_or(Format::Json) {
                    Format::Json => print_json(&report)?,
                    Format::Text => print_report_text(&report),
                    Format::Dot => print!("{}", g.to_dot()),
                }
            } else {
                match cli.format.unwrap_or(Format::Json) {
                    Format::Json => println!("{}", g.to_json_string()),
                    Format::Text => print!("{}", g.to_text()),
                    Format::Dot => print!("{}", g.to_dot()),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Census(cmd) => {
            let mode = if cmd.stars {
                CensusMode::Stars
            } else if cmd.bamboos {
                CensusMode::Bamboos
            } else {
                CensusMode::Trees
            };
            let bounds = CensusBounds::new(cmd.max_vertices, cmd.min_weight, mode)?;
            let report = match cli.jobs {
                Some(jobs) => census_with_jobs(&bounds, jobs),
                None => census(&bounds),
            };
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => print_json(&report)?,
                Format::Text => print_census_text(&report),
                Format::Dot => bail!("dot output is not defined for census reports"),
            }
            if report.counterexamples.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Trace(input) => {
            let g = read_graph(&input)?;
            let config = LauferConfig { step_budget, ..LauferConfig::default() };
            let trace = match laufer_zmin_with(&g, &config) {
                Ok(trace) => trace,
                Err(e) => {
                    eprintln!("trace unavailable: {e}");
                    return Ok(ExitCode::from(3));
                }
            };
            match cli.format.unwrap_or(Format::Text) {
                Format::Json => print_json(&trace)?,
                Format::Text => print_trace_text(&g, &trace),
                Format::Dot => print!("{}", g.to_dot()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose(input) => {
            let g = read_graph(&input)?;
            let decomposition = match thick_thin(&g) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("decomposition unavailable: {e}");
                    return Ok(ExitCode::from(3));
                }
            };
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => print_json(&decomposition)?,
                Format::Text => print_decomposition_text(&decomposition),
                Format::Dot => print!("{}", decomposition.working_graph.to_dot()),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn step_budget_from_env() -> Result<Option<u64>> {
    match std::env::var("SINGTOPE_STEP_BUDGET") {
        Ok(raw) => {
            let value = raw
                .trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("SINGTOPE_STEP_BUDGET must be a nonnegative integer, got {raw:?}"))?;
            Ok(Some(value))
        }
        Err(_) => Ok(None),
    }
}

fn parse_params(raw: &str) -> Result<FamilyParams> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("family parameters must be three comma-separated integers, got {raw:?}");
    }
    let mut nums = [0u32; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part.parse().with_context(|| format!("bad family parameter {part:?}"))?;
    }
    Ok(FamilyParams::new(nums[0], nums[1], nums[2])?)
}

fn read_graph(input: &InputArgs) -> Result<WeightedGraph> {
    if let Some(raw) = &input.family {
        return Ok(generate(&parse_params(raw)?));
    }
    if let Some(star) = &input.star {
        return Ok(WeightedGraph::parse_star(star)?);
    }
    let Some(source) = &input.input else {
        bail!("no graph given: pass a file, inline text, `-`, --star, or --family");
    };
    let text = if source == "-" {
        let mut buffer = String::new();
        std::io::stdin().read_to_string(&mut buffer).context("reading stdin")?;
        buffer
    } else if std::path::Path::new(source).exists() {
        std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?
    } else {
        source.clone()
    };
    Ok(WeightedGraph::parse(&text)?)
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt_yes_no(b: Option<bool>) -> &'static str {
    b.map(yes_no).unwrap_or("undetermined")
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn print_report_text(report: &AnalysisReport) {
    println!("vertices: {}", report.graph.vertex_count());
    println!("negative definite: {}", yes_no(report.negative_definite));
    match &report.zmin {
        Some(z) => println!("zmin: {}", join(z.as_slice().iter())),
        None => println!("zmin: undetermined"),
    }
    println!("rational: {}", opt_yes_no(report.rational));
    if let Some(l) = &report.l_nodes {
        println!("l-nodes: {}", join(l.iter()));
    }
    if let Some(n) = report.node_count {
        println!("nodes: {n}");
    }
    match (report.conical, &report.conical_reason) {
        (Some(c), _) => println!("conical: {}", yes_no(c)),
        (None, Some(reason)) => println!("conical: undetermined ({reason})"),
        (None, None) => println!("conical: undetermined"),
    }
    match &report.family {
        Some(p) => println!("family: {p}"),
        None => println!("family: none"),
    }
    if let Some(d) = &report.decomposition {
        println!(
            "pieces: {} thick, {} thin ({} blow-ups)",
            d.thick_pieces.len(),
            d.thin_pieces.len(),
            d.blowups_performed
        );
    }
    for note in &report.diagnostics {
        println!("note: {note}");
    }
}

fn print_trace_text(g: &WeightedGraph, trace: &LauferTrace) {
    let mut z = vec![1i64; g.vertex_count()];
    println!("step  vertex  dot  max  multiplicities");
    for step in &trace.steps {
        z[step.vertex] += 1;
        println!(
            "{:>4}  {:>6}  {:>3}  {:>3}  {}",
            step.i,
            step.vertex,
            step.dot,
            step.max_dot,
            join(z.iter())
        );
    }
    println!("zmin: {}", join(trace.zmin.as_slice().iter()));
    println!("rational: {}", yes_no(trace.rational));
    if let Some(v) = &trace.violation {
        println!("violation: step {} at vertex {} with value {}", v.step, v.vertex, v.value);
    }
}

fn print_decomposition_text(d: &Decomposition) {
    println!("l-nodes: {}", join(d.l_nodes.iter()));
    println!("blow-ups: {}", d.blowups_performed);
    for piece in &d.thick_pieces {
        let bamboos = piece
            .bamboos
            .iter()
            .map(|b| format!("[{}]", join(b.iter())))
            .collect::<Vec<_>>()
            .join(" ");
        println!("thick: l-node {} bamboos {}", piece.l_node, if bamboos.is_empty() { "-".into() } else { bamboos });
    }
    for piece in &d.thin_pieces {
        println!("thin: [{}]", join(piece.iter()));
    }
}

fn print_census_text(report: &CensusReport) {
    println!("total: {}", report.total);
    println!("negative definite: {}", report.negative_definite);
    println!("rational: {}", report.rational);
    println!("conical: {}", report.conical);
    println!("family matched: {}", report.family_matched);
    println!("counterexamples: {}", report.counterexamples.len());
    for c in &report.counterexamples {
        println!(
            "  rational={} conical={} family={} graph: {}",
            yes_no(c.rational),
            yes_no(c.conical),
            c.family.map(|p| p.to_string()).unwrap_or_else(|| "none".into()),
            c.graph.to_text().replace('\n', "; ")
        );
    }
}
