use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use csprops::boolean::classify_schaefer;
use csprops::hierarchy::DEFAULT_DEP_MAX;
use csprops::instances::{
    emit_csp, emit_csp_annotated, emit_dimacs, gen_boolean, gen_coloring, gen_factoring, gen_random, BoolSpec,
    FactoringSpec, Graph, RandomSpec,
};
use csprops::oracle::DEFAULT_MAX_SPACE;
use csprops::simplify::{simplify_fixpoint, Detector, Mode, SimplifyConfig};

use csprops_cli::analyze::{analyze, AnalyzeOptions};
use csprops_cli::check::{check_corpus, check_file, parse_corpus, CheckOptions};
use csprops_cli::input;
use csprops_cli::report::Method;

#[derive(Parser)]
#[command(name = "csprops", version, about = "Structural properties of finite-domain CSP instances")]
struct Cli {
    /// Worker threads for parallel work; defaults to one per core.
    #[arg(long, global = true, env = "CSPROPS_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every property for every admissible argument.
    Analyze(AnalyzeArgs),
    /// Shrink the search space to a fixpoint and print the step log.
    Simplify(SimplifyArgs),
    /// Cross-validate local and tractable verdicts and the relationship edges.
    Check(CheckArgs),
    /// Emit a generated instance.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Print the tractable classes of a DIMACS formula.
    Classify {
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Oracle,
    Local,
    Tractable,
    Hierarchy,
    All,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    method: MethodArg,
    /// Constraints per subset of the default covering.
    #[arg(long, default_value_t = 1)]
    group_size: usize,
    /// Largest determining set for dependence queries.
    #[arg(long, default_value_t = DEFAULT_DEP_MAX)]
    dep_max: usize,
    /// Machine-readable report.
    #[arg(long)]
    json: bool,
    /// List false and unknown findings too.
    #[arg(long)]
    all: bool,
    /// Quantify over the whole domain instead of the active values.
    #[arg(long)]
    full_domain: bool,
    /// Largest search space the oracle will enumerate.
    #[arg(long, default_value_t = DEFAULT_MAX_SPACE)]
    max_space: u128,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Production,
    Test,
}

#[derive(Args)]
struct SimplifyArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "production")]
    mode: ModeArg,
    /// Where to write the simplified instance; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    group_size: usize,
    /// Comma-separated detector names, tried in the given order.
    #[arg(long, value_delimiter = ',')]
    detectors: Option<Vec<String>>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
    file: Option<PathBuf>,
    /// `default`, or entries such as `random:100,horn:50`.
    #[arg(long)]
    corpus: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DEP_MAX)]
    dep_max: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    group_sizes: Vec<usize>,
    /// Flip a one-way edge before validating, to confirm violations are caught.
    #[arg(long)]
    reverse_edge: Vec<String>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Graph coloring with one not-equal constraint per edge.
    Coloring {
        /// Number of nodes, labeled 1..=n.
        #[arg(long, required_unless_present = "graph")]
        nodes: Option<usize>,
        /// Edge list such as `1-2,2-3`.
        #[arg(long, default_value = "")]
        edges: String,
        /// A built-in graph instead of nodes and edges.
        #[arg(long, value_parser = ["five-node", "triangle"], conflicts_with = "nodes")]
        graph: Option<String>,
        #[arg(long, default_value_t = 3)]
        colors: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Digit-wise multiplication X * Y = Z.
    Factoring {
        #[arg(long)]
        z: u64,
        #[arg(long, default_value_t = 2)]
        base: u32,
        /// Require X < Y, leaving one solution per factor pair.
        #[arg(long)]
        ordering: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random extensional instance; unset parameters follow the corpus defaults.
    Random {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long)]
        domain: Option<usize>,
        #[arg(long)]
        constraints: Option<usize>,
        #[arg(long)]
        max_arity: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random DIMACS formula inside one tractable class.
    Boolean {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long)]
        constraints: Option<usize>,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_analyze(a: AnalyzeArgs) -> Result<ExitCode> {
    let loaded = input::load(&a.file)?;
    let (methods, explicit) = match a.method {
        MethodArg::Oracle => (vec![Method::Oracle], true),
        MethodArg::Local => (vec![Method::Local], true),
        MethodArg::Tractable => (vec![Method::Tractable], true),
        MethodArg::Hierarchy => (vec![Method::Hierarchy], true),
        MethodArg::All => (Method::ALL.to_vec(), false),
    };
    let opts = AnalyzeOptions {
        methods,
        explicit,
        group_size: a.group_size,
        dep_max: a.dep_max,
        all: a.all,
        full_domain: a.full_domain,
        max_space: a.max_space,
    };
    let report = analyze(&a.file.display().to_string(), &loaded, &opts)?;
    if a.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_simplify(a: SimplifyArgs) -> Result<ExitCode> {
    let loaded = input::load(&a.file)?;
    let mode = match a.mode {
        ModeArg::Production => Mode::Production,
        ModeArg::Test => Mode::Test,
    };
    let mut cfg = SimplifyConfig::new(mode, loaded.formula.clone());
    cfg.group_size = a.group_size;
    if let Some(names) = a.detectors {
        let ds = names
            .iter()
            .map(|n| Detector::parse(n).with_context(|| format!("unknown detector `{n}`")))
            .collect::<Result<Vec<_>>>()?;
        cfg = cfg.with_detectors(ds);
    }
    let res = simplify_fixpoint(&loaded.inst, &loaded.space, &cfg)?;
    let log = res.log(&loaded.inst);
    for line in &log {
        println!("{line}");
    }
    let status = if res.proved_unsatisfiable {
        "proved unsatisfiable".to_string()
    } else {
        format!("fixpoint, {} -> {} tuples", loaded.space.size(), res.final_space.size())
    };
    println!("# {status}");
    let mut comments = vec![format!("simplified from {}: {status}", a.file.display())];
    comments.extend(log);
    let text = emit_csp_annotated(&loaded.inst, &res.final_space, &comments);
    if a.out.is_none() {
        println!();
    }
    emit(&text, a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn run_check(a: CheckArgs) -> Result<ExitCode> {
    let tally = match (&a.file, &a.corpus) {
        (Some(file), None) => {
            let loaded = input::load(file)?;
            let opts = CheckOptions {
                dep_max: a.dep_max,
                group_sizes: a.group_sizes,
                reverse_edges: a.reverse_edge,
            };
            check_file(&loaded, &opts)?
        }
        (None, Some(spec)) => {
            if !a.reverse_edge.is_empty() {
                bail!("--reverse-edge applies to a single file");
            }
            let items = parse_corpus(spec)?;
            println!("corpus: {} items", items.len());
            check_corpus(&items, a.dep_max)?
        }
        _ => bail!("give either a file or --corpus"),
    };
    for v in &tally.violations {
        println!("VIOLATION {}: {}", v.suite, v.detail);
    }
    println!("{} checks, {} violations", tally.checks, tally.violations.len());
    Ok(if tally.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_gen(g: GenCommand) -> Result<ExitCode> {
    match g {
        GenCommand::Coloring { nodes, edges, graph, colors, out } => {
            let g = match graph.as_deref() {
                Some("five-node") => Graph::five_node(),
                Some(_) => Graph::triangle(),
                None => Graph::parse_edges(nodes.unwrap_or(0), &edges)?,
            };
            let inst = gen_coloring(&g, colors)?;
            emit(&emit_csp(&inst, &inst.full_space()), out.as_deref())?;
        }
        GenCommand::Factoring { z, base, ordering, out } => {
            let f = gen_factoring(&FactoringSpec::new(z, base, ordering))?;
            let text = emit_csp_annotated(&f.instance, &f.instance.full_space(), &f.notes);
            emit(&text, out.as_deref())?;
        }
        GenCommand::Random { seed, vars, domain, constraints, max_arity, density, out } => {
            let d = RandomSpec::corpus(seed);
            let spec = RandomSpec {
                vars: vars.unwrap_or(d.vars),
                domain: domain.unwrap_or(d.domain),
                constraints: constraints.unwrap_or(d.constraints),
                max_arity: max_arity.unwrap_or(d.max_arity),
                density: density.unwrap_or(d.density),
                seed,
            };
            let (inst, space) = gen_random(&spec)?;
            emit(&emit_csp(&inst, &space), out.as_deref())?;
        }
        GenCommand::Boolean { class, seed, vars, constraints, width, out } => {
            let cls = csprops::boolean::SchaeferClass::parse(&class).with_context(|| format!("unknown class `{class}`"))?;
            let d = BoolSpec::corpus(cls, seed);
            let spec = BoolSpec {
                class: cls,
                vars: vars.unwrap_or(d.vars),
                constraints: constraints.unwrap_or(d.constraints),
                max_width: width,
                seed,
            };
            emit(&emit_dimacs(&gen_boolean(&spec)?), out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_classify(file: &Path) -> Result<ExitCode> {
    let loaded = input::load(file)?;
    let Some(f) = loaded.formula else {
        bail!("{}: classification needs a DIMACS formula", file.display());
    };
    let c = classify_schaefer(&f);
    println!("variables {}", f.num_vars());
    println!("clauses {}", f.clauses().len());
    println!("equations {}", f.equations().len());
    let names: Vec<&str> = c.applicable.iter().map(|c| c.name()).collect();
    println!("applicable {}", if names.is_empty() { "none".to_string() } else { names.join(" ") });
    println!("primary {}", c.primary);
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Analyze(a) => run_analyze(a),
        Command::Simplify(a) => run_simplify(a),
        Command::Check(a) => run_check(a),
        Command::Gen(g) => run_gen(g),
        Command::Classify { file } => run_classify(&file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
