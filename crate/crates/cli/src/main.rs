use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use spanex_core::bench::run_bench;
use spanex_core::compile::{compile_regex, expand_strict};
use spanex_core::formula::{check_functional_regex, parse_regex_formula, RegexFormula};
use spanex_core::harness::gen::{
    brute_force_sat, gen_3cnf_query, gen_clique_query, gen_streq_clique_query, has_clique, Graph,
};
use spanex_core::harness::random::{random_3cnf, random_graph};
use spanex_core::model::{Document, SpanTuple, VarName};
use spanex_core::query::{
    eval, parse_query, plan, DisjunctStrategy, PlanOptions, RegexCQ, RegexUCQ, Strategy,
};
use spanex_core::vsa::{check_functional_vsa, is_key_attribute, parse_dump, KeyVerdict};

/// Document spanners: extract span tuples from text with regex formulas,
/// conjunctive queries over them, and unions of those.
#[derive(Parser)]
#[command(name = "spanex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a query on a document and print the result tuples.
    Eval(EvalArgs),
    /// Test whether a formula (or automaton dump) is functional.
    Check(CheckArgs),
    /// Compile a formula to a vset-automaton and print its dump.
    Compile(CompileArgs),
    /// Key-attribute test for a formula, or the relational skeleton of a query.
    Analyze(AnalyzeArgs),
    /// Measure preprocessing time and per-tuple delays.
    Bench(BenchArgs),
    /// Generate a query and document from a hardness reduction.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
    Count,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Canonical,
    Compiled,
}

#[derive(Args)]
struct QueryInput {
    /// Query file (.spq).
    #[arg(long, short, conflicts_with = "expr", required_unless_present = "expr")]
    query: Option<PathBuf>,
    /// Query text given inline.
    #[arg(long, short)]
    expr: Option<String>,
}

impl QueryInput {
    fn load(&self) -> Result<RegexUCQ> {
        let text = match (&self.query, &self.expr) {
            (Some(path), _) => read(path)?,
            (None, Some(text)) => text.clone(),
            (None, None) => unreachable!("clap requires one of them"),
        };
        let q = parse_query(&text);
        match &self.query {
            Some(path) => q.with_context(|| format!("in {}", path.display())),
            None => Ok(q?),
        }
    }
}

#[derive(Args)]
struct DocumentInput {
    /// Document file, read as UTF-8.
    #[arg(long, short)]
    input: PathBuf,
    /// Keep a final line break instead of stripping it.
    #[arg(long)]
    keep_trailing_newline: bool,
}

impl DocumentInput {
    fn load(&self) -> Result<Document> {
        let mut text = read(&self.input)?;
        if !self.keep_trailing_newline {
            if text.ends_with("\r\n") {
                text.truncate(text.len() - 2);
            } else if text.ends_with('\n') {
                text.pop();
            }
        }
        Ok(Document::new(&text))
    }
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    /// Largest number of atoms compiled into one automaton under `auto`.
    #[arg(long, env = "SPANEX_MAX_JOIN_COMPILE", default_value_t = spanex_core::query::DEFAULT_MAX_JOIN_COMPILE)]
    max_join_compile: usize,
}

impl PlanArgs {
    fn options(&self) -> PlanOptions {
        PlanOptions {
            strategy: match self.strategy {
                StrategyArg::Auto => Strategy::Auto,
                StrategyArg::Canonical => Strategy::Canonical,
                StrategyArg::Compiled => Strategy::Compiled,
            },
            max_join_compile: self.max_join_compile,
            ..PlanOptions::default()
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    query: QueryInput,
    #[command(flatten)]
    document: DocumentInput,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    #[command(flatten)]
    plan: PlanArgs,
    /// Stop after this many tuples.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// Regex formula.
    #[arg(
        long,
        short,
        conflicts_with = "automaton",
        required_unless_present = "automaton"
    )]
    formula: Option<String>,
    /// Automaton dump file.
    #[arg(long, short)]
    automaton: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long, short)]
    formula: String,
    /// Output file for the dump; standard output if absent.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Split multi-operation edges into single-operation chains.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Regex formula to test for a key attribute.
    #[arg(long, short, requires = "key", conflicts_with_all = ["query", "expr"])]
    formula: Option<String>,
    /// Variable to test.
    #[arg(long, short)]
    key: Option<String>,
    /// Query file whose relational skeleton to print.
    #[arg(long, short)]
    query: Option<PathBuf>,
    /// Query text whose relational skeleton to print.
    #[arg(long, short)]
    expr: Option<String>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    query: QueryInput,
    #[command(flatten)]
    document: DocumentInput,
    #[command(flatten)]
    plan: PlanArgs,
    /// CSV output file.
    #[arg(long)]
    report: PathBuf,
    /// Repetitions; reported delays are per-tuple minima over all runs.
    #[arg(long, default_value_t = 1)]
    runs: usize,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
}

#[derive(Args)]
struct GenOutput {
    /// Where to write the query.
    #[arg(long)]
    query: PathBuf,
    /// Where to write the document.
    #[arg(long)]
    document: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file: the node count, then one `i j` pair per line
    /// (0-based). A random graph is generated when absent.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 6)]
    nodes: usize,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Clique size.
    #[arg(short, long, default_value_t = 3)]
    k: usize,
    #[command(flatten)]
    out: GenOutput,
}

#[derive(Subcommand)]
enum GenKind {
    /// Boolean CQ that is nonempty iff a 3CNF formula is satisfiable.
    #[command(name = "3cnf")]
    Cnf {
        /// DIMACS CNF file with three literals per clause. A random formula
        /// is generated when absent.
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        vars: usize,
        #[arg(long, default_value_t = 10)]
        clauses: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// Boolean CQ that is nonempty iff a graph has a k-clique.
    Clique(GraphArgs),
    /// Like `clique`, with string equalities instead of node atoms.
    StreqClique(GraphArgs),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_formula(text: &str) -> Result<RegexFormula> {
    parse_regex_formula(text).with_context(|| format!("in formula {text:?}"))
}

fn tsv(t: &SpanTuple) -> String {
    if t.is_empty() {
        "()".into()
    } else {
        t.to_tsv()
    }
}

/// Ignores a closed pipe so that `spanex eval … | head` ends quietly.
fn emit(out: &mut impl Write, line: &str) -> Result<bool> {
    match writeln!(out, "{line}").and_then(|_| out.flush()) {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(false),
        Err(e) => Err(e.into()),
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<ExitCode> {
    let q = args.query.load()?;
    let d = args.document.load()?;
    let stream = eval(&q, &d, &args.plan.options())?;
    let stream = stream.take(args.limit.unwrap_or(usize::MAX));
    let mut out = io::stdout().lock();
    let mut count = 0usize;
    for t in stream {
        count += 1;
        let line = match args.format {
            Format::Tsv => tsv(&t),
            Format::Json => t.to_json(),
            Format::Count => continue,
        };
        if !emit(&mut out, &line)? {
            return Ok(ExitCode::SUCCESS);
        }
    }
    if let Format::Count = args.format {
        emit(&mut out, &count.to_string())?;
    }
    Ok(if q.is_boolean() && count == 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode> {
    if let Some(path) = &args.automaton {
        let a = parse_dump(&read(path)?).with_context(|| format!("in {}", path.display()))?;
        return Ok(match check_functional_vsa(&a) {
            Ok(_) => {
                println!("functional");
                ExitCode::SUCCESS
            }
            Err(e) => {
                println!("not functional: {e}");
                ExitCode::from(2)
            }
        });
    }
    let f = parse_formula(args.formula.as_deref().expect("clap requires a formula"))?;
    Ok(match check_functional_regex(&f) {
        Ok(()) => {
            println!("functional");
            ExitCode::SUCCESS
        }
        Err(violations) => {
            println!("not functional");
            for v in violations {
                println!("  {v}");
            }
            ExitCode::from(2)
        }
    })
}

fn cmd_compile(args: &CompileArgs) -> Result<ExitCode> {
    let mut a = compile_regex(&parse_formula(&args.formula)?)?;
    if args.strict {
        a = expand_strict(&a);
    }
    let text = a.to_string();
    match &args.dump {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode> {
    if let Some(formula) = &args.formula {
        let x = args.key.as_deref().expect("clap requires --key");
        let x = VarName::new(x).with_context(|| format!("bad variable {x:?}"))?;
        let a = compile_regex(&parse_formula(formula)?)?;
        match is_key_attribute(&a, &x)? {
            KeyVerdict::Key => println!("{x} is a key"),
            KeyVerdict::NotKey(w) => {
                println!("{x} is not a key");
                println!("document: {:?}", w.document);
                println!("first:    {}", w.first);
                println!("second:   {}", w.second);
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    let q = QueryInput {
        query: args.query.clone(),
        expr: args.expr.clone(),
    };
    if q.query.is_none() && q.expr.is_none() {
        bail!("give --formula with --key, or a query via --query/--expr");
    }
    let q = q.load()?;
    for (i, cq) in q.disjuncts.iter().enumerate() {
        let s = cq.to_relational();
        println!("disjunct {}: {s}", i + 1);
        let shared: Vec<String> = s.shared_variables().iter().map(|v| v.to_string()).collect();
        println!(
            "  atoms: {}, variables: {}, equalities: {}, shared: {{{}}}",
            s.atoms.len(),
            s.variables().len(),
            s.equalities.len(),
            shared.join(", ")
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode> {
    let q = args.query.load()?;
    let d = args.document.load()?;
    let opts = args.plan.options();
    let r = run_bench(&q, &d, &opts, args.runs)?;
    let file = fs::File::create(&args.report)
        .with_context(|| format!("cannot write {}", args.report.display()))?;
    r.write_csv(io::BufWriter::new(file))?;
    let strategies: Vec<&str> = plan(&q, &d, &opts)
        .disjuncts
        .iter()
        .map(|s| match s {
            DisjunctStrategy::Canonical => "canonical",
            DisjunctStrategy::Compiled => "compiled",
        })
        .collect();
    eprintln!("plan: {}", strategies.join(", "));
    eprintln!("tuples: {}", r.tuples());
    eprintln!("preprocessing: {:?}", r.preprocessing);
    eprintln!("total: {:?}", r.total());
    if let (Some(max), Some(median)) = (r.max_delay(), r.median_delay()) {
        eprintln!(
            "delay max/median: {max} ns / {median} ns ({:.1}x)",
            max as f64 / median.max(1) as f64
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_dimacs(text: &str) -> Result<Vec<[i32; 3]>> {
    let mut lits = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty()
            || line.starts_with('c')
            || line.starts_with('p')
            || line.starts_with('%')
        {
            continue;
        }
        for tok in line.split_whitespace() {
            lits.push(
                tok.parse::<i32>()
                    .with_context(|| format!("bad literal {tok:?}"))?,
            );
        }
    }
    let mut clauses = Vec::new();
    for clause in lits.split(|&l| l == 0).filter(|c| !c.is_empty()) {
        let c: [i32; 3] = clause
            .try_into()
            .map_err(|_| anyhow::anyhow!("clause {clause:?} does not have three literals"))?;
        clauses.push(c);
    }
    Ok(clauses)
}

fn parse_graph(text: &str) -> Result<Graph> {
    let mut nums = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .with_context(|| format!("bad number {t:?}"))
    });
    let nodes = nums.next().context("empty graph file")??;
    let rest: Vec<usize> = nums.collect::<Result<_>>()?;
    if !rest.len().is_multiple_of(2) {
        bail!("odd number of edge endpoints");
    }
    Ok(Graph::new(nodes, rest.chunks(2).map(|p| (p[0], p[1])))?)
}

fn write_instance(out: &GenOutput, header: &str, q: &RegexCQ, d: &Document) -> Result<()> {
    let text = format!("-- {header}\n{q}\n");
    fs::write(&out.query, text).with_context(|| format!("cannot write {}", out.query.display()))?;
    let doc: String = d.symbols().iter().collect();
    fs::write(&out.document, doc)
        .with_context(|| format!("cannot write {}", out.document.display()))?;
    Ok(())
}

fn verdict(yes: bool) -> &'static str {
    if yes {
        "nonempty"
    } else {
        "empty"
    }
}

fn cmd_gen(args: &GenArgs) -> Result<ExitCode> {
    match &args.kind {
        GenKind::Cnf {
            cnf,
            vars,
            clauses,
            out,
        } => {
            let psi = match cnf {
                Some(path) => parse_dimacs(&read(path)?)?,
                None => random_3cnf(&mut StdRng::seed_from_u64(out.seed), *vars, *clauses),
            };
            let (q, d) = gen_3cnf_query(&psi)?;
            let sat = brute_force_sat(&psi);
            let shown: Vec<String> = psi.iter().map(|c| format!("{c:?}")).collect();
            write_instance(
                out,
                &format!("3cnf {}; expected {}", shown.join(" "), verdict(sat)),
                &q,
                &d,
            )?;
            eprintln!("expected: {}", verdict(sat));
        }
        GenKind::Clique(g) | GenKind::StreqClique(g) => {
            let graph = match &g.graph {
                Some(path) => parse_graph(&read(path)?)?,
                None => Graph::new(
                    g.nodes,
                    random_graph(&mut StdRng::seed_from_u64(g.out.seed), g.nodes, g.density),
                )?,
            };
            let (q, d) = match &args.kind {
                GenKind::Clique(_) => gen_clique_query(&graph, g.k)?,
                _ => gen_streq_clique_query(&graph, g.k)?,
            };
            let yes = has_clique(&graph, g.k);
            let edges: Vec<String> = graph
                .edges
                .iter()
                .map(|(i, j)| format!("{i}-{j}"))
                .collect();
            let header = format!(
                "{}-clique on {} nodes, edges {}; expected {}",
                g.k,
                graph.nodes,
                edges.join(" "),
                verdict(yes)
            );
            write_instance(&g.out, &header, &q, &d)?;
            eprintln!("expected: {}", verdict(yes));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Check(a) => cmd_check(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(2)
    })
}
