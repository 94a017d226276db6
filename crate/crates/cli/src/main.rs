mod input;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use specwalk_core::cospectral::{Analyzer, PairVerdict, VerdictMode};
use specwalk_core::crosscheck::{run_all, CrosscheckConfig};
use specwalk_core::graph::{join_by_path, rabbit_ear, serialize_graph, GraphFormat};
use specwalk_core::walk::{
    closeness_report, cospectrality_certificate, scan_max_transfer, strong_cospectrality_certificate, walk_trace, write_trace_csv,
};
use specwalk_core::Graph;

use report::{to_value, CliError, ReportDocument, EXIT_INVARIANT, EXIT_NOT_FOUND, EXIT_OK, EXIT_USAGE};

/// Cospectral, parallel and strongly cospectral vertices, and quantum walks.
#[derive(Debug, Parser)]
#[command(name = "specwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide vertex-pair relations for one graph.
    Analyze(AnalyzeArgs),
    /// Report strongly cospectral (or cospectral) pairs for every graph in a graph6 file.
    Scan(ScanArgs),
    /// Build a graph with a guaranteed strongly cospectral pair.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Trace |U(t)_{ab}| and optionally issue certificates at the best time.
    Walk(WalkArgs),
    /// Run the exact-versus-numeric agreement suites.
    Crosscheck(CrosscheckArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("which").args(["pair", "all_pairs"])))]
#[command(group(ArgGroup::new("mode").args(["exact", "numeric", "both"])))]
struct AnalyzeArgs {
    /// Path to a graph6/edgelist file, or an inline graph6 string.
    graph: String,
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pair: Option<Vec<usize>>,
    #[arg(long)]
    all_pairs: bool,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    numeric: bool,
    #[arg(long)]
    both: bool,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long, value_name = "PATH")]
    json: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Find {
    ScPairs,
    CospectralPairs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// File with one graph6 string per line.
    file: String,
    #[arg(long, value_enum, default_value = "sc-pairs")]
    find: Find,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, value_name = "PATH")]
    json: Option<String>,
    /// Exit with status 1 when no pair is found in any graph.
    #[arg(long)]
    expect_some: bool,
}

#[derive(Debug, Subcommand)]
enum ConstructKind {
    /// Join X at u and Y at v by a path with LEN edges.
    JoinPath {
        x: String,
        u: usize,
        y: String,
        v: usize,
        len: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
    },
    /// Attach two pendant vertices to vertex a of X.
    RabbitEar {
        x: String,
        a: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<String>,
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
    },
}

#[derive(Debug, Args)]
struct WalkArgs {
    graph: String,
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    #[arg(long, default_value_t = 10.0)]
    tmax: f64,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Write the sampled trace as CSV.
    #[arg(long, value_name = "PATH")]
    csv: Option<String>,
    /// Issue cospectrality, strong cospectrality and closeness certificates at the best time.
    #[arg(long)]
    certify: bool,
    #[arg(long, value_name = "PATH")]
    json: Option<String>,
}

#[derive(Debug, Args)]
struct CrosscheckArgs {
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra random graphs with 8 to 16 vertices for the route-agreement suite.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, value_name = "PATH")]
    json: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_OK as u8 });
        }
    };
    let started = Instant::now();
    let r = match cli.command {
        Command::Analyze(a) => analyze(a, started),
        Command::Scan(a) => scan(a, started),
        Command::Construct { kind } => construct(kind, started),
        Command::Walk(a) => walk(a, started),
        Command::Crosscheck(a) => crosscheck(a, started),
    };
    match r {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message());
            if e.code() == EXIT_USAGE {
                eprintln!("run `specwalk --help` for the command grammar");
            }
            ExitCode::from(e.code() as u8)
        }
    }
}

fn yes_no(x: Option<bool>) -> &'static str {
    match x {
        Some(true) => "true",
        Some(false) => "false",
        None => "-",
    }
}

fn describe(v: &PairVerdict) -> String {
    let cosp = v.cospectral_exact.or(v.cospectral_numeric.map(|c| c.verdict));
    let par = v.parallel_exact.or(v.parallel_numeric.map(|c| c.verdict));
    let mut s = format!(
        "pair ({}, {}): strongly_cospectral={} cospectral={} parallel={}",
        v.a,
        v.b,
        v.strongly_cospectral,
        yes_no(cosp),
        yes_no(par)
    );
    if v.borderline {
        s.push_str(" borderline");
    }
    s
}

fn analyze(args: AnalyzeArgs, started: Instant) -> Result<i32, CliError> {
    let loaded = input::load(&args.graph)?;
    let g = &loaded.graph;
    let mode = if args.exact {
        VerdictMode::Exact
    } else if args.numeric {
        VerdictMode::Numeric
    } else {
        VerdictMode::Both
    };
    let an = Analyzer::new(g)?;
    let pairs: Vec<(usize, usize)> = match &args.pair {
        Some(p) => vec![(p[0], p[1])],
        None => (0..g.n()).flat_map(|a| (a + 1..g.n()).map(move |b| (a, b))).collect(),
    };
    let mut verdicts = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let v = an.verdict(a, b, mode)?;
        println!("{}", describe(&v));
        verdicts.push(v);
    }
    let strong = verdicts.iter().filter(|v| v.strongly_cospectral).count();
    println!("{strong} of {} pairs strongly cospectral", verdicts.len());
    if let Some(path) = &args.json {
        let mut doc = ReportDocument::new("analyze", vec![loaded.info], started);
        doc.pairs = verdicts.iter().map(to_value).collect();
        doc.result = json!({
            "n": g.n(),
            "edges": g.edge_count(),
            "mode": format!("{mode:?}").to_lowercase(),
            "strongly_cospectral_pairs": strong,
        });
        doc.write(path)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct ScanEntry {
    line: usize,
    graph6: String,
    n: usize,
    pairs: Vec<(usize, usize)>,
    classes: Vec<Vec<usize>>,
}

fn scan_one(line: usize, g6: &str, g: &Graph, find: Find) -> Result<ScanEntry, CliError> {
    let an = Analyzer::new(g)?;
    let classes: Vec<Vec<usize>> = match find {
        Find::ScPairs => an.sc_classes()?.cells().to_vec(),
        Find::CospectralPairs => {
            let mut cells: Vec<Vec<usize>> = Vec::new();
            for v in 0..g.n() {
                let p = an.deleted_char_poly(v)?;
                let mut placed = false;
                for c in cells.iter_mut() {
                    if an.deleted_char_poly(c[0])? == p {
                        c.push(v);
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    cells.push(vec![v]);
                }
            }
            cells
        }
    };
    let classes: Vec<Vec<usize>> = classes.into_iter().filter(|c| c.len() > 1).collect();
    let pairs = classes
        .iter()
        .flat_map(|c| {
            c.iter()
                .enumerate()
                .flat_map(move |(i, &a)| c[i + 1..].iter().map(move |&b| (a, b)))
        })
        .collect();
    Ok(ScanEntry {
        line,
        graph6: g6.to_string(),
        n: g.n(),
        pairs,
        classes,
    })
}

fn format_classes(classes: &[Vec<usize>]) -> String {
    classes
        .iter()
        .map(|c| format!("{{{}}}", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn scan(args: ScanArgs, started: Instant) -> Result<i32, CliError> {
    let (graphs, info) = input::load_corpus(&args.file)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", args.jobs)))?;
    let results: Vec<Result<ScanEntry, CliError>> = pool.install(|| {
        graphs
            .par_iter()
            .map(|(line, g6, g)| scan_one(*line, g6, g, args.find))
            .collect()
    });
    let mut entries = Vec::with_capacity(results.len());
    for r in results {
        entries.push(r?);
    }
    let mut total = 0;
    for e in &entries {
        total += e.pairs.len();
        if e.classes.is_empty() {
            println!("{}: {} pairs", e.graph6, e.pairs.len());
        } else {
            println!("{}: {} pairs {}", e.graph6, e.pairs.len(), format_classes(&e.classes));
        }
    }
    if let Some(path) = &args.json {
        let mut doc = ReportDocument::new("scan", vec![info], started);
        doc.result = json!({
            "find": match args.find { Find::ScPairs => "sc-pairs", Find::CospectralPairs => "cospectral-pairs" },
            "graphs": entries,
            "total_pairs": total,
        });
        doc.write(path)?;
    }
    Ok(if args.expect_some && total == 0 {
        EXIT_NOT_FOUND
    } else {
        EXIT_OK
    })
}

fn emit_graph(g: &Graph, out: Option<&str>) -> Result<String, CliError> {
    let g6 = serialize_graph(g, GraphFormat::Graph6)?;
    match out {
        Some(path) => {
            std::fs::write(path, format!("{g6}\n")).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
            println!("wrote {path}");
        }
        None => println!("{g6}"),
    }
    Ok(g6)
}

fn construct(kind: ConstructKind, started: Instant) -> Result<i32, CliError> {
    match kind {
        ConstructKind::JoinPath {
            x,
            u,
            y,
            v,
            len,
            out,
            json,
        } => {
            let (lx, ly) = (input::load(&x)?, input::load(&y)?);
            let z = join_by_path(&lx.graph, u, &ly.graph, v, len)?;
            let g6 = emit_graph(&z.graph, out.as_deref())?;
            let verdict = Analyzer::new(&z.graph)?.verdict(z.u, z.v, VerdictMode::Both)?;
            println!("{}", describe(&verdict));
            if let Some(path) = json {
                let mut doc = ReportDocument::new("construct", vec![lx.info, ly.info], started);
                doc.pairs = vec![to_value(&verdict)];
                doc.result = json!({ "construction": "join-path", "graph6": g6, "u": z.u, "v": z.v, "path_len": len });
                doc.write(&path)?;
            }
            Ok(if verdict.strongly_cospectral {
                EXIT_OK
            } else {
                EXIT_NOT_FOUND
            })
        }
        ConstructKind::RabbitEar { x, a, out, json } => {
            let lx = input::load(&x)?;
            let re = rabbit_ear(&lx.graph, a)?;
            let g6 = emit_graph(&re.graph, out.as_deref())?;
            let verdict = Analyzer::new(&re.graph)?.verdict(re.b, re.c, VerdictMode::Both)?;
            println!("{}", describe(&verdict));
            println!(
                "condition mult(0, X\\a) <= mult(0, X): {} ({} <= {})",
                re.condition_holds, re.zero_mult_deleted, re.zero_mult_whole
            );
            if let Some(path) = json {
                let mut doc = ReportDocument::new("construct", vec![lx.info], started);
                doc.pairs = vec![to_value(&verdict)];
                doc.result = json!({ "construction": "rabbit-ear", "graph6": g6, "ear": to_value(&re) });
                doc.write(&path)?;
            }
            if re.condition_holds && !verdict.strongly_cospectral {
                eprintln!("error: condition holds but the pendant pair is not strongly cospectral");
                return Ok(EXIT_INVARIANT);
            }
            Ok(if verdict.strongly_cospectral {
                EXIT_OK
            } else {
                EXIT_NOT_FOUND
            })
        }
    }
}

fn walk(args: WalkArgs, started: Instant) -> Result<i32, CliError> {
    let loaded = input::load(&args.graph)?;
    let g = &loaded.graph;
    let an = Analyzer::new(g)?;
    let d = an.decomposition()?;
    let (a, b) = (args.from, args.to);
    let best = scan_max_transfer(d, a, b, args.tmax, args.steps)?;
    println!(
        "max |U(t)_({a},{b})| = {} at t = {} (refined: {})",
        best.magnitude, best.t_star, best.refined
    );
    if let Some(path) = &args.csv {
        let pts = walk_trace(d, a, b, args.tmax, args.steps)?;
        let file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
        write_trace_csv(&pts, std::io::BufWriter::new(file)).map_err(|e| CliError::Io(e.to_string()))?;
        println!("wrote {path}");
    }
    let mut certs = Vec::new();
    let mut closeness = None;
    if args.certify {
        let t = best.t_star;
        for c in [
            cospectrality_certificate(g, d, a, b, t)?,
            strong_cospectrality_certificate(g, d, a, b, t)?,
        ] {
            println!(
                "certificate kind={} verdict={} vacuous={} t={} observed={} threshold={}",
                to_value(&c.kind).as_str().unwrap_or_default(),
                c.verdict,
                c.vacuous,
                c.t,
                c.observed,
                c.threshold
            );
            certs.push(c);
        }
        let r = closeness_report(g, d, a, b, t)?;
        println!("closeness distance={} close={}: {}", r.distance, r.close, r.conclusion);
        certs.push(r.certificate());
        closeness = Some(r);
    }
    if let Some(path) = &args.json {
        let mut doc = ReportDocument::new("walk", vec![loaded.info], started);
        doc.certificates = certs.iter().map(to_value).collect();
        doc.result = json!({
            "from": a,
            "to": b,
            "tmax": args.tmax,
            "steps": args.steps,
            "scan": best,
            "closeness": closeness,
        });
        doc.write(path)?;
    }
    Ok(EXIT_OK)
}

fn crosscheck(args: CrosscheckArgs, started: Instant) -> Result<i32, CliError> {
    let cfg = CrosscheckConfig {
        max_n: args.max_n,
        seed: args.seed,
        random_graphs: args.random,
        ..CrosscheckConfig::default()
    };
    let reports = run_all(&cfg)?;
    for r in &reports {
        println!("{}: {} passed, {} failed", r.name, r.passed, r.failed);
        for f in &r.failures {
            println!("  {f}");
        }
    }
    let ok = reports.iter().all(|r| r.ok());
    println!("{}", if ok { "all suites pass" } else { "some suites failed" });
    if let Some(path) = &args.json {
        let mut doc = ReportDocument::new("crosscheck", Vec::new(), started);
        doc.result = json!({ "max_n": args.max_n, "seed": args.seed, "random": args.random, "suites": reports });
        doc.write(path)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
}
