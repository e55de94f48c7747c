use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use trussdiv::ego::{BuildOptions, EgoCap, EgoSource};
use trussdiv::oracle::{Oracle, ORACLE_DEFAULT_CAP};
use trussdiv::search::{bounded_search_with, online_search_with};
use trussdiv::{
    bitmap_truss_decompose, extract_ego, load_edge_list, load_index, truss_decompose, AnyIndex,
    Error, Graph, RunReport, ScoreRecord, SearchOptions, TopRResult,
};

#[derive(Parser)]
#[command(
    name = "trussdiv",
    version,
    about = "Truss-based structural diversity search"
)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the run report here instead of stderr.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Tab-separated output instead of JSON.
    #[arg(long, global = true)]
    tsv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QueryArgs {
    /// Truss threshold.
    #[arg(short, long, default_value_t = 3)]
    k: u32,
    /// Number of answers.
    #[arg(short, long, default_value_t = 100)]
    r: usize,
    /// Attach social contexts to every answer.
    #[arg(long)]
    contexts: bool,
    /// Fill a short answer with zero-score vertices.
    #[arg(long)]
    pad: bool,
}

impl QueryArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            contexts: self.contexts,
            pad_with_zeros: self.pad,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Online,
    Bounded,
    Tsd,
    Gct,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Tsd,
    Gct,
}

#[derive(Subcommand)]
enum Command {
    /// Top-r most diverse vertices.
    Search {
        graph: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value_t = Algo::Bounded)]
        algo: Algo,
    },
    /// Edge trussness of the graph, or of one ego-network.
    Decompose {
        graph: PathBuf,
        /// Decompose the ego-network of this vertex instead.
        #[arg(long)]
        ego: Option<u64>,
        /// Use the bitmap peeling variant.
        #[arg(long)]
        bitmap: bool,
    },
    /// Score and social contexts of one vertex.
    Score {
        graph: PathBuf,
        #[arg(long)]
        vertex: u64,
        #[arg(short, long, default_value_t = 3)]
        k: u32,
    },
    /// Build a TSD or GCT index and save it as JSON.
    BuildIndex {
        graph: PathBuf,
        #[arg(long = "type", value_enum)]
        kind: Kind,
        #[arg(long)]
        out: PathBuf,
        /// Extract each ego-network separately instead of in one shared pass.
        #[arg(long)]
        per_vertex: bool,
    },
    /// Answer a score or top-r query from a saved index.
    Query {
        index: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        /// Score this vertex instead of ranking.
        #[arg(long)]
        vertex: Option<u64>,
    },
    /// Basic graph statistics.
    Stats {
        graph: PathBuf,
        /// Also run a global truss decomposition.
        #[arg(long)]
        truss: bool,
    },
    /// Run all four search methods and compare their answers.
    Bench {
        graph: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Definitional reference computation (small graphs only).
    #[command(hide = true)]
    Oracle {
        graph: PathBuf,
        #[arg(short, long, default_value_t = 3)]
        k: u32,
        #[arg(short, long, default_value_t = 100)]
        r: usize,
        #[arg(long)]
        vertex: Option<u64>,
        /// Print edge trussness instead.
        #[arg(long)]
        truss: bool,
        #[arg(long, default_value_t = ORACLE_DEFAULT_CAP)]
        cap: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidK(_) | Error::InvalidR { .. } => 2,
        Error::EgoCapExceeded { .. } | Error::OracleCapExceeded { .. } => 4,
        _ => 3,
    }
}

struct Out {
    tsv: bool,
    w: BufWriter<io::Stdout>,
}

impl Out {
    fn json(&mut self, v: &serde_json::Value) -> trussdiv::Result<()> {
        serde_json::to_writer_pretty(&mut self.w, v)?;
        writeln!(self.w)?;
        Ok(())
    }

    fn records(
        &mut self,
        meta: serde_json::Value,
        records: &[ScoreRecord],
    ) -> trussdiv::Result<()> {
        if self.tsv {
            for rec in records {
                write!(self.w, "{}\t{}", rec.vertex, rec.score)?;
                if let Some(c) = &rec.contexts {
                    write!(self.w, "\t{}", contexts_tsv(c))?;
                }
                writeln!(self.w)?;
            }
            Ok(())
        } else {
            let mut v = meta;
            v["results"] = serde_json::to_value(records)?;
            self.json(&v)
        }
    }
}

/// `1,2,3|4,5`: members joined by commas, contexts by bars.
fn contexts_tsv(c: &[Vec<u64>]) -> String {
    c.iter()
        .map(|ctx| ctx.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

fn load(path: &Path, report: &mut RunReport) -> trussdiv::Result<Graph> {
    let (g, summary) = load_edge_list(path)?;
    report.param("graph", path.display().to_string());
    report.param("load", summary);
    report.stats = Some(g.stats());
    Ok(g)
}

fn run_algo(
    g: &Graph,
    algo: Algo,
    q: &QueryArgs,
    report: &mut RunReport,
) -> trussdiv::Result<TopRResult> {
    let opts = q.options();
    let t = Instant::now();
    Ok(match algo {
        Algo::Online => online_search_with(g, q.r, q.k, opts)?,
        Algo::Bounded => bounded_search_with(g, q.r, q.k, opts)?,
        Algo::Tsd => {
            let idx = trussdiv::build_tsd(g)?;
            report.param("build_secs", t.elapsed().as_secs_f64());
            trussdiv::tsd::tsd_topr_with(&idx, q.r, q.k, opts)?
        }
        Algo::Gct => {
            let idx = trussdiv::build_gct(g)?;
            report.param("build_secs", t.elapsed().as_secs_f64());
            trussdiv::gct::gct_topr_with(&idx, q.r, q.k, opts)?
        }
    })
}

fn algo_name(a: Algo) -> &'static str {
    match a {
        Algo::Online => "online",
        Algo::Bounded => "bounded",
        Algo::Tsd => "tsd",
        Algo::Gct => "gct",
    }
}

fn run(cli: &Cli, out: &mut Out, report: &mut RunReport) -> trussdiv::Result<()> {
    match &cli.command {
        Command::Search { graph, query, algo } => {
            let g = load(graph, report)?;
            report
                .param("k", query.k)
                .param("r", query.r)
                .param("algo", algo_name(*algo));
            let res = run_algo(&g, *algo, query, report)?;
            report.with_result(&res);
            out.records(
                json!({"k": query.k, "r": query.r, "algo": algo_name(*algo)}),
                &res.records,
            )
        }
        Command::Decompose { graph, ego, bitmap } => {
            let g = load(graph, report)?;
            report.param("bitmap", bitmap);
            let mut rows: Vec<(u64, u64, u32)> = match ego {
                Some(label) => {
                    report.param("ego", label);
                    let ego = extract_ego(&g, g.vertex(*label)?)?;
                    let tm = if *bitmap {
                        bitmap_truss_decompose(&ego)
                    } else {
                        truss_decompose(ego.graph())
                    };
                    tm.iter()
                        .map(|((a, b), t)| (g.label(ego.global(a)), g.label(ego.global(b)), t))
                        .collect()
                }
                None => {
                    let tm = if *bitmap {
                        trussdiv::truss::bitmap_truss_decompose_graph(&g)
                    } else {
                        truss_decompose(&g)
                    };
                    tm.iter()
                        .map(|((a, b), t)| (g.label(a), g.label(b), t))
                        .collect()
                }
            };
            rows.sort_unstable();
            if out.tsv {
                for (u, v, t) in rows {
                    writeln!(out.w, "{u}\t{v}\t{t}")?;
                }
                Ok(())
            } else {
                let edges: Vec<_> = rows.iter().map(|&(u, v, t)| json!([u, v, t])).collect();
                out.json(&json!({ "edges": edges }))
            }
        }
        Command::Score { graph, vertex, k } => {
            let g = load(graph, report)?;
            report.param("vertex", vertex).param("k", k);
            let rec = trussdiv::compute_score(&g, g.vertex(*vertex)?, *k)?;
            out.records(json!({"k": k}), std::slice::from_ref(&rec))
        }
        Command::BuildIndex {
            graph,
            kind,
            out: path,
            per_vertex,
        } => {
            let g = load(graph, report)?;
            let opts = BuildOptions {
                source: if *per_vertex {
                    EgoSource::PerVertex
                } else {
                    EgoSource::Shared
                },
                cap: EgoCap::from_env(),
            };
            let t = Instant::now();
            let idx = match kind {
                Kind::Tsd => AnyIndex::Tsd(trussdiv::tsd::build_tsd_with(&g, opts)?),
                Kind::Gct => AnyIndex::Gct(trussdiv::gct::build_gct_with(&g, opts)?),
            };
            let build = t.elapsed().as_secs_f64();
            idx.save(path)?;
            report
                .param("type", idx.kind().name())
                .param("build_secs", build)
                .param("storage_units", idx.storage_units());
            out.json(&json!({
                "type": idx.kind().name(),
                "out": path.display().to_string(),
                "vertices": idx.n(),
                "storage_units": idx.storage_units(),
            }))
        }
        Command::Query {
            index,
            query,
            vertex,
        } => {
            let idx = load_index(index)?;
            report
                .param("index", index.display().to_string())
                .param("type", idx.kind().name());
            report.param("k", query.k);
            match vertex {
                Some(label) => {
                    report.param("vertex", label);
                    let rec = idx.score(idx.vertex(*label)?, query.k)?;
                    out.records(json!({"k": query.k}), std::slice::from_ref(&rec))
                }
                None => {
                    report.param("r", query.r);
                    let res = idx.topr(query.r, query.k, query.options())?;
                    report.with_result(&res);
                    out.records(
                        json!({"k": query.k, "r": query.r, "algo": idx.kind().name()}),
                        &res.records,
                    )
                }
            }
        }
        Command::Stats { graph, truss } => {
            let g = load(graph, report)?;
            let mut stats = g.stats();
            if *truss {
                stats.max_edge_trussness = Some(truss_decompose(&g).max_trussness());
            }
            report.stats = Some(stats);
            if out.tsv {
                writeln!(
                    out.w,
                    "{}\t{}\t{}\t{}\t{}",
                    stats.n,
                    stats.m,
                    stats.d_max,
                    stats.triangle_count,
                    stats
                        .max_edge_trussness
                        .map_or("-".into(), |t| t.to_string())
                )?;
                Ok(())
            } else {
                out.json(&serde_json::to_value(stats)?)
            }
        }
        Command::Bench { graph, query } => {
            let g = load(graph, report)?;
            report.param("k", query.k).param("r", query.r);
            let mut rows = Vec::new();
            let mut digests = Vec::new();
            for algo in [Algo::Online, Algo::Bounded, Algo::Tsd, Algo::Gct] {
                let t = Instant::now();
                let mut scratch = RunReport::new("bench");
                let res = run_algo(&g, algo, query, &mut scratch)?;
                let digest = trussdiv::ranking_digest(&res.ranking());
                rows.push(json!({
                    "algo": algo_name(algo),
                    "secs": t.elapsed().as_secs_f64(),
                    "build_secs": scratch.params.get("build_secs"),
                    "search_space": res.search_space,
                    "answers": res.records.len(),
                    "digest": digest,
                }));
                digests.push(digest);
            }
            let agree = digests.windows(2).all(|w| w[0] == w[1]);
            report.param("digests_agree", agree);
            report.digest = digests.first().cloned();
            if out.tsv {
                for row in &rows {
                    writeln!(
                        out.w,
                        "{}\t{:.6}\t{}\t{}",
                        row["algo"].as_str().unwrap_or_default(),
                        row["secs"].as_f64().unwrap_or_default(),
                        row["search_space"],
                        row["digest"].as_str().unwrap_or_default()
                    )?;
                }
                Ok(())
            } else {
                out.json(&json!({"k": query.k, "r": query.r, "runs": rows, "digests_agree": agree}))
            }
        }
        Command::Oracle {
            graph,
            k,
            r,
            vertex,
            truss,
            cap,
        } => {
            let g = load(graph, report)?;
            let o = Oracle::with_cap(&g, *cap)?;
            if *truss {
                let rows = o.truss();
                if out.tsv {
                    for (u, v, t) in rows {
                        writeln!(out.w, "{u}\t{v}\t{t}")?;
                    }
                    return Ok(());
                }
                let edges: Vec<_> = rows.iter().map(|&(u, v, t)| json!([u, v, t])).collect();
                return out.json(&json!({ "edges": edges }));
            }
            if *k < 2 {
                return Err(Error::InvalidK(*k));
            }
            let records: Vec<ScoreRecord> = match vertex {
                Some(label) => {
                    let c = o.score(*label, *k)?;
                    vec![ScoreRecord {
                        vertex: *label,
                        k: *k,
                        score: c.score(),
                        contexts: Some(c.contexts),
                        padded: false,
                    }]
                }
                None => {
                    if *r == 0 || *r > g.n().max(1) {
                        return Err(Error::InvalidR { r: *r, n: g.n() });
                    }
                    let ranking = o.topr(*r, *k)?;
                    report.digest = Some(trussdiv::ranking_digest(&ranking));
                    ranking
                        .into_iter()
                        .map(|(vertex, score)| ScoreRecord {
                            vertex,
                            k: *k,
                            score,
                            contexts: None,
                            padded: false,
                        })
                        .collect()
                }
            };
            out.records(json!({"k": k, "algo": "oracle"}), &records)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Search { .. } => "search",
        Command::Decompose { .. } => "decompose",
        Command::Score { .. } => "score",
        Command::BuildIndex { .. } => "build-index",
        Command::Query { .. } => "query",
        Command::Stats { .. } => "stats",
        Command::Bench { .. } => "bench",
        Command::Oracle { .. } => "oracle",
    }
}

fn emit_report(report: &RunReport, path: Option<&Path>) -> io::Result<()> {
    let text = serde_json::to_string(report).map_err(io::Error::other)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n"),
        None => writeln!(io::stderr(), "{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    };

    let mut report = RunReport::new(command_name(&cli.command));
    report.param("threads", pool.current_num_threads());
    let mut out = Out {
        tsv: cli.tsv,
        w: BufWriter::new(io::stdout()),
    };
    let start = Instant::now();
    let result = pool.install(|| run(&cli, &mut out, &mut report));
    let result = result.and_then(|()| out.w.flush().map_err(Error::from));
    report.elapsed_secs = start.elapsed().as_secs_f64();
    match result {
        Ok(()) => {
            if let Err(e) = emit_report(&report, cli.report.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
