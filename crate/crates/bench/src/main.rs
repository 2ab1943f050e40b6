use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::{error, warn};

use commpress::community::Method;
use commpress::io::{self, OrderingMeta, PartitionMeta};
use commpress::{
    block_histogram, naive_community_ordering, slashburn_ordering, CostParams, CostReport, DetectParams, Ordering,
    SlashBurnParams,
};
use commpress_bench::config::{BenchMethod, ExperimentConfig};
use commpress_bench::error::{BenchError, Result};
use commpress_bench::report::{emit_csv, emit_json};
use commpress_bench::runner::{load_graph, run_experiment};
use commpress_bench::synth::{make_synthetic, SynthKind, SynthSpec};

#[derive(Parser)]
#[command(name = "bench", version, about = "Community-ordering compression benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured experiment and write the result table.
    Run(RunArgs),
    /// Detect communities and write `node community` lines.
    Detect {
        #[arg(long)]
        method: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a node ordering and write one node id per position.
    Order {
        #[arg(long, value_enum)]
        strategy: Strategy,
        /// Partition file, required by community-naive.
        #[arg(long)]
        partition: Option<PathBuf>,
        /// SlashBurn hubs per iteration: a count, or a fraction of n below 1.
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the block costs of an ordering as JSON.
    Cost {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        order: PathBuf,
        #[arg(long)]
        block_width: usize,
        /// Also print `row_block col_block z` lines to stderr.
        #[arg(long)]
        dump_blocks: bool,
        /// Maximum number of dumped blocks.
        #[arg(long, default_value_t = 1000)]
        dump_limit: usize,
    },
    /// Generate a synthetic edge list.
    Synth {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        cliques: Option<usize>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        attach: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Every config key can be overridden by the flag of the same name.
#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json_output: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Comma-separated method names.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Comma-separated block widths.
    #[arg(long, value_delimiter = ',')]
    block_widths: Option<Vec<usize>>,
    #[arg(long)]
    slashburn_k: Option<f64>,
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    CommunityNaive,
    Slashburn,
    Random,
    Identity,
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::CommunityNaive => "community-naive",
            Strategy::Slashburn => "slashburn",
            Strategy::Random => "random",
            Strategy::Identity => "identity",
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BENCH_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Detect {
            method,
            graph,
            seed,
            out,
        } => detect(&method, &graph, seed, &out),
        Command::Order {
            strategy,
            partition,
            k,
            seed,
            graph,
            out,
        } => order(strategy, partition.as_deref(), k, seed, &graph, &out),
        Command::Cost {
            graph,
            order,
            block_width,
            dump_blocks,
            dump_limit,
        } => cost(&graph, &order, block_width, dump_blocks.then_some(dump_limit)),
        Command::Synth {
            kind,
            cliques,
            size,
            eps,
            n,
            attach,
            seed,
            out,
        } => synth(&kind, cliques, size, eps, n, attach, seed, &out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(j) = args.jobs {
        config.jobs = j;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(o) = args.output {
        config.output = o;
    }
    if let Some(o) = args.json_output {
        config.json_output = Some(o);
    }
    if let Some(m) = args.manifest {
        config.manifest = Some(m);
    }
    if let Some(ms) = args.methods {
        config.methods = ms.iter().map(|m| m.parse()).collect::<Result<Vec<BenchMethod>>>()?;
    }
    if let Some(bs) = args.block_widths {
        config.block_widths = bs;
    }
    if let Some(k) = args.slashburn_k {
        config.slashburn_k = Some(k);
    }
    config.timings |= args.timings;
    config.validate()?;

    let outcome = run_experiment(&config)?;
    emit_csv(&outcome.rows, &config.output)?;
    if let Some(p) = &config.json_output {
        emit_json(&outcome.rows, p)?;
    }
    if outcome.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} failure(s); partial results written", outcome.failures.len());
        Ok(ExitCode::from(1))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn detect(method: &str, graph: &Path, seed: u64, out: &Path) -> Result<ExitCode> {
    let method: Method = method
        .parse()
        .map_err(|e: commpress::Error| BenchError::config(e.to_string()))?;
    let g = load_graph(graph)?;
    let start = Instant::now();
    let detection = method.detect(&g, &DetectParams::with_seed(seed))?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    for w in &detection.warnings {
        warn!("{w}");
    }
    io::write_partition(&detection.partition, create(out)?)?;
    let meta = PartitionMeta {
        method: method.name().to_owned(),
        seed,
        objective: detection.objective,
        num_communities: detection.partition.num_communities(),
        runtime_ms,
    };
    io::write_json(&meta, &io::sidecar_path(out))?;
    Ok(ExitCode::SUCCESS)
}

fn order(
    strategy: Strategy,
    partition: Option<&Path>,
    k: Option<f64>,
    seed: u64,
    graph: &Path,
    out: &Path,
) -> Result<ExitCode> {
    let g = load_graph(graph)?;
    let n = g.num_nodes();
    let mut params = BTreeMap::new();
    let mut iterations = None;
    let ordering = match strategy {
        Strategy::CommunityNaive => {
            let path = partition.ok_or_else(|| BenchError::config("community-naive needs --partition"))?;
            let p = io::read_partition(BufReader::new(File::open(path)?))?;
            params.insert("partition".to_owned(), path.display().to_string().into());
            naive_community_ordering(&g, &p)?
        }
        Strategy::Slashburn => {
            let sb = match k {
                Some(k) => SlashBurnParams::from_count_or_ratio(k, n),
                None => Ok(SlashBurnParams::default_for(n)),
            }
            .map_err(|e| BenchError::config(e.to_string()))?;
            params.insert("k".to_owned(), sb.k.into());
            let r = slashburn_ordering(&g, &sb)?;
            iterations = Some(r.iterations);
            r.ordering
        }
        Strategy::Random => {
            params.insert("seed".to_owned(), seed.into());
            Ordering::random(n, seed)
        }
        Strategy::Identity => Ordering::identity(n),
    };
    io::write_ordering(&ordering, create(out)?)?;
    let meta = OrderingMeta {
        strategy: strategy.name().to_owned(),
        params,
        iterations,
    };
    io::write_json(&meta, &io::sidecar_path(out))?;
    Ok(ExitCode::SUCCESS)
}

fn cost(graph: &Path, order: &Path, b: usize, dump_limit: Option<usize>) -> Result<ExitCode> {
    let params = CostParams::new(b).map_err(|e| BenchError::config(e.to_string()))?;
    let g = load_graph(graph)?;
    let ordering = io::read_ordering(BufReader::new(File::open(order)?))?;
    let hist = block_histogram(&g, &ordering, &params)?;
    let report = CostReport::from_histogram(&hist, g.num_edges())?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    if let Some(limit) = dump_limit {
        let stderr = std::io::stderr();
        let mut err = stderr.lock();
        writeln!(err, "# row_block col_block z")?;
        hist.dump(&mut err, limit)?;
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn synth(
    kind: &str,
    cliques: Option<usize>,
    size: Option<usize>,
    eps: f64,
    n: Option<usize>,
    attach: usize,
    seed: u64,
    out: &Path,
) -> Result<ExitCode> {
    let missing = |flag: &str| BenchError::config(format!("{kind} needs --{flag}"));
    let spec = match kind.parse::<SynthKind>()? {
        SynthKind::PlantedCliques => SynthSpec::PlantedCliques {
            cliques: cliques.ok_or_else(|| missing("cliques"))?,
            size: size.ok_or_else(|| missing("size"))?,
            eps,
        },
        SynthKind::PowerLaw => SynthSpec::PowerLaw {
            n: n.ok_or_else(|| missing("n"))?,
            attach,
        },
    };
    let g = make_synthetic(&spec, seed)?;
    let mut w = create(out)?;
    g.write_edge_list(&mut w)?;
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
