//! The load → detect → order → cost pipeline.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::time::Instant;

use log::{error, info, warn};
use rayon::prelude::*;

use commpress::{
    block_histogram, naive_community_ordering, slashburn_ordering, CostParams, CostReport, DetectParams, Graph,
    Ordering, SlashBurnParams,
};

use crate::config::{BenchMethod, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::report::ReportRow;

/// Settings shared by every `(dataset, method)` cell of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct CellParams {
    pub seed: u64,
    pub block_widths: Vec<usize>,
    pub slashburn_k: Option<f64>,
    pub timings: bool,
}

impl From<&ExperimentConfig> for CellParams {
    fn from(c: &ExperimentConfig) -> Self {
        CellParams {
            seed: c.seed,
            block_widths: c.block_widths.clone(),
            slashburn_k: c.slashburn_k,
            timings: c.timings,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// Rows in config order: datasets, then methods, then block widths.
    pub rows: Vec<ReportRow>,
    /// One message per dataset or cell that failed.
    pub failures: Vec<String>,
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    let file = File::open(path).map_err(|e| BenchError::Runtime(format!("cannot open {}: {e}", path.display())))?;
    let loaded = Graph::load_edge_list(BufReader::new(file))?;
    if loaded.duplicates_dropped > 0 || loaded.self_loops_dropped > 0 {
        info!(
            "{}: dropped {} duplicate edges and {} self-loops",
            path.display(),
            loaded.duplicates_dropped,
            loaded.self_loops_dropped
        );
    }
    Ok(loaded.graph)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Orders one graph with one method and costs it at every block width.
pub fn run_cell(dataset: &str, graph: &Graph, method: BenchMethod, params: &CellParams) -> Result<Vec<ReportRow>> {
    let n = graph.num_nodes();
    let mut detect_ms = None;
    let mut num_communities = None;
    let mut objective = None;

    let start = Instant::now();
    let ordering = match method {
        BenchMethod::Community(m) => {
            let detection = m.detect(graph, &DetectParams::with_seed(params.seed))?;
            for w in &detection.warnings {
                warn!("{dataset}/{m}: {w}");
            }
            detect_ms = Some(elapsed_ms(start));
            num_communities = Some(detection.partition.num_communities());
            objective = Some(detection.objective);
            naive_community_ordering(graph, &detection.partition)?
        }
        BenchMethod::SlashBurn => {
            let sb = match params.slashburn_k {
                Some(k) => SlashBurnParams::from_count_or_ratio(k, n)?,
                None => SlashBurnParams::default_for(n),
            };
            slashburn_ordering(graph, &sb)?.ordering
        }
        BenchMethod::Random => Ordering::random(n, params.seed),
        BenchMethod::Identity => Ordering::identity(n),
    };
    let order_ms = elapsed_ms(start) - detect_ms.unwrap_or(0.0);

    let mut rows = Vec::with_capacity(params.block_widths.len());
    for &b in &params.block_widths {
        let start = Instant::now();
        let hist = block_histogram(graph, &ordering, &CostParams::new(b)?)?;
        let report = CostReport::from_histogram(&hist, graph.num_edges())?;
        let cost_ms = elapsed_ms(start);
        let keep = |v: Option<f64>| if params.timings { v } else { None };
        rows.push(ReportRow {
            dataset: dataset.to_owned(),
            method: method.name().to_owned(),
            seed: params.seed,
            b,
            n,
            m: report.m,
            num_communities,
            objective,
            cost1: report.nonempty_blocks,
            nonempty_fraction: report.nonempty_fraction,
            cost2_total_bits: report.total_bits,
            bits_per_link: report.bits_per_link,
            detect_ms: keep(detect_ms),
            order_ms: keep(Some(order_ms)),
            cost_ms: keep(Some(cost_ms)),
        });
    }
    Ok(rows)
}

/// Runs every `(dataset, method)` cell on a pool of `config.jobs` threads.
/// Each dataset is read once. Failed datasets and cells are logged and
/// listed in the outcome; it is an error only when nothing succeeded.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    let datasets = config.resolve_datasets()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| BenchError::Runtime(format!("thread pool: {e}")))?;
    let params = CellParams::from(config);

    pool.install(|| {
        let graphs: Vec<Result<Graph>> = datasets.par_iter().map(|d| load_graph(&d.path)).collect();
        let mut failures = Vec::new();
        let mut loaded = Vec::new();
        for (d, g) in datasets.iter().zip(graphs) {
            match g {
                Ok(g) => {
                    info!("{}: n={} m={}", d.name, g.num_nodes(), g.num_edges());
                    loaded.push((d.name.as_str(), g));
                }
                Err(e) => {
                    let msg = format!("dataset {}: {e}", d.name);
                    error!("{msg}");
                    failures.push(msg);
                }
            }
        }
        if loaded.is_empty() {
            return Err(BenchError::Runtime("every dataset failed to load".into()));
        }

        let cells: Vec<(usize, BenchMethod)> = (0..loaded.len())
            .flat_map(|i| config.methods.iter().map(move |&m| (i, m)))
            .collect();
        let results: Vec<Result<Vec<ReportRow>>> = cells
            .par_iter()
            .map(|&(i, method)| {
                let (name, graph) = &loaded[i];
                info!("{name}/{method}: start");
                run_cell(name, graph, method, &params)
            })
            .collect();

        let mut rows = Vec::new();
        for (&(i, method), result) in cells.iter().zip(results) {
            match result {
                Ok(r) => rows.extend(r),
                Err(e) => {
                    let msg = format!("{}/{method}: {e}", loaded[i].0);
                    error!("{msg}");
                    failures.push(msg);
                }
            }
        }
        if rows.is_empty() {
            return Err(BenchError::Runtime("no cell produced results".into()));
        }
        Ok(RunOutcome { rows, failures })
    })
}
