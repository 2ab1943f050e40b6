//! Block-encoding storage costs of an ordered adjacency matrix.
//!
//! The matrix `A'` (rows and columns placed by an [`Ordering`]) is tiled with
//! `b × b` blocks. `cost1` counts the tiles holding at least one 1; `cost2`
//! is the entropy bound of a block-wise code:
//!
//! ```text
//! cost2 = |B|·2·log₂(n/b) + Σ_{β∈B} b²·H(z(β)/b²)
//! ```
//!
//! where `B` is the set of non-empty blocks and `z(β)` the 1s inside block
//! `β`. Both triangles of the symmetric matrix are costed, and tiles on the
//! ragged edge (when `b ∤ n`) keep the full capacity `b²`. The dense matrix
//! is never built: the histogram is accumulated one row of blocks at a time.

use std::io::Write;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ordering::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostParams {
    /// Block width in matrix cells.
    pub b: usize,
}

impl CostParams {
    pub fn new(b: usize) -> Result<CostParams> {
        if b == 0 {
            return Err(Error::validation("block width must be at least 1"));
        }
        Ok(CostParams { b })
    }
}

/// Binary Shannon entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(p));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    let q = 1.0 - p;
    Ok(-p * p.log2() - q * q.log2())
}

/// Non-empty blocks with their 1-counts, sorted by `(row_block, col_block)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockHistogram {
    pub b: usize,
    pub n: usize,
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub row: usize,
    pub col: usize,
    pub ones: u64,
}

impl BlockHistogram {
    pub fn nonempty(&self) -> usize {
        self.blocks.len()
    }

    pub fn total_ones(&self) -> u64 {
        self.blocks.iter().map(|b| b.ones).sum()
    }

    /// Number of tiles per side, `⌈n/b⌉`.
    pub fn blocks_per_side(&self) -> usize {
        self.n.div_ceil(self.b)
    }

    /// Writes `row_block col_block z` lines, at most `limit` of them.
    pub fn dump<W: Write>(&self, mut out: W, limit: usize) -> Result<()> {
        for blk in self.blocks.iter().take(limit) {
            writeln!(out, "{} {} {}", blk.row, blk.col, blk.ones)?;
        }
        Ok(())
    }
}

fn check_sizes(graph: &Graph, ordering: &Ordering) -> Result<()> {
    if ordering.len() != graph.num_nodes() {
        return Err(Error::validation(format!(
            "ordering covers {} nodes, graph has {}",
            ordering.len(),
            graph.num_nodes()
        )));
    }
    Ok(())
}

/// Attributes both symmetric cells of every edge to their blocks.
pub fn block_histogram(graph: &Graph, ordering: &Ordering, params: &CostParams) -> Result<BlockHistogram> {
    check_sizes(graph, ordering)?;
    let b = CostParams::new(params.b)?.b;
    let n = graph.num_nodes();
    let sequence = ordering.sequence();
    let mut blocks = Vec::new();
    let mut cols: Vec<usize> = Vec::new();
    for (row, chunk) in sequence.chunks(b).enumerate() {
        cols.clear();
        for &u in chunk {
            cols.extend(graph.neighbors(u).iter().map(|&v| ordering.position(v as usize) / b));
        }
        cols.sort_unstable();
        for run in cols.chunk_by(|a, b| a == b) {
            blocks.push(Block {
                row,
                col: run[0],
                ones: run.len() as u64,
            });
        }
    }
    Ok(BlockHistogram { b, n, blocks })
}

/// Number of non-empty `b × b` blocks.
pub fn cost1(graph: &Graph, ordering: &Ordering, params: &CostParams) -> Result<usize> {
    Ok(block_histogram(graph, ordering, params)?.nonempty())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub b: usize,
    pub n: usize,
    pub m: usize,
    /// cost1.
    pub nonempty_blocks: usize,
    /// `nonempty_blocks / ⌈n/b⌉²`.
    pub nonempty_fraction: f64,
    /// Block-address bits, `|B|·2·log₂(n/b)`, clamped at zero when `n < b`.
    pub meta_bits: f64,
    /// `Σ b²·H(z/b²)`.
    pub data_bits: f64,
    /// cost2.
    pub total_bits: f64,
    /// `total_bits / m`, with `m` the undirected edge count.
    pub bits_per_link: f64,
    pub meta_clamped: bool,
}

impl CostReport {
    pub fn from_histogram(hist: &BlockHistogram, m: usize) -> Result<CostReport> {
        if m == 0 {
            return Err(Error::NoLinks);
        }
        let (n, b) = (hist.n, hist.b);
        let capacity = (b as f64) * (b as f64);
        let mut data_bits = 0.0;
        for blk in &hist.blocks {
            data_bits += capacity * binary_entropy(blk.ones as f64 / capacity)?;
        }
        let address_bits = 2.0 * (n as f64 / b as f64).log2();
        let meta_clamped = address_bits < 0.0;
        if meta_clamped {
            warn!("n={n} is smaller than block width {b}; block-address bits clamped to 0");
        }
        let meta_bits = hist.nonempty() as f64 * address_bits.max(0.0);
        let total_bits = meta_bits + data_bits;
        let side = hist.blocks_per_side() as f64;
        Ok(CostReport {
            b,
            n,
            m,
            nonempty_blocks: hist.nonempty(),
            nonempty_fraction: hist.nonempty() as f64 / (side * side),
            meta_bits,
            data_bits,
            total_bits,
            bits_per_link: total_bits / m as f64,
            meta_clamped,
        })
    }
}

/// Entropy-bound bits of the block-wise code, with cost1 alongside.
pub fn cost2(graph: &Graph, ordering: &Ordering, params: &CostParams) -> Result<CostReport> {
    let hist = block_histogram(graph, ordering, params)?;
    CostReport::from_histogram(&hist, graph.num_edges())
}

/// One report per `(ordering, b)`, orderings outermost.
pub fn sweep(graph: &Graph, orderings: &[Ordering], block_widths: &[usize]) -> Result<Vec<CostReport>> {
    let mut out = Vec::with_capacity(orderings.len() * block_widths.len());
    for ordering in orderings {
        for &b in block_widths {
            out.push(cost2(graph, ordering, &CostParams::new(b)?)?);
        }
    }
    Ok(out)
}
