//! Text and JSON formats for partitions, orderings and dataset manifests.
//!
//! Partitions are written one `node_id community_id` pair per line; orderings
//! one node id per line, line `i` holding the node placed at position `i`.
//! Both carry a JSON sidecar with run metadata.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::ordering::Ordering;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionMeta {
    pub method: String,
    pub seed: u64,
    pub objective: f64,
    pub num_communities: usize,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingMeta {
    pub strategy: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub iterations: Option<usize>,
}

/// `out.txt` → `out.txt.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn write_partition<W: Write>(partition: &Partition, mut out: W) -> Result<()> {
    for (v, &c) in partition.labels().iter().enumerate() {
        writeln!(out, "{v} {c}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_partition<R: BufRead>(reader: R) -> Result<Partition> {
    let mut labels = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: format!("expected `node community`, got {line:?}"),
            })
        };
        let mut toks = line.split_whitespace();
        let node = parse(toks.next())?;
        let community = parse(toks.next())?;
        if node != labels.len() {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected node {}, got {node}", labels.len()),
            });
        }
        labels.push(community);
    }
    Ok(Partition::from_labels(&labels))
}

pub fn write_ordering<W: Write>(ordering: &Ordering, mut out: W) -> Result<()> {
    for v in ordering.sequence() {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_ordering<R: BufRead>(reader: R) -> Result<Ordering> {
    let mut seq = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        seq.push(line.parse::<usize>().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("expected a node id, got {line:?}"),
        })?);
    }
    Ordering::from_sequence(&seq)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

/// Dataset names of the reference benchmark, in table order.
pub const REFERENCE_DATASETS: [&str; 10] = [
    "facebook",
    "blogcatalog",
    "livemocha",
    "academia",
    "googleplus",
    "twitterhiggs",
    "delicious",
    "lastfm",
    "youtube",
    "hyves",
];

/// Reads a JSON object mapping dataset name to edge-list path. Relative
/// paths resolve against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let raw: BTreeMap<String, PathBuf> = read_json(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(raw
        .into_iter()
        .map(|(name, p)| {
            let p = if p.is_relative() { base.join(p) } else { p };
            (name, p)
        })
        .collect())
}
