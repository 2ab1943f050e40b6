//! Non-overlapping community detection and partition scoring.
//!
//! Five detectors produce a [`Partition`]: label propagation, multilevel
//! (Louvain) and fast greedy (CNM) modularity optimization, leading-eigenvector
//! bisection, and a two-level map-equation optimizer. Each run is
//! single-threaded and deterministic for a given seed.

mod fast_greedy;
mod infomap;
mod label_propagation;
mod leading_eigenvector;
mod louvain;
mod modularity;
mod weighted;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use fast_greedy::fast_greedy;
pub use infomap::{infomap_two_level, map_equation_codelength};
pub use label_propagation::label_propagation;
pub use leading_eigenvector::{leading_eigenvector, LeadingEigenvector};
pub use louvain::louvain_multilevel;
pub use modularity::modularity;

/// Node-to-community labels, numbered `0..c` in order of each community's
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    label_of: Vec<usize>,
    num_communities: usize,
}

impl Partition {
    /// Canonicalizes arbitrary labels.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Partition {
        let mut map = std::collections::HashMap::new();
        let label_of = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Partition {
            label_of,
            num_communities: map.len(),
        }
    }

    pub fn single(n: usize) -> Partition {
        Partition {
            label_of: vec![0; n],
            num_communities: usize::from(n > 0),
        }
    }

    pub fn singletons(n: usize) -> Partition {
        Partition {
            label_of: (0..n).collect(),
            num_communities: n,
        }
    }

    pub fn len(&self) -> usize {
        self.label_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.label_of.is_empty()
    }

    #[inline]
    pub fn label(&self, v: usize) -> usize {
        self.label_of[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.label_of
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_communities];
        for &l in &self.label_of {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 0;
        for &l in &self.label_of {
            if l > next {
                return false;
            }
            if l == next {
                next += 1;
            }
        }
        next == self.num_communities
    }

    pub(crate) fn check_covers(&self, graph: &Graph) -> Result<()> {
        if self.len() != graph.num_nodes() {
            return Err(Error::validation(format!(
                "partition covers {} nodes, graph has {}",
                self.len(),
                graph.num_nodes()
            )));
        }
        Ok(())
    }
}

/// Knobs for randomized and iterative detectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectParams {
    pub seed: u64,
    /// Sweep cap for label propagation and local moving; lower bound on the
    /// per-split power-iteration cap of the eigenvector method.
    pub max_iterations: usize,
    /// Power-iteration convergence threshold.
    pub tolerance: f64,
}

impl Default for DetectParams {
    fn default() -> Self {
        DetectParams {
            seed: 0,
            max_iterations: 1000,
            tolerance: 1e-9,
        }
    }
}

impl DetectParams {
    pub fn with_seed(seed: u64) -> Self {
        DetectParams {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::validation("max_iterations must be at least 1"));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::validation("tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    LabelProp,
    MultiLevel,
    FastGreedy,
    LeadingEigen,
    Infomap,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::LabelProp,
        Method::MultiLevel,
        Method::FastGreedy,
        Method::LeadingEigen,
        Method::Infomap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::LabelProp => "labelprop",
            Method::MultiLevel => "multilevel",
            Method::FastGreedy => "fastgreedy",
            Method::LeadingEigen => "leadingeigen",
            Method::Infomap => "infomap",
        }
    }

    /// Name of the score reported for this method.
    pub fn objective_name(self) -> &'static str {
        match self {
            Method::Infomap => "codelength",
            _ => "modularity",
        }
    }

    pub fn detect(self, graph: &Graph, params: &DetectParams) -> Result<Detection> {
        params.validate()?;
        let mut warnings = Vec::new();
        let partition = match self {
            Method::LabelProp => label_propagation(graph, params),
            Method::MultiLevel => louvain_multilevel(graph, params),
            Method::FastGreedy => fast_greedy(graph, params),
            Method::LeadingEigen => {
                let r = LeadingEigenvector::run(graph, params);
                warnings = r.warnings;
                r.partition
            }
            Method::Infomap => infomap_two_level(graph, params),
        };
        let objective = match self {
            Method::Infomap => map_equation_codelength(graph, &partition)?,
            _ => modularity(graph, &partition)?,
        };
        Ok(Detection {
            method: self,
            partition,
            objective,
            warnings,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::validation(format!("unknown detection method {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct Detection {
    pub method: Method,
    pub partition: Partition,
    /// Modularity, or codelength in bits for the map-equation method.
    pub objective: f64,
    pub warnings: Vec<String>,
}

#[cfg(test)]
pub(crate) mod testgraphs {
    use crate::graph::Graph;

    pub fn cliques(count: usize, size: usize, bridges: &[(usize, usize)]) -> Graph {
        let mut edges = Vec::new();
        for c in 0..count {
            for a in 0..size {
                for b in a + 1..size {
                    edges.push((c * size + a, c * size + b));
                }
            }
        }
        edges.extend_from_slice(bridges);
        Graph::from_edges(count * size, &edges).unwrap()
    }

    pub fn two_triangles() -> Graph {
        cliques(2, 3, &[])
    }

    pub fn bridged_triangles() -> Graph {
        cliques(2, 3, &[(2, 3)])
    }

    /// Every set partition of `0..n` as canonical label vectors.
    pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
        fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
            if i == n {
                out.push(cur.clone());
                return;
            }
            for l in 0..=max {
                cur.push(l);
                rec(i + 1, n, cur, max.max(l + 1), out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, n, &mut Vec::new(), 0, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.num_communities(), 3);
        assert!(p.is_canonical());
        assert_eq!(p.community_sizes(), vec![2, 1, 1]);
        assert_eq!(Partition::singletons(3).num_communities(), 3);
    }

    #[test]
    fn params_validation() {
        assert!(DetectParams::default().validate().is_ok());
        let bad = DetectParams {
            max_iterations: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = DetectParams {
            tolerance: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("slashburn".parse::<Method>().is_err());
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(testgraphs::all_partitions(4).len(), 15);
        assert_eq!(testgraphs::all_partitions(6).len(), 203);
    }
}
