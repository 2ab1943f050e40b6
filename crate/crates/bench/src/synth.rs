//! Seeded synthetic graphs for tests and desk-scale benchmarks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use commpress::Graph;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SynthSpec {
    /// `cliques` disjoint cliques of `size` nodes, plus each pair of nodes in
    /// different cliques joined independently with probability `eps`.
    PlantedCliques { cliques: usize, size: usize, eps: f64 },
    /// Preferential attachment: node 1 links to node 0, every later node to
    /// `attach` distinct earlier nodes chosen proportionally to degree.
    PowerLaw { n: usize, attach: usize },
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SynthSpec::PlantedCliques { cliques, size, eps } => {
                if cliques == 0 || size == 0 {
                    return Err(BenchError::config("planted-cliques needs cliques >= 1 and size >= 1"));
                }
                if !(0.0..=1.0).contains(&eps) {
                    return Err(BenchError::config(format!("eps {eps} outside [0, 1]")));
                }
            }
            SynthSpec::PowerLaw { n, attach } => {
                if n < 2 || attach == 0 {
                    return Err(BenchError::config("power-law needs n >= 2 and attach >= 1"));
                }
            }
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        match *self {
            SynthSpec::PlantedCliques { cliques, size, .. } => cliques * size,
            SynthSpec::PowerLaw { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    PlantedCliques,
    PowerLaw,
}

impl FromStr for SynthKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "planted-cliques" => Ok(SynthKind::PlantedCliques),
            "power-law" => Ok(SynthKind::PowerLaw),
            _ => Err(BenchError::config(format!(
                "unknown synthetic kind {s:?} (expected planted-cliques or power-law)"
            ))),
        }
    }
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SynthKind::PlantedCliques => "planted-cliques",
            SynthKind::PowerLaw => "power-law",
        })
    }
}

pub fn make_synthetic(spec: &SynthSpec, seed: u64) -> Result<Graph> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = match *spec {
        SynthSpec::PlantedCliques { cliques, size, eps } => planted_cliques(cliques, size, eps, &mut rng),
        SynthSpec::PowerLaw { n, attach } => preferential_attachment(n, attach, &mut rng),
    };
    Ok(Graph::from_edges(spec.num_nodes(), &edges)?)
}

fn planted_cliques(cliques: usize, size: usize, eps: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let n = cliques * size;
    let mut edges = Vec::new();
    for c in 0..cliques {
        let base = c * size;
        for a in 0..size {
            for b in a + 1..size {
                edges.push((base + a, base + b));
            }
        }
    }
    if eps <= 0.0 {
        return edges;
    }
    // Walk all pairs u < v in lexicographic order, jumping geometrically
    // between successes; intra-clique hits are already present.
    let log_fail = (1.0 - eps).ln();
    let mut gap = || -> usize {
        if eps >= 1.0 {
            return 0;
        }
        let u: f64 = rng.gen();
        ((1.0 - u).ln() / log_fail).floor().min(usize::MAX as f64 / 2.0) as usize
    };
    let mut skip = gap();
    for u in 0..n {
        let mut v = u + 1;
        loop {
            let remaining = n - v;
            if skip >= remaining {
                skip -= remaining;
                break;
            }
            v += skip;
            if u / size != v / size {
                edges.push((u, v));
            }
            skip = gap();
            v += 1;
        }
    }
    edges
}

fn preferential_attachment(n: usize, attach: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = vec![(0, 1)];
    let mut endpoints = vec![0usize, 1];
    let mut chosen = Vec::with_capacity(attach);
    for t in 2..n {
        chosen.clear();
        let want = attach.min(t);
        while chosen.len() < want {
            let target = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&target) {
                chosen.push(target);
            }
        }
        for &target in &chosen {
            edges.push((target, t));
            endpoints.push(target);
            endpoints.push(t);
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_cliques_without_noise() {
        let g = make_synthetic(
            &SynthSpec::PlantedCliques {
                cliques: 2,
                size: 4,
                eps: 0.0,
            },
            1,
        )
        .unwrap();
        assert_eq!((g.num_nodes(), g.num_edges()), (8, 12));
        assert_eq!(g.connected_components().component_sizes, vec![4, 4]);
    }

    #[test]
    fn planted_cliques_noise_rate() {
        let spec = SynthSpec::PlantedCliques {
            cliques: 10,
            size: 20,
            eps: 0.05,
        };
        let g = make_synthetic(&spec, 9).unwrap();
        let inter = g.num_edges() - 10 * 190;
        let pairs = (200 * 199 / 2 - 10 * 190) as f64;
        let expected = 0.05 * pairs;
        assert!((inter as f64 - expected).abs() < 4.0 * (expected * 0.95).sqrt());
        let full = make_synthetic(
            &SynthSpec::PlantedCliques {
                cliques: 3,
                size: 2,
                eps: 1.0,
            },
            0,
        )
        .unwrap();
        assert_eq!(full.num_edges(), 15);
    }

    #[test]
    fn power_law_edge_count_and_connectivity() {
        let g = make_synthetic(&SynthSpec::PowerLaw { n: 1000, attach: 2 }, 3).unwrap();
        assert_eq!(g.num_edges(), 1997);
        assert_eq!(g.connected_components().num_components(), 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = SynthSpec::PowerLaw { n: 500, attach: 3 };
        assert_eq!(make_synthetic(&spec, 4).unwrap(), make_synthetic(&spec, 4).unwrap());
        assert_ne!(make_synthetic(&spec, 4).unwrap(), make_synthetic(&spec, 5).unwrap());
    }

    #[test]
    fn invalid_params() {
        assert!(make_synthetic(&SynthSpec::PowerLaw { n: 1, attach: 2 }, 0).is_err());
        assert!(make_synthetic(
            &SynthSpec::PlantedCliques {
                cliques: 2,
                size: 3,
                eps: 1.5
            },
            0
        )
        .is_err());
        assert!("ring".parse::<SynthKind>().is_err());
    }
}
