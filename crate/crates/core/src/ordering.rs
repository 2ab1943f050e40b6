//! Node orderings: bijections from node id to adjacency-matrix position.

use std::cmp::Reverse;
use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    position_of: Vec<usize>,
}

impl Ordering {
    /// Wraps `position_of[v]`, checking that every position is used exactly once.
    pub fn from_positions(position_of: Vec<usize>) -> Result<Ordering> {
        let n = position_of.len();
        let mut used = vec![false; n];
        for (v, &p) in position_of.iter().enumerate() {
            if p >= n || used[p] {
                return Err(Error::validation(format!(
                    "not a bijection: node {v} maps to position {p}"
                )));
            }
            used[p] = true;
        }
        Ok(Ordering { position_of })
    }

    /// Builds from the node sequence, where `sequence[i]` is the node placed at position `i`.
    pub fn from_sequence(sequence: &[usize]) -> Result<Ordering> {
        let n = sequence.len();
        let mut position_of = vec![usize::MAX; n];
        for (p, &v) in sequence.iter().enumerate() {
            if v >= n || position_of[v] != usize::MAX {
                return Err(Error::validation(format!("not a bijection: node {v} at position {p}")));
            }
            position_of[v] = p;
        }
        Ok(Ordering { position_of })
    }

    pub fn identity(n: usize) -> Ordering {
        Ordering {
            position_of: (0..n).collect(),
        }
    }

    /// Uniform random permutation, reproducible per seed.
    pub fn random(n: usize, seed: u64) -> Ordering {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut position_of: Vec<usize> = (0..n).collect();
        position_of.shuffle(&mut rng);
        Ordering { position_of }
    }

    pub fn len(&self) -> usize {
        self.position_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position_of.is_empty()
    }

    #[inline]
    pub fn position(&self, v: usize) -> usize {
        self.position_of[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position_of
    }

    /// Nodes listed by position.
    pub fn sequence(&self) -> Vec<usize> {
        self.invert().position_of
    }

    pub fn invert(&self) -> Ordering {
        let mut inv = vec![0; self.len()];
        for (v, &p) in self.position_of.iter().enumerate() {
            inv[p] = v;
        }
        Ordering { position_of: inv }
    }

    /// `outer ∘ inner`: node `v` goes to `outer.position(inner.position(v))`.
    pub fn compose(outer: &Ordering, inner: &Ordering) -> Result<Ordering> {
        if outer.len() != inner.len() {
            return Err(Error::validation(format!(
                "cannot compose orderings of sizes {} and {}",
                outer.len(),
                inner.len()
            )));
        }
        Ok(Ordering {
            position_of: inner.position_of.iter().map(|&p| outer.position_of[p]).collect(),
        })
    }
}

/// Largest communities first, ties to the community with the smaller lowest
/// member; inside a community, higher degree first, ties by node id.
pub fn naive_community_ordering(graph: &Graph, partition: &Partition) -> Result<Ordering> {
    let n = graph.num_nodes();
    if partition.len() != n {
        return Err(Error::validation(format!(
            "partition covers {} nodes, graph has {n}",
            partition.len()
        )));
    }
    community_then_degree(partition, &graph.degree_sequence())
}

fn community_then_degree(partition: &Partition, degree: &[usize]) -> Result<Ordering> {
    let n = partition.len();
    let c = partition.num_communities();
    let mut size = vec![0usize; c];
    let mut min_member = vec![usize::MAX; c];
    for v in 0..n {
        let l = partition.label(v);
        size[l] += 1;
        min_member[l] = min_member[l].min(v);
    }
    let mut by_rank: Vec<usize> = (0..c).collect();
    by_rank.sort_unstable_by_key(|&l| (Reverse(size[l]), min_member[l]));
    let mut rank = vec![0; c];
    for (r, &l) in by_rank.iter().enumerate() {
        rank[l] = r;
    }
    let mut seq: Vec<usize> = (0..n).collect();
    seq.sort_unstable_by_key(|&v| (rank[partition.label(v)], Reverse(degree[v]), v));
    Ordering::from_sequence(&seq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlashBurnParams {
    /// Hubs removed per iteration.
    pub k: usize,
}

impl SlashBurnParams {
    /// `max(1, ⌈0.005·n⌉)`.
    pub fn default_for(n: usize) -> SlashBurnParams {
        SlashBurnParams {
            k: ((n as f64 * 0.005).ceil() as usize).max(1),
        }
    }

    /// Interprets values below 1 as a fraction of `n`, anything else as a count.
    pub fn from_count_or_ratio(value: f64, n: usize) -> Result<SlashBurnParams> {
        if value.is_nan() || value <= 0.0 || value.is_infinite() {
            return Err(Error::validation(format!("invalid SlashBurn k {value}")));
        }
        let k = if value < 1.0 {
            ((value * n as f64).ceil() as usize).max(1)
        } else {
            value.round() as usize
        };
        Ok(SlashBurnParams { k })
    }
}

#[derive(Debug, Clone)]
pub struct SlashBurnOrdering {
    pub ordering: Ordering,
    pub iterations: usize,
}

/// Hub-and-spoke ordering by repeated hub removal.
///
/// Each iteration removes the `k` highest-degree nodes of the working graph
/// (degrees recomputed on the working graph) and places them at the lowest
/// free positions. Nodes outside the giant component of what remains are
/// spokes: they fill the highest free positions back to front, by component
/// size, then degree, then id. The giant component becomes the next working
/// graph. When it has fewer than `k` nodes it fills the middle by degree.
/// A remainder whose largest component is a single node has no giant
/// component and is placed entirely as spokes.
pub fn slashburn_ordering(graph: &Graph, params: &SlashBurnParams) -> Result<SlashBurnOrdering> {
    let n = graph.num_nodes();
    let k = params.k;
    if k == 0 || k >= n {
        return Err(Error::validation(format!(
            "SlashBurn k must satisfy 1 <= k < n, got k={k}, n={n}"
        )));
    }

    let mut degree = graph.degree_sequence();
    let mut in_work = vec![true; n];
    let mut working: Vec<usize> = (0..n).collect();
    let mut sequence = vec![usize::MAX; n];
    let (mut front, mut back) = (0usize, n);
    let mut iterations = 0;

    let mut comp_of = vec![usize::MAX; n];
    let mut queue = VecDeque::new();

    while !working.is_empty() {
        iterations += 1;

        let by_degree = |degree: &[usize], v: usize| (Reverse(degree[v]), v);
        let mut hubs = working.clone();
        if hubs.len() > k {
            hubs.select_nth_unstable_by_key(k - 1, |&v| by_degree(&degree, v));
            hubs.truncate(k);
        }
        hubs.sort_unstable_by_key(|&v| by_degree(&degree, v));
        for &h in &hubs {
            sequence[front] = h;
            front += 1;
            in_work[h] = false;
        }
        for &h in &hubs {
            for &w in graph.neighbors(h) {
                if in_work[w as usize] {
                    degree[w as usize] -= 1;
                }
            }
        }

        // Components of the remainder, numbered by smallest member.
        let rest: Vec<usize> = working.iter().copied().filter(|&v| in_work[v]).collect();
        if rest.is_empty() {
            break;
        }
        let mut members: Vec<Vec<usize>> = Vec::new();
        for &s in &rest {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let c = members.len();
            let mut comp = Vec::new();
            comp_of[s] = c;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in graph.neighbors(u) {
                    let w = w as usize;
                    if in_work[w] && comp_of[w] == usize::MAX {
                        comp_of[w] = c;
                        queue.push_back(w);
                    }
                }
            }
            members.push(comp);
        }
        for &v in &rest {
            comp_of[v] = usize::MAX;
        }

        let mut giant = 0;
        for (c, m) in members.iter().enumerate() {
            if m.len() > members[giant].len() {
                giant = c;
            }
        }
        let giant = (members[giant].len() > 1).then_some(giant);

        let mut spoke_comps: Vec<usize> = (0..members.len()).filter(|&c| Some(c) != giant).collect();
        spoke_comps.sort_unstable_by_key(|&c| (Reverse(members[c].len()), c));
        for c in spoke_comps {
            let mut comp = std::mem::take(&mut members[c]);
            comp.sort_unstable_by_key(|&v| by_degree(&degree, v));
            for v in comp {
                back -= 1;
                sequence[back] = v;
                in_work[v] = false;
            }
        }

        working = match giant {
            Some(g) => {
                let mut next = std::mem::take(&mut members[g]);
                next.sort_unstable();
                next
            }
            None => Vec::new(),
        };
        if !working.is_empty() && working.len() < k {
            working.sort_unstable_by_key(|&v| by_degree(&degree, v));
            for &v in &working {
                sequence[front] = v;
                front += 1;
            }
            break;
        }
    }
    debug_assert_eq!(front, back);

    Ok(SlashBurnOrdering {
        ordering: Ordering::from_sequence(&sequence)?,
        iterations,
    })
}
