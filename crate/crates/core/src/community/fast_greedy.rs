use std::cmp::Ordering as CmpOrdering;
use std::collections::{BinaryHeap, HashMap};

use crate::community::{DetectParams, Partition};
use crate::graph::Graph;

/// Agglomerative modularity maximization (Clauset–Newman–Moore).
///
/// Starts from singletons and repeatedly merges the pair of adjacent
/// communities with the largest modularity gain, stopping once no merge has a
/// positive gain. Modularity rises with every accepted merge, so the final
/// state is the peak of the merge sequence.
///
/// Each community keeps its neighbor communities with edge counts and caches
/// its best partner; a lazy max-heap over the cached bests selects the merge.
/// Ties go to the pair with the smaller ids.
pub fn fast_greedy(graph: &Graph, _params: &DetectParams) -> Partition {
    let n = graph.num_nodes();
    let m = graph.num_edges();
    if m == 0 {
        return Partition::singletons(n);
    }
    let m = m as f64;
    let two_m_sq = 2.0 * m * m;

    let mut degree: Vec<f64> = (0..n).map(|v| graph.degree_unchecked(v) as f64).collect();
    let mut rows: Vec<HashMap<usize, u64>> = (0..n)
        .map(|v| graph.neighbors(v).iter().map(|&w| (w as usize, 1)).collect())
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut alive = vec![true; n];

    let gain =
        |degree: &[f64], i: usize, j: usize, edges: u64| -> f64 { edges as f64 / m - degree[i] * degree[j] / two_m_sq };
    let best_of = |rows: &[HashMap<usize, u64>], degree: &[f64], i: usize| -> Option<Candidate> {
        rows[i]
            .iter()
            .map(|(&j, &e)| Candidate::new(gain(degree, i, j, e), i, j))
            .max()
    };

    let mut best: Vec<Option<Candidate>> = (0..n).map(|i| best_of(&rows, &degree, i)).collect();
    let mut heap: BinaryHeap<Candidate> = best.iter().flatten().copied().collect();

    while let Some(top) = heap.pop() {
        let (i, j) = (top.owner, top.partner);
        if !alive[i] || best[i] != Some(top) {
            continue;
        }
        if top.gain <= 0.0 {
            break;
        }

        // Fold the smaller row into the larger one.
        let (keep, gone) = if rows[i].len() > rows[j].len() || (rows[i].len() == rows[j].len() && i < j) {
            (i, j)
        } else {
            (j, i)
        };
        let gone_row = std::mem::take(&mut rows[gone]);
        alive[gone] = false;
        parent[gone] = keep;
        best[gone] = None;
        degree[keep] += degree[gone];
        rows[keep].remove(&gone);
        for (x, e) in gone_row {
            if x == keep {
                continue;
            }
            *rows[keep].entry(x).or_insert(0) += e;
            let row_x = &mut rows[x];
            row_x.remove(&gone);
            *row_x.entry(keep).or_insert(0) += e;
        }

        best[keep] = best_of(&rows, &degree, keep);
        if let Some(c) = best[keep] {
            heap.push(c);
        }
        let neighbors: Vec<(usize, u64)> = rows[keep].iter().map(|(&x, &e)| (x, e)).collect();
        for (x, e) in neighbors {
            let fresh = Candidate::new(gain(&degree, x, keep, e), x, keep);
            let stale = match best[x] {
                Some(b) => b.partner == keep || b.partner == gone,
                None => true,
            };
            let next = if stale {
                best_of(&rows, &degree, x)
            } else {
                best[x].max(Some(fresh))
            };
            if next != best[x] {
                best[x] = next;
                if let Some(c) = next {
                    heap.push(c);
                }
            }
        }
    }

    let mut labels = vec![0; n];
    for (v, label) in labels.iter_mut().enumerate() {
        let mut r = v;
        while parent[r] != r {
            r = parent[r];
        }
        *label = r;
    }
    Partition::from_labels(&labels)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    gain: f64,
    owner: usize,
    partner: usize,
}

impl Candidate {
    fn new(gain: f64, owner: usize, partner: usize) -> Self {
        Candidate { gain, owner, partner }
    }

    fn pair(&self) -> (usize, usize) {
        (self.owner.min(self.partner), self.owner.max(self.partner))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == CmpOrdering::Equal && self.owner == other.owner
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    /// Larger gain first, then the lexicographically smaller pair, then the smaller owner.
    fn cmp(&self, other: &Self) -> CmpOrdering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.pair().cmp(&self.pair()))
            .then_with(|| other.owner.cmp(&self.owner))
    }
}
