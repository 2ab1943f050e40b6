use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::community::{DetectParams, Partition};
use crate::graph::Graph;

/// Asynchronous label propagation.
///
/// Every node starts with its own label. Each sweep visits nodes in a fresh
/// seeded order and gives each node the most frequent label among its
/// neighbors, keeping the current label when it is one of the most frequent
/// and otherwise drawing uniformly (from the seeded generator) among the tied
/// labels. Stops after a sweep without changes or after `max_iterations`
/// sweeps.
pub fn label_propagation(graph: &Graph, params: &DetectParams) -> Partition {
    let n = graph.num_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut count = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut tied: Vec<usize> = Vec::new();

    for _ in 0..params.max_iterations {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            let nbrs = graph.neighbors(v);
            if nbrs.is_empty() {
                continue;
            }
            for &w in nbrs {
                let l = labels[w as usize];
                if count[l] == 0 {
                    touched.push(l);
                }
                count[l] += 1;
            }
            let best_count = touched.iter().map(|&l| count[l]).max().unwrap_or(0);
            let current = labels[v];
            let next = if count[current] == best_count {
                current
            } else {
                tied.clear();
                tied.extend(touched.iter().copied().filter(|&l| count[l] == best_count));
                tied[rng.gen_range(0..tied.len())]
            };
            for l in touched.drain(..) {
                count[l] = 0;
            }
            if next != current {
                labels[v] = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Partition::from_labels(&labels)
}
