use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::weighted::{renumber, WeightedGraph};
use crate::community::{DetectParams, Partition};
use crate::graph::Graph;

/// Multilevel modularity optimization (Louvain).
///
/// Local moving runs to a fixed point where no single node move raises
/// modularity; communities are then collapsed into nodes and the process
/// repeats on the aggregate until a level produces no move.
pub fn louvain_multilevel(graph: &Graph, params: &DetectParams) -> Partition {
    let n = graph.num_nodes();
    if graph.num_edges() == 0 {
        return Partition::singletons(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut level = WeightedGraph::from_graph(graph);
    let mut membership: Vec<usize> = (0..n).collect();
    loop {
        let (mut community, moved) = local_moving(&level, &mut rng, params.max_iterations);
        if !moved {
            break;
        }
        let count = renumber(&mut community);
        for c in membership.iter_mut() {
            *c = community[*c];
        }
        if count == level.num_nodes() || count == 1 {
            break;
        }
        level = level.aggregate(&community, count);
    }
    Partition::from_labels(&membership)
}

/// One level of greedy node moves. Returns the community of every node and
/// whether any node changed community.
fn local_moving(graph: &WeightedGraph, rng: &mut ChaCha8Rng, max_sweeps: usize) -> (Vec<usize>, bool) {
    let n = graph.num_nodes();
    let total = graph.total;
    let mut community: Vec<usize> = (0..n).collect();
    let mut community_strength = graph.strength.clone();
    let mut order: Vec<usize> = (0..n).collect();
    let mut link = vec![0.0f64; n];
    let mut seen = vec![false; n];
    let mut candidates: Vec<usize> = Vec::new();
    let mut moved = false;

    for _ in 0..max_sweeps {
        order.shuffle(rng);
        let mut improved = false;
        for &i in &order {
            let current = community[i];
            let ki = graph.strength[i];
            seen[current] = true;
            candidates.push(current);
            for (j, w) in graph.neighbors(i) {
                let c = community[j];
                if !seen[c] {
                    seen[c] = true;
                    candidates.push(c);
                }
                link[c] += w;
            }
            community_strength[current] -= ki;

            // Gain of joining c, up to the common factor 1/m.
            let gain = |c: usize| link[c] - community_strength[c] * ki / total;
            let eps = 1e-12 * ki.max(1.0);
            let mut best = current;
            let mut best_gain = gain(current);
            for &c in &candidates[1..] {
                let g = gain(c);
                if g > best_gain + eps {
                    best = c;
                    best_gain = g;
                }
            }

            community_strength[best] += ki;
            community[i] = best;
            if best != current {
                improved = true;
                moved = true;
            }
            for c in candidates.drain(..) {
                link[c] = 0.0;
                seen[c] = false;
            }
        }
        if !improved {
            break;
        }
    }
    (community, moved)
}
