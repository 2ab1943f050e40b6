//! Two-level map equation for undirected graphs.
//!
//! A random walker visits node `v` at rate `p_v = d_v / 2m` and leaves module
//! `i` at rate `q_i = cut_i / 2m`. The description length of a partition is
//!
//! ```text
//! L = q·H(Q) + Σ_i p_i^↻ · H(P_i)
//!   = plogp(q) − 2 Σ_i plogp(q_i) − Σ_v plogp(p_v) + Σ_i plogp(q_i + p_i)
//! ```
//!
//! with `q = Σ_i q_i`, `p_i = Σ_{v∈i} p_v` and `plogp(x) = x log₂ x`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::weighted::{renumber, WeightedGraph};
use crate::community::{DetectParams, Partition};
use crate::error::Result;
use crate::graph::Graph;

#[inline]
fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Two-level codelength in bits; zero for an edgeless graph.
pub fn map_equation_codelength(graph: &Graph, partition: &Partition) -> Result<f64> {
    partition.check_covers(graph)?;
    let m = graph.num_edges();
    if m == 0 {
        return Ok(0.0);
    }
    let two_m = 2.0 * m as f64;
    let c = partition.num_communities();
    let mut cut = vec![0usize; c];
    let mut degree_sum = vec![0usize; c];
    let mut node_term = 0.0;
    for u in 0..graph.num_nodes() {
        let cu = partition.label(u);
        let d = graph.degree_unchecked(u);
        degree_sum[cu] += d;
        node_term += plogp(d as f64 / two_m);
        cut[cu] += graph
            .neighbors(u)
            .iter()
            .filter(|&&v| partition.label(v as usize) != cu)
            .count();
    }
    let mut exit_total = 0.0;
    let mut exit_term = 0.0;
    let mut module_term = 0.0;
    for i in 0..c {
        let q = cut[i] as f64 / two_m;
        let p = degree_sum[i] as f64 / two_m;
        exit_total += q;
        exit_term += plogp(q);
        module_term += plogp(q + p);
    }
    Ok((plogp(exit_total) - 2.0 * exit_term - node_term + module_term).max(0.0))
}

/// Minimizes the two-level map equation with Louvain-style local moves and
/// aggregation. The one-module partition is the starting upper bound, so the
/// result never has a longer codelength than it.
pub fn infomap_two_level(graph: &Graph, params: &DetectParams) -> Partition {
    let n = graph.num_nodes();
    if graph.num_edges() == 0 {
        return Partition::singletons(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut level = WeightedGraph::from_graph(graph);
    let mut membership: Vec<usize> = (0..n).collect();
    loop {
        let (mut module, moved) = local_moving(&level, &mut rng, params.max_iterations);
        if !moved {
            break;
        }
        let count = renumber(&mut module);
        for c in membership.iter_mut() {
            *c = module[*c];
        }
        if count == level.num_nodes() || count == 1 {
            break;
        }
        level = level.aggregate(&module, count);
    }

    let found = Partition::from_labels(&membership);
    let single = Partition::single(n);
    let found_len = map_equation_codelength(graph, &found).expect("partition covers graph");
    let single_len = map_equation_codelength(graph, &single).expect("partition covers graph");
    if found_len <= single_len {
        found
    } else {
        single
    }
}

struct Modules {
    exit: Vec<f64>,
    flow: Vec<f64>,
    exit_total: f64,
    exit_term: f64,
    module_term: f64,
}

impl Modules {
    /// Change in codelength when module `i` goes from `(exit, flow)` to the new values.
    fn replace(&self, i: usize, exit: f64, flow: f64) -> (f64, f64, f64) {
        (
            exit - self.exit[i],
            plogp(exit) - plogp(self.exit[i]),
            plogp(exit + flow) - plogp(self.exit[i] + self.flow[i]),
        )
    }

    fn codelength_without_nodes(&self) -> f64 {
        plogp(self.exit_total) - 2.0 * self.exit_term + self.module_term
    }
}

fn local_moving(graph: &WeightedGraph, rng: &mut ChaCha8Rng, max_sweeps: usize) -> (Vec<usize>, bool) {
    let n = graph.num_nodes();
    let total = graph.total;
    let node_flow: Vec<f64> = graph.strength.iter().map(|s| s / total).collect();
    let node_exit: Vec<f64> = (0..n)
        .map(|a| (graph.strength[a] - 2.0 * graph.self_loops[a]) / total)
        .collect();

    let mut module: Vec<usize> = (0..n).collect();
    let mut state = Modules {
        exit: node_exit.clone(),
        flow: node_flow.clone(),
        exit_total: node_exit.iter().sum(),
        exit_term: node_exit.iter().map(|&q| plogp(q)).sum(),
        module_term: (0..n).map(|a| plogp(node_exit[a] + node_flow[a])).sum(),
    };

    let mut order: Vec<usize> = (0..n).collect();
    let mut link = vec![0.0f64; n];
    let mut seen = vec![false; n];
    let mut candidates = Vec::new();
    let mut moved = false;

    for _ in 0..max_sweeps {
        order.shuffle(rng);
        let mut improved = false;
        for &a in &order {
            let from = module[a];
            seen[from] = true;
            candidates.push(from);
            for (b, w) in graph.neighbors(a) {
                let c = module[b];
                if !seen[c] {
                    seen[c] = true;
                    candidates.push(c);
                }
                link[c] += w / total;
            }
            let (pa, oa) = (node_flow[a], node_exit[a]);
            let old = state.codelength_without_nodes();

            let from_exit = state.exit[from] - oa + 2.0 * link[from];
            let from_flow = state.flow[from] - pa;
            let (dq_from, dexit_from, dmod_from) = state.replace(from, from_exit, from_flow);

            let mut best = from;
            let mut best_delta = 0.0;
            let eps = 1e-12;
            for &to in &candidates[1..] {
                let to_exit = state.exit[to] + oa - 2.0 * link[to];
                let to_flow = state.flow[to] + pa;
                let (dq_to, dexit_to, dmod_to) = state.replace(to, to_exit, to_flow);
                let new = plogp(state.exit_total + dq_from + dq_to) - 2.0 * (state.exit_term + dexit_from + dexit_to)
                    + state.module_term
                    + dmod_from
                    + dmod_to;
                let delta = new - old;
                if delta < best_delta - eps {
                    best = to;
                    best_delta = delta;
                }
            }

            if best != from {
                let to = best;
                let to_exit = state.exit[to] + oa - 2.0 * link[to];
                let to_flow = state.flow[to] + pa;
                let (dq_to, dexit_to, dmod_to) = state.replace(to, to_exit, to_flow);
                state.exit_total += dq_from + dq_to;
                state.exit_term += dexit_from + dexit_to;
                state.module_term += dmod_from + dmod_to;
                state.exit[from] = from_exit;
                state.flow[from] = from_flow;
                state.exit[to] = to_exit;
                state.flow[to] = to_flow;
                module[a] = to;
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
    (module, moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::testgraphs::*;

    #[test]
    fn one_module_triangle_is_log2_3() {
        let g = cliques(1, 3, &[]);
        let l = map_equation_codelength(&g, &Partition::single(3)).unwrap();
        assert!((l - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn disjoint_triangles_have_no_exit_cost() {
        // Each module: p_i = 1/2, q_i = 0, within-module entropy log₂3.
        // L = Σ p_i·log₂3 = log₂3.
        let g = two_triangles();
        let l = map_equation_codelength(&g, &Partition::from_labels(&[0, 0, 0, 1, 1, 1])).unwrap();
        assert!((l - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn relabeling_invariance() {
        let g = bridged_triangles();
        let a = map_equation_codelength(&g, &Partition::from_labels(&[0, 0, 1, 1, 2, 2])).unwrap();
        let b = map_equation_codelength(&g, &Partition::from_labels(&[5, 5, 2, 2, 9, 9])).unwrap();
        assert_eq!(a, b);
        assert!(map_equation_codelength(&g, &Partition::single(2)).is_err());
    }

    #[test]
    fn bridged_triangles_by_exhaustive_search() {
        let g = bridged_triangles();
        let (best, _) = all_partitions(6)
            .into_iter()
            .map(|l| {
                let len = map_equation_codelength(&g, &Partition::from_labels(&l)).unwrap();
                (l, len)
            })
            .fold((vec![], f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        assert_eq!(best, vec![0, 0, 0, 1, 1, 1]);
        for seed in 0..10 {
            let p = infomap_two_level(&g, &DetectParams::with_seed(seed));
            assert_eq!(p.labels(), best.as_slice());
        }
    }

    #[test]
    fn never_longer_than_one_module() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = 30;
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen::<f64>() < 0.3)
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            let p = infomap_two_level(&g, &DetectParams::with_seed(rng.gen()));
            let l = map_equation_codelength(&g, &p).unwrap();
            assert!(l <= map_equation_codelength(&g, &Partition::single(n)).unwrap() + 1e-12);
        }
    }

    #[test]
    fn incremental_state_matches_direct_formula() {
        let g = cliques(3, 4, &[(0, 4), (5, 9), (2, 11)]);
        let wg = WeightedGraph::from_graph(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mut module, _) = local_moving(&wg, &mut rng, 100);
        renumber(&mut module);
        let direct = map_equation_codelength(&g, &Partition::from_labels(&module)).unwrap();
        assert_eq!(Partition::from_labels(&module).num_communities(), 3);
        assert!(
            (direct
                - map_equation_codelength(&g, &Partition::from_labels(&[0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2])).unwrap())
            .abs()
                < 1e-12
        );
    }
}
