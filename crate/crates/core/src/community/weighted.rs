//! Weighted multigraph used by the multilevel optimizers after aggregation.

use crate::graph::Graph;

#[derive(Debug, Clone)]
pub(crate) struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    /// Weight of the loop at each node; a loop adds twice its weight to the strength.
    pub self_loops: Vec<f64>,
    pub strength: Vec<f64>,
    /// Sum of all strengths (2m for the original graph).
    pub total: f64,
}

impl WeightedGraph {
    pub fn from_graph(graph: &Graph) -> WeightedGraph {
        let n = graph.num_nodes();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(2 * graph.num_edges());
        for u in 0..n {
            targets.extend(graph.neighbors(u).iter().map(|&v| v as usize));
            offsets.push(targets.len());
        }
        let weights = vec![1.0; targets.len()];
        let strength: Vec<f64> = (0..n).map(|u| graph.degree_unchecked(u) as f64).collect();
        WeightedGraph {
            offsets,
            targets,
            weights,
            self_loops: vec![0.0; n],
            total: 2.0 * graph.num_edges() as f64,
            strength,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.targets[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    /// Collapses each community (`community[u]` in `0..count`) into one node.
    pub fn aggregate(&self, community: &[usize], count: usize) -> WeightedGraph {
        let mut self_loops = vec![0.0; count];
        let mut strength = vec![0.0; count];
        let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
        for u in 0..self.num_nodes() {
            let cu = community[u];
            self_loops[cu] += self.self_loops[u];
            strength[cu] += self.strength[u];
            for (v, w) in self.neighbors(u) {
                let cv = community[v];
                if cu == cv {
                    // Each internal edge is seen from both ends.
                    self_loops[cu] += w / 2.0;
                } else {
                    arcs.push((cu, cv, w));
                }
            }
        }
        arcs.sort_unstable_by_key(|a| (a.0, a.1));
        let mut offsets = vec![0usize; count + 1];
        let mut targets = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for (a, b, w) in arcs {
            if last == Some((a, b)) {
                *weights.last_mut().unwrap() += w;
            } else {
                targets.push(b);
                weights.push(w);
                offsets[a + 1] += 1;
                last = Some((a, b));
            }
        }
        for i in 0..count {
            offsets[i + 1] += offsets[i];
        }
        WeightedGraph {
            offsets,
            targets,
            weights,
            self_loops,
            strength,
            total: self.total,
        }
    }
}

/// Renumbers labels to `0..c` in first-appearance order, returning `c`.
pub(crate) fn renumber(labels: &mut [usize]) -> usize {
    let mut map = vec![usize::MAX; labels.len()];
    let mut next = 0;
    for l in labels.iter_mut() {
        if map[*l] == usize::MAX {
            map[*l] = next;
            next += 1;
        }
        *l = map[*l];
    }
    next
}
