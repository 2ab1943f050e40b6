use crate::community::Partition;
use crate::error::Result;
use crate::graph::Graph;

/// Newman modularity `Q = Σ_c (L_c/m − (D_c/2m)²)`, where `L_c` counts the
/// edges inside community `c` and `D_c` sums its degrees. Zero for an
/// edgeless graph.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    partition.check_covers(graph)?;
    let m = graph.num_edges();
    if m == 0 {
        return Ok(0.0);
    }
    let c = partition.num_communities();
    let mut internal = vec![0usize; c];
    let mut degree_sum = vec![0usize; c];
    for u in 0..graph.num_nodes() {
        let cu = partition.label(u);
        degree_sum[cu] += graph.degree_unchecked(u);
        internal[cu] += graph
            .neighbors(u)
            .iter()
            .filter(|&&v| partition.label(v as usize) == cu)
            .count();
    }
    let m = m as f64;
    let two_m = 2.0 * m;
    Ok(internal
        .iter()
        .zip(&degree_sum)
        .map(|(&l2, &d)| {
            let a = d as f64 / two_m;
            l2 as f64 / two_m - a * a
        })
        .sum())
}
