use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::community::{DetectParams, Partition};
use crate::graph::Graph;

/// Recursive spectral bisection on the modularity matrix (Newman 2006).
pub fn leading_eigenvector(graph: &Graph, params: &DetectParams) -> Partition {
    LeadingEigenvector::run(graph, params).partition
}

/// Outcome of [`leading_eigenvector`] with the per-split diagnostics.
#[derive(Debug, Clone)]
pub struct LeadingEigenvector {
    pub partition: Partition,
    pub splits: usize,
    /// Communities left whole because the eigensolver did not converge.
    pub warnings: Vec<String>,
}

impl LeadingEigenvector {
    /// Each community is split by the signs of the leading eigenvector of its
    /// generalized modularity matrix `B⁽ᵍ⁾`, and only while the split adds
    /// positive modularity. `B⁽ᵍ⁾` is only touched through sparse
    /// matrix-vector products.
    pub fn run(graph: &Graph, params: &DetectParams) -> LeadingEigenvector {
        let n = graph.num_nodes();
        let mut warnings = Vec::new();
        if graph.num_edges() == 0 {
            return LeadingEigenvector {
                partition: Partition::singletons(n),
                splits: 0,
                warnings,
            };
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let mut group_of = vec![0usize; n];
        let mut pending = vec![(0..n).collect::<Vec<usize>>()];
        let mut next_group = 1;
        let mut splits = 0;
        let mut local = vec![usize::MAX; n];

        while let Some(members) = pending.pop() {
            if members.len() < 2 {
                continue;
            }
            let cap = params.max_iterations.max(10 * members.len());
            let sub = Subproblem::new(graph, &members, &group_of, &mut local);
            match sub.bisect(&mut rng, params.tolerance, cap) {
                Bisection::Split(side) => {
                    let mut a = Vec::new();
                    let mut b = Vec::new();
                    for (&v, &stays) in members.iter().zip(&side) {
                        if stays {
                            a.push(v);
                        } else {
                            b.push(v);
                        }
                    }
                    for &v in &b {
                        group_of[v] = next_group;
                    }
                    next_group += 1;
                    splits += 1;
                    pending.push(b);
                    pending.push(a);
                }
                Bisection::Indivisible => {}
                Bisection::NotConverged => {
                    let msg = format!(
                        "eigensolver did not converge within {cap} iterations on a community of {} nodes; left unsplit",
                        members.len()
                    );
                    warn!("{msg}");
                    warnings.push(msg);
                }
            }
            for &v in &members {
                local[v] = usize::MAX;
            }
        }
        LeadingEigenvector {
            partition: Partition::from_labels(&group_of),
            splits,
            warnings,
        }
    }
}

enum Bisection {
    /// `true` marks the nodes that stay; `false` the ones split off.
    Split(Vec<bool>),
    Indivisible,
    NotConverged,
}

/// Generalized modularity matrix of one community `g`:
/// `B_ij = A_ij − k_i k_j / 2m − δ_ij (k_i⁽ᵍ⁾ − k_i K_g / 2m)`.
struct Subproblem {
    /// Neighbors inside `g`, as local indices.
    adj: Vec<Vec<usize>>,
    degree: Vec<f64>,
    /// Diagonal correction `k_i⁽ᵍ⁾ − k_i K_g / 2m`.
    diag: Vec<f64>,
    two_m: f64,
}

impl Subproblem {
    fn new(graph: &Graph, members: &[usize], group_of: &[usize], local: &mut [usize]) -> Subproblem {
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
        let g = group_of[members[0]];
        let two_m = 2.0 * graph.num_edges() as f64;
        let adj: Vec<Vec<usize>> = members
            .iter()
            .map(|&v| {
                graph
                    .neighbors(v)
                    .iter()
                    .map(|&w| w as usize)
                    .filter(|&w| group_of[w] == g)
                    .map(|w| local[w])
                    .collect()
            })
            .collect();
        let degree: Vec<f64> = members.iter().map(|&v| graph.degree_unchecked(v) as f64).collect();
        let group_degree: f64 = degree.iter().sum();
        let diag = adj
            .iter()
            .zip(&degree)
            .map(|(a, &k)| a.len() as f64 - k * group_degree / two_m)
            .collect();
        Subproblem {
            adj,
            degree,
            diag,
            two_m,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let kx: f64 = self.degree.iter().zip(x).map(|(k, x)| k * x).sum();
        let scale = kx / self.two_m;
        for i in 0..self.len() {
            let ax: f64 = self.adj[i].iter().map(|&j| x[j]).sum();
            y[i] = ax - self.degree[i] * scale - self.diag[i] * x[i];
        }
    }

    /// Row sums of absolute values bound the spectral radius.
    fn gershgorin_bound(&self) -> f64 {
        let group_degree: f64 = self.degree.iter().sum();
        (0..self.len())
            .map(|i| self.adj[i].len() as f64 + self.degree[i] * group_degree / self.two_m + self.diag[i].abs())
            .fold(0.0, f64::max)
    }

    /// Leading eigenpair by thick-restart Lanczos with full
    /// reorthogonalization. Converged once `‖Bx − θx‖ ≤ tolerance·‖B‖`, with
    /// `‖B‖` taken from the Gershgorin bound. `cap` limits matrix-vector products.
    fn leading_eigenpair(&self, rng: &mut ChaCha8Rng, tolerance: f64, cap: usize) -> Option<(f64, Vec<f64>)> {
        let n = self.len();
        let scale = self.gershgorin_bound().max(1.0);
        let max_basis = n.min(KRYLOV_DIM);
        let keep = n.min(KEEP_RITZ).min(max_basis - 1).max(1);
        let mut start: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        if normalize(&mut start) == 0.0 {
            start[0] = 1.0;
        }
        // Orthonormal basis Q and its projection H = QᵀBQ. The last basis
        // vector is the one still to be expanded.
        let mut basis = vec![start];
        let mut h = vec![vec![0.0; max_basis]; max_basis];
        let mut w = vec![0.0; n];
        let mut products = 0;
        while products < cap {
            let last = basis.len() - 1;
            self.apply(&basis[last], &mut w);
            products += 1;
            let mut coeff = vec![0.0; basis.len()];
            // A second Gram-Schmidt pass only when the first one cancelled
            // most of the norm.
            let mut norm = dot(&w, &w).sqrt();
            for _ in 0..2 {
                for (c, q) in coeff.iter_mut().zip(&basis) {
                    let d = dot(q, &w);
                    *c += d;
                    axpy(-d, q, &mut w);
                }
                let after = dot(&w, &w).sqrt();
                if after > 0.7 * norm {
                    break;
                }
                norm = after;
            }
            for (i, &c) in coeff.iter().enumerate() {
                h[i][last] = c;
                h[last][i] = c;
            }
            let beta = dot(&w, &w).sqrt();
            let k = basis.len();
            let exhausted = beta <= 1e-12 * scale;
            if !exhausted && k < max_basis {
                basis.push(w.iter().map(|v| v / beta).collect());
                continue;
            }

            let (values, vectors) = symmetric_eigen(h.iter().take(k).map(|row| row[..k].to_vec()).collect());
            let residual = if exhausted { 0.0 } else { beta * vectors[0][k - 1].abs() };
            let ritz = |y: &[f64]| {
                let mut x = vec![0.0; n];
                for (yi, q) in y.iter().zip(&basis) {
                    axpy(*yi, q, &mut x);
                }
                x
            };
            if residual <= tolerance * scale {
                let mut x = ritz(&vectors[0]);
                normalize(&mut x);
                return Some((values[0], x));
            }
            let mut next: Vec<Vec<f64>> = vectors.iter().take(keep).map(|y| ritz(y)).collect();
            for row in h.iter_mut() {
                row.iter_mut().for_each(|v| *v = 0.0);
            }
            for (i, y) in vectors.iter().take(keep).enumerate() {
                h[i][i] = values[i];
                h[i][keep] = beta * y[k - 1];
                h[keep][i] = beta * y[k - 1];
            }
            next.push(w.iter().map(|v| v / beta).collect());
            basis = next;
        }
        None
    }

    fn bisect(&self, rng: &mut ChaCha8Rng, tolerance: f64, cap: usize) -> Bisection {
        let Some((eigenvalue, x)) = self.leading_eigenpair(rng, tolerance, cap) else {
            return Bisection::NotConverged;
        };
        if eigenvalue <= 1e-12 {
            return Bisection::Indivisible;
        }
        let side: Vec<bool> = x.iter().map(|&v| v >= 0.0).collect();
        if side.iter().all(|&s| s) || side.iter().all(|&s| !s) {
            return Bisection::Indivisible;
        }
        let s: Vec<f64> = side.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect();
        let mut y = vec![0.0; s.len()];
        self.apply(&s, &mut y);
        let contribution = dot(&s, &y) / (2.0 * self.two_m);
        if contribution > 1e-12 {
            Bisection::Split(side)
        } else {
            Bisection::Indivisible
        }
    }
}

const KRYLOV_DIM: usize = 40;
const KEEP_RITZ: usize = 12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Eigenpairs of a small dense symmetric matrix by cyclic Jacobi, sorted by
/// decreasing eigenvalue. Eigenvectors are returned as rows.
#[allow(clippy::needless_range_loop)]
fn symmetric_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        let diag: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-30 * diag.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..n {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order.iter().map(|&i| v.iter().map(|row| row[i]).collect()).collect();
    (values, vectors)
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    norm
}
