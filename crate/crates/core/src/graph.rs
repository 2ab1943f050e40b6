//! Immutable undirected simple graphs in compressed sparse row form.
//!
//! Node ids are dense in `0..n`. Every neighbor list is strictly increasing,
//! contains no self-loop, and the adjacency is symmetric, so the (never
//! materialized) adjacency matrix has `A[u][v] = 1` iff `v` is in `neighbors(u)`.

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ordering::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    num_edges: usize,
    labels: Option<Vec<String>>,
}

/// A graph read from an edge list together with what the cleanup rules dropped.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub duplicates_dropped: usize,
    pub self_loops_dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub component_of: Vec<usize>,
    pub component_sizes: Vec<usize>,
    pub giant_component_id: usize,
}

impl ComponentLabeling {
    pub fn num_components(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn giant_size(&self) -> usize {
        self.component_sizes.get(self.giant_component_id).copied().unwrap_or(0)
    }
}

impl Graph {
    /// Builds a graph on `n` nodes. Self-loops are dropped and repeated edges
    /// (in either direction) collapse to one.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        Ok(Self::build(n, edges.iter().copied(), None)?.graph)
    }

    fn build(
        n: usize,
        edges: impl Iterator<Item = (usize, usize)>,
        labels: Option<Vec<String>>,
    ) -> Result<LoadedGraph> {
        if n > u32::MAX as usize {
            return Err(Error::validation(format!("{n} nodes exceed the u32 id space")));
        }
        let mut pairs = Vec::new();
        let mut self_loops = 0;
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { node: x, n });
                }
            }
            if u == v {
                self_loops += 1;
                continue;
            }
            pairs.push((u.min(v) as u32, u.max(v) as u32));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        let duplicates = before - pairs.len();

        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &pairs {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        // Pairs are sorted by (min, max): for any node x, every pair (w, x)
        // with w < x precedes every pair (x, y), so appending in pair order
        // leaves each neighbor list sorted.
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; 2 * pairs.len()];
        for &(u, v) in &pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }

        let graph = Graph {
            offsets,
            targets,
            num_edges: pairs.len(),
            labels,
        };
        debug_assert!(graph.validate().is_ok());
        Ok(LoadedGraph {
            graph,
            duplicates_dropped: duplicates,
            self_loops_dropped: self_loops,
        })
    }

    /// Builds directly from sorted, symmetric CSR arrays produced inside the crate.
    fn from_csr(offsets: Vec<usize>, targets: Vec<u32>, labels: Option<Vec<String>>) -> Graph {
        let graph = Graph {
            num_edges: targets.len() / 2,
            offsets,
            targets,
            labels,
        };
        debug_assert!(graph.validate().is_ok());
        graph
    }

    /// Checks symmetry, sortedness, absence of self-loops and the `2m` endpoint count.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_nodes();
        if self.targets.len() != 2 * self.num_edges {
            return Err(Error::validation("endpoint count differs from 2m"));
        }
        for u in 0..n {
            let nbrs = self.neighbors(u);
            if nbrs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::validation(format!("neighbors of {u} not strictly increasing")));
            }
            for &v in nbrs {
                let v = v as usize;
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v, n });
                }
                if v == u {
                    return Err(Error::validation(format!("self-loop at {u}")));
                }
                if self.neighbors(v).binary_search(&(u as u32)).is_err() {
                    return Err(Error::validation(format!("edge {u}-{v} not symmetric")));
                }
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return Err(Error::validation("label count differs from n"));
            }
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree_unchecked(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.num_nodes() {
            return Err(Error::NodeOutOfRange {
                node: v,
                n: self.num_nodes(),
            });
        }
        Ok(self.degree_unchecked(v))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.num_nodes() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_nodes()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    /// Reads a whitespace-separated edge list. Lines starting with `#` or `%`
    /// are comments; labels are remapped to dense ids in first-appearance order.
    pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let mut intern = |tok: &str| -> usize {
            if let Some(&id) = ids.get(tok) {
                return id;
            }
            let id = labels.len();
            ids.insert(tok.to_owned(), id);
            labels.push(tok.to_owned());
            id
        };
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let mut toks = trimmed.split_whitespace();
            match (toks.next(), toks.next(), toks.next()) {
                (Some(a), Some(b), None) => {
                    let u = intern(a);
                    let v = intern(b);
                    edges.push((u, v));
                }
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("expected 2 tokens, got {trimmed:?}"),
                    })
                }
            }
        }
        if edges.is_empty() {
            return Err(Error::NoEdges);
        }
        Self::build(labels.len(), edges.into_iter(), Some(labels))
    }

    /// Writes the graph as an edge list that [`Graph::load_edge_list`] reads
    /// back into an identical graph.
    ///
    /// Lines are emitted so that ids first appear in increasing order. A node
    /// with no earlier neighbor and no edge to its successor is introduced by
    /// a self-loop line, which the loader registers and then drops. Uses the
    /// original labels when present.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.num_nodes();
        let name = |v: usize| -> String {
            match &self.labels {
                Some(l) => l[v].clone(),
                None => v.to_string(),
            }
        };
        let mut seen = vec![false; n];
        let mut written = std::collections::HashSet::new();
        for j in 0..n {
            if seen[j] {
                continue;
            }
            let nbrs = self.neighbors(j);
            if let Some(&w) = nbrs.first().filter(|&&w| (w as usize) < j) {
                writeln!(out, "{} {}", name(w as usize), name(j))?;
                written.insert((w as usize, j));
                seen[j] = true;
            } else if j + 1 < n && self.has_edge(j, j + 1) {
                writeln!(out, "{} {}", name(j), name(j + 1))?;
                written.insert((j, j + 1));
                seen[j] = true;
                seen[j + 1] = true;
            } else {
                writeln!(out, "{} {}", name(j), name(j))?;
                seen[j] = true;
            }
        }
        for (u, v) in self.edges() {
            if !written.contains(&(u, v)) {
                writeln!(out, "{} {}", name(u), name(v))?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Labels connected components by BFS. Components are numbered by their
    /// smallest member id; the giant component is the lowest-numbered one of
    /// maximum size.
    pub fn connected_components(&self) -> ComponentLabeling {
        let n = self.num_nodes();
        let mut component_of = vec![usize::MAX; n];
        let mut component_sizes = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if component_of[s] != usize::MAX {
                continue;
            }
            let c = component_sizes.len();
            component_of[s] = c;
            queue.push_back(s);
            let mut size = 0;
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in self.neighbors(u) {
                    let v = v as usize;
                    if component_of[v] == usize::MAX {
                        component_of[v] = c;
                        queue.push_back(v);
                    }
                }
            }
            component_sizes.push(size);
        }
        let mut giant_component_id = 0;
        for (c, &size) in component_sizes.iter().enumerate() {
            if size > component_sizes[giant_component_id] {
                giant_component_id = c;
            }
        }
        ComponentLabeling {
            component_of,
            component_sizes,
            giant_component_id,
        }
    }

    /// Induced subgraph on the nodes not in `removed`, re-numbered densely in
    /// the original id order. The second value maps old id to new id.
    pub fn remove_nodes(&self, removed: &[usize]) -> Result<(Graph, Vec<Option<usize>>)> {
        let n = self.num_nodes();
        let mut keep = vec![true; n];
        for &v in removed {
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            keep[v] = false;
        }
        let mut survivor = vec![None; n];
        let mut next = 0;
        for v in 0..n {
            if keep[v] {
                survivor[v] = Some(next);
                next += 1;
            }
        }
        let mut offsets = Vec::with_capacity(next + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for v in (0..n).filter(|&v| keep[v]) {
            // Survivor ids are monotone in old ids, so lists stay sorted.
            targets.extend(
                self.neighbors(v)
                    .iter()
                    .filter_map(|&w| survivor[w as usize].map(|x| x as u32)),
            );
            offsets.push(targets.len());
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| (0..n).filter(|&v| keep[v]).map(|v| l[v].clone()).collect());
        Ok((Graph::from_csr(offsets, targets, labels), survivor))
    }

    /// Relabels node `u` as `ordering.position(u)`, i.e. forms `P A Pᵀ`.
    pub fn permute(&self, ordering: &Ordering) -> Result<Graph> {
        let n = self.num_nodes();
        if ordering.len() != n {
            return Err(Error::validation(format!(
                "ordering covers {} nodes, graph has {n}",
                ordering.len()
            )));
        }
        let inverse = ordering.invert();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(self.targets.len());
        for p in 0..n {
            let u = inverse.position(p);
            let start = targets.len();
            targets.extend(self.neighbors(u).iter().map(|&v| ordering.position(v as usize) as u32));
            targets[start..].sort_unstable();
            offsets.push(targets.len());
        }
        let labels = self
            .labels
            .as_ref()
            .map(|l| (0..n).map(|p| l[inverse.position(p)].clone()).collect());
        Ok(Graph::from_csr(offsets, targets, labels))
    }

    /// Same graph without the original-label table.
    pub fn without_labels(mut self) -> Graph {
        self.labels = None;
        self
    }
}
