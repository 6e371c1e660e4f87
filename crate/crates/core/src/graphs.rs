//! Sight graphs: who sees whose hat.
//!
//! Undirected graphs are stored as symmetric visibility, so every consumer
//! only ever reads [`SightGraph::sees`].

use std::collections::VecDeque;
use std::fmt;

use crate::error::{param, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Undirected,
    Directed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Undirected => f.write_str("undirected"),
            Mode::Directed => f.write_str("directed"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SightGraph {
    mode: Mode,
    sees: Vec<Vec<usize>>,
}

/// Generator descriptions for the standard graph families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    /// A center (vertex 0) with `k` leaves.
    Star(usize),
    CompleteMultipartite(Vec<usize>),
    /// Each vertex of the directed r-cycle replaced by an independent set;
    /// every vertex of part i sees all of part i+1 (cyclically).
    DirectedCycleBlowup(Vec<usize>),
    /// The cycle viewed as a digraph with the arc `0 -> n-1` removed:
    /// vertex 0 no longer sees vertex n-1, but n-1 still sees 0.
    CycleMinusEdge(usize),
    FromEdges {
        mode: Mode,
        n: usize,
        edges: Vec<(usize, usize)>,
    },
}

impl SightGraph {
    /// Builds a graph from a list of edges, validating every invariant.
    ///
    /// In directed mode `(u, v)` means "u sees v". Duplicate edges are
    /// rejected, as are self-loops and out-of-range endpoints.
    pub fn from_edges(mode: Mode, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut sees = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return param(format!("edge ({u}, {v}) out of range for n = {n}"));
            }
            if u == v {
                return param(format!("self-loop at vertex {u}"));
            }
            sees[u].push(v);
            if mode == Mode::Undirected {
                sees[v].push(u);
            }
        }
        for (v, list) in sees.iter_mut().enumerate() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return param(format!("duplicate edge at vertex {v}"));
            }
        }
        Ok(SightGraph { mode, sees })
    }

    /// Takes visibility lists directly; they are sorted and checked.
    pub fn from_lists(mode: Mode, mut sees: Vec<Vec<usize>>) -> Result<Self> {
        for list in sees.iter_mut() {
            list.sort_unstable();
        }
        let g = SightGraph { mode, sees };
        g.validate()?;
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        SightGraph {
            mode: Mode::Undirected,
            sees: vec![Vec::new(); n],
        }
    }

    /// Checks every type invariant.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for (v, list) in self.sees.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return param(format!("neighbor list of {v} not strictly increasing"));
                }
            }
            for &u in list {
                if u >= n {
                    return param(format!("vertex {v} sees out-of-range vertex {u}"));
                }
                if u == v {
                    return param(format!("self-loop at vertex {v}"));
                }
                if self.mode == Mode::Undirected && self.sees[u].binary_search(&v).is_err() {
                    return param(format!("undirected graph not symmetric on ({v}, {u})"));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.sees.len()
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The ascending list of vertices whose hats `v` sees.
    #[inline]
    pub fn sees(&self, v: usize) -> &[usize] {
        &self.sees[v]
    }

    pub fn neighborhoods(&self) -> &[Vec<usize>] {
        &self.sees
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.sees[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.sees.iter().map(Vec::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.sees[u].binary_search(&v).is_ok()
    }

    /// Arcs `u -> v` ("u sees v"); in undirected mode each edge appears once
    /// with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.sees.iter().enumerate() {
            for &v in list {
                if self.mode == Mode::Directed || u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.sees.iter().map(Vec::len).sum()
    }

    /// The subgraph induced on `keep`, with vertices relabeled in ascending
    /// order of their original labels. Returns the graph and the map from
    /// new labels to old ones.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<(SightGraph, Vec<usize>)> {
        let n = self.n();
        let mut new_label = vec![usize::MAX; n];
        let mut old: Vec<usize> = keep.to_vec();
        old.sort_unstable();
        old.dedup();
        for &v in &old {
            if v >= n {
                return param(format!("vertex {v} out of range for n = {n}"));
            }
        }
        for (i, &v) in old.iter().enumerate() {
            new_label[v] = i;
        }
        let sees = old
            .iter()
            .map(|&v| {
                self.sees[v]
                    .iter()
                    .filter(|&&u| new_label[u] != usize::MAX)
                    .map(|&u| new_label[u])
                    .collect()
            })
            .collect();
        Ok((SightGraph { mode: self.mode, sees }, old))
    }

    /// Graph with vertex `v` deleted; see [`SightGraph::induced_subgraph`].
    pub fn without_vertex(&self, v: usize) -> Result<(SightGraph, Vec<usize>)> {
        if v >= self.n() {
            return param(format!("vertex {v} out of range"));
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.induced_subgraph(&keep)
    }

    /// Vertices at distance exactly one or two (ignoring direction).
    pub fn distance_two_ball(&self, v: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::from([v]);
        dist[v] = 0;
        let mut out = Vec::new();
        while let Some(u) = queue.pop_front() {
            if dist[u] == 2 {
                continue;
            }
            for &w in &self.sees[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Builds the graph a [`GraphSpec`] describes.
pub fn build_graph(spec: &GraphSpec) -> Result<SightGraph> {
    use GraphSpec::*;
    match spec {
        Complete(n) => {
            require_positive(*n, "complete graph needs n >= 1")?;
            let edges = pairs(0..*n);
            SightGraph::from_edges(Mode::Undirected, *n, &edges)
        }
        Path(n) => {
            require_positive(*n, "path needs n >= 1")?;
            let edges: Vec<_> = (1..*n).map(|i| (i - 1, i)).collect();
            SightGraph::from_edges(Mode::Undirected, *n, &edges)
        }
        Cycle(n) => {
            if *n < 3 {
                return param(format!("cycle needs n >= 3, got {n}"));
            }
            let edges: Vec<_> = (0..*n).map(|i| (i, (i + 1) % n)).collect();
            SightGraph::from_edges(Mode::Undirected, *n, &edges)
        }
        Star(k) => {
            let edges: Vec<_> = (1..=*k).map(|leaf| (0, leaf)).collect();
            SightGraph::from_edges(Mode::Undirected, k + 1, &edges)
        }
        CompleteMultipartite(parts) => {
            let bounds = part_bounds(parts)?;
            let n = *bounds.last().unwrap();
            let mut edges = Vec::new();
            for i in 0..parts.len() {
                for u in bounds[i]..bounds[i + 1] {
                    edges.extend((bounds[i + 1]..n).map(|v| (u, v)));
                }
            }
            SightGraph::from_edges(Mode::Undirected, n, &edges)
        }
        DirectedCycleBlowup(parts) => {
            if parts.len() < 3 {
                return param(format!(
                    "directed cycle blow-up needs at least 3 parts, got {}",
                    parts.len()
                ));
            }
            let bounds = part_bounds(parts)?;
            let r = parts.len();
            let n = bounds[r];
            let mut edges = Vec::new();
            for i in 0..r {
                let j = (i + 1) % r;
                for u in bounds[i]..bounds[i + 1] {
                    edges.extend((bounds[j]..bounds[j + 1]).map(|v| (u, v)));
                }
            }
            SightGraph::from_edges(Mode::Directed, n, &edges)
        }
        CycleMinusEdge(n) => {
            if *n < 3 {
                return param(format!("cycle needs n >= 3, got {n}"));
            }
            let mut edges = Vec::new();
            for i in 0..*n {
                let j = (i + 1) % n;
                edges.push((i, j));
                edges.push((j, i));
            }
            edges.retain(|&e| e != (0, n - 1));
            SightGraph::from_edges(Mode::Directed, *n, &edges)
        }
        FromEdges { mode, n, edges } => {
            require_positive(*n, "graph needs n >= 1")?;
            SightGraph::from_edges(*mode, *n, edges)
        }
    }
}

fn require_positive(n: usize, msg: &str) -> Result<()> {
    if n == 0 {
        param(msg)
    } else {
        Ok(())
    }
}

fn pairs(range: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in range.clone() {
        for v in u + 1..range.end {
            out.push((u, v));
        }
    }
    out
}

/// Prefix sums of the part sizes: part i occupies `bounds[i]..bounds[i+1]`.
pub(crate) fn part_bounds(parts: &[usize]) -> Result<Vec<usize>> {
    if parts.is_empty() {
        return param("at least one part required");
    }
    let mut bounds = vec![0];
    for &s in parts {
        if s == 0 {
            return param("part sizes must be >= 1");
        }
        bounds.push(bounds.last().unwrap() + s);
    }
    Ok(bounds)
}

/// Degeneracy and a witness ordering in which every vertex has at most `d`
/// neighbors earlier in the order.
///
/// Exact min-degree peeling with a bucket queue.
pub fn degeneracy(g: &SightGraph) -> Result<(usize, Vec<usize>)> {
    if g.mode() != Mode::Undirected {
        return Err(Error::UnsupportedMode(
            "degeneracy is defined for undirected graphs".into(),
        ));
    }
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = g.max_degree();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    let mut d = 0;
    let mut cursor = 0;
    while removal.len() < n {
        // Stale entries (vertex already removed or degree since lowered)
        // are skipped lazily.
        let v = loop {
            while buckets[cursor].is_empty() {
                cursor += 1;
            }
            let v = buckets[cursor].pop().unwrap();
            if !removed[v] && deg[v] == cursor {
                break v;
            }
        };
        d = d.max(cursor);
        removed[v] = true;
        removal.push(v);
        for &u in g.sees(v) {
            if !removed[u] {
                deg[u] -= 1;
                buckets[deg[u]].push(u);
                cursor = cursor.min(deg[u]);
            }
        }
    }
    removal.reverse();
    Ok((d, removal))
}
