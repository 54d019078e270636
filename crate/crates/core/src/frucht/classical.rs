use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{compose, FiniteGroup};
use crate::linalg::{c64, CMat};
use crate::qspace::{LinOp, QSet};

/// 0/1 adjacency with `adj[y][x] = 1` meaning an edge `x → y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawClassicalGraph")]
pub struct ClassicalGraph {
    n: usize,
    directed: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    loops: bool,
    adj: Vec<Vec<u8>>,
}

#[derive(Deserialize)]
struct RawClassicalGraph {
    n: usize,
    directed: bool,
    #[serde(default)]
    loops: bool,
    adj: Vec<Vec<u8>>,
}

impl TryFrom<RawClassicalGraph> for ClassicalGraph {
    type Error = Error;
    fn try_from(raw: RawClassicalGraph) -> Result<Self> {
        let g = Self::with_loops(raw.adj, raw.directed, raw.loops)?;
        if g.n != raw.n {
            return Err(Error::GraphShape(format!("n = {} but the matrix has {} rows", raw.n, g.n)));
        }
        Ok(g)
    }
}

impl ClassicalGraph {
    pub fn new(adj: Vec<Vec<u8>>, directed: bool) -> Result<Self> {
        Self::with_loops(adj, directed, false)
    }

    pub fn with_loops(adj: Vec<Vec<u8>>, directed: bool, loops: bool) -> Result<Self> {
        let n = adj.len();
        for (y, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::GraphShape(format!("row {y} has length {}, expected {n}", row.len())));
            }
            if let Some(x) = row.iter().position(|&v| v > 1) {
                return Err(Error::GraphShape(format!("entry ({y},{x}) is {}, expected 0 or 1", row[x])));
            }
            if !loops && row[y] == 1 {
                return Err(Error::GraphShape(format!("self-loop at {y} in a loopless graph")));
            }
        }
        if !directed {
            for y in 0..n {
                for x in 0..y {
                    if adj[y][x] != adj[x][y] {
                        return Err(Error::GraphShape(format!("undirected graph is not symmetric at ({y},{x})")));
                    }
                }
            }
        }
        Ok(Self { n, directed, loops, adj })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], directed: bool) -> Result<Self> {
        let mut adj = vec![vec![0u8; n]; n];
        for &(x, y) in edges {
            if x >= n || y >= n {
                return Err(Error::GraphShape(format!("edge ({x},{y}) out of range for {n} vertices")));
            }
            adj[y][x] = 1;
            if !directed {
                adj[x][y] = 1;
            }
        }
        Self::with_loops(adj, directed, edges.iter().any(|&(x, y)| x == y))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn is_directed(&self) -> bool {
        self.directed
    }
    pub fn has_loops(&self) -> bool {
        self.loops && (0..self.n).any(|v| self.adj[v][v] == 1)
    }
    pub fn adjacency(&self) -> &[Vec<u8>] {
        &self.adj
    }
    /// Edge `x → y`.
    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[y][x] == 1
    }
    pub fn in_degree(&self, y: usize) -> usize {
        self.adj[y].iter().filter(|&&v| v == 1).count()
    }
    pub fn out_degree(&self, x: usize) -> usize {
        (0..self.n).filter(|&y| self.adj[y][x] == 1).count()
    }

    /// For undirected graphs, pairs `x < y`; otherwise every arc `(x, y)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if self.has_edge(x, y) && (self.directed || x <= y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Adjacency on the commutative quantum set `C(V)`: `A e_x = Σ_{x→y} e_y`.
    pub fn to_linop(&self) -> LinOp {
        let m = CMat::from_fn(self.n, self.n, |y, x| c64(self.adj[y][x] as f64, 0.0));
        LinOp::new(QSet::classical(self.n), m).expect("square")
    }

    pub fn is_automorphism(&self, p: &[usize]) -> bool {
        p.len() == self.n && (0..self.n).all(|y| (0..self.n).all(|x| self.adj[y][x] == self.adj[p[y]][p[x]]))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let (kind, arrow) = if self.directed { ("digraph", "->") } else { ("graph", "--") };
        let mut s = format!("{kind} {name} {{\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  {v};");
        }
        for (x, y) in self.edges() {
            let _ = writeln!(s, "  {x} {arrow} {y};");
        }
        s.push_str("}\n");
        s
    }
}

/// Permutation group given by generators, with its order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    pub order: u64,
}

impl PermGroup {
    /// Order of the group generated by `generators`, by enumeration; `None` past `cap`.
    pub fn closure_order(&self, cap: usize) -> Option<u64> {
        let id: Vec<usize> = (0..self.degree).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = compose(g, &p);
                if seen.insert(q.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(q);
                }
            }
        }
        Some(seen.len() as u64)
    }
}

/// `0 ~ i` for `i > ⌊n/2⌋`; `i ~ j` for `i, j ≥ 1`, `i ≠ j`, `i + j > n`.
pub fn aux_graph_h(n: usize) -> ClassicalGraph {
    let mut edges = Vec::new();
    for i in n / 2 + 1..=n {
        edges.push((0, i));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if i + j > n {
                edges.push((i, j));
            }
        }
    }
    ClassicalGraph::from_edges(n + 1, &edges, false).expect("valid by construction")
}

/// On `{0..2n}`: `0 ~ i` for `i > n`; `i ~ j` for `i, j ≥ 1`, `i ≠ j`, `i + j > 2n`.
pub fn aux_graph_htilde(n: usize) -> ClassicalGraph {
    let mut edges = Vec::new();
    for i in n + 1..=2 * n {
        edges.push((0, i));
    }
    for i in 1..=2 * n {
        for j in i + 1..=2 * n {
            if i + j > 2 * n {
                edges.push((i, j));
            }
        }
    }
    ClassicalGraph::from_edges(2 * n + 1, &edges, false).expect("valid by construction")
}

/// Arcs `h → kh` for `k ∈ S`.
pub fn classical_cayley_digraph(group: &FiniteGroup, s: &[usize]) -> Result<ClassicalGraph> {
    let n = group.order();
    if let Some(&k) = s.iter().find(|&&k| k >= n) {
        return Err(Error::Input(format!("element {k} out of range for a group of order {n}")));
    }
    let mut adj = vec![vec![0u8; n]; n];
    for h in 0..n {
        for &k in s {
            adj[group.mul(k, h)][h] = 1;
        }
    }
    ClassicalGraph::with_loops(adj, true, s.contains(&0))
}

fn sorted_by_degree(graphs: &[ClassicalGraph]) -> Result<Vec<&ClassicalGraph>> {
    let n = graphs.first().ok_or_else(|| Error::Input("empty graph list".into()))?.n();
    let mut out = Vec::with_capacity(graphs.len());
    for g in graphs {
        if g.n() != n {
            return Err(Error::GraphShape(format!("vertex counts differ: {} vs {n}", g.n())));
        }
        if g.has_loops() {
            return Err(Error::GraphShape("input graph has loops".into()));
        }
        let d = g.in_degree(0);
        if (0..n).any(|v| g.in_degree(v) != d || g.out_degree(v) != d) {
            return Err(Error::GraphShape("input graph is not regular".into()));
        }
        out.push(g);
    }
    out.sort_by_key(|g| g.in_degree(0));
    Ok(out)
}

/// Vertices `(v, i)` at index `i·|V| + v`; `I ⊗ H` plus the `i`-th graph on layer `i`.
pub fn combine_directed_classical(graphs: &[ClassicalGraph]) -> Result<ClassicalGraph> {
    let gs = sorted_by_degree(graphs)?;
    let (nv, m) = (gs[0].n(), gs.len());
    let b = aux_graph_h(m);
    let mut adj = vec![vec![0u8; nv * (m + 1)]; nv * (m + 1)];
    for v in 0..nv {
        for (i, j) in b.edges() {
            adj[j * nv + v][i * nv + v] = 1;
            adj[i * nv + v][j * nv + v] = 1;
        }
    }
    for (i, g) in gs.iter().enumerate() {
        let layer = (i + 1) * nv;
        for (x, y) in g.edges() {
            adj[layer + y][layer + x] = 1;
        }
    }
    ClassicalGraph::new(adj, true)
}

/// `I ⊗ H̃` plus edges `(v, 2i−1) ~ (w, 2i)` for each arc `v → w` of the `i`-th graph.
pub fn combine_undirected_classical(graphs: &[ClassicalGraph]) -> Result<ClassicalGraph> {
    let gs = sorted_by_degree(graphs)?;
    let (nv, m) = (gs[0].n(), gs.len());
    let b = aux_graph_htilde(m);
    let size = nv * (2 * m + 1);
    let mut adj = vec![vec![0u8; size]; size];
    for v in 0..nv {
        for (i, j) in b.edges() {
            adj[j * nv + v][i * nv + v] = 1;
            adj[i * nv + v][j * nv + v] = 1;
        }
    }
    for (i, g) in gs.iter().enumerate() {
        let (lo, hi) = ((2 * i + 1) * nv, (2 * i + 2) * nv);
        for x in 0..nv {
            for y in 0..nv {
                if g.has_edge(x, y) {
                    adj[hi + y][lo + x] = 1;
                    adj[lo + x][hi + y] = 1;
                }
            }
        }
    }
    ClassicalGraph::new(adj, false)
}
