//! Automorphism groups of classical (di)graphs by individualization-refinement.
//!
//! The group order is the product of orbit lengths along the base chosen by the search:
//! at each level every candidate image of the base point is either reached by the
//! generators found so far or tested exhaustively in its subtree.

use std::collections::BTreeSet;

use super::classical::{ClassicalGraph, PermGroup};
use crate::error::{Error, Result};

pub const VERTEX_CAP: usize = 512;

struct Digraph {
    n: usize,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    loops: Vec<bool>,
}

impl Digraph {
    fn new(g: &ClassicalGraph) -> Self {
        let n = g.n();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for x in 0..n {
            for y in 0..n {
                if g.has_edge(x, y) {
                    out[x].push(y);
                    inn[y].push(x);
                }
            }
        }
        Self { n, out, inn, loops: (0..n).map(|v| g.has_edge(v, v)).collect() }
    }

    /// Equitable refinement of an ordered colouring; new colours keep the old order.
    fn refine(&self, colour: &mut [usize]) {
        let mut count = colour.iter().collect::<BTreeSet<_>>().len();
        loop {
            let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..self.n)
                .map(|v| {
                    let mut o: Vec<usize> = self.out[v].iter().map(|&u| colour[u]).collect();
                    let mut i: Vec<usize> = self.inn[v].iter().map(|&u| colour[u]).collect();
                    o.sort_unstable();
                    i.sort_unstable();
                    (colour[v], o, i)
                })
                .collect();
            let mut uniq: Vec<&(usize, Vec<usize>, Vec<usize>)> = sigs.iter().collect();
            uniq.sort();
            uniq.dedup();
            for (v, s) in sigs.iter().enumerate() {
                colour[v] = uniq.binary_search(&s).expect("present");
            }
            if uniq.len() == count {
                return;
            }
            count = uniq.len();
        }
    }

    fn initial(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.loops.iter().map(|&l| l as usize).collect();
        if c.iter().all(|&x| x == 1) {
            c.iter_mut().for_each(|x| *x = 0);
        }
        self.refine(&mut c);
        c
    }

    fn individualize(&self, colour: &[usize], v: usize) -> Vec<usize> {
        let c = colour[v];
        let mut out: Vec<usize> =
            colour.iter().enumerate().map(|(x, &k)| if k > c || (k == c && x != v) { k + 1 } else { k }).collect();
        self.refine(&mut out);
        out
    }

    fn is_automorphism(&self, p: &[usize]) -> bool {
        (0..self.n).all(|x| {
            self.loops[x] == self.loops[p[x]] && {
                let mut a: Vec<usize> = self.out[x].iter().map(|&y| p[y]).collect();
                a.sort_unstable();
                a == self.out[p[x]]
            }
        })
    }
}

fn cell_sizes(colour: &[usize]) -> Vec<usize> {
    let k = colour.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0; k];
    for &c in colour {
        sizes[c] += 1;
    }
    sizes
}

fn is_discrete(colour: &[usize]) -> bool {
    cell_sizes(colour).iter().all(|&s| s == 1)
}

/// First smallest non-singleton cell, members ascending.
fn target_cell(colour: &[usize]) -> Vec<usize> {
    let sizes = cell_sizes(colour);
    let (best, _) = sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1)
        .min_by_key(|&(c, &s)| (s, c))
        .expect("partition is not discrete");
    (0..colour.len()).filter(|&v| colour[v] == best).collect()
}

fn orbit(v: usize, gens: &[Vec<usize>]) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for g in gens {
            if seen.insert(g[x]) {
                stack.push(g[x]);
            }
        }
    }
    seen
}

struct Reference {
    /// Cell sizes at each depth of the first path.
    trace: Vec<Vec<usize>>,
    /// Vertex in each colour of the discrete leaf.
    leaf: Vec<usize>,
}

impl Reference {
    fn first_path(g: &Digraph, start: Vec<usize>) -> Self {
        let mut colour = start;
        let mut trace = vec![cell_sizes(&colour)];
        while !is_discrete(&colour) {
            let v = target_cell(&colour)[0];
            colour = g.individualize(&colour, v);
            trace.push(cell_sizes(&colour));
        }
        let mut leaf = vec![0; g.n];
        for (v, &c) in colour.iter().enumerate() {
            leaf[c] = v;
        }
        Self { trace, leaf }
    }
}

fn find_mapping(g: &Digraph, colour: &[usize], depth: usize, r: &Reference) -> Option<Vec<usize>> {
    if r.trace.get(depth) != Some(&cell_sizes(colour)) {
        return None;
    }
    if is_discrete(colour) {
        let mut p = vec![0; g.n];
        for (v, &c) in colour.iter().enumerate() {
            p[r.leaf[c]] = v;
        }
        return g.is_automorphism(&p).then_some(p);
    }
    target_cell(colour).into_iter().find_map(|u| find_mapping(g, &g.individualize(colour, u), depth + 1, r))
}

fn stabilizer(g: &Digraph, colour: &[usize], gens: &mut Vec<Vec<usize>>) -> u64 {
    if is_discrete(colour) {
        return 1;
    }
    let cell = target_cell(colour);
    let v = cell[0];
    let child = g.individualize(colour, v);
    let sub = stabilizer(g, &child, gens);
    let reference = Reference::first_path(g, child);
    let mut reached = orbit(v, gens);
    for &w in &cell[1..] {
        if reached.contains(&w) {
            continue;
        }
        if let Some(p) = find_mapping(g, &g.individualize(colour, w), 0, &reference) {
            gens.push(p);
            reached = orbit(v, gens);
        }
    }
    reached.len() as u64 * sub
}

/// Generators and exact order of `Aut(g)`.
pub fn graph_automorphisms(graph: &ClassicalGraph) -> Result<PermGroup> {
    if graph.n() > VERTEX_CAP {
        return Err(Error::Cap(format!("{} vertices exceed the automorphism cap {VERTEX_CAP}", graph.n())));
    }
    let g = Digraph::new(graph);
    let mut gens = Vec::new();
    let order = if g.n == 0 { 1 } else { stabilizer(&g, &g.initial(), &mut gens) };
    Ok(PermGroup { degree: g.n, generators: gens, order })
}

/// Every automorphism, by plain vertex-by-vertex backtracking with no refinement.
///
/// Stops after `cap` automorphisms; meant as an independent oracle on small graphs.
pub fn enumerate_automorphisms(graph: &ClassicalGraph, cap: usize) -> Vec<Vec<usize>> {
    let n = graph.n();
    let adj = |x: usize, y: usize| graph.has_edge(x, y);
    let degs: Vec<(usize, usize, bool)> =
        (0..n).map(|v| (graph.in_degree(v), graph.out_degree(v), adj(v, v))).collect();
    let mut out = Vec::new();
    let mut p = vec![usize::MAX; n];
    let mut used = vec![false; n];

    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        n: usize,
        p: &mut [usize],
        used: &mut [bool],
        degs: &[(usize, usize, bool)],
        adj: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if k == n {
            out.push(p.to_vec());
            return;
        }
        for u in 0..n {
            if used[u] || degs[u] != degs[k] {
                continue;
            }
            if (0..k).all(|x| adj(x, k) == adj(p[x], u) && adj(k, x) == adj(u, p[x])) {
                p[k] = u;
                used[u] = true;
                go(k + 1, n, p, used, degs, adj, out, cap);
                used[u] = false;
            }
        }
    }

    go(0, n, &mut p, &mut used, &degs, &adj, &mut out, cap);
    out
}
