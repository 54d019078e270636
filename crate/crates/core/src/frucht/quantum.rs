use serde::Serialize;

use super::automorphism::graph_automorphisms;
use super::classical::{
    aux_graph_h, aux_graph_htilde, classical_cayley_digraph, combine_directed_classical, combine_undirected_classical,
    ClassicalGraph, PermGroup,
};
use crate::error::{Error, Result};
use crate::fingroup::FiniteGroup;
use crate::linalg::{c64, relative_rank, CMat, CVec, C64, I, ONE};
use crate::qgroup::{cayley_graph, fourier_multiplier, GroupDual, QGroupData};
use crate::qspace::{degree_operators, spectral_projections, GraphReport, LinOp, QuantumGraph};
use crate::rigidity::{rigidity_verdict, RigidityVerdict, SEPARATION_TOL};

/// Degrees closer than this are treated as equal when checking label separation.
const DEGREE_TOL: f64 = 1e-6;
const SPAN_RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FamilyKind {
    /// `E_ii`, `(E_ii+E_ij+E_ji+E_jj)/2`, `(E_ii−iE_ij+iE_ji+E_jj)/2` in every block of `D`.
    Plain,
    /// Plain family sorted by degree; the first `keep` kept, the rest replaced by `1_D − p`.
    MixedComplement { keep: usize },
}

#[derive(Clone, Debug)]
pub struct Colour {
    pub label: String,
    pub projection: CVec,
    pub graph: QuantumGraph,
    pub degree: C64,
}

#[derive(Clone, Debug)]
pub struct ColouredFamily {
    pub kind: FamilyKind,
    pub counit_block: usize,
    /// `dim D`, the complement of the counit block.
    pub complement_dim: usize,
    pub span_rank: usize,
    /// Sorted by degree (real part), stable.
    pub colours: Vec<Colour>,
}

impl ColouredFamily {
    pub fn degrees(&self) -> Vec<C64> {
        self.colours.iter().map(|c| c.degree).collect()
    }
    pub fn graphs(&self) -> Vec<QuantumGraph> {
        self.colours.iter().map(|c| c.graph.clone()).collect()
    }
}

/// The unique block carrying the counit; it must be one-dimensional.
pub fn counit_block(q: &QGroupData) -> Result<usize> {
    let s = q.space();
    let eps = q.counit_values();
    let support: Vec<usize> = (0..s.blocks().len())
        .filter(|&k| {
            let o = s.offset(k);
            let n = s.blocks()[k];
            eps[o..o + n * n].iter().any(|v| v.norm() > 1e-9)
        })
        .collect();
    match support.as_slice() {
        [k] if s.blocks()[*k] == 1 => Ok(*k),
        _ => Err(Error::Hopf(format!("counit support is not a single one-dimensional block: blocks {support:?}"))),
    }
}

fn plain_projections(q: &QGroupData, skip: usize) -> Vec<(String, CVec)> {
    let s = q.space();
    let mut out = Vec::new();
    for (k, &n) in s.blocks().iter().enumerate() {
        if k == skip {
            continue;
        }
        let embed = |m: CMat| {
            let mut v = CVec::zeros(s.dim());
            for i in 0..n {
                for j in 0..n {
                    v[s.index(k, i, j)] = m[(i, j)];
                }
            }
            v
        };
        for i in 0..n {
            let mut m = CMat::zeros(n, n);
            m[(i, i)] = ONE;
            out.push((format!("block {k}: E_{i}{i}"), embed(m)));
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut m = CMat::zeros(n, n);
                m[(i, i)] = c64(0.5, 0.0);
                m[(j, j)] = c64(0.5, 0.0);
                m[(i, j)] = c64(0.5, 0.0);
                m[(j, i)] = c64(0.5, 0.0);
                out.push((format!("block {k}: (E_{i}{i}+E_{i}{j}+E_{j}{i}+E_{j}{j})/2"), embed(m.clone())));
                m[(i, j)] = -I * 0.5;
                m[(j, i)] = I * 0.5;
                out.push((format!("block {k}: (E_{i}{i}-iE_{i}{j}+iE_{j}{i}+E_{j}{j})/2"), embed(m)));
            }
        }
    }
    out
}

fn build_family(q: &QGroupData, kind: FamilyKind, tol: f64) -> Result<ColouredFamily> {
    let cb = counit_block(q)?;
    let s = q.space();
    let complement_dim = s.dim() - 1;
    let mut one_d = s.unit();
    one_d[s.offset(cb)] = c64(0.0, 0.0);
    let make = |label: String, p: CVec| -> Result<Colour> {
        let (graph, _) = cayley_graph(q, &p, tol)?;
        let degree =
            graph.regular_degree().ok_or_else(|| Error::GraphShape(format!("colour {label} is not regular")))?;
        if !graph.flags().loopless {
            return Err(Error::GraphShape(format!("colour {label} has loops")));
        }
        Ok(Colour { label, projection: p, graph, degree })
    };
    let mut plain = plain_projections(q, cb).into_iter().map(|(l, p)| make(l, p)).collect::<Result<Vec<_>>>()?;
    plain.sort_by(|a, b| a.degree.re.total_cmp(&b.degree.re));
    let colours = match kind {
        FamilyKind::Plain => plain,
        FamilyKind::MixedComplement { keep } => {
            let mut out = Vec::with_capacity(plain.len());
            for (idx, c) in plain.into_iter().enumerate() {
                if idx < keep {
                    out.push(c);
                } else {
                    out.push(make(format!("1_D - [{}]", c.label), &one_d - &c.projection)?);
                }
            }
            out.sort_by(|a, b| a.degree.re.total_cmp(&b.degree.re));
            out
        }
    };
    let mut span = CMat::zeros(s.dim(), colours.len());
    for (j, c) in colours.iter().enumerate() {
        span.set_column(j, &c.projection);
    }
    let span_rank = relative_rank(&span, SPAN_RANK_TOL);
    if span_rank != complement_dim {
        return Err(Error::Input(format!("family spans {span_rank} dimensions, complement has {complement_dim}")));
    }
    Ok(ColouredFamily { kind, counit_block: cb, complement_dim, span_rank, colours })
}

/// Matrix-unit projections spanning the complement of the counit block.
pub fn coloured_family(q: &QGroupData, tol: f64) -> Result<ColouredFamily> {
    build_family(q, FamilyKind::Plain, tol)
}

/// Measured degrees of the undirected combination: label 0, then `d_i + 2i − 1`, `d_i + 2i`.
pub fn undirected_label_degrees(degrees: &[f64]) -> Vec<f64> {
    let mut out = vec![degrees.len() as f64];
    for (k, d) in degrees.iter().enumerate() {
        let i = (k + 1) as f64;
        out.push(d + 2.0 * i - 1.0);
        out.push(d + 2.0 * i);
    }
    out
}

/// Measured degrees of the directed combination: `⌈n/2⌉`, then `d_i + i`.
pub fn directed_label_degrees(degrees: &[f64]) -> Vec<f64> {
    let n = degrees.len();
    let mut out = vec![n.div_ceil(2) as f64];
    out.extend(degrees.iter().enumerate().map(|(k, d)| d + (k + 1) as f64));
    out
}

fn has_collision(values: &[f64]) -> bool {
    values.iter().enumerate().any(|(a, x)| values[a + 1..].iter().any(|y| (x - y).abs() <= DEGREE_TOL))
}

/// First family among plain, then mixed-complement with `keep = 1, 2, …`, then `keep = 0`,
/// whose undirected combination has pairwise distinct label degrees. Falls back to plain.
pub fn degree_separated_family(q: &QGroupData, tol: f64) -> Result<ColouredFamily> {
    let plain = coloured_family(q, tol)?;
    let ok = |f: &ColouredFamily| {
        f.colours.iter().all(|c| c.degree.im.abs() <= DEGREE_TOL)
            && !has_collision(&undirected_label_degrees(&f.colours.iter().map(|c| c.degree.re).collect::<Vec<_>>()))
    };
    if ok(&plain) {
        return Ok(plain);
    }
    let m = plain.colours.len();
    for keep in (1..=m).chain(std::iter::once(0)) {
        if let Ok(f) = build_family(q, FamilyKind::MixedComplement { keep }, tol) {
            if ok(&f) {
                return Ok(f);
            }
        }
    }
    Ok(plain)
}

#[derive(Clone, Debug)]
pub struct Combined {
    pub graph: QuantumGraph,
    pub aux: ClassicalGraph,
    /// Input indices in the order they were placed (by degree).
    pub order: Vec<usize>,
    pub degrees: Vec<C64>,
}

fn sorted_inputs(graphs: &[QuantumGraph]) -> Result<(Vec<usize>, Vec<C64>)> {
    let first = graphs.first().ok_or_else(|| Error::Input("empty graph list".into()))?;
    let mut degs = Vec::with_capacity(graphs.len());
    for (k, g) in graphs.iter().enumerate() {
        if g.space() != first.space() {
            return Err(Error::GraphShape(format!("graph {k} lives on a different quantum set")));
        }
        let d = g.regular_degree().ok_or_else(|| Error::GraphShape(format!("graph {k} is not regular")))?;
        if !g.flags().loopless {
            return Err(Error::GraphShape(format!("graph {k} has loops")));
        }
        degs.push(d);
    }
    let mut order: Vec<usize> = (0..graphs.len()).collect();
    order.sort_by(|&a, &b| degs[a].re.total_cmp(&degs[b].re));
    let degrees = order.iter().map(|&k| degs[k]).collect();
    Ok((order, degrees))
}

fn label_operator(b: &ClassicalGraph, d: usize) -> CMat {
    let bm = CMat::from_fn(b.n(), b.n(), |y, x| c64(b.adjacency()[y][x] as f64, 0.0));
    bm.kronecker(&CMat::identity(d, d))
}

fn unit_matrix(l: usize, r: usize, c: usize) -> CMat {
    let mut e = CMat::zeros(l, l);
    e[(r, c)] = ONE;
    e
}

/// `I ⊗ B + Σ_i A_i ⊗ P_i` with `B = H(n)`, on `C(X) ⊗ ℂ^{n+1}` (label-major).
pub fn combine_directed(graphs: &[QuantumGraph], tol: f64) -> Result<Combined> {
    let (order, degrees) = sorted_inputs(graphs)?;
    let space = graphs[0].space();
    let (d, n) = (space.dim(), graphs.len());
    let aux = aux_graph_h(n);
    let mut m = label_operator(&aux, d);
    for (slot, &k) in order.iter().enumerate() {
        m += unit_matrix(n + 1, slot + 1, slot + 1).kronecker(graphs[k].adjacency().matrix());
    }
    let graph = QuantumGraph::new(LinOp::new(space.repeat(n + 1), m)?, tol)?;
    Ok(Combined { graph, aux, order, degrees })
}

/// `I ⊗ B + Σ_i (A_i ⊗ E_{2i−1,2i} + A_i^* ⊗ E_{2i,2i−1})` with `B = H̃(n)`.
pub fn combine_undirected(graphs: &[QuantumGraph], tol: f64) -> Result<Combined> {
    let (order, degrees) = sorted_inputs(graphs)?;
    let space = graphs[0].space();
    let (d, n) = (space.dim(), graphs.len());
    let labels = 2 * n + 1;
    let aux = aux_graph_htilde(n);
    let mut m = label_operator(&aux, d);
    for (slot, &k) in order.iter().enumerate() {
        let (lo, hi) = (2 * slot + 1, 2 * slot + 2);
        let a = graphs[k].adjacency();
        m += unit_matrix(labels, lo, hi).kronecker(a.matrix());
        m += unit_matrix(labels, hi, lo).kronecker(a.adjoint().matrix());
    }
    let graph = QuantumGraph::new(LinOp::new(space.repeat(labels), m)?, tol)?;
    Ok(Combined { graph, aux, order, degrees })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Directed,
    Undirected,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalFrucht {
    pub mode: Mode,
    pub graph: ClassicalGraph,
    pub aut: PermGroup,
    /// Every right translation `(v, i) ↦ (v k, i)` is an automorphism.
    pub right_translations: bool,
    /// Every generator preserves the label coordinate.
    pub label_preserving: bool,
    pub verified: bool,
}

/// One-element Cayley digraphs `h → g h` for all `g ≠ e`, combined in the chosen mode.
pub fn classical_frucht(group: &FiniteGroup, mode: Mode) -> Result<ClassicalFrucht> {
    let n = group.order();
    if n < 2 {
        return Err(Error::Input("the group must have at least two elements".into()));
    }
    let colours = (1..n).map(|g| classical_cayley_digraph(group, &[g])).collect::<Result<Vec<_>>>()?;
    let graph = match mode {
        Mode::Directed => combine_directed_classical(&colours)?,
        Mode::Undirected => combine_undirected_classical(&colours)?,
    };
    let aut = graph_automorphisms(&graph)?;
    let right_translations = (0..n).all(|k| {
        let p: Vec<usize> = (0..graph.n()).map(|x| (x / n) * n + group.mul(x % n, k)).collect();
        graph.is_automorphism(&p)
    });
    let label_preserving = aut.generators.iter().all(|p| p.iter().enumerate().all(|(x, &y)| x / n == y / n));
    let verified = right_translations && label_preserving && aut.order == n as u64;
    Ok(ClassicalFrucht { mode, graph, aut, right_translations, label_preserving, verified })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub eigenvalue: [f64; 2],
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColourSummary {
    pub label: String,
    pub degree: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct FruchtReport {
    pub family: FamilyKind,
    pub counit_block: usize,
    pub colours: Vec<ColourSummary>,
    pub non_real_degree: bool,
    pub input_dim: usize,
    pub dimension: usize,
    pub blocks: Vec<usize>,
    pub graph: GraphReport,
    pub degree_spectrum: Vec<SpectrumEntry>,
    pub predicted_degrees: Vec<f64>,
    pub degree_collision: bool,
    /// Level-set verdict of each colour's symbol (group duals only).
    pub rigidity: Option<Vec<RigidityVerdict>>,
}

pub fn measured_degree_spectrum(a: &LinOp, tol: f64) -> Result<Vec<SpectrumEntry>> {
    let deg = degree_operators(a, tol);
    Ok(spectral_projections(&deg.in_degree, 1e-8, tol.max(1e-9))?
        .into_iter()
        .map(|b| SpectrumEntry { eigenvalue: [b.eigenvalue.re, b.eigenvalue.im], rank: b.rank })
        .collect())
}

/// Degree-separated coloured family combined into one undirected quantum graph.
pub fn quantum_frucht_pipeline(
    q: &QGroupData,
    dual: Option<&GroupDual>,
    tol: f64,
) -> Result<(QuantumGraph, FruchtReport)> {
    let family = degree_separated_family(q, tol)?;
    let combined = combine_undirected(&family.graphs(), tol)?;
    let degrees: Vec<f64> = combined.degrees.iter().map(|d| d.re).collect();
    let predicted = undirected_label_degrees(&degrees);
    let rigidity = dual.map(|d| {
        family
            .colours
            .iter()
            .map(|c| rigidity_verdict(d.group(), &fourier_multiplier(d, &c.projection), SEPARATION_TOL))
            .collect()
    });
    let report = FruchtReport {
        family: family.kind,
        counit_block: family.counit_block,
        colours: family
            .colours
            .iter()
            .map(|c| ColourSummary { label: c.label.clone(), degree: [c.degree.re, c.degree.im] })
            .collect(),
        non_real_degree: family.colours.iter().any(|c| c.degree.im.abs() > DEGREE_TOL),
        input_dim: q.space().dim(),
        dimension: combined.graph.space().dim(),
        blocks: combined.graph.space().blocks().to_vec(),
        graph: combined.graph.report().clone(),
        degree_spectrum: measured_degree_spectrum(combined.graph.adjacency(), tol)?,
        degree_collision: has_collision(&predicted),
        predicted_degrees: predicted,
        rigidity,
    };
    Ok((combined.graph, report))
}
