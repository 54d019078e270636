//! Finite quantum sets and the Schur-product calculus on their operators.
//!
//! A quantum set is stored as the multi-matrix algebra `M_{n_1} ⊕ … ⊕ M_{n_B}`
//! with the unnormalized matrix units as basis (block-major, then row-major) and the
//! tracial functional `ψ = ⊕ n_k Tr`. For this `ψ` the multiplication `m` satisfies
//! `m m^* = id`. All adjoints are taken in the weighted inner product
//! `⟨e^k_ij, e^l_pq⟩ = n_k δ_kl δ_ip δ_jq`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c64, cluster_sorted, hermitian_eigen, CMat, CVec, C64, ONE, ZERO};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSet {
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
    // (a, c, k) with e_a e_c = e_k
    triples: Vec<(usize, usize, usize)>,
}

impl QSet {
    pub fn new(blocks: &[usize]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Input("quantum set needs at least one block".into()));
        }
        if let Some(pos) = blocks.iter().position(|&n| n == 0) {
            return Err(Error::Input(format!("block {pos} has size 0")));
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        let mut triples = Vec::new();
        for &n in blocks {
            offsets.push(dim);
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        triples.push((dim + i * n + j, dim + j * n + l, dim + i * n + l));
                    }
                }
            }
            dim += n * n;
        }
        Ok(Self { blocks: blocks.to_vec(), offsets, dim, triples })
    }

    /// The commutative quantum set `C^n` with counting measure.
    pub fn classical(n: usize) -> Self {
        Self::new(&vec![1; n.max(1)]).expect("positive sizes")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_classical(&self) -> bool {
        self.blocks.iter().all(|&n| n == 1)
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn index(&self, k: usize, i: usize, j: usize) -> usize {
        self.offsets[k] + i * self.blocks[k] + j
    }

    /// Inverse of [`QSet::index`].
    pub fn locate(&self, idx: usize) -> (usize, usize, usize) {
        let k = match self.offsets.binary_search(&idx) {
            Ok(k) => k,
            Err(k) => k - 1,
        };
        let n = self.blocks[k];
        let r = idx - self.offsets[k];
        (k, r / n, r % n)
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.blocks[self.locate(idx).0] as f64
    }

    pub fn weights(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.dim);
        for &n in &self.blocks {
            w.extend(std::iter::repeat_n(n as f64, n * n));
        }
        w
    }

    pub fn products(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }

    pub fn basis_vector(&self, idx: usize) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[idx] = ONE;
        v
    }

    pub fn unit(&self) -> CVec {
        let mut v = CVec::zeros(self.dim);
        for (k, &n) in self.blocks.iter().enumerate() {
            for i in 0..n {
                v[self.index(k, i, i)] = ONE;
            }
        }
        v
    }

    pub fn psi(&self, x: &CVec) -> C64 {
        let mut s = ZERO;
        for (k, &n) in self.blocks.iter().enumerate() {
            for i in 0..n {
                s += x[self.index(k, i, i)] * n as f64;
            }
        }
        s
    }

    /// Weighted inner product, antilinear in the first argument.
    pub fn inner(&self, x: &CVec, y: &CVec) -> C64 {
        let w = self.weights();
        (0..self.dim).map(|i| x[i].conj() * y[i] * w[i]).sum()
    }

    pub fn norm(&self, x: &CVec) -> f64 {
        self.inner(x, x).re.max(0.0).sqrt()
    }

    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        let mut z = CVec::zeros(self.dim);
        for &(a, c, k) in &self.triples {
            z[k] += x[a] * y[c];
        }
        z
    }

    pub fn star(&self, x: &CVec) -> CVec {
        let perm = self.star_permutation();
        CVec::from_fn(self.dim, |i, _| x[perm[i]].conj())
    }

    /// `perm[idx(k,i,j)] = idx(k,j,i)`.
    pub fn star_permutation(&self) -> Vec<usize> {
        (0..self.dim)
            .map(|idx| {
                let (k, i, j) = self.locate(idx);
                self.index(k, j, i)
            })
            .collect()
    }

    pub fn block(&self, x: &CVec, k: usize) -> CMat {
        let n = self.blocks[k];
        CMat::from_fn(n, n, |i, j| x[self.index(k, i, j)])
    }

    pub fn from_blocks(&self, blocks: &[CMat]) -> CVec {
        let mut v = CVec::zeros(self.dim);
        for (k, b) in blocks.iter().enumerate() {
            let n = self.blocks[k];
            for i in 0..n {
                for j in 0..n {
                    v[self.index(k, i, j)] = b[(i, j)];
                }
            }
        }
        v
    }

    /// `X ⊗ C^m`, laid out label-major: basis index `label * dim + x`.
    pub fn repeat(&self, m: usize) -> QSet {
        let mut blocks = Vec::with_capacity(self.blocks.len() * m);
        for _ in 0..m {
            blocks.extend_from_slice(&self.blocks);
        }
        QSet::new(&blocks).expect("positive sizes")
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mul_matrix(&self, x: &CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for &(a, c, k) in &self.triples {
            m[(k, c)] += x[a];
        }
        m
    }

    /// Explicit `m : ℓ²(X)⊗ℓ²(X) → ℓ²(X)` as a `dim × dim²` matrix.
    pub fn multiplication_matrix(&self) -> CMat {
        let d = self.dim;
        let mut m = CMat::zeros(d, d * d);
        for &(a, c, k) in &self.triples {
            m[(k, a * d + c)] = ONE;
        }
        m
    }

    /// Weighted adjoint of [`QSet::multiplication_matrix`].
    pub fn comultiplication_matrix(&self) -> CMat {
        let d = self.dim;
        let w = self.weights();
        let m = self.multiplication_matrix();
        CMat::from_fn(d * d, d, |r, k| m[(k, r)].conj() * (w[k] / (w[r / d] * w[r % d])))
    }

    /// Product in `C(X) ⊗ C(X)`, elements indexed `a * dim + b`.
    pub fn tensor_mul(&self, x: &CVec, y: &CVec) -> CVec {
        let d = self.dim;
        let mut z = CVec::zeros(d * d);
        for &(a, c, k) in &self.triples {
            for &(b, e, l) in &self.triples {
                let xv = x[a * d + b];
                let yv = y[c * d + e];
                if xv != ZERO && yv != ZERO {
                    z[k * d + l] += xv * yv;
                }
            }
        }
        z
    }

    pub fn tensor_star(&self, x: &CVec) -> CVec {
        let d = self.dim;
        let perm = self.star_permutation();
        CVec::from_fn(d * d, |r, _| x[perm[r / d] * d + perm[r % d]].conj())
    }

    pub fn tensor(&self, x: &CVec, y: &CVec) -> CVec {
        let d = self.dim;
        CVec::from_fn(d * d, |r, _| x[r / d] * y[r % d])
    }

    /// `(ψ ⊗ id)(z)`.
    pub fn psi_left(&self, z: &CVec) -> CVec {
        let d = self.dim;
        let mut out = CVec::zeros(d);
        for (k, &n) in self.blocks.iter().enumerate() {
            for i in 0..n {
                let a = self.index(k, i, i);
                for b in 0..d {
                    out[b] += z[a * d + b] * n as f64;
                }
            }
        }
        out
    }

    /// `(id ⊗ ψ)(z)`.
    pub fn psi_right(&self, z: &CVec) -> CVec {
        let d = self.dim;
        let mut out = CVec::zeros(d);
        for (k, &n) in self.blocks.iter().enumerate() {
            for i in 0..n {
                let b = self.index(k, i, i);
                for a in 0..d {
                    out[a] += z[a * d + b] * n as f64;
                }
            }
        }
        out
    }
}

/// A linear endomorphism of `ℓ²(X)` in the matrix-unit basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LinOp {
    space: QSet,
    mat: CMat,
}

impl LinOp {
    pub fn new(space: QSet, mat: CMat) -> Result<Self> {
        let d = space.dim();
        if mat.shape() != (d, d) {
            return Err(Error::Shape(format!("operator is {:?}, space has dim {d}", mat.shape())));
        }
        Ok(Self { space, mat })
    }

    pub fn identity(space: &QSet) -> Self {
        let d = space.dim();
        Self { space: space.clone(), mat: CMat::identity(d, d) }
    }

    pub fn zero(space: &QSet) -> Self {
        let d = space.dim();
        Self { space: space.clone(), mat: CMat::zeros(d, d) }
    }

    pub fn space(&self) -> &QSet {
        &self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn apply(&self, x: &CVec) -> CVec {
        &self.mat * x
    }

    pub fn adjoint(&self) -> Self {
        let w = self.space.weights();
        let d = self.space.dim();
        let mat = CMat::from_fn(d, d, |i, j| self.mat[(j, i)].conj() * (w[j] / w[i]));
        Self { space: self.space.clone(), mat }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinOp) -> Result<Self> {
        same_space(self, other)?;
        Ok(Self { space: self.space.clone(), mat: &self.mat * &other.mat })
    }

    pub fn add(&self, other: &LinOp) -> Result<Self> {
        same_space(self, other)?;
        Ok(Self { space: self.space.clone(), mat: &self.mat + &other.mat })
    }

    pub fn sub(&self, other: &LinOp) -> Result<Self> {
        same_space(self, other)?;
        Ok(Self { space: self.space.clone(), mat: &self.mat - &other.mat })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { space: self.space.clone(), mat: &self.mat * s }
    }

    /// Matrix of the operator in the orthonormal frame `W^{1/2} A W^{-1/2}`.
    pub fn orthonormal_matrix(&self) -> CMat {
        let w = self.space.weights();
        let d = self.space.dim();
        CMat::from_fn(d, d, |i, j| self.mat[(i, j)] * (w[i] / w[j]).sqrt())
    }

    pub fn from_orthonormal_matrix(space: &QSet, m: &CMat) -> Result<Self> {
        let w = space.weights();
        let d = space.dim();
        if m.shape() != (d, d) {
            return Err(Error::Shape(format!("operator is {:?}, space has dim {d}", m.shape())));
        }
        let mat = CMat::from_fn(d, d, |i, j| m[(i, j)] * (w[j] / w[i]).sqrt());
        Ok(Self { space: space.clone(), mat })
    }

    /// Hilbert–Schmidt norm for the weighted inner product.
    pub fn norm(&self) -> f64 {
        self.orthonormal_matrix().norm()
    }
}

fn same_space(a: &LinOp, b: &LinOp) -> Result<()> {
    if a.space != b.space {
        return Err(Error::Shape(format!(
            "operators act on different quantum sets {:?} and {:?}",
            a.space.blocks(),
            b.space.blocks()
        )));
    }
    Ok(())
}

/// `A • B = m (A ⊗ B) m^*`, evaluated column by column.
///
/// For `e_k = e^b_il`, `m^* e_k = (1/n_b) Σ_j e^b_ij ⊗ e^b_jl`, so
/// `(A • B) e_k = (1/n_b) Σ_j (A e^b_ij)(B e^b_jl)`.
pub fn schur_product(a: &LinOp, b: &LinOp) -> Result<LinOp> {
    same_space(a, b)?;
    let q = a.space();
    let d = q.dim();
    let mut out = CMat::zeros(d, d);
    let cols_a: Vec<CVec> = (0..d).map(|j| a.mat.column(j).into_owned()).collect();
    let cols_b: Vec<CVec> = (0..d).map(|j| b.mat.column(j).into_owned()).collect();
    for (k, &n) in q.blocks().iter().enumerate() {
        let inv = 1.0 / n as f64;
        for i in 0..n {
            for l in 0..n {
                let col = q.index(k, i, l);
                let mut acc = CVec::zeros(d);
                for j in 0..n {
                    acc += q.mul(&cols_a[q.index(k, i, j)], &cols_b[q.index(k, j, l)]);
                }
                out.set_column(col, &(acc * c64(inv, 0.0)));
            }
        }
    }
    LinOp::new(q.clone(), out)
}

/// `m (A ⊗ B) m^*` with `m`, `m^*` and `A ⊗ B` formed as explicit matrices.
///
/// Memory grows as `dim^4`; meant as a cross-check on small spaces.
pub fn schur_product_dense(a: &LinOp, b: &LinOp) -> Result<LinOp> {
    same_space(a, b)?;
    let q = a.space();
    let m = q.multiplication_matrix();
    let mstar = q.comultiplication_matrix();
    let ab = a.mat.kronecker(&b.mat);
    LinOp::new(q.clone(), m * ab * mstar)
}

/// `Ā f = (A(f^*))^*`.
pub fn conjugate_op(a: &LinOp) -> LinOp {
    let perm = a.space().star_permutation();
    let d = a.space().dim();
    let mat = CMat::from_fn(d, d, |i, j| a.mat[(perm[i], perm[j])].conj());
    LinOp { space: a.space.clone(), mat }
}

/// Complete quantum graph without loops: `A f = ψ(f) η − f`.
pub fn complete_graph(space: &QSet) -> LinOp {
    let d = space.dim();
    let eta = space.unit();
    let mut mat = CMat::zeros(d, d);
    for j in 0..d {
        let e = space.basis_vector(j);
        let col = &eta * space.psi(&e) - e;
        mat.set_column(j, &col);
    }
    LinOp { space: space.clone(), mat }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphFlags {
    pub schur_idempotent: bool,
    pub real: bool,
    pub undirected: bool,
    pub loopless: bool,
    pub regular_degree: Option<[f64; 2]>,
}

/// Residuals of the quantum adjacency axioms, each relative to `max(1, ||A||)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphReport {
    pub tol: f64,
    pub scale: f64,
    pub schur_residual: f64,
    pub real_residual: f64,
    pub adjoint_residual: f64,
    pub loop_residual: f64,
    pub in_degree_residual: f64,
    pub out_degree_residual: f64,
    /// Best-fit scalar for `Aη ≈ dη`.
    pub degree: [f64; 2],
}

impl GraphReport {
    pub fn is_schur_idempotent(&self) -> bool {
        self.schur_residual <= self.tol
    }
    pub fn is_real(&self) -> bool {
        self.real_residual <= self.tol
    }
    pub fn is_undirected(&self) -> bool {
        self.adjoint_residual <= self.tol
    }
    pub fn is_loopless(&self) -> bool {
        self.loop_residual <= self.tol
    }
    pub fn is_regular(&self) -> bool {
        self.in_degree_residual <= self.tol && self.out_degree_residual <= self.tol
    }
    pub fn is_quantum_graph(&self) -> bool {
        self.is_schur_idempotent() && self.is_real()
    }
    pub fn regular_degree(&self) -> Option<C64> {
        self.is_regular().then(|| c64(self.degree[0], self.degree[1]))
    }
    pub fn flags(&self) -> GraphFlags {
        GraphFlags {
            schur_idempotent: self.is_schur_idempotent(),
            real: self.is_real(),
            undirected: self.is_undirected(),
            loopless: self.is_loopless(),
            regular_degree: self.is_regular().then_some(self.degree),
        }
    }
}

pub fn verify_quantum_graph(a: &LinOp, tol: f64) -> GraphReport {
    let q = a.space();
    let scale = a.norm().max(1.0);
    let rel = |op: &LinOp| op.norm() / scale;
    let aa = schur_product(a, a).expect("same space");
    let schur = rel(&aa.sub(a).expect("same space"));
    let real = rel(&conjugate_op(a).sub(a).expect("same space"));
    let adj = a.adjoint();
    let undirected = rel(&adj.sub(a).expect("same space"));
    let loops = rel(&schur_product(a, &LinOp::identity(q)).expect("same space"));
    let eta = q.unit();
    let a_eta = a.apply(&eta);
    let d = q.inner(&eta, &a_eta) / q.inner(&eta, &eta);
    let a_eta_out = adj.apply(&eta);
    let dev = |v: &CVec| q.norm(&(v - &eta * d)) / q.norm(v).max(1.0);
    GraphReport {
        tol,
        scale,
        schur_residual: schur,
        real_residual: real,
        adjoint_residual: undirected,
        loop_residual: loops,
        in_degree_residual: dev(&a_eta),
        out_degree_residual: dev(&a_eta_out),
        degree: [d.re, d.im],
    }
}

/// A quantum adjacency matrix together with the report that certified it.
#[derive(Clone, Debug)]
pub struct QuantumGraph {
    adjacency: LinOp,
    report: GraphReport,
}

impl QuantumGraph {
    /// Fails unless `A • A = A = Ā` within `tol`.
    pub fn new(adjacency: LinOp, tol: f64) -> Result<Self> {
        let report = verify_quantum_graph(&adjacency, tol);
        if !report.is_quantum_graph() {
            return Err(Error::NotQuantumGraph { schur: report.schur_residual, real: report.real_residual });
        }
        Ok(Self { adjacency, report })
    }

    pub fn adjacency(&self) -> &LinOp {
        &self.adjacency
    }
    pub fn space(&self) -> &QSet {
        self.adjacency.space()
    }
    pub fn report(&self) -> &GraphReport {
        &self.report
    }
    pub fn flags(&self) -> GraphFlags {
        self.report.flags()
    }
    pub fn regular_degree(&self) -> Option<C64> {
        self.report.regular_degree()
    }
}

#[derive(Clone, Debug)]
pub struct DegreeOperators {
    /// Left multiplication by `Aη`.
    pub in_degree: LinOp,
    /// Left multiplication by `A^*η`.
    pub out_degree: LinOp,
    pub regular: Option<C64>,
}

pub fn degree_operators(a: &LinOp, tol: f64) -> DegreeOperators {
    let q = a.space();
    let eta = q.unit();
    let din = q.left_mul_matrix(&a.apply(&eta));
    let dout = q.left_mul_matrix(&a.adjoint().apply(&eta));
    let report = verify_quantum_graph(a, tol);
    DegreeOperators {
        in_degree: LinOp { space: q.clone(), mat: din },
        out_degree: LinOp { space: q.clone(), mat: dout },
        regular: report.regular_degree(),
    }
}

#[derive(Clone, Debug)]
pub struct SpectralBlock {
    pub eigenvalue: C64,
    pub projection: LinOp,
    pub rank: usize,
}

/// Spectral decomposition of a normal operator (normal for the weighted inner product).
///
/// Eigenvalues whose real and imaginary parts chain together within
/// `cluster_tol · max(1, ||N||)` share one projection. Blocks are sorted by `(re, im)`.
pub fn spectral_projections(n: &LinOp, cluster_tol: f64, tol: f64) -> Result<Vec<SpectralBlock>> {
    let m = n.orthonormal_matrix();
    let d = m.nrows();
    let scale = m.norm().max(1.0);
    let comm = (&m * m.adjoint() - m.adjoint() * &m).norm() / (scale * scale);
    if comm > tol {
        return Err(Error::NotNormal(comm));
    }
    let herm = (&m + m.adjoint()) * c64(0.5, 0.0);
    let anti = (&m - m.adjoint()) * c64(0.0, -0.5);
    let ctol = cluster_tol * scale;
    let (vals, vecs) = hermitian_eigen(&herm);
    let mut out = Vec::new();
    for range in cluster_sorted(&vals, ctol) {
        let v = vecs.columns(range.start, range.len()).into_owned();
        let re = vals[range.clone()].iter().sum::<f64>() / range.len() as f64;
        let k = v.adjoint() * &anti * &v;
        let (ivals, ivecs) = hermitian_eigen(&k);
        for sub in cluster_sorted(&ivals, ctol) {
            let u = &v * ivecs.columns(sub.start, sub.len());
            let im = ivals[sub.clone()].iter().sum::<f64>() / sub.len() as f64;
            let proj = &u * u.adjoint();
            out.push(SpectralBlock {
                eigenvalue: c64(re, im),
                projection: LinOp::from_orthonormal_matrix(n.space(), &proj)?,
                rank: sub.len(),
            });
        }
    }
    debug_assert_eq!(out.iter().map(|b| b.rank).sum::<usize>(), d);
    out.sort_by(|a, b| a.eigenvalue.re.total_cmp(&b.eigenvalue.re).then(a.eigenvalue.im.total_cmp(&b.eigenvalue.im)));
    Ok(out)
}
