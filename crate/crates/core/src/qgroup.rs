//! Finite quantum group data on a quantum set, group duals, convolution and
//! quantum Cayley graphs.
//!
//! The dual of a finite group `Γ` is realized on the quantum set `⊕_π M_{n_π}` through
//! `λ_g ↦ ⊕_π π(g)`. With `ψ = ⊕ n_π Tr` this gives `ψ(λ_g) = N δ_{g,e}` and
//! `⟨λ_g, λ_h⟩ = N δ_{g,h}`, so the λ-coefficients of `x` are `c_g = ⟨λ_g, x⟩ / N`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingroup::{decompose_regular, FiniteGroup, Irrep};
use crate::linalg::{CMat, CVec, C64, ONE, ZERO};
use crate::qspace::{LinOp, QSet, QuantumGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    DualOfGroup,
    FunctionAlgebra,
    Raw,
}

#[derive(Clone, Debug)]
pub struct QGroupData {
    space: QSet,
    /// `Δ` as a `dim² × dim` matrix; row index `a * dim + b` for `e_a ⊗ e_b`.
    coproduct: CMat,
    /// `ε(e_i)`.
    counit: Vec<C64>,
    antipode: CMat,
    provenance: Provenance,
}

impl QGroupData {
    /// User-supplied tables; run [`verify_hopf`] before relying on them.
    pub fn raw(space: QSet, coproduct: CMat, counit: Vec<C64>, antipode: CMat) -> Result<Self> {
        Self::with_provenance(space, coproduct, counit, antipode, Provenance::Raw)
    }

    fn with_provenance(
        space: QSet,
        coproduct: CMat,
        counit: Vec<C64>,
        antipode: CMat,
        provenance: Provenance,
    ) -> Result<Self> {
        let d = space.dim();
        if coproduct.shape() != (d * d, d) || counit.len() != d || antipode.shape() != (d, d) {
            return Err(Error::Shape(format!(
                "Hopf tables {:?}, {}, {:?} do not fit a quantum set of dim {d}",
                coproduct.shape(),
                counit.len(),
                antipode.shape()
            )));
        }
        Ok(Self { space, coproduct, counit, antipode, provenance })
    }

    pub fn space(&self) -> &QSet {
        &self.space
    }
    pub fn coproduct(&self) -> &CMat {
        &self.coproduct
    }
    pub fn antipode(&self) -> &CMat {
        &self.antipode
    }
    pub fn counit_values(&self) -> &[C64] {
        &self.counit
    }
    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn comultiply(&self, x: &CVec) -> CVec {
        &self.coproduct * x
    }

    pub fn counit(&self, x: &CVec) -> C64 {
        self.counit.iter().zip(x.iter()).map(|(e, v)| e * v).sum()
    }

    pub fn apply_antipode(&self, x: &CVec) -> CVec {
        &self.antipode * x
    }

    /// `Δ^* z`, adjoint for the weighted inner products on `ℓ²(X)` and `ℓ²(X)⊗ℓ²(X)`.
    pub fn comultiply_adjoint(&self, z: &CVec) -> CVec {
        let d = self.space.dim();
        let w = self.space.weights();
        let wz = CVec::from_fn(d * d, |r, _| z[r] * (w[r / d] * w[r % d]));
        let mut out = self.coproduct.adjoint() * wz;
        for i in 0..d {
            out[i] /= w[i];
        }
        out
    }

    /// `x ⋆ y = Δ^*(x ⊗ y)`.
    pub fn convolve(&self, x: &CVec, y: &CVec) -> CVec {
        self.comultiply_adjoint(&self.space.tensor(x, y))
    }

    /// The `ψ`-density of the counit, `ψ(u^* x) = ε(x)`; it is the two-sided unit of `⋆`.
    pub fn convolution_unit(&self) -> CVec {
        let w = self.space.weights();
        CVec::from_fn(self.space.dim(), |i, _| self.counit[i].conj() / w[i])
    }

    /// `x ↦ P ⋆ x`.
    pub fn cayley_operator(&self, p: &CVec) -> LinOp {
        let d = self.space.dim();
        let mut m = CMat::zeros(d, d);
        for j in 0..d {
            m.set_column(j, &self.convolve(p, &self.space.basis_vector(j)));
        }
        LinOp::new(self.space.clone(), m).expect("square")
    }

    /// Algebra residuals `(||P P − P||, ||P^* − P||)` relative to `max(1, ||P||)`.
    pub fn projection_residuals(&self, p: &CVec) -> (f64, f64) {
        let q = &self.space;
        let scale = q.norm(p).max(1.0);
        let idem = q.norm(&(q.mul(p, p) - p)) / scale;
        let sa = q.norm(&(q.star(p) - p)) / scale;
        (idem, sa)
    }
}

pub fn function_algebra(group: &FiniteGroup) -> QGroupData {
    let n = group.order();
    let space = QSet::classical(n);
    let mut coproduct = CMat::zeros(n * n, n);
    for a in 0..n {
        for b in 0..n {
            coproduct[(a * n + b, group.mul(a, b))] = ONE;
        }
    }
    let counit = (0..n).map(|g| if g == 0 { ONE } else { ZERO }).collect();
    let mut antipode = CMat::zeros(n, n);
    for g in 0..n {
        antipode[(group.inv(g), g)] = ONE;
    }
    QGroupData::with_provenance(space, coproduct, counit, antipode, Provenance::FunctionAlgebra).expect("shapes")
}

/// Dual of a classical group together with its Fourier transform.
#[derive(Clone, Debug)]
pub struct GroupDual {
    group: FiniteGroup,
    irreps: Vec<Irrep>,
    qgroup: QGroupData,
    /// Column `g` is `λ_g` in the block basis.
    fourier: CMat,
}

impl GroupDual {
    /// `irreps` must be a complete list of inequivalent unitary irreducibles.
    pub fn new(group: FiniteGroup, irreps: Vec<Irrep>) -> Result<Self> {
        let n = group.order();
        let total: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
        if total != n {
            return Err(Error::Input(format!("irreducible dimensions square-sum to {total}, group order is {n}")));
        }
        for r in &irreps {
            r.verify(&group, 1e-8)?;
        }
        let blocks: Vec<usize> = irreps.iter().map(|r| r.dim()).collect();
        let space = QSet::new(&blocks)?;
        let d = space.dim();
        let mut fourier = CMat::zeros(d, n);
        for g in 0..n {
            for (k, r) in irreps.iter().enumerate() {
                for i in 0..r.dim() {
                    for j in 0..r.dim() {
                        fourier[(space.index(k, i, j), g)] = r.coefficient(g, i, j);
                    }
                }
            }
        }
        let w = space.weights();
        // coeff[g][a] = c_g(e_a) = conj(λ_g[a]) w_a / N
        let coeff = CMat::from_fn(n, d, |g, a| fourier[(a, g)].conj() * (w[a] / n as f64));
        let mut coproduct = CMat::zeros(d * d, d);
        let mut counit = vec![ZERO; d];
        let mut antipode = CMat::zeros(d, d);
        for a in 0..d {
            for g in 0..n {
                let c = coeff[(g, a)];
                if c == ZERO {
                    continue;
                }
                counit[a] += c;
                let lam = fourier.column(g);
                let lam_inv = fourier.column(group.inv(g));
                for x in 0..d {
                    antipode[(x, a)] += c * lam_inv[x];
                    let cx = c * lam[x];
                    if cx != ZERO {
                        for y in 0..d {
                            coproduct[(x * d + y, a)] += cx * lam[y];
                        }
                    }
                }
            }
        }
        let qgroup = QGroupData::with_provenance(space, coproduct, counit, antipode, Provenance::DualOfGroup)?;
        Ok(Self { group, irreps, qgroup, fourier })
    }

    /// Dual with numerically computed irreducibles.
    pub fn from_group(group: FiniteGroup, seed: u64, tol: f64) -> Result<Self> {
        let irreps = decompose_regular(&group, seed, tol)?;
        Self::new(group, irreps)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }
    pub fn qgroup(&self) -> &QGroupData {
        &self.qgroup
    }
    pub fn space(&self) -> &QSet {
        self.qgroup.space()
    }
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn lambda(&self, g: usize) -> CVec {
        self.fourier.column(g).into_owned()
    }

    pub fn trivial_index(&self) -> usize {
        self.irreps.iter().position(|r| r.is_trivial(1e-7)).expect("complete list contains the trivial irrep")
    }

    /// Block-basis vector of `Σ_g c_g λ_g`.
    pub fn to_block(&self, coeffs: &CVec) -> CVec {
        &self.fourier * coeffs
    }

    /// λ-coefficients `c_g = ⟨λ_g, x⟩ / N`.
    pub fn to_lambda(&self, x: &CVec) -> CVec {
        let n = self.order();
        let q = self.space();
        CVec::from_fn(n, |g, _| q.inner(&self.lambda(g), x) / n as f64)
    }

    /// Block-basis element equal to `m` in block `k` and zero elsewhere.
    pub fn embed_block(&self, k: usize, m: &CMat) -> CVec {
        let q = self.space();
        let mut v = CVec::zeros(q.dim());
        for i in 0..q.blocks()[k] {
            for j in 0..q.blocks()[k] {
                v[q.index(k, i, j)] = m[(i, j)];
            }
        }
        v
    }
}

/// The Fourier symbol `T` of `P = Σ_g T(g) λ_g`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Multiplier {
    pub values: Vec<C64>,
}

impl Multiplier {
    pub fn new(values: Vec<C64>) -> Self {
        Self { values }
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn scaled(&self, s: C64) -> Self {
        Self { values: self.values.iter().map(|v| v * s).collect() }
    }
}

/// Symbol of a block-basis element `p`.
pub fn fourier_multiplier(dual: &GroupDual, p: &CVec) -> Multiplier {
    Multiplier::new(dual.to_lambda(p).iter().copied().collect())
}

/// Largest `||A λ_g − N T(g) λ_g||` over `g`, relative to `max(1, N max|T|)`.
pub fn multiplier_consistency(dual: &GroupDual, p: &CVec) -> f64 {
    let a = dual.qgroup().cayley_operator(p);
    let t = fourier_multiplier(dual, p);
    let n = dual.order() as f64;
    let scale = t.values.iter().fold(1.0f64, |m, v| m.max(n * v.norm()));
    let q = dual.space();
    (0..dual.order())
        .map(|g| {
            let lam = dual.lambda(g);
            q.norm(&(a.apply(&lam) - &lam * (t.values[g] * n))) / (scale * q.norm(&lam))
        })
        .fold(0.0, f64::max)
}

/// λ-coefficients of the element whose block `k` is `|ξ⟩⟨η|` and every other block zero:
/// `c_g = (n_π / N) ⟨π(g) η, ξ⟩`.
pub fn inv_fourier_rank_one(dual: &GroupDual, k: usize, xi: &CVec, eta: &CVec) -> Result<CVec> {
    let r = &dual.irreps()[k];
    if xi.len() != r.dim() || eta.len() != r.dim() {
        return Err(Error::Shape(format!("vectors must have length {}", r.dim())));
    }
    if xi.norm() == 0.0 || eta.norm() == 0.0 {
        return Err(Error::Input("rank-one input needs nonzero vectors".into()));
    }
    let scale = r.dim() as f64 / dual.order() as f64;
    Ok(CVec::from_fn(dual.order(), |g, _| {
        let pe = r.matrix(g) * eta;
        pe.dotc(xi) * scale
    }))
}

/// λ-coefficients of `Σ_{π ∈ S} (n_π/N) Σ_g conj(χ_π(g)) λ_g`.
pub fn central_projection(dual: &GroupDual, subset: &[usize]) -> Result<CVec> {
    let n = dual.order();
    let mut c = CVec::zeros(n);
    for &k in subset {
        let r = dual.irreps().get(k).ok_or_else(|| Error::Input(format!("no irrep with index {k}")))?;
        let s = r.dim() as f64 / n as f64;
        for g in 0..n {
            c[g] += r.character()[g].conj() * s;
        }
    }
    Ok(c)
}

/// Facts about a Cayley graph beyond the quantum adjacency axioms.
#[derive(Clone, Debug, Serialize)]
pub struct CayleyInfo {
    pub idempotent_residual: f64,
    pub selfadjoint_residual: f64,
    pub counit: [f64; 2],
    /// `|ε(P)| ≤ tol`; compared against the measured loop flag.
    pub counit_loopless: bool,
    pub antipode_residual: f64,
    /// `S(P) = P` within tolerance.
    pub antipode_symmetric: bool,
    /// Either `S(P) = P` disagrees with `A = A^*`, or `ε(P) = 0` disagrees with `A • I = 0`.
    pub disagreement: bool,
}

/// Quantum Cayley graph `A x = P ⋆ x`; `p` must be a projection of the algebra.
pub fn cayley_graph(q: &QGroupData, p: &CVec, tol: f64) -> Result<(QuantumGraph, CayleyInfo)> {
    let (idem, sa) = q.projection_residuals(p);
    if idem > tol.max(1e-8) || sa > tol.max(1e-8) {
        return Err(Error::NotProjection { idempotent: idem, selfadjoint: sa });
    }
    let graph = QuantumGraph::new(q.cayley_operator(p), tol)?;
    let eps = q.counit(p);
    let scale = q.space().norm(p).max(1.0);
    let antipode_residual = q.space().norm(&(q.apply_antipode(p) - p)) / scale;
    let counit_loopless = eps.norm() <= tol;
    let antipode_symmetric = antipode_residual <= tol;
    let flags = graph.flags();
    let info = CayleyInfo {
        idempotent_residual: idem,
        selfadjoint_residual: sa,
        counit: [eps.re, eps.im],
        counit_loopless,
        antipode_residual,
        antipode_symmetric,
        disagreement: counit_loopless != flags.loopless || antipode_symmetric != flags.undirected,
    };
    Ok((graph, info))
}

/// Residual of every Hopf axiom (max-norm of the defect, over basis elements).
#[derive(Clone, Debug, Serialize)]
pub struct HopfReport {
    pub tol: f64,
    pub multiplicative: f64,
    pub unital: f64,
    pub star: f64,
    pub coassociative: f64,
    pub counit_left: f64,
    pub counit_right: f64,
    pub counit_multiplicative: f64,
    pub antipode_left: f64,
    pub antipode_right: f64,
    pub haar_left: f64,
    pub haar_right: f64,
}

impl HopfReport {
    pub fn residuals(&self) -> [(&'static str, f64); 11] {
        [
            ("multiplicative", self.multiplicative),
            ("unital", self.unital),
            ("star", self.star),
            ("coassociative", self.coassociative),
            ("counit_left", self.counit_left),
            ("counit_right", self.counit_right),
            ("counit_multiplicative", self.counit_multiplicative),
            ("antipode_left", self.antipode_left),
            ("antipode_right", self.antipode_right),
            ("haar_left", self.haar_left),
            ("haar_right", self.haar_right),
        ]
    }
    pub fn passed(&self) -> bool {
        self.residuals().iter().all(|(_, r)| *r <= self.tol)
    }
    pub fn failures(&self) -> Vec<&'static str> {
        self.residuals().iter().filter(|(_, r)| *r > self.tol).map(|(n, _)| *n).collect()
    }
}

fn sup(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn verify_hopf(q: &QGroupData, tol: f64) -> HopfReport {
    let s = q.space();
    let d = s.dim();
    let delta: Vec<CVec> = (0..d).map(|a| q.coproduct.column(a).into_owned()).collect();
    let eta = s.unit();

    let mut multiplicative: f64 = 0.0;
    let mut counit_mult: f64 = 0.0;
    for a in 0..d {
        for c in 0..d {
            let prod = s.mul(&s.basis_vector(a), &s.basis_vector(c));
            let lhs = q.comultiply(&prod);
            let rhs = s.tensor_mul(&delta[a], &delta[c]);
            multiplicative = multiplicative.max(sup(&(lhs - rhs)));
            counit_mult = counit_mult.max((q.counit(&prod) - q.counit[a] * q.counit[c]).norm());
        }
    }
    let unital = sup(&(q.comultiply(&eta) - s.tensor(&eta, &eta)));
    let star = (0..d)
        .map(|a| sup(&(q.comultiply(&s.star(&s.basis_vector(a))) - s.tensor_star(&delta[a]))))
        .fold(0.0, f64::max);

    let mut coassoc: f64 = 0.0;
    let (mut cl, mut cr, mut al, mut ar, mut hl, mut hr) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let s_cols: Vec<CVec> = (0..d).map(|a| q.antipode.column(a).into_owned()).collect();
    for x in 0..d {
        let t = &delta[x];
        let ex = s.basis_vector(x);
        let mut left = CVec::zeros(d * d * d);
        let mut right = CVec::zeros(d * d * d);
        let mut eps_left = CVec::zeros(d);
        let mut eps_right = CVec::zeros(d);
        let mut anti_left = CVec::zeros(d);
        let mut anti_right = CVec::zeros(d);
        for a in 0..d {
            for b in 0..d {
                let tab = t[a * d + b];
                if tab == ZERO {
                    continue;
                }
                for r in 0..d * d {
                    let v = delta[a][r];
                    if v != ZERO {
                        left[r * d + b] += tab * v;
                    }
                    let u = delta[b][r];
                    if u != ZERO {
                        right[a * d * d + r] += tab * u;
                    }
                }
                eps_left[b] += tab * q.counit[a];
                eps_right[a] += tab * q.counit[b];
                anti_left += s.mul(&s_cols[a], &s.basis_vector(b)) * tab;
                anti_right += s.mul(&s.basis_vector(a), &s_cols[b]) * tab;
            }
        }
        coassoc = coassoc.max(sup(&(left - right)));
        cl = cl.max(sup(&(eps_left - &ex)));
        cr = cr.max(sup(&(eps_right - &ex)));
        let target = &eta * q.counit[x];
        al = al.max(sup(&(anti_left - &target)));
        ar = ar.max(sup(&(anti_right - &target)));
        let psi_x = s.psi(&ex);
        hl = hl.max(sup(&(s.psi_left(t) - &eta * psi_x)));
        hr = hr.max(sup(&(s.psi_right(t) - &eta * psi_x)));
    }
    HopfReport {
        tol,
        multiplicative,
        unital,
        star,
        coassociative: coassoc,
        counit_left: cl,
        counit_right: cr,
        counit_multiplicative: counit_mult,
        antipode_left: al,
        antipode_right: ar,
        haar_left: hl,
        haar_right: hr,
    }
}
