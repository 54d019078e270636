//! Two Hilbert bimodules attached to a quantum Cayley graph and the isometry between them.
//!
//! Edge side: `C(X) ⊗ C(X)` with `⟨a⊗b, c⊗d⟩ = b^* A(a^* c) d`.
//! Group side: `K = P_S C(G) ⊗ C(G)` with `⟨ξ|η⟩ = (ψ ⊗ id)(ξ^* η)`.
//! `Φ(a⊗b) = Δ(a)(1⊗b)(P_S⊗1)` carries the first onto the second.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{derived_rng, gaussian_vector, hermitian_eigen, null_space, rank, CMat, CVec, C64};
use crate::qgroup::QGroupData;
use crate::qspace::{LinOp, QSet};

/// Finite sum `Σ a_i ⊗ b_i`.
pub type SimpleTensors = Vec<(CVec, CVec)>;

/// `b^* A(a^* c) d`.
pub fn edge_inner_product(a_op: &LinOp, a: &CVec, b: &CVec, c: &CVec, d: &CVec) -> CVec {
    let s = a_op.space();
    let mid = a_op.apply(&s.mul(&s.star(a), c));
    s.mul(&s.mul(&s.star(b), &mid), d)
}

pub fn edge_inner(a_op: &LinOp, xi: &[(CVec, CVec)], eta: &[(CVec, CVec)]) -> CVec {
    let mut out = CVec::zeros(a_op.space().dim());
    for (a, b) in xi {
        for (c, d) in eta {
            out += edge_inner_product(a_op, a, b, c, d);
        }
    }
    out
}

/// The same sesquilinear form expanded over matrix units; independent of `edge_inner_product`'s
/// factorization.
pub fn edge_inner_expanded(a_op: &LinOp, a: &CVec, b: &CVec, c: &CVec, d: &CVec) -> CVec {
    let s = a_op.space();
    let n = s.dim();
    let basis: Vec<CVec> = (0..n).map(|k| s.basis_vector(k)).collect();
    let mut out = CVec::zeros(n);
    for k in 0..n {
        if a[k].norm() == 0.0 {
            continue;
        }
        for l in 0..n {
            let w = a[k].conj() * c[l];
            if w.norm() == 0.0 {
                continue;
            }
            let mid = a_op.apply(&s.mul(&s.star(&basis[k]), &basis[l]));
            for m in 0..n {
                if b[m].norm() == 0.0 {
                    continue;
                }
                let left = s.mul(&s.star(&basis[m]), &mid) * (w * b[m].conj());
                for (p, dp) in d.iter().enumerate() {
                    if dp.norm() != 0.0 {
                        out += s.mul(&left, &basis[p]) * *dp;
                    }
                }
            }
        }
    }
    out
}

/// `(ψ ⊗ id)(ξ^* η)` for `ξ, η ∈ C(G) ⊗ C(G)`.
pub fn vergnioux_inner_product(s: &QSet, xi: &CVec, eta: &CVec) -> CVec {
    s.psi_left(&s.tensor_mul(&s.tensor_star(xi), eta))
}

/// `Δ(a)(1⊗b)(P⊗1)`.
pub fn phi(q: &QGroupData, p: &CVec, a: &CVec, b: &CVec) -> CVec {
    let s = q.space();
    let one = s.unit();
    let left = s.tensor_mul(&q.comultiply(a), &s.tensor(&one, b));
    s.tensor_mul(&left, &s.tensor(p, &one))
}

pub fn phi_sum(q: &QGroupData, p: &CVec, xi: &[(CVec, CVec)]) -> CVec {
    let d = q.space().dim();
    xi.iter().fold(CVec::zeros(d * d), |acc, (a, b)| acc + phi(q, p, a, b))
}

/// `Σ_{k∈S} 1_k`, the central projection onto the blocks in `subset`.
pub fn block_projection(s: &QSet, subset: &[usize]) -> Result<CVec> {
    let mut p = CVec::zeros(s.dim());
    for &k in subset {
        let n = *s.blocks().get(k).ok_or_else(|| Error::Input(format!("block {k} out of range")))?;
        for i in 0..n {
            p[s.index(k, i, i)] = C64::new(1.0, 0.0);
        }
    }
    Ok(p)
}

/// Smallest eigenvalue over the blocks of `x` after symmetrizing, and the asymmetry.
pub fn positivity(s: &QSet, x: &CVec) -> (f64, f64) {
    let mut min_eig = f64::INFINITY;
    let mut asym: f64 = 0.0;
    for k in 0..s.blocks().len() {
        let m = s.block(x, k);
        asym = asym.max((&m - m.adjoint()).norm());
        let (vals, _) = hermitian_eigen(&m);
        min_eig = min_eig.min(vals[0]);
    }
    (min_eig, asym)
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    pub subset: Vec<usize>,
    pub samples: usize,
    pub tol: f64,
    /// `max ‖⟨Φξ|Φξ⟩ − ⟨ξ,ξ⟩_A‖` in the `ψ`-norm.
    pub max_deviation: f64,
    pub bimodule_residual: f64,
    /// Smallest block eigenvalue of `⟨Φξ|Φξ⟩` over the samples.
    pub min_eigenvalue: f64,
    pub phi_rank: usize,
    pub k_dim: usize,
    /// `S(P) = P`.
    pub symmetric: bool,
    /// The degree eigenspace of `A + A^*` is one-dimensional (the graph is connected).
    pub generating: bool,
    pub hypotheses_met: bool,
    pub identity_verified: bool,
}

fn random_tensors(d: usize, terms: usize, seed: u64, index: u64) -> SimpleTensors {
    let mut rng = derived_rng(seed, index);
    (0..terms)
        .map(|_| {
            let a = gaussian_vector(d, &mut rng);
            let b = gaussian_vector(d, &mut rng);
            (a.normalize(), b.normalize())
        })
        .collect()
}

const TERMS: usize = 3;

pub fn isometry_check(q: &QGroupData, subset: &[usize], samples: usize, seed: u64, tol: f64) -> Result<IsometryReport> {
    let s = q.space();
    let d = s.dim();
    let p = block_projection(s, subset)?;
    let a_op = q.cayley_operator(&p);
    let per_sample: Vec<(f64, f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let xi = random_tensors(d, TERMS, seed, k as u64);
            let lhs = {
                let z = phi_sum(q, &p, &xi);
                vergnioux_inner_product(s, &z, &z)
            };
            let rhs = edge_inner(&a_op, &xi, &xi);
            let dev = s.norm(&(&lhs - &rhs));
            let (min_eig, _) = positivity(s, &lhs);
            // f·ξ·h on both sides
            let mut rng = derived_rng(seed ^ 0x9e37_79b9, k as u64);
            let f = gaussian_vector(d, &mut rng);
            let h = gaussian_vector(d, &mut rng);
            let acted: SimpleTensors = xi.iter().map(|(a, b)| (s.mul(&f, a), s.mul(b, &h))).collect();
            let one = s.unit();
            let z = phi_sum(q, &p, &xi);
            let right = s.tensor_mul(&s.tensor_mul(&q.comultiply(&f), &z), &s.tensor(&one, &h));
            let bimod = (phi_sum(q, &p, &acted) - right).norm();
            (dev, bimod, min_eig)
        })
        .collect();
    let max_deviation = per_sample.iter().map(|t| t.0).fold(0.0, f64::max);
    let bimodule_residual = per_sample.iter().map(|t| t.1).fold(0.0, f64::max);
    let min_eigenvalue = per_sample.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);

    let mut span = CMat::zeros(d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            span.set_column(k * d + l, &phi(q, &p, &s.basis_vector(k), &s.basis_vector(l)));
        }
    }
    let phi_rank = rank(&span, 1e-9);
    let p_rank: usize = subset.iter().map(|&k| s.blocks()[k] * s.blocks()[k]).sum();
    let k_dim = p_rank * d;

    let scale = s.norm(&p).max(1.0);
    let symmetric = s.norm(&(q.apply_antipode(&p) - &p)) / scale <= tol.max(1e-9);
    let generating = {
        let m = a_op.orthonormal_matrix();
        let sym = &m + m.adjoint();
        let eta = s.unit();
        let deg = s.inner(&eta, &a_op.apply(&eta)) / s.inner(&eta, &eta);
        let shifted = sym - CMat::identity(d, d) * (deg * 2.0);
        null_space(&shifted, 1e-8).ncols() == 1
    };
    let identity_verified = max_deviation <= tol && bimodule_residual <= tol.max(1e-9) && phi_rank == k_dim;
    Ok(IsometryReport {
        subset: subset.to_vec(),
        samples,
        tol,
        max_deviation,
        bimodule_residual,
        min_eigenvalue,
        phi_rank,
        k_dim,
        symmetric,
        generating,
        hypotheses_met: symmetric && generating,
        identity_verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::FiniteGroup;
    use crate::linalg::{c64, rng_from_seed};
    use crate::qgroup::{central_projection, GroupDual};

    fn s3() -> GroupDual {
        GroupDual::from_group(FiniteGroup::symmetric(3), 0, 1e-9).unwrap()
    }

    #[test]
    fn block_projection_matches_central_projection() {
        let d = s3();
        for subset in [vec![0], vec![1, 2], vec![0, 1, 2]] {
            let via_lambda = d.to_block(&central_projection(&d, &subset).unwrap());
            let direct = block_projection(d.space(), &subset).unwrap();
            assert!((via_lambda - direct).norm() < 1e-10);
        }
    }

    #[test]
    fn edge_inner_against_expansion() {
        let d = s3();
        let s = d.space();
        let p = block_projection(s, &[0]).unwrap();
        let a = d.qgroup().cayley_operator(&p);
        let mut rng = rng_from_seed(5);
        let v: Vec<CVec> = (0..4).map(|_| gaussian_vector(6, &mut rng)).collect();
        let fast = edge_inner_product(&a, &v[0], &v[1], &v[2], &v[3]);
        let slow = edge_inner_expanded(&a, &v[0], &v[1], &v[2], &v[3]);
        assert!((fast - slow).norm() < 1e-10);
        let one = s.unit();
        let reduced = s.mul(&s.mul(&s.star(&v[1]), &a.apply(&one)), &v[3]);
        assert!((edge_inner_product(&a, &one, &v[1], &one, &v[3]) - reduced).norm() < 1e-10);
    }

    #[test]
    fn zero_graph_gives_zero() {
        let d = s3();
        let z = LinOp::zero(d.space());
        let mut rng = rng_from_seed(1);
        let v = gaussian_vector(6, &mut rng);
        assert_eq!(edge_inner_product(&z, &v, &v, &v, &v).norm(), 0.0);
    }

    #[test]
    fn unit_tensor_inner_products() {
        let d = s3();
        let s = d.space();
        let q = d.qgroup();
        let one = s.unit();
        for subset in [vec![0], vec![1], vec![0, 2]] {
            let p = block_projection(s, &subset).unwrap();
            let z = phi(q, &p, &one, &one);
            assert!((&z - s.tensor(&p, &one)).norm() < 1e-10);
            let k = vergnioux_inner_product(s, &z, &z);
            let e = edge_inner_product(&q.cayley_operator(&p), &one, &one, &one, &one);
            let want = &one * s.psi(&p);
            assert!((&k - &want).norm() < 1e-10 && (&e - &want).norm() < 1e-10);
        }
    }

    #[test]
    fn phi_of_unit_first_leg() {
        let d = s3();
        let s = d.space();
        let p = block_projection(s, &[0, 1]).unwrap();
        let mut rng = rng_from_seed(2);
        let b = gaussian_vector(6, &mut rng);
        let z = phi(d.qgroup(), &p, &s.unit(), &b);
        assert!((z - s.tensor(&p, &b)).norm() < 1e-10);
    }

    #[test]
    fn isometry_on_every_s3_subset() {
        let d = s3();
        for mask in 0..8usize {
            let subset: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
            let r = isometry_check(d.qgroup(), &subset, 10, 7, 1e-9).unwrap();
            assert!(r.identity_verified, "{r:?}");
            assert!(r.min_eigenvalue > -1e-9);
        }
        let full = isometry_check(d.qgroup(), &[0, 1, 2], 5, 7, 1e-9).unwrap();
        assert_eq!(full.phi_rank, 36);
        assert!(full.symmetric);
    }

    #[test]
    fn positivity_detects_negative_blocks() {
        let s = QSet::new(&[1]).unwrap();
        let (m, _) = positivity(&s, &CVec::from_element(1, c64(-1.0, 0.0)));
        assert_eq!(m, -1.0);
    }
}
