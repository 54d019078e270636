//! Dense complex linear algebra helpers shared by every module.

use std::ops::Range;

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for trial `index` of a run seeded with `seed`.
pub fn derived_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

/// Standard complex Gaussian: real and imaginary parts are independent N(0, 1/2).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    CVec::from_fn(n, |_, _| gaussian(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(r: usize, c: usize, rng: &mut R) -> CMat {
    CMat::from_fn(r, c, |_, _| gaussian(rng))
}

/// Uniformly distributed unit vector in C^n.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVec {
    loop {
        let v = gaussian_vector(n, rng);
        let norm = v.norm();
        if norm > 1e-12 {
            return v / c64(norm, 0.0);
        }
    }
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(n, n, rng);
    (&g + g.adjoint()) * c64(0.5, 0.0)
}

/// Haar-distributed unitary: QR of a Gaussian matrix with the phases of R's diagonal removed.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let qr = gaussian_matrix(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let sym = (h + h.adjoint()) * c64(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Splits ascending `values` into maximal runs whose consecutive gaps are at most `tol`.
pub fn cluster_sorted(values: &[f64], tol: f64) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            if k > start {
                out.push(start..k);
            }
            start = k;
        }
    }
    out
}

fn padded_svd(m: &CMat) -> SVD<C64, nalgebra::Dyn, nalgebra::Dyn> {
    let (r, c) = m.shape();
    if r >= c {
        SVD::new(m.clone(), true, true)
    } else {
        let mut p = CMat::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        SVD::new(p, true, true)
    }
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with threshold `rel_tol * max(1, sigma_max)`.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    let cut = rel_tol * top.max(1.0);
    s.iter().filter(|&&x| x > cut).count()
}

/// Numerical rank with threshold `rel_tol * sigma_max` (scale-free).
pub fn relative_rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&top) = s.first() else { return 0 };
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Orthonormal basis (as columns) of the null space; threshold `rel_tol * max(1, sigma_max)`.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let c = m.ncols();
    if m.nrows() == 0 || c == 0 {
        return CMat::identity(c, c);
    }
    let svd = padded_svd(m);
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rel_tol * top.max(1.0);
    let idx: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] <= cut).collect();
    CMat::from_fn(c, idx.len(), |i, j| v_t[(idx[j], i)].conj())
}

/// Orthonormal basis (as columns) of the column span; threshold `rel_tol * sigma_max`.
pub fn column_space(m: &CMat, rel_tol: f64) -> CMat {
    let r = m.nrows();
    if r == 0 || m.ncols() == 0 {
        return CMat::zeros(r, 0);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.as_ref().expect("u requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return CMat::zeros(r, 0);
    }
    let idx: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > rel_tol * top).collect();
    CMat::from_fn(r, idx.len(), |i, j| u[(i, idx[j])])
}

/// Frobenius distance to the nearest multiple of the identity, relative to max(1, ||m||).
pub fn scalar_residual(m: &CMat) -> (C64, f64) {
    let n = m.nrows();
    if n == 0 {
        return (ZERO, 0.0);
    }
    let lambda = m.trace() / c64(n as f64, 0.0);
    let dev = (m - CMat::identity(n, n) * lambda).norm();
    (lambda, dev / m.norm().max(1.0))
}

pub fn max_abs(v: impl IntoIterator<Item = C64>) -> f64 {
    v.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}
