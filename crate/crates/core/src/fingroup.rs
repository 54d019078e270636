//! Finite groups given by Cayley tables, and their unitary irreducible representations.

use std::collections::{HashMap, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c64, cluster_sorted, hermitian_eigen, null_space, random_hermitian, rng_from_seed, CMat, C64, ONE, ZERO,
};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;
const ASSOCIATIVITY_CHECK_MAX: usize = 200;
const SPLIT_ATTEMPTS: usize = 12;

/// `p[i]` is the image of `i`; products compose right to left: `(p q)(i) = p[q[i]]`.
pub type Perm = Vec<usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
    permutations: Option<Vec<Perm>>,
}

impl FiniteGroup {
    /// Validates the table: square, entries in range, identity at 0, Latin square, associative (N ≤ 200).
    pub fn from_table(name: &str, mul: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::Input("group table is empty".into()));
        }
        for (r, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!("row {r} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Input(format!("row {r} contains out-of-range element {bad}")));
            }
        }
        for r in 0..n {
            let mut seen = vec![usize::MAX; n];
            for c in 0..n {
                let x = mul[r][c];
                if seen[x] != usize::MAX {
                    return Err(Error::LatinSquare(format!("row {r} repeats {x} at columns {} and {c}", seen[x])));
                }
                seen[x] = c;
            }
        }
        for c in 0..n {
            let mut seen = vec![usize::MAX; n];
            for r in 0..n {
                let x = mul[r][c];
                if seen[x] != usize::MAX {
                    return Err(Error::LatinSquare(format!("column {c} repeats {x} at rows {} and {r}", seen[x])));
                }
                seen[x] = r;
            }
        }
        for a in 0..n {
            if mul[0][a] != a || mul[a][0] != a {
                return Err(Error::Input(format!("element 0 is not the identity (fails at element {a})")));
            }
        }
        if n <= ASSOCIATIVITY_CHECK_MAX {
            for a in 0..n {
                for b in 0..n {
                    let ab = mul[a][b];
                    for c in 0..n {
                        let left = mul[ab][c];
                        let right = mul[a][mul[b][c]];
                        if left != right {
                            return Err(Error::Associativity { a, b, c, left, right });
                        }
                    }
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::Input(format!("{} labels for {n} elements", l.len())));
            }
        }
        let table: Vec<usize> = mul.iter().flatten().copied().collect();
        let inverse = (0..n).map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("Latin square")).collect();
        Ok(Self { name: name.to_string(), order: n, table, inverse, labels, permutations: None })
    }

    /// Group of the given permutations; the list must be closed and contain the identity first.
    pub fn from_permutations(name: &str, perms: Vec<Perm>) -> Result<Self> {
        let Some(first) = perms.first() else {
            return Err(Error::Input("no permutations".into()));
        };
        let degree = first.len();
        if first.iter().enumerate().any(|(i, &x)| i != x) {
            return Err(Error::Input("first permutation must be the identity".into()));
        }
        let index: HashMap<&Perm, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        if index.len() != perms.len() {
            return Err(Error::Input("repeated permutation".into()));
        }
        let mut mul = vec![vec![0; perms.len()]; perms.len()];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let pq = compose(p, q);
                mul[a][b] = *index.get(&pq).ok_or_else(|| {
                    Error::Input(format!("permutation list not closed at ({a}, {b}), degree {degree}"))
                })?;
            }
        }
        let labels = perms.iter().map(|p| cycle_label(p)).collect();
        let mut g = Self::from_table(name, &mul, Some(labels))?;
        g.permutations = Some(perms);
        Ok(g)
    }

    /// Closure of the generators under composition (breadth first from the identity).
    pub fn from_generators(name: &str, degree: usize, gens: &[Perm], cap: usize) -> Result<Self> {
        for g in gens {
            if !is_permutation(g, degree) {
                return Err(Error::Input(format!("{g:?} is not a permutation of 0..{degree}")));
            }
        }
        let id: Perm = (0..degree).collect();
        let mut seen: HashMap<Perm, usize> = HashMap::from([(id.clone(), 0)]);
        let mut list = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = compose(g, &p);
                if !seen.contains_key(&q) {
                    if list.len() >= cap {
                        return Err(Error::Cap(format!("closure exceeds {cap} elements")));
                    }
                    seen.insert(q.clone(), list.len());
                    list.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Self::from_permutations(name, list)
    }

    pub fn cyclic(n: usize) -> Self {
        let n = n.max(1);
        let mul: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g^{k}") }).collect();
        Self::from_table(&format!("Z{n}"), &mul, Some(labels)).expect("cyclic table is valid")
    }

    /// All permutations of `0..n` in lexicographic order of their image lists.
    pub fn symmetric(n: usize) -> Self {
        Self::from_permutations(&format!("S{n}"), lex_permutations(n)).expect("closed")
    }

    pub fn alternating(n: usize) -> Self {
        let perms = lex_permutations(n).into_iter().filter(|p| parity(p) == 0).collect();
        Self::from_permutations(&format!("A{n}"), perms).expect("closed")
    }

    /// Symmetries of the regular n-gon, order 2n (n ≥ 3).
    pub fn dihedral(n: usize) -> Self {
        let n = n.max(3);
        let rot: Perm = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Perm = (0..n).map(|i| (n - i) % n).collect();
        Self::from_generators(&format!("D{n}"), n, &[rot, refl], DEFAULT_CLOSURE_CAP).expect("small")
    }

    /// Quaternion group on {1, -1, i, -i, j, -j, k, -k}.
    pub fn quaternion() -> Self {
        // unit index u in {0:1, 1:i, 2:j, 3:k}; element index = 2u + sign bit
        let unit_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let mul: Vec<Vec<usize>> = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, neg) = unit_mul(x / 2, y / 2);
                        let sign = (x % 2) ^ (y % 2) ^ usize::from(neg);
                        2 * u + sign
                    })
                    .collect()
            })
            .collect();
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        Self::from_table("Q8", &mul, Some(names.iter().map(|s| s.to_string()).collect())).expect("valid")
    }

    /// `Zn`, `Sn`, `An`, `Dn` or `Q8`.
    pub fn by_name(name: &str) -> Result<Self> {
        let bad = || Error::Input(format!("unknown group name {name:?}"));
        if name == "Q8" {
            return Ok(Self::quaternion());
        }
        let (kind, rest) = name.split_at(name.len().min(1));
        let n: usize = rest.parse().map_err(|_| bad())?;
        match kind {
            "Z" | "C" if n >= 1 => Ok(Self::cyclic(n)),
            "S" if (1..=7).contains(&n) => Ok(Self::symmetric(n)),
            "A" if (1..=7).contains(&n) => Ok(Self::alternating(n)),
            "D" if n >= 3 => Ok(Self::dihedral(n)),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn order(&self) -> usize {
        self.order
    }
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
    pub fn label(&self, g: usize) -> String {
        self.labels.as_ref().map_or_else(|| g.to_string(), |l| l[g].clone())
    }
    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }
    pub fn permutations(&self) -> Option<&[Perm]> {
        self.permutations.as_deref()
    }
    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order).filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.order).map(|h| self.conjugate(h, g)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &x in &cls {
                class_of[x] = classes.len();
            }
            classes.push(cls);
        }
        classes
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut list = vec![0];
        let mut k = 0;
        while k < list.len() {
            let x = list[k];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    list.push(y);
                }
            }
            k += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                comms.push(self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b)));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.generated_subgroup(&comms)
    }

    pub fn structure_report(&self) -> StructureReport {
        let center = self.center();
        let comm = self.commutator_subgroup();
        let n = self.order;
        StructureReport {
            name: self.name.clone(),
            order: n,
            is_abelian: center.len() == n,
            center,
            conjugacy_classes: self.conjugacy_classes(),
            commutator_subgroup_order: comm.len(),
            abelianization_order: n / comm.len(),
            is_perfect: comm.len() == n && n > 1,
            commutator_subgroup: comm,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub name: String,
    pub order: usize,
    pub center: Vec<usize>,
    pub conjugacy_classes: Vec<Vec<usize>>,
    pub commutator_subgroup: Vec<usize>,
    pub commutator_subgroup_order: usize,
    pub abelianization_order: usize,
    pub is_perfect: bool,
    pub is_abelian: bool,
}

pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&i| p[i]).collect()
}

fn is_permutation(p: &[usize], degree: usize) -> bool {
    if p.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    p.iter().all(|&x| x < degree && !std::mem::replace(&mut seen[x], true))
}

fn lex_permutations(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn parity(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for s in 0..p.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        transpositions += len.max(1) - 1;
    }
    transpositions % 2
}

/// Cycle notation on 1-based points; the identity is `e`.
pub fn cycle_label(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            cyc.push((x + 1).to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cyc.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

pub fn fixed_points(p: &[usize]) -> usize {
    p.iter().enumerate().filter(|(i, &x)| *i == x).count()
}

/// A unitary representation (irreducible when produced by [`decompose_regular`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Irrep {
    dim: usize,
    mats: Vec<CMat>,
    character: Vec<C64>,
}

impl Irrep {
    pub fn from_matrices(mats: Vec<CMat>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::Input("representation needs at least one matrix".into()));
        };
        let dim = first.nrows();
        if dim == 0 || mats.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::Shape("representation matrices must share one square shape".into()));
        }
        let character = mats.iter().map(|m| m.trace()).collect();
        Ok(Self { dim, mats, character })
    }

    /// Permutation representation `π(σ) e_i = e_{σ(i)}` of a group built from permutations.
    pub fn defining(group: &FiniteGroup) -> Result<Self> {
        let perms =
            group.permutations().ok_or_else(|| Error::Input(format!("{} carries no permutations", group.name())))?;
        let mats = perms
            .iter()
            .map(|p| {
                let n = p.len();
                CMat::from_fn(n, n, |i, j| if p[j] == i { ONE } else { ZERO })
            })
            .collect();
        Self::from_matrices(mats)
    }

    /// One-dimensional representation with the given values.
    pub fn character_rep(values: &[C64]) -> Result<Self> {
        Self::from_matrices(values.iter().map(|&v| CMat::from_element(1, 1, v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn matrices(&self) -> &[CMat] {
        &self.mats
    }
    pub fn matrix(&self, g: usize) -> &CMat {
        &self.mats[g]
    }
    pub fn character(&self) -> &[C64] {
        &self.character
    }
    /// `u_ij(g) = π(g)_ij`.
    pub fn coefficient(&self, g: usize, i: usize, j: usize) -> C64 {
        self.mats[g][(i, j)]
    }

    /// `(1/N) Σ_g |χ(g)|²`; equals 1 exactly for irreducibles.
    pub fn character_norm(&self) -> f64 {
        self.character.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.mats.len() as f64
    }

    pub fn homomorphism_residual(&self, group: &FiniteGroup) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..group.order() {
            for b in 0..group.order() {
                let d = (&self.mats[a] * &self.mats[b] - &self.mats[group.mul(a, b)]).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn unitarity_residual(&self) -> f64 {
        let id = CMat::identity(self.dim, self.dim);
        self.mats.iter().map(|m| (m.adjoint() * m - &id).norm()).fold(0.0, f64::max)
    }

    /// Homomorphism, unitarity and irreducibility all within `tol`.
    pub fn verify(&self, group: &FiniteGroup, tol: f64) -> Result<()> {
        if self.mats.len() != group.order() {
            return Err(Error::Input(format!("{} matrices for a group of order {}", self.mats.len(), group.order())));
        }
        let h = self.homomorphism_residual(group);
        let u = self.unitarity_residual();
        let c = (self.character_norm() - 1.0).abs();
        if h > tol || u > tol || c > tol {
            return Err(Error::Input(format!(
                "not a unitary irreducible representation: homomorphism {h:.3e}, unitarity {u:.3e}, irreducibility {c:.3e}"
            )));
        }
        Ok(())
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.dim == 1 && self.mats.iter().all(|m| (m[(0, 0)] - ONE).norm() <= tol)
    }

    /// Elements acting as the identity.
    pub fn kernel(&self, tol: f64) -> Vec<usize> {
        let id = CMat::identity(self.dim, self.dim);
        (0..self.mats.len()).filter(|&g| (&self.mats[g] - &id).norm() <= tol).collect()
    }

    pub fn is_faithful(&self, tol: f64) -> bool {
        self.kernel(tol).len() == 1
    }

    /// Conjugated copy `U^* π(g) U`.
    pub fn conjugated(&self, u: &CMat) -> Self {
        let mats = self.mats.iter().map(|m| u.adjoint() * m * u).collect();
        Self::from_matrices(mats).expect("same shape")
    }
}

/// `(1/N) Σ_g χ(g) conj(ψ(g))`.
pub fn character_inner(chi: &[C64], psi: &[C64]) -> C64 {
    chi.iter().zip(psi).map(|(a, b)| a * b.conj()).sum::<C64>() / chi.len() as f64
}

fn regular_representation(group: &FiniteGroup) -> Vec<CMat> {
    let n = group.order();
    (0..n)
        .map(|g| {
            // R(g) e_h = e_{gh}
            let mut m = CMat::zeros(n, n);
            for h in 0..n {
                m[(group.mul(g, h), h)] = ONE;
            }
            m
        })
        .collect()
}

fn split_representation<R: Rng>(mats: &[CMat], rng: &mut R, out: &mut Vec<Vec<CMat>>) -> Result<()> {
    let n = mats.len() as f64;
    let d = mats[0].nrows();
    let norm: f64 = mats.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / n;
    if norm < 1.5 {
        out.push(mats.to_vec());
        return Ok(());
    }
    for _ in 0..SPLIT_ATTEMPTS {
        let h = random_hermitian(d, rng);
        let mut avg = CMat::zeros(d, d);
        for m in mats {
            avg += m * &h * m.adjoint();
        }
        avg /= c64(n, 0.0);
        let (vals, vecs) = hermitian_eigen(&avg);
        let spread = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let clusters = cluster_sorted(&vals, 1e-8 * spread);
        if clusters.len() < 2 {
            continue;
        }
        for range in clusters {
            let v = vecs.columns(range.start, range.len()).into_owned();
            let sub: Vec<CMat> = mats.iter().map(|m| v.adjoint() * m * &v).collect();
            split_representation(&sub, rng, out)?;
        }
        return Ok(());
    }
    Err(Error::NotConverged(format!(
        "could not split a {d}-dimensional representation after {SPLIT_ATTEMPTS} attempts"
    )))
}

fn lex_cmp(a: &[C64], b: &[C64], tol: f64) -> std::cmp::Ordering {
    use std::cmp::Ordering::*;
    for (x, y) in a.iter().zip(b) {
        for (p, q) in [(x.re, y.re), (x.im, y.im)] {
            if (p - q).abs() > tol {
                return if p < q { Less } else { Greater };
            }
        }
    }
    Equal
}

/// Sorts by dimension (largest first), then by character in lexicographic order.
pub fn sort_irreps(irreps: &mut [Irrep]) {
    irreps.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| lex_cmp(&a.character, &b.character, 1e-7)));
}

/// Complete set of unitary irreducibles, one per equivalence class.
///
/// Averages a random Hermitian matrix over the regular representation, splits along the
/// eigenspaces of the average and recurses until every piece is irreducible.
pub fn decompose_regular(group: &FiniteGroup, seed: u64, tol: f64) -> Result<Vec<Irrep>> {
    let mut rng = rng_from_seed(seed);
    let mut pieces = Vec::new();
    split_representation(&regular_representation(group), &mut rng, &mut pieces)?;
    let mut found: Vec<Irrep> = Vec::new();
    for mats in pieces {
        let irrep = Irrep::from_matrices(mats)?;
        let known = found.iter().any(|f| {
            f.dim == irrep.dim && f.character.iter().zip(&irrep.character).all(|(a, b)| (a - b).norm() <= 1e-7)
        });
        if !known {
            found.push(irrep);
        }
    }
    let total: usize = found.iter().map(|r| r.dim * r.dim).sum();
    if total != group.order() {
        return Err(Error::NotConverged(format!(
            "irreducible dimensions square-sum to {total}, group order is {}",
            group.order()
        )));
    }
    let check_tol = tol.max(1e-8);
    for r in &found {
        r.verify(group, check_tol)?;
    }
    if found.iter().filter(|r| r.is_trivial(1e-7)).count() != 1 {
        return Err(Error::NotConverged("trivial representation not found exactly once".into()));
    }
    sort_irreps(&mut found);
    Ok(found)
}

/// The `i`-th copy of `α` inside `β ⊗ γ`, for every `i`.
#[derive(Clone, Debug)]
pub struct IntertwinerSet {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    /// Isometries `C^{n_α} → C^{n_β} ⊗ C^{n_γ}` (rows indexed `b * n_γ + c`).
    pub isometries: Vec<CMat>,
}

impl IntertwinerSet {
    pub fn multiplicity(&self) -> usize {
        self.isometries.len()
    }
}

/// Decomposes `irreps[beta] ⊗ irreps[gamma]` against the complete list `irreps`.
pub fn tensor_decompose(irreps: &[Irrep], beta: usize, gamma: usize) -> Vec<IntertwinerSet> {
    let (rb, rg) = (&irreps[beta], &irreps[gamma]);
    let p = rb.dim * rg.dim;
    let prod: Vec<CMat> = rb.mats.iter().zip(&rg.mats).map(|(x, y)| x.kronecker(y)).collect();
    let mut out = Vec::new();
    for (ai, ra) in irreps.iter().enumerate() {
        let na = ra.dim;
        let unknowns = p * na;
        let mut sys = CMat::zeros(prod.len() * unknowns, unknowns);
        let id_a = CMat::identity(na, na);
        let id_p = CMat::identity(p, p);
        for (g, r) in prod.iter().enumerate() {
            // vec(R V − V α(g)) = (I ⊗ R − α(g)^T ⊗ I) vec V, column-major vec
            let block = id_a.kronecker(r) - ra.mats[g].transpose().kronecker(&id_p);
            sys.view_mut((g * unknowns, 0), (unknowns, unknowns)).copy_from(&block);
        }
        let ns = null_space(&sys, 1e-8);
        let scale = (na as f64).sqrt();
        let isometries = (0..ns.ncols())
            .map(|k| CMat::from_fn(p, na, |row, col| ns[(col * p + row, k)] * scale))
            .collect::<Vec<_>>();
        if !isometries.is_empty() {
            out.push(IntertwinerSet { alpha: ai, beta, gamma, isometries });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientTerm {
    pub alpha: usize,
    pub a: usize,
    pub a2: usize,
    pub coeff: C64,
}

/// Expansion `u^β_{bb'} u^γ_{cc'} = Σ coeff · u^α_{aa'}` via the isometric intertwiners.
pub fn coefficient_product_expand(
    irreps: &[Irrep],
    beta: usize,
    (b, b2): (usize, usize),
    gamma: usize,
    (c, c2): (usize, usize),
) -> Vec<CoefficientTerm> {
    let ng = irreps[gamma].dim;
    let (row, row2) = (b * ng + c, b2 * ng + c2);
    let mut out = Vec::new();
    for set in tensor_decompose(irreps, beta, gamma) {
        let na = irreps[set.alpha].dim;
        for a in 0..na {
            for a2 in 0..na {
                let coeff: C64 = set.isometries.iter().map(|v| v[(row, a)] * v[(row2, a2)].conj()).sum();
                if coeff.norm() > 1e-13 {
                    out.push(CoefficientTerm { alpha: set.alpha, a, a2, coeff });
                }
            }
        }
    }
    out
}
