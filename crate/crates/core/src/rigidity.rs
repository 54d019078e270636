//! Level sets of Fourier multipliers and the rigidity criteria built on them.
//!
//! A universal action commuting with `λ_g ↦ T(g) λ_g` has vanishing entries between
//! elements in different level sets of `T`, so everything here works with the level
//! partition rather than with the values of `T`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fingroup::{character_inner, FiniteGroup, Irrep, StructureReport};
use crate::linalg::{
    c64, column_space, derived_rng, haar_unitary, null_space, random_unit_vector, CMat, CVec, C64, ONE, ZERO,
};
use crate::qgroup::{fourier_multiplier, inv_fourier_rank_one, GroupDual, Multiplier, QGroupData};

/// Values closer than `SEPARATION_TOL · max|T|` share a level set.
pub const SEPARATION_TOL: f64 = 1e-7;
const CLOSURE_RANK_TOL: f64 = 1e-9;
const CENTRAL_ENUMERATION_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelPartition {
    /// Blocks sorted internally and by smallest member.
    pub blocks: Vec<Vec<usize>>,
    pub tol: f64,
    pub scale: f64,
}

impl LevelPartition {
    pub fn block_of(&self, g: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&g)).expect("partition covers every element")
    }
    pub fn separates(&self, g: usize, h: usize) -> bool {
        self.block_of(g) != self.block_of(h)
    }
    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Union-find closure of `|T(g) − T(h)| ≤ tol · max_k |T(k)|`.
///
/// The threshold scales with `T`, so the partition is invariant under `T ↦ cT`, `c ≠ 0`.
pub fn level_partition(t: &Multiplier, tol: f64) -> LevelPartition {
    let n = t.len();
    let scale = t.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let mut parent: Vec<usize> = (0..n).collect();
    for g in 0..n {
        for h in g + 1..n {
            if (t.values[g] - t.values[h]).norm() <= tol * scale {
                let (a, b) = (find(&mut parent, g), find(&mut parent, h));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for g in 0..n {
        let r = find(&mut parent, g);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(g);
    }
    LevelPartition { blocks, tol, scale }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    RigidInjective,
    RigidNoncentralSeparated,
    Inconclusive,
}

impl VerdictKind {
    pub fn is_rigid(self) -> bool {
        self != VerdictKind::Inconclusive
    }
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::RigidInjective => "RIGID_INJECTIVE",
            VerdictKind::RigidNoncentralSeparated => "RIGID_NONCENTRAL_SEPARATED",
            VerdictKind::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityVerdict {
    pub kind: VerdictKind,
    pub partition: LevelPartition,
    pub non_abelian: bool,
    /// Every pair `{g, h}` with a non-central member lies in distinct level sets.
    pub noncentral_pairs_separated: bool,
    /// Pairs sharing a level set (at most 64 listed).
    pub unseparated_pairs: Vec<(usize, usize)>,
}

pub fn rigidity_verdict(group: &FiniteGroup, t: &Multiplier, tol: f64) -> RigidityVerdict {
    let partition = level_partition(t, tol);
    let center = group.center();
    let non_abelian = center.len() < group.order();
    let mut unseparated = Vec::new();
    let mut noncentral_ok = true;
    for b in &partition.blocks {
        for (i, &g) in b.iter().enumerate() {
            for &h in &b[i + 1..] {
                if !(center.contains(&g) && center.contains(&h)) {
                    noncentral_ok = false;
                }
                if unseparated.len() < 64 {
                    unseparated.push((g, h));
                }
            }
        }
    }
    let kind = if partition.is_discrete() {
        VerdictKind::RigidInjective
    } else if non_abelian && noncentral_ok {
        VerdictKind::RigidNoncentralSeparated
    } else {
        VerdictKind::Inconclusive
    };
    RigidityVerdict {
        kind,
        partition,
        non_abelian,
        noncentral_pairs_separated: noncentral_ok,
        unseparated_pairs: unseparated,
    }
}

/// `T(g) = ⟨ξ, π(g) ξ⟩`.
pub fn matrix_coefficient(irrep: &Irrep, xi: &CVec) -> Multiplier {
    Multiplier::new(irrep.matrices().iter().map(|m| xi.dotc(&(m * xi))).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatingVector {
    pub trial: usize,
    pub xi: Vec<C64>,
    pub values: Multiplier,
}

/// Draws unit vectors until `g ↦ ⟨ξ, π(g) ξ⟩` takes pairwise distinct values.
pub fn separating_vector_search(
    irrep: &Irrep,
    faithful_required: bool,
    seed: u64,
    trials: usize,
    tol: f64,
) -> Result<SeparatingVector> {
    if faithful_required {
        let ker = irrep.kernel(1e-8);
        if ker.len() > 1 {
            return Err(Error::NotFaithful(ker));
        }
    }
    for trial in 0..trials {
        let mut rng = derived_rng(seed, trial as u64);
        let xi = random_unit_vector(irrep.dim(), &mut rng);
        let values = matrix_coefficient(irrep, &xi);
        if level_partition(&values, tol).is_discrete() {
            return Ok(SeparatingVector { trial, xi: xi.iter().copied().collect(), values });
        }
    }
    Err(Error::NotConverged(format!("no separating vector in {trials} trials")))
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidSearch {
    pub trial: usize,
    pub trials_run: usize,
    /// Block-basis projection.
    pub projection: Vec<C64>,
    pub multiplier: Multiplier,
    pub verdict: RigidityVerdict,
}

fn rigid_trial(dual: &GroupDual, seed: u64, trial: usize, tol: f64) -> RigidSearch {
    let mut rng = derived_rng(seed, trial as u64);
    let q = dual.space();
    let mut p = CVec::zeros(q.dim());
    for (k, r) in dual.irreps().iter().enumerate() {
        if r.dim() > 1 {
            let xi = random_unit_vector(r.dim(), &mut rng);
            p += dual.embed_block(k, &(&xi * xi.adjoint()));
        }
    }
    let multiplier = fourier_multiplier(dual, &p);
    let verdict = rigidity_verdict(dual.group(), &multiplier, tol);
    RigidSearch { trial, trials_run: trial + 1, projection: p.iter().copied().collect(), multiplier, verdict }
}

fn verdict_rank(k: VerdictKind) -> u8 {
    match k {
        VerdictKind::RigidInjective => 2,
        VerdictKind::RigidNoncentralSeparated => 1,
        VerdictKind::Inconclusive => 0,
    }
}

/// Random `P = ⊕_k |ξ_k⟩⟨ξ_k|` over the irreducibles of dimension > 1.
///
/// Stops at the first injective symbol; otherwise keeps the strongest verdict, then the
/// finest partition, then the lowest trial index. Trials run in rounds of `jobs` and the
/// merge is by trial index, so the result does not depend on `jobs`.
pub fn rigid_projection_search(
    dual: &GroupDual,
    seed: u64,
    trials: usize,
    tol: f64,
    jobs: usize,
) -> Result<RigidSearch> {
    if dual.group().is_abelian() {
        return Err(Error::Hypothesis(format!(
            "{} is abelian; the rigid projection search needs a non-abelian group",
            dual.group().name()
        )));
    }
    let jobs = jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Error::Input(e.to_string()))?;
    let key = |r: &RigidSearch| (verdict_rank(r.verdict.kind), r.verdict.partition.blocks.len());
    let mut best: Option<RigidSearch> = None;
    let mut start = 0;
    while start < trials {
        let end = (start + jobs).min(trials);
        let round: Vec<RigidSearch> =
            pool.install(|| (start..end).into_par_iter().map(|t| rigid_trial(dual, seed, t, tol)).collect());
        for r in round {
            if r.verdict.kind == VerdictKind::RigidInjective {
                return Ok(r);
            }
            if best.as_ref().is_none_or(|b| key(&r) > key(b)) {
                best = Some(r);
            }
        }
        start = end;
    }
    let mut out = best.ok_or_else(|| Error::Input("trials must be positive".into()))?;
    out.trials_run = trials;
    Ok(out)
}

/// `T(g) = (n/N) Tr(π(g)^*)` for any unitary representation given by its matrices.
pub fn representation_multiplier(mats: &[CMat]) -> Multiplier {
    let n = mats.len() as f64;
    Multiplier::new(mats.iter().map(|m| m.adjoint().trace() * (m.nrows() as f64 / n)).collect())
}

/// Largest deviation of `T` from being constant on conjugacy classes.
pub fn class_function_residual(group: &FiniteGroup, t: &Multiplier) -> f64 {
    group
        .conjugacy_classes()
        .iter()
        .flat_map(|c| c.iter().map(move |&x| (t.values[x] - t.values[c[0]]).norm()))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralCase {
    pub subset: Vec<usize>,
    pub partition: LevelPartition,
    pub class_function_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralObstruction {
    pub cases: Vec<CentralCase>,
    /// Pairs of distinct conjugate elements that no central projection separates.
    pub never_separated: Vec<(usize, usize)>,
}

/// Enumerates every central projection `P_S` and collects the conjugate pairs none separates.
pub fn central_rigidity_obstruction(dual: &GroupDual, tol: f64) -> Result<CentralObstruction> {
    let k = dual.irreps().len();
    if k > CENTRAL_ENUMERATION_CAP {
        return Err(Error::Cap(format!("{k} irreducibles exceed the enumeration cap {CENTRAL_ENUMERATION_CAP}")));
    }
    let group = dual.group();
    let mut conj_pairs: Vec<(usize, usize)> = Vec::new();
    for cls in group.conjugacy_classes() {
        for (i, &g) in cls.iter().enumerate() {
            for &h in &cls[i + 1..] {
                conj_pairs.push((g, h));
            }
        }
    }
    let mut never = vec![true; conj_pairs.len()];
    let mut cases = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let subset: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let coeffs = crate::qgroup::central_projection(dual, &subset)?;
        let t = Multiplier::new(coeffs.iter().copied().collect());
        let partition = level_partition(&t, tol);
        for (flag, &(g, h)) in never.iter_mut().zip(&conj_pairs) {
            if partition.separates(g, h) {
                *flag = false;
            }
        }
        cases.push(CentralCase { subset, class_function_residual: class_function_residual(group, &t), partition });
    }
    let never_separated = conj_pairs.into_iter().zip(never).filter(|(_, n)| *n).map(|(p, _)| p).collect();
    Ok(CentralObstruction { cases, never_separated })
}

pub const S3_LABELS: [&str; 6] = ["e", "(1 2)", "(1 3)", "(2 3)", "(1 2 3)", "(1 3 2)"];

/// Closed forms of `g ↦ ⟨π(g)ξ, ξ⟩` for `ξ = (1, α, −1−α)` in the defining representation of
/// S3, ordered as [`S3_LABELS`], with `π(σ) e_i = e_{σ(i)}`.
pub fn s3_rank_one_multiplier(alpha: C64) -> [C64; 6] {
    let a2 = alpha.norm_sqr();
    let s = alpha + alpha.conj();
    let one = ONE;
    [
        one + a2 + (one + alpha).norm_sqr(),
        (one + alpha).norm_sqr() + s,
        c64(a2 - 2.0, 0.0) - s,
        one - s - 2.0 * a2,
        -one - a2 + alpha - 2.0 * alpha.conj(),
        -one - a2 + alpha.conj() - 2.0 * alpha,
    ]
}

/// The same symbol through the general machinery: S3 dual with the standard irreducible
/// realized on `(1,1,1)^⊥`, then `inv_fourier_rank_one` and `fourier_multiplier`.
#[derive(Clone, Debug, Serialize)]
pub struct S3PipelineCheck {
    pub pipeline: [C64; 6],
    pub closed_form: [C64; 6],
    /// Best `c` with `pipeline ≈ c · closed_form`.
    pub scalar: C64,
    pub residual: f64,
}

pub fn s3_standard_dual() -> Result<GroupDual> {
    let g = FiniteGroup::symmetric(3);
    let def = Irrep::defining(&g)?;
    let r2 = std::f64::consts::SQRT_2;
    let r6 = 6f64.sqrt();
    let basis = CMat::from_row_slice(
        3,
        2,
        &[c64(1.0 / r2, 0.0), c64(1.0 / r6, 0.0), c64(-1.0 / r2, 0.0), c64(1.0 / r6, 0.0), ZERO, c64(-2.0 / r6, 0.0)],
    );
    let std = Irrep::from_matrices(def.matrices().iter().map(|m| basis.adjoint() * m * &basis).collect())?;
    let perms = g.permutations().expect("symmetric group carries permutations");
    let sign: Vec<C64> = perms
        .iter()
        .map(|p| {
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            if inversions % 2 == 0 {
                ONE
            } else {
                -ONE
            }
        })
        .collect();
    let irreps = vec![std, Irrep::character_rep(&sign)?, Irrep::character_rep(&[ONE; 6])?];
    GroupDual::new(g, irreps)
}

pub fn s3_rank_one_via_pipeline(dual: &GroupDual, alpha: C64) -> Result<S3PipelineCheck> {
    let xi3 = CVec::from_vec(vec![ONE, alpha, -ONE - alpha]);
    let r2 = std::f64::consts::SQRT_2;
    let r6 = 6f64.sqrt();
    let basis = CMat::from_row_slice(
        3,
        2,
        &[c64(1.0 / r2, 0.0), c64(1.0 / r6, 0.0), c64(-1.0 / r2, 0.0), c64(1.0 / r6, 0.0), ZERO, c64(-2.0 / r6, 0.0)],
    );
    let xi = basis.adjoint() * xi3;
    let coeffs = inv_fourier_rank_one(dual, 0, &xi, &xi)?;
    let t = fourier_multiplier(dual, &dual.to_block(&coeffs));
    let g = dual.group();
    let mut pipeline = [ZERO; 6];
    for (slot, label) in S3_LABELS.iter().enumerate() {
        let x = g.element_by_label(label).ok_or_else(|| Error::Input(format!("no element {label}")))?;
        pipeline[slot] = t.values[x];
    }
    let closed_form = s3_rank_one_multiplier(alpha);
    let num: C64 = closed_form.iter().zip(&pipeline).map(|(c, p)| c.conj() * p).sum();
    let den: f64 = closed_form.iter().map(|c| c.norm_sqr()).sum();
    let scalar = num / den;
    let top = pipeline.iter().fold(0.0f64, |m, v| m.max(v.norm())).max(1e-300);
    let residual = closed_form.iter().zip(&pipeline).map(|(c, p)| (p - c * scalar).norm()).fold(0.0, f64::max) / top;
    Ok(S3PipelineCheck { pipeline, closed_form, scalar, residual })
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub dims: Vec<usize>,
    pub final_dim: usize,
    pub full: bool,
}

fn normalized_columns(vs: &[CVec], d: usize) -> CMat {
    let good: Vec<CVec> = vs.iter().filter(|v| v.norm() > 1e-12).map(|v| v / c64(v.norm(), 0.0)).collect();
    let mut m = CMat::zeros(d, good.len());
    for (j, v) in good.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

fn close_span(start: Vec<CVec>, d: usize, products: impl Fn(&CVec, &CVec) -> Vec<CVec>) -> Vec<usize> {
    let mut basis = column_space(&normalized_columns(&start, d), CLOSURE_RANK_TOL);
    let mut dims = vec![basis.ncols()];
    loop {
        let cols: Vec<CVec> = (0..basis.ncols()).map(|j| basis.column(j).into_owned()).collect();
        let mut cand = cols.clone();
        for x in &cols {
            for y in &cols {
                cand.extend(products(x, y));
            }
        }
        basis = column_space(&normalized_columns(&cand, d), CLOSURE_RANK_TOL);
        let dim = basis.ncols();
        if dim == *dims.last().expect("nonempty") {
            return dims;
        }
        dims.push(dim);
    }
}

/// Closes `span{u, P}` under `⋆`, where `u` is the unit of `⋆`, and reports the dimensions.
pub fn convolution_generation_test(q: &QGroupData, p: &CVec) -> GenerationReport {
    let d = q.space().dim();
    let dims = close_span(vec![q.convolution_unit(), p.clone()], d, |x, y| vec![q.convolve(x, y)]);
    let final_dim = *dims.last().expect("nonempty");
    GenerationReport { final_dim, full: final_dim == d, dims }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureStart {
    AllDiagonal,
    TrivialOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureRun {
    pub trial: usize,
    pub dims: Vec<usize>,
    pub final_dim: usize,
}

/// Diagonal coefficients in random orthonormal bases, closed under pointwise product and
/// group convolution `(f * h)(x) = Σ_y f(y) h(y^{-1} x)` inside `C(Γ)`.
pub fn closure_check(
    group: &FiniteGroup,
    irreps: &[Irrep],
    seed: u64,
    trials: usize,
    start: ClosureStart,
) -> Vec<ClosureRun> {
    let n = group.order();
    let conv = |f: &CVec, h: &CVec| CVec::from_fn(n, |x, _| (0..n).map(|y| f[y] * h[group.mul(group.inv(y), x)]).sum());
    (0..trials)
        .map(|trial| {
            let mut rng = derived_rng(seed, trial as u64);
            let mut funcs = Vec::new();
            for r in irreps {
                let u = haar_unitary(r.dim(), &mut rng);
                if start == ClosureStart::TrivialOnly && !r.is_trivial(1e-7) {
                    continue;
                }
                for a in 0..r.dim() {
                    let f = u.column(a).into_owned();
                    funcs.push(CVec::from_fn(n, |g, _| f.dotc(&(r.matrix(g) * &f))));
                }
            }
            let dims = close_span(funcs, n, |x, y| vec![x.component_mul(y), conv(x, y)]);
            ClosureRun { trial, final_dim: *dims.last().expect("nonempty"), dims }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaWitness {
    pub alpha: usize,
    /// Non-trivial `β ≠ γ`, both different from `α`, with `α ⊂ β ⊗ γ`.
    pub pair: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColouringReport {
    pub nontrivial_character: Option<usize>,
    pub tensor_witnesses: Vec<AlphaWitness>,
    pub character_hypothesis: bool,
    pub tensor_hypothesis: bool,
}

pub fn colouring_hypothesis_check(irreps: &[Irrep]) -> ColouringReport {
    let trivial = |r: &Irrep| r.is_trivial(1e-7);
    let nontrivial_character = irreps.iter().position(|r| r.dim() == 1 && !trivial(r));
    let mut tensor_witnesses = Vec::new();
    for (a, ra) in irreps.iter().enumerate() {
        if trivial(ra) {
            continue;
        }
        let mut pair = None;
        'search: for (b, rb) in irreps.iter().enumerate() {
            for (c, rc) in irreps.iter().enumerate() {
                if b >= c || b == a || c == a || trivial(rb) || trivial(rc) {
                    continue;
                }
                let prod: Vec<C64> = rb.character().iter().zip(rc.character()).map(|(x, y)| x * y).collect();
                if character_inner(&prod, ra.character()).re > 0.5 {
                    pair = Some((b, c));
                    break 'search;
                }
            }
        }
        tensor_witnesses.push(AlphaWitness { alpha: a, pair });
    }
    let tensor_hypothesis = tensor_witnesses.iter().all(|w| w.pair.is_some());
    ColouringReport {
        character_hypothesis: nontrivial_character.is_some(),
        nontrivial_character,
        tensor_witnesses,
        tensor_hypothesis,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapCertificate {
    pub issued: bool,
    pub refusal: Option<String>,
    pub structure: StructureReport,
    pub orthogonality_residual: f64,
    pub search: Option<RigidSearch>,
    /// Extra numerical check, not part of the certificate: dimension of
    /// `{X : A ad_X = ad_X A}` modulo the centre.
    pub lie_witness_dim: Option<usize>,
    pub centre_dim: usize,
}

/// `max |(1/N) Σ_g u^π_ij(g) conj(u^ρ_kl(g)) − δ δ δ / n_π|`.
pub fn orthogonality_residual(dual: &GroupDual) -> f64 {
    let n = dual.order();
    let c = CMat::from_fn(dual.space().dim(), n, |a, g| dual.lambda(g)[a]);
    let gram = &c * c.adjoint() / c64(n as f64, 0.0);
    let q = dual.space();
    let mut worst: f64 = 0.0;
    for a in 0..q.dim() {
        for b in 0..q.dim() {
            let want = if a == b { 1.0 / q.weight(a) } else { 0.0 };
            worst = worst.max((gram[(a, b)] - c64(want, 0.0)).norm());
        }
    }
    worst
}

/// Dimension of `{X : A ad_X = ad_X A}` minus the number of blocks (the centre).
pub fn lie_witness(q: &QGroupData, a: &CMat) -> usize {
    let s = q.space();
    let d = s.dim();
    let mut sys = CMat::zeros(d * d, d);
    for k in 0..d {
        let e = s.basis_vector(k);
        let left = s.left_mul_matrix(&e);
        let mut right = CMat::zeros(d, d);
        for j in 0..d {
            right.set_column(j, &s.mul(&s.basis_vector(j), &e));
        }
        let ad = left - right;
        let c = a * &ad - &ad * a;
        for (r, v) in c.iter().enumerate() {
            sys[(r, k)] = *v;
        }
    }
    null_space(&sys, 1e-8).ncols().saturating_sub(s.blocks().len())
}

pub fn gap_certificate(dual: &GroupDual, seed: u64, trials: usize, tol: f64, jobs: usize) -> GapCertificate {
    let structure = dual.group().structure_report();
    let orthogonality = orthogonality_residual(dual);
    let centre_dim = dual.space().blocks().len();
    if !structure.is_perfect {
        let refusal = format!(
            "{} is not perfect: abelianization has order {} (commutator subgroup of order {})",
            structure.name, structure.abelianization_order, structure.commutator_subgroup_order
        );
        return GapCertificate {
            issued: false,
            refusal: Some(refusal),
            structure,
            orthogonality_residual: orthogonality,
            search: None,
            lie_witness_dim: None,
            centre_dim,
        };
    }
    match rigid_projection_search(dual, seed, trials, tol, jobs) {
        Ok(search) => {
            let rigid = search.verdict.kind.is_rigid();
            let p = CVec::from_vec(search.projection.clone());
            let a = dual.qgroup().cayley_operator(&p);
            let lie = lie_witness(dual.qgroup(), a.matrix());
            GapCertificate {
                issued: rigid,
                refusal: (!rigid).then(|| format!("no rigid projection in {trials} trials")),
                structure,
                orthogonality_residual: orthogonality,
                search: Some(search),
                lie_witness_dim: Some(lie),
                centre_dim,
            }
        }
        Err(e) => GapCertificate {
            issued: false,
            refusal: Some(e.to_string()),
            structure,
            orthogonality_residual: orthogonality,
            search: None,
            lie_witness_dim: None,
            centre_dim,
        },
    }
}
