use proptest::prelude::*;
use proptest::sample::subsequence;

use qfrucht::fingroup::{decompose_regular, FiniteGroup};
use qfrucht::frucht::{aux_graph_h, aux_graph_htilde, enumerate_automorphisms, graph_automorphisms, ClassicalGraph};
use qfrucht::linalg::{c64, gaussian_matrix, gaussian_vector, rng_from_seed, CVec};
use qfrucht::qgroup::{cayley_graph, central_projection, multiplier_consistency, GroupDual, Multiplier};
use qfrucht::qspace::{complete_graph, schur_product, schur_product_dense, LinOp, QSet};
use qfrucht::rigidity::{level_partition, SEPARATION_TOL};

fn blocks() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=3)
}

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (2usize..=7).prop_map(FiniteGroup::cyclic),
        (3usize..=6).prop_map(FiniteGroup::dihedral),
        Just(FiniteGroup::symmetric(3)),
        Just(FiniteGroup::quaternion()),
        Just(FiniteGroup::alternating(4)),
    ]
}

fn close(a: &CVec, b: &CVec, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn algebra_is_associative_and_star_reverses(b in blocks(), seed in any::<u64>()) {
        let q = QSet::new(&b).unwrap();
        let mut rng = rng_from_seed(seed);
        let (x, y, z) = (gaussian_vector(q.dim(), &mut rng), gaussian_vector(q.dim(), &mut rng), gaussian_vector(q.dim(), &mut rng));
        prop_assert!(close(&q.mul(&q.mul(&x, &y), &z), &q.mul(&x, &q.mul(&y, &z)), 1e-12));
        prop_assert!(close(&q.star(&q.mul(&x, &y)), &q.mul(&q.star(&y), &q.star(&x)), 1e-12));
        prop_assert!(close(&q.mul(&q.unit(), &x), &x, 1e-12));
        let pos = q.psi(&q.mul(&q.star(&x), &x));
        prop_assert!(pos.re > 0.0 && pos.im.abs() <= 1e-10 * pos.re);
    }

    #[test]
    fn schur_product_routes_agree(b in blocks(), seed in any::<u64>()) {
        let q = QSet::new(&b).unwrap();
        let d = q.dim();
        let mut rng = rng_from_seed(seed);
        let a = LinOp::new(q.clone(), gaussian_matrix(d, d, &mut rng)).unwrap();
        let c = LinOp::new(q.clone(), gaussian_matrix(d, d, &mut rng)).unwrap();
        let fast = schur_product(&a, &c).unwrap();
        let dense = schur_product_dense(&a, &c).unwrap();
        prop_assert!((fast.matrix() - dense.matrix()).norm() <= 1e-10 * (1.0 + dense.matrix().norm()));
        let full = complete_graph(&q).add(&LinOp::identity(&q)).unwrap();
        let unit = schur_product(&a, &full).unwrap();
        prop_assert!((unit.matrix() - a.matrix()).norm() <= 1e-10 * (1.0 + a.matrix().norm()));
    }

    #[test]
    fn regular_decomposition_has_plancherel_dimensions(g in small_group(), seed in 0u64..1000) {
        let irreps = decompose_regular(&g, seed, 1e-9).unwrap();
        let total: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
        prop_assert_eq!(total, g.order());
        prop_assert_eq!(irreps.len(), g.conjugacy_classes().len());
        for r in &irreps {
            prop_assert!(r.homomorphism_residual(&g) <= 1e-9);
            prop_assert!(r.unitarity_residual() <= 1e-9);
        }
    }

    #[test]
    fn central_projections_give_consistent_cayley_graphs(g in small_group(), pick in subsequence(vec![0usize, 1, 2, 3], 0..=4)) {
        let dual = GroupDual::from_group(g, 0, 1e-9).unwrap();
        let subset: Vec<usize> = pick.into_iter().filter(|&k| k < dual.irreps().len()).collect();
        let p = dual.to_block(&central_projection(&dual, &subset).unwrap());
        let (graph, info) = cayley_graph(dual.qgroup(), &p, 1e-9).unwrap();
        let f = graph.flags();
        prop_assert!(f.schur_idempotent && f.real);
        prop_assert!(!info.disagreement, "{:?}", info);
        prop_assert!(multiplier_consistency(&dual, &p) <= 1e-9);
    }

    #[test]
    fn lambda_and_block_coordinates_are_inverse(g in small_group(), seed in any::<u64>()) {
        let dual = GroupDual::from_group(g, 0, 1e-9).unwrap();
        let c = gaussian_vector(dual.order(), &mut rng_from_seed(seed));
        prop_assert!(close(&dual.to_lambda(&dual.to_block(&c)), &c, 1e-10));
    }

    #[test]
    fn level_partition_is_scale_and_permutation_invariant(
        vals in prop::collection::vec(-3i32..=3, 1..12),
        re in 0.01f64..100.0,
        im in -100.0f64..100.0,
        rot in 0usize..12,
    ) {
        let t = Multiplier::new(vals.iter().map(|&v| c64(v as f64, 0.0)).collect());
        let base = level_partition(&t, SEPARATION_TOL);
        let scaled = level_partition(&t.scaled(c64(re, im)), SEPARATION_TOL);
        prop_assert_eq!(&base.blocks, &scaled.blocks);
        for i in 0..vals.len() {
            for j in 0..vals.len() {
                prop_assert_eq!(base.separates(i, j), vals[i] != vals[j]);
            }
        }
        let n = vals.len();
        let r = rot % n;
        let rotated = Multiplier::new((0..n).map(|i| t.values[(i + r) % n]).collect());
        let rp = level_partition(&rotated, SEPARATION_TOL);
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(rp.separates(i, j), base.separates((i + r) % n, (j + r) % n));
            }
        }
    }

    #[test]
    fn automorphism_engine_matches_backtracking(n in 1usize..=7, directed in any::<bool>(), bits in any::<u64>()) {
        let mut edges = Vec::new();
        let mut k = 0;
        for x in 0..n {
            for y in 0..n {
                if x == y || (!directed && y < x) {
                    continue;
                }
                if bits >> (k % 64) & 1 == 1 {
                    edges.push((x, y));
                }
                k += 1;
            }
        }
        let g = ClassicalGraph::from_edges(n, &edges, directed).unwrap();
        let aut = graph_automorphisms(&g).unwrap();
        let all = enumerate_automorphisms(&g, 10_000);
        prop_assert_eq!(aut.order, all.len() as u64);
        prop_assert!(aut.generators.iter().all(|p| g.is_automorphism(p)));
        prop_assert_eq!(aut.closure_order(10_000), Some(aut.order));
    }

    #[test]
    fn auxiliary_graph_degree_laws(n in 1usize..=200) {
        let h = aux_graph_h(n);
        prop_assert_eq!(h.in_degree(0), n.div_ceil(2));
        prop_assert!((1..=n).all(|i| h.in_degree(i) == i));
        let t = aux_graph_htilde(n);
        prop_assert_eq!(t.in_degree(0), n);
        prop_assert!((1..=2 * n).all(|i| t.in_degree(i) == i));
    }
}
