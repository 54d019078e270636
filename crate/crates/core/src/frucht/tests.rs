use super::*;
use crate::fingroup::FiniteGroup;
use crate::qgroup::{function_algebra, GroupDual};

const TOL: f64 = 1e-9;

fn edge_set(g: &ClassicalGraph) -> Vec<(usize, usize)> {
    g.edges()
}

fn petersen() -> ClassicalGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    ClassicalGraph::from_edges(10, &e, false).unwrap()
}

#[test]
fn h4_edges_and_degrees() {
    let h = aux_graph_h(4);
    assert_eq!(edge_set(&h), vec![(0, 3), (0, 4), (1, 4), (2, 3), (2, 4), (3, 4)]);
    let degs: Vec<usize> = (0..5).map(|v| h.in_degree(v)).collect();
    assert_eq!(degs, vec![2, 1, 2, 3, 4]);
    let h5 = aux_graph_h(5);
    assert_eq!((h5.in_degree(0), h5.in_degree(5)), (3, 5));
}

#[test]
fn htilde_small_cases() {
    assert_eq!(edge_set(&aux_graph_htilde(1)), vec![(0, 2), (1, 2)]);
    assert_eq!(edge_set(&aux_graph_htilde(2)), vec![(0, 3), (0, 4), (1, 4), (2, 3), (2, 4), (3, 4)]);
}

#[test]
fn degree_laws_up_to_fifty() {
    for n in 1..=50 {
        let h = aux_graph_h(n);
        assert_eq!(h.in_degree(0), n.div_ceil(2));
        assert!((1..=n).all(|i| h.in_degree(i) == i));
        let t = aux_graph_htilde(n);
        assert_eq!(t.in_degree(0), n);
        assert!((1..=2 * n).all(|i| t.in_degree(i) == i));
    }
}

#[test]
fn json_round_trip_and_validation() {
    let g = aux_graph_h(3);
    let s = serde_json::to_string(&g).unwrap();
    let back: ClassicalGraph = serde_json::from_str(&s).unwrap();
    assert_eq!(back, g);
    let bad = r#"{"n":2,"directed":false,"adj":[[0,1],[0,0]]}"#;
    assert!(serde_json::from_str::<ClassicalGraph>(bad).is_err());
    let looped = r#"{"n":1,"directed":true,"adj":[[1]]}"#;
    assert!(serde_json::from_str::<ClassicalGraph>(looped).is_err());
}

#[test]
fn dot_export_lists_edges() {
    let dot = aux_graph_htilde(1).to_dot("Ht");
    assert!(dot.starts_with("graph Ht {"));
    assert!(dot.contains("0 -- 2;") && dot.contains("1 -- 2;"));
}

#[test]
fn cayley_digraphs() {
    let z3 = FiniteGroup::cyclic(3);
    let c = classical_cayley_digraph(&z3, &[1]).unwrap();
    assert_eq!(c.edges(), vec![(0, 1), (1, 2), (2, 0)]);
    assert_eq!(graph_automorphisms(&c).unwrap().order, 3);
    let s3 = FiniteGroup::symmetric(3);
    let k = classical_cayley_digraph(&s3, &[1, 2, 3, 4, 5]).unwrap();
    assert!((0..6).all(|x| (0..6).all(|y| k.has_edge(x, y) == (x != y))));
    let looped = classical_cayley_digraph(&s3, &[0, 2]).unwrap();
    assert!(looped.has_loops());
    assert!((0..6).all(|v| looped.in_degree(v) == 2 && looped.out_degree(v) == 2));
}

#[test]
fn small_automorphism_groups() {
    let k4 = ClassicalGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], false).unwrap();
    let a = graph_automorphisms(&k4).unwrap();
    assert_eq!(a.order, 24);
    assert_eq!(a.closure_order(1000), Some(24));
    let p = petersen();
    let a = graph_automorphisms(&p).unwrap();
    assert_eq!(a.order, 120);
    assert_eq!(a.closure_order(1000), Some(120));
    assert_eq!(enumerate_automorphisms(&p, 1000).len(), 120);
    let empty = ClassicalGraph::new(vec![vec![0; 6]; 6], true).unwrap();
    assert_eq!(graph_automorphisms(&empty).unwrap().order, 720);
}

#[test]
fn vertex_cap() {
    let big = ClassicalGraph::new(vec![vec![0; VERTEX_CAP + 1]; VERTEX_CAP + 1], false).unwrap();
    assert!(matches!(graph_automorphisms(&big), Err(crate::Error::Cap(_))));
}

#[test]
fn classical_frucht_z3_against_oracle() {
    let z3 = FiniteGroup::cyclic(3);
    for (mode, size) in [(Mode::Directed, 9), (Mode::Undirected, 15)] {
        let r = classical_frucht(&z3, mode).unwrap();
        assert_eq!(r.graph.n(), size);
        assert!(r.verified, "{mode:?}");
        assert_eq!(enumerate_automorphisms(&r.graph, 100).len(), 3);
    }
}

#[test]
fn classical_frucht_s3_directed() {
    let r = classical_frucht(&FiniteGroup::symmetric(3), Mode::Directed).unwrap();
    assert_eq!(r.graph.n(), 36);
    assert_eq!(r.aut.order, 6);
    assert!(r.verified);
}

#[test]
fn family_sizes() {
    let z2 = GroupDual::from_group(FiniteGroup::cyclic(2), 0, TOL).unwrap();
    assert_eq!(coloured_family(z2.qgroup(), TOL).unwrap().colours.len(), 1);
    let s3 = GroupDual::from_group(FiniteGroup::symmetric(3), 0, TOL).unwrap();
    let f = coloured_family(s3.qgroup(), TOL).unwrap();
    assert_eq!((f.colours.len(), f.span_rank), (5, 5));
    let degs: Vec<f64> = f.degrees().iter().map(|d| d.re).collect();
    assert!(degs.iter().zip([1.0, 2.0, 2.0, 2.0, 2.0]).all(|(a, b)| (a - b).abs() < 1e-9), "{degs:?}");
    assert!(f.colours.iter().all(|c| c.graph.flags().loopless));
}

#[test]
fn plain_s3_family_collides_at_five() {
    let s3 = GroupDual::from_group(FiniteGroup::symmetric(3), 0, TOL).unwrap();
    let f = coloured_family(s3.qgroup(), TOL).unwrap();
    let c = combine_undirected(&f.graphs(), TOL).unwrap();
    let spectrum = measured_degree_spectrum(c.graph.adjacency(), TOL).unwrap();
    let five = spectrum.iter().find(|e| (e.eigenvalue[0] - 5.0).abs() < 1e-6).unwrap();
    assert_eq!(five.rank, 12);
}

#[test]
fn separated_families() {
    let s3 = GroupDual::from_group(FiniteGroup::symmetric(3), 0, TOL).unwrap();
    let f = degree_separated_family(s3.qgroup(), TOL).unwrap();
    assert_eq!(f.kind, FamilyKind::MixedComplement { keep: 1 });
    let degs: Vec<f64> = f.degrees().iter().map(|d| d.re).collect();
    assert!(degs.iter().zip([1.0, 3.0, 3.0, 3.0, 3.0]).all(|(a, b)| (a - b).abs() < 1e-9), "{degs:?}");
    let q8 = GroupDual::from_group(FiniteGroup::quaternion(), 0, TOL).unwrap();
    let f = degree_separated_family(q8.qgroup(), TOL).unwrap();
    let degs: Vec<f64> = f.degrees().iter().map(|d| d.re).collect();
    assert!(degs.iter().zip([1.0, 5.0, 5.0, 5.0, 5.0, 6.0, 6.0]).all(|(a, b)| (a - b).abs() < 1e-9), "{degs:?}");
}

#[test]
fn z2_directed_combination() {
    let z2 = GroupDual::from_group(FiniteGroup::cyclic(2), 0, TOL).unwrap();
    let f = coloured_family(z2.qgroup(), TOL).unwrap();
    let c = combine_directed(&f.graphs(), TOL).unwrap();
    assert_eq!(c.graph.space().dim(), 4);
    let spectrum = measured_degree_spectrum(c.graph.adjacency(), TOL).unwrap();
    let got: Vec<f64> = spectrum.iter().map(|e| e.eigenvalue[0]).collect();
    let want = directed_label_degrees(&[1.0]);
    assert_eq!(want, vec![1.0, 2.0]);
    assert!(got.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-9), "{got:?}");
}

#[test]
fn quantum_directed_matches_classical_on_commutative_inputs() {
    let s3 = FiniteGroup::symmetric(3);
    let colours: Vec<ClassicalGraph> = (1..6).map(|g| classical_cayley_digraph(&s3, &[g]).unwrap()).collect();
    let quantum: Vec<_> =
        colours.iter().map(|c| crate::qspace::QuantumGraph::new(c.to_linop(), TOL).unwrap()).collect();
    let q = combine_directed(&quantum, TOL).unwrap();
    let cl = combine_directed_classical(&colours).unwrap();
    assert_eq!(q.graph.adjacency().matrix(), cl.to_linop().matrix());
}

#[test]
fn pipeline_on_s3_dual() {
    let s3 = GroupDual::from_group(FiniteGroup::symmetric(3), 0, TOL).unwrap();
    let (g, rep) = quantum_frucht_pipeline(s3.qgroup(), Some(&s3), TOL).unwrap();
    assert_eq!(rep.dimension, 66);
    let f = g.flags();
    assert!(f.schur_idempotent && f.real && f.undirected && f.loopless);
    assert!(rep.degree_spectrum.iter().all(|e| e.rank == 6));
    assert_eq!(rep.degree_spectrum.len(), 11);
    assert!(!rep.degree_collision);
    assert!(rep.colours.windows(2).all(|w| w[0].degree[0] <= w[1].degree[0]));
    assert_eq!(rep.rigidity.as_ref().unwrap().len(), 5);
}

#[test]
fn pipeline_on_z2_dual_is_commutative() {
    let z2 = GroupDual::from_group(FiniteGroup::cyclic(2), 0, TOL).unwrap();
    let (g, rep) = quantum_frucht_pipeline(z2.qgroup(), Some(&z2), TOL).unwrap();
    assert!(g.space().is_classical());
    assert_eq!(rep.dimension, 6);
}

#[test]
fn function_algebra_counit_block() {
    let q = function_algebra(&FiniteGroup::cyclic(4));
    assert_eq!(counit_block(&q).unwrap(), 0);
    let f = coloured_family(&q, TOL).unwrap();
    assert_eq!(f.colours.len(), 3);
}
