//! Combination constructions: a coloured family of graphs on one (quantum) set glued along
//! an auxiliary graph whose degrees tell the colours apart.

mod automorphism;
mod classical;
mod quantum;

pub use automorphism::{enumerate_automorphisms, graph_automorphisms, VERTEX_CAP};
pub use classical::{
    aux_graph_h, aux_graph_htilde, classical_cayley_digraph, combine_directed_classical, combine_undirected_classical,
    ClassicalGraph, PermGroup,
};
pub use quantum::{
    classical_frucht, coloured_family, combine_directed, combine_undirected, counit_block, degree_separated_family,
    directed_label_degrees, measured_degree_spectrum, quantum_frucht_pipeline, undirected_label_degrees,
    ClassicalFrucht, Colour, ColourSummary, ColouredFamily, Combined, FamilyKind, FruchtReport, Mode, SpectrumEntry,
};

#[cfg(test)]
mod tests;
