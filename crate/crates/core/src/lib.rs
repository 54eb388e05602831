//! Exact curvature and spectral tools for amply regular graphs.
//!
//! Graphs are simple and undirected on vertices `0..n`. Curvature is computed
//! exactly over [`Rational`]; spectra use Jacobi rotations over any
//! [`num_traits::Float`].

pub mod assignment;
pub mod curvature;
pub mod error;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod rational;
pub mod scalar;
pub mod spectral;
pub mod witness;

pub use curvature::{
    assignment_wasserstein, curvature_all_edges, lly_curvature, mu_p, ollivier_kappa_p, plan_cost,
    wasserstein, CurvatureTable, EdgeCurvature, ProbMeasure, TransportPlan,
};
pub use error::{Error, Result};
pub use generators::{
    gen_cocktail, gen_complete, gen_cycle, gen_hamming, gen_hypercube, gen_paley, gen_shrikhande,
};
pub use graph::{load_edge_list, AmplyParams, Detection, EdgeNeighborhoodPartition, Graph, Violation};
pub use matching::{
    dense_perfect_matching, hall_violator, konig_decomposition, lex_min_perfect_matching,
    matching_through_edge, max_matching, Bipartite, HallViolator, Matching,
};
pub use rational::Rational;
pub use scalar::Scalar;
pub use spectral::{adjacency_spectrum, lambda1, second_largest};
pub use witness::{
    build_pi0, build_transport_bipartite, check_h_regular, prop_3_1_certificate, reachable_map,
    verify_edge_witness, verify_lemma_3_3, witness_curvature_bound, TransportBipartite,
};

/// Exact probability measure on vertices.
pub type Measure = ProbMeasure<Rational>;
/// Exact transport plan.
pub type Plan = TransportPlan<Rational>;
/// Double-precision adjacency spectrum.
pub type Spectrum = spectral::Spectrum<f64>;
