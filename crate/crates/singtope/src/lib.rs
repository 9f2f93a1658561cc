//! Exact-arithmetic analysis of weighted resolution trees.
//!
//! The crate works on finite weighted trees: each vertex carries a negative
//! self-intersection weight and a genus, edges are simple, and the whole
//! graph is connected. On top of that it provides
//!
//! - the intersection matrix and an exact negative-definiteness test,
//! - the stepwise computation of the minimal (fundamental) cycle together
//!   with a rationality verdict read off the run,
//! - continued-fraction invariants of star arms and the multiplicity
//!   identities they control,
//! - generation and recognition of the three-parameter splice family
//!   `(n, k, l)`,
//! - thick-thin decompositions and the metric-conicality verdict,
//! - a census driver that sweeps all trees (or stars, or bamboos) within
//!   given bounds and checks the classification against family recognition.
//!
//! All arithmetic is integer-exact; no floating point is used anywhere.

#![forbid(unsafe_code)]

pub mod arms;
pub mod canonical;
pub mod census;
pub mod classify;
pub mod family;
pub mod graph;
pub mod laufer;
pub mod matrix;

pub use arms::{arm_fractions, check_lcm_property, check_multeq, cont_frac, ArmReport, Fraction};
pub use canonical::{canonical_form, CanonicalKey};
pub use census::{
    census, census_sequential, census_with_jobs, for_each_graph, CensusBounds, CensusMode,
    CensusReport,
};
pub use classify::{
    analyze, analyze_with, is_metrically_conical, l_nodes, node_count, thick_thin,
    thick_thin_with, AnalysisReport, AnalyzeOptions, Decomposition,
};
pub use family::{generate, recognize, recognize_bounded, FamilyParams};
pub use graph::{
    blow_down, blow_up_edge, star_decomposition, StarDecomposition, Vertex, WeightedGraph,
};
pub use laufer::{
    dot, is_in_ztop, is_rational, laufer_zmin, laufer_zmin_with, zmin_oracle, Cycle, LauferConfig,
    LauferTrace,
};
pub use matrix::{is_negative_definite, IntersectionMatrix};
