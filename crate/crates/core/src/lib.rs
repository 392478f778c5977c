//! The numbers game on GCM and E-GCM graphs.
//!
//! A graph is an amplitude matrix `M` with 2 on the diagonal and nonpositive
//! entries elsewhere. A position assigns a number to every node; firing a
//! node `i` with a positive number sends every `λ_j` to `λ_j - M_ij·λ_i`.
//! The crate plays these games exactly, proves divergence with Perron
//! certificates, recognizes the admissible graphs (finite-type Dynkin
//! diagrams and E-Coxeter graphs), enumerates Coxeter orbits and checks
//! M-structure posets.
//!
//! Library indices are 0-based throughout.

pub mod catalog;
pub mod classify;
pub mod coxeter;
pub mod engine;
pub mod graph;
pub mod linalg;
pub mod poset;
pub mod scalar;
pub mod spectral;

pub use catalog::{catalog, CatalogError, CatalogId, Regime};
pub use classify::{
    classify, cross_validate, is_admissible, recognize, Classification, ClassifyError,
    ComponentClass, CrossReport, Empirical, Verdict, Witness,
};
pub use coxeter::{
    coxeter_matrix, is_reduced, longest_length, orbit, CoxeterError, CoxeterMatrix, OrbitOptions,
    OrbitResult, OrbitSize,
};
pub use engine::{
    conserved_form, default_limit, fire, legal_moves, play, replay, EngineError, GameOutcome,
    GameTrace, Outcome, PlayOptions, Policy, Position,
};
pub use graph::{AmplitudeGraph, CoxeterLabel, GraphError, Kind};
pub use poset::{
    check_m_structure, infer_finite_type, EdgeColoredPoset, Inference, PosetError,
    StructureReport,
};
pub use scalar::{Mode, Scalar};
pub use spectral::{
    certify_divergence, cycle_charpoly_shift, firing_matrix, perron, trichotomy,
    DivergenceCertificate, SpectralError, SpectralReport, Trichotomy,
};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeExamples;
