//! Exact construction and verification of Lie gradings, and a decision
//! procedure for whether a grading's labels embed into an abelian semigroup
//! in which `[L_g, L_g'] ⊆ L_g''` forces `g + g' = g''`.
//!
//! The modules build on each other bottom-up:
//!
//! * [`linalg`]: exact rationals, named bases, maps, echelon subspaces.
//! * [`operators`]: associative and Lie spans of operators.
//! * [`lie`]: structure constants, axioms, semidirect sums, central series.
//! * [`grading`]: grading verification and relation extraction.
//! * [`semigroup`]: completion-based embeddability decision and certificates.
//! * [`counterexample`]: the nine-dimensional counterexample, end to end.
//! * [`formats`]: JSON file formats used by the command-line tool.

pub mod counterexample;
pub mod formats;
pub mod grading;
pub mod lie;
pub mod linalg;
pub mod operators;
pub mod semigroup;

pub use formats::{AlgebraFile, FormatError, GradingFile, RelationsFile};
pub use grading::{
    fine_grading_from_basis, relation_set, verify_grading, Grading, GradingError, GradingReport,
    RelationSet, Triple,
};
pub use lie::{
    check_axioms, from_operators, lower_central_series, semidirect_sum, AxiomReport, CentralSeries,
    LieAlgebra, LieError, LinearLieAlgebra,
};
pub use linalg::{
    direct_sum_check, int, parse_scalar, rref, BasedSpace, LinalgError, LinearMap, Scalar,
    Subspace, Vector,
};
pub use operators::{
    associative_closure, check_relations, commutator, compose, evaluation_constraints, lie_closure,
    span_product, AlgebraError, AlgebraSpan, ClosureKind, OperatorSet, RelationClaim,
    RelationReport,
};
pub use semigroup::{
    bfs_oracle, complete, decide, decide_with, reduce, render_certificate, term_order_less,
    CertificateError, CertificateStyle, CollisionCertificate, DecideError, Decision,
    ExponentVector, Limits, OracleResult, RewriteRule, RewriteSystem,
};
