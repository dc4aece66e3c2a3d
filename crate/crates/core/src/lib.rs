//! Exact-arithmetic construction and verification of left Hopf algebroids
//! over finite-dimensional base algebras, Morita base change, and the
//! para-(co)cyclic machinery computing Hochschild and cyclic (co)homology.
//!
//! Everything runs over the rationals with no tolerances: every axiom,
//! chain-map identity, and homotopy identity is checked as an exact matrix
//! equality over canonical deterministic bases.

pub mod algebra;
pub mod basechange;
pub mod bimodule;
pub mod classical;
pub mod cyclic;
pub mod hopfalgebroid;
pub mod linalg;
pub mod maps;
pub mod morita;
pub mod oracle;
pub mod report;

pub use report::{CheckItem, Report};

/// Errors surfaced by constructions. Verification failures are not errors;
/// they are `Report` entries. An `Error` means a construction could not be
/// carried out at all (bad input, resource cap, or an internal map that
/// fails to descend to a quotient).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("size limit exceeded: ambient dimension {dim} is over the cap {cap}")]
    SizeLimit { dim: usize, cap: usize },
    #[error("composition is not zero (column {col}); the complex is broken upstream")]
    CompositionNotZero { col: usize },
    #[error("map fails to descend: image of relation {relation} in {context} is not a relation")]
    NotWellDefined { relation: usize, context: String },
    #[error("not associative at basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("unit fails at basis index {index}")]
    NotUnital { index: usize },
    #[error("not an algebra map: {context}")]
    NotAlgebraMap { context: String },
    #[error("not a module action: {context}")]
    NotAction { context: String },
    #[error("balanced tensor factors disagree with the balancing algebra: {context}")]
    ActionMismatch { context: String },
    #[error("map is not invertible: {context}")]
    NotInvertible { context: String },
    #[error("not a bimodule isomorphism: {context}")]
    NotIso { context: String },
    #[error("bimodule map is not equivariant: {context}")]
    NotEquivariant { context: String },
    #[error("Morita compatibility fails: {context}")]
    CompatibilityFail { context: String },
    #[error("cyclic operator is not of finite order in degree {degree}; cyclic homology needs t^(n+1) = id")]
    NotCyclic { degree: usize },
    #[error("homotopy identity fails in degree {degree} at basis column {col}")]
    HomotopyFail { degree: usize, col: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
