//! The nullspace of the homogeneous MAIN equation, a numerical completeness
//! oracle for MAIN, and the structural checks every nondegenerate MAIN
//! solution has to pass.

mod nullspace;
mod oracle;
mod structure;

use thiserror::Error;

use crate::equations::EquationError;
use crate::families::FamilyError;
use crate::morphisms::MorphismError;

pub use nullspace::{constraint_matrix, nullspace_basis, NullspaceBasis};
pub use oracle::{oracle_solve_main, Classification, OracleConfig, OracleReport, OracleSolution, ORACLE_LIMIT};
pub use structure::{verify_structure, ClauseCheck, GBranch, StructureReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("this operation needs a finite carrier")]
    NotFinite,
    #[error("carrier has {size} elements, the oracle handles at most {limit}")]
    CarrierTooLarge { size: usize, limit: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}
