//! Entropy systems, Galois connections between them, and the transfer of
//! reversibility along those connections.
//!
//! Orders are finite (checked exhaustively) or numeric lines (checked on a
//! rational probe grid). All entropy arithmetic is exact; the Szilard engine
//! ledger is the only place floating point appears.

pub mod cli;
pub mod entropy;
pub mod error;
pub mod expr;
pub mod galois;
pub mod model;
pub mod poset;
pub mod rational;
pub mod space;
pub mod szilard;
pub mod toy;
pub mod transfer;

pub use entropy::{AxiomReport, EntropySystem, LineEntropy, ScalingAction};
pub use error::{Error, Result};
pub use expr::Expr;
pub use galois::{
    check_connection, check_monotone, check_scaled_connection, classify_map_strength, compose_connections,
    derive_operators, extract_cores, synthesize_adjoint, Connection, MonotoneMap, Side,
};
pub use poset::{FiniteOrder, HasseDiagram, LineKind, NumericLine};
pub use rational::Rational;
pub use space::{Space, State};
pub use transfer::{classify_step, match_case_patterns, CasePattern, Functor, ProcessStep, StepClass, TransferTable};
