//! Tangles: expressions, crossing-level diagrams, propagation of a
//! representation from a generating pair, and the closed-form end matrices.
//!
//! Each basic tangle is a tile with corners `nw`, `ne`, `sw`, `se`:
//!
//! ```text
//!   [1]            [-1]           [0]            [inf]
//!  nw    ne       nw    ne       nw----ne       nw    ne
//!    \  /           \  /                         |    |
//!     \             /                            |    |
//!    /  \          /  \                          |    |
//!  sw    se       sw    se       sw----se       sw    se
//! ```
//!
//! In `[1]` the strand `nw-se` passes over, in `[-1]` the strand `sw-ne`.
//! A representation assigns to every directed arc a tracefree matrix, with
//! `rho(reversed) = -rho`; at a crossing with over-arc `x`, under-arcs `y`,
//! `z` both directed away from the crossing, `rho(z) = -rho(x) rho(y)
//! rho(x)^{-1}`.
//!
//! The generating pair of a rational tangle `[[k_1, ..., k_m]]`:
//!
//! ```text
//!   X  ^                      (X leaves through the nw end)
//!       \
//!      tile 0 --- tile 1 --- ...   [k_1], then [1/k_2] below, ...
//!       /
//!   Y  v                      (Y leaves tile 0 at its sw corner)
//! ```

mod closed_form;
mod diagram;
mod expr;
mod propagate;

use alloc::string::String;
use thiserror::Error;

use crate::mat2::Mat2Error;
use crate::rational::RationalError;

pub(crate) use closed_form::ends_unchecked as closed_form_ends;
pub use closed_form::{
    ends_closed_form, linear_transfer, mat_b, mat_c, pair_transfer, transfer_weight, EndMatrices,
    Transfer,
};
pub use diagram::{
    build_diagram, build_montesinos_diagram, build_rational_diagram, Block, Corner, Crossing,
    Diagram, DirectedArc, Ends, Generators, Join, JoinKind,
};
pub use expr::{parse_montesinos, parse_tangle, Parsed, TangleExpr};
pub use propagate::{propagate, propagate_block, propagate_montesinos, RepAssignment};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TangleError {
    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error(transparent)]
    Rational(RationalError),
    #[error(transparent)]
    Matrix(Mat2Error),
    #[error("expression is not a rational tangle")]
    NotRational,
    #[error("diagram has no generating pair")]
    NoGeneratingPair,
    #[error("propagation stalled with {unlabeled} unlabeled arcs")]
    PropagationOrder { unlabeled: usize },
    #[error("s + 1/s differs from -tr(XY) by {defect:e}")]
    InconsistentTrace { defect: f64 },
    #[error("bracket {{p}}_s is zero (|{{p}}_s| = {0:e})")]
    SingularBracket(f64),
}

impl From<RationalError> for TangleError {
    fn from(e: RationalError) -> Self {
        TangleError::Rational(e)
    }
}

impl From<Mat2Error> for TangleError {
    fn from(e: Mat2Error) -> Self {
        TangleError::Matrix(e)
    }
}
