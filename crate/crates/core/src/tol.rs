//! Default numeric tolerances.
//!
//! The underlying identities are exact; these values only bound floating
//! point defects. All of them can be overridden by callers.

/// End-to-end verification of an emitted representation.
pub const VERIFY: f64 = 1e-8;

/// Construction-level identities (propagation, closed forms).
pub const CONSTRUCTION: f64 = 1e-10;

/// Algebraic identities between special matrices.
pub const IDENTITY: f64 = 1e-12;

/// `{k}_s` uses `k s^{k-1}` when `|s -+ 1|` is below this.
pub const BRACKET_DEGENERATE: f64 = 1e-12;

/// `{k}_s` switches from the quotient formula to the explicit sum below
/// this distance from `+-1`, avoiding cancellation in `s - 1/s`.
pub const BRACKET_POLYNOMIAL: f64 = 1e-6;

/// Magnitude under which a scalar counts as zero in pivot/branch decisions.
pub const ZERO: f64 = 1e-9;
