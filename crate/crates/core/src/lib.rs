//! Tracefree SL(2,C) representations of Montesinos links.
//!
//! The crate is `no_std` (it needs `alloc`) and carries all of the
//! mathematics:
//!
//! * [`rational`]: exact continued fractions, tangle fractions, the
//!   `u`/`v` sequences and the companion pair `(p~, q~)`.
//! * [`mat2`]: the 2x2 complex kernel (`A(a)`, `D(b)`, `E(b)`, `S_a`,
//!   the bracket `{k}_s`, regular-pair normal forms).
//! * [`tangle`]: tangle expressions, crossing-level diagrams, Wirtinger
//!   style propagation and the closed-form end matrices.
//! * [`montesinos`]: the link specification `M(p_1/q_1, ..., p_r/q_r)`.
//! * [`enumerate`]: the classification of conjugacy classes into the five
//!   cases, with explicit representatives.
//! * [`verify`]: the crossing-level oracle used to check every emitted
//!   representation.
//!
//! Throughout, a tracefree matrix `X` satisfies `X^2 = -I`, so the
//! crossing rule `z = x y x^{-1}` does not depend on the orientation of the
//! over-arc, and the conventions use `s + 1/s = -tr(XY)`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod enumerate;
pub mod mat2;
pub mod montesinos;
pub mod rational;
pub mod tangle;
pub mod tol;
pub mod verify;

pub use mat2::{Mat2, TraceFreeMat, C64};
pub use montesinos::MontesinosSpec;
pub use rational::{ContinuedFraction, Fraction, TangleData};
