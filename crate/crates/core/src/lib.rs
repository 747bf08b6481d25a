//! Exact construction and verification of solutions of the matrix equation
//! `XA - AX = f(X)` for diagonalizable `A` and polynomial `f` over the
//! rationals.
//!
//! The crate is organized bottom-up:
//!
//! * [`rational`], [`matrix`], [`poly`]: exact scalars, dense matrices,
//!   dense and factored polynomials.
//! * [`equation`]: residuals and the structural identities solutions satisfy.
//! * [`twoeig`]: solution families when `A` has two distinct eigenvalues.
//! * [`ladder`]: integer-gap chains of eigenvalues and the block-triangular
//!   shape they force on solutions of `XA - AX = X^2 - X^3`.
//! * [`polyrec`]: the polynomial recurrences behind that shape.
//! * [`dims`]: dimension counts for the solution varieties.

pub mod dims;
pub mod equation;
pub mod error;
pub mod ladder;
pub mod matrix;
pub mod poly;
pub mod polyrec;
pub mod rational;
pub mod twoeig;

pub use equation::{residual, EquationInstance, ResidualReport};
pub use error::{Error, Result};
pub use matrix::RatMatrix;
pub use poly::{DensePoly, FactoredPoly, Root};
pub use twoeig::{Regime, SolutionFamily, TwoEigInstance};
pub use rational::Rational;
