//! Polynomial recurrences attached to eigenvectors of `A` for
//! `XA - AX = X^2 - X^3`.
//!
//! For `u` in `ker(A)` and a solution `X`,
//! `(A - sI)...(A - I) A X u = phi_s(X) X^2 (I - X)^(s+1) u`, where
//! `phi_0 = -1` and `phi_s = -x^2 phi_{s-1}' - 2x phi_{s-1} - s(x + 1) phi_{s-1}`.
//! The companion sequence `P_0 = 1`, `P_s = x^2 P_{s-1}' + (sx + 2x + s) P_{s-1}`
//! has positive coefficients, so `P_s(1) = |phi_s(1)|` never vanishes.

use num::One;
use serde::Serialize;

use crate::equation::EquationInstance;
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::poly::DensePoly;
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceRow {
    pub s: usize,
    pub p_s: DensePoly,
    pub phi_s: DensePoly,
    pub p_s_at_1: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecurrenceTable {
    pub entries: Vec<RecurrenceRow>,
}

/// Streams `(s, P_s, phi_s)` rows without bound.
#[derive(Debug, Clone)]
pub struct Recurrence {
    s: usize,
    p: DensePoly,
    phi: DensePoly,
}

impl Default for Recurrence {
    fn default() -> Self {
        Recurrence {
            s: 0,
            p: DensePoly::constant(Rational::one()),
            phi: DensePoly::constant(-Rational::one()),
        }
    }
}

impl Iterator for Recurrence {
    type Item = RecurrenceRow;

    fn next(&mut self) -> Option<RecurrenceRow> {
        let row = RecurrenceRow {
            s: self.s,
            p_s_at_1: self.p.eval(&Rational::one()),
            p_s: self.p.clone(),
            phi_s: self.phi.clone(),
        };
        self.s += 1;
        self.p = next_p(&self.p, self.s);
        self.phi = next_phi(&self.phi, self.s);
        Some(row)
    }
}

/// `x^2 P' + (sx + 2x + s) P`
fn next_p(prev: &DensePoly, s: usize) -> DensePoly {
    let s = s as i64;
    let x2 = DensePoly::from_ints(&[0, 0, 1]);
    let lin = DensePoly::from_ints(&[s, s + 2]);
    &(&x2 * &prev.derivative()) + &(&lin * prev)
}

/// `-x^2 phi' - 2x phi - s(x + 1) phi`
fn next_phi(prev: &DensePoly, s: usize) -> DensePoly {
    let s = s as i64;
    let x2 = DensePoly::from_ints(&[0, 0, 1]);
    let two_x = DensePoly::from_ints(&[0, 2]);
    let sx1 = DensePoly::from_ints(&[s, s]);
    let sum = &(&(&x2 * &prev.derivative()) + &(&two_x * prev)) + &(&sx1 * prev);
    -&sum
}

#[allow(non_snake_case)]
pub fn compute_P(s_max: usize) -> RecurrenceTable {
    RecurrenceTable {
        entries: Recurrence::default().take(s_max + 1).collect(),
    }
}

pub fn compute_phi(s_max: usize) -> Vec<DensePoly> {
    let mut out = vec![DensePoly::constant(-Rational::one())];
    for s in 1..=s_max {
        let next = next_phi(&out[s - 1], s);
        out.push(next);
    }
    out
}

/// `-phi' x^2 (1 - x) - 2 phi x (1 - x) + t phi x^2 - s phi`, for distinct `s`, `t`.
pub fn compute_psi(phi: &DensePoly, s: u64, t: u64) -> Result<DensePoly> {
    if s == t {
        return Err(Error::Precondition(format!("s and t must differ, both are {s}")));
    }
    let x2_1mx = DensePoly::from_ints(&[0, 0, 1, -1]);
    let x_1mx = DensePoly::from_ints(&[0, 1, -1]);
    let x2 = DensePoly::from_ints(&[0, 0, 1]);
    let a = -&(&phi.derivative() * &x2_1mx);
    let b = (&x_1mx * phi).scale(&int(-2));
    let c = (&x2 * phi).scale(&Rational::from_integer(t.into()));
    let d = phi.scale(&-Rational::from_integer(s.into()));
    Ok(&(&(&a + &b) + &c) + &d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rec1Check {
    pub s: usize,
    pub lhs: RatMatrix,
    pub rhs: RatMatrix,
    pub holds: bool,
}

/// Evaluates both sides of
/// `(A - sI)...(A - I) A X u = phi_s(X) X^2 (I - X)^(s+1) u`
/// for `u` in `ker(A)` and a solution `X` of `XA - AX = X^2 - X^3`.
pub fn check_rec1_identity(a: &RatMatrix, x: &RatMatrix, u: &RatMatrix, s: usize) -> Result<Rec1Check> {
    let n = a.ensure_square()?;
    if !a.is_diagonal() {
        return Err(Error::Precondition("A must be diagonal".into()));
    }
    if u.shape() != (n, 1) {
        return Err(Error::DimensionMismatch("u must be an n x 1 column".into()));
    }
    if !(a * u).is_zero() {
        return Err(Error::Precondition("u is not in ker(A)".into()));
    }
    if !EquationInstance::cubic(a.clone())?.is_solution(x)? {
        return Err(Error::NotASolution("XA - AX != X^2 - X^3".into()));
    }

    let mut lhs = a * &(x * u);
    for k in 1..=s {
        let shift = a - &RatMatrix::scalar(n, &int(k as i64));
        lhs = &shift * &lhs;
    }

    let phi = compute_phi(s).pop().expect("nonempty");
    let one_minus_x = &RatMatrix::identity(n) - x;
    let mut rhs = &one_minus_x.pow((s + 1) as u32)? * u;
    rhs = &x.pow(2)? * &rhs;
    rhs = &phi.eval_matrix(x)? * &rhs;

    Ok(Rec1Check {
        s,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

impl RecurrenceRow {
    /// `P_s` coefficients as exact integer strings, constant term first.
    pub fn p_coeff_strings(&self) -> Vec<String> {
        self.p_s.coeffs().iter().map(rational::format).collect()
    }
}
