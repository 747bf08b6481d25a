//! The equation `XA - AX = f(X)`: residuals, the off-diagonal block operator,
//! and checkers for the structural identities satisfied by its solutions.

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::poly::{DensePoly, FactoredPoly};
use crate::rational::{self, Rational};

/// A square matrix `A`, the polynomial `f`, and optionally a basis in which
/// `A` is diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationInstance {
    a: RatMatrix,
    f: FactoredPoly,
    diagonalizer: Option<RatMatrix>,
    diagonal: Option<Vec<Rational>>,
}

impl EquationInstance {
    pub fn new(a: RatMatrix, f: FactoredPoly) -> Result<Self> {
        a.ensure_square()?;
        let diagonal = a.is_diagonal().then(|| a.diagonal());
        Ok(EquationInstance {
            a,
            f,
            diagonalizer: None,
            diagonal,
        })
    }

    /// Attaches an invertible `B` with `B^-1 A B` diagonal.
    pub fn with_diagonalizer(mut self, b: RatMatrix) -> Result<Self> {
        if b.shape() != self.a.shape() {
            return Err(Error::DimensionMismatch("diagonalizer shape differs from A".into()));
        }
        let d = &(&b.inverse()? * &self.a) * &b;
        if !d.is_diagonal() {
            return Err(Error::Precondition(
                "supplied basis does not diagonalize A".into(),
            ));
        }
        self.diagonal = Some(d.diagonal());
        self.diagonalizer = Some(b);
        Ok(self)
    }

    /// `XA - AX = X^2 - X^3`.
    pub fn cubic(a: RatMatrix) -> Result<Self> {
        Self::new(a, FactoredPoly::cubic_model())
    }

    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn f(&self) -> &FactoredPoly {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn diagonalizer(&self) -> Option<&RatMatrix> {
        self.diagonalizer.as_ref()
    }

    /// Eigenvalues of `A` in diagonal-basis order, when known.
    pub fn eigenvalues(&self) -> Option<&[Rational]> {
        self.diagonal.as_deref()
    }

    fn check_size(&self, x: &RatMatrix) -> Result<()> {
        if x.shape() != self.a.shape() {
            return Err(Error::DimensionMismatch(format!(
                "X is {}x{} but A is {}x{}",
                x.rows(),
                x.cols(),
                self.n(),
                self.n()
            )));
        }
        Ok(())
    }

    /// `XA - AX - f(X)`
    pub fn residual_matrix(&self, x: &RatMatrix) -> Result<RatMatrix> {
        self.check_size(x)?;
        let fx = self.f.expand().eval_matrix(x)?;
        Ok(&(&(x * &self.a) - &(&self.a * x)) - &fx)
    }

    pub fn is_solution(&self, x: &RatMatrix) -> Result<bool> {
        Ok(self.residual_matrix(x)?.is_zero())
    }

    fn require_solution(&self, x: &RatMatrix) -> Result<()> {
        if self.is_solution(x)? {
            Ok(())
        } else {
            Err(Error::NotASolution("XA - AX != f(X)".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualReport {
    pub residual: RatMatrix,
    pub is_solution: bool,
    pub f_of_x_nilpotent: bool,
    /// Smallest `k <= n` with `f(X)^k = 0`.
    pub nilpotency_index: Option<usize>,
}

pub fn residual(inst: &EquationInstance, x: &RatMatrix) -> Result<ResidualReport> {
    let residual = inst.residual_matrix(x)?;
    let n = inst.n();
    let fx = inst.f.expand().eval_matrix(x)?;
    let mut power = RatMatrix::identity(n);
    let mut nilpotency_index = None;
    for k in 1..=n {
        power = &power * &fx;
        if power.is_zero() {
            nilpotency_index = Some(k);
            break;
        }
    }
    Ok(ResidualReport {
        is_solution: residual.is_zero(),
        residual,
        f_of_x_nilpotent: n == 0 || nilpotency_index.is_some(),
        nilpotency_index,
    })
}

/// Matrix (column-stacking convention) of the linear map
/// `Q -> sum_k a_k sum_{i+j=k-1} P^i Q S^j`, which is the upper-right block of
/// `f([[P, Q], [0, S]])`. Its size is `pq x pq`.
pub fn block_poly_operator(f: &FactoredPoly, p: &RatMatrix, s: &RatMatrix) -> Result<RatMatrix> {
    block_poly_operator_dense(&f.expand(), p, s)
}

pub fn block_poly_operator_dense(f: &DensePoly, p: &RatMatrix, s: &RatMatrix) -> Result<RatMatrix> {
    let pn = p.ensure_square()?;
    let qn = s.ensure_square()?;
    let deg = f.degree().unwrap_or(0);
    let mut p_pows = vec![RatMatrix::identity(pn)];
    let mut st_pows = vec![RatMatrix::identity(qn)];
    let st = s.transpose();
    for i in 1..deg {
        p_pows.push(&p_pows[i - 1] * p);
        st_pows.push(&st_pows[i - 1] * &st);
    }
    let mut out = RatMatrix::zeros(pn * qn, pn * qn);
    for (k, a) in f.coeffs().iter().enumerate().skip(1) {
        if a.is_zero() {
            continue;
        }
        for i in 0..k {
            let j = k - 1 - i;
            out = &out + &st_pows[j].kron(&p_pows[i]).scale(a);
        }
    }
    Ok(out)
}

/// Checks `P(X)A - AP(X) = P'(X) X^p g(X)` for a solution of
/// `XA - AX = X^p g(X)` with `p >= 2`.
pub fn check_poly_commutator(
    a: &RatMatrix,
    x: &RatMatrix,
    poly: &DensePoly,
    p_exp: u32,
    g: &DensePoly,
) -> Result<bool> {
    if p_exp < 2 {
        return Err(Error::Precondition(format!("exponent must be >= 2, got {p_exp}")));
    }
    let n = a.ensure_square()?;
    if x.shape() != a.shape() {
        return Err(Error::DimensionMismatch("X and A differ in shape".into()));
    }
    let rhs_poly = &DensePoly::monomial(Rational::from_integer(1.into()), p_exp as usize) * g;
    let rhs_eq = rhs_poly.eval_matrix(x)?;
    if &(x * a) - &(a * x) != rhs_eq {
        return Err(Error::NotASolution("XA - AX != X^p g(X)".into()));
    }
    let px = poly.eval_matrix(x)?;
    let lhs = &(&px * a) - &(a * &px);
    let rhs = &poly.derivative().eval_matrix(x)? * &rhs_eq;
    debug_assert_eq!(lhs.rows(), n);
    Ok(lhs == rhs)
}

/// Checks that `ker(X^k)` is invariant under `A`.
pub fn check_kernel_invariance(inst: &EquationInstance, x: &RatMatrix, k: u32) -> Result<bool> {
    let (p, _) = inst.f.split_zero_power();
    if p < 2 {
        return Err(Error::Precondition(
            "f must have 0 as a root of multiplicity >= 2".into(),
        ));
    }
    inst.require_solution(x)?;
    let basis = x.pow(k)?.nullspace();
    Ok(basis
        .iter()
        .all(|b| RatMatrix::in_span(&basis, &(inst.a() * b))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionSupport {
    /// Eigenvalues of `A` on whose eigenspaces `Xu` has a nonzero component.
    #[serde(serialize_with = "ser_rats")]
    pub support: Vec<Rational>,
    /// Smallest `s >= 0` such that `lambda + s` is not an eigenvalue of `A`.
    pub s: u64,
    /// Support is contained in `{lambda, ..., lambda + s - 1}`.
    pub passes: bool,
}

fn ser_rats<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::format))
}

/// Decomposes `Xu` over the eigenspaces of `A` for an eigenvector `u` of
/// eigenvalue `lambda`, and checks that only eigenvalues `lambda + i` with
/// `0 <= i < s` occur.
pub fn check_eigen_support(
    inst: &EquationInstance,
    x: &RatMatrix,
    lambda: &Rational,
    u: &RatMatrix,
) -> Result<DecompositionSupport> {
    let eig = inst.eigenvalues().ok_or_else(|| {
        Error::Precondition("A must be diagonal or come with a diagonalizer".into())
    })?;
    if u.shape() != (inst.n(), 1) {
        return Err(Error::DimensionMismatch("u must be an n x 1 column".into()));
    }
    if u.is_zero() || inst.a() * u != u.scale(lambda) {
        return Err(Error::Precondition(format!(
            "u is not an eigenvector of A for {}",
            rational::format(lambda)
        )));
    }
    inst.require_solution(x)?;

    let xu = x * u;
    let coords = match inst.diagonalizer() {
        Some(b) => &b.inverse()? * &xu,
        None => xu,
    };
    let mut support: Vec<Rational> = eig
        .iter()
        .zip(coords.entries())
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, _)| e.clone())
        .collect();
    support.sort();
    support.dedup();

    let mut s = 0u64;
    while eig.contains(&(lambda + Rational::from_integer(s.into()))) {
        s += 1;
    }
    let passes = support.iter().all(|v| {
        let d = v - lambda;
        rational::is_nonneg_integer(&d) && d < Rational::from_integer(s.into())
    });
    Ok(DecompositionSupport { support, s, passes })
}
