//! Solution families of `XA - AX = f(X)` for `A = diag(mu I_p, lambda I_q)`.
//!
//! Writing `X = [[P, Q], [R, S]]`, every solution has `f(P) = 0`, `f(S) = 0`
//! and off-diagonal blocks constrained by linear conditions. Whether nonzero
//! `Q` or `R` can occur is decided by membership of `lambda - mu` and
//! `mu - lambda` in the critical set `{f'(r) : f(r) = 0} \ {0}`.

use num::Zero;
use rand::Rng;
use serde::Serialize;

use crate::equation::{block_poly_operator, EquationInstance};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::poly::FactoredPoly;
use crate::rational::{self, Rational};

/// Upper bound on the number of `(P, S)` pairs `enumerate_diagonal_ps` will build.
pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoEigInstance {
    pub p: usize,
    pub q: usize,
    pub mu: Rational,
    pub lambda: Rational,
    pub f: FactoredPoly,
}

impl TwoEigInstance {
    pub fn new(p: usize, q: usize, mu: Rational, lambda: Rational, f: FactoredPoly) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::Precondition("p and q must be at least 1".into()));
        }
        if mu == lambda {
            return Err(Error::Precondition("mu and lambda must be distinct".into()));
        }
        Ok(TwoEigInstance { p, q, mu, lambda, f })
    }

    /// `diag(mu I_p, lambda I_q)`
    pub fn a(&self) -> RatMatrix {
        let mut d = vec![self.mu.clone(); self.p];
        d.extend(std::iter::repeat(self.lambda.clone()).take(self.q));
        RatMatrix::diag(&d)
    }

    pub fn equation(&self) -> EquationInstance {
        EquationInstance::new(self.a(), self.f.clone()).expect("A is square")
    }

    fn gap(&self) -> Rational {
        &self.lambda - &self.mu
    }

    fn check_blocks(&self, p: &RatMatrix, s: &RatMatrix) -> Result<()> {
        if p.shape() != (self.p, self.p) || s.shape() != (self.q, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "expected P {0}x{0} and S {1}x{1}",
                self.p, self.q
            )));
        }
        let f = self.f.expand();
        if !f.eval_matrix(p)?.is_zero() {
            return Err(Error::Precondition("f(P) != 0".into()));
        }
        if !f.eval_matrix(s)?.is_zero() {
            return Err(Error::Precondition("f(S) != 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// Every solution commutes with `A`.
    TrivialOnly,
    /// Solutions are block upper-triangular, and some fail to commute with `A`.
    UpperTriangular,
    /// Mirror image of `UpperTriangular`.
    LowerTriangular,
    /// Both off-diagonal blocks may be nonzero at once.
    Degenerate,
}

pub fn classify(inst: &TwoEigInstance) -> Regime {
    let crit = inst.f.critical_set();
    let up = crit.contains(&inst.gap());
    let down = crit.contains(&-inst.gap());
    match (up, down) {
        (false, false) => Regime::TrivialOnly,
        (true, false) => Regime::UpperTriangular,
        (false, true) => Regime::LowerTriangular,
        (true, true) => Regime::Degenerate,
    }
}

/// Fixed diagonal blocks `P`, `S` together with bases for the admissible
/// off-diagonal blocks `Q` (upper right) and `R` (lower left).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionFamily {
    #[serde(rename = "P")]
    pub p: RatMatrix,
    #[serde(rename = "S")]
    pub s: RatMatrix,
    #[serde(rename = "Q_basis")]
    pub q_basis: Vec<RatMatrix>,
    #[serde(rename = "R_basis")]
    pub r_basis: Vec<RatMatrix>,
    /// Members must also satisfy `QR = 0` and `RQ = 0`.
    pub bilinear_constrained: bool,
    pub dim_linear: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    #[serde(rename = "Q")]
    pub q: RatMatrix,
    #[serde(rename = "R")]
    pub r: RatMatrix,
    #[serde(rename = "X")]
    pub x: RatMatrix,
    pub bilinear_ok: bool,
}

impl SolutionFamily {
    fn new(
        p: RatMatrix,
        s: RatMatrix,
        q_basis: Vec<RatMatrix>,
        r_basis: Vec<RatMatrix>,
        bilinear_constrained: bool,
    ) -> Self {
        let dim_linear = q_basis.len() + r_basis.len();
        SolutionFamily {
            p,
            s,
            q_basis,
            r_basis,
            bilinear_constrained,
            dim_linear,
        }
    }

    /// Builds `X = [[P, Q], [R, S]]` from coordinates in the two bases.
    pub fn member(&self, q_coeffs: &[Rational], r_coeffs: &[Rational]) -> Result<FamilyMember> {
        if q_coeffs.len() != self.q_basis.len() || r_coeffs.len() != self.r_basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} Q and {} R coordinates",
                self.q_basis.len(),
                self.r_basis.len()
            )));
        }
        let (pn, qn) = (self.p.rows(), self.s.rows());
        let q = RatMatrix::combination(&self.q_basis, q_coeffs, (pn, qn));
        let r = RatMatrix::combination(&self.r_basis, r_coeffs, (qn, pn));
        let x = RatMatrix::from_blocks(&self.p, &q, &r, &self.s)?;
        let bilinear_ok = check_bilinear(&q, &r)?;
        Ok(FamilyMember { q, r, x, bilinear_ok })
    }

    /// Draws `count` members with small random rational coordinates. For
    /// bilinear-constrained families, draws violating `QR = RQ = 0` are
    /// retried and eventually replaced by a member with `R = 0`.
    pub fn sample_members<G: Rng>(&self, rng: &mut G, count: usize) -> Vec<FamilyMember> {
        const RETRIES: usize = 16;
        let draw = |n: usize, rng: &mut G| -> Vec<Rational> {
            (0..n).map(|_| random_small_rational(rng)).collect()
        };
        (0..count)
            .map(|_| {
                for _ in 0..RETRIES {
                    let qc = draw(self.q_basis.len(), rng);
                    let rc = draw(self.r_basis.len(), rng);
                    let m = self.member(&qc, &rc).expect("coordinate counts match");
                    if m.bilinear_ok {
                        return m;
                    }
                }
                let qc = draw(self.q_basis.len(), rng);
                let rc = vec![Rational::zero(); self.r_basis.len()];
                self.member(&qc, &rc).expect("coordinate counts match")
            })
            .collect()
    }
}

/// Numerator in `[-9, 9]`, denominator in `[1, 5]`.
pub fn random_small_rational<G: Rng>(rng: &mut G) -> Rational {
    rational::frac(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

/// Block-triangular families: `Q` ranges over `ker(M_Phi - (lambda - mu) I)`
/// where `M_Phi` is the upper-right block operator of `f`. In the
/// lower-triangular regime the mirrored system is solved for `R`.
pub fn solve_triangular(inst: &TwoEigInstance, p: &RatMatrix, s: &RatMatrix) -> Result<SolutionFamily> {
    inst.check_blocks(p, s)?;
    let regime = classify(inst);
    let gap = inst.gap();
    match regime {
        Regime::TrivialOnly | Regime::UpperTriangular => {
            let q_basis = eigen_blocks(&inst.f, p, s, &gap)?;
            Ok(SolutionFamily::new(p.clone(), s.clone(), q_basis, Vec::new(), false))
        }
        Regime::LowerTriangular => {
            let r_basis = eigen_blocks(&inst.f, s, p, &-gap)?;
            Ok(SolutionFamily::new(p.clone(), s.clone(), Vec::new(), r_basis, false))
        }
        Regime::Degenerate => Err(Error::Precondition(
            "both off-diagonal directions are admissible; use the degenerate solver".into(),
        )),
    }
}

/// Basis (as `rows(top) x rows(bottom)` matrices) of `{Z : Phi(Z) = c Z}` for
/// the upper-right block operator of `[[top, Z], [0, bottom]]`.
fn eigen_blocks(
    f: &FactoredPoly,
    top: &RatMatrix,
    bottom: &RatMatrix,
    c: &Rational,
) -> Result<Vec<RatMatrix>> {
    let m = block_poly_operator(f, top, bottom)?;
    let shifted = &m - &RatMatrix::scalar(m.rows(), c);
    shifted
        .nullspace()
        .iter()
        .map(|v| RatMatrix::unvec(v, top.rows(), bottom.rows()))
        .collect()
}

/// General families with both `Q` and `R` possibly nonzero:
/// `PQ = QS`, `f'(P) Q = (lambda - mu) Q`, `SR = RP`, `f'(S) R = (mu - lambda) R`.
/// Members must additionally satisfy `QR = 0` and `RQ = 0`.
pub fn solve_degenerate(inst: &TwoEigInstance, p: &RatMatrix, s: &RatMatrix) -> Result<SolutionFamily> {
    inst.check_blocks(p, s)?;
    let df = inst.f.expand().derivative();
    let gap = inst.gap();
    let q_basis = intertwining_eigen_blocks(p, s, &df.eval_matrix(p)?, &gap)?;
    let r_basis = intertwining_eigen_blocks(s, p, &df.eval_matrix(s)?, &-gap)?;
    Ok(SolutionFamily::new(p.clone(), s.clone(), q_basis, r_basis, true))
}

/// Basis of `{Z : left Z = Z right, dleft Z = c Z}` with `Z` of shape
/// `rows(left) x rows(right)`, in column-stacking form
/// `(I (x) left - right^T (x) I) vec Z = 0`, `(I (x) dleft - c I) vec Z = 0`.
fn intertwining_eigen_blocks(
    left: &RatMatrix,
    right: &RatMatrix,
    dleft: &RatMatrix,
    c: &Rational,
) -> Result<Vec<RatMatrix>> {
    let (ln, rn) = (left.rows(), right.rows());
    let i_l = RatMatrix::identity(ln);
    let i_r = RatMatrix::identity(rn);
    let commute = &i_r.kron(left) - &right.transpose().kron(&i_l);
    let eigen = &i_r.kron(dleft) - &RatMatrix::scalar(ln * rn, c);
    let mut stacked = RatMatrix::zeros(2 * ln * rn, ln * rn);
    stacked.set_block(0, 0, &commute);
    stacked.set_block(ln * rn, 0, &eigen);
    stacked
        .nullspace()
        .iter()
        .map(|v| RatMatrix::unvec(v, ln, rn))
        .collect()
}

/// Whether `QR = 0` and `RQ = 0`.
pub fn check_bilinear(q: &RatMatrix, r: &RatMatrix) -> Result<bool> {
    Ok(q.mat_mul(r)?.is_zero() && r.mat_mul(q)?.is_zero())
}

/// All diagonal `P` (`p x p`) and `S` (`q x q`) with entries among the roots
/// of `f`, one representative per multiset (nondecreasing diagonal).
pub fn enumerate_diagonal_ps(inst: &TwoEigInstance, cap: u128) -> Result<Vec<(RatMatrix, RatMatrix)>> {
    let mut roots: Vec<Rational> = inst.f.roots().iter().map(|r| r.root.clone()).collect();
    roots.sort();
    let count = multiset_count(roots.len(), inst.p).saturating_mul(multiset_count(roots.len(), inst.q));
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let ps = multisets(&roots, inst.p);
    let ss = multisets(&roots, inst.q);
    Ok(ps
        .iter()
        .flat_map(|p| ss.iter().map(move |s| (RatMatrix::diag(p), RatMatrix::diag(s))))
        .collect())
}

fn multiset_count(kinds: usize, size: usize) -> u128 {
    // C(kinds + size - 1, size)
    if kinds == 0 {
        return u128::from(size == 0);
    }
    let n = (kinds + size - 1) as u128;
    let k = size.min(kinds - 1) as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.saturating_mul(n - i) / (i + 1);
    }
    c
}

fn multisets(items: &[Rational], size: usize) -> Vec<Vec<Rational>> {
    fn go(items: &[Rational], start: usize, size: usize, cur: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, i, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, 0, size, &mut Vec::with_capacity(size), &mut out);
    out
}

/// `dim ker(M - I)` for a square matrix.
pub fn eigenspace_dim_one(m: &RatMatrix) -> usize {
    (m - &RatMatrix::identity(m.rows())).nullspace().len()
}
