//! Univariate polynomials over the rationals, in dense and factored form.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::{self, int, Rational};

/// Coefficient list, index `i` holding the coefficient of `x^i`.
/// Trailing zeros are always stripped, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "DensePolyRepr", into = "DensePolyRepr")]
pub struct DensePoly {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct DensePolyRepr {
    #[serde(with = "rational::serde_str_seq")]
    coeffs: Vec<Rational>,
}

impl TryFrom<DensePolyRepr> for DensePoly {
    type Error = Error;

    fn try_from(r: DensePolyRepr) -> Result<Self> {
        Ok(DensePoly::new(r.coeffs))
    }
}

impl From<DensePoly> for DensePolyRepr {
    fn from(p: DensePoly) -> Self {
        DensePolyRepr { coeffs: p.coeffs }
    }
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, x: &RatMatrix) -> Result<RatMatrix> {
        let n = x.ensure_square()?;
        let mut acc = RatMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &RatMatrix::scalar(n, c);
        }
        Ok(acc)
    }

    fn zip_coeffs(&self, other: &Self, f: impl Fn(Rational, Rational) -> Rational) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| f(self.coeff(i), other.coeff(i))).collect())
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;

    fn add(self, rhs: &DensePoly) -> DensePoly {
        self.zip_coeffs(rhs, |a, b| a + b)
    }
}

impl Sub for &DensePoly {
    type Output = DensePoly;

    fn sub(self, rhs: &DensePoly) -> DensePoly {
        self.zip_coeffs(rhs, |a, b| a - b)
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;

    fn mul(self, rhs: &DensePoly) -> DensePoly {
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DensePoly::new(out)
    }
}

impl Neg for &DensePoly {
    type Output = DensePoly;

    fn neg(self) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => rational::format(c),
                1 => format!("{}x", rational::format(c)),
                _ => format!("{}x^{i}", rational::format(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    #[serde(with = "rational::serde_str")]
    pub root: Rational,
    pub mult: u32,
}

/// `lead * prod (x - root)^mult` with pairwise distinct rational roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FactoredPolyRepr", into = "FactoredPolyRepr")]
pub struct FactoredPoly {
    lead: Rational,
    roots: Vec<Root>,
}

#[derive(Serialize, Deserialize)]
struct FactoredPolyRepr {
    #[serde(with = "rational::serde_str")]
    lead: Rational,
    roots: Vec<Root>,
}

impl TryFrom<FactoredPolyRepr> for FactoredPoly {
    type Error = Error;

    fn try_from(r: FactoredPolyRepr) -> Result<Self> {
        FactoredPoly::new(r.lead, r.roots)
    }
}

impl From<FactoredPoly> for FactoredPolyRepr {
    fn from(p: FactoredPoly) -> Self {
        FactoredPolyRepr {
            lead: p.lead,
            roots: p.roots,
        }
    }
}

impl FactoredPoly {
    pub fn new(lead: Rational, roots: Vec<Root>) -> Result<Self> {
        if lead.is_zero() {
            return Err(Error::Parse("leading coefficient must be nonzero".into()));
        }
        if let Some(r) = roots.iter().find(|r| r.mult == 0) {
            return Err(Error::Parse(format!(
                "root {} has zero multiplicity",
                rational::format(&r.root)
            )));
        }
        let distinct: BTreeSet<_> = roots.iter().map(|r| &r.root).collect();
        if distinct.len() != roots.len() {
            return Err(Error::Parse("roots must be pairwise distinct".into()));
        }
        Ok(FactoredPoly { lead, roots })
    }

    /// Shorthand from `(root, multiplicity)` integer pairs.
    pub fn from_int_roots(lead: i64, roots: &[(i64, u32)]) -> Result<Self> {
        Self::new(
            int(lead),
            roots
                .iter()
                .map(|&(root, mult)| Root {
                    root: int(root),
                    mult,
                })
                .collect(),
        )
    }

    /// `x^2 - x^3 = -x^2 (x - 1)`.
    pub fn cubic_model() -> Self {
        Self::from_int_roots(-1, &[(0, 2), (1, 1)]).expect("valid")
    }

    pub fn lead(&self) -> &Rational {
        &self.lead
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.mult as usize).sum()
    }

    pub fn expand(&self) -> DensePoly {
        self.roots.iter().fold(DensePoly::constant(self.lead.clone()), |acc, r| {
            let factor = DensePoly::new(vec![-r.root.clone(), Rational::one()]);
            &acc * &factor.pow(r.mult)
        })
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.roots.iter().fold(self.lead.clone(), |acc, r| {
            let mut v = acc;
            for _ in 0..r.mult {
                v *= x - &r.root;
            }
            v
        })
    }

    pub fn is_root(&self, x: &Rational) -> bool {
        self.roots.iter().any(|r| &r.root == x)
    }

    /// Nonzero values of `f'` at the roots of `f`, sorted ascending.
    pub fn critical_set(&self) -> BTreeSet<Rational> {
        let df = self.expand().derivative();
        self.roots
            .iter()
            .map(|r| df.eval(&r.root))
            .filter(|v| !v.is_zero())
            .collect()
    }

    /// Splits `f = x^p * g(x)` with `g(0) != 0`.
    pub fn split_zero_power(&self) -> (u32, DensePoly) {
        let p = self
            .roots
            .iter()
            .find(|r| r.root.is_zero())
            .map_or(0, |r| r.mult);
        let g = self
            .roots
            .iter()
            .filter(|r| !r.root.is_zero())
            .fold(DensePoly::constant(self.lead.clone()), |acc, r| {
                &acc * &DensePoly::new(vec![-r.root.clone(), Rational::one()]).pow(r.mult)
            });
        (p, g)
    }
}

pub fn critical_set(f: &FactoredPoly) -> BTreeSet<Rational> {
    f.critical_set()
}
