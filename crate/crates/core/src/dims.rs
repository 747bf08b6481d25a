//! Dimension counts for solution varieties of `XA - AX = X^2 - X^3` with
//! `A = diag(I_p, 0_q)`.
//!
//! A matrix with `X^2 = X^3` is similar to `diag(J_2 (x k), 0_t, I_tau)`
//! with `tau = n - 2k - t`; its similarity class has dimension
//! `r_n(k, t) = 2n(t + 2k) - 6k^2 - 6kt - 2t^2`. Solutions that do not
//! commute with `A` are assembled from a class for `P`, a class for `S` and a
//! `tau_1 * tau_2` dimensional space of off-diagonal blocks `Q`. Everything
//! here is exact integer arithmetic with exhaustive maximization over the
//! Jordan data.

use num::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct JordanProfile {
    pub n: u64,
    /// Number of nilpotent `2 x 2` Jordan blocks.
    pub k: u64,
    /// Number of zero `1 x 1` blocks.
    pub t: u64,
    /// Size of the identity block.
    pub tau: u64,
}

impl JordanProfile {
    pub fn new(n: u64, k: u64, t: u64) -> Result<Self> {
        if 2 * k + t > n {
            return Err(Error::InfeasibleProfile { n, k, t });
        }
        Ok(JordanProfile {
            n,
            k,
            t,
            tau: n - 2 * k - t,
        })
    }

    pub fn from_tau(n: u64, k: u64, tau: u64) -> Result<Self> {
        match n.checked_sub(2 * k + tau) {
            Some(t) => Self::new(n, k, t),
            None => Err(Error::InfeasibleProfile { n, k, t: 0 }),
        }
    }

    pub fn class_dim(&self) -> i64 {
        let (n, k, t) = (self.n as i64, self.k as i64, self.t as i64);
        2 * n * (t + 2 * k) - 6 * k * k - 6 * k * t - 2 * t * t
    }
}

/// `r_n(k, t)`, the dimension of the similarity class of
/// `diag(J_2 (x k), 0_t, I_{n-2k-t})`.
pub fn class_dim_r(n: u64, k: u64, t: u64) -> Result<i64> {
    Ok(JordanProfile::new(n, k, t)?.class_dim())
}

/// Dimension of `{X : X^2 = 0}` in `n x n` matrices, by maximizing over the
/// number of `J_2` blocks.
pub fn nilpotent_variety_dim(n: u64) -> i64 {
    (0..=n / 2)
        .map(|k| class_dim_r(n, k, n - 2 * k).expect("feasible"))
        .max()
        .unwrap_or(0)
}

/// Dimension of `{X : X^2 = X^3}` and the first `(k, t)` (in increasing
/// lexicographic order) attaining it.
pub fn cube_variety_dim(n: u64) -> (i64, (u64, u64)) {
    let mut best = (i64::MIN, (0, 0));
    for k in 0..=n / 2 {
        for t in 0..=n - 2 * k {
            let r = class_dim_r(n, k, t).expect("feasible");
            if r > best.0 {
                best = (r, (k, t));
            }
        }
    }
    best
}

/// `floor((11p^2 + 11q^2 + 2pq) / 16)`
pub fn rho(p: u64, q: u64) -> i64 {
    let (p, q) = (p as i64, q as i64);
    Integer::div_floor(&(11 * p * p + 11 * q * q + 2 * p * q), &16)
}

/// The continuous maximum `(11p^2 + 11q^2 + 2pq) / 16` of the case-2 count.
pub fn continuous_max(p: u64, q: u64) -> Rational {
    let (p, q) = (p as i64, q as i64);
    rational::frac(11 * p * p + 11 * q * q + 2 * p * q, 16)
}

/// The continuous maximizer
/// `(k1, k2, tau1, tau2) = ((5p-q)/16, (5q-p)/16, (q+3p)/8, (3q+p)/8)`
/// when it is integral and describes feasible Jordan data.
pub fn continuous_optimum(p: u64, q: u64) -> Option<(u64, u64, u64, u64)> {
    let (pi, qi) = (p as i64, q as i64);
    let exact = |num: i64, den: i64| (num >= 0 && num % den == 0).then(|| (num / den) as u64);
    let k1 = exact(5 * pi - qi, 16)?;
    let k2 = exact(5 * qi - pi, 16)?;
    let t1 = exact(qi + 3 * pi, 8)?;
    let t2 = exact(3 * qi + pi, 8)?;
    let ok = JordanProfile::from_tau(p, k1, t1).is_ok() && JordanProfile::from_tau(q, k2, t2).is_ok();
    ok.then_some((k1, k2, t1, t2))
}

/// `r_p(k1, .) + r_q(k2, .) + tau1 * tau2` for the strata with identity
/// blocks of sizes `tau1`, `tau2`.
pub fn delta(p: u64, q: u64, k1: u64, k2: u64, tau1: u64, tau2: u64) -> Result<i64> {
    let a = JordanProfile::from_tau(p, k1, tau1)?;
    let b = JordanProfile::from_tau(q, k2, tau2)?;
    Ok(a.class_dim() + b.class_dim() + (tau1 * tau2) as i64)
}

/// For each `tau` in `0..=n`, the largest class dimension with identity
/// block `tau` and the smallest `k` attaining it.
fn best_per_tau(n: u64) -> Vec<(i64, u64)> {
    (0..=n)
        .map(|tau| {
            let m = n - tau;
            let mut best = (i64::MIN, 0);
            for k in 0..=m / 2 {
                let r = JordanProfile::from_tau(n, k, tau).expect("feasible").class_dim();
                if r > best.0 {
                    best = (r, k);
                }
            }
            best
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub p: u64,
    pub q: u64,
    pub rho: i64,
    pub nu: i64,
    /// Solutions commuting with `A`: `dim{P^2 = P^3} + dim{S^2 = S^3}`.
    pub case1_dim: i64,
    /// Largest stratum of non-commuting solutions (`tau1, tau2 >= 1`).
    pub case2_dim: i64,
    /// `(k1, k2, tau1, tau2)` attaining `case2_dim`.
    pub argmax: (u64, u64, u64, u64),
    pub in_exception_table: bool,
}

/// Computes `nu`, the dimension of the solution variety, by exhaustive
/// maximization over the Jordan data of `P` and `S`.
pub fn nu(p: u64, q: u64) -> Result<DimReport> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition("p and q must be at least 1".into()));
    }
    let case1_dim = cube_variety_dim(p).0 + cube_variety_dim(q).0;
    let bp = best_per_tau(p);
    let bq = best_per_tau(q);
    let mut case2 = (i64::MIN, (0, 0, 0, 0));
    for tau1 in 1..=p {
        let (r1, k1) = bp[tau1 as usize];
        for tau2 in 1..=q {
            let (r2, k2) = bq[tau2 as usize];
            let d = r1 + r2 + (tau1 * tau2) as i64;
            if d > case2.0 {
                case2 = (d, (k1, k2, tau1, tau2));
            }
        }
    }
    Ok(DimReport {
        p,
        q,
        rho: rho(p, q),
        nu: case1_dim.max(case2.0),
        case1_dim,
        case2_dim: case2.0,
        argmax: case2.1,
        in_exception_table: exception_table_member(p, q),
    })
}

/// Residues `(p mod 16, q mod 16)` where `nu = rho - 1`. Rows other than
/// `p = 0` and `p = 8` also hold with both residues negated.
const EXCEPTION_ROWS: [(u64, &[u64]); 9] = [
    (0, &[4, 5, 8, 11, 12]),
    (1, &[11, 12, 14, 15]),
    (2, &[2, 5, 6, 14, 15]),
    (3, &[5, 6, 8, 9]),
    (4, &[0, 8, 9, 12, 15]),
    (5, &[0, 2, 3, 15]),
    (6, &[2, 3, 6, 9, 10]),
    (7, &[9, 10, 12, 13]),
    (8, &[0, 3, 4, 12, 13]),
];

pub fn exception_table_member(p: u64, q: u64) -> bool {
    let (pm, qm) = (p % 16, q % 16);
    let neg = |x: u64| (16 - x) % 16;
    EXCEPTION_ROWS.iter().any(|&(a, bs)| {
        let signed = a != 0 && a != 8;
        bs.iter()
            .any(|&b| (pm == a && qm == b) || (signed && pm == neg(a) && qm == neg(b)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub q: u64,
    pub rho: i64,
    pub nu: i64,
    /// `nu - rho`
    pub gap: i64,
    pub in_table: bool,
}

impl From<&DimReport> for ScanRow {
    fn from(r: &DimReport) -> Self {
        ScanRow {
            p: r.p,
            q: r.q,
            rho: r.rho,
            nu: r.nu,
            gap: r.nu - r.rho,
            in_table: r.in_exception_table,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    /// Couples inside the ratio bound, ordered by `(p, q)`.
    pub rows: Vec<ScanRow>,
    /// Extra couples requested outside the ratio bound.
    pub outside: Vec<ScanRow>,
    pub exceptions: usize,
    #[serde(with = "rational::serde_str")]
    pub exception_fraction: Rational,
    /// In-ratio couples where `(gap == -1)` disagrees with table membership.
    pub table_mismatches: Vec<(u64, u64)>,
    /// In-ratio couples with `gap` outside `{0, -1}`.
    pub out_of_band: Vec<(u64, u64)>,
}

impl ScanReport {
    pub fn fraction_f64(&self) -> f64 {
        use num::ToPrimitive;
        self.exception_fraction.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn within_ratio(p: u64, q: u64, ratio: &Rational) -> bool {
    let p = Rational::from_integer(p.into());
    let q = Rational::from_integer(q.into());
    p <= ratio * &q && q <= ratio * &p
}

/// Computes `nu` and `rho` on every `1 <= p <= p_max`, `1 <= q <= q_max`
/// with `1/ratio <= p/q <= ratio`, plus any `extra` couples outside the bound.
pub fn scan(p_max: u64, q_max: u64, ratio: &Rational, extra: &[(u64, u64)]) -> Result<ScanReport> {
    if ratio < &Rational::from_integer(1.into()) {
        return Err(Error::Precondition("ratio bound must be at least 1".into()));
    }
    let cells: Vec<(u64, u64)> = (1..=p_max)
        .flat_map(|p| (1..=q_max).map(move |q| (p, q)))
        .filter(|&(p, q)| within_ratio(p, q, ratio))
        .collect();
    let rows: Vec<ScanRow> = cells
        .par_iter()
        .map(|&(p, q)| nu(p, q).map(|r| ScanRow::from(&r)))
        .collect::<Result<_>>()?;
    let outside = extra
        .iter()
        .filter(|&&(p, q)| !within_ratio(p, q, ratio))
        .map(|&(p, q)| nu(p, q).map(|r| ScanRow::from(&r)))
        .collect::<Result<_>>()?;

    let exceptions = rows.iter().filter(|r| r.gap == -1).count();
    let table_mismatches = rows
        .iter()
        .filter(|r| (r.gap == -1) != r.in_table)
        .map(|r| (r.p, r.q))
        .collect();
    let out_of_band = rows
        .iter()
        .filter(|r| r.gap != 0 && r.gap != -1)
        .map(|r| (r.p, r.q))
        .collect();
    let exception_fraction = if rows.is_empty() {
        Rational::from_integer(0.into())
    } else {
        rational::frac(exceptions as i64, rows.len() as i64)
    };
    Ok(ScanReport {
        rows,
        outside,
        exceptions,
        exception_fraction,
        table_mismatches,
        out_of_band,
    })
}
