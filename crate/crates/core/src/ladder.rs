//! Spectrum ladders and the block structure they impose on solutions of
//! `XA - AX = X^2 - X^3`.
//!
//! Eigenvalues of `A` are grouped into maximal chains `b, b + 1, ..., b + c`
//! (ladders). No two eigenvalues from different ladders differ by exactly 1.
//! In the ordering that lists each ladder from its top rung `b + c` down to
//! `b`, every solution is block diagonal across ladders and block upper
//! triangular inside each ladder, with diagonal blocks `Y` satisfying
//! `Y^2 = Y^3`.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use crate::equation::{block_poly_operator, EquationInstance};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::poly::{DensePoly, FactoredPoly};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rung {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ladder {
    #[serde(with = "rational::serde_str")]
    pub base: Rational,
    pub height: usize,
    /// Top rung first.
    pub rungs: Vec<Rung>,
}

impl Ladder {
    pub fn size(&self) -> usize {
        self.rungs.iter().map(|r| r.multiplicity).sum()
    }

    /// Eigenvalues in ladder order, repeated by multiplicity.
    pub fn values(&self) -> Vec<Rational> {
        self.rungs
            .iter()
            .flat_map(|r| std::iter::repeat(r.value.clone()).take(r.multiplicity))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderPartition {
    pub ladders: Vec<Ladder>,
    /// `permutation[j]` is the input index placed at position `j`.
    pub permutation: Vec<usize>,
}

impl LadderPartition {
    pub fn ordered_values(&self) -> Vec<Rational> {
        self.ladders.iter().flat_map(Ladder::values).collect()
    }

    /// `(ladder index, rung position)` for every position in the ordering.
    fn position_labels(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.permutation.len());
        for (li, l) in self.ladders.iter().enumerate() {
            for (ri, r) in l.rungs.iter().enumerate() {
                out.extend(std::iter::repeat((li, ri)).take(r.multiplicity));
            }
        }
        out
    }
}

pub fn partition_spectrum(values: &[Rational]) -> LadderPartition {
    // fractional part -> value -> input indices
    let mut classes: BTreeMap<Rational, BTreeMap<Rational, Vec<usize>>> = BTreeMap::new();
    for (i, v) in values.iter().enumerate() {
        let frac = v - v.floor();
        classes
            .entry(frac)
            .or_default()
            .entry(v.clone())
            .or_default()
            .push(i);
    }

    let mut runs: Vec<Vec<(Rational, Vec<usize>)>> = Vec::new();
    for class in classes.into_values() {
        let mut current: Vec<(Rational, Vec<usize>)> = Vec::new();
        for (v, idx) in class {
            if let Some((last, _)) = current.last() {
                if &v - last != Rational::one() {
                    runs.push(std::mem::take(&mut current));
                }
            }
            current.push((v, idx));
        }
        if !current.is_empty() {
            runs.push(current);
        }
    }
    runs.sort_by(|a, b| a[0].0.cmp(&b[0].0));

    let mut ladders = Vec::with_capacity(runs.len());
    let mut permutation = Vec::with_capacity(values.len());
    for run in runs {
        let base = run[0].0.clone();
        let height = run.len() - 1;
        let mut rungs = Vec::with_capacity(run.len());
        for (v, idx) in run.into_iter().rev() {
            rungs.push(Rung {
                value: v,
                multiplicity: idx.len(),
            });
            permutation.extend(idx);
        }
        ladders.push(Ladder { base, height, rungs });
    }
    LadderPartition {
        ladders,
        permutation,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderConformance {
    #[serde(with = "rational::serde_str")]
    pub base: Rational,
    pub block_upper_triangular: bool,
    /// One flag per rung, top first: the diagonal block satisfies `Y^2 = Y^3`.
    pub rung_certificates: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub conforms: bool,
    pub block_diagonal_across_ladders: bool,
    pub per_ladder: Vec<LadderConformance>,
}

/// Checks the ladder block structure of a solution `X` of
/// `XA - AX = X^2 - X^3`, where `A` is diagonal and already listed in the
/// partition's order.
pub fn verify_decomposition(
    a_diag: &RatMatrix,
    x: &RatMatrix,
    part: &LadderPartition,
) -> Result<DecompositionReport> {
    if !a_diag.is_diagonal() {
        return Err(Error::Precondition("A must be diagonal".into()));
    }
    if a_diag.diagonal() != part.ordered_values() {
        return Err(Error::Precondition(
            "diagonal of A is not in ladder order".into(),
        ));
    }
    let inst = EquationInstance::cubic(a_diag.clone())?;
    if !inst.is_solution(x)? {
        return Err(Error::NotASolution("XA - AX != X^2 - X^3".into()));
    }

    let labels = part.position_labels();
    let n = labels.len();
    let mut across = true;
    let mut triangular = vec![true; part.ladders.len()];
    for i in 0..n {
        for j in 0..n {
            if x[(i, j)].is_zero() {
                continue;
            }
            let ((li, ri), (lj, rj)) = (labels[i], labels[j]);
            if li != lj {
                across = false;
            } else if ri > rj {
                triangular[li] = false;
            }
        }
    }

    let cube = FactoredPoly::cubic_model().expand();
    let mut offset = 0;
    let mut per_ladder = Vec::with_capacity(part.ladders.len());
    for (li, l) in part.ladders.iter().enumerate() {
        let mut rung_certificates = Vec::with_capacity(l.rungs.len());
        for r in &l.rungs {
            let y = x.block(offset, offset, r.multiplicity, r.multiplicity);
            rung_certificates.push(cube.eval_matrix(&y)?.is_zero());
            offset += r.multiplicity;
        }
        per_ladder.push(LadderConformance {
            base: l.base.clone(),
            block_upper_triangular: triangular[li],
            rung_certificates,
        });
    }

    let conforms = across
        && per_ladder
            .iter()
            .all(|l| l.block_upper_triangular && l.rung_certificates.iter().all(|&c| c));
    Ok(DecompositionReport {
        conforms,
        block_diagonal_across_ladders: across,
        per_ladder,
    })
}

/// Reorders a diagonal `A` and a candidate `X` into ladder order, then verifies.
pub fn verify_in_ladder_order(a: &RatMatrix, x: &RatMatrix) -> Result<(LadderPartition, DecompositionReport)> {
    if !a.is_diagonal() {
        return Err(Error::Precondition("A must be diagonal".into()));
    }
    if x.shape() != a.shape() {
        return Err(Error::DimensionMismatch("X and A differ in shape".into()));
    }
    let part = partition_spectrum(&a.diagonal());
    let a_ord = a.permute_symmetric(&part.permutation);
    let x_ord = x.permute_symmetric(&part.permutation);
    let report = verify_decomposition(&a_ord, &x_ord, &part)?;
    Ok((part, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status")]
pub enum ExtendOutcome {
    Extended {
        #[serde(rename = "X")]
        x: RatMatrix,
        /// Kernel dimension summed over the block pairs at each distance `1, 2, ...`.
        free_dims: Vec<usize>,
    },
    Infeasible {
        distance: usize,
        /// Rung indices `(i, j)` of the offending block, counted from the bottom rung.
        rung_pair: (usize, usize),
    },
}

/// Extends diagonal blocks to a full upper block-triangular solution with
/// every free parameter set to zero.
pub fn extend_diagonal_to_solution(ladder_a: &RatMatrix, y_blocks: &[RatMatrix]) -> Result<ExtendOutcome> {
    extend_with(ladder_a, y_blocks, |_, _, dim| vec![Rational::zero(); dim])
}

/// Like [`extend_diagonal_to_solution`], but `choose(distance, (i, j), k)`
/// picks the `k` kernel coordinates for each off-diagonal block once its
/// particular solution is known. Choices at one distance feed into the
/// affine systems at larger distances.
pub fn extend_with<F>(ladder_a: &RatMatrix, y_blocks: &[RatMatrix], mut choose: F) -> Result<ExtendOutcome>
where
    F: FnMut(usize, (usize, usize), usize) -> Vec<Rational>,
{
    let values = single_ladder_blocks(ladder_a, y_blocks)?;
    let cube = FactoredPoly::cubic_model();
    let cube_dense = cube.expand();
    for (i, y) in y_blocks.iter().enumerate() {
        if !cube_dense.eval_matrix(y)?.is_zero() {
            return Err(Error::Precondition(format!("diagonal block {i} has Y^2 != Y^3")));
        }
    }

    let mut offsets = Vec::with_capacity(y_blocks.len());
    let mut acc = 0;
    for y in y_blocks {
        offsets.push(acc);
        acc += y.rows();
    }
    let height = y_blocks.len() - 1;
    let mut x = RatMatrix::block_diag(y_blocks);
    let mut free_dims = Vec::with_capacity(height);

    for d in 1..=height {
        let known = rhs_terms(&x, &cube_dense);
        let mut placed = Vec::new();
        let mut dim_total = 0;
        for a in 0..y_blocks.len() - d {
            let b = a + d;
            let (ra, rb) = (y_blocks[a].rows(), y_blocks[b].rows());
            let phi = block_poly_operator(&cube, &y_blocks[a], &y_blocks[b])?;
            let gap = &values[b] - &values[a];
            let lhs = &RatMatrix::scalar(ra * rb, &gap) - &phi;
            let c = known.block(offsets[a], offsets[b], ra, rb).vec();
            let Some(sol) = lhs.solve_affine(&c)? else {
                return Ok(ExtendOutcome::Infeasible {
                    distance: d,
                    rung_pair: (height - a, height - b),
                });
            };
            let coeffs = choose(d, (height - a, height - b), sol.kernel.len());
            if coeffs.len() != sol.kernel.len() {
                return Err(Error::DimensionMismatch(format!(
                    "expected {} kernel coordinates, got {}",
                    sol.kernel.len(),
                    coeffs.len()
                )));
            }
            let v = &sol.particular + &RatMatrix::combination(&sol.kernel, &coeffs, (ra * rb, 1));
            dim_total += sol.kernel.len();
            placed.push((a, b, RatMatrix::unvec(&v, ra, rb)?));
        }
        for (a, b, blk) in placed {
            x.set_block(offsets[a], offsets[b], &blk);
        }
        free_dims.push(dim_total);
    }
    Ok(ExtendOutcome::Extended { x, free_dims })
}

/// `X^2 - X^3` evaluated with the current partial `X`.
fn rhs_terms(x: &RatMatrix, cube: &DensePoly) -> RatMatrix {
    cube.eval_matrix(x).expect("square")
}

/// Validates a single-ladder diagonal `A` against the block sizes and
/// returns the rung value of each block, top rung first.
fn single_ladder_blocks(a: &RatMatrix, y_blocks: &[RatMatrix]) -> Result<Vec<Rational>> {
    if !a.is_diagonal() {
        return Err(Error::Precondition("A must be diagonal".into()));
    }
    if y_blocks.is_empty() {
        return Err(Error::Precondition("at least one diagonal block is required".into()));
    }
    let total: usize = y_blocks.iter().map(RatMatrix::rows).sum();
    if total != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "blocks cover {total} rows but A is {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let diag = a.diagonal();
    let mut values = Vec::with_capacity(y_blocks.len());
    let mut offset = 0;
    for (i, y) in y_blocks.iter().enumerate() {
        let m = y.ensure_square()?;
        if m == 0 {
            return Err(Error::DimensionMismatch(format!("block {i} is empty")));
        }
        let v = &diag[offset];
        if diag[offset..offset + m].iter().any(|e| e != v) {
            return Err(Error::Precondition(format!(
                "A is not constant on the rows of block {i}"
            )));
        }
        if let Some(prev) = values.last() {
            if prev - v != Rational::one() {
                return Err(Error::Precondition(
                    "rung values must decrease by exactly 1".into(),
                ));
            }
        }
        values.push(v.clone());
        offset += m;
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn partition_mixed_spectrum() {
        let vals = vec![int(0), int(1), int(1), int(2), frac(7, 2), frac(9, 2), int(10)];
        let part = partition_spectrum(&vals);
        assert_eq!(part.ladders.len(), 3);
        let l0 = &part.ladders[0];
        assert_eq!((l0.base.clone(), l0.height), (int(0), 2));
        assert_eq!(
            l0.rungs.iter().map(|r| r.multiplicity).collect::<Vec<_>>(),
            vec![1, 2, 1]
        );
        assert_eq!(l0.rungs[0].value, int(2));
        assert_eq!((part.ladders[1].base.clone(), part.ladders[1].height), (frac(7, 2), 1));
        assert_eq!((part.ladders[2].base.clone(), part.ladders[2].height), (int(10), 0));
        assert_eq!(part.permutation, vec![3, 1, 2, 0, 5, 4, 6]);
    }

    #[test]
    fn partition_gap_two_and_repeated() {
        let part = partition_spectrum(&[int(0), int(2)]);
        assert_eq!(part.ladders.len(), 2);
        assert!(part.ladders.iter().all(|l| l.height == 0));
        let part = partition_spectrum(&[int(1), int(1), int(1)]);
        assert_eq!(part.ladders.len(), 1);
        assert_eq!(part.ladders[0].rungs[0].multiplicity, 3);
    }

    #[test]
    fn verify_shear() {
        let a = RatMatrix::diag_ints(&[1, 0]);
        let x = RatMatrix::from_ints(&[[1, 4], [0, 1]]);
        let part = partition_spectrum(&a.diagonal());
        let rep = verify_decomposition(&a, &x, &part).unwrap();
        assert!(rep.conforms);
        assert_eq!(rep.per_ladder[0].rung_certificates, vec![true, true]);
    }

    #[test]
    fn verify_rejects_lower_shear() {
        let a = RatMatrix::diag_ints(&[1, 0]);
        let x = RatMatrix::from_ints(&[[1, 0], [4, 1]]);
        let part = partition_spectrum(&a.diagonal());
        assert!(matches!(
            verify_decomposition(&a, &x, &part),
            Err(Error::NotASolution(_))
        ));
    }

    #[test]
    fn verify_commuting_non_integer_gaps() {
        let a = RatMatrix::diag(&[int(0), frac(1, 2), frac(1, 3)]);
        let x = RatMatrix::diag_ints(&[1, 0, 1]);
        let (part, rep) = verify_in_ladder_order(&a, &x).unwrap();
        assert_eq!(part.ladders.len(), 3);
        assert!(rep.conforms);
    }

    #[test]
    fn verify_requires_ladder_order() {
        let a = RatMatrix::diag_ints(&[0, 1]);
        let part = partition_spectrum(&a.diagonal());
        assert!(matches!(
            verify_decomposition(&a, &RatMatrix::identity(2), &part),
            Err(Error::Precondition(_))
        ));
        let (_, rep) = verify_in_ladder_order(&a, &RatMatrix::from_ints(&[[1, 0], [5, 1]])).unwrap();
        assert!(rep.conforms);
    }

    #[test]
    fn extend_identity_rungs() {
        let a = RatMatrix::diag_ints(&[1, 1, 0, 0, 0]);
        let ys = [RatMatrix::identity(2), RatMatrix::identity(3)];
        match extend_diagonal_to_solution(&a, &ys).unwrap() {
            ExtendOutcome::Extended { x, free_dims } => {
                assert_eq!(free_dims, vec![6]);
                assert_eq!(x, RatMatrix::identity(5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extend_single_rung() {
        let a = RatMatrix::diag_ints(&[3, 3]);
        let y = RatMatrix::from_ints(&[[0, 1], [0, 0]]);
        match extend_diagonal_to_solution(&a, &[y.clone()]).unwrap() {
            ExtendOutcome::Extended { x, free_dims } => {
                assert_eq!(x, y);
                assert!(free_dims.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extend_zero_rungs() {
        let a = RatMatrix::diag_ints(&[1, 0]);
        let z = RatMatrix::zeros(1, 1);
        match extend_diagonal_to_solution(&a, &[z.clone(), z]).unwrap() {
            ExtendOutcome::Extended { x, free_dims } => {
                assert_eq!(free_dims, vec![0]);
                assert!(x.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extend_with_choices_solves() {
        let a = RatMatrix::diag_ints(&[2, 1, 1, 0]);
        let ys = [
            RatMatrix::identity(1),
            RatMatrix::diag_ints(&[1, 0]),
            RatMatrix::identity(1),
        ];
        let out = extend_with(&a, &ys, |_, _, k| (1..=k as i64).map(int).collect()).unwrap();
        let ExtendOutcome::Extended { x, .. } = out else {
            panic!("infeasible")
        };
        let inst = EquationInstance::cubic(a.clone()).unwrap();
        assert!(inst.is_solution(&x).unwrap());
        let part = partition_spectrum(&a.diagonal());
        assert!(verify_decomposition(&a, &x, &part).unwrap().conforms);
    }

    #[test]
    fn extend_validation() {
        let a = RatMatrix::diag_ints(&[2, 0]);
        let one = RatMatrix::identity(1);
        assert!(extend_diagonal_to_solution(&a, &[one.clone(), one.clone()]).is_err());
        let a = RatMatrix::diag_ints(&[1, 0]);
        let bad = RatMatrix::diag_ints(&[2]);
        assert!(extend_diagonal_to_solution(&a, &[bad, one.clone()]).is_err());
        assert!(extend_diagonal_to_solution(&a, &[one]).is_err());
    }
}
