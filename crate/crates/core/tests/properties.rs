mod common;

use std::collections::BTreeMap;

use comeq::equation::{self, block_poly_operator, check_poly_commutator};
use comeq::ladder::{self, partition_spectrum, ExtendOutcome};
use comeq::polyrec;
use comeq::twoeig::{self, TwoEigInstance};
use comeq::rational::{frac, int};
use comeq::{DensePoly, EquationInstance, FactoredPoly, RatMatrix, Rational, Root};
use num::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| frac(n, d))
}

/// Entries drawn mostly from {-1, 0, 1} so rank deficiency is common.
fn sparse_rat() -> impl Strategy<Value = Rational> {
    prop_oneof![
        3 => (-1i64..=1).prop_map(int),
        1 => small_rat(),
    ]
}

fn matrix(rows: usize, cols: usize, entry: BoxedStrategy<Rational>) -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec(entry, rows * cols)
        .prop_map(move |data| RatMatrix::new(rows, cols, data).unwrap())
}

fn any_matrix(max: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| matrix(r, c, sparse_rat().boxed()))
}

fn square(n: usize) -> impl Strategy<Value = RatMatrix> {
    matrix(n, n, small_rat().boxed())
}

fn factored_poly() -> impl Strategy<Value = FactoredPoly> {
    (
        proptest::sample::subsequence(vec![-2i64, -1, 0, 1, 2, 3], 1..=3),
        proptest::collection::vec(1u32..=2, 3),
        prop_oneof![Just(1i64), Just(-1), Just(2)],
    )
        .prop_map(|(roots, mults, lead)| {
            let roots: Vec<Root> = roots
                .into_iter()
                .zip(mults)
                .map(|(r, m)| Root { root: int(r), mult: m })
                .collect();
            FactoredPoly::new(int(lead), roots).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nullspace_is_kernel_basis(m in any_matrix(5)) {
        let basis = m.nullspace();
        for v in &basis {
            prop_assert!((&m * v).is_zero());
        }
        prop_assert_eq!(m.rank() + basis.len(), m.cols());
        prop_assert_eq!(RatMatrix::hstack(&basis).rank(), basis.len());
    }

    #[test]
    fn vec_of_product_is_kron(
        (a, x, b) in (1usize..=3, 1usize..=3, 1usize..=3, 1usize..=3)
            .prop_flat_map(|(r, k, l, c)| (
                matrix(r, k, small_rat().boxed()),
                matrix(k, l, small_rat().boxed()),
                matrix(l, c, small_rat().boxed()),
            ))
    ) {
        let lhs = (&(&a * &x) * &b).vec();
        let rhs = &b.transpose().kron(&a) * &x.vec();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unvec_inverts_vec(m in any_matrix(4)) {
        prop_assert_eq!(RatMatrix::unvec(&m.vec(), m.rows(), m.cols()).unwrap(), m);
    }

    #[test]
    fn expand_vanishes_at_roots(f in factored_poly()) {
        let dense = f.expand();
        prop_assert_eq!(dense.degree(), Some(f.degree()));
        prop_assert_eq!(dense.coeffs().last().unwrap(), f.lead());
        for r in f.roots() {
            prop_assert!(dense.eval(&r.root).is_zero());
            prop_assert_eq!(f.eval(&r.root), Rational::zero());
        }
    }

    #[test]
    fn block_operator_matches_direct_evaluation(
        f in factored_poly(),
        (p, s, q) in (1usize..=3, 1usize..=3)
            .prop_flat_map(|(pn, qn)| (square(pn), square(qn), matrix(pn, qn, small_rat().boxed())))
    ) {
        let m = block_poly_operator(&f, &p, &s).unwrap();
        let via_operator = RatMatrix::unvec(&(&m * &q.vec()), p.rows(), s.rows()).unwrap();
        let zero = RatMatrix::zeros(s.rows(), p.rows());
        let big = RatMatrix::from_blocks(&p, &q, &zero, &s).unwrap();
        let fx = f.expand().eval_matrix(&big).unwrap();
        prop_assert_eq!(via_operator, fx.block(0, p.rows(), p.rows(), s.rows()));
    }

    #[test]
    fn block_operator_spectrum_on_diagonal_roots(
        f in factored_poly(),
        picks in proptest::collection::vec(0usize..6, 2..=6),
        split in 1usize..=5,
    ) {
        let roots: Vec<Rational> = f.roots().iter().map(|r| r.root.clone()).collect();
        let vals: Vec<Rational> = picks.iter().map(|&i| roots[i % roots.len()].clone()).collect();
        let split = split.min(vals.len() - 1).max(1);
        let p = RatMatrix::diag(&vals[..split]);
        let s = RatMatrix::diag(&vals[split..]);
        let m = block_poly_operator(&f, &p, &s).unwrap();
        prop_assert!(m.is_diagonal());
        let crit = f.critical_set();
        let df = f.expand().derivative();
        let dense = f.expand();
        // column-stacking: position j * p + i holds the divided difference f[alpha_i, beta_j]
        for (j, beta) in s.diagonal().iter().enumerate() {
            for (i, alpha) in p.diagonal().iter().enumerate() {
                let got = &m[(j * p.rows() + i, j * p.rows() + i)];
                let expected = if alpha == beta {
                    df.eval(alpha)
                } else {
                    (dense.eval(alpha) - dense.eval(beta)) / (alpha - beta)
                };
                prop_assert_eq!(got, &expected);
                prop_assert!(got.is_zero() || crit.contains(got));
            }
        }
    }

    #[test]
    fn partition_is_a_partition(
        vals in proptest::collection::vec((-4i64..=4, prop_oneof![Just(1i64), Just(2), Just(3)]), 0..12)
    ) {
        let values: Vec<Rational> = vals.iter().map(|&(n, d)| frac(n, d)).collect();
        let part = partition_spectrum(&values);

        let mut perm = part.permutation.clone();
        perm.sort_unstable();
        prop_assert_eq!(perm, (0..values.len()).collect::<Vec<_>>());
        let reordered: Vec<Rational> = part.permutation.iter().map(|&i| values[i].clone()).collect();
        prop_assert_eq!(&reordered, &part.ordered_values());

        let mut count: BTreeMap<Rational, usize> = BTreeMap::new();
        for v in &values {
            *count.entry(v.clone()).or_default() += 1;
        }
        for l in &part.ladders {
            prop_assert_eq!(l.rungs.len(), l.height + 1);
            for (i, r) in l.rungs.iter().enumerate() {
                prop_assert!(r.multiplicity >= 1);
                prop_assert_eq!(&r.value, &(&l.base + int((l.height - i) as i64)));
                prop_assert_eq!(count[&r.value], r.multiplicity);
            }
        }
        for (a, la) in part.ladders.iter().enumerate() {
            for (b, lb) in part.ladders.iter().enumerate() {
                if a == b { continue; }
                for u in &la.rungs {
                    for v in &lb.rungs {
                        prop_assert!(&u.value - &v.value != Rational::one());
                    }
                }
            }
        }
        let bases: Vec<_> = part.ladders.iter().map(|l| l.base.clone()).collect();
        let mut sorted = bases.clone();
        sorted.sort();
        prop_assert_eq!(bases, sorted);
    }

    #[test]
    fn psi_value_at_one(phi in proptest::collection::vec(small_rat(), 1..6), s in 0u64..20, t in 0u64..20) {
        prop_assume!(s != t);
        let phi = DensePoly::new(phi);
        let psi = polyrec::compute_psi(&phi, s, t).unwrap();
        let diff = Rational::from_integer(t.into()) - Rational::from_integer(s.into());
        prop_assert_eq!(psi.eval(&Rational::one()), diff * phi.eval(&Rational::one()));
    }

    #[test]
    fn random_solutions_satisfy_structure(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let sol = common::random_cubic_solution(&mut rng, 3);
        let inst = EquationInstance::cubic(sol.a.clone()).unwrap();
        let rep = equation::residual(&inst, &sol.x).unwrap();
        prop_assert!(rep.is_solution);
        prop_assert!(rep.f_of_x_nilpotent);
        let n = sol.p + sol.q;
        let x2 = sol.x.pow(2).unwrap();
        let ix = &RatMatrix::identity(n) - &sol.x;
        prop_assert!((&x2 * &ix.pow(n as u32).unwrap()).is_zero());
        for k in 0..=n as u32 {
            prop_assert!(equation::check_kernel_invariance(&inst, &sol.x, k).unwrap());
        }
        let g = DensePoly::from_ints(&[1, -1]);
        let poly = common::random_poly(&mut rng, 5);
        prop_assert!(check_poly_commutator(&sol.a, &sol.x, &poly, 2, &g).unwrap());
    }

    #[test]
    fn extend_round_trip(
        profiles in proptest::collection::vec((0usize..=1, 0usize..=2, 0usize..=2), 2..=3),
        seed in any::<u64>(),
    ) {
        let blocks: Vec<RatMatrix> = profiles
            .iter()
            .map(|&(k, t, tau)| if 2 * k + t + tau == 0 { common::jordan_model(0, 0, 1) } else { common::jordan_model(k, t, tau) })
            .collect();
        let h = blocks.len() as i64 - 1;
        let mut diag = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            diag.extend(std::iter::repeat(int(h - i as i64)).take(b.rows()));
        }
        let a = RatMatrix::diag(&diag);
        let mut rng = StdRng::seed_from_u64(seed);
        let out = ladder::extend_with(&a, &blocks, |_, _, k| common::rand_rats(&mut rng, k)).unwrap();
        // At distance d the block system is (-d) Q - Phi(Q) = C with Phi having
        // eigenvalues in {0, -1}; it is singular only for d = 1, where C = 0.
        let ExtendOutcome::Extended { x, free_dims } = out else {
            return Err(TestCaseError::fail("unexpected infeasible extension"));
        };
        prop_assert_eq!(free_dims.len(), blocks.len() - 1);
        prop_assert!(free_dims[1..].iter().all(|&d| d == 0));
        let inst = EquationInstance::cubic(a.clone()).unwrap();
        prop_assert!(inst.is_solution(&x).unwrap());
        let part = partition_spectrum(&a.diagonal());
        prop_assert!(ladder::verify_decomposition(&a, &x, &part).unwrap().conforms);
    }
}

#[test]
fn singleton_ladder_confines_support() {
    // mu - lambda = 1/2 is not an integer: every eigenvalue is its own ladder.
    let inst = TwoEigInstance::new(2, 2, frac(1, 2), int(0), FactoredPoly::cubic_model()).unwrap();
    assert_eq!(twoeig::classify(&inst), twoeig::Regime::TrivialOnly);
    let eq = inst.equation();
    let mut rng = StdRng::seed_from_u64(11);
    for (p, s) in twoeig::enumerate_diagonal_ps(&inst, 1000).unwrap() {
        for (pm, sm) in [
            (p.clone(), s.clone()),
            (common::jordan_model(1, 0, 0), s.clone()),
            (p.clone(), common::jordan_model(1, 0, 0)),
        ] {
            let fam = twoeig::solve_triangular(&inst, &pm, &sm).unwrap();
            assert!(fam.q_basis.is_empty() && fam.r_basis.is_empty());
            let x = fam.member(&[], &[]).unwrap().x;
            for lambda in [frac(1, 2), int(0)] {
                let u = common::random_eigenvector(&mut rng, &inst.a(), &lambda).unwrap();
                let rep = equation::check_eigen_support(&eq, &x, &lambda, &u).unwrap();
                assert_eq!(rep.s, 1);
                assert!(rep.passes);
                assert!(rep.support.iter().all(|v| v == &lambda));
            }
        }
    }
}

#[test]
fn degenerate_and_triangular_q_spaces_agree() {
    // Any solution commutes with its own f(X), which forces PQ = QS; so the
    // intertwining description of Q must span the same space as the
    // block-operator eigenspace.
    for p in 1..=3 {
        for q in 1..=3 {
            let inst = TwoEigInstance::new(p, q, int(1), int(0), FactoredPoly::cubic_model()).unwrap();
            for (pm, sm) in twoeig::enumerate_diagonal_ps(&inst, 1000).unwrap() {
                let tri = twoeig::solve_triangular(&inst, &pm, &sm).unwrap();
                let deg = twoeig::solve_degenerate(&inst, &pm, &sm).unwrap();
                assert!(deg.r_basis.is_empty());
                assert_eq!(tri.q_basis.len(), deg.q_basis.len());
                let tri_vecs: Vec<_> = tri.q_basis.iter().map(RatMatrix::vec).collect();
                for b in &deg.q_basis {
                    assert!(RatMatrix::in_span(&tri_vecs, &b.vec()));
                }
            }
        }
    }
}

#[test]
fn outputs_are_deterministic() {
    let inst = TwoEigInstance::new(3, 2, int(1), int(0), FactoredPoly::cubic_model()).unwrap();
    let run = || {
        twoeig::enumerate_diagonal_ps(&inst, 1000)
            .unwrap()
            .iter()
            .map(|(p, s)| serde_json::to_string(&twoeig::solve_triangular(&inst, p, s).unwrap()).unwrap())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
    let vals = vec![int(3), frac(1, 2), int(2), int(-1), frac(3, 2)];
    assert_eq!(partition_spectrum(&vals), partition_spectrum(&vals));
}
