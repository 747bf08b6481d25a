#![allow(dead_code)]

use comeq::twoeig::{self, TwoEigInstance};
use comeq::rational::{frac, int};
use comeq::{FactoredPoly, RatMatrix, Rational};
use rand::Rng;

pub fn rand_rat<G: Rng>(rng: &mut G) -> Rational {
    frac(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

pub fn rand_rats<G: Rng>(rng: &mut G, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rand_rat(rng)).collect()
}

/// `diag(J_2 (x k), 0_t, I_tau)` with `J_2 = [[0, 1], [0, 0]]`.
pub fn jordan_model(k: usize, t: usize, tau: usize) -> RatMatrix {
    let n = 2 * k + t + tau;
    let mut m = RatMatrix::zeros(n, n);
    for b in 0..k {
        m[(2 * b, 2 * b + 1)] = int(1);
    }
    for i in 2 * k + t..n {
        m[(i, i)] = int(1);
    }
    m
}

/// Product of a random unit lower and a random unit upper triangular matrix.
pub fn random_invertible<G: Rng>(rng: &mut G, n: usize) -> RatMatrix {
    let mut l = RatMatrix::identity(n);
    let mut u = RatMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = int(rng.gen_range(-2..=2));
            u[(j, i)] = int(rng.gen_range(-2..=2));
        }
    }
    &l * &u
}

pub fn conjugate(g: &RatMatrix, x: &RatMatrix) -> RatMatrix {
    &(g * x) * &g.inverse().expect("invertible")
}

/// A random Jordan profile `(k, t, tau)` of size `n`.
pub fn random_profile<G: Rng>(rng: &mut G, n: usize) -> (usize, usize, usize) {
    let k = rng.gen_range(0..=n / 2);
    let t = rng.gen_range(0..=n - 2 * k);
    (k, t, n - 2 * k - t)
}

pub struct CubicSolution {
    pub p: usize,
    pub q: usize,
    pub a: RatMatrix,
    pub x: RatMatrix,
}

/// Random solution of `XA - AX = X^2 - X^3` with `A = diag(I_p, 0_q)`:
/// random Jordan data for `P` and `S` (possibly non-diagonal after a random
/// change of basis), a random member of the resulting `Q` family, then a
/// random change of basis commuting with `A`.
pub fn random_cubic_solution<G: Rng>(rng: &mut G, max: usize) -> CubicSolution {
    let p = rng.gen_range(1..=max);
    let q = rng.gen_range(1..=max);
    let inst = TwoEigInstance::new(p, q, int(1), int(0), FactoredPoly::cubic_model()).unwrap();
    let (k1, t1, tau1) = random_profile(rng, p);
    let (k2, t2, tau2) = random_profile(rng, q);
    let g1 = random_invertible(rng, p);
    let g2 = random_invertible(rng, q);
    let pm = conjugate(&g1, &jordan_model(k1, t1, tau1));
    let sm = conjugate(&g2, &jordan_model(k2, t2, tau2));
    let fam = twoeig::solve_triangular(&inst, &pm, &sm).unwrap();
    let coeffs = rand_rats(rng, fam.q_basis.len());
    let member = fam.member(&coeffs, &[]).unwrap();
    let h = RatMatrix::block_diag(&[random_invertible(rng, p), random_invertible(rng, q)]);
    CubicSolution {
        p,
        q,
        a: inst.a(),
        x: conjugate(&h, &member.x),
    }
}

/// Random column in `ker(A - lambda I)` for diagonal `A`.
pub fn random_eigenvector<G: Rng>(rng: &mut G, a: &RatMatrix, lambda: &Rational) -> Option<RatMatrix> {
    let d = a.diagonal();
    if !d.contains(lambda) {
        return None;
    }
    loop {
        let v: Vec<Rational> = d
            .iter()
            .map(|e| if e == lambda { rand_rat(rng) } else { int(0) })
            .collect();
        let v = RatMatrix::column(v);
        if !v.is_zero() {
            return Some(v);
        }
    }
}

/// Random polynomial of degree at most `deg`.
pub fn random_poly<G: Rng>(rng: &mut G, deg: usize) -> comeq::DensePoly {
    comeq::DensePoly::new(rand_rats(rng, deg + 1))
}
