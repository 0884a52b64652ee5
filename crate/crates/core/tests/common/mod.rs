//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use nodalcone::polyalg::{monomials_of_degree, OrthogonalAffineMap, Polynomial};
use nodalcone::Rational;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Homogeneous polynomial of degree `d` with up to `terms` monomials and
/// nonzero integer coefficients in `[−5, 5]`.
pub fn random_homogeneous<R: Rng>(rng: &mut R, n: usize, d: u32, terms: usize) -> Polynomial {
    let monos = monomials_of_degree(n, d);
    loop {
        let picked: Vec<_> = monos.choose_multiple(rng, terms.min(monos.len())).cloned().collect();
        let p = Polynomial::from_terms(
            n,
            picked.into_iter().map(|e| {
                let mut c = 0;
                while c == 0 {
                    c = rng.random_range(-5..=5);
                }
                (e, Rational::from_integer(c.into()))
            }),
        )
        .unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// Rotation by a Pythagorean angle in the `(i, j)` coordinate plane.
pub fn plane_rotation(n: usize, i: usize, j: usize, (a, b, c): (i64, i64, i64)) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|r| (0..n).map(|s| if r == s { q(1, 1) } else { q(0, 1) }).collect())
        .collect();
    m[i][i] = q(a, c);
    m[j][j] = q(a, c);
    m[i][j] = q(-b, c);
    m[j][i] = q(b, c);
    m
}

fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

/// Random rotation with rational entries (product of Pythagorean plane
/// rotations).
pub fn rational_rotation<R: Rng>(rng: &mut R, n: usize) -> OrthogonalAffineMap {
    let mut m = plane_rotation(n, 0, 1, *TRIPLES.choose(rng).unwrap());
    for _ in 0..n.saturating_sub(1) {
        let i = rng.random_range(0..n);
        let j = (i + rng.random_range(1..n)) % n;
        m = matmul(&m, &plane_rotation(n, i, j, *TRIPLES.choose(rng).unwrap()));
    }
    OrthogonalAffineMap::exact(m, vec![q(0, 1); n]).unwrap()
}
