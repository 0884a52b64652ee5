//! Exact linear algebra over the rationals.
//!
//! Rows are cleared of denominators and reduced with fraction-free integer
//! elimination; each updated row is divided by the gcd of its entries so
//! intermediate integers stay small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Reduced row echelon form of an integer matrix (up to row scaling).
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .filter(|q| !q.is_zero())
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

fn remove_content(row: &mut [BigInt]) {
    let g = row
        .iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g > BigInt::one() {
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v /= &g;
            }
        }
    }
}

fn echelon(rows: &[Vec<Rational>], cols: usize) -> Echelon {
    let mut rows: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    for row in rows.iter_mut() {
        remove_content(row);
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        // Prefer the pivot with the smallest magnitude to limit growth.
        let Some(p) = (rank..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()))
        else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let a = &pivot_row[col];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let g = a.gcd(&row[col]);
            let fa = a / &g;
            let fb = &row[col] / &g;
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if pv.is_zero() {
                    if !v.is_zero() {
                        *v *= &fa;
                    }
                } else {
                    *v = &*v * &fa - &fb * pv;
                }
            }
            remove_content(row);
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    Echelon { rows, pivots }
}

/// Rank of a rational matrix.
#[allow(dead_code)]
pub fn rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    echelon(rows, cols).pivots.len()
}

/// Solves `A x = b` exactly. Returns `None` for an inconsistent system; free
/// variables of an underdetermined system are set to zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let cols = a.first().map_or(0, |r| r.len());
    let augmented: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let ech = echelon(&augmented, cols + 1);
    if ech.pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = Rational::new(row[cols].clone(), row[p].clone());
    }
    Some(x)
}

/// A basis of the right null space of `A`, one vector per free column.
pub fn nullspace(a: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let ech = echelon(a, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if !row[free].is_zero() {
                    v[p] = -Rational::new(row[free].clone(), row[p].clone());
                }
            }
            v
        })
        .collect()
}
