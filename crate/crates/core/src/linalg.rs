//! Small exact linear algebra over `Z` and `Q`.
//!
//! Everything here works on dense row-major `Vec<Vec<_>>` matrices. The sizes
//! involved are the vertex counts of quivers, so no attempt is made at
//! asymptotic efficiency; what matters is that no rounding ever happens.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<i64>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .filter(|(c, _)| **c != 0)
                .map(|(c, v)| v * *c)
                .sum()
        })
        .collect()
}

pub fn mat_vec_f64(a: &[Vec<i64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(c, v)| *c as f64 * v).sum())
        .collect()
}

fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|row| row.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel `{x : m x = 0}` over `Q`.
pub fn kernel(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse_rational(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Inverse of an integer matrix, if it exists over `Z`.
pub fn inverse_integer(m: &[Vec<i64>]) -> Option<IntMatrix> {
    let inv = inverse_rational(&to_rational(m))?;
    inv.iter()
        .map(|row| {
            row.iter()
                .map(|v| if v.is_integer() { v.to_integer().to_i64() } else { None })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    /// Positive semidefinite and singular; carries the nullity.
    PositiveSemidefinite(usize),
    Indefinite,
}

/// Symmetric elimination with diagonal pivots (an LDLᵀ sweep).
///
/// A negative diagonal entry of a Schur complement proves indefiniteness, and
/// so does a zero diagonal entry with a nonzero entry in its row. When only
/// zero rows remain they are all radical directions.
pub fn definiteness(sym: &[Vec<BigRational>]) -> Definiteness {
    let mut s: Vec<Vec<BigRational>> = sym.to_vec();
    let mut active: Vec<usize> = (0..s.len()).collect();
    loop {
        if active.is_empty() {
            return Definiteness::PositiveDefinite;
        }
        if active.iter().any(|&i| s[i][i].is_negative()) {
            return Definiteness::Indefinite;
        }
        match active.iter().position(|&i| s[i][i].is_positive()) {
            Some(pos) => {
                let k = active.remove(pos);
                let pivot = s[k][k].clone();
                for &i in &active {
                    let f = &s[i][k] / &pivot;
                    if f.is_zero() {
                        continue;
                    }
                    for &j in &active {
                        let d = &f * &s[k][j];
                        s[i][j] -= d;
                    }
                }
            }
            None => {
                let all_zero = active
                    .iter()
                    .all(|&i| active.iter().all(|&j| s[i][j].is_zero()));
                return if all_zero {
                    Definiteness::PositiveSemidefinite(active.len())
                } else {
                    Definiteness::Indefinite
                };
            }
        }
    }
}

/// Scale a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}
