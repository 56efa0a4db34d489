//! Acyclic quivers, classes in the Grothendieck group, and the Euler form.
//!
//! Vertices are numbered from 1 in every external format and from 0 inside
//! the crate. The Euler form of `Q` is
//!
//! ```text
//! <x, y> = sum_i x_i y_i - sum_{a: i -> j} x_i y_j
//! ```
//!
//! and its quadratic form `q(x) = <x, x>` (the Tits form) decides the type of
//! the quiver: positive definite for Dynkin, positive semidefinite with a
//! one-dimensional radical for Euclidean, indefinite otherwise.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Definiteness, IntMatrix};

/// A signed integer vector in `Z^n`: dimension vectors and classes of
/// (shifted) simples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KClass(Vec<BigInt>);

impl KClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        KClass(coords)
    }

    pub fn zero(n: usize) -> Self {
        KClass(vec![BigInt::zero(); n])
    }

    /// The `i`-th standard basis vector (0-indexed).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = 1.into();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Coordinatewise `>= 0` and not zero.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|c| !c.is_negative())
    }

    /// Coordinatewise `<= 0` and not zero.
    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|c| !c.is_positive())
    }

    /// Every coordinate nonzero.
    pub fn is_sincere(&self) -> bool {
        self.0.iter().all(|c| !c.is_zero())
    }

    pub fn scale(&self, k: &BigInt) -> KClass {
        KClass(self.0.iter().map(|c| c * k).collect())
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: &BigInt, other: &KClass) -> KClass {
        KClass(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }

    /// True when `self` is a rational multiple of `other` (zero counts).
    pub fn is_proportional(&self, other: &KClass) -> bool {
        let n = self.len();
        (0..n).all(|i| (i..n).all(|j| &self.0[i] * &other.0[j] == &self.0[j] * &other.0[i]))
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Largest coordinate bit length.
    pub fn bits(&self) -> u64 {
        self.0.iter().map(BigInt::bits).max().unwrap_or(0)
    }

    /// Sum of coordinates.
    pub fn total(&self) -> BigInt {
        self.0.iter().sum()
    }
}

impl From<Vec<i64>> for KClass {
    fn from(v: Vec<i64>) -> Self {
        KClass(v.into_iter().map(BigInt::from).collect())
    }
}

impl From<&[i64]> for KClass {
    fn from(v: &[i64]) -> Self {
        KClass(v.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl<const N: usize> From<[i64; N]> for KClass {
    fn from(v: [i64; N]) -> Self {
        KClass(v.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl Index<usize> for KClass {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        KClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &KClass {
    type Output = KClass;
    fn sub(self, rhs: &KClass) -> KClass {
        KClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        KClass(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for KClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&big_number(c))?;
        }
        seq.end()
    }
}

/// A JSON number carrying an arbitrarily large integer.
pub(crate) fn big_number(c: &BigInt) -> serde_json::Number {
    c.to_string()
        .parse()
        .expect("decimal integer is a valid JSON number")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuiverType {
    Dynkin,
    Euclidean,
    Wild,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootType {
    Real,
    Imaginary,
    None,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct QuiverDescription {
    n: usize,
    arrows: Vec<[usize; 2]>,
}

/// A finite connected acyclic quiver. Arrows are stored 0-indexed as
/// `(tail, head)`; repeated arrows encode multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    n: usize,
    arrows: Vec<(usize, usize)>,
    topo: Vec<usize>,
}

impl Quiver {
    /// Build a quiver from 1-indexed `(tail, head)` pairs.
    pub fn new(n: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Index { index: 0, n });
        }
        for &(t, h) in arrows {
            for v in [t, h] {
                if v == 0 || v > n {
                    return Err(Error::Index { index: v, n });
                }
            }
            if t == h {
                return Err(Error::Cycle(t));
            }
        }
        let arrows: Vec<(usize, usize)> = arrows.iter().map(|&(t, h)| (t - 1, h - 1)).collect();

        // Kahn's algorithm; leftover vertices sit on a cycle
        let mut indeg = vec![0usize; n];
        for &(_, h) in &arrows {
            indeg[h] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &(t, h) in &arrows {
                if t == v {
                    indeg[h] -= 1;
                    if indeg[h] == 0 {
                        queue.push_back(h);
                    }
                }
            }
        }
        if topo.len() < n {
            let v = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
            return Err(Error::Cycle(v + 1));
        }

        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(t, h) in &arrows {
                let w = if t == v {
                    h
                } else if h == v {
                    t
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }

        Ok(Quiver { n, arrows, topo })
    }

    /// The `l`-Kronecker quiver `1 => 2` with `l` parallel arrows.
    pub fn kronecker(l: usize) -> Self {
        Quiver::new(2, &vec![(1, 2); l]).expect("Kronecker quiver is valid")
    }

    /// Parse `{"n": int, "arrows": [[tail, head], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let d: QuiverDescription =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let arrows: Vec<(usize, usize)> = d.arrows.iter().map(|a| (a[0], a[1])).collect();
        Quiver::new(d.n, &arrows)
    }

    pub fn to_json(&self) -> String {
        let d = QuiverDescription {
            n: self.n,
            arrows: self.arrows.iter().map(|&(t, h)| [t + 1, h + 1]).collect(),
        };
        serde_json::to_string(&d).expect("serializable")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Arrows as 0-indexed `(tail, head)`.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Vertices ordered so that every arrow points forward.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// `a[i][j]` = number of arrows `i -> j`.
    pub fn arrow_counts(&self) -> IntMatrix {
        let mut a = vec![vec![0i64; self.n]; self.n];
        for &(t, h) in &self.arrows {
            a[t][h] += 1;
        }
        a
    }

    /// `E` with `<x, y> = xᵀ E y`.
    pub fn euler_matrix(&self) -> IntMatrix {
        let mut e = linalg::identity(self.n);
        for &(t, h) in &self.arrows {
            e[t][h] -= 1;
        }
        e
    }

    /// `E + Eᵀ`, i.e. twice the symmetrized Tits form.
    pub fn symmetric_form(&self) -> IntMatrix {
        let e = self.euler_matrix();
        (0..self.n)
            .map(|i| (0..self.n).map(|j| e[i][j] + e[j][i]).collect())
            .collect()
    }

    fn check_len(&self, x: &KClass) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        Ok(())
    }

    pub fn euler_form(&self, x: &KClass, y: &KClass) -> Result<BigInt> {
        self.check_len(x)?;
        self.check_len(y)?;
        let diag: BigInt = x.0.iter().zip(&y.0).map(|(a, b)| a * b).sum();
        let arrows: BigInt = self.arrows.iter().map(|&(t, h)| &x.0[t] * &y.0[h]).sum();
        Ok(diag - arrows)
    }

    pub fn tits_form(&self, x: &KClass) -> Result<BigInt> {
        self.euler_form(x, x)
    }

    pub fn classify_type(&self) -> QuiverType {
        let sym = to_rational(&self.symmetric_form());
        match linalg::definiteness(&sym) {
            Definiteness::PositiveDefinite => QuiverType::Dynkin,
            Definiteness::PositiveSemidefinite(1) => QuiverType::Euclidean,
            _ => QuiverType::Wild,
        }
    }

    /// The positive primitive generator `δ` of the radical of the Tits form.
    pub fn radical_delta(&self) -> Result<KClass> {
        if self.classify_type() != QuiverType::Euclidean {
            return Err(Error::NotEuclidean);
        }
        let kernel = linalg::kernel(&to_rational(&self.symmetric_form()));
        let v = linalg::primitive_integer(&kernel[0]);
        let delta = if v.iter().any(Signed::is_negative) {
            KClass(v.into_iter().map(|c| -c).collect())
        } else {
            KClass(v)
        };
        if !delta.is_sincere() || !delta.is_positive() {
            return Err(Error::Invariant(format!("radical generator {delta} is not positive")));
        }
        Ok(delta)
    }

    pub fn root_type(&self, x: &KClass) -> Result<RootType> {
        self.check_len(x)?;
        if self.classify_type() != QuiverType::Euclidean {
            return Err(Error::NotEuclidean);
        }
        if x.is_zero() {
            return Err(Error::ZeroClass);
        }
        let q = self.tits_form(x)?;
        Ok(if q == BigInt::from(1) {
            RootType::Real
        } else if q.is_zero() {
            RootType::Imaginary
        } else {
            RootType::None
        })
    }
}

fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
        .collect()
}
