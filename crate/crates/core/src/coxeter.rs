//! Cartan and Coxeter matrices, the Auslander–Reiten translate on classes,
//! defect, and Perron data for wild quivers.
//!
//! The Coxeter transformation `Φ` is the integer matrix with
//! `Φ·dim P(i) = −dim I(i)`. On dimension vectors of non-projective
//! indecomposables it computes `dim τX`.

use std::cmp::Ordering;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::charge::CentralCharge;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::quiver::{KClass, Quiver, QuiverType};

/// Euler, Cartan and Coxeter matrices of a quiver together with the
/// dimension vectors of its indecomposable projectives and injectives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterData {
    pub euler: IntMatrix,
    /// `c_ij = dim Hom(P(i), P(j))`
    pub cartan: IntMatrix,
    pub coxeter: IntMatrix,
    pub coxeter_inverse: IntMatrix,
    pub proj_dims: Vec<KClass>,
    pub inj_dims: Vec<KClass>,
}

/// `paths[i][j]` = number of paths from `i` to `j`, trivial path included.
fn path_counts(q: &Quiver) -> IntMatrix {
    let n = q.vertex_count();
    let mut paths = vec![vec![0i64; n]; n];
    for (i, row) in paths.iter_mut().enumerate() {
        row[i] = 1;
    }
    let topo = q.topological_order();
    for i in 0..n {
        for &v in topo {
            if paths[i][v] == 0 {
                continue;
            }
            let count = paths[i][v];
            for &(t, h) in q.arrows() {
                if t == v {
                    paths[i][h] += count;
                }
            }
        }
    }
    paths
}

fn satisfies_defining_property(phi: &IntMatrix, proj: &[KClass], inj: &[KClass]) -> bool {
    proj.iter()
        .zip(inj)
        .all(|(p, i)| KClass::new(linalg::mat_vec(phi, p.coords())) == -i)
}

pub fn cartan_data(q: &Quiver) -> Result<CoxeterData> {
    let n = q.vertex_count();
    let paths = path_counts(q);
    let proj_dims: Vec<KClass> = paths.iter().map(|row| KClass::from(row.clone())).collect();
    let inj_dims: Vec<KClass> = (0..n)
        .map(|i| KClass::from((0..n).map(|j| paths[j][i]).collect::<Vec<_>>()))
        .collect();
    let cartan: IntMatrix = (0..n).map(|i| (0..n).map(|j| paths[j][i]).collect()).collect();
    let cartan_inv = linalg::inverse_integer(&cartan)
        .ok_or_else(|| Error::Invariant("Cartan matrix is not unimodular".into()))?;

    // -(C^{-1})ᵀ C, read as acting on row vectors; fall back to its transpose
    // when the column convention is the one that matches the projectives.
    let mut coxeter: IntMatrix = linalg::mat_mul(&linalg::transpose(&cartan_inv), &cartan)
        .into_iter()
        .map(|row| row.into_iter().map(|v| -v).collect())
        .collect();
    if !satisfies_defining_property(&coxeter, &proj_dims, &inj_dims) {
        coxeter = linalg::transpose(&coxeter);
        if !satisfies_defining_property(&coxeter, &proj_dims, &inj_dims) {
            return Err(Error::Invariant("no Coxeter matrix convention maps P(i) to -I(i)".into()));
        }
    }
    let coxeter_inverse = linalg::inverse_integer(&coxeter)
        .ok_or_else(|| Error::Invariant("Coxeter matrix is not invertible over Z".into()))?;

    Ok(CoxeterData {
        euler: q.euler_matrix(),
        cartan,
        coxeter,
        coxeter_inverse,
        proj_dims,
        inj_dims,
    })
}

impl CoxeterData {
    /// `Φ^m x`; negative `m` applies `Φ⁻¹`.
    pub fn ar_translate(&self, x: &KClass, m: i64) -> KClass {
        let mat = if m >= 0 { &self.coxeter } else { &self.coxeter_inverse };
        let mut v = x.coords().to_vec();
        for _ in 0..m.unsigned_abs() {
            v = linalg::mat_vec(mat, &v);
        }
        KClass::new(v)
    }

    pub fn euler_form(&self, x: &KClass, y: &KClass) -> BigInt {
        let ey = linalg::mat_vec(&self.euler, y.coords());
        x.coords().iter().zip(&ey).map(|(a, b)| a * b).sum()
    }
}

/// `<δ, x>`.
pub fn defect(q: &Quiver, x: &KClass) -> Result<BigInt> {
    let delta = q.radical_delta()?;
    q.euler_form(&delta, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArClass {
    Postprojective,
    Preinjective,
    Regular,
    Unknown,
}

impl ArClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArClass::Postprojective => "postprojective",
            ArClass::Preinjective => "preinjective",
            ArClass::Regular => "regular",
            ArClass::Unknown => "unknown",
        }
    }
}

/// Perron data of a wild quiver: growth number and the positive
/// eigendirections of `Φ` (for `ρ`) and `Φ⁻¹` (for `ρ`), unit coordinate sum.
#[derive(Debug, Clone, Serialize)]
pub struct WildSpectrum {
    pub rho: f64,
    pub y_plus: Vec<f64>,
    pub y_minus: Vec<f64>,
}

const MAX_ITERATIONS: usize = 100_000;

fn power_iteration(m: &IntMatrix) -> Result<(f64, Vec<f64>)> {
    let n = m.len();
    let mut y = vec![1.0 / n as f64; n];
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut w = linalg::mat_vec_f64(m, &y);
        let s: f64 = w.iter().sum();
        let norm = if s.abs() > 1e-300 {
            s
        } else {
            w.iter().fold(0.0f64, |a, v| a.max(v.abs()))
        };
        w.iter_mut().for_each(|v| *v /= norm);
        let diff = w.iter().zip(&y).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
        y = w;
        if diff < 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_ITERATIONS));
    }
    let my = linalg::mat_vec_f64(m, &y);
    let rho = my.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / y.iter().map(|v| v * v).sum::<f64>();
    let residual = my.iter().zip(&y).fold(0.0f64, |a, (p, q)| a.max((p - rho * q).abs()));
    if residual > 1e-9 {
        return Err(Error::NoConvergence(MAX_ITERATIONS));
    }
    if y.iter().any(|v| *v <= 0.0) {
        return Err(Error::Invariant(format!("dominant eigenvector {y:?} is not strictly positive")));
    }
    Ok((rho, y))
}

pub fn wild_spectrum(q: &Quiver) -> Result<WildSpectrum> {
    if q.classify_type() != QuiverType::Wild {
        return Err(Error::NotWild);
    }
    let cd = cartan_data(q)?;
    spectrum_of(&cd)
}

fn spectrum_of(cd: &CoxeterData) -> Result<WildSpectrum> {
    let (rho, y_plus) = power_iteration(&cd.coxeter)?;
    let (rho_inv, y_minus) = power_iteration(&cd.coxeter_inverse)?;
    if rho <= 1.0 || (rho - rho_inv).abs() > 1e-9 * rho {
        return Err(Error::Invariant(format!(
            "growth numbers of Φ ({rho}) and Φ⁻¹ ({rho_inv}) disagree or are not > 1"
        )));
    }
    Ok(WildSpectrum { rho, y_plus, y_minus })
}

/// Phases of `Z(y⁻)` and `Z(y⁺)`: the limits of the phases along τ⁻-orbits
/// and τ-orbits respectively.
pub fn limit_phases(ws: &WildSpectrum, z: &CentralCharge) -> (f64, f64) {
    let minus = z.phase_of_real(&ws.y_minus).unwrap_or(f64::NAN);
    let plus = z.phase_of_real(&ws.y_plus).unwrap_or(f64::NAN);
    (minus, plus)
}

/// Perron vectors in fixed point: `value = coords / 2^bits`.
#[derive(Debug, Clone)]
pub struct FixedPerron {
    bits: u64,
    plus: Vec<BigInt>,
    minus: Vec<BigInt>,
}

fn fixed_power_iteration(m: &IntMatrix, start: &[f64], bits: u64) -> Option<Vec<BigInt>> {
    let scale = BigInt::from(1) << bits;
    let mut v: Vec<BigInt> = start
        .iter()
        .map(|x| BigInt::from_f64(x * 2f64.powi(52)).unwrap_or_default() << (bits.saturating_sub(52)))
        .collect();
    let tolerance = BigInt::from(1 << 8);
    for _ in 0..MAX_ITERATIONS {
        let w = linalg::mat_vec(m, &v);
        let s: BigInt = w.iter().sum();
        if s.is_zero() {
            return None;
        }
        let next: Vec<BigInt> = w.iter().map(|x| (x * &scale) / &s).collect();
        let done = next.iter().zip(&v).all(|(a, b)| (a - b).abs() <= tolerance);
        v = next;
        if done {
            return Some(v);
        }
    }
    None
}

/// Decides postprojective / preinjective / regular for indecomposable
/// classes. Euclidean quivers use the sign of the defect. Wild quivers use
/// the signs of `<y⁻, x>` and `<x, y⁺>`: first in `f64` with a 1e-7 band,
/// then, when that is too close to call, with fixed-point Perron vectors at a
/// precision adapted to the size of `x`.
#[derive(Debug)]
pub enum ModuleClassifier {
    Dynkin,
    Euclidean {
        quiver: Quiver,
        delta: KClass,
    },
    Wild {
        euler: IntMatrix,
        coxeter: IntMatrix,
        coxeter_inverse: IntMatrix,
        spectrum: WildSpectrum,
        fixed: Mutex<Option<FixedPerron>>,
    },
}

#[derive(Clone, Copy)]
enum Side {
    Plus,
    Minus,
}

const WILD_TOLERANCE: f64 = 1e-7;

impl ModuleClassifier {
    pub fn new(q: &Quiver) -> Result<Self> {
        Ok(match q.classify_type() {
            QuiverType::Dynkin => ModuleClassifier::Dynkin,
            QuiverType::Euclidean => {
                ModuleClassifier::Euclidean { quiver: q.clone(), delta: q.radical_delta()? }
            }
            QuiverType::Wild => {
                let cd = cartan_data(q)?;
                let spectrum = spectrum_of(&cd)?;
                ModuleClassifier::Wild {
                    euler: cd.euler,
                    coxeter: cd.coxeter,
                    coxeter_inverse: cd.coxeter_inverse,
                    spectrum,
                    fixed: Mutex::new(None),
                }
            }
        })
    }

    pub fn spectrum(&self) -> Option<&WildSpectrum> {
        match self {
            ModuleClassifier::Wild { spectrum, .. } => Some(spectrum),
            _ => None,
        }
    }

    pub fn classify(&self, x: &KClass) -> Result<ArClass> {
        if !x.is_positive() {
            return Err(Error::InvalidClass(x.clone()));
        }
        match self {
            ModuleClassifier::Dynkin => Err(Error::NotApplicable),
            ModuleClassifier::Euclidean { quiver, delta } => {
                Ok(match quiver.euler_form(delta, x)?.sign() {
                    num_bigint::Sign::Minus => ArClass::Postprojective,
                    num_bigint::Sign::Plus => ArClass::Preinjective,
                    num_bigint::Sign::NoSign => ArClass::Regular,
                })
            }
            ModuleClassifier::Wild { euler, .. } => {
                if x.len() != euler.len() {
                    return Err(Error::DimensionMismatch { expected: euler.len(), got: x.len() });
                }
                // <y⁻, x> = y⁻ · (E x),  <x, y⁺> = (Eᵀ x) · y⁺
                let ex = linalg::mat_vec(euler, x.coords());
                let etx = linalg::mat_vec(&linalg::transpose(euler), x.coords());
                let minus = self.pairing_sign(&ex, Side::Minus)?;
                let plus = self.pairing_sign(&etx, Side::Plus)?;
                match (minus, plus) {
                    (Some(Ordering::Less), Some(Ordering::Greater)) => Ok(ArClass::Postprojective),
                    (Some(Ordering::Greater), Some(Ordering::Less)) => Ok(ArClass::Preinjective),
                    (Some(Ordering::Greater), Some(Ordering::Greater)) => Ok(ArClass::Regular),
                    _ => Err(Error::Inconclusive(x.clone())),
                }
            }
        }
    }

    /// Classification with undecidable or inapplicable cases mapped to
    /// [`ArClass::Unknown`].
    pub fn classify_or_unknown(&self, x: &KClass) -> ArClass {
        self.classify(x).unwrap_or(ArClass::Unknown)
    }

    fn pairing_sign(&self, u: &[BigInt], side: Side) -> Result<Option<Ordering>> {
        let ModuleClassifier::Wild { coxeter, coxeter_inverse, spectrum, fixed, .. } = self else {
            return Ok(None);
        };
        let y = match side {
            Side::Plus => &spectrum.y_plus,
            Side::Minus => &spectrum.y_minus,
        };
        let l1: f64 = u.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum();
        if l1 < 2f64.powi(53) {
            let value: f64 = u.iter().zip(y).map(|(c, w)| c.to_f64().unwrap_or(0.0) * w).sum();
            if value.abs() > WILD_TOLERANCE.max(l1 * 1e-11) {
                return Ok(Some(value.partial_cmp(&0.0).unwrap_or(Ordering::Equal)));
            }
        }

        // cancellation can make the pairing as small as 1/|u|
        let u_bits = u.iter().map(BigInt::bits).max().unwrap_or(0);
        let needed = 2 * u_bits + 128;
        let mut guard = fixed.lock().unwrap_or_else(|e| e.into_inner());
        if guard.as_ref().is_none_or(|f| f.bits < needed) {
            let bits = needed.next_multiple_of(256);
            let plus = fixed_power_iteration(coxeter, &spectrum.y_plus, bits)
                .ok_or(Error::NoConvergence(MAX_ITERATIONS))?;
            let minus = fixed_power_iteration(coxeter_inverse, &spectrum.y_minus, bits)
                .ok_or(Error::NoConvergence(MAX_ITERATIONS))?;
            *guard = Some(FixedPerron { bits, plus, minus });
        }
        let f = guard.as_ref().expect("filled above");
        let v = match side {
            Side::Plus => &f.plus,
            Side::Minus => &f.minus,
        };
        let value: BigInt = u.iter().zip(v).map(|(a, b)| a * b).sum();
        let norm: BigInt = u.iter().map(|c| c.abs()).sum();
        let bound = norm << 32;
        if value.abs() > bound {
            Ok(Some(if value.is_positive() { Ordering::Greater } else { Ordering::Less }))
        } else {
            Ok(None)
        }
    }
}

/// One-shot classification; prefer [`ModuleClassifier`] for many classes.
pub fn classify_module_class(q: &Quiver, x: &KClass) -> Result<ArClass> {
    ModuleClassifier::new(q)?.classify(x)
}
