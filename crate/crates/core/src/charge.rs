//! Exact central charges and phase comparison.
//!
//! A central charge assigns a rational complex number to every vertex; its
//! value on a class is the linear extension. Nonzero nonnegative classes land
//! in the closed upper half-plane `H̄ = {im > 0} ∪ {im = 0, re < 0}`, where the
//! argument lies in `(0, π]` and two values can be compared exactly by the
//! sign of a 2×2 determinant. Floats only appear in reported phases.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{KClass, Quiver};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl RationalComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        RationalComplex { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        RationalComplex::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    /// Parse a pair of exact decimals or `p/q` fractions.
    pub fn parse(re: &str, im: &str) -> Result<Self> {
        Ok(RationalComplex::new(parse_rational(re)?, parse_rational(im)?))
    }

    pub fn zero() -> Self {
        RationalComplex::new(BigRational::zero(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn in_upper_half_plane(&self) -> bool {
        self.im.is_positive() || (self.im.is_zero() && self.re.is_negative())
    }

    pub fn add(&self, other: &RationalComplex) -> RationalComplex {
        RationalComplex::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn scale(&self, k: &BigRational) -> RationalComplex {
        RationalComplex::new(&self.re * k, &self.im * k)
    }

    /// `re(self)·im(other) − im(self)·re(other)`; positive when `other` is
    /// counterclockwise of `self`.
    pub fn det(&self, other: &RationalComplex) -> BigRational {
        &self.re * &other.im - &self.im * &other.re
    }

    fn check_half_plane(&self) -> Result<()> {
        if self.in_upper_half_plane() {
            Ok(())
        } else {
            Err(Error::OutOfHalfPlane(self.to_string()))
        }
    }

    /// Phase in `(0, 1]`, i.e. `arg / π`. Reporting only.
    pub fn phase(&self) -> Result<f64> {
        self.check_half_plane()?;
        if self.im.is_zero() {
            return Ok(1.0);
        }
        // arg = acot(re/im); stays finite for arbitrarily large coordinates
        let t = (&self.re / &self.im).to_f64().unwrap_or(f64::NAN);
        Ok(1.0f64.atan2(t) / std::f64::consts::PI)
    }
}

impl fmt::Display for RationalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}i", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
    }
}

/// Parse `"3"`, `"-1.25"`, `"2e-3"` or `"-7/4"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}

/// An element of `H̄` ordered by exact phase. Distinct values on the same ray
/// compare equal.
#[derive(Debug, Clone)]
pub struct PhaseKey(RationalComplex);

impl PhaseKey {
    pub fn new(z: RationalComplex) -> Result<Self> {
        z.check_half_plane()?;
        Ok(PhaseKey(z))
    }

    pub fn value(&self) -> &RationalComplex {
        &self.0
    }

    pub fn phase(&self) -> f64 {
        self.0.phase().expect("checked on construction")
    }
}

impl Ord for PhaseKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger argument = other is clockwise of self
        BigRational::zero().cmp(&self.0.det(&other.0))
    }
}

impl PartialOrd for PhaseKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for PhaseKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for PhaseKey {}

/// `arg(z1) > arg(z2)` for `z1, z2 ∈ H̄`, decided exactly.
pub fn phase_gt(z1: &RationalComplex, z2: &RationalComplex) -> Result<bool> {
    z1.check_half_plane()?;
    z2.check_half_plane()?;
    Ok(z2.det(z1).is_positive())
}

/// Phase of `z`, see [`RationalComplex::phase`].
pub fn phase_float(z: &RationalComplex) -> Result<f64> {
    z.phase()
}

/// Phase of a real point `(re, im)`, `None` outside the open upper
/// half-plane plus the negative real axis.
pub fn phase_of_point(re: f64, im: f64) -> Option<f64> {
    if im > 0.0 || (im == 0.0 && re < 0.0) {
        Some(im.atan2(re) / std::f64::consts::PI)
    } else {
        None
    }
}

/// Values of `Z` on the simples, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralCharge {
    values: Vec<RationalComplex>,
}

impl CentralCharge {
    pub fn new(values: Vec<RationalComplex>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parse("central charge has no values".into()));
        }
        for v in &values {
            v.check_half_plane()?;
        }
        Ok(CentralCharge { values })
    }

    /// Convenience constructor from integer `(re, im)` pairs.
    pub fn from_ints(values: &[(i64, i64)]) -> Result<Self> {
        CentralCharge::new(values.iter().map(|&(r, i)| RationalComplex::from_ints(r, i)).collect())
    }

    pub fn values(&self) -> &[RationalComplex] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_quiver(&self, q: &Quiver) -> Result<()> {
        if self.len() != q.vertex_count() {
            return Err(Error::DimensionMismatch { expected: q.vertex_count(), got: self.len() });
        }
        Ok(())
    }

    /// `Z(x) = Σ x_i Z(S_i)`.
    pub fn charge_of(&self, x: &KClass) -> Result<RationalComplex> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: x.len() });
        }
        if x.is_zero() {
            return Err(Error::ZeroClass);
        }
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        for (c, z) in x.coords().iter().zip(&self.values) {
            if c.is_zero() {
                continue;
            }
            let c = BigRational::from_integer(c.clone());
            re += &c * &z.re;
            im += &c * &z.im;
        }
        Ok(RationalComplex::new(re, im))
    }

    /// Exact phase key of a nonnegative class.
    pub fn phase_key(&self, x: &KClass) -> Result<PhaseKey> {
        PhaseKey::new(self.charge_of(x)?)
    }

    /// `Z` extended linearly to a real vector, as `(re, im)`.
    pub fn charge_of_real(&self, y: &[f64]) -> (f64, f64) {
        self.values.iter().zip(y).fold((0.0, 0.0), |(re, im), (z, c)| {
            (
                re + c * z.re.to_f64().unwrap_or(f64::NAN),
                im + c * z.im.to_f64().unwrap_or(f64::NAN),
            )
        })
    }

    /// Phase of `Z(y)` for a real vector `y`.
    pub fn phase_of_real(&self, y: &[f64]) -> Option<f64> {
        let (re, im) = self.charge_of_real(y);
        phase_of_point(re, im)
    }

    pub fn scaled(&self, k: &BigRational) -> Result<CentralCharge> {
        CentralCharge::new(self.values.iter().map(|z| z.scale(k)).collect())
    }

    pub fn with_value(&self, vertex: usize, z: RationalComplex) -> Result<CentralCharge> {
        let mut values = self.values.clone();
        *values
            .get_mut(vertex)
            .ok_or(Error::Index { index: vertex + 1, n: self.len() })? = z;
        CentralCharge::new(values)
    }

    /// Shift the real part of `Z(S_vertex)` so that `Z(alpha)` and `Z(ray)`
    /// become parallel. The determinant of the two is affine in the shift, so
    /// the solution is a single rational number.
    pub fn align_with_ray(&self, vertex: usize, alpha: &KClass, ray: &KClass) -> Result<CentralCharge> {
        let a = self.charge_of(alpha)?;
        let d = self.charge_of(ray)?;
        let av = BigRational::from_integer(alpha[vertex].clone());
        let dv = BigRational::from_integer(ray[vertex].clone());
        // (a.re + av t) d.im - a.im (d.re + dv t) = 0
        let slope = &av * &d.im - &a.im * &dv;
        if slope.is_zero() {
            return Err(Error::NoSolution(format!(
                "shifting vertex {} does not move Z{alpha} relative to Z{ray}",
                vertex + 1
            )));
        }
        let t = -a.det(&d) / slope;
        let z = &self.values[vertex];
        self.with_value(vertex, RationalComplex::new(&z.re + t, z.im.clone()))
    }

    /// `samples` charges moving `Z(S_vertex)` in equal exact steps from its
    /// current value to `end`; both endpoints included.
    pub fn along_segment(&self, vertex: usize, end: &RationalComplex, samples: usize) -> Result<Vec<CentralCharge>> {
        if samples < 2 {
            return Err(Error::InvalidArgument(format!("{samples} samples; need at least 2")));
        }
        let start = self
            .values
            .get(vertex)
            .ok_or(Error::Index { index: vertex + 1, n: self.len() })?
            .clone();
        let last = BigRational::from_integer(BigInt::from(samples - 1));
        (0..samples)
            .map(|s| {
                let t = BigRational::from_integer(BigInt::from(s)) / &last;
                let one_minus = BigRational::one() - &t;
                self.with_value(vertex, start.scale(&one_minus).add(&end.scale(&t)))
            })
            .collect()
    }

    /// Parse `{"Z": [["-1","1"], ...]}`. Entries may be strings or JSON
    /// numbers; both are read exactly.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let entries = v
            .get("Z")
            .and_then(|z| z.as_array())
            .ok_or_else(|| Error::Parse("expected {\"Z\": [[re, im], ...]}".into()))?;
        let scalar = |x: &serde_json::Value| -> Result<String> {
            match x {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                _ => Err(Error::Parse(format!("bad charge entry {x}"))),
            }
        };
        let values = entries
            .iter()
            .map(|pair| match pair.as_array().map(Vec::as_slice) {
                Some([re, im]) => RationalComplex::parse(&scalar(re)?, &scalar(im)?),
                _ => Err(Error::Parse(format!("expected [re, im], got {pair}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        CentralCharge::new(values)
    }

    /// Parse the inline form `[-1,1],[1,1]`.
    pub fn parse_inline(text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text
            .split(['[', ']', ',', ' '])
            .map(|t| t.trim_matches('"'))
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() || !tokens.len().is_multiple_of(2) {
            return Err(Error::Parse(format!("expected re,im pairs in {text:?}")));
        }
        let values = tokens
            .chunks(2)
            .map(|p| RationalComplex::parse(p[0], p[1]))
            .collect::<Result<Vec<_>>>()?;
        CentralCharge::new(values)
    }

    pub fn to_json(&self) -> String {
        let z: Vec<[String; 2]> = self
            .values
            .iter()
            .map(|v| [v.re.to_string(), v.im.to_string()])
            .collect();
        serde_json::json!({ "Z": z }).to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RigidityVerdict {
    ConsistentWithRigid,
    Violation,
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    pub verdict: RigidityVerdict,
    /// Two classes of exactly equal phase, at least one with `q = 1`.
    pub witness: Option<(KClass, KClass)>,
    pub candidates: usize,
}

/// Look for two candidate classes with exactly equal phase where at least one
/// is a real root. The imaginary ray is compared against every class first.
///
/// This is a semi-decision over the supplied candidates: a clean report only
/// says no violation was found among them.
pub fn check_rigid(
    q: &Quiver,
    z: &CentralCharge,
    stable_classes: &[KClass],
    imaginary_ray: Option<&KClass>,
) -> Result<RigidityReport> {
    let mut classes: Vec<&KClass> = Vec::new();
    for c in stable_classes {
        if !classes.contains(&c) {
            classes.push(c);
        }
    }
    let one = BigInt::from(1);
    let keyed = classes
        .iter()
        .map(|c| Ok((*c, z.phase_key(c)?, q.tits_form(c)? == one)))
        .collect::<Result<Vec<_>>>()?;
    let candidates = keyed.len() + usize::from(imaginary_ray.is_some());
    let violation = |a: &KClass, b: &KClass| RigidityReport {
        verdict: RigidityVerdict::Violation,
        witness: Some((a.clone(), b.clone())),
        candidates,
    };

    if let Some(ray) = imaginary_ray {
        let ray_key = z.phase_key(ray)?;
        let ray_real = q.tits_form(ray)? == one;
        for (c, key, real) in &keyed {
            if *c != ray && (*real || ray_real) && *key == ray_key {
                return Ok(violation(c, ray));
            }
        }
    }
    for (i, (a, ka, ra)) in keyed.iter().enumerate() {
        for (b, kb, rb) in &keyed[i + 1..] {
            if (*ra || *rb) && ka == kb {
                return Ok(violation(a, b));
            }
        }
    }
    Ok(RigidityReport { verdict: RigidityVerdict::ConsistentWithRigid, witness: None, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: i64, im: i64) -> RationalComplex {
        RationalComplex::from_ints(re, im)
    }

    fn kz() -> CentralCharge {
        CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap()
    }

    #[test]
    fn charge_of_examples() {
        assert_eq!(kz().charge_of(&KClass::from([1, 1])).unwrap(), c(0, 2));
        assert_eq!(kz().charge_of(&KClass::from([2, 1])).unwrap(), c(-1, 3));
        assert_eq!(kz().charge_of(&KClass::from([0, 0])), Err(Error::ZeroClass));
    }

    #[test]
    fn phase_comparison() {
        assert!(phase_gt(&c(-1, 1), &c(1, 1)).unwrap());
        assert!(!phase_gt(&c(-2, 0), &c(-5, 0)).unwrap());
        assert!(!phase_gt(&c(-5, 0), &c(-2, 0)).unwrap());
        assert!(phase_gt(&c(-1, 3), &c(0, 2)).unwrap());
        assert!(matches!(phase_gt(&c(1, 0), &c(0, 1)), Err(Error::OutOfHalfPlane(_))));
        assert!(matches!(phase_gt(&c(0, 1), &c(0, -1)), Err(Error::OutOfHalfPlane(_))));
    }

    #[test]
    fn float_phases() {
        assert!((c(0, 2).phase().unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(c(-1, 0).phase().unwrap(), 1.0);
        assert!((c(1, 1).phase().unwrap() - 0.25).abs() < 1e-15);
        assert!(c(0, 0).phase().is_err());
        // huge coordinates stay finite
        let big = BigRational::from_integer(num_traits::pow(BigInt::from(10), 400));
        let z = RationalComplex::new(-big.clone(), big * BigRational::from_integer(3.into()));
        let expected = 3.0f64.atan2(-1.0) / std::f64::consts::PI;
        assert!((z.phase().unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn rational_parsing() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(parse_rational("-1").unwrap(), r(-1, 1));
        assert_eq!(parse_rational("1/3").unwrap(), r(1, 3));
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational("2.5e-1").unwrap(), r(1, 4));
        assert_eq!(parse_rational("1e2").unwrap(), r(100, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn charge_formats() {
        let z = CentralCharge::from_json(r#"{"Z": [["-1","1"], ["1/3", "0.5"]]}"#).unwrap();
        assert_eq!(z.values()[1].re, BigRational::new(1.into(), 3.into()));
        let z2 = CentralCharge::from_json(r#"{"Z": [[-1, 1], [0.1, 2]]}"#).unwrap();
        assert_eq!(z2.values()[1].re, BigRational::new(1.into(), 10.into()));
        assert_eq!(CentralCharge::parse_inline("[-1,1],[1,1]").unwrap(), kz());
        assert_eq!(CentralCharge::from_json(&kz().to_json()).unwrap(), kz());
        assert!(matches!(
            CentralCharge::parse_inline("[1,0],[1,1]"),
            Err(Error::OutOfHalfPlane(_))
        ));
        assert!(CentralCharge::parse_inline("[1,1],[1]").is_err());
    }

    #[test]
    fn rigidity_examples() {
        let q = Quiver::kronecker(2);
        let delta = KClass::from([1, 1]);
        let classes: Vec<KClass> =
            [[1, 0], [2, 1], [0, 1], [1, 2]].into_iter().map(KClass::from).collect();
        let rep = check_rigid(&q, &kz(), &classes, Some(&delta)).unwrap();
        assert_eq!(rep.verdict, RigidityVerdict::ConsistentWithRigid);

        let single = check_rigid(&q, &kz(), &classes[..1], None).unwrap();
        assert_eq!(single.verdict, RigidityVerdict::ConsistentWithRigid);

        // before alignment the two phases differ
        let z = CentralCharge::new(vec![
            c(-1, 1),
            RationalComplex::new(BigRational::new(1.into(), 3.into()), BigRational::new(1.into(), 3.into())),
        ])
        .unwrap();
        let alpha = KClass::from([1, 2]);
        assert_ne!(z.phase_key(&alpha).unwrap(), z.phase_key(&delta).unwrap());

        let aligned = z.align_with_ray(1, &alpha, &delta).unwrap();
        assert_eq!(aligned.phase_key(&alpha).unwrap(), aligned.phase_key(&delta).unwrap());
        let rep = check_rigid(&q, &aligned, &[alpha.clone(), KClass::from([1, 0])], Some(&delta)).unwrap();
        assert_eq!(rep.verdict, RigidityVerdict::Violation);
        assert_eq!(rep.witness, Some((alpha, delta)));
    }

    #[test]
    fn segment_samples() {
        let zs = kz().along_segment(1, &c(-1, 1), 3).unwrap();
        assert_eq!(zs[0], kz());
        assert_eq!(zs[1].values()[1], c(0, 1));
        assert_eq!(zs[2].values()[1], c(-1, 1));
        assert!(matches!(kz().along_segment(1, &c(-1, 1), 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(kz().along_segment(2, &c(-1, 1), 3), Err(Error::Index { .. })));
    }

    fn hbar() -> impl Strategy<Value = RationalComplex> {
        prop_oneof![
            (-20i64..=20, 1i64..=20).prop_map(|(r, i)| c(r, i)),
            (-20i64..=-1).prop_map(|r| c(r, 0)),
        ]
    }

    proptest! {
        #[test]
        fn phase_order_is_strict_weak(a in hbar(), b in hbar(), d in hbar()) {
            let gt = |x: &RationalComplex, y: &RationalComplex| phase_gt(x, y).unwrap();
            prop_assert!(!gt(&a, &a));
            let eq_ab = !gt(&a, &b) && !gt(&b, &a);
            prop_assert_eq!(eq_ab, a.det(&b).is_zero());
            if gt(&a, &b) && gt(&b, &d) {
                prop_assert!(gt(&a, &d));
            }
            let (pa, pb) = (a.phase().unwrap(), b.phase().unwrap());
            if (pa - pb).abs() > 1e-12 {
                prop_assert_eq!(gt(&a, &b), pa > pb);
            }
        }

        #[test]
        fn charge_is_additive_and_scale_invariant(
            x in proptest::collection::vec(0i64..6, 2),
            y in proptest::collection::vec(0i64..6, 2),
            k in 1i64..50,
        ) {
            let (x, y) = (KClass::from(x), KClass::from(y));
            prop_assume!(!x.is_zero() && !y.is_zero());
            let z = kz();
            let sum = z.charge_of(&(&x + &y)).unwrap();
            prop_assert_eq!(sum, z.charge_of(&x).unwrap().add(&z.charge_of(&y).unwrap()));
            let scaled = z.scaled(&BigRational::new(k.into(), 7.into())).unwrap();
            let before = phase_gt(&z.charge_of(&x).unwrap(), &z.charge_of(&y).unwrap()).unwrap();
            let after = phase_gt(&scaled.charge_of(&x).unwrap(), &scaled.charge_of(&y).unwrap()).unwrap();
            prop_assert_eq!(before, after);
        }
    }
}
