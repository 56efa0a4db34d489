//! Brute-force ground truth from explicit representations over `F_p`.
//!
//! Subrepresentations are enumerated vertex by vertex in topological order:
//! once the subspaces at the tails of all arrows into `v` are fixed, the
//! subspace at `v` ranges over the superspaces of the sum of their images.
//! Stability here means stability after extension to the algebraic closure,
//! which for a representation defined over `F_p` is the same as being stable
//! over `F_p` and having `End = F_p`.

pub mod field;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charge::{CentralCharge, PhaseKey};
use crate::error::{Error, Result};
use crate::quiver::{KClass, Quiver};
use field::{is_prime, rank, FpMatrix, Subspace};

pub const MAX_TOTAL_DIM: usize = 8;
pub const MAX_PRIME: u32 = 7;
/// Subspace tuples visited by one enumeration before giving up.
pub const NODE_BUDGET: u64 = 20_000_000;
/// Representations tried by one exhaustive search.
pub const REPRESENTATION_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    quiver: Quiver,
    p: u32,
    dims: Vec<usize>,
    maps: Vec<FpMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnFactor {
    pub class: KClass,
    pub phase_key: PhaseKey,
}

#[derive(Serialize, Deserialize)]
struct RepresentationJson {
    p: u32,
    dims: Vec<usize>,
    #[serde(default)]
    maps: BTreeMap<String, Vec<Vec<i64>>>,
}

fn check_field(p: u32) -> Result<()> {
    if p > MAX_PRIME {
        return Err(Error::GuardExceeded(format!("field size {p} > {MAX_PRIME}")));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not a prime")));
    }
    Ok(())
}

impl Representation {
    /// `maps[a]` is the `dims[head] × dims[tail]` matrix of arrow `a`, in the
    /// arrow order of `quiver`. Entries are reduced mod `p`.
    pub fn new(quiver: &Quiver, p: u32, dims: &[usize], maps: &[Vec<Vec<i64>>]) -> Result<Self> {
        check_field(p)?;
        let n = quiver.vertex_count();
        if dims.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: dims.len() });
        }
        let arrows = quiver.arrows();
        if maps.len() != arrows.len() {
            return Err(Error::DimensionMismatch { expected: arrows.len(), got: maps.len() });
        }
        let mut out = Vec::with_capacity(maps.len());
        for (m, &(t, h)) in maps.iter().zip(arrows) {
            if m.len() != dims[h] {
                return Err(Error::DimensionMismatch { expected: dims[h], got: m.len() });
            }
            let mut data = Vec::with_capacity(dims[h] * dims[t]);
            for row in m {
                if row.len() != dims[t] {
                    return Err(Error::DimensionMismatch { expected: dims[t], got: row.len() });
                }
                data.extend(row.iter().map(|&v| v.rem_euclid(p as i64) as u32));
            }
            out.push(FpMatrix::from_data(dims[h], dims[t], data));
        }
        Ok(Representation { quiver: quiver.clone(), p, dims: dims.to_vec(), maps: out })
    }

    fn from_matrices(quiver: &Quiver, p: u32, dims: Vec<usize>, maps: Vec<FpMatrix>) -> Self {
        Representation { quiver: quiver.clone(), p, dims, maps }
    }

    /// Parse `{"p": int, "dims": [...], "maps": {"1": [[...]], ...}}` with
    /// 1-based arrow keys. Missing arrows carry the zero map.
    pub fn from_json(quiver: &Quiver, text: &str) -> Result<Self> {
        let j: RepresentationJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let arrows = quiver.arrows();
        if j.dims.len() != quiver.vertex_count() {
            return Err(Error::DimensionMismatch { expected: quiver.vertex_count(), got: j.dims.len() });
        }
        let mut maps: Vec<Vec<Vec<i64>>> =
            arrows.iter().map(|&(t, h)| vec![vec![0; j.dims[t]]; j.dims[h]]).collect();
        for (key, m) in j.maps {
            let a: usize = key.parse().map_err(|_| Error::Parse(format!("bad arrow key {key:?}")))?;
            if a == 0 || a > arrows.len() {
                return Err(Error::Index { index: a, n: arrows.len() });
            }
            maps[a - 1] = m;
        }
        Representation::new(quiver, j.p, &j.dims, &maps)
    }

    pub fn to_json(&self) -> String {
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(a, m)| {
                let rows = m.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect();
                ((a + 1).to_string(), rows)
            })
            .collect();
        serde_json::to_string(&RepresentationJson { p: self.p, dims: self.dims.clone(), maps })
            .expect("serializable")
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field_size(&self) -> u32 {
        self.p
    }

    pub fn dims(&self) -> KClass {
        KClass::new(self.dims.iter().map(|&d| d.into()).collect())
    }

    pub fn maps(&self) -> &[FpMatrix] {
        &self.maps
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    fn check_guard(&self) -> Result<()> {
        if self.total_dim() > MAX_TOTAL_DIM {
            return Err(Error::GuardExceeded(format!(
                "total dimension {} > {MAX_TOTAL_DIM}",
                self.total_dim()
            )));
        }
        Ok(())
    }

    /// Call `f` on every subrepresentation, zero and full included, given by
    /// its subspace at each vertex.
    pub fn visit_subreps<F>(&self, mut f: F) -> Result<()>
    where
        F: FnMut(&[Subspace]) -> ControlFlow<()>,
    {
        self.check_guard()?;
        let n = self.quiver.vertex_count();
        let mut chosen: Vec<Subspace> = self.dims.iter().map(|&d| Subspace::zero(d)).collect();
        let mut visited = 0u64;
        self.descend(0, &mut chosen, &mut visited, &mut f).map(|_| ())?;
        debug_assert_eq!(chosen.len(), n);
        Ok(())
    }

    fn descend<F>(
        &self,
        depth: usize,
        chosen: &mut Vec<Subspace>,
        visited: &mut u64,
        f: &mut F,
    ) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[Subspace]) -> ControlFlow<()>,
    {
        let order = self.quiver.topological_order();
        if depth == order.len() {
            return Ok(f(chosen));
        }
        let v = order[depth];
        let mut required = Subspace::zero(self.dims[v]);
        for (a, &(t, h)) in self.quiver.arrows().iter().enumerate() {
            if h == v {
                required = required.sum(&chosen[t].image(&self.maps[a], self.p), self.p);
            }
        }
        for s in required.superspaces(self.p) {
            *visited += 1;
            if *visited > NODE_BUDGET {
                return Err(Error::GuardExceeded(format!(
                    "more than {NODE_BUDGET} subspace tuples"
                )));
            }
            chosen[v] = s;
            if self.descend(depth + 1, chosen, visited, f)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    /// Dimension vectors of proper nonzero subrepresentations, with the
    /// number of subrepresentations realizing each.
    pub fn subrep_classes(&self) -> Result<BTreeMap<KClass, u64>> {
        let full = self.total_dim();
        let mut out = BTreeMap::new();
        self.visit_subreps(|u| {
            let total: usize = u.iter().map(Subspace::dim).sum();
            if total != 0 && total != full {
                *out.entry(class_of(u)).or_insert(0) += 1;
            }
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    fn phase_test(&self, z: &CentralCharge, strict: bool) -> Result<bool> {
        z.check_quiver(&self.quiver)?;
        let own = z.phase_key(&self.dims())?;
        let full = self.total_dim();
        let mut ok = true;
        self.visit_subreps(|u| {
            let total: usize = u.iter().map(Subspace::dim).sum();
            if total == 0 || total == full {
                return ControlFlow::Continue(());
            }
            let key = z.phase_key(&class_of(u)).expect("nonzero subclass");
            if key > own || (strict && key == own) {
                ok = false;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        Ok(ok)
    }

    /// Every proper nonzero subrepresentation defined over `F_p` has
    /// strictly smaller phase.
    pub fn is_stable_over_prime_field(&self, z: &CentralCharge) -> Result<bool> {
        self.phase_test(z, true)
    }

    /// Stable after extending scalars to the algebraic closure.
    pub fn is_stable(&self, z: &CentralCharge) -> Result<bool> {
        Ok(self.is_stable_over_prime_field(z)? && self.is_brick())
    }

    pub fn is_semistable(&self, z: &CentralCharge) -> Result<bool> {
        self.phase_test(z, false)
    }

    /// `dim Hom(self, other)`: the solution space of `φ_h M_a = N_a φ_t`.
    pub fn hom_dim(&self, other: &Representation) -> Result<usize> {
        if self.quiver != other.quiver || self.p != other.p {
            return Err(Error::MismatchedBase);
        }
        let p = self.p;
        let n = self.quiver.vertex_count();
        let mut offset = vec![0usize; n + 1];
        for i in 0..n {
            offset[i + 1] = offset[i] + other.dims[i] * self.dims[i];
        }
        let unknowns = offset[n];
        // entry (r, s) of φ_i is unknown offset[i] + r * dims_X[i] + s
        let var = |i: usize, r: usize, s: usize| offset[i] + r * self.dims[i] + s;
        let mut rows = Vec::new();
        for (a, &(t, h)) in self.quiver.arrows().iter().enumerate() {
            let m = &self.maps[a];
            let nn = &other.maps[a];
            for r in 0..other.dims[h] {
                for c in 0..self.dims[t] {
                    let mut row = vec![0u32; unknowns];
                    for s in 0..self.dims[h] {
                        let v = &mut row[var(h, r, s)];
                        *v = (*v + m.get(s, c)) % p;
                    }
                    for s in 0..other.dims[t] {
                        let v = &mut row[var(t, s, c)];
                        *v = (*v + p - nn.get(r, s)) % p;
                    }
                    rows.push(row);
                }
            }
        }
        Ok(unknowns - rank(rows, unknowns, p))
    }

    /// `dim Hom − ⟨dim X, dim Y⟩`.
    pub fn ext_dim(&self, other: &Representation) -> Result<usize> {
        let hom = self.hom_dim(other)? as i64;
        let euler = self.quiver.euler_form(&self.dims(), &other.dims())?;
        let euler: i64 = euler.try_into().map_err(|_| Error::Invariant("Euler form overflow".into()))?;
        let ext = hom - euler;
        if ext < 0 {
            return Err(Error::NegativeExt(ext));
        }
        Ok(ext as usize)
    }

    pub fn is_brick(&self) -> bool {
        self.hom_dim(self).map(|d| d == 1).unwrap_or(false)
    }

    pub fn is_exceptional(&self) -> bool {
        self.is_brick() && self.ext_dim(self).map(|e| e == 0).unwrap_or(false)
    }

    /// The representation induced on `V/U` for a subrepresentation `U`, in
    /// the basis of unit vectors at the non-pivot columns of `U`.
    pub fn quotient(&self, sub: &[Subspace]) -> Representation {
        let free: Vec<Vec<usize>> = sub.iter().map(Subspace::free_columns).collect();
        let dims: Vec<usize> = free.iter().map(Vec::len).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(t, h))| {
                let mut q = FpMatrix::zeros(dims[h], dims[t]);
                for (jj, &j) in free[t].iter().enumerate() {
                    let column: Vec<u32> = (0..self.dims[h]).map(|r| self.maps[a].get(r, j)).collect();
                    let reduced = sub[h].reduce(&column, self.p);
                    for (ii, &i) in free[h].iter().enumerate() {
                        q.set(ii, jj, reduced[i]);
                    }
                }
                q
            })
            .collect();
        Representation::from_matrices(&self.quiver, self.p, dims, maps)
    }

    /// Harder–Narasimhan factors, top phase first. Each step splits off the
    /// subrepresentation of maximal phase, then maximal total dimension, then
    /// lexicographically least class.
    pub fn hn_filtration(&self, z: &CentralCharge) -> Result<Vec<HnFactor>> {
        z.check_quiver(&self.quiver)?;
        self.check_guard()?;
        let mut factors = Vec::new();
        let mut current = self.clone();
        while !current.is_zero() {
            let mut best: Option<(PhaseKey, usize, KClass, Vec<Subspace>)> = None;
            current.visit_subreps(|u| {
                let total: usize = u.iter().map(Subspace::dim).sum();
                if total == 0 {
                    return ControlFlow::Continue(());
                }
                let class = class_of(u);
                let key = z.phase_key(&class).expect("nonzero subclass");
                let better = match &best {
                    None => true,
                    Some((bk, bt, bc, _)) => {
                        key > *bk || (key == *bk && (total > *bt || (total == *bt && class < *bc)))
                    }
                };
                if better {
                    best = Some((key, total, class, u.to_vec()));
                }
                ControlFlow::Continue(())
            })?;
            let (phase_key, _, class, sub) = best.expect("full subrepresentation is visited");
            current = current.quotient(&sub);
            factors.push(HnFactor { class, phase_key });
        }
        Ok(factors)
    }
}

fn class_of(u: &[Subspace]) -> KClass {
    KClass::new(u.iter().map(|s| s.dim().into()).collect())
}

/// Simple representation at the 1-based vertex `i`.
pub fn build_simple(q: &Quiver, i: usize, p: u32) -> Result<Representation> {
    let n = q.vertex_count();
    if i == 0 || i > n {
        return Err(Error::Index { index: i, n });
    }
    let mut dims = vec![0; n];
    dims[i - 1] = 1;
    zero_maps(q, p, &dims)
}

pub fn zero_maps(q: &Quiver, p: u32, dims: &[usize]) -> Result<Representation> {
    let maps: Vec<Vec<Vec<i64>>> = q
        .arrows()
        .iter()
        .map(|&(t, h)| vec![vec![0; *dims.get(t).unwrap_or(&0)]; *dims.get(h).unwrap_or(&0)])
        .collect();
    Representation::new(q, p, dims, &maps)
}

/// Member `(λ0 : λ1)` of the Kronecker family of dimension `(1, 1)`.
pub fn kronecker_family(p: u32, l0: i64, l1: i64) -> Result<Representation> {
    check_field(p)?;
    if l0.rem_euclid(p as i64) == 0 && l1.rem_euclid(p as i64) == 0 {
        return Err(Error::ZeroPoint);
    }
    Representation::new(&Quiver::kronecker(2), p, &[1, 1], &[vec![vec![l0]], vec![vec![l1]]])
}

pub fn direct_sum(x: &Representation, y: &Representation) -> Result<Representation> {
    if x.quiver != y.quiver || x.p != y.p {
        return Err(Error::MismatchedBase);
    }
    let dims: Vec<usize> = x.dims.iter().zip(&y.dims).map(|(a, b)| a + b).collect();
    let maps = x
        .quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(t, h))| {
            let mut m = FpMatrix::zeros(dims[h], dims[t]);
            let (mx, my) = (&x.maps[a], &y.maps[a]);
            for r in 0..mx.rows() {
                for c in 0..mx.cols() {
                    m.set(r, c, mx.get(r, c));
                }
            }
            for r in 0..my.rows() {
                for c in 0..my.cols() {
                    m.set(x.dims[h] + r, x.dims[t] + c, my.get(r, c));
                }
            }
            m
        })
        .collect();
    Ok(Representation::from_matrices(&x.quiver, x.p, dims, maps))
}

/// All representations of dimension `dims` over `F_p`, up to the action of
/// `GL` at the endpoints of the first arrow: that arrow is put in rank
/// normal form `[I_r 0; 0 0]`, every other entry runs over `F_p`.
struct NormalForms<'a> {
    quiver: &'a Quiver,
    p: u32,
    dims: Vec<usize>,
    first_ranks: usize,
    free_entries: u32,
}

impl<'a> NormalForms<'a> {
    fn new(quiver: &'a Quiver, p: u32, dims: &[usize]) -> Self {
        let arrows = quiver.arrows();
        let entries: usize = arrows.iter().skip(1).map(|&(t, h)| dims[t] * dims[h]).sum();
        let first_ranks = arrows.first().map_or(1, |&(t, h)| dims[t].min(dims[h]) + 1);
        NormalForms { quiver, p, dims: dims.to_vec(), first_ranks, free_entries: entries as u32 }
    }

    fn count(&self) -> Option<u64> {
        (self.p as u64)
            .checked_pow(self.free_entries)?
            .checked_mul(self.first_ranks as u64)
    }

    fn get(&self, index: u64) -> Representation {
        let per_rank = (self.p as u64).pow(self.free_entries);
        let rank = (index / per_rank) as usize;
        let mut code = index % per_rank;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(t, h))| {
                let mut m = FpMatrix::zeros(self.dims[h], self.dims[t]);
                if a == 0 {
                    for i in 0..rank {
                        m.set(i, i, 1);
                    }
                } else {
                    for r in 0..self.dims[h] {
                        for c in 0..self.dims[t] {
                            m.set(r, c, (code % self.p as u64) as u32);
                            code /= self.p as u64;
                        }
                    }
                }
                m
            })
            .collect();
        Representation::from_matrices(self.quiver, self.p, self.dims.clone(), maps)
    }
}

/// Some stable representation of dimension `dims` over `F_p`, searching
/// every isomorphism class. Deterministic: the first hit in enumeration
/// order is returned.
pub fn find_stable_representation(
    q: &Quiver,
    z: &CentralCharge,
    p: u32,
    dims: &[usize],
) -> Result<Option<Representation>> {
    check_field(p)?;
    z.check_quiver(q)?;
    if dims.len() != q.vertex_count() {
        return Err(Error::DimensionMismatch { expected: q.vertex_count(), got: dims.len() });
    }
    if dims.iter().all(|&d| d == 0) {
        return Err(Error::ZeroClass);
    }
    let total: usize = dims.iter().sum();
    if total > MAX_TOTAL_DIM {
        return Err(Error::GuardExceeded(format!("total dimension {total} > {MAX_TOTAL_DIM}")));
    }
    let forms = NormalForms::new(q, p, dims);
    let count = forms
        .count()
        .filter(|&c| c <= REPRESENTATION_BUDGET)
        .ok_or_else(|| Error::GuardExceeded(format!("more than {REPRESENTATION_BUDGET} representations")))?;
    (0..count)
        .into_par_iter()
        .find_map_first(|i| {
            let rep = forms.get(i);
            match rep.is_stable(z) {
                Ok(true) => Some(Ok(rep)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .transpose()
}

/// Nonzero dimension vectors `d ≤ bounds` admitting a stable representation
/// over at least one of `primes`, sorted.
pub fn stable_dimension_vectors(
    q: &Quiver,
    z: &CentralCharge,
    primes: &[u32],
    bounds: &[usize],
) -> Result<Vec<KClass>> {
    if bounds.len() != q.vertex_count() {
        return Err(Error::DimensionMismatch { expected: q.vertex_count(), got: bounds.len() });
    }
    let total: usize = bounds.iter().sum();
    if total > MAX_TOTAL_DIM {
        return Err(Error::GuardExceeded(format!(
            "box {bounds:?} reaches total dimension {total} > {MAX_TOTAL_DIM}"
        )));
    }
    for &p in primes {
        check_field(p)?;
    }
    let mut out = Vec::new();
    let mut dims = vec![0usize; bounds.len()];
    loop {
        // odometer over the box
        let mut i = 0;
        while i < dims.len() && dims[i] == bounds[i] {
            dims[i] = 0;
            i += 1;
        }
        if i == dims.len() {
            break;
        }
        dims[i] += 1;
        for &p in primes {
            if find_stable_representation(q, z, p, &dims)?.is_some() {
                out.push(KClass::new(dims.iter().map(|&d| d.into()).collect()));
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: &[i64]) -> KClass {
        KClass::from(v)
    }

    fn kr() -> Quiver {
        Quiver::kronecker(2)
    }

    fn z_left() -> CentralCharge {
        CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap()
    }

    fn z_right() -> CentralCharge {
        CentralCharge::from_ints(&[(1, 1), (-1, 1)]).unwrap()
    }

    fn set(classes: &[&[i64]]) -> BTreeMap<KClass, u64> {
        classes.iter().map(|c| (k(c), 1)).collect()
    }

    #[test]
    fn simples() {
        assert_eq!(build_simple(&kr(), 1, 2).unwrap().dims(), k(&[1, 0]));
        assert_eq!(build_simple(&kr(), 2, 2).unwrap().dims(), k(&[0, 1]));
        let a2 = Quiver::new(2, &[(1, 2)]).unwrap();
        assert_eq!(build_simple(&a2, 2, 3).unwrap().dims(), k(&[0, 1]));
        assert!(matches!(build_simple(&a2, 3, 2), Err(Error::Index { .. })));
    }

    #[test]
    fn family_points() {
        assert!(kronecker_family(2, 1, 0).is_ok());
        assert_eq!(kronecker_family(2, 0, 0), Err(Error::ZeroPoint));
        assert_eq!(kronecker_family(3, 3, 6), Err(Error::ZeroPoint));
        assert!(kronecker_family(3, 1, 2).is_ok());
        assert!(matches!(kronecker_family(11, 1, 0), Err(Error::GuardExceeded(_))));
        assert!(matches!(kronecker_family(4, 1, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn subrep_examples() {
        let c = kronecker_family(2, 1, 0).unwrap();
        assert_eq!(c.subrep_classes().unwrap(), set(&[&[0, 1]]));
        assert!(build_simple(&kr(), 1, 2).unwrap().subrep_classes().unwrap().is_empty());
        let zero = zero_maps(&kr(), 2, &[1, 1]).unwrap();
        assert_eq!(zero.subrep_classes().unwrap(), set(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn stability_examples() {
        let c = kronecker_family(2, 1, 0).unwrap();
        assert!(c.is_stable(&z_left()).unwrap());
        assert!(!c.is_stable(&z_right()).unwrap());
        let s1 = build_simple(&kr(), 1, 2).unwrap();
        assert!(s1.is_stable(&z_left()).unwrap() && s1.is_stable(&z_right()).unwrap());
        let zero = zero_maps(&kr(), 2, &[1, 1]).unwrap();
        assert!(!zero.is_semistable(&z_left()).unwrap());
    }

    #[test]
    fn hom_and_ext() {
        let s1 = build_simple(&kr(), 1, 2).unwrap();
        let s2 = build_simple(&kr(), 2, 2).unwrap();
        let c = kronecker_family(2, 1, 0).unwrap();
        assert_eq!(s1.hom_dim(&s1).unwrap(), 1);
        assert_eq!(s1.hom_dim(&s2).unwrap(), 0);
        assert_eq!(c.hom_dim(&c).unwrap(), 1);
        assert_eq!(s2.ext_dim(&s1).unwrap(), 0);
        assert_eq!(s1.ext_dim(&s2).unwrap(), 2);
        assert_eq!(c.ext_dim(&c).unwrap(), 1);
        assert!(c.is_brick() && !c.is_exceptional());
        assert!(s1.is_brick() && s1.is_exceptional());
        let sum = direct_sum(&s1, &s2).unwrap();
        assert_eq!(sum, zero_maps(&kr(), 2, &[1, 1]).unwrap());
        assert_eq!(sum.hom_dim(&sum).unwrap(), 2);
        assert!(!sum.is_brick());
        let other = build_simple(&kr(), 1, 3).unwrap();
        assert_eq!(s1.hom_dim(&other), Err(Error::MismatchedBase));
    }

    #[test]
    fn hn_examples() {
        let zero = zero_maps(&kr(), 2, &[1, 1]).unwrap();
        let classes = |z: &CentralCharge| -> Vec<KClass> {
            zero.hn_filtration(z).unwrap().into_iter().map(|f| f.class).collect()
        };
        assert_eq!(classes(&z_left()), vec![k(&[1, 0]), k(&[0, 1])]);
        assert_eq!(classes(&z_right()), vec![k(&[0, 1]), k(&[1, 0])]);
        let c = kronecker_family(3, 1, 2).unwrap();
        assert_eq!(c.hn_filtration(&z_left()).unwrap().len(), 1);
    }

    #[test]
    fn ext_between_simples_counts_arrows() {
        let q = Quiver::new(3, &[(1, 2), (1, 2), (1, 2), (2, 3)]).unwrap();
        let a = q.arrow_counts();
        for i in 1..=3 {
            for j in 1..=3 {
                let si = build_simple(&q, i, 3).unwrap();
                let sj = build_simple(&q, j, 3).unwrap();
                let expected = if i == j { 0 } else { a[i - 1][j - 1] as usize };
                assert_eq!(si.ext_dim(&sj).unwrap(), expected, "Ext(S{i}, S{j})");
            }
        }
    }

    #[test]
    fn irreducible_companion_is_stable_over_fp_but_not_a_brick() {
        // x^2 + x + 1 has no root in F_2
        let r = Representation::new(
            &kr(),
            2,
            &[2, 2],
            &[vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
        )
        .unwrap();
        assert!(r.is_stable_over_prime_field(&z_left()).unwrap());
        assert!(!r.is_brick());
        assert!(!r.is_stable(&z_left()).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let c = kronecker_family(3, 1, 2).unwrap();
        let text = c.to_json();
        assert_eq!(Representation::from_json(&kr(), &text).unwrap(), c);
        let partial = r#"{"p": 2, "dims": [1, 1], "maps": {"2": [[1]]}}"#;
        let r = Representation::from_json(&kr(), partial).unwrap();
        assert_eq!(r, kronecker_family(2, 0, 1).unwrap());
        let bad = r#"{"p": 2, "dims": [1, 1], "maps": {"1": [[1, 0]]}}"#;
        assert!(matches!(Representation::from_json(&kr(), bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn guards() {
        let big = zero_maps(&kr(), 2, &[5, 4]).unwrap();
        assert!(matches!(big.subrep_classes(), Err(Error::GuardExceeded(_))));
        assert!(matches!(
            find_stable_representation(&kr(), &z_left(), 2, &[0, 0]),
            Err(Error::ZeroClass)
        ));
        assert!(matches!(
            stable_dimension_vectors(&kr(), &z_left(), &[2], &[5, 4]),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn a2_stable_classes() {
        let a2 = Quiver::new(2, &[(1, 2)]).unwrap();
        let found = stable_dimension_vectors(&a2, &z_left(), &[2], &[1, 1]).unwrap();
        assert_eq!(found, vec![k(&[0, 1]), k(&[1, 0]), k(&[1, 1])]);
        let found = stable_dimension_vectors(&a2, &z_right(), &[2], &[1, 1]).unwrap();
        assert_eq!(found, vec![k(&[0, 1]), k(&[1, 0])]);
    }
}
