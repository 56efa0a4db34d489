//! The mutation method.
//!
//! A heart is tracked through the classes of its `n` simples and the skew
//! matrix `b_ij = dim Ext¹(S_i, S_j) − dim Ext¹(S_j, S_i)`. Rotating the
//! central charge counterclockwise until the left-most simple leaves the
//! upper half-plane and tilting there is the same as repeatedly left-tilting
//! at the simple of maximal phase among those still in the original heart, so
//! no rotation angle is stored. The tilted simples are recorded; they are the
//! stable objects in order of decreasing phase. The clockwise run right-tilts
//! at the simple of minimal phase and enumerates in increasing phase.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::charge::{CentralCharge, PhaseKey};
use crate::coxeter::{self, ArClass, ModuleClassifier};
use crate::error::{Error, Result};
use crate::quiver::{big_number, KClass, Quiver, QuiverType};

pub const MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Counterclockwise rotation, left tilts, decreasing phase.
    Ccw,
    /// Clockwise rotation, right tilts, increasing phase.
    Cw,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Ccw => "ccw",
            Direction::Cw => "cw",
        })
    }
}

/// Simple classes and exchange matrix of a heart reachable by simple tilts.
///
/// Equality ignores the tilt history.
#[derive(Debug, Clone)]
pub struct HeartState {
    classes: Vec<KClass>,
    exchange: Vec<Vec<BigInt>>,
    history: Vec<(usize, Direction)>,
}

impl PartialEq for HeartState {
    fn eq(&self, other: &Self) -> bool {
        self.classes == other.classes && self.exchange == other.exchange
    }
}

impl HeartState {
    /// The standard heart: simples `S_i`, `b_ij = #(i→j) − #(j→i)`.
    pub fn initial(q: &Quiver) -> Self {
        let n = q.vertex_count();
        let a = q.arrow_counts();
        HeartState {
            classes: (0..n).map(|i| KClass::basis(n, i)).collect(),
            exchange: (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(a[i][j] - a[j][i])).collect())
                .collect(),
            history: Vec::new(),
        }
    }

    pub fn classes(&self) -> &[KClass] {
        &self.classes
    }

    pub fn exchange(&self) -> &[Vec<BigInt>] {
        &self.exchange
    }

    pub fn history(&self) -> &[(usize, Direction)] {
        &self.history
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    fn check_slot(&self, k: usize) -> Result<()> {
        if k >= self.len() {
            return Err(Error::Index { index: k + 1, n: self.len() });
        }
        Ok(())
    }

    /// Matrix mutation at `k`.
    fn mutated_exchange(&self, k: usize) -> Vec<Vec<BigInt>> {
        let b = &self.exchange;
        let n = self.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == k || j == k {
                            -&b[i][j]
                        } else {
                            let prod = &b[i][k] * &b[k][j];
                            if prod.is_positive() {
                                if b[i][k].is_positive() {
                                    &b[i][j] + prod
                                } else {
                                    &b[i][j] - prod
                                }
                            } else {
                                b[i][j].clone()
                            }
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn tilted(&self, k: usize, direction: Direction) -> HeartState {
        let pivot = self.classes[k].clone();
        let classes = self
            .classes
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j == k {
                    return -&pivot;
                }
                let m = match direction {
                    Direction::Ccw => &self.exchange[k][j],
                    Direction::Cw => &self.exchange[j][k],
                };
                if m.is_positive() {
                    c.add_scaled(m, &pivot)
                } else {
                    c.clone()
                }
            })
            .collect();
        let mut history = self.history.clone();
        history.push((k, direction));
        HeartState { classes, exchange: self.mutated_exchange(k), history }
    }

    /// Left tilt at slot `k`, whose simple must lie in the original heart:
    /// `S_k ↦ S_k[−1]`, `[S_j] ↦ [S_j] + max(b_kj, 0)·[S_k]`.
    pub fn left_tilt(&self, k: usize) -> Result<HeartState> {
        self.check_slot(k)?;
        if !self.classes[k].is_positive() {
            return Err(Error::NotInHeart { slot: k + 1, class: self.classes[k].clone() });
        }
        Ok(self.tilted(k, Direction::Ccw))
    }

    /// Right tilt at slot `k`: `[S_j] ↦ [S_j] + max(b_jk, 0)·[S_k]`. Undoes a
    /// left tilt at the same slot.
    pub fn right_tilt(&self, k: usize) -> Result<HeartState> {
        self.check_slot(k)?;
        Ok(self.tilted(k, Direction::Cw))
    }

    /// Every slot is coordinatewise nonnegative or nonpositive.
    pub fn is_sign_coherent(&self) -> bool {
        self.classes.iter().all(|c| c.is_positive() || c.is_negative())
    }

    pub fn basis_determinant(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> = self.classes.iter().map(|c| c.coords().to_vec()).collect();
        crate::linalg::determinant(&rows)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        let b = &self.exchange;
        (0..self.len()).all(|i| (0..self.len()).all(|j| b[i][j] == -&b[j][i]))
    }

    /// No simple of the original heart is left: the heart is `A[−1]` (ccw)
    /// or `A[1]` (cw) up to the order of the slots.
    pub fn is_terminal(&self) -> bool {
        !self.classes.iter().any(KClass::is_positive)
    }
}

/// One enumerated stable class.
#[derive(Debug, Clone)]
pub struct StableRecord {
    pub step: usize,
    pub direction: Direction,
    pub class: KClass,
    pub phase_key: PhaseKey,
    pub phase: f64,
    pub q_value: BigInt,
    pub classification: ArClass,
}

#[derive(Serialize)]
struct RecordLine<'a> {
    step: usize,
    direction: Direction,
    class: &'a KClass,
    phase: f64,
    q: serde_json::Number,
    ar_class: ArClass,
}

impl StableRecord {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RecordLine {
            step: self.step,
            direction: self.direction,
            class: &self.class,
            phase: self.phase,
            q: big_number(&self.q_value),
            ar_class: self.classification,
        })
        .expect("record serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "termination", rename_all = "snake_case")]
pub enum Termination {
    /// No simple of the original heart remains.
    Completed,
    StepLimit,
    /// The last two recorded phases lie within the stop gap of a limit ray.
    ConvergedToRay { ray: String },
}

/// A limit direction for phases: a class (such as `δ`) or a real vector
/// (such as `y±`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ray {
    pub label: String,
    pub direction: RayDirection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RayDirection {
    Class(KClass),
    Real(Vec<f64>),
}

impl Ray {
    pub fn phase(&self, z: &CentralCharge) -> Option<f64> {
        match &self.direction {
            RayDirection::Class(c) => z.charge_of(c).ok()?.phase().ok(),
            RayDirection::Real(v) => z.phase_of_real(v),
        }
    }
}

/// The known accumulation rays of `q`: `δ` for Euclidean quivers, `y⁺` and
/// `y⁻` for wild ones, nothing for Dynkin quivers.
pub fn limit_rays(q: &Quiver) -> Result<Vec<Ray>> {
    Ok(match q.classify_type() {
        QuiverType::Dynkin => Vec::new(),
        QuiverType::Euclidean => vec![Ray {
            label: "delta".into(),
            direction: RayDirection::Class(q.radical_delta()?),
        }],
        QuiverType::Wild => {
            let ws = coxeter::wild_spectrum(q)?;
            vec![
                Ray { label: "y+".into(), direction: RayDirection::Real(ws.y_plus) },
                Ray { label: "y-".into(), direction: RayDirection::Real(ws.y_minus) },
            ]
        }
    })
}

/// Step-by-step driver of one mutation run. Exposes the current heart so
/// callers can inspect every intermediate state.
pub struct Mutator<'a> {
    charge: &'a CentralCharge,
    direction: Direction,
    state: HeartState,
}

impl<'a> Mutator<'a> {
    pub fn new(q: &Quiver, charge: &'a CentralCharge, direction: Direction) -> Result<Self> {
        charge.check_quiver(q)?;
        Ok(Mutator { charge, direction, state: HeartState::initial(q) })
    }

    pub fn state(&self) -> &HeartState {
        &self.state
    }

    /// Select, tilt, and return the tilted class with its phase key; `None`
    /// once the heart is terminal.
    pub fn step(&mut self) -> Result<Option<(KClass, PhaseKey)>> {
        let mut best: Option<(usize, PhaseKey)> = None;
        let mut tie: Option<usize> = None;
        for (slot, class) in self.state.classes().iter().enumerate() {
            if !class.is_positive() {
                continue;
            }
            let key = self.charge.phase_key(class)?;
            let replace = match &best {
                None => true,
                Some((_, b)) => {
                    let ord = key.cmp(b);
                    if ord.is_eq() {
                        tie = Some(slot);
                        false
                    } else {
                        match self.direction {
                            Direction::Ccw => ord.is_gt(),
                            Direction::Cw => ord.is_lt(),
                        }
                    }
                }
            };
            if replace {
                best = Some((slot, key));
                // a tie with the previous best no longer matters
                tie = None;
            }
        }
        let Some((slot, key)) = best else {
            return Ok(None);
        };
        if let Some(other) = tie {
            return Err(Error::PhaseTie(
                self.state.classes()[slot].clone(),
                self.state.classes()[other].clone(),
            ));
        }
        let class = self.state.classes()[slot].clone();
        self.state = match self.direction {
            Direction::Ccw => self.state.left_tilt(slot)?,
            Direction::Cw => self.state.right_tilt(slot)?,
        };
        if !self.state.is_sign_coherent() {
            return Err(Error::Invariant(format!(
                "heart after tilting at {class} is not sign coherent"
            )));
        }
        Ok(Some((class, key)))
    }
}

#[derive(Debug, Clone)]
pub struct MutationRun {
    pub direction: Direction,
    pub records: Vec<StableRecord>,
    pub termination: Termination,
    pub final_state: HeartState,
}

fn check_run_arguments(max_steps: usize, stop_gap: Option<f64>) -> Result<()> {
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    if max_steps > MAX_STEPS {
        return Err(Error::GuardExceeded(format!("max_steps {max_steps} > {MAX_STEPS}")));
    }
    if let Some(g) = stop_gap {
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::InvalidArgument(format!("stop_gap {g} not in (0, 1)")));
        }
    }
    Ok(())
}

/// Run the mutation method for at most `max_steps` tilts.
pub fn run_mutation(
    q: &Quiver,
    z: &CentralCharge,
    direction: Direction,
    max_steps: usize,
    stop_gap: Option<f64>,
) -> Result<MutationRun> {
    check_run_arguments(max_steps, stop_gap)?;
    let rays = limit_rays(q)?;
    let classifier = ModuleClassifier::new(q)?;
    run_with(q, z, direction, max_steps, stop_gap, &rays, &classifier)
}

fn run_with(
    q: &Quiver,
    z: &CentralCharge,
    direction: Direction,
    max_steps: usize,
    stop_gap: Option<f64>,
    rays: &[Ray],
    classifier: &ModuleClassifier,
) -> Result<MutationRun> {
    let ray_phases: Vec<(&str, f64)> = rays
        .iter()
        .filter_map(|r| Some((r.label.as_str(), r.phase(z)?)))
        .collect();
    let mut mutator = Mutator::new(q, z, direction)?;
    let mut records: Vec<StableRecord> = Vec::new();
    let mut termination = Termination::StepLimit;
    for step in 1..=max_steps {
        let Some((class, key)) = mutator.step()? else {
            termination = Termination::Completed;
            break;
        };
        let phase = key.phase();
        records.push(StableRecord {
            step,
            direction,
            q_value: q.tits_form(&class)?,
            class,
            phase_key: key,
            phase,
            classification: ArClass::Unknown,
        });
        if let (Some(gap), [.., a, b]) = (stop_gap, records.as_slice()) {
            let hit = ray_phases
                .iter()
                .find(|(_, p)| (a.phase - p).abs() < gap && (b.phase - p).abs() < gap);
            if let Some((label, _)) = hit {
                termination = Termination::ConvergedToRay { ray: label.to_string() };
                break;
            }
        }
    }
    if termination == Termination::StepLimit && mutator.state().is_terminal() {
        termination = Termination::Completed;
    }
    // largest classes first so the wild classifier sizes its precision once
    for r in records.iter_mut().rev() {
        r.classification = classifier.classify_or_unknown(&r.class);
    }
    Ok(MutationRun { direction, records, termination, final_state: mutator.state().clone() })
}

#[derive(Debug, Clone, Serialize)]
pub struct SideReport {
    pub direction: Direction,
    /// Phases strictly decreasing (ccw) or increasing (cw).
    pub monotone: bool,
    pub last_phase: f64,
    pub nearest_ray: String,
    pub ray_phase: f64,
    /// `|phase − ray phase|` per record.
    pub gaps: Vec<f64>,
    /// Open interval between the last recorded phase and the ray; no
    /// recorded phase falls inside it.
    pub not_dense_window: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "accumulation", rename_all = "snake_case")]
pub enum AccumulationReport {
    NoAccumulation,
    Side(SideReport),
}

/// Summarize how the recorded phases of one run approach the nearest ray.
/// Finished runs, empty runs and runs without rays do not accumulate.
pub fn detect_accumulation(
    records: &[StableRecord],
    termination: &Termination,
    z: &CentralCharge,
    rays: &[Ray],
) -> AccumulationReport {
    let Some(last) = records.last() else {
        return AccumulationReport::NoAccumulation;
    };
    if *termination == Termination::Completed {
        return AccumulationReport::NoAccumulation;
    }
    let nearest = rays
        .iter()
        .filter_map(|r| Some((r, r.phase(z)?)))
        .min_by(|a, b| (a.1 - last.phase).abs().total_cmp(&(b.1 - last.phase).abs()));
    let Some((ray, ray_phase)) = nearest else {
        return AccumulationReport::NoAccumulation;
    };
    let monotone = records.windows(2).all(|w| match last.direction {
        Direction::Ccw => w[0].phase_key > w[1].phase_key,
        Direction::Cw => w[0].phase_key < w[1].phase_key,
    });
    AccumulationReport::Side(SideReport {
        direction: last.direction,
        monotone,
        last_phase: last.phase,
        nearest_ray: ray.label.clone(),
        ray_phase,
        gaps: records.iter().map(|r| (r.phase - ray_phase).abs()).collect(),
        not_dense_window: (last.phase.min(ray_phase), last.phase.max(ray_phase)),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RayAnnotation {
    None,
    /// Euclidean: imaginary classes `rδ` sit on this ray.
    ImaginaryRay { delta: KClass, phase: f64 },
    /// Wild: regular stables have phases between the two limits.
    RegularWindow { phi_minus: f64, phi_plus: f64 },
}

#[derive(Debug, Clone)]
pub struct BilateralReport {
    pub ccw: MutationRun,
    pub cw: MutationRun,
    pub ccw_accumulation: AccumulationReport,
    pub cw_accumulation: AccumulationReport,
    pub annotation: RayAnnotation,
}

/// Counterclockwise and clockwise runs with their accumulation reports.
pub fn run_both(
    q: &Quiver,
    z: &CentralCharge,
    max_steps: usize,
    stop_gap: Option<f64>,
) -> Result<BilateralReport> {
    check_run_arguments(max_steps, stop_gap)?;
    let rays = limit_rays(q)?;
    let classifier = ModuleClassifier::new(q)?;
    let ccw = run_with(q, z, Direction::Ccw, max_steps, stop_gap, &rays, &classifier)?;
    let cw = run_with(q, z, Direction::Cw, max_steps, stop_gap, &rays, &classifier)?;
    let ccw_accumulation = detect_accumulation(&ccw.records, &ccw.termination, z, &rays);
    let cw_accumulation = detect_accumulation(&cw.records, &cw.termination, z, &rays);
    let annotation = match (q.classify_type(), classifier.spectrum()) {
        (QuiverType::Euclidean, _) => {
            let delta = q.radical_delta()?;
            let phase = z.charge_of(&delta)?.phase()?;
            RayAnnotation::ImaginaryRay { delta, phase }
        }
        (QuiverType::Wild, Some(ws)) => {
            let (phi_minus, phi_plus) = coxeter::limit_phases(ws, z);
            RayAnnotation::RegularWindow { phi_minus, phi_plus }
        }
        _ => RayAnnotation::None,
    };
    Ok(BilateralReport { ccw, cw, ccw_accumulation, cw_accumulation, annotation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(v: &[i64]) -> KClass {
        KClass::from(v)
    }

    fn a2() -> Quiver {
        Quiver::new(2, &[(1, 2)]).unwrap()
    }

    fn classes(run: &MutationRun) -> Vec<KClass> {
        run.records.iter().map(|r| r.class.clone()).collect()
    }

    #[test]
    fn left_tilt_examples() {
        let s = HeartState::initial(&Quiver::kronecker(2));
        assert_eq!(s.left_tilt(0).unwrap().classes(), &[k(&[-1, 0]), k(&[2, 1])]);
        let s = HeartState::initial(&a2());
        assert_eq!(s.left_tilt(0).unwrap().classes(), &[k(&[-1, 0]), k(&[1, 1])]);
        assert_eq!(s.left_tilt(1).unwrap().classes(), &[k(&[1, 0]), k(&[0, -1])]);
        let t = s.left_tilt(0).unwrap();
        assert!(matches!(t.left_tilt(0), Err(Error::NotInHeart { slot: 1, .. })));
    }

    #[test]
    fn right_tilt_examples() {
        let s = HeartState::initial(&a2());
        assert_eq!(s.left_tilt(0).unwrap().right_tilt(0).unwrap(), s);
        let kr = HeartState::initial(&Quiver::kronecker(2));
        assert_eq!(kr.right_tilt(1).unwrap().classes(), &[k(&[1, 2]), k(&[0, -1])]);
        assert!(matches!(kr.right_tilt(2), Err(Error::Index { index: 3, n: 2 })));
    }

    #[test]
    fn a2_runs() {
        let z = CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap();
        let run = run_mutation(&a2(), &z, Direction::Ccw, 10, None).unwrap();
        assert_eq!(classes(&run), vec![k(&[1, 0]), k(&[1, 1]), k(&[0, 1])]);
        assert_eq!(run.termination, Termination::Completed);

        let z = CentralCharge::from_ints(&[(1, 1), (-1, 1)]).unwrap();
        let run = run_mutation(&a2(), &z, Direction::Ccw, 10, None).unwrap();
        assert_eq!(classes(&run), vec![k(&[0, 1]), k(&[1, 0])]);
        assert_eq!(run.termination, Termination::Completed);
    }

    #[test]
    fn kronecker_ccw_run() {
        let z = CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap();
        let run = run_mutation(&Quiver::kronecker(2), &z, Direction::Ccw, 50, None).unwrap();
        let expected: Vec<KClass> = (0..50).map(|m| k(&[m + 1, m])).collect();
        assert_eq!(classes(&run), expected);
        assert_eq!(run.termination, Termination::StepLimit);
        assert!(run.records.windows(2).all(|w| w[0].phase > w[1].phase && w[1].phase > 0.5));
    }

    #[test]
    fn accumulation_examples() {
        let q = Quiver::kronecker(2);
        let z = CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap();
        let run = run_mutation(&q, &z, Direction::Ccw, 50, None).unwrap();
        let rays = limit_rays(&q).unwrap();
        let AccumulationReport::Side(side) =
            detect_accumulation(&run.records, &run.termination, &z, &rays)
        else {
            panic!("expected accumulation");
        };
        assert!(side.monotone);
        assert_eq!(side.nearest_ray, "delta");
        // Z(50, 49) = -1 + 99i
        let expected = (1.0f64 / 99.0).atan() / std::f64::consts::PI;
        assert!((side.gaps[49] - expected).abs() < 1e-12);
        assert!((side.gaps[49] - 0.0032).abs() < 1e-4);
        assert_eq!(side.not_dense_window.0, 0.5);

        let a2_run = run_mutation(&a2(), &z, Direction::Ccw, 10, None).unwrap();
        assert!(matches!(
            detect_accumulation(&a2_run.records, &a2_run.termination, &z, &rays),
            AccumulationReport::NoAccumulation
        ));
    }

    #[test]
    fn stop_gap_converges() {
        let z = CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap();
        let run = run_mutation(&Quiver::kronecker(2), &z, Direction::Ccw, 1000, Some(0.01)).unwrap();
        assert_eq!(run.termination, Termination::ConvergedToRay { ray: "delta".into() });
        assert!(run.records.len() < 100);
    }

    #[test]
    fn argument_guards() {
        let z = CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap();
        let q = Quiver::kronecker(2);
        assert!(matches!(run_mutation(&q, &z, Direction::Ccw, 0, None), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            run_mutation(&q, &z, Direction::Ccw, MAX_STEPS + 1, None),
            Err(Error::GuardExceeded(_))
        ));
        assert!(matches!(
            run_mutation(&q, &z, Direction::Ccw, 5, Some(1.5)),
            Err(Error::InvalidArgument(_))
        ));
        let z3 = CentralCharge::from_ints(&[(-1, 1), (1, 1), (0, 1)]).unwrap();
        assert!(matches!(
            run_mutation(&q, &z3, Direction::Ccw, 5, None),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn phase_tie_is_reported() {
        // S1 and S2 on the same ray
        let z = CentralCharge::from_ints(&[(-1, 1), (-2, 2)]).unwrap();
        let err = run_mutation(&Quiver::kronecker(2), &z, Direction::Ccw, 5, None).unwrap_err();
        assert_eq!(err, Error::PhaseTie(k(&[1, 0]), k(&[0, 1])));
    }

    #[test]
    fn bilateral_a2() {
        let z = CentralCharge::from_ints(&[(-1, 1), (1, 1)]).unwrap();
        let rep = run_both(&a2(), &z, 10, None).unwrap();
        let mut cw = classes(&rep.cw);
        cw.reverse();
        assert_eq!(classes(&rep.ccw), cw);
        assert!(matches!(rep.annotation, RayAnnotation::None));
    }

    #[test]
    fn double_mutation_is_identity() {
        let q = Quiver::new(3, &[(1, 2), (1, 2), (2, 3), (1, 3)]).unwrap();
        let mut s = HeartState::initial(&q);
        for k in [0, 1, 0, 2] {
            s = s.left_tilt(k).or_else(|_| s.right_tilt(k)).unwrap();
            assert!(s.is_skew_symmetric());
            for j in 0..3 {
                let back = if s.classes()[j].is_positive() {
                    s.left_tilt(j).unwrap().right_tilt(j).unwrap()
                } else {
                    s.right_tilt(j).unwrap().left_tilt(j).unwrap()
                };
                assert_eq!(back, s);
            }
        }
    }
}
