//! Exact enumeration of stable classes for acyclic quivers.
//!
//! A central charge on the module category of an acyclic quiver is rotated
//! and the heart is tilted at its left-most simple each time that simple
//! leaves the upper half-plane. The tilted simples are the stable objects, in
//! order of decreasing phase. The crate tracks the hearts through the classes
//! of their simples and an integer exchange matrix, classifies the results
//! with Euler-form and Coxeter data, and checks everything against a
//! brute-force oracle over small prime fields.
//!
//! Modules:
//!
//! - [`quiver`]: quivers, classes, Euler/Tits forms, type classification
//! - [`charge`]: exact central charges and phase comparison
//! - [`tilting`]: the mutation method and accumulation detection
//! - [`coxeter`]: Coxeter transformation, defect, wild spectra
//! - [`oracle`]: explicit representations over `F_p`

pub mod charge;
pub mod coxeter;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod quiver;
pub mod tilting;

pub use charge::{CentralCharge, PhaseKey, RationalComplex, RigidityReport, RigidityVerdict};
pub use coxeter::{ArClass, CoxeterData, ModuleClassifier, WildSpectrum};
pub use error::{Error, Result};
pub use quiver::{KClass, Quiver, QuiverType, RootType};
pub use oracle::{HnFactor, Representation};
pub use tilting::{
    AccumulationReport, BilateralReport, Direction, HeartState, MutationRun, Ray, RayAnnotation,
    StableRecord, Termination,
};
