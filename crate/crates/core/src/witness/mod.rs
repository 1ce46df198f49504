//! The witness catalog: polygonal, conical, cylindrical and spherical
//! families (with their phase-gate conjugates), closed-form minima over
//! the angle fibers, and the parameter-level detection inequalities.

mod build;
mod conditions;
mod detect;
mod functional;
mod id;

pub use build::{build_witness, enumerate_witnesses, expectation, family_members, witness_terms};
pub use conditions::{detection_conditions, ConditionReport, Verdict};
pub use detect::{
    detect, detect_222, detect_22d, family_minima, ChessParams, DetectionReport, FamilyMinimum, MARGINAL_BAND,
    ROUNDOFF_FLOOR,
};
pub use functional::{fiber_minimum, functional_conical, functional_cylindrical, functional_spherical, FiberMinimum};
pub use id::{cyclic_partners, sign, Angle, Family, Geometry, WitnessId, WitnessKind};
