//! Quantum CSS codes from algebraic-geometry evaluation codes with transversally
//! addressable CCZ gates.
//!
//! Pipeline: [`curve::Curve`] → [`lincode::EvalCode`] → [`css::build_css`] →
//! [`synth::synthesize`] → [`schedule::greedy_schedule`] → [`verify`].

pub mod css;
pub mod curve;
pub mod error;
pub mod field;
pub mod lincode;
pub mod schedule;
pub mod synth;
pub mod verify;

pub use css::{build_css, check_assumption, CssArtifact, CssCode, DesignedBounds, TowerParams};
pub use curve::{AutMap, Curve, CurveData, CurveKind, CurveSpec, PlaceTable};
pub use error::{
    CodeError, CssError, CurveError, FieldError, ParamsError, SynthError, VerifyError,
};
pub use field::{Field, FieldElem, FieldParams};
pub use lincode::{EvalCode, Matrix};
pub use schedule::{greedy_schedule, validate_schedule, Schedule};
pub use synth::{synthesize, CczGate, GateList, Leg, LogicalTarget, Pattern, SynthOptions};
pub use verify::{verify_logical_ccz, verify_state_oracle, Certificate, StateOptions};
