//! Antonymous and observable functions of self-adjoint operators on
//! finite-dimensional von Neumann algebras, evaluated on quasipoints of the
//! Stone spectrum.
//!
//! The algebra `R` is a finite direct sum of full matrix blocks acting on
//! `C^n`. Everything is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`); the aliases at the crate root fix `f64` or `f32`.

pub mod error;
pub mod functions;
pub mod gelfand;
pub mod json;
pub mod measurement;
pub mod oracle;
pub mod presheaf;
pub mod projlat;
pub mod quasipoint;
pub mod random;
pub mod report;
pub mod scalar;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use functions::{
    antonymous, approximate, evaluate_step, observable, relation_suite, step_decomposition, Approximation, Piece,
    StepDecomposition, StepFunction,
};
pub use gelfand::{
    complex_extension, gelfand_coincidence_check, gelfand_spectrum, gelfand_transform, theta, theta_inv, Character,
    GelfandTransform,
};
pub use measurement::{expectation, mixed_expectation, outcome_bounds, simulate_measurements, SampleStatistics};
pub use presheaf::{presheaf_laws_check, restrict, restriction_d};
pub use projlat::{atoms, AlgebraContext, AtomFamily, HermitianOperator, Projection};
pub use quasipoint::{AtomicQuasipoint, BooleanUltrafilter, Dichotomy, Quasipoint};
pub use report::{Check, Report};
pub use scalar::{CMatrix, CVector, Real, Tolerances};
pub use spectral::{
    from_opposite, opposite_of, phi, phi_inv, ContinuityKind, Left, LeftFamily, OppositeSpectralFamily, Right,
    RightFamily, SpectralFamily,
};

pub type Hermitian64 = HermitianOperator<f64>;
pub type Projection64 = Projection<f64>;
pub type Quasipoint64 = Quasipoint<f64>;
pub type LeftFamily64 = LeftFamily<f64>;
pub type RightFamily64 = RightFamily<f64>;
pub type OppositeFamily64 = OppositeSpectralFamily<f64>;
pub type StepFunction64 = StepFunction<f64>;

pub type Hermitian32 = HermitianOperator<f32>;
pub type Projection32 = Projection<f32>;
pub type Quasipoint32 = Quasipoint<f32>;
pub type LeftFamily32 = LeftFamily<f32>;
pub type RightFamily32 = RightFamily<f32>;
pub type OppositeFamily32 = OppositeSpectralFamily<f32>;
pub type StepFunction32 = StepFunction<f32>;
