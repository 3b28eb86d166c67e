//! Scalar abstraction shared by every module.
//!
//! All operator-algebra code is written against [`Real`], which is
//! implemented for `f32` and `f64`. Numerical thresholds travel with the
//! scalar type through [`Tolerances`].

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::ToPrimitive;

/// Complex matrix over the scalar `T`.
pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Complex column vector over the scalar `T`.
pub type CVector<T> = DVector<Complex<T>>;

/// Real scalar usable as the base field of the operator algebra.
pub trait Real: RealField + Copy + ToPrimitive {
    /// Thresholds calibrated to the precision of this type.
    fn tolerances() -> Tolerances<Self>;

    /// Converts an `f64` literal into `Self`.
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Lossy conversion to `f64`, for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Numerical thresholds. Every comparison in the crate goes through one of
/// these fields, never through an inline literal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Max Frobenius deviation `|A - A*|` accepted for Hermitian input.
    pub herm: T,
    /// Max Frobenius deviation for `P = P* = P^2` and lattice comparisons.
    pub proj: T,
    /// Distance from an integer accepted for the trace of a projection.
    pub rank: T,
    /// Membership threshold `|Px - x|` for atomic quasipoints; also the
    /// singular-value cutoff used when computing meets and joins.
    pub member: T,
    /// Relative eigenvalue clustering width, scaled by `max(1, |A|)`.
    pub eig_rel: T,
    /// Relative reconstruction tolerance, scaled by `max(1, |A|)`.
    pub recon_rel: T,
    /// Absolute tolerance used when comparing function values.
    pub identity: T,
    /// Allowed deviation of `|x|` from one for state vectors.
    pub unit: T,
}

impl Real for f64 {
    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            herm: 1e-10,
            proj: 1e-9,
            rank: 1e-6,
            member: 1e-8,
            eig_rel: 1e-8,
            recon_rel: 1e-8,
            identity: 1e-9,
            unit: 1e-12,
        }
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            herm: 1e-5,
            proj: 1e-4,
            rank: 1e-3,
            member: 1e-3,
            eig_rel: 1e-4,
            recon_rel: 1e-4,
            identity: 1e-4,
            unit: 1e-5,
        }
    }
}

/// Shorthand for `T::tolerances()`.
pub fn tol<T: Real>() -> Tolerances<T> {
    T::tolerances()
}

pub(crate) fn c<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
