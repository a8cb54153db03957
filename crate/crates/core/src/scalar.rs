//! Scalar abstraction and the tolerance bundle threaded through the crate.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the whole crate is generic over: `f32` or `f64`.
pub trait Real: RealField + FromPrimitive + ToPrimitive + Copy {}
impl<T> Real for T where T: RealField + FromPrimitive + ToPrimitive + Copy {}

/// Convert an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal not representable in scalar type")
}

/// Tolerances used by degeneracy grouping, coupling-zero detection and
/// rank decisions. All are relative: each consumer documents its scale.
///
/// Defaults target `f64`; with `f32` pass explicitly loosened values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T: Real = f64> {
    /// Degeneracy grouping: gaps below `tol_deg * max|Ω|` merge.
    pub tol_deg: T,
    /// Zero-coupling detection: column norms below `tol_cpl * ‖C_AB‖_F` are dark.
    pub tol_cpl: T,
    /// Rank cutoff: singular values below `tol_rank * σ_max` of the group count as zero.
    pub tol_rank: T,
    /// Eigensolver residual acceptance: `‖Hv − λv‖ ≤ tol_eig * ‖H‖`.
    pub tol_eig: T,
    /// Stability margin: stable iff every drift eigenvalue has `Re λ < −tol_stab`.
    pub tol_stab: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            tol_deg: lit(1e-8),
            tol_cpl: lit(1e-10),
            tol_rank: lit(1e-10),
            tol_eig: lit(1e-10),
            tol_stab: lit(1e-12),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn with_tol_deg(mut self, tol: T) -> Self {
        self.tol_deg = tol;
        self
    }

    pub fn with_tol_cpl(mut self, tol: T) -> Self {
        self.tol_cpl = tol;
        self
    }

    pub fn with_tol_rank(mut self, tol: T) -> Self {
        self.tol_rank = tol;
        self
    }
}
