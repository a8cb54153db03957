//! Dark-mode analysis for two-component linear bosonic networks.
//!
//! A network of `M` type-a modes and `N` type-b modes with intra-type hopping
//! and inter-type couplings is described by a Hermitian coefficient matrix.
//! Diagonalizing the two intra-type sub-networks maps the network onto a
//! (thick) arrowhead matrix whose border block is the effective coupling
//! matrix `C_AB`. Dark modes, superpositions of degenerate type-b normal
//! modes that decouple from every type-a mode, are counted from the ranks of
//! the per-degeneracy-group coupling sub-matrices and constructed explicitly.
//!
//! The crate also builds the linearized Langevin drift/diffusion matrices for
//! the dissipative network, checks stability, solves the steady-state
//! Lyapunov equation and extracts final mean phonon numbers, so dark-mode
//! predictions can be cross-checked against sideband-cooling simulations.
//!
//! All numerics are generic over the real scalar via [`scalar::Real`]
//! (`f32` or `f64`); every public type defaults to `f64`, which is what the
//! CLI and the file formats use.

pub mod atoms;
pub mod chains;
pub mod darkmode;
pub mod dfs;
pub mod dynamics;
pub mod enumeration;
pub mod error;
pub mod network;
pub mod presets;
pub mod scalar;
pub mod schema;
pub mod spectral;

pub use darkmode::{count_dark_modes, DarkModeReport, DegeneracyPartition};
pub use dynamics::{final_phonon_numbers, CoolingResult};
pub use error::{Error, Result};
pub use network::{build_coefficient_matrix, validate_spec, CoefficientMatrix, NetworkSpec};
pub use scalar::{Real, Tolerances};
pub use schema::{load_spec, save_spec};
pub use spectral::{to_normal_form, ArrowheadForm};

/// Complex scalar over a real base type.
pub type Cx<T> = num_complex::Complex<T>;
/// Dynamically sized complex matrix.
pub type CMatrix<T = f64> = nalgebra::DMatrix<Cx<T>>;
/// Dynamically sized complex column vector.
pub type CVector<T = f64> = nalgebra::DVector<Cx<T>>;
/// Dynamically sized real column vector.
pub type RVector<T = f64> = nalgebra::DVector<T>;

/// Concrete `f64` aliases; the default scalar for files, CLI and tests.
pub type C64 = Cx<f64>;
pub type NetworkSpec64 = NetworkSpec<f64>;
pub type ArrowheadForm64 = ArrowheadForm<f64>;
pub type DarkModeReport64 = DarkModeReport<f64>;
pub type CoolingResult64 = CoolingResult<f64>;
