//! Reference networks used by tests, benchmarks and the CLI examples.
//!
//! All frequencies are in units of the mechanical reference `omega_m`; every
//! preset uses the standard dissipative point `κ = 0.1 ω_m`, `γ = 1e-5 ω_m`,
//! `n̄ = 10³` unless stated otherwise. Callers tweak fields afterwards
//! (e.g. to sweep `κ`).

use nalgebra::DVector;

use crate::network::NetworkSpec;
use crate::scalar::{lit, Real};
use crate::{CMatrix, Cx};

fn dissipative<T: Real>(spec: &mut NetworkSpec<T>, omega_m: T) {
    spec.kappa = DVector::from_element(spec.m, lit::<T>(0.1) * omega_m);
    spec.gamma = DVector::from_element(spec.n, lit::<T>(1e-5) * omega_m);
    spec.nbar = DVector::from_element(spec.n, lit::<T>(1e3));
}

/// One optical mode coupled to two type-b modes that also hop into each
/// other: the smallest loop network. `δ₁ = ω₁ = ω₂ = ω_m`.
pub fn two_mode_loop<T: Real>(g11: T, g12: T, eta12: T, omega_m: T) -> NetworkSpec<T> {
    let mut s = NetworkSpec::<T>::empty(1, 2);
    s.delta[0] = omega_m;
    s.omega = DVector::from_element(2, omega_m);
    s.g[(0, 0)] = Cx::new(g11, T::zero());
    s.g[(0, 1)] = Cx::new(g12, T::zero());
    s.set_eta(0, 1, Cx::new(eta12, T::zero()));
    dissipative(&mut s, omega_m);
    s
}

/// One optical mode and four type-b modes arranged as two hopping pairs:
/// the optical mode couples to the first mode of each pair
/// (`g₁₁ = g₁₃ = g`), pairs hop with `η₁₂` and `η₃₄`. All frequencies `ω_m`.
pub fn two_pair_network<T: Real>(eta12: T, eta34: T, g: T, omega_m: T) -> NetworkSpec<T> {
    let mut s = NetworkSpec::<T>::empty(1, 4);
    s.delta[0] = omega_m;
    s.omega = DVector::from_element(4, omega_m);
    s.g[(0, 0)] = Cx::new(g, T::zero());
    s.g[(0, 2)] = Cx::new(g, T::zero());
    s.set_eta(0, 1, Cx::new(eta12, T::zero()));
    s.set_eta(2, 3, Cx::new(eta34, T::zero()));
    dissipative(&mut s, omega_m);
    s
}

/// One optical mode coupled to modes 1 and 2 (`g₁₁ = g₁₂ = g`), with modes
/// 2–3–4 forming a hopping chain of strength `η`. Mode 1 has tunable
/// frequency `ω₁`; the rest sit at `ω_m`.
pub fn pair_chain_network<T: Real>(omega1: T, eta: T, g: T, omega_m: T) -> NetworkSpec<T> {
    let mut s = NetworkSpec::<T>::empty(1, 4);
    s.delta[0] = omega_m;
    s.omega = DVector::from_element(4, omega_m);
    s.omega[0] = omega1;
    s.g[(0, 0)] = Cx::new(g, T::zero());
    s.g[(0, 1)] = Cx::new(g, T::zero());
    s.set_eta(1, 2, Cx::new(eta, T::zero()));
    s.set_eta(2, 3, Cx::new(eta, T::zero()));
    dissipative(&mut s, omega_m);
    s
}

/// Fully connected `[2,3]` network on the benchmark slice: equal detunings
/// `δ = ω_m`, all type-b frequencies `ω_m`, all hoppings `η = 0.09 ω_m`,
/// `ξ₁₂ = 0.08 ω_m`, `g₁₁ = g₁₂ = g₁₃ = g₂₁ = 0.1 ω_m`, with `g₂₂`, `g₂₃`
/// free.
pub fn two_by_three_network<T: Real>(g22: T, g23: T, omega_m: T) -> NetworkSpec<T> {
    let g0 = lit::<T>(0.1) * omega_m;
    let eta = lit::<T>(0.09) * omega_m;
    let mut s = NetworkSpec::<T>::empty(2, 3);
    s.delta = DVector::from_element(2, omega_m);
    s.omega = DVector::from_element(3, omega_m);
    s.set_xi(0, 1, Cx::new(lit::<T>(0.08) * omega_m, T::zero()));
    for j in 0..3 {
        for j2 in (j + 1)..3 {
            s.set_eta(j, j2, Cx::new(eta, T::zero()));
        }
    }
    for j in 0..3 {
        s.g[(0, j)] = Cx::new(g0, T::zero());
    }
    s.g[(1, 0)] = Cx::new(g0, T::zero());
    s.g[(1, 1)] = Cx::new(g22, T::zero());
    s.g[(1, 2)] = Cx::new(g23, T::zero());
    dissipative(&mut s, omega_m);
    s
}

/// Closed-form effective coupling block of [`two_by_three_network`] in the
/// normal-mode basis `A₁ = (−a₁+a₂)/√2`, `A₂ = (a₁+a₂)/√2`,
/// `B₁ = (−b₁+b₃)/√2`, `B₂ = (−b₁+2b₂−b₃)/√6`, `B₃ = (b₁+b₂+b₃)/√3`.
///
/// Derived by applying that unitary pair to the bare coupling block; used as
/// the independent fixture for the computed transform.
pub fn two_by_three_analytic_coupling<T: Real>(g22: T, g23: T, omega_m: T) -> CMatrix<T> {
    let g0 = lit::<T>(0.1) * omega_m;
    let half = lit::<T>(0.5);
    let s3_6 = lit::<T>(3.0).sqrt() / lit::<T>(6.0);
    let s6_6 = lit::<T>(6.0).sqrt() / lit::<T>(6.0);
    let two = lit::<T>(2.0);
    let four = lit::<T>(4.0);
    let c1 = half * (g23 - g0);
    let c2 = s3_6 * (two * g22 - g23 - g0);
    let r1c3 = s6_6 * (g22 + g23 - two * g0);
    let r2c3 = s6_6 * (g22 + g23 + four * g0);
    CMatrix::from_row_slice(
        2,
        3,
        &[
            Cx::new(c1, T::zero()),
            Cx::new(c2, T::zero()),
            Cx::new(r1c3, T::zero()),
            Cx::new(c1, T::zero()),
            Cx::new(c2, T::zero()),
            Cx::new(r2c3, T::zero()),
        ],
    )
}
