//! One type-a mode flanked by two hopping chains of type-b modes.
//!
//! Nearest-neighbor chains diagonalize in closed form,
//! `Ω_n = ω_m + 2η cos(nπ/(N+1))`, so dark modes are predicted by counting
//! frequency coincidences between the two chains' spectra, a pure
//! number-theory statement on the chain lengths.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::darkmode::analyze_spec;
use crate::error::Result;
use crate::network::NetworkSpec;
use crate::scalar::{lit, Real, Tolerances};
use crate::Cx;

/// Two-chain network parameters. Dissipation and thermal occupation are
/// uniform over the type-b modes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec<T: Real = f64> {
    pub n_left: usize,
    pub n_right: usize,
    pub omega_m: T,
    pub eta: T,
    pub g_left: T,
    pub g_right: T,
    pub delta1: T,
    pub kappa: T,
    pub gamma: T,
    pub nbar: T,
}

/// Closed-form normal frequencies of both chains, in chain-index order
/// (descending in frequency for positive `eta`).
#[derive(Debug, Clone, PartialEq)]
pub struct ChainFrequencies<T: Real = f64> {
    pub left: Vec<T>,
    pub right: Vec<T>,
}

fn chain_frequencies<T: Real>(len: usize, omega_m: T, eta: T) -> Vec<T> {
    let denom = T::from_usize(len + 1).expect("small length");
    (1..=len)
        .map(|n| {
            let angle = T::pi() * T::from_usize(n).expect("small index") / denom;
            omega_m + lit::<T>(2.0) * eta * angle.cos()
        })
        .collect()
}

/// Build the `1 + (N_l + N_r)` network: the type-a mode couples to the first
/// mode of each chain, neighbors hop with strength `eta`.
pub fn build_chain_network<T: Real>(chain: &ChainSpec<T>) -> (NetworkSpec<T>, ChainFrequencies<T>) {
    let (nl, nr) = (chain.n_left, chain.n_right);
    let n = nl + nr;
    let mut s = NetworkSpec::<T>::empty(1, n);
    s.delta[0] = chain.delta1;
    s.omega = DVector::from_element(n, chain.omega_m);
    s.kappa[0] = chain.kappa;
    s.gamma = DVector::from_element(n, chain.gamma);
    s.nbar = DVector::from_element(n, chain.nbar);
    // The chain couplings enter with a minus sign; irrelevant for counts,
    // kept for fidelity with the displacement-coupled Hamiltonian.
    if nl > 0 {
        s.g[(0, 0)] = Cx::new(-chain.g_left, T::zero());
    }
    if nr > 0 {
        s.g[(0, nl)] = Cx::new(-chain.g_right, T::zero());
    }
    for j in 0..nl.saturating_sub(1) {
        s.set_eta(j, j + 1, Cx::new(chain.eta, T::zero()));
    }
    for j in 0..nr.saturating_sub(1) {
        s.set_eta(nl + j, nl + j + 1, Cx::new(chain.eta, T::zero()));
    }
    let freqs = ChainFrequencies {
        left: chain_frequencies(nl, chain.omega_m, chain.eta),
        right: chain_frequencies(nr, chain.omega_m, chain.eta),
    };
    (s, freqs)
}

/// Parity class of the chain-length pair, the qualitative rationale for the
/// coincidence count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityCase {
    /// Both lengths odd: both spectra contain `ω_m` itself.
    BothOdd,
    /// Mixed parity: coincidences only at shared rational angles.
    Mixed,
    /// Both even.
    BothEven,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainDarkReport<T: Real = f64> {
    pub computed_dark: usize,
    /// Coincidence prediction `gcd(N_l+1, N_r+1) − 1`.
    pub predicted_dark: usize,
    pub parity: ParityCase,
    pub frequencies: ChainFrequencies<T>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Both chains' frequencies coincide exactly when
/// `n (N_r + 1) = n' (N_l + 1)`, giving `gcd(N_l+1, N_r+1) − 1` coincident
/// pairs; every coincident pair carries one dark mode (both couplings are
/// nonzero), and no other degeneracies exist within a chain.
pub fn chain_dark_prediction<T: Real>(
    chain: &ChainSpec<T>,
    tols: &Tolerances<T>,
) -> Result<ChainDarkReport<T>> {
    let (spec, frequencies) = build_chain_network(chain);
    let computed = analyze_spec(&spec, tols)?;
    let predicted = gcd(chain.n_left + 1, chain.n_right + 1) - 1;
    let parity = match (chain.n_left % 2, chain.n_right % 2) {
        (1, 1) => ParityCase::BothOdd,
        (0, 0) => ParityCase::BothEven,
        _ => ParityCase::Mixed,
    };
    Ok(ChainDarkReport {
        computed_dark: computed.dark_count,
        predicted_dark: predicted,
        parity,
        frequencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::to_normal_form;
    use approx::assert_relative_eq;

    fn chain(nl: usize, nr: usize) -> ChainSpec<f64> {
        ChainSpec {
            n_left: nl,
            n_right: nr,
            omega_m: 1.0,
            eta: 0.2,
            g_left: 0.2,
            g_right: 0.2,
            delta1: 1.0,
            kappa: 0.2,
            gamma: 1e-5,
            nbar: 1e3,
        }
    }

    #[test]
    fn closed_form_frequencies() {
        let eta = 0.2;
        let (_, freqs) = build_chain_network(&chain(2, 5));
        // Length 2: ω_m ± η.
        assert_relative_eq!(freqs.left[0], 1.0 + eta, epsilon = 1e-12);
        assert_relative_eq!(freqs.left[1], 1.0 - eta, epsilon = 1e-12);
        // Length 5: ω_m ± √3 η, ω_m ± η, ω_m.
        let mut right = freqs.right.clone();
        right.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let sqrt3 = 3.0f64.sqrt();
        let expect = [
            1.0 - sqrt3 * eta,
            1.0 - eta,
            1.0,
            1.0 + eta,
            1.0 + sqrt3 * eta,
        ];
        for (got, want) in right.iter().zip(expect) {
            assert_relative_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_mode_chain_sits_at_omega_m() {
        let (_, freqs) = build_chain_network(&chain(1, 1));
        assert_relative_eq!(freqs.left[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(freqs.right[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn numeric_frequencies_match_closed_form() {
        for (nl, nr) in [(2, 5), (3, 4), (1, 7), (2, 8)] {
            let c = chain(nl, nr);
            let (spec, freqs) = build_chain_network(&c);
            let form = to_normal_form(&spec).unwrap();
            let mut expect: Vec<f64> = freqs.left.iter().chain(freqs.right.iter()).copied().collect();
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (got, want) in form.omega.iter().zip(expect) {
                assert_relative_eq!(*got, want, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn coincidence_prediction_matches_census() {
        for (nl, nr, expect) in [(2usize, 5usize, 2usize), (2, 8, 2), (1, 1, 1), (1, 5, 1), (3, 4, 0)] {
            let rep = chain_dark_prediction(&chain(nl, nr), &Tolerances::default()).unwrap();
            assert_eq!(rep.predicted_dark, expect, "({nl},{nr})");
            assert_eq!(rep.computed_dark, expect, "({nl},{nr})");
        }
    }

    #[test]
    fn eight_mode_chain_contains_both_shared_frequencies() {
        let (_, freqs) = build_chain_network(&chain(2, 8));
        let has = |target: f64| freqs.right.iter().any(|&w| (w - target).abs() < 1e-12);
        assert!(has(1.0 + 0.2) && has(1.0 - 0.2));
    }
}
