//! Decoherence-free-subspace adapter: two two-level atoms coupled to a
//! common bath of bosonic modes, analyzed in the single-excitation sector.
//!
//! The bath modes play the type-a role and the two atomic excitations the
//! type-b role; an atomic superposition decoupled from every bath mode is a
//! dark state, and spans the decoherence-free subspace.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::darkmode::{count_dark_modes, DarkModeReport};
use crate::error::Result;
use crate::scalar::{Real, Tolerances};
use crate::spectral::ArrowheadForm;
use crate::{CMatrix, CVector, Cx};

/// Two atomic frequencies, the bath spectrum and the two coupling rows
/// `J_{1k}`, `J_{2k}` (complex, `[re, im]` pairs in files).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfsSystem<T: Real = f64> {
    pub atom_freq: [T; 2],
    pub bath_freq: Vec<T>,
    pub coupling_1: Vec<[T; 2]>,
    pub coupling_2: Vec<[T; 2]>,
}

/// Census of the single-excitation atomic sector. State vectors are over
/// `(|eg⟩, |ge⟩)` and follow the mode-operator convention: with proportional
/// coupling rows `J_2 = λ J_1` the dark state is `(λ*, −1)/√(1+|λ|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DfsReport<T: Real = f64> {
    pub dark_count: usize,
    pub dark_states: Vec<CVector<T>>,
    pub bright_states: Vec<CVector<T>>,
    /// `‖C · d‖` for each dark state on the mapped coupling block.
    pub decoupling_norms: Vec<T>,
    pub census: DarkModeReport<T>,
    /// Atom order after the degeneracy sort: `order[s]` = original index.
    pub order: Vec<usize>,
}

/// Map to the census machinery: bath frequencies on the type-a diagonal,
/// sorted atomic frequencies on the type-b diagonal, conjugated coupling
/// columns (operator convention).
pub fn dfs_arrowhead<T: Real>(dfs: &DfsSystem<T>) -> (ArrowheadForm<T>, Vec<usize>) {
    let m = dfs.bath_freq.len();
    assert_eq!(dfs.coupling_1.len(), m, "coupling_1 length mismatch");
    assert_eq!(dfs.coupling_2.len(), m, "coupling_2 length mismatch");
    let mut order = vec![0usize, 1];
    if dfs.atom_freq[1] < dfs.atom_freq[0] {
        order.swap(0, 1);
    }
    let omega = DVector::from_iterator(2, order.iter().map(|&j| dfs.atom_freq[j]));
    let col = |j: usize, k: usize| -> Cx<T> {
        let [re, im] = if j == 0 { dfs.coupling_1[k] } else { dfs.coupling_2[k] };
        Cx::new(re, im).conj()
    };
    let c_ab = CMatrix::from_fn(m, 2, |k, s| col(order[s], k));
    (
        ArrowheadForm::from_parts(DVector::from_iterator(m, dfs.bath_freq.iter().copied()), omega, c_ab),
        order,
    )
}

/// Run the census and report atomic-sector states in the original
/// `(|eg⟩, |ge⟩)` order.
pub fn dfs_single_excitation<T: Real>(dfs: &DfsSystem<T>, tols: &Tolerances<T>) -> Result<DfsReport<T>> {
    let (form, order) = dfs_arrowhead(dfs);
    let census = count_dark_modes(&form, tols);
    let unsort = |v: &CVector<T>| {
        let mut out = CVector::<T>::zeros(2);
        for (s, &orig) in order.iter().enumerate() {
            out[orig] = v[s];
        }
        out
    };
    let dark_states: Vec<CVector<T>> = census.dark_vectors.iter().map(unsort).collect();
    let bright_states: Vec<CVector<T>> = census.bright_vectors.iter().map(unsort).collect();
    let decoupling_norms = census
        .dark_vectors
        .iter()
        .map(|d| (&form.c_ab * d).norm())
        .collect();
    Ok(DfsReport {
        dark_count: census.dark_count,
        dark_states,
        bright_states,
        decoupling_norms,
        census,
        order,
    })
}
