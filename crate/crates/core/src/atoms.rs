//! Driven multi-level atom adapter: one excited state dipole-coupled to `N`
//! lower levels maps onto a single-border-row arrowhead with the drive
//! amplitudes as couplings and the negated detunings as type-b frequencies.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::darkmode::{count_dark_modes, DarkModeReport};
use crate::error::Result;
use crate::scalar::{Real, Tolerances};
use crate::spectral::ArrowheadForm;
use crate::{CMatrix, CVector, Cx};

/// Drive amplitudes `Ω_j` and detunings `Δ_j` of the `N` transitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSystem<T: Real = f64> {
    /// Complex drive amplitudes, as `[re, im]` pairs in files.
    pub drive: Vec<[T; 2]>,
    pub detuning: Vec<T>,
}

/// Bright/dark census of the lower-level manifold. State vectors are over
/// the lower levels in their original order and use the mode-operator
/// convention, so for a fully degenerate manifold the bright state has
/// coefficients proportional to `Ω_j` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomDarkReport<T: Real = f64> {
    pub dark_count: usize,
    pub bright_states: Vec<CVector<T>>,
    pub dark_states: Vec<CVector<T>>,
    /// The underlying census on the mapped arrowhead (sorted-detuning order).
    pub census: DarkModeReport<T>,
    /// `order[s]` = original level index at sorted position `s`.
    pub order: Vec<usize>,
}

/// Map the atom system onto the arrowhead form the census machinery uses:
/// apex frequency 0, type-b diagonal `−Δ_j` ascending, coupling row `Ω_j*`
/// (conjugated, so reported states follow the printed operator convention).
pub fn atom_arrowhead<T: Real>(atoms: &AtomSystem<T>) -> (ArrowheadForm<T>, Vec<usize>) {
    let n = atoms.detuning.len();
    assert_eq!(atoms.drive.len(), n, "drive/detuning length mismatch");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        (-atoms.detuning[a])
            .partial_cmp(&(-atoms.detuning[b]))
            .expect("finite detunings")
            .then(a.cmp(&b))
    });
    let omega = DVector::from_iterator(n, order.iter().map(|&j| -atoms.detuning[j]));
    let row = CMatrix::from_fn(1, n, |_, s| {
        let [re, im] = atoms.drive[order[s]];
        Cx::new(re, im).conj()
    });
    (
        ArrowheadForm::from_parts(DVector::from_element(1, T::zero()), omega, row),
        order,
    )
}

/// Run the census on the mapped arrowhead and report states over the
/// original level indices.
pub fn atom_dark_states<T: Real>(atoms: &AtomSystem<T>, tols: &Tolerances<T>) -> Result<AtomDarkReport<T>> {
    let (form, order) = atom_arrowhead(atoms);
    let census = count_dark_modes(&form, tols);
    let n = atoms.detuning.len();
    let unsort = |v: &CVector<T>| {
        let mut out = CVector::<T>::zeros(n);
        for (s, &orig) in order.iter().enumerate() {
            out[orig] = v[s];
        }
        out
    };
    let bright_states = census.bright_vectors.iter().map(unsort).collect();
    let dark_states = census.dark_vectors.iter().map(unsort).collect();
    Ok(AtomDarkReport {
        dark_count: census.dark_count,
        bright_states,
        dark_states,
        census,
        order,
    })
}
