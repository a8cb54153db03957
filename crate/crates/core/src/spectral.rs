//! Normal-mode transform onto the (thick) arrowhead form, plus the
//! secular-equation diagnostics available in the single-border-row case.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::network::{build_coefficient_matrix, NetworkSpec};
use crate::scalar::{lit, Real, Tolerances};
use crate::{CMatrix, Cx};

/// Normal-mode representation of the network: both intra-type sub-networks
/// diagonalized, all inter-type structure concentrated in `c_ab`.
///
/// `u_a` and `u_b` hold the normal-mode coefficients over bare modes in their
/// rows, so `u_a * h_a * u_a† = diag(delta)` and likewise for `u_b`.
/// `omega` is ascending; ties are broken by the lowest bare index of the
/// dominant coefficient, and each row's dominant coefficient is gauge-fixed
/// to be real positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowheadForm<T: Real = f64> {
    pub delta: DVector<T>,
    pub omega: DVector<T>,
    pub c_ab: CMatrix<T>,
    pub u_a: CMatrix<T>,
    pub u_b: CMatrix<T>,
}

impl<T: Real> ArrowheadForm<T> {
    pub fn m(&self) -> usize {
        self.delta.len()
    }

    pub fn n(&self) -> usize {
        self.omega.len()
    }

    /// Build an arrowhead form directly from diagonal frequencies and a
    /// coupling block, with identity unitaries. Used by adapters that already
    /// have a diagonal intra-type structure.
    pub fn from_parts(delta: DVector<T>, omega: DVector<T>, c_ab: CMatrix<T>) -> Self {
        let m = delta.len();
        let n = omega.len();
        assert_eq!(c_ab.shape(), (m, n), "coupling block shape");
        Self {
            delta,
            omega,
            c_ab,
            u_a: CMatrix::identity(m, m),
            u_b: CMatrix::identity(n, n),
        }
    }
}

/// Eigendecomposition of one Hermitian block, rows-as-modes convention.
pub(crate) struct BlockEigen<T: Real> {
    pub values: DVector<T>,
    /// Unitary with rows equal to the (gauge-fixed) normal modes.
    pub u: CMatrix<T>,
}

/// Phase that makes the dominant (largest-modulus, first on ties)
/// coefficient of `v` real positive.
fn gauge_phase<T: Real>(v: &crate::CVector<T>) -> Cx<T> {
    let mut best = Cx::new(T::one(), T::zero());
    let mut best_mag = T::zero();
    for z in v.iter() {
        let mag = z.modulus();
        if mag > best_mag {
            best_mag = mag;
            best = *z;
        }
    }
    if best_mag > T::zero() {
        best.conj() / Cx::new(best_mag, T::zero())
    } else {
        Cx::new(T::one(), T::zero())
    }
}

/// Replace the rows of `u` inside every machine-degenerate eigenvalue run by
/// a canonical orthonormal basis of the run's subspace, so the output does
/// not depend on the eigensolver's arbitrary rotation within that subspace.
///
/// The canonical basis is the orthonormalized reduced-row-echelon basis of
/// the subspace projector, ordered by leading bare index. Only runs that are
/// degenerate at machine precision are touched; physically near-degenerate
/// eigenvalues keep their faithful eigenvectors.
fn canonicalize_degenerate_rows<T: Real>(values: &DVector<T>, u: &mut CMatrix<T>) {
    let n = values.len();
    let scale = values
        .iter()
        .fold(T::one(), |acc, &x| if x.abs() > acc { x.abs() } else { acc });
    let tol = T::default_epsilon() * lit::<T>(512.0) * scale;

    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && values[end + 1] - values[end] <= tol {
            end += 1;
        }
        let len = end - start + 1;
        if len >= 2 {
            // Projector onto the run's subspace; gauge-invariant.
            let mut p = CMatrix::<T>::zeros(n, n);
            for r in start..=end {
                let row = u.row(r);
                for i in 0..n {
                    for j in 0..n {
                        p[(i, j)] += row[i] * row[j].conj();
                    }
                }
            }
            // RREF of conj(P): its rows span the column space of P, i.e. the
            // subspace itself, in a solver-independent canonical form.
            let mut a = p.map(|z| z.conj());
            let mut rank = 0;
            for col in 0..n {
                if rank == len {
                    break;
                }
                let (pivot, mag) = (rank..n)
                    .map(|r| (r, a[(r, col)].modulus()))
                    .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))
                    .expect("nonempty");
                if mag < lit::<T>(1e-6) {
                    continue;
                }
                a.swap_rows(rank, pivot);
                let inv = Cx::new(T::one(), T::zero()) / a[(rank, col)];
                for j in 0..n {
                    a[(rank, j)] *= inv;
                }
                for r in 0..n {
                    if r != rank {
                        let f = a[(r, col)];
                        for j in 0..n {
                            let sub = f * a[(rank, j)];
                            a[(r, j)] -= sub;
                        }
                    }
                }
                rank += 1;
            }
            debug_assert_eq!(rank, len, "projector rank must match run length");

            // Orthonormalize the echelon rows in order (two MGS passes).
            let mut basis: Vec<crate::CVector<T>> = Vec::with_capacity(len);
            for r in 0..len {
                let mut v = a.row(r).transpose();
                for _ in 0..2 {
                    for b in &basis {
                        let along = b.dotc(&v);
                        v -= b * along;
                    }
                }
                let norm = v.norm();
                v /= Cx::new(norm, T::zero());
                basis.push(v);
            }
            for (offset, v) in basis.iter().enumerate() {
                let phase = gauge_phase(v);
                for j in 0..n {
                    u[(start + offset, j)] = v[j] * phase;
                }
            }
        }
        start = end + 1;
    }
}

/// Dense Hermitian eigendecomposition with ascending sort, deterministic
/// tie-break, gauge fixing and residual validation.
pub(crate) fn hermitian_eigen<T: Real>(h: &CMatrix<T>, tol_eig: T) -> Result<BlockEigen<T>> {
    let n = h.nrows();
    let eig = SymmetricEigen::try_new(h.clone(), T::default_epsilon(), 200 * n.max(4))
        .ok_or_else(|| Error::EigensolverFailure("Hermitian QL iteration did not converge".into()))?;

    let scale = {
        let s = h.norm();
        if s > T::zero() {
            s
        } else {
            T::one()
        }
    };
    for i in 0..n {
        let v = eig.eigenvectors.column(i);
        let resid = (h * v - v * Cx::new(eig.eigenvalues[i], T::zero())).norm();
        if resid > tol_eig * scale {
            return Err(Error::EigensolverFailure(format!(
                "eigenpair residual {:?} above tolerance",
                resid.to_f64()
            )));
        }
    }

    // Dominant bare-mode index of each eigenvector, used for tie-breaking
    // the ascending sort and for the phase gauge.
    let dominant = |col: usize| -> usize {
        let v = eig.eigenvectors.column(col);
        let mut best = 0;
        let mut best_mag = T::zero();
        for (idx, z) in v.iter().enumerate() {
            let mag = z.modulus();
            if mag > best_mag {
                best_mag = mag;
                best = idx;
            }
        }
        best
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
            .then_with(|| dominant(a).cmp(&dominant(b)))
    });

    let mut values = DVector::from_element(n, T::zero());
    let mut u = DMatrix::from_element(n, n, Cx::new(T::zero(), T::zero()));
    for (rank, &col) in order.iter().enumerate() {
        values[rank] = eig.eigenvalues[col];
        let v = eig.eigenvectors.column(col);
        // Row of U is the conjugated eigenvector, phase-gauged afterwards.
        for j in 0..n {
            u[(rank, j)] = v[j].conj();
        }
        let row = u.row(rank).transpose();
        let phase = gauge_phase(&row);
        for j in 0..n {
            u[(rank, j)] *= phase;
        }
    }
    canonicalize_degenerate_rows(&values, &mut u);
    Ok(BlockEigen { values, u })
}

/// Diagonalize both intra-type sub-networks and return the arrowhead form.
///
/// The reassembled `(M+N)` matrix is unitarily equivalent to the bare-mode
/// coefficient matrix, so the spectrum is preserved.
pub fn to_normal_form<T: Real>(spec: &NetworkSpec<T>) -> Result<ArrowheadForm<T>> {
    to_normal_form_with(spec, &Tolerances::default())
}

pub fn to_normal_form_with<T: Real>(
    spec: &NetworkSpec<T>,
    tols: &Tolerances<T>,
) -> Result<ArrowheadForm<T>> {
    let cm = build_coefficient_matrix(spec)?;
    let a = hermitian_eigen(&cm.h_a(), tols.tol_eig)?;
    let b = hermitian_eigen(&cm.h_b(), tols.tol_eig)?;
    let c_ab = &a.u * cm.c_ab() * b.u.adjoint();
    Ok(ArrowheadForm {
        delta: a.values,
        omega: b.values,
        c_ab,
        u_a: a.u,
        u_b: b.u,
    })
}

/// Reassemble the full `(M+N)` coefficient matrix from an arrowhead form.
pub fn arrowhead_matrix<T: Real>(form: &ArrowheadForm<T>) -> CMatrix<T> {
    let (m, n) = (form.m(), form.n());
    let d = m + n;
    let mut h = DMatrix::from_element(d, d, Cx::new(T::zero(), T::zero()));
    for k in 0..m {
        h[(k, k)] = Cx::new(form.delta[k], T::zero());
    }
    for j in 0..n {
        h[(m + j, m + j)] = Cx::new(form.omega[j], T::zero());
    }
    for k in 0..m {
        for j in 0..n {
            h[(k, m + j)] = form.c_ab[(k, j)];
            h[(m + j, k)] = form.c_ab[(k, j)].conj();
        }
    }
    h
}

/// Roots of the arrowhead secular equation and their interlacing status.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularDiagnostics<T: Real = f64> {
    /// The `N+1` roots, ascending.
    pub eigenvalues: DVector<T>,
    /// `|f(λ_i)|` at each root.
    pub residuals: DVector<T>,
    /// Strict interlacing `λ_1 < Ω_1 < λ_2 < … < Ω_N < λ_{N+1}`.
    pub interlacing: bool,
}

/// Solve the secular equation `f(λ) = λ − Δ_1 + Σ_j |G_1j|² / (Ω_j − λ)` of a
/// single-border-row arrowhead by bisection, one root per pole interval plus
/// the two outer intervals bracketed by Gershgorin bounds.
///
/// Requires `M = 1`, all couplings nonzero above `tol_cpl` and all `Ω_j`
/// pairwise separated beyond the degeneracy tolerance; otherwise the
/// interlacing structure (one root per interval) is not guaranteed and this
/// returns [`Error::PreconditionViolated`]; use the dark-mode machinery for
/// those inputs instead.
pub fn secular_diagnostics<T: Real>(
    form: &ArrowheadForm<T>,
    tols: &Tolerances<T>,
) -> Result<SecularDiagnostics<T>> {
    if form.m() != 1 {
        return Err(Error::PreconditionViolated(format!(
            "secular diagnostics require M = 1, got M = {}",
            form.m()
        )));
    }
    let n = form.n();
    let g: Vec<T> = (0..n).map(|j| form.c_ab[(0, j)].modulus()).collect();
    let cpl_scale = {
        let s = form.c_ab.norm();
        if s > T::zero() {
            s
        } else {
            T::one()
        }
    };
    if let Some(j) = g.iter().position(|&x| x <= tols.tol_cpl * cpl_scale) {
        return Err(Error::PreconditionViolated(format!(
            "coupling G_1{} is zero within tolerance",
            j + 1
        )));
    }
    let omega_scale = form
        .omega
        .iter()
        .fold(T::one(), |acc, &w| if w.abs() > acc { w.abs() } else { acc });
    for j in 1..n {
        if form.omega[j] - form.omega[j - 1] <= tols.tol_deg * omega_scale {
            return Err(Error::PreconditionViolated(format!(
                "Ω_{} and Ω_{} are degenerate within tolerance",
                j, j + 1
            )));
        }
    }

    let delta1 = form.delta[0];
    let f = |lambda: T| -> T {
        let mut acc = lambda - delta1;
        for j in 0..n {
            acc += g[j] * g[j] / (form.omega[j] - lambda);
        }
        acc
    };

    // Gershgorin bounds of the arrowhead matrix.
    let g_sum = g.iter().fold(T::zero(), |a, &b| a + b);
    let mut lo = delta1 - g_sum;
    let mut hi = delta1 + g_sum;
    for j in 0..n {
        if form.omega[j] - g[j] < lo {
            lo = form.omega[j] - g[j];
        }
        if form.omega[j] + g[j] > hi {
            hi = form.omega[j] + g[j];
        }
    }
    let span = hi - lo + T::one();

    // f is strictly increasing on every interval between consecutive poles,
    // with f → −∞ on the right of each pole and f → +∞ on its left, so each
    // bracket holds exactly one root.
    let bisect = |mut a: T, mut b: T| -> T {
        for _ in 0..256 {
            let mid = (a + b) * lit::<T>(0.5);
            if mid <= a || mid >= b {
                break;
            }
            if f(mid) < T::zero() {
                a = mid;
            } else {
                b = mid;
            }
        }
        (a + b) * lit::<T>(0.5)
    };
    // Nudge just inside a pole so the bracket endpoints have the right signs.
    let nudge = T::default_epsilon() * span * lit::<T>(8.0);

    let mut roots = Vec::with_capacity(n + 1);
    roots.push(bisect(lo - span, form.omega[0] - nudge));
    for j in 0..n - 1 {
        roots.push(bisect(form.omega[j] + nudge, form.omega[j + 1] - nudge));
    }
    roots.push(bisect(form.omega[n - 1] + nudge, hi + span));

    let residuals = DVector::from_iterator(n + 1, roots.iter().map(|&r| f(r).abs()));
    let mut interlacing = true;
    for j in 0..n {
        if !(roots[j] < form.omega[j] && form.omega[j] < roots[j + 1]) {
            interlacing = false;
        }
    }
    Ok(SecularDiagnostics {
        eigenvalues: DVector::from_vec(roots),
        residuals,
        interlacing,
    })
}
