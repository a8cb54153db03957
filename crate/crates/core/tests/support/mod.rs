//! Test-only oracles, independent of the library's implementation paths.

use darkmode_lab::{CMatrix, Cx};
use nalgebra::ComplexField;

/// Rank by full-pivot Gaussian elimination, independent of the SVD route
/// used by the census.
pub fn rank_by_elimination(mat: &CMatrix<f64>, tol: f64) -> usize {
    let mut a = mat.clone();
    let (m, n) = a.shape();
    let mut rank = 0;
    let mut live_rows: Vec<usize> = (0..m).collect();
    let mut live_cols: Vec<usize> = (0..n).collect();
    while !live_rows.is_empty() && !live_cols.is_empty() {
        // Full pivot: largest remaining entry.
        let mut best = (0usize, 0usize, 0.0f64);
        for (ri, &r) in live_rows.iter().enumerate() {
            for (ci, &c) in live_cols.iter().enumerate() {
                let mag = a[(r, c)].modulus();
                if mag > best.2 {
                    best = (ri, ci, mag);
                }
            }
        }
        if best.2 <= tol {
            break;
        }
        let r = live_rows.remove(best.0);
        let c = live_cols.remove(best.1);
        rank += 1;
        let pivot = a[(r, c)];
        for &r2 in &live_rows {
            let factor = a[(r2, c)] / pivot;
            for &c2 in &live_cols {
                let sub = factor * a[(r, c2)];
                a[(r2, c2)] -= sub;
            }
        }
    }
    rank
}

/// Independent dark-count oracle: for each degeneracy group (maximal runs of
/// `omega` within `tol_deg * scale`), the dark dimension is the group size
/// minus the elimination rank of its coupling sub-matrix.
pub fn dark_count_oracle(omega: &[f64], c_ab: &CMatrix<f64>, tol_deg: f64, tol_rank: f64) -> usize {
    let n = omega.len();
    let scale = omega.iter().fold(1.0f64, |acc, w| acc.max(w.abs()));
    let cpl_scale = c_ab.norm().max(1e-300);
    let mut dark = 0;
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && omega[end + 1] - omega[end] <= tol_deg * scale {
            end += 1;
        }
        let cols: Vec<usize> = (start..=end).collect();
        let sub = c_ab.select_columns(cols.iter());
        let rank = rank_by_elimination(&sub, tol_rank * cpl_scale);
        dark += cols.len() - rank;
        start = end + 1;
    }
    dark
}

/// Fourth-order Runge–Kutta integration of `dV/dt = AV + VAᵀ + Q` from a
/// diagonal initial covariance, as a time-domain oracle for the steady-state
/// Lyapunov solution.
pub fn integrate_lyapunov(
    a: &CMatrix<f64>,
    q: &CMatrix<f64>,
    v0: &CMatrix<f64>,
    t_end: f64,
    dt: f64,
) -> CMatrix<f64> {
    let rhs = |v: &CMatrix<f64>| a * v + v * a.transpose() + q;
    let mut v = v0.clone();
    let steps = (t_end / dt).ceil() as usize;
    let h = Cx::new(t_end / steps as f64, 0.0);
    let half = Cx::new(0.5, 0.0);
    let sixth = Cx::new(1.0 / 6.0, 0.0);
    let two = Cx::new(2.0, 0.0);
    for _ in 0..steps {
        let k1 = rhs(&v);
        let k2 = rhs(&(&v + &k1 * (h * half)));
        let k3 = rhs(&(&v + &k2 * (h * half)));
        let k4 = rhs(&(&v + &k3 * h));
        v += (k1 + k2 * two + k3 * two + k4) * (h * sixth);
    }
    v
}
