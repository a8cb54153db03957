//! Dark/bright decomposition of the type-b normal modes.
//!
//! A dark mode is a unit vector `d` supported on one degeneracy group of the
//! type-b normal spectrum with `C_AB · d = 0`: it decouples from every type-a
//! mode. Counting is rank-based: within each degeneracy group the number of
//! bright modes equals the rank of the group's coupling sub-matrix, so the
//! dark count is `N − Σ_s rank_s`. Construction is either SVD-based (any M)
//! or by the recursive pairwise hybridization available when `M = 1`.

use nalgebra::DVector;
use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::scalar::{lit, Real, Tolerances};
use crate::spectral::{to_normal_form_with, ArrowheadForm};
use crate::{CMatrix, CVector, Cx};

/// One maximal run of (near-)equal type-b normal frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Group<T: Real = f64> {
    /// Mean frequency of the group.
    pub representative: T,
    /// Indices into the ascending `omega` vector.
    pub members: Vec<usize>,
}

/// Disjoint, exhaustive grouping of the type-b normal frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyPartition<T: Real = f64> {
    pub groups: Vec<Group<T>>,
}

/// Split an ascending frequency vector into maximal runs whose consecutive
/// gaps stay within `tol_deg * max|Ω|`.
pub fn partition_degeneracies<T: Real>(omega: &DVector<T>, tol_deg: T) -> DegeneracyPartition<T> {
    let n = omega.len();
    let scale = omega
        .iter()
        .fold(T::one(), |acc, &w| if w.abs() > acc { w.abs() } else { acc });
    let tol = tol_deg * scale;
    let mut groups = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && omega[end + 1] - omega[end] <= tol {
            end += 1;
        }
        let members: Vec<usize> = (start..=end).collect();
        let mut mean = T::zero();
        for &j in &members {
            mean += omega[j];
        }
        mean /= T::from_usize(members.len()).expect("small count");
        groups.push(Group {
            representative: mean,
            members,
        });
        start = end + 1;
    }
    DegeneracyPartition { groups }
}

/// Dark/bright census of an arrowhead form.
///
/// `dark_vectors` satisfy `‖C_AB · d‖ ≤ ~tol · ‖C_AB‖_F` and each is
/// supported on exactly one degeneracy group; together with
/// `bright_vectors` they form an orthonormal set. `bright_group` gives the
/// partition group index of each bright vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DarkModeReport<T: Real = f64> {
    pub partition: DegeneracyPartition<T>,
    /// Rank of each group's M×|group| coupling sub-matrix.
    pub group_ranks: Vec<usize>,
    pub bright_count: usize,
    pub dark_count: usize,
    pub dark_vectors: Vec<CVector<T>>,
    pub bright_vectors: Vec<CVector<T>>,
    /// Group index owning each bright vector (parallel to `bright_vectors`).
    pub bright_group: Vec<usize>,
    /// Type-b normal modes whose whole coupling column is zero within
    /// tolerance; these are dark outright.
    pub zero_columns: Vec<usize>,
}

fn embed<T: Real>(n: usize, support: &[usize], local: &CVector<T>) -> CVector<T> {
    let mut v = CVector::<T>::zeros(n);
    for (slot, &j) in support.iter().enumerate() {
        v[j] = local[slot];
    }
    v
}

/// Greedily extend `existing` (orthonormal, dimension `dim`) by `count`
/// vectors drawn from the standard basis, largest residual first.
fn complete_orthonormal<T: Real>(
    existing: &[CVector<T>],
    dim: usize,
    count: usize,
) -> Vec<CVector<T>> {
    let mut basis: Vec<CVector<T>> = existing.to_vec();
    let mut fresh = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best: Option<(T, CVector<T>)> = None;
        for cand in 0..dim {
            let mut v = CVector::<T>::zeros(dim);
            v[cand] = Cx::new(T::one(), T::zero());
            for _ in 0..2 {
                for b in &basis {
                    let along = b.dotc(&v);
                    v -= b * along;
                }
            }
            let norm = v.norm();
            if best.as_ref().map_or(true, |(bn, _)| norm > *bn) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.expect("dim > 0");
        debug_assert!(norm > lit::<T>(1e-8), "completion residual collapsed");
        let v = v / Cx::new(norm, T::zero());
        basis.push(v.clone());
        fresh.push(v);
    }
    fresh
}

/// Singular values and right singular vectors of `sub`, descending.
fn svd_right<T: Real>(sub: &CMatrix<T>) -> (Vec<T>, Vec<CVector<T>>) {
    let svd = sub.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("finite singular values")
    });
    let sigma: Vec<T> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let vectors: Vec<CVector<T>> = order
        .iter()
        .map(|&i| v_t.row(i).adjoint())
        .collect();
    (sigma, vectors)
}

/// Count and construct the dark and bright modes of an arrowhead form.
///
/// Degenerate inputs are the interesting case, not errors: every tolerance
/// decision (grouping, zero columns, rank cutoffs) comes from `tols`.
pub fn count_dark_modes<T: Real>(form: &ArrowheadForm<T>, tols: &Tolerances<T>) -> DarkModeReport<T> {
    let n = form.n();
    let partition = partition_degeneracies(&form.omega, tols.tol_deg);
    let cpl_scale = form.c_ab.norm();
    let col_norm = |j: usize| form.c_ab.column(j).norm();
    let zero_columns: Vec<usize> = (0..n)
        .filter(|&j| cpl_scale == T::zero() || col_norm(j) <= tols.tol_cpl * cpl_scale)
        .collect();

    let mut group_ranks = Vec::with_capacity(partition.groups.len());
    let mut dark_vectors = Vec::new();
    let mut bright_vectors = Vec::new();
    let mut bright_group = Vec::new();

    for (gi, group) in partition.groups.iter().enumerate() {
        let live: Vec<usize> = group
            .members
            .iter()
            .copied()
            .filter(|j| !zero_columns.contains(j))
            .collect();
        // Zero columns are dark verbatim.
        for &j in &group.members {
            if !live.contains(&j) {
                let mut e = CVector::<T>::zeros(n);
                e[j] = Cx::new(T::one(), T::zero());
                dark_vectors.push(e);
            }
        }
        if live.is_empty() {
            group_ranks.push(0);
            continue;
        }
        let sub = form.c_ab.select_columns(live.iter());
        let (sigma, right) = svd_right(&sub);
        let sigma_max = sigma[0];
        let rank = sigma
            .iter()
            .filter(|&&s| s > tols.tol_rank * sigma_max)
            .count();
        group_ranks.push(rank);
        let local_bright: Vec<CVector<T>> = right[..rank].to_vec();
        for v in &local_bright {
            bright_vectors.push(embed(n, &live, v));
            bright_group.push(gi);
        }
        for v in complete_orthonormal(&local_bright, live.len(), live.len() - rank) {
            dark_vectors.push(embed(n, &live, &v));
        }
    }

    let bright_count: usize = group_ranks.iter().sum();
    DarkModeReport {
        partition,
        group_ranks,
        bright_count,
        dark_count: n - bright_count,
        dark_vectors,
        bright_vectors,
        bright_group,
        zero_columns,
    }
}

/// Convenience: normal form then census in one call.
pub fn analyze_spec<T: Real>(spec: &NetworkSpec<T>, tols: &Tolerances<T>) -> Result<DarkModeReport<T>> {
    Ok(count_dark_modes(&to_normal_form_with(spec, tols)?, tols))
}

/// Constructive pairwise hybridization of one degenerate group when `M = 1`.
///
/// Couplings are folded in one at a time: each step merges the running
/// bright mode with the next group member into a new bright mode and sheds
/// one dark mode. `cumulative_norms[j] = (Σ_{i≤j} |G_1i|²)^{1/2}` is the
/// coupling strength carried by the j-th bright intermediate.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridizationChain<T: Real = f64> {
    /// Group member indices, in fold order.
    pub members: Vec<usize>,
    /// Bright intermediates `B_{j+}` (the last one is the group's bright mode).
    pub bright_intermediates: Vec<CVector<T>>,
    /// Dark modes `B_{j−}`, one per fold after the first.
    pub dark_modes: Vec<CVector<T>>,
    /// Strictly positive, nondecreasing cumulative coupling norms.
    pub cumulative_norms: Vec<T>,
}

pub fn hybridization_chain<T: Real>(
    form: &ArrowheadForm<T>,
    members: &[usize],
    tols: &Tolerances<T>,
) -> Result<HybridizationChain<T>> {
    if form.m() != 1 {
        return Err(Error::PreconditionViolated(format!(
            "hybridization chain requires M = 1, got M = {}",
            form.m()
        )));
    }
    if members.is_empty() {
        return Err(Error::PreconditionViolated("empty group".into()));
    }
    let n = form.n();
    let omega_scale = form
        .omega
        .iter()
        .fold(T::one(), |acc, &w| if w.abs() > acc { w.abs() } else { acc });
    let spread = form.omega[*members.last().unwrap()] - form.omega[members[0]];
    if spread > tols.tol_deg * omega_scale {
        return Err(Error::PreconditionViolated(
            "group members are not degenerate within tolerance".into(),
        ));
    }
    let cpl_scale = {
        let s = form.c_ab.norm();
        if s > T::zero() {
            s
        } else {
            T::one()
        }
    };
    let g: Vec<Cx<T>> = members.iter().map(|&j| form.c_ab[(0, j)]).collect();
    if let Some(slot) = g.iter().position(|z| z.modulus() <= tols.tol_cpl * cpl_scale) {
        return Err(Error::ZeroCouplingInGroup {
            index: members[slot],
        });
    }

    // First bright intermediate: the first member, phased so its coupling
    // is real positive.
    let mut cum = vec![g[0].modulus()];
    let mut plus = {
        let mut v = CVector::<T>::zeros(n);
        v[members[0]] = g[0].conj() / Cx::new(cum[0], T::zero());
        v
    };
    let mut bright_intermediates = vec![plus.clone()];
    let mut dark_modes = Vec::with_capacity(members.len() - 1);
    for (slot, &j) in members.iter().enumerate().skip(1) {
        let prev = cum[slot - 1];
        let next = (prev * prev + g[slot].modulus_squared()).sqrt();
        let mut e = CVector::<T>::zeros(n);
        e[j] = Cx::new(T::one(), T::zero());
        // Bright absorbs the new member; the orthogonal combination within
        // the (previous bright, new member) plane is annihilated by the
        // coupling row.
        let new_plus =
            (&plus * Cx::new(prev / next, T::zero())) + (&e * (g[slot].conj() / Cx::new(next, T::zero())));
        let minus = (&plus * (g[slot] / Cx::new(next, T::zero()))) - (&e * Cx::new(prev / next, T::zero()));
        dark_modes.push(minus);
        bright_intermediates.push(new_plus.clone());
        plus = new_plus;
        cum.push(next);
    }
    Ok(HybridizationChain {
        members: members.to_vec(),
        bright_intermediates,
        dark_modes,
        cumulative_norms: cum,
    })
}

/// Orthonormal bright basis and dark complement of one degenerate group's
/// coupling sub-matrix, built by modified Gram–Schmidt over the conjugated
/// rows (the coupled directions), with rank decisions at `tol_rank`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrightDarkBasis<T: Real = f64> {
    pub bright: Vec<CVector<T>>,
    pub dark: Vec<CVector<T>>,
}

pub fn gram_schmidt_bright_subspace<T: Real>(c_sub: &CMatrix<T>, tol_rank: T) -> BrightDarkBasis<T> {
    let (m, l) = c_sub.shape();
    let row_scale = (0..m)
        .map(|k| c_sub.row(k).norm())
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let mut bright: Vec<CVector<T>> = Vec::new();
    for k in 0..m {
        let mut v: CVector<T> = c_sub.row(k).map(|z| z.conj()).transpose();
        let norm0 = v.norm();
        if row_scale == T::zero() || norm0 <= tol_rank * row_scale {
            continue;
        }
        for _ in 0..2 {
            for b in &bright {
                let along = b.dotc(&v);
                v -= b * along;
            }
        }
        let norm = v.norm();
        if norm <= tol_rank * norm0 {
            continue; // linearly dependent on earlier rows
        }
        bright.push(v / Cx::new(norm, T::zero()));
    }
    let dark = complete_orthonormal(&bright, l, l - bright.len());
    BrightDarkBasis { bright, dark }
}

/// Outcome of re-running the census under random resamplings of the type-a
/// hopping matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct XiInvarianceReport<T: Real = f64> {
    pub baseline_dark_count: usize,
    pub dark_counts: Vec<usize>,
    pub constant: bool,
    /// Maximum Frobenius deviation of the ordered dark-vector stack from the
    /// baseline, across trials. Forms may move; the count may not.
    pub max_form_deviation: T,
}

/// Theorem check: changing the intra-type-a hopping never changes the number
/// of type-b dark modes (it re-mixes the rows of `C_AB` unitarily, which
/// preserves every group's column rank).
pub fn xi_invariance_check<T: Real, R: rand::Rng>(
    spec: &NetworkSpec<T>,
    trials: usize,
    tols: &Tolerances<T>,
    rng: &mut R,
) -> Result<XiInvarianceReport<T>> {
    let baseline = analyze_spec(spec, tols)?;
    let stack = |rep: &DarkModeReport<T>| -> CMatrix<T> {
        let n = rep.partition.groups.iter().map(|g| g.members.len()).sum::<usize>();
        let mut m = CMatrix::<T>::zeros(n, rep.dark_vectors.len());
        for (c, v) in rep.dark_vectors.iter().enumerate() {
            m.set_column(c, v);
        }
        m
    };
    let base_stack = stack(&baseline);

    let xi_scale = {
        let s = spec.xi.norm();
        if s > T::zero() {
            s
        } else {
            lit::<T>(0.1)
        }
    };
    let mut dark_counts = Vec::with_capacity(trials);
    let mut constant = true;
    let mut max_dev = T::zero();
    for _ in 0..trials {
        let mut probe = spec.clone();
        for k in 0..spec.m {
            for k2 in (k + 1)..spec.m {
                let re = lit::<T>(rng.gen_range(-1.0..1.0));
                let im = lit::<T>(rng.gen_range(-1.0..1.0));
                probe.set_xi(k, k2, Cx::new(re * xi_scale, im * xi_scale));
            }
        }
        let rep = analyze_spec(&probe, tols)?;
        if rep.dark_count != baseline.dark_count {
            constant = false;
        } else {
            let dev = (stack(&rep) - &base_stack).norm();
            if dev > max_dev {
                max_dev = dev;
            }
        }
        dark_counts.push(rep.dark_count);
    }
    Ok(XiInvarianceReport {
        baseline_dark_count: baseline.dark_count,
        dark_counts,
        constant,
        max_form_deviation: max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use approx::assert_relative_eq;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};

    fn tols() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn partition_pair_plus_singleton() {
        let eta = 0.09;
        let omega = DVector::from_vec(vec![1.0 - eta, 1.0 - eta, 1.0 + 2.0 * eta]);
        let p = partition_degeneracies(&omega, 1e-8);
        assert_eq!(p.groups.len(), 2);
        assert_eq!(p.groups[0].members, vec![0, 1]);
        assert_eq!(p.groups[1].members, vec![2]);
        assert_relative_eq!(p.groups[0].representative, 1.0 - eta);
    }

    #[test]
    fn partition_all_distinct_and_all_equal() {
        let distinct = DVector::from_vec(vec![0.8, 0.9, 1.0, 1.1]);
        assert_eq!(partition_degeneracies(&distinct, 1e-8).groups.len(), 4);
        let equal = DVector::from_element(5, 1.0);
        let p = partition_degeneracies(&equal, 1e-8);
        assert_eq!(p.groups.len(), 1);
        assert_eq!(p.groups[0].members.len(), 5);
    }

    #[test]
    fn zero_coupling_matrix_is_all_dark() {
        let form = ArrowheadForm::from_parts(
            DVector::from_vec(vec![1.0]),
            DVector::from_vec(vec![0.9, 1.0, 1.1]),
            CMatrix::<f64>::zeros(1, 3),
        );
        let rep = count_dark_modes(&form, &tols());
        assert_eq!(rep.dark_count, 3);
        assert_eq!(rep.zero_columns, vec![0, 1, 2]);
        assert_eq!(rep.group_ranks, vec![0, 0, 0]);
    }

    #[test]
    fn benchmark_slice_with_equal_extra_couplings_has_two_dark_modes() {
        // Columns 1 and 2 of the effective coupling block vanish when
        // g22 = g23 = 0.1, leaving the doubly degenerate group fully dark.
        let rep = analyze_spec(&presets::two_by_three_network(0.1, 0.1, 1.0), &tols()).unwrap();
        assert_eq!(rep.dark_count, 2);
        assert_eq!(rep.zero_columns.len(), 2);
    }

    #[test]
    fn all_degenerate_generic_counts_n_minus_m() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut s = NetworkSpec::<f64>::empty(2, 5);
        s.delta = DVector::from_vec(vec![1.0, 1.1]);
        s.omega = DVector::from_element(5, 1.0);
        for k in 0..2 {
            for j in 0..5 {
                s.g[(k, j)] = Cx::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2));
            }
        }
        let rep = analyze_spec(&s, &tols()).unwrap();
        assert_eq!(rep.dark_count, 3);
        assert_eq!(rep.bright_count, 2);
    }

    #[test]
    fn dark_vectors_are_annihilated_and_orthonormal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let m = rng.gen_range(1..4usize);
            let n = rng.gen_range(2..7usize);
            // Random couplings over a spectrum with a forced degeneracy.
            let mut omega: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
            omega.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if n >= 2 {
                omega[1] = omega[0];
            }
            let c = CMatrix::<f64>::from_fn(m, n, |_, _| {
                Cx::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2))
            });
            let form = ArrowheadForm::from_parts(
                DVector::from_fn(m, |_, _| rng.gen_range(0.5..1.5)),
                DVector::from_vec(omega),
                c.clone(),
            );
            let rep = count_dark_modes(&form, &tols());
            for d in &rep.dark_vectors {
                assert!((&c * d).norm() <= 1e-9 * c.norm().max(1e-30));
            }
            let mut all: Vec<&CVector<f64>> = rep.dark_vectors.iter().collect();
            all.extend(rep.bright_vectors.iter());
            for (i, a) in all.iter().enumerate() {
                for (j, b) in all.iter().enumerate() {
                    let dot = a.dotc(b).norm();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert_relative_eq!(dot, expect, epsilon = 1e-10);
                }
            }
            assert_eq!(rep.dark_vectors.len(), rep.dark_count);
            assert_eq!(rep.bright_vectors.len(), rep.bright_count);
        }
    }

    #[test]
    fn chain_two_equal_couplings() {
        let g = 0.12;
        let form = ArrowheadForm::from_parts(
            DVector::from_vec(vec![1.0]),
            DVector::from_vec(vec![1.0, 1.0]),
            CMatrix::from_row_slice(1, 2, &[Cx::new(g, 0.0), Cx::new(g, 0.0)]),
        );
        let chain = hybridization_chain(&form, &[0, 1], &tols()).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        let bright = chain.bright_intermediates.last().unwrap();
        assert_relative_eq!(bright[0].re, s, epsilon = 1e-12);
        assert_relative_eq!(bright[1].re, s, epsilon = 1e-12);
        let dark = &chain.dark_modes[0];
        assert_relative_eq!(dark[0].re, s, epsilon = 1e-12);
        assert_relative_eq!(dark[1].re, -s, epsilon = 1e-12);
        assert_relative_eq!(chain.cumulative_norms[1], g * 2.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn chain_single_member_is_bright_only() {
        let form = ArrowheadForm::from_parts(
            DVector::from_vec(vec![1.0]),
            DVector::from_vec(vec![1.0]),
            CMatrix::from_row_slice(1, 1, &[Cx::new(0.2, 0.0)]),
        );
        let chain = hybridization_chain(&form, &[0], &tols()).unwrap();
        assert!(chain.dark_modes.is_empty());
        assert_eq!(chain.bright_intermediates.len(), 1);
        assert_relative_eq!(chain.bright_intermediates[0][0].re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn chain_random_couplings_sheds_annihilated_darks() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let l = 4;
            let g: Vec<Cx<f64>> = (0..l)
                .map(|_| Cx::new(rng.gen_range(0.05..0.3), rng.gen_range(-0.2..0.2)))
                .collect();
            let form = ArrowheadForm::from_parts(
                DVector::from_vec(vec![1.0]),
                DVector::from_element(l, 1.0),
                CMatrix::from_row_slice(1, l, &g),
            );
            let chain = hybridization_chain(&form, &[0, 1, 2, 3], &tols()).unwrap();
            assert_eq!(chain.dark_modes.len(), 3);
            for d in &chain.dark_modes {
                assert!((&form.c_ab * d).norm() < 1e-12);
            }
            // Orthogonality of darks to the final bright mode and each other.
            let bright = chain.bright_intermediates.last().unwrap();
            for (i, d) in chain.dark_modes.iter().enumerate() {
                assert!(d.dotc(bright).norm() < 1e-12);
                for d2 in chain.dark_modes.iter().skip(i + 1) {
                    assert!(d.dotc(d2).norm() < 1e-12);
                }
            }
            // Cumulative norms strictly increase.
            for w in chain.cumulative_norms.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn chain_rejects_zero_coupling() {
        let form = ArrowheadForm::from_parts(
            DVector::from_vec(vec![1.0]),
            DVector::from_vec(vec![1.0, 1.0]),
            CMatrix::from_row_slice(1, 2, &[Cx::new(0.1, 0.0), Cx::new(0.0, 0.0)]),
        );
        assert!(matches!(
            hybridization_chain(&form, &[0, 1], &tols()),
            Err(Error::ZeroCouplingInGroup { index: 1 })
        ));
    }

    #[test]
    fn gram_schmidt_detects_dependent_rows() {
        let c = CMatrix::from_row_slice(
            2,
            4,
            &[
                Cx::new(0.1, 0.0),
                Cx::new(0.2, 0.0),
                Cx::new(-0.1, 0.0),
                Cx::new(0.05, 0.0),
                Cx::new(0.3, 0.0),
                Cx::new(0.6, 0.0),
                Cx::new(-0.3, 0.0),
                Cx::new(0.15, 0.0),
            ],
        );
        let basis = gram_schmidt_bright_subspace(&c, 1e-10);
        assert_eq!(basis.bright.len(), 1);
        assert_eq!(basis.dark.len(), 3);
        for d in &basis.dark {
            assert!((&c * d).norm() < 1e-10);
        }
    }

    #[test]
    fn gram_schmidt_matches_svd_null_projector() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let (m, l) = (3, 6);
            let c = CMatrix::<f64>::from_fn(m, l, |_, _| {
                Cx::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3))
            });
            let basis = gram_schmidt_bright_subspace(&c, 1e-10);
            assert_eq!(basis.dark.len(), 3);
            // Dark projector from the construction.
            let mut p_gs = CMatrix::<f64>::zeros(l, l);
            for d in &basis.dark {
                p_gs += d * d.adjoint();
            }
            // Null projector from the SVD: I − V_r V_r†.
            let (sigma, right) = svd_right(&c);
            let rank = sigma.iter().filter(|&&s| s > 1e-10 * sigma[0]).count();
            let mut p_svd = CMatrix::<f64>::identity(l, l);
            for v in &right[..rank] {
                p_svd -= v * v.adjoint();
            }
            assert!((p_gs - p_svd).norm() < 1e-10);
        }
    }

    #[test]
    fn gram_schmidt_orthonormal_rows_span_same_space() {
        let c = CMatrix::from_row_slice(
            2,
            3,
            &[
                Cx::new(1.0, 0.0),
                Cx::new(0.0, 0.0),
                Cx::new(0.0, 0.0),
                Cx::new(0.0, 0.0),
                Cx::new(1.0, 0.0),
                Cx::new(0.0, 0.0),
            ],
        );
        let basis = gram_schmidt_bright_subspace(&c, 1e-10);
        let mut p = CMatrix::<f64>::zeros(3, 3);
        for b in &basis.bright {
            p += b * b.adjoint();
        }
        let mut expect = CMatrix::<f64>::zeros(3, 3);
        expect[(0, 0)] = Cx::new(1.0, 0.0);
        expect[(1, 1)] = Cx::new(1.0, 0.0);
        assert!((p - expect).norm() < 1e-12);
    }

    #[test]
    fn counts_are_stable_under_degenerate_subspace_rotations() {
        // Rotating the normal basis inside a degeneracy group re-mixes the
        // corresponding coupling columns by a unitary; every census count
        // must survive that gauge change.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for _ in 0..20 {
            let m = rng.gen_range(1..4usize);
            let l = rng.gen_range(2..5usize);
            let extra = rng.gen_range(0..3usize);
            let n = l + extra;
            let mut omega = vec![1.0; l];
            for i in 0..extra {
                omega.push(1.2 + 0.1 * i as f64);
            }
            let c = CMatrix::<f64>::from_fn(m, n, |_, _| {
                Cx::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2))
            });
            let form = ArrowheadForm::from_parts(
                DVector::from_fn(m, |_, _| rng.gen_range(0.5..1.5)),
                DVector::from_vec(omega),
                c.clone(),
            );
            let base = count_dark_modes(&form, &tols());

            // Random unitary on the degenerate group via Gram-Schmidt of a
            // random complex matrix.
            let raw = CMatrix::<f64>::from_fn(l, l, |_, _| {
                Cx::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let mut w = raw;
            for col in 0..l {
                for prev in 0..col {
                    let along = w.column(prev).dotc(&w.column(col));
                    let sub = w.column(prev) * along;
                    let mut c_col = w.column_mut(col);
                    c_col -= sub;
                }
                let norm = w.column(col).norm();
                let mut c_col = w.column_mut(col);
                c_col /= Cx::new(norm, 0.0);
            }
            let mut rotated = c.clone();
            let group_block = c.columns(0, l) * &w;
            rotated.columns_mut(0, l).copy_from(&group_block);
            let rotated_form = ArrowheadForm::from_parts(
                form.delta.clone(),
                form.omega.clone(),
                rotated,
            );
            let turned = count_dark_modes(&rotated_form, &tols());
            assert_eq!(base.dark_count, turned.dark_count);
            assert_eq!(base.group_ranks, turned.group_ranks);
        }
    }

    #[test]
    fn xi_resampling_keeps_the_count() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let spec = presets::two_by_three_network(0.1, 0.1, 1.0);
        let rep = xi_invariance_check(&spec, 50, &tols(), &mut rng).unwrap();
        assert!(rep.constant, "dark count changed: {:?}", rep.dark_counts);
        assert_eq!(rep.baseline_dark_count, 2);

        // Decoupled type-a sub-network gives the same count.
        let mut decoupled = spec.clone();
        decoupled.set_xi(0, 1, Cx::new(0.0, 0.0));
        let rep0 = analyze_spec(&decoupled, &tols()).unwrap();
        assert_eq!(rep0.dark_count, 2);
    }

    #[test]
    fn xi_resampling_with_engineered_dependency() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let mut s = NetworkSpec::<f64>::empty(3, 4);
        s.delta = DVector::from_vec(vec![1.0, 1.0, 1.0]);
        s.omega = DVector::from_element(4, 1.0);
        // Columns 2 and 3 proportional to column 0: rank ≤ 2 by construction.
        for k in 0..3 {
            let base = Cx::new(rng.gen_range(0.05..0.2), rng.gen_range(-0.1..0.1));
            s.g[(k, 0)] = base;
            s.g[(k, 1)] = Cx::new(rng.gen_range(-0.2..0.2), 0.0);
            s.g[(k, 2)] = base * Cx::new(2.0, 0.0);
            s.g[(k, 3)] = base * Cx::new(0.0, -1.5);
        }
        let rep = xi_invariance_check(&s, 50, &tols(), &mut rng).unwrap();
        assert!(rep.constant);
        assert_eq!(rep.baseline_dark_count, 2);
    }
}
