//! Network specification and the bare-mode coefficient matrix.

use nalgebra::{DMatrix, DVector};
use nalgebra::ComplexField;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::{CMatrix, Cx, RVector};

/// Full parameterization of an `(M+N)`-mode two-component network.
///
/// Frequencies and rates are in units of the declared reference frequency
/// `omega_ref`. Zero entries in `xi`/`eta`/`g` denote absent couplings; there
/// is no separate topology mask.
///
/// Immutable after construction; all operations take `&self`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec<T: Real = f64> {
    /// Number of type-a modes (≥ 1).
    pub m: usize,
    /// Number of type-b modes (≥ 1).
    pub n: usize,
    /// Reference frequency the stored numbers are expressed in.
    pub omega_ref: T,
    /// Type-a detunings δ_k, length M.
    pub delta: DVector<T>,
    /// Type-b frequencies ω_j, length N.
    pub omega: DVector<T>,
    /// Type-a hopping matrix ξ, M×M Hermitian with zero diagonal.
    pub xi: CMatrix<T>,
    /// Type-b hopping matrix η, N×N Hermitian with zero diagonal.
    pub eta: CMatrix<T>,
    /// Inter-type coupling matrix g, M×N.
    pub g: CMatrix<T>,
    /// Type-a decay rates κ_k ≥ 0, length M.
    pub kappa: DVector<T>,
    /// Type-b decay rates γ_j ≥ 0, length N.
    pub gamma: DVector<T>,
    /// Thermal occupations n̄_j ≥ 0, length N.
    pub nbar: DVector<T>,
}

/// One violated invariant, with index coordinates where that makes sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub index: Option<(usize, usize)>,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.index {
            Some((i, j)) => write!(f, "{} at ({}, {}): {}", self.field, i, j, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// Report-style validation outcome: empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport(pub Vec<Violation>);

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.0.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.0
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.0 {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Relative scale for Hermiticity checks: 1 for all-zero matrices so the
/// tolerance stays absolute there.
fn herm_scale<T: Real>(mat: &CMatrix<T>) -> T {
    let mut s = T::zero();
    for e in mat.iter() {
        let a = e.modulus();
        if a > s {
            s = a;
        }
    }
    if s > T::zero() {
        s
    } else {
        T::one()
    }
}

fn check_hermitian_zero_diag<T: Real>(
    mat: &CMatrix<T>,
    field: &'static str,
    out: &mut Vec<Violation>,
) {
    let tol = lit::<T>(1e-12) * herm_scale(mat);
    let n = mat.nrows();
    for i in 0..n {
        if mat[(i, i)].modulus() > tol {
            out.push(Violation {
                field,
                index: Some((i, i)),
                message: "diagonal entry must be zero".into(),
            });
        }
        for j in (i + 1)..n {
            if (mat[(i, j)] - mat[(j, i)].conj()).modulus() > tol {
                out.push(Violation {
                    field,
                    index: Some((i, j)),
                    message: format!("{field} not Hermitian at ({i}, {j})"),
                });
            }
        }
    }
}

fn check_len<T: Real>(
    v: &DVector<T>,
    expected: usize,
    field: &'static str,
    out: &mut Vec<Violation>,
) {
    if v.len() != expected {
        out.push(Violation {
            field,
            index: None,
            message: format!("expected length {expected}, got {}", v.len()),
        });
    }
}

fn check_nonnegative<T: Real>(v: &DVector<T>, field: &'static str, out: &mut Vec<Violation>) {
    for (i, x) in v.iter().enumerate() {
        if *x < T::zero() {
            out.push(Violation {
                field,
                index: Some((i, 0)),
                message: format!("negative decay rate or occupation: {x:?}"),
            });
        }
    }
}

/// Check every invariant of a [`NetworkSpec`]; an empty report means valid.
pub fn validate_spec<T: Real>(spec: &NetworkSpec<T>) -> ValidationReport {
    let mut out = Vec::new();
    if spec.m == 0 {
        out.push(Violation {
            field: "M",
            index: None,
            message: "M must be ≥ 1".into(),
        });
    }
    if spec.n == 0 {
        out.push(Violation {
            field: "N",
            index: None,
            message: "N must be ≥ 1".into(),
        });
    }
    if !(spec.omega_ref > T::zero()) {
        out.push(Violation {
            field: "omega_ref",
            index: None,
            message: "reference frequency must be positive".into(),
        });
    }
    check_len(&spec.delta, spec.m, "delta", &mut out);
    check_len(&spec.omega, spec.n, "omega", &mut out);
    check_len(&spec.kappa, spec.m, "kappa", &mut out);
    check_len(&spec.gamma, spec.n, "gamma", &mut out);
    check_len(&spec.nbar, spec.n, "nbar", &mut out);
    if spec.xi.shape() != (spec.m, spec.m) {
        out.push(Violation {
            field: "xi",
            index: None,
            message: format!("expected {0}×{0}, got {1:?}", spec.m, spec.xi.shape()),
        });
    } else {
        check_hermitian_zero_diag(&spec.xi, "xi", &mut out);
    }
    if spec.eta.shape() != (spec.n, spec.n) {
        out.push(Violation {
            field: "eta",
            index: None,
            message: format!("expected {0}×{0}, got {1:?}", spec.n, spec.eta.shape()),
        });
    } else {
        check_hermitian_zero_diag(&spec.eta, "eta", &mut out);
    }
    if spec.g.shape() != (spec.m, spec.n) {
        out.push(Violation {
            field: "g",
            index: None,
            message: format!("expected {}×{}, got {:?}", spec.m, spec.n, spec.g.shape()),
        });
    }
    check_nonnegative(&spec.kappa, "kappa", &mut out);
    check_nonnegative(&spec.gamma, "gamma", &mut out);
    check_nonnegative(&spec.nbar, "nbar", &mut out);
    ValidationReport(out)
}

/// The `(M+N)×(M+N)` Hermitian coefficient matrix in the bare-mode basis,
/// with the block boundaries kept alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix<T: Real = f64> {
    pub h: CMatrix<T>,
    pub m: usize,
    pub n: usize,
}

impl<T: Real> CoefficientMatrix<T> {
    /// Top-left M×M block (type-a sub-network).
    pub fn h_a(&self) -> CMatrix<T> {
        self.h.view((0, 0), (self.m, self.m)).into_owned()
    }

    /// Bottom-right N×N block (type-b sub-network).
    pub fn h_b(&self) -> CMatrix<T> {
        self.h.view((self.m, self.m), (self.n, self.n)).into_owned()
    }

    /// Top-right M×N coupling block.
    pub fn c_ab(&self) -> CMatrix<T> {
        self.h.view((0, self.m), (self.m, self.n)).into_owned()
    }
}

/// Assemble the Hermitian coefficient matrix of a valid spec.
///
/// Layout: `[[H_a, C_ab], [C_ab†, H_b]]` with `(H_a)_kk = δ_k`,
/// `(H_a)_{kk'} = ξ_{kk'}`, `(H_b)_jj = ω_j`, `(H_b)_{jj'} = η_{jj'}` and
/// `(C_ab)_{kj} = g_{kj}`.
pub fn build_coefficient_matrix<T: Real>(spec: &NetworkSpec<T>) -> Result<CoefficientMatrix<T>> {
    let report = validate_spec(spec);
    if !report.is_valid() {
        return Err(Error::InvalidSpec(report));
    }
    let (m, n) = (spec.m, spec.n);
    let d = m + n;
    let mut h = DMatrix::from_element(d, d, Cx::new(T::zero(), T::zero()));
    for k in 0..m {
        h[(k, k)] = Cx::new(spec.delta[k], T::zero());
        for k2 in 0..m {
            if k != k2 {
                h[(k, k2)] = spec.xi[(k, k2)];
            }
        }
        for j in 0..n {
            h[(k, m + j)] = spec.g[(k, j)];
            h[(m + j, k)] = spec.g[(k, j)].conj();
        }
    }
    for j in 0..n {
        h[(m + j, m + j)] = Cx::new(spec.omega[j], T::zero());
        for j2 in 0..n {
            if j != j2 {
                h[(m + j, m + j2)] = spec.eta[(j, j2)];
            }
        }
    }
    Ok(CoefficientMatrix { h, m, n })
}

impl<T: Real> NetworkSpec<T> {
    /// All-zero couplings, unit reference, zero rates; a convenient starting
    /// point for building specs programmatically.
    pub fn empty(m: usize, n: usize) -> Self {
        let zc = Cx::new(T::zero(), T::zero());
        Self {
            m,
            n,
            omega_ref: T::one(),
            delta: DVector::from_element(m, T::zero()),
            omega: DVector::from_element(n, T::zero()),
            xi: DMatrix::from_element(m, m, zc),
            eta: DMatrix::from_element(n, n, zc),
            g: DMatrix::from_element(m, n, zc),
            kappa: DVector::from_element(m, T::zero()),
            gamma: DVector::from_element(n, T::zero()),
            nbar: DVector::from_element(n, T::zero()),
        }
    }

    /// Set a Hermitian pair `ξ_{kk'} = v`, `ξ_{k'k} = v*`.
    pub fn set_xi(&mut self, k: usize, k2: usize, v: Cx<T>) {
        self.xi[(k, k2)] = v;
        self.xi[(k2, k)] = v.conj();
    }

    /// Set a Hermitian pair `η_{jj'} = v`, `η_{j'j} = v*`.
    pub fn set_eta(&mut self, j: usize, j2: usize, v: Cx<T>) {
        self.eta[(j, j2)] = v;
        self.eta[(j2, j)] = v.conj();
    }

    /// Convert the spec to another scalar type (e.g. `f64` → `f32`).
    pub fn cast<U: Real>(&self) -> NetworkSpec<U> {
        let rv = |v: &RVector<T>| RVector::<U>::from_iterator(v.len(), v.iter().map(|x| cast_real::<T, U>(*x)));
        let cm = |mat: &CMatrix<T>| {
            CMatrix::<U>::from_iterator(
                mat.nrows(),
                mat.ncols(),
                mat.iter().map(|z| Cx::new(cast_real::<T, U>(z.re), cast_real::<T, U>(z.im))),
            )
        };
        NetworkSpec {
            m: self.m,
            n: self.n,
            omega_ref: cast_real::<T, U>(self.omega_ref),
            delta: rv(&self.delta),
            omega: rv(&self.omega),
            xi: cm(&self.xi),
            eta: cm(&self.eta),
            g: cm(&self.g),
            kappa: rv(&self.kappa),
            gamma: rv(&self.gamma),
            nbar: rv(&self.nbar),
        }
    }
}

fn cast_real<T: Real, U: Real>(x: T) -> U {
    U::from_f64(x.to_f64().expect("finite scalar")).expect("representable")
}
