use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

const SYMMETRY_TOLERANCE: f64 = 1e-12;
pub const MAX_ENUMERATED_COMPONENTS: usize = 20;

/// Whether the energy is evaluated in the scalar form
/// `mean(|u_t|^2 + |grad u|^2) - alpha log mean e^{2(u - mean u)}`
/// or in the system form weighted by the inverse coupling matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationKind {
    Scalar,
    System,
}

/// Coupling matrix `A` and mass vector `M` of
/// `u_tt - Delta u = A (M e^{2u} / mean e^{2u} - M)`.
#[derive(Clone, Debug)]
pub struct CouplingSpec {
    kind: EquationKind,
    a: DMatrix<f64>,
    m: Vec<f64>,
    inverse: Option<DMatrix<f64>>,
}

/// Hypotheses of the global existence result for systems.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Feasibility {
    pub positive_definite: bool,
    pub nonnegative_entries: bool,
    pub positive_masses: bool,
}

impl CouplingSpec {
    /// Scalar equation with parameter `alpha`: `N = 1`, `A = (alpha)`, `M = (1)`.
    pub fn scalar(alpha: f64) -> Self {
        let a = DMatrix::from_element(1, 1, alpha);
        let inverse = (alpha != 0.0).then(|| DMatrix::from_element(1, 1, 1.0 / alpha));
        Self { kind: EquationKind::Scalar, a, m: vec![1.0], inverse }
    }

    /// System with row-major coupling `a` (must be square and symmetric) and masses `m`.
    pub fn system(a: Vec<Vec<f64>>, m: Vec<f64>) -> Result<Self> {
        let n = m.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty mass vector".into()));
        }
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument(format!("coupling matrix must be {n}x{n}")));
        }
        if a.iter().flatten().chain(&m).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coupling entry".into()));
        }
        let mat = DMatrix::from_fn(n, n, |i, j| a[i][j]);
        let asym = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (mat[(i, j)] - mat[(j, i)]).abs())
            .fold(0.0, f64::max);
        if asym > SYMMETRY_TOLERANCE {
            return Err(Error::NotSymmetric(asym));
        }
        let inverse = mat.clone().try_inverse();
        Ok(Self { kind: EquationKind::System, a: mat, m, inverse })
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn components(&self) -> usize {
        self.m.len()
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn masses(&self) -> &[f64] {
        &self.m
    }

    /// `alpha` for the scalar form (`a_11 M_1`).
    pub fn alpha(&self) -> f64 {
        self.a[(0, 0)] * self.m[0]
    }

    /// Entries `a^{ij}` of `A^{-1}`.
    pub fn inverse(&self) -> Result<&DMatrix<f64>> {
        self.inverse.as_ref().ok_or(Error::SingularCoupling)
    }

    /// Operator (spectral) norm of `A`.
    pub fn operator_norm(&self) -> f64 {
        self.a.clone().symmetric_eigenvalues().iter().fold(0.0, |m: f64, e| m.max(e.abs()))
    }

    pub fn feasibility(&self) -> Feasibility {
        Feasibility {
            positive_definite: self.a.clone().cholesky().is_some(),
            nonnegative_entries: self.a.iter().all(|x| *x >= 0.0),
            positive_masses: self.m.iter().all(|x| *x > 0.0),
        }
    }
}

/// `Lambda_J(M) = sum_{j in J} M_j - sum_{i,j in J} a_ij M_i M_j` for one subset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetValue {
    /// 1-based component indices
    pub subset: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub entries: Vec<SubsetValue>,
    pub all_nonnegative: bool,
    pub all_positive: bool,
    pub feasibility: Feasibility,
}

impl LambdaReport {
    /// Sufficient conditions for global existence of the system flow.
    pub fn global_existence_hypotheses(&self) -> bool {
        let f = self.feasibility;
        f.positive_definite && f.nonnegative_entries && f.positive_masses && self.all_positive
    }

    pub fn value(&self, subset: &[usize]) -> Option<f64> {
        self.entries.iter().find(|e| e.subset == subset).map(|e| e.value)
    }
}

/// Enumerates `Lambda_J` over all `2^N - 1` non-empty subsets (bitmask order).
pub fn lambda_report(spec: &CouplingSpec) -> Result<LambdaReport> {
    let n = spec.components();
    if n > MAX_ENUMERATED_COMPONENTS {
        return Err(Error::TooManyComponents(n));
    }
    let m = spec.masses();
    let entries: Vec<SubsetValue> = (1u32..(1u32 << n))
        .map(|mask| {
            let members: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
            let linear: f64 = members.iter().map(|&j| m[j]).sum();
            let quadratic: f64 = members
                .iter()
                .flat_map(|&i| members.iter().map(move |&j| (i, j)))
                .map(|(i, j)| spec.a(i, j) * m[i] * m[j])
                .sum();
            SubsetValue { subset: members.iter().map(|j| j + 1).collect(), value: linear - quadratic }
        })
        .collect();
    Ok(LambdaReport {
        all_nonnegative: entries.iter().all(|e| e.value >= 0.0),
        all_positive: entries.iter().all(|e| e.value > 0.0),
        entries,
        feasibility: spec.feasibility(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_threshold() {
        for alpha in [-1.0, 0.5, 0.999, 1.0, 1.5] {
            let r = lambda_report(&CouplingSpec::scalar(alpha)).unwrap();
            assert_eq!(r.entries.len(), 1);
            assert!((r.entries[0].value - (1.0 - alpha)).abs() < 1e-15);
            assert_eq!(r.all_positive, alpha < 1.0);
        }
    }

    #[test]
    fn identity_half_masses() {
        let spec = CouplingSpec::system(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.5]).unwrap();
        let r = lambda_report(&spec).unwrap();
        assert_eq!(r.entries.len(), 3);
        assert_eq!(r.value(&[1]), Some(0.25));
        assert_eq!(r.value(&[2]), Some(0.25));
        assert_eq!(r.value(&[1, 2]), Some(0.5));
        assert!(r.global_existence_hypotheses());
    }

    #[test]
    fn zero_masses() {
        let spec = CouplingSpec::system(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![0.0, 0.0]).unwrap();
        let r = lambda_report(&spec).unwrap();
        assert!(r.entries.iter().all(|e| e.value == 0.0));
        assert!(!r.feasibility.positive_masses);
        assert!(!r.global_existence_hypotheses());
    }

    #[test]
    fn subset_count() {
        let n = 5;
        let a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.1 }).collect()).collect();
        let spec = CouplingSpec::system(a, vec![0.1; n]).unwrap();
        assert_eq!(lambda_report(&spec).unwrap().entries.len(), 31);
        let big = CouplingSpec::system(vec![vec![0.0; 21]; 21], vec![1.0; 21]).unwrap();
        assert!(matches!(lambda_report(&big), Err(Error::TooManyComponents(21))));
    }

    #[test]
    fn rejects_asymmetric() {
        let e = CouplingSpec::system(vec![vec![1.0, 0.2], vec![0.1, 1.0]], vec![1.0, 1.0]).unwrap_err();
        assert!(matches!(e, Error::NotSymmetric(_)));
    }

    #[test]
    fn feasibility_flags() {
        let spec = CouplingSpec::system(vec![vec![1.0, 2.0], vec![2.0, 1.0]], vec![1.0, 1.0]).unwrap();
        let f = spec.feasibility();
        assert!(!f.positive_definite && f.nonnegative_entries && f.positive_masses);
        assert!((spec.operator_norm() - 3.0).abs() < 1e-12);
        assert!(CouplingSpec::scalar(0.0).inverse().is_err());
    }
}
