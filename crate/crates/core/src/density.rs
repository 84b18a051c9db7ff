//! Validated bipartite density matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, ComplexMatrix};

/// A bipartite quantum state on `C^dim_a ⊗ C^dim_b`.
///
/// Construction goes through [`validate_density`], so every value of this type
/// is Hermitian, has unit trace and is positive semidefinite within the
/// tolerance it was validated with.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.matrix.frobenius_norm().powi(2)
    }
}

/// Checks squareness, subsystem dimensions, Hermiticity, unit trace and
/// positivity, in that order, and reports the first failure.
pub fn validate_density(
    m: ComplexMatrix,
    (dim_a, dim_b): (usize, usize),
    tol: f64,
) -> Result<DensityMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if dim_a == 0 || dim_b == 0 || m.rows() != dim_a * dim_b {
        return Err(Error::DimensionMismatch {
            size: m.rows(),
            dim_a,
            dim_b,
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::Trace {
            re: tr.re,
            im: tr.im,
        });
    }
    let spectrum = hermitian_eigenvalues(&m)?;
    if spectrum.min() < -tol {
        return Err(Error::NotPositive {
            min_eigenvalue: spectrum.min(),
        });
    }
    Ok(DensityMatrix {
        dim_a,
        dim_b,
        matrix: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_is_valid() {
        let m = ComplexMatrix::identity(4).scale_real(0.25);
        let rho = validate_density(m, (2, 2), 1e-10).unwrap();
        assert_eq!(rho.dims(), (2, 2));
        assert!((rho.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn each_failure_is_distinct() {
        let rect = ComplexMatrix::zeros(4, 2);
        assert!(matches!(
            validate_density(rect, (2, 2), 1e-10),
            Err(Error::NotSquare { .. })
        ));

        let wrong_dims = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(matches!(
            validate_density(wrong_dims, (3, 2), 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));

        let mut non_herm = ComplexMatrix::identity(4).scale_real(0.25);
        non_herm[(0, 1)] = Complex64::new(1e-3, 0.0);
        assert!(matches!(
            validate_density(non_herm, (2, 2), 1e-10),
            Err(Error::NotHermitian { .. })
        ));

        let bad_trace = ComplexMatrix::identity(4).scale_real(0.3);
        assert!(matches!(
            validate_density(bad_trace, (2, 2), 1e-10),
            Err(Error::Trace { .. })
        ));

        let indefinite = ComplexMatrix::from_real_diag(&[0.75, 0.5, -0.25, 0.0]);
        assert!(matches!(
            validate_density(indefinite, (2, 2), 1e-10),
            Err(Error::NotPositive { .. })
        ));
    }
}
