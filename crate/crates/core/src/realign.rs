//! The realignment map `R(·)`, its moments, and the realignment (CCNR)
//! criterion.
//!
//! For a state `ρ = Σ ρ_{(i,j),(k,l)} |ij><kl|` the realigned matrix is
//! `R(ρ) = Σ ρ_{(i,j),(k,l)} |ik><jl|`, a `dim_a² x dim_b²` matrix. The entry
//! permutation is the canonical implementation; [`realign_block_form`] builds
//! the same object from column-stacked blocks and differs from it only by the
//! swap permutation `|ik> -> |ki>` on both sides.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::config::{MOMENT_IMAG_TOL, SPECTRUM_IMAG_TOL, TRACE_FLOOR};
use crate::criteria::Verdict;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::{general_eigenvalues, singular_values, ComplexMatrix};

/// Realignment by index permutation: `((i,j),(k,l)) -> ((i,k),(j,l))`.
///
/// `m` must be `(dim_a·dim_b) x (dim_a·dim_b)`.
pub fn realign_matrix(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> ComplexMatrix {
    let n = dim_a * dim_b;
    assert_eq!(
        (m.rows(), m.cols()),
        (n, n),
        "matrix does not match {dim_a}x{dim_b}"
    );
    let mut out = ComplexMatrix::zeros(dim_a * dim_a, dim_b * dim_b);
    for i in 0..dim_a {
        for j in 0..dim_b {
            for k in 0..dim_a {
                for l in 0..dim_b {
                    out[(i * dim_a + k, j * dim_b + l)] = m[(i * dim_b + j, k * dim_b + l)];
                }
            }
        }
    }
    out
}

/// Realignment assembled block by block: viewing `m` as a `dim_a x dim_a`
/// grid of `dim_b x dim_b` blocks `X_{ij}`, row number `j·dim_a + i` is
/// `vec(X_{ij})ᵗ` (blocks ordered `X_11, ..., X_m1, ..., X_1m, ..., X_mm`).
pub fn realign_block_form(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> ComplexMatrix {
    let n = dim_a * dim_b;
    assert_eq!(
        (m.rows(), m.cols()),
        (n, n),
        "matrix does not match {dim_a}x{dim_b}"
    );
    let mut out = ComplexMatrix::zeros(dim_a * dim_a, dim_b * dim_b);
    for j in 0..dim_a {
        for i in 0..dim_a {
            let mut block = ComplexMatrix::zeros(dim_b, dim_b);
            for r in 0..dim_b {
                for c in 0..dim_b {
                    block[(r, c)] = m[(i * dim_b + r, j * dim_b + c)];
                }
            }
            let row = j * dim_a + i;
            for (col, z) in block.vec().as_slice().iter().enumerate() {
                out[(row, col)] = *z;
            }
        }
    }
    out
}

/// `R(ρ)` together with its subsystem dimensions and cached moments.
#[derive(Debug, Clone)]
pub struct RealignedMatrix {
    matrix: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    /// `Tr[R^k]`, `k = 1..=d²`; empty when `dim_a != dim_b`.
    moments: Vec<Complex64>,
    singular: OnceLock<Vec<f64>>,
}

impl RealignedMatrix {
    fn new(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Self {
        let moments = if dim_a == dim_b {
            matrix.power_traces(dim_a * dim_a)
        } else {
            Vec::new()
        };
        Self {
            matrix,
            dim_a,
            dim_b,
            moments,
            singular: OnceLock::new(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    /// `d` when both subsystems have dimension `d`.
    pub fn subsystem_dim(&self) -> Result<usize> {
        if self.dim_a == self.dim_b {
            Ok(self.dim_a)
        } else {
            Err(Error::Domain(format!(
                "moments need equal subsystem dimensions, got {}x{}",
                self.dim_a, self.dim_b
            )))
        }
    }

    /// `Tr[R(ρ)]`, complex in general (real when `dim_a = dim_b`).
    pub fn trace(&self) -> Complex64 {
        if self.matrix.is_square() {
            self.matrix.trace()
        } else {
            let n = self.matrix.rows().min(self.matrix.cols());
            (0..n).map(|i| self.matrix[(i, i)]).sum()
        }
    }

    /// Real moments `m_1..m_{d²}`.
    pub fn moments(&self) -> Result<Vec<f64>> {
        self.subsystem_dim()?;
        self.moments
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if z.im.abs() > MOMENT_IMAG_TOL * z.norm().max(1.0) {
                    Err(Error::Domain(format!(
                        "moment m_{} has imaginary part {:e}",
                        i + 1,
                        z.im
                    )))
                } else {
                    Ok(z.re)
                }
            })
            .collect()
    }

    /// Singular values of `R(ρ)`, descending.
    pub fn singular_values(&self) -> &[f64] {
        self.singular.get_or_init(|| singular_values(&self.matrix))
    }

    /// `||R(ρ)||₁`.
    pub fn trace_norm(&self) -> f64 {
        self.singular_values().iter().sum()
    }

    /// `Tr[R] > 0` as required by the SPA-R normalisation. Returns the trace.
    pub fn require_positive_trace(&self) -> Result<f64> {
        self.subsystem_dim()?;
        let tr = self.trace();
        if tr.im.abs() > MOMENT_IMAG_TOL || tr.re <= TRACE_FLOOR {
            return Err(Error::Domain(format!(
                "Tr[R] = {} + {}i is not positive",
                tr.re, tr.im
            )));
        }
        Ok(tr.re)
    }

    /// Membership in the SPA-R domain: positive trace and a real spectrum
    /// (largest eigenvalue imaginary part at most 1e-7, eigenvalues from the
    /// general QR solver).
    pub fn check_domain(&self) -> Result<()> {
        self.require_positive_trace()?;
        let worst = general_eigenvalues(&self.matrix)?
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
        if worst > SPECTRUM_IMAG_TOL {
            return Err(Error::Domain(format!(
                "R(rho) has eigenvalues with imaginary part up to {worst:e}"
            )));
        }
        Ok(())
    }
}

/// `R(ρ)`.
pub fn realign(rho: &DensityMatrix) -> RealignedMatrix {
    let (a, b) = rho.dims();
    RealignedMatrix::new(realign_matrix(rho.matrix(), a, b), a, b)
}

/// Outcome of the realignment criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealignmentCheck {
    pub verdict: Verdict,
    /// `||R(ρ)||₁`.
    pub score: f64,
}

/// Entangled iff `||R(ρ)||₁ > 1 + tol`.
pub fn realignment_criterion(r: &RealignedMatrix, tol: f64) -> RealignmentCheck {
    let score = r.trace_norm();
    RealignmentCheck {
        verdict: Verdict::from_violation(score > 1.0 + tol),
        score,
    }
}

/// Schmidt-symmetric iff `||R(ρ)||₁ = Tr[R(ρ)]` within `tol` (and the trace
/// is real within `tol`).
pub fn is_schmidt_symmetric(r: &RealignedMatrix, tol: f64) -> bool {
    let tr = r.trace();
    tr.im.abs() <= tol && (r.trace_norm() - tr.re).abs() <= tol
}

/// Realignment moment `r_k = Tr[(R R^dagger)^{k/2}] = Σ σ_i^k`.
pub fn zhang_moment(r: &RealignedMatrix, k: u32) -> f64 {
    assert!(k >= 1, "realignment moments start at k = 1");
    r.singular_values().iter().map(|s| s.powi(k as i32)).sum()
}
