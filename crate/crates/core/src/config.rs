//! Numerical tolerances shared across the crate.

/// Tolerance set used by validation, algorithm preconditions and verdicts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity, unit trace and positivity checks on density matrices.
    pub validation: f64,
    /// Preconditions of the numerical kernels (e.g. Hermitian input to the
    /// Hermitian eigensolver).
    pub precondition: f64,
    /// Margin applied to every strict inequality in a verdict. Ties resolve
    /// to `Inconclusive`.
    pub verdict: f64,
    /// Relative threshold under which characteristic-polynomial coefficients
    /// are treated as zero by the sign test.
    pub coefficient: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        validation: 1e-10,
        precondition: 1e-8,
        verdict: 1e-9,
        coefficient: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Largest imaginary part tolerated on a moment `Tr[R^k]`.
pub const MOMENT_IMAG_TOL: f64 = 1e-9;

/// Smallest `Tr[R]` accepted as positive.
pub const TRACE_FLOOR: f64 = 1e-9;

/// Largest imaginary part of an eigenvalue of `R` still counted as real.
pub const SPECTRUM_IMAG_TOL: f64 = 1e-7;
