//! Entanglement verdicts built on the realigned matrix: the SPA-R inequality,
//! the error inequality, and the two moment criteria `Q1`, `Q2`.
//!
//! Every test here is one-sided. A violated inequality certifies
//! entanglement; a satisfied one proves nothing.

use serde::Serialize;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::trace_norm;
use crate::realign::{realign, realignment_criterion, zhang_moment, RealignedMatrix};
use crate::spa::apply_spa;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

impl Verdict {
    pub fn from_violation(violated: bool) -> Self {
        if violated {
            Verdict::Entangled
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn is_entangled(self) -> bool {
        self == Verdict::Entangled
    }
}

/// Separable states satisfy `||R̃(ρ)||₁ <= (p(Tr R - 1) + 1) / Tr R`.
pub fn spa_r_upper_bound(trace_r: f64, p: f64) -> Result<f64> {
    if trace_r <= 0.0 {
        return Err(Error::Domain(format!("Tr[R] = {trace_r} is not positive")));
    }
    Ok((p * (trace_r - 1.0) + 1.0) / trace_r)
}

/// Outcome of the SPA-R inequality at one `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaRCheck {
    pub trace_norm: f64,
    pub upper_bound: f64,
    pub verdict: Verdict,
}

/// Entangled iff `||R̃(ρ)||₁ > UB + tol`.
pub fn spa_r_verdict(r: &RealignedMatrix, p: f64, tol: f64) -> Result<SpaRCheck> {
    let out = apply_spa(r, p)?;
    let trace_norm = trace_norm(&out);
    let upper_bound = spa_r_upper_bound(r.require_positive_trace()?, p)?;
    Ok(SpaRCheck {
        trace_norm,
        upper_bound,
        verdict: Verdict::from_violation(trace_norm > upper_bound + tol),
    })
}

/// Distance between the SPA-R output and `R(ρ)` together with its bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorSuite {
    /// `||R̃(ρ) - R(ρ)||₁`.
    pub error_norm: f64,
    /// `p + ((1 - p - Tr R)/Tr R) ||R||₁`, valid for every state.
    pub bound_general: f64,
    /// `(1 - p)(1 - Tr R)/Tr R`, valid for separable states.
    pub bound_separable: f64,
    pub verdict: Verdict,
}

pub fn error_suite(r: &RealignedMatrix, p: f64, tol: f64) -> Result<ErrorSuite> {
    let trace_r = r.require_positive_trace()?;
    let out = apply_spa(r, p)?;
    let error_norm = trace_norm(&(&out - r.matrix()));
    let bound_general = p + (1.0 - p - trace_r) / trace_r * r.trace_norm();
    let bound_separable = (1.0 - p) * (1.0 - trace_r) / trace_r;
    Ok(ErrorSuite {
        error_norm,
        bound_general,
        bound_separable,
        verdict: Verdict::from_violation(error_norm > bound_separable + tol),
    })
}

/// `Q1 = r₂² - r₃` with `r_k = Σ σ_i^k`; positive means entangled.
pub fn q1_zhang(r: &RealignedMatrix) -> f64 {
    zhang_moment(r, 2).powi(2) - zhang_moment(r, 3)
}

/// Singular values at or below this fraction of `max(1, σ₁)` count as zero.
const RANK_TOL: f64 = 1e-10;

/// `Q2 = n(n-1) (Π_{i<=n} σ_i²)^{1/n} + Σ σ_i² - 1` over the `n` nonzero
/// singular values of `R(ρ)`; positive means entangled.
///
/// For a rank-8 realigned two-qutrit state this is `56 D₈^{1/8} + T₁ - 1`.
pub fn q2_rmoment(r: &RealignedMatrix) -> f64 {
    let sv = r.singular_values();
    let cutoff = RANK_TOL * sv.first().copied().unwrap_or(0.0).max(1.0);
    let nonzero: Vec<f64> = sv.iter().copied().filter(|&s| s > cutoff).collect();
    let n = nonzero.len() as f64;
    let sum_sq: f64 = sv.iter().map(|s| s * s).sum();
    if nonzero.len() < 2 {
        return sum_sq - 1.0;
    }
    let log_mean = nonzero.iter().map(|s| 2.0 * s.ln()).sum::<f64>() / n;
    n * (n - 1.0) * log_mean.exp() + sum_sq - 1.0
}

/// Largest `p` at which the SPA-R inequality is still violated, by bisection
/// to width `step` on `[0, 1]`. Assumes the violated set is an interval
/// starting at `p = 0`; `None` when `p = 0` is not violated.
pub fn max_violating_p(r: &RealignedMatrix, tol: f64, step: f64) -> Result<Option<f64>> {
    let violated = |p: f64| spa_r_verdict(r, p, tol).map(|c| c.verdict.is_entangled());
    if !violated(0.0)? {
        return Ok(None);
    }
    if violated(1.0)? {
        return Ok(Some(1.0));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > step {
        let mid = 0.5 * (lo + hi);
        if violated(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// All criteria for one state at one `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionReport {
    pub p: f64,
    pub trace_norm_spa_r: f64,
    pub upper_bound: f64,
    pub spa_r_verdict: Verdict,
    pub error_norm: f64,
    pub error_bound_general: f64,
    pub error_bound_separable: f64,
    pub error_verdict: Verdict,
    pub q1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q2: Option<f64>,
    pub realignment_score: f64,
    pub realignment_verdict: Verdict,
}

/// Runs every criterion on `ρ` at mixing probability `p`.
pub fn analyze(rho: &DensityMatrix, p: f64, tol: f64) -> Result<CriterionReport> {
    analyze_realigned(&realign(rho), p, tol)
}

pub fn analyze_realigned(r: &RealignedMatrix, p: f64, tol: f64) -> Result<CriterionReport> {
    let spa = spa_r_verdict(r, p, tol)?;
    let err = error_suite(r, p, tol)?;
    let ccnr = realignment_criterion(r, tol);
    Ok(CriterionReport {
        p,
        trace_norm_spa_r: spa.trace_norm,
        upper_bound: spa.upper_bound,
        spa_r_verdict: spa.verdict,
        error_norm: err.error_norm,
        error_bound_general: err.bound_general,
        error_bound_separable: err.bound_separable,
        error_verdict: err.verdict,
        q1: q1_zhang(r),
        q2: Some(q2_rmoment(r)),
        realignment_score: ccnr.score,
        realignment_verdict: ccnr.verdict,
    })
}
