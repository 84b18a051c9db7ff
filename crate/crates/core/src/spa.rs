//! Structural physical approximation of the realignment map (SPA-R).
//!
//! `R̃(ρ) = (p/d²)·I + ((1-p)/Tr[R(ρ)])·R(ρ)`. Positivity of the output is
//! decided from moments only: Newton's identities turn `m_k = Tr[R^k]` into
//! characteristic-polynomial coefficients, whose signs certify a nonnegative
//! real spectrum, and the first two moments give a lower bound on the least
//! eigenvalue which fixes the smallest admissible mixing probability `l`.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::Tolerances;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, ComplexMatrix};
use crate::realign::RealignedMatrix;

/// Radicands below this (in absolute terms) are clamped to zero.
const VARIANCE_TOL: f64 = 1e-12;

fn moment_variance(m1: f64, m2: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    let variance = m2 / nf - (m1 / nf).powi(2);
    if variance < -VARIANCE_TOL {
        return Err(Error::Domain(format!(
            "negative moment variance {variance:e}: spectrum is not real"
        )));
    }
    Ok(variance.max(0.0))
}

/// Lower bound on the least eigenvalue of an `n x n` matrix with real
/// spectrum from `m1 = Tr A` and `m2 = Tr A²`:
/// `m1/n - sqrt((n-1)(m2/n - (m1/n)²))`.
pub fn lambda_min_lower_bound(m1: f64, m2: f64, n: usize) -> Result<f64> {
    assert!(n >= 1);
    let variance = moment_variance(m1, m2, n)?;
    Ok(m1 / n as f64 - ((n as f64 - 1.0) * variance).sqrt())
}

/// Companion upper bound on the largest eigenvalue:
/// `m1/n + sqrt((n-1)(m2/n - (m1/n)²))`.
pub fn lambda_max_upper_bound(m1: f64, m2: f64, n: usize) -> Result<f64> {
    assert!(n >= 1);
    let variance = moment_variance(m1, m2, n)?;
    Ok(m1 / n as f64 + ((n as f64 - 1.0) * variance).sqrt())
}

/// Coefficients `a_0..a_n` of `f(x) = Σ (-1)^k a_k x^{n-k}`, `a_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CharPolyCoeffs(Vec<f64>);

impl CharPolyCoeffs {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `a_k`.
    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    /// `a_1..a_n`.
    pub fn tail(&self) -> &[f64] {
        &self.0[1..]
    }
}

/// Newton's identities: `a_k = (1/k) Σ_{i=1}^{k} (-1)^{i-1} a_{k-i} m_i`.
pub fn newton_coefficients(moments: &[f64]) -> CharPolyCoeffs {
    assert!(!moments.is_empty(), "need at least one moment");
    let mut a = Vec::with_capacity(moments.len() + 1);
    a.push(1.0);
    for k in 1..=moments.len() {
        let mut sum = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * a[k - i] * moments[i - 1];
        }
        a.push(sum / k as f64);
    }
    CharPolyCoeffs(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Definiteness {
    #[serde(rename = "PSD")]
    Psd,
    #[serde(rename = "NotPSD")]
    NotPsd,
}

/// Descartes' rule of signs for a real-rooted characteristic polynomial: the
/// spectrum is nonnegative iff every `a_i >= 0`. Coefficients with
/// `|a_i| <= tol * max(1, max_i |a_i|)` count as zero.
pub fn descartes_psd_test(coeffs: &CharPolyCoeffs, tol: f64) -> Definiteness {
    let scale = coeffs.tail().iter().fold(1.0f64, |acc, a| acc.max(a.abs()));
    if coeffs.tail().iter().all(|&a| a >= -tol * scale) {
        Definiteness::Psd
    } else {
        Definiteness::NotPsd
    }
}

/// Threshold quantities for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpaThreshold {
    pub d: usize,
    pub trace_r: f64,
    pub lower_bound: f64,
    pub k: f64,
    pub l: f64,
    pub definiteness: Definiteness,
    pub coefficients: CharPolyCoeffs,
}

/// Smallest admissible `p`: `l = 0` when the sign test certifies `R(ρ)`
/// positive, else `l = d²k / (Tr[R] + d²k)` with `k = max(0, -λ_min^lb)`.
pub fn spa_threshold(r: &RealignedMatrix) -> Result<SpaThreshold> {
    spa_threshold_with(r, &Tolerances::DEFAULT)
}

pub fn spa_threshold_with(r: &RealignedMatrix, tol: &Tolerances) -> Result<SpaThreshold> {
    r.check_domain()?;
    let d = r.subsystem_dim()?;
    let n = d * d;
    let moments = r.moments()?;
    let trace_r = moments[0];
    let lower_bound = lambda_min_lower_bound(moments[0], moments[1.min(n - 1)], n)?;
    let k = (-lower_bound).max(0.0);
    let coefficients = newton_coefficients(&moments);
    let definiteness = descartes_psd_test(&coefficients, tol.coefficient);
    let l = match definiteness {
        Definiteness::Psd => 0.0,
        Definiteness::NotPsd if k == 0.0 => return Err(Error::DomainInconsistent { lower_bound }),
        Definiteness::NotPsd => {
            let nk = n as f64 * k;
            nk / (trace_r + nk)
        }
    };
    Ok(SpaThreshold {
        d,
        trace_r,
        lower_bound,
        k,
        l,
        definiteness,
        coefficients,
    })
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

/// `R̃(ρ) = (p/d²) I + ((1-p)/Tr[R]) R`.
///
/// Only needs `Tr[R] > 0`; positivity of the output for `p >= l` is the
/// business of [`spa_threshold`].
pub fn apply_spa(r: &RealignedMatrix, p: f64) -> Result<ComplexMatrix> {
    check_probability(p)?;
    let trace_r = r.require_positive_trace()?;
    let d = r.subsystem_dim()?;
    let n = d * d;
    let mut out = r.matrix().scale_real((1.0 - p) / trace_r);
    let shift = Complex64::new(p / n as f64, 0.0);
    for i in 0..n {
        out[(i, i)] += shift;
    }
    Ok(out)
}

/// Full SPA-R analysis of a state at mixing probability `p`.
#[derive(Debug, Clone)]
pub struct SpaAnalysis {
    pub p: f64,
    pub threshold: SpaThreshold,
    pub spa_matrix: ComplexMatrix,
}

impl SpaAnalysis {
    pub fn new(r: &RealignedMatrix, p: f64) -> Result<Self> {
        let threshold = spa_threshold(r)?;
        let spa_matrix = apply_spa(r, p)?;
        Ok(Self {
            p,
            threshold,
            spa_matrix,
        })
    }
}

/// Witness pair for the complete-positivity conditions
/// `λ_min[R̃(ρ)] >= γ₁ λ_min[ρ]`, `λ_max[R̃(ρ)] <= γ₂ λ_max[ρ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CpCertificate {
    pub gamma1: f64,
    pub gamma2: f64,
    pub certified: bool,
}

/// Certifies the SPA-R output at `p`.
///
/// `γ₁ = 0` works exactly when the output has a nonnegative spectrum, which the
/// moment-based threshold guarantees for `p >= l`. `γ₂` uses the moment upper
/// bound on the largest eigenvalue of the output.
pub fn certify_completely_positive(
    rho: &DensityMatrix,
    r: &RealignedMatrix,
    p: f64,
) -> Result<CpCertificate> {
    let threshold = spa_threshold(r)?;
    let out = apply_spa(r, p)?;
    let n = out.rows();
    let m1 = out.power_trace(1).re;
    let m2 = out.power_trace(2).re;
    let upper = lambda_max_upper_bound(m1, m2, n)?;
    let rho_max = hermitian_eigenvalues(rho.matrix())?.max();
    let gamma2 = upper.max(0.0) / rho_max;
    Ok(CpCertificate {
        gamma1: 0.0,
        gamma2,
        certified: p >= threshold.l - 1e-12,
    })
}

/// The three reference closed forms attached to the `ρ_t` family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoTThresholds {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

/// `p1(t) = (2(13 - 24t + 8t²) - sqrt(3(67 - 112t + 64t²))) / (4t - 5)²`,
/// `p2(t) = ((-91 - 48t - 64t²) - sqrt(u)) / (2(48t - 7)²)` with
/// `u = 8673 + 9632t - 8832t² - 6144t³ + 4096t⁴`,
/// `p3(t) = (14 - 128t + 64t²) / (7 - 80t + 128t²)`.
///
/// Evaluated verbatim. Note that `p1` coincides with `4k/(1 + 4k)` rather
/// than `4k/(Tr[R] + 4k)`, and that `p2` is negative on the
/// negative-`t` branch; [`rho_t_violation_upper_edge`] is the boundary that
/// the SPA-R inequality actually has there.
pub fn rho_t_reference_thresholds(t: f64) -> RhoTThresholds {
    let p1 = (2.0 * (13.0 - 24.0 * t + 8.0 * t * t)
        - (3.0 * (67.0 - 112.0 * t + 64.0 * t * t)).sqrt())
        / (4.0 * t - 5.0).powi(2);
    let u = rho_t_u(t);
    let p2 = ((-91.0 - 48.0 * t - 64.0 * t * t) - u.sqrt()) / (2.0 * (48.0 * t - 7.0).powi(2));
    let p3 = (14.0 - 128.0 * t + 64.0 * t * t) / (7.0 - 80.0 * t + 128.0 * t * t);
    RhoTThresholds { p1, p2, p3 }
}

fn rho_t_u(t: f64) -> f64 {
    8673.0 + 9632.0 * t - 8832.0 * t.powi(2) - 6144.0 * t.powi(3) + 4096.0 * t.powi(4)
}

/// Upper end of the SPA-R violation window in `p` for `ρ_t`, `t < 0`:
/// `((-91 - 48t - 64t²) + sqrt(u)) / (2(48t - 7))`.
pub fn rho_t_violation_upper_edge(t: f64) -> f64 {
    ((-91.0 - 48.0 * t - 64.0 * t * t) + rho_t_u(t).sqrt()) / (2.0 * (48.0 * t - 7.0))
}

/// Reference threshold for the `ρ_a` family:
/// `l₁ = (-1 + 15√2 w + 6√2 a² w) / (3√2 (5 + 2a²) w)`,
/// `w = sqrt(1 / (56 + 9a²(5 + a²)))`.
pub fn rho_a_reference_threshold(a: f64) -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    let w = (1.0 / (56.0 + 9.0 * a * a * (5.0 + a * a))).sqrt();
    (-1.0 + 15.0 * s2 * w + 6.0 * s2 * a * a * w) / (3.0 * s2 * (5.0 + 2.0 * a * a) * w)
}
