//! Bounds on the first moment `m₁ = Tr[R(ρ)]` from the measurable scalar
//! `s = Tr[R̃(ρ) P]`, `P` a trace-one permutation operator.
//!
//! With `k` the threshold offset, `m₁` satisfies
//! `m₁² + m₁(d²k - s) + k(1 - d²s) <= 0`. [`m1_interval_quadratic`] solves
//! this directly; [`m1_case_bounds`] evaluates the closed-form case bounds
//! `f_l, f_u` and `g_l, g_u` in closed form, with `x = 1 - d²s`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::realign::RealignedMatrix;
use crate::spa::apply_spa;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    Quadratic,
    Case1,
    Case2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MomentInterval {
    pub lower: f64,
    pub upper: f64,
    pub case_tag: CaseTag,
}

impl MomentInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, m1: f64, tol: f64) -> bool {
        m1 >= self.lower - tol && m1 <= self.upper + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimationInput {
    pub s: f64,
    pub d: usize,
    pub k: f64,
}

impl EstimationInput {
    pub fn new(s: f64, d: usize, k: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Estimation("d must be positive".into()));
        }
        if !s.is_finite() || !k.is_finite() {
            return Err(Error::Estimation(format!(
                "non-finite input s = {s}, k = {k}"
            )));
        }
        if k < 0.0 {
            return Err(Error::Estimation(format!("k = {k} is negative")));
        }
        Ok(Self { s, d, k })
    }

    /// `d²`.
    pub fn d2(&self) -> f64 {
        (self.d * self.d) as f64
    }

    /// `x = 1 - d²s`.
    pub fn x(&self) -> f64 {
        1.0 - self.d2() * self.s
    }

    /// `(d²k - s)² - 4k(1 - d²s)`.
    pub fn discriminant(&self) -> f64 {
        (self.d2() * self.k - self.s).powi(2) - 4.0 * self.k * self.x()
    }

    /// `(2 - d²s - 2√x, 2 - d²s + 2√x)`: Case 2 needs `d⁴k` at or below the
    /// first, Case 1 at or above the second.
    pub fn case_window(&self) -> Result<(f64, f64)> {
        let x = self.require_x()?;
        let base = 2.0 - self.d2() * self.s;
        Ok((base - 2.0 * x.sqrt(), base + 2.0 * x.sqrt()))
    }

    /// Which closed form applies.
    pub fn case(&self) -> Result<CaseTag> {
        let (lo_edge, hi_edge) = self.case_window()?;
        let d4 = self.d2() * self.d2();
        let d4k = d4 * self.k;
        Ok(if hi_edge <= d4k && d4k <= d4 {
            CaseTag::Case1
        } else if 0.0 <= d4k && d4k <= lo_edge {
            CaseTag::Case2
        } else {
            CaseTag::Quadratic
        })
    }

    fn require_x(&self) -> Result<f64> {
        let x = self.x();
        if x < 0.0 {
            return Err(Error::Estimation(format!(
                "x = 1 - d^2 s = {x} is negative"
            )));
        }
        Ok(x)
    }
}

/// Roots of `m² + m(d²k - s) + k(1 - d²s)`.
pub fn m1_interval_quadratic(input: &EstimationInput) -> Result<MomentInterval> {
    let disc = input.discriminant();
    if disc < 0.0 {
        return Err(Error::Estimation(format!(
            "negative discriminant {disc}: no real m1"
        )));
    }
    let b = input.d2() * input.k - input.s;
    let root = disc.sqrt();
    Ok(MomentInterval {
        lower: (-b - root) / 2.0,
        upper: (-b + root) / 2.0,
        case_tag: CaseTag::Quadratic,
    })
}

/// Case-1 / Case-2 closed forms; falls back to the quadratic interval when
/// `d⁴k` lies in neither window.
pub fn m1_case_bounds(input: &EstimationInput) -> Result<MomentInterval> {
    let x = input.require_x()?;
    let d2 = input.d2();
    let d4 = d2 * d2;
    let s = input.s;
    let sx = x.sqrt();

    let interval = match input.case()? {
        CaseTag::Case1 => {
            let radicand =
                d4 * d4 + 2.0 * d4 * d2 * s + 4.0 * d2 * s + d4 * s * s - 8.0 * (1.0 + sx);
            if radicand < 0.0 {
                return Err(Error::Estimation(format!(
                    "Case 1 radicand {radicand} is negative"
                )));
            }
            let root = radicand.sqrt() / (2.0 * d2);
            MomentInterval {
                lower: 0.5 * (-d2 + s) - root,
                upper: -(x + sx) / d2 + root,
                case_tag: CaseTag::Case1,
            }
        }
        CaseTag::Case2 => {
            let root = (1.0 + x - 2.0 * sx).max(0.0).sqrt();
            MomentInterval {
                lower: (-x + sx - root) / d2,
                upper: s / 2.0 + root / d2,
                case_tag: CaseTag::Case2,
            }
        }
        CaseTag::Quadratic => return m1_interval_quadratic(input),
    };
    if interval.lower > interval.upper {
        return Err(Error::Estimation(format!(
            "{:?} bounds are reversed: [{}, {}]",
            interval.case_tag, interval.lower, interval.upper
        )));
    }
    Ok(interval)
}

/// `SWAP / d` on `C^d ⊗ C^d`, trace one.
pub fn normalized_swap(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut m = ComplexMatrix::zeros(n, n);
    let w = Complex64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            m[(j * d + i, i * d + j)] = w;
        }
    }
    m
}

/// `s = Re Tr[R̃(ρ) P]`, `P` defaulting to `SWAP/d`.
pub fn simulate_s(r: &RealignedMatrix, p: f64, operator: Option<&ComplexMatrix>) -> Result<f64> {
    let d = r.subsystem_dim()?;
    let default;
    let op = match operator {
        Some(op) => op,
        None => {
            default = normalized_swap(d);
            &default
        }
    };
    let n = d * d;
    if (op.rows(), op.cols()) != (n, n) {
        return Err(Error::Shape {
            rows: n,
            cols: n,
            got: op.rows() * op.cols(),
        });
    }
    let tr = op.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::Estimation(format!(
            "Tr[P] = {} + {}i, expected 1",
            tr.re, tr.im
        )));
    }
    let spa = apply_spa(r, p)?;
    let value: Complex64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| spa[(i, j)] * op[(j, i)])
        .sum();
    if value.im.abs() > 1e-9 {
        return Err(Error::Estimation(format!(
            "Tr[R~ P] has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::validate_density;
    use crate::realign::realign;

    #[test]
    fn zero_offset_gives_unit_interval_in_s() {
        let i = m1_interval_quadratic(&EstimationInput::new(0.2, 2, 0.0).unwrap()).unwrap();
        assert_eq!((i.lower, i.upper), (0.0, 0.2));
    }

    #[test]
    fn quadratic_example_roots() {
        let i = m1_interval_quadratic(&EstimationInput::new(0.2, 2, 0.01).unwrap()).unwrap();
        let r = 0.0176f64.sqrt();
        assert!((i.lower - (0.16 - r) / 2.0).abs() < 1e-12);
        assert!((i.upper - (0.16 + r) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn double_root() {
        // k = 0, s = 0: disc = 0
        let i = m1_interval_quadratic(&EstimationInput::new(0.0, 2, 0.0).unwrap()).unwrap();
        assert_eq!(i.lower, i.upper);
    }

    #[test]
    fn negative_discriminant_is_an_error() {
        // d = 1, s = 0, k = 1: disc = 1 - 4 < 0
        assert!(m1_interval_quadratic(&EstimationInput::new(0.0, 1, 1.0).unwrap()).is_err());
    }

    #[test]
    fn case_selection() {
        let c2 = m1_case_bounds(&EstimationInput::new(0.2, 2, 0.001).unwrap()).unwrap();
        assert_eq!(c2.case_tag, CaseTag::Case2);
        // between the windows the discriminant is negative, so the fallback
        // has no real solution either
        let between = EstimationInput::new(0.2, 2, 0.1).unwrap();
        assert_eq!(between.case().unwrap(), CaseTag::Quadratic);
        assert!(between.discriminant() < 0.0);
        assert!(matches!(
            m1_case_bounds(&between),
            Err(Error::Estimation(_))
        ));
        let c1 = m1_case_bounds(&EstimationInput::new(0.2, 2, 0.2).unwrap()).unwrap();
        assert_eq!(c1.case_tag, CaseTag::Case1);
        let origin = m1_case_bounds(&EstimationInput::new(0.0, 2, 0.0).unwrap()).unwrap();
        assert_eq!(origin.case_tag, CaseTag::Case2);
        assert!(origin.contains(0.0, 0.0));
    }

    #[test]
    fn negative_x_is_rejected() {
        assert!(m1_case_bounds(&EstimationInput::new(0.5, 2, 0.0).unwrap()).is_err());
    }

    #[test]
    fn simulated_s_examples() {
        let rho =
            validate_density(ComplexMatrix::identity(4).scale_real(0.25), (2, 2), 1e-10).unwrap();
        let r = realign(&rho);
        assert!((simulate_s(&r, 0.0, None).unwrap() - 0.5).abs() < 1e-15);
        let flat = ComplexMatrix::identity(4).scale_real(0.25);
        assert!((simulate_s(&r, 0.3, Some(&flat)).unwrap() - 0.25).abs() < 1e-15);
        assert!((simulate_s(&r, 1.0, None).unwrap() - 0.25).abs() < 1e-15);
        assert!(simulate_s(&r, 0.0, Some(&ComplexMatrix::identity(4))).is_err());
    }
}
