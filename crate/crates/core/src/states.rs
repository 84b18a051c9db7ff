//! State families and seeded random ensembles.
//!
//! Basis ordering is lexicographic in the product basis: `|i>⊗|j>` sits at
//! index `i·dim_b + j`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::config::Tolerances;
use crate::density::{validate_density, DensityMatrix};
use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexMatrix};

/// `sqrt(5/2)/2`, the edge of the `ρ_t` family.
pub const RHO_T_MAX: f64 = 0.790_569_415_042_094_9;

const RANGE_SLACK: f64 = 1e-12;

fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<()> {
    if !value.is_finite() || value < min - RANGE_SLACK || value > max + RANGE_SLACK {
        return Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        });
    }
    Ok(())
}

fn finish(m: ComplexMatrix, dims: (usize, usize)) -> Result<DensityMatrix> {
    validate_density(m, dims, Tolerances::DEFAULT.validation)
}

/// The unchecked `ρ_t` matrix `(1/2)[[5/4,0,0,t],[0,0,0,0],[0,0,1/4,0],[t,0,0,1/2]]`.
pub fn rho_t_matrix(t: f64) -> ComplexMatrix {
    #[rustfmt::skip]
    let entries = [
        0.625, 0.0, 0.0,   0.5 * t,
        0.0,   0.0, 0.0,   0.0,
        0.0,   0.0, 0.125, 0.0,
        0.5 * t, 0.0, 0.0, 0.25,
    ];
    ComplexMatrix::from_real(4, 4, &entries).expect("4x4 literal")
}

/// Two-qubit family `ρ_t`, `|t| <= sqrt(5/2)/2`.
pub fn rho_t(t: f64) -> Result<DensityMatrix> {
    check_range("t", t, -RHO_T_MAX, RHO_T_MAX)?;
    finish(rho_t_matrix(t), (2, 2))
}

fn ket3(pairs: &[(usize, usize, f64)]) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); 9];
    for &(i, j, c) in pairs {
        v[i * 3 + j] += c;
    }
    v
}

/// Two-qutrit NPT family
/// `ρ_a = (|ψ₁><ψ₁| + |ψ₂><ψ₂| + |ψ₃><ψ₃|) / (5 + 2a²)` with
/// `ψ₁ = |01> - a|10>`, `ψ₂ = |02> - a|20>`, `ψ₃ = |00> + |11> + |22>`,
/// for `1/√2 <= a <= 1`.
pub fn rho_a(a: f64) -> Result<DensityMatrix> {
    check_range("a", a, std::f64::consts::FRAC_1_SQRT_2, 1.0)?;
    let psis = [
        ket3(&[(0, 1, 1.0), (1, 0, -a)]),
        ket3(&[(0, 2, 1.0), (2, 0, -a)]),
        ket3(&[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]),
    ];
    let mut m = ComplexMatrix::zeros(9, 9);
    for psi in &psis {
        m = &m + &ComplexMatrix::outer(psi, psi);
    }
    finish(m.scale_real(1.0 / (5.0 + 2.0 * a * a)), (3, 3))
}

/// `|φ+> = Σ_i |ii> / √d`.
pub fn max_entangled(d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = Complex64::new(amp, 0.0);
    }
    v
}

/// Isotropic state `β|φ+><φ+| + (1-β) I/d²`, `-1/(d²-1) <= β <= 1`.
pub fn isotropic(beta: f64, d: usize) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as f64,
            min: 2.0,
            max: f64::INFINITY,
        });
    }
    let n = d * d;
    check_range("beta", beta, -1.0 / (n as f64 - 1.0), 1.0)?;
    let phi = max_entangled(d);
    let m = &ComplexMatrix::outer(&phi, &phi).scale_real(beta)
        + &ComplexMatrix::identity(n).scale_real((1.0 - beta) / n as f64);
    finish(m, (d, d))
}

/// Two-qutrit PPT entangled family `ρ_α`, `0 <= α <= 1`.
pub fn alpha_state(alpha: f64) -> Result<DensityMatrix> {
    check_range("alpha", alpha, 0.0, 1.0)?;
    let alpha = alpha.clamp(0.0, 1.0);
    let mut m = ComplexMatrix::zeros(9, 9);
    for i in [0, 4, 8] {
        for j in [0, 4, 8] {
            m[(i, j)] = alpha.into();
        }
    }
    for i in [1, 2, 3, 5, 7] {
        m[(i, i)] = alpha.into();
    }
    let diag = (1.0 + alpha) / 2.0;
    let off = (1.0 - alpha * alpha).sqrt() / 2.0;
    m[(6, 6)] = diag.into();
    m[(8, 8)] = diag.into();
    m[(6, 8)] = off.into();
    m[(8, 6)] = off.into();
    finish(m.scale_real(1.0 / (8.0 * alpha + 1.0)), (3, 3))
}

/// The named one-parameter families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateFamily {
    RhoT,
    RhoA,
    Isotropic,
    AlphaState,
}

impl StateFamily {
    pub const ALL: [StateFamily; 4] = [
        StateFamily::RhoT,
        StateFamily::RhoA,
        StateFamily::Isotropic,
        StateFamily::AlphaState,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StateFamily::RhoT => "rho_t",
            StateFamily::RhoA => "rho_a",
            StateFamily::Isotropic => "isotropic",
            StateFamily::AlphaState => "alpha_state",
        }
    }

    /// Closed parameter interval on which the family is a state. `d` only
    /// matters for the isotropic family.
    pub fn parameter_range(self, d: usize) -> (f64, f64) {
        match self {
            StateFamily::RhoT => (-RHO_T_MAX, RHO_T_MAX),
            StateFamily::RhoA => (std::f64::consts::FRAC_1_SQRT_2, 1.0),
            StateFamily::Isotropic => (-1.0 / ((d * d) as f64 - 1.0), 1.0),
            StateFamily::AlphaState => (0.0, 1.0),
        }
    }

    /// Subsystem dimension the family lives in.
    pub fn dim(self, d: usize) -> usize {
        match self {
            StateFamily::RhoT => 2,
            StateFamily::RhoA | StateFamily::AlphaState => 3,
            StateFamily::Isotropic => d,
        }
    }

    pub fn build(self, param: f64, d: usize) -> Result<DensityMatrix> {
        match self {
            StateFamily::RhoT => rho_t(param),
            StateFamily::RhoA => rho_a(param),
            StateFamily::Isotropic => isotropic(param, d),
            StateFamily::AlphaState => alpha_state(param),
        }
    }
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StateFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        StateFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                format!("unknown family `{s}` (expected rho_t, rho_a, isotropic or alpha_state)")
            })
    }
}

/// Seeded generator used by every ensemble below.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite samples")
}

/// Random density matrix `G G† / Tr[G G†]` with `G` an `n x rank` Ginibre
/// matrix.
pub fn random_density_matrix(n: usize, rank: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, rank.max(1), rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

/// Random full-rank state on `dim_a ⊗ dim_b`.
pub fn random_density(dim_a: usize, dim_b: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = seeded_rng(seed);
    let n = dim_a * dim_b;
    finish(random_density_matrix(n, n, &mut rng), (dim_a, dim_b))
}

/// Haar-random unitary: Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|r| g[(r, c)]).collect();
        // two passes keep the basis orthonormal to working precision
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, qi) in v.iter_mut().zip(q) {
                    *x -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            u[(r, c)] = *z;
        }
    }
    u
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Non-normal matrix with the given real spectrum: `U T U†` with `T` upper
/// triangular, `diag(T) = spectrum`.
pub fn random_real_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> ComplexMatrix {
    let n = spectrum.len();
    let mut t = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = spectrum[i].into();
        for j in (i + 1)..n {
            t[(i, j)] = gaussian(rng).scale(0.5);
        }
    }
    let u = random_unitary(n, rng);
    u.matmul(&t).matmul(&u.adjoint())
}

/// Weights drawn uniformly from the probability simplex.
pub fn simplex_weights(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Convex mixture of `terms` product states `ρ_A ⊗ ρ_B`, each factor a random
/// density matrix of random rank.
pub fn random_separable_with(
    dim_a: usize,
    dim_b: usize,
    terms: usize,
    rng: &mut impl Rng,
) -> Result<DensityMatrix> {
    assert!(terms >= 1, "need at least one product term");
    let weights = simplex_weights(terms, rng);
    let n = dim_a * dim_b;
    let mut m = ComplexMatrix::zeros(n, n);
    for q in weights {
        let ra = rng.random_range(1..=dim_a);
        let rb = rng.random_range(1..=dim_b);
        let a = random_density_matrix(dim_a, ra, rng);
        let b = random_density_matrix(dim_b, rb, rng);
        m = &m + &kron(&a, &b).scale_real(q);
    }
    finish(m, (dim_a, dim_b))
}

/// Seeded form of [`random_separable_with`].
pub fn random_separable(
    dim_a: usize,
    dim_b: usize,
    terms: usize,
    seed: u64,
) -> Result<DensityMatrix> {
    random_separable_with(dim_a, dim_b, terms, &mut seeded_rng(seed))
}

/// Schmidt-symmetric state `w|φ+><φ+| + (1-w) Σ_j q_j A_j ⊗ A_j*` with
/// random weights and random density matrices `A_j`. Its realigned matrix is
/// positive semidefinite, so `||R||₁ = Tr R`.
pub fn random_schmidt_symmetric(
    d: usize,
    terms: usize,
    rng: &mut impl Rng,
) -> Result<DensityMatrix> {
    let n = d * d;
    let w: f64 = rng.random();
    let phi = max_entangled(d);
    let mut m = ComplexMatrix::outer(&phi, &phi).scale_real(w);
    for q in simplex_weights(terms.max(1), rng) {
        let rank = rng.random_range(1..=d);
        let a = random_density_matrix(d, rank, rng);
        let conj = ComplexMatrix::new(d, d, a.as_slice().iter().map(|z| z.conj()).collect())?;
        m = &m + &kron(&a, &conj).scale_real((1.0 - w) * q);
    }
    debug_assert_eq!(m.rows(), n);
    finish(m, (d, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hermitian_eigenvalues;
    use crate::realign::{is_schmidt_symmetric, realign, realignment_criterion};

    #[test]
    fn rho_t_at_zero_is_diagonal() {
        let rho = rho_t(0.0).unwrap();
        assert_eq!(
            hermitian_eigenvalues(rho.matrix()).unwrap().values(),
            &[0.0, 0.125, 0.25, 0.625]
        );
    }

    #[test]
    fn rho_t_out_of_range() {
        assert!(matches!(rho_t(0.9), Err(Error::OutOfRange { .. })));
        assert!(matches!(
            validate_density(rho_t_matrix(0.9), (2, 2), 1e-10),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn rho_t_realigned_trace() {
        for t in [-0.5, 0.0, 0.3] {
            let tr = realign(&rho_t(t).unwrap()).trace();
            assert!((tr.re - (t + 0.875)).abs() < 1e-15);
        }
    }

    #[test]
    fn isotropic_endpoints() {
        let mixed = isotropic(0.0, 3).unwrap();
        assert!(
            mixed
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(9).scale_real(1.0 / 9.0))
                < 1e-16
        );
        let pure = isotropic(1.0, 3).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-14);
        assert!(isotropic(-0.2, 3).is_err());
    }

    #[test]
    fn families_are_states_on_grid() {
        for family in StateFamily::ALL {
            let (lo, hi) = family.parameter_range(3);
            for i in 0..50 {
                let x = lo + (hi - lo) * i as f64 / 49.0;
                family
                    .build(x, 3)
                    .unwrap_or_else(|e| panic!("{family} at {x}: {e}"));
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for family in StateFamily::ALL {
            assert_eq!(family.name().parse::<StateFamily>().unwrap(), family);
        }
        assert!("werner".parse::<StateFamily>().is_err());
    }

    #[test]
    fn seeded_ensembles_are_deterministic() {
        let a = random_separable(2, 3, 4, 7).unwrap();
        let b = random_separable(2, 3, 4, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            realignment_criterion(&realign(&a), 1e-9).verdict,
            crate::criteria::Verdict::Inconclusive
        );
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded_rng(1);
        let u = random_unitary(5, &mut rng);
        assert!(
            u.matmul(&u.adjoint())
                .max_abs_diff(&ComplexMatrix::identity(5))
                < 1e-13
        );
    }

    #[test]
    fn schmidt_symmetric_generator() {
        let mut rng = seeded_rng(3);
        for _ in 0..5 {
            let rho = random_schmidt_symmetric(3, 3, &mut rng).unwrap();
            assert!(is_schmidt_symmetric(&realign(&rho), 1e-9));
        }
    }
}
