use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spa_realign::criteria::{error_suite, spa_r_verdict};
use spa_realign::estimation::{m1_interval_quadratic, EstimationInput};
use spa_realign::matrix::{
    general_eigenvalues, hermitian_eigenvalues, kron, singular_values, trace_norm, ComplexMatrix,
};
use spa_realign::realign::{
    is_schmidt_symmetric, realign, realign_block_form, realign_matrix, realignment_criterion,
};
use spa_realign::spa::{
    apply_spa, descartes_psd_test, newton_coefficients, spa_threshold, Definiteness,
};
use spa_realign::states::{
    ginibre, random_density_matrix, random_unitary, rho_t, StateFamily, RHO_T_MAX,
};
use spa_realign::{validate_density, Verdict};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re));
    v
}

fn family_grid(family: StateFamily, n: usize) -> Vec<f64> {
    let (lo, hi) = family.parameter_range(3);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_norm_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let m = ginibre(n, n, &mut r);
        let u = random_unitary(n, &mut r);
        let v = random_unitary(n, &mut r);
        let rotated = u.matmul(&m).matmul(&v);
        prop_assert!((trace_norm(&rotated) - trace_norm(&m)).abs() <= 1e-9);
    }

    #[test]
    fn singular_values_square_to_gram_eigenvalues(seed in any::<u64>(), rows in 1usize..7, cols in 1usize..7) {
        let m = ginibre(rows, cols, &mut rng(seed));
        let sv = singular_values(&m);
        let gram = if rows >= cols { m.adjoint().matmul(&m) } else { m.matmul(&m.adjoint()) };
        let eig = hermitian_eigenvalues(&gram).unwrap();
        for (s, e) in sv.iter().zip(eig.values().iter().rev()) {
            prop_assert!((s * s - e).abs() <= 1e-9 * (1.0 + e.abs()));
        }
    }

    #[test]
    fn general_solver_agrees_on_hermitian_input(seed in any::<u64>(), n in 1usize..10) {
        let g = ginibre(n, n, &mut rng(seed));
        let h = (&g + &g.adjoint()).scale_real(0.5);
        let herm = hermitian_eigenvalues(&h).unwrap();
        let gen = sorted_by_re(general_eigenvalues(&h).unwrap());
        for (a, b) in herm.values().iter().zip(&gen) {
            prop_assert!((a - b.re).abs() <= 1e-8 && b.im.abs() <= 1e-8);
        }
    }

    #[test]
    fn power_trace_matches_eigenvalue_sums(seed in any::<u64>(), n in 1usize..10, k in 1usize..6) {
        let m = ginibre(n, n, &mut rng(seed)).scale_real(1.0 / (n as f64).sqrt());
        let eig = general_eigenvalues(&m).unwrap();
        let direct = m.power_trace(k);
        let from_eig: Complex64 = eig.iter().map(|z| z.powu(k as u32)).sum();
        prop_assert!((direct - from_eig).norm() <= 1e-8 * direct.norm().max(1.0));
        let det: Complex64 = eig.iter().product();
        prop_assert!(det.is_finite());
    }

    #[test]
    fn realignment_is_linear(seed in any::<u64>(), d in 2usize..4, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let mut r = rng(seed);
        let x = ginibre(d * d, d * d, &mut r);
        let y = ginibre(d * d, d * d, &mut r);
        let lhs = realign_matrix(&(&x.scale_real(a) + &y.scale_real(b)), d, d);
        let rhs = &realign_matrix(&x, d, d).scale_real(a) + &realign_matrix(&y, d, d).scale_real(b);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-14 * (1.0 + a.abs() + b.abs()) * 10.0);
    }

    #[test]
    fn realignment_is_an_involution(seed in any::<u64>(), d in 2usize..4) {
        let m = ginibre(d * d, d * d, &mut rng(seed));
        prop_assert_eq!(realign_matrix(&realign_matrix(&m, d, d), d, d), m);
    }

    #[test]
    fn block_and_permutation_forms_share_spectral_data(seed in any::<u64>(), d in 2usize..4) {
        let m = ginibre(d * d, d * d, &mut rng(seed));
        let perm = realign_matrix(&m, d, d);
        let block = realign_block_form(&m, d, d);
        prop_assert!((perm.trace() - block.trace()).norm() <= 1e-12);
        prop_assert!((trace_norm(&perm) - trace_norm(&block)).abs() <= 1e-9);
    }

    #[test]
    fn realigned_trace_is_a_partial_diagonal_sum(seed in any::<u64>(), d in 1usize..4) {
        let n = d * d;
        let m = random_density_matrix(n, n, &mut rng(seed));
        let rho = validate_density(m, (d, d), 1e-10).unwrap();
        let r = realign(&rho);
        let mut expected = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                expected += rho.matrix()[(i * d + i, k * d + k)];
            }
        }
        prop_assert_eq!(r.trace(), expected);
    }

    #[test]
    fn product_states_factorize(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut r = rng(seed);
        let a = random_density_matrix(da, 1 + seed as usize % da, &mut r);
        let b = random_density_matrix(db, 1 + seed as usize % db, &mut r);
        let rho = validate_density(kron(&a, &b), (da, db), 1e-10).unwrap();
        let expected = a.frobenius_norm() * b.frobenius_norm();
        prop_assert!((realign(&rho).trace_norm() - expected).abs() <= 1e-9);
    }

    #[test]
    fn spa_output_has_unit_trace(t in -RHO_T_MAX..RHO_T_MAX, p in 0.0f64..=1.0) {
        let r = realign(&rho_t(t).unwrap());
        prop_assert!((apply_spa(&r, p).unwrap().trace() - 1.0).norm() <= 1e-12);
    }

    #[test]
    fn quadratic_interval_shrinks_with_k(s in 0.0f64..0.25, k in 0.0f64..0.02) {
        let wide = m1_interval_quadratic(&EstimationInput::new(s, 2, k * 0.5).unwrap());
        let narrow = m1_interval_quadratic(&EstimationInput::new(s, 2, k).unwrap());
        if let (Ok(w), Ok(n)) = (wide, narrow) {
            prop_assert!(n.width() <= w.width() + 1e-15);
        }
    }
}

/// Weyl floor: `λ_min[R̃] >= p/d² + (1-p) λ_min[R]/Tr R` on the families with
/// positive `R`.
#[test]
fn weyl_floor_on_families() {
    for family in StateFamily::ALL {
        for x in family_grid(family, 25) {
            let rho = family.build(x, 3).unwrap();
            let r = realign(&rho);
            let Ok(threshold) = spa_threshold(&r) else {
                continue;
            };
            if threshold.definiteness != Definiteness::Psd {
                continue;
            }
            let d2 = (threshold.d * threshold.d) as f64;
            let lam_r = general_eigenvalues(r.matrix())
                .unwrap()
                .iter()
                .map(|z| z.re)
                .fold(f64::INFINITY, f64::min);
            for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let out = apply_spa(&r, p).unwrap();
                let lam = general_eigenvalues(&out)
                    .unwrap()
                    .iter()
                    .map(|z| z.re)
                    .fold(f64::INFINITY, f64::min);
                let floor = p / d2 + (1.0 - p) * lam_r / threshold.trace_r;
                assert!(lam >= floor - 1e-8, "{family} {x} p={p}: {lam} < {floor}");
            }
        }
    }
}

#[test]
fn sign_test_matches_oracle_on_families() {
    for family in StateFamily::ALL {
        for x in family_grid(family, 40) {
            let r = realign(&family.build(x, 3).unwrap());
            if r.check_domain().is_err() {
                continue;
            }
            let a = newton_coefficients(&r.moments().unwrap());
            let eig = general_eigenvalues(r.matrix()).unwrap();
            let min = eig.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
            let det: f64 = eig.iter().map(|z| z.re).product();
            let verdict = descartes_psd_test(&a, 1e-9);
            // A single small negative eigenvalue only shows up in det.
            if min.abs() > 1e-8 && det.abs() > 1e-8 {
                let expected = if min > 0.0 {
                    Definiteness::Psd
                } else {
                    Definiteness::NotPsd
                };
                assert_eq!(verdict, expected, "{family} at {x}: min eigenvalue {min}");
            }
        }
    }
}

#[test]
fn output_above_threshold_is_positive() {
    for family in StateFamily::ALL {
        for x in family_grid(family, 25) {
            let r = realign(&family.build(x, 3).unwrap());
            let Ok(threshold) = spa_threshold(&r) else {
                continue;
            };
            for frac in [0.0, 0.5, 1.0] {
                let p = threshold.l + frac * (1.0 - threshold.l);
                let out = apply_spa(&r, p).unwrap();
                let n = out.rows();
                let moments: Vec<f64> = out.power_traces(n).iter().map(|z| z.re).collect();
                let a = newton_coefficients(&moments);
                assert_eq!(
                    descartes_psd_test(&a, 1e-9),
                    Definiteness::Psd,
                    "{family} {x} p={p}"
                );
            }
        }
    }
}

#[test]
fn families_validate_on_grid() {
    for family in StateFamily::ALL {
        for x in family_grid(family, 50) {
            family.build(x, 3).unwrap();
        }
    }
}

#[test]
fn rho_t_validity_edge_is_tight() {
    for t in [-RHO_T_MAX, RHO_T_MAX] {
        let min = hermitian_eigenvalues(rho_t(t).unwrap().matrix())
            .unwrap()
            .min();
        assert!(min.abs() <= 1e-9, "t = {t}: {min}");
    }
}

#[test]
fn isotropic_states_are_schmidt_symmetric() {
    for i in 0..=20 {
        let beta = i as f64 / 20.0;
        let rho = StateFamily::Isotropic.build(beta, 3).unwrap();
        assert!(is_schmidt_symmetric(&realign(&rho), 1e-9), "beta = {beta}");
    }
}

#[test]
fn verdict_examples() {
    let iso = realign(&StateFamily::Isotropic.build(0.9, 3).unwrap());
    assert_eq!(
        spa_r_verdict(&iso, 0.5, 1e-9).unwrap().verdict,
        Verdict::Entangled
    );
    let t = realign(&rho_t(0.5).unwrap());
    assert_eq!(
        spa_r_verdict(&t, 0.7, 1e-9).unwrap().verdict,
        Verdict::Entangled
    );
    let alpha = realign(&StateFamily::AlphaState.build(0.5, 3).unwrap());
    assert_eq!(
        spa_r_verdict(&alpha, 0.05, 1e-9).unwrap().verdict,
        Verdict::Inconclusive
    );
    assert_eq!(
        realignment_criterion(&realign(&rho_t(0.2).unwrap()), 1e-9).verdict,
        Verdict::Entangled
    );
    assert!(!is_schmidt_symmetric(&realign(&rho_t(-0.5).unwrap()), 1e-9));
}

#[test]
fn threshold_examples() {
    let r = realign(&rho_t(-0.5).unwrap());
    let threshold = spa_threshold(&r).unwrap();
    assert!((threshold.k - 0.5443930580206918).abs() < 1e-12);
    assert_eq!(threshold.definiteness, Definiteness::NotPsd);
    let r = realign(&rho_t(0.3).unwrap());
    assert_eq!(spa_threshold(&r).unwrap().l, 0.0);
}

#[test]
fn general_error_bound_where_its_coefficient_is_nonnegative() {
    let mut r = rng(11);
    for _ in 0..200 {
        let m = random_density_matrix(9, 9, &mut r);
        let rho = validate_density(m, (3, 3), 1e-10).unwrap();
        let rr = realign(&rho);
        let Ok(tr) = rr.require_positive_trace() else {
            continue;
        };
        for p in [0.0, 0.3, 0.7, 1.0] {
            if 1.0 - p - tr < 0.0 {
                continue;
            }
            let e = error_suite(&rr, p, 1e-9).unwrap();
            assert!(e.error_norm <= e.bound_general + 1e-9);
        }
    }
}

#[test]
fn identity_realigns_to_rank_one() {
    let r = realign_matrix(&ComplexMatrix::identity(4), 2, 2);
    assert!((trace_norm(&r) - 2.0).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn state_files_round_trip_exactly(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let n = da * db;
        let m = random_density_matrix(n, n, &mut rng(seed));
        let rho = validate_density(m, (da, db), 1e-10).unwrap();
        let back = spa_realign::io::parse_state(&spa_realign::io::state_to_json(&rho)).unwrap();
        prop_assert_eq!(back, rho);
    }
}
