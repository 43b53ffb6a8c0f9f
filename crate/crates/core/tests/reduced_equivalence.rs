//! The reduced two-step models against the full simulation, and the spectral
//! decomposition against an independent eigensolver.

use nalgebra::DMatrix;
use num_complex::Complex64;

use bipartite_walk::{
    full_simulation_points, rotation_phase, ReducedModel, SpectralModel, StepOperator, WalkParams,
    WalkState,
};

#[test]
fn same_part_reduced_powers_reproduce_full_simulation() {
    for m in 3..=8 {
        for n in 1..=8 {
            let params = WalkParams::same_part(m, n).unwrap();
            let model = ReducedModel::same_part(m, n).unwrap();
            let points = full_simulation_points(&params, 60).unwrap();
            for t in 0..=30 {
                let reduced = model.fidelity_after(t);
                if t == 0 {
                    assert!(reduced.abs() < 1e-15);
                    continue;
                }
                let (step, simulated) = points[2 * t - 1];
                assert_eq!(step, 2 * t);
                assert!(
                    (reduced - simulated).abs() < 1e-12,
                    "m={m} n={n} t={t}: reduced {reduced} vs simulated {simulated}"
                );
            }
        }
    }
}

#[test]
fn degenerate_two_by_two_matches_full_simulation() {
    for n in [1usize, 2, 5, 9] {
        let params = WalkParams::same_part(2, n).unwrap();
        let model = ReducedModel::same_part_degenerate(2, n).unwrap();
        assert_eq!(model.matrix, vec![0.0, -1.0, -1.0, 0.0]);
        let points = full_simulation_points(&params, 20).unwrap();
        for t in 1..=10 {
            let (step, simulated) = points[2 * t - 1];
            assert_eq!(step, 2 * t);
            assert!(
                (model.fidelity_after(t) - simulated).abs() < 1e-12,
                "n={n} t={t}"
            );
        }
        // Perfect transfer after two steps, for every n.
        assert!((points[1].1 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn opposite_reduced_powers_reproduce_full_simulation() {
    for m in 2..=8 {
        for n in 2..=8 {
            let params = WalkParams::opposite(m, n).unwrap();
            let model = ReducedModel::opposite(m, n).unwrap();
            let points = full_simulation_points(&params, 61).unwrap();
            for t in 0..=30 {
                let (step, simulated) = points[2 * t];
                assert_eq!(step, 2 * t + 1);
                let reduced = model.fidelity_after(t);
                assert!(
                    (reduced - simulated).abs() < 1e-12,
                    "m={m} n={n} t={t}: reduced {reduced} vs simulated {simulated}"
                );
            }
        }
    }
}

fn two_steps(params: &WalkParams, state: &WalkState) -> WalkState {
    let op = StepOperator::new(*params);
    op.apply(&op.apply(state).unwrap()).unwrap()
}

#[test]
fn embedding_consistency_holds_at_large_sizes() {
    // The matrix entries equal the overlaps of twice-stepped basis vectors,
    // far beyond the dense reference's reach.
    let cases = [
        ReducedModel::same_part(100, 3).unwrap(),
        ReducedModel::opposite(100, 50).unwrap(),
    ];
    for model in cases {
        let params = *model.basis[0].params();
        for (k, phi_k) in model.basis.iter().enumerate() {
            let evolved = two_steps(&params, phi_k);
            for (j, phi_j) in model.basis.iter().enumerate() {
                let numeric = phi_j.inner(&evolved);
                let expected = model.matrix_entry(j, k);
                assert!(
                    (numeric - Complex64::new(expected, 0.0)).norm() < 1e-12,
                    "m={} n={} entry ({j},{k})",
                    params.m,
                    params.n
                );
            }
        }
    }
}

#[test]
fn spectral_completeness_on_initial_and_target_coordinates() {
    for m in 2..=8 {
        for n in 2..=8 {
            let model = ReducedModel::opposite(m, n).unwrap();
            let spectral = SpectralModel::opposite(m, n).unwrap();
            for coords in [&model.init_coords, &model.target_coords] {
                let total: f64 = spectral
                    .eigenvectors
                    .iter()
                    .map(|chi| {
                        let overlap: Complex64 = chi
                            .iter()
                            .zip(coords.iter())
                            .map(|(c, v)| c.conj() * v)
                            .sum();
                        overlap.norm_sqr()
                    })
                    .sum();
                let norm: f64 = coords.iter().map(|v| v * v).sum();
                assert!((total - norm).abs() < 1e-12, "m={m} n={n}");
            }
        }
    }
}

#[test]
fn spectral_reconstruction_reproduces_reduced_powering() {
    // Coordinates after t two-step applications, rebuilt from the eigenbasis
    // with phases e^{±iωt}.
    for (m, n) in [(2, 2), (3, 4), (7, 3), (8, 8), (5, 2)] {
        let model = ReducedModel::opposite(m, n).unwrap();
        let spectral = SpectralModel::opposite(m, n).unwrap();
        let (mf, nf) = (m as f64, n as f64);
        let weight_fixed_corner = -1.0 / nf.sqrt();
        let weight_fixed_mixed = -((mf * nf - mf - nf + 1.0) / (nf * (mf + nf - 1.0))).sqrt();
        let weight_rotating = -((nf - 1.0) / (2.0 * (mf + nf - 1.0))).sqrt();
        let [chi1, chi2, chi3, chi4] = &spectral.eigenvectors;
        for t in 0..=50 {
            let coords = model.coords_after(t);
            let phase = Complex64::from_polar(1.0, spectral.omega * t as f64);
            for row in 0..4 {
                let rebuilt = weight_fixed_corner * chi1[row]
                    + weight_fixed_mixed * chi2[row]
                    + weight_rotating * (phase * chi3[row] + phase.conj() * chi4[row]);
                assert!(
                    (rebuilt - Complex64::new(coords[row], 0.0)).norm() < 1e-12,
                    "m={m} n={n} t={t} row={row}"
                );
            }
        }
    }
}

#[test]
fn independent_eigensolver_confirms_the_spectrum() {
    for (m, n) in [(2, 2), (2, 3), (5, 8), (12, 7), (100, 100), (100, 50)] {
        let model = ReducedModel::opposite(m, n).unwrap();
        let matrix = DMatrix::from_row_slice(4, 4, &model.matrix);
        let computed = matrix.complex_eigenvalues();
        let omega = rotation_phase(m, n);
        let mut expected = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, omega),
            Complex64::from_polar(1.0, -omega),
        ];
        for lambda in computed.iter() {
            let lambda = Complex64::new(lambda.re, lambda.im);
            let (index, distance) = expected
                .iter()
                .enumerate()
                .map(|(k, e)| (k, (lambda - e).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            assert!(
                distance < 1e-12,
                "m={m} n={n}: eigenvalue {lambda} off by {distance:.3e}"
            );
            expected.swap_remove(index);
        }
    }
}

#[test]
fn star_graph_spectrum_from_independent_eigensolver() {
    // The 3x3 same-part matrix has one fixed direction and a rotating pair
    // with phase arccos((m-4)/m).
    for m in [3usize, 4, 5, 20, 100] {
        let model = ReducedModel::same_part(m, 2).unwrap();
        let matrix = DMatrix::from_row_slice(3, 3, &model.matrix);
        let computed = matrix.complex_eigenvalues();
        let theta = ((m as f64 - 4.0) / m as f64).acos();
        let mut expected = vec![
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, theta),
            Complex64::from_polar(1.0, -theta),
        ];
        for lambda in computed.iter() {
            let lambda = Complex64::new(lambda.re, lambda.im);
            let (index, distance) = expected
                .iter()
                .enumerate()
                .map(|(k, e)| (k, (lambda - e).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            assert!(
                distance < 1e-12,
                "m={m}: eigenvalue {lambda} off by {distance:.3e}"
            );
            expected.swap_remove(index);
        }
    }
}
