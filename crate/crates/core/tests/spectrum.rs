use eigenbound_core::linalg::min_eigenvalue;
use eigenbound_core::presets::{self, POLYTOPE_PRESETS};
use eigenbound_core::rational::int;
use eigenbound_core::rayleigh_ritz::monomial_basis;
use eigenbound_core::{
    assemble_matrices, generalized_eigenvalues, rayleigh_ritz_spectrum, MultiPoly, SpectrumOptions,
    SymplecticPotential,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn generalized_solver_recovers_constructed_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for size in 2..=8 {
        for _ in 0..5 {
            let m = DMatrix::identity(size, size) + DMatrix::from_fn(size, size, |_, _| rng.random_range(-0.2..0.2));
            let mut spectrum: Vec<f64> = (0..size).map(|_| rng.random_range(0.0..5.0)).collect();
            spectrum.sort_by(f64::total_cmp);
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(spectrum.clone()));
            let b = &m * m.transpose();
            let a = &m * d * m.transpose();
            let got = generalized_eigenvalues(&a, &b).unwrap();
            for (g, w) in got.iter().zip(&spectrum) {
                assert!((g - w).abs() < 1e-12 * w.abs().max(1.0), "{g} vs {w}");
            }
        }
    }
}

#[test]
fn assemblies_are_psd_and_pd() {
    for name in POLYTOPE_PRESETS {
        let p = presets::polytope(name).unwrap();
        let basis: Vec<MultiPoly> = monomial_basis(p.dim(), 2)
            .into_iter()
            .map(|a| MultiPoly::monomial(a, int(1)))
            .collect();
        let asm = assemble_matrices(&p, &SymplecticPotential::canonical(p.dim()), &basis, &SpectrumOptions::default())
            .unwrap();
        assert!(min_eigenvalue(&asm.a) > -1e-6, "{name}");
        assert!(min_eigenvalue(&asm.b) > 0.0, "{name}");
        assert!((&asm.a - asm.a.transpose()).norm() == 0.0);
        assert!(asm.a.row(0).iter().all(|v| *v == 0.0), "constant row of A must vanish");
    }
}

#[test]
fn hexagon_degree_two_upper_bounds_second_eigenvalue() {
    let hex = presets::polytope("dp6").unwrap();
    let r = rayleigh_ritz_spectrum(&hex, &SymplecticPotential::doran_dp6(), 2, &SpectrumOptions::default()).unwrap();
    assert_eq!(r.eigenvalues.len(), 6);
    assert!(r.eigenvalues[3] >= 4.75 - 1e-3, "{:?}", r.eigenvalues);
    assert_eq!(r.quadrature.depth_cap_hits, 0);
}

#[test]
fn richer_basis_lowers_eigenvalues() {
    let hex = presets::polytope("dp6").unwrap();
    let pot = SymplecticPotential::doran_dp6();
    let two = rayleigh_ritz_spectrum(&hex, &pot, 2, &SpectrumOptions::default()).unwrap();
    let three = rayleigh_ritz_spectrum(&hex, &pot, 3, &SpectrumOptions::default()).unwrap();
    for (k, v) in two.eigenvalues.iter().enumerate() {
        assert!(three.eigenvalues[k] <= v + 1e-6, "index {k}");
    }
}
