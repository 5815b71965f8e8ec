use eigenbound_core::moments::unit_disc_moments_over_pi;
use eigenbound_core::presets::{self, POLYTOPE_PRESETS};
use eigenbound_core::rational::{int, ratio};
use eigenbound_core::toric_bound::minimize_forms;
use eigenbound_core::{
    bound_at, bound_at_gradient_form, bound_from_raw_moments, minimize_bound, moment_tensors, whiten,
    MomentTensor,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tensors(name: &str) -> MomentTensor {
    moment_tensors(&presets::polytope(name).unwrap())
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

#[test]
fn closed_and_gradient_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in POLYTOPE_PRESETS {
        let basis = whiten(&tensors(name)).unwrap();
        for _ in 0..100 {
            let a = random_unit(&mut rng, basis.forms.dim());
            let closed = bound_at(&basis.forms, 1.0, &a).unwrap();
            let grad = bound_at_gradient_form(&basis.forms, 1.0, &a).unwrap();
            assert!((closed - grad).abs() <= 1e-10 * closed, "{name}: {closed} vs {grad}");
        }
    }
}

#[test]
fn invariant_under_scaling_of_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for name in POLYTOPE_PRESETS {
        let basis = whiten(&tensors(name)).unwrap();
        for _ in 0..20 {
            let a = random_unit(&mut rng, basis.forms.dim());
            let base = bound_at(&basis.forms, 1.0, &a).unwrap();
            for t in [-3.0, 0.01, 7.5] {
                let scaled: Vec<f64> = a.iter().map(|x| t * x).collect();
                let v = bound_at(&basis.forms, 1.0, &scaled).unwrap();
                assert!((v - base).abs() <= 1e-12 * base, "{name} t={t}");
            }
        }
    }
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    m.qr().q()
}

#[test]
fn minimum_is_basis_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for name in POLYTOPE_PRESETS {
        let basis = whiten(&tensors(name)).unwrap();
        let (reference, _, _) = minimize_forms(&basis.forms).unwrap();
        for _ in 0..3 {
            let q = random_orthogonal(&mut rng, basis.forms.dim());
            let (rotated, _, _) = minimize_forms(&basis.forms.rotated(&q)).unwrap();
            assert!((rotated - reference).abs() <= 1e-8 * reference.abs().max(1.0), "{name}");
        }
    }
}

#[test]
fn linear_in_lambda_and_above_eight_thirds() {
    for name in POLYTOPE_PRESETS {
        let m = tensors(name);
        let one = minimize_bound(&m, &int(1)).unwrap();
        assert!(one.bound >= 8.0 / 3.0, "{name}");
        for lambda in [ratio(1, 2), int(3), ratio(7, 5)] {
            let r = minimize_bound(&m, &lambda).unwrap();
            assert_eq!(r.bound, eigenbound_core::rational::to_f64(&lambda) * one.bound, "{name}");
            if let (Some(e1), Some(el)) = (&one.exact, &r.exact) {
                assert_eq!(&(e1 * &lambda), el);
            }
        }
    }
    let disc = bound_from_raw_moments(&unit_disc_moments_over_pi(), &int(1)).unwrap();
    assert!(disc.bound >= 8.0 / 3.0);
}

#[test]
fn square_matches_theta_scan() {
    let scan = (0..1_000_000)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / 1_000_000.0;
            let (a, b) = (t.cos(), t.sin());
            (6.0 * a.powi(4) + 20.0 * a * a * b * b + 6.0 * b.powi(4)) / (a.powi(4) + 5.0 * a * a * b * b + b.powi(4))
        })
        .fold(f64::INFINITY, f64::min);
    let r = minimize_bound(&tensors("cp1xcp1"), &int(1)).unwrap();
    assert!((r.bound - scan).abs() < 1e-8, "{} vs {scan}", r.bound);
}

/// Reference values from an independent iterated-integral computation over
/// `-1 ≤ x₁ ≤ 1, -1 ≤ x₂ ≤ 1 - x₁, -1 ≤ x₃ ≤ 1 + x₁`.
#[test]
fn threefold_bound() {
    let m = tensors("threefold");
    let r = minimize_bound(&m, &int(1)).unwrap();
    assert!((r.bound - 4.695674416160975).abs() < 1e-9, "{}", r.bound);
    assert!(r.bound <= 4.7011);

    // the symmetric direction a = b = c of the orthonormal basis
    // x̃₁ = √(15/34) x₁, x̃₂ = √(30/79)(x₂ + x₁/2), x̃₃ = √(30/79)(x₃ − x₁/2)
    let (s1, s2) = ((15.0f64 / 34.0).sqrt(), (30.0f64 / 79.0).sqrt());
    let raw = DMatrix::from_column_slice(3, 1, &[s1, s2, s2]);
    let basis = whiten(&m).unwrap();
    let a: Vec<f64> = (basis.transform.clone().try_inverse().unwrap() * raw).iter().copied().collect();
    let v = basis.forms.values(&a);
    assert!((v.phi_norm_sq - 1.7050).abs() < 5e-5, "{}", v.phi_norm_sq);
    assert!((bound_at(&basis.forms, 1.0, &a).unwrap() - 4.699779634335897).abs() < 1e-9);
}

#[test]
fn translated_polytope_recenters_to_same_bound() {
    let p = presets::polytope("dp6").unwrap().translate(&[ratio(1, 2), int(-1)]).unwrap();
    let m = moment_tensors(&p);
    assert!(whiten(&m).is_err());
    let r = minimize_bound(&m.recentered(&p.barycenter()), &int(1)).unwrap();
    assert_eq!(r.exact, Some(ratio(672, 127)));
}
