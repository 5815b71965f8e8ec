use eigenbound_core::koiso_sakane::{ks_integrals, TABLE_GRID};
use eigenbound_core::rational::{int, to_f64};
use eigenbound_core::{futaki_integral, ks_bound, ks_family_wq, ks_integral, KSData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn weight(d: &KSData, x: f64) -> f64 {
    d.n.iter()
        .zip(d.p.iter().zip(&d.q))
        .map(|(&n, (&p, &q))| (p as f64 / q as f64 - x).abs().powi(n as i32))
        .product()
}

/// Composite Simpson, doubling the panel count until two successive
/// estimates agree to `rel` relative to `∫|f|`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let composite = |m: usize| {
        let h = (b - a) / m as f64;
        let (mut s, mut abs) = (0.0, 0.0);
        for i in 0..=m {
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let v = f(a + i as f64 * h);
            s += w * v;
            abs += w * v.abs();
        }
        (s * h / 3.0, abs * h / 3.0)
    };
    let mut m = 64;
    let (mut prev, _) = composite(m);
    loop {
        m *= 2;
        let (cur, abs) = composite(m);
        if (cur - prev).abs() <= rel * abs || m >= 1 << 22 {
            return cur + (cur - prev) / 15.0;
        }
        prev = cur;
    }
}

/// `∫ g` over the KS interval, split at the kinks of the weight.
fn piecewise(d: &KSData, g: &dyn Fn(f64) -> f64) -> f64 {
    let (a, b) = d.interval();
    let (a, b) = (to_f64(&a), to_f64(&b));
    let mut cuts = vec![a, b];
    for (&p, &q) in d.p.iter().zip(&d.q) {
        let r = p as f64 / q as f64;
        if r > a && r < b {
            cuts.push(r);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).map(|w| simpson(g, w[0], w[1], 1e-14)).sum()
}

fn random_instance(rng: &mut ChaCha8Rng) -> KSData {
    let r = rng.random_range(2..=4);
    let n: Vec<u32> = (0..r).map(|_| rng.random_range(0..=3)).collect();
    let p: Vec<i64> = (0..r).map(|_| rng.random_range(-6..=6)).collect();
    let q: Vec<i64> = (0..r)
        .map(|_| {
            let v = rng.random_range(1..=4);
            if rng.random_bool(0.5) { v } else { -v }
        })
        .collect();
    KSData::new(n, p, q, int(1)).unwrap()
}

#[test]
fn exact_integrals_match_adaptive_simpson() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let d = random_instance(&mut rng);
        for k in 0..=4u32 {
            let exact = to_f64(&ks_integral(&d, k).unwrap());
            let numeric = piecewise(&d, &|x| x.powi(k as i32) * weight(&d, x));
            let scale = piecewise(&d, &|x| x.abs().powi(k as i32) * weight(&d, x));
            assert!(
                (exact - numeric).abs() <= 1e-9 * scale,
                "{d:?} k={k}: exact {exact}, simpson {numeric}"
            );
        }
        let fut = to_f64(&futaki_integral(&d));
        assert!(fut.is_finite());
    }
}

#[test]
fn cauchy_schwarz_and_positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let d = random_instance(&mut rng);
        let i = ks_integrals(&d).unwrap().exact;
        assert!(i[0] > int(0) && i[2] > int(0) && i[4] > int(0));
        assert!(&i[2] * &i[2] <= &i[0] * &i[4], "{d:?}");
        if let Ok(b) = ks_bound(&d) {
            assert!(b.exact.unwrap() > eigenbound_core::rational::ratio(8, 3));
        }
    }
}

#[test]
fn symmetric_family_has_vanishing_odd_moments() {
    for (big_n, q) in TABLE_GRID {
        let d = ks_family_wq(big_n, q).unwrap();
        assert_eq!(ks_integral(&d, 1).unwrap(), int(0));
        assert_eq!(ks_integral(&d, 3).unwrap(), int(0));
    }
}

#[test]
fn family_bound_decreases_in_q() {
    for big_n in 1..=3u32 {
        let bounds: Vec<_> = (1..=big_n as i64)
            .map(|q| ks_bound(&ks_family_wq(big_n, q).unwrap()).unwrap().exact.unwrap())
            .collect();
        assert!(bounds.windows(2).all(|w| w[1] < w[0]), "N={big_n}: {bounds:?}");
    }
}
