//! Multi-start gradient descent on the unit sphere.

use serde::Serialize;

/// Deterministic start directions: coordinate axes, pairwise diagonals and
/// the all-ones direction, padded with a quasi-uniform covering of the sphere
/// up to `2n² + 8` points.
pub fn start_directions(n: usize) -> Vec<Vec<f64>> {
    let target = 2 * n * n + 8;
    let mut starts = Vec::with_capacity(target);
    for i in 0..n {
        starts.push(unit(n, |k| if k == i { 1.0 } else { 0.0 }));
    }
    for i in 0..n {
        for j in i + 1..n {
            starts.push(unit(n, |k| if k == i || k == j { 1.0 } else { 0.0 }));
            starts.push(unit(n, |k| {
                if k == i {
                    1.0
                } else if k == j {
                    -1.0
                } else {
                    0.0
                }
            }));
        }
    }
    if n > 1 {
        starts.push(unit(n, |_| 1.0));
    }
    let fill = target.saturating_sub(starts.len());
    starts.extend(covering(n, fill));
    starts.truncate(target);
    starts
}

fn unit(n: usize, f: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(f).collect();
    normalize(&mut v);
    v
}

fn covering(n: usize, m: usize) -> Vec<Vec<f64>> {
    match n {
        0 => Vec::new(),
        1 => (0..m).map(|k| vec![if k % 2 == 0 { 1.0 } else { -1.0 }]).collect(),
        2 => (0..m)
            .map(|k| {
                let t = std::f64::consts::PI * (k as f64 + 0.5) / m as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => {
            // golden-angle spiral
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        _ => {
            // Kronecker sequence on [-1, 1]^n with irrational square-root steps.
            let steps: Vec<f64> = first_primes(n).into_iter().map(|p| (p as f64).sqrt().fract()).collect();
            (1..=m)
                .map(|k| {
                    let mut v: Vec<f64> = steps.iter().map(|s| 2.0 * (k as f64 * s).fract() - 1.0).collect();
                    normalize(&mut v);
                    v
                })
                .collect()
        }
    }
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut c = 2u64;
    while primes.len() < n {
        if primes.iter().all(|p| !c.is_multiple_of(*p)) {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

pub fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Summary of a multi-start run.
#[derive(Clone, Debug, Default, Serialize)]
pub struct OptimizerTrace {
    pub starts: usize,
    pub skipped_starts: usize,
    pub total_iterations: usize,
    pub distinct_minima: usize,
}

#[derive(Clone, Debug)]
pub struct SphereMinimum {
    pub value: f64,
    pub point: Vec<f64>,
    pub trace: OptimizerTrace,
}

/// Stopping rule for a single descent.
#[derive(Clone, Copy, Debug)]
pub struct DescentOptions {
    pub value_tol: f64,
    pub grad_tol: f64,
    pub max_iter: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            value_tol: 1e-10,
            grad_tol: 1e-9,
            max_iter: 20_000,
        }
    }
}

/// Minimizes a smooth function on the unit sphere from every start in
/// `starts`. `eval` returns the value and Euclidean gradient, or `None` where
/// the objective is undefined (such starts are skipped and such trial points
/// rejected). The reported minimizer is sign-normalized (first significant
/// component positive) and, among values tied to 1e-12 relative, the
/// lexicographically smallest.
pub fn minimize<F>(starts: &[Vec<f64>], eval: F, opts: DescentOptions) -> Option<SphereMinimum>
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)> + Sync,
{
    use rayon::prelude::*;
    let runs: Vec<Option<(f64, Vec<f64>, usize)>> =
        starts.par_iter().map(|s| descend(s, &eval, opts)).collect();
    let mut trace = OptimizerTrace {
        starts: starts.len(),
        ..Default::default()
    };
    let mut finished = Vec::new();
    for run in runs {
        match run {
            Some((v, mut p, it)) => {
                trace.total_iterations += it;
                canonical_sign(&mut p);
                finished.push((v, p));
            }
            None => trace.skipped_starts += 1,
        }
    }
    let best = finished.iter().map(|(v, _)| *v).fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return None;
    }
    let tie = 1e-12 * best.abs().max(1.0);
    let mut tied: Vec<&Vec<f64>> = finished
        .iter()
        .filter(|(v, _)| *v <= best + tie)
        .map(|(_, p)| p)
        .collect();
    tied.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut distinct: Vec<&Vec<f64>> = Vec::new();
    for p in &tied {
        if distinct.iter().all(|q| 1.0 - dot(p, q).abs() > 1e-8) {
            distinct.push(p);
        }
    }
    trace.distinct_minima = distinct.len();
    Some(SphereMinimum {
        value: best,
        point: tied[0].clone(),
        trace,
    })
}

fn canonical_sign(p: &mut [f64]) {
    if let Some(first) = p.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            for x in p.iter_mut() {
                *x = -*x;
            }
        }
    }
    for x in p.iter_mut() {
        if *x == 0.0 {
            *x = 0.0; // clear negative zero
        }
    }
}

fn descend<F>(start: &[f64], eval: &F, opts: DescentOptions) -> Option<(f64, Vec<f64>, usize)>
where
    F: Fn(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let mut x = start.to_vec();
    normalize(&mut x);
    let (mut f, mut g) = eval(&x)?;
    let mut step = 1.0;
    let mut stalls = 0;
    for it in 0..opts.max_iter {
        // Riemannian gradient: tangential part of the Euclidean gradient.
        let radial = dot(&g, &x);
        let r: Vec<f64> = g.iter().zip(&x).map(|(gi, xi)| gi - radial * xi).collect();
        let rnorm2 = dot(&r, &r);
        if rnorm2.sqrt() <= opts.grad_tol * f.abs().max(1.0) {
            return Some((f, x, it));
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let mut y: Vec<f64> = x.iter().zip(&r).map(|(xi, ri)| xi - t * ri).collect();
            normalize(&mut y);
            if let Some((fy, gy)) = eval(&y) {
                if fy <= f - 1e-4 * t * rnorm2 {
                    accepted = Some((y, fy, gy));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((y, fy, gy)) = accepted else {
            return Some((f, x, it));
        };
        let decrease = f - fy;
        x = y;
        f = fy;
        g = gy;
        step = (t * 2.0).min(1e3);
        if decrease < opts.value_tol * 1e-3 * f.abs().max(1.0) {
            stalls += 1;
            if stalls >= 5 {
                return Some((f, x, it + 1));
            }
        } else {
            stalls = 0;
        }
    }
    Some((f, x, opts.max_iter))
}
