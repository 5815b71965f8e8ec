//! Adaptive cubature over triangulated domains.
//!
//! Each simplex is integrated with the Grundmann-Möller rule of degree 7; the
//! difference from the degree-5 rule serves as the local error estimate.
//! Simplices whose estimate exceeds their volume-weighted share of the
//! tolerance are split into congruent children (2 in 1D, 4 in 2D, 8 in 3D,
//! longest-edge bisection otherwise) down to a depth cap.

use rayon::prelude::*;
use serde::Serialize;

/// A quadrature rule on the standard simplex in barycentric coordinates.
/// Weights sum to `1/n!`.
#[derive(Clone, Debug)]
pub struct SimplexRule {
    pub degree: u32,
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for a in (0..=total).rev() {
        prefix.push(a);
        compositions(total - a, parts - 1, prefix, out);
        prefix.pop();
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Grundmann-Möller rule of degree `2s + 1` on the `n`-simplex.
pub fn grundmann_moeller(n: usize, s: u32) -> SimplexRule {
    let d = 2 * s + 1;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for i in 0..=s {
        let denom = (d as usize + n - 2 * i as usize) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * denom.powi(d as i32)
            / (4f64.powi(s as i32) * factorial(i) * factorial(d + n as u32 - i));
        let mut betas = Vec::new();
        compositions(s - i, n + 1, &mut Vec::new(), &mut betas);
        for beta in betas {
            points.push(beta.iter().map(|&b| (2 * b + 1) as f64 / denom).collect());
            weights.push(w);
        }
    }
    SimplexRule {
        degree: d,
        points,
        weights,
    }
}

/// A simplex with floating-point vertices.
#[derive(Clone, Debug)]
pub struct FloatSimplex {
    pub vertices: Vec<Vec<f64>>,
}

impl FloatSimplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Self {
        Self { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// `|det J|` for the map from the standard simplex.
    pub fn jacobian(&self) -> f64 {
        let n = self.dim();
        let p0 = &self.vertices[0];
        let m = nalgebra::DMatrix::from_fn(n, n, |r, c| self.vertices[c + 1][r] - p0[r]);
        m.determinant().abs()
    }

    fn map(&self, bary: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for (lam, v) in bary.iter().zip(&self.vertices) {
            for (o, vi) in out.iter_mut().zip(v) {
                *o += lam * vi;
            }
        }
    }

    fn midpoint(&self, i: usize, j: usize) -> Vec<f64> {
        self.vertices[i]
            .iter()
            .zip(&self.vertices[j])
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    /// Children of equal volume covering the simplex.
    pub fn subdivide(&self) -> Vec<FloatSimplex> {
        let v = &self.vertices;
        let m = |i, j| self.midpoint(i, j);
        match self.dim() {
            1 => {
                let mid = m(0, 1);
                vec![Self::new(vec![v[0].clone(), mid.clone()]), Self::new(vec![mid, v[1].clone()])]
            }
            2 => {
                let (m01, m02, m12) = (m(0, 1), m(0, 2), m(1, 2));
                vec![
                    Self::new(vec![v[0].clone(), m01.clone(), m02.clone()]),
                    Self::new(vec![m01.clone(), v[1].clone(), m12.clone()]),
                    Self::new(vec![m02.clone(), m12.clone(), v[2].clone()]),
                    Self::new(vec![m01, m12, m02]),
                ]
            }
            3 => {
                // Bey's red refinement: four corner tetrahedra plus the inner
                // octahedron split along the m02-m13 diagonal.
                let (x0, x1, x2, x3) = (v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
                let (x01, x02, x03, x12, x13, x23) = (m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3));
                vec![
                    Self::new(vec![x0, x01.clone(), x02.clone(), x03.clone()]),
                    Self::new(vec![x01.clone(), x1, x12.clone(), x13.clone()]),
                    Self::new(vec![x02.clone(), x12.clone(), x2, x23.clone()]),
                    Self::new(vec![x03.clone(), x13.clone(), x23.clone(), x3]),
                    Self::new(vec![x01.clone(), x02.clone(), x03.clone(), x13.clone()]),
                    Self::new(vec![x01, x02.clone(), x12.clone(), x13.clone()]),
                    Self::new(vec![x02.clone(), x03, x13.clone(), x23.clone()]),
                    Self::new(vec![x02, x12, x13, x23]),
                ]
            }
            _ => {
                let n = self.dim();
                let (mut bi, mut bj, mut best) = (0, 1, -1.0);
                for i in 0..=n {
                    for j in i + 1..=n {
                        let len: f64 = v[i].iter().zip(&v[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                        if len > best {
                            (bi, bj, best) = (i, j, len);
                        }
                    }
                }
                let mid = m(bi, bj);
                let mut a = v.clone();
                let mut b = v.clone();
                a[bj] = mid.clone();
                b[bi] = mid;
                vec![Self::new(a), Self::new(b)]
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOptions {
    /// Absolute tolerance per output component over the whole domain.
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_depth: 12,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct QuadratureReport {
    pub evaluations: usize,
    pub leaf_simplices: usize,
    pub max_depth_reached: u32,
    pub depth_cap_hits: usize,
    /// Sum over leaves of the per-component maximum of `|Q7 − Q5|`.
    pub estimated_error: f64,
    /// Largest eigenvalue change under a tighter re-run, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_delta: Option<f64>,
    pub warnings: Vec<String>,
}

impl QuadratureReport {
    fn merge(&mut self, other: QuadratureReport) {
        self.evaluations += other.evaluations;
        self.leaf_simplices += other.leaf_simplices;
        self.max_depth_reached = self.max_depth_reached.max(other.max_depth_reached);
        self.depth_cap_hits += other.depth_cap_hits;
        self.estimated_error += other.estimated_error;
    }
}

/// Vector-valued integrand: writes `m` outputs for the point `x`.
pub trait Integrand: Sync {
    fn outputs(&self) -> usize;
    fn eval(&self, x: &[f64], out: &mut [f64]) -> crate::Result<()>;
}

struct Rules {
    high: SimplexRule,
    low: SimplexRule,
}

/// Integrates `f` over the union of `simplices`. Simplices are processed
/// independently and their contributions summed in input order.
pub fn integrate<F: Integrand>(
    simplices: &[FloatSimplex],
    f: &F,
    opts: AdaptiveOptions,
) -> crate::Result<(Vec<f64>, QuadratureReport)> {
    let Some(first) = simplices.first() else {
        return Ok((vec![0.0; f.outputs()], QuadratureReport::default()));
    };
    let n = first.dim();
    let rules = Rules {
        high: grundmann_moeller(n, 3),
        low: grundmann_moeller(n, 2),
    };
    let total_volume: f64 = simplices.iter().map(FloatSimplex::jacobian).sum();
    let parts: Vec<crate::Result<(Vec<f64>, QuadratureReport)>> = simplices
        .par_iter()
        .map(|s| {
            let mut acc = vec![0.0; f.outputs()];
            let mut report = QuadratureReport::default();
            refine(s, f, &rules, opts, total_volume, 0, &mut acc, &mut report)?;
            Ok((acc, report))
        })
        .collect();
    let mut values = vec![0.0; f.outputs()];
    let mut report = QuadratureReport::default();
    for part in parts {
        let (v, r) = part?;
        for (a, b) in values.iter_mut().zip(v) {
            *a += b;
        }
        report.merge(r);
    }
    if report.depth_cap_hits > 0 {
        report.warnings.push(format!(
            "depth cap {} reached on {} simplices",
            opts.max_depth, report.depth_cap_hits
        ));
    }
    Ok((values, report))
}

fn apply_rule<F: Integrand>(
    s: &FloatSimplex,
    f: &F,
    rule: &SimplexRule,
    jac: f64,
    out: &mut [f64],
    scratch: &mut [f64],
) -> crate::Result<()> {
    let mut x = vec![0.0; s.vertices[0].len()];
    out.iter_mut().for_each(|v| *v = 0.0);
    for (bary, w) in rule.points.iter().zip(&rule.weights) {
        s.map(bary, &mut x);
        f.eval(&x, scratch)?;
        for (o, v) in out.iter_mut().zip(scratch.iter()) {
            *o += w * jac * v;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Integrand>(
    s: &FloatSimplex,
    f: &F,
    rules: &Rules,
    opts: AdaptiveOptions,
    total_volume: f64,
    depth: u32,
    acc: &mut [f64],
    report: &mut QuadratureReport,
) -> crate::Result<()> {
    let m = f.outputs();
    let jac = s.jacobian();
    let mut hi = vec![0.0; m];
    let mut lo = vec![0.0; m];
    let mut scratch = vec![0.0; m];
    apply_rule(s, f, &rules.high, jac, &mut hi, &mut scratch)?;
    apply_rule(s, f, &rules.low, jac, &mut lo, &mut scratch)?;
    report.evaluations += rules.high.points.len() + rules.low.points.len();
    let err = hi.iter().zip(&lo).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if !err.is_finite() {
        return Err(crate::Error::NonConvergence("integrand produced a non-finite value".into()));
    }
    let budget = opts.tol * jac / total_volume;
    if err <= budget || depth >= opts.max_depth {
        if err > budget {
            report.depth_cap_hits += 1;
        }
        for (a, v) in acc.iter_mut().zip(&hi) {
            *a += v;
        }
        report.leaf_simplices += 1;
        report.max_depth_reached = report.max_depth_reached.max(depth);
        report.estimated_error += err;
        return Ok(());
    }
    for child in s.subdivide() {
        refine(&child, f, rules, opts, total_volume, depth + 1, acc, report)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fn1<G: Fn(&[f64]) -> f64 + Sync>(G);

    impl<G: Fn(&[f64]) -> f64 + Sync> Integrand for Fn1<G> {
        fn outputs(&self) -> usize {
            1
        }
        fn eval(&self, x: &[f64], out: &mut [f64]) -> crate::Result<()> {
            out[0] = (self.0)(x);
            Ok(())
        }
    }

    fn unit_simplex(n: usize) -> FloatSimplex {
        let mut v = vec![vec![0.0; n]];
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            v.push(e);
        }
        FloatSimplex::new(v)
    }

    #[test]
    fn rules_are_exact_to_their_degree() {
        for n in 1..=4 {
            for s in [2, 3] {
                let rule = grundmann_moeller(n, s);
                let total: f64 = rule.weights.iter().sum();
                assert!((total - 1.0 / factorial(n as u32)).abs() < 1e-13);
                // x_1^d over the standard simplex = d! / (d + n)!
                let d = rule.degree;
                let q: f64 = rule
                    .points
                    .iter()
                    .zip(&rule.weights)
                    .map(|(b, w)| w * b[1].powi(d as i32))
                    .sum();
                let exact = factorial(d) / factorial(d + n as u32);
                assert!((q - exact).abs() < 1e-13 * exact.max(1e-3), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn subdivision_preserves_volume() {
        for n in 1..=4 {
            let s = unit_simplex(n);
            let children = s.subdivide();
            let total: f64 = children.iter().map(FloatSimplex::jacobian).sum();
            assert!((total - s.jacobian()).abs() < 1e-14, "n={n}");
            if n <= 3 {
                assert_eq!(children.len(), 1 << n);
                for c in &children {
                    assert!((c.jacobian() - s.jacobian() / (1 << n) as f64).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn adaptive_handles_boundary_singularity() {
        // ∫_0^1 √x dx = 2/3, non-smooth at 0.
        let f = Fn1(|x: &[f64]| x[0].sqrt());
        let (v, r) = integrate(
            &[FloatSimplex::new(vec![vec![0.0], vec![1.0]])],
            &f,
            AdaptiveOptions { tol: 1e-9, max_depth: 40 },
        )
        .unwrap();
        assert!((v[0] - 2.0 / 3.0).abs() < 1e-9, "{}", v[0]);
        assert!(r.leaf_simplices > 1);
    }

    #[test]
    fn smooth_integral_over_triangle() {
        // ∫ exp(x + y) over the unit triangle = e·(1) - 2e + ... = 1 (closed form: e - 2 + ... )
        let f = Fn1(|x: &[f64]| (x[0] + x[1]).exp());
        let (v, _) = integrate(&[unit_simplex(2)], &f, AdaptiveOptions::default()).unwrap();
        // ∫_0^1 ∫_0^{1-x} e^{x+y} dy dx = ∫_0^1 (e - e^x) dx = e - (e - 1) = 1
        assert!((v[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn reports_cap_hits() {
        let f = Fn1(|x: &[f64]| x[0].abs().sqrt());
        let (_, r) = integrate(
            &[FloatSimplex::new(vec![vec![0.0], vec![1.0]])],
            &f,
            AdaptiveOptions { tol: 1e-14, max_depth: 2 },
        )
        .unwrap();
        assert!(r.depth_cap_hits > 0 && !r.warnings.is_empty());
    }
}
