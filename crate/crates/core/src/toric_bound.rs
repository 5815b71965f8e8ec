//! Upper bound for λ₂ of a toric Kähler-Einstein manifold from polytope
//! moments.
//!
//! Coordinates are whitened so that `{x̃_i} ∪ {1/√Vol}` is L²-orthonormal.
//! For a direction `a`, set `φ = a · x̃` and let `Φ` be the projection of `φ²`
//! onto the complement of the affine functions. With
//! `c_i = ⟨x̃_i, φ²⟩`, the bound is
//!
//! ```text
//! 8Λ/3 + (2Λ/3) · (Σ c_i² + 4|a|⁴/Vol) / ‖Φ‖²,
//! ‖Φ‖² = ∫φ⁴ − Σ c_i² − |a|⁴/Vol,
//! ```
//!
//! minimized over directions. Integrating `‖∇Φ‖²` by parts against the first
//! eigenspace gives the same number as the Rayleigh quotient
//! `((8Λ/3)∫φ⁴ − 2Λ Σ c_i²) / ‖Φ‖²`; both forms are exposed.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;
use crate::koiso_sakane::KSIntegrals;
use crate::moments::MomentTensor;
use crate::rational::{format_rational, int, ratio, rationalize, to_f64, Rational};
use crate::sphere::{self, DescentOptions, OptimizerTrace};

/// Relative threshold below which `‖Φ‖²` marks a degenerate direction.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Whitened third and fourth moments.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticForms {
    dim: usize,
    pub t3w: Vec<f64>,
    pub t4w: Vec<f64>,
    pub vol: f64,
}

/// Pieces of the bound at one direction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FormValues {
    /// `Σ c_i²`
    pub projection_sq: f64,
    /// `∫φ⁴`
    pub fourth: f64,
    /// `|a|²`
    pub norm_sq: f64,
    /// `‖Φ‖²`
    pub phi_norm_sq: f64,
    /// `Σ c_i² + 4|a|⁴/Vol`
    pub numerator: f64,
}

impl QuarticForms {
    pub fn new(dim: usize, t3w: Vec<f64>, t4w: Vec<f64>, vol: f64) -> Self {
        assert_eq!(t3w.len(), dim.pow(3));
        assert_eq!(t4w.len(), dim.pow(4));
        Self { dim, t3w, t4w, vol }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn t3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t3w[(i * self.dim + j) * self.dim + k]
    }

    fn t4(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.t4w[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }

    /// `c_i = Σ_jk T_ijk a_j a_k`.
    fn projections(&self, a: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        s += self.t3(i, j, k) * a[j] * a[k];
                    }
                }
                s
            })
            .collect()
    }

    /// `Σ_jkl Q_ijkl a_j a_k a_l` for each `i`.
    fn cubic(&self, a: &[f64]) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        let ajk = a[j] * a[k];
                        for l in 0..n {
                            s += self.t4(i, j, k, l) * ajk * a[l];
                        }
                    }
                }
                s
            })
            .collect()
    }

    pub fn values(&self, a: &[f64]) -> FormValues {
        let c = self.projections(a);
        let projection_sq: f64 = c.iter().map(|v| v * v).sum();
        let fourth: f64 = self.cubic(a).iter().zip(a).map(|(q, ai)| q * ai).sum();
        let norm_sq: f64 = a.iter().map(|v| v * v).sum();
        let quartic_norm = norm_sq * norm_sq / self.vol;
        FormValues {
            projection_sq,
            fourth,
            norm_sq,
            phi_norm_sq: fourth - projection_sq - quartic_norm,
            numerator: projection_sq + 4.0 * quartic_norm,
        }
    }

    /// Ratio `(Σc² + 4|a|⁴/V)/‖Φ‖²` and its Euclidean gradient.
    fn ratio_with_gradient(&self, a: &[f64]) -> Option<(f64, Vec<f64>)> {
        let n = self.dim;
        let v = self.values(a);
        if !(v.phi_norm_sq > DEGENERATE_TOL * v.norm_sq * v.norm_sq) {
            return None;
        }
        let c = self.projections(a);
        let cubic = self.cubic(a);
        let mut grad_proj = vec![0.0; n];
        for (i, ci) in c.iter().enumerate() {
            for j in 0..n {
                let mut d = 0.0;
                for k in 0..n {
                    d += self.t3(i, j, k) * a[k];
                }
                grad_proj[j] += 4.0 * ci * d;
            }
        }
        let num = v.numerator;
        let den = v.phi_norm_sq;
        let grad: Vec<f64> = (0..n)
            .map(|j| {
                let grad_sq = 4.0 * v.norm_sq * a[j] / self.vol;
                let gn = grad_proj[j] + 4.0 * grad_sq;
                let gd = 4.0 * cubic[j] - grad_proj[j] - grad_sq;
                (gn * den - num * gd) / (den * den)
            })
            .collect();
        Some((num / den, grad))
    }

    /// Forms expressed in the rotated basis `x̃' = Qᵀ x̃` for orthogonal `Q`.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Self {
        let n = self.dim;
        assert_eq!(q.shape(), (n, n));
        let mut t3 = vec![0.0; n.pow(3)];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut s = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                s += q[(i, a)] * q[(j, b)] * q[(k, c)] * self.t3(i, j, k);
                            }
                        }
                    }
                    t3[(a * n + b) * n + c] = s;
                }
            }
        }
        Self {
            dim: n,
            t3w: t3,
            t4w: contract4(&self.t4w, n, q),
            vol: self.vol,
        }
    }
}

fn contract4(t: &[f64], n: usize, m: &DMatrix<f64>) -> Vec<f64> {
    // One index at a time: out_{..a..} = Σ_i m[i, a] t_{..i..}
    let mut cur = t.to_vec();
    for axis in 0..4 {
        let mut next = vec![0.0; n.pow(4)];
        let stride = n.pow(3 - axis as u32);
        for (idx, slot) in next.iter_mut().enumerate() {
            let a = (idx / stride) % n;
            let base = idx - a * stride;
            let mut s = 0.0;
            for i in 0..n {
                s += m[(i, a)] * cur[base + i * stride];
            }
            *slot = s;
        }
        cur = next;
    }
    cur
}

fn contract3(t: &[f64], n: usize, m: &DMatrix<f64>) -> Vec<f64> {
    let mut cur = t.to_vec();
    for axis in 0..3 {
        let mut next = vec![0.0; n.pow(3)];
        let stride = n.pow(2 - axis as u32);
        for (idx, slot) in next.iter_mut().enumerate() {
            let a = (idx / stride) % n;
            let base = idx - a * stride;
            let mut s = 0.0;
            for i in 0..n {
                s += m[(i, a)] * cur[base + i * stride];
            }
            *slot = s;
        }
        cur = next;
    }
    cur
}

/// Linear change of coordinates `x̃ = Lᵀ x` with `∫x̃ x̃ᵀ = Lᵀ G L = I`.
#[derive(Clone, Debug)]
pub struct WhitenedBasis {
    pub transform: DMatrix<f64>,
    pub forms: QuarticForms,
    pub moments: MomentTensor,
}

impl WhitenedBasis {
    /// `max |Lᵀ G L − I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = gram_f64(&self.moments);
        let l = &self.transform;
        let prod = l.transpose() * g * l;
        let n = prod.nrows();
        (prod - DMatrix::<f64>::identity(n, n)).abs().max()
    }
}

fn gram_f64(m: &MomentTensor) -> DMatrix<f64> {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| to_f64(&m.gram[i][j]))
}

/// Whitens exact moments; the barycenter must be exactly the origin.
pub fn whiten(m: &MomentTensor) -> Result<WhitenedBasis> {
    if m.m1.iter().any(|v| !v.is_zero()) {
        return Err(nonzero_barycenter(m));
    }
    whiten_unchecked(m)
}

fn nonzero_barycenter(m: &MomentTensor) -> Error {
    let center: Vec<String> = m.m1.iter().map(|v| format_rational(&(v / &m.vol))).collect();
    Error::NonzeroBarycenter {
        barycenter: format!("({})", center.join(", ")),
    }
}

fn whiten_unchecked(m: &MomentTensor) -> Result<WhitenedBasis> {
    let n = m.dim();
    let g = gram_f64(m);
    let eig = SymmetricEigen::new(g);
    if eig.eigenvalues.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Degenerate("gram matrix is singular".into()));
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| 1.0 / e.sqrt()));
    let l = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    let l = (&l + l.transpose()) * 0.5;
    let t3: Vec<f64> = (0..n.pow(3))
        .map(|idx| to_f64(m.t3(idx / (n * n), (idx / n) % n, idx % n)))
        .collect();
    let t4: Vec<f64> = (0..n.pow(4))
        .map(|idx| to_f64(m.t4(idx / n.pow(3), (idx / (n * n)) % n, (idx / n) % n, idx % n)))
        .collect();
    let forms = QuarticForms::new(n, contract3(&t3, n, &l), contract4(&t4, n, &l), to_f64(&m.vol));
    let basis = WhitenedBasis {
        transform: l,
        forms,
        moments: m.clone(),
    };
    let defect = basis.orthonormality_defect();
    if defect > 1e-10 {
        return Err(Error::Degenerate(format!("whitening defect {defect:e}")));
    }
    Ok(basis)
}

fn check_direction(f: &QuarticForms, a: &[f64]) -> Result<FormValues> {
    if a.len() != f.dim() {
        return Err(Error::InvalidArgument(format!(
            "direction has {} components, expected {}",
            a.len(),
            f.dim()
        )));
    }
    let v = f.values(a);
    if !(v.norm_sq > 0.0) {
        return Err(Error::InvalidArgument("direction must be nonzero".into()));
    }
    if !(v.phi_norm_sq > DEGENERATE_TOL * v.norm_sq * v.norm_sq) {
        return Err(Error::DegenerateDirection(v.phi_norm_sq));
    }
    Ok(v)
}

/// Closed form `8Λ/3 + (2Λ/3)(Σc² + 4|a|⁴/V)/‖Φ‖²`.
pub fn bound_at(f: &QuarticForms, lambda: f64, a: &[f64]) -> Result<f64> {
    let v = check_direction(f, a)?;
    Ok(8.0 * lambda / 3.0 + (2.0 * lambda / 3.0) * v.numerator / v.phi_norm_sq)
}

/// Rayleigh-quotient form `((8Λ/3)∫φ⁴ − 2ΛΣc²)/‖Φ‖²`.
pub fn bound_at_gradient_form(f: &QuarticForms, lambda: f64, a: &[f64]) -> Result<f64> {
    let v = check_direction(f, a)?;
    Ok((8.0 * lambda / 3.0 * v.fourth - 2.0 * lambda * v.projection_sq) / v.phi_norm_sq)
}

/// Exact bound for the raw-coordinate linear function `φ = b · x`, computed
/// without whitening: `Σc² = wᵀ G⁻¹ w` with `w_i = ∫x_i φ²`, `|a|² = bᵀ G b`.
/// Requires exactly centered moments.
pub fn exact_bound_at(m: &MomentTensor, lambda: &Rational, b: &[Rational]) -> Result<Rational> {
    let n = m.dim();
    if m.m1.iter().any(|v| !v.is_zero()) {
        return Err(nonzero_barycenter(m));
    }
    if b.len() != n || b.iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument("direction must be a nonzero vector of the right length".into()));
    }
    let w: Vec<Rational> = (0..n)
        .map(|i| {
            let mut s = Rational::zero();
            for j in 0..n {
                for k in 0..n {
                    s += m.t3(i, j, k) * &b[j] * &b[k];
                }
            }
            s
        })
        .collect();
    let ginv = exact::inverse(&m.gram).ok_or_else(|| Error::Degenerate("gram matrix is singular".into()))?;
    let ginv_w: Vec<Rational> = ginv.iter().map(|row| exact::dot(row, &w)).collect();
    let projection_sq = exact::dot(&w, &ginv_w);
    let gb: Vec<Rational> = m.gram.iter().map(|row| exact::dot(row, b)).collect();
    let norm_sq = exact::dot(b, &gb);
    let mut fourth = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let bijk = &b[i] * &b[j] * &b[k];
                for l in 0..n {
                    fourth += m.t4(i, j, k, l) * &bijk * &b[l];
                }
            }
        }
    }
    let quartic_norm = &norm_sq * &norm_sq / &m.vol;
    let phi_norm_sq = &fourth - &projection_sq - &quartic_norm;
    if !phi_norm_sq.is_positive() {
        return Err(Error::DegenerateDirection(to_f64(&phi_norm_sq)));
    }
    let numerator = projection_sq + int(4) * quartic_norm;
    Ok(lambda * (ratio(8, 3) + ratio(2, 3) * numerator / phi_norm_sq))
}

/// Diagnostics attached to a bound.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Diagnostics {
    /// Numerator of the correction ratio at the reported direction.
    pub numerator: f64,
    /// `‖Φ‖²` at the reported direction.
    pub denominator: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrals: Option<KSIntegrals>,
    pub warnings: Vec<String>,
}

/// An upper bound for λ₂.
#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    pub bound: f64,
    /// Exact rational value when one was recognized.
    #[serde(serialize_with = "crate::serde_util::opt_rational")]
    pub exact: Option<Rational>,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub lambda: Rational,
    /// Unit minimizing direction in whitened coordinates.
    pub argmin_a: Vec<f64>,
    /// The same direction as coefficients of the raw polytope coordinates,
    /// normalized to unit length.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin_raw: Option<Vec<f64>>,
    /// Whitening matrix `L` (rows), when whitening was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub whitening: Option<Vec<Vec<f64>>>,
    pub diagnostics: Diagnostics,
}

/// Minimizes the closed-form ratio over unit directions for given forms.
/// Returns `(min ratio, argmin, trace)`.
pub fn minimize_forms(f: &QuarticForms) -> Result<(f64, Vec<f64>, OptimizerTrace)> {
    let starts = sphere::start_directions(f.dim());
    let best = sphere::minimize(&starts, |a| f.ratio_with_gradient(a), DescentOptions::default())
        .ok_or_else(|| Error::Degenerate("every direction is degenerate (‖Φ‖² ≡ 0)".into()))?;
    Ok((best.value, best.point, best.trace))
}

/// Minimizes the bound over directions for the moments of a polytope whose
/// barycenter is exactly the origin.
pub fn minimize_bound(m: &MomentTensor, lambda: &Rational) -> Result<BoundResult> {
    let basis = whiten(m)?;
    finish(basis, lambda, true)
}

/// Same pipeline for externally supplied moments. The first moments need only
/// vanish to `1e-12 · Vol^((n+1)/n)`.
pub fn bound_from_raw_moments(m: &MomentTensor, lambda: &Rational) -> Result<BoundResult> {
    let n = m.dim() as f64;
    let vol = to_f64(&m.vol);
    let tol = 1e-12 * vol.powf((n + 1.0) / n);
    let offcenter = m.m1.iter().map(|v| to_f64(v).abs()).fold(0.0, f64::max);
    if offcenter > tol {
        return Err(nonzero_barycenter(m));
    }
    let exact_ok = m.m1.iter().all(Zero::is_zero);
    let basis = whiten_unchecked(m)?;
    finish(basis, lambda, exact_ok)
}

fn finish(basis: WhitenedBasis, lambda: &Rational, try_exact: bool) -> Result<BoundResult> {
    let lambda_f = to_f64(lambda);
    let (ratio_min, a, trace) = minimize_forms(&basis.forms)?;
    let values = basis.forms.values(&a);
    let unit_bound = 8.0 / 3.0 + (2.0 / 3.0) * ratio_min;
    let raw = &basis.transform * DMatrix::from_column_slice(a.len(), 1, &a);
    let mut raw: Vec<f64> = raw.iter().copied().collect();
    sphere::normalize(&mut raw);
    let mut warnings = Vec::new();
    if trace.skipped_starts > 0 {
        warnings.push(format!("{} start directions were degenerate and skipped", trace.skipped_starts));
    }
    let exact = if try_exact {
        recognize_exact(&basis.moments, &raw, unit_bound).map(|q| q * lambda)
    } else {
        None
    };
    let n = basis.transform.nrows();
    Ok(BoundResult {
        bound: lambda_f * unit_bound,
        exact,
        lambda: lambda.clone(),
        argmin_a: a,
        argmin_raw: Some(raw),
        whitening: Some((0..n).map(|i| basis.transform.row(i).iter().copied().collect()).collect()),
        diagnostics: Diagnostics {
            numerator: values.numerator,
            denominator: values.phi_norm_sq,
            optimizer: Some(trace),
            integrals: None,
            warnings,
        },
    })
}

/// Looks for a small-denominator rational direction reproducing the optimized
/// value; returns the exact bound at `Λ = 1` on success.
fn recognize_exact(m: &MomentTensor, raw: &[f64], unit_bound: f64) -> Option<Rational> {
    let accept = |b: &[Rational]| {
        let value = exact_bound_at(m, &Rational::one(), b).ok()?;
        ((to_f64(&value) - unit_bound).abs() <= 1e-9 * unit_bound.abs().max(1.0)).then_some(value)
    };
    let pivot = raw
        .iter()
        .copied()
        .max_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap_or(std::cmp::Ordering::Equal))?;
    if pivot != 0.0 {
        let b: Option<Vec<Rational>> = raw.iter().map(|x| rationalize(x / pivot, 1000, 1e-9)).collect();
        if let Some(v) = b.as_deref().and_then(accept) {
            return Some(v);
        }
    }
    // When the minimum is attained on a continuum of directions the reported
    // minimizer may be irrational; small rational directions can still hit it.
    let n = raw.len();
    let mut candidates = Vec::new();
    for i in 0..n {
        candidates.push((0..n).map(|k| int((k == i) as i64)).collect::<Vec<_>>());
        for j in i + 1..n {
            for s in [1, -1] {
                candidates.push((0..n).map(|k| int(if k == i { 1 } else if k == j { s } else { 0 })).collect());
            }
        }
    }
    candidates.iter().find_map(|b| accept(b))
}
