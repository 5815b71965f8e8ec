//! Symplectic potentials and their Hessians.
//!
//! A potential is `ψ = w·Σ_k l_k log l_k + h(x) + Σ_j c_j (a_j·x + b_j) log(a_j·x + b_j)`
//! with `l_k` the facet forms of the polytope. The canonical weight `w`
//! defaults to `1/2`, the normalization under which the canonical metric on
//! `CP^n` has first eigenvalue `2`, matching a Kähler-Einstein constant of 1
//! for the polytopes `{v·x + 1 ≥ 0}`.

use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::{FloatPoly, MultiPoly};
use crate::polytope::{rational_from_json, Polytope};
use crate::rational::{int, parse_rational, ratio, to_f64, Rational};

/// A term `coeff · (a·x + b) log(a·x + b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogTerm {
    pub a: Vec<f64>,
    pub b: f64,
    pub coeff: f64,
}

#[derive(Clone, Debug)]
pub struct SymplecticPotential {
    pub canonical_weight: Rational,
    pub poly_correction: MultiPoly,
    pub log_terms: Vec<LogTerm>,
}

impl SymplecticPotential {
    /// The canonical potential with the default weight `1/2`.
    pub fn canonical(dim: usize) -> Self {
        Self {
            canonical_weight: ratio(1, 2),
            poly_correction: MultiPoly::zero(dim),
            log_terms: Vec::new(),
        }
    }

    pub fn with_canonical_weight(mut self, w: Rational) -> Self {
        self.canonical_weight = w;
        self
    }

    pub fn dim(&self) -> usize {
        self.poly_correction.nvars()
    }

    /// The polynomial correction used on the hexagon: `h = −0.22412 U
    /// − 0.01450 U² − 0.00521 U³ + 0.00734 V` with `U = x₁² + x₁x₂ + x₂²`
    /// and `V = x₁²x₂²(x₁ + x₂)²`.
    pub fn doran_dp6() -> Self {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let u = &(&(&x * &x) + &(&x * &y)) + &(&y * &y);
        let s = &x + &y;
        let v = &(&(&x * &x) * &(&y * &y)) * &(&s * &s);
        let c = |s: &str| parse_rational(s).expect("literal");
        let h = &(&(&u.scale(&c("-0.22412")) + &u.pow(2).scale(&c("-0.01450")))
            + &u.pow(3).scale(&c("-0.00521")))
            + &v.scale(&c("0.00734"));
        Self {
            canonical_weight: ratio(1, 2),
            poly_correction: h,
            log_terms: Vec::new(),
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "doran-dp6" => Ok(Self::doran_dp6()),
            _ => Err(Error::InvalidArgument(format!(
                "unknown potential preset '{name}' (available: {})",
                POTENTIAL_PRESETS.join(", ")
            ))),
        }
    }

    /// Parses `{"poly_correction": [{"alpha", "coeff"}], "log_terms": [{"a",
    /// "b", "coeff"}], "canonical_weight"?}` for a polytope of dimension `dim`.
    pub fn from_json(text: &str, dim: usize) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Term {
            alpha: Vec<u32>,
            coeff: Value,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Log {
            a: Vec<f64>,
            b: f64,
            coeff: f64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            #[serde(default)]
            poly_correction: Vec<Term>,
            #[serde(default)]
            log_terms: Vec<Log>,
            canonical_weight: Option<Value>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut h = MultiPoly::zero(dim);
        for (i, t) in doc.poly_correction.into_iter().enumerate() {
            if t.alpha.len() != dim {
                return Err(Error::DimensionMismatch {
                    index: i,
                    expected: dim,
                    got: t.alpha.len(),
                });
            }
            h.add_term(t.alpha, rational_from_json(&t.coeff)?);
        }
        let mut log_terms = Vec::new();
        for (i, l) in doc.log_terms.into_iter().enumerate() {
            if l.a.len() != dim {
                return Err(Error::DimensionMismatch {
                    index: i,
                    expected: dim,
                    got: l.a.len(),
                });
            }
            log_terms.push(LogTerm {
                a: l.a,
                b: l.b,
                coeff: l.coeff,
            });
        }
        let canonical_weight = match doc.canonical_weight {
            Some(v) => rational_from_json(&v)?,
            None => ratio(1, 2),
        };
        if canonical_weight < int(0) {
            return Err(Error::InvalidArgument("canonical_weight must be non-negative".into()));
        }
        Ok(Self {
            canonical_weight,
            poly_correction: h,
            log_terms,
        })
    }

    /// Compiles the potential against `p` for repeated Hessian evaluation.
    pub fn evaluator(&self, p: &Polytope) -> Result<HessianEvaluator> {
        let n = p.dim();
        if self.dim() != n || self.log_terms.iter().any(|l| l.a.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "potential dimension {} does not match polytope dimension {n}",
                self.dim()
            )));
        }
        let mut second = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            let di = self.poly_correction.derivative(i);
            for j in i..n {
                second.push(di.derivative(j).to_f64());
            }
        }
        Ok(HessianEvaluator {
            dim: n,
            weight: to_f64(&self.canonical_weight),
            facets: p
                .facets()
                .iter()
                .map(|f| (f.v.iter().map(|&v| v as f64).collect(), to_f64(&f.c)))
                .collect(),
            second,
            log_terms: self.log_terms.clone(),
        })
    }
}

pub const POTENTIAL_PRESETS: [&str; 1] = ["doran-dp6"];

/// Precomputed data for evaluating `Hess ψ` at many points.
#[derive(Clone, Debug)]
pub struct HessianEvaluator {
    dim: usize,
    weight: f64,
    facets: Vec<(Vec<f64>, f64)>,
    second: Vec<FloatPoly>,
    log_terms: Vec<LogTerm>,
}

impl HessianEvaluator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Σ v vᵀ / l(x)` without the canonical weight.
    pub fn canonical(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim;
        let mut h = DMatrix::zeros(n, n);
        for (v, c) in &self.facets {
            let l = c + v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            if !(l > 0.0) {
                return Err(Error::NotInterior(x.to_vec()));
            }
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] += v[i] * v[j] / l;
                }
            }
        }
        Ok(h)
    }

    /// Hessian of the full potential; not checked for definiteness.
    pub fn hessian_unchecked(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.dim;
        let mut h = self.canonical(x)? * self.weight;
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let v = self.second[k].eval(x);
                h[(i, j)] += v;
                if i != j {
                    h[(j, i)] += v;
                }
                k += 1;
            }
        }
        for t in &self.log_terms {
            let l = t.b + t.a.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            if !(l > 0.0) {
                return Err(Error::InvalidPotential { point: x.to_vec() });
            }
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] += t.coeff * t.a[i] * t.a[j] / l;
                }
            }
        }
        Ok(h)
    }

    /// Hessian of the full potential, which must be positive definite.
    pub fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let h = self.hessian_unchecked(x)?;
        if h.clone().cholesky().is_none() {
            return Err(Error::InvalidPotential { point: x.to_vec() });
        }
        Ok(h)
    }

    /// `H(x)⁻¹`, via Cholesky; errors where `H` is not positive definite.
    pub fn inverse_hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let h = self.hessian_unchecked(x)?;
        let chol = h
            .cholesky()
            .ok_or_else(|| Error::InvalidPotential { point: x.to_vec() })?;
        Ok(chol.inverse())
    }
}

/// `Σ_k v_k v_kᵀ / l_k(x)` at an interior point.
pub fn canonical_hessian(p: &Polytope, x: &[f64]) -> Result<DMatrix<f64>> {
    check_point(p, x)?;
    SymplecticPotential::canonical(p.dim()).evaluator(p)?.canonical(x)
}

/// Hessian of `s` at an interior point of `p`.
pub fn potential_hessian(s: &SymplecticPotential, p: &Polytope, x: &[f64]) -> Result<DMatrix<f64>> {
    check_point(p, x)?;
    s.evaluator(p)?.hessian(x)
}

fn check_point(p: &Polytope, x: &[f64]) -> Result<()> {
    if x.len() != p.dim() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, polytope dimension is {}",
            x.len(),
            p.dim()
        )));
    }
    if !p.contains_interior(x) {
        return Err(Error::NotInterior(x.to_vec()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn close(a: &DMatrix<f64>, b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn canonical_hessians() {
        let seg = presets::polytope("cp1").unwrap();
        assert!(close(&canonical_hessian(&seg, &[0.0]).unwrap(), &[2.0], 1e-15));
        let hex = presets::polytope("dp6").unwrap();
        assert!(close(&canonical_hessian(&hex, &[0.0, 0.0]).unwrap(), &[4.0, 2.0, 2.0, 4.0], 1e-15));
    }

    #[test]
    fn boundary_points_rejected() {
        let seg = presets::polytope("cp1").unwrap();
        assert!(matches!(canonical_hessian(&seg, &[1.0]), Err(Error::NotInterior(_))));
        assert!(matches!(canonical_hessian(&seg, &[3.0]), Err(Error::NotInterior(_))));
    }

    #[test]
    fn doran_at_origin_with_unit_weight() {
        let hex = presets::polytope("dp6").unwrap();
        let s = SymplecticPotential::doran_dp6().with_canonical_weight(int(1));
        let h = potential_hessian(&s, &hex, &[0.0, 0.0]).unwrap();
        assert!(close(&h, &[3.55176, 1.77588, 1.77588, 3.55176], 1e-12), "{h}");
    }

    #[test]
    fn zero_correction_is_weighted_canonical() {
        let hex = presets::polytope("dp6").unwrap();
        let x = [0.3, -0.2];
        let s = SymplecticPotential::canonical(2);
        let h = potential_hessian(&s, &hex, &x).unwrap();
        let c = canonical_hessian(&hex, &x).unwrap() * 0.5;
        assert!((h - c).norm() < 1e-15);
    }

    #[test]
    fn log_terms_reproduce_scaled_canonical() {
        // ψ = ½[(1+x)log(1+x) + (1−x)log(1−x)] written as log terms.
        let seg = presets::polytope("cp1").unwrap();
        let s = SymplecticPotential {
            canonical_weight: int(0),
            poly_correction: MultiPoly::zero(1),
            log_terms: vec![
                LogTerm { a: vec![1.0], b: 1.0, coeff: 0.5 },
                LogTerm { a: vec![-1.0], b: 1.0, coeff: 0.5 },
            ],
        };
        for x in [-0.7, 0.0, 0.4] {
            let h = potential_hessian(&s, &seg, &[x]).unwrap();
            let c = canonical_hessian(&seg, &[x]).unwrap();
            assert!((h[(0, 0)] - 0.5 * c[(0, 0)]).abs() < 1e-14);
        }
    }

    #[test]
    fn non_convex_potential_rejected() {
        let seg = presets::polytope("cp1").unwrap();
        let text = r#"{"poly_correction": [{"alpha": [2], "coeff": -5}]}"#;
        let s = SymplecticPotential::from_json(text, 1).unwrap();
        assert!(matches!(
            potential_hessian(&s, &seg, &[0.0]),
            Err(Error::InvalidPotential { .. })
        ));
    }

    #[test]
    fn json_parsing() {
        let text = r#"{"poly_correction": [{"alpha": [2, 0], "coeff": "-1/4"}],
                       "log_terms": [{"a": [1, 0], "b": 2, "coeff": 0.1}],
                       "canonical_weight": 1}"#;
        let s = SymplecticPotential::from_json(text, 2).unwrap();
        assert_eq!(s.canonical_weight, int(1));
        assert_eq!(s.poly_correction.coeff(&[2, 0]), ratio(-1, 4));
        assert_eq!(s.log_terms.len(), 1);
        assert!(SymplecticPotential::from_json(r#"{"poly_correction": [{"alpha": [2], "coeff": 1}]}"#, 2).is_err());
        assert!(SymplecticPotential::from_json(r#"{"extra": 1}"#, 2).is_err());
        assert_eq!(SymplecticPotential::from_json("{}", 2).unwrap().canonical_weight, ratio(1, 2));
    }
}
