//! Exact integration of polynomials over simplices and polytopes.
//!
//! A simplex `S = conv(p_0, …, p_n)` is the image of the standard simplex
//! under `t ↦ p_0 + J t`, so `∫_S f dx = |det J| ∫_Δ f(p_0 + J t) dt`. After
//! expanding the pulled-back polynomial, each monomial integrates with the
//! Dirichlet formula `∫_Δ t^β dt = ∏ β_i! / (|β| + n)!`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, RMatrix};
use crate::poly::{multi_indices_up_to, MultiIndex, MultiPoly};
use crate::polytope::{factorial, rational_from_json, Polytope, Simplex};
use crate::rational::{format_rational, int, to_f64, Rational};

/// `∫ t^β dt` over the standard simplex `{t ≥ 0, Σ t_i ≤ 1}`.
pub fn standard_simplex_monomial(beta: &[u32]) -> Rational {
    let n = beta.len();
    let total: usize = beta.iter().map(|&b| b as usize).sum();
    let numer = beta
        .iter()
        .fold(Rational::one(), |acc, &b| acc * factorial(b as usize));
    numer / factorial(total + n)
}

fn pullback(s: &Simplex) -> Vec<MultiPoly> {
    let n = s.dim();
    let j = s.edge_matrix();
    (0..n)
        .map(|i| MultiPoly::affine(&j[i], s.vertices[0][i].clone()))
        .collect()
}

fn integrate_standard(p: &MultiPoly) -> Rational {
    p.terms()
        .map(|(beta, c)| c * standard_simplex_monomial(beta))
        .sum()
}

/// Exact `∫_S x^α dx`.
pub fn simplex_monomial_integral(s: &Simplex, alpha: &[u32]) -> Rational {
    let f = MultiPoly::monomial(alpha.to_vec(), Rational::one());
    integrate_over_simplex(s, &f)
}

/// Exact `∫_S f dx`.
pub fn integrate_over_simplex(s: &Simplex, f: &MultiPoly) -> Rational {
    assert_eq!(f.nvars(), s.dim(), "polynomial and simplex dimensions differ");
    let pulled = f.compose(&pullback(s));
    integrate_standard(&pulled) * s.jacobian()
}

/// Exact `∫_P x^α dx`.
pub fn monomial_moment(p: &Polytope, alpha: &[u32]) -> Rational {
    let f = MultiPoly::monomial(alpha.to_vec(), Rational::one());
    integrate_polynomial(p, &f)
}

/// Exact `∫_P f dx`. Simplices are integrated independently and summed in
/// triangulation order.
pub fn integrate_polynomial(p: &Polytope, f: &MultiPoly) -> Rational {
    let parts: Vec<Rational> = p
        .triangulate()
        .par_iter()
        .map(|s| integrate_over_simplex(s, f))
        .collect();
    parts.into_iter().sum()
}

/// All moments `∫_P x^α dx` with `|α| ≤ max_degree`.
pub fn moments_up_to(p: &Polytope, max_degree: u32) -> BTreeMap<MultiIndex, Rational> {
    let n = p.dim();
    let indices = multi_indices_up_to(n, max_degree);
    let per_simplex: Vec<Vec<Rational>> = p
        .triangulate()
        .par_iter()
        .map(|s| {
            let subs = pullback(s);
            // powers[i][e] = (x_i pulled back)^e
            let powers: Vec<Vec<MultiPoly>> = subs
                .iter()
                .map(|x| (0..=max_degree).map(|e| x.pow(e)).collect())
                .collect();
            let jac = s.jacobian();
            indices
                .iter()
                .map(|alpha| {
                    let mut term = MultiPoly::one(n);
                    for (i, &e) in alpha.iter().enumerate() {
                        if e > 0 {
                            term = &term * &powers[i][e as usize];
                        }
                    }
                    integrate_standard(&term) * &jac
                })
                .collect()
        })
        .collect();
    let mut out: BTreeMap<MultiIndex, Rational> =
        indices.iter().map(|a| (a.clone(), Rational::zero())).collect();
    for values in per_simplex {
        for (alpha, v) in indices.iter().zip(values) {
            *out.get_mut(alpha).unwrap() += v;
        }
    }
    out
}

/// `[Vol(P), ∫x_1, …, ∫x_n]`.
pub fn first_moments(p: &Polytope) -> Vec<Rational> {
    let n = p.dim();
    let m = moments_up_to(p, 1);
    let mut out = vec![m[&vec![0; n]].clone()];
    for i in 0..n {
        let mut a = vec![0; n];
        a[i] = 1;
        out.push(m[&a].clone());
    }
    out
}

/// Exact moments of total degree ≤ 4 stored as dense symmetric tensors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTensor {
    dim: usize,
    pub vol: Rational,
    pub m1: Vec<Rational>,
    pub gram: RMatrix,
    t3: Vec<Rational>,
    t4: Vec<Rational>,
}

impl MomentTensor {
    /// Builds the tensors from a table of monomial moments (all `|α| ≤ 4`).
    pub fn from_moment_table(dim: usize, table: &BTreeMap<MultiIndex, Rational>) -> Result<Self> {
        let get = |idx: &[usize]| -> Result<Rational> {
            let mut alpha = vec![0u32; dim];
            for &i in idx {
                alpha[i] += 1;
            }
            table
                .get(&alpha)
                .cloned()
                .ok_or_else(|| Error::Degenerate(format!("missing moment for exponent {alpha:?}")))
        };
        let vol = get(&[])?;
        let m1 = (0..dim).map(|i| get(&[i])).collect::<Result<Vec<_>>>()?;
        let gram = (0..dim)
            .map(|i| (0..dim).map(|j| get(&[i, j])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut t3 = Vec::with_capacity(dim.pow(3));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    t3.push(get(&[i, j, k])?);
                }
            }
        }
        let mut t4 = Vec::with_capacity(dim.pow(4));
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        t4.push(get(&[i, j, k, l])?);
                    }
                }
            }
        }
        let m = Self {
            dim,
            vol,
            m1,
            gram,
            t3,
            t4,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds the tensors from dense nested arrays, checking symmetry.
    pub fn from_dense(
        vol: Rational,
        m1: Vec<Rational>,
        gram: RMatrix,
        t3: Vec<Rational>,
        t4: Vec<Rational>,
    ) -> Result<Self> {
        let dim = m1.len();
        if gram.len() != dim
            || gram.iter().any(|r| r.len() != dim)
            || t3.len() != dim.pow(3)
            || t4.len() != dim.pow(4)
        {
            return Err(Error::Parse("moment tensor shapes are inconsistent".into()));
        }
        let m = Self {
            dim,
            vol,
            m1,
            gram,
            t3,
            t4,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if !self.vol.is_positive() {
            return Err(Error::Degenerate("volume must be positive".into()));
        }
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(Error::Degenerate("gram matrix is not symmetric".into()));
                }
                for k in 0..n {
                    let v = self.t3(i, j, k);
                    if v != self.t3(j, i, k) || v != self.t3(i, k, j) {
                        return Err(Error::Degenerate("third moments are not symmetric".into()));
                    }
                    for l in 0..n {
                        let w = self.t4(i, j, k, l);
                        if w != self.t4(j, i, k, l) || w != self.t4(i, k, j, l) || w != self.t4(i, j, l, k) {
                            return Err(Error::Degenerate("fourth moments are not symmetric".into()));
                        }
                    }
                }
            }
        }
        // Sylvester: all leading principal minors positive.
        for k in 1..=n {
            let minor: RMatrix = self.gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !exact::determinant(&minor).is_positive() {
                return Err(Error::Degenerate("gram matrix is not positive definite".into()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t3(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim;
        &self.t3[(i * n + j) * n + k]
    }

    pub fn t4(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        let n = self.dim;
        &self.t4[((i * n + j) * n + k) * n + l]
    }

    /// Moment of an arbitrary monomial of degree ≤ 4.
    pub fn moment(&self, alpha: &[u32]) -> Option<&Rational> {
        let idx: Vec<usize> = alpha
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        match idx.as_slice() {
            [] => Some(&self.vol),
            [i] => Some(&self.m1[*i]),
            [i, j] => Some(&self.gram[*i][*j]),
            [i, j, k] => Some(self.t3(*i, *j, *k)),
            [i, j, k, l] => Some(self.t4(*i, *j, *k, *l)),
            _ => None,
        }
    }

    /// Multiplies every moment by `s`; models rescaling the underlying measure.
    pub fn scale_measure(&self, s: &Rational) -> Self {
        Self {
            dim: self.dim,
            vol: &self.vol * s,
            m1: self.m1.iter().map(|v| v * s).collect(),
            gram: self.gram.iter().map(|r| r.iter().map(|v| v * s).collect()).collect(),
            t3: self.t3.iter().map(|v| v * s).collect(),
            t4: self.t4.iter().map(|v| v * s).collect(),
        }
    }

    /// Moments of the region shifted by `-center` (so `x ↦ x - center`).
    pub fn recentered(&self, center: &[Rational]) -> Self {
        let n = self.dim;
        let mut table = BTreeMap::new();
        for alpha in multi_indices_up_to(n, 4) {
            // ∫ ∏ (x_i - c_i)^{α_i} expanded against the stored moments.
            let subs: Vec<MultiPoly> = (0..n)
                .map(|i| {
                    let mut coeffs = vec![Rational::zero(); n];
                    coeffs[i] = Rational::one();
                    MultiPoly::affine(&coeffs, -center[i].clone())
                })
                .collect();
            let f = MultiPoly::monomial(alpha.clone(), Rational::one()).compose(&subs);
            let v: Rational = f
                .terms()
                .map(|(beta, c)| c * self.moment(beta).expect("degree ≤ 4"))
                .sum();
            table.insert(alpha, v);
        }
        Self::from_moment_table(n, &table).expect("recentering preserves validity")
    }

    /// JSON with exact `"p/q"` strings, truncated at `max_degree` (≤ 4).
    pub fn to_json(&self, max_degree: u32) -> Value {
        let n = self.dim;
        let s = format_rational;
        let mut doc = serde_json::Map::new();
        doc.insert("dimension".into(), json!(n));
        doc.insert("vol".into(), json!(s(&self.vol)));
        if max_degree >= 1 {
            doc.insert("m1".into(), json!(self.m1.iter().map(s).collect::<Vec<_>>()));
        }
        if max_degree >= 2 {
            let g: Vec<Vec<String>> = self.gram.iter().map(|r| r.iter().map(s).collect()).collect();
            doc.insert("gram".into(), json!(g));
        }
        if max_degree >= 3 {
            let t: Vec<Vec<Vec<String>>> = (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| s(self.t3(i, j, k))).collect()).collect())
                .collect();
            doc.insert("t3".into(), json!(t));
        }
        if max_degree >= 4 {
            let t: Vec<Vec<Vec<Vec<String>>>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| (0..n).map(|l| s(self.t4(i, j, k, l))).collect()).collect())
                        .collect()
                })
                .collect();
            doc.insert("t4".into(), json!(t));
        }
        Value::Object(doc)
    }

    /// Parses the document produced by [`MomentTensor::to_json`] with
    /// `max_degree = 4`. Entries may be numbers or `"p/q"` strings.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("moments JSON: {e}")))?;
        let field = |name: &str| {
            v.get(name)
                .ok_or_else(|| Error::Parse(format!("moments JSON: missing field {name:?}")))
        };
        let flatten = |value: &Value, depth: usize| -> Result<Vec<Rational>> {
            let mut out = Vec::new();
            flatten_into(value, depth, &mut out)?;
            Ok(out)
        };
        let vol = rational_from_json(field("vol")?)?;
        let m1 = flatten(field("m1")?, 1)?;
        let n = m1.len();
        let gram_flat = flatten(field("gram")?, 2)?;
        if gram_flat.len() != n * n {
            return Err(Error::Parse("moments JSON: gram has wrong shape".into()));
        }
        let gram = gram_flat.chunks(n.max(1)).map(<[Rational]>::to_vec).collect();
        let t3 = flatten(field("t3")?, 3)?;
        let t4 = flatten(field("t4")?, 4)?;
        if let Some(d) = v.get("dimension").and_then(Value::as_u64) {
            if d as usize != n {
                return Err(Error::Parse("moments JSON: dimension disagrees with m1".into()));
            }
        }
        Self::from_dense(vol, m1, gram, t3, t4)
    }

    pub fn m1_f64(&self) -> Vec<f64> {
        self.m1.iter().map(to_f64).collect()
    }
}

fn flatten_into(v: &Value, depth: usize, out: &mut Vec<Rational>) -> Result<()> {
    if depth == 0 {
        out.push(rational_from_json(v)?);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("moments JSON: expected a nested array".into()))?;
    for item in arr {
        flatten_into(item, depth - 1, out)?;
    }
    Ok(())
}

/// All moments of `P` up to degree 4.
pub fn moment_tensors(p: &Polytope) -> MomentTensor {
    let table = moments_up_to(p, 4);
    MomentTensor::from_moment_table(p.dim(), &table).expect("validated polytopes have valid moments")
}

/// Moments of the unit disc divided by π (the common factor cancels in every
/// scale-invariant quantity built from them).
pub fn unit_disc_moments_over_pi() -> MomentTensor {
    let mut table = BTreeMap::new();
    // ∫_disc x^a y^b = 2 Γ((a+1)/2) Γ((b+1)/2) / ((a+b+2) Γ((a+b+2)/2)) for even a, b.
    for alpha in multi_indices_up_to(2, 4) {
        let (a, b) = (alpha[0], alpha[1]);
        let v = if a % 2 == 1 || b % 2 == 1 {
            Rational::zero()
        } else {
            // Γ(k+1/2) = (2k)! √π / (4^k k!); the √π factors combine with the
            // 1/Γ to leave a single π that is divided out.
            let half = |k: u32| factorial(2 * k as usize) / (int(4).pow(k as i32) * factorial(k as usize));
            let (ka, kb) = (a / 2, b / 2);
            let m = (a + b) / 2 + 1; // Γ(m) with integer m
            int(2) * half(ka) * half(kb) / (int((a + b + 2) as i64) * factorial(m as usize - 1))
        };
        table.insert(alpha, v);
    }
    MomentTensor::from_moment_table(2, &table).expect("disc moments are valid")
}
