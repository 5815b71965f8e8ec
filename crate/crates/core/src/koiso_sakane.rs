//! λ₂ bounds for Koiso-Sakane manifolds from one-dimensional weight
//! integrals.
//!
//! The weight on `[-(n_1+1), n_r+1]` is `w(x) = ∏ |p_i/q_i − x|^{n_i}`. It is
//! piecewise polynomial with breakpoints at the roots `p_i/q_i`, so every
//! moment `I_k = ∫ x^k w(x) dx` is computed exactly by splitting at the roots
//! and fixing the sign of each factor on each piece.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::{format_rational, int, ratio, to_f64, Rational};
use crate::toric_bound::{BoundResult, Diagnostics};

/// Largest supported moment order.
pub const MAX_K: u32 = 8;

/// Data `(n_i, p_i, q_i)` of a Koiso-Sakane manifold with Einstein constant Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSData {
    pub n: Vec<u32>,
    pub p: Vec<i64>,
    pub q: Vec<i64>,
    pub lambda: Rational,
}

impl KSData {
    pub fn new(n: Vec<u32>, p: Vec<i64>, q: Vec<i64>, lambda: Rational) -> Result<Self> {
        if n.is_empty() {
            return Err(Error::InvalidArgument("at least one factor is required".into()));
        }
        if n.len() != p.len() || n.len() != q.len() {
            return Err(Error::InvalidArgument(format!(
                "tuples have different lengths: n {}, p {}, q {}",
                n.len(),
                p.len(),
                q.len()
            )));
        }
        if let Some(i) = q.iter().position(|&qi| qi == 0) {
            return Err(Error::InvalidArgument(format!("q_{} must be nonzero", i + 1)));
        }
        if !lambda.is_positive() {
            return Err(Error::InvalidArgument("Einstein constant must be positive".into()));
        }
        Ok(Self { n, p, q, lambda })
    }

    pub fn r(&self) -> usize {
        self.n.len()
    }

    /// `(-(n_1 + 1), n_r + 1)`.
    pub fn interval(&self) -> (Rational, Rational) {
        let a = -int(self.n[0] as i64 + 1);
        let b = int(self.n[self.r() - 1] as i64 + 1);
        (a, b)
    }

    /// Roots `p_i / q_i` of the factors that actually enter the weight.
    fn roots(&self) -> Vec<(Rational, u32)> {
        (0..self.r())
            .filter(|&i| self.n[i] > 0)
            .map(|i| (ratio(self.p[i], self.q[i]), self.n[i]))
            .collect()
    }

    /// Hypothesis checks of the existence and bound theorems; violations are
    /// reported, never enforced.
    pub fn hypothesis_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let r = self.r();
        for i in 0..r {
            if self.n[i] == 0 {
                continue;
            }
            if !(self.q[i].abs() < self.p[i].abs()) {
                out.push(format!("factor {}: 0 < |q| < |p| fails (p = {}, q = {})", i + 1, self.p[i], self.q[i]));
            }
            if i > 0 && i + 1 < r {
                let lo = -(self.n[0] as i64 + 1) * self.q[i];
                let hi = (self.n[r - 1] as i64 + 1) * self.q[i];
                if !(lo < self.p[i] && hi < self.p[i]) {
                    out.push(format!(
                        "factor {}: -(n_1+1)q < p and (n_r+1)q < p fail (p = {}, q = {})",
                        i + 1,
                        self.p[i],
                        self.q[i]
                    ));
                }
            }
        }
        out
    }
}

/// Exact moments `I_0 … I_4` of the weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KSIntegrals {
    #[serde(serialize_with = "crate::serde_util::rational_vec")]
    pub exact: Vec<Rational>,
    #[serde(rename = "I0")]
    pub i0: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    #[serde(rename = "I3")]
    pub i3: f64,
    #[serde(rename = "I4")]
    pub i4: f64,
    #[serde(serialize_with = "crate::serde_util::rational_vec")]
    pub breakpoints: Vec<Rational>,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub futaki: Rational,
}

/// Breakpoints strictly inside the interval, sorted and deduplicated.
pub fn breakpoints(d: &KSData) -> Vec<Rational> {
    let (a, b) = d.interval();
    let mut pts: Vec<Rational> = d.roots().into_iter().map(|(r, _)| r).filter(|r| *r > a && *r < b).collect();
    pts.sort();
    pts.dedup();
    pts
}

/// `∫_lo^hi f(x) dx` for a univariate polynomial.
fn definite(f: &MultiPoly, lo: &Rational, hi: &Rational) -> Rational {
    f.terms()
        .map(|(alpha, c)| {
            let e = alpha[0] as usize + 1;
            c * (num_traits::pow(hi.clone(), e) - num_traits::pow(lo.clone(), e)) / int(e as i64)
        })
        .sum()
}

fn x_poly() -> MultiPoly {
    MultiPoly::var(1, 0)
}

/// Exact `I_k = ∫ x^k ∏|p_i/q_i − x|^{n_i} dx`.
pub fn ks_integral(d: &KSData, k: u32) -> Result<Rational> {
    if k > MAX_K {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds the supported maximum {MAX_K}")));
    }
    let (a, b) = d.interval();
    let mut cuts = vec![a];
    cuts.extend(breakpoints(d));
    cuts.push(b);
    let xk = x_poly().pow(k);
    let mut total = Rational::zero();
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / int(2);
        let mut piece = xk.clone();
        for (root, e) in d.roots() {
            // |root − x| = s (root − x) with s fixed on the piece
            let sign = if root >= mid { Rational::one() } else { -Rational::one() };
            let factor = MultiPoly::affine(&[-sign.clone()], &sign * &root);
            piece = &piece * &factor.pow(e);
        }
        total += definite(&piece, &w[0], &w[1]);
    }
    Ok(total)
}

/// Signed integral `∫ x ∏ (x − p_i/q_i)^{n_i} dx`; zero is the existence
/// condition.
pub fn futaki_integral(d: &KSData) -> Rational {
    let (a, b) = d.interval();
    let mut f = x_poly();
    for (root, e) in d.roots() {
        f = &f * &MultiPoly::affine(&[Rational::one()], -root).pow(e);
    }
    definite(&f, &a, &b)
}

pub fn ks_integrals(d: &KSData) -> Result<KSIntegrals> {
    let exact = (0..=4).map(|k| ks_integral(d, k)).collect::<Result<Vec<_>>>()?;
    Ok(KSIntegrals {
        i0: to_f64(&exact[0]),
        i2: to_f64(&exact[2]),
        i3: to_f64(&exact[3]),
        i4: to_f64(&exact[4]),
        exact,
        breakpoints: breakpoints(d),
        futaki: futaki_integral(d),
    })
}

/// `8Λ/3 + (2Λ/3)(I₃²/I₂² + 4/I₀) / (I₄/I₂² − I₃²/I₂² − 1/I₀)`, exactly.
pub fn ks_bound(d: &KSData) -> Result<BoundResult> {
    let ints = ks_integrals(d)?;
    let i = &ints.exact;
    let (i0, i2, i3, i4) = (&i[0], &i[2], &i[3], &i[4]);
    let i2sq = i2 * i2;
    let skew = i3 * i3 / &i2sq;
    let numerator = &skew + int(4) / i0;
    let denominator = i4 / &i2sq - &skew - i0.recip();
    if !denominator.is_positive() {
        return Err(Error::ProjectionDegenerate(format_rational(&denominator)));
    }
    let exact = &d.lambda * (ratio(8, 3) + ratio(2, 3) * &numerator / &denominator);
    let mut warnings = d.hypothesis_warnings();
    if !ints.futaki.is_zero() {
        warnings.push(format!(
            "Futaki integral is {} ≠ 0; the bound presumes it vanishes",
            format_rational(&ints.futaki)
        ));
    }
    Ok(BoundResult {
        bound: to_f64(&exact),
        exact: Some(exact),
        lambda: d.lambda.clone(),
        argmin_a: vec![1.0],
        argmin_raw: None,
        whitening: None,
        diagnostics: Diagnostics {
            numerator: to_f64(&numerator),
            denominator: to_f64(&denominator),
            optimizer: None,
            integrals: Some(ints),
            warnings,
        },
    })
}

/// `W_{q,−q}` over a product of two `N`-dimensional projective spaces:
/// `n = (0, N, N, 0)`, `p = (0, N+1, N+1, 0)`, `q = (1, q, −q, 1)`, on `[-1, 1]`.
pub fn ks_family_wq(big_n: u32, q: i64) -> Result<KSData> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    if !(0 < q && q < big_n as i64 + 1) {
        return Err(Error::InvalidArgument(format!("q = {q} must satisfy 0 < q < N + 1 = {}", big_n + 1)));
    }
    let p = big_n as i64 + 1;
    KSData::new(vec![0, big_n, big_n, 0], vec![0, p, p, 0], vec![1, q, -q, 1], Rational::one())
}

/// The `(N, q)` grid `{(2,1), (2,2), (3,1), (3,2), (3,3)}`.
pub const TABLE_GRID: [(u32, i64); 5] = [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)];
