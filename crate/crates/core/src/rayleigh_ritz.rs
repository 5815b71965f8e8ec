//! Rayleigh-Ritz approximation of the torus-invariant spectrum.
//!
//! For torus-invariant test functions `f_i` on a toric manifold with
//! symplectic potential `ψ`, the Dirichlet form is `∫_P ∇f_iᵀ H⁻¹ ∇f_j dx`
//! with `H = Hess ψ` and the `L²` pairing is `∫_P f_i f_j dx`. The stiffness
//! matrix is integrated adaptively, the mass matrix exactly from moments.

use nalgebra::DMatrix;
use serde::Serialize;

pub use crate::linalg::generalized_eigenvalues;

use crate::error::{Error, Result};
use crate::linalg::min_eigenvalue;
use crate::moments::moments_up_to;
use crate::poly::{multi_indices_up_to, FloatPoly, MultiIndex, MultiPoly};
use crate::polytope::Polytope;
use crate::potential::{HessianEvaluator, SymplecticPotential};
use crate::quadrature::{integrate, AdaptiveOptions, FloatSimplex, Integrand, QuadratureReport};
use crate::rational::{int, to_f64, Rational};

pub const MAX_DEGREE: u32 = 4;

#[derive(Clone, Copy, Debug)]
pub struct SpectrumOptions {
    /// Absolute quadrature tolerance for each entry of the stiffness matrix.
    pub tol: f64,
    pub max_depth: u32,
    /// Re-run with a hundredfold tighter tolerance and report the largest
    /// eigenvalue change.
    pub convergence_check: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_depth: 12,
            convergence_check: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Assembly {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub b_exact: Vec<Vec<Rational>>,
    pub report: QuadratureReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub basis: Vec<MultiIndex>,
    pub quadrature: QuadratureReport,
    pub warnings: Vec<String>,
}

struct StiffnessIntegrand<'a> {
    hessian: &'a HessianEvaluator,
    /// `grads[i][k]` = ∂f_i/∂x_k
    grads: Vec<Vec<FloatPoly>>,
}

impl StiffnessIntegrand<'_> {
    fn size(&self) -> usize {
        self.grads.len()
    }
}

impl Integrand for StiffnessIntegrand<'_> {
    fn outputs(&self) -> usize {
        let m = self.size();
        m * (m + 1) / 2
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        let hinv = self.hessian.inverse_hessian(x)?;
        let n = self.hessian.dim();
        let g: Vec<Vec<f64>> = self
            .grads
            .iter()
            .map(|gi| gi.iter().map(|p| p.eval(x)).collect())
            .collect();
        let hg: Vec<Vec<f64>> = g
            .iter()
            .map(|gi| (0..n).map(|r| (0..n).map(|c| hinv[(r, c)] * gi[c]).sum()).collect())
            .collect();
        let mut k = 0;
        for i in 0..g.len() {
            for j in i..g.len() {
                out[k] = g[i].iter().zip(&hg[j]).map(|(a, b)| a * b).sum();
                k += 1;
            }
        }
        Ok(())
    }
}

fn float_simplices(p: &Polytope) -> Vec<FloatSimplex> {
    p.triangulate()
        .into_iter()
        .map(|s| FloatSimplex::new(s.vertices.iter().map(|v| v.iter().map(to_f64).collect()).collect()))
        .collect()
}

/// Exact `L²` Gram matrix of `basis` over `p`.
pub fn mass_matrix(p: &Polytope, basis: &[MultiPoly]) -> Vec<Vec<Rational>> {
    let max_deg = basis.iter().filter_map(MultiPoly::degree).max().unwrap_or(0);
    let table = moments_up_to(p, 2 * max_deg);
    let m = basis.len();
    let mut b = vec![vec![int(0); m]; m];
    for i in 0..m {
        for j in i..m {
            let mut acc = int(0);
            for (ai, ci) in basis[i].terms() {
                for (aj, cj) in basis[j].terms() {
                    let alpha: MultiIndex = ai.iter().zip(aj).map(|(x, y)| x + y).collect();
                    acc += ci * cj * &table[&alpha];
                }
            }
            b[j][i] = acc.clone();
            b[i][j] = acc;
        }
    }
    b
}

/// Stiffness and mass matrices of `basis` for the metric of `s` on `p`.
pub fn assemble_matrices(
    p: &Polytope,
    s: &SymplecticPotential,
    basis: &[MultiPoly],
    opts: &SpectrumOptions,
) -> Result<Assembly> {
    let n = p.dim();
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    if let Some(bad) = basis.iter().find(|f| f.nvars() != n) {
        return Err(Error::InvalidArgument(format!(
            "basis function in {} variables, polytope dimension is {n}",
            bad.nvars()
        )));
    }
    let hessian = s.evaluator(p)?;
    let integrand = StiffnessIntegrand {
        hessian: &hessian,
        grads: basis
            .iter()
            .map(|f| f.gradient().iter().map(MultiPoly::to_f64).collect())
            .collect(),
    };
    let (upper, report) = integrate(
        &float_simplices(p),
        &integrand,
        AdaptiveOptions {
            tol: opts.tol,
            max_depth: opts.max_depth,
        },
    )?;
    let m = basis.len();
    let mut a = DMatrix::zeros(m, m);
    let mut k = 0;
    for i in 0..m {
        for j in i..m {
            a[(i, j)] = upper[k];
            a[(j, i)] = upper[k];
            k += 1;
        }
    }
    let b_exact = mass_matrix(p, basis);
    let b = DMatrix::from_fn(m, m, |i, j| to_f64(&b_exact[i][j]));

    let slack = 10.0 * report.estimated_error + 1e-9 * a.norm();
    let lowest = min_eigenvalue(&a);
    if lowest < -slack {
        return Err(Error::NonConvergence(format!(
            "stiffness matrix has eigenvalue {lowest:e} below quadrature slack {slack:e}"
        )));
    }
    if b.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(Assembly { a, b, b_exact, report })
}

/// Monomials of total degree at most `degree` in graded order.
pub fn monomial_basis(dim: usize, degree: u32) -> Vec<MultiIndex> {
    multi_indices_up_to(dim, degree)
}

/// Rayleigh-Ritz eigenvalues on the monomials of degree `≤ degree`.
pub fn rayleigh_ritz_spectrum(
    p: &Polytope,
    s: &SymplecticPotential,
    degree: u32,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree must be between 1 and {MAX_DEGREE}, got {degree}"
        )));
    }
    let indices = monomial_basis(p.dim(), degree);
    let basis: Vec<MultiPoly> = indices
        .iter()
        .map(|a| MultiPoly::monomial(a.clone(), int(1)))
        .collect();
    let assembly = assemble_matrices(p, s, &basis, opts)?;
    let eigenvalues = generalized_eigenvalues(&assembly.a, &assembly.b)?;
    let mut quadrature = assembly.report;
    let mut warnings = std::mem::take(&mut quadrature.warnings);
    quadrature.refinement_delta = if opts.convergence_check {
        let fine = SpectrumOptions {
            tol: opts.tol / 100.0,
            convergence_check: false,
            ..*opts
        };
        let refined = assemble_matrices(p, s, &basis, &fine)?;
        let ev = generalized_eigenvalues(&refined.a, &refined.b)?;
        let delta = ev
            .iter()
            .zip(&eigenvalues)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if delta > 1e-3 {
            warnings.push(format!("eigenvalues moved by {delta:e} under refinement"));
        }
        Some(delta)
    } else {
        None
    };
    Ok(SpectrumResult {
        eigenvalues,
        basis: indices,
        quadrature,
        warnings,
    })
}
