//! Moment polytopes in half-space form.
//!
//! A polytope is the set `{x : v_k · x + c_k ≥ 0 for all k}` with primitive
//! integer normals `v_k` and exact rational constants `c_k`. Construction
//! validates that the set is bounded, has nonempty interior, and that every
//! facet is irredundant; vertices are cached at that point.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{self, Constraint, RMatrix};
use crate::rational::{format_rational, int, parse_rational, Rational};

pub type Point = Vec<Rational>;

/// One defining inequality `v · x + c ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub v: Vec<i64>,
    pub c: Rational,
}

impl Facet {
    pub fn new(v: Vec<i64>, c: Rational) -> Self {
        Self { v, c }
    }

    /// `l(x) = v · x + c` evaluated exactly.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.v
            .iter()
            .zip(x)
            .fold(self.c.clone(), |acc, (&vi, xi)| acc + xi * int(vi))
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.v
            .iter()
            .zip(x)
            .fold(crate::rational::to_f64(&self.c), |acc, (&vi, xi)| acc + vi as f64 * xi)
    }

    fn is_primitive(&self) -> bool {
        let g = self.v.iter().fold(0i64, |g, &x| g.gcd(&x));
        g == 1
    }

    fn normal_rational(&self) -> Vec<Rational> {
        self.v.iter().map(|&x| int(x)).collect()
    }
}

/// An `n`-simplex given by its `n + 1` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.first().map_or(0, Vec::len);
        if vertices.len() != n + 1 || vertices.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "a simplex in R^{n} needs {} vertices",
                n + 1
            )));
        }
        let s = Self { vertices };
        if s.signed_det().is_zero() {
            return Err(Error::Degenerate("simplex vertices are affinely dependent".into()));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Edge matrix with columns `p_i - p_0`.
    pub fn edge_matrix(&self) -> RMatrix {
        let n = self.dim();
        let p0 = &self.vertices[0];
        (0..n)
            .map(|r| (1..=n).map(|c| &self.vertices[c][r] - &p0[r]).collect())
            .collect()
    }

    fn signed_det(&self) -> Rational {
        exact::determinant(&self.edge_matrix())
    }

    /// `|det J|`, the Jacobian of the affine map from the standard simplex.
    pub fn jacobian(&self) -> Rational {
        self.signed_det().abs()
    }

    pub fn volume(&self) -> Rational {
        self.jacobian() / factorial(self.dim())
    }
}

pub(crate) fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// A validated moment polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    facets: Vec<Facet>,
    name: Option<String>,
    vertices: Vec<Point>,
}

impl Polytope {
    pub fn new(dim: usize, facets: Vec<Facet>, name: Option<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        for (index, f) in facets.iter().enumerate() {
            if f.v.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    got: f.v.len(),
                });
            }
            if !f.is_primitive() {
                return Err(Error::NonPrimitiveNormal {
                    index,
                    normal: f.v.clone(),
                });
            }
        }
        if facets.len() <= dim {
            // Fewer than n+1 half-spaces never cut out a bounded region.
            return Err(if strictly_feasible(dim, &facets) {
                Error::Unbounded
            } else {
                Error::EmptyInterior
            });
        }
        if !strictly_feasible(dim, &facets) {
            return Err(Error::EmptyInterior);
        }
        if has_recession_direction(dim, &facets) {
            return Err(Error::Unbounded);
        }
        let vertices = enumerate_vertices(dim, &facets);
        let p = Self {
            dim,
            facets,
            name,
            vertices,
        };
        for k in 0..p.facets.len() {
            let on: Vec<&Point> = p.vertices_on_facet(k).map(|i| &p.vertices[i]).collect();
            if affine_dimension(&on) + 1 != dim as isize {
                return Err(Error::RedundantFacet(k));
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn vertices_on_facet(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        let f = &self.facets[k];
        (0..self.vertices.len()).filter(move |&i| f.eval(&self.vertices[i]).is_zero())
    }

    /// Indices of the facets active at vertex `i`.
    pub fn active_facets(&self, vertex: usize) -> Vec<usize> {
        let p = &self.vertices[vertex];
        (0..self.facets.len())
            .filter(|&k| self.facets[k].eval(p).is_zero())
            .collect()
    }

    /// True when `x` satisfies every inequality strictly.
    pub fn contains_interior(&self, x: &[f64]) -> bool {
        self.facets.iter().all(|f| f.eval_f64(x) > 0.0)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.facets.iter().all(|f| f.eval_f64(x) >= 0.0)
    }

    /// Axis-aligned bounding box `(lower, upper)` from the vertex list.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for (i, x) in v.iter().enumerate() {
                let x = crate::rational::to_f64(x);
                lo[i] = lo[i].min(x);
                hi[i] = hi[i].max(x);
            }
        }
        (lo, hi)
    }

    /// Translates the polytope by `t`: the result is `{x + t : x ∈ P}`.
    pub fn translate(&self, t: &[Rational]) -> Result<Polytope> {
        assert_eq!(t.len(), self.dim);
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let shift: Rational = f.v.iter().zip(t).map(|(&vi, ti)| ti * int(vi)).sum();
                Facet::new(f.v.clone(), &f.c - shift)
            })
            .collect();
        Polytope::new(self.dim, facets, self.name.clone())
    }

    /// Fan triangulation: each face is coned from its vertex centroid over a
    /// recursive triangulation of its own facets. Faces that are already
    /// simplices are kept whole. Output is sorted lexicographically.
    pub fn triangulate(&self) -> Vec<Simplex> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let on_facet: Vec<BTreeSet<usize>> = (0..self.facets.len())
            .map(|k| self.vertices_on_facet(k).collect())
            .collect();
        let mut simplices: Vec<Vec<Point>> = self.fan(&all, self.dim, &on_facet);
        for s in simplices.iter_mut() {
            s.sort();
        }
        simplices.sort();
        simplices
            .into_iter()
            .map(|vertices| Simplex { vertices })
            .collect()
    }

    fn fan(&self, face: &[usize], d: usize, on_facet: &[BTreeSet<usize>]) -> Vec<Vec<Point>> {
        if face.len() == d + 1 {
            return vec![face.iter().map(|&i| self.vertices[i].clone()).collect()];
        }
        let count = int(face.len() as i64);
        let centroid: Point = (0..self.dim)
            .map(|j| face.iter().map(|&i| &self.vertices[i][j]).sum::<Rational>() / &count)
            .collect();
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for set in on_facet {
            let sub: Vec<usize> = face.iter().copied().filter(|i| set.contains(i)).collect();
            if sub.len() < d || sub.len() == face.len() {
                continue;
            }
            let pts: Vec<&Point> = sub.iter().map(|&i| &self.vertices[i]).collect();
            if affine_dimension(&pts) == d as isize - 1 {
                subfaces.insert(sub);
            }
        }
        let mut out = Vec::new();
        for sub in subfaces {
            for mut s in self.fan(&sub, d - 1, on_facet) {
                s.insert(0, centroid.clone());
                out.push(s);
            }
        }
        out
    }

    /// Exact barycenter `(∫_P x dx) / Vol(P)`.
    pub fn barycenter(&self) -> Point {
        let m = crate::moments::first_moments(self);
        let vol = &m[0];
        m[1..].iter().map(|mi| mi / vol).collect()
    }

    /// Vertices at which the local normal cone is not a unimodular lattice
    /// cone. Diagnostic only.
    pub fn delzant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, p) in self.vertices.iter().enumerate() {
            let active = self.active_facets(i);
            let label = format_point(p);
            if active.len() != self.dim {
                out.push(format!(
                    "vertex {label}: {} facets meet (expected {})",
                    active.len(),
                    self.dim
                ));
                continue;
            }
            let m: RMatrix = active.iter().map(|&k| self.facets[k].normal_rational()).collect();
            let det = exact::determinant(&m);
            if det.abs() != Rational::one() {
                out.push(format!(
                    "vertex {label}: normals have determinant {}",
                    format_rational(&det)
                ));
            }
        }
        out
    }

    pub fn check_fano_normalized(&self) -> FanoReport {
        let first = &self.facets[0].c;
        let constants_equal = self.facets.iter().all(|f| &f.c == first);
        let common_constant = constants_equal.then(|| first.clone());
        let constants_unit = constants_equal && first.is_one();
        let barycenter = self.barycenter();
        let barycenter_at_origin = barycenter.iter().all(Zero::is_zero);
        let mut messages = Vec::new();
        if !constants_equal {
            messages.push("facet constants c_k are not all equal".to_string());
        } else if !constants_unit {
            messages.push(format!(
                "c_k equal but ≠ 1 (c = {}); rescale for the Λ = 1 convention",
                format_rational(first)
            ));
        }
        if !barycenter_at_origin {
            messages.push(format!("barycenter {} is not the origin", format_point(&barycenter)));
        }
        FanoReport {
            constants_equal,
            common_constant,
            constants_unit,
            barycenter,
            barycenter_at_origin,
            delzant_violations: self.delzant_violations(),
            passed: constants_unit && barycenter_at_origin,
            messages,
        }
    }

    pub fn to_json(&self) -> Value {
        let facets: Vec<Value> = self
            .facets
            .iter()
            .map(|f| {
                let c = if f.c.denom().is_one() {
                    match i64::try_from(f.c.numer().clone()) {
                        Ok(v) => Value::from(v),
                        Err(_) => Value::from(format_rational(&f.c)),
                    }
                } else {
                    Value::from(format_rational(&f.c))
                };
                serde_json::json!({ "v": f.v, "c": c })
            })
            .collect();
        let mut doc = serde_json::Map::new();
        if let Some(n) = &self.name {
            doc.insert("name".into(), Value::from(n.clone()));
        }
        doc.insert("dimension".into(), Value::from(self.dim));
        doc.insert("facets".into(), Value::from(facets));
        Value::Object(doc)
    }
}

/// Result of [`Polytope::check_fano_normalized`].
#[derive(Clone, Debug, Serialize)]
pub struct FanoReport {
    pub constants_equal: bool,
    #[serde(serialize_with = "crate::serde_util::opt_rational")]
    pub common_constant: Option<Rational>,
    pub constants_unit: bool,
    #[serde(serialize_with = "crate::serde_util::rational_vec")]
    pub barycenter: Point,
    pub barycenter_at_origin: bool,
    pub delzant_violations: Vec<String>,
    pub passed: bool,
    pub messages: Vec<String>,
}

pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

#[derive(Deserialize)]
struct FacetDoc {
    v: Vec<i64>,
    c: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeDoc {
    #[serde(default)]
    name: Option<String>,
    dimension: usize,
    facets: Vec<FacetDoc>,
}

/// Parses the JSON polytope document
/// `{"name"?, "dimension", "facets": [{"v": [...], "c": number | "p/q"}]}`.
pub fn parse_polytope(text: &str) -> Result<Polytope> {
    let doc: PolytopeDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("polytope JSON: {e}")))?;
    let facets = doc
        .facets
        .into_iter()
        .map(|f| Ok(Facet::new(f.v, rational_from_json(&f.c)?)))
        .collect::<Result<Vec<_>>>()?;
    Polytope::new(doc.dimension, facets, doc.name)
}

pub(crate) fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a number or \"p/q\" string, got {other}"))),
    }
}

fn strictly_feasible(dim: usize, facets: &[Facet]) -> bool {
    let system = facets
        .iter()
        .map(|f| Constraint {
            coeffs: f.normal_rational(),
            constant: f.c.clone(),
            strict: true,
        })
        .collect();
    exact::fourier_motzkin_feasible(system, dim)
}

/// True if some nonzero `d` has `v_k · d ≥ 0` for every facet.
fn has_recession_direction(dim: usize, facets: &[Facet]) -> bool {
    let cone: Vec<Constraint> = facets
        .iter()
        .map(|f| Constraint {
            coeffs: f.normal_rational(),
            constant: Rational::zero(),
            strict: false,
        })
        .collect();
    (0..dim).any(|i| {
        [1, -1].into_iter().any(|sign| {
            let mut system = cone.clone();
            let mut coeffs = vec![Rational::zero(); dim];
            coeffs[i] = int(sign);
            system.push(Constraint {
                coeffs,
                constant: -Rational::one(),
                strict: false,
            });
            exact::fourier_motzkin_feasible(system, dim)
        })
    })
}

/// Brute force over all `n`-subsets of facets. Cost grows like
/// `C(m, n)` rational `n × n` solves for `m` facets.
fn enumerate_vertices(dim: usize, facets: &[Facet]) -> Vec<Point> {
    let mut found: BTreeSet<Point> = BTreeSet::new();
    let m = facets.len();
    let mut subset: Vec<usize> = (0..dim).collect();
    loop {
        let a: RMatrix = subset.iter().map(|&k| facets[k].normal_rational()).collect();
        let b: Vec<Rational> = subset.iter().map(|&k| -facets[k].c.clone()).collect();
        if let Some(x) = exact::solve(&a, &b) {
            if facets.iter().all(|f| !f.eval(&x).is_negative()) {
                found.insert(x);
            }
        }
        if !next_combination(&mut subset, m) {
            break;
        }
    }
    found.into_iter().collect()
}

pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Dimension of the affine hull of `pts` (`-1` for the empty set).
fn affine_dimension(pts: &[&Point]) -> isize {
    let Some(p0) = pts.first() else {
        return -1;
    };
    let diffs: RMatrix = pts[1..]
        .iter()
        .map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect())
        .collect();
    if diffs.is_empty() {
        return 0;
    }
    exact::rank(&diffs) as isize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::rational::ratio;

    fn pt(xs: &[i64]) -> Point {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn segment_from_json() {
        let p = parse_polytope(r#"{"dimension": 1, "facets": [{"v": [1], "c": 1}, {"v": [-1], "c": "1"}]}"#)
            .unwrap();
        assert_eq!(p.vertices(), &[pt(&[-1]), pt(&[1])]);
        let t = p.triangulate();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].volume(), int(2));
    }

    #[test]
    fn hexagon_has_six_vertices() {
        let doc = r#"{"name": "hex", "dimension": 2, "facets": [
            {"v": [1, 0], "c": 1}, {"v": [0, 1], "c": 1}, {"v": [-1, 0], "c": 1},
            {"v": [0, -1], "c": 1}, {"v": [-1, -1], "c": 1}, {"v": [1, 1], "c": 1}]}"#;
        let p = parse_polytope(doc).unwrap();
        let expected: BTreeSet<Point> = [[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]]
            .iter()
            .map(|v| pt(v))
            .collect();
        let got: BTreeSet<Point> = p.vertices().iter().cloned().collect();
        assert_eq!(got, expected);
        assert_eq!(p.name(), Some("hex"));
    }

    #[test]
    fn inconsistent_halfspaces_have_empty_interior() {
        let doc = r#"{"dimension": 2, "facets": [{"v": [1, 0], "c": 1}, {"v": [-1, 0], "c": -2}]}"#;
        assert!(matches!(parse_polytope(doc), Err(Error::EmptyInterior)));
        // x ≥ 1 and x ≤ 1: nonempty but flat.
        let flat = r#"{"dimension": 1, "facets": [{"v": [1], "c": -1}, {"v": [-1], "c": 1}]}"#;
        assert!(matches!(parse_polytope(flat), Err(Error::EmptyInterior)));
    }

    #[test]
    fn rejects_unbounded_and_non_primitive() {
        let strip = r#"{"dimension": 2, "facets": [{"v": [1, 0], "c": 1}, {"v": [-1, 0], "c": 1}, {"v": [0, 1], "c": 1}]}"#;
        assert!(matches!(parse_polytope(strip), Err(Error::Unbounded)));
        let bad = r#"{"dimension": 1, "facets": [{"v": [2], "c": 1}, {"v": [-1], "c": 1}]}"#;
        assert!(matches!(parse_polytope(bad), Err(Error::NonPrimitiveNormal { index: 0, .. })));
        let zero = r#"{"dimension": 1, "facets": [{"v": [0], "c": 1}, {"v": [-1], "c": 1}]}"#;
        assert!(matches!(parse_polytope(zero), Err(Error::NonPrimitiveNormal { .. })));
        let short = r#"{"dimension": 2, "facets": [{"v": [1], "c": 1}]}"#;
        assert!(matches!(parse_polytope(short), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(parse_polytope("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn rejects_redundant_facet() {
        let doc = r#"{"dimension": 1, "facets": [{"v": [1], "c": 1}, {"v": [-1], "c": 1}, {"v": [1], "c": 5}]}"#;
        assert!(matches!(parse_polytope(doc), Err(Error::RedundantFacet(2))));
    }

    #[test]
    fn preset_vertices() {
        let cp2 = presets::polytope("cp2").unwrap();
        assert_eq!(cp2.vertices(), &[pt(&[-1, -1]), pt(&[-1, 2]), pt(&[2, -1])]);
        let sq = presets::polytope("cp1xcp1").unwrap();
        assert_eq!(sq.vertices(), &[pt(&[-1, -1]), pt(&[-1, 1]), pt(&[1, -1]), pt(&[1, 1])]);
    }

    #[test]
    fn threefold_vertices_match_brute_force() {
        let p = presets::polytope("threefold").unwrap();
        // Independent count: every triple of facets whose unique intersection
        // point is feasible, counted once.
        let facets = p.facets();
        let mut pts = BTreeSet::new();
        for i in 0..facets.len() {
            for j in i + 1..facets.len() {
                for k in j + 1..facets.len() {
                    let a: RMatrix = [i, j, k].iter().map(|&t| facets[t].normal_rational()).collect();
                    let b: Vec<Rational> = [i, j, k].iter().map(|&t| -facets[t].c.clone()).collect();
                    if let Some(x) = exact::solve(&a, &b) {
                        if facets.iter().all(|f| f.eval(&x) >= Rational::zero()) {
                            pts.insert(x);
                        }
                    }
                }
            }
        }
        assert_eq!(pts.len(), 8);
        assert_eq!(p.vertices().len(), 8);
        for (i, v) in p.vertices().iter().enumerate() {
            assert!(facets.iter().all(|f| f.eval(v) >= Rational::zero()));
            assert!(p.active_facets(i).len() >= 3);
        }
        assert!(p.delzant_violations().is_empty());
    }

    #[test]
    fn triangulation_areas() {
        let sq = presets::polytope("cp1xcp1").unwrap();
        let t = sq.triangulate();
        assert_eq!(t.len(), 4);
        assert_eq!(t.iter().map(Simplex::volume).sum::<Rational>(), int(4));
        let hex = presets::polytope("dp6").unwrap();
        let t = hex.triangulate();
        assert_eq!(t.len(), 6);
        assert_eq!(t.iter().map(Simplex::volume).sum::<Rational>(), int(3));
        // deterministic
        assert_eq!(hex.triangulate(), t);
    }

    #[test]
    fn barycenters() {
        assert_eq!(presets::polytope("cp2").unwrap().barycenter(), pt(&[0, 0]));
        assert_eq!(presets::polytope("dp6").unwrap().barycenter(), pt(&[0, 0]));
        let tri = Polytope::new(
            2,
            vec![
                Facet::new(vec![1, 0], int(0)),
                Facet::new(vec![0, 1], int(0)),
                Facet::new(vec![-1, -1], int(1)),
            ],
            None,
        )
        .unwrap();
        assert_eq!(tri.barycenter(), vec![ratio(1, 3), ratio(1, 3)]);
    }

    #[test]
    fn fano_diagnostics() {
        let hex = presets::polytope("dp6").unwrap().check_fano_normalized();
        assert!(hex.passed && hex.constants_unit && hex.barycenter_at_origin);
        let big = Polytope::new(
            2,
            presets::polytope("cp1xcp1")
                .unwrap()
                .facets()
                .iter()
                .map(|f| Facet::new(f.v.clone(), int(2)))
                .collect(),
            None,
        )
        .unwrap()
        .check_fano_normalized();
        assert!(big.constants_equal && !big.constants_unit && !big.passed);
        assert!(big.messages[0].contains("≠ 1"));
        let shifted = presets::polytope("cp1").unwrap().translate(&[int(1)]).unwrap();
        assert_eq!(shifted.vertices(), &[pt(&[0]), pt(&[2])]);
        let r = shifted.check_fano_normalized();
        assert!(!r.barycenter_at_origin && !r.passed);
    }

    #[test]
    fn non_delzant_vertex_is_reported() {
        // Vertices (0,0), (2,0), (0,1): at (0,1) the normals have determinant -2.
        let p = Polytope::new(
            2,
            vec![
                Facet::new(vec![1, 0], int(0)),
                Facet::new(vec![0, 1], int(0)),
                Facet::new(vec![-1, -2], int(2)),
            ],
            None,
        );
        let p = p.unwrap();
        assert!(!p.delzant_violations().is_empty());
    }

    #[test]
    fn json_round_trip() {
        for name in presets::POLYTOPE_PRESETS {
            let p = presets::polytope(name).unwrap();
            let back = parse_polytope(&p.to_json().to_string()).unwrap();
            assert_eq!(back, p);
        }
        let p = Polytope::new(1, vec![Facet::new(vec![1], ratio(1, 2)), Facet::new(vec![-1], int(1))], None)
            .unwrap();
        assert_eq!(parse_polytope(&p.to_json().to_string()).unwrap(), p);
    }
}
