//! Small dense linear algebra over the rationals.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type RMatrix = Vec<Vec<Rational>>;

/// Row-reduces `m` in place to reduced row echelon form and returns the pivot
/// columns.
pub fn rref(m: &mut RMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RMatrix) -> usize {
    let mut copy = m.clone();
    rref(&mut copy).len()
}

/// Unique solution of the square system `a x = b`, or `None` if `a` is
/// singular.
pub fn solve(a: &RMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: RMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn determinant(a: &RMatrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let delta = &f * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    det
}

pub fn inverse(a: &RMatrix) -> Option<RMatrix> {
    let n = a.len();
    let mut aug: RMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// A nonzero vector spanning the kernel of `a` when the kernel is
/// one-dimensional.
pub fn null_vector(a: &RMatrix, ncols: usize) -> Option<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    if pivots.len() + 1 != ncols {
        return None;
    }
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); ncols];
    v[free] = Rational::one();
    for (row, &p) in pivots.iter().enumerate() {
        v[p] = -m[row][free].clone();
    }
    Some(v)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Linear constraint `coeffs · x + constant ≥ 0` (or `> 0` when strict).
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
    pub strict: bool,
}

/// Decides feasibility of a system of linear inequalities by Fourier-Motzkin
/// elimination. Exponential in the worst case; intended for the handful of
/// facets that moment polytopes carry.
pub fn fourier_motzkin_feasible(mut system: Vec<Constraint>, nvars: usize) -> bool {
    for var in 0..nvars {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for c in system {
            if c.coeffs[var].is_positive() {
                pos.push(c);
            } else if c.coeffs[var].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                // p: a x_v + ... ≥ 0 with a > 0; q: b x_v + ... ≥ 0 with b < 0.
                let a = &p.coeffs[var];
                let b = -&q.coeffs[var];
                let coeffs: Vec<Rational> = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(pc, qc)| pc * &b + qc * a)
                    .collect();
                let constant = &p.constant * &b + &q.constant * a;
                rest.push(normalize(Constraint {
                    coeffs,
                    constant,
                    strict: p.strict || q.strict,
                }));
            }
        }
        rest.sort_by(|x, y| {
            x.coeffs
                .cmp(&y.coeffs)
                .then(x.constant.cmp(&y.constant))
                .then(x.strict.cmp(&y.strict))
        });
        rest.dedup_by(|x, y| x.coeffs == y.coeffs && x.constant == y.constant && x.strict == y.strict);
        system = rest;
    }
    system.iter().all(|c| {
        if c.strict {
            c.constant.is_positive()
        } else {
            !c.constant.is_negative()
        }
    })
}

fn normalize(mut c: Constraint) -> Constraint {
    let scale = c
        .coeffs
        .iter()
        .chain(std::iter::once(&c.constant))
        .map(|v| v.abs())
        .filter(|v| !v.is_zero())
        .max();
    if let Some(s) = scale {
        let inv = s.recip();
        for v in c.coeffs.iter_mut() {
            *v *= &inv;
        }
        c.constant *= &inv;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> RMatrix {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn solves_and_inverts() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], ratio(3, 5));
        assert_eq!(determinant(&a), int(5));
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[int(1), int(1)]).is_none());
    }

    #[test]
    fn kernel_vector() {
        let a = m(&[&[1, 1, 0], &[0, 1, -1]]);
        let v = null_vector(&a, 3).unwrap();
        assert!(a.iter().all(|row| dot(row, &v).is_zero()));
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn fourier_motzkin_detects_strict_infeasibility() {
        let c = |a: &[i64], b: i64, strict| Constraint {
            coeffs: a.iter().map(|&v| int(v)).collect(),
            constant: int(b),
            strict,
        };
        // x ≥ 1, x ≤ 1: feasible, but not strictly.
        let weak = vec![c(&[1], -1, false), c(&[-1], 1, false)];
        assert!(fourier_motzkin_feasible(weak.clone(), 1));
        let strict: Vec<_> = weak.into_iter().map(|mut k| {
            k.strict = true;
            k
        }).collect();
        assert!(!fourier_motzkin_feasible(strict, 1));
        // triangle x ≥ 0, y ≥ 0, x + y < 1
        let tri = vec![c(&[1, 0], 0, true), c(&[0, 1], 0, true), c(&[-1, -1], 1, true)];
        assert!(fourier_motzkin_feasible(tri, 2));
    }
}
