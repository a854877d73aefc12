//! Ehrhart quasi-polynomials of rational polytopes and weighted simplices.
//!
//! The counting function `r -> #(rP intersect Z^d)` of a bounded rational
//! polytope is a quasi-polynomial of degree `d` whose period divides the
//! least common multiple of the vertex-coordinate denominators. This module
//! recovers it by exact interpolation over the brute-force counts, and
//! provides the two independent cross-checks used throughout the test suite:
//! exact vertex enumeration and an exact volume by fan triangulation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashSet;

use crate::error::Error;
use crate::exactnum::Rational;
use crate::latcount::{count_polytope, count_simplex, HPolytope, WeightVector};
use crate::quasipoly::QuasiPolynomial;

/// Largest ambient dimension accepted by [`ehrhart_polytope`]; vertex
/// enumeration over row subsets is designed for desk-scale inputs only.
pub const MAX_POLYTOPE_DIMENSION: usize = 4;

/// The vertices of a bounded rational polytope, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    vertices: Vec<Vec<Rational>>,
}

impl VertexSet {
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Least common multiple of all coordinate denominators: the smallest
    /// `n >= 1` for which `nP` has integer vertices, and hence a period
    /// bound for the Ehrhart quasi-polynomial.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut acc = BigInt::one();
        for v in &self.vertices {
            for c in v {
                acc = acc.lcm(c.denom());
            }
        }
        acc.abs()
    }

    /// Dimension of the affine hull of the vertex set.
    pub fn affine_dimension(&self) -> usize {
        affine_dimension(&self.vertices)
    }
}

/// Enumerate the vertices of `{x : Ax <= b}` exactly.
///
/// Every subset of `d` independent rows is solved by rational elimination
/// and kept when feasible. Unboundedness is detected first through the
/// recession cone: a rank-deficient system has a lineality direction, and a
/// pointed cone is nontrivial iff some `d-1` independent rows admit a
/// feasible ray. Returns [`Error::UnboundedPolytope`] or
/// [`Error::EmptyPolytope`] accordingly.
pub fn vertices(p: &HPolytope) -> Result<VertexSet, Error> {
    let d = p.dimension();
    let rows: Vec<Vec<Rational>> = p
        .rows()
        .map(|(a, _)| a.iter().map(|&c| Rational::from_integer(c.into())).collect())
        .collect();
    let rhs: Vec<Rational> = p
        .rows()
        .map(|(_, b)| Rational::from_integer(b.into()))
        .collect();

    if rank(&rows) < d {
        return Err(Error::UnboundedPolytope);
    }
    for combo in combinations(rows.len(), d - 1) {
        let sub: Vec<Vec<Rational>> = combo.iter().map(|&i| rows[i].clone()).collect();
        if let Some(ray) = kernel_direction(&sub, d) {
            let neg: Vec<Rational> = ray.iter().map(|c| -c).collect();
            if is_recession_direction(&rows, &ray) || is_recession_direction(&rows, &neg) {
                return Err(Error::UnboundedPolytope);
            }
        }
    }

    let mut found: Vec<Vec<Rational>> = Vec::new();
    for combo in combinations(rows.len(), d) {
        let mat: Vec<Vec<Rational>> = combo.iter().map(|&i| rows[i].clone()).collect();
        let b: Vec<Rational> = combo.iter().map(|&i| rhs[i].clone()).collect();
        if let Some(x) = solve_square(mat, b) {
            let feasible = rows
                .iter()
                .zip(rhs.iter())
                .all(|(a, b)| dot(a, &x) <= *b);
            if feasible {
                found.push(x);
            }
        }
    }
    found.sort();
    found.dedup();
    if found.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    Ok(VertexSet { vertices: found })
}

/// The Ehrhart quasi-polynomial of the weighted simplex
/// `{x >= 0 : w . x <= 1}`: degree `m`, leading coefficient
/// `1/(m! w_1 ... w_m)`, period dividing `lcm(w)`.
pub fn lambda_w(w: &WeightVector) -> Result<QuasiPolynomial, Error> {
    let m = w.dimension();
    let period = w.lcm() as usize;
    let qp = QuasiPolynomial::interpolate(
        |t| Ok(BigInt::from(count_simplex(w, t))),
        m,
        period,
        0,
    )?;
    debug_assert_eq!(qp.degree(), m);
    Ok(qp)
}

/// The Ehrhart quasi-polynomial of a bounded rational polytope, interpolated
/// from brute-force dilate counts with the vertex-denominator lcm as the
/// period bound. `cap` guards each box scan.
pub fn ehrhart_polytope(p: &HPolytope, cap: u64) -> Result<QuasiPolynomial, Error> {
    let d = p.dimension();
    if d > MAX_POLYTOPE_DIMENSION {
        return Err(Error::UnsupportedDimension {
            dimension: d,
            max: MAX_POLYTOPE_DIMENSION,
        });
    }
    let vs = vertices(p)?;
    let period = vs
        .denominator_lcm()
        .to_usize()
        .ok_or(Error::EnumerationCapExceeded {
            required: u128::MAX,
            cap,
        })?;
    QuasiPolynomial::interpolate(
        |r| count_polytope(p, r as u64, cap).map(BigInt::from),
        d,
        period,
        0,
    )
}

/// Exact Euclidean volume of the polytope, by recursive fan triangulation
/// from a vertex: the polytope is the disjoint cone over the facets missing
/// the apex, facets triangulate the same way one dimension down, and each
/// final simplex contributes `|det| / d!`. Independent of the counting and
/// interpolation paths, which is the point: the Ehrhart leading coefficient
/// must reproduce this number. Lower-dimensional polytopes have volume zero.
pub fn volume(p: &HPolytope) -> Result<Rational, Error> {
    let vs = vertices(p)?;
    let d = p.dimension();
    if vs.affine_dimension() < d {
        return Ok(Rational::zero());
    }
    let all: Vec<usize> = (0..vs.len()).collect();
    let simplices = triangulate(p, vs.vertices(), &all, d);
    let mut total = Rational::zero();
    for simplex in simplices {
        let apex = &vs.vertices()[simplex[0]];
        let edges: Vec<Vec<Rational>> = simplex[1..]
            .iter()
            .map(|&i| {
                vs.vertices()[i]
                    .iter()
                    .zip(apex.iter())
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        total += determinant(edges).abs();
    }
    let mut factorial = BigInt::one();
    for k in 2..=d {
        factorial *= k;
    }
    Ok(total / Rational::from_integer(factorial))
}

/// Triangulate a `k`-dimensional face given by vertex indices: cone the
/// first vertex over the triangulations of the facets that miss it. Facets
/// of a face are cut out by the polytope's own rows, deduplicated by vertex
/// set.
fn triangulate(p: &HPolytope, verts: &[Vec<Rational>], face: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        debug_assert_eq!(face.len(), 1);
        return vec![face.to_vec()];
    }
    let apex = face[0];
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut simplices = Vec::new();
    for (a, b) in p.rows() {
        let b = Rational::from_integer(b.into());
        let a: Vec<Rational> = a.iter().map(|&c| Rational::from_integer(c.into())).collect();
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&i| dot(&a, &verts[i]) == b)
            .collect();
        if sub.is_empty() || sub.contains(&apex) || !seen.insert(sub.clone()) {
            continue;
        }
        let points: Vec<Vec<Rational>> = sub.iter().map(|&i| verts[i].clone()).collect();
        if affine_dimension(&points) != k - 1 {
            continue;
        }
        for mut simplex in triangulate(p, verts, &sub, k - 1) {
            simplex.push(apex);
            simplices.push(simplex);
        }
    }
    // Put the apex first so the volume code can difference against it.
    for s in &mut simplices {
        s.rotate_right(1);
    }
    simplices
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x.iter()).map(|(c, v)| c * v).sum()
}

fn is_recession_direction(rows: &[Vec<Rational>], v: &[Rational]) -> bool {
    rows.iter().all(|a| dot(a, v) <= Rational::zero())
}

/// All k-element index subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn walk(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for i in start..=n.saturating_sub(remaining) {
            current.push(i);
            walk(n, k, i + 1, current, out);
            current.pop();
        }
    }
    if k <= n {
        walk(n, k, 0, &mut current, &mut out);
    }
    out
}

/// Subtract `factor` times `pivot_row` from `row`, starting at column `from`.
fn eliminate(row: &mut [Rational], pivot_row: &[Rational], factor: &Rational, from: usize) {
    for (dst, src) in row[from..].iter_mut().zip(&pivot_row[from..]) {
        let delta = factor * src;
        *dst = &*dst - delta;
    }
}

/// Rank of a rational matrix by Gaussian elimination.
fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        let inv = pivot_row[col].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if !row[col].is_zero() {
                let factor = &row[col] / &inv;
                eliminate(row, &pivot_row, &factor, col);
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Solve a square rational system; `None` when singular.
fn solve_square(mat: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = mat.len();
    let mut m = mat;
    for (row, b) in m.iter_mut().zip(rhs) {
        row.push(b);
    }
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot);
        let pivot_row = m[k].clone();
        let inv = pivot_row[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            if !row[k].is_zero() {
                let factor = &row[k] / &inv;
                eliminate(row, &pivot_row, &factor, k);
            }
        }
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc -= &m[i][j] * &x[j];
        }
        x[i] = acc / &m[i][i];
    }
    Some(x)
}

/// One kernel vector of a row set of rank exactly `d - 1`; `None` when the
/// rank differs (no unique ray direction).
fn kernel_direction(rows: &[Vec<Rational>], d: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..d {
        let Some(pivot) = (r..m.len()).find(|&row| !m[row][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let pivot_row = m[r].clone();
        let inv = pivot_row[col].clone();
        for (row, data) in m.iter_mut().enumerate() {
            if row != r && !data[col].is_zero() {
                let factor = &data[col] / &inv;
                eliminate(data, &pivot_row, &factor, 0);
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if r != d.saturating_sub(1) {
        return None;
    }
    let free_col = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![Rational::zero(); d];
    v[free_col] = Rational::one();
    for (row, &col) in pivot_cols.iter().enumerate() {
        v[col] = -&m[row][free_col] / &m[row][col];
    }
    Some(v)
}

fn affine_dimension(points: &[Vec<Rational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

/// Determinant by elimination with sign tracking.
fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Rational::zero();
        };
        if pivot != k {
            m.swap(k, pivot);
            det = -det;
        }
        det *= &m[k][k];
        let pivot_row = m[k].clone();
        let inv = pivot_row[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            if !row[k].is_zero() {
                let factor = &row[k] / &inv;
                eliminate(row, &pivot_row, &factor, k);
            }
        }
    }
    det
}
