//! Regular subdivisions of a support set and the tropical curves dual to them.
//!
//! The subdivision induced by a coefficient vector `c` is read off the lower
//! hull of the lifted points `(r_i, s_i, c_i)`. Cells keep every support point
//! that sits on their lower face, so a flat lift of four coplanar points is one
//! quadrilateral cell rather than an arbitrary pair of triangles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::primitives::{min_profile, orient2d, plane, ProjPoint, Rational, SupportSet};

/// A regular subdivision of `conv(A)`, as index sets into the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularSubdivision {
    n: usize,
    cells: Vec<Vec<usize>>,
}

impl RegularSubdivision {
    /// Cells sorted lexicographically; each cell's indices ascending.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn support_len(&self) -> usize {
        self.n
    }

    /// Indices appearing in some cell.
    pub fn used(&self) -> BTreeSet<usize> {
        self.cells.iter().flatten().copied().collect()
    }

    pub fn from_cells(n: usize, mut cells: Vec<Vec<usize>>) -> Self {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.sort();
        cells.dedup();
        RegularSubdivision { n, cells }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MaximalityMode {
    /// Every cell is a triangle and every support point is a corner.
    #[default]
    Strict,
    /// Every cell is a triangle; points lifted above the hull may be skipped.
    Lenient,
}

fn check_dim(a: &SupportSet, c: &ProjPoint) -> Result<()> {
    if c.dim() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: c.dim() });
    }
    Ok(())
}

/// Lower faces of `conv{(r_i, s_i, c_i)}` projected to the plane.
pub fn regular_subdivision(a: &SupportSet, c: &ProjPoint) -> Result<RegularSubdivision> {
    check_dim(a, c)?;
    let n = a.len();
    let h = c.coords();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (pi, pj, pk) = (a.planar(i), a.planar(j), a.planar(k));
                if orient2d(pi, pj, pk) == 0 {
                    continue;
                }
                if faces.iter().any(|f| f.contains(&i) && f.contains(&j) && f.contains(&k)) {
                    continue;
                }
                let height = lifting_plane(pi, &h[i], pj, &h[j], pk, &h[k]);
                let mut face = Vec::new();
                let mut lower = true;
                for l in 0..n {
                    let z = height(a.planar(l));
                    match h[l].cmp(&z) {
                        std::cmp::Ordering::Less => {
                            lower = false;
                            break;
                        }
                        std::cmp::Ordering::Equal => face.push(l),
                        std::cmp::Ordering::Greater => {}
                    }
                }
                if lower {
                    faces.insert(face);
                }
            }
        }
    }
    Ok(RegularSubdivision { n, cells: faces.into_iter().collect() })
}

/// The affine function of `(r, s)` interpolating three lifted points.
fn lifting_plane(
    p: (i64, i64),
    hp: &Rational,
    q: (i64, i64),
    hq: &Rational,
    r: (i64, i64),
    hr: &Rational,
) -> impl Fn((i64, i64)) -> Rational {
    let big = |v: i64| BigInt::from(v);
    let (dr1, ds1, dc1) = (q.0 - p.0, q.1 - p.1, hq - hp);
    let (dr2, ds2, dc2) = (r.0 - p.0, r.1 - p.1, hr - hp);
    let det = Rational::from_integer(big(dr1 * ds2 - ds1 * dr2));
    let alpha = (&dc1 * big(ds2) - &dc2 * big(ds1)) / &det;
    let beta = (&dc2 * big(dr1) - &dc1 * big(dr2)) / &det;
    let base = hp.clone();
    move |(x, y)| &base + &alpha * big(x - p.0) + &beta * big(y - p.1)
}

pub fn is_maximal(s: &RegularSubdivision, mode: MaximalityMode) -> bool {
    let triangles = s.cells.iter().all(|c| c.len() == 3);
    match mode {
        MaximalityMode::Lenient => triangles,
        MaximalityMode::Strict => triangles && s.used().len() == s.n,
    }
}

/// `c` lies in the (relatively open) secondary cone of `s`.
pub fn secondary_cone_contains(a: &SupportSet, s: &RegularSubdivision, c: &ProjPoint) -> Result<bool> {
    Ok(regular_subdivision(a, c)? == *s)
}

/// The minimum of `c_i + a_i . P` is attained at least twice.
pub fn curve_contains(a: &SupportSet, c: &ProjPoint, p: &ProjPoint) -> Result<bool> {
    check_dim(a, c)?;
    Ok(min_profile(&a.terms(c, p))?.multiplicity() >= 2)
}

/// Solves `c_i + a_i.P = c_j + a_j.P = c_k + a_k.P` in the z = 0 chart.
pub(crate) fn equalizing_point(a: &SupportSet, c: &[Rational], cell: [usize; 3]) -> Option<ProjPoint> {
    let [i, j, k] = cell;
    let (pi, pj, pk) = (a.planar(i), a.planar(j), a.planar(k));
    if orient2d(pi, pj, pk) == 0 {
        return None;
    }
    let big = |v: i64| BigInt::from(v);
    // (r_i - r_j) x + (s_i - s_j) y = c_j - c_i, same for k
    let (a1, b1, e1) = (pi.0 - pj.0, pi.1 - pj.1, &c[j] - &c[i]);
    let (a2, b2, e2) = (pi.0 - pk.0, pi.1 - pk.1, &c[k] - &c[i]);
    let det = Rational::from_integer(big(a1 * b2 - b1 * a2));
    let x = (&e1 * big(b2) - &e2 * big(b1)) / &det;
    let y = (&e2 * big(a1) - &e1 * big(a2)) / &det;
    Some(ProjPoint::chart(x, y))
}

/// The point of TP^2 dual to the triangle `cell` of the subdivision `Δ(c)`.
pub fn cell_dual_point(a: &SupportSet, c: &ProjPoint, cell: [usize; 3]) -> Result<ProjPoint> {
    check_dim(a, c)?;
    let p = equalizing_point(a, c.coords(), cell).ok_or(Error::DegenerateCell(cell))?;
    let terms = a.terms(c, &p);
    let value = &terms[cell[0]];
    let strict = terms.iter().enumerate().all(|(l, t)| cell.contains(&l) || t > value);
    if !strict {
        return Err(Error::NotAFace(cell));
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveVertex {
    pub point: ProjPoint,
    /// Index into the subdivision's cells.
    pub cell: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEdge {
    pub from: usize,
    pub to: usize,
    /// Support indices on the dual interior edge of the subdivision.
    pub dual: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRay {
    pub from: usize,
    /// Primitive integer direction `(dx, dy)` in the z = 0 chart.
    pub direction: (i64, i64),
    /// Support indices on the dual boundary edge of the subdivision.
    pub dual: Vec<usize>,
}

/// The tropical curve `T(F_c)`, embedded in the z = 0 chart of TP^2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveGraph {
    pub subdivision: RegularSubdivision,
    pub vertices: Vec<CurveVertex>,
    pub edges: Vec<CurveEdge>,
    pub rays: Vec<CurveRay>,
}

pub fn dual_curve(a: &SupportSet, c: &ProjPoint) -> Result<CurveGraph> {
    let subdivision = regular_subdivision(a, c)?;
    let mut vertices = Vec::new();
    // 1-faces keyed by the support points they carry, with (cell, inward normal)
    let mut faces: BTreeMap<Vec<usize>, Vec<(usize, (i64, i64))>> = BTreeMap::new();
    for (ci, cell) in subdivision.cells().iter().enumerate() {
        let pts: Vec<_> = cell.iter().map(|&i| a.planar(i)).collect();
        let hull = plane::hull(&pts);
        let corner = |p: (i64, i64)| cell[pts.iter().position(|&q| q == p).unwrap()];
        let tri = [corner(hull[0]), corner(hull[1]), corner(hull[2])];
        let point = equalizing_point(a, c.coords(), tri).expect("hull corners are not collinear");
        vertices.push(CurveVertex { point, cell: ci });
        for e in 0..hull.len() {
            let (u, v) = (hull[e], hull[(e + 1) % hull.len()]);
            let mut on: Vec<usize> = cell.iter().copied().filter(|&i| plane::on_segment(u, v, a.planar(i))).collect();
            on.sort_unstable();
            let (dx, dy) = (v.0 - u.0, v.1 - u.1);
            let g = dx.gcd(&dy);
            faces.entry(on).or_default().push((ci, (-dy / g, dx / g)));
        }
    }
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for (dual, owners) in faces {
        match owners.as_slice() {
            [(from, direction)] => rays.push(CurveRay { from: *from, direction: *direction, dual }),
            [(from, _), (to, _)] => edges.push(CurveEdge { from: *from, to: *to, dual }),
            _ => unreachable!("a 1-face borders at most two cells"),
        }
    }
    Ok(CurveGraph { subdivision, vertices, edges, rays })
}

impl CurveGraph {
    /// Point at parameter `t` along a ray, in the z = 0 chart.
    pub fn ray_point(&self, ray: &CurveRay, t: &Rational) -> ProjPoint {
        let o = &self.vertices[ray.from].point;
        let (dx, dy) = ray.direction;
        ProjPoint::chart(o.get(0) + t * BigInt::from(dx), o.get(1) + t * BigInt::from(dy))
    }

    /// Point at parameter `t ∈ [0, 1]` along a bounded edge.
    pub fn edge_point(&self, edge: &CurveEdge, t: &Rational) -> ProjPoint {
        let p = &self.vertices[edge.from].point;
        let q = &self.vertices[edge.to].point;
        let lerp = |i: usize| p.get(i) + t * (q.get(i) - p.get(i));
        ProjPoint::chart(lerp(0), lerp(1))
    }

    pub fn is_connected(&self) -> bool {
        let m = self.vertices.len();
        if m == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        (0..m).all(|v| find(&mut parent, v) == root)
    }
}
