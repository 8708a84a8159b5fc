//! Fixed loci of linear pencils.
//!
//! A point P lies on every curve `c + A` with `c` on a line L exactly when the
//! translated line `Γ = L + A·P` (coordinate i shifted by `a_i·P`) stays inside
//! `Π_2`, the set where the minimum coordinate is attained at least twice.
//! Everything here reduces to walking the finitely many vertices, edges and
//! rays of a tree and tracking how the minimum of piecewise-linear coordinates
//! changes along them.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::primitives::{min_profile, rat, ProjPoint, Rational, SupportSet};
use crate::tree::{EmbeddedLine, LeafSet, LinePoint};

/// `Γ = L + A·P`.
pub fn shifted_line(line: &EmbeddedLine, a: &SupportSet, p: &ProjPoint) -> Result<EmbeddedLine> {
    if line.n() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: line.n() });
    }
    if p.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: p.dim() });
    }
    Ok(line.translate(&a.dots(p)))
}

/// Minimum and its multiplicity over the coordinates selected by `keep`.
fn restricted_min(q: &ProjPoint, keep: impl Fn(usize) -> bool) -> (Rational, usize) {
    let vals: Vec<Rational> = (0..q.dim()).filter(|&m| keep(m)).map(|m| q.get(m).clone()).collect();
    let prof = min_profile(&vals).expect("both sides of a split are nonempty");
    let k = prof.multiplicity();
    (prof.value, k)
}

/// Smallest number of minimal coordinates at any point of the line, i.e. the
/// largest t with Γ ⊂ Π_t.
pub fn skeleton_level(g: &EmbeddedLine) -> usize {
    let topo = g.topology();
    let n = g.n();
    let mut level = n;
    for v in 0..topo.node_count() {
        level = level.min(min_profile(g.coords(v).coords()).unwrap().multiplicity());
    }
    for (e, &(a, _)) in topo.edges().iter().enumerate() {
        let q = g.coords(a);
        let side = topo.edge_side(e);
        let len = &g.lengths()[e];
        let (mu1, k1) = restricted_min(q, |m| side.contains(m));
        let (mu0, k0) = restricted_min(q, |m| !side.contains(m));
        // the far-side coordinates grow with t; they stay minimal until t*
        let t_star = mu0 - mu1;
        if t_star.is_positive() {
            level = level.min(k1);
        }
        if t_star < *len {
            level = level.min(k0);
        }
    }
    for k in 0..n {
        let q = g.leaf_vertex(k);
        let (mu0, k0) = restricted_min(q, |m| m != k);
        level = level.min(if *q.get(k) < mu0 { 1 } else { k0 });
    }
    level
}

/// Whether every curve of the pencil passes through `p`.
pub fn is_fixed(line: &EmbeddedLine, a: &SupportSet, p: &ProjPoint) -> Result<bool> {
    Ok(skeleton_level(&shifted_line(line, a, p)?) >= 2)
}

/// `x·X + y·Y + c` in the affine chart `P = (X, Y, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Affine {
    pub x: i64,
    pub y: i64,
    pub c: Rational,
}

impl Affine {
    /// The term `v_m + a_m·P` as a function of P.
    fn term(a: &SupportSet, v: &ProjPoint, m: usize) -> Affine {
        let (r, s) = a.planar(m);
        Affine { x: r, y: s, c: v.get(m).clone() }
    }

    fn minus(&self, other: &Affine) -> Affine {
        Affine { x: self.x - other.x, y: self.y - other.y, c: &self.c - &other.c }
    }

    pub fn eval(&self, px: &Rational, py: &Rational) -> Rational {
        px * rat(self.x) + py * rat(self.y) + &self.c
    }

    pub fn eval_at(&self, p: &ProjPoint) -> Rational {
        self.eval(p.get(0), p.get(1))
    }

    fn is_constant(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

/// Where a cell's witness point `c` sits on L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Vertex(usize),
    /// `c` lies on this edge at parameter `t = t_form(P)` from its first endpoint.
    Edge {
        edge: usize,
        t_form: Affine,
    },
}

/// The solution set of a cell, in TP^2. Directions are primitive integer
/// vectors in the `(X, Y)` chart.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CellGeometry {
    Point(ProjPoint),
    Segment(ProjPoint, ProjPoint),
    Ray { from: ProjPoint, direction: (i64, i64) },
    Line { through: ProjPoint, direction: (i64, i64) },
}

/// A closed polyhedral piece of the fixed locus: all P with `equalities == 0`
/// and `inequalities >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocusCell {
    pub witness: Witness,
    pub indices: Vec<usize>,
    pub equalities: Vec<Affine>,
    pub inequalities: Vec<Affine>,
    pub geometry: CellGeometry,
}

impl FixedLocusCell {
    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.equalities.iter().all(|f| f.eval_at(p).is_zero())
            && self.inequalities.iter().all(|f| !f.eval_at(p).is_negative())
    }
}

fn primitive(x: i64, y: i64) -> (i64, i64) {
    let g = x.gcd(&y);
    (x / g, y / g)
}

/// Exact feasibility in the plane. At least one equality must be non-constant.
fn solve(eqs: &[Affine], ineqs: &[Affine]) -> Option<CellGeometry> {
    let chart = |x: Rational, y: Rational| ProjPoint::chart(x, y);
    if eqs.iter().any(|e| e.is_constant() && !e.c.is_zero()) {
        return None;
    }
    let first = eqs.iter().find(|e| !e.is_constant()).expect("cell has a non-constant equality");
    let det = |e: &Affine| first.x as i128 * e.y as i128 - first.y as i128 * e.x as i128;
    if let Some(second) = eqs.iter().find(|e| det(e) != 0) {
        // Cramer on  first.x X + first.y Y = -first.c,  second.x X + second.y Y = -second.c
        let d = rat(det(second) as i64);
        let px = (-&first.c * rat(second.y) + &second.c * rat(first.y)) / &d;
        let py = (-&second.c * rat(first.x) + &first.c * rat(second.x)) / &d;
        let ok =
            eqs.iter().all(|e| e.eval(&px, &py).is_zero()) && ineqs.iter().all(|f| !f.eval(&px, &py).is_negative());
        return ok.then(|| CellGeometry::Point(chart(px, py)));
    }
    // rank one: the line through p0 with direction d
    let (p0x, p0y) = if first.x != 0 { (-&first.c / rat(first.x), rat(0)) } else { (rat(0), -&first.c / rat(first.y)) };
    if eqs.iter().any(|e| !e.eval(&p0x, &p0y).is_zero()) {
        return None;
    }
    let dir = primitive(-first.y, first.x);
    let at = |s: &Rational| chart(&p0x + s * rat(dir.0), &p0y + s * rat(dir.1));
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for f in ineqs {
        // f(p0 + s d) = base + slope s >= 0
        let base = f.eval(&p0x, &p0y);
        let slope = f.x * dir.0 + f.y * dir.1;
        if slope == 0 {
            if base.is_negative() {
                return None;
            }
            continue;
        }
        let bound = -base / rat(slope);
        if slope > 0 {
            if lo.as_ref().is_none_or(|l| bound > *l) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|h| bound < *h) {
            hi = Some(bound);
        }
    }
    Some(match (lo, hi) {
        (Some(l), Some(h)) if l > h => return None,
        (Some(l), Some(h)) if l == h => CellGeometry::Point(at(&l)),
        (Some(l), Some(h)) => {
            let (u, v) = (at(&l), at(&h));
            if u <= v {
                CellGeometry::Segment(u, v)
            } else {
                CellGeometry::Segment(v, u)
            }
        }
        (Some(l), None) => CellGeometry::Ray { from: at(&l), direction: dir },
        (None, Some(h)) => CellGeometry::Ray { from: at(&h), direction: (-dir.0, -dir.1) },
        (None, None) => CellGeometry::Line { through: at(&rat(0)), direction: dir },
    })
}

/// Constraints saying the terms in `tied` agree and are no larger than the
/// terms in `others`.
fn tie_constraints(
    terms: &[Affine],
    tied: &[usize],
    others: impl Iterator<Item = usize>,
) -> (Vec<Affine>, Vec<Affine>) {
    let lead = &terms[tied[0]];
    let eqs = tied[1..].iter().map(|&m| terms[m].minus(lead)).collect();
    let ineqs = others.filter(|m| !tied.contains(m)).map(|m| terms[m].minus(lead)).collect();
    (eqs, ineqs)
}

/// The fixed locus of the pencil `{c + A : c ∈ L}` as a list of closed cells.
///
/// A point P is fixed iff some `c ∈ L` has its minimum term attained either by
/// three leaves in three different components of `L \ {c}`, or by two pairs
/// lying in two different components. Only vertices and interiors of bounded
/// edges can separate enough leaves, so rays never contribute. Repeated
/// zero-dimensional cells are dropped.
pub fn fixed_locus(line: &EmbeddedLine, a: &SupportSet) -> Result<Vec<FixedLocusCell>> {
    let n = line.n();
    if n != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: n });
    }
    let topo = line.topology();
    let mut cells = Vec::new();
    for v in 0..topo.node_count() {
        let q = line.coords(v);
        let terms: Vec<Affine> = (0..n).map(|m| Affine::term(a, q, m)).collect();
        let mut branch = vec![0; n];
        for (b, s) in topo.branches(v).into_iter().enumerate() {
            for k in s.iter() {
                branch[k] = b;
            }
        }
        let mut push = |tied: Vec<usize>| {
            let (eqs, ineqs) = tie_constraints(&terms, &tied, 0..n);
            if let Some(geometry) = solve(&eqs, &ineqs) {
                cells.push(FixedLocusCell {
                    witness: Witness::Vertex(v),
                    indices: tied,
                    equalities: eqs,
                    inequalities: ineqs,
                    geometry,
                });
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if branch[i] != branch[j] && branch[j] != branch[k] && branch[i] != branch[k] {
                        push(vec![i, j, k]);
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if branch[i] != branch[j] {
                    continue;
                }
                for k in i + 1..n {
                    for l in k + 1..n {
                        if k != j && l != j && branch[k] == branch[l] && branch[k] != branch[i] {
                            let mut tied = vec![i, j, k, l];
                            tied.sort();
                            push(tied);
                        }
                    }
                }
            }
        }
    }
    for (e, &(start, _)) in topo.edges().iter().enumerate() {
        let q = line.coords(start);
        let terms: Vec<Affine> = (0..n).map(|m| Affine::term(a, q, m)).collect();
        let far: Vec<usize> = topo.edge_side(e).iter().collect();
        let near: Vec<usize> = topo.edge_side(e).complement(n).iter().collect();
        let len = &line.lengths()[e];
        for (x, &i) in far.iter().enumerate() {
            for &j in &far[x + 1..] {
                for (y, &k) in near.iter().enumerate() {
                    for &l in &near[y + 1..] {
                        let (mut eqs, mut ineqs) = tie_constraints(&terms, &[i, j], far.iter().copied());
                        let (e2, i2) = tie_constraints(&terms, &[k, l], near.iter().copied());
                        eqs.extend(e2);
                        ineqs.extend(i2);
                        // t(P) = T_k - T_i must lie in [0, len]
                        let t_form = terms[k].minus(&terms[i]);
                        let upper = Affine { x: -t_form.x, y: -t_form.y, c: len - &t_form.c };
                        ineqs.push(t_form.clone());
                        ineqs.push(upper);
                        if let Some(geometry) = solve(&eqs, &ineqs) {
                            let mut indices = vec![i, j, k, l];
                            indices.sort();
                            cells.push(FixedLocusCell {
                                witness: Witness::Edge { edge: e, t_form },
                                indices,
                                equalities: eqs,
                                inequalities: ineqs,
                                geometry,
                            });
                        }
                    }
                }
            }
        }
    }
    let mut seen_points = BTreeSet::new();
    cells.retain(|cell| match &cell.geometry {
        CellGeometry::Point(p) => seen_points.insert(p.clone()),
        _ => true,
    });
    Ok(cells)
}

/// Whether `p` lies in one of the cells.
pub fn locus_contains(cells: &[FixedLocusCell], p: &ProjPoint) -> bool {
    cells.iter().any(|c| c.contains(p))
}

/// An interval of a line parameter, `None` meaning unbounded.
type Interval = (Option<Rational>, Option<Rational>);

/// A line `nx X + ny Y + c = 0` with primitive normal, parameterized by the
/// dot product with the direction `(-ny, nx)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct LineKey {
    nx: i64,
    ny: i64,
    c: Rational,
}

impl LineKey {
    fn through(p: &ProjPoint, dir: (i64, i64)) -> LineKey {
        let (mut nx, mut ny) = (dir.1, -dir.0);
        if nx < 0 || (nx == 0 && ny < 0) {
            nx = -nx;
            ny = -ny;
        }
        let c = -(p.get(0) * rat(nx) + p.get(1) * rat(ny));
        LineKey { nx, ny, c }
    }

    fn dir(&self) -> (i64, i64) {
        (-self.ny, self.nx)
    }

    fn param(&self, p: &ProjPoint) -> Rational {
        let d = self.dir();
        p.get(0) * rat(d.0) + p.get(1) * rat(d.1)
    }

    fn point(&self, s: &Rational) -> ProjPoint {
        let d = self.dir();
        let norm = rat(self.nx * self.nx + self.ny * self.ny);
        let x = (s * rat(d.0) - &self.c * rat(self.nx)) / &norm;
        let y = (s * rat(d.1) - &self.c * rat(self.ny)) / &norm;
        ProjPoint::chart(x, y)
    }

    fn holds(&self, p: &ProjPoint) -> bool {
        (p.get(0) * rat(self.nx) + p.get(1) * rat(self.ny) + &self.c).is_zero()
    }
}

fn within(s: &Rational, iv: &Interval) -> bool {
    iv.0.as_ref().is_none_or(|l| l <= s) && iv.1.as_ref().is_none_or(|h| s <= h)
}

/// The union of cell geometries, with overlapping collinear pieces merged and
/// points lying on one-dimensional pieces absorbed. Sorted.
pub fn locus_union(cells: &[FixedLocusCell]) -> Vec<CellGeometry> {
    let mut lines: BTreeMap<LineKey, Vec<Interval>> = BTreeMap::new();
    let mut points = BTreeSet::new();
    for cell in cells {
        match &cell.geometry {
            CellGeometry::Point(p) => {
                points.insert(p.clone());
            }
            CellGeometry::Segment(u, v) => {
                let key = LineKey::through(u, primitive_between(u, v));
                let (s, t) = (key.param(u), key.param(v));
                let iv = if s <= t { (Some(s), Some(t)) } else { (Some(t), Some(s)) };
                lines.entry(key).or_default().push(iv);
            }
            CellGeometry::Ray { from, direction } => {
                let key = LineKey::through(from, *direction);
                let s = key.param(from);
                let forward = key.dir() == *direction;
                let iv = if forward { (Some(s), None) } else { (None, Some(s)) };
                lines.entry(key).or_default().push(iv);
            }
            CellGeometry::Line { through, direction } => {
                lines.entry(LineKey::through(through, *direction)).or_default().push((None, None));
            }
        }
    }
    let mut out = Vec::new();
    let mut pieces: Vec<(LineKey, Interval)> = Vec::new();
    for (key, mut ivs) in lines {
        // None sorts first, which is right for lower bounds
        ivs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<Interval> = Vec::new();
        for iv in ivs {
            if let Some(last) = merged.last_mut() {
                let touches = match (&last.1, &iv.0) {
                    (None, _) | (_, None) => true,
                    (Some(h), Some(l)) => l <= h,
                };
                if touches {
                    last.1 = match (&last.1, &iv.1) {
                        (Some(x), Some(y)) => Some(x.max(y).clone()),
                        _ => None,
                    };
                    continue;
                }
            }
            merged.push(iv);
        }
        for iv in merged {
            pieces.push((key.clone(), iv));
        }
    }
    for p in points {
        if !pieces.iter().any(|(k, iv)| k.holds(&p) && within(&k.param(&p), iv)) {
            out.push(CellGeometry::Point(p));
        }
    }
    for (key, iv) in pieces {
        let d = key.dir();
        out.push(match iv {
            (Some(l), Some(h)) if l == h => CellGeometry::Point(key.point(&l)),
            (Some(l), Some(h)) => CellGeometry::Segment(key.point(&l), key.point(&h)),
            (Some(l), None) => CellGeometry::Ray { from: key.point(&l), direction: d },
            (None, Some(h)) => CellGeometry::Ray { from: key.point(&h), direction: (-d.0, -d.1) },
            (None, None) => CellGeometry::Line { through: key.point(&rat(0)), direction: d },
        });
    }
    out.sort();
    out
}

fn primitive_between(u: &ProjPoint, v: &ProjPoint) -> (i64, i64) {
    // scale the rational difference to a primitive integer vector
    let dx = v.get(0) - u.get(0);
    let dy = v.get(1) - u.get(1);
    let den = dx.denom().lcm(dy.denom());
    let ix = (&dx * Rational::from_integer(den.clone())).to_integer();
    let iy = (&dy * Rational::from_integer(den)).to_integer();
    let g = ix.gcd(&iy);
    let to_i64 = |b: num_bigint::BigInt| i64::try_from(b / &g).expect("direction fits in i64");
    (to_i64(ix.clone()), to_i64(iy.clone()))
}

/// The subset of a line on which all coordinates in `I` are minimal, as a
/// union of closed pieces. Intervals that reduce to an endpoint are recorded
/// through the vertex instead.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiSet {
    pub vertices: BTreeSet<usize>,
    /// Edge index to a closed parameter interval `[lo, hi]`.
    pub edges: BTreeMap<usize, (Rational, Rational)>,
    /// Leaf to `[lo, hi]` along its ray (`None` = unbounded).
    pub rays: BTreeMap<usize, (Rational, Option<Rational>)>,
}

impl PiSet {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty() && self.rays.is_empty()
    }

    fn add_edge(&mut self, g: &EmbeddedLine, e: usize, lo: Rational, hi: Rational) {
        let len = &g.lengths()[e];
        if lo > hi {
            return;
        }
        if lo == hi && (lo.is_zero() || lo == *len) {
            return;
        }
        self.edges.insert(e, (lo, hi));
    }

    fn add_ray(&mut self, k: usize, lo: Rational, hi: Option<Rational>) {
        if hi.as_ref().is_some_and(|h| *h < lo || (h.is_zero() && lo.is_zero())) {
            return;
        }
        self.rays.insert(k, (lo, hi));
    }

    /// Whether the pieces form one connected set (the empty set counts as connected).
    pub fn is_connected(&self, g: &EmbeddedLine) -> bool {
        let topo = g.topology();
        let nv = topo.node_count();
        let mut parent: Vec<usize> = (0..nv + topo.edges().len() + g.n()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let union = |p: &mut Vec<usize>, x: usize, y: usize| {
            let (a, b) = (find(p, x), find(p, y));
            p[a] = b;
        };
        let mut members = Vec::new();
        members.extend(self.vertices.iter().copied());
        for (&e, (lo, hi)) in &self.edges {
            let id = nv + e;
            members.push(id);
            let (a, b) = topo.edges()[e];
            if lo.is_zero() && self.vertices.contains(&a) {
                union(&mut parent, id, a);
            }
            if *hi == g.lengths()[e] && self.vertices.contains(&b) {
                union(&mut parent, id, b);
            }
        }
        for (&k, (lo, _)) in &self.rays {
            let id = nv + topo.edges().len() + k;
            members.push(id);
            let v = topo.leaf_node(k);
            if lo.is_zero() && self.vertices.contains(&v) {
                union(&mut parent, id, v);
            }
        }
        let roots: BTreeSet<usize> = members.iter().map(|&m| find(&mut parent, m)).collect();
        roots.len() <= 1
    }
}

/// `Π(Γ, I)`: the points of `g` where every coordinate in `I` is minimal.
pub fn pi_set(g: &EmbeddedLine, set: LeafSet) -> PiSet {
    let topo = g.topology();
    let n = g.n();
    let mut out = PiSet::default();
    for v in 0..topo.node_count() {
        let prof = min_profile(g.coords(v).coords()).unwrap();
        if set.iter().all(|i| prof.argmin.contains(&i)) {
            out.vertices.insert(v);
        }
    }
    for (e, &(a, _)) in topo.edges().iter().enumerate() {
        let q = g.coords(a);
        let side = topo.edge_side(e);
        let len = g.lengths()[e].clone();
        let (mu1, _) = restricted_min(q, |m| side.contains(m));
        let (mu0, _) = restricted_min(q, |m| !side.contains(m));
        let t_star = &mu0 - &mu1;
        let far_ok = set.intersection(side).iter().all(|i| *q.get(i) == mu1);
        let near_ok = set.minus(side).iter().all(|i| *q.get(i) == mu0);
        if !(far_ok && near_ok) {
            continue;
        }
        let zero = rat(0);
        let uses_far = !set.intersection(side).is_empty();
        let uses_near = !set.minus(side).is_empty();
        let (lo, hi) = match (uses_far, uses_near) {
            (false, false) => (zero, len),
            (true, false) => (zero, t_star.min(len)),
            (false, true) => (t_star.max(zero), len),
            (true, true) => (t_star.clone(), t_star),
        };
        if !lo.is_negative() && lo <= g.lengths()[e] {
            out.add_edge(g, e, lo, hi);
        }
    }
    for k in 0..n {
        let q = g.leaf_vertex(k);
        let (mu0, _) = restricted_min(q, |m| m != k);
        if !set.iter().filter(|&i| i != k).all(|i| *q.get(i) == mu0) {
            continue;
        }
        let reach = &mu0 - q.get(k);
        if set.contains(k) {
            if !reach.is_negative() {
                out.add_ray(k, reach.clone(), Some(reach));
            }
        } else {
            out.add_ray(k, reach.max(rat(0)), None);
        }
    }
    out
}

/// Leaf set of the component of `g \ {p}` containing each internal node
/// (empty for the node equal to `p`).
fn component_labels(g: &EmbeddedLine, p: &LinePoint) -> Vec<LeafSet> {
    let topo = g.topology();
    let n = g.n();
    let mut labels = vec![LeafSet::EMPTY; topo.node_count()];
    let fill = |start: usize, avoid: usize, label: LeafSet, labels: &mut Vec<LeafSet>| {
        let mut stack = vec![(start, avoid)];
        while let Some((u, from)) = stack.pop() {
            labels[u] = label;
            for (_, w) in topo.neighbors(u) {
                if w != from {
                    stack.push((w, u));
                }
            }
        }
    };
    match p {
        LinePoint::Vertex(u) => {
            for (e, w) in topo.neighbors(*u) {
                fill(w, *u, topo.side_away_from(*u, e), &mut labels);
            }
        }
        LinePoint::Edge { edge, .. } => {
            let (a, b) = topo.edges()[*edge];
            let far = topo.edge_side(*edge);
            fill(b, a, far, &mut labels);
            fill(a, b, far.complement(n), &mut labels);
        }
        LinePoint::Ray { leaf, .. } => {
            labels.fill(LeafSet::single(*leaf).complement(n));
        }
    }
    labels
}

/// The set `{p} ∪` (components of `g \ {p}` containing no leaf of `I`), in the
/// same representation as [`pi_set`].
pub fn pi_set_predicted(g: &EmbeddedLine, p: &LinePoint, set: LeafSet) -> PiSet {
    let topo = g.topology();
    let n = g.n();
    let p = g.normalize_point(p.clone());
    let labels = component_labels(g, &p);
    let clean = |leaves: LeafSet| leaves.intersection(set).is_empty();
    let at_vertex = |v: usize| p == LinePoint::Vertex(v);
    let mut out = PiSet::default();
    for v in 0..topo.node_count() {
        if at_vertex(v) || clean(labels[v]) {
            out.vertices.insert(v);
        }
    }
    for (e, &(a, b)) in topo.edges().iter().enumerate() {
        let len = g.lengths()[e].clone();
        match &p {
            LinePoint::Edge { edge, t } if *edge == e => {
                let far = topo.edge_side(e);
                match (clean(far.complement(n)), clean(far)) {
                    (true, true) => out.add_edge(g, e, rat(0), len),
                    (true, false) => out.add_edge(g, e, rat(0), t.clone()),
                    (false, true) => out.add_edge(g, e, t.clone(), len),
                    (false, false) => out.add_edge(g, e, t.clone(), t.clone()),
                }
            }
            _ => {
                let label = if at_vertex(a) { labels[b] } else { labels[a] };
                if clean(label) {
                    out.add_edge(g, e, rat(0), len);
                }
            }
        }
    }
    for k in 0..n {
        match &p {
            LinePoint::Ray { leaf, t } if *leaf == k => {
                let rest = LeafSet::single(k).complement(n);
                match (clean(rest), !set.contains(k)) {
                    (true, true) => out.add_ray(k, rat(0), None),
                    (true, false) => out.add_ray(k, rat(0), Some(t.clone())),
                    (false, true) => out.add_ray(k, t.clone(), None),
                    (false, false) => out.add_ray(k, t.clone(), Some(t.clone())),
                }
            }
            _ => {
                let v = topo.leaf_node(k);
                let label = if at_vertex(v) { LeafSet::single(k) } else { labels[v] };
                if clean(label) {
                    out.add_ray(k, rat(0), None);
                }
            }
        }
    }
    out
}

/// The distinguished point `π_Γ` of a line inside `Π_2`, located on the tree.
///
/// For any leaf i with `Π(Γ, {i})` nonempty, that set is `π_Γ` together with
/// the components away from leaf i, so `π_Γ` is its point nearest to leaf i.
pub fn pi_gamma_point(g: &EmbeddedLine) -> Result<LinePoint> {
    if skeleton_level(g) < 2 {
        return Err(Error::NotInPi2);
    }
    let topo = g.topology();
    let (leaf, set) = (0..g.n())
        .map(|i| (i, pi_set(g, LeafSet::single(i))))
        .find(|(_, s)| !s.is_empty())
        .expect("every point has a minimal coordinate");
    if let Some((lo, _)) = set.rays.get(&leaf) {
        return Ok(g.normalize_point(LinePoint::Ray { leaf, t: lo.clone() }));
    }
    let start = topo.leaf_node(leaf);
    let mut stack = vec![(start, usize::MAX)];
    while let Some((u, from)) = stack.pop() {
        if set.vertices.contains(&u) {
            return Ok(LinePoint::Vertex(u));
        }
        for k in topo.leaves_at(u) {
            if let Some((lo, _)) = set.rays.get(&k) {
                return Ok(g.normalize_point(LinePoint::Ray { leaf: k, t: lo.clone() }));
            }
        }
        for (e, w) in topo.neighbors(u) {
            if w == from {
                continue;
            }
            if let Some((lo, hi)) = set.edges.get(&e) {
                let t = if topo.edges()[e].0 == u { lo.clone() } else { hi.clone() };
                return Ok(g.normalize_point(LinePoint::Edge { edge: e, t }));
            }
            stack.push((w, u));
        }
    }
    unreachable!("a nonempty Π(Γ, {{i}}) is reached from leaf i")
}

/// Coordinates of `π_Γ`.
pub fn pi_gamma(g: &EmbeddedLine) -> Result<ProjPoint> {
    Ok(g.point_coords(&pi_gamma_point(g)?))
}

/// Number of minimal coordinates at a point of the line.
pub fn multiplicity_at(g: &EmbeddedLine, p: &LinePoint) -> usize {
    min_profile(g.point_coords(p).coords()).unwrap().multiplicity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{square, square_line, triangle};
    use crate::primitives::ratio;
    use crate::tree::{embed, TreeTopology};

    fn pp(v: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(v)
    }

    fn set(v: &[usize]) -> LeafSet {
        v.iter().map(|&i| i - 1).collect()
    }

    #[test]
    fn fixed_points_of_square_line() {
        let (l, a) = (square_line(), square());
        assert!(is_fixed(&l, &a, &pp(&[0, 0, 0])).unwrap());
        assert!(is_fixed(&l, &a, &pp(&[2, 1, 0])).unwrap());
        assert!(!is_fixed(&l, &a, &pp(&[5, 5, 0])).unwrap());
        assert!(!is_fixed(&l, &a, &pp(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn locus_of_square_line() {
        let cells = fixed_locus(&square_line(), &square()).unwrap();
        assert_eq!(locus_union(&cells), vec![CellGeometry::Point(pp(&[0, 0, 0])), CellGeometry::Point(pp(&[2, 1, 0]))]);
        for cell in &cells {
            if let CellGeometry::Point(p) = &cell.geometry {
                assert!(is_fixed(&square_line(), &square(), p).unwrap());
            }
        }
    }

    #[test]
    fn locus_of_star_line() {
        let c = pp(&[2, -1, 0]);
        let star = embed(TreeTopology::star(3).unwrap(), vec![], 0, c).unwrap();
        let cells = fixed_locus(&star, &triangle()).unwrap();
        assert_eq!(locus_union(&cells), vec![CellGeometry::Point(pp(&[-2, 1, 0]))]);
    }

    #[test]
    fn skeleton_levels() {
        assert_eq!(skeleton_level(&square_line()), 2);
        let star = embed(TreeTopology::star(3).unwrap(), vec![], 0, pp(&[0, 0, 0])).unwrap();
        assert_eq!(skeleton_level(&star), 2);
        let off = square_line().translate(&[rat(0), ratio(1, 3), ratio(5, 7), rat(2)]);
        assert_eq!(skeleton_level(&off), 1);
    }

    #[test]
    fn pi_sets() {
        let g = square_line();
        let w = g.topology().leaf_node(1);
        // w together with the ray of leaf 4, where x2 = x3 = 0 stay minimal
        let at_w = pi_set(&g, set(&[2, 3]));
        assert_eq!(at_w.vertices, [w].into_iter().collect());
        assert!(at_w.edges.is_empty());
        assert_eq!(at_w.rays, [(3, (rat(0), None))].into_iter().collect());
        assert!(at_w.is_connected(&g));
        let only_w = pi_set(&g, set(&[2, 3, 4]));
        assert_eq!(only_w.vertices, [w].into_iter().collect());
        assert!(only_w.edges.is_empty() && only_w.rays.is_empty());
        assert!(pi_set(&g, set(&[1])).is_empty());
        let all = pi_set(&g, LeafSet::EMPTY);
        assert_eq!(all.vertices.len(), 2);
        assert_eq!(all.rays.len(), 4);
        assert!(all.is_connected(&g));
    }

    #[test]
    fn pi_gamma_examples() {
        let g = square_line();
        assert_eq!(pi_gamma(&g).unwrap(), pp(&[1, 0, 0, 0]));
        let shifted = shifted_line(&g, &square(), &pp(&[2, 1, 0])).unwrap();
        let u = g.topology().leaf_node(0);
        assert_eq!(pi_gamma_point(&shifted).unwrap(), LinePoint::Vertex(u));
        let off = g.translate(&[rat(0), ratio(1, 3), ratio(5, 7), rat(2)]);
        assert_eq!(pi_gamma(&off).unwrap_err(), Error::NotInPi2);
    }

    #[test]
    fn predicted_sets_match() {
        let g = square_line();
        let pi = pi_gamma_point(&g).unwrap();
        for bits in 0..16u64 {
            let s = pi_set(&g, LeafSet::from_bits(bits));
            if !s.is_empty() {
                assert_eq!(s, pi_set_predicted(&g, &pi, LeafSet::from_bits(bits)), "I = {bits:b}");
            }
        }
    }

    #[test]
    fn solver_shapes() {
        // X = Y, X >= 0, X <= 2 gives a segment
        let eq = Affine { x: 1, y: -1, c: rat(0) };
        let lo = Affine { x: 1, y: 0, c: rat(0) };
        let hi = Affine { x: -1, y: 0, c: rat(2) };
        assert_eq!(
            solve(std::slice::from_ref(&eq), &[lo.clone(), hi.clone()]),
            Some(CellGeometry::Segment(pp(&[0, 0, 0]), pp(&[2, 2, 0])))
        );
        assert_eq!(
            solve(std::slice::from_ref(&eq), std::slice::from_ref(&lo)),
            Some(CellGeometry::Ray { from: pp(&[0, 0, 0]), direction: (1, 1) })
        );
        let flip = Affine { x: -1, y: 0, c: rat(-3) };
        assert_eq!(solve(&[eq], &[lo, flip]), None);
    }
}
