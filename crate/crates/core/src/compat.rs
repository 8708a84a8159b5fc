//! Compatibility of tree types with support sets, and the passage from a
//! compatible line back to a general point configuration.
//!
//! A tree type is compatible with `A` when, for every quartet `(ij|kl)` it
//! resolves, one of the segments `a_i a_j`, `a_k a_l` is an edge of the
//! convex hull of the four points. Compatible trivalent lines whose vertices
//! all induce one fixed maximal triangulation are exactly the stable pencils
//! of general configurations; `construct_configuration` produces such a
//! configuration and checks the round trip.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Hypothesis, Result};
use crate::primitives::{orient2d, plane, rat, ProjPoint, Rational, SupportSet};
use crate::random;
use crate::stable::{is_general, minor, stable_pencil, tropdet, value_matrix};
use crate::subdivision::{
    cell_dual_point, is_maximal, regular_subdivision, secondary_cone_contains, MaximalityMode, RegularSubdivision,
};
use crate::tree::{embed, EmbeddedLine, LeafInsertion, LeafSet, LinePoint, TreeTopology};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuartetReason {
    /// `a_i a_j` is a hull edge.
    FirstPair,
    /// `a_k a_l` is a hull edge (and `a_i a_j` is not).
    SecondPair,
    BothDiagonals,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuartetVerdict {
    pub indices: [usize; 4],
    pub reason: QuartetReason,
}

impl QuartetVerdict {
    pub fn ok(&self) -> bool {
        self.reason != QuartetReason::BothDiagonals
    }
}

/// Whether `xy` is an edge of the hull of `{x, y, p, q}`.
///
/// Segments with another quartet point strictly inside do not count, except
/// that when all four points are collinear the extreme pair closes the cycle;
/// either way the edges are those of the cyclic order along the boundary.
fn hull_edge(x: (i64, i64), y: (i64, i64), p: (i64, i64), q: (i64, i64)) -> bool {
    let (op, oq) = (orient2d(x, y, p), orient2d(x, y, q));
    if op * oq < 0 {
        return false;
    }
    let inside = plane::strictly_inside_segment(x, y, p) as usize + plane::strictly_inside_segment(x, y, q) as usize;
    if op == 0 && oq == 0 {
        inside != 1
    } else {
        inside == 0
    }
}

/// The compatibility condition for the pairs `{i, j}` and `{k, l}`.
pub fn quartet_ok(a: &SupportSet, i: usize, j: usize, k: usize, l: usize) -> QuartetVerdict {
    let (pi, pj, pk, pl) = (a.planar(i), a.planar(j), a.planar(k), a.planar(l));
    let reason = if hull_edge(pi, pj, pk, pl) {
        QuartetReason::FirstPair
    } else if hull_edge(pk, pl, pi, pj) {
        QuartetReason::SecondPair
    } else {
        QuartetReason::BothDiagonals
    };
    QuartetVerdict { indices: [i, j, k, l], reason }
}

/// First resolved quartet failing the condition, listed with the pair that
/// holds the smaller index first.
pub fn incompatible_quartet(t: &TreeTopology, a: &SupportSet) -> Option<[usize; 4]> {
    let n = t.n();
    for (_, side) in t.splits() {
        let inner: Vec<usize> = side.iter().collect();
        let outer: Vec<usize> = side.complement(n).iter().collect();
        for (x, &i) in inner.iter().enumerate() {
            for &j in &inner[x + 1..] {
                for (y, &k) in outer.iter().enumerate() {
                    for &l in &outer[y + 1..] {
                        if !quartet_ok(a, i, j, k, l).ok() {
                            return Some(if i < k { [i, j, k, l] } else { [k, l, i, j] });
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn is_compatible(t: &TreeTopology, a: &SupportSet) -> bool {
    t.n() == a.len() && incompatible_quartet(t, a).is_none()
}

/// First triangle of `s` (in cell order) with one corner in each part.
pub fn rainbow_triangle(s: &RegularSubdivision, parts: &[LeafSet]) -> Result<[usize; 3]> {
    let part_of = |x: usize| parts.iter().position(|p| p.contains(x));
    s.cells()
        .iter()
        .filter(|c| c.len() == 3)
        .find(|c| {
            let owners: BTreeSet<_> = c.iter().map(|&x| part_of(x)).collect();
            owners.len() == 3 && !owners.contains(&None)
        })
        .map(|c| [c[0], c[1], c[2]])
        .ok_or(Error::NoRainbowTriangle)
}

/// The point of the fixed locus attached to a trivalent vertex: the dual of
/// its rainbow triangle in `Δ(coords(v))`.
pub fn vertex_fixed_point(line: &EmbeddedLine, a: &SupportSet, v: usize) -> Result<ProjPoint> {
    let topo = line.topology();
    if topo.valence(v) != 3 {
        return Err(Error::HypothesesViolated(Hypothesis::NotTrivalent));
    }
    let s = regular_subdivision(a, line.coords(v))?;
    if !is_maximal(&s, MaximalityMode::Strict) {
        return Err(Error::HypothesesViolated(Hypothesis::NotMaximal { node: v }));
    }
    let tri = rainbow_triangle(&s, &topo.branches(v))?;
    cell_dual_point(a, line.coords(v), tri)
}

fn check_hypotheses(line: &EmbeddedLine, a: &SupportSet) -> Result<()> {
    if line.n() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: line.n() });
    }
    if !line.topology().is_trivalent() {
        return Err(Error::HypothesesViolated(Hypothesis::NotTrivalent));
    }
    if let Some(q) = incompatible_quartet(line.topology(), a) {
        return Err(Error::HypothesesViolated(Hypothesis::Incompatible(q)));
    }
    Ok(())
}

/// One fixed point per vertex, in node order, without the round-trip check.
pub fn vertex_points(line: &EmbeddedLine, a: &SupportSet) -> Result<Vec<ProjPoint>> {
    check_hypotheses(line, a)?;
    (0..line.topology().node_count()).map(|v| vertex_fixed_point(line, a, v)).collect()
}

/// A general configuration whose stable pencil is `line`.
pub fn construct_configuration(line: &EmbeddedLine, a: &SupportSet) -> Result<Vec<ProjPoint>> {
    let config = vertex_points(line, a)?;
    if let Some((i, j)) = is_general(a, &config)?.singular_pair {
        return Err(Error::VerificationFailed(format!("minor ({}, {}) is singular", i + 1, j + 1)));
    }
    if stable_pencil(a, &config)? != *line {
        return Err(Error::VerificationFailed("stable pencil differs from the input line".into()));
    }
    Ok(config)
}

/// Bipartite graph between the internal vertices of a line and the support:
/// `w ~ a_l` when the term `l` is minimal at `P_w` for the coefficients of
/// the base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportGraph {
    pub nodes: usize,
    pub support: usize,
    /// `(vertex, support index)` pairs.
    pub edges: Vec<(usize, usize)>,
}

impl SupportGraph {
    pub fn vertex_count(&self) -> usize {
        self.nodes + self.support
    }

    /// Connected components, with each support point offset by `nodes`.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertex_count()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut count = self.vertex_count();
        for &(w, l) in &self.edges {
            let (x, y) = (find(&mut parent, w), find(&mut parent, self.nodes + l));
            if x != y {
                parent[x] = y;
                count -= 1;
            }
        }
        count
    }

    /// Cycle rank `|E| - |V| + components`.
    pub fn genus(&self) -> usize {
        self.edges.len() + self.components() - self.vertex_count()
    }

    /// Internal vertices adjacent to some support point in `set`.
    pub fn neighborhood(&self, set: LeafSet) -> BTreeSet<usize> {
        self.edges.iter().filter(|(_, l)| set.contains(*l)).map(|&(w, _)| w).collect()
    }
}

/// The graph `G_c` for a base point `c` on the line, with `config[w] = P_w`.
pub fn support_graph(line: &EmbeddedLine, a: &SupportSet, config: &[ProjPoint], c: &LinePoint) -> SupportGraph {
    let coeffs = line.point_coords(c);
    let mut edges = Vec::new();
    for (w, p) in config.iter().enumerate() {
        let terms = a.terms(&coeffs, p);
        let least = terms.iter().min().unwrap();
        edges.extend((0..a.len()).filter(|&l| terms[l] == *least).map(|l| (w, l)));
    }
    SupportGraph { nodes: config.len(), support: a.len(), edges }
}

/// The perfect matching between internal vertices and the support minus
/// `{a_i, a_j}`, found by repeatedly matching a degree-one vertex. Returns
/// `matching[w] = l`.
pub fn unique_matching(g: &SupportGraph, i: usize, j: usize) -> Result<Vec<usize>> {
    let mut live: Vec<(usize, usize)> = g.edges.iter().copied().filter(|&(_, l)| l != i && l != j).collect();
    let mut matching = vec![usize::MAX; g.nodes];
    let mut left: BTreeSet<usize> = (0..g.nodes).collect();
    let mut right: BTreeSet<usize> = (0..g.support).filter(|&l| l != i && l != j).collect();
    while !left.is_empty() {
        let degree_one = left
            .iter()
            .find_map(|&w| {
                let adj: Vec<_> = live.iter().filter(|e| e.0 == w).collect();
                (adj.len() == 1).then(|| *adj[0])
            })
            .or_else(|| {
                right.iter().find_map(|&l| {
                    let adj: Vec<_> = live.iter().filter(|e| e.1 == l).collect();
                    (adj.len() == 1).then(|| *adj[0])
                })
            });
        let Some((w, l)) = degree_one else {
            return Err(Error::NoMatching);
        };
        matching[w] = l;
        left.remove(&w);
        right.remove(&l);
        live.retain(|&(x, y)| x != w && y != l);
    }
    if !right.is_empty() {
        return Err(Error::NoMatching);
    }
    Ok(matching)
}

/// Points of the line on the path between the rays of leaves `i` and `j`:
/// every internal vertex on it and the midpoint of every edge on it.
pub fn path_points(line: &EmbeddedLine, i: usize, j: usize) -> Vec<LinePoint> {
    let topo = line.topology();
    let (from, to) = (topo.leaf_node(i), topo.leaf_node(j));
    // parent links from a search rooted at `from`
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; topo.node_count()];
    let mut stack = vec![from];
    let mut seen = vec![false; topo.node_count()];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        for (e, w) in topo.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((u, e));
                stack.push(w);
            }
        }
    }
    let mut out = vec![LinePoint::Vertex(to)];
    let mut cur = to;
    while let Some((u, e)) = prev[cur] {
        out.push(LinePoint::Edge { edge: e, t: &line.lengths()[e] / rat(2) });
        out.push(LinePoint::Vertex(u));
        cur = u;
    }
    out.reverse();
    out
}

pub const MAX_ENUMERATION: usize = 10;

/// All trivalent leaf-labelled types on `n` leaves, `(2n-5)!!` of them, in
/// leaf-insertion order.
pub fn enumerate_types(n: usize) -> Result<Vec<TreeTopology>> {
    if n < 3 {
        return Err(Error::InvalidTree(format!("leaf count {n} below 3")));
    }
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge(n, MAX_ENUMERATION));
    }
    let mut level = vec![LeafInsertion::tripod(n)];
    for _ in 3..n {
        level = level.iter().flat_map(|t| (0..t.edge_count()).map(move |e| t.insert(e))).collect();
    }
    Ok(level.iter().map(LeafInsertion::topology).collect())
}

pub fn count_compatible(a: &SupportSet) -> Result<usize> {
    Ok(enumerate_types(a.len())?.iter().filter(|t| is_compatible(t, a)).count())
}

#[derive(Clone, Copy, Debug)]
pub struct RealizeOptions {
    pub max_draws: usize,
    pub max_halvings: usize,
    pub seed: u64,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { max_draws: 64, max_halvings: 64, seed: 0 }
    }
}

/// Coefficients inducing a triangulation that uses every support point.
fn maximal_heights(a: &SupportSet, opts: &RealizeOptions) -> Result<(ProjPoint, RegularSubdivision)> {
    let try_heights = |c: ProjPoint| -> Result<Option<(ProjPoint, RegularSubdivision)>> {
        let s = regular_subdivision(a, &c)?;
        Ok(is_maximal(&s, MaximalityMode::Strict).then_some((c, s)))
    };
    let paraboloid = (0..a.len()).map(|i| {
        let (r, s) = a.planar(i);
        rat(r * r + s * s)
    });
    if let Some(found) = try_heights(ProjPoint::new(paraboloid.collect()))? {
        return Ok(found);
    }
    let mut rng = random::seeded(opts.seed);
    for _ in 0..opts.max_draws {
        let heights = (0..a.len()).map(|_| Rational::new(rng.gen_range(0..1000).into(), 7.into()));
        if let Some(found) = try_heights(ProjPoint::new(heights.collect()))? {
            return Ok(found);
        }
    }
    Err(Error::NoMaximalSubdivision(opts.max_draws))
}

/// A line of type `t` whose vertices all induce one maximal triangulation, so
/// that it is the stable pencil of a general configuration.
pub fn realize_type(a: &SupportSet, t: &TreeTopology, opts: &RealizeOptions) -> Result<EmbeddedLine> {
    if t.n() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: t.n() });
    }
    if let Some(q) = incompatible_quartet(t, a) {
        return Err(Error::NotCompatible(q));
    }
    if !t.is_trivalent() {
        return Err(Error::HypothesesViolated(Hypothesis::NotTrivalent));
    }
    let (c, s) = maximal_heights(a, opts)?;
    let mut eps = rat(1);
    for _ in 0..=opts.max_halvings {
        let line = embed(t.clone(), vec![eps.clone(); t.edges().len()], 0, c.clone())?;
        let mut inside = true;
        for v in 0..t.node_count() {
            if !secondary_cone_contains(a, &s, line.coords(v))? {
                inside = false;
                break;
            }
        }
        if inside {
            construct_configuration(&line, a)?;
            return Ok(line);
        }
        eps /= rat(2);
    }
    Err(Error::ShrinkLimit(opts.max_halvings))
}

/// `Σ_w a_{ψ(w)} · P_w` for a matching `ψ`.
pub fn matching_value(a: &SupportSet, config: &[ProjPoint], matching: &[usize]) -> Rational {
    matching.iter().zip(config).map(|(&l, p)| crate::primitives::dot(&a.point(l), p)).sum()
}

/// The tropical determinant of the minor `(i, j)` for a configuration.
pub fn minor_tropdet(a: &SupportSet, config: &[ProjPoint], i: usize, j: usize) -> Result<crate::stable::TropdetResult> {
    Ok(tropdet(&minor(&value_matrix(a, config)?, i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{conic, conic_boundary, square, square_line, triangle};
    use crate::subdivision::RegularSubdivision;

    fn set(v: &[usize]) -> LeafSet {
        v.iter().map(|&i| i - 1).collect()
    }

    fn pp(v: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(v)
    }

    #[test]
    fn square_quartets() {
        let a = square();
        assert!(quartet_ok(&a, 0, 1, 2, 3).ok());
        assert_eq!(quartet_ok(&a, 0, 3, 1, 2).reason, QuartetReason::BothDiagonals);
        assert_eq!(quartet_ok(&a, 0, 2, 1, 3).reason, QuartetReason::FirstPair);
    }

    #[test]
    fn collinear_quartets() {
        // four points on a line: cyclic order 1,2,3,4 along it
        let a = SupportSet::from_planar(3, &[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]).unwrap();
        assert!(quartet_ok(&a, 0, 1, 2, 3).ok());
        assert!(quartet_ok(&a, 0, 3, 1, 2).ok());
        assert!(!quartet_ok(&a, 0, 2, 1, 3).ok());
        // three collinear points plus one off the line
        assert!(quartet_ok(&a, 0, 1, 2, 4).ok());
        assert!(!quartet_ok(&a, 0, 2, 1, 4).ok());
    }

    #[test]
    fn square_types() {
        let a = square();
        assert!(is_compatible(&TreeTopology::from_splits(4, &[set(&[1, 2])]).unwrap(), &a));
        let bad = TreeTopology::from_splits(4, &[set(&[1, 4])]).unwrap();
        assert_eq!(incompatible_quartet(&bad, &a), Some([0, 3, 1, 2]));
        assert!(is_compatible(&TreeTopology::star(4).unwrap(), &a));
    }

    #[test]
    fn rainbow_examples() {
        let s = RegularSubdivision::from_cells(4, vec![vec![0, 1, 2], vec![1, 2, 3]]);
        assert_eq!(rainbow_triangle(&s, &[set(&[2]), set(&[4]), set(&[1, 3])]).unwrap(), [1, 2, 3]);
        assert_eq!(rainbow_triangle(&s, &[set(&[1]), set(&[3]), set(&[2, 4])]).unwrap(), [0, 1, 2]);
        let t = RegularSubdivision::from_cells(3, vec![vec![0, 1, 2]]);
        assert_eq!(rainbow_triangle(&t, &[set(&[1]), set(&[2]), set(&[3])]).unwrap(), [0, 1, 2]);
        assert_eq!(rainbow_triangle(&s, &[set(&[2, 3]), set(&[1]), set(&[4])]), Err(Error::NoRainbowTriangle));
    }

    #[test]
    fn square_configuration_round_trip() {
        let (l, a) = (square_line(), square());
        let u = l.topology().leaf_node(0);
        let w = l.topology().leaf_node(1);
        assert_eq!(vertex_fixed_point(&l, &a, u).unwrap(), pp(&[2, 1, 0]));
        assert_eq!(vertex_fixed_point(&l, &a, w).unwrap(), pp(&[0, 0, 0]));
        let c = construct_configuration(&l, &a).unwrap();
        let as_set: BTreeSet<_> = c.into_iter().collect();
        assert_eq!(as_set, [pp(&[0, 0, 0]), pp(&[2, 1, 0])].into_iter().collect());

        let wrong =
            embed(TreeTopology::from_splits(4, &[set(&[1, 4])]).unwrap(), vec![rat(1)], 0, pp(&[1, 0, 0, 0])).unwrap();
        assert_eq!(
            construct_configuration(&wrong, &a).unwrap_err(),
            Error::HypothesesViolated(Hypothesis::Incompatible([0, 3, 1, 2]))
        );
    }

    #[test]
    fn star_configuration() {
        let v = pp(&[3, -1, 0]);
        let star = embed(TreeTopology::star(3).unwrap(), vec![], 0, v).unwrap();
        assert_eq!(construct_configuration(&star, &triangle()).unwrap(), vec![pp(&[-3, 1, 0])]);
    }

    #[test]
    fn square_support_graphs() {
        let (l, a) = (square_line(), square());
        let config = vertex_points(&l, &a).unwrap();
        let (u, w) = (l.topology().leaf_node(0), l.topology().leaf_node(1));
        let g = support_graph(&l, &a, &config, &LinePoint::Vertex(u));
        let edges: BTreeSet<_> = g.edges.iter().copied().collect();
        let expected: BTreeSet<_> = [(u, 0), (u, 1), (u, 2), (w, 1), (w, 3)].into_iter().collect();
        assert_eq!(edges, expected);
        assert_eq!((g.components(), g.genus()), (1, 0));

        let mid = LinePoint::Edge { edge: 0, t: Rational::new(1.into(), 2.into()) };
        let gc = support_graph(&l, &a, &config, &mid);
        assert_eq!((gc.components(), gc.genus()), (2, 0));
        let psi = unique_matching(&gc, 0, 1).unwrap();
        assert_eq!((psi[u], psi[w]), (2, 3));
        assert_eq!(matching_value(&a, &config, &psi), rat(1));
        assert_eq!(minor_tropdet(&a, &config, 0, 1).unwrap().value, rat(1));
    }

    #[test]
    fn type_counts() {
        assert_eq!(enumerate_types(3).unwrap().len(), 1);
        assert_eq!(enumerate_types(4).unwrap().len(), 3);
        assert_eq!(enumerate_types(5).unwrap().len(), 15);
        let six = enumerate_types(6).unwrap();
        assert_eq!(six.len(), 105);
        let distinct: BTreeSet<_> = six.iter().map(|t| t.split_set().into_iter().collect::<Vec<_>>()).collect();
        assert_eq!(distinct.len(), 105);
        assert_eq!(enumerate_types(11).unwrap_err(), Error::TooLarge(11, 10));
        assert_eq!(count_compatible(&square()).unwrap(), 2);
        assert_eq!(count_compatible(&conic_boundary()).unwrap(), 5);
        assert_eq!(count_compatible(&conic()).unwrap(), 14);
    }

    #[test]
    fn realize_square_types() {
        let a = square();
        for split in [set(&[1, 3]), set(&[1, 2])] {
            let t = TreeTopology::from_splits(4, &[split]).unwrap();
            let line = realize_type(&a, &t, &RealizeOptions::default()).unwrap();
            assert_eq!(line.topology(), &t);
            let c = construct_configuration(&line, &a).unwrap();
            assert!(is_general(&a, &c).unwrap().is_general());
        }
        let bad = TreeTopology::from_splits(4, &[set(&[1, 4])]).unwrap();
        assert_eq!(realize_type(&a, &bad, &RealizeOptions::default()).unwrap_err(), Error::NotCompatible([0, 3, 1, 2]));
    }
}
