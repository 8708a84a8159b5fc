//! Tropical lines in TP^{n-1} as leaf-labelled metric trees.
//!
//! Leaf `k` sits at the end of a ray with direction `e_k`. An internal edge
//! whose far side carries the leaves `I` points in direction `e_I`, and its
//! length is measured in that lattice direction: walking the whole edge adds
//! `length` to every coordinate in `I`.
//!
//! Plücker vectors follow the min-plus convention: in every quartet the two
//! smaller of `p_ij + p_kl`, `p_ik + p_jl`, `p_il + p_jk` agree, and the pair
//! with the (weakly) largest sum lies on a common side of the tree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::primitives::{min_profile, ProjPoint, Rational};

/// A set of leaves (0-based labels below 64) stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LeafSet(u64);

impl LeafSet {
    pub const EMPTY: LeafSet = LeafSet(0);

    pub fn from_bits(bits: u64) -> Self {
        LeafSet(bits)
    }

    pub fn single(i: usize) -> Self {
        LeafSet(1 << i)
    }

    /// `{0, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            LeafSet(u64::MAX)
        } else {
            LeafSet((1u64 << n) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        LeafSet(self.0 | 1 << i)
    }

    pub fn union(self, other: LeafSet) -> Self {
        LeafSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LeafSet) -> Self {
        LeafSet(self.0 & other.0)
    }

    pub fn minus(self, other: LeafSet) -> Self {
        LeafSet(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        LeafSet::full(n).minus(self)
    }

    pub fn is_subset(self, other: LeafSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

impl FromIterator<usize> for LeafSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(LeafSet::EMPTY, LeafSet::with)
    }
}

impl fmt::Debug for LeafSet {
    /// 1-based, matching how leaves are labelled in output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Combinatorial type of an n-leaf tree with no 2-valent internal nodes.
///
/// Equality compares the split systems, so two topologies with different node
/// numberings but the same leaf partitions are equal.
#[derive(Clone, Debug)]
pub struct TreeTopology {
    n: usize,
    nodes: usize,
    leaf_node: Vec<usize>,
    edges: Vec<(usize, usize)>,
    /// Leaves on the `b` side of each edge `(a, b)`.
    far: Vec<LeafSet>,
}

impl TreeTopology {
    /// Internal nodes are `0..nodes`; `leaf_node[k]` is the node carrying leaf `k`.
    pub fn new(n: usize, nodes: usize, leaf_node: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidTree(m));
        if !(3..=64).contains(&n) {
            return bad(format!("leaf count {n} outside 3..=64"));
        }
        if leaf_node.len() != n {
            return bad(format!("{} leaf attachments for {n} leaves", leaf_node.len()));
        }
        if nodes == 0 || edges.len() + 1 != nodes {
            return bad(format!("{nodes} internal nodes need {} edges", nodes.saturating_sub(1)));
        }
        if leaf_node.iter().chain(edges.iter().flat_map(|(a, b)| [a, b])).any(|&v| v >= nodes) {
            return bad("node index out of range".into());
        }
        if edges.iter().any(|(a, b)| a == b) {
            return bad("self-loop".into());
        }
        let mut topo = TreeTopology { n, nodes, leaf_node, edges, far: Vec::new() };
        // connectivity (with |E| = |V| - 1 this also rules out cycles)
        let mut seen = vec![false; nodes];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for (_, w) in topo.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("internal nodes are not connected".into());
        }
        if let Some(v) = (0..nodes).find(|&v| topo.valence(v) < 3) {
            return bad(format!("node {v} has valence {}", topo.valence(v)));
        }
        topo.far = (0..topo.edges.len()).map(|e| topo.subtree_leaves(topo.edges[e].1, topo.edges[e].0)).collect();
        Ok(topo)
    }

    /// The tree with a single internal node.
    pub fn star(n: usize) -> Result<Self> {
        TreeTopology::new(n, 1, vec![0; n], Vec::new())
    }

    /// Builds the unique tree with the given splits. Each split may be given by
    /// either side; both sides must have at least two leaves.
    pub fn from_splits(n: usize, splits: &[LeafSet]) -> Result<Self> {
        if !(3..=64).contains(&n) {
            return Err(Error::InvalidTree(format!("leaf count {n} outside 3..=64")));
        }
        let clusters: BTreeSet<LeafSet> = splits.iter().map(|&s| normalize_split(s, n)).collect();
        for &c in &clusters {
            if c.len() < 2 || c.complement(n).len() < 2 || !c.is_subset(LeafSet::full(n)) {
                return Err(Error::InvalidTree(format!("{c:?} is not a proper split")));
            }
        }
        for &c in &clusters {
            for &d in &clusters {
                let nested = c.is_subset(d) || d.is_subset(c);
                if !nested && !c.intersection(d).is_empty() {
                    return Err(Error::InvalidTree(format!("splits {c:?} and {d:?} are incompatible")));
                }
            }
        }
        Ok(hierarchy(n, &clusters.into_iter().collect::<Vec<_>>()).0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn leaf_node(&self, leaf: usize) -> usize {
        self.leaf_node[leaf]
    }

    pub fn leaves_at(&self, node: usize) -> Vec<usize> {
        (0..self.n).filter(|&k| self.leaf_node[k] == node).collect()
    }

    /// Incident internal edges as `(edge index, other endpoint)`.
    pub fn neighbors(&self, node: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(e, &(a, b))| match () {
                _ if a == node => Some((e, b)),
                _ if b == node => Some((e, a)),
                _ => None,
            })
            .collect()
    }

    pub fn valence(&self, node: usize) -> usize {
        self.neighbors(node).len() + self.leaf_node.iter().filter(|&&v| v == node).count()
    }

    pub fn is_trivalent(&self) -> bool {
        (0..self.nodes).all(|v| self.valence(v) == 3)
    }

    /// Leaves reached from `edge` on the side of its second endpoint.
    pub fn edge_side(&self, edge: usize) -> LeafSet {
        self.far[edge]
    }

    fn subtree_leaves(&self, start: usize, avoid: usize) -> LeafSet {
        let mut leaves = LeafSet::EMPTY;
        let mut stack = vec![(start, avoid)];
        while let Some((u, from)) = stack.pop() {
            for k in self.leaves_at(u) {
                leaves = leaves.with(k);
            }
            for (_, w) in self.neighbors(u) {
                if w != from {
                    stack.push((w, u));
                }
            }
        }
        leaves
    }

    /// Leaves beyond `edge` when leaving `node` through it.
    pub fn side_away_from(&self, node: usize, edge: usize) -> LeafSet {
        let (a, _) = self.edges[edge];
        if a == node {
            self.far[edge]
        } else {
            self.far[edge].complement(self.n)
        }
    }

    /// Leaf sets of the components of the tree minus `node`: one per incident
    /// internal edge, then one singleton per attached leaf.
    pub fn branches(&self, node: usize) -> Vec<LeafSet> {
        let mut out: Vec<LeafSet> =
            self.neighbors(node).into_iter().map(|(e, _)| self.side_away_from(node, e)).collect();
        out.extend(self.leaves_at(node).into_iter().map(LeafSet::single));
        out
    }

    /// One split per internal edge, given by the side not containing the last leaf.
    pub fn splits(&self) -> Vec<(usize, LeafSet)> {
        (0..self.edges.len()).map(|e| (e, normalize_split(self.far[e], self.n))).collect()
    }

    pub fn split_set(&self) -> BTreeSet<LeafSet> {
        self.splits().into_iter().map(|(_, s)| s).collect()
    }

    /// Whether the quartet is resolved as `(i j | k l)` in this tree.
    pub fn separates(&self, i: usize, j: usize, k: usize, l: usize) -> bool {
        self.far.iter().any(|&s| {
            let side = |x: usize| s.contains(x);
            side(i) == side(j) && side(k) == side(l) && side(i) != side(k)
        })
    }
}

impl PartialEq for TreeTopology {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.split_set() == other.split_set()
    }
}

impl Eq for TreeTopology {}

fn normalize_split(s: LeafSet, n: usize) -> LeafSet {
    if s.contains(n - 1) {
        s.complement(n)
    } else {
        s
    }
}

/// Builds the tree whose non-root internal nodes are `clusters` (laminar
/// family of subsets of `{0..n-2}`, sizes >= 2). Node 0 is the root, which
/// carries leaf `n-1`; the returned vector gives each node's cluster.
fn hierarchy(n: usize, clusters: &[LeafSet]) -> (TreeTopology, Vec<LeafSet>) {
    let root = LeafSet::full(n - 1);
    let mut node_sets = vec![root];
    node_sets.extend(clusters.iter().copied().filter(|&c| c != root));
    let smallest_above = |s: LeafSet, strict: bool| -> usize {
        (0..node_sets.len())
            .filter(|&v| s.is_subset(node_sets[v]) && !(strict && node_sets[v] == s))
            .min_by_key(|&v| node_sets[v].len())
            .expect("root contains everything")
    };
    let edges: Vec<(usize, usize)> = (1..node_sets.len()).map(|v| (smallest_above(node_sets[v], true), v)).collect();
    let mut leaf_node: Vec<usize> = (0..n - 1).map(|k| smallest_above(LeafSet::single(k), false)).collect();
    leaf_node.push(0);
    let topo = TreeTopology::new(n, node_sets.len(), leaf_node, edges).expect("laminar family yields a tree");
    (topo, node_sets)
}

/// A trivalent tree grown by inserting leaves one at a time into edges.
/// Leaves are vertices `0..n`; internal nodes are numbered from `n`.
#[derive(Clone, Debug)]
pub(crate) struct LeafInsertion {
    n: usize,
    next: usize,
    edges: Vec<(usize, usize)>,
}

impl LeafInsertion {
    /// The tripod on leaves 0, 1, 2.
    pub(crate) fn tripod(n: usize) -> Self {
        LeafInsertion { n, next: n + 1, edges: vec![(0, n), (1, n), (2, n)] }
    }

    /// Leaves inserted so far.
    pub(crate) fn leaves(&self) -> usize {
        (self.edges.len() + 3) / 2
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Subdivides edge `e` and hangs the next leaf from the new node.
    pub(crate) fn insert(&self, e: usize) -> Self {
        let leaf = self.leaves();
        let (x, y) = self.edges[e];
        let z = self.next;
        let mut edges = self.edges.clone();
        edges[e] = (x, z);
        edges.push((z, y));
        edges.push((leaf, z));
        LeafInsertion { n: self.n, next: z + 1, edges }
    }

    pub(crate) fn topology(&self) -> TreeTopology {
        assert_eq!(self.leaves(), self.n, "all leaves inserted");
        let n = self.n;
        let leaves_beyond = |from: usize, start: usize| -> LeafSet {
            let mut out = LeafSet::EMPTY;
            let mut stack = vec![(start, from)];
            while let Some((u, prev)) = stack.pop() {
                if u < n {
                    out = out.with(u);
                    continue;
                }
                for &(a, b) in &self.edges {
                    let w = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    if w != prev {
                        stack.push((w, u));
                    }
                }
            }
            out
        };
        let splits: Vec<LeafSet> =
            self.edges.iter().filter(|&&(a, b)| a >= n && b >= n).map(|&(a, b)| leaves_beyond(a, b)).collect();
        TreeTopology::from_splits(n, &splits).expect("inserted trees are valid")
    }
}

/// A tropical line in TP^{n-1}: a tree topology with positive internal edge
/// lengths and the coordinates of every internal node.
///
/// Equality is equality of the embedded lines (splits, lengths and the
/// position of every leaf's vertex), independent of node numbering.
#[derive(Clone, Debug)]
pub struct EmbeddedLine {
    topology: TreeTopology,
    lengths: Vec<Rational>,
    coords: Vec<ProjPoint>,
}

/// A point of an embedded line, located combinatorially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinePoint {
    Vertex(usize),
    /// Parameter `0 < t < length` measured from the edge's first endpoint.
    Edge {
        edge: usize,
        t: Rational,
    },
    /// Parameter `t > 0` along the ray of `leaf`.
    Ray {
        leaf: usize,
        t: Rational,
    },
}

/// Places `topology` in TP^{n-1} with `anchor` at `anchor_coords`.
pub fn embed(
    topology: TreeTopology,
    lengths: Vec<Rational>,
    anchor: usize,
    anchor_coords: ProjPoint,
) -> Result<EmbeddedLine> {
    let n = topology.n();
    if lengths.len() != topology.edges().len() {
        return Err(Error::InvalidTree(format!(
            "{} lengths for {} internal edges",
            lengths.len(),
            topology.edges().len()
        )));
    }
    if let Some(e) = lengths.iter().position(|l| !l.is_positive()) {
        return Err(Error::NonPositiveLength(e));
    }
    if anchor >= topology.node_count() {
        return Err(Error::InvalidTree(format!("anchor node {anchor} out of range")));
    }
    if anchor_coords.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: anchor_coords.dim() });
    }
    let mut coords: Vec<Option<ProjPoint>> = vec![None; topology.node_count()];
    coords[anchor] = Some(anchor_coords);
    let mut queue = VecDeque::from([anchor]);
    while let Some(u) = queue.pop_front() {
        let here = coords[u].clone().unwrap();
        for (e, w) in topology.neighbors(u) {
            if coords[w].is_none() {
                let side = topology.side_away_from(u, e);
                coords[w] = Some(here.step(|m| side.contains(m), &lengths[e]));
                queue.push_back(w);
            }
        }
    }
    let coords = coords.into_iter().map(Option::unwrap).collect();
    Ok(EmbeddedLine { topology, lengths, coords })
}

impl EmbeddedLine {
    pub fn topology(&self) -> &TreeTopology {
        &self.topology
    }

    pub fn n(&self) -> usize {
        self.topology.n()
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn coords(&self, node: usize) -> &ProjPoint {
        &self.coords[node]
    }

    pub fn all_coords(&self) -> &[ProjPoint] {
        &self.coords
    }

    /// Coordinates of the vertex carrying leaf `k`.
    pub fn leaf_vertex(&self, k: usize) -> &ProjPoint {
        &self.coords[self.topology.leaf_node(k)]
    }

    /// The same tree moved by `shift` (a vector in any representative).
    pub fn translate(&self, shift: &[Rational]) -> EmbeddedLine {
        EmbeddedLine {
            topology: self.topology.clone(),
            lengths: self.lengths.clone(),
            coords: self.coords.iter().map(|c| c.translate(shift)).collect(),
        }
    }

    pub fn point_coords(&self, point: &LinePoint) -> ProjPoint {
        match point {
            LinePoint::Vertex(v) => self.coords[*v].clone(),
            LinePoint::Edge { edge, t } => {
                let side = self.topology.edge_side(*edge);
                self.coords[self.topology.edges()[*edge].0].step(|m| side.contains(m), t)
            }
            LinePoint::Ray { leaf, t } => self.leaf_vertex(*leaf).step(|m| m == *leaf, t),
        }
    }

    /// Leaf sets of the components of the line minus `point`.
    pub fn branches_at(&self, point: &LinePoint) -> Vec<LeafSet> {
        let n = self.n();
        match point {
            LinePoint::Vertex(v) => self.topology.branches(*v),
            LinePoint::Edge { edge, .. } => {
                let far = self.topology.edge_side(*edge);
                vec![far.complement(n), far]
            }
            LinePoint::Ray { leaf, .. } => vec![LeafSet::single(*leaf).complement(n), LeafSet::single(*leaf)],
        }
    }

    /// Number of branches at a point (2 for points inside edges and rays).
    pub fn valence_at(&self, point: &LinePoint) -> usize {
        match point {
            LinePoint::Vertex(v) => self.topology.valence(*v),
            _ => 2,
        }
    }

    /// Rewrites boundary parameters as vertices.
    pub fn normalize_point(&self, point: LinePoint) -> LinePoint {
        match point {
            LinePoint::Edge { edge, t } => {
                let (a, b) = self.topology.edges()[edge];
                if t.is_zero() {
                    LinePoint::Vertex(a)
                } else if t == self.lengths[edge] {
                    LinePoint::Vertex(b)
                } else {
                    LinePoint::Edge { edge, t }
                }
            }
            LinePoint::Ray { leaf, t } if t.is_zero() => LinePoint::Vertex(self.topology.leaf_node(leaf)),
            p => p,
        }
    }

    fn signature(&self) -> (usize, BTreeMap<LeafSet, Rational>, Vec<ProjPoint>) {
        let lengths = self.topology.splits().into_iter().map(|(e, s)| (s, self.lengths[e].clone())).collect();
        let leaf_vertices = (0..self.n()).map(|k| self.leaf_vertex(k).clone()).collect();
        (self.n(), lengths, leaf_vertices)
    }
}

impl PartialEq for EmbeddedLine {
    fn eq(&self, other: &Self) -> bool {
        self.signature() == other.signature()
    }
}

impl Eq for EmbeddedLine {}

/// Whether `c` lies on a vertex, a bounded edge or a leaf ray of `line`.
pub fn line_contains(line: &EmbeddedLine, c: &ProjPoint) -> bool {
    if c.dim() != line.n() {
        return false;
    }
    let n = line.n();
    // c - base must be lambda + t * e_S with 0 <= t <= bound
    let on_segment = |base: &ProjPoint, side: LeafSet, bound: Option<&Rational>| -> bool {
        let d: Vec<Rational> = c.coords().iter().zip(base.coords()).map(|(x, y)| x - y).collect();
        let off = (0..n).find(|&m| !side.contains(m)).expect("proper side");
        let on = side.iter().next().expect("nonempty side");
        let lambda = &d[off];
        let t = &d[on] - lambda;
        let consistent = (0..n).all(|m| if side.contains(m) { d[m] == lambda + &t } else { d[m] == *lambda });
        consistent && !t.is_negative() && bound.is_none_or(|b| t <= *b)
    };
    let topo = line.topology();
    (0..topo.node_count()).any(|v| line.coords[v] == *c)
        || topo
            .edges()
            .iter()
            .enumerate()
            .any(|(e, &(a, _))| on_segment(&line.coords[a], topo.edge_side(e), Some(&line.lengths[e])))
        || (0..n).any(|k| on_segment(line.leaf_vertex(k), LeafSet::single(k), None))
}

/// Tropical Plücker coordinates of a line, modulo a global constant; the
/// stored representative has `p_{n-1,n} = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct PlueckerVector {
    n: usize,
    values: Vec<Rational>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl PlueckerVector {
    /// `values` lists `p_ij` for `i < j` in lexicographic order (12, 13, ..., 23, ...).
    pub fn new(n: usize, mut values: Vec<Rational>) -> Result<Self> {
        if n < 3 || values.len() != n * (n - 1) / 2 {
            return Err(Error::DimensionMismatch { expected: n * n.saturating_sub(1) / 2, got: values.len() });
        }
        let last = values.last().unwrap().clone();
        for v in &mut values {
            *v -= &last;
        }
        Ok(PlueckerVector { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        let mut values = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                values.push(f(i, j));
            }
        }
        PlueckerVector::new(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert_ne!(i, j);
        &self.values[pair_index(self.n, i, j)]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// The three quartet sums for the pairings (ij|kl), (ik|jl), (il|jk).
    pub fn quartet_sums(&self, i: usize, j: usize, k: usize, l: usize) -> [Rational; 3] {
        [self.get(i, j) + self.get(k, l), self.get(i, k) + self.get(j, l), self.get(i, l) + self.get(j, k)]
    }

    /// First quartet whose minimum sum is attained only once.
    pub fn violation(&self) -> Option<[usize; 4]> {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let sums = self.quartet_sums(i, j, k, l);
                        if min_profile(&sums).unwrap().multiplicity() < 2 {
                            return Some([i, j, k, l]);
                        }
                    }
                }
            }
        }
        None
    }
}

impl fmt::Debug for PlueckerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(crate::primitives::format_rational).collect();
        write!(f, "p({})", v.join(","))
    }
}

/// Plücker coordinates of an embedded line.
///
/// On the ray of leaf k, `x_l - p_kl` is constant for `l != k`; so with the
/// leaf vertices `v_k`, `p_kl = (v_k)_l + beta_k`, where the offsets `beta`
/// are fixed by symmetry relative to the last leaf.
pub fn tree_to_plucker(line: &EmbeddedLine) -> PlueckerVector {
    let n = line.n();
    let last = n - 1;
    let v_last = line.leaf_vertex(last);
    let beta: Vec<Rational> = (0..n).map(|k| v_last.get(k) - line.leaf_vertex(k).get(last)).collect();
    PlueckerVector::from_fn(n, |k, l| {
        let p = line.leaf_vertex(k).get(l) + &beta[k];
        debug_assert_eq!(p, line.leaf_vertex(l).get(k) + &beta[l]);
        p
    })
    .expect("n >= 3")
}

/// Position of the vertex carrying leaf `k`:
/// `x_l = p_kl` for `l != k` and `x_k = max_{i != j} (p_ki + p_kj - p_ij)`.
pub fn leaf_vertex_from_plucker(p: &PlueckerVector, k: usize) -> ProjPoint {
    let n = p.n();
    let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let mut xk: Option<Rational> = None;
    for (a, &i) in others.iter().enumerate() {
        for &j in &others[a + 1..] {
            let cand = p.get(k, i) + p.get(k, j) - p.get(i, j);
            if xk.as_ref().is_none_or(|x| cand > *x) {
                xk = Some(cand);
            }
        }
    }
    let xk = xk.expect("n >= 3");
    ProjPoint::new((0..n).map(|l| if l == k { xk.clone() } else { p.get(k, l).clone() }).collect())
}

/// Reconstructs the line with Plücker vector `p`.
///
/// Rooted at the last leaf, `g(i, j) = p_ij - p_{i,n} - p_{j,n}` is the depth
/// of the meet of leaves i and j; its level sets give the clusters, and depth
/// differences give the lattice lengths. Zero-length edges never arise, so
/// unresolved quartets become higher-valent nodes.
pub fn plucker_to_tree(p: &PlueckerVector) -> Result<EmbeddedLine> {
    if let Some(q) = p.violation() {
        return Err(Error::NotPlucker(q));
    }
    let n = p.n();
    let last = n - 1;
    let depth = |i: usize, j: usize| p.get(i, j) - p.get(i, last) - p.get(j, last);
    let mut levels: BTreeMap<LeafSet, Rational> = BTreeMap::new();
    for i in 0..last {
        for j in i + 1..last {
            let h = depth(i, j);
            let cluster: LeafSet = (0..last).filter(|&k| k == i || (k != i && depth(i, k) >= h)).collect();
            levels.insert(cluster, h);
        }
    }
    let clusters: Vec<LeafSet> = levels.keys().copied().collect();
    let (topology, node_sets) = hierarchy(n, &clusters);
    let level = |s: LeafSet| -> Rational {
        // a cluster's level is the smallest depth among its pairs
        levels.get(&s).cloned().expect("every node set is a cluster")
    };
    let lengths: Vec<Rational> =
        topology.edges().iter().map(|&(a, b)| level(node_sets[b]) - level(node_sets[a])).collect();
    let root = leaf_vertex_from_plucker(p, last);
    embed(topology, lengths, 0, root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::{rat, ratio};

    fn set(v: &[usize]) -> LeafSet {
        v.iter().map(|&i| i - 1).collect()
    }

    fn lsq() -> EmbeddedLine {
        crate::fixtures::square_line()
    }

    #[test]
    fn embed_lsq() {
        let l = lsq();
        assert_eq!(l.leaf_vertex(0), &ProjPoint::from_ints(&[3, 1, 2, 1]));
        assert_eq!(l.leaf_vertex(2), &ProjPoint::from_ints(&[2, 0, 1, 0]));
        assert_eq!(l.leaf_vertex(3), &ProjPoint::from_ints(&[1, 0, 0, 0]));
    }

    #[test]
    fn embed_star_and_errors() {
        let star = embed(TreeTopology::star(3).unwrap(), vec![], 0, ProjPoint::zero(3)).unwrap();
        assert!(star.lengths().is_empty());
        let topo = TreeTopology::from_splits(4, &[set(&[1, 2])]).unwrap();
        assert_eq!(embed(topo, vec![rat(0)], 0, ProjPoint::zero(4)).unwrap_err(), Error::NonPositiveLength(0));
    }

    #[test]
    fn containment() {
        let l = lsq();
        assert!(line_contains(&l, &ProjPoint::from_ints(&[1, 0, 0, 0])));
        let mid = ProjPoint::new(vec![ratio(3, 2), rat(0), ratio(1, 2), rat(0)]);
        assert!(line_contains(&l, &mid));
        assert!(!line_contains(&l, &ProjPoint::from_ints(&[0, 1, 0, 0])));
        // far out on the ray of leaf 2
        assert!(line_contains(&l, &ProjPoint::from_ints(&[1, 7, 0, 0])));
        assert!(!line_contains(&l, &ProjPoint::from_ints(&[1, 7, 1, 0])));
    }

    #[test]
    fn plucker_of_lsq() {
        let p = tree_to_plucker(&lsq());
        assert_eq!(p.values(), [1, 2, 1, 0, 0, 0].map(rat).as_slice());
        let back = plucker_to_tree(&p).unwrap();
        assert_eq!(back, lsq());
        assert_eq!(back.lengths(), &[rat(1)]);
        assert_eq!(back.leaf_vertex(0), &ProjPoint::from_ints(&[3, 1, 2, 1]));
        assert_eq!(back.leaf_vertex(1), &ProjPoint::from_ints(&[1, 0, 0, 0]));
    }

    #[test]
    fn plucker_star_cases() {
        let v = ProjPoint::from_ints(&[4, -1, 0]);
        let star = embed(TreeTopology::star(3).unwrap(), vec![], 0, v.clone()).unwrap();
        let p = tree_to_plucker(&star);
        let expected = PlueckerVector::from_fn(3, |i, j| v.get(i) + v.get(j)).unwrap();
        assert_eq!(p, expected);

        let zero = PlueckerVector::new(4, vec![rat(0); 6]).unwrap();
        let t = plucker_to_tree(&zero).unwrap();
        assert_eq!(t.topology().node_count(), 1);
        assert_eq!(t.topology().valence(0), 4);
        assert_eq!(t.coords(0), &ProjPoint::zero(4));
    }

    #[test]
    fn invalid_plucker() {
        let p = PlueckerVector::new(4, [1, 2, 1, 0, 0, 1].map(rat).to_vec()).unwrap();
        assert_eq!(plucker_to_tree(&p).unwrap_err(), Error::NotPlucker([0, 1, 2, 3]));
    }

    #[test]
    fn translation_invariance() {
        let l = lsq();
        let shifted = l.translate(&vec![ratio(5, 3); 4]);
        assert_eq!(tree_to_plucker(&shifted), tree_to_plucker(&l));
    }

    #[test]
    fn split_listing() {
        assert_eq!(lsq().topology().splits().iter().map(|s| s.1).collect::<Vec<_>>(), vec![set(&[1, 3])]);
        let cat = TreeTopology::from_splits(5, &[set(&[1, 2]), set(&[1, 2, 3])]).unwrap();
        assert_eq!(cat.split_set(), [set(&[1, 2]), set(&[1, 2, 3])].into_iter().collect());
        assert!(cat.is_trivalent());
        assert!(TreeTopology::star(5).unwrap().splits().is_empty());
        assert!(TreeTopology::from_splits(4, &[set(&[1, 2]), set(&[1, 3])]).is_err());
    }
}
