//! Seeded generators for randomized checks and for `realize_type`'s fallback
//! heights. All draws come from ChaCha8 so runs are reproducible per seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::primitives::{rat, ProjPoint, Rational, SupportSet};
use crate::tree::{embed, EmbeddedLine, LeafInsertion, LeafSet, LinePoint, TreeTopology};

pub type Rng8 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p / q` with `|p / q| <= bound` and `1 <= q <= max_den`.
pub fn rational(rng: &mut Rng8, bound: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    Rational::new(rng.gen_range(-bound * q..=bound * q).into(), q.into())
}

/// Strictly positive rational up to `bound`.
pub fn positive_rational(rng: &mut Rng8, bound: i64, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    Rational::new(rng.gen_range(1..=bound * q).into(), q.into())
}

pub fn point(rng: &mut Rng8, dim: usize, bound: i64, max_den: i64) -> ProjPoint {
    ProjPoint::new((0..dim).map(|_| rational(rng, bound, max_den)).collect())
}

/// `n - 2` random points of TP^2 for the support `a`.
pub fn configuration(rng: &mut Rng8, a: &SupportSet, bound: i64, max_den: i64) -> Vec<ProjPoint> {
    (0..a.len() - 2).map(|_| point(rng, 3, bound, max_den)).collect()
}

pub fn matrix(rng: &mut Rng8, k: usize, bound: i64) -> Vec<Vec<Rational>> {
    (0..k).map(|_| (0..k).map(|_| rat(rng.gen_range(-bound..=bound))).collect()).collect()
}

/// A uniformly random trivalent topology on `n` leaves.
pub fn trivalent_type(rng: &mut Rng8, n: usize) -> TreeTopology {
    let mut t = LeafInsertion::tripod(n);
    while t.leaves() < n {
        let e = rng.gen_range(0..t.edge_count());
        t = t.insert(e);
    }
    t.topology()
}

/// A random topology where each internal edge of a trivalent tree survives
/// with probability 1/2, so higher-valent nodes occur.
pub fn topology(rng: &mut Rng8, n: usize) -> TreeTopology {
    let splits: Vec<LeafSet> = trivalent_type(rng, n).split_set().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    TreeTopology::from_splits(n, &splits).expect("subsets of a split system are compatible")
}

/// A random embedded line with the given topology.
pub fn line_with(rng: &mut Rng8, topo: TreeTopology, bound: i64, max_den: i64) -> EmbeddedLine {
    let n = topo.n();
    let lengths = (0..topo.edges().len()).map(|_| positive_rational(rng, bound, max_den)).collect();
    embed(topo, lengths, 0, point(rng, n, bound, max_den)).expect("positive lengths")
}

pub fn line(rng: &mut Rng8, n: usize, bound: i64, max_den: i64) -> EmbeddedLine {
    let topo = topology(rng, n);
    line_with(rng, topo, bound, max_den)
}

/// A line with a planted point: `Γ`, the point `p`, an index set `I` and the
/// level `t = min_j |I \ I_j|` over the branches `I_j` at `p`. The coordinates
/// of `p` are 0 on `I` and positive elsewhere, and `t >= 2`.
#[derive(Clone, Debug)]
pub struct Planted {
    pub line: EmbeddedLine,
    pub point: LinePoint,
    pub set: LeafSet,
    pub level: usize,
}

pub fn planted_line(rng: &mut Rng8, n: usize) -> Planted {
    loop {
        let topo = topology(rng, n);
        let lengths: Vec<Rational> = (0..topo.edges().len()).map(|_| positive_rational(rng, 3, 4)).collect();
        let on_edge = !lengths.is_empty() && rng.gen_bool(0.3);
        let (point, branches) = if on_edge {
            let e = rng.gen_range(0..lengths.len());
            let t = &lengths[e] * Rational::new(rng.gen_range(1..4).into(), 4.into());
            let far = topo.edge_side(e);
            (LinePoint::Edge { edge: e, t }, vec![far, far.complement(n)])
        } else {
            let v = rng.gen_range(0..topo.node_count());
            (LinePoint::Vertex(v), topo.branches(v))
        };
        let mut leaves: Vec<usize> = (0..n).collect();
        leaves.shuffle(rng);
        let size = rng.gen_range(2..=n);
        let set: LeafSet = leaves[..size].iter().copied().collect();
        let level = branches.iter().map(|b| set.minus(*b).len()).min().unwrap();
        if level < 2 {
            continue;
        }
        let coords = ProjPoint::new(
            (0..n).map(|m| if set.contains(m) { rat(0) } else { positive_rational(rng, 3, 4) }).collect(),
        );
        let line = match &point {
            LinePoint::Vertex(v) => embed(topo, lengths, *v, coords),
            LinePoint::Edge { edge, t } => {
                let (a, _) = topo.edges()[*edge];
                let far = topo.edge_side(*edge);
                let start = coords.step(|m| far.contains(m), &-t.clone());
                embed(topo, lengths, a, start)
            }
            LinePoint::Ray { .. } => unreachable!(),
        }
        .expect("positive lengths");
        return Planted { line, point, set, level };
    }
}
