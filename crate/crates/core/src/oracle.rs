//! Slow reference implementations for differential testing.
//!
//! Nothing here shares code paths with the fast routines it checks: the
//! determinant enumerates every bijection, fixedness is sampled at every
//! breakpoint, and perturbed pencils find their splits by brute force over
//! leaf subsets in first-order infinitesimal arithmetic.

use std::cmp::Ordering;
use std::ops::{Add, Neg, Sub};

use num_traits::Signed;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pencil::shifted_line;
use crate::primitives::{dot, min_profile, rat, ProjPoint, Rational, SupportSet};
use crate::random;
use crate::stable::value_matrix;
use crate::tree::{embed, EmbeddedLine, LeafSet, TreeTopology};

/// `value + eps·ε` for a positive infinitesimal ε, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpsRational {
    pub value: Rational,
    pub eps: Rational,
}

impl EpsRational {
    pub fn new(value: Rational, eps: Rational) -> Self {
        EpsRational { value, eps }
    }

    pub fn exact(value: Rational) -> Self {
        EpsRational { value, eps: rat(0) }
    }
}

impl Add for EpsRational {
    type Output = EpsRational;
    fn add(self, o: EpsRational) -> EpsRational {
        EpsRational::new(self.value + o.value, self.eps + o.eps)
    }
}

impl Add for &EpsRational {
    type Output = EpsRational;
    fn add(self, o: &EpsRational) -> EpsRational {
        EpsRational::new(&self.value + &o.value, &self.eps + &o.eps)
    }
}

impl Sub for &EpsRational {
    type Output = EpsRational;
    fn sub(self, o: &EpsRational) -> EpsRational {
        EpsRational::new(&self.value - &o.value, &self.eps - &o.eps)
    }
}

impl Neg for EpsRational {
    type Output = EpsRational;
    fn neg(self) -> EpsRational {
        EpsRational::new(-self.value, -self.eps)
    }
}

pub const MAX_BRUTE: usize = 8;

/// Minimum over all bijections and the number of bijections attaining it.
pub fn brute_tropdet<T>(m: &[Vec<T>]) -> Result<(T, usize)>
where
    T: Ord + Clone + Add<Output = T>,
{
    let k = m.len();
    if k == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if k > MAX_BRUTE {
        return Err(Error::TooLarge(k, MAX_BRUTE));
    }
    let mut best: Option<(T, usize)> = None;
    let mut perm: Vec<usize> = (0..k).collect();
    // Heap's algorithm
    let mut c = vec![0usize; k];
    let mut visit = |perm: &[usize]| {
        let total = (1..k).fold(m[0][perm[0]].clone(), |acc, r| acc + m[r][perm[r]].clone());
        best = match best.take() {
            None => Some((total, 1)),
            Some((b, count)) => match total.cmp(&b) {
                Ordering::Less => Some((total, 1)),
                Ordering::Equal => Some((b, count + 1)),
                Ordering::Greater => Some((b, count)),
            },
        };
    };
    visit(&perm);
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best.expect("at least one bijection"))
}

/// Fixedness decided by evaluating the terms at every breakpoint of every
/// edge and ray of `L + A·P`, and at one point inside every piece between
/// consecutive breakpoints.
pub fn sampled_fixed(line: &EmbeddedLine, a: &SupportSet, p: &ProjPoint) -> Result<bool> {
    let g = shifted_line(line, a, p)?;
    let topo = g.topology();
    let n = g.n();
    let twice = |q: &ProjPoint| min_profile(q.coords()).unwrap().multiplicity() >= 2;
    for (e, &(start, _)) in topo.edges().iter().enumerate() {
        let q = g.coords(start);
        let side = topo.edge_side(e);
        let len = g.lengths()[e].clone();
        let mut ts = vec![rat(0), len.clone()];
        for m in side.iter() {
            for m2 in side.complement(n).iter() {
                let t = q.get(m2) - q.get(m);
                if t.is_positive() && t < len {
                    ts.push(t);
                }
            }
        }
        if !check_samples(&mut ts, None, |t| twice(&q.step(|m| side.contains(m), t))) {
            return Ok(false);
        }
    }
    for k in 0..n {
        let q = g.leaf_vertex(k);
        let mut ts = vec![rat(0)];
        ts.extend((0..n).filter(|&m| m != k).map(|m| q.get(m) - q.get(k)).filter(|t| t.is_positive()));
        if !check_samples(&mut ts, Some(rat(1)), |t| twice(&q.step(|m| m == k, t))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tests breakpoints, midpoints, and (for rays) one point past the last breakpoint.
fn check_samples(ts: &mut Vec<Rational>, beyond: Option<Rational>, ok: impl Fn(&Rational) -> bool) -> bool {
    ts.sort();
    ts.dedup();
    let mut samples = ts.clone();
    for w in ts.windows(2) {
        samples.push((&w[0] + &w[1]) / rat(2));
    }
    if let Some(step) = beyond {
        samples.push(ts.last().unwrap() + step);
    }
    samples.iter().all(ok)
}

/// The stable pencil computed as the ε → 0 limit of pencils through an
/// infinitesimally perturbed configuration. Each seed draws one perturbation;
/// the first one making every minor's optimum unique is used.
pub fn perturbed_pencil(a: &SupportSet, config: &[ProjPoint], seeds: &[u64]) -> Result<EmbeddedLine> {
    let base = value_matrix(a, config)?;
    for &seed in seeds {
        let mut rng = random::seeded(seed);
        let shifts: Vec<ProjPoint> = config
            .iter()
            .map(|_| ProjPoint::new(vec![rat(rng.gen_range(-1000..=1000)), rat(rng.gen_range(-1000..=1000)), rat(0)]))
            .collect();
        let m: Vec<Vec<EpsRational>> = base
            .iter()
            .zip(&shifts)
            .map(|(row, r)| row.iter().zip(a.points()).map(|(x, e)| EpsRational::new(x.clone(), dot(e, r))).collect())
            .collect();
        match limit_line(a.len(), &m) {
            Err(Error::PerturbationNotGeneric) => continue,
            other => return other,
        }
    }
    Err(Error::PerturbationNotGeneric)
}

fn limit_line(n: usize, m: &[Vec<EpsRational>]) -> Result<EmbeddedLine> {
    let mut p = vec![vec![EpsRational::exact(rat(0)); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let sub: Vec<Vec<EpsRational>> = m
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(l, _)| l != i && l != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let (value, count) = brute_tropdet(&sub)?;
            if count != 1 {
                return Err(Error::PerturbationNotGeneric);
            }
            p[i][j] = value.clone();
            p[j][i] = value;
        }
    }
    // a subset S (without the last leaf) is a split iff every crossing quartet
    // has the same-side sum strictly largest; its length is the least gap
    let mut splits = Vec::new();
    let mut lengths = Vec::new();
    let last = n - 1;
    for bits in 1u64..(1 << last) {
        let s = LeafSet::from_bits(bits);
        let t = s.complement(n);
        if s.len() < 2 || t.len() < 2 {
            continue;
        }
        let mut least: Option<EpsRational> = None;
        let ins: Vec<usize> = s.iter().collect();
        let outs: Vec<usize> = t.iter().collect();
        'quartets: for (x, &i) in ins.iter().enumerate() {
            for &j in &ins[x + 1..] {
                for (y, &k) in outs.iter().enumerate() {
                    for &l in &outs[y + 1..] {
                        let same = &p[i][j] + &p[k][l];
                        let cross = (&p[i][k] + &p[j][l]).max(&p[i][l] + &p[j][k]);
                        let gap = &same - &cross;
                        if gap <= EpsRational::exact(rat(0)) {
                            least = None;
                            break 'quartets;
                        }
                        if least.as_ref().is_none_or(|g| gap < *g) {
                            least = Some(gap);
                        }
                    }
                }
            }
        }
        if let Some(gap) = least {
            if gap.value.is_positive() {
                splits.push(s);
                lengths.push(gap.value);
            }
        }
    }
    let topo = TreeTopology::from_splits(n, &splits)?;
    let by_split: Vec<Rational> =
        topo.splits().iter().map(|(_, s)| lengths[splits.iter().position(|x| x == s).unwrap()].clone()).collect();
    let vertex = |k: usize| -> ProjPoint {
        let mut xk: Option<EpsRational> = None;
        for i in (0..n).filter(|&i| i != k) {
            for j in (i + 1..n).filter(|&j| j != k) {
                let cand = &(&p[k][i] + &p[k][j]) - &p[i][j];
                if xk.as_ref().is_none_or(|x| cand > *x) {
                    xk = Some(cand);
                }
            }
        }
        let xk = xk.unwrap().value;
        ProjPoint::new((0..n).map(|l| if l == k { xk.clone() } else { p[k][l].value.clone() }).collect())
    };
    let anchor = topo.leaf_node(last);
    let line = embed(topo, by_split, anchor, vertex(last))?;
    if (0..n).any(|k| *line.leaf_vertex(k) != vertex(k)) {
        return Err(Error::VerificationFailed("leaf vertices disagree with the limit coordinates".into()));
    }
    Ok(line)
}
