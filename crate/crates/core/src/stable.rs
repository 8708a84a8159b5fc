//! Tropical determinants and stable pencils through point configurations.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::primitives::{dot, rat, ProjPoint, Rational, SupportSet};
use crate::subdivision::curve_contains;
use crate::tree::{plucker_to_tree, EmbeddedLine, PlueckerVector};

/// `M[k][l] = a_l · P_k` for a configuration of `n - 2` points.
pub fn value_matrix(a: &SupportSet, config: &[ProjPoint]) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    if config.len() + 2 != n {
        return Err(Error::ConfigurationSize { expected: n - 2, got: config.len() });
    }
    if let Some(p) = config.iter().find(|p| p.dim() != 3) {
        return Err(Error::DimensionMismatch { expected: 3, got: p.dim() });
    }
    Ok(config.iter().map(|p| a.points().iter().map(|e| dot(e, p)).collect()).collect())
}

/// The square submatrix without columns `i` and `j`.
pub fn minor(m: &[Vec<Rational>], i: usize, j: usize) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| row.iter().enumerate().filter(|&(l, _)| l != i && l != j).map(|(_, x)| x.clone()).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropdetResult {
    pub value: Rational,
    /// `assignment[row] = column` of one optimal bijection.
    pub assignment: Vec<usize>,
    /// No other bijection attains `value`.
    pub unique: bool,
}

/// Minimum over bijections of the summed entries, solved as an assignment
/// problem with exact potentials. Uniqueness holds iff the reduced-cost-zero
/// graph has no alternating cycle through the optimum.
pub fn tropdet(m: &[Vec<Rational>]) -> TropdetResult {
    let k = m.len();
    assert!(m.iter().all(|row| row.len() == k), "square matrix expected");
    if k == 0 {
        return TropdetResult { value: rat(0), assignment: Vec::new(), unique: true };
    }
    // shortest augmenting paths; index 0 is a sentinel, rows/columns are 1-based
    let mut u = vec![rat(0); k + 1];
    let mut v = vec![rat(0); k + 1];
    let mut owner = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for row in 1..=k {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv: Vec<Option<Rational>> = vec![None; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = &m[i0 - 1][j - 1] - &u[i0] - &v[j];
                if minv[j].as_ref().is_none_or(|x| cur < *x) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().unwrap();
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=k {
                if used[j] {
                    u[owner[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(x) = minv[j].as_mut() {
                    *x -= &delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; k];
    for j in 1..=k {
        assignment[owner[j] - 1] = j - 1;
    }
    let value = (0..k).map(|r| &m[r][assignment[r]]).sum();
    let reduced_zero = |r: usize, c: usize| (&m[r][c] - &u[r + 1] - &v[c + 1]).is_zero();
    debug_assert!((0..k).all(|r| (0..k).all(|c| !(&m[r][c] - &u[r + 1] - &v[c + 1]).is_negative())));
    // row r -> row r' when r could take r''s column at zero reduced cost
    let succ: Vec<Vec<usize>> =
        (0..k).map(|r| (0..k).filter(|&r2| r2 != r && reduced_zero(r, assignment[r2])).collect()).collect();
    TropdetResult { value, assignment, unique: !has_cycle(&succ) }
}

fn has_cycle(succ: &[Vec<usize>]) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; succ.len()];
    fn visit(x: usize, succ: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[x] = 1;
        for &y in &succ[x] {
            if state[y] == 1 || (state[y] == 0 && visit(y, succ, state)) {
                return true;
            }
        }
        state[x] = 2;
        false
    }
    (0..succ.len()).any(|x| state[x] == 0 && visit(x, succ, &mut state))
}

/// Generality verdict: the first pair (lexicographic) whose minor is
/// tropically singular, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generality {
    pub singular_pair: Option<(usize, usize)>,
}

impl Generality {
    pub fn is_general(&self) -> bool {
        self.singular_pair.is_none()
    }
}

pub fn is_general(a: &SupportSet, config: &[ProjPoint]) -> Result<Generality> {
    let m = value_matrix(a, config)?;
    let n = a.len();
    for i in 0..n {
        for j in i + 1..n {
            if !tropdet(&minor(&m, i, j)).unique {
                return Ok(Generality { singular_pair: Some((i, j)) });
            }
        }
    }
    Ok(Generality { singular_pair: None })
}

/// `p_ij = tropdet(M^(i,j))`.
pub fn plucker_vector(a: &SupportSet, config: &[ProjPoint]) -> Result<PlueckerVector> {
    let m = value_matrix(a, config)?;
    PlueckerVector::from_fn(a.len(), |i, j| tropdet(&minor(&m, i, j)).value)
}

/// The stable pencil `L_C`: the tropical line with Plücker coordinates given
/// by the maximal minors of the value matrix.
pub fn stable_pencil(a: &SupportSet, config: &[ProjPoint]) -> Result<EmbeddedLine> {
    plucker_to_tree(&plucker_vector(a, config)?)
}

/// Whether the curves of `line` pass through every point of `config`, checked
/// at all vertices and `samples` interior points of each edge and ray.
pub fn curves_through(a: &SupportSet, config: &[ProjPoint], line: &EmbeddedLine, samples: usize) -> Result<bool> {
    if line.n() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: line.n() });
    }
    let topo = line.topology();
    let mut coeffs: Vec<ProjPoint> = line.all_coords().to_vec();
    for (e, &(start, _)) in topo.edges().iter().enumerate() {
        let side = topo.edge_side(e);
        for s in 1..=samples {
            let t = &line.lengths()[e] * Rational::new((s as i64).into(), (samples as i64 + 1).into());
            coeffs.push(line.coords(start).step(|m| side.contains(m), &t));
        }
    }
    for k in 0..line.n() {
        for s in 1..=samples {
            coeffs.push(line.leaf_vertex(k).step(|m| m == k, &rat(s as i64)));
        }
    }
    for c in &coeffs {
        for p in config {
            if !curve_contains(a, c, p)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
