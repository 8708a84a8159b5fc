//! Exact scalars, tropical projective points, support sets and the planar
//! predicates every other module builds on.
//!
//! Nothing here touches floating point: every question asked downstream is a
//! tie test ("is the minimum attained at least twice"), and ties only survive
//! exact arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"` (q nonzero). Whitespace around the parts is ignored.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("malformed rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A point of the tropical projective space TP^{m-1} = R^m / R(1,...,1).
///
/// Stored in canonical form: the representative whose last coordinate is 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Vec<Rational>);

impl ProjPoint {
    /// Accepts any representative. Panics on an empty coordinate list.
    pub fn new(mut coords: Vec<Rational>) -> Self {
        let last = coords.last().expect("ProjPoint needs at least one coordinate").clone();
        if !last.is_zero() {
            for x in &mut coords {
                *x -= &last;
            }
        }
        ProjPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        ProjPoint::new(coords.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        ProjPoint(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    /// Coordinatewise sum with a vector of the same length (any representative).
    pub fn translate(&self, shift: &[Rational]) -> ProjPoint {
        assert_eq!(shift.len(), self.dim());
        ProjPoint::new(self.0.iter().zip(shift).map(|(a, b)| a + b).collect())
    }

    /// `self + amount * e_I`, where `members` flags the coordinates in I.
    pub fn step(&self, members: impl Fn(usize) -> bool, amount: &Rational) -> ProjPoint {
        ProjPoint::new(
            self.0.iter().enumerate().map(|(i, x)| if members(i) { x + amount } else { x.clone() }).collect(),
        )
    }

    /// A point of TP^2 given by its coordinates in the z = 0 chart.
    pub fn chart(x: Rational, y: Rational) -> ProjPoint {
        ProjPoint(vec![x, y, Rational::zero()])
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(x))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// An exponent vector `(r, s, t)` with `r + s + t = d`.
pub type Exponent = [i64; 3];

/// The support set of a family of plane curves: distinct exponents of a fixed
/// degree whose convex hull is two-dimensional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSet {
    degree: i64,
    points: Vec<Exponent>,
}

impl SupportSet {
    pub fn new(degree: i64, points: Vec<Exponent>) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidSupport(format!("degree {degree} < 1")));
        }
        if points.len() < 3 {
            return Err(Error::InvalidSupport(format!("{} points, need at least 3", points.len())));
        }
        if points.len() > 64 {
            return Err(Error::InvalidSupport("more than 64 points".into()));
        }
        for p in &points {
            if p.iter().any(|&x| x < 0) || p.iter().sum::<i64>() != degree {
                return Err(Error::InvalidSupport(format!(
                    "exponent {p:?} is not a non-negative vector of degree {degree}"
                )));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::InvalidSupport(format!("duplicate exponent {:?}", points[i])));
                }
            }
        }
        let support = SupportSet { degree, points };
        let planar: Vec<_> = (0..support.len()).map(|i| support.planar(i)).collect();
        // exponents are distinct and share a degree, so their projections are distinct
        let spans = planar.iter().any(|&r| orient2d(planar[0], planar[1], r) != 0);
        if !spans {
            return Err(Error::InvalidSupport("convex hull is not two-dimensional".into()));
        }
        Ok(support)
    }

    /// Builds a support set from `(r, s)` projections; `t = d - r - s`.
    pub fn from_planar(degree: i64, points: &[(i64, i64)]) -> Result<Self> {
        SupportSet::new(degree, points.iter().map(|&(r, s)| [r, s, degree - r - s]).collect())
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Exponent] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Exponent {
        self.points[i]
    }

    /// The `(r, s)` projection used for all planar geometry.
    pub fn planar(&self, i: usize) -> (i64, i64) {
        (self.points[i][0], self.points[i][1])
    }

    /// The values `a_i . P` for all i.
    pub fn dots(&self, p: &ProjPoint) -> Vec<Rational> {
        self.points.iter().map(|a| dot(a, p)).collect()
    }

    /// The tropical polynomial's terms `c_i + a_i . P`.
    pub fn terms(&self, c: &ProjPoint, p: &ProjPoint) -> Vec<Rational> {
        assert_eq!(c.dim(), self.len());
        self.points.iter().zip(c.coords()).map(|(a, ci)| ci + dot(a, p)).collect()
    }
}

/// Minimum of a list of values together with every index attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinProfile {
    pub value: Rational,
    pub argmin: Vec<usize>,
}

impl MinProfile {
    pub fn multiplicity(&self) -> usize {
        self.argmin.len()
    }
}

pub fn min_profile(values: &[Rational]) -> Result<MinProfile> {
    let first = values.first().ok_or(Error::EmptyTerms)?;
    let mut value = first.clone();
    let mut argmin = vec![0];
    for (i, v) in values.iter().enumerate().skip(1) {
        match v.cmp(&value) {
            Ordering::Less => {
                value = v.clone();
                argmin.clear();
                argmin.push(i);
            }
            Ordering::Equal => argmin.push(i),
            Ordering::Greater => {}
        }
    }
    Ok(MinProfile { value, argmin })
}

/// Sign of `det(q - p, r - p)`: +1 counter-clockwise, -1 clockwise, 0 collinear.
pub fn orient2d(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> i32 {
    let det = (q.0 as i128 - p.0 as i128) * (r.1 as i128 - p.1 as i128)
        - (q.1 as i128 - p.1 as i128) * (r.0 as i128 - p.0 as i128);
    det.signum() as i32
}

/// `r x + s y + t z` for `P = (x, y, z)` in its canonical representative.
pub fn dot(a: &Exponent, p: &ProjPoint) -> Rational {
    assert_eq!(p.dim(), 3, "support points pair with points of TP^2");
    let c = p.coords();
    &c[0] * BigInt::from(a[0]) + &c[1] * BigInt::from(a[1]) + &c[2] * BigInt::from(a[2])
}

/// Exact planar geometry on small integer point sets.
pub mod plane {
    use super::orient2d;

    pub type Pt = (i64, i64);

    /// `q` lies on the closed segment `[a, b]`.
    pub fn on_segment(a: Pt, b: Pt, q: Pt) -> bool {
        orient2d(a, b, q) == 0
            && q.0 >= a.0.min(b.0)
            && q.0 <= a.0.max(b.0)
            && q.1 >= a.1.min(b.1)
            && q.1 <= a.1.max(b.1)
    }

    /// `q` lies strictly between `a` and `b` on the segment.
    pub fn strictly_inside_segment(a: Pt, b: Pt, q: Pt) -> bool {
        q != a && q != b && on_segment(a, b, q)
    }

    /// Convex hull vertices in counter-clockwise order, collinear points dropped.
    /// Degenerate inputs give one point or the two extreme points.
    pub fn hull(points: &[Pt]) -> Vec<Pt> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if pts.len() <= 2 {
            return pts;
        }
        let mut lower: Vec<Pt> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && orient2d(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Pt> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && orient2d(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        lower
    }

    /// Closed containment of `q` in the convex hull of `points`.
    pub fn hull_contains(points: &[Pt], q: Pt) -> bool {
        let h = hull(points);
        match h.len() {
            0 => false,
            1 => h[0] == q,
            2 => on_segment(h[0], h[1], q),
            k => (0..k).all(|i| orient2d(h[i], h[(i + 1) % k], q) >= 0),
        }
    }

    /// Closed segments `[a, b]` and `[c, d]` share a point.
    pub fn segments_meet(a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
        let o1 = orient2d(a, b, c);
        let o2 = orient2d(a, b, d);
        let o3 = orient2d(c, d, a);
        let o4 = orient2d(c, d, b);
        if o1 * o2 < 0 && o3 * o4 < 0 {
            return true;
        }
        on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
    }

    /// The convex hulls of two finite point sets intersect.
    pub fn hulls_meet(p: &[Pt], q: &[Pt]) -> bool {
        if p.iter().any(|&x| hull_contains(q, x)) || q.iter().any(|&x| hull_contains(p, x)) {
            return true;
        }
        let hp = hull(p);
        let hq = hull(q);
        let edges = |h: &[Pt]| -> Vec<(Pt, Pt)> {
            match h.len() {
                0 | 1 => Vec::new(),
                2 => vec![(h[0], h[1])],
                k => (0..k).map(|i| (h[i], h[(i + 1) % k])).collect(),
            }
        };
        edges(&hp).iter().any(|&(a, b)| edges(&hq).iter().any(|&(c, d)| segments_meet(a, b, c, d)))
    }

    /// `conv(inner) ⊆ conv(outer)`.
    pub fn hull_within(inner: &[Pt], outer: &[Pt]) -> bool {
        inner.iter().all(|&x| hull_contains(outer, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn min_profile_examples() {
        let m = min_profile(&q(&[3, 1, 2, 1])).unwrap();
        assert_eq!(m.value, rat(1));
        assert_eq!(m.argmin, vec![1, 3]);
        let m = min_profile(&q(&[0, 0, 0])).unwrap();
        assert_eq!(m.argmin, vec![0, 1, 2]);
        let m = min_profile(&q(&[5])).unwrap();
        assert_eq!((m.value, m.argmin), (rat(5), vec![0]));
        assert_eq!(min_profile(&[]), Err(Error::EmptyTerms));
    }

    #[test]
    fn orient2d_examples() {
        assert_eq!(orient2d((0, 0), (1, 0), (0, 1)), 1);
        assert_eq!(orient2d((0, 0), (1, 1), (2, 2)), 0);
        assert_eq!(orient2d((0, 0), (0, 1), (1, 0)), -1);
    }

    #[test]
    fn dot_examples() {
        let p = ProjPoint::from_ints(&[2, 1, 0]);
        assert_eq!(dot(&[1, 1, 0], &p), rat(3));
        assert_eq!(dot(&[1, 0, 1], &p), rat(2));
        let p = ProjPoint::new(vec![ratio(7, 3), rat(-4), rat(0)]);
        assert_eq!(dot(&[0, 0, 2], &p), rat(0));
    }

    #[test]
    fn canonical_representative() {
        let p = ProjPoint::from_ints(&[3, 1, 2, 1]);
        assert_eq!(p.coords(), q(&[2, 0, 1, 0]).as_slice());
        assert_eq!(p, ProjPoint::from_ints(&[2, 0, 1, 0]));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn support_validation() {
        assert!(SupportSet::from_planar(2, &[(0, 0), (1, 0), (2, 0)]).is_err());
        assert!(SupportSet::new(2, vec![[0, 0, 2], [1, 0, 1], [0, 1, 0]]).is_err());
        assert!(SupportSet::new(1, vec![[1, 0, 0], [0, 1, 0], [1, 0, 0]]).is_err());
        assert!(SupportSet::new(1, vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]).is_ok());
    }

    #[test]
    fn hull_and_containment() {
        let sq = [(0, 0), (1, 0), (0, 1), (1, 1), (1, 0)];
        assert_eq!(plane::hull(&sq).len(), 4);
        assert!(plane::hull_contains(&sq, (1, 1)));
        assert!(!plane::hull_contains(&sq, (2, 1)));
        assert!(plane::hulls_meet(&[(0, 0), (2, 2)], &[(0, 2), (2, 0)]));
        assert!(!plane::hulls_meet(&[(0, 0), (1, 0)], &[(0, 1), (1, 1)]));
        assert!(plane::hull_within(&[(1, 0)], &[(0, 0), (2, 0)]));
    }
}
