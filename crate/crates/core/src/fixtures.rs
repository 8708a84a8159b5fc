//! Small named support sets and lines used throughout tests and the CLI.

use crate::primitives::{rat, ProjPoint, SupportSet};
use crate::tree::{embed, EmbeddedLine, LeafSet, TreeTopology};

/// The unit square `{(0,0),(1,0),(0,1),(1,1)}` in degree 2.
pub fn square() -> SupportSet {
    SupportSet::new(2, vec![[0, 0, 2], [1, 0, 1], [0, 1, 1], [1, 1, 0]]).unwrap()
}

/// The three vertices of the standard triangle (lines).
pub fn triangle() -> SupportSet {
    SupportSet::new(1, vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
}

/// Five lattice points on the boundary of the degree-2 triangle.
pub fn conic_boundary() -> SupportSet {
    SupportSet::from_planar(2, &[(0, 0), (1, 0), (2, 0), (0, 1), (0, 2)]).unwrap()
}

/// All six lattice points of the degree-2 triangle.
pub fn conic() -> SupportSet {
    SupportSet::from_planar(2, &[(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)]).unwrap()
}

/// The line with split {1,3}|{2,4} of length 1, vertices (3,1,2,1) and (1,0,0,0).
pub fn square_line() -> EmbeddedLine {
    let split: LeafSet = [0, 2].into_iter().collect();
    let topo = TreeTopology::from_splits(4, &[split]).unwrap();
    let w = topo.leaf_node(1);
    embed(topo, vec![rat(1)], w, ProjPoint::from_ints(&[1, 0, 0, 0])).unwrap()
}

/// The two points `(0,0,0)` and `(2,1,0)` whose stable pencil is [`square_line`].
pub fn square_configuration() -> Vec<ProjPoint> {
    vec![ProjPoint::from_ints(&[0, 0, 0]), ProjPoint::from_ints(&[2, 1, 0])]
}
