use proptest::prelude::*;

use tropical_pencil::fixtures::{conic, conic_boundary, square, triangle};
use tropical_pencil::json::{config_from_json, config_to_json, line_to_json, tree_from_json, TreeInput};
use tropical_pencil::oracle::{brute_tropdet, EpsRational};
use tropical_pencil::pencil::{fixed_locus, is_fixed, locus_contains, locus_union, skeleton_level, CellGeometry};
use tropical_pencil::primitives::{rat, Rational, SupportSet};
use tropical_pencil::random;
use tropical_pencil::stable::{plucker_vector, stable_pencil, tropdet};
use tropical_pencil::tree::{plucker_to_tree, tree_to_plucker, LeafSet};

fn support(k: usize) -> SupportSet {
    [triangle(), square(), conic_boundary(), conic()][k % 4].clone()
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5).prop_flat_map(|k| prop::collection::vec(prop::collection::vec(-3i64..=3, k), k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plucker_round_trip(seed in any::<u64>(), n in 3usize..=8) {
        let mut rng = random::seeded(seed);
        let line = random::line(&mut rng, n, 4, 3);
        let p = tree_to_plucker(&line);
        prop_assert_eq!(p.violation(), None);
        prop_assert_eq!(plucker_to_tree(&p).unwrap(), line);
    }

    #[test]
    fn line_json_round_trip(seed in any::<u64>(), n in 3usize..=8) {
        let mut rng = random::seeded(seed);
        let line = random::line(&mut rng, n, 4, 3);
        let v = line_to_json(&line);
        let back = tree_from_json(&v).unwrap();
        prop_assert_eq!(&back, &TreeInput::Line(line));
        prop_assert_eq!(line_to_json(&back.into_line().unwrap()), v);
    }

    #[test]
    fn config_json_round_trip(seed in any::<u64>(), k in 0usize..4) {
        let mut rng = random::seeded(seed);
        let c = random::configuration(&mut rng, &support(k), 5, 7);
        prop_assert_eq!(config_from_json(&config_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn tropdet_matches_brute_force(m in small_matrix()) {
        let m: Vec<Vec<Rational>> = m.into_iter().map(|r| r.into_iter().map(rat).collect()).collect();
        let fast = tropdet(&m);
        let (value, count) = brute_tropdet(&m).unwrap();
        prop_assert_eq!(&fast.value, &value);
        prop_assert_eq!(fast.unique, count == 1);
        let attained: Rational = fast.assignment.iter().enumerate().map(|(r, &c)| m[r][c].clone()).sum();
        prop_assert_eq!(attained, value);
    }

    #[test]
    fn eps_shift_breaks_ties(m in small_matrix()) {
        // distinct powers of two as infinitesimals pick out one optimum
        let k = m.len();
        let lifted: Vec<Vec<EpsRational>> = m
            .iter()
            .enumerate()
            .map(|(r, row)| row.iter().enumerate().map(|(c, &x)| {
                EpsRational::new(rat(x), rat(1 << (r * k + c)))
            }).collect())
            .collect();
        let (value, count) = brute_tropdet(&lifted).unwrap();
        prop_assert_eq!(count, 1);
        let exact: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        prop_assert_eq!(value.value, tropdet(&exact).value);
    }

    #[test]
    fn stable_pencil_is_a_line_through_the_points(seed in any::<u64>(), k in 0usize..4) {
        let a = support(k);
        let mut rng = random::seeded(seed);
        let c = random::configuration(&mut rng, &a, 4, 3);
        let line = stable_pencil(&a, &c).unwrap();
        prop_assert_eq!(tree_to_plucker(&line), plucker_vector(&a, &c).unwrap());
        let cells = fixed_locus(&line, &a).unwrap();
        for p in &c {
            prop_assert!(locus_contains(&cells, p));
        }
        for piece in locus_union(&cells) {
            let probe = match &piece {
                CellGeometry::Point(p) | CellGeometry::Segment(p, _) => p.clone(),
                CellGeometry::Ray { from, .. } => from.clone(),
                CellGeometry::Line { through, .. } => through.clone(),
            };
            prop_assert!(is_fixed(&line, &a, &probe).unwrap());
        }
    }

    #[test]
    fn translation_keeps_skeleton_level(seed in any::<u64>(), n in 3usize..=7) {
        let mut rng = random::seeded(seed);
        let planted = random::planted_line(&mut rng, n);
        let shift = vec![rat(3); n];
        prop_assert_eq!(skeleton_level(&planted.line.translate(&shift)), skeleton_level(&planted.line));
    }

    #[test]
    fn leaf_set_laws(a in 0u64..256, b in 0u64..256) {
        let (x, y) = (LeafSet::from_bits(a), LeafSet::from_bits(b));
        prop_assert_eq!(x.minus(y).union(x.intersection(y)), x);
        prop_assert_eq!(x.complement(8).complement(8), x);
        prop_assert_eq!(x.union(y).len() + x.intersection(y).len(), x.len() + y.len());
        prop_assert!(x.intersection(y).is_subset(x));
    }
}
