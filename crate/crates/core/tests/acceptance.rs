//! Acceptance criteria 1-8, one PASS/FAIL line each. Runs as a plain binary
//! under `cargo test` and exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use tropical_pencil::compat::{
    construct_configuration, count_compatible, enumerate_types, is_compatible, matching_value, minor_tropdet,
    path_points, realize_type, support_graph, unique_matching, RealizeOptions,
};
use tropical_pencil::fixtures::{conic, conic_boundary, square, triangle};
use tropical_pencil::oracle::{brute_tropdet, perturbed_pencil, sampled_fixed};
use tropical_pencil::pencil::{
    fixed_locus, is_fixed, locus_union, multiplicity_at, pi_gamma_point, pi_set, pi_set_predicted, shifted_line,
    skeleton_level, CellGeometry,
};
use tropical_pencil::primitives::{min_profile, ProjPoint, SupportSet};
use tropical_pencil::random::{self, Rng8};
use tropical_pencil::stable::{curves_through, is_general, stable_pencil, tropdet};
use tropical_pencil::tree::{EmbeddedLine, LeafSet, LinePoint};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pp(v: &[i64]) -> ProjPoint {
    ProjPoint::from_ints(v)
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn fixtures() -> Vec<(&'static str, SupportSet)> {
    vec![("square", square()), ("conic_boundary", conic_boundary()), ("conic", conic())]
}

fn random_config(rng: &mut Rng8, a: &SupportSet) -> Vec<ProjPoint> {
    random::configuration(rng, a, 4, 3)
}

fn square_loci() -> Outcome {
    let start = Instant::now();
    let a = square();
    let locus = |c: Vec<ProjPoint>| -> Result<Vec<CellGeometry>, String> {
        let line = stable_pencil(&a, &c).map_err(|e| e.to_string())?;
        Ok(locus_union(&fixed_locus(&line, &a).map_err(|e| e.to_string())?))
    };
    let diag = locus(vec![pp(&[0, 0, 0]), pp(&[1, 1, 0])])?;
    check(diag == vec![CellGeometry::Point(pp(&[0, 0, 0])), CellGeometry::Point(pp(&[1, 1, 0]))], || {
        format!("diagonal pair gave {diag:?}")
    })?;
    let side = locus(vec![pp(&[0, 0, 0]), pp(&[0, 1, 0])])?;
    check(side == vec![CellGeometry::Segment(pp(&[0, 0, 0]), pp(&[0, 1, 0]))], || {
        format!("vertical pair gave {side:?}")
    })?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("two points and one segment, {:?}", start.elapsed()))
}

fn counts() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for ((name, a), (want, total)) in fixtures().into_iter().zip([(2, 3), (5, 15), (14, 105)]) {
        let got = count_compatible(&a).map_err(|e| e.to_string())?;
        let all = enumerate_types(a.len()).map_err(|e| e.to_string())?.len();
        check((got, all) == (want, total), || format!("{name}: {got} of {all}, want {want} of {total}"))?;
        parts.push(format!("{got}/{all}"));
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{} in {:?}", parts.join(", "), start.elapsed()))
}

/// Every compatible type of every fixture, realized and pushed through the
/// configuration constructor.
fn realized_instances() -> Result<Vec<(SupportSet, EmbeddedLine, Vec<ProjPoint>)>, String> {
    let mut out = Vec::new();
    for (name, a) in fixtures() {
        for (k, t) in enumerate_types(a.len()).map_err(|e| e.to_string())?.iter().enumerate() {
            if !is_compatible(t, &a) {
                continue;
            }
            let line =
                realize_type(&a, t, &RealizeOptions::default()).map_err(|e| format!("{name} type {}: {e}", k + 1))?;
            let config = construct_configuration(&line, &a).map_err(|e| format!("{name} type {}: {e}", k + 1))?;
            out.push((a.clone(), line, config));
        }
    }
    Ok(out)
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let instances = realized_instances()?;
    for (a, line, config) in &instances {
        check(is_general(a, config).map_err(|e| e.to_string())?.is_general(), || format!("{config:?} not general"))?;
        let back = stable_pencil(a, config).map_err(|e| e.to_string())?;
        check(back == *line, || format!("stable pencil {back:?} differs from {line:?}"))?;
        check(back.all_coords() == line.all_coords() && back.lengths() == line.lengths(), || {
            "coordinates differ".into()
        })?;
    }
    check(instances.len() == 21, || format!("{} instances, want 21", instances.len()))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{} types, {:?}", instances.len(), start.elapsed()))
}

fn forward_compatibility() -> Outcome {
    let mut rng = random::seeded(4);
    let mut total = 0;
    for (name, a) in fixtures().into_iter().chain([("triangle", triangle())]) {
        for _ in 0..200 {
            let config = random_config(&mut rng, &a);
            let line = stable_pencil(&a, &config).map_err(|e| e.to_string())?;
            check(is_compatible(line.topology(), &a), || format!("{name}: {config:?} gives an incompatible pencil"))?;
            check(curves_through(&a, &config, &line, 3).map_err(|e| e.to_string())?, || {
                format!("{name}: curves miss {config:?}")
            })?;
            for p in &config {
                check(is_fixed(&line, &a, p).map_err(|e| e.to_string())?, || format!("{name}: {p:?} not fixed"))?;
            }
            total += 1;
        }
    }
    Ok(format!("{total} configurations"))
}

fn oracles() -> Outcome {
    let mut rng = random::seeded(5);
    use rand::Rng;
    let mut ties = 0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=6);
        let m = random::matrix(&mut rng, k, 3);
        let fast = tropdet(&m);
        let (value, count) = brute_tropdet(&m).map_err(|e| e.to_string())?;
        check(fast.value == value && fast.unique == (count == 1), || format!("tropdet disagrees on {m:?}"))?;
        ties += usize::from(count > 1);
    }

    let supports = [triangle(), square(), conic_boundary(), conic()];
    let mut fixed = 0;
    for round in 0..1000 {
        let a = &supports[round % supports.len()];
        let config = random_config(&mut rng, a);
        // half stable pencils, half arbitrary lines
        let line = if round % 2 == 0 {
            stable_pencil(a, &config).map_err(|e| e.to_string())?
        } else {
            random::line(&mut rng, a.len(), 4, 3)
        };
        let p = match rng.gen_range(0..3) {
            0 => config[rng.gen_range(0..config.len())].clone(),
            1 => {
                let pieces = locus_union(&fixed_locus(&line, a).map_err(|e| e.to_string())?);
                if pieces.is_empty() {
                    random::point(&mut rng, 3, 4, 3)
                } else {
                    match &pieces[rng.gen_range(0..pieces.len())] {
                        CellGeometry::Point(p) => p.clone(),
                        CellGeometry::Segment(p, _) => p.clone(),
                        CellGeometry::Ray { from, .. } => from.clone(),
                        CellGeometry::Line { through, .. } => through.clone(),
                    }
                }
            }
            _ => random::point(&mut rng, 3, 4, 3),
        };
        let fast = is_fixed(&line, a, &p).map_err(|e| e.to_string())?;
        let slow = sampled_fixed(&line, a, &p).map_err(|e| e.to_string())?;
        check(fast == slow, || format!("is_fixed {fast} vs sampled {slow} at {p:?}"))?;
        fixed += usize::from(fast);
    }

    let mut degenerate = 0;
    for round in 0..200 {
        let a = &supports[round % supports.len()];
        // integer points in a small box collide often
        let config: Vec<ProjPoint> = if round % 2 == 0 {
            random_config(&mut rng, a)
        } else {
            (0..a.len() - 2).map(|_| pp(&[rng.gen_range(-1..=1), rng.gen_range(-1..=1), 0])).collect()
        };
        let seeds: Vec<u64> = (0..16).map(|s| 1000 * round as u64 + s).collect();
        let fast = stable_pencil(a, &config).map_err(|e| e.to_string())?;
        let slow = perturbed_pencil(a, &config, &seeds).map_err(|e| format!("{config:?}: {e}"))?;
        check(fast == slow, || format!("stable pencil {fast:?} vs perturbed {slow:?}"))?;
        degenerate += usize::from(!is_general(a, &config).map_err(|e| e.to_string())?.is_general());
    }
    Ok(format!("1000 matrices ({ties} with ties), 1000 points ({fixed} fixed), 200 pencils ({degenerate} degenerate)"))
}

fn all_sets(n: usize) -> impl Iterator<Item = LeafSet> {
    (1u64..(1 << n)).map(LeafSet::from_bits)
}

fn skeleton_suite() -> Outcome {
    let mut rng = random::seeded(6);
    use rand::Rng;
    let mut lines: Vec<(EmbeddedLine, Option<(LinePoint, usize)>)> = Vec::new();
    for _ in 0..300 {
        let n = rng.gen_range(3..=8);
        let planted = random::planted_line(&mut rng, n);
        let p = planted.line.normalize_point(planted.point);
        lines.push((planted.line, Some((p, planted.level))));
    }
    let supports = [square(), conic_boundary(), conic()];
    while lines.len() < 500 {
        let a = &supports[lines.len() % 3];
        let config = random_config(&mut rng, a);
        let line = stable_pencil(a, &config).map_err(|e| e.to_string())?;
        let p = &config[rng.gen_range(0..config.len())];
        lines.push((shifted_line(&line, a, p).map_err(|e| e.to_string())?, None));
    }
    let mut sets = 0;
    for (g, planted) in &lines {
        let t = skeleton_level(g);
        check(t >= 2, || format!("constructed line has level {t}"))?;
        let pi = pi_gamma_point(g).map_err(|e| e.to_string())?;
        if let Some((p, level)) = planted {
            check(*p == pi, || format!("planted {p:?} but pi is {pi:?}"))?;
            check(t >= *level, || format!("level {t} below planted {level}"))?;
        }
        let m = g.valence_at(&pi);
        let need = (m * t).div_ceil(m - 1);
        let mult = multiplicity_at(g, &pi);
        check(mult >= need, || format!("multiplicity {mult} at pi, need {need} (m = {m}, t = {t})"))?;
        for set in all_sets(g.n()) {
            let actual = pi_set(g, set);
            if actual.is_empty() {
                continue;
            }
            sets += 1;
            check(actual.is_connected(g), || format!("Pi(G, {set:?}) disconnected"))?;
            let predicted = pi_set_predicted(g, &pi, set);
            check(actual == predicted, || format!("Pi(G, {set:?}) = {actual:?}, predicted {predicted:?}"))?;
        }
    }
    Ok(format!("{} lines, {sets} nonempty sets", lines.len()))
}

fn vertex_triples() -> Outcome {
    let mut rng = random::seeded(7);
    let supports = [triangle(), square(), conic_boundary(), conic()];
    let mut vertices = 0;
    for round in 0..200 {
        let a = &supports[round % supports.len()];
        let config = random_config(&mut rng, a);
        let line = stable_pencil(a, &config).map_err(|e| e.to_string())?;
        for v in 0..line.topology().node_count() {
            let best = config
                .iter()
                .map(|p| min_profile(&a.terms(line.coords(v), p)).map(|m| m.argmin.len()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            check(best.iter().any(|&k| k >= 3), || format!("vertex {v} of the pencil through {config:?}: {best:?}"))?;
            vertices += 1;
        }
    }
    Ok(format!("200 pencils, {vertices} vertices"))
}

fn support_graphs() -> Outcome {
    let mut hall_sets = 0;
    let instances = realized_instances()?;
    for (a, line, config) in &instances {
        let n = a.len();
        for v in 0..line.topology().node_count() {
            let g = support_graph(line, a, config, &LinePoint::Vertex(v));
            check(g.edges.len() == 2 * n - 3 && g.vertex_count() == 2 * n - 2, || {
                format!("G_v has {} edges", g.edges.len())
            })?;
            check(g.components() == 1 && g.genus() == 0, || "G_v not a tree".into())?;
        }
        for i in 0..n {
            for j in i + 1..n {
                let det = minor_tropdet(a, config, i, j).map_err(|e| e.to_string())?;
                check(det.unique, || format!("minor ({i}, {j}) not unique"))?;
                for c in path_points(line, i, j) {
                    let g = support_graph(line, a, config, &c);
                    if matches!(c, LinePoint::Edge { .. }) {
                        check(g.components() == 2 && g.genus() == 0, || format!("G_c at {c:?} is not two trees"))?;
                    }
                    let rest = LeafSet::full(n).minus(LeafSet::single(i)).minus(LeafSet::single(j));
                    for b in all_sets(n).filter(|b| b.is_subset(rest)) {
                        check(g.neighborhood(b).len() >= b.len(), || format!("Hall fails for {b:?} at {c:?}"))?;
                        hall_sets += 1;
                    }
                    let matching = unique_matching(&g, i, j).map_err(|e| format!("{c:?}: {e}"))?;
                    let sum = matching_value(a, config, &matching);
                    check(sum == det.value, || format!("matching sum {sum} vs tropdet {}", det.value))?;
                }
            }
        }
    }
    Ok(format!("{} instances, {hall_sets} Hall subsets", instances.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("square fixture fixed loci", square_loci),
        ("compatible type counts", counts),
        ("realize and reconstruct round trip", round_trip),
        ("forward compatibility", forward_compatibility),
        ("oracle equivalences", oracles),
        ("skeleton lemma suite", skeleton_suite),
        ("vertex triple attainment", vertex_triples),
        ("support graph suite", support_graphs),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({why})", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
