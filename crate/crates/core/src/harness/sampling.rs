//! Families of G-maps, pullback squares and exponential diagrams used by
//! the axiom checks. Deterministic families are enumerated exhaustively
//! within point and section bounds; random families come from a seed.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::group::{FiniteGroup, SubgroupId};
use crate::gset::{exponential, pullback, section_count, Atlas, ExponentialDiagram, GMap, GSet};

/// Every G-map between transitive G-sets, one coset space per subgroup.
pub fn transitive_maps(atlas: &Atlas) -> Vec<GMap> {
    let g = atlas.group().clone();
    let mut out = Vec::new();
    for h in g.subgroups() {
        for k in g.subgroups() {
            out.extend(atlas.maps_between(h, k));
        }
    }
    out
}

/// Pairs `(f, g)` of transitive maps into the same G-set whose square
/// (source of f, source of g, target, pullback) has at most `max_points`
/// points in total.
pub fn pullback_squares(atlas: &Atlas, max_points: usize) -> Vec<(GMap, GMap)> {
    let g = atlas.group().clone();
    let maps = transitive_maps(atlas);
    let mut out = Vec::new();
    for y in g.subgroups() {
        let into: Vec<&GMap> = maps.iter().filter(|m| same_transitive(m.target(), &atlas.transitive(y))).collect();
        for f in &into {
            for h in &into {
                let (p, _, _) = pullback(f, h);
                let total = f.source().size() + h.source().size() + f.target().size() + p.size();
                if total <= max_points {
                    out.push(((*f).clone(), (*h).clone()));
                }
            }
        }
    }
    out
}

fn same_transitive(a: &Arc<GSet>, b: &Arc<GSet>) -> bool {
    Arc::ptr_eq(a, b)
}

/// The map `⨿ X_i → ⨿ Y_j` assembled from maps `X_i → Y_{j(i)}`, with the
/// coproducts laid out in the given order.
pub fn assemble(group: &Arc<FiniteGroup>, parts: &[(GMap, usize)], targets: &[Arc<GSet>]) -> GMap {
    let sources: Vec<Arc<GSet>> = parts.iter().map(|(m, _)| m.source().clone()).collect();
    let x = GSet::coproduct_all(group, &sources);
    let y = GSet::coproduct_all(group, targets);
    let mut offsets = vec![0usize; targets.len()];
    for j in 1..targets.len() {
        offsets[j] = offsets[j - 1] + targets[j - 1].size();
    }
    let mut table = Vec::with_capacity(x.size());
    for (m, j) in parts {
        table.extend(m.table().iter().map(|&v| offsets[*j] + v));
    }
    GMap::new(x, y, table).expect("coproduct of equivariant maps")
}

/// Maps into `G/k` from transitive G-sets.
fn maps_into(atlas: &Atlas, k: SubgroupId) -> Vec<GMap> {
    let g = atlas.group();
    g.subgroups().flat_map(|l| atlas.maps_between(l, k)).collect()
}

/// Orbits over `G/k` up to isomorphism over `G/k`: the projections
/// `G/l → G/k` for l in the k-conjugacy classes of subgroups of k.
fn orbits_over(atlas: &Atlas, k: SubgroupId) -> Vec<GMap> {
    let g = atlas.group();
    g.class_reps(k).iter().map(|&l| atlas.projection(l, k)).collect()
}

/// Visits the deterministic family of exponential diagrams, up to
/// isomorphism and within `max_sections`, with Y transitive:
/// * f transitive, A over the source of f with at most two orbits;
/// * X with two orbits, A with one orbit over each.
///
/// Returns the number of diagrams visited.
pub fn visit_exponential_family(atlas: &Atlas, max_sections: usize, mut visit: impl FnMut(&ExponentialDiagram)) -> usize {
    let g = atlas.group().clone();
    let mut count = 0;
    let mut attempt = |f: &GMap, p: &GMap| {
        if section_count(f, p) <= max_sections {
            if let Ok(d) = exponential(f, p, max_sections) {
                visit(&d);
                count += 1;
            }
        }
    };
    for &h in g.class_reps(g.whole()) {
        let y = atlas.transitive(h);
        let over_y = orbits_over(atlas, h);
        for f in &over_y {
            let x = f.source().clone();
            let over_x = orbits_over(atlas, x.stabilizer(0));
            let empty = Arc::new(GSet::empty(g.clone()));
            attempt(f, &GMap::new(empty, x.clone(), Vec::new()).expect("empty map"));
            for (i, a) in over_x.iter().enumerate() {
                attempt(f, a);
                for b in &over_x[i..] {
                    let p = assemble(&g, &[(a.clone(), 0), (b.clone(), 0)], std::slice::from_ref(&x));
                    attempt(f, &GMap::new(p.source().clone(), x.clone(), p.table().to_vec()).expect("single target"));
                }
            }
        }
        for (i, f1) in over_y.iter().enumerate() {
            for f2 in &over_y[i..] {
                let f = assemble(&g, &[(f1.clone(), 0), (f2.clone(), 0)], std::slice::from_ref(&y));
                let f = GMap::new(f.source().clone(), y.clone(), f.table().to_vec()).expect("single target");
                let (x1, x2) = (f1.source().clone(), f2.source().clone());
                for a1 in orbits_over(atlas, x1.stabilizer(0)) {
                    for a2 in orbits_over(atlas, x2.stabilizer(0)) {
                        let p = assemble(&g, &[(a1.clone(), 0), (a2, 1)], &[x1.clone(), x2.clone()]);
                        attempt(&f, &GMap::new(p.source().clone(), f.source().clone(), p.table().to_vec()).expect("same layout"));
                    }
                }
            }
        }
    }
    count
}

/// The deterministic family, collected.
pub fn exponential_family(atlas: &Atlas, max_sections: usize) -> Vec<ExponentialDiagram> {
    let mut out = Vec::new();
    visit_exponential_family(atlas, max_sections, |d| out.push(d.clone()));
    out
}

/// A random G-map `f: X → Y` with `1..=x_orbits` orbits in X and
/// `1..=y_orbits` in Y.
pub fn random_map(atlas: &Atlas, x_orbits: usize, y_orbits: usize, rng: &mut dyn RngCore) -> GMap {
    let g = atlas.group().clone();
    let subs: Vec<SubgroupId> = g.subgroups().collect();
    let ny = rng.gen_range(1..=y_orbits);
    let ys: Vec<SubgroupId> = (0..ny).map(|_| *subs.choose(rng).expect("subgroups")).collect();
    let targets: Vec<Arc<GSet>> = ys.iter().map(|&y| atlas.transitive(y)).collect();
    let nx = rng.gen_range(1..=x_orbits);
    let parts: Vec<(GMap, usize)> = (0..nx)
        .map(|_| {
            let j = rng.gen_range(0..ny);
            let into = maps_into(atlas, ys[j]);
            (into.choose(rng).expect("identity exists").clone(), j)
        })
        .collect();
    assemble(&g, &parts, &targets)
}

/// A random G-set over `x` with `1..=orbits` orbits.
pub fn random_over(atlas: &Atlas, x: &Arc<GSet>, orbits: usize, rng: &mut dyn RngCore) -> GMap {
    let g = atlas.group().clone();
    let d = x.orbits();
    let parts_x: Vec<Arc<GSet>> = d.orbits.iter().map(|o| atlas.transitive(o.stabilizer)).collect();
    let layout = GSet::coproduct_all(&g, &parts_x);
    let n = rng.gen_range(1..=orbits);
    let parts: Vec<(GMap, usize)> = (0..n)
        .map(|_| {
            let j = rng.gen_range(0..parts_x.len());
            let into = maps_into(atlas, d.orbits[j].stabilizer);
            (into.choose(rng).expect("identity exists").clone(), j)
        })
        .collect();
    let p = assemble(&g, &parts, &parts_x);
    // identify the standard layout with x orbit by orbit
    let iso = crate::gset::find_iso(&layout, x).expect("same orbit types");
    let table = p.table().iter().map(|&v| iso[v]).collect();
    GMap::new(p.source().clone(), x.clone(), table).expect("composite of equivariant maps")
}

/// `count` random exponential diagrams outside the deterministic family:
/// X has up to three orbits, Y up to two, A up to three. Diagrams above
/// `max_sections` are redrawn; gives up after `50·count` draws.
pub fn random_exponentials(atlas: &Atlas, count: usize, max_sections: usize, rng: &mut dyn RngCore) -> Vec<ExponentialDiagram> {
    let mut out = Vec::new();
    let mut draws = 0;
    while out.len() < count && draws < 50 * count {
        draws += 1;
        let f = random_map(atlas, 3, 2, rng);
        let p = random_over(atlas, f.source(), 3, rng);
        if f.source().orbit_count() + p.source().orbit_count() <= 3 {
            continue;
        }
        if section_count(&f, &p) > max_sections {
            continue;
        }
        if let Ok(d) = exponential(&f, &p, max_sections) {
            out.push(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn squares_respect_the_point_bound() {
        let g = FiniteGroup::parse("S3").unwrap();
        let atlas = Atlas::new(&g);
        let sq = pullback_squares(&atlas, 24);
        assert!(!sq.is_empty());
        for (f, h) in &sq {
            let (p, _, _) = pullback(f, h);
            assert!(f.source().size() + h.source().size() + f.target().size() + p.size() <= 24);
        }
        // G/e → G/G twice has a 36-point pullback
        let e = g.trivial();
        assert!(!sq.iter().any(|(f, h)| f.source().stabilizer(0) == e && h.source().stabilizer(0) == e && f.target().size() == 1));
    }

    #[test]
    fn families_are_nonempty_and_valid() {
        let g = FiniteGroup::parse("C2xC2").unwrap();
        let atlas = Atlas::new(&g);
        let fam = exponential_family(&atlas, 10_000);
        assert!(fam.len() > 30, "{}", fam.len());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random_exponentials(&atlas, 20, 20_000, &mut rng);
        assert_eq!(r.len(), 20);
        for d in &r {
            assert!(d.x().orbit_count() + d.a().orbit_count() > 3);
        }
    }
}
