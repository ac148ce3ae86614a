//! Finite G-sets with explicit points, equivariant maps, pullbacks,
//! coproducts and exponential diagrams.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupSpec, SubgroupId};

pub const DEFAULT_MAX_POINTS: usize = 64;
pub const DEFAULT_MAX_SECTIONS: usize = 100_000;

/// One orbit of a G-set. The base point is the least point of the orbit.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub base: usize,
    pub stabilizer: SubgroupId,
    /// Position of the stabilizer's G-conjugacy class in the canonical
    /// class list of G.
    pub class_index: usize,
    pub points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
    /// Orbit index of every point.
    pub orbit_of: Vec<usize>,
    /// For every point `x`, some `t` with `t · base = x`.
    pub transporter: Vec<usize>,
}

pub struct GSet {
    group: Arc<FiniteGroup>,
    size: usize,
    // action[g * size + x] = g·x
    action: Vec<usize>,
    labels: Option<Vec<String>>,
    decomposition: OnceLock<OrbitDecomposition>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orbits: Vec<String> = self.orbits().orbits.iter().map(|o| format!("G/{}", self.group.class_names()[o.class_index].1)).collect();
        write!(f, "GSet[{}; {}]", self.size, orbits.join(" + "))
    }
}

#[derive(Deserialize)]
struct GSetLiteral {
    group: serde_json::Value,
    points: usize,
    action: Vec<Vec<usize>>,
}

impl GSet {
    /// Validates an action table given as `table[g][x] = g·x`.
    pub fn from_table(group: Arc<FiniteGroup>, size: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != group.order() {
            return Err(Error::InvalidGSet(format!("{} action rows for a group of order {}", table.len(), group.order())));
        }
        let mut action = Vec::with_capacity(group.order() * size);
        for row in &table {
            if row.len() != size || row.iter().any(|&p| p >= size) {
                return Err(Error::InvalidGSet("malformed action row".into()));
            }
            action.extend_from_slice(row);
        }
        Self::from_flat(group, size, action)
    }

    fn from_flat(group: Arc<FiniteGroup>, size: usize, action: Vec<usize>) -> Result<Self> {
        let set = GSet { group, size, action, labels: None, decomposition: OnceLock::new() };
        set.validate()?;
        Ok(set)
    }

    pub(crate) fn unchecked(group: Arc<FiniteGroup>, size: usize, action: Vec<usize>) -> Self {
        let set = GSet { group, size, action, labels: None, decomposition: OnceLock::new() };
        debug_assert!(set.validate().is_ok());
        set
    }

    fn validate(&self) -> Result<()> {
        for x in 0..self.size {
            if self.act(0, x) != x {
                return Err(Error::InvalidGSet(format!("identity moves point {x}")));
            }
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                for x in 0..self.size {
                    if self.act(g, self.act(h, x)) != self.act(gh, x) {
                        return Err(Error::InvalidGSet(format!("g(hx) != (gh)x for g={g}, h={h}, x={x}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses `{"group": <spec>, "points": n, "action": [[...]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let lit: GSetLiteral = serde_json::from_str(text).map_err(|e| Error::BadSpec(e.to_string()))?;
        let spec: GroupSpec = match &lit.group {
            serde_json::Value::String(s) => s.parse()?,
            other => other.to_string().parse()?,
        };
        let group = FiniteGroup::build(&spec)?;
        Self::from_table(group, lit.points, lit.action)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.size);
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn empty(group: Arc<FiniteGroup>) -> Self {
        Self::unchecked(group, 0, Vec::new())
    }

    /// The coset set G/H; point 0 is the coset H itself.
    pub fn transitive(group: &Arc<FiniteGroup>, h: SubgroupId) -> Self {
        let reps = group.left_cosets(group.whole(), h);
        let hs = group.subgroup(h);
        let mut coset_of = vec![0; group.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &k in hs.members() {
                coset_of[group.mul(r, k)] = i;
            }
        }
        let size = reps.len();
        let mut action = Vec::with_capacity(group.order() * size);
        for g in group.elements() {
            for &r in &reps {
                action.push(coset_of[group.mul(g, r)]);
            }
        }
        let labels = reps.iter().map(|&r| format!("{}H", group.element_label(r))).collect();
        Self::unchecked(group.clone(), size, action).with_labels(labels)
    }

    /// The one-point G-set G/G.
    pub fn point(group: &Arc<FiniteGroup>) -> Self {
        Self::transitive(group, group.whole())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x]
    }

    pub fn orbits(&self) -> &OrbitDecomposition {
        self.decomposition.get_or_init(|| self.decompose())
    }

    fn decompose(&self) -> OrbitDecomposition {
        let g = &self.group;
        let mut orbit_of = vec![usize::MAX; self.size];
        let mut transporter = vec![0; self.size];
        let mut orbits = Vec::new();
        for x in 0..self.size {
            if orbit_of[x] != usize::MAX {
                continue;
            }
            let idx = orbits.len();
            let mut points = Vec::new();
            let mut stab = 0u64;
            for t in g.elements() {
                let y = self.act(t, x);
                if y == x {
                    stab |= 1 << t;
                }
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = idx;
                    transporter[y] = t;
                    points.push(y);
                }
            }
            points.sort_unstable();
            let stabilizer = g.subgroup_from_mask(stab).expect("stabilizers are subgroups");
            let class_index = g.class_index(g.whole(), stabilizer).expect("subgroup of G");
            orbits.push(Orbit { base: x, stabilizer, class_index, points });
        }
        OrbitDecomposition { orbits, orbit_of, transporter }
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits().orbits.len()
    }

    /// Stabilizer of an arbitrary point.
    pub fn stabilizer(&self, x: usize) -> SubgroupId {
        let d = self.orbits();
        let o = &d.orbits[d.orbit_of[x]];
        self.group.conjugate(d.transporter[x], o.stabilizer)
    }

    /// Multiset of stabilizer classes, as counts per class of 𝒪(G).
    pub fn orbit_type(&self) -> Vec<usize> {
        let mut counts = vec![0; self.group.class_reps(self.group.whole()).len()];
        for o in &self.orbits().orbits {
            counts[o.class_index] += 1;
        }
        counts
    }

    pub fn coproduct(a: &Arc<GSet>, b: &Arc<GSet>) -> (Arc<GSet>, GMap, GMap) {
        let group = a.group.clone();
        let size = a.size + b.size;
        let mut action = Vec::with_capacity(group.order() * size);
        for g in group.elements() {
            for x in 0..a.size {
                action.push(a.act(g, x));
            }
            for x in 0..b.size {
                action.push(a.size + b.act(g, x));
            }
        }
        let sum = Arc::new(Self::unchecked(group, size, action));
        let inl = GMap::unchecked(a.clone(), sum.clone(), (0..a.size).collect());
        let inr = GMap::unchecked(b.clone(), sum.clone(), (a.size..size).collect());
        (sum, inl, inr)
    }

    /// Disjoint union of a list of G-sets (the empty union is empty).
    pub fn coproduct_all(group: &Arc<FiniteGroup>, parts: &[Arc<GSet>]) -> Arc<GSet> {
        let mut acc = Arc::new(GSet::empty(group.clone()));
        for p in parts {
            acc = GSet::coproduct(&acc, p).0;
        }
        acc
    }

    pub fn product(a: &Arc<GSet>, b: &Arc<GSet>) -> (Arc<GSet>, GMap, GMap) {
        let pt = Arc::new(GSet::point(&a.group));
        let fa = GMap::to_point(a, &pt);
        let fb = GMap::to_point(b, &pt);
        pullback(&fa, &fb)
    }
}

/// An equivariant map between G-sets.
#[derive(Clone)]
pub struct GMap {
    source: Arc<GSet>,
    target: Arc<GSet>,
    map: Vec<usize>,
}

impl fmt::Debug for GMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?} {:?}", self.source, self.target, self.map)
    }
}

impl GMap {
    pub fn new(source: Arc<GSet>, target: Arc<GSet>, map: Vec<usize>) -> Result<Self> {
        if !Arc::ptr_eq(&source.group, &target.group) {
            return Err(Error::NotEquivariant("source and target over different groups".into()));
        }
        if map.len() != source.size || map.iter().any(|&y| y >= target.size) {
            return Err(Error::NotEquivariant("point table has the wrong shape".into()));
        }
        let m = GMap { source, target, map };
        for g in m.source.group.elements() {
            for x in 0..m.source.size {
                if m.map[m.source.act(g, x)] != m.target.act(g, m.map[x]) {
                    return Err(Error::NotEquivariant(format!("f(g·x) != g·f(x) at g={g}, x={x}")));
                }
            }
        }
        Ok(m)
    }

    pub(crate) fn unchecked(source: Arc<GSet>, target: Arc<GSet>, map: Vec<usize>) -> Self {
        let m = GMap { source, target, map };
        debug_assert!(GMap::new(m.source.clone(), m.target.clone(), m.map.clone()).is_ok());
        m
    }

    pub fn identity(x: &Arc<GSet>) -> Self {
        GMap::unchecked(x.clone(), x.clone(), (0..x.size).collect())
    }

    pub fn to_point(x: &Arc<GSet>, pt: &Arc<GSet>) -> Self {
        debug_assert_eq!(pt.size, 1);
        GMap::unchecked(x.clone(), pt.clone(), vec![0; x.size])
    }

    /// The projection G/K → G/H, gK ↦ gH, for K ≤ H.
    pub fn projection(group: &Arc<FiniteGroup>, k: SubgroupId, h: SubgroupId) -> Self {
        assert!(group.is_subgroup(k, h));
        let src = Arc::new(GSet::transitive(group, k));
        let tgt = Arc::new(GSet::transitive(group, h));
        Self::projection_between(src, tgt)
    }

    /// The projection between two coset sets built by [`GSet::transitive`].
    pub fn projection_between(src: Arc<GSet>, tgt: Arc<GSet>) -> Self {
        // the base coset maps to the base coset; transport along the orbit
        let d = src.orbits();
        let map = (0..src.size).map(|x| tgt.act(d.transporter[x], 0)).collect();
        GMap::unchecked(src, tgt, map)
    }

    /// The isomorphism G/(gHg⁻¹) → G/H, u·gHg⁻¹ ↦ u·gH.
    pub fn conjugation(group: &Arc<FiniteGroup>, g: usize, h: SubgroupId) -> Self {
        let gh = group.conjugate(g, h);
        let src = Arc::new(GSet::transitive(group, gh));
        let tgt = Arc::new(GSet::transitive(group, h));
        let d = src.orbits();
        let base_image = tgt.act(g, 0);
        let map = (0..src.size).map(|x| tgt.act(d.transporter[x], base_image)).collect();
        GMap::unchecked(src, tgt, map)
    }

    pub fn source(&self) -> &Arc<GSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GSet> {
        &self.target
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.source.group
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GMap) -> GMap {
        assert!(same_set(&self.target, &other.source), "maps do not compose");
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        GMap::unchecked(self.source.clone(), other.target.clone(), map)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.source.size).filter(|&x| self.map[x] == y).collect()
    }

    /// Factorization of the map on each source orbit.
    ///
    /// For source orbit `i` with base `x0` and stabilizer `H`, returns the
    /// target orbit index `j`, and `a` with `f(x0) = a·y0` where `y0` is the
    /// base of orbit `j`. The orbit map is then G/H → G/(aKa⁻¹) → G/K, a
    /// projection followed by the conjugation isomorphism for `a`.
    pub fn orbit_components(&self) -> Vec<OrbitComponent> {
        let sd = self.source.orbits();
        let td = self.target.orbits();
        sd.orbits
            .iter()
            .map(|o| {
                let y = self.map[o.base];
                let j = td.orbit_of[y];
                let a = td.transporter[y];
                OrbitComponent {
                    source_orbit: o.stabilizer,
                    target_orbit: j,
                    twist: a,
                    through: self.group().conjugate(a, td.orbits[j].stabilizer),
                }
            })
            .collect()
    }
}

/// See [`GMap::orbit_components`].
#[derive(Clone, Copy, Debug)]
pub struct OrbitComponent {
    /// Stabilizer H of the source orbit's base point.
    pub source_orbit: SubgroupId,
    pub target_orbit: usize,
    pub twist: usize,
    /// The stabilizer aKa⁻¹ of the image of the base point; contains H.
    pub through: SubgroupId,
}

pub fn same_set(a: &Arc<GSet>, b: &Arc<GSet>) -> bool {
    Arc::ptr_eq(a, b) || (a.size == b.size && Arc::ptr_eq(&a.group, &b.group) && a.action == b.action)
}

/// The pullback `{(x, z) | f(x) = g(z)}` with its two projections. Points
/// are ordered lexicographically by `(x, z)`.
pub fn pullback(f: &GMap, g: &GMap) -> (Arc<GSet>, GMap, GMap) {
    assert!(same_set(&f.target, &g.target), "pullback legs need a common target");
    let group = f.group().clone();
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for x in 0..f.source.size {
        for z in 0..g.source.size {
            if f.map[x] == g.map[z] {
                index.insert((x, z), pairs.len());
                pairs.push((x, z));
            }
        }
    }
    let size = pairs.len();
    let mut action = Vec::with_capacity(group.order() * size);
    for t in group.elements() {
        for &(x, z) in &pairs {
            action.push(index[&(f.source.act(t, x), g.source.act(t, z))]);
        }
    }
    let p = Arc::new(GSet::unchecked(group, size, action));
    let p1 = GMap::unchecked(p.clone(), f.source.clone(), pairs.iter().map(|q| q.0).collect());
    let p2 = GMap::unchecked(p.clone(), g.source.clone(), pairs.iter().map(|q| q.1).collect());
    (p, p1, p2)
}

/// `X ×_Y X` minus the diagonal, with the two restricted projections.
pub fn diagonal_complement(f: &GMap) -> (Arc<GSet>, GMap, GMap) {
    let group = f.group().clone();
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for x in 0..f.source.size {
        for x2 in 0..f.source.size {
            if x != x2 && f.map[x] == f.map[x2] {
                index.insert((x, x2), pairs.len());
                pairs.push((x, x2));
            }
        }
    }
    let size = pairs.len();
    let mut action = Vec::with_capacity(group.order() * size);
    for t in group.elements() {
        for &(x, x2) in &pairs {
            action.push(index[&(f.source.act(t, x), f.source.act(t, x2))]);
        }
    }
    let z = Arc::new(GSet::unchecked(group, size, action));
    let q1 = GMap::unchecked(z.clone(), f.source.clone(), pairs.iter().map(|q| q.0).collect());
    let q2 = GMap::unchecked(z.clone(), f.source.clone(), pairs.iter().map(|q| q.1).collect());
    (z, q1, q2)
}

/// The exponential diagram of `A --p--> X --f--> Y`:
///
/// ```text
///   X <--p-- A <--λ-- Z
///   |                 |
///   f                 ρ
///   v                 v
///   Y <-------q------ B = Π_f(A)
/// ```
#[derive(Clone, Debug)]
pub struct ExponentialDiagram {
    pub f: GMap,
    pub p: GMap,
    pub lambda: GMap,
    pub rho: GMap,
    pub q: GMap,
    /// Section of each point of B, listed along the sorted fiber of f.
    pub sections: Vec<(usize, Vec<usize>)>,
}

impl ExponentialDiagram {
    pub fn x(&self) -> &Arc<GSet> {
        self.f.source()
    }
    pub fn y(&self) -> &Arc<GSet> {
        self.f.target()
    }
    pub fn a(&self) -> &Arc<GSet> {
        self.p.source()
    }
    pub fn z(&self) -> &Arc<GSet> {
        self.lambda.source()
    }
    pub fn b(&self) -> &Arc<GSet> {
        self.q.source()
    }
}

/// Number of points of Π_f(A), saturating.
pub fn section_count(f: &GMap, p: &GMap) -> usize {
    let mut over = vec![0usize; f.source.size];
    for a in 0..p.source.size {
        over[p.map[a]] += 1;
    }
    let mut per_y = vec![1usize; f.target.size];
    for x in 0..f.source.size {
        per_y[f.map[x]] = per_y[f.map[x]].saturating_mul(over[x]);
    }
    per_y.into_iter().fold(0usize, |s, c| s.saturating_add(c))
}

/// Builds the exponential diagram; sections are enumerated
/// lexicographically along each fiber, so the point order of B is
/// deterministic.
pub fn exponential(f: &GMap, p: &GMap, max_sections: usize) -> Result<ExponentialDiagram> {
    assert!(same_set(&p.target, &f.source), "p must land in the source of f");
    let needed = section_count(f, p);
    if needed > max_sections {
        return Err(Error::SectionBlowup { needed, bound: max_sections });
    }
    let group = f.group().clone();
    let fibers: Vec<Vec<usize>> = (0..f.target.size).map(|y| f.fiber(y)).collect();
    let over: Vec<Vec<usize>> = (0..f.source.size).map(|x| p.fiber(x)).collect();

    let mut sections: Vec<(usize, Vec<usize>)> = Vec::with_capacity(needed);
    for (y, fiber) in fibers.iter().enumerate() {
        let choices: Vec<&Vec<usize>> = fiber.iter().map(|&x| &over[x]).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; fiber.len()];
        loop {
            sections.push((y, idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect()));
            // odometer, last position fastest
            let mut k = fiber.len();
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    let index: HashMap<&(usize, Vec<usize>), usize> = sections.iter().enumerate().map(|(i, s)| (s, i)).collect();
    // position of each x inside its fiber
    let mut pos = vec![0; f.source.size];
    for fiber in &fibers {
        for (i, &x) in fiber.iter().enumerate() {
            pos[x] = i;
        }
    }
    let bsize = sections.len();
    let mut action = Vec::with_capacity(group.order() * bsize);
    for g in group.elements() {
        let ginv = group.inv(g);
        for (y, sigma) in &sections {
            let gy = f.target.act(g, *y);
            let moved: Vec<usize> = fibers[gy]
                .iter()
                .map(|&x2| {
                    let x = f.source.act(ginv, x2);
                    p.source.act(g, sigma[pos[x]])
                })
                .collect();
            action.push(index[&(gy, moved)]);
        }
    }
    let b = Arc::new(GSet::unchecked(group, bsize, action));
    let q = GMap::unchecked(b.clone(), f.target.clone(), sections.iter().map(|s| s.0).collect());
    let (z, zx, rho) = pullback(f, &q);
    let lambda_map = (0..z.size)
        .map(|w| {
            let x = zx.map[w];
            sections[rho.map[w]].1[pos[x]]
        })
        .collect();
    let lambda = GMap::unchecked(z, p.source.clone(), lambda_map);
    Ok(ExponentialDiagram { f: f.clone(), p: p.clone(), lambda, rho, q, sections })
}

fn orbit_images(group: &FiniteGroup, from: &GSet, x: usize, to: &GSet, y: usize) -> Vec<usize> {
    // points y' in the orbit of y with stab(y') = stab(x); each gives an
    // equivariant map x ↦ y'
    let sx = from.stabilizer(x);
    let mut out: Vec<usize> = group.elements().map(|g| to.act(g, y)).filter(|&y2| to.stabilizer(y2) == sx).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn extend_orbit(group: &FiniteGroup, from: &GSet, x: usize, to: &GSet, y: usize, map: &mut [usize]) {
    for g in group.elements() {
        map[from.act(g, x)] = to.act(g, y);
    }
}

/// An equivariant isomorphism `X1 → X2`, if one exists.
pub fn find_iso(x1: &Arc<GSet>, x2: &Arc<GSet>) -> Option<Vec<usize>> {
    let pt = Arc::new(GSet::point(x1.group()));
    find_iso_over(&GMap::to_point(x1, &pt), &GMap::to_point(x2, &pt))
}

/// An isomorphism `φ: X1 → X2` with `f2 ∘ φ = f1`, for maps with a common
/// target.
pub fn find_iso_over(f1: &GMap, f2: &GMap) -> Option<Vec<usize>> {
    let (x1, x2) = (&f1.source, &f2.source);
    if x1.size != x2.size || x1.orbit_type() != x2.orbit_type() {
        return None;
    }
    let group = f1.group();
    // Orbits over a fixed target either are isomorphic over it or are not,
    // so matching orbits greedily is exact.
    let mut used = vec![false; x2.orbit_count()];
    let mut map = vec![usize::MAX; x1.size];
    for o1 in &x1.orbits().orbits {
        let mut found = false;
        for (j, o2) in x2.orbits().orbits.iter().enumerate() {
            if used[j] || o2.class_index != o1.class_index || o2.points.len() != o1.points.len() {
                continue;
            }
            let target_point = f1.map[o1.base];
            let hit = orbit_images(group, x1, o1.base, x2, o2.base).into_iter().find(|&y| f2.map[y] == target_point);
            if let Some(y) = hit {
                extend_orbit(group, x1, o1.base, x2, y, &mut map);
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
    }
    Some(map)
}

/// Isomorphisms `(φ: X1 → X2, ψ: Y1 → Y2)` with `f2 ∘ φ = ψ ∘ f1`.
pub fn find_iso_of_maps(f1: &GMap, f2: &GMap) -> Option<(Vec<usize>, Vec<usize>)> {
    let (y1, y2) = (&f1.target, &f2.target);
    if y1.size != y2.size || y1.orbit_type() != y2.orbit_type() || f1.source.orbit_type() != f2.source.orbit_type() {
        return None;
    }
    let group = f1.group().clone();
    let orbits1 = y1.orbits().orbits.clone();
    let orbits2 = y2.orbits().orbits.clone();

    fn search(
        k: usize,
        group: &FiniteGroup,
        f1: &GMap,
        f2: &GMap,
        orbits1: &[Orbit],
        orbits2: &[Orbit],
        used: &mut Vec<bool>,
        psi: &mut Vec<usize>,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        if k == orbits1.len() {
            // transport f1 along psi and look for an iso over Y2
            let moved = GMap::unchecked(f1.source.clone(), f2.target.clone(), f1.map.iter().map(|&y| psi[y]).collect());
            return find_iso_over(&moved, f2).map(|phi| (phi, psi.clone()));
        }
        let o1 = &orbits1[k];
        for (j, o2) in orbits2.iter().enumerate() {
            if used[j] || o2.class_index != o1.class_index {
                continue;
            }
            used[j] = true;
            for y in orbit_images(group, &f1.target, o1.base, &f2.target, o2.base) {
                extend_orbit(group, &f1.target, o1.base, &f2.target, y, psi);
                if let Some(r) = search(k + 1, group, f1, f2, orbits1, orbits2, used, psi) {
                    return Some(r);
                }
            }
            used[j] = false;
        }
        None
    }

    let mut used = vec![false; orbits2.len()];
    let mut psi = vec![usize::MAX; y1.size];
    search(0, &group, f1, f2, &orbits1, &orbits2, &mut used, &mut psi)
}

/// Shared coset G-sets and the standard maps between them, so that maps
/// built from the same subgroups compose without re-checking.
pub struct Atlas {
    group: Arc<FiniteGroup>,
    transitive: Vec<OnceLock<Arc<GSet>>>,
}

impl Atlas {
    pub fn new(group: &Arc<FiniteGroup>) -> Self {
        Atlas { group: group.clone(), transitive: (0..group.subgroup_count()).map(|_| OnceLock::new()).collect() }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn transitive(&self, h: SubgroupId) -> Arc<GSet> {
        self.transitive[h.0].get_or_init(|| Arc::new(GSet::transitive(&self.group, h))).clone()
    }

    pub fn point(&self) -> Arc<GSet> {
        self.transitive(self.group.whole())
    }

    /// G/K → G/H for K ≤ H.
    pub fn projection(&self, k: SubgroupId, h: SubgroupId) -> GMap {
        assert!(self.group.is_subgroup(k, h));
        GMap::projection_between(self.transitive(k), self.transitive(h))
    }

    /// G/(gHg⁻¹) → G/H, u·gHg⁻¹ ↦ u·gH.
    pub fn conjugation(&self, g: usize, h: SubgroupId) -> GMap {
        let src = self.transitive(self.group.conjugate(g, h));
        let tgt = self.transitive(h);
        let base_image = tgt.act(g, 0);
        self.orbit_map(&src, &tgt, base_image)
    }

    fn orbit_map(&self, src: &Arc<GSet>, tgt: &Arc<GSet>, base_image: usize) -> GMap {
        let d = src.orbits();
        let map = (0..src.size()).map(|x| tgt.act(d.transporter[x], base_image)).collect();
        GMap::unchecked(src.clone(), tgt.clone(), map)
    }

    /// Every G-map G/H → G/K.
    pub fn maps_between(&self, h: SubgroupId, k: SubgroupId) -> Vec<GMap> {
        let src = self.transitive(h);
        let tgt = self.transitive(k);
        (0..tgt.size()).filter(|&y| self.group.is_subgroup(h, tgt.stabilizer(y))).map(|y| self.orbit_map(&src, &tgt, y)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(name: &str) -> Arc<FiniteGroup> {
        FiniteGroup::parse(name).unwrap()
    }

    fn sub_of_order(g: &FiniteGroup, n: usize) -> SubgroupId {
        g.subgroups().find(|&s| g.subgroup(s).order() == n).unwrap()
    }

    fn free(g: &Arc<FiniteGroup>) -> Arc<GSet> {
        Arc::new(GSet::transitive(g, g.trivial()))
    }

    #[test]
    fn transitive_sets() {
        let c2 = grp("C2");
        let x = GSet::transitive(&c2, c2.trivial());
        assert_eq!(x.size(), 2);
        assert_eq!(x.act(1, 0), 1);
        assert_eq!(GSet::point(&c2).size(), 1);

        let s3 = grp("S3");
        let c3 = sub_of_order(&s3, 3);
        let sign = GSet::transitive(&s3, c3);
        assert_eq!(sign.size(), 2);
        for g in s3.elements() {
            let swaps = sign.act(g, 0) == 1;
            assert_eq!(swaps, s3.element_order(g) == 2);
        }
        assert_eq!(sign.orbits().orbits[0].stabilizer, c3);
    }

    #[test]
    fn orbit_decomposition_examples() {
        let c2 = grp("C2");
        let (sum, _, _) = GSet::coproduct(&free(&c2), &Arc::new(GSet::point(&c2)));
        let d = sum.orbits();
        assert_eq!(d.orbits.len(), 2);
        assert_eq!(d.orbits[0].class_index, 0);
        assert_eq!(d.orbits[1].class_index, 1);

        let double_swap = GSet::from_table(c2.clone(), 4, vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2]]).unwrap();
        assert_eq!(double_swap.orbit_type(), vec![2, 0]);
        assert!(GSet::from_table(c2, 2, vec![vec![1, 0], vec![0, 1]]).is_err());
    }

    #[test]
    fn coproduct_decomposition_concatenates() {
        let s3 = grp("S3");
        let a = Arc::new(GSet::transitive(&s3, sub_of_order(&s3, 2)));
        let b = Arc::new(GSet::transitive(&s3, sub_of_order(&s3, 3)));
        let (ab, _, _) = GSet::coproduct(&a, &b);
        let classes: Vec<usize> = ab.orbits().orbits.iter().map(|o| o.class_index).collect();
        let mut expect: Vec<usize> = a.orbits().orbits.iter().map(|o| o.class_index).collect();
        expect.extend(b.orbits().orbits.iter().map(|o| o.class_index));
        assert_eq!(classes, expect);
    }

    #[test]
    fn json_literal() {
        let x = GSet::from_json(r#"{"group": "C2", "points": 2, "action": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(x.orbit_type(), vec![1, 0]);
    }

    #[test]
    fn pullback_of_points_is_free() {
        for name in ["C2", "S3", "C4"] {
            let g = grp(name);
            let pt = Arc::new(GSet::point(&g));
            let e = free(&g);
            for h in g.subgroups() {
                let x = Arc::new(GSet::transitive(&g, h));
                let (p, _, _) = pullback(&GMap::to_point(&x, &pt), &GMap::to_point(&e, &pt));
                // X × G/e is a disjoint union of |X| free orbits
                assert_eq!(p.orbit_type()[0], x.size());
                assert_eq!(p.orbit_count(), x.size());
            }
        }
    }

    #[test]
    fn pullback_examples() {
        let c2 = grp("C2");
        let pt = Arc::new(GSet::point(&c2));
        let e = free(&c2);
        let f = GMap::to_point(&e, &pt);
        let (p, p1, p2) = pullback(&f, &f);
        assert_eq!(p.size(), 4);
        assert_eq!(p.orbit_type(), vec![2, 0]);
        for w in 0..p.size() {
            assert_eq!(f.apply(p1.apply(w)), f.apply(p2.apply(w)));
        }
        // along the identity: iso to the other leg
        let (q, _, q2) = pullback(&GMap::identity(&pt), &f);
        assert!(find_iso(&q, &e).is_some());
        assert_eq!(q2.table(), &[0, 1]);
    }

    #[test]
    fn pullback_mediating_maps_are_unique() {
        let s3 = grp("S3");
        let t = sub_of_order(&s3, 2);
        let c3 = sub_of_order(&s3, 3);
        let f = GMap::projection(&s3, s3.trivial(), t).then(&GMap::projection(&s3, t, s3.whole()));
        let g = GMap::projection(&s3, c3, s3.whole());
        let (p, p1, p2) = pullback(&f, &g);
        // cones from the free orbit are determined by where the base point goes
        let w = free(&s3);
        let along = |x0: usize, set: &GSet| -> Vec<usize> { (0..w.size()).map(|u| set.act(w.orbits().transporter[u], x0)).collect() };
        for x in 0..f.source().size() {
            for z in 0..g.source().size() {
                if f.apply(x) != g.apply(z) {
                    continue;
                }
                let a = along(x, f.source());
                let b = along(z, g.source());
                let mediating: Vec<usize> = (0..p.size())
                    .filter(|&m| {
                        let med = along(m, &p);
                        (0..w.size()).all(|u| p1.apply(med[u]) == a[u] && p2.apply(med[u]) == b[u])
                    })
                    .collect();
                assert_eq!(mediating.len(), 1);
            }
        }
    }

    #[test]
    fn diagonal_complement_examples() {
        let c2 = grp("C2");
        let f = GMap::projection(&c2, c2.trivial(), c2.whole());
        let (z, q1, q2) = diagonal_complement(&f);
        assert_eq!(z.orbit_type(), vec![1, 0]);
        for w in 0..z.size() {
            assert_eq!(q2.apply(w), f.source().act(1, q1.apply(w)));
        }
        let c3 = grp("C3");
        let f = GMap::projection(&c3, c3.trivial(), c3.whole());
        let (z, _, _) = diagonal_complement(&f);
        assert_eq!(z.size(), 6);
        assert_eq!(z.orbit_type(), vec![2, 0]);

        let id = GMap::identity(&free(&c3));
        assert!(diagonal_complement(&id).0.is_empty());
    }

    #[test]
    fn diagonal_complement_completes_the_pullback() {
        for name in ["C4", "S3", "C2xC2"] {
            let g = grp(name);
            for h in g.subgroups() {
                for k in g.subgroups().filter(|&k| g.is_subgroup(k, h)) {
                    let f = GMap::projection(&g, k, h);
                    let (p, p1, _) = pullback(&f, &f);
                    let (z, q1, _) = diagonal_complement(&f);
                    assert_eq!(z.size(), p.size() - f.source().size());
                    let (sum, _, _) = GSet::coproduct(f.source(), &z);
                    let mut leg = (0..f.source().size()).collect::<Vec<_>>();
                    leg.extend(q1.table());
                    let leg = GMap::new(sum, f.source().clone(), leg).unwrap();
                    assert!(find_iso_over(&leg, &p1).is_some(), "{name}");
                }
            }
        }
    }

    #[test]
    fn exponential_examples() {
        let c2 = grp("C2");
        let f = GMap::projection(&c2, c2.trivial(), c2.whole());
        // A = X: a single section over every point
        let d = exponential(&f, &GMap::identity(f.source()), 100).unwrap();
        assert_eq!(d.b().size(), 1);

        let (a, _, _) = GSet::coproduct(f.source(), f.source());
        let p = GMap::new(a.clone(), f.source().clone(), (0..a.size()).map(|i| i % 2).collect()).unwrap();
        let d = exponential(&f, &p, 100).unwrap();
        assert_eq!(d.b().size(), 4);
        assert_eq!(d.b().orbit_type(), vec![1, 2]);

        let empty = Arc::new(GSet::empty(c2.clone()));
        let none = GMap::new(empty, f.source().clone(), vec![]).unwrap();
        assert!(exponential(&f, &none, 100).unwrap().b().is_empty());
        assert!(matches!(exponential(&f, &p, 3), Err(Error::SectionBlowup { needed: 4, bound: 3 })));
    }

    #[test]
    fn exponential_invariants() {
        let s3 = grp("S3");
        let t = sub_of_order(&s3, 2);
        let f = GMap::projection(&s3, t, s3.whole());
        let p = GMap::projection(&s3, s3.trivial(), t);
        let d = exponential(&f, &p, 10_000).unwrap();
        // fiber sizes of q are products of fiber sizes of p
        for y in 0..d.y().size() {
            let expect: usize = f.fiber(y).iter().map(|&x| p.fiber(x).len()).product();
            assert_eq!(d.q.fiber(y).len(), expect);
        }
        // q ∘ ρ = f ∘ p ∘ λ
        for w in 0..d.z().size() {
            assert_eq!(d.q.apply(d.rho.apply(w)), f.apply(p.apply(d.lambda.apply(w))));
        }
        // λ is a section: p(λ(x, σ)) = x
        let (_, zx, _) = pullback(&f, &d.q);
        for w in 0..d.z().size() {
            assert_eq!(p.apply(d.lambda.apply(w)), zx.apply(w));
        }
    }

    #[test]
    fn iso_search() {
        let s3 = grp("S3");
        let t = sub_of_order(&s3, 2);
        let x = Arc::new(GSet::transitive(&s3, t));
        let f = GMap::to_point(&x, &Arc::new(GSet::point(&s3)));
        assert_eq!(find_iso_of_maps(&f, &f).map(|p| p.1), Some(vec![0]));
        // relabel points by a permutation
        let perm = [2usize, 0, 1];
        let mut inv = [0usize; 3];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let table: Vec<Vec<usize>> = s3.elements().map(|g| (0..3).map(|i| perm[x.act(g, inv[i])]).collect()).collect();
        let y = Arc::new(GSet::from_table(s3.clone(), 3, table).unwrap());
        let phi = find_iso(&x, &y).unwrap();
        GMap::new(x.clone(), y.clone(), phi).unwrap();

        let c2 = grp("C2");
        assert!(find_iso(&free(&c2), &Arc::new(GSet::point(&c2))).is_none());
    }

    #[test]
    fn conjugation_maps_are_equivariant_isos() {
        let s3 = grp("S3");
        let t = sub_of_order(&s3, 2);
        for g in s3.elements() {
            let c = GMap::conjugation(&s3, g, t);
            GMap::new(c.source().clone(), c.target().clone(), c.table().to_vec()).unwrap();
            assert!(c.is_injective());
        }
    }

    #[test]
    fn atlas_maps_between() {
        let s3 = grp("S3");
        let atlas = Atlas::new(&s3);
        let t = sub_of_order(&s3, 2);
        // G/e → G/<t> has |G/<t>| = 3 maps, G/<t> → G/<t> has |N(t)/t| = 1
        assert_eq!(atlas.maps_between(s3.trivial(), t).len(), 3);
        assert_eq!(atlas.maps_between(t, t).len(), 1);
        assert_eq!(atlas.maps_between(t, sub_of_order(&s3, 3)).len(), 0);
        for g in s3.elements() {
            let c = atlas.conjugation(g, t);
            GMap::new(c.source().clone(), c.target().clone(), c.table().to_vec()).unwrap();
        }
    }

    #[test]
    fn orbit_components_factor_maps() {
        let s3 = grp("S3");
        let t = sub_of_order(&s3, 2);
        let f = GMap::projection(&s3, s3.trivial(), t);
        let comps = f.orbit_components();
        assert_eq!(comps.len(), 1);
        let c = comps[0];
        assert_eq!(c.source_orbit, s3.trivial());
        assert!(s3.is_subgroup(c.source_orbit, c.through));
    }
}
