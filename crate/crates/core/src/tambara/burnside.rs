//! The Burnside Tambara functor Ω.
//!
//! Level H is the Burnside ring of H, stored as an integer vector over the
//! H-conjugacy classes of subgroups of H in canonical order; entry `j` is the
//! coefficient of `[H/K_j]`, i.e. of `[G/K_j → G/H]`. Products and
//! restrictions come from the double coset decomposition of pullbacks of
//! coset sets, transfers from composition, and norms from the table of
//! marks: `φ_L(N_K^H x) = Π_{LgK ⊆ H} φ_{K ∩ g⁻¹Lg}(x)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use crate::decision::Decision;
use crate::error::Result;
use crate::group::{FiniteGroup, SubgroupId};
use crate::gset::{exponential, GMap};
use crate::lattice::kernel;
use crate::tambara::Tambara;

pub type BurnsideElem = Vec<BigInt>;

struct Level {
    reps: Vec<SubgroupId>,
    /// marks[i][j] = |(H/K_j)^{K_i}|
    marks: Vec<Vec<BigInt>>,
    /// products of basis elements, as class multiplicities
    mult: Vec<Vec<Vec<usize>>>,
}

type Table = Arc<Vec<Vec<usize>>>;

pub struct Burnside {
    group: Arc<FiniteGroup>,
    levels: Vec<OnceLock<Level>>,
    restrictions: Mutex<HashMap<(SubgroupId, SubgroupId), Table>>,
    norms: Mutex<HashMap<(SubgroupId, SubgroupId), Table>>,
    conjugations: Mutex<HashMap<(usize, SubgroupId), Arc<Vec<usize>>>>,
}

impl Burnside {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let n = group.subgroup_count();
        Burnside {
            group,
            levels: (0..n).map(|_| OnceLock::new()).collect(),
            restrictions: Mutex::new(HashMap::new()),
            norms: Mutex::new(HashMap::new()),
            conjugations: Mutex::new(HashMap::new()),
        }
    }

    fn level(&self, h: SubgroupId) -> &Level {
        self.levels[h.0].get_or_init(|| {
            let g = &self.group;
            let reps = g.class_reps(h).to_vec();
            let marks = reps.iter().map(|&l| reps.iter().map(|&k| BigInt::from(mark(g, h, l, k))).collect()).collect();
            let mult = reps
                .iter()
                .map(|&a| {
                    reps.iter()
                        .map(|&b| {
                            let mut counts = vec![0usize; reps.len()];
                            for x in g.double_cosets_within(h, a, b) {
                                let stab = g.conjugate_and_intersect(a, x, b);
                                counts[g.class_index(h, stab).expect("subgroup of H")] += 1;
                            }
                            counts
                        })
                        .collect()
                })
                .collect();
            Level { reps, marks, mult }
        })
    }

    pub fn rank(&self, h: SubgroupId) -> usize {
        self.level(h).reps.len()
    }

    /// Canonical representatives of the H-classes of subgroups of H.
    pub fn basis_subgroups(&self, h: SubgroupId) -> &[SubgroupId] {
        &self.level(h).reps
    }

    /// The basis element `[H/K_j]`.
    pub fn basis(&self, h: SubgroupId, j: usize) -> BurnsideElem {
        let mut v = vec![BigInt::zero(); self.rank(h)];
        v[j] = BigInt::one();
        v
    }

    /// `[H/K]` for any subgroup K ≤ H.
    pub fn coset(&self, h: SubgroupId, k: SubgroupId) -> BurnsideElem {
        self.basis(h, self.group.class_index(h, k).expect("subgroup of H"))
    }

    pub fn label(&self, h: SubgroupId, j: usize) -> String {
        let g = &self.group;
        format!("[{}/{}]", g.class_name(h), g.class_name(self.level(h).reps[j]))
    }

    pub fn marks(&self, h: SubgroupId) -> &[Vec<BigInt>] {
        &self.level(h).marks
    }

    /// The ghost vector `(φ_{K_i}(x))_i`.
    pub fn ghost(&self, h: SubgroupId, x: &[BigInt]) -> Vec<BigInt> {
        self.level(h).marks.iter().map(|row| row.iter().zip(x).map(|(m, c)| m * c).sum()).collect()
    }

    /// The element with the given ghost vector, if it is integral.
    pub fn from_ghost(&self, h: SubgroupId, phi: &[BigInt]) -> Option<BurnsideElem> {
        let marks = &self.level(h).marks;
        let n = marks.len();
        let mut x = vec![BigInt::zero(); n];
        // marks[i][j] ≠ 0 only when K_i is subconjugate to K_j, so the
        // table is upper triangular in canonical order
        for i in (0..n).rev() {
            let mut r = phi[i].clone();
            for j in i + 1..n {
                r -= &marks[i][j] * &x[j];
            }
            let (q, rem) = r.div_rem(&marks[i][i]);
            if !rem.is_zero() {
                return None;
            }
            x[i] = q;
        }
        Some(x)
    }

    /// `|H : K_j|` for every basis class: the marks homomorphism to P_Z.
    pub fn index_weights(&self, h: SubgroupId) -> Vec<BigInt> {
        self.level(h).reps.iter().map(|&k| BigInt::from(self.group.index(k, h))).collect()
    }

    fn restriction_table(&self, h: SubgroupId, k: SubgroupId) -> Table {
        let mut cache = self.restrictions.lock().expect("cache");
        cache
            .entry((h, k))
            .or_insert_with(|| {
                let g = &self.group;
                Arc::new(
                    self.level(h)
                        .reps
                        .iter()
                        .map(|&l| {
                            g.double_cosets_within(h, k, l)
                                .into_iter()
                                .map(|x| g.class_index(k, g.conjugate_and_intersect(k, x, l)).expect("in K"))
                                .collect()
                        })
                        .collect(),
                )
            })
            .clone()
    }

    fn norm_table(&self, k: SubgroupId, h: SubgroupId) -> Table {
        let mut cache = self.norms.lock().expect("cache");
        cache
            .entry((k, h))
            .or_insert_with(|| {
                let g = &self.group;
                Arc::new(
                    self.level(h)
                        .reps
                        .iter()
                        .map(|&l| {
                            g.double_cosets_within(h, l, k)
                                .into_iter()
                                .map(|x| {
                                    let m = g.conjugate_and_intersect(k, g.inv(x), l);
                                    g.class_index(k, m).expect("in K")
                                })
                                .collect()
                        })
                        .collect(),
                )
            })
            .clone()
    }

    fn conjugation_table(&self, x: usize, h: SubgroupId) -> Arc<Vec<usize>> {
        let mut cache = self.conjugations.lock().expect("cache");
        cache
            .entry((x, h))
            .or_insert_with(|| {
                let g = &self.group;
                let target = g.conjugate(x, h);
                Arc::new(
                    self.level(h).reps.iter().map(|&l| g.class_index(target, g.conjugate(x, l)).expect("conjugate subgroup")).collect(),
                )
            })
            .clone()
    }

    /// The element of each target level represented by a map of G-sets
    /// `p: A → Y`: at the orbit with base `y`, the stabilizer-orbits of the
    /// fiber over `y`.
    pub fn from_gset_map(&self, p: &GMap) -> Vec<BurnsideElem> {
        let g = &self.group;
        let a = p.source();
        p.target()
            .orbits()
            .orbits
            .iter()
            .map(|o| {
                let h = o.stabilizer;
                let mut v = vec![BigInt::zero(); self.rank(h)];
                let mut seen = vec![false; a.size()];
                for x in p.fiber(o.base) {
                    if seen[x] {
                        continue;
                    }
                    for &e in g.subgroup(h).members() {
                        seen[a.act(e, x)] = true;
                    }
                    v[g.class_index(h, a.stabilizer(x)).expect("stabilizer inside H")] += 1;
                }
                v
            })
            .collect()
    }

    /// The norm of the G-set `[p: A → X]` along `f: X → Y`, computed as the
    /// dependent product `Π_f(A) → Y` of the exponential diagram.
    pub fn norm_via_exponential(&self, f: &GMap, p: &GMap, max_sections: usize) -> Result<Vec<BurnsideElem>> {
        let d = exponential(f, p, max_sections)?;
        Ok(self.from_gset_map(&d.q))
    }
}

/// `|(H/K)^L|`: cosets `xK ⊆ H` with `L ≤ xKx⁻¹`.
fn mark(g: &FiniteGroup, h: SubgroupId, l: SubgroupId, k: SubgroupId) -> usize {
    g.left_cosets(h, k).into_iter().filter(|&x| g.is_subgroup(l, g.conjugate(x, k))).count()
}

impl Tambara for Burnside {
    type Elem = BurnsideElem;

    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    fn name(&self) -> String {
        "Omega".into()
    }
    fn zero(&self, h: SubgroupId) -> BurnsideElem {
        vec![BigInt::zero(); self.rank(h)]
    }
    fn one(&self, h: SubgroupId) -> BurnsideElem {
        // H itself is the last class
        self.basis(h, self.rank(h) - 1)
    }
    fn add(&self, _h: SubgroupId, a: &BurnsideElem, b: &BurnsideElem) -> BurnsideElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn neg(&self, _h: SubgroupId, a: &BurnsideElem) -> BurnsideElem {
        a.iter().map(|x| -x).collect()
    }
    fn mul(&self, h: SubgroupId, a: &BurnsideElem, b: &BurnsideElem) -> BurnsideElem {
        let lv = self.level(h);
        let mut out = vec![BigInt::zero(); lv.reps.len()];
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let xy = x * y;
                for (k, &c) in lv.mult[i][j].iter().enumerate() {
                    if c != 0 {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        out
    }
    fn equal(&self, _h: SubgroupId, a: &BurnsideElem, b: &BurnsideElem) -> Decision {
        Decision::from_bool(a == b)
    }
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &BurnsideElem) -> BurnsideElem {
        if h == k {
            return x.clone();
        }
        let table = self.restriction_table(h, k);
        let mut out = vec![BigInt::zero(); self.rank(k)];
        for (c, row) in x.iter().zip(table.iter()) {
            for &m in row {
                out[m] += c;
            }
        }
        out
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &BurnsideElem) -> BurnsideElem {
        if h == k {
            return x.clone();
        }
        let g = &self.group;
        let mut out = vec![BigInt::zero(); self.rank(h)];
        for (c, &l) in x.iter().zip(&self.level(k).reps) {
            out[g.class_index(h, l).expect("subgroup of H")] += c;
        }
        out
    }
    fn norm(&self, k: SubgroupId, h: SubgroupId, x: &BurnsideElem) -> BurnsideElem {
        if h == k {
            return x.clone();
        }
        let ghost = self.ghost(k, x);
        let table = self.norm_table(k, h);
        let phi: Vec<BigInt> = table.iter().map(|row| row.iter().map(|&m| &ghost[m]).product()).collect();
        self.from_ghost(h, &phi).expect("norms are integral")
    }
    fn conjugate(&self, g: usize, h: SubgroupId, x: &BurnsideElem) -> BurnsideElem {
        let target = self.group.conjugate(g, h);
        let table = self.conjugation_table(g, h);
        let mut out = vec![BigInt::zero(); self.rank(target)];
        for (c, &j) in x.iter().zip(table.iter()) {
            out[j] += c;
        }
        out
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> BurnsideElem {
        (0..self.rank(h)).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect()
    }
    fn from_int(&self, h: SubgroupId, n: &BigInt) -> BurnsideElem {
        let mut v = self.zero(h);
        *v.last_mut().expect("nonempty") = n.clone();
        v
    }
    fn inverse(&self, h: SubgroupId, x: &BurnsideElem) -> Decision<BurnsideElem> {
        // units have ghost coordinates ±1, hence square to 1
        if self.ghost(h, x).iter().all(|p| p.abs().is_one()) {
            Decision::Yes(x.clone())
        } else {
            Decision::No
        }
    }
    fn divide(&self, h: SubgroupId, c: &BurnsideElem, a: &BurnsideElem) -> Decision<BurnsideElem> {
        let (gc, ga) = (self.ghost(h, c), self.ghost(h, a));
        let mut free = Vec::new();
        let mut phi = Vec::with_capacity(gc.len());
        for (i, (u, v)) in gc.iter().zip(&ga).enumerate() {
            if v.is_zero() {
                if !u.is_zero() {
                    return Decision::No;
                }
                free.push(i);
                phi.push(BigInt::zero());
            } else {
                let (q, r) = u.div_rem(v);
                if !r.is_zero() {
                    return Decision::No;
                }
                phi.push(q);
            }
        }
        // integrality only depends on ghost coordinates modulo |H|, so the
        // free coordinates range over residues
        let order = self.group.subgroup(h).order();
        let combos = (order as u64).checked_pow(free.len() as u32).unwrap_or(u64::MAX);
        if combos > 1 << 16 {
            return self.from_ghost(h, &phi).map_or(Decision::Unknown, Decision::Yes);
        }
        for mut code in 0..combos {
            for &i in &free {
                phi[i] = BigInt::from(code % order as u64);
                code /= order as u64;
            }
            if let Some(b) = self.from_ghost(h, &phi) {
                return Decision::Yes(b);
            }
        }
        Decision::No
    }
    fn zero_divisor(&self, h: SubgroupId, x: &BurnsideElem) -> Decision<BurnsideElem> {
        // the ghost map is injective and |H|·Z^n lies in its image
        let ghost = self.ghost(h, x);
        match ghost.iter().position(|p| p.is_zero()) {
            Some(i) => {
                let mut phi = vec![BigInt::zero(); ghost.len()];
                phi[i] = BigInt::from(self.group.subgroup(h).order());
                Decision::Yes(self.from_ghost(h, &phi).expect("|H| times a ghost basis vector is integral"))
            }
            None => Decision::No,
        }
    }
    fn restriction_kernel(&self, h: SubgroupId) -> Option<Vec<BurnsideElem>> {
        // restrictions of the basis through the double coset table
        let e = self.group.trivial();
        let row: Vec<BigInt> = (0..self.rank(h)).map(|j| self.restrict(h, e, &self.basis(h, j))[0].clone()).collect();
        Some(kernel(&[row], self.rank(h)))
    }
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        // Ω(G/e) = Z with trivial action
        Some(false)
    }
    fn bottom_is_domain(&self) -> Option<bool> {
        Some(true)
    }
    fn render(&self, h: SubgroupId, x: &BurnsideElem) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let label = self.label(h, j);
                if c.is_one() {
                    label
                } else {
                    format!("{c}{label}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::{pullback, Atlas, GSet, DEFAULT_MAX_SECTIONS};
    use crate::tambara::TambaraExt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> BurnsideElem {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn omega(name: &str) -> Burnside {
        Burnside::new(FiniteGroup::parse(name).unwrap())
    }

    #[test]
    fn c2_level_arithmetic() {
        let om = omega("C2");
        let g = om.group().clone();
        let top = g.whole();
        // basis [C2/e], [C2/C2]
        let free = om.basis(top, 0);
        assert_eq!(om.mul(top, &free, &free), v(&[2, 0]));
        assert_eq!(om.restrict(top, g.trivial(), &free), v(&[2]));
        assert_eq!(om.restrict(top, g.trivial(), &om.one(top)), v(&[1]));
        assert_eq!(om.render(top, &v(&[1, -2])), "[C2/e] + -2[C2/C2]");
        // N(2) = 2[C2/C2] + [C2/e]
        assert_eq!(om.norm(g.trivial(), top, &v(&[2])), v(&[1, 2]));
    }

    #[test]
    fn products_match_ghost_products() {
        for name in ["S3", "C4", "C2xC2", "D8"] {
            let om = omega(name);
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            for h in om.group().subgroups() {
                for _ in 0..5 {
                    let (a, b) = (om.sample(h, &mut rng), om.sample(h, &mut rng));
                    let ghost: Vec<BigInt> = om.ghost(h, &a).iter().zip(om.ghost(h, &b)).map(|(x, y)| x * y).collect();
                    assert_eq!(om.from_ghost(h, &ghost).unwrap(), om.mul(h, &a, &b));
                }
            }
        }
    }

    #[test]
    fn s3_marks_and_index_weights() {
        let om = omega("S3");
        let g = om.group().clone();
        let top = g.whole();
        let w: Vec<i64> = om.index_weights(top).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(w, vec![6, 3, 2, 1]);
        // first ghost coordinate is the cardinality
        assert_eq!(om.marks(top)[0], v(&[6, 3, 2, 1]));
        assert_eq!(om.marks(top)[3], v(&[0, 0, 0, 1]));
        assert_eq!(om.restriction_kernel(top).unwrap().len(), 3);
    }

    /// Restriction along G/K → G/H equals the pullback of the represented
    /// G-set map.
    #[test]
    fn restriction_is_pullback() {
        for name in ["S3", "C2xC2", "C4"] {
            let om = omega(name);
            let g = om.group().clone();
            let atlas = Atlas::new(&g);
            for h in g.subgroups() {
                for l in g.subgroups().filter(|&l| g.is_subgroup(l, h)) {
                    let gh = atlas.transitive(h);
                    let p = GMap::projection_between(atlas.transitive(l), gh.clone());
                    for k in g.subgroups().filter(|&k| g.is_subgroup(k, h)) {
                        let f = atlas.projection(k, h);
                        let (_, _, p2) = pullback(&p, &f);
                        let pulled = om.from_gset_map(&p2);
                        assert_eq!(pulled, om.restrict_along(&f, &om.from_gset_map(&p)));
                    }
                }
            }
        }
    }

    #[test]
    fn norms_match_exponential_diagrams() {
        for name in ["C2", "C3", "S3", "C4", "C2xC2"] {
            let om = omega(name);
            let g = om.group().clone();
            let atlas = Atlas::new(&g);
            for h in g.subgroups() {
                for k in g.subgroups().filter(|&k| g.is_subgroup(k, h)) {
                    let f = atlas.projection(k, h);
                    // A = G/l1 ⨿ G/l2 over G/K
                    for l1 in g.subgroups().filter(|&l| g.is_subgroup(l, k)) {
                        for l2 in [k, g.trivial()] {
                            let (a, i1, i2) = GSet::coproduct(&atlas.transitive(l1), &atlas.transitive(l2));
                            let gk = atlas.transitive(k);
                            let m1 = GMap::projection_between(atlas.transitive(l1), gk.clone());
                            let m2 = GMap::projection_between(atlas.transitive(l2), gk.clone());
                            let mut table = vec![0; a.size()];
                            for x in 0..i1.source().size() {
                                table[i1.apply(x)] = m1.apply(x);
                            }
                            for x in 0..i2.source().size() {
                                table[i2.apply(x)] = m2.apply(x);
                            }
                            let p = GMap::new(a, gk, table).unwrap();
                            let Ok(lhs) = om.norm_via_exponential(&f, &p, DEFAULT_MAX_SECTIONS) else { continue };
                            let rhs = om.norm_along(&f, &om.from_gset_map(&p));
                            assert_eq!(lhs, rhs, "{name}: norm of {:?}", p);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_divisors_and_division() {
        let om = omega("S3");
        let top = om.group().whole();
        // [S3/e] - 6·1 has ghost (0, -6, -6, -6)
        let x = v(&[1, 0, 0, -6]);
        let b = om.zero_divisor(top, &x).witness().unwrap();
        assert!(b.iter().any(|c| !c.is_zero()));
        assert_eq!(om.mul(top, &x, &b), om.zero(top));
        let unit = om.one(top);
        assert!(om.zero_divisor(top, &unit).is_no());
        let a = v(&[0, 1, 1, 0]);
        let c = om.mul(top, &a, &v(&[2, 0, 1, 3]));
        let b = om.divide(top, &c, &a).witness().unwrap();
        assert_eq!(om.mul(top, &a, &b), c);
    }
}
