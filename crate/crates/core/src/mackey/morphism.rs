//! Morphisms of semi-Mackey functors: naturality checks, exhaustive
//! enumeration for finite carriers, factorization through fractions, image
//! and preimage subfunctors, and the comparison between an iterated
//! fraction and a single one.

use std::sync::Arc;

use rand::RngCore;

use crate::decision::{Decision, Tally};
use crate::error::{Error, Result};
use crate::group::SubgroupId;
use crate::gset::Atlas;
use crate::mackey::fraction::{Frac, FractionSemiMackey};
use crate::mackey::subfunctor::{Certificate, GensFn, MemberFn, SubMonoidFunctor};
use crate::mackey::{SemiMackey, SemiMackeyExt};

pub type LevelMap<A, B> = Arc<dyn Fn(SubgroupId, &A) -> B + Send + Sync>;

/// A family of monoid homomorphisms `A(G/H) → B(G/H)`, one per level.
pub struct MackeyMorphism<A: SemiMackey, B: SemiMackey> {
    pub source: Arc<A>,
    pub target: Arc<B>,
    map: LevelMap<A::Elem, B::Elem>,
}

impl<A: SemiMackey, B: SemiMackey> Clone for MackeyMorphism<A, B> {
    fn clone(&self) -> Self {
        MackeyMorphism { source: self.source.clone(), target: self.target.clone(), map: self.map.clone() }
    }
}

impl<A: SemiMackey + 'static, B: SemiMackey + 'static> MackeyMorphism<A, B> {
    pub fn new(source: Arc<A>, target: Arc<B>, map: impl Fn(SubgroupId, &A::Elem) -> B::Elem + Send + Sync + 'static) -> Self {
        MackeyMorphism { source, target, map: Arc::new(map) }
    }

    pub fn apply(&self, h: SubgroupId, x: &A::Elem) -> B::Elem {
        (self.map)(h, x)
    }

    /// Compatibility with the unit, products, restriction, transfer and
    /// conjugation along every map between transitive G-sets.
    pub fn check(&self, samples: usize, rng: &mut dyn RngCore) -> Tally {
        let (a, b) = (&self.source, &self.target);
        let g = a.group().clone();
        let atlas = Atlas::new(&g);
        let mut tally = Tally::new();
        for h in g.subgroups() {
            tally
                .record(&b.equal(h, &self.apply(h, &a.unit(h)), &b.unit(h)), || format!("unit not preserved at level {}", g.class_name(h)));
            for _ in 0..samples {
                let x = a.sample(h, rng);
                let y = a.sample(h, rng);
                let lhs = self.apply(h, &a.combine(h, &x, &y));
                let rhs = b.combine(h, &self.apply(h, &x), &self.apply(h, &y));
                tally.record(&b.equal(h, &lhs, &rhs), || format!("product not preserved at level {}", g.class_name(h)));
            }
        }
        for h in g.subgroups() {
            for k in g.subgroups() {
                for f in atlas.maps_between(h, k) {
                    let kl = f.target().orbits().orbits[0].stabilizer;
                    for _ in 0..samples {
                        let x = a.sample(h, rng);
                        let lhs = b.transfer_along(&f, &[self.apply(h, &x)]);
                        let rhs = [self.apply(kl, &a.transfer_along(&f, std::slice::from_ref(&x))[0])];
                        tally.record(&b.equal_values(f.target(), &lhs, &rhs), || format!("transfer along {f:?} not preserved"));
                        let y = a.sample(kl, rng);
                        let lhs = b.restrict_along(&f, &[self.apply(kl, &y)]);
                        let rhs = [self.apply(h, &a.restrict_along(&f, std::slice::from_ref(&y))[0])];
                        tally.record(&b.equal_values(f.source(), &lhs, &rhs), || format!("restriction along {f:?} not preserved"));
                    }
                }
            }
        }
        tally
    }

    pub fn then<C: SemiMackey + 'static>(&self, next: &MackeyMorphism<B, C>) -> MackeyMorphism<A, C> {
        let (f, g) = (self.map.clone(), next.map.clone());
        MackeyMorphism::new(self.source.clone(), next.target.clone(), move |h, x| g(h, &f(h, x)))
    }
}

/// A morphism between finite functors as an index table per level, with
/// respect to `elements(h)` of source and target.
pub type MorphismTable = Vec<Vec<usize>>;

fn index_of<M: SemiMackey + ?Sized>(m: &M, h: SubgroupId, list: &[M::Elem], x: &M::Elem) -> Option<usize> {
    list.iter().position(|y| m.equal(h, x, y).is_yes())
}

/// Every morphism `A → B` between functors whose levels are finite, found by
/// backtracking over monoid homomorphisms level by level and then
/// filtering for naturality along all maps between transitive G-sets.
pub fn enumerate_morphisms<A, B>(a: &A, b: &B) -> Result<Vec<MorphismTable>>
where
    A: SemiMackey + ?Sized,
    B: SemiMackey + ?Sized,
{
    let g = a.group().clone();
    let subs: Vec<SubgroupId> = g.subgroups().collect();
    let mut la = Vec::new();
    let mut lb = Vec::new();
    for &h in &subs {
        la.push(a.elements(h).ok_or_else(|| Error::UndecidableCarrier(format!("{} is infinite", a.name())))?);
        lb.push(b.elements(h).ok_or_else(|| Error::UndecidableCarrier(format!("{} is infinite", b.name())))?);
    }
    // products as index tables
    let table = |m: &dyn Fn(&usize, &usize) -> Option<usize>, n: usize| -> Option<Vec<Vec<usize>>> {
        (0..n).map(|i| (0..n).map(|j| m(&i, &j)).collect()).collect()
    };
    let mut per_level: Vec<Vec<Vec<usize>>> = Vec::new();
    for (li, &h) in subs.iter().enumerate() {
        let (xa, xb) = (&la[li], &lb[li]);
        let ta = table(&|&i, &j| index_of(a, h, xa, &a.combine(h, &xa[i], &xa[j])), xa.len())
            .ok_or_else(|| Error::UndecidableCarrier("elements not closed under products".into()))?;
        let tb = table(&|&i, &j| index_of(b, h, xb, &b.combine(h, &xb[i], &xb[j])), xb.len())
            .ok_or_else(|| Error::UndecidableCarrier("elements not closed under products".into()))?;
        let ua = index_of(a, h, xa, &a.unit(h)).expect("unit listed");
        let ub = index_of(b, h, xb, &b.unit(h)).expect("unit listed");
        let mut found = Vec::new();
        let mut f = vec![usize::MAX; xa.len()];
        f[ua] = ub;
        homs(&ta, &tb, &mut f, 0, &mut found);
        per_level.push(found);
    }
    // structure maps as index tables
    let atlas = Atlas::new(&g);
    let mut pos = vec![0; g.subgroup_count()];
    for (i, &h) in subs.iter().enumerate() {
        pos[h.0] = i;
    }
    struct Edge {
        from: usize,
        to: usize,
        a: Vec<usize>,
        b: Vec<usize>,
    }
    let mut edges = Vec::new();
    for &h in &subs {
        for &k in &subs {
            for f in atlas.maps_between(h, k) {
                let kl = f.target().orbits().orbits[0].stabilizer;
                let (hi, ki) = (pos[h.0], pos[kl.0]);
                let tr = |x: &A::Elem| a.transfer_along(&f, std::slice::from_ref(x)).pop().unwrap();
                let trb = |x: &B::Elem| b.transfer_along(&f, std::slice::from_ref(x)).pop().unwrap();
                let re = |x: &A::Elem| a.restrict_along(&f, std::slice::from_ref(x)).pop().unwrap();
                let reb = |x: &B::Elem| b.restrict_along(&f, std::slice::from_ref(x)).pop().unwrap();
                let mk = |la_: &[A::Elem], lta: &[A::Elem], m: &dyn Fn(&A::Elem) -> A::Elem, lv| {
                    la_.iter().map(|x| index_of(a, lv, lta, &m(x)).expect("closed")).collect::<Vec<_>>()
                };
                let mkb = |lb_: &[B::Elem], ltb: &[B::Elem], m: &dyn Fn(&B::Elem) -> B::Elem, lv| {
                    lb_.iter().map(|x| index_of(b, lv, ltb, &m(x)).expect("closed")).collect::<Vec<_>>()
                };
                edges.push(Edge { from: hi, to: ki, a: mk(&la[hi], &la[ki], &tr, kl), b: mkb(&lb[hi], &lb[ki], &trb, kl) });
                edges.push(Edge { from: ki, to: hi, a: mk(&la[ki], &la[hi], &re, h), b: mkb(&lb[ki], &lb[hi], &reb, h) });
            }
        }
    }
    let mut out = Vec::new();
    let mut choice: Vec<usize> = vec![0; subs.len()];
    loop {
        if per_level.iter().any(|l| l.is_empty()) {
            break;
        }
        let maps: Vec<&Vec<usize>> = choice.iter().enumerate().map(|(i, &c)| &per_level[i][c]).collect();
        let natural = edges.iter().all(|e| (0..e.a.len()).all(|x| maps[e.to][e.a[x]] == e.b[maps[e.from][x]]));
        if natural {
            out.push(maps.into_iter().cloned().collect());
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < per_level[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
    Ok(out)
}

fn homs(ta: &[Vec<usize>], tb: &[Vec<usize>], f: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
    if next == f.len() {
        out.push(f.clone());
        return;
    }
    if f[next] != usize::MAX {
        return homs(ta, tb, f, next + 1, out);
    }
    for v in 0..tb.len() {
        f[next] = v;
        let consistent = (0..f.len()).all(|i| {
            (0..f.len()).all(|j| {
                let (fi, fj, fij) = (f[i], f[j], f[ta[i][j]]);
                fi == usize::MAX || fj == usize::MAX || fij == usize::MAX || tb[fi][fj] == fij
            })
        });
        if consistent {
            homs(ta, tb, f, next + 1, out);
        }
    }
    f[next] = usize::MAX;
}

/// The factorization of `phi: M → M'` through `ℓ: M → S⁻¹M`, given by
/// `x/s ↦ phi(x)·phi(s)⁻¹`. Fails when a generator of S is not sent to a
/// unit.
pub fn factor_through_fraction<M, N>(
    phi: &MackeyMorphism<M, N>,
    fraction: Arc<FractionSemiMackey<M>>,
) -> Result<MackeyMorphism<FractionSemiMackey<M>, N>>
where
    M: SemiMackey + 'static,
    N: SemiMackey + 'static,
{
    let g = phi.source.group().clone();
    for h in g.subgroups() {
        for s in fraction.denominators().generators(h) {
            if !phi.target.inverse(h, &phi.apply(h, &s)).is_yes() {
                return Err(Error::NotInvertibleImage(format!("{} at level {}", phi.source.render(h, &s), g.class_name(h))));
            }
        }
    }
    let (f, n) = (phi.map.clone(), phi.target.clone());
    Ok(MackeyMorphism::new(fraction, phi.target.clone(), move |h, x: &Frac<M::Elem>| {
        let inv = n.inverse(h, &f(h, &x.den)).witness().expect("image of a denominator is a unit");
        n.combine(h, &f(h, &x.num), &inv)
    }))
}

/// The subfunctor generated by images of S under `phi`. Membership of `y`
/// is decided by comparing against images of all elements of S when the
/// source levels are finite, and by images of generator products otherwise
/// (`Unknown` if none match).
pub fn image_subfunctor<A, B>(phi: &MackeyMorphism<A, B>, s: &SubMonoidFunctor<A>, degree: usize) -> SubMonoidFunctor<B>
where
    A: SemiMackey + 'static,
    B: SemiMackey + 'static,
{
    let (phi2, s2) = (phi.clone(), s.clone());
    let member: MemberFn<B::Elem> = Arc::new(move |h, y| {
        let b = &phi2.target;
        let finite = phi2.source.elements(h);
        let exhaustive = finite.is_some();
        let pool =
            finite.map(|all| all.into_iter().filter(|x| s2.contains(h, x).is_yes()).collect()).unwrap_or_else(|| s2.products(h, degree));
        for x in pool {
            if b.equal(h, &phi2.apply(h, &x), y).is_yes() {
                return Decision::Yes(Certificate { a: b.unit(h), s: y.clone(), top: None });
            }
        }
        if exhaustive {
            Decision::No
        } else {
            Decision::Unknown
        }
    });
    let (phi3, s3) = (phi.clone(), s.clone());
    let gens: GensFn<B::Elem> = Arc::new(move |h| s3.generators(h).iter().map(|x| phi3.apply(h, x)).collect());
    SubMonoidFunctor::new(phi.target.clone(), format!("phi({})", s.name()), member, gens)
}

/// `phi⁻¹(S')`. Generators are the elements of finite source levels that
/// land in S'; for infinite levels only the unit is listed.
pub fn preimage_subfunctor<A, B>(phi: &MackeyMorphism<A, B>, s: &SubMonoidFunctor<B>) -> SubMonoidFunctor<A>
where
    A: SemiMackey + 'static,
    B: SemiMackey + 'static,
{
    let (phi2, s2) = (phi.clone(), s.clone());
    let member: MemberFn<A::Elem> =
        Arc::new(move |h, x| s2.contains(h, &phi2.apply(h, x)).map(|_| Certificate { a: phi2.source.unit(h), s: x.clone(), top: None }));
    let (phi3, s3) = (phi.clone(), s.clone());
    let gens: GensFn<A::Elem> = Arc::new(move |h| {
        let a = &phi3.source;
        match a.elements(h) {
            Some(all) => all.into_iter().filter(|x| s3.contains(h, &phi3.apply(h, x)).is_yes()).collect(),
            None => vec![a.unit(h)],
        }
    });
    SubMonoidFunctor::new(phi.source.clone(), format!("phi^-1({})", s.name()), member, gens)
}

/// The comparison `S'⁻¹M → ℓ_S(S')⁻¹(S⁻¹M)`, `x/s' ↦ (x/1)/(s'/1)`, for
/// `S ⊆ S'`, together with its inverse `(u/s)/(v/r) ↦ (u·r)/(s·v)`.
pub struct IteratedFraction<M: SemiMackey + 'static> {
    pub single: Arc<FractionSemiMackey<M>>,
    pub inner: Arc<FractionSemiMackey<M>>,
    pub outer: Arc<FractionSemiMackey<FractionSemiMackey<M>>>,
}

impl<M: SemiMackey + 'static> IteratedFraction<M> {
    /// `s` must be contained in `s_big`. The outer denominators are the
    /// fractions `v/r` equal to some `s'/1`; this is decided exactly by
    /// enumeration when the levels of M are finite.
    pub fn new(s: SubMonoidFunctor<M>, s_big: SubMonoidFunctor<M>) -> Self {
        let inner = Arc::new(FractionSemiMackey::new(s));
        let single = Arc::new(FractionSemiMackey::new(s_big.clone()));
        let (inner2, big) = (inner.clone(), s_big.clone());
        let member: MemberFn<Frac<M::Elem>> = Arc::new(move |h, y| {
            let m = inner2.base();
            if m.equal(h, &y.den, &m.unit(h)).is_yes() && big.contains(h, &y.num).is_yes() {
                return Decision::Yes(Certificate { a: inner2.unit(h), s: y.clone(), top: None });
            }
            let Some(all) = m.elements(h) else { return Decision::Unknown };
            for t in all.into_iter().filter(|t| big.contains(h, t).is_yes()) {
                if inner2.equal(h, &inner2.ell(h, &t), y).is_yes() {
                    return Decision::Yes(Certificate { a: inner2.unit(h), s: y.clone(), top: None });
                }
            }
            Decision::No
        });
        let (inner3, big) = (inner.clone(), s_big);
        let gens: GensFn<Frac<M::Elem>> = Arc::new(move |h| big.generators(h).iter().map(|t| inner3.ell(h, t)).collect());
        let image = SubMonoidFunctor::new(inner.clone(), "l(S')", member, gens);
        let outer = Arc::new(FractionSemiMackey::new(image));
        IteratedFraction { single, inner, outer }
    }

    pub fn forward(&self, h: SubgroupId, x: &Frac<M::Elem>) -> Frac<Frac<M::Elem>> {
        Frac::new(self.inner.ell(h, &x.num), self.inner.ell(h, &x.den))
    }

    pub fn backward(&self, h: SubgroupId, y: &Frac<Frac<M::Elem>>) -> Frac<M::Elem> {
        let m = self.single.base();
        let (u, s) = (&y.num.num, &y.num.den);
        let (v, r) = (&y.den.num, &y.den.den);
        Frac::new(m.combine(h, u, r), m.combine(h, s, v))
    }

    /// Round trips in both directions on all elements of finite levels.
    pub fn check_bijective(&self) -> Tally {
        let g = self.single.group().clone();
        let mut tally = Tally::new();
        for h in g.subgroups() {
            if let Some(xs) = self.single.elements(h) {
                for x in &xs {
                    let back = self.backward(h, &self.forward(h, x));
                    tally.record(&self.single.equal(h, &back, x), || format!("backward∘forward moves {x:?}"));
                }
            } else {
                tally.record(&Decision::<()>::Unknown, || "infinite level".to_string());
            }
            if let Some(ys) = self.outer.elements(h) {
                for y in &ys {
                    let there = self.forward(h, &self.backward(h, y));
                    tally.record(&self.outer.equal(h, &there, y), || format!("forward∘backward moves {y:?}"));
                }
            }
        }
        tally
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::mackey::fixed::{FixedPointSemiMackey, ZnMul};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Zn = FixedPointSemiMackey<ZnMul>;

    fn zn(n: u64) -> Arc<Zn> {
        Arc::new(FixedPointSemiMackey::new(FiniteGroup::parse("C2").unwrap(), ZnMul(n)))
    }

    fn levelwise(m: Arc<Zn>, name: &str, set: Vec<u64>) -> SubMonoidFunctor<Zn> {
        let s2 = set.clone();
        let member: MemberFn<u64> =
            Arc::new(move |_, x| if s2.contains(x) { Decision::Yes(Certificate { a: 1, s: *x, top: None }) } else { Decision::No });
        let gens: GensFn<u64> = Arc::new(move |_| set.clone());
        SubMonoidFunctor::new(m, name, member, gens)
    }

    #[test]
    fn universal_property_by_enumeration() {
        // S = {1, 3} in (Z/6, *): the fraction is (Z/2, *)
        let m = zn(6);
        let s = levelwise(m.clone(), "{1,3}", vec![1, 3]);
        assert!(s.is_subfunctor().passed());
        let frac = Arc::new(FractionSemiMackey::new(s.clone()));
        let g = m.group().clone();
        for h in g.subgroups() {
            assert_eq!(frac.elements(h).unwrap().len(), 2);
        }
        for target in [zn(2), zn(3), zn(4), zn(6)] {
            let from_m = enumerate_morphisms(&*m, &*target).unwrap();
            let from_frac = enumerate_morphisms(&*frac, &*target).unwrap();
            // morphisms M → M' inverting S
            let m_elems: Vec<Vec<u64>> = g.subgroups().map(|h| m.elements(h).unwrap()).collect();
            let t_elems: Vec<Vec<u64>> = g.subgroups().map(|h| target.elements(h).unwrap()).collect();
            let inverting: Vec<&MorphismTable> = from_m
                .iter()
                .filter(|t| {
                    g.subgroups().enumerate().all(|(li, h)| {
                        m_elems[li]
                            .iter()
                            .enumerate()
                            .all(|(i, x)| !s.contains(h, x).is_yes() || target.inverse(h, &t_elems[li][t[li][i]]).is_yes())
                    })
                })
                .collect();
            // composing with ℓ is a bijection onto those
            let f_elems: Vec<Vec<Frac<u64>>> = g.subgroups().map(|h| frac.elements(h).unwrap()).collect();
            let composed: Vec<MorphismTable> = from_frac
                .iter()
                .map(|t| {
                    g.subgroups()
                        .enumerate()
                        .map(|(li, h)| {
                            m_elems[li]
                                .iter()
                                .map(|x| {
                                    let j = index_of(&*frac, h, &f_elems[li], &frac.ell(h, x)).unwrap();
                                    t[li][j]
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            assert_eq!(composed.len(), inverting.len(), "target {}", target.name());
            for c in &composed {
                assert_eq!(inverting.iter().filter(|t| **t == c).count(), 1);
            }
        }
    }

    #[test]
    fn factorization_and_its_failure() {
        let m = zn(6);
        let s = levelwise(m.clone(), "{1,3}", vec![1, 3]);
        let frac = Arc::new(FractionSemiMackey::new(s.clone()));
        let target = zn(2);
        let reduce = MackeyMorphism::new(m.clone(), target.clone(), |_, x: &u64| x % 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(reduce.check(10, &mut rng).passed());
        let lifted = factor_through_fraction(&reduce, frac.clone()).unwrap();
        assert!(lifted.check(10, &mut rng).passed());
        for h in m.group().subgroups() {
            for x in 0..6 {
                assert_eq!(lifted.apply(h, &frac.ell(h, &x)), x % 2);
            }
        }
        // x ↦ x mod 3 sends 3 to 0, which is not a unit
        let bad = MackeyMorphism::new(m.clone(), zn(3), |_, x: &u64| x % 3);
        assert!(matches!(factor_through_fraction(&bad, frac), Err(Error::NotInvertibleImage(_))));
    }

    #[test]
    fn image_and_preimage() {
        let m = zn(6);
        let id = MackeyMorphism::new(m.clone(), m.clone(), |_, x: &u64| *x);
        let s = levelwise(m.clone(), "{1,3}", vec![1, 3]);
        let img = image_subfunctor(&id, &s, 3);
        let pre = preimage_subfunctor(&id, &s);
        let h = m.group().whole();
        for x in 0..6u64 {
            let expected = x == 1 || x == 3;
            assert_eq!(img.contains(h, &x).is_yes(), expected);
            assert_eq!(pre.contains(h, &x).is_yes(), expected);
        }
        // preimage of the units of Z/2 under reduction: the odd residues
        let reduce = MackeyMorphism::new(m.clone(), zn(2), |_, x: &u64| x % 2);
        let pre = preimage_subfunctor(&reduce, &SubMonoidFunctor::units(zn(2)));
        assert_eq!(pre.generators(h), vec![1, 3, 5]);
        assert!(pre.is_subfunctor().passed());
    }

    #[test]
    fn iterated_fractions_agree_with_single_ones() {
        let m = zn(12);
        // {1} ⊆ {1,5,7,11} and {1,9} ⊆ {1,3,9}
        for (small, big) in [(vec![1u64], vec![1u64, 5, 7, 11]), (vec![1, 9], vec![1, 3, 9])] {
            let s = levelwise(m.clone(), "S", small);
            let sb = levelwise(m.clone(), "S'", big);
            assert!(s.is_subfunctor().passed() && sb.is_subfunctor().passed());
            let it = IteratedFraction::new(s, sb);
            let t = it.check_bijective();
            assert!(t.passed(), "{:?}", t.failures);
            let h = m.group().whole();
            assert_eq!(it.single.elements(h).unwrap().len(), it.outer.elements(h).unwrap().len());
        }
    }
}
