//! Morphisms of Tambara functors: naturality checks, the marks morphism
//! Ω → P_Z, factorization through fractions, image and preimage
//! subfunctors, and the comparison for iterated fractions.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, RngCore};

use crate::decision::{Decision, Tally};
use crate::error::{Error, Result};
use crate::group::SubgroupId;
use crate::gset::{Atlas, GMap};
use crate::mackey::fraction::Frac;
use crate::mackey::morphism::{self as mm, MackeyMorphism};
use crate::mackey::subfunctor::{Certificate, GensFn, MemberFn, SubMonoidFunctor};
use crate::ring::{Integers, Rationals};
use crate::tambara::burnside::Burnside;
use crate::tambara::fixed_point::FixedPoint;
use crate::tambara::fraction::{Denominators, FractionTambara};
use crate::tambara::{Multiplicative, Tambara, TambaraExt};

type Map<A, B> = Arc<dyn Fn(SubgroupId, &A) -> B + Send + Sync>;

/// A family of ring homomorphisms `A(G/H) → B(G/H)`.
pub struct TambaraMorphism<A: Tambara, B: Tambara> {
    pub source: Arc<A>,
    pub target: Arc<B>,
    pub name: String,
    map: Map<A::Elem, B::Elem>,
}

impl<A: Tambara, B: Tambara> Clone for TambaraMorphism<A, B> {
    fn clone(&self) -> Self {
        TambaraMorphism { source: self.source.clone(), target: self.target.clone(), name: self.name.clone(), map: self.map.clone() }
    }
}

/// The structure maps compared by a naturality check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureMap {
    Restriction,
    Transfer,
    Norm,
}

impl<A: Tambara + 'static, B: Tambara + 'static> TambaraMorphism<A, B> {
    pub fn new(
        source: Arc<A>,
        target: Arc<B>,
        name: impl Into<String>,
        map: impl Fn(SubgroupId, &A::Elem) -> B::Elem + Send + Sync + 'static,
    ) -> Self {
        TambaraMorphism { source, target, name: name.into(), map: Arc::new(map) }
    }

    pub fn apply(&self, h: SubgroupId, x: &A::Elem) -> B::Elem {
        (self.map)(h, x)
    }

    pub fn then<C: Tambara + 'static>(&self, next: &TambaraMorphism<B, C>) -> TambaraMorphism<A, C> {
        let (f, g) = (self.map.clone(), next.map.clone());
        TambaraMorphism::new(self.source.clone(), next.target.clone(), format!("{}; {}", self.name, next.name), move |h, x| g(h, &f(h, x)))
    }

    /// The underlying morphism of multiplicative semi-Mackey functors.
    pub fn multiplicative(&self) -> MackeyMorphism<Multiplicative<A>, Multiplicative<B>> {
        let f = self.map.clone();
        MackeyMorphism::new(Arc::new(Multiplicative(self.source.clone())), Arc::new(Multiplicative(self.target.clone())), move |h, x| {
            f(h, x)
        })
    }

    /// Ring homomorphism axioms at one level on the given elements.
    pub fn check_ring_map(&self, h: SubgroupId, xs: &[A::Elem]) -> Tally {
        let (a, b) = (&self.source, &self.target);
        let g = a.group();
        let mut tally = Tally::new();
        tally.record(&b.equal(h, &self.apply(h, &a.one(h)), &b.one(h)), || {
            format!("{}: unit not preserved at {}", self.name, g.class_name(h))
        });
        tally.record(&b.equal(h, &self.apply(h, &a.zero(h)), &b.zero(h)), || {
            format!("{}: zero not preserved at {}", self.name, g.class_name(h))
        });
        for x in xs {
            for y in xs.iter().take(4) {
                let fx = self.apply(h, x);
                let fy = self.apply(h, y);
                let sum = b.equal(h, &self.apply(h, &a.add(h, x, y)), &b.add(h, &fx, &fy));
                tally.record(&sum, || format!("{}: sum not preserved at {}", self.name, g.class_name(h)));
                let prod = b.equal(h, &self.apply(h, &a.mul(h, x, y)), &b.mul(h, &fx, &fy));
                tally.record(&prod, || format!("{}: product not preserved at {}", self.name, g.class_name(h)));
            }
        }
        tally
    }

    /// Naturality along one map `f: G/K → G/H` of transitive G-sets.
    /// `x` lives at the source level and `y` at the target level.
    pub fn check_along(&self, f: &GMap, which: StructureMap, x: &A::Elem, y: &A::Elem) -> Decision {
        let (a, b) = (&self.source, &self.target);
        let k = f.source().orbits().orbits[0].stabilizer;
        let h = f.target().orbits().orbits[0].stabilizer;
        match which {
            StructureMap::Restriction => {
                let lhs = b.restrict_along(f, &[self.apply(h, y)]);
                let rhs = self.apply(k, &a.restrict_along(f, std::slice::from_ref(y))[0]);
                b.equal(k, &lhs[0], &rhs)
            }
            StructureMap::Transfer => {
                let lhs = b.transfer_along(f, &[self.apply(k, x)]);
                let rhs = self.apply(h, &a.transfer_along(f, std::slice::from_ref(x))[0]);
                b.equal(h, &lhs[0], &rhs)
            }
            StructureMap::Norm => {
                let lhs = b.norm_along(f, &[self.apply(k, x)]);
                let rhs = self.apply(h, &a.norm_along(f, std::slice::from_ref(x))[0]);
                b.equal(h, &lhs[0], &rhs)
            }
        }
    }

    /// Naturality for restriction, transfer and norm along every map of
    /// transitive G-sets, on the elements produced by `elems` per level.
    pub fn check_on(&self, elems: impl Fn(SubgroupId) -> Vec<A::Elem>) -> Tally {
        let g = self.source.group().clone();
        let atlas = Atlas::new(&g);
        let mut tally = Tally::new();
        let per_level: Vec<Vec<A::Elem>> = g.subgroups().map(&elems).collect();
        for h in g.subgroups() {
            tally.merge(self.check_ring_map(h, &per_level[h.0]));
        }
        for k in g.subgroups() {
            for h in g.subgroups() {
                for f in atlas.maps_between(k, h) {
                    for x in &per_level[k.0] {
                        for which in [StructureMap::Transfer, StructureMap::Norm] {
                            tally.record(&self.check_along(&f, which, x, x), || {
                                format!("{}: {which:?} along {f:?} at {}", self.name, self.source.render(k, x))
                            });
                        }
                    }
                    for y in &per_level[h.0] {
                        tally.record(&self.check_along(&f, StructureMap::Restriction, y, y), || {
                            format!("{}: restriction along {f:?} at {}", self.name, self.source.render(h, y))
                        });
                    }
                }
            }
        }
        tally
    }

    /// Naturality on `samples` random (map, element) pairs, each checked
    /// for restriction, transfer and norm, plus the ring axioms per level.
    pub fn check_sampled(&self, samples: usize, rng: &mut dyn RngCore) -> Tally {
        let a = &self.source;
        let g = a.group().clone();
        let atlas = Atlas::new(&g);
        let maps: Vec<GMap> =
            g.subgroups().flat_map(|k| g.subgroups().flat_map(|h| atlas.maps_between(k, h)).collect::<Vec<_>>()).collect();
        let mut tally = Tally::new();
        for h in g.subgroups() {
            let xs: Vec<A::Elem> = (0..4).map(|_| a.sample(h, rng)).collect();
            tally.merge(self.check_ring_map(h, &xs));
        }
        for _ in 0..samples {
            let f = &maps[rng.gen_range(0..maps.len())];
            let k = f.source().orbits().orbits[0].stabilizer;
            let h = f.target().orbits().orbits[0].stabilizer;
            let x = a.sample(k, rng);
            let y = a.sample(h, rng);
            for which in [StructureMap::Restriction, StructureMap::Transfer, StructureMap::Norm] {
                tally.record(&self.check_along(f, which, &x, &y), || {
                    format!("{}: {which:?} along {f:?} at x = {}, y = {}", self.name, a.render(k, &x), a.render(h, &y))
                });
            }
        }
        tally
    }
}

/// ℘: Ω → P_Z, `Σ m_K [H/K] ↦ Σ m_K |H:K|`.
pub fn marks_morphism(omega: Arc<Burnside>) -> TambaraMorphism<Burnside, FixedPoint<Integers>> {
    let g = omega.group().clone();
    let target = Arc::new(FixedPoint::new(g, Integers));
    let om = omega.clone();
    TambaraMorphism::new(omega, target, "marks", move |h, x: &Vec<BigInt>| om.index_weights(h).iter().zip(x).map(|(w, c)| w * c).sum())
}

/// ℘ followed by Z ⊂ Q.
pub fn marks_to_rationals(omega: Arc<Burnside>) -> TambaraMorphism<Burnside, FixedPoint<Rationals>> {
    let g = omega.group().clone();
    let target = Arc::new(FixedPoint::new(g, Rationals));
    let om = omega.clone();
    TambaraMorphism::new(omega, target, "marks/Q", move |h, x: &Vec<BigInt>| {
        BigRational::from_integer(om.index_weights(h).iter().zip(x).map(|(w, c)| w * c).sum())
    })
}

fn check_generator_images<T, U>(phi: &TambaraMorphism<T, U>, s: &Denominators<T>) -> Result<()>
where
    T: Tambara + 'static,
    U: Tambara + 'static,
{
    let g = phi.source.group().clone();
    for h in g.subgroups() {
        for gen in s.generators(h) {
            if !phi.target.inverse(h, &phi.apply(h, &gen)).is_yes() {
                return Err(Error::NotInvertibleImage(format!("{} at level {}", phi.source.render(h, &gen), g.class_name(h))));
            }
        }
    }
    Ok(())
}

/// The factorization `x/s ↦ φ(x)·φ(s)⁻¹` of `φ: T → T'` through
/// `ℓ: T → S⁻¹T`. Fails when a generator of S is not sent to a unit.
///
/// The returned map panics if a denominator outside the generated part of
/// S is sent to a non-unit, which cannot happen for a valid subfunctor.
pub fn universal_factorization<T, U>(
    phi: &TambaraMorphism<T, U>,
    fraction: Arc<FractionTambara<T>>,
) -> Result<TambaraMorphism<FractionTambara<T>, U>>
where
    T: Tambara + 'static,
    U: Tambara + 'static,
{
    check_generator_images(phi, fraction.denominators())?;
    let (f, u) = (phi.map.clone(), phi.target.clone());
    Ok(TambaraMorphism::new(fraction, phi.target.clone(), format!("{}~", phi.name), move |h, x: &Frac<T::Elem>| {
        let inv = u.inverse(h, &f(h, &x.den)).witness().expect("image of a denominator is a unit");
        u.mul(h, &f(h, &x.num), &inv)
    }))
}

/// A second construction of the same factorization, through membership
/// certificates: with `a·s = res^G_H(t)`, the image of `x/s` is
/// `φ(a·x)·res^G_H(φ(t)⁻¹)`, so inverses are only taken at the top level.
/// Falls back to inverting `φ(a·s)` when the certificate has no top element.
pub fn factorization_via_certificates<T, U>(
    phi: &TambaraMorphism<T, U>,
    fraction: Arc<FractionTambara<T>>,
) -> Result<TambaraMorphism<FractionTambara<T>, U>>
where
    T: Tambara + 'static,
    U: Tambara + 'static,
{
    check_generator_images(phi, fraction.denominators())?;
    let (f, u) = (phi.map.clone(), phi.target.clone());
    let base = fraction.base().clone();
    let s = fraction.denominators().clone();
    let top = base.group().whole();
    Ok(TambaraMorphism::new(fraction, phi.target.clone(), format!("{}~cert", phi.name), move |h, x: &Frac<T::Elem>| {
        let cert = match s.contains(h, &x.den) {
            Decision::Yes(c) => c,
            _ => panic!("denominator {} is not certified", base.render(h, &x.den)),
        };
        let num = f(h, &base.mul(h, &cert.a, &x.num));
        let at_top = cert.top.filter(|t| base.equal(h, &base.restrict(top, h, t), &cert.s).is_yes());
        let inv = match at_top {
            Some(t) => {
                let it = u.inverse(top, &f(top, &t)).witness().expect("image of a denominator is a unit");
                u.restrict(top, h, &it)
            }
            None => u.inverse(h, &f(h, &cert.s)).witness().expect("image of a denominator is a unit"),
        };
        u.mul(h, &num, &inv)
    }))
}

/// The subfunctor of T'^μ generated by `φ(S)`.
pub fn image_subfunctor<T, U>(phi: &TambaraMorphism<T, U>, s: &Denominators<T>, degree: usize) -> Denominators<U>
where
    T: Tambara + 'static,
    U: Tambara + 'static,
{
    mm::image_subfunctor(&phi.multiplicative(), s, degree)
}

/// `φ⁻¹(S')` as a subfunctor of T^μ.
pub fn preimage_subfunctor<T, U>(phi: &TambaraMorphism<T, U>, s: &Denominators<U>) -> Denominators<T>
where
    T: Tambara + 'static,
    U: Tambara + 'static,
{
    mm::preimage_subfunctor(&phi.multiplicative(), s)
}

/// `S⁻¹T → φ(S)⁻¹T'`, `x/s ↦ φ(x)/φ(s)`.
pub fn induced_on_fractions<T, U>(
    phi: &TambaraMorphism<T, U>,
    source: Arc<FractionTambara<T>>,
    target: Arc<FractionTambara<U>>,
) -> TambaraMorphism<FractionTambara<T>, FractionTambara<U>>
where
    T: Tambara + 'static,
    U: Tambara + 'static,
{
    let f = phi.map.clone();
    TambaraMorphism::new(source, target, format!("{} on fractions", phi.name), move |h, x: &Frac<T::Elem>| {
        Frac::new(f(h, &x.num), f(h, &x.den))
    })
}

/// `ℓ_S` as a morphism `T → S⁻¹T`.
pub fn ell_morphism<T: Tambara + 'static>(fraction: Arc<FractionTambara<T>>) -> TambaraMorphism<T, FractionTambara<T>> {
    let fr = fraction.clone();
    TambaraMorphism::new(fraction.base().clone(), fraction, "l", move |h, x| fr.ell(h, x))
}

pub type Outer<T> = FractionTambara<FractionTambara<T>>;

/// For `S ⊆ S'`: the comparison `S'⁻¹T → S̄⁻¹(S⁻¹T)` where `S̄` is the
/// subfunctor generated by `ℓ_S(S')`, with inverse
/// `(u/s)/(v/r) ↦ (u·r)/(s·v)`.
pub struct IteratedFractionTambara<T: Tambara + 'static> {
    pub single: Arc<FractionTambara<T>>,
    pub inner: Arc<FractionTambara<T>>,
    pub outer: Arc<Outer<T>>,
}

impl<T: Tambara + 'static> IteratedFractionTambara<T> {
    /// Membership of `v/r` in `S̄` is decided by membership of `v` in S',
    /// which is exact when S' is saturated (for instance built by `build_u`).
    pub fn new(s: Denominators<T>, s_big: Denominators<T>) -> Self {
        let single = Arc::new(FractionTambara::new(s_big.clone()));
        let inner = Arc::new(FractionTambara::new(s));
        let big = s_big.clone();
        let inner2 = inner.clone();
        let member: MemberFn<Frac<T::Elem>> =
            Arc::new(move |h, y| big.contains(h, &y.num).map(|_| Certificate { a: inner2.one(h), s: y.clone(), top: None }));
        let inner3 = inner.clone();
        let big2 = s_big.clone();
        let gens: GensFn<Frac<T::Elem>> = Arc::new(move |h| big2.generators(h).iter().map(|t| inner3.ell(h, t)).collect());
        let mu = Arc::new(Multiplicative(inner.clone()));
        let mut bar = SubMonoidFunctor::new(mu, format!("l({})", s_big.name()), member, gens);
        if let Some(ann) = s_big.annihilator.clone() {
            // u·n = 0 in T for u in S' gives (u/1)·(n/m) = 0
            let inner4 = inner.clone();
            bar.annihilator = Some(Arc::new(move |h, d: &Frac<T::Elem>| ann(h, &d.num).map(|u| inner4.ell(h, &u))));
        }
        let outer = Arc::new(FractionTambara::new(bar));
        IteratedFractionTambara { single, inner, outer }
    }

    pub fn forward(&self, h: SubgroupId, x: &Frac<T::Elem>) -> Frac<Frac<T::Elem>> {
        Frac::new(self.inner.ell(h, &x.num), self.inner.ell(h, &x.den))
    }

    pub fn backward(&self, h: SubgroupId, y: &Frac<Frac<T::Elem>>) -> Frac<T::Elem> {
        let t = self.single.base();
        let (u, s) = (&y.num.num, &y.num.den);
        let (v, r) = (&y.den.num, &y.den.den);
        Frac::new(t.mul(h, u, r), t.mul(h, s, v))
    }

    pub fn forward_morphism(&self) -> TambaraMorphism<FractionTambara<T>, Outer<T>> {
        let inner = self.inner.clone();
        TambaraMorphism::new(self.single.clone(), self.outer.clone(), "iterated", move |h, x: &Frac<T::Elem>| {
            Frac::new(inner.ell(h, &x.num), inner.ell(h, &x.den))
        })
    }

    /// Round trips in both directions and compatibility with the ℓ maps on
    /// `samples` random elements per level.
    pub fn check(&self, samples: usize, rng: &mut dyn RngCore) -> Tally {
        let g = self.single.group().clone();
        let base = self.single.base();
        let mut tally = Tally::new();
        for h in g.subgroups() {
            for _ in 0..samples {
                let x = self.single.sample(h, rng);
                let back = self.backward(h, &self.forward(h, &x));
                tally.record(&self.single.equal(h, &back, &x), || {
                    format!("round trip moves {} at {}", self.single.render(h, &x), g.class_name(h))
                });
                let y = self.outer.sample(h, rng);
                let there = self.forward(h, &self.backward(h, &y));
                tally.record(&self.outer.equal(h, &there, &y), || {
                    format!("round trip moves {} at {}", self.outer.render(h, &y), g.class_name(h))
                });
                let z = base.sample(h, rng);
                let lhs = self.forward(h, &self.single.ell(h, &z));
                let rhs = self.outer.ell(h, &self.inner.ell(h, &z));
                tally.record(&self.outer.equal(h, &lhs, &rhs), || format!("not compatible with l at {}", g.class_name(h)));
            }
        }
        tally
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::mackey::subfunctor::{build_u, Seed};
    use crate::ring::IntegersMod;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn marks_values() {
        let g = FiniteGroup::parse("S3").unwrap();
        let om = Arc::new(Burnside::new(g.clone()));
        let p = marks_morphism(om.clone());
        let top = g.whole();
        let c3 = g.subgroups().find(|&k| g.subgroup(k).order() == 3).unwrap();
        assert_eq!(p.apply(top, &om.coset(top, c3)), BigInt::from(2));
        for h in g.subgroups() {
            assert_eq!(p.apply(h, &om.one(h)), BigInt::from(1));
        }
        let c2 = FiniteGroup::parse("C2").unwrap();
        let om2 = Arc::new(Burnside::new(c2.clone()));
        let p2 = marks_morphism(om2);
        let x = vec![BigInt::from(1), BigInt::from(-2)];
        assert_eq!(p2.apply(c2.whole(), &x), BigInt::from(0));
    }

    #[test]
    fn marks_is_a_tambara_morphism() {
        for name in ["C2", "C3", "S3", "C2xC2"] {
            let g = FiniteGroup::parse(name).unwrap();
            let om = Arc::new(Burnside::new(g.clone()));
            let p = marks_morphism(om.clone());
            let basis = |h| (0..om.rank(h)).map(|j| om.basis(h, j)).collect();
            assert!(p.check_on(basis).passed(), "{name}");
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let t = p.check_sampled(40, &mut rng);
            assert!(t.passed(), "{name}: {:?}", t.failures);
        }
    }

    #[test]
    fn broken_morphism_is_located() {
        let g = FiniteGroup::parse("C2").unwrap();
        let om = Arc::new(Burnside::new(g.clone()));
        let target = Arc::new(FixedPoint::new(g.clone(), Integers));
        // the ghost coordinate at H itself is multiplicative but does not
        // commute with transfer
        let om2 = om.clone();
        let bad = TambaraMorphism::new(om.clone(), target, "top mark", move |h, x: &Vec<BigInt>| om2.ghost(h, x).last().unwrap().clone());
        let basis = |h| (0..om.rank(h)).map(|j| om.basis(h, j)).collect();
        let t = bad.check_on(basis);
        assert!(!t.passed());
    }

    fn odd_units_of_z12() -> (Arc<FixedPoint<IntegersMod>>, Denominators<FixedPoint<IntegersMod>>) {
        let g = FiniteGroup::parse("C2").unwrap();
        let p = Arc::new(FixedPoint::new(g, IntegersMod(12)));
        let mu = Arc::new(Multiplicative(p.clone()));
        let seed = Seed::new("units", |x: &u64| [1, 5, 7, 11].contains(x), vec![5, 7]);
        (p, build_u(mu, &seed, None).unwrap())
    }

    #[test]
    fn factorization_through_units_is_the_inverse_of_ell() {
        let (p, s) = odd_units_of_z12();
        let fr = Arc::new(FractionTambara::new(s));
        let id = TambaraMorphism::new(p.clone(), p.clone(), "id", |_, x: &u64| *x);
        let f1 = universal_factorization(&id, fr.clone()).unwrap();
        let f2 = factorization_via_certificates(&id, fr.clone()).unwrap();
        let g = p.group().clone();
        for h in g.subgroups() {
            for x in fr.classes(h).unwrap() {
                assert_eq!(f1.apply(h, &x), f2.apply(h, &x));
            }
            for x in 0..12u64 {
                assert_eq!(f1.apply(h, &fr.ell(h, &x)), x);
            }
        }
        let basis = |h| fr.classes(h).unwrap();
        assert!(f1.check_on(basis).passed());
    }

    #[test]
    fn non_invertible_image_is_rejected() {
        let g = FiniteGroup::parse("C2").unwrap();
        let p = Arc::new(FixedPoint::new(g.clone(), IntegersMod(6)));
        let mu = Arc::new(Multiplicative(p.clone()));
        let seed = Seed::new("odd", |x: &u64| x % 2 == 1, vec![3, 5]);
        let s = build_u(mu, &seed, None).unwrap();
        let fr = Arc::new(FractionTambara::new(s));
        let id = TambaraMorphism::new(p.clone(), p, "id", |_, x: &u64| *x);
        assert!(matches!(universal_factorization(&id, fr), Err(Error::NotInvertibleImage(_))));
    }

    #[test]
    fn iterated_fraction_round_trips() {
        let g = FiniteGroup::parse("C2").unwrap();
        let p = Arc::new(FixedPoint::new(g, IntegersMod(12)));
        let mu = Arc::new(Multiplicative(p.clone()));
        let small = build_u(mu.clone(), &Seed::new("one", |x: &u64| *x == 1, vec![]), None).unwrap();
        let big = build_u(mu, &Seed::new("odd", |x: &u64| x % 2 == 1, vec![3]), None).unwrap();
        let it = IteratedFractionTambara::new(small, big);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = it.check(20, &mut rng);
        assert!(t.passed(), "{:?}", t);
    }

    #[test]
    fn image_and_preimage() {
        let (p, s) = odd_units_of_z12();
        let id = TambaraMorphism::new(p.clone(), p.clone(), "id", |_, x: &u64| *x);
        let img = image_subfunctor(&id, &s, 3);
        let pre = preimage_subfunctor(&id, &s);
        let g = p.group().clone();
        for h in g.subgroups() {
            for x in 0..12u64 {
                assert_eq!(img.contains(h, &x).is_yes(), s.contains(h, &x).is_yes());
                assert_eq!(pre.contains(h, &x).is_yes(), s.contains(h, &x).is_yes());
            }
        }
    }
}
