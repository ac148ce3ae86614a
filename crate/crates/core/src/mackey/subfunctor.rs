//! Multiplicative subfunctors given intensionally: a membership procedure
//! with witnesses, a finite list of generators per level, and optional
//! oracles used when deciding equality of fractions.
//!
//! The two canonical builders take a saturated, G-invariant submonoid S of
//! the bottom level M(G/e): [`build_l`] gives the smallest subfunctor with
//! bottom level S (images of S under transfer from G/e) and [`build_u`] the
//! largest (elements whose restriction to G/e lies in S, i.e. the
//! saturation of the restrictions of elements from the top level whose
//! bottom restriction lies in S).

use std::fmt;
use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decision::{Decision, Tally};
use crate::error::{Error, Result};
use crate::group::SubgroupId;
use crate::gset::{diagonal_complement, Atlas, GMap};
use crate::mackey::{SemiMackey, SemiMackeyExt};

/// Evidence that `x` lies in a saturated subfunctor: `a·x = s` where `s`
/// is in the defining set. When `s` is the restriction of an element of
/// the top level, that element is `top`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<E> {
    pub a: E,
    pub s: E,
    pub top: Option<E>,
}

pub type MemberFn<E> = Arc<dyn Fn(SubgroupId, &E) -> Decision<Certificate<E>> + Send + Sync>;
pub type GensFn<E> = Arc<dyn Fn(SubgroupId) -> Vec<E> + Send + Sync>;
/// Given a level and `d`, finds `t` in the subfunctor with `t·d = 0`.
pub type AnnihilatorFn<E> = Arc<dyn Fn(SubgroupId, &E) -> Decision<E> + Send + Sync>;
/// Given a level and `u`, `v`, finds `t` in the subfunctor with `t·u = t·v`.
pub type EqualizerFn<E> = Arc<dyn Fn(SubgroupId, &E, &E) -> Decision<E> + Send + Sync>;
/// Proves `x` is outside the saturation of the level.
pub type ExcludeFn<E> = Arc<dyn Fn(SubgroupId, &E) -> bool + Send + Sync>;
/// Proposes members `s` that may be multiples of `x`, for saturation.
pub type MultipleFn<E> = Arc<dyn Fn(SubgroupId, &E) -> Vec<E> + Send + Sync>;

pub struct SubMonoidFunctor<M: SemiMackey> {
    parent: Arc<M>,
    name: String,
    member: MemberFn<M::Elem>,
    generators: GensFn<M::Elem>,
    pub annihilator: Option<AnnihilatorFn<M::Elem>>,
    pub equalizer: Option<EqualizerFn<M::Elem>>,
    pub excluded: Option<ExcludeFn<M::Elem>>,
    pub multiples: Option<MultipleFn<M::Elem>>,
}

impl<M: SemiMackey> Clone for SubMonoidFunctor<M> {
    fn clone(&self) -> Self {
        SubMonoidFunctor {
            parent: self.parent.clone(),
            name: self.name.clone(),
            member: self.member.clone(),
            generators: self.generators.clone(),
            annihilator: self.annihilator.clone(),
            equalizer: self.equalizer.clone(),
            excluded: self.excluded.clone(),
            multiples: self.multiples.clone(),
        }
    }
}

impl<M: SemiMackey> fmt::Debug for SubMonoidFunctor<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubMonoidFunctor({} of {})", self.name, self.parent.name())
    }
}

impl<M: SemiMackey + 'static> SubMonoidFunctor<M> {
    pub fn new(parent: Arc<M>, name: impl Into<String>, member: MemberFn<M::Elem>, generators: GensFn<M::Elem>) -> Self {
        SubMonoidFunctor {
            parent,
            name: name.into(),
            member,
            generators,
            annihilator: None,
            equalizer: None,
            excluded: None,
            multiples: None,
        }
    }

    /// The whole functor.
    pub fn whole(parent: Arc<M>) -> Self {
        let p = parent.clone();
        let member: MemberFn<M::Elem> = Arc::new(move |h, x| Decision::Yes(Certificate { a: p.unit(h), s: x.clone(), top: None }));
        let p = parent.clone();
        let gens: GensFn<M::Elem> = Arc::new(move |h| p.elements(h).unwrap_or_default());
        Self::new(parent, "whole", member, gens)
    }

    /// The subfunctor of units of every level.
    pub fn units(parent: Arc<M>) -> Self {
        let p = parent.clone();
        let member: MemberFn<M::Elem> =
            Arc::new(move |h, x| p.inverse(h, x).map(|_| Certificate { a: p.unit(h), s: x.clone(), top: None }));
        let p = parent.clone();
        let gens: GensFn<M::Elem> = Arc::new(move |h| match p.elements(h) {
            Some(all) => all.into_iter().filter(|x| p.inverse(h, x).is_yes()).collect(),
            None => vec![p.unit(h)],
        });
        Self::new(parent, "units", member, gens)
    }

    /// The trivial subfunctor `{1}`.
    pub fn trivial(parent: Arc<M>) -> Self {
        let p = parent.clone();
        let member: MemberFn<M::Elem> = Arc::new(move |h, x| match p.equal(h, x, &p.unit(h)) {
            Decision::Yes(()) => Decision::Yes(Certificate { a: p.unit(h), s: x.clone(), top: None }),
            Decision::No => Decision::No,
            Decision::Unknown => Decision::Unknown,
        });
        let p = parent.clone();
        let gens: GensFn<M::Elem> = Arc::new(move |h| vec![p.unit(h)]);
        Self::new(parent, "trivial", member, gens)
    }

    pub fn parent(&self) -> &Arc<M> {
        &self.parent
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn contains(&self, h: SubgroupId, x: &M::Elem) -> Decision<Certificate<M::Elem>> {
        (self.member)(h, x)
    }

    pub fn generators(&self, h: SubgroupId) -> Vec<M::Elem> {
        (self.generators)(h)
    }

    /// Products of at most `degree` generators, the unit first.
    pub fn products(&self, h: SubgroupId, degree: usize) -> Vec<M::Elem> {
        let gens = self.generators(h);
        let mut out = vec![self.parent.unit(h)];
        let mut layer = vec![self.parent.unit(h)];
        for _ in 0..degree {
            let mut next = Vec::new();
            for p in &layer {
                for g in &gens {
                    next.push(self.parent.combine(h, p, g));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
            if out.len() > 4096 {
                break;
            }
        }
        out
    }

    /// Membership in the saturation: some `a` with `a·x` in this
    /// subfunctor. Tries direct membership, then generator products up to
    /// `degree`; `Unknown` when the search is exhausted.
    pub fn saturate_membership(&self, h: SubgroupId, x: &M::Elem, degree: usize) -> Decision<Certificate<M::Elem>> {
        let direct = self.contains(h, x);
        if direct.is_yes() {
            return direct;
        }
        if let Some(ex) = &self.excluded {
            if ex(h, x) {
                return Decision::No;
            }
        }
        let proposed = match &self.multiples {
            Some(f) => f(h, x).into_iter().filter(|s| self.contains(h, s).is_yes()).collect(),
            None => Vec::new(),
        };
        for s in proposed.into_iter().chain(self.products(h, degree)) {
            if let Decision::Yes(a) = self.parent.divide(h, &s, x) {
                if self.parent.equal(h, &self.parent.combine(h, &a, x), &s).is_yes() {
                    return Decision::Yes(Certificate { a, s, top: None });
                }
            }
        }
        Decision::Unknown
    }

    /// The saturation as a subfunctor in its own right.
    pub fn saturation(&self, degree: usize) -> Self {
        let inner = self.clone();
        let member: MemberFn<M::Elem> = Arc::new(move |h, x| inner.saturate_membership(h, x, degree));
        let mut out = Self::new(self.parent.clone(), format!("sat({})", self.name), member, self.generators.clone());
        out.excluded = self.excluded.clone();
        out.multiples = self.multiples.clone();
        out.annihilator = self.annihilator.clone();
        out.equalizer = self.equalizer.clone();
        out
    }

    /// Closure under restriction and transfer along every map between
    /// transitive G-sets, checked on generators.
    pub fn is_subfunctor(&self) -> Tally {
        let g = self.parent.group().clone();
        let atlas = Atlas::new(&g);
        let mut tally = Tally::new();
        for h in g.subgroups() {
            let gens = self.generators(h);
            for k in g.subgroups() {
                for f in atlas.maps_between(h, k) {
                    for s in &gens {
                        let up = self.parent.transfer_along(&f, std::slice::from_ref(s));
                        let k_level = f.target().orbits().orbits[0].stabilizer;
                        let d = self.contains(k_level, &up[0]);
                        tally.record(&d, || format!("{}: transfer along {:?} leaves the subfunctor", self.name, f));
                    }
                    let k_level = f.target().orbits().orbits[0].stabilizer;
                    for t in self.generators(k_level) {
                        let down = self.parent.restrict_along(&f, std::slice::from_ref(&t));
                        let d = self.contains(h, &down[0]);
                        tally.record(&d, || format!("{}: restriction along {:?} leaves the subfunctor", self.name, f));
                    }
                }
            }
        }
        tally
    }
}

/// Random probes used when builders validate their seed.
pub const VALIDATION_SAMPLES: usize = 30;

/// A submonoid S of the bottom level M(G/e), given by a membership test
/// and multiplicative generators.
pub struct Seed<E> {
    pub name: String,
    pub contains: Arc<dyn Fn(&E) -> bool + Send + Sync>,
    pub generators: Vec<E>,
    /// Proves `x` is outside the saturation of S (for instance, `0` when S
    /// has no zero divisors).
    pub excluded: Option<Arc<dyn Fn(&E) -> bool + Send + Sync>>,
}

impl<E> Clone for Seed<E>
where
    E: Clone,
{
    fn clone(&self) -> Self {
        Seed {
            name: self.name.clone(),
            contains: self.contains.clone(),
            generators: self.generators.clone(),
            excluded: self.excluded.clone(),
        }
    }
}

impl<E: Clone> Seed<E> {
    pub fn new(name: impl Into<String>, contains: impl Fn(&E) -> bool + Send + Sync + 'static, generators: Vec<E>) -> Self {
        Seed { name: name.into(), contains: Arc::new(contains), generators, excluded: None }
    }

    pub fn with_excluded(mut self, f: impl Fn(&E) -> bool + Send + Sync + 'static) -> Self {
        self.excluded = Some(Arc::new(f));
        self
    }

    /// Eager validation on generators and `samples` random elements of
    /// M(G/e): G-invariance, and saturation against divisors of generator
    /// products. Infinite seeds cannot be validated exhaustively.
    pub fn validate<M>(&self, m: &M, samples: usize, rng: &mut dyn RngCore) -> Result<()>
    where
        M: SemiMackey<Elem = E> + ?Sized,
    {
        let g = m.group().clone();
        let e = g.trivial();
        let mut pool: Vec<E> = self.generators.clone();
        for _ in 0..samples {
            let x = m.sample(e, rng);
            if (self.contains)(&x) {
                pool.push(x);
            }
        }
        if !(self.contains)(&m.unit(e)) {
            return Err(Error::NotSaturated(format!("{} does not contain the unit", self.name)));
        }
        for s in &pool {
            for t in g.elements() {
                let moved = m.conjugate(t, e, s);
                if !(self.contains)(&moved) {
                    return Err(Error::NotInvariant(format!("{}: {} moved out by element {t}", self.name, m.render(e, s))));
                }
            }
        }
        // divisors of products of members must be members
        let mut products = pool.clone();
        for a in &pool {
            for b in &pool {
                products.push(m.combine(e, a, b));
            }
        }
        let probes: Vec<E> = (0..samples).map(|_| m.sample(e, rng)).collect();
        for s in &products {
            for x in &probes {
                if let Decision::Yes(a) = m.divide(e, s, x) {
                    let exact = m.equal(e, &m.combine(e, &a, x), s).is_yes();
                    if exact && !(self.contains)(x) {
                        return Err(Error::NotSaturated(format!(
                            "{}: {} divides the member {} but is not a member",
                            self.name,
                            m.render(e, x),
                            m.render(e, s)
                        )));
                    }
                }
            }
        }
        for s in &pool {
            if !(self.contains)(s) {
                return Err(Error::NotSaturated(format!("{}: generator outside the set", self.name)));
            }
        }
        Ok(())
    }
}

/// The smallest subfunctor with bottom level S: at G/H, the image of S
/// under transfer along a map γ: G/e → G/H.
///
/// `preimage_hint(h, x)` proposes candidates `s` with `transfer(s) = x`;
/// membership is then certified by recomputing the transfer. Without a
/// successful hint, `x` is rejected when its restriction to G/e is outside
/// S (transfers of S restrict into S), and otherwise searched among
/// generator products.
pub fn build_l<M>(
    parent: Arc<M>,
    seed: &Seed<M::Elem>,
    preimage_hint: Option<Arc<dyn Fn(SubgroupId, &M::Elem) -> Vec<M::Elem> + Send + Sync>>,
    search_degree: usize,
) -> Result<SubMonoidFunctor<M>>
where
    M: SemiMackey + 'static,
{
    seed.validate(&*parent, VALIDATION_SAMPLES, &mut ChaCha8Rng::seed_from_u64(0))?;
    let g = parent.group().clone();
    let e = g.trivial();
    let atlas = Arc::new(Atlas::new(&g));

    let gens_seed = seed.generators.clone();
    let p = parent.clone();
    let generators: GensFn<M::Elem> = Arc::new(move |h| gens_seed.iter().map(|s| p.transfer(e, h, s)).collect());

    let p = parent.clone();
    let seed2 = seed.clone();
    let member: MemberFn<M::Elem> = Arc::new(move |h, x| {
        let unit = p.unit(h);
        let certified = |s: &M::Elem| -> bool { (seed2.contains)(s) && p.equal(h, &p.transfer(e, h, s), x).is_yes() };
        if let Some(hint) = &preimage_hint {
            for s in hint(h, x) {
                if certified(&s) {
                    return Decision::Yes(Certificate { a: unit.clone(), s: x.clone(), top: Some(s) });
                }
            }
        }
        let bottom = p.restrict(h, e, x);
        if !(seed2.contains)(&bottom) {
            return Decision::No;
        }
        if h == e {
            return Decision::Yes(Certificate { a: unit, s: x.clone(), top: Some(x.clone()) });
        }
        if preimage_hint.is_some() {
            // the hint is complete for the carriers that supply one
            return Decision::No;
        }
        // bounded search through products of seed generators
        let mut layer = vec![p.unit(e)];
        for _ in 0..search_degree {
            let mut next = Vec::new();
            for a in &layer {
                for s in &seed2.generators {
                    let c = p.combine(e, a, s);
                    if certified(&c) {
                        return Decision::Yes(Certificate { a: unit.clone(), s: x.clone(), top: Some(c) });
                    }
                    next.push(c);
                }
            }
            layer = next;
        }
        Decision::Unknown
    });
    let mut out = SubMonoidFunctor::new(parent.clone(), format!("L[{}]", seed.name), member, generators);
    if let Some(ex) = seed.excluded.clone() {
        let p = out.parent.clone();
        out.excluded = Some(Arc::new(move |h, x| ex(&p.restrict(h, e, x))));
    }

    // the image does not depend on the choice of γ: transfers of the
    // generators along every other γ are members as well
    for h in g.subgroups() {
        for other in atlas.maps_between(e, h).iter().skip(1) {
            for s in &seed.generators {
                let image = parent.transfer_along(other, std::slice::from_ref(s));
                if !out.contains(h, &image[0]).is_yes() {
                    return Err(Error::BasePointDependence(format!(
                        "{}: transfer of {} along {:?}",
                        seed.name,
                        parent.render(e, s),
                        other
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Witness that `res^G_H(t) = a·x` with `t = transfer^G_H(x)`: the element
/// `a` is the transfer along `q1` of the restriction along `q2` of `x`,
/// over the diagonal complement of G/H → G/G.
pub fn top_witness<M: SemiMackey + ?Sized>(m: &M, atlas: &Atlas, h: SubgroupId, x: &M::Elem) -> (M::Elem, M::Elem) {
    let g = m.group();
    let f = atlas.projection(h, g.whole());
    let (z, q1, q2) = diagonal_complement(&f);
    let pulled = m.restrict_along(&q2, std::slice::from_ref(x));
    debug_assert_eq!(pulled.len(), z.orbit_count());
    let a = m.transfer_along(&q1, &pulled).pop().expect("one orbit");
    let t = m.transfer(h, g.whole(), x);
    (a, t)
}

/// Hint for explicit top-level witnesses: given `x` at level H, candidates
/// `(a, t)` with `a·x = res^G_H(t)`; each is verified before use.
pub type TopHintFn<E> = Arc<dyn Fn(SubgroupId, &E) -> Vec<(E, E)> + Send + Sync>;

/// The largest subfunctor with bottom level S: `x` at G/H is a member iff
/// its restriction to G/e lies in S. Members come with a certificate
/// `a·x = res^G_H(t)` where `t` restricts into S at G/e.
pub fn build_u<M>(parent: Arc<M>, seed: &Seed<M::Elem>, hint: Option<TopHintFn<M::Elem>>) -> Result<SubMonoidFunctor<M>>
where
    M: SemiMackey + 'static,
{
    seed.validate(&*parent, VALIDATION_SAMPLES, &mut ChaCha8Rng::seed_from_u64(0))?;
    let g = parent.group().clone();
    let e = g.trivial();
    let top = g.whole();
    let atlas = Arc::new(Atlas::new(&g));
    let p = parent.clone();
    let seed2 = seed.clone();
    let member: MemberFn<M::Elem> = Arc::new(move |h, x| {
        if !(seed2.contains)(&p.restrict(h, e, x)) {
            return Decision::No;
        }
        let verify = |a: &M::Elem, t: &M::Elem| -> bool {
            (seed2.contains)(&p.restrict(top, e, t)) && p.equal(h, &p.combine(h, a, x), &p.restrict(top, h, t)).is_yes()
        };
        if let Some(hint) = &hint {
            for (a, t) in hint(h, x) {
                if verify(&a, &t) {
                    let s = p.restrict(top, h, &t);
                    return Decision::Yes(Certificate { a, s, top: Some(t) });
                }
            }
        }
        let (a, t) = top_witness(&*p, &atlas, h, x);
        if verify(&a, &t) {
            let s = p.restrict(top, h, &t);
            Decision::Yes(Certificate { a, s, top: Some(t) })
        } else {
            // the construction is a proof; failing it means the parent
            // violates the identity f*f_*(s) = s·q1_*q2*(s)
            Decision::Unknown
        }
    });
    let gens_seed = seed.generators.clone();
    let p = parent.clone();
    let generators: GensFn<M::Elem> = Arc::new(move |h| {
        let mut out: Vec<M::Elem> = gens_seed.iter().map(|s| p.transfer(e, h, s)).collect();
        out.extend(gens_seed.iter().map(|s| p.restrict(top, h, &p.transfer(e, top, s))));
        out
    });
    let mut out = SubMonoidFunctor::new(parent, format!("U[{}]", seed.name), member, generators);
    if let Some(ex) = seed.excluded.clone() {
        let p = out.parent.clone();
        out.excluded = Some(Arc::new(move |h, x| ex(&p.restrict(h, e, x))));
    }
    Ok(out)
}

/// Checks `f*(f_*(s)) = s·q1_*(q2*(s))` for `f: X → Y`, `s ∈ M(X)`, where
/// `q1, q2` are the projections of the diagonal complement of `f`.
pub fn check_transfer_restriction_identity<M: SemiMackey + ?Sized>(m: &M, f: &GMap, s: &[M::Elem]) -> Decision {
    let lhs = m.restrict_along(f, &m.transfer_along(f, s));
    let (_, q1, q2) = diagonal_complement(f);
    let a = m.transfer_along(&q1, &m.restrict_along(&q2, s));
    let rhs = m.combine_values(f.source(), s, &a);
    m.equal_values(f.source(), &lhs, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::mackey::fixed::{FixedPointSemiMackey, IntMul, NatAdd, ZnMul};
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn int_mul(name: &str) -> Arc<FixedPointSemiMackey<IntMul>> {
        Arc::new(FixedPointSemiMackey::new(FiniteGroup::parse(name).unwrap(), IntMul))
    }

    fn powers_of(n: i64) -> impl Fn(&BigInt) -> bool {
        move |x: &BigInt| {
            let mut x = x.clone();
            while x != BigInt::one() {
                if x.is_zero() || (&x % n) != BigInt::zero() {
                    return false;
                }
                x /= n;
            }
            true
        }
    }

    #[test]
    fn saturation_of_powers_of_four() {
        let m = int_mul("C1");
        let e = m.group().trivial();
        let seed = Seed::new("4^N", powers_of(4), vec![BigInt::from(4)]);
        let is_power = powers_of(4);
        let member: MemberFn<BigInt> =
            Arc::new(
                move |_, x| {
                    if is_power(x) {
                        Decision::Yes(Certificate { a: BigInt::one(), s: x.clone(), top: None })
                    } else {
                        Decision::No
                    }
                },
            );
        let gens: GensFn<BigInt> = Arc::new(|_| vec![BigInt::from(4)]);
        let mut s = SubMonoidFunctor::new(m.clone(), "4^N", member, gens);
        s.excluded = Some(Arc::new(|_, x: &BigInt| x.is_zero()));
        let w = s.saturate_membership(e, &BigInt::from(2), 3).witness().unwrap();
        assert_eq!((w.a, w.s), (BigInt::from(2), BigInt::from(4)));
        let w = s.saturate_membership(e, &BigInt::from(16), 3).witness().unwrap();
        assert_eq!((w.a, w.s), (BigInt::one(), BigInt::from(16)));
        assert!(s.saturate_membership(e, &BigInt::zero(), 3).is_no());
        assert!(s.saturate_membership(e, &BigInt::from(3), 3).is_unknown());
        // the seed itself is rejected as not saturated
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(seed.validate(&*m, 50, &mut rng), Err(Error::NotSaturated(_))));
        assert!(matches!(build_l(m.clone(), &seed, None, 2), Err(Error::NotSaturated(_))));
    }

    #[test]
    fn seed_validation() {
        let m = int_mul("C2");
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let nonzero = Seed::new("Z\\0", |x: &BigInt| !x.is_zero(), vec![BigInt::from(2), BigInt::from(-1)]);
        nonzero.validate(&*m, 50, &mut rng).unwrap();
        let bad = Seed::new("missing 1", |x: &BigInt| x > &BigInt::one(), vec![BigInt::from(2)]);
        assert!(bad.validate(&*m, 10, &mut rng).is_err());
    }

    #[test]
    fn trivial_seed_gives_trivial_levels() {
        // {0} is a saturated submonoid of (N, +)
        let m = Arc::new(FixedPointSemiMackey::new(FiniteGroup::parse("S3").unwrap(), NatAdd));
        let seed = Seed::new("0", |x: &BigInt| x.is_zero(), vec![BigInt::zero()]);
        let l = build_l(m.clone(), &seed, None, 2).unwrap();
        for h in m.group().subgroups() {
            for g in l.generators(h) {
                assert!(g.is_zero());
            }
            assert!(l.contains(h, &BigInt::zero()).is_yes());
            assert!(l.contains(h, &BigInt::from(2)).is_no());
        }
        // {1} is not saturated in (Z, *): (-1)·(-1) = 1
        let one = Seed::new("1", |x: &BigInt| x.is_one(), vec![BigInt::one()]);
        assert!(build_l(int_mul("C2"), &one, None, 2).is_err());
    }

    #[test]
    fn l_is_contained_in_u_and_both_are_subfunctors() {
        let m = int_mul("S3");
        let seed = Seed::new("Z\\0", |x: &BigInt| !x.is_zero(), vec![BigInt::from(2), BigInt::from(3), BigInt::from(-1)]);
        let l = build_l(m.clone(), &seed, None, 3).unwrap();
        let u = build_u(m.clone(), &seed, None).unwrap();
        assert!(l.is_subfunctor().passed());
        assert!(u.is_subfunctor().passed());
        for h in m.group().subgroups() {
            for s in l.generators(h) {
                let c = u.contains(h, &s).witness().unwrap();
                assert_eq!(&c.a * &s, c.s);
            }
        }
        // bottom levels agree with the seed
        let e = m.group().trivial();
        for x in -5i64..=5 {
            let x = BigInt::from(x);
            assert_eq!(u.contains(e, &x).is_yes(), !x.is_zero());
            assert_eq!(l.contains(e, &x).is_yes(), !x.is_zero());
        }
    }

    #[test]
    fn units_and_whole_are_subfunctors() {
        let m = Arc::new(FixedPointSemiMackey::new(FiniteGroup::parse("C2").unwrap(), ZnMul(6)));
        assert!(SubMonoidFunctor::units(m.clone()).is_subfunctor().passed());
        assert!(SubMonoidFunctor::whole(m.clone()).is_subfunctor().passed());
        // a levelwise submonoid that is not closed under restriction
        let g = m.group().clone();
        let top = g.whole();
        let member: MemberFn<u64> = Arc::new(move |h, x| {
            let ok = if h == top { *x == 1 || *x == 5 } else { *x == 1 };
            if ok {
                Decision::Yes(Certificate { a: 1, s: *x, top: None })
            } else {
                Decision::No
            }
        });
        let gens: GensFn<u64> = Arc::new(move |h| if h == top { vec![1, 5] } else { vec![1] });
        let bad = SubMonoidFunctor::new(m, "broken", member, gens);
        let t = bad.is_subfunctor();
        assert!(!t.passed());
        assert!(t.failures.iter().any(|f| f.contains("restriction")));
    }

    #[test]
    fn transfer_restriction_identity_on_fixed_points() {
        let m = int_mul("S3");
        let atlas = Atlas::new(m.group());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for h in m.group().subgroups() {
            for k in m.group().subgroups() {
                for f in atlas.maps_between(h, k) {
                    let s = m.sample_value(f.source(), &mut rng);
                    assert!(check_transfer_restriction_identity(&*m, &f, &s).is_yes());
                }
            }
        }
    }
}
