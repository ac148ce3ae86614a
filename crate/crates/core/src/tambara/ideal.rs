//! Ideals of Tambara functors, quotients, and the comparison between
//! localizing a quotient and taking the quotient of a localization.

use std::sync::Arc;

use rand::{Rng, RngCore};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decision::{Decision, Tally};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupId};
use crate::gset::Atlas;
use crate::mackey::fraction::Frac;
use crate::mackey::subfunctor::{Certificate, GensFn, MemberFn, SubMonoidFunctor, VALIDATION_SAMPLES};
use crate::tambara::fraction::{Denominators, FractionTambara};
use crate::tambara::morphism::TambaraMorphism;
use crate::tambara::{Multiplicative, Tambara, TambaraExt};

/// A G-invariant ideal I of T(G/e), by a membership test and generators.
pub struct LevelIdeal<E> {
    pub name: String,
    pub contains: Arc<dyn Fn(&E) -> bool + Send + Sync>,
    pub generators: Vec<E>,
    pub is_zero: bool,
    pub is_whole: bool,
}

impl<E: Clone> Clone for LevelIdeal<E> {
    fn clone(&self) -> Self {
        LevelIdeal {
            name: self.name.clone(),
            contains: self.contains.clone(),
            generators: self.generators.clone(),
            is_zero: self.is_zero,
            is_whole: self.is_whole,
        }
    }
}

impl<E: Clone + 'static> LevelIdeal<E> {
    pub fn new(name: impl Into<String>, contains: impl Fn(&E) -> bool + Send + Sync + 'static, generators: Vec<E>) -> Self {
        LevelIdeal { name: name.into(), contains: Arc::new(contains), generators, is_zero: false, is_whole: false }
    }

    pub fn zero<T: Tambara<Elem = E> + 'static>(t: Arc<T>) -> Self {
        let e = t.group().trivial();
        let mut out = Self::new("(0)", move |x| t.is_zero(e, x).is_yes(), Vec::new());
        out.is_zero = true;
        out
    }

    pub fn whole<T: Tambara<Elem = E> + 'static>(t: &Arc<T>) -> Self {
        let e = t.group().trivial();
        let mut out = Self::new("(1)", |_| true, vec![t.one(e)]);
        out.is_whole = true;
        out
    }
}

type IdealMember<E> = Arc<dyn Fn(SubgroupId, &E) -> Decision + Send + Sync>;
type IdealGens<E> = Arc<dyn Fn(SubgroupId) -> Vec<E> + Send + Sync>;

/// Levelwise ideals ℐ(G/H) ⊆ T(G/H).
pub struct TambaraIdeal<T: Tambara> {
    parent: Arc<T>,
    pub name: String,
    member: IdealMember<T::Elem>,
    generators: IdealGens<T::Elem>,
    /// Set when the ideal is `x ↦ [res_e(x) ∈ I]` for a level ideal I.
    pub bottom: Option<LevelIdeal<T::Elem>>,
}

impl<T: Tambara> Clone for TambaraIdeal<T> {
    fn clone(&self) -> Self {
        TambaraIdeal {
            parent: self.parent.clone(),
            name: self.name.clone(),
            member: self.member.clone(),
            generators: self.generators.clone(),
            bottom: self.bottom.clone(),
        }
    }
}

impl<T: Tambara + 'static> TambaraIdeal<T> {
    pub fn new(
        parent: Arc<T>,
        name: impl Into<String>,
        member: impl Fn(SubgroupId, &T::Elem) -> Decision + Send + Sync + 'static,
        generators: impl Fn(SubgroupId) -> Vec<T::Elem> + Send + Sync + 'static,
    ) -> Self {
        TambaraIdeal { parent, name: name.into(), member: Arc::new(member), generators: Arc::new(generators), bottom: None }
    }

    /// The zero ideal.
    pub fn zero(parent: Arc<T>) -> Self {
        let p = parent.clone();
        Self::new(parent, "0", move |h, x| p.is_zero(h, x), |_| Vec::new())
    }

    pub fn parent(&self) -> &Arc<T> {
        &self.parent
    }

    pub fn contains(&self, h: SubgroupId, x: &T::Elem) -> Decision {
        (self.member)(h, x)
    }

    pub fn generators(&self, h: SubgroupId) -> Vec<T::Elem> {
        (self.generators)(h)
    }

    /// The ideal conditions along every map `f` of transitive G-sets on
    /// generators: `f*(ℐ) ⊆ ℐ`, `f₊(ℐ) ⊆ ℐ` and `f_•(x) − f_•(0) ∈ ℐ`.
    /// Also checks that generators are members and that `samples` random
    /// multiples and sums of generators stay inside.
    pub fn check(&self, samples: usize, rng: &mut dyn RngCore) -> Tally {
        let t = &self.parent;
        let g = t.group().clone();
        let atlas = Atlas::new(&g);
        let mut tally = Tally::new();
        let gens: Vec<Vec<T::Elem>> = g.subgroups().map(|h| self.generators(h)).collect();
        for h in g.subgroups() {
            for x in &gens[h.0] {
                tally.record(&self.contains(h, x), || format!("{}: generator {} is not a member", self.name, t.render(h, x)));
            }
            if gens[h.0].is_empty() {
                continue;
            }
            for _ in 0..samples {
                let x = &gens[h.0][rng.gen_range(0..gens[h.0].len())];
                let y = &gens[h.0][rng.gen_range(0..gens[h.0].len())];
                let r = t.sample(h, rng);
                let z = t.add(h, &t.mul(h, &r, x), y);
                tally.record(&self.contains(h, &z), || format!("{}: r·x + y leaves the ideal at {}", self.name, g.class_name(h)));
            }
        }
        for k in g.subgroups() {
            for h in g.subgroups() {
                for f in atlas.maps_between(k, h) {
                    for y in &gens[h.0] {
                        let r = t.restrict_along(&f, std::slice::from_ref(y));
                        tally.record(&self.contains(k, &r[0]), || format!("{}: restriction along {f:?} of {}", self.name, t.render(h, y)));
                    }
                    let n0 = t.norm_along(&f, &[t.zero(k)]);
                    for x in &gens[k.0] {
                        let tr = t.transfer_along(&f, std::slice::from_ref(x));
                        tally.record(&self.contains(h, &tr[0]), || format!("{}: transfer along {f:?} of {}", self.name, t.render(k, x)));
                        let n = t.norm_along(&f, std::slice::from_ref(x));
                        tally.record(&self.contains(h, &t.sub(h, &n[0], &n0[0])), || {
                            format!("{}: shifted norm along {f:?} of {}", self.name, t.render(k, x))
                        });
                    }
                }
            }
        }
        tally
    }
}

/// The largest ideal ℐ_I with `ℐ_I(G/e) = I`: at G/H, the elements whose
/// restriction along a map `G/e → G/H` lies in I.
///
/// Generators at G/H are the unit when I is the unit ideal, and otherwise
/// the kernel of the restriction (when the carrier reports it) together
/// with the transfers of the generators of I. They span ℐ_I when I is zero.
pub fn ideal_from_level<T: Tambara + 'static>(t: Arc<T>, level: LevelIdeal<T::Elem>) -> Result<TambaraIdeal<T>> {
    let g = t.group().clone();
    let e = g.trivial();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut pool = level.generators.clone();
    for _ in 0..VALIDATION_SAMPLES {
        let x = t.sample(e, &mut rng);
        if (level.contains)(&x) {
            pool.push(x);
        }
    }
    for x in &pool {
        for a in g.elements() {
            if !(level.contains)(&t.conjugate(a, e, x)) {
                return Err(Error::NotInvariantIdeal(format!("{}: {} moved out by element {a}", level.name, t.render(e, x))));
            }
        }
    }
    let (t2, lv) = (t.clone(), level.clone());
    let member = move |h: SubgroupId, x: &T::Elem| Decision::from_bool((lv.contains)(&t2.restrict(h, e, x)));
    let (t3, lv) = (t.clone(), level.clone());
    let generators = move |h: SubgroupId| {
        if lv.is_whole {
            return vec![t3.one(h)];
        }
        let mut out = t3.restriction_kernel(h).unwrap_or_default();
        out.extend(lv.generators.iter().map(|x| t3.transfer(e, h, x)));
        out
    };
    let mut ideal = TambaraIdeal::new(t.clone(), format!("I[{}]", level.name), member, generators);
    ideal.bottom = Some(level.clone());

    // every γ: G/e → G/H gives the same ideal
    let atlas = Atlas::new(&g);
    for h in g.subgroups() {
        let mut probes = ideal.generators(h);
        probes.extend((0..10).map(|_| t.sample(h, &mut rng)));
        for x in &probes {
            let verdicts: Vec<bool> = atlas
                .maps_between(e, h)
                .iter()
                .map(|gamma| (level.contains)(&t.restrict_along(gamma, std::slice::from_ref(x))[0]))
                .collect();
            if verdicts.iter().any(|&v| v != verdicts[0]) {
                return Err(Error::NotInvariantIdeal(format!(
                    "{}: membership of {} depends on the map G/e -> G/{}",
                    level.name,
                    t.render(h, x),
                    g.class_name(h)
                )));
            }
        }
    }
    Ok(ideal)
}

type Reducer<E> = Arc<dyn Fn(SubgroupId, &E) -> E + Send + Sync>;

/// T/ℐ, with elements represented by elements of T. An optional reducer
/// picks canonical representatives.
pub struct QuotientTambara<T: Tambara> {
    base: Arc<T>,
    ideal: TambaraIdeal<T>,
    reducer: Option<Reducer<T::Elem>>,
}

impl<T: Tambara + 'static> QuotientTambara<T> {
    pub fn new(ideal: TambaraIdeal<T>) -> Self {
        QuotientTambara { base: ideal.parent().clone(), ideal, reducer: None }
    }

    pub fn with_reducer(mut self, f: impl Fn(SubgroupId, &T::Elem) -> T::Elem + Send + Sync + 'static) -> Self {
        self.reducer = Some(Arc::new(f));
        self
    }

    pub fn base(&self) -> &Arc<T> {
        &self.base
    }

    pub fn ideal(&self) -> &TambaraIdeal<T> {
        &self.ideal
    }

    pub fn reduce(&self, h: SubgroupId, x: &T::Elem) -> T::Elem {
        match &self.reducer {
            Some(r) => r(h, x),
            None => x.clone(),
        }
    }
}

/// The projection `T → T/ℐ`.
pub fn projection<T: Tambara + 'static>(q: Arc<QuotientTambara<T>>) -> TambaraMorphism<T, QuotientTambara<T>> {
    let q2 = q.clone();
    TambaraMorphism::new(q.base.clone(), q, "projection", move |h, x| q2.reduce(h, x))
}

impl<T: Tambara + 'static> Tambara for QuotientTambara<T> {
    type Elem = T::Elem;

    fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }
    fn name(&self) -> String {
        format!("{}/{}", self.base.name(), self.ideal.name)
    }
    fn zero(&self, h: SubgroupId) -> T::Elem {
        self.base.zero(h)
    }
    fn one(&self, h: SubgroupId) -> T::Elem {
        self.reduce(h, &self.base.one(h))
    }
    fn add(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem {
        self.reduce(h, &self.base.add(h, a, b))
    }
    fn neg(&self, h: SubgroupId, a: &T::Elem) -> T::Elem {
        self.reduce(h, &self.base.neg(h, a))
    }
    fn mul(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem {
        self.reduce(h, &self.base.mul(h, a, b))
    }
    fn equal(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> Decision {
        self.ideal.contains(h, &self.base.sub(h, a, b))
    }
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &T::Elem) -> T::Elem {
        self.reduce(k, &self.base.restrict(h, k, x))
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.reduce(h, &self.base.transfer(k, h, x))
    }
    fn norm(&self, k: SubgroupId, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.reduce(h, &self.base.norm(k, h, x))
    }
    fn conjugate(&self, g: usize, h: SubgroupId, x: &T::Elem) -> T::Elem {
        let k = self.group().conjugate(g, h);
        self.reduce(k, &self.base.conjugate(g, h, x))
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> T::Elem {
        self.reduce(h, &self.base.sample(h, rng))
    }
    fn inverse(&self, h: SubgroupId, x: &T::Elem) -> Decision<T::Elem> {
        match self.base.inverse(h, x) {
            Decision::Yes(y) => Decision::Yes(self.reduce(h, &y)),
            _ => Decision::Unknown,
        }
    }
    fn restriction_kernel(&self, _h: SubgroupId) -> Option<Vec<T::Elem>> {
        // ℐ_I contains everything restricting into I
        self.ideal.bottom.as_ref().filter(|b| b.is_zero).map(|_| Vec::new())
    }
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        self.ideal.bottom.as_ref().filter(|b| b.is_zero).and_then(|_| self.base.invariant_ideals_trivial())
    }
    fn bottom_is_domain(&self) -> Option<bool> {
        self.ideal.bottom.as_ref().filter(|b| b.is_zero).and_then(|_| self.base.bottom_is_domain())
    }
    fn elements(&self, h: SubgroupId) -> Option<Vec<T::Elem>> {
        let mut reps: Vec<T::Elem> = Vec::new();
        for x in self.base.elements(h)? {
            let x = self.reduce(h, &x);
            if !reps.iter().any(|r| self.equal(h, r, &x).is_yes()) {
                reps.push(x);
            }
        }
        Some(reps)
    }
    fn render(&self, h: SubgroupId, x: &T::Elem) -> String {
        format!("[{}]", self.base.render(h, &self.reduce(h, x)))
    }
}

/// Whether membership in ℐ = ℐ_(0) can be tested on `S·x` by testing `x`:
/// T(G/e) is a domain and S(G/e) avoids zero.
fn zero_ideal_over_domain<T: Tambara + 'static>(ideal: &TambaraIdeal<T>, s: &Denominators<T>) -> bool {
    let t = ideal.parent();
    let e = t.group().trivial();
    ideal.bottom.as_ref().is_some_and(|b| b.is_zero) && t.bottom_is_domain() == Some(true) && s.contains(e, &t.zero(e)).is_no()
}

/// Rejects ℐ meeting S, tested at G/e on products of generators of S and
/// on generators of ℐ.
pub fn check_disjoint<T: Tambara + 'static>(ideal: &TambaraIdeal<T>, s: &Denominators<T>) -> Result<()> {
    let t = ideal.parent();
    let e = t.group().trivial();
    for p in s.products(e, 3) {
        if ideal.contains(e, &p).is_yes() {
            return Err(Error::IdealMeetsDenominators(t.render(e, &p)));
        }
    }
    for x in ideal.generators(e) {
        if s.contains(e, &x).is_yes() {
            return Err(Error::IdealMeetsDenominators(t.render(e, &x)));
        }
    }
    Ok(())
}

/// S⁻¹ℐ ⊆ S⁻¹T: `x/s` is a member iff `u·x ∈ ℐ` for some `u ∈ S`.
pub fn localize_ideal<T: Tambara + 'static>(
    fraction: Arc<FractionTambara<T>>,
    ideal: &TambaraIdeal<T>,
    search_degree: usize,
) -> Result<TambaraIdeal<FractionTambara<T>>> {
    let s = fraction.denominators().clone();
    check_disjoint(ideal, &s)?;
    let exact = zero_ideal_over_domain(ideal, &s);
    let t = fraction.base().clone();
    let (i2, s2) = (ideal.clone(), s.clone());
    let member = move |h: SubgroupId, x: &Frac<T::Elem>| {
        let direct = i2.contains(h, &x.num);
        if direct.is_yes() || exact {
            return direct;
        }
        for u in s2.products(h, search_degree) {
            if i2.contains(h, &t.mul(h, &u, &x.num)).is_yes() {
                return Decision::Yes(());
            }
        }
        Decision::Unknown
    };
    let (i3, fr) = (ideal.clone(), fraction.clone());
    let gens = move |h: SubgroupId| i3.generators(h).iter().map(|x| fr.ell(h, x)).collect();
    Ok(TambaraIdeal::new(fraction.clone(), format!("S^-1 {}", ideal.name), member, gens))
}

/// The image S̄ of S in T/ℐ. A member certificate carries a representative
/// in S as its `s` field.
pub fn denominators_mod_ideal<T: Tambara + 'static>(
    s: &Denominators<T>,
    quotient: Arc<QuotientTambara<T>>,
    search_degree: usize,
) -> Denominators<QuotientTambara<T>> {
    let t = quotient.base().clone();
    let e = t.group().trivial();
    let ideal = quotient.ideal().clone();
    let bottom_zero = ideal.bottom.as_ref().is_some_and(|b| b.is_zero);
    let exact_annihilator = zero_ideal_over_domain(&ideal, s);
    let (s2, q2, t2) = (s.clone(), quotient.clone(), t.clone());
    let member: MemberFn<T::Elem> = Arc::new(move |h, y| {
        let one = q2.one(h);
        if s2.contains(h, y).is_yes() {
            return Decision::Yes(Certificate { a: one, s: y.clone(), top: None });
        }
        // y ≡ s mod ℐ_(0) forces res_e(y) = res_e(s) ∈ S(G/e)
        if bottom_zero && s2.contains(e, &t2.restrict(h, e, y)).is_no() {
            return Decision::No;
        }
        for p in s2.products(h, search_degree) {
            if q2.equal(h, &p, y).is_yes() {
                return Decision::Yes(Certificate { a: one, s: p, top: None });
            }
        }
        Decision::Unknown
    });
    let s3 = s.clone();
    let gens: GensFn<T::Elem> = Arc::new(move |h| s3.generators(h));
    let mu = Arc::new(Multiplicative(quotient.clone()));
    let mut bar = SubMonoidFunctor::new(mu, format!("{}-bar", s.name()), member, gens);
    let (q3, s4) = (quotient.clone(), s.clone());
    bar.annihilator = Some(Arc::new(move |h, d| {
        if q3.is_zero(h, d).is_yes() {
            return Decision::Yes(q3.one(h));
        }
        if exact_annihilator {
            // t·d ∈ ℐ_(0) means res(t)·res(d) = 0 in a domain
            return Decision::No;
        }
        match s4.annihilator.as_ref().map(|a| a(h, d)) {
            Some(Decision::Yes(u)) => Decision::Yes(u),
            _ => Decision::Unknown,
        }
    }));
    bar
}

/// The comparison `υ: S̄⁻¹(T/ℐ) → S⁻¹T/S⁻¹ℐ`, `[x]/[s] ↦ [x/s]`.
pub struct LocalizedIdealIso<T: Tambara + 'static> {
    pub fraction: Arc<FractionTambara<T>>,
    pub quotient: Arc<QuotientTambara<T>>,
    /// S̄⁻¹(T/ℐ)
    pub local_quotient: Arc<FractionTambara<QuotientTambara<T>>>,
    /// S⁻¹T/S⁻¹ℐ
    pub quotient_of_local: Arc<QuotientTambara<FractionTambara<T>>>,
}

pub fn localized_ideal_iso<T: Tambara + 'static>(
    fraction: Arc<FractionTambara<T>>,
    quotient: Arc<QuotientTambara<T>>,
    search_degree: usize,
) -> Result<LocalizedIdealIso<T>> {
    let local_ideal = localize_ideal(fraction.clone(), quotient.ideal(), search_degree)?;
    let bar = denominators_mod_ideal(fraction.denominators(), quotient.clone(), search_degree);
    Ok(LocalizedIdealIso {
        fraction,
        quotient,
        local_quotient: Arc::new(FractionTambara::new(bar)),
        quotient_of_local: Arc::new(QuotientTambara::new(local_ideal)),
    })
}

impl<T: Tambara + 'static> LocalizedIdealIso<T> {
    /// υ, replacing the denominator by a representative in S.
    pub fn upsilon(&self, h: SubgroupId, z: &Frac<T::Elem>) -> Frac<T::Elem> {
        let rep = match self.local_quotient.denominators().contains(h, &z.den) {
            Decision::Yes(c) => c.s,
            _ => z.den.clone(),
        };
        Frac::new(z.num.clone(), rep)
    }

    pub fn upsilon_inverse(&self, _h: SubgroupId, w: &Frac<T::Elem>) -> Frac<T::Elem> {
        w.clone()
    }

    pub fn morphism(self: &Arc<Self>) -> TambaraMorphism<FractionTambara<QuotientTambara<T>>, QuotientTambara<FractionTambara<T>>> {
        let me = self.clone();
        TambaraMorphism::new(self.local_quotient.clone(), self.quotient_of_local.clone(), "upsilon", move |h, z| me.upsilon(h, z))
    }

    /// Round trips of υ, the square `υ∘ℓ̄∘p = p'∘ℓ` and compatibility with
    /// the projections `υ([x]/[s]) = p'(x/s)`, on `samples` elements per level.
    pub fn check(&self, samples: usize, rng: &mut dyn RngCore) -> Tally {
        let g = self.fraction.group().clone();
        let t = self.fraction.base();
        let (lq, ql) = (&self.local_quotient, &self.quotient_of_local);
        let mut tally = Tally::new();
        for h in g.subgroups() {
            for _ in 0..samples {
                let z = lq.sample(h, rng);
                let back = self.upsilon_inverse(h, &self.upsilon(h, &z));
                tally.record(&lq.equal(h, &back, &z), || format!("upsilon^-1 upsilon moves {} at {}", lq.render(h, &z), g.class_name(h)));
                let w = ql.sample(h, rng);
                let there = self.upsilon(h, &self.upsilon_inverse(h, &w));
                tally.record(&ql.equal(h, &there, &w), || format!("upsilon upsilon^-1 moves {} at {}", ql.render(h, &w), g.class_name(h)));
                let x = t.sample(h, rng);
                let lhs = self.upsilon(h, &lq.ell(h, &self.quotient.reduce(h, &x)));
                let rhs = self.fraction.ell(h, &x);
                tally
                    .record(&ql.equal(h, &lhs, &rhs), || format!("square does not commute at {} for {}", g.class_name(h), t.render(h, &x)));
                let xs = self.fraction.sample(h, rng);
                let via_bar = self.upsilon(h, &Frac::new(self.quotient.reduce(h, &xs.num), xs.den.clone()));
                tally.record(&ql.equal(h, &via_bar, &xs), || format!("not compatible with projections at {}", g.class_name(h)));
            }
        }
        tally
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Integers;
    use crate::tambara::burnside::Burnside;
    use crate::tambara::fixed_point::FixedPoint;
    use num_bigint::BigInt;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn zero_ideal_of_burnside_over_c2() {
        let g = FiniteGroup::parse("C2").unwrap();
        let om = Arc::new(Burnside::new(g.clone()));
        let i0 = ideal_from_level(om.clone(), LevelIdeal::zero(om.clone())).unwrap();
        assert_eq!(i0.generators(g.whole()), vec![v(&[1, -2])]);
        assert!(i0.generators(g.trivial()).is_empty());
        assert!(i0.contains(g.whole(), &v(&[2, -4])).is_yes());
        assert!(i0.contains(g.whole(), &v(&[1, 0])).is_no());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(i0.check(20, &mut rng).passed());
    }

    #[test]
    fn whole_and_zero_ideals() {
        let g = FiniteGroup::parse("S3").unwrap();
        let om = Arc::new(Burnside::new(g.clone()));
        let all = ideal_from_level(om.clone(), LevelIdeal::whole(&om)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for h in g.subgroups() {
            assert!(all.contains(h, &om.sample(h, &mut rng)).is_yes());
        }
        assert!(all.check(10, &mut rng).passed());
        let pz = Arc::new(FixedPoint::new(g.clone(), Integers));
        let z0 = ideal_from_level(pz.clone(), LevelIdeal::zero(pz.clone())).unwrap();
        for h in g.subgroups() {
            assert!(z0.generators(h).is_empty());
            assert!(z0.contains(h, &BigInt::from(3)).is_no());
        }
    }

    #[test]
    fn non_invariant_level_ideal_is_rejected() {
        use crate::gset::GSet;
        use crate::ring::PermutationProduct;
        let g = FiniteGroup::parse("C2").unwrap();
        let pts = Arc::new(GSet::transitive(&g, g.trivial()));
        let p = Arc::new(FixedPoint::new(g.clone(), PermutationProduct::new(Integers, pts)));
        // {(a, 0)} is an ideal of Z² but the swap moves it
        let first = LevelIdeal::new("first", |x: &Vec<BigInt>| x[1] == BigInt::from(0), vec![v(&[1, 0])]);
        assert!(matches!(ideal_from_level(p, first), Err(Error::NotInvariantIdeal(_))));
    }

    #[test]
    fn transfer_closure_failure_is_located() {
        // the transfer of 3 is 6, which is not 0
        let g = FiniteGroup::parse("C2").unwrap();
        let pz = Arc::new(FixedPoint::new(g.clone(), Integers));
        let top = g.whole();
        let bad = TambaraIdeal::new(
            pz.clone(),
            "3Z below, 0 above",
            move |h, x: &BigInt| Decision::from_bool(if h == top { *x == BigInt::from(0) } else { x % 3 == BigInt::from(0) }),
            |h| if h.0 == 0 { vec![BigInt::from(3)] } else { Vec::new() },
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(!bad.check(5, &mut rng).passed());
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let g = FiniteGroup::parse("C2").unwrap();
        let pz = Arc::new(FixedPoint::new(g.clone(), Integers));
        let q = Arc::new(QuotientTambara::new(TambaraIdeal::zero(pz.clone())));
        let p = projection(q.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(p.check_sampled(30, &mut rng).passed());
        assert!(q.equal(g.whole(), &BigInt::from(2), &BigInt::from(3)).is_no());
    }
}
