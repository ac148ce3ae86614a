//! Fractions S⁻¹T of a Tambara functor by a multiplicative subfunctor S of
//! T^μ.
//!
//! Restriction, norm and conjugation act on numerator and denominator
//! separately. The additive transfer along f is `x/s ↦ f₊(a·x)/s̄` for any
//! admissible pair `(a, s̄)`: `s̄ ∈ S` with `f*(s̄) = a·s`. The default pair is
//! `(q1_•q2*(s), f_•(s))` over the diagonal complement of f.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, RngCore};

use crate::decision::{Decision, Tally};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupId};
use crate::gset::{Atlas, GMap};
use crate::mackey::fraction::{Frac, SEARCH_DEGREE};
use crate::mackey::subfunctor::SubMonoidFunctor;
use crate::tambara::{witness_a, Multiplicative, Tambara, TambaraExt};

pub type Denominators<T> = SubMonoidFunctor<Multiplicative<T>>;

pub struct FractionTambara<T: Tambara + 'static> {
    base: Arc<T>,
    denominators: Denominators<T>,
    atlas: Atlas,
    pub search_degree: usize,
    /// Marks that S(G/e) is exactly the nonzerodivisors of T(G/e), so the
    /// bottom level is the total ring of fractions of T(G/e).
    pub total_quotient_at_bottom: bool,
    /// Fault injection: perturbs the witness `a` used by the transfer.
    pub corrupt_witness: bool,
}

impl<T: Tambara + 'static> FractionTambara<T> {
    pub fn new(denominators: Denominators<T>) -> Self {
        let base = denominators.parent().0.clone();
        let atlas = Atlas::new(base.group());
        FractionTambara { base, denominators, atlas, search_degree: SEARCH_DEGREE, total_quotient_at_bottom: false, corrupt_witness: false }
    }

    pub fn base(&self) -> &Arc<T> {
        &self.base
    }

    pub fn denominators(&self) -> &Denominators<T> {
        &self.denominators
    }

    /// ℓ: x ↦ x/1.
    pub fn ell(&self, h: SubgroupId, x: &T::Elem) -> Frac<T::Elem> {
        Frac::new(x.clone(), self.base.one(h))
    }

    /// A fraction, checking that the denominator lies in S.
    pub fn fraction(&self, h: SubgroupId, num: T::Elem, den: T::Elem) -> Result<Frac<T::Elem>> {
        match self.denominators.contains(h, &den) {
            Decision::Yes(_) => Ok(Frac::new(num, den)),
            _ => Err(Error::NotADenominator(self.base.render(h, &den))),
        }
    }

    /// Some `t ∈ S` with `t·d = 0`.
    pub fn annihilate(&self, h: SubgroupId, d: &T::Elem) -> Decision<T::Elem> {
        let t = &self.base;
        if t.is_zero(h, d).is_yes() {
            return Decision::Yes(t.one(h));
        }
        if let Some(ann) = &self.denominators.annihilator {
            match ann(h, d) {
                Decision::Unknown => {}
                r => return r,
            }
        }
        if let Some(all) = t.elements(h) {
            for s in all {
                if self.denominators.contains(h, &s).is_yes() && t.is_zero(h, &t.mul(h, &s, d)).is_yes() {
                    return Decision::Yes(s);
                }
            }
            return Decision::No;
        }
        for s in self.denominators.products(h, self.search_degree) {
            if t.is_zero(h, &t.mul(h, &s, d)).is_yes() {
                return Decision::Yes(s);
            }
        }
        Decision::Unknown
    }

    /// The default admissible pair `(a, s̄)` for the transfer from level K to
    /// level H.
    pub fn default_witness(&self, k: SubgroupId, h: SubgroupId, s: &T::Elem) -> (T::Elem, T::Elem) {
        let f = self.atlas.projection(k, h);
        let (mut a, mut sbar) = witness_a(&*self.base, &f, std::slice::from_ref(s));
        (a.pop().expect("one orbit"), sbar.pop().expect("one orbit"))
    }

    /// Further admissible pairs `(a·res(u), s̄·u)` for generators `u` of S at
    /// level H, after the default one.
    pub fn witness_pairs(&self, k: SubgroupId, h: SubgroupId, s: &T::Elem, count: usize) -> Vec<(T::Elem, T::Elem)> {
        let t = &self.base;
        let (a, sbar) = self.default_witness(k, h, s);
        let mut out = vec![(a.clone(), sbar.clone())];
        for u in self.denominators.products(h, 2).into_iter().skip(1) {
            if out.len() >= count {
                break;
            }
            out.push((t.mul(k, &a, &t.restrict(h, k, &u)), t.mul(h, &sbar, &u)));
        }
        out
    }

    /// Whether `(a, s̄)` is admissible for `s` along G/K → G/H.
    pub fn is_admissible(&self, k: SubgroupId, h: SubgroupId, s: &T::Elem, a: &T::Elem, sbar: &T::Elem) -> Decision {
        let t = &self.base;
        let member = self.denominators.contains(h, sbar).forget();
        member.and(t.equal(k, &t.restrict(h, k, sbar), &t.mul(k, a, s)))
    }

    /// The transfer computed with a given admissible pair.
    pub fn transfer_with(&self, k: SubgroupId, h: SubgroupId, x: &Frac<T::Elem>, a: &T::Elem, sbar: &T::Elem) -> Frac<T::Elem> {
        let t = &self.base;
        Frac::new(t.transfer(k, h, &t.mul(k, a, &x.num)), sbar.clone())
    }

    /// For each generator `k` of the kernel of the restriction of T to G/e,
    /// an element `t ∈ S` with `t·k = 0` when one is found.
    pub fn mrc_witnesses(&self, h: SubgroupId) -> Option<Vec<(T::Elem, Decision<T::Elem>)>> {
        let kernel = self.base.restriction_kernel(h)?;
        Some(
            kernel
                .into_iter()
                .map(|k| {
                    let t = self.annihilate(h, &k);
                    (k, t)
                })
                .collect(),
        )
    }

    /// The additive transfer on `samples` random inputs: agreement across
    /// `pairs` admissible witness pairs, additivity, and `(g∘f)₊ = g₊f₊`
    /// along composable maps of transitive G-sets.
    pub fn check_transfer(&self, samples: usize, pairs: usize, rng: &mut dyn RngCore) -> Tally {
        let g = self.group().clone();
        let mut chains: Vec<(GMap, GMap)> = Vec::new();
        for k in g.subgroups() {
            for l in g.subgroups() {
                for f in self.atlas.maps_between(k, l) {
                    for h in g.subgroups() {
                        for f2 in self.atlas.maps_between(l, h) {
                            chains.push((f.clone(), f2));
                        }
                    }
                }
            }
        }
        let proper: Vec<(SubgroupId, SubgroupId)> = g
            .subgroups()
            .flat_map(|h| g.subgroups().filter(move |&k| k != h).map(move |k| (k, h)))
            .filter(|&(k, h)| g.is_subgroup(k, h))
            .collect();
        let mut tally = Tally::new();
        for _ in 0..samples {
            let (k, h) = proper[rng.gen_range(0..proper.len())];
            let x = self.sample(k, rng);
            let witnesses = self.witness_pairs(k, h, &x.den, pairs);
            tally.check(witnesses.len() >= pairs, || format!("only {} witness pairs for {}", witnesses.len(), self.render(k, &x)));
            let mut results = Vec::new();
            for (a, sbar) in &witnesses {
                tally
                    .record(&self.is_admissible(k, h, &x.den, a, sbar), || format!("inadmissible witness pair for {}", self.render(k, &x)));
                results.push(self.transfer_with(k, h, &x, a, sbar));
            }
            for r in &results[1..] {
                tally.record(&self.equal(h, &results[0], r), || {
                    format!(
                        "transfer of {} from {} to {} depends on the witness: {} vs {}",
                        self.render(k, &x),
                        g.class_name(k),
                        g.class_name(h),
                        self.render(h, &results[0]),
                        self.render(h, r)
                    )
                });
            }
            let y = self.sample(k, rng);
            let lhs = self.transfer(k, h, &self.add(k, &x, &y));
            let rhs = self.add(h, &self.transfer(k, h, &x), &self.transfer(k, h, &y));
            tally
                .record(&self.equal(h, &lhs, &rhs), || format!("transfer from {} to {} is not additive", g.class_name(k), g.class_name(h)));
            let (f1, f2) = &chains[rng.gen_range(0..chains.len())];
            let src = f1.source().orbits().orbits[0].stabilizer;
            let z = vec![self.sample(src, rng)];
            let lhs = self.transfer_along(&f1.then(f2), &z);
            let rhs = self.transfer_along(f2, &self.transfer_along(f1, &z));
            tally.record(&self.equal_values(f2.target(), &lhs, &rhs), || format!("transfer is not functorial along {f1:?} then {f2:?}"));
        }
        tally
    }

    /// One representative per class, for finite levels.
    pub fn classes(&self, h: SubgroupId) -> Option<Vec<Frac<T::Elem>>> {
        let all = self.base.elements(h)?;
        let dens: Vec<T::Elem> = all.iter().filter(|s| self.denominators.contains(h, s).is_yes()).cloned().collect();
        let mut reps: Vec<Frac<T::Elem>> = Vec::new();
        for x in &all {
            for s in &dens {
                let f = Frac::new(x.clone(), s.clone());
                if !reps.iter().any(|r| self.equal(h, r, &f).is_yes()) {
                    reps.push(f);
                }
            }
        }
        Some(reps)
    }
}

impl<T: Tambara + 'static> Tambara for FractionTambara<T> {
    type Elem = Frac<T::Elem>;

    fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }
    fn name(&self) -> String {
        format!("{}^-1 {}", self.denominators.name(), self.base.name())
    }
    fn zero(&self, h: SubgroupId) -> Self::Elem {
        Frac::new(self.base.zero(h), self.base.one(h))
    }
    fn one(&self, h: SubgroupId) -> Self::Elem {
        Frac::new(self.base.one(h), self.base.one(h))
    }
    fn add(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let t = &self.base;
        Frac::new(t.add(h, &t.mul(h, &a.num, &b.den), &t.mul(h, &b.num, &a.den)), t.mul(h, &a.den, &b.den))
    }
    fn neg(&self, h: SubgroupId, a: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.neg(h, &a.num), a.den.clone())
    }
    fn mul(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let t = &self.base;
        Frac::new(t.mul(h, &a.num, &b.num), t.mul(h, &a.den, &b.den))
    }
    fn equal(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Decision {
        let t = &self.base;
        let d = t.sub(h, &t.mul(h, &a.num, &b.den), &t.mul(h, &b.num, &a.den));
        self.annihilate(h, &d).forget()
    }
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.restrict(h, k, &x.num), self.base.restrict(h, k, &x.den))
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &Self::Elem) -> Self::Elem {
        if k == h {
            return x.clone();
        }
        let (mut a, sbar) = self.default_witness(k, h, &x.den);
        if self.corrupt_witness {
            a = self.base.add(k, &a, &self.base.one(k));
        }
        self.transfer_with(k, h, x, &a, &sbar)
    }
    fn norm(&self, k: SubgroupId, h: SubgroupId, x: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.norm(k, h, &x.num), self.base.norm(k, h, &x.den))
    }
    fn conjugate(&self, g: usize, h: SubgroupId, x: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.conjugate(g, h, &x.num), self.base.conjugate(g, h, &x.den))
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> Self::Elem {
        let num = self.base.sample(h, rng);
        let gens = self.denominators.generators(h);
        let mut den = self.base.one(h);
        if !gens.is_empty() {
            for _ in 0..(rng.next_u32() % 3) {
                let g = &gens[rng.next_u32() as usize % gens.len()];
                den = self.base.mul(h, &den, g);
            }
        }
        Frac::new(num, den)
    }
    fn from_int(&self, h: SubgroupId, n: &BigInt) -> Self::Elem {
        Frac::new(self.base.from_int(h, n), self.base.one(h))
    }
    fn inverse(&self, h: SubgroupId, x: &Self::Elem) -> Decision<Self::Elem> {
        match self.denominators.contains(h, &x.num) {
            Decision::Yes(_) => Decision::Yes(Frac::new(x.den.clone(), x.num.clone())),
            _ => match self.base.inverse(h, &x.num) {
                Decision::Yes(y) => Decision::Yes(Frac::new(self.base.mul(h, &x.den, &y), self.base.one(h))),
                // a unit numerator would lie in the saturation of S
                _ if self.denominators.excluded.as_ref().is_some_and(|ex| ex(h, &x.num)) => Decision::No,
                _ => Decision::Unknown,
            },
        }
    }
    fn zero_divisor(&self, h: SubgroupId, x: &Self::Elem) -> Decision<Self::Elem> {
        if self.denominators.contains(h, &x.num).is_yes() {
            return Decision::No;
        }
        match self.base.zero_divisor(h, &x.num) {
            Decision::Yes(b) => {
                let y = self.ell(h, &b);
                match self.is_zero(h, &y) {
                    Decision::No => Decision::Yes(y),
                    _ => Decision::Unknown,
                }
            }
            // a nonzerodivisor stays one after localization
            Decision::No => Decision::No,
            Decision::Unknown => Decision::Unknown,
        }
    }
    fn restriction_kernel(&self, h: SubgroupId) -> Option<Vec<Self::Elem>> {
        // with S(G/e) made of nonzerodivisors, x/s restricts to zero
        // exactly when x does
        if !self.total_quotient_at_bottom {
            return None;
        }
        Some(self.base.restriction_kernel(h)?.iter().map(|k| self.ell(h, k)).collect())
    }
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        // the total ring of fractions of a domain is a field
        if self.total_quotient_at_bottom && self.base.bottom_is_domain() == Some(true) {
            Some(true)
        } else {
            None
        }
    }
    fn bottom_is_domain(&self) -> Option<bool> {
        match self.base.bottom_is_domain() {
            Some(true) => Some(true),
            _ => None,
        }
    }
    fn elements(&self, h: SubgroupId) -> Option<Vec<Self::Elem>> {
        self.classes(h)
    }
    fn render(&self, h: SubgroupId, x: &Self::Elem) -> String {
        format!("({})/({})", self.base.render(h, &x.num), self.base.render(h, &x.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::subfunctor::{build_u, Seed};
    use crate::ring::IntegersMod;
    use crate::tambara::check_level_rings;
    use crate::tambara::fixed_point::FixedPoint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// P_{Z/6} over C2 with the odd residues inverted.
    #[test]
    fn finite_fraction_levels() {
        let g = FiniteGroup::parse("C2").unwrap();
        let p = Arc::new(FixedPoint::new(g.clone(), IntegersMod(6)));
        let mu = Arc::new(Multiplicative(p.clone()));
        let seed = Seed::new("odd", |x: &u64| x % 2 == 1, vec![3, 5]);
        let s = build_u(mu, &seed, None).unwrap();
        let f = FractionTambara::new(s);
        for h in g.subgroups() {
            // Z/6 with 3 inverted is Z/2
            assert_eq!(f.classes(h).unwrap().len(), 2);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(check_level_rings(&f, 5, &mut rng).passed());
        let atlas = Atlas::new(&g);
        let pr = atlas.projection(g.trivial(), g.whole());
        let x = f.sample_value(pr.source(), &mut rng);
        let y = f.transfer_along(&pr, &x);
        assert_eq!(y.len(), 1);
        let t = f.check_transfer(30, 3, &mut rng);
        assert!(t.passed(), "{t:?}");
    }
}
