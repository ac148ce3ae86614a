//! Fractions S⁻¹M of a semi-Mackey functor by a multiplicative subfunctor.
//!
//! Levels are pairs `x/s` with `s ∈ S(G/H)`; `x/s = x'/s'` when some `t` in
//! S satisfies `t·s'·x = t·s·x'`. Restriction, transfer and conjugation act
//! on numerator and denominator separately.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use crate::decision::Decision;
use crate::group::{FiniteGroup, SubgroupId};
use crate::mackey::subfunctor::SubMonoidFunctor;
use crate::mackey::SemiMackey;

/// Default degree of the bounded search over products of generators.
pub const SEARCH_DEGREE: usize = 6;

#[derive(Clone, PartialEq)]
pub struct Frac<E> {
    pub num: E,
    pub den: E,
}

impl<E: fmt::Debug> fmt::Debug for Frac<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}", self.num, self.den)
    }
}

impl<E> Frac<E> {
    pub fn new(num: E, den: E) -> Self {
        Frac { num, den }
    }
}

pub struct FractionSemiMackey<M: SemiMackey> {
    base: Arc<M>,
    denominators: SubMonoidFunctor<M>,
    pub search_degree: usize,
}

impl<M: SemiMackey + 'static> FractionSemiMackey<M> {
    pub fn new(denominators: SubMonoidFunctor<M>) -> Self {
        FractionSemiMackey { base: denominators.parent().clone(), denominators, search_degree: SEARCH_DEGREE }
    }

    pub fn base(&self) -> &Arc<M> {
        &self.base
    }

    pub fn denominators(&self) -> &SubMonoidFunctor<M> {
        &self.denominators
    }

    /// The canonical morphism ℓ: x ↦ x/1.
    pub fn ell(&self, h: SubgroupId, x: &M::Elem) -> Frac<M::Elem> {
        Frac::new(x.clone(), self.base.unit(h))
    }

    /// Some `t` in S with `t·u = t·v`.
    pub fn equalize(&self, h: SubgroupId, u: &M::Elem, v: &M::Elem) -> Decision<M::Elem> {
        let m = &self.base;
        if m.equal(h, u, v).is_yes() {
            return Decision::Yes(m.unit(h));
        }
        if let Some(eq) = &self.denominators.equalizer {
            match eq(h, u, v) {
                Decision::Unknown => {}
                d => return d,
            }
        }
        let test = |t: &M::Elem| m.equal(h, &m.combine(h, t, u), &m.combine(h, t, v)).is_yes();
        if let Some(all) = m.elements(h) {
            // finite level: exhaustive
            for t in all {
                if self.denominators.contains(h, &t).is_yes() && test(&t) {
                    return Decision::Yes(t);
                }
            }
            return Decision::No;
        }
        for t in self.denominators.products(h, self.search_degree) {
            if test(&t) {
                return Decision::Yes(t);
            }
        }
        Decision::Unknown
    }

    /// Every element of a finite level, one per equality class.
    pub fn classes(&self, h: SubgroupId) -> Option<Vec<Frac<M::Elem>>> {
        let all = self.base.elements(h)?;
        let dens: Vec<M::Elem> = all.iter().filter(|s| self.denominators.contains(h, s).is_yes()).cloned().collect();
        let mut reps: Vec<Frac<M::Elem>> = Vec::new();
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

impl<M: SemiMackey + 'static> SemiMackey for FractionSemiMackey<M> {
    type Elem = Frac<M::Elem>;

    fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }
    fn name(&self) -> String {
        format!("{}^-1 {}", self.denominators.name(), self.base.name())
    }
    fn unit(&self, h: SubgroupId) -> Self::Elem {
        Frac::new(self.base.unit(h), self.base.unit(h))
    }
    fn combine(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.combine(h, &a.num, &b.num), self.base.combine(h, &a.den, &b.den))
    }
    fn equal(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Decision {
        let u = self.base.combine(h, &b.den, &a.num);
        let v = self.base.combine(h, &a.den, &b.num);
        self.equalize(h, &u, &v).forget()
    }
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.restrict(h, k, &x.num), self.base.restrict(h, k, &x.den))
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.transfer(k, h, &x.num), self.base.transfer(k, h, &x.den))
    }
    fn conjugate(&self, g: usize, h: SubgroupId, x: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.conjugate(g, h, &x.num), self.base.conjugate(g, h, &x.den))
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> Self::Elem {
        let num = self.base.sample(h, rng);
        let gens = self.denominators.generators(h);
        let mut den = self.base.unit(h);
        if !gens.is_empty() {
            for _ in 0..(rng.next_u32() % 3) {
                let g = &gens[rng.next_u32() as usize % gens.len()];
                den = self.base.combine(h, &den, g);
            }
        }
        Frac::new(num, den)
    }
    fn inverse(&self, h: SubgroupId, x: &Self::Elem) -> Decision<Self::Elem> {
        if self.denominators.contains(h, &x.num).is_yes() {
            return Decision::Yes(Frac::new(x.den.clone(), x.num.clone()));
        }
        match self.base.inverse(h, &x.num) {
            Decision::Yes(y) => Decision::Yes(Frac::new(self.base.combine(h, &x.den, &y), self.base.unit(h))),
            _ => Decision::Unknown,
        }
    }
    fn elements(&self, h: SubgroupId) -> Option<Vec<Self::Elem>> {
        self.classes(h)
    }
    fn render(&self, h: SubgroupId, x: &Self::Elem) -> String {
        format!("{}/{}", self.base.render(h, &x.num), self.base.render(h, &x.den))
    }
}
