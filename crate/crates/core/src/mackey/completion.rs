//! Group-valued functors obtained levelwise from a semi-Mackey functor:
//! the Grothendieck group completion K₀(M) and the unit groups M^×. Both
//! inherit their structure maps from M, so they are Mackey functors.

use std::sync::Arc;

use rand::RngCore;

use crate::decision::Decision;
use crate::group::{FiniteGroup, SubgroupId};
use crate::mackey::fraction::Frac;
use crate::mackey::SemiMackey;

/// K₀(M): pairs `(a, b)` standing for `a - b`, identified when
/// `a + d + k = b + c + k` for some `k` (written multiplicatively via
/// `combine`).
pub struct GroupCompletion<M> {
    base: Arc<M>,
    cancellative: bool,
}

/// Group completion of every level. Pass `cancellative = true` only when
/// every level of `m` is cancellative, which makes equality direct.
pub fn k0_lift<M: SemiMackey>(m: Arc<M>, cancellative: bool) -> GroupCompletion<M> {
    GroupCompletion { base: m, cancellative }
}

impl<M: SemiMackey> GroupCompletion<M> {
    pub fn base(&self) -> &Arc<M> {
        &self.base
    }

    pub fn embed(&self, h: SubgroupId, x: &M::Elem) -> Frac<M::Elem> {
        Frac::new(x.clone(), self.base.unit(h))
    }

    /// One pair per class, for finite levels.
    pub fn classes(&self, h: SubgroupId) -> Option<Vec<Frac<M::Elem>>> {
        let all = self.base.elements(h)?;
        let mut reps: Vec<Frac<M::Elem>> = Vec::new();
        for a in &all {
            for b in &all {
                let f = Frac::new(a.clone(), b.clone());
                if !reps.iter().any(|r| self.equal(h, r, &f).is_yes()) {
                    reps.push(f);
                }
            }
        }
        Some(reps)
    }
}

impl<M: SemiMackey> SemiMackey for GroupCompletion<M> {
    type Elem = Frac<M::Elem>;

    fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }
    fn name(&self) -> String {
        format!("K0({})", self.base.name())
    }
    fn unit(&self, h: SubgroupId) -> Self::Elem {
        Frac::new(self.base.unit(h), self.base.unit(h))
    }
    fn combine(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Frac::new(self.base.combine(h, &a.num, &b.num), self.base.combine(h, &a.den, &b.den))
    }
    fn equal(&self, h: SubgroupId, x: &Self::Elem, y: &Self::Elem) -> Decision {
        let m = &self.base;
        let lhs = m.combine(h, &x.num, &y.den);
        let rhs = m.combine(h, &x.den, &y.num);
        match m.equal(h, &lhs, &rhs) {
            Decision::Yes(()) => return Decision::Yes(()),
            Decision::No if self.cancellative => return Decision::No,
            _ => {}
        }
        match m.elements(h) {
            Some(all) => Decision::from_bool(all.iter().any(|k| m.equal(h, &m.combine(h, &lhs, k), &m.combine(h, &rhs, k)).is_yes())),
            None => Decision::Unknown,
        }
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
        Frac::new(self.base.sample(h, rng), self.base.sample(h, rng))
    }
    fn inverse(&self, _h: SubgroupId, x: &Self::Elem) -> Decision<Self::Elem> {
        Decision::Yes(Frac::new(x.den.clone(), x.num.clone()))
    }
    fn elements(&self, h: SubgroupId) -> Option<Vec<Self::Elem>> {
        self.classes(h)
    }
    fn render(&self, h: SubgroupId, x: &Self::Elem) -> String {
        format!("[{} - {}]", self.base.render(h, &x.num), self.base.render(h, &x.den))
    }
}

/// The units of every level.
pub struct Units<M> {
    base: Arc<M>,
}

pub fn units_lift<M: SemiMackey>(m: Arc<M>) -> Units<M> {
    Units { base: m }
}

impl<M: SemiMackey> SemiMackey for Units<M> {
    type Elem = M::Elem;

    fn group(&self) -> &Arc<FiniteGroup> {
        self.base.group()
    }
    fn name(&self) -> String {
        format!("{}^x", self.base.name())
    }
    fn unit(&self, h: SubgroupId) -> M::Elem {
        self.base.unit(h)
    }
    fn combine(&self, h: SubgroupId, a: &M::Elem, b: &M::Elem) -> M::Elem {
        self.base.combine(h, a, b)
    }
    fn equal(&self, h: SubgroupId, a: &M::Elem, b: &M::Elem) -> Decision {
        self.base.equal(h, a, b)
    }
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &M::Elem) -> M::Elem {
        self.base.restrict(h, k, x)
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &M::Elem) -> M::Elem {
        self.base.transfer(k, h, x)
    }
    fn conjugate(&self, g: usize, h: SubgroupId, x: &M::Elem) -> M::Elem {
        self.base.conjugate(g, h, x)
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> M::Elem {
        for _ in 0..64 {
            let x = self.base.sample(h, rng);
            if self.base.inverse(h, &x).is_yes() {
                return x;
            }
        }
        self.base.unit(h)
    }
    fn inverse(&self, h: SubgroupId, x: &M::Elem) -> Decision<M::Elem> {
        self.base.inverse(h, x)
    }
    fn elements(&self, h: SubgroupId) -> Option<Vec<M::Elem>> {
        let all = self.base.elements(h)?;
        Some(all.into_iter().filter(|x| self.base.inverse(h, x).is_yes()).collect())
    }
    fn render(&self, h: SubgroupId, x: &M::Elem) -> String {
        self.base.render(h, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mackey::fixed::{FixedPointSemiMackey, IntMul, NatAdd, ZnAdd, ZnMul};
    use crate::mackey::fraction::FractionSemiMackey;
    use crate::mackey::subfunctor::SubMonoidFunctor;
    use crate::mackey::{check_level_functoriality, SemiMackeyExt};
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn k0_of_naturals_is_the_integers() {
        let g = FiniteGroup::parse("C2").unwrap();
        let k = k0_lift(Arc::new(FixedPointSemiMackey::new(g.clone(), NatAdd)), true);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for h in g.subgroups() {
            for _ in 0..50 {
                let x = k.sample(h, &mut rng);
                let y = k.sample(h, &mut rng);
                let same = &x.num - &x.den == &y.num - &y.den;
                assert_eq!(k.equal(h, &x, &y).is_yes(), same);
                let inv = k.inverse(h, &x).witness().unwrap();
                assert!(k.equal(h, &k.combine(h, &x, &inv), &k.unit(h)).is_yes());
            }
        }
        // transfer G/e → G/G doubles the integer
        let x = Frac::new(BigInt::from(3), BigInt::from(5));
        let up = k.transfer(g.trivial(), g.whole(), &x);
        assert_eq!(&up.num - &up.den, BigInt::from(-4));
        assert!(check_level_functoriality(&k, 3, &mut rng).passed());
    }

    #[test]
    fn units_of_multiplicative_integers() {
        let g = FiniteGroup::parse("C3").unwrap();
        let u = units_lift(Arc::new(FixedPointSemiMackey::new(g.clone(), IntMul)));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let x = u.sample(g.whole(), &mut rng);
            assert!(x == BigInt::from(1) || x == BigInt::from(-1));
        }
        // -1 transfers to (-1)^3
        assert_eq!(u.transfer(g.trivial(), g.whole(), &BigInt::from(-1)), BigInt::from(-1));
    }

    #[test]
    fn k0_agrees_with_fraction_by_everything_on_finite_carriers() {
        let g = FiniteGroup::parse("C2").unwrap();
        for n in [4u64, 5, 6] {
            let m = Arc::new(FixedPointSemiMackey::new(g.clone(), ZnAdd(n)));
            let k = k0_lift(m.clone(), false);
            let f = FractionSemiMackey::new(SubMonoidFunctor::whole(m.clone()));
            for h in g.subgroups() {
                let kc = k.classes(h).unwrap();
                let fc = f.classes(h).unwrap();
                assert_eq!(kc.len(), n as usize);
                assert_eq!(kc.len(), fc.len());
                // the identity on pairs matches classes up to the swap
                // (a - b) <-> a/b
                for a in &kc {
                    let matches = fc.iter().filter(|b| f.equal(h, a, b).is_yes()).count();
                    assert_eq!(matches, 1);
                }
            }
        }
        // a non-cancellative carrier collapses: K0 of (Z/6, *) is trivial
        let m = Arc::new(FixedPointSemiMackey::new(g.clone(), ZnMul(6)));
        let k = k0_lift(m, false);
        assert_eq!(k.classes(g.whole()).unwrap().len(), 1);
        assert_eq!(k.unit_value(&crate::gset::Atlas::new(&g).point()).len(), 1);
    }
}
