//! The fixed-point Tambara functor P_R of a G-ring R: the value at X is the
//! ring of G-maps X → R, so level H is the fixed subring R^H. Restriction is
//! inclusion, transfer sums and norm multiplies over coset representatives.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::RngCore;

use crate::decision::Decision;
use crate::group::{FiniteGroup, SubgroupId};
use crate::ring::GRing;
use crate::tambara::Tambara;

pub struct FixedPoint<R> {
    group: Arc<FiniteGroup>,
    ring: R,
}

impl<R: GRing> FixedPoint<R> {
    pub fn new(group: Arc<FiniteGroup>, ring: R) -> Self {
        FixedPoint { group, ring }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn is_fixed(&self, h: SubgroupId, x: &R::Elem) -> bool {
        self.group.subgroup(h).members().iter().all(|&g| self.ring.act(g, x) == *x)
    }

    /// Sum of the distinct H-translates of `x`.
    fn orbit_sum(&self, h: SubgroupId, x: &R::Elem) -> R::Elem {
        let mut seen: Vec<R::Elem> = Vec::new();
        for &g in self.group.subgroup(h).members() {
            let y = self.ring.act(g, x);
            if !seen.contains(&y) {
                seen.push(y);
            }
        }
        seen.iter().fold(self.ring.zero(), |acc, y| self.ring.add(&acc, y))
    }
}

impl<R: GRing> Tambara for FixedPoint<R> {
    type Elem = R::Elem;

    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    fn name(&self) -> String {
        format!("P_{}", self.ring.name())
    }
    fn zero(&self, _h: SubgroupId) -> R::Elem {
        self.ring.zero()
    }
    fn one(&self, _h: SubgroupId) -> R::Elem {
        self.ring.one()
    }
    fn add(&self, _h: SubgroupId, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.ring.add(a, b)
    }
    fn neg(&self, _h: SubgroupId, a: &R::Elem) -> R::Elem {
        self.ring.neg(a)
    }
    fn mul(&self, _h: SubgroupId, a: &R::Elem, b: &R::Elem) -> R::Elem {
        self.ring.mul(a, b)
    }
    fn equal(&self, _h: SubgroupId, a: &R::Elem, b: &R::Elem) -> Decision {
        Decision::from_bool(a == b)
    }
    fn restrict(&self, _h: SubgroupId, _k: SubgroupId, x: &R::Elem) -> R::Elem {
        x.clone()
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &R::Elem) -> R::Elem {
        self.group.left_cosets(h, k).into_iter().fold(self.ring.zero(), |acc, r| self.ring.add(&acc, &self.ring.act(r, x)))
    }
    fn norm(&self, k: SubgroupId, h: SubgroupId, x: &R::Elem) -> R::Elem {
        self.group.left_cosets(h, k).into_iter().fold(self.ring.one(), |acc, r| self.ring.mul(&acc, &self.ring.act(r, x)))
    }
    fn conjugate(&self, g: usize, _h: SubgroupId, x: &R::Elem) -> R::Elem {
        self.ring.act(g, x)
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> R::Elem {
        self.ring.sample_fixed(self.group.subgroup(h).members(), rng)
    }
    fn from_int(&self, _h: SubgroupId, n: &BigInt) -> R::Elem {
        self.ring.from_int(n)
    }
    fn inverse(&self, _h: SubgroupId, x: &R::Elem) -> Decision<R::Elem> {
        self.ring.inverse(x).map_or(Decision::No, Decision::Yes)
    }
    fn divide(&self, h: SubgroupId, c: &R::Elem, a: &R::Elem) -> Decision<R::Elem> {
        match self.ring.divide(c, a) {
            Some(b) if self.is_fixed(h, &b) => Decision::Yes(b),
            Some(_) => Decision::Unknown,
            None if self.ring.inverse(a).is_some() => Decision::No,
            None => Decision::Unknown,
        }
    }
    fn zero_divisor(&self, h: SubgroupId, x: &R::Elem) -> Decision<R::Elem> {
        match self.ring.annihilator(x) {
            None => Decision::No,
            Some(b) => {
                // translates of b annihilate the fixed element x as well
                let fixed = self.orbit_sum(h, &b);
                if self.ring.is_zero(&fixed) {
                    Decision::Unknown
                } else {
                    Decision::Yes(fixed)
                }
            }
        }
    }
    fn restriction_kernel(&self, _h: SubgroupId) -> Option<Vec<R::Elem>> {
        Some(Vec::new())
    }
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        self.ring.invariant_ideals_trivial()
    }
    fn bottom_is_domain(&self) -> Option<bool> {
        self.ring.is_domain()
    }
    fn elements(&self, h: SubgroupId) -> Option<Vec<R::Elem>> {
        Some(self.ring.elements()?.into_iter().filter(|x| self.is_fixed(h, x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::{Atlas, GSet};
    use crate::ring::{Integers, PermutationProduct, Rationals};
    use crate::tambara::{check_level_rings, TambaraExt};
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn transfer_and_norm_over_c2() {
        let g = FiniteGroup::parse("C2").unwrap();
        let p = FixedPoint::new(g.clone(), Integers);
        let x = BigInt::from(5);
        assert_eq!(p.transfer(g.trivial(), g.whole(), &x), BigInt::from(10));
        assert_eq!(p.norm(g.trivial(), g.whole(), &x), BigInt::from(25));
        let q = FixedPoint::new(g.clone(), Rationals);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(q.inverse(g.whole(), &half).witness().unwrap(), BigRational::from_integer(2.into()));
    }

    #[test]
    fn swap_ring_levels() {
        let g = FiniteGroup::parse("C2").unwrap();
        let pts = Arc::new(GSet::transitive(&g, g.trivial()));
        let p = FixedPoint::new(g.clone(), PermutationProduct::new(Integers, pts));
        let e = g.trivial();
        let top = g.whole();
        let x = vec![BigInt::from(3), BigInt::from(0)];
        assert_eq!(p.transfer(e, top, &x), vec![BigInt::from(3), BigInt::from(3)]);
        assert_eq!(p.norm(e, top, &x), vec![BigInt::from(0), BigInt::from(0)]);
        let w = p.zero_divisor(e, &x).witness().unwrap();
        assert_eq!(p.mul(e, &x, &w), p.zero(e));
        // at the top level the witness must itself be fixed
        let y = vec![BigInt::from(0), BigInt::from(0)];
        let w = p.zero_divisor(top, &y).witness().unwrap();
        assert!(p.is_fixed(top, &w));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            assert!(p.is_fixed(top, &p.sample(top, &mut rng)));
        }
        assert!(check_level_rings(&p, 5, &mut rng).passed());
    }

    #[test]
    fn values_are_equivariant_maps() {
        // P_Z on G/e ⨿ G/G for S3 has one entry per orbit
        let g = FiniteGroup::parse("S3").unwrap();
        let atlas = Atlas::new(&g);
        let (x, _, _) = GSet::coproduct(&atlas.transitive(g.trivial()), &atlas.point());
        let p = FixedPoint::new(g.clone(), Integers);
        assert_eq!(p.one_value(&x).len(), 2);
    }
}
