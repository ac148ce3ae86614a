//! Fixed-point semi-Mackey functors of commutative monoids with trivial
//! action: every level is the monoid itself, restriction is the identity
//! and transfer from K to H is the |H:K|-fold product.

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use crate::decision::Decision;
use crate::group::{FiniteGroup, SubgroupId};
use crate::mackey::SemiMackey;

pub trait GMonoid: Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn name(&self) -> String;
    fn unit(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Some `b` with `a·b = c`.
    fn divide(&self, c: &Self::Elem, a: &Self::Elem) -> Option<Self::Elem>;
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn power(&self, a: &Self::Elem, n: usize) -> Self::Elem {
        (0..n).fold(self.unit(), |acc, _| self.op(&acc, a))
    }
}

/// The natural numbers under addition.
#[derive(Clone, Copy, Debug)]
pub struct NatAdd;

impl GMonoid for NatAdd {
    type Elem = BigInt;
    fn name(&self) -> String {
        "(N,+)".into()
    }
    fn unit(&self) -> BigInt {
        BigInt::zero()
    }
    fn op(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigInt {
        BigInt::from(rng.gen_range(0u32..20))
    }
    fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        a.is_zero().then(BigInt::zero)
    }
    fn divide(&self, c: &BigInt, a: &BigInt) -> Option<BigInt> {
        (c >= a).then(|| c - a)
    }
}

/// The integers under multiplication.
#[derive(Clone, Copy, Debug)]
pub struct IntMul;

impl GMonoid for IntMul {
    type Elem = BigInt;
    fn name(&self) -> String {
        "(Z,*)".into()
    }
    fn unit(&self) -> BigInt {
        BigInt::one()
    }
    fn op(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigInt {
        BigInt::from(rng.gen_range(-12i64..=12))
    }
    fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        a.abs().is_one().then(|| a.clone())
    }
    fn divide(&self, c: &BigInt, a: &BigInt) -> Option<BigInt> {
        if a.is_zero() {
            return c.is_zero().then(BigInt::zero);
        }
        let (q, r) = c.div_rem(a);
        r.is_zero().then_some(q)
    }
}

/// Z/n under multiplication.
#[derive(Clone, Copy, Debug)]
pub struct ZnMul(pub u64);

impl GMonoid for ZnMul {
    type Elem = u64;
    fn name(&self) -> String {
        format!("(Z/{},*)", self.0)
    }
    fn unit(&self) -> u64 {
        1 % self.0
    }
    fn op(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.0)
    }
    fn inverse(&self, a: &u64) -> Option<u64> {
        (0..self.0).find(|b| self.op(a, b) == self.unit())
    }
    fn divide(&self, c: &u64, a: &u64) -> Option<u64> {
        (0..self.0).find(|b| self.op(a, b) == *c)
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.0).collect())
    }
}

/// Z/n under addition.
#[derive(Clone, Copy, Debug)]
pub struct ZnAdd(pub u64);

impl GMonoid for ZnAdd {
    type Elem = u64;
    fn name(&self) -> String {
        format!("(Z/{},+)", self.0)
    }
    fn unit(&self) -> u64 {
        0
    }
    fn op(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.0)
    }
    fn inverse(&self, a: &u64) -> Option<u64> {
        Some((self.0 - a) % self.0)
    }
    fn divide(&self, c: &u64, a: &u64) -> Option<u64> {
        Some((c + self.0 - a) % self.0)
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.0).collect())
    }
}

pub struct FixedPointSemiMackey<Mo> {
    group: Arc<FiniteGroup>,
    monoid: Mo,
}

impl<Mo: GMonoid> FixedPointSemiMackey<Mo> {
    pub fn new(group: Arc<FiniteGroup>, monoid: Mo) -> Self {
        FixedPointSemiMackey { group, monoid }
    }

    pub fn monoid(&self) -> &Mo {
        &self.monoid
    }
}

impl<Mo: GMonoid> SemiMackey for FixedPointSemiMackey<Mo> {
    type Elem = Mo::Elem;

    fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    fn name(&self) -> String {
        format!("P_{}", self.monoid.name())
    }
    fn unit(&self, _h: SubgroupId) -> Mo::Elem {
        self.monoid.unit()
    }
    fn combine(&self, _h: SubgroupId, a: &Mo::Elem, b: &Mo::Elem) -> Mo::Elem {
        self.monoid.op(a, b)
    }
    fn equal(&self, _h: SubgroupId, a: &Mo::Elem, b: &Mo::Elem) -> Decision {
        Decision::from_bool(a == b)
    }
    fn restrict(&self, _h: SubgroupId, _k: SubgroupId, x: &Mo::Elem) -> Mo::Elem {
        x.clone()
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &Mo::Elem) -> Mo::Elem {
        self.monoid.power(x, self.group.index(k, h))
    }
    fn conjugate(&self, _g: usize, _h: SubgroupId, x: &Mo::Elem) -> Mo::Elem {
        x.clone()
    }
    fn sample(&self, _h: SubgroupId, rng: &mut dyn RngCore) -> Mo::Elem {
        self.monoid.sample(rng)
    }
    fn inverse(&self, _h: SubgroupId, x: &Mo::Elem) -> Decision<Mo::Elem> {
        self.monoid.inverse(x).map_or(Decision::No, Decision::Yes)
    }
    fn divide(&self, _h: SubgroupId, c: &Mo::Elem, a: &Mo::Elem) -> Decision<Mo::Elem> {
        self.monoid.divide(c, a).map_or(Decision::No, Decision::Yes)
    }
    fn elements(&self, _h: SubgroupId) -> Option<Vec<Mo::Elem>> {
        self.monoid.elements()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::Atlas;
    use crate::mackey::{check_level_functoriality, check_mackey_square};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_point_functors_satisfy_the_mackey_condition() {
        let g = FiniteGroup::parse("S3").unwrap();
        let atlas = Atlas::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = FixedPointSemiMackey::new(g.clone(), IntMul);
        for h in g.subgroups() {
            for k in g.subgroups() {
                for l in g.subgroups() {
                    for f in atlas.maps_between(h, k) {
                        for q in atlas.maps_between(l, k) {
                            let t = check_mackey_square(&m, &f, &q, 3, &mut rng);
                            assert!(t.passed(), "{:?}", t.failures);
                        }
                    }
                }
            }
        }
        assert!(check_level_functoriality(&m, 2, &mut rng).passed());
    }
}
