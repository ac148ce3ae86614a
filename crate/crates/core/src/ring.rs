//! Commutative rings with a group action by ring automorphisms, used as
//! coefficients of fixed-point functors.

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, RngCore};

use crate::gset::GSet;

/// A commutative ring with exact arithmetic, decidable equality and an
/// action of the ambient group (trivial unless overridden).
pub trait GRing: Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;

    /// Multiplicative inverse, if any.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// A nonzero `b` with `a·b = 0`, or `None` when `a` is a nonzerodivisor.
    fn annihilator(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Whether the only G-invariant ideals are 0 and the ring, when known.
    fn invariant_ideals_trivial(&self) -> Option<bool>;

    fn act(&self, _g: usize, a: &Self::Elem) -> Self::Elem {
        a.clone()
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Every element, for finite rings.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Whether the ring is an integral domain, when known.
    fn is_domain(&self) -> Option<bool> {
        None
    }

    /// A random element fixed by the given group elements: a sample if it
    /// is already fixed, otherwise the sum over its orbit.
    fn sample_fixed(&self, members: &[usize], rng: &mut dyn RngCore) -> Self::Elem {
        let r = self.sample(rng);
        let mut orbit: Vec<Self::Elem> = Vec::new();
        for &g in members {
            let y = self.act(g, &r);
            if !orbit.contains(&y) {
                orbit.push(y);
            }
        }
        if orbit.len() == 1 {
            return r;
        }
        orbit.iter().fold(self.zero(), |acc, y| self.add(&acc, y))
    }

    /// Whether `a·b = c` for some `b`, returning such a `b`.
    fn divide(&self, c: &Self::Elem, a: &Self::Elem) -> Option<Self::Elem> {
        let inv = self.inverse(a)?;
        Some(self.mul(c, &inv))
    }
}

/// The integers with trivial action.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl GRing for Integers {
    type Elem = BigInt;

    fn name(&self) -> String {
        "Z".into()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigInt {
        n.clone()
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigInt {
        BigInt::from(rng.gen_range(-9i64..=9))
    }
    fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        (a.abs().is_one()).then(|| a.clone())
    }
    fn annihilator(&self, a: &BigInt) -> Option<BigInt> {
        a.is_zero().then(BigInt::one)
    }
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        Some(false)
    }
    fn is_domain(&self) -> Option<bool> {
        Some(true)
    }
    fn divide(&self, c: &BigInt, a: &BigInt) -> Option<BigInt> {
        if a.is_zero() {
            return c.is_zero().then(BigInt::zero);
        }
        let (q, r) = c.div_rem(a);
        r.is_zero().then_some(q)
    }
}

/// The rationals with trivial action.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl GRing for Rationals {
    type Elem = BigRational;

    fn name(&self) -> String {
        "Q".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        let num = rng.gen_range(-12i64..=12);
        let den = rng.gen_range(1i64..=7);
        BigRational::new(num.into(), den.into())
    }
    fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn annihilator(&self, a: &BigRational) -> Option<BigRational> {
        a.is_zero().then(BigRational::one)
    }
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        Some(true)
    }
    fn is_domain(&self) -> Option<bool> {
        Some(true)
    }
}

/// Z/n with trivial action.
#[derive(Clone, Copy, Debug)]
pub struct IntegersMod(pub u64);

impl GRing for IntegersMod {
    type Elem = u64;

    fn name(&self) -> String {
        format!("Z/{}", self.0)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.0)).to_u64().expect("reduced")
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.gen_range(0..self.0)
    }
    fn inverse(&self, a: &u64) -> Option<u64> {
        (0..self.0).find(|b| self.mul(a, b) == self.one())
    }
    fn annihilator(&self, a: &u64) -> Option<u64> {
        (1..self.0).find(|b| self.mul(a, b) == 0)
    }
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        self.is_domain()
    }
    fn is_domain(&self) -> Option<bool> {
        let n = self.0;
        Some(n > 1 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d)))
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.0).collect())
    }
    fn divide(&self, c: &u64, a: &u64) -> Option<u64> {
        (0..self.0).find(|b| self.mul(a, b) == *c)
    }
}

/// `R^n` with G permuting the coordinates through a G-set of size `n`:
/// `(g·r)_{g·i} = g·r_i`.
#[derive(Clone)]
pub struct PermutationProduct<R> {
    pub base: R,
    pub points: Arc<GSet>,
}

impl<R: GRing> PermutationProduct<R> {
    pub fn new(base: R, points: Arc<GSet>) -> Self {
        PermutationProduct { base, points }
    }

    fn n(&self) -> usize {
        self.points.size()
    }

    fn map2(&self, a: &[R::Elem], b: &[R::Elem], op: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Vec<R::Elem> {
        a.iter().zip(b).map(|(x, y)| op(x, y)).collect()
    }
}

impl<R: GRing> GRing for PermutationProduct<R> {
    type Elem = Vec<R::Elem>;

    fn name(&self) -> String {
        format!("{}^{}", self.base.name(), self.n())
    }
    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.n()]
    }
    fn one(&self) -> Self::Elem {
        vec![self.base.one(); self.n()]
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.map2(a, b, |x, y| self.base.add(x, y))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.map2(a, b, |x, y| self.base.mul(x, y))
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        vec![self.base.from_int(n); self.n()]
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem {
        (0..self.n()).map(|_| self.base.sample(rng)).collect()
    }
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        a.iter().map(|x| self.base.inverse(x)).collect()
    }
    fn annihilator(&self, a: &Self::Elem) -> Option<Self::Elem> {
        a.iter().enumerate().find_map(|(i, x)| {
            self.base.annihilator(x).map(|w| {
                let mut out = self.zero();
                out[i] = w;
                out
            })
        })
    }
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        // for a product of fields, invariant ideals are the invariant
        // coordinate subsets
        match self.base.invariant_ideals_trivial() {
            Some(true) if self.base.inverse(&self.base.zero()).is_none() => Some(self.points.orbit_count() == 1),
            _ => None,
        }
    }
    fn is_domain(&self) -> Option<bool> {
        if self.n() == 1 {
            self.base.is_domain()
        } else {
            Some(false)
        }
    }
    fn act(&self, g: usize, a: &Self::Elem) -> Self::Elem {
        let mut out = a.clone();
        for (i, x) in a.iter().enumerate() {
            out[self.points.act(g, i)] = self.base.act(g, x);
        }
        out
    }
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        let base = self.base.elements()?;
        let mut out: Vec<Self::Elem> = vec![Vec::new()];
        for _ in 0..self.n() {
            out = out
                .into_iter()
                .flat_map(|v| {
                    base.iter().map(move |x| {
                        let mut w = v.clone();
                        w.push(x.clone());
                        w
                    })
                })
                .collect();
        }
        Some(out)
    }
    fn divide(&self, c: &Self::Elem, a: &Self::Elem) -> Option<Self::Elem> {
        a.iter().zip(c).map(|(x, z)| self.base.divide(z, x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn integers_mod() {
        let r = IntegersMod(6);
        assert_eq!(r.inverse(&5), Some(5));
        assert_eq!(r.inverse(&2), None);
        assert_eq!(r.annihilator(&2), Some(3));
        assert_eq!(r.annihilator(&5), None);
        assert_eq!(r.from_int(&BigInt::from(-1)), 5);
        assert_eq!(IntegersMod(7).invariant_ideals_trivial(), Some(true));
        assert_eq!(r.invariant_ideals_trivial(), Some(false));
    }

    #[test]
    fn swap_product() {
        let c2 = FiniteGroup::parse("C2").unwrap();
        let pts = Arc::new(GSet::transitive(&c2, c2.trivial()));
        let r = PermutationProduct::new(Integers, pts);
        let x = vec![BigInt::from(3), BigInt::from(0)];
        assert_eq!(r.act(1, &x), vec![BigInt::from(0), BigInt::from(3)]);
        assert!(r.annihilator(&x).is_some());
        assert!(r.annihilator(&r.one()).is_none());
        let q = PermutationProduct::new(Rationals, r.points.clone());
        assert_eq!(q.invariant_ideals_trivial(), Some(true));
    }
}
