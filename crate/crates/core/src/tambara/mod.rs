//! Tambara functors presented levelwise: a commutative ring per subgroup H
//! with restriction (ring maps), transfer (additive) and norm
//! (multiplicative) between levels, plus conjugation.
//!
//! The additive and multiplicative parts are semi-Mackey functors through
//! [`Additive`] and [`Multiplicative`]; values on arbitrary G-sets and the
//! structure maps along arbitrary G-maps come from [`TambaraExt`].

pub mod burnside;
pub mod field;
pub mod fixed_point;
pub mod fraction;
pub mod ideal;
pub mod morphism;
pub mod omega;

use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::RngCore;

use crate::decision::{Decision, Tally};
use crate::group::{FiniteGroup, SubgroupId};
use crate::gset::{diagonal_complement, ExponentialDiagram, GMap, GSet};
use crate::mackey::{levels, pull_along, push_along, SemiMackey};

pub trait Tambara: Send + Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn group(&self) -> &Arc<FiniteGroup>;
    fn name(&self) -> String;

    fn zero(&self, h: SubgroupId) -> Self::Elem;
    fn one(&self, h: SubgroupId) -> Self::Elem;
    fn add(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, h: SubgroupId, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn equal(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Decision;

    /// Restriction from level H to level K ≤ H.
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &Self::Elem) -> Self::Elem;
    /// Additive transfer from level K to level H ≥ K.
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &Self::Elem) -> Self::Elem;
    /// Multiplicative transfer from level K to level H ≥ K.
    fn norm(&self, k: SubgroupId, h: SubgroupId, x: &Self::Elem) -> Self::Elem;
    /// Pullback along G/(gHg⁻¹) → G/H.
    fn conjugate(&self, g: usize, h: SubgroupId, x: &Self::Elem) -> Self::Elem;

    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> Self::Elem;

    fn sub(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(h, a, &self.neg(h, b))
    }

    fn from_int(&self, h: SubgroupId, n: &BigInt) -> Self::Elem {
        // double and add
        let mut acc = self.zero(h);
        let mut base = self.one(h);
        let mut m = n.abs();
        let two = BigInt::from(2);
        while !m.is_zero() {
            if m.is_odd() {
                acc = self.add(h, &acc, &base);
            }
            base = self.add(h, &base, &base);
            m = m.div_floor(&two);
        }
        if n.is_negative() {
            self.neg(h, &acc)
        } else {
            acc
        }
    }

    fn is_zero(&self, h: SubgroupId, a: &Self::Elem) -> Decision {
        self.equal(h, a, &self.zero(h))
    }

    fn inverse(&self, _h: SubgroupId, _x: &Self::Elem) -> Decision<Self::Elem> {
        Decision::Unknown
    }

    /// Some `b` with `a·b = c`.
    fn divide(&self, _h: SubgroupId, _c: &Self::Elem, _a: &Self::Elem) -> Decision<Self::Elem> {
        Decision::Unknown
    }

    /// A nonzero `b` with `x·b = 0`; `No` when `x` is a nonzerodivisor.
    fn zero_divisor(&self, _h: SubgroupId, _x: &Self::Elem) -> Decision<Self::Elem> {
        Decision::Unknown
    }

    /// Generators (as an abelian group) of the kernel of the restriction
    /// from level H to the trivial level; `None` when not computable.
    fn restriction_kernel(&self, _h: SubgroupId) -> Option<Vec<Self::Elem>> {
        None
    }

    /// Whether the bottom level has no G-invariant ideals besides 0 and
    /// itself.
    fn invariant_ideals_trivial(&self) -> Option<bool> {
        None
    }

    /// Whether the bottom level is an integral domain.
    fn bottom_is_domain(&self) -> Option<bool> {
        None
    }

    fn elements(&self, _h: SubgroupId) -> Option<Vec<Self::Elem>> {
        None
    }

    fn render(&self, _h: SubgroupId, x: &Self::Elem) -> String {
        format!("{x:?}")
    }
}

macro_rules! forward_tambara {
    ($($ty:ty),*) => {$(
        impl<T: Tambara + ?Sized> Tambara for $ty {
            type Elem = T::Elem;
            fn group(&self) -> &Arc<FiniteGroup> { (**self).group() }
            fn name(&self) -> String { (**self).name() }
            fn zero(&self, h: SubgroupId) -> T::Elem { (**self).zero(h) }
            fn one(&self, h: SubgroupId) -> T::Elem { (**self).one(h) }
            fn add(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem { (**self).add(h, a, b) }
            fn neg(&self, h: SubgroupId, a: &T::Elem) -> T::Elem { (**self).neg(h, a) }
            fn mul(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem { (**self).mul(h, a, b) }
            fn equal(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> Decision { (**self).equal(h, a, b) }
            fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &T::Elem) -> T::Elem { (**self).restrict(h, k, x) }
            fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &T::Elem) -> T::Elem { (**self).transfer(k, h, x) }
            fn norm(&self, k: SubgroupId, h: SubgroupId, x: &T::Elem) -> T::Elem { (**self).norm(k, h, x) }
            fn conjugate(&self, g: usize, h: SubgroupId, x: &T::Elem) -> T::Elem { (**self).conjugate(g, h, x) }
            fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> T::Elem { (**self).sample(h, rng) }
            fn sub(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem { (**self).sub(h, a, b) }
            fn from_int(&self, h: SubgroupId, n: &BigInt) -> T::Elem { (**self).from_int(h, n) }
            fn is_zero(&self, h: SubgroupId, a: &T::Elem) -> Decision { (**self).is_zero(h, a) }
            fn inverse(&self, h: SubgroupId, x: &T::Elem) -> Decision<T::Elem> { (**self).inverse(h, x) }
            fn divide(&self, h: SubgroupId, c: &T::Elem, a: &T::Elem) -> Decision<T::Elem> { (**self).divide(h, c, a) }
            fn zero_divisor(&self, h: SubgroupId, x: &T::Elem) -> Decision<T::Elem> { (**self).zero_divisor(h, x) }
            fn restriction_kernel(&self, h: SubgroupId) -> Option<Vec<T::Elem>> { (**self).restriction_kernel(h) }
            fn invariant_ideals_trivial(&self) -> Option<bool> { (**self).invariant_ideals_trivial() }
            fn bottom_is_domain(&self) -> Option<bool> { (**self).bottom_is_domain() }
            fn elements(&self, h: SubgroupId) -> Option<Vec<T::Elem>> { (**self).elements(h) }
            fn render(&self, h: SubgroupId, x: &T::Elem) -> String { (**self).render(h, x) }
        }
    )*};
}

forward_tambara!(Arc<T>, &T, Box<T>);

/// The additive Mackey functor T^α.
pub struct Additive<T>(pub Arc<T>);

/// The multiplicative semi-Mackey functor T^μ.
pub struct Multiplicative<T>(pub Arc<T>);

impl<T: Tambara> SemiMackey for Additive<T> {
    type Elem = T::Elem;
    fn group(&self) -> &Arc<FiniteGroup> {
        self.0.group()
    }
    fn name(&self) -> String {
        format!("{}^a", self.0.name())
    }
    fn unit(&self, h: SubgroupId) -> T::Elem {
        self.0.zero(h)
    }
    fn combine(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem {
        self.0.add(h, a, b)
    }
    fn equal(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> Decision {
        self.0.equal(h, a, b)
    }
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &T::Elem) -> T::Elem {
        self.0.restrict(h, k, x)
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.0.transfer(k, h, x)
    }
    fn conjugate(&self, g: usize, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.0.conjugate(g, h, x)
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> T::Elem {
        self.0.sample(h, rng)
    }
    fn inverse(&self, h: SubgroupId, x: &T::Elem) -> Decision<T::Elem> {
        Decision::Yes(self.0.neg(h, x))
    }
    fn divide(&self, h: SubgroupId, c: &T::Elem, a: &T::Elem) -> Decision<T::Elem> {
        Decision::Yes(self.0.sub(h, c, a))
    }
    fn elements(&self, h: SubgroupId) -> Option<Vec<T::Elem>> {
        self.0.elements(h)
    }
    fn render(&self, h: SubgroupId, x: &T::Elem) -> String {
        self.0.render(h, x)
    }
}

impl<T: Tambara> SemiMackey for Multiplicative<T> {
    type Elem = T::Elem;
    fn group(&self) -> &Arc<FiniteGroup> {
        self.0.group()
    }
    fn name(&self) -> String {
        format!("{}^m", self.0.name())
    }
    fn unit(&self, h: SubgroupId) -> T::Elem {
        self.0.one(h)
    }
    fn combine(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem {
        self.0.mul(h, a, b)
    }
    fn equal(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> Decision {
        self.0.equal(h, a, b)
    }
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &T::Elem) -> T::Elem {
        self.0.restrict(h, k, x)
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.0.norm(k, h, x)
    }
    fn conjugate(&self, g: usize, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.0.conjugate(g, h, x)
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> T::Elem {
        self.0.sample(h, rng)
    }
    fn inverse(&self, h: SubgroupId, x: &T::Elem) -> Decision<T::Elem> {
        self.0.inverse(h, x)
    }
    fn divide(&self, h: SubgroupId, c: &T::Elem, a: &T::Elem) -> Decision<T::Elem> {
        self.0.divide(h, c, a)
    }
    fn elements(&self, h: SubgroupId) -> Option<Vec<T::Elem>> {
        self.0.elements(h)
    }
    fn render(&self, h: SubgroupId, x: &T::Elem) -> String {
        self.0.render(h, x)
    }
}

/// Values of a Tambara functor on arbitrary G-sets, one entry per orbit.
pub trait TambaraExt: Tambara {
    fn zero_value(&self, x: &GSet) -> Vec<Self::Elem> {
        levels(x).into_iter().map(|h| self.zero(h)).collect()
    }

    fn one_value(&self, x: &GSet) -> Vec<Self::Elem> {
        levels(x).into_iter().map(|h| self.one(h)).collect()
    }

    fn sample_value(&self, x: &GSet, rng: &mut dyn RngCore) -> Vec<Self::Elem> {
        levels(x).into_iter().map(|h| self.sample(h, rng)).collect()
    }

    fn add_values(&self, x: &GSet, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        levels(x).into_iter().zip(a.iter().zip(b)).map(|(h, (u, v))| self.add(h, u, v)).collect()
    }

    fn mul_values(&self, x: &GSet, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        levels(x).into_iter().zip(a.iter().zip(b)).map(|(h, (u, v))| self.mul(h, u, v)).collect()
    }

    fn equal_values(&self, x: &GSet, a: &[Self::Elem], b: &[Self::Elem]) -> Decision {
        levels(x).into_iter().zip(a.iter().zip(b)).fold(Decision::Yes(()), |acc, (h, (u, v))| acc.and(self.equal(h, u, v)))
    }

    fn restrict_along(&self, f: &GMap, y: &[Self::Elem]) -> Vec<Self::Elem> {
        pull_along(f, y, |h, k, e| self.restrict(h, k, e), |g, h, e| self.conjugate(g, h, e))
    }

    fn transfer_along(&self, f: &GMap, x: &[Self::Elem]) -> Vec<Self::Elem> {
        push_along(f, x, |h| self.zero(h), |h, a, b| self.add(h, a, b), |k, h, e| self.transfer(k, h, e), |g, h, e| self.conjugate(g, h, e))
    }

    fn norm_along(&self, f: &GMap, x: &[Self::Elem]) -> Vec<Self::Elem> {
        push_along(f, x, |h| self.one(h), |h, a, b| self.mul(h, a, b), |k, h, e| self.norm(k, h, e), |g, h, e| self.conjugate(g, h, e))
    }

    fn render_value(&self, x: &GSet, v: &[Self::Elem]) -> String {
        let parts: Vec<String> = levels(x).into_iter().zip(v).map(|(h, e)| self.render(h, e)).collect();
        format!("({})", parts.join(", "))
    }
}

impl<T: Tambara + ?Sized> TambaraExt for T {}

/// Checks `f_•(p_+(x)) = q_+(ρ_•(λ*(x)))` on `samples` random `x ∈ T(A)`.
pub fn check_distributive<T: Tambara + ?Sized>(t: &T, d: &ExponentialDiagram, samples: usize, rng: &mut dyn RngCore) -> Tally {
    let mut tally = Tally::new();
    for _ in 0..samples {
        let x = t.sample_value(d.a(), rng);
        let lhs = t.norm_along(&d.f, &t.transfer_along(&d.p, &x));
        let rhs = t.transfer_along(&d.q, &t.norm_along(&d.rho, &t.restrict_along(&d.lambda, &x)));
        tally.record(&t.equal_values(d.y(), &lhs, &rhs), || {
            format!(
                "{}: distributive law for f = {:?}, p = {:?} at x = {}: {} vs {}",
                t.name(),
                d.f,
                d.p,
                t.render_value(d.a(), &x),
                t.render_value(d.y(), &lhs),
                t.render_value(d.y(), &rhs)
            )
        });
    }
    tally
}

/// Checks `f_+(x·f*(y)) = f_+(x)·y` on random samples.
pub fn check_projection_formula<T: Tambara + ?Sized>(t: &T, f: &GMap, samples: usize, rng: &mut dyn RngCore) -> Tally {
    let mut tally = Tally::new();
    for _ in 0..samples {
        let x = t.sample_value(f.source(), rng);
        let y = t.sample_value(f.target(), rng);
        let lhs = t.transfer_along(f, &t.mul_values(f.source(), &x, &t.restrict_along(f, &y)));
        let rhs = t.mul_values(f.target(), &t.transfer_along(f, &x), &y);
        tally.record(&t.equal_values(f.target(), &lhs, &rhs), || format!("{}: projection formula along {:?}", t.name(), f));
    }
    tally
}

/// Ring axioms of every level and additivity/multiplicativity of the
/// structure maps between levels, on samples.
pub fn check_level_rings<T: Tambara + ?Sized>(t: &T, samples: usize, rng: &mut dyn RngCore) -> Tally {
    let g = t.group().clone();
    let mut tally = Tally::new();
    for h in g.subgroups() {
        for _ in 0..samples {
            let (a, b, c) = (t.sample(h, rng), t.sample(h, rng), t.sample(h, rng));
            let lhs = t.mul(h, &a, &t.add(h, &b, &c));
            let rhs = t.add(h, &t.mul(h, &a, &b), &t.mul(h, &a, &c));
            tally.record(&t.equal(h, &lhs, &rhs), || format!("{}: distributivity at {}", t.name(), g.class_name(h)));
            let lhs = t.mul(h, &t.mul(h, &a, &b), &c);
            let rhs = t.mul(h, &a, &t.mul(h, &b, &c));
            tally.record(&t.equal(h, &lhs, &rhs), || format!("{}: associativity at {}", t.name(), g.class_name(h)));
            tally.record(&t.equal(h, &t.mul(h, &a, &b), &t.mul(h, &b, &a)), || {
                format!("{}: commutativity at {}", t.name(), g.class_name(h))
            });
            tally.record(&t.equal(h, &t.mul(h, &a, &t.one(h)), &a), || format!("{}: unit at {}", t.name(), g.class_name(h)));
            tally.record(&t.is_zero(h, &t.add(h, &a, &t.neg(h, &a))), || format!("{}: negation at {}", t.name(), g.class_name(h)));
        }
        for k in g.subgroups().filter(|&k| g.is_subgroup(k, h)) {
            for _ in 0..samples {
                let (a, b) = (t.sample(h, rng), t.sample(h, rng));
                let lhs = t.restrict(h, k, &t.mul(h, &a, &b));
                let rhs = t.mul(k, &t.restrict(h, k, &a), &t.restrict(h, k, &b));
                tally.record(&t.equal(k, &lhs, &rhs), || format!("{}: restriction not multiplicative", t.name()));
                let lhs = t.restrict(h, k, &t.add(h, &a, &b));
                let rhs = t.add(k, &t.restrict(h, k, &a), &t.restrict(h, k, &b));
                tally.record(&t.equal(k, &lhs, &rhs), || format!("{}: restriction not additive", t.name()));
                let (x, y) = (t.sample(k, rng), t.sample(k, rng));
                let lhs = t.transfer(k, h, &t.add(k, &x, &y));
                let rhs = t.add(h, &t.transfer(k, h, &x), &t.transfer(k, h, &y));
                tally.record(&t.equal(h, &lhs, &rhs), || format!("{}: transfer not additive", t.name()));
                let lhs = t.norm(k, h, &t.mul(k, &x, &y));
                let rhs = t.mul(h, &t.norm(k, h, &x), &t.norm(k, h, &y));
                tally.record(&t.equal(h, &lhs, &rhs), || format!("{}: norm not multiplicative", t.name()));
            }
            tally.record(&t.equal(k, &t.restrict(h, k, &t.one(h)), &t.one(k)), || format!("{}: restriction does not preserve 1", t.name()));
            tally.record(&t.equal(h, &t.norm(k, h, &t.one(k)), &t.one(h)), || format!("{}: norm does not preserve 1", t.name()));
        }
    }
    tally
}

/// The pair `(a, s̄)` with `a = q1_•(q2*(s))` over the diagonal complement
/// of `f` and `s̄ = f_•(s)`; then `f*(s̄) = a·s`.
pub fn witness_a<T: Tambara + ?Sized>(t: &T, f: &GMap, s: &[T::Elem]) -> (Vec<T::Elem>, Vec<T::Elem>) {
    let (_, q1, q2) = diagonal_complement(f);
    let a = t.norm_along(&q1, &t.restrict_along(&q2, s));
    let sbar = t.norm_along(f, s);
    (a, sbar)
}

/// Which structure map a [`Faulty`] wrapper corrupts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Adds 1 to every norm between distinct levels.
    Norm,
    /// Adds 1 to every transfer between distinct levels.
    Transfer,
    /// Adds 1 to every restriction between distinct levels.
    Restriction,
}

/// A Tambara functor with one structure map deliberately corrupted, used
/// to confirm that the checks locate failures.
pub struct Faulty<T> {
    pub inner: Arc<T>,
    pub fault: Fault,
}

impl<T: Tambara> Faulty<T> {
    pub fn new(inner: Arc<T>, fault: Fault) -> Self {
        Faulty { inner, fault }
    }

    fn bump(&self, which: Fault, from: SubgroupId, to: SubgroupId, x: T::Elem) -> T::Elem {
        if self.fault == which && from != to {
            self.inner.add(to, &x, &self.inner.one(to))
        } else {
            x
        }
    }
}

impl<T: Tambara> Tambara for Faulty<T> {
    type Elem = T::Elem;
    fn group(&self) -> &Arc<FiniteGroup> {
        self.inner.group()
    }
    fn name(&self) -> String {
        format!("faulty[{:?}]({})", self.fault, self.inner.name())
    }
    fn zero(&self, h: SubgroupId) -> T::Elem {
        self.inner.zero(h)
    }
    fn one(&self, h: SubgroupId) -> T::Elem {
        self.inner.one(h)
    }
    fn add(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem {
        self.inner.add(h, a, b)
    }
    fn neg(&self, h: SubgroupId, a: &T::Elem) -> T::Elem {
        self.inner.neg(h, a)
    }
    fn mul(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> T::Elem {
        self.inner.mul(h, a, b)
    }
    fn equal(&self, h: SubgroupId, a: &T::Elem, b: &T::Elem) -> Decision {
        self.inner.equal(h, a, b)
    }
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &T::Elem) -> T::Elem {
        self.bump(Fault::Restriction, h, k, self.inner.restrict(h, k, x))
    }
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.bump(Fault::Transfer, k, h, self.inner.transfer(k, h, x))
    }
    fn norm(&self, k: SubgroupId, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.bump(Fault::Norm, k, h, self.inner.norm(k, h, x))
    }
    fn conjugate(&self, g: usize, h: SubgroupId, x: &T::Elem) -> T::Elem {
        self.inner.conjugate(g, h, x)
    }
    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> T::Elem {
        self.inner.sample(h, rng)
    }
    fn render(&self, h: SubgroupId, x: &T::Elem) -> String {
        self.inner.render(h, x)
    }
}
