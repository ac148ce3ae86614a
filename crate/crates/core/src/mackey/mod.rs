//! Semi-Mackey functors presented levelwise.
//!
//! A functor is given by one carrier per subgroup H (its value at G/H)
//! together with restriction, transfer and conjugation between levels. The
//! value at an arbitrary G-set is the product of the levels of its orbits,
//! each taken at the stabilizer of the orbit's base point, and structure
//! maps along arbitrary G-maps are assembled orbit by orbit.

pub mod completion;
pub mod fixed;
pub mod fraction;
pub mod morphism;
pub mod subfunctor;

use std::fmt::Debug;
use std::sync::Arc;

use rand::RngCore;

use crate::decision::{Decision, Tally};
use crate::group::{FiniteGroup, SubgroupId};
use crate::gset::{pullback, GMap, GSet};

pub trait SemiMackey: Send + Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn group(&self) -> &Arc<FiniteGroup>;
    fn name(&self) -> String;

    fn unit(&self, h: SubgroupId) -> Self::Elem;
    fn combine(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn equal(&self, h: SubgroupId, a: &Self::Elem, b: &Self::Elem) -> Decision;

    /// Restriction from level H to level K, for K ≤ H.
    fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &Self::Elem) -> Self::Elem;
    /// Transfer from level K to level H, for K ≤ H.
    fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &Self::Elem) -> Self::Elem;
    /// Pullback along G/(gHg⁻¹) → G/H; lands in level gHg⁻¹.
    fn conjugate(&self, g: usize, h: SubgroupId, x: &Self::Elem) -> Self::Elem;

    fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> Self::Elem;

    fn inverse(&self, _h: SubgroupId, _x: &Self::Elem) -> Decision<Self::Elem> {
        Decision::Unknown
    }

    /// Some `b` with `a·b = c`.
    fn divide(&self, _h: SubgroupId, _c: &Self::Elem, _a: &Self::Elem) -> Decision<Self::Elem> {
        Decision::Unknown
    }

    /// All elements of a finite level.
    fn elements(&self, _h: SubgroupId) -> Option<Vec<Self::Elem>> {
        None
    }

    fn render(&self, _h: SubgroupId, x: &Self::Elem) -> String {
        format!("{x:?}")
    }
}

macro_rules! forward_semi_mackey {
    ($($ty:ty),*) => {$(
        impl<M: SemiMackey + ?Sized> SemiMackey for $ty {
            type Elem = M::Elem;
            fn group(&self) -> &Arc<FiniteGroup> { (**self).group() }
            fn name(&self) -> String { (**self).name() }
            fn unit(&self, h: SubgroupId) -> M::Elem { (**self).unit(h) }
            fn combine(&self, h: SubgroupId, a: &M::Elem, b: &M::Elem) -> M::Elem { (**self).combine(h, a, b) }
            fn equal(&self, h: SubgroupId, a: &M::Elem, b: &M::Elem) -> Decision { (**self).equal(h, a, b) }
            fn restrict(&self, h: SubgroupId, k: SubgroupId, x: &M::Elem) -> M::Elem { (**self).restrict(h, k, x) }
            fn transfer(&self, k: SubgroupId, h: SubgroupId, x: &M::Elem) -> M::Elem { (**self).transfer(k, h, x) }
            fn conjugate(&self, g: usize, h: SubgroupId, x: &M::Elem) -> M::Elem { (**self).conjugate(g, h, x) }
            fn sample(&self, h: SubgroupId, rng: &mut dyn RngCore) -> M::Elem { (**self).sample(h, rng) }
            fn inverse(&self, h: SubgroupId, x: &M::Elem) -> Decision<M::Elem> { (**self).inverse(h, x) }
            fn divide(&self, h: SubgroupId, c: &M::Elem, a: &M::Elem) -> Decision<M::Elem> { (**self).divide(h, c, a) }
            fn elements(&self, h: SubgroupId) -> Option<Vec<M::Elem>> { (**self).elements(h) }
            fn render(&self, h: SubgroupId, x: &M::Elem) -> String { (**self).render(h, x) }
        }
    )*};
}

forward_semi_mackey!(Arc<M>, &M, Box<M>);

/// The level of each orbit of `x`: the stabilizer of its base point.
pub fn levels(x: &GSet) -> Vec<SubgroupId> {
    x.orbits().orbits.iter().map(|o| o.stabilizer).collect()
}

/// Contravariant evaluation along `f: X → Y` from per-level maps.
pub fn pull_along<E>(
    f: &GMap,
    y: &[E],
    restrict: impl Fn(SubgroupId, SubgroupId, &E) -> E,
    conjugate: impl Fn(usize, SubgroupId, &E) -> E,
) -> Vec<E> {
    let td = f.target().orbits();
    assert_eq!(y.len(), td.orbits.len(), "value does not match the target orbits");
    f.orbit_components()
        .into_iter()
        .map(|c| {
            let k = td.orbits[c.target_orbit].stabilizer;
            let moved = conjugate(c.twist, k, &y[c.target_orbit]);
            restrict(c.through, c.source_orbit, &moved)
        })
        .collect()
}

/// Covariant evaluation along `f: X → Y`: contributions of all source
/// orbits over a target orbit are combined, starting from `empty`.
pub fn push_along<E>(
    f: &GMap,
    x: &[E],
    empty: impl Fn(SubgroupId) -> E,
    combine: impl Fn(SubgroupId, &E, &E) -> E,
    transfer: impl Fn(SubgroupId, SubgroupId, &E) -> E,
    conjugate: impl Fn(usize, SubgroupId, &E) -> E,
) -> Vec<E> {
    let group = f.group();
    let sd = f.source().orbits();
    assert_eq!(x.len(), sd.orbits.len(), "value does not match the source orbits");
    let td = f.target().orbits();
    let mut acc: Vec<E> = td.orbits.iter().map(|o| empty(o.stabilizer)).collect();
    for (i, c) in f.orbit_components().into_iter().enumerate() {
        let up = transfer(c.source_orbit, c.through, &x[i]);
        // G/L → G/K is an isomorphism; pushing along it is pulling back
        // along its inverse, the conjugation by a⁻¹
        let moved = conjugate(group.inv(c.twist), c.through, &up);
        let k = td.orbits[c.target_orbit].stabilizer;
        acc[c.target_orbit] = combine(k, &acc[c.target_orbit], &moved);
    }
    acc
}

/// Values of `M` on arbitrary G-sets.
pub trait SemiMackeyExt: SemiMackey {
    fn unit_value(&self, x: &GSet) -> Vec<Self::Elem> {
        levels(x).into_iter().map(|h| self.unit(h)).collect()
    }

    fn sample_value(&self, x: &GSet, rng: &mut dyn RngCore) -> Vec<Self::Elem> {
        levels(x).into_iter().map(|h| self.sample(h, rng)).collect()
    }

    fn combine_values(&self, x: &GSet, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        levels(x).into_iter().zip(a.iter().zip(b)).map(|(h, (u, v))| self.combine(h, u, v)).collect()
    }

    fn equal_values(&self, x: &GSet, a: &[Self::Elem], b: &[Self::Elem]) -> Decision {
        levels(x).into_iter().zip(a.iter().zip(b)).fold(Decision::Yes(()), |acc, (h, (u, v))| acc.and(self.equal(h, u, v)))
    }

    fn restrict_along(&self, f: &GMap, y: &[Self::Elem]) -> Vec<Self::Elem> {
        pull_along(f, y, |h, k, e| self.restrict(h, k, e), |g, h, e| self.conjugate(g, h, e))
    }

    fn transfer_along(&self, f: &GMap, x: &[Self::Elem]) -> Vec<Self::Elem> {
        push_along(
            f,
            x,
            |h| self.unit(h),
            |h, a, b| self.combine(h, a, b),
            |k, h, e| self.transfer(k, h, e),
            |g, h, e| self.conjugate(g, h, e),
        )
    }

    fn render_value(&self, x: &GSet, v: &[Self::Elem]) -> String {
        let parts: Vec<String> = levels(x).into_iter().zip(v).map(|(h, e)| self.render(h, e)).collect();
        format!("({})", parts.join(", "))
    }
}

impl<M: SemiMackey + ?Sized> SemiMackeyExt for M {}

/// Checks `g* ∘ f_* = p2_* ∘ p1*` on the pullback of `f: X → Y` and
/// `g: Z → Y`, for `samples` random elements of M(X).
pub fn check_mackey_square<M: SemiMackey + ?Sized>(m: &M, f: &GMap, g: &GMap, samples: usize, rng: &mut dyn RngCore) -> Tally {
    let (_, p1, p2) = pullback(f, g);
    let mut tally = Tally::new();
    for _ in 0..samples {
        let x = m.sample_value(f.source(), rng);
        let lhs = m.restrict_along(g, &m.transfer_along(f, &x));
        let rhs = m.transfer_along(&p2, &m.restrict_along(&p1, &x));
        let d = m.equal_values(g.source(), &lhs, &rhs);
        tally.record(&d, || {
            format!(
                "{}: Mackey square {:?} / {:?} on x = {}: {} vs {}",
                m.name(),
                f,
                g,
                m.render_value(f.source(), &x),
                m.render_value(g.source(), &lhs),
                m.render_value(g.source(), &rhs)
            )
        });
    }
    tally
}

/// Functoriality of the level data: composites of restrictions, of
/// transfers and of conjugations, and triviality of conjugation by
/// elements of H on level H.
pub fn check_level_functoriality<M: SemiMackey + ?Sized>(m: &M, samples: usize, rng: &mut dyn RngCore) -> Tally {
    let g = m.group().clone();
    let mut tally = Tally::new();
    let subs: Vec<SubgroupId> = g.subgroups().collect();
    for &h in &subs {
        for _ in 0..samples {
            let x = m.sample(h, rng);
            for &e in g.subgroup(h).members() {
                let d = m.equal(h, &m.conjugate(e, h, &x), &x);
                tally.record(&d, || format!("{}: conjugation by {e} acts on its own level", m.name()));
            }
            let a = rng.next_u32() as usize % g.order();
            let b = rng.next_u32() as usize % g.order();
            // c_{ab} = c_a after c_b in the pullback convention
            let ab = g.mul(a, b);
            let lhs = m.conjugate(ab, h, &x);
            let rhs = m.conjugate(a, g.conjugate(b, h), &m.conjugate(b, h, &x));
            tally.record(&m.equal(g.conjugate(ab, h), &lhs, &rhs), || format!("{}: conjugations do not compose", m.name()));
        }
        for &l in subs.iter().filter(|&&l| g.is_subgroup(l, h)) {
            for &k in subs.iter().filter(|&&k| g.is_subgroup(k, l)) {
                for _ in 0..samples {
                    let x = m.sample(h, rng);
                    let two = m.restrict(l, k, &m.restrict(h, l, &x));
                    tally.record(&m.equal(k, &two, &m.restrict(h, k, &x)), || format!("{}: restrictions do not compose", m.name()));
                    let y = m.sample(k, rng);
                    let two = m.transfer(l, h, &m.transfer(k, l, &y));
                    tally.record(&m.equal(h, &two, &m.transfer(k, h, &y)), || format!("{}: transfers do not compose", m.name()));
                }
            }
        }
    }
    tally
}
