use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use tlab_core::lattice::Lattice;
use tlab_core::tambara::burnside::{Burnside, BurnsideElem};
use tlab_core::tambara::omega::{omega_fraction, OmegaLocal};
use tlab_core::tambara::Tambara;
use tlab_core::{Decision, FiniteGroup, SubgroupId};

const NAMES: [&str; 6] = ["C2", "C3", "C4", "C2xC2", "S3", "D8"];

fn burnside(i: usize) -> &'static Burnside {
    static CELLS: OnceLock<Vec<Burnside>> = OnceLock::new();
    &CELLS.get_or_init(|| NAMES.iter().map(|n| Burnside::new(FiniteGroup::parse(n).unwrap())).collect())[i]
}

/// (functor index, level, coefficient pool); the pool is cut to the rank.
fn setting() -> impl Strategy<Value = (usize, usize, Vec<i64>, Vec<i64>, Vec<i64>)> {
    let coeffs = || prop::collection::vec(-6i64..=6, 10);
    (0..NAMES.len(), 0usize..16, coeffs(), coeffs(), coeffs())
}

fn elem(om: &Burnside, h: SubgroupId, pool: &[i64]) -> BurnsideElem {
    pool[..om.rank(h)].iter().map(|&c| BigInt::from(c)).collect()
}

fn level(om: &Burnside, pick: usize) -> SubgroupId {
    let g = om.group();
    SubgroupId(pick % g.subgroup_count())
}

/// A proper subgroup of h when one exists, else h.
fn below(om: &Burnside, h: SubgroupId, pick: usize) -> SubgroupId {
    let g = om.group();
    let subs: Vec<SubgroupId> = g.subgroups().filter(|&k| g.is_subgroup(k, h)).collect();
    subs[pick % subs.len()]
}

fn pointwise(a: &[BigInt], b: &[BigInt], op: impl Fn(&BigInt, &BigInt) -> BigInt) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn burnside_levels_are_commutative_rings((i, pick, a, b, c) in setting()) {
        let om = burnside(i);
        let h = level(om, pick);
        let (x, y, z) = (elem(om, h, &a), elem(om, h, &b), elem(om, h, &c));
        prop_assert_eq!(om.mul(h, &x, &y), om.mul(h, &y, &x));
        prop_assert_eq!(om.mul(h, &om.mul(h, &x, &y), &z), om.mul(h, &x, &om.mul(h, &y, &z)));
        prop_assert_eq!(om.mul(h, &x, &om.add(h, &y, &z)), om.add(h, &om.mul(h, &x, &y), &om.mul(h, &x, &z)));
        prop_assert_eq!(om.mul(h, &om.one(h), &x), x.clone());
        prop_assert!(om.is_zero(h, &om.add(h, &x, &om.neg(h, &x))).is_yes());
    }

    #[test]
    fn ghost_map_is_an_injective_ring_hom((i, pick, a, b, _c) in setting()) {
        let om = burnside(i);
        let h = level(om, pick);
        let (x, y) = (elem(om, h, &a), elem(om, h, &b));
        let (gx, gy) = (om.ghost(h, &x), om.ghost(h, &y));
        prop_assert_eq!(om.ghost(h, &om.mul(h, &x, &y)), pointwise(&gx, &gy, |p, q| p * q));
        prop_assert_eq!(om.ghost(h, &om.add(h, &x, &y)), pointwise(&gx, &gy, |p, q| p + q));
        prop_assert_eq!(om.from_ghost(h, &gx), Some(x.clone()));
        let card = |v: &[BigInt]| -> BigInt { om.index_weights(h).iter().zip(v).map(|(w, c)| w * c).sum() };
        prop_assert_eq!(card(&om.mul(h, &x, &y)), card(&x) * card(&y));
    }

    #[test]
    fn restriction_transfer_and_norm_laws((i, pick, a, b, c) in setting(), sub in 0usize..16) {
        let om = burnside(i);
        let h = level(om, pick);
        let k = below(om, h, sub);
        let (x, y) = (elem(om, k, &a), elem(om, k, &b));
        let z = elem(om, h, &c);
        // restriction is a ring hom
        prop_assert_eq!(om.restrict(h, k, &om.mul(h, &z, &z)), om.mul(k, &om.restrict(h, k, &z), &om.restrict(h, k, &z)));
        // Frobenius reciprocity
        prop_assert_eq!(
            om.transfer(k, h, &om.mul(k, &x, &om.restrict(h, k, &z))),
            om.mul(h, &om.transfer(k, h, &x), &z)
        );
        // transfer is additive, norm multiplicative and unital
        prop_assert_eq!(om.transfer(k, h, &om.add(k, &x, &y)), om.add(h, &om.transfer(k, h, &x), &om.transfer(k, h, &y)));
        prop_assert_eq!(om.norm(k, h, &om.mul(k, &x, &y)), om.mul(h, &om.norm(k, h, &x), &om.norm(k, h, &y)));
        prop_assert_eq!(om.norm(k, h, &om.one(k)), om.one(h));
    }

    #[test]
    fn lattice_reduction_is_canonical(
        gens in prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 0..4),
        v in prop::collection::vec(-50i64..=50, 4),
        coeffs in prop::collection::vec(-3i64..=3, 4),
    ) {
        let big = |u: &[i64]| u.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        let gens: Vec<Vec<BigInt>> = gens.iter().map(|g| big(g)).collect();
        let lat = Lattice::span(4, gens.clone());
        let v = big(&v);
        let r = lat.reduce(&v);
        prop_assert_eq!(lat.reduce(&r), r.clone());
        prop_assert!(lat.contains(&pointwise(&v, &r, |a, b| a - b)));
        let mut w = v.clone();
        for (g, &c) in gens.iter().zip(&coeffs) {
            w = pointwise(&w, g, |a, b| a + b * c);
        }
        prop_assert_eq!(lat.reduce(&w), r);
        for g in &gens {
            prop_assert!(lat.contains(g));
        }
    }

    #[test]
    fn decision_conjunction(a in 0u8..3, b in 0u8..3, c in 0u8..3) {
        let d = |n: u8| match n { 0 => Decision::Yes(()), 1 => Decision::No, _ => Decision::Unknown };
        prop_assert_eq!(d(a).and(d(b)), d(b).and(d(a)));
        prop_assert_eq!(d(a).and(d(b)).and(d(c)), d(a).and(d(b).and(d(c))));
        prop_assert_eq!(d(a).and(Decision::Yes(())), d(a));
        prop_assert_eq!(d(a).and(Decision::No), Decision::No);
        prop_assert_eq!(d(a).negate().negate(), d(a));
    }

    #[test]
    fn fraction_equality_is_an_equivalence(
        n1 in prop::collection::vec(-5i64..=5, 2),
        s1 in prop::collection::vec(-5i64..=5, 2),
        t in prop::collection::vec(-5i64..=5, 2),
    ) {
        let f = fractions_c2();
        let g = f.group().clone();
        let top = g.whole();
        let big = |u: &[i64]| u.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
        let (n1, s1, t) = (big(&n1), big(&s1), big(&t));
        let om = f.base();
        let in_u = |s: &BurnsideElem| !om.restrict(top, g.trivial(), s)[0].is_zero();
        prop_assume!(in_u(&s1) && in_u(&t));
        let x = f.fraction(top, n1.clone(), s1.clone()).unwrap();
        let y = f.fraction(top, om.mul(top, &n1, &t), om.mul(top, &s1, &t)).unwrap();
        prop_assert!(f.equal(top, &x, &x).is_yes());
        prop_assert_eq!(f.equal(top, &x, &y), f.equal(top, &y, &x));
        prop_assert!(f.equal(top, &x, &y).is_yes());
    }
}

fn fractions_c2() -> Arc<OmegaLocal> {
    static F: OnceLock<Arc<OmegaLocal>> = OnceLock::new();
    F.get_or_init(|| Arc::new(omega_fraction(&FiniteGroup::parse("C2").unwrap()).unwrap())).clone()
}
