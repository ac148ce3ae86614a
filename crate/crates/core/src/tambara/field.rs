//! Nonzerodivisors, the monomorphic restriction condition (MRC), torsion
//! and the field-like property.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decision::{Decision, Tally};
use crate::error::{Error, Result};
use crate::mackey::subfunctor::{Seed, VALIDATION_SAMPLES};
use crate::tambara::fraction::{Denominators, FractionTambara};
use crate::tambara::Tambara;

/// The seed Z ⊆ T(G/e) of nonzerodivisors, decided by the carrier's
/// zero-divisor test. Fails when the carrier cannot decide it on the unit or
/// on sampled elements.
pub fn nonzerodivisors<T: Tambara + 'static>(t: Arc<T>) -> Result<Seed<T::Elem>> {
    let e = t.group().trivial();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut probes = vec![t.one(e), t.zero(e)];
    probes.extend((0..VALIDATION_SAMPLES).map(|_| t.sample(e, &mut rng)));
    for x in &probes {
        if t.zero_divisor(e, x).is_unknown() {
            return Err(Error::UndecidableCarrier(format!("{}: zero-divisor test undecided at {}", t.name(), t.render(e, x))));
        }
    }
    let candidates: Vec<T::Elem> = match t.elements(e) {
        Some(all) => all,
        None => [-1i64, 2, 3, 5, 7].iter().map(|&n| t.from_int(e, &BigInt::from(n))).collect(),
    };
    let mut generators: Vec<T::Elem> = Vec::new();
    for c in candidates {
        if t.zero_divisor(e, &c).is_no() && !generators.iter().any(|g| t.equal(e, g, &c).is_yes()) {
            generators.push(c);
        }
    }
    let (t1, t2) = (t.clone(), t.clone());
    Ok(Seed::new("Z", move |x| t1.zero_divisor(e, x).is_no(), generators).with_excluded(move |x| t2.zero_divisor(e, x).is_yes()))
}

/// Whether `γ*: T(G/H) → T(G/e)` is injective for every H. Uses the
/// restriction kernel reported by the carrier, or exhaustion on finite
/// levels.
pub fn mrc_check<T: Tambara + ?Sized>(t: &T) -> Result<Tally> {
    let g = t.group().clone();
    let e = g.trivial();
    let mut tally = Tally::new();
    for h in g.subgroups() {
        if let Some(kernel) = t.restriction_kernel(h) {
            for k in kernel {
                tally.record(&t.is_zero(h, &k), || format!("{}: {} at {} restricts to zero", t.name(), t.render(h, &k), g.class_name(h)));
            }
        } else if let Some(all) = t.elements(h) {
            for x in all {
                if t.is_zero(h, &t.restrict(h, e, &x)).is_yes() {
                    tally.record(&t.is_zero(h, &x), || {
                        format!("{}: {} at {} restricts to zero", t.name(), t.render(h, &x), g.class_name(h))
                    });
                }
            }
        } else {
            return Err(Error::UndecidableCarrier(format!("{}: no restriction kernel at {}", t.name(), g.class_name(h))));
        }
    }
    Ok(tally)
}

/// A nonzero `x ∈ T(G/e)` with `n·x = 0`: `n·1` is a zero divisor.
pub fn torsion_witness<T: Tambara + ?Sized>(t: &T, n: usize) -> Decision<T::Elem> {
    let e = t.group().trivial();
    t.zero_divisor(e, &t.from_int(e, &BigInt::from(n)))
}

pub fn torsion_free<T: Tambara + ?Sized>(t: &T, n: usize) -> Decision {
    torsion_witness(t, n).negate()
}

/// The identities `res^G_H tr^G_e(1) = |G:H|·tr^H_e(1)` for every H, and
/// `res^G_e tr^G_e(1) = |G|·1`.
pub fn check_index_identities<T: Tambara + ?Sized>(t: &T) -> Tally {
    let g = t.group().clone();
    let (e, top) = (g.trivial(), g.whole());
    let total = t.transfer(e, top, &t.one(e));
    let mut tally = Tally::new();
    let lhs = t.restrict(top, e, &total);
    tally.record(&t.equal(e, &lhs, &t.from_int(e, &BigInt::from(g.order()))), || {
        format!("{}: res_e tr_e(1) = {} is not |G|", t.name(), t.render(e, &lhs))
    });
    for h in g.subgroups() {
        let lhs = t.restrict(top, h, &total);
        let idx = t.from_int(h, &BigInt::from(g.index(h, top)));
        let rhs = t.mul(h, &idx, &t.transfer(e, h, &t.one(e)));
        tally.record(&t.equal(h, &lhs, &rhs), || {
            format!("{}: at {} res tr(1) = {} but |G:H| tr(1) = {}", t.name(), g.class_name(h), t.render(h, &lhs), t.render(h, &rhs))
        });
    }
    tally
}

/// The two sufficient conditions for `U_Z⁻¹T` to satisfy MRC.
#[derive(Debug)]
pub struct LocMrcReport {
    /// T itself satisfies MRC.
    pub mrc: Decision,
    /// `tr^H_e(1) ∈ U_Z(G/H)` for every H, through the chain
    /// `(|G:H|·1)·tr^H_e(1) = res^G_H(tr^G_e(1))` and `res^G_e tr^G_e(1) = |G|·1 ∈ Z`.
    pub transfers_of_one: Tally,
    /// `T(G/e)` has no |G|-torsion.
    pub torsion_free: Decision,
}

impl LocMrcReport {
    pub fn holds(&self) -> bool {
        self.mrc.is_yes() || self.transfers_of_one.passed()
    }
}

pub fn loc_mrc_conditions<T: Tambara + 'static>(t: &Arc<T>, z: &Denominators<T>) -> LocMrcReport {
    let g = t.group().clone();
    let (e, top) = (g.trivial(), g.whole());
    let mrc = match mrc_check(&**t) {
        Ok(tally) => tally.decision(),
        Err(_) => Decision::Unknown,
    };
    let mut chain = check_index_identities(&**t);
    let total = t.transfer(e, top, &t.one(e));
    let order = t.from_int(e, &BigInt::from(g.order()));
    chain.record(&z.contains(e, &order), || format!("{}: |G|·1 is not in Z", t.name()));
    for h in g.subgroups() {
        let x = t.transfer(e, h, &t.one(e));
        let a = t.from_int(h, &BigInt::from(g.index(h, top)));
        chain.record(&t.equal(h, &t.mul(h, &a, &x), &t.restrict(top, h, &total)), || {
            format!("{}: witness chain broken at {}", t.name(), g.class_name(h))
        });
        chain.record(&z.contains(h, &x), || format!("{}: tr(1) at {} is not in U_Z", t.name(), g.class_name(h)));
    }
    let torsion_free = torsion_free(&**t, g.order());
    LocMrcReport { mrc, transfers_of_one: chain, torsion_free }
}

#[derive(Debug)]
pub struct FieldLikeReport {
    pub mrc: Tally,
    pub invariant_ideals_trivial: bool,
    /// `T^×(G/e) = {s | Π_g g·s ≠ 0}` on samples, when field-like.
    pub units: Option<Tally>,
}

impl FieldLikeReport {
    pub fn field_like(&self) -> bool {
        self.mrc.passed() && self.invariant_ideals_trivial
    }
}

/// MRC together with triviality of the G-invariant ideals of T(G/e). When
/// both hold, the units identity is checked on `samples` elements of T(G/e).
pub fn field_like_check<T: Tambara + ?Sized>(t: &T, samples: usize, rng: &mut dyn RngCore) -> Result<FieldLikeReport> {
    let mrc = mrc_check(t)?;
    let trivial = t
        .invariant_ideals_trivial()
        .ok_or_else(|| Error::UndecidableCarrier(format!("{}: G-invariant ideals of the bottom level", t.name())))?;
    let mut report = FieldLikeReport { mrc, invariant_ideals_trivial: trivial, units: None };
    if report.field_like() {
        report.units = Some(check_units_identity(t, samples, rng));
    }
    Ok(report)
}

/// `s ∈ T(G/e)` is a unit iff `Π_{g∈G} g·s ≠ 0`.
pub fn check_units_identity<T: Tambara + ?Sized>(t: &T, samples: usize, rng: &mut dyn RngCore) -> Tally {
    let g = t.group().clone();
    let e = g.trivial();
    let mut tally = Tally::new();
    for i in 0..samples {
        let s = if i == 0 { t.zero(e) } else { t.sample(e, rng) };
        let prod = g.elements().fold(t.one(e), |acc, a| t.mul(e, &acc, &t.conjugate(a, e, &s)));
        let unit = t.inverse(e, &s).forget();
        let nonzero = t.is_zero(e, &prod).negate();
        let verdict = match (unit, nonzero) {
            (Decision::Unknown, _) | (_, Decision::Unknown) => Decision::Unknown,
            (u, n) => Decision::from_bool(u.is_yes() == n.is_yes()),
        };
        tally.record(&verdict, || format!("{}: units identity fails at {}", t.name(), t.render(e, &s)));
    }
    tally
}

/// MRC witnesses for a fraction: every kernel generator `k` of T is killed
/// by some `t ∈ S`.
pub fn fraction_mrc_witnesses<T: Tambara + 'static>(f: &FractionTambara<T>) -> Tally {
    let g = f.group().clone();
    let mut tally = Tally::new();
    for h in g.subgroups() {
        match f.mrc_witnesses(h) {
            Some(list) => {
                for (k, t) in list {
                    let base = f.base();
                    let verdict = match &t {
                        Decision::Yes(t) => base.is_zero(h, &base.mul(h, t, &k)),
                        Decision::No => Decision::No,
                        Decision::Unknown => Decision::Unknown,
                    };
                    tally.record(&verdict, || format!("no element of S kills {} at {}", base.render(h, &k), g.class_name(h)));
                }
            }
            None => tally.record(&Decision::<()>::Unknown, || format!("{}: no restriction kernel at {}", f.name(), g.class_name(h))),
        }
    }
    tally
}
