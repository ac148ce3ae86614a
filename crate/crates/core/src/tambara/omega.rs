//! The Burnside functor localized at its nonzerodivisors, its comparison
//! with P_Q, and the quotient Ω/ℐ₍₀₎ ≅ P_Z through the marks morphism.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, RngCore};

use crate::decision::{Decision, Tally};
use crate::error::Result;
use crate::group::{FiniteGroup, SubgroupId};
use crate::lattice::{kernel, Lattice};
use crate::mackey::fraction::Frac;
use crate::mackey::subfunctor::{build_l, build_u, TopHintFn};
use crate::ring::{Integers, Rationals};
use crate::tambara::burnside::{Burnside, BurnsideElem};
use crate::tambara::field::nonzerodivisors;
use crate::tambara::fixed_point::FixedPoint;
use crate::tambara::fraction::{Denominators, FractionTambara};
use crate::tambara::ideal::{ideal_from_level, localized_ideal_iso, LevelIdeal, LocalizedIdealIso, QuotientTambara, TambaraIdeal};
use crate::tambara::morphism::{marks_to_rationals, universal_factorization, TambaraMorphism};
use crate::tambara::{Multiplicative, Tambara};

pub type OmegaLocal = FractionTambara<Burnside>;

fn bottom_value(om: &Burnside, h: SubgroupId, x: &BurnsideElem) -> BigInt {
    let e = om.group().trivial();
    om.restrict(h, e, x)[0].clone()
}

/// U_Z for Ω: `x ∈ U_Z(G/H)` iff `res_e(x) ≠ 0`. Equalities are decided by
/// the complete annihilator `tr^H_e(1)`, which kills `d` exactly when
/// `res_e(d) = 0`.
pub fn omega_u_z(om: Arc<Burnside>) -> Result<Denominators<Burnside>> {
    let seed = nonzerodivisors(om.clone())?;
    let g = om.group().clone();
    let (e, top) = (g.trivial(), g.whole());
    let om2 = om.clone();
    // with t = [G/e], res_H(t) = |G:H|·[H/e] is often divisible by x
    let hint: TopHintFn<BurnsideElem> = Arc::new(move |h, x| {
        let t = om2.transfer(e, top, &om2.one(e));
        match om2.divide(h, &om2.restrict(top, h, &t), x) {
            Decision::Yes(a) => vec![(a, t)],
            _ => Vec::new(),
        }
    });
    let mut u = build_u(Arc::new(Multiplicative(om.clone())), &seed, Some(hint))?;
    let om3 = om.clone();
    u.annihilator =
        Some(Arc::new(
            move |h, d| {
                if bottom_value(&om3, h, d).is_zero() {
                    Decision::Yes(om3.transfer(e, h, &om3.one(e)))
                } else {
                    Decision::No
                }
            },
        ));
    Ok(u.with_name("U_Z"))
}

/// L_Z for Ω: the norms `N^H_e(s)` of nonzero integers. Preimages are the
/// `|H|`-th roots of `res_e(x)`. Norms of nonzero integers have nonzero
/// ghost coordinates, so they are nonzerodivisors.
pub fn omega_l_z(om: Arc<Burnside>) -> Result<Denominators<Burnside>> {
    let seed = nonzerodivisors(om.clone())?;
    let g = om.group().clone();
    let e = g.trivial();
    let om2 = om.clone();
    let hint = Arc::new(move |h: SubgroupId, x: &BurnsideElem| {
        let r = bottom_value(&om2, h, x);
        let n = g.subgroup(h).order() as u32;
        if r.is_zero() || (r.is_negative() && n.is_multiple_of(2)) {
            return Vec::new();
        }
        let root = r.abs().nth_root(n);
        if root.pow(n) != r.abs() {
            return Vec::new();
        }
        let s = if r.is_negative() { -root } else { root };
        vec![vec![s.clone()], vec![-s]]
    });
    let mut l = build_l(Arc::new(Multiplicative(om.clone())), &seed, Some(hint), 0)?;
    // a·x ∈ L forces x to be a nonzerodivisor, since norms of nonzero
    // integers have no zero marks
    let om4 = om.clone();
    l.excluded = Some(Arc::new(move |h, x| om4.zero_divisor(h, x).is_yes()));
    // for a nonzerodivisor x, N(s) with s = |H|·Π_K φ_K(x) is a multiple
    // of x: the ghost quotient is divisible by |H|, which kills the
    // cokernel of the ghost map
    let om5 = om.clone();
    l.multiples = Some(Arc::new(move |h, x| {
        let order = BigInt::from(om5.group().subgroup(h).order());
        let s = om5.ghost(h, x).iter().fold(order, |acc, v| acc * v.abs());
        if s.is_zero() {
            return Vec::new();
        }
        vec![om5.norm(e, h, &vec![s])]
    }));
    let om3 = om.clone();
    l.annihilator =
        Some(Arc::new(move |h, d: &BurnsideElem| if d.iter().all(Zero::is_zero) { Decision::Yes(om3.one(h)) } else { Decision::No }));
    Ok(l.with_name("L_Z"))
}

/// `U_Z⁻¹Ω`.
pub fn omega_fraction(group: &Arc<FiniteGroup>) -> Result<OmegaLocal> {
    let om = Arc::new(Burnside::new(group.clone()));
    let mut f = FractionTambara::new(omega_u_z(om)?);
    f.total_quotient_at_bottom = true;
    Ok(f)
}

pub fn omega_localization(group: &Arc<FiniteGroup>) -> Result<Arc<OmegaLocal>> {
    omega_fraction(group).map(Arc::new)
}

/// θ: `U_Z⁻¹Ω → P_Q`, `x/s ↦ ℘(x)/℘(s)`.
pub fn theta(frac: Arc<OmegaLocal>) -> Result<TambaraMorphism<OmegaLocal, FixedPoint<Rationals>>> {
    let phi = marks_to_rationals(frac.base().clone());
    let mut t = universal_factorization(&phi, frac)?;
    t.name = "theta".into();
    Ok(t)
}

/// ℐ₍₀₎ ⊆ Ω.
pub fn zero_ideal(om: Arc<Burnside>) -> Result<TambaraIdeal<Burnside>> {
    ideal_from_level(om.clone(), LevelIdeal::zero(om))
}

/// Ω/ℐ₍₀₎ with canonical representatives modulo the lattice ℐ₍₀₎(G/H).
pub fn omega_mrc_quotient(om: Arc<Burnside>) -> Result<Arc<QuotientTambara<Burnside>>> {
    let ideal = zero_ideal(om.clone())?;
    let g = om.group().clone();
    let lattices: Vec<Lattice> = g.subgroups().map(|h| Lattice::span(om.rank(h), ideal.generators(h))).collect();
    Ok(Arc::new(QuotientTambara::new(ideal).with_reducer(move |h, x| lattices[h.0].reduce(x))))
}

/// The kernel of `℘_H` as a lattice, from the index weights.
pub fn marks_kernel(om: &Burnside, h: SubgroupId) -> Lattice {
    let row = om.index_weights(h);
    Lattice::span(om.rank(h), kernel(&[row], om.rank(h)))
}

/// `ker ℘_H = ℐ₍₀₎(G/H)` at every level: equal canonical bases, equal
/// ranks, and membership of generators in both directions.
pub fn check_marks_kernel(om: &Burnside, ideal: &TambaraIdeal<Burnside>) -> Tally {
    let g = om.group().clone();
    let mut tally = Tally::new();
    for h in g.subgroups() {
        let k = marks_kernel(om, h);
        let i = Lattice::span(om.rank(h), ideal.generators(h));
        tally.check(k.rank() == i.rank(), || format!("rank of ker marks {} vs ideal {} at {}", k.rank(), i.rank(), g.class_name(h)));
        tally.check(k == i, || format!("canonical bases differ at {}", g.class_name(h)));
        for b in k.basis() {
            tally.record(&ideal.contains(h, b), || format!("kernel vector {b:?} outside the ideal"));
        }
        for b in i.basis() {
            tally.check(om.index_weights(h).iter().zip(b).map(|(w, c)| w * c).sum::<BigInt>().is_zero(), || {
                format!("ideal generator {b:?} has nonzero marks")
            });
        }
    }
    tally
}

/// ℘ descended to `Ω/ℐ₍₀₎ → P_Z`.
pub fn descended_marks(q: Arc<QuotientTambara<Burnside>>) -> TambaraMorphism<QuotientTambara<Burnside>, FixedPoint<Integers>> {
    let om = q.base().clone();
    let target = Arc::new(FixedPoint::new(om.group().clone(), Integers));
    TambaraMorphism::new(q, target, "marks mod I(0)", move |h, x: &BurnsideElem| {
        om.index_weights(h).iter().zip(x).map(|(w, c)| w * c).sum()
    })
}

/// The descended marks map is a Tambara morphism on basis classes and is
/// bijective: `n ↦ [n·1]` is a two-sided inverse on basis classes and on
/// the sampled integers.
pub fn check_descended_iso(q: &Arc<QuotientTambara<Burnside>>, samples: usize, rng: &mut dyn RngCore) -> Tally {
    let om = q.base().clone();
    let g = om.group().clone();
    let m = descended_marks(q.clone());
    let basis = |h: SubgroupId| (0..om.rank(h)).map(|j| q.reduce(h, &om.basis(h, j))).collect();
    let mut tally = m.check_on(basis);
    let inverse = |h: SubgroupId, n: &BigInt| q.reduce(h, &om.from_int(h, n));
    for h in g.subgroups() {
        for j in 0..om.rank(h) {
            let b = q.reduce(h, &om.basis(h, j));
            tally.record(&q.equal(h, &inverse(h, &m.apply(h, &b)), &b), || format!("{} is not recovered from its marks", om.label(h, j)));
        }
        for _ in 0..samples {
            let n = BigInt::from(rng.gen_range(-50i64..=50));
            tally.check(m.apply(h, &inverse(h, &n)) == n, || format!("{n} is not recovered at {}", g.class_name(h)));
        }
    }
    tally
}

/// Settings for [`verify_omega_localization`].
#[derive(Clone, Debug)]
pub struct OmegaConfig {
    pub naturality_samples: usize,
    pub rationals_per_level: usize,
    pub kernel_samples: usize,
}

impl Default for OmegaConfig {
    fn default() -> Self {
        OmegaConfig { naturality_samples: 200, rationals_per_level: 50, kernel_samples: 50 }
    }
}

#[derive(Debug)]
pub struct OmegaReport {
    /// Per level: the class name and the identified ring ("Q" when both
    /// surjectivity and injectivity were certified there).
    pub levels: Vec<(String, String)>,
    pub naturality: Tally,
    pub surjectivity: Tally,
    pub injectivity: Tally,
}

impl OmegaReport {
    pub fn passed(&self) -> bool {
        self.naturality.passed() && self.surjectivity.passed() && self.injectivity.passed()
    }
}

fn sample_rational(rng: &mut dyn RngCore) -> (BigInt, BigInt) {
    let a = BigInt::from(rng.gen_range(-60i64..=60));
    let mut b = BigInt::from(rng.gen_range(1i64..=30));
    if rng.gen_bool(0.5) {
        b = -b;
    }
    (a, b)
}

/// Certifies `U_Z⁻¹Ω ≅ P_Q` through θ: (a) naturality of θ on sampled
/// (map, element) pairs; (b) preimages `(a·1)/(b·1)` of sampled rationals
/// at every level; (c) for sampled `x` with `℘(x) = 0`, the element
/// `t = tr^H_e(1) ∈ U_Z(G/H)` satisfies `t·x = tr(res(x)) = 0`.
pub fn verify_omega_localization(group: &Arc<FiniteGroup>, cfg: &OmegaConfig, rng: &mut dyn RngCore) -> Result<OmegaReport> {
    let frac = omega_localization(group)?;
    let th = theta(frac.clone())?;
    let om = frac.base().clone();
    let s = frac.denominators();
    let g = group.clone();
    let e = g.trivial();

    let naturality = th.check_sampled(cfg.naturality_samples, rng);

    let mut levels = Vec::new();
    let mut surjectivity = Tally::new();
    let mut injectivity = Tally::new();
    for h in g.subgroups() {
        let before = (surjectivity.failures.len() + surjectivity.undecided.len(), injectivity.failures.len() + injectivity.undecided.len());
        for _ in 0..cfg.rationals_per_level {
            let (a, b) = sample_rational(rng);
            let den = om.from_int(h, &b);
            surjectivity.record(&s.contains(h, &den), || format!("{b}·1 is not in U_Z at {}", g.class_name(h)));
            let pre = Frac::new(om.from_int(h, &a), den);
            let target = BigRational::new(a.clone(), b.clone());
            surjectivity
                .check(th.apply(h, &pre) == target, || format!("theta({}) is not {target} at {}", frac.render(h, &pre), g.class_name(h)));
        }
        let t = om.transfer(e, h, &om.one(e));
        injectivity.record(&s.contains(h, &t), || format!("tr(1) is not in U_Z at {}", g.class_name(h)));
        let weights = om.index_weights(h);
        for _ in 0..cfg.kernel_samples {
            let y = om.sample(h, rng);
            let m: BigInt = weights.iter().zip(&y).map(|(w, c)| w * c).sum();
            let x = om.sub(h, &y, &om.from_int(h, &m));
            let den = om.transfer(e, h, &om.from_int(e, &BigInt::from(rng.gen_range(1i64..=5))));
            let z = Frac::new(x.clone(), den);
            injectivity.check(th.apply(h, &z).is_zero(), || "sampled kernel element has nonzero image".to_string());
            let tx = om.mul(h, &t, &x);
            injectivity.check(tx.iter().all(Zero::is_zero), || {
                format!("tr(1)·{} = {} at {}", om.render(h, &x), om.render(h, &tx), g.class_name(h))
            });
            // the projection formula: t·x = tr(res(x)) and res(x) = 0
            let via = om.transfer(e, h, &om.restrict(h, e, &x));
            injectivity.check(via == tx, || format!("projection formula fails at {}", g.class_name(h)));
            injectivity.record(&frac.is_zero(h, &z), || format!("{} is not zero", frac.render(h, &z)));
        }
        let after = (surjectivity.failures.len() + surjectivity.undecided.len(), injectivity.failures.len() + injectivity.undecided.len());
        let ring = if before == after { "Q" } else { "?" };
        levels.push((g.class_name(h), ring.to_string()));
    }
    Ok(OmegaReport { levels, naturality, surjectivity, injectivity })
}

/// Two constructions of the factorization of ℘ through `U_Z⁻¹Ω` agree and
/// both satisfy `φ̃∘ℓ = φ`, on `samples` elements per level.
pub fn check_universal_property(group: &Arc<FiniteGroup>, samples: usize, rng: &mut dyn RngCore) -> Result<Tally> {
    use crate::tambara::morphism::factorization_via_certificates;
    let frac = omega_localization(group)?;
    let phi = marks_to_rationals(frac.base().clone());
    let f1 = universal_factorization(&phi, frac.clone())?;
    let f2 = factorization_via_certificates(&phi, frac.clone())?;
    let om = frac.base().clone();
    let mut tally = Tally::new();
    for h in group.subgroups() {
        for _ in 0..samples {
            let x = om.sample(h, rng);
            let l = frac.ell(h, &x);
            tally
                .check(f1.apply(h, &l) == phi.apply(h, &x), || format!("factorization after l differs from marks at {}", om.render(h, &x)));
            let z = frac.sample(h, rng);
            tally.check(f1.apply(h, &z) == f2.apply(h, &z), || format!("constructions disagree at {}", frac.render(h, &z)));
        }
    }
    Ok(tally)
}

/// `υ: S̄⁻¹(Ω/ℐ₍₀₎) → U_Z⁻¹Ω/U_Z⁻¹ℐ₍₀₎` for the zero ideal.
pub fn zero_ideal_iso(group: &Arc<FiniteGroup>, search_degree: usize) -> Result<Arc<LocalizedIdealIso<Burnside>>> {
    let frac = omega_localization(group)?;
    let q = omega_mrc_quotient(frac.base().clone())?;
    Ok(Arc::new(localized_ideal_iso(frac, q, search_degree)?))
}

fn marks_ratio(om: &Burnside, h: SubgroupId, z: &Frac<BurnsideElem>) -> Option<BigRational> {
    let w = om.index_weights(h);
    let m = |x: &BurnsideElem| w.iter().zip(x).map(|(a, b)| a * b).sum::<BigInt>();
    let den = m(&z.den);
    (!den.is_zero()).then(|| BigRational::new(m(&z.num), den))
}

/// Certifies υ bijective on samples with the marks oracle `x/s ↦ ℘(x)/℘(s)`,
/// which is defined on both sides because ℘ kills ℐ₍₀₎: υ and υ⁻¹
/// preserve the oracle value, and on each side tri-state equality of
/// sampled pairs agrees with equality of oracle values. With the oracle
/// injective, preservation makes υ injective and υ∘υ⁻¹ = id makes it onto.
pub fn check_upsilon_with_marks(iso: &LocalizedIdealIso<Burnside>, samples: usize, rng: &mut dyn RngCore) -> Tally {
    let om = iso.fraction.base().clone();
    let g = om.group().clone();
    let (lq, ql) = (&iso.local_quotient, &iso.quotient_of_local);
    let mut tally = Tally::new();
    for h in g.subgroups() {
        let zs: Vec<_> = (0..samples).map(|_| lq.sample(h, rng)).collect();
        let ws: Vec<_> = (0..samples).map(|_| ql.sample(h, rng)).collect();
        for z in &zs {
            let u = iso.upsilon(h, z);
            let (a, b) = (marks_ratio(&om, h, z), marks_ratio(&om, h, &u));
            tally.check(a.is_some() && a == b, || format!("upsilon changes marks of {} at {}", lq.render(h, z), g.class_name(h)));
        }
        for w in &ws {
            let v = iso.upsilon_inverse(h, w);
            tally.check(marks_ratio(&om, h, w) == marks_ratio(&om, h, &v), || {
                format!("upsilon^-1 changes marks of {} at {}", ql.render(h, w), g.class_name(h))
            });
            tally.record(&ql.equal(h, &iso.upsilon(h, &v), w), || format!("{} has no preimage at {}", ql.render(h, w), g.class_name(h)));
        }
        for pair in zs.windows(2) {
            let same = marks_ratio(&om, h, &pair[0]) == marks_ratio(&om, h, &pair[1]);
            let d = lq.equal(h, &pair[0], &pair[1]);
            tally.check(!d.is_unknown() && d.is_yes() == same, || format!("equality disagrees with marks at {}", g.class_name(h)));
            let d = ql.equal(h, &iso.upsilon(h, &pair[0]), &iso.upsilon(h, &pair[1]));
            tally.check(!d.is_unknown() && d.is_yes() == same, || format!("image equality disagrees with marks at {}", g.class_name(h)));
        }
    }
    tally
}

/// Unit of `Ω(G/H)` scaled by `m`.
pub fn scaled_unit(om: &Burnside, h: SubgroupId, m: i64) -> BurnsideElem {
    om.from_int(h, &BigInt::from(m))
}
