//! The registered checks. Each takes a group, the run configuration and
//! its own RNG, and returns a tally plus optional structured detail.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::sampling::{pullback_squares, random_exponentials, random_map, transitive_maps, visit_exponential_family};
use super::{Config, Injection, Suite};
use crate::decision::{Decision, Tally};
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::gset::Atlas;
use crate::mackey::subfunctor::{build_u, SubMonoidFunctor};
use crate::mackey::{check_level_functoriality, check_mackey_square, SemiMackey, SemiMackeyExt};
use crate::ring::{GRing, Integers, IntegersMod, PermutationProduct, Rationals};
use crate::tambara::burnside::Burnside;
use crate::tambara::field::{
    check_index_identities, check_units_identity, field_like_check, fraction_mrc_witnesses, loc_mrc_conditions, mrc_check, nonzerodivisors,
    torsion_witness,
};
use crate::tambara::fixed_point::FixedPoint;
use crate::tambara::omega::{
    check_descended_iso, check_marks_kernel, check_universal_property, check_upsilon_with_marks, omega_fraction, omega_l_z,
    omega_localization, omega_mrc_quotient, omega_u_z, verify_omega_localization, zero_ideal, zero_ideal_iso, OmegaConfig,
};
use crate::tambara::{check_distributive, check_level_rings, check_projection_formula, Additive, Fault, Faulty, Multiplicative, Tambara};

pub struct Outcome {
    pub tally: Tally,
    pub extra: serde_json::Value,
}

impl Outcome {
    fn of(tally: Tally) -> Self {
        Outcome { tally, extra: serde_json::Value::Null }
    }

    fn with(tally: Tally, extra: serde_json::Value) -> Self {
        Outcome { tally, extra }
    }
}

pub type CheckFn = fn(&Arc<FiniteGroup>, &Config, &mut ChaCha8Rng) -> Result<Outcome>;

#[derive(Clone, Copy)]
pub struct CheckDef {
    pub id: &'static str,
    pub suite: Suite,
    pub reference: &'static str,
    pub run: CheckFn,
}

pub fn registry() -> Vec<CheckDef> {
    use Suite::*;
    let def = |id, suite, reference, run| CheckDef { id, suite, reference, run };
    vec![
        def("axioms.mackey", Axioms, "Mackey condition on pullback squares of transitive maps, Ω and P_Z", axioms_mackey as CheckFn),
        def("axioms.distributive", Axioms, "distributive law on exponential diagrams, Ω and P_Z", axioms_distributive),
        def("axioms.transfer-restriction", Axioms, "f*f_•(s) = s·q1_•(q2*(s)) in Ω^μ and P_Z^μ", axioms_transfer_restriction),
        def("axioms.level-rings", Axioms, "ring axioms of the levels and ring compatibility of the structure maps", axioms_level_rings),
        def(
            "axioms.index-identities",
            Axioms,
            "res^G_e tr^G_e(1) = |G|·1 and res^G_H tr^G_e(1) = |G:H|·tr^H_e(1)",
            axioms_index_identities,
        ),
        def("subfunctors.bottom-level", Subfunctors, "L_Z(G/e) = Z = U_Z(G/e) in Ω", subfunctors_bottom),
        def("subfunctors.l-in-u", Subfunctors, "every L_Z generator lies in U_Z with an explicit witness", subfunctors_l_in_u),
        def("subfunctors.saturation", Subfunctors, "saturation is idempotent", subfunctors_saturation),
        def("subfunctors.closure", Subfunctors, "L_Z and U_Z are closed under restriction and transfer", subfunctors_closure),
        def(
            "fractions.well-defined",
            Fractions,
            "fraction transfer agrees across admissible witness pairs, is additive and functorial",
            fractions_well_defined,
        ),
        def("fractions.universal-property", Fractions, "marks factor uniquely through U_Z⁻¹Ω → P_Q", fractions_universal),
        def("ideals.zero-ideal", Ideals, "ℐ(0) is closed under restriction, transfer and shifted norms", ideals_zero_ideal),
        def(
            "ideals.localized-square",
            Ideals,
            "S̄⁻¹(Ω/ℐ(0)) → U_Z⁻¹Ω/U_Z⁻¹ℐ(0) commutes with localization and projection",
            ideals_localized_square,
        ),
        def("ideals.upsilon-marks", Ideals, "the comparison map is bijective on samples against the marks oracle", ideals_upsilon_marks),
        def("ideals.marks-kernel", Ideals, "ker ℘ = ℐ(0) at every level", ideals_marks_kernel),
        def("ideals.descended-iso", Ideals, "℘ descends to a Tambara isomorphism Ω/ℐ(0) → P_Z", ideals_descended_iso),
        def("mrc.holds", MrcFieldlike, "restriction to G/e is injective for P_Z, P_Q and U_Z⁻¹Ω", mrc_holds),
        def("mrc.fails-for-burnside", MrcFieldlike, "restriction to G/e is not injective for Ω", mrc_fails_for_burnside),
        def("mrc.localization-conditions", MrcFieldlike, "tr^H_e(1) ∈ U_Z and T(G/e) has no |G|-torsion", mrc_localization_conditions),
        def("fieldlike.check", MrcFieldlike, "P_Q and U_Z⁻¹Ω are field-like, Ω is not", fieldlike_check),
        def("fieldlike.units", MrcFieldlike, "units of T(G/e) are the s with Π_g g·s ≠ 0", fieldlike_units),
        def("omega.localization", OmegaLocalization, "U_Z⁻¹Ω ≅ P_Q: naturality, surjectivity, injectivity", omega_localization_check),
    ]
}

fn omega(g: &Arc<FiniteGroup>) -> Arc<Burnside> {
    Arc::new(Burnside::new(g.clone()))
}

fn fixed<R: GRing>(g: &Arc<FiniteGroup>, r: R) -> Arc<FixedPoint<R>> {
    Arc::new(FixedPoint::new(g.clone(), r))
}

fn fault(cfg: &Config) -> Option<Fault> {
    match cfg.inject {
        Some(Injection::Norm) => Some(Fault::Norm),
        Some(Injection::Transfer) => Some(Fault::Transfer),
        Some(Injection::Restriction) => Some(Fault::Restriction),
        _ => None,
    }
}

/// Runs `$body` with `$t` bound to Ω, wrapped in the configured fault.
macro_rules! with_omega {
    ($g:expr, $cfg:expr, |$t:ident| $body:expr) => {{
        let om = omega($g);
        match fault($cfg) {
            Some(f) => {
                let $t = Arc::new(Faulty::new(om, f));
                $body
            }
            None => {
                let $t = om;
                $body
            }
        }
    }};
}

fn mackey_squares<T: Tambara + 'static>(t: Arc<T>, cfg: &Config, rng: &mut ChaCha8Rng) -> (Tally, usize) {
    let atlas = Atlas::new(t.group());
    let squares = pullback_squares(&atlas, cfg.max_points);
    let add = Additive(t.clone());
    let mul = Multiplicative(t);
    let mut tally = Tally::new();
    for (f, h) in &squares {
        tally.merge(check_mackey_square(&add, f, h, cfg.samples_per_diagram, rng));
        tally.merge(check_mackey_square(&mul, f, h, cfg.samples_per_diagram, rng));
    }
    tally.merge(check_level_functoriality(&add, 2, rng));
    tally.merge(check_level_functoriality(&mul, 2, rng));
    (tally, squares.len())
}

fn axioms_mackey(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (mut tally, n) = with_omega!(g, cfg, |t| mackey_squares(t, cfg, rng));
    tally.merge(mackey_squares(fixed(g, Integers), cfg, rng).0);
    Ok(Outcome::with(tally, json!({ "squares": n, "max_points": cfg.max_points })))
}

fn distributive<T: Tambara + ?Sized>(t: &T, cfg: &Config, rng: &mut ChaCha8Rng) -> (Tally, serde_json::Value) {
    let atlas = Atlas::new(t.group());
    let mut tally = Tally::new();
    let mut largest = 0;
    let enumerated = visit_exponential_family(&atlas, cfg.max_sections, |d| {
        largest = largest.max(d.b().size());
        tally.merge(check_distributive(t, d, cfg.samples_per_diagram, rng));
    });
    let random = random_exponentials(&atlas, cfg.random_diagrams, cfg.random_max_sections, rng);
    for d in &random {
        largest = largest.max(d.b().size());
        tally.merge(check_distributive(t, d, cfg.samples_per_diagram, rng));
    }
    if random.len() < cfg.random_diagrams {
        tally.fail(format!("only {} of {} random diagrams found within the section bound", random.len(), cfg.random_diagrams));
    }
    for f in transitive_maps(&atlas) {
        tally.merge(check_projection_formula(t, &f, 1, rng));
    }
    (tally, json!({ "enumerated": enumerated, "random": random.len(), "largest_section_count": largest }))
}

fn axioms_distributive(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let (mut tally, extra) = with_omega!(g, cfg, |t| distributive(&*t, cfg, rng));
    tally.merge(distributive(&*fixed(g, Integers), cfg, rng).0);
    Ok(Outcome::with(tally, extra))
}

fn transfer_restriction<T: Tambara + 'static>(t: Arc<T>, cfg: &Config, rng: &mut ChaCha8Rng) -> Tally {
    let atlas = Atlas::new(t.group());
    let maps = transitive_maps(&atlas);
    let mul = Multiplicative(t);
    let mut tally = Tally::new();
    for i in 0..cfg.samples {
        let f = if i % 2 == 0 { maps.choose(rng).expect("identity maps exist").clone() } else { random_map(&atlas, 3, 2, rng) };
        let s = mul.sample_value(f.source(), rng);
        let d = crate::mackey::subfunctor::check_transfer_restriction_identity(&mul, &f, &s);
        tally.record(&d, || format!("{}: identity fails along {:?} at {}", mul.name(), f, mul.render_value(f.source(), &s)));
    }
    tally
}

fn axioms_transfer_restriction(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut tally = with_omega!(g, cfg, |t| transfer_restriction(t, cfg, rng));
    tally.merge(transfer_restriction(fixed(g, Integers), cfg, rng));
    Ok(Outcome::of(tally))
}

fn axioms_level_rings(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = (cfg.samples / 10).max(1);
    let mut tally = with_omega!(g, cfg, |t| check_level_rings(&*t, n, rng));
    tally.merge(check_level_rings(&*fixed(g, Integers), n, rng));
    Ok(Outcome::of(tally))
}

fn axioms_index_identities(g: &Arc<FiniteGroup>, cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut tally = with_omega!(g, cfg, |t| check_index_identities(&*t));
    tally.merge(check_index_identities(&*fixed(g, Integers)));
    let om = omega(g);
    let (e, top) = (g.trivial(), g.whole());
    let total = om.transfer(e, top, &om.one(e));
    let levels: Vec<_> =
        g.subgroups().map(|h| json!({ "level": g.class_name(h), "res_tr_1": om.render(h, &om.restrict(top, h, &total)) })).collect();
    Ok(Outcome::with(tally, json!({ "levels": levels })))
}

fn nonzero_int(rng: &mut ChaCha8Rng) -> BigInt {
    let n: i64 = rng.gen_range(1..=1000);
    BigInt::from(if rng.gen_bool(0.5) { n } else { -n })
}

fn subfunctors_bottom(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let om = omega(g);
    let seed = nonzerodivisors(om.clone())?;
    let (l, u) = (omega_l_z(om.clone())?, omega_u_z(om.clone())?);
    let e = g.trivial();
    let n = cfg.samples / 2;
    let mut tally = Tally::new();
    for (name, s) in [("L_Z", &l), ("U_Z", &u)] {
        for _ in 0..n {
            let x = vec![nonzero_int(rng)];
            tally.record(&s.contains(e, &x), || format!("{name}(G/e) misses {}", om.render(e, &x)));
        }
        for i in 0..n {
            let x = if i == 0 { om.zero(e) } else { om.sample(e, rng) };
            let expected = (seed.contains)(&x);
            let d = s.contains(e, &x).forget();
            let verdict = if d.is_unknown() { d } else { Decision::from_bool(d.is_yes() == expected) };
            tally.record(&verdict, || format!("{name}(G/e) disagrees with Z at {}", om.render(e, &x)));
        }
    }
    Ok(Outcome::of(tally))
}

fn subfunctors_l_in_u(g: &Arc<FiniteGroup>, _cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let om = omega(g);
    let seed = nonzerodivisors(om.clone())?;
    let (l, u) = (omega_l_z(om.clone())?, omega_u_z(om.clone())?);
    let (e, top) = (g.trivial(), g.whole());
    let mut tally = Tally::new();
    let mut count = 0;
    for h in g.subgroups() {
        for x in l.products(h, 2) {
            count += 1;
            // the L certificate: x is the norm of a bottom element of Z
            match l.contains(h, &x) {
                Decision::Yes(c) => {
                    let s = c.top.expect("L certificates carry a preimage");
                    tally.check((seed.contains)(&s) && om.norm(e, h, &s) == x, || {
                        format!("bad L witness for {} at {}", om.render(h, &x), g.class_name(h))
                    });
                }
                d => tally.record(&d, || format!("{} not in L_Z at {}", om.render(h, &x), g.class_name(h))),
            }
            match u.contains(h, &x) {
                Decision::Yes(c) => {
                    let t = c.top.expect("U certificates carry a top element");
                    let ok = om.mul(h, &c.a, &x) == om.restrict(top, h, &t) && (seed.contains)(&om.restrict(top, e, &t));
                    tally.check(ok, || format!("bad U witness for {} at {}", om.render(h, &x), g.class_name(h)));
                }
                d => tally.record(&d, || format!("{} not in U_Z at {}", om.render(h, &x), g.class_name(h))),
            }
        }
    }
    Ok(Outcome::with(tally, json!({ "elements": count })))
}

fn saturation_agrees(
    name: &str,
    s: &SubMonoidFunctor<Multiplicative<Burnside>>,
    om: &Burnside,
    samples: usize,
    rng: &mut ChaCha8Rng,
    tally: &mut Tally,
) {
    let g = om.group().clone();
    let once = s.saturation(3);
    let twice = once.saturation(3);
    for h in g.subgroups() {
        let gens = s.products(h, 2);
        for i in 0..samples {
            // half the probes are members times random elements
            let x = if i % 2 == 0 { om.sample(h, rng) } else { om.mul(h, gens.choose(rng).expect("unit"), &om.sample(h, rng)) };
            let (a, b) = (once.contains(h, &x).forget(), twice.contains(h, &x).forget());
            let verdict = match (&a, &b) {
                (Decision::Unknown, _) | (_, Decision::Unknown) => Decision::Unknown,
                _ => Decision::from_bool(a.is_yes() == b.is_yes()),
            };
            tally.record(&verdict, || format!("sat(sat({name})) and sat({name}) differ at {} on {}", g.class_name(h), om.render(h, &x)));
        }
    }
}

fn subfunctors_saturation(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let om = omega(g);
    let (l, u) = (omega_l_z(om.clone())?, omega_u_z(om.clone())?);
    let n = (cfg.samples / 2 / g.subgroup_count()).max(2);
    let mut tally = Tally::new();
    saturation_agrees("U_Z", &u, &om, n, rng, &mut tally);
    saturation_agrees("L_Z", &l, &om, n, rng, &mut tally);
    Ok(Outcome::with(tally, json!({ "samples_per_level": n })))
}

fn subfunctors_closure(g: &Arc<FiniteGroup>, _cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let om = omega(g);
    let mut tally = omega_l_z(om.clone())?.is_subfunctor();
    tally.merge(omega_u_z(om)?.is_subfunctor());
    Ok(Outcome::of(tally))
}

fn fractions_well_defined(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut f = omega_fraction(g)?;
    f.corrupt_witness = cfg.inject == Some(Injection::CorruptWitness);
    let mut tally = f.check_transfer(cfg.samples, 3, rng);
    tally.merge(check_level_rings(&f, (cfg.samples / 20).max(1), rng));
    Ok(Outcome::with(tally, json!({ "witness_pairs": 3 })))
}

fn fractions_universal(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    Ok(Outcome::of(check_universal_property(g, cfg.samples, rng)?))
}

fn ideals_zero_ideal(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let i = zero_ideal(omega(g))?;
    let gens: Vec<_> = g
        .subgroups()
        .map(|h| json!({ "level": g.class_name(h), "generators": i.generators(h).iter().map(|x| i.parent().render(h, x)).collect::<Vec<_>>() }))
        .collect();
    Ok(Outcome::with(i.check((cfg.samples / 10).max(1), rng), json!({ "generators": gens })))
}

fn ideals_localized_square(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let iso = zero_ideal_iso(g, 3)?;
    Ok(Outcome::of(iso.check(cfg.samples, rng)))
}

fn ideals_upsilon_marks(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let iso = zero_ideal_iso(g, 3)?;
    Ok(Outcome::of(check_upsilon_with_marks(&iso, cfg.samples, rng)))
}

fn ideals_marks_kernel(g: &Arc<FiniteGroup>, _cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let om = omega(g);
    let i = zero_ideal(om.clone())?;
    let ranks: Vec<_> = g.subgroups().map(|h| json!({ "level": g.class_name(h), "rank": i.generators(h).len() })).collect();
    Ok(Outcome::with(check_marks_kernel(&om, &i), json!({ "kernel": ranks })))
}

fn ideals_descended_iso(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let q = omega_mrc_quotient(omega(g))?;
    Ok(Outcome::of(check_descended_iso(&q, (cfg.samples / 10).max(1), rng)))
}

fn mrc_holds(g: &Arc<FiniteGroup>, _cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut tally = mrc_check(&*fixed(g, Integers))?;
    tally.merge(mrc_check(&*fixed(g, Rationals))?);
    let f = omega_localization(g)?;
    tally.merge(mrc_check(&*f)?);
    tally.merge(fraction_mrc_witnesses(&f));
    Ok(Outcome::of(tally))
}

fn mrc_fails_for_burnside(g: &Arc<FiniteGroup>, _cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let t = mrc_check(&*omega(g))?;
    let mut tally = Tally::new();
    if g.order() == 1 {
        tally.check(t.passed(), || "MRC fails for the trivial group".into());
        return Ok(Outcome::of(tally));
    }
    tally.check(!t.failures.is_empty(), || "MRC was not refuted for Ω".into());
    Ok(Outcome::with(tally, json!({ "refutation": t.failures.first() })))
}

fn mrc_localization_conditions(g: &Arc<FiniteGroup>, cfg: &Config, _rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut tally = Tally::new();
    if cfg.inject == Some(Injection::Torsion) {
        let t = fixed(g, IntegersMod(g.order() as u64));
        let z = build_u(Arc::new(Multiplicative(t.clone())), &nonzerodivisors(t.clone())?, None)?;
        let r = loc_mrc_conditions(&t, &z);
        tally.record(&r.torsion_free, || format!("{}: |G|·1 kills {:?}", t.name(), torsion_witness(&*t, g.order()).witness()));
        return Ok(Outcome::of(tally));
    }
    let om = omega(g);
    let r = loc_mrc_conditions(&om, &omega_u_z(om.clone())?);
    tally.check(r.holds(), || "neither MRC nor the transfer chain holds".into());
    tally.merge(r.transfers_of_one);
    tally.record(&r.torsion_free, || format!("{}: |G|-torsion at the bottom", om.name()));
    Ok(Outcome::with(tally, json!({ "burnside_mrc": r.mrc.label() })))
}

fn fieldlike_check(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = (cfg.samples / 5).max(1);
    let mut tally = Tally::new();
    let pq = field_like_check(&*fixed(g, Rationals), n, rng)?;
    tally.check(pq.field_like(), || "P_Q is not field-like".into());
    tally.merge(pq.units.unwrap_or_default());
    let f = field_like_check(&*omega_localization(g)?, n, rng)?;
    tally.check(f.field_like(), || "U_Z⁻¹Ω is not field-like".into());
    tally.merge(f.units.unwrap_or_default());
    if g.order() > 1 {
        let om = field_like_check(&*omega(g), n, rng)?;
        tally.check(!om.field_like(), || "Ω is reported field-like".into());
    }
    Ok(Outcome::of(tally))
}

fn fieldlike_units(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut tally = check_units_identity(&*fixed(g, Rationals), cfg.samples, rng);
    let regular = Atlas::new(g).transitive(g.trivial());
    let permuted = fixed(g, PermutationProduct::new(Rationals, regular));
    tally.merge(check_units_identity(&*permuted, cfg.samples, rng));
    Ok(Outcome::of(tally))
}

fn omega_localization_check(g: &Arc<FiniteGroup>, cfg: &Config, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let oc = OmegaConfig { naturality_samples: 2 * cfg.samples, rationals_per_level: cfg.samples / 2, kernel_samples: cfg.samples / 2 };
    let r = verify_omega_localization(g, &oc, rng)?;
    let levels: Vec<_> = r.levels.iter().map(|(l, q)| json!({ "level": l, "ring": q })).collect();
    let parts = json!({
        "naturality": r.naturality.checked,
        "surjectivity": r.surjectivity.checked,
        "injectivity": r.injectivity.checked,
        "levels": levels,
    });
    let mut tally = r.naturality;
    tally.merge(r.surjectivity);
    tally.merge(r.injectivity);
    Ok(Outcome::with(tally, parts))
}
