//! The acceptance criteria, each run at its stated bounds and time limit
//! through the same checks as `tlab run`. Prints one line per criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use tlab_core::harness::{find_check, run_check, CheckRecord, Config, Status};
use tlab_core::FiniteGroup;

const SEED: u64 = 20_240_601;

struct Criterion {
    number: usize,
    title: &'static str,
    groups: &'static [&'static str],
    checks: &'static [&'static str],
    /// Per group when `per_group`, else for the whole criterion.
    limit: Duration,
    per_group: bool,
    extra: Option<Extra>,
}

type Extra = fn(&CheckRecord) -> Result<(), String>;

const BASIC: &[&str] = &["C2", "C3", "C4", "C2xC2", "S3"];

fn levels_are_rational(r: &CheckRecord) -> Result<(), String> {
    if r.id != "omega.localization" {
        return Ok(());
    }
    let levels = r.witness["detail"]["levels"].as_array().ok_or("no level report")?;
    if levels.is_empty() {
        return Err("no levels reported".into());
    }
    for l in levels {
        if l["ring"] != "Q" {
            return Err(format!("level {} reported as {}", l["level"], l["ring"]));
        }
    }
    Ok(())
}

fn enough_diagrams(r: &CheckRecord) -> Result<(), String> {
    if r.id != "axioms.distributive" {
        return Ok(());
    }
    let d = &r.witness["detail"];
    if d["random"].as_u64() != Some(200) {
        return Err(format!("random diagrams: {}", d["random"]));
    }
    if d["enumerated"].as_u64().unwrap_or(0) == 0 {
        return Err("no enumerated diagrams".into());
    }
    Ok(())
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion {
            number: 1,
            title: "Mackey squares and distributive law for Ω and P_Z",
            groups: BASIC,
            checks: &["axioms.mackey", "axioms.distributive"],
            limit: secs(60),
            per_group: true,
            extra: Some(enough_diagrams),
        },
        Criterion {
            number: 2,
            title: "f*f_•(s) = s·q1_•(q2*(s)) on 100 pairs in Ω^μ and P_Z^μ",
            groups: BASIC,
            checks: &["axioms.transfer-restriction"],
            limit: secs(10),
            per_group: false,
            extra: None,
        },
        Criterion {
            number: 3,
            title: "L_Z and U_Z: bottom level, L ⊆ U with witnesses, saturation idempotent",
            groups: &["C2", "C4", "S3"],
            checks: &["subfunctors.bottom-level", "subfunctors.l-in-u", "subfunctors.saturation", "subfunctors.closure"],
            limit: secs(30),
            per_group: false,
            extra: None,
        },
        Criterion {
            number: 4,
            title: "fraction transfer is well defined, additive and functorial",
            groups: &["C2", "S3"],
            checks: &["fractions.well-defined"],
            limit: secs(60),
            per_group: false,
            extra: None,
        },
        Criterion {
            number: 5,
            title: "universal property of U_Z⁻¹Ω with two constructions",
            groups: &["C2", "S3"],
            checks: &["fractions.universal-property"],
            limit: secs(10),
            per_group: false,
            extra: None,
        },
        Criterion {
            number: 6,
            title: "ℐ(0) is an ideal; localized quotient square and υ bijective",
            groups: &["C2", "S3"],
            checks: &["ideals.zero-ideal", "ideals.localized-square", "ideals.upsilon-marks"],
            limit: secs(30),
            per_group: false,
            extra: None,
        },
        Criterion {
            number: 7,
            title: "Ω/ℐ(0) ≅ P_Z through the marks",
            groups: &["C2", "C3", "S3"],
            checks: &["ideals.marks-kernel", "ideals.descended-iso"],
            limit: secs(30),
            per_group: false,
            extra: None,
        },
        Criterion {
            number: 8,
            title: "U_Z⁻¹Ω ≅ P_Q",
            groups: &["C2", "C3", "C4", "S3"],
            checks: &["omega.localization"],
            limit: secs(120),
            per_group: false,
            extra: Some(levels_are_rational),
        },
        Criterion {
            number: 9,
            title: "MRC and field-like checks, units identity",
            groups: &["C2", "S3"],
            checks: &["mrc.holds", "mrc.fails-for-burnside", "fieldlike.check", "fieldlike.units"],
            limit: secs(30),
            per_group: false,
            extra: None,
        },
        Criterion {
            number: 10,
            title: "res tr(1) = |G|·1 and |G:H|·tr^H_e(1)",
            groups: BASIC,
            checks: &["axioms.index-identities"],
            limit: secs(10),
            per_group: false,
            extra: None,
        },
    ]
}

fn run(c: &Criterion, cfg: &Config) -> Result<Duration, String> {
    let start = Instant::now();
    let mut problems = Vec::new();
    for name in c.groups {
        let g: Arc<FiniteGroup> = FiniteGroup::parse(name).map_err(|e| e.to_string())?;
        let group_start = Instant::now();
        for id in c.checks {
            let def = find_check(id).ok_or_else(|| format!("unknown check {id}"))?;
            let r = run_check(&def, &g, cfg);
            if r.status != Status::Pass {
                problems.push(format!("{name} {id}: {:?} {}", r.status, r.witness));
            }
            if let Some(extra) = c.extra {
                if let Err(e) = extra(&r) {
                    problems.push(format!("{name} {id}: {e}"));
                }
            }
        }
        if c.per_group && group_start.elapsed() > c.limit {
            problems.push(format!("{name}: {:?} exceeds {:?}", group_start.elapsed(), c.limit));
        }
    }
    let elapsed = start.elapsed();
    if !c.per_group && elapsed > c.limit {
        problems.push(format!("{elapsed:?} exceeds {:?}", c.limit));
    }
    if problems.is_empty() {
        Ok(elapsed)
    } else {
        Err(problems.join("\n    "))
    }
}

#[test]
fn acceptance() {
    let cfg = Config { seed: SEED, ..Config::default() };
    assert_eq!((cfg.samples, cfg.max_points, cfg.max_sections, cfg.random_diagrams), (100, 24, 10_000, 200));
    let mut failed = Vec::new();
    for c in criteria() {
        let limit = if c.per_group { format!("{:?}/group", c.limit) } else { format!("{:?}", c.limit) };
        match run(&c, &cfg) {
            Ok(t) => println!("criterion {:2}: PASS  {:>8.2?} (limit {limit})  {}", c.number, t, c.title),
            Err(e) => {
                println!("criterion {:2}: FAIL  (limit {limit})  {}\n    {e}", c.number, c.title);
                failed.push(c.number);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
