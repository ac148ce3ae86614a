//! Verification suites: named checks over a group, each run with its own
//! seeded RNG and reported as a [`CheckRecord`].

pub mod checks;
pub mod sampling;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;

pub use checks::{registry, CheckDef, Outcome};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Axioms,
    Subfunctors,
    Fractions,
    Ideals,
    MrcFieldlike,
    OmegaLocalization,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["axioms", "subfunctors", "fractions", "ideals", "mrc-fieldlike", "omega-localization", "all"];

    pub fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "axioms" => Suite::Axioms,
            "subfunctors" => Suite::Subfunctors,
            "fractions" => Suite::Fractions,
            "ideals" => Suite::Ideals,
            "mrc-fieldlike" => Suite::MrcFieldlike,
            "omega-localization" => Suite::OmegaLocalization,
            "all" => Suite::All,
            _ => return Err(Error::BadSpec(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", ")))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i =
            [Suite::Axioms, Suite::Subfunctors, Suite::Fractions, Suite::Ideals, Suite::MrcFieldlike, Suite::OmegaLocalization, Suite::All]
                .iter()
                .position(|s| s == self)
                .expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

/// A deliberate defect, to confirm that checks fail where they should.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Injection {
    /// Fraction transfers use a wrong witness `a + 1`.
    CorruptWitness,
    /// Norms of Ω between distinct levels are shifted by 1.
    Norm,
    /// Transfers of Ω between distinct levels are shifted by 1.
    Transfer,
    /// Restrictions of Ω between distinct levels are shifted by 1.
    Restriction,
    /// The torsion-freeness check runs on fixed points of Z/|G|.
    Torsion,
}

impl FromStr for Injection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "corrupt-witness" => Injection::CorruptWitness,
            "norm" => Injection::Norm,
            "transfer" => Injection::Transfer,
            "restriction" => Injection::Restriction,
            "torsion" => Injection::Torsion,
            _ => {
                return Err(Error::BadSpec(format!(
                    "unknown fault {s:?}; expected corrupt-witness, norm, transfer, restriction or torsion"
                )))
            }
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub seed: u64,
    /// Samples for checks that draw elements or (map, element) pairs.
    pub samples: usize,
    /// Point bound for pullback squares.
    pub max_points: usize,
    /// Section bound for the enumerated exponential diagrams.
    pub max_sections: usize,
    /// Random exponential diagrams beyond the enumerated family.
    pub random_diagrams: usize,
    /// Section bound for the random diagrams.
    pub random_max_sections: usize,
    /// Samples per square or diagram.
    pub samples_per_diagram: usize,
    pub lenient: bool,
    pub inject: Option<Injection>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            samples: 100,
            max_points: 24,
            max_sections: 10_000,
            random_diagrams: 200,
            random_max_sections: 20_000,
            samples_per_diagram: 2,
            lenient: false,
            inject: None,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.max_points > 4096 {
            return Err(Error::BoundExceeded(format!("max points {} above 4096", self.max_points)));
        }
        if self.max_sections > 1_000_000 || self.random_max_sections > 1_000_000 {
            return Err(Error::BoundExceeded("section bound above 10^6".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub reference: String,
    pub status: Status,
    pub witness: serde_json::Value,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub group: String,
    pub seed: u64,
    pub config: Config,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    /// Every check passed; with `lenient`, undecided checks are tolerated.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| match c.status {
            Status::Pass => true,
            Status::Undecided => self.config.lenient,
            Status::Fail => false,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Undecided if self.config.lenient => "WARN",
                Status::Undecided => "UNDECIDED",
            };
            out.push_str(&format!("{tag:9} {:32} {:>9.1} ms  {}\n", c.id, c.wall_ms, c.reference));
            if c.status != Status::Pass {
                for key in ["failures", "undecided", "error"] {
                    if let Some(v) = c.witness.get(key) {
                        if let Some(list) = v.as_array() {
                            for m in list {
                                out.push_str(&format!("          {key}: {}\n", m.as_str().unwrap_or_default()));
                            }
                        } else if let Some(s) = v.as_str() {
                            out.push_str(&format!("          {key}: {s}\n"));
                        }
                    }
                }
            }
        }
        out
    }
}

/// FNV-1a, so that per-check seeds stay stable across toolchains.
fn mix(seed: u64, id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

const MAX_LISTED: usize = 5;

/// Runs one check; the RNG depends only on (seed, check id).
pub fn run_check(def: &CheckDef, group: &Arc<FiniteGroup>, cfg: &Config) -> CheckRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(cfg.seed, def.id));
    let start = Instant::now();
    let result = (def.run)(group, cfg, &mut rng);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let (status, witness) = match result {
        Ok(out) => {
            let t = &out.tally;
            let status = if !t.failures.is_empty() {
                Status::Fail
            } else if !t.undecided.is_empty() {
                Status::Undecided
            } else {
                Status::Pass
            };
            let mut w = json!({
                "checked": t.checked,
                "failure_count": t.failures.len(),
                "undecided_count": t.undecided.len(),
            });
            if !t.failures.is_empty() {
                w["failures"] = json!(t.failures.iter().take(MAX_LISTED).collect::<Vec<_>>());
            }
            if !t.undecided.is_empty() {
                w["undecided"] = json!(t.undecided.iter().take(MAX_LISTED).collect::<Vec<_>>());
            }
            if !out.extra.is_null() {
                w["detail"] = out.extra;
            }
            (status, w)
        }
        Err(e @ (Error::UndecidedEquality(_) | Error::UndecidableCarrier(_))) => (Status::Undecided, json!({ "error": e.to_string() })),
        Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
    };
    CheckRecord { id: def.id.to_string(), reference: def.reference.to_string(), status, witness, wall_ms }
}

pub fn find_check(id: &str) -> Option<CheckDef> {
    registry().into_iter().find(|d| d.id == id)
}

/// Runs every check of `suite`, in registry order.
pub fn run_suite(suite: Suite, group: &Arc<FiniteGroup>, cfg: &Config) -> Result<VerificationReport> {
    cfg.validate()?;
    let checks = registry().iter().filter(|d| suite.includes(d.suite)).map(|d| run_check(d, group, cfg)).collect();
    Ok(VerificationReport {
        schema: SCHEMA,
        suite: suite.to_string(),
        group: group.name().to_string(),
        seed: cfg.seed,
        config: cfg.clone(),
        checks,
    })
}
