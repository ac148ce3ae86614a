/// Outcome of a possibly incomplete decision procedure.
///
/// `Yes` carries a witness that the caller can re-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<W = ()> {
    Yes(W),
    No,
    Unknown,
}

impl<W> Decision<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Decision::Unknown)
    }

    pub fn witness(self) -> Option<W> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        match self {
            Decision::Yes(w) => Decision::Yes(f(w)),
            Decision::No => Decision::No,
            Decision::Unknown => Decision::Unknown,
        }
    }

    pub fn forget(self) -> Decision<()> {
        self.map(|_| ())
    }

    /// Swaps `Yes` and `No`, dropping the witness.
    pub fn negate(self) -> Decision<()> {
        match self {
            Decision::Yes(_) => Decision::No,
            Decision::No => Decision::Yes(()),
            Decision::Unknown => Decision::Unknown,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Decision::Yes(_) => "yes",
            Decision::No => "no",
            Decision::Unknown => "unknown",
        }
    }
}

impl Decision<()> {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::Yes(())
        } else {
            Decision::No
        }
    }

    /// Conjunction: `No` dominates, then `Unknown`.
    pub fn and(self, other: Decision<()>) -> Decision<()> {
        match (self, other) {
            (Decision::No, _) | (_, Decision::No) => Decision::No,
            (Decision::Unknown, _) | (_, Decision::Unknown) => Decision::Unknown,
            _ => Decision::Yes(()),
        }
    }
}

/// Counts of a batch of checks, keeping a description of every failure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: usize,
    pub failures: Vec<String>,
    pub undecided: Vec<String>,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one check; `context` is only evaluated on failure.
    pub fn record<W>(&mut self, d: &Decision<W>, context: impl FnOnce() -> String) {
        self.checked += 1;
        match d {
            Decision::Yes(_) => {}
            Decision::No => self.failures.push(context()),
            Decision::Unknown => self.undecided.push(context()),
        }
    }

    pub fn check(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.record(&Decision::from_bool(ok), context)
    }

    pub fn fail(&mut self, context: String) {
        self.checked += 1;
        self.failures.push(context);
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.undecided.extend(other.undecided);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.undecided.is_empty()
    }

    pub fn decision(&self) -> Decision<()> {
        if !self.failures.is_empty() {
            Decision::No
        } else if !self.undecided.is_empty() {
            Decision::Unknown
        } else {
            Decision::Yes(())
        }
    }
}
