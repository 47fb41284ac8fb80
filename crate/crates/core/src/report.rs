use serde::Serialize;

/// Tally of a batch of checks. A check either passes, fails, does not apply
/// (its hypothesis is unmet), or cannot be decided with the available data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: usize,
    pub not_applicable: usize,
    pub failures: Vec<String>,
    pub non_verifiable: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn pass(&mut self) {
        self.passed += 1;
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    pub fn unverifiable(&mut self, msg: impl Into<String>) {
        self.non_verifiable.push(msg.into());
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if ok {
            self.pass();
        } else {
            self.fail(msg());
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.passed += other.passed;
        self.not_applicable += other.not_applicable;
        self.failures.extend(other.failures);
        self.non_verifiable.extend(other.non_verifiable);
    }

    /// No failures and nothing left undecided.
    pub fn full_pass(&self) -> bool {
        self.failures.is_empty() && self.non_verifiable.is_empty()
    }

    pub fn no_failures(&self) -> bool {
        self.failures.is_empty()
    }
}
