//! The result record every named check produces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::majorization::{EntrywiseFact, MajorizationReport, Relation};

/// How a recorded relation participates in the pass/fail verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Must hold.
    Asserted,
    /// Must fail (negative controls).
    ExpectedViolation,
    /// Recorded only.
    Observed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoleReport {
    pub role: Role,
    pub report: MajorizationReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoleFact {
    pub role: Role,
    pub fact: EntrywiseFact,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check_id: String,
    pub reports: BTreeMap<String, RoleReport>,
    pub entrywise: BTreeMap<String, RoleFact>,
    /// Computed vectors worth printing alongside the verdicts.
    pub values: BTreeMap<String, Vec<f64>>,
    /// Sub-checks whose hypotheses were not met, with the reason.
    pub not_applicable: BTreeMap<String, String>,
}

impl CheckOutcome {
    pub fn new(check_id: impl Into<String>) -> Self {
        Self { check_id: check_id.into(), ..Default::default() }
    }

    pub fn assert_report(&mut self, name: &str, report: MajorizationReport) -> &mut Self {
        self.push_report(name, Role::Asserted, report)
    }

    pub fn observe_report(&mut self, name: &str, report: MajorizationReport) -> &mut Self {
        self.push_report(name, Role::Observed, report)
    }

    pub fn expect_violation(&mut self, name: &str, report: MajorizationReport) -> &mut Self {
        self.push_report(name, Role::ExpectedViolation, report)
    }

    pub fn push_report(&mut self, name: &str, role: Role, report: MajorizationReport) -> &mut Self {
        self.reports.insert(name.to_owned(), RoleReport { role, report });
        self
    }

    pub fn push_fact(&mut self, name: &str, role: Role, fact: EntrywiseFact) -> &mut Self {
        self.entrywise.insert(name.to_owned(), RoleFact { role, fact });
        self
    }

    pub fn value(&mut self, name: &str, v: Vec<f64>) -> &mut Self {
        self.values.insert(name.to_owned(), v);
        self
    }

    pub fn skip(&mut self, name: &str, reason: &str) -> &mut Self {
        self.not_applicable.insert(name.to_owned(), reason.to_owned());
        self
    }

    pub fn report(&self, name: &str) -> Option<&MajorizationReport> {
        self.reports.get(name).map(|r| &r.report)
    }

    pub fn fact(&self, name: &str) -> Option<&EntrywiseFact> {
        self.entrywise.get(name).map(|f| &f.fact)
    }

    /// Asserted relations hold and expected violations are violated.
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Names of the relations that broke their role.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, r) in &self.reports {
            let bad = match r.role {
                Role::Asserted => !r.report.verdict,
                Role::ExpectedViolation => r.report.verdict,
                Role::Observed => false,
            };
            if bad {
                out.push(name.clone());
            }
        }
        for (name, f) in &self.entrywise {
            let bad = match f.role {
                Role::Asserted => !f.fact.holds,
                Role::ExpectedViolation => f.fact.holds,
                Role::Observed => false,
            };
            if bad {
                out.push(name.clone());
            }
        }
        out
    }

    /// Minimum slack over the asserted relations (`+inf` when none).
    pub fn min_asserted_margin(&self) -> f64 {
        let reports = self
            .reports
            .values()
            .filter(|r| r.role == Role::Asserted)
            .map(|r| r.report.min_margin());
        let facts = self
            .entrywise
            .values()
            .filter(|f| f.role == Role::Asserted)
            .map(|f| -f.fact.max_excess);
        reports.chain(facts).fold(f64::INFINITY, f64::min)
    }

    /// Re-judges every record with its tolerance multiplied by `factor`.
    pub fn rescale_tolerance(&mut self, factor: f64) {
        for r in self.reports.values_mut() {
            let rep = &mut r.report;
            rep.tolerance *= factor;
            let sub = rep.margins.iter().all(|&m| m >= -rep.tolerance);
            rep.verdict = match rep.relation {
                Relation::Submajorized => sub,
                Relation::Majorized => sub && rep.trace_gap.abs() <= rep.tolerance,
            };
        }
        for f in self.entrywise.values_mut() {
            let fact = &mut f.fact;
            fact.tolerance *= factor;
            fact.holds = fact.max_excess <= fact.tolerance;
            if fact.holds {
                fact.first_violation = None;
            }
        }
    }

    /// Merges another outcome's records under a name prefix.
    pub fn absorb(&mut self, prefix: &str, other: CheckOutcome) {
        for (k, v) in other.reports {
            self.reports.insert(format!("{prefix}.{k}"), v);
        }
        for (k, v) in other.entrywise {
            self.entrywise.insert(format!("{prefix}.{k}"), v);
        }
        for (k, v) in other.values {
            self.values.insert(format!("{prefix}.{k}"), v);
        }
        for (k, v) in other.not_applicable {
            self.not_applicable.insert(format!("{prefix}.{k}"), v);
        }
    }
}
