//! Validation reports.
//!
//! Checkers never stop at the first failure: a report lists every violated
//! axiom instance so that downstream code (and tests) can use checkers as
//! oracles. Ordering of entries is deterministic.

use std::fmt;

/// One violated axiom instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    /// Name of the check, e.g. `associativity`, `a.4`, `c.7`, `Multi(3)`.
    pub check: String,
    /// Instance data: which tuple of objects/morphisms failed and why.
    pub detail: String,
}

/// Outcome of running a family of checks against one structure.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    /// What was validated, e.g. `category two-object-group`.
    pub subject: String,
    /// Every failed instance, in check order.
    pub violations: Vec<Violation>,
    /// Names of checks that ran (used for report formatting).
    pub checks_run: Vec<String>,
    /// Window/bounds annotations, recorded when a check was restricted.
    pub bounds_note: Option<String>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            violations: Vec::new(),
            checks_run: Vec::new(),
            bounds_note: None,
        }
    }

    pub fn with_bounds(mut self, note: impl Into<String>) -> Self {
        self.bounds_note = Some(note.into());
        self
    }

    /// Record that a named check ran (pass or fail is determined by whether
    /// violations with that name were pushed).
    pub fn ran(&mut self, check: &str) {
        if !self.checks_run.iter().any(|c| c == check) {
            self.checks_run.push(check.to_string());
        }
    }

    pub fn push(&mut self, check: impl Into<String>, detail: impl Into<String>) {
        let check = check.into();
        self.ran(&check);
        self.violations.push(Violation {
            check,
            detail: detail.into(),
        });
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Merge another report into this one, prefixing its check names.
    pub fn absorb(&mut self, prefix: &str, other: ValidationReport) {
        for c in other.checks_run {
            self.ran(&format!("{prefix}{c}"));
        }
        for v in other.violations {
            self.violations.push(Violation {
                check: format!("{prefix}{}", v.check),
                detail: v.detail,
            });
        }
    }

    /// Did a check with this exact name fail?
    pub fn failed(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }

    /// Deterministic line-oriented rendering: one `CHECK <name> PASS|FAIL`
    /// line per check that ran, FAIL lines carrying the first offending
    /// instance and the failure count.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(b) = &self.bounds_note {
            out.push_str(&format!("# bounds {b}\n"));
        }
        for check in &self.checks_run {
            let fails: Vec<&Violation> =
                self.violations.iter().filter(|v| &v.check == check).collect();
            if fails.is_empty() {
                out.push_str(&format!("CHECK {check} PASS\n"));
            } else {
                out.push_str(&format!(
                    "CHECK {check} FAIL {} instance(s); first: {}\n",
                    fails.len(),
                    fails[0].detail
                ));
            }
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "{}: valid", self.subject)
        } else {
            writeln!(f, "{}: {} violation(s)", self.subject, self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  [{}] {}", v.check, v.detail)?;
            }
            Ok(())
        }
    }
}
