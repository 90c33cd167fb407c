use alloc::string::String;
use alloc::vec::Vec;

/// One failed instance of an equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub location: String,
    pub equation: String,
    /// Numerical residual, or 1.0 for discrete (table) mismatches.
    pub residual: f64,
}

/// Outcome of an exhaustive check. Empty means everything held.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(
        &mut self,
        location: impl Into<String>,
        equation: impl Into<String>,
        residual: f64,
    ) {
        self.violations.push(Violation {
            location: location.into(),
            equation: equation.into(),
            residual,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    /// Merges a sub-report, prefixing each location.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        for mut v in other.violations {
            v.location = alloc::format!("{prefix}: {}", v.location);
            self.violations.push(v);
        }
    }

    pub fn mentions(&self, equation: &str) -> bool {
        self.violations
            .iter()
            .any(|v| v.equation.contains(equation))
    }

    pub fn max_residual(&self) -> f64 {
        self.violations
            .iter()
            .map(|v| v.residual)
            .fold(0.0, f64::max)
    }
}
