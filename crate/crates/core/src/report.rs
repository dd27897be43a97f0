//! Validation reports: validators never fail fast, they list every violating
//! row, column, gate, or player with the clause it violates.

use alloc::string::String;
use alloc::vec::Vec;

/// Where a violation was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    ARow(usize),
    ACol(usize),
    BRow(usize),
    BCol(usize),
    Gate(usize),
    Variable(String),
    Player(usize),
    Edge(usize, usize),
    Global,
}

impl core::fmt::Display for Location {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Location::ARow(i) => write!(f, "A row {i}"),
            Location::ACol(j) => write!(f, "A column {j}"),
            Location::BRow(i) => write!(f, "B row {i}"),
            Location::BCol(j) => write!(f, "B column {j}"),
            Location::Gate(g) => write!(f, "gate {g}"),
            Location::Variable(v) => write!(f, "variable {v:?}"),
            Location::Player(p) => write!(f, "player {p}"),
            Location::Edge(i, j) => write!(f, "edge ({i}, {j})"),
            Location::Global => write!(f, "instance"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub location: Location,
    pub clause: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, location: Location, clause: impl Into<String>) {
        self.violations.push(Violation {
            location,
            clause: clause.into(),
        });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl core::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "; {}: {}", v.location, v.clause)?;
        }
        Ok(())
    }
}
