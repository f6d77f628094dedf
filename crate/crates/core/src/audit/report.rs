use std::fmt::{self, Write as _};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Measure, SurdBound};

/// Which definition an [`AuditReport`] measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    Pf,
    Core,
    Pr,
    PrStrong,
    CorSingle,
    Stability,
    StabilityCardinal,
    Distortion,
}

impl Check {
    pub fn tag(self) -> &'static str {
        match self {
            Check::Pf => "PF",
            Check::Core => "CORE",
            Check::Pr => "PR",
            Check::PrStrong => "PR-STRONG",
            Check::CorSingle => "COR-SINGLE",
            Check::Stability => "STABILITY",
            Check::StabilityCardinal => "STABILITY-CARDINAL",
            Check::Distortion => "DISTORTION",
        }
    }

    pub fn from_tag(s: &str) -> Result<Check> {
        let norm = s.to_ascii_uppercase().replace('_', "-");
        Ok(match norm.as_str() {
            "PF" => Check::Pf,
            "CORE" => Check::Core,
            "PR" => Check::Pr,
            "PR-STRONG" => Check::PrStrong,
            "COR-SINGLE" => Check::CorSingle,
            "STABILITY" => Check::Stability,
            "STABILITY-CARDINAL" => Check::StabilityCardinal,
            "DISTORTION" => Check::Distortion,
            _ => return Err(Error::Parse(format!("unknown check `{s}`"))),
        })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// What the binding coalition deviates to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Candidate(usize),
    Candidates(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    /// Voter indices, ascending.
    pub coalition: Vec<usize>,
    pub target: Target,
    pub t: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub check: Check,
    pub alpha: Option<BigRational>,
    /// Inclusive range of subcommittee sizes audited.
    pub t_range: Option<(usize, usize)>,
    /// The smallest parameter for which the committee meets the definition.
    pub value: Measure,
    pub witness: Option<Witness>,
    pub bound: Option<SurdBound>,
    /// Set when coalitions were sampled rather than enumerated.
    pub lower_bound_only: bool,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub(crate) fn new(check: Check, value: Measure, witness: Option<Witness>) -> Self {
        AuditReport {
            check,
            alpha: None,
            t_range: None,
            value,
            witness,
            bound: None,
            lower_bound_only: false,
            notes: Vec::new(),
        }
    }

    pub fn with_bound(mut self, bound: Option<SurdBound>) -> Self {
        self.bound = bound;
        self
    }

    /// `Some(value ≤ bound)` when a bound is attached.
    pub fn satisfied(&self) -> Option<bool> {
        self.bound.as_ref().map(|b| b.admits(&self.value))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "audit {}", self.check);
        if let Some(a) = &self.alpha {
            let _ = writeln!(out, "alpha {}", format_rational(a));
        }
        if let Some((lo, hi)) = self.t_range {
            let _ = writeln!(out, "t-range {lo}..{hi}");
        }
        let _ = writeln!(out, "value {}", self.value);
        let _ = writeln!(out, "decimal {}", self.value.to_decimal(6));
        if let Some(b) = &self.bound {
            let _ = writeln!(out, "bound {b}");
            let _ = writeln!(out, "satisfied {}", b.admits(&self.value));
        }
        if self.lower_bound_only {
            let _ = writeln!(out, "mode sampled (lower bound only)");
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness {}", witness_summary(w));
        }
        for note in &self.notes {
            let _ = writeln!(out, "note {note}");
        }
        out
    }

    pub const CSV_HEADER: &'static str =
        "check,alpha,t_range,value,decimal,bound,satisfied,witness";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.check,
            self.alpha.as_ref().map(format_rational).unwrap_or_default(),
            self.t_range
                .map(|(a, b)| format!("{a}..{b}"))
                .unwrap_or_default(),
            self.value,
            self.value.to_decimal(6),
            self.bound
                .as_ref()
                .map(|b| format!("{:.6}", b.to_f64()))
                .unwrap_or_default(),
            self.satisfied().map(|s| s.to_string()).unwrap_or_default(),
            self.witness
                .as_ref()
                .map(witness_summary)
                .unwrap_or_default(),
        )
    }
}

/// One-line witness rendering with 1-based indices, e.g. `S={v1 v2} -> c3 t=1`.
pub fn witness_summary(w: &Witness) -> String {
    let coalition: Vec<String> = w.coalition.iter().map(|v| format!("v{}", v + 1)).collect();
    let target = match &w.target {
        Target::Candidate(c) => format!("c{}", c + 1),
        Target::Candidates(cs) => {
            let cs: Vec<String> = cs.iter().map(|c| format!("c{}", c + 1)).collect();
            format!("{{{}}}", cs.join(" "))
        }
    };
    match w.t {
        Some(t) => format!("S={{{}}} -> {target} t={t}", coalition.join(" ")),
        None => format!("S={{{}}} -> {target}", coalition.join(" ")),
    }
}
