//! Inequality records: every rigorous comparison in a verification pass is
//! stored with both sides, the claimed relation, and the achieved slack, so
//! downstream consumers can re-audit rather than trust a boolean.

use alloc::string::String;
use alloc::vec::Vec;

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Lt,
    Ge,
    Gt,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Self::Le => "<=",
            Self::Lt => "<",
            Self::Ge => ">=",
            Self::Gt => ">",
        }
    }
}

/// One rigorously checked comparison `lhs relation rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub label: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub relation: Relation,
}

impl Inequality {
    pub fn new(label: impl Into<String>, lhs: Rational, relation: Relation, rhs: Rational) -> Self {
        Self {
            label: label.into(),
            lhs,
            rhs,
            relation,
        }
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Le => self.lhs <= self.rhs,
            Relation::Lt => self.lhs < self.rhs,
            Relation::Ge => self.lhs >= self.rhs,
            Relation::Gt => self.lhs > self.rhs,
        }
    }

    /// Signed distance by which the comparison holds (negative when
    /// violated): `rhs − lhs` for ≤/<, `lhs − rhs` for ≥/>.
    pub fn slack(&self) -> Rational {
        match self.relation {
            Relation::Le | Relation::Lt => &self.rhs - &self.lhs,
            Relation::Ge | Relation::Gt => &self.lhs - &self.rhs,
        }
    }
}

impl core::fmt::Display for Inequality {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "{}: {} {} {} ({}, slack {})",
            self.label,
            self.lhs.decimal_approx(12),
            self.relation.symbol(),
            self.rhs.decimal_approx(12),
            if self.holds() { "holds" } else { "VIOLATED" },
            self.slack().decimal_approx(12),
        )
    }
}

/// A titled group of inequalities forming one verification pass.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub title: String,
    pub checks: Vec<Inequality>,
    /// Free-form caveats attached during verification (e.g. inferred
    /// conventions), carried into the certificate notes.
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Inequality) {
        self.checks.push(check);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(Inequality::holds)
    }

    /// Labels of violated checks, for error reporting.
    pub fn violations(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.holds())
            .map(|c| c.label.as_str())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn slack_signs() {
        let ok = Inequality::new("a", q("1"), Relation::Lt, q("2"));
        assert!(ok.holds());
        assert_eq!(ok.slack(), q("1"));
        let bad = Inequality::new("b", q("3"), Relation::Le, q("2"));
        assert!(!bad.holds());
        assert_eq!(bad.slack(), q("-1"));
        let ge = Inequality::new("c", q("5"), Relation::Ge, q("5"));
        assert!(ge.holds());
        assert_eq!(ge.slack(), q("0"));
        let gt_eq = Inequality::new("d", q("5"), Relation::Gt, q("5"));
        assert!(!gt_eq.holds());
    }

    #[test]
    fn report_aggregation() {
        let mut r = CheckReport::new("demo");
        r.push(Inequality::new("x", q("1"), Relation::Lt, q("2")));
        assert!(r.all_hold());
        r.push(Inequality::new("y", q("2"), Relation::Lt, q("1")));
        assert!(!r.all_hold());
        assert_eq!(r.violations(), alloc::vec!["y"]);
    }
}
