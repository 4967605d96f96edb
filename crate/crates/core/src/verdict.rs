//! Structured outcomes of the theorem and lemma checkers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::inverse::{verify_axioms, CoreProbe, InverseKind};
use crate::matrix::{ComplexMatrix, Tolerance};

/// Results with executable checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "lem2.1")]
    Lemma2_1,
    #[serde(rename = "lem2.2")]
    Lemma2_2,
    #[serde(rename = "lem2.3")]
    Lemma2_3,
    #[serde(rename = "thm2.4")]
    Theorem2_4,
    #[serde(rename = "cor2.5")]
    Corollary2_5,
    #[serde(rename = "thm2.6")]
    Theorem2_6,
    #[serde(rename = "cor2.7")]
    Corollary2_7,
    #[serde(rename = "lem3.1")]
    Lemma3_1,
    #[serde(rename = "lem3.2")]
    Lemma3_2,
    #[serde(rename = "lem3.3")]
    Lemma3_3,
    #[serde(rename = "thm3.4")]
    Theorem3_4,
    #[serde(rename = "cor3.5")]
    Corollary3_5,
    #[serde(rename = "lem4.1")]
    Lemma4_1,
    #[serde(rename = "thm4.2")]
    Theorem4_2,
    #[serde(rename = "cor4.3")]
    Corollary4_3,
    #[serde(rename = "thm4.4")]
    Theorem4_4,
    #[serde(rename = "cor4.5")]
    Corollary4_5,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::Lemma2_1,
        TheoremId::Lemma2_2,
        TheoremId::Lemma2_3,
        TheoremId::Theorem2_4,
        TheoremId::Corollary2_5,
        TheoremId::Theorem2_6,
        TheoremId::Corollary2_7,
        TheoremId::Lemma3_1,
        TheoremId::Lemma3_2,
        TheoremId::Lemma3_3,
        TheoremId::Theorem3_4,
        TheoremId::Corollary3_5,
        TheoremId::Lemma4_1,
        TheoremId::Theorem4_2,
        TheoremId::Corollary4_3,
        TheoremId::Theorem4_4,
        TheoremId::Corollary4_5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Lemma2_1 => "lem2.1",
            TheoremId::Lemma2_2 => "lem2.2",
            TheoremId::Lemma2_3 => "lem2.3",
            TheoremId::Theorem2_4 => "thm2.4",
            TheoremId::Corollary2_5 => "cor2.5",
            TheoremId::Theorem2_6 => "thm2.6",
            TheoremId::Corollary2_7 => "cor2.7",
            TheoremId::Lemma3_1 => "lem3.1",
            TheoremId::Lemma3_2 => "lem3.2",
            TheoremId::Lemma3_3 => "lem3.3",
            TheoremId::Theorem3_4 => "thm3.4",
            TheoremId::Corollary3_5 => "cor3.5",
            TheoremId::Lemma4_1 => "lem4.1",
            TheoremId::Theorem4_2 => "thm4.2",
            TheoremId::Corollary4_3 => "cor4.3",
            TheoremId::Theorem4_4 => "thm4.4",
            TheoremId::Corollary4_5 => "cor4.5",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown theorem id `{s}`"))
    }
}

/// Whether a claim is an equivalence or a one-way implication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimForm {
    Biconditional,
    Implication,
}

/// One evaluated condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub holds: bool,
    pub residual: f64,
    /// The decision is within a factor of ten of its threshold.
    pub ambiguous: bool,
}

impl Condition {
    pub fn flag(holds: bool) -> Self {
        Self {
            holds,
            residual: 0.0,
            ambiguous: false,
        }
    }

    /// A decision made by a rank-style test, with its own borderline flag.
    pub fn decided(holds: bool, residual: f64, ambiguous: bool) -> Self {
        Self {
            holds,
            residual,
            ambiguous,
        }
    }

    /// `expr ~ 0`, normalized by `1 + scale`, where `scale` is the product
    /// of the norms of the factors producing `expr`.
    pub fn vanishes(expr: &ComplexMatrix, scale: f64, tol: Tolerance) -> Self {
        Self::from_residual(expr.norm_fro() / (1.0 + scale), tol)
    }

    /// `expr ~ 0` where `expr` is the product of `factors`.
    pub fn product_vanishes(factors: &[&ComplexMatrix], tol: Tolerance) -> Self {
        let prod = crate::matrix::chain(factors);
        let scale: f64 = factors.iter().map(|f| f.norm_fro()).product();
        Self::vanishes(&prod, scale, tol)
    }

    /// `lhs ~ rhs`, normalized by `1 + scale`.
    pub fn equal(lhs: &ComplexMatrix, rhs: &ComplexMatrix, scale: f64, tol: Tolerance) -> Self {
        Self::vanishes(&(lhs - rhs), scale, tol)
    }

    pub fn from_residual(residual: f64, tol: Tolerance) -> Self {
        Self {
            holds: tol.accepts(residual),
            residual,
            ambiguous: tol.is_borderline(residual),
        }
    }

    /// Core invertibility as decided by a [`CoreProbe`].
    pub fn core_invertible(probe: &CoreProbe) -> Self {
        Self {
            holds: probe.core_invertible(),
            residual: 0.0,
            ambiguous: probe.borderline || probe.inconsistent() || probe.ill_conditioned,
        }
    }

    pub fn decisive_failure(&self) -> bool {
        !self.holds && !self.ambiguous
    }
}

/// Truth of a conjunction of conditions, with a flag for numerically
/// undecidable outcomes.
fn conjunction(conds: &BTreeMap<String, Condition>) -> (bool, bool) {
    let holds = conds.values().all(|c| c.holds);
    let decisively_false = conds.values().any(Condition::decisive_failure);
    let ambiguous = !decisively_false && conds.values().any(|c| c.ambiguous);
    (holds, ambiguous)
}

/// A matrix recorded during a check, optionally tagged with the inverse
/// identities it must satisfy against a source matrix.
#[derive(Debug, Clone)]
pub struct Witness {
    pub value: ComplexMatrix,
    pub defining: Option<(InverseKind, ComplexMatrix)>,
}

impl Witness {
    /// Re-runs the defining axioms; untagged witnesses trivially pass.
    pub fn recheck(&self, tol: Tolerance) -> bool {
        match &self.defining {
            None => true,
            Some((kind, source)) => verify_axioms(*kind, source, &self.value, tol)
                .map(|r| r.holds)
                .unwrap_or(false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    NotMet,
    Ambiguous,
}

#[derive(Debug, Clone)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub form: ClaimForm,
    pub hypotheses: BTreeMap<String, Condition>,
    /// Conjuncts of side (1); for implications, the conclusion.
    pub side1: BTreeMap<String, Condition>,
    /// Conjuncts of side (2); empty for implications.
    pub side2: BTreeMap<String, Condition>,
    /// Quantities recorded for inspection that do not gate the verdict.
    pub recorded: BTreeMap<String, Condition>,
    pub witnesses: BTreeMap<String, Witness>,
    pub ill_conditioned: bool,
}

impl TheoremVerdict {
    pub fn new(theorem: TheoremId, form: ClaimForm) -> Self {
        Self {
            theorem,
            form,
            hypotheses: BTreeMap::new(),
            side1: BTreeMap::new(),
            side2: BTreeMap::new(),
            recorded: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            ill_conditioned: false,
        }
    }

    pub fn hypothesis(&mut self, name: &str, c: Condition) {
        self.hypotheses.insert(name.to_owned(), c);
    }

    pub fn side1(&mut self, name: &str, c: Condition) {
        self.side1.insert(name.to_owned(), c);
    }

    pub fn side2(&mut self, name: &str, c: Condition) {
        self.side2.insert(name.to_owned(), c);
    }

    pub fn record(&mut self, name: &str, c: Condition) {
        self.recorded.insert(name.to_owned(), c);
    }

    pub fn witness(&mut self, name: &str, value: ComplexMatrix) {
        self.witnesses.insert(
            name.to_owned(),
            Witness {
                value,
                defining: None,
            },
        );
    }

    pub fn witness_inverse(&mut self, name: &str, value: ComplexMatrix, kind: InverseKind, source: &ComplexMatrix) {
        self.witnesses.insert(
            name.to_owned(),
            Witness {
                value,
                defining: Some((kind, source.clone())),
            },
        );
    }

    pub fn hypotheses_met(&self) -> bool {
        self.hypotheses.values().all(|c| c.holds)
    }

    pub fn side1_holds(&self) -> bool {
        conjunction(&self.side1).0
    }

    pub fn side2_holds(&self) -> Option<bool> {
        match self.form {
            ClaimForm::Biconditional => Some(conjunction(&self.side2).0),
            ClaimForm::Implication => None,
        }
    }

    /// `side1 == side2` for equivalences, the conclusion for implications.
    /// `None` unless the hypotheses hold.
    pub fn biconditional_ok(&self) -> Option<bool> {
        if !self.hypotheses_met() {
            return None;
        }
        Some(match self.side2_holds() {
            Some(s2) => self.side1_holds() == s2,
            None => self.side1_holds(),
        })
    }

    pub fn ambiguous(&self) -> bool {
        let (_, hyp_amb) = conjunction(&self.hypotheses);
        let (_, s1_amb) = conjunction(&self.side1);
        let (_, s2_amb) = conjunction(&self.side2);
        self.ill_conditioned || hyp_amb || s1_amb || s2_amb
    }

    pub fn outcome(&self) -> Outcome {
        if self.hypotheses.values().any(Condition::decisive_failure) {
            return Outcome::NotMet;
        }
        if self.ambiguous() {
            return Outcome::Ambiguous;
        }
        match self.biconditional_ok() {
            None => Outcome::NotMet,
            Some(true) => Outcome::Pass,
            Some(false) => Outcome::Fail,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.hypotheses
            .values()
            .chain(self.side1.values())
            .chain(self.side2.values())
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }

    pub fn witness_norms(&self) -> BTreeMap<String, f64> {
        self.witnesses
            .iter()
            .map(|(k, w)| (k.clone(), w.value.norm_fro()))
            .collect()
    }

    /// Re-verifies every tagged witness.
    pub fn witnesses_recheck(&self, tol: Tolerance) -> bool {
        self.witnesses.values().all(|w| w.recheck(tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.as_str()));
        }
        assert!("thm9.9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn outcome_logic() {
        let tol = Tolerance::default();
        let mut v = TheoremVerdict::new(TheoremId::Theorem2_4, ClaimForm::Biconditional);
        v.hypothesis("h", Condition::flag(true));
        v.side1("s1", Condition::flag(true));
        v.side2("s2", Condition::flag(false));
        assert_eq!(v.outcome(), Outcome::Fail);
        v.side2("s2", Condition::flag(true));
        assert_eq!(v.outcome(), Outcome::Pass);

        // borderline residual makes the instance ambiguous
        v.side1("edge", Condition::from_residual(2e-9, tol));
        assert!(v.ambiguous());
        assert_eq!(v.outcome(), Outcome::Ambiguous);

        // a decisive failure elsewhere in the side settles it
        v.side1("clear", Condition::flag(false));
        assert!(!v.ambiguous());
        assert_eq!(v.outcome(), Outcome::Fail);

        v.hypothesis("h2", Condition::flag(false));
        assert_eq!(v.outcome(), Outcome::NotMet);
        assert_eq!(v.biconditional_ok(), None);
    }

    #[test]
    fn implication_uses_conclusion() {
        let mut v = TheoremVerdict::new(TheoremId::Lemma3_2, ClaimForm::Implication);
        v.hypothesis("h", Condition::flag(true));
        v.side1("conclusion", Condition::flag(true));
        assert_eq!(v.side2_holds(), None);
        assert_eq!(v.outcome(), Outcome::Pass);
    }
}
