//! Verdicts and the aggregated property report for an orthoset.

use serde::{Deserialize, Serialize};

use crate::automorphism::{self, TransitivityFailure};
use crate::config::Budgets;
use crate::error::Result;
use crate::lattice::OrthoLattice;
use crate::orthoset::Orthoset;
use crate::sasaki::{self, SpaceMode};

/// Outcome of a predicate: it holds, or it fails with a counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "counterexample", rename_all = "snake_case")]
pub enum Verdict<C> {
    Holds,
    Fails(C),
}

impl<C> Verdict<C> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&C> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(c) => Some(c),
        }
    }

    pub fn map<D>(self, f: impl FnOnce(C) -> D) -> Verdict<D> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Fails(c) => Verdict::Fails(f(c)),
        }
    }
}

/// A boolean verdict with a label-level witness, as emitted in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

impl Check {
    pub fn from_verdict<C: Serialize>(v: &Verdict<C>) -> Self {
        Check {
            holds: v.holds(),
            witness: v
                .counterexample()
                .map(|c| serde_json::to_value(c).expect("witness serializes")),
        }
    }

    pub fn holding(witness: Option<serde_json::Value>) -> Self {
        Check { holds: true, witness }
    }
}

/// Structural verdicts on one orthoset, with element labels in every
/// witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub size: usize,
    pub point_closed: Check,
    /// Empty and one-element orthosets count as irreducible.
    pub irreducible: Check,
    pub rank: usize,
    pub rank_witness: Vec<String>,
    pub dacey: Check,
    pub sasaki_naive: Check,
    pub sasaki_reduced: Check,
    /// `None` when the orthoset exceeds the automorphism-search bound.
    pub transitive: Option<Check>,
}

impl PropertyReport {
    pub fn build(x: &Orthoset, budgets: &Budgets) -> Result<Self> {
        let labels = |s| x.subset_labels(s);

        let point_closed = x.is_point_closed().map(|f| {
            serde_json::json!({
                "element": x.label(f.element),
                "closure": labels(f.closure),
            })
        });
        let irreducible = x.is_irreducible().map(labels);
        let (rank, rank_set) = x.rank(budgets)?;

        let lattice = OrthoLattice::from_orthoset(x, budgets)?;
        let dacey = lattice
            .is_orthomodular()
            .map(|(a, b)| serde_json::json!([lattice.label(a), lattice.label(b)]));

        let sasaki_check = |mode| -> Result<Check> {
            let report = sasaki::is_sasaki_space(x, mode, budgets)?;
            if report.is_sasaki() {
                return Ok(Check::holding(None));
            }
            let failures: Vec<_> = report
                .failures
                .iter()
                .map(|fail| {
                    serde_json::json!({
                        "target": labels(fail.target),
                        "refutation": fail.refutation.to_json(x),
                    })
                })
                .collect();
            Ok(Check {
                holds: false,
                witness: Some(serde_json::Value::Array(failures)),
            })
        };

        let transitive = if x.len() <= budgets.automorphism_elements {
            let v = automorphism::is_transitive(x, budgets)?;
            Some(Check::from_verdict(&v.map(|TransitivityFailure { from, to }| {
                serde_json::json!([x.label(from), x.label(to)])
            })))
        } else {
            None
        };

        Ok(PropertyReport {
            name: x.name().to_string(),
            size: x.len(),
            point_closed: Check::from_verdict(&point_closed),
            irreducible: Check::from_verdict(&irreducible),
            rank,
            rank_witness: labels(rank_set),
            dacey: Check::from_verdict(&dacey),
            sasaki_naive: sasaki_check(SpaceMode::Naive)?,
            sasaki_reduced: sasaki_check(SpaceMode::Reduced)?,
            transitive,
        })
    }
}
