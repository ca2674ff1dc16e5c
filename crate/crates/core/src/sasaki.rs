//! Sasaki maps on finite orthosets.
//!
//! A Sasaki map to an orthoclosed set `A` is a map `φ: ∁A⊥ → A` that fixes
//! `A` pointwise (S1) and satisfies `φ(e) ⊥ f ⟺ e ⊥ φ(f)` for all `e, f` in
//! its domain (S2). This module verifies candidate maps, searches for them,
//! and derives the induced operators on the orthoclosed sets.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::lattice::{LatticeOrthoset, OrthoLattice};
use crate::orthoset::Orthoset;
use crate::report::Verdict;
use crate::subset::Subset;

/// A Sasaki map to `target`, as a table over its domain `∁target⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SasakiMapWitness {
    pub target: Subset,
    pub table: BTreeMap<usize, usize>,
}

/// Label-level JSON form of a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub target: Vec<String>,
    pub map: BTreeMap<String, String>,
}

impl SasakiMapWitness {
    pub fn domain(&self) -> Subset {
        self.table.keys().copied().collect()
    }

    pub fn apply(&self, e: usize) -> Option<usize> {
        self.table.get(&e).copied()
    }

    pub fn to_doc(&self, x: &Orthoset) -> WitnessDoc {
        WitnessDoc {
            target: x.subset_labels(self.target),
            map: self
                .table
                .iter()
                .map(|(&e, &v)| (x.label(e).to_string(), x.label(v).to_string()))
                .collect(),
        }
    }

    pub fn from_doc(x: &Orthoset, doc: &WitnessDoc) -> Result<Self> {
        let target = x.subset_from_labels(&doc.target)?;
        let table = doc
            .map
            .iter()
            .map(|(e, v)| Ok((x.index_of(e)?, x.index_of(v)?)))
            .collect::<Result<_>>()?;
        Ok(SasakiMapWitness { target, table })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SasakiViolation {
    /// `φ(e) ≠ e` for `e` in the target.
    S1 { element: usize },
    /// `φ(e) ⊥ f` and `e ⊥ φ(f)` disagree.
    S2 { e: usize, f: usize },
}

/// Checks (S1) and (S2) for `table` as a map to `target`. (S2) is checked
/// over all ordered pairs of the domain, the diagonal included.
pub fn is_sasaki_map(
    x: &Orthoset,
    target: Subset,
    table: &BTreeMap<usize, usize>,
) -> Result<Verdict<SasakiViolation>> {
    x.check_subset(target)?;
    if !x.is_orthoclosed(target) {
        return Err(Error::NotOrthoclosed(x.format_subset(target)));
    }
    let domain = x.perp_of(target).complement(x.len());
    let keys: Subset = table.keys().copied().filter(|&k| k < x.len()).collect();
    if keys != domain || table.len() != domain.len() {
        return Err(Error::WrongDomain(format!(
            "expected {}, got {} keys",
            x.format_subset(domain),
            table.len()
        )));
    }
    for (&e, &v) in table {
        if !target.contains(v) {
            return Err(Error::RangeEscapes {
                element: x.label(e).to_string(),
                value: if v < x.len() {
                    x.label(v).to_string()
                } else {
                    format!("#{v}")
                },
            });
        }
    }
    for e in target {
        if table[&e] != e {
            return Ok(Verdict::Fails(SasakiViolation::S1 { element: e }));
        }
    }
    for (&e, &pe) in table {
        for (&f, &pf) in table {
            if x.is_orthogonal(pe, f) != x.is_orthogonal(e, pf) {
                return Ok(Verdict::Fails(SasakiViolation::S2 { e, f }));
            }
        }
    }
    Ok(Verdict::Holds)
}

/// One rejected value at a dead end: `stuck ↦ value` contradicts (S2)
/// against the already assigned `conflicts_with`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rejection {
    pub value: usize,
    pub conflicts_with: usize,
}

/// A partial assignment (the identity on the target plus `stack`) under
/// which `stuck` has no admissible value. When `stack` is empty this alone
/// proves that no Sasaki map exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub target: Subset,
    pub stack: Vec<(usize, usize)>,
    pub stuck: usize,
    pub rejected: Vec<Rejection>,
    /// Search nodes visited before exhaustion.
    pub nodes: usize,
}

impl Refutation {
    /// Re-checks the dead end from scratch: the partial assignment is
    /// consistent, and every value in the target conflicts as recorded.
    pub fn replay(&self, x: &Orthoset) -> bool {
        let mut assigned: Vec<(usize, usize)> = self.target.iter().map(|a| (a, a)).collect();
        assigned.extend(self.stack.iter().copied());
        let consistent =
            |e: usize, v: usize, f: usize, pf: usize| x.is_orthogonal(v, f) == x.is_orthogonal(e, pf);
        let prefix_ok = assigned.iter().all(|&(e, v)| {
            self.target.contains(v) && assigned.iter().all(|&(f, pf)| consistent(e, v, f, pf))
        });
        let all_values_recorded = self.rejected.len() == self.target.len()
            && self.rejected.iter().map(|r| r.value).collect::<Subset>() == self.target;
        let rejections_hold = self.rejected.iter().all(|r| {
            assigned
                .iter()
                .find(|&&(f, _)| f == r.conflicts_with)
                .is_some_and(|&(f, pf)| !consistent(self.stuck, r.value, f, pf))
        });
        prefix_ok && all_values_recorded && rejections_hold
    }

    pub fn is_complete(&self) -> bool {
        self.stack.is_empty()
    }

    pub fn to_json(&self, x: &Orthoset) -> serde_json::Value {
        serde_json::json!({
            "target": x.subset_labels(self.target),
            "forced": self.target.iter().map(|a| [x.label(a), x.label(a)]).collect::<Vec<_>>(),
            "stack": self.stack.iter().map(|&(e, v)| [x.label(e), x.label(v)]).collect::<Vec<_>>(),
            "stuck": x.label(self.stuck),
            "rejected": self.rejected.iter().map(|r| serde_json::json!({
                "value": x.label(r.value),
                "conflicts_with": x.label(r.conflicts_with),
            })).collect::<Vec<_>>(),
            "nodes": self.nodes,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SasakiVerdict {
    Exists(SasakiMapWitness),
    Refuted(Refutation),
}

impl SasakiVerdict {
    pub fn exists(&self) -> bool {
        matches!(self, SasakiVerdict::Exists(_))
    }

    pub fn witness(&self) -> Option<&SasakiMapWitness> {
        match self {
            SasakiVerdict::Exists(w) => Some(w),
            SasakiVerdict::Refuted(_) => None,
        }
    }
}

/// Result of an exhaustive search for up to `limit` Sasaki maps.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Solutions in lexicographic order.
    pub solutions: Vec<SasakiMapWitness>,
    pub nodes: usize,
    /// The shallowest dead end met, if any.
    pub dead_end: Option<Refutation>,
}

struct Search<'a> {
    x: &'a Orthoset,
    target: Subset,
    free: Vec<usize>,
    assigned: Vec<(usize, usize)>,
    limit: usize,
    node_limit: usize,
    nodes: usize,
    solutions: Vec<SasakiMapWitness>,
    dead_end: Option<Refutation>,
}

impl Search<'_> {
    fn conflict(&self, e: usize, v: usize) -> Option<usize> {
        self.assigned
            .iter()
            .find(|&&(f, pf)| self.x.is_orthogonal(v, f) != self.x.is_orthogonal(e, pf))
            .map(|&(f, _)| f)
    }

    fn run(&mut self, depth: usize) -> Result<()> {
        if self.solutions.len() >= self.limit {
            return Ok(());
        }
        let Some(&e) = self.free.get(depth) else {
            self.solutions.push(SasakiMapWitness {
                target: self.target,
                table: self.assigned.iter().copied().collect(),
            });
            return Ok(());
        };
        let mut any = false;
        let mut rejected = Vec::new();
        for v in self.target {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                return Err(Error::Budget {
                    what: "Sasaki map search nodes",
                    limit: self.node_limit,
                });
            }
            // (S2) for the pair (e, e) holds by symmetry, so only the
            // previously assigned elements need checking
            if let Some(f) = self.conflict(e, v) {
                rejected.push(Rejection {
                    value: v,
                    conflicts_with: f,
                });
                continue;
            }
            any = true;
            self.assigned.push((e, v));
            self.run(depth + 1)?;
            self.assigned.pop();
            if self.solutions.len() >= self.limit {
                return Ok(());
            }
        }
        if !any {
            let stack_len = self.assigned.len() - self.target.len();
            let shallower = self.dead_end.as_ref().is_none_or(|d| stack_len < d.stack.len());
            if shallower {
                self.dead_end = Some(Refutation {
                    target: self.target,
                    stack: self.assigned[self.target.len()..].to_vec(),
                    stuck: e,
                    rejected,
                    nodes: 0,
                });
            }
        }
        Ok(())
    }
}

/// Exhaustive backtracking for up to `limit` Sasaki maps to `target`.
///
/// Free elements `∁target⊥ ∖ target` are assigned in index order, values
/// tried in index order, each value checked against every assigned pair
/// including the forced identity on `target`.
pub fn search_sasaki_maps(
    x: &Orthoset,
    target: Subset,
    limit: usize,
    budgets: &Budgets,
) -> Result<SearchOutcome> {
    x.check_subset(target)?;
    if !x.is_orthoclosed(target) {
        return Err(Error::NotOrthoclosed(x.format_subset(target)));
    }
    let domain = x.perp_of(target).complement(x.len());
    let mut search = Search {
        x,
        target,
        free: domain.difference(target).iter().collect(),
        assigned: target.iter().map(|a| (a, a)).collect(),
        limit,
        node_limit: budgets.search_nodes,
        nodes: 0,
        solutions: Vec::new(),
        dead_end: None,
    };
    search.run(0)?;
    let nodes = search.nodes;
    Ok(SearchOutcome {
        solutions: search.solutions,
        nodes,
        dead_end: search.dead_end.map(|mut d| {
            d.nodes = nodes;
            d
        }),
    })
}

/// The lexicographically least Sasaki map to `target`, or a refutation.
pub fn find_sasaki_map(x: &Orthoset, target: Subset, budgets: &Budgets) -> Result<SasakiVerdict> {
    let outcome = search_sasaki_maps(x, target, 1, budgets)?;
    Ok(match outcome.solutions.into_iter().next() {
        Some(w) => SasakiVerdict::Exists(w),
        None => SasakiVerdict::Refuted(
            outcome
                .dead_end
                .expect("an exhausted search with free variables has a dead end"),
        ),
    })
}

/// Sufficient conditions for a Sasaki map that need no search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shortcut {
    /// `A⊥ = ∁A`; the identity on `A`.
    ComplementIsPerp,
    /// `∁A⊥` is a ⊥-set, which forces `A⊥ = ∁A`.
    DomainIsPerpSet,
    /// `A = {a}`; the constant map `a`.
    Singleton,
}

/// All shortcut clauses that hold for `target`, in order (a), (b), (c).
pub fn shortcut_clauses(x: &Orthoset, target: Subset) -> Result<Vec<Shortcut>> {
    x.check_subset(target)?;
    if !x.is_orthoclosed(target) {
        return Err(Error::NotOrthoclosed(x.format_subset(target)));
    }
    let perp = x.perp_of(target);
    let domain = perp.complement(x.len());
    let mut out = Vec::new();
    if perp == target.complement(x.len()) {
        out.push(Shortcut::ComplementIsPerp);
    }
    if x.is_perp_set(domain) {
        out.push(Shortcut::DomainIsPerpSet);
    }
    if target.len() == 1 {
        out.push(Shortcut::Singleton);
    }
    Ok(out)
}

/// Builds a Sasaki map from the first shortcut clause that applies.
pub fn shortcut_construct(x: &Orthoset, target: Subset) -> Result<Option<(Shortcut, SasakiMapWitness)>> {
    let Some(&clause) = shortcut_clauses(x, target)?.first() else {
        return Ok(None);
    };
    let domain = x.perp_of(target).complement(x.len());
    let table = match clause {
        Shortcut::ComplementIsPerp | Shortcut::DomainIsPerpSet => target.iter().map(|a| (a, a)).collect(),
        Shortcut::Singleton => {
            let a = target.single().expect("singleton");
            domain.iter().map(|e| (e, a)).collect()
        }
    };
    Ok(Some((clause, SasakiMapWitness { target, table })))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceMode {
    /// Every orthoclosed set.
    Naive,
    /// Only the sets `D⊥` for ⊥-sets `D`.
    Reduced,
}

#[derive(Debug, Clone)]
pub struct SpaceFailure {
    pub target: Subset,
    pub refutation: Refutation,
}

#[derive(Debug, Clone)]
pub struct SpaceReport {
    pub mode: SpaceMode,
    /// Every target checked, in canonical order.
    pub targets: Vec<Subset>,
    /// Witnesses for the targets that succeeded.
    pub witnesses: Vec<SasakiMapWitness>,
    /// Every failing target, in canonical order.
    pub failures: Vec<SpaceFailure>,
}

impl SpaceReport {
    pub fn is_sasaki(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&SpaceFailure> {
        self.failures.first()
    }

    pub fn failure_for(&self, target: Subset) -> Option<&SpaceFailure> {
        self.failures.iter().find(|f| f.target == target)
    }

    pub fn witness_for(&self, target: Subset) -> Option<&SasakiMapWitness> {
        self.witnesses.iter().find(|w| w.target == target)
    }
}

/// Decides whether every target (per `mode`) admits a Sasaki map. All
/// targets are searched, so every failing target is reported.
pub fn is_sasaki_space(x: &Orthoset, mode: SpaceMode, budgets: &Budgets) -> Result<SpaceReport> {
    let targets = match mode {
        SpaceMode::Naive => x.orthoclosed_family(budgets)?,
        SpaceMode::Reduced => {
            let mut t: Vec<Subset> = x.perp_sets(budgets)?.into_iter().map(|d| x.perp_of(d)).collect();
            t.sort_by(Subset::canonical_cmp);
            t.dedup();
            t
        }
    };
    let mut report = SpaceReport {
        mode,
        targets: Vec::new(),
        witnesses: Vec::new(),
        failures: Vec::new(),
    };
    for target in targets {
        report.targets.push(target);
        match find_sasaki_map(x, target, budgets)? {
            SasakiVerdict::Exists(w) => report.witnesses.push(w),
            SasakiVerdict::Refuted(refutation) => {
                report.failures.push(SpaceFailure { target, refutation });
            }
        }
    }
    Ok(report)
}

/// The Sasaki map to `target = X ∩ ↓x` obtained by restricting the Sasaki
/// projection `π_x` of an orthomodular lattice, where `X = L ∖ {0}`.
pub fn sasaki_from_oml(l: &OrthoLattice, lo: &LatticeOrthoset, target: Subset) -> Result<SasakiMapWitness> {
    if let Verdict::Fails((a, b)) = l.is_orthomodular() {
        return Err(Error::NotOrthomodular(
            l.label(a).to_string(),
            l.label(b).to_string(),
        ));
    }
    let x = &lo.orthoset;
    x.check_subset(target)?;
    let below = |p: usize| -> Subset {
        lo.elements
            .iter()
            .enumerate()
            .filter(|&(_, &e)| l.leq(e, p))
            .map(|(i, _)| i)
            .collect()
    };
    let Some(p) = (0..l.len()).find(|&p| below(p) == target) else {
        return Err(Error::NotPrincipal(x.format_subset(target)));
    };
    let position: HashMap<usize, usize> = lo.elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let pp = l.ortho(p);
    let table: BTreeMap<usize, usize> = lo
        .elements
        .iter()
        .enumerate()
        .filter(|&(_, &e)| !l.leq(e, pp))
        .map(|(i, &e)| (i, position[&l.sasaki_projection(p, e)]))
        .collect();
    let witness = SasakiMapWitness { target, table };
    match is_sasaki_map(x, target, &witness.table)? {
        Verdict::Holds => Ok(witness),
        Verdict::Fails(v) => Err(Error::Hypothesis(format!(
            "restricted Sasaki projection violates {v:?}"
        ))),
    }
}

/// `B ↦ {φ_A(e) : e ∈ B, e ∉ A⊥}⊥⊥` for the map `w` to `A`.
pub fn bar_phi(x: &Orthoset, w: &SasakiMapWitness, b: Subset) -> Result<Subset> {
    x.check_subset(b)?;
    if !x.is_orthoclosed(b) {
        return Err(Error::NotOrthoclosed(x.format_subset(b)));
    }
    Ok(bar_phi_unchecked(x, w, b))
}

fn bar_phi_unchecked(x: &Orthoset, w: &SasakiMapWitness, b: Subset) -> Subset {
    let image: Subset = b.intersection(w.domain()).iter().map(|e| w.table[&e]).collect();
    x.close(image)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinchLaw {
    /// `B ⊆ C ⇒ φ̄_A(B) ⊆ φ̄_A(C)`.
    Monotone,
    /// `φ̄_A(X) ⊆ φ̄_B(X) ⇒ φ̄_A ∘ φ̄_B = φ̄_A`.
    Composition,
    /// `φ̄_A(φ̄_A(B)⊥) ⊆ B⊥`.
    Orthogonality,
    /// `φ̄_A(B) ⊥ C ⟺ B ⊥ φ̄_A(C)`.
    SelfAdjoint,
    /// `φ̄_A(B ∨ C) = φ̄_A(B) ∨ φ̄_A(C)` and `φ̄_A(0) = 0`.
    JoinPreserving,
    /// `φ̄_A(X) = A`.
    Range,
    /// `φ̄_A ∘ φ̄_B = φ̄_A ⟺ φ̄_B ∘ φ̄_A = φ̄_A ⟺ A ⊆ B`.
    OrderDetermination,
}

impl FinchLaw {
    pub const ALL: [FinchLaw; 7] = [
        FinchLaw::Monotone,
        FinchLaw::Composition,
        FinchLaw::Orthogonality,
        FinchLaw::SelfAdjoint,
        FinchLaw::JoinPreserving,
        FinchLaw::Range,
        FinchLaw::OrderDetermination,
    ];
}

/// Laws of the induced operators `φ̄_A` over the orthoclosed family.
/// Counterexamples are tuples of family positions `(A, B, C)` as far as
/// the law quantifies.
#[derive(Debug, Clone)]
pub struct FinchReport {
    pub family: Vec<Subset>,
    pub witnesses: Vec<SasakiMapWitness>,
    /// `bar[a][b]` is the family position of `φ̄_{family[a]}(family[b])`.
    pub bar: Vec<Vec<usize>>,
    pub laws: Vec<(FinchLaw, Verdict<Vec<usize>>)>,
}

impl FinchReport {
    pub fn all_hold(&self) -> bool {
        self.laws.iter().all(|(_, v)| v.holds())
    }

    pub fn law(&self, law: FinchLaw) -> &Verdict<Vec<usize>> {
        &self
            .laws
            .iter()
            .find(|(l, _)| *l == law)
            .expect("every law is checked")
            .1
    }
}

pub fn finch_report(x: &Orthoset, budgets: &Budgets) -> Result<FinchReport> {
    let space = is_sasaki_space(x, SpaceMode::Naive, budgets)?;
    if let Some(fail) = space.first_failure() {
        return Err(Error::Hypothesis(format!(
            "not a Sasaki space: no Sasaki map to {}",
            x.format_subset(fail.target)
        )));
    }
    let family = space.targets.clone();
    let witnesses = space.witnesses;
    let n = family.len();
    let pos: HashMap<Subset, usize> = family.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let bar: Vec<Vec<usize>> = witnesses
        .iter()
        .map(|w| family.iter().map(|&b| pos[&bar_phi_unchecked(x, w, b)]).collect())
        .collect();
    let set = |i: usize| family[i];
    let perp = |i: usize| pos[&x.perp_of(family[i])];
    let join = |i: usize, j: usize| pos[&x.close(family[i].union(family[j]))];
    let top = pos[&x.all()];
    let bottom = pos[&x.close(Subset::EMPTY)];
    let orth = |i: usize, j: usize| family[i].is_subset(x.perp_of(family[j]));
    let composes = |a: usize, b: usize| (0..n).all(|c| bar[a][bar[b][c]] == bar[a][c]);

    let first = |found: Option<Vec<usize>>| found.map_or(Verdict::Holds, Verdict::Fails);
    let triples = || (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))));
    let pairs = || (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)));

    let laws = vec![
        (
            FinchLaw::Monotone,
            first(
                triples()
                    .find(|&(a, b, c)| set(b).is_subset(set(c)) && !set(bar[a][b]).is_subset(set(bar[a][c])))
                    .map(|(a, b, c)| vec![a, b, c]),
            ),
        ),
        (
            FinchLaw::Composition,
            first(
                pairs()
                    .find(|&(a, b)| set(bar[a][top]).is_subset(set(bar[b][top])) && !composes(a, b))
                    .map(|(a, b)| vec![a, b]),
            ),
        ),
        (
            FinchLaw::Orthogonality,
            first(
                pairs()
                    .find(|&(a, b)| !set(bar[a][perp(bar[a][b])]).is_subset(set(perp(b))))
                    .map(|(a, b)| vec![a, b]),
            ),
        ),
        (
            FinchLaw::SelfAdjoint,
            first(
                triples()
                    .find(|&(a, b, c)| orth(bar[a][b], c) != orth(b, bar[a][c]))
                    .map(|(a, b, c)| vec![a, b, c]),
            ),
        ),
        (
            FinchLaw::JoinPreserving,
            first(
                (0..n)
                    .find(|&a| bar[a][bottom] != bottom)
                    .map(|a| vec![a])
                    .or_else(|| {
                        triples()
                            .find(|&(a, b, c)| bar[a][join(b, c)] != join(bar[a][b], bar[a][c]))
                            .map(|(a, b, c)| vec![a, b, c])
                    }),
            ),
        ),
        (
            FinchLaw::Range,
            first((0..n).find(|&a| bar[a][top] != a).map(|a| vec![a])),
        ),
        (
            FinchLaw::OrderDetermination,
            first(
                pairs()
                    .find(|&(a, b)| {
                        let ab = composes(a, b);
                        let ba = (0..n).all(|c| bar[b][bar[a][c]] == bar[a][c]);
                        ab != ba || ab != set(a).is_subset(set(b))
                    })
                    .map(|(a, b)| vec![a, b]),
            ),
        ),
    ];
    Ok(FinchReport {
        family,
        witnesses,
        bar,
        laws,
    })
}

/// Per-target results of the closed-form check on a point-closed Sasaki
/// space.
#[derive(Debug, Clone)]
pub struct FormulaReport {
    pub targets: usize,
    pub evaluations: usize,
    /// `(A, e)` with `{φ_A(e)} ≠ ({e} ∨ A⊥) ∩ A`.
    pub formula_failures: Vec<(Subset, usize)>,
    /// Targets admitting more than one Sasaki map.
    pub non_unique: Vec<Subset>,
}

impl FormulaReport {
    pub fn holds(&self) -> bool {
        self.formula_failures.is_empty() && self.non_unique.is_empty()
    }
}

/// `({e} ∨ A⊥) ∩ A`, computed in the lattice of orthoclosed sets.
pub fn formula_image(x: &Orthoset, target: Subset, e: usize) -> Subset {
    x.close(Subset::singleton(e).union(x.perp_of(target)))
        .intersection(target)
}

/// For every orthoclosed `A` and `e ∉ A⊥`, checks that the found Sasaki map
/// satisfies `{φ_A(e)} = ({e} ∨ A⊥) ∩ A` and that no other Sasaki map to
/// `A` exists.
pub fn sasaki_formula_check(x: &Orthoset, budgets: &Budgets) -> Result<FormulaReport> {
    if let Verdict::Fails(f) = x.is_point_closed() {
        return Err(Error::Hypothesis(format!(
            "not point-closed: {{{}}}⊥⊥ = {}",
            x.label(f.element),
            x.format_subset(f.closure)
        )));
    }
    let family = x.orthoclosed_family(budgets)?;
    let mut report = FormulaReport {
        targets: family.len(),
        evaluations: 0,
        formula_failures: Vec::new(),
        non_unique: Vec::new(),
    };
    for target in family {
        let outcome = search_sasaki_maps(x, target, 2, budgets)?;
        let Some(w) = outcome.solutions.first() else {
            return Err(Error::Hypothesis(format!(
                "not a Sasaki space: no Sasaki map to {}",
                x.format_subset(target)
            )));
        };
        if outcome.solutions.len() > 1 {
            report.non_unique.push(target);
        }
        for (&e, &v) in &w.table {
            report.evaluations += 1;
            if formula_image(x, target, e) != Subset::singleton(v) {
                report.formula_failures.push((target, e));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> Orthoset {
        Orthoset::from_labels(
            "cycle4",
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap()
    }

    fn path4() -> Orthoset {
        Orthoset::from_labels(
            "path4",
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d")],
        )
        .unwrap()
    }

    fn set(x: &Orthoset, l: &[&str]) -> Subset {
        x.subset_from_labels(l).unwrap()
    }

    #[test]
    fn identity_on_whole_space() {
        let x = path4();
        let table = (0..4).map(|i| (i, i)).collect();
        assert!(is_sasaki_map(&x, x.all(), &table).unwrap().holds());
    }

    #[test]
    fn verification_errors() {
        let x = path4();
        let not_closed = set(&x, &["a"]);
        assert!(matches!(
            is_sasaki_map(&x, not_closed, &BTreeMap::new()),
            Err(Error::NotOrthoclosed(_))
        ));
        let a = set(&x, &["a", "c"]);
        // domain should be {a, c, d}
        let short: BTreeMap<usize, usize> = [(0, 0), (2, 2)].into_iter().collect();
        assert!(matches!(is_sasaki_map(&x, a, &short), Err(Error::WrongDomain(_))));
        let escaping: BTreeMap<usize, usize> = [(0, 0), (2, 2), (3, 1)].into_iter().collect();
        assert!(matches!(
            is_sasaki_map(&x, a, &escaping),
            Err(Error::RangeEscapes { .. })
        ));
    }

    #[test]
    fn s1_violation_is_reported() {
        let x = cycle4();
        let a = set(&x, &["a", "c"]);
        let swapped: BTreeMap<usize, usize> = [(0, 2), (2, 0)].into_iter().collect();
        assert_eq!(
            is_sasaki_map(&x, a, &swapped).unwrap(),
            Verdict::Fails(SasakiViolation::S1 { element: 0 })
        );
    }

    #[test]
    fn path4_target_ac_has_no_map() {
        let x = path4();
        let a = set(&x, &["a", "c"]);
        for v in [0, 2] {
            let t: BTreeMap<usize, usize> = [(0, 0), (2, 2), (3, v)].into_iter().collect();
            assert!(!is_sasaki_map(&x, a, &t).unwrap().holds());
        }
        let SasakiVerdict::Refuted(r) = find_sasaki_map(&x, a, &Budgets::default()).unwrap() else {
            panic!("expected refutation");
        };
        assert_eq!(r.stuck, 3);
        assert!(r.is_complete());
        assert!(r.replay(&x));
    }

    #[test]
    fn empty_and_full_targets() {
        let x = path4();
        let empty = x.close(Subset::EMPTY);
        assert_eq!(empty, Subset::EMPTY);
        let w = find_sasaki_map(&x, empty, &Budgets::default()).unwrap();
        assert_eq!(w.witness().unwrap().table.len(), 0);
        let w = find_sasaki_map(&x, x.all(), &Budgets::default()).unwrap();
        assert!(w.witness().unwrap().table.iter().all(|(k, v)| k == v));
    }

    #[test]
    fn search_budget_is_enforced() {
        let x = path4();
        let tight = Budgets {
            search_nodes: 1,
            ..Budgets::default()
        };
        assert!(matches!(
            find_sasaki_map(&x, set(&x, &["a", "c"]), &tight),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn replay_rejects_tampered_trace() {
        let x = path4();
        let SasakiVerdict::Refuted(mut r) =
            find_sasaki_map(&x, set(&x, &["a", "c"]), &Budgets::default()).unwrap()
        else {
            panic!()
        };
        r.rejected.pop();
        assert!(!r.replay(&x));
    }

    #[test]
    fn bar_phi_on_complement_is_bottom() {
        let x = cycle4();
        let a = set(&x, &["a", "c"]);
        let w = find_sasaki_map(&x, a, &Budgets::default()).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(bar_phi(&x, w, set(&x, &["b", "d"])).unwrap(), Subset::EMPTY);
        assert_eq!(bar_phi(&x, w, x.all()).unwrap(), a);
        assert!(matches!(
            bar_phi(&x, w, set(&x, &["a"])),
            Err(Error::NotOrthoclosed(_))
        ));
    }

    #[test]
    fn witness_doc_roundtrip() {
        let x = cycle4();
        let a = set(&x, &["a", "c"]);
        let w = find_sasaki_map(&x, a, &Budgets::default())
            .unwrap()
            .witness()
            .unwrap()
            .clone();
        let doc = w.to_doc(&x);
        assert_eq!(doc.target, vec!["a", "c"]);
        assert_eq!(SasakiMapWitness::from_doc(&x, &doc).unwrap(), w);
    }

    #[test]
    fn formula_requires_point_closed() {
        assert!(matches!(
            sasaki_formula_check(&cycle4(), &Budgets::default()),
            Err(Error::Hypothesis(_))
        ));
    }
}
