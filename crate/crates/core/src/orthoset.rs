//! Finite orthosets: the orthocomplement operator, orthoclosed sets, and
//! cliques of the orthogonality relation (⊥-sets).

use std::collections::HashMap;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::report::Verdict;
use crate::subset::{sort_canonical, Subset, MAX_ELEMENTS};

/// A finite set with a symmetric, irreflexive orthogonality relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orthoset {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// `perp[i]` is the set of elements orthogonal to `i`.
    perp: Vec<Subset>,
}

/// On-disk form of an orthoset.
///
/// Pairs are unordered. Unknown fields are ignored so that corpus fixtures
/// can carry extra metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthosetDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub orthogonal: Vec<(String, String)>,
}

/// `{x}⊥⊥ ≠ {x}` for `element`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClosureFailure {
    pub element: usize,
    pub closure: Subset,
}

/// An orthoclosed `set` containing a maximal ⊥-set whose closure is smaller.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DaceyFailure {
    pub set: Subset,
    pub perp_set: Subset,
    pub closure: Subset,
}

impl Orthoset {
    pub fn new<I>(name: impl Into<String>, labels: Vec<String>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooManyElements {
                size: n,
                max: MAX_ELEMENTS,
            });
        }
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let mut perp = vec![Subset::EMPTY; n];
        for (a, b) in pairs {
            for i in [a, b] {
                if i >= n {
                    return Err(Error::InvalidSubset { index: i, size: n });
                }
            }
            if a == b {
                return Err(Error::SelfOrthogonal(labels[a].clone()));
            }
            perp[a] = perp[a].with(b);
            perp[b] = perp[b].with(a);
        }
        Ok(Orthoset {
            name: name.into(),
            labels,
            index,
            perp,
        })
    }

    /// Convenience constructor from string labels and label pairs.
    pub fn from_labels(name: &str, elements: &[&str], pairs: &[(&str, &str)]) -> Result<Self> {
        Self::from_doc(&OrthosetDoc {
            name: name.to_string(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            orthogonal: pairs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        })
    }

    pub fn from_doc(doc: &OrthosetDoc) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, l) in doc.elements.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |l: &String| {
            index
                .get(l.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownLabel(l.clone()))
        };
        let pairs = doc
            .orthogonal
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Orthoset::new(doc.name.clone(), doc.elements.clone(), pairs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: OrthosetDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }

    /// Document form, with each pair ordered and the pair list sorted
    /// lexicographically by label.
    pub fn to_doc(&self) -> OrthosetDoc {
        let mut pairs: Vec<(String, String)> = self
            .edges()
            .map(|(a, b)| {
                let (a, b) = (self.labels[a].clone(), self.labels[b].clone());
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        pairs.sort();
        OrthosetDoc {
            name: self.name.clone(),
            elements: self.labels.clone(),
            orthogonal: pairs,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("orthoset serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn subset_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Subset>>()
    }

    pub fn subset_labels(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// `{a,c}` style rendering.
    pub fn format_subset(&self, s: Subset) -> String {
        format!("{{{}}}", self.subset_labels(s).join(","))
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn is_orthogonal(&self, a: usize, b: usize) -> bool {
        self.perp[a].contains(b)
    }

    /// `{i}⊥`.
    pub fn neighbors(&self, i: usize) -> Subset {
        self.perp[i]
    }

    /// Unordered orthogonal pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |a| self.perp[a].iter().filter(move |&b| b > a).map(move |b| (a, b)))
    }

    pub fn check_subset(&self, s: Subset) -> Result<()> {
        if s.bound() > self.len() {
            return Err(Error::InvalidSubset {
                index: s.bound() - 1,
                size: self.len(),
            });
        }
        Ok(())
    }

    /// The induced sub-orthoset on `s`, keeping the order of elements.
    pub fn restrict(&self, name: impl Into<String>, s: Subset) -> Result<Orthoset> {
        self.check_subset(s)?;
        let members: Vec<usize> = s.iter().collect();
        let labels = members.iter().map(|&i| self.labels[i].clone()).collect();
        let pairs = self
            .edges()
            .filter(|(a, b)| s.contains(*a) && s.contains(*b))
            .map(|(a, b)| {
                let pos = |x| members.iter().position(|&m| m == x).unwrap();
                (pos(a), pos(b))
            })
            .collect::<Vec<_>>();
        Orthoset::new(name, labels, pairs)
    }

    /// `S⊥ = {x : x ⊥ s for all s ∈ S}`; `∅⊥ = X`.
    pub fn perp(&self, s: Subset) -> Result<Subset> {
        self.check_subset(s)?;
        Ok(self.perp_of(s))
    }

    pub(crate) fn perp_of(&self, s: Subset) -> Subset {
        s.iter().fold(self.all(), |acc, i| acc.intersection(self.perp[i]))
    }

    /// `S⊥⊥` together with whether `S` is orthoclosed.
    pub fn closure(&self, s: Subset) -> Result<(Subset, bool)> {
        self.check_subset(s)?;
        let c = self.close(s);
        Ok((c, c == s))
    }

    pub(crate) fn close(&self, s: Subset) -> Subset {
        self.perp_of(self.perp_of(s))
    }

    pub fn is_orthoclosed(&self, s: Subset) -> bool {
        self.close(s) == s
    }

    /// All orthoclosed subsets in canonical order.
    ///
    /// Every orthoclosed set is `A⊥` for `A = S⊥`, which is the intersection
    /// of the point-perps `{a}⊥` over `a ∈ A` (and `X` for `A = ∅`), so the
    /// family is the closure of `{X}` under intersection with point-perps.
    pub fn orthoclosed_family(&self, budgets: &Budgets) -> Result<Vec<Subset>> {
        let mut seen: HashSet<Subset> = HashSet::new();
        let mut family = vec![self.all()];
        seen.insert(self.all());
        for x in 0..self.len() {
            let p = self.perp[x];
            for k in 0..family.len() {
                let t = family[k].intersection(p);
                if seen.insert(t) {
                    family.push(t);
                    if family.len() > budgets.family {
                        return Err(Error::Budget {
                            what: "orthoclosed family",
                            limit: budgets.family,
                        });
                    }
                }
            }
        }
        sort_canonical(&mut family);
        Ok(family)
    }

    /// Orthoclosed family by scanning every subset; only for `|X| <= 20`.
    pub fn orthoclosed_family_exhaustive(&self) -> Result<Vec<Subset>> {
        const LIMIT: usize = 20;
        if self.len() > LIMIT {
            return Err(Error::Budget {
                what: "exhaustive subset scan",
                limit: LIMIT,
            });
        }
        let mut family: Vec<Subset> = (0..1u64 << self.len())
            .map(Subset::from_bits)
            .filter(|&s| self.is_orthoclosed(s))
            .collect();
        sort_canonical(&mut family);
        Ok(family)
    }

    pub fn is_perp_set(&self, s: Subset) -> bool {
        s.iter().all(|i| s.without(i).is_subset(self.perp[i]))
    }

    /// All ⊆-maximal ⊥-sets contained in `within`, in canonical order.
    pub fn maximal_perp_sets(&self, within: Subset, budgets: &Budgets) -> Result<Vec<Subset>> {
        self.check_subset(within)?;
        let mut out = Vec::new();
        self.bron_kerbosch(Subset::EMPTY, within, Subset::EMPTY, &mut out, budgets.cliques)?;
        sort_canonical(&mut out);
        Ok(out)
    }

    fn bron_kerbosch(
        &self,
        r: Subset,
        mut p: Subset,
        mut x: Subset,
        out: &mut Vec<Subset>,
        limit: usize,
    ) -> Result<()> {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r);
                if out.len() > limit {
                    return Err(Error::Budget {
                        what: "clique enumeration",
                        limit,
                    });
                }
            }
            return Ok(());
        }
        // pivot maximizing |P ∩ N(u)|
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|&u| p.intersection(self.perp[u]).len())
            .expect("p nonempty");
        for v in p.difference(self.perp[pivot]) {
            let nv = self.perp[v];
            self.bron_kerbosch(r.with(v), p.intersection(nv), x.intersection(nv), out, limit)?;
            p = p.without(v);
            x = x.with(v);
        }
        Ok(())
    }

    /// Every ⊥-set (clique), including `∅`, in canonical order.
    pub fn perp_sets(&self, budgets: &Budgets) -> Result<Vec<Subset>> {
        let mut out = vec![Subset::EMPTY];
        // extend each clique only by elements larger than its maximum
        let mut frontier = vec![(Subset::EMPTY, self.all())];
        while let Some((clique, candidates)) = frontier.pop() {
            for v in candidates {
                let next = clique.with(v);
                out.push(next);
                if out.len() > budgets.cliques {
                    return Err(Error::Budget {
                        what: "clique enumeration",
                        limit: budgets.cliques,
                    });
                }
                let above = Subset::from_bits(!0u64 << v << 1);
                frontier.push((next, candidates.intersection(self.perp[v]).intersection(above)));
            }
        }
        sort_canonical(&mut out);
        Ok(out)
    }

    /// Largest ⊥-set size and the canonically first ⊥-set attaining it.
    pub fn rank(&self, budgets: &Budgets) -> Result<(usize, Subset)> {
        let cliques = self.maximal_perp_sets(self.all(), budgets)?;
        let best = cliques
            .iter()
            .copied()
            .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.canonical_cmp(a)))
            .unwrap_or(Subset::EMPTY);
        Ok((best.len(), best))
    }

    /// Whether every singleton is orthoclosed; the first failing element
    /// otherwise.
    pub fn is_point_closed(&self) -> Verdict<PointClosureFailure> {
        for x in 0..self.len() {
            let s = Subset::singleton(x);
            let c = self.close(s);
            if c != s {
                return Verdict::Fails(PointClosureFailure {
                    element: x,
                    closure: c,
                });
            }
        }
        Verdict::Holds
    }

    /// Irreducible iff the non-orthogonality graph is connected. On failure
    /// returns the component containing element 0, which is orthogonal to
    /// everything outside it. Empty and one-element orthosets are
    /// irreducible.
    pub fn is_irreducible(&self) -> Verdict<Subset> {
        if self.len() <= 1 {
            return Verdict::Holds;
        }
        let all = self.all();
        let mut component = Subset::singleton(0);
        let mut frontier = component;
        while let Some(v) = frontier.first() {
            frontier = frontier.without(v);
            let non_perp = all.difference(self.perp[v]).difference(component);
            component = component.union(non_perp);
            frontier = frontier.union(non_perp);
        }
        if component == all {
            Verdict::Holds
        } else {
            Verdict::Fails(component)
        }
    }

    /// Dacey's criterion: every orthoclosed `A` equals `D⊥⊥` for each
    /// maximal ⊥-set `D ⊆ A`.
    pub fn dacey_criterion(&self, budgets: &Budgets) -> Result<Verdict<DaceyFailure>> {
        for a in self.orthoclosed_family(budgets)? {
            for d in self.maximal_perp_sets(a, budgets)? {
                let c = self.close(d);
                if c != a {
                    return Ok(Verdict::Fails(DaceyFailure {
                        set: a,
                        perp_set: d,
                        closure: c,
                    }));
                }
            }
        }
        Ok(Verdict::Holds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> Orthoset {
        Orthoset::from_labels(
            "path4",
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d")],
        )
        .unwrap()
    }

    fn cycle4() -> Orthoset {
        Orthoset::from_labels(
            "cycle4",
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap()
    }

    fn set(x: &Orthoset, labels: &[&str]) -> Subset {
        x.subset_from_labels(labels).unwrap()
    }

    #[test]
    fn perp_examples() {
        let p = path4();
        assert_eq!(p.perp(set(&p, &["b"])).unwrap(), set(&p, &["a", "c"]));
        assert_eq!(p.perp(Subset::EMPTY).unwrap(), p.all());
        let c = cycle4();
        assert_eq!(c.perp(set(&c, &["a", "c"])).unwrap(), set(&c, &["b", "d"]));
    }

    #[test]
    fn perp_rejects_out_of_range() {
        let p = path4();
        assert_eq!(
            p.perp(Subset::singleton(7)),
            Err(Error::InvalidSubset { index: 7, size: 4 })
        );
    }

    #[test]
    fn closure_examples() {
        let p = path4();
        assert_eq!(p.closure(set(&p, &["a"])).unwrap(), (set(&p, &["a", "c"]), false));
        assert_eq!(p.closure(p.all()).unwrap(), (p.all(), true));
        let c = cycle4();
        assert_eq!(
            c.closure(set(&c, &["a", "c"])).unwrap(),
            (set(&c, &["a", "c"]), true)
        );
    }

    #[test]
    fn loader_rejects_bad_documents() {
        assert_eq!(
            Orthoset::from_labels("x", &["a", "a"], &[]),
            Err(Error::DuplicateLabel("a".into()))
        );
        assert_eq!(
            Orthoset::from_labels("x", &["a"], &[("a", "a")]),
            Err(Error::SelfOrthogonal("a".into()))
        );
        assert_eq!(
            Orthoset::from_labels("x", &["a"], &[("a", "q")]),
            Err(Error::UnknownLabel("q".into()))
        );
        assert_eq!(Orthoset::from_labels("x", &[""], &[]), Err(Error::EmptyLabel));
    }

    #[test]
    fn writer_sorts_pairs() {
        let x = Orthoset::from_labels("x", &["c", "b", "a"], &[("c", "a"), ("b", "a")]).unwrap();
        let doc = x.to_doc();
        assert_eq!(
            doc.orthogonal,
            vec![
                ("a".to_string(), "b".to_string()),
                ("a".to_string(), "c".to_string())
            ]
        );
        assert_eq!(Orthoset::from_doc(&doc).unwrap(), x);
    }

    #[test]
    fn maximal_perp_sets_of_empty_window() {
        let c = cycle4();
        assert_eq!(
            c.maximal_perp_sets(Subset::EMPTY, &Budgets::default()).unwrap(),
            vec![Subset::EMPTY]
        );
    }

    #[test]
    fn perp_sets_lists_every_clique() {
        let c = cycle4();
        let all = c.perp_sets(&Budgets::default()).unwrap();
        // ∅, four singletons, four edges
        assert_eq!(all.len(), 9);
        assert!(all.iter().all(|&s| c.is_perp_set(s)));
    }

    #[test]
    fn family_budget_is_enforced() {
        let k = Orthoset::new("k6", (0..6).map(|i| format!("v{i}")).collect(), {
            let mut v = vec![];
            for a in 0..6 {
                for b in a + 1..6 {
                    v.push((a, b));
                }
            }
            v
        })
        .unwrap();
        let tight = Budgets {
            family: 10,
            ..Budgets::default()
        };
        assert!(matches!(k.orthoclosed_family(&tight), Err(Error::Budget { .. })));
        assert_eq!(k.orthoclosed_family(&Budgets::default()).unwrap().len(), 64);
    }

    #[test]
    fn irreducibility() {
        let c = cycle4();
        assert_eq!(c.is_irreducible(), Verdict::Fails(set(&c, &["a", "c"])));
        let single = Orthoset::from_labels("one", &["p"], &[]).unwrap();
        assert!(single.is_irreducible().holds());
        let empty = Orthoset::from_labels("none", &[], &[]).unwrap();
        assert!(empty.is_irreducible().holds());
    }

    #[test]
    fn restrict_keeps_induced_relation() {
        let c = cycle4();
        let sub = c.restrict("abd", set(&c, &["a", "b", "d"])).unwrap();
        assert_eq!(sub.labels(), &["a", "b", "d"]);
        assert_eq!(sub.edges().count(), 2);
    }
}
