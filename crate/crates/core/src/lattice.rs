//! Finite ortholattices: validation, orthomodularity, atoms and covering,
//! Sasaki projections, and the bridges to and from orthosets.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::orthoset::Orthoset;
use crate::report::Verdict;
use crate::subset::{Subset, MAX_ELEMENTS};

/// A finite bounded lattice with an order-reversing involution `x ↦ x⊥`
/// satisfying `x ∧ x⊥ = 0` and `x ∨ x⊥ = 1`.
///
/// Elements are referred to by index. Meets, joins and atoms are computed
/// once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoLattice {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    ortho: Vec<usize>,
    bottom: usize,
    top: usize,
    atoms: Vec<usize>,
}

/// On-disk form of a lattice. `leq` may list covers or any generating set
/// of order pairs; `ortho` may list each complementary pair once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
    pub ortho: BTreeMap<String, String>,
}

/// `x ∨ a` does not cover `x` although `a` is an atom with `a ∧ x = 0`;
/// `between` lies strictly between `x` and `x ∨ a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoveringFailure {
    pub element: usize,
    pub atom: usize,
    pub join: usize,
    pub between: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomReport {
    pub atoms: Vec<usize>,
    /// Fails with an element that is not the join of the atoms below it.
    pub atomistic: Verdict<usize>,
    pub covering: Verdict<CoveringFailure>,
}

/// A Sasaki projection sending an atom outside the basic elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasicFailure {
    pub projection: usize,
    pub atom: usize,
    pub image: usize,
}

/// Both sides of the covering / basic-to-basic biconditional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WilceReport {
    pub covering: Verdict<CoveringFailure>,
    pub basic_to_basic: Verdict<BasicFailure>,
}

impl WilceReport {
    pub fn sides_agree(&self) -> bool {
        self.covering.holds() == self.basic_to_basic.holds()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionFacts {
    pub fixes: Verdict<Vec<usize>>,
    pub adjoint_bound: Verdict<Vec<usize>>,
    pub kernel: Verdict<Vec<usize>>,
    pub self_adjoint: Verdict<Vec<usize>>,
}

impl ProjectionFacts {
    pub fn all_hold(&self) -> bool {
        [&self.fixes, &self.adjoint_bound, &self.kernel, &self.self_adjoint]
            .iter()
            .all(|v| v.holds())
    }
}

/// A bijection between the elements of two structures, `forward[i]` being
/// the image of element `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism {
    pub forward: Vec<usize>,
}

/// An orthoset built from a lattice, with the lattice element behind each
/// orthoset element.
#[derive(Debug, Clone)]
pub struct LatticeOrthoset {
    pub orthoset: Orthoset,
    pub elements: Vec<usize>,
}

impl OrthoLattice {
    pub fn from_doc(doc: &LatticeDoc, max_elements: usize) -> Result<Self> {
        let n = doc.elements.len();
        if n > max_elements {
            return Err(Error::Budget {
                what: "lattice size",
                limit: max_elements,
            });
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in doc.elements.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let lookup = |l: &String| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(l.clone()))
        };

        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in &doc.leq {
            leq[lookup(a)? * n + lookup(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::NotAPoset(doc.elements[i].clone(), doc.elements[j].clone()));
                }
            }
        }

        let mut ortho: Vec<Option<usize>> = vec![None; n];
        for (a, b) in &doc.ortho {
            let (a, b) = (lookup(a)?, lookup(b)?);
            if let Some(prev) = ortho[a] {
                if prev != b {
                    return Err(Error::OrthoNotInvolution(doc.elements[a].clone()));
                }
            }
            ortho[a] = Some(b);
        }
        for (a, b) in &doc.ortho {
            let (a, b) = (lookup(a)?, lookup(b)?);
            match ortho[b] {
                None => ortho[b] = Some(a),
                Some(c) if c != a => return Err(Error::OrthoNotInvolution(doc.elements[b].clone())),
                Some(_) => {}
            }
        }
        let ortho = ortho
            .into_iter()
            .enumerate()
            .map(|(i, o)| o.ok_or_else(|| Error::MissingOrtho(doc.elements[i].clone())))
            .collect::<Result<Vec<_>>>()?;

        let bound = |lower: bool| {
            (0..n).find(|&c| (0..n).all(|x| if lower { leq[c * n + x] } else { leq[x * n + c] }))
        };
        let bottom = bound(true).ok_or(Error::NoBottom)?;
        let top = bound(false).ok_or(Error::NoTop)?;

        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| leq[c * n + a] && leq[c * n + b]).collect();
                meet[a * n + b] = *lower
                    .iter()
                    .find(|&&m| lower.iter().all(|&c| leq[c * n + m]))
                    .ok_or_else(|| Error::NoMeet(doc.elements[a].clone(), doc.elements[b].clone()))?;
                let upper: Vec<usize> = (0..n).filter(|&c| leq[a * n + c] && leq[b * n + c]).collect();
                join[a * n + b] = *upper
                    .iter()
                    .find(|&&j| upper.iter().all(|&c| leq[j * n + c]))
                    .ok_or_else(|| Error::NoJoin(doc.elements[a].clone(), doc.elements[b].clone()))?;
            }
        }

        Self::assemble(
            doc.name.clone(),
            doc.elements.clone(),
            index,
            leq,
            meet,
            join,
            ortho,
            bottom,
            top,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: String,
        labels: Vec<String>,
        index: HashMap<String, usize>,
        leq: Vec<bool>,
        meet: Vec<usize>,
        join: Vec<usize>,
        ortho: Vec<usize>,
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let n = labels.len();
        let mut lattice = OrthoLattice {
            name,
            labels,
            index,
            leq,
            meet,
            join,
            ortho,
            bottom,
            top,
            atoms: Vec::new(),
        };
        lattice.check_orthocomplement()?;
        lattice.atoms = (0..n)
            .filter(|&a| a != bottom && lattice.covers(bottom, a))
            .collect();
        Ok(lattice)
    }

    fn check_orthocomplement(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            let xp = self.ortho[x];
            if self.meet(x, xp) != self.bottom {
                return Err(Error::OrthoMeetNonzero(self.labels[x].clone()));
            }
            if self.join(x, xp) != self.top {
                return Err(Error::OrthoJoinNotTop(self.labels[x].clone()));
            }
            if self.ortho[xp] != x {
                return Err(Error::OrthoNotInvolution(self.labels[x].clone()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                if self.leq(x, y) && !self.leq(self.ortho[y], self.ortho[x]) {
                    return Err(Error::OrthoNotAntitone(
                        self.labels[x].clone(),
                        self.labels[y].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str, max_elements: usize) -> Result<Self> {
        let doc: LatticeDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc, max_elements)
    }

    /// Document form with the cover relation as `leq` and every
    /// orthocomplement entry listed.
    pub fn to_doc(&self) -> LatticeDoc {
        LatticeDoc {
            name: self.name.clone(),
            elements: self.labels.clone(),
            leq: self
                .cover_pairs()
                .map(|(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
                .collect(),
            ortho: (0..self.len())
                .map(|i| (self.labels[i].clone(), self.labels[self.ortho[i]].clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("lattice serializes")
    }

    /// The orthoclosed subsets of `x` ordered by inclusion, with `(-)⊥` as
    /// orthocomplement. Element `i` of the lattice is `family[i]` of the
    /// returned canonical family.
    pub fn from_orthoset_with_family(x: &Orthoset, budgets: &Budgets) -> Result<(Self, Vec<Subset>)> {
        let family = x.orthoclosed_family(budgets)?;
        let n = family.len();
        if n > budgets.lattice_elements {
            return Err(Error::Budget {
                what: "lattice size",
                limit: budgets.lattice_elements,
            });
        }
        let position: HashMap<Subset, usize> = family.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let at = |s: Subset| position[&s];
        let labels: Vec<String> = family.iter().map(|&s| x.format_subset(s)).collect();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let mut leq = vec![false; n * n];
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for (i, &a) in family.iter().enumerate() {
            for (j, &b) in family.iter().enumerate() {
                leq[i * n + j] = a.is_subset(b);
                meet[i * n + j] = at(a.intersection(b));
                join[i * n + j] = at(x.close(a.union(b)));
            }
        }
        let ortho = family.iter().map(|&s| at(x.perp_of(s))).collect();
        let bottom = at(x.close(Subset::EMPTY));
        let top = at(x.all());
        let lattice = Self::assemble(
            format!("C({})", x.name()),
            labels,
            index,
            leq,
            meet,
            join,
            ortho,
            bottom,
            top,
        )?;
        Ok((lattice, family))
    }

    pub fn from_orthoset(x: &Orthoset, budgets: &Budgets) -> Result<Self> {
        Self::from_orthoset_with_family(x, budgets).map(|(l, _)| l)
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

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn is_atom(&self, x: usize) -> bool {
        self.atoms.contains(&x)
    }

    /// An atom or the least element.
    pub fn is_basic(&self, x: usize) -> bool {
        x == self.bottom || self.is_atom(x)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn ortho(&self, a: usize) -> usize {
        self.ortho[a]
    }

    /// `a ⊥ b` iff `a ≤ b⊥`.
    pub fn is_orthogonal(&self, a: usize, b: usize) -> bool {
        self.leq(a, self.ortho[b])
    }

    /// `y` covers `x`: `x < y` with nothing strictly between.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y) && self.strictly_between(x, y).is_none()
    }

    fn strictly_between(&self, x: usize, y: usize) -> Option<usize> {
        (0..self.len()).find(|&z| z != x && z != y && self.leq(x, z) && self.leq(z, y))
    }

    /// Pairs `(a, b)` where `b` covers `a`.
    pub fn cover_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |a| (0..n).filter(move |&b| self.covers(a, b)).map(move |b| (a, b)))
    }

    /// Length of the longest chain from the bottom to each element.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        // a linear extension: fewer elements below comes first
        order.sort_by_key(|&x| (0..n).filter(|&y| self.leq(y, x)).count());
        let mut height = vec![0; n];
        for &x in &order {
            height[x] = (0..n)
                .filter(|&y| self.covers(y, x))
                .map(|y| height[y] + 1)
                .max()
                .unwrap_or(0);
        }
        height
    }

    /// Checks `x ≤ y ⇒ y = x ∨ (y ∧ x⊥)`; fails with the first `(x, y)`.
    pub fn is_orthomodular(&self) -> Verdict<(usize, usize)> {
        for x in 0..self.len() {
            for y in 0..self.len() {
                if self.leq(x, y) && self.join(x, self.meet(y, self.ortho[x])) != y {
                    return Verdict::Fails((x, y));
                }
            }
        }
        Verdict::Holds
    }

    pub fn is_boolean_distributive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c)))
            })
        })
    }

    pub fn atoms_and_covering(&self) -> AtomReport {
        let atomistic = (0..self.len())
            .find(|&x| {
                let below = self
                    .atoms
                    .iter()
                    .filter(|&&a| self.leq(a, x))
                    .fold(self.bottom, |acc, &a| self.join(acc, a));
                below != x
            })
            .map_or(Verdict::Holds, Verdict::Fails);
        AtomReport {
            atoms: self.atoms.clone(),
            atomistic,
            covering: self.covering_property(),
        }
    }

    /// For every `x` and atom `a` with `a ∧ x = 0`, `x ∨ a` covers `x`.
    pub fn covering_property(&self) -> Verdict<CoveringFailure> {
        for x in 0..self.len() {
            for &a in &self.atoms {
                if self.meet(a, x) != self.bottom {
                    continue;
                }
                let j = self.join(x, a);
                if let Some(z) = self.strictly_between(x, j) {
                    return Verdict::Fails(CoveringFailure {
                        element: x,
                        atom: a,
                        join: j,
                        between: z,
                    });
                }
            }
        }
        Verdict::Holds
    }

    /// `π_x(y) = x ∧ (x⊥ ∨ y)`.
    pub fn sasaki_projection(&self, x: usize, y: usize) -> usize {
        self.meet(x, self.join(self.ortho[x], y))
    }

    /// The four Sasaki-projection facts, exhaustively over all arguments:
    /// (a) `π_x(y) = y ⇔ y ≤ x`, (b) `π_x(π_x(y⊥)⊥) ≤ y`,
    /// (c) `π_x(y) = 0 ⇔ y ≤ x⊥`, (d) `π_x(y) ≤ z⊥ ⇔ y ≤ π_x(z)⊥`.
    /// Each fails with its first argument tuple. Requires orthomodularity.
    pub fn projection_facts(&self) -> Result<ProjectionFacts> {
        if let Verdict::Fails((x, y)) = self.is_orthomodular() {
            return Err(Error::NotOrthomodular(
                self.labels[x].clone(),
                self.labels[y].clone(),
            ));
        }
        let n = self.len();
        let first = |test: &dyn Fn(usize, usize) -> bool| {
            (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .find(|&(x, y)| !test(x, y))
                .map_or(Verdict::Holds, |(x, y)| Verdict::Fails(vec![x, y]))
        };
        let pi = |x, y| self.sasaki_projection(x, y);
        let fixes = first(&|x, y| (pi(x, y) == y) == self.leq(y, x));
        let adjoint_bound = first(&|x, y| self.leq(pi(x, self.ortho[pi(x, self.ortho[y])]), y));
        let kernel = first(&|x, y| (pi(x, y) == self.bottom) == self.leq(y, self.ortho[x]));
        let mut self_adjoint = Verdict::Holds;
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.leq(pi(x, y), self.ortho[z]) != self.leq(y, self.ortho[pi(x, z)]) {
                        self_adjoint = Verdict::Fails(vec![x, y, z]);
                        break 'outer;
                    }
                }
            }
        }
        Ok(ProjectionFacts {
            fixes,
            adjoint_bound,
            kernel,
            self_adjoint,
        })
    }

    /// Covering property against "every Sasaki projection sends basic
    /// elements to basic elements", both computed independently.
    pub fn wilce_check(&self) -> Result<WilceReport> {
        if let Verdict::Fails((x, y)) = self.is_orthomodular() {
            return Err(Error::NotOrthomodular(
                self.labels[x].clone(),
                self.labels[y].clone(),
            ));
        }
        let mut basic_to_basic = Verdict::Holds;
        'outer: for x in 0..self.len() {
            for &a in &self.atoms {
                let image = self.sasaki_projection(x, a);
                if !self.is_basic(image) {
                    basic_to_basic = Verdict::Fails(BasicFailure {
                        projection: x,
                        atom: a,
                        image,
                    });
                    break 'outer;
                }
            }
        }
        Ok(WilceReport {
            covering: self.covering_property(),
            basic_to_basic,
        })
    }

    /// `L ∖ {0}` with `x ⊥ y` iff `x ≤ y⊥`.
    pub fn to_orthoset(&self) -> Result<LatticeOrthoset> {
        let elements: Vec<usize> = (0..self.len()).filter(|&x| x != self.bottom).collect();
        self.orthoset_on(format!("{}∖0", self.name), elements)
    }

    /// The atoms of the lattice with the induced orthogonality.
    pub fn atoms_to_orthoset(&self) -> Result<LatticeOrthoset> {
        self.orthoset_on(format!("At({})", self.name), self.atoms.clone())
    }

    fn orthoset_on(&self, name: String, elements: Vec<usize>) -> Result<LatticeOrthoset> {
        if elements.len() > MAX_ELEMENTS {
            return Err(Error::TooManyElements {
                size: elements.len(),
                max: MAX_ELEMENTS,
            });
        }
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        let mut pairs = Vec::new();
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate().skip(i + 1) {
                if self.is_orthogonal(a, b) {
                    pairs.push((i, j));
                }
            }
        }
        Ok(LatticeOrthoset {
            orthoset: Orthoset::new(name, labels, pairs)?,
            elements,
        })
    }

    /// For an atomistic lattice, certifies that `p ↦ {atoms ≤ p}` is an
    /// isomorphism onto the orthoclosed sets of the atom orthoset. The
    /// isomorphism maps lattice indices to positions in the returned
    /// canonical family.
    pub fn roundtrip(&self, budgets: &Budgets) -> Result<(Isomorphism, LatticeOrthoset, Vec<Subset>)> {
        if let Verdict::Fails(x) = self.atoms_and_covering().atomistic {
            return Err(Error::Hypothesis(format!(
                "lattice is not atomistic: `{}` is not a join of atoms",
                self.labels[x]
            )));
        }
        let atoms = self.atoms_to_orthoset()?;
        let x = &atoms.orthoset;
        let family = x.orthoclosed_family(budgets)?;
        let psi: Vec<Subset> = (0..self.len())
            .map(|p| {
                atoms
                    .elements
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| self.leq(a, p))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let position: HashMap<Subset, usize> = family.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut forward = Vec::with_capacity(self.len());
        for (p, &image) in psi.iter().enumerate() {
            let Some(&pos) = position.get(&image) else {
                return Err(Error::Hypothesis(format!(
                    "image of `{}` is not orthoclosed",
                    self.labels[p]
                )));
            };
            forward.push(pos);
        }
        let mut hit = vec![false; family.len()];
        for &f in &forward {
            hit[f] = true;
        }
        if family.len() != self.len() || hit.iter().any(|h| !h) {
            return Err(Error::Hypothesis(
                "atom map is not a bijection onto C(At(L))".into(),
            ));
        }
        for p in 0..self.len() {
            for q in 0..self.len() {
                if self.leq(p, q) != psi[p].is_subset(psi[q]) {
                    return Err(Error::Hypothesis(format!(
                        "atom map does not reflect the order at (`{}`, `{}`)",
                        self.labels[p], self.labels[q]
                    )));
                }
            }
            if psi[self.ortho[p]] != x.perp_of(psi[p]) {
                return Err(Error::Hypothesis(format!(
                    "atom map does not commute with ⊥ at `{}`",
                    self.labels[p]
                )));
            }
        }
        Ok((Isomorphism { forward }, atoms, family))
    }

    /// Searches for an order- and orthocomplement-preserving bijection.
    /// Elements are assigned together with their orthocomplements.
    pub fn find_isomorphism(&self, other: &OrthoLattice) -> Option<Isomorphism> {
        const NONE: usize = usize::MAX;
        let n = self.len();
        if n != other.len() {
            return None;
        }
        fn consistent(a: &OrthoLattice, b: &OrthoLattice, p: usize, image: &[usize]) -> bool {
            (0..a.len()).all(|u| {
                image[u] == NONE
                    || (a.leq(p, u) == b.leq(image[p], image[u]) && a.leq(u, p) == b.leq(image[u], image[p]))
            })
        }
        fn go(a: &OrthoLattice, b: &OrthoLattice, x: usize, image: &mut [usize], used: &mut [bool]) -> bool {
            if x == a.len() {
                return true;
            }
            if image[x] != NONE {
                return go(a, b, x + 1, image, used);
            }
            let xo = a.ortho(x);
            for y in 0..b.len() {
                let yo = b.ortho(y);
                if used[y] || (xo == x) != (yo == y) || (xo != x && used[yo]) {
                    continue;
                }
                image[x] = y;
                used[y] = true;
                image[xo] = yo;
                used[yo] = true;
                if consistent(a, b, x, image) && consistent(a, b, xo, image) && go(a, b, x + 1, image, used) {
                    return true;
                }
                image[x] = NONE;
                used[y] = false;
                image[xo] = NONE;
                used[yo] = false;
            }
            false
        }
        let mut image = vec![NONE; n];
        let mut used = vec![false; n];
        go(self, other, 0, &mut image, &mut used).then_some(Isomorphism { forward: image })
    }

    /// Hasse diagram in Graphviz DOT: cover edges only, ranks by height,
    /// atoms filled, orthocomplement pairs as dashed non-constraining edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let heights = self.heights();
        let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
        writeln!(out, "graph {} {{", quote(&self.name)).unwrap();
        writeln!(out, "  rankdir=BT;").unwrap();
        writeln!(out, "  node [shape=ellipse];").unwrap();
        for i in 0..self.len() {
            let style = if self.is_atom(i) {
                " style=filled fillcolor=lightblue"
            } else {
                ""
            };
            writeln!(out, "  n{i} [label={}{}];", quote(&self.labels[i]), style).unwrap();
        }
        let max_h = heights.iter().copied().max().unwrap_or(0);
        for h in 0..=max_h {
            let same: Vec<String> = (0..self.len())
                .filter(|&i| heights[i] == h)
                .map(|i| format!("n{i}"))
                .collect();
            if !same.is_empty() {
                writeln!(out, "  {{ rank=same; {}; }}", same.join("; ")).unwrap();
            }
        }
        for (a, b) in self.cover_pairs() {
            writeln!(out, "  n{a} -- n{b};").unwrap();
        }
        for i in 0..self.len() {
            let j = self.ortho[i];
            if i < j {
                writeln!(
                    out,
                    "  n{i} -- n{j} [style=dashed color=gray constraint=false label=\"⊥\"];"
                )
                .unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(name: &str, elements: &[&str], leq: &[(&str, &str)], ortho: &[(&str, &str)]) -> LatticeDoc {
        LatticeDoc {
            name: name.into(),
            elements: elements.iter().map(|s| s.to_string()).collect(),
            leq: leq.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            ortho: ortho
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }

    fn boolean2() -> OrthoLattice {
        OrthoLattice::from_doc(
            &doc(
                "2^2",
                &["0", "p", "q", "1"],
                &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")],
                &[("0", "1"), ("p", "q")],
            ),
            64,
        )
        .unwrap()
    }

    fn mo2() -> OrthoLattice {
        OrthoLattice::from_doc(
            &doc(
                "MO2",
                &["0", "a", "a'", "b", "b'", "1"],
                &[
                    ("0", "a"),
                    ("0", "a'"),
                    ("0", "b"),
                    ("0", "b'"),
                    ("a", "1"),
                    ("a'", "1"),
                    ("b", "1"),
                    ("b'", "1"),
                ],
                &[("0", "1"), ("a", "a'"), ("b", "b'")],
            ),
            64,
        )
        .unwrap()
    }

    #[test]
    fn boolean_square_is_valid() {
        let l = boolean2();
        assert_eq!(l.atoms(), &[1, 2]);
        assert!(l.is_orthomodular().holds());
        assert!(l.is_boolean_distributive());
    }

    #[test]
    fn self_complement_is_rejected() {
        let err = OrthoLattice::from_doc(
            &doc(
                "bad",
                &["0", "p", "q", "1"],
                &[("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")],
                &[("0", "1"), ("p", "p"), ("q", "q")],
            ),
            64,
        )
        .unwrap_err();
        assert_eq!(err, Error::OrthoMeetNonzero("p".into()));
    }

    #[test]
    fn cycles_and_missing_meets_are_rejected() {
        let err = OrthoLattice::from_doc(
            &doc(
                "cyc",
                &["0", "x", "1"],
                &[("0", "x"), ("x", "0"), ("x", "1")],
                &[("0", "1"), ("x", "x")],
            ),
            64,
        )
        .unwrap_err();
        assert_eq!(err, Error::NotAPoset("0".into(), "x".into()));

        // two incomparable upper bounds of p, q
        let err = OrthoLattice::from_doc(
            &doc(
                "bowtie",
                &["0", "p", "q", "r", "s", "1"],
                &[
                    ("0", "p"),
                    ("0", "q"),
                    ("p", "r"),
                    ("q", "r"),
                    ("p", "s"),
                    ("q", "s"),
                    ("r", "1"),
                    ("s", "1"),
                ],
                &[("0", "1"), ("p", "s"), ("q", "r")],
            ),
            64,
        )
        .unwrap_err();
        assert_eq!(err, Error::NoJoin("p".into(), "q".into()));
    }

    #[test]
    fn non_antitone_complement_is_rejected() {
        // chain 0 < x < y < 1 with x ↔ y swapped the wrong way round
        let err = OrthoLattice::from_doc(
            &doc(
                "chain",
                &["0", "x", "y", "1"],
                &[("0", "x"), ("x", "y"), ("y", "1")],
                &[("0", "1"), ("x", "y")],
            ),
            64,
        );
        assert!(err.is_err());
    }

    #[test]
    fn mo2_covering_and_projection() {
        let l = mo2();
        let r = l.atoms_and_covering();
        assert_eq!(r.atoms.len(), 4);
        assert!(r.atomistic.holds());
        assert!(r.covering.holds());
        let (a, b) = (l.index_of("a").unwrap(), l.index_of("b").unwrap());
        assert_eq!(l.sasaki_projection(a, b), a);
        assert_eq!(l.sasaki_projection(a, a), a);
        assert_eq!(l.sasaki_projection(a, l.index_of("a'").unwrap()), l.bottom());
    }

    #[test]
    fn mo2_orthoset() {
        let l = mo2();
        let o = l.to_orthoset().unwrap().orthoset;
        assert_eq!(o.labels(), &["a", "a'", "b", "b'", "1"]);
        let pairs: Vec<(String, String)> = o.to_doc().orthogonal;
        assert_eq!(
            pairs,
            vec![
                ("a".to_string(), "a'".to_string()),
                ("b".to_string(), "b'".to_string())
            ]
        );
    }

    #[test]
    fn two_element_lattice_gives_single_point() {
        let l = OrthoLattice::from_doc(&doc("2", &["0", "1"], &[("0", "1")], &[("0", "1")]), 64).unwrap();
        let o = l.to_orthoset().unwrap().orthoset;
        assert_eq!(o.len(), 1);
        assert_eq!(o.edges().count(), 0);
    }

    #[test]
    fn doc_roundtrip_preserves_lattice() {
        let l = mo2();
        assert_eq!(OrthoLattice::from_doc(&l.to_doc(), 64).unwrap(), l);
    }

    #[test]
    fn size_cap_is_a_budget_error() {
        let l = mo2();
        assert!(matches!(
            OrthoLattice::from_doc(&l.to_doc(), 4),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn isomorphism_search() {
        let l = mo2();
        let mut d = l.to_doc();
        d.elements.reverse();
        let m = OrthoLattice::from_doc(&d, 64).unwrap();
        let iso = l.find_isomorphism(&m).unwrap();
        for x in 0..l.len() {
            assert_eq!(m.ortho(iso.forward[x]), iso.forward[l.ortho(x)]);
        }
        assert!(l.find_isomorphism(&boolean2()).is_none());
    }

    #[test]
    fn dot_export_has_covers_and_atoms() {
        let dot = mo2().to_dot();
        assert!(dot.starts_with("graph \"MO2\""));
        assert_eq!(dot.matches(" -- ").count(), 8 + 3);
        assert_eq!(dot.matches("fillcolor=lightblue").count(), 4);
    }
}
