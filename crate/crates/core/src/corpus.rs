//! Named fixtures with their expected properties, parametric generators,
//! and the golden suite that checks every expectation.
//!
//! A fixture file is the payload document (orthoset or lattice format)
//! with three extra fields: `kind`, `description` and `expected`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automorphism;
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::lattice::{LatticeDoc, OrthoLattice};
use crate::orthoset::{Orthoset, OrthosetDoc};
use crate::sasaki::{self, SasakiVerdict, SpaceMode};
use crate::subset::Subset;

const FIXTURES: &[(&str, &str)] = &[
    ("benzene", include_str!("../../../corpus/benzene.json")),
    ("boolean2", include_str!("../../../corpus/boolean2.json")),
    ("boolean3", include_str!("../../../corpus/boolean3.json")),
    (
        "complete_graph3",
        include_str!("../../../corpus/complete_graph3.json"),
    ),
    ("cycle4", include_str!("../../../corpus/cycle4.json")),
    (
        "horizontal_sum",
        include_str!("../../../corpus/horizontal_sum.json"),
    ),
    (
        "horizontal_sum_atoms",
        include_str!("../../../corpus/horizontal_sum_atoms.json"),
    ),
    ("mo2", include_str!("../../../corpus/mo2.json")),
    ("path4", include_str!("../../../corpus/path4.json")),
    ("singleton", include_str!("../../../corpus/singleton.json")),
    ("two_edges", include_str!("../../../corpus/two_edges.json")),
];

pub const DEFAULT_EDGE_PROB: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Orthoset,
    Lattice,
}

#[derive(Debug, Clone)]
pub enum Payload {
    Orthoset(Orthoset),
    Lattice(OrthoLattice),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationClaim {
    pub target: Vec<String>,
    pub stuck: String,
    /// `[value, conflicts_with]` pairs.
    pub rejected: Vec<(String, String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrthosetExpected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_closed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dacey: Option<bool>,
    /// Both the naive and the reduced decision must agree with it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sasaki: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sasaki_failures_include: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<RefutationClaim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitive: Option<bool>,
    /// A lattice fixture isomorphic to the orthoclosed sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringClaim {
    pub element: String,
    pub atom: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WilceClaim {
    pub projection: String,
    pub atom: String,
    pub image: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeExpected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthomodular: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthomodular_failure: Option<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atomistic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering_failure: Option<CoveringClaim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boolean: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wilce_agree: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wilce_failure: Option<WilceClaim>,
    /// An orthoset fixture equal to the orthoset of atoms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms_orthoset: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Orthoset(OrthosetExpected),
    Lattice(LatticeExpected),
}

#[derive(Debug, Clone)]
pub struct NamedFixture {
    pub name: String,
    pub description: String,
    pub payload: Payload,
    pub expected: Expected,
}

#[derive(Deserialize)]
struct Header {
    kind: Kind,
    #[serde(default)]
    description: String,
    #[serde(default)]
    expected: Value,
}

impl NamedFixture {
    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Orthoset(_) => Kind::Orthoset,
            Payload::Lattice(_) => Kind::Lattice,
        }
    }

    pub fn orthoset(&self) -> Option<&Orthoset> {
        match &self.payload {
            Payload::Orthoset(x) => Some(x),
            Payload::Lattice(_) => None,
        }
    }

    pub fn lattice(&self) -> Option<&OrthoLattice> {
        match &self.payload {
            Payload::Lattice(l) => Some(l),
            Payload::Orthoset(_) => None,
        }
    }

    /// Parses a fixture document. Plain orthoset or lattice documents
    /// without a `kind` field are not fixtures.
    pub fn from_json(text: &str, budgets: &Budgets) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        let header: Header = serde_json::from_value(value.clone())?;
        let expected_value = if header.expected.is_null() {
            json!({})
        } else {
            header.expected
        };
        let (payload, expected) = match header.kind {
            Kind::Orthoset => {
                let doc: OrthosetDoc = serde_json::from_value(value)?;
                (
                    Payload::Orthoset(Orthoset::from_doc(&doc)?),
                    Expected::Orthoset(serde_json::from_value(expected_value)?),
                )
            }
            Kind::Lattice => {
                let doc: LatticeDoc = serde_json::from_value(value)?;
                (
                    Payload::Lattice(OrthoLattice::from_doc(&doc, budgets.lattice_elements)?),
                    Expected::Lattice(serde_json::from_value(expected_value)?),
                )
            }
        };
        let name = match &payload {
            Payload::Orthoset(x) => x.name().to_string(),
            Payload::Lattice(l) => l.name().to_string(),
        };
        Ok(NamedFixture {
            name,
            description: header.description,
            payload,
            expected,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut doc = match &self.payload {
            Payload::Orthoset(x) => serde_json::to_value(x.to_doc()),
            Payload::Lattice(l) => serde_json::to_value(l.to_doc()),
        }
        .expect("documents serialize");
        let map = doc.as_object_mut().expect("documents are objects");
        map.insert("kind".into(), json!(self.kind()));
        map.insert("description".into(), json!(self.description));
        let expected = match &self.expected {
            Expected::Orthoset(e) => serde_json::to_value(e),
            Expected::Lattice(e) => serde_json::to_value(e),
        }
        .expect("expectations serialize");
        map.insert("expected".into(), expected);
        doc
    }
}

/// Fixture names in sorted order.
pub fn list() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}

/// The fixture file as shipped.
pub fn source(name: &str) -> Result<&'static str> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

pub fn get(name: &str) -> Result<NamedFixture> {
    NamedFixture::from_json(source(name)?, &Budgets::default())
}

pub fn orthoset(name: &str) -> Result<Orthoset> {
    get(name)?
        .orthoset()
        .cloned()
        .ok_or_else(|| Error::InvalidParams(format!("fixture `{name}` is not an orthoset")))
}

pub fn lattice(name: &str) -> Result<OrthoLattice> {
    get(name)?
        .lattice()
        .cloned()
        .ok_or_else(|| Error::InvalidParams(format!("fixture `{name}` is not a lattice")))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    CompleteGraph(usize),
    MoN(usize),
    Boolean(usize),
    RandomOrthoset { n: usize, edge_prob: f64 },
    HorizontalSum(Box<Generator>, Box<Generator>),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::CompleteGraph(n) => write!(f, "complete_graph({n})"),
            Generator::MoN(n) => write!(f, "mo_n({n})"),
            Generator::Boolean(n) => write!(f, "boolean({n})"),
            Generator::RandomOrthoset { n, edge_prob } => write!(f, "random_orthoset({n},{edge_prob})"),
            Generator::HorizontalSum(a, b) => write!(f, "horizontal_sum({a},{b})"),
        }
    }
}

enum Arg {
    Number(String),
    Call(Generator),
}

struct GenParser<'a> {
    text: &'a str,
    pos: usize,
}

impl GenParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::InvalidParams(format!("{what} at offset {} in `{}`", self.pos, self.text))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !pred(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    fn eat(&mut self, c: char) -> bool {
        self.take_while(char::is_whitespace);
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn arg(&mut self) -> Result<Arg> {
        self.take_while(char::is_whitespace);
        match self.text[self.pos..].chars().next() {
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(Arg::Number(
                self.take_while(|c| c.is_ascii_digit() || c == '.' || c == 'e' || c == '-')
                    .to_string(),
            )),
            _ => Ok(Arg::Call(self.call()?)),
        }
    }

    fn call(&mut self) -> Result<Generator> {
        self.take_while(char::is_whitespace);
        let name = self
            .take_while(|c| c.is_ascii_alphanumeric() || c == '_')
            .to_string();
        if name.is_empty() {
            return Err(self.err("expected a generator name"));
        }
        if !self.eat('(') {
            return Err(self.err("expected `(`"));
        }
        let mut args = Vec::new();
        if !self.eat(')') {
            loop {
                args.push(self.arg()?);
                if self.eat(')') {
                    break;
                }
                if !self.eat(',') {
                    return Err(self.err("expected `,` or `)`"));
                }
            }
        }
        build_generator(&name, args)
    }
}

fn count(arg: &Arg) -> Result<usize> {
    match arg {
        Arg::Number(s) => s
            .parse()
            .map_err(|_| Error::InvalidParams(format!("`{s}` is not a non-negative integer"))),
        Arg::Call(g) => Err(Error::InvalidParams(format!("expected an integer, found `{g}`"))),
    }
}

fn build_generator(name: &str, args: Vec<Arg>) -> Result<Generator> {
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "`{name}` takes {k} argument(s), got {}",
                args.len()
            )))
        }
    };
    match name {
        "complete_graph" => arity(1).and_then(|()| Ok(Generator::CompleteGraph(count(&args[0])?))),
        "mo_n" => arity(1).and_then(|()| Ok(Generator::MoN(count(&args[0])?))),
        "boolean" => arity(1).and_then(|()| Ok(Generator::Boolean(count(&args[0])?))),
        "random_orthoset" => {
            if args.is_empty() || args.len() > 2 {
                return Err(Error::InvalidParams(
                    "`random_orthoset` takes (n) or (n, edge_prob)".into(),
                ));
            }
            let n = count(&args[0])?;
            let edge_prob = match args.get(1) {
                None => DEFAULT_EDGE_PROB,
                Some(Arg::Number(s)) => s
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("`{s}` is not a probability")))?,
                Some(Arg::Call(g)) => {
                    return Err(Error::InvalidParams(format!(
                        "expected a probability, found `{g}`"
                    )))
                }
            };
            Ok(Generator::RandomOrthoset { n, edge_prob })
        }
        "horizontal_sum" => {
            arity(2)?;
            let mut it = args.into_iter();
            let mut lattice_arg = || match it.next() {
                Some(Arg::Call(g)) => Ok(Box::new(g)),
                _ => Err(Error::InvalidParams(
                    "`horizontal_sum` takes two lattice generators".into(),
                )),
            };
            let a = lattice_arg()?;
            let b = lattice_arg()?;
            Ok(Generator::HorizontalSum(a, b))
        }
        _ => Err(Error::InvalidParams(format!("unknown generator `{name}`"))),
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = GenParser { text: s, pos: 0 };
        let g = p.call()?;
        p.take_while(char::is_whitespace);
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(g)
    }
}

/// `a`, `b`, ... `z`, then `e26`, `e27`, ...
pub fn element_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("e{i}")
    }
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(element_name).collect()
}

fn check_size(n: usize) -> Result<()> {
    if n > crate::subset::MAX_ELEMENTS {
        return Err(Error::TooManyElements {
            size: n,
            max: crate::subset::MAX_ELEMENTS,
        });
    }
    Ok(())
}

pub fn complete_graph(n: usize) -> Result<Orthoset> {
    check_size(n)?;
    let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Orthoset::new(format!("complete_graph({n})"), names(n), pairs)
}

/// Symmetric and irreflexive by construction: each unordered pair is
/// drawn once.
pub fn random_orthoset(n: usize, edge_prob: f64, seed: u64) -> Result<Orthoset> {
    check_size(n)?;
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidParams(format!(
            "edge probability {edge_prob} not in [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(edge_prob) {
                pairs.push((i, j));
            }
        }
    }
    Orthoset::new(
        format!("random_orthoset({n},{edge_prob},seed={seed})"),
        names(n),
        pairs,
    )
}

/// Subsets of `n` atoms; `0` and `1` for the extremes, otherwise the
/// concatenated atom names.
pub fn boolean(n: usize, budgets: &Budgets) -> Result<OrthoLattice> {
    if n >= usize::BITS as usize - 1 || (1usize << n) > budgets.lattice_elements {
        return Err(Error::Budget {
            what: "lattice size",
            limit: budgets.lattice_elements,
        });
    }
    let full = (1usize << n) - 1;
    let label = |s: usize| match s {
        0 => "0".to_string(),
        s if s == full => "1".to_string(),
        s => (0..n).filter(|i| s >> i & 1 == 1).map(element_name).collect(),
    };
    let elements: Vec<String> = (0..=full).map(label).collect();
    let leq = (0..=full)
        .flat_map(|s| {
            (0..n)
                .filter(move |i| s >> i & 1 == 0)
                .map(move |i| (s, s | 1 << i))
        })
        .map(|(a, b)| (elements[a].clone(), elements[b].clone()))
        .collect();
    let ortho = (0..=full)
        .map(|s| (elements[s].clone(), elements[full ^ s].clone()))
        .collect();
    OrthoLattice::from_doc(
        &LatticeDoc {
            name: format!("boolean({n})"),
            elements,
            leq,
            ortho,
        },
        budgets.lattice_elements,
    )
}

/// `n` blocks `{x, x⊥}` glued at 0 and 1.
pub fn mo_n(n: usize, budgets: &Budgets) -> Result<OrthoLattice> {
    let mut elements = vec!["0".to_string()];
    for i in 0..n {
        elements.push(element_name(i));
        elements.push(format!("{}⊥", element_name(i)));
    }
    elements.push("1".to_string());
    if elements.len() > budgets.lattice_elements {
        return Err(Error::Budget {
            what: "lattice size",
            limit: budgets.lattice_elements,
        });
    }
    let middle = &elements[1..elements.len() - 1];
    let mut leq = Vec::new();
    for m in middle {
        leq.push(("0".to_string(), m.clone()));
        leq.push((m.clone(), "1".to_string()));
    }
    if n == 0 {
        leq.push(("0".to_string(), "1".to_string()));
    }
    let mut ortho: std::collections::BTreeMap<String, String> = middle
        .chunks(2)
        .map(|pair| (pair[0].clone(), pair[1].clone()))
        .collect();
    ortho.insert("0".into(), "1".into());
    OrthoLattice::from_doc(
        &LatticeDoc {
            name: format!("mo_n({n})"),
            elements,
            leq,
            ortho,
        },
        budgets.lattice_elements,
    )
}

/// Disjoint union of the two lattices with bottoms and tops identified.
/// Labels are kept unless the two sides share one, in which case every
/// label is prefixed with `1:` or `2:`.
pub fn horizontal_sum(l1: &OrthoLattice, l2: &OrthoLattice, budgets: &Budgets) -> Result<OrthoLattice> {
    let middle = |l: &OrthoLattice| -> Vec<usize> {
        (0..l.len())
            .filter(|&x| x != l.bottom() && x != l.top())
            .collect()
    };
    let (m1, m2) = (middle(l1), middle(l2));
    let clash = m1.iter().any(|&x| m2.iter().any(|&y| l1.label(x) == l2.label(y)))
        || [l1, l2]
            .iter()
            .any(|l| middle(l).iter().any(|&x| l.label(x) == "0" || l.label(x) == "1"));
    let rename = |side: usize, l: &OrthoLattice, x: usize| -> String {
        if x == l.bottom() {
            "0".into()
        } else if x == l.top() {
            "1".into()
        } else if clash {
            format!("{side}:{}", l.label(x))
        } else {
            l.label(x).to_string()
        }
    };
    let mut elements = vec!["0".to_string()];
    let mut leq = Vec::new();
    let mut ortho = std::collections::BTreeMap::new();
    for (side, l, mid) in [(1, l1, &m1), (2, l2, &m2)] {
        elements.extend(mid.iter().map(|&x| rename(side, l, x)));
        leq.extend(
            l.cover_pairs()
                .map(|(a, b)| (rename(side, l, a), rename(side, l, b))),
        );
        for &x in mid {
            ortho.insert(rename(side, l, x), rename(side, l, l.ortho(x)));
        }
    }
    elements.push("1".to_string());
    ortho.insert("0".into(), "1".into());
    if elements.len() > budgets.lattice_elements {
        return Err(Error::Budget {
            what: "lattice size",
            limit: budgets.lattice_elements,
        });
    }
    OrthoLattice::from_doc(
        &LatticeDoc {
            name: format!("horizontal_sum({},{})", l1.name(), l2.name()),
            elements,
            leq,
            ortho,
        },
        budgets.lattice_elements,
    )
}

fn generate_lattice(g: &Generator, budgets: &Budgets) -> Result<OrthoLattice> {
    match g {
        Generator::Boolean(n) => boolean(*n, budgets),
        Generator::MoN(n) => mo_n(*n, budgets),
        Generator::HorizontalSum(a, b) => horizontal_sum(
            &generate_lattice(a, budgets)?,
            &generate_lattice(b, budgets)?,
            budgets,
        ),
        other => Err(Error::InvalidParams(format!(
            "`{other}` does not produce a lattice"
        ))),
    }
}

/// Deterministic in `seed`; only `random_orthoset` consumes it.
pub fn generate(g: &Generator, seed: u64, budgets: &Budgets) -> Result<NamedFixture> {
    let (payload, expected, description) = match g {
        Generator::CompleteGraph(n) => (
            Payload::Orthoset(complete_graph(*n)?),
            Expected::Orthoset(OrthosetExpected {
                rank: Some(*n),
                point_closed: Some(true),
                dacey: Some(true),
                sasaki: Some(true),
                ..Default::default()
            }),
            format!("Complete graph on {n} vertices."),
        ),
        Generator::RandomOrthoset { n, edge_prob } => (
            Payload::Orthoset(random_orthoset(*n, *edge_prob, seed)?),
            Expected::Orthoset(OrthosetExpected::default()),
            format!("Random orthoset on {n} elements, edge probability {edge_prob}, seed {seed}."),
        ),
        Generator::Boolean(n) => (
            Payload::Lattice(boolean(*n, budgets)?),
            Expected::Lattice(LatticeExpected {
                size: Some(1 << n),
                orthomodular: Some(true),
                atomistic: Some(true),
                covering: Some(true),
                boolean: Some(true),
                wilce_agree: Some(true),
                ..Default::default()
            }),
            format!("Boolean algebra with {n} atoms."),
        ),
        Generator::MoN(n) => (
            Payload::Lattice(mo_n(*n, budgets)?),
            Expected::Lattice(LatticeExpected {
                size: Some(2 * n + 2),
                orthomodular: Some(true),
                atomistic: Some(true),
                covering: Some(true),
                boolean: Some(*n <= 1),
                wilce_agree: Some(true),
                ..Default::default()
            }),
            format!("MO{n}: {n} blocks of four elements glued at 0 and 1."),
        ),
        Generator::HorizontalSum(..) => {
            let l = generate_lattice(g, budgets)?;
            let orthomodular = match g {
                Generator::HorizontalSum(a, b) => {
                    generate_lattice(a, budgets)?.is_orthomodular().holds()
                        && generate_lattice(b, budgets)?.is_orthomodular().holds()
                }
                _ => unreachable!(),
            };
            (
                Payload::Lattice(l),
                Expected::Lattice(LatticeExpected {
                    orthomodular: Some(orthomodular),
                    wilce_agree: orthomodular.then_some(true),
                    ..Default::default()
                }),
                "Horizontal sum: both lattices glued at 0 and 1.".to_string(),
            )
        }
    };
    Ok(NamedFixture {
        name: g.to_string(),
        description,
        payload,
        expected,
    })
}

/// One expected property compared with the computed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub fixture: String,
    pub claim: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenReport {
    pub results: Vec<ClaimResult>,
}

impl GoldenReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.results.iter().filter(|r| !r.pass)
    }
}

struct Claims<'a> {
    fixture: &'a str,
    out: Vec<ClaimResult>,
}

impl Claims<'_> {
    fn push(&mut self, claim: &str, expected: impl Serialize, actual: impl Serialize, pass: bool) {
        self.out.push(ClaimResult {
            fixture: self.fixture.to_string(),
            claim: claim.to_string(),
            expected: serde_json::to_value(expected).expect("claims serialize"),
            actual: serde_json::to_value(actual).expect("claims serialize"),
            pass,
        });
    }

    fn eq<T: Serialize + PartialEq>(
        &mut self,
        claim: &str,
        expected: &Option<T>,
        actual: impl FnOnce() -> Result<T>,
    ) -> Result<()> {
        if let Some(e) = expected {
            let a = actual()?;
            let pass = *e == a;
            self.push(claim, e, a, pass);
        }
        Ok(())
    }
}

fn canonical_family(x: &Orthoset, sets: &[Vec<String>]) -> Result<Vec<Subset>> {
    let mut family = sets
        .iter()
        .map(|s| x.subset_from_labels(s))
        .collect::<Result<Vec<_>>>()?;
    family.sort_by(Subset::canonical_cmp);
    Ok(family)
}

fn labelled_family(x: &Orthoset, family: &[Subset]) -> Vec<Vec<String>> {
    family.iter().map(|&s| x.subset_labels(s)).collect()
}

fn evaluate_orthoset(x: &Orthoset, e: &OrthosetExpected, c: &mut Claims, budgets: &Budgets) -> Result<()> {
    if let Some(sets) = &e.family {
        let expected = canonical_family(x, sets)?;
        let actual = x.orthoclosed_family(budgets)?;
        c.push(
            "family",
            sets,
            labelled_family(x, &actual),
            sets.len() == expected.len() && expected == actual,
        );
    }
    c.eq("rank", &e.rank, || Ok(x.rank(budgets)?.0))?;
    c.eq("point_closed", &e.point_closed, || {
        Ok(x.is_point_closed().holds())
    })?;
    c.eq("irreducible", &e.irreducible, || Ok(x.is_irreducible().holds()))?;
    c.eq("dacey", &e.dacey, || Ok(x.dacey_criterion(budgets)?.holds()))?;
    if e.sasaki.is_some() || e.sasaki_failures_include.is_some() {
        let naive = sasaki::is_sasaki_space(x, SpaceMode::Naive, budgets)?;
        let reduced = sasaki::is_sasaki_space(x, SpaceMode::Reduced, budgets)?;
        if let Some(exp) = e.sasaki {
            let pass = naive.is_sasaki() == exp && reduced.is_sasaki() == exp;
            c.push(
                "sasaki",
                exp,
                json!({"naive": naive.is_sasaki(), "reduced": reduced.is_sasaki()}),
                pass,
            );
        }
        if let Some(sets) = &e.sasaki_failures_include {
            let wanted = canonical_family(x, sets)?;
            let failing: Vec<Subset> = naive.failures.iter().map(|f| f.target).collect();
            let pass = wanted.iter().all(|t| failing.contains(t));
            c.push(
                "sasaki_failures_include",
                sets,
                labelled_family(x, &failing),
                pass,
            );
        }
    }
    if let Some(claim) = &e.refutation {
        let target = x.subset_from_labels(&claim.target)?;
        let actual = match sasaki::find_sasaki_map(x, target, budgets)? {
            SasakiVerdict::Exists(_) => None,
            SasakiVerdict::Refuted(r) => Some(r),
        };
        let pass = actual.as_ref().is_some_and(|r| {
            let mut want = claim
                .rejected
                .iter()
                .map(|(v, w)| Ok((x.index_of(v)?, x.index_of(w)?)))
                .collect::<Result<Vec<_>>>()
                .unwrap_or_default();
            want.sort();
            let mut got: Vec<_> = r.rejected.iter().map(|j| (j.value, j.conflicts_with)).collect();
            got.sort();
            r.is_complete() && r.replay(x) && x.label(r.stuck) == claim.stuck && want == got
        });
        c.push(
            "refutation",
            claim,
            actual.map_or(Value::Null, |r| r.to_json(x)),
            pass,
        );
    }
    c.eq("transitive", &e.transitive, || {
        Ok(automorphism::is_transitive(x, budgets)?.holds())
    })?;
    if let Some(name) = &e.lattice {
        let other = lattice(name)?;
        let ours = OrthoLattice::from_orthoset(x, budgets)?;
        let iso = ours.find_isomorphism(&other).is_some();
        c.push("lattice", name, iso, iso);
    }
    Ok(())
}

fn edge_labels(x: &Orthoset) -> Vec<(String, String)> {
    let mut edges: Vec<_> = x
        .edges()
        .map(|(a, b)| {
            let (a, b) = (x.label(a).to_string(), x.label(b).to_string());
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    edges.sort();
    edges
}

fn evaluate_lattice(l: &OrthoLattice, e: &LatticeExpected, c: &mut Claims) -> Result<()> {
    let label = |i: usize| l.label(i).to_string();
    c.eq("size", &e.size, || Ok(l.len()))?;
    c.eq("orthomodular", &e.orthomodular, || {
        Ok(l.is_orthomodular().holds())
    })?;
    if let Some(pair) = &e.orthomodular_failure {
        let actual = l
            .is_orthomodular()
            .counterexample()
            .map(|&(a, b)| (label(a), label(b)));
        let pass = actual.as_ref() == Some(pair);
        c.push("orthomodular_failure", pair, actual, pass);
    }
    let atoms = l.atoms_and_covering();
    c.eq("atomistic", &e.atomistic, || Ok(atoms.atomistic.holds()))?;
    c.eq("covering", &e.covering, || Ok(atoms.covering.holds()))?;
    if let Some(claim) = &e.covering_failure {
        let actual = atoms.covering.counterexample().map(|f| CoveringClaim {
            element: label(f.element),
            atom: label(f.atom),
        });
        let pass = actual.as_ref() == Some(claim);
        c.push("covering_failure", claim, actual, pass);
    }
    c.eq("boolean", &e.boolean, || Ok(l.is_boolean_distributive()))?;
    if e.wilce_agree.is_some() || e.wilce_failure.is_some() {
        let report = l.wilce_check()?;
        c.eq("wilce_agree", &e.wilce_agree, || Ok(report.sides_agree()))?;
        if let Some(claim) = &e.wilce_failure {
            let actual = report.basic_to_basic.counterexample().map(|f| WilceClaim {
                projection: label(f.projection),
                atom: label(f.atom),
                image: label(f.image),
            });
            let pass = actual.as_ref() == Some(claim);
            c.push("wilce_failure", claim, actual, pass);
        }
    }
    if let Some(name) = &e.atoms_orthoset {
        let want = orthoset(name)?;
        let got = l.atoms_to_orthoset()?.orthoset;
        let mut want_labels = want.labels().to_vec();
        let mut got_labels = got.labels().to_vec();
        want_labels.sort();
        got_labels.sort();
        let pass = want_labels == got_labels && edge_labels(&want) == edge_labels(&got);
        c.push("atoms_orthoset", name, got.to_doc(), pass);
    }
    Ok(())
}

/// Evaluates every expected property of `fixture`.
pub fn evaluate(fixture: &NamedFixture, budgets: &Budgets) -> Result<Vec<ClaimResult>> {
    let mut claims = Claims {
        fixture: &fixture.name,
        out: Vec::new(),
    };
    match (&fixture.payload, &fixture.expected) {
        (Payload::Orthoset(x), Expected::Orthoset(e)) => evaluate_orthoset(x, e, &mut claims, budgets)?,
        (Payload::Lattice(l), Expected::Lattice(e)) => evaluate_lattice(l, e, &mut claims)?,
        _ => unreachable!("payload and expectations are parsed together"),
    }
    Ok(claims.out)
}

/// Every claim of every shipped fixture.
pub fn run_golden(budgets: &Budgets) -> Result<GoldenReport> {
    let mut results = Vec::new();
    for name in list() {
        results.extend(evaluate(&get(name)?, budgets)?);
    }
    Ok(GoldenReport { results })
}

/// Orthosets of every fixture: the orthoset fixtures themselves, and for
/// lattices both the `L ∖ {0}` orthoset and the atom orthoset.
pub fn all_orthosets() -> Result<Vec<Orthoset>> {
    let mut out = Vec::new();
    for name in list() {
        match get(name)?.payload {
            Payload::Orthoset(x) => out.push(x),
            Payload::Lattice(l) => {
                out.push(l.to_orthoset()?.orthoset);
                out.push(l.atoms_to_orthoset()?.orthoset);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads_under_its_stem() {
        for name in list() {
            let f = get(name).unwrap();
            assert_eq!(f.name, name);
        }
        let mut sorted = list();
        sorted.sort();
        assert_eq!(sorted, list());
        assert!(matches!(get("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn fixture_json_roundtrips() {
        for name in list() {
            let f = get(name).unwrap();
            let again = NamedFixture::from_json(&f.to_json().to_string(), &Budgets::default()).unwrap();
            assert_eq!(again.expected, f.expected);
            assert_eq!(again.to_json(), f.to_json());
        }
    }

    #[test]
    fn generator_strings_parse() {
        let g: Generator = "horizontal_sum(boolean(2), boolean(3))".parse().unwrap();
        assert_eq!(
            g,
            Generator::HorizontalSum(Box::new(Generator::Boolean(2)), Box::new(Generator::Boolean(3)))
        );
        assert_eq!(g.to_string(), "horizontal_sum(boolean(2),boolean(3))");
        assert_eq!(
            "random_orthoset(6)".parse::<Generator>().unwrap(),
            Generator::RandomOrthoset {
                n: 6,
                edge_prob: DEFAULT_EDGE_PROB
            }
        );
        for bad in [
            "",
            "boolean",
            "boolean(",
            "boolean(2,3)",
            "cube(3)",
            "boolean(x)",
            "boolean(2) extra",
        ] {
            assert!(
                matches!(bad.parse::<Generator>(), Err(Error::InvalidParams(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn boolean3_fixture_matches_generator() {
        let shipped = lattice("boolean3").unwrap();
        let generated = boolean(3, &Budgets::default()).unwrap();
        assert_eq!(shipped.labels(), generated.labels());
        assert!(shipped.find_isomorphism(&generated).is_some());
    }

    #[test]
    fn horizontal_sum_generator_gives_ten_elements() {
        let b = Budgets::default();
        let g: Generator = "horizontal_sum(boolean(2),boolean(3))".parse().unwrap();
        let f = generate(&g, 0, &b).unwrap();
        let l = f.lattice().unwrap();
        assert_eq!(l.len(), 10);
        assert!(l.find_isomorphism(&lattice("horizontal_sum").unwrap()).is_some());
        assert!(evaluate(&f, &b).unwrap().iter().all(|r| r.pass));
    }

    #[test]
    fn random_orthoset_is_deterministic() {
        let a = random_orthoset(7, 0.4, 11).unwrap();
        let b = random_orthoset(7, 0.4, 11).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(random_orthoset(3, 1.5, 0).is_err());
        assert_eq!(random_orthoset(5, 1.0, 0).unwrap().edges().count(), 10);
        assert_eq!(random_orthoset(5, 0.0, 0).unwrap().edges().count(), 0);
    }

    #[test]
    fn generated_expectations_hold() {
        let b = Budgets::default();
        for g in [
            "complete_graph(4)",
            "boolean(4)",
            "mo_n(3)",
            "mo_n(1)",
            "horizontal_sum(mo_n(2),boolean(2))",
        ] {
            let f = generate(&g.parse().unwrap(), 0, &b).unwrap();
            let results = evaluate(&f, &b).unwrap();
            assert!(results.iter().all(|r| r.pass), "{g}: {results:?}");
        }
    }

    #[test]
    fn lattice_size_budget_applies() {
        let b = Budgets {
            lattice_elements: 16,
            ..Budgets::default()
        };
        assert!(boolean(4, &b).is_ok());
        assert!(matches!(boolean(5, &b), Err(Error::Budget { .. })));
    }
}
