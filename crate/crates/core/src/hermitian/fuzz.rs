//! Seeded random checks of the Hermitian-space laws and of the Sasaki-map
//! formula. Instance `i` draws from stream `i` of a ChaCha generator keyed
//! by the seed, so any instance can be replayed on its own.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::{Field, HermitianSpace, Line, Scalar, Subspace};

/// Integer parts of random entries lie in `-ENTRY_RANGE..=ENTRY_RANGE`.
const ENTRY_RANGE: i64 = 3;
const LINES_PER_FAMILY: usize = 5;
const MAX_RECORDED_FAILURES: usize = 20;

pub const CHECKS: [&str; 7] = [
    "sum_is_whole",
    "double_perp",
    "projection_idempotent",
    "projection_self_adjoint",
    "sesquilinear",
    "route_agreement",
    "sasaki_s1_s2",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzFailure {
    pub instance: u64,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub field: Field,
    pub seed: u64,
    pub instances: u64,
    pub checks: BTreeMap<String, Tally>,
    /// The first few failures; `checks` has the full counts.
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|t| t.failed == 0)
    }

    pub fn total_failures(&self) -> usize {
        self.checks.values().map(|t| t.failed).sum()
    }

    fn record(&mut self, instance: u64, check: &str, outcome: std::result::Result<(), String>) {
        let tally = self.checks.entry(check.to_string()).or_default();
        match outcome {
            Ok(()) => tally.passed += 1,
            Err(detail) => {
                tally.failed += 1;
                if self.failures.len() < MAX_RECORDED_FAILURES {
                    self.failures.push(FuzzFailure {
                        instance,
                        check: check.to_string(),
                        detail,
                    });
                }
            }
        }
    }
}

pub fn instance_rng(seed: u64, instance: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(instance);
    rng
}

/// Runs every check in [`CHECKS`] on `instances` random spaces of
/// dimension 2 to 4.
pub fn run_fuzz<K: Scalar>(instances: u64, seed: u64) -> FuzzReport {
    let mut report = FuzzReport {
        field: K::FIELD,
        seed,
        instances,
        checks: CHECKS.iter().map(|c| (c.to_string(), Tally::default())).collect(),
        failures: Vec::new(),
    };
    for i in 0..instances {
        let mut rng = instance_rng(seed, i);
        let outcomes = run_instance::<K, _>(&mut rng);
        for (check, outcome) in outcomes {
            report.record(i, check, outcome);
        }
    }
    report
}

type Outcome = std::result::Result<(), String>;

fn random_vector<K: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Vec<K> {
    (0..dim).map(|_| K::random(rng, ENTRY_RANGE)).collect()
}

fn random_nonzero<K: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Vec<K> {
    loop {
        let v: Vec<K> = random_vector(rng, dim);
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// `G = M⋆ᵀ M + I`, positive definite for every `M`.
pub fn random_space<K: Scalar, R: Rng>(rng: &mut R, dim: usize) -> HermitianSpace<K> {
    let m: Matrix<K> = (0..dim).map(|_| random_vector(rng, dim)).collect();
    let gram = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let acc = (0..dim).fold(K::zero(), |acc, k| acc.add(&m[k][i].star().mul(&m[k][j])));
                    if i == j {
                        acc.add(&K::one())
                    } else {
                        acc
                    }
                })
                .collect()
        })
        .collect();
    HermitianSpace::new(gram).expect("M⋆M + I is positive definite")
}

/// Spanned by up to `dim` random vectors, so every rank occurs.
pub fn random_subspace<K: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Subspace<K> {
    let k = rng.random_range(0..=dim);
    Subspace::span(dim, (0..k).map(|_| random_vector(rng, dim)).collect())
}

fn random_in<K: Scalar, R: Rng>(rng: &mut R, s: &Subspace<K>) -> Vec<K> {
    let mut v = vec![K::zero(); s.ambient_dim()];
    for b in s.basis() {
        let c = K::random(rng, ENTRY_RANGE);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi = vi.add(&c.mul(bi));
        }
    }
    v
}

fn axpy<K: Scalar>(a: &K, x: &[K], y: &[K]) -> Vec<K> {
    x.iter().zip(y).map(|(xi, yi)| a.mul(xi).add(yi)).collect()
}

fn sub<K: Scalar>(x: &[K], y: &[K]) -> Vec<K> {
    x.iter().zip(y).map(|(a, b)| a.sub(b)).collect()
}

fn fmt_vec<K: Scalar>(v: &[K]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn in_domain<K: Scalar>(h: &HermitianSpace<K>, s: &Subspace<K>, v: &[K]) -> bool {
    s.basis().iter().any(|b| !h.inner_unchecked(v, b).is_zero())
}

fn run_instance<K: Scalar, R: Rng>(rng: &mut R) -> Vec<(&'static str, Outcome)> {
    let dim = rng.random_range(2..=4);
    let h: HermitianSpace<K> = random_space(rng, dim);
    let s = random_subspace(rng, dim);
    let sp = h.perp_subspace(&s);
    let mut out = Vec::with_capacity(CHECKS.len());

    out.push((
        "sum_is_whole",
        ensure(s.rank() + sp.rank() == dim && s.sum(&sp) == h.whole(), || {
            format!("dim {dim}: rank S = {}, rank S⊥ = {}", s.rank(), sp.rank())
        }),
    ));
    out.push((
        "double_perp",
        ensure(h.perp_subspace(&sp) == s, || format!("S = {:?}", s.basis())),
    ));

    let x = random_vector::<K, _>(rng, dim);
    let y = random_vector::<K, _>(rng, dim);
    let z = random_vector::<K, _>(rng, dim);
    let a = K::random(rng, ENTRY_RANGE);

    let px = h.project(&s, &x).expect("dimensions agree");
    let py = h.project(&s, &y).expect("dimensions agree");
    let ppx = h.project(&s, &px).expect("dimensions agree");
    let residual = sub(&x, &px);
    out.push((
        "projection_idempotent",
        ensure(s.contains(&px) && sp.contains(&residual) && ppx == px, || {
            format!(
                "x = {}, P(x) = {}, P(P(x)) = {}",
                fmt_vec(&x),
                fmt_vec(&px),
                fmt_vec(&ppx)
            )
        }),
    ));
    out.push((
        "projection_self_adjoint",
        ensure(h.inner_unchecked(&px, &y) == h.inner_unchecked(&x, &py), || {
            format!("x = {}, y = {}", fmt_vec(&x), fmt_vec(&y))
        }),
    ));

    let xy = h.inner_unchecked(&x, &y);
    let symmetric = xy == h.inner_unchecked(&y, &x).star();
    let left_linear = h.inner_unchecked(&axpy(&a, &x, &y), &z)
        == a.mul(&h.inner_unchecked(&x, &z)).add(&h.inner_unchecked(&y, &z));
    let right_semilinear =
        h.inner_unchecked(&x, &axpy(&a, &y, &z)) == a.star().mul(&xy).add(&h.inner_unchecked(&x, &z));
    out.push((
        "sesquilinear",
        ensure(symmetric && left_linear && right_semilinear, || {
            format!(
                "x = {}, y = {}, z = {}, a = {a}: symmetric {symmetric}, left {left_linear}, right {right_semilinear}",
                fmt_vec(&x),
                fmt_vec(&y),
                fmt_vec(&z)
            )
        }),
    ));

    // Lines in P(S) and random lines, restricted to the domain ∁P(S)⊥.
    let mut family: Vec<Line<K>> = Vec::new();
    if s.rank() > 0 {
        // P(S) may hold a single line, so attempts are bounded.
        for attempt in 0..4 * LINES_PER_FAMILY {
            if family.len() == LINES_PER_FAMILY {
                break;
            }
            let v = if attempt % 2 == 0 {
                random_in(rng, &s)
            } else {
                random_nonzero(rng, dim)
            };
            if v.iter().all(|c| c.is_zero()) || !in_domain(&h, &s, &v) {
                continue;
            }
            let line = Line::through(v).expect("vector is nonzero");
            if !family.contains(&line) {
                family.push(line);
            }
        }
    }

    let mut images = Vec::with_capacity(family.len());
    let mut route = Ok(());
    for l in &family {
        match h.sasaki_line(&s, l) {
            Ok(img) => images.push(img),
            Err(e) => {
                route = Err(format!("line {l}: {e}"));
                break;
            }
        }
    }
    out.push(("route_agreement", route.clone()));

    let laws = route.and_then(|()| {
        for (l, img) in family.iter().zip(&images) {
            if s.contains_subspace(l.subspace()) && img != l {
                return Err(format!("(S1) fails at {l}: image {img}"));
            }
        }
        for (l, il) in family.iter().zip(&images) {
            for (m, im) in family.iter().zip(&images) {
                let lhs = h
                    .inner_unchecked(il.representative(), m.representative())
                    .is_zero();
                let rhs = h
                    .inner_unchecked(l.representative(), im.representative())
                    .is_zero();
                if lhs != rhs {
                    return Err(format!("(S2) fails at {l}, {m}"));
                }
            }
        }
        Ok(())
    });
    out.push(("sasaki_s1_s2", laws));
    out
}
