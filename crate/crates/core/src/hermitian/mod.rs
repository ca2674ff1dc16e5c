//! Finite-dimensional Hermitian spaces over ℚ and ℚ(i) with exact
//! arithmetic, and the Sasaki map on their projective spaces.
//!
//! The form is linear in the first argument and `⋆`-linear in the second:
//! `(x, y) = Σ x_i g_ij y_j⋆`.

pub mod fuzz;
pub mod matrix;
pub mod scalar;

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::orthoset::Orthoset;
use matrix::{kernel, leading_minors, rref, solve, Matrix};
pub use scalar::{Field, Gaussian, Rational, Scalar};

/// `K^n` with a positive-definite Hermitian Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianSpace<K> {
    gram: Matrix<K>,
}

/// A subspace, stored as its reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace<K> {
    dim: usize,
    basis: Matrix<K>,
}

/// A one-dimensional subspace. Its representative has first nonzero
/// coordinate 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line<K>(Subspace<K>);

impl<K: Scalar> HermitianSpace<K> {
    /// Accepts only `⋆`-Hermitian Gram matrices whose realified form has
    /// all leading principal minors positive, which certifies anisotropy.
    pub fn new(gram: Matrix<K>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::InvalidParams("dimension must be positive".into()));
        }
        for row in &gram {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let pairs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
        if let Some((i, j)) = pairs.into_iter().find(|&(i, j)| gram[j][i] != gram[i][j].star()) {
            return Err(Error::NotHermitian(i, j));
        }
        let real = K::realify(&gram);
        let minors = leading_minors(&real);
        if let Some(k) = minors.iter().position(|d| !d.is_positive()) {
            return Err(Error::NotPositiveDefinite(k + 1));
        }
        Ok(HermitianSpace { gram })
    }

    pub fn standard(dim: usize) -> Self {
        let gram = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { K::one() } else { K::zero() })
                    .collect()
            })
            .collect();
        HermitianSpace { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix<K> {
        &self.gram
    }

    fn check_len(&self, v: &[K]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `(x, y) = Σ_{i,j} x_i g_ij y_j⋆`.
    pub fn inner(&self, x: &[K], y: &[K]) -> Result<K> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.inner_unchecked(x, y))
    }

    fn inner_unchecked(&self, x: &[K], y: &[K]) -> K {
        let mut acc = K::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc = acc.add(&xi.mul(&self.gram[i][j]).mul(&yj.star()));
            }
        }
        acc
    }

    pub fn is_orthogonal(&self, x: &[K], y: &[K]) -> Result<bool> {
        Ok(self.inner(x, y)?.is_zero())
    }

    pub fn span(&self, vectors: &[Vec<K>]) -> Result<Subspace<K>> {
        for v in vectors {
            self.check_len(v)?;
        }
        Ok(Subspace::span(self.dim(), vectors.to_vec()))
    }

    pub fn whole(&self) -> Subspace<K> {
        Subspace::span(
            self.dim(),
            (0..self.dim())
                .map(|i| {
                    (0..self.dim())
                        .map(|j| if i == j { K::one() } else { K::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    /// `S⊥`, the kernel of `x ↦ ((x, b))_b` over the basis of `S`.
    pub fn perp_subspace(&self, s: &Subspace<K>) -> Subspace<K> {
        let n = self.dim();
        // (x, b) = Σ_i x_i (Σ_j g_ij b_j⋆)
        let rows = s
            .basis
            .iter()
            .map(|b| {
                (0..n)
                    .map(|i| (0..n).fold(K::zero(), |acc, j| acc.add(&self.gram[i][j].mul(&b[j].star()))))
                    .collect()
            })
            .collect();
        Subspace {
            dim: n,
            basis: kernel(rows, n),
        }
    }

    /// The orthogonal projection onto `S`: the unique `p ∈ S` with
    /// `x − p ∈ S⊥`, from the Gram system on the basis of `S`.
    pub fn project(&self, s: &Subspace<K>, x: &[K]) -> Result<Vec<K>> {
        self.check_len(x)?;
        let k = s.basis.len();
        if k == 0 {
            return Ok(vec![K::zero(); self.dim()]);
        }
        // Σ_q c_q (b_q, b_p) = (x, b_p) for every p
        let system: Matrix<K> = (0..k)
            .map(|p| {
                (0..k)
                    .map(|q| self.inner_unchecked(&s.basis[q], &s.basis[p]))
                    .collect()
            })
            .collect();
        let rhs: Vec<K> = (0..k).map(|p| self.inner_unchecked(x, &s.basis[p])).collect();
        let coeffs = solve(&system, &rhs).expect("Gram matrix of an anisotropic form is invertible");
        let mut out = vec![K::zero(); self.dim()];
        for (c, b) in coeffs.iter().zip(&s.basis) {
            for (o, bi) in out.iter_mut().zip(b) {
                *o = o.add(&c.mul(bi));
            }
        }
        Ok(out)
    }

    /// The Sasaki map `P(S) ⊇ ∁P(S)⊥ → P(S)` at the line `x`, computed both
    /// as `⟨P_S(x)⟩` and as `(⟨x⟩ + S⊥) ∩ S`. The routes must agree.
    pub fn sasaki_line(&self, s: &Subspace<K>, x: &Line<K>) -> Result<Line<K>> {
        let rep = x.representative();
        self.check_len(rep)?;
        if s.basis.iter().all(|b| self.inner_unchecked(rep, b).is_zero()) {
            return Err(Error::OrthogonalToSubspace);
        }
        let projected = Line::through(self.project(s, rep)?)?;
        let meet = x.0.sum(&self.perp_subspace(s)).intersection(s);
        let fmt_sub = |sub: &Subspace<K>| format!("{:?}", sub.basis);
        if meet.rank() != 1 || meet != projected.0 {
            return Err(Error::RouteMismatch {
                projection: fmt_sub(&projected.0),
                span_meet: fmt_sub(&meet),
            });
        }
        Ok(projected)
    }

    /// The finite orthoset induced on `lines` by the form. It is a
    /// sub-orthoset of `P(H)`; its orthoclosed sets need not come from
    /// subspaces.
    pub fn sample_orthoset(&self, name: &str, lines: &[Line<K>]) -> Result<Orthoset> {
        let mut seen = HashSet::new();
        for l in lines {
            self.check_len(l.representative())?;
            if !seen.insert(l) {
                return Err(Error::DuplicateLine(l.to_string()));
            }
        }
        let labels = lines.iter().map(|l| l.to_string()).collect();
        let mut pairs = Vec::new();
        for (i, a) in lines.iter().enumerate() {
            for (j, b) in lines.iter().enumerate().skip(i + 1) {
                if self
                    .inner_unchecked(a.representative(), b.representative())
                    .is_zero()
                {
                    pairs.push((i, j));
                }
            }
        }
        Orthoset::new(name, labels, pairs)
    }
}

impl<K: Scalar> Subspace<K> {
    pub fn span(dim: usize, vectors: Matrix<K>) -> Self {
        Subspace {
            dim,
            basis: rref(vectors, dim).0,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Subspace {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &Matrix<K> {
        &self.basis
    }

    pub fn contains(&self, v: &[K]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(rows, self.dim).0.len() == self.rank()
    }

    pub fn contains_subspace(&self, other: &Subspace<K>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.dim, rows)
    }

    /// Annihilator under the plain pairing `Σ a_i x_i`, independent of any
    /// form.
    fn annihilator(&self) -> Subspace<K> {
        Subspace {
            dim: self.dim,
            basis: kernel(self.basis.clone(), self.dim),
        }
    }

    /// `U ∩ W = ann(ann(U) + ann(W))`.
    pub fn intersection(&self, other: &Subspace<K>) -> Subspace<K> {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }
}

impl<K: Scalar> Line<K> {
    pub fn through(v: Vec<K>) -> Result<Self> {
        if v.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let dim = v.len();
        Ok(Line(Subspace::span(dim, vec![v])))
    }

    pub fn representative(&self) -> &[K] {
        &self.0.basis[0]
    }

    pub fn subspace(&self) -> &Subspace<K> {
        &self.0
    }

    pub fn from_subspace(s: Subspace<K>) -> Option<Self> {
        (s.rank() == 1).then_some(Line(s))
    }
}

impl<K: Scalar> std::fmt::Display for Line<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.representative().iter().map(|c| c.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

/// Parses a JSON array of scalar strings.
pub fn parse_vector<K: Scalar>(value: &serde_json::Value) -> Result<Vec<K>> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::Json("expected an array of scalar strings".into()))?;
    items
        .iter()
        .map(|v| {
            v.as_str()
                .ok_or_else(|| Error::Json(format!("expected a scalar string, got {v}")))?
                .parse()
        })
        .collect()
}

/// Parses a JSON array of arrays of scalar strings.
pub fn parse_matrix<K: Scalar>(value: &serde_json::Value) -> Result<Matrix<K>> {
    value
        .as_array()
        .ok_or_else(|| Error::Json("expected an array of rows".into()))?
        .iter()
        .map(parse_vector)
        .collect()
}

pub fn vector_to_json<K: Scalar>(v: &[K]) -> serde_json::Value {
    serde_json::Value::Array(
        v.iter()
            .map(|c| serde_json::Value::String(c.to_string()))
            .collect(),
    )
}

pub fn matrix_to_json<K: Scalar>(m: &Matrix<K>) -> serde_json::Value {
    serde_json::Value::Array(m.iter().map(|r| vector_to_json(r)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_i64(x)).collect()
    }

    fn gv(v: &[&str]) -> Vec<Gaussian> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn space_validation() {
        assert!(HermitianSpace::new(vec![qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 1])]).is_ok());
        assert_eq!(
            HermitianSpace::new(vec![qv(&[1, 0]), qv(&[0, -1])]),
            Err(Error::NotPositiveDefinite(2))
        );
        assert_eq!(
            HermitianSpace::new(vec![qv(&[1, 2]), qv(&[0, 1])]),
            Err(Error::NotHermitian(0, 1))
        );
        assert!(HermitianSpace::new(vec![gv(&["1", "0"]), gv(&["0", "1"])]).is_ok());
        // i on the diagonal is not Hermitian
        assert_eq!(
            HermitianSpace::new(vec![gv(&["i", "0"]), gv(&["0", "1"])]),
            Err(Error::NotHermitian(0, 0))
        );
        assert_eq!(
            HermitianSpace::new(vec![gv(&["1", "2i"]), gv(&["-2i", "1"])]),
            Err(Error::NotPositiveDefinite(3))
        );
    }

    #[test]
    fn inner_products() {
        let h = HermitianSpace::<Rational>::standard(3);
        assert!(h.inner(&qv(&[1, 2, 3]), &qv(&[3, 0, -1])).unwrap().is_zero());
        assert!(h.inner(&qv(&[0, 0, 0]), &qv(&[0, 0, 0])).unwrap().is_zero());
        assert!(matches!(
            h.inner(&qv(&[1]), &qv(&[1, 2, 3])),
            Err(Error::Dimension { .. })
        ));
        let g = HermitianSpace::<Gaussian>::standard(2);
        assert!(g.inner(&gv(&["1", "i"]), &gv(&["i", "1"])).unwrap().is_zero());
        // ⋆-linear in the second argument
        let i = Gaussian::i();
        let x = gv(&["1", "2"]);
        let y = gv(&["1", "-1"]);
        let iy: Vec<Gaussian> = y.iter().map(|c| c.mul(&i)).collect();
        assert_eq!(g.inner(&x, &iy).unwrap(), g.inner(&x, &y).unwrap().mul(&i.star()));
    }

    #[test]
    fn perp_examples() {
        let h = HermitianSpace::<Rational>::standard(3);
        let s = h.span(&[qv(&[1, 0, 0]), qv(&[0, 1, 0])]).unwrap();
        assert_eq!(h.perp_subspace(&s), h.span(&[qv(&[0, 0, 1])]).unwrap());
        assert_eq!(h.perp_subspace(&Subspace::zero(3)), h.whole());
        let h2 = HermitianSpace::<Rational>::standard(2);
        let s = h2.span(&[qv(&[1, 1])]).unwrap();
        assert_eq!(h2.perp_subspace(&s), h2.span(&[qv(&[1, -1])]).unwrap());
    }

    #[test]
    fn projections() {
        let h = HermitianSpace::<Rational>::standard(3);
        let s = h.span(&[qv(&[1, 0, 0]), qv(&[0, 1, 0])]).unwrap();
        assert_eq!(h.project(&s, &qv(&[1, 2, 3])).unwrap(), qv(&[1, 2, 0]));
        assert_eq!(h.project(&s, &qv(&[4, -1, 0])).unwrap(), qv(&[4, -1, 0]));
        let h2 = HermitianSpace::<Rational>::standard(2);
        let s = h2.span(&[qv(&[1, 1])]).unwrap();
        let half = Rational::new(1, 2);
        assert_eq!(h2.project(&s, &qv(&[1, 0])).unwrap(), vec![half.clone(), half]);
    }

    #[test]
    fn sasaki_line_examples() {
        let h = HermitianSpace::<Rational>::standard(3);
        let s = h.span(&[qv(&[1, 0, 0]), qv(&[0, 1, 0])]).unwrap();
        let x = Line::through(qv(&[1, 2, 3])).unwrap();
        assert_eq!(
            h.sasaki_line(&s, &x).unwrap(),
            Line::through(qv(&[1, 2, 0])).unwrap()
        );
        let inside = Line::through(qv(&[2, -1, 0])).unwrap();
        assert_eq!(h.sasaki_line(&s, &inside).unwrap(), inside);
        let outside = Line::through(qv(&[0, 0, 5])).unwrap();
        assert_eq!(h.sasaki_line(&s, &outside), Err(Error::OrthogonalToSubspace));
    }

    #[test]
    fn line_canonical_representative() {
        let l = Line::through(qv(&[0, 3, -6])).unwrap();
        assert_eq!(l.representative(), qv(&[0, 1, -2]).as_slice());
        assert_eq!(l.to_string(), "<0,1,-2>");
        assert_eq!(Line::through(qv(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn sampled_orthosets() {
        let h = HermitianSpace::<Rational>::standard(3);
        let lines: Vec<_> = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .iter()
            .map(|v| Line::through(qv(v)).unwrap())
            .collect();
        let x = h.sample_orthoset("basis", &lines).unwrap();
        assert_eq!(x.edges().count(), 3);

        let h2 = HermitianSpace::<Rational>::standard(2);
        let lines = vec![
            Line::through(qv(&[1, 0])).unwrap(),
            Line::through(qv(&[1, 1])).unwrap(),
        ];
        assert_eq!(h2.sample_orthoset("s", &lines).unwrap().edges().count(), 0);

        let g = HermitianSpace::<Gaussian>::standard(2);
        let lines = vec![
            Line::through(gv(&["1", "i"])).unwrap(),
            Line::through(gv(&["i", "1"])).unwrap(),
        ];
        assert_eq!(g.sample_orthoset("g", &lines).unwrap().edges().count(), 1);

        let dup = vec![
            Line::through(qv(&[1, 1])).unwrap(),
            Line::through(qv(&[2, 2])).unwrap(),
        ];
        assert!(matches!(
            h2.sample_orthoset("d", &dup),
            Err(Error::DuplicateLine(_))
        ));
    }

    #[test]
    fn intersection_of_planes() {
        let h = HermitianSpace::<Rational>::standard(3);
        let u = h.span(&[qv(&[1, 0, 0]), qv(&[0, 1, 0])]).unwrap();
        let w = h.span(&[qv(&[0, 1, 0]), qv(&[0, 0, 1])]).unwrap();
        assert_eq!(u.intersection(&w), h.span(&[qv(&[0, 1, 0])]).unwrap());
        assert_eq!(u.intersection(&Subspace::zero(3)).rank(), 0);
    }

    #[test]
    fn json_vectors() {
        let v: Vec<Gaussian> = parse_vector(&serde_json::json!(["3/4", "1/2+5/3i"])).unwrap();
        assert_eq!(vector_to_json(&v), serde_json::json!(["3/4", "1/2+5/3i"]));
        assert!(parse_vector::<Rational>(&serde_json::json!([1])).is_err());
    }
}
