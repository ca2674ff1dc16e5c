//! Automorphism search on small orthosets and the transitivity check.

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::orthoset::Orthoset;
use crate::report::Verdict;

/// No automorphism sends `from` to `to` while fixing `{from, to}⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitivityFailure {
    pub from: usize,
    pub to: usize,
}

/// Searches for a bijection preserving orthogonality both ways that
/// extends the partial assignment `fixed`. Elements are mapped in index
/// order and images tried in index order, so the result is the
/// lexicographically least extension.
pub fn find_automorphism(
    x: &Orthoset,
    fixed: &[(usize, usize)],
    budgets: &Budgets,
) -> Result<Option<Vec<usize>>> {
    let n = x.len();
    if n > budgets.automorphism_elements {
        return Err(Error::Budget {
            what: "automorphism search",
            limit: budgets.automorphism_elements,
        });
    }
    let mut image: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for &(a, b) in fixed {
        match image[a] {
            Some(prev) if prev != b => return Ok(None),
            Some(_) => continue,
            None => {}
        }
        if used[b] {
            return Ok(None);
        }
        image[a] = Some(b);
        used[b] = true;
    }
    // pre-assigned pairs must already agree
    for &(a, b) in fixed {
        for &(c, d) in fixed {
            if x.is_orthogonal(a, c) != x.is_orthogonal(b, d) {
                return Ok(None);
            }
        }
    }
    let degree: Vec<usize> = (0..n).map(|i| x.neighbors(i).len()).collect();
    let free: Vec<usize> = (0..n).filter(|&i| image[i].is_none()).collect();
    let mut nodes = 0usize;
    let found = extend(x, &free, 0, &mut image, &mut used, &degree, &mut nodes, budgets)?;
    Ok(found.then(|| image.into_iter().map(|v| v.expect("total")).collect()))
}

#[allow(clippy::too_many_arguments)]
fn extend(
    x: &Orthoset,
    free: &[usize],
    depth: usize,
    image: &mut [Option<usize>],
    used: &mut [bool],
    degree: &[usize],
    nodes: &mut usize,
    budgets: &Budgets,
) -> Result<bool> {
    let Some(&v) = free.get(depth) else {
        return Ok(true);
    };
    for w in 0..x.len() {
        if used[w] || degree[w] != degree[v] {
            continue;
        }
        *nodes += 1;
        if *nodes > budgets.search_nodes {
            return Err(Error::Budget {
                what: "automorphism search nodes",
                limit: budgets.search_nodes,
            });
        }
        let consistent = (0..x.len()).all(|u| match image[u] {
            Some(iu) => x.is_orthogonal(v, u) == x.is_orthogonal(w, iu),
            None => true,
        });
        if !consistent {
            continue;
        }
        image[v] = Some(w);
        used[w] = true;
        if extend(x, free, depth + 1, image, used, degree, nodes, budgets)? {
            return Ok(true);
        }
        image[v] = None;
        used[w] = false;
    }
    Ok(false)
}

pub fn is_automorphism(x: &Orthoset, map: &[usize]) -> bool {
    let n = x.len();
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &m in map {
        if m >= n || std::mem::replace(&mut seen[m], true) {
            return false;
        }
    }
    (0..n).all(|a| (0..n).all(|b| x.is_orthogonal(a, b) == x.is_orthogonal(map[a], map[b])))
}

/// A pair `(e, f)` and an automorphism moving `e` to `f`.
pub type PairWitness = ((usize, usize), Vec<usize>);

/// For each pair `(e, f)`, an automorphism with `e ↦ f` fixing `{e,f}⊥`
/// pointwise; on success returns the witness automorphisms in pair order.
pub fn transitivity_witnesses(
    x: &Orthoset,
    budgets: &Budgets,
) -> Result<std::result::Result<Vec<PairWitness>, TransitivityFailure>> {
    let mut witnesses = Vec::new();
    for e in 0..x.len() {
        for f in 0..x.len() {
            let common = x.neighbors(e).intersection(x.neighbors(f));
            let mut fixed = vec![(e, f)];
            fixed.extend(common.iter().map(|c| (c, c)));
            match find_automorphism(x, &fixed, budgets)? {
                Some(tau) => witnesses.push(((e, f), tau)),
                None => return Ok(Err(TransitivityFailure { from: e, to: f })),
            }
        }
    }
    Ok(Ok(witnesses))
}

pub fn is_transitive(x: &Orthoset, budgets: &Budgets) -> Result<Verdict<TransitivityFailure>> {
    Ok(match transitivity_witnesses(x, budgets)? {
        Ok(_) => Verdict::Holds,
        Err(fail) => Verdict::Fails(fail),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Orthoset {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Orthoset::new("k", labels, pairs.collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn complete_graphs_are_transitive() {
        for n in 1..=5 {
            assert!(is_transitive(&complete(n), &Budgets::default()).unwrap().holds());
        }
    }

    #[test]
    fn cycle4_is_transitive() {
        let c = Orthoset::from_labels(
            "c4",
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
        .unwrap();
        let w = transitivity_witnesses(&c, &Budgets::default()).unwrap().unwrap();
        assert_eq!(w.len(), 16);
        for ((e, f), tau) in &w {
            assert!(is_automorphism(&c, tau));
            assert_eq!(tau[*e], *f);
        }
    }

    #[test]
    fn path4_is_not_transitive() {
        // no automorphism moves an endpoint to an interior vertex
        let p = Orthoset::from_labels("p4", &["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")])
            .unwrap();
        assert_eq!(
            is_transitive(&p, &Budgets::default()).unwrap(),
            Verdict::Fails(TransitivityFailure { from: 0, to: 1 })
        );
    }

    #[test]
    fn size_bound_is_enforced() {
        assert!(matches!(
            is_transitive(&complete(11), &Budgets::default()),
            Err(Error::Budget { .. })
        ));
    }
}
