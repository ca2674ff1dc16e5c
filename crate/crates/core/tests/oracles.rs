//! Library results against the brute-force oracles in `common`, over every
//! labelled orthoset on at most five elements and every corpus orthoset.

mod common;

use common::mask;
use orthoset::sasaki::{self, SpaceMode};
use orthoset::{corpus, Budgets, OrthoLattice, Orthoset, Subset};

fn small_orthosets() -> impl Iterator<Item = Orthoset> {
    (0..=5).flat_map(common::all_orthosets)
}

fn scannable_corpus() -> Vec<Orthoset> {
    corpus::all_orthosets()
        .unwrap()
        .into_iter()
        .filter(|x| x.len() <= 12)
        .collect()
}

#[test]
fn perp_and_closure_match() {
    for x in small_orthosets().chain(scannable_corpus()) {
        for s in common::subsets(x.len()) {
            let sub = Subset::from_bits(s);
            assert_eq!(mask(x.perp(sub).unwrap()), common::perp(&x, s), "{}", x.name());
            let (c, closed) = x.closure(sub).unwrap();
            assert_eq!(mask(c), common::closure(&x, s));
            assert_eq!(closed, common::closure(&x, s) == s);
            assert_eq!(x.is_orthoclosed(sub), closed);
        }
    }
}

#[test]
fn family_matches_subset_scan() {
    let budgets = Budgets::default();
    for x in small_orthosets().chain(scannable_corpus()) {
        let expected = common::family(&x);
        let got: Vec<u64> = x
            .orthoclosed_family(&budgets)
            .unwrap()
            .into_iter()
            .map(mask)
            .collect();
        assert_eq!(got, expected, "{}", x.name());
        let exhaustive: Vec<u64> = x
            .orthoclosed_family_exhaustive()
            .unwrap()
            .into_iter()
            .map(mask)
            .collect();
        assert_eq!(exhaustive, expected, "{}", x.name());
    }
}

#[test]
fn rank_matches_clique_scan() {
    let budgets = Budgets::default();
    for x in small_orthosets().chain(scannable_corpus()) {
        let (r, witness) = x.rank(&budgets).unwrap();
        assert_eq!(r, common::rank(&x), "{}", x.name());
        assert_eq!(witness.len(), r);
        assert!(common::is_clique(&x, mask(witness)));
    }
}

#[test]
fn perp_sets_are_exactly_the_cliques() {
    let budgets = Budgets::default();
    for x in small_orthosets() {
        let mut got: Vec<u64> = x.perp_sets(&budgets).unwrap().into_iter().map(mask).collect();
        got.sort_unstable();
        let expected: Vec<u64> = common::subsets(x.len())
            .filter(|&s| common::is_clique(&x, s))
            .collect();
        assert_eq!(got, expected, "{}", x.name());
    }
}

#[test]
fn maximal_perp_sets_within_orthoclosed_sets() {
    let budgets = Budgets::default();
    for x in small_orthosets() {
        for a in common::family(&x) {
            let mut got: Vec<u64> = x
                .maximal_perp_sets(Subset::from_bits(a), &budgets)
                .unwrap()
                .into_iter()
                .map(mask)
                .collect();
            got.sort_unstable();
            let cliques: Vec<u64> = common::subsets(x.len())
                .filter(|&s| s & !a == 0 && common::is_clique(&x, s))
                .collect();
            let expected: Vec<u64> = cliques
                .iter()
                .copied()
                .filter(|&d| !cliques.iter().any(|&e| e != d && d & !e == 0))
                .collect();
            assert_eq!(got, expected, "{} within {a:b}", x.name());
        }
    }
}

#[test]
fn lattice_operations_match_scan() {
    let budgets = Budgets::default();
    for x in small_orthosets() {
        let (l, fam) = OrthoLattice::from_orthoset_with_family(&x, &budgets).unwrap();
        let fam: Vec<u64> = fam.into_iter().map(mask).collect();
        for i in 0..l.len() {
            assert_eq!(fam[l.ortho(i)], common::perp(&x, fam[i]));
            for j in 0..l.len() {
                assert_eq!(l.leq(i, j), fam[i] & !fam[j] == 0);
                assert_eq!(fam[l.meet(i, j)], common::meet_by_scan(&fam, fam[i] & fam[j]));
                assert_eq!(fam[l.join(i, j)], common::closure(&x, fam[i] | fam[j]));
            }
        }
    }
}

#[test]
fn orthomodularity_dacey_and_covering_match() {
    let budgets = Budgets::default();
    for x in small_orthosets().chain(scannable_corpus()) {
        let l = OrthoLattice::from_orthoset(&x, &budgets).unwrap();
        let om = common::orthomodular(&x);
        assert_eq!(l.is_orthomodular().holds(), om, "{}", x.name());
        assert_eq!(x.dacey_criterion(&budgets).unwrap().holds(), om, "{}", x.name());
        let (atomistic, covering) = common::atomistic_covering(&x);
        let report = l.atoms_and_covering();
        assert_eq!(report.atomistic.holds(), atomistic, "{}", x.name());
        assert_eq!(l.covering_property().holds(), covering, "{}", x.name());
    }
}

#[test]
fn point_closure_matches() {
    for x in small_orthosets() {
        assert_eq!(
            x.is_point_closed().holds(),
            common::point_closed(&x),
            "{}",
            x.name()
        );
    }
}

/// The search returns the lexicographically least map and refutes exactly
/// when the enumeration finds none.
#[test]
fn sasaki_search_matches_enumeration() {
    let budgets = Budgets::default();
    for x in small_orthosets().chain(scannable_corpus().into_iter().filter(|x| x.len() <= 8)) {
        for a in common::family(&x) {
            let target = Subset::from_bits(a);
            let all = common::sasaki_maps(&x, a, usize::MAX);
            match sasaki::find_sasaki_map(&x, target, &budgets).unwrap() {
                sasaki::SasakiVerdict::Exists(w) => {
                    let least: Vec<(usize, usize)> = w.table.iter().map(|(&e, &v)| (e, v)).collect();
                    assert_eq!(Some(&least), all.first(), "{} to {a:b}", x.name());
                }
                sasaki::SasakiVerdict::Refuted(r) => {
                    assert!(all.is_empty(), "{} to {a:b}", x.name());
                    assert!(r.replay(&x));
                }
            }
            let outcome = sasaki::search_sasaki_maps(&x, target, usize::MAX, &budgets).unwrap();
            assert_eq!(outcome.solutions.len(), all.len(), "{} to {a:b}", x.name());
        }
    }
}

#[test]
fn sasaki_space_modes_match_enumeration() {
    let budgets = Budgets::default();
    for x in small_orthosets() {
        let expected = common::sasaki_space(&x);
        let naive = sasaki::is_sasaki_space(&x, SpaceMode::Naive, &budgets).unwrap();
        let reduced = sasaki::is_sasaki_space(&x, SpaceMode::Reduced, &budgets).unwrap();
        assert_eq!(naive.is_sasaki(), expected, "{}", x.name());
        assert_eq!(reduced.is_sasaki(), expected, "{}", x.name());
    }
}

#[test]
fn enumeration_is_not_vacuous() {
    let all: Vec<Orthoset> = small_orthosets().collect();
    assert_eq!(all.len(), 1 + 1 + 2 + 8 + 64 + 1024);
    let non_dacey = all.iter().filter(|x| !common::orthomodular(x)).count();
    let non_sasaki = all.iter().filter(|x| !common::sasaki_space(x)).count();
    let point_closed = all.iter().filter(|x| common::point_closed(x)).count();
    assert!(non_dacey > 0 && non_sasaki >= non_dacey && point_closed > 0);
    eprintln!(
        "{} orthosets: {non_dacey} not Dacey, {non_sasaki} not Sasaki, {point_closed} point-closed",
        all.len()
    );
}
