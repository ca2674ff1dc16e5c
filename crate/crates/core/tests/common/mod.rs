//! Brute-force oracles. They use only `len` and `is_orthogonal` of an
//! orthoset and plain bitmask arithmetic, never the library's own closure,
//! clique or search code.

#![allow(dead_code)]

use orthoset::Orthoset;

/// All subsets as bitmasks, for orthosets small enough to scan.
pub fn subsets(n: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 20, "subset scan only for small orthosets");
    0..1u64 << n
}

pub fn members(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

pub fn perp(x: &Orthoset, s: u64) -> u64 {
    let mut out = 0;
    for e in 0..x.len() {
        if members(s).all(|f| x.is_orthogonal(e, f)) {
            out |= 1 << e;
        }
    }
    out
}

pub fn closure(x: &Orthoset, s: u64) -> u64 {
    perp(x, perp(x, s))
}

fn canonical_key(mask: u64) -> (u32, Vec<usize>) {
    (mask.count_ones(), members(mask).collect())
}

/// Every `S` with `S⊥⊥ = S`, by cardinality and then lexicographically.
pub fn family(x: &Orthoset) -> Vec<u64> {
    let mut out: Vec<u64> = subsets(x.len()).filter(|&s| closure(x, s) == s).collect();
    out.sort_by_key(|&s| canonical_key(s));
    out
}

pub fn is_clique(x: &Orthoset, s: u64) -> bool {
    members(s).all(|a| members(s).all(|b| a == b || x.is_orthogonal(a, b)))
}

pub fn rank(x: &Orthoset) -> usize {
    subsets(x.len())
        .filter(|&s| is_clique(x, s))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Largest member of `family` inside `s`.
pub fn meet_by_scan(family: &[u64], s: u64) -> u64 {
    family
        .iter()
        .copied()
        .filter(|&f| f & !s == 0)
        .max_by_key(|f| f.count_ones())
        .expect("the bottom lies below everything")
}

pub fn orthomodular(x: &Orthoset) -> bool {
    let fam = family(x);
    fam.iter().all(|&a| {
        fam.iter().filter(|&&b| a & !b == 0).all(|&b| {
            let m = meet_by_scan(&fam, b & perp(x, a));
            closure(x, a | m) == b
        })
    })
}

/// Atomistic and covering, decided on the family by inclusion alone.
pub fn atomistic_covering(x: &Orthoset) -> (bool, bool) {
    let fam = family(x);
    let bottom = fam[0];
    let atoms: Vec<u64> = fam
        .iter()
        .copied()
        .filter(|&a| a != bottom && fam.iter().all(|&b| b == bottom || b == a || b & !a != 0))
        .collect();
    let atomistic = fam.iter().all(|&p| {
        let below = atoms.iter().filter(|&&a| a & !p == 0).fold(0, |acc, a| acc | a);
        closure(x, below) == p
    });
    let covering = fam.iter().all(|&p| {
        atoms
            .iter()
            .filter(|&&a| meet_by_scan(&fam, a & p) == bottom)
            .all(|&a| {
                let j = closure(x, p | a);
                !fam.iter()
                    .any(|&c| c != p && c != j && p & !c == 0 && c & !j == 0)
            })
    });
    (atomistic, covering)
}

/// All maps `∁A⊥ → A` fixing `A` and satisfying (S2), as `(element, image)`
/// lists, in lexicographic order of the image sequence. Stops at `limit`.
pub fn sasaki_maps(x: &Orthoset, a: u64, limit: usize) -> Vec<Vec<(usize, usize)>> {
    let n = x.len();
    let domain: Vec<usize> = members(!perp(x, a) & ((1u64 << n) - 1)).collect();
    let values: Vec<usize> = members(a).collect();
    let free: Vec<usize> = domain.iter().copied().filter(|&e| a >> e & 1 == 0).collect();
    let mut out = Vec::new();
    if values.is_empty() {
        if free.is_empty() {
            out.push(Vec::new());
        }
        return out;
    }
    let mut choice = vec![0usize; free.len()];
    loop {
        let map: Vec<(usize, usize)> = domain
            .iter()
            .map(|&e| match free.iter().position(|&f| f == e) {
                Some(k) => (e, values[choice[k]]),
                None => (e, e),
            })
            .collect();
        let ok = map.iter().all(|&(e, fe)| {
            map.iter()
                .all(|&(g, fg)| x.is_orthogonal(fe, g) == x.is_orthogonal(e, fg))
        });
        if ok {
            out.push(map);
            if out.len() == limit {
                return out;
            }
        }
        // Odometer increment, last position fastest.
        let mut k = free.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < values.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

pub fn sasaki_space(x: &Orthoset) -> bool {
    family(x).into_iter().all(|a| !sasaki_maps(x, a, 1).is_empty())
}

pub fn point_closed(x: &Orthoset) -> bool {
    (0..x.len()).all(|e| closure(x, 1 << e) == 1 << e)
}

/// Every labelled orthoset on `n` elements, one per edge mask.
pub fn all_orthosets(n: usize) -> impl Iterator<Item = Orthoset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let labels: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    (0..1u64 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p);
        Orthoset::new(format!("graph{n}/{mask}"), labels.clone(), edges).expect("valid graph")
    })
}

pub fn mask(s: orthoset::Subset) -> u64 {
    s.bits()
}
