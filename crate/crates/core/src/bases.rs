//! Explicit families of swap products of low degree and rank checks for them.
//!
//! Degree-`D` products are compared against the span of every permutation of
//! Cayley length at most `D`, evaluated in the faithful irreps of the
//! `d`-swap algebra.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::oracle::span_rank;
use crate::swap_algebra::{cayley_ball, k_subsets, Permutation};

/// `Swap_{a1 b1} Swap_{a2 b2} ...` as a permutation (0-based letters).
pub fn swap_product(n: usize, pairs: &[(usize, usize)]) -> Permutation {
    pairs.iter().fold(Permutation::identity(n), |acc, &(a, b)| acc.compose(&Permutation::transposition(n, a, b)))
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    k_subsets(n, 2).into_iter().map(|s| (s[0], s[1])).collect()
}

fn disjoint(sets: &[&[usize]]) -> bool {
    let mut seen = BTreeSet::new();
    sets.iter().flat_map(|s| s.iter()).all(|x| seen.insert(*x))
}

/// Lex-increasing chains of `m` pairwise disjoint pairs.
fn disjoint_pairs(n: usize, m: usize, avoid: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> =
        pairs(n).into_iter().filter(|(a, b)| !avoid.contains(a) && !avoid.contains(b)).collect();
    let mut out = Vec::new();
    fn rec(
        all: &[(usize, usize)],
        start: usize,
        m: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for t in start..all.len() {
            let (a, b) = all[t];
            if cur.iter().all(|&(c, d)| c != a && c != b && d != a && d != b) {
                cur.push((a, b));
                rec(all, t + 1, m, cur, out);
                cur.pop();
            }
        }
    }
    rec(&all, 0, m, &mut Vec::new(), &mut out);
    out
}

/// The two 3-cycle shapes `Swap_ij Swap_jk`, `Swap_ij Swap_ik` on `i < j < k`.
fn three_cycles(t: &[usize]) -> [Vec<(usize, usize)>; 2] {
    let (i, j, k) = (t[0], t[1], t[2]);
    [vec![(i, j), (j, k)], vec![(i, j), (i, k)]]
}

/// Five of the six 4-cycle shapes on `i < j < k < l`; `all_six` adds `Swap_il Swap_kl Swap_jk`.
fn four_cycles(t: &[usize], all_six: bool) -> Vec<Vec<(usize, usize)>> {
    let (i, j, k, l) = (t[0], t[1], t[2], t[3]);
    let mut v = vec![
        vec![(i, j), (j, k), (k, l)],
        vec![(i, j), (j, l), (k, l)],
        vec![(i, k), (j, k), (j, l)],
        vec![(i, k), (k, l), (j, l)],
        vec![(i, l), (j, l), (j, k)],
    ];
    if all_six {
        v.push(vec![(i, l), (k, l), (j, k)]);
    }
    v
}

fn five_cycles_d3(t: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let (i, j, k, l, m) = (t[0], t[1], t[2], t[3], t[4]);
    vec![
        vec![(i, j), (i, k), (j, l), (j, m)],
        vec![(i, j), (i, k), (j, l), (k, m)],
        vec![(i, j), (i, k), (k, l), (k, m)],
        vec![(i, j), (i, l), (j, k), (j, m)],
        vec![(i, j), (i, m), (j, k), (j, l)],
        vec![(i, j), (i, l), (i, m), (j, k)],
        vec![(i, j), (i, k), (i, m), (j, l)],
        vec![(i, j), (i, k), (i, m), (k, l)],
        vec![(i, j), (i, k), (i, l), (i, m)],
        vec![(i, j), (i, k), (i, l), (l, m)],
        vec![(i, j), (i, k), (i, l), (k, m)],
        vec![(i, j), (i, k), (i, l), (j, m)],
    ]
}

fn five_cycles_d4(t: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let (i, j, k, l, m) = (t[0], t[1], t[2], t[3], t[4]);
    vec![
        vec![(i, j), (j, k), (k, l), (l, m)],
        vec![(i, j), (j, k), (k, m), (l, m)],
        vec![(i, j), (j, l), (k, l), (k, m)],
        vec![(i, j), (j, l), (l, m), (k, m)],
        vec![(i, j), (j, m), (k, m), (k, l)],
        vec![(i, j), (j, m), (l, m), (k, l)],
        vec![(i, k), (j, k), (j, l), (l, m)],
        vec![(i, k), (j, k), (j, m), (l, m)],
        vec![(i, k), (k, l), (j, l), (j, m)],
        vec![(i, k), (k, l), (l, m), (j, m)],
        vec![(i, k), (k, m), (j, m), (j, l)],
        vec![(i, k), (k, m), (l, m), (j, l)],
        vec![(i, l), (j, l), (j, k), (k, m)],
        vec![(i, l), (j, l), (j, m), (k, m)],
        vec![(i, l), (k, l), (j, k), (j, m)],
        vec![(i, l), (k, l), (k, m), (j, m)],
        vec![(i, l), (l, m), (j, m), (j, k)],
        vec![(i, l), (l, m), (k, m), (j, k)],
        vec![(i, m), (j, m), (j, k), (k, l)],
        vec![(i, m), (j, m), (j, l), (k, l)],
        vec![(i, m), (k, m), (j, k), (j, l)],
        vec![(i, m), (k, m), (k, l), (j, l)],
        vec![(i, m), (l, m), (j, l), (j, k)],
    ]
}

/// Pairs of disjoint 3-cycle shapes with `i < p`: the three printed
/// combinations, plus `Swap_ij Swap_ik Swap_pq Swap_qr` when `complete`.
fn three_plus_three(n: usize, complete: bool) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for a in k_subsets(n, 3) {
        for b in k_subsets(n, 3) {
            if a[0] >= b[0] || !disjoint(&[&a, &b]) {
                continue;
            }
            let (i, j, k) = (a[0], a[1], a[2]);
            let (p, q, r) = (b[0], b[1], b[2]);
            out.push(vec![(i, j), (j, k), (p, q), (q, r)]);
            out.push(vec![(i, j), (j, k), (p, q), (p, r)]);
            out.push(vec![(i, j), (i, k), (p, q), (p, r)]);
            if complete {
                out.push(vec![(i, j), (i, k), (p, q), (q, r)]);
            }
        }
    }
    out
}

/// A 3-cycle shape on `i < j < k` followed by `m` disjoint transpositions off `{i, j, k}`.
fn three_plus_pairs(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for t in k_subsets(n, 3) {
        for rest in disjoint_pairs(n, m, &t) {
            for c in three_cycles(&t) {
                out.push([c, rest.clone()].concat());
            }
        }
    }
    out
}

fn quadratics_d3(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![vec![]];
    out.extend(pairs(n).into_iter().map(|p| vec![p]));
    for t in k_subsets(n, 3) {
        out.extend(three_cycles(&t));
    }
    out.extend(disjoint_pairs(n, 2, &[]));
    out
}

fn cubics_d3(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = disjoint_pairs(n, 3, &[]);
    out.extend(three_plus_pairs(n, 1));
    for t in k_subsets(n, 4) {
        out.extend(four_cycles(&t, false));
    }
    out
}

/// Degree-two basis for `d = 3`.
pub fn b2_d3(n: usize) -> Vec<Permutation> {
    quadratics_d3(n).iter().map(|w| swap_product(n, w)).collect()
}

/// Degree-three basis for `d = 3`.
pub fn b3_d3(n: usize) -> Vec<Permutation> {
    let mut words = quadratics_d3(n);
    words.extend(cubics_d3(n));
    words.iter().map(|w| swap_product(n, w)).collect()
}

/// Degree-four family for `d = 3` as printed. From six letters on it misses
/// one product of two disjoint 3-cycles per split; see [`b4_hat_d3_completed`].
pub fn b4_hat_d3(n: usize) -> Vec<Permutation> {
    b4_hat_d3_with(n, false)
}

/// [`b4_hat_d3`] with the fourth 3+3 combination; a basis.
pub fn b4_hat_d3_completed(n: usize) -> Vec<Permutation> {
    b4_hat_d3_with(n, true)
}

fn b4_hat_d3_with(n: usize, complete: bool) -> Vec<Permutation> {
    let mut words = quadratics_d3(n);
    words.extend(cubics_d3(n));
    words.extend(disjoint_pairs(n, 4, &[]));
    words.extend(three_plus_pairs(n, 2));
    for t in k_subsets(n, 4) {
        for (p, q) in pairs(n) {
            if !t.contains(&p) && !t.contains(&q) {
                for c in four_cycles(&t, false) {
                    out_push(&mut words, c, (p, q));
                }
            }
        }
    }
    words.extend(three_plus_three(n, complete));
    for t in k_subsets(n, 5) {
        words.extend(five_cycles_d3(&t));
    }
    words.iter().map(|w| swap_product(n, w)).collect()
}

fn out_push(words: &mut Vec<Vec<(usize, usize)>>, mut c: Vec<(usize, usize)>, extra: (usize, usize)) {
    c.push(extra);
    words.push(c);
}

/// Degree-four family for `d = 4` as printed; same gap as [`b4_hat_d3`].
pub fn b4_d4(n: usize) -> Vec<Permutation> {
    b4_d4_with(n, false)
}

pub fn b4_d4_completed(n: usize) -> Vec<Permutation> {
    b4_d4_with(n, true)
}

fn b4_d4_with(n: usize, complete: bool) -> Vec<Permutation> {
    let mut perms: Vec<Permutation> = cayley_ball(n, 3);
    let mut words = disjoint_pairs(n, 4, &[]);
    words.extend(three_plus_pairs(n, 2));
    for t in k_subsets(n, 4) {
        for (p, q) in pairs(n) {
            if !t.contains(&p) && !t.contains(&q) {
                for c in four_cycles(&t, true) {
                    out_push(&mut words, c, (p, q));
                }
            }
        }
    }
    words.extend(three_plus_three(n, complete));
    for t in k_subsets(n, 5) {
        words.extend(five_cycles_d4(&t));
    }
    perms.extend(words.iter().map(|w| swap_product(n, w)));
    perms
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub degree: usize,
    pub size: usize,
    pub distinct: usize,
    pub rank: usize,
    /// Rank of all products of at most `degree` transpositions.
    pub ambient_rank: usize,
}

impl FamilyReport {
    /// Distinct elements with `rank == size`.
    pub fn is_independent(&self) -> bool {
        self.size == self.distinct && self.rank == self.size
    }

    pub fn spans(&self) -> bool {
        self.rank == self.ambient_rank
    }

    pub fn is_basis(&self) -> bool {
        self.is_independent() && self.spans()
    }
}

pub fn check_family(name: &str, family: &[Permutation], n: usize, d: usize, degree: usize) -> Result<FamilyReport> {
    let distinct = family.iter().collect::<BTreeSet<_>>().len();
    Ok(FamilyReport {
        name: name.to_string(),
        n,
        d,
        degree,
        size: family.len(),
        distinct,
        rank: span_rank(family, n, d)?,
        ambient_rank: span_rank(&cayley_ball(n, degree), n, d)?,
    })
}

/// Products of at most `d - 1` transpositions are independent in the `d`-swap algebra.
pub fn low_degree_independence(n: usize, d: usize) -> Result<FamilyReport> {
    let degree = d.saturating_sub(1).min(n.saturating_sub(1));
    check_family("products of at most d-1 swaps", &cayley_ball(n, degree), n, d, degree)
}

/// Every fixture family for `n` letters, printed and completed.
pub fn all_family_reports(n: usize) -> Result<Vec<FamilyReport>> {
    Ok(vec![
        check_family("B2 (d=3)", &b2_d3(n), n, 3, 2)?,
        check_family("B3 (d=3)", &b3_d3(n), n, 3, 3)?,
        check_family("B4-hat (d=3)", &b4_hat_d3(n), n, 3, 4)?,
        check_family("B4-hat completed (d=3)", &b4_hat_d3_completed(n), n, 3, 4)?,
        check_family("B4 (d=4)", &b4_d4(n), n, 4, 4)?,
        check_family("B4 completed (d=4)", &b4_d4_completed(n), n, 4, 4)?,
    ])
}
