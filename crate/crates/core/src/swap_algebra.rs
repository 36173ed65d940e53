//! Permutations, the group algebra `Q[S_n]`, and its quotient by the
//! antisymmetrizer on `d + 1` letters.
//!
//! Positions and values are 0-based internally. The product is composition,
//! `(p * q)(i) = p(q(i))`, matching `rho(p) rho(q) = rho(pq)` on tensors.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QmcError, Result};
use crate::graph::GraphSpec;
use crate::partitions::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    one_line: Vec<usize>,
}

impl Permutation {
    pub fn new(one_line: Vec<usize>) -> Result<Self> {
        let n = one_line.len();
        let mut seen = vec![false; n];
        for &v in &one_line {
            if v >= n || seen[v] {
                return Err(QmcError::InvalidArgument(format!("{one_line:?} is not a permutation")));
            }
            seen[v] = true;
        }
        Ok(Permutation { one_line })
    }

    /// Builds from a 1-based one-line array.
    pub fn from_one_based(v: &[usize]) -> Result<Self> {
        if v.contains(&0) {
            return Err(QmcError::InvalidArgument(format!("{v:?} is not 1-based")));
        }
        Self::new(v.iter().map(|x| x - 1).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.one_line.iter().map(|x| x + 1).collect()
    }

    pub fn identity(n: usize) -> Self {
        Permutation { one_line: (0..n).collect() }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.one_line.swap(i, j);
        p
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[0]`.
    pub fn cycle(n: usize, c: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for (k, &a) in c.iter().enumerate() {
            p.one_line[a] = c[(k + 1) % c.len()];
        }
        p
    }

    pub fn n(&self) -> usize {
        self.one_line.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    pub fn apply(&self, i: usize) -> usize {
        self.one_line[i]
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { one_line: other.one_line.iter().map(|&i| self.one_line[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.one_line.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { one_line: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.one_line.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.one_line[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.one_line[x];
            }
            out.push(c);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_multiset(self.cycles().iter().map(Vec::len).collect())
    }

    pub fn cycle_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.one_line[x];
            }
        }
        count
    }

    /// Minimal number of transpositions, `n - #cycles`.
    pub fn cayley_length(&self) -> usize {
        self.n() - self.cycle_count()
    }

    pub fn sign(&self) -> i32 {
        if self.cayley_length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn inversions(&self) -> usize {
        let v = &self.one_line;
        (0..v.len()).map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count()).sum()
    }

    /// Length of the longest decreasing subsequence of the one-line form.
    pub fn longest_decreasing(&self) -> usize {
        // patience sorting on negated values
        let mut tails: Vec<isize> = Vec::new();
        for &v in &self.one_line {
            let x = -(v as isize);
            match tails.binary_search(&x) {
                Ok(_) => {}
                Err(k) => {
                    if k == tails.len() {
                        tails.push(x);
                    } else {
                        tails[k] = x;
                    }
                }
            }
        }
        tails.len()
    }

    /// Adjacent transpositions `s_i = (i, i+1)` with `self = s_{a_1} s_{a_2} ... s_{a_m}`, reduced.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut v = self.one_line.clone();
        let mut word = Vec::new();
        // right-multiplying by s_i swaps positions i, i+1 and removes one inversion at a descent
        loop {
            match (0..v.len().saturating_sub(1)).find(|&i| v[i] > v[i + 1]) {
                Some(i) => {
                    v.swap(i, i + 1);
                    word.push(i);
                }
                None => break,
            }
        }
        word.reverse();
        word
    }
}

impl Ord for Permutation {
    /// Rewriting order: Cayley length first, then one-line lexicographic.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.cayley_length().cmp(&other.cayley_length()).then_with(|| self.one_line.cmp(&other.one_line))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_one_based())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// True iff the one-line form has no decreasing subsequence of length `d + 1`.
pub fn is_good(pi: &Permutation, d: usize) -> bool {
    pi.longest_decreasing() <= d
}

/// Every permutation of `0..k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Permutations of `S(indices)` embedded in `S_n`, with their signs.
pub fn subgroup_on(indices: &[usize], n: usize) -> Vec<(Permutation, i32)> {
    all_permutations(indices.len())
        .into_iter()
        .map(|img| {
            let mut p = Permutation::identity(n);
            for (a, &b) in img.iter().enumerate() {
                p.one_line[indices[a]] = indices[b];
            }
            let s = p.sign();
            (p, s)
        })
        .collect()
}

/// Finitely supported map from permutations to rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    n: usize,
    terms: BTreeMap<Permutation, BigRational>,
}

impl AlgebraElement {
    pub fn zero(n: usize) -> Self {
        AlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_perm(Permutation::identity(n))
    }

    pub fn from_perm(p: Permutation) -> Self {
        Self::from_term(p, BigRational::one())
    }

    pub fn from_term(p: Permutation, c: BigRational) -> Self {
        let mut x = Self::zero(p.n());
        x.add_term(p, c);
        x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &Permutation) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, p: Permutation, c: BigRational) {
        if c.is_zero() {
            return;
        }
        assert_eq!(p.n(), self.n, "mixing algebras of different degree");
        match self.terms.entry(p) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        AlgebraElement { n: self.n, terms: self.terms.iter().map(|(p, v)| (p.clone(), v * c)).collect() }
    }

    /// Image under the anti-automorphism `p -> p^{-1}`.
    pub fn adjoint(&self) -> Self {
        AlgebraElement { n: self.n, terms: self.terms.iter().map(|(p, v)| (p.inverse(), v.clone())).collect() }
    }

    pub fn support(&self) -> impl Iterator<Item = &Permutation> {
        self.terms.keys()
    }

    /// Coefficients as `f64`, for numerical evaluation.
    pub fn float_terms(&self) -> Vec<(Permutation, f64)> {
        self.terms.iter().map(|(p, c)| (p.clone(), c.to_f64().unwrap_or(f64::NAN))).collect()
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.n);
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                out.add_term(p.compose(q), a * b);
            }
        }
        out
    }
}

/// JSON form `{"terms":[{"perm":[..],"coeff":"p/q"}]}`.
#[derive(Serialize, Deserialize)]
struct SerTerm {
    perm: Permutation,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct SerElement {
    terms: Vec<SerTerm>,
}

impl Serialize for AlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SerElement {
            terms: self.terms.iter().map(|(p, c)| SerTerm { perm: p.clone(), coeff: c.to_string() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SerElement::deserialize(d)?;
        let n = raw.terms.first().map(|t| t.perm.n()).unwrap_or(0);
        let mut x = AlgebraElement::zero(n);
        for t in raw.terms {
            if t.perm.n() != n {
                return Err(serde::de::Error::custom("terms of different degree"));
            }
            let c: BigRational = t.coeff.parse().map_err(serde::de::Error::custom)?;
            x.add_term(t.perm, c);
        }
        Ok(x)
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `sum_{sigma in S(indices)} sgn(sigma) sigma` inside `S_n`.
pub fn antisymmetrizer(indices: &[usize], n: usize) -> Result<AlgebraElement> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != indices.len() || sorted.last().is_some_and(|&m| m >= n) {
        return Err(QmcError::InvalidArgument(format!("bad index set {indices:?} for n={n}")));
    }
    let mut x = AlgebraElement::zero(n);
    for (p, s) in subgroup_on(&sorted, n) {
        x.add_term(p, rat(s as i64));
    }
    Ok(x)
}

/// Default cap on rewriting steps in [`straighten`].
pub const STRAIGHTEN_CAP: usize = 1_000_000;

/// Lexicographically largest position tuple carrying a decreasing run of length `d + 1`.
fn largest_violation(pi: &Permutation, d: usize) -> Option<Vec<usize>> {
    let n = pi.n();
    let k = d + 1;
    if k > n {
        return None;
    }
    // walk k-subsets in decreasing lexicographic order
    let mut idx: Vec<usize> = (n - k..n).collect();
    loop {
        if idx.windows(2).all(|w| pi.apply(w[0]) > pi.apply(w[1])) {
            return Some(idx);
        }
        // previous subset in lex order
        let mut t = k;
        loop {
            if t == 0 {
                return None;
            }
            t -= 1;
            let lower = if t == 0 { 0 } else { idx[t - 1] + 1 };
            if idx[t] > lower {
                idx[t] -= 1;
                for s in t + 1..k {
                    idx[s] = n - k + s;
                }
                break;
            }
        }
    }
}

/// Rewrites `x` onto `(d+1)`-good permutations modulo the antisymmetrizer ideal.
pub fn straighten(x: &AlgebraElement, d: usize) -> Result<AlgebraElement> {
    straighten_capped(x, d, STRAIGHTEN_CAP)
}

pub fn straighten_capped(x: &AlgebraElement, d: usize, cap: usize) -> Result<AlgebraElement> {
    let n = x.n();
    let mut work = x.clone();
    let mut steps = 0usize;
    // reversed signed arrangement of the sorted value set, shared by every step of size d+1
    let k = d + 1;
    let arrangements: Vec<(Vec<usize>, i32)> = if k <= n {
        all_permutations(k)
            .into_iter()
            .map(|a| {
                let s = Permutation { one_line: a.clone() }.sign();
                (a, s)
            })
            .collect()
    } else {
        Vec::new()
    };
    let reversal_sign = if (k * (k - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    loop {
        // process the bad term with the most inversions first so substitutions merge early
        let bad =
            work.terms.keys().filter(|p| !is_good(p, d)).max_by_key(|p| (p.inversions(), p.one_line.clone())).cloned();
        let Some(pi) = bad else { break };
        steps += 1;
        if steps > cap {
            return Err(QmcError::NonTermination(cap));
        }
        let c = work.terms.remove(&pi).expect("support term");
        let pos = largest_violation(&pi, d).expect("bad permutation has a violation");
        let mut values: Vec<usize> = pos.iter().map(|&j| pi.apply(j)).collect();
        values.sort_unstable();
        // pi = reversal * base where base carries the values increasingly on `pos`;
        // sum_a sgn(a) a*base = 0 gives pi = -sgn(rev) * sum_{a != rev} sgn(a) a*base
        for (arr, s) in &arrangements {
            if arr.iter().enumerate().all(|(i, &a)| a == k - 1 - i) {
                continue;
            }
            let mut q = pi.clone();
            for (slot, &j) in pos.iter().enumerate() {
                q.one_line[j] = values[arr[slot]];
            }
            let coeff = &c * rat(-(reversal_sign * *s) as i64);
            work.add_term(q, coeff);
        }
    }
    Ok(work)
}

/// Sum of all `(k+1)`-cycles of `S_n`.
pub fn cycle_sum(k: usize, n: usize) -> Result<AlgebraElement> {
    if k == 0 || k + 1 > n {
        return Err(QmcError::InvalidArgument(format!("cycle_sum needs 1 <= k <= n-1, got k={k}, n={n}")));
    }
    let mut x = AlgebraElement::zero(n);
    for subset in k_subsets(n, k + 1) {
        // fix the smallest element first; order the rest freely
        for rest in all_permutations(k) {
            let mut c = vec![subset[0]];
            c.extend(rest.iter().map(|&r| subset[r + 1]));
            x.add_term(Permutation::cycle(n, &c), BigRational::one());
        }
    }
    Ok(x)
}

/// `sum_{ij} 2 w_ij (e - (i j))`.
pub fn hamiltonian_element(g: &GraphSpec) -> AlgebraElement {
    let mut x = AlgebraElement::zero(g.n);
    for &(i, j, w) in &g.edges {
        let c = BigRational::from_float(2.0 * w).expect("finite weight");
        x.add_term(Permutation::identity(g.n), c.clone());
        x.add_term(Permutation::transposition(g.n, i, j), -c);
    }
    x
}

/// All `(d+1)`-good permutations of Cayley length at most `ell`, in rewriting order.
pub fn words_up_to(n: usize, d: usize, ell: usize) -> Vec<Permutation> {
    cayley_ball(n, ell).into_iter().filter(|p| is_good(p, d)).collect()
}

/// All permutations of `n` letters with Cayley length at most `ell`, in rewriting order.
pub fn cayley_ball(n: usize, ell: usize) -> Vec<Permutation> {
    let mut layer = vec![Permutation::identity(n)];
    let mut all: std::collections::BTreeSet<Permutation> = layer.iter().cloned().collect();
    for _ in 0..ell {
        let mut next = Vec::new();
        for p in &layer {
            for i in 0..n {
                for j in i + 1..n {
                    let q = p.compose(&Permutation::transposition(n, i, j));
                    if q.cayley_length() == p.cayley_length() + 1 && all.insert(q.clone()) {
                        next.push(q);
                    }
                }
            }
        }
        layer = next;
    }
    all.into_iter().collect()
}

/// All `k`-subsets of `0..n`, lexicographic.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Convenience for tests and callers: integer-coefficient element from `(perm, coeff)` pairs.
pub fn element_from(n: usize, terms: &[(Permutation, i64)]) -> AlgebraElement {
    let mut x = AlgebraElement::zero(n);
    for (p, c) in terms {
        x.add_term(p.clone(), rat(*c));
    }
    x
}

/// Largest absolute coefficient, handy for diagnostics.
pub fn max_abs_coeff(x: &AlgebraElement) -> BigRational {
    x.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
}
