//! Integer partitions, Young diagrams and the two dimension formulas.
//!
//! A [`Partition`] indexes both the irreducible representations of `S_n`
//! and the polynomial representations of `GL_d`. Everything here is exact:
//! dimensions are `BigUint`, contents are signed machine integers.

use std::fmt;
use std::str::FromStr;

use num::{BigUint, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{QmcError, Result};

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, trimming trailing zeros.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(QmcError::InvalidPartition(format!("{parts:?} has an interior zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(QmcError::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary parts into a partition (zeros dropped).
    pub fn from_multiset(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        Partition::from_multiset(vec![n])
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn height(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), zero past the height.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Parts zero-padded (or truncated) to length `len`.
    pub fn padded(&self, len: usize) -> Vec<usize> {
        (0..len).map(|i| self.part(i)).collect()
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.part(0);
        let parts = (0..w).map(|j| self.parts.iter().filter(|&&p| p > j).count()).collect();
        Partition { parts }
    }

    /// Cells `(row, col)`, 0-based, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }

    /// Diagram containment `mu ⊆ self`.
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.height() <= self.height() && mu.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    pub fn is_balanced(&self) -> bool {
        match (self.parts.first(), self.parts.last()) {
            (Some(a), Some(b)) => a - b <= 1,
            _ => true,
        }
    }

    /// Removable corners as 0-based row indices.
    pub fn corners(&self) -> Vec<usize> {
        (0..self.height()).filter(|&i| self.part(i) > self.part(i + 1)).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = QmcError;

    /// Parses `"4,1,1"`, `"(4,1,1)"` or `"[4,1,1]"`; empty string is `()`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
        if t.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| QmcError::InvalidPartition(format!("cannot parse {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = QmcError;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

/// Skew diagram `outer / inner`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(QmcError::InvalidPartition(format!("{inner} is not contained in {outer}")));
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn size(&self) -> usize {
        self.outer.weight() - self.inner.weight()
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.outer.height()).flat_map(move |i| (self.inner.part(i)..self.outer.part(i)).map(move |j| (i, j)))
    }
}

/// The unique partition of `m` with `e` rows whose parts differ by at most one.
pub fn balanced(m: usize, e: usize) -> Result<Partition> {
    if e == 0 || e > m {
        return Err(QmcError::InvalidHeight(format!("no balanced partition of {m} with {e} rows")));
    }
    let (q, r) = (m / e, m % e);
    let parts = (0..e).map(|i| if i < r { q + 1 } else { q }).collect();
    Ok(Partition { parts })
}

/// Multiset union of the rows.
pub fn uplus(mu: &Partition, nu: &Partition) -> Partition {
    let mut parts = mu.parts.clone();
    parts.extend_from_slice(&nu.parts);
    Partition::from_multiset(parts)
}

/// True iff the rows of `mu` form a sub-multiset of the rows of `lambda`.
pub fn is_subpartition(mu: &Partition, lambda: &Partition) -> bool {
    let mut rest = lambda.parts.clone();
    for p in &mu.parts {
        match rest.iter().position(|x| x == p) {
            Some(i) => {
                rest.remove(i);
            }
            None => return false,
        }
    }
    true
}

/// Rows left after removing the rows of `mu` from `lambda`, if `mu` is a subpartition.
pub fn complement_rows(mu: &Partition, lambda: &Partition) -> Option<Partition> {
    let mut rest = lambda.parts.clone();
    for p in &mu.parts {
        let i = rest.iter().position(|x| x == p)?;
        rest.remove(i);
    }
    Some(Partition { parts: rest })
}

/// Hook length of every cell, indexed `[row][col]`.
pub fn hook_lengths(lambda: &Partition) -> Vec<Vec<usize>> {
    let conj = lambda.conjugate();
    lambda.parts.iter().enumerate().map(|(i, &p)| (0..p).map(|j| (p - j) + (conj.part(j) - i) - 1).collect()).collect()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Number of standard Young tableaux, `n! / prod hooks`.
pub fn dim_sn(lambda: &Partition) -> BigUint {
    let hooks = hook_lengths(lambda).into_iter().flatten().fold(BigUint::one(), |acc, h| acc * BigUint::from(h));
    factorial(lambda.weight()) / hooks
}

/// Dimension of the `GL_d` irrep with highest weight `lambda`; zero when `ht > d`.
pub fn dim_gl(lambda: &Partition, d: usize) -> BigUint {
    if lambda.height() > d {
        return BigUint::zero();
    }
    let l = lambda.padded(d);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        for j in i + 1..d {
            num *= BigUint::from(l[i] - l[j] + j - i);
            den *= BigUint::from(j - i);
        }
    }
    num / den
}

/// Sum of `col - row` over the cells of a straight shape.
pub fn content_sum(lambda: &Partition) -> i64 {
    lambda.cells().map(|(i, j)| j as i64 - i as i64).sum()
}

/// Sum of `col - row` over the cells of a skew shape.
pub fn skew_content_sum(shape: &SkewShape) -> i64 {
    shape.cells().map(|(i, j)| j as i64 - i as i64).sum()
}

/// All partitions of `n` with at most `max_height` rows, reverse-lexicographic.
pub fn partitions_of(n: usize, max_height: usize) -> Vec<Partition> {
    fn rec(rest: usize, max_part: usize, rows: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if rows == 0 {
            return;
        }
        for p in (1..=max_part.min(rest)).rev() {
            // remaining rows must be able to hold what is left
            if p * rows < rest {
                break;
            }
            cur.push(p);
            rec(rest - p, p, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_height, &mut Vec::new(), &mut out);
    out
}
