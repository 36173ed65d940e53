//! Littlewood-Richardson coefficients and skew standard tableaux counts.
//!
//! LR tableaux are filled in reading order (rows top to bottom, each row
//! right to left) so the lattice-word condition can prune every prefix.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num::{BigInt, BigRational, BigUint, One, Zero};

use crate::error::{QmcError, Result};
use crate::partitions::{factorial, hook_lengths, partitions_of, Partition, SkewShape};

/// Filling of a skew shape; only produced for tests and inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LRTableau {
    pub shape: SkewShape,
    /// `(row, col, entry)` in reading order, entries 1-based.
    pub entries: Vec<(usize, usize, usize)>,
}

struct Filler<'a> {
    outer: &'a Partition,
    inner: &'a Partition,
    content: &'a [usize],
    cells: Vec<(usize, usize)>,
    grid: Vec<Vec<usize>>,
    counts: Vec<usize>,
}

impl<'a> Filler<'a> {
    fn new(outer: &'a Partition, inner: &'a Partition, content: &'a [usize]) -> Self {
        let mut cells = Vec::new();
        for i in 0..outer.height() {
            for j in (inner.part(i)..outer.part(i)).rev() {
                cells.push((i, j));
            }
        }
        let grid = (0..outer.height()).map(|i| vec![0; outer.part(i)]).collect();
        Filler { outer, inner, content, cells, grid, counts: vec![0; content.len() + 1] }
    }

    fn candidates(&self, i: usize, j: usize) -> std::ops::RangeInclusive<usize> {
        let mut hi = self.content.len();
        if j + 1 < self.outer.part(i) {
            hi = hi.min(self.grid[i][j + 1]);
        }
        let mut lo = 1;
        if i > 0 && j >= self.inner.part(i - 1) {
            lo = lo.max(self.grid[i - 1][j] + 1);
        }
        lo..=hi
    }

    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&Vec<Vec<usize>>, &[(usize, usize)])) {
        if pos == self.cells.len() {
            visit(&self.grid, &self.cells);
            return;
        }
        let (i, j) = self.cells[pos];
        for v in self.candidates(i, j) {
            if self.counts[v] >= self.content[v - 1] {
                continue;
            }
            if v > 1 && self.counts[v] + 1 > self.counts[v - 1] {
                continue;
            }
            self.counts[v] += 1;
            self.grid[i][j] = v;
            self.run(pos + 1, visit);
            self.grid[i][j] = 0;
            self.counts[v] -= 1;
        }
    }
}

fn check_weights(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<()> {
    if lambda.weight() != mu.weight() + nu.weight() {
        return Err(QmcError::WeightMismatch(format!("|{lambda}| != |{mu}| + |{nu}|")));
    }
    Ok(())
}

/// Number of LR tableaux of shape `lambda/mu` and content `nu`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<BigUint> {
    check_weights(lambda, mu, nu)?;
    if !lambda.contains(mu) || !lambda.contains(nu) {
        return Ok(BigUint::zero());
    }
    let mut f = Filler::new(lambda, mu, nu.parts());
    let mut count = 0u64;
    f.run(0, &mut |_, _| count += 1);
    Ok(BigUint::from(count))
}

/// Every LR tableau of shape `lambda/mu` with content `nu`.
pub fn lr_tableaux(lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<Vec<LRTableau>> {
    check_weights(lambda, mu, nu)?;
    if !lambda.contains(mu) {
        return Ok(Vec::new());
    }
    let shape = SkewShape::new(lambda.clone(), mu.clone())?;
    let mut f = Filler::new(lambda, mu, nu.parts());
    let mut out = Vec::new();
    f.run(0, &mut |grid, cells| {
        let entries = cells.iter().map(|&(i, j)| (i, j, grid[i][j])).collect();
        out.push(LRTableau { shape: shape.clone(), entries });
    });
    Ok(out)
}

/// All `(mu ⊢ n-k, nu ⊢ k, c)` with `c = c^lambda_{mu nu} > 0`.
pub fn lr_expand(lambda: &Partition, k: usize) -> Result<Vec<(Partition, Partition, BigUint)>> {
    let n = lambda.weight();
    if k == 0 || k >= n {
        return Err(QmcError::InvalidArgument(format!("lr_expand needs 1 <= k < n, got k={k}, n={n}")));
    }
    let h = lambda.height();
    let mut out = Vec::new();
    for mu in partitions_of(n - k, h) {
        if !lambda.contains(&mu) {
            continue;
        }
        for nu in partitions_of(k, h) {
            let c = lr_coefficient(lambda, &mu, &nu)?;
            if !c.is_zero() {
                out.push((mu.clone(), nu, c));
            }
        }
    }
    Ok(out)
}

/// Multiplicity of `V_{mus[0]} ⊗ ... ⊗ V_{mus[m-1]}` in the restriction of
/// `V_lambda` to the Young subgroup, by folding pairwise coefficients.
pub fn iterated_lr(lambda: &Partition, mus: &[Partition]) -> Result<BigUint> {
    let total: usize = mus.iter().map(Partition::weight).sum();
    if total != lambda.weight() {
        return Err(QmcError::WeightMismatch(format!("parts do not sum to |{lambda}|")));
    }
    match mus {
        [] => Ok(if lambda.is_empty() { BigUint::one() } else { BigUint::zero() }),
        [only] => Ok(if only == lambda { BigUint::one() } else { BigUint::zero() }),
        [init @ .., last] => {
            let rest = lambda.weight() - last.weight();
            let mut acc = BigUint::zero();
            for kappa in partitions_of(rest, lambda.height()) {
                let c = lr_coefficient(lambda, &kappa, last)?;
                if !c.is_zero() {
                    acc += c * iterated_lr(&kappa, init)?;
                }
            }
            Ok(acc)
        }
    }
}

/// Diagram as a sorted cell set.
pub type Diagram = BTreeSet<(usize, usize)>;

/// Excited diagrams of `inner` inside `outer`, in BFS discovery order.
pub fn excited_diagrams(shape: &SkewShape) -> Vec<Diagram> {
    let outer = shape.outer();
    let start: Diagram = shape.inner().cells().collect();
    let in_outer = |(i, j): (usize, usize)| j < outer.part(i);
    let mut seen: BTreeSet<Diagram> = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(dg) = queue.pop_front() {
        for &(i, j) in &dg {
            let diag = (i + 1, j + 1);
            if !in_outer(diag) || dg.contains(&diag) || dg.contains(&(i + 1, j)) || dg.contains(&(i, j + 1)) {
                continue;
            }
            let mut next = dg.clone();
            next.remove(&(i, j));
            next.insert(diag);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        order.push(dg);
    }
    order
}

/// `f^{lambda/mu}` via the excited-diagram hook formula.
pub fn skew_standard_count(shape: &SkewShape) -> BigUint {
    let hooks = hook_lengths(shape.outer());
    let mut sum = BigRational::zero();
    for dg in excited_diagrams(shape) {
        let mut prod = BigInt::one();
        for (i, j) in shape.outer().cells() {
            if !dg.contains(&(i, j)) {
                prod *= BigInt::from(hooks[i][j]);
            }
        }
        sum += BigRational::new(BigInt::one(), prod);
    }
    let total = sum * BigRational::from_integer(BigInt::from(factorial(shape.size())));
    debug_assert!(total.is_integer());
    total.to_integer().to_biguint().expect("nonnegative count")
}

/// `f^{lambda/mu}` by peeling outer corners; independent of the hook formula.
pub fn skew_standard_count_direct(shape: &SkewShape) -> BigUint {
    fn rec(outer: &Partition, inner: &Partition, memo: &mut HashMap<Partition, BigUint>) -> BigUint {
        if outer == inner {
            return BigUint::one();
        }
        if let Some(v) = memo.get(outer) {
            return v.clone();
        }
        let mut acc = BigUint::zero();
        for r in outer.corners() {
            if outer.part(r) > inner.part(r) {
                let mut parts = outer.parts().to_vec();
                parts[r] -= 1;
                let smaller = Partition::new(parts).expect("removing a corner keeps a partition");
                acc += rec(&smaller, inner, memo);
            }
        }
        memo.insert(outer.clone(), acc.clone());
        acc
    }
    rec(shape.outer(), shape.inner(), &mut HashMap::new())
}
