//! Fixtures shared by the bipartite tests and the acceptance harness.
#![allow(dead_code)]

use num::BigRational;
use qmc_core::exact_solvers::{delta, Triple};
use qmc_core::partitions::{partitions_of, uplus, Partition};

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// `(n, k, d, e0, e1, e*, e_max, frak E)`.
pub type Row = (usize, usize, usize, usize, usize, (i64, i64), &'static [usize], &'static [usize]);

pub const TABLE: [Row; 15] = [
    (4, 2, 3, 1, 2, (3, 2), &[1, 2], &[1, 2]),
    (5, 2, 3, 1, 2, (7, 4), &[2], &[2]),
    (5, 2, 4, 2, 3, (9, 4), &[2], &[2, 3]),
    (8, 2, 3, 2, 2, (13, 6), &[2], &[2]),
    (9, 2, 8, 6, 7, (21, 4), &[6], &[6, 7]),
    (6, 3, 4, 1, 3, (2, 1), &[2], &[2]),
    (7, 3, 4, 2, 3, (9, 4), &[2], &[2]),
    (11, 3, 5, 3, 4, (10, 3), &[3], &[4]),
    (8, 4, 2, 1, 1, (1, 1), &[1], &[1]),
    (8, 4, 3, 1, 2, (3, 2), &[1, 2], &[]),
    (8, 4, 6, 2, 4, (3, 1), &[3], &[2, 3, 4]),
    (9, 4, 3, 1, 2, (13, 8), &[2], &[]),
    (9, 4, 4, 2, 3, (13, 6), &[2], &[2]),
    (9, 4, 5, 2, 3, (11, 4), &[3], &[3]),
    (11, 4, 4, 2, 3, (5, 2), &[2], &[]),
];

/// Concatenations `(mu, nu)`: last row of `mu` at least the first row of `nu`.
pub fn concatenations(n: usize, k: usize) -> Vec<(Partition, Partition)> {
    let mut out = Vec::new();
    for mu in partitions_of(n - k, n) {
        for nu in partitions_of(k, n) {
            if mu.parts().last() >= nu.parts().first() {
                out.push((mu.clone(), nu));
            }
        }
    }
    out
}

/// `delta` at `lambda = mu ⊎ nu`.
pub fn merged(mu: &Partition, nu: &Partition) -> i64 {
    delta(&Triple { lambda: uplus(mu, nu), mu: mu.clone(), nu: nu.clone() }).unwrap()
}
