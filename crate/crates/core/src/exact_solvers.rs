//! Closed-form maxima and per-irrep spectra for cliques, stars and complete
//! bipartite graphs `K_{n-k,k}`.
//!
//! Each of these Hamiltonians is a signed sum of clique Hamiltonians, so its
//! blocks are differences of `eta` values.

use std::collections::BTreeSet;

use num::{BigRational, Signed, ToPrimitive};
use serde::Serialize;

use crate::characters::eta;
use crate::error::{QmcError, Result};
use crate::lr::lr_expand;
use crate::partitions::{balanced, is_subpartition, partitions_of, uplus, Partition};

/// Default bound on `n` for bipartite enumeration.
pub const ENUMERATE_CAP: usize = 18;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrepSpectrum {
    pub lambda: Partition,
    pub eigenvalues: BTreeSet<i64>,
}

fn check_height(lambda: &Partition, d: usize) -> Result<()> {
    if lambda.height() > d {
        return Err(QmcError::InvalidHeight(format!("{lambda} has more than {d} rows")));
    }
    Ok(())
}

/// `eta_lambda`, the scalar of `H_{K_n}` on the `lambda` block.
pub fn clique_block_eigenvalue(lambda: &Partition, d: usize) -> Result<i64> {
    eta(lambda, d)
}

/// Maximum of `eta` over `ht <= d`, with the balanced maximiser.
pub fn clique_max(n: usize, d: usize) -> Result<(i64, Partition)> {
    if n == 0 || d == 0 {
        return Err(QmcError::InvalidArgument("clique_max needs n, d >= 1".into()));
    }
    let (ni, di) = (n as i64, d as i64);
    let r = ni % di;
    let value = ni * ni + (di - 1) * ni + r * r - r * (di + 1) - (ni * ni - r * r) / di;
    let argmax = balanced(n, d.min(n))?;
    let check = eta(&argmax, d)?;
    if check != value {
        return Err(QmcError::Consistency(format!("clique formula {value} vs eta({argmax}) = {check}")));
    }
    Ok((value, argmax))
}

/// `2 (n - lambda_j + j - 1)` for each row `j` (1-based) ending a run of equal rows.
pub fn star_block_spectrum(lambda: &Partition, n: usize, d: usize) -> Result<IrrepSpectrum> {
    check_height(lambda, d)?;
    if lambda.weight() != n || n < 2 {
        return Err(QmcError::WeightMismatch(format!("{lambda} is not a partition of n={n} >= 2")));
    }
    let parts = lambda.parts();
    let mut eigenvalues = BTreeSet::new();
    for (j, &p) in parts.iter().enumerate() {
        let corner = j + 1 == parts.len() || parts[j + 1] < p;
        if corner {
            eigenvalues.insert(2 * (n as i64 - p as i64 + j as i64));
        }
    }
    Ok(IrrepSpectrum { lambda: lambda.clone(), eigenvalues })
}

pub fn star_max(n: usize, d: usize) -> Result<i64> {
    if n < 2 || d == 0 {
        return Err(QmcError::InvalidArgument(format!("star_max needs n >= 2, d >= 1 (n={n}, d={d})")));
    }
    let (n, d) = (n as i64, d as i64);
    Ok(match d {
        1 => 0,
        d if d > n => 4 * (n - 1),
        d => 2 * (n + d - 2),
    })
}

/// True iff the star blocks of two partitions with at most three rows have equal spectra.
pub fn star_separates_3rows(lambda: &Partition, mu: &Partition, n: usize) -> Result<bool> {
    Ok(star_block_spectrum(lambda, n, 3)?.eigenvalues == star_block_spectrum(mu, n, 3)?.eigenvalues)
}

/// Parameters governing `K_{n-k,k}`, after normalising to `2k <= n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// The caller's `k` was replaced by `n - k`.
    pub swapped: bool,
    pub q: usize,
    pub r: usize,
    pub e0: usize,
    pub e1: usize,
    #[serde(serialize_with = "ser_rational")]
    pub e_star_real: BigRational,
    pub frak_e: Vec<usize>,
    /// Members of `frak_e` closest to `e_star_real` (two on a tie).
    pub e_star: Vec<usize>,
    pub balancing: bool,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn normalise(n: usize, k: usize) -> Result<(usize, bool)> {
    if k == 0 || k >= n {
        return Err(QmcError::InvalidArgument(format!("K_(n-k,k) needs 1 <= k < n (n={n}, k={k})")));
    }
    Ok(if 2 * k > n { (n - k, true) } else { (k, false) })
}

fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

pub fn bipartite_params(n: usize, k: usize, d: usize) -> Result<BipartiteParams> {
    let (k, swapped) = normalise(n, k)?;
    if d < 2 || d >= n {
        return Err(QmcError::InvalidArgument(format!("bipartite_params needs 2 <= d < n (n={n}, d={d})")));
    }
    let m = n - k;
    let e0 = (1..d).filter(|&e| m / e >= div_ceil(k, d - e)).max().unwrap_or(1);
    let e1 = (1..d).find(|&e| k / (d - e) >= div_ceil(m, e)).unwrap_or(d - 1);
    let q = n / d;
    let r = n - q * d;
    let e_star_real = BigRational::new(d.into(), 2.into())
        + BigRational::new((n as i64 - 2 * k as i64).into(), (2 * (q + 1) as i64).into());
    let lam_bal = balanced(n, d)?;
    let frak_e: Vec<usize> =
        (1..d).filter(|&e| e <= m).filter(|&e| is_subpartition(&balanced(m, e).expect("e <= m"), &lam_bal)).collect();
    let e_star = closest(&frak_e, &e_star_real);
    let balancing = (0..=r).any(|s| (0..=d - r).any(|t| s * (q + 1) + t * q == k));
    Ok(BipartiteParams { n, k, d, swapped, q, r, e0, e1, e_star_real, frak_e, e_star, balancing })
}

fn closest(set: &[usize], target: &BigRational) -> Vec<usize> {
    let dist = |e: usize| (BigRational::from_integer(e.into()) - target).abs();
    let Some(best) = set.iter().map(|&e| dist(e)).min() else {
        return Vec::new();
    };
    set.iter().copied().filter(|&e| dist(e) == best).collect()
}

/// `(lambda, mu, nu)` with `mu ⊢ n-k`, `nu ⊢ k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Triple {
    pub lambda: Partition,
    pub mu: Partition,
    pub nu: Partition,
}

/// `eta_lambda - eta_mu - eta_nu`; heights are not checked against `d`.
pub fn delta(t: &Triple) -> Result<i64> {
    let h = t.lambda.height().max(t.mu.height()).max(t.nu.height()).max(1);
    Ok(eta(&t.lambda, h)? - eta(&t.mu, h)? - eta(&t.nu, h)?)
}

/// Spectrum of `H_{K_{n-k,k}}` on the `lambda` block.
pub fn bipartite_block_spectrum(lambda: &Partition, n: usize, k: usize, d: usize) -> Result<IrrepSpectrum> {
    check_height(lambda, d)?;
    if lambda.weight() != n {
        return Err(QmcError::WeightMismatch(format!("{lambda} is not a partition of {n}")));
    }
    let mut eigenvalues = BTreeSet::new();
    for (mu, nu, _) in lr_expand(lambda, k)? {
        eigenvalues.insert(delta(&Triple { lambda: lambda.clone(), mu, nu })?);
    }
    Ok(IrrepSpectrum { lambda: lambda.clone(), eigenvalues })
}

/// Balanced `mu` of height `e`, balanced `nu` of height `d - e`, merged; `None` if a height is impossible.
pub fn merged_balanced(n: usize, k: usize, d: usize, e: usize) -> Option<Triple> {
    if e == 0 || e >= d || e > n - k || d - e > k {
        return None;
    }
    let mu = balanced(n - k, e).ok()?;
    let nu = balanced(k, d - e).ok()?;
    Some(Triple { lambda: uplus(&mu, &nu), mu, nu })
}

/// Heights `e` maximising `delta` over merged balanced triples.
pub fn e_max(n: usize, k: usize, d: usize) -> Result<Vec<usize>> {
    let (k, _) = normalise(n, k)?;
    let mut best: Option<i64> = None;
    let mut arg = Vec::new();
    for e in 1..d {
        if let Some(t) = merged_balanced(n, k, d, e) {
            let v = delta(&t)?;
            match best {
                Some(b) if v < b => {}
                Some(b) if v == b => arg.push(e),
                _ => {
                    best = Some(v);
                    arg = vec![e];
                }
            }
        }
    }
    Ok(arg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BipartiteMode {
    Theorem,
    Enumerate,
    /// Enumeration restricted to `lambda = mu ⊎ nu`.
    Merged,
}

impl std::str::FromStr for BipartiteMode {
    type Err = QmcError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(BipartiteMode::Theorem),
            "enumerate" => Ok(BipartiteMode::Enumerate),
            "merged" => Ok(BipartiteMode::Merged),
            _ => Err(QmcError::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BipartiteMax {
    pub value: i64,
    pub witness: Triple,
    /// `None` when `d >= n` or `d == 1`.
    pub params: Option<BipartiteParams>,
}

pub fn bipartite_max(n: usize, k: usize, d: usize, mode: BipartiteMode) -> Result<BipartiteMax> {
    bipartite_max_capped(n, k, d, mode, ENUMERATE_CAP)
}

pub fn bipartite_max_capped(n: usize, k: usize, d: usize, mode: BipartiteMode, cap: usize) -> Result<BipartiteMax> {
    let (k, _) = normalise(n, k)?;
    if d == 0 {
        return Err(QmcError::InvalidArgument("d must be positive".into()));
    }
    if matches!(mode, BipartiteMode::Enumerate | BipartiteMode::Merged) {
        if n > cap {
            return Err(QmcError::CapExceeded(format!("enumeration for n={n} exceeds cap {cap}")));
        }
        return enumerate(n, k, d, mode == BipartiteMode::Merged);
    }
    if d == 1 {
        let witness = Triple { lambda: Partition::row(n), mu: Partition::row(n - k), nu: Partition::row(k) };
        return Ok(BipartiteMax { value: 0, witness, params: None });
    }
    if d >= n {
        let witness = Triple { lambda: Partition::column(n), mu: Partition::column(n - k), nu: Partition::column(k) };
        let value = delta(&witness)?;
        return Ok(BipartiteMax { value, witness, params: None });
    }
    if k > 4 && d > 3 {
        return Err(QmcError::UnprovedRegime(format!(
            "closed form covers k <= 4 or d <= 3 (got k={k}, d={d}); use enumerate mode"
        )));
    }
    let params = bipartite_params(n, k, d)?;
    let mut heights = vec![params.e0];
    heights.extend(&params.e_star);
    heights.push(params.e1);
    let mut best: Option<(i64, Triple)> = None;
    for &e in &heights {
        if let Some(t) = merged_balanced(n, k, d, e) {
            let v = delta(&t)?;
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, t));
            }
        }
    }
    let (value, witness) = best.ok_or_else(|| QmcError::Consistency(format!("no valid height for ({n},{k},{d})")))?;
    if !params.balancing {
        let cor = unbalancing_value(n, k, d);
        if cor != value {
            return Err(QmcError::Consistency(format!(
                "unbalancing formula gives {cor}, candidate heights give {value} for ({n},{k},{d})"
            )));
        }
    }
    Ok(BipartiteMax { value, witness, params: Some(params) })
}

/// Two-case maximum for unbalancing triples, with `r = dk mod n`.
pub fn unbalancing_value(n: usize, k: usize, d: usize) -> i64 {
    let (n, k, d) = (n as i64, k as i64, d as i64);
    let e = (d * (n - k)) / n;
    let r = (d * k) % n;
    if r >= k {
        2 * k * (e + n - k)
    } else {
        2 * (n - k) * (d - e - 1 + k)
    }
}

fn enumerate(n: usize, k: usize, d: usize, merged_only: bool) -> Result<BipartiteMax> {
    let mut best: Option<(i64, Triple)> = None;
    let mut consider = |t: Triple| -> Result<()> {
        let v = delta(&t)?;
        let better = match &best {
            None => true,
            Some((b, w)) => v > *b || (v == *b && t < *w),
        };
        if better {
            best = Some((v, t));
        }
        Ok(())
    };
    if merged_only {
        for mu in partitions_of(n - k, d) {
            for nu in partitions_of(k, d - mu.height().min(d)) {
                if mu.height() + nu.height() <= d {
                    consider(Triple { lambda: uplus(&mu, &nu), mu: mu.clone(), nu })?;
                }
            }
        }
    } else {
        for lambda in partitions_of(n, d) {
            for (mu, nu, _) in lr_expand(&lambda, k)? {
                consider(Triple { lambda: lambda.clone(), mu, nu })?;
            }
        }
    }
    let (value, witness) = best.ok_or_else(|| QmcError::Consistency("empty enumeration".into()))?;
    Ok(BipartiteMax { value, witness, params: None })
}

/// `e_star_real` as a float, for display.
pub fn e_star_f64(p: &BipartiteParams) -> f64 {
    p.e_star_real.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::content_sum;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn set(v: &[i64]) -> BTreeSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn clique_formula_matches_exhaustive_eta() {
        for n in 1..=14 {
            for d in 1..=6 {
                let best = partitions_of(n, d).iter().map(|l| eta(l, d).unwrap()).max().unwrap();
                assert_eq!(clique_max(n, d).unwrap().0, best, "n={n} d={d}");
            }
        }
        assert_eq!(clique_max(6, 4).unwrap(), (40, p(&[2, 2, 1, 1])));
        assert_eq!(clique_max(5, 7).unwrap().0, 40);
    }

    #[test]
    fn star_fixtures() {
        assert_eq!(star_block_spectrum(&p(&[4, 2, 2, 2, 2]), 12, 5).unwrap().eigenvalues, set(&[16, 28]));
        assert_eq!(star_block_spectrum(&p(&[5, 5, 1, 1]), 12, 4).unwrap().eigenvalues, set(&[16, 28]));
        assert_eq!(star_block_spectrum(&p(&[3, 3, 3]), 9, 3).unwrap().eigenvalues, set(&[16]));
        assert_eq!(star_block_spectrum(&p(&[6, 2, 1]), 9, 3).unwrap().eigenvalues, set(&[6, 16, 20]));
        assert_eq!(star_block_spectrum(&p(&[7]), 7, 2).unwrap().eigenvalues, set(&[0]));
        // the printed n = 21 values are half of these
        let s = star_block_spectrum(&p(&[9, 6, 5, 1]), 21, 4).unwrap().eigenvalues;
        assert_eq!(s, set(&[24, 32, 36, 46]));
        assert!(star_block_spectrum(&p(&[2, 1, 1]), 4, 2).is_err());
    }

    #[test]
    fn star_max_cases() {
        assert_eq!(star_max(2, 2).unwrap(), 4);
        for n in 3..10 {
            assert_eq!(star_max(n, 2).unwrap(), 2 * n as i64);
            assert_eq!(star_max(n, 3).unwrap(), 2 * (n as i64 + 1));
            for d in 2..=n {
                let best = partitions_of(n, d)
                    .iter()
                    .flat_map(|l| star_block_spectrum(l, n, d).unwrap().eigenvalues)
                    .max()
                    .unwrap();
                assert_eq!(star_max(n, d).unwrap(), best);
            }
        }
    }

    #[test]
    fn three_row_star_separation() {
        for n in 2..=15 {
            let ps = partitions_of(n, 3);
            for a in &ps {
                for b in &ps {
                    assert_eq!(star_separates_3rows(a, b, n).unwrap(), a == b, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn params_fixtures() {
        let q = bipartite_params(6, 3, 4).unwrap();
        assert_eq!((q.e0, q.e1, q.frak_e.clone()), (1, 3, vec![2]));
        assert_eq!(q.e_star_real, BigRational::from_integer(2.into()));
        let q = bipartite_params(9, 2, 8).unwrap();
        assert_eq!((q.e0, q.e1, q.frak_e.clone()), (6, 7, vec![6, 7]));
        assert_eq!(q.e_star_real, BigRational::new(21.into(), 4.into()));
        let q = bipartite_params(8, 4, 3).unwrap();
        assert!(q.frak_e.is_empty() && !q.balancing);
        let q = bipartite_params(6, 4, 4).unwrap();
        assert!(q.swapped && q.k == 2);
    }

    #[test]
    fn balancing_iff_frak_nonempty() {
        for n in 3..=24 {
            for k in 1..=n / 2 {
                for d in 2..n {
                    let q = bipartite_params(n, k, d).unwrap();
                    assert_eq!(q.balancing, !q.frak_e.is_empty(), "({n},{k},{d})");
                    // interval inside [e0, e1], containing the open interior
                    if let (Some(&lo), Some(&hi)) = (q.frak_e.first(), q.frak_e.last()) {
                        assert_eq!(q.frak_e, (lo..=hi).collect::<Vec<_>>());
                        assert!(q.e0 <= lo && hi <= q.e1);
                        assert!(q.e0 + 1 >= lo && hi + 1 >= q.e1);
                    }
                }
            }
        }
    }

    #[test]
    fn small_d_closed_forms() {
        for n in 4..=14 {
            for k in 1..=n / 2 {
                let (n64, k64) = (n as i64, k as i64);
                assert_eq!(bipartite_max(n, k, 2, BipartiteMode::Theorem).unwrap().value, 2 * k64 * (n64 - k64 + 1));
                let want3 = if n < 3 * k { 2 * (k64 + 1) * (n64 - k64) } else { 2 * k64 * (n64 - k64 + 2) };
                assert_eq!(bipartite_max(n, k, 3, BipartiteMode::Theorem).unwrap().value, want3);
            }
        }
    }

    #[test]
    fn theorem_agrees_with_enumeration_in_proved_regime() {
        for n in 3..=11 {
            for k in 1..=(n / 2).min(4) {
                for d in 2..=n + 1 {
                    let t = bipartite_max(n, k, d, BipartiteMode::Theorem).unwrap();
                    let e = bipartite_max(n, k, d, BipartiteMode::Enumerate).unwrap();
                    assert_eq!(t.value, e.value, "({n},{k},{d})");
                }
            }
        }
        assert!(matches!(bipartite_max(10, 5, 5, BipartiteMode::Theorem), Err(QmcError::UnprovedRegime(_))));
    }

    #[test]
    fn k33_d4_fixture() {
        let want = Triple { lambda: p(&[2, 2, 1, 1]), mu: p(&[2, 1]), nu: p(&[2, 1]) };
        for mode in [BipartiteMode::Theorem, BipartiteMode::Enumerate] {
            let r = bipartite_max(6, 3, 4, mode).unwrap();
            assert_eq!((r.value, r.witness), (28, want.clone()));
        }
    }

    #[test]
    fn merged_restriction_is_not_optimal_at_10_5_5() {
        let e = bipartite_max(10, 5, 5, BipartiteMode::Enumerate).unwrap();
        assert_eq!(e.value, 72);
        assert_eq!(e.witness, Triple { lambda: p(&[2, 2, 2, 2, 2]), mu: p(&[2, 2, 1]), nu: p(&[2, 2, 1]) });
        assert_eq!(bipartite_max(10, 5, 5, BipartiteMode::Merged).unwrap().value, 70);
    }

    #[test]
    fn content_sum_identity() {
        for n in 2..=9 {
            for k in 1..n {
                for lambda in partitions_of(n, n) {
                    for (mu, nu, _) in lr_expand(&lambda, k).unwrap() {
                        let t = Triple { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone() };
                        let skew = crate::partitions::SkewShape::new(lambda.clone(), mu.clone()).unwrap();
                        let want = 2 * (k * (n - k)) as i64 - 2 * crate::partitions::skew_content_sum(&skew)
                            + 2 * content_sum(&nu);
                        assert_eq!(delta(&t).unwrap(), want);
                    }
                }
            }
        }
    }
}
