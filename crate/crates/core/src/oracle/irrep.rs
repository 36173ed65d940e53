//! Irreducible representations of `S_n` in Young's orthogonal form.
//!
//! Basis: standard Young tableaux of shape `lambda`. The adjacent
//! transposition `s_i = (i, i+1)` acts on `T` by `1/r` on the diagonal and
//! `sqrt(1 - 1/r^2)` towards `s_i T`, where `r` is the axial distance
//! `content(i+1) - content(i)` in `T`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::ToPrimitive;

use crate::error::{QmcError, Result};
use crate::graph::GraphSpec;
use crate::linalg;
use crate::partitions::{dim_sn, partitions_of, Partition};
use crate::swap_algebra::{AlgebraElement, Permutation};

/// Default bound on `dim_sn(lambda)`.
pub const MATRIX_CAP: usize = 5000;

#[derive(Clone, Debug)]
pub struct Irrep {
    pub lambda: Partition,
    pub n: usize,
    pub dim: usize,
    /// `(row, col)` of each letter, per tableau.
    tableaux: Vec<Vec<(usize, usize)>>,
    /// `adjacent[i][t] = (diag, partner, off)`; `partner == t` when `off == 0`.
    adjacent: Vec<Vec<(f64, usize, f64)>>,
}

fn standard_tableaux(lambda: &Partition) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        lambda: &[usize],
        filled: &mut Vec<usize>,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
        n: usize,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for r in 0..lambda.len() {
            let c = filled[r];
            if c < lambda[r] && (r == 0 || filled[r - 1] > c) {
                filled[r] += 1;
                cur.push((r, c));
                rec(lambda, filled, cur, out, n);
                cur.pop();
                filled[r] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(lambda.parts(), &mut vec![0; lambda.height()], &mut Vec::new(), &mut out, lambda.weight());
    out
}

pub fn irrep(lambda: &Partition) -> Result<Irrep> {
    irrep_capped(lambda, MATRIX_CAP)
}

pub fn irrep_capped(lambda: &Partition, cap: usize) -> Result<Irrep> {
    let dim = dim_sn(lambda);
    if dim > cap.into() {
        return Err(QmcError::CapExceeded(format!("dim of {lambda} is {dim}, above cap {cap}")));
    }
    let n = lambda.weight();
    let tableaux = standard_tableaux(lambda);
    let index: HashMap<Vec<(usize, usize)>, usize> = tableaux.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
    let mut adjacent = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let mut col = Vec::with_capacity(tableaux.len());
        for (k, t) in tableaux.iter().enumerate() {
            let (ra, ca) = t[i];
            let (rb, cb) = t[i + 1];
            if ra == rb {
                col.push((1.0, k, 0.0));
            } else if ca == cb {
                col.push((-1.0, k, 0.0));
            } else {
                let r = (cb as f64 - rb as f64) - (ca as f64 - ra as f64);
                let mut swapped = t.clone();
                swapped.swap(i, i + 1);
                let partner = index[&swapped];
                col.push((1.0 / r, partner, (1.0 - 1.0 / (r * r)).sqrt()));
            }
        }
        adjacent.push(col);
    }
    Ok(Irrep { lambda: lambda.clone(), n, dim: tableaux.len(), tableaux, adjacent })
}

impl Irrep {
    /// Standard tableaux as rows of letters (1-based), for display.
    pub fn tableau_rows(&self, k: usize) -> Vec<Vec<usize>> {
        let mut rows: Vec<Vec<usize>> = self.lambda.parts().iter().map(|&p| vec![0; p]).collect();
        for (letter, &(r, c)) in self.tableaux[k].iter().enumerate() {
            rows[r][c] = letter + 1;
        }
        rows
    }

    /// `M <- M * rho(s_i)`.
    fn right_mul_adjacent(&self, m: &mut DMatrix<f64>, i: usize) {
        let s = &self.adjacent[i];
        let old = m.clone();
        for (t, &(diag, partner, off)) in s.iter().enumerate() {
            // column t of rho(s_i) has diag at t and off at partner
            let mut col = old.column(t) * diag;
            if off != 0.0 {
                col += old.column(partner) * off;
            }
            m.set_column(t, &col);
        }
    }

    pub fn adjacent_matrix(&self, i: usize) -> DMatrix<f64> {
        let mut m = DMatrix::identity(self.dim, self.dim);
        self.right_mul_adjacent(&mut m, i);
        m
    }

    pub fn perm_matrix(&self, p: &Permutation) -> Result<DMatrix<f64>> {
        if p.n() != self.n {
            return Err(QmcError::WeightMismatch(format!("permutation of {} letters on S_{}", p.n(), self.n)));
        }
        let mut m = DMatrix::identity(self.dim, self.dim);
        for i in p.reduced_word() {
            self.right_mul_adjacent(&mut m, i);
        }
        Ok(m)
    }

    pub fn element_matrix(&self, x: &AlgebraElement) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (p, c) in x.float_terms() {
            m += self.perm_matrix(&p)? * c;
        }
        Ok(m)
    }

    /// `rho_lambda(h_G)`.
    pub fn hamiltonian_matrix(&self, g: &GraphSpec) -> Result<DMatrix<f64>> {
        if g.n != self.n {
            return Err(QmcError::WeightMismatch(format!("graph on {} vertices, irrep of S_{}", g.n, self.n)));
        }
        let mut cache: HashMap<(usize, usize), DMatrix<f64>> = HashMap::new();
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(i, j, w) in &g.edges {
            let t = match cache.get(&(i, j)) {
                Some(t) => t.clone(),
                None => {
                    let t = self.perm_matrix(&Permutation::transposition(self.n, i, j))?;
                    cache.insert((i, j), t.clone());
                    t
                }
            };
            m += (DMatrix::identity(self.dim, self.dim) - t) * (2.0 * w);
        }
        Ok(m)
    }

    /// Ascending eigenvalues of `rho_lambda(h_G)`.
    pub fn hamiltonian_spectrum(&self, g: &GraphSpec) -> Result<Vec<f64>> {
        let m = self.hamiltonian_matrix(g)?;
        linalg::sym_eigvals(m.as_slice().to_vec(), self.dim)
    }
}

/// Irreps `lambda ⊢ n` with `ht(lambda) <= d`; together they evaluate the swap algebra faithfully.
pub fn faithful_irreps(n: usize, d: usize) -> Result<Vec<Irrep>> {
    partitions_of(n, d).iter().map(irrep).collect()
}

/// Concatenated entries of `rho_lambda(x)` over the given irreps.
pub fn evaluate(irreps: &[Irrep], x: &AlgebraElement) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for ir in irreps {
        out.extend_from_slice(ir.element_matrix(x)?.as_slice());
    }
    Ok(out)
}

/// Same as [`evaluate`] for a single permutation.
pub fn evaluate_perm(irreps: &[Irrep], p: &Permutation) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for ir in irreps {
        out.extend_from_slice(ir.perm_matrix(p)?.as_slice());
    }
    Ok(out)
}

/// Rank of the span of `family` inside the `d`-swap algebra on `n` letters.
pub fn span_rank(family: &[Permutation], n: usize, d: usize) -> Result<usize> {
    if family.is_empty() {
        return Ok(0);
    }
    let irreps = faithful_irreps(n, d)?;
    let rows: Vec<Vec<f64>> = family.iter().map(|p| evaluate_perm(&irreps, p)).collect::<Result<_>>()?;
    let cols = rows[0].len();
    // column-major m x cols with one family member per row
    let m = rows.len();
    let mut a = vec![0.0; m * cols];
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            a[c * m + r] = v;
        }
    }
    linalg::numerical_rank(a, m, cols, 1e-9)
}

/// Dimension of the `d`-swap algebra on `n` letters: `sum dim_sn(lambda)^2`, `ht <= d`.
pub fn algebra_dim(n: usize, d: usize) -> usize {
    partitions_of(n, d).iter().map(|l| dim_sn(l).to_usize().unwrap().pow(2)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{eta, gamma};
    use crate::swap_algebra::{all_permutations, antisymmetrizer, cycle_sum, hamiltonian_element};

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).amax() < tol
    }

    #[test]
    fn coxeter_relations() {
        for lambda in partitions_of(5, 5).into_iter().chain(partitions_of(6, 3)) {
            let ir = irrep(&lambda).unwrap();
            let id = DMatrix::identity(ir.dim, ir.dim);
            let s: Vec<_> = (0..ir.n - 1).map(|i| ir.adjacent_matrix(i)).collect();
            for i in 0..s.len() {
                assert!(close(&(&s[i] * &s[i]), &id, 1e-12));
                assert!(close(&s[i].transpose(), &s[i], 1e-12));
                for j in i + 1..s.len() {
                    if j == i + 1 {
                        let l = &s[i] * &s[j] * &s[i];
                        let r = &s[j] * &s[i] * &s[j];
                        assert!(close(&l, &r, 1e-12));
                    } else {
                        assert!(close(&(&s[i] * &s[j]), &(&s[j] * &s[i]), 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn homomorphism_and_character() {
        let lambda = Partition::new(vec![3, 2]).unwrap();
        let ir = irrep(&lambda).unwrap();
        let perms: Vec<Permutation> = all_permutations(5).into_iter().map(|p| Permutation::new(p).unwrap()).collect();
        for p in perms.iter().step_by(7) {
            for q in perms.iter().step_by(11) {
                let l = ir.perm_matrix(p).unwrap() * ir.perm_matrix(q).unwrap();
                let r = ir.perm_matrix(&p.compose(q)).unwrap();
                assert!(close(&l, &r, 1e-12));
            }
            let tr = ir.perm_matrix(p).unwrap().trace();
            let chi = crate::characters::chi(&lambda, &crate::characters::ConjugacyClass::new(p.cycle_type()))
                .unwrap()
                .to_f64()
                .unwrap();
            assert!((tr - chi).abs() < 1e-10);
        }
    }

    #[test]
    fn path_p3_on_21() {
        let ir = irrep(&Partition::new(vec![2, 1]).unwrap()).unwrap();
        let w = ir.hamiltonian_spectrum(&GraphSpec::path(3)).unwrap();
        assert!((w[0] - 2.0).abs() < 1e-12 && (w[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn clique_acts_by_eta_and_cycle_sums_by_gamma() {
        for n in 2..=7 {
            let h = hamiltonian_element(&GraphSpec::clique(n));
            let sums: Vec<_> = (1..n).map(|k| cycle_sum(k, n).unwrap()).collect();
            for lambda in partitions_of(n, n) {
                let ir = irrep(&lambda).unwrap();
                let id = DMatrix::<f64>::identity(ir.dim, ir.dim);
                let e = eta(&lambda, lambda.height()).unwrap() as f64;
                assert!(close(&ir.element_matrix(&h).unwrap(), &(&id * e), 1e-9), "{lambda}");
                if n <= 6 {
                    for (k, c) in sums.iter().enumerate() {
                        let g = gamma(k + 2, &lambda).unwrap().to_f64().unwrap();
                        assert!(close(&ir.element_matrix(c).unwrap(), &(&id * g), 1e-8));
                    }
                }
            }
        }
    }

    #[test]
    fn antisymmetrizer_vanishes_exactly_above_height() {
        for n in 3..=6 {
            for lambda in partitions_of(n, n) {
                let ir = irrep(&lambda).unwrap();
                let h = lambda.height();
                if h < n {
                    let a = antisymmetrizer(&(0..h + 1).collect::<Vec<_>>(), n).unwrap();
                    assert!(ir.element_matrix(&a).unwrap().amax() < 1e-10);
                }
                let a = antisymmetrizer(&(0..h).collect::<Vec<_>>(), n).unwrap();
                assert!(ir.element_matrix(&a).unwrap().amax() > 0.5);
            }
        }
    }

    #[test]
    fn good_permutations_span_the_algebra() {
        for (n, d) in [(4usize, 2usize), (5, 2), (5, 3)] {
            let fam: Vec<Permutation> = all_permutations(n)
                .into_iter()
                .map(|p| Permutation::new(p).unwrap())
                .filter(|p| crate::swap_algebra::is_good(p, d))
                .collect();
            assert_eq!(fam.len(), algebra_dim(n, d));
            assert_eq!(span_rank(&fam, n, d).unwrap(), fam.len());
        }
        assert!(irrep_capped(&Partition::new(vec![4, 3, 2]).unwrap(), 10).is_err());
    }
}
