//! Generalized Gell-Mann matrices and the swap decomposition
//! `Swap = (1/d) I + (1/2) sum_a lambda_a ⊗ lambda_a`, plus the antisymmetrizer relation check.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::ToPrimitive;

use crate::error::Result;
use crate::oracle::irrep::irrep;
use crate::partitions::Partition;
use crate::swap_algebra::subgroup_on;

pub type CMatrix = DMatrix<Complex64>;

/// The `d^2 - 1` generalized Gell-Mann matrices: for `b = 2..d` the symmetric and
/// antisymmetric pairs with `a < b`, then the `b`-th diagonal matrix.
pub fn gellmann_basis(d: usize) -> Vec<CMatrix> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(d * d - 1);
    for b in 1..d {
        for a in 0..b {
            let mut s = CMatrix::from_element(d, d, zero);
            s[(a, b)] = Complex64::new(1.0, 0.0);
            s[(b, a)] = Complex64::new(1.0, 0.0);
            out.push(s);
            let mut t = CMatrix::from_element(d, d, zero);
            t[(a, b)] = Complex64::new(0.0, -1.0);
            t[(b, a)] = Complex64::new(0.0, 1.0);
            out.push(t);
        }
        let bb = (b + 1) as f64;
        let scale = (2.0 / (bb * (bb - 1.0))).sqrt();
        let mut diag = CMatrix::from_element(d, d, zero);
        for k in 0..b {
            diag[(k, k)] = Complex64::new(scale, 0.0);
        }
        diag[(b, b)] = Complex64::new(-scale * b as f64, 0.0);
        out.push(diag);
    }
    out
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// `Swap` on `C^d ⊗ C^d`.
pub fn swap_matrix(d: usize) -> CMatrix {
    CMatrix::from_fn(d * d, d * d, |i, j| {
        let (a, b) = (j / d, j % d);
        if i == b * d + a {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Max-entry residual of the swap decomposition for the given basis.
pub fn swap_residual(d: usize, basis: &[CMatrix]) -> f64 {
    let mut rhs = CMatrix::identity(d * d, d * d) * Complex64::new(1.0 / d as f64, 0.0);
    for l in basis {
        rhs += kron(l, l) * Complex64::new(0.5, 0.0);
    }
    (swap_matrix(d) - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn verify_swap_gellmann(d: usize, tol: f64) -> bool {
    swap_residual(d, &gellmann_basis(d)) < tol
}

/// Largest deviation from `tr(l_a l_b) = 2 delta_ab`, tracelessness and self-adjointness.
pub fn basis_defect(basis: &[CMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for (a, la) in basis.iter().enumerate() {
        worst = worst.max(la.trace().norm());
        worst = worst.max((la - la.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max));
        for (b, lb) in basis.iter().enumerate() {
            let want = if a == b { 2.0 } else { 0.0 };
            worst = worst.max(((la * lb).trace() - Complex64::new(want, 0.0)).norm());
        }
    }
    worst
}

#[derive(Clone, Debug)]
pub struct DegreeRelationReport {
    pub d: usize,
    /// Max entry of `rho^{(d)}_{d+1}(A_{d+1})`; should vanish.
    pub tensor_residual: f64,
    /// Max entry of the same antisymmetrizer on the sign irrep of `S_{d+1}`; should be `(d+1)!`.
    pub sign_irrep_norm: f64,
}

impl DegreeRelationReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.tensor_residual < tol && self.sign_irrep_norm > 0.5
    }
}

/// Antisymmetrizer on all `d+1` letters, on `(C^d)^{⊗(d+1)}` and on the `(1^{d+1})` irrep.
pub fn verify_degree_relation(d: usize) -> Result<DegreeRelationReport> {
    let n = d + 1;
    let dim = d.pow(n as u32);
    let letters: Vec<usize> = (0..n).collect();
    let group = subgroup_on(&letters, n);
    let mut w = vec![1usize; n];
    for i in (0..n - 1).rev() {
        w[i] = w[i + 1] * d;
    }
    let mut residual: f64 = 0.0;
    let mut column = vec![0.0; dim];
    for idx in 0..dim {
        column.iter_mut().for_each(|v| *v = 0.0);
        let digits: Vec<usize> = w.iter().map(|&wi| (idx / wi) % d).collect();
        for (p, s) in &group {
            let mut out = 0;
            for (i, &a) in digits.iter().enumerate() {
                out += a * w[p.apply(i)];
            }
            column[out] += *s as f64;
        }
        residual = residual.max(column.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let sign = irrep(&Partition::column(n))?;
    let mut total = 0.0;
    for (p, s) in &group {
        total += *s as f64 * sign.perm_matrix(p)?[(0, 0)];
    }
    Ok(DegreeRelationReport { d, tensor_residual: residual, sign_irrep_norm: total.abs() })
}

/// `(d+1)!`, the expected sign-irrep value in [`DegreeRelationReport`].
pub fn expected_sign_value(d: usize) -> f64 {
    crate::partitions::factorial(d + 1).to_f64().unwrap()
}
