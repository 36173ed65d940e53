//! Matrix-free operators on `(C^d)^{⊗n}` built from tensor-factor permutations.
//!
//! Basis index `a_0 d^{n-1} + ... + a_{n-1}`: position 0 is the most
//! significant digit. `rho(pi)` moves the factor at position `i` to `pi(i)`.

use crate::characters::{chi, ConjugacyClass};
use crate::error::{QmcError, Result};
use crate::graph::GraphSpec;
use crate::linalg::{self, LanczosOptions};
use crate::partitions::{dim_sn, factorial, Partition};
use crate::swap_algebra::{all_permutations, AlgebraElement, Permutation};

use num::ToPrimitive;

/// Default size limit for materialising dense matrices.
pub const DENSE_CAP: usize = 4096;
/// Default `n` limit for isotypic projectors (they sum over all of `S_n`).
pub const PROJECTOR_CAP: usize = 8;

fn space_dim(n: usize, d: usize) -> Result<usize> {
    let mut dim = 1usize;
    for _ in 0..n {
        dim = dim.checked_mul(d).ok_or_else(|| QmcError::CapExceeded(format!("{d}^{n} overflows")))?;
    }
    Ok(dim)
}

fn weights(n: usize, d: usize) -> Vec<usize> {
    let mut w = vec![1; n];
    for i in (0..n.saturating_sub(1)).rev() {
        w[i] = w[i + 1] * d;
    }
    w
}

/// Index of `rho(pi) e_idx`.
fn permuted_index(pi: &Permutation, idx: usize, d: usize, w: &[usize]) -> usize {
    let mut out = 0;
    for (i, &wi) in w.iter().enumerate() {
        let digit = (idx / wi) % d;
        out += digit * w[pi.apply(i)];
    }
    out
}

/// `rho(pi) v`.
pub fn apply_permutation(pi: &Permutation, v: &[f64], d: usize) -> Result<Vec<f64>> {
    let n = pi.n();
    let dim = space_dim(n, d)?;
    if v.len() != dim {
        return Err(QmcError::InvalidArgument(format!("vector length {} != {d}^{n}", v.len())));
    }
    let w = weights(n, d);
    let mut out = vec![0.0; dim];
    for (idx, &x) in v.iter().enumerate() {
        out[permuted_index(pi, idx, d, &w)] = x;
    }
    Ok(out)
}

/// `rho(x) v` for a group-algebra element.
pub fn apply_element(x: &AlgebraElement, v: &[f64], d: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; v.len()];
    for (p, c) in x.float_terms() {
        let pv = apply_permutation(&p, v, d)?;
        for (o, y) in out.iter_mut().zip(pv) {
            *o += c * y;
        }
    }
    Ok(out)
}

/// `sum 2 w_ij (I - Swap_ij)` acting by digit swaps.
#[derive(Clone, Debug)]
pub struct TensorHamiltonian {
    pub n: usize,
    pub d: usize,
    pub dim: usize,
    edges: Vec<(usize, usize, f64)>,
    w: Vec<usize>,
}

pub fn hamiltonian(g: &GraphSpec, d: usize) -> Result<TensorHamiltonian> {
    let dim = space_dim(g.n, d)?;
    Ok(TensorHamiltonian { n: g.n, d, dim, edges: g.edges.clone(), w: weights(g.n, d) })
}

impl TensorHamiltonian {
    #[inline]
    fn swapped(&self, idx: usize, i: usize, j: usize) -> usize {
        let (wi, wj) = (self.w[i], self.w[j]);
        let a = (idx / wi) % self.d;
        let b = (idx / wj) % self.d;
        idx + b * wi + a * wj - a * wi - b * wj
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for &(i, j, w) in &self.edges {
            let c = 2.0 * w;
            for idx in 0..self.dim {
                y[idx] += c * (x[idx] - x[self.swapped(idx, i, j)]);
            }
        }
    }

    /// Column-major dense matrix (symmetric).
    pub fn dense(&self, cap: usize) -> Result<Vec<f64>> {
        if self.dim > cap {
            return Err(QmcError::CapExceeded(format!("dense matrix of size {} exceeds cap {cap}", self.dim)));
        }
        let n = self.dim;
        let mut m = vec![0.0; n * n];
        for &(i, j, w) in &self.edges {
            let c = 2.0 * w;
            for idx in 0..n {
                m[idx * n + idx] += c;
                let s = self.swapped(idx, i, j);
                m[idx * n + s] -= c;
            }
        }
        Ok(m)
    }

    /// `<y, H x> - <H y, x>` on seeded random vectors; zero for symmetric operators.
    pub fn symmetry_defect(&self, seed: u64) -> f64 {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<f64> = (0..self.dim).map(|_| rng.gen::<f64>() - 0.5).collect();
        let y: Vec<f64> = (0..self.dim).map(|_| rng.gen::<f64>() - 0.5).collect();
        let mut hx = vec![0.0; self.dim];
        let mut hy = vec![0.0; self.dim];
        self.matvec(&x, &mut hx);
        self.matvec(&y, &mut hy);
        let a: f64 = y.iter().zip(&hx).map(|(p, q)| p * q).sum();
        let b: f64 = hy.iter().zip(&x).map(|(p, q)| p * q).sum();
        (a - b).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Dense,
    Iterative,
    /// Dense up to the dense cap, iterative above it.
    Auto,
}

impl std::str::FromStr for Method {
    type Err = QmcError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Method::Dense),
            "iterative" => Ok(Method::Iterative),
            "auto" => Ok(Method::Auto),
            _ => Err(QmcError::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

/// Largest eigenvalue of `H_G^d`.
pub fn max_eigenvalue(op: &TensorHamiltonian, method: Method) -> Result<f64> {
    max_eigenvalue_with(op, method, DENSE_CAP, LanczosOptions::default())
}

pub fn max_eigenvalue_with(
    op: &TensorHamiltonian,
    method: Method,
    dense_cap: usize,
    opts: LanczosOptions,
) -> Result<f64> {
    let dense = match method {
        Method::Dense => true,
        Method::Iterative => false,
        Method::Auto => op.dim <= dense_cap.min(1024),
    };
    if op.edges.is_empty() {
        return Ok(0.0);
    }
    if dense {
        let w = linalg::sym_eigvals(op.dense(dense_cap)?, op.dim)?;
        Ok(w[op.dim - 1])
    } else {
        let defect = op.symmetry_defect(opts.seed);
        if defect > 1e-8 * (1.0 + op.dim as f64) {
            return Err(QmcError::Numerical(format!("operator is not symmetric (defect {defect:.3e})")));
        }
        Ok(linalg::lanczos_max(op.dim, |x, y| op.matvec(x, y), opts)?.value)
    }
}

/// All eigenvalues (ascending) via dense diagonalisation.
pub fn spectrum_dense(op: &TensorHamiltonian, cap: usize) -> Result<Vec<f64>> {
    if op.dim == 0 {
        return Ok(Vec::new());
    }
    linalg::sym_eigvals(op.dense(cap)?, op.dim)
}

/// Largest eigenpair via dense diagonalisation.
pub fn top_eigenpair_dense(op: &TensorHamiltonian, cap: usize) -> Result<(f64, Vec<f64>)> {
    let (w, v) = linalg::sym_eig(op.dense(cap)?, op.dim)?;
    let n = op.dim;
    Ok((w[n - 1], v[(n - 1) * n..n * n].to_vec()))
}

/// Centrally primitive idempotent of `lambda`, as weights on all of `S_n`.
#[derive(Clone, Debug)]
pub struct IsotypicProjector {
    pub lambda: Partition,
    pub d: usize,
    terms: Vec<(Permutation, f64)>,
}

pub fn isotypic_projector(lambda: &Partition, n: usize, d: usize) -> Result<IsotypicProjector> {
    isotypic_projector_capped(lambda, n, d, PROJECTOR_CAP)
}

pub fn isotypic_projector_capped(lambda: &Partition, n: usize, d: usize, cap: usize) -> Result<IsotypicProjector> {
    if n > cap {
        return Err(QmcError::CapExceeded(format!("projector for n={n} exceeds cap {cap}")));
    }
    if lambda.weight() != n {
        return Err(QmcError::WeightMismatch(format!("{lambda} is not a partition of {n}")));
    }
    let scale = dim_sn(lambda).to_f64().unwrap() / factorial(n).to_f64().unwrap();
    let mut cache = std::collections::HashMap::new();
    let mut terms = Vec::new();
    for img in all_permutations(n) {
        let p = Permutation::new(img).expect("valid");
        let ct = p.cycle_type();
        let c = match cache.get(&ct) {
            Some(&c) => c,
            None => {
                let v = chi(lambda, &ConjugacyClass::new(ct.clone()))?.to_f64().unwrap();
                cache.insert(ct, v);
                v
            }
        };
        if c != 0.0 {
            terms.push((p, scale * c));
        }
    }
    Ok(IsotypicProjector { lambda: lambda.clone(), d, terms })
}

impl IsotypicProjector {
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; v.len()];
        for (p, c) in &self.terms {
            let pv = apply_permutation(p, v, self.d)?;
            for (o, y) in out.iter_mut().zip(pv) {
                *o += c * y;
            }
        }
        Ok(out)
    }

    /// Column-major dense matrix.
    pub fn dense(&self, n: usize, cap: usize) -> Result<Vec<f64>> {
        let dim = space_dim(n, self.d)?;
        if dim > cap {
            return Err(QmcError::CapExceeded(format!("dense projector of size {dim} exceeds cap {cap}")));
        }
        let w = weights(n, self.d);
        let mut m = vec![0.0; dim * dim];
        for (p, c) in &self.terms {
            for col in 0..dim {
                m[col * dim + permuted_index(p, col, self.d, &w)] += c;
            }
        }
        Ok(m)
    }
}
