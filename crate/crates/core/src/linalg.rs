//! Thin safe wrappers over the LAPACK routines we need, plus a restarted
//! Lanczos iteration for the largest eigenvalue of a matrix-free operator.
//!
//! Dense matrices are column-major `Vec<f64>`; every matrix passed to the
//! symmetric routines is assumed symmetric, so row/column order is moot.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QmcError, Result};

fn lapack_err(routine: &str, info: i32) -> QmcError {
    QmcError::Numerical(format!("{routine} failed with info = {info}"))
}

/// Eigenvalues of a symmetric `n x n` matrix, ascending.
pub fn sym_eigvals(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    assert_eq!(a.len(), n * n);
    let mut w = vec![0.0; n];
    syevd(b'N', &mut a, n, &mut w)?;
    Ok(w)
}

/// Eigenpairs of a symmetric matrix; eigenvectors are the columns of the
/// returned column-major buffer, eigenvalues ascending.
pub fn sym_eig(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    assert_eq!(a.len(), n * n);
    let mut w = vec![0.0; n];
    syevd(b'V', &mut a, n, &mut w)?;
    Ok((w, a))
}

fn syevd(jobz: u8, a: &mut [f64], n: usize, w: &mut [f64]) -> Result<()> {
    let ni = n as i32;
    let mut info = 0;
    let mut work = vec![0.0; 1];
    let mut iwork = vec![0i32; 1];
    unsafe {
        lapack::dsyevd(jobz, b'U', ni, a, ni, w, &mut work, -1, &mut iwork, -1, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("dsyevd workspace query", info));
    }
    let lwork = work[0] as usize;
    let liwork = iwork[0] as usize;
    let mut work = vec![0.0; lwork.max(1)];
    let mut iwork = vec![0i32; liwork.max(1)];
    unsafe {
        lapack::dsyevd(jobz, b'U', ni, a, ni, w, &mut work, lwork as i32, &mut iwork, liwork as i32, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("dsyevd", info));
    }
    Ok(())
}

/// Eigenvalues and eigenvectors of a symmetric tridiagonal matrix.
pub fn tridiag_eig(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.resize(n.max(1), 0.0);
    let mut z = vec![0.0; n * n];
    let mut work = vec![0.0; (2 * n).max(1)];
    let mut info = 0;
    unsafe {
        lapack::dstev(b'V', n as i32, &mut d, &mut e, &mut z, n as i32, &mut work, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("dstev", info));
    }
    Ok((d, z))
}

/// Singular values of an `m x n` column-major matrix, descending.
pub fn singular_values(mut a: Vec<f64>, m: usize, n: usize) -> Result<Vec<f64>> {
    if m == 0 || n == 0 {
        return Ok(Vec::new());
    }
    let k = m.min(n);
    let mut s = vec![0.0; k];
    let mut u = vec![0.0; 1];
    let mut vt = vec![0.0; 1];
    let mut iwork = vec![0i32; 8 * k];
    let mut work = vec![0.0; 1];
    let mut info = 0;
    unsafe {
        lapack::dgesdd(
            b'N', m as i32, n as i32, &mut a, m as i32, &mut s, &mut u, 1, &mut vt, 1, &mut work, -1, &mut iwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(lapack_err("dgesdd workspace query", info));
    }
    let lwork = work[0] as usize;
    let mut work = vec![0.0; lwork.max(1)];
    unsafe {
        lapack::dgesdd(
            b'N',
            m as i32,
            n as i32,
            &mut a,
            m as i32,
            &mut s,
            &mut u,
            1,
            &mut vt,
            1,
            &mut work,
            lwork as i32,
            &mut iwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(lapack_err("dgesdd", info));
    }
    Ok(s)
}

/// Numerical rank with relative cutoff `rtol * s_max`.
pub fn numerical_rank(a: Vec<f64>, m: usize, n: usize, rtol: f64) -> Result<usize> {
    let s = singular_values(a, m, n)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > rtol * smax).count())
}

/// In-place Cholesky factor (upper) of a symmetric positive definite matrix.
/// Returns `Ok(false)` when the matrix is not positive definite.
pub fn cholesky_upper(a: &mut DMatrix<f64>) -> Result<bool> {
    let n = a.nrows();
    if n == 0 {
        return Ok(true);
    }
    let mut info = 0;
    unsafe {
        lapack::dpotrf(b'U', n as i32, a.as_mut_slice(), n as i32, &mut info);
    }
    if info < 0 {
        return Err(lapack_err("dpotrf", info));
    }
    if info > 0 {
        return Ok(false);
    }
    for j in 0..n {
        for i in j + 1..n {
            a[(i, j)] = 0.0;
        }
    }
    Ok(true)
}

/// Solves `A X = B` for symmetric positive definite `A`. `None` if `A` is not SPD.
pub fn spd_solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Option<DMatrix<f64>>> {
    let n = a.nrows();
    let mut f = a.clone();
    if !cholesky_upper(&mut f)? {
        return Ok(None);
    }
    let mut x = b.clone();
    if n == 0 {
        return Ok(Some(x));
    }
    let mut info = 0;
    unsafe {
        lapack::dpotrs(b'U', n as i32, b.ncols() as i32, f.as_slice(), n as i32, x.as_mut_slice(), n as i32, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("dpotrs", info));
    }
    Ok(Some(x))
}

/// Inverse of a symmetric positive definite matrix, `None` if not SPD.
pub fn spd_inverse(a: &DMatrix<f64>) -> Result<Option<DMatrix<f64>>> {
    let n = a.nrows();
    let mut f = a.clone();
    if !cholesky_upper(&mut f)? {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(f));
    }
    let mut info = 0;
    unsafe {
        lapack::dpotri(b'U', n as i32, f.as_mut_slice(), n as i32, &mut info);
    }
    if info != 0 {
        return Err(lapack_err("dpotri", info));
    }
    for j in 0..n {
        for i in j + 1..n {
            f[(i, j)] = f[(j, i)];
        }
    }
    Ok(Some(f))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    let w = sym_eigvals(a.as_slice().to_vec(), n)?;
    Ok(w.first().copied().unwrap_or(0.0))
}

#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    /// Converged when the Ritz residual is below `tol * max(1, |theta|)`.
    pub tol: f64,
    pub max_basis: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tol: 1e-10, max_basis: 120, max_restarts: 60, seed: 0x5eed }
    }
}

#[derive(Clone, Debug)]
pub struct LanczosResult {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub matvecs: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let nrm = dot(v, v).sqrt();
    if nrm > 0.0 {
        v.iter_mut().for_each(|x| *x /= nrm);
    }
    nrm
}

/// Largest eigenvalue of a symmetric operator given by `matvec(x, y)`: `y = A x`.
pub fn lanczos_max(
    dim: usize,
    mut matvec: impl FnMut(&[f64], &mut [f64]),
    opts: LanczosOptions,
) -> Result<LanczosResult> {
    if dim == 0 {
        return Err(QmcError::InvalidArgument("empty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() - 0.5).collect();
    normalize(&mut start);
    let mut matvecs = 0;
    let mut best = (f64::NEG_INFINITY, start.clone(), f64::INFINITY);
    for _restart in 0..=opts.max_restarts {
        let m_cap = opts.max_basis.min(dim);
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        loop {
            let j = basis.len() - 1;
            matvec(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&basis[j], &w);
            alpha.push(a);
            // full reorthogonalisation, applied twice for stability
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let b = dot(&w, &w).sqrt();
            let k = alpha.len();
            let check = k == m_cap || b < 1e-12 || k % 5 == 0;
            if check {
                let (vals, vecs) = tridiag_eig(&alpha, &beta)?;
                let theta = vals[k - 1];
                let s = &vecs[(k - 1) * k..k * k];
                let res = (b * s[k - 1]).abs();
                if res < best.2 || theta > best.0 {
                    let mut y = vec![0.0; dim];
                    for (coef, v) in s.iter().zip(&basis) {
                        axpy(*coef, v, &mut y);
                    }
                    normalize(&mut y);
                    best = (theta, y, res);
                }
                if res <= opts.tol * theta.abs().max(1.0) || b < 1e-12 {
                    return Ok(LanczosResult { value: theta, vector: best.1, residual: res, matvecs });
                }
                if k == m_cap {
                    break;
                }
            }
            beta.push(b);
            let mut next = w.clone();
            normalize(&mut next);
            basis.push(next);
        }
        start = best.1.clone();
    }
    Err(QmcError::Numerical(format!("Lanczos did not converge: residual {:.3e} after {matvecs} products", best.2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_eigenvalues_of_small_matrix() {
        // [[2,1],[1,2]] -> {1, 3}
        let w = sym_eigvals(vec![2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] - 3.0).abs() < 1e-14);
        let (w, v) = sym_eig(vec![2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((w[1] - 3.0).abs() < 1e-14);
        assert!((v[2].abs() - v[3].abs()).abs() < 1e-14);
    }

    #[test]
    fn lanczos_matches_dense() {
        let n = 60;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = ((i * 7 + j * 3) % 11) as f64 + ((j * 7 + i * 3) % 11) as f64;
            }
        }
        let dense = sym_eigvals(a.clone(), n).unwrap();
        let r = lanczos_max(
            n,
            |x, y| {
                for i in 0..n {
                    y[i] = (0..n).map(|j| a[i * n + j] * x[j]).sum();
                }
            },
            LanczosOptions { max_basis: 20, ..Default::default() },
        )
        .unwrap();
        assert!((r.value - dense[n - 1]).abs() < 1e-8 * dense[n - 1].abs());
    }

    #[test]
    fn rank_and_spd_helpers() {
        // rank-1 3x3
        let a = vec![1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 3.0, 6.0, 9.0];
        assert_eq!(numerical_rank(a, 3, 3, 1e-10).unwrap(), 1);
        let m = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let inv = spd_inverse(&m).unwrap().unwrap();
        let id = &m * &inv;
        assert!((id - DMatrix::identity(2, 2)).abs().max() < 1e-14);
        let not_pd = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(spd_inverse(&not_pd).unwrap().is_none());
        let b = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
        let x = spd_solve(&m, &b).unwrap().unwrap();
        assert!((&m * x - b).abs().max() < 1e-14);
        assert!((min_eigenvalue(&not_pd).unwrap() + 1.0).abs() < 1e-14);
    }
}
