//! Dense primal-dual interior-point method for
//!
//! ```text
//! (P)  min <C, X>   s.t. <A_i, X> = b_i,  X ⪰ 0
//! (D)  max b^T y    s.t. S = C - sum y_i A_i ⪰ 0
//! ```
//!
//! HKM search direction with Mehrotra predictor-corrector, infeasible start.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{QmcError, Result};
use crate::linalg;

/// Symmetric matrix stored as upper-triangle triplets `(i, j, v)`, `i <= j`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseSym {
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn to_dense(&self, n: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
            if i != j {
                m[(j, i)] += v;
            }
        }
        m
    }

    /// `<self, M>` for symmetric `M`.
    pub fn inner(&self, m: &DMatrix<f64>) -> f64 {
        self.entries.iter().map(|&(i, j, v)| if i == j { v * m[(i, j)] } else { v * (m[(i, j)] + m[(j, i)]) }).sum()
    }

    pub fn frob(&self) -> f64 {
        self.entries.iter().map(|&(i, j, v)| if i == j { v * v } else { 2.0 * v * v }).sum::<f64>().sqrt()
    }

    pub fn add_to(&self, m: &mut DMatrix<f64>, scale: f64) {
        for &(i, j, v) in &self.entries {
            m[(i, j)] += scale * v;
            if i != j {
                m[(j, i)] += scale * v;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub dim: usize,
    pub c: SparseSym,
    pub a: Vec<SparseSym>,
    pub b: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    Infeasible,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iter: usize,
    /// Largest matrix dimension accepted.
    pub cap: usize,
}

/// Default iteration limit, overridable through `QMC_SOLVER_MAXITER`.
pub fn default_max_iter() -> usize {
    std::env::var("QMC_SOLVER_MAXITER").ok().and_then(|s| s.parse().ok()).unwrap_or(100)
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { gap_tol: 1e-8, feas_tol: 1e-8, max_iter: default_max_iter(), cap: 400 }
    }
}

#[derive(Clone, Debug)]
pub struct SdpResult {
    pub status: SolveStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|p - d| / (1 + |p| + |d|)`.
    pub relative_gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub y: Vec<f64>,
    pub x: DMatrix<f64>,
}

/// `A_i = sum_k coeffs[i] P_k` over shared sparse patterns. When the `A_i`
/// are dense combinations of few sparse patterns, the Schur complement is
/// formed on the patterns and multiplied out.
#[derive(Clone, Debug, Default)]
pub struct PatternFactor {
    pub patterns: Vec<SparseSym>,
    pub coeffs: Vec<Vec<(usize, f64)>>,
}

/// Both triangles of each matrix plus the columns it touches.
struct Stored {
    full: Vec<Vec<(usize, usize, f64)>>,
    cols: Vec<Vec<usize>>,
}

impl Stored {
    fn new(mats: &[SparseSym]) -> Self {
        let mut full = Vec::with_capacity(mats.len());
        let mut cols = Vec::with_capacity(mats.len());
        for a in mats {
            let mut f = Vec::with_capacity(2 * a.entries.len());
            for &(i, j, v) in &a.entries {
                f.push((i, j, v));
                if i != j {
                    f.push((j, i, v));
                }
            }
            let mut c: Vec<usize> = f.iter().map(|e| e.1).collect();
            c.sort_unstable();
            c.dedup();
            full.push(f);
            cols.push(c);
        }
        Stored { full, cols }
    }

    /// `H_ij = <M_i, X M_j S^{-1}>`.
    fn schur(&self, x: &DMatrix<f64>, sinv: &DMatrix<f64>) -> DMatrix<f64> {
        let n = x.nrows();
        let m = self.full.len();
        let mut h = DMatrix::zeros(m, m);
        let mut pos = vec![usize::MAX; n];
        for j in 0..m {
            let cols = &self.cols[j];
            if cols.is_empty() {
                continue;
            }
            for (k, &c) in cols.iter().enumerate() {
                pos[c] = k;
            }
            // T = X M_j restricted to touched columns
            let mut t = DMatrix::zeros(n, cols.len());
            for &(r, c, v) in &self.full[j] {
                let mut col = t.column_mut(pos[c]);
                col.axpy(v, &x.column(r), 1.0);
            }
            let srows = sinv.select_rows(cols.iter());
            let w = &t * srows;
            // <M_i, W> = sum M_i[r,c] W[c,r]
            for i in j..m {
                let val: f64 = self.full[i].iter().map(|&(r, c, v)| v * w[(c, r)]).sum();
                h[(i, j)] = val;
            }
        }
        h.fill_upper_triangle_with_lower_triangle();
        h
    }
}

struct Workspace<'a> {
    p: &'a SdpProblem,
    stored: Stored,
    /// Dense `m x K` coefficient matrix of the pattern factorization.
    factor: Option<DMatrix<f64>>,
}

impl<'a> Workspace<'a> {
    fn new(p: &'a SdpProblem, factor: Option<&PatternFactor>) -> Self {
        match factor {
            Some(f) => {
                let mut r = DMatrix::zeros(p.a.len(), f.patterns.len());
                for (i, row) in f.coeffs.iter().enumerate() {
                    for &(k, c) in row {
                        r[(i, k)] += c;
                    }
                }
                Workspace { p, stored: Stored::new(&f.patterns), factor: Some(r) }
            }
            None => Workspace { p, stored: Stored::new(&p.a), factor: None },
        }
    }

    fn op(&self, m: &DMatrix<f64>) -> DVector<f64> {
        let inner = |f: &Vec<(usize, usize, f64)>| f.iter().map(|&(i, j, v)| v * m[(i, j)]).sum::<f64>();
        let v = DVector::from_iterator(self.stored.full.len(), self.stored.full.iter().map(inner));
        match &self.factor {
            Some(r) => r * v,
            None => v,
        }
    }

    fn adjoint(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let n = self.p.dim;
        let z = match &self.factor {
            Some(r) => r.tr_mul(y),
            None => y.clone(),
        };
        let mut m = DMatrix::zeros(n, n);
        for (f, &zi) in self.stored.full.iter().zip(z.iter()) {
            if zi != 0.0 {
                for &(i, j, v) in f {
                    m[(i, j)] += zi * v;
                }
            }
        }
        m
    }

    fn schur(&self, x: &DMatrix<f64>, sinv: &DMatrix<f64>) -> DMatrix<f64> {
        let h = self.stored.schur(x, sinv);
        match &self.factor {
            Some(r) => {
                let mut h = r * h * r.transpose();
                symmetrize(&mut h);
                h
            }
            None => h,
        }
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for j in 0..n {
        for i in 0..j {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Largest `alpha <= 1` keeping `X + alpha dX` positive semidefinite, times `tau`.
fn step_length(x: &DMatrix<f64>, dx: &DMatrix<f64>, tau: f64) -> Result<f64> {
    let mut u = x.clone();
    if !linalg::cholesky_upper(&mut u)? {
        return Err(QmcError::Numerical("iterate lost positive definiteness".into()));
    }
    let uinv = u
        .solve_upper_triangular(&DMatrix::identity(x.nrows(), x.nrows()))
        .ok_or_else(|| QmcError::Numerical("singular Cholesky factor".into()))?;
    let mut m = uinv.transpose() * dx * &uinv;
    symmetrize(&mut m);
    let lmin = linalg::min_eigenvalue(&m)?;
    Ok(if lmin >= 0.0 { 1.0 } else { (tau / -lmin).min(1.0) })
}

fn chol_solve(h: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let b = DMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice());
    if let Some(x) = linalg::spd_solve(h, &b)? {
        return Ok(DVector::from_column_slice(x.as_slice()));
    }
    // near-singular Schur complement: retry with a small diagonal shift
    let scale = h.diagonal().amax().max(1.0);
    for shift in [1e-12, 1e-10, 1e-8] {
        let mut hr = h.clone();
        for i in 0..hr.nrows() {
            hr[(i, i)] += shift * scale;
        }
        if let Some(x) = linalg::spd_solve(&hr, &b)? {
            return Ok(DVector::from_column_slice(x.as_slice()));
        }
    }
    Err(QmcError::Numerical("Schur complement is not positive definite".into()))
}

pub fn solve(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpResult> {
    solve_factored(p, None, opts)
}

/// As [`solve`], with `factor` describing the same `A_i` as `p.a`.
pub fn solve_factored(p: &SdpProblem, factor: Option<&PatternFactor>, opts: &SolverOptions) -> Result<SdpResult> {
    let n = p.dim;
    if n > opts.cap {
        return Err(QmcError::CapExceeded(format!("moment matrix of size {n} exceeds solver cap {}", opts.cap)));
    }
    if p.a.len() != p.b.len() {
        return Err(QmcError::InvalidArgument("constraint and right-hand-side counts differ".into()));
    }
    let m = p.a.len();
    if factor.is_some_and(|f| f.coeffs.len() != p.a.len()) {
        return Err(QmcError::InvalidArgument("pattern factor does not match the constraints".into()));
    }
    let ws = Workspace::new(p, factor);
    let c = p.c.to_dense(n);
    let b = DVector::from_column_slice(&p.b);
    let nf = (n as f64).sqrt();
    let cnorm = p.c.frob();
    let anorm = p.a.iter().map(SparseSym::frob).fold(0.0, f64::max);
    let xi =
        p.a.iter().zip(&p.b).map(|(a, bi)| nf * (1.0 + bi.abs()) / (1.0 + a.frob())).fold(10.0f64.max(nf), f64::max);
    let eta = 10.0f64.max(nf).max((1.0 + cnorm.max(anorm)) / nf);
    let mut x = DMatrix::identity(n, n) * xi;
    let mut s = DMatrix::identity(n, n) * eta;
    let mut y = DVector::zeros(m);
    let bnorm = b.norm();

    let mut last = None;
    for it in 0..=opts.max_iter {
        let rp = &b - ws.op(&x);
        let rd = &c - &s - ws.adjoint(&y);
        let pobj = x.dot(&c);
        let dobj = b.dot(&y);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let pinf = rp.norm() / (1.0 + bnorm);
        let dinf = rd.norm() / (1.0 + cnorm);
        let status = if gap < opts.gap_tol && pinf < opts.feas_tol && dinf < opts.feas_tol {
            Some(SolveStatus::Optimal)
        } else if it == opts.max_iter {
            Some(SolveStatus::MaxIterations)
        } else {
            None
        };
        last = Some(SdpResult {
            status: status.unwrap_or(SolveStatus::MaxIterations),
            primal_objective: pobj,
            dual_objective: dobj,
            relative_gap: gap,
            primal_residual: pinf,
            dual_residual: dinf,
            iterations: it,
            y: y.as_slice().to_vec(),
            x: x.clone(),
        });
        if status.is_some() {
            break;
        }
        // a blow-up of the primal iterate signals an infeasible moment problem
        if x.amax() > 1e12 {
            if let Some(r) = last.as_mut() {
                r.status = SolveStatus::Infeasible;
            }
            break;
        }

        let sinv =
            linalg::spd_inverse(&s)?.ok_or_else(|| QmcError::Numerical("dual slack lost definiteness".into()))?;
        let mu = x.dot(&s) / n as f64;
        let h = ws.schur(&x, &sinv);
        let xrd = &x * &rd * &sinv;

        let direction = |k: &DMatrix<f64>| -> Result<(DMatrix<f64>, DVector<f64>, DMatrix<f64>)> {
            let rhs = &rp - ws.op(&(k - &xrd));
            let dy = chol_solve(&h, &rhs)?;
            let ds = &rd - ws.adjoint(&dy);
            let mut dx = k - &x * &ds * &sinv;
            symmetrize(&mut dx);
            Ok((dx, dy, ds))
        };

        // predictor
        let k_aff = -&x;
        let (dx_a, _, ds_a) = direction(&k_aff)?;
        let ap = step_length(&x, &dx_a, 1.0)?;
        let ad = step_length(&s, &ds_a, 1.0)?;
        let mu_aff = (&x + &dx_a * ap).dot(&(&s + &ds_a * ad)) / n as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let k_cor = (DMatrix::identity(n, n) * (sigma * mu) - &dx_a * &ds_a) * &sinv - &x;
        let (dx, dy, ds) = direction(&k_cor)?;
        let tau = 0.9 + 0.09 * (1.0 - sigma);
        let ap = step_length(&x, &dx, tau)?;
        let ad = step_length(&s, &ds, tau)?;
        x += &dx * ap;
        symmetrize(&mut x);
        s += &ds * ad;
        symmetrize(&mut s);
        y += &dy * ad;
    }
    last.ok_or_else(|| QmcError::Numerical("solver did not run".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_eigenvalue_as_sdp() {
        // max y s.t. C - y I ⪰ 0 gives lambda_min(C)
        let c = SparseSym { entries: vec![(0, 0, 2.0), (0, 1, 1.0), (1, 1, 2.0)] };
        let a = vec![SparseSym { entries: vec![(0, 0, 1.0), (1, 1, 1.0)] }];
        let r = solve(&SdpProblem { dim: 2, c, a, b: vec![1.0] }, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.dual_objective - 1.0).abs() < 1e-7);
        assert!((r.primal_objective - 1.0).abs() < 1e-7);
    }

    #[test]
    fn correlation_matrix() {
        // max -2 y s.t. [[1, y],[y, 1]] ⪰ 0  =>  y = -1, value 2
        // written as C - y A with C = I, A = -offdiag, b = -2
        let c = SparseSym { entries: vec![(0, 0, 1.0), (1, 1, 1.0)] };
        let a = vec![SparseSym { entries: vec![(0, 1, -1.0)] }];
        let r = solve(&SdpProblem { dim: 2, c, a, b: vec![-2.0] }, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.dual_objective - 2.0).abs() < 1e-6);
    }

    #[test]
    fn pattern_factor_matches_expanded_constraints() {
        // 3x3 correlation matrix with the (0,2) entry tied to the others
        let e01 = SparseSym { entries: vec![(0, 1, 1.0)] };
        let e12 = SparseSym { entries: vec![(1, 2, 1.0)] };
        let e02 = SparseSym { entries: vec![(0, 2, 1.0)] };
        let coeffs = vec![vec![(0, -1.0), (2, -0.5)], vec![(1, -1.0), (2, 0.25)]];
        let patterns = vec![e01, e12, e02];
        let a: Vec<SparseSym> = coeffs
            .iter()
            .map(|row: &Vec<(usize, f64)>| {
                let mut m = DMatrix::zeros(3, 3);
                for &(k, c) in row {
                    patterns[k].add_to(&mut m, c);
                }
                let mut e = Vec::new();
                for j in 0..3 {
                    for i in 0..=j {
                        if m[(i, j)] != 0.0 {
                            e.push((i, j, m[(i, j)]));
                        }
                    }
                }
                SparseSym { entries: e }
            })
            .collect();
        let c = SparseSym { entries: vec![(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)] };
        let p = SdpProblem { dim: 3, c, a, b: vec![-1.0, -1.0] };
        let f = PatternFactor { patterns, coeffs };
        let plain = solve(&p, &SolverOptions::default()).unwrap();
        let fact = solve_factored(&p, Some(&f), &SolverOptions::default()).unwrap();
        assert_eq!(plain.status, SolveStatus::Optimal);
        assert_eq!(fact.status, SolveStatus::Optimal);
        assert!((plain.dual_objective - fact.dual_objective).abs() < 1e-7);
        let bad = PatternFactor { coeffs: vec![], ..f };
        assert!(solve_factored(&p, Some(&bad), &SolverOptions::default()).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let p = SdpProblem { dim: 5, c: SparseSym::default(), a: vec![], b: vec![] };
        let opts = SolverOptions { cap: 4, ..Default::default() };
        assert!(matches!(solve(&p, &opts), Err(QmcError::CapExceeded(_))));
    }
}
