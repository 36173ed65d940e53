//! Level-`ℓ` moment relaxations of the qudit Max Cut problem over the swap
//! algebra, optionally localized to one irrep, with SDPA export and a bundled
//! interior-point solver.
//!
//! Variables are group elements up to inversion. The moment matrix is indexed
//! by the permutations of Cayley length at most `ℓ` (optionally only the
//! `(d+1)`-good ones); entry `(i, j)` is the variable of `w_i^{-1} w_j`.

pub mod sdpa;
pub mod solver;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use nalgebra::DMatrix;
use num::ToPrimitive;
use serde::Serialize;

use crate::characters::gamma;
use crate::error::{QmcError, Result};
use crate::graph::GraphSpec;
use crate::linalg;
use crate::partitions::Partition;
use crate::swap_algebra::{cayley_ball, cycle_sum, k_subsets, subgroup_on, words_up_to, Permutation};

pub use sdpa::SdpaData;
pub use solver::{PatternFactor, SdpProblem, SolveStatus, SolverOptions, SparseSym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    /// `L(e) = 1`.
    Normalization,
    /// `sum_sigma sgn(sigma) L(tau sigma) = 0` over `S(J)`, `|J| = d + 1`.
    Antisymmetrizer,
    /// `L(c_k w) = gamma_{k+1,lambda} L(w)`.
    Localization,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearConstraint {
    pub kind: ConstraintKind,
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Clone, Debug)]
pub struct MomentSDP {
    pub n: usize,
    pub d: usize,
    pub level: usize,
    pub localization: Option<Partition>,
    pub basis: Vec<Permutation>,
    /// Representative (the smaller of `pi`, `pi^{-1}`) of each variable.
    pub variables: Vec<Permutation>,
    pub var_index: HashMap<Permutation, usize>,
    pub moment: Vec<Vec<usize>>,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Vec<(usize, f64)>,
}

fn canonical(p: &Permutation) -> Permutation {
    let q = p.inverse();
    if q < *p {
        q
    } else {
        p.clone()
    }
}

/// Sparse row with duplicate variables merged and zeros dropped.
fn merge(terms: impl IntoIterator<Item = (usize, f64)>) -> Vec<(usize, f64)> {
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for (v, c) in terms {
        *acc.entry(v).or_insert(0.0) += c;
    }
    acc.into_iter().filter(|(_, c)| c.abs() > 1e-12).collect()
}

/// Index set of the moment matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// Every product of at most `ℓ` transpositions.
    #[default]
    Group,
    /// Only the `(d+1)`-good ones ([`words_up_to`]); smaller but weaker at low levels.
    Good,
}

impl std::str::FromStr for BasisKind {
    type Err = QmcError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(BasisKind::Group),
            "good" => Ok(BasisKind::Good),
            _ => Err(QmcError::InvalidArgument(format!("unknown basis kind {s:?} (group|good)"))),
        }
    }
}

pub fn build_relaxation(g: &GraphSpec, d: usize, ell: usize, localization: Option<&Partition>) -> Result<MomentSDP> {
    build_relaxation_with(g, d, ell, localization, BasisKind::Group)
}

pub fn build_relaxation_with(
    g: &GraphSpec,
    d: usize,
    ell: usize,
    localization: Option<&Partition>,
    kind: BasisKind,
) -> Result<MomentSDP> {
    let n = g.n;
    if n < 2 {
        return Err(QmcError::InvalidArgument("relaxation needs at least two vertices".into()));
    }
    if d < 2 {
        return Err(QmcError::InvalidArgument("relaxation needs d >= 2".into()));
    }
    if ell == 0 || ell > n - 1 {
        return Err(QmcError::InvalidArgument(format!("level must lie in 1..={} (got {ell})", n - 1)));
    }
    if let Some(l) = localization {
        if l.weight() != n {
            return Err(QmcError::WeightMismatch(format!("{l} is not a partition of {n}")));
        }
        if l.height() > d {
            return Err(QmcError::InvalidHeight(format!("{l} has more than {d} rows")));
        }
    }
    let basis = match kind {
        BasisKind::Group => cayley_ball(n, ell),
        BasisKind::Good => words_up_to(n, d, ell),
    };
    let inverses: Vec<Permutation> = basis.iter().map(Permutation::inverse).collect();

    let mut variables: Vec<Permutation> = Vec::new();
    let mut var_index: HashMap<Permutation, usize> = HashMap::new();
    let mut intern = |p: Permutation, variables: &mut Vec<Permutation>| -> usize {
        if let Some(&v) = var_index.get(&p) {
            return v;
        }
        let rep = canonical(&p);
        let id = variables.len();
        variables.push(rep.clone());
        var_index.insert(rep.inverse(), id);
        var_index.insert(rep, id);
        id
    };
    let identity_var = intern(Permutation::identity(n), &mut variables);
    let mut moment = vec![vec![0usize; basis.len()]; basis.len()];
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let v = intern(inverses[i].compose(&basis[j]), &mut variables);
            moment[i][j] = v;
            moment[j][i] = v;
        }
    }
    // the index set is closed under inversion by construction
    let index: HashMap<Permutation, usize> = var_index.clone();

    let mut constraints =
        vec![LinearConstraint { kind: ConstraintKind::Normalization, coeffs: vec![(identity_var, 1.0)], rhs: 1.0 }];

    let mut seen_rows: std::collections::HashSet<Vec<(usize, i64)>> = std::collections::HashSet::new();
    let mut push_unique = |kind: ConstraintKind, row: Vec<(usize, f64)>, constraints: &mut Vec<LinearConstraint>| {
        if row.is_empty() {
            return;
        }
        // rows equal up to sign are the same constraint
        let lead = row[0].1.signum();
        let key: Vec<(usize, i64)> = row.iter().map(|&(v, c)| (v, (c * lead * 1e9).round() as i64)).collect();
        if seen_rows.insert(key) {
            constraints.push(LinearConstraint { kind, coeffs: row, rhs: 0.0 });
        }
    };

    if d < n {
        let mut index_perms: Vec<&Permutation> = index.keys().collect();
        index_perms.sort();
        for j in k_subsets(n, d + 1) {
            let group = subgroup_on(&j, n);
            for &tau in &index_perms {
                let orbit: Option<Vec<(usize, f64)>> =
                    group.iter().map(|(s, sg)| index.get(&tau.compose(s)).map(|&v| (v, *sg as f64))).collect();
                if let Some(terms) = orbit {
                    push_unique(ConstraintKind::Antisymmetrizer, merge(terms), &mut constraints);
                }
            }
        }
    }

    if let Some(lambda) = localization {
        let mut index_perms: Vec<&Permutation> = index.keys().collect();
        index_perms.sort();
        for k in 1..d.min(n) {
            let ck = cycle_sum(k, n)?;
            let g = gamma(k + 1, lambda)?.to_f64().ok_or_else(|| QmcError::Numerical("gamma out of range".into()))?;
            let cycles: Vec<Permutation> = ck.support().cloned().collect();
            for &w in &index_perms {
                let terms: Option<Vec<(usize, f64)>> =
                    cycles.iter().map(|c| index.get(&c.compose(w)).map(|&v| (v, 1.0))).collect();
                if let Some(mut terms) = terms {
                    terms.push((index[w], -g));
                    push_unique(ConstraintKind::Localization, merge(terms), &mut constraints);
                }
            }
        }
    }

    let mut objective = Vec::new();
    for &(i, j, w) in &g.edges {
        let t = Permutation::transposition(n, i, j);
        let tv = *index.get(&t).ok_or_else(|| {
            QmcError::InvalidArgument(format!("transposition ({} {}) is outside the index set", i + 1, j + 1))
        })?;
        objective.push((identity_var, 2.0 * w));
        objective.push((tv, -2.0 * w));
    }
    let objective = merge(objective);

    Ok(MomentSDP {
        n,
        d,
        level: ell,
        localization: localization.cloned(),
        basis,
        variables,
        var_index: index,
        moment,
        constraints,
        objective,
    })
}

/// `(pivot variable, rhs, [(free slot, coefficient)])`.
pub type Pivot = (usize, f64, Vec<(usize, f64)>);

/// Equality constraints eliminated: `x = x0 - R z` on pivot variables, `x_f = z_f` on free ones.
#[derive(Clone, Debug)]
pub struct ReducedSdp {
    pub problem: SdpProblem,
    pub objective_offset: f64,
    pub free: Vec<usize>,
    pub pivots: Vec<Pivot>,
    pub nvars: usize,
    /// Basis positions kept after dropping the common kernel of the pencil.
    pub kept: Vec<usize>,
    /// The constraint matrices as combinations of per-variable position patterns.
    pub factor: PatternFactor,
}

impl ReducedSdp {
    pub fn moment_vector(&self, z: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.nvars];
        for (slot, &f) in self.free.iter().enumerate() {
            x[f] = z[slot];
        }
        for (p, rhs, row) in &self.pivots {
            x[*p] = rhs - row.iter().map(|&(s, c)| c * z[s]).sum::<f64>();
        }
        x
    }
}

impl MomentSDP {
    pub fn basis_size(&self) -> usize {
        self.basis.len()
    }

    /// Largest absolute violation of the linear constraints by a moment vector.
    pub fn constraint_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| (c.coeffs.iter().map(|&(v, a)| a * x[v]).sum::<f64>() - c.rhs).abs())
            .fold(0.0, f64::max)
    }

    /// `x_pi = <psi, rho(pi) psi>` for a real unit vector `psi` on `(C^d)^{⊗n}`.
    pub fn moment_vector_of_state(&self, psi: &[f64]) -> Result<Vec<f64>> {
        self.variables
            .iter()
            .map(|p| {
                let v = crate::oracle::apply_permutation(p, psi, self.d)?;
                Ok(v.iter().zip(psi).map(|(a, b)| a * b).sum())
            })
            .collect()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * x[v]).sum()
    }

    /// Moment matrix evaluated at `x`.
    pub fn moment_matrix(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        let m = self.basis.len();
        nalgebra::DMatrix::from_fn(m, m, |i, j| x[self.moment[i][j]])
    }

    /// Eliminates the equalities by Gauss-Jordan elimination in floating point.
    pub fn reduce(&self) -> Result<ReducedSdp> {
        let nv = self.variables.len();
        let tol = 1e-9;
        let mut rows: Vec<(usize, Vec<f64>, f64)> = Vec::new();
        let mut pivot_of: Vec<Option<usize>> = vec![None; nv];
        for c in &self.constraints {
            let mut row = vec![0.0; nv];
            for &(v, a) in &c.coeffs {
                row[v] += a;
            }
            let mut rhs = c.rhs;
            for &(v, _) in &c.coeffs {
                if let Some(k) = pivot_of[v] {
                    let f = row[v];
                    if f != 0.0 {
                        let (_, prow, prhs) = &rows[k];
                        for (x, y) in row.iter_mut().zip(prow) {
                            *x -= f * y;
                        }
                        rhs -= f * prhs;
                    }
                }
            }
            let (col, &best) =
                row.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap_or((0, &0.0));
            if best.abs() < tol {
                if rhs.abs() > 1e-7 {
                    return Err(QmcError::Consistency("inconsistent moment constraints".into()));
                }
                continue;
            }
            for x in row.iter_mut() {
                *x /= best;
                if x.abs() < 1e-14 {
                    *x = 0.0;
                }
            }
            rhs /= best;
            for (_, prow, prhs) in rows.iter_mut() {
                let f = prow[col];
                if f != 0.0 {
                    for (x, y) in prow.iter_mut().zip(&row) {
                        *x -= f * y;
                    }
                    *prhs -= f * rhs;
                    prow[col] = 0.0;
                }
            }
            pivot_of[col] = Some(rows.len());
            rows.push((col, row, rhs));
        }

        let free: Vec<usize> = (0..nv).filter(|&v| pivot_of[v].is_none()).collect();
        let mut slot = vec![usize::MAX; nv];
        for (s, &f) in free.iter().enumerate() {
            slot[f] = s;
        }
        let pivots: Vec<Pivot> = rows
            .iter()
            .map(|(col, row, rhs)| {
                let r = free.iter().filter(|&&f| row[f] != 0.0).map(|&f| (slot[f], row[f])).collect();
                (*col, *rhs, r)
            })
            .collect();

        // positions (upper triangle) of each variable in the moment matrix
        let m = self.basis.len();
        let mut positions: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
        for i in 0..m {
            for j in i..m {
                positions[self.moment[i][j]].push((i, j));
            }
        }
        let mut c0: HashMap<(usize, usize), f64> = HashMap::new();
        let mut nmats: Vec<HashMap<(usize, usize), f64>> = vec![HashMap::new(); free.len()];
        for &f in &free {
            for &pos in &positions[f] {
                *nmats[slot[f]].entry(pos).or_insert(0.0) += 1.0;
            }
        }
        for (p, rhs, row) in &pivots {
            for &pos in &positions[*p] {
                if *rhs != 0.0 {
                    *c0.entry(pos).or_insert(0.0) += rhs;
                }
                for &(s, c) in row {
                    *nmats[s].entry(pos).or_insert(0.0) -= c;
                }
            }
        }
        let to_sparse = |h: HashMap<(usize, usize), f64>| {
            let mut e: Vec<(usize, usize, f64)> =
                h.into_iter().filter(|(_, v)| v.abs() > 1e-13).map(|((i, j), v)| (i, j, v)).collect();
            e.sort_by_key(|a| (a.0, a.1));
            SparseSym { entries: e }
        };
        // M(z) = C0 + sum z_f N_f = C - sum y A with A_f = -N_f
        let c = to_sparse(c0);
        let a: Vec<SparseSym> = nmats
            .into_iter()
            .map(|h| {
                let s = to_sparse(h);
                SparseSym { entries: s.entries.into_iter().map(|(i, j, v)| (i, j, -v)).collect() }
            })
            .collect();
        let (kept, c, a) = restrict_to_face(m, c, a)?;
        let mut kslot = vec![usize::MAX; m];
        for (s, &i) in kept.iter().enumerate() {
            kslot[i] = s;
        }
        let patterns: Vec<SparseSym> = positions
            .iter()
            .map(|ps| SparseSym {
                entries: ps
                    .iter()
                    .filter(|&&(i, j)| kslot[i] != usize::MAX && kslot[j] != usize::MAX)
                    .map(|&(i, j)| (kslot[i], kslot[j], 1.0))
                    .collect(),
            })
            .collect();
        // A_s = -E_{free s} + sum over pivots p of R_ps E_p
        let mut coeffs: Vec<Vec<(usize, f64)>> = free.iter().map(|&f| vec![(f, -1.0)]).collect();
        for (p, _, row) in &pivots {
            for &(s, c) in row {
                coeffs[s].push((*p, c));
            }
        }
        let factor = PatternFactor { patterns, coeffs };
        let mut q = vec![0.0; nv];
        for &(v, c) in &self.objective {
            q[v] += c;
        }
        let mut b: Vec<f64> = free.iter().map(|&f| q[f]).collect();
        let mut offset = 0.0;
        for (p, rhs, row) in &pivots {
            offset += q[*p] * rhs;
            for &(s, c) in row {
                b[s] -= q[*p] * c;
            }
        }
        Ok(ReducedSdp {
            problem: SdpProblem { dim: kept.len(), c, a, b },
            objective_offset: offset,
            free,
            pivots,
            nvars: nv,
            kept,
            factor,
        })
    }
}

/// Vectors annihilated by every matrix of the pencil `C + sum y_i A_i`,
/// as the columns of an orthonormal `dim x k` matrix.
fn common_kernel(dim: usize, mats: &[&SparseSym]) -> Result<DMatrix<f64>> {
    // G = sum M^T M is PSD with kernel equal to the common kernel
    let mut g = DMatrix::<f64>::zeros(dim, dim);
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
    for mat in mats {
        for col in by_col.iter_mut() {
            col.clear();
        }
        for &(i, j, v) in &mat.entries {
            by_col[j].push((i, v));
            if i != j {
                by_col[i].push((j, v));
            }
        }
        for col in &by_col {
            for &(r1, v1) in col {
                for &(r2, v2) in col {
                    g[(r1, r2)] += v1 * v2;
                }
            }
        }
    }
    let (w, vecs) = linalg::sym_eig(g.as_slice().to_vec(), dim)?;
    let top = w.last().copied().unwrap_or(0.0).max(1.0);
    let k = w.iter().take_while(|&&l| l < 1e-10 * top).count();
    Ok(DMatrix::from_column_slice(dim, k, &vecs[..dim * k]))
}

/// If `M K = 0` on the whole feasible pencil and `K[P, :]` is invertible,
/// then `M ⪰ 0` iff `M[R, R] ⪰ 0` for the complement `R` of `P`.
fn restrict_to_face(dim: usize, c: SparseSym, a: Vec<SparseSym>) -> Result<(Vec<usize>, SparseSym, Vec<SparseSym>)> {
    let mut mats: Vec<&SparseSym> = vec![&c];
    mats.extend(a.iter());
    let mut k = common_kernel(dim, &mats)?;
    if k.ncols() == 0 {
        return Ok(((0..dim).collect(), c, a));
    }
    // complete pivoting picks rows P with K[P, :] well conditioned
    let mut dropped = vec![false; dim];
    let mut used = vec![false; k.ncols()];
    for _ in 0..k.ncols() {
        let mut best = (0, 0, 0.0f64);
        for col in (0..k.ncols()).filter(|&c| !used[c]) {
            for row in (0..dim).filter(|&r| !dropped[r]) {
                if k[(row, col)].abs() > best.2 {
                    best = (row, col, k[(row, col)].abs());
                }
            }
        }
        let (r, pc, _) = best;
        dropped[r] = true;
        used[pc] = true;
        let piv = k.column(pc).clone_owned();
        for col in (0..k.ncols()).filter(|&c| !used[c]) {
            let f = k[(r, col)] / piv[r];
            k.column_mut(col).axpy(-f, &piv, 1.0);
        }
    }
    let kept: Vec<usize> = (0..dim).filter(|&i| !dropped[i]).collect();
    let mut slot = vec![usize::MAX; dim];
    for (s, &i) in kept.iter().enumerate() {
        slot[i] = s;
    }
    let restrict = |m: &SparseSym| SparseSym {
        entries: m
            .entries
            .iter()
            .filter(|&&(i, j, _)| !dropped[i] && !dropped[j])
            .map(|&(i, j, v)| (slot[i], slot[j], v))
            .collect(),
    };
    let a: Vec<SparseSym> = a.iter().map(restrict).collect();
    if a.iter().any(|m| m.entries.is_empty()) {
        return Err(QmcError::Consistency("a moment variable vanished from the reduced moment matrix".into()));
    }
    Ok((kept, restrict(&c), a))
}

#[derive(Clone, Debug, Serialize)]
pub struct SDPSolution {
    pub value: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub basis_size: usize,
    pub free_variables: usize,
    #[serde(skip)]
    pub moments: Vec<f64>,
}

pub fn solve(sdp: &MomentSDP, opts: &SolverOptions) -> Result<SDPSolution> {
    let red = sdp.reduce()?;
    let r = solver::solve_factored(&red.problem, Some(&red.factor), opts)?;
    let off = red.objective_offset;
    Ok(SDPSolution {
        value: 0.5 * (r.primal_objective + r.dual_objective) + off,
        primal_objective: r.primal_objective + off,
        dual_objective: r.dual_objective + off,
        gap: r.relative_gap,
        primal_residual: r.primal_residual,
        dual_residual: r.dual_residual,
        status: r.status,
        iterations: r.iterations,
        basis_size: sdp.basis_size(),
        free_variables: red.free.len(),
        moments: red.moment_vector(&r.y),
    })
}

/// Writes the reduced problem in SDPA sparse format. Its optimum plus
/// `objective_offset` of [`MomentSDP::reduce`] is the relaxation value, with
/// the SDPA minimisation sign flipped.
pub fn emit_sdpa(sdp: &MomentSDP, path: &Path) -> Result<ReducedSdp> {
    let red = sdp.reduce()?;
    std::fs::write(path, SdpaData::from_problem(&red.problem).to_text())?;
    Ok(red)
}

/// `(alpha_1, ..., alpha_up_to)`.
pub fn relaxation_series(g: &GraphSpec, d: usize, up_to: usize, opts: &SolverOptions) -> Result<Vec<SDPSolution>> {
    (1..=up_to).map(|l| solve(&build_relaxation(g, d, l, None)?, opts)).collect()
}
