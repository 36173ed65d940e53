//! Subcommand implementations.

use std::path::Path;

use num::{BigInt, BigRational, BigUint};
use qmc_core::bases::{all_family_reports, low_degree_independence, FamilyReport};
use qmc_core::characters::{chi, chi_transposition, eta, gamma, gamma3_closed_form, ConjugacyClass};
use qmc_core::exact_solvers::{
    bipartite_block_spectrum, bipartite_max, clique_block_eigenvalue, clique_max, star_block_spectrum, star_max,
    BipartiteMode,
};
use qmc_core::graph::GraphSpec;
use qmc_core::linalg;
use qmc_core::lr::lr_coefficient;
use qmc_core::npo_sdp::{self, BasisKind, SolverOptions};
use qmc_core::oracle::gellmann::{expected_sign_value, swap_residual};
use qmc_core::oracle::tensor::{isotypic_projector_capped, max_eigenvalue_with};
use qmc_core::oracle::{gellmann_basis, hamiltonian, max_eigenvalue, verify_degree_relation, Method};
use qmc_core::partitions::{dim_gl, dim_sn, partitions_of, Partition};
use qmc_core::QmcError;
use serde_json::{json, Value};

use crate::output::{big, float, to_value, CliError, ErrorKind, Outcome};
use crate::{Command, RunConfig};

type Res = Result<Outcome, CliError>;

fn partition(flag: &str, s: &str) -> Result<Partition, CliError> {
    s.parse::<Partition>().map_err(|e| CliError {
        kind: ErrorKind::Usage,
        tag: "invalid-partition",
        message: format!("--{flag} {s:?}: {e}"),
    })
}

fn opt_partition(flag: &str, s: &Option<String>) -> Result<Option<Partition>, CliError> {
    s.as_deref().map(|s| partition(flag, s)).transpose()
}

fn parse_enum<T: std::str::FromStr<Err = QmcError>>(s: &str) -> Result<T, CliError> {
    s.parse::<T>().map_err(CliError::from)
}

fn read_graph(path: &Path) -> Result<GraphSpec, CliError> {
    GraphSpec::read(path).map_err(|e| CliError {
        kind: ErrorKind::Usage,
        tag: "unreadable-graph",
        message: e.to_string(),
    })
}

fn graph_inputs(path: &Path, g: &GraphSpec) -> Value {
    json!({ "graph": path.display().to_string(), "vertices": g.n, "edges": g.edges.len() })
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Res {
    match cmd {
        Command::Eta { partition: p, d } => {
            let lambda = partition("partition", p)?;
            let d = d.unwrap_or(lambda.height().max(1));
            let v = eta(&lambda, d)?;
            Ok(Outcome::new(json!({ "partition": lambda, "d": d }), json!({ "eta": v })))
        }
        Command::Char { partition: p, class } => {
            let lambda = partition("partition", p)?;
            let ct = partition("class", class)?;
            let v = chi(&lambda, &ConjugacyClass::new(ct.clone()))?;
            Ok(Outcome::new(json!({ "partition": lambda, "class": ct }), json!({ "chi": big(v) })))
        }
        Command::Gamma { k, partition: p } => {
            let lambda = partition("partition", p)?;
            let v = gamma(*k, &lambda)?;
            Ok(Outcome::new(json!({ "k": k, "partition": lambda }), json!({ "gamma": big(v) })))
        }
        Command::Lr { lambda, mu, nu } => {
            let (l, m, v) = (partition("lambda", lambda)?, partition("mu", mu)?, partition("nu", nu)?);
            let c = lr_coefficient(&l, &m, &v)?;
            Ok(Outcome::new(json!({ "lambda": l, "mu": m, "nu": v }), json!({ "c": big(c) })))
        }
        Command::Clique { n, d, irrep } => {
            let inputs = json!({ "n": n, "d": d, "irrep": opt_partition("irrep", irrep)? });
            if let Some(lambda) = opt_partition("irrep", irrep)? {
                if lambda.weight() != *n {
                    return Err(QmcError::WeightMismatch(format!("{lambda} is not a partition of {n}")).into());
                }
                let v = clique_block_eigenvalue(&lambda, *d)?;
                return Ok(Outcome::new(inputs, json!({ "lambda": lambda, "eigenvalues": [v] })));
            }
            let (value, witness) = clique_max(*n, *d)?;
            Ok(Outcome::new(inputs, json!({ "value": value, "witness": { "lambda": witness } })))
        }
        Command::Star { n, d, irrep } => {
            let inputs = json!({ "n": n, "d": d, "irrep": opt_partition("irrep", irrep)? });
            if let Some(lambda) = opt_partition("irrep", irrep)? {
                let s = star_block_spectrum(&lambda, *n, *d)?;
                return Ok(Outcome::new(inputs, json!({ "lambda": s.lambda, "eigenvalues": s.eigenvalues })));
            }
            Ok(Outcome::new(inputs, json!({ "value": star_max(*n, *d)? })))
        }
        Command::Bipartite { n, k, d, mode, irrep } => {
            let inputs = json!({ "n": n, "k": k, "d": d, "mode": mode, "irrep": opt_partition("irrep", irrep)? });
            if let Some(lambda) = opt_partition("irrep", irrep)? {
                let s = bipartite_block_spectrum(&lambda, *n, *k, *d)?;
                return Ok(Outcome::new(inputs, json!({ "lambda": s.lambda, "eigenvalues": s.eigenvalues })));
            }
            let m: BipartiteMode = parse_enum(mode)?;
            let r = bipartite_max(*n, *k, *d, m)?;
            Ok(Outcome::new(inputs, json!({ "value": r.value, "witness": r.witness, "params": r.params })))
        }
        Command::Brute { graph, d, irrep, method } => brute(cfg, graph, *d, irrep, method),
        Command::Npo { graph, d, level, irrep, emit, solve, basis } => {
            npo(cfg, graph, *d, *level, irrep, emit.as_deref(), *solve, basis)
        }
        Command::Verify { suite, d } => verify(suite, *d),
        Command::Gen { family, n, k, p, out } => gen(cfg, family, *n, *k, *p, out.as_deref()),
    }
}

fn brute(cfg: &RunConfig, path: &Path, d: usize, irrep_flag: &Option<String>, method: &str) -> Res {
    let g = read_graph(path)?;
    let m: Method = parse_enum(method)?;
    let op = hamiltonian(&g, d)?;
    let mut inputs = graph_inputs(path, &g);
    inputs["d"] = json!(d);
    inputs["method"] = json!(method);
    let Some(lambda) = opt_partition("irrep", irrep_flag)? else {
        let v = max_eigenvalue_with(&op, m, cfg.dense_cap, Default::default())?;
        inputs["irrep"] = Value::Null;
        return Ok(Outcome::new(inputs, json!({ "value": float(v), "dimension": op.dim })));
    };
    inputs["irrep"] = to_value(&lambda);
    if lambda.weight() != g.n {
        return Err(QmcError::WeightMismatch(format!("{lambda} is not a partition of {}", g.n)).into());
    }
    if lambda.height() > d {
        return Err(QmcError::InvalidHeight(format!("{lambda} has more than {d} rows")).into());
    }
    let use_projector = m != Method::Iterative && g.n <= cfg.projector_cap && op.dim <= cfg.dense_cap;
    let (value, how) = if use_projector {
        (projected_max(cfg, &g, d, &op, &lambda)?, "isotypic-projector")
    } else {
        let block = qmc_core::oracle::irrep::irrep_capped(&lambda, cfg.matrix_cap)?.hamiltonian_spectrum(&g)?;
        (block.last().copied().unwrap_or(0.0), "irrep-block")
    };
    Ok(Outcome::new(
        inputs,
        json!({ "value": float(value), "dimension": op.dim, "block": how, "multiplicity": big(dim_gl(&lambda, d)) }),
    ))
}

/// Top eigenvalue of `H` on the image of `P_lambda`; the complement is pushed
/// below every eigenvalue of `H` by a shift of `4 sum |w| + 1`.
fn projected_max(
    cfg: &RunConfig,
    g: &GraphSpec,
    d: usize,
    op: &qmc_core::oracle::TensorHamiltonian,
    lambda: &Partition,
) -> Result<f64, CliError> {
    let proj = isotypic_projector_capped(lambda, g.n, d, cfg.projector_cap)?;
    let dim = op.dim;
    let pm = proj.dense(g.n, cfg.dense_cap)?;
    let shift = 4.0 * g.total_abs_weight() + 1.0;
    let mut m = vec![0.0; dim * dim];
    let mut col = vec![0.0; dim];
    for j in 0..dim {
        op.matvec(&pm[j * dim..(j + 1) * dim], &mut col);
        for i in 0..dim {
            let id = if i == j { 1.0 } else { 0.0 };
            m[j * dim + i] = col[i] - shift * (id - pm[j * dim + i]);
        }
    }
    let w = linalg::sym_eigvals(m, dim)?;
    Ok(w[dim - 1])
}

#[allow(clippy::too_many_arguments)]
fn npo(
    cfg: &RunConfig,
    path: &Path,
    d: usize,
    level: usize,
    irrep_flag: &Option<String>,
    emit: Option<&Path>,
    solve: bool,
    basis: &str,
) -> Res {
    let g = read_graph(path)?;
    let lambda = opt_partition("irrep", irrep_flag)?;
    let kind: BasisKind = parse_enum(basis)?;
    let mut inputs = graph_inputs(path, &g);
    inputs["d"] = json!(d);
    inputs["level"] = json!(level);
    inputs["irrep"] = to_value(&lambda);
    inputs["basis"] = json!(basis);
    inputs["emit"] = to_value(&emit.map(|p| p.display().to_string()));
    let sdp = npo_sdp::build_relaxation_with(&g, d, level, lambda.as_ref(), kind)?;
    let mut result = json!({ "basis_size": sdp.basis.len(), "variables": sdp.variables.len() });
    if let Some(out) = emit {
        let red = npo_sdp::emit_sdpa(&sdp, out)?;
        result["sdpa"] = json!({
            "path": out.display().to_string(),
            "block_size": red.problem.dim,
            "constraints": red.problem.a.len(),
            "objective_offset": float(red.objective_offset),
        });
    }
    if emit.is_none() || solve {
        let opts = SolverOptions { gap_tol: cfg.gap_tol, cap: cfg.solver_cap, ..SolverOptions::default() };
        let s = npo_sdp::solve(&sdp, &opts)?;
        result["value"] = float(s.value);
        result["gap"] = float(s.gap);
        result["status"] = to_value(&s.status);
        result["iterations"] = json!(s.iterations);
        result["primal_residual"] = float(s.primal_residual);
        result["dual_residual"] = float(s.dual_residual);
        result["max_iter"] = json!(opts.max_iter);
    }
    Ok(Outcome::new(inputs, result))
}

struct Check {
    name: String,
    pass: bool,
    detail: Value,
}

fn check(name: impl Into<String>, pass: bool, detail: Value) -> Check {
    Check { name: name.into(), pass, detail }
}

fn family_check(r: &FamilyReport, need_span: bool) -> Check {
    let pass = r.is_independent() && (!need_span || r.spans());
    check(
        format!("{} n={}", r.name, r.n),
        pass,
        json!({ "size": r.size, "rank": r.rank, "ambient_rank": r.ambient_rank, "spans": r.spans() }),
    )
}

fn relations_suite(d: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let rep = verify_degree_relation(d)?;
    out.push(check(
        format!("antisymmetrizer vanishes on {} letters", d + 1),
        rep.tensor_residual < 1e-12,
        json!({ "residual": float(rep.tensor_residual) }),
    ));
    out.push(check(
        "antisymmetrizer is nonzero on the sign irrep",
        (rep.sign_irrep_norm - expected_sign_value(d)).abs() < 1e-9,
        json!({ "value": float(rep.sign_irrep_norm) }),
    ));
    let res = swap_residual(d, &gellmann_basis(d));
    out.push(check("swap as Gell-Mann sum", res < 1e-13, json!({ "residual": float(res) })));
    for n in 2..=6 {
        let r = low_degree_independence(n, d)?;
        out.push(family_check(&r, false));
    }
    if d == 3 || d == 4 {
        for n in 3..=6 {
            for r in all_family_reports(n)? {
                if r.d != d {
                    continue;
                }
                // the printed degree-four families are checked for independence only
                let need_span = r.degree < 4 || r.name.contains("completed");
                out.push(family_check(&r, need_span));
            }
        }
    }
    Ok(out)
}

fn characters_suite(d: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let mut worst_eta = 0i64;
    let mut worst_g3 = 0usize;
    for n in 2..=9 {
        for lambda in partitions_of(n, n) {
            let pairs = (n * (n - 1)) as i64;
            let from_chi = chi_transposition(&lambda)? * rat(pairs);
            let e = eta(&lambda, lambda.height())?;
            if from_chi != rat(pairs - e) {
                worst_eta += 1;
            }
            if n >= 3 && gamma(3, &lambda)? != gamma3_closed_form(&lambda, lambda.height().max(d))? {
                worst_g3 += 1;
            }
        }
    }
    out.push(check("eta from the transposition character", worst_eta == 0, json!({ "mismatches": worst_eta })));
    out.push(check("closed form of gamma_3", worst_g3 == 0, json!({ "mismatches": worst_g3 })));
    let mut bad = Vec::new();
    for n in 1..=10 {
        let total: BigUint = partitions_of(n, d).iter().map(|l| dim_gl(l, d) * dim_sn(l)).sum();
        if total != BigUint::from(d).pow(n as u32) {
            bad.push(n);
        }
    }
    out.push(check("Schur-Weyl dimension count", bad.is_empty(), json!({ "failing_n": bad })));
    Ok(out)
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Closed forms against the brute-force oracle on small instances.
fn exact_suite(d: usize) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let dense = |g: &GraphSpec| -> Result<f64, CliError> { Ok(max_eigenvalue(&hamiltonian(g, d)?, Method::Dense)?) };
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        worst = worst.max((clique_max(n, d)?.0 as f64 - dense(&GraphSpec::clique(n))?).abs());
        worst = worst.max((star_max(n, d)? as f64 - dense(&GraphSpec::star(n))?).abs());
    }
    out.push(check("clique and star maxima match the oracle", worst < 1e-8, json!({ "max_error": float(worst) })));
    let mut worst: f64 = 0.0;
    for n in 3..=5 {
        for k in 1..=n / 2 {
            if d >= n {
                continue;
            }
            let v = bipartite_max(n, k, d, BipartiteMode::Enumerate)?.value as f64;
            worst = worst.max((v - dense(&GraphSpec::complete_bipartite(n - k, k))?).abs());
        }
    }
    out.push(check("bipartite maxima match the oracle", worst < 1e-8, json!({ "max_error": float(worst) })));
    Ok(out)
}

fn verify(suite: &str, d: usize) -> Res {
    if !(2..=6).contains(&d) {
        return Err(CliError::usage(format!("--d must lie in 2..=6 (got {d})")));
    }
    let suites: &[&str] = match suite {
        "all" => &["relations", "characters", "exact"],
        "relations" => &["relations"],
        "characters" => &["characters"],
        "exact" => &["exact"],
        other => return Err(CliError::usage(format!("unknown suite {other:?} (relations|characters|exact|all)"))),
    };
    let mut checks = Vec::new();
    for s in suites {
        let found = match *s {
            "relations" => relations_suite(d)?,
            "characters" => characters_suite(d)?,
            _ => exact_suite(d)?,
        };
        checks.extend(found.into_iter().map(|c| (*s, c)));
    }
    let failed = checks.iter().filter(|(_, c)| !c.pass).count();
    let list: Vec<Value> =
        checks.iter().map(|(s, c)| json!({ "suite": s, "name": c.name, "pass": c.pass, "detail": c.detail })).collect();
    let result = json!({
        "all_pass": failed == 0,
        "passed": checks.len() - failed,
        "failed": failed,
        "checks": list,
    });
    let mut o = Outcome::new(json!({ "suite": suite, "d": d }), result);
    if failed > 0 {
        o.exit_code = 1;
    }
    Ok(o)
}

fn gen(cfg: &RunConfig, family: &str, n: usize, k: Option<usize>, p: f64, out: Option<&Path>) -> Res {
    let g = match family {
        "clique" => GraphSpec::clique(n),
        "star" => GraphSpec::star(n),
        "path" => GraphSpec::path(n),
        "cycle" => GraphSpec::cycle(n),
        "complete-bipartite" => {
            let k = k.ok_or_else(|| CliError::usage("complete-bipartite needs --k"))?;
            if k == 0 || k >= n {
                return Err(CliError::usage(format!("--k must lie in 1..{n}")));
            }
            GraphSpec::complete_bipartite(n - k, k)
        }
        "random" => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::usage("--p must lie in [0, 1]"));
            }
            GraphSpec::random(n, p, 0.1, 1.0, cfg.seed)
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown family {other:?} (clique|star|complete-bipartite|path|cycle|random)"
            )))
        }
    };
    let text = g.to_text();
    let inputs = json!({ "family": family, "n": n, "k": k, "p": float(p), "seed": cfg.seed });
    let mut result = json!({ "vertices": g.n, "edges": g.edges.len() });
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::from(QmcError::from(e)))?;
            result["path"] = json!(path.display().to_string());
        }
        None => result["text"] = json!(text),
    }
    Ok(Outcome::new(inputs, result))
}
