//! Acceptance harness: one line per criterion.
//!
//! `DEVIATION` marks a check that was run faithfully but whose reference
//! value is known to disagree with the computed one for a documented reason;
//! only `FAIL` makes the process exit nonzero.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num::BigUint;
use qmc_core::bases::{all_family_reports, low_degree_independence};
use qmc_core::characters::{eta, gamma};
use qmc_core::exact_solvers::{
    bipartite_max, bipartite_params, clique_max, delta, e_max, star_block_spectrum, star_max, BipartiteMode, Triple,
};
use qmc_core::graph::GraphSpec;
use qmc_core::linalg::{lanczos_max, LanczosOptions};
use qmc_core::lr::lr_expand;
use qmc_core::npo_sdp::{build_relaxation, solve, MomentSDP, SolveStatus, SolverOptions};
use qmc_core::oracle::gellmann::{expected_sign_value, swap_residual};
use qmc_core::oracle::{
    gellmann_basis, hamiltonian, irrep, isotypic_projector, max_eigenvalue, verify_degree_relation, Method,
};
use qmc_core::partitions::{
    balanced, content_sum, dim_gl, dim_sn, partitions_of, skew_content_sum, Partition, SkewShape,
};

use common::{concatenations, merged, rat, TABLE};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Deviation,
}

struct Verdict {
    status: Status,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Verdict {
    Verdict { status: Status::Pass, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict { status: Status::Fail, detail: detail.into() }
}

/// Turns failed checks into a `FAIL` verdict with the first few messages.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn verdict(self, summary: impl Into<String>) -> Verdict {
        if self.failures.is_empty() {
            pass(format!("{} ({} checks)", summary.into(), self.count))
        } else {
            let shown: Vec<_> = self.failures.iter().take(3).cloned().collect();
            fail(format!("{} of {} checks failed: {}", self.failures.len(), self.count, shown.join("; ")))
        }
    }
}

fn p(v: &[usize]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn oracle(g: &GraphSpec, d: usize) -> f64 {
    max_eigenvalue(&hamiltonian(g, d).unwrap(), Method::Auto).unwrap()
}

fn within_budget(v: Verdict, elapsed: Duration, budget: Option<Duration>) -> Verdict {
    match budget {
        Some(b) if v.status != Status::Fail && elapsed > b => fail(format!(
            "{} but took {:.1} s, over the {:.0} s budget",
            v.detail,
            elapsed.as_secs_f64(),
            b.as_secs_f64()
        )),
        _ => v,
    }
}

// 1 -------------------------------------------------------------------------

fn bipartite_6_3_4() -> Verdict {
    let mut c = Checks::default();
    let want = Triple { lambda: p(&[2, 2, 1, 1]), mu: p(&[2, 1]), nu: p(&[2, 1]) };
    for mode in [BipartiteMode::Theorem, BipartiteMode::Enumerate] {
        let r = bipartite_max(6, 3, 4, mode).unwrap();
        c.check(r.value == 28, || format!("{mode:?} value {}", r.value));
        c.check(r.witness == want, || format!("{mode:?} witness {:?}", r.witness));
    }
    let op = hamiltonian(&GraphSpec::complete_bipartite(3, 3), 4).unwrap();
    let top = max_eigenvalue(&op, Method::Dense).unwrap();
    c.check(op.dim == 4096, || format!("dimension {}", op.dim));
    c.check((top - 28.0).abs() < 1e-8, || format!("dense maximum {top}"));
    c.verdict(format!("value 28 in both modes, dense {}x{} maximum {top:.12}", op.dim, op.dim))
}

// 2 -------------------------------------------------------------------------

fn bipartite_10_5_5() -> Verdict {
    let mut c = Checks::default();
    let e = bipartite_max(10, 5, 5, BipartiteMode::Enumerate).unwrap();
    c.check(e.value == 72, || format!("enumerate {}", e.value));
    let want = Triple { lambda: p(&[2, 2, 2, 2, 2]), mu: p(&[2, 2, 1]), nu: p(&[2, 2, 1]) };
    c.check(e.witness == want, || format!("witness {:?}", e.witness));
    let m = bipartite_max(10, 5, 5, BipartiteMode::Merged).unwrap();
    c.check(m.value == 70, || format!("merged {}", m.value));
    c.verdict(format!("enumerate {} at {}, merged {}", e.value, e.witness.lambda, m.value))
}

// 3 -------------------------------------------------------------------------

fn clique_exactness() -> Verdict {
    let mut c = Checks::default();
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for d in 2..=4 {
            let (v, _) = clique_max(n, d).unwrap();
            let o = oracle(&GraphSpec::clique(n), d);
            worst = worst.max((v as f64 - o).abs());
            c.check((v as f64 - o).abs() < 1e-8, || format!("K_{n} d={d}: {v} vs {o}"));
        }
    }
    c.verdict(format!("max deviation {worst:.2e}"))
}

// 4 -------------------------------------------------------------------------

fn eigenvalue_set(xs: &[f64]) -> BTreeSet<i64> {
    xs.iter().map(|x| x.round() as i64).collect()
}

fn star_exactness() -> Verdict {
    let mut c = Checks::default();
    for n in 2..=7 {
        for d in 2..=4 {
            let v = star_max(n, d).unwrap();
            let o = oracle(&GraphSpec::star(n), d);
            c.check((v as f64 - o).abs() < 1e-8, || format!("star_{n} d={d}: {v} vs {o}"));
            // 2(n+d-2) needs d <= n; beyond that the maximum is 4(n-1)
            let formula = if d <= n { 2 * (n + d - 2) } else { 4 * (n - 1) } as i64;
            c.check(v == formula, || format!("star_{n} d={d}: {v} vs closed form {formula}"));
        }
        let g = GraphSpec::star(n);
        for lambda in partitions_of(n, 4) {
            let block = irrep(&lambda).unwrap().hamiltonian_spectrum(&g).unwrap();
            let got = eigenvalue_set(&block);
            let near = block.iter().all(|x| (x - x.round()).abs() < 1e-8);
            let want = star_block_spectrum(&lambda, n, 4).unwrap().eigenvalues;
            c.check(near && got == want, || format!("{lambda}: irrep {got:?} vs formula {want:?}"));
        }
    }
    for lambda in [p(&[4, 2, 2, 2, 2]), p(&[5, 5, 1, 1])] {
        let s = star_block_spectrum(&lambda, 12, 5).unwrap().eigenvalues;
        c.check(s == BTreeSet::from([16, 28]), || format!("{lambda}: {s:?}"));
        let dim = dim_sn(&lambda);
        if dim <= BigUint::from(5000u32) {
            let block = irrep(&lambda).unwrap().hamiltonian_spectrum(&GraphSpec::star(12)).unwrap();
            c.check(eigenvalue_set(&block) == s, || format!("{lambda}: irrep spectrum differs"));
        }
    }
    let base = c.verdict("closed forms match the oracle and Young's orthogonal form; n=12 fixtures {16,28}");
    if base.status == Status::Fail {
        return base;
    }
    // The printed n = 21 values sit at half the scale of every other star
    // spectrum: the same reference lists {16} for (7,7,7), whose block is 32.
    let mu = star_block_spectrum(&p(&[9, 6, 5, 1]), 21, 4).unwrap().eigenvalues;
    let seven = star_block_spectrum(&p(&[7, 7, 7]), 21, 3).unwrap().eigenvalues;
    let printed: BTreeSet<i64> = [12, 16, 18, 23].into();
    let halved: BTreeSet<i64> = mu.iter().map(|v| v / 2).collect();
    if mu == printed {
        return base;
    }
    if halved == printed && seven == BTreeSet::from([32]) && mu.iter().all(|v| v % 2 == 0) {
        return Verdict {
            status: Status::Deviation,
            detail: format!(
                "{}; n=21 (9,6,5,1) gives {mu:?}, exactly twice the reference {{12,16,18,23}} \
                 (reference also lists (7,7,7) as {{16}} where the block value is {seven:?})",
                base.detail
            ),
        };
    }
    fail(format!("n=21 (9,6,5,1) gives {mu:?}, reference {{12,16,18,23}}"))
}

// 5 -------------------------------------------------------------------------

fn schur_weyl() -> Verdict {
    let mut c = Checks::default();
    for n in 1..=10 {
        for d in 1..=5 {
            let total: BigUint = partitions_of(n, d).iter().map(|l| dim_gl(l, d) * dim_sn(l)).sum();
            let want = BigUint::from(d).pow(n as u32);
            c.check(total == want, || format!("n={n} d={d}: {total} vs {want}"));
        }
    }
    c.verdict("sum of dim_gl * dim_sn equals d^n for n <= 10, d <= 5")
}

// 6 -------------------------------------------------------------------------

fn relation_suite() -> Verdict {
    let mut c = Checks::default();
    for d in 2..=4 {
        let r = verify_degree_relation(d).unwrap();
        c.check(r.tensor_residual < 1e-12, || format!("d={d}: antisymmetrizer residual {:e}", r.tensor_residual));
        c.check((r.sign_irrep_norm - expected_sign_value(d)).abs() < 1e-9, || {
            format!("d={d}: sign irrep value {}", r.sign_irrep_norm)
        });
        let res = swap_residual(d, &gellmann_basis(d));
        c.check(res < 1e-13, || format!("d={d}: Gell-Mann residual {res:e}"));
        for n in 2..=6 {
            let r = low_degree_independence(n, d).unwrap();
            c.check(r.is_independent(), || format!("{r:?}"));
        }
    }
    let mut gaps = Vec::new();
    for n in 3..=6 {
        for r in all_family_reports(n).unwrap() {
            c.check(r.is_independent(), || format!("{} n={n} not independent: {r:?}", r.name));
            let printed_quartic = r.degree == 4 && !r.name.contains("completed");
            if printed_quartic && !r.spans() {
                gaps.push(format!("{} n={n}: {} of {}", r.name, r.rank, r.ambient_rank));
            } else {
                c.check(r.spans(), || format!("{} n={n} does not span: {r:?}", r.name));
            }
        }
    }
    let base = c.verdict("degree relation, Gell-Mann identity, low-degree independence, B2/B3 bases");
    if base.status == Status::Fail || gaps.is_empty() {
        return base;
    }
    Verdict {
        status: Status::Deviation,
        detail: format!(
            "{}; printed degree-4 families are independent but span only {}; one 3+3 combination \
             (ij)(ik)(pq)(qr) is missing and the completed families are bases",
            base.detail,
            gaps.join(", ")
        ),
    }
}

// 7 -------------------------------------------------------------------------

/// Top eigenvector of `H_G^d` by Lanczos.
fn top_state(g: &GraphSpec, d: usize) -> (f64, Vec<f64>) {
    let op = hamiltonian(g, d).unwrap();
    let r = lanczos_max(op.dim, |x, y| op.matvec(x, y), LanczosOptions::default()).unwrap();
    (r.value, r.vector)
}

/// The oracle state induces a feasible moment vector with the oracle value.
fn moment_check(c: &mut Checks, sdp: &MomentSDP, psi: &[f64], value: Option<f64>, label: &str) {
    let x = sdp.moment_vector_of_state(psi).unwrap();
    let viol = sdp.constraint_violation(&x);
    c.check(viol < 1e-10, || format!("{label}: oracle moment vector violates constraints by {viol:e}"));
    if let Some(v) = value {
        let obj = sdp.objective_value(&x);
        c.check((obj - v).abs() < 1e-6, || format!("{label}: oracle moments give {obj}, oracle {v}"));
    }
}

fn connected(n: usize, seed: u64) -> GraphSpec {
    (seed..).map(|s| GraphSpec::random(n, 0.6, 0.1, 1.0, s)).find(|g| g.is_connected() && !g.edges.is_empty()).unwrap()
}

fn npo_hierarchy() -> Verdict {
    let mut c = Checks::default();
    let opts = SolverOptions::default();
    let mut top_err: f64 = 0.0;
    let mut instances = 0;
    for d in [2, 3] {
        for i in 0..20u64 {
            let n = 2 + (i % 4) as usize;
            let g = GraphSpec::random(n, 0.7, -0.5, 1.0, 1000 + 97 * i + d as u64);
            let (o, psi) = top_state(&g, d);
            let mut prev = f64::INFINITY;
            for ell in 1..n {
                let sdp = build_relaxation(&g, d, ell, None).unwrap();
                let s = solve(&sdp, &opts).unwrap();
                let label = format!("seed {i} n={n} d={d} level {ell}");
                instances += 1;
                c.check(s.status == SolveStatus::Optimal, || format!("{label}: {:?}", s.status));
                c.check(s.value >= o - 1e-5, || format!("{label}: {} below oracle {o}", s.value));
                c.check(s.value <= prev + 1e-6, || {
                    format!("{label}: {} above level {} value {prev}", s.value, ell - 1)
                });
                prev = s.value;
                moment_check(&mut c, &sdp, &psi, Some(o), &label);
                if ell == n - 1 {
                    top_err = top_err.max((s.value - o).abs());
                    c.check((s.value - o).abs() < 1e-5, || format!("{label}: {} vs oracle {o}", s.value));
                }
            }
        }
    }
    let mut lvl2_err: f64 = 0.0;
    let mut lvl2 = 0;
    for (n, count, seed0) in [(5usize, 10u64, 5000u64), (6, 10, 6000), (7, 10, 7000)] {
        for i in 0..count {
            let g = connected(n, seed0 + 31 * i);
            let (o, psi) = top_state(&g, 3);
            let sdp = build_relaxation(&g, 3, 2, None).unwrap();
            let s = solve(&sdp, &opts).unwrap();
            let label = format!("level 2 n={n} graph {i}");
            c.check(s.status == SolveStatus::Optimal, || format!("{label}: {:?}", s.status));
            c.check((s.value - o).abs() < 1e-4, || format!("{label}: {} vs oracle {o}", s.value));
            moment_check(&mut c, &sdp, &psi, Some(o), &label);
            lvl2_err = lvl2_err.max((s.value - o).abs());
            if n < 7 {
                lvl2 += 1;
            }
        }
    }
    c.verdict(format!(
        "{instances} seeded series solves (top level error {top_err:.1e}); level 2, d=3 on {lvl2} connected graphs \
         n=5,6 plus 10 at n=7 (max error {lvl2_err:.1e})"
    ))
}

// 8 -------------------------------------------------------------------------

fn localized_hierarchy() -> Verdict {
    let mut c = Checks::default();
    let opts = SolverOptions::default();
    let mut worst: f64 = 0.0;
    let mut blocks = 0;
    for n in 2..=5 {
        let g = GraphSpec::random(n, 0.8, -0.3, 1.0, 800 + n as u64);
        for d in [2, 3] {
            let op = hamiltonian(&g, d).unwrap();
            let seed: Vec<f64> = (0..op.dim).map(|i| ((i * 7919 + 13) % 101) as f64 / 101.0 - 0.5).collect();
            for lambda in partitions_of(n, d) {
                let block = irrep(&lambda).unwrap().hamiltonian_spectrum(&g).unwrap();
                let top = *block.last().unwrap();
                let sdp = build_relaxation(&g, d, n - 1, Some(&lambda)).unwrap();
                let s = solve(&sdp, &opts).unwrap();
                let label = format!("n={n} d={d} {lambda}");
                c.check((s.value - top).abs() < 1e-4, || format!("{label}: {} vs block maximum {top}", s.value));
                worst = worst.max((s.value - top).abs());
                blocks += 1;
                // any state in the isotypic component satisfies the localizing constraints
                let mut psi = isotypic_projector(&lambda, n, d).unwrap().apply(&seed).unwrap();
                let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
                psi.iter_mut().for_each(|x| *x /= norm);
                moment_check(&mut c, &sdp, &psi, None, &label);
            }
        }
    }
    c.verdict(format!("{blocks} localized blocks, max error {worst:.1e}"))
}

// 9 -------------------------------------------------------------------------

fn separation_suites() -> Verdict {
    let mut c = Checks::default();
    for n in 2..=10 {
        for d in 2..=4 {
            let mut seen: HashMap<Vec<String>, Partition> = HashMap::new();
            for lambda in partitions_of(n, d) {
                let key: Vec<String> = (2..=d.min(n)).map(|k| gamma(k, &lambda).unwrap().to_string()).collect();
                let clash = seen.insert(key, lambda.clone());
                c.check(clash.is_none(), || format!("n={n} d={d}: {clash:?} and {lambda} share gamma values"));
            }
        }
    }
    for n in 2..=15 {
        let shapes = partitions_of(n, 3);
        let spectra: Vec<BTreeSet<i64>> =
            shapes.iter().map(|l| star_block_spectrum(l, n, 3).unwrap().eigenvalues).collect();
        let etas: Vec<i64> = shapes.iter().map(|l| eta(l, 3).unwrap()).collect();
        for a in 0..shapes.len() {
            for b in 0..shapes.len() {
                if a == b {
                    continue;
                }
                c.check(spectra[a] != spectra[b], || format!("{} and {} share a star spectrum", shapes[a], shapes[b]));
                let both = etas[a] == etas[b] && spectra[a].is_subset(&spectra[b]);
                c.check(!both, || format!("{} and {}: clique and star data do not separate", shapes[a], shapes[b]));
            }
        }
    }
    let (l, m) = (p(&[3, 3, 3]), p(&[6, 2, 1]));
    let sl = star_block_spectrum(&l, 9, 3).unwrap().eigenvalues;
    let sm = star_block_spectrum(&m, 9, 3).unwrap().eigenvalues;
    c.check(sl == BTreeSet::from([16]), || format!("(3,3,3): {sl:?}"));
    c.check(sm == BTreeSet::from([6, 16, 20]), || format!("(6,2,1): {sm:?}"));
    c.check(eta(&l, 3).unwrap() == 72 && eta(&m, 3).unwrap() == 48, || "eta of (3,3,3)/(6,2,1)".into());
    for (a, b, v) in [(&[4, 1, 1][..], &[3, 3][..], 24), (&[5, 2, 2][..], &[4, 4, 1][..], 60)] {
        let (ea, eb) = (eta(&p(a), 3).unwrap(), eta(&p(b), 3).unwrap());
        c.check(ea == v && eb == v, || format!("eta {a:?}={ea}, {b:?}={eb}, want {v}"));
    }
    c.verdict("gamma vectors injective (n <= 10, d <= 4); 3-row star separation (n <= 15); fixtures")
}

// 10 ------------------------------------------------------------------------

fn bipartite_structure() -> Verdict {
    let mut c = Checks::default();
    for n in 2..=12usize {
        for k in 1..=4.min(n - 1) {
            for (mu, nu) in concatenations(n, k) {
                let e = mu.height() as i64;
                let lambda = Partition::new([mu.parts(), nu.parts()].concat()).unwrap();
                let v = delta(&Triple { lambda: lambda.clone(), mu, nu }).unwrap();
                c.check(v == 2 * k as i64 * (e + n as i64 - k as i64), || format!("concatenation {lambda}: {v}"));
            }
            for lambda in partitions_of(n, n) {
                for (mu, nu, _) in lr_expand(&lambda, k).unwrap() {
                    let skew = SkewShape::new(lambda.clone(), mu.clone()).unwrap();
                    let want = 2 * (k * (n - k)) as i64 - 2 * skew_content_sum(&skew) + 2 * content_sum(&nu);
                    let t = Triple { lambda: lambda.clone(), mu, nu };
                    let v = delta(&t).unwrap();
                    c.check(v == want, || format!("content sums at {t:?}: {v} vs {want}"));
                }
            }
            for e in 1..=n - k {
                for f in 1..=k {
                    let best = partitions_of(n - k, e)
                        .iter()
                        .filter(|m| m.height() == e)
                        .flat_map(|mu| {
                            partitions_of(k, f).into_iter().filter(|v| v.height() == f).map(move |nu| merged(mu, &nu))
                        })
                        .max()
                        .unwrap();
                    let bal = merged(&balanced(n - k, e).unwrap(), &balanced(k, f).unwrap());
                    c.check(best == bal, || format!("({n},{k}) heights {e},{f}: balanced {bal} < {best}"));
                }
            }
            for d in 2..=n {
                let (mut any, mut full) = (i64::MIN, i64::MIN);
                for mu in partitions_of(n - k, d) {
                    for nu in partitions_of(k, d - mu.height().min(d)) {
                        let v = merged(&mu, &nu);
                        any = any.max(v);
                        if mu.height() + nu.height() == d {
                            full = full.max(v);
                        }
                    }
                }
                c.check(any == full, || format!("({n},{k},{d}): full height {full} < {any}"));
            }
        }
    }
    for (n, k, d, e0, e1, (a, b), emax, frak) in TABLE {
        let q = bipartite_params(n, k, d).unwrap();
        let row_ok = (q.e0, q.e1) == (e0, e1)
            && q.e_star_real == rat(a, b)
            && q.frak_e == frak
            && e_max(n, k, d).unwrap() == emax;
        c.check(row_ok, || format!("table row ({n},{k},{d})"));
    }
    c.verdict("concatenation value, content sums, balanced and full-height optimality, 15 table rows")
}

fn main() {
    type Criterion = (usize, &'static str, fn() -> Verdict, Option<u64>);
    let criteria: [Criterion; 10] = [
        (1, "bipartite (6,3,4) = 28 with dense oracle", bipartite_6_3_4, Some(60)),
        (2, "bipartite (10,5,5): enumerate 72, merged 70", bipartite_10_5_5, Some(10)),
        (3, "clique maxima vs oracle", clique_exactness, Some(300)),
        (4, "star maxima and per-irrep spectra", star_exactness, None),
        (5, "Schur-Weyl dimension identity", schur_weyl, Some(1)),
        (6, "relation suite", relation_suite, None),
        (7, "moment relaxation hierarchy", npo_hierarchy, None),
        (8, "localized hierarchy", localized_hierarchy, None),
        (9, "separation suites", separation_suites, None),
        (10, "bipartite structure identities and height table", bipartite_structure, None),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, f, budget) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            fail(format!("panicked: {msg}"))
        });
        let elapsed = t.elapsed();
        let v = within_budget(v, elapsed, budget.map(Duration::from_secs));
        let tag = match v.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Deviation => "DEVIATION",
        };
        if v.status == Status::Fail {
            failed += 1;
        }
        println!("[{tag}] {id:>2}. {name} ({:.1} s): {}", elapsed.as_secs_f64(), v.detail);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
