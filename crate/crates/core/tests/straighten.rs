use proptest::prelude::*;
use qmc_core::graph::GraphSpec;
use qmc_core::oracle::{evaluate, faithful_irreps, hamiltonian, max_eigenvalue, Method};
use qmc_core::swap_algebra::{
    all_permutations, antisymmetrizer, cycle_sum, element_from, hamiltonian_element, is_good, straighten,
    AlgebraElement, Permutation,
};

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Straightening preserves the image under every irrep of height at most `d`
/// and lands on `(d+1)`-good permutations.
fn certify(x: &AlgebraElement, d: usize) {
    let n = x.n();
    let s = straighten(x, d).unwrap();
    assert!(s.support().all(|p| is_good(p, d)));
    let irreps = faithful_irreps(n, d).unwrap();
    let (a, b) = (evaluate(&irreps, x).unwrap(), evaluate(&irreps, &s).unwrap());
    assert!(max_diff(&a, &b) < 1e-9, "n={n} d={d}");
}

fn element(n: usize) -> impl Strategy<Value = AlgebraElement> {
    let perms = all_permutations(n);
    let count = perms.len();
    prop::collection::vec((0..count, -3i64..=3), 1..8).prop_map(move |terms| {
        let t: Vec<(Permutation, i64)> =
            terms.into_iter().map(|(i, c)| (Permutation::new(perms[i].clone()).unwrap(), c)).collect();
        element_from(n, &t)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_elements_d2(x in element(4)) {
        certify(&x, 2);
    }

    #[test]
    fn random_elements_d3(x in element(5)) {
        certify(&x, 3);
    }
}

#[test]
fn structured_elements() {
    for n in 3..=5 {
        for d in 2..=3 {
            for k in 2..=n {
                certify(&cycle_sum(k - 1, n).unwrap(), d);
            }
            certify(&hamiltonian_element(&GraphSpec::random(n, 0.7, 0.1, 1.0, n as u64)), d);
            if d < n {
                let idx: Vec<usize> = (0..=d).collect();
                assert!(straighten(&antisymmetrizer(&idx, n).unwrap(), d).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn straightened_hamiltonian_keeps_its_spectrum() {
    let g = GraphSpec::cycle(5);
    let o = max_eigenvalue(&hamiltonian(&g, 2).unwrap(), Method::Dense).unwrap();
    let h = straighten(&hamiltonian_element(&g), 2).unwrap();
    let irreps = faithful_irreps(5, 2).unwrap();
    let top = irreps
        .iter()
        .map(|ir| {
            let m = ir.element_matrix(&h).unwrap();
            qmc_core::linalg::sym_eigvals(m.as_slice().to_vec(), ir.dim).unwrap().last().copied().unwrap()
        })
        .fold(f64::MIN, f64::max);
    assert!((top - o).abs() < 1e-9);
}
