//! Symmetric group characters and the scalars by which central elements act.
//!
//! Character values come from the recursive Murnaghan-Nakayama rule on
//! beta-sets (abacus form). Results are cached by `(shape, cycle type)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::{BigInt, BigRational, BigUint, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{QmcError, Result};
use crate::partitions::{binomial, content_sum, dim_sn, factorial, partitions_of, Partition};

/// A conjugacy class of `S_n`, named by its cycle type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjugacyClass {
    pub cycle_type: Partition,
}

impl ConjugacyClass {
    pub fn new(cycle_type: Partition) -> Self {
        ConjugacyClass { cycle_type }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Partition::column(n))
    }

    /// Class of a single `k`-cycle in `S_n`.
    pub fn cycle(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(QmcError::InvalidArgument(format!("no {k}-cycle in S_{n}")));
        }
        let mut parts = vec![k];
        parts.extend(std::iter::repeat_n(1, n - k));
        Ok(Self::new(Partition::from_multiset(parts)))
    }

    pub fn transposition(n: usize) -> Result<Self> {
        Self::cycle(2, n)
    }

    pub fn n(&self) -> usize {
        self.cycle_type.weight()
    }

    /// Number of permutations with this cycle type.
    pub fn size(&self) -> BigUint {
        let mut z = BigUint::one();
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &c in self.cycle_type.parts() {
            *counts.entry(c).or_default() += 1;
            z *= BigUint::from(c);
        }
        for m in counts.values() {
            z *= factorial(*m);
        }
        factorial(self.n()) / z
    }

    /// `(-1)^(n - #cycles)`.
    pub fn sign(&self) -> i32 {
        if (self.n() - self.cycle_type.height()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

type MnKey = (Vec<usize>, Vec<usize>);

fn mn_cache() -> &'static Mutex<HashMap<MnKey, BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<MnKey, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn beta_to_parts(beta: &[usize]) -> Vec<usize> {
    // beta sorted decreasing; part_i = beta_i - (len - 1 - i)
    let h = beta.len();
    let mut parts: Vec<usize> = beta.iter().enumerate().map(|(i, b)| b - (h - 1 - i)).collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}

/// MN recursion: `lambda` as parts, `rho` cycle lengths sorted decreasing.
fn mn(lambda: &[usize], rho: &[usize]) -> BigInt {
    if rho.is_empty() {
        return if lambda.is_empty() { BigInt::one() } else { BigInt::zero() };
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(v) = mn_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let r = rho[0];
    let rest = &rho[1..];
    let h = lambda.len();
    let beta: Vec<usize> = lambda.iter().enumerate().map(|(i, p)| p + (h - 1 - i)).collect();
    let mut total = BigInt::zero();
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let between = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut nb = beta.clone();
        nb[idx] = target;
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let v = mn(&beta_to_parts(&nb), rest);
        if between % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    mn_cache().lock().unwrap().insert(key, total.clone());
    total
}

/// Character value `chi_lambda` on the class `cls`.
pub fn chi(lambda: &Partition, cls: &ConjugacyClass) -> Result<BigInt> {
    if lambda.weight() != cls.n() {
        return Err(QmcError::WeightMismatch(format!(
            "shape {lambda} has weight {} but the class has weight {}",
            lambda.weight(),
            cls.n()
        )));
    }
    let mut rho = cls.cycle_type.parts().to_vec();
    rho.retain(|&c| c > 1);
    let ones = cls.n() - rho.iter().sum::<usize>();
    rho.extend(std::iter::repeat_n(1, ones));
    Ok(mn(lambda.parts(), &rho))
}

/// `chi_lambda((i j)) / chi_lambda(e)`, via the content formula.
pub fn chi_transposition(lambda: &Partition) -> Result<BigRational> {
    let n = lambda.weight();
    if n < 2 {
        return Err(QmcError::InvalidArgument("needs n >= 2".into()));
    }
    let pairs = BigInt::from(binomial(n, 2));
    Ok(BigRational::new(BigInt::from(content_sum(lambda)), pairs))
}

/// Scalar by which the clique Hamiltonian acts on the `lambda` block.
pub fn eta(lambda: &Partition, d: usize) -> Result<i64> {
    if lambda.height() > d {
        return Err(QmcError::InvalidHeight(format!("{lambda} has more than {d} rows")));
    }
    let n = lambda.weight() as i128;
    let d = d as i128;
    let mut v = n * n + d * (d - 1) * (2 * d - 1) / 6;
    for (k, p) in lambda.padded(d as usize).into_iter().enumerate() {
        let t = p as i128 - k as i128;
        v -= t * t;
    }
    v.to_i64().ok_or_else(|| QmcError::Numerical(format!("eta overflows i64 for {lambda}")))
}

/// Scalar by which the sum of all `k`-cycles acts on the `lambda` block.
pub fn gamma(k: usize, lambda: &Partition) -> Result<BigRational> {
    let n = lambda.weight();
    if k < 2 || k > n {
        return Err(QmcError::InvalidArgument(format!("gamma needs 2 <= k <= n, got k={k}, n={n}")));
    }
    let count = BigInt::from(factorial(k - 1) * binomial(n, k));
    let num = count * chi(lambda, &ConjugacyClass::cycle(k, n)?)?;
    let den = BigInt::from(dim_sn(lambda));
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(QmcError::Consistency(format!("gamma_{k} of {lambda} is not an integer")));
    }
    Ok(BigRational::from_integer(q))
}

/// Closed form for `gamma(3, lambda)` in terms of the padded rows.
///
/// The additive constant is `sum_{k<=d} (k-1)k(2k-1)/6 = d^2(d^2-1)/12`;
/// it cancels the contribution of the padding rows, so the value does not
/// depend on `d >= ht(lambda)`.
pub fn gamma3_closed_form(lambda: &Partition, d: usize) -> Result<BigRational> {
    if lambda.height() > d {
        return Err(QmcError::InvalidHeight(format!("{lambda} has more than {d} rows")));
    }
    let n = lambda.weight() as i128;
    let di = d as i128;
    let mut v = di * di * (di * di - 1) / 12 - n * (n - 1) / 2;
    for (k, p) in lambda.padded(d).into_iter().enumerate() {
        let m = p as i128 - (k as i128 + 1);
        v += m * (m + 1) * (2 * m + 1) / 6;
    }
    Ok(BigRational::from_integer(BigInt::from(v)))
}

/// The constant term printed alongside the closed form; it agrees with
/// [`gamma3_closed_form`]'s constant only at `d = 3`.
pub fn gamma3_printed_constant(d: usize) -> i128 {
    let d = d as i128;
    d * (d - 1) * (d - 1) * (d - 2) / 2
}

/// Full character table of `S_n`.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub n: usize,
    pub shapes: Vec<Partition>,
    pub classes: Vec<ConjugacyClass>,
    /// `values[i][j] = chi_{shapes[i]}(classes[j])`.
    pub values: Vec<Vec<BigInt>>,
}

pub const DEFAULT_TABLE_CAP: usize = 12;

pub fn character_table(n: usize) -> Result<CharacterTable> {
    character_table_capped(n, DEFAULT_TABLE_CAP)
}

pub fn character_table_capped(n: usize, cap: usize) -> Result<CharacterTable> {
    if n > cap {
        return Err(QmcError::CapExceeded(format!("character table for n={n} exceeds cap {cap}")));
    }
    let shapes = partitions_of(n, n);
    let classes: Vec<ConjugacyClass> = shapes.iter().cloned().map(ConjugacyClass::new).collect();
    let values = shapes
        .iter()
        .map(|l| classes.iter().map(|c| chi(l, c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(CharacterTable { n, shapes, classes, values })
}

impl CharacterTable {
    pub fn value(&self, lambda: &Partition, cls: &ConjugacyClass) -> Option<&BigInt> {
        let i = self.shapes.iter().position(|s| s == lambda)?;
        let j = self.classes.iter().position(|c| c == cls)?;
        Some(&self.values[i][j])
    }
}

/// Integer value of an integral rational, for callers that need `i64`.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// Sign helper used by tests and the CLI.
pub fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
