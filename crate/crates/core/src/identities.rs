//! Brute-force verification of the enumerative identities around the
//! crossout correspondence.
//!
//! Left sides come from definitions (marking the permutation and counting
//! inversions directly); right sides come from closed forms. Reports compare
//! exact values: integers, rationals, or canonical polynomials.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::correspondence::{decode, encode, CrossoutTuple, Parity};
use crate::dyck::{catalan, enumerate_dyck, DyckPath, Step};
use crate::error::{Error, Result};
use crate::hermite::enumerate_hermite;
use crate::marking::{crossout_mark, Mark};
use crate::permutation::{check_guard, factorial, par_fold, Permutation, EXHAUSTIVE_LIMIT};
use crate::poly::{Polynomial, Var};
use crate::probability::{alice_probability, RationalJson};
use crate::stats::stat_bundle;

/// One side of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Integer(BigInt),
    Integers(Vec<BigInt>),
    Rational(BigRational),
    Polynomial(Polynomial),
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Integer(x) => write!(f, "{x}"),
            Side::Integers(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            Side::Rational(r) => f.write_str(&crate::probability::rational_to_string(r)),
            Side::Polynomial(p) => write!(f, "{p}"),
        }
    }
}

/// `{"integer": "24"}`, `{"integers": ["3", "8"]}`,
/// `{"rational": {"num", "den"}}`, `{"polynomial": [terms], "text": "..."}`.
impl Serialize for Side {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self {
            Side::Integer(x) => map.serialize_entry("integer", &x.to_string())?,
            Side::Integers(xs) => {
                let strs: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                map.serialize_entry("integers", &strs)?
            }
            Side::Rational(r) => map.serialize_entry("rational", &RationalJson::from(r))?,
            Side::Polynomial(p) => {
                map.serialize_entry("polynomial", p)?;
                map.serialize_entry("text", &p.to_string())?;
            }
        }
        map.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equal,
    Unequal,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub n: usize,
    pub params: String,
    pub left: Side,
    pub right: Side,
    pub verdict: Verdict,
    pub elapsed_ms: f64,
}

impl IdentityReport {
    pub fn new(id: &str, n: usize, params: impl Into<String>, left: Side, right: Side, started: Instant) -> Self {
        let verdict = if left == right { Verdict::Equal } else { Verdict::Unequal };
        IdentityReport {
            id: id.to_string(),
            n,
            params: params.into(),
            left,
            right,
            verdict,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }

    pub fn is_equal(&self) -> bool {
        self.verdict == Verdict::Equal
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.is_equal() { "ok  " } else { "FAIL" };
        write!(f, "{mark} {} n={}", self.id, self.n)?;
        if !self.params.is_empty() {
            write!(f, " [{}]", self.params)?;
        }
        write!(f, ": {} vs {}", self.left, self.right)
    }
}

// ---------------------------------------------------------------------------
// closed-form helpers

/// `1 * 3 * ... * (2n - 1)`
pub fn odd_double_factorial(n: usize) -> BigInt {
    (1..=n).map(|i| BigInt::from(2 * i - 1)).product()
}

/// `2 * 4 * ... * 2n`
pub fn even_double_factorial(n: usize) -> BigInt {
    (1..=n).map(|i| BigInt::from(2 * i)).product()
}

fn product_of(xs: impl IntoIterator<Item = usize>) -> BigInt {
    xs.into_iter().map(BigInt::from).product()
}

/// The first `n` starred heights of a path of semilength `n + 1`.
fn leading_h_star(beta: &DyckPath) -> Vec<usize> {
    let mut hs = beta.heights().h_star;
    hs.pop();
    hs
}

fn alpha_beta(alpha: &DyckPath, beta: &DyckPath) -> String {
    format!("alpha={alpha} beta={beta}")
}

type Counter<K> = HashMap<K, u64>;

fn merge_counters<K: Eq + Hash>(mut a: Counter<K>, b: Counter<K>) -> Counter<K> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Generating polynomial from a multiset of exponent triples.
fn polynomial_from_counts(counts: &BTreeMap<[u32; 3], u64>) -> Polynomial {
    counts.iter().map(|(e, &c)| Polynomial::term(*e, c)).sum()
}

fn sweep_counts<K, F>(size: usize, force: bool, key: F) -> Result<Counter<K>>
where
    K: Eq + Hash + Send,
    F: Fn(&Permutation) -> Option<K> + Sync,
{
    par_fold(
        size,
        force,
        Counter::new,
        |mut acc, w| {
            if let Some(k) = key(w) {
                *acc.entry(k).or_insert(0) += 1;
            }
            acc
        },
        merge_counters,
    )
}

fn require_even_pair(alpha: &DyckPath, beta: &DyckPath) -> Result<()> {
    if alpha.is_empty() || beta.len() != alpha.len() + 2 {
        return Err(Error::invalid(format!(
            "need |alpha| = 2n >= 2 and |beta| = 2n + 2, got {} and {}",
            alpha.len(),
            beta.len()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// fibers

/// Every `w` with `pa(w) = alpha` and `pb(w) = beta`, produced by decoding
/// every admissible labeling. Size is `prod h_i(alpha) h*_i(beta)`.
pub fn fiber(alpha: &DyckPath, beta: &DyckPath) -> Result<Vec<Permutation>> {
    require_even_pair(alpha, beta)?;
    let mut out = Vec::new();
    let ells: Vec<Vec<usize>> = enumerate_hermite(alpha, false).collect();
    for em in enumerate_hermite(beta, true) {
        for ell in &ells {
            let t = CrossoutTuple::new(alpha.clone(), beta.clone(), ell.clone(), em.clone(), Parity::Even)?;
            out.push(decode(&t)?);
        }
    }
    Ok(out)
}

/// `sum_{w in fiber} q^aa r^bb` against `prod [h_i(alpha)]_q [h*_i(beta)]_r`.
/// Permutations that do not actually encode to `(alpha, beta)` are dropped
/// from the left side, so a broken decoder shows up as a mismatch.
pub fn check_theorem2(alpha: &DyckPath, beta: &DyckPath) -> Result<IdentityReport> {
    let started = Instant::now();
    let mut counts = BTreeMap::new();
    for w in fiber(alpha, beta)? {
        let t = encode(&w);
        if t.pa() != alpha || t.pb() != beta {
            continue;
        }
        let s = stat_bundle(&w);
        *counts.entry([s.aa as u32, s.bb as u32, 0]).or_insert(0) += 1;
    }
    let left = polynomial_from_counts(&counts);
    let right = theorem2_rhs(alpha, beta);
    Ok(IdentityReport::new(
        "thm2",
        alpha.semilength(),
        alpha_beta(alpha, beta),
        Side::Polynomial(left),
        Side::Polynomial(right),
        started,
    ))
}

fn theorem2_rhs(alpha: &DyckPath, beta: &DyckPath) -> Polynomial {
    &Polynomial::q_product(alpha.heights().h, Var::Q) * &Polynomial::q_product(leading_h_star(beta), Var::R)
}

/// Fiber identity check for every `(alpha, beta)` of semilength `(n, n + 1)`,
/// with left sides grouped from one sweep of all permutations of `1..=2n`.
pub fn theorem2_sweep(n: usize, force: bool) -> Result<Vec<IdentityReport>> {
    let started = Instant::now();
    let counts = sweep_counts(2 * n, force, |w| {
        let t = encode(w);
        let s = stat_bundle(w);
        Some((t.pa().clone(), t.pb().clone(), s.aa as u32, s.bb as u32))
    })?;
    let mut grouped: HashMap<(DyckPath, DyckPath), BTreeMap<[u32; 3], u64>> = HashMap::new();
    for ((pa, pb, aa, bb), c) in counts {
        *grouped.entry((pa, pb)).or_default().entry([aa, bb, 0]).or_insert(0) += c;
    }
    let betas: Vec<DyckPath> = enumerate_dyck(2 * n + 2)?.collect();
    let mut reports = Vec::new();
    for alpha in enumerate_dyck(2 * n)? {
        for beta in &betas {
            let left = grouped.get(&(alpha.clone(), beta.clone())).map(polynomial_from_counts).unwrap_or_default();
            reports.push(IdentityReport::new(
                "thm2",
                n,
                alpha_beta(&alpha, beta),
                Side::Polynomial(left),
                Side::Polynomial(theorem2_rhs(&alpha, beta)),
                started,
            ));
        }
    }
    Ok(reports)
}

// ---------------------------------------------------------------------------
// marginals

fn alice_marginal_rhs(alpha: &DyckPath) -> BigInt {
    even_double_factorial(alpha.semilength()) * product_of(alpha.heights().h)
}

fn bob_marginal_rhs(beta: &DyckPath) -> BigInt {
    odd_double_factorial(beta.semilength() - 1) * product_of(leading_h_star(beta))
}

/// Brute-force size of `{w : pa(w) = alpha}` against `(2n)!! prod h_i(alpha)`.
pub fn check_alice_marginal(alpha: &DyckPath, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    if alpha.is_empty() {
        return Err(Error::invalid("alpha must be non-empty"));
    }
    let count = sweep_counts(alpha.len(), force, |w| (encode(w).pa() == alpha).then_some(()))?;
    let left = BigInt::from(count.get(&()).copied().unwrap_or(0));
    Ok(IdentityReport::new(
        "thm3",
        alpha.semilength(),
        format!("alpha={alpha}"),
        Side::Integer(left),
        Side::Integer(alice_marginal_rhs(alpha)),
        started,
    ))
}

/// Brute-force size of `{w : pb(w) = beta}` against `(2n-1)!! prod_{i<=n} h*_i(beta)`.
pub fn check_bob_marginal(beta: &DyckPath, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    if beta.len() < 4 {
        return Err(Error::invalid("beta must have length 2n + 2 with n >= 1"));
    }
    let count = sweep_counts(beta.len() - 2, force, |w| (encode(w).pb() == beta).then_some(()))?;
    let left = BigInt::from(count.get(&()).copied().unwrap_or(0));
    Ok(IdentityReport::new(
        "thm4",
        beta.semilength() - 1,
        format!("beta={beta}"),
        Side::Integer(left),
        Side::Integer(bob_marginal_rhs(beta)),
        started,
    ))
}

/// Both marginal identities for every path, from one sweep each.
pub fn marginal_sweep(n: usize, force: bool) -> Result<(Vec<IdentityReport>, Vec<IdentityReport>)> {
    let started = Instant::now();
    let counts = sweep_counts(2 * n, force, |w| {
        let t = encode(w);
        Some((t.pa().clone(), t.pb().clone()))
    })?;
    let mut alice: HashMap<DyckPath, u64> = HashMap::new();
    let mut bob: HashMap<DyckPath, u64> = HashMap::new();
    for ((pa, pb), c) in counts {
        *alice.entry(pa).or_insert(0) += c;
        *bob.entry(pb).or_insert(0) += c;
    }
    let thm3 = enumerate_dyck(2 * n)?
        .map(|alpha| {
            let left = BigInt::from(alice.get(&alpha).copied().unwrap_or(0));
            IdentityReport::new(
                "thm3",
                n,
                format!("alpha={alpha}"),
                Side::Integer(left),
                Side::Integer(alice_marginal_rhs(&alpha)),
                started,
            )
        })
        .collect();
    let thm4 = enumerate_dyck(2 * n + 2)?
        .map(|beta| {
            let left = BigInt::from(bob.get(&beta).copied().unwrap_or(0));
            IdentityReport::new(
                "thm4",
                n,
                format!("beta={beta}"),
                Side::Integer(left),
                Side::Integer(bob_marginal_rhs(&beta)),
                started,
            )
        })
        .collect();
    Ok((thm3, thm4))
}

/// All `w` with `pa(w) = alpha`, built directly by the circled-box process:
/// for `k = 1..=2n`, a down step writes `k` into an empty circled box; an up
/// step writes `k` into an empty uncircled box and then circles the leftmost
/// empty uncircled box. Every branch is taken, so each `w` appears once.
pub fn generate_alice_fiber(alpha: &DyckPath) -> Vec<Permutation> {
    struct Boxes<'a> {
        steps: &'a [Step],
        filled: Vec<usize>,
        circled: Vec<bool>,
        out: Vec<Permutation>,
    }

    fn fill(b: &mut Boxes<'_>, k: usize) {
        if k == b.steps.len() {
            b.out.push(Permutation::new(b.filled.clone()).expect("every box filled once"));
            return;
        }
        let want_circled = b.steps[k] == Step::D;
        for i in 0..b.filled.len() {
            if b.filled[i] != 0 || b.circled[i] != want_circled {
                continue;
            }
            b.filled[i] = k + 1;
            if want_circled {
                fill(b, k + 1);
            } else {
                let c = (0..b.filled.len())
                    .find(|&j| b.filled[j] == 0 && !b.circled[j])
                    .expect("an empty uncircled box remains after an up step");
                b.circled[c] = true;
                fill(b, k + 1);
                b.circled[c] = false;
            }
            b.filled[i] = 0;
        }
    }

    let len = alpha.len();
    let mut boxes = Boxes { steps: alpha.steps(), filled: vec![0; len], circled: vec![false; len], out: Vec::new() };
    if len > 0 {
        fill(&mut boxes, 0);
    }
    boxes.out
}

/// Compares [`generate_alice_fiber`] with the brute-force fiber as sets.
/// Left is `[distinct generated inside the fiber, total generated]`, right
/// is `[fiber size, fiber size]`.
pub fn check_alice_generator(alpha: &DyckPath, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    let len = alpha.len();
    check_guard(len, force)?;
    let brute: BTreeSet<Permutation> = par_fold(
        len,
        force,
        BTreeSet::new,
        |mut acc, w| {
            if encode(w).pa() == alpha {
                acc.insert(w.clone());
            }
            acc
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    let generated = generate_alice_fiber(alpha);
    let distinct: BTreeSet<&Permutation> = generated.iter().filter(|w| brute.contains(*w)).collect();
    let size = BigInt::from(brute.len());
    Ok(IdentityReport::new(
        "thm3_generator",
        alpha.semilength(),
        format!("alpha={alpha}"),
        Side::Integers(vec![BigInt::from(distinct.len()), BigInt::from(generated.len())]),
        Side::Integers(vec![size.clone(), size]),
        started,
    ))
}

// ---------------------------------------------------------------------------
// path-only sums

/// `sum_alpha prod h_i(alpha) = (2n-1)!!` and
/// `sum_beta prod_{i<=n} h*_i(beta) = (2n)!!`.
pub fn check_corollary5(n: usize) -> Result<(IdentityReport, IdentityReport)> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let started = Instant::now();
    let first: BigInt = enumerate_dyck(2 * n)?.map(|a| product_of(a.heights().h)).sum();
    let a =
        IdentityReport::new("cor5_odd", n, "", Side::Integer(first), Side::Integer(odd_double_factorial(n)), started);
    let started = Instant::now();
    let second: BigInt = enumerate_dyck(2 * n + 2)?.map(|b| product_of(leading_h_star(&b))).sum();
    let b = IdentityReport::new(
        "cor5_even",
        n,
        "",
        Side::Integer(second),
        Side::Integer(even_double_factorial(n)),
        started,
    );
    Ok((a, b))
}

/// `prod_i q^(h_i - 1) [h_i]_q`
fn shifted_height_product(alpha: &DyckPath) -> Polynomial {
    alpha
        .heights()
        .h
        .into_iter()
        .map(|h| Polynomial::q_integer(h as i64, Var::Q).expect("h >= 1").shift(Var::Q, h as u32 - 1))
        .product()
}

/// `sum_alpha prod q^(h_i-1) [h_i]_q = [1]_q [3]_q ... [2n-1]_q` by path
/// enumeration.
pub fn check_corollary7(n: usize) -> Result<IdentityReport> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let started = Instant::now();
    let left: Polynomial = enumerate_dyck(2 * n)?.map(|a| shifted_height_product(&a)).sum();
    let right = Polynomial::q_product((1..=n).map(|i| 2 * i - 1), Var::Q);
    Ok(IdentityReport::new("cor7_a", n, "", Side::Polynomial(left), Side::Polynomial(right), started))
}

// ---------------------------------------------------------------------------
// bivariate refinements

fn even_q_product(n: usize, var: Var) -> Polynomial {
    Polynomial::q_product((1..=n).map(|i| 2 * i), var)
}

/// Per-`alpha` generating polynomials `sum_{pa(w) = alpha} q^aa t^z` and
/// `sum_{pa(w) = alpha} q^inv`, from one sweep.
fn alpha_generating_polys(n: usize, force: bool) -> Result<HashMap<DyckPath, (Polynomial, Polynomial)>> {
    let counts = sweep_counts(2 * n, force, |w| {
        let s = stat_bundle(w);
        Some((encode(w).pa().clone(), s.aa as u32, s.z.expect("even length") as u32, s.inv as u32))
    })?;
    let mut qt: HashMap<DyckPath, BTreeMap<[u32; 3], u64>> = HashMap::new();
    let mut qinv: HashMap<DyckPath, BTreeMap<[u32; 3], u64>> = HashMap::new();
    for ((pa, aa, z, inv), c) in counts {
        *qt.entry(pa.clone()).or_default().entry([aa, 0, z]).or_insert(0) += c;
        *qinv.entry(pa).or_default().entry([inv, 0, 0]).or_insert(0) += c;
    }
    Ok(qt
        .into_iter()
        .map(|(pa, counts)| {
            let inv = polynomial_from_counts(&qinv[&pa]);
            (pa, (polynomial_from_counts(&counts), inv))
        })
        .collect())
}

fn theorem6_rhs(alpha: &DyckPath) -> Polynomial {
    &even_q_product(alpha.semilength(), Var::T) * &Polynomial::q_product(alpha.heights().h, Var::Q)
}

fn eq_qq_rhs(alpha: &DyckPath) -> Polynomial {
    &even_q_product(alpha.semilength(), Var::Q) * &shifted_height_product(alpha)
}

/// `sum_{pa(w) = alpha} q^aa t^z = [2]_t [4]_t ... [2n]_t prod [h_i(alpha)]_q`.
pub fn check_theorem6(alpha: &DyckPath, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    let n = alpha.semilength();
    if n == 0 {
        return Err(Error::invalid("alpha must be non-empty"));
    }
    let polys = alpha_generating_polys(n, force)?;
    let left = polys.get(alpha).map(|p| p.0.clone()).unwrap_or_default();
    Ok(IdentityReport::new(
        "thm6",
        n,
        format!("alpha={alpha}"),
        Side::Polynomial(left),
        Side::Polynomial(theorem6_rhs(alpha)),
        started,
    ))
}

/// `sum_{pa(w) = alpha} q^inv = [2]_q ... [2n]_q prod q^(h_i-1) [h_i]_q`.
pub fn check_eq_qq(alpha: &DyckPath, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    let n = alpha.semilength();
    if n == 0 {
        return Err(Error::invalid("alpha must be non-empty"));
    }
    let polys = alpha_generating_polys(n, force)?;
    let left = polys.get(alpha).map(|p| p.1.clone()).unwrap_or_default();
    Ok(IdentityReport::new(
        "cor7_qq",
        n,
        format!("alpha={alpha}"),
        Side::Polynomial(left),
        Side::Polynomial(eq_qq_rhs(alpha)),
        started,
    ))
}

/// Per-`alpha` reports for the `(q, t)` identity and the `q^inv` identity,
/// sharing one sweep.
pub fn theorem6_sweep(n: usize, force: bool) -> Result<(Vec<IdentityReport>, Vec<IdentityReport>)> {
    let started = Instant::now();
    let polys = alpha_generating_polys(n, force)?;
    let mut thm6 = Vec::new();
    let mut qq = Vec::new();
    for alpha in enumerate_dyck(2 * n)? {
        let (qt, qinv) = polys.get(&alpha).cloned().unwrap_or_default();
        let params = format!("alpha={alpha}");
        thm6.push(IdentityReport::new(
            "thm6",
            n,
            params.clone(),
            Side::Polynomial(qt),
            Side::Polynomial(theorem6_rhs(&alpha)),
            started,
        ));
        qq.push(IdentityReport::new(
            "cor7_qq",
            n,
            params,
            Side::Polynomial(qinv),
            Side::Polynomial(eq_qq_rhs(&alpha)),
            started,
        ));
    }
    Ok((thm6, qq))
}

/// Counts `w` of `1..=2n` satisfying
/// `z = n^2 + sum (h_i(pa) - 1) - ab - bb`; should be all `(2n)!` of them.
pub fn check_lemma_z(n: usize, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    let good = sweep_counts(2 * n, force, |w| {
        let s = stat_bundle(w);
        let heights: u64 = encode(w).pa().heights().h.iter().map(|&h| h as u64 - 1).sum();
        let rhs = (n * n) as i64 + heights as i64 - s.ab as i64 - s.bb as i64;
        (s.z.map(|z| z as i64) == Some(rhs)).then_some(())
    })?;
    let left = BigInt::from(good.get(&()).copied().unwrap_or(0));
    Ok(IdentityReport::new("lemma_z", n, "", Side::Integer(left), Side::Integer(factorial(2 * n)), started))
}

/// Total number of BA inversions over all `w` of `1..=size` (should be zero),
/// and the number of `w` for which `inv = aa + ab + bb`.
pub fn check_no_ba(size: usize, force: bool) -> Result<(IdentityReport, IdentityReport)> {
    let started = Instant::now();
    let (ba, split) = par_fold(
        size,
        force,
        || (0u64, 0u64),
        |(ba, split), w| {
            let s = stat_bundle(w);
            let ok = s.inv == w.inversions() && s.inv == s.aa + s.ab + s.bb;
            (ba + s.ba, split + ok as u64)
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    )?;
    let params = format!("N={size}");
    Ok((
        IdentityReport::new(
            "no_ba",
            size,
            params.clone(),
            Side::Integer(ba.into()),
            Side::Integer(BigInt::zero()),
            started,
        ),
        IdentityReport::new(
            "inv_split",
            size,
            params,
            Side::Integer(split.into()),
            Side::Integer(factorial(size)),
            started,
        ),
    ))
}

/// `sum_{w in S_2n} q^inv = [1]_q [2]_q ... [2n]_q`.
pub fn check_inversion_generating_function(n: usize, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    let counts = sweep_counts(2 * n, force, |w| Some(w.inversions() as u32))?;
    let left: Polynomial = counts.iter().map(|(&e, &c)| Polynomial::term([e, 0, 0], c)).sum();
    let right = Polynomial::q_product(1..=2 * n, Var::Q);
    Ok(IdentityReport::new("inv_gf", n, "", Side::Polynomial(left), Side::Polynomial(right), started))
}

// ---------------------------------------------------------------------------
// random preferences

/// For every rank set `k_1 < ... < k_m` with `m <= n`, the exact fraction of
/// `w` in which Alice eats all of `w⁻¹(k_1), ..., w⁻¹(k_m)` against
/// [`alice_probability`].
pub fn check_probability(n: usize, force: bool) -> Result<Vec<IdentityReport>> {
    let started = Instant::now();
    let size = 2 * n;
    if n == 0 || size > 63 {
        return Err(Error::invalid("n must be between 1 and 31"));
    }
    // Alice eats w⁻¹(k) exactly when k is a down step of pa.
    let masks =
        sweep_counts(size, force, |w| Some(encode(w).pa().down_steps().iter().fold(0u64, |m, &k| m | 1 << (k - 1))))?;
    let total = factorial(size);
    let mut reports = Vec::new();
    for subset in 1u64..(1 << size) {
        if subset.count_ones() as usize > n {
            continue;
        }
        let hits: u64 = masks.iter().filter(|(&m, _)| m & subset == subset).map(|(_, &c)| c).sum();
        let ranks: Vec<usize> = (1..=size).filter(|k| subset >> (k - 1) & 1 == 1).collect();
        let right = alice_probability(n, &ranks)?;
        let left = BigRational::new(BigInt::from(hits), total.clone());
        let params = format!("ranks={}", ranks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
        reports.push(IdentityReport::new("prob", n, params, Side::Rational(left), Side::Rational(right), started));
    }
    Ok(reports)
}

// ---------------------------------------------------------------------------
// outcomes and independence

/// A set of outcomes, each a sorted list of ranks or positions.
pub type OutcomeSet = BTreeSet<Vec<usize>>;

/// Distinct outcomes over all `w` of `1..=2n`: Alice's as the set of ranks
/// she eats (the down steps of `pa`), Bob's as the set of positions he eats.
pub fn outcome_sets(n: usize, force: bool) -> Result<(OutcomeSet, OutcomeSet)> {
    par_fold(
        2 * n,
        force,
        || (BTreeSet::new(), BTreeSet::new()),
        |(mut a, mut b), w| {
            let marking = crossout_mark(w);
            let mut ranks: Vec<usize> = marking.positions(Mark::A).iter().map(|&p| w.get(p)).collect();
            ranks.sort_unstable();
            a.insert(ranks);
            b.insert(marking.positions(Mark::B));
            (a, b)
        },
        |(mut a1, mut b1), (a2, b2)| {
            a1.extend(a2);
            b1.extend(b2);
            (a1, b1)
        },
    )
}

pub fn outcome_counts(n: usize, force: bool) -> Result<(usize, usize)> {
    let (a, b) = outcome_sets(n, force)?;
    Ok((a.len(), b.len()))
}

pub fn check_outcomes(n: usize, force: bool) -> Result<Vec<IdentityReport>> {
    let started = Instant::now();
    let (a, b) = outcome_counts(n, force)?;
    Ok(vec![
        IdentityReport::new("outcomes_alice", n, "", Side::Integer(a.into()), Side::Integer(catalan(n)), started),
        IdentityReport::new("outcomes_bob", n, "", Side::Integer(b.into()), Side::Integer(catalan(n + 1)), started),
    ])
}

fn multiplicity_summary<K>(counts: &Counter<K>) -> Vec<BigInt> {
    let distinct: BTreeSet<u64> = counts.values().copied().collect();
    std::iter::once(BigInt::from(counts.len())).chain(distinct.into_iter().map(BigInt::from)).collect()
}

/// Over all `w` of `1..=2n`: every realized `(pa, ell)` occurs `(2n)!!` times
/// across `(2n-1)!!` classes, every realized `(pb, m)` occurs `(2n-1)!!` times
/// across `(2n)!!` classes, and the joint value is hit once per `w`.
///
/// The multiplicity reports compare `[classes, multiplicities...]` with
/// `[expected classes, expected multiplicity]`.
pub fn check_independence(n: usize, force: bool) -> Result<Vec<IdentityReport>> {
    let started = Instant::now();
    type Half = (DyckPath, Vec<usize>);
    let (alice, bob, joint) = par_fold(
        2 * n,
        force,
        || (Counter::<Half>::new(), Counter::<Half>::new(), 0u64),
        |(mut a, mut b, joint), w| {
            let t = encode(w);
            *a.entry((t.pa().clone(), t.ell().to_vec())).or_insert(0) += 1;
            *b.entry((t.pb().clone(), t.em().to_vec())).or_insert(0) += 1;
            (a, b, joint + 1)
        },
        |(a1, b1, j1), (a2, b2, j2)| (merge_counters(a1, a2), merge_counters(b1, b2), j1 + j2),
    )?;
    let odd = odd_double_factorial(n);
    let even = even_double_factorial(n);
    let classes = BigInt::from(alice.len()) * BigInt::from(bob.len());
    Ok(vec![
        IdentityReport::new(
            "independence_alice",
            n,
            "",
            Side::Integers(multiplicity_summary(&alice)),
            Side::Integers(vec![odd.clone(), even.clone()]),
            started,
        ),
        IdentityReport::new(
            "independence_bob",
            n,
            "",
            Side::Integers(multiplicity_summary(&bob)),
            Side::Integers(vec![even, odd]),
            started,
        ),
        IdentityReport::new(
            "independence_product",
            n,
            "",
            Side::Integers(vec![classes, joint.into()]),
            Side::Integers(vec![factorial(2 * n), factorial(2 * n)]),
            started,
        ),
    ])
}

// ---------------------------------------------------------------------------
// round trips

/// Number of `w` of `1..=size` with `decode(encode(w)) = w`, against `size!`.
pub fn check_roundtrip(size: usize, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    let good =
        par_fold(size, force, || 0u64, |acc, w| acc + (decode(&encode(w)).as_ref() == Ok(w)) as u64, |a, b| a + b)?;
    Ok(IdentityReport::new(
        "roundtrip",
        size,
        format!("N={size}"),
        Side::Integer(good.into()),
        Side::Integer(factorial(size)),
        started,
    ))
}

/// Every admissible tuple for permutations of `1..=size`, in a fixed order.
pub fn all_tuples(size: usize) -> Result<Vec<CrossoutTuple>> {
    if size == 0 {
        return Err(Error::invalid("size must be at least 1"));
    }
    let parity = Parity::of_len(size);
    let (pa_len, pb_len) = match parity {
        Parity::Even => (size, size + 2),
        Parity::Odd => (size + 1, size + 1),
    };
    let (a_starred, b_starred) = (parity == Parity::Odd, parity == Parity::Even);
    let mut alice = Vec::new();
    for pa in enumerate_dyck(pa_len)? {
        for ell in enumerate_hermite(&pa, a_starred) {
            alice.push((pa.clone(), ell));
        }
    }
    let mut out = Vec::new();
    for pb in enumerate_dyck(pb_len)? {
        for em in enumerate_hermite(&pb, b_starred) {
            for (pa, ell) in &alice {
                out.push(CrossoutTuple::new(pa.clone(), pb.clone(), ell.clone(), em.clone(), parity)?);
            }
        }
    }
    Ok(out)
}

/// Decodes every admissible tuple: left is `[tuples, distinct permutations,
/// tuples that re-encode to themselves]`, right is `[size!; 3]`.
pub fn check_tuple_roundtrip(size: usize, force: bool) -> Result<IdentityReport> {
    let started = Instant::now();
    check_guard(size, force)?;
    let tuples = all_tuples(size)?;
    let mut seen = BTreeSet::new();
    let mut fixed = 0u64;
    for t in &tuples {
        let w = decode(t)?;
        if &encode(&w) == t {
            fixed += 1;
        }
        seen.insert(w);
    }
    let f = factorial(size);
    Ok(IdentityReport::new(
        "roundtrip_tuples",
        size,
        format!("N={size}"),
        Side::Integers(vec![tuples.len().into(), seen.len().into(), fixed.into()]),
        Side::Integers(vec![f.clone(), f.clone(), f]),
        started,
    ))
}

// ---------------------------------------------------------------------------
// suites

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Thm2,
    Thm3,
    Thm4,
    Cor5,
    Thm6,
    Cor7,
    Prob,
    Outcomes,
    Independence,
    Roundtrip,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Thm2,
        Suite::Thm3,
        Suite::Thm4,
        Suite::Cor5,
        Suite::Thm6,
        Suite::Cor7,
        Suite::Prob,
        Suite::Outcomes,
        Suite::Independence,
        Suite::Roundtrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::Thm4 => "thm4",
            Suite::Cor5 => "cor5",
            Suite::Thm6 => "thm6",
            Suite::Cor7 => "cor7",
            Suite::Prob => "prob",
            Suite::Outcomes => "outcomes",
            Suite::Independence => "independence",
            Suite::Roundtrip => "roundtrip",
        }
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok == "all" {
                return Ok(Suite::ALL.to_vec());
            }
            let suite: Suite = tok.parse()?;
            if !out.contains(&suite) {
                out.push(suite);
            }
        }
        if out.is_empty() {
            return Err(Error::invalid("no suite selected"));
        }
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        let suite = match s.as_str() {
            "thm2" | "theorem2" => Suite::Thm2,
            "thm3" | "theorem3" | "alice" => Suite::Thm3,
            "thm4" | "theorem4" | "bob" => Suite::Thm4,
            "cor5" | "corollary5" => Suite::Cor5,
            "thm6" | "theorem6" => Suite::Thm6,
            "cor7" | "corollary7" => Suite::Cor7,
            "prob" | "probability" => Suite::Prob,
            "outcomes" => Suite::Outcomes,
            "independence" => Suite::Independence,
            "roundtrip" => Suite::Roundtrip,
            _ => {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                return Err(Error::invalid(format!("unknown suite {s:?}; expected one of {}", names.join(","))));
            }
        };
        Ok(suite)
    }
}

/// Runs one suite at a single `n`, passing each report to `sink`.
///
/// Permutation sweeps cover `1..=2n` (and `1..=2n-1` where odd lengths
/// apply) and obey the guard limit. `cor5` and the path-only half of `cor7`
/// need no sweep; `cor7` skips its sweep-based checks past the guard unless
/// `force` is set.
pub fn run_suite_at(suite: Suite, n: usize, force: bool, sink: &mut dyn FnMut(IdentityReport)) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    match suite {
        Suite::Thm2 => theorem2_sweep(n, force)?.into_iter().for_each(&mut *sink),
        Suite::Thm3 | Suite::Thm4 => {
            let (thm3, thm4) = marginal_sweep(n, force)?;
            if suite == Suite::Thm3 {
                thm3.into_iter().for_each(&mut *sink);
                // the generator check stores whole fibers; keep it to 2n <= 8
                if 2 * n <= 8 {
                    for alpha in enumerate_dyck(2 * n)? {
                        sink(check_alice_generator(&alpha, force)?);
                    }
                }
            } else {
                thm4.into_iter().for_each(&mut *sink);
            }
        }
        Suite::Cor5 => {
            let (a, b) = check_corollary5(n)?;
            sink(a);
            sink(b);
        }
        Suite::Thm6 => {
            let (thm6, _) = theorem6_sweep(n, force)?;
            thm6.into_iter().for_each(&mut *sink);
            sink(check_lemma_z(n, force)?);
            for size in [2 * n - 1, 2 * n] {
                let (ba, split) = check_no_ba(size, force)?;
                sink(ba);
                sink(split);
            }
        }
        Suite::Cor7 => {
            sink(check_corollary7(n)?);
            if force || 2 * n <= EXHAUSTIVE_LIMIT {
                let (_, qq) = theorem6_sweep(n, force)?;
                qq.into_iter().for_each(&mut *sink);
                sink(check_inversion_generating_function(n, force)?);
            }
        }
        Suite::Prob => check_probability(n, force)?.into_iter().for_each(&mut *sink),
        Suite::Outcomes => check_outcomes(n, force)?.into_iter().for_each(&mut *sink),
        Suite::Independence => check_independence(n, force)?.into_iter().for_each(&mut *sink),
        Suite::Roundtrip => {
            for size in [2 * n - 1, 2 * n] {
                sink(check_roundtrip(size, force)?);
                sink(check_tuple_roundtrip(size, force)?);
            }
        }
    }
    Ok(())
}

/// Runs each suite for every `n` in `1..=max_n`. A sweep that would pass the
/// guard is refused before anything runs.
pub fn run_suites(suites: &[Suite], max_n: usize, force: bool, sink: &mut dyn FnMut(IdentityReport)) -> Result<()> {
    if suites.iter().any(|s| !matches!(s, Suite::Cor5 | Suite::Cor7)) {
        check_guard(2 * max_n, force)?;
    }
    for &suite in suites {
        for n in 1..=max_n {
            run_suite_at(suite, n, force, sink)?;
        }
    }
    Ok(())
}

pub fn collect_suites(suites: &[Suite], max_n: usize, force: bool) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    run_suites(suites, max_n, force, &mut |r| out.push(r))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn path(s: &str) -> DyckPath {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn smallest_fibers() {
        assert_eq!(fiber(&path("UD"), &path("UUDD")).unwrap(), vec![w("2 1")]);
        assert_eq!(fiber(&path("UD"), &path("UDUD")).unwrap(), vec![w("1 2")]);
        assert!(fiber(&path("UD"), &path("UD")).is_err());
    }

    #[test]
    fn worked_example_fiber_size() {
        let t = encode(&w("2 6 4 1 3 11 5 7 10 12 9 8"));
        let f = fiber(t.pa(), t.pb()).unwrap();
        assert_eq!(f.len(), 432);
        assert!(f.contains(&w("2 6 4 1 3 11 5 7 10 12 9 8")));
        let r = check_theorem2(t.pa(), t.pb()).unwrap();
        assert!(r.is_equal(), "{r}");
    }

    #[test]
    fn fiber_identity_smallest() {
        let r = check_theorem2(&path("UD"), &path("UUDD")).unwrap();
        assert_eq!(r.left, Side::Polynomial(Polynomial::one()));
        assert!(r.is_equal());
        let reports = theorem2_sweep(2, false).unwrap();
        assert_eq!(reports.len(), 10);
        assert!(reports.iter().all(|r| r.is_equal()));
    }

    #[test]
    fn marginal_examples() {
        let (thm3, thm4) = marginal_sweep(2, false).unwrap();
        let lefts: Vec<String> = thm3.iter().map(|r| r.left.to_string()).collect();
        assert_eq!(lefts, vec!["16", "8"]); // UUDD, UDUD
        assert!(thm3.iter().chain(&thm4).all(|r| r.is_equal()));
        let bob_total: BigInt = thm4
            .iter()
            .map(|r| match &r.left {
                Side::Integer(x) => x.clone(),
                _ => unreachable!(),
            })
            .sum();
        assert_eq!(bob_total, BigInt::from(24));
        let r = check_bob_marginal(&path("UUDD"), false).unwrap();
        assert_eq!(r.left, Side::Integer(1.into()));
        assert!(check_alice_marginal(&path("UUDD"), false).unwrap().is_equal());
    }

    #[test]
    fn generator_small() {
        let mut got = generate_alice_fiber(&path("UD"));
        got.sort();
        assert_eq!(got, vec![w("1 2"), w("2 1")]);
        assert_eq!(generate_alice_fiber(&path("UUDD")).len(), 16);
        assert!(check_alice_generator(&path("UUDUDD"), false).unwrap().is_equal());
    }

    #[test]
    fn double_factorial_counts() {
        let (a, b) = check_corollary5(2).unwrap();
        assert_eq!(a.left, Side::Integer(3.into()));
        assert_eq!(b.left, Side::Integer(8.into()));
        let (a, _) = check_corollary5(8).unwrap();
        assert_eq!(a.right, Side::Integer(2027025.into()));
        assert!(a.is_equal());
    }

    #[test]
    fn qt_identity_smallest() {
        let r = check_theorem6(&path("UD"), false).unwrap();
        let one_plus_t = Polynomial::q_integer(2, Var::T).unwrap();
        assert_eq!(r.left, Side::Polynomial(one_plus_t.clone()));
        assert_eq!(r.right, Side::Polynomial(one_plus_t));
    }

    #[test]
    fn hermite_sum_small() {
        assert_eq!(check_corollary7(1).unwrap().left, Side::Polynomial(Polynomial::one()));
        let r = check_corollary7(2).unwrap();
        assert_eq!(r.left.to_string(), "q^2 + q + 1");
        assert!(r.is_equal());
        let r = check_eq_qq(&path("UUDD"), false).unwrap();
        assert!(r.is_equal(), "{r}");
    }

    #[test]
    fn probability_examples() {
        let reports = check_probability(2, false).unwrap();
        let find = |p: &str| reports.iter().find(|r| r.params == p).unwrap();
        assert_eq!(find("ranks=4").left, Side::Rational(BigRational::one()));
        assert_eq!(find("ranks=2").left, Side::Rational(BigRational::new(1.into(), 3.into())));
        assert_eq!(find("ranks=3,4").left, Side::Rational(BigRational::new(2.into(), 3.into())));
        assert!(reports.iter().all(|r| r.is_equal()));
    }

    #[test]
    fn outcome_examples() {
        let (a, b) = outcome_sets(2, false).unwrap();
        assert_eq!(a.len(), 2);
        let expected: BTreeSet<Vec<usize>> =
            [[1, 3], [1, 4], [2, 3], [2, 4], [3, 4]].iter().map(|p| p.to_vec()).collect();
        assert_eq!(b, expected);
        assert_eq!(outcome_counts(3, false).unwrap(), (5, 14));
    }

    #[test]
    fn independence_small() {
        let r = check_independence(1, false).unwrap();
        assert_eq!(r[0].left, Side::Integers(vec![1.into(), 2.into()]));
        assert_eq!(r[1].left, Side::Integers(vec![2.into(), 1.into()]));
        let r = check_independence(2, false).unwrap();
        assert_eq!(r[0].left, Side::Integers(vec![3.into(), 8.into()]));
        assert_eq!(r[1].left, Side::Integers(vec![8.into(), 3.into()]));
        assert!(r.iter().all(|x| x.is_equal()));
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!(Suite::parse_list("thm2, cor5").unwrap(), vec![Suite::Thm2, Suite::Cor5]);
        assert_eq!(Suite::parse_list("corollary5").unwrap(), vec![Suite::Cor5]);
        assert_eq!(Suite::parse_list("all").unwrap().len(), 10);
        assert!(Suite::parse_list("nope").is_err());
        assert!(Suite::parse_list("").is_err());
    }

    #[test]
    fn guard_applies_to_sweeps() {
        assert!(matches!(run_suite_at(Suite::Thm2, 6, false, &mut |_| {}), Err(Error::GuardLimit { .. })));
        // path-only sums are unguarded
        let mut count = 0;
        run_suite_at(Suite::Cor7, 8, false, &mut |r| {
            assert!(r.is_equal());
            count += 1;
        })
        .unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn report_json_shape() {
        let r = check_corollary7(2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["id"], "cor7_a");
        assert_eq!(v["verdict"], "equal");
        assert_eq!(v["left"]["text"], "q^2 + q + 1");
        let (a, _) = check_corollary5(2).unwrap();
        assert_eq!(serde_json::to_value(&a).unwrap()["right"]["integer"], "3");
    }
}
