use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest size swept exhaustively without an explicit override. 11! is
/// already about 4e7 permutations.
pub const EXHAUSTIVE_LIMIT: usize = 10;

/// A permutation of `1..=N` in one-line notation.
///
/// Positions and values are both 1-based: `get(i)` is `w(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PermutationRepr", into = "Vec<usize>")]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::invalid("permutation must have at least one entry"));
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(Error::invalid(format!("value {v} is outside 1..={n}")));
            }
            if seen[v] {
                return Err(Error::invalid(format!("value {v} appears more than once")));
            }
            seen[v] = true;
        }
        Ok(Permutation { values })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    /// Uniformly random permutation of `1..=n`, fully determined by `seed`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut values: Vec<usize> = (1..=n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        values.shuffle(&mut rng);
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.values.len().is_multiple_of(2)
    }

    /// `w(position)`; panics if `position` is not in `1..=N`.
    pub fn get(&self, position: usize) -> usize {
        self.values[position - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// The inverse permutation in one-line notation: entry `k - 1` is `w⁻¹(k)`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        inv
    }

    pub fn inversions(&self) -> u64 {
        let w = &self.values;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<usize>) -> Result<Self> {
        Permutation::new(values)
    }
}

/// Serialized as a list; read from a list or from one-line text.
#[derive(Deserialize)]
#[serde(untagged)]
enum PermutationRepr {
    List(Vec<usize>),
    Text(String),
}

impl TryFrom<PermutationRepr> for Permutation {
    type Error = Error;

    fn try_from(repr: PermutationRepr) -> Result<Self> {
        match repr {
            PermutationRepr::List(values) => Permutation::new(values),
            PermutationRepr::Text(text) => text.parse(),
        }
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.values
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Accepts whitespace- or comma-separated values, optionally in brackets:
/// `"2 6 4 1"`, `"2,6,4,1"`, `"[2, 6, 4, 1]"`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let values = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| tok.parse::<usize>().map_err(|_| Error::invalid(format!("not a positive integer: {tok:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(values)
    }
}

/// Rearranges `xs` into its lexicographic successor. Returns `false` (and
/// leaves `xs` untouched) when `xs` is already the last arrangement.
pub(crate) fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Lexicographic stream of permutations, optionally restricted to those with
/// a fixed first value.
pub struct LexPermutations {
    first: Option<usize>,
    rest: Vec<usize>,
    done: bool,
}

impl LexPermutations {
    pub fn all(n: usize) -> Self {
        LexPermutations { first: None, rest: (1..=n).collect(), done: n == 0 }
    }

    pub fn starting_with(n: usize, first: usize) -> Self {
        assert!((1..=n).contains(&first), "first value out of range");
        LexPermutations { first: Some(first), rest: (1..=n).filter(|&v| v != first).collect(), done: false }
    }
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let values: Vec<usize> = self.first.into_iter().chain(self.rest.iter().copied()).collect();
        self.done = !next_permutation(&mut self.rest);
        Some(Permutation { values })
    }
}

/// Refuses exhaustive sweeps over `S_size` beyond [`EXHAUSTIVE_LIMIT`] unless forced.
pub fn check_guard(size: usize, force: bool) -> Result<()> {
    if size > EXHAUSTIVE_LIMIT && !force {
        return Err(Error::GuardLimit { size, limit: EXHAUSTIVE_LIMIT });
    }
    Ok(())
}

/// Folds over every permutation of `1..=n`.
///
/// Work is split by first value; the blocks are folded in parallel and merged
/// in ascending order of first value, so the result does not depend on
/// scheduling as long as `merge` is associative.
pub fn par_fold<A, I, F, M>(n: usize, force: bool, init: I, fold: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(A, &Permutation) -> A + Sync,
    M: Fn(A, A) -> A,
{
    check_guard(n, force)?;
    if n == 0 {
        return Err(Error::invalid("cannot sweep permutations of an empty set"));
    }
    let blocks: Vec<A> = (1..=n)
        .into_par_iter()
        .map(|first| LexPermutations::starting_with(n, first).fold(init(), |acc, w| fold(acc, &w)))
        .collect();
    Ok(blocks.into_iter().reduce(merge).expect("n >= 1"))
}

pub fn factorial(n: usize) -> num_bigint::BigInt {
    (1..=n).map(num_bigint::BigInt::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!("1 2 x".parse::<Permutation>().is_err());
    }

    #[test]
    fn parses_several_notations() {
        let w: Permutation = "2 6 4 1 3 11 5 7 10 12 9 8".parse().unwrap();
        assert_eq!(w.len(), 12);
        assert_eq!(w.get(6), 11);
        assert_eq!("[2, 1, 3]".parse::<Permutation>().unwrap().values(), &[2, 1, 3]);
        assert_eq!("2,1,3".parse::<Permutation>().unwrap().to_string(), "2 1 3");
    }

    #[test]
    fn inverse_undoes() {
        let w: Permutation = "3 1 4 2".parse().unwrap();
        let inv = w.inverse();
        for k in 1..=4 {
            assert_eq!(w.get(inv[k - 1]), k);
        }
    }

    #[test]
    fn lex_stream_counts_and_order() {
        let all: Vec<_> = LexPermutations::all(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|p| p[0] < p[1]));
        let block: Vec<_> = LexPermutations::starting_with(4, 3).collect();
        assert_eq!(block.len(), 6);
        assert!(block.iter().all(|w| w.get(1) == 3));
    }

    #[test]
    fn par_fold_matches_serial() {
        let total = par_fold(6, false, || 0u64, |acc, w| acc + w.inversions(), |a, b| a + b).unwrap();
        let serial: u64 = LexPermutations::all(6).map(|w| w.inversions()).sum();
        assert_eq!(total, serial);
        // 6! * C(6,2) / 2
        assert_eq!(total, 720 * 15 / 2);
    }

    #[test]
    fn guard_refuses_large_sweeps() {
        assert!(matches!(check_guard(11, false), Err(Error::GuardLimit { .. })));
        assert!(check_guard(11, true).is_ok());
        assert!(check_guard(10, false).is_ok());
    }

    #[test]
    fn seeded_shuffle_is_reproducible() {
        let a = Permutation::random(12, 7).unwrap();
        let b = Permutation::random(12, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_shape_is_plain_array() {
        let w: Permutation = "2 1".parse().unwrap();
        assert_eq!(serde_json::to_string(&w).unwrap(), "[2,1]");
        assert!(serde_json::from_str::<Permutation>("[2,2]").is_err());
        assert_eq!(serde_json::from_str::<Permutation>("\"2 1\"").unwrap(), w);
    }
}
