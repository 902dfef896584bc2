use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability, for a uniformly random `w` of `1..=2n`, that Alice eats every
/// morsel she ranks `k_1 < ... < k_m` (rank 1 = her least favorite):
/// `prod_i (k_i - 2i + 1) / (2n - 2i + 1)`, zero once any numerator is `<= 0`.
pub fn alice_probability(n: usize, ranks: &[usize]) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if ranks.is_empty() || ranks.len() > n {
        return Err(Error::invalid(format!("need between 1 and {n} ranks, got {}", ranks.len())));
    }
    for (i, &k) in ranks.iter().enumerate() {
        if k == 0 || k > 2 * n {
            return Err(Error::Constraint { index: i + 1, message: format!("rank {k} is outside 1..={}", 2 * n) });
        }
        if i > 0 && ranks[i - 1] >= k {
            return Err(Error::Constraint { index: i + 1, message: "ranks must be strictly increasing".into() });
        }
    }
    let mut p = BigRational::one();
    for (i, &k) in ranks.iter().enumerate() {
        let i = i as i64 + 1;
        let num = k as i64 - 2 * i + 1;
        if num <= 0 {
            return Ok(BigRational::zero());
        }
        p *= BigRational::new(BigInt::from(num), BigInt::from(2 * n as i64 - 2 * i + 1));
    }
    Ok(p)
}

/// `{"num": "2", "den": "3"}`; numerator and denominator as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        RationalJson { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
