//! Sparse polynomials with integer coefficients in the formal variables
//! `q`, `r`, `t`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Q,
    R,
    T,
}

impl Var {
    fn index(self) -> usize {
        match self {
            Var::Q => 0,
            Var::R => 1,
            Var::T => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::R => "r",
            Var::T => "t",
        }
    }

    pub const ALL: [Var; 3] = [Var::Q, Var::R, Var::T];
}

/// Exponents of `(q, r, t)`.
pub type Exponents = [u32; 3];

/// Canonical form: no zero coefficients are ever stored, so structural
/// equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Exponents, BigInt>,
}

fn to_exponent(e: i64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::invalid(format!("exponent {e} must be a non-negative 32-bit integer")))
}

/// Graded order, highest first: total degree, then `(e_q, e_r, e_t)`
/// lexicographically.
fn graded_desc(a: &Exponents, b: &Exponents) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term([0, 0, 0], c)
    }

    pub fn term(exps: Exponents, c: impl Into<BigInt>) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(exps, c.into());
        p
    }

    /// `var^exponent`.
    pub fn monomial(var: Var, exponent: i64) -> Result<Self> {
        let mut exps = [0; 3];
        exps[var.index()] = to_exponent(exponent)?;
        Ok(Self::term(exps, 1))
    }

    /// `[h]_var = 1 + var + ... + var^(h-1)`; `[0]` is zero.
    pub fn q_integer(h: i64, var: Var) -> Result<Self> {
        if h < 0 {
            return Err(Error::invalid(format!("q-integer of negative argument {h}")));
        }
        let mut p = Polynomial::zero();
        for e in 0..h {
            p.add_term(Self::exps_of(var, to_exponent(e)?), BigInt::one());
        }
        Ok(p)
    }

    /// `prod_h [h]_var` over the given arguments.
    pub fn q_product(hs: impl IntoIterator<Item = usize>, var: Var) -> Self {
        hs.into_iter().fold(Polynomial::one(), |acc, h| &acc * &Self::q_integer(h as i64, var).expect("non-negative"))
    }

    fn exps_of(var: Var, e: u32) -> Exponents {
        let mut exps = [0; 3];
        exps[var.index()] = e;
        exps
    }

    fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: Exponents) -> BigInt {
        self.terms.get(&exps).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded order, highest degree first.
    pub fn terms(&self) -> Vec<(Exponents, &BigInt)> {
        let mut ts: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c)).collect();
        ts.sort_by(|a, b| graded_desc(&a.0, &b.0));
        ts
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[var.index()]).max()
    }

    pub fn eval_at(&self, q0: &BigInt, r0: &BigInt, t0: &BigInt) -> BigInt {
        let point = [q0, r0, t0];
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter().zip(point).fold(c.clone(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
            })
            .sum()
    }

    /// Sum of coefficients, i.e. the value at `q = r = t = 1`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `var^degree * p(1/var)` with every other variable untouched. Fails if
    /// some term has `var`-degree above `degree`, since the result would not
    /// be a polynomial.
    pub fn reciprocal(&self, var: Var, degree: u32) -> Result<Self> {
        let mut out = Polynomial::zero();
        for (exps, c) in &self.terms {
            let e = exps[var.index()];
            if e > degree {
                return Err(Error::invalid(format!("{}-degree {e} exceeds {degree}", var.name())));
            }
            let mut flipped = *exps;
            flipped[var.index()] = degree - e;
            out.add_term(flipped, c.clone());
        }
        Ok(out)
    }

    /// Multiplies by `var^e`.
    pub fn shift(&self, var: Var, e: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(exps, c)| {
                let mut s = *exps;
                s[var.index()] += e;
                (s, c.clone())
            })
            .collect();
        Polynomial { terms }
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (exps, c) in &rhs.terms {
            self.add_term(*exps, c.clone());
        }
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |acc, p| acc + p)
    }
}

impl std::iter::Product for Polynomial {
    fn product<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::one(), |acc, p| acc * p)
    }
}

/// `3*q^2*t + q + 1`
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (exps, c)) in self.terms().into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            let mut factors = Vec::new();
            if !magnitude.is_one() || exps == [0, 0, 0] {
                factors.push(magnitude.to_string());
            }
            for var in Var::ALL {
                match exps[var.index()] {
                    0 => {}
                    1 => factors.push(var.name().to_string()),
                    e => factors.push(format!("{}^{e}", var.name())),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    eq: u32,
    er: u32,
    et: u32,
    c: String,
}

/// JSON form: list of `{"eq", "er", "et", "c"}` in graded order, coefficient
/// as a decimal string.
impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms()
            .into_iter()
            .map(|(e, c)| TermJson { eq: e[0], er: e[1], et: e[2], c: c.to_string() })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(deserializer)?;
        let mut p = Polynomial::zero();
        for t in terms {
            let c: BigInt = t.c.parse().map_err(serde::de::Error::custom)?;
            p.add_term([t.eq, t.er, t.et], c);
        }
        Ok(p)
    }
}
