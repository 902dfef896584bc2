use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    U,
    D,
}

/// A Dyck path, stored as its step word.
///
/// Ordering is lexicographic on steps with `U < D`, the same order
/// [`enumerate_dyck`] produces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    steps: Vec<Step>,
}

/// Down-step heights of a path, in down-step order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heights {
    /// Level just before each down step.
    pub h: Vec<usize>,
    /// `h` lowered by one on down steps with no up step anywhere to their right.
    pub h_star: Vec<usize>,
}

impl DyckPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut level: isize = 0;
        for (k, s) in steps.iter().enumerate() {
            level += match s {
                Step::U => 1,
                Step::D => -1,
            };
            if level < 0 {
                return Err(Error::invalid(format!("path dips below the axis at step {}", k + 1)));
            }
        }
        if level != 0 {
            return Err(Error::invalid("path does not return to the axis"));
        }
        Ok(DyckPath { steps })
    }

    pub fn empty() -> Self {
        DyckPath { steps: Vec::new() }
    }

    /// Builds the path from its set of down-step positions (1-based). The
    /// length is twice the number of down steps.
    pub fn from_down_steps(down: &[usize]) -> Result<Self> {
        let len = 2 * down.len();
        let mut steps = vec![Step::U; len];
        for &k in down {
            if k == 0 || k > len {
                return Err(Error::invalid(format!("down step {k} is outside 1..={len}")));
            }
            if steps[k - 1] == Step::D {
                return Err(Error::invalid(format!("down step {k} listed twice")));
            }
            steps[k - 1] = Step::D;
        }
        DyckPath::new(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of down steps, i.e. half the length.
    pub fn semilength(&self) -> usize {
        self.steps.len() / 2
    }

    /// Positions of the down steps (1-based), ascending.
    pub fn down_steps(&self) -> Vec<usize> {
        self.steps.iter().enumerate().filter(|&(_, &s)| s == Step::D).map(|(k, _)| k + 1).collect()
    }

    pub fn is_down_step(&self, position: usize) -> bool {
        position >= 1 && position <= self.len() && self.steps[position - 1] == Step::D
    }

    pub fn heights(&self) -> Heights {
        let last_up = self.steps.iter().rposition(|&s| s == Step::U);
        let mut h = Vec::with_capacity(self.semilength());
        let mut h_star = Vec::with_capacity(self.semilength());
        let mut level = 0usize;
        for (k, s) in self.steps.iter().enumerate() {
            match s {
                Step::U => level += 1,
                Step::D => {
                    h.push(level);
                    let up_to_right = last_up.is_some_and(|u| u > k);
                    h_star.push(if up_to_right { level } else { level - 1 });
                    level -= 1;
                }
            }
        }
        Heights { h, h_star }
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::U => "U",
                Step::D => "D",
            })?;
        }
        Ok(())
    }
}

/// Parses either a step word (`"UUDD"`) or a down-step list (`"3,4"`,
/// `"[3, 4]"`). The empty string is the empty path.
impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.chars().all(|c| matches!(c, 'U' | 'D' | 'u' | 'd')) {
            let steps = s.chars().map(|c| if c.eq_ignore_ascii_case(&'U') { Step::U } else { Step::D }).collect();
            return DyckPath::new(steps);
        }
        let inner = s.trim_start_matches('[').trim_end_matches(']');
        let down = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::invalid(format!("not a Dyck path: {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        DyckPath::from_down_steps(&down)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PathRepr {
    Word(String),
    Down(Vec<usize>),
}

impl Serialize for DyckPath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DyckPath {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parsed = match PathRepr::deserialize(deserializer)? {
            PathRepr::Word(w) => w.parse(),
            PathRepr::Down(d) => DyckPath::from_down_steps(&d),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// All Dyck paths of the given length, each once, in lexicographic order
/// (`U < D`).
pub fn enumerate_dyck(length: usize) -> Result<DyckPaths> {
    if !length.is_multiple_of(2) {
        return Err(Error::invalid(format!("Dyck paths have even length, got {length}")));
    }
    let half = length / 2;
    let mut first = vec![Step::U; half];
    first.extend(std::iter::repeat_n(Step::D, half));
    Ok(DyckPaths { current: Some(first) })
}

pub struct DyckPaths {
    current: Option<Vec<Step>>,
}

impl Iterator for DyckPaths {
    type Item = DyckPath;

    fn next(&mut self) -> Option<DyckPath> {
        let steps = self.current.take()?;
        self.current = successor(&steps);
        Some(DyckPath { steps })
    }
}

/// Lexicographic successor: flip the rightmost `U` that can become a `D`
/// without leaving the axis, then refill with all remaining `U`s followed
/// by all `D`s.
fn successor(steps: &[Step]) -> Option<Vec<Step>> {
    let half = steps.len() / 2;
    let mut levels = Vec::with_capacity(steps.len());
    let mut level = 0usize;
    for s in steps {
        levels.push(level);
        match s {
            Step::U => level += 1,
            Step::D => level -= 1,
        }
    }
    let pivot = (0..steps.len()).rev().find(|&k| steps[k] == Step::U && levels[k] >= 1)?;
    let mut next = steps[..pivot].to_vec();
    next.push(Step::D);
    let ups_used = next.iter().filter(|&&s| s == Step::U).count();
    next.extend(std::iter::repeat_n(Step::U, half - ups_used));
    next.resize(steps.len(), Step::D);
    Some(next)
}

pub fn catalan(n: usize) -> num_bigint::BigInt {
    // C_{k+1} = C_k * 2(2k+1) / (k+2)
    let mut c = num_bigint::BigInt::from(1);
    for k in 0..n {
        c = c * (2 * (2 * k + 1)) / (k + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> DyckPath {
        s.parse().unwrap()
    }

    #[test]
    fn heights_of_small_paths() {
        assert_eq!(path("UUDD").heights().h, vec![2, 1]);
        assert_eq!(path("UUDD").heights().h_star, vec![1, 0]);
        assert_eq!(path("UDUD").heights().h_star, vec![1, 0]);
    }

    #[test]
    fn heights_of_worked_example_paths() {
        let pb = DyckPath::from_down_steps(&[4, 5, 6, 8, 12, 13, 14]).unwrap();
        let hb = pb.heights();
        assert_eq!(hb.h, vec![3, 2, 1, 1, 3, 2, 1]);
        assert_eq!(hb.h_star, vec![3, 2, 1, 1, 2, 1, 0]);
        let pa = DyckPath::from_down_steps(&[2, 6, 7, 10, 11, 12]).unwrap();
        assert_eq!(pa.heights().h, vec![1, 3, 2, 3, 2, 1]);
    }

    #[test]
    fn rejects_bad_paths() {
        assert!("DU".parse::<DyckPath>().is_err());
        assert!("UUD".parse::<DyckPath>().is_err());
        assert!(DyckPath::from_down_steps(&[1, 2]).is_err());
        assert!(DyckPath::from_down_steps(&[5]).is_err());
        assert!(enumerate_dyck(5).is_err());
    }

    #[test]
    fn both_representations_agree() {
        let p = path("UUDUDD");
        assert_eq!(p.down_steps(), vec![3, 5, 6]);
        assert_eq!(path("[3, 5, 6]"), p);
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"UUDUDD\"");
        assert_eq!(serde_json::from_str::<DyckPath>("[3,5,6]").unwrap(), p);
        assert_eq!(serde_json::from_str::<DyckPath>("\"UUDUDD\"").unwrap(), p);
    }

    #[test]
    fn enumeration_small() {
        let empty: Vec<_> = enumerate_dyck(0).unwrap().collect();
        assert_eq!(empty, vec![DyckPath::empty()]);
        let four: Vec<String> = enumerate_dyck(4).unwrap().map(|p| p.to_string()).collect();
        assert_eq!(four, vec!["UUDD", "UDUD"]);
    }

    /// Independent count by dynamic programming over (steps, level).
    fn ballot_count(len: usize) -> u64 {
        let mut ways = vec![0u64; len + 2];
        ways[0] = 1;
        for _ in 0..len {
            let mut next = vec![0u64; len + 2];
            for (lvl, &c) in ways.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                next[lvl + 1] += c;
                if lvl > 0 {
                    next[lvl - 1] += c;
                }
            }
            ways = next;
        }
        ways[0]
    }

    #[test]
    fn enumeration_counts_and_order() {
        for half in 0..=8 {
            let paths: Vec<_> = enumerate_dyck(2 * half).unwrap().collect();
            assert_eq!(paths.len() as u64, ballot_count(2 * half));
            assert_eq!(num_bigint::BigInt::from(paths.len()), catalan(half));
            assert!(paths.windows(2).all(|p| p[0] < p[1]));
        }
        assert_eq!(enumerate_dyck(12).unwrap().count(), 132);
    }
}
