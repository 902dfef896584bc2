//! Labeled Dyck paths (Hermite histories) and their bijection with perfect
//! matchings.

use serde::{Deserialize, Serialize};

use crate::dyck::{DyckPath, Step};
use crate::error::{Error, Result};

/// A Dyck path with positive integer labels on its down steps.
///
/// Plain form labels every down step with `1..=h_i`. Starred form labels all
/// but the last down step with `1..=h*_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledDyckPath {
    pub path: DyckPath,
    pub labels: Vec<usize>,
}

fn label_bounds(path: &DyckPath, starred: bool) -> Vec<usize> {
    let heights = path.heights();
    if starred {
        let mut b = heights.h_star;
        b.pop();
        b
    } else {
        heights.h
    }
}

impl LabeledDyckPath {
    /// A plain Hermite history: one label per down step, `1 <= label_i <= h_i`.
    pub fn hermite(path: DyckPath, labels: Vec<usize>) -> Result<Self> {
        Self::checked(path, labels, false)
    }

    pub fn starred(path: DyckPath, labels: Vec<usize>) -> Result<Self> {
        Self::checked(path, labels, true)
    }

    fn checked(path: DyckPath, labels: Vec<usize>, starred: bool) -> Result<Self> {
        let bounds = label_bounds(&path, starred);
        if labels.len() != bounds.len() {
            return Err(Error::invalid(format!("expected {} labels, got {}", bounds.len(), labels.len())));
        }
        for (i, (&l, &b)) in labels.iter().zip(&bounds).enumerate() {
            if l == 0 || l > b {
                return Err(Error::Constraint { index: i + 1, message: format!("label {l} is outside 1..={b}") });
            }
        }
        Ok(LabeledDyckPath { path, labels })
    }
}

/// Every admissible label vector for `path`, in lexicographic order. The
/// count is `prod h_i`, or `prod h*_i` over all but the last down step when
/// `starred`.
pub fn enumerate_hermite(path: &DyckPath, starred: bool) -> HermiteLabels {
    let bounds = label_bounds(path, starred);
    let current = if bounds.contains(&0) { None } else { Some(vec![1; bounds.len()]) };
    HermiteLabels { bounds, current }
}

pub struct HermiteLabels {
    bounds: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Iterator for HermiteLabels {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let labels = self.current.take()?;
        let mut next = labels.clone();
        for i in (0..next.len()).rev() {
            if next[i] < self.bounds[i] {
                next[i] += 1;
                self.current = Some(next);
                break;
            }
            next[i] = 1;
        }
        Some(labels)
    }
}

/// A perfect matching of `1..=2n`, stored as pairs `(i, j)` with `i < j`,
/// sorted by `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let size = 2 * pairs.len();
        let mut seen = vec![false; size + 1];
        let mut normalized = Vec::with_capacity(pairs.len());
        for (x, y) in pairs {
            let (i, j) = (x.min(y), x.max(y));
            if i == 0 || j > size || i == j {
                return Err(Error::invalid(format!("pair ({x}, {y}) is not a pair of distinct points of 1..={size}")));
            }
            for p in [i, j] {
                if seen[p] {
                    return Err(Error::invalid(format!("point {p} is matched twice")));
                }
                seen[p] = true;
            }
            normalized.push((i, j));
        }
        normalized.sort_unstable();
        Ok(Matching { pairs: normalized })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `partner[k]` for `k` in `1..=2n`; index 0 unused.
    pub fn partners(&self) -> Vec<usize> {
        let mut partner = vec![0; 2 * self.pairs.len() + 1];
        for &(i, j) in &self.pairs {
            partner[i] = j;
            partner[j] = i;
        }
        partner
    }
}

impl TryFrom<Vec<(usize, usize)>> for Matching {
    type Error = Error;

    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        Matching::new(pairs)
    }
}

impl From<Matching> for Vec<(usize, usize)> {
    fn from(m: Matching) -> Self {
        m.pairs
    }
}

/// Reads the path left to right; a down step labeled `L` is matched with the
/// `L`-th not-yet-matched up step, counting leftward from the down step
/// (nearest first).
pub fn hermite_to_matching(hh: &LabeledDyckPath) -> Result<Matching> {
    if hh.labels.len() != hh.path.semilength() {
        return Err(Error::invalid("a plain Hermite history labels every down step"));
    }
    let mut open: Vec<usize> = Vec::new();
    let mut pairs = Vec::with_capacity(hh.labels.len());
    let mut labels = hh.labels.iter().enumerate();
    for (k, step) in hh.path.steps().iter().enumerate() {
        match step {
            Step::U => open.push(k + 1),
            Step::D => {
                let (i, &label) = labels.next().expect("one label per down step");
                if label == 0 || label > open.len() {
                    return Err(Error::Constraint {
                        index: i + 1,
                        message: format!("label {label} but only {} unmatched up steps", open.len()),
                    });
                }
                let up = open.remove(open.len() - label);
                pairs.push((up, k + 1));
            }
        }
    }
    Matching::new(pairs)
}

pub fn matching_to_hermite(m: &Matching) -> LabeledDyckPath {
    let partner = m.partners();
    let size = partner.len() - 1;
    let mut steps = Vec::with_capacity(size);
    let mut labels = Vec::with_capacity(size / 2);
    let mut open: Vec<usize> = Vec::new();
    for (k, &other) in partner.iter().enumerate().skip(1) {
        if other > k {
            steps.push(Step::U);
            open.push(k);
        } else {
            steps.push(Step::D);
            let idx = open.iter().position(|&u| u == other).expect("partner is an open up step");
            labels.push(open.len() - idx);
            open.remove(idx);
        }
    }
    let path = DyckPath::new(steps).expect("matchings give Dyck paths");
    LabeledDyckPath { path, labels }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> DyckPath {
        s.parse().unwrap()
    }

    #[test]
    fn enumerate_small() {
        let all: Vec<_> = enumerate_hermite(&path("UUDD"), false).collect();
        assert_eq!(all, vec![vec![1, 1], vec![2, 1]]);
        assert_eq!(enumerate_hermite(&path("UDUD"), false).count(), 1);
        // starred drops the final down step
        assert_eq!(enumerate_hermite(&path("UUDUDD"), true).collect::<Vec<_>>(), vec![vec![1, 1], vec![2, 1]]);
        assert_eq!(enumerate_hermite(&DyckPath::empty(), false).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn matching_examples() {
        let m = hermite_to_matching(&LabeledDyckPath::hermite(path("UD"), vec![1]).unwrap()).unwrap();
        assert_eq!(m.pairs(), &[(1, 2)]);
        let m = hermite_to_matching(&LabeledDyckPath::hermite(path("UUDD"), vec![1, 1]).unwrap()).unwrap();
        assert_eq!(m.pairs(), &[(1, 4), (2, 3)]);
        let m = hermite_to_matching(&LabeledDyckPath::hermite(path("UUDD"), vec![2, 1]).unwrap()).unwrap();
        assert_eq!(m.pairs(), &[(1, 3), (2, 4)]);
    }

    #[test]
    fn over_large_label_rejected() {
        assert!(LabeledDyckPath::hermite(path("UDUD"), vec![2, 1]).is_err());
        let raw = LabeledDyckPath { path: path("UDUD"), labels: vec![1, 2] };
        assert!(matches!(hermite_to_matching(&raw), Err(Error::Constraint { index: 2, .. })));
    }

    #[test]
    fn matching_validation() {
        assert!(Matching::new(vec![(1, 1)]).is_err());
        assert!(Matching::new(vec![(1, 2), (2, 3)]).is_err());
        assert!(Matching::new(vec![(1, 5), (2, 3)]).is_err());
        assert_eq!(Matching::new(vec![(4, 1), (3, 2)]).unwrap().pairs(), &[(1, 4), (2, 3)]);
        assert_eq!(serde_json::to_string(&Matching::new(vec![(1, 2)]).unwrap()).unwrap(), "[[1,2]]");
    }

    #[test]
    fn round_trip_length_six() {
        let mut count = 0;
        for p in crate::dyck::enumerate_dyck(6).unwrap() {
            for labels in enumerate_hermite(&p, false) {
                let hh = LabeledDyckPath::hermite(p.clone(), labels).unwrap();
                let m = hermite_to_matching(&hh).unwrap();
                assert_eq!(matching_to_hermite(&m), hh);
                count += 1;
            }
        }
        assert_eq!(count, 15);
    }
}
