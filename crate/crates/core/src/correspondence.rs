//! The crossout correspondence between permutations and pairs of labeled
//! Dyck paths.
//!
//! For `w` of even length `2n`, Alice's path `pa` has length `2n` and down
//! steps at the values she eats; Bob's path `pb` has length `2n + 2` and down
//! steps one past each position he eats, plus a final down step at `2n + 2`
//! which carries no label.
//!
//! For odd length `2n - 1` both paths have length `2n`: `pa` gets an extra
//! final down step at `2n` (unlabeled), and `pb` is shifted by one as before.

use serde::{Deserialize, Serialize};

use crate::dyck::DyckPath;
use crate::error::{Error, Result};
use crate::marking::{crossout_mark, Mark};
use crate::ostat::OrderStatSet;
use crate::permutation::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_len(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `(pa, pb, ell, em)` plus the parity of the permutation it encodes.
///
/// The unlabeled final down step (of `pb` when even, of `pa` when odd) is
/// represented by a label vector one shorter than the number of down steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTuple")]
pub struct CrossoutTuple {
    pa: DyckPath,
    pb: DyckPath,
    ell: Vec<usize>,
    em: Vec<usize>,
    parity: Parity,
}

#[derive(Deserialize)]
struct RawTuple {
    pa: DyckPath,
    pb: DyckPath,
    ell: Vec<usize>,
    em: Vec<usize>,
    parity: Parity,
}

impl TryFrom<RawTuple> for CrossoutTuple {
    type Error = Error;

    fn try_from(raw: RawTuple) -> Result<Self> {
        CrossoutTuple::new(raw.pa, raw.pb, raw.ell, raw.em, raw.parity)
    }
}

fn check_labels(name: &str, labels: &[usize], bounds: &[usize], bound_name: &str) -> Result<()> {
    for (i, (&label, &bound)) in labels.iter().zip(bounds).enumerate() {
        if label == 0 || label > bound {
            return Err(Error::Constraint {
                index: i + 1,
                message: format!(
                    "{name}_{idx} = {label} is outside 1..={bound} ({bound_name}_{idx} = {bound})",
                    idx = i + 1
                ),
            });
        }
    }
    Ok(())
}

impl CrossoutTuple {
    /// Validates sizes and height bounds.
    pub fn new(pa: DyckPath, pb: DyckPath, ell: Vec<usize>, em: Vec<usize>, parity: Parity) -> Result<Self> {
        let n = pa.semilength();
        match parity {
            Parity::Even => {
                if pb.len() != pa.len() + 2 {
                    return Err(Error::invalid(format!(
                        "even tuple needs |pb| = |pa| + 2, got |pa| = {}, |pb| = {}",
                        pa.len(),
                        pb.len()
                    )));
                }
                if ell.len() != n || em.len() != n {
                    return Err(Error::invalid(format!("even tuple needs {n} labels on each path")));
                }
                check_labels("ell", &ell, &pa.heights().h, "h")?;
                check_labels("m", &em, &pb.heights().h_star, "h*")?;
            }
            Parity::Odd => {
                if n == 0 || pb.len() != pa.len() {
                    return Err(Error::invalid("odd tuple needs non-empty paths of equal length"));
                }
                if ell.len() != n - 1 || em.len() != n {
                    return Err(Error::invalid(format!("odd tuple needs {} labels on pa and {n} on pb", n - 1)));
                }
                check_labels("ell", &ell, &pa.heights().h_star, "h*")?;
                check_labels("m", &em, &pb.heights().h, "h")?;
            }
        }
        Ok(CrossoutTuple { pa, pb, ell, em, parity })
    }

    pub fn pa(&self) -> &DyckPath {
        &self.pa
    }

    pub fn pb(&self) -> &DyckPath {
        &self.pb
    }

    pub fn ell(&self) -> &[usize] {
        &self.ell
    }

    pub fn em(&self) -> &[usize] {
        &self.em
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Length of the permutation this tuple encodes.
    pub fn permutation_len(&self) -> usize {
        match self.parity {
            Parity::Even => self.pa.len(),
            Parity::Odd => self.pa.len() - 1,
        }
    }
}

/// Rank (1-based) of each element of `items` within `items` sorted ascending.
fn ranks(items: &[usize]) -> Vec<usize> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    items.iter().map(|x| sorted.binary_search(x).expect("present") + 1).collect()
}

/// `1 + #{j < i : seq[j] > seq[i]}` for every `i`.
fn left_greater_counts(seq: &[usize]) -> Vec<usize> {
    (0..seq.len()).map(|i| 1 + seq[..i].iter().filter(|&&x| x > seq[i]).count()).collect()
}

pub fn encode(w: &Permutation) -> CrossoutTuple {
    let len = w.len();
    let parity = Parity::of_len(len);
    let marking = crossout_mark(w);
    let a_positions = marking.positions(Mark::A);
    let b_positions = marking.positions(Mark::B);

    // Alice: values she eats, read left to right by position.
    let a_values: Vec<usize> = a_positions.iter().map(|&a| w.get(a)).collect();
    let mut pa_down = a_values.clone();
    pa_down.sort_unstable();
    // Bob: positions he eats, read in increasing order of value.
    let mut b_by_value = b_positions.clone();
    b_by_value.sort_unstable_by_key(|&b| w.get(b));
    let mut pb_down: Vec<usize> = b_positions.iter().map(|&b| b + 1).collect();

    match parity {
        Parity::Even => pb_down.push(len + 2),
        Parity::Odd => pa_down.push(len + 1),
    }

    let mut ell = vec![0; a_values.len()];
    for (j, label) in ranks(&a_values).into_iter().zip(left_greater_counts(&a_values)) {
        ell[j - 1] = label;
    }
    let mut em = vec![0; b_by_value.len()];
    for (k, label) in ranks(&b_by_value).into_iter().zip(left_greater_counts(&b_by_value)) {
        em[k - 1] = label;
    }

    let pa = DyckPath::from_down_steps(&pa_down).expect("crossout yields a Dyck path for Alice");
    let pb = DyckPath::from_down_steps(&pb_down).expect("crossout yields a Dyck path for Bob");
    CrossoutTuple { pa, pb, ell, em, parity }
}

/// Inverse of [`encode`], by filling boxes: Bob's boxes sit one left of each
/// labeled down step of `pb`; Alice's values (the labeled down steps of `pa`)
/// go, in increasing order, into the `ell_i`-th still-empty Alice box; then
/// Bob's boxes are filled left to right, each with the `m_i`-th smallest value
/// not yet used.
pub fn decode(t: &CrossoutTuple) -> Result<Permutation> {
    // Re-run validation so hand-assembled tuples get the same errors.
    let t = CrossoutTuple::new(t.pa.clone(), t.pb.clone(), t.ell.clone(), t.em.clone(), t.parity)?;
    let len = t.permutation_len();
    let b_boxes: Vec<usize> = t.pb.down_steps().into_iter().take(t.em.len()).map(|d| d - 1).collect();
    let mut is_b = vec![false; len + 1];
    for &b in &b_boxes {
        is_b[b] = true;
    }
    let a_boxes: Vec<usize> = (1..=len).filter(|&p| !is_b[p]).collect();
    let a_values: Vec<usize> = t.pa.down_steps().into_iter().take(t.ell.len()).collect();
    if a_boxes.len() != a_values.len() {
        return Err(Error::invalid("paths disagree on how many morsels each player eats"));
    }

    let mut w = vec![0; len];
    let mut empty_a = OrderStatSet::from_members(a_boxes.len(), 1..=a_boxes.len());
    for (i, (&value, &label)) in a_values.iter().zip(&t.ell).enumerate() {
        let slot = empty_a.take(label).ok_or_else(|| Error::Constraint {
            index: i + 1,
            message: format!("ell_{} = {label} exceeds the number of empty A boxes", i + 1),
        })?;
        w[a_boxes[slot - 1] - 1] = value;
    }

    let mut pool = OrderStatSet::from_members(len, (1..=len).filter(|v| !a_values.contains(v)));
    for (i, (&pos, &label)) in b_boxes.iter().zip(&t.em).enumerate() {
        let value = pool.take(label).ok_or_else(|| Error::Constraint {
            index: i + 1,
            message: format!("m_{} = {label} exceeds the number of unused values", i + 1),
        })?;
        w[pos - 1] = value;
    }
    Permutation::new(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example() {
        let t = encode(&w("2 6 4 1 3 11 5 7 10 12 9 8"));
        assert_eq!(t.pa().down_steps(), vec![2, 6, 7, 10, 11, 12]);
        assert_eq!(t.pb().down_steps(), vec![4, 5, 6, 8, 12, 13, 14]);
        assert_eq!(t.ell(), &[1, 1, 2, 2, 1, 1]);
        assert_eq!(t.em(), &[3, 1, 1, 1, 2, 1]);
        assert_eq!(t.parity(), Parity::Even);
        assert_eq!(decode(&t).unwrap(), w("2 6 4 1 3 11 5 7 10 12 9 8"));
    }

    #[test]
    fn smallest_even() {
        let t = encode(&w("1 2"));
        assert_eq!(t.pa().to_string(), "UD");
        assert_eq!(t.pb().to_string(), "UDUD");
        assert_eq!((t.ell(), t.em()), (&[1][..], &[1][..]));
        let t =
            CrossoutTuple::new("UD".parse().unwrap(), "UDUD".parse().unwrap(), vec![1], vec![1], Parity::Even).unwrap();
        assert_eq!(decode(&t).unwrap(), w("1 2"));
    }

    #[test]
    fn odd_example() {
        let t = encode(&w("3 2 1"));
        assert_eq!(t.parity(), Parity::Odd);
        assert_eq!(t.pa().down_steps(), vec![3, 4]);
        assert_eq!(t.ell(), &[1]);
        assert_eq!(t.pb().down_steps(), vec![3, 4]);
        assert_eq!(t.em(), &[2, 1]);
        assert_eq!(decode(&t).unwrap(), w("3 2 1"));
    }

    #[test]
    fn single_morsel() {
        let t = encode(&w("1"));
        assert_eq!(t.pa().to_string(), "UD");
        assert_eq!(t.pb().to_string(), "UD");
        assert!(t.ell().is_empty());
        assert_eq!(t.em(), &[1]);
        assert_eq!(decode(&t).unwrap(), w("1"));
    }

    #[test]
    fn bound_violation_names_index() {
        let err = CrossoutTuple::new("UD".parse().unwrap(), "UUDD".parse().unwrap(), vec![1], vec![2], Parity::Even)
            .unwrap_err();
        match err {
            Error::Constraint { index, message } => {
                assert_eq!(index, 1);
                assert!(message.contains("m_1 = 2"), "{message}");
                assert!(message.contains("h*_1 = 1"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn size_mismatches_rejected() {
        let p = |s: &str| s.parse::<DyckPath>().unwrap();
        assert!(CrossoutTuple::new(p("UD"), p("UD"), vec![1], vec![1], Parity::Even).is_err());
        assert!(CrossoutTuple::new(p("UD"), p("UDUD"), vec![], vec![1], Parity::Even).is_err());
        assert!(CrossoutTuple::new(p("UUDD"), p("UD"), vec![1], vec![1, 1], Parity::Odd).is_err());
        assert!(CrossoutTuple::new(p("UD"), p("UDUD"), vec![0], vec![1], Parity::Even).is_err());
    }

    #[test]
    fn json_shape() {
        let t = encode(&w("1 2"));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"pa":"UD","pb":"UDUD","ell":[1],"em":[1],"parity":"even"}"#);
        let back: CrossoutTuple = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let bad = r#"{"pa":"UD","pb":"UUDD","ell":[1],"em":[2],"parity":"even"}"#;
        assert!(serde_json::from_str::<CrossoutTuple>(bad).is_err());
        let lists = r#"{"pa":[2],"pb":[2,4],"ell":[1],"em":[1],"parity":"even"}"#;
        assert_eq!(serde_json::from_str::<CrossoutTuple>(lists).unwrap(), t);
    }
}
