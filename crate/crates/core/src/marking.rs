use std::fmt;

use serde::{Deserialize, Serialize};

use crate::permutation::Permutation;

/// Which player a morsel is assigned to: `A` for Alice, `B` for Bob.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mark {
    A,
    B,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::A => "A",
            Mark::B => "B",
        })
    }
}

/// Result of the crossout procedure on a permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    marks: Vec<Mark>,
    order: Vec<usize>,
}

impl Marking {
    /// Mark of each position, indexed from position 1.
    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    /// Positions (1-based) in the order they were marked: B, A, B, A, ...
    pub fn mark_order(&self) -> &[usize] {
        &self.order
    }

    pub fn mark_at(&self, position: usize) -> Mark {
        self.marks[position - 1]
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    /// Positions marked `mark`, ascending.
    pub fn positions(&self, mark: Mark) -> Vec<usize> {
        self.marks.iter().enumerate().filter(|&(_, &m)| m == mark).map(|(i, _)| i + 1).collect()
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.marks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Alternately mark `B` below the smallest unmarked value and `A` below the
/// leftmost unmarked position, starting with `B`, until everything is marked.
pub fn crossout_mark(w: &Permutation) -> Marking {
    let n = w.len();
    let inv = w.inverse();
    let mut marks: Vec<Option<Mark>> = vec![None; n];
    let mut order = Vec::with_capacity(n);
    // Cursors only ever move forward: next candidate value for B, next
    // candidate position for A.
    let mut next_value = 1;
    let mut next_position = 1;
    let mut turn = Mark::B;
    while order.len() < n {
        let pos = match turn {
            Mark::B => {
                while marks[inv[next_value - 1] - 1].is_some() {
                    next_value += 1;
                }
                inv[next_value - 1]
            }
            Mark::A => {
                while marks[next_position - 1].is_some() {
                    next_position += 1;
                }
                next_position
            }
        };
        marks[pos - 1] = Some(turn);
        order.push(pos);
        turn = match turn {
            Mark::A => Mark::B,
            Mark::B => Mark::A,
        };
    }
    Marking { marks: marks.into_iter().map(|m| m.expect("every position marked")).collect(), order }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::LexPermutations;

    fn marks_of(s: &str) -> String {
        crossout_mark(&s.parse().unwrap()).to_string()
    }

    #[test]
    fn worked_example_marking() {
        assert_eq!(marks_of("2 6 4 1 3 11 5 7 10 12 9 8"), "A A B B B A B A A A B B");
    }

    #[test]
    fn small_cases() {
        assert_eq!(marks_of("1 2"), "B A");
        assert_eq!(marks_of("2 1"), "A B");
        assert_eq!(marks_of("1"), "B");
        assert_eq!(marks_of("3 2 1"), "A B B");
    }

    #[test]
    fn marking_invariants_exhaustive() {
        for n in 1..=7 {
            for w in LexPermutations::all(n) {
                let m = crossout_mark(&w);
                let a = m.positions(Mark::A);
                let b = m.positions(Mark::B);
                assert_eq!(b.len(), n.div_ceil(2));
                assert_eq!(a.len(), n / 2);
                let order = m.mark_order();
                for (k, &pos) in order.iter().enumerate() {
                    let expected = if k % 2 == 0 { Mark::B } else { Mark::A };
                    assert_eq!(m.mark_at(pos), expected);
                }
                let a_seq: Vec<_> = order.iter().skip(1).step_by(2).copied().collect();
                assert!(a_seq.windows(2).all(|p| p[0] < p[1]));
                let b_vals: Vec<_> = order.iter().step_by(2).map(|&p| w.get(p)).collect();
                assert!(b_vals.windows(2).all(|p| p[0] < p[1]));
            }
        }
    }
}
