//! Inversion statistics relative to the crossout marking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marking::{crossout_mark, Mark};
use crate::permutation::Permutation;

/// Number of pairs `i < j` with `w(i) > w(j)`, `i` marked `x` and `j` marked `y`.
pub fn xy_inversions(w: &Permutation, x: Mark, y: Mark) -> u64 {
    let marking = crossout_mark(w);
    let mut count = 0;
    for i in 1..=w.len() {
        if marking.mark_at(i) != x {
            continue;
        }
        for j in i + 1..=w.len() {
            if marking.mark_at(j) == y && w.get(i) > w.get(j) {
                count += 1;
            }
        }
    }
    count
}

/// Pairs `i < j` with `w(i) < w(j)` and `i` marked `B`. Even lengths only.
pub fn z_stat(w: &Permutation) -> Result<u64> {
    if !w.is_even() {
        return Err(Error::invalid("z is defined here for even-length permutations only"));
    }
    Ok(count_z(w, crossout_mark(w).marks()))
}

fn count_z(w: &Permutation, marks: &[Mark]) -> u64 {
    let v = w.values();
    let mut count = 0;
    for i in 0..v.len() {
        if marks[i] != Mark::B {
            continue;
        }
        count += v[i + 1..].iter().filter(|&&x| x > v[i]).count() as u64;
    }
    count
}

/// All statistics of one permutation, from a single marking pass.
///
/// `z` is `None` for odd lengths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StatBundle {
    pub aa: u64,
    pub ab: u64,
    pub ba: u64,
    pub bb: u64,
    pub z: Option<u64>,
    pub inv: u64,
}

pub fn stat_bundle(w: &Permutation) -> StatBundle {
    let marking = crossout_mark(w);
    let marks = marking.marks();
    let v = w.values();
    let mut s = StatBundle::default();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] < v[j] {
                continue;
            }
            s.inv += 1;
            match (marks[i], marks[j]) {
                (Mark::A, Mark::A) => s.aa += 1,
                (Mark::A, Mark::B) => s.ab += 1,
                (Mark::B, Mark::A) => s.ba += 1,
                (Mark::B, Mark::B) => s.bb += 1,
            }
        }
    }
    if w.is_even() {
        s.z = Some(count_z(w, marks));
    }
    s
}
