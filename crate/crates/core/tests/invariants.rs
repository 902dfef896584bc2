//! Exhaustive and randomized invariants of the crossout correspondence,
//! checked against oracles that do not go through `encode`/`decode`.

use std::collections::BTreeSet;

use crossout::dyck::catalan;
use crossout::identities::{even_double_factorial, odd_double_factorial};
use crossout::permutation::LexPermutations;
use crossout::{
    alice_probability, crossout_mark, decode, encode, enumerate_dyck, enumerate_hermite, hermite_to_matching,
    matching_to_hermite, playout_optimal, stat_bundle, CrossoutTuple, DyckPath, LabeledDyckPath, Mark, Matching,
    Parity, Permutation, Player,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn tuple_within_bounds(t: &CrossoutTuple) -> bool {
    CrossoutTuple::new(t.pa().clone(), t.pb().clone(), t.ell().to_vec(), t.em().to_vec(), t.parity()).is_ok()
}

#[test]
fn round_trip_exhaustive_up_to_eight() {
    for n in 1..=8 {
        for w in LexPermutations::all(n) {
            let t = encode(&w);
            assert!(tuple_within_bounds(&t), "{w}");
            assert_eq!(t.parity(), Parity::of_len(n));
            assert_eq!(decode(&t).unwrap(), w);
        }
    }
}

/// Encoding straight from the marking, the way the paths are defined,
/// without sharing code with `encode`.
#[test]
fn paths_follow_the_marking() {
    for n in 1..=7 {
        for w in LexPermutations::all(n) {
            let m = crossout_mark(&w);
            let t = encode(&w);
            let mut alice_values: Vec<usize> = m.positions(Mark::A).iter().map(|&a| w.get(a)).collect();
            alice_values.sort();
            let mut bob_shifted: Vec<usize> = m.positions(Mark::B).iter().map(|&b| b + 1).collect();
            if n % 2 == 0 {
                bob_shifted.push(n + 2);
            } else {
                alice_values.push(n + 1);
            }
            assert_eq!(t.pa().down_steps(), alice_values);
            assert_eq!(t.pb().down_steps(), bob_shifted);
        }
    }
}

#[test]
fn every_tuple_decodes_and_reencodes() {
    for size in 1..=7 {
        let tuples = crossout::identities::all_tuples(size).unwrap();
        assert_eq!(BigInt::from(tuples.len()), crossout::permutation::factorial(size));
        let mut images = BTreeSet::new();
        for t in &tuples {
            let w = decode(t).unwrap();
            assert_eq!(&encode(&w), t);
            images.insert(w);
        }
        assert_eq!(images.len(), tuples.len());
    }
}

fn random_permutation() -> impl Strategy<Value = Permutation> {
    (9usize..=14)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100_000))]

    #[test]
    fn round_trip_random_large(w in random_permutation()) {
        let t = encode(&w);
        prop_assert!(tuple_within_bounds(&t));
        prop_assert_eq!(decode(&t).unwrap(), w);
    }
}

#[test]
fn path_sums() {
    for n in 0..=8usize {
        let paths: Vec<DyckPath> = enumerate_dyck(2 * n).unwrap().collect();
        assert_eq!(BigInt::from(paths.len()), catalan(n));
        if n == 0 {
            continue;
        }
        let plain: BigInt =
            paths.iter().map(|p| p.heights().h.iter().map(|&h| BigInt::from(h)).product::<BigInt>()).sum();
        assert_eq!(plain, odd_double_factorial(n));
        let hermite: usize = paths.iter().map(|p| enumerate_hermite(p, false).count()).sum();
        assert_eq!(BigInt::from(hermite), odd_double_factorial(n));
        let starred: usize = enumerate_dyck(2 * n + 2).unwrap().map(|p| enumerate_hermite(&p, true).count()).sum();
        assert_eq!(BigInt::from(starred), even_double_factorial(n));
    }
}

/// All perfect matchings of `1..=2n`: pair the smallest free point with each
/// other free point in turn.
fn all_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = free[0];
        for k in 1..free.len() {
            let rest: Vec<usize> =
                free.iter().enumerate().filter(|&(i, _)| i != 0 && i != k).map(|(_, &x)| x).collect();
            acc.push((first, free[k]));
            go(rest, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go((1..=2 * n).collect(), &mut Vec::new(), &mut out);
    out
}

#[test]
fn hermite_matching_bijection_exhaustive() {
    for n in 1..=4 {
        let matchings = all_matchings(n);
        assert_eq!(BigInt::from(matchings.len()), odd_double_factorial(n));
        let mut histories = BTreeSet::new();
        for pairs in matchings {
            let m = Matching::new(pairs).unwrap();
            let hh = matching_to_hermite(&m);
            assert!(LabeledDyckPath::hermite(hh.path.clone(), hh.labels.clone()).is_ok());
            assert_eq!(hermite_to_matching(&hh).unwrap(), m);
            // partner of each down step lies to its left
            for (i, j) in m.pairs() {
                assert!(hh.path.is_down_step(*j) && !hh.path.is_down_step(*i));
            }
            histories.insert(hh);
        }
        let mut total = 0;
        for p in enumerate_dyck(2 * n).unwrap() {
            for labels in enumerate_hermite(&p, false) {
                let hh = LabeledDyckPath::hermite(p.clone(), labels).unwrap();
                assert!(histories.contains(&hh));
                assert_eq!(matching_to_hermite(&hermite_to_matching(&hh).unwrap()), hh);
                total += 1;
            }
        }
        assert_eq!(total, histories.len());
    }
}

#[test]
fn single_rank_probability_against_marking() {
    for n in 1..=4usize {
        let total = crossout::permutation::factorial(2 * n);
        for k in 1..=2 * n {
            let hits =
                LexPermutations::all(2 * n).filter(|w| crossout_mark(w).mark_at(w.inverse()[k - 1]) == Mark::A).count();
            let expected = alice_probability(n, &[k]).unwrap();
            assert_eq!(BigRational::new(BigInt::from(hits), total.clone()), expected, "n={n} k={k}");
        }
    }
}

#[test]
fn statistics_identities_exhaustive() {
    for n in 1..=4usize {
        for w in LexPermutations::all(2 * n) {
            let s = stat_bundle(&w);
            let t = encode(&w);
            assert_eq!(s.ba, 0);
            assert_eq!(s.inv, s.aa + s.ab + s.bb);
            let height_excess: usize = t.pa().heights().h.iter().map(|h| h - 1).sum();
            let z = (n * n + height_excess) as i64 - s.ab as i64 - s.bb as i64;
            assert_eq!(s.z, Some(z as u64));
            assert_eq!(s.aa as usize, t.ell().iter().map(|l| l - 1).sum::<usize>());
            assert_eq!(s.bb as usize, t.em().iter().map(|m| m - 1).sum::<usize>());
        }
    }
}

#[test]
fn playout_invariants_exhaustive() {
    for n in 1..=8 {
        for w in LexPermutations::all(n) {
            let marking = crossout_mark(&w);
            let history = playout_optimal(&w);
            assert_eq!(history.last().unwrap().player, Player::Bob);
            for m in &history {
                assert_eq!(m.player.mark(), marking.mark_at(m.position));
            }
            let order: Vec<usize> = history.iter().rev().map(|m| m.position).collect();
            assert_eq!(order, marking.mark_order());
            let alice: Vec<usize> = history.iter().filter(|m| m.player == Player::Alice).map(|m| m.position).collect();
            assert!(alice.windows(2).all(|p| p[0] > p[1]));
            let bob: Vec<usize> = history.iter().filter(|m| m.player == Player::Bob).map(|m| m.value).collect();
            assert!(bob.windows(2).all(|p| p[0] > p[1]));
        }
    }
}
