//! Exact combinatorics for the crossout procedure.
//!
//! A permutation `w` of `1..=N` records two players' preferences over `N`
//! morsels: Bob prefers morsels further right, Alice prefers larger values.
//! The crossout procedure assigns every morsel to the player who eats it
//! under optimal alternating play, and the crossout correspondence turns
//! that assignment into a pair of labeled Dyck paths (and back).
//!
//! Modules, bottom up:
//!
//! * [`permutation`], [`marking`], [`dyck`]: the basic objects.
//! * [`correspondence`]: [`encode`] / [`decode`].
//! * [`hermite`]: Hermite histories and matchings.
//! * [`stats`], [`poly`], [`probability`]: statistics, q-polynomials, exact rationals.
//! * [`identities`]: brute-force checks of the enumerative identities.
//! * [`game`]: the playable game with the crossout engine.

pub mod correspondence;
pub mod dyck;
pub mod error;
pub mod game;
pub mod hermite;
pub mod identities;
pub mod marking;
pub mod ostat;
pub mod permutation;
pub mod poly;
pub mod probability;
pub mod stats;

pub use correspondence::{decode, encode, CrossoutTuple, Parity};
pub use dyck::{enumerate_dyck, DyckPath, Heights, Step};
pub use error::{Error, Result};
pub use game::{new_game, playout_optimal, GameSetup, GameState, Move, Player};
pub use hermite::{enumerate_hermite, hermite_to_matching, matching_to_hermite, LabeledDyckPath, Matching};
pub use identities::{IdentityReport, Side, Suite, Verdict};
pub use marking::{crossout_mark, Mark, Marking};
pub use permutation::Permutation;
pub use poly::{Polynomial, Var};
pub use probability::alice_probability;
pub use stats::{stat_bundle, xy_inversions, z_stat, StatBundle};
