//! Front ends for the crossout engine: the local HTTP game service and the
//! terminal game.

pub mod play;
pub mod service;
