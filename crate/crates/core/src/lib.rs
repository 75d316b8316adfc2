//! Model checking for epistemic modal logic.
//!
//! Two semantic systems are provided: domain semantics with classical
//! knowledge ascriptions (truth at world/state pairs, acceptance derived),
//! and bilateral stable acceptance semantics over bounded models (support and
//! rejection defined directly). Around them sit consequence checkers,
//! the ◇-restricted normal-form transformer, and a suite of regression
//! claims with counter-model search.

pub mod arena;
pub mod bitset;
pub mod checker;
pub mod domain;
pub mod error;
pub mod models;
pub mod normal_form;
pub mod stable;
pub mod sweep;
pub mod syntax;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use syntax::{parse, Agent, Formula};

/// A set of worlds.
pub type Intension = BitSet<u16>;

/// A set of information states, indexed by each state's world mask.
pub type StateSet = BitSet<u64>;
