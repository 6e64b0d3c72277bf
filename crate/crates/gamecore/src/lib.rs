//! Cooperative games in characteristic form, represented by a concise
//! superadditive basis.
//!
//! A game lists utility possibility vectors (NTU), coalition values (TU), or
//! both flavors at once (hybrid: only the grand coalition transfers utility)
//! for the coalitions that introduce synergy; everything else follows by
//! superadditive closure. On top of that representation this crate offers:
//!
//! - [`closure`]: derived coalition values, Pareto frontiers, welfare totals;
//! - [`corecheck`]: membership tests for a proposed outcome (feasibility and
//!   blocking, which only ever scans the basis);
//! - [`solvers`]: core-nonemptiness deciders for all regimes, with
//!   self-verifying witnesses and exact rational arithmetic throughout;
//! - [`reductions`]: exact-cover and node-cover gadget generators with known
//!   ground truth, plus exact deciders for the source problems;
//! - [`oracle`]: brute-force reference implementations for tiny instances.
//!
//! Game files are JSON documents with exact rationals; see [`format`].

pub mod closure;
pub mod corecheck;
pub mod error;
pub mod format;
pub mod game;
pub mod oracle;
pub mod rational;
pub mod reductions;
pub mod solvers;

pub use error::GameError;
pub use format::{parse_game, serialize_game, ParsedGame};
pub use game::{
    normalize, validate_superadditive_hybrid, Allocation, Coalition, Game, HybridReport, Mode,
    NtuEntry, PlayerSet, TuEntry, UtilityVector,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use solvers::{decide_hybrid, decide_ntu, decide_ntu_explicit, decide_tu, Decision};
