//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("invalid rational literal: {0:?}")]
    InvalidRational(String),
    #[error("player set must contain between 1 and {max} players, got {got}", max = crate::game::MAX_PLAYERS)]
    PlayerCount { got: usize },
    #[error("duplicate player label {0:?}")]
    DuplicatePlayer(String),
    #[error("invalid player label {0:?} (labels must be nonempty, without commas, braces or whitespace)")]
    InvalidLabel(String),
    #[error("unknown player label {0:?}")]
    UnknownPlayer(String),
    #[error("duplicate player {0:?} inside a coalition")]
    DuplicateCoalitionMember(String),
    #[error("basis entry has an empty coalition")]
    EmptyCoalition,
    #[error("utility vector length {got} does not match coalition size {expected}")]
    VectorLengthMismatch { expected: usize, got: usize },
    #[error("grand_value is required in hybrid mode")]
    MissingGrandValue,
    #[error("grand_set element has length {got}, expected {expected}")]
    GrandSetElementLength { expected: usize, got: usize },
    #[error("grand_set is required for the explicit decider but is not present")]
    MissingGrandSet,
    #[error("operation requires {expected} mode, game is {got}")]
    ModeMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("coalition uses player indices outside the player set")]
    CoalitionOutsidePlayers,
    #[error("outcome has {got} values, expected one per player ({expected})")]
    AllocationLength { expected: usize, got: usize },
    #[error("game is not normalized: player {0:?} lacks its required singleton entry")]
    NotNormalized(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}
