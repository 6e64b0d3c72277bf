//! Membership tests for a proposed outcome: feasibility plus blocking.
//!
//! Blocking scans only the basis `W`: an outcome is blocked by some coalition
//! if and only if it is blocked by a listed entry, so no closure is ever
//! needed on the blocking side. Feasibility in NTU mode is an exact
//! decomposition search over entries; in TU/hybrid mode it is a budget check
//! against the grand-coalition value.

use std::collections::HashSet;

use crate::error::GameError;
use crate::game::{Allocation, Coalition, Game, Mode, NtuEntry, TuEntry};

/// Why an outcome is (not) achievable by the grand coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// NTU: a partition of the players into entries whose vectors
    /// concatenate exactly to the outcome.
    Decomposition(Vec<NtuEntry>),
    /// TU/hybrid: the outcome total fits within the grand-coalition value.
    GrandBudget,
}

/// The entry a blocking coalition acts through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Blocker {
    Ntu(NtuEntry),
    Tu(TuEntry),
}

impl Blocker {
    pub fn coalition(&self) -> Coalition {
        match self {
            Blocker::Ntu(e) => e.coalition,
            Blocker::Tu(e) => e.coalition,
        }
    }
}

/// Verdict of the membership check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    InCore { feasibility: Feasibility },
    NotFeasible,
    Blocked { blocker: Blocker },
}

impl Membership {
    pub fn is_in_core(&self) -> bool {
        matches!(self, Membership::InCore { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            Membership::InCore { .. } => "IN_CORE",
            Membership::NotFeasible => "NOT_FEASIBLE",
            Membership::Blocked { .. } => "BLOCKED",
        }
    }
}

/// First listed NTU entry `(B, w)` with `w_b > u_b` for every member, if any.
pub fn find_block_ntu<'g>(game: &'g Game, u: &Allocation) -> Option<&'g NtuEntry> {
    game.ntu_entries.iter().find(|entry| blocks_ntu(entry, u))
}

pub(crate) fn blocks_ntu(entry: &NtuEntry, u: &Allocation) -> bool {
    entry
        .coalition
        .members()
        .zip(&entry.vector)
        .all(|(member, w)| *w > u[member])
}

/// First listed TU entry `(B, v)` with `v > Σ_{b∈B} u_b`, if any.
pub fn find_block_tu<'g>(game: &'g Game, u: &Allocation) -> Option<&'g TuEntry> {
    game.tu_entries
        .iter()
        .find(|entry| entry.value > u.total_over(entry.coalition))
}

/// Can the grand coalition actually achieve `u`?
///
/// NTU: depth-first search for a partition of all players into entries whose
/// vectors match `u` exactly (no free disposal), always expanding the lowest
/// unassigned player. TU/hybrid: `Σ u_i ≤ v(A)`, with `v(A)` taken from the
/// explicit input when present and from the closure otherwise.
pub fn is_feasible(game: &Game, u: &Allocation) -> Result<Option<Feasibility>, GameError> {
    game.check_allocation(u)?;
    match game.mode {
        Mode::Ntu => Ok(decompose(game, u).map(Feasibility::Decomposition)),
        Mode::Tu => {
            let grand = crate::closure::tu_grand_value(game)?;
            Ok((u.total() <= grand).then_some(Feasibility::GrandBudget))
        }
        Mode::Hybrid => {
            let grand = game
                .explicit_grand_value
                .clone()
                .ok_or(GameError::MissingGrandValue)?;
            Ok((u.total() <= grand).then_some(Feasibility::GrandBudget))
        }
    }
}

fn decompose(game: &Game, u: &Allocation) -> Option<Vec<NtuEntry>> {
    let all = game.grand_coalition();
    // Only entries that reproduce `u` exactly on their members can take part.
    let usable: Vec<&NtuEntry> = game
        .ntu_entries
        .iter()
        .filter(|e| {
            e.coalition
                .members()
                .zip(&e.vector)
                .all(|(member, w)| *w == u[member])
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut dead_ends: HashSet<u32> = HashSet::new();
    if search(all, Coalition::EMPTY, &usable, &mut chosen, &mut dead_ends) {
        return Some(chosen.into_iter().map(|i| usable[i].clone()).collect());
    }
    None
}

fn search(
    all: Coalition,
    assigned: Coalition,
    usable: &[&NtuEntry],
    chosen: &mut Vec<usize>,
    dead_ends: &mut HashSet<u32>,
) -> bool {
    if assigned == all {
        return true;
    }
    if dead_ends.contains(&assigned.bits()) {
        return false;
    }
    let lowest = all.difference(assigned).lowest().expect("unassigned player exists");
    for (i, entry) in usable.iter().enumerate() {
        if entry.coalition.contains(lowest) && entry.coalition.is_disjoint(assigned) {
            chosen.push(i);
            if search(all, assigned.union(entry.coalition), usable, chosen, dead_ends) {
                return true;
            }
            chosen.pop();
        }
    }
    dead_ends.insert(assigned.bits());
    false
}

/// Full membership check: feasibility first, then blocking through `W`.
pub fn membership(game: &Game, u: &Allocation) -> Result<Membership, GameError> {
    game.check_allocation(u)?;
    let Some(feasibility) = is_feasible(game, u)? else {
        return Ok(Membership::NotFeasible);
    };
    let blocker = match game.mode {
        Mode::Ntu | Mode::Hybrid => find_block_ntu(game, u).map(|e| Blocker::Ntu(e.clone())),
        Mode::Tu => find_block_tu(game, u).map(|e| Blocker::Tu(e.clone())),
    };
    Ok(match blocker {
        Some(blocker) => Membership::Blocked { blocker },
        None => Membership::InCore { feasibility },
    })
}
