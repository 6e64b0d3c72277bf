//! Superadditive closure: derived coalition values and utility frontiers.
//!
//! The basis lists vectors (or values) only for synergy-introducing
//! coalitions; everything else follows by optimally partitioning a coalition
//! into listed pieces. TU values use a subset-split dynamic program; NTU
//! frontiers combine entry vectors over disjoint covers, pruning dominated
//! vectors at every merge. Pruning is decision-preserving downstream because
//! blocking is strict: a componentwise-larger vector is unblocked whenever the
//! smaller one is.

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::Zero;

use crate::error::GameError;
use crate::game::{Coalition, Game, UtilityVector};
use crate::rational::Rational;

/// Frontier tables are dense in `2^|B|`; beyond this the caller gets a
/// resource error rather than a guess.
pub const MAX_FRONTIER_PLAYERS: usize = 16;

static DP_INVOCATIONS: AtomicU64 = AtomicU64::new(0);

/// Process-wide count of closure dynamic programs run so far. Instrumentation
/// for asserting that explicit-input fast paths never trigger a closure.
pub fn dp_invocations() -> u64 {
    DP_INVOCATIONS.load(Ordering::Relaxed)
}

fn record_invocation() {
    DP_INVOCATIONS.fetch_add(1, Ordering::Relaxed);
}

/// Derived values `v(B)` for every nonempty coalition, indexed by bitmask.
#[derive(Debug, Clone)]
pub struct TuClosureTable {
    n: usize,
    values: Vec<Option<Rational>>,
}

impl TuClosureTable {
    pub fn compute(game: &Game) -> Result<Self, GameError> {
        game.expect_tu()?;
        game.require_normalized()?;
        record_invocation();
        let n = game.players.len();
        let values = tu_split_dp(game, game.grand_coalition());
        Ok(TuClosureTable { n, values })
    }

    pub fn value(&self, b: Coalition) -> Result<&Rational, GameError> {
        if b.is_empty() || !b.is_subset_of(Coalition::full(self.n)) {
            return Err(GameError::CoalitionOutsidePlayers);
        }
        Ok(self.values[b.bits() as usize]
            .as_ref()
            .expect("normalized closure covers every nonempty coalition"))
    }

    pub fn player_count(&self) -> usize {
        self.n
    }
}

/// The derived value of one coalition: the best total over partitions of `b`
/// into listed coalitions.
pub fn tu_value(game: &Game, b: Coalition) -> Result<Rational, GameError> {
    game.expect_tu()?;
    game.require_normalized()?;
    check_coalition(game, b)?;
    record_invocation();
    let table = tu_split_dp(game, b);
    let full = (1u32 << b.len()) - 1;
    Ok(table[full as usize]
        .clone()
        .expect("normalized closure covers every nonempty coalition"))
}

/// Split-form subset DP over the members of `b` (compressed to local bits):
/// `f(B) = max(listed(B), max over splits S ∋ lowest(B) of f(S) + f(B\S))`.
fn tu_split_dp(game: &Game, b: Coalition) -> Vec<Option<Rational>> {
    let members: Vec<usize> = b.members().collect();
    let k = members.len();
    let size = 1usize << k;

    let mut listed: Vec<Option<Rational>> = vec![None; size];
    for entry in &game.tu_entries {
        if let Some(local) = localize(entry.coalition, &members) {
            let slot = &mut listed[local as usize];
            match slot {
                Some(v) if *v >= entry.value => {}
                _ => *slot = Some(entry.value.clone()),
            }
        }
    }

    let mut f: Vec<Option<Rational>> = vec![None; size];
    for mask in 1..size as u32 {
        let mut best = listed[mask as usize].clone();
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // Splits S = low ∪ sub for each proper submask `sub` of `rest`.
        let mut sub = rest;
        loop {
            if sub != rest {
                let s = (low | sub) as usize;
                let t = (mask & !(low | sub)) as usize;
                if let (Some(a), Some(b)) = (&f[s], &f[t]) {
                    let total = a + b;
                    if best.as_ref().is_none_or(|cur| total > *cur) {
                        best = Some(total);
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        f[mask as usize] = best;
    }
    f
}

/// Pareto-maximal achievable vectors for one coalition, in deterministic
/// derivation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtuFrontier {
    pub coalition: Coalition,
    pub vectors: Vec<UtilityVector>,
}

/// Frontiers for every nonempty sub-coalition of the grand coalition.
#[derive(Debug, Clone)]
pub struct NtuFrontierTable {
    n: usize,
    fronts: Vec<Vec<UtilityVector>>,
}

impl NtuFrontierTable {
    pub fn compute(game: &Game) -> Result<Self, GameError> {
        game.expect_ntu_like()?;
        game.require_normalized()?;
        let n = game.players.len();
        if n > MAX_FRONTIER_PLAYERS {
            return Err(GameError::ResourceCap(format!(
                "ntu frontier tables support at most {MAX_FRONTIER_PLAYERS} players, game has {n}"
            )));
        }
        record_invocation();
        let fronts = frontier_dp(game, game.grand_coalition());
        Ok(NtuFrontierTable { n, fronts })
    }

    pub fn frontier(&self, b: Coalition) -> Result<&[UtilityVector], GameError> {
        if b.is_empty() || !b.is_subset_of(Coalition::full(self.n)) {
            return Err(GameError::CoalitionOutsidePlayers);
        }
        Ok(&self.fronts[b.bits() as usize])
    }
}

/// The Pareto-maximal subset of `V(b)`.
pub fn ntu_frontier(game: &Game, b: Coalition) -> Result<NtuFrontier, GameError> {
    game.expect_ntu_like()?;
    game.require_normalized()?;
    check_coalition(game, b)?;
    if b.len() > MAX_FRONTIER_PLAYERS {
        return Err(GameError::ResourceCap(format!(
            "ntu frontiers support coalitions of at most {MAX_FRONTIER_PLAYERS} players, got {}",
            b.len()
        )));
    }
    record_invocation();
    let fronts = frontier_dp(game, b);
    let full = (1usize << b.len()) - 1;
    Ok(NtuFrontier {
        coalition: b,
        vectors: fronts[full].clone(),
    })
}

/// Frontier DP over local submasks of `b`. The canonical piece of every
/// decomposition is the basis entry containing the lowest member, so each
/// mask combines entry vectors with the frontier of the remainder.
fn frontier_dp(game: &Game, b: Coalition) -> Vec<Vec<UtilityVector>> {
    let members: Vec<usize> = b.members().collect();
    let k = members.len();
    let size = 1usize << k;

    let entries: Vec<(u32, &UtilityVector)> = game
        .ntu_entries
        .iter()
        .filter_map(|e| localize(e.coalition, &members).map(|local| (local, &e.vector)))
        .collect();

    let mut fronts: Vec<Vec<UtilityVector>> = vec![Vec::new(); size];
    for mask in 1..size as u32 {
        let low = mask & mask.wrapping_neg();
        let mut front: Vec<UtilityVector> = Vec::new();
        for (entry_mask, vector) in &entries {
            if entry_mask & low == 0 || entry_mask & !mask != 0 {
                continue;
            }
            if *entry_mask == mask {
                insert_pruned(&mut front, (*vector).clone());
            } else {
                let rest = mask & !entry_mask;
                // Split borrow: the remainder frontier is at a strictly
                // smaller index than `mask`.
                let (done, _) = fronts.split_at(mask as usize);
                for u in &done[rest as usize] {
                    insert_pruned(&mut front, merge_vectors(mask, *entry_mask, vector, u));
                }
            }
        }
        fronts[mask as usize] = front;
    }
    fronts
}

/// Interleave an entry vector (over `entry_mask`) with a remainder vector
/// (over `mask \ entry_mask`) into ascending-bit order over `mask`.
fn merge_vectors(mask: u32, entry_mask: u32, entry_vec: &[Rational], rest_vec: &[Rational]) -> UtilityVector {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let (mut i, mut j) = (0, 0);
    let mut bits = mask;
    while bits != 0 {
        let low = bits & bits.wrapping_neg();
        if entry_mask & low != 0 {
            out.push(entry_vec[i].clone());
            i += 1;
        } else {
            out.push(rest_vec[j].clone());
            j += 1;
        }
        bits &= bits - 1;
    }
    out
}

/// `a` weakly dominates `b`: every component at least as large.
fn weakly_dominates(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Insert into an antichain: drop the candidate if some kept vector weakly
/// dominates it (this also dedups exact duplicates), otherwise evict the
/// vectors it weakly dominates and append.
fn insert_pruned(front: &mut Vec<UtilityVector>, candidate: UtilityVector) {
    for kept in front.iter() {
        if weakly_dominates(kept, &candidate) {
            return;
        }
    }
    front.retain(|kept| !weakly_dominates(&candidate, kept));
    front.push(candidate);
}

/// Reduce an arbitrary vector set to its Pareto-maximal antichain,
/// preserving first-seen order of the survivors.
pub fn pareto_prune(vectors: Vec<UtilityVector>) -> Vec<UtilityVector> {
    let mut front = Vec::new();
    for v in vectors {
        insert_pruned(&mut front, v);
    }
    front
}

/// Best total utility achievable by partitioning `b` over the NTU basis.
pub fn welfare_max(game: &Game, b: Coalition) -> Result<Rational, GameError> {
    game.expect_ntu_like()?;
    game.require_normalized()?;
    check_coalition(game, b)?;
    record_invocation();
    let members: Vec<usize> = b.members().collect();
    let k = members.len();
    let size = 1usize << k;

    let entries: Vec<(u32, Rational)> = game
        .ntu_entries
        .iter()
        .filter_map(|e| {
            localize(e.coalition, &members).map(|local| (local, e.vector.iter().sum()))
        })
        .collect();

    let mut best: Vec<Option<Rational>> = vec![None; size];
    best[0] = Some(Rational::zero());
    for mask in 1..size as u32 {
        let low = mask & mask.wrapping_neg();
        let mut cur: Option<Rational> = None;
        for (entry_mask, sum) in &entries {
            if entry_mask & low == 0 || entry_mask & !mask != 0 {
                continue;
            }
            let rest = (mask & !entry_mask) as usize;
            if let Some(rest_best) = &best[rest] {
                let total = sum + rest_best;
                if cur.as_ref().is_none_or(|c| total > *c) {
                    cur = Some(total);
                }
            }
        }
        best[mask as usize] = cur;
    }
    Ok(best[size - 1]
        .clone()
        .expect("normalized closure covers every nonempty coalition"))
}

/// Map a global coalition onto the local bits of `members`, if contained.
fn localize(c: Coalition, members: &[usize]) -> Option<u32> {
    let mut local = 0u32;
    let mut remaining = c.bits();
    for (j, &player) in members.iter().enumerate() {
        let bit = 1u32 << player;
        if remaining & bit != 0 {
            local |= 1 << j;
            remaining &= !bit;
        }
    }
    (remaining == 0).then_some(local)
}

fn check_coalition(game: &Game, b: Coalition) -> Result<(), GameError> {
    if b.is_empty() {
        return Err(GameError::EmptyCoalition);
    }
    if !b.is_subset_of(game.grand_coalition()) {
        return Err(GameError::CoalitionOutsidePlayers);
    }
    Ok(())
}

/// Convenience: the grand coalition's derived or explicit value for a TU game
/// (explicit input, when present, replaces the closure).
pub fn tu_grand_value(game: &Game) -> Result<Rational, GameError> {
    if let Some(v) = &game.explicit_grand_value {
        return Ok(v.clone());
    }
    tu_value(game, game.grand_coalition())
}
