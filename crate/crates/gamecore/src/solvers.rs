//! Core-nonemptiness deciders.
//!
//! * NTU: enumerate the grand coalition's Pareto frontier and return the
//!   first unblocked vector (pruning preserves the decision since blocking
//!   is strict).
//! * NTU with an explicit grand-coalition outcome list: scan that list only.
//! * TU: exact-rational linear feasibility over the basis rows, with the
//!   grand value taken from the closure or from explicit input.
//! * Hybrid (only the grand coalition transfers utility): branch-and-bound
//!   over choice functions, one designated member per basis entry.
//!
//! Every `NON_EMPTY` answer carries a witness that passes the membership
//! check; deciders are deterministic.

use std::collections::HashMap;

use num_traits::Zero;

use crate::corecheck::{self, Feasibility};
use crate::error::GameError;
use crate::game::{Allocation, Coalition, Game, NtuEntry};
use crate::rational::Rational;

/// Hybrid branch-and-bound refuses games with more basis entries than this.
pub const MAX_HYBRID_ENTRIES: usize = 64;

/// Outcome of a nonemptiness decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Empty,
    NonEmpty {
        witness: Allocation,
        /// Partition witness, present for the NTU frontier decider.
        decomposition: Option<Vec<NtuEntry>>,
    },
}

impl Decision {
    pub fn is_non_empty(&self) -> bool {
        matches!(self, Decision::NonEmpty { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            Decision::Empty => "EMPTY",
            Decision::NonEmpty { .. } => "NON_EMPTY",
        }
    }

    pub fn witness(&self) -> Option<&Allocation> {
        match self {
            Decision::Empty => None,
            Decision::NonEmpty { witness, .. } => Some(witness),
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Decision::Empty => f.write_str("EMPTY"),
            Decision::NonEmpty { witness, .. } => write!(f, "NON_EMPTY witness={witness}"),
        }
    }
}

/// Decide NTU core nonemptiness by scanning the grand frontier.
pub fn decide_ntu(game: &Game) -> Result<Decision, GameError> {
    game.expect_ntu_like()?;
    if game.mode == crate::game::Mode::Hybrid {
        return Err(GameError::ModeMismatch {
            expected: "ntu",
            got: "hybrid",
        });
    }
    let frontier = crate::closure::ntu_frontier(game, game.grand_coalition())?;
    for vector in frontier.vectors {
        let candidate = Allocation(vector);
        if corecheck::find_block_ntu(game, &candidate).is_none() {
            let decomposition = match corecheck::is_feasible(game, &candidate)? {
                Some(Feasibility::Decomposition(parts)) => Some(parts),
                _ => None,
            };
            return Ok(Decision::NonEmpty {
                witness: candidate,
                decomposition,
            });
        }
    }
    Ok(Decision::Empty)
}

/// Decide NTU core nonemptiness from an explicit grand-coalition outcome
/// list: scan the provided outcomes only, never touching the closure.
pub fn decide_ntu_explicit(game: &Game) -> Result<Decision, GameError> {
    game.expect_ntu_like()?;
    let grand_set = game
        .explicit_grand_set
        .as_ref()
        .ok_or(GameError::MissingGrandSet)?;
    for outcome in grand_set {
        game.check_allocation(outcome)?;
        if corecheck::find_block_ntu(game, outcome).is_none() {
            return Ok(Decision::NonEmpty {
                witness: outcome.clone(),
                decomposition: None,
            });
        }
    }
    Ok(Decision::Empty)
}

/// One upper-bound row `Σ u_i ≤ total` plus lower-bound rows
/// `Σ_{b∈B} u_b ≥ bound` — the feasibility system a TU core decision reduces to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFeasibilitySystem {
    pub num_vars: usize,
    pub total_upper: Rational,
    pub lower_bounds: Vec<(Coalition, Rational)>,
}

/// Decide TU core nonemptiness. The grand value comes from explicit input
/// when present (skipping the closure entirely) and from the closure
/// otherwise.
pub fn decide_tu(game: &Game) -> Result<Decision, GameError> {
    game.expect_tu()?;
    game.require_normalized()?;
    let grand = crate::closure::tu_grand_value(game)?;
    let system = LinearFeasibilitySystem {
        num_vars: game.players.len(),
        total_upper: grand,
        lower_bounds: game
            .tu_entries
            .iter()
            .map(|e| (e.coalition, e.value.clone()))
            .collect(),
    };
    Ok(match lp_feasible(&system) {
        Some(witness) => Decision::NonEmpty {
            witness,
            decomposition: None,
        },
        None => Decision::Empty,
    })
}

/// Exact-rational feasibility by Fourier–Motzkin elimination.
///
/// Returns a point satisfying every row, or `None`. The point is the
/// lexicographically least one, with the leftover budget then pushed onto
/// player 0 so that `Σ u_i = total_upper` (harmless: every other row is a
/// lower bound).
pub fn lp_feasible(sys: &LinearFeasibilitySystem) -> Option<Allocation> {
    let n = sys.num_vars;
    assert!(n > 0, "feasibility system needs at least one variable");

    // All rows as coeffs·u ≤ bound.
    let mut rows: Vec<(Vec<Rational>, Rational)> = Vec::with_capacity(sys.lower_bounds.len() + 1);
    rows.push((vec![Rational::from_integer(1.into()); n], sys.total_upper.clone()));
    for (coalition, bound) in &sys.lower_bounds {
        let mut coeffs = vec![Rational::zero(); n];
        for member in coalition.members() {
            coeffs[member] = -Rational::from_integer(1.into());
        }
        rows.push((coeffs, -bound.clone()));
    }

    // levels[j] = system over variables 0..=j, saved for back-substitution.
    let mut levels: Vec<Vec<(Vec<Rational>, Rational)>> = vec![Vec::new(); n];
    let mut current = dedup_rows(rows)?;
    for j in (1..n).rev() {
        levels[j] = current.clone();
        let mut kept: Vec<(Vec<Rational>, Rational)> = Vec::new();
        let mut pos: Vec<(Vec<Rational>, Rational)> = Vec::new();
        let mut neg: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for row in current {
            if row.0[j].is_zero() {
                kept.push(row);
            } else if row.0[j] > Rational::zero() {
                pos.push(row);
            } else {
                neg.push(row);
            }
        }
        for p in &pos {
            for q in &neg {
                // Positive multipliers -q_j and p_j cancel variable j.
                let a = -q.0[j].clone();
                let b = p.0[j].clone();
                let coeffs: Vec<Rational> = p.0[..j]
                    .iter()
                    .zip(&q.0[..j])
                    .map(|(pc, qc)| pc * &a + qc * &b)
                    .chain(std::iter::once(Rational::zero()))
                    .chain(p.0[j + 1..].iter().map(|_| Rational::zero()))
                    .collect();
                let bound = &p.1 * &a + &q.1 * &b;
                kept.push((coeffs, bound));
            }
        }
        current = dedup_rows(kept)?;
    }
    levels[0] = current;

    // Assign each variable its minimum feasible value given earlier choices.
    let mut values = vec![Rational::zero(); n];
    for j in 0..n {
        let mut lower: Option<Rational> = None;
        let mut upper: Option<Rational> = None;
        for (coeffs, bound) in &levels[j] {
            if coeffs[j].is_zero() {
                continue;
            }
            let residual: Rational = bound
                - coeffs[..j]
                    .iter()
                    .zip(&values[..j])
                    .map(|(c, v)| c * v)
                    .sum::<Rational>();
            let limit = residual / coeffs[j].clone();
            if coeffs[j] > Rational::zero() {
                if upper.as_ref().is_none_or(|u| limit < *u) {
                    upper = Some(limit);
                }
            } else if lower.as_ref().is_none_or(|l| limit > *l) {
                lower = Some(limit);
            }
        }
        values[j] = match (lower, upper) {
            (Some(l), Some(u)) => {
                if l > u {
                    // Only possible for the fully projected variable: the
                    // system is infeasible. Later intervals are nonempty by
                    // the projection property.
                    assert_eq!(j, 0, "fourier-motzkin lost a row during elimination");
                    return None;
                }
                l
            }
            (Some(l), None) => l,
            (None, Some(u)) => {
                if u >= Rational::zero() {
                    Rational::zero()
                } else {
                    u
                }
            }
            (None, None) => Rational::zero(),
        };
    }

    let mut witness = Allocation(values);
    let slack = &sys.total_upper - witness.total();
    witness.0[0] += slack;
    Some(witness)
}

/// Normalize rows (leading coefficient ±1), drop satisfied constant rows,
/// keep only the tightest bound per coefficient vector. `None` when a
/// constant row is contradictory, i.e. the system is infeasible.
fn dedup_rows(
    rows: Vec<(Vec<Rational>, Rational)>,
) -> Option<Vec<(Vec<Rational>, Rational)>> {
    let mut tightest: HashMap<Vec<Rational>, Rational> = HashMap::new();
    let mut order: Vec<Vec<Rational>> = Vec::new();
    for (coeffs, bound) in rows {
        match coeffs.iter().find(|c| !c.is_zero()) {
            None => {
                if bound < Rational::zero() {
                    return None;
                }
            }
            Some(first) => {
                let scale = if *first < Rational::zero() {
                    -first.clone()
                } else {
                    first.clone()
                };
                let coeffs: Vec<Rational> = coeffs.iter().map(|c| c / &scale).collect();
                let bound = bound / scale;
                match tightest.get_mut(&coeffs) {
                    Some(existing) => {
                        if bound < *existing {
                            *existing = bound;
                        }
                    }
                    None => {
                        tightest.insert(coeffs.clone(), bound);
                        order.push(coeffs);
                    }
                }
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|coeffs| {
                let bound = tightest[&coeffs].clone();
                (coeffs, bound)
            })
            .collect(),
    )
}

/// Decide hybrid core nonemptiness: search for per-player lower bounds, one
/// designated member per entry, whose total fits within the explicit grand
/// value. Entries are processed by decreasing minimum threshold and skipped
/// once satisfied; the witness pushes the leftover budget onto player 0.
pub fn decide_hybrid(game: &Game) -> Result<Decision, GameError> {
    game.expect_hybrid()?;
    game.require_normalized()?;
    if game.ntu_entries.len() > MAX_HYBRID_ENTRIES {
        return Err(GameError::ResourceCap(format!(
            "hybrid decider supports at most {MAX_HYBRID_ENTRIES} basis entries, game has {}",
            game.ntu_entries.len()
        )));
    }
    let grand = game
        .explicit_grand_value
        .clone()
        .ok_or(GameError::MissingGrandValue)?;

    let mut order: Vec<&NtuEntry> = game.ntu_entries.iter().collect();
    order.sort_by(|a, b| min_component(b).cmp(min_component(a)));

    let n = game.players.len();
    let mut lower = vec![Rational::zero(); n];
    let mut total = Rational::zero();
    if branch(&order, 0, &mut lower, &mut total, &grand) {
        let mut witness = Allocation(lower);
        let slack = &grand - witness.total();
        witness.0[0] += slack;
        return Ok(Decision::NonEmpty {
            witness,
            decomposition: None,
        });
    }
    Ok(Decision::Empty)
}

fn min_component(entry: &NtuEntry) -> &Rational {
    entry
        .vector
        .iter()
        .min()
        .expect("basis entries have nonempty vectors")
}

fn branch(
    order: &[&NtuEntry],
    index: usize,
    lower: &mut [Rational],
    total: &mut Rational,
    grand: &Rational,
) -> bool {
    if *total > *grand {
        return false;
    }
    let Some(entry) = order.get(index) else {
        return true;
    };
    let satisfied = entry
        .coalition
        .members()
        .zip(&entry.vector)
        .any(|(member, w)| lower[member] >= *w);
    if satisfied {
        return branch(order, index + 1, lower, total, grand);
    }
    for (member, threshold) in entry.coalition.members().zip(&entry.vector) {
        let previous = lower[member].clone();
        // Not satisfied, so threshold > lower[member]: the total strictly grows.
        *total += threshold - &previous;
        lower[member] = threshold.clone();
        if branch(order, index + 1, lower, total, grand) {
            return true;
        }
        *total -= threshold - &previous;
        lower[member] = previous;
    }
    false
}
