//! Brute-force reference implementations for tiny instances.
//!
//! These favor clarity over speed on purpose: no memoization, no pruning,
//! nothing shared with the optimized paths they validate. Partition
//! enumeration goes straight from the definition of derivable vectors, and
//! the hybrid check enumerates every choice function.

use num_traits::Zero;

use crate::error::GameError;
use crate::game::{Allocation, Coalition, Game, Mode, UtilityVector};
use crate::rational::Rational;
use crate::solvers::{lp_feasible, Decision, LinearFeasibilitySystem};

const MAX_BRUTE_PLAYERS_NTU: usize = 6;
const MAX_BRUTE_PLAYERS_TU: usize = 8;
const MAX_CHOICE_FUNCTIONS: u64 = 1_000_000;

/// The full (unpruned) set `V(b)`: every vector derivable by partitioning `b`
/// into listed entries, duplicates removed, in first-derived order.
pub fn brute_vectors(game: &Game, b: Coalition) -> Result<Vec<UtilityVector>, GameError> {
    game.expect_ntu_like()?;
    cap_size(b.len(), MAX_BRUTE_PLAYERS_NTU)?;
    check_coalition(game, b)?;

    let members: Vec<usize> = b.members().collect();
    let mut found: Vec<UtilityVector> = Vec::new();
    for_each_partition(b, &mut Vec::new(), &mut |parts| {
        // All ways to pick one listed vector per part.
        let choices: Vec<Vec<&UtilityVector>> = parts
            .iter()
            .map(|part| {
                game.ntu_entries
                    .iter()
                    .filter(|e| e.coalition == *part)
                    .map(|e| &e.vector)
                    .collect()
            })
            .collect();
        if choices.iter().any(Vec::is_empty) {
            return;
        }
        let mut picks = vec![0usize; parts.len()];
        loop {
            let mut slots: Vec<Option<Rational>> = vec![None; 32];
            for (i, part) in parts.iter().enumerate() {
                for (member, value) in part.members().zip(choices[i][picks[i]]) {
                    slots[member] = Some(value.clone());
                }
            }
            let vector: UtilityVector = members
                .iter()
                .map(|&m| slots[m].clone().expect("partition covers every member"))
                .collect();
            if !found.contains(&vector) {
                found.push(vector);
            }
            // Odometer over the per-part choices.
            let mut i = 0;
            loop {
                if i == picks.len() {
                    return;
                }
                picks[i] += 1;
                if picks[i] < choices[i].len() {
                    break;
                }
                picks[i] = 0;
                i += 1;
            }
        }
    });
    Ok(found)
}

/// The derived TU value of `b` by plain partition enumeration.
pub fn brute_tu_value(game: &Game, b: Coalition) -> Result<Rational, GameError> {
    game.expect_tu()?;
    cap_size(b.len(), MAX_BRUTE_PLAYERS_TU)?;
    check_coalition(game, b)?;

    let mut best: Option<Rational> = None;
    for_each_partition(b, &mut Vec::new(), &mut |parts| {
        let mut total = Rational::zero();
        for part in parts {
            let Some(entry) = game.tu_entries.iter().find(|e| e.coalition == *part) else {
                return;
            };
            total += &entry.value;
        }
        if best.as_ref().is_none_or(|b| total > *b) {
            best = Some(total);
        }
    });
    best.ok_or_else(|| GameError::NotNormalized("no partition into listed coalitions".into()))
}

/// Decide core nonemptiness straight from the definitions.
///
/// NTU: test every grand vector against every coalition's full vector set.
/// TU: feasibility with one row per coalition of the whole closure.
/// Hybrid: enumerate every choice function.
pub fn brute_core_nonempty(game: &Game) -> Result<Decision, GameError> {
    match game.mode {
        Mode::Ntu => brute_core_ntu(game),
        Mode::Tu => brute_core_tu(game),
        Mode::Hybrid => brute_core_hybrid(game),
    }
}

fn brute_core_ntu(game: &Game) -> Result<Decision, GameError> {
    cap(game, MAX_BRUTE_PLAYERS_NTU)?;
    let n = game.players.len();
    let all = game.grand_coalition();

    let mut vector_sets: Vec<Vec<UtilityVector>> = vec![Vec::new(); 1 << n];
    for bits in 1..(1u32 << n) {
        let c = Coalition::from_bits(bits);
        vector_sets[bits as usize] = brute_vectors(game, c)?;
    }

    'candidates: for candidate in &vector_sets[all.bits() as usize] {
        let u = Allocation(candidate.clone());
        for bits in 1..(1u32 << n) {
            let c = Coalition::from_bits(bits);
            for w in &vector_sets[bits as usize] {
                if c.members().zip(w).all(|(member, value)| *value > u[member]) {
                    continue 'candidates;
                }
            }
        }
        return Ok(Decision::NonEmpty {
            witness: u,
            decomposition: None,
        });
    }
    Ok(Decision::Empty)
}

fn brute_core_tu(game: &Game) -> Result<Decision, GameError> {
    cap(game, MAX_BRUTE_PLAYERS_TU)?;
    let n = game.players.len();
    let table = crate::closure::TuClosureTable::compute(game)?;
    let all = game.grand_coalition();
    let lower_bounds = (1..(1u32 << n))
        .map(|bits| {
            let c = Coalition::from_bits(bits);
            table.value(c).map(|v| (c, v.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let system = LinearFeasibilitySystem {
        num_vars: n,
        total_upper: table.value(all)?.clone(),
        lower_bounds,
    };
    Ok(match lp_feasible(&system) {
        Some(witness) => Decision::NonEmpty {
            witness,
            decomposition: None,
        },
        None => Decision::Empty,
    })
}

fn brute_core_hybrid(game: &Game) -> Result<Decision, GameError> {
    cap(game, MAX_BRUTE_PLAYERS_NTU)?;
    game.require_normalized()?;
    let grand = game
        .explicit_grand_value
        .clone()
        .ok_or(GameError::MissingGrandValue)?;
    let n = game.players.len();

    let mut combinations: u64 = 1;
    for entry in &game.ntu_entries {
        combinations = combinations.saturating_mul(entry.coalition.len() as u64);
        if combinations > MAX_CHOICE_FUNCTIONS {
            return Err(GameError::ResourceCap(format!(
                "hybrid oracle supports at most {MAX_CHOICE_FUNCTIONS} choice functions"
            )));
        }
    }

    let entries = &game.ntu_entries;
    let mut picks = vec![0usize; entries.len()];
    let mut best: Option<Vec<Rational>> = None;
    let mut best_total: Option<Rational> = None;
    loop {
        let mut lower = vec![Rational::zero(); n];
        for (entry, &pick) in entries.iter().zip(&picks) {
            let member = entry.coalition.members().nth(pick).expect("pick in range");
            let threshold = &entry.vector[pick];
            if *threshold > lower[member] {
                lower[member] = threshold.clone();
            }
        }
        let total: Rational = lower.iter().sum();
        if best_total.as_ref().is_none_or(|t| total < *t) {
            best_total = Some(total);
            best = Some(lower);
        }
        let mut i = 0;
        loop {
            if i == picks.len() {
                let total = best_total.expect("at least one choice function");
                if total <= grand {
                    let mut witness = Allocation(best.expect("witness recorded"));
                    let slack = &grand - witness.total();
                    witness.0[0] += slack;
                    return Ok(Decision::NonEmpty {
                        witness,
                        decomposition: None,
                    });
                }
                return Ok(Decision::Empty);
            }
            picks[i] += 1;
            if picks[i] < entries[i].coalition.len() {
                break;
            }
            picks[i] = 0;
            i += 1;
        }
    }
}

/// Visit every partition of `b` into nonempty parts; the part containing the
/// lowest member is chosen first.
fn for_each_partition(b: Coalition, current: &mut Vec<Coalition>, visit: &mut impl FnMut(&[Coalition])) {
    let Some(lowest) = b.lowest() else {
        visit(current);
        return;
    };
    let rest = b.difference(Coalition::singleton(lowest));
    let rest_bits = rest.bits();
    let mut sub = rest_bits;
    loop {
        let part = Coalition::from_bits(sub).with(lowest);
        current.push(part);
        for_each_partition(b.difference(part), current, visit);
        current.pop();
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest_bits;
    }
}

fn cap(game: &Game, max: usize) -> Result<(), GameError> {
    cap_size(game.players.len(), max)
}

fn cap_size(size: usize, max: usize) -> Result<(), GameError> {
    if size > max {
        return Err(GameError::ResourceCap(format!(
            "brute-force enumeration supports at most {max} players, got {size}"
        )));
    }
    Ok(())
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_game;
    use crate::game::PlayerSet;
    use crate::rational::rat_int;

    const G1: &str = include_str!("../../../fixtures/g1.game");
    const G1T: &str = include_str!("../../../fixtures/g1t.game");

    fn g(text: &str) -> Game {
        parse_game(text).unwrap().game
    }

    fn ints(values: &[i64]) -> UtilityVector {
        values.iter().map(|&v| rat_int(v)).collect()
    }

    #[test]
    fn g1_grand_vectors_by_hand() {
        // The 5 partitions of {x,y,z} admit exactly these four vectors.
        let game = g(G1);
        let mut vectors = brute_vectors(&game, game.grand_coalition()).unwrap();
        vectors.sort();
        let mut expected = vec![ints(&[2, 1, 0]), ints(&[0, 2, 1]), ints(&[1, 0, 2]), ints(&[0, 0, 0])];
        expected.sort();
        assert_eq!(vectors, expected);
    }

    #[test]
    fn singleton_vectors() {
        let game = g(G1);
        assert_eq!(
            brute_vectors(&game, Coalition::singleton(0)).unwrap(),
            vec![ints(&[0])]
        );
    }

    #[test]
    fn g2_subcoalition_vectors_include_pairings() {
        let game = g(include_str!("../../../fixtures/g2.game"));
        // {w,x,y,z} = players 3..=6.
        let c = Coalition::from_indices([3, 4, 5, 6]);
        let vectors = brute_vectors(&game, c).unwrap();
        for expected in [ints(&[3, 3, 3, 3]), ints(&[0, 0, 0, 0]), ints(&[0, 2, 1, 0])] {
            assert!(vectors.contains(&expected), "missing {expected:?}");
        }
    }

    #[test]
    fn partition_count_is_bell_number() {
        let mut count = 0usize;
        for_each_partition(Coalition::full(4), &mut Vec::new(), &mut |_| count += 1);
        assert_eq!(count, 15);
    }

    #[test]
    fn brute_tu_value_matches_hand_enumeration() {
        let players = PlayerSet::new(["a", "b", "c"]).unwrap();
        let entries = vec![
            crate::game::TuEntry::new(Coalition::from_indices([0, 1]), rat_int(5)).unwrap(),
            crate::game::TuEntry::new(Coalition::from_indices([1, 2]), rat_int(4)).unwrap(),
        ];
        let (game, _) = Game::new_tu(players, entries, None).unwrap();
        assert_eq!(brute_tu_value(&game, game.grand_coalition()).unwrap(), rat_int(5));
    }

    #[test]
    fn brute_core_matches_paper_examples() {
        assert_eq!(brute_core_nonempty(&g(G1)).unwrap(), Decision::Empty);
        assert_eq!(brute_core_nonempty(&g(G1T)).unwrap(), Decision::Empty);

        let players = PlayerSet::new(["a", "b"]).unwrap();
        let (trivial, _) = Game::new_ntu(players, vec![]).unwrap();
        match brute_core_nonempty(&trivial).unwrap() {
            Decision::NonEmpty { witness, .. } => assert_eq!(witness, Allocation(ints(&[0, 0]))),
            Decision::Empty => panic!("two singletons always have the all-zero outcome"),
        }
    }

    #[test]
    fn oracle_refuses_large_games() {
        let players = PlayerSet::new(["a", "b", "c", "d", "e", "f", "g"]).unwrap();
        let (game, _) = Game::new_ntu(players, vec![]).unwrap();
        assert!(matches!(
            brute_vectors(&game, game.grand_coalition()),
            Err(GameError::ResourceCap(_))
        ));
    }
}
