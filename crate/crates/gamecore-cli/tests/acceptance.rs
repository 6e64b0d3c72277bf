//! Acceptance suite. Runs every criterion in order, prints one pass/fail
//! line each, and fails if any criterion fails.
//!
//! Run with: `cargo test -p gamecore-cli --test acceptance -- --nocapture`

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gamecore::closure::{dp_invocations, tu_value, NtuFrontierTable, TuClosureTable};
use gamecore::corecheck::{find_block_ntu, find_block_tu, membership};
use gamecore::rational::{rat, rat_int};
use gamecore::reductions::{
    nodecover_to_hybrid, random_x3c, solve_nodecover, solve_x3c, x3c_to_ntu, x3c_to_tu,
    NodeCoverInstance,
};
use gamecore::{
    decide_hybrid, decide_ntu, decide_ntu_explicit, decide_tu, parse_game,
    validate_superadditive_hybrid, Allocation, Coalition, Decision, Game, NtuEntry, PlayerSet,
    Rational, TuEntry,
};

const G1: &str = include_str!("../../../fixtures/g1.game");
const G1T: &str = include_str!("../../../fixtures/g1t.game");

fn game(text: &str) -> Game {
    parse_game(text).expect("fixture parses").game
}

/// Witness self-verification tally across all suites (criterion 8).
#[derive(Default)]
struct WitnessLog {
    checked: usize,
    failures: usize,
}

impl WitnessLog {
    fn verify(&mut self, game: &Game, decision: &Decision) -> Result<(), String> {
        if let Decision::NonEmpty { witness, .. } = decision {
            self.checked += 1;
            let ok = membership(game, witness)
                .map(|m| m.is_in_core())
                .unwrap_or(false);
            if !ok {
                self.failures += 1;
                return Err(format!("witness {witness} rejected by membership"));
            }
        }
        Ok(())
    }
}

struct Outcome {
    name: &'static str,
    detail: Result<String, String>,
    elapsed: Duration,
}

fn run_criterion(
    name: &'static str,
    outcomes: &mut Vec<Outcome>,
    body: impl FnOnce() -> Result<String, String>,
) {
    let started = Instant::now();
    let detail = body();
    let elapsed = started.elapsed();
    let line = match &detail {
        Ok(detail) => format!("PASS {name} ({elapsed:.2?}): {detail}"),
        Err(reason) => format!("FAIL {name} ({elapsed:.2?}): {reason}"),
    };
    println!("{line}");
    outcomes.push(Outcome { name, detail, elapsed });
}

fn budget(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:.2?}, budget {limit:.2?}"))
    }
}

// ---------------------------------------------------------------- corpus ---

fn x3c_corpus() -> Vec<(u64, usize)> {
    (0..200u64).map(|seed| (seed, 1 + (seed % 2) as usize)).collect()
}

fn rat_0_to_5(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(0..=10), 2)
}

fn roster(n: usize) -> PlayerSet {
    PlayerSet::new((0..n).map(|i| format!("p{i}"))).unwrap()
}

/// `basis_cap` bounds |W| including the singleton entries normalization adds.
fn random_ntu_game(
    seed: u64,
    players: std::ops::RangeInclusive<usize>,
    max_extra: usize,
    basis_cap: usize,
) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(players);
    let extra = rng.gen_range(0..=max_extra.min(basis_cap.saturating_sub(n)));
    let mut entries = Vec::new();
    for _ in 0..extra {
        let bits = rng.gen_range(1..(1u32 << n));
        let size = bits.count_ones() as usize;
        let vector = (0..size).map(|_| rat_0_to_5(&mut rng)).collect();
        entries.push(NtuEntry::new(Coalition::from_bits(bits), vector).unwrap());
    }
    Game::new_ntu(roster(n), entries).unwrap().0
}

fn random_tu_game(
    seed: u64,
    players: std::ops::RangeInclusive<usize>,
    max_extra: usize,
    basis_cap: usize,
) -> Game {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(players);
    let extra = rng.gen_range(0..=max_extra.min(basis_cap.saturating_sub(n)));
    let mut entries = Vec::new();
    for _ in 0..extra {
        let bits = rng.gen_range(1..(1u32 << n));
        entries.push(TuEntry::new(Coalition::from_bits(bits), rat_0_to_5(&mut rng)).unwrap());
    }
    Game::new_tu(roster(n), entries, None).unwrap().0
}

fn random_outcome(rng: &mut ChaCha8Rng, n: usize) -> Allocation {
    Allocation((0..n).map(|_| rat_0_to_5(rng)).collect())
}

/// Full V(A) by dedup-only dynamic programming (test-side enumerator for the
/// explicit-input consistency check).
fn enumerate_all_vectors(game: &Game) -> Vec<Vec<Rational>> {
    let n = game.players.len();
    let size = 1usize << n;
    let mut sets: Vec<Vec<Vec<Rational>>> = vec![Vec::new(); size];
    for mask in 1..size as u32 {
        let low = mask & mask.wrapping_neg();
        let mut out: Vec<Vec<Rational>> = Vec::new();
        for entry in &game.ntu_entries {
            let ebits = entry.coalition.bits();
            if ebits & low == 0 || ebits & !mask != 0 {
                continue;
            }
            if ebits == mask {
                if !out.contains(&entry.vector) {
                    out.push(entry.vector.clone());
                }
            } else {
                let rest = (mask & !ebits) as usize;
                let rest_vectors = sets[rest].clone();
                for u in rest_vectors {
                    let merged = interleave(mask, ebits, &entry.vector, &u);
                    if !out.contains(&merged) {
                        out.push(merged);
                    }
                }
            }
        }
        sets[mask as usize] = out;
    }
    sets[size - 1].clone()
}

fn interleave(mask: u32, piece: u32, piece_vec: &[Rational], rest_vec: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let (mut i, mut j) = (0, 0);
    let mut bits = mask;
    while bits != 0 {
        let low = bits & bits.wrapping_neg();
        if piece & low != 0 {
            out.push(piece_vec[i].clone());
            i += 1;
        } else {
            out.push(rest_vec[j].clone());
            j += 1;
        }
        bits &= bits - 1;
    }
    out
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Coalition> {
    (1u32..(1u32 << n)).map(Coalition::from_bits)
}

// ------------------------------------------------------------- criteria ---

fn criterion_1() -> Result<String, String> {
    let g1 = game(G1);
    let started = Instant::now();
    let ntu = decide_ntu(&g1).map_err(|e| e.to_string())?;
    budget(started.elapsed(), Duration::from_secs(1), "decide_ntu(G1)")?;
    if ntu.is_non_empty() {
        return Err("decide_ntu(G1) should be EMPTY".into());
    }

    let g1t = game(G1T);
    let started = Instant::now();
    let tu = decide_tu(&g1t).map_err(|e| e.to_string())?;
    budget(started.elapsed(), Duration::from_secs(1), "decide_tu(G1T)")?;
    if tu.is_non_empty() {
        return Err("decide_tu(G1T) should be EMPTY".into());
    }
    Ok("G1 EMPTY and G1T EMPTY, each under 1s".into())
}

fn criterion_2(log: &mut WitnessLog) -> Result<String, String> {
    let started = Instant::now();
    let mut nonempty = 0usize;
    for (seed, m) in x3c_corpus() {
        let inst = random_x3c(seed, m, 8).map_err(|e| e.to_string())?;
        let expected = solve_x3c(&inst);
        let gadget = x3c_to_ntu(&inst).map_err(|e| e.to_string())?;
        let decision = decide_ntu(&gadget).map_err(|e| e.to_string())?;
        if decision.is_non_empty() != expected {
            return Err(format!(
                "seed {seed} m {m}: x3c={expected} but decide_ntu={}",
                decision.status()
            ));
        }
        log.verify(&gadget, &decision).map_err(|e| format!("seed {seed}: {e}"))?;
        nonempty += usize::from(expected);
    }
    budget(started.elapsed(), Duration::from_secs(60), "theorem-1 suite")?;
    Ok(format!("200 instances agree ({nonempty} NON_EMPTY)"))
}

fn criterion_3(log: &mut WitnessLog) -> Result<String, String> {
    let started = Instant::now();
    let mut covered = 0usize;
    for (seed, m) in x3c_corpus() {
        let inst = random_x3c(seed, m, 8).map_err(|e| e.to_string())?;
        let expected = solve_x3c(&inst);
        let gadget = x3c_to_tu(&inst).map_err(|e| e.to_string())?;
        let decision = decide_tu(&gadget).map_err(|e| e.to_string())?;
        if decision.is_non_empty() != expected {
            return Err(format!(
                "seed {seed} m {m}: x3c={expected} but decide_tu={}",
                decision.status()
            ));
        }
        log.verify(&gadget, &decision).map_err(|e| format!("seed {seed}: {e}"))?;
        if let Some(witness) = decision.witness() {
            covered += 1;
            let nine_m = rat_int(9 * m as i64);
            if witness.total() != nine_m {
                return Err(format!("seed {seed}: witness totals {}, want 9m", witness.total()));
            }
            let grand = tu_value(&gadget, gadget.grand_coalition()).map_err(|e| e.to_string())?;
            if grand != nine_m {
                return Err(format!("seed {seed}: tu_value(A)={grand}, want 9m"));
            }
        }
    }
    budget(started.elapsed(), Duration::from_secs(60), "theorem-2 suite")?;
    Ok(format!("200 instances agree; {covered} witnesses total exactly 9m"))
}

fn criterion_4(log: &mut WitnessLog) -> Result<String, String> {
    let started = Instant::now();
    let mut cases = 0usize;
    for vertices in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..vertices)
            .flat_map(|a| ((a + 1)..vertices).map(move |b| (a, b)))
            .collect();
        for edge_mask in 0..(1u32 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| edge_mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            for k in 0..=vertices {
                let inst = NodeCoverInstance::new(vertices, edges.clone(), k)
                    .map_err(|e| e.to_string())?;
                let expected = solve_nodecover(&inst).map_err(|e| e.to_string())?;
                let gadget = nodecover_to_hybrid(&inst).map_err(|e| e.to_string())?;
                let report = validate_superadditive_hybrid(&gadget).map_err(|e| e.to_string())?;
                if !report.ok {
                    return Err(format!(
                        "|V|={vertices} edges={edges:?} k={k}: gadget fails the superadditivity check"
                    ));
                }
                let decision = decide_hybrid(&gadget).map_err(|e| e.to_string())?;
                if decision.is_non_empty() != expected {
                    return Err(format!(
                        "|V|={vertices} edges={edges:?} k={k}: cover={expected} but decide_hybrid={}",
                        decision.status()
                    ));
                }
                log.verify(&gadget, &decision)
                    .map_err(|e| format!("|V|={vertices} k={k}: {e}"))?;
                cases += 1;
            }
        }
    }
    budget(started.elapsed(), Duration::from_secs(120), "theorem-5 suite")?;
    Ok(format!("{cases} graph/k cases agree (all graphs with |V| <= 5)"))
}

fn criterion_5() -> Result<String, String> {
    let mut checks = 0usize;
    for i in 0..150u64 {
        let game = random_ntu_game(5000 + i, 1..=6, 8, 12);
        let n = game.players.len();
        let table = NtuFrontierTable::compute(&game).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(90_000 + i);
        for _ in 0..10 {
            let outcome = random_outcome(&mut rng, n);
            let fast = find_block_ntu(&game, &outcome).is_some();
            let slow = nonempty_subsets(n).any(|c| {
                table.frontier(c).unwrap().iter().any(|w| {
                    c.members().zip(w).all(|(member, value)| *value > outcome[member])
                })
            });
            if fast != slow {
                return Err(format!(
                    "ntu game seed {i}: basis-only blocking {fast} but closure blocking {slow} on {outcome}"
                ));
            }
            checks += 1;
        }
    }
    for i in 0..150u64 {
        let game = random_tu_game(5500 + i, 1..=6, 8, 12);
        let n = game.players.len();
        let table = TuClosureTable::compute(&game).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(95_000 + i);
        for _ in 0..10 {
            let outcome = random_outcome(&mut rng, n);
            let fast = find_block_tu(&game, &outcome).is_some();
            let slow = nonempty_subsets(n)
                .any(|c| *table.value(c).unwrap() > outcome.total_over(c));
            if fast != slow {
                return Err(format!(
                    "tu game seed {i}: basis-only blocking {fast} but closure blocking {slow} on {outcome}"
                ));
            }
            checks += 1;
        }
    }
    Ok(format!("{checks} outcome checks agree across 300 games"))
}

fn criterion_6(log: &mut WitnessLog) -> Result<String, String> {
    let mut fast_path_closure_calls = 0u64;
    for i in 0..50u64 {
        let game = random_ntu_game(6000 + i, 1..=10, 6, 24);
        let baseline = decide_ntu(&game).map_err(|e| e.to_string())?;
        let grand_set: Vec<Allocation> = enumerate_all_vectors(&game)
            .into_iter()
            .map(Allocation)
            .collect();
        let with_set = game.clone().with_grand_set(grand_set).map_err(|e| e.to_string())?;
        let before = dp_invocations();
        let explicit = decide_ntu_explicit(&with_set).map_err(|e| e.to_string())?;
        fast_path_closure_calls += dp_invocations() - before;
        if explicit.status() != baseline.status() {
            return Err(format!(
                "ntu game seed {i}: explicit={} baseline={}",
                explicit.status(),
                baseline.status()
            ));
        }
        log.verify(&game, &explicit).map_err(|e| format!("ntu seed {i}: {e}"))?;
    }
    for i in 0..50u64 {
        let game = random_tu_game(6500 + i, 1..=10, 8, 24);
        let baseline = decide_tu(&game).map_err(|e| e.to_string())?;
        let grand = tu_value(&game, game.grand_coalition()).map_err(|e| e.to_string())?;
        let mut preset = game.clone();
        preset.explicit_grand_value = Some(grand);
        let before = dp_invocations();
        let fast = decide_tu(&preset).map_err(|e| e.to_string())?;
        fast_path_closure_calls += dp_invocations() - before;
        if fast.status() != baseline.status() {
            return Err(format!(
                "tu game seed {i}: preset grand_value={} baseline={}",
                fast.status(),
                baseline.status()
            ));
        }
        log.verify(&preset, &fast).map_err(|e| format!("tu seed {i}: {e}"))?;
    }
    if fast_path_closure_calls != 0 {
        return Err(format!(
            "fast paths invoked the closure {fast_path_closure_calls} times, want 0"
        ));
    }
    Ok("100 games: fast paths agree and never invoke the closure".into())
}

fn criterion_7() -> Result<String, String> {
    let mut sampled_pairs = 0usize;
    for i in 0..100u64 {
        let game = random_tu_game(7000 + i, 2..=10, 8, 24);
        let n = game.players.len();
        let table = TuClosureTable::compute(&game).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(97_000 + i);
        let mut game_pairs = 0usize;
        while game_pairs < 10 {
            let b = Coalition::from_bits(rng.gen_range(1..(1u32 << n)));
            let rest = game.grand_coalition().difference(b);
            if rest.is_empty() {
                continue;
            }
            let c = Coalition::from_bits(rng.gen_range(1..(1u32 << n))).difference(b);
            if c.is_empty() {
                continue;
            }
            let union = table.value(b.union(c)).unwrap();
            let split = table.value(b).unwrap() + table.value(c).unwrap();
            if *union < split {
                return Err(format!(
                    "tu game seed {i}: v(B∪C) < v(B)+v(C) for B={:?} C={:?}",
                    b.bits(),
                    c.bits()
                ));
            }
            game_pairs += 1;
            sampled_pairs += 1;
        }
    }

    let mut coherence_pairs = 0usize;
    for i in 0..25u64 {
        let game = random_ntu_game(7500 + i, 1..=6, 5, 24);
        let n = game.players.len();
        let table = NtuFrontierTable::compute(&game).map_err(|e| e.to_string())?;
        for b in nonempty_subsets(n) {
            for c in nonempty_subsets(n) {
                if !b.is_disjoint(c) {
                    continue;
                }
                let union = b.union(c);
                let union_frontier = table.frontier(union).unwrap();
                for u in table.frontier(b).unwrap() {
                    for w in table.frontier(c).unwrap() {
                        let merged = interleave(union.bits(), b.bits(), u, w);
                        let covered = union_frontier
                            .iter()
                            .any(|f| f.iter().zip(&merged).all(|(a, b)| a >= b));
                        if !covered {
                            return Err(format!(
                                "ntu game seed {i}: concatenation of frontiers escapes frontier(B∪C)"
                            ));
                        }
                    }
                }
                coherence_pairs += 1;
            }
        }
    }
    Ok(format!(
        "{sampled_pairs} sampled superadditivity pairs hold; frontier coherence on {coherence_pairs} disjoint pairs"
    ))
}

fn criterion_8(log: &WitnessLog) -> Result<String, String> {
    if log.checked == 0 {
        return Err("no witnesses were checked".into());
    }
    if log.failures != 0 {
        return Err(format!(
            "{} of {} witnesses failed the membership check",
            log.failures, log.checked
        ));
    }
    Ok(format!("{} NON_EMPTY witnesses all pass membership", log.checked))
}

fn run_suite_machine(args: &[&str]) -> Result<Vec<u8>, String> {
    let output = Command::new(env!("CARGO_BIN_EXE_gamecore"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if output.status.code() != Some(0) {
        return Err(format!("suite exited {:?}", output.status.code()));
    }
    Ok(output.stdout)
}

fn criterion_9() -> Result<String, String> {
    // Byte-identical machine reports on rerun.
    let thm2 = &["suite", "--kind", "thm2", "--seeds", "1..40", "--m", "2", "--format", "machine"];
    let thm5 = &["suite", "--kind", "thm5", "--seeds", "1..30", "--vertices", "4", "--format", "machine"];
    for args in [thm2.as_slice(), thm5.as_slice()] {
        let first = run_suite_machine(args)?;
        let second = run_suite_machine(args)?;
        if first != second {
            return Err(format!("machine report for {args:?} differs between runs"));
        }
        if first.is_empty() {
            return Err("machine report is empty".into());
        }
    }

    // Scaling all rationals of a TU game by 7/3 never changes the decision.
    let factor = rat(7, 3);
    let mut scaled_games = 0usize;
    let mut fixtures: Vec<Game> = vec![game(G1T)];
    for seed in 0..50u64 {
        let m = 1 + (seed % 2) as usize;
        let inst = random_x3c(seed, m, 8).map_err(|e| e.to_string())?;
        fixtures.push(x3c_to_tu(&inst).map_err(|e| e.to_string())?);
    }
    for original in fixtures {
        let mut scaled = original.clone();
        for entry in &mut scaled.tu_entries {
            entry.value *= &factor;
        }
        if let Some(v) = &mut scaled.explicit_grand_value {
            *v *= &factor;
        }
        let a = decide_tu(&original).map_err(|e| e.to_string())?;
        let b = decide_tu(&scaled).map_err(|e| e.to_string())?;
        if a.status() != b.status() {
            return Err(format!("scaling by 7/3 changed {} to {}", a.status(), b.status()));
        }
        scaled_games += 1;
    }
    Ok(format!(
        "machine reports byte-identical on rerun; {scaled_games} scaled games keep their decisions"
    ))
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();
    let mut log = WitnessLog::default();

    run_criterion("criterion 1 (empty-core fixtures)", &mut outcomes, criterion_1);
    run_criterion("criterion 2 (theorem-1 equivalence)", &mut outcomes, {
        let log = &mut log;
        move || criterion_2(log)
    });
    run_criterion("criterion 3 (theorem-2 equivalence)", &mut outcomes, {
        let log = &mut log;
        move || criterion_3(log)
    });
    run_criterion("criterion 4 (theorem-5 equivalence)", &mut outcomes, {
        let log = &mut log;
        move || criterion_4(log)
    });
    run_criterion("criterion 5 (basis-only blocking)", &mut outcomes, criterion_5);
    run_criterion("criterion 6 (explicit-input fast paths)", &mut outcomes, {
        let log = &mut log;
        move || criterion_6(log)
    });
    run_criterion("criterion 7 (closure properties)", &mut outcomes, criterion_7);
    run_criterion("criterion 8 (witness self-verification)", &mut outcomes, || {
        criterion_8(&log)
    });
    run_criterion("criterion 9 (determinism and scaling)", &mut outcomes, criterion_9);

    let failures: Vec<&Outcome> = outcomes.iter().filter(|o| o.detail.is_err()).collect();
    let total: Duration = outcomes.iter().map(|o| o.elapsed).sum();
    println!(
        "acceptance: {}/{} criteria passed in {total:.2?}",
        outcomes.len() - failures.len(),
        outcomes.len()
    );
    assert!(
        failures.is_empty(),
        "failing criteria: {}",
        failures
            .iter()
            .map(|o| o.name)
            .collect::<Vec<_>>()
            .join(", ")
    );
}
