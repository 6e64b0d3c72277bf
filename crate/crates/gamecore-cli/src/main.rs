//! Command-line front end: validate, closure, membership, decide, generate,
//! oracle, and suite.
//!
//! Exit codes: `decide` and `oracle core` use 0 = NON_EMPTY, 1 = EMPTY,
//! 2 = error. `suite` uses 0 = all records match, 1 = some mismatch,
//! 2 = error. Everything else uses 0 = success, 2 = error.

mod output;
mod suite;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use gamecore::closure::{ntu_frontier, tu_value, NtuFrontier};
use gamecore::corecheck::membership;
use gamecore::reductions::{
    self, nodecover_to_hybrid, parse_instance, serialize_instance, solve_nodecover, solve_x3c,
    x3c_to_ntu, x3c_to_tu, ReductionInstance,
};
use gamecore::{
    decide_hybrid, decide_ntu, decide_ntu_explicit, decide_tu, format_rational, parse_game,
    validate_superadditive_hybrid, Allocation, Coalition, Decision, Game, Mode, ParsedGame,
};

use output::Format;

#[derive(Parser)]
#[command(
    name = "gamecore",
    about = "Core solver for characteristic-form games in superadditive basis representation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a game file; report structure and warnings.
    Validate {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Print the derived value (tu) or Pareto frontier (ntu/hybrid) of a coalition.
    Closure {
        #[arg(long)]
        game: PathBuf,
        /// Comma-separated player labels; defaults to the grand coalition.
        #[arg(long)]
        coalition: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Check whether an outcome is in the core.
    Membership {
        #[arg(long)]
        game: PathBuf,
        /// Comma-separated rationals, one per player.
        #[arg(long)]
        outcome: String,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Decide core nonemptiness. Exit 0 = NON_EMPTY, 1 = EMPTY, 2 = error.
    Decide {
        #[arg(long)]
        game: PathBuf,
        /// Use the explicit grand-coalition input (grand_set for ntu,
        /// grand_value for tu); error if the file lacks it.
        #[arg(long)]
        explicit: bool,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Generate a ground-truth game from a seeded random reduction instance.
    Generate {
        #[arg(value_enum)]
        kind: GenerateKind,
        #[arg(long)]
        seed: u64,
        /// Instance size: m for x3c kinds, vertex count for nodecover.
        #[arg(long)]
        size: usize,
        /// Cover budget (nodecover only); sampled from the seed when omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Maximum number of triples (x3c kinds).
        #[arg(long, default_value_t = 8)]
        max_triples: usize,
        /// Output game file.
        #[arg(long)]
        out: PathBuf,
        /// Also write the source instance file.
        #[arg(long)]
        instance_out: Option<PathBuf>,
    },
    /// Run an exact reference decider.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Run a seeded equivalence suite: oracle answers vs decider answers.
    Suite {
        #[arg(long, value_enum)]
        kind: suite::SuiteKind,
        /// Inclusive seed range, e.g. `1..50`.
        #[arg(long)]
        seeds: String,
        /// Ground-set multiplier m (thm1/thm2).
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Maximum triples per instance (thm1/thm2).
        #[arg(long, default_value_t = 8)]
        max_triples: usize,
        /// Vertex count (thm5).
        #[arg(long, default_value_t = 4)]
        vertices: usize,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Decide an exact-cover-by-3-sets instance file. Prints true/false.
    X3c {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide a node-cover instance file. Prints true/false.
    Nodecover {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Brute-force core decision for a tiny game. Exit codes as for decide.
    Core {
        #[arg(long)]
        game: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenerateKind {
    X3cNtu,
    X3cTu,
    Nodecover,
}

fn main() -> ExitCode {
    // Die quietly when a pipeline closes stdout early instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { game, format } => cmd_validate(&game, format),
        Command::Closure { game, coalition, format } => cmd_closure(&game, coalition.as_deref(), format),
        Command::Membership { game, outcome, format } => cmd_membership(&game, &outcome, format),
        Command::Decide { game, explicit, format } => cmd_decide(&game, explicit, format),
        Command::Generate { kind, seed, size, k, max_triples, out, instance_out } => {
            cmd_generate(kind, seed, size, k, max_triples, &out, instance_out.as_deref())
        }
        Command::Oracle { what } => match what {
            OracleCommand::X3c { input } => cmd_oracle_instance(&input, true),
            OracleCommand::Nodecover { input } => cmd_oracle_instance(&input, false),
            OracleCommand::Core { game } => cmd_oracle_core(&game),
        },
        Command::Suite { kind, seeds, m, max_triples, vertices, format, out } => {
            let seeds = parse_seed_range(&seeds)?;
            let params = suite::SuiteParams { kind, seeds, m, max_triples, vertices };
            suite::cmd_suite(&params, format, out.as_deref())
        }
    }
}

fn load_game(path: &std::path::Path) -> Result<ParsedGame> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_game(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_validate(path: &std::path::Path, format: Format) -> Result<ExitCode> {
    let parsed = load_game(path)?;
    let game = &parsed.game;
    let entries = match game.mode {
        Mode::Tu => game.tu_entries.len(),
        _ => game.ntu_entries.len(),
    };
    let hybrid_report = if game.mode == Mode::Hybrid {
        Some(validate_superadditive_hybrid(game)?)
    } else {
        None
    };
    match format {
        Format::Human => {
            println!(
                "ok: {} players, mode {}, {} entries",
                game.players.len(),
                game.mode,
                entries
            );
            for warning in &parsed.warnings {
                println!("warning: {warning}");
            }
            if let Some(report) = &hybrid_report {
                println!(
                    "hybrid superadditivity: welfare_max(A)={} grand_value={} -> {}",
                    format_rational(&report.welfare_max),
                    format_rational(&report.grand_value),
                    if report.ok { "ok" } else { "VIOLATED" }
                );
            }
        }
        Format::Machine => {
            let mut record = serde_json::Map::new();
            record.insert("players".into(), game.players.len().into());
            record.insert("mode".into(), game.mode.as_str().into());
            record.insert("entries".into(), entries.into());
            record.insert("warnings".into(), parsed.warnings.clone().into());
            if let Some(report) = &hybrid_report {
                record.insert("welfare_max".into(), format_rational(&report.welfare_max).into());
                record.insert("grand_value".into(), format_rational(&report.grand_value).into());
                record.insert("superadditive_ok".into(), report.ok.into());
            }
            println!("{}", serde_json::Value::Object(record));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_target_coalition(game: &Game, spec: Option<&str>) -> Result<Coalition> {
    match spec {
        Some(labels) => Ok(game.players.coalition_of(labels)?),
        None => Ok(game.grand_coalition()),
    }
}

fn cmd_closure(path: &std::path::Path, coalition: Option<&str>, format: Format) -> Result<ExitCode> {
    let game = load_game(path)?.game;
    let target = parse_target_coalition(&game, coalition)?;
    match game.mode {
        Mode::Tu => {
            let value = tu_value(&game, target)?;
            match format {
                Format::Human => println!(
                    "v({}) = {}",
                    game.players.describe(target),
                    format_rational(&value)
                ),
                Format::Machine => println!(
                    "{}",
                    serde_json::json!({
                        "coalition": coalition_labels(&game, target),
                        "value": format_rational(&value),
                    })
                ),
            }
        }
        Mode::Ntu | Mode::Hybrid => {
            let NtuFrontier { vectors, .. } = ntu_frontier(&game, target)?;
            match format {
                Format::Human => {
                    println!(
                        "frontier of {}: {} vector(s)",
                        game.players.describe(target),
                        vectors.len()
                    );
                    for v in &vectors {
                        let parts: Vec<String> = v.iter().map(format_rational).collect();
                        println!("({})", parts.join(","));
                    }
                }
                Format::Machine => {
                    let rows: Vec<Vec<String>> = vectors
                        .iter()
                        .map(|v| v.iter().map(format_rational).collect())
                        .collect();
                    println!(
                        "{}",
                        serde_json::json!({
                            "coalition": coalition_labels(&game, target),
                            "frontier": rows,
                        })
                    );
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn coalition_labels(game: &Game, c: Coalition) -> Vec<String> {
    c.members().map(|i| game.players.name(i).to_string()).collect()
}

fn cmd_membership(path: &std::path::Path, outcome: &str, format: Format) -> Result<ExitCode> {
    let game = load_game(path)?.game;
    let outcome = Allocation::from_str(outcome)?;
    game.check_allocation(&outcome)?;
    let verdict = membership(&game, &outcome)?;
    match format {
        Format::Human => println!("{}", output::render_membership(&game, &verdict)),
        Format::Machine => println!("{}", output::membership_json(&game, &verdict)),
    }
    Ok(ExitCode::SUCCESS)
}

fn decision_exit(decision: &Decision) -> ExitCode {
    if decision.is_non_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_decide(path: &std::path::Path, explicit: bool, format: Format) -> Result<ExitCode> {
    let game = load_game(path)?.game;
    let decision = decide_for(&game, explicit)?;
    match format {
        Format::Human => println!("{decision}"),
        Format::Machine => println!("{}", output::decision_json(&decision)),
    }
    Ok(decision_exit(&decision))
}

fn decide_for(game: &Game, explicit: bool) -> Result<Decision> {
    let decision = match game.mode {
        Mode::Ntu => {
            if explicit {
                decide_ntu_explicit(game)?
            } else {
                decide_ntu(game)?
            }
        }
        Mode::Tu => {
            if explicit && game.explicit_grand_value.is_none() {
                bail!("--explicit requires grand_value in the game file");
            }
            decide_tu(game)?
        }
        Mode::Hybrid => {
            if explicit {
                bail!("--explicit applies to ntu and tu games; hybrid games always use their grand_value");
            }
            decide_hybrid(game)?
        }
    };
    Ok(decision)
}

fn cmd_generate(
    kind: GenerateKind,
    seed: u64,
    size: usize,
    k: Option<usize>,
    max_triples: usize,
    out: &std::path::Path,
    instance_out: Option<&std::path::Path>,
) -> Result<ExitCode> {
    let (game, instance, generator) = match kind {
        GenerateKind::X3cNtu => {
            let inst = reductions::random_x3c(seed, size, max_triples)?;
            let game = x3c_to_ntu(&inst)?;
            (game, ReductionInstance::X3c(inst), "x3c-ntu")
        }
        GenerateKind::X3cTu => {
            let inst = reductions::random_x3c(seed, size, max_triples)?;
            let game = x3c_to_tu(&inst)?;
            (game, ReductionInstance::X3c(inst), "x3c-tu")
        }
        GenerateKind::Nodecover => {
            let inst = reductions::random_nodecover(seed, size, k)?;
            let game = nodecover_to_hybrid(&inst)?;
            (game, ReductionInstance::NodeCover(inst), "nodecover")
        }
    };
    let game = game
        .with_meta("generator", generator)
        .with_meta("seed", &seed.to_string())
        .with_meta("size", &size.to_string());
    fs::write(out, gamecore::serialize_game(&game))
        .with_context(|| format!("writing {}", out.display()))?;
    if let Some(path) = instance_out {
        fs::write(path, serialize_instance(&instance))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    println!(
        "wrote {} ({} players, seed {seed})",
        out.display(),
        game.players.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle_instance(path: &std::path::Path, expect_x3c: bool) -> Result<ExitCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let instance = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    let answer = match (&instance, expect_x3c) {
        (ReductionInstance::X3c(inst), true) => solve_x3c(inst),
        (ReductionInstance::NodeCover(inst), false) => solve_nodecover(inst)?,
        _ => return Err(anyhow!("instance kind does not match the oracle subcommand")),
    };
    println!("{answer}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle_core(path: &std::path::Path) -> Result<ExitCode> {
    let game = load_game(path)?.game;
    let decision = gamecore::oracle::brute_core_nonempty(&game)?;
    println!("{decision}");
    Ok(decision_exit(&decision))
}

/// Parse `a..b` (inclusive) or a single seed `a`.
fn parse_seed_range(spec: &str) -> Result<std::ops::RangeInclusive<u64>> {
    if let Some((start, end)) = spec.split_once("..") {
        let start: u64 = start.trim().parse().context("invalid seed range start")?;
        let end: u64 = end.trim().parse().context("invalid seed range end")?;
        if start > end {
            bail!("empty seed range {spec:?}");
        }
        Ok(start..=end)
    } else {
        let seed: u64 = spec.trim().parse().context("invalid seed")?;
        Ok(seed..=seed)
    }
}
