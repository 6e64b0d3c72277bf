//! Rendering helpers shared by the subcommands.

use clap::ValueEnum;
use serde_json::json;

use gamecore::corecheck::{Blocker, Feasibility, Membership};
use gamecore::{format_rational, Decision, Game, NtuEntry};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Line-oriented text for people.
    Human,
    /// One structured JSON record per line for scripting.
    Machine,
}

fn vector_strings(vector: &[gamecore::Rational]) -> Vec<String> {
    vector.iter().map(format_rational).collect()
}

fn describe_ntu_entry(game: &Game, entry: &NtuEntry) -> String {
    format!(
        "({},({}))",
        game.players.describe(entry.coalition),
        vector_strings(&entry.vector).join(",")
    )
}

pub fn render_membership(game: &Game, verdict: &Membership) -> String {
    match verdict {
        Membership::InCore { feasibility } => match feasibility {
            Feasibility::Decomposition(parts) => {
                let parts: Vec<String> = parts.iter().map(|e| describe_ntu_entry(game, e)).collect();
                format!("IN_CORE decomposition={}", parts.join("+"))
            }
            Feasibility::GrandBudget => "IN_CORE".to_string(),
        },
        Membership::NotFeasible => "NOT_FEASIBLE".to_string(),
        Membership::Blocked { blocker } => match blocker {
            Blocker::Ntu(entry) => format!("BLOCKED by {}", describe_ntu_entry(game, entry)),
            Blocker::Tu(entry) => format!(
                "BLOCKED by ({},{})",
                game.players.describe(entry.coalition),
                format_rational(&entry.value)
            ),
        },
    }
}

pub fn membership_json(game: &Game, verdict: &Membership) -> String {
    let mut record = serde_json::Map::new();
    record.insert("status".into(), verdict.status().into());
    match verdict {
        Membership::InCore { feasibility: Feasibility::Decomposition(parts) } => {
            let rows: Vec<serde_json::Value> = parts
                .iter()
                .map(|e| {
                    json!({
                        "coalition": labels(game, e.coalition),
                        "utilities": vector_strings(&e.vector),
                    })
                })
                .collect();
            record.insert("decomposition".into(), rows.into());
        }
        Membership::Blocked { blocker } => {
            let value = match blocker {
                Blocker::Ntu(e) => json!({
                    "coalition": labels(game, e.coalition),
                    "utilities": vector_strings(&e.vector),
                }),
                Blocker::Tu(e) => json!({
                    "coalition": labels(game, e.coalition),
                    "value": format_rational(&e.value),
                }),
            };
            record.insert("blocker".into(), value);
        }
        _ => {}
    }
    serde_json::Value::Object(record).to_string()
}

pub fn decision_json(decision: &Decision) -> String {
    let mut record = serde_json::Map::new();
    record.insert("status".into(), decision.status().into());
    if let Some(witness) = decision.witness() {
        record.insert("witness".into(), vector_strings(witness.values()).into());
    }
    serde_json::Value::Object(record).to_string()
}

fn labels(game: &Game, c: gamecore::Coalition) -> Vec<String> {
    c.members().map(|i| game.players.name(i).to_string()).collect()
}
