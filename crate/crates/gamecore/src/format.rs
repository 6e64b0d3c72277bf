//! Game file format: JSON with exact rationals.
//!
//! ```json
//! {
//!   "players": ["x", "y", "z"],
//!   "mode": "ntu",
//!   "entries": [
//!     {"coalition": ["x", "y"], "utilities": [2, 1]}
//!   ]
//! }
//! ```
//!
//! TU entries carry `"value"` instead of `"utilities"`. Optional fields:
//! `grand_value` (required for hybrid, fast-path input for tu), `grand_set`
//! (ntu only, arrays of one rational per player), and `meta` (string map).
//! Rationals may be written as integer literals, `"p/q"` strings, or finite
//! decimal strings; all parse exactly. Utilities are listed in the same order
//! as their coalition array.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::GameError;
use crate::game::{Allocation, Coalition, Game, Mode, NtuEntry, PlayerSet, TuEntry};
use crate::rational::{format_rational, parse_rational, Rational};

/// A parsed, validated, normalized game plus any normalization warnings.
#[derive(Debug, Clone)]
pub struct ParsedGame {
    pub game: Game,
    pub warnings: Vec<String>,
}

/// Parse a game document. The result is validated and normalized.
pub fn parse_game(text: &str) -> Result<ParsedGame, GameError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| GameError::Syntax(e.to_string()))?;
    let obj = as_object(&value, "top level")?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "players" | "mode" | "entries" | "grand_value" | "grand_set" | "meta") {
            return Err(GameError::Syntax(format!("unknown field {key:?}")));
        }
    }

    let players = parse_players(obj)?;
    let mode = parse_mode(obj)?;
    let entries = require(obj, "entries")?;
    let entries = as_array(entries, "entries")?;

    let mut ntu_entries = Vec::new();
    let mut tu_entries = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        let ctx = format!("entries[{i}]");
        let eobj = as_object(entry, &ctx)?;
        for key in eobj.keys() {
            if !matches!(key.as_str(), "coalition" | "utilities" | "value") {
                return Err(GameError::Syntax(format!("{ctx}: unknown field {key:?}")));
            }
        }
        let coalition_value = require_in(eobj, "coalition", &ctx)?;
        let labels = as_array(coalition_value, &format!("{ctx}.coalition"))?;
        let (coalition, order) = parse_coalition(&players, labels, &ctx)?;
        match mode {
            Mode::Ntu | Mode::Hybrid => {
                let utilities = require_in(eobj, "utilities", &ctx)?;
                let raw = parse_rational_array(utilities, &format!("{ctx}.utilities"))?;
                if raw.len() != coalition.len() {
                    return Err(GameError::VectorLengthMismatch {
                        expected: coalition.len(),
                        got: raw.len(),
                    });
                }
                // Utilities arrive in the file's coalition order; store them in
                // ascending-index order.
                let mut pairs: Vec<(usize, Rational)> = order.into_iter().zip(raw).collect();
                pairs.sort_by_key(|(idx, _)| *idx);
                let vector = pairs.into_iter().map(|(_, r)| r).collect();
                ntu_entries.push(NtuEntry::new(coalition, vector)?);
            }
            Mode::Tu => {
                let value = require_in(eobj, "value", &ctx)?;
                let value = rational_from_value(value, &format!("{ctx}.value"))?;
                tu_entries.push(TuEntry::new(coalition, value)?);
            }
        }
    }

    let grand_value = match obj.get("grand_value") {
        Some(v) => Some(rational_from_value(v, "grand_value")?),
        None => None,
    };
    let grand_set = match obj.get("grand_set") {
        Some(v) => {
            let rows = as_array(v, "grand_set")?;
            let mut allocations = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let values = parse_rational_array(row, &format!("grand_set[{i}]"))?;
                if values.len() != players.len() {
                    return Err(GameError::GrandSetElementLength {
                        expected: players.len(),
                        got: values.len(),
                    });
                }
                allocations.push(Allocation(values));
            }
            Some(allocations)
        }
        None => None,
    };
    let meta = match obj.get("meta") {
        Some(v) => {
            let mobj = as_object(v, "meta")?;
            let mut map = BTreeMap::new();
            for (k, val) in mobj {
                let s = val
                    .as_str()
                    .ok_or_else(|| GameError::Syntax(format!("meta.{k}: expected a string")))?;
                map.insert(k.clone(), s.to_string());
            }
            map
        }
        None => BTreeMap::new(),
    };

    let game = Game {
        players,
        mode,
        ntu_entries,
        tu_entries,
        explicit_grand_value: grand_value,
        explicit_grand_set: grand_set,
        meta,
    };
    game.validate_structure()?;
    let (game, warnings) = crate::game::normalize(game);
    Ok(ParsedGame { game, warnings })
}

/// Serialize a game. `parse_game(serialize_game(g)).game == g` for normalized games.
pub fn serialize_game(game: &Game) -> String {
    let players: Vec<Value> = game.players.names().iter().map(|n| json!(n)).collect();
    let mut root = Map::new();
    root.insert("players".into(), Value::Array(players));
    root.insert("mode".into(), json!(game.mode.as_str()));

    let entries: Vec<Value> = match game.mode {
        Mode::Ntu | Mode::Hybrid => game
            .ntu_entries
            .iter()
            .map(|e| {
                let mut obj = Map::new();
                obj.insert("coalition".into(), coalition_to_value(&game.players, e.coalition));
                obj.insert(
                    "utilities".into(),
                    Value::Array(e.vector.iter().map(rational_to_value).collect()),
                );
                Value::Object(obj)
            })
            .collect(),
        Mode::Tu => game
            .tu_entries
            .iter()
            .map(|e| {
                let mut obj = Map::new();
                obj.insert("coalition".into(), coalition_to_value(&game.players, e.coalition));
                obj.insert("value".into(), rational_to_value(&e.value));
                Value::Object(obj)
            })
            .collect(),
    };
    root.insert("entries".into(), Value::Array(entries));

    if let Some(v) = &game.explicit_grand_value {
        root.insert("grand_value".into(), rational_to_value(v));
    }
    if let Some(set) = &game.explicit_grand_set {
        let rows: Vec<Value> = set
            .iter()
            .map(|a| Value::Array(a.values().iter().map(rational_to_value).collect()))
            .collect();
        root.insert("grand_set".into(), Value::Array(rows));
    }
    if !game.meta.is_empty() {
        let mut meta = Map::new();
        for (k, v) in &game.meta {
            meta.insert(k.clone(), json!(v));
        }
        root.insert("meta".into(), Value::Object(meta));
    }

    let mut out = serde_json::to_string_pretty(&Value::Object(root)).expect("serializing a game cannot fail");
    out.push('\n');
    out
}

fn parse_players(obj: &Map<String, Value>) -> Result<PlayerSet, GameError> {
    let raw = require(obj, "players")?;
    let raw = as_array(raw, "players")?;
    let mut names = Vec::with_capacity(raw.len());
    for v in raw {
        let s = v
            .as_str()
            .ok_or_else(|| GameError::Syntax("players: expected an array of strings".into()))?;
        names.push(s.to_string());
    }
    PlayerSet::new(names)
}

fn parse_mode(obj: &Map<String, Value>) -> Result<Mode, GameError> {
    let raw = require(obj, "mode")?;
    let s = raw
        .as_str()
        .ok_or_else(|| GameError::Syntax("mode: expected a string".into()))?;
    match s {
        "ntu" => Ok(Mode::Ntu),
        "tu" => Ok(Mode::Tu),
        "hybrid" => Ok(Mode::Hybrid),
        other => Err(GameError::Syntax(format!(
            "mode: expected \"ntu\", \"tu\" or \"hybrid\", got {other:?}"
        ))),
    }
}

/// Returns the coalition plus the member indices in file order (for pairing
/// with the utilities array).
fn parse_coalition(
    players: &PlayerSet,
    labels: &[Value],
    ctx: &str,
) -> Result<(Coalition, Vec<usize>), GameError> {
    let mut order = Vec::with_capacity(labels.len());
    let mut coalition = Coalition::EMPTY;
    for v in labels {
        let label = v
            .as_str()
            .ok_or_else(|| GameError::Syntax(format!("{ctx}.coalition: expected an array of labels")))?;
        let i = players
            .index_of(label)
            .ok_or_else(|| GameError::UnknownPlayer(label.to_string()))?;
        if coalition.contains(i) {
            return Err(GameError::DuplicateCoalitionMember(label.to_string()));
        }
        coalition = coalition.with(i);
        order.push(i);
    }
    if coalition.is_empty() {
        return Err(GameError::EmptyCoalition);
    }
    Ok((coalition, order))
}

fn parse_rational_array(value: &Value, ctx: &str) -> Result<Vec<Rational>, GameError> {
    let arr = as_array(value, ctx)?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| rational_from_value(v, &format!("{ctx}[{i}]")))
        .collect()
}

fn rational_from_value(value: &Value, ctx: &str) -> Result<Rational, GameError> {
    match value {
        // With arbitrary_precision enabled the literal text survives intact,
        // so decimals parse exactly.
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        _ => Err(GameError::Syntax(format!("{ctx}: expected a rational"))),
    }
}

fn rational_to_value(r: &Rational) -> Value {
    use num_traits::One;
    if r.denom().is_one() {
        if let Ok(i) = i64::try_from(r.numer().clone()) {
            return json!(i);
        }
    }
    json!(format_rational(r))
}

fn coalition_to_value(players: &PlayerSet, c: Coalition) -> Value {
    Value::Array(c.members().map(|i| json!(players.name(i))).collect())
}

fn as_object<'v>(value: &'v Value, ctx: &str) -> Result<&'v Map<String, Value>, GameError> {
    value
        .as_object()
        .ok_or_else(|| GameError::Syntax(format!("{ctx}: expected an object")))
}

fn as_array<'v>(value: &'v Value, ctx: &str) -> Result<&'v [Value], GameError> {
    value
        .as_array()
        .map(|a| a.as_slice())
        .ok_or_else(|| GameError::Syntax(format!("{ctx}: expected an array")))
}

fn require<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value, GameError> {
    obj.get(key)
        .ok_or_else(|| GameError::Syntax(format!("missing field {key:?}")))
}

fn require_in<'v>(obj: &'v Map<String, Value>, key: &str, ctx: &str) -> Result<&'v Value, GameError> {
    obj.get(key)
        .ok_or_else(|| GameError::Syntax(format!("{ctx}: missing field {key:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    const G1: &str = include_str!("../../../fixtures/g1.game");

    #[test]
    fn parses_g1_fixture() {
        let parsed = parse_game(G1).unwrap();
        assert!(parsed.warnings.is_empty());
        let g = parsed.game;
        assert_eq!(g.players.len(), 3);
        assert_eq!(g.mode, Mode::Ntu);
        let pairs = g.ntu_entries.iter().filter(|e| e.coalition.len() == 2).count();
        let singles = g.ntu_entries.iter().filter(|e| e.coalition.len() == 1).count();
        assert_eq!((pairs, singles), (3, 3));
    }

    #[test]
    fn out_of_order_coalition_is_canonicalized() {
        let text = r#"{
            "players": ["x", "y"],
            "mode": "ntu",
            "entries": [{"coalition": ["y", "x"], "utilities": [1, 2]}]
        }"#;
        let g = parse_game(text).unwrap().game;
        let e = &g.ntu_entries[0];
        assert_eq!(e.coalition.members().collect::<Vec<_>>(), vec![0, 1]);
        // x gets 2, y gets 1.
        assert_eq!(e.vector, vec![rat_int(2), rat_int(1)]);
    }

    #[test]
    fn vector_length_mismatch_is_rejected() {
        let text = r#"{
            "players": ["x", "y", "z"],
            "mode": "ntu",
            "entries": [{"coalition": ["x", "y"], "utilities": [1, 2, 3]}]
        }"#;
        assert!(matches!(
            parse_game(text),
            Err(GameError::VectorLengthMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn empty_basis_gets_singletons_with_warning() {
        let text = r#"{"players": ["a"], "mode": "ntu", "entries": []}"#;
        let parsed = parse_game(text).unwrap();
        assert_eq!(parsed.game.ntu_entries.len(), 1);
        assert_eq!(parsed.warnings.len(), 1);
    }

    #[test]
    fn rejects_unknown_labels_and_fields() {
        let unknown_player = r#"{
            "players": ["x"],
            "mode": "ntu",
            "entries": [{"coalition": ["q"], "utilities": [0]}]
        }"#;
        assert!(matches!(parse_game(unknown_player), Err(GameError::UnknownPlayer(_))));

        let unknown_field = r#"{"players": ["x"], "mode": "ntu", "entries": [], "extra": 1}"#;
        assert!(matches!(parse_game(unknown_field), Err(GameError::Syntax(_))));

        let dup = r#"{"players": ["x", "x"], "mode": "ntu", "entries": []}"#;
        assert!(matches!(parse_game(dup), Err(GameError::DuplicatePlayer(_))));
    }

    #[test]
    fn hybrid_without_grand_value_is_rejected() {
        let text = r#"{"players": ["a"], "mode": "hybrid", "entries": []}"#;
        assert!(matches!(parse_game(text), Err(GameError::MissingGrandValue)));
    }

    #[test]
    fn grand_set_rows_must_cover_every_player() {
        let text = r#"{
            "players": ["x", "y", "z"],
            "mode": "ntu",
            "entries": [],
            "grand_set": [[1, 2]]
        }"#;
        assert!(matches!(
            parse_game(text),
            Err(GameError::GrandSetElementLength { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn exact_rationals_survive_round_trip() {
        let text = r#"{
            "players": ["a", "b"],
            "mode": "tu",
            "entries": [{"coalition": ["a", "b"], "value": "1/3"}],
            "grand_value": 0.25
        }"#;
        let g = parse_game(text).unwrap().game;
        assert_eq!(g.tu_entries[0].value, rat(1, 3));
        assert_eq!(g.explicit_grand_value, Some(rat(1, 4)));

        let doc = serialize_game(&g);
        assert!(doc.contains("\"1/3\""));
        let again = parse_game(&doc).unwrap().game;
        assert_eq!(again, g);
    }

    #[test]
    fn round_trips_fixture() {
        let g = parse_game(G1).unwrap().game;
        let again = parse_game(&serialize_game(&g)).unwrap();
        assert_eq!(again.game, g);
        assert!(again.warnings.is_empty());
    }
}
