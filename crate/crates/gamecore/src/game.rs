//! Domain types for characteristic-form games given by a superadditive basis.
//!
//! A game is a player roster plus a basis `W` of synergy-introducing
//! coalitions: utility possibility vectors in NTU/hybrid mode, scalar values
//! in TU mode. Everything any coalition can achieve is derived from `W` by
//! optimally partitioning it into listed pieces (see [`crate::closure`]).
//! After [`normalize`], every player is guaranteed a singleton entry, so
//! every game admits at least the all-singletons outcome.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::GameError;
use crate::rational::{format_rational, parse_rational, Rational};

/// Hard cap on the number of players: subset tables are indexed by bitmask.
pub const MAX_PLAYERS: usize = 24;

/// Ordered roster of distinct player labels. Index = position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerSet {
    names: Vec<String>,
}

impl PlayerSet {
    pub fn new<I, S>(names: I) -> Result<Self, GameError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_PLAYERS {
            return Err(GameError::PlayerCount { got: names.len() });
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains([',', '{', '}']) || name.contains(char::is_whitespace) {
                return Err(GameError::InvalidLabel(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(GameError::DuplicatePlayer(name.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.names.iter().position(|n| n == label)
    }

    /// The coalition of all players.
    pub fn grand_coalition(&self) -> Coalition {
        Coalition::full(self.len())
    }

    /// Render a coalition as `{a,b,c}` using this roster's labels.
    pub fn describe(&self, c: Coalition) -> String {
        let members: Vec<&str> = c.members().map(|i| self.name(i)).collect();
        format!("{{{}}}", members.join(","))
    }

    /// Parse a comma-separated list of labels into a coalition.
    pub fn coalition_of(&self, labels: &str) -> Result<Coalition, GameError> {
        let mut c = Coalition::EMPTY;
        for label in labels.split(',') {
            let label = label.trim();
            let i = self
                .index_of(label)
                .ok_or_else(|| GameError::UnknownPlayer(label.to_string()))?;
            if c.contains(i) {
                return Err(GameError::DuplicateCoalitionMember(label.to_string()));
            }
            c = c.with(i);
        }
        Ok(c)
    }
}

/// A subset of player indices, stored as a bitmask (bit `i` = player `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u32) -> Self {
        Coalition(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        Coalition(1 << index)
    }

    pub fn full(n: usize) -> Self {
        Coalition(if n >= 32 { u32::MAX } else { (1 << n) - 1 })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u32;
        for i in indices {
            bits |= 1 << i;
        }
        Coalition(bits)
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> Self {
        Coalition(self.0 | (1 << index))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        Coalition(self.0 | other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        Coalition(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Lowest-index member, if any.
    pub fn lowest(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Member indices in ascending order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                i
            })
        })
    }
}

/// Utilities for one coalition, in the coalition's ascending-index order.
pub type UtilityVector = Vec<Rational>;

/// An NTU basis entry: a coalition together with one vector it can guarantee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NtuEntry {
    pub coalition: Coalition,
    pub vector: UtilityVector,
}

impl NtuEntry {
    pub fn new(coalition: Coalition, vector: UtilityVector) -> Result<Self, GameError> {
        if coalition.is_empty() {
            return Err(GameError::EmptyCoalition);
        }
        if vector.len() != coalition.len() {
            return Err(GameError::VectorLengthMismatch {
                expected: coalition.len(),
                got: vector.len(),
            });
        }
        Ok(Self { coalition, vector })
    }

    /// The utility this entry assigns to `player`, if a member.
    pub fn utility_of(&self, player: usize) -> Option<&Rational> {
        self.coalition
            .members()
            .position(|m| m == player)
            .map(|pos| &self.vector[pos])
    }
}

/// A TU basis entry: a coalition together with its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuEntry {
    pub coalition: Coalition,
    pub value: Rational,
}

impl TuEntry {
    pub fn new(coalition: Coalition, value: Rational) -> Result<Self, GameError> {
        if coalition.is_empty() {
            return Err(GameError::EmptyCoalition);
        }
        Ok(Self { coalition, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ntu,
    Tu,
    Hybrid,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Ntu => "ntu",
            Mode::Tu => "tu",
            Mode::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One exact-rational utility per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation(pub Vec<Rational>);

impl Allocation {
    pub fn zeros(n: usize) -> Self {
        Allocation(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    /// Sum of the values of the members of `c`.
    pub fn total_over(&self, c: Coalition) -> Rational {
        c.members().map(|i| self.0[i].clone()).sum()
    }
}

impl std::ops::Index<usize> for Allocation {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Allocation {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, GameError> {
        s.split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map(Allocation)
    }
}

/// A characteristic-form game in basis representation.
///
/// Construct through [`Game::new_ntu`] / [`Game::new_tu`] / [`Game::new_hybrid`]
/// or [`crate::parse_game`]; all of them validate and normalize, which the
/// solver and closure operations rely on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    pub players: PlayerSet,
    pub mode: Mode,
    /// Basis entries in NTU or hybrid mode, in file order.
    pub ntu_entries: Vec<NtuEntry>,
    /// Basis entries in TU mode, in file order.
    pub tu_entries: Vec<TuEntry>,
    /// Explicit grand-coalition value: required for hybrid, optional fast-path
    /// input for TU (used instead of the closure when present).
    pub explicit_grand_value: Option<Rational>,
    /// Explicit list of grand-coalition outcomes (NTU fast-path input).
    pub explicit_grand_set: Option<Vec<Allocation>>,
    /// Free-form provenance metadata (generator name, seed, ...).
    pub meta: BTreeMap<String, String>,
}

impl Game {
    pub fn new_ntu(players: PlayerSet, entries: Vec<NtuEntry>) -> Result<(Game, Vec<String>), GameError> {
        let game = Game {
            players,
            mode: Mode::Ntu,
            ntu_entries: entries,
            tu_entries: Vec::new(),
            explicit_grand_value: None,
            explicit_grand_set: None,
            meta: BTreeMap::new(),
        };
        game.validate_structure()?;
        Ok(normalize(game))
    }

    pub fn new_tu(
        players: PlayerSet,
        entries: Vec<TuEntry>,
        grand_value: Option<Rational>,
    ) -> Result<(Game, Vec<String>), GameError> {
        let game = Game {
            players,
            mode: Mode::Tu,
            ntu_entries: Vec::new(),
            tu_entries: entries,
            explicit_grand_value: grand_value,
            explicit_grand_set: None,
            meta: BTreeMap::new(),
        };
        game.validate_structure()?;
        Ok(normalize(game))
    }

    pub fn new_hybrid(
        players: PlayerSet,
        entries: Vec<NtuEntry>,
        grand_value: Rational,
    ) -> Result<(Game, Vec<String>), GameError> {
        let game = Game {
            players,
            mode: Mode::Hybrid,
            ntu_entries: entries,
            tu_entries: Vec::new(),
            explicit_grand_value: Some(grand_value),
            explicit_grand_set: None,
            meta: BTreeMap::new(),
        };
        game.validate_structure()?;
        Ok(normalize(game))
    }

    /// Attach an explicit grand-coalition outcome list (NTU only).
    pub fn with_grand_set(mut self, grand_set: Vec<Allocation>) -> Result<Game, GameError> {
        if self.mode != Mode::Ntu {
            return Err(GameError::ModeMismatch {
                expected: "ntu",
                got: self.mode.as_str(),
            });
        }
        let n = self.players.len();
        for alloc in &grand_set {
            if alloc.len() != n {
                return Err(GameError::GrandSetElementLength {
                    expected: n,
                    got: alloc.len(),
                });
            }
        }
        self.explicit_grand_set = Some(grand_set);
        Ok(self)
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Game {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn grand_coalition(&self) -> Coalition {
        self.players.grand_coalition()
    }

    /// Structural validation: coalitions inside the roster, vector lengths,
    /// mode-specific fields coherent.
    pub fn validate_structure(&self) -> Result<(), GameError> {
        let all = self.grand_coalition();
        match self.mode {
            Mode::Ntu | Mode::Hybrid => {
                if !self.tu_entries.is_empty() {
                    return Err(GameError::Syntax("value entries are only valid in tu mode".into()));
                }
                for e in &self.ntu_entries {
                    if e.coalition.is_empty() {
                        return Err(GameError::EmptyCoalition);
                    }
                    if !e.coalition.is_subset_of(all) {
                        return Err(GameError::CoalitionOutsidePlayers);
                    }
                    if e.vector.len() != e.coalition.len() {
                        return Err(GameError::VectorLengthMismatch {
                            expected: e.coalition.len(),
                            got: e.vector.len(),
                        });
                    }
                }
            }
            Mode::Tu => {
                if !self.ntu_entries.is_empty() {
                    return Err(GameError::Syntax("utility entries are only valid in ntu or hybrid mode".into()));
                }
                for e in &self.tu_entries {
                    if e.coalition.is_empty() {
                        return Err(GameError::EmptyCoalition);
                    }
                    if !e.coalition.is_subset_of(all) {
                        return Err(GameError::CoalitionOutsidePlayers);
                    }
                }
            }
        }
        if self.mode == Mode::Hybrid && self.explicit_grand_value.is_none() {
            return Err(GameError::MissingGrandValue);
        }
        if self.mode == Mode::Ntu && self.explicit_grand_value.is_some() {
            return Err(GameError::Syntax("grand_value is only valid in tu or hybrid mode".into()));
        }
        if let Some(set) = &self.explicit_grand_set {
            if self.mode != Mode::Ntu {
                return Err(GameError::Syntax("grand_set is only valid in ntu mode".into()));
            }
            for alloc in set {
                if alloc.len() != self.players.len() {
                    return Err(GameError::GrandSetElementLength {
                        expected: self.players.len(),
                        got: alloc.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Check the normalization invariant: every player has its required
    /// singleton entry (NTU/hybrid: the zero vector; TU: any value).
    pub fn require_normalized(&self) -> Result<(), GameError> {
        for i in 0..self.players.len() {
            let s = Coalition::singleton(i);
            let ok = match self.mode {
                Mode::Ntu | Mode::Hybrid => self
                    .ntu_entries
                    .iter()
                    .any(|e| e.coalition == s && e.vector[0].is_zero()),
                Mode::Tu => self.tu_entries.iter().any(|e| e.coalition == s),
            };
            if !ok {
                return Err(GameError::NotNormalized(self.players.name(i).to_string()));
            }
        }
        Ok(())
    }

    fn expect_mode(&self, expected: Mode) -> Result<(), GameError> {
        if self.mode != expected {
            return Err(GameError::ModeMismatch {
                expected: expected.as_str(),
                got: self.mode.as_str(),
            });
        }
        Ok(())
    }

    pub(crate) fn expect_ntu_like(&self) -> Result<(), GameError> {
        if self.mode == Mode::Tu {
            return Err(GameError::ModeMismatch {
                expected: "ntu or hybrid",
                got: "tu",
            });
        }
        Ok(())
    }

    pub(crate) fn expect_tu(&self) -> Result<(), GameError> {
        self.expect_mode(Mode::Tu)
    }

    pub(crate) fn expect_hybrid(&self) -> Result<(), GameError> {
        self.expect_mode(Mode::Hybrid)
    }

    /// Check that an outcome has one value per player.
    pub fn check_allocation(&self, u: &Allocation) -> Result<(), GameError> {
        if u.len() != self.players.len() {
            return Err(GameError::AllocationLength {
                expected: self.players.len(),
                got: u.len(),
            });
        }
        Ok(())
    }
}

/// Establish the normalization invariants. Idempotent.
///
/// NTU/hybrid: the entry `({a},(0))` is added for every player missing it.
/// TU: `({a},0)` is added only when `{a}` receives no value elsewhere, and
/// duplicate values for one coalition collapse to their maximum.
/// Exact NTU duplicates collapse to one copy. Listed entries keep file order;
/// added singletons are appended in ascending player order.
pub fn normalize(game: Game) -> (Game, Vec<String>) {
    let mut warnings = Vec::new();
    let n = game.players.len();
    let mut game = game;
    match game.mode {
        Mode::Ntu | Mode::Hybrid => {
            let mut seen: Vec<NtuEntry> = Vec::with_capacity(game.ntu_entries.len());
            for e in game.ntu_entries.drain(..) {
                if !seen.contains(&e) {
                    seen.push(e);
                }
            }
            for i in 0..n {
                let s = Coalition::singleton(i);
                if !seen.iter().any(|e| e.coalition == s && e.vector[0].is_zero()) {
                    seen.push(NtuEntry {
                        coalition: s,
                        vector: vec![Rational::zero()],
                    });
                    warnings.push(format!(
                        "added required singleton entry ({},(0))",
                        game.players.describe(s)
                    ));
                }
            }
            game.ntu_entries = seen;
        }
        Mode::Tu => {
            let mut kept: Vec<TuEntry> = Vec::with_capacity(game.tu_entries.len());
            for e in game.tu_entries.drain(..) {
                if let Some(prev) = kept.iter_mut().find(|k| k.coalition == e.coalition) {
                    warnings.push(format!(
                        "duplicate value entries for {}: keeping the maximum",
                        game.players.describe(e.coalition)
                    ));
                    if e.value > prev.value {
                        prev.value = e.value;
                    }
                } else {
                    kept.push(e);
                }
            }
            for i in 0..n {
                let s = Coalition::singleton(i);
                if !kept.iter().any(|e| e.coalition == s) {
                    kept.push(TuEntry {
                        coalition: s,
                        value: Rational::zero(),
                    });
                    warnings.push(format!(
                        "added required singleton entry ({},0)",
                        game.players.describe(s)
                    ));
                }
            }
            game.tu_entries = kept;
        }
    }
    (game, warnings)
}

/// Report of the hybrid superadditivity check: the explicit grand value must
/// cover the best welfare achievable by partitioning the grand coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridReport {
    pub welfare_max: Rational,
    pub grand_value: Rational,
    pub ok: bool,
}

/// Check that a hybrid game's explicit grand value does not undercut what the
/// basis already guarantees (`ok = grand_value >= welfare_max`).
pub fn validate_superadditive_hybrid(game: &Game) -> Result<HybridReport, GameError> {
    game.expect_hybrid()?;
    let welfare = crate::closure::welfare_max(game, game.grand_coalition())?;
    let grand = game
        .explicit_grand_value
        .clone()
        .ok_or(GameError::MissingGrandValue)?;
    let ok = grand >= welfare;
    Ok(HybridReport {
        welfare_max: welfare,
        grand_value: grand,
        ok,
    })
}
