//! Instance generators with known ground truth, plus exact deciders for the
//! source problems.
//!
//! Exact-cover-by-3-sets instances map to NTU and TU games, node-cover
//! instances to hybrid games; in each case the source instance is solvable
//! exactly when the generated game's core is nonempty. The exact deciders
//! here give suites their expected answers.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::GameError;
use crate::game::{Coalition, Game, NtuEntry, PlayerSet, TuEntry};
use crate::rational::{rat_int, Rational};

/// Node-cover search is a k-subset enumeration; refuse larger graphs.
pub const MAX_COVER_VERTICES: usize = 20;

/// An exact-cover-by-3-sets instance: a ground set of size `3m` and a
/// collection of 3-element subsets. Asked: do `m` disjoint triples cover it?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3CInstance {
    m: usize,
    triples: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(m: usize, triples: Vec<[usize; 3]>) -> Result<Self, GameError> {
        if m == 0 {
            return Err(GameError::InvalidInstance("x3c requires m >= 1".into()));
        }
        let ground = 3 * m;
        for t in &triples {
            if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
                return Err(GameError::InvalidInstance(format!(
                    "triple {t:?} has repeated elements"
                )));
            }
            if t.iter().any(|&e| e >= ground) {
                return Err(GameError::InvalidInstance(format!(
                    "triple {t:?} is outside the ground set 0..{ground}"
                )));
            }
        }
        let triples = triples
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        Ok(X3CInstance { m, triples })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ground_size(&self) -> usize {
        3 * self.m
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }
}

/// A node-cover instance: a simple graph and a budget `k`. Asked: do `k`
/// vertices touch every edge? (`k = 0` is allowed; it covers an edgeless
/// graph.)
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCoverInstance {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    k: usize,
}

impl NodeCoverInstance {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, k: usize) -> Result<Self, GameError> {
        if vertices == 0 {
            return Err(GameError::InvalidInstance("graph needs at least one vertex".into()));
        }
        if k > vertices {
            return Err(GameError::InvalidInstance(format!(
                "cover size {k} exceeds vertex count {vertices}"
            )));
        }
        let mut seen = Vec::with_capacity(edges.len());
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        for &(a, b) in &edges {
            if a == b {
                return Err(GameError::InvalidInstance(format!("self-loop at vertex {a}")));
            }
            if b >= vertices {
                return Err(GameError::InvalidInstance(format!(
                    "edge ({a},{b}) is outside 0..{vertices}"
                )));
            }
            if seen.contains(&(a, b)) {
                return Err(GameError::InvalidInstance(format!("duplicate edge ({a},{b})")));
            }
            seen.push((a, b));
        }
        edges.sort_unstable();
        Ok(NodeCoverInstance { vertices, edges, k })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Either kind of reduction input, as read from an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionInstance {
    X3c(X3CInstance),
    NodeCover(NodeCoverInstance),
}

fn vec2(v: &Rational) -> Vec<Rational> {
    vec![v.clone(), v.clone()]
}

/// Build the NTU gadget: triple entries `(2,2,2)`, `{s,w}` entries `(1,4)`,
/// the `{w,x,y,z}` entry `(3,3,3,3)`, the three-cycle of pair entries over
/// `{x,y,z}`, and singleton zeros. Its core is nonempty exactly when the
/// instance has an exact cover.
pub fn x3c_to_ntu(inst: &X3CInstance) -> Result<Game, GameError> {
    let ground = inst.ground_size();
    let mut names: Vec<String> = (0..ground).map(|i| format!("s{i}")).collect();
    names.extend(["w", "x", "y", "z"].map(String::from));
    let players = PlayerSet::new(names)?;
    let (w, x, y, z) = (ground, ground + 1, ground + 2, ground + 3);

    let two = rat_int(2);
    let one = rat_int(1);
    let mut entries = Vec::new();
    for t in inst.triples() {
        entries.push(NtuEntry::new(
            Coalition::from_indices(t.iter().copied()),
            vec![two.clone(), two.clone(), two.clone()],
        )?);
    }
    for s in 0..ground {
        entries.push(NtuEntry::new(
            Coalition::from_indices([s, w]),
            vec![one.clone(), rat_int(4)],
        )?);
    }
    entries.push(NtuEntry::new(
        Coalition::from_indices([w, x, y, z]),
        vec![rat_int(3), rat_int(3), rat_int(3), rat_int(3)],
    )?);
    entries.push(NtuEntry::new(Coalition::from_indices([x, y]), vec![rat_int(2), rat_int(1)])?);
    entries.push(NtuEntry::new(Coalition::from_indices([y, z]), vec![rat_int(2), rat_int(1)])?);
    entries.push(NtuEntry::new(Coalition::from_indices([x, z]), vec![rat_int(1), rat_int(2)])?);
    for i in 0..players.len() {
        entries.push(NtuEntry::new(Coalition::singleton(i), vec![rat_int(0)])?);
    }
    Ok(Game::new_ntu(players, entries)?.0)
}

/// Build the TU gadget: value 3 per triple, value `6m` for `S∪{x}`, `S∪{y}`
/// and `{x,y}`, singleton zeros.
pub fn x3c_to_tu(inst: &X3CInstance) -> Result<Game, GameError> {
    let ground = inst.ground_size();
    let mut names: Vec<String> = (0..ground).map(|i| format!("s{i}")).collect();
    names.extend(["x", "y"].map(String::from));
    let players = PlayerSet::new(names)?;
    let (x, y) = (ground, ground + 1);
    let six_m = rat_int(6 * inst.m() as i64);

    let mut entries = Vec::new();
    for t in inst.triples() {
        entries.push(TuEntry::new(
            Coalition::from_indices(t.iter().copied()),
            rat_int(3),
        )?);
    }
    let s_all = Coalition::from_indices(0..ground);
    entries.push(TuEntry::new(s_all.with(x), six_m.clone())?);
    entries.push(TuEntry::new(s_all.with(y), six_m.clone())?);
    entries.push(TuEntry::new(Coalition::from_indices([x, y]), six_m)?);
    for i in 0..players.len() {
        entries.push(TuEntry::new(Coalition::singleton(i), rat_int(0))?);
    }
    Ok(Game::new_tu(players, entries, None)?.0)
}

/// Build the hybrid gadget: `(1,1)` per edge, `(3|V|,2|V|)` for every ordered
/// pair over `{x,y,z}` (six entries), singleton zeros, and the explicit grand
/// value `6|V| + k`.
pub fn nodecover_to_hybrid(inst: &NodeCoverInstance) -> Result<Game, GameError> {
    let nv = inst.vertices();
    let mut names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    names.extend(["x", "y", "z"].map(String::from));
    let players = PlayerSet::new(names)?;
    let specials = [nv, nv + 1, nv + 2];
    let big = rat_int(3 * nv as i64);
    let small = rat_int(2 * nv as i64);

    let mut entries = Vec::new();
    let one = rat_int(1);
    for &(a, b) in inst.edges() {
        entries.push(NtuEntry::new(Coalition::from_indices([a, b]), vec2(&one))?);
    }
    for &a in &specials {
        for &b in &specials {
            if a == b {
                continue;
            }
            // Vector in ascending member order: `a` receives 3|V|, `b` 2|V|.
            let vector = if a < b {
                vec![big.clone(), small.clone()]
            } else {
                vec![small.clone(), big.clone()]
            };
            entries.push(NtuEntry::new(Coalition::from_indices([a, b]), vector)?);
        }
    }
    for i in 0..players.len() {
        entries.push(NtuEntry::new(Coalition::singleton(i), vec![rat_int(0)])?);
    }
    let grand_value = rat_int(6 * nv as i64 + inst.k() as i64);
    Ok(Game::new_hybrid(players, entries, grand_value)?.0)
}

/// Exact X3C decision by backtracking over triples that contain the lowest
/// uncovered element.
pub fn solve_x3c(inst: &X3CInstance) -> bool {
    let ground = inst.ground_size();
    assert!(ground <= 64, "ground sets beyond 64 elements are unsupported");
    let masks: Vec<u64> = inst
        .triples()
        .iter()
        .map(|t| t.iter().fold(0u64, |m, &e| m | (1 << e)))
        .collect();
    let full = if ground == 64 { u64::MAX } else { (1u64 << ground) - 1 };
    cover_search(&masks, 0, full)
}

fn cover_search(masks: &[u64], covered: u64, full: u64) -> bool {
    if covered == full {
        return true;
    }
    let lowest = 1u64 << (!covered & full).trailing_zeros();
    masks
        .iter()
        .any(|&m| m & lowest != 0 && m & covered == 0 && cover_search(masks, covered | m, full))
}

/// Exact node-cover decision by enumerating all k-subsets of the vertices.
pub fn solve_nodecover(inst: &NodeCoverInstance) -> Result<bool, GameError> {
    if inst.vertices() > MAX_COVER_VERTICES {
        return Err(GameError::ResourceCap(format!(
            "node-cover search supports at most {MAX_COVER_VERTICES} vertices, got {}",
            inst.vertices()
        )));
    }
    let edge_masks: Vec<u32> = inst
        .edges()
        .iter()
        .map(|&(a, b)| (1u32 << a) | (1u32 << b))
        .collect();
    let n = inst.vertices();
    let k = inst.k();
    let mut chosen = 0u32;
    Ok(choose_cover(&edge_masks, n, k, 0, &mut chosen))
}

fn choose_cover(edge_masks: &[u32], n: usize, remaining: usize, from: usize, chosen: &mut u32) -> bool {
    if edge_masks.iter().all(|&e| e & *chosen != 0) {
        return true;
    }
    if remaining == 0 || from >= n {
        return false;
    }
    for v in from..=(n - remaining) {
        *chosen |= 1 << v;
        if choose_cover(edge_masks, n, remaining - 1, v + 1, chosen) {
            return true;
        }
        *chosen &= !(1 << v);
    }
    false
}

/// Seeded random X3C instance: up to `max_triples` triples sampled uniformly
/// from the 3-subsets of the ground set.
pub fn random_x3c(seed: u64, m: usize, max_triples: usize) -> Result<X3CInstance, GameError> {
    if m == 0 {
        return Err(GameError::InvalidInstance("x3c requires m >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(0..=max_triples);
    let ground = 3 * m;
    let triples = (0..count)
        .map(|_| {
            let picked = sample(&mut rng, ground, 3);
            let mut t = [picked.index(0), picked.index(1), picked.index(2)];
            t.sort_unstable();
            t
        })
        .collect();
    X3CInstance::new(m, triples)
}

/// Seeded random node-cover instance: each edge present with probability 1/2,
/// `k` sampled uniformly from `0..=vertices` when not fixed.
pub fn random_nodecover(
    seed: u64,
    vertices: usize,
    k: Option<usize>,
) -> Result<NodeCoverInstance, GameError> {
    if vertices == 0 {
        return Err(GameError::InvalidInstance("graph needs at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..vertices {
        for b in (a + 1)..vertices {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    let k = match k {
        Some(k) => k,
        None => rng.gen_range(0..=vertices),
    };
    NodeCoverInstance::new(vertices, edges, k)
}

/// Parse an instance file:
/// `{"kind":"x3c","m":2,"triples":[[0,1,2],[3,4,5]]}` or
/// `{"kind":"nodecover","vertices":3,"edges":[[0,1]],"k":1}`.
pub fn parse_instance(text: &str) -> Result<ReductionInstance, GameError> {
    let value: Value = serde_json::from_str(text).map_err(|e| GameError::Syntax(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| GameError::Syntax("top level: expected an object".into()))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| GameError::Syntax("missing field \"kind\"".into()))?;
    match kind {
        "x3c" => {
            let m = get_usize(obj, "m")?;
            let raw = obj
                .get("triples")
                .and_then(Value::as_array)
                .ok_or_else(|| GameError::Syntax("missing array field \"triples\"".into()))?;
            let mut triples = Vec::with_capacity(raw.len());
            for t in raw {
                let items = t
                    .as_array()
                    .filter(|a| a.len() == 3)
                    .ok_or_else(|| GameError::Syntax("triples: expected arrays of 3 indices".into()))?;
                let mut triple = [0usize; 3];
                for (slot, item) in triple.iter_mut().zip(items) {
                    *slot = item
                        .as_u64()
                        .ok_or_else(|| GameError::Syntax("triples: expected integer indices".into()))?
                        as usize;
                }
                triples.push(triple);
            }
            Ok(ReductionInstance::X3c(X3CInstance::new(m, triples)?))
        }
        "nodecover" => {
            let vertices = get_usize(obj, "vertices")?;
            let k = get_usize(obj, "k")?;
            let raw = obj
                .get("edges")
                .and_then(Value::as_array)
                .ok_or_else(|| GameError::Syntax("missing array field \"edges\"".into()))?;
            let mut edges = Vec::with_capacity(raw.len());
            for e in raw {
                let pair = e
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| GameError::Syntax("edges: expected arrays of 2 indices".into()))?;
                let a = pair[0]
                    .as_u64()
                    .ok_or_else(|| GameError::Syntax("edges: expected integer indices".into()))?;
                let b = pair[1]
                    .as_u64()
                    .ok_or_else(|| GameError::Syntax("edges: expected integer indices".into()))?;
                edges.push((a as usize, b as usize));
            }
            Ok(ReductionInstance::NodeCover(NodeCoverInstance::new(vertices, edges, k)?))
        }
        other => Err(GameError::Syntax(format!(
            "kind: expected \"x3c\" or \"nodecover\", got {other:?}"
        ))),
    }
}

/// Serialize an instance in the format accepted by [`parse_instance`].
pub fn serialize_instance(inst: &ReductionInstance) -> String {
    let mut root = Map::new();
    match inst {
        ReductionInstance::X3c(inst) => {
            root.insert("kind".into(), json!("x3c"));
            root.insert("m".into(), json!(inst.m()));
            root.insert(
                "triples".into(),
                Value::Array(inst.triples().iter().map(|t| json!([t[0], t[1], t[2]])).collect()),
            );
        }
        ReductionInstance::NodeCover(inst) => {
            root.insert("kind".into(), json!("nodecover"));
            root.insert("vertices".into(), json!(inst.vertices()));
            root.insert(
                "edges".into(),
                Value::Array(inst.edges().iter().map(|&(a, b)| json!([a, b])).collect()),
            );
            root.insert("k".into(), json!(inst.k()));
        }
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(root)).expect("serializing an instance cannot fail");
    out.push('\n');
    out
}

fn get_usize(obj: &Map<String, Value>, key: &str) -> Result<usize, GameError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| GameError::Syntax(format!("missing integer field {key:?}")))
}
