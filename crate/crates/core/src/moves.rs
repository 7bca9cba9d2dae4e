//! Diagram rewrites on Gauss codes and a replayable move log.
//!
//! An [`ArcRef`] names the gap after entry `position` of a component (the
//! gap after the last entry wraps around to the first). New crossings take
//! the labels `max + 1`, `max + 2`, ...

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gausscode::{canonicalize, parse, supporting_genus, GaussCode, Passage, Pos, Sign, Strand};
use crate::ribbon::RibbonGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcRef {
    pub component: usize,
    pub position: usize,
}

impl ArcRef {
    pub fn new(component: usize, position: usize) -> Self {
        ArcRef { component, position }
    }
}

impl std::fmt::Display for ArcRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.component, self.position)
    }
}

impl std::str::FromStr for ArcRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::StaleReference(format!("malformed arc reference {s:?}"));
        let (c, p) = s.split_once(':').ok_or_else(bad)?;
        Ok(ArcRef {
            component: c.trim().parse().map_err(|_| bad())?,
            position: p.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Order of the two new crossings along the under strand of an R2 move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum R2Order {
    /// Both strands meet the crossings in the same order.
    Parallel,
    /// The under strand meets them in the opposite order.
    Antiparallel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MoveDescriptor {
    R1Add {
        arc: ArcRef,
        sign: Sign,
        over_first: bool,
    },
    R1Remove {
        label: u32,
    },
    /// Pushes a piece of the `over` arc across the `under` arc. Unset choices
    /// are resolved by [`resolve_r2`]; logs always store resolved moves.
    R2Add {
        over: ArcRef,
        under: ArcRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sign: Option<Sign>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<R2Order>,
    },
    R2Remove {
        labels: [u32; 2],
    },
    R3 {
        labels: [u32; 3],
    },
    Virtualize {
        label: u32,
    },
    Compose {
        other: String,
        arc: ArcRef,
        other_arc: ArcRef,
    },
    DTwist {
        arc: ArcRef,
        n: u32,
    },
}

impl MoveDescriptor {
    pub fn kind(&self) -> &'static str {
        match self {
            MoveDescriptor::R1Add { .. } => "R1Add",
            MoveDescriptor::R1Remove { .. } => "R1Remove",
            MoveDescriptor::R2Add { .. } => "R2Add",
            MoveDescriptor::R2Remove { .. } => "R2Remove",
            MoveDescriptor::R3 { .. } => "R3",
            MoveDescriptor::Virtualize { .. } => "Virtualize",
            MoveDescriptor::Compose { .. } => "Compose",
            MoveDescriptor::DTwist { .. } => "DTwist",
        }
    }
}

/// SHA-256 of the rendered code, hex encoded.
pub fn code_hash(code: &GaussCode) -> String {
    let digest = Sha256::digest(code.render().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    #[serde(rename = "move")]
    pub descriptor: MoveDescriptor,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveLog {
    pub entries: Vec<LogEntry>,
}

impl MoveLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Applies `m` (resolving open R2 choices first) and records it.
    pub fn apply(&mut self, code: &GaussCode, m: MoveDescriptor) -> Result<GaussCode> {
        let m = match m {
            MoveDescriptor::R2Add { over, under, sign, order } => resolve_r2(code, over, under, sign, order)?,
            other => other,
        };
        let out = apply_move(code, &m)?;
        self.entries.push(LogEntry {
            descriptor: m,
            before: code_hash(code),
            after: code_hash(&out),
        });
        Ok(out)
    }

    /// Replays the log from `initial`, checking every recorded hash.
    pub fn replay(&self, initial: &GaussCode) -> Result<GaussCode> {
        let mut code = initial.clone();
        for (i, e) in self.entries.iter().enumerate() {
            if code_hash(&code) != e.before {
                return Err(Error::StaleReference(format!("hash mismatch before step {i}")));
            }
            code = apply_move(&code, &e.descriptor)?;
            if code_hash(&code) != e.after {
                return Err(Error::StaleReference(format!("hash mismatch after step {i}")));
            }
        }
        Ok(code)
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("log entries serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(text: &str) -> std::result::Result<Self, serde_json::Error> {
        let entries = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<std::result::Result<_, _>>()?;
        Ok(MoveLog { entries })
    }
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::MovePreconditionFailed(msg.into())
}

fn check_arc(code: &GaussCode, arc: ArcRef) -> Result<()> {
    let comp = code
        .components()
        .get(arc.component)
        .ok_or_else(|| Error::StaleReference(format!("no component {}", arc.component)))?;
    if arc.position < comp.len().max(1) {
        Ok(())
    } else {
        Err(Error::StaleReference(format!("no arc {arc}")))
    }
}

fn check_label(code: &GaussCode, label: u32) -> Result<[Pos; 2]> {
    code.occurrences()
        .get(&label)
        .copied()
        .ok_or_else(|| Error::StaleReference(format!("no crossing {label}")))
}

/// Inserts each piece after the entry its arc names. Pieces sharing an arc
/// keep their relative order.
fn insert_pieces(code: &GaussCode, pieces: Vec<(ArcRef, Vec<Passage>)>) -> Result<GaussCode> {
    GaussCode::new(insert_raw(code, pieces)?)
}

fn insert_raw(code: &GaussCode, pieces: Vec<(ArcRef, Vec<Passage>)>) -> Result<Vec<Vec<Passage>>> {
    let mut at: BTreeMap<(usize, usize), Vec<Passage>> = BTreeMap::new();
    for (arc, piece) in pieces {
        check_arc(code, arc)?;
        at.entry((arc.component, arc.position)).or_default().extend(piece);
    }
    let comps = code
        .components()
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            let mut out = Vec::with_capacity(comp.len() + 4);
            if comp.is_empty() {
                if let Some(p) = at.get(&(ci, 0)) {
                    out.extend_from_slice(p);
                }
            }
            for (i, p) in comp.iter().enumerate() {
                out.push(*p);
                if let Some(extra) = at.get(&(ci, i)) {
                    out.extend_from_slice(extra);
                }
            }
            out
        })
        .collect();
    Ok(comps)
}

fn remove_labels(code: &GaussCode, labels: &[u32]) -> Result<GaussCode> {
    let comps = code
        .components()
        .iter()
        .map(|c| c.iter().filter(|p| !labels.contains(&p.label)).copied().collect())
        .collect();
    GaussCode::new(comps)
}

fn cyclically_adjacent(code: &GaussCode, a: Pos, b: Pos) -> bool {
    if a.component != b.component {
        return false;
    }
    let n = code.components()[a.component].len();
    (a.index + 1) % n == b.index || (b.index + 1) % n == a.index
}

/// Letters swapped and sign flipped at one crossing: the same flat diagram
/// with the other strand on top. Not a move; it changes the link.
pub fn crossing_change(code: &GaussCode, label: u32) -> Result<GaussCode> {
    check_label(code, label).map_err(|_| Error::UnknownLabel(label))?;
    let comps = code
        .components()
        .iter()
        .map(|c| {
            c.iter()
                .map(|p| {
                    if p.label == label {
                        Passage::new(label, p.strand.flipped(), p.sign.flipped())
                    } else {
                        *p
                    }
                })
                .collect()
        })
        .collect();
    GaussCode::new(comps)
}

/// Replaces a classical crossing by a virtual one: the sign flips and the
/// letters stay, which reverses the cyclic order at the crossing.
pub fn virtualize(code: &GaussCode, label: u32) -> Result<GaussCode> {
    check_label(code, label).map_err(|_| Error::UnknownLabel(label))?;
    let comps = code
        .components()
        .iter()
        .map(|c| {
            c.iter()
                .map(|p| if p.label == label { Passage { sign: p.sign.flipped(), ..*p } } else { *p })
                .collect()
        })
        .collect();
    GaussCode::new(comps)
}

/// Connected sum: the component of `b` named by `arc_b` is cut open at that
/// arc and spliced into `a` at `arc_a`. Labels of `b` are shifted past those
/// of `a`; the other components of `b` are appended.
pub fn compose(a: &GaussCode, b: &GaussCode, arc_a: ArcRef, arc_b: ArcRef) -> Result<GaussCode> {
    check_arc(a, arc_a)?;
    check_arc(b, arc_b)?;
    let shift = a.max_label();
    let shifted: Vec<Vec<Passage>> = b
        .components()
        .iter()
        .map(|c| c.iter().map(|p| Passage { label: p.label + shift, ..*p }).collect())
        .collect();
    let cut = &shifted[arc_b.component];
    let run: Vec<Passage> = if cut.is_empty() {
        Vec::new()
    } else {
        let s = arc_b.position + 1;
        cut[s..].iter().chain(&cut[..s]).copied().collect()
    };
    let mut comps = insert_raw(a, vec![(arc_a, run)])?;
    comps.extend(
        shifted
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != arc_b.component)
            .map(|(_, c)| c),
    );
    GaussCode::new(comps)
}

fn r2_pieces(code: &GaussCode, sign: Sign, order: R2Order) -> (Vec<Passage>, Vec<Passage>) {
    let a = code.max_label() + 1;
    let b = a + 1;
    let pa = |s| Passage::new(a, s, sign);
    let pb = |s| Passage::new(b, s, sign.flipped());
    let over = vec![pa(Strand::Over), pb(Strand::Over)];
    let under = match order {
        R2Order::Parallel => vec![pa(Strand::Under), pb(Strand::Under)],
        R2Order::Antiparallel => vec![pb(Strand::Under), pa(Strand::Under)],
    };
    (over, under)
}

/// Fills in the open choices of an R2 move. Among the admissible variants,
/// the one with the least supporting genus wins, then the one with the least
/// canonical rendering.
pub fn resolve_r2(
    code: &GaussCode,
    over: ArcRef,
    under: ArcRef,
    sign: Option<Sign>,
    order: Option<R2Order>,
) -> Result<MoveDescriptor> {
    check_arc(code, over)?;
    check_arc(code, under)?;
    let signs = sign.map_or(vec![Sign::Plus, Sign::Minus], |s| vec![s]);
    let orders = order.map_or(vec![R2Order::Parallel, R2Order::Antiparallel], |o| vec![o]);
    let mut best: Option<((u32, String), MoveDescriptor)> = None;
    for &s in &signs {
        for &o in &orders {
            let m = MoveDescriptor::R2Add { over, under, sign: Some(s), order: Some(o) };
            let out = apply_move(code, &m)?;
            let genus = supporting_genus(&out).unwrap_or(0);
            let key = (genus, canonicalize(&out).render());
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, m));
            }
        }
    }
    Ok(best.expect("at least one variant").1)
}

/// Applies a fully specified move. Open R2 choices default to `+` and
/// parallel; use [`resolve_r2`] or [`MoveLog::apply`] to choose them.
pub fn apply_move(code: &GaussCode, m: &MoveDescriptor) -> Result<GaussCode> {
    match m {
        MoveDescriptor::R1Add { arc, sign, over_first } => {
            let l = code.max_label() + 1;
            let (x, y) = if *over_first { (Strand::Over, Strand::Under) } else { (Strand::Under, Strand::Over) };
            insert_pieces(code, vec![(*arc, vec![Passage::new(l, x, *sign), Passage::new(l, y, *sign)])])
        }
        MoveDescriptor::R1Remove { label } => {
            let [a, b] = check_label(code, *label)?;
            if !cyclically_adjacent(code, a, b) {
                return Err(precondition(format!("crossing {label} is not a monogon")));
            }
            remove_labels(code, &[*label])
        }
        MoveDescriptor::R2Add { over, under, sign, order } => {
            let (o, u) = r2_pieces(code, sign.unwrap_or(Sign::Plus), order.unwrap_or(R2Order::Parallel));
            insert_pieces(code, vec![(*over, o), (*under, u)])
        }
        MoveDescriptor::R2Remove { labels: [a, b] } => {
            r2_remove_check(code, *a, *b)?;
            remove_labels(code, &[*a, *b])
        }
        MoveDescriptor::R3 { labels } => r3(code, *labels),
        MoveDescriptor::Virtualize { label } => virtualize(code, *label).map_err(|e| match e {
            Error::UnknownLabel(l) => Error::StaleReference(format!("no crossing {l}")),
            e => e,
        }),
        MoveDescriptor::Compose { other, arc, other_arc } => {
            let b = parse(other)?;
            compose(code, &b, *arc, *other_arc)
        }
        MoveDescriptor::DTwist { arc, n } => d_sequence(code, *arc, *n),
    }
}

fn r2_remove_check(code: &GaussCode, a: u32, b: u32) -> Result<()> {
    if a == b {
        return Err(precondition("R2 needs two distinct crossings"));
    }
    let pa = check_label(code, a)?;
    let pb = check_label(code, b)?;
    let sa = code.sign_of(a).expect("present");
    let sb = code.sign_of(b).expect("present");
    if sa == sb {
        return Err(precondition(format!("crossings {a} and {b} have equal signs")));
    }
    // The occurrences must split into two adjacent pairs, one OO and one UU.
    for (x, y) in [((pa[0], pb[0]), (pa[1], pb[1])), ((pa[0], pb[1]), (pa[1], pb[0]))] {
        if !cyclically_adjacent(code, x.0, x.1) || !cyclically_adjacent(code, y.0, y.1) {
            continue;
        }
        let st = |p: Pos| code.passage(p).expect("in range").strand;
        if st(x.0) == st(x.1) && st(y.0) == st(y.1) && st(x.0) != st(y.0) {
            return Ok(());
        }
    }
    Err(precondition(format!(
        "crossings {a} and {b} do not form an adjacent OO/UU pair"
    )))
}

/// Flat edge id of the band leaving entry `pos`.
fn edge_id(code: &GaussCode, pos: Pos) -> usize {
    code.components()[..pos.component].iter().map(Vec::len).sum::<usize>() + pos.index
}

fn r3(code: &GaussCode, labels: [u32; 3]) -> Result<GaussCode> {
    let [a, b, c] = labels;
    if a == b || b == c || a == c {
        return Err(precondition("R3 needs three distinct crossings"));
    }
    if code.is_generalized() {
        return Err(precondition("R3 needs an ordinary code"));
    }
    let occ = [check_label(code, a)?, check_label(code, b)?, check_label(code, c)?];
    // Try each way of choosing one occurrence per label pair.
    for choice in 0..8u8 {
        let pick = |l: usize, pair_slot: u8| occ[l][usize::from((choice >> l & 1) ^ pair_slot)];
        // Pairs {a,b}, {b,c}, {c,a}: label l uses occurrence bit for its first pair, the other for its second.
        let pairs = [(pick(0, 0), pick(1, 1)), (pick(1, 0), pick(2, 1)), (pick(2, 0), pick(0, 1))];
        if !pairs.iter().all(|&(x, y)| cyclically_adjacent(code, x, y)) {
            continue;
        }
        let st = |p: Pos| code.passage(p).expect("in range").strand;
        let mut kinds: Vec<u8> = pairs
            .iter()
            .map(|&(x, y)| u8::from(st(x) == Strand::Under) + u8::from(st(y) == Strand::Under))
            .collect();
        kinds.sort_unstable();
        if kinds != [0, 1, 2] {
            continue;
        }
        let first = |(x, y): (Pos, Pos)| {
            let n = code.components()[x.component].len();
            if (x.index + 1) % n == y.index { x } else { y }
        };
        let mut tri: Vec<usize> = pairs.iter().map(|&p| edge_id(code, first(p))).collect();
        tri.sort_unstable();
        let flat = RibbonGraph::flat(code)?;
        let is_face = flat.trace_boundaries().iter().any(|w| {
            let mut e: Vec<usize> = w.iter().map(|s| s.edge).collect();
            e.sort_unstable();
            e == tri
        });
        if !is_face {
            continue;
        }
        let mut comps: Vec<Vec<Passage>> = code.components().to_vec();
        for p in pairs {
            let (x, y) = (first(p), if first(p) == p.0 { p.1 } else { p.0 });
            let (px, py) = (comps[x.component][x.index], comps[y.component][y.index]);
            comps[x.component][x.index] = py;
            comps[y.component][y.index] = px;
        }
        return GaussCode::new(comps);
    }
    Err(precondition(format!(
        "crossings {a}, {b}, {c} do not bound a triangle with over, middle and under strands"
    )))
}

/// Twist family on one arc: `n` positive kinks, then the arc is pushed
/// across itself around the kinks by an R2 move. Adds `n + 2` crossings and
/// `n` A-state circles, keeps the B-state, and raises twice the Turaev genus
/// by two. The R2 step is virtual, so the result is a virtual diagram of the
/// same link. Its Turaev surface is always nonorientable: the two R2
/// crossings each have their over and under passages an even distance apart.
pub fn d_sequence(code: &GaussCode, arc: ArcRef, n: u32) -> Result<GaussCode> {
    check_arc(code, arc)?;
    let a = code.max_label() + 1;
    let b = a + 1;
    let mut piece = vec![Passage::new(a, Strand::Over, Sign::Plus), Passage::new(b, Strand::Over, Sign::Minus)];
    for k in 0..n {
        let l = b + 1 + k;
        piece.push(Passage::new(l, Strand::Over, Sign::Plus));
        piece.push(Passage::new(l, Strand::Under, Sign::Plus));
    }
    piece.push(Passage::new(a, Strand::Under, Sign::Plus));
    piece.push(Passage::new(b, Strand::Under, Sign::Minus));
    insert_pieces(code, vec![(arc, piece)])
}
