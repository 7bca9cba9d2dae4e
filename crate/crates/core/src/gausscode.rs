//! Signed (and generalized) Gauss codes.
//!
//! A code is an ordered list of components; each component is a cyclic list
//! of [`Passage`]s. Every crossing label occurs exactly twice across the whole
//! code, with a single sign. In an ordinary code the two occurrences carry one
//! `O` and one `U`; a *generalized* code relaxes that pairing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ribbon::RibbonGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strand {
    Over,
    Under,
}

impl Strand {
    pub fn flipped(self) -> Strand {
        match self {
            Strand::Over => Strand::Under,
            Strand::Under => Strand::Over,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Strand::Over => 'O',
            Strand::Under => 'U',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// One pass of a strand through a classical crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Passage {
    pub label: u32,
    pub strand: Strand,
    pub sign: Sign,
}

impl Passage {
    pub fn new(label: u32, strand: Strand, sign: Sign) -> Self {
        Passage { label, strand, sign }
    }

    /// Ordering key used by canonicalization: strand, then sign, then label.
    fn key(&self) -> (Strand, Sign, u32) {
        (self.strand, self.sign, self.label)
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.strand.letter(), self.label, self.sign.symbol())
    }
}

/// Location of a passage: component index and index within the component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pos {
    pub component: usize,
    pub index: usize,
}

impl Pos {
    pub fn new(component: usize, index: usize) -> Self {
        Pos { component, index }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// A label occurs a number of times other than two.
    Pairing,
    /// The two occurrences of a label carry different signs.
    SignMismatch,
    /// Label zero is reserved for the crossingless component token.
    ZeroLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub label: Option<u32>,
    pub position: Option<Pos>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<&str> = self.violations.iter().map(|v| v.message.as_str()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

/// Checks the pairing and sign invariants over raw components.
pub fn validate(components: &[Vec<Passage>]) -> ValidationReport {
    let mut seen: BTreeMap<u32, Vec<(Pos, Passage)>> = BTreeMap::new();
    let mut violations = Vec::new();
    for (ci, comp) in components.iter().enumerate() {
        for (i, p) in comp.iter().enumerate() {
            if p.label == 0 {
                violations.push(Violation {
                    rule: Rule::ZeroLabel,
                    label: Some(0),
                    position: Some(Pos::new(ci, i)),
                    message: format!("label 0 at component {ci} index {i}"),
                });
                continue;
            }
            seen.entry(p.label).or_default().push((Pos::new(ci, i), *p));
        }
    }
    for (label, occ) in &seen {
        if occ.len() != 2 {
            violations.push(Violation {
                rule: Rule::Pairing,
                label: Some(*label),
                position: occ.get(2).or(occ.first()).map(|o| o.0),
                message: format!("label {label} occurs {} times, expected 2", occ.len()),
            });
        }
        if occ.iter().any(|o| o.1.sign != occ[0].1.sign) {
            violations.push(Violation {
                rule: Rule::SignMismatch,
                label: Some(*label),
                position: occ.iter().find(|o| o.1.sign != occ[0].1.sign).map(|o| o.0),
                message: format!("label {label} carries both signs"),
            });
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// A validated signed Gauss code.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussCode {
    components: Vec<Vec<Passage>>,
    generalized: bool,
}

impl GaussCode {
    /// Validates `components`; the generalized flag is derived from the data.
    pub fn new(components: Vec<Vec<Passage>>) -> Result<Self> {
        let report = validate(&components);
        if !report.valid {
            return Err(Error::Invalid(report));
        }
        let generalized = has_unpaired_strands(&components);
        Ok(GaussCode {
            components,
            generalized,
        })
    }

    /// The code with no components.
    pub fn empty() -> Self {
        GaussCode {
            components: Vec::new(),
            generalized: false,
        }
    }

    /// A single crossingless component.
    pub fn unknot() -> Self {
        GaussCode {
            components: vec![Vec::new()],
            generalized: false,
        }
    }

    pub fn components(&self) -> &[Vec<Passage>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Vec<Passage>> {
        self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_generalized(&self) -> bool {
        self.generalized
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// No crossings and at most one component: the round unknot.
    pub fn is_trivial_knot(&self) -> bool {
        self.components.len() <= 1 && self.components.iter().all(Vec::is_empty)
    }

    pub fn crossing_count(&self) -> usize {
        self.entry_count() / 2
    }

    pub fn entry_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn passage(&self, pos: Pos) -> Option<&Passage> {
        self.components.get(pos.component)?.get(pos.index)
    }

    pub fn max_label(&self) -> u32 {
        self.passages().map(|(_, p)| p.label).max().unwrap_or(0)
    }

    /// All passages in reading order.
    pub fn passages(&self) -> impl Iterator<Item = (Pos, &Passage)> + '_ {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.iter().enumerate().map(move |(i, p)| (Pos::new(ci, i), p)))
    }

    /// Sorted crossing labels.
    pub fn labels(&self) -> Vec<u32> {
        self.occurrences().keys().copied().collect()
    }

    /// Both positions of every label, in reading order.
    pub fn occurrences(&self) -> BTreeMap<u32, [Pos; 2]> {
        let mut partial: BTreeMap<u32, Vec<Pos>> = BTreeMap::new();
        for (pos, p) in self.passages() {
            partial.entry(p.label).or_default().push(pos);
        }
        partial.into_iter().map(|(l, v)| (l, [v[0], v[1]])).collect()
    }

    /// The other occurrence of the label at `pos`.
    pub fn partner(&self, pos: Pos) -> Option<Pos> {
        let label = self.passage(pos)?.label;
        self.passages()
            .find(|(q, p)| p.label == label && *q != pos)
            .map(|(q, _)| q)
    }

    pub fn sign_of(&self, label: u32) -> Option<Sign> {
        self.passages().find(|(_, p)| p.label == label).map(|(_, p)| p.sign)
    }

    pub fn has_empty_component(&self) -> bool {
        self.components.iter().any(Vec::is_empty)
    }

    pub(crate) fn first_empty_component(&self) -> Option<usize> {
        self.components.iter().position(Vec::is_empty)
    }

    /// True when every component alternates O/U cyclically.
    pub fn is_alternating(&self) -> bool {
        self.components.iter().all(|c| {
            c.len() % 2 == 0
                && (0..c.len()).all(|i| c[i].strand != c[(i + 1) % c.len()].strand)
        })
    }

    pub fn render(&self) -> String {
        render(self)
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl std::str::FromStr for GaussCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

fn has_unpaired_strands(components: &[Vec<Passage>]) -> bool {
    let mut first: BTreeMap<u32, Strand> = BTreeMap::new();
    for p in components.iter().flatten() {
        if let Some(s) = first.insert(p.label, p.strand) {
            if s == p.strand {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Parsing and rendering

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_trivia(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' => self.pos += 1,
                b'#' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_trivia();
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &str) -> Error {
        let found = match self.src.get(self.pos) {
            None => "end of input".to_string(),
            Some(_) => {
                let rest = String::from_utf8_lossy(&self.src[self.pos..]);
                format!("{:?}", rest.chars().next().unwrap_or('?'))
            }
        };
        Error::Syntax {
            position: self.pos,
            expected: expected.to_string(),
            found,
        }
    }

    fn label(&mut self) -> Result<u32> {
        self.skip_trivia();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(b'1'..=b'9') => {}
            _ => return Err(self.error("label")),
        }
        while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse::<u32>().map_err(|_| Error::Syntax {
            position: start,
            expected: "label fitting in 32 bits".into(),
            found: digits.into(),
        })
    }

    fn sign(&mut self) -> Result<Sign> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Ok(Sign::Plus)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(Sign::Minus)
            }
            _ => Err(self.error("sign '+' or '-'")),
        }
    }
}

/// Parses the textual grammar
/// `code := component (";" component)*`, `component := "0" | entry+`,
/// `entry := ("O"|"U") label sign`.
///
/// Blank input yields the empty code.
pub fn parse(text: &str) -> Result<GaussCode> {
    let mut lx = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut components = Vec::new();
    if lx.peek().is_none() {
        return Ok(GaussCode::empty());
    }
    loop {
        let mut comp = Vec::new();
        match lx.peek() {
            Some(b'0') => {
                lx.pos += 1;
            }
            _ => loop {
                let strand = match lx.peek() {
                    Some(b'O' | b'o') => Strand::Over,
                    Some(b'U' | b'u') => Strand::Under,
                    _ if comp.is_empty() => return Err(lx.error("entry or '0'")),
                    _ => break,
                };
                lx.pos += 1;
                let label = lx.label()?;
                let sign = lx.sign()?;
                comp.push(Passage::new(label, strand, sign));
            },
        }
        components.push(comp);
        match lx.peek() {
            None => break,
            Some(b';') => lx.pos += 1,
            Some(_) => return Err(lx.error("';' or end of input")),
        }
    }
    GaussCode::new(components)
}

/// Canonical text: single spaces between entries, `"; "` between components.
pub fn render(code: &GaussCode) -> String {
    code.components
        .iter()
        .map(|c| {
            if c.is_empty() {
                "0".to_string()
            } else {
                c.iter().map(Passage::to_string).collect::<Vec<_>>().join(" ")
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

// ---------------------------------------------------------------------------
// Canonical form

type Key = Vec<(Strand, Sign, u32)>;

fn relabel_rotated(
    comp: &[Passage],
    rot: usize,
    map: &mut BTreeMap<u32, u32>,
    next: &mut u32,
) -> Vec<Passage> {
    let n = comp.len();
    (0..n)
        .map(|i| {
            let p = comp[(rot + i) % n];
            let label = *map.entry(p.label).or_insert_with(|| {
                *next += 1;
                *next
            });
            Passage { label, ..p }
        })
        .collect()
}

fn key_of(comp: &[Passage]) -> Key {
    comp.iter().map(Passage::key).collect()
}

fn canonical_search(
    comps: &[Vec<Passage>],
    remaining: &[usize],
    map: &BTreeMap<u32, u32>,
    next: u32,
) -> Vec<Vec<Passage>> {
    if remaining.is_empty() {
        return Vec::new();
    }
    let mut best_key: Option<Key> = None;
    let mut branches: Vec<(usize, Vec<Passage>, BTreeMap<u32, u32>, u32)> = Vec::new();
    for (slot, &ci) in remaining.iter().enumerate() {
        let comp = &comps[ci];
        for rot in 0..comp.len().max(1) {
            let mut m = map.clone();
            let mut nx = next;
            let seq = relabel_rotated(comp, rot, &mut m, &mut nx);
            let key = key_of(&seq);
            match &best_key {
                Some(b) if key > *b => continue,
                Some(b) if key == *b => {}
                _ => {
                    best_key = Some(key);
                    branches.clear();
                }
            }
            branches.push((slot, seq, m, nx));
        }
    }
    let mut best: Option<Vec<Vec<Passage>>> = None;
    for (slot, seq, m, nx) in branches {
        let rest: Vec<usize> = remaining
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != slot)
            .map(|(_, c)| *c)
            .collect();
        let mut candidate = vec![seq];
        candidate.extend(canonical_search(comps, &rest, &m, nx));
        let better = match &best {
            None => true,
            Some(b) => {
                let ck: Vec<Key> = candidate.iter().map(|c| key_of(c)).collect();
                let bk: Vec<Key> = b.iter().map(|c| key_of(c)).collect();
                ck < bk
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    best.unwrap_or_default()
}

/// Relabels crossings 1..c by first appearance and picks the rotation of
/// every component, and the order of components, giving the least rendering
/// under the order Over < Under, Plus < Minus, then label.
pub fn canonicalize(code: &GaussCode) -> GaussCode {
    let empties = code.components.iter().filter(|c| c.is_empty()).count();
    let nonempty: Vec<usize> = (0..code.components.len())
        .filter(|&i| !code.components[i].is_empty())
        .collect();
    let mut components = vec![Vec::new(); empties];
    components.extend(canonical_search(&code.components, &nonempty, &BTreeMap::new(), 0));
    GaussCode {
        components,
        generalized: code.generalized,
    }
}

// ---------------------------------------------------------------------------
// Structure

/// A pair-closed cyclic run inside one component, plus whole components
/// absorbed alongside it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubcodeInterval {
    pub component: usize,
    pub start: usize,
    pub length: usize,
    pub absorbed_components: BTreeSet<usize>,
}

impl SubcodeInterval {
    /// The complementary interval; together they cover the whole code.
    pub fn complement(&self, code: &GaussCode) -> SubcodeInterval {
        let len = code.components[self.component].len();
        let absorbed = (0..code.components.len())
            .filter(|&c| c != self.component && !self.absorbed_components.contains(&c))
            .collect();
        SubcodeInterval {
            component: self.component,
            start: (self.start + self.length) % len,
            length: len - self.length,
            absorbed_components: absorbed,
        }
    }

    /// Passages of the run in order, followed by absorbed components.
    pub fn passages(&self, code: &GaussCode) -> Vec<Passage> {
        let comp = &code.components[self.component];
        let mut out: Vec<Passage> = (0..self.length)
            .map(|i| comp[(self.start + i) % comp.len()])
            .collect();
        for &c in &self.absorbed_components {
            out.extend_from_slice(&code.components[c]);
        }
        out
    }

    /// The bare label word of [`SubcodeInterval::passages`].
    pub fn label_word(&self, code: &GaussCode) -> Vec<u32> {
        self.passages(code).iter().map(|p| p.label).collect()
    }

    pub fn entry_count(&self, code: &GaussCode) -> usize {
        self.length
            + self
                .absorbed_components
                .iter()
                .map(|&c| code.components[c].len())
                .sum::<usize>()
    }
}

/// Components grouped into classes linked through shared crossings.
/// Classes are sorted by their smallest member.
pub fn connectivity(code: &GaussCode) -> Vec<BTreeSet<usize>> {
    let n = code.components.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let nx = parent[y];
            parent[y] = r;
            y = nx;
        }
        r
    }
    for [a, b] in code.occurrences().values() {
        let (ra, rb) = (find(&mut parent, a.component), find(&mut parent, b.component));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut classes: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for c in 0..n {
        let r = find(&mut parent, c);
        classes.entry(r).or_default().insert(c);
    }
    let mut out: Vec<BTreeSet<usize>> = classes.into_values().collect();
    out.sort_by_key(|s| *s.iter().next().expect("nonempty class"));
    out
}

pub fn is_connected(code: &GaussCode) -> bool {
    connectivity(code).len() <= 1
}

/// True iff no label has its two occurrences cyclically adjacent in one
/// component.
pub fn is_reduced(code: &GaussCode) -> bool {
    first_monogon(code).is_none()
}

/// Smallest label forming a monogon, if any.
pub fn first_monogon(code: &GaussCode) -> Option<u32> {
    let mut found: Option<u32> = None;
    for comp in &code.components {
        let n = comp.len();
        for i in 0..n {
            if n > 1 && comp[i].label == comp[(i + 1) % n].label {
                found = Some(found.map_or(comp[i].label, |f: u32| f.min(comp[i].label)));
            }
        }
    }
    found
}

/// All nontrivial proper subcodes, sorted. The list is closed under
/// [`SubcodeInterval::complement`].
pub fn subcodes(code: &GaussCode) -> Vec<SubcodeInterval> {
    let occ = code.occurrences();
    let classes = connectivity(code);
    let mut out = Vec::new();
    for (k, comp) in code.components.iter().enumerate() {
        let len = comp.len();
        if len < 2 {
            continue;
        }
        let free: Vec<&BTreeSet<usize>> = classes.iter().filter(|c| !c.contains(&k)).collect();
        for start in 0..len {
            let mut counts: BTreeMap<u32, u8> = BTreeMap::new();
            for length in 1..len {
                let p = comp[(start + length - 1) % len];
                *counts.entry(p.label).or_default() += 1;
                if let Some(absorbed) = absorb_closure(code, &occ, k, start, length, &counts) {
                    for mask in 0u64..(1u64 << free.len()) {
                        let mut a = absorbed.clone();
                        for (bit, class) in free.iter().enumerate() {
                            if mask >> bit & 1 == 1 {
                                a.extend(class.iter().copied());
                            }
                        }
                        out.push(SubcodeInterval {
                            component: k,
                            start,
                            length,
                            absorbed_components: a,
                        });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Minimal set of other components that must be absorbed for the run to be
/// pair-closed, or `None` when some partner lies in the run's own component
/// outside the run.
fn absorb_closure(
    code: &GaussCode,
    occ: &BTreeMap<u32, [Pos; 2]>,
    k: usize,
    start: usize,
    length: usize,
    counts: &BTreeMap<u32, u8>,
) -> Option<BTreeSet<usize>> {
    let len = code.components[k].len();
    let in_run = |i: usize| (i + len - start) % len < length;
    let mut absorbed = BTreeSet::new();
    let mut queue = Vec::new();
    for (&label, &n) in counts {
        if n == 2 {
            continue;
        }
        let [a, b] = occ[&label];
        let other = if a.component == k && in_run(a.index) { b } else { a };
        if other.component == k {
            return None;
        }
        if absorbed.insert(other.component) {
            queue.push(other.component);
        }
    }
    while let Some(c) = queue.pop() {
        for p in &code.components[c] {
            for q in occ[&p.label] {
                if q.component == k {
                    if !in_run(q.index) {
                        return None;
                    }
                } else if q.component != c && absorbed.insert(q.component) {
                    queue.push(q.component);
                }
            }
        }
    }
    Some(absorbed)
}

// ---------------------------------------------------------------------------
// Realizability

/// Genus of the closed orientable surface carrying the diagram cellularly,
/// computed from the untwisted rotation system. Genus zero means the code is
/// the Gauss code of a classical planar diagram.
pub fn carrier_genus(code: &GaussCode) -> Result<(u32, bool)> {
    if code.generalized {
        return Err(Error::GeneralizedCodeUnsupported);
    }
    if code.is_trivial_knot() {
        return Ok((0, true));
    }
    if let Some(c) = code.first_empty_component() {
        return Err(Error::EmptyComponent(c));
    }
    if !is_connected(code) {
        return Err(Error::NotConnected);
    }
    let genus = flat_genus(code)?;
    Ok((genus, genus == 0))
}

/// Carrier genus summed over connectivity classes; crossingless components
/// contribute nothing. Defined for every ordinary (non-generalized) code.
pub fn supporting_genus(code: &GaussCode) -> Result<u32> {
    if code.generalized {
        return Err(Error::GeneralizedCodeUnsupported);
    }
    let mut total = 0;
    for class in connectivity(code) {
        if class.iter().all(|&c| code.components[c].is_empty()) {
            continue;
        }
        let sub = GaussCode {
            components: class.iter().map(|&c| code.components[c].clone()).collect(),
            generalized: false,
        };
        total += flat_genus(&sub)?;
    }
    Ok(total)
}

fn flat_genus(code: &GaussCode) -> Result<u32> {
    let rg = RibbonGraph::flat(code)?;
    let v = rg.vertex_count() as i64;
    let e = rg.edges().len() as i64;
    let f = rg.face_count() as i64;
    let chi = v - e + f;
    debug_assert!(chi <= 2 && (2 - chi) % 2 == 0, "flat ribbon must be orientable");
    Ok(((2 - chi) / 2) as u32)
}

pub fn is_realizable(code: &GaussCode) -> bool {
    matches!(supporting_genus(code), Ok(0))
}
