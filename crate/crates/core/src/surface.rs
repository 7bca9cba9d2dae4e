//! Turaev surfaces: Turaev codes, orientability, genus and state circles.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gausscode::{is_connected, GaussCode, Passage, Sign, Strand};
use crate::ribbon::{BoundaryWalk, RibbonGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub boundary_count: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    /// Twice the genus; for nonorientable surfaces this is the crosscap number.
    pub twice_genus: u32,
}

impl SurfaceReport {
    pub fn sphere() -> Self {
        SurfaceReport {
            boundary_count: 2,
            euler_characteristic: 2,
            orientable: true,
            twice_genus: 0,
        }
    }

    pub fn genus(&self) -> Genus {
        Genus::from_twice(self.twice_genus)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateCount {
    pub a_circles: usize,
    pub b_circles: usize,
}

/// A nonnegative multiple of one half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Genus {
    pub twice: u32,
}

impl Genus {
    pub fn from_twice(twice: u32) -> Self {
        Genus { twice }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub fn is_half_integer(self) -> bool {
        self.twice % 2 == 1
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

fn require_nonempty_components(code: &GaussCode) -> Result<()> {
    match code.components().iter().position(Vec::is_empty) {
        Some(c) => Err(Error::EmptyComponent(c)),
        None => Ok(()),
    }
}

/// Letters rewritten so every component alternates, starting with Over.
/// Labels and signs are kept; the result is generalized when some label ends
/// up with two equal letters.
pub fn turaev_code(code: &GaussCode) -> Result<GaussCode> {
    require_nonempty_components(code)?;
    let comps = code
        .components()
        .iter()
        .map(|c| {
            c.iter()
                .enumerate()
                .map(|(i, p)| Passage {
                    strand: if i % 2 == 0 { Strand::Over } else { Strand::Under },
                    ..*p
                })
                .collect()
        })
        .collect();
    GaussCode::new(comps)
}

/// True when some label of a code carries the same letter twice.
pub fn has_unpaired_label(code: &GaussCode) -> bool {
    code.occurrences().values().any(|[a, b]| {
        code.passage(*a).map(|p| p.strand) == code.passage(*b).map(|p| p.strand)
    })
}

/// Orientability read off the code by entry-count parity.
///
/// Every component must have even length. Within a component, the two
/// occurrences of a label must be separated by an even number of entries.
/// Labels shared by two components constrain the relative parity of their
/// starting letters, and these constraints must be consistent.
pub fn parity_orientable(code: &GaussCode) -> Result<bool> {
    require_nonempty_components(code)?;
    if code.components().iter().any(|c| c.len() % 2 == 1) {
        return Ok(false);
    }
    let n = code.component_count();
    // Union-find with parity to the root.
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![false; n];
    fn find(parent: &mut [usize], parity: &mut [bool], x: usize) -> (usize, bool) {
        if parent[x] == x {
            return (x, false);
        }
        let (r, p) = find(parent, parity, parent[x]);
        parent[x] = r;
        parity[x] ^= p;
        (r, parity[x])
    }
    for [a, b] in code.occurrences().values() {
        let xa = code.passage(*a).expect("in range").strand == Strand::Under;
        let xb = code.passage(*b).expect("in range").strand == Strand::Under;
        let want = xa ^ xb ^ (a.index % 2 == 1) ^ (b.index % 2 == 1);
        let (ra, pa) = find(&mut parent, &mut parity, a.component);
        let (rb, pb) = find(&mut parent, &mut parity, b.component);
        if ra == rb {
            if pa ^ pb != want {
                return Ok(false);
            }
        } else {
            parent[ra] = rb;
            parity[ra] = pa ^ pb ^ want;
        }
    }
    Ok(true)
}

/// The ribbon graph of the Turaev surface.
pub fn build_turaev_ribbon(code: &GaussCode) -> Result<RibbonGraph> {
    require_nonempty_components(code)?;
    if !is_connected(code) {
        return Err(Error::NotConnected);
    }
    RibbonGraph::turaev(code)
}

pub fn trace_boundaries(rg: &RibbonGraph) -> Vec<BoundaryWalk> {
    rg.trace_boundaries()
}

pub fn surface_report(code: &GaussCode) -> Result<SurfaceReport> {
    if code.is_trivial_knot() {
        return Ok(SurfaceReport::sphere());
    }
    let rg = build_turaev_ribbon(code)?;
    let v = rg.vertex_count() as i64;
    let e = rg.edges().len() as i64;
    let f = rg.face_count();
    let chi = v - e + f as i64;
    let orientable = rg.is_orientable();
    let twice_genus = u32::try_from(2 - chi).expect("connected surface has chi <= 2");
    debug_assert!(!orientable || twice_genus % 2 == 0);
    Ok(SurfaceReport {
        boundary_count: f,
        euler_characteristic: chi,
        orientable,
        twice_genus,
    })
}

pub fn turaev_genus(code: &GaussCode) -> Result<Genus> {
    Ok(surface_report(code)?.genus())
}

/// Circle counts of the all-A and all-B states.
///
/// Each passage has an in-end and an out-end. The arcs of the diagram join
/// the out-end of every passage to the in-end of the next one; a smoothing
/// joins ends at each crossing in pairs. At a `+` crossing the A smoothing
/// pairs over-in with under-out and under-in with over-out, and the B
/// smoothing pairs the two in-ends and the two out-ends. At a `-` crossing
/// the two patterns are exchanged.
pub fn state_circles(code: &GaussCode) -> Result<StateCount> {
    if code.is_generalized() {
        return Err(Error::GeneralizedCodeUnsupported);
    }
    if code.is_trivial_knot() {
        return Ok(StateCount { a_circles: 1, b_circles: 1 });
    }
    require_nonempty_components(code)?;
    if !is_connected(code) {
        return Err(Error::NotConnected);
    }
    Ok(StateCount {
        a_circles: smoothing_circles(code, true),
        b_circles: smoothing_circles(code, false),
    })
}

fn smoothing_circles(code: &GaussCode, a_state: bool) -> usize {
    // End ids: 2 * passage + (0 = in, 1 = out).
    let mut offsets = Vec::with_capacity(code.component_count());
    let mut total = 0;
    for c in code.components() {
        offsets.push(total);
        total += c.len();
    }
    let id = |comp: usize, idx: usize| offsets[comp] + idx;
    let mut arc = vec![0usize; 2 * total];
    for (ci, c) in code.components().iter().enumerate() {
        let n = c.len();
        for i in 0..n {
            let out = 2 * id(ci, i) + 1;
            let inn = 2 * id(ci, (i + 1) % n);
            arc[out] = inn;
            arc[inn] = out;
        }
    }
    let mut smooth = vec![0usize; 2 * total];
    for [a, b] in code.occurrences().values() {
        let pa = code.passage(*a).expect("in range");
        let (over, under) = if pa.strand == Strand::Over { (*a, *b) } else { (*b, *a) };
        let (oi, oo) = (2 * id(over.component, over.index), 2 * id(over.component, over.index) + 1);
        let (ui, uo) = (2 * id(under.component, under.index), 2 * id(under.component, under.index) + 1);
        let crossing_pairs = a_state == (pa.sign == Sign::Plus);
        let pairs = if crossing_pairs {
            [(oi, uo), (ui, oo)]
        } else {
            [(oi, ui), (oo, uo)]
        };
        for (x, y) in pairs {
            smooth[x] = y;
            smooth[y] = x;
        }
    }
    let mut seen = vec![false; 2 * total];
    let mut circles = 0;
    for start in 0..2 * total {
        if seen[start] {
            continue;
        }
        circles += 1;
        let mut cur = start;
        loop {
            seen[cur] = true;
            let next = arc[cur];
            seen[next] = true;
            cur = smooth[next];
            if cur == start {
                break;
            }
        }
    }
    circles
}
