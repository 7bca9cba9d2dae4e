//! Ribbon graphs built from Gauss codes and their boundary walks.
//!
//! Each crossing becomes a vertex with four slots in counterclockwise order.
//! At a `+` crossing the order is (over-in, under-in, over-out, under-out);
//! at a `-` crossing it is (over-in, under-out, over-out, under-in). Bands
//! join consecutive passages of every component. The flat graph has no
//! twists; the Turaev graph twists every band whose two ends carry the same
//! strand letter.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gausscode::{GaussCode, Pos, Sign, Strand};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub passage: Pos,
    pub direction: Direction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonEdge {
    /// Slot ids: `ends[0]` is the out-slot of a passage, `ends[1]` the
    /// in-slot of the next passage along the component.
    pub ends: [usize; 2],
    pub twisted: bool,
}

/// One side of an edge as crossed by a boundary walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSide {
    pub edge: usize,
    /// Slot the walk leaves through.
    pub from_slot: usize,
    /// Local orientation of the walk when it leaves (`true` = counterclockwise).
    pub positive: bool,
}

pub type BoundaryWalk = Vec<EdgeSide>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    labels: Vec<u32>,
    slots: Vec<Slot>,
    slot_edge: Vec<usize>,
    edges: Vec<RibbonEdge>,
}

/// Position of a slot in the counterclockwise rotation at its crossing.
pub(crate) fn rotation_index(sign: Sign, strand: Strand, dir: Direction) -> usize {
    use Direction::*;
    use Strand::*;
    match (sign, strand, dir) {
        (_, Over, In) => 0,
        (_, Over, Out) => 2,
        (Sign::Plus, Under, In) => 1,
        (Sign::Plus, Under, Out) => 3,
        (Sign::Minus, Under, Out) => 1,
        (Sign::Minus, Under, In) => 3,
    }
}

impl RibbonGraph {
    /// Untwisted ribbon graph: a cellular embedding of the diagram.
    pub fn flat(code: &GaussCode) -> Result<Self> {
        Self::build(code, false)
    }

    /// Ribbon graph of the Turaev surface.
    pub fn turaev(code: &GaussCode) -> Result<Self> {
        Self::build(code, true)
    }

    fn build(code: &GaussCode, twists: bool) -> Result<Self> {
        if code.is_generalized() {
            return Err(Error::GeneralizedCodeUnsupported);
        }
        let labels = code.labels();
        let vertex: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let placeholder = Slot {
            passage: Pos::new(usize::MAX, usize::MAX),
            direction: Direction::In,
        };
        let mut slots = vec![placeholder; 4 * labels.len()];
        let slot_of = |pos: Pos, dir: Direction| -> usize {
            let p = code.passage(pos).expect("position in range");
            4 * vertex[&p.label] + rotation_index(p.sign, p.strand, dir)
        };
        for (pos, _) in code.passages() {
            for dir in [Direction::In, Direction::Out] {
                slots[slot_of(pos, dir)] = Slot {
                    passage: pos,
                    direction: dir,
                };
            }
        }
        let mut edges = Vec::with_capacity(2 * labels.len());
        let mut slot_edge = vec![usize::MAX; slots.len()];
        for (ci, comp) in code.components().iter().enumerate() {
            let n = comp.len();
            for i in 0..n {
                let j = (i + 1) % n;
                let a = slot_of(Pos::new(ci, i), Direction::Out);
                let b = slot_of(Pos::new(ci, j), Direction::In);
                slot_edge[a] = edges.len();
                slot_edge[b] = edges.len();
                edges.push(RibbonEdge {
                    ends: [a, b],
                    twisted: twists && comp[i].strand == comp[j].strand,
                });
            }
        }
        Ok(RibbonGraph {
            labels,
            slots,
            slot_edge,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Crossing label of each vertex.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Slots of vertex `v` in counterclockwise order.
    pub fn rotation(&self, v: usize) -> &[Slot] {
        &self.slots[4 * v..4 * v + 4]
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn edges(&self) -> &[RibbonEdge] {
        &self.edges
    }

    pub fn twisted_count(&self) -> usize {
        self.edges.iter().filter(|e| e.twisted).count()
    }

    pub fn edge_of(&self, slot: usize) -> usize {
        self.slot_edge[slot]
    }

    pub fn vertex_of(&self, slot: usize) -> usize {
        slot / 4
    }

    /// Opposite end of the band attached at `slot`.
    pub fn across(&self, slot: usize) -> usize {
        let e = &self.edges[self.slot_edge[slot]];
        if e.ends[0] == slot {
            e.ends[1]
        } else {
            e.ends[0]
        }
    }

    fn turn(&self, slot: usize, positive: bool) -> usize {
        let base = slot - slot % 4;
        let r = slot % 4;
        base + if positive { (r + 1) % 4 } else { (r + 3) % 4 }
    }

    fn step(&self, side: EdgeSide) -> EdgeSide {
        let to = self.across(side.from_slot);
        let e = &self.edges[self.slot_edge[side.from_slot]];
        let positive = side.positive != e.twisted;
        let next = self.turn(to, positive);
        EdgeSide {
            edge: self.slot_edge[next],
            from_slot: next,
            positive,
        }
    }

    fn reverse(&self, side: EdgeSide) -> EdgeSide {
        let to = self.across(side.from_slot);
        let e = &self.edges[side.edge];
        EdgeSide {
            edge: side.edge,
            from_slot: to,
            positive: side.positive == e.twisted,
        }
    }

    fn side_index(side: EdgeSide) -> usize {
        2 * side.from_slot + usize::from(!side.positive)
    }

    /// Boundary components of the thickened graph. Every face of the capped
    /// surface is reported once; the face count is the walk count.
    pub fn trace_boundaries(&self) -> Vec<BoundaryWalk> {
        let n = 2 * self.slots.len();
        let mut orbit = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<EdgeSide>> = Vec::new();
        for start in 0..n {
            if orbit[start] != usize::MAX {
                continue;
            }
            let first = EdgeSide {
                edge: self.slot_edge[start / 2],
                from_slot: start / 2,
                positive: start % 2 == 0,
            };
            let id = orbits.len();
            let mut walk = Vec::new();
            let mut cur = first;
            loop {
                orbit[Self::side_index(cur)] = id;
                walk.push(cur);
                cur = self.step(cur);
                if cur == first {
                    break;
                }
            }
            orbits.push(walk);
        }
        // Each face is traced once in each direction; keep the first copy.
        let mut keep = vec![true; orbits.len()];
        for (id, walk) in orbits.iter().enumerate() {
            if !keep[id] {
                continue;
            }
            let twin = orbit[Self::side_index(self.reverse(walk[0]))];
            debug_assert_ne!(twin, id, "a face walk cannot be its own reverse");
            keep[twin] = false;
        }
        orbits
            .into_iter()
            .zip(keep)
            .filter_map(|(w, k)| k.then_some(w))
            .collect()
    }

    pub fn face_count(&self) -> usize {
        self.trace_boundaries().len()
    }

    /// Orientability by twist parity over a spanning forest: the surface is
    /// nonorientable iff some cycle carries an odd number of twists.
    pub fn is_orientable(&self) -> bool {
        let nv = self.vertex_count();
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nv];
        for e in &self.edges {
            let (u, v) = (self.vertex_of(e.ends[0]), self.vertex_of(e.ends[1]));
            adj[u].push((v, e.twisted));
            if u != v {
                adj[v].push((u, e.twisted));
            } else if e.twisted {
                return false;
            }
        }
        let mut parity: Vec<Option<bool>> = vec![None; nv];
        for root in 0..nv {
            if parity[root].is_some() {
                continue;
            }
            parity[root] = Some(false);
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                let pu = parity[u].expect("visited");
                for &(v, tw) in &adj[u] {
                    match parity[v] {
                        None => {
                            parity[v] = Some(pu ^ tw);
                            stack.push(v);
                        }
                        Some(pv) if pv != pu ^ tw => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}
