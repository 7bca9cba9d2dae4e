//! Dowker-Thistlethwaite and planar diagram notation.
//!
//! Edges are numbered 1, 2, ... along each component in order, edge `t`
//! leaving the `t`-th passage. A PD crossing lists its four edges
//! counterclockwise starting from the incoming under edge.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gausscode::{carrier_genus, GaussCode, Passage, Sign, Strand};

fn require_classical(code: &GaussCode) -> Result<()> {
    if code.is_generalized() {
        return Err(Error::NotRealizable);
    }
    match carrier_genus(code)? {
        (0, true) => Ok(()),
        _ => Err(Error::NotRealizable),
    }
}

/// DT code of a classical knot: for each odd position in order, the even
/// position at the same crossing, negated when that even passage is over.
pub fn dt_code(code: &GaussCode) -> Result<Vec<i64>> {
    if code.component_count() > 1 {
        return Err(Error::UnsupportedFormat("DT codes describe knots only".into()));
    }
    require_classical(code)?;
    let Some(comp) = code.components().first() else {
        return Ok(Vec::new());
    };
    let mut first: BTreeMap<u32, usize> = BTreeMap::new();
    let mut pairs: BTreeMap<usize, (usize, Strand)> = BTreeMap::new();
    for (i, p) in comp.iter().enumerate() {
        let pos = i + 1;
        if let Some(&q) = first.get(&p.label) {
            let (odd, even, even_strand) = if q % 2 == 1 {
                (q, pos, p.strand)
            } else {
                (pos, q, comp[q - 1].strand)
            };
            if odd % 2 == 0 || even % 2 == 1 {
                return Err(Error::NotRealizable);
            }
            pairs.insert(odd, (even, even_strand));
        } else {
            first.insert(p.label, pos);
        }
    }
    Ok(pairs
        .values()
        .map(|&(even, s)| if s == Strand::Over { -(even as i64) } else { even as i64 })
        .collect())
}

pub fn render_dt(dt: &[i64]) -> String {
    dt.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

/// PD code of a classical diagram, one crossing per label in label order.
pub fn pd_code(code: &GaussCode) -> Result<Vec<[u32; 4]>> {
    require_classical(code)?;
    let mut offset = 0u32;
    // (in edge, out edge) of every passage.
    let mut ends: BTreeMap<u32, Vec<(Passage, u32, u32)>> = BTreeMap::new();
    for comp in code.components() {
        let n = comp.len() as u32;
        for (i, p) in comp.iter().enumerate() {
            let i = i as u32;
            let out_e = offset + i + 1;
            let in_e = offset + (i + n - 1) % n + 1;
            ends.entry(p.label).or_default().push((*p, in_e, out_e));
        }
        offset += n;
    }
    Ok(ends
        .values()
        .map(|v| {
            let (over, under) = if v[0].0.strand == Strand::Over { (v[0], v[1]) } else { (v[1], v[0]) };
            let (_, oi, oo) = over;
            let (p, ui, uo) = under;
            match p.sign {
                Sign::Plus => [ui, oo, uo, oi],
                Sign::Minus => [ui, oi, uo, oo],
            }
        })
        .collect())
}

pub fn render_pd(pd: &[[u32; 4]]) -> String {
    serde_json::to_string(pd).expect("integers serialize")
}

/// Reads a PD code from any text holding its integers in groups of four,
/// such as `[[1,5,2,4],...]` or `X[1,5,2,4] X[3,1,4,6] ...`.
pub fn parse_pd(text: &str) -> Result<Vec<[u32; 4]>> {
    let mut nums = Vec::new();
    let mut cur: Option<u32> = None;
    for (i, ch) in text.char_indices() {
        if let Some(d) = ch.to_digit(10) {
            let v = cur.unwrap_or(0).checked_mul(10).and_then(|x| x.checked_add(d));
            cur = Some(v.ok_or_else(|| Error::Syntax {
                position: i,
                expected: "edge label".into(),
                found: "overflowing integer".into(),
            })?);
        } else if let Some(v) = cur.take() {
            nums.push(v);
        }
    }
    nums.extend(cur);
    if nums.len() % 4 != 0 {
        return Err(Error::Syntax {
            position: text.len(),
            expected: "a multiple of four edge labels".into(),
            found: format!("{} labels", nums.len()),
        });
    }
    Ok(nums.chunks(4).map(|c| [c[0], c[1], c[2], c[3]]).collect())
}

/// Rebuilds a signed Gauss code from PD notation. Over-strand directions are
/// propagated from the under strands; components that only pass over follow
/// increasing edge labels, which leaves the direction of a one- or two-edge
/// such component arbitrary.
pub fn from_pd(pd: &[[u32; 4]]) -> Result<GaussCode> {
    if pd.is_empty() {
        return Ok(GaussCode::unknot());
    }
    let bad = |msg: String| Error::Syntax { position: 0, expected: "planar diagram code".into(), found: msg };
    // Every edge label appears in exactly two slots.
    let mut slots_of: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (x, c) in pd.iter().enumerate() {
        for (s, &e) in c.iter().enumerate() {
            slots_of.entry(e).or_default().push((x, s));
        }
    }
    if let Some((e, v)) = slots_of.iter().find(|(_, v)| v.len() != 2) {
        return Err(bad(format!("edge {e} appears {} times", v.len())));
    }
    // incoming[x][s]: whether slot s of crossing x is where its edge enters.
    let mut incoming: Vec<[Option<bool>; 4]> = vec![[Some(true), None, Some(false), None]; pd.len()];
    let other_end = |x: usize, s: usize| -> (usize, usize) {
        let v = &slots_of[&pd[x][s]];
        if v[0] == (x, s) { v[1] } else { v[0] }
    };
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..pd.len() {
            for s in 0..4 {
                let Some(dir) = incoming[x][s] else { continue };
                let (y, t) = other_end(x, s);
                match incoming[y][t] {
                    None => {
                        incoming[y][t] = Some(!dir);
                        changed = true;
                    }
                    Some(d) if d == dir => return Err(bad(format!("edge {} is inconsistently oriented", pd[x][s]))),
                    _ => {}
                }
                let opp = (s + 2) % 4;
                match incoming[x][opp] {
                    None => {
                        incoming[x][opp] = Some(!dir);
                        changed = true;
                    }
                    Some(d) if d == dir => return Err(bad(format!("crossing {x} has a bad strand"))),
                    _ => {}
                }
            }
        }
        if !changed {
            // Fall back on label order for one undetermined over strand.
            if let Some(x) = (0..pd.len()).find(|&x| incoming[x][1].is_none()) {
                let (j, l) = (pd[x][1], pd[x][3]);
                let j_in = if j.abs_diff(l) == 1 { j < l } else { j > l };
                incoming[x][1] = Some(j_in);
                changed = true;
            }
        }
    }
    let incoming: Vec<[bool; 4]> = incoming
        .into_iter()
        .map(|c| c.map(|d| d.expect("propagation assigns every slot")))
        .collect();
    let label = |x: usize| x as u32 + 1;
    let sign = |x: usize| if incoming[x][3] { Sign::Plus } else { Sign::Minus };
    let mut visited = vec![[false; 4]; pd.len()];
    let mut comps = Vec::new();
    for v in slots_of.values() {
        // Each component starts at the passage its smallest edge leaves.
        let &(x, s) = v.iter().find(|&&(x, s)| !incoming[x][s]).expect("edge has a tail");
        let s = (s + 2) % 4;
        if visited[x][s] {
            continue;
        }
        let mut comp = Vec::new();
        let (mut x, mut s) = (x, s);
        while !visited[x][s] {
            visited[x][s] = true;
            let strand = if s % 2 == 0 { Strand::Under } else { Strand::Over };
            comp.push(Passage::new(label(x), strand, sign(x)));
            let out = (s + 2) % 4;
            let next = other_end(x, out);
            x = next.0;
            s = next.1;
        }
        comps.push(comp);
    }
    GaussCode::new(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gausscode::{canonicalize, parse};

    #[test]
    fn dt_examples() {
        let f = parse("O1+ U2- O3- U1+ O4+ U3- O2- U4+").unwrap();
        assert_eq!(render_dt(&dt_code(&f).unwrap()), "4 6 8 2");
        let t = parse("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
        assert_eq!(render_dt(&dt_code(&t).unwrap()), "4 6 2");
        assert_eq!(dt_code(&parse("O1+ O2+ U1+ U2+").unwrap()), Err(Error::NotRealizable));
    }

    #[test]
    fn trefoil_pd() {
        let t = parse("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
        let pd = pd_code(&t).unwrap();
        assert_eq!(pd, vec![[3, 1, 4, 6], [1, 5, 2, 4], [5, 3, 6, 2]]);
        assert_eq!(from_pd(&pd).unwrap(), t);
    }

    #[test]
    fn pd_text_forms() {
        let a = parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]").unwrap();
        let b = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap();
        assert_eq!(a, b);
        assert!(parse_pd("[1,2,3]").is_err());
    }

    #[test]
    fn over_only_component() {
        for s in ["O1+ O2- O3+ O4-; U1+ U4- U3+ U2-", "O1- O2+ O3- O4+; U1- U2+ U3- U4+"] {
            let c = parse(s).unwrap();
            let pd = pd_code(&c).unwrap();
            assert_eq!(canonicalize(&from_pd(&pd).unwrap()), canonicalize(&c));
        }
    }

    #[test]
    fn link_round_trip() {
        let h = parse("O1+ U2+; U1+ O2+").unwrap();
        let back = from_pd(&pd_code(&h).unwrap()).unwrap();
        assert_eq!(canonicalize(&back), canonicalize(&h));
    }
}
