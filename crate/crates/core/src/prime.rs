//! Obvious primeness, the exceptional Turaev pairs, and primeification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gausscode::{
    canonicalize, connectivity, first_monogon, is_connected, is_realizable, subcodes, GaussCode,
    Sign, SubcodeInterval,
};
use crate::moves::{apply_move, ArcRef, MoveDescriptor, MoveLog, R2Order};
use crate::surface::{build_turaev_ribbon, surface_report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeStatus {
    SubcodeFree,
    Obstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimenessCertificate {
    pub status: PrimeStatus,
    pub witnesses: Vec<SubcodeInterval>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExceptionalCase {
    None,
    Sphere2Braid,
    ProjectivePlaneSuspect,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Certified,
    NotCertified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    NoCrossings,
    EmptyComponent,
    GeneralizedCode,
    NotConnected,
    NotReduced,
    Obstructed,
    Sphere2Braid,
    ProjectivePlaneSuspect,
    UnknownProjectivePlane,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicityVerdict {
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
}

fn require_diagram(code: &GaussCode) -> Result<()> {
    if let Some(c) = code.components().iter().position(Vec::is_empty) {
        return Err(Error::EmptyComponent(c));
    }
    if code.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    if !is_connected(code) {
        return Err(Error::NotConnected);
    }
    if let Some(l) = first_monogon(code) {
        return Err(Error::NotReduced(l));
    }
    Ok(())
}

pub fn primeness_certificate(code: &GaussCode) -> Result<PrimenessCertificate> {
    require_diagram(code)?;
    let witnesses = subcodes(code);
    let status = if witnesses.is_empty() { PrimeStatus::SubcodeFree } else { PrimeStatus::Obstructed };
    Ok(PrimenessCertificate { status, witnesses })
}

/// Face sizes of the Turaev surface, sorted.
fn turaev_face_sizes(code: &GaussCode) -> Result<(Vec<usize>, bool)> {
    let rg = build_turaev_ribbon(code)?;
    let walks = rg.trace_boundaries();
    let mut face_of_side = std::collections::HashMap::new();
    for (f, w) in walks.iter().enumerate() {
        for s in w {
            face_of_side.entry(s.edge).or_insert_with(Vec::new).push(f);
        }
    }
    let one_sided = face_of_side.values().any(|fs| fs.len() == 2 && fs[0] == fs[1]);
    let mut sizes: Vec<usize> = walks.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    Ok((sizes, one_sided))
}

/// Detects the Turaev pairs excluded from hyperbolicity.
///
/// On the sphere the lifted diagram is a 2-braid exactly when its faces are
/// `c` bigons and two `c`-gons. On the projective plane the scan flags the
/// lifted 2-braid (`c` bigons and one `2c`-gon) and any diagram met once by
/// a one-sided curve (an edge with the same face on both sides); other
/// projective-plane diagrams are reported as `Unknown`.
pub fn exceptional_case(code: &GaussCode) -> Result<ExceptionalCase> {
    require_diagram(code)?;
    if code.is_generalized() {
        return Err(Error::GeneralizedCodeUnsupported);
    }
    let c = code.crossing_count();
    let report = surface_report(code)?;
    let (sizes, one_sided) = turaev_face_sizes(code)?;
    let bigons = sizes.iter().filter(|&&s| s == 2).count();
    match report.twice_genus {
        0 => {
            let mut braid = vec![2; c];
            braid.extend([c, c]);
            braid.sort_unstable();
            Ok(if sizes == braid && is_realizable(code) && code.is_alternating() {
                ExceptionalCase::Sphere2Braid
            } else {
                ExceptionalCase::None
            })
        }
        1 => {
            let braid = bigons == c && sizes.len() == c + 1 && sizes[c] == 2 * c;
            Ok(if braid || one_sided {
                ExceptionalCase::ProjectivePlaneSuspect
            } else {
                ExceptionalCase::Unknown
            })
        }
        _ => Ok(ExceptionalCase::None),
    }
}

/// Never fails; unmet criteria are listed as reasons.
pub fn hyperbolicity_certificate(code: &GaussCode) -> HyperbolicityVerdict {
    let mut reasons = Vec::new();
    if code.crossing_count() == 0 {
        reasons.push(Reason::NoCrossings);
    }
    if code.has_empty_component() {
        reasons.push(Reason::EmptyComponent);
    }
    if code.is_generalized() {
        reasons.push(Reason::GeneralizedCode);
    }
    if !is_connected(code) {
        reasons.push(Reason::NotConnected);
    }
    if first_monogon(code).is_some() {
        reasons.push(Reason::NotReduced);
    }
    if reasons.is_empty() {
        if !subcodes(code).is_empty() {
            reasons.push(Reason::Obstructed);
        }
        match exceptional_case(code) {
            Ok(ExceptionalCase::None) => {}
            Ok(ExceptionalCase::Sphere2Braid) => reasons.push(Reason::Sphere2Braid),
            Ok(ExceptionalCase::ProjectivePlaneSuspect) => reasons.push(Reason::ProjectivePlaneSuspect),
            Ok(ExceptionalCase::Unknown) | Err(_) => reasons.push(Reason::UnknownProjectivePlane),
        }
    }
    let verdict = if reasons.is_empty() { Verdict::Certified } else { Verdict::NotCertified };
    HyperbolicityVerdict { verdict, reasons }
}

fn is_prime_target(code: &GaussCode) -> bool {
    hyperbolicity_certificate(code).verdict == Verdict::Certified
}

/// All gaps of the code, component by component.
fn all_arcs(code: &GaussCode) -> Vec<ArcRef> {
    code.components()
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| (0..c.len().max(1)).map(move |p| ArcRef::new(ci, p)))
        .collect()
}

fn r2_variants(over: ArcRef, under: ArcRef) -> impl Iterator<Item = MoveDescriptor> {
    [Sign::Plus, Sign::Minus].into_iter().flat_map(move |sign| {
        [R2Order::Parallel, R2Order::Antiparallel].into_iter().map(move |order| MoveDescriptor::R2Add {
            over,
            under,
            sign: Some(sign),
            order: Some(order),
        })
    })
}

/// Best R2 move among `candidates` by `score` (lower is better, `None`
/// rejects), ties broken by the canonical rendering of the result.
fn best_r2(
    code: &GaussCode,
    candidates: impl Iterator<Item = MoveDescriptor>,
    score: impl Fn(&GaussCode) -> Option<usize>,
) -> Option<MoveDescriptor> {
    let mut best: Option<((usize, String), MoveDescriptor)> = None;
    for m in candidates {
        let Ok(out) = apply_move(code, &m) else { continue };
        let Some(s) = score(&out) else { continue };
        let key = (s, canonicalize(&out).render());
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, m));
        }
    }
    best.map(|(_, m)| m)
}

/// Moves taking the round unknot to the trefoil diagram with one crossing
/// changed.
fn unknot_to_switched_trefoil() -> [MoveDescriptor; 2] {
    [
        MoveDescriptor::R1Add { arc: ArcRef::new(0, 0), sign: Sign::Plus, over_first: true },
        MoveDescriptor::R2Add {
            over: ArcRef::new(0, 0),
            under: ArcRef::new(0, 1),
            sign: Some(Sign::Minus),
            order: Some(R2Order::Parallel),
        },
    ]
}

/// The arcs next to the cross-strands `q` and `r` of a subcode: `q` crosses
/// the strand at the first crossing after the run, `r` at the last crossing
/// inside it.
fn witness_arcs(code: &GaussCode, w: &SubcodeInterval) -> Vec<ArcRef> {
    let comp = &code.components()[w.component];
    let n = comp.len();
    let outside = crate::gausscode::Pos::new(w.component, (w.start + w.length) % n);
    let inside = crate::gausscode::Pos::new(w.component, (w.start + w.length + n - 1) % n);
    let mut arcs = Vec::new();
    for pos in [outside, inside] {
        let q = code.partner(pos).expect("paired label");
        let len = code.components()[q.component].len();
        arcs.push(ArcRef::new(q.component, q.index));
        arcs.push(ArcRef::new(q.component, (q.index + len - 1) % len));
    }
    arcs
}

/// Turns any ordinary code into a diagram of the same link whose Turaev
/// pair passes [`hyperbolicity_certificate`], logging every move.
///
/// Split diagrams are joined by R2 moves, monogons are removed, the round
/// unknot is replaced by a three-crossing diagram, each subcode is broken by
/// pushing a cross-strand outside it over one inside it, and exceptional
/// pairs get one more R2 move. Planar inputs stay planar throughout.
pub fn make_turaev_prime(code: &GaussCode) -> Result<(GaussCode, MoveLog)> {
    if code.is_generalized() {
        return Err(Error::GeneralizedCodeUnsupported);
    }
    if code.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    let classical = is_realizable(code);
    let keeps_class = |c: &GaussCode| !classical || is_realizable(c);
    let mut log = MoveLog::new();
    let mut cur = code.clone();
    let c0 = code.crossing_count();
    let cap = 10 * (c0 + 4) * (c0 + 4);
    for _ in 0..cap {
        if cur.is_trivial_knot() {
            for m in unknot_to_switched_trefoil() {
                cur = log.apply(&cur, m)?;
            }
            continue;
        }
        let classes = connectivity(&cur);
        if classes.len() > 1 {
            let first = |class: &std::collections::BTreeSet<usize>| {
                ArcRef::new(*class.iter().next().expect("nonempty class"), 0)
            };
            let m = MoveDescriptor::R2Add { over: first(&classes[0]), under: first(&classes[1]), sign: None, order: None };
            cur = log.apply(&cur, m)?;
            continue;
        }
        if let Some(label) = first_monogon(&cur) {
            cur = log.apply(&cur, MoveDescriptor::R1Remove { label })?;
            continue;
        }
        let witnesses = subcodes(&cur);
        if let Some(w) = witnesses.first() {
            let count = witnesses.len();
            let score = |c: &GaussCode| {
                let k = subcodes(c).len();
                (k < count && keeps_class(c)).then_some(k)
            };
            let arcs = witness_arcs(&cur, w);
            let (q, r) = (&arcs[..2], &arcs[2..]);
            let local = q.iter().flat_map(|&a| {
                r.iter().flat_map(move |&b| r2_variants(a, b).chain(r2_variants(b, a)))
            });
            let m = best_r2(&cur, local, score).or_else(|| {
                let arcs = all_arcs(&cur);
                let all = arcs.iter().flat_map(|&a| arcs.iter().flat_map(move |&b| r2_variants(a, b)));
                best_r2(&cur, all, score)
            });
            let Some(m) = m else {
                return Err(Error::ProgressStalled(format!("no R2 move reduces the {count} subcodes of {cur}")));
            };
            cur = log.apply(&cur, m)?;
            continue;
        }
        if is_prime_target(&cur) {
            return Ok((cur, log));
        }
        let arcs = all_arcs(&cur);
        let all = arcs.iter().flat_map(|&a| arcs.iter().flat_map(move |&b| r2_variants(a, b)));
        let m = best_r2(&cur, all, |c| (keeps_class(c) && is_prime_target(c)).then_some(0));
        let Some(m) = m else {
            return Err(Error::ProgressStalled(format!("no R2 move clears the exceptional pair {cur}")));
        };
        cur = log.apply(&cur, m)?;
    }
    Err(Error::ProgressStalled(format!("iteration cap {cap} reached")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gausscode::parse;
    use crate::moves::compose;

    fn p(s: &str) -> GaussCode {
        parse(s).unwrap()
    }

    const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";
    const FIGURE_EIGHT: &str = "O1+ U2- O3- U1+ O4+ U3- O2- U4+";
    const SWITCHED_TREFOIL: &str = "U1- U2+ O3+ O1- O2+ U3+";

    #[test]
    fn trefoil_is_subcode_free_and_a_braid() {
        let t = p(TREFOIL);
        assert_eq!(primeness_certificate(&t).unwrap().status, PrimeStatus::SubcodeFree);
        assert_eq!(exceptional_case(&t).unwrap(), ExceptionalCase::Sphere2Braid);
        let v = hyperbolicity_certificate(&t);
        assert_eq!(v.verdict, Verdict::NotCertified);
        assert_eq!(v.reasons, vec![Reason::Sphere2Braid]);
    }

    #[test]
    fn hopf_link_is_a_braid() {
        assert_eq!(exceptional_case(&p("O1+ U2+; U1+ O2+")).unwrap(), ExceptionalCase::Sphere2Braid);
    }

    #[test]
    fn figure_eight_is_certified() {
        let f = p(FIGURE_EIGHT);
        assert_eq!(exceptional_case(&f).unwrap(), ExceptionalCase::None);
        assert_eq!(hyperbolicity_certificate(&f).verdict, Verdict::Certified);
    }

    #[test]
    fn virtual_trefoil_is_not_certified() {
        let v = hyperbolicity_certificate(&p("O1+ O2+ U1+ U2+"));
        assert_eq!(v.verdict, Verdict::NotCertified);
    }

    #[test]
    fn unreduced_codes_are_rejected() {
        let c = p("O1+ O2+ O3+ O4+ O5+ U3+ U5+ U4+ U2+ U1+");
        assert_eq!(primeness_certificate(&c), Err(Error::NotReduced(1)));
    }

    #[test]
    fn composite_is_obstructed_then_primed() {
        let t = p(TREFOIL);
        let c = compose(&t, &t, ArcRef::new(0, 5), ArcRef::new(0, 5)).unwrap();
        assert_eq!(primeness_certificate(&c).unwrap().status, PrimeStatus::Obstructed);
        let (out, log) = make_turaev_prime(&c).unwrap();
        assert!(subcodes(&out).is_empty());
        assert!(is_realizable(&out));
        assert_eq!(log.replay(&c).unwrap(), out);
        assert_eq!(hyperbolicity_certificate(&out).verdict, Verdict::Certified);
    }

    #[test]
    fn unknot_becomes_switched_trefoil() {
        let (out, log) = make_turaev_prime(&GaussCode::unknot()).unwrap();
        assert_eq!(canonicalize(&out), canonicalize(&p(SWITCHED_TREFOIL)));
        assert_eq!(surface_report(&out).unwrap().twice_genus, 2);
        assert_eq!(log.len(), 2);
    }

    #[test]
    fn fixed_point() {
        let f = p(FIGURE_EIGHT);
        let (out, log) = make_turaev_prime(&f).unwrap();
        assert_eq!(out, f);
        assert!(log.is_empty());
    }
}
