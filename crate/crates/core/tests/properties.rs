mod common;

use proptest::prelude::*;
use turaev::corpus::{classical_code, random_code, rng, scramble};
use turaev::gausscode::{canonicalize, is_connected, is_realizable, parse, subcodes, GaussCode, Sign, Strand};
use turaev::moves::{apply_move, compose, crossing_change, d_sequence, virtualize, ArcRef, MoveDescriptor, MoveLog, R2Order};
use turaev::notation::{dt_code, from_pd, parse_pd, pd_code, render_pd};
use turaev::surface::{state_circles, surface_report};

fn any_code() -> impl Strategy<Value = GaussCode> {
    (0usize..=8, 1usize..=3, any::<u64>()).prop_map(|(c, k, seed)| random_code(&mut rng(seed), c, k))
}

fn connected_code() -> impl Strategy<Value = GaussCode> {
    any_code().prop_filter("connected with crossings", |c| c.crossing_count() > 0 && is_connected(c))
}

fn planar_code() -> impl Strategy<Value = GaussCode> {
    any::<u64>().prop_map(|seed| classical_code(&mut rng(seed), 1, 7, false))
}

fn arc_of(code: &GaussCode, pick: usize) -> ArcRef {
    let comp = pick % code.component_count().max(1);
    let len = code.components().get(comp).map_or(1, |c| c.len().max(1));
    ArcRef::new(comp, pick / 7 % len)
}

/// A component of one or two edges that only passes over has no orientation
/// recorded in PD notation.
fn has_short_over_component(code: &GaussCode) -> bool {
    code.components().iter().any(|c| c.len() <= 2 && c.iter().all(|p| p.strand == Strand::Over))
}

fn sign(b: bool) -> Sign {
    if b { Sign::Plus } else { Sign::Minus }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_round_trips(code in any_code()) {
        prop_assert_eq!(parse(&code.render()).unwrap(), code);
    }

    #[test]
    fn canonical_form_ignores_relabeling(code in any_code(), seed in any::<u64>()) {
        let moved = scramble(&mut rng(seed), &code);
        prop_assert_eq!(canonicalize(&moved), canonicalize(&code));
    }

    #[test]
    fn surface_is_a_diagram_invariant(code in connected_code(), seed in any::<u64>()) {
        let moved = scramble(&mut rng(seed), &code);
        prop_assert_eq!(surface_report(&moved).unwrap(), surface_report(&code).unwrap());
    }

    #[test]
    fn boundary_count_is_state_circle_total(code in connected_code()) {
        let s = surface_report(&code).unwrap();
        let (a, b) = common::state_loops(&code);
        prop_assert_eq!(s.boundary_count, a + b);
        let lib = state_circles(&code).unwrap();
        prop_assert_eq!((lib.a_circles, lib.b_circles), (a, b));
    }

    #[test]
    fn crossing_change_and_virtualize_are_involutions(code in connected_code(), pick in any::<usize>()) {
        let labels = code.labels();
        let l = labels[pick % labels.len()];
        prop_assert_eq!(crossing_change(&crossing_change(&code, l).unwrap(), l).unwrap(), code.clone());
        prop_assert_eq!(virtualize(&virtualize(&code, l).unwrap(), l).unwrap(), code);
    }

    #[test]
    fn r1_add_then_remove(code in any_code(), pick in any::<usize>(), s in any::<bool>(), over_first in any::<bool>()) {
        let arc = arc_of(&code, pick);
        let added = apply_move(&code, &MoveDescriptor::R1Add { arc, sign: sign(s), over_first }).unwrap();
        let label = added.max_label();
        let back = apply_move(&added, &MoveDescriptor::R1Remove { label }).unwrap();
        prop_assert_eq!(canonicalize(&back), canonicalize(&code));
    }

    #[test]
    fn r2_add_then_remove(code in connected_code(), p1 in any::<usize>(), p2 in any::<usize>(), s in any::<bool>(), parallel in any::<bool>()) {
        let order = if parallel { R2Order::Parallel } else { R2Order::Antiparallel };
        let (over, under) = (arc_of(&code, p1), arc_of(&code, p2));
        let m = MoveDescriptor::R2Add { over, under, sign: Some(sign(s)), order: Some(order) };
        let added = apply_move(&code, &m).unwrap();
        let top = added.max_label();
        let back = apply_move(&added, &MoveDescriptor::R2Remove { labels: [top - 1, top] }).unwrap();
        prop_assert_eq!(canonicalize(&back), canonicalize(&code));
    }

    #[test]
    fn r1_keeps_the_bracket(code in planar_code(), pick in any::<usize>(), s in any::<bool>(), over_first in any::<bool>()) {
        let arc = arc_of(&code, pick);
        let kinked = apply_move(&code, &MoveDescriptor::R1Add { arc, sign: sign(s), over_first }).unwrap();
        prop_assert_eq!(common::normalized_bracket(&kinked), common::normalized_bracket(&code));
    }

    #[test]
    fn move_logs_replay(code in connected_code(), n in 1u32..4, pick in any::<usize>()) {
        let mut log = MoveLog::new();
        let arc = arc_of(&code, pick);
        let a = log.apply(&code, MoveDescriptor::DTwist { arc, n }).unwrap();
        let b = log.apply(&a, MoveDescriptor::R2Add { over: ArcRef::new(arc.component, 0), under: ArcRef::new(arc.component, 1), sign: None, order: None }).unwrap();
        prop_assert_eq!(log.replay(&code).unwrap(), b);
        let reread = MoveLog::from_json_lines(&log.to_json_lines()).unwrap();
        prop_assert_eq!(reread, log);
    }

    #[test]
    fn twist_family_adds_a_handle(code in connected_code(), n in 1u32..5, pick in any::<usize>()) {
        let arc = arc_of(&code, pick);
        let d = d_sequence(&code, arc, n).unwrap();
        let (s0, s1) = (surface_report(&code).unwrap(), surface_report(&d).unwrap());
        prop_assert_eq!(s1.twice_genus, s0.twice_genus + 2);
        prop_assert!(!s1.orientable);
        let ((a0, b0), (a1, b1)) = (common::state_loops(&code), common::state_loops(&d));
        prop_assert_eq!((a1, b1), (a0 + n as usize, b0));
    }

    #[test]
    fn composites_have_subcodes(a in planar_code(), b in planar_code(), p1 in any::<usize>(), p2 in any::<usize>()) {
        let c = compose(&a, &b, arc_of(&a, p1), arc_of(&b, p2)).unwrap();
        prop_assert!(is_realizable(&c));
        prop_assert!(!subcodes(&c).is_empty());
    }

    #[test]
    fn pd_round_trips(code in planar_code().prop_filter("orientation readable from PD", |c| !has_short_over_component(c))) {
        let pd = pd_code(&code).unwrap();
        prop_assert_eq!(&pd, &common::local_pd(&code));
        let text = render_pd(&pd);
        let back = from_pd(&parse_pd(&text).unwrap()).unwrap();
        prop_assert_eq!(canonicalize(&back), canonicalize(&code));
    }

    #[test]
    fn dt_codes_pair_odd_with_even(code in planar_code().prop_filter("knot", |c| c.component_count() == 1)) {
        let dt = dt_code(&code).unwrap();
        prop_assert_eq!(dt.len(), code.crossing_count());
        let mut evens: Vec<i64> = dt.iter().map(|x| x.abs()).collect();
        evens.sort_unstable();
        let want: Vec<i64> = (1..=code.crossing_count() as i64).map(|i| 2 * i).collect();
        prop_assert_eq!(evens, want);
    }
}
