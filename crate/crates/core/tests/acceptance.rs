//! Acceptance criteria, one line per criterion. Exits nonzero on any failure.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::Rng;
use turaev::corpus::{all_knot_codes, classical_code, random_code, random_composite, rng, scramble, seed_from_env};
use turaev::gausscode::{canonicalize, is_connected, is_realizable, is_reduced, parse, subcodes, GaussCode, Strand};
use turaev::moves::{crossing_change, d_sequence, ArcRef};
use turaev::par::ExecMode;
use turaev::prime::{exceptional_case, hyperbolicity_certificate, make_turaev_prime, ExceptionalCase, Reason, Verdict};
use turaev::report::{batch_rows, read_code};
use turaev::surface::{has_unpaired_label, parity_orientable, state_circles, surface_report, turaev_code};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))?;
    Ok(t)
}

fn p(s: &str) -> GaussCode {
    parse(s).expect("fixture code parses")
}

fn orientability_agrees(code: &GaussCode) -> Result<(), String> {
    let parity = parity_orientable(code).map_err(|e| format!("{code}: {e}"))?;
    let ribbon = surface_report(code).map_err(|e| format!("{code}: {e}"))?.orientable;
    let letters = !has_unpaired_label(&turaev_code(code).map_err(|e| e.to_string())?);
    ensure(parity == ribbon && ribbon == letters, || {
        format!("{code}: parity {parity}, ribbon {ribbon}, turaev letters {letters}")
    })
}

fn orientability_equivalence() -> Check {
    let start = Instant::now();
    let mut exhaustive = 0;
    for c in 1..=4 {
        for code in all_knot_codes(c) {
            orientability_agrees(&code)?;
            exhaustive += 1;
        }
    }
    let mut r = rng(seed_from_env(2101));
    for _ in 0..10_000 {
        let c = r.random_range(1..=10);
        orientability_agrees(&random_code(&mut r, c, 1))?;
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{exhaustive} exhaustive + 10000 random codes agree in {t:.1?}"))
}

fn genus_identity() -> Check {
    let mut r = rng(seed_from_env(2202));
    let mut seen = BTreeSet::new();
    let mut attempts = 0;
    while seen.len() < 600 {
        attempts += 1;
        ensure(attempts < 200_000, || format!("only {} distinct codes generated", seen.len()))?;
        let code = canonicalize(&classical_code(&mut r, 1, 6, true));
        if !seen.insert(code.render()) {
            continue;
        }
        ensure(is_realizable(&code) && is_connected(&code) && is_reduced(&code), || format!("{code}: bad corpus entry"))?;
        let (a, b) = common::state_loops(&code);
        let s = surface_report(&code).map_err(|e| e.to_string())?;
        let lib = state_circles(&code).map_err(|e| e.to_string())?;
        let c = code.crossing_count();
        ensure((lib.a_circles, lib.b_circles) == (a, b), || format!("{code}: state circles {lib:?}, oracle ({a}, {b})"))?;
        ensure(s.twice_genus as usize + a + b == c + 2, || format!("{code}: twice genus {} with a={a} b={b}", s.twice_genus))?;
        ensure(s.boundary_count == a + b, || format!("{code}: F={} with a={a} b={b}", s.boundary_count))?;
    }
    Ok(format!("{} distinct codes with at most 6 crossings", seen.len()))
}

/// An alternating version of a classical code, by crossing changes.
fn make_alternating(code: &GaussCode) -> Option<GaussCode> {
    let k = code.component_count();
    for starts in 0u32..(1 << k) {
        let want = |comp: usize, i: usize| (i % 2 == 0) == (starts >> comp & 1 == 0);
        let mut flips = BTreeSet::new();
        let mut ok = true;
        for [x, y] in code.occurrences().values() {
            let (wx, wy) = (want(x.component, x.index), want(y.component, y.index));
            if wx == wy {
                ok = false;
                break;
            }
            if (code.passage(*x).unwrap().strand == Strand::Over) != wx {
                flips.insert(code.passage(*x).unwrap().label);
            }
        }
        if ok {
            let mut out = code.clone();
            for l in flips {
                out = crossing_change(&out, l).ok()?;
            }
            return Some(out);
        }
    }
    None
}

fn regression_set() -> Check {
    let t = turaev_code(&p("O1+O2-U3+U1+O4-U2-O3+U4-")).map_err(|e| e.to_string())?;
    ensure(t.render().replace(' ', "") == "O1+U2-O3+U1+O4-U2-O3+U4-", || format!("turaev code {t}"))?;

    let word = p("O1+ O2+ O3+ O4+ O5+ U3+ U5+ U4+ U2+ U1+");
    let words: BTreeSet<String> = subcodes(&word)
        .iter()
        .map(|s| s.label_word(&word).iter().map(u32::to_string).collect())
        .collect();
    ensure(words.contains("345354") && words.contains("2112"), || format!("subcode words {words:?}"))?;

    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let cst = read_code(&fixtures.join("unknots/u1_switched_trefoil.gauss")).map_err(|e| e.to_string())?;
    ensure(common::has_trivial_jones(&cst), || "switched trefoil is knotted".into())?;
    let g = surface_report(&cst).map_err(|e| e.to_string())?.genus();
    ensure(g.twice == 2, || format!("switched trefoil genus {g}"))?;

    let vf = read_code(&fixtures.join("misc/virtual_figure_eight.gauss")).map_err(|e| e.to_string())?;
    let s = surface_report(&vf).map_err(|e| e.to_string())?;
    ensure(s.twice_genus == 1 && !s.orientable, || format!("virtual figure-eight {s:?}"))?;

    let mut r = rng(seed_from_env(2303));
    let mut alternating = 0;
    while alternating < 300 {
        let Some(code) = make_alternating(&classical_code(&mut r, 1, 8, true)) else { continue };
        if !(code.is_alternating() && is_reduced(&code) && is_connected(&code) && is_realizable(&code)) {
            continue;
        }
        let s = surface_report(&code).map_err(|e| e.to_string())?;
        ensure(s.twice_genus == 0, || format!("alternating {code} has twice genus {}", s.twice_genus))?;
        alternating += 1;
    }

    let rows = batch_rows(&fixtures.join("unknots"), ExecMode::Parallel).map_err(|e| e.to_string())?;
    let genera: Vec<u32> = rows.iter().filter_map(|r| r.twice_genus).collect();
    ensure(rows.len() == 5 && genera == [2, 2, 2, 4, 4], || format!("batch twice genera {genera:?}"))?;
    for f in ["u1_switched_trefoil", "u2_switched_figure_eight", "u3_switched_five_two", "u4_double_switched_trefoil", "u5_switched_trefoil_and_figure_eight"] {
        let code = read_code(&fixtures.join(format!("unknots/{f}.gauss"))).map_err(|e| e.to_string())?;
        ensure(common::has_trivial_jones(&code), || format!("{f} has nontrivial Jones polynomial"))?;
    }
    Ok(format!("6 checks, {alternating} alternating codes, batch genera 1,1,1,2,2"))
}

fn d_sequence_law() -> Check {
    let bases = [("unknot", GaussCode::unknot()), ("trefoil", p("O1+ U2+ O3+ U1+ O2+ U3+")), ("figure-eight", p("O1+ U2- O3- U1+ O4+ U3- O2- U4+"))];
    let mut cases = 0;
    for (name, base) in &bases {
        let (a0, b0) = common::state_loops(base);
        let g0 = surface_report(base).map_err(|e| e.to_string())?.twice_genus;
        let jones = common::normalized_bracket(base);
        let arcs = base.components()[0].len().max(1);
        for pos in 0..arcs {
            for n in 1..=10u32 {
                let d = d_sequence(base, ArcRef::new(0, pos), n).map_err(|e| format!("{name}: {e}"))?;
                let (a, b) = common::state_loops(&d);
                let g = surface_report(&d).map_err(|e| e.to_string())?.twice_genus;
                let dc = d.crossing_count() - base.crossing_count();
                ensure(dc == n as usize + 2 && a == a0 + n as usize && b == b0 && g == g0 + 2, || {
                    format!("{name} arc {pos} n={n}: +{dc} crossings, a {a0}->{a}, b {b0}->{b}, twice genus {g0}->{g}")
                })?;
                if n <= 2 {
                    ensure(common::normalized_bracket(&d) == jones, || format!("{name} n={n}: bracket changed"))?;
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases over every arc of the three bases"))
}

fn primeification() -> Check {
    let start = Instant::now();
    let mut r = rng(seed_from_env(2505));
    let mut moves = 0;
    for i in 0..1000 {
        let code = random_composite(&mut r, 12, i % 2 == 0);
        let (out, log) = make_turaev_prime(&code).map_err(|e| format!("{code}: {e}"))?;
        ensure(subcodes(&out).is_empty() && is_reduced(&out) && is_connected(&out), || format!("{code} -> {out}: not prime"))?;
        ensure(exceptional_case(&out) != Ok(ExceptionalCase::Sphere2Braid), || format!("{code} -> {out}: 2-braid"))?;
        ensure(log.replay(&code) == Ok(out.clone()), || format!("{code}: log does not replay"))?;
        ensure(!is_realizable(&code) || is_realizable(&out), || format!("{code} -> {out}: realizability lost"))?;
        moves += log.len();
    }
    let t = within(start, Duration::from_secs(120))?;
    Ok(format!("1000 composites, {moves} moves, {t:.1?}"))
}

fn parser_properties() -> Check {
    let mut r = rng(seed_from_env(2606));
    for _ in 0..10_000 {
        let c = r.random_range(0..=10);
        let k = r.random_range(1..=3);
        let code = random_code(&mut r, c, k);
        let text = code.render();
        ensure(parse(&text) == Ok(code.clone()), || format!("{text} does not round-trip"))?;
        let canon = canonicalize(&code);
        ensure(canonicalize(&canon) == canon, || format!("{text}: canonicalize not idempotent"))?;
        let moved = scramble(&mut r, &code);
        ensure(canonicalize(&moved) == canon, || format!("{text} and {moved} canonicalize differently"))?;
    }
    Ok("10000 codes".into())
}

fn certificates() -> Check {
    let f8 = hyperbolicity_certificate(&p("O1+ U2- O3- U1+ O4+ U3- O2- U4+"));
    ensure(f8.verdict == Verdict::Certified, || format!("figure-eight {f8:?}"))?;
    let t = hyperbolicity_certificate(&p("O1+ U2+ O3+ U1+ O2+ U3+"));
    ensure(t.verdict == Verdict::NotCertified && t.reasons == [Reason::Sphere2Braid], || format!("trefoil {t:?}"))?;
    let v = hyperbolicity_certificate(&p("O1+ O2+ U1+ U2+"));
    ensure(v.verdict == Verdict::NotCertified, || format!("virtual trefoil {v:?}"))?;
    Ok(format!("virtual trefoil reasons {:?}", v.reasons))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("orientability criteria agree", orientability_equivalence),
        ("genus identity", genus_identity),
        ("regression set", regression_set),
        ("twist family law", d_sequence_law),
        ("primeification", primeification),
        ("parser and canonicalizer properties", parser_properties),
        ("certificates", certificates),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", 7 - failed, 7);
    if failed > 0 {
        std::process::exit(1);
    }
}
