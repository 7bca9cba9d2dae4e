//! Seeded generators for test and benchmark corpora.
//!
//! [`plane_curve_code`] draws random closed polygons in the plane and reads
//! off their crossings, so its output is classical by construction and
//! independent of the rotation-system code paths it is used to check.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gausscode::{GaussCode, Passage, Sign, Strand};

/// Environment variable fixing the seed of generated corpora.
pub const SEED_ENV: &str = "TURAEV_SEED";

pub type CorpusRng = ChaCha8Rng;

/// Seed from `TURAEV_SEED`, or `default` when unset or unparsable.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

type Point = (f64, f64);

fn cross(a: Point, b: Point) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: Point, b: Point) -> Point {
    (a.0 - b.0, a.1 - b.1)
}

/// Parameters `(t, u)` where segments `p0p1` and `q0q1` cross properly.
fn segment_crossing(p0: Point, p1: Point, q0: Point, q1: Point) -> Option<(f64, f64)> {
    let r = sub(p1, p0);
    let s = sub(q1, q0);
    let denom = cross(r, s);
    if denom.abs() < 1e-12 {
        return None;
    }
    let qp = sub(q0, p0);
    let t = cross(qp, s) / denom;
    let u = cross(qp, r) / denom;
    (t > 1e-9 && t < 1.0 - 1e-9 && u > 1e-9 && u < 1.0 - 1e-9).then_some((t, u))
}

struct Hit {
    component: usize,
    segment: usize,
    t: f64,
    label: u32,
    strand: Strand,
}

/// Reads the signed Gauss code of closed polygons with random over/under
/// choices at each crossing. Components without crossings become `0`.
///
/// Returns `None` when the configuration is degenerate (a crossing through a
/// polygon vertex, or three segments meeting in a point).
pub fn code_from_polygons<R: Rng>(polygons: &[Vec<Point>], rng: &mut R) -> Option<GaussCode> {
    let segs: Vec<(usize, usize, Point, Point)> = polygons
        .iter()
        .enumerate()
        .flat_map(|(ci, poly)| {
            let n = poly.len();
            (0..n).map(move |i| (ci, i, poly[i], poly[(i + 1) % n]))
        })
        .collect();
    let mut hits = Vec::new();
    let mut signs = Vec::new();
    let mut label = 0u32;
    for a in 0..segs.len() {
        for b in a + 1..segs.len() {
            let (ca, ia, p0, p1) = segs[a];
            let (cb, ib, q0, q1) = segs[b];
            if ca == cb {
                let n = polygons[ca].len();
                if (ia + 1) % n == ib || (ib + 1) % n == ia {
                    continue;
                }
            }
            let Some((t, u)) = segment_crossing(p0, p1, q0, q1) else {
                continue;
            };
            label += 1;
            let a_over = rng.random_bool(0.5);
            let (over_dir, under_dir) = if a_over {
                (sub(p1, p0), sub(q1, q0))
            } else {
                (sub(q1, q0), sub(p1, p0))
            };
            let sign = if cross(over_dir, under_dir) > 0.0 {
                Sign::Plus
            } else {
                Sign::Minus
            };
            signs.push(sign);
            let (sa, sb) = if a_over {
                (Strand::Over, Strand::Under)
            } else {
                (Strand::Under, Strand::Over)
            };
            hits.push(Hit { component: ca, segment: ia, t, label, strand: sa });
            hits.push(Hit { component: cb, segment: ib, t: u, label, strand: sb });
        }
    }
    hits.sort_by(|x, y| {
        (x.component, x.segment)
            .cmp(&(y.component, y.segment))
            .then(x.t.partial_cmp(&y.t).expect("finite"))
    });
    for w in hits.windows(2) {
        if (w[0].component, w[0].segment) == (w[1].component, w[1].segment)
            && (w[1].t - w[0].t).abs() < 1e-9
        {
            return None;
        }
    }
    let mut components = vec![Vec::new(); polygons.len()];
    for h in hits {
        let sign = signs[h.label as usize - 1];
        components[h.component].push(Passage::new(h.label, h.strand, sign));
    }
    GaussCode::new(components).ok()
}

/// A random classical diagram: `components` random polygons with
/// `vertices` corners each.
pub fn plane_curve_code<R: Rng>(rng: &mut R, components: usize, vertices: usize) -> GaussCode {
    loop {
        let polys: Vec<Vec<Point>> = (0..components)
            .map(|_| {
                (0..vertices)
                    .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
                    .collect()
            })
            .collect();
        if let Some(code) = code_from_polygons(&polys, rng) {
            return code;
        }
    }
}

/// A random classical, connected code with between `min` and `max` crossings.
/// Reducedness is required when `reduced` is set.
pub fn classical_code<R: Rng>(rng: &mut R, min: usize, max: usize, reduced: bool) -> GaussCode {
    loop {
        let components = if rng.random_bool(0.75) { 1 } else { 2 };
        let vertices = rng.random_range(3..=6);
        let code = plane_curve_code(rng, components, vertices);
        let c = code.crossing_count();
        if c < min || c > max || code.has_empty_component() {
            continue;
        }
        if !crate::gausscode::is_connected(&code) {
            continue;
        }
        if reduced && !crate::gausscode::is_reduced(&code) {
            continue;
        }
        return code;
    }
}

fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// A uniformly shuffled signed code with `crossings` crossings split over
/// `components` nonempty components (fewer when there are too few entries).
/// Not necessarily classical.
pub fn random_code<R: Rng>(rng: &mut R, crossings: usize, components: usize) -> GaussCode {
    let mut word: Vec<u32> = (1..=crossings as u32).flat_map(|l| [l, l]).collect();
    word.shuffle(rng);
    let signs: Vec<Sign> = (0..crossings).map(|_| random_sign(rng)).collect();
    let first_over: Vec<bool> = (0..crossings).map(|_| rng.random_bool(0.5)).collect();
    let mut seen = vec![false; crossings + 1];
    let passages: Vec<Passage> = word
        .iter()
        .map(|&l| {
            let first = !seen[l as usize];
            seen[l as usize] = true;
            let over = first == first_over[l as usize - 1];
            let strand = if over { Strand::Over } else { Strand::Under };
            Passage::new(l, strand, signs[l as usize - 1])
        })
        .collect();
    let k = components.clamp(1, passages.len().max(1));
    let mut cuts: Vec<usize> = if passages.is_empty() {
        Vec::new()
    } else {
        let mut all: Vec<usize> = (1..passages.len()).collect();
        all.shuffle(rng);
        all.truncate(k - 1);
        all
    };
    cuts.sort_unstable();
    let mut comps = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(passages.len())) {
        comps.push(passages[prev..c].to_vec());
        prev = c;
    }
    GaussCode::new(comps).expect("generated code is valid")
}

/// Random relabeling and cyclic rotation of every component, plus a random
/// permutation of the components.
pub fn scramble<R: Rng>(rng: &mut R, code: &GaussCode) -> GaussCode {
    let mut labels = code.labels();
    let mut targets: Vec<u32> = (1..=(3 * labels.len().max(1)) as u32).collect();
    targets.shuffle(rng);
    let map: std::collections::BTreeMap<u32, u32> =
        labels.drain(..).zip(targets).collect();
    let mut comps: Vec<Vec<Passage>> = code
        .components()
        .iter()
        .map(|c| {
            let mut c: Vec<Passage> = c
                .iter()
                .map(|p| Passage { label: map[&p.label], ..*p })
                .collect();
            if !c.is_empty() {
                let r = rng.random_range(0..c.len());
                c.rotate_left(r);
            }
            c
        })
        .collect();
    comps.shuffle(rng);
    GaussCode::new(comps).expect("relabeling preserves validity")
}

/// Nested connected sums of random pieces with at most `max_crossings`
/// crossings in total. Pieces are planar when `classical` is set, arbitrary
/// signed codes otherwise.
pub fn random_composite<R: Rng>(rng: &mut R, max_crossings: usize, classical: bool) -> GaussCode {
    use crate::moves::{compose, ArcRef};
    let piece = |rng: &mut R, budget: usize| -> GaussCode {
        let hi = budget.clamp(1, 5);
        if classical {
            classical_code(rng, 1.min(hi), hi, false)
        } else {
            let c = rng.random_range(1..=hi);
            let k = if rng.random_bool(0.8) { 1 } else { 2 };
            loop {
                let code = random_code(rng, c, k);
                if crate::gausscode::is_connected(&code) {
                    return code;
                }
            }
        }
    };
    let random_arc = |rng: &mut R, code: &GaussCode| {
        let comp = rng.random_range(0..code.component_count());
        let len = code.components()[comp].len().max(1);
        ArcRef::new(comp, rng.random_range(0..len))
    };
    let mut code = piece(rng, max_crossings.min(5));
    let parts = rng.random_range(2..=4);
    for _ in 1..parts {
        let budget = max_crossings.saturating_sub(code.crossing_count());
        if budget == 0 {
            break;
        }
        let mut other = piece(rng, budget);
        if other.crossing_count() > budget {
            continue;
        }
        if rng.random_bool(0.3) {
            // Nest: sum the new piece with a copy of itself first when room allows.
            if 2 * other.crossing_count() <= budget {
                let (a, b) = (random_arc(rng, &other), random_arc(rng, &other));
                other = compose(&other, &other.clone(), a, b).expect("arcs in range");
            }
        }
        let (a, b) = (random_arc(rng, &code), random_arc(rng, &other));
        code = compose(&code, &other, a, b).expect("arcs in range");
    }
    code
}

/// Every single-component signed Gauss code with exactly `crossings`
/// crossings, labels numbered by first appearance.
pub fn all_knot_codes(crossings: usize) -> Vec<GaussCode> {
    let mut words = Vec::new();
    let mut word = Vec::with_capacity(2 * crossings);
    fn fill(word: &mut Vec<u32>, counts: &mut Vec<u8>, next: u32, n: usize, out: &mut Vec<Vec<u32>>) {
        if word.len() == 2 * n {
            out.push(word.clone());
            return;
        }
        for l in 1..next {
            if counts[l as usize] == 1 {
                counts[l as usize] = 2;
                word.push(l);
                fill(word, counts, next, n, out);
                word.pop();
                counts[l as usize] = 1;
            }
        }
        if (next as usize) <= n {
            counts[next as usize] = 1;
            word.push(next);
            fill(word, counts, next + 1, n, out);
            word.pop();
            counts[next as usize] = 0;
        }
    }
    let mut counts = vec![0u8; crossings + 1];
    fill(&mut word, &mut counts, 1, crossings, &mut words);
    let mut out = Vec::new();
    for w in &words {
        for letters in 0u32..(1 << crossings) {
            for signs in 0u32..(1 << crossings) {
                let mut seen = vec![false; crossings + 1];
                let comp: Vec<Passage> = w
                    .iter()
                    .map(|&l| {
                        let i = l as usize - 1;
                        let first = !seen[l as usize];
                        seen[l as usize] = true;
                        let over = first == (letters >> i & 1 == 0);
                        let sign = if signs >> i & 1 == 0 { Sign::Plus } else { Sign::Minus };
                        Passage::new(l, if over { Strand::Over } else { Strand::Under }, sign)
                    })
                    .collect();
                out.push(GaussCode::new(vec![comp]).expect("valid by construction"));
            }
        }
    }
    out
}
