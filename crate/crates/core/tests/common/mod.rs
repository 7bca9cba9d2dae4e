//! Test oracles that do not go through the library's own invariants.
#![allow(dead_code)]

use std::collections::BTreeMap;

use turaev::gausscode::{GaussCode, Sign, Strand};

/// Laurent polynomial in A, exponent -> coefficient.
pub type Laurent = BTreeMap<i32, i64>;

fn mul(p: &Laurent, q: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&e, &c) in p {
        for (&f, &d) in q {
            *out.entry(e + f).or_default() += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// PD-style crossing list built straight from a signed Gauss code. Works for
/// virtual codes too: virtual crossings never appear in it. Edge `t` leaves
/// the `t`-th passage; each row runs counterclockwise from the incoming
/// under edge.
pub fn local_pd(code: &GaussCode) -> Vec<[u32; 4]> {
    let mut ends: BTreeMap<u32, (Option<(u32, u32)>, Option<(u32, u32)>, Sign)> = BTreeMap::new();
    let mut base = 0u32;
    for comp in code.components() {
        let n = comp.len() as u32;
        for (i, p) in comp.iter().enumerate() {
            let i = i as u32;
            let edges = (base + (i + n - 1) % n + 1, base + i + 1);
            let e = ends.entry(p.label).or_insert((None, None, p.sign));
            match p.strand {
                Strand::Over => e.0 = Some(edges),
                Strand::Under => e.1 = Some(edges),
            }
        }
        base += n;
    }
    ends.values()
        .map(|&(o, u, sign)| {
            let ((oi, oo), (ui, uo)) = (o.unwrap(), u.unwrap());
            match sign {
                Sign::Plus => [ui, oo, uo, oi],
                Sign::Minus => [ui, oi, uo, oo],
            }
        })
        .collect()
}

fn loops_of(pd: &[[u32; 4]], choose_a: impl Fn(usize) -> bool) -> usize {
    let max = pd.iter().flatten().copied().max().unwrap_or(0) as usize;
    let mut parent: Vec<usize> = (0..=max).collect();
    for (x, &[i, j, k, l]) in pd.iter().enumerate() {
        let pairs = if choose_a(x) { [(i, j), (k, l)] } else { [(i, l), (j, k)] };
        for (u, v) in pairs {
            let (ru, rv) = (find(&mut parent, u as usize), find(&mut parent, v as usize));
            parent[ru] = rv;
        }
    }
    let used: std::collections::BTreeSet<u32> = pd.iter().flatten().copied().collect();
    used.iter().filter(|&&e| find(&mut parent, e as usize) == e as usize).count()
}

/// Loop counts of the all-A and all-B states.
pub fn state_loops(code: &GaussCode) -> (usize, usize) {
    let pd = local_pd(code);
    if pd.is_empty() {
        return (1, 1);
    }
    (loops_of(&pd, |_| true), loops_of(&pd, |_| false))
}

/// Kauffman bracket by the state sum over a PD code. At `X[i,j,k,l]` the
/// A-smoothing joins i with j and k with l; the B-smoothing joins i with l
/// and j with k.
pub fn bracket(pd: &[[u32; 4]]) -> Laurent {
    if pd.is_empty() {
        return Laurent::from([(0, 1)]);
    }
    let d = Laurent::from([(2, -1), (-2, -1)]);
    let mut d_pow = vec![Laurent::from([(0, 1)])];
    for i in 1..=pd.len() {
        d_pow.push(mul(&d_pow[i - 1], &d));
    }
    let mut total = Laurent::new();
    for state in 0u64..(1 << pd.len()) {
        let a = pd.len() as i32 - 2 * state.count_ones() as i32;
        let loops = loops_of(pd, |x| state >> x & 1 == 0);
        for (&e, &c) in &d_pow[loops - 1] {
            *total.entry(e + a).or_default() += c;
        }
    }
    total.retain(|_, c| *c != 0);
    total
}

/// Writhe-normalized bracket `(-A^3)^(-w) <D>`, an invariant of the link.
pub fn normalized_bracket(code: &GaussCode) -> Laurent {
    let pd = local_pd(code);
    let w: i32 = code
        .labels()
        .iter()
        .map(|&l| if code.sign_of(l) == Some(Sign::Plus) { 1 } else { -1 })
        .sum();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let factor = Laurent::from([(-3 * w, sign)]);
    mul(&factor, &bracket(&pd))
}

/// True when the Jones polynomial is trivial.
pub fn has_trivial_jones(code: &GaussCode) -> bool {
    normalized_bracket(code) == Laurent::from([(0, 1)])
}
