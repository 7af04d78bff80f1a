//! Sub-tangles of a classical diagram that a single quadruple crossing can
//! replace.
//!
//! A set of crossings whose neighbourhood is a disk meeting the diagram in
//! `b` points is a `b`-ended tangle; the whole diagram cut open along one
//! edge counts, with `b = 2`. A quadruple crossing with some pairs of its
//! ends capped off outside is another. A set matches a capped crossing when
//! the crossing's six-crossing resolution simplifies to the set's diagram
//! inside the disk, or, for four ends, when both are rational with the same
//! bracket vector up to rotation and the unit `(-A^3)^k`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use serde::Serialize;

use crate::bracket::classical_pairings;
use crate::diagram::{CrossingType, Diagram, ResolutionPattern};
use crate::laurent::LaurentPoly;

use super::isotopy::PortTangle;

/// Bracket of a tangle: coefficient of each boundary matching, keyed by
/// partner arrays.
pub type TangleVector = BTreeMap<Vec<u8>, LaurentPoly>;

/// A quadruple crossing with capped ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CappedCrossing {
    pub crossing_type: CrossingType,
    pub heights: [u8; 4],
    /// Pairs of crossing ends joined outside the crossing.
    pub caps: Vec<(u8, u8)>,
    /// Uncapped ends, clockwise.
    pub open: Vec<u8>,
}

/// How a match was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// The crossing's resolution reaches the set's diagram by Reidemeister
    /// moves inside the disk.
    Isotopy,
    /// Both sides are rational tangles with equal bracket vectors, hence
    /// equal fractions.
    Fraction,
}

struct Library {
    shapes: Vec<CappedCrossing>,
    /// Codes of the diagrams each shape's resolution simplifies to.
    codes: HashMap<Vec<u32>, usize>,
    /// Rational four-ended shapes with their normalized vectors.
    rational: Vec<(usize, TangleVector)>,
}

/// Simplified diagrams kept per shape; the resolutions settle far below.
const DESCENDANT_LIMIT: usize = 5000;
/// Largest set a library diagram may stand for.
const MAX_SET: usize = 4;

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn union(p: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(p, a), find(p, b));
    p[ra] = rb;
}

/// Rescales by the unit that brings the lowest exponent into `0..3`.
fn normalize(v: &TangleVector) -> TangleVector {
    let m = v.values().filter_map(LaurentPoly::min_exp).min().unwrap_or(0);
    let k = m.div_euclid(3);
    let sign: num_bigint::BigInt = if k.rem_euclid(2) == 0 { 1.into() } else { (-1).into() };
    v.iter().map(|(key, c)| (key.clone(), c.shift(-3 * k).scale(&sign))).collect()
}

fn rotate(v: &TangleVector, r: usize) -> TangleVector {
    let b = v.keys().next().map_or(0, Vec::len);
    v.iter()
        .map(|(key, c)| {
            let mut out = vec![0u8; b];
            for (i, &j) in key.iter().enumerate() {
                out[(i + r) % b] = ((j as usize + r) % b) as u8;
            }
            (out, c.clone())
        })
        .collect()
}

/// Cap sets on the eight ends whose remaining ends can all reach the
/// outside: caps are pairwise noncrossing and each leaves only capped ends
/// on one of its sides.
fn cap_sets() -> Vec<Vec<(u8, u8)>> {
    let mut out: Vec<Vec<(u8, u8)>> = vec![Vec::new()];
    let pairs: Vec<(u8, u8)> = (0..8u8).flat_map(|a| (a + 1..8).map(move |b| (a, b))).collect();
    let crosses = |(a, b): (u8, u8), (c, d): (u8, u8)| {
        let inside = |x: u8| a < x && x < b;
        ![a, b].contains(&c) && ![a, b].contains(&d) && inside(c) != inside(d)
    };
    let mut frontier = vec![Vec::<(u8, u8)>::new()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for set in &frontier {
            for &p in &pairs {
                if set.last().is_some_and(|&l| p <= l) {
                    continue;
                }
                let used = |x: u8| set.iter().any(|&(a, b)| a == x || b == x);
                if used(p.0) || used(p.1) || set.iter().any(|&q| crosses(p, q)) {
                    continue;
                }
                let mut s = set.clone();
                s.push(p);
                next.push(s);
            }
        }
        frontier = next;
        out.extend(frontier.iter().cloned());
    }
    out.retain(|caps| {
        let capped = |x: u8| caps.iter().any(|&(a, b)| a == x || b == x);
        caps.iter().all(|&(a, b)| {
            let inner = (a + 1..b).all(capped);
            let outer = (0..8).filter(|&x| x < a || x > b).all(capped);
            inner || outer
        })
    });
    out
}

fn library() -> &'static Library {
    static L: OnceLock<Library> = OnceLock::new();
    L.get_or_init(|| {
        let mut lib = Library { shapes: Vec::new(), codes: HashMap::new(), rational: Vec::new() };
        for &t in CrossingType::ALL.iter() {
            for top in 0..4 {
                // Rotating the canonical heights gives every height assignment.
                let c = t.canonical_heights();
                let heights = [c[(4 - top) % 4], c[(5 - top) % 4], c[(6 - top) % 4], c[(7 - top) % 4]];
                for caps in cap_sets() {
                    let open: Vec<u8> = (0..8u8).filter(|x| !caps.iter().any(|&(a, b)| a == *x || b == *x)).collect();
                    let shape = CappedCrossing { crossing_type: t, heights, caps, open };
                    let resolved = PortTangle::from_capped(&shape, ResolutionPattern::canonical());
                    let index = lib.shapes.len();
                    let descendants = resolved.descendants(DESCENDANT_LIMIT);
                    for dsc in descendants.iter().filter(|t| t.crossings() <= MAX_SET) {
                        if let Some(code) = dsc.code(0) {
                            lib.codes.entry(code).or_insert(index);
                        }
                    }
                    if shape.open.len() == 4 && descendants.iter().any(PortTangle::peels_to_rational) {
                        lib.rational.push((index, normalize(&resolved.vector())));
                    }
                    lib.shapes.push(shape);
                }
            }
        }
        lib
    })
}

/// Global slots of the ends leaving `set`, clockwise around it, if its
/// neighbourhood is a disk.
pub fn boundary(d: &Diagram, set: &[usize]) -> Option<Vec<usize>> {
    let inside = |g: usize| set.contains(&d.slot(g).crossing);
    let internal = |g: usize| inside(d.partner_global(g));
    let next = |g: usize| {
        let s = d.slot(g);
        d.global_offset(s.crossing) + (s.index + 1) % d.crossing(s.crossing).ends().len()
    };
    let cut: Vec<usize> = set
        .iter()
        .flat_map(|&x| (0..d.crossing(x).ends().len()).map(move |k| d.global_offset(x) + k))
        .filter(|&g| !internal(g))
        .collect();
    let &start = cut.first()?;
    let mut order = vec![start];
    let mut g = start;
    loop {
        let mut h = next(g);
        while internal(h) {
            h = next(d.partner_global(h));
        }
        if h == start {
            break;
        }
        if order.len() > cut.len() {
            return None;
        }
        order.push(h);
        g = h;
    }
    (order.len() == cut.len()).then_some(order)
}

/// Bracket vector of the classical tangle cut out by `set`, with boundary
/// points numbered along `ends`.
pub fn tangle_vector(d: &Diagram, set: &[usize], ends: &[usize]) -> TangleVector {
    PortTangle::from_set(d, set, ends).vector()
}

impl PortTangle {
    /// State sum over the crossings, keyed by the boundary matching.
    pub(crate) fn vector(&self) -> TangleVector {
        let (n, b) = (self.crossings(), self.ports());
        let loop_factor = LaurentPoly::loop_factor();
        let mut v = TangleVector::new();
        for state in 0..(1u64 << n) {
            let mut p: Vec<usize> = (0..self.link.len()).collect();
            let mut exp = 0;
            for (x, h) in self.heights.iter().enumerate() {
                let (pairs, e) = classical_pairings(*h)[(state >> x & 1) as usize];
                exp += e;
                for (k, &to) in pairs.iter().enumerate() {
                    union(&mut p, 4 * x + k, 4 * x + to as usize);
                }
            }
            for (i, &j) in self.link.iter().enumerate() {
                union(&mut p, i, j);
            }
            let port = |j: usize| 4 * n + j;
            let mut key = vec![0u8; b];
            for (i, slot) in key.iter_mut().enumerate() {
                for j in 0..b {
                    if i != j && find(&mut p, port(i)) == find(&mut p, port(j)) {
                        *slot = j as u8;
                    }
                }
            }
            let roots: BTreeSet<usize> = (0..self.link.len()).map(|s| find(&mut p, s)).collect();
            let open: BTreeSet<usize> = (0..b).map(|j| find(&mut p, port(j))).collect();
            let loops = roots.len() - open.len();
            let term = &LaurentPoly::monomial(1, exp) * &loop_factor.pow(loops as u32);
            *v.entry(key).or_insert_with(LaurentPoly::zero) += &term;
        }
        v.retain(|_, c| !c.is_zero());
        v
    }
}

/// How a set of crossings becomes one quadruple crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangleMatch {
    pub shape: CappedCrossing,
    /// Boundary slots of the set, clockwise, aligned with `shape.open`.
    pub ends: Vec<usize>,
    pub certificate: Certificate,
}

/// A capped quadruple crossing equivalent to the tangle cut out by `set`.
pub fn match_tangle(d: &Diagram, set: &[usize]) -> Option<TangleMatch> {
    if set.is_empty() || set.len() > MAX_SET {
        return None;
    }
    if let Some(ends) = boundary(d, set) {
        return match_ends(d, set, &ends);
    }
    if set.len() != d.num_crossings() {
        return None;
    }
    whole_diagram_cuts(d).iter().find_map(|ends| match_ends(d, set, ends))
}

/// Ways to see a whole diagram as a closed-up tangle: cut open along one
/// edge, or with two edges of a common face taken out. The second tangle
/// meets its disk in the ends of the first edge, then those of the second.
fn whole_diagram_cuts(d: &Diagram) -> Vec<Vec<usize>> {
    let g = d.global_offset(0);
    let mut cuts = vec![vec![g, d.partner_global(g)]];
    for face in d.faces() {
        // A face's boundary runs from slot `g` to its partner at each corner.
        let edges: Vec<(usize, usize)> = face
            .corners
            .iter()
            .map(|c| {
                let g = d.global_offset(c.crossing) + (c.corner + 1) % d.crossing(c.crossing).ends().len();
                (g, d.partner_global(g))
            })
            .collect();
        for (i, &(g1, p1)) in edges.iter().enumerate() {
            for &(g2, p2) in &edges[i + 1..] {
                if g2 != p1 && p2 != g1 {
                    cuts.push(vec![g1, p1, g2, p2]);
                }
            }
        }
    }
    cuts
}

fn match_ends(d: &Diagram, set: &[usize], ends: &[usize]) -> Option<TangleMatch> {
    let b = ends.len();
    if ![2, 4, 6, 8].contains(&b) {
        return None;
    }
    let lib = library();
    let t = PortTangle::from_set(d, set, ends);
    for r in 0..b {
        if let Some(&i) = t.code(r).and_then(|c| lib.codes.get(&c)) {
            // Library boundary point j is the set's point j + r.
            let aligned = (0..b).map(|j| ends[(j + r) % b]).collect();
            return Some(TangleMatch { shape: lib.shapes[i].clone(), ends: aligned, certificate: Certificate::Isotopy });
        }
    }
    if b != 4 || !t.peels_to_rational() {
        return None;
    }
    let v = normalize(&t.vector());
    for r in 0..b {
        let w = rotate(&v, r);
        if let Some((i, _)) = lib.rational.iter().find(|(_, e)| *e == w) {
            // Boundary point i of the set sits at library position i + r.
            let mut aligned = vec![0; b];
            for (i, &g) in ends.iter().enumerate() {
                aligned[(i + r) % b] = g;
            }
            return Some(TangleMatch { shape: lib.shapes[*i].clone(), ends: aligned, certificate: Certificate::Fraction });
        }
    }
    None
}

/// Connected crossing sets of size 2 to `max` that match a capped
/// quadruple crossing, sorted by size descending.
pub fn tangle_sets(d: &Diagram, max: usize) -> Vec<(Vec<usize>, TangleMatch)> {
    let n = d.num_crossings();
    let neighbours: Vec<BTreeSet<usize>> = (0..n)
        .map(|x| {
            (0..d.crossing(x).ends().len())
                .map(|k| d.slot(d.partner_global(d.global_offset(x) + k)).crossing)
                .filter(|&y| y != x)
                .collect()
        })
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut layer: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
    let mut out = Vec::new();
    for _ in 2..=max {
        let mut next = Vec::new();
        for set in &layer {
            for &x in set {
                for &y in &neighbours[x] {
                    if set.contains(&y) {
                        continue;
                    }
                    let mut s = set.clone();
                    s.push(y);
                    s.sort_unstable();
                    if seen.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
        }
        layer = next;
        for s in &layer {
            if let Some(m) = match_tangle(d, s) {
                out.push((s.clone(), m));
            }
        }
    }
    out.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));
    out
}
