//! Flypes of classical diagrams, and the set of diagrams they reach.
//!
//! A flype takes a crossing `x` beside a tangle `T` (four ends, two of them
//! joined to `x`), turns `T` over about the axis through `x`, and moves `x` to
//! the far side of `T`. Knot type, alternation and reducedness survive.

use std::collections::{BTreeSet, VecDeque};

use crate::diagram::{Diagram, Slot};

/// The tangle side of a flype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlypeSite {
    pub crossing: usize,
    /// Corner of `x` facing the tangle's first side; the tangle is joined to
    /// `x` through ends `corner + 1` and `corner + 2`.
    pub corner: usize,
    /// Global slots of the tangle's ends on its two remaining edges, first
    /// the one on the face at `corner`.
    pub far: [usize; 2],
    pub inside: Vec<usize>,
}

/// Every flype site of a classical diagram whose tangle has at least two
/// crossings; one-crossing tangles only move a crossing along a twist.
pub fn flype_sites(d: &Diagram) -> Vec<FlypeSite> {
    let faces = d.faces();
    let cf = d.corner_faces();
    let mut out = Vec::new();
    let edge_side = |g: usize| -> usize {
        // The face on the far side of the edge leaving global slot `g` going
        // clockwise around its crossing is at corner `g`.
        cf[g]
    };
    for x in 0..d.num_crossings() {
        let o = d.global_offset(x);
        for corner in 0..4 {
            let a_face = cf[o + corner];
            let b_face = cf[o + (corner + 2) % 4];
            let e1 = o + (corner + 1) % 4;
            let e2 = o + (corner + 2) % 4;
            // Boundary edges of a face as (slot, slot at the other end): the
            // face lies at the corner before `slot` going clockwise.
            let boundary = |f: usize| -> Vec<(usize, usize)> {
                faces[f]
                    .corners
                    .iter()
                    .map(|c| {
                        let g = d.global_offset(c.crossing) + (c.corner + 1) % 4;
                        (g, d.partner_global(g))
                    })
                    .collect()
            };
            let touches_x = |(g, p): (usize, usize)| d.slot(g).crossing == x || d.slot(p).crossing == x;
            for a in boundary(a_face) {
                if touches_x(a) {
                    continue;
                }
                // Across edge (g, p) from the face at the corner before g lies
                // the face at the corner starting at g.
                let d_face = edge_side(a.0);
                for b in boundary(b_face) {
                    if touches_x(b) || b == a || (b.1, b.0) == a || edge_side(b.0) != d_face {
                        continue;
                    }
                    if let Some(site) = tangle(d, x, corner, [e1, e2], a, b) {
                        if !out.contains(&site) {
                            out.push(site);
                        }
                    }
                }
            }
        }
    }
    out
}

fn tangle(
    d: &Diagram,
    x: usize,
    corner: usize,
    [e1, e2]: [usize; 2],
    a: (usize, usize),
    b: (usize, usize),
) -> Option<FlypeSite> {
    let cut: Vec<usize> = vec![e1, d.partner_global(e1), e2, d.partner_global(e2), a.0, a.1, b.0, b.1];
    let start = d.slot(d.partner_global(e1)).crossing;
    let mut inside = vec![false; d.num_crossings()];
    inside[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(y) = queue.pop_front() {
        let o = d.global_offset(y);
        for k in 0..d.crossing(y).ends().len() {
            if cut.contains(&(o + k)) {
                continue;
            }
            let z = d.slot(d.partner_global(o + k)).crossing;
            if !inside[z] {
                inside[z] = true;
                queue.push_back(z);
            }
        }
    }
    let is_in = |g: usize| inside[d.slot(g).crossing];
    let ends_ok = is_in(d.partner_global(e2)) && is_in(a.0) != is_in(a.1) && is_in(b.0) != is_in(b.1);
    let members: Vec<usize> = (0..d.num_crossings()).filter(|&y| inside[y]).collect();
    if inside[x] || !ends_ok || members.len() < 2 || members.len() + 1 == d.num_crossings() {
        return None;
    }
    let far = [if is_in(a.0) { a.0 } else { a.1 }, if is_in(b.0) { b.0 } else { b.1 }];
    Some(FlypeSite { crossing: x, corner, far, inside: members })
}

/// Applies a flype found by `flype_sites`.
pub fn flype(d: &Diagram, site: &FlypeSite) -> Diagram {
    let x = site.crossing;
    let c = site.corner;
    let o = d.global_offset(x);
    let mut inside = vec![false; d.num_crossings()];
    for &y in &site.inside {
        inside[y] = true;
    }
    // Turning the tangle over reverses every inside rotation and swaps heights.
    let map = |g: usize| {
        let s = d.slot(g);
        if inside[s.crossing] {
            Slot { crossing: s.crossing, index: (4 - s.index) % 4 }
        } else {
            s
        }
    };
    let heights: Vec<Vec<u8>> = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(y, cr)| {
            let h = cr.heights();
            if inside[y] {
                vec![h[1], h[0]]
            } else {
                h.to_vec()
            }
        })
        .collect();
    let slot_x = |k: usize| o + (c + k) % 4;
    let (nw, ne, se, sw) = (slot_x(0), slot_x(1), slot_x(2), slot_x(3));
    let t1 = d.partner_global(ne);
    let t2 = d.partner_global(se);
    let [ta, tb] = site.far;
    let (oa, ob) = (d.partner_global(ta), d.partner_global(tb));
    let special: BTreeSet<usize> = [nw, ne, se, sw, t1, t2, ta, tb, oa, ob].into_iter().collect();
    let mut links: Vec<(Slot, Slot)> = Vec::new();
    for g in 0..d.num_slots() {
        let p = d.partner_global(g);
        if g < p && !special.contains(&g) && !special.contains(&p) {
            links.push((map(g), map(p)));
        }
    }
    let outer = |g: usize| map(g);
    let xs = |g: usize| d.slot(g);
    links.extend([
        (outer(d.partner_global(nw)), map(t2)),
        (outer(d.partner_global(sw)), map(t1)),
        (xs(nw), map(tb)),
        (xs(sw), map(ta)),
        (xs(ne), outer(oa)),
        (xs(se), outer(ob)),
    ]);
    Diagram::from_links(heights, &links).expect("a flype keeps the diagram planar and connected")
}

/// Canonical code of a diagram up to relabelling, crossing order and
/// rotation of the sphere (but not reflection).
pub fn canonical_code(d: &Diagram) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for start in 0..d.num_slots() {
        let code = code_from(d, start);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    best.unwrap_or_default()
}

/// Breadth-first relabelling: the crossing of `start` becomes 0 with
/// `start` as its slot 0; neighbours are numbered as first reached.
fn code_from(d: &Diagram, start: usize) -> Vec<u32> {
    let n = d.num_crossings();
    let mut number = vec![usize::MAX; n];
    let mut base = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    let s = d.slot(start);
    number[s.crossing] = 0;
    base[s.crossing] = s.index;
    order.push(s.crossing);
    let mut i = 0;
    while i < order.len() {
        let y = order[i];
        let len = d.crossing(y).ends().len();
        for k in 0..len {
            let g = d.global_offset(y) + (base[y] + k) % len;
            let p = d.slot(d.partner_global(g));
            if number[p.crossing] == usize::MAX {
                number[p.crossing] = order.len();
                base[p.crossing] = p.index;
                order.push(p.crossing);
            }
        }
        i += 1;
    }
    let mut code = Vec::new();
    for &y in &order {
        let cr = d.crossing(y);
        let len = cr.ends().len();
        code.push(len as u32);
        for k in 0..len / 2 {
            code.push(cr.heights()[(base[y] + k) % (len / 2)] as u32);
        }
        for k in 0..len {
            let g = d.global_offset(y) + (base[y] + k) % len;
            let p = d.slot(d.partner_global(g));
            let plen = d.crossing(p.crossing).ends().len();
            code.push(number[p.crossing] as u32);
            code.push(((p.index + plen - base[p.crossing]) % plen) as u32);
        }
    }
    code
}

/// Diagrams reachable from `d` by flypes, `d` first, at most `limit`.
pub fn flype_orbit(d: &Diagram, limit: usize) -> Vec<Diagram> {
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([canonical_code(d)]);
    let mut out = vec![d.clone()];
    let mut i = 0;
    while i < out.len() && out.len() < limit {
        let cur = out[i].clone();
        for site in flype_sites(&cur) {
            let next = flype(&cur, &site);
            if seen.insert(canonical_code(&next)) {
                out.push(next);
                if out.len() == limit {
                    break;
                }
            }
        }
        i += 1;
    }
    out
}
