//! Seeded random connected quadruple-crossing diagrams.
//!
//! A diagram grows one crossing at a time: the new crossing is placed in a
//! random face and spliced into 1 to 4 distinct edges of that face's
//! boundary; its remaining ends close up in noncrossing petals. Every
//! intermediate diagram is connected and planar by construction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bracket::Splitting;
use crate::diagram::{Crossing, Diagram, DiagramError, Label, Slot};

/// Random connected diagram with `q >= 1` order-4 crossings and random heights.
pub fn random_quad_diagram<R: Rng + ?Sized>(q: usize, rng: &mut R) -> Diagram {
    assert!(q >= 1, "at least one crossing");
    let first = *Splitting::all().choose(rng).expect("nonempty");
    let mut links: Vec<(Slot, Slot)> = first
        .pairs()
        .into_iter()
        .map(|(a, b)| (Slot { crossing: 0, index: a as usize }, Slot { crossing: 0, index: b as usize }))
        .collect();
    let mut heights = vec![random_heights(rng)];
    let mut d = Diagram::from_links(heights.clone(), &links).expect("noncrossing closure is planar");
    while heights.len() < q {
        let x = heights.len();
        heights.push(random_heights(rng));
        let faces = d.faces();
        let face = faces.choose(rng).expect("faces exist");
        // Boundary edge k of the face runs from its corner k to corner k+1.
        let corners = &face.corners;
        let m = corners.len();
        let edges: Vec<(Slot, Slot)> = (0..m)
            .map(|k| {
                let c = corners[k];
                let len = d.crossing(c.crossing).ends().len();
                let from = Slot { crossing: c.crossing, index: (c.corner + 1) % len };
                (from, d.partner(from))
            })
            .collect();
        let mut distinct: Vec<usize> = Vec::new();
        for k in 0..m {
            let (a, b) = edges[k];
            if !distinct.iter().any(|&j| edges[j] == (b, a) || edges[j] == (a, b)) {
                distinct.push(k);
            }
        }
        let t = rng.gen_range(1..=distinct.len().min(4));
        let mut chosen: Vec<usize> = distinct.choose_multiple(rng, t).copied().collect();
        chosen.sort_unstable();
        let gaps = random_even_gaps(8 - 2 * t, t, rng);
        let offset = rng.gen_range(0..8);
        let mut blocks = Vec::with_capacity(t);
        let mut p = offset;
        for g in &gaps {
            blocks.push(p % 8);
            p += 2 + g;
        }
        let mut petals: Vec<(usize, usize)> = Vec::new();
        for (j, g) in gaps.iter().enumerate() {
            let start = blocks[j] + 2;
            let pts: Vec<usize> = (0..*g).map(|i| (start + i) % 8).collect();
            petals.extend(random_noncrossing(&pts, rng));
        }
        let candidate = |reverse_blocks: bool, swap_in_block: bool| -> Option<(Diagram, Vec<(Slot, Slot)>)> {
            let mut new_links: Vec<(Slot, Slot)> = links
                .iter()
                .copied()
                .filter(|&(a, b)| !chosen.iter().any(|&k| edges[k] == (a, b) || edges[k] == (b, a)))
                .collect();
            for (i, &k) in chosen.iter().enumerate() {
                let block = if reverse_blocks { blocks[t - 1 - i] } else { blocks[i] };
                let (mut s1, mut s2) = (block, (block + 1) % 8);
                if swap_in_block {
                    std::mem::swap(&mut s1, &mut s2);
                }
                let (a, b) = edges[k];
                new_links.push((a, Slot { crossing: x, index: s1 }));
                new_links.push((Slot { crossing: x, index: s2 }, b));
            }
            for &(a, b) in &petals {
                new_links.push((Slot { crossing: x, index: a }, Slot { crossing: x, index: b }));
            }
            Diagram::from_links(heights.clone(), &new_links).ok().map(|d| (d, new_links))
        };
        match [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .find_map(|(r, s)| candidate(r, s))
        {
            Some((nd, nl)) => {
                d = nd;
                links = nl;
            }
            // Resample this crossing.
            None => {
                heights.pop();
            }
        }
    }
    d
}

fn random_heights<R: Rng + ?Sized>(rng: &mut R) -> Vec<u8> {
    let mut h = vec![1, 2, 3, 4];
    h.shuffle(rng);
    h
}

/// `parts` even numbers summing to `total`.
fn random_even_gaps<R: Rng + ?Sized>(total: usize, parts: usize, rng: &mut R) -> Vec<usize> {
    let mut g = vec![0; parts];
    for _ in 0..total / 2 {
        let i = rng.gen_range(0..parts);
        g[i] += 2;
    }
    g
}

/// Random noncrossing perfect matching of consecutive points.
fn random_noncrossing<R: Rng + ?Sized>(pts: &[usize], rng: &mut R) -> Vec<(usize, usize)> {
    if pts.is_empty() {
        return Vec::new();
    }
    let choices: Vec<usize> = (1..pts.len()).step_by(2).collect();
    let j = *choices.choose(rng).expect("even length");
    let mut out = vec![(pts[0], pts[j])];
    out.extend(random_noncrossing(&pts[1..j], rng));
    out.extend(random_noncrossing(&pts[j + 1..], rng));
    out
}

/// Twist blocks of a rational tangle, alternately horizontal and vertical.
struct TangleBuilder {
    crossings: Vec<Crossing>,
    nw: Label,
    ne: Label,
    sw: Label,
    se: Label,
    next: Label,
}

impl TangleBuilder {
    /// The `0` tangle: arcs NW-NE and SW-SE.
    fn zero() -> Self {
        TangleBuilder { crossings: Vec::new(), nw: 1, ne: 1, sw: 2, se: 2, next: 3 }
    }

    fn fresh(&mut self) -> Label {
        self.next += 1;
        self.next - 1
    }

    /// Half twist of the NE and SE ends; `over` puts the strand from the
    /// old NE end on top.
    fn horizontal(&mut self, over: bool) {
        let (a, b) = (self.fresh(), self.fresh());
        let h = if over { vec![1, 2] } else { vec![2, 1] };
        self.crossings.push(Crossing::new(vec![self.ne, a, b, self.se], h).expect("order 2"));
        self.ne = a;
        self.se = b;
    }

    /// Half twist of the SW and SE ends; `over` puts the strand from the
    /// old SW end on top.
    fn vertical(&mut self, over: bool) {
        let (a, b) = (self.fresh(), self.fresh());
        let h = if over { vec![1, 2] } else { vec![2, 1] };
        self.crossings.push(Crossing::new(vec![self.sw, self.se, b, a], h).expect("order 2"));
        self.sw = a;
        self.se = b;
    }

    fn relabel(&mut self, from: Label, to: Label) {
        for c in &mut self.crossings {
            *c = Crossing::new(
                c.ends().iter().map(|&l| if l == from { to } else { l }).collect(),
                c.heights().to_vec(),
            )
            .expect("same shape");
        }
    }

    /// Joins NW to NE and SW to SE.
    fn numerator(mut self) -> Result<Diagram, DiagramError> {
        let (nw, ne, sw, se) = (self.nw, self.ne, self.sw, self.se);
        self.relabel(ne, nw);
        self.relabel(se, sw);
        Diagram::new(self.crossings)
    }

    /// Joins NW to SW and NE to SE.
    fn denominator(mut self) -> Result<Diagram, DiagramError> {
        let (nw, ne, sw, se) = (self.nw, self.ne, self.sw, self.se);
        self.relabel(sw, nw);
        self.relabel(se, ne);
        Diagram::new(self.crossings)
    }
}

/// Alternating diagram with Conway notation `a1 a2 ... ak` (all positive):
/// `a1` horizontal twists, then `a2` vertical, alternating, closed across
/// the last block so that it survives.
pub fn rational_diagram(twists: &[usize]) -> Result<Diagram, DiagramError> {
    if twists.is_empty() || twists.contains(&0) {
        return Err(DiagramError::Parse { pos: 0, msg: "Conway notation needs positive twist counts".into() });
    }
    let mut t = TangleBuilder::zero();
    for (i, &a) in twists.iter().enumerate() {
        for _ in 0..a {
            // Equal `over` flags in both directions keep the diagram alternating.
            if i % 2 == 0 {
                t.horizontal(true);
            } else {
                t.vertical(true);
            }
        }
    }
    if twists.len() % 2 == 1 {
        t.numerator()
    } else {
        t.denominator()
    }
}

/// Standard alternating diagram of the 2-braid knot or link with `n >= 2` crossings.
pub fn two_braid(n: usize) -> Result<Diagram, DiagramError> {
    rational_diagram(&[n])
}
