//! Classical tangle diagrams in a disk, with the Reidemeister moves that
//! keep their boundary fixed.
//!
//! Items `0..4n` are the slots of `n` crossings, slot `4x + k` being end `k`
//! of crossing `x` clockwise; items `4n..` are the boundary points
//! clockwise. `link` pairs every item with the one it is joined to.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::diagram::{Diagram, ResolutionPattern};

use super::tangle::CappedCrossing;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PortTangle {
    /// Heights of the strands through slots 0 and 1; 1 is on top.
    pub heights: Vec<[u8; 2]>,
    pub link: Vec<usize>,
}

fn rot(k: usize, by: usize) -> usize {
    (k + by) % 4
}

impl PortTangle {
    pub fn crossings(&self) -> usize {
        self.heights.len()
    }

    pub fn ports(&self) -> usize {
        self.link.len() - 4 * self.crossings()
    }

    fn is_slot(&self, i: usize) -> bool {
        i < 4 * self.crossings()
    }

    fn height(&self, s: usize) -> u8 {
        self.heights[s / 4][s % 2]
    }

    /// The classical crossings of `set`, cut out of `d` along `ends`.
    pub fn from_set(d: &Diagram, set: &[usize], ends: &[usize]) -> Self {
        let index: BTreeMap<usize, usize> = set
            .iter()
            .enumerate()
            .flat_map(|(i, &x)| (0..4).map(move |k| (d.global_offset(x) + k, 4 * i + k)))
            .collect();
        let n = set.len();
        let mut link = vec![usize::MAX; 4 * n + ends.len()];
        for (&g, &i) in &index {
            if let Some(&j) = index.get(&d.partner_global(g)) {
                link[i] = j;
            }
        }
        for (j, g) in ends.iter().enumerate() {
            link[index[g]] = 4 * n + j;
            link[4 * n + j] = index[g];
        }
        let heights = set.iter().map(|&x| [d.crossing(x).heights()[0], d.crossing(x).heights()[1]]).collect();
        PortTangle { heights, link }
    }

    /// The resolution of a capped quadruple crossing into six classical
    /// crossings, its open ends as the boundary.
    pub fn from_capped(shape: &CappedCrossing, pattern: &ResolutionPattern) -> Self {
        let n = pattern.crossings.len();
        // Slot items on segment k of each strand; segment 0 starts at end
        // `strand`, the last one stops at end `strand + 4`.
        let mut seg_items: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut heights = Vec::with_capacity(n);
        for (x, pc) in pattern.crossings.iter().enumerate() {
            for (r, &(strand, fwd)) in pc.rays.iter().enumerate() {
                seg_items.entry((strand, pc.position[strand] + usize::from(fwd))).or_default().push(4 * x + r);
            }
            let (s0, s1) = (pc.rays[0].0, pc.rays[1].0);
            heights.push(if shape.heights[s0] < shape.heights[s1] { [1, 2] } else { [2, 1] });
        }
        let at_end = |e: usize| if e < 4 { (e, 0) } else { (e - 4, pattern.along[e - 4].len()) };
        let ports = shape.open.len();
        let mut link = vec![usize::MAX; 4 * n + ports];
        let join = |link: &mut Vec<usize>, a: usize, b: usize| {
            link[a] = b;
            link[b] = a;
        };
        for items in seg_items.values() {
            if let [a, b] = items[..] {
                join(&mut link, a, b);
            }
        }
        let end_item = |e: u8| seg_items[&at_end(e as usize)][0];
        for &(e, f) in &shape.caps {
            join(&mut link, end_item(e), end_item(f));
        }
        for (j, &e) in shape.open.iter().enumerate() {
            join(&mut link, end_item(e), 4 * n + j);
        }
        PortTangle { heights, link }
    }

    /// Deletes the crossings of `gone`, letting every strand run straight
    /// through them. `None` if a closed loop would be left behind.
    fn remove(&self, gone: &[usize]) -> Option<PortTangle> {
        self.remove_routed(gone, |k| rot(k, 2))
    }

    /// Deletes the crossings of `gone`; a path entering one of them at end
    /// `k` leaves at end `route(k)`.
    fn remove_routed(&self, gone: &[usize], route: impl Fn(usize) -> usize) -> Option<PortTangle> {
        let n = self.crossings();
        let is_gone = |i: usize| self.is_slot(i) && gone.contains(&(i / 4));
        let kept: Vec<usize> = (0..n).filter(|x| !gone.contains(x)).collect();
        let mut new_index = vec![usize::MAX; self.link.len()];
        for (i, &x) in kept.iter().enumerate() {
            for k in 0..4 {
                new_index[4 * x + k] = 4 * i + k;
            }
        }
        for j in 0..self.ports() {
            new_index[4 * n + j] = 4 * kept.len() + j;
        }
        let mut link = vec![usize::MAX; 4 * kept.len() + self.ports()];
        let mut visited = 0;
        for e in (0..self.link.len()).filter(|&e| !is_gone(e)) {
            let mut s = self.link[e];
            while is_gone(s) {
                visited += 2;
                s = self.link[4 * (s / 4) + route(s % 4)];
            }
            link[new_index[e]] = new_index[s];
        }
        // Each path was walked from both of its ends.
        if visited != 2 * 4 * gone.len() {
            return None;
        }
        let heights = kept.iter().map(|&x| self.heights[x]).collect();
        Some(PortTangle { heights, link })
    }

    /// Every diagram one Reidemeister move away that has no more crossings:
    /// removed kinks, removed bigons whose strand stays on one side, and
    /// triangle moves.
    pub fn neighbours(&self) -> Vec<PortTangle> {
        let n = self.crossings();
        let mut out = Vec::new();
        for x in 0..n {
            for k in 0..4 {
                let s = 4 * x + k;
                if self.link[s] == 4 * x + rot(k, 1) {
                    out.extend(self.remove(&[x]));
                }
                let p = self.link[4 * x + rot(k, 1)];
                if !self.is_slot(p) || p / 4 == x {
                    continue;
                }
                let (y, j) = (p / 4, p % 4);
                // Bigon at corner k of x.
                if self.link[4 * y + rot(j, 1)] == s
                    && x < y
                    && self.height(4 * x + rot(k, 1)) == self.height(p)
                {
                    out.extend(self.remove(&[x, y]));
                }
                if let Some(t) = self.triangle_move(x, k) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// The third Reidemeister move across the triangle with corner `kx` at
    /// crossing `x`, if that face is a triangle one strand can slide over.
    fn triangle_move(&self, x: usize, kx: usize) -> Option<PortTangle> {
        let step = |c: usize, k: usize| {
            let p = self.link[4 * c + rot(k, 1)];
            self.is_slot(p).then_some((p / 4, p % 4))
        };
        let (y, ky) = step(x, kx)?;
        let (z, kz) = step(y, ky)?;
        if step(z, kz)? != (x, kx) || x == y || y == z || x == z || x > y.min(z) {
            return None;
        }
        let tri = [(x, kx), (y, ky), (z, kz)];
        // At each corner the strand on slot k + 1 passes over the one on k,
        // or not; all three alike means the strands are cyclically stacked.
        let over: Vec<bool> = tri.iter().map(|&(c, k)| self.height(4 * c + rot(k, 1)) < self.height(4 * c + k)).collect();
        if over[0] == over[1] && over[1] == over[2] {
            return None;
        }
        let ext = |(c, k): (usize, usize), e: usize| self.link[4 * c + rot(k, e)];
        let exts: Vec<usize> = tri.iter().flat_map(|&t| [ext(t, 2), ext(t, 3)]).collect();
        if exts.iter().any(|&e| self.is_slot(e) && [x, y, z].contains(&(e / 4))) {
            return None;
        }
        let mut t = self.clone();
        for &(c, k) in &tri {
            t.heights[c] = [self.height(4 * c + k), self.height(4 * c + rot(k, 1))];
        }
        let mut join = |a: usize, b: usize| {
            t.link[a] = b;
            t.link[b] = a;
        };
        // Each strand now meets its two crossings in the opposite order.
        for (a, b) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
            join(ext(a, 3), 4 * b.0);
            join(4 * b.0 + 2, 4 * a.0 + 3);
            join(4 * a.0 + 1, ext(b, 2));
        }
        Some(t)
    }

    /// Whether the diagram unwinds completely by removing, one at a time, a
    /// crossing joined to two consecutive boundary points. Exactly the
    /// four-ended diagrams built from crossingless arcs by twisting
    /// neighbouring ends.
    pub fn peels_to_rational(&self) -> bool {
        if self.ports() != 4 {
            return false;
        }
        let mut t = self.clone();
        'peel: while t.crossings() > 0 {
            let (n, ports) = (t.crossings(), t.ports());
            for j in 0..ports {
                let (a, b) = (t.link[4 * n + j], t.link[4 * n + (j + 1) % ports]);
                if t.is_slot(a) && t.is_slot(b) && a / 4 == b / 4 && b % 4 == rot(a % 4, 1) {
                    // What is left meets the boundary at the crossing's inner
                    // ends, in planar order: `i` hands over to `i + 3`.
                    let i = a % 4;
                    let route = |k: usize| rot(i, 3 - (k + 4 - i) % 4);
                    match t.remove_routed(&[a / 4], route) {
                        Some(next) => {
                            t = next;
                            continue 'peel;
                        }
                        None => return false,
                    }
                }
            }
            return false;
        }
        true
    }

    /// Code identifying the diagram up to renumbering of crossings, with
    /// boundary point `shift` relabelled 0.
    pub fn code(&self, shift: usize) -> Option<Vec<u32>> {
        let (n, b) = (self.crossings(), self.ports());
        let mut number = vec![usize::MAX; n];
        let mut base = vec![0; n];
        let mut order = Vec::with_capacity(n);
        let mut reach = |i: usize, number: &mut Vec<usize>, order: &mut Vec<usize>| {
            if i < 4 * n && number[i / 4] == usize::MAX {
                number[i / 4] = order.len();
                base[i / 4] = i % 4;
                order.push(i / 4);
            }
        };
        for j in 0..b {
            reach(self.link[4 * n + (j + shift) % b], &mut number, &mut order);
        }
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for k in 0..4 {
                reach(self.link[4 * c + k], &mut number, &mut order);
            }
            i += 1;
        }
        if order.len() < n {
            return None;
        }
        let enc = |i: usize, code: &mut Vec<u32>| {
            if i < 4 * n {
                code.push(1 + number[i / 4] as u32);
                code.push(((i % 4 + 4 - base[i / 4]) % 4) as u32);
            } else {
                code.push(0);
                code.push(((i - 4 * n + b - shift) % b) as u32);
            }
        };
        let mut code = vec![b as u32, n as u32];
        for j in 0..b {
            enc(self.link[4 * n + (j + shift) % b], &mut code);
        }
        for &c in &order {
            code.push(self.heights[c][base[c] % 2] as u32);
            for k in 0..4 {
                enc(self.link[4 * c + rot(base[c], k)], &mut code);
            }
        }
        Some(code)
    }

    /// Diagrams reachable from this one by moves that never add crossings,
    /// at most `limit` of them, this one first.
    pub fn descendants(&self, limit: usize) -> Vec<PortTangle> {
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self.clone()]);
        while let Some(t) = queue.pop_front() {
            let Some(code) = t.code(0) else { continue };
            if !seen.insert(code) {
                continue;
            }
            out.push(t.clone());
            if out.len() == limit {
                break;
            }
            queue.extend(t.neighbours());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::{tangle_coefficients, Splitting};
    use crate::catalog::Catalog;
    use crate::diagram::CrossingType;
    use crate::laurent::LaurentPoly;
    use crate::moves::boundary;
    use crate::moves::tangle::TangleVector;

    fn uncapped(t: CrossingType) -> CappedCrossing {
        CappedCrossing { crossing_type: t, heights: t.canonical_heights(), caps: Vec::new(), open: (0..8).collect() }
    }

    /// `p = (-A^3)^k q` for some `k`.
    fn same_up_to_kinks(p: &TangleVector, q: &TangleVector) -> bool {
        (-8..=8).any(|k: i64| {
            let sign: num_bigint::BigInt = if k.rem_euclid(2) == 0 { 1.into() } else { (-1).into() };
            p.len() == q.len() && q.iter().all(|(key, c)| p.get(key) == Some(&c.shift(3 * k).scale(&sign)))
        })
    }

    #[test]
    fn resolution_matches_the_skein_coefficients() {
        for &t in CrossingType::ALL.iter() {
            let shape = uncapped(t);
            let v = PortTangle::from_capped(&shape, ResolutionPattern::canonical()).vector();
            let coeffs = tangle_coefficients(shape.heights, ResolutionPattern::canonical());
            for (s, c) in Splitting::all().iter().zip(&coeffs) {
                let mut key = vec![0u8; 8];
                for (a, b) in s.pairs() {
                    key[a as usize] = b;
                    key[b as usize] = a;
                }
                assert_eq!(v.get(&key).cloned().unwrap_or_else(LaurentPoly::zero), *c, "{t:?}");
            }
        }
    }

    #[test]
    fn moves_keep_the_bracket() {
        for &t in CrossingType::ALL.iter() {
            for caps in [vec![], vec![(0u8, 1u8)], vec![(1, 2), (5, 6)], vec![(0, 3), (1, 2)]] {
                let open = (0..8u8).filter(|x| !caps.iter().any(|&(a, b)| a == *x || b == *x)).collect();
                let shape = CappedCrossing { crossing_type: t, heights: t.canonical_heights(), caps, open };
                let root = PortTangle::from_capped(&shape, ResolutionPattern::canonical());
                let v = root.vector();
                let all = root.descendants(200);
                assert!(all.len() > 1 || root.neighbours().is_empty());
                for d in &all {
                    assert!(same_up_to_kinks(&d.vector(), &v), "{shape:?}");
                }
            }
        }
    }

    #[test]
    fn codes_ignore_crossing_order() {
        let cat = Catalog::builtin();
        let d = &cat.get("5_2").unwrap().diagram;
        let set = (0..5).flat_map(|x| (x + 1..5).map(move |y| [x, y])).find(|s| boundary(d, s).is_some()).unwrap();
        let ends = boundary(d, &set).unwrap();
        let a = PortTangle::from_set(d, &set, &ends);
        let b = PortTangle::from_set(d, &[set[1], set[0]], &ends);
        assert_eq!(a.code(0), b.code(0));
        assert_eq!(a.vector(), b.vector());
    }

    #[test]
    fn twists_peel_and_triangles_do_not() {
        let cat = Catalog::builtin();
        let d = &cat.get("3_1").unwrap().diagram;
        let ends = boundary(d, &[0, 1]).unwrap();
        assert!(PortTangle::from_set(d, &[0, 1], &ends).peels_to_rational());
        let shape = uncapped(CrossingType::ALL[0]);
        assert!(!PortTangle::from_capped(&shape, ResolutionPattern::canonical()).peels_to_rational());
    }
}
