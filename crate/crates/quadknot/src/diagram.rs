//! Connected multi-crossing planar diagrams stored as rotation systems.
//!
//! Every crossing lists its `2n` ends in clockwise order; strand `i` runs
//! straight through from end `i` to end `i + n`. Heights give each strand a
//! distinct level, `1` being the top. Corner `k` of a crossing is the region
//! between ends `k` and `k + 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

/// Half-edge identifier as written in diagram codes.
pub type Label = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("crossing {crossing}: {ends} ends is not a supported order (need 4 or 8)")]
    BadOrder { crossing: usize, ends: usize },
    #[error("crossing {crossing}: heights are not a permutation of 1..={order}")]
    BadHeights { crossing: usize, order: usize },
    #[error("half-edge {label} appears {count} times (expected 2)")]
    EdgeMultiplicity { label: Label, count: usize },
    #[error("rotation system is not planar: V - E + F = {v} - {e} + {f} != 2")]
    NonPlanar { v: usize, e: usize, f: usize },
    #[error("diagram is split into {pieces} disconnected pieces")]
    Disconnected { pieces: usize },
    #[error("crossing {crossing} has order {order}, expected {expected}")]
    WrongOrder { crossing: usize, order: usize, expected: usize },
    #[error("orientation does not match the diagram")]
    BadOrientation,
}

/// A crossing of order 2 or 4.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Crossing {
    ends: Vec<Label>,
    heights: Vec<u8>,
}

impl Crossing {
    pub fn new(ends: Vec<Label>, heights: Vec<u8>) -> Result<Self, DiagramError> {
        let order = heights.len();
        if !(order == 2 || order == 4) || ends.len() != 2 * order {
            return Err(DiagramError::BadOrder { crossing: 0, ends: ends.len() });
        }
        let mut seen = heights.clone();
        seen.sort_unstable();
        if seen.iter().enumerate().any(|(i, &h)| h as usize != i + 1) {
            return Err(DiagramError::BadHeights { crossing: 0, order });
        }
        Ok(Self { ends, heights })
    }

    /// PD crossing `X[a,b,c,d]`: the strand through `a` and `c` is under.
    pub fn classical(ends: [Label; 4]) -> Self {
        Self { ends: ends.to_vec(), heights: vec![2, 1] }
    }

    pub fn quad(ends: [Label; 8], heights: [u8; 4]) -> Result<Self, DiagramError> {
        Self::new(ends.to_vec(), heights.to_vec())
    }

    /// Number of strands through the crossing.
    pub fn order(&self) -> usize {
        self.heights.len()
    }

    pub fn ends(&self) -> &[Label] {
        &self.ends
    }

    pub fn heights(&self) -> &[u8] {
        &self.heights
    }

    pub fn strand_of(&self, slot: usize) -> usize {
        slot % self.order()
    }

    pub fn height_at_slot(&self, slot: usize) -> u8 {
        self.heights[self.strand_of(slot)]
    }

    pub fn crossing_type(&self) -> Result<CrossingType, DiagramError> {
        if self.order() != 4 {
            return Err(DiagramError::WrongOrder { crossing: 0, order: self.order(), expected: 4 });
        }
        Ok(CrossingType::from_heights(&self.heights))
    }

    /// Reverse the rotation order.
    pub fn mirrored(&self) -> Self {
        let n = self.order();
        let ends = (0..2 * n).map(|k| self.ends[(2 * n - k) % (2 * n)]).collect();
        let heights = (0..n).map(|i| self.heights[(n - i) % n]).collect();
        Self { ends, heights }
    }
}

/// The six height patterns of a quadruple crossing, read clockwise from the
/// top strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CrossingType {
    T1234,
    T1243,
    T1324,
    T1342,
    T1423,
    T1432,
}

impl CrossingType {
    pub const ALL: [CrossingType; 6] = [
        CrossingType::T1234,
        CrossingType::T1243,
        CrossingType::T1324,
        CrossingType::T1342,
        CrossingType::T1423,
        CrossingType::T1432,
    ];

    pub fn from_heights(h: &[u8]) -> Self {
        let top = h.iter().position(|&x| x == 1).expect("heights are a permutation");
        let read: Vec<u8> = (0..4).map(|k| h[(top + k) % 4]).collect();
        Self::from_digits(&read).expect("heights are a permutation")
    }

    fn from_digits(d: &[u8]) -> Option<Self> {
        Some(match d {
            [1, 2, 3, 4] => CrossingType::T1234,
            [1, 2, 4, 3] => CrossingType::T1243,
            [1, 3, 2, 4] => CrossingType::T1324,
            [1, 3, 4, 2] => CrossingType::T1342,
            [1, 4, 2, 3] => CrossingType::T1423,
            [1, 4, 3, 2] => CrossingType::T1432,
            _ => return None,
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            CrossingType::T1234 => "1234",
            CrossingType::T1243 => "1243",
            CrossingType::T1324 => "1324",
            CrossingType::T1342 => "1342",
            CrossingType::T1423 => "1423",
            CrossingType::T1432 => "1432",
        }
    }

    /// Heights of strands `0..4` realizing this type with strand 0 on top.
    pub fn canonical_heights(self) -> [u8; 4] {
        let l = self.label().as_bytes();
        [l[0] - b'0', l[1] - b'0', l[2] - b'0', l[3] - b'0']
    }

    pub fn mirror(self) -> Self {
        match self {
            CrossingType::T1234 => CrossingType::T1432,
            CrossingType::T1432 => CrossingType::T1234,
            CrossingType::T1243 => CrossingType::T1342,
            CrossingType::T1342 => CrossingType::T1243,
            CrossingType::T1324 => CrossingType::T1423,
            CrossingType::T1423 => CrossingType::T1324,
        }
    }
}

impl fmt::Display for CrossingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CrossingType {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits: Vec<u8> = s.trim().trim_start_matches('c').bytes().map(|b| b.wrapping_sub(b'0')).collect();
        Self::from_digits(&digits).ok_or_else(|| DiagramError::Parse {
            pos: 0,
            msg: format!("unknown crossing type {s:?}"),
        })
    }
}

/// A crossing end: `index` counts clockwise from the crossing's first end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub crossing: usize,
    pub index: usize,
}

/// Corner `corner` of a crossing: the region between ends `corner` and `corner + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Corner {
    pub crossing: usize,
    pub corner: usize,
}

/// A complementary region, as the cyclic list of corners on its boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub corners: Vec<Corner>,
}

impl Face {
    /// Number of boundary edges.
    pub fn size(&self) -> usize {
        self.corners.len()
    }
}

/// Per-slot direction of travel: `entering[g]` holds when the oriented strand
/// enters its crossing through global slot `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    entering: Vec<bool>,
}

impl Orientation {
    pub fn is_entering(&self, global: usize) -> bool {
        self.entering[global]
    }
}

/// Connected planar diagram. Immutable once validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    offsets: Vec<usize>,
    partner: Vec<usize>,
    name: Option<String>,
}

impl Diagram {
    /// Validates labels, planarity and connectedness.
    pub fn new(crossings: Vec<Crossing>) -> Result<Self, DiagramError> {
        let mut offsets = Vec::with_capacity(crossings.len() + 1);
        let mut total = 0;
        for (i, c) in crossings.iter().enumerate() {
            let n = c.heights.len();
            if !(n == 2 || n == 4) || c.ends.len() != 2 * n {
                return Err(DiagramError::BadOrder { crossing: i, ends: c.ends.len() });
            }
            let mut h = c.heights.clone();
            h.sort_unstable();
            if h.iter().enumerate().any(|(k, &x)| x as usize != k + 1) {
                return Err(DiagramError::BadHeights { crossing: i, order: n });
            }
            offsets.push(total);
            total += c.ends.len();
        }
        offsets.push(total);

        let mut seen: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
        let mut g = 0;
        for c in &crossings {
            for &l in &c.ends {
                seen.entry(l).or_default().push(g);
                g += 1;
            }
        }
        let mut partner = vec![usize::MAX; total];
        // Overused labels are reported ahead of dangling ones.
        let bad = seen.iter().find(|(_, v)| v.len() > 2).or_else(|| seen.iter().find(|(_, v)| v.len() < 2));
        if let Some((&label, slots)) = bad {
            return Err(DiagramError::EdgeMultiplicity { label, count: slots.len() });
        }
        for slots in seen.values() {
            partner[slots[0]] = slots[1];
            partner[slots[1]] = slots[0];
        }
        let d = Diagram { crossings, offsets, partner, name: None };
        d.check_connected()?;
        let (v, e, f) = (d.crossings.len(), d.num_edges(), d.face_orbits().len());
        if !d.crossings.is_empty() && v + f != e + 2 {
            return Err(DiagramError::NonPlanar { v, e, f });
        }
        Ok(d)
    }

    /// Builds a diagram from explicit slot pairings; labels are assigned fresh.
    pub fn from_links(
        heights: Vec<Vec<u8>>,
        links: &[(Slot, Slot)],
    ) -> Result<Self, DiagramError> {
        let mut ends: Vec<Vec<Label>> = heights.iter().map(|h| vec![0; 2 * h.len()]).collect();
        for (k, (a, b)) in links.iter().enumerate() {
            let label = k as Label + 1;
            for s in [a, b] {
                let slot = ends
                    .get_mut(s.crossing)
                    .and_then(|e| e.get_mut(s.index))
                    .ok_or(DiagramError::BadOrientation)?;
                *slot = label;
            }
        }
        let crossings = ends
            .into_iter()
            .zip(heights)
            .map(|(ends, heights)| Crossing { ends, heights })
            .collect();
        Self::new(crossings)
    }

    /// Crossingless circle.
    pub fn unknot() -> Self {
        Diagram { crossings: Vec::new(), offsets: vec![0], partner: Vec::new(), name: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, x: usize) -> &Crossing {
        &self.crossings[x]
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn num_slots(&self) -> usize {
        self.partner.len()
    }

    pub fn num_edges(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn count_order(&self, order: usize) -> usize {
        self.crossings.iter().filter(|c| c.order() == order).count()
    }

    pub fn is_classical(&self) -> bool {
        self.crossings.iter().all(|c| c.order() == 2)
    }

    pub fn is_quadruple(&self) -> bool {
        self.crossings.iter().all(|c| c.order() == 4)
    }

    pub fn global(&self, s: Slot) -> usize {
        self.offsets[s.crossing] + s.index
    }

    pub fn slot(&self, global: usize) -> Slot {
        let crossing = self.offsets.partition_point(|&o| o <= global) - 1;
        Slot { crossing, index: global - self.offsets[crossing] }
    }

    pub fn global_offset(&self, x: usize) -> usize {
        self.offsets[x]
    }

    /// The end joined to `s` by an edge.
    pub fn partner(&self, s: Slot) -> Slot {
        self.slot(self.partner[self.global(s)])
    }

    pub fn partner_global(&self, g: usize) -> usize {
        self.partner[g]
    }

    fn next_in_rotation(&self, g: usize) -> usize {
        let s = self.slot(g);
        let len = self.crossings[s.crossing].ends.len();
        self.offsets[s.crossing] + (s.index + 1) % len
    }

    /// Orbits of `partner` followed by a clockwise step.
    fn face_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_slots()];
        let mut out = Vec::new();
        for start in 0..self.num_slots() {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut g = start;
            while !seen[g] {
                seen[g] = true;
                orbit.push(g);
                g = self.next_in_rotation(self.partner[g]);
            }
            out.push(orbit);
        }
        out
    }

    /// All faces; a crossingless circle has two.
    pub fn faces(&self) -> Vec<Face> {
        if self.crossings.is_empty() {
            return vec![Face { corners: vec![] }, Face { corners: vec![] }];
        }
        self.face_orbits()
            .into_iter()
            .map(|orbit| {
                let corners = orbit
                    .into_iter()
                    .map(|g| {
                        let after = self.slot(self.next_in_rotation(self.partner[g]));
                        let len = self.crossings[after.crossing].ends.len();
                        Corner { crossing: after.crossing, corner: (after.index + len - 1) % len }
                    })
                    .collect();
                Face { corners }
            })
            .collect()
    }

    /// Face index of every corner, indexed by the global slot of the corner's
    /// first end.
    pub fn corner_faces(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.num_slots()];
        for (f, face) in self.faces().iter().enumerate() {
            for c in &face.corners {
                out[self.offsets[c.crossing] + c.corner] = f;
            }
        }
        out
    }

    fn check_connected(&self) -> Result<(), DiagramError> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in 0..self.num_slots() {
            let a = find(&mut parent, self.slot(g).crossing);
            let b = find(&mut parent, self.slot(self.partner[g]).crossing);
            parent[a] = b;
        }
        let pieces = (0..n).filter(|&x| find(&mut parent, x) == x).count();
        if pieces > 1 {
            return Err(DiagramError::Disconnected { pieces });
        }
        Ok(())
    }

    /// Slot across the crossing on the same strand.
    pub fn opposite_global(&self, g: usize) -> usize {
        let s = self.slot(g);
        let len = self.crossings[s.crossing].ends.len();
        self.offsets[s.crossing] + (s.index + len / 2) % len
    }

    /// Canonical orientation: each component is traversed entering through its
    /// lowest global slot.
    pub fn orientation(&self) -> Orientation {
        let mut entering = vec![false; self.num_slots()];
        let mut seen = vec![false; self.num_slots()];
        for start in 0..self.num_slots() {
            if seen[start] {
                continue;
            }
            let mut g = start;
            while !seen[g] {
                let out = self.opposite_global(g);
                seen[g] = true;
                seen[out] = true;
                entering[g] = true;
                g = self.partner[out];
            }
        }
        Orientation { entering }
    }

    /// Components as the cyclic sequences of entering slots.
    pub fn components(&self) -> Vec<Vec<Slot>> {
        let o = self.orientation();
        let mut seen = vec![false; self.num_slots()];
        let mut out = Vec::new();
        for start in 0..self.num_slots() {
            if seen[start] || !o.entering[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut g = start;
            while !seen[g] {
                seen[g] = true;
                comp.push(self.slot(g));
                g = self.partner[self.opposite_global(g)];
            }
            out.push(comp);
        }
        out
    }

    pub fn num_components(&self) -> usize {
        if self.crossings.is_empty() {
            1
        } else {
            self.components().len()
        }
    }

    /// Orientation with the listed components (indices into `components()`) reversed.
    pub fn orientation_reversing(&self, reversed: &[usize]) -> Orientation {
        let mut o = self.orientation();
        for (k, comp) in self.components().iter().enumerate() {
            if reversed.contains(&k) {
                for s in comp {
                    let g = self.global(*s);
                    o.entering[g] = false;
                    o.entering[self.opposite_global(g)] = true;
                }
            }
        }
        o
    }

    /// Sum of crossing signs. An order-4 crossing contributes the signs of the
    /// six pairwise crossings of its resolution.
    pub fn writhe(&self, orientation: &Orientation) -> Result<i64, DiagramError> {
        if orientation.entering.len() != self.num_slots() {
            return Err(DiagramError::BadOrientation);
        }
        let mut w = 0;
        for (x, c) in self.crossings.iter().enumerate() {
            let n = c.order();
            let entry: Vec<usize> = (0..n)
                .map(|i| {
                    if orientation.entering[self.offsets[x] + i] {
                        Ok(i)
                    } else if orientation.entering[self.offsets[x] + i + n] {
                        Ok(i + n)
                    } else {
                        Err(DiagramError::BadOrientation)
                    }
                })
                .collect::<Result<_, _>>()?;
            for i in 0..n {
                for j in i + 1..n {
                    let (over, under) = if c.heights[i] < c.heights[j] { (i, j) } else { (j, i) };
                    let delta = (entry[over] + 2 * n - entry[under]) % (2 * n);
                    w += if delta < n { 1 } else { -1 };
                }
            }
        }
        Ok(w)
    }

    pub fn default_writhe(&self) -> i64 {
        self.writhe(&self.orientation()).expect("canonical orientation fits")
    }

    /// Reflection of the plane: every rotation order reversed.
    pub fn mirror(&self) -> Diagram {
        let crossings = self.crossings.iter().map(Crossing::mirrored).collect();
        let mut d = Diagram::new(crossings).expect("mirror of a valid diagram is valid");
        d.name = self.name.clone();
        d
    }

    /// True when every component meets
    /// order-2 crossings alternately over and under.
    pub fn is_alternating(&self) -> bool {
        self.components().iter().all(|comp| {
            let levels: Vec<bool> = comp
                .iter()
                .filter(|s| self.crossings[s.crossing].order() == 2)
                .map(|s| self.crossings[s.crossing].height_at_slot(s.index) == 1)
                .collect();
            levels.is_empty()
                || (0..levels.len()).all(|k| levels[k] != levels[(k + 1) % levels.len()])
        })
    }

    /// Crossings meeting some face at two distinct corners.
    pub fn nugatory_crossings(&self) -> Vec<usize> {
        let cf = self.corner_faces();
        (0..self.num_crossings())
            .filter(|&x| {
                let o = self.offsets[x];
                let len = self.crossings[x].ends.len();
                (0..len).any(|k| (k + 1..len).any(|j| cf[o + k] == cf[o + j]))
            })
            .collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.nugatory_crossings().is_empty()
    }

    /// Replaces every order-4 crossing by the canonical 6-crossing pattern.
    pub fn resolve(&self) -> Diagram {
        self.resolve_with(ResolutionPattern::canonical())
    }

    /// Resolution using an explicit chord pattern.
    pub fn resolve_with(&self, pattern: &ResolutionPattern) -> Diagram {
        if self.is_classical() {
            return self.clone();
        }
        let mut next_label = self.crossings.iter().flat_map(|c| c.ends.iter()).max().copied().unwrap_or(0) + 1;
        let mut out = Vec::new();
        for c in &self.crossings {
            if c.order() == 2 {
                out.push(c.clone());
                continue;
            }
            let mut seg = vec![Vec::new(); 4];
            for (i, s) in seg.iter_mut().enumerate() {
                s.push(c.ends[i]);
                for _ in 0..pattern.along[i].len() - 1 {
                    s.push(next_label);
                    next_label += 1;
                }
                s.push(c.ends[i + 4]);
            }
            for x in &pattern.crossings {
                let ends = x.rays.map(|(strand, forward)| {
                    let k = x.position[strand];
                    if forward {
                        seg[strand][k + 1]
                    } else {
                        seg[strand][k]
                    }
                });
                let (s0, s1) = (x.rays[0].0, x.rays[1].0);
                let heights = if c.heights[s0] < c.heights[s1] { vec![1, 2] } else { vec![2, 1] };
                out.push(Crossing { ends: ends.to_vec(), heights });
            }
        }
        let mut d = Diagram::new(out).expect("resolution of a valid diagram is valid");
        d.name = self.name.clone();
        d
    }

    /// Diagram code with edges relabelled `1..=E` in order of first appearance.
    pub fn to_code(&self) -> String {
        if self.crossings.is_empty() {
            return "O".to_string();
        }
        let mut label = vec![0; self.num_slots()];
        let mut next = 1;
        for g in 0..self.num_slots() {
            if label[g] == 0 {
                label[g] = next;
                label[self.partner[g]] = next;
                next += 1;
            }
        }
        let mut out = Vec::new();
        for (x, c) in self.crossings.iter().enumerate() {
            let ends: Vec<String> = (0..c.ends.len()).map(|i| label[self.offsets[x] + i].to_string()).collect();
            let hs: String = c.heights.iter().map(|h| h.to_string()).collect();
            match c.order() {
                2 if c.heights == [2, 1] => out.push(format!("X[{}]", ends.join(","))),
                2 => out.push(format!("X[{};{}]", ends.join(","), hs)),
                _ => out.push(format!("Q[{};{}]", ends.join(","), hs)),
            }
        }
        out.join(" ")
    }

    /// Number of order-4 crossings of each type.
    pub fn type_counts(&self) -> BTreeMap<CrossingType, usize> {
        let mut m = BTreeMap::new();
        for c in &self.crossings {
            if let Ok(t) = c.crossing_type() {
                *m.entry(t).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct CrossingJson<'a> {
            order: usize,
            ends: &'a [Label],
            heights: &'a [u8],
            #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
            kind: Option<&'static str>,
        }
        let crossings: Vec<_> = self
            .crossings
            .iter()
            .map(|c| CrossingJson {
                order: c.order(),
                ends: &c.ends,
                heights: &c.heights,
                kind: c.crossing_type().ok().map(CrossingType::label),
            })
            .collect();
        let mut edges = Vec::new();
        for g in 0..self.num_slots() {
            let p = self.partner[g];
            if g < p {
                let (a, b) = (self.slot(g), self.slot(p));
                edges.push(serde_json::json!({
                    "label": self.crossings[a.crossing].ends[a.index],
                    "ends": [[a.crossing, a.index], [b.crossing, b.index]],
                }));
            }
        }
        let faces: Vec<Vec<[usize; 2]>> = self
            .faces()
            .into_iter()
            .map(|f| f.corners.into_iter().map(|c| [c.crossing, c.corner]).collect())
            .collect();
        serde_json::json!({
            "name": self.name,
            "code": self.to_code(),
            "crossings": crossings,
            "edges": edges,
            "faces": faces,
        })
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_code())
    }
}

impl FromStr for Diagram {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_diagram(s)
    }
}

/// Parses `X[a,b,c,d]` (strand `a`-`c` under), `X[a,b,c,d;h1h2]`,
/// `Q[e1,...,e8;h1h2h3h4]` and the crossingless `O`. An optional `PD[...]`
/// wrapper and separating commas are accepted.
pub fn parse_diagram(text: &str) -> Result<Diagram, DiagramError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let mut crossings = Vec::new();
    p.ws();
    let wrapped = p.eat_str("PD[");
    let mut unknot = false;
    loop {
        p.ws();
        if wrapped && p.eat(b']') {
            p.ws();
            break;
        }
        match p.peek() {
            None if !wrapped => break,
            None => return Err(p.err("unterminated PD[")),
            Some(b',') if !crossings.is_empty() => {
                p.pos += 1;
            }
            Some(b'X') | Some(b'Q') => {
                let start = p.pos;
                let c = p.crossing()?;
                crossings.push((start, c));
            }
            Some(b'O') if crossings.is_empty() && !unknot => {
                p.pos += 1;
                unknot = true;
            }
            Some(_) => return Err(p.err("expected X[...] or Q[...]")),
        }
    }
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    if unknot {
        return if crossings.is_empty() { Ok(Diagram::unknot()) } else { Err(p.err("O mixed with crossings")) };
    }
    if crossings.is_empty() {
        return Err(Parser { s: text.as_bytes(), pos: 0 }.err("no crossings"));
    }
    Diagram::new(crossings.into_iter().map(|(_, c)| c).collect())
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> DiagramError {
        DiagramError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, t: &str) -> bool {
        if self.s[self.pos..].starts_with(t.as_bytes()) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<Label, DiagramError> {
        self.ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a half-edge number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| DiagramError::Parse { pos: start, msg: "half-edge number too large".into() })
    }

    fn crossing(&mut self) -> Result<Crossing, DiagramError> {
        let quad = self.peek() == Some(b'Q');
        self.pos += 1;
        self.ws();
        if !self.eat(b'[') {
            return Err(self.err("expected '['"));
        }
        let want = if quad { 8 } else { 4 };
        let mut ends = Vec::with_capacity(want);
        loop {
            ends.push(self.number()?);
            self.ws();
            if self.eat(b',') {
                continue;
            }
            break;
        }
        if ends.len() != want {
            return Err(self.err(&format!("expected {want} ends, found {}", ends.len())));
        }
        let mut heights = Vec::new();
        if self.eat(b';') {
            self.ws();
            while let Some(b) = self.peek() {
                match b {
                    b'1'..=b'9' => heights.push(b - b'0'),
                    b',' | b' ' => {}
                    _ => break,
                }
                self.pos += 1;
            }
        } else if quad {
            return Err(self.err("quadruple crossing needs heights after ';'"));
        } else {
            heights = vec![2, 1];
        }
        self.ws();
        if !self.eat(b']') {
            return Err(self.err("expected ']'"));
        }
        Crossing::new(ends, heights).map_err(|_| self.err("heights are not a permutation of the strand levels"))
    }
}

/// Combinatorial template for resolving an order-4 crossing into six
/// order-2 crossings: four straight chords, slightly offset from the
/// diameters so all pairwise intersections are distinct.
#[derive(Clone, Debug)]
pub struct ResolutionPattern {
    pub(crate) crossings: Vec<PatternCrossing>,
    /// For each strand, its pattern crossings in order from end `i` to end `i + 4`.
    pub(crate) along: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub(crate) struct PatternCrossing {
    /// Four rays in clockwise order: (strand, pointing toward end `i + 4`).
    pub(crate) rays: [(usize, bool); 4],
    /// Index of this crossing along each strand (meaningful for its two strands).
    pub(crate) position: [usize; 4],
}

impl ResolutionPattern {
    /// The fixed pattern used by `resolve`.
    pub fn canonical() -> &'static ResolutionPattern {
        static P: OnceLock<ResolutionPattern> = OnceLock::new();
        P.get_or_init(|| Self::from_offsets([0.0, 0.11, 0.23, 0.37]).expect("canonical offsets are generic"))
    }

    /// Chords shifted from the diameters by the given normal offsets.
    /// Returns `None` when the chords are not in general position.
    pub fn from_offsets(offsets: [f64; 4]) -> Option<ResolutionPattern> {
        use std::f64::consts::PI;
        // End k sits at angle -k*pi/4 (clockwise order). Strand i runs from end i
        // toward end i+4, with direction angle -i*pi/4 + pi.
        let dir = |i: usize| {
            let a = -(i as f64) * PI / 4.0 + PI;
            (a.cos(), a.sin())
        };
        let base = |i: usize| {
            let a = -(i as f64) * PI / 4.0;
            let (nx, ny) = (-dir(i).1, dir(i).0);
            (a.cos() + offsets[i] * nx, a.sin() + offsets[i] * ny)
        };
        if offsets.iter().any(|o| o.abs() >= 0.38) {
            return None;
        }
        // Parameter of the intersection along each chord.
        let mut hits: Vec<Vec<(f64, usize)>> = vec![Vec::new(); 4];
        let mut pairs = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let (pi, di, pj, dj) = (base(i), dir(i), base(j), dir(j));
                let det = di.0 * (-dj.1) - di.1 * (-dj.0);
                let rx = pj.0 - pi.0;
                let ry = pj.1 - pi.1;
                let t = (rx * (-dj.1) - ry * (-dj.0)) / det;
                let u = (di.0 * ry - di.1 * rx) / det;
                hits[i].push((t, pairs.len()));
                hits[j].push((u, pairs.len()));
                pairs.push((i, j));
            }
        }
        let mut along = Vec::new();
        let mut position = vec![[0usize; 4]; pairs.len()];
        for (i, h) in hits.iter_mut().enumerate() {
            h.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
            if h.windows(2).any(|w| (w[1].0 - w[0].0).abs() < 1e-6) {
                return None;
            }
            for (k, &(_, x)) in h.iter().enumerate() {
                position[x][i] = k;
            }
            along.push(h.iter().map(|&(_, x)| x).collect::<Vec<_>>());
        }
        let crossings = pairs
            .iter()
            .enumerate()
            .map(|(x, &(i, j))| {
                let ang = |s: usize, fwd: bool| {
                    let (dx, dy) = dir(s);
                    let (dx, dy) = if fwd { (dx, dy) } else { (-dx, -dy) };
                    dy.atan2(dx)
                };
                let mut rays = [(i, true), (j, true), (i, false), (j, false)];
                // Clockwise: decreasing angle.
                rays.sort_by(|a, b| ang(b.0, b.1).partial_cmp(&ang(a.0, a.1)).expect("finite"));
                let start = rays.iter().position(|&r| r == (i, true)).expect("present");
                rays.rotate_left(start);
                PatternCrossing { rays, position: position[x] }
            })
            .collect();
        Some(ResolutionPattern { crossings, along })
    }
}

/// Lookup from label to the pair of slots it joins.
pub fn label_index(d: &Diagram) -> HashMap<Label, (Slot, Slot)> {
    let mut m: HashMap<Label, Vec<Slot>> = HashMap::new();
    for (x, c) in d.crossings().iter().enumerate() {
        for (i, &l) in c.ends().iter().enumerate() {
            m.entry(l).or_default().push(Slot { crossing: x, index: i });
        }
    }
    m.into_iter().map(|(l, v)| (l, (v[0], v[1]))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
    const FIGURE_EIGHT: &str = "X[4,1,5,2] X[8,5,1,6] X[6,4,7,3] X[2,8,3,7]";

    fn sizes(d: &Diagram) -> Vec<usize> {
        let mut v: Vec<usize> = d.faces().iter().map(Face::size).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn trefoil_faces() {
        let d = parse_diagram(TREFOIL).unwrap();
        assert_eq!(d.num_crossings(), 3);
        assert_eq!(d.num_edges(), 6);
        assert_eq!(sizes(&d), vec![2, 2, 2, 3, 3]);
    }

    #[test]
    fn figure_eight_faces() {
        let d = parse_diagram(FIGURE_EIGHT).unwrap();
        assert_eq!(sizes(&d), vec![2, 2, 3, 3, 3, 3]);
    }

    #[test]
    fn kink_has_three_faces() {
        let d = parse_diagram("X[1,1,2,2]").unwrap();
        assert_eq!(d.faces().len(), 3);
    }

    #[test]
    fn face_sizes_sum_to_twice_edges() {
        let d = parse_diagram(FIGURE_EIGHT).unwrap();
        assert_eq!(d.faces().iter().map(Face::size).sum::<usize>(), 2 * d.num_edges());
    }

    #[test]
    fn rejects_bad_codes() {
        assert!(matches!(
            parse_diagram("X[7,7,7,1]"),
            Err(DiagramError::EdgeMultiplicity { label: 7, count: 3 })
        ));
        assert!(matches!(parse_diagram("X[1,2,1,2]"), Err(DiagramError::NonPlanar { .. })));
        assert!(matches!(
            parse_diagram("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]"),
            Err(DiagramError::NonPlanar { v: 3, e: 6, f: 3 })
        ));
        assert!(matches!(
            parse_diagram("X[1,1,2,2] X[3,3,4,4]"),
            Err(DiagramError::Disconnected { pieces: 2 })
        ));
        assert!(matches!(parse_diagram("X[1,2,3]"), Err(DiagramError::Parse { .. })));
        assert!(matches!(parse_diagram("Q[1,2,3,4,4,3,2,1]"), Err(DiagramError::Parse { .. })));
        assert!(matches!(parse_diagram("Q[1,2,3,4,4,3,2,1;1224]"), Err(DiagramError::Parse { .. })));
        assert!(parse_diagram("").is_err());
    }

    #[test]
    fn single_quad_closure() {
        let d = parse_diagram("Q[1,2,3,4,4,3,2,1;1234]").unwrap();
        assert_eq!(d.num_crossings(), 1);
        assert_eq!(d.num_components(), 2);
        assert_eq!(d.faces().len(), 5);
        assert_eq!(d.resolve().num_crossings(), 6);
    }

    #[test]
    fn crossing_type_reads_from_top() {
        let c = |h: [u8; 4]| Crossing::quad([1, 2, 3, 4, 5, 6, 7, 8], h).unwrap().crossing_type().unwrap();
        assert_eq!(c([1, 2, 3, 4]), CrossingType::T1234);
        assert_eq!(c([1, 4, 3, 2]), CrossingType::T1432);
        assert_eq!(c([3, 4, 1, 2]), CrossingType::T1234);
        assert_eq!(c([2, 1, 4, 3]), CrossingType::T1432);
        assert!(matches!(Crossing::classical([1, 2, 3, 4]).crossing_type(), Err(DiagramError::WrongOrder { .. })));
    }

    #[test]
    fn mirror_pairs_types() {
        for t in CrossingType::ALL {
            let c = Crossing::quad([1, 2, 3, 4, 5, 6, 7, 8], t.canonical_heights()).unwrap();
            assert_eq!(c.crossing_type().unwrap(), t);
            assert_eq!(c.mirrored().crossing_type().unwrap(), t.mirror());
        }
        let d = parse_diagram(TREFOIL).unwrap();
        assert_eq!(d.mirror().mirror(), d);
    }

    #[test]
    fn writhe_signs() {
        let t = parse_diagram(TREFOIL).unwrap();
        assert_eq!(t.default_writhe().abs(), 3);
        assert_eq!(t.mirror().default_writhe(), -t.default_writhe());
        assert_eq!(parse_diagram(FIGURE_EIGHT).unwrap().default_writhe(), 0);
    }

    #[test]
    fn writhe_of_quad_matches_resolution() {
        for t in CrossingType::ALL {
            let h = t.canonical_heights();
            let code = format!("Q[1,2,3,4,4,3,2,1;{}{}{}{}]", h[0], h[1], h[2], h[3]);
            let d = parse_diagram(&code).unwrap();
            assert_eq!(d.default_writhe(), d.resolve().default_writhe());
        }
    }

    #[test]
    fn reversing_a_component_flips_linking_crossings() {
        // Hopf link: two crossings between the components.
        let d = parse_diagram("X[1,3,2,4] X[3,1,4,2]").unwrap();
        assert_eq!(d.num_components(), 2);
        let w = d.default_writhe();
        let r = d.writhe(&d.orientation_reversing(&[0])).unwrap();
        assert_eq!(r, -w);
    }

    #[test]
    fn code_round_trip() {
        let d = parse_diagram("Q[1,2,3,4,4,3,2,1;1432]").unwrap();
        let e = parse_diagram(&d.to_code()).unwrap();
        assert_eq!(d.to_code(), e.to_code());
        assert_eq!(parse_diagram("O").unwrap().num_crossings(), 0);
        assert_eq!(parse_diagram("PD[X[1,1,2,2]]").unwrap().num_crossings(), 1);
    }

    #[test]
    fn alternation_and_reduction() {
        let t = parse_diagram(TREFOIL).unwrap();
        assert!(t.is_alternating());
        assert!(t.is_reduced());
        let kink = parse_diagram("X[1,1,2,2]").unwrap();
        assert_eq!(kink.nugatory_crossings(), vec![0]);
    }
}
