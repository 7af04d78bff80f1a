//! Minimum-cost exact covers of a reduced alternating diagram's crossings by
//! sets that each become one quadruple crossing.

use serde::Serialize;

use crate::diagram::{Diagram, Slot};

use super::MovesError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PartKind {
    #[serde(rename = "1-set")]
    One,
    #[serde(rename = "2-set")]
    Two,
    #[serde(rename = "3-set")]
    Three,
    #[serde(rename = "4-set")]
    Four,
}

impl PartKind {
    fn of_size(n: usize) -> Self {
        match n {
            1 => PartKind::One,
            2 => PartKind::Two,
            3 => PartKind::Three,
            _ => PartKind::Four,
        }
    }
}

/// Faces certifying a part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "faces", rename_all = "lowercase")]
pub enum Witness {
    None,
    /// A single face whose corners are the part.
    Face(usize),
    /// Consecutive bigons of a twist region.
    Twist(Vec<usize>),
    /// A sub-tangle equivalent to a capped quadruple crossing.
    Tangle(super::TangleMatch),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Part {
    pub kind: PartKind,
    /// Sorted crossing ids.
    pub crossings: Vec<usize>,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetDecomposition {
    pub parts: Vec<Part>,
    pub cost: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareRule {
    Never,
    /// Squares with three consecutive corners forming a twist run: the
    /// run's two bigons sit across the square's sides at the middle corner.
    Twisted,
    Always,
}

/// Which configurations count as sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartRules {
    /// Triangular faces as 3-sets.
    pub triangles: bool,
    /// Which square faces count as 4-sets.
    pub squares: SquareRule,
    /// Bigon faces as 2-sets.
    pub bigons: bool,
    /// Longest run of consecutive twist crossings taken as one set.
    pub max_twist: usize,
    /// Largest sub-tangle compared against capped quadruple crossings, at
    /// most 4; 0 disables the comparison.
    pub max_tangle: usize,
    /// Diagrams of the flype orbit searched, the given one included.
    pub flypes: usize,
}

impl Default for PartRules {
    /// Only sets certified equivalent to one capped quadruple crossing.
    fn default() -> Self {
        PartRules { triangles: false, squares: SquareRule::Never, bigons: true, max_twist: 4, max_tangle: 4, flypes: 64 }
    }
}

impl PartRules {
    /// Every triangle and square face taken as a set, nothing else.
    pub fn faces() -> Self {
        PartRules { triangles: true, squares: SquareRule::Always, bigons: true, max_twist: 0, max_tangle: 0, flypes: 1 }
    }
}

/// Every admissible part of size at least 2, deduplicated by crossing set
/// (faces win over twists), largest first. With tangle comparison on, faces
/// and twists are kept only when a capped crossing certifiably replaces them.
pub fn candidate_parts(d: &Diagram, rules: &PartRules) -> Vec<Part> {
    let faces = d.faces();
    let certify = rules.max_tangle >= 2;
    let mut parts: Vec<Part> = Vec::new();
    let mut push = |mut crossings: Vec<usize>, witness: Witness| {
        crossings.sort_unstable();
        let distinct = crossings.windows(2).all(|w| w[0] != w[1]);
        let certified = || !certify || matches!(witness, Witness::Tangle(_)) || super::match_tangle(d, &crossings).is_some();
        if distinct && !parts.iter().any(|p| p.crossings == crossings) && certified() {
            parts.push(Part { kind: PartKind::of_size(crossings.len()), crossings, witness });
        }
    };
    let cf = d.corner_faces();
    let is_bigon = |f: usize| faces[f].size() == 2 && faces[f].corners[0].crossing != faces[f].corners[1].crossing;
    // A corner flanked by bigons on both sides.
    let twisted_corner = |c: &crate::diagram::Corner| {
        let o = d.global_offset(c.crossing);
        is_bigon(cf[o + (c.corner + 1) % 4]) && is_bigon(cf[o + (c.corner + 3) % 4])
    };
    for (f, face) in faces.iter().enumerate() {
        let take = match face.size() {
            2 => rules.bigons,
            3 => rules.triangles,
            4 => match rules.squares {
                SquareRule::Never => false,
                SquareRule::Twisted => face.corners.iter().any(twisted_corner),
                SquareRule::Always => true,
            },
            _ => false,
        };
        if take {
            push(face.corners.iter().map(|c| c.crossing).collect(), Witness::Face(f));
        }
    }
    for (crossings, bigons) in twist_runs(d, &faces, rules.max_twist) {
        push(crossings, Witness::Twist(bigons));
    }
    if rules.max_tangle >= 2 {
        for (crossings, m) in super::tangle_sets(d, rules.max_tangle.min(4)) {
            push(crossings, Witness::Tangle(m));
        }
    }
    parts.sort_by(|a, b| b.crossings.len().cmp(&a.crossings.len()).then(a.crossings.cmp(&b.crossings)));
    parts
}

/// Runs of 2 to `max` crossings joined consecutively by bigons lying at
/// opposite corners of each inner crossing.
fn twist_runs(d: &Diagram, faces: &[crate::diagram::Face], max: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    // (face, crossing a, corner at a, crossing b, corner at b)
    let bigons: Vec<(usize, usize, usize, usize, usize)> = faces
        .iter()
        .enumerate()
        .filter(|(_, f)| f.size() == 2 && f.corners[0].crossing != f.corners[1].crossing)
        .map(|(i, f)| (i, f.corners[0].crossing, f.corners[0].corner, f.corners[1].crossing, f.corners[1].corner))
        .collect();
    let mut out = Vec::new();
    // Depth-first extension from every bigon in both directions.
    fn extend(
        bigons: &[(usize, usize, usize, usize, usize)],
        d: &Diagram,
        path: &mut Vec<usize>,
        used: &mut Vec<usize>,
        end_corner: usize,
        max: usize,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        out.push((path.clone(), used.clone()));
        if path.len() == max {
            return;
        }
        let x = *path.last().expect("nonempty");
        let want = (end_corner + 2) % d.crossing(x).ends().len();
        for &(f, a, ca, b, cb) in bigons {
            if used.contains(&f) {
                continue;
            }
            let next = if a == x && ca == want {
                Some((b, cb))
            } else if b == x && cb == want {
                Some((a, ca))
            } else {
                None
            };
            if let Some((y, cy)) = next {
                if path.contains(&y) {
                    continue;
                }
                path.push(y);
                used.push(f);
                extend(bigons, d, path, used, cy, max, out);
                path.pop();
                used.pop();
            }
        }
    }
    for &(f, a, ca, b, cb) in &bigons {
        for (s, t, ct) in [(a, b, cb), (b, a, ca)] {
            let mut path = vec![s, t];
            let mut used = vec![f];
            extend(&bigons, d, &mut path, &mut used, ct, max.max(2), &mut out);
        }
    }
    out.retain(|(p, _)| (2..=max).contains(&p.len()));
    out
}

fn check_input(d: &Diagram) -> Result<(), MovesError> {
    if let Some(x) = d.crossings().iter().position(|c| c.order() != 2) {
        return Err(MovesError::NotClassical(x));
    }
    if !d.is_alternating() {
        return Err(MovesError::NotAlternating);
    }
    if !d.is_reduced() {
        return Err(MovesError::NotReduced);
    }
    Ok(())
}

pub fn set_decompose(d: &Diagram) -> Result<SetDecomposition, MovesError> {
    set_decompose_with(d, &PartRules::default())
}

/// The cheapest decomposition over the flype orbit of `d`, with the diagram
/// it decomposes. Earlier diagrams of the orbit win ties, so `d` itself
/// does whenever it is optimal.
pub fn best_set_decomposition(d: &Diagram, rules: &PartRules) -> Result<(Diagram, SetDecomposition), MovesError> {
    check_input(d)?;
    let mut best: Option<(Diagram, SetDecomposition)> = None;
    for e in super::flype_orbit(d, rules.flypes.max(1)) {
        let sd = set_decompose_with(&e, rules)?;
        if best.as_ref().is_none_or(|(_, b)| sd.cost < b.cost) {
            best = Some((e, sd));
        }
    }
    Ok(best.expect("the orbit holds d"))
}

/// Exhaustive backtracking: the lowest uncovered crossing is covered first,
/// trying larger parts before smaller ones and a singleton last.
pub fn set_decompose_with(d: &Diagram, rules: &PartRules) -> Result<SetDecomposition, MovesError> {
    check_input(d)?;
    let n = d.num_crossings();
    let parts = candidate_parts(d, rules);
    let mut by_crossing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in parts.iter().enumerate() {
        for &x in &p.crossings {
            by_crossing[x].push(i);
        }
    }
    struct Search<'a> {
        parts: &'a [Part],
        by_crossing: &'a [Vec<usize>],
        covered: Vec<bool>,
        chosen: Vec<Option<usize>>,
        best: Option<Vec<Option<usize>>>,
    }
    impl Search<'_> {
        fn run(&mut self, remaining: usize) {
            let cost = self.chosen.len();
            let bound = cost + remaining.div_ceil(4);
            if self.best.as_ref().is_some_and(|b| bound >= b.len()) {
                return;
            }
            let Some(x) = self.covered.iter().position(|c| !c) else {
                self.best = Some(self.chosen.clone());
                return;
            };
            for &i in &self.by_crossing[x] {
                let p = &self.parts[i];
                if p.crossings.iter().any(|&y| self.covered[y]) {
                    continue;
                }
                for &y in &p.crossings {
                    self.covered[y] = true;
                }
                self.chosen.push(Some(i));
                self.run(remaining - p.crossings.len());
                self.chosen.pop();
                for &y in &p.crossings {
                    self.covered[y] = false;
                }
            }
            self.covered[x] = true;
            self.chosen.push(None);
            self.run(remaining - 1);
            self.chosen.pop();
            self.covered[x] = false;
        }
    }
    let mut s = Search { parts: &parts, by_crossing: &by_crossing, covered: vec![false; n], chosen: Vec::new(), best: None };
    s.run(n);
    let best = s.best.unwrap_or_default();
    // Replaying the choices reproduces which crossing each singleton took.
    let mut covered = vec![false; n];
    let mut out = Vec::with_capacity(best.len());
    for choice in best {
        match choice {
            Some(i) => {
                for &y in &parts[i].crossings {
                    covered[y] = true;
                }
                out.push(parts[i].clone());
            }
            None => {
                let x = covered.iter().position(|c| !c).expect("a crossing was left");
                covered[x] = true;
                out.push(Part { kind: PartKind::One, crossings: vec![x], witness: Witness::None });
            }
        }
    }
    let cost = out.len();
    Ok(SetDecomposition { parts: out, cost })
}

/// The quadruple diagram a decomposition describes: every part becomes one
/// quadruple crossing, singletons by conversion and larger parts by their
/// certified capped crossing. Fails on parts no certificate covers.
pub fn realize(d: &Diagram, sd: &SetDecomposition) -> Result<Diagram, MovesError> {
    check_input(d)?;
    let mut owner = vec![usize::MAX; d.num_crossings()];
    for (i, p) in sd.parts.iter().enumerate() {
        for &x in &p.crossings {
            owner[x] = i;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(MovesError::InvalidDecomposition("parts do not cover every crossing".into()));
    }
    let mut heights = Vec::with_capacity(sd.parts.len());
    let mut map: Vec<Option<Slot>> = vec![None; d.num_slots()];
    let mut links = Vec::new();
    for (i, p) in sd.parts.iter().enumerate() {
        if let [x] = p.crossings[..] {
            heights.push(d.crossing(x).heights().to_vec());
            for k in 0..4 {
                map[d.global_offset(x) + k] = Some(Slot { crossing: i, index: k });
            }
            continue;
        }
        let m = match &p.witness {
            Witness::Tangle(m) => m.clone(),
            _ => super::match_tangle(d, &p.crossings)
                .ok_or_else(|| MovesError::InvalidDecomposition(format!("no certificate for part {:?}", p.crossings)))?,
        };
        heights.push(m.shape.heights.to_vec());
        for (&g, &e) in m.ends.iter().zip(&m.shape.open) {
            map[g] = Some(Slot { crossing: i, index: e as usize });
        }
        for &(a, b) in &m.shape.caps {
            links.push((Slot { crossing: i, index: a as usize }, Slot { crossing: i, index: b as usize }));
        }
    }
    for g in 0..d.num_slots() {
        let q = d.partner_global(g);
        if g < q {
            if let (Some(a), Some(b)) = (map[g], map[q]) {
                links.push((a, b));
            }
        }
    }
    let mixed = Diagram::from_links(heights, &links)?;
    super::convert_all(&mixed)
}
