//! Crossing covering circles: simple closed curves meeting the diagram only
//! at classical crossings, passing straight through each one so that two
//! strand ends lie on either side.

use serde::Serialize;

use crate::diagram::{Corner, Diagram};

use super::MovesError;

/// The circle enters crossing `crossing` through corner `entry` and leaves
/// through the opposite corner `entry + 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Passage {
    pub crossing: usize,
    pub entry: usize,
}

impl Passage {
    pub fn exit(&self) -> usize {
        (self.entry + 2) % 4
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringCircle {
    pub passages: Vec<Passage>,
}

impl CoveringCircle {
    pub fn len(&self) -> usize {
        self.passages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passages.is_empty()
    }

    /// Checks distinct classical crossings, face-consistent steps and that
    /// the arcs drawn inside every face are pairwise noncrossing.
    pub fn validate(&self, d: &Diagram) -> Result<(), MovesError> {
        let bad = |msg: &str| Err(MovesError::InvalidCircle(msg.to_string()));
        let n = self.passages.len();
        if n == 0 {
            return bad("empty circle");
        }
        for (i, p) in self.passages.iter().enumerate() {
            if p.crossing >= d.num_crossings() {
                return Err(MovesError::NoSuchCrossing(p.crossing));
            }
            if d.crossing(p.crossing).order() != 2 {
                return Err(MovesError::NotClassical(p.crossing));
            }
            if p.entry >= 4 {
                return bad("entry corner out of range");
            }
            if self.passages[..i].iter().any(|q| q.crossing == p.crossing) {
                return bad("crossing passed twice");
            }
        }
        let geometry = FaceGeometry::new(d);
        let mut arcs: Vec<(usize, usize, usize)> = Vec::with_capacity(n);
        for i in 0..n {
            let (p, q) = (self.passages[i], self.passages[(i + 1) % n]);
            let from = Corner { crossing: p.crossing, corner: p.exit() };
            let to = Corner { crossing: q.crossing, corner: q.entry };
            let (f, a) = geometry.locate(d, from);
            let (g, b) = geometry.locate(d, to);
            if f != g {
                return bad("consecutive passages do not share a face");
            }
            if arcs.iter().any(|&(h, x, y)| h == f && interleaved((x, y), (a, b))) {
                return bad("circle crosses itself inside a face");
            }
            arcs.push((f, a, b));
        }
        Ok(())
    }
}

/// Chords `(a, b)` and `(c, d)` of a polygon cross.
fn interleaved((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    let (lo, hi) = (a.min(b), a.max(b));
    let inside = |x: usize| lo < x && x < hi;
    if [a, b].contains(&c) || [a, b].contains(&d) {
        return false;
    }
    inside(c) != inside(d)
}

/// Face and position within the face of every corner.
struct FaceGeometry {
    faces: Vec<Vec<Corner>>,
    /// Indexed by global slot of the corner's first end.
    place: Vec<(usize, usize)>,
}

impl FaceGeometry {
    fn new(d: &Diagram) -> Self {
        let faces: Vec<Vec<Corner>> = d.faces().into_iter().map(|f| f.corners).collect();
        let mut place = vec![(usize::MAX, usize::MAX); d.num_slots()];
        for (f, corners) in faces.iter().enumerate() {
            for (k, c) in corners.iter().enumerate() {
                place[d.global_offset(c.crossing) + c.corner] = (f, k);
            }
        }
        FaceGeometry { faces, place }
    }

    fn locate(&self, d: &Diagram, c: Corner) -> (usize, usize) {
        self.place[d.global_offset(c.crossing) + c.corner]
    }
}

fn check_input(d: &Diagram) -> Result<(), MovesError> {
    if d.num_crossings() == 0 {
        return Err(MovesError::NoCrossings);
    }
    if let Some(x) = d.crossings().iter().position(|c| c.order() != 2) {
        return Err(MovesError::NotClassical(x));
    }
    Ok(())
}

/// Circle around a face of even size whose corners are distinct crossings.
pub fn even_face_circle(d: &Diagram) -> Option<CoveringCircle> {
    let faces = d.faces();
    faces.iter().filter(|f| f.size() % 2 == 0).find_map(|f| {
        let mut seen: Vec<usize> = f.corners.iter().map(|c| c.crossing).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != f.size() {
            return None;
        }
        // Leaving corner j of face F means entering through the corner
        // across j's next side; stepping along the face then enters the next
        // corner's crossing through its previous side.
        let passages: Vec<Passage> = f
            .corners
            .iter()
            .map(|c| Passage { crossing: c.crossing, entry: (c.corner + 3) % 4 })
            .collect();
        let circle = CoveringCircle { passages };
        circle.validate(d).ok().map(|_| circle)
    })
}

/// Depth-first search for an even circle through crossings of `allowed`,
/// starting at its first member, of length at most `cap`. Shorter circles
/// are found first.
pub fn search_even_circle(d: &Diagram, allowed: &[usize], cap: usize) -> Option<CoveringCircle> {
    let geometry = FaceGeometry::new(d);
    let start = *allowed.first()?;
    let mut in_allowed = vec![false; d.num_crossings()];
    for &x in allowed {
        in_allowed[x] = true;
    }
    struct Dfs<'a> {
        d: &'a Diagram,
        g: &'a FaceGeometry,
        allowed: &'a [bool],
        path: Vec<Passage>,
        used: Vec<bool>,
        arcs: Vec<(usize, usize, usize)>,
        target: usize,
    }
    impl Dfs<'_> {
        fn arc_ok(&self, f: usize, a: usize, b: usize) -> bool {
            !self.arcs.iter().any(|&(h, x, y)| h == f && interleaved((x, y), (a, b)))
        }

        fn go(&mut self) -> bool {
            let last = *self.path.last().expect("started");
            let from = Corner { crossing: last.crossing, corner: last.exit() };
            let (f, a) = self.g.locate(self.d, from);
            let first = self.path[0];
            for (b, c) in self.g.faces[f].iter().enumerate() {
                if b == a {
                    continue;
                }
                if c.crossing == first.crossing {
                    if c.corner == first.entry && self.path.len() == self.target && self.arc_ok(f, a, b) {
                        self.arcs.push((f, a, b));
                        return true;
                    }
                    continue;
                }
                if self.path.len() == self.target || !self.allowed[c.crossing] || self.used[c.crossing] {
                    continue;
                }
                if !self.arc_ok(f, a, b) {
                    continue;
                }
                self.used[c.crossing] = true;
                self.path.push(Passage { crossing: c.crossing, entry: c.corner });
                self.arcs.push((f, a, b));
                if self.go() {
                    return true;
                }
                self.arcs.pop();
                self.path.pop();
                self.used[c.crossing] = false;
            }
            false
        }
    }
    for target in (2..=cap).step_by(2) {
        for entry in 0..2 {
            let mut s = Dfs {
                d,
                g: &geometry,
                allowed: &in_allowed,
                path: vec![Passage { crossing: start, entry }],
                used: vec![false; d.num_crossings()],
                arcs: Vec::new(),
                target,
            };
            s.used[start] = true;
            if s.go() {
                return Some(CoveringCircle { passages: s.path });
            }
        }
    }
    None
}

/// An even covering circle: around an even face if there is one, otherwise
/// through a crossing `x` and the crossings on the boundary of its four
/// surrounding regions, otherwise anywhere.
pub fn find_even_covering_circle(d: &Diagram) -> Result<CoveringCircle, MovesError> {
    check_input(d)?;
    if let Some(c) = even_face_circle(d) {
        return Ok(c);
    }
    let cap = 2 * d.num_crossings();
    let faces = d.faces();
    let cf = d.corner_faces();
    for x in 0..d.num_crossings() {
        let o = d.global_offset(x);
        let mut region: Vec<usize> = vec![x];
        for k in 0..4 {
            for c in &faces[cf[o + k]].corners {
                if !region.contains(&c.crossing) {
                    region.push(c.crossing);
                }
            }
        }
        if let Some(c) = search_even_circle(d, &region, cap) {
            return Ok(c);
        }
    }
    let everything: Vec<usize> = (0..d.num_crossings()).collect();
    search_even_circle(d, &everything, cap).ok_or(MovesError::NoEvenCircle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;

    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    #[test]
    fn trefoil_has_a_bigon_circle() {
        let d = parse_diagram(TREFOIL).unwrap();
        let c = find_even_covering_circle(&d).unwrap();
        assert_eq!(c.len(), 2);
        c.validate(&d).unwrap();
    }

    #[test]
    fn invalid_circles_are_rejected() {
        let d = parse_diagram(TREFOIL).unwrap();
        let repeated = CoveringCircle { passages: vec![Passage { crossing: 0, entry: 0 }; 2] };
        assert!(repeated.validate(&d).is_err());
        let good = find_even_covering_circle(&d).unwrap();
        let mut shifted = good.clone();
        shifted.passages[0].entry = (shifted.passages[0].entry + 1) % 4;
        assert!(shifted.validate(&d).is_err());
    }

    #[test]
    fn chords() {
        assert!(interleaved((0, 2), (1, 3)));
        assert!(!interleaved((0, 1), (2, 3)));
        assert!(!interleaved((0, 3), (1, 2)));
    }
}
