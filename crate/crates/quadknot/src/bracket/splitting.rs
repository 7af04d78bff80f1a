//! Noncrossing matchings of the eight boundary points of a quadruple crossing.

use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Noncrossing perfect matching of the points `0..8`, listed clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Splitting {
    partner: [u8; 8],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    /// Four parallel arcs.
    Parallel,
    /// Four arcs each joining neighbouring points.
    U,
    /// Two parallel arcs and two U arcs.
    Mixed,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("not a noncrossing perfect matching of 8 points")]
    NotNoncrossing,
    #[error("points {0} and {1} do not name two adjacent arcs")]
    InvalidSite(u8, u8),
}

impl Splitting {
    /// All 14 splittings in lexicographic order of their partner arrays.
    pub fn all() -> &'static [Splitting] {
        static ALL: OnceLock<Vec<Splitting>> = OnceLock::new();
        ALL.get_or_init(|| {
            fn rec(partner: &mut [u8; 8], out: &mut Vec<Splitting>) {
                let Some(lo) = (0..8).find(|&k| partner[k] == u8::MAX) else {
                    if let Ok(s) = Splitting::from_partner(*partner) {
                        out.push(s);
                    }
                    return;
                };
                for j in lo + 1..8 {
                    if partner[j] == u8::MAX {
                        partner[lo] = j as u8;
                        partner[j] = lo as u8;
                        rec(partner, out);
                        partner[lo] = u8::MAX;
                        partner[j] = u8::MAX;
                    }
                }
            }
            let mut out = Vec::new();
            rec(&mut [u8::MAX; 8], &mut out);
            out.sort();
            out
        })
    }

    pub fn from_partner(partner: [u8; 8]) -> Result<Self, SplitError> {
        let ok = (0..8).all(|k| {
            let p = partner[k] as usize;
            p < 8 && p != k && partner[p] as usize == k
        });
        let s = Splitting { partner };
        if ok && s.is_noncrossing() {
            Ok(s)
        } else {
            Err(SplitError::NotNoncrossing)
        }
    }

    pub fn from_pairs(pairs: &[(u8, u8)]) -> Result<Self, SplitError> {
        let mut partner = [u8::MAX; 8];
        for &(a, b) in pairs {
            if a >= 8 || b >= 8 || partner[a as usize] != u8::MAX || partner[b as usize] != u8::MAX {
                return Err(SplitError::NotNoncrossing);
            }
            partner[a as usize] = b;
            partner[b as usize] = a;
        }
        Self::from_partner(partner)
    }

    fn is_noncrossing(&self) -> bool {
        let pairs = self.pairs();
        pairs.iter().all(|&(a, b)| {
            pairs.iter().all(|&(c, d)| {
                let inside = |x: u8| a < x && x < b;
                inside(c) == inside(d) || (c, d) == (a, b)
            })
        })
    }

    pub fn partner(&self, k: u8) -> u8 {
        self.partner[k as usize]
    }

    pub fn partners(&self) -> &[u8; 8] {
        &self.partner
    }

    /// Arcs `(a, b)` with `a < b`, ascending.
    pub fn pairs(&self) -> Vec<(u8, u8)> {
        (0..8u8).filter(|&k| k < self.partner[k as usize]).map(|k| (k, self.partner[k as usize])).collect()
    }

    /// Position in `Splitting::all()`.
    pub fn index(&self) -> usize {
        Self::all().binary_search(self).expect("every splitting is listed")
    }

    pub fn kind(&self) -> SplitKind {
        let adjacent = self.pairs().iter().filter(|&&(a, b)| b - a == 1 || b - a == 7).count();
        match adjacent {
            2 => SplitKind::Parallel,
            4 => SplitKind::U,
            _ => SplitKind::Mixed,
        }
    }

    /// Image under the reflection reversing the clockwise order.
    pub fn reflect(&self) -> Splitting {
        self.map_points(|k| (8 - k) % 8)
    }

    /// Image under rotating every point forward by `t`.
    pub fn rotate(&self, t: u8) -> Splitting {
        self.map_points(|k| (k + t) % 8)
    }

    fn map_points(&self, f: impl Fn(u8) -> u8) -> Splitting {
        let mut partner = [0u8; 8];
        for k in 0..8u8 {
            partner[f(k) as usize] = f(self.partner[k as usize]);
        }
        Splitting { partner }
    }

    /// Replaces the arcs through points `a` and `b` by the other noncrossing
    /// pair of arcs on the same four endpoints.
    pub fn split_move(&self, a: u8, b: u8) -> Result<Splitting, SplitError> {
        if a >= 8 || b >= 8 {
            return Err(SplitError::InvalidSite(a, b));
        }
        let (pa, pb) = (self.partner(a), self.partner(b));
        if pa == b || a == b {
            return Err(SplitError::InvalidSite(a, b));
        }
        for (x, y, z, w) in [(a, b, pa, pb), (a, pb, pa, b)] {
            let mut partner = self.partner;
            partner[x as usize] = y;
            partner[y as usize] = x;
            partner[z as usize] = w;
            partner[w as usize] = z;
            if let Ok(s) = Splitting::from_partner(partner) {
                return Ok(s);
            }
        }
        Err(SplitError::InvalidSite(a, b))
    }

    /// Every splitting one split move away.
    pub fn neighbours(&self) -> Vec<Splitting> {
        let mut out: Vec<Splitting> = self
            .pairs()
            .iter()
            .flat_map(|&(a, _)| self.pairs().into_iter().map(move |(b, _)| (a, b)))
            .filter(|(a, b)| a < b)
            .filter_map(|(a, b)| self.split_move(a, b).ok())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_split_move_from(&self, other: &Splitting) -> bool {
        let differing = (0..8).filter(|&k| self.partner[k] != other.partner[k]).count();
        differing == 4
    }
}

impl fmt::Display for Splitting {
    /// Arcs as `01-23-47-56`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{a}{b}")).collect();
        f.write_str(&parts.join("-"))
    }
}

impl Serialize for Splitting {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn census() {
        let all = Splitting::all();
        assert_eq!(all.len(), 14);
        let count = |k| all.iter().filter(|s| s.kind() == k).count();
        assert_eq!((count(SplitKind::Parallel), count(SplitKind::U), count(SplitKind::Mixed)), (4, 2, 8));
    }

    #[test]
    fn split_move_is_an_involution() {
        for s in Splitting::all() {
            for (a, _) in s.pairs() {
                for (b, _) in s.pairs() {
                    if let Ok(t) = s.split_move(a, b) {
                        assert!(t.is_split_move_from(s));
                        assert_eq!(t.split_move(a, s.partner(a)).unwrap(), *s);
                    }
                }
            }
        }
    }

    #[test]
    fn u_splitting_reaches_parallel_in_one_move() {
        let u = Splitting::from_pairs(&[(0, 1), (2, 3), (4, 5), (6, 7)]).unwrap();
        let t = u.split_move(1, 2).unwrap();
        assert_eq!(t, Splitting::from_pairs(&[(0, 3), (1, 2), (4, 5), (6, 7)]).unwrap());
        assert_eq!(t.kind(), SplitKind::Mixed);
        // Opposite arcs of a U share the central region.
        let p = u.split_move(0, 4).unwrap();
        assert_eq!(p, Splitting::from_pairs(&[(0, 5), (1, 4), (2, 3), (6, 7)]).unwrap());
        assert_eq!(p.kind(), SplitKind::Parallel);
        let shared = u.pairs().iter().filter(|pair| p.pairs().contains(pair)).count();
        assert_eq!(shared, 2);
        // Arcs separated by others cannot be exchanged.
        let v = Splitting::from_pairs(&[(0, 1), (2, 7), (3, 6), (4, 5)]).unwrap();
        assert_eq!(v.kind(), SplitKind::Parallel);
        assert!(v.split_move(0, 4).is_err());
    }

    #[test]
    fn split_move_graph_is_connected() {
        let all = Splitting::all();
        let mut seen = BTreeSet::from([all[0]]);
        let mut stack = vec![all[0]];
        while let Some(s) = stack.pop() {
            for t in s.neighbours() {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        assert_eq!(seen.len(), 14);
    }

    #[test]
    fn invalid_sites() {
        let p = Splitting::from_pairs(&[(0, 7), (1, 6), (2, 5), (3, 4)]).unwrap();
        assert_eq!(p.split_move(0, 3), Err(SplitError::InvalidSite(0, 3)));
        assert_eq!(p.split_move(0, 7), Err(SplitError::InvalidSite(0, 7)));
        assert!(Splitting::from_pairs(&[(0, 2), (1, 3), (4, 5), (6, 7)]).is_err());
    }

    #[test]
    fn reflection_and_rotation_preserve_kind() {
        for s in Splitting::all() {
            assert_eq!(s.reflect().kind(), s.kind());
            assert_eq!(s.rotate(3).kind(), s.kind());
            assert_eq!(s.reflect().reflect(), *s);
        }
    }
}
