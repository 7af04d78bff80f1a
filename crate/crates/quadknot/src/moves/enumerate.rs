//! Exhaustive enumeration of connected diagrams with one or two quadruple
//! crossings and no classical crossings.
//!
//! Edge pairings of the `8q` ends are enumerated directly; a pairing is kept
//! when the rotation system is connected and spherical (`V - E + F = 2`).
//! Pairings equal up to rotating a crossing's ends or swapping the two
//! crossings are generated once. Every height assignment is then tried.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bracket::jones_invariant;
use crate::diagram::{Diagram, Slot};
use crate::laurent::LaurentPoly;

use super::MovesError;

/// Diagrams sharing one normalized invariant.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantClass {
    /// Normalized bracket in `A`.
    pub jones: LaurentPoly,
    pub components: usize,
    /// Number of (pairing, heights) combinations realising it.
    pub count: usize,
    /// First realising diagram in enumeration order.
    #[serde(serialize_with = "serialize_code")]
    pub example: Diagram,
}

fn serialize_code<S: serde::Serializer>(d: &Diagram, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&d.to_code())
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub q: usize,
    /// Planar connected pairings up to symmetry.
    pub maps: usize,
    pub diagrams: usize,
    /// Sorted by component count, then the invariant's text.
    pub classes: Vec<InvariantClass>,
}

impl Enumeration {
    /// Classes of one-component diagrams.
    pub fn knots(&self) -> impl Iterator<Item = &InvariantClass> {
        self.classes.iter().filter(|c| c.components == 1)
    }

    pub fn contains(&self, jones: &LaurentPoly) -> bool {
        self.classes.iter().any(|c| &c.jones == jones)
    }
}

/// All height assignments of an order-4 crossing, lexicographic.
fn all_heights() -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for a in 1..=4u8 {
        for b in 1..=4u8 {
            for c in 1..=4u8 {
                for d in 1..=4u8 {
                    let h = vec![a, b, c, d];
                    let mut s = h.clone();
                    s.sort_unstable();
                    if s == [1, 2, 3, 4] {
                        out.push(h);
                    }
                }
            }
        }
    }
    out
}

/// Perfect matchings of `0..n` as partner arrays, lexicographic.
fn matchings(n: usize) -> Vec<Vec<u8>> {
    fn rec(p: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let Some(lo) = p.iter().position(|&x| x == u8::MAX) else {
            out.push(p.clone());
            return;
        };
        for j in lo + 1..p.len() {
            if p[j] == u8::MAX {
                p[lo] = j as u8;
                p[j] = lo as u8;
                rec(p, out);
                p[lo] = u8::MAX;
                p[j] = u8::MAX;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![u8::MAX; n], &mut out);
    out
}

fn is_spherical_and_connected(p: &[u8], q: usize) -> bool {
    let n = p.len();
    let next = |g: usize| (g / 8) * 8 + (g % 8 + 1) % 8;
    let mut seen = vec![false; n];
    let mut faces = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        faces += 1;
        let mut g = s;
        while !seen[g] {
            seen[g] = true;
            g = next(p[g] as usize);
        }
    }
    let connected = q == 1 || (0..8).any(|g| p[g] as usize >= 8);
    connected && q + faces == n / 2 + 2
}

/// Image of a pairing under rotating crossing `x`'s ends by `r[x]`, then
/// optionally swapping the two crossings.
fn transform(p: &[u8], r: &[usize], swap: bool) -> Vec<u8> {
    let q = p.len() / 8;
    let map = |g: usize| {
        let (x, k) = (g / 8, g % 8);
        let x2 = if swap { q - 1 - x } else { x };
        x2 * 8 + (k + r[x]) % 8
    };
    let mut out = vec![0u8; p.len()];
    for g in 0..p.len() {
        out[map(g)] = map(p[g] as usize) as u8;
    }
    out
}

fn canonical(p: &[u8]) -> Vec<u8> {
    let q = p.len() / 8;
    let mut best = p.to_vec();
    let rots: Vec<Vec<usize>> = if q == 1 {
        (0..8).map(|a| vec![a]).collect()
    } else {
        (0..64).map(|i| vec![i / 8, i % 8]).collect()
    };
    for r in &rots {
        for swap in [false, true] {
            if swap && q == 1 {
                continue;
            }
            let t = transform(p, r, swap);
            if t < best {
                best = t;
            }
        }
    }
    best
}

/// Planar connected pairings of `q` order-4 crossings, one per symmetry class.
pub fn planar_maps(q: usize) -> Result<Vec<Vec<u8>>, MovesError> {
    if !(1..=2).contains(&q) {
        return Err(MovesError::UnsupportedEnumeration(q));
    }
    let mut maps: Vec<Vec<u8>> = matchings(8 * q)
        .into_par_iter()
        .filter(|p| is_spherical_and_connected(p, q))
        .filter(|p| canonical(p) == *p)
        .collect();
    maps.sort();
    Ok(maps)
}

fn to_diagram(p: &[u8], heights: Vec<Vec<u8>>) -> Diagram {
    let links: Vec<(Slot, Slot)> = (0..p.len())
        .filter(|&g| g < p[g] as usize)
        .map(|g| {
            let h = p[g] as usize;
            (Slot { crossing: g / 8, index: g % 8 }, Slot { crossing: h / 8, index: h % 8 })
        })
        .collect();
    Diagram::from_links(heights, &links).expect("pairing was checked planar and connected")
}

/// Every connected diagram with exactly `q` order-4 crossings, grouped by
/// normalized invariant. Deterministic regardless of thread count.
pub fn enumerate_quad_diagrams(q: usize) -> Result<Enumeration, MovesError> {
    let maps = planar_maps(q)?;
    let hs = all_heights();
    let assignments: Vec<Vec<Vec<u8>>> = if q == 1 {
        hs.iter().map(|h| vec![h.clone()]).collect()
    } else {
        hs.iter().flat_map(|a| hs.iter().map(move |b| vec![a.clone(), b.clone()])).collect()
    };
    let results: Vec<(LaurentPoly, usize, Diagram)> = maps
        .par_iter()
        .flat_map_iter(|p| {
            assignments.iter().map(move |h| {
                let d = to_diagram(p, h.clone());
                (jones_invariant(&d), d.num_components(), d)
            })
        })
        .collect();
    let diagrams = results.len();
    let mut classes: BTreeMap<(usize, String), InvariantClass> = BTreeMap::new();
    for (jones, components, d) in results {
        classes
            .entry((components, jones.to_string()))
            .and_modify(|c| c.count += 1)
            .or_insert(InvariantClass { jones, components, count: 1, example: d });
    }
    Ok(Enumeration { q, maps: maps.len(), diagrams, classes: classes.into_values().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_crossing_maps_are_the_noncrossing_closures() {
        // 14 noncrossing matchings up to rotation.
        let maps = planar_maps(1).unwrap();
        assert!(!maps.is_empty());
        for p in &maps {
            assert!(is_spherical_and_connected(p, 1));
        }
        let all: usize = matchings(8).iter().filter(|p| is_spherical_and_connected(p, 1)).count();
        assert_eq!(all, 14);
    }

    #[test]
    fn out_of_range() {
        assert_eq!(planar_maps(3).unwrap_err(), MovesError::UnsupportedEnumeration(3));
    }
}
