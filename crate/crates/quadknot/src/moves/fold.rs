//! Rewrites that trade classical crossings for quadruple ones.

use crate::diagram::{Diagram, Slot};

use super::circle::{find_even_covering_circle, CoveringCircle};
use super::MovesError;

/// Rebuilds `d` with new heights, sending every old slot through `map` and
/// adding `extra` links.
fn rebuild(
    d: &Diagram,
    heights: Vec<Vec<u8>>,
    map: impl Fn(Slot) -> Slot,
    extra: Vec<(Slot, Slot)>,
) -> Result<Diagram, MovesError> {
    let mut links = extra;
    for g in 0..d.num_slots() {
        let p = d.partner_global(g);
        if g < p {
            links.push((map(d.slot(g)), map(d.slot(p))));
        }
    }
    Ok(Diagram::from_links(heights, &links)?)
}

/// Replaces classical crossing `x` by a quadruple crossing: the under strand
/// is folded back twice through the crossing point, beneath the over strand.
/// The two folds are kinks, so the bracket changes by a unit `(-A^3)^k`.
pub fn convert_crossing(d: &Diagram, x: usize) -> Result<Diagram, MovesError> {
    if x >= d.num_crossings() {
        return Err(MovesError::NoSuchCrossing(x));
    }
    let c = d.crossing(x);
    if c.order() != 2 {
        return Err(MovesError::NotClassical(x));
    }
    let u = if c.heights()[0] == 2 { 0 } else { 1 };
    let mut heights: Vec<Vec<u8>> = d.crossings().iter().map(|c| c.heights().to_vec()).collect();
    // Strands (0,4), (1,5), (2,6) are the zigzag of the under strand, (3,7) the over strand.
    heights[x] = vec![2, 3, 4, 1];
    let new = |index| Slot { crossing: x, index };
    let map = |s: Slot| {
        if s.crossing != x {
            return s;
        }
        match (s.index + 4 - u) % 4 {
            0 => new(0),
            1 => new(3),
            2 => new(6),
            _ => new(7),
        }
    };
    rebuild(d, heights, map, vec![(new(1), new(2)), (new(4), new(5))])
}

/// Converts every classical crossing.
pub fn convert_all(d: &Diagram) -> Result<Diagram, MovesError> {
    let mut out = d.clone();
    for x in 0..d.num_crossings() {
        if d.crossing(x).order() == 2 {
            out = convert_crossing(&out, x)?;
        }
    }
    Ok(out)
}

/// Quadruple folding along an even covering circle: the two strands of the
/// first passage's crossing are stretched along the circle, one above and one
/// below everything, through each other passage. The `n` circle crossings
/// become `n - 1` quadruple crossings; the rest are untouched.
pub fn quad_fold(d: &Diagram, circle: &CoveringCircle) -> Result<Diagram, MovesError> {
    circle.validate(d)?;
    let n = circle.len();
    if n % 2 == 1 {
        return Err(MovesError::OddCircle(n));
    }
    let ps = &circle.passages;
    let x0 = ps[0].crossing;
    let c0 = ps[0].entry;
    let renumber = |x: usize| if x > x0 { x - 1 } else { x };
    // Position on the circle of each crossing, if any.
    let mut position = vec![None; d.num_crossings()];
    for (j, p) in ps.iter().enumerate() {
        position[p.crossing] = Some(j);
    }
    let at = |j: usize, index: usize| Slot { crossing: renumber(ps[j].crossing), index };
    let h0 = d.crossing(x0).heights();
    // The chain entering through the old slot `c0 + 1` carries strand (1,5)
    // at passages an even number of steps from the last one.
    let first_chain_over = h0[(c0 + 1) % 2] == 1;
    let mut heights = Vec::with_capacity(d.num_crossings() - 1);
    for (x, c) in d.crossings().iter().enumerate() {
        match position[x] {
            Some(0) => continue,
            None => heights.push(c.heights().to_vec()),
            Some(j) => {
                let e = ps[j].entry;
                let orig = |slot: usize| if c.heights()[slot % 2] == 1 { 2 } else { 3 };
                let (top, bottom) = (1, 4);
                let first_on_15 = (n - 1 - j).is_multiple_of(2);
                let (h1, h2) = match (first_chain_over, first_on_15) {
                    (true, true) | (false, false) => (top, bottom),
                    _ => (bottom, top),
                };
                heights.push(vec![orig(e), h1, h2, orig(e + 1)]);
            }
        }
    }
    let map = |s: Slot| match position[s.crossing] {
        None => Slot { crossing: renumber(s.crossing), index: s.index },
        Some(0) => match (s.index + 4 - c0) % 4 {
            0 => at(n - 1, 6),
            1 => at(n - 1, 5),
            2 => at(1, 2),
            _ => at(1, 1),
        },
        Some(j) => {
            let index = match (s.index + 4 - ps[j].entry) % 4 {
                0 => 0,
                1 => 3,
                2 => 4,
                _ => 7,
            };
            at(j, index)
        }
    };
    let chain: Vec<(Slot, Slot)> = (1..n - 1)
        .flat_map(|j| [(at(j, 5), at(j + 1, 2)), (at(j, 6), at(j + 1, 1))])
        .collect();
    rebuild(d, heights, map, chain)
}

/// The full constructive bound: fold along an even covering circle, then
/// convert every remaining classical crossing. The result has one crossing
/// fewer than `d`, all quadruple.
pub fn fold_and_convert(d: &Diagram) -> Result<(CoveringCircle, Diagram), MovesError> {
    let circle = find_even_covering_circle(d)?;
    let folded = quad_fold(d, &circle)?;
    Ok((circle, convert_all(&folded)?))
}
