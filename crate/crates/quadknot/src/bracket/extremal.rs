//! High and low states of an all-quadruple diagram and the exponent bounds
//! they give for the bracket.

use std::collections::BTreeSet;

use serde::Serialize;

use super::skein::SkeinTable;
use super::splitting::Splitting;
use super::statesum::loop_ids;
use super::BracketError;
use crate::diagram::{CrossingType, Diagram};

/// A choice of splitting at every crossing (in the crossing's own frame) and
/// the number of circles it produces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct State {
    pub choice: Vec<Splitting>,
    pub circles: usize,
}

struct Frame {
    top: u8,
    kind: CrossingType,
}

impl Frame {
    fn lift(&self, s: &Splitting) -> Splitting {
        s.rotate(self.top)
    }
}

fn frames(d: &Diagram) -> Result<Vec<Frame>, BracketError> {
    d.crossings()
        .iter()
        .enumerate()
        .map(|(x, c)| {
            let kind = c.crossing_type().map_err(|_| BracketError::NotQuadruple(x))?;
            let top = c.heights().iter().position(|&h| h == 1).expect("permutation") as u8;
            Ok(Frame { top, kind })
        })
        .collect()
}

fn is_special(t: CrossingType) -> bool {
    matches!(t, CrossingType::T1243 | CrossingType::T1342)
}

fn circles(d: &Diagram, choice: &[Splitting]) -> usize {
    let arrays: Vec<&[u8]> = choice.iter().map(|s| &s.partners()[..]).collect();
    loop_ids(d, &arrays).1
}

/// Distinct circles of the state passing through crossing `x`.
fn circles_at(d: &Diagram, choice: &[Splitting], x: usize) -> usize {
    let arrays: Vec<&[u8]> = choice.iter().map(|s| &s.partners()[..]).collect();
    let (ids, _) = loop_ids(d, &arrays);
    let off = d.global_offset(x);
    (0..8).map(|k| ids[off + k]).collect::<BTreeSet<_>>().len()
}

/// Cartesian product in lexicographic order, first factor most significant.
fn product(options: &[Vec<Splitting>]) -> Vec<Vec<Splitting>> {
    let mut out = vec![Vec::new()];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.push(*o);
                    p
                })
            })
            .collect();
    }
    out
}

/// Picks, among all combinations of `options` at the crossings listed in
/// `free`, the first one maximizing the circle count after `settle`.
fn best_choice(
    d: &Diagram,
    base: &[Splitting],
    free: &[usize],
    options: &[Vec<Splitting>],
    mut settle: impl FnMut(&mut Vec<Splitting>),
) -> State {
    let mut best: Option<State> = None;
    for combo in product(options) {
        let mut choice = base.to_vec();
        for (&x, s) in free.iter().zip(&combo) {
            choice[x] = *s;
        }
        settle(&mut choice);
        let c = circles(d, &choice);
        if best.as_ref().is_none_or(|b| c > b.circles) {
            best = Some(State { choice, circles: c });
        }
    }
    best.expect("at least one combination")
}

/// `(s_max, s_min)`. High splittings are first-level splits, ties broken
/// toward more circles; types 1243/1342 switch to their parallel
/// second-level split when it meets four circles, or meets two while the
/// parallel fourth-level split meets four. Low splittings dually use the
/// last level, and the parallel fourth-level split wherever the high state
/// used the parallel second-level one.
pub fn extreme_states(d: &Diagram, table: &SkeinTable) -> Result<(State, State), BracketError> {
    let frames = frames(d)?;
    let n = frames.len();
    if n == 0 {
        let empty = State { choice: Vec::new(), circles: 1 };
        return Ok((empty.clone(), empty));
    }
    let tt = |x: usize| table.get(frames[x].kind);
    let first: Vec<Vec<Splitting>> = (0..n).map(|x| tt(x).level(1).iter().map(|s| frames[x].lift(s)).collect()).collect();
    let last: Vec<Vec<Splitting>> = (0..n)
        .map(|x| tt(x).level(tt(x).num_levels()).iter().map(|s| frames[x].lift(s)).collect())
        .collect();
    let par2: Vec<Option<Splitting>> = (0..n).map(|x| tt(x).parallel_at(2).map(|s| frames[x].lift(&s))).collect();
    let par4: Vec<Option<Splitting>> = (0..n)
        .map(|x| tt(x).parallel_at(tt(x).num_levels() - 1).map(|s| frames[x].lift(&s)))
        .collect();
    let special: Vec<usize> = (0..n).filter(|&x| is_special(frames[x].kind)).collect();

    let free_max: Vec<usize> = (0..n).filter(|x| !special.contains(x)).collect();
    let opts_max: Vec<Vec<Splitting>> = free_max.iter().map(|&x| first[x].clone()).collect();
    let base_max: Vec<Splitting> = (0..n).map(|x| first[x][0]).collect();
    let s_max = best_choice(d, &base_max, &free_max, &opts_max, |choice| {
        for _ in 0..=special.len() {
            let mut changed = false;
            for &x in &special {
                let (Some(p2), Some(p4)) = (par2[x], par4[x]) else { continue };
                if choice[x] == p2 {
                    continue;
                }
                let mut trial = choice.clone();
                trial[x] = p2;
                let meet2 = circles_at(d, &trial, x);
                let switch = meet2 == 4 || {
                    meet2 == 2 && {
                        trial[x] = p4;
                        circles_at(d, &trial, x) == 4
                    }
                };
                if switch {
                    choice[x] = p2;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    });

    let used_par2 = |x: usize| par2[x].is_some_and(|p| s_max.choice[x] == p);
    let free_min: Vec<usize> = (0..n).filter(|x| !special.contains(x)).collect();
    let opts_min: Vec<Vec<Splitting>> = free_min.iter().map(|&x| last[x].clone()).collect();
    let base_min: Vec<Splitting> = (0..n)
        .map(|x| if used_par2(x) { par4[x].expect("special types have a parallel fourth level") } else { last[x][0] })
        .collect();
    let s_min = best_choice(d, &base_min, &free_min, &opts_min, |_| {});
    Ok((s_max, s_min))
}

/// Right-hand sides of the bounds on the extreme exponents of the bracket.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentBounds {
    /// Upper bound on the highest exponent.
    pub max: i64,
    /// Lower bound on the lowest exponent.
    pub min: i64,
    pub s_max: usize,
    pub s_min: usize,
}

impl ExponentBounds {
    pub fn span_bound(&self) -> i64 {
        self.max - self.min
    }
}

pub fn exponent_bounds(d: &Diagram, table: &SkeinTable) -> Result<ExponentBounds, BracketError> {
    let (hi, lo) = extreme_states(d, table)?;
    let counts = d.type_counts();
    let c = |t: CrossingType| *counts.get(&t).unwrap_or(&0) as i64;
    let middle = c(CrossingType::T1342) + c(CrossingType::T1243) + c(CrossingType::T1324) + c(CrossingType::T1423);
    let (smax, smin) = (hi.circles as i64, lo.circles as i64);
    let max = 6 * c(CrossingType::T1432) + 4 * middle + 2 * c(CrossingType::T1234) + 2 * smax - 2;
    let min = -2 * c(CrossingType::T1432) - 4 * middle - 6 * c(CrossingType::T1234) - (2 * smin - 2);
    Ok(ExponentBounds { max, min, s_max: hi.circles, s_min: lo.circles })
}
