//! Kauffman bracket state sums, quadruple-crossing skein relations and the
//! extremal states that bound the bracket's span.

mod extremal;
mod skein;
mod splitting;
pub mod statesum;

pub use extremal::{exponent_bounds, extreme_states, ExponentBounds, State};
pub use skein::{
    derive_skein_table, derive_skein_table_with, derive_type_table, skein_table, tangle_coefficients, type_json,
    verify_level_adjacency, AdjacencyReport, AdjacencyViolation, SkeinTable, TypeTable,
};
pub use splitting::{SplitError, SplitKind, Splitting};

use thiserror::Error;

use crate::diagram::{Crossing, Diagram, DiagramError, Orientation};
use crate::laurent::LaurentPoly;
use statesum::LocalOption;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BracketError {
    #[error("crossing {0} has order 4; resolve the diagram or use the quadruple state sum")]
    NotClassical(usize),
    #[error("crossing {0} has order 2; extremal states need an all-quadruple diagram")]
    NotQuadruple(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// The A- and B-smoothings of a classical crossing with heights `h` as
/// partner arrays over its four ends, with their exponents `+1` and `-1`.
/// The A-smoothing joins each end of the under strand to the end preceding
/// it clockwise.
pub fn classical_pairings(h: [u8; 2]) -> [([u8; 4], i64); 2] {
    let u = if h[0] > h[1] { 0 } else { 1 };
    let pairs = |a: usize, b: usize, c: usize, e: usize| {
        let mut p = [0u8; 4];
        for (x, y) in [(a, b), (c, e)] {
            p[x % 4] = (y % 4) as u8;
            p[y % 4] = (x % 4) as u8;
        }
        p
    };
    [(pairs(u, u + 3, u + 1, u + 2), 1), (pairs(u, u + 1, u + 2, u + 3), -1)]
}

fn classical_options(c: &Crossing) -> Vec<LocalOption> {
    let h = [c.heights()[0], c.heights()[1]];
    classical_pairings(h)
        .into_iter()
        .map(|(p, e)| (p.to_vec(), LaurentPoly::monomial(1, e)))
        .collect()
}

/// Local options of every crossing: classical smoothings for order 2,
/// skein coefficients for order 4.
pub fn local_expansions(d: &Diagram, table: &SkeinTable) -> Vec<Vec<LocalOption>> {
    d.crossings()
        .iter()
        .map(|c| match c.crossing_type() {
            Ok(t) => {
                let top = c.heights().iter().position(|&h| h == 1).expect("permutation");
                table.get(t).local_options(top)
            }
            Err(_) => classical_options(c),
        })
        .collect()
}

fn classical_expansions(d: &Diagram) -> Result<Vec<Vec<LocalOption>>, BracketError> {
    d.crossings()
        .iter()
        .enumerate()
        .map(|(x, c)| if c.order() == 2 { Ok(classical_options(c)) } else { Err(BracketError::NotClassical(x)) })
        .collect()
}

/// Kauffman bracket of an all-order-2 diagram.
pub fn kauffman_bracket(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    Ok(statesum::contract(d, &classical_expansions(d)?))
}

/// Kauffman bracket by enumerating all `2^c` states.
pub fn kauffman_bracket_naive(d: &Diagram) -> Result<LaurentPoly, BracketError> {
    Ok(statesum::brute_force(d, &classical_expansions(d)?))
}

/// Bracket computed directly from quadruple-crossing skein coefficients.
pub fn quad_bracket(d: &Diagram, table: &SkeinTable) -> LaurentPoly {
    statesum::contract(d, &local_expansions(d, table))
}

/// Same sum as `quad_bracket` by enumerating every state (up to `14^q`).
pub fn quad_bracket_naive(d: &Diagram, table: &SkeinTable) -> LaurentPoly {
    statesum::brute_force(d, &local_expansions(d, table))
}

/// `(-A)^(-3w) <d>`, invariant under all Reidemeister moves.
pub fn normalized_jones(d: &Diagram, orientation: &Orientation) -> Result<LaurentPoly, BracketError> {
    let w = d.writhe(orientation)?;
    let b = quad_bracket(d, skein_table());
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(b.shift(-3 * w).scale(&sign.into()))
}

/// Normalized bracket with the canonical orientation.
pub fn jones_invariant(d: &Diagram) -> LaurentPoly {
    normalized_jones(d, &d.orientation()).expect("canonical orientation fits")
}
