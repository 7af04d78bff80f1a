//! Constructive upper bounds on the quadruple crossing number.

mod circle;
mod decompose;
mod enumerate;
mod flype;
mod fold;
mod isotopy;
mod tangle;

pub use decompose::{best_set_decomposition, candidate_parts, realize, set_decompose, set_decompose_with, Part, PartKind, PartRules, SetDecomposition, SquareRule, Witness};
pub use circle::{even_face_circle, find_even_covering_circle, search_even_circle, CoveringCircle, Passage};
pub use enumerate::{enumerate_quad_diagrams, planar_maps, Enumeration, InvariantClass};
pub use flype::{canonical_code, flype, flype_orbit, flype_sites, FlypeSite};
pub use tangle::{boundary, match_tangle, tangle_sets, tangle_vector, CappedCrossing, Certificate, TangleMatch, TangleVector};
pub use fold::{convert_all, convert_crossing, fold_and_convert, quad_fold};

use thiserror::Error;

use crate::bracket::BracketError;
use crate::diagram::DiagramError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MovesError {
    #[error("crossing {0} is not a classical crossing")]
    NotClassical(usize),
    #[error("crossing {0} does not exist")]
    NoSuchCrossing(usize),
    #[error("diagram is not alternating")]
    NotAlternating,
    #[error("diagram is not reduced")]
    NotReduced,
    #[error("diagram has no crossings")]
    NoCrossings,
    #[error("invalid covering circle: {0}")]
    InvalidCircle(String),
    #[error("covering circle has odd length {0}")]
    OddCircle(usize),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("no even covering circle found")]
    NoEvenCircle,
    #[error("enumeration supports 1 or 2 crossings, not {0}")]
    UnsupportedEnumeration(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Bracket(#[from] BracketError),
}
