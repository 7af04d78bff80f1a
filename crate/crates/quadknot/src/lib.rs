//! Multi-crossing knot diagrams and the quadruple crossing number.
pub mod bounds;
pub mod bracket;
pub mod catalog;
pub mod cli;
pub mod diagram;
pub mod generate;
pub mod laurent;
pub mod moves;
pub mod verify;

pub use diagram::{parse_diagram, Crossing, CrossingType, Diagram, DiagramError};
pub use laurent::LaurentPoly;
