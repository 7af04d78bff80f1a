//! Lower bounds on the quadruple crossing number and their aggregation with
//! the constructive upper bounds.

use serde::Serialize;

use crate::bracket::{jones_invariant, kauffman_bracket, quad_bracket, skein_table};
use crate::diagram::Diagram;
use crate::laurent::LaurentPoly;
use crate::moves::{best_set_decomposition, fold_and_convert, Enumeration, MovesError, PartRules};

/// Every order-4 crossing resolves into six classical ones.
pub fn lb_resolution(c: usize) -> usize {
    c.div_ceil(6)
}

/// The bracket of a diagram with `q` quadruple crossings spans at most `16q`.
pub fn lb_span(span: usize) -> usize {
    span.div_ceil(16)
}

/// Alternating knots have bracket span `4c`.
pub fn lb_alternating(c: usize) -> usize {
    c.div_ceil(4)
}

/// From the span of the `(r, s)` torus knot's bracket.
pub fn lb_torus(r: u32, s: u32) -> usize {
    ((r + s).saturating_sub(2) as usize).div_ceil(4)
}

/// Exhaustive lists of small quadruple diagrams. A knot whose invariant
/// (or its mirror's) is missing from every list up to `q` needs more than
/// `q` quadruple crossings.
#[derive(Clone, Debug, Default)]
pub struct Census {
    pub levels: Vec<Enumeration>,
}

impl Census {
    pub fn new(mut levels: Vec<Enumeration>) -> Self {
        levels.sort_by_key(|e| e.q);
        Census { levels }
    }

    /// Smallest `q` whose list holds a one-component class with this invariant.
    pub fn first_level(&self, jones: &LaurentPoly) -> Option<usize> {
        let mirror = jones.substitute_inverse();
        self.levels
            .iter()
            .find(|e| e.knots().any(|c| c.jones == *jones || c.jones == mirror))
            .map(|e| e.q)
    }

    /// `q + 1` for the largest complete level `q` with no match. Levels must
    /// be consecutive from 1 to count.
    pub fn lower_bound(&self, jones: &LaurentPoly) -> Option<usize> {
        let consecutive = self.levels.iter().enumerate().all(|(i, e)| e.q == i + 1);
        if !consecutive || self.levels.is_empty() || *jones == LaurentPoly::one() {
            return None;
        }
        let hit = self.first_level(jones);
        let excluded = hit.map_or(self.levels.len(), |q| q - 1);
        (excluded > 0).then_some(excluded + 1)
    }
}

/// What the caller knows about the diagram beyond its code.
#[derive(Clone, Copy, Debug, Default)]
pub struct KnotFacts<'a> {
    /// The diagram has the knot's minimal classical crossing number.
    pub minimal: bool,
    /// Torus knot parameters.
    pub torus: Option<(u32, u32)>,
    pub census: Option<&'a Census>,
    pub rules: PartRules,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: usize,
    pub rule: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperBound {
    pub value: usize,
    pub rule: &'static str,
    pub witness: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub crossings: usize,
    pub span: i64,
    pub lower: Vec<LowerBound>,
    pub upper: Vec<UpperBound>,
    pub best_lower: usize,
    pub best_upper: usize,
    pub determined: bool,
    /// A lower bound exceeds an upper one: some rule in use is unsound.
    pub conflict: bool,
    /// Set exactly when determined.
    pub q: Option<usize>,
}

impl BoundsReport {
    fn finish(crossings: usize, span: i64, lower: Vec<LowerBound>, upper: Vec<UpperBound>) -> Self {
        let best_lower = lower.iter().map(|b| b.value).max().unwrap_or(0);
        let best_upper = upper.iter().map(|b| b.value).min().expect("conversion bound always applies");
        let determined = best_lower == best_upper;
        BoundsReport {
            crossings,
            span,
            lower,
            upper,
            best_lower,
            best_upper,
            determined,
            conflict: best_lower > best_upper,
            q: determined.then_some(best_lower),
        }
    }

    pub fn rule_for_upper(&self) -> Option<&UpperBound> {
        self.upper.iter().find(|u| u.value == self.best_upper)
    }
}

/// All lower bounds that apply and every upper bound the moves can build.
pub fn combine(d: &Diagram, facts: &KnotFacts) -> Result<BoundsReport, MovesError> {
    let classical = d.count_order(2);
    let quads = d.count_order(4);
    let bracket = if quads == 0 { kauffman_bracket(d)? } else { quad_bracket(d, skein_table()) };
    let span = bracket.span();
    let knot = d.num_components() == 1;
    let nontrivial = !(knot && jones_invariant(d) == LaurentPoly::one());

    let mut lower = Vec::new();
    if nontrivial && span > 0 {
        lower.push(LowerBound { value: lb_span(span as usize), rule: "bracket span" });
    }
    if facts.minimal && quads == 0 {
        lower.push(LowerBound { value: lb_resolution(classical), rule: "resolution" });
    }
    let reduced_alternating = quads == 0 && classical > 0 && d.is_alternating() && d.is_reduced();
    if reduced_alternating {
        lower.push(LowerBound { value: lb_alternating(classical), rule: "alternating" });
    }
    if let Some((r, s)) = facts.torus {
        lower.push(LowerBound { value: lb_torus(r, s), rule: "torus" });
    }
    if let (Some(census), true) = (facts.census, knot) {
        if let Some(v) = census.lower_bound(&jones_invariant(d)) {
            lower.push(LowerBound { value: v, rule: "small diagram census" });
        }
    }

    let mut upper = vec![UpperBound {
        value: quads + classical,
        rule: "conversion",
        witness: serde_json::json!({ "quadruple": quads, "converted": classical }),
    }];
    if quads == 0 && classical > 0 && d.is_reduced() {
        let (circle, q) = fold_and_convert(d)?;
        upper.push(UpperBound {
            value: q.num_crossings(),
            rule: "fold",
            witness: serde_json::json!({ "circle": circle, "diagram": q.to_code() }),
        });
    }
    if reduced_alternating {
        let (e, sd) = best_set_decomposition(d, &facts.rules)?;
        let mut witness = serde_json::to_value(&sd).expect("plain data");
        if e != *d {
            witness["flyped"] = e.to_code().into();
        }
        upper.push(UpperBound { value: sd.cost, rule: "set decomposition", witness });
    }
    if classical == 0 && quads == 0 {
        upper.push(UpperBound { value: 0, rule: "crossingless", witness: serde_json::Value::Null });
    }
    Ok(BoundsReport::finish(d.num_crossings(), span, lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;

    #[test]
    fn closed_forms() {
        assert_eq!(lb_resolution(3), 1);
        assert_eq!(lb_resolution(0), 0);
        assert_eq!(lb_resolution(24), 4);
        assert_eq!(lb_span(12), 1);
        assert_eq!(lb_span(40), 3);
        assert_eq!(lb_span(16), 1);
        assert_eq!(lb_alternating(3), 1);
        assert_eq!(lb_alternating(9), 3);
        assert_eq!(lb_alternating(8), 2);
        assert_eq!(lb_torus(2, 3), 1);
        assert_eq!(lb_torus(3, 4), 2);
        assert_eq!(lb_torus(2, 2), 1);
    }

    #[test]
    fn trefoil_is_determined() {
        let d = parse_diagram("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        let r = combine(&d, &KnotFacts { minimal: true, ..Default::default() }).unwrap();
        assert_eq!((r.best_lower, r.best_upper, r.q), (1, 1, Some(1)));
    }

    #[test]
    fn figure_eight_needs_the_census() {
        let d = parse_diagram("X[4,1,5,2] X[8,5,1,6] X[6,4,7,3] X[2,8,3,7]").unwrap();
        let r = combine(&d, &KnotFacts { minimal: true, ..Default::default() }).unwrap();
        assert_eq!((r.best_lower, r.best_upper, r.determined), (1, 2, false));
    }
}
