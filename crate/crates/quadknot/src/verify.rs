//! The property suite behind `verify`: identities the computations must
//! satisfy, checked on a seeded random corpus and on the catalog.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bracket::{exponent_bounds, kauffman_bracket, quad_bracket, skein_table, verify_level_adjacency};
use crate::catalog::Catalog;
use crate::diagram::{CrossingType, Diagram};
use crate::generate::random_quad_diagram;
use crate::moves::{find_even_covering_circle, fold_and_convert, quad_fold};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Instances examined.
    pub cases: usize,
    /// One line per violation, at most a handful.
    pub failures: Vec<String>,
}

impl Check {
    fn from_results(name: &'static str, results: Vec<Result<(), String>>) -> Self {
        let cases = results.len();
        let failures: Vec<String> = results.into_iter().filter_map(Result::err).take(8).collect();
        Check { name, passed: failures.is_empty(), cases, failures }
    }
}

/// `count` connected quadruple diagrams, crossing counts cycling through
/// `1..=max_q`. The same seed always yields the same corpus.
pub fn random_corpus(seed: u64, count: usize, max_q: usize) -> Vec<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_quad_diagram(1 + i % max_q.max(1), &mut rng)).collect()
}

/// The skein state sum agrees with the classical one on the resolution.
pub fn skein_oracle(corpus: &[Diagram]) -> Check {
    let results = corpus
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let quad = quad_bracket(d, skein_table());
            let classical = kauffman_bracket(&d.resolve()).map_err(|e| format!("#{i}: {e}"))?;
            if quad == classical {
                Ok(())
            } else {
                Err(format!("#{i} {}: {quad} != {classical}", d.to_code()))
            }
        })
        .collect();
    Check::from_results("skein oracle", results)
}

pub fn level_adjacency() -> Check {
    let report = verify_level_adjacency(skein_table());
    let results = CrossingType::ALL
        .iter()
        .map(|&t| match report.unexpected().find(|v| v.crossing_type == t) {
            Some(v) => Err(format!("type {t}: {} split {} at level {} ({})", format!("{:?}", v.kind).to_lowercase(), v.splitting, v.level, v.from)),
            None => Ok(()),
        })
        .collect();
    Check::from_results("level adjacency", results)
}

/// High and low states obey the circle bound, so the span is at most `16q`.
pub fn extremal_inequality(corpus: &[Diagram]) -> Check {
    let results = corpus
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let q = d.num_crossings() as i64;
            let b = exponent_bounds(d, skein_table()).map_err(|e| format!("#{i}: {e}"))?;
            let span = quad_bracket(d, skein_table()).span();
            let circles = (b.s_max + b.s_min) as i64;
            if circles > 4 * q + 2 || span > 16 * q {
                Err(format!("#{i} {}: |s_max|+|s_min| = {circles}, span {span}", d.to_code()))
            } else {
                Ok(())
            }
        })
        .collect();
    Check::from_results("extremal inequality", results)
}

/// Every exponent of the bracket lies between the low and high state bounds.
/// Not a theorem: crossings of types 1243/1342 gaining circles from their
/// parallel splits only jointly beat the high bound, and the low state's
/// parallel split follows the high state's choice rather than its own
/// circles, which can beat the low bound.
pub fn exponent_fence(corpus: &[Diagram]) -> Check {
    let results = corpus
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let b = exponent_bounds(d, skein_table()).map_err(|e| format!("#{i}: {e}"))?;
            let p = quad_bracket(d, skein_table());
            let (hi, lo) = (p.max_exp().unwrap_or(0), p.min_exp().unwrap_or(0));
            if hi > b.max || lo < b.min {
                Err(format!("#{i} {}: exponents [{lo}, {hi}] vs [{}, {}]", d.to_code(), b.min, b.max))
            } else {
                Ok(())
            }
        })
        .collect();
    Check::from_results("exponent fence", results)
}

/// Folding and converting keep the bracket span on every reduced catalog
/// diagram, and save exactly one crossing.
pub fn span_preservation(catalog: &Catalog) -> Check {
    let results = catalog
        .entries()
        .par_iter()
        .filter(|e| e.diagram.is_reduced() && e.crossings() > 0)
        .map(|e| {
            let d = &e.diagram;
            let span = kauffman_bracket(d).map_err(|err| format!("{}: {err}", e.name))?.span();
            let circle = find_even_covering_circle(d).map_err(|err| format!("{}: {err}", e.name))?;
            let folded = quad_fold(d, &circle).map_err(|err| format!("{}: {err}", e.name))?;
            let (_, q) = fold_and_convert(d).map_err(|err| format!("{}: {err}", e.name))?;
            let spans = [quad_bracket(&folded, skein_table()).span(), quad_bracket(&q, skein_table()).span()];
            if q.num_crossings() + 1 != d.num_crossings() || !q.is_quadruple() {
                Err(format!("{}: folding left {} crossings", e.name, q.num_crossings()))
            } else if spans != [span, span] {
                Err(format!("{}: span {span} became {spans:?}", e.name))
            } else {
                Ok(())
            }
        })
        .collect();
    Check::from_results("span preservation", results)
}

/// Every check, in a fixed order.
pub fn run_all(seed: u64, samples: usize, catalog: &Catalog) -> Vec<Check> {
    let corpus = random_corpus(seed, samples, 3);
    vec![
        skein_oracle(&corpus),
        level_adjacency(),
        extremal_inequality(&corpus),
        exponent_fence(&corpus),
        span_preservation(catalog),
    ]
}
