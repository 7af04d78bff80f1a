//! Bundled census of prime knots through ten crossings with their expected
//! quadruple crossing numbers, and invariant-based identification.
//!
//! File format, one entry per line (`#` starts a comment):
//!
//! ```text
//! name | diagram code | expected q or ? | alternating Y/N | notes
//! ```
//!
//! Notes are free text; a `torus=r,s` token marks a torus knot.

use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{combine, BoundsReport, Census, KnotFacts};
use crate::bracket::jones_invariant;
use crate::diagram::{parse_diagram, Diagram};
use crate::laurent::LaurentPoly;
use crate::moves::{MovesError, PartRules};

const BUILTIN: &str = include_str!("../../../data/knots10.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(rename = "diagram")]
    pub code: String,
    #[serde(skip)]
    pub diagram: Diagram,
    pub expected_q: Option<u32>,
    pub alternating: bool,
    pub notes: String,
    pub torus: Option<(u32, u32)>,
}

impl CatalogEntry {
    pub fn crossings(&self) -> usize {
        self.diagram.num_crossings()
    }
}

#[derive(Debug)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    jones: OnceLock<Vec<LaurentPoly>>,
}

impl Catalog {
    pub fn new(entries: Vec<CatalogEntry>) -> Self {
        Catalog { entries, jones: OnceLock::new() }
    }

    /// The bundled census.
    pub fn builtin() -> &'static Catalog {
        static C: OnceLock<Catalog> = OnceLock::new();
        C.get_or_init(|| parse_catalog(BUILTIN).expect("bundled catalog is valid"))
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Normalized invariant of every entry, in entry order.
    pub fn invariants(&self) -> &[LaurentPoly] {
        self.jones.get_or_init(|| {
            use rayon::prelude::*;
            self.entries.par_iter().map(|e| jones_invariant(&e.diagram)).collect()
        })
    }
}

/// Text of the bundled catalog file.
pub fn builtin_text() -> &'static str {
    BUILTIN
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatalogError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    parse_catalog(&text)
}

pub fn parse_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let mut entries: Vec<CatalogEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| CatalogError::Line { line, msg };
        let fields: Vec<&str> = content.split('|').map(str::trim).collect();
        if !(4..=5).contains(&fields.len()) {
            return Err(err(format!("expected 4 or 5 '|'-separated fields, found {}", fields.len())));
        }
        let name = fields[0];
        let leading: usize = name
            .split('_')
            .next()
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| err(format!("name '{name}' does not start with a crossing count")))?;
        let diagram = parse_diagram(fields[1]).map_err(|e| err(e.to_string()))?;
        if diagram.num_crossings() != leading {
            return Err(err(format!("{name} has {} crossings", diagram.num_crossings())));
        }
        if !diagram.is_classical() {
            return Err(err(format!("{name} must be a classical diagram")));
        }
        let expected_q = match fields[2] {
            "?" => None,
            s => Some(s.parse().map_err(|_| err(format!("bad expected q '{s}'")))?),
        };
        let alternating = match fields[3] {
            "Y" => true,
            "N" => false,
            s => return Err(err(format!("alternating flag must be Y or N, found '{s}'"))),
        };
        if alternating && !diagram.is_alternating() {
            return Err(err(format!("{name} is flagged alternating but its diagram is not")));
        }
        let notes = fields.get(4).copied().unwrap_or("").to_string();
        let torus = match notes.split_whitespace().find_map(|t| t.strip_prefix("torus=")) {
            None => None,
            Some(t) => {
                let (r, s) = t.split_once(',').ok_or_else(|| err(format!("bad torus tag '{t}'")))?;
                let parse = |x: &str| x.parse::<u32>().map_err(|_| err(format!("bad torus tag '{t}'")));
                Some((parse(r)?, parse(s)?))
            }
        };
        if entries.iter().any(|e| e.name == name) {
            return Err(err(format!("duplicate entry {name}")));
        }
        entries.push(CatalogEntry {
            name: name.to_string(),
            code: fields[1].to_string(),
            diagram: diagram.with_name(name),
            expected_q,
            alternating,
            notes,
            torus,
        });
    }
    Ok(Catalog::new(entries))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    /// Bounds meet at the expected value.
    Determined,
    /// The expected value lies strictly inside the bounds.
    Bounded,
    /// The expected value lies outside the bounds.
    Mismatch,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Determined => "DETERMINED",
            Status::Bounded => "BOUNDED",
            Status::Mismatch => "MISMATCH",
        })
    }
}

pub fn classify(expected: Option<u32>, lower: usize, upper: usize) -> Status {
    match expected.map(|v| v as usize) {
        Some(v) if v < lower || v > upper => Status::Mismatch,
        // Crossed bounds contradict every value.
        _ if lower > upper => Status::Mismatch,
        _ if lower == upper => Status::Determined,
        _ => Status::Bounded,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub name: String,
    pub crossings: usize,
    pub alternating: bool,
    pub expected: Option<u32>,
    pub lower: usize,
    pub upper: usize,
    pub status: Status,
    pub lower_rule: &'static str,
    pub upper_rule: &'static str,
    /// Smallest census size holding a diagram with the same invariant, when
    /// below the upper bound. The invariant alone does not identify the
    /// knot, so this is not used as a bound.
    pub census_candidate: Option<CensusCandidate>,
    #[serde(skip)]
    pub report: BoundsReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusCandidate {
    pub q: usize,
    pub diagram: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub determined: usize,
    pub bounded: usize,
    pub mismatched: usize,
}

impl TableReport {
    pub fn row(&self, name: &str) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8} {:>2} {:>3} {:>8} {:>5} {:>5}  {:<10}  {:<20}  {:<20}",
            "knot", "c", "alt", "expected", "lower", "upper", "status", "lower from", "upper from"
        );
        for r in &self.rows {
            let expected = r.expected.map_or("?".to_string(), |v| v.to_string());
            let _ = write!(
                out,
                "{:<8} {:>2} {:>3} {:>8} {:>5} {:>5}  {:<10}  {:<20}  {:<20}",
                r.name,
                r.crossings,
                if r.alternating { "Y" } else { "N" },
                expected,
                r.lower,
                r.upper,
                r.status.to_string(),
                r.lower_rule,
                r.upper_rule
            );
            if let Some(c) = &r.census_candidate {
                let _ = write!(out, "  note: invariant realised with q = {}: {}", c.q, c.diagram);
            }
            out = out.trim_end().to_string();
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "{} entries: {} determined, {} bounded, {} mismatched",
            self.rows.len(),
            self.determined,
            self.bounded,
            self.mismatched
        );
        out
    }
}

/// Bounds for every entry, in catalog order. Rows are computed in parallel
/// and do not depend on the worker count.
pub fn reproduce_table(catalog: &Catalog, census: Option<&Census>, rules: &PartRules) -> Result<TableReport, MovesError> {
    use rayon::prelude::*;
    let rows: Vec<TableRow> = catalog
        .entries
        .par_iter()
        .map(|e| table_row(e, census, rules))
        .collect::<Result<_, _>>()?;
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    let (determined, bounded, mismatched) = (count(Status::Determined), count(Status::Bounded), count(Status::Mismatch));
    Ok(TableReport { rows, determined, bounded, mismatched })
}

fn table_row(e: &CatalogEntry, census: Option<&Census>, rules: &PartRules) -> Result<TableRow, MovesError> {
    let facts = KnotFacts { minimal: true, torus: e.torus, census, rules: *rules };
    let report = combine(&e.diagram, &facts)?;
    let lower_rule = report.lower.iter().find(|b| b.value == report.best_lower).map_or("none", |b| b.rule);
    let upper_rule = report.rule_for_upper().map_or("none", |b| b.rule);
    let census_candidate = census.and_then(|c| {
        let j = jones_invariant(&e.diagram);
        let q = c.first_level(&j)?;
        if q >= report.best_upper {
            return None;
        }
        let mirror = j.substitute_inverse();
        let class = c.levels[q - 1].knots().find(|k| k.jones == j || k.jones == mirror)?;
        Some(CensusCandidate { q, diagram: class.example.to_code() })
    });
    Ok(TableRow {
        name: e.name.clone(),
        crossings: e.crossings(),
        alternating: e.alternating,
        expected: e.expected_q,
        lower: report.best_lower,
        upper: report.best_upper,
        status: classify(e.expected_q, report.best_lower, report.best_upper),
        lower_rule,
        upper_rule,
        census_candidate,
        report,
    })
}

/// Entries whose invariant equals that of `d` or of its mirror image.
pub fn identify<'a>(d: &Diagram, catalog: &'a Catalog) -> Vec<&'a str> {
    let j = jones_invariant(d);
    let m = j.substitute_inverse();
    catalog
        .entries
        .iter()
        .zip(catalog.invariants())
        .filter(|(_, inv)| **inv == j || **inv == m)
        .map(|(e, _)| e.name.as_str())
        .collect()
}
