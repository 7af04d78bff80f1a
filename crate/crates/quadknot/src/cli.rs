//! Command-line interface. Every command is a pure function of its
//! arguments: the same invocation prints the same bytes for any `--jobs`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::bounds::{combine, lb_span, Census, KnotFacts};
use crate::bracket::{jones_invariant, kauffman_bracket, quad_bracket, skein_table, type_json, verify_level_adjacency};
use crate::catalog::{identify, load_catalog, reproduce_table, Catalog, CatalogError};
use crate::diagram::{parse_diagram, CrossingType, Diagram, DiagramError};
use crate::moves::{best_set_decomposition, enumerate_quad_diagrams, fold_and_convert, realize, Enumeration, MovesError, PartRules};
use crate::verify;

/// Environment variable naming the default catalog file.
pub const CATALOG_ENV: &str = "QUADKNOT_CATALOG";

#[derive(Debug, Parser)]
#[command(name = "quadknot", version, about = "Quadruple-crossing knot diagrams and bounds on the quadruple crossing number")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Catalog file; the bundled table when absent.
    #[arg(long, global = true, env = CATALOG_ENV)]
    pub catalog: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Diagram code, e.g. "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]".
    #[arg(long)]
    pub pd: Option<String>,
    /// File holding one diagram code.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Name of a catalog entry, e.g. 8_19.
    #[arg(long)]
    pub knot: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kauffman bracket, span and normalized invariant.
    Bracket(Input),
    /// Bracket span and the lower bound it gives.
    Span(Input),
    /// Skein coefficients derived from the 64-state resolutions.
    SkeinTable {
        #[arg(long = "type")]
        crossing_type: Option<CrossingType>,
    },
    /// Every lower and upper bound that applies.
    Bounds {
        #[command(flatten)]
        input: Input,
        /// Torus knot parameters r,s.
        #[arg(long, value_parser = parse_torus)]
        torus: Option<(u32, u32)>,
        /// The diagram has minimal classical crossing number.
        #[arg(long)]
        minimal: bool,
        /// Largest quadruple census level used for lower bounds (0 to 2).
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
        census: u8,
    },
    /// Cheapest set decomposition and the quadruple diagram it builds.
    Decompose(Input),
    /// Even covering circle, folding and conversion.
    Fold(Input),
    /// All diagrams with one or two quadruple crossings, by invariant.
    Enumerate {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        q: u8,
    },
    /// Bounds for every catalog entry against its expected value.
    Table {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(0..=2))]
        census: u8,
    },
    /// The property suite; fails on any violation.
    Verify {
        /// Random diagrams checked.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

fn parse_torus(s: &str) -> Result<(u32, u32), String> {
    let (r, t) = s.split_once(',').ok_or("expected r,s")?;
    let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| e.to_string());
    let (r, t) = (parse(r)?, parse(t)?);
    if r < 2 || t < 2 {
        return Err("torus parameters must be at least 2".into());
    }
    Ok((r, t))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Moves(#[from] MovesError),
    #[error("{0}")]
    Other(String),
    /// Computation finished but a check failed; the report is printed.
    #[error("{0} check(s) failed")]
    Failed(usize),
}

impl From<crate::bracket::BracketError> for CliError {
    fn from(e: crate::bracket::BracketError) -> Self {
        CliError::Moves(e.into())
    }
}

fn load(cli: &Cli) -> Result<Catalog, CliError> {
    Ok(match &cli.catalog {
        Some(path) => load_catalog(path)?,
        None => crate::catalog::parse_catalog(crate::catalog::builtin_text())?,
    })
}

/// The diagram named by the input and, for catalog entries, the entry.
fn read_input(input: &Input, catalog: &Catalog) -> Result<(Diagram, Option<String>), CliError> {
    if let Some(code) = &input.pd {
        return Ok((parse_diagram(code)?, None));
    }
    if let Some(path) = &input.file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Other(format!("cannot read {}: {e}", path.display())))?;
        return Ok((parse_diagram(text.trim())?, None));
    }
    let name = input.knot.as_deref().expect("clap requires one input");
    let entry = catalog.get(name).ok_or_else(|| CliError::Other(format!("no catalog entry {name}")))?;
    Ok((entry.diagram.clone(), Some(entry.name.clone())))
}

fn bracket_of(d: &Diagram) -> Result<crate::LaurentPoly, CliError> {
    Ok(if d.is_classical() { kauffman_bracket(d)? } else { quad_bracket(d, skein_table()) })
}

fn census(levels: u8) -> Result<Option<Census>, CliError> {
    if levels == 0 {
        return Ok(None);
    }
    let lists: Vec<Enumeration> = (1..=levels as usize).map(enumerate_quad_diagrams).collect::<Result<_, _>>()?;
    Ok(Some(Census::new(lists)))
}

fn emit(out: &mut dyn Write, format: Format, value: &serde_json::Value, text: impl FnOnce() -> String) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(value).expect("plain data")),
        Format::Text => write!(out, "{}", text()),
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Other(e.to_string());
    let format = cli.format;
    match &cli.command {
        Command::Bracket(input) => {
            let catalog = load(cli)?;
            let (d, _) = read_input(input, &catalog)?;
            let b = bracket_of(&d)?;
            let j = jones_invariant(&d);
            let v = json!({ "crossings": d.num_crossings(), "bracket": b, "span": b.span(), "normalized": j });
            emit(out, format, &v, || format!("bracket: {b}\nspan: {}\nnormalized: {j}\n", b.span())).map_err(io)
        }
        Command::Span(input) => {
            let catalog = load(cli)?;
            let (d, _) = read_input(input, &catalog)?;
            let span = bracket_of(&d)?.span();
            let lower = lb_span(span.max(0) as usize);
            let v = json!({ "span": span, "lower_bound": lower });
            emit(out, format, &v, || format!("span: {span}\nlower bound on q: {lower}\n")).map_err(io)
        }
        Command::SkeinTable { crossing_type } => {
            let table = skein_table();
            let types: Vec<CrossingType> = crossing_type.map_or(CrossingType::ALL.to_vec(), |t| vec![t]);
            let v = serde_json::Value::Array(types.iter().map(|&t| type_json(table.get(t))).collect());
            emit(out, format, &v, || {
                let mut s = String::new();
                for &t in &types {
                    let tt = table.get(t);
                    s += &format!("type {t}: exponents {}..{}, levels {:?}\n", tt.min_exp(), tt.max_exp(), tt.level_counts());
                    for (split, c) in tt.entries() {
                        if !c.is_zero() {
                            s += &format!("  {split:<10} {:<6} {c}\n", format!("{:?}", split.kind()).to_lowercase());
                        }
                    }
                }
                let adjacency = verify_level_adjacency(table);
                s += &format!("level adjacency: {}\n", if adjacency.passes() { "holds" } else { "VIOLATED" });
                s
            })
            .map_err(io)
        }
        Command::Bounds { input, torus, minimal, census: levels } => {
            let catalog = load(cli)?;
            let (d, name) = read_input(input, &catalog)?;
            let entry = name.as_deref().and_then(|n| catalog.get(n));
            let census = census(*levels)?;
            let facts = KnotFacts {
                minimal: *minimal || entry.is_some(),
                torus: torus.or(entry.and_then(|e| e.torus)),
                census: census.as_ref(),
                rules: PartRules::default(),
            };
            let report = combine(&d, &facts)?;
            let v = serde_json::to_value(&report).expect("plain data");
            emit(out, format, &v, || {
                let mut s = String::new();
                for b in &report.lower {
                    s += &format!("lower {:>3}  {}\n", b.value, b.rule);
                }
                for b in &report.upper {
                    s += &format!("upper {:>3}  {}\n", b.value, b.rule);
                }
                s += &format!("q in [{}, {}]", report.best_lower, report.best_upper);
                s += if report.determined { " (determined)\n" } else { "\n" };
                s
            })
            .map_err(io)
        }
        Command::Decompose(input) => {
            let catalog = load(cli)?;
            let (d, _) = read_input(input, &catalog)?;
            let (e, sd) = best_set_decomposition(&d, &PartRules::default())?;
            let q = realize(&e, &sd)?;
            let v = json!({ "decomposed": e.to_code(), "decomposition": sd, "quadruple": q.to_code() });
            emit(out, format, &v, || {
                let mut s = format!("cost: {}\n", sd.cost);
                if e != d {
                    s += &format!("after flypes: {}\n", e.to_code());
                }
                for p in &sd.parts {
                    let kind = serde_json::to_value(p.kind).expect("plain data");
                    s += &format!("  {} {:?}\n", kind.as_str().unwrap_or("?"), p.crossings);
                }
                s + &format!("quadruple diagram: {}\n", q.to_code())
            })
            .map_err(io)
        }
        Command::Fold(input) => {
            let catalog = load(cli)?;
            let (d, _) = read_input(input, &catalog)?;
            let (circle, q) = fold_and_convert(&d)?;
            let v = json!({ "circle": circle, "quadruple": q.to_code(), "crossings": q.num_crossings() });
            emit(out, format, &v, || {
                let passes: Vec<String> = circle.passages.iter().map(|p| format!("{}:{}", p.crossing, p.entry)).collect();
                format!("circle: {} (length {})\nquadruple diagram: {}\ncrossings: {}\n", passes.join(" "), circle.len(), q.to_code(), q.num_crossings())
            })
            .map_err(io)
        }
        Command::Enumerate { q } => {
            let e = enumerate_quad_diagrams(*q as usize)?;
            let catalog = load(cli)?;
            let v = serde_json::to_value(&e).expect("plain data");
            emit(out, format, &v, || {
                let mut s = format!("q = {}: {} maps, {} diagrams, {} classes\n", e.q, e.maps, e.diagrams, e.classes.len());
                for c in &e.classes {
                    let names = if c.components == 1 { identify(&c.example, &catalog).join(",") } else { String::new() };
                    s += &format!("  {} component(s), {} diagram(s): {}  {}  {}\n", c.components, c.count, c.jones, c.example.to_code(), names);
                }
                s
            })
            .map_err(io)
        }
        Command::Table { census: levels } => {
            let catalog = load(cli)?;
            let census = census(*levels)?;
            let report = reproduce_table(&catalog, census.as_ref(), &PartRules::default())?;
            let v = serde_json::to_value(&report).expect("plain data");
            emit(out, format, &v, || report.to_text()).map_err(io)?;
            match report.mismatched {
                0 => Ok(()),
                n => Err(CliError::Failed(n)),
            }
        }
        Command::Verify { samples } => {
            let catalog = load(cli)?;
            let checks = verify::run_all(cli.seed, *samples, &catalog);
            let v = serde_json::to_value(&checks).expect("plain data");
            emit(out, format, &v, || {
                let mut s = String::new();
                for c in &checks {
                    s += &format!("{} {} ({} cases)\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.cases);
                    for f in &c.failures {
                        s += &format!("    {f}\n");
                    }
                }
                s
            })
            .map_err(io)?;
            match checks.iter().filter(|c| !c.passed).count() {
                0 => Ok(()),
                n => Err(CliError::Failed(n)),
            }
        }
    }
}

/// Parses `args` and runs the command: exit code 0 on success, 1 when the
/// computation fails, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    if let Some(n) = cli.jobs {
        // A pool already built is fine: results do not depend on its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
