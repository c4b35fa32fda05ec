//! Command-line front end: argument parsing, command dispatch and table output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cohomology::{cech_cohomology, euler_sum, h0_dim};
use crate::config::{JobConfig, OutputFormat};
use crate::error::{Error, Result};
use crate::filtration::EquivariantReflexiveSheaf;
use crate::hilbert::{hilbert_function, hilbert_polynomial, lower_bound_region, regularity_region, upper_bound_regions, SupportRegion};
use crate::monomial_oracle::sigma_piece_dim;
use crate::toric::{ClassElement, Cone};

#[derive(Debug, Parser)]
#[command(name = "klyachko", version, about = "Cohomology and Hilbert functions of equivariant reflexive sheaves on toric varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the filtration axioms of the configured sheaf.
    Validate(Common),
    /// Table of h^0 over the twist window.
    H0Table(Common),
    /// Table of h^i over the twist window, from the Čech complex.
    CohomologyTable {
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Table of the Euler characteristic over the twist window.
    EulerTable(Common),
    /// Hilbert function by lattice-point counting; `*` marks twists inside omega.
    HilbertTable(Common),
    /// Support bounds L and I(k), J(k), and the regularity region omega.
    Bounds(Common),
    /// The Hilbert polynomial in (p, q).
    HilbertPoly(Common),
    /// 0/1 grid of a monomial ideal's piece on one cone.
    MonomialSigma {
        /// Comma-separated ray names, e.g. `rho1,rho2`; empty for the zero cone.
        #[arg(long, allow_hyphen_values = true)]
        cone: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub config: PathBuf,
    /// Inclusive range `lo:hi` for p (or for the single twist on P^n).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub p: Option<(i64, i64)>,
    /// Inclusive range `lo:hi` for q.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub q: Option<(i64, i64)>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let lo = lo.trim().parse::<i64>().map_err(|e| format!("bad lower end {lo:?}: {e}"))?;
    let hi = hi.trim().parse::<i64>().map_err(|e| format!("bad upper end {hi:?}: {e}"))?;
    Ok((lo, hi))
}

/// Text to print and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub exit: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unsupported(_) => EXIT_UNSUPPORTED,
        Error::Internal(_) | Error::Unbounded { .. } => EXIT_INTERNAL,
        Error::InvalidInput(_) | Error::DimensionMismatch { .. } => EXIT_INVALID,
    }
}

/// Integer table over twists: rows are q descending, columns p ascending.
/// With a single class generator there is one row and `q` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub quantity: String,
    pub p: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<i64>>,
    pub values: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inside_omega: Option<Vec<Vec<bool>>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let corner = if self.q.is_some() { "q\\p" } else { "p" };
        let mut out = String::from(corner);
        for p in &self.p {
            out.push_str(&format!(",{p}"));
        }
        out.push('\n');
        for (r, row) in self.values.iter().enumerate() {
            match &self.q {
                Some(q) => out.push_str(&q[r].to_string()),
                None => out.push_str(&self.quantity),
            }
            for (c, v) in row.iter().enumerate() {
                let mark = self.inside_omega.as_ref().is_some_and(|f| f[r][c]);
                out.push_str(&format!(",{v}{}", if mark { "*" } else { "" }));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize") + "\n"
    }

    /// Value at `(p, q)`, if the table covers it.
    pub fn get(&self, p: i64, q: Option<i64>) -> Option<i64> {
        let c = self.p.iter().position(|&x| x == p)?;
        let r = match (&self.q, q) {
            (Some(qs), Some(q)) => qs.iter().position(|&x| x == q)?,
            (None, _) => 0,
            (Some(_), None) => return None,
        };
        self.values.get(r).map(|row| row[c])
    }
}

fn range_values((lo, hi): (i64, i64)) -> Vec<i64> {
    (lo..=hi).collect()
}

struct Window {
    p: Vec<i64>,
    q: Option<Vec<i64>>,
}

fn window(cfg: &JobConfig, common: &Common, class_rank: usize) -> Result<Window> {
    let from_cfg = cfg.window.clone().unwrap_or_default();
    let p = common.p.or(from_cfg.p).ok_or_else(|| Error::invalid("no p range: pass --p lo:hi or set window.p"))?;
    let q = if class_rank >= 2 {
        let q = common.q.or(from_cfg.q).ok_or_else(|| Error::invalid("no q range: pass --q lo:hi or set window.q"))?;
        let mut qs = range_values(q);
        qs.reverse();
        Some(qs)
    } else {
        None
    };
    let p = range_values(p);
    let q = if p.is_empty() { q.map(|_| Vec::new()) } else { q };
    Ok(Window { p, q })
}

fn tabulate(quantity: &str, w: &Window, mut cell: impl FnMut(i64, Option<i64>) -> Result<i64>) -> Result<Table> {
    let mut values = Vec::new();
    match &w.q {
        Some(qs) => {
            for &q in qs {
                values.push(w.p.iter().map(|&p| cell(p, Some(q))).collect::<Result<Vec<_>>>()?);
            }
        }
        None => {
            if !w.p.is_empty() {
                values.push(w.p.iter().map(|&p| cell(p, None)).collect::<Result<Vec<_>>>()?);
            }
        }
    }
    Ok(Table { quantity: quantity.to_string(), p: w.p.clone(), q: w.q.clone(), values, inside_omega: None })
}

fn class(p: i64, q: Option<i64>) -> ClassElement {
    match q {
        Some(q) => ClassElement::pq(p, q),
        None => ClassElement(vec![p]),
    }
}

/// Loads the sheaf and rejects it unless every filtration axiom holds.
fn valid_sheaf(cfg: &JobConfig) -> Result<EquivariantReflexiveSheaf> {
    let e = cfg.build_sheaf()?;
    let diags = e.validate();
    if !diags.is_empty() {
        let lines: Vec<String> = diags.iter().map(ToString::to_string).collect();
        return Err(Error::invalid(format!("sheaf is not valid:\n{}", lines.join("\n"))));
    }
    Ok(e)
}

fn emit_table(t: &Table, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => t.to_csv(),
        OutputFormat::Json => t.to_json(),
    }
}

#[derive(Serialize)]
struct RegionReport {
    name: String,
    text: String,
    #[serde(flatten)]
    region: SupportRegion,
}

impl From<&SupportRegion> for RegionReport {
    fn from(r: &SupportRegion) -> Self {
        RegionReport { name: r.kind.to_string(), text: r.to_string(), region: r.clone() }
    }
}

#[derive(Serialize)]
struct PolyTerm {
    p: u32,
    q: u32,
    coefficient: String,
}

fn cone_from_names(v: &crate::toric::ToricVariety, names: &str) -> Result<Cone> {
    let mut rays = Vec::new();
    for name in names.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        rays.push(v.ray_index(name).ok_or_else(|| Error::invalid(format!("unknown ray {name:?}, expected one of {}", v.ray_names().join(", "))))?);
    }
    rays.sort_unstable();
    rays.dedup();
    v.cones()
        .iter()
        .find(|c| c.rays == rays)
        .cloned()
        .ok_or_else(|| Error::invalid(format!("rays {names:?} do not span a cone of the fan")))
}

/// Runs one command and returns what to print.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let common = match &cli.command {
        Command::Validate(c)
        | Command::H0Table(c)
        | Command::EulerTable(c)
        | Command::HilbertTable(c)
        | Command::Bounds(c)
        | Command::HilbertPoly(c) => c,
        Command::CohomologyTable { common, .. } | Command::MonomialSigma { common, .. } => common,
    };
    let cfg = JobConfig::load(&common.config)?;
    let format = common.format.or(cfg.format).unwrap_or_default();
    let ok = |text: String| Ok(Outcome { text, exit: EXIT_OK });
    match &cli.command {
        Command::Validate(_) => {
            let e = cfg.build_sheaf()?;
            let diags = e.validate();
            let lines: Vec<String> = diags.iter().map(ToString::to_string).collect();
            let text = match format {
                OutputFormat::Json => serde_json::to_string_pretty(&serde_json::json!({ "valid": diags.is_empty(), "diagnostics": lines }))
                    .expect("report serializes")
                    + "\n",
                OutputFormat::Csv if diags.is_empty() => "valid\n".to_string(),
                OutputFormat::Csv => format!("invalid\n{}\n", lines.join("\n")),
            };
            Ok(Outcome { text, exit: if diags.is_empty() { EXIT_OK } else { EXIT_INVALID } })
        }
        Command::H0Table(_) => {
            let e = valid_sheaf(&cfg)?;
            let w = window(&cfg, common, e.variety().class_rank())?;
            let t = tabulate("h0", &w, |p, q| Ok(h0_dim(&e, &class(p, q))? as i64))?;
            ok(emit_table(&t, format))
        }
        Command::CohomologyTable { i, .. } => {
            let e = valid_sheaf(&cfg)?;
            let dim = e.variety().dim();
            if *i > dim {
                return Err(Error::invalid(format!("--i {i} exceeds the dimension {dim}")));
            }
            let w = window(&cfg, common, e.variety().class_rank())?;
            let t = tabulate(&format!("h{i}"), &w, |p, q| Ok(cech_cohomology(&e, &class(p, q))?[*i] as i64))?;
            ok(emit_table(&t, format))
        }
        Command::EulerTable(_) => {
            let e = valid_sheaf(&cfg)?;
            let w = window(&cfg, common, e.variety().class_rank())?;
            let t = tabulate("chi", &w, |p, q| euler_sum(&e, &class(p, q)))?;
            ok(emit_table(&t, format))
        }
        Command::HilbertTable(_) => {
            let e = valid_sheaf(&cfg)?;
            let w = window(&cfg, common, e.variety().class_rank())?;
            let mut t = tabulate("h", &w, |p, q| Ok(hilbert_function(&e, &class(p, q))? as i64))?;
            if let (Some(qs), Some(_)) = (&w.q, e.variety().split_data()) {
                let omega = regularity_region(&e)?;
                t.inside_omega = Some(qs.iter().map(|&q| w.p.iter().map(|&p| omega.contains(p, q)).collect()).collect());
            }
            ok(emit_table(&t, format))
        }
        Command::Bounds(_) => {
            let e = valid_sheaf(&cfg)?;
            let lower = lower_bound_region(&e)?;
            let upper = upper_bound_regions(&e)?;
            let omega = regularity_region(&e)?;
            let text = match format {
                OutputFormat::Json => {
                    let report = serde_json::json!({
                        "lower_bound": RegionReport::from(&lower),
                        "upper_bound": upper.iter().map(RegionReport::from).collect::<Vec<_>>(),
                        "omega": RegionReport::from(&omega),
                    });
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
                OutputFormat::Csv => {
                    let mut s = format!("L: {lower}\n");
                    for r in &upper {
                        s.push_str(&format!("{}: {r}\n", r.kind));
                    }
                    s.push_str(&format!("omega: {omega}\n"));
                    s
                }
            };
            ok(text)
        }
        Command::HilbertPoly(_) => {
            let e = valid_sheaf(&cfg)?;
            let poly = hilbert_polynomial(&e)?;
            let omega = regularity_region(&e)?;
            let text = match format {
                OutputFormat::Json => {
                    let mut terms: Vec<PolyTerm> =
                        poly.terms().map(|(ex, c)| PolyTerm { p: ex[0], q: ex[1], coefficient: c.to_string() }).collect();
                    terms.sort_by_key(|t| std::cmp::Reverse((t.p + t.q, t.p)));
                    let report = serde_json::json!({ "polynomial": poly.to_string(), "terms": terms, "valid_on": omega.to_string() });
                    serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
                }
                OutputFormat::Csv => format!("P(p, q) = {poly}\nvalid on: {omega}\n"),
            };
            ok(text)
        }
        Command::MonomialSigma { cone, .. } => {
            let ideal = cfg.build_ideal()?;
            let v = ideal.variety();
            if v.dim() > 2 {
                return Err(Error::unsupported(format!("monomial-sigma grids need n <= 2, got n = {}", v.dim())));
            }
            let cone = cone_from_names(v, cone)?;
            let w = window(&cfg, common, v.dim())?;
            let t = tabulate("sigma", &w, |d1, d2| {
                let m: Vec<i64> = std::iter::once(d1).chain(d2).collect();
                Ok(sigma_piece_dim(&ideal, &cone, &m) as i64)
            })?;
            ok(emit_table(&t, format))
        }
    }
}
