//! Job configuration files: a variety, a sheaf or a monomial ideal, and an
//! optional twist window, as JSON with explicit keys.
//!
//! ```json
//! {
//!   "variety": { "family": "hirzebruch", "a": 3 },
//!   "sheaf": {
//!     "kind": "filtrations",
//!     "rank": 2,
//!     "filtrations": {
//!       "rho0": { "jumps": [-1, 0], "spaces": [[["3", "1"]]] },
//!       "rho1": { "jumps": [-1, 0], "spaces": [[["0", "1"]]] },
//!       "eta0": { "jumps": [-1, 0], "spaces": [[["1", "0"]]] },
//!       "eta1": { "jumps": [-1, 0], "spaces": [[["1", "0"]]] }
//!     }
//!   },
//!   "window": { "p": [0, 4], "q": [0, 4] }
//! }
//! ```
//!
//! Each space is a list of generators; entries are exact rationals written as
//! strings (`"3"`, `"-1/2"`) or plain integers. The last (whole) space of a
//! filtration may be left out.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{parse_rational, Rational, Subspace};
use crate::filtration::{EquivariantReflexiveSheaf, KlyachkoFiltration};
use crate::monomial_oracle::MonomialIdeal;
use crate::toric::{Family, ToricVariety};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub variety: Option<Family>,
    #[serde(default)]
    pub sheaf: Option<SheafSpec>,
    #[serde(default)]
    pub ideal: Option<IdealSpec>,
    #[serde(default)]
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SheafSpec {
    Filtrations { rank: usize, filtrations: BTreeMap<String, FiltrationSpec> },
    /// Divisor coefficients, one per ray in fan order.
    LineBundle { divisor: Vec<i64> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationSpec {
    pub jumps: Vec<i64>,
    pub spaces: Vec<Vec<Vec<Entry>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpec {
    pub n: usize,
    pub generators: Vec<Vec<u32>>,
}

/// Inclusive ranges; `q` is ignored on varieties with one class generator.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    #[serde(default)]
    pub p: Option<(i64, i64)>,
    #[serde(default)]
    pub q: Option<(i64, i64)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            let path = e.path().to_string();
            Error::invalid(format!("line {} column {}, field {path}: {inner}", inner.line(), inner.column()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn build_variety(&self) -> Result<ToricVariety> {
        let family = self.variety.as_ref().ok_or_else(|| Error::invalid("field variety: missing"))?;
        ToricVariety::new(family.clone()).map_err(|e| Error::invalid(format!("field variety: {e}")))
    }

    /// The sheaf, shape-checked; the filtration axioms are left to
    /// [`EquivariantReflexiveSheaf::validate`].
    pub fn build_sheaf(&self) -> Result<EquivariantReflexiveSheaf> {
        let variety = self.build_variety()?;
        match self.sheaf.as_ref().ok_or_else(|| Error::invalid("field sheaf: missing"))? {
            SheafSpec::LineBundle { divisor } => {
                EquivariantReflexiveSheaf::line_bundle(&variety, divisor).map_err(|e| Error::invalid(format!("field sheaf.divisor: {e}")))
            }
            SheafSpec::Filtrations { rank, filtrations } => {
                let rank = *rank;
                if rank == 0 {
                    return Err(Error::invalid("field sheaf.rank: must be at least 1"));
                }
                if let Some(name) = filtrations.keys().find(|k| variety.ray_index(k).is_none()) {
                    return Err(Error::invalid(format!(
                        "field sheaf.filtrations.{name}: unknown ray, expected one of {}",
                        variety.ray_names().join(", ")
                    )));
                }
                let mut fs = Vec::with_capacity(variety.ray_count());
                for name in variety.ray_names() {
                    let spec = filtrations
                        .get(name)
                        .ok_or_else(|| Error::invalid(format!("field sheaf.filtrations.{name}: missing")))?;
                    fs.push(build_filtration(spec, rank, &format!("sheaf.filtrations.{name}"))?);
                }
                EquivariantReflexiveSheaf::new(variety, fs)
            }
        }
    }

    pub fn build_ideal(&self) -> Result<MonomialIdeal> {
        let spec = self.ideal.as_ref().ok_or_else(|| Error::invalid("field ideal: missing"))?;
        MonomialIdeal::new(spec.n, spec.generators.clone()).map_err(|e| Error::invalid(format!("field ideal: {e}")))
    }
}

fn build_filtration(spec: &FiltrationSpec, rank: usize, field: &str) -> Result<KlyachkoFiltration> {
    if spec.jumps.len() != rank {
        return Err(Error::invalid(format!("field {field}.jumps: expected {rank} jumps, found {}", spec.jumps.len())));
    }
    let mut spaces = Vec::with_capacity(spec.spaces.len());
    for (a, gens) in spec.spaces.iter().enumerate() {
        let mut vectors: Vec<Vec<Rational>> = Vec::with_capacity(gens.len());
        for (b, g) in gens.iter().enumerate() {
            if g.len() != rank {
                return Err(Error::invalid(format!(
                    "field {field}.spaces[{a}][{b}]: generator has {} entries, ambient dimension is {rank}",
                    g.len()
                )));
            }
            let v = g
                .iter()
                .enumerate()
                .map(|(c, x)| match x {
                    Entry::Int(i) => Ok(Rational::from_integer((*i).into())),
                    Entry::Text(t) => parse_rational(t).map_err(|e| Error::invalid(format!("field {field}.spaces[{a}][{b}][{c}]: {e}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            vectors.push(v);
        }
        spaces.push(Subspace::span(vectors, rank)?);
    }
    KlyachkoFiltration::new(spec.jumps.clone(), spaces, rank).map_err(|e| Error::invalid(format!("field {field}.spaces: {e}")))
}
