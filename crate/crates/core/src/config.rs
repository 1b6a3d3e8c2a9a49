//! JSON instance configs and the bundled instance set.
//!
//! Bracket indices are 1-based as in the text format; everything is
//! 0-based once resolved.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cohomology::SignMode;
use crate::error::{Error, Result};
use crate::poisson::PoissonStructure;
use crate::poly::QPoly;
use crate::rational::parse_rational;
use crate::ring::Rationals;
use crate::weil_algebra::{make_algebra, AlgebraKind, LinearForm, StructureTable, WeilAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraConfig {
    Real,
    DualNumbers,
    Jet {
        k: usize,
    },
    TruncatedPoly {
        r: usize,
        k: usize,
    },
    Tensor {
        left: Box<AlgebraConfig>,
        right: Box<AlgebraConfig>,
    },
    Custom {
        dim: usize,
        /// `[α, β, γ, "p/q"]`: `e_α e_β` has `e_γ`-coefficient `p/q`.
        consts: Vec<(usize, usize, usize, String)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

impl AlgebraConfig {
    pub fn to_kind(&self) -> Result<AlgebraKind> {
        Ok(match self {
            AlgebraConfig::Real => AlgebraKind::Real,
            AlgebraConfig::DualNumbers => AlgebraKind::DualNumbers,
            AlgebraConfig::Jet { k } => AlgebraKind::Jet(*k),
            AlgebraConfig::TruncatedPoly { r, k } => AlgebraKind::TruncatedPoly { r: *r, k: *k },
            AlgebraConfig::Tensor { left, right } => {
                AlgebraKind::Tensor(Box::new(left.to_kind()?), Box::new(right.to_kind()?))
            }
            AlgebraConfig::Custom { dim, consts, labels } => {
                let mut entries = Vec::with_capacity(consts.len());
                for (a, b, g, c) in consts {
                    let q = parse_rational(c)
                        .map_err(|e| Error::Config(format!("consts entry [{a},{b},{g}]: {e}")))?;
                    entries.push((*a, *b, *g, q));
                }
                let mut table = StructureTable::from_entries(*dim, entries)?;
                if let Some(l) = labels {
                    if l.len() != *dim {
                        return Err(Error::Config(format!(
                            "labels: expected {dim} entries, found {}",
                            l.len()
                        )));
                    }
                    table = table.with_labels(l.clone());
                }
                AlgebraKind::Custom(table)
            }
        })
    }

    /// Builds and validates the algebra.
    pub fn build(&self) -> Result<WeilAlgebra> {
        make_algebra(&self.to_kind()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketConfig {
    pub i: usize,
    pub j: usize,
    pub poly: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonConfig {
    pub n: usize,
    #[serde(default)]
    pub brackets: Vec<BracketConfig>,
}

impl PoissonConfig {
    /// Parses the entries; Jacobi is not checked here.
    pub fn build(&self) -> Result<PoissonStructure<Rationals>> {
        let mut entries = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i > self.n || b.j > self.n {
                return Err(Error::Config(format!(
                    "bracket ({}, {}): indices are 1-based and at most n = {}",
                    b.i, b.j, self.n
                )));
            }
            let p = QPoly::parse(&b.poly, self.n)?;
            entries.push((b.i - 1, b.j - 1, p));
        }
        PoissonStructure::from_entries(Rationals, self.n, entries)
    }

    pub fn from_structure(pi: &PoissonStructure<Rationals>) -> Self {
        PoissonConfig {
            n: pi.n(),
            brackets: pi
                .entries()
                .map(|((i, j), p)| BracketConfig {
                    i: i + 1,
                    j: j + 1,
                    poly: p.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    #[serde(default)]
    pub p_max: Option<usize>,
    #[serde(default = "default_weight_max")]
    pub weight_max: u32,
    /// Total-degree cap for inhomogeneous structures.
    #[serde(default)]
    pub cap: Option<u32>,
}

fn default_weight_max() -> u32 {
    3
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig {
            p_max: None,
            weight_max: default_weight_max(),
            cap: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub algebra: AlgebraConfig,
    pub poisson: PoissonConfig,
    #[serde(default)]
    pub p_form: Option<Vec<String>>,
    #[serde(default)]
    pub truncation: TruncationConfig,
    #[serde(default)]
    pub sign_mode: SignMode,
    #[serde(default)]
    pub output: OutputConfig,
}

/// A resolved instance: built algebra, parsed structure, optional form.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub algebra: WeilAlgebra,
    pub pi: PoissonStructure<Rationals>,
    pub p_form: Option<LinearForm>,
    pub truncation: TruncationConfig,
    pub sign_mode: SignMode,
}

impl Instance {
    pub fn from_config(cfg: &InstanceConfig) -> Result<Self> {
        let algebra = cfg.algebra.build()?;
        let pi = cfg.poisson.build()?;
        let p_form = match &cfg.p_form {
            None => None,
            Some(items) => {
                if items.len() != algebra.dim() {
                    return Err(Error::Config(format!(
                        "p_form: expected {} entries, found {}",
                        algebra.dim(),
                        items.len()
                    )));
                }
                let coeffs = items
                    .iter()
                    .map(|t| parse_rational(t).map_err(|e| Error::Config(format!("p_form: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                Some(LinearForm::new(coeffs))
            }
        };
        if let Some(p) = cfg.truncation.p_max {
            if p > pi.n() {
                return Err(Error::Config(format!("truncation.p_max = {p} exceeds n = {}", pi.n())));
            }
        }
        Ok(Instance {
            name: cfg.name.clone().unwrap_or_else(|| "instance".into()),
            algebra,
            pi,
            p_form,
            truncation: cfg.truncation,
            sign_mode: cfg.sign_mode,
        })
    }

    pub fn p_max(&self) -> usize {
        self.truncation.p_max.unwrap_or(self.pi.n())
    }

    pub fn is_valid_poisson(&self) -> bool {
        self.pi.validate_jacobi().is_valid()
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." || path.is_empty() {
            Error::Config(inner.to_string())
        } else {
            Error::Config(format!("at `{path}`: {inner}"))
        }
    })
}

pub fn parse_instance(text: &str) -> Result<InstanceConfig> {
    from_json(text)
}

pub fn parse_algebra(text: &str) -> Result<AlgebraConfig> {
    from_json(text)
}

/// Either a bare algebra block (has a `kind` key) or a full instance.
pub fn parse_algebra_or_instance(text: &str) -> Result<(AlgebraConfig, Option<Vec<String>>)> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    if value.get("kind").is_some() {
        Ok((parse_algebra(text)?, None))
    } else {
        let cfg = parse_instance(text)?;
        Ok((cfg.algebra, cfg.p_form))
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    let cfg = parse_instance(&read_to_string(path)?)?;
    Instance::from_config(&cfg)
}

/// The bundled configs, as shipped under `configs/`.
pub const BUNDLED: [(&str, &str); 5] = [
    ("symplectic_dual", include_str!("../configs/symplectic_dual.json")),
    ("so3_jet2", include_str!("../configs/so3_jet2.json")),
    ("heisenberg_jet1", include_str!("../configs/heisenberg_jet1.json")),
    ("symplectic_dual2", include_str!("../configs/symplectic_dual2.json")),
    ("counterexample_dual", include_str!("../configs/counterexample_dual.json")),
];

pub fn bundled(name: &str) -> Result<Instance> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Config(format!("no bundled instance named {name}")))?;
    Instance::from_config(&parse_instance(text)?)
}

/// Every bundled instance, in a fixed order.
pub fn bundled_all() -> Vec<Instance> {
    BUNDLED
        .iter()
        .map(|(n, _)| bundled(n).expect("bundled configs are valid"))
        .collect()
}

/// The bundled instances with a Jacobi-valid structure.
pub fn bundled_valid() -> Vec<Instance> {
    bundled_all().into_iter().filter(Instance::is_valid_poisson).collect()
}
