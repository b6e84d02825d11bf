//! Instance configuration: JSON or TOML files, overridden by inline flags.

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use gkz_core::arith::{CharacterSpec, FiniteField};
use gkz_core::lattice::ExponentMatrix;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A coordinate of x: a field element encoding, or `"g^k"` for a power of the generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Element(u64),
    Log(String),
}

impl Coordinate {
    pub fn resolve(&self, field: &FiniteField) -> Result<u64, CliError> {
        match self {
            Coordinate::Element(v) if field.contains(*v) => Ok(*v),
            Coordinate::Element(v) => Err(CliError::Usage(format!("{v} is not an element of F_{}", field.size()))),
            Coordinate::Log(s) => {
                let s = s.trim();
                if let Some(k) = s.strip_prefix("g^") {
                    let k: i64 = k.parse().map_err(|_| CliError::Usage(format!("bad exponent in {s:?}")))?;
                    Ok(field.exp(k))
                } else {
                    let v: u64 = s.parse().map_err(|_| CliError::Usage(format!("bad coordinate {s:?}")))?;
                    Coordinate::Element(v).resolve(field)
                }
            }
        }
    }
}

impl FromStr for Coordinate {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        match s.parse::<u64>() {
            Ok(v) => Ok(Coordinate::Element(v)),
            Err(_) if s.starts_with("g^") => Ok(Coordinate::Log(s.to_string())),
            Err(_) => Err(CliError::Usage(format!("bad coordinate {s:?}"))),
        }
    }
}

fn one() -> u32 {
    1
}

fn default_m_max() -> u32 {
    3
}

fn default_digits() -> u32 {
    60
}

fn default_budget() -> f64 {
    1e8
}

fn default_attempts() -> u32 {
    64
}

/// Everything needed to run a command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub p: u64,
    #[serde(default = "one")]
    pub e: u32,
    /// Row-major exponent matrix.
    #[serde(default)]
    pub matrix: Vec<Vec<i64>>,
    /// Character exponents; empty means trivial.
    #[serde(default)]
    pub chi: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<Coordinate>>,
    #[serde(default = "default_m_max")]
    pub m_max: u32,
    #[serde(default = "default_digits")]
    pub digits: u32,
    #[serde(default = "default_budget")]
    pub budget: f64,
    #[serde(default)]
    pub seed: u64,
    /// Power-sum depth for `lfactor` and `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// `(n, m)` for `katz`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<[usize; 2]>,
    /// Candidates tried when sampling x.
    #[serde(default = "default_attempts")]
    pub attempts: u32,
}

impl InstanceConfig {
    pub fn new(p: u64) -> Self {
        InstanceConfig {
            p,
            e: 1,
            matrix: Vec::new(),
            chi: Vec::new(),
            x: None,
            m_max: default_m_max(),
            digits: default_digits(),
            budget: default_budget(),
            seed: 0,
            depth: None,
            shape: None,
            attempts: default_attempts(),
        }
    }

    /// Reads JSON, or TOML when the extension is `.toml`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        } else {
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
    }

    pub fn field(&self) -> Result<Arc<FiniteField>, CliError> {
        Ok(Arc::new(FiniteField::new(self.p, self.e, None)?))
    }

    pub fn budget(&self) -> Result<u128, CliError> {
        if !self.budget.is_finite() || self.budget < 1.0 {
            return Err(CliError::Usage(format!("budget must be a positive number, got {}", self.budget)));
        }
        Ok(self.budget as u128)
    }

    pub fn matrix(&self) -> Result<ExponentMatrix, CliError> {
        if self.matrix.is_empty() {
            return Err(CliError::Usage("this command needs a matrix".into()));
        }
        let width = self.matrix[0].len();
        if let Some(i) = self.matrix.iter().position(|r| r.len() != width) {
            return Err(CliError::Usage(format!("ragged matrix: row {i} has {} entries, row 0 has {width}", self.matrix[i].len())));
        }
        Ok(ExponentMatrix::from_rows(self.matrix.clone())?)
    }

    /// χ with `n` components, trivial when none were given.
    pub fn character(&self, field: &FiniteField, n: usize) -> Result<CharacterSpec, CliError> {
        let order = field.unit_order();
        if self.chi.is_empty() {
            return Ok(CharacterSpec::trivial(n, order));
        }
        if self.chi.len() != n {
            return Err(CliError::Usage(format!("chi has {} entries, expected {n}", self.chi.len())));
        }
        Ok(CharacterSpec::new(&self.chi, order))
    }

    /// The point x, if given, with `len` coordinates.
    pub fn point(&self, field: &FiniteField, len: usize) -> Result<Option<Vec<u64>>, CliError> {
        let Some(x) = &self.x else { return Ok(None) };
        if x.len() != len {
            return Err(CliError::Usage(format!("x has {} entries, expected {len}", x.len())));
        }
        x.iter().map(|c| c.resolve(field)).collect::<Result<Vec<_>, _>>().map(Some)
    }
}

/// Parses `"1,0,1;0,1,1"`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    s.split(';').map(parse_list).collect()
}

/// Parses `"1,-1,2"`.
pub fn parse_list(s: &str) -> Result<Vec<i64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| CliError::Usage(format!("bad integer {v:?} in {s:?}"))))
        .collect()
}

/// Parses `"1,g^3,0"`.
pub fn parse_point(s: &str) -> Result<Vec<Coordinate>, CliError> {
    s.split(',').map(Coordinate::from_str).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(parse_matrix("1,0,1;0,1,1").unwrap(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(parse_list("1,-1").unwrap(), vec![1, -1]);
        assert!(parse_list("1,a").is_err());
        assert_eq!(parse_point("2,g^3").unwrap(), vec![Coordinate::Element(2), Coordinate::Log("g^3".into())]);
    }

    #[test]
    fn formats_agree() {
        let json: InstanceConfig = serde_json::from_str(r#"{"p":5,"matrix":[[1,2]],"x":[0,"g^2"]}"#).unwrap();
        let toml: InstanceConfig = toml::from_str("p = 5\nmatrix = [[1, 2]]\nx = [0, \"g^2\"]\n").unwrap();
        assert_eq!(json, toml);
        assert_eq!(json.e, 1);
        let f = json.field().unwrap();
        assert_eq!(json.point(&f, 2).unwrap(), Some(vec![0, f.exp(2)]));
        assert!(json.point(&f, 3).is_err());
    }

    #[test]
    fn validation() {
        let mut c = InstanceConfig::new(5);
        c.matrix = vec![vec![1, 0], vec![1]];
        assert!(matches!(c.matrix(), Err(CliError::Usage(_))));
        c.x = Some(vec![Coordinate::Element(7)]);
        assert!(c.point(&c.field().unwrap(), 1).is_err());
        c.budget = -1.0;
        assert!(c.budget().is_err());
        assert!(serde_json::from_str::<InstanceConfig>(r#"{"p":5,"bogus":1}"#).is_err());
    }
}
