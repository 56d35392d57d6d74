use std::path::Path;

use kwidth::arith::Real;
use kwidth::ball_widths::BallProblem;
use kwidth::exponents::Smoothness;
use kwidth::mixed_norm::ExponentVector;
use kwidth::width_oracle::OracleConfig;
use kwidth::{Error, Result};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sobolev,
    Nikolskii,
    Ball,
    Prop2,
}

/// Oracle settings that override the budget defaults.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleOverrides {
    pub restarts: Option<usize>,
    pub outer_iterations: Option<usize>,
    pub inner_tolerance: Option<f64>,
    pub point_budget: Option<usize>,
}

impl OracleOverrides {
    pub fn apply(&self, mut cfg: OracleConfig) -> Result<OracleConfig> {
        if let Some(v) = self.restarts {
            cfg.restarts = v;
        }
        if let Some(v) = self.outer_iterations {
            cfg.outer_iterations = v;
        }
        if let Some(v) = self.inner_tolerance {
            cfg.inner_tolerance = v;
        }
        if let Some(v) = self.point_budget {
            cfg.point_budget = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Input file for `exponent`, `phi`, `sandwich` and `report`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub kind: Kind,
    pub p: ExponentVector,
    pub q: ExponentVector,
    pub r: Option<Vec<Real>>,
    pub k: Option<Vec<u64>>,
    pub n: Option<u64>,
    /// Several `n` for one ball; takes precedence over `n` where a sweep makes sense.
    pub n_sweep: Option<Vec<u64>>,
    pub nu: Option<usize>,
    pub alpha: Option<Vec<f64>>,
    pub oracle: Option<OracleOverrides>,
}

impl ProblemFile {
    /// Reads TOML for `.toml` files and JSON otherwise.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let is_toml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
        let file: ProblemFile = if is_toml {
            toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        } else {
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        };
        file.validate()?;
        Ok(file)
    }

    pub fn d(&self) -> usize {
        self.p.d()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.d();
        if self.q.d() != d {
            return Err(Error::DimensionMismatch(format!("p has {d} entries, q has {}", self.q.d())));
        }
        let need = |what: &str| Error::InvalidInput(format!("kind {:?} requires `{what}`", self.kind));
        let check_len = |name: &str, len: usize| {
            if len != d {
                Err(Error::DimensionMismatch(format!("{name} has {len} entries, expected d = {d}")))
            } else {
                Ok(())
            }
        };
        match self.kind {
            Kind::Sobolev | Kind::Nikolskii => {
                check_len("r", self.r.as_ref().ok_or_else(|| need("r"))?.len())?;
                if let Some(nu) = self.nu {
                    if nu > d {
                        return Err(Error::InvalidInput(format!("nu = {nu} exceeds d = {d}")));
                    }
                }
            }
            Kind::Ball => {
                check_len("k", self.k.as_ref().ok_or_else(|| need("k"))?.len())?;
                if self.n.is_none() && self.n_sweep.is_none() {
                    return Err(need("n"));
                }
            }
            Kind::Prop2 => {
                check_len("k", self.k.as_ref().ok_or_else(|| need("k"))?.len())?;
                self.nu.ok_or_else(|| need("nu"))?;
            }
        }
        if let Some(a) = &self.alpha {
            check_len("alpha", a.len())?;
        }
        Ok(())
    }

    pub fn smoothness(&self) -> Result<Smoothness> {
        Smoothness::new(self.r.clone().ok_or_else(|| Error::InvalidInput("missing `r`".into()))?)
    }

    /// The `n` values: `n_sweep` if present, else `[n]`.
    pub fn ns(&self) -> Vec<u64> {
        self.n_sweep.clone().unwrap_or_else(|| self.n.into_iter().collect())
    }

    pub fn ball(&self, n: u64) -> Result<BallProblem> {
        let k = self.k.clone().ok_or_else(|| Error::InvalidInput("missing `k`".into()))?;
        BallProblem::new(k, n, self.p.clone(), self.q.clone())
    }

    pub fn oracle(&self, base: OracleConfig) -> Result<OracleConfig> {
        self.oracle.clone().unwrap_or_default().apply(base)
    }
}
