//! Flat TOML run configuration.
//!
//! ```toml
//! n = 3000
//! k = 3
//! a_2 = 80.0
//! b_2 = 2.0
//! a_3 = 40.0
//! b_3 = 2.0
//! seed = 7
//! ```
//!
//! Every order needs both `a_<m>` and `b_<m>`. Unknown keys are rejected.

use std::collections::BTreeMap;

use hyperblock::conclab::TrialOptions;
use hyperblock::detect::PipelineConfig;
use hyperblock::graphlin::SolverOptions;
use hyperblock::model::DEFAULT_NU;
use hyperblock::{ModelParams, OrderSubset};
use toml::{Table, Value};

use crate::error::CliError;

/// Rung gaps used when `ladder` is absent.
pub const DEFAULT_LADDER: [f64; 4] = [10.0, 20.0, 40.0, 80.0];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    pub nu: f64,
    pub seed: u64,
    pub subset: Option<OrderSubset>,
    pub trials: usize,
    pub ladder: Vec<f64>,
    /// Vertex counts of the concentration grid; defaults to `[n]`.
    pub ns: Vec<usize>,
    pub tau: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub dense_cap: usize,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Invalid(msg.into()))
}

fn as_uint(key: &str, v: &Value) -> Result<u64, CliError> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => invalid(format!("`{key}` must be a non-negative integer")),
    }
}

fn as_float(key: &str, v: &Value) -> Result<f64, CliError> {
    match v {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => invalid(format!("`{key}` must be a number")),
    }
}

fn as_array<'a>(key: &str, v: &'a Value) -> Result<&'a [Value], CliError> {
    match v {
        Value::Array(items) if !items.is_empty() => Ok(items),
        _ => invalid(format!("`{key}` must be a non-empty array")),
    }
}

fn usize_of(key: &str, v: &Value) -> Result<usize, CliError> {
    usize::try_from(as_uint(key, v)?).or_else(|_| invalid(format!("`{key}` is too large")))
}

/// `a_3` → `('a', 3)`.
fn rate_key(key: &str) -> Option<(char, usize)> {
    let (side, order) = key.split_once('_')?;
    let side = match side {
        "a" => 'a',
        "b" => 'b',
        _ => return None,
    };
    order.parse().ok().map(|m| (side, m))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Invalid(format!("config: {}", e.message())))?;
        Self::from_table(&table)
    }

    pub fn from_table(table: &Table) -> Result<Self, CliError> {
        let mut n = None;
        let mut k = None;
        let mut rates: BTreeMap<usize, (Option<f64>, Option<f64>)> = BTreeMap::new();
        let defaults = SolverOptions::default();
        let mut cfg = RunConfig {
            // Placeholder until the model is validated below.
            model: ModelParams::new(2, 2, [(2, 0.0, 0.0)]).expect("valid placeholder"),
            nu: DEFAULT_NU,
            seed: 0,
            subset: None,
            trials: 1,
            ladder: DEFAULT_LADDER.to_vec(),
            ns: Vec::new(),
            tau: None,
            tol: defaults.tol,
            max_iter: defaults.max_iter,
            dense_cap: TrialOptions::default().dense_cap,
        };
        for (key, value) in table {
            match key.as_str() {
                "n" => n = Some(usize_of(key, value)?),
                "k" => k = Some(usize_of(key, value)?),
                "nu" => cfg.nu = as_float(key, value)?,
                "seed" => cfg.seed = as_uint(key, value)?,
                "trials" => cfg.trials = usize_of(key, value)?,
                "tau" => cfg.tau = Some(as_float(key, value)?),
                "tol" => cfg.tol = as_float(key, value)?,
                "max_iter" => cfg.max_iter = usize_of(key, value)?,
                "dense_cap" => cfg.dense_cap = usize_of(key, value)?,
                "subset" => {
                    let members = as_array(key, value)?
                        .iter()
                        .map(|v| usize_of(key, v))
                        .collect::<Result<Vec<_>, _>>()?;
                    cfg.subset = Some(OrderSubset::new(members)?);
                }
                "ladder" => {
                    cfg.ladder = as_array(key, value)?
                        .iter()
                        .map(|v| as_float(key, v))
                        .collect::<Result<_, _>>()?;
                }
                "ns" => {
                    cfg.ns = as_array(key, value)?
                        .iter()
                        .map(|v| usize_of(key, v))
                        .collect::<Result<_, _>>()?;
                }
                other => match rate_key(other) {
                    Some((side, m)) => {
                        let x = as_float(key, value)?;
                        let slot = rates.entry(m).or_default();
                        if side == 'a' {
                            slot.0 = Some(x);
                        } else {
                            slot.1 = Some(x);
                        }
                    }
                    None => return invalid(format!("unknown config key `{other}`")),
                },
            }
        }
        let (Some(n), Some(k)) = (n, k) else {
            return invalid("config needs both `n` and `k`");
        };
        let mut orders = Vec::with_capacity(rates.len());
        for (m, pair) in rates {
            match pair {
                (Some(a), Some(b)) => orders.push((m, a, b)),
                _ => return invalid(format!("order {m} needs both `a_{m}` and `b_{m}`")),
            }
        }
        cfg.model = ModelParams::new(n, k, orders)?;
        if cfg.ns.is_empty() {
            cfg.ns = vec![n];
        }
        if !(cfg.nu > 0.5 && cfg.nu < 1.0) {
            return invalid(format!("nu must lie in (0.5, 1), got {}", cfg.nu));
        }
        if cfg.trials == 0 {
            return invalid("`trials` must be at least 1");
        }
        if !(cfg.tol > 0.0) || cfg.max_iter == 0 {
            return invalid("`tol` must be positive and `max_iter` at least 1");
        }
        if let Some(tau) = cfg.tau {
            if !(tau > 0.0) {
                return invalid(format!("`tau` must be positive, got {tau}"));
            }
        }
        if cfg.ladder.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return invalid("ladder gaps must be finite and non-negative");
        }
        if let Some(s) = &cfg.subset {
            if let Some(m) = s.members().iter().find(|m| cfg.model.rates(**m).is_none()) {
                return invalid(format!("subset order {m} is not in the model"));
            }
        }
        Ok(cfg)
    }

    pub fn pipeline(&self) -> PipelineConfig {
        let mut p = PipelineConfig::with_seed(self.seed);
        p.nu = self.nu;
        p.subset = self.subset.clone();
        p.solver.tol = self.tol;
        p.solver.max_iter = self.max_iter;
        if let Some(tau) = self.tau {
            p.tau = tau;
        }
        p
    }

    pub fn trial_options(&self) -> TrialOptions {
        TrialOptions {
            tau: self.tau,
            tol: self.tol,
            dense_cap: self.dense_cap,
        }
    }

    /// The model with its vertex count replaced.
    pub fn model_at(&self, n: usize) -> Result<ModelParams, CliError> {
        let orders = self.model.orders().iter().map(|(&m, r)| (m, r.within, r.across));
        Ok(ModelParams::new(n, self.model.k(), orders)?)
    }
}
