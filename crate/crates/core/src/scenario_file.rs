//! JSON scenario files.
//!
//! ```json
//! {
//!   "n_wards": 4,
//!   "wards": {"symmetric": {"cost_expose": 2.0, "cost_buffer": 1.0}},
//!   "benefit": {"kind": "linear", "beta_per_exposer": 0.3},
//!   "interventions": [{"kind": "observability", "p0": 0.5, "penalty": 1.0}],
//!   "options": {"epsilon": 0.0}
//! }
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interventions::{
    EffortReduction, Intervention, Mechanism, MechanismCap, MechanismMode, Observability,
};
use crate::model::{BenefitSpec, Scenario, Ward};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub n_wards: usize,
    pub wards: WardsSpec,
    pub benefit: BenefitFile,
    #[serde(default)]
    pub interventions: Vec<InterventionFile>,
    #[serde(default)]
    pub options: RunOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WardCosts {
    pub cost_expose: f64,
    pub cost_buffer: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WardsSpec {
    Symmetric { symmetric: WardCosts },
    List(Vec<WardCosts>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BenefitFile {
    Linear {
        #[serde(alias = "beta")]
        beta_per_exposer: f64,
    },
    Threshold {
        tau: usize,
        beta: f64,
    },
    Concave {
        beta: f64,
        gamma: f64,
    },
    Table {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CapFile {
    Broadcast(f64),
    PerWard(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeFile {
    #[default]
    Absorb,
    Redistribute,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InterventionFile {
    Effort {
        delta_expose: f64,
        #[serde(default)]
        delta_buffer: f64,
    },
    Observability {
        p0: f64,
        #[serde(default)]
        p_slope: f64,
        penalty: f64,
    },
    Mechanism {
        capped_cost_expose: CapFile,
        #[serde(default)]
        mode: ModeFile,
    },
}

/// Run settings carried alongside the game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    pub epsilon: f64,
    pub rng_seed: u64,
    pub dt: f64,
    pub t_end: f64,
    pub max_iters: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            epsilon: 0.0,
            rng_seed: 0,
            dt: 0.01,
            t_end: 50.0,
            max_iters: 1000,
        }
    }
}

impl RunOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::config(
                "options.epsilon",
                "must be finite and non-negative",
            ));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("options.dt", "must be positive"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::config(
                "options.t_end",
                "must be finite and non-negative",
            ));
        }
        Ok(())
    }
}

fn lift<T: Scalar>(path: impl FnOnce() -> String, value: f64) -> Result<T> {
    T::from_f64_checked(value).ok_or_else(|| {
        Error::config(
            path(),
            format!("{value} is not representable in this arithmetic"),
        )
    })
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut deserializer = serde_json::Deserializer::from_str(text);
        let file: ScenarioFile =
            serde_path_to_error::deserialize(&mut deserializer).map_err(|err| {
                let path = err.path().to_string();
                let message = err.into_inner().to_string();
                Error::config(
                    if path == "." {
                        "scenario".to_string()
                    } else {
                        path
                    },
                    message,
                )
            })?;
        deserializer
            .end()
            .map_err(|err| Error::config("scenario", err.to_string()))?;
        file.options.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario files always serialize")
    }

    pub fn to_scenario<T: Scalar>(&self) -> Result<Scenario<T>> {
        let costs: Vec<&WardCosts> = match &self.wards {
            WardsSpec::Symmetric { symmetric } => vec![symmetric; self.n_wards],
            WardsSpec::List(list) => {
                if list.len() != self.n_wards {
                    return Err(Error::config(
                        "wards",
                        format!(
                            "{} wards listed but n_wards is {}",
                            list.len(),
                            self.n_wards
                        ),
                    ));
                }
                list.iter().collect()
            }
        };
        let wards = costs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(Ward::new(
                    i,
                    lift(|| format!("wards[{i}].cost_expose"), c.cost_expose)?,
                    lift(|| format!("wards[{i}].cost_buffer"), c.cost_buffer)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;

        let benefit = match &self.benefit {
            BenefitFile::Linear { beta_per_exposer } => BenefitSpec::Linear {
                beta_per_exposer: lift(|| "benefit.beta_per_exposer".into(), *beta_per_exposer)?,
            },
            BenefitFile::Threshold { tau, beta } => BenefitSpec::Threshold {
                tau: *tau,
                beta: lift(|| "benefit.beta".into(), *beta)?,
            },
            BenefitFile::Concave { beta, gamma } => BenefitSpec::Concave {
                beta: lift(|| "benefit.beta".into(), *beta)?,
                gamma: lift(|| "benefit.gamma".into(), *gamma)?,
            },
            BenefitFile::Table { values } => BenefitSpec::Table {
                values: values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| lift(|| format!("benefit.values[{k}]"), *v))
                    .collect::<Result<_>>()?,
            },
        };

        let interventions = self
            .interventions
            .iter()
            .enumerate()
            .map(|(j, spec)| {
                let at = |field: &str| format!("interventions[{j}].{field}");
                Ok(match spec {
                    InterventionFile::Effort {
                        delta_expose,
                        delta_buffer,
                    } => Intervention::EffortReduction(EffortReduction {
                        delta_expose: lift(|| at("delta_expose"), *delta_expose)?,
                        delta_buffer: lift(|| at("delta_buffer"), *delta_buffer)?,
                    }),
                    InterventionFile::Observability {
                        p0,
                        p_slope,
                        penalty,
                    } => Intervention::Observability(Observability {
                        p0: lift(|| at("p0"), *p0)?,
                        p_slope: lift(|| at("p_slope"), *p_slope)?,
                        penalty: lift(|| at("penalty"), *penalty)?,
                    }),
                    InterventionFile::Mechanism {
                        capped_cost_expose,
                        mode,
                    } => {
                        let mode = match mode {
                            ModeFile::Absorb => MechanismMode::Absorb,
                            ModeFile::Redistribute => MechanismMode::Redistribute,
                        };
                        let cap = match capped_cost_expose {
                            CapFile::Broadcast(cap) => {
                                MechanismCap::Broadcast(lift(|| at("capped_cost_expose"), *cap)?)
                            }
                            CapFile::PerWard(caps) => MechanismCap::PerWard(
                                caps.iter()
                                    .enumerate()
                                    .map(|(i, c)| {
                                        lift(|| at(&format!("capped_cost_expose[{i}]")), *c)
                                    })
                                    .collect::<Result<_>>()?,
                            ),
                        };
                        Intervention::Mechanism(Mechanism {
                            capped_cost_expose: cap,
                            mode,
                        })
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Scenario::new(wards, benefit, interventions)
    }

    /// File form of `scenario`, with every ward listed explicitly.
    pub fn from_scenario<T: Scalar>(scenario: &Scenario<T>, options: RunOptions) -> Self {
        let wards = scenario
            .wards()
            .iter()
            .map(|w| WardCosts {
                cost_expose: w.cost_expose.as_f64(),
                cost_buffer: w.cost_buffer.as_f64(),
            })
            .collect();
        let benefit = match scenario.benefit() {
            BenefitSpec::Linear { beta_per_exposer } => BenefitFile::Linear {
                beta_per_exposer: beta_per_exposer.as_f64(),
            },
            BenefitSpec::Threshold { tau, beta } => BenefitFile::Threshold {
                tau: *tau,
                beta: beta.as_f64(),
            },
            BenefitSpec::Concave { beta, gamma } => BenefitFile::Concave {
                beta: beta.as_f64(),
                gamma: gamma.as_f64(),
            },
            BenefitSpec::Table { values } => BenefitFile::Table {
                values: values.iter().map(|v| v.as_f64()).collect(),
            },
        };
        let interventions = scenario
            .interventions()
            .iter()
            .map(|i| match i {
                Intervention::EffortReduction(e) => InterventionFile::Effort {
                    delta_expose: e.delta_expose.as_f64(),
                    delta_buffer: e.delta_buffer.as_f64(),
                },
                Intervention::Observability(o) => InterventionFile::Observability {
                    p0: o.p0.as_f64(),
                    p_slope: o.p_slope.as_f64(),
                    penalty: o.penalty.as_f64(),
                },
                Intervention::Mechanism(m) => InterventionFile::Mechanism {
                    capped_cost_expose: match &m.capped_cost_expose {
                        MechanismCap::Broadcast(cap) => CapFile::Broadcast(cap.as_f64()),
                        MechanismCap::PerWard(caps) => {
                            CapFile::PerWard(caps.iter().map(|c| c.as_f64()).collect())
                        }
                    },
                    mode: match m.mode {
                        MechanismMode::Absorb => ModeFile::Absorb,
                        MechanismMode::Redistribute => ModeFile::Redistribute,
                    },
                },
            })
            .collect();
        ScenarioFile {
            n_wards: scenario.n(),
            wards: WardsSpec::List(wards),
            benefit,
            interventions,
            options,
        }
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario_file(path: &Path) -> Result<ScenarioFile> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file = ScenarioFile::parse(&text)?;
    file.to_scenario::<f64>()?;
    Ok(file)
}

/// Reads a scenario file and builds the game in `T` arithmetic.
pub fn load_scenario<T: Scalar>(path: &Path) -> Result<Scenario<T>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    ScenarioFile::parse(&text)?.to_scenario()
}
