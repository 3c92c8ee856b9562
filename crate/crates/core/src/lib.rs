//! Capacity-signalling coordination games between hospital wards.
//!
//! Each ward either exposes its true capacity (`E`) or buffers (`B`). All
//! wards share a benefit that depends only on how many expose; each pays a
//! private cost for its own action. Interventions reshape those payoffs:
//! effort reduction lowers costs, observability penalises buffering, and a
//! mechanism caps the cost of exposing.
//!
//! The engine is generic over the scalar type. Use the `*64` aliases for
//! everyday work and the `*Exact` aliases when boundary ties and welfare
//! differences must come out exact.
//!
//! ```
//! use wardgames::{enumerate_nash, AnalysisOptions, BenefitSpec, ScenarioExact};
//! use wardgames::scalar::{Exact, Scalar};
//!
//! let d = |v: f64| Exact::from_f64_checked(v).unwrap();
//! let s0 = ScenarioExact::symmetric(
//!     4, d(2.0), d(1.0), BenefitSpec::Linear { beta_per_exposer: d(0.3) }, vec![],
//! ).unwrap();
//! let report = enumerate_nash(&s0, &AnalysisOptions::default()).unwrap();
//! assert_eq!(report.profiles()[0].to_string(), "BBBB");
//! assert_eq!(report.welfare_gap, Some(d(0.8)));
//! ```

// `!(a < b)` is used deliberately so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod equilibrium;
pub mod error;
pub mod interventions;
pub mod model;
mod parallel;
pub mod report;
pub mod scalar;
pub mod scenario_file;
pub mod sweep;

pub use dynamics::{
    best_response_dynamics, integrate_replicator, potential, replicator_fixed_points,
    BestResponseConfig, DynamicsTrace, ReplicatorConfig, ReplicatorResult, Schedule, TieBreak,
};
pub use equilibrium::{
    best_response, enumerate_nash, enumerate_nash_brute_force, flip_conditions, is_nash,
    AnalysisOptions, Classification, EquilibriumReport, FlipReport,
};
pub use error::{Error, Result};
pub use interventions::{
    EffectiveGame, EffortReduction, Intervention, Mechanism, MechanismCap, MechanismMode,
    Observability,
};
pub use model::{payoff, welfare, Action, ActionProfile, BenefitSpec, Scenario, Ward};
pub use scalar::{Exact, FloatScalar, Scalar};
pub use scenario_file::{load_scenario, ScenarioFile};
pub use sweep::{critical_threshold, sweep_parameter, ParamPath, Predicate, ThresholdResult};

pub type Scenario64 = Scenario<f64>;
pub type Scenario32 = Scenario<f32>;
pub type ScenarioExact = Scenario<Exact>;

pub type EquilibriumReport64 = EquilibriumReport<f64>;
pub type EquilibriumReportExact = EquilibriumReport<Exact>;

pub type FlipReport64 = FlipReport<f64>;
pub type FlipReportExact = FlipReport<Exact>;

pub type Intervention64 = Intervention<f64>;
pub type InterventionExact = Intervention<Exact>;
