//! Parameter sweeps and critical intervention strengths.
//!
//! Parameters are addressed by dotted paths into the scenario, e.g.
//! `interventions[0].penalty`, `wards[3].cost_expose` or
//! `benefit.values[2]`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::equilibrium::{
    enumerate_compiled, flip_conditions, is_nash_in, AnalysisOptions, Classification, FlipReport,
    NashProfile,
};
use crate::error::{Error, Result};
use crate::interventions::{EffectiveGame, Intervention, MechanismCap};
use crate::model::{Action, ActionProfile, BenefitSpec, Scenario};
use crate::parallel::with_pool;
use crate::scalar::Scalar;

/// Bracket width at which bisection stops.
pub const BISECTION_TOLERANCE: f64 = 1e-9;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WardField {
    CostExpose,
    CostBuffer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BenefitField {
    BetaPerExposer,
    Beta,
    Gamma,
    Value(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InterventionField {
    DeltaExpose,
    DeltaBuffer,
    P0,
    PSlope,
    Penalty,
    Cap(Option<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Ward(usize, WardField),
    Benefit(BenefitField),
    Intervention(usize, InterventionField),
}

/// A parsed parameter path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPath {
    text: String,
    target: Target,
}

fn split_index(segment: &str) -> Option<(&str, Option<usize>)> {
    match segment.split_once('[') {
        None => Some((segment, None)),
        Some((name, rest)) => {
            let index = rest.strip_suffix(']')?.parse().ok()?;
            Some((name, Some(index)))
        }
    }
}

impl FromStr for ParamPath {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let unknown = || Error::config(text, "not a numeric scenario parameter");
        let segments: Vec<_> = text
            .split('.')
            .map(split_index)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(unknown)?;
        let target = match segments.as_slice() {
            [("wards", Some(i)), (field, None)] => Target::Ward(
                *i,
                match *field {
                    "cost_expose" => WardField::CostExpose,
                    "cost_buffer" => WardField::CostBuffer,
                    _ => return Err(unknown()),
                },
            ),
            [("benefit", None), (field, index)] => Target::Benefit(match (*field, index) {
                ("beta_per_exposer", None) => BenefitField::BetaPerExposer,
                ("beta", None) => BenefitField::Beta,
                ("gamma", None) => BenefitField::Gamma,
                ("values", Some(k)) => BenefitField::Value(*k),
                _ => return Err(unknown()),
            }),
            [("interventions", Some(i)), (field, index)] => Target::Intervention(
                *i,
                match (*field, index) {
                    ("delta_expose", None) => InterventionField::DeltaExpose,
                    ("delta_buffer", None) => InterventionField::DeltaBuffer,
                    ("p0", None) => InterventionField::P0,
                    ("p_slope", None) => InterventionField::PSlope,
                    ("penalty", None) => InterventionField::Penalty,
                    ("capped_cost_expose", ward) => InterventionField::Cap(*ward),
                    _ => return Err(unknown()),
                },
            ),
            _ => return Err(unknown()),
        };
        Ok(ParamPath {
            text: text.to_string(),
            target,
        })
    }
}

impl fmt::Display for ParamPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl ParamPath {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    fn slot<'a, T: Scalar>(&self, scenario: &'a mut Scenario<T>) -> Result<&'a mut T> {
        let missing = || Error::config(&self.text, "path does not resolve in this scenario");
        match self.target {
            Target::Ward(i, field) => {
                let ward = scenario.wards.get_mut(i).ok_or_else(missing)?;
                Ok(match field {
                    WardField::CostExpose => &mut ward.cost_expose,
                    WardField::CostBuffer => &mut ward.cost_buffer,
                })
            }
            Target::Benefit(field) => match (&mut scenario.benefit, field) {
                (BenefitSpec::Linear { beta_per_exposer }, BenefitField::BetaPerExposer) => {
                    Ok(beta_per_exposer)
                }
                (BenefitSpec::Threshold { beta, .. }, BenefitField::Beta)
                | (BenefitSpec::Concave { beta, .. }, BenefitField::Beta) => Ok(beta),
                (BenefitSpec::Concave { gamma, .. }, BenefitField::Gamma) => Ok(gamma),
                (BenefitSpec::Table { values }, BenefitField::Value(k)) => {
                    values.get_mut(k).ok_or_else(missing)
                }
                _ => Err(missing()),
            },
            Target::Intervention(i, field) => {
                match (
                    scenario.interventions.get_mut(i).ok_or_else(missing)?,
                    field,
                ) {
                    (Intervention::EffortReduction(e), InterventionField::DeltaExpose) => {
                        Ok(&mut e.delta_expose)
                    }
                    (Intervention::EffortReduction(e), InterventionField::DeltaBuffer) => {
                        Ok(&mut e.delta_buffer)
                    }
                    (Intervention::Observability(o), InterventionField::P0) => Ok(&mut o.p0),
                    (Intervention::Observability(o), InterventionField::PSlope) => {
                        Ok(&mut o.p_slope)
                    }
                    (Intervention::Observability(o), InterventionField::Penalty) => {
                        Ok(&mut o.penalty)
                    }
                    (Intervention::Mechanism(m), InterventionField::Cap(ward)) => {
                        match (&mut m.capped_cost_expose, ward) {
                            (MechanismCap::Broadcast(cap), None) => Ok(cap),
                            (MechanismCap::PerWard(caps), Some(w)) => {
                                caps.get_mut(w).ok_or_else(missing)
                            }
                            _ => Err(missing()),
                        }
                    }
                    _ => Err(missing()),
                }
            }
        }
    }

    pub fn get<T: Scalar>(&self, scenario: &Scenario<T>) -> Result<T> {
        let mut copy = scenario.clone();
        Ok(*self.slot(&mut copy)?)
    }

    /// Copy of `scenario` with this parameter set to `value`, revalidated.
    pub fn set<T: Scalar>(&self, scenario: &Scenario<T>, value: T) -> Result<Scenario<T>> {
        let mut next = scenario.clone();
        *self.slot(&mut next)? = value;
        next.validate()?;
        Ok(next)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid<T> {
    Range { lo: T, hi: T, steps: usize },
    Values(Vec<T>),
}

impl<T: Scalar> Grid<T> {
    pub fn values(&self) -> Result<Vec<T>> {
        match self {
            Grid::Range { lo, hi, steps } => {
                if !(lo < hi) {
                    return Err(Error::config(
                        "grid",
                        format!("lo ({lo}) must be below hi ({hi})"),
                    ));
                }
                if *steps < 2 {
                    return Err(Error::config(
                        "grid",
                        format!("steps must be at least 2, got {steps}"),
                    ));
                }
                let last = T::from_count(steps - 1);
                Ok((0..*steps)
                    .map(|i| *lo + (*hi - *lo) * T::from_count(i) / last)
                    .collect())
            }
            Grid::Values(values) => {
                if values.is_empty() {
                    return Err(Error::config("grid", "no values to sweep"));
                }
                Ok(values.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observables {
    pub nash_set: bool,
    pub classification: bool,
    pub welfare_gap: bool,
    pub flip_margins: bool,
}

impl Observables {
    pub fn all() -> Self {
        Observables {
            nash_set: true,
            classification: true,
            welfare_gap: true,
            flip_margins: true,
        }
    }

    fn needs_enumeration(&self) -> bool {
        self.nash_set || self.classification || self.welfare_gap
    }
}

impl Default for Observables {
    fn default() -> Self {
        Self::all()
    }
}

impl FromStr for Observables {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut selected = Observables {
            nash_set: false,
            classification: false,
            welfare_gap: false,
            flip_margins: false,
        };
        for name in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match name {
                "nash_set" => selected.nash_set = true,
                "classification" => selected.classification = true,
                "welfare_gap" => selected.welfare_gap = true,
                "flip_margins" => selected.flip_margins = true,
                other => {
                    return Err(Error::config(
                        "observables",
                        format!("unknown observable {other:?}"),
                    ))
                }
            }
        }
        Ok(selected)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<T> {
    pub path: ParamPath,
    pub grid: Grid<T>,
    pub observables: Observables,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub value: T,
    pub nash_set: Option<Vec<NashProfile>>,
    pub classification: Option<Classification>,
    /// Outer `None` when not requested; inner `None` when no pure
    /// equilibrium exists.
    pub welfare_gap: Option<Option<T>>,
    pub flip: Option<FlipReport<T>>,
}

fn evaluate_point<T: Scalar>(
    scenario: &Scenario<T>,
    spec: &SweepSpec<T>,
    value: T,
    options: &AnalysisOptions<T>,
) -> Result<SweepRow<T>> {
    let point = spec.path.set(scenario, value)?;
    let observables = spec.observables;
    let report = if observables.needs_enumeration() {
        let game = EffectiveGame::compile(&point)?;
        Some(enumerate_compiled(&game, options)?)
    } else {
        None
    };
    let flip = if observables.flip_margins {
        Some(flip_conditions(&point, options.epsilon)?)
    } else {
        None
    };
    Ok(SweepRow {
        value,
        nash_set: report
            .as_ref()
            .filter(|_| observables.nash_set)
            .map(|r| r.nash_profiles.clone()),
        classification: report
            .as_ref()
            .filter(|_| observables.classification)
            .map(|r| r.classification),
        welfare_gap: report
            .as_ref()
            .filter(|_| observables.welfare_gap)
            .map(|r| r.welfare_gap),
        flip,
    })
}

/// Evaluates the requested observables at every grid value, in grid order.
pub fn sweep_parameter<T: Scalar>(
    scenario: &Scenario<T>,
    spec: &SweepSpec<T>,
    options: &AnalysisOptions<T>,
) -> Result<Vec<SweepRow<T>>> {
    spec.path.get(scenario)?;
    let values = spec.grid.values()?;
    let inner = AnalysisOptions {
        threads: 0,
        ..*options
    };
    with_pool(options.threads, || {
        values
            .par_iter()
            .map(|value| evaluate_point(scenario, spec, *value, &inner))
            .collect::<Result<Vec<_>>>()
    })?
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    AllBufferNash,
    AllBufferNotNash,
    AllExposeNash,
    AllExposeNotNash,
}

impl Predicate {
    pub fn name(self) -> &'static str {
        match self {
            Predicate::AllBufferNash => "all-buffer-nash",
            Predicate::AllBufferNotNash => "all-buffer-not-nash",
            Predicate::AllExposeNash => "all-expose-nash",
            Predicate::AllExposeNotNash => "all-expose-not-nash",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Predicate::AllBufferNash => "all-Buffer is Nash",
            Predicate::AllBufferNotNash => "all-Buffer ceases to be Nash",
            Predicate::AllExposeNash => "all-Expose becomes Nash",
            Predicate::AllExposeNotNash => "all-Expose is not Nash",
        }
    }

    fn pole(self) -> Action {
        match self {
            Predicate::AllBufferNash | Predicate::AllBufferNotNash => Action::Buffer,
            Predicate::AllExposeNash | Predicate::AllExposeNotNash => Action::Expose,
        }
    }

    fn wants_nash(self) -> bool {
        matches!(self, Predicate::AllBufferNash | Predicate::AllExposeNash)
    }

    /// Evaluated with weak-Nash semantics, consistent with the enumeration.
    pub fn evaluate<T: Scalar>(self, scenario: &Scenario<T>, epsilon: T) -> Result<bool> {
        let game = EffectiveGame::compile(scenario)?;
        let pole = ActionProfile::uniform(scenario.n(), self.pole());
        Ok(is_nash_in(&game, &pole, epsilon).is_nash == self.wants_nash())
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        [
            Predicate::AllBufferNash,
            Predicate::AllBufferNotNash,
            Predicate::AllExposeNash,
            Predicate::AllExposeNotNash,
        ]
        .into_iter()
        .find(|p| p.name() == text)
        .ok_or_else(|| {
            Error::config(
                "predicate",
                format!(
                    "unknown predicate {text:?}; expected all-buffer-nash, all-buffer-not-nash, \
                     all-expose-nash or all-expose-not-nash"
                ),
            )
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult<T> {
    pub critical_value: T,
    pub predicate: Predicate,
    /// Final bracket around the switch point.
    pub bracket: (T, T),
    /// Whether the predicate holds at the upper end of the search range.
    pub true_above: bool,
    pub iterations: usize,
    /// Closed form for linear-benefit scenarios with identical wards.
    pub analytic_value: Option<T>,
}

/// Locates where `predicate` switches truth value on `[lo, hi]` by
/// bisection. The critical value is the bracket end on the side where the
/// predicate holds.
pub fn critical_threshold<T: Scalar>(
    scenario: &Scenario<T>,
    path: &ParamPath,
    lo: T,
    hi: T,
    predicate: Predicate,
    epsilon: T,
) -> Result<ThresholdResult<T>> {
    if !(lo < hi) {
        return Err(Error::Bracket(format!("lo ({lo}) must be below hi ({hi})")));
    }
    path.get(scenario)?;
    let holds =
        |value: T| -> Result<bool> { predicate.evaluate(&path.set(scenario, value)?, epsilon) };
    let at_lo = holds(lo)?;
    let at_hi = holds(hi)?;
    if at_lo == at_hi {
        return Err(Error::Bracket(format!(
            "predicate {:?} is {} at both {lo} and {hi}",
            predicate.name(),
            at_lo
        )));
    }

    let tolerance = T::from_f64_checked(BISECTION_TOLERANCE).expect("tolerance is representable");
    let (mut low, mut high) = (lo, hi);
    let mut iterations = 0;
    while high - low > tolerance && iterations < MAX_BISECTIONS {
        let mid = (low + high) * T::half();
        if !(mid > low && mid < high) {
            break;
        }
        iterations += 1;
        if holds(mid)? == at_hi {
            high = mid;
        } else {
            low = mid;
        }
    }

    Ok(ThresholdResult {
        critical_value: if at_hi { high } else { low },
        predicate,
        bracket: (low, high),
        true_above: at_hi,
        iterations,
        analytic_value: analytic_threshold(scenario, path, predicate),
    })
}

/// Closed-form switch point for identical wards, linear benefit and a single
/// intervention that the swept parameter belongs to.
///
/// With baseline disadvantage `g = c(E) - c(B) - beta`, the margin at the
/// uniform opposing profile is linear in each supported parameter:
/// effort `Δ_E - Δ_B = g`, observability `p F = g`, mechanism
/// `cap = c(B) + beta`.
pub fn analytic_threshold<T: Scalar>(
    scenario: &Scenario<T>,
    path: &ParamPath,
    predicate: Predicate,
) -> Option<T> {
    let BenefitSpec::Linear {
        beta_per_exposer: beta,
    } = scenario.benefit()
    else {
        return None;
    };
    let Target::Intervention(index, field) = path.target else {
        return None;
    };
    if scenario.interventions().len() != 1 || index != 0 || !scenario.has_identical_wards() {
        return None;
    }
    let ward = &scenario.wards()[0];
    let gap = ward.cost_expose - ward.cost_buffer - *beta;
    let n = scenario.n();
    let k_others = match predicate.pole() {
        Action::Buffer => 0,
        Action::Expose => n - 1,
    };
    match (&scenario.interventions()[0], field) {
        (Intervention::EffortReduction(e), InterventionField::DeltaExpose) => {
            Some(gap + e.delta_buffer)
        }
        (Intervention::EffortReduction(e), InterventionField::DeltaBuffer) => {
            Some(e.delta_expose - gap)
        }
        (Intervention::Observability(o), InterventionField::Penalty) => {
            let fraction = T::from_count(k_others) / T::from_count(n - 1);
            let p = (o.p0 + o.p_slope * fraction).clamp_unit();
            (p > T::zero()).then(|| gap / p)
        }
        (Intervention::Observability(o), InterventionField::P0) => {
            (o.p_slope == T::zero() && o.penalty > T::zero()).then(|| gap / o.penalty)
        }
        (Intervention::Mechanism(_), InterventionField::Cap(None)) => {
            Some(ward.cost_buffer + *beta)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interventions::{EffortReduction, Mechanism, MechanismMode, Observability};

    fn s0_with(interventions: Vec<Intervention<f64>>) -> Scenario<f64> {
        Scenario::symmetric(
            4,
            2.0,
            1.0,
            BenefitSpec::Linear {
                beta_per_exposer: 0.3,
            },
            interventions,
        )
        .unwrap()
    }

    fn observability(penalty: f64) -> Intervention<f64> {
        Intervention::Observability(Observability {
            p0: 0.5,
            p_slope: 0.0,
            penalty,
        })
    }

    fn effort(delta_expose: f64) -> Intervention<f64> {
        Intervention::EffortReduction(EffortReduction {
            delta_expose,
            delta_buffer: 0.0,
        })
    }

    fn path(text: &str) -> ParamPath {
        text.parse().unwrap()
    }

    #[test]
    fn paths_parse_and_resolve() {
        let s = s0_with(vec![observability(1.0)]);
        assert_eq!(path("interventions[0].penalty").get(&s).unwrap(), 1.0);
        assert_eq!(path("wards[2].cost_expose").get(&s).unwrap(), 2.0);
        assert_eq!(path("benefit.beta_per_exposer").get(&s).unwrap(), 0.3);
        let updated = path("interventions[0].penalty").set(&s, 2.5).unwrap();
        assert_eq!(path("interventions[0].penalty").get(&updated).unwrap(), 2.5);
    }

    #[test]
    fn bad_paths_name_themselves() {
        assert!("interventions[0].colour".parse::<ParamPath>().is_err());
        assert!("wards.cost_expose".parse::<ParamPath>().is_err());
        let s = s0_with(vec![observability(1.0)]);
        let err = path("interventions[0].delta_expose").get(&s).unwrap_err();
        assert!(
            err.to_string().starts_with("interventions[0].delta_expose"),
            "{err}"
        );
        let err = path("interventions[3].penalty").get(&s).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn setting_invalid_values_fails_validation() {
        let s = s0_with(vec![observability(1.0)]);
        assert!(path("interventions[0].p0").set(&s, 1.5).is_err());
    }

    #[test]
    fn observability_sweep_rows() {
        let s = s0_with(vec![observability(0.0)]);
        let spec = SweepSpec {
            path: path("interventions[0].penalty"),
            grid: Grid::Values(vec![0.0, 0.5, 1.0, 1.4, 2.0]),
            observables: Observables::all(),
        };
        let rows = sweep_parameter(&s, &spec, &AnalysisOptions::default()).unwrap();
        let classes: Vec<_> = rows.iter().map(|r| r.classification.unwrap()).collect();
        assert_eq!(
            classes,
            vec![
                Classification::DominantBuffer,
                Classification::DominantBuffer,
                Classification::DominantBuffer,
                Classification::Other,
                Classification::DominantExpose
            ]
        );
        let boundary = rows[3].nash_set.as_ref().unwrap();
        let all_buffer: ActionProfile = "BBBB".parse().unwrap();
        let all_expose: ActionProfile = "EEEE".parse().unwrap();
        assert!(boundary
            .iter()
            .any(|p| p.profile == all_buffer && !p.strict));
        assert!(boundary
            .iter()
            .any(|p| p.profile == all_expose && !p.strict));
    }

    #[test]
    fn repeated_value_gives_identical_rows() {
        let s = s0_with(vec![observability(0.0)]);
        let spec = SweepSpec {
            path: path("interventions[0].penalty"),
            grid: Grid::Values(vec![0.7; 4]),
            observables: Observables::all(),
        };
        let rows = sweep_parameter(&s, &spec, &AnalysisOptions::default()).unwrap();
        assert!(rows.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn effort_sweep_flips_between_rows() {
        let s = s0_with(vec![effort(0.0)]);
        let spec = SweepSpec {
            path: path("interventions[0].delta_expose"),
            grid: Grid::Range {
                lo: 0.0,
                hi: 1.0,
                steps: 6,
            },
            observables: Observables::all(),
        };
        let rows = sweep_parameter(&s, &spec, &AnalysisOptions::default()).unwrap();
        let all_buffer: ActionProfile = "BBBB".parse().unwrap();
        let buffer_nash: Vec<bool> = rows
            .iter()
            .map(|r| {
                r.nash_set
                    .as_ref()
                    .unwrap()
                    .iter()
                    .any(|p| p.profile == all_buffer)
            })
            .collect();
        assert_eq!(buffer_nash, vec![true, true, true, true, false, false]);
        assert!((rows[3].value - 0.6).abs() < 1e-12 && (rows[4].value - 0.8).abs() < 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::Range {
            lo: 1.0,
            hi: 0.0,
            steps: 3
        }
        .values()
        .is_err());
        assert!(Grid::Range {
            lo: 0.0,
            hi: 1.0,
            steps: 1
        }
        .values()
        .is_err());
        assert_eq!(
            Grid::Range {
                lo: 0.0,
                hi: 2.0,
                steps: 5
            }
            .values()
            .unwrap(),
            vec![0.0, 0.5, 1.0, 1.5, 2.0]
        );
    }

    #[test]
    fn observability_threshold() {
        let s = s0_with(vec![observability(1.0)]);
        let result = critical_threshold(
            &s,
            &path("interventions[0].penalty"),
            0.0,
            5.0,
            Predicate::AllBufferNotNash,
            0.0,
        )
        .unwrap();
        assert!((result.critical_value - 1.4).abs() < 1e-6);
        assert!((result.analytic_value.unwrap() - 1.4).abs() < 1e-12);
        assert!(result.true_above);
        assert!(result.bracket.1 - result.bracket.0 <= BISECTION_TOLERANCE);
    }

    #[test]
    fn mechanism_threshold() {
        let s = s0_with(vec![Intervention::Mechanism(Mechanism::broadcast(
            1.2,
            MechanismMode::Absorb,
        ))]);
        let result = critical_threshold(
            &s,
            &path("interventions[0].capped_cost_expose"),
            0.0,
            2.0,
            Predicate::AllExposeNash,
            0.0,
        )
        .unwrap();
        assert!((result.critical_value - 1.3).abs() < 1e-6);
        assert!((result.analytic_value.unwrap() - 1.3).abs() < 1e-12);
        assert!(!result.true_above);
    }

    #[test]
    fn effort_threshold() {
        let s = s0_with(vec![effort(0.0)]);
        let result = critical_threshold(
            &s,
            &path("interventions[0].delta_expose"),
            0.0,
            1.0,
            Predicate::AllBufferNotNash,
            0.0,
        )
        .unwrap();
        assert!((result.critical_value - 0.7).abs() < 1e-6);
        assert!((result.analytic_value.unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn identical_predicate_is_a_bracket_error() {
        let s = s0_with(vec![observability(1.0)]);
        let err = critical_threshold(
            &s,
            &path("interventions[0].penalty"),
            0.0,
            1.0,
            Predicate::AllBufferNotNash,
            0.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Bracket(_)));
    }

    #[test]
    fn predicate_names_round_trip() {
        for p in [
            Predicate::AllBufferNash,
            Predicate::AllBufferNotNash,
            Predicate::AllExposeNash,
            Predicate::AllExposeNotNash,
        ] {
            assert_eq!(p.name().parse::<Predicate>().unwrap(), p);
        }
        assert!("sometimes".parse::<Predicate>().is_err());
    }

    #[test]
    fn observables_parse() {
        let o: Observables = "nash_set,welfare_gap".parse().unwrap();
        assert!(o.nash_set && o.welfare_gap && !o.classification && !o.flip_margins);
        assert!("nash_set,vibes".parse::<Observables>().is_err());
    }
}
