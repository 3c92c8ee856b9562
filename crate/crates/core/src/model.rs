//! Wards, actions, the shared system benefit and baseline payoffs.
//!
//! Every ward picks [`Action::Expose`] or [`Action::Buffer`]. The system
//! benefit depends only on how many wards expose and accrues to everyone;
//! each ward bears its own local cost for the action it takes:
//!
//! ```text
//! u_i(a) = B(k) - c_i(a_i),   k = |{ j : a_j = Expose }|
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interventions::{self, Intervention, MechanismCap};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Expose,
    Buffer,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Expose, Action::Buffer];

    pub fn other(self) -> Action {
        match self {
            Action::Expose => Action::Buffer,
            Action::Buffer => Action::Expose,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Action::Expose => 'E',
            Action::Buffer => 'B',
        }
    }

    pub fn from_symbol(symbol: char) -> Option<Action> {
        match symbol {
            'E' | 'e' => Some(Action::Expose),
            'B' | 'b' => Some(Action::Buffer),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Action::Expose => 0,
            Action::Buffer => 1,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One action per ward, ordered by ward index. Profiles order
/// lexicographically with `Expose < Buffer`, so `"EEBB" < "EBBB"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionProfile {
    actions: Vec<Action>,
}

impl ActionProfile {
    pub fn new(actions: Vec<Action>) -> Self {
        ActionProfile { actions }
    }

    pub fn uniform(n: usize, action: Action) -> Self {
        ActionProfile {
            actions: vec![action; n],
        }
    }

    /// Bit `i` of `mask` set means ward `i` exposes.
    pub fn from_exposer_mask(n: usize, mask: u64) -> Self {
        let actions = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Action::Expose
                } else {
                    Action::Buffer
                }
            })
            .collect();
        ActionProfile { actions }
    }

    pub fn exposer_mask(&self) -> u64 {
        self.actions
            .iter()
            .enumerate()
            .filter(|(_, a)| **a == Action::Expose)
            .fold(0u64, |mask, (i, _)| mask | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn action(&self, ward: usize) -> Action {
        self.actions[ward]
    }

    pub fn set(&mut self, ward: usize, action: Action) {
        self.actions[ward] = action;
    }

    pub fn with_action(&self, ward: usize, action: Action) -> Self {
        let mut next = self.clone();
        next.set(ward, action);
        next
    }

    pub fn exposer_count(&self) -> usize {
        self.actions
            .iter()
            .filter(|a| **a == Action::Expose)
            .count()
    }

    /// Exposers among everyone except `ward`.
    pub fn exposers_excluding(&self, ward: usize) -> usize {
        self.exposer_count() - usize::from(self.actions[ward] == Action::Expose)
    }
}

impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for action in &self.actions {
            write!(f, "{}", action.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for ActionProfile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let actions = text
            .trim()
            .chars()
            .map(|c| {
                Action::from_symbol(c).ok_or_else(|| {
                    Error::Domain(format!(
                        "profile {text:?}: unexpected symbol {c:?}, use E or B"
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if actions.is_empty() {
            return Err(Error::Domain("empty action profile".into()));
        }
        Ok(ActionProfile { actions })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ward<T> {
    pub id: usize,
    pub cost_expose: T,
    pub cost_buffer: T,
}

impl<T: Scalar> Ward<T> {
    pub fn new(id: usize, cost_expose: T, cost_buffer: T) -> Self {
        Ward {
            id,
            cost_expose,
            cost_buffer,
        }
    }

    pub fn cost(&self, action: Action) -> T {
        match action {
            Action::Expose => self.cost_expose,
            Action::Buffer => self.cost_buffer,
        }
    }
}

/// System benefit as a function of the exposer count.
#[derive(Debug, Clone, PartialEq)]
pub enum BenefitSpec<T> {
    /// `B(k) = beta_per_exposer * k`
    Linear { beta_per_exposer: T },
    /// `B(k) = beta` once at least `tau` wards expose; `tau = N` is a veto game.
    Threshold { tau: usize, beta: T },
    /// `B(k) = beta * k^gamma`
    Concave { beta: T, gamma: T },
    /// `B(k) = values[k]`
    Table { values: Vec<T> },
}

impl<T: Scalar> BenefitSpec<T> {
    /// Benefit with `k` exposers out of `n` wards.
    pub fn value_at(&self, k: usize, n: usize) -> Result<T> {
        if k > n {
            return Err(Error::Domain(format!("exposer count {k} outside [0, {n}]")));
        }
        match self {
            BenefitSpec::Linear { beta_per_exposer } => Ok(*beta_per_exposer * T::from_count(k)),
            BenefitSpec::Threshold { tau, beta } => Ok(if k >= *tau { *beta } else { T::zero() }),
            BenefitSpec::Concave { beta, gamma } => {
                let scaled = T::from_count(k).pow_real(*gamma).ok_or_else(|| {
                    Error::Domain(format!(
                        "{k}^{gamma} is not representable in this arithmetic"
                    ))
                })?;
                Ok(*beta * scaled)
            }
            BenefitSpec::Table { values } => values.get(k).copied().ok_or_else(|| {
                Error::Domain(format!(
                    "benefit table has {} entries, needs {}",
                    values.len(),
                    n + 1
                ))
            }),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let non_negative = |path: &str, value: T| check_non_negative(path, value);
        match self {
            BenefitSpec::Linear { beta_per_exposer } => {
                non_negative("benefit.beta_per_exposer", *beta_per_exposer)
            }
            BenefitSpec::Threshold { tau, beta } => {
                if *tau < 1 || *tau > n {
                    return Err(Error::invalid(
                        "benefit.tau",
                        format!("must lie in [1, {n}], got {tau}"),
                    ));
                }
                non_negative("benefit.beta", *beta)
            }
            BenefitSpec::Concave { beta, gamma } => {
                non_negative("benefit.beta", *beta)?;
                if !gamma.is_finite_value() || *gamma <= T::zero() || *gamma > T::one() {
                    return Err(Error::invalid(
                        "benefit.gamma",
                        format!("must lie in (0, 1], got {gamma}"),
                    ));
                }
                // Surface unrepresentable powers at load time.
                for k in 0..=n {
                    self.value_at(k, n)
                        .map_err(|e| Error::invalid("benefit.gamma", e.to_string()))?;
                }
                Ok(())
            }
            BenefitSpec::Table { values } => {
                if values.len() != n + 1 {
                    return Err(Error::invalid(
                        "benefit.values",
                        format!("expected {} entries (N+1), found {}", n + 1, values.len()),
                    ));
                }
                for (k, value) in values.iter().enumerate() {
                    if !value.is_finite_value() {
                        return Err(Error::invalid(
                            format!("benefit.values[{k}]"),
                            "must be finite",
                        ));
                    }
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn check_non_negative<T: Scalar>(path: &str, value: T) -> Result<()> {
    if !value.is_finite_value() || value < T::zero() {
        return Err(Error::invalid(
            path,
            format!("must be finite and non-negative, got {value}"),
        ));
    }
    Ok(())
}

/// Non-fatal findings about a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The ward does not satisfy `cost_expose > cost_buffer`.
    ExposureNotCostlier { ward: usize },
    /// `B(1) - B(0)` is not below the smallest exposure cost gap, so a lone
    /// exposer is not nearly indifferent about the system benefit.
    MarginalBenefitNotSmall {
        marginal_benefit: f64,
        min_cost_gap: f64,
    },
    /// A mechanism cap does not lower the ward's exposure cost.
    MechanismNotReducing { intervention: usize, ward: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ExposureNotCostlier { ward } => {
                write!(f, "wards[{ward}]: cost_expose is not greater than cost_buffer")
            }
            Warning::MarginalBenefitNotSmall {
                marginal_benefit,
                min_cost_gap,
            } => write!(
                f,
                "benefit: B(1) - B(0) = {marginal_benefit} is not below the smallest cost gap {min_cost_gap}"
            ),
            Warning::MechanismNotReducing { intervention, ward } => write!(
                f,
                "interventions[{intervention}]: cap for ward {ward} is not below its cost_expose"
            ),
        }
    }
}

/// A complete game: wards, shared benefit and the interventions applied on
/// top of the baseline payoffs, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T> {
    pub(crate) wards: Vec<Ward<T>>,
    pub(crate) benefit: BenefitSpec<T>,
    pub(crate) interventions: Vec<Intervention<T>>,
}

impl<T: Scalar> Scenario<T> {
    pub fn new(
        wards: Vec<Ward<T>>,
        benefit: BenefitSpec<T>,
        interventions: Vec<Intervention<T>>,
    ) -> Result<Self> {
        let scenario = Scenario {
            wards,
            benefit,
            interventions,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// `n` identical wards.
    pub fn symmetric(
        n: usize,
        cost_expose: T,
        cost_buffer: T,
        benefit: BenefitSpec<T>,
        interventions: Vec<Intervention<T>>,
    ) -> Result<Self> {
        let wards = (0..n)
            .map(|id| Ward::new(id, cost_expose, cost_buffer))
            .collect();
        Scenario::new(wards, benefit, interventions)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.wards.len();
        if n < 2 {
            return Err(Error::invalid(
                "wards",
                format!("need at least 2 wards, got {n}"),
            ));
        }
        for (i, ward) in self.wards.iter().enumerate() {
            if ward.id != i {
                return Err(Error::invalid(
                    format!("wards[{i}].id"),
                    format!("ward ids must be 0..N-1 in order, got {}", ward.id),
                ));
            }
            check_non_negative(&format!("wards[{i}].cost_expose"), ward.cost_expose)?;
            check_non_negative(&format!("wards[{i}].cost_buffer"), ward.cost_buffer)?;
        }
        self.benefit.validate(n)?;
        for (index, intervention) in self.interventions.iter().enumerate() {
            intervention.validate(index, n)?;
        }
        Ok(())
    }

    pub fn warnings(&self) -> Vec<Warning> {
        let mut warnings = Vec::new();
        for ward in &self.wards {
            if ward.cost_expose <= ward.cost_buffer {
                warnings.push(Warning::ExposureNotCostlier { ward: ward.id });
            }
        }
        let n = self.n();
        if let (Ok(b1), Ok(b0)) = (self.benefit.value_at(1, n), self.benefit.value_at(0, n)) {
            let marginal = b1 - b0;
            let min_gap = self
                .wards
                .iter()
                .map(|w| w.cost_expose - w.cost_buffer)
                .fold(None, |acc: Option<T>, gap| match acc {
                    Some(best) if best <= gap => Some(best),
                    _ => Some(gap),
                });
            if let Some(min_gap) = min_gap {
                if marginal >= min_gap {
                    warnings.push(Warning::MarginalBenefitNotSmall {
                        marginal_benefit: marginal.as_f64(),
                        min_cost_gap: min_gap.as_f64(),
                    });
                }
            }
        }
        for (index, intervention) in self.interventions.iter().enumerate() {
            if let Intervention::Mechanism(mechanism) = intervention {
                for ward in &self.wards {
                    if let Ok(cap) = mechanism.cap_for(ward.id) {
                        if cap >= ward.cost_expose {
                            warnings.push(Warning::MechanismNotReducing {
                                intervention: index,
                                ward: ward.id,
                            });
                        }
                    }
                }
            }
        }
        warnings
    }

    pub fn n(&self) -> usize {
        self.wards.len()
    }

    pub fn wards(&self) -> &[Ward<T>] {
        &self.wards
    }

    pub fn benefit(&self) -> &BenefitSpec<T> {
        &self.benefit
    }

    pub fn interventions(&self) -> &[Intervention<T>] {
        &self.interventions
    }

    pub fn benefit_at(&self, k: usize) -> Result<T> {
        self.benefit.value_at(k, self.n())
    }

    /// The same wards and benefit with no interventions.
    pub fn baseline(&self) -> Scenario<T> {
        self.with_interventions(Vec::new())
    }

    pub fn with_interventions(&self, interventions: Vec<Intervention<T>>) -> Scenario<T> {
        Scenario {
            wards: self.wards.clone(),
            benefit: self.benefit.clone(),
            interventions,
        }
    }

    /// All wards share the same baseline costs.
    pub fn has_identical_wards(&self) -> bool {
        let first = &self.wards[0];
        self.wards
            .iter()
            .all(|w| w.cost_expose == first.cost_expose && w.cost_buffer == first.cost_buffer)
            && self.interventions.iter().all(|i| match i {
                Intervention::Mechanism(m) => match &m.capped_cost_expose {
                    MechanismCap::Broadcast(_) => true,
                    MechanismCap::PerWard(caps) => caps.iter().all(|c| *c == caps[0]),
                },
                _ => true,
            })
    }

    pub(crate) fn check_profile(&self, profile: &ActionProfile) -> Result<()> {
        if profile.len() != self.n() {
            return Err(Error::Domain(format!(
                "profile {profile} has {} actions, scenario has {} wards",
                profile.len(),
                self.n()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_ward(&self, ward: usize) -> Result<()> {
        if ward >= self.n() {
            return Err(Error::Domain(format!(
                "ward {ward} out of range for {} wards",
                self.n()
            )));
        }
        Ok(())
    }
}

pub fn benefit_at_count<T: Scalar>(spec: &BenefitSpec<T>, k: usize, n: usize) -> Result<T> {
    spec.value_at(k, n)
}

/// Payoff before any intervention: `B(k) - c_i(a_i)`.
pub fn baseline_payoff<T: Scalar>(
    scenario: &Scenario<T>,
    profile: &ActionProfile,
    ward: usize,
) -> Result<T> {
    scenario.check_profile(profile)?;
    scenario.check_ward(ward)?;
    let benefit = scenario.benefit_at(profile.exposer_count())?;
    Ok(benefit - scenario.wards[ward].cost(profile.action(ward)))
}

/// Ward payoff with every intervention applied in list order.
pub fn payoff<T: Scalar>(
    scenario: &Scenario<T>,
    profile: &ActionProfile,
    ward: usize,
) -> Result<T> {
    if scenario.interventions.is_empty() {
        baseline_payoff(scenario, profile, ward)
    } else {
        interventions::effective_payoff(scenario, profile, ward)
    }
}

/// Sum of payoffs, minus any exposure cost a redistributing mechanism moved
/// onto the system.
///
/// Exposers are summed before buffers, each group in ward order, so
/// permuting identical wards cannot change the rounding.
pub fn welfare<T: Scalar>(scenario: &Scenario<T>, profile: &ActionProfile) -> Result<T> {
    scenario.check_profile(profile)?;
    let mut exposers = T::zero();
    let mut buffers = T::zero();
    let mut system_borne = T::zero();
    for ward in 0..scenario.n() {
        let value = payoff(scenario, profile, ward)?;
        match profile.action(ward) {
            Action::Expose => {
                exposers = exposers + value;
                system_borne = system_borne
                    + interventions::system_borne_cost(scenario, ward, Action::Expose)?;
            }
            Action::Buffer => buffers = buffers + value,
        }
    }
    Ok(exposers + buffers - system_borne)
}
