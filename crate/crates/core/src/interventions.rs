//! The three intervention archetypes as transforms of the baseline payoff.
//!
//! * [`EffortReduction`] lowers the cost of each action by a fixed amount.
//! * [`Observability`] charges buffering an expected consequence `p * F`,
//!   where the detection probability `p` may depend on how many others expose.
//! * [`Mechanism`] caps the local cost of exposing. In `Redistribute` mode
//!   the removed cost is borne by the system and still counts against
//!   welfare; in `Absorb` mode it disappears.
//!
//! Cost-side transforms commute: the last mechanism in the list sets the
//! exposure cost, and effort reductions are then applied to whatever cost is
//! in force. Effort and observability adjustments are added to the payoff in
//! list order.

use crate::error::{Error, Result};
use crate::model::{check_non_negative, Action, ActionProfile, Scenario, Ward};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct EffortReduction<T> {
    pub delta_expose: T,
    pub delta_buffer: T,
}

impl<T: Scalar> EffortReduction<T> {
    pub fn delta(&self, action: Action) -> T {
        match action {
            Action::Expose => self.delta_expose,
            Action::Buffer => self.delta_buffer,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observability<T> {
    pub p0: T,
    pub p_slope: T,
    pub penalty: T,
}

impl<T: Scalar> Observability<T> {
    pub fn has_constant_probability(&self) -> bool {
        self.p_slope == T::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MechanismMode {
    Absorb,
    Redistribute,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MechanismCap<T> {
    Broadcast(T),
    PerWard(Vec<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mechanism<T> {
    pub capped_cost_expose: MechanismCap<T>,
    pub mode: MechanismMode,
}

impl<T: Scalar> Mechanism<T> {
    pub fn broadcast(cap: T, mode: MechanismMode) -> Self {
        Mechanism {
            capped_cost_expose: MechanismCap::Broadcast(cap),
            mode,
        }
    }

    pub fn per_ward(caps: Vec<T>, mode: MechanismMode) -> Self {
        Mechanism {
            capped_cost_expose: MechanismCap::PerWard(caps),
            mode,
        }
    }

    pub fn cap_for(&self, ward: usize) -> Result<T> {
        match &self.capped_cost_expose {
            MechanismCap::Broadcast(cap) => Ok(*cap),
            MechanismCap::PerWard(caps) => caps.get(ward).copied().ok_or_else(|| {
                Error::Domain(format!(
                    "mechanism lists {} per-ward caps, ward {ward} has none",
                    caps.len()
                ))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Intervention<T> {
    EffortReduction(EffortReduction<T>),
    Observability(Observability<T>),
    Mechanism(Mechanism<T>),
}

impl<T: Scalar> Intervention<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Intervention::EffortReduction(_) => "effort",
            Intervention::Observability(_) => "observability",
            Intervention::Mechanism(_) => "mechanism",
        }
    }

    pub(crate) fn validate(&self, index: usize, n: usize) -> Result<()> {
        let path = |field: &str| format!("interventions[{index}].{field}");
        match self {
            Intervention::EffortReduction(e) => {
                check_non_negative(&path("delta_expose"), e.delta_expose)?;
                check_non_negative(&path("delta_buffer"), e.delta_buffer)
            }
            Intervention::Observability(o) => {
                if !o.p0.is_finite_value() || o.p0 < T::zero() || o.p0 > T::one() {
                    return Err(Error::invalid(
                        path("p0"),
                        format!("must lie in [0, 1], got {}", o.p0),
                    ));
                }
                if !o.p_slope.is_finite_value() {
                    return Err(Error::invalid(path("p_slope"), "must be finite"));
                }
                check_non_negative(&path("penalty"), o.penalty)
            }
            Intervention::Mechanism(m) => match &m.capped_cost_expose {
                MechanismCap::Broadcast(cap) => {
                    check_non_negative(&path("capped_cost_expose"), *cap)
                }
                MechanismCap::PerWard(caps) => {
                    if caps.len() != n {
                        return Err(Error::invalid(
                            path("capped_cost_expose"),
                            format!("expected {n} per-ward caps, found {}", caps.len()),
                        ));
                    }
                    for (ward, cap) in caps.iter().enumerate() {
                        check_non_negative(&path(&format!("capped_cost_expose[{ward}]")), *cap)?;
                    }
                    Ok(())
                }
            },
        }
    }
}

pub fn apply_effort_reduction<T: Scalar>(
    base_payoff: T,
    action: Action,
    params: &EffortReduction<T>,
) -> T {
    base_payoff + params.delta(action)
}

/// `clamp(p0 + p_slope * k_others / (n - 1), 0, 1)`
pub fn detection_probability<T: Scalar>(
    params: &Observability<T>,
    k_others: usize,
    n: usize,
) -> Result<T> {
    if n < 2 || k_others > n - 1 {
        return Err(Error::Domain(format!(
            "k_others = {k_others} outside [0, {}] for n = {n}",
            n.saturating_sub(1)
        )));
    }
    let fraction = T::from_count(k_others) / T::from_count(n - 1);
    Ok((params.p0 + params.p_slope * fraction).clamp_unit())
}

pub fn apply_observability<T: Scalar>(
    base_payoff: T,
    action: Action,
    k_others: usize,
    params: &Observability<T>,
    n: usize,
) -> Result<T> {
    let p = detection_probability(params, k_others, n)?;
    Ok(match action {
        Action::Buffer => base_payoff - p * params.penalty,
        Action::Expose => base_payoff,
    })
}

/// Local cost of `action` for `ward` once the mechanism is in force.
pub fn apply_mechanism<T: Scalar>(
    ward: &Ward<T>,
    action: Action,
    params: &Mechanism<T>,
) -> Result<T> {
    match action {
        Action::Expose => params.cap_for(ward.id),
        Action::Buffer => Ok(ward.cost_buffer),
    }
}

/// Local cost after the last mechanism in the list, before effort reductions.
fn mechanism_cost<T: Scalar>(scenario: &Scenario<T>, ward: usize, action: Action) -> Result<T> {
    let ward = &scenario.wards[ward];
    match last_mechanism(scenario) {
        Some(mechanism) => apply_mechanism(ward, action, mechanism),
        None => Ok(ward.cost(action)),
    }
}

fn last_mechanism<T: Scalar>(scenario: &Scenario<T>) -> Option<&Mechanism<T>> {
    scenario.interventions.iter().rev().find_map(|i| match i {
        Intervention::Mechanism(m) => Some(m),
        _ => None,
    })
}

/// Exposure cost moved onto the system by a redistributing mechanism.
pub fn system_borne_cost<T: Scalar>(
    scenario: &Scenario<T>,
    ward: usize,
    action: Action,
) -> Result<T> {
    scenario.check_ward(ward)?;
    match (action, last_mechanism(scenario)) {
        (Action::Expose, Some(m)) if m.mode == MechanismMode::Redistribute => {
            Ok(scenario.wards[ward].cost_expose - m.cap_for(ward)?)
        }
        _ => Ok(T::zero()),
    }
}

/// Payoff of `ward` playing `action` while `k_others` of the other wards
/// expose. Every payoff in the crate goes through here.
pub(crate) fn payoff_given_count<T: Scalar>(
    scenario: &Scenario<T>,
    ward: usize,
    action: Action,
    k_others: usize,
) -> Result<T> {
    let n = scenario.n();
    let k = k_others + usize::from(action == Action::Expose);
    let mut value = scenario.benefit_at(k)? - mechanism_cost(scenario, ward, action)?;
    for intervention in &scenario.interventions {
        value = match intervention {
            Intervention::EffortReduction(effort) => apply_effort_reduction(value, action, effort),
            Intervention::Observability(obs) => {
                apply_observability(value, action, k_others, obs, n)?
            }
            Intervention::Mechanism(_) => value,
        };
    }
    Ok(value)
}

pub fn effective_payoff<T: Scalar>(
    scenario: &Scenario<T>,
    profile: &ActionProfile,
    ward: usize,
) -> Result<T> {
    scenario.check_profile(profile)?;
    scenario.check_ward(ward)?;
    payoff_given_count(
        scenario,
        ward,
        profile.action(ward),
        profile.exposers_excluding(ward),
    )
}

/// Effective payoffs tabulated by ward, own action and number of other
/// exposers. Payoffs depend on the rest of the profile only through that
/// count, so this table is the whole game.
#[derive(Debug, Clone)]
pub struct EffectiveGame<T> {
    n: usize,
    payoffs: Vec<T>,
    system_borne: Vec<T>,
}

impl<T: Scalar> EffectiveGame<T> {
    pub fn compile(scenario: &Scenario<T>) -> Result<Self> {
        let n = scenario.n();
        let mut payoffs = Vec::with_capacity(n * 2 * n);
        let mut system_borne = Vec::with_capacity(n);
        for ward in 0..n {
            for action in Action::ALL {
                for k_others in 0..n {
                    payoffs.push(payoff_given_count(scenario, ward, action, k_others)?);
                }
            }
            system_borne.push(system_borne_cost(scenario, ward, Action::Expose)?);
        }
        Ok(EffectiveGame {
            n,
            payoffs,
            system_borne,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn payoff(&self, ward: usize, action: Action, k_others: usize) -> T {
        self.payoffs[(ward * 2 + action.index()) * self.n + k_others]
    }

    /// `u(Expose) - u(Buffer)` for `ward` facing `k_others` exposers.
    pub fn expose_advantage(&self, ward: usize, k_others: usize) -> T {
        self.payoff(ward, Action::Expose, k_others) - self.payoff(ward, Action::Buffer, k_others)
    }

    pub fn system_borne(&self, ward: usize) -> T {
        self.system_borne[ward]
    }

    /// Every ward faces exactly the same payoff function.
    pub fn is_symmetric(&self) -> bool {
        let row = 2 * self.n;
        let first = &self.payoffs[..row];
        (1..self.n).all(|ward| {
            self.payoffs[ward * row..(ward + 1) * row] == *first
                && self.system_borne[ward] == self.system_borne[0]
        })
    }

    /// Welfare of the profile encoded by `mask` (bit `i` set = ward `i`
    /// exposes), accumulated in the same order as [`crate::model::welfare`].
    pub fn welfare_of_mask(&self, mask: u64) -> T {
        let k = mask.count_ones() as usize;
        let mut exposers = T::zero();
        let mut buffers = T::zero();
        let mut system_borne = T::zero();
        for ward in 0..self.n {
            if mask >> ward & 1 == 1 {
                exposers = exposers + self.payoff(ward, Action::Expose, k - 1);
                system_borne = system_borne + self.system_borne[ward];
            } else {
                buffers = buffers + self.payoff(ward, Action::Buffer, k);
            }
        }
        exposers + buffers - system_borne
    }

    /// Welfare with the first `k` wards exposing; in a symmetric game this
    /// is the welfare of every profile with `k` exposers.
    pub fn welfare_of_count(&self, k: usize) -> T {
        let mut exposers = T::zero();
        let mut buffers = T::zero();
        let mut system_borne = T::zero();
        for ward in 0..self.n {
            if ward < k {
                exposers = exposers + self.payoff(ward, Action::Expose, k - 1);
                system_borne = system_borne + self.system_borne[ward];
            } else {
                buffers = buffers + self.payoff(ward, Action::Buffer, k);
            }
        }
        exposers + buffers - system_borne
    }
}
