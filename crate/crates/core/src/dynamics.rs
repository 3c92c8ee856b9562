//! Adaptive play: wards revising one at a time toward better replies, and
//! two-strategy replicator dynamics for a large population of identical
//! wards.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::equilibrium::is_nash_in;
use crate::error::{Error, Result};
use crate::interventions::EffectiveGame;
use crate::model::{Action, ActionProfile, Scenario};
use crate::scalar::{FloatScalar, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Wards take turns in index order.
    RoundRobin,
    /// A uniformly random ward moves each turn.
    RandomSeeded(u64),
}

/// What a scheduled ward does when both actions are best responses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    PreferStay,
    PreferExpose,
    PreferBuffer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestResponseConfig<T> {
    pub schedule: Schedule,
    pub max_iters: usize,
    pub tie_break: TieBreak,
    pub epsilon: T,
}

impl<T: Scalar> Default for BestResponseConfig<T> {
    fn default() -> Self {
        BestResponseConfig {
            schedule: Schedule::RoundRobin,
            max_iters: 1000,
            tie_break: TieBreak::PreferStay,
            epsilon: T::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsStep<T> {
    pub profile: ActionProfile,
    /// `None` for the initial state.
    pub mover: Option<usize>,
    pub payoff_delta: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    ConvergedToNash,
    CycleDetected,
    MaxItersReached,
}

impl Terminal {
    pub fn name(self) -> &'static str {
        match self {
            Terminal::ConvergedToNash => "ConvergedToNash",
            Terminal::CycleDetected => "CycleDetected",
            Terminal::MaxItersReached => "MaxItersReached",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsTrace<T> {
    /// The initial profile followed by one entry per move.
    pub steps: Vec<DynamicsStep<T>>,
    pub terminal: Terminal,
    /// Scheduled turns consumed, including turns where the ward stayed put.
    pub iterations: usize,
}

impl<T: Scalar> DynamicsTrace<T> {
    pub fn final_profile(&self) -> &ActionProfile {
        &self
            .steps
            .last()
            .expect("trace holds the initial profile")
            .profile
    }

    pub fn moves(&self) -> usize {
        self.steps.len() - 1
    }
}

/// Sequential best-response dynamics.
///
/// Each turn the scheduled ward switches if the other action pays strictly
/// more (by more than `epsilon`). On an exact tie it switches only when the
/// tie-break prefers the other action; such moves are recorded with a zero
/// payoff delta. The run stops as soon as no ward has a strictly profitable
/// deviation, when a round-robin state repeats, or after `max_iters` turns.
pub fn best_response_dynamics<T: Scalar>(
    scenario: &Scenario<T>,
    initial: &ActionProfile,
    config: &BestResponseConfig<T>,
) -> Result<DynamicsTrace<T>> {
    scenario.check_profile(initial)?;
    if config.max_iters < 1 {
        return Err(Error::Domain("max_iters must be at least 1".into()));
    }
    let game = EffectiveGame::compile(scenario)?;
    let n = game.n();
    let epsilon = config.epsilon;

    let mut profile = initial.clone();
    let mut steps = vec![DynamicsStep {
        profile: profile.clone(),
        mover: None,
        payoff_delta: T::zero(),
    }];
    let mut seen: HashSet<(ActionProfile, usize)> = HashSet::new();
    let mut rng = match config.schedule {
        Schedule::RandomSeeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Schedule::RoundRobin => None,
    };
    let mut iterations = 0;

    let terminal = loop {
        if is_nash_in(&game, &profile, epsilon).is_nash {
            break Terminal::ConvergedToNash;
        }
        if iterations == config.max_iters {
            break Terminal::MaxItersReached;
        }
        let ward = match rng.as_mut() {
            Some(rng) => rng.gen_range(0..n),
            None => iterations % n,
        };
        if rng.is_none() && !seen.insert((profile.clone(), ward)) {
            break Terminal::CycleDetected;
        }
        iterations += 1;

        let own = profile.action(ward);
        let k_others = profile.exposers_excluding(ward);
        let current = game.payoff(ward, own, k_others);
        let alternative = game.payoff(ward, own.other(), k_others);
        let tie = alternative >= current - epsilon;
        let preferred = match config.tie_break {
            TieBreak::PreferStay => None,
            TieBreak::PreferExpose => Some(Action::Expose),
            TieBreak::PreferBuffer => Some(Action::Buffer),
        };
        let switch = alternative > current + epsilon || (tie && preferred == Some(own.other()));
        if switch {
            profile.set(ward, own.other());
            steps.push(DynamicsStep {
                profile: profile.clone(),
                mover: Some(ward),
                payoff_delta: alternative - current,
            });
        }
    };

    Ok(DynamicsTrace {
        steps,
        terminal,
        iterations,
    })
}

/// Exact potential of the profile.
///
/// Every ward's expose advantage has the form `h(k_others) - g_i`: a part
/// shared by all wards (benefit increments, detection penalty, effort
/// deltas) and a ward constant (its cost gap after any mechanism). Summing
/// the advantage of the `m`-th exposer facing `m` earlier exposers,
///
/// ```text
/// phi = sum_{m < k} adv_{i_m}(m) = sum_{m < k} h(m) - sum_{i exposes} g_i
/// ```
///
/// changes by exactly the deviator's payoff change under any unilateral
/// switch, so sequential strict best responses cannot cycle.
pub fn potential<T: Scalar>(scenario: &Scenario<T>, profile: &ActionProfile) -> Result<T> {
    scenario.check_profile(profile)?;
    let game = EffectiveGame::compile(scenario)?;
    Ok(potential_in(&game, profile))
}

pub(crate) fn potential_in<T: Scalar>(game: &EffectiveGame<T>, profile: &ActionProfile) -> T {
    profile
        .actions()
        .iter()
        .enumerate()
        .filter(|(_, a)| **a == Action::Expose)
        .enumerate()
        .fold(T::zero(), |phi, (m, (ward, _))| {
            phi + game.expose_advantage(ward, m)
        })
}

fn binomial_weights<T: Scalar>(trials: usize, x: T) -> Vec<T> {
    let mut coefficient = T::one();
    (0..=trials)
        .map(|j| {
            if j > 0 {
                coefficient = coefficient * T::from_count(trials + 1 - j) / T::from_count(j);
            }
            coefficient * num_traits::pow(x, j) * num_traits::pow(T::one() - x, trials - j)
        })
        .collect()
}

fn symmetric_game<T: Scalar>(scenario: &Scenario<T>) -> Result<EffectiveGame<T>> {
    let game = EffectiveGame::compile(scenario)?;
    if !game.is_symmetric() {
        return Err(Error::Domain(
            "population payoffs need identical wards; use best_response_dynamics for \
             asymmetric scenarios"
                .into(),
        ));
    }
    Ok(game)
}

fn expected_payoffs_in<T: Scalar>(game: &EffectiveGame<T>, x: T) -> (T, T) {
    let weights = binomial_weights(game.n() - 1, x);
    weights
        .iter()
        .enumerate()
        .fold((T::zero(), T::zero()), |(expose, buffer), (j, w)| {
            (
                expose + *w * game.payoff(0, Action::Expose, j),
                buffer + *w * game.payoff(0, Action::Buffer, j),
            )
        })
}

/// Expected payoffs `(u_E, u_B)` of the two strategies when each of the
/// other `N - 1` wards independently exposes with probability `x`.
pub fn expected_payoffs_by_strategy<T: Scalar>(scenario: &Scenario<T>, x: T) -> Result<(T, T)> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Domain(format!(
            "population share {x} outside [0, 1]"
        )));
    }
    let game = symmetric_game(scenario)?;
    Ok(expected_payoffs_in(&game, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    /// An endpoint where the expose advantage is exactly zero.
    Boundary,
}

impl Stability {
    pub fn name(self) -> &'static str {
        match self {
            Stability::Stable => "Stable",
            Stability::Unstable => "Unstable",
            Stability::Boundary => "Boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint<T> {
    pub x: T,
    pub stability: Stability,
}

/// Open interval `(lo, hi)` whose trajectories all end at `attractor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basin<T> {
    pub lo: T,
    pub hi: T,
    pub attractor: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicatorResult<T> {
    /// `(t, x)` pairs starting at `t = 0`.
    pub trajectory: Vec<(T, T)>,
    /// Sorted by `x`; always includes `0` and `1`.
    pub fixed_points: Vec<FixedPoint<T>>,
    pub basins: Vec<Basin<T>>,
}

impl<T: FloatScalar> ReplicatorResult<T> {
    pub fn final_x(&self) -> T {
        self.trajectory.last().expect("trajectory holds x0").1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicatorConfig<T> {
    pub t_end: T,
    pub dt: T,
}

impl<T: FloatScalar> Default for ReplicatorConfig<T> {
    fn default() -> Self {
        ReplicatorConfig {
            t_end: T::from(50.0).unwrap(),
            dt: T::from(0.01).unwrap(),
        }
    }
}

const SCAN_INTERVALS: usize = 1000;
const ROOT_TOLERANCE: f64 = 1e-12;
const ESCAPE_TOLERANCE: f64 = 1e-9;

fn advantage<T: FloatScalar>(game: &EffectiveGame<T>, x: T) -> T {
    let (expose, buffer) = expected_payoffs_in(game, x);
    expose - buffer
}

/// Interior zeros of the expose advantage, by grid scan and bisection.
fn interior_fixed_points<T: FloatScalar>(game: &EffectiveGame<T>) -> Vec<FixedPoint<T>> {
    let grid: Vec<T> = (0..=SCAN_INTERVALS)
        .map(|i| T::from_count(i) / T::from_count(SCAN_INTERVALS))
        .collect();
    let values: Vec<T> = grid.iter().map(|x| advantage(game, *x)).collect();
    let mut points = Vec::new();
    for i in 0..SCAN_INTERVALS {
        let (left, right) = (values[i], values[i + 1]);
        // Zeros landing on an interior grid node are handled from the left.
        if left == T::zero() && i > 0 {
            let before = values[i - 1];
            if before != T::zero() && right != T::zero() && before.signum() != right.signum() {
                points.push(FixedPoint {
                    x: grid[i],
                    stability: stability_from_signs(before, right),
                });
            }
            continue;
        }
        if left == T::zero() || right == T::zero() || left.signum() == right.signum() {
            continue;
        }
        let root = bisect_root(game, grid[i], grid[i + 1], left);
        points.push(FixedPoint {
            x: root,
            stability: stability_from_signs(left, right),
        });
    }
    points
}

fn stability_from_signs<T: FloatScalar>(left: T, right: T) -> Stability {
    if left > T::zero() && right < T::zero() {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

fn bisect_root<T: FloatScalar>(game: &EffectiveGame<T>, mut lo: T, mut hi: T, lo_value: T) -> T {
    let tolerance = T::from(ROOT_TOLERANCE).unwrap();
    let lo_sign = lo_value.signum();
    for _ in 0..200 {
        let mid = (lo + hi) * T::half();
        if hi - lo <= tolerance || mid <= lo || mid >= hi {
            break;
        }
        let value = advantage(game, mid);
        if value == T::zero() {
            return mid;
        }
        if value.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::half()
}

fn endpoint_stability<T: FloatScalar>(value: T, at_zero: bool) -> Stability {
    if value == T::zero() {
        Stability::Boundary
    } else if (value < T::zero()) == at_zero {
        Stability::Stable
    } else {
        Stability::Unstable
    }
}

fn basins_between<T: FloatScalar>(
    game: &EffectiveGame<T>,
    points: &[FixedPoint<T>],
) -> Vec<Basin<T>> {
    points
        .windows(2)
        .filter_map(|pair| {
            let (lo, hi) = (pair[0].x, pair[1].x);
            let flow = advantage(game, (lo + hi) * T::half());
            let attractor = if flow > T::zero() {
                hi
            } else if flow < T::zero() {
                lo
            } else {
                return None;
            };
            Some(Basin { lo, hi, attractor })
        })
        .collect()
}

pub type FixedPointsAndBasins<T> = (Vec<FixedPoint<T>>, Vec<Basin<T>>);

/// Fixed points of `dx/dt = x (1 - x) (u_E(x) - u_B(x))` with their
/// stability, plus the basin of each attractor.
pub fn replicator_fixed_points<T: FloatScalar>(
    scenario: &Scenario<T>,
) -> Result<FixedPointsAndBasins<T>> {
    let game = symmetric_game(scenario)?;
    Ok(fixed_points_in(&game))
}

fn fixed_points_in<T: FloatScalar>(game: &EffectiveGame<T>) -> FixedPointsAndBasins<T> {
    let mut points = vec![FixedPoint {
        x: T::zero(),
        stability: endpoint_stability(advantage(game, T::zero()), true),
    }];
    points.extend(interior_fixed_points(game));
    points.push(FixedPoint {
        x: T::one(),
        stability: endpoint_stability(advantage(game, T::one()), false),
    });
    let basins = basins_between(game, &points);
    (points, basins)
}

/// Integrates the replicator equation with fixed-step RK4 from `x0` to
/// `t_end`, and reports the fixed points and basins of the flow.
pub fn integrate_replicator<T: FloatScalar>(
    scenario: &Scenario<T>,
    x0: T,
    config: &ReplicatorConfig<T>,
) -> Result<ReplicatorResult<T>> {
    if !(x0 >= T::zero() && x0 <= T::one()) {
        return Err(Error::Domain(format!("x0 = {x0} outside [0, 1]")));
    }
    if !(config.dt > T::zero()) || !config.dt.is_finite() {
        return Err(Error::Domain(format!(
            "dt must be positive, got {}",
            config.dt
        )));
    }
    if !(config.t_end >= T::zero()) || !config.t_end.is_finite() {
        return Err(Error::Domain(format!(
            "t_end must be non-negative, got {}",
            config.t_end
        )));
    }
    let game = symmetric_game(scenario)?;
    let rate = |x: T| x * (T::one() - x) * advantage(&game, x);
    let escape = T::from(ESCAPE_TOLERANCE).unwrap();

    let steps = (config.t_end / config.dt).round().to_usize().unwrap_or(0);
    let mut trajectory = Vec::with_capacity(steps + 1);
    let mut x = x0;
    trajectory.push((T::zero(), x));
    let two = T::one() + T::one();
    let six = two + two + two;
    for step in 1..=steps {
        let dt = config.dt;
        let k1 = rate(x);
        let k2 = rate(x + dt * k1 / two);
        let k3 = rate(x + dt * k2 / two);
        let k4 = rate(x + dt * k3);
        let next = x + dt * (k1 + two * k2 + two * k3 + k4) / six;
        if !next.is_finite() || next < -escape || next > T::one() + escape {
            return Err(Error::Numerical(format!(
                "trajectory left [0, 1] (x = {next}) at step {step}; reduce dt"
            )));
        }
        x = next.clamp_unit();
        trajectory.push((T::from_count(step) * dt, x));
    }

    let (fixed_points, basins) = fixed_points_in(&game);
    Ok(ReplicatorResult {
        trajectory,
        fixed_points,
        basins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interventions::{Intervention, Mechanism, MechanismMode, Observability};
    use crate::model::{BenefitSpec, Ward};

    fn s0() -> Scenario<f64> {
        Scenario::symmetric(
            4,
            2.0,
            1.0,
            BenefitSpec::Linear {
                beta_per_exposer: 0.3,
            },
            vec![],
        )
        .unwrap()
    }

    fn v0() -> Scenario<f64> {
        Scenario::symmetric(
            4,
            2.0,
            1.0,
            BenefitSpec::Threshold { tau: 4, beta: 3.0 },
            vec![],
        )
        .unwrap()
    }

    fn profile(text: &str) -> ActionProfile {
        text.parse().unwrap()
    }

    #[test]
    fn s0_unravels_to_buffering() {
        let trace = best_response_dynamics(&s0(), &profile("EEEE"), &BestResponseConfig::default())
            .unwrap();
        assert_eq!(trace.terminal, Terminal::ConvergedToNash);
        assert_eq!(trace.final_profile(), &profile("BBBB"));
        assert!(trace.moves() <= 4);
        assert!(trace.steps[1..].iter().all(|s| s.payoff_delta > 0.0));
    }

    #[test]
    fn equilibrium_start_needs_no_moves() {
        let trace = best_response_dynamics(&s0(), &profile("BBBB"), &BestResponseConfig::default())
            .unwrap();
        assert_eq!(trace.terminal, Terminal::ConvergedToNash);
        assert_eq!(trace.moves(), 0);
        assert_eq!(trace.iterations, 0);
    }

    #[test]
    fn veto_with_one_holdout_unravels() {
        let trace = best_response_dynamics(&v0(), &profile("EEEB"), &BestResponseConfig::default())
            .unwrap();
        assert_eq!(trace.terminal, Terminal::ConvergedToNash);
        assert_eq!(trace.final_profile(), &profile("BBBB"));
        assert_eq!(trace.moves(), 3);
        for step in &trace.steps[1..] {
            assert_eq!(step.payoff_delta, 1.0);
        }
    }

    #[test]
    fn random_schedule_is_reproducible() {
        let config = BestResponseConfig {
            schedule: Schedule::RandomSeeded(7),
            ..BestResponseConfig::default()
        };
        let a = best_response_dynamics(&s0(), &profile("EEEE"), &config).unwrap();
        let b = best_response_dynamics(&s0(), &profile("EEEE"), &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.terminal, Terminal::ConvergedToNash);
    }

    #[test]
    fn max_iters_stops_the_run() {
        let config = BestResponseConfig {
            max_iters: 1,
            ..BestResponseConfig::default()
        };
        let trace = best_response_dynamics(&s0(), &profile("EEEE"), &config).unwrap();
        assert_eq!(trace.terminal, Terminal::MaxItersReached);
        assert_eq!(trace.iterations, 1);
        let zero = BestResponseConfig {
            max_iters: 0,
            ..BestResponseConfig::default()
        };
        assert!(best_response_dynamics(&s0(), &profile("EEEE"), &zero).is_err());
    }

    #[test]
    fn sloped_detection_still_converges() {
        let s = s0().with_interventions(vec![Intervention::Observability(Observability {
            p0: 0.0,
            p_slope: 1.0,
            penalty: 1.2,
        })]);
        let trace =
            best_response_dynamics(&s, &profile("EEBB"), &BestResponseConfig::default()).unwrap();
        assert_eq!(trace.terminal, Terminal::ConvergedToNash);
        let phi: Vec<f64> = trace
            .steps
            .iter()
            .map(|st| potential(&s, &st.profile).unwrap())
            .collect();
        assert!(phi.windows(2).all(|w| w[1] > w[0]), "{phi:?}");
    }

    #[test]
    fn tie_break_can_move_on_ties() {
        let flat = Scenario::symmetric(
            2,
            1.0,
            1.0,
            BenefitSpec::Table {
                values: vec![0.0, 0.0, 5.0],
            },
            vec![],
        )
        .unwrap();
        // From EB: ward 1 strictly prefers E (5 > 0). Ward 0 is indifferent.
        let config = BestResponseConfig {
            tie_break: TieBreak::PreferBuffer,
            ..BestResponseConfig::default()
        };
        let trace = best_response_dynamics(&flat, &profile("EB"), &config).unwrap();
        assert_eq!(trace.steps[1].mover, Some(0));
        assert_eq!(trace.steps[1].payoff_delta, 0.0);
        assert_eq!(trace.terminal, Terminal::ConvergedToNash);
    }

    #[test]
    fn potential_tracks_deviations() {
        let s = s0();
        let from = profile("EEBB");
        let to = profile("BEBB");
        let phi = |p: &ActionProfile| potential(&s, p).unwrap();
        let gain =
            crate::model::payoff(&s, &to, 0).unwrap() - crate::model::payoff(&s, &from, 0).unwrap();
        assert!((phi(&to) - phi(&from) - gain).abs() < 1e-12);
    }

    #[test]
    fn expected_payoff_examples() {
        let (u_e, u_b) = expected_payoffs_by_strategy(&v0(), 1.0).unwrap();
        assert_eq!((u_e, u_b), (1.0, -1.0));
        for x in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let (u_e, u_b) = expected_payoffs_by_strategy(&s0(), x).unwrap();
            assert!((u_e - u_b + 0.7).abs() < 1e-12, "x = {x}");
        }
        let (u_e, u_b) = expected_payoffs_by_strategy(&s0(), 0.0).unwrap();
        assert!((u_e - (0.3 - 2.0)).abs() < 1e-12);
        assert_eq!(u_b, -1.0);
    }

    #[test]
    fn expected_payoffs_need_identical_wards() {
        let wards = vec![Ward::new(0, 2.0, 1.0), Ward::new(1, 3.0, 1.0)];
        let s = Scenario::new(
            wards,
            BenefitSpec::Linear {
                beta_per_exposer: 0.3,
            },
            vec![],
        )
        .unwrap();
        assert!(matches!(
            expected_payoffs_by_strategy(&s, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(expected_payoffs_by_strategy(&s0(), 1.5).is_err());
    }

    #[test]
    fn veto_interior_fixed_point() {
        let (points, basins) = replicator_fixed_points(&v0()).unwrap();
        assert_eq!(points.len(), 3);
        let expected = (1.0f64 / 3.0).cbrt();
        assert!((points[1].x - expected).abs() < 1e-9);
        assert_eq!(points[1].stability, Stability::Unstable);
        assert_eq!(points[0].stability, Stability::Stable);
        assert_eq!(points[2].stability, Stability::Stable);
        assert_eq!(basins.len(), 2);
        assert_eq!(basins[0].attractor, 0.0);
        assert_eq!(basins[1].attractor, 1.0);
    }

    #[test]
    fn s0_flows_to_zero() {
        let result = integrate_replicator(&s0(), 0.99, &ReplicatorConfig::default()).unwrap();
        assert_eq!(result.fixed_points.len(), 2);
        assert!(result.final_x() < 1e-3);
    }

    #[test]
    fn boundary_starts_stay_put() {
        for x0 in [0.0, 1.0] {
            let result = integrate_replicator(&v0(), x0, &ReplicatorConfig::default()).unwrap();
            assert!(result.trajectory.iter().all(|(_, x)| *x == x0));
        }
    }

    #[test]
    fn mechanism_population_grows_logistically() {
        let s = s0().with_interventions(vec![Intervention::Mechanism(Mechanism::broadcast(
            1.2,
            MechanismMode::Absorb,
        ))]);
        // Constant advantage 0.1 makes the flow logistic:
        // odds(t) = odds(0) * exp(0.1 t).
        let result = integrate_replicator(&s, 0.05, &ReplicatorConfig::default()).unwrap();
        let expected = 1.0 / (1.0 + 19.0 * (-5.0f64).exp());
        assert!(
            (result.final_x() - expected).abs() < 1e-6,
            "{}",
            result.final_x()
        );
        assert!(result.trajectory.windows(2).all(|w| w[1].1 >= w[0].1));
    }

    #[test]
    fn oversized_steps_are_reported() {
        let steep = Scenario::symmetric(
            4,
            200.0,
            0.0,
            BenefitSpec::Linear {
                beta_per_exposer: 0.0,
            },
            vec![],
        )
        .unwrap();
        let config = ReplicatorConfig {
            t_end: 10.0,
            dt: 1.0,
        };
        assert!(matches!(
            integrate_replicator(&steep, 0.5, &config),
            Err(Error::Numerical(_))
        ));
    }
}
