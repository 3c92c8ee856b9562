//! Pure-strategy equilibrium analysis.
//!
//! Nash profiles are found by exhaustive search over all `2^N` profiles, or,
//! when every ward faces the same payoff function, by checking one profile per
//! exposer count and expanding it to every arrangement of that count. Both
//! routes return identical results; the brute-force one stays public so the
//! two can be compared.
//!
//! Payoff comparisons use an optional tolerance `epsilon` (default zero):
//! a deviation is profitable when it gains more than `epsilon`, and an action
//! is a best response when it is within `epsilon` of the best.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interventions::{EffectiveGame, Intervention};
use crate::model::{Action, ActionProfile, Scenario};
use crate::parallel::with_pool;
use crate::scalar::Scalar;

/// Largest ward count searched exhaustively when the fast path does not apply.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;

const CHUNK_BITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions<T> {
    pub epsilon: T,
    pub brute_force_cap: usize,
    /// Worker threads for the profile search; `0` lets rayon decide.
    pub threads: usize,
}

impl<T: Scalar> Default for AnalysisOptions<T> {
    fn default() -> Self {
        AnalysisOptions {
            epsilon: T::zero(),
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
            threads: 0,
        }
    }
}

impl<T: Scalar> AnalysisOptions<T> {
    pub fn with_epsilon(epsilon: T) -> Self {
        AnalysisOptions {
            epsilon,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NashProfile {
    pub profile: ActionProfile,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Buffering strictly dominates for every ward.
    DominantBuffer,
    /// Exposing strictly dominates for every ward.
    DominantExpose,
    /// Both uniform profiles are strict equilibria: a coordination game.
    Bistable,
    Other,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::DominantBuffer => "DominantBuffer",
            Classification::DominantExpose => "DominantExpose",
            Classification::Bistable => "Bistable",
            Classification::Other => "Other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMethod {
    BruteForce,
    SymmetricFastPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WelfarePoint<T> {
    pub profile: ActionProfile,
    pub welfare: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport<T> {
    /// Sorted by profile.
    pub nash_profiles: Vec<NashProfile>,
    /// Strictly dominant action per ward, if any.
    pub dominant_strategy: Vec<Option<Action>>,
    /// Welfare-maximising profile; ties go to the smallest profile.
    pub welfare_optimum: WelfarePoint<T>,
    /// Best-Nash welfare, `None` when no pure equilibrium exists.
    pub best_nash_welfare: Option<T>,
    /// Optimal welfare minus best-Nash welfare.
    pub welfare_gap: Option<T>,
    pub classification: Classification,
    pub method: EnumerationMethod,
}

impl<T: Scalar> EquilibriumReport<T> {
    pub fn contains(&self, profile: &ActionProfile) -> bool {
        self.nash_profiles.iter().any(|p| &p.profile == profile)
    }

    pub fn profiles(&self) -> Vec<ActionProfile> {
        self.nash_profiles
            .iter()
            .map(|p| p.profile.clone())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashCheck {
    pub is_nash: bool,
    /// Wards with a strictly profitable unilateral deviation.
    pub violating_wards: Vec<usize>,
    /// Every unilateral deviation strictly loses.
    pub strict: bool,
}

/// Outcome of comparing a ward's current action with its deviation.
#[derive(Debug, Clone, Copy)]
struct DeviationCheck {
    profitable: bool,
    strictly_worse: bool,
}

fn check_deviation<T: Scalar>(current: T, deviation: T, epsilon: T) -> DeviationCheck {
    DeviationCheck {
        profitable: deviation > current + epsilon,
        strictly_worse: deviation < current - epsilon,
    }
}

fn ward_deviation<T: Scalar>(
    game: &EffectiveGame<T>,
    ward: usize,
    own: Action,
    k_others: usize,
    epsilon: T,
) -> DeviationCheck {
    check_deviation(
        game.payoff(ward, own, k_others),
        game.payoff(ward, own.other(), k_others),
        epsilon,
    )
}

/// Actions maximising `ward`'s payoff against the rest of `profile` (the
/// ward's own entry is ignored). Both actions are returned on a tie.
pub fn best_response<T: Scalar>(
    scenario: &Scenario<T>,
    profile: &ActionProfile,
    ward: usize,
    epsilon: T,
) -> Result<Vec<Action>> {
    scenario.check_profile(profile)?;
    scenario.check_ward(ward)?;
    let game = EffectiveGame::compile(scenario)?;
    Ok(best_response_in(
        &game,
        ward,
        profile.exposers_excluding(ward),
        epsilon,
    ))
}

pub(crate) fn best_response_in<T: Scalar>(
    game: &EffectiveGame<T>,
    ward: usize,
    k_others: usize,
    epsilon: T,
) -> Vec<Action> {
    let expose = game.payoff(ward, Action::Expose, k_others);
    let buffer = game.payoff(ward, Action::Buffer, k_others);
    Action::ALL
        .into_iter()
        .filter(|action| {
            let (mine, theirs) = match action {
                Action::Expose => (expose, buffer),
                Action::Buffer => (buffer, expose),
            };
            mine >= theirs - epsilon
        })
        .collect()
}

pub fn is_nash<T: Scalar>(
    scenario: &Scenario<T>,
    profile: &ActionProfile,
    epsilon: T,
) -> Result<NashCheck> {
    scenario.check_profile(profile)?;
    let game = EffectiveGame::compile(scenario)?;
    Ok(is_nash_in(&game, profile, epsilon))
}

pub(crate) fn is_nash_in<T: Scalar>(
    game: &EffectiveGame<T>,
    profile: &ActionProfile,
    epsilon: T,
) -> NashCheck {
    let mut violating_wards = Vec::new();
    let mut strict = true;
    for ward in 0..game.n() {
        let check = ward_deviation(
            game,
            ward,
            profile.action(ward),
            profile.exposers_excluding(ward),
            epsilon,
        );
        if check.profitable {
            violating_wards.push(ward);
        }
        strict &= check.strictly_worse;
    }
    let is_nash = violating_wards.is_empty();
    NashCheck {
        is_nash,
        violating_wards,
        strict: is_nash && strict,
    }
}

fn dominant_strategies<T: Scalar>(game: &EffectiveGame<T>, epsilon: T) -> Vec<Option<Action>> {
    (0..game.n())
        .map(|ward| {
            Action::ALL.into_iter().find(|&action| {
                (0..game.n()).all(|k_others| {
                    game.payoff(ward, action, k_others)
                        > game.payoff(ward, action.other(), k_others) + epsilon
                })
            })
        })
        .collect()
}

fn classify<T: Scalar>(
    game: &EffectiveGame<T>,
    dominant: &[Option<Action>],
    epsilon: T,
) -> Classification {
    let n = game.n();
    if dominant.iter().all(|d| *d == Some(Action::Buffer)) {
        return Classification::DominantBuffer;
    }
    if dominant.iter().all(|d| *d == Some(Action::Expose)) {
        return Classification::DominantExpose;
    }
    let strict_pole = |action| is_nash_in(game, &ActionProfile::uniform(n, action), epsilon).strict;
    if strict_pole(Action::Buffer) && strict_pole(Action::Expose) {
        Classification::Bistable
    } else {
        Classification::Other
    }
}

/// `a` precedes `b` in profile order (first differing ward exposes in `a`).
fn mask_precedes(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a >> diff.trailing_zeros() & 1 == 1
}

struct Candidate<T> {
    mask: u64,
    welfare: T,
}

impl<T: Scalar> Candidate<T> {
    fn better_than(&self, other: &Candidate<T>) -> bool {
        self.welfare > other.welfare
            || (self.welfare == other.welfare && mask_precedes(self.mask, other.mask))
    }
}

fn keep_better<T: Scalar>(best: Option<Candidate<T>>, next: Candidate<T>) -> Option<Candidate<T>> {
    match best {
        Some(current) if !next.better_than(&current) => Some(current),
        _ => Some(next),
    }
}

struct ChunkResult<T> {
    nash: Vec<(u64, bool, T)>,
    optimum: Option<Candidate<T>>,
}

fn scan_chunk<T: Scalar>(
    game: &EffectiveGame<T>,
    start: u64,
    end: u64,
    epsilon: T,
) -> ChunkResult<T> {
    let n = game.n();
    let mut nash = Vec::new();
    let mut optimum = None;
    for mask in start..end {
        let k = mask.count_ones() as usize;
        let mut stable = true;
        let mut strict = true;
        for ward in 0..n {
            let exposes = mask >> ward & 1 == 1;
            let (own, k_others) = if exposes {
                (Action::Expose, k - 1)
            } else {
                (Action::Buffer, k)
            };
            let check = ward_deviation(game, ward, own, k_others, epsilon);
            if check.profitable {
                stable = false;
                break;
            }
            strict &= check.strictly_worse;
        }
        let welfare = game.welfare_of_mask(mask);
        if stable {
            nash.push((mask, strict, welfare));
        }
        optimum = keep_better(optimum, Candidate { mask, welfare });
    }
    ChunkResult { nash, optimum }
}

/// Equilibrium report by exhaustive search over every profile.
pub fn enumerate_nash_brute_force<T: Scalar>(
    scenario: &Scenario<T>,
    options: &AnalysisOptions<T>,
) -> Result<EquilibriumReport<T>> {
    let game = EffectiveGame::compile(scenario)?;
    check_brute_force_size(game.n(), options)?;
    with_pool(options.threads, || brute_force_in(&game, options.epsilon))
}

fn check_brute_force_size<T: Scalar>(n: usize, options: &AnalysisOptions<T>) -> Result<()> {
    if n > options.brute_force_cap || n > 62 {
        return Err(Error::Resource(format!(
            "{n} wards exceed the exhaustive-search cap of {}; the wards are not identical, \
             so use flip_conditions for per-ward analysis instead",
            options.brute_force_cap.min(62)
        )));
    }
    Ok(())
}

fn brute_force_in<T: Scalar>(game: &EffectiveGame<T>, epsilon: T) -> EquilibriumReport<T> {
    let n = game.n();
    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n as u32);
    let chunks: Vec<ChunkResult<T>> = (0..total / chunk)
        .into_par_iter()
        .map(|c| scan_chunk(game, c * chunk, (c + 1) * chunk, epsilon))
        .collect();

    let mut nash = Vec::new();
    let mut optimum: Option<Candidate<T>> = None;
    for result in chunks {
        nash.extend(result.nash);
        if let Some(candidate) = result.optimum {
            optimum = keep_better(optimum, candidate);
        }
    }
    let optimum = optimum.expect("at least one profile");
    let best_nash_welfare = nash.iter().map(|(_, _, w)| *w).reduce(max_scalar);
    let mut nash_profiles: Vec<NashProfile> = nash
        .into_iter()
        .map(|(mask, strict, _)| NashProfile {
            profile: ActionProfile::from_exposer_mask(n, mask),
            strict,
        })
        .collect();
    nash_profiles.sort();
    finish_report(
        game,
        nash_profiles,
        WelfarePoint {
            profile: ActionProfile::from_exposer_mask(n, optimum.mask),
            welfare: optimum.welfare,
        },
        best_nash_welfare,
        epsilon,
        EnumerationMethod::BruteForce,
    )
}

fn max_scalar<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

fn finish_report<T: Scalar>(
    game: &EffectiveGame<T>,
    nash_profiles: Vec<NashProfile>,
    welfare_optimum: WelfarePoint<T>,
    best_nash_welfare: Option<T>,
    epsilon: T,
    method: EnumerationMethod,
) -> EquilibriumReport<T> {
    let dominant_strategy = dominant_strategies(game, epsilon);
    let classification = classify(game, &dominant_strategy, epsilon);
    let welfare_gap = best_nash_welfare.map(|best| welfare_optimum.welfare - best);
    EquilibriumReport {
        nash_profiles,
        dominant_strategy,
        welfare_optimum,
        best_nash_welfare,
        welfare_gap,
        classification,
        method,
    }
}

/// Calls `visit` with every `n`-bit mask that has exactly `k` bits set, in
/// increasing numeric order.
fn for_each_mask_with_count(n: usize, k: usize, mut visit: impl FnMut(u64)) {
    if k == 0 {
        visit(0);
        return;
    }
    let limit = 1u64 << n;
    let mut mask = (1u64 << k) - 1;
    while mask < limit {
        visit(mask);
        // Gosper's hack: next larger integer with the same popcount.
        let lowest = mask & mask.wrapping_neg();
        let ripple = mask + lowest;
        mask = (((ripple ^ mask) >> 2) / lowest) | ripple;
    }
}

fn symmetric_in<T: Scalar>(game: &EffectiveGame<T>, epsilon: T) -> EquilibriumReport<T> {
    let n = game.n();
    let mut nash_profiles = Vec::new();
    let mut best_nash_welfare: Option<T> = None;
    let mut optimum: Option<WelfarePoint<T>> = None;
    for k in 0..=n {
        let exposers = (k > 0).then(|| ward_deviation(game, 0, Action::Expose, k - 1, epsilon));
        let buffers = (k < n).then(|| ward_deviation(game, 0, Action::Buffer, k, epsilon));
        let checks: Vec<DeviationCheck> = exposers.into_iter().chain(buffers).collect();
        let welfare = game.welfare_of_count(k);
        let representative = ActionProfile::from_exposer_mask(n, (1u64 << k) - 1);
        let replace = match &optimum {
            None => true,
            Some(best) => {
                welfare > best.welfare || (welfare == best.welfare && representative < best.profile)
            }
        };
        if replace {
            optimum = Some(WelfarePoint {
                profile: representative,
                welfare,
            });
        }
        if checks.iter().any(|c| c.profitable) {
            continue;
        }
        let strict = checks.iter().all(|c| c.strictly_worse);
        best_nash_welfare = Some(best_nash_welfare.map_or(welfare, |b| max_scalar(b, welfare)));
        for_each_mask_with_count(n, k, |mask| {
            nash_profiles.push(NashProfile {
                profile: ActionProfile::from_exposer_mask(n, mask),
                strict,
            })
        });
    }
    nash_profiles.sort();
    finish_report(
        game,
        nash_profiles,
        optimum.expect("k ranges over at least one value"),
        best_nash_welfare,
        epsilon,
        EnumerationMethod::SymmetricFastPath,
    )
}

/// Equilibrium report for the scenario. Identical wards take the
/// per-exposer-count fast path; otherwise every profile is searched.
pub fn enumerate_nash<T: Scalar>(
    scenario: &Scenario<T>,
    options: &AnalysisOptions<T>,
) -> Result<EquilibriumReport<T>> {
    let game = EffectiveGame::compile(scenario)?;
    enumerate_compiled(&game, options)
}

pub(crate) fn enumerate_compiled<T: Scalar>(
    game: &EffectiveGame<T>,
    options: &AnalysisOptions<T>,
) -> Result<EquilibriumReport<T>> {
    if game.is_symmetric() && game.n() <= 62 {
        return Ok(symmetric_in(game, options.epsilon));
    }
    check_brute_force_size(game.n(), options)?;
    with_pool(options.threads, || brute_force_in(game, options.epsilon))
}

/// Expose advantage `u(Expose) - u(Buffer)` at one opposing profile, with
/// whether the inequality tested there holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipMargin<T> {
    pub margin: T,
    pub holds: bool,
}

/// Per-ward best-response comparisons against uniform opposing profiles.
///
/// The archetype entries evaluate the baseline game with only that
/// archetype's interventions applied, so each shows its own effect. All
/// margins are expose advantages: positive means exposing pays more.
#[derive(Debug, Clone, PartialEq)]
pub struct WardFlip<T> {
    pub ward: usize,
    /// No interventions, others buffering. Holds when buffering is strictly
    /// better.
    pub baseline: FlipMargin<T>,
    /// Effort reductions only, others buffering. Holds when buffering is
    /// still a best response.
    pub effort: Option<FlipMargin<T>>,
    /// Observability only, others buffering. Holds when buffering is still a
    /// best response.
    pub observability: Option<FlipMargin<T>>,
    /// Mechanisms only, others buffering. Holds when exposing is a best
    /// response.
    pub mechanism: Option<FlipMargin<T>>,
    /// All interventions, others buffering. Holds when buffering is a best
    /// response, i.e. this ward keeps all-Buffer an equilibrium.
    pub against_buffering: FlipMargin<T>,
    /// All interventions, others exposing. Holds when exposing is a best
    /// response, i.e. this ward keeps all-Expose an equilibrium.
    pub cooperative: FlipMargin<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlipReport<T> {
    pub wards: Vec<WardFlip<T>>,
    /// Wards for which exposing is not a best response when all others
    /// expose.
    pub blocking_wards: Vec<usize>,
}

impl<T: Scalar> FlipReport<T> {
    /// Every ward keeps all-Buffer an equilibrium.
    pub fn all_buffer_is_nash(&self) -> bool {
        self.wards.iter().all(|w| w.against_buffering.holds)
    }

    pub fn all_expose_is_nash(&self) -> bool {
        self.blocking_wards.is_empty()
    }
}

fn subset<T: Scalar>(
    scenario: &Scenario<T>,
    keep: impl Fn(&Intervention<T>) -> bool,
) -> Option<Scenario<T>> {
    let selected: Vec<_> = scenario
        .interventions()
        .iter()
        .filter(|i| keep(i))
        .cloned()
        .collect();
    (!selected.is_empty()).then(|| scenario.with_interventions(selected))
}

pub fn flip_conditions<T: Scalar>(scenario: &Scenario<T>, epsilon: T) -> Result<FlipReport<T>> {
    let n = scenario.n();
    let compile = |s: Option<Scenario<T>>| s.map(|s| EffectiveGame::compile(&s)).transpose();
    let baseline = EffectiveGame::compile(&scenario.baseline())?;
    let effort = compile(subset(scenario, |i| {
        matches!(i, Intervention::EffortReduction(_))
    }))?;
    let observability = compile(subset(scenario, |i| {
        matches!(i, Intervention::Observability(_))
    }))?;
    let mechanism = compile(subset(scenario, |i| {
        matches!(i, Intervention::Mechanism(_))
    }))?;
    let full = EffectiveGame::compile(scenario)?;

    let buffer_still_best = |margin: T| FlipMargin {
        margin,
        holds: margin <= epsilon,
    };
    let expose_best = |margin: T| FlipMargin {
        margin,
        holds: margin >= -epsilon,
    };

    let wards: Vec<WardFlip<T>> = (0..n)
        .map(|ward| {
            let baseline_margin = baseline.expose_advantage(ward, 0);
            WardFlip {
                ward,
                baseline: FlipMargin {
                    margin: baseline_margin,
                    holds: baseline_margin < -epsilon,
                },
                effort: effort
                    .as_ref()
                    .map(|g| buffer_still_best(g.expose_advantage(ward, 0))),
                observability: observability
                    .as_ref()
                    .map(|g| buffer_still_best(g.expose_advantage(ward, 0))),
                mechanism: mechanism
                    .as_ref()
                    .map(|g| expose_best(g.expose_advantage(ward, 0))),
                against_buffering: buffer_still_best(full.expose_advantage(ward, 0)),
                cooperative: expose_best(full.expose_advantage(ward, n - 1)),
            }
        })
        .collect();
    let blocking_wards = wards
        .iter()
        .filter(|w| !w.cooperative.holds)
        .map(|w| w.ward)
        .collect();
    Ok(FlipReport {
        wards,
        blocking_wards,
    })
}
