//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wardgames::dynamics::Stability;
use wardgames::equilibrium::{EnumerationMethod, NashProfile};
use wardgames::scenario_file::BenefitFile;
use wardgames::{
    critical_threshold, enumerate_nash, enumerate_nash_brute_force, flip_conditions,
    integrate_replicator, is_nash, replicator_fixed_points, ActionProfile, AnalysisOptions,
    BenefitSpec, Classification, EffortReduction, Exact, Intervention, Mechanism, MechanismMode,
    Observability, ParamPath, Predicate, ReplicatorConfig, Scalar, Scenario, ScenarioFile, Ward,
};

/// Absolute tolerance for bisected thresholds and the replicator root.
const THRESHOLD_TOL: f64 = 1e-6;
/// Endpoint tolerance for replicator trajectories at t = 50.
const ENDPOINT_TOL: f64 = 1e-3;
const PERF_BUDGET_SECS: f64 = 5.0;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn q(v: f64) -> Exact {
    Exact::from_f64_checked(v).expect("short decimal")
}

fn lift<T: Scalar>(v: f64) -> T {
    T::from_f64_checked(v).expect("representable")
}

fn s0<T: Scalar>(interventions: Vec<Intervention<T>>) -> Scenario<T> {
    Scenario::symmetric(
        4,
        lift(2.0),
        lift(1.0),
        BenefitSpec::Linear {
            beta_per_exposer: lift(0.3),
        },
        interventions,
    )
    .unwrap()
}

fn v0<T: Scalar>() -> Scenario<T> {
    Scenario::symmetric(
        4,
        lift(2.0),
        lift(1.0),
        BenefitSpec::Threshold {
            tau: 4,
            beta: lift(3.0),
        },
        vec![],
    )
    .unwrap()
}

fn profile(text: &str) -> ActionProfile {
    text.parse().unwrap()
}

fn strict(text: &str) -> NashProfile {
    NashProfile {
        profile: profile(text),
        strict: true,
    }
}

fn criterion_1() -> Outcome {
    let report = enumerate_nash(&s0::<Exact>(vec![]), &AnalysisOptions::default())
        .map_err(|e| e.to_string())?;
    ensure!(
        report.nash_profiles == vec![strict("BBBB")],
        "nash set {:?}",
        report.nash_profiles
    );
    ensure!(
        report.welfare_optimum.profile == profile("EEEE"),
        "optimum {}",
        report.welfare_optimum.profile
    );
    ensure!(
        report.welfare_optimum.welfare == q(-3.2),
        "optimum welfare {}",
        report.welfare_optimum.welfare
    );
    ensure!(
        report.best_nash_welfare == Some(q(-4.0)),
        "nash welfare {:?}",
        report.best_nash_welfare
    );
    ensure!(
        report.welfare_gap == Some(q(0.8)),
        "gap {:?}",
        report.welfare_gap
    );
    Ok("Nash = {BBBB strict}, optimum EEEE at -3.2 vs -4, gap exactly 4/5".into())
}

fn decimal(rng: &mut ChaCha8Rng, max_tenths: u32) -> Exact {
    Exact::new(rng.gen_range(0..=max_tenths) as i128, 10)
}

fn random_benefit(rng: &mut ChaCha8Rng, n: usize) -> BenefitSpec<Exact> {
    match rng.gen_range(0..4) {
        0 => BenefitSpec::Linear {
            beta_per_exposer: decimal(rng, 15),
        },
        1 => BenefitSpec::Threshold {
            tau: rng.gen_range(1..=n),
            beta: decimal(rng, 50),
        },
        2 => BenefitSpec::Concave {
            beta: decimal(rng, 40),
            gamma: Exact::from_integer(1),
        },
        _ => BenefitSpec::Table {
            values: (0..=n).map(|_| decimal(rng, 50)).collect(),
        },
    }
}

fn random_extra(rng: &mut ChaCha8Rng) -> Vec<Intervention<Exact>> {
    match rng.gen_range(0..4) {
        0 => vec![Intervention::Observability(Observability {
            p0: decimal(rng, 6),
            p_slope: decimal(rng, 4),
            penalty: decimal(rng, 30),
        })],
        1 => vec![Intervention::Mechanism(Mechanism::broadcast(
            decimal(rng, 25),
            if rng.gen_bool(0.5) {
                MechanismMode::Absorb
            } else {
                MechanismMode::Redistribute
            },
        ))],
        _ => vec![],
    }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let deltas: Vec<Exact> = (1..=20).map(|i| Exact::new(i, 10)).collect();
    let options = AnalysisOptions::default();
    let mut asymmetric = 0;
    for case in 0..100 {
        let n = rng.gen_range(2..=8);
        let symmetric = case % 2 == 0;
        let (ce, cb) = (decimal(&mut rng, 40), decimal(&mut rng, 30));
        let wards = (0..n)
            .map(|i| {
                if symmetric {
                    Ward::new(i, ce, cb)
                } else {
                    Ward::new(i, decimal(&mut rng, 40), decimal(&mut rng, 30))
                }
            })
            .collect();
        let benefit = random_benefit(&mut rng, n);
        let extra = random_extra(&mut rng);
        let base = Scenario::new(wards, benefit, extra).map_err(|e| e.to_string())?;
        asymmetric += usize::from(!base.has_identical_wards());
        let before = enumerate_nash(&base, &options).map_err(|e| e.to_string())?;
        for delta in &deltas {
            let mut interventions = base.interventions().to_vec();
            interventions.push(Intervention::EffortReduction(EffortReduction {
                delta_expose: *delta,
                delta_buffer: *delta,
            }));
            let after = enumerate_nash(&base.with_interventions(interventions), &options)
                .map_err(|e| e.to_string())?;
            ensure!(
                after.nash_profiles == before.nash_profiles
                    && after.dominant_strategy == before.dominant_strategy
                    && after.classification == before.classification,
                "case {case} (n = {n}) changed under uniform delta {delta}"
            );
        }
    }
    Ok(format!("100 scenarios ({asymmetric} asymmetric) x 20 deltas, Nash set, dominance and class unchanged"))
}

fn threshold_on<T: Scalar>(
    scenario: &Scenario<T>,
    path: &str,
    lo: f64,
    hi: f64,
    predicate: Predicate,
) -> Result<T, String> {
    let path: ParamPath = path.parse().map_err(|e: wardgames::Error| e.to_string())?;
    critical_threshold(scenario, &path, lift(lo), lift(hi), predicate, T::zero())
        .map(|r| r.critical_value)
        .map_err(|e| e.to_string())
}

fn criterion_3() -> Outcome {
    let scenario = s0(vec![Intervention::EffortReduction(EffortReduction {
        delta_expose: 0.0,
        delta_buffer: 0.0,
    })]);
    let critical = threshold_on(
        &scenario,
        "interventions[0].delta_expose",
        0.0,
        1.0,
        Predicate::AllBufferNotNash,
    )?;
    ensure!(
        (critical - 0.7f64).abs() <= THRESHOLD_TOL,
        "critical delta_expose {critical}"
    );
    Ok(format!("critical delta_expose = {critical}"))
}

fn unique_nash(scenario: &Scenario<f64>) -> Result<Vec<ActionProfile>, String> {
    Ok(enumerate_nash(scenario, &AnalysisOptions::default())
        .map_err(|e| e.to_string())?
        .profiles())
}

fn criterion_4() -> Outcome {
    let observability = |penalty: f64| {
        s0(vec![Intervention::Observability(Observability {
            p0: 0.5,
            p_slope: 0.0,
            penalty,
        })])
    };
    let critical = threshold_on(
        &observability(1.0),
        "interventions[0].penalty",
        0.0,
        5.0,
        Predicate::AllBufferNotNash,
    )?;
    let (ce, cb, b1, b0, p) = (2.0f64, 1.0, 0.3, 0.0, 0.5);
    let closed_form = (ce - cb - (b1 - b0)) / p;
    ensure!(
        (critical - 1.4f64).abs() <= THRESHOLD_TOL,
        "critical penalty {critical}"
    );
    ensure!(
        (critical - closed_form).abs() <= THRESHOLD_TOL,
        "closed form {closed_form} vs {critical}"
    );
    let high = unique_nash(&observability(2.0))?;
    ensure!(high == vec![profile("EEEE")], "F = 2: {high:?}");
    let low = unique_nash(&observability(1.0))?;
    ensure!(low == vec![profile("BBBB")], "F = 1: {low:?}");
    Ok(format!(
        "critical F = {critical} (closed form {closed_form}); F=2 -> EEEE, F=1 -> BBBB"
    ))
}

fn criterion_5() -> Outcome {
    let scenario = s0(vec![Intervention::Mechanism(Mechanism::broadcast(
        1.2,
        MechanismMode::Absorb,
    ))]);
    let nash = unique_nash(&scenario)?;
    ensure!(nash == vec![profile("EEEE")], "nash set {nash:?}");
    let critical = threshold_on(
        &scenario,
        "interventions[0].capped_cost_expose",
        0.0,
        2.0,
        Predicate::AllExposeNash,
    )?;
    let closed_form = 1.0 + 0.3;
    ensure!(
        (critical - closed_form).abs() <= THRESHOLD_TOL,
        "critical cap {critical}"
    );
    Ok(format!("Nash = {{EEEE}}, critical cap = {critical}"))
}

fn criterion_6() -> Outcome {
    let wards: Vec<Ward<f64>> = [2.0, 2.0, 2.0, 5.0]
        .iter()
        .enumerate()
        .map(|(i, ce)| Ward::new(i, *ce, 1.0))
        .collect();
    let benefit = BenefitSpec::Linear {
        beta_per_exposer: 0.3,
    };
    let per_ward = Scenario::new(
        wards.clone(),
        benefit.clone(),
        vec![Intervention::Mechanism(Mechanism::per_ward(
            vec![1.2, 1.2, 1.2, 5.0],
            MechanismMode::Absorb,
        ))],
    )
    .map_err(|e| e.to_string())?;
    let flip = flip_conditions(&per_ward, 0.0).map_err(|e| e.to_string())?;
    ensure!(
        flip.blocking_wards == vec![3],
        "blocking {:?}",
        flip.blocking_wards
    );
    let check = is_nash(&per_ward, &profile("EEEE"), 0.0).map_err(|e| e.to_string())?;
    ensure!(!check.is_nash, "all-Expose is Nash with per-ward caps");
    let broadcast = Scenario::new(
        wards,
        benefit,
        vec![Intervention::Mechanism(Mechanism::broadcast(
            1.2,
            MechanismMode::Absorb,
        ))],
    )
    .map_err(|e| e.to_string())?;
    let flip = flip_conditions(&broadcast, 0.0).map_err(|e| e.to_string())?;
    ensure!(
        flip.blocking_wards.is_empty(),
        "broadcast blocking {:?}",
        flip.blocking_wards
    );
    Ok("per-ward caps block at {3}; broadcast cap clears blocking".into())
}

fn criterion_7() -> Outcome {
    let report =
        enumerate_nash(&v0::<Exact>(), &AnalysisOptions::default()).map_err(|e| e.to_string())?;
    let mut expected = vec![strict("BBBB"), strict("EEEE")];
    expected.sort_by(|a, b| a.profile.cmp(&b.profile));
    ensure!(
        report.nash_profiles == expected,
        "nash set {:?}",
        report.nash_profiles
    );
    ensure!(
        report.classification == Classification::Bistable,
        "class {:?}",
        report.classification
    );
    Ok("Nash = {BBBB, EEEE} both strict, Bistable".into())
}

fn criterion_8() -> Outcome {
    let scenario = v0::<f64>();
    let (points, _) = replicator_fixed_points(&scenario).map_err(|e| e.to_string())?;
    let interior: Vec<_> = points.iter().filter(|p| p.x > 0.0 && p.x < 1.0).collect();
    ensure!(interior.len() == 1, "interior fixed points {interior:?}");
    let root = (1.0f64 / 3.0).powf(1.0 / 3.0);
    ensure!(
        (interior[0].x - root).abs() <= THRESHOLD_TOL,
        "fixed point {} vs {root}",
        interior[0].x
    );
    ensure!(
        interior[0].stability == Stability::Unstable,
        "stability {:?}",
        interior[0].stability
    );
    let config = ReplicatorConfig {
        t_end: 50.0,
        dt: 0.01,
    };
    let below = integrate_replicator(&scenario, 0.68, &config)
        .map_err(|e| e.to_string())?
        .final_x();
    let above = integrate_replicator(&scenario, 0.70, &config)
        .map_err(|e| e.to_string())?
        .final_x();
    ensure!(below < ENDPOINT_TOL, "x0 = 0.68 ends at {below}");
    ensure!(above > 1.0 - ENDPOINT_TOL, "x0 = 0.70 ends at {above}");
    Ok(format!(
        "x* = {} (Unstable); 0.68 -> {below:e}, 0.70 -> {above}",
        interior[0].x
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut largest = 0;
    let mut floats = 0;
    for case in 0..200 {
        let n = rng.gen_range(2..=12);
        largest = largest.max(n);
        let mut interventions = random_extra(&mut rng);
        if rng.gen_bool(0.5) {
            interventions.push(Intervention::EffortReduction(EffortReduction {
                delta_expose: decimal(&mut rng, 10),
                delta_buffer: decimal(&mut rng, 10),
            }));
        }
        let scenario = Scenario::symmetric(
            n,
            decimal(&mut rng, 40),
            decimal(&mut rng, 30),
            random_benefit(&mut rng, n),
            interventions,
        )
        .map_err(|e| e.to_string())?;
        if case % 4 == 3 {
            // Irrational concave exponents need floating point.
            let mut file = ScenarioFile::from_scenario(&scenario, Default::default());
            file.benefit = BenefitFile::Concave {
                beta: rng.gen_range(0.0..4.0),
                gamma: rng.gen_range(0.05..=1.0),
            };
            let scenario = file.to_scenario::<f64>().map_err(|e| e.to_string())?;
            same_nash_sets(&scenario, case)?;
            floats += 1;
        } else {
            same_nash_sets(&scenario, case)?;
        }
    }
    Ok(format!(
        "200 symmetric scenarios ({floats} in f64) up to N = {largest}, identical Nash sets"
    ))
}

fn same_nash_sets<T: Scalar>(scenario: &Scenario<T>, case: usize) -> Result<(), String> {
    let options = AnalysisOptions::default();
    let fast = enumerate_nash(scenario, &options).map_err(|e| e.to_string())?;
    let brute = enumerate_nash_brute_force(scenario, &options).map_err(|e| e.to_string())?;
    ensure!(
        fast.method == EnumerationMethod::SymmetricFastPath,
        "case {case} skipped the fast path"
    );
    ensure!(
        fast.nash_profiles == brute.nash_profiles,
        "case {case} (n = {}) Nash sets differ",
        scenario.n()
    );
    Ok(())
}

const N16: &str = r#"{
  "n_wards": 16,
  "wards": {"symmetric": {"cost_expose": 2.0, "cost_buffer": 1.0}},
  "benefit": {"kind": "threshold", "tau": 12, "beta": 1.5},
  "interventions": [
    {"kind": "observability", "p0": 0.2, "p_slope": 0.3, "penalty": 1.1},
    {"kind": "effort", "delta_expose": 0.25}
  ]
}"#;

fn analyze_with_threads(
    scenario: &Path,
    threads: usize,
    out: &Path,
) -> Result<(Vec<u8>, Vec<u8>, f64), String> {
    let start = Instant::now();
    let output = Command::new(env!("CARGO_BIN_EXE_wardgames"))
        .args(["--threads", &threads.to_string(), "analyze"])
        .arg(scenario)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    ensure!(
        output.status.success(),
        "analyze failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let json = std::fs::read(out).map_err(|e| e.to_string())?;
    Ok((output.stdout, json, elapsed))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scenario = dir.path().join("n16.json");
    std::fs::write(&scenario, N16).map_err(|e| e.to_string())?;
    let (stdout_1, json_1, secs) = analyze_with_threads(&scenario, 1, &dir.path().join("t1.json"))?;
    ensure!(
        secs < PERF_BUDGET_SECS,
        "single-threaded analyze took {secs:.3} s"
    );
    for threads in [2, 8] {
        let (stdout_n, json_n, _) = analyze_with_threads(
            &scenario,
            threads,
            &dir.path().join(format!("t{threads}.json")),
        )?;
        ensure!(
            stdout_n == stdout_1,
            "stdout differs with {threads} workers"
        );
        ensure!(
            json_n == json_1,
            "JSON report differs with {threads} workers"
        );
    }
    Ok(format!(
        "N = 16 single-threaded in {secs:.3} s; identical output for 1, 2, 8 workers"
    ))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("baseline wedge", criterion_1),
        ("effort-reduction invariance", criterion_2),
        ("effort-reduction flip", criterion_3),
        ("observability threshold", criterion_4),
        ("mechanism flip", criterion_5),
        ("per-ward blocking", criterion_6),
        ("veto game", criterion_7),
        ("replicator fixed point", criterion_8),
        ("fast path vs brute force", criterion_9),
        ("determinism and performance", criterion_10),
    ];
    let mut failures = 0;
    for (index, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {name}: {detail}", index + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {:>2} {name}: {detail}", index + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
