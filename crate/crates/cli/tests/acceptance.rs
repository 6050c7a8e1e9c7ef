//! Acceptance suite. Runs every criterion at its stated tolerance, prints
//! one `PASS`/`FAIL` line per criterion and exits nonzero if any failed.
//!
//! `cargo test -p spinmarket-cli --test acceptance`

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spinmarket::pricing::log_returns;
use spinmarket::statistics::{
    abs_series, autocorrelation, fit_decay, kurtosis_standard_error, summary, DecayModel,
};
use spinmarket::{run_simulation, ModelParams, Series, Simulation, Spin, ThresholdMode};

/// Seeds of the long reference runs.
const SEED_LAMBDA_10: u64 = 1;
const SEED_LAMBDA_0: u64 = 1;
const SEED_LAMBDA_15: u64 = 1;
const SEED_CONTROL: u64 = 1000;

/// Reference excess kurtosis of `r_1`, pinned per seed from the first verified run.
const PINNED_KURTOSIS_LAMBDA_10: f64 = 1.9424762218054719;
const PINNED_KURTOSIS_LAMBDA_0: f64 = 30.232911124896887;
const PINNED_KURTOSIS_CONTROL: f64 = -0.024362433074890166;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn reference(lambda: f64, measurement_steps: u64, seed: u64) -> ModelParams {
    ModelParams {
        coupling: 1.0,
        sigma: 1.0,
        lambda,
        side: 32,
        thermalization_steps: 5000,
        measurement_steps,
        seed,
        threshold_mode: ThresholdMode::Frozen,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn kurtosis(x: &[f64]) -> f64 {
    summary(x).unwrap().excess_kurtosis
}

fn returns(m: &Series, tau: usize) -> Vec<f64> {
    log_returns(m, tau).unwrap().values
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let (mismatches, elapsed) = timed(|| {
        let mut bad = 0usize;
        for side in [8, 16] {
            for live in [false, true] {
                let params = ModelParams {
                    coupling: rng.random_range(-2.0..3.0),
                    sigma: rng.random_range(0.0..4.0),
                    lambda: rng.random_range(0.0..20.0),
                    side,
                    seed: rng.random(),
                    threshold_mode: if live { ThresholdMode::Live } else { ThresholdMode::Frozen },
                    ..ModelParams::default()
                };
                let mut sim = Simulation::new(params).unwrap();
                for _ in 0..1000 {
                    sim.step();
                    let lat = sim.lattice();
                    let brute: i64 = lat.spins().iter().map(|&s| s as i8 as i64).sum();
                    bad += usize::from(brute != lat.spin_sum());
                }
            }
        }
        bad
    });
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!("{mismatches} mismatching steps over 4 runs x 1000 steps, {elapsed:.2?} (limit 10 s)"),
    )
}

/// Mean-removed lagged products by direct double loop.
fn naive_acf(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    (0..=max_lag)
        .map(|tau| {
            let mut acc = 0.0;
            let mut pairs = 0;
            for t in 0..n {
                for s in 0..n {
                    if t == s + tau {
                        acc += (x[t] - mean) * (x[s] - mean);
                        pairs += 1;
                    }
                }
            }
            acc / pairs as f64 / var
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let cases: Vec<(Vec<f64>, usize)> = (0..200)
        .map(|_| {
            let n = rng.random_range(8..64);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            let lag = rng.random_range(1..n - 1);
            (x, lag)
        })
        .collect();
    let (worst, elapsed) = timed(|| {
        let mut worst = 0.0f64;
        for (x, lag) in &cases {
            let fast = autocorrelation(x, *lag).unwrap();
            for (a, b) in fast.values.iter().zip(naive_acf(x, *lag)) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    });
    outcome(
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("max deviation {worst:.2e} (tol 1e-12), {elapsed:.2?} (limit 1 s)"),
    )
}

fn criterion_3() -> Outcome {
    let mut sim = Simulation::new(reference(0.0, 10_000, 3)).unwrap();
    sim.thermalize();
    let mut max_zeros = sim.lattice().count(Spin::Zero);
    sim.measure_with(|lat| max_zeros = max_zeros.max(lat.count(Spin::Zero)));
    outcome(
        max_zeros == 0,
        format!("largest inactive count over 10000 measured steps: {max_zeros}"),
    )
}

fn criterion_4(scratch: &Path) -> Outcome {
    let run = |name: &str| {
        let out = scratch.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_spinmarket"))
            .args(["simulate", "--lambda", "10", "--steps", "10000", "--seed", "42", "--output", "series"])
            .arg("--out")
            .arg(&out)
            .output()
            .expect("binary runs");
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        std::fs::read(out.join("magnetization.csv")).unwrap()
    };
    let (a, b) = (run("det_a"), run("det_b"));
    outcome(a == b && !a.is_empty(), format!("two invocations, {} and {} bytes, identical: {}", a.len(), b.len(), a == b))
}

/// Exact match with a pinned value, or a note that none is pinned yet.
fn pinned(name: &str, value: f64, pin: f64) -> (bool, String) {
    if pin.is_nan() {
        (true, format!("{name} = {value:?} (not pinned)"))
    } else {
        (value == pin, format!("{name} = {value:?} (pinned {pin:?})"))
    }
}

struct ReferenceRuns {
    lambda_10: Series,
    lambda_0: Series,
    lambda_15: Series,
}

fn criterion_5(runs: &ReferenceRuns) -> Vec<(String, Outcome)> {
    let r10 = returns(&runs.lambda_10, 1);
    let r0 = returns(&runs.lambda_0, 1);
    let n = r10.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_CONTROL);
    let control: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let (k10, k0, kc) = (kurtosis(&r10), kurtosis(&r0), kurtosis(&control));
    let se = kurtosis_standard_error(n);

    let mut pins = [
        pinned("kurt(lambda=10)", k10, PINNED_KURTOSIS_LAMBDA_10),
        pinned("kurt(lambda=0)", k0, PINNED_KURTOSIS_LAMBDA_0),
        pinned("kurt(control)", kc, PINNED_KURTOSIS_CONTROL),
    ];
    let pins_ok = pins.iter().all(|p| p.0);
    let pin_text = pins.iter_mut().map(|p| std::mem::take(&mut p.1)).collect::<Vec<_>>().join(", ");

    vec![
        (
            "5a".into(),
            outcome(
                k10 - kc > 5.0 * se && pins_ok,
                format!("n = {n}, SE = {se:.4}; kurt(lambda=10) - kurt(control) = {:.3} (need > {:.3}); {pin_text}", k10 - kc, 5.0 * se),
            ),
        ),
        (
            "5b".into(),
            outcome(
                k0 < k10 - 5.0 * se,
                format!("kurt(lambda=0) = {k0:.3}, kurt(lambda=10) = {k10:.3} (need lambda=0 below {:.3})", k10 - 5.0 * se),
            ),
        ),
    ]
}

fn criterion_6(runs: &ReferenceRuns) -> Outcome {
    let taus = [1usize, 4, 16, 64];
    let stats: Vec<(usize, f64, f64)> = taus
        .iter()
        .map(|&tau| {
            let r = returns(&runs.lambda_10, tau);
            (tau, kurtosis(&r), kurtosis_standard_error(r.len()))
        })
        .collect();
    let mut pass = true;
    let mut violations = Vec::new();
    for w in stats.windows(2) {
        let (t0, k0, s0) = w[0];
        let (t1, k1, s1) = w[1];
        let allowance = 2.0 * (s0 * s0 + s1 * s1).sqrt();
        if k1 > k0 + allowance {
            pass = false;
            violations.push(format!("tau {t0} -> {t1} rises by {:.3} (allowed {allowance:.3})", k1 - k0));
        }
    }
    let table = stats.iter().map(|(t, k, _)| format!("tau {t}: {k:.3}")).collect::<Vec<_>>().join(", ");
    let tail = if violations.is_empty() { String::new() } else { format!("; {}", violations.join("; ")) };
    outcome(pass, format!("{table}{tail}"))
}

fn criteria_7_8(runs: &ReferenceRuns) -> (Outcome, Outcome) {
    let r = log_returns(&runs.lambda_15, 1).unwrap();
    let n = r.len();
    let bound = 4.0 / (n as f64).sqrt();
    let c_r = autocorrelation(&r.values, 200).unwrap();
    let (worst_tau, worst) = (5..=200)
        .map(|tau| (tau, c_r.values[tau].abs()))
        .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let seven = outcome(
        n >= 50_000 && worst < bound,
        format!("n = {n}, max |C_r| over tau 5..200 = {worst:.4} at tau {worst_tau} (bound {bound:.4})"),
    );

    let c_abs = autocorrelation(&abs_series(&r).values, 200).unwrap();
    let (low_tau, low) = (1..=20)
        .map(|tau| (tau, c_abs.values[tau]))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let fit = fit_decay(&c_abs, DecayModel::Exponential, (1, 50)).unwrap();
    let eight = outcome(
        low > bound && fit.r_squared >= 0.8 && fit.slope < 0.0,
        format!(
            "min C_|r| over tau 1..20 = {low:.4} at tau {low_tau} (bound {bound:.4}); exponential fit over 1..50: slope {:.5}, R^2 {:.3} (need >= 0.8)",
            fit.slope, fit.r_squared
        ),
    );
    (seven, eight)
}

fn criterion_9(runs: &ReferenceRuns) -> Outcome {
    let mut series: Vec<Series> = vec![runs.lambda_10.clone(), runs.lambda_0.clone(), runs.lambda_15.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for _ in 0..6 {
        let p = ModelParams {
            coupling: rng.random_range(-3.0..3.0),
            sigma: rng.random_range(0.0..20.0),
            lambda: rng.random_range(0.0..30.0),
            side: 8,
            thermalization_steps: 0,
            measurement_steps: 3000,
            seed: rng.random(),
            threshold_mode: ThresholdMode::Frozen,
        };
        series.push(run_simulation(&p).unwrap());
    }
    let mut checked = 0usize;
    let mut outside = 0usize;
    let mut largest = 0.0f64;
    for m in &series {
        for tau in 1..=200 {
            for v in returns(m, tau) {
                checked += 1;
                outside += usize::from(!(-2.0..=2.0).contains(&v));
                largest = largest.max(v.abs());
            }
        }
    }
    outcome(outside == 0, format!("{checked} returns over tau 1..200 in {} runs, {outside} outside [-2, 2], max |r| {largest:.4}", series.len()))
}

fn criterion_10() -> Outcome {
    let p = ModelParams { thermalization_steps: 0, measurement_steps: 100_000, ..reference(10.0, 100_000, 10) };
    let (m, elapsed) = timed(|| run_simulation(&p).unwrap());
    let updates = 100_000.0 * 1024.0;
    outcome(
        m.len() == 100_000 && elapsed < Duration::from_secs(60),
        format!("L = 32, 100000 steps in {elapsed:.2?} (limit 60 s), {:.1} M site updates/s", updates / elapsed.as_secs_f64() / 1e6),
    )
}

fn criterion_11(scratch: &Path) -> Outcome {
    let out = scratch.join("reproduce");
    let (status, elapsed) = timed(|| {
        Command::new(env!("CARGO_BIN_EXE_spinmarket"))
            .args(["reproduce", "--all", "--out"])
            .arg(&out)
            .output()
            .expect("binary runs")
    });
    if !status.status.success() {
        return outcome(false, format!("exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stderr)));
    }
    let mut missing = Vec::new();
    let mut csvs = 0usize;
    for fig in ["fig1", "fig2", "fig3", "fig4", "fig5"] {
        let dir = out.join(fig);
        let svg = dir.join(format!("{fig}.svg"));
        if !std::fs::read_to_string(&svg).is_ok_and(|s| s.starts_with("<svg") && s.contains("<polyline")) {
            missing.push(format!("{fig}.svg"));
        }
        let runs = std::fs::read_dir(&dir).map(|d| d.flatten().filter(|e| e.path().is_dir()).count()).unwrap_or(0);
        let mut fig_csvs = 0;
        for entry in std::fs::read_dir(&dir).into_iter().flatten().flatten() {
            for f in std::fs::read_dir(entry.path()).into_iter().flatten().flatten() {
                fig_csvs += usize::from(f.path().extension().is_some_and(|e| e == "csv"));
            }
        }
        if runs == 0 || fig_csvs == 0 {
            missing.push(format!("{fig} CSVs"));
        }
        csvs += fig_csvs;
    }
    outcome(
        missing.is_empty() && elapsed < Duration::from_secs(600),
        format!("5 recipes in {elapsed:.2?} (limit 600 s), {csvs} CSVs; missing: {}", if missing.is_empty() { "none".into() } else { missing.join(", ") }),
    )
}

/// The fat-tail comparison again with the threshold updated after every flip.
fn robustness_live() -> Outcome {
    let p = ModelParams { threshold_mode: ThresholdMode::Live, ..reference(10.0, 50_000, SEED_LAMBDA_10) };
    let r = returns(&run_simulation(&p).unwrap(), 1);
    let n = r.len();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED_CONTROL);
    let control: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let (k, kc, se) = (kurtosis(&r), kurtosis(&control), kurtosis_standard_error(n));
    outcome(k - kc > 5.0 * se, format!("live threshold, lambda = 10: kurt {k:.3} - control {kc:.3} = {:.3} (need > {:.3})", k - kc, 5.0 * se))
}

fn main() -> ExitCode {
    let scratch = tempfile::tempdir().unwrap();
    let mut results: Vec<(String, Outcome)> = Vec::new();
    let mut record = |name: &str, o: Outcome| {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((name.to_string(), o));
    };

    record("1 (incremental magnetization)", criterion_1());
    record("2 (autocorrelation oracle)", criterion_2());
    record("3 (lambda = 0 has no inactive agents)", criterion_3());
    record("4 (bitwise determinism)", criterion_4(scratch.path()));

    let runs = ReferenceRuns {
        lambda_10: run_simulation(&reference(10.0, 50_000, SEED_LAMBDA_10)).unwrap(),
        lambda_0: run_simulation(&reference(0.0, 50_000, SEED_LAMBDA_0)).unwrap(),
        lambda_15: run_simulation(&reference(15.0, 50_001, SEED_LAMBDA_15)).unwrap(),
    };
    for (part, o) in criterion_5(&runs) {
        let label = if part == "5a" { "5a (fat tails vs Gaussian control)" } else { "5b (lambda = 0 thinner than lambda = 10)" };
        record(label, o);
    }
    record("6 (kurtosis nonincreasing in tau)", criterion_6(&runs));
    let (seven, eight) = criteria_7_8(&runs);
    record("7 (fast return autocorrelation decay)", seven);
    record("8 (volatility clustering)", eight);
    record("9 (returns within [-2, 2])", criterion_9(&runs));
    record("10 (performance)", criterion_10());
    record("11 (reproduce recipes)", criterion_11(scratch.path()));
    record("robustness (live threshold, fat tails)", robustness_live());

    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| n.as_str()).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {}", failed.join("; "));
        ExitCode::FAILURE
    }
}
