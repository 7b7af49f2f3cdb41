//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp1};
use sdpi_core::bounds::{independent_coding_penalty, sum_rate_bound, theorem1_check};
use sdpi_core::gaussian::{discretize_bivariate, figure_data, gaussian_rho_star, Grid};
use sdpi_core::prob::{binary_entropy, Channel, Direction, Distribution, JointDistribution};
use sdpi_core::rd::{binary_hamming_rd, rd_at_distortion, rd_curve, DistortionMatrix};
use sdpi_core::sdpi::{
    maximal_correlation, rho_star, sstar, tensorization_check, verify_sdpi_inequality, SdpiConfig,
};
use sdpi_core::RateDistortionTuple;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn quaternary() -> JointDistribution {
    let probs = (0..16)
        .map(|i| if i / 4 == i % 4 { 0.1 } else { 0.05 })
        .collect();
    JointDistribution::new(4, 4, probs).unwrap()
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v: f64| v / s).collect()
}

fn random_joint(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> JointDistribution {
    JointDistribution::new(nx, ny, random_simplex(rng, nx * ny)).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn quaternary_constant() -> Outcome {
    let (rho, elapsed) = timed(|| rho_star(&quaternary(), &SdpiConfig::default()));
    let rho = rho.map_err(|e| e.to_string())?;
    let detail = format!("rho* = {rho:.6}, {:.2} s", elapsed.as_secs_f64());
    if (0.040..=0.050).contains(&rho) && elapsed < Duration::from_secs(10) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn penalty() -> Outcome {
    let rho = rho_star(&quaternary(), &SdpiConfig::default()).map_err(|e| e.to_string())?;
    let p = independent_coding_penalty(rho).map_err(|e| e.to_string())?;
    let detail = format!("penalty = {:.3}%", 100.0 * p);
    if (0.038..=0.048).contains(&p) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gaussian_figures() -> Outcome {
    let ((low, high), elapsed) = timed(|| {
        (
            figure_data(0.2, &Grid::Default),
            figure_data(0.8, &Grid::Default),
        )
    });
    let (low, high) = (
        low.map_err(|e| e.to_string())?,
        high.map_err(|e| e.to_string())?,
    );
    let worst = low
        .iter()
        .map(|r| r.exact - r.max_bound)
        .fold(f64::INFINITY, f64::min);
    let coop_wins = high.iter().filter(|r| r.cooperative > r.simple).count();
    let simple_wins = high.iter().filter(|r| r.simple > r.cooperative).count();
    let detail = format!(
        "min(exact - max_bound) = {worst:.3e} at rho=0.2; rho=0.8 rows coop>simple {coop_wins}, simple>coop {simple_wins}; {:.1} ms",
        elapsed.as_secs_f64() * 1e3
    );
    if worst >= -1e-9 && coop_wins > 0 && simple_wins > 0 && elapsed < Duration::from_secs(1) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gaussian_identity() -> Outcome {
    let exact = gaussian_rho_star(0.2).map_err(|e| e.to_string())? == 0.2 * 0.2
        && gaussian_rho_star(0.8).map_err(|e| e.to_string())? == 0.8 * 0.8;
    let mut values = Vec::new();
    for levels in [9, 17, 33] {
        let j = discretize_bivariate(0.5, levels, -4.0, 4.0).map_err(|e| e.to_string())?;
        let r = sstar(&j, Direction::XToY, &SdpiConfig::default()).map_err(|e| e.to_string())?;
        values.push(r.value);
    }
    let increasing = values.windows(2).all(|w| w[1] > w[0]) && values[2] <= 0.25 + 0.05;
    let detail = format!(
        "rho^2 identity {}; discretized s* = {:.4} / {:.4} / {:.4}",
        if exact { "exact" } else { "inexact" },
        values[0],
        values[1],
        values[2]
    );
    if exact && increasing && (values[2] - 0.25).abs() <= 0.05 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sdpi_chains() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = SdpiConfig::default();
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let (nx, ny, nu) = (
            rng.random_range(2..=4),
            rng.random_range(2..=4),
            rng.random_range(2..=4),
        );
        let j = random_joint(&mut rng, nx, ny);
        let rows = (0..nx).map(|_| random_simplex(&mut rng, nu)).collect();
        let u = Channel::new(rows).map_err(|e| e.to_string())?;
        let s = sstar(&j, Direction::XToY, &cfg).map_err(|e| e.to_string())?;
        let check = verify_sdpi_inequality(&j, &u, s.value).map_err(|e| e.to_string())?;
        worst = worst.max(check.lhs - check.rhs);
        if !check.holds {
            violations += 1;
        }
    }
    let detail = format!("1000 chains, {violations} violations, max(lhs - rhs) = {worst:.3e}");
    if violations == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn tensorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = SdpiConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let j = random_joint(&mut rng, 2, 2);
        let t = tensorization_check(&j, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max(t.gap);
    }
    let detail = format!("20 binary joints, max |s*(j) - s*(j x j)| = {worst:.3e}");
    if worst <= 0.02 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn blahut_arimoto() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let hamming2 = DistortionMatrix::hamming(2).unwrap();
    let mut worst = 0.0f64;
    let mut curve_failures = 0;
    for _ in 0..50 {
        let p = rng.random_range(0.02..0.98);
        let m: f64 = f64::min(p, 1.0 - p);
        let target = rng.random_range(0.0..m);
        let src = Distribution::bernoulli(p).map_err(|e| e.to_string())?;
        let ba = rd_at_distortion(&src, &hamming2, target, 1e-9).map_err(|e| e.to_string())?;
        worst = worst.max((ba.rate - binary_hamming_rd(p, target)).abs());
        match rd_curve(&src, &hamming2, 20) {
            Ok(c) if c.validate(1e-7).is_ok() => {}
            _ => curve_failures += 1,
        }
    }
    let uniform4 = Distribution::uniform(4).unwrap();
    let hamming4 = DistortionMatrix::hamming(4).unwrap();
    for target in [0.05, 0.1, 0.3, 0.6] {
        let closed = 2.0 - binary_entropy(target) - target * 3f64.log2();
        let ba = rd_at_distortion(&uniform4, &hamming4, target, 1e-9).map_err(|e| e.to_string())?;
        worst = worst.max((ba.rate - closed).abs());
    }
    match rd_curve(&uniform4, &hamming4, 20) {
        Ok(c) if c.validate(1e-7).is_ok() => {}
        _ => curve_failures += 1,
    }
    let detail = format!("max |BA - closed form| = {worst:.3e}; {curve_failures} curve failures");
    if worst <= 1e-4 && curve_failures == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn counterexample() -> Outcome {
    let j = JointDistribution::diagonal(&Distribution::uniform(2).unwrap()).unwrap();
    let cfg = SdpiConfig::default();
    let yx = sstar(&j, Direction::YToX, &cfg)
        .map_err(|e| e.to_string())?
        .value;
    let xy = sstar(&j, Direction::XToY, &cfg)
        .map_err(|e| e.to_string())?
        .value;
    let (px, py) = j.marginals();
    let rx = rd_at_distortion(&px, &DistortionMatrix::hamming(2).unwrap(), 0.0, 1e-9)
        .map_err(|e| e.to_string())?
        .rate;
    let ry = rd_at_distortion(&py, &DistortionMatrix::zero(2, 2).unwrap(), 0.0, 1e-9)
        .map_err(|e| e.to_string())?
        .rate;
    let t = RateDistortionTuple::new(0.5, 0.5, 0.0, 0.0).map_err(|e| e.to_string())?;
    let reports = theorem1_check(&t, yx, xy, rx, ry).map_err(|e| e.to_string())?;
    let sum = sum_rate_bound(yx.max(xy), rx, ry).map_err(|e| e.to_string())?;
    let below = RateDistortionTuple::new(0.5, 0.49, 0.0, 0.0).map_err(|e| e.to_string())?;
    let below = theorem1_check(&below, yx, xy, rx, ry).map_err(|e| e.to_string())?;
    let detail = format!(
        "s*(Y;X) = {yx:.9}, R_X(0) = {rx:.9}, slack at (0.5, 0.5) = {:.3e}, sum-rate bound = {sum:.9}",
        reports[0].slack
    );
    let ok = (yx - 1.0).abs() <= 1e-6
        && (rx - 1.0).abs() <= 1e-6
        && ry == 0.0
        && reports[0].satisfied
        && reports[0].slack.abs() <= 1e-6
        && reports[1].vacuous
        && !below[0].satisfied
        && (sum - 0.5).abs() <= 1e-6;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn range_invariant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = SdpiConfig::default();
    let mut bad = 0;
    let mut checked = 0;
    for _ in 0..500 {
        let (nx, ny) = (rng.random_range(2..=5), rng.random_range(2..=5));
        let j = random_joint(&mut rng, nx, ny);
        let rho_m2 = maximal_correlation(&j).powi(2);
        for dir in [Direction::XToY, Direction::YToX] {
            let v = sstar(&j, dir, &cfg).map_err(|e| e.to_string())?.value;
            checked += 1;
            if !(0.0..=1.0).contains(&v) || v < rho_m2 - 1e-9 {
                bad += 1;
            }
        }
    }
    let detail = format!("{checked} estimates over 500 joints, {bad} out of range");
    if bad == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("quaternary rho*", quaternary_constant),
        ("independent-coding penalty", penalty),
        ("gaussian figure dominance and crossover", gaussian_figures),
        ("gaussian rho^2 identity", gaussian_identity),
        ("strong DPI on random chains", sdpi_chains),
        ("tensorization", tensorization),
        ("Blahut-Arimoto vs closed form", blahut_arimoto),
        ("counterexample tightness", counterexample),
        ("s* range", range_invariant),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (outcome, elapsed) = timed(run);
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {}: {tag} {name} ({detail}) [{:.1} s]",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
