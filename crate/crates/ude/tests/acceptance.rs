//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line
//! with its elapsed time; the process fails if any criterion fails.

use std::time::{Duration, Instant};

use ude::figures;
use ude::parallel;
use ude_core::asymptotics::{self, RatePoint};
use ude_core::ensemble::{self, BernoulliEnsemble};
use ude_core::exact::{binomial, rational, Rational};
use ude_core::montecarlo::SimConfig;
use ude_core::optimize::OptimizerConfig;
use ude_core::oracle::{self, Status};
use ude_core::{BitVector, Bsc, RationalPoly};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(coeffs: &[(i64, i64)]) -> RationalPoly {
    RationalPoly::from_coeffs(coeffs.iter().map(|&(a, b)| rational(a, b)).collect())
}

fn worked_example() -> Outcome {
    let mom = oracle::enumerate_ensemble(1, 2, &rational(1, 2)).map_err(|e| e.to_string())?;
    let probs: Vec<Rational> = oracle::enumerate_matrices(1, 2, &rational(1, 2), 4)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    let want = [rational(9, 16), rational(3, 16), rational(3, 16), rational(1, 16)];
    ensure(probs == want, || format!("matrix probabilities {probs:?}"))?;
    ensure(mom.cov[1][1] == rational(3, 8), || format!("cov[1,1] = {}", mom.cov[1][1]))?;
    ensure(mom.cov[1][2] == rational(3, 16), || format!("cov[1,2] = {}", mom.cov[1][2]))?;
    ensure(mom.cov[2][2] == rational(15, 64), || format!("cov[2,2] = {}", mom.cov[2][2]))?;
    let var = poly(&[(0, 1), (0, 1), (3, 8), (-3, 8), (15, 64)]);
    ensure(mom.var_pu == var, || format!("var_pu = {}", mom.var_pu))
}

fn typo_adjudication() -> Outcome {
    let mom = oracle::enumerate_ensemble(1, 2, &rational(1, 2)).map_err(|e| e.to_string())?;
    ensure(mom.e_pu.coeff(1) == rational(3, 2), || format!("e_pu eps coefficient {}", mom.e_pu.coeff(1)))?;
    ensure(mom.e_pu.coeff(2) == rational(-7, 8), || format!("e_pu eps^2 coefficient {}", mom.e_pu.coeff(2)))?;
    ensure(mom.e_pu2.coeff(3) == rational(-3, 1), || format!("e_pu2 eps^3 coefficient {}", mom.e_pu2.coeff(3)))?;
    let report = oracle::verify_closed_forms(1, 2, &rational(1, 2)).map_err(|e| e.to_string())?;
    let flagged: Vec<(String, Option<String>, String)> =
        report.flagged().map(|e| (e.name.clone(), e.published.clone(), e.oracle_value.clone())).collect();
    let want = vec![
        ("e_pu[eps^1]".to_string(), Some("2/3".to_string()), "3/2".to_string()),
        ("e_pu2[eps^3]".to_string(), Some("-3/8".to_string()), "-3".to_string()),
    ];
    ensure(flagged == want, || format!("flagged entries {flagged:?}"))?;
    ensure(report.status == Status::Pass, || "report status is not PASS".into())
}

fn oracle_sweep() -> Outcome {
    let workers = parallel::default_workers();
    let mut checked = 0;
    for m in 1u32..=16 {
        for n in 1..=16 / m {
            let sums = parallel::class_sums(m, n, 16, workers).map_err(|e| e.to_string())?;
            for k in [Rational::new(n.into(), 4.into()), Rational::new(n.into(), 2.into())] {
                let r = oracle::verify_with_sums(&sums, &k).map_err(|e| e.to_string())?;
                let failed: Vec<&str> =
                    r.entries.iter().filter(|e| e.status == Status::Fail).map(|e| e.name.as_str()).collect();
                ensure(failed.is_empty(), || format!("(m={m}, n={n}, k={k}): {failed:?}"))?;
                ensure(r.max_relative_deviation <= 1e-10, || {
                    format!("(m={m}, n={n}, k={k}): deviation {:e}", r.max_relative_deviation)
                })?;
                checked += 1;
            }
        }
    }
    ensure(checked == 100, || format!("{checked} ensembles checked"))
}

fn random_closed_forms() -> Outcome {
    let channels: Vec<Bsc> = [0.01, 0.1, 0.3, 0.49].iter().map(|&e| Bsc::new(e).unwrap()).collect();
    let mut worst = (0.0f64, 0.0f64);
    for m in 1u32..=64 {
        for n in 1u32..=128 {
            let ens = BernoulliEnsemble::random(m, n).map_err(|e| e.to_string())?;
            for ch in &channels {
                let d = ens.avg_pu(ch).relative_difference(ensemble::avg_pu_random_closed_form(m, n, ch));
                let v = ens.var_pu(ch).relative_difference(ensemble::var_pu_random_closed_form(m, n, ch));
                worst = (worst.0.max(d), worst.1.max(v));
                ensure(d <= 1e-12 && v <= 1e-12, || {
                    format!("(m={m}, n={n}, eps={}): mean {d:e}, variance {v:e}", ch.eps())
                })?;
            }
        }
    }
    for (m, n) in [(1, 2), (5, 12), (20, 40), (64, 128)] {
        let ens = BernoulliEnsemble::random(m, n).map_err(|e| e.to_string())?;
        for w1 in 0..=n {
            for w2 in 0..=n {
                let c = ens.cov_weight(w1, w2).map_err(|e| e.to_string())?;
                ensure(w1 == w2 || c.is_zero(), || format!("(m={m}, n={n}) cov[{w1},{w2}] = {c:?}"))?;
            }
        }
    }
    println!("    worst relative deviation: mean {:e}, variance {:e}", worst.0, worst.1);
    Ok(())
}

fn random_exponent() -> Outcome {
    let cfg = OptimizerConfig::default();
    for rate in [0.3, 0.5, 0.7, 0.9] {
        let f = asymptotics::growth_rate_random(rate).map_err(|e| e.to_string())?;
        for eps in [0.05, 0.1, 0.2, 0.4] {
            let e = asymptotics::error_exponent(f, eps, &cfg).map_err(|e| e.to_string())?;
            ensure((e.value + (1.0 - rate)).abs() <= 1e-6 && (e.argmax - eps).abs() <= 1e-4, || {
                format!("(R={rate}, eps={eps}): value {}, argmax {}", e.value, e.argmax)
            })?;
        }
    }
    Ok(())
}

fn sparse_exponent() -> Outcome {
    let cfg = OptimizerConfig::default();
    let f = asymptotics::growth_rate_bernoulli(0.5, 20.0).map_err(|e| e.to_string())?;
    let t = |eps: f64| asymptotics::error_exponent(f, eps, &cfg).map(|e| e.value).map_err(|e| e.to_string());
    let at_04 = t(0.4)?;
    ensure((at_04 + 0.5).abs() <= 1e-2, || format!("T(0.4) = {at_04}"))?;
    let mut eps_grid = figures::exponent_eps_grid();
    eps_grid.push(0.01);
    for eps in eps_grid {
        let v = t(eps)?;
        ensure(v >= -0.5, || format!("T({eps}) = {v} below -(1-R)"))?;
    }
    let at_001 = t(0.01)?;
    ensure(at_001 >= -0.5 + 0.1, || format!("T(0.01) = {at_001}, margin {}", at_001 + 0.5))
}

fn finite_n_convergence() -> Outcome {
    let ch = Bsc::new(0.1).unwrap();
    let mut prev = f64::INFINITY;
    for n in [50u32, 100, 200, 400, 800] {
        let ens = BernoulliEnsemble::random(n / 2, n).map_err(|e| e.to_string())?;
        let gap = (ens.finite_n_exponent(&ch) + 0.5).abs();
        println!("    n={n}: |finite-n exponent + 0.5| = {gap:.3e}");
        // once the gap is below half an ulp of 0.5 it rounds to exactly 0
        ensure(gap < prev || gap == 0.0, || format!("random gap {gap:e} at n={n} not below {prev:e}"))?;
        prev = gap;
    }
    ensure(prev <= 1e-6, || format!("random gap {prev:e} at n=800"))?;

    let rp = RatePoint::bernoulli(0.5, 4.0).map_err(|e| e.to_string())?;
    let limit = asymptotics::cov_growth_rate(&rp, 0.5, 0.5, &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    let mut prev = f64::INFINITY;
    for n in [100u32, 200, 400] {
        let ens = BernoulliEnsemble::new(n / 2, n, 4.0).map_err(|e| e.to_string())?;
        let finite = ens.cov_weight(n / 2, n / 2).map_err(|e| e.to_string())?.log2() / f64::from(n);
        let gap = (finite - limit).abs();
        println!("    n={n}: (1/n) log2 cov = {finite:.9}, growth rate {limit:.9}, gap {gap:.3e}");
        ensure(gap < prev, || format!("covariance gap {gap:e} at n={n} not below {prev:e}"))?;
        prev = gap;
    }
    Ok(())
}

fn monte_carlo_regime() -> Outcome {
    let eps = [0.01, 0.025, 0.05, 0.1];
    let channels: Vec<Bsc> = eps.iter().map(|&e| Bsc::new(e).unwrap()).collect();
    let mut variances = Vec::new();
    for k in [20.0, 5.0] {
        let ens = BernoulliEnsemble::new(20, 40, k).map_err(|e| e.to_string())?;
        let cfg = SimConfig { workers: 4, ..SimConfig::new(ens, eps[0], 10_000, 20_240_601).map_err(|e| e.to_string())? };
        let reports = parallel::simulate(&cfg, &eps).map_err(|e| e.to_string())?;
        for (r, ch) in reports.iter().zip(&channels) {
            let exact = ens.avg_pu(ch).to_f64();
            // standard error of the sample mean from the exact ensemble variance
            let se = (ens.var_pu(ch).to_f64() / r.samples as f64).sqrt();
            let z = (r.mean - exact) / se;
            let z_plugin = (r.mean - exact) / r.mean_se;
            println!(
                "    k={k} eps={}: mean {:.6e} vs {exact:.6e} ({z:+.2} SE, {z_plugin:+.2} plug-in SE), var {:.6e}",
                r.eps, r.mean, r.var
            );
            ensure(z.abs() <= 4.0, || format!("k={k}, eps={}: mean off by {z:.2} SE", r.eps))?;
        }
        variances.push(reports.iter().map(|r| r.var).collect::<Vec<_>>());
    }
    for (i, e) in eps.iter().enumerate() {
        ensure(variances[1][i] >= variances[0][i], || {
            format!("eps={e}: sparse variance {} below random {}", variances[1][i], variances[0][i])
        })?;
    }
    let fig = figures::fig5().map_err(|e| e.to_string())?;
    let xs = fig.float_column("eps").unwrap();
    let ys = fig.float_column("sparse_mean").unwrap();
    let peak = (0..ys.len()).max_by(|&a, &b| ys[a].total_cmp(&ys[b])).unwrap();
    let unimodal = ys[..=peak].windows(2).all(|w| w[0] < w[1]) && ys[peak..].windows(2).all(|w| w[0] > w[1]);
    ensure(unimodal, || "sparse mean curve is not unimodal".into())?;
    println!("    fig 5 sparse peak at eps = {}", xs[peak]);
    ensure(xs[peak] > 0.01 && xs[peak] < 0.05, || format!("peak at eps = {}", xs[peak]))
}

fn combinatorial_identity() -> Outcome {
    for n in 1u64..=30 {
        for w1 in 1..=n {
            let c1 = binomial(n, w1);
            for w2 in w1..=n {
                let lo = (w1 + w2).saturating_sub(n);
                let sum = (lo..=w1.min(w2))
                    .map(|v| &c1 * binomial(w1, v) * binomial(n - w1, w2 - v))
                    .fold(ude_core::exact::binomial(0, 1), |acc, x| acc + x);
                ensure(sum == &c1 * binomial(n, w2), || format!("n={n}, w1={w1}, w2={w2}"))?;
            }
        }
    }
    Ok(())
}

fn joint_pass() -> Outcome {
    let mut checked = 0;
    for m in 1u32..=3 {
        for n in 1u32..=8 {
            for k in [Rational::new(n.into(), 4.into()), Rational::new(n.into(), 2.into())] {
                for w1 in 0..=n {
                    for w2 in 0..=n {
                        let (lo, hi) = ensemble::overlap_range(n, w1, w2);
                        for v in lo..=hi {
                            let x = BitVector::from_bits((0..n).map(|i| i < w1));
                            let y = BitVector::from_bits((0..n).map(|i| i >= w1 - v && i < w1 - v + w2));
                            let brute = oracle::brute_force_joint_pass(m, n, &k, &x, &y).map_err(|e| e.to_string())?;
                            let formula =
                                ensemble::joint_pass_prob_exact(m, n, &k, w1, w2, v).map_err(|e| e.to_string())?;
                            ensure(brute == formula, || {
                                format!("(m={m}, n={n}, k={k}, w1={w1}, w2={w2}, v={v}): {brute} vs {formula}")
                            })?;
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    println!("    {checked} (m, n, k, w1, w2, v) points");
    Ok(())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("worked example reproduction", Duration::from_secs(1), worked_example),
        ("typo adjudication", Duration::from_secs(1), typo_adjudication),
        ("formula-vs-oracle sweep", Duration::from_secs(120), oracle_sweep),
        ("random-ensemble closed forms", Duration::from_secs(60), random_closed_forms),
        ("random exponent reproduction", Duration::from_secs(10), random_exponent),
        ("sparse-vs-dense exponent", Duration::from_secs(10), sparse_exponent),
        ("finite-n convergence", Duration::from_secs(60), finite_n_convergence),
        ("Monte Carlo mean/variance regime", Duration::from_secs(300), monte_carlo_regime),
        ("combinatorial identity", Duration::from_secs(5), combinatorial_identity),
        ("joint-pass probability", Duration::from_secs(60), joint_pass),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= *budget, || format!("took {elapsed:.2?}, budget {budget:.0?}"))
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
