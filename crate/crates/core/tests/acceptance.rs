//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion failed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use cts_core::experiment::{random_check_action, random_check_means, run, RunConfig, RunOptions};
use cts_core::harness::scaling::geometric_checkpoints;
use cts_core::harness::stats::ks_test;
use cts_core::harness::{
    bound_diagnostics, check_reduce2exact, random_means, scaling_fit, Benchmark, RegretLedger,
};
use cts_core::model::{
    check_smoothness, triggering_probabilities, Action, MeanVector, Metric, Problem,
    ProblemInstance, ProblemKind, TriggeredSet, UnitVectorAssignment,
};
use cts_core::oracle::maxcut::{expected_cut, sdp_objective};
use cts_core::oracle::{maxcut_round, maxcut_sdp, solve, OracleConfig, SdpConfig, SpreadEstimator};
use cts_core::policy::{run_episode_with, EpisodeConfig, PolicyKind};
use cts_core::posterior::{BetaState, GaussianState};
use cts_core::suite::{generate, trigger_frequencies, InstanceGenerator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{Beta as BetaDist, ContinuousCDF, Normal as NormalDist};

const SLACK: f64 = 1e-9;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Small random instance of `kind` within brute-force range.
fn small_instance(kind: ProblemKind, seed: u64) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let (size, k) = match kind {
        ProblemKind::Pmc => (rng.random_range(3..=5), rng.random_range(1..=3)),
        ProblemKind::Oim => (rng.random_range(3..=5), rng.random_range(1..=2)),
        ProblemKind::KCenter => (rng.random_range(3..=7), rng.random_range(1..=3)),
        ProblemKind::VertexCover => (rng.random_range(3..=8), 1),
        ProblemKind::MaxCut => (rng.random_range(3..=7), 1),
        ProblemKind::Tsp => (rng.random_range(3..=7), 1),
    };
    let density = match kind {
        ProblemKind::Oim => 0.35,
        _ => 0.6,
    };
    let gen = InstanceGenerator {
        density,
        ..InstanceGenerator::new(kind, size, seed).with_k(k)
    };
    generate(&gen).expect("generator output is valid")
}

fn exact_oracle() -> OracleConfig {
    OracleConfig {
        spread: SpreadEstimator::Exact,
        ..OracleConfig::default()
    }
}

fn criterion_reduce2exact() -> Outcome {
    let trials = 1000;
    let mut report = Vec::new();
    let mut ok = true;
    for kind in ProblemKind::ALL {
        let mut held = 0;
        let mut worst = f64::NEG_INFINITY;
        for trial in 0..trials {
            let instance = small_instance(kind, trial);
            let bench = Benchmark::new(&instance).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(trial);
            let theta = random_means(&instance, &mut rng);
            let out = solve(&instance, &theta, &exact_oracle(), &mut rng).unwrap();
            let c = check_reduce2exact(&instance, &out.trace, &bench).unwrap();
            worst = worst.max(c.lhs - c.rhs);
            if c.lhs <= c.rhs + SLACK {
                held += 1;
            }
        }
        ok &= held == trials;
        report.push(format!("{kind} {held}/{trials} (worst {worst:.1e})"));
    }
    outcome(ok, report.join(", "))
}

fn criterion_smoothness() -> Outcome {
    let trials = 1000;
    let mut report = Vec::new();
    let mut ok = true;
    for kind in ProblemKind::ALL {
        let mut held = 0;
        for trial in 0..trials {
            let instance = small_instance(kind, 10_000 + trial);
            let mut rng = ChaCha8Rng::seed_from_u64(trial);
            let a = random_check_action(&instance, &mut rng);
            let mu = random_check_means(&instance, &mut rng);
            let mu2 = random_check_means(&instance, &mut rng);
            let c = check_smoothness(&instance, &a, &mu, &mu2).unwrap();
            if c.lhs <= c.rhs + SLACK {
                held += 1;
            }
        }
        ok &= held == trials;
        report.push(format!("{kind} {held}/{trials}"));
    }
    outcome(ok, report.join(", "))
}

fn criterion_triggering() -> Outcome {
    let instance = ProblemInstance::load(fixture("oim_path.json")).unwrap();
    let action = Action::VertexSet(vec![0]);
    let exact = triggering_probabilities(&instance, &action, instance.means()).unwrap();
    // (0,1) is observed whenever 0 is seeded; (1,2) iff vertex 1 is reached
    let by_hand = [1.0, 0.5];
    let steps = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let freq = trigger_frequencies(&instance, &action, steps, &mut rng).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for i in 0..exact.len() {
        let se = (exact[i] * (1.0 - exact[i]) / steps as f64).sqrt();
        let within = (freq[i] - exact[i]).abs() <= 4.0 * se + 1e-12;
        ok &= within && (exact[i] - by_hand[i]).abs() < 1e-12;
        parts.push(format!("edge {i}: freq {:.4} vs p {:.4}", freq[i], exact[i]));
    }
    outcome(ok, parts.join(", "))
}

fn brute_pmc(right: usize, edges: &[(usize, usize)], mu: &[f64], left: usize, k: usize) -> f64 {
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << left) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut miss = vec![1.0; right];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if mask >> u & 1 == 1 {
                miss[v] *= 1.0 - mu[e];
            }
        }
        best = best.max(miss.iter().map(|m| 1.0 - m).sum());
    }
    best
}

fn brute_kcenter(metric: &Metric, mu: &[f64], k: usize) -> f64 {
    let n = metric.vertices();
    let d = |u: usize, v: usize| if u == v { 0.0 } else { mu[metric.arm(u, v)] };
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > k {
            continue;
        }
        let cost = (0..n)
            .map(|v| {
                (0..n)
                    .filter(|c| mask >> c & 1 == 1)
                    .map(|c| d(v, c))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        best = best.min(cost);
    }
    best
}

fn brute_vertex_cover(n: usize, edges: &[(usize, usize)], cost: &[f64]) -> f64 {
    (0u32..(1 << n))
        .filter(|m| edges.iter().all(|&(u, v)| m >> u & 1 == 1 || m >> v & 1 == 1))
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| cost[i]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// Held–Karp dynamic program over subsets containing vertex 0.
fn held_karp(metric: &Metric, mu: &[f64]) -> f64 {
    let n = metric.vertices();
    let d = |u: usize, v: usize| mu[metric.arm(u, v)];
    let full = 1usize << n;
    let mut dp = vec![f64::INFINITY; full * n];
    dp[n] = 0.0;
    for s in 1..full {
        if s & 1 == 0 {
            continue;
        }
        for last in 0..n {
            let cur = dp[s * n + last];
            if !cur.is_finite() {
                continue;
            }
            for next in 1..n {
                if s >> next & 1 == 1 {
                    continue;
                }
                let t = s | 1 << next;
                let cand = cur + d(last, next);
                if cand < dp[t * n + next] {
                    dp[t * n + next] = cand;
                }
            }
        }
    }
    (1..n)
        .map(|last| dp[(full - 1) * n + last] + d(last, 0))
        .fold(f64::INFINITY, f64::min)
}

fn tour_cost(metric: &Metric, mu: &[f64], tour: &[usize]) -> f64 {
    (0..tour.len())
        .map(|i| mu[metric.arm(tour[i], tour[(i + 1) % tour.len()])])
        .sum()
}

fn criterion_ratios() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let alpha_pmc = 1.0 - (-1.0f64).exp();

    let mut bad = 0;
    for seed in 0..100 {
        let inst = generate(&InstanceGenerator::new(ProblemKind::Pmc, 5, seed).with_k(2)).unwrap();
        let Problem::Pmc { left, right, edges, k } = inst.problem() else { unreachable!() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = solve(&inst, inst.means(), &exact_oracle(), &mut rng).unwrap();
        let Action::VertexSet(set) = &out.action else { unreachable!() };
        let mu = inst.means().as_slice();
        let mut miss = vec![1.0; *right];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if set.contains(&u) {
                miss[v] *= 1.0 - mu[e];
            }
        }
        let value: f64 = miss.iter().map(|m| 1.0 - m).sum();
        if value < alpha_pmc * brute_pmc(*right, edges, mu, *left, *k) - SLACK {
            bad += 1;
        }
    }
    ok &= bad == 0;
    parts.push(format!("pmc {bad}/100 violations"));

    let mut bad = 0;
    for seed in 0..100 {
        let inst = generate(&InstanceGenerator::new(ProblemKind::KCenter, 7, seed).with_k(2)).unwrap();
        let Problem::KCenter { metric, k } = inst.problem() else { unreachable!() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = solve(&inst, inst.means(), &exact_oracle(), &mut rng).unwrap();
        let Action::VertexSet(centers) = &out.action else { unreachable!() };
        let mu = inst.means().as_slice();
        let cost = (0..metric.vertices())
            .map(|v| {
                centers
                    .iter()
                    .map(|&c| if c == v { 0.0 } else { mu[metric.arm(v, c)] })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        if cost > 2.0 * brute_kcenter(metric, mu, *k) + SLACK {
            bad += 1;
        }
    }
    ok &= bad == 0;
    parts.push(format!("kcenter {bad}/100"));

    let mut bad = 0;
    for seed in 0..100 {
        let inst = generate(&InstanceGenerator::new(ProblemKind::VertexCover, 8, seed)).unwrap();
        let Problem::VertexCover { vertices, edges } = inst.problem() else { unreachable!() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = solve(&inst, inst.means(), &exact_oracle(), &mut rng).unwrap();
        let Action::Cover(cover) = &out.action else { unreachable!() };
        let mu = inst.means().as_slice();
        let covers = edges.iter().all(|(u, v)| cover.contains(u) || cover.contains(v));
        let cost: f64 = cover.iter().map(|&v| mu[v]).sum();
        if !covers || cost > 2.0 * brute_vertex_cover(*vertices, edges, mu) + SLACK {
            bad += 1;
        }
    }
    ok &= bad == 0;
    parts.push(format!("vertex_cover {bad}/100"));

    let mut bad = 0;
    for seed in 0..50 {
        let n = 4 + (seed as usize % 7);
        let inst = generate(&InstanceGenerator::new(ProblemKind::Tsp, n, seed)).unwrap();
        let Problem::Tsp { metric } = inst.problem() else { unreachable!() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = solve(&inst, inst.means(), &exact_oracle(), &mut rng).unwrap();
        let Action::Tour(tour) = &out.action else { unreachable!() };
        let mu = inst.means().as_slice();
        let mut seen = tour.clone();
        seen.sort_unstable();
        let hamiltonian = seen == (0..n).collect::<Vec<_>>();
        if !hamiltonian || tour_cost(metric, mu, tour) > 1.5 * held_karp(metric, mu) + SLACK {
            bad += 1;
        }
    }
    ok &= bad == 0;
    parts.push(format!("tsp {bad}/50"));

    let mut bad = 0;
    for seed in 0..50 {
        let n = 3 + (seed as usize % 8);
        let inst = generate(&InstanceGenerator::new(ProblemKind::MaxCut, n, seed)).unwrap();
        let Problem::MaxCut { vertices, edges } = inst.problem() else { unreachable!() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sol = maxcut_sdp(*vertices, edges, inst.means(), &SdpConfig::default(), &mut rng).unwrap();
        let mu = inst.means().as_slice();
        let cut = expected_cut(edges, mu, &sol.assignment);
        if cut < 0.878 * sdp_objective(edges, mu, &sol.assignment) - SLACK {
            bad += 1;
        }
    }
    ok &= bad == 0;
    parts.push(format!("maxcut {bad}/50"));
    outcome(ok, parts.join(", "))
}

fn unit_vector(rank: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..rank).map(|_| StandardNormal.sample(&mut *rng)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

fn criterion_crossing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws = 100_000;
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for _ in 0..20 {
        let a = UnitVectorAssignment::from_rows(&[unit_vector(3, &mut rng), unit_vector(3, &mut rng)]);
        let p = a.dot(0, 1).clamp(-1.0, 1.0).acos() / PI;
        let crossings = (0..draws)
            .filter(|_| {
                let side = maxcut_round(&a, &mut rng);
                side[0] != side[1]
            })
            .count();
        let f = crossings as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        worst = worst.max((f - p).abs() / se.max(1e-12));
        ok &= (f - p).abs() <= 4.0 * se + 1e-12;
    }
    outcome(ok, format!("20 pairs, worst deviation {worst:.2} stderr"))
}

fn criterion_sdp() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cfg = SdpConfig::default();
    let tri = maxcut_sdp(3, &[(0, 1), (1, 2), (0, 2)], &MeanVector::constant(3, 1.0), &cfg, &mut rng)
        .unwrap()
        .objective;
    let c5: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    let pent = maxcut_sdp(5, &c5, &MeanVector::constant(5, 1.0), &cfg, &mut rng)
        .unwrap()
        .objective;
    let pent_target = 2.5 * (1.0 + (PI / 5.0).cos());
    let ok = (tri - 2.25).abs() <= 1e-4 && (pent - pent_target).abs() <= 1e-4;
    outcome(
        ok,
        format!("triangle {tri:.6} (want 2.25), 5-cycle {pent:.6} (want {pent_target:.6})"),
    )
}

fn criterion_posteriors() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draws = 10_000;
    let mut worst_p: f64 = 1.0;
    for &(a, b) in &[(1u32, 1u32), (2, 5), (5, 2), (10, 10), (3, 30)] {
        let mut s = BetaState::new(1);
        let one = TriggeredSet::new(vec![0], 1).unwrap();
        for _ in 1..a {
            s.update(&one, &[1.0], &mut rng).unwrap();
        }
        for _ in 1..b {
            s.update(&one, &[0.0], &mut rng).unwrap();
        }
        let xs: Vec<f64> = (0..draws).map(|_| s.sample(&mut rng)[0]).collect();
        let target = BetaDist::new(a as f64, b as f64).unwrap();
        worst_p = worst_p.min(ks_test(&xs, |x| target.cdf(x)));
    }
    let beta_p = worst_p;

    let mut worst_p: f64 = 1.0;
    for &(beta, n, m) in &[(2.0, 8usize, 0.5), (2.0, 1, 0.3), (3.0, 20, 0.7), (1.5, 50, 0.1), (4.0, 3, 0.9)] {
        let mut s = GaussianState::new(1, beta, None).unwrap();
        let one = TriggeredSet::new(vec![0], 1).unwrap();
        for _ in 0..n {
            s.update(&one, &[m]).unwrap();
        }
        let xs: Vec<f64> = (0..draws).map(|_| s.sample(&mut rng).unwrap()[0]).collect();
        let target = NormalDist::new(m, (beta / (4.0 * n as f64)).sqrt()).unwrap();
        worst_p = worst_p.min(ks_test(&xs, |x| target.cdf(x)));
    }
    let gauss_p = worst_p;

    let mut s = GaussianState::new(1, 2.0, None).unwrap();
    let one = TriggeredSet::new(vec![0], 1).unwrap();
    for i in 0..8 {
        s.update(&one, &[if i % 2 == 0 { 0.2 } else { 0.8 }]).unwrap();
    }
    let xs: Vec<f64> = (0..100_000).map(|_| s.sample(&mut rng).unwrap()[0]).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;

    let ok = beta_p > 0.001 && gauss_p > 0.001 && (0.055..=0.070).contains(&var);
    outcome(
        ok,
        format!("min KS p beta {beta_p:.3}, gaussian {gauss_p:.3}; variance at beta=2, N=8: {var:.4}"),
    )
}

fn criterion_regret_shape() -> Outcome {
    let instance = ProblemInstance::load(fixture("pmc_5x5.json")).unwrap();
    let diag = bound_diagnostics(&instance).unwrap();
    let delta_min = diag.delta_min.unwrap_or(0.0);
    let bench = Benchmark::new(&instance).unwrap();
    let horizon = 20_000;
    let mut curves = BTreeMap::new();
    for policy in [PolicyKind::CtsBeta, PolicyKind::CtsGaussian, PolicyKind::UniformRandom] {
        let ledgers: Vec<RegretLedger> = (0..20)
            .map(|seed| {
                let cfg = EpisodeConfig::new(policy, horizon, seed);
                let rounds = run_episode_with(&instance, &bench, &cfg).unwrap();
                RegretLedger {
                    problem: instance.kind(),
                    instance: "pmc_5x5".into(),
                    policy,
                    seed,
                    gaps: rounds.iter().map(|r| r.gap).collect(),
                    sampled_gaps: rounds.iter().map(|r| r.sampled_gap).collect(),
                }
            })
            .collect();
        let ratio = scaling_fit(&ledgers, &[10_000, 20_000]).unwrap().ratios[0];
        let r2 = scaling_fit(&ledgers, &geometric_checkpoints(10_000.0, 4, -13, 4))
            .unwrap()
            .log_fit_r2;
        curves.insert(policy, (ratio, r2));
    }
    let (b_ratio, b_r2) = curves[&PolicyKind::CtsBeta];
    let (g_ratio, g_r2) = curves[&PolicyKind::CtsGaussian];
    let (u_ratio, _) = curves[&PolicyKind::UniformRandom];
    let ok = delta_min > 0.0
        && b_ratio <= 1.6
        && g_ratio <= 1.6
        && b_r2 >= 0.95
        && g_r2 >= 0.95
        && u_ratio >= 1.9;
    outcome(
        ok,
        format!(
            "delta_min {delta_min:.4}; cts_beta ratio {b_ratio:.3} R2 {b_r2:.4}; \
             cts_gaussian ratio {g_ratio:.3} R2 {g_r2:.4}; uniform ratio {u_ratio:.3}"
        ),
    )
}

fn read_tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn criterion_determinism() -> Outcome {
    let text = format!(
        r#"{{
            "instances": [
                "{}",
                {{"generate": {{"kind": "maxcut", "size": 6, "seed": 4}}}},
                {{"generate": {{"kind": "tsp", "size": 6, "seed": 4}}}},
                {{"generate": {{"kind": "oim", "size": 4, "density": 0.4, "seed": 4}}}}
            ],
            "policies": ["cts_beta", "cts_gaussian", "cucb", "uniform_random"],
            "horizon": 200,
            "seeds": "0..4",
            "trace_posteriors": true,
            "checks": {{"smoothness_trials": 100, "reduction_trials": 20, "trigger_steps": 2000}}
        }}"#,
        fixture("pmc_5x5.json").display()
    );
    let cfg = RunConfig::parse(&text).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let trees: Vec<_> = [(1, "a"), (1, "b"), (3, "c")]
        .iter()
        .map(|&(jobs, name)| {
            let out = tmp.path().join(name);
            let opts = RunOptions {
                out_dir: Some(out.clone()),
                jobs: Some(jobs),
                base_dir: None,
            };
            run(&cfg, &opts).unwrap();
            read_tree(&out)
        })
        .collect();
    let files = trees[0].len();
    let ok = files > 0 && trees[0] == trees[1] && trees[0] == trees[2];
    outcome(ok, format!("{files} files identical across two runs and jobs 1 vs 3"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("reduce2exact inequality, 1000 triples per problem", criterion_reduce2exact),
        ("triggering-modulated smoothness, 1000 triples per problem", criterion_smoothness),
        ("OIM path trigger frequencies over 1e5 steps", criterion_triggering),
        ("oracle approximation ratios against brute force", criterion_ratios),
        ("hyperplane crossing frequency on 20 vector pairs", criterion_crossing),
        ("SDP objective on triangle and 5-cycle", criterion_sdp),
        ("posterior sample marginals and variance", criterion_posteriors),
        ("regret shape on the 5x5 coverage fixture", criterion_regret_shape),
        ("byte-identical run outputs", criterion_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {}: {verdict}: {name}: {} [{:.1}s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
