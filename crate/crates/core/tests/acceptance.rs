//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line;
//! run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use bjscc::bounds::{
    baseline_bound, baseline_limit, corollary1_lossless_bound, corollary1_slepian_wolf_bound,
    hybrid_bound, theorem1_bound, theorem2_wz_bound, JsccInstance, SchemeDescriptor, SchemeKind,
    WzInstance,
};
use bjscc::prob::{DistortionMatrix, Kernel, Pmf};
use bjscc::rate_search::{max_rate_hybrid_opt, scheme_rate};
use bjscc::second_order::{
    d_tilted_information, disjoint_condition, gaussian_max_quantile, hybrid_condition,
    rate_distortion, ConditionParams, GaussianMaxSpec, SecondOrderQuantities,
};
use bjscc::sim::{
    simulate_conditional_list_pml, simulate_list_pml, simulate_scheme, simulate_wz_scheme,
    two_sample_z, Backend, ConditionalPmlInstance, RunConfig, TrialBatchResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn report(id: u32, what: &str, ok: bool, elapsed: Duration, budget: Duration, detail: String) {
    let ok = ok && elapsed <= budget;
    println!(
        "criterion {id:>2} [{what}]: {} ({detail}; {:.2}s of {}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn rand_probs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|x| x / s).collect()
}

fn rand_pmf(rng: &mut ChaCha8Rng, n: usize) -> Pmf<f64> {
    Pmf::new(rand_probs(rng, n)).unwrap()
}

fn rand_kernel(rng: &mut ChaCha8Rng, n_in: usize, n_out: usize) -> Kernel<f64> {
    Kernel::new((0..n_in).map(|_| rand_probs(rng, n_out)).collect()).unwrap()
}

fn rand_jscc(rng: &mut ChaCha8Rng, max_alphabet: usize, k: u64) -> JsccInstance<f64> {
    let nw = rng.random_range(2..=max_alphabet);
    let nz = rng.random_range(2..=max_alphabet);
    let nx = rng.random_range(2..=max_alphabet);
    let ny = rng.random_range(2..=max_alphabet);
    let dmat = DistortionMatrix::new(
        (0..nw)
            .map(|_| (0..nz).map(|_| rng.random_range(0.0..1.0)).collect())
            .collect(),
    )
    .unwrap();
    JsccInstance::new(
        rand_pmf(rng, nw),
        rand_pmf(rng, nx),
        rand_pmf(rng, nz),
        rand_kernel(rng, nx, ny),
        dmat,
        rng.random_range(0.2..0.8),
        k,
    )
    .unwrap()
}

#[test]
fn criterion_01_reduction_identities() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let k = rng.random_range(1..=12u64);
        let inst = rand_jscc(&mut rng, 6, k);
        let full = hybrid_bound(&inst, &SchemeDescriptor::hybrid_for(k, k).unwrap()).unwrap();
        let shared = hybrid_bound(&inst, &SchemeDescriptor::hybrid_for(k, 1).unwrap()).unwrap();
        worst = worst
            .max((full - theorem1_bound(&inst).unwrap()).abs())
            .max((shared - baseline_bound(&inst).unwrap()).abs());
    }
    report(
        1,
        "hybrid reduces to disjoint and baseline",
        worst < 1e-12,
        t0.elapsed(),
        Duration::from_secs(10),
        format!("max |diff| = {worst:e}"),
    );
}

#[test]
fn criterion_02_corollary_reductions() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let nw = rng.random_range(2..=6);
        let nt = rng.random_range(2..=5);
        let nx = rng.random_range(2..=4);
        let ny = rng.random_range(2..=4);
        let k = rng.random_range(1..=8u64);
        let p_w = rand_pmf(&mut rng, nw);
        let p_x = rand_pmf(&mut rng, nx);
        let ch = rand_kernel(&mut rng, nx, ny);
        let identity_phi: Vec<Vec<usize>> = (0..nw).map(|u| vec![u; nt]).collect();
        let wz = |t_given_w: &Kernel<f64>| {
            WzInstance::new(
                p_w.clone(),
                Kernel::identity(nw).unwrap(),
                t_given_w.clone(),
                identity_phi.clone(),
                p_x.clone(),
                ch.clone(),
                DistortionMatrix::hamming(nw).unwrap(),
                0.0,
                k,
            )
            .unwrap()
        };

        let t_given_w = rand_kernel(&mut rng, nw, nt);
        let sw = corollary1_slepian_wolf_bound(&p_w, &t_given_w, &p_x, &ch, k).unwrap();
        worst = worst.max((theorem2_wz_bound(&wz(&t_given_w)).unwrap() - sw).abs());

        let p_t = rand_pmf(&mut rng, nt);
        let indep = Kernel::constant(nw, &p_t).unwrap();
        let lossless = corollary1_lossless_bound(&p_w, &p_x, &ch, k).unwrap();
        worst = worst.max((theorem2_wz_bound(&wz(&indep)).unwrap() - lossless).abs());
    }
    report(
        2,
        "side-information bound reduces to its corollaries",
        worst < 1e-12,
        t0.elapsed(),
        Duration::from_secs(10),
        format!("max |diff| = {worst:e}"),
    );
}

#[test]
fn criterion_03_lemma_harnesses() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = 200_000;
    let mut runs = 0u32;
    let mut passed = 0u32;
    let mut seed = 300;
    for n_u in 2..=4 {
        for k in [1u64, 3] {
            for _ in 0..2 {
                let p = rand_pmf(&mut rng, n_u);
                let q = rand_pmf(&mut rng, n_u);
                seed += 1;
                let r = simulate_list_pml(&p, &q, k, &RunConfig::new(trials, seed)).unwrap();
                runs += 1;
                passed += u32::from(r.all_within(3.0));
            }
        }
    }
    for j in 1..=2u64 {
        for l in 1..=2u64 {
            for _ in 0..3 {
                let nx = 2;
                let n_u = rng.random_range(2..=3);
                let ny = rng.random_range(2..=3);
                let inst = ConditionalPmlInstance::new(
                    rand_pmf(&mut rng, nx),
                    rand_kernel(&mut rng, nx, n_u),
                    rand_kernel(&mut rng, nx * n_u, ny),
                    rand_kernel(&mut rng, ny, n_u),
                )
                .unwrap();
                seed += 1;
                let r = simulate_conditional_list_pml(&inst, j, l, &RunConfig::new(trials, seed))
                    .unwrap();
                runs += 1;
                passed += u32::from(r.all_within(3.0));
            }
        }
    }
    report(
        3,
        "matching-lemma harnesses within rhs + 3 stderr",
        passed as f64 >= 0.95 * runs as f64,
        t0.elapsed(),
        Duration::from_secs(120),
        format!("{passed}/{runs} instances pass"),
    );
}

/// Desk-scale instances: small random alphabets (at most 16 `(w, x)` cells)
/// plus a fixed near-lossless binary instance. Channels have full support so
/// both backends apply.
fn desk_instances(k: u64) -> Vec<JsccInstance<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(40 + k);
    let mut out: Vec<_> = (0..2).map(|_| rand_jscc(&mut rng, 4, k)).collect();
    let bsc2 = bjscc::prob::product_channel(&Kernel::bsc(0.1).unwrap(), 2).unwrap();
    out.push(
        JsccInstance::near_lossless(
            Pmf::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap(),
            Pmf::uniform(4).unwrap(),
            bsc2,
            k,
        )
        .unwrap(),
    );
    out
}

fn desk_schemes(k: u64) -> Vec<SchemeDescriptor> {
    let mut v = vec![
        SchemeDescriptor::disjoint(k).unwrap(),
        SchemeDescriptor::baseline(k).unwrap(),
    ];
    if k == 4 {
        v.push(SchemeDescriptor::hybrid(2, 2).unwrap());
    }
    v
}

fn desk_wz(k: u64) -> WzInstance<f64> {
    // Binary source, noisy side information, U a noisy copy of W, and
    // reconstruction `phi(u, t) = u`.
    let ch = Kernel::bsc(0.15).unwrap();
    WzInstance::new(
        Pmf::uniform(2).unwrap(),
        Kernel::bsc(0.1).unwrap(),
        Kernel::bsc(0.2).unwrap(),
        vec![vec![0, 0], vec![1, 1]],
        Pmf::uniform(2).unwrap(),
        ch,
        DistortionMatrix::hamming(2).unwrap(),
        0.0,
        k,
    )
    .unwrap()
}

#[test]
fn criterion_04_schemes_within_bounds() {
    let t0 = Instant::now();
    let trials = 100_000;
    let mut runs = 0;
    let mut failures = Vec::new();
    let mut seed = 400;
    for k in [1u64, 2, 4] {
        for (i, inst) in desk_instances(k).iter().enumerate() {
            for sd in desk_schemes(k) {
                seed += 1;
                let r =
                    simulate_scheme(inst, &sd, Backend::CellTable, &RunConfig::new(trials, seed))
                        .unwrap();
                let b = hybrid_bound(inst, &sd).unwrap();
                runs += 1;
                if !r.within(b, 3.0) {
                    failures.push(format!(
                        "{} K={k} inst {i}: {} > {b}",
                        sd.kind().as_str(),
                        r.p_hat()
                    ));
                }
            }
        }
        let wz = desk_wz(k);
        seed += 1;
        let r = simulate_wz_scheme(&wz, Backend::CellTable, &RunConfig::new(trials, seed)).unwrap();
        let b = theorem2_wz_bound(&wz).unwrap();
        runs += 1;
        if !r.within(b, 3.0) {
            failures.push(format!("wyner_ziv K={k}: {} > {b}", r.p_hat()));
        }
    }
    report(
        4,
        "simulated error within bound + 3 stderr",
        failures.is_empty(),
        t0.elapsed(),
        Duration::from_secs(300),
        format!("{}/{runs} runs pass {failures:?}", runs - failures.len()),
    );
}

#[test]
fn criterion_05_backend_equivalence() {
    let t0 = Instant::now();
    let trials = 100_000;
    let mut worst = 0.0f64;
    let mut runs = 0;
    let mut seed = 500;
    let pair = |a: TrialBatchResult, b: TrialBatchResult| two_sample_z(&a, &b).abs();
    for k in [1u64, 2, 4] {
        for inst in desk_instances(k).iter() {
            for sd in desk_schemes(k) {
                let table =
                    simulate_scheme(inst, &sd, Backend::CellTable, &RunConfig::new(trials, seed))
                        .unwrap();
                let stream = simulate_scheme(
                    inst,
                    &sd,
                    Backend::Stream,
                    &RunConfig::new(trials, seed + 1),
                )
                .unwrap();
                seed += 2;
                worst = worst.max(pair(table, stream));
                runs += 1;
            }
        }
        let wz = desk_wz(k);
        let table =
            simulate_wz_scheme(&wz, Backend::CellTable, &RunConfig::new(trials, seed)).unwrap();
        let stream =
            simulate_wz_scheme(&wz, Backend::Stream, &RunConfig::new(trials, seed + 1)).unwrap();
        seed += 2;
        worst = worst.max(pair(table, stream));
        runs += 1;
    }
    report(
        5,
        "cell_table and stream backends agree",
        worst < 4.0,
        t0.elapsed(),
        Duration::from_secs(300),
        format!("max |z| = {worst:.3} over {runs} pairs"),
    );
}

const N: u32 = 10;
const DELTA: f64 = 0.05;
const EPS: f64 = 1e-2;

fn sweep_ks() -> Vec<u64> {
    (0..=10).map(|e| 1u64 << e).collect()
}

#[test]
fn criterion_06_baseline_saturation() {
    let t0 = Instant::now();
    let rate = |k| {
        scheme_rate(SchemeKind::Baseline, N, DELTA, EPS, k)
            .unwrap()
            .rate
    };
    let gain = rate(1024) - rate(512);
    // (1 + (2(1-delta))^n / M)^-1 = eps solved for M.
    let m_lim = (2.0 * (1.0 - DELTA)).powi(N as i32) * EPS / (1.0 - EPS);
    let r_lim = m_lim.log2() / N as f64;
    let limit_at = baseline_limit(N, DELTA, m_lim).unwrap();
    let max_rate = sweep_ks().into_iter().map(rate).fold(0.0, f64::max);
    report(
        6,
        "baseline rate saturates below the large-K limit",
        gain < 0.005 && max_rate <= r_lim + 1e-9 && (limit_at - EPS).abs() < 1e-12,
        t0.elapsed(),
        Duration::from_secs(30),
        format!("gain {gain:.2e}, max rate {max_rate:.6} vs limit {r_lim:.6}"),
    );
}

#[test]
fn criterion_07_disjoint_log_gain() {
    let t0 = Instant::now();
    let rate = |k| {
        scheme_rate(SchemeKind::Disjoint, N, DELTA, EPS, k)
            .unwrap()
            .rate
    };
    let incs: Vec<f64> = [64u64, 128, 256, 512]
        .iter()
        .map(|&k| rate(2 * k) - rate(k))
        .collect();
    report(
        7,
        "disjoint rate gains about 1/n per doubling of K",
        incs.iter().all(|d| (0.09..=0.11).contains(d)),
        t0.elapsed(),
        Duration::from_secs(30),
        format!("increments {incs:.6?}"),
    );
}

#[test]
fn criterion_08_blocklength_crossover() {
    let t0 = Instant::now();
    let rate = |n, k| {
        scheme_rate(SchemeKind::Disjoint, n, DELTA, EPS, k)
            .unwrap()
            .rate
    };
    let crossing: Vec<u64> = sweep_ks()
        .into_iter()
        .filter(|&k| rate(10, k) > rate(20, k))
        .collect();
    report(
        8,
        "n = 10 beats n = 20 for some K",
        !crossing.is_empty(),
        t0.elapsed(),
        Duration::from_secs(30),
        format!("K where n=10 wins: {crossing:?}"),
    );
}

#[test]
fn criterion_09_hybrid_dominance() {
    let t0 = Instant::now();
    let mut dominated = 0;
    let mut strict = 0;
    let mut points = 0;
    for n in [10u32, 20] {
        for k in sweep_ks() {
            let d = scheme_rate(SchemeKind::Disjoint, n, DELTA, EPS, k)
                .unwrap()
                .rate;
            let b = scheme_rate(SchemeKind::Baseline, n, DELTA, EPS, k)
                .unwrap()
                .rate;
            let h = max_rate_hybrid_opt(n, DELTA, EPS, k).unwrap().rate;
            points += 1;
            dominated += usize::from(h >= d.max(b));
            strict += usize::from(h > d.max(b));
        }
    }
    report(
        9,
        "optimized hybrid dominates both extremes",
        points == 22 && dominated == points && strict >= 1,
        t0.elapsed(),
        Duration::from_secs(60),
        format!("{dominated}/{points} dominated, {strict} strictly"),
    );
}

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

#[test]
fn criterion_10_second_order_consistency() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let params = ConditionParams::default();

    let mut cond_gap = 0.0f64;
    for _ in 0..10 {
        let v = rng.random_range(0.1..1.0);
        let q = SecondOrderQuantities::from_parts(
            rng.random_range(0.3..1.0),
            v,
            rng.random_range(0.0..v),
            rng.random_range(0.1..1.0),
            rng.random_range(0.0..0.5),
        )
        .unwrap();
        let n = rng.random_range(50..500u64);
        let m = rng.random_range(50..500u64);
        let k = rng.random_range(1..=16u64);
        let eps = rng.random_range(1e-3..0.1);
        let d = disjoint_condition(&q, n, m, k, eps, &params).unwrap();
        let h = hybrid_condition(&q, n, m, k, 1, eps, &params).unwrap();
        cond_gap = cond_gap.max((d.slack - h.slack).abs());
    }

    let spec = GaussianMaxSpec::new(2.0, 1.0, 4, 1.0).unwrap();
    let (a, b) = spec.loadings();
    let samples = 1_000_000;
    let mut maxima: Vec<f64> = (0..samples)
        .map(|_| {
            let u: f64 = rng.sample(StandardNormal);
            (0..spec.l)
                .map(|_| a * u + b * rng.sample::<f64, _>(StandardNormal))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    maxima.sort_by(f64::total_cmp);
    let mut quantile_z = 0.0f64;
    for p in [0.01, 0.1, 0.5, 0.9, 0.99] {
        let t = gaussian_max_quantile(&spec, p).unwrap();
        let below = maxima.partition_point(|&x| x <= t) as f64 / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        quantile_z = quantile_z.max((below - p).abs() / se);
    }

    let p_w = Pmf::uniform(2).unwrap();
    let ham = DistortionMatrix::hamming(2).unwrap();
    let mut tilted_gap = 0.0f64;
    let mut rd_gap = 0.0f64;
    for d in [0.0, 0.05, 0.11] {
        let sol = rate_distortion(&p_w, &ham, d, 1e-12).unwrap();
        let j = d_tilted_information(&sol, &p_w, &ham, d);
        tilted_gap = tilted_gap.max((p_w.expect(|w| j[w]) - sol.r_d).abs());
        rd_gap = rd_gap.max((sol.r_d - (1.0 - h2(d))).abs());
    }

    report(
        10,
        "second-order conditions, Gaussian max and R(D)",
        cond_gap < 1e-9 && quantile_z < 3.0 && tilted_gap < 1e-6 && rd_gap < 1e-6,
        t0.elapsed(),
        Duration::from_secs(120),
        format!(
            "cond gap {cond_gap:.1e}, quantile max z {quantile_z:.2}, E[j]-R {tilted_gap:.1e}, R-(1-h2) {rd_gap:.1e}"
        ),
    );
}
