//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints its own PASS/FAIL line.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use qfinkit::harness::{run_case, write_report, CaseKind, RunConfig};
use qfinkit::numerics::{sample_covariance, std_normal_quantile, RandomStream};
use qfinkit::portfolio::{
    bits_from_index, build_cardinality_qubo, qubo_energy, qubo_to_ising, AssetUniverse, QuboProblem,
};
use qfinkit::pricing::{
    exact_amplitude_price, grover_ancilla_probability, mc_price_asian, mlqae_estimate, shot_amplitude_price,
    simulate_path_averages, GbmSpec, PayoffHistogram,
};
use qfinkit::qaoa::{qaoa_expectation, qaoa_state, QaoaParams};
use qfinkit::qml::{
    gram_matrix, parameter_shift_gradient, qnn_expectation, qnn_forward, qnn_train, svm_train, FeatureMapSpec,
    QnnConfig, QnnModel,
};
use qfinkit::risk::{
    build_loss_grid, cvar_from_tail_amplitudes, grid_risk_measures, historical_var_cvar, parametric_normal_var_cvar,
    pca_loading, proxy_exponential, simulate_correlated_returns, LossSample, StressSystem,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

fn random_qubo(n: usize, rng: &mut RandomStream) -> QuboProblem {
    let mut q = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.uniform_range(-2.0, 2.0);
            q[(i, j)] = v;
            q[(j, i)] = v;
        }
    }
    QuboProblem::new(q, rng.uniform_range(-1.0, 1.0)).expect("symmetric")
}

fn argmin_set(e: &[f64]) -> Vec<usize> {
    let m = e.iter().copied().fold(f64::INFINITY, f64::min);
    (0..e.len()).filter(|&i| e[i] <= m + 1e-9).collect()
}

fn c1_qubo_ising() -> Check {
    let t = Instant::now();
    let mut rng = RandomStream::new(101, 0);
    let mut worst = 0.0f64;
    for inst in 0..100 {
        let q = random_qubo(8, &mut rng);
        let ising = qubo_to_ising(&q);
        let mut eq = Vec::with_capacity(256);
        let mut ei = Vec::with_capacity(256);
        for x in 0..256usize {
            let z = bits_from_index(x, 8);
            // explicit double sum
            let mut direct = q.offset();
            for i in 0..8 {
                for j in 0..8 {
                    if z[i] && z[j] {
                        direct += q.matrix()[(i, j)];
                    }
                }
            }
            let spins: Vec<i8> = z.iter().map(|&b| if b { 1 } else { -1 }).collect();
            let a = qubo_energy(&q, &z).map_err(|e| e.to_string())?;
            let b = ising.energy(&spins).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs()).max((a - direct).abs());
            eq.push(a);
            ei.push(b);
        }
        ensure(
            argmin_set(&eq) == argmin_set(&ei),
            format!("instance {inst}: argmin sets differ"),
        )?;
    }
    ensure(worst <= 1e-10, format!("max energy gap {worst:e}"))?;
    within(t.elapsed(), Duration::from_secs(5), "100 instances")?;
    Ok(format!("100 instances x 256 states, max gap {worst:.1e}"))
}

fn c2_penalised_objective() -> Check {
    let mut rng = RandomStream::new(202, 0);
    let mut worst = 0.0f64;
    for n in 1..=10 {
        for _ in 0..3 {
            let mu = DVector::from_fn(n, |_, _| rng.uniform_range(-0.2, 0.4));
            let m = DMatrix::from_fn(n, n, |_, _| rng.normal() * 0.2);
            let sigma = &m * m.transpose();
            let tickers = (0..n).map(|i| format!("A{i}")).collect();
            let u = AssetUniverse::new(tickers, mu.clone(), sigma.clone()).map_err(|e| e.to_string())?;
            let lambda = rng.uniform_range(0.0, 10.0);
            let penalty = rng.uniform_range(0.5, 20.0);
            let k = 1 + rng.index(n);
            let q = build_cardinality_qubo(&u, lambda, penalty, k).map_err(|e| e.to_string())?;
            for x in 0..1usize << n {
                let z = bits_from_index(x, n);
                let xv = DVector::from_fn(n, |i, _| if z[i] { 1.0 } else { 0.0 });
                let count = z.iter().filter(|&&b| b).count() as f64;
                let want = lambda * (xv.transpose() * &sigma * &xv)[(0, 0)] - mu.dot(&xv)
                    + penalty * (count - k as f64).powi(2);
                let got = qubo_energy(&q, &z).map_err(|e| e.to_string())?;
                worst = worst.max((got - want).abs());
            }
        }
    }
    ensure(worst <= 1e-10, format!("max gap {worst:e}"))?;
    Ok(format!("n = 1..10, all assignments, max gap {worst:.1e}"))
}

fn c3_qaoa_correctness() -> Check {
    let mut rng = RandomStream::new(303, 0);
    let (mut worst, mut worst0) = (0.0f64, 0.0f64);
    for n in 1..=6 {
        for _ in 0..5 {
            let diag: Vec<f64> = (0..1 << n).map(|_| rng.uniform_range(-3.0, 3.0)).collect();
            let p = 1 + rng.index(3);
            let g: Vec<f64> = (0..p).map(|_| rng.uniform_range(0.0, std::f64::consts::TAU)).collect();
            let b: Vec<f64> = (0..p).map(|_| rng.uniform_range(0.0, std::f64::consts::PI)).collect();
            let params = QaoaParams::new(g, b).map_err(|e| e.to_string())?;
            let dense = common::qaoa_dense(&diag, params.gammas(), params.betas());
            let brute = common::diag_expectation(&dense, &diag);
            let sv = qaoa_expectation(&params, &diag).map_err(|e| e.to_string())?;
            let state = qaoa_state(&params, &diag).map_err(|e| e.to_string())?;
            worst = worst
                .max((sv - brute).abs())
                .max(common::max_diff(&common::to_cvec(state.amplitudes()), &dense));
            let mean = diag.iter().sum::<f64>() / diag.len() as f64;
            let e0 = qaoa_expectation(&QaoaParams::empty(), &diag).map_err(|e| e.to_string())?;
            worst0 = worst0.max((e0 - mean).abs());
        }
    }
    ensure(worst <= 1e-10, format!("statevector vs brute force {worst:e}"))?;
    ensure(worst0 <= 1e-12, format!("p=0 vs mean energy {worst0:e}"))?;
    Ok(format!("n <= 6: gap {worst:.1e}, p=0 gap {worst0:.1e}"))
}

fn bundled_data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn c4_qaoa_quality() -> Check {
    let t = Instant::now();
    let mut hits = 0;
    let mut ranks = Vec::new();
    for seed in 1..=20u64 {
        let cfg = RunConfig {
            case: CaseKind::Portfolio,
            seed,
            data_dir: Some(bundled_data()),
            risk_aversion: 8.0,
            penalty: 15.0,
            cardinality: 3,
            qaoa_depth: 2,
            qaoa_restarts: 8,
            ..RunConfig::default()
        };
        let bundle = run_case(&cfg).map_err(|e| e.to_string())?;
        let rows = &bundle.report("portfolio.csv").ok_or("no portfolio report")?.rows;
        ensure(
            rows.iter().filter(|r| r[5] == "classical-exact").count() == 20,
            "expected 20 enumerated rows",
        )?;
        let q = rows.iter().find(|r| r[5].starts_with("qaoa")).ok_or("no QAOA row")?;
        let rank: Option<usize> = if q[5] == "qaoa" { q[0].parse().ok() } else { None };
        if rank.is_some_and(|r| r <= 3) {
            hits += 1;
        }
        ranks.push(rank.map_or("NA".to_string(), |r| r.to_string()));
    }
    ensure(hits >= 16, format!("top-3 in {hits}/20 seeds, ranks {ranks:?}"))?;
    within(t.elapsed(), Duration::from_secs(60), "20 seeds")?;
    Ok(format!("top-3 in {hits}/20 seeds in {:.2?}", t.elapsed()))
}

fn random_histogram(rng: &mut RandomStream, max_exp: usize) -> PayoffHistogram {
    let bins = 1usize << (1 + rng.index(max_exp));
    let raw: Vec<f64> = (0..bins).map(|_| rng.uniform()).collect();
    let total: f64 = raw.iter().sum();
    let probs: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let normalized: Vec<f64> = (0..bins).map(|_| rng.uniform()).collect();
    PayoffHistogram {
        centers: (0..bins).map(|j| j as f64).collect(),
        probs,
        bound: 1.0,
        normalized,
        bin_width: 1.0,
        strike: 0.0,
    }
}

fn c5_grover_rotation() -> Check {
    let mut rng = RandomStream::new(505, 0);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let h = random_histogram(&mut rng, 6);
        let a: f64 = h.probs.iter().zip(&h.normalized).map(|(p, f)| p * f).sum();
        let theta = a.sqrt().asin();
        for k in 0..=10 {
            let sim = grover_ancilla_probability(&h, k).map_err(|e| e.to_string())?;
            worst = worst.max((sim - ((2 * k + 1) as f64 * theta).sin().powi(2)).abs());
        }
    }
    ensure(worst <= 1e-9, format!("max gap {worst:e}"))?;
    Ok(format!("200 histograms, k <= 10, max gap {worst:.1e}"))
}

fn c6_pricing_identities() -> Check {
    let spec = GbmSpec {
        s0: 100.0,
        rate: 0.05,
        sigma: 0.2,
        maturity: 1.0,
        monitoring_dates: 3,
        strike: 100.0,
    };
    let rng = RandomStream::new(606, 0);
    let avgs = simulate_path_averages(&spec, 50_000, &rng.substream(0)).map_err(|e| e.to_string())?;
    let h = PayoffHistogram::build(&avgs, &spec, 7).map_err(|e| e.to_string())?;
    let (exact, _) = exact_amplitude_price(&h, &spec).map_err(|e| e.to_string())?;
    let bound = h.centers.iter().map(|c| (c - spec.strike).max(0.0)).fold(0.0, f64::max);
    let direct: f64 = (-spec.rate * spec.maturity).exp()
        * bound
        * h.probs
            .iter()
            .zip(&h.centers)
            .map(|(p, c)| p * (c - spec.strike).max(0.0) / bound)
            .sum::<f64>();
    let gap = (exact - direct).abs();
    ensure(gap <= 1e-12, format!("exact price gap {gap:e}"))?;

    let flat = GbmSpec { sigma: 0.0, ..spec };
    let mc = mc_price_asian(&flat, 1000, &rng.substream(1)).map_err(|e| e.to_string())?;
    let avgs0 = simulate_path_averages(&flat, 1000, &rng.substream(2)).map_err(|e| e.to_string())?;
    let h0 = PayoffHistogram::build(&avgs0, &flat, 3).map_err(|e| e.to_string())?;
    let (ex0, _) = exact_amplitude_price(&h0, &flat).map_err(|e| e.to_string())?;
    let (sh0, _) = shot_amplitude_price(&h0, &flat, 500, &mut rng.substream(3)).map_err(|e| e.to_string())?;
    let spread = (mc.price - ex0).abs().max((ex0 - sh0).abs());
    ensure(spread <= 1e-9, format!("sigma=0 prices disagree by {spread:e}"))?;

    let a = h.target_amplitude();
    let shots = 1000u64;
    let sd = (a * (1.0 - a) / shots as f64).sqrt();
    let mut inside = 0;
    for run in 0..1000u64 {
        let (_, est) =
            shot_amplitude_price(&h, &spec, shots, &mut rng.substream(10_000 + run)).map_err(|e| e.to_string())?;
        if (est.a_hat - a).abs() <= 4.0 * sd {
            inside += 1;
        }
    }
    ensure(inside >= 990, format!("only {inside}/1000 shot runs within 4 sigma"))?;
    Ok(format!(
        "exact gap {gap:.1e}, sigma=0 spread {spread:.1e}, {inside}/1000 within 4 sigma"
    ))
}

fn c7_mlqae() -> Check {
    let t = Instant::now();
    let root = RandomStream::new(707, 0);
    let schedule = [0usize, 1, 2, 4, 8];
    let per_level = 2000u64;
    let mut close = 0;
    let mut err_ml = Vec::new();
    let mut err_flat = Vec::new();
    for trial in 0..100u64 {
        let h = random_histogram(&mut root.substream(trial), 6);
        let a = h.target_amplitude();
        let s = root.substream(1_000 + trial);
        let ml = mlqae_estimate(&h, &schedule, per_level, &s.substream(0)).map_err(|e| e.to_string())?;
        let flat =
            mlqae_estimate(&h, &[0], per_level * schedule.len() as u64, &s.substream(1)).map_err(|e| e.to_string())?;
        if (ml.a_hat - a).abs() <= 0.01 {
            close += 1;
        }
        err_ml.push((ml.a_hat - a).powi(2));
        err_flat.push((flat.a_hat - a).powi(2));
    }
    ensure(close >= 90, format!("|a_hat - a| <= 0.01 in only {close}/100 trials"))?;
    let rmse = |e: &[f64]| (e.iter().sum::<f64>() / e.len() as f64).sqrt();
    let (r_ml, r_flat) = (rmse(&err_ml), rmse(&err_flat));
    // percentile bootstrap of the RMSE difference
    let mut boot = RandomStream::new(708, 0);
    let mut diffs: Vec<f64> = (0..2000)
        .map(|_| {
            let idx: Vec<usize> = (0..100).map(|_| boot.index(100)).collect();
            let a: Vec<f64> = idx.iter().map(|&i| err_ml[i]).collect();
            let b: Vec<f64> = idx.iter().map(|&i| err_flat[i]).collect();
            rmse(&a) - rmse(&b)
        })
        .collect();
    diffs.sort_by(f64::total_cmp);
    let upper = diffs[(0.975 * diffs.len() as f64) as usize - 1];
    ensure(
        upper < 0.0,
        format!("RMSE {r_ml:e} vs {r_flat:e}, 97.5% bound of difference {upper:e}"),
    )?;
    within(t.elapsed(), Duration::from_secs(120), "100 trials")?;
    Ok(format!(
        "{close}/100 within 0.01; RMSE {r_ml:.2e} vs {r_flat:.2e} (upper 95% bound on difference {upper:.1e})"
    ))
}

fn random_losses(rng: &mut RandomStream) -> Vec<f64> {
    let n = 50 + rng.index(1950);
    let kind = rng.index(4);
    let shift = rng.uniform_range(-0.05, 0.02);
    (0..n)
        .map(|_| {
            shift
                + match kind {
                    0 => 0.02 * rng.normal(),
                    1 => 0.01 * rng.normal() / rng.uniform().max(0.05).sqrt(),
                    2 => (0.5 * rng.normal()).exp() * 0.01,
                    _ => rng.uniform_range(-0.03, 0.03),
                }
        })
        .collect()
}

/// `(1 / (1 - alpha)) int_VaR^inf x phi((x - mu) / sigma) / sigma dx` by Simpson.
fn normal_tail_mean(mu: f64, sigma: f64, alpha: f64) -> f64 {
    let var = mu + sigma * std_normal_quantile(alpha).expect("valid alpha");
    let hi = mu + 40.0 * sigma;
    let n = 200_000;
    let h = (hi - var) / n as f64;
    let f = |x: f64| {
        let z = (x - mu) / sigma;
        x * (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
    };
    let mut s = f(var) + f(hi);
    for i in 1..n {
        s += f(var + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0 / (1.0 - alpha)
}

fn c8_risk_oracles() -> Check {
    let mut rng = RandomStream::new(808, 0);
    let (mut worst_var, mut worst_cvar) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let s = LossSample {
            losses: random_losses(&mut rng),
            origin: format!("sample-{i}"),
        };
        let alpha = [0.9, 0.95, 0.99][i % 3];
        let g = build_loss_grid(&s, 128).map_err(|e| e.to_string())?;
        let hist = historical_var_cvar(&s, alpha).map_err(|e| e.to_string())?;
        let grid = grid_risk_measures(&g, alpha).map_err(|e| e.to_string())?;
        let gap = (grid.var - hist.var).abs();
        ensure(
            gap <= g.bin_width * (1.0 + 1e-9),
            format!("sample {i}: VaR gap {gap:e} > bin {:e}", g.bin_width),
        )?;
        worst_var = worst_var.max(gap / g.bin_width);
        let (num, den) = g
            .centers
            .iter()
            .zip(&g.probs)
            .filter(|(c, _)| **c >= grid.var)
            .fold((0.0, 0.0), |(n, d), (c, p)| (n + c * p, d + p));
        let amp = cvar_from_tail_amplitudes(&g, grid.var).map_err(|e| e.to_string())?;
        worst_cvar = worst_cvar.max((amp - num / den).abs());
    }
    ensure(worst_cvar <= 1e-12, format!("amplitude CVaR gap {worst_cvar:e}"))?;
    let mut worst_param = 0.0f64;
    for (mu, sigma) in [(0.0, 1.0), (0.001, 0.02), (-0.5, 2.5)] {
        for alpha in [0.9, 0.95, 0.99] {
            let r = parametric_normal_var_cvar(mu, sigma, alpha).map_err(|e| e.to_string())?;
            worst_param = worst_param.max((r.cvar - normal_tail_mean(mu, sigma, alpha)).abs());
        }
    }
    ensure(
        worst_param <= 1e-6,
        format!("parametric CVaR vs quadrature {worst_param:e}"),
    )?;
    Ok(format!(
        "VaR gap <= {worst_var:.2} bins, amplitude CVaR gap {worst_cvar:.1e}, parametric gap {worst_param:.1e}"
    ))
}

fn c9_scenarios() -> Check {
    let mut rng = RandomStream::new(909, 0);
    let mut worst = 0.0f64;
    for i in 0..50 {
        let d = 2 + rng.index(7);
        let r = if i % 5 == 0 { d - 1 } else { d };
        let m = DMatrix::from_fn(d, r, |_, _| rng.normal() * 0.1);
        let sigma = &m * m.transpose();
        let mu = DVector::from_fn(d, |_, _| rng.normal() * 0.01);
        let f = pca_loading(&mu, &sigma).map_err(|e| e.to_string())?;
        worst = worst.max((&f.loading * f.loading.transpose() - &sigma).amax());
    }
    ensure(worst <= 1e-8, format!("L L' gap {worst:e}"))?;
    let mut worst_rel = 0.0f64;
    for i in 0..3 {
        let d = 3 + i;
        let m = DMatrix::from_fn(d, d, |_, _| rng.normal() * 0.02);
        let sigma = &m * m.transpose() + DMatrix::identity(d, d) * 1e-4;
        let f = pca_loading(&DVector::zeros(d), &sigma).map_err(|e| e.to_string())?;
        let draws = simulate_correlated_returns(&f, 200_000, &RandomStream::new(910 + i as u64, 0));
        let (_, cov) = sample_covariance(&draws);
        worst_rel = worst_rel.max((&cov - &sigma).norm() / sigma.norm());
    }
    ensure(
        worst_rel <= 0.05,
        format!("sample covariance off by {:.2}%", 100.0 * worst_rel),
    )?;
    Ok(format!(
        "L L' gap {worst:.1e}, covariance within {:.2}%",
        100.0 * worst_rel
    ))
}

/// Scaling and squaring with a 30-term Taylor core.
fn expm_oracle(m: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = m.abs().row_sum().max();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = m / 2f64.powi(s);
    let n = m.nrows();
    let mut term = DMatrix::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn c10_stress() -> Check {
    let mut rng = RandomStream::new(1010, 0);
    let (mut sym_gap, mut exp_gap, mut semi_gap) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let d = 1 + rng.index(6);
        let b = DMatrix::from_fn(d, d, |_, _| rng.normal() * 0.5);
        let sym = (&b + b.transpose()) * 0.5;
        sym_gap = sym_gap.max((StressSystem::new(sym.clone()).map_err(|e| e.to_string())?.h_tilde - sym).amax());

        let sys = StressSystem::new(b).map_err(|e| e.to_string())?;
        let tau = rng.uniform_range(0.0, 2.0);
        let e = proxy_exponential(&sys, tau).map_err(|e| e.to_string())?;
        exp_gap = exp_gap.max((&e - expm_oracle(&(&sys.h_tilde * tau))).amax());
        let (t1, t2) = (rng.uniform_range(0.0, 1.0), rng.uniform_range(0.0, 1.0));
        let lhs = proxy_exponential(&sys, t1).map_err(|e| e.to_string())?
            * proxy_exponential(&sys, t2).map_err(|e| e.to_string())?;
        let rhs = proxy_exponential(&sys, t1 + t2).map_err(|e| e.to_string())?;
        semi_gap = semi_gap.max((lhs - rhs).amax());
    }
    ensure(sym_gap <= 1e-14, format!("proxy of symmetric A differs by {sym_gap:e}"))?;
    ensure(
        exp_gap <= 1e-8,
        format!("exponential vs scaling-and-squaring {exp_gap:e}"),
    )?;
    ensure(semi_gap <= 1e-9, format!("semigroup gap {semi_gap:e}"))?;
    Ok(format!(
        "proxy {sym_gap:.1e}, expm {exp_gap:.1e}, semigroup {semi_gap:.1e}"
    ))
}

fn xor_rows(rng: &mut RandomStream) -> (Vec<Vec<f64>>, Vec<u8>) {
    let h = std::f64::consts::FRAC_PI_2;
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for i in 0..40 {
        let sx = if i % 2 == 0 { 1.0 } else { -1.0 };
        let sy = if (i / 2) % 2 == 0 { 1.0 } else { -1.0 };
        rows.push(vec![sx * h + 0.3 * rng.normal(), sy * h + 0.3 * rng.normal()]);
        y.push(u8::from(sx * sy > 0.0));
    }
    (rows, y)
}

fn c11_qml() -> Check {
    let mut rng = RandomStream::new(1111, 0);
    let mut min_eig = f64::INFINITY;
    for _ in 0..50 {
        let n = 5 + rng.index(26);
        let width = 1 + rng.index(5);
        let spec = FeatureMapSpec {
            n_qubits: 1 + rng.index(5),
            encoding_layers: 1 + rng.index(2),
        };
        let x = DMatrix::from_fn(n, width, |_, _| {
            rng.uniform_range(-std::f64::consts::PI, std::f64::consts::PI)
        });
        let g = gram_matrix(&x, &spec).map_err(|e| e.to_string())?.entries;
        ensure((&g - g.transpose()).amax() <= 1e-12, "Gram matrix not symmetric")?;
        ensure(
            g.diagonal().iter().all(|d| (d - 1.0).abs() <= 1e-12),
            "Gram diagonal not 1",
        )?;
        min_eig = min_eig.min(g.symmetric_eigenvalues().min());
    }
    ensure(min_eig >= -1e-8, format!("min Gram eigenvalue {min_eig:e}"))?;

    let mut grad_gap = 0.0f64;
    for _ in 0..20 {
        let spec = FeatureMapSpec {
            n_qubits: 1 + rng.index(4),
            encoding_layers: 1,
        };
        let model = QnnModel::random(1 + rng.index(3), &spec, &mut rng);
        let x: Vec<f64> = (0..spec.n_qubits).map(|_| rng.uniform_range(-3.0, 3.0)).collect();
        let grad = parameter_shift_gradient(&x, &model, &spec).map_err(|e| e.to_string())?;
        let h = 1e-5;
        for (k, g) in grad.iter().enumerate() {
            let (mut up, mut dn) = (model.clone(), model.clone());
            up.theta[k] += h;
            dn.theta[k] -= h;
            let fd = (qnn_expectation(&x, &up, &spec).map_err(|e| e.to_string())?
                - qnn_expectation(&x, &dn, &spec).map_err(|e| e.to_string())?)
                / (2.0 * h);
            grad_gap = grad_gap.max((fd - g).abs());
        }
    }
    ensure(
        grad_gap <= 1e-5,
        format!("parameter shift vs finite difference {grad_gap:e}"),
    )?;

    // two tight clusters, linearly separable in feature space
    let spec = FeatureMapSpec {
        n_qubits: 2,
        encoding_layers: 1,
    };
    let n = 40;
    let x = DMatrix::from_fn(n, 2, |i, _| if i < n / 2 { -1.2 } else { 1.2 } + 0.25 * rng.normal());
    let y: Vec<f64> = (0..n).map(|i| if i < n / 2 { -1.0 } else { 1.0 }).collect();
    let gram = gram_matrix(&x, &spec).map_err(|e| e.to_string())?;
    let model = svm_train(&gram, &y, 10.0).map_err(|e| e.to_string())?;
    let k = &gram.entries;
    let f: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| model.alphas[j] * y[j] * k[(i, j)]).sum::<f64>() + model.bias)
        .collect();
    let mut kkt = 0.0f64;
    for i in 0..n {
        let (a, m) = (model.alphas[i], y[i] * f[i]);
        let v = if a <= 1e-12 {
            (1.0 - m).max(0.0)
        } else if a >= model.c - 1e-12 {
            (m - 1.0).max(0.0)
        } else {
            (m - 1.0).abs()
        };
        kkt = kkt.max(v);
    }
    let balance: f64 = model.alphas.iter().zip(&y).map(|(a, y)| a * y).sum();
    ensure(kkt <= 1e-6, format!("KKT residual {kkt:e}"))?;
    ensure(balance.abs() <= 1e-10, format!("sum alpha y = {balance:e}"))?;
    let acc = (0..n).filter(|&i| f[i].signum() == y[i]).count();
    ensure(acc == n, format!("separable training accuracy {acc}/{n}"))?;

    let (rows, labels) = xor_rows(&mut RandomStream::new(123, 0));
    let cfg = QnnConfig {
        layers: 3,
        epochs: 300,
        learning_rate: 0.5,
    };
    let mut good = 0;
    for seed in 0..10u64 {
        let (model, _) =
            qnn_train(&rows, &labels, &spec, &cfg, &mut RandomStream::new(seed, 0)).map_err(|e| e.to_string())?;
        let mut correct = 0;
        for (x, &t) in rows.iter().zip(&labels) {
            let p = qnn_forward(x, &model, &spec).map_err(|e| e.to_string())?.1;
            correct += usize::from(u8::from(p >= 0.5) == t);
        }
        if correct as f64 / rows.len() as f64 >= 0.95 {
            good += 1;
        }
    }
    ensure(good >= 8, format!("XOR reached 95% in only {good}/10 seeds"))?;
    Ok(format!(
        "min eig {min_eig:.1e}, shift gap {grad_gap:.1e}, KKT {kkt:.1e}, XOR {good}/10 seeds"
    ))
}

const HEADERS: [(&str, &str); 6] = [
    ("portfolio.csv", "rank,selection,objective,return,volatility,method"),
    ("price.csv", "method,price,a_hat,oracle_calls,stderr"),
    ("risk.csv", "method,alpha,var,cvar"),
    ("stress.csv", "factor,initial,shocked,classical,quantum_inspired"),
    ("qml_a.csv", "family,model,auc,accuracy,balanced_accuracy,f1"),
    ("qml_b.csv", "family,model,auc,accuracy,balanced_accuracy,f1"),
];

fn c12_determinism() -> Check {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for case in [
        CaseKind::Portfolio,
        CaseKind::Price,
        CaseKind::Risk,
        CaseKind::QmlA,
        CaseKind::QmlB,
    ] {
        let cfg = RunConfig {
            case,
            seed: 42,
            epochs: 15,
            ..RunConfig::default()
        };
        let mut outputs = Vec::new();
        for run in 0..2 {
            let dir = root.path().join(format!("{}-{run}", case.as_str()));
            let bundle = run_case(&cfg).map_err(|e| e.to_string())?;
            let paths = write_report(&bundle, &dir).map_err(|e| e.to_string())?;
            let contents: Vec<(String, Vec<u8>)> = paths
                .iter()
                .map(|p| {
                    (
                        p.file_name().unwrap().to_string_lossy().into_owned(),
                        std::fs::read(p).unwrap(),
                    )
                })
                .collect();
            outputs.push(contents);
        }
        ensure(
            outputs[0] == outputs[1],
            format!("{} reports differ between runs", case.as_str()),
        )?;
        for (name, bytes) in &outputs[0] {
            let text = std::str::from_utf8(bytes).map_err(|e| e.to_string())?;
            ensure(!text.contains('\r'), format!("{name} has CR line endings"))?;
            if let Some((_, header)) = HEADERS.iter().find(|(f, _)| f == name) {
                let first = text.lines().next().unwrap_or_default();
                ensure(first == *header, format!("{name} header {first:?}"))?;
            }
            files += 1;
        }
    }
    Ok(format!(
        "5 cases run twice, {files} files byte-identical, headers match"
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("QUBO/Ising equivalence", c1_qubo_ising),
        ("penalised-objective identity", c2_penalised_objective),
        ("QAOA correctness", c3_qaoa_correctness),
        ("QAOA quality at desk scale", c4_qaoa_quality),
        ("Grover rotation law", c5_grover_rotation),
        ("pricing identities", c6_pricing_identities),
        ("MLQAE accuracy", c7_mlqae),
        ("risk oracles", c8_risk_oracles),
        ("scenario generation", c9_scenarios),
        ("stress propagation", c10_stress),
        ("QML properties", c11_qml),
        ("determinism and schema", c12_determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{:.2?}]: {detail}", i + 1, t.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{:.2?}]: {detail}", i + 1, t.elapsed());
            }
        }
    }
    let total = start.elapsed();
    println!("acceptance: {}/12 passed in {total:.2?}", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
