//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p photon-certify --test acceptance`.

use std::f64::consts::E;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use photon_certify::formats::CountsFile;
use photon_certify::json::to_json;
use photon_certify::tsv::write_timetags;
use photon_certify_core::benchmark::{
    fn_hn_gn, multimode_envelope, p1_hat, p1_hat_star, ApparatusBounds,
};
use photon_certify_core::detection::{
    click_probabilities, click_probabilities_multimode, effective_params, sample_counts,
    ApparatusParams, ClickCounts,
};
use photon_certify_core::state::{max_loss_boosted_p1, random_state};
use photon_certify_core::stats::{p_value_wigner, q_alpha, q_alpha_star, q_alpha_tilde};
use photon_certify_core::wigner::{negativity_lower_bound, negativity_oracle};
use photon_certify_core::{
    Channel, IngestConfig, MultimodeProductState, PhotonNumberDistribution as State, TimeTagEvent,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn f(p1: f64) -> f64 {
    negativity_lower_bound(p1).unwrap().value
}

fn f_at_one() -> f64 {
    9.0 / (4.0 * E.sqrt()) - 1.0
}

fn within(label: &str, got: f64, want: f64, tol: f64) -> Outcome {
    if (got - want).abs() <= tol {
        Ok(format!("{label} = {got:.12} (want {want:.12} ± {tol:e})"))
    } else {
        Err(format!("{label} = {got:.12}, want {want:.12} ± {tol:e}"))
    }
}

fn timed(limit: Duration, run: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let result = run();
    let elapsed = start.elapsed();
    let detail = result?;
    if elapsed <= limit {
        Ok(format!("{detail}; {elapsed:.2?}"))
    } else {
        Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn violations(label: &str, count: usize, total: usize) -> Outcome {
    if count == 0 {
        Ok(format!("{label}: 0 of {total} violations"))
    } else {
        Err(format!("{label}: {count} of {total} violations"))
    }
}

/// Random state on a random support size, a quarter of them sparse.
fn any_state(rng: &mut ChaCha8Rng) -> State {
    let n_max = rng.random_range(0..=24);
    let s = random_state(rng.random(), n_max);
    if rng.random_bool(0.25) {
        let kept: Vec<f64> = s
            .probs()
            .iter()
            .map(|&p| if rng.random_bool(0.5) { p } else { 0.0 })
            .collect();
        let total: f64 = kept.iter().sum();
        if total > 0.0 {
            return State::new(kept.iter().map(|p| p / total).collect()).unwrap();
        }
    }
    s
}

fn any_apparatus(rng: &mut ChaCha8Rng) -> ApparatusParams {
    ApparatusParams::new(
        rng.random_range(0.0..=1.0),
        rng.random_range(0.01..=1.0),
        rng.random_range(0.01..=1.0),
    )
    .unwrap()
}

fn c1_f_at_one() -> Outcome {
    timed(Duration::from_millis(1), || {
        within("F(1)", f(1.0), f_at_one(), 1e-12)
    })
}

fn c2_table_values() -> Outcome {
    let mut lines = Vec::new();
    for (p1, want) in [(0.554, 0.006), (0.566, 0.009), (0.677, 0.058)] {
        lines.push(within(&format!("F({p1})"), f(p1), want, 5e-4)?);
    }
    for p1 in [0.453, 0.459] {
        if f(p1) != 0.0 {
            return Err(format!("F({p1}) = {} is not exactly 0", f(p1)));
        }
    }
    Ok(format!("{}; F(0.453) = F(0.459) = 0", lines.join("; ")))
}

fn c3_oracle_single_photon() -> Outcome {
    timed(Duration::from_secs(1), || {
        let oracle = negativity_oracle(&State::fock(1)).map_err(|e| e.to_string())?;
        within("N_W(|1>)", oracle, f_at_one(), 1e-6)
    })
}

fn c4_soundness() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut bad = 0;
        for _ in 0..2000 {
            let s = any_state(&mut rng);
            let a = any_apparatus(&mut rng);
            let eta = effective_params(&a).unwrap().eta;
            let truth = s.apply_loss(eta).unwrap().single_photon_weight();
            if p1_hat(&click_probabilities(&s, &a)) > truth + 1e-10 {
                bad += 1;
            }
        }
        violations("P1hat <= P1(degraded)", bad, 2000)
    })
}

fn c5_tightness() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=10 {
        let eta = k as f64 / 10.0;
        let s = State::fock(1).apply_loss(eta).unwrap();
        worst =
            worst.max((p1_hat(&click_probabilities(&s, &ApparatusParams::ideal())) - eta).abs());
    }
    if worst <= 1e-12 {
        Ok(format!("max |P1hat - eta| = {worst:e}"))
    } else {
        Err(format!("max |P1hat - eta| = {worst:e} > 1e-12"))
    }
}

fn c6_apparatus_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut bad = 0;
    let mut worst = (0.0, String::new());
    for _ in 0..2000 {
        let s = any_state(&mut rng);
        let t_hat: f64 = rng.random_range(0.3..0.9);
        let r_hat = (1.0 - t_hat + rng.random_range(0.0..0.1)).min(0.99);
        let bounds = ApparatusBounds::new(
            t_hat,
            r_hat,
            rng.random_range(0.05..=1.0),
            rng.random_range(0.05..=1.0),
        )
        .unwrap();
        let r = rng.random_range(1.0 - t_hat..=r_hat);
        let a = ApparatusParams::with_reflectance(
            1.0 - r,
            r,
            rng.random_range(0.01..=bounds.eta_t_hat),
            rng.random_range(0.01..=bounds.eta_r_hat),
        )
        .unwrap();
        let star = p1_hat_star(&click_probabilities(&s, &a), &bounds).unwrap();
        let excess = star - s.single_photon_weight();
        if excess > 1e-10 {
            bad += 1;
            if excess > worst.0 {
                worst = (excess, format!("{a:?} under {bounds:?}"));
            }
        }
    }
    violations("P1hat* <= P1", bad, 2000)
        .map_err(|e| format!("{e}; worst excess {:.3} at {}", worst.0, worst.1))
}

fn c7_two_photon_ratio() -> Outcome {
    timed(Duration::from_secs(5), || {
        let mut bad = 0;
        for i in 1..=20 {
            for j in 1..=20 {
                // Reachable gains x = tη_T, y = rη_R satisfy x + y ≤ 1.
                let x = i as f64 / 21.0;
                let y = j as f64 / 21.0 * (1.0 - x);
                let a = ApparatusParams::new(x / (x + y), x + y, x + y).unwrap();
                let (f2, _, g2) = fn_hn_gn(2, &a).unwrap();
                bad += (2..=200)
                    .filter(|&n| {
                        let (fn_, _, gn) = fn_hn_gn(n, &a).unwrap();
                        fn_ / gn > f2 / g2 + 1e-12
                    })
                    .count();
            }
        }
        violations("f_n/g_n <= f_2/g_2", bad, 400 * 199)
    })
}

fn c8_envelope() -> Outcome {
    let bad = (1..=999)
        .filter(|&k| {
            let p = k as f64 / 1000.0;
            multimode_envelope(p).unwrap() > 1.0 / 3.0 + 2.0 / 3.0 * p
        })
        .count();
    let line = violations("envelope <= 1/3 + 2P/3", bad, 999)?;
    let limit = within(
        "envelope(1e-9)",
        multimode_envelope(1e-9).unwrap(),
        1.0 / 3.0,
        1e-6,
    )?;
    Ok(format!("{line}; {limit}"))
}

fn c9_loss() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..1000 {
        let p1 = rng.random_range(2.0 / 3.0..=1.0);
        let tail = random_state(rng.random(), rng.random_range(1..=16));
        // Tail layers 0, 2, 3, … carry 1 − P₁.
        let mut probs: Vec<f64> = tail.probs().iter().map(|p| p * (1.0 - p1)).collect();
        probs.insert(1, p1);
        let s = State::new(probs).unwrap();
        let lossy = s.apply_loss(rng.random_range(0.0..=1.0)).unwrap();
        if lossy.single_photon_weight() > s.single_photon_weight() + 1e-10 {
            bad += 1;
        }
    }
    let line = violations("loss monotonicity", bad, 1000)?;
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let p1 = k as f64 / 10.0;
        let s = State::new(vec![0.0, p1, 1.0 - p1]).unwrap();
        let grid = (0..=1000)
            .map(|j| {
                s.apply_loss(j as f64 / 1000.0)
                    .unwrap()
                    .single_photon_weight()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((max_loss_boosted_p1(p1).unwrap() - grid).abs());
    }
    let half = max_loss_boosted_p1(0.5).unwrap();
    let two = max_loss_boosted_p1(0.0).unwrap();
    if worst > 1e-4 || (half - 0.5625).abs() > 1e-12 || (two - 0.5).abs() > 1e-12 {
        return Err(format!(
            "grid gap {worst:e}, boost(0.5) = {half}, boost(|2>) = {two}"
        ));
    }
    Ok(format!(
        "{line}; grid gap {worst:.1e}; boost(0.5) = {half}; boost(|2>) = {two}"
    ))
}

fn coverage(
    label: &str,
    p: &photon_certify_core::ClickProbabilities,
    seed: u64,
    truth: f64,
    q: impl Fn(&ClickCounts) -> f64,
) -> Outcome {
    let misses = (0..10_000u64)
        .filter(|&k| q(&sample_counts(p, 10_000, seed << 32 | k).unwrap()) > truth)
        .count();
    let rate = misses as f64 / 10_000.0;
    if rate <= 0.06 {
        Ok(format!("{label} {rate:.4}"))
    } else {
        Err(format!("{label} violation rate {rate:.4} > 0.06"))
    }
}

fn c10_coverage() -> Outcome {
    timed(Duration::from_secs(60), || {
        // Balanced detectors make P1hat_T unbiased for the degraded state.
        let a = ApparatusParams::balanced(0.9);
        let s = State::lossy_single_photon(0.95).unwrap();
        let truth = s
            .apply_loss(effective_params(&a).unwrap().eta)
            .unwrap()
            .single_photon_weight();
        let plain = coverage("q_alpha", &click_probabilities(&s, &a), 1, truth, |c| {
            q_alpha(c, 0.05).unwrap()
        })?;

        let a = ApparatusParams::new(0.5, 0.8, 0.8).unwrap();
        let bounds = ApparatusBounds::exact(&a).unwrap();
        let s = State::fock(1);
        let star = coverage("q_alpha_star", &click_probabilities(&s, &a), 2, 1.0, |c| {
            q_alpha_star(c, 0.05, &bounds).unwrap()
        })?;

        let m = MultimodeProductState::new(vec![
            State::lossy_single_photon(0.9).unwrap(),
            State::lossy_single_photon(0.05).unwrap(),
        ])
        .unwrap();
        let p = click_probabilities_multimode(&m, &ApparatusParams::ideal());
        let tilde = coverage("q_alpha_tilde", &p, 3, m.max_single_photon_weight(), |c| {
            q_alpha_tilde(c, 0.05).unwrap()
        })?;
        Ok(format!("violation rates: {plain}, {star}, {tilde}"))
    })
}

fn c11_p_value() -> Outcome {
    let p = p_value_wigner(&ClickCounts::new(100, 450, 450, 0)).unwrap();
    let want = (-20.0f64).exp();
    if ((p - want) / want).abs() > 1e-12 || (p - 2.061e-9).abs() > 5e-13 {
        return Err(format!("p = {p:e}, want {want:e}"));
    }
    // min X̄ = 0.5, 0, 0.
    for counts in [
        ClickCounts::new(500, 250, 250, 0),
        ClickCounts::new(1000, 0, 0, 0),
        ClickCounts::new(0, 250, 250, 500),
    ] {
        let clamped = p_value_wigner(&counts).unwrap();
        if clamped != 1.0 {
            return Err(format!("{counts:?}: p = {clamped}, want 1"));
        }
    }
    Ok(format!(
        "p = {p:.4e} (exp(-20)); clamped to 1 at min Xbar <= 1/2"
    ))
}

fn c12_f_shape() -> Outcome {
    let grid: Vec<f64> = (0..=1000).map(|k| f(k as f64 / 1000.0)).collect();
    let decreasing = grid.windows(2).filter(|w| w[1] < w[0] - 1e-9).count();
    let concave = grid
        .windows(3)
        .filter(|w| w[0] - 2.0 * w[1] + w[2] < -1e-9)
        .count();
    violations("F monotone and convex", decreasing + concave, 1000 + 999)
}

fn c13_ingest_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let config = IngestConfig {
        window_ps: 1000,
        delay_r_ps: 2500,
        delay_t_ps: -1500,
        dead_ps: 0,
    };
    let mut events = Vec::new();
    let mut expected = ClickCounts::default();
    for k in 0..10_000u64 {
        let herald = 1_000_000 + k * 50_000;
        let (r, t) = (rng.random_bool(0.4), rng.random_bool(0.45));
        events.push(TimeTagEvent::new(herald, Channel::Herald));
        let jitter = |rng: &mut ChaCha8Rng| rng.random_range(-500i64..=500);
        if r {
            let at = herald as i64 + config.delay_r_ps + jitter(&mut rng);
            events.push(TimeTagEvent::new(at as u64, Channel::Reflected));
        } else if rng.random_bool(0.2) {
            // Accidental well outside every window.
            events.push(TimeTagEvent::new(herald + 20_000, Channel::Reflected));
        }
        if t {
            let at = herald as i64 + config.delay_t_ps + jitter(&mut rng);
            events.push(TimeTagEvent::new(at as u64, Channel::Transmitted));
        }
        expected.record(r, t);
    }
    events.sort_by_key(|e| e.timestamp_ps);

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("tags.tsv");
    std::fs::write(&path, write_timetags(&events)).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_photon-certify"))
        .arg("ingest")
        .arg(&path)
        .args(["--window-ps", &config.window_ps.to_string()])
        .args(["--delay-r-ps", &config.delay_r_ps.to_string()])
        .args(["--delay-t-ps", &config.delay_t_ps.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "ingest failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let want = to_json(&CountsFile::from(expected)).map_err(|e| e.to_string())?;
    if out.stdout == want.as_bytes() {
        Ok(format!(
            "{} trials, JSON identical ({} bytes)",
            expected.n(),
            want.len()
        ))
    } else {
        Err(format!(
            "got {}, want {want}",
            String::from_utf8_lossy(&out.stdout)
        ))
    }
}

fn c14_effective_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut bad = 0;
    for _ in 0..500 {
        let s = any_state(&mut rng);
        let mut a = any_apparatus(&mut rng);
        while (a.t - 0.5).abs() < 0.05 || (a.eta_t - a.eta_r).abs() < 0.05 {
            a = any_apparatus(&mut rng);
        }
        let (gt, gr) = (a.t * a.eta_t, a.r * a.eta_r);
        let mut raw = [0.0; 4];
        for (n, &w) in s.probs().iter().enumerate() {
            let n = n as i32;
            let none = (1.0 - gt - gr).powi(n);
            let (t_silent, r_silent) = ((1.0 - gt).powi(n), (1.0 - gr).powi(n));
            raw[0] += w * none;
            raw[1] += w * (t_silent - none);
            raw[2] += w * (r_silent - none);
            raw[3] += w * (1.0 - t_silent - r_silent + none);
        }
        let eff = effective_params(&a).unwrap();
        let ideal = ApparatusParams::with_reflectance(eff.t_eff, eff.r_eff, 1.0, 1.0).unwrap();
        let reduced = click_probabilities(&s.apply_loss(eff.eta).unwrap(), &ideal).as_array();
        if raw.iter().zip(&reduced).any(|(x, y)| (x - y).abs() > 1e-12) {
            bad += 1;
        }
    }
    violations("raw vs effective", bad, 500)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("F(1) closed-form limit", c1_f_at_one),
        ("table consistency of F", c2_table_values),
        ("oracle tightness at |1>", c3_oracle_single_photon),
        ("benchmark soundness sweep", c4_soundness),
        ("benchmark tightness", c5_tightness),
        ("apparatus-dependent soundness", c6_apparatus_soundness),
        ("two-photon ratio maximum", c7_two_photon_ratio),
        ("multimode envelope line", c8_envelope),
        ("loss properties", c9_loss),
        ("coverage Monte Carlo", c10_coverage),
        ("p-value sanity", c11_p_value),
        ("convexity and monotonicity of F", c12_f_shape),
        ("ingest round trip", c13_ingest_round_trip),
        ("effective-parameter identity", c14_effective_identity),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
