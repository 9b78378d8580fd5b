//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use range_enclosure::axis::{axis_segments, q_alpha_coeffs, q_alpha_real_roots, q_beta_coeffs, q_beta_real_roots};
use range_enclosure::boundary::{classify_regions, default_viewport};
use range_enclosure::pseudo::{epsilon0, pseudo_axis_segments, KappaLambda};
use range_enclosure::strip::{
    band_is_empty, candidates_beta, d0_alpha, detect_strip, discriminant_ds_beta, predicted_q_alpha_count,
    predicted_q_beta_count, strip_edges_beta, strip_exists_beta, Family,
};
use range_enclosure::{
    contains, quartic_coeffs, sample_numerical_range, sigma_min_t, solve_quartic, ComplexPoint, ExtReal, MatrixPair,
    OmegaBox, ProblemParams,
};
use rayon::prelude::*;

// Pinned tolerances and budgets.
const SOUNDNESS_BUDGET: Duration = Duration::from_secs(30);
const CERTIFICATE_BUDGET: Duration = Duration::from_secs(60);
const CERTIFICATE_SLACK: f64 = 1e-10;
const GRID_N: usize = 400;
/// Rounding slack for "grid minimum >= eps0", relative to `1 + eps0`.
const GRID_ROUNDING: f64 = 1e-10;
const REFINED_GAP: f64 = 1e-3;
/// Oracle imaginary-part threshold for a real root, times `sqrt(max |coeff|)`.
const REAL_ROOT_TOL: f64 = 1e-7;
/// Sweep points this close to a threshold are skipped.
const THRESHOLD_EXCLUSION: f64 = 1e-3;
const TRANSITION_TOL: f64 = 1e-6;
const BAND_EPS: f64 = 1e-6;
const REGION_AGREEMENT: f64 = 0.999;
const AXIS_RESOLUTION: f64 = 1e-3;
const VIETA_REL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(c: f64, d: f64) -> ProblemParams {
    ProblemParams::new(c, d).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_config(rng: &mut ChaCha8Rng, allow_infinite: bool) -> (ProblemParams, OmegaBox) {
    let c = if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..6.0) };
    let d = rng.random_range(0.2..6.0);
    let a1: f64 = rng.random_range(-20.0..10.0);
    let a2: f64 = rng.random_range(-20.0..10.0);
    let mut alo = ExtReal::Finite(a1.min(a2));
    let mut ahi = ExtReal::Finite(a1.max(a2));
    if allow_infinite && rng.random_bool(0.2) {
        alo = ExtReal::NegInfinity;
    }
    if allow_infinite && rng.random_bool(0.2) {
        ahi = ExtReal::PosInfinity;
    }
    let b1: f64 = if rng.random_bool(0.3) { 0.0 } else { rng.random_range(-1.0..8.0) };
    let b2: f64 = rng.random_range(0.1..8.0);
    let b = OmegaBox::new(alo, ahi, ExtReal::Finite(b1.min(b2)), ExtReal::Finite(b1.max(b2))).unwrap();
    (params(c, d), b)
}

fn enclosure_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut total = 0;
    for k in 0..10 {
        let (p, b) = random_config(&mut rng, true);
        let pair = MatrixPair::diagonal(&b, 16, k).map_err(|e| e.to_string())?;
        let pts = sample_numerical_range(&pair, 10_000, 100 + k, &p).map_err(|e| e.to_string())?;
        let bad: Vec<&ComplexPoint> = pts.par_iter().filter(|&&w| !contains(w, &b, &p).inside).collect();
        ensure(bad.is_empty(), || {
            format!("{} of {} points outside for {p:?} {b:?}, e.g. {:?}", bad.len(), pts.len(), bad[0])
        })?;
        total += pts.len();
    }
    let t = start.elapsed();
    ensure(t < SOUNDNESS_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{total} sampled points inside, {t:.2?}"))
}

fn resolvent_certificate() -> Outcome {
    let start = Instant::now();
    let p = params(4.0, 4.0);
    let b = OmegaBox::finite(-32.0, 4.0, 0.0, 4.0).unwrap();
    let vp = default_viewport(&b, &p);
    let n = 100;
    let exterior: Vec<Complex64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k % n, k / n);
            Complex64::new(
                vp.re_min + (i as f64 + 0.5) * (vp.re_max - vp.re_min) / n as f64,
                vp.im_min + (j as f64 + 0.5) * (vp.im_max - vp.im_min) / n as f64,
            )
        })
        .filter(|&w| !contains(ComplexPoint::Finite(w), &b, &p).inside)
        .collect();
    let eps: Vec<f64> = exterior.iter().map(|&w| epsilon0(w, &b, &p).unwrap().value).collect();
    let mut checks = 0;
    for seed in 0..20 {
        let pair = MatrixPair::diagonal(&b, 32, seed).unwrap();
        for (w, e) in exterior.iter().zip(&eps) {
            let s = sigma_min_t(&pair, *w, &p).map_err(|e| e.to_string())?;
            ensure(s >= e - CERTIFICATE_SLACK, || format!("sigma_min {s} < eps0 {e} at {w} (pair {seed})"))?;
            checks += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < CERTIFICATE_BUDGET, || format!("took {t:?}"))?;
    Ok(format!("{checks} exterior checks over {} grid points, {t:.2?}", exterior.len()))
}

fn grid_points(r: (f64, f64)) -> impl Iterator<Item = f64> {
    (0..GRID_N).map(move |k| r.0 + (r.1 - r.0) * k as f64 / (GRID_N - 1) as f64)
}

/// Minimum of `|t|` over a `GRID_N x GRID_N` grid on `a x b`, plus the
/// sub-box that must contain every minimizer: `|t|` is Lipschitz with
/// `|d alpha| + |kappa| |d beta|`, so a minimizer lies within half a cell of a
/// grid point whose value is at most the grid minimum plus that bound.
fn grid_min(kl: &KappaLambda, a: (f64, f64), b: (f64, f64)) -> (f64, (f64, f64), (f64, f64)) {
    let (ha, hb) = ((a.1 - a.0) / (GRID_N - 1) as f64, (b.1 - b.0) / (GRID_N - 1) as f64);
    let values: Vec<(f64, f64, f64)> =
        grid_points(a).flat_map(|x| grid_points(b).map(move |y| (x, y, kl.residual(x, y)))).collect();
    let best = values.iter().fold(f64::INFINITY, |m, v| m.min(v.2));
    let reach = 0.5 * (ha + kl.kappa.norm() * hb);
    let (mut sa, mut sb) = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
    for &(x, y, v) in &values {
        if v <= best + reach {
            sa = (sa.0.min(x - 0.5 * ha), sa.1.max(x + 0.5 * ha));
            sb = (sb.0.min(y - 0.5 * hb), sb.1.max(y + 0.5 * hb));
        }
    }
    (best, (sa.0.max(a.0), sa.1.min(a.1)), (sb.0.max(b.0), sb.1.min(b.1)))
}

fn eps0_oracle() -> Outcome {
    let p = params(1.0, 1.0);
    let b = OmegaBox::finite(0.0, 1.0, 0.0, 1.0).unwrap();
    let e = epsilon0(Complex64::new(0.0, 1.0), &b, &p).map_err(|e| e.to_string())?;
    ensure(e.value == 1.0, || format!("worked example gives {}", e.value))?;

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<(ProblemParams, OmegaBox, Complex64)> = (0..1000)
        .map(|_| {
            let (p, b) = random_config(&mut rng, false);
            let w = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            (p, b, w)
        })
        .collect();
    let gaps: Vec<Result<f64, String>> = cases
        .par_iter()
        .map(|(p, b, w)| {
            let kl = KappaLambda::new(*w, p).map_err(|e| e.to_string())?;
            let e = epsilon0(*w, b, p).map_err(|e| e.to_string())?.value;
            let (ar, br) = (b.alpha(), b.beta());
            let (coarse, sa, sb) = grid_min(&kl, ar, br);
            ensure(coarse >= e - GRID_ROUNDING * (1.0 + e), || format!("grid {coarse} < eps0 {e} at {w} {b:?}"))?;
            let (fine, _, _) = grid_min(&kl, sa, sb);
            ensure(fine >= e - GRID_ROUNDING * (1.0 + e), || format!("refined {fine} < eps0 {e} at {w} {b:?}"))?;
            ensure(fine - e < REFINED_GAP, || format!("refined gap {} at {w} {b:?} {p:?}", fine - e))?;
            Ok(fine - e)
        })
        .collect();
    let mut worst: f64 = 0.0;
    for g in gaps {
        worst = worst.max(g?);
    }
    Ok(format!("eps0(i) = 1 exactly; 1000 cases, worst refined gap {worst:.3e}"))
}

fn oracle_real_count(a: [f64; 5]) -> usize {
    let scale = a.iter().fold(1.0f64, |m, x| m.max(x.abs())).sqrt();
    common::companion_real_count(&[a[0], a[1], a[2], a[3]], REAL_ROOT_TOL * scale)
}

fn sweep_d() -> impl Iterator<Item = f64> {
    (0..200).map(|k| 0.05 + k as f64 * 0.05)
}

fn root_count_trichotomy() -> Outcome {
    let mut checked = 0;
    for beta in [0.5, 1.0, 4.0, 9.0] {
        for c in [0.0, 1.0] {
            let t = discriminant_ds_beta(beta, &params(c, 1.0)).map_err(|e| e.to_string())?;
            let ts: Vec<f64> = [t.d1, t.d2, t.d3].iter().filter_map(|d| d.finite()).collect();
            for d in sweep_d().filter(|d| ts.iter().all(|x| (d - x).abs() >= THRESHOLD_EXCLUSION)) {
                let p = params(c, d);
                let predicted = predicted_q_beta_count(&t, d);
                let oracle = oracle_real_count(q_beta_coeffs(beta, &p));
                let ours = q_beta_real_roots(beta, &p).map_err(|e| e.to_string())?.count_with_mult();
                ensure(predicted == oracle && ours == oracle, || {
                    format!("q_beta beta={beta} c={c} d={d}: predicted {predicted}, solver {ours}, oracle {oracle}")
                })?;
                checked += 1;
            }
        }
    }
    for alpha in [-3.0, -0.5, 0.5, 1.0, 2.0, 9.0] {
        for c in [0.0, 1.0] {
            let d0 = d0_alpha(alpha, &params(c, 1.0)).map_err(|e| e.to_string())?;
            for d in sweep_d().filter(|d| d0.finite().is_none_or(|x| (d - x).abs() >= THRESHOLD_EXCLUSION)) {
                let p = params(c, d);
                let predicted = predicted_q_alpha_count(alpha, d0, d);
                let oracle = oracle_real_count(q_alpha_coeffs(alpha, &p));
                let ours = q_alpha_real_roots(alpha, &p).map_err(|e| e.to_string())?.count_with_mult();
                ensure(predicted == oracle && ours == oracle, || {
                    format!("q_alpha alpha={alpha} c={c} d={d}: predicted {predicted}, solver {ours}, oracle {oracle}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (parameter, d) sweeps agree"))
}

fn band_checked(beta: f64, p: &ProblemParams) -> Result<(f64, f64), String> {
    let rep = strip_edges_beta(beta, p).map_err(|e| e.to_string())?;
    ensure(rep.exists && rep.s_low < rep.s_high, || format!("no strip for beta={beta} {p:?}"))?;
    ensure(band_is_empty(Family::Beta(beta), rep.s_low, rep.s_high, BAND_EPS, p), || {
        format!("band ({}, {}) not empty for beta={beta} {p:?}", rep.s_low, rep.s_high)
    })?;
    Ok((rep.s_low, rep.s_high))
}

fn strip_thresholds() -> Outcome {
    let detected = |d: f64| {
        let p = params(1.0, d);
        detect_strip(Family::Beta(1.0), &candidates_beta(1.0, &p), &p).is_some()
    };
    for k in 0..120 {
        let d = 0.05 + k as f64 * 0.05;
        if (d - 2.0).abs() < 1e-9 {
            continue;
        }
        let exists = strip_exists_beta(1.0, &params(1.0, d)).map_err(|e| e.to_string())?;
        ensure(exists == (d > 2.0) && detected(d) == (d > 2.0), || format!("existence wrong at d={d}"))?;
    }
    let (mut lo, mut hi) = (1.0, 3.0);
    while hi - lo > 0.1 * TRANSITION_TOL {
        let m = 0.5 * (lo + hi);
        if detected(m) {
            hi = m;
        } else {
            lo = m;
        }
    }
    ensure((hi - 2.0).abs() < TRANSITION_TOL, || format!("transition at {hi}"))?;

    let mut pairs = 0;
    for &(beta, c) in &[(1.0, 1.0), (0.5, 2.0), (5.0, 1.0), (9.0, 1.0), (2.0, 0.0)] {
        let t = discriminant_ds_beta(beta, &params(c, 1.0)).map_err(|e| e.to_string())?;
        let thr = t.d2.to_f64().min(2.0 * f64::sqrt(beta));
        let mut prev: Option<(f64, f64)> = None;
        for k in 1..=8 {
            let d = thr * (1.0 + 0.15 * k as f64);
            let p = params(c, d);
            let (lo, hi) = band_checked(beta, &p)?;
            if let Some((plo, phi)) = prev {
                ensure(lo <= plo + 1e-9 && hi >= phi - 1e-9, || format!("not monotone at beta={beta} c={c} d={d}"))?;
            }
            prev = Some((lo, hi));
            pairs += 1;
        }
    }
    ensure(pairs >= 20, || format!("only {pairs} band pairs"))?;
    Ok(format!("transition at d = {hi:.9}, {pairs} empty bands, edges monotone"))
}

fn region_agreement() -> Outcome {
    let configs = [
        (
            params(6.0, 4.0),
            OmegaBox::new(ExtReal::Finite(1.0), ExtReal::PosInfinity, ExtReal::Finite(0.0), ExtReal::Finite(11.0)),
        ),
        (
            params(6.0, 4.0),
            OmegaBox::new(ExtReal::NegInfinity, ExtReal::PosInfinity, ExtReal::Finite(4.0), ExtReal::Finite(11.0)),
        ),
        (params(4.0, 4.0), OmegaBox::finite(-32.0, 4.0, 0.0, 4.0)),
    ];
    let mut worst: f64 = 1.0;
    for (p, b) in configs {
        let b = b.unwrap();
        let map = classify_regions(&b, &default_viewport(&b, &p), 256, &p);
        ensure(map.agreement_before >= REGION_AGREEMENT, || {
            format!("pre-fallback {} for {b:?}", map.agreement_before)
        })?;
        let mismatches = (0..map.nx * map.ny)
            .filter(|&k| {
                let w = map.center(k % map.nx, k / map.nx);
                map.inside[k] != contains(ComplexPoint::Finite(w), &b, &p).inside
            })
            .count();
        ensure(mismatches == 0, || format!("{mismatches} cells differ after fallback for {b:?}"))?;
        worst = worst.min(map.agreement_before);
    }
    Ok(format!("3 configurations at 256x256, worst pre-fallback agreement {worst:.6}, post-fallback 1"))
}

fn axis_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let h = AXIS_RESOLUTION;
    for trial in 0..20 {
        let (p, b) = random_config(&mut rng, true);
        let s = axis_segments(&b, &p).map_err(|e| format!("{e} for {b:?} {p:?}"))?;
        let ends: Vec<f64> = s
            .segments
            .iter()
            .flat_map(|&(a, c)| [a, c])
            .chain(s.isolated.iter().copied())
            .filter(|x| x.is_finite())
            .collect();
        let n = (30.0 / h).round() as usize;
        let bad = (0..=n)
            .map(|k| -15.0 + k as f64 * h)
            .filter(|&mu| {
                contains(ComplexPoint::new(0.0, mu), &b, &p).inside != s.contains(mu, 0.0)
                    && !ends.iter().any(|e| (e - mu).abs() <= 1.01 * h)
            })
            .count();
        ensure(bad == 0, || format!("trial {trial}: {bad} grid mismatches for {b:?} {p:?}"))?;
        let pseudo = pseudo_axis_segments(&b, 0.0, &p).map_err(|e| e.to_string())?;
        ensure(pseudo == s, || format!("trial {trial}: pseudo axis at eps = 0 differs"))?;
    }
    Ok("20 boxes match the dense axis grid; eps = 0 pseudo structure identical".into())
}

fn symmetry_and_vieta() -> Outcome {
    let violations: usize = (0..100_000u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(k);
            let c = if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..10.0) };
            let p = params(c, rng.random_range(0.01..10.0));
            let alpha: f64 = rng.random_range(-1e3..1e3);
            let beta: f64 = rng.random_range(-1e2..1e2);
            let mut bad = 0;
            let roots: Vec<Complex64> = solve_quartic(&quartic_coeffs(alpha, beta, &p)).unwrap().finite().collect();
            let sum: Complex64 = roots.iter().sum();
            let mag = roots.iter().map(|r| r.norm()).sum::<f64>().max(1.0);
            let prod: Complex64 = roots.iter().product();
            let pmag: f64 = roots.iter().map(|r| r.norm().max(1.0)).product();
            if roots.len() != 4
                || (sum - Complex64::new(0.0, -p.d())).norm() > VIETA_REL * mag
                || (prod - Complex64::new(alpha * c, 0.0)).norm() > VIETA_REL * pmag
                || !roots.iter().all(|r| roots.contains(&Complex64::new(-r.re, r.im)))
            {
                bad += 1;
            }
            let (_, b) = random_config(&mut rng, true);
            let w = Complex64::new(rng.random_range(-6.0..6.0), rng.random_range(-8.0..4.0));
            let m = Complex64::new(-w.re, w.im);
            if contains(ComplexPoint::Finite(w), &b, &p).inside != contains(ComplexPoint::Finite(m), &b, &p).inside {
                bad += 1;
            }
            if let (Ok(x), Ok(y)) = (epsilon0(w, &b, &p), epsilon0(m, &b, &p)) {
                if x.value != y.value {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok("100000 trials of Vieta, root mirror symmetry, membership and eps0 symmetry".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("enclosure soundness", enclosure_soundness),
        ("resolvent-bound certificate", resolvent_certificate),
        ("eps0 oracle equivalence", eps0_oracle),
        ("root-count trichotomy", root_count_trichotomy),
        ("strip thresholds", strip_thresholds),
        ("boundary/membership agreement", region_agreement),
        ("axis-structure equivalence", axis_equivalence),
        ("symmetry and Vieta invariants", symmetry_and_vieta),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
