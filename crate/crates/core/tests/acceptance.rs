//! Acceptance criteria, one printed PASS/FAIL line each.
//!
//! Runs without the test harness so the lines always print. It fails when the
//! set of failing criteria differs from `KNOWN_SHORTFALLS`, so a regression and
//! an unexpected recovery are both reported.

use std::time::{Duration, Instant};

use orlicz_core::counterexample::{self as cx, CounterexampleParams, DisjointSystem};
use orlicz_core::mc;
use orlicz_core::norms;
use orlicz_core::quad::{self, SeriesVerdict};
use orlicz_core::space::{self, f_half, indicator, MeasureDomain};
use orlicz_core::special::gamma;
use orlicz_core::suite::{self, Format, SuiteConfig};
use orlicz_core::young::{self, DominanceVerdict, PsiGenerator, YoungFunction};

/// Criteria that fail as stated, with the reason.
const KNOWN_SHORTFALLS: &[(u32, &str)] = &[
    (
        14,
        "seed 42: one sample g ≈ 110 among the first 10⁴ puts the running second moment at 10⁴ above the one at 10⁵",
    ),
    (
        15,
        "|g_n|_G at n = 10⁶ is 1.0103e-3 of its n = 1 value: c(10⁶)/c(1) = (ln 4/ln(10⁶+3))³ ≈ 1.0103e-3 > 1e-3",
    ),
];

struct Outcome {
    id: u32,
    pass: bool,
    summary: String,
}

fn prob(alpha: f64, p0: f64) -> DisjointSystem {
    cx::build_system(CounterexampleParams::probability(alpha, p0)).unwrap()
}

fn infinite() -> DisjointSystem {
    cx::build_system(CounterexampleParams::infinite_measure()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn c1_gamma_moments() -> Outcome {
    let f = f_half().without_closed_forms();
    let (worst, took) = timed(|| {
        (1..=20)
            .map(|k| {
                let p = k as f64;
                let got = norms::lp_norm(&f, p, 1e-10).unwrap().value;
                rel(got, gamma(p / 2.0 + 1.0).powf(1.0 / p))
            })
            .fold(0.0, f64::max)
    });
    Outcome {
        id: 1,
        pass: worst <= 1e-8 && took < Duration::from_secs(1),
        summary: format!("worst relative error {worst:.3e} (≤ 1e-8) in {took:?} (< 1 s)"),
    }
}

fn c2_exact_tail() -> Outcome {
    let bare = f_half().without_closed_forms();
    let mut worst = 0.0f64;
    for u in [0.5f64, 1.0, 2.0, 3.0] {
        let want = (-u * u).exp();
        worst = worst.max((space::tail(&bare, u, 1e-15).unwrap() - want).abs());
        worst = worst.max((space::tail(&f_half(), u, 1e-15).unwrap() - want).abs());
    }
    Outcome {
        id: 2,
        pass: worst <= 1e-12,
        summary: format!("worst absolute error {worst:.3e} (≤ 1e-12)"),
    }
}

fn c3_block_norms() -> Outcome {
    let mut worst = 0.0f64;
    for sys in [prob(0.5, 2.0), infinite()] {
        for n in [1u64, 10, 100] {
            let b = sys.block(n).unwrap().without_closed_forms();
            for p in [1.0, 2.0, 4.0] {
                let got = norms::lp_norm(&b, p, 1e-10).unwrap().value;
                worst = worst.max(rel(got, cx::block_lp_exact(&sys, n, p).unwrap()));
            }
        }
    }
    Outcome {
        id: 3,
        pass: worst <= 1e-8,
        summary: format!("worst relative error {worst:.3e} (≤ 1e-8) over both cases"),
    }
}

fn c4_eq13() -> Outcome {
    let sys = infinite();
    let cps = [1_000u64, 10_000, 100_000, 1_000_000];
    let (parts, took) = timed(|| {
        let mut parts = Vec::new();
        for p in [1.0, 2.0] {
            parts.push(cx::verify_eq13(&sys, p, &cps).unwrap());
            let gam = gamma(0.5 * p + 1.0);
            let control = move |x: f64| gam * (x + 3.0).powf(-1.5);
            let r = cx::verify_growth("control", "", &control, &|n| cx::eq13_model(p, n), &cps, cx::GROWTH_RATIO_TOL)
                .unwrap();
            parts.push(r);
        }
        parts
    });
    let main_ok = parts[0].passed() && parts[2].passed();
    let control_fails = !parts[1].passed() && !parts[3].passed();
    Outcome {
        id: 4,
        pass: main_ok && control_fails && took < Duration::from_secs(30),
        summary: format!(
            "p=1 {} (last ratio {} vs model {}), p=2 {} (last ratio {} vs model {}); controls fail: {control_fails}; {took:?} (< 30 s)",
            parts[0].verdict, parts[0].computed, parts[0].oracle, parts[2].verdict, parts[2].computed, parts[2].oracle
        ),
    }
}

fn c5_eq19() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (a, p0) in [(0.5, 2.0), (0.25, 4.0)] {
        let r = cx::verify_eq19(&prob(a, p0), &cx::default_p_schedule(p0, 16)).unwrap();
        let fit = r.fit.clone().unwrap();
        ok &= r.passed();
        notes.push(format!("({a},{p0}): slope {:.4} vs {:.4}, r² {:.6}", fit.slope, -1.0 / p0, fit.r_squared));
    }
    Outcome {
        id: 5,
        pass: ok,
        summary: notes.join("; "),
    }
}

fn c6_eq20() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (a, p0) in [(0.5, 2.0), (0.25, 4.0)] {
        let sys = prob(a, p0);
        let sched = cx::default_p_schedule(p0, 16);
        let exact = cx::verify_eq20(&sys, &sched, None).unwrap();
        let heavy = cx::verify_eq20(&sys, &sched, Some(2.0 / p0)).unwrap();
        let light = cx::verify_eq20(&sys, &sched, Some(0.5 / p0)).unwrap();
        ok &= exact.passed() && !heavy.passed() && !light.passed();
        notes.push(format!(
            "({a},{p0}): max/min {} {}, β=2/p0 {}, β=1/(2p0) {}",
            exact.computed, exact.verdict, heavy.verdict, light.verdict
        ));
    }
    Outcome {
        id: 6,
        pass: ok,
        summary: notes.join("; "),
    }
}

fn c7_eq21() -> Outcome {
    let z = quad::log_space(1e2, 1e4, 21);
    let mut ok = true;
    let mut notes = Vec::new();
    for (a, p0) in [(0.5, 2.0), (0.25, 4.0)] {
        let sys = prob(a, p0);
        let pts: Vec<(f64, f64)> = z.iter().map(|&z| (z, cx::sup_tail(&sys, z, cx::SUP_TAIL_TOL).unwrap())).collect();
        let fit = quad::loglog_fit(&pts).unwrap();
        let slope_ok = (fit.slope + p0).abs() <= 0.03 * p0 && fit.r_squared >= 0.999;
        let contrast = cx::single_block_tail_fit(&sys, 1, &z).unwrap();
        ok &= slope_ok && contrast.r_squared < 0.99;
        let mut note = format!(
            "({a},{p0}): slope {:.5}, r² {:.6}, single block r² {:.3}",
            fit.slope, fit.r_squared, contrast.r_squared
        );
        if a == 0.5 && p0 == 2.0 {
            let constant = fit.intercept.exp();
            ok &= rel(constant, 0.5) <= 0.05;
            note.push_str(&format!(", constant {constant:.6} (0.5 ± 5%)"));
        }
        notes.push(note);
    }
    Outcome {
        id: 7,
        pass: ok,
        summary: notes.join("; "),
    }
}

fn c8_eq22() -> Outcome {
    let eps = cx::default_eps_schedule();
    let main = cx::verify_eq22(2.0, &eps).unwrap();
    let eta = space::power_tail(2.0, 1.0).unwrap();
    let control = cx::verify_log_divergence(
        "control",
        &|e| Ok(quad::integrate(&eta, (e, 0.5), 1e-12)?.value),
        &eps,
        None,
    )
    .unwrap();
    let fit = main.fit.clone().unwrap();
    Outcome {
        id: 8,
        pass: main.passed() && !control.passed(),
        summary: format!(
            "slope {:.4} vs 2√2 = {:.4} (±15%), r² {:.5}; control fails: {}",
            fit.slope,
            2.0 * 2f64.sqrt(),
            fit.r_squared,
            !control.passed()
        ),
    }
}

fn c9_dominance() -> Outcome {
    let u = quad::log_space(1e2, 1e12, 6);
    let lambdas = [1.0, 10.0, 100.0];
    let mut ok = true;
    let mut notes = Vec::new();
    for p0 in [2.0, 4.0] {
        let lt = YoungFunction::log_tempered_power(p0).unwrap();
        let pw = YoungFunction::power(p0).unwrap();
        let a = young::dominance_profile(&lt, &pw, &lambdas, &u).unwrap().verdict;
        let b = young::dominance_profile(&pw, &pw, &lambdas, &u).unwrap().verdict;
        ok &= a == DominanceVerdict::Dominated && b == DominanceVerdict::NotDominated;
        notes.push(format!("p0={p0}: tempered vs power {a:?}, power vs power {b:?}"));
    }
    Outcome {
        id: 9,
        pass: ok,
        summary: notes.join("; "),
    }
}

fn c10_delta2() -> Outcome {
    let lt = YoungFunction::log_tempered_power(2.0).unwrap();
    let d = young::delta2_profile(&lt, &quad::log_space(1.0, 1e8, 9)).unwrap();
    let es = young::delta2_profile(&YoungFunction::exp_square(), &quad::log_space(0.5, 10.0, 20)).unwrap();
    Outcome {
        id: 10,
        pass: d.bounded && d.sup_ratio <= 4.0 && !es.bounded,
        summary: format!(
            "tempered: sup ratio {:.6}, bounded {}; exp_square bounded {}",
            d.sup_ratio, d.bounded, es.bounded
        ),
    }
}

fn c11_luxemburg() -> Outcome {
    let phis = [
        YoungFunction::power(2.0).unwrap(),
        YoungFunction::power(4.0).unwrap(),
        YoungFunction::exp_square(),
    ];
    let mut ident = 0.0f64;
    let mut homog = 0.0f64;
    for phi in &phis {
        for a in [0.01, 0.25, 0.5] {
            let f = indicator(0.0, a, MeasureDomain::unit()).unwrap();
            let want = 1.0 / young::inverse_young(phi, 1.0 / a, 1e-15).unwrap();
            ident = ident.max((norms::luxemburg_norm(&f, phi, 1e-12).unwrap().value - want).abs());
        }
        for f in [indicator(0.0, 0.25, MeasureDomain::unit()).unwrap(), f_half()] {
            let base = norms::luxemburg_norm(&f, phi, 1e-12).unwrap().value;
            for c in [3.0, -0.5, 0.1] {
                let got = norms::luxemburg_norm(&f.scaled(c), phi, 1e-12).unwrap().value;
                homog = homog.max(rel(got, c.abs() * base));
            }
        }
    }
    Outcome {
        id: 11,
        pass: ident <= 1e-10 && homog <= 1e-8,
        summary: format!("indicator identity error {ident:.3e} (≤ 1e-10), homogeneity error {homog:.3e} (≤ 1e-8)"),
    }
}

fn c12_lorentz() -> Outcome {
    let v = |s: f64| s.sqrt();
    let grid: Vec<f64> = (1..=1000).map(|j| j as f64 / 1000.0).collect();
    let mut worst = 0.0f64;
    for f in [indicator(0.0, 0.25, MeasureDomain::unit()).unwrap(), f_half()] {
        let a = norms::lorentz_norm(&f, &v, &grid).unwrap().value;
        let b = norms::lorentz_cells_oracle(&f, &v, 1000).unwrap().value;
        worst = worst.max((a - b).abs());
    }
    Outcome {
        id: 12,
        pass: worst <= 1e-3,
        summary: format!("worst difference {worst:.3e} (≤ 1e-3)"),
    }
}

fn c13_borel_cantelli() -> Outcome {
    let r = cx::borel_cantelli_sum(&infinite(), 1.0).unwrap();
    let pass = r.verdict == SeriesVerdict::Convergent && r.tail_bound < 1e-10 && rel(r.partial_sum, 8.24e-4) <= 5e-3;
    Outcome {
        id: 13,
        pass,
        summary: format!(
            "sum {:.6e} vs 8.24e-4 (±0.5%), {:?}, tail bound {:.2e}",
            r.partial_sum, r.verdict, r.tail_bound
        ),
    }
}

fn c14_monte_carlo() -> Outcome {
    let sys = prob(0.5, 2.0);
    let seed = suite::DEFAULT_SEED;
    let ((tail_ok, sym_ok, plateau_ok, stable_ok, note), took) = timed(|| {
        let batch = mc::sample_sup(&sys, seed, 1_000_000).unwrap();
        let (frac, se) = mc::empirical_tail(&batch.values, 10.0).unwrap();
        let want = cx::sup_tail(&sys, 10.0, cx::SUP_TAIL_TOL).unwrap();
        let tail_ok = (frac - want).abs() <= 3.0 * se;
        let sym = mc::symmetrization_check(&sys, 1, seed, 100_000).unwrap();
        let cps = [10_000, 100_000, 1_000_000];
        let m2 = mc::running_moments(&batch.values, 2.0, &cps).unwrap();
        let m1 = mc::running_moments(&batch.values, 1.0, &cps).unwrap();
        let plateau_ok = m2.windows(2).all(|w| w[1] > w[0]) && m2[2] / m2[1] - 1.0 > 0.01;
        let stable_ok = rel(m1[2], m1[1]) <= 0.01;
        let note = format!(
            "tail {frac:.5} vs {want:.5} ± {:.5}; symmetrization {}; second moments {m2:.4?}; first moments {m1:.5?}",
            3.0 * se,
            sym.verdict
        );
        (tail_ok, sym.passed(), plateau_ok, stable_ok, note)
    });
    Outcome {
        id: 14,
        pass: tail_ok && sym_ok && plateau_ok && stable_ok && took < Duration::from_secs(30),
        summary: format!(
            "{note}; tail {tail_ok}, symmetrization {sym_ok}, no plateau {plateau_ok}, first moment stable {stable_ok}; {took:?} (< 30 s)"
        ),
    }
}

fn c15_continuity() -> Outcome {
    let sys = prob(0.5, 2.0);
    let at100 = cx::block_lp_exact(&sys, 100, 2.0).unwrap();
    let ns: Vec<u64> = (1..=7).map(|k| 10u64.pow(k)).collect();
    let vals: Vec<f64> = ns.iter().map(|&n| cx::block_lp_exact(&sys, n, 2.0).unwrap()).collect();
    let monotone = vals.windows(2).all(|w| w[1] < w[0]);
    let inf = infinite();
    let c6 = inf.c(1_000_000);
    let grid: Vec<f64> = (0..=20).map(|k| 2f64.powf(k as f64 * 0.25)).collect();
    let psi = PsiGenerator::sqrt();
    let g1 = norms::gls_norm(&inf.block(1).unwrap(), &psi, &grid).unwrap().value;
    let g6 = norms::gls_norm(&inf.block(1_000_000).unwrap(), &psi, &grid).unwrap().value;
    let ratio = g6 / g1;
    let pass = rel(at100, 0.05) <= 0.05 && monotone && rel(c6, 3.79e-4) <= 0.01 && ratio < 1e-3;
    Outcome {
        id: 15,
        pass,
        summary: format!(
            "|g_100|_2 = {at100:.6} (0.05 ± 5%), monotone from n = 10: {monotone}; c(10⁶) = {c6:.4e}; GLS ratio n=10⁶ vs n=1: {ratio:.5e} (< 1e-3)"
        ),
    }
}

fn c16_determinism() -> Outcome {
    let c = SuiteConfig::default();
    let a = suite::render(&suite::run_suite(&c).unwrap(), Format::Json).unwrap();
    let b = suite::render(&suite::run_suite(&c).unwrap(), Format::Json).unwrap();
    Outcome {
        id: 16,
        pass: a == b,
        summary: format!("two default runs, {} and {} bytes, identical: {}", a.len(), b.len(), a == b),
    }
}

fn main() {
    let runs: Vec<fn() -> Outcome> = vec![
        c1_gamma_moments,
        c2_exact_tail,
        c3_block_norms,
        c4_eq13,
        c5_eq19,
        c6_eq20,
        c7_eq21,
        c8_eq22,
        c9_dominance,
        c10_delta2,
        c11_luxemburg,
        c12_lorentz,
        c13_borel_cantelli,
        c14_monte_carlo,
        c15_continuity,
        c16_determinism,
    ];
    let mut failed = Vec::new();
    for run in runs {
        let o = run();
        println!("criterion {:>2}: {} {}", o.id, if o.pass { "PASS" } else { "FAIL" }, o.summary);
        if !o.pass {
            failed.push(o.id);
        }
    }
    for (id, why) in KNOWN_SHORTFALLS {
        println!("known shortfall {id}: {why}");
    }
    let known: Vec<u32> = KNOWN_SHORTFALLS.iter().map(|k| k.0).collect();
    if failed != known {
        eprintln!("failing criteria {failed:?} differ from the known shortfalls {known:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of 16 pass, shortfalls as recorded", 16 - failed.len());
}
