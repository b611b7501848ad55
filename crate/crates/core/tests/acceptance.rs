//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::SQRT_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use spinchsh_core::families::{
    concurrence_pure, ghz_closed_form, ghz_state, horodecki_parameter, product_state,
    schmidt_closed_form, schmidt_state, two_term_state, werner_closed_form, werner_state,
    SchmidtSpectrum, WernerParameter,
};
use spinchsh_core::random::{random_mixed_state, random_pure_state, seeded_rng};
use spinchsh_core::{
    analyze, chsh_expectation_from_correlation, chsh_expectation_trace, chsh_parameter, max_chsh,
    optimal_settings, spin_correlation_from_coefficients, spin_correlation_matrix,
    spin_correlation_via_theorem2, state_coefficients, verify_theorem1, OracleConfig, QuantumState,
    Route, SpinOperators,
};

const SEED: u64 = 20_240_601;

type Check<'a> = Box<dyn FnOnce() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn pipeline_gamma(state: &QuantumState) -> f64 {
    analyze(state, Route::Definition).expect("pipeline").gamma
}

/// 100 random mixed states per d in 2..=6.
fn mixed_corpus() -> Vec<QuantumState> {
    let mut out = Vec::new();
    for d in 2..=6 {
        let mut rng = seeded_rng(SEED, d as u64);
        for _ in 0..100 {
            out.push(random_mixed_state(d, &mut rng).expect("random state"));
        }
    }
    out
}

fn werner_phis(d: usize) -> [f64; 6] {
    [-1.0, -0.5, 0.0, 1.0 / d as f64, 0.5, 1.0]
}

fn c1_ghz_table() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=10 {
        let want = SQRT_2 / 3.0 * (d as f64 + 1.0) / (d as f64 - 1.0);
        worst = worst.max((pipeline_gamma(&ghz_state(d).unwrap()) - want).abs());
    }
    let g2 = pipeline_gamma(&ghz_state(2).unwrap());
    let g3 = pipeline_gamma(&ghz_state(3).unwrap());
    let spots = (g2 - SQRT_2).abs() <= 1e-9 && (g3 - 2.0 * SQRT_2 / 3.0).abs() <= 1e-9;
    Outcome::check(
        worst <= 1e-9 && spots,
        format!("max |dev| = {worst:.2e}; gamma(d=2) = {g2}, gamma(d=3) = {g3}"),
    )
}

fn c2_werner_sweep() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=8 {
        for phi in werner_phis(d) {
            let p = WernerParameter::new(phi).unwrap();
            let want = SQRT_2 / 3.0 * (d as f64 * phi - 1.0).abs() / ((d as f64 - 1.0).powi(2));
            worst = worst.max((pipeline_gamma(&werner_state(d, p).unwrap()) - want).abs());
        }
    }
    let threshold = 0.5 - 0.75 * SQRT_2;
    let phis: Vec<f64> = (0..201).map(|i| -1.0 + 2.0 * i as f64 / 200.0).collect();
    let gammas: Vec<f64> = phis
        .iter()
        .map(|&phi| pipeline_gamma(&werner_state(2, WernerParameter::new(phi).unwrap()).unwrap()))
        .collect();
    let crossings: Vec<usize> = (0..200)
        .filter(|&i| (gammas[i] > 1.0) != (gammas[i + 1] > 1.0))
        .collect();
    let bracketed = crossings.len() == 1 && {
        let i = crossings[0];
        phis[i] <= threshold && threshold <= phis[i + 1] && gammas[i] > 1.0 && gammas[i + 1] <= 1.0
    };
    let bracket = crossings
        .first()
        .map(|&i| format!("[{:.2}, {:.2}]", phis[i], phis[i + 1]))
        .unwrap_or_else(|| "none".into());
    Outcome::check(
        worst <= 1e-9 && bracketed,
        format!("max |dev| = {worst:.2e}; d=2 crossing bracket {bracket} around {threshold:.5}"),
    )
}

fn c3_theorem2(corpus: &[QuantumState]) -> Outcome {
    let mut worst = 0.0f64;
    for st in corpus {
        let ops = SpinOperators::new(st.dim()).unwrap();
        let def = spin_correlation_matrix(st, &ops).unwrap();
        let th = spin_correlation_via_theorem2(st, &ops).unwrap();
        worst = worst.max(def.max_abs_diff(&th));
    }
    Outcome::check(
        worst <= 1e-10,
        format!(
            "{} states, max |Z_thm2 - Z_def| = {worst:.2e}",
            corpus.len()
        ),
    )
}

fn c4_element_formulas(corpus: &[QuantumState]) -> Outcome {
    let mut worst = 0.0f64;
    for st in corpus {
        let ops = SpinOperators::new(st.dim()).unwrap();
        let def = spin_correlation_matrix(st, &ops).unwrap();
        let el = spin_correlation_from_coefficients(&state_coefficients(st)).unwrap();
        worst = worst.max(def.max_abs_diff(&el));
    }
    let mut sparse_ok = true;
    let mut checked = 0;
    for d in 2..=8 {
        let mut rng = seeded_rng(SEED ^ 0xa5, d as u64);
        for _ in 0..10 {
            let raw: Vec<f64> = (0..d).map(|_| rand::Rng::random::<f64>(&mut rng)).collect();
            let total: f64 = raw.iter().sum();
            let mu = SchmidtSpectrum::new(raw.iter().map(|x| x / total).collect()).unwrap();
            let zeta = state_coefficients(&schmidt_state(&mu).unwrap());
            let z = spin_correlation_from_coefficients(&zeta).unwrap();
            for (i, j) in [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)] {
                sparse_ok &= z.get(i, j) == 0.0;
            }
            checked += 1;
        }
    }
    Outcome::check(
        worst <= 1e-10 && sparse_ok,
        format!(
            "max |Z_elem - Z_def| = {worst:.2e}; exact zero pattern on {checked} Schmidt states: {sparse_ok}"
        ),
    )
}

fn c5_oracle() -> Outcome {
    let cfg = OracleConfig::default();
    let mut worst_gap = 0.0f64;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut fails = 0;
    let mut n = 0;
    for d in 2..=4 {
        let mut rng = seeded_rng(SEED ^ 0x0c, d as u64);
        for _ in 0..50 {
            let st = random_mixed_state(d, &mut rng).unwrap();
            let r = verify_theorem1(&st, &cfg).unwrap();
            worst_gap = worst_gap.max(r.abs_gap);
            worst_excess = worst_excess.max(r.oracle - r.closed);
            let ok = r.abs_gap <= 1e-6 && r.oracle <= r.closed + 1e-9;
            fails += usize::from(!ok);
            n += 1;
        }
    }
    Outcome::check(
        fails == 0,
        format!("{n} states, {fails} failing; max gap {worst_gap:.2e}, max oracle - closed {worst_excess:.2e}"),
    )
}

fn c6_two_qubit() -> Outcome {
    let mut rng = seeded_rng(SEED ^ 0x22, 0);
    let mut worst_pure = 0.0f64;
    for _ in 0..100 {
        let st = random_pure_state(2, &mut rng).unwrap();
        let c = concurrence_pure(&st).unwrap();
        worst_pure = worst_pure.max((pipeline_gamma(&st) - (1.0 + c * c).sqrt()).abs());
    }
    let mut worst_mixed = 0.0f64;
    for _ in 0..100 {
        let st = random_mixed_state(2, &mut rng).unwrap();
        worst_mixed =
            worst_mixed.max((pipeline_gamma(&st) - horodecki_parameter(&st).unwrap()).abs());
    }
    Outcome::check(
        worst_pure <= 1e-8 && worst_mixed <= 1e-10,
        format!("pure |gamma - sqrt(1+C^2)| <= {worst_pure:.2e}; mixed |gamma - M| <= {worst_mixed:.2e}"),
    )
}

fn c7_nonviolation() -> Outcome {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut strict_ok = true;
    for d in 3..=10 {
        let g = pipeline_gamma(&ghz_state(d).unwrap());
        strict_ok &= g < 1.0;
        worst = worst.max(g);
        for i in 0..=200 {
            let phi = -1.0 + 2.0 * i as f64 / 200.0;
            let st = werner_state(d, WernerParameter::new(phi).unwrap()).unwrap();
            // the definition route is O(d^6); the element route is cross-checked in criterion 4
            let g = analyze(&st, Route::ElementFormulas).unwrap().gamma;
            strict_ok &= g < 1.0;
            worst = worst.max(g);
        }
        worst = worst.max(pipeline_gamma(&two_term_state(1, d, d).unwrap()));
        for n in 1..=d {
            worst = worst.max(pipeline_gamma(&product_state(n, d).unwrap()));
        }
    }
    Outcome::check(
        worst <= 1.0 + 1e-12 && strict_ok,
        format!("max gamma = {worst:.17}; GHZ and Werner strictly below 1: {strict_ok}"),
    )
}

fn c8_remark_ordering() -> Outcome {
    let mut ok = true;
    let mut note = String::new();
    for d in 3..=10 {
        let ghz = ghz_state(d).unwrap();
        let two = two_term_state(1, d, d).unwrap();
        let prod = product_state(1, d).unwrap();
        let (cg, ct) = (
            concurrence_pure(&ghz).unwrap(),
            concurrence_pure(&two).unwrap(),
        );
        let (gg, gt, gp) = (
            pipeline_gamma(&ghz),
            pipeline_gamma(&two),
            pipeline_gamma(&prod),
        );
        let this = cg > ct && gg < gt && (gt - 1.0).abs() <= 1e-12 && (gp - 1.0).abs() <= 1e-12;
        if !this && note.is_empty() {
            note = format!(" (first failure at d={d}: C {cg} vs {ct}, gamma {gg} {gt} {gp})");
        }
        ok &= this;
    }
    Outcome::check(ok, format!("d = 3..10 checked{note}"))
}

fn c9_bounds(corpus: &[QuantumState]) -> Outcome {
    let mut worst_sv = f64::NEG_INFINITY;
    let mut worst_gamma = f64::NEG_INFINITY;
    for st in corpus {
        let ops = SpinOperators::new(st.dim()).unwrap();
        let z = spin_correlation_matrix(st, &ops).unwrap();
        let s = ops.spin();
        worst_sv = worst_sv.max(z.singular_values()[0] - s * s);
        worst_gamma = worst_gamma.max(chsh_parameter(&z));
    }
    Outcome::check(
        worst_sv <= 1e-9 && worst_gamma <= SQRT_2 + 1e-9,
        format!(
            "{} states; max (z_s - s^2) = {worst_sv:.3e}, max gamma = {worst_gamma:.6}",
            corpus.len()
        ),
    )
}

fn c10_achievability(corpus: &[QuantumState]) -> Outcome {
    let mut worst = 0.0f64;
    let mut used = 0;
    for st in corpus {
        let ops = SpinOperators::new(st.dim()).unwrap();
        let z = spin_correlation_matrix(st, &ops).unwrap();
        let opt = optimal_settings(&z);
        if opt.degenerate {
            continue;
        }
        used += 1;
        let best = max_chsh(&z).value;
        let bilinear = chsh_expectation_from_correlation(&z, &opt.settings);
        let trace = chsh_expectation_trace(st, &ops, &opt.settings).unwrap();
        worst = worst.max((bilinear - best).abs()).max((trace - best).abs());
    }
    Outcome::check(
        worst <= 1e-9 && used > 0,
        format!("{used} non-degenerate states, max |<B>(opt) - max| = {worst:.2e}"),
    )
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration, bool) {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    (out, elapsed, in_time)
}

fn main() -> ExitCode {
    let corpus = mixed_corpus();
    // closed forms are exercised alongside the pipeline checks
    assert!((ghz_closed_form(2).unwrap().gamma - SQRT_2).abs() < 1e-15);
    assert!(
        (werner_closed_form(2, WernerParameter::new(-1.0).unwrap())
            .unwrap()
            .gamma
            - SQRT_2)
            .abs()
            < 1e-15
    );
    assert!(
        (schmidt_closed_form(&SchmidtSpectrum::uniform(3).unwrap()).z11 - 2.0 / 3.0).abs() < 1e-15
    );

    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<(&str, Option<Duration>, Check<'_>)> = vec![
        ("1 GHZ table", secs(1), Box::new(c1_ghz_table)),
        ("2 Werner sweep", secs(5), Box::new(c2_werner_sweep)),
        (
            "3 Gell-Mann contraction equals definition",
            secs(30),
            Box::new(|| c3_theorem2(&corpus)),
        ),
        (
            "4 element formulas equal definition",
            None,
            Box::new(|| c4_element_formulas(&corpus)),
        ),
        ("5 oracle agreement", secs(60), Box::new(c5_oracle)),
        ("6 two-qubit consistency", None, Box::new(c6_two_qubit)),
        ("7 nonviolation for s >= 1", None, Box::new(c7_nonviolation)),
        (
            "8 entanglement vs CHSH ordering",
            None,
            Box::new(c8_remark_ordering),
        ),
        ("9 global bounds", None, Box::new(|| c9_bounds(&corpus))),
        (
            "10 achievability",
            None,
            Box::new(|| c10_achievability(&corpus)),
        ),
    ];

    let mut failed = 0;
    for (name, limit, run) in criteria {
        let (out, elapsed, in_time) = timed(limit, run);
        let pass = out.pass && in_time;
        failed += usize::from(!pass);
        let budget = limit
            .map(|l| format!(", budget {}s", l.as_secs()))
            .unwrap_or_default();
        println!(
            "[{}] criterion {name}: {} ({:.3}s{budget})",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
