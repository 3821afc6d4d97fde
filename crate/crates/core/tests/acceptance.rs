//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use overlap_core::closed_form::{
    error_bound, p_star, p_universal, p_universal_rate,
};
use overlap_core::discrete_oracle::p_star_grid;
use overlap_core::domain::{FeasibilityClass, Scenario};
use overlap_core::monte_carlo;
use overlap_core::validation::{
    check_mc_agreement, check_oracle_equivalence, validation_scenarios,
    GridSize,
};

fn scenario(t: f64, ta: f64, tb: f64, na: u64, nb: u64) -> Scenario {
    Scenario::from_parts(t, ta, tb, na, nb).unwrap()
}

const SEED: u64 = 0x0C0FFEE;

#[test]
fn criterion_1_precise_equation_examples() {
    let r = p_star(&scenario(60.0, 5.0, 2.0, 1, 1)).unwrap();
    assert!(
        (r.value - 0.112639).abs() <= 1e-4,
        "p_star(60,5,2) = {}",
        r.value
    );
    let r = p_star(&scenario(3.0, 1.0, 1.0, 1, 1)).unwrap();
    assert!((r.value - 5.0 / 9.0).abs() <= 1e-12, "p_star(3,1,1) = {}", r.value);
    println!("PASS criterion 1: precise-equation examples (0.112639 +/- 1e-4, 5/9 +/- 1e-12)");
}

#[test]
fn criterion_2_approximation_example() {
    let r = overlap_core::closed_form::p_approx(&scenario(120.0, 3.0, 1.0, 5, 10));
    assert!(
        (r.value - 0.8385).abs() <= 1e-4,
        "p_approx(120,3,1,5,10) = {}",
        r.value
    );
    println!("PASS criterion 2: approximation example (0.8385 +/- 1e-4)");
}

#[test]
fn criterion_3_universal_equation_examples() {
    let r = p_universal(&scenario(120.0, 3.0, 1.0, 5, 10));
    assert!(
        (r.value - 0.8546).abs() <= 1e-4,
        "p_universal(120,3,1,5,10) = {}",
        r.value
    );
    let bound = r.error_bound.expect("bound available");
    assert!((bound - 0.0177).abs() <= 5e-4, "error_bound = {bound}");

    let r = p_universal(&scenario(3.0, 1.0, 1.0, 1, 1));
    assert!(
        (r.value - 5.0 / 9.0).abs() <= 1e-12,
        "p_universal(3,1,1,1,1) = {}",
        r.value
    );
    assert_eq!(r.error_bound, Some(0.0), "equal durations give a zero bound");
    println!("PASS criterion 3: universal-equation examples (0.8546 +/- 1e-4, bound 0.0177 +/- 5e-4, 5/9 +/- 0)");
}

#[test]
fn criterion_4_reduction_identity() {
    // 50-point grid of (T, t) with 0 < t <= T/2.
    let mut checked = 0;
    for i in 1..=50u32 {
        let t_total = 2.0 + 1.37 * i as f64;
        let dur = t_total / 2.0 * i as f64 / 50.0;
        let s = scenario(t_total, dur, dur, 1, 1);
        let star = p_star(&s).unwrap().value;
        let uni = p_universal(&s).value;
        let rel = (star - uni).abs() / star;
        assert!(rel <= 1e-12, "T={t_total} t={dur}: rel error {rel}");
        checked += 1;
    }
    assert_eq!(checked, 50);
    println!("PASS criterion 4: reduction identity on 50-point grid (rel error <= 1e-12)");
}

#[test]
fn criterion_5_oracle_equivalence() {
    let result = check_oracle_equivalence(GridSize::Full);
    assert!(result.passed, "{}", result.details);
    println!("PASS criterion 5: oracle equivalence — {}", result.details.trim());
}

#[test]
fn criterion_6_convergence() {
    let exact = 5.0 / 9.0;
    let gaps: Vec<f64> = [3u64, 6, 12, 24, 48]
        .iter()
        .map(|&t_prime| (p_star_grid(t_prime, t_prime / 3, t_prime / 3).to_f64() - exact).abs())
        .collect();
    for w in gaps.windows(2) {
        assert!(w[1] < w[0], "gaps not strictly decreasing: {gaps:?}");
    }
    // First-order convergence: successive ratios near 1/2 once T' >= 12.
    for (i, w) in gaps.windows(2).enumerate() {
        let coarse_t_prime = [3u64, 6, 12, 24][i];
        if coarse_t_prime >= 12 {
            let ratio = w[1] / w[0];
            assert!((0.3..=0.7).contains(&ratio), "ratio {ratio} at step {i}");
        }
    }
    println!("PASS criterion 6: grid convergence gaps {gaps:?}");
}

#[test]
fn criterion_7_monte_carlo_vs_universal() {
    let result = check_mc_agreement(1_000_000, SEED);
    assert!(result.passed, "{}", result.details);
    println!("PASS criterion 7: Monte Carlo vs universal equation on 12-scenario grid, 1e6 trials each");
    println!("{}", result.details.trim());
}

#[test]
fn criterion_8_property_suite() {
    // Normalization idempotence and raw-order symmetry.
    for (t, ta, tb, na, nb) in [(60.0, 2.0, 5.0, 3, 4), (9.0, 1.0, 1.0, 2, 2)] {
        let s = Scenario::from_parts(t, ta, tb, na, nb).unwrap();
        let renorm = Scenario::new(s.total_time(), s.event_a(), s.event_b()).unwrap();
        assert_eq!((s.event_a(), s.event_b()), (renorm.event_a(), renorm.event_b()));
        let swapped = Scenario::from_parts(t, tb, ta, nb, na).unwrap();
        assert_eq!(s.event_a(), swapped.event_a());
        assert_eq!(p_universal(&s).value, p_universal(&swapped).value);
    }

    // All outputs in [0, 1] and error-bound sign over a parameter sample.
    for &t in &[5.0, 20.0, 100.0] {
        for &(ta, tb) in &[(1.0, 1.0), (2.0, 0.5), (3.0, 3.0)] {
            for &(na, nb) in &[(0, 1), (1, 1), (2, 5), (4, 4)] {
                let s = scenario(t, ta, tb, na, nb);
                for v in [
                    p_universal(&s).value,
                    overlap_core::closed_form::p_approx(&s).value,
                ] {
                    assert!((0.0..=1.0).contains(&v));
                }
                if s.classify() == FeasibilityClass::Normal {
                    if let Some(b) = error_bound(&s) {
                        assert!(b >= 0.0);
                        if ta == tb {
                            assert_eq!(b, 0.0);
                        } else {
                            assert!(b > 0.0, "bound should be positive for t_A != t_B");
                        }
                    }
                }
            }
        }
    }

    // Guard classes short-circuit to exactly 0 or 1.
    assert_eq!(p_universal(&scenario(50.0, 2.0, 1.0, 0, 3)).value, 0.0);
    assert_eq!(p_universal(&scenario(10.0, 3.0, 1.0, 4, 1)).value, 1.0);

    // Monotone sweeps on a sampled grid with busy time <= T/2.
    let base = (120.0, 3.0, 1.0, 5u64, 10u64);
    let p = |t, ta, tb, na, nb| p_universal(&scenario(t, ta, tb, na, nb)).value;
    let p0 = p(base.0, base.1, base.2, base.3, base.4);
    assert!(p(base.0, base.1 + 0.5, base.2, base.3, base.4) >= p0);
    assert!(p(base.0, base.1, base.2 + 0.5, base.3, base.4) >= p0);
    assert!(p(base.0, base.1, base.2, base.3 + 1, base.4) >= p0);
    assert!(p(base.0, base.1, base.2, base.3, base.4 + 1) >= p0);
    assert!(p(base.0 + 10.0, base.1, base.2, base.3, base.4) <= p0);
    for steps in 1..8 {
        let t = 120.0 + 10.0 * steps as f64;
        assert!(p(t, base.1, base.2, base.3, base.4) <= p(t - 10.0, base.1, base.2, base.3, base.4));
    }

    // Approximation sanity, on the part of the grid where the
    // approximation's own assumption T >> n_A (t_A + t_B) roughly holds.
    for s in validation_scenarios() {
        let load = s.event_a().count() as f64
            * (s.event_a().duration() + s.event_b().duration())
            / s.total_time();
        if load > 1.0 / 3.0 {
            continue;
        }
        let approx = overlap_core::closed_form::p_approx(&s).value;
        let uni = p_universal(&s);
        let slack = uni.error_bound.unwrap_or(0.0) + 0.02;
        assert!(
            (approx - uni.value).abs() <= slack,
            "approximation off by more than bound+0.02 on {s:?}"
        );
    }

    // Monte Carlo determinism: repeated runs and 1-thread vs default pool.
    let s = scenario(120.0, 3.0, 1.0, 5, 10);
    let a = monte_carlo::estimate(&s, 200_000, SEED, 4096).unwrap();
    let b = monte_carlo::estimate(&s, 200_000, SEED, 4096).unwrap();
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = pool.install(|| monte_carlo::estimate(&s, 200_000, SEED, 4096).unwrap());
    assert_eq!(a, c);

    println!("PASS criterion 8: property suite (normalization, bounds, guards, monotonicity, determinism)");
}

#[test]
fn criterion_9_rate_variant_consistency() {
    for s in validation_scenarios() {
        let t = s.total_time();
        let by_count = p_universal(&s);
        let by_rate = p_universal_rate(
            t,
            s.event_a().duration(),
            s.event_b().duration(),
            s.event_a().count() as f64 / t,
            s.event_b().count() as f64 / t,
        )
        .unwrap();
        let rel = (by_count.value - by_rate.value).abs() / by_count.value;
        assert!(rel <= 1e-10, "rate mismatch on {s:?}: rel {rel}");
    }
    println!("PASS criterion 9: rate-variant consistency (rel error <= 1e-10 on validation grid)");
}
