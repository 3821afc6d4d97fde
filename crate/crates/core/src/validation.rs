//! Built-in cross-validation checks.
//!
//! Three families of checks tie the implementations together:
//!
//! 1. *Oracle equivalence* — the counting formulas and the brute-force
//!    enumerator agree as exact rationals on an exhaustive box of small
//!    discrete scenarios.
//! 2. *Convergence* — grid refinement drives the discrete oracle toward the
//!    closed forms.
//! 3. *Monte Carlo agreement* — on a fixed grid of scenarios the simulated
//!    estimate stays within the universal equation's error bound plus
//!    sampling noise, and within pure sampling noise of the precise formula
//!    for single-occurrence scenarios.
//!
//! The CLI `validate` subcommand and the acceptance test suite both run
//! these.

use crate::closed_form::{self, ProbabilityResult};
use crate::discrete_oracle::{
    brute_force_no_overlap, convergence_series, exact_no_overlap_probability, DiscreteScenario,
    OracleError, DEFAULT_ENUMERATION_CAP,
};
use crate::domain::Scenario;
use crate::monte_carlo;
use serde::Serialize;
use std::fmt::Write as _;

/// Outcome of one validation check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, details: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            details,
        }
    }
}

/// Size of the exhaustive discrete box for the oracle-equivalence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSize {
    /// `T' <= 10`, durations `<= 3`, counts `<= 2`.
    Small,
    /// `T' <= 14`, durations `<= 4`, counts `<= 3`.
    Full,
}

/// The fixed Monte Carlo validation grid: NORMAL scenarios with total busy
/// time at most `T/2`, varying all five parameters, including two
/// single-occurrence scenarios.
pub fn validation_scenarios() -> Vec<Scenario> {
    [
        (120.0, 3.0, 1.0, 5, 10),
        (60.0, 5.0, 2.0, 1, 1),
        (10.0, 1.0, 1.0, 2, 2),
        (50.0, 4.0, 2.0, 3, 5),
        (200.0, 10.0, 5.0, 4, 6),
        (30.0, 2.0, 2.0, 3, 4),
        (100.0, 1.0, 0.5, 10, 20),
        (40.0, 3.0, 1.0, 2, 6),
        (500.0, 20.0, 10.0, 5, 8),
        (12.0, 2.0, 1.0, 1, 1),
        (80.0, 8.0, 4.0, 2, 3),
        (25.0, 1.5, 1.0, 4, 5),
    ]
    .into_iter()
    .map(|(t, ta, tb, na, nb)| {
        let s = Scenario::from_parts(t, ta, tb, na, nb).expect("grid scenario is valid");
        debug_assert_eq!(s.classify(), crate::domain::FeasibilityClass::Normal);
        debug_assert!(s.event_a().busy_time() + s.event_b().busy_time() <= t / 2.0);
        s
    })
    .collect()
}

/// Exhaustive equality of the two discrete no-overlap routes.
pub fn check_oracle_equivalence(grid: GridSize) -> CheckResult {
    let (max_t, max_dur, max_count) = match grid {
        GridSize::Small => (10, 3, 2),
        GridSize::Full => (14, 4, 3),
    };
    let mut cases = 0u64;
    let mut failures = String::new();
    for t_prime in 1..=max_t {
        for dur_a in 1..=max_dur {
            for dur_b in 1..=dur_a {
                for n_a in 0..=max_count {
                    for n_b in 0..=max_count {
                        let d = DiscreteScenario::new(t_prime, dur_a, dur_b, n_a, n_b).unwrap();
                        let formula = match exact_no_overlap_probability(&d) {
                            Ok(p) => p,
                            Err(OracleError::Degenerate) => continue,
                            Err(e) => panic!("unexpected oracle error: {e}"),
                        };
                        let brute = brute_force_no_overlap(&d, DEFAULT_ENUMERATION_CAP)
                            .expect("placeable case enumerates");
                        cases += 1;
                        if formula != brute {
                            let _ = writeln!(
                                failures,
                                "mismatch at T'={t_prime} t'_A={dur_a} t'_B={dur_b} \
                                 n_A={n_a} n_B={n_b}: formula {} vs brute force {}",
                                formula.ratio(),
                                brute.ratio()
                            );
                        }
                    }
                }
            }
        }
    }
    let passed = failures.is_empty() && cases > 0;
    CheckResult::new(
        "oracle_equivalence",
        passed,
        if passed {
            format!("{cases} placeable cases, exact rational equality on all")
        } else {
            failures
        },
    )
}

/// Grid-refinement convergence of the discrete oracle to the closed forms.
pub fn check_convergence() -> CheckResult {
    let mut details = String::new();
    let mut passed = true;

    // Single-occurrence case: first-order convergence to the precise formula.
    let s = Scenario::from_parts(3.0, 1.0, 1.0, 1, 1).unwrap();
    let points = convergence_series(&s, &[1, 2, 4, 8, 16]).expect("grid aligns");
    for w in points.windows(2) {
        if w[1].gap >= w[0].gap {
            passed = false;
            let _ = writeln!(details, "gap not decreasing: {:?} -> {:?}", w[0], w[1]);
        }
    }
    for w in points.windows(2) {
        // Ratio check only once the grid is fine enough.
        if w[1].delta <= 0.25 {
            let ratio = w[1].gap / w[0].gap;
            if !(0.3..=0.7).contains(&ratio) {
                passed = false;
                let _ = writeln!(details, "gap ratio {ratio} outside [0.3, 0.7]");
            }
        }
    }
    let _ = writeln!(
        details,
        "p_star case gaps: {:?}",
        points.iter().map(|p| p.gap).collect::<Vec<_>>()
    );

    // Counting case against the pre-extension limit.
    let s = Scenario::from_parts(12.0, 3.0, 2.0, 2, 2).unwrap();
    let points = convergence_series(&s, &[1, 2]).expect("grid aligns");
    if points[1].gap >= points[0].gap {
        passed = false;
        let _ = writeln!(details, "counting-case gap did not shrink: {points:?}");
    }
    let _ = writeln!(
        details,
        "counting case gaps: {:?}",
        points.iter().map(|p| p.gap).collect::<Vec<_>>()
    );

    CheckResult::new("convergence", passed, details)
}

/// Monte Carlo agreement with a supplied universal estimator. The estimator
/// is a parameter so the harness can verify it detects a corrupted formula.
pub fn check_mc_agreement_with(
    trials: u64,
    seed: u64,
    universal: impl Fn(&Scenario) -> ProbabilityResult,
) -> CheckResult {
    let mut details = String::new();
    let mut passed = true;
    for s in validation_scenarios() {
        let report = monte_carlo::estimate(&s, trials, seed, 65_536).expect("NORMAL scenario");
        let closed = universal(&s);
        let bound = closed.error_bound.unwrap_or(0.0);
        let tolerance = bound + 4.0 * report.std_error;
        let gap = (report.estimate - closed.value).abs();
        if gap > tolerance {
            passed = false;
        }
        let _ = writeln!(
            details,
            "T={} t_A={} t_B={} n_A={} n_B={}: |{:.6} - {:.6}| = {:.6} vs bound+4se = {:.6}{}",
            s.total_time(),
            s.event_a().duration(),
            s.event_b().duration(),
            s.event_a().count(),
            s.event_b().count(),
            report.estimate,
            closed.value,
            gap,
            tolerance,
            if gap > tolerance { "  FAIL" } else { "" }
        );
        if s.event_a().count() == 1 && s.event_b().count() == 1 {
            let star = closed_form::p_star(&s).expect("counts are 1");
            let gap = (report.estimate - star.value).abs();
            let tolerance = 4.0 * report.std_error;
            if gap > tolerance {
                passed = false;
                let _ = writeln!(details, "  p_star check failed: {gap:.6} > {tolerance:.6}");
            }
        }
    }
    CheckResult::new("monte_carlo_agreement", passed, details)
}

/// [`check_mc_agreement_with`] wired to the real universal equation.
pub fn check_mc_agreement(trials: u64, seed: u64) -> CheckResult {
    check_mc_agreement_with(trials, seed, closed_form::p_universal)
}

/// Runs all validation checks.
pub fn run_all(grid: GridSize, trials: u64, seed: u64) -> Vec<CheckResult> {
    vec![
        check_oracle_equivalence(grid),
        check_convergence(),
        check_mc_agreement(trials, seed),
    ]
}
