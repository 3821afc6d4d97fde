//! Property-based invariants over randomly generated scenarios.

use num::rational::BigRational;
use num::{FromPrimitive, One, ToPrimitive};
use overlap_core::closed_form::{
    derived_quantities, error_bound, p_approx, p_star, p_universal,
};
use overlap_core::domain::{FeasibilityClass, Scenario};
use proptest::prelude::*;

fn scenario_strategy() -> impl Strategy<Value = Scenario> {
    (
        1.0f64..500.0,
        0.1f64..20.0,
        0.1f64..20.0,
        0u64..8,
        0u64..8,
    )
        .prop_map(|(t, ta, tb, na, nb)| Scenario::from_parts(t, ta, tb, na, nb).unwrap())
}

proptest! {
    #[test]
    fn normalization_orders_durations(s in scenario_strategy()) {
        prop_assert!(s.event_a().duration() >= s.event_b().duration());
        let renorm = Scenario::new(s.total_time(), s.event_a(), s.event_b()).unwrap();
        prop_assert_eq!(s.event_a(), renorm.event_a());
        prop_assert!(!renorm.swapped());
    }

    #[test]
    fn classification_symmetric_under_swap(s in scenario_strategy()) {
        let swapped = Scenario::from_parts(
            s.total_time(),
            s.event_b().duration(),
            s.event_a().duration(),
            s.event_b().count(),
            s.event_a().count(),
        ).unwrap();
        prop_assert_eq!(s.classify(), swapped.classify());
        prop_assert_eq!(p_universal(&s).value, p_universal(&swapped).value);
        prop_assert_eq!(p_approx(&s).value, p_approx(&swapped).value);
    }

    #[test]
    fn estimators_stay_in_unit_interval(s in scenario_strategy()) {
        let results = [p_universal(&s), p_approx(&s)];
        for r in results {
            prop_assert!((0.0..=1.0).contains(&r.value));
            prop_assert_eq!(r.clamped, !(0.0..=1.0).contains(&r.raw_value));
        }
        if s.event_a().count() == 1 && s.event_b().count() == 1 {
            let r = p_star(&s).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.value));
        }
    }

    #[test]
    fn guard_classes_short_circuit_exactly(s in scenario_strategy()) {
        match s.classify() {
            FeasibilityClass::NoEvent => {
                prop_assert_eq!(p_universal(&s).value, 0.0);
                prop_assert_eq!(p_approx(&s).value, 0.0);
            }
            FeasibilityClass::CertainOverlap | FeasibilityClass::InfeasiblePlacement => {
                prop_assert_eq!(p_universal(&s).value, 1.0);
                prop_assert_eq!(p_approx(&s).value, 1.0);
            }
            FeasibilityClass::Normal => {}
        }
    }

    #[test]
    fn error_bound_nonnegative(s in scenario_strategy()) {
        if s.classify() == FeasibilityClass::Normal {
            let q = derived_quantities(&s);
            prop_assert!(q.alpha_b <= q.alpha_a);
            prop_assert!(q.tau >= 0.0);
            match error_bound(&s) {
                Some(b) => {
                    prop_assert!(b >= 0.0);
                    if s.event_a().duration() == s.event_b().duration() {
                        prop_assert_eq!(b, 0.0);
                    }
                }
                None => prop_assert!(q.alpha_b <= 0.0),
            }
        }
    }

    #[test]
    fn log_space_matches_direct_powers(s in scenario_strategy()) {
        // Wherever the direct-power route stays in f64 range, the log-space
        // value must agree to 1e-10 relative error.
        if s.classify() != FeasibilityClass::Normal {
            return Ok(());
        }
        let q = derived_quantities(&s);
        let (a, b) = (s.event_a(), s.event_b());
        let free = q.t_plus - a.busy_time() - b.busy_time();
        if free <= 0.0 {
            return Ok(());
        }
        let direct = free.powi((a.count() + b.count()) as i32)
            / ((q.t_plus - a.busy_time()).powi(a.count() as i32)
                * (q.t_plus - b.busy_time()).powi(b.count() as i32));
        if !direct.is_finite() || direct == 0.0 {
            return Ok(());
        }
        let p_direct = 1.0 - direct;
        let p_log = p_universal(&s).raw_value;
        // Absolute cushion covers the cancellation in forming 1 - p_bar.
        prop_assert!(
            (p_log - p_direct).abs() <= 1e-10 * p_direct.abs() + 1e-14,
            "log-space {} vs direct {}", p_log, p_direct
        );
    }

    #[test]
    fn single_occurrence_equal_durations_reduce_to_p_star(
        t in 1.0f64..1000.0,
        frac in 0.01f64..0.5,
    ) {
        let dur = t * frac;
        let s = Scenario::from_parts(t, dur, dur, 1, 1).unwrap();
        let star = p_star(&s).unwrap().value;
        let uni = p_universal(&s).value;
        prop_assert!((star - uni).abs() <= 1e-12 * star.max(f64::MIN_POSITIVE));
    }
}

fn big(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite")
}

/// Re-derives the error bound with exact rational arithmetic and checks the
/// float path against it.
#[test]
fn error_bound_matches_exact_rational_rederivation() {
    let s = Scenario::from_parts(60.0, 5.0, 2.0, 2, 3).unwrap();

    // alpha_A = 60 + 5 - 10 - 6 = 49, alpha_B = 49 - 3/2, tau = max(10, 6).
    let t_plus = big(60.0) + (big(5.0) + big(2.0)) / big(2.0);
    let busy_a = big(5.0) * big(2.0);
    let busy_b = big(2.0) * big(3.0);
    let alpha_a = big(60.0) + big(5.0) - &busy_a - &busy_b;
    let alpha_b = &alpha_a - (big(5.0) - big(2.0)) / big(2.0);
    let tau = busy_a.clone();
    assert_eq!(alpha_a, big(49.0));
    assert_eq!(alpha_b, big(47.5));
    assert_eq!(tau, big(10.0));

    let pow = |x: &BigRational, n: i64| x.pow(n as i32);
    let pbar = pow(&(&t_plus - &busy_a - &busy_b), 5)
        / (pow(&(&t_plus - &busy_a), 2) * pow(&(&t_plus - &busy_b), 3));
    let ratio = (&alpha_a * (&alpha_b + &tau)) / (&alpha_b * (&alpha_a + &tau));
    let exact = (BigRational::one() - &pbar) * (pow(&ratio, 5) - BigRational::one());

    let float = error_bound(&s).expect("bound available");
    let exact_f = exact.to_f64().unwrap();
    assert!(
        (float - exact_f).abs() <= 1e-12 * exact_f,
        "float {float} vs exact {exact_f}"
    );

    // The probability itself cross-checks the same way.
    let p_exact = (BigRational::one() - pbar).to_f64().unwrap();
    let p_float = p_universal(&s).value;
    assert!((p_float - p_exact).abs() <= 1e-12 * p_exact);
}
