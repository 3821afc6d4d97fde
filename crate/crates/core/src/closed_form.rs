//! Closed-form overlap probability estimators.
//!
//! Three estimators with increasing generality:
//!
//! * [`p_star`] — exact for a single occurrence of each event.
//! * [`p_approx`] — a rough first-order approximation for any counts.
//! * [`p_universal`] — the universal equation with an explicit error bound,
//!   valid for any counts; [`p_universal_rate`] is its variant parameterized
//!   by occurrence rates instead of integer counts.
//!
//! All powers are evaluated in log-space: the universal equation raises
//! window lengths to the power `n_A + n_B`, which overflows `f64` near a few
//! hundred occurrences for moderate windows.

use crate::domain::{FeasibilityClass, Scenario, ValidationError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("precise estimator requires n_A = n_B = 1, got n_A={0}, n_B={1}")]
    CountsNotOne(u64, u64),
    #[error("occurrence rate must be nonnegative and finite, got {0}")]
    InvalidRate(f64),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Which estimator produced a [`ProbabilityResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Precise,
    Approx,
    Universal,
    Rate,
}

/// Intermediate quantities of the universal equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedQuantities {
    /// `T+ = T + (t_A + t_B) / 2`, the end-overhang-extended window.
    pub t_plus: f64,
    /// `alpha_A = T + t_A - t_A n_A - t_B n_B`.
    pub alpha_a: f64,
    /// `alpha_B = alpha_A - (t_A - t_B) / 2`; never exceeds `alpha_A`.
    pub alpha_b: f64,
    /// `tau = max(t_A n_A, t_B n_B)`, the larger total busy time.
    pub tau: f64,
}

pub fn derived_quantities(s: &Scenario) -> DerivedQuantities {
    let (a, b) = (s.event_a(), s.event_b());
    let t_plus = s.total_time() + (a.duration() + b.duration()) / 2.0;
    let alpha_a = s.total_time() + a.duration() - a.busy_time() - b.busy_time();
    let alpha_b = alpha_a - (a.duration() - b.duration()) / 2.0;
    let tau = a.busy_time().max(b.busy_time());
    DerivedQuantities {
        t_plus,
        alpha_a,
        alpha_b,
        tau,
    }
}

/// An overlap probability together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilityResult {
    /// Probability clamped to `[0, 1]`.
    pub value: f64,
    /// The formula value before clamping.
    pub raw_value: f64,
    /// Upper bound on the error term, when the estimator provides one.
    /// `None` for exact or guarded results and when the bound formula is
    /// unavailable (`alpha_B <= 0`).
    pub error_bound: Option<f64>,
    pub method: Method,
    /// Set when a feasibility guard short-circuited the computation.
    pub guard: Option<FeasibilityClass>,
    /// True iff `raw_value` fell outside `[0, 1]`.
    pub clamped: bool,
}

impl ProbabilityResult {
    fn computed(raw: f64, method: Method, error_bound: Option<f64>) -> Self {
        Self {
            value: raw.clamp(0.0, 1.0),
            raw_value: raw,
            error_bound,
            method,
            guard: None,
            clamped: !(0.0..=1.0).contains(&raw),
        }
    }

    fn guarded(class: FeasibilityClass, method: Method) -> Self {
        let value = match class {
            FeasibilityClass::NoEvent => 0.0,
            _ => 1.0,
        };
        Self {
            value,
            raw_value: value,
            error_bound: None,
            method,
            guard: Some(class),
            clamped: false,
        }
    }
}

fn short_circuit(s: &Scenario, method: Method) -> Option<ProbabilityResult> {
    match s.classify() {
        FeasibilityClass::Normal => None,
        class => Some(ProbabilityResult::guarded(class, method)),
    }
}

/// Exact overlap probability for `n_A = n_B = 1`:
/// `P* = (t_A + t_B) / T - (t_A^2 + t_B^2) / (2 T^2)`.
pub fn p_star(s: &Scenario) -> Result<ProbabilityResult, DomainError> {
    let (na, nb) = (s.event_a().count(), s.event_b().count());
    if na != 1 || nb != 1 {
        return Err(DomainError::CountsNotOne(na, nb));
    }
    if let Some(g) = short_circuit(s, Method::Precise) {
        return Ok(g);
    }
    let (t, ta, tb) = (s.total_time(), s.event_a().duration(), s.event_b().duration());
    let raw = (ta + tb) / t - (ta * ta + tb * tb) / (2.0 * t * t);
    Ok(ProbabilityResult::computed(raw, Method::Precise, None))
}

/// First-order approximation `1 - (1 - n_A (t_A + t_B) / T)^{n_B}`.
///
/// Valid for `n_A (t_A + t_B) < T`; outside that region the base is
/// nonpositive and the result is pinned to 1 with `clamped` set.
pub fn p_approx(s: &Scenario) -> ProbabilityResult {
    if let Some(g) = short_circuit(s, Method::Approx) {
        return g;
    }
    let (a, b) = (s.event_a(), s.event_b());
    let base = 1.0 - a.count() as f64 * (a.duration() + b.duration()) / s.total_time();
    if base <= 0.0 {
        return ProbabilityResult {
            value: 1.0,
            raw_value: 1.0 - base,
            error_bound: None,
            method: Method::Approx,
            guard: None,
            clamped: true,
        };
    }
    let raw = 1.0 - base.powf(b.count() as f64);
    ProbabilityResult::computed(raw, Method::Approx, None)
}

/// Log of the no-overlap probability of the universal equation, or `None`
/// when the no-overlap window `t_plus - t_A n_A - t_B n_B` has vanished.
fn ln_no_overlap(t_plus: f64, ta: f64, tb: f64, na: f64, nb: f64) -> Option<f64> {
    let free = t_plus - ta * na - tb * nb;
    if free <= 0.0 {
        return None;
    }
    let denom_a = t_plus - ta * na;
    let denom_b = t_plus - tb * nb;
    Some((na + nb) * free.ln() - na * denom_a.ln() - nb * denom_b.ln())
}

fn error_bound_impl(q: &DerivedQuantities, ta: f64, tb: f64, na: f64, nb: f64) -> Option<f64> {
    if ta == tb {
        return Some(0.0);
    }
    if q.alpha_b <= 0.0 {
        return None;
    }
    let ratio = (q.alpha_a * (q.alpha_b + q.tau)) / (q.alpha_b * (q.alpha_a + q.tau));
    let factor = ((na + nb) * ratio.ln()).exp();
    let p = match ln_no_overlap(q.t_plus, ta, tb, na, nb) {
        Some(ln_pbar) => 1.0 - ln_pbar.exp(),
        None => 1.0,
    };
    Some((p * (factor - 1.0)).max(0.0))
}

/// Upper bound on the universal equation's error term.
///
/// Returns exactly 0 when `t_A = t_B` and `None` when `alpha_B <= 0`, where
/// the bound expression stops being meaningful; callers should fall back to
/// Monte Carlo validation in that case.
pub fn error_bound(s: &Scenario) -> Option<f64> {
    let q = derived_quantities(s);
    error_bound_impl(
        &q,
        s.event_a().duration(),
        s.event_b().duration(),
        s.event_a().count() as f64,
        s.event_b().count() as f64,
    )
}

fn universal_result(
    t_plus: f64,
    q: &DerivedQuantities,
    ta: f64,
    tb: f64,
    na: f64,
    nb: f64,
    method: Method,
) -> ProbabilityResult {
    match ln_no_overlap(t_plus, ta, tb, na, nb) {
        Some(ln_pbar) => {
            let raw = 1.0 - ln_pbar.exp();
            ProbabilityResult::computed(raw, method, error_bound_impl(q, ta, tb, na, nb))
        }
        // No-overlap arrangements have vanished even in the extended window.
        None => ProbabilityResult::guarded(FeasibilityClass::CertainOverlap, method),
    }
}

/// Universal equation:
/// `P = 1 - (T+ - t_A n_A - t_B n_B)^{n_A+n_B} / ((T+ - t_A n_A)^{n_A} (T+ - t_B n_B)^{n_B})`
/// with `T+ = T + (t_A + t_B) / 2`, plus the error bound of [`error_bound`].
pub fn p_universal(s: &Scenario) -> ProbabilityResult {
    if let Some(g) = short_circuit(s, Method::Universal) {
        return g;
    }
    let q = derived_quantities(s);
    universal_result(
        q.t_plus,
        &q,
        s.event_a().duration(),
        s.event_b().duration(),
        s.event_a().count() as f64,
        s.event_b().count() as f64,
        Method::Universal,
    )
}

/// Rate-parameterized universal equation: occurrence counts are the expected
/// values `n = rate * T` and may be non-integral. The formula extends
/// continuously; no rounding takes place.
pub fn p_universal_rate(
    total_time: f64,
    dur_a: f64,
    dur_b: f64,
    rate_a: f64,
    rate_b: f64,
) -> Result<ProbabilityResult, DomainError> {
    if !(total_time.is_finite() && total_time > 0.0) {
        return Err(ValidationError::BadTotalTime(total_time).into());
    }
    for d in [dur_a, dur_b] {
        if !(d.is_finite() && d > 0.0) {
            return Err(ValidationError::BadDuration(d).into());
        }
    }
    for r in [rate_a, rate_b] {
        if !(r.is_finite() && r >= 0.0) {
            return Err(DomainError::InvalidRate(r));
        }
    }
    // Normalize so the longer duration plays the role of A.
    let (dur_a, dur_b, rate_a, rate_b) = if dur_a >= dur_b {
        (dur_a, dur_b, rate_a, rate_b)
    } else {
        (dur_b, dur_a, rate_b, rate_a)
    };
    let (na, nb) = (rate_a * total_time, rate_b * total_time);
    if na == 0.0 || nb == 0.0 {
        return Ok(ProbabilityResult::guarded(FeasibilityClass::NoEvent, Method::Rate));
    }
    if total_time <= dur_a * na || total_time <= dur_b * nb {
        return Ok(ProbabilityResult::guarded(
            FeasibilityClass::CertainOverlap,
            Method::Rate,
        ));
    }
    let t_plus = total_time + (dur_a + dur_b) / 2.0;
    let alpha_a = total_time + dur_a - dur_a * na - dur_b * nb;
    let q = DerivedQuantities {
        t_plus,
        alpha_a,
        alpha_b: alpha_a - (dur_a - dur_b) / 2.0,
        tau: (dur_a * na).max(dur_b * nb),
    };
    Ok(universal_result(t_plus, &q, dur_a, dur_b, na, nb, Method::Rate))
}
