//! Exact discrete-grid ground truth for the closed-form estimators.
//!
//! Time is cut into `T'` grid units. Occurrence placements are counted two
//! independent ways — the binomial-coefficient counting formulas and a direct
//! brute-force enumerator — and probabilities are exact rationals, so there
//! is no numerical doubt in the reference values. The closed forms are then
//! checked against these references through grid refinement
//! ([`convergence_series`]).
//!
//! Counting places occurrences fully inside the grid (start `<= T' - t'`);
//! the end-overhang convention is recovered in the continuum by the window
//! extension of the universal equation, which the Monte Carlo module
//! validates. [`p_star_grid`] instead lets starts range over all `T'`
//! positions with overhang, matching the single-occurrence derivation.

use crate::closed_form;
use crate::domain::Scenario;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, ToPrimitive, Zero};
use thiserror::Error;

/// Default cap on brute-force configurations (A placements times B placements).
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("event cannot be placed on the grid (no valid arrangement)")]
    Degenerate,
    #[error("enumeration of {0} configurations exceeds the cap of {1}")]
    CapExceeded(BigUint, u64),
    #[error("grid duration must be at least 1")]
    BadDuration,
    #[error("grid length must be at least 1")]
    BadGridLength,
    #[error("{0} * {1} is not integral; scenario does not align with the grid")]
    NotGridAligned(f64, u32),
}

/// Grid-unit mirror of a [`Scenario`], normalized so `dur_a >= dur_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscreteScenario {
    t_prime: u64,
    dur_a: u64,
    dur_b: u64,
    n_a: u64,
    n_b: u64,
}

impl DiscreteScenario {
    pub fn new(t_prime: u64, dur_a: u64, dur_b: u64, n_a: u64, n_b: u64) -> Result<Self, OracleError> {
        if t_prime == 0 {
            return Err(OracleError::BadGridLength);
        }
        if dur_a == 0 || dur_b == 0 {
            return Err(OracleError::BadDuration);
        }
        let (dur_a, dur_b, n_a, n_b) = if dur_a >= dur_b {
            (dur_a, dur_b, n_a, n_b)
        } else {
            (dur_b, dur_a, n_b, n_a)
        };
        Ok(Self {
            t_prime,
            dur_a,
            dur_b,
            n_a,
            n_b,
        })
    }

    pub fn t_prime(&self) -> u64 {
        self.t_prime
    }
}

/// An exact rational probability in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExactProbability(BigRational);

impl ExactProbability {
    fn new(numerator: BigUint, denominator: BigUint) -> Self {
        debug_assert!(!denominator.is_zero());
        debug_assert!(numerator <= denominator);
        Self(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        ))
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("probability fits in f64")
    }

    /// `1 - self`, the complementary probability.
    pub fn complement(&self) -> ExactProbability {
        Self(BigRational::one() - &self.0)
    }
}

/// Binomial coefficient `C(n, k)` in exact integer arithmetic.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 0..k {
        result = result * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    result
}

/// Number of ways to place `n` non-self-overlapping occurrences of grid
/// duration `dur` fully inside a grid of length `t_prime`:
/// `C(T' - (t' - 1) n, n)`, and 0 when no valid placement exists.
pub fn count_placements(t_prime: u64, dur: u64, n: u64) -> BigUint {
    let shrink = (dur as u128 - 1) * n as u128;
    if shrink > t_prime as u128 {
        return BigUint::zero();
    }
    binomial(t_prime - shrink as u64, n)
}

/// No-overlap probability by the counting formulas:
/// `P-bar = C(n_A + n_B, n_A) C(T' - N_A - N_B, n_A + n_B) /
///          (C(T' - N_A, n_A) C(T' - N_B, n_B))` with `N = (t' - 1) n`.
pub fn exact_no_overlap_probability(d: &DiscreteScenario) -> Result<ExactProbability, OracleError> {
    let denom = count_placements(d.t_prime, d.dur_a, d.n_a)
        * count_placements(d.t_prime, d.dur_b, d.n_b);
    if denom.is_zero() {
        return Err(OracleError::Degenerate);
    }
    let shrink = (d.dur_a as u128 - 1) * d.n_a as u128 + (d.dur_b as u128 - 1) * d.n_b as u128;
    let joint = if shrink > d.t_prime as u128 {
        BigUint::zero()
    } else {
        binomial(d.t_prime - shrink as u64, d.n_a + d.n_b)
    };
    let numer = binomial(d.n_a + d.n_b, d.n_a) * joint;
    Ok(ExactProbability::new(numer, denom))
}

fn enumerate_placements(t_prime: u64, dur: u64, n: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n as usize);
    fn recurse(out: &mut Vec<Vec<u64>>, current: &mut Vec<u64>, from: u64, t_prime: u64, dur: u64, left: u64) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        if t_prime < dur {
            return;
        }
        let last = t_prime - dur; // start must keep the occurrence inside
        let mut x = from;
        while x <= last {
            current.push(x);
            recurse(out, current, x + dur, t_prime, dur, left - 1);
            current.pop();
            x += 1;
        }
    }
    recurse(&mut out, &mut current, 0, t_prime, dur, n);
    out
}

fn placements_disjoint(a: &[u64], dur_a: u64, b: &[u64], dur_b: u64) -> bool {
    // Both lists sorted; scan like a merge.
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if b[j] < a[i] + dur_a && a[i] < b[j] + dur_b {
            return false;
        }
        if a[i] + dur_a <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    true
}

/// Independent oracle: enumerates every joint placement and counts the
/// overlap-free ones. Must agree with [`exact_no_overlap_probability`] on
/// every input; equality of the two routes is the validation.
pub fn brute_force_no_overlap(
    d: &DiscreteScenario,
    cap: u64,
) -> Result<ExactProbability, OracleError> {
    let count_a = count_placements(d.t_prime, d.dur_a, d.n_a);
    let count_b = count_placements(d.t_prime, d.dur_b, d.n_b);
    if count_a.is_zero() || count_b.is_zero() {
        return Err(OracleError::Degenerate);
    }
    let total = &count_a * &count_b;
    if total > BigUint::from(cap) {
        return Err(OracleError::CapExceeded(total, cap));
    }
    let placements_a = enumerate_placements(d.t_prime, d.dur_a, d.n_a);
    let placements_b = enumerate_placements(d.t_prime, d.dur_b, d.n_b);
    debug_assert_eq!(BigUint::from(placements_a.len()), count_a);
    debug_assert_eq!(BigUint::from(placements_b.len()), count_b);
    let mut disjoint: u64 = 0;
    for a in &placements_a {
        for b in &placements_b {
            if placements_disjoint(a, d.dur_a, b, d.dur_b) {
                disjoint += 1;
            }
        }
    }
    Ok(ExactProbability::new(BigUint::from(disjoint), total))
}

/// Exact single-occurrence overlap probability on the grid, with starts
/// ranging over all `T'` positions and end overhang allowed: the fraction of
/// the `T'^2` start pairs whose occupied intervals intersect.
pub fn p_star_grid(t_prime: u64, dur_a: u64, dur_b: u64) -> ExactProbability {
    let mut overlapping: u128 = 0;
    for x_a in 0..t_prime {
        // x_b overlaps iff x_b < x_a + dur_a and x_a < x_b + dur_b.
        let lo = x_a.saturating_sub(dur_b - 1);
        let hi = (x_a + dur_a - 1).min(t_prime - 1);
        if hi >= lo {
            overlapping += (hi - lo + 1) as u128;
        }
    }
    ExactProbability::new(
        BigUint::from(overlapping),
        BigUint::from(t_prime as u128 * t_prime as u128),
    )
}

/// One refinement step of [`convergence_series`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub delta: f64,
    pub exact: f64,
    pub closed_form: f64,
    pub gap: f64,
}

fn to_grid_units(value: f64, factor: u32) -> Result<u64, OracleError> {
    let scaled = value * factor as f64;
    let rounded = scaled.round();
    if (scaled - rounded).abs() > 1e-6 || rounded < 1.0 {
        return Err(OracleError::NotGridAligned(value, factor));
    }
    Ok(rounded as u64)
}

/// Evaluates the discrete oracle at a sequence of grid refinements
/// (`delta = 1 / factor`) and reports the gap to the matching closed form:
/// the precise single-occurrence formula when `n_A = n_B = 1`, otherwise the
/// pre-extension limit of the universal equation compared against the exact
/// counting probability. Gaps shrink as the grid refines.
pub fn convergence_series(
    s: &Scenario,
    factors: &[u32],
) -> Result<Vec<ConvergencePoint>, OracleError> {
    let (t, a, b) = (s.total_time(), s.event_a(), s.event_b());
    let single = a.count() == 1 && b.count() == 1;
    let closed = if single {
        closed_form::p_star(s).expect("counts checked").value
    } else {
        // Pre-extension limit: (T - t_A n_A - t_B n_B)^(n_A+n_B)
        //                      / ((T - t_A n_A)^n_A (T - t_B n_B)^n_B).
        let free = t - a.busy_time() - b.busy_time();
        if free <= 0.0 {
            1.0
        } else {
            let ln_pbar = (a.count() + b.count()) as f64 * free.ln()
                - a.count() as f64 * (t - a.busy_time()).ln()
                - b.count() as f64 * (t - b.busy_time()).ln();
            1.0 - ln_pbar.exp()
        }
    };
    let mut points = Vec::with_capacity(factors.len());
    for &factor in factors {
        let t_prime = to_grid_units(t, factor)?;
        let dur_a = to_grid_units(a.duration(), factor)?;
        let dur_b = to_grid_units(b.duration(), factor)?;
        let exact = if single {
            p_star_grid(t_prime, dur_a, dur_b).to_f64()
        } else {
            let d = DiscreteScenario::new(t_prime, dur_a, dur_b, a.count(), b.count())?;
            exact_no_overlap_probability(&d)?.complement().to_f64()
        };
        points.push(ConvergencePoint {
            delta: 1.0 / factor as f64,
            exact,
            closed_form: closed,
            gap: (exact - closed).abs(),
        });
    }
    Ok(points)
}
