//! Scenario types, input validation and feasibility classification.
//!
//! Every estimator consumes a [`Scenario`] that has already been normalized
//! so that event A is the one with the longer duration. Construction via
//! [`Scenario::new`] performs that normalization and rejects invalid inputs,
//! so downstream code never re-checks.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("total time must be positive and finite, got {0}")]
    BadTotalTime(f64),
    #[error("event duration must be positive and finite, got {0}")]
    BadDuration(f64),
}

/// One recurring event: occurrence duration `t` and occurrence count `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventSpec {
    duration: f64,
    count: u64,
}

impl EventSpec {
    /// Zero-duration events are rejected; the underlying model assumes
    /// occurrences of positive length. A count of zero is accepted and
    /// short-circuits every estimator to probability 0.
    pub fn new(duration: f64, count: u64) -> Result<Self, ValidationError> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(ValidationError::BadDuration(duration));
        }
        Ok(Self { duration, count })
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Total active time `t * n` of this event.
    pub fn busy_time(&self) -> f64 {
        self.duration * self.count as f64
    }
}

/// A normalized scenario `(T, t_A, t_B, n_A, n_B)`.
///
/// Invariant: `event_a.duration() >= event_b.duration()`. If the inputs had
/// to be exchanged to establish this, `swapped()` reports it so callers can
/// map results back to their original labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    total_time: f64,
    event_a: EventSpec,
    event_b: EventSpec,
    swapped: bool,
}

impl Scenario {
    /// Builds and normalizes a scenario. Normalization is idempotent: a
    /// scenario rebuilt from its own fields comes back unchanged.
    pub fn new(
        total_time: f64,
        event_a: EventSpec,
        event_b: EventSpec,
    ) -> Result<Self, ValidationError> {
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(ValidationError::BadTotalTime(total_time));
        }
        let swapped = event_a.duration < event_b.duration;
        let (event_a, event_b) = if swapped {
            (event_b, event_a)
        } else {
            (event_a, event_b)
        };
        Ok(Self {
            total_time,
            event_a,
            event_b,
            swapped,
        })
    }

    /// Convenience constructor from the five raw parameters.
    pub fn from_parts(
        total_time: f64,
        dur_a: f64,
        dur_b: f64,
        count_a: u64,
        count_b: u64,
    ) -> Result<Self, ValidationError> {
        Scenario::new(
            total_time,
            EventSpec::new(dur_a, count_a)?,
            EventSpec::new(dur_b, count_b)?,
        )
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    /// The event with the longer duration.
    pub fn event_a(&self) -> EventSpec {
        self.event_a
    }

    /// The event with the shorter (or equal) duration.
    pub fn event_b(&self) -> EventSpec {
        self.event_b
    }

    /// True if the two events were exchanged during normalization.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// Deterministic classification of degenerate and guarded parameter
    /// regions, checked in priority order.
    pub fn classify(&self) -> FeasibilityClass {
        let (a, b) = (self.event_a, self.event_b);
        if a.count == 0 || b.count == 0 {
            return FeasibilityClass::NoEvent;
        }
        // T <= t*n forces the events to fill the window, hence P = 1.
        if self.total_time <= a.busy_time() || self.total_time <= b.busy_time() {
            return FeasibilityClass::CertainOverlap;
        }
        let infeasible = |e: EventSpec| self.total_time <= (e.count - 1) as f64 * e.duration;
        if infeasible(a) || infeasible(b) {
            return FeasibilityClass::InfeasiblePlacement;
        }
        FeasibilityClass::Normal
    }
}

/// Parameter region of a scenario; exactly one class applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FeasibilityClass {
    /// Some occurrence count is zero; overlap probability is exactly 0.
    NoEvent,
    /// One event's occurrences fill the whole window; probability is exactly 1.
    CertainOverlap,
    /// All estimators apply.
    Normal,
    /// Occurrences of one event cannot be placed without self-overlap.
    InfeasiblePlacement,
}
