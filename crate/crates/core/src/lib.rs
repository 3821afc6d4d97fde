//! Probability that two independent recurring events overlap.
//!
//! Two events `A` and `B` occur `n_A` and `n_B` times at uniformly random,
//! non-self-overlapping positions inside a total time window `T`, each
//! occurrence lasting `t_A` resp. `t_B`. This crate computes the probability
//! that at least one `A` occurrence and one `B` occurrence are active at the
//! same time, three ways:
//!
//! * [`closed_form`] — a precise formula for the single-occurrence case, a
//!   rough approximation, and a universal equation with an error bound,
//!   including a rate-parameterized variant.
//! * [`discrete_oracle`] — exact arbitrary-precision counting on a discrete
//!   grid, with an independent brute-force enumerator, used as ground truth.
//! * [`monte_carlo`] — a seeded, deterministic continuous-time simulator with
//!   confidence intervals, the second independent oracle.
//!
//! [`domain`] holds the shared scenario types and input validation.

pub mod closed_form;
pub mod discrete_oracle;
pub mod domain;
pub mod monte_carlo;
pub mod validation;

pub use closed_form::{DerivedQuantities, Method, ProbabilityResult};
pub use domain::{EventSpec, FeasibilityClass, Scenario, ValidationError};
pub use monte_carlo::SimulationReport;
