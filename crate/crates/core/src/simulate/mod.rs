//! Integration of the full and reduced master equations and the error
//! between them.

mod compare;
mod csv;
mod propagate;
mod sweep;

pub use self::csv::{report_csv_string, write_report_csv};
pub use compare::{compare, Comparison, ComparisonReport};
pub use propagate::{propagate, uniform_grid, Trajectory};
pub use sweep::{epsilon_sweep, fit_line, Horizon, SweepOptions, SweepReport};

pub use crate::operators::trace_distance;

#[cfg(test)]
mod tests;
