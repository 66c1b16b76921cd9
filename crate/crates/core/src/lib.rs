//! Scheduling engine for a battery swapping station.
//!
//! Every battery is in one of four states each hour (empty, charging, full,
//! out of the station). A schedule is a battery-by-hour grid of those
//! states; this crate checks grids against station constraints, builds
//! them with a first-come first-served greedy or an exact minimum-cost
//! search under hourly prices, and reads and writes the file formats the
//! `bss` command line tool uses.

pub mod error;
pub mod grid_text;
pub mod model;
pub mod scenario;
pub mod scheduler;
pub mod validator;

pub use error::{IngestError, ModelError, ParseError, SolveError};
pub use grid_text::{parse_grid, parse_grid_inferred, render_counts, render_grid};
pub use model::{
    extract_events, legal_transition, BatteryState, EventProfiles, InitialBattery,
    InitialConditions, Instance, ScheduleGrid, StationConfig,
};
pub use scheduler::{
    build_jobs, enumeration_size, materialize, schedule_cost, solve_exact, solve_greedy,
    solve_oracle, ChargeJob, CostBreakdown, JobOrigin, Solution, SolveObjective,
};
pub use validator::{validate, ConstraintId, DurationMode, ValidationReport, Violation};
