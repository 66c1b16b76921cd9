//! Schedule construction: a FIFO greedy, an exact minimum-cost
//! branch-and-bound over charge start hours, and a brute-force oracle used
//! to check the exact solver.
//!
//! All solvers choose one start hour (or none) per decision job and turn
//! that vector into a grid through the same station simulation, so they
//! differ only in how the vector is picked.

mod cost;
mod exact;
mod jobs;
mod oracle;
mod simulate;

use std::str::FromStr;

use serde::Serialize;

pub use cost::{schedule_cost, CostBreakdown};
pub use exact::solve_exact;
pub use jobs::{build_jobs, decision_jobs, ChargeJob, JobOrigin};
pub use oracle::{enumeration_size, solve_oracle, DEFAULT_BUDGET};

use crate::error::SolveError;
use crate::model::{Instance, ScheduleGrid};
use simulate::{simulate, StartPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveObjective {
    /// Any schedule meeting every constraint.
    #[default]
    Feasibility,
    /// Least electricity cost under the instance's price profile.
    MinCost,
}

impl FromStr for SolveObjective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "feasibility" => Ok(SolveObjective::Feasibility),
            "min-cost" | "min_cost" => Ok(SolveObjective::MinCost),
            other => Err(format!("unknown objective `{other}`")),
        }
    }
}

/// A solved schedule together with the choices that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub grid: ScheduleGrid,
    pub cost: CostBreakdown,
    /// Decision jobs, in the order `starts` refers to.
    pub jobs: Vec<ChargeJob>,
    /// Start hour per decision job, `None` if the job never charges.
    pub starts: Vec<Option<usize>>,
}

impl Solution {
    /// Number of swaps the grid serves.
    pub fn swaps_served(&self) -> usize {
        (1..self.grid.horizon())
            .map(|t| {
                self.grid.edges_at(
                    t,
                    crate::model::BatteryState::Full,
                    crate::model::BatteryState::Out,
                )
            })
            .sum()
    }

    /// Start vector with "never" mapped past the horizon, the key used for
    /// lexicographic tie-breaking.
    pub fn start_key(&self) -> Vec<usize> {
        start_key(&self.starts, self.grid.horizon())
    }
}

pub(crate) fn start_key(starts: &[Option<usize>], horizon: usize) -> Vec<usize> {
    starts.iter().map(|s| s.unwrap_or(horizon + 1)).collect()
}

fn finish(
    instance: &Instance,
    jobs: &[ChargeJob],
    grid: ScheduleGrid,
    starts: Vec<Option<usize>>,
) -> Solution {
    let cost = schedule_cost(&grid, &instance.config, &instance.events.price)
        .expect("instance price covers the horizon");
    Solution {
        grid,
        cost,
        jobs: decision_jobs(jobs),
        starts,
    }
}

/// First-come first-served simulation: chargers are handed to waiting
/// batteries in the order they became empty (ties by battery index), every
/// charge lasts exactly its remaining duration, and swaps take the battery
/// that has been full longest.
pub fn solve_greedy(instance: &Instance) -> Result<Solution, SolveError> {
    instance.check()?;
    let jobs = build_jobs(instance);
    let sim = simulate(instance, &jobs, StartPolicy::Greedy);
    if let Some((hour, reason)) = sim.failure {
        return Err(SolveError::Infeasible { hour, reason });
    }
    Ok(finish(instance, &jobs, sim.grid, sim.starts))
}

/// Grid produced by starting each decision job at the given hour.
pub fn materialize(instance: &Instance, starts: &[Option<usize>]) -> ScheduleGrid {
    let jobs = build_jobs(instance);
    simulate(instance, &jobs, StartPolicy::Fixed(starts)).grid
}
