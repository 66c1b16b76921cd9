//! Exhaustive reference solver. Enumerates every start vector, keeps those
//! whose grid passes strict validation, and picks the cheapest (first in
//! lexicographic order on ties). Shares nothing with the branch-and-bound
//! except the job list and the grid simulation.

use rust_decimal::Decimal;

use crate::error::SolveError;
use crate::model::Instance;
use crate::validator::{validate, DurationMode};

use super::jobs::{build_jobs, decision_jobs};
use super::simulate::{simulate, StartPolicy};
use super::{finish, Solution, SolveObjective};

pub const DEFAULT_BUDGET: u128 = 2_000_000;

/// Number of start vectors the oracle would try: each decision job can start
/// at any hour from its release to the horizon, or never.
pub fn enumeration_size(instance: &Instance) -> u128 {
    let horizon = instance.horizon();
    decision_jobs(&build_jobs(instance))
        .iter()
        .map(|j| (horizon + 2).saturating_sub(j.release_hour).max(1) as u128)
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

pub fn solve_oracle(
    instance: &Instance,
    objective: SolveObjective,
    budget: u128,
) -> Result<Solution, SolveError> {
    instance.check()?;
    let size = enumeration_size(instance);
    if size > budget {
        return Err(SolveError::BudgetExceeded { size, budget });
    }
    let horizon = instance.horizon();
    let jobs = build_jobs(instance);
    let decisions = decision_jobs(&jobs);

    // digit i runs over release..=horizon, then horizon+1 meaning "never"
    let lows: Vec<usize> = decisions
        .iter()
        .map(|j| j.release_hour.min(horizon + 1))
        .collect();
    let mut digits = lows.clone();
    let to_starts = |digits: &[usize]| -> Vec<Option<usize>> {
        digits
            .iter()
            .map(|&s| (s <= horizon).then_some(s))
            .collect()
    };

    let mut best: Option<(Decimal, Vec<Option<usize>>)> = None;
    loop {
        let starts = to_starts(&digits);
        let sim = simulate(instance, &jobs, StartPolicy::Fixed(&starts));
        let report = validate(&sim.grid, instance, DurationMode::Strict)?;
        if report.feasible {
            if objective == SolveObjective::Feasibility {
                return Ok(finish(instance, &jobs, sim.grid, starts));
            }
            let cost = super::schedule_cost(&sim.grid, &instance.config, &instance.events.price)?
                .price_charge_hours;
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, starts));
            }
        }

        // odometer, last digit fastest, so vectors come in lexicographic order
        let mut i = digits.len();
        loop {
            if i == 0 {
                return match best {
                    Some((_, starts)) => {
                        let grid = simulate(instance, &jobs, StartPolicy::Fixed(&starts)).grid;
                        Ok(finish(instance, &jobs, grid, starts))
                    }
                    None => Err(infeasible(instance, &jobs)),
                };
            }
            i -= 1;
            if digits[i] <= horizon {
                digits[i] += 1;
                break;
            }
            digits[i] = lows[i];
        }
    }
}

fn infeasible(instance: &Instance, jobs: &[super::ChargeJob]) -> SolveError {
    let (hour, reason) = simulate(instance, jobs, StartPolicy::Greedy)
        .failure
        .unwrap_or((1, "no start vector passes validation".to_string()));
    SolveError::Infeasible { hour, reason }
}
