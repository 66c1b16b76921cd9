//! Depth-first branch-and-bound over decision-job start hours.
//!
//! Jobs are branched in release order; each job tries its start hours in
//! increasing order and "never" last, so leaves are met in lexicographic
//! order of the start vector. Together with pruning only on a strictly worse
//! bound (until the search has produced its own incumbent), the first
//! optimal leaf reached is the lexicographically smallest optimal vector.
//!
//! Interchangeable jobs (same origin, release and duration) are forced into
//! non-decreasing start order. Any optimal vector can be sorted within such
//! a group without changing cost or feasibility, and the sorted one is
//! lexicographically smaller, so the tie-breaking result is preserved.

use rust_decimal::Decimal;

use crate::error::SolveError;
use crate::model::{BatteryState, Instance};

use super::jobs::{build_jobs, ChargeJob};
use super::simulate::{simulate, StartPolicy};
use super::{finish, start_key, Solution, SolveObjective};

pub fn solve_exact(instance: &Instance, objective: SolveObjective) -> Result<Solution, SolveError> {
    instance.check()?;
    if let Some(hour) = arrival_shortfall(instance) {
        return Err(SolveError::Infeasible {
            hour,
            reason: "more returns than batteries out of the station".to_string(),
        });
    }
    let jobs = build_jobs(instance);
    let greedy = simulate(instance, &jobs, StartPolicy::Greedy);
    if objective == SolveObjective::Feasibility && greedy.failure.is_none() {
        return Ok(finish(instance, &jobs, greedy.grid, greedy.starts));
    }

    let mut search = Search::new(instance, &jobs);
    if greedy.failure.is_none() {
        let key = start_key(&greedy.starts, instance.horizon());
        let cost = search.vector_cost(&key);
        search.best = Some((cost, key));
    }
    search.dfs(0);

    match search.best {
        Some((_, key)) => {
            let horizon = instance.horizon();
            let starts: Vec<Option<usize>> = key
                .into_iter()
                .map(|s| (s <= horizon).then_some(s))
                .collect();
            let sim = simulate(instance, &jobs, StartPolicy::Fixed(&starts));
            debug_assert!(sim.failure.is_none());
            Ok(finish(instance, &jobs, sim.grid, starts))
        }
        None => {
            let (hour, reason) = greedy
                .failure
                .unwrap_or((1, "no feasible start vector".to_string()));
            Err(SolveError::Infeasible { hour, reason })
        }
    }
}

/// First hour whose returns exceed the batteries that can be out, assuming
/// every demanded swap is served.
pub(crate) fn arrival_shortfall(instance: &Instance) -> Option<usize> {
    let mut out = instance.initial.count(BatteryState::Out) as i64;
    let ev = &instance.events;
    for t in 1..instance.horizon() {
        if (ev.arrivals[t] as i64) > out {
            return Some(t + 1);
        }
        out += ev.demand[t] as i64 - ev.arrivals[t] as i64;
    }
    None
}

struct JobInfo {
    release: usize,
    duration: usize,
    follows_twin: bool,
    /// Cheapest block that still ends early enough to serve a swap.
    cheapest_completion: Option<Decimal>,
}

struct Search {
    horizon: usize,
    chargers: u32,
    jobs: Vec<JobInfo>,
    /// prefix[h] = sum of prices of hours 1..=h.
    prefix: Vec<Decimal>,
    usage: Vec<u32>,
    /// Number of charges whose battery is full from hour h on.
    done_at: Vec<u32>,
    init_full: u32,
    /// cum_demand[h] = swaps demanded in hours 1..=h.
    cum_demand: Vec<u32>,
    current: Vec<usize>,
    cost: Decimal,
    best: Option<(Decimal, Vec<usize>)>,
    best_from_search: bool,
}

impl Search {
    fn new(instance: &Instance, jobs: &[ChargeJob]) -> Self {
        let horizon = instance.horizon();
        let mut prefix = vec![Decimal::ZERO; horizon + 1];
        for h in 1..=horizon {
            prefix[h] = prefix[h - 1] + instance.events.price[h - 1];
        }
        let mut cum_demand = vec![0u32; horizon + 1];
        for h in 1..=horizon {
            cum_demand[h] = cum_demand[h - 1] + instance.events.demand[h - 1];
        }

        let mut search = Search {
            horizon,
            chargers: instance.config.n_chargers as u32,
            jobs: Vec::new(),
            prefix,
            usage: vec![0; horizon + 2],
            done_at: vec![0; horizon + 2],
            init_full: instance.initial.count(BatteryState::Full) as u32,
            cum_demand,
            current: Vec::new(),
            cost: Decimal::ZERO,
            best: None,
            best_from_search: false,
        };

        let mut prev: Option<&ChargeJob> = None;
        for job in jobs {
            if job.is_fixed() {
                search.occupy(1, job.duration, 1);
                search.cost += search.block_cost(1, job.duration);
                continue;
            }
            let cheapest_completion = (job.release_hour..=horizon)
                .filter(|&s| s + job.duration < horizon)
                .map(|s| search.block_cost(s, job.duration))
                .min();
            search.jobs.push(JobInfo {
                release: job.release_hour,
                duration: job.duration,
                follows_twin: prev.is_some_and(|p| p.interchangeable(job)),
                cheapest_completion,
            });
            prev = Some(job);
        }
        search
    }

    fn block_end(&self, start: usize, duration: usize) -> usize {
        (start + duration - 1).min(self.horizon)
    }

    fn block_cost(&self, start: usize, duration: usize) -> Decimal {
        self.prefix[self.block_end(start, duration)] - self.prefix[start - 1]
    }

    fn vector_cost(&self, key: &[usize]) -> Decimal {
        let mut cost = self.cost;
        for (info, &s) in self.jobs.iter().zip(key) {
            if s <= self.horizon {
                cost += self.block_cost(s, info.duration);
            }
        }
        cost
    }

    fn occupy(&mut self, start: usize, duration: usize, delta: i32) {
        for h in start..=self.block_end(start, duration) {
            self.usage[h] = (self.usage[h] as i32 + delta) as u32;
        }
        let full_from = start + duration;
        if full_from <= self.horizon {
            self.done_at[full_from] = (self.done_at[full_from] as i32 + delta) as u32;
        }
    }

    fn fits(&self, start: usize, duration: usize) -> bool {
        (start..=self.block_end(start, duration)).all(|h| self.usage[h] < self.chargers)
    }

    /// Checks that jobs `next..` can still cover every hour's demand and
    /// returns how many of them must complete at minimum.
    #[allow(clippy::needless_range_loop)]
    fn required_completions(&self, next: usize) -> Option<u32> {
        let mut optimistic = vec![0u32; self.horizon + 2];
        for info in &self.jobs[next..] {
            let full_from = info.release + info.duration;
            if full_from <= self.horizon {
                optimistic[full_from] += 1;
            }
        }
        let mut assigned = self.init_full;
        let mut possible = 0u32;
        let mut required = 0u32;
        // a swap at hour h+1 needs a battery full at hour h
        for h in 1..self.horizon {
            assigned += self.done_at[h];
            possible += optimistic[h];
            let need = self.cum_demand[h + 1];
            if assigned + possible < need {
                return None;
            }
            required = required.max(need.saturating_sub(assigned));
        }
        Some(required)
    }

    fn lower_bound(&self, next: usize) -> Option<Decimal> {
        let required = self.required_completions(next)? as usize;
        if required == 0 {
            return Some(self.cost);
        }
        let mut cheapest: Vec<Decimal> = self.jobs[next..]
            .iter()
            .filter_map(|j| j.cheapest_completion)
            .collect();
        if cheapest.len() < required {
            return None;
        }
        cheapest.sort_unstable();
        Some(self.cost + cheapest[..required].iter().copied().sum::<Decimal>())
    }

    fn pruned(&self, bound: Decimal) -> bool {
        match &self.best {
            None => false,
            Some((best, _)) => bound > *best || (bound == *best && self.best_from_search),
        }
    }

    fn dfs(&mut self, next: usize) {
        let Some(bound) = self.lower_bound(next) else {
            return;
        };
        if self.pruned(bound) {
            return;
        }
        if next == self.jobs.len() {
            let better = match &self.best {
                None => true,
                Some((best, key)) => {
                    self.cost < *best || (self.cost == *best && self.current <= *key)
                }
            };
            if better {
                self.best = Some((self.cost, self.current.clone()));
                self.best_from_search = true;
            }
            return;
        }

        let never = self.horizon + 1;
        let (release, duration) = (self.jobs[next].release, self.jobs[next].duration);
        let mut lo = release;
        if self.jobs[next].follows_twin {
            lo = lo.max(self.current[next - 1]);
        }
        for start in lo..=self.horizon {
            if !self.fits(start, duration) {
                continue;
            }
            let block = self.block_cost(start, duration);
            self.occupy(start, duration, 1);
            self.cost += block;
            self.current.push(start);
            self.dfs(next + 1);
            self.current.pop();
            self.cost -= block;
            self.occupy(start, duration, -1);
        }
        self.current.push(never);
        self.dfs(next + 1);
        self.current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EventProfiles, InitialBattery, InitialConditions, StationConfig};

    fn valley() -> Instance {
        let cfg = StationConfig::new(1, 1, 2, 20.0, 6).unwrap();
        let init = InitialConditions::new(vec![InitialBattery::empty()]);
        let mut ev = EventProfiles::zeros(6);
        ev.demand[5] = 1;
        ev.price = [10, 10, 1, 1, 10, 10].map(Decimal::from).to_vec();
        Instance::new(cfg, init, ev).unwrap()
    }

    #[test]
    fn valley_start_three() {
        let sol = solve_exact(&valley(), SolveObjective::MinCost).unwrap();
        assert_eq!(sol.starts, vec![Some(3)]);
        assert_eq!(sol.cost.price_charge_hours, Decimal::from(2));
        assert_eq!(sol.cost.total, 20.0);
    }

    #[test]
    fn feasibility_objective_returns_greedy() {
        let sol = solve_exact(&valley(), SolveObjective::Feasibility).unwrap();
        assert_eq!(sol.starts, vec![Some(1)]);
    }

    #[test]
    fn zero_demand_charges_nothing() {
        let mut inst = valley();
        inst.events.demand[5] = 0;
        let sol = solve_exact(&inst, SolveObjective::MinCost).unwrap();
        assert_eq!(sol.starts, vec![None]);
        assert_eq!(sol.cost.total, 0.0);
    }

    #[test]
    fn arrival_shortfall_is_infeasible() {
        let cfg = StationConfig::new(1, 1, 2, 20.0, 4).unwrap();
        let init = InitialConditions::new(vec![InitialBattery::full(0)]);
        let mut ev = EventProfiles::zeros(4);
        ev.arrivals[1] = 1;
        let inst = Instance::new(cfg, init, ev).unwrap();
        assert_eq!(arrival_shortfall(&inst), Some(2));
        assert!(matches!(
            solve_exact(&inst, SolveObjective::MinCost),
            Err(SolveError::Infeasible { hour: 2, .. })
        ));
    }
}
