//! Hour-by-hour station simulation shared by every solver.
//!
//! Within hour t (t >= 2) the order is: returns land (O->E), finished charges
//! become full (C->F), chargers pick up waiting batteries (E->C), then swaps
//! are served from what was full at t-1 (F->O). Hour 1 only starts charges.

use crate::model::{BatteryState, Instance, ScheduleGrid};

use super::jobs::{ChargeJob, JobOrigin};

/// How waiting batteries get on a charger.
#[derive(Debug, Clone, Copy)]
pub(crate) enum StartPolicy<'a> {
    /// Start each decision job exactly at the given hour (or never).
    Fixed(&'a [Option<usize>]),
    /// Fill free chargers in queue order: time the battery became empty,
    /// then battery index.
    Greedy,
}

#[derive(Debug, Clone)]
pub(crate) struct Simulation {
    pub grid: ScheduleGrid,
    /// Start hour per decision job.
    pub starts: Vec<Option<usize>>,
    /// First hour at which an event could not be realized.
    pub failure: Option<(usize, String)>,
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Empty { since: usize, job: usize },
    Charging { finish: usize },
    Full { since: usize, rank: u32 },
    Out { since: usize },
}

impl Slot {
    fn state(self) -> BatteryState {
        match self {
            Slot::Empty { .. } => BatteryState::Empty,
            Slot::Charging { .. } => BatteryState::Charging,
            Slot::Full { .. } => BatteryState::Full,
            Slot::Out { .. } => BatteryState::Out,
        }
    }
}

/// `jobs` is the full list from `build_jobs`; decision indices count only
/// the non-continuation entries.
pub(crate) fn simulate(
    instance: &Instance,
    jobs: &[ChargeJob],
    policy: StartPolicy<'_>,
) -> Simulation {
    let config = &instance.config;
    let horizon = config.horizon;
    let n = config.n_batteries;

    let decisions: Vec<&ChargeJob> = jobs.iter().filter(|j| !j.is_fixed()).collect();
    let mut starts: Vec<Option<usize>> = match policy {
        StartPolicy::Fixed(s) => s.to_vec(),
        StartPolicy::Greedy => vec![None; decisions.len()],
    };
    let mut next_arrival_job = decisions
        .iter()
        .position(|j| j.origin == JobOrigin::Arrival)
        .unwrap_or(decisions.len());

    let mut slots: Vec<Slot> = Vec::with_capacity(n);
    for (b, init) in instance.initial.batteries.iter().enumerate() {
        let slot = match init.state {
            BatteryState::Empty => {
                let job = decisions
                    .iter()
                    .position(|j| j.origin == JobOrigin::InitialEmpty && j.battery == Some(b))
                    .expect("every initially empty battery has a job");
                Slot::Empty { since: 0, job }
            }
            BatteryState::Charging => Slot::Charging {
                finish: 1 + config.charge_hours - init.progress,
            },
            BatteryState::Full => Slot::Full {
                since: 0,
                rank: init.full_rank.unwrap_or(u32::MAX),
            },
            BatteryState::Out => Slot::Out { since: 0 },
        };
        slots.push(slot);
    }

    let mut grid = ScheduleGrid::filled(n, horizon, BatteryState::Out);
    let mut failure: Option<(usize, String)> = None;
    let mut fail = |hour: usize, msg: String| {
        if failure.is_none() {
            failure = Some((hour, msg));
        }
    };

    for hour in 1..=horizon {
        let t = hour - 1;
        if hour >= 2 {
            // returns
            let wanted = instance.events.arrivals[t] as usize;
            let mut out: Vec<(usize, usize)> = slots
                .iter()
                .enumerate()
                .filter_map(|(b, s)| match *s {
                    Slot::Out { since } if since < hour => Some((since, b)),
                    _ => None,
                })
                .collect();
            out.sort_unstable();
            if out.len() < wanted {
                fail(
                    hour,
                    format!("{wanted} return(s) but only {} battery(ies) out", out.len()),
                );
            }
            for k in 0..wanted {
                let job = next_arrival_job;
                next_arrival_job += 1;
                if let Some(&(_, b)) = out.get(k) {
                    slots[b] = Slot::Empty { since: hour, job };
                }
            }

            // completions
            for slot in slots.iter_mut() {
                if let Slot::Charging { finish } = *slot {
                    if finish == hour {
                        *slot = Slot::Full {
                            since: hour,
                            rank: 0,
                        };
                    }
                }
            }
        }

        // charger assignment
        match policy {
            StartPolicy::Fixed(_) => {
                for slot in slots.iter_mut() {
                    if let Slot::Empty { job, .. } = *slot {
                        if starts[job] == Some(hour) {
                            *slot = Slot::Charging {
                                finish: hour + decisions[job].duration,
                            };
                        }
                    }
                }
            }
            StartPolicy::Greedy => {
                let busy = slots
                    .iter()
                    .filter(|s| matches!(s, Slot::Charging { .. }))
                    .count();
                let free = config.n_chargers.saturating_sub(busy);
                let mut queue: Vec<(usize, usize, usize)> = slots
                    .iter()
                    .enumerate()
                    .filter_map(|(b, s)| match *s {
                        Slot::Empty { since, job } if decisions[job].release_hour <= hour => {
                            Some((since, b, job))
                        }
                        _ => None,
                    })
                    .collect();
                queue.sort_unstable();
                for &(_, b, job) in queue.iter().take(free) {
                    starts[job] = Some(hour);
                    slots[b] = Slot::Charging {
                        finish: hour + decisions[job].duration,
                    };
                }
            }
        }

        if hour >= 2 {
            // swaps
            let wanted = instance.events.demand[t] as usize;
            let mut full: Vec<(usize, u32, usize)> = slots
                .iter()
                .enumerate()
                .filter_map(|(b, s)| match *s {
                    Slot::Full { since, rank } if since < hour => Some((since, rank, b)),
                    _ => None,
                })
                .collect();
            full.sort_unstable();
            if full.len() < wanted {
                fail(
                    hour,
                    format!(
                        "demand {wanted} but only {} full battery(ies) at hour {}",
                        full.len(),
                        hour - 1
                    ),
                );
            }
            for &(_, _, b) in full.iter().take(wanted) {
                slots[b] = Slot::Out { since: hour };
            }
        }

        for (b, slot) in slots.iter().enumerate() {
            grid.set(b, t, slot.state());
        }
    }

    Simulation {
        grid,
        starts,
        failure,
    }
}
