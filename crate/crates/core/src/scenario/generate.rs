//! Seeded synthetic instances. Demand, arrival and tariff shapes are
//! simple test-harness inventions, not a demand model.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::{
    BatteryState, EventProfiles, InitialBattery, InitialConditions, Instance, StationConfig,
};
use crate::scheduler::{build_jobs, solve_greedy};

/// Per-hour count profile (demand or arrivals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CountShape {
    /// `total` units dropped on uniformly random hours 2..=T.
    Uniform { total: u32 },
    /// `total` units drawn from a triangle centred on `peak_hour`.
    Peaked {
        total: u32,
        peak_hour: usize,
        width: usize,
    },
    /// Taken verbatim, one value per hour.
    Explicit { values: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TariffShape {
    Flat {
        price: Decimal,
    },
    TimeOfUse {
        off_peak_price: Decimal,
        peak_price: Decimal,
        peak_hours: Vec<usize>,
    },
    Explicit {
        values: Vec<Decimal>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub config: StationConfig,
    pub demand_shape: CountShape,
    pub arrival_shape: CountShape,
    pub tariff_shape: TariffShape,
    /// Drawn at random from the seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialConditions>,
    pub seed: u64,
}

/// Builds an instance from a spec; a pure function of the spec.
///
/// Shape-generated arrivals never exceed the batteries out of the station,
/// and shape-generated demand is trimmed from the latest hours until the
/// total fits within initial full batteries plus the charges that can
/// complete in time. Explicit lists are used as given.
pub fn generate(spec: &ScenarioSpec) -> Result<Instance, ModelError> {
    let config = &spec.config;
    config.check()?;
    let horizon = config.horizon;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let initial = match &spec.initial {
        Some(init) => init.clone(),
        None => random_initial(config, &mut rng),
    };
    initial.check(config)?;

    let mut demand = draw_counts(&spec.demand_shape, horizon, &mut rng);
    let raw_arrivals = draw_counts(&spec.arrival_shape, horizon, &mut rng);
    let price = draw_tariff(&spec.tariff_shape, horizon);

    let clip_arrivals = !matches!(spec.arrival_shape, CountShape::Explicit { .. });
    let cap_demand = !matches!(spec.demand_shape, CountShape::Explicit { .. });
    let init_out = initial.count(BatteryState::Out) as u32;
    let init_full = initial.count(BatteryState::Full) as u32;

    let mut arrivals;
    loop {
        arrivals = if clip_arrivals {
            clip_to_out_inventory(&raw_arrivals, &demand, init_out)
        } else {
            raw_arrivals.clone()
        };
        if !cap_demand {
            break;
        }
        let trial = Instance {
            config: config.clone(),
            initial: initial.clone(),
            events: EventProfiles {
                demand: demand.clone(),
                arrivals: arrivals.clone(),
                price: price.clone(),
            },
        };
        let bound = init_full + completions_in_time(&trial);
        if demand.iter().sum::<u32>() <= bound {
            break;
        }
        let last = demand.iter().rposition(|&d| d > 0).expect("positive total");
        demand[last] -= 1;
    }

    Instance::new(
        config.clone(),
        initial,
        EventProfiles {
            demand,
            arrivals,
            price,
        },
    )
}

/// Whether the greedy solver serves the instance, which is exactly when any
/// schedule does.
pub fn label_feasibility(instance: &Instance) -> bool {
    solve_greedy(instance).is_ok()
}

fn random_initial(config: &StationConfig, rng: &mut ChaCha8Rng) -> InitialConditions {
    let mut next_rank = 0;
    let mut charging = 0;
    let batteries = (0..config.n_batteries)
        .map(|_| match rng.gen_range(0..4) {
            0 => InitialBattery::empty(),
            // never more batteries on chargers than chargers
            1 if charging == config.n_chargers => InitialBattery::empty(),
            1 => {
                charging += 1;
                InitialBattery::charging(rng.gen_range(0..config.charge_hours))
            }
            2 => {
                next_rank += 1;
                InitialBattery::full(next_rank - 1)
            }
            _ => InitialBattery::out(),
        })
        .collect();
    InitialConditions::new(batteries)
}

fn draw_counts(shape: &CountShape, horizon: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut counts = vec![0u32; horizon];
    match shape {
        CountShape::Explicit { values } => return values.clone(),
        _ if horizon < 2 => {}
        CountShape::Uniform { total } => {
            for _ in 0..*total {
                counts[rng.gen_range(1..horizon)] += 1;
            }
        }
        CountShape::Peaked {
            total,
            peak_hour,
            width,
        } => {
            let weights: Vec<usize> = (2..=horizon)
                .map(|h| (width + 1).saturating_sub(h.abs_diff(*peak_hour)))
                .collect();
            match WeightedIndex::new(&weights) {
                Ok(dist) => {
                    for _ in 0..*total {
                        counts[dist.sample(rng) + 1] += 1;
                    }
                }
                Err(_) => {
                    for _ in 0..*total {
                        counts[rng.gen_range(1..horizon)] += 1;
                    }
                }
            }
        }
    }
    counts
}

fn draw_tariff(shape: &TariffShape, horizon: usize) -> Vec<Decimal> {
    match shape {
        TariffShape::Flat { price } => vec![*price; horizon],
        TariffShape::TimeOfUse {
            off_peak_price,
            peak_price,
            peak_hours,
        } => (1..=horizon)
            .map(|h| {
                if peak_hours.contains(&h) {
                    *peak_price
                } else {
                    *off_peak_price
                }
            })
            .collect(),
        TariffShape::Explicit { values } => values.clone(),
    }
}

fn clip_to_out_inventory(raw: &[u32], demand: &[u32], init_out: u32) -> Vec<u32> {
    let mut out = init_out;
    let mut clipped = vec![0; raw.len()];
    for t in 1..raw.len() {
        clipped[t] = raw[t].min(out);
        out = out - clipped[t] + demand[t];
    }
    clipped
}

/// Charges that can finish by hour T-1 under earliest-release list
/// scheduling, the most any schedule can complete by then.
fn completions_in_time(instance: &Instance) -> u32 {
    let horizon = instance.horizon();
    let mut free_at = vec![1usize; instance.config.n_chargers];
    let mut done = 0;
    for job in build_jobs(instance) {
        let (k, &avail) = free_at
            .iter()
            .enumerate()
            .min_by_key(|&(_, f)| *f)
            .expect("at least one charger");
        let start = avail.max(job.release_hour);
        free_at[k] = start + job.duration;
        if start + job.duration < horizon {
            done += 1;
        }
    }
    done
}
