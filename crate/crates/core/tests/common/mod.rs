#![allow(dead_code)]

use bss_core::scenario::{generate, CountShape, ScenarioSpec, TariffShape};
use bss_core::{enumeration_size, Instance, StationConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rust_decimal::Decimal;

/// Enumeration cap for the oracle-equivalence suite.
pub const SUITE_BUDGET: u128 = 20_000;

/// Small random station: at most 3 batteries, 2 chargers, 12 hours.
pub fn small_spec(seed: u64) -> ScenarioSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let horizon = rng.gen_range(4..=12);
    let charge_hours = rng.gen_range(1..=3);
    let config = StationConfig::new(
        rng.gen_range(1..=3),
        rng.gen_range(1..=2),
        charge_hours,
        10.0 * charge_hours as f64,
        horizon,
    )
    .unwrap();
    let tariff_shape = if rng.gen_bool(0.5) {
        TariffShape::Explicit {
            values: (0..horizon)
                .map(|_| Decimal::new(rng.gen_range(1..=40), 2))
                .collect(),
        }
    } else {
        let start = rng.gen_range(1..=horizon);
        TariffShape::TimeOfUse {
            off_peak_price: Decimal::new(8, 2),
            peak_price: Decimal::new(30, 2),
            peak_hours: (start..=(start + 3).min(horizon)).collect(),
        }
    };
    ScenarioSpec {
        config,
        demand_shape: CountShape::Uniform {
            total: rng.gen_range(0..=3),
        },
        arrival_shape: CountShape::Uniform {
            total: rng.gen_range(0..=2),
        },
        tariff_shape,
        initial: None,
        seed,
    }
}

/// The first `count` seeded small instances the oracle can enumerate
/// within `budget`.
pub fn oracle_suite(count: usize, budget: u128) -> Vec<(u64, Instance)> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0;
    while out.len() < count {
        let inst = generate(&small_spec(seed)).unwrap();
        if enumeration_size(&inst) <= budget {
            out.push((seed, inst));
        }
        seed += 1;
    }
    out
}
