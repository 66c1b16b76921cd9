use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;
use serde::Serialize;

use crate::error::ModelError;
use crate::model::{BatteryState, ScheduleGrid, StationConfig};

/// Electricity cost of a schedule.
///
/// Money amounts are reported as `f64`; the exact objective used for
/// comparisons is [`CostBreakdown::price_charge_hours`], the sum over
/// charging cells of the hour's price. Every amount is that quantity (or a
/// slice of it) times the constant charging power.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub total: f64,
    pub per_hour: Vec<f64>,
    pub per_battery: Vec<f64>,
    pub energy_kwh: f64,
    #[serde(skip)]
    pub price_charge_hours: Decimal,
}

impl CostBreakdown {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cost serializes")
    }
}

pub fn schedule_cost(
    grid: &ScheduleGrid,
    config: &StationConfig,
    price: &[Decimal],
) -> Result<CostBreakdown, ModelError> {
    if price.len() != grid.horizon() {
        return Err(ModelError::Dimension(format!(
            "price covers {} hours, schedule has {}",
            price.len(),
            grid.horizon()
        )));
    }
    let power = config.charge_power_kw();
    let money = |d: Decimal| d.to_f64().expect("decimal fits f64") * power;

    let mut hour_weight = vec![Decimal::ZERO; grid.horizon()];
    let mut battery_weight = vec![Decimal::ZERO; grid.n_batteries()];
    let mut cells = 0usize;
    for (b, row) in grid.rows().enumerate() {
        for (t, &state) in row.iter().enumerate() {
            if state == BatteryState::Charging {
                hour_weight[t] += price[t];
                battery_weight[b] += price[t];
                cells += 1;
            }
        }
    }
    let exact: Decimal = hour_weight.iter().sum();
    Ok(CostBreakdown {
        total: money(exact),
        per_hour: hour_weight.into_iter().map(money).collect(),
        per_battery: battery_weight.into_iter().map(money).collect(),
        energy_kwh: cells as f64 * power,
        price_charge_hours: exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_text::parse_grid_inferred;

    fn dec(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn two_charging_cells() {
        let grid = parse_grid_inferred("B1: C C F").unwrap();
        let cfg = StationConfig::new(1, 1, 2, 20.0, 3)
            .unwrap()
            .with_charge_power(10.0)
            .unwrap();
        let cost = schedule_cost(&grid, &cfg, &[dec("1"), dec("2"), dec("3")]).unwrap();
        assert_eq!(cost.total, 30.0);
        assert_eq!(cost.per_hour, vec![10.0, 20.0, 0.0]);
        assert_eq!(cost.per_battery, vec![30.0]);
        assert_eq!(cost.energy_kwh, 20.0);
        assert_eq!(cost.price_charge_hours, dec("3"));
    }

    #[test]
    fn zero_prices_cost_nothing() {
        let grid = parse_grid_inferred("B1: C C F\nB2: E C C\n").unwrap();
        let cfg = StationConfig::new(2, 2, 2, 20.0, 3).unwrap();
        let cost = schedule_cost(&grid, &cfg, &[Decimal::ZERO; 3]).unwrap();
        assert_eq!(cost.total, 0.0);
        assert!(cost.energy_kwh > 0.0);
    }

    #[test]
    fn horizon_mismatch() {
        let grid = parse_grid_inferred("B1: C C F").unwrap();
        let cfg = StationConfig::new(1, 1, 2, 20.0, 3).unwrap();
        assert!(schedule_cost(&grid, &cfg, &[Decimal::ONE; 2]).is_err());
    }

    #[test]
    fn json_has_report_keys_only() {
        let grid = parse_grid_inferred("B1: C F").unwrap();
        let cfg = StationConfig::new(1, 1, 1, 10.0, 2).unwrap();
        let cost = schedule_cost(&grid, &cfg, &[Decimal::ONE; 2]).unwrap();
        let json: serde_json::Value = serde_json::from_str(&cost.to_json()).unwrap();
        let mut keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["energy_kwh", "per_battery", "per_hour", "total"]);
    }
}
