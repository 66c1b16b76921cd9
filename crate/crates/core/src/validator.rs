//! Constraint checks for a schedule grid against an instance.
//!
//! Each check is a free function returning its own violations so callers can
//! run them individually; [`validate`] is their union plus per-hour
//! statistics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::{
    BatteryState, EventProfiles, InitialConditions, Instance, ScheduleGrid, StationConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintId {
    /// Neighbouring hours follow E -> C -> F -> O -> E.
    Adjacency,
    /// Every hour accounts for all batteries of the station.
    Conservation,
    /// No more batteries charging than chargers.
    ChargerCapacity,
    /// Swaps land exactly as demanded and are drawn from full inventory.
    DemandCoverage,
    /// Returns land exactly as given.
    Arrivals,
    /// Completed charge runs last long enough.
    ChargeDuration,
    /// Hour 1 agrees with the declared initial state.
    InitialState,
}

impl ConstraintId {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintId::Adjacency => "adjacency",
            ConstraintId::Conservation => "conservation",
            ConstraintId::ChargerCapacity => "charger_capacity",
            ConstraintId::DemandCoverage => "demand_coverage",
            ConstraintId::Arrivals => "arrivals",
            ConstraintId::ChargeDuration => "charge_duration",
            ConstraintId::InitialState => "initial_state",
        }
    }
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single failed constraint. Battery and hour are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: ConstraintId,
    pub battery: Option<usize>,
    pub hour: Option<usize>,
    pub message: String,
}

impl Violation {
    fn new(
        constraint: ConstraintId,
        battery: Option<usize>,
        hour: Option<usize>,
        message: impl Into<String>,
    ) -> Self {
        Violation {
            constraint,
            battery,
            hour,
            message: message.into(),
        }
    }

    /// (constraint, battery, hour) without the message.
    pub fn locus(&self) -> (ConstraintId, Option<usize>, Option<usize>) {
        (self.constraint, self.battery, self.hour)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.constraint)?;
        if let Some(b) = self.battery {
            write!(f, " B{b}")?;
        }
        if let Some(t) = self.hour {
            write!(f, " hour {t}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DurationMode {
    /// Completed runs must be at least `charge_hours`; lingering allowed.
    #[default]
    Lenient,
    /// Completed runs must be exactly `charge_hours`.
    Strict,
}

impl FromStr for DurationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lenient" => Ok(DurationMode::Lenient),
            "strict" => Ok(DurationMode::Strict),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HourlyCounts {
    #[serde(rename = "E")]
    pub empty: Vec<usize>,
    #[serde(rename = "C")]
    pub charging: Vec<usize>,
    #[serde(rename = "F")]
    pub full: Vec<usize>,
    #[serde(rename = "O")]
    pub out: Vec<usize>,
    pub chargers: Vec<usize>,
}

impl HourlyCounts {
    pub fn from_grid(grid: &ScheduleGrid) -> Self {
        let mut counts = HourlyCounts::default();
        for c in grid.hourly_counts() {
            counts.empty.push(c[BatteryState::Empty.index()]);
            counts.charging.push(c[BatteryState::Charging.index()]);
            counts.full.push(c[BatteryState::Full.index()]);
            counts.out.push(c[BatteryState::Out.index()]);
            counts.chargers.push(c[BatteryState::Charging.index()]);
        }
        counts
    }

    /// (E, C, F, O) at a 1-based hour.
    pub fn at(&self, hour: usize) -> (usize, usize, usize, usize) {
        let t = hour - 1;
        (self.empty[t], self.charging[t], self.full[t], self.out[t])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub hourly: HourlyCounts,
}

impl ValidationReport {
    pub fn classes(&self) -> Vec<ConstraintId> {
        let mut ids: Vec<_> = self.violations.iter().map(|v| v.constraint).collect();
        ids.sort();
        ids.dedup();
        ids
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Letter grid, count rows and one line per violation.
    pub fn to_text(&self, grid: &ScheduleGrid) -> String {
        let mut out = crate::grid_text::render_grid(grid);
        out.push_str(&crate::grid_text::render_counts(grid));
        if self.feasible {
            out.push_str("feasible\n");
        } else {
            out.push_str(&format!(
                "infeasible: {} violation(s)\n",
                self.violations.len()
            ));
            for v in &self.violations {
                out.push_str(&format!("  {v}\n"));
            }
        }
        out
    }
}

pub fn check_adjacency(grid: &ScheduleGrid) -> Vec<Violation> {
    grid.illegal_transitions()
        .into_iter()
        .map(|(b, t)| {
            let (from, to) = (grid.get(b, t - 1), grid.get(b, t));
            Violation::new(
                ConstraintId::Adjacency,
                Some(b + 1),
                Some(t + 1),
                format!("{from}->{to} is not a legal transition"),
            )
        })
        .collect()
}

pub fn check_conservation(grid: &ScheduleGrid, config: &StationConfig) -> Vec<Violation> {
    grid.hourly_counts()
        .iter()
        .enumerate()
        .filter_map(|(t, c)| {
            let total: usize = c.iter().sum();
            (total != config.n_batteries).then(|| {
                Violation::new(
                    ConstraintId::Conservation,
                    None,
                    Some(t + 1),
                    format!(
                        "E+C+F+O = {total} but the station owns {} batteries",
                        config.n_batteries
                    ),
                )
            })
        })
        .collect()
}

pub fn check_charger_capacity(grid: &ScheduleGrid, config: &StationConfig) -> Vec<Violation> {
    (0..grid.horizon())
        .filter_map(|t| {
            let used = grid.count_at(t, BatteryState::Charging);
            (used > config.n_chargers).then(|| {
                Violation::new(
                    ConstraintId::ChargerCapacity,
                    None,
                    Some(t + 1),
                    format!("{used} batteries charging, {} chargers", config.n_chargers),
                )
            })
        })
        .collect()
}

pub fn check_demand_coverage(grid: &ScheduleGrid, events: &EventProfiles) -> Vec<Violation> {
    let mut out = Vec::new();
    for t in 1..grid.horizon() {
        let demand = events.demand[t] as usize;
        let swaps = grid.edges_at(t, BatteryState::Full, BatteryState::Out);
        if swaps != demand {
            out.push(Violation::new(
                ConstraintId::DemandCoverage,
                None,
                Some(t + 1),
                format!("{swaps} swap(s) land, demand is {demand}"),
            ));
        }
        let inventory = grid.count_at(t - 1, BatteryState::Full);
        if inventory < demand {
            out.push(Violation::new(
                ConstraintId::DemandCoverage,
                None,
                Some(t + 1),
                format!("{inventory} full batteries at hour {t}, demand is {demand}"),
            ));
        }
    }
    out
}

pub fn check_arrivals(grid: &ScheduleGrid, events: &EventProfiles) -> Vec<Violation> {
    (1..grid.horizon())
        .filter_map(|t| {
            let expected = events.arrivals[t] as usize;
            let landed = grid.edges_at(t, BatteryState::Out, BatteryState::Empty);
            (landed != expected).then(|| {
                Violation::new(
                    ConstraintId::Arrivals,
                    None,
                    Some(t + 1),
                    format!("{landed} return(s) land, expected {expected}"),
                )
            })
        })
        .collect()
}

/// Checks every maximal charging run that completes (C->F) inside the
/// horizon. Runs cut off by the end of the horizon are not judged.
pub fn check_charge_duration(
    grid: &ScheduleGrid,
    config: &StationConfig,
    initial: &InitialConditions,
    mode: DurationMode,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let required = config.charge_hours;
    for (b, row) in grid.rows().enumerate() {
        let mut t = 0;
        while t < row.len() {
            if row[t] != BatteryState::Charging {
                t += 1;
                continue;
            }
            let start = t;
            while t < row.len() && row[t] == BatteryState::Charging {
                t += 1;
            }
            let completes = t < row.len() && row[t] == BatteryState::Full;
            if !completes {
                continue;
            }
            let carried = match initial.batteries.get(b) {
                Some(init) if start == 0 && init.state == BatteryState::Charging => init.progress,
                _ => 0,
            };
            let effective = t - start + carried;
            let bad = match mode {
                DurationMode::Lenient => effective < required,
                DurationMode::Strict => effective != required,
            };
            if bad {
                out.push(Violation::new(
                    ConstraintId::ChargeDuration,
                    Some(b + 1),
                    Some(start + 1),
                    format!(
                        "charge run hours {}-{} counts {effective} h, needs {}{required} h",
                        start + 1,
                        t,
                        if mode == DurationMode::Strict {
                            "exactly "
                        } else {
                            "at least "
                        }
                    ),
                ));
            }
        }
    }
    out
}

/// Hour 1 must show the declared state. A battery declared empty may
/// already be on a charger at hour 1, since its charge job is released then.
pub fn check_initial(grid: &ScheduleGrid, initial: &InitialConditions) -> Vec<Violation> {
    if grid.horizon() == 0 {
        return Vec::new();
    }
    initial
        .batteries
        .iter()
        .enumerate()
        .take(grid.n_batteries())
        .filter_map(|(b, init)| {
            let actual = grid.get(b, 0);
            let ok = actual == init.state
                || (init.state == BatteryState::Empty && actual == BatteryState::Charging);
            (!ok).then(|| {
                Violation::new(
                    ConstraintId::InitialState,
                    Some(b + 1),
                    Some(1),
                    format!("declared {}, schedule shows {actual}", init.state),
                )
            })
        })
        .collect()
}

pub fn validate(
    grid: &ScheduleGrid,
    instance: &Instance,
    mode: DurationMode,
) -> Result<ValidationReport, ModelError> {
    let config = &instance.config;
    if !grid.matches_config(config) {
        return Err(ModelError::Dimension(format!(
            "schedule is {}x{}, instance expects {}x{}",
            grid.n_batteries(),
            grid.horizon(),
            config.n_batteries,
            config.horizon
        )));
    }
    if instance.initial.len() != config.n_batteries {
        return Err(ModelError::Dimension(
            "initial conditions do not cover every battery".to_string(),
        ));
    }
    if instance.events.horizon() != config.horizon {
        return Err(ModelError::Dimension(
            "event profiles do not cover the horizon".to_string(),
        ));
    }
    let mut violations = check_adjacency(grid);
    violations.extend(check_conservation(grid, config));
    violations.extend(check_charger_capacity(grid, config));
    violations.extend(check_demand_coverage(grid, &instance.events));
    violations.extend(check_arrivals(grid, &instance.events));
    violations.extend(check_charge_duration(grid, config, &instance.initial, mode));
    violations.extend(check_initial(grid, &instance.initial));
    Ok(ValidationReport {
        feasible: violations.is_empty(),
        violations,
        hourly: HourlyCounts::from_grid(grid),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_text::parse_grid_inferred;
    use crate::model::InitialBattery;
    use BatteryState::*;

    fn grid(text: &str) -> ScheduleGrid {
        parse_grid_inferred(text).unwrap()
    }

    #[test]
    fn conservation_holds_for_any_well_formed_grid() {
        let g = ScheduleGrid::filled(1, 1, Empty);
        let cfg = StationConfig::new(1, 1, 1, 1.0, 1).unwrap();
        assert!(check_conservation(&g, &cfg).is_empty());
    }

    #[test]
    fn conservation_fires_on_wrong_fleet_size() {
        let g = grid("B1: O E\nB2: F O\n");
        let cfg = StationConfig::new(3, 1, 1, 1.0, 2).unwrap();
        let v = check_conservation(&g, &cfg);
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|v| v.constraint == ConstraintId::Conservation));
    }

    #[test]
    fn capacity_zero_usage() {
        let g = ScheduleGrid::filled(4, 3, Out);
        let cfg = StationConfig::new(4, 1, 1, 1.0, 3).unwrap();
        assert!(check_charger_capacity(&g, &cfg).is_empty());
    }

    #[test]
    fn duration_short_run_fails_both_modes() {
        let g = grid("B1: C C F");
        let cfg = StationConfig::new(1, 1, 3, 1.0, 3).unwrap();
        let init = InitialConditions::new(vec![InitialBattery::empty()]);
        for mode in [DurationMode::Lenient, DurationMode::Strict] {
            let v = check_charge_duration(&g, &cfg, &init, mode);
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].hour, Some(1));
        }
    }

    #[test]
    fn duration_counts_prior_progress_only_from_hour_one() {
        let g = grid("B1: C C F");
        let cfg = StationConfig::new(1, 1, 3, 1.0, 3).unwrap();
        let init = InitialConditions::new(vec![InitialBattery::charging(1)]);
        assert!(check_charge_duration(&g, &cfg, &init, DurationMode::Strict).is_empty());
        let later = grid("B1: E C F");
        let v = check_charge_duration(&later, &cfg, &init, DurationMode::Lenient);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn duration_ignores_truncated_runs() {
        let g = grid("B1: E C C");
        let cfg = StationConfig::new(1, 1, 6, 1.0, 3).unwrap();
        let init = InitialConditions::new(vec![InitialBattery::empty()]);
        assert!(check_charge_duration(&g, &cfg, &init, DurationMode::Strict).is_empty());
    }

    #[test]
    fn lingering_is_lenient_only() {
        let g = grid("B1: C C C F");
        let cfg = StationConfig::new(1, 1, 2, 1.0, 4).unwrap();
        let init = InitialConditions::new(vec![InitialBattery::empty()]);
        assert!(check_charge_duration(&g, &cfg, &init, DurationMode::Lenient).is_empty());
        assert_eq!(
            check_charge_duration(&g, &cfg, &init, DurationMode::Strict).len(),
            1
        );
    }

    #[test]
    fn initial_allows_immediate_charging_of_empty() {
        let g = grid("B1: C F\nB2: F F\n");
        let ok = InitialConditions::new(vec![InitialBattery::empty(), InitialBattery::full(0)]);
        assert!(check_initial(&g, &ok).is_empty());
        let bad = InitialConditions::new(vec![InitialBattery::full(0), InitialBattery::full(1)]);
        let v = check_initial(&g, &bad);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].battery, v[0].hour), (Some(1), Some(1)));
    }

    #[test]
    fn initial_empty_inputs() {
        let g = ScheduleGrid::filled(0, 0, Out);
        assert!(check_initial(&g, &InitialConditions::default()).is_empty());
    }

    #[test]
    fn zero_demand_no_swaps() {
        let g = grid("B1: E C F F");
        let ev = EventProfiles::zeros(4);
        assert!(check_demand_coverage(&g, &ev).is_empty());
        assert!(check_arrivals(&g, &ev).is_empty());
    }

    #[test]
    fn demand_inventory_shortfall() {
        let g = grid("B1: E C F O");
        let mut ev = EventProfiles::zeros(4);
        ev.demand[3] = 2;
        let v = check_demand_coverage(&g, &ev);
        // edge count mismatch plus inventory shortfall
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|v| v.hour == Some(4)));
    }

    #[test]
    fn validate_rejects_dimension_mismatch() {
        let cfg = StationConfig::new(1, 1, 1, 1.0, 3).unwrap();
        let inst = Instance::new(
            cfg,
            InitialConditions::new(vec![InitialBattery::out()]),
            EventProfiles::zeros(3),
        )
        .unwrap();
        assert!(validate(&grid("B1: O O"), &inst, DurationMode::Lenient).is_err());
    }

    #[test]
    fn report_json_shape() {
        let cfg = StationConfig::new(1, 1, 1, 1.0, 2).unwrap();
        let inst = Instance::new(
            cfg,
            InitialConditions::new(vec![InitialBattery::out()]),
            EventProfiles::zeros(2),
        )
        .unwrap();
        let report = validate(&grid("B1: O E"), &inst, DurationMode::Lenient).unwrap();
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["feasible"], false);
        assert_eq!(json["violations"][0]["constraint"], "arrivals");
        assert_eq!(json["violations"][0]["hour"], 2);
        assert!(json["violations"][0]["battery"].is_null());
        assert_eq!(json["hourly"]["E"], serde_json::json!([0, 1]));
        assert_eq!(json["hourly"]["chargers"], serde_json::json!([0, 0]));
    }
}
