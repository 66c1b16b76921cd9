//! Domain types for the station: battery states, station configuration,
//! initial conditions, the hour-by-hour schedule grid and the event profiles
//! (demand, arrivals, price) a schedule has to realize.
//!
//! Hours are 1-based everywhere they are reported (violations, CSV, text
//! format). Index-based accessors on [`ScheduleGrid`] and [`EventProfiles`]
//! are 0-based.

use std::fmt;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// State of one battery during one hour.
///
/// Picking exactly one variant per cell is what makes the four state
/// indicators of a battery sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BatteryState {
    /// In the station, depleted, waiting for a charger.
    #[serde(rename = "E")]
    Empty,
    /// On a charger.
    #[serde(rename = "C")]
    Charging,
    /// In the station, fully charged and ready to be swapped out.
    #[serde(rename = "F")]
    Full,
    /// Out of the station, inside a vehicle.
    #[serde(rename = "O")]
    Out,
}

impl BatteryState {
    pub const ALL: [BatteryState; 4] = [
        BatteryState::Empty,
        BatteryState::Charging,
        BatteryState::Full,
        BatteryState::Out,
    ];

    pub fn letter(self) -> char {
        match self {
            BatteryState::Empty => 'E',
            BatteryState::Charging => 'C',
            BatteryState::Full => 'F',
            BatteryState::Out => 'O',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'E' => Some(BatteryState::Empty),
            'C' => Some(BatteryState::Charging),
            'F' => Some(BatteryState::Full),
            'O' => Some(BatteryState::Out),
            _ => None,
        }
    }

    /// Position in `ALL`, used to index per-state counters.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BatteryState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Whether a battery may be in `from` at hour t and in `to` at hour t+1.
///
/// The cycle is E -> C -> F -> O -> E, with every state allowed to persist.
pub fn legal_transition(from: BatteryState, to: BatteryState) -> bool {
    use BatteryState::*;
    matches!(
        (from, to),
        (Empty, Empty)
            | (Empty, Charging)
            | (Charging, Charging)
            | (Charging, Full)
            | (Full, Full)
            | (Full, Out)
            | (Out, Out)
            | (Out, Empty)
    )
}

/// Static description of a station and its planning horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationConfig {
    pub n_batteries: usize,
    pub n_chargers: usize,
    /// Hours on a charger needed to go from empty to full.
    pub charge_hours: usize,
    pub capacity_kwh: f64,
    /// Defaults to `capacity_kwh / charge_hours` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charge_power_kw: Option<f64>,
    pub horizon: usize,
}

impl StationConfig {
    pub fn new(
        n_batteries: usize,
        n_chargers: usize,
        charge_hours: usize,
        capacity_kwh: f64,
        horizon: usize,
    ) -> Result<Self, ModelError> {
        let config = StationConfig {
            n_batteries,
            n_chargers,
            charge_hours,
            capacity_kwh,
            charge_power_kw: None,
            horizon,
        };
        config.check()?;
        Ok(config)
    }

    pub fn with_charge_power(mut self, kw: f64) -> Result<Self, ModelError> {
        self.charge_power_kw = Some(kw);
        self.check()?;
        Ok(self)
    }

    /// Checks the structural invariants. Deserialized configs must go
    /// through this before use.
    pub fn check(&self) -> Result<(), ModelError> {
        let positive = [
            ("n_batteries", self.n_batteries),
            ("n_chargers", self.n_chargers),
            ("charge_hours", self.charge_hours),
            ("horizon", self.horizon),
        ];
        for (name, value) in positive {
            if value == 0 {
                return Err(ModelError::InvalidConfig(format!(
                    "{name} must be at least 1"
                )));
            }
        }
        if !(self.capacity_kwh.is_finite() && self.capacity_kwh > 0.0) {
            return Err(ModelError::InvalidConfig(
                "capacity_kwh must be positive".to_string(),
            ));
        }
        if !(self.charge_power_kw() > 0.0 && self.charge_power_kw().is_finite()) {
            return Err(ModelError::InvalidConfig(
                "charge_power_kw must be positive".to_string(),
            ));
        }
        Ok(())
    }

    pub fn charge_power_kw(&self) -> f64 {
        self.charge_power_kw
            .unwrap_or(self.capacity_kwh / self.charge_hours as f64)
    }
}

/// Declared situation of one battery at the start of the horizon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitialBattery {
    pub state: BatteryState,
    /// Hours already spent on the charger; only non-zero for `Charging`.
    #[serde(default)]
    pub progress: usize,
    /// Orders initially full batteries for swap service (lower goes first).
    #[serde(default)]
    pub full_rank: Option<u32>,
}

impl InitialBattery {
    pub fn empty() -> Self {
        Self::with_state(BatteryState::Empty)
    }

    pub fn out() -> Self {
        Self::with_state(BatteryState::Out)
    }

    pub fn charging(progress: usize) -> Self {
        InitialBattery {
            state: BatteryState::Charging,
            progress,
            full_rank: None,
        }
    }

    pub fn full(rank: u32) -> Self {
        InitialBattery {
            state: BatteryState::Full,
            progress: 0,
            full_rank: Some(rank),
        }
    }

    fn with_state(state: BatteryState) -> Self {
        InitialBattery {
            state,
            progress: 0,
            full_rank: None,
        }
    }
}

/// Initial state of every battery, indexed by battery.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InitialConditions {
    pub batteries: Vec<InitialBattery>,
}

impl InitialConditions {
    pub fn new(batteries: Vec<InitialBattery>) -> Self {
        InitialConditions { batteries }
    }

    pub fn len(&self) -> usize {
        self.batteries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.batteries.is_empty()
    }

    pub fn count(&self, state: BatteryState) -> usize {
        self.batteries.iter().filter(|b| b.state == state).count()
    }

    pub fn check(&self, config: &StationConfig) -> Result<(), ModelError> {
        if self.batteries.len() != config.n_batteries {
            return Err(ModelError::Dimension(format!(
                "initial conditions list {} batteries, config has {}",
                self.batteries.len(),
                config.n_batteries
            )));
        }
        let mut ranks = Vec::new();
        for (b, init) in self.batteries.iter().enumerate() {
            match init.state {
                BatteryState::Charging => {
                    if init.progress >= config.charge_hours {
                        return Err(ModelError::InvalidInitial(format!(
                            "B{}: progress {} must be below charge_hours {}",
                            b + 1,
                            init.progress,
                            config.charge_hours
                        )));
                    }
                }
                _ if init.progress != 0 => {
                    return Err(ModelError::InvalidInitial(format!(
                        "B{}: progress is only meaningful for a charging battery",
                        b + 1
                    )));
                }
                _ => {}
            }
            if init.state == BatteryState::Full {
                if let Some(rank) = init.full_rank {
                    if ranks.contains(&rank) {
                        return Err(ModelError::InvalidInitial(format!(
                            "B{}: full_rank {rank} is used twice",
                            b + 1
                        )));
                    }
                    ranks.push(rank);
                }
            }
        }
        Ok(())
    }
}

/// Battery-by-hour matrix of states.
///
/// The grid does not enforce legal adjacency on its own so that mutated or
/// hand-written schedules can be represented and reported on; see
/// [`ScheduleGrid::illegal_transitions`]. The text parser does enforce it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScheduleGrid {
    n_batteries: usize,
    horizon: usize,
    cells: Vec<BatteryState>,
}

impl ScheduleGrid {
    pub fn filled(n_batteries: usize, horizon: usize, state: BatteryState) -> Self {
        ScheduleGrid {
            n_batteries,
            horizon,
            cells: vec![state; n_batteries * horizon],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BatteryState>>) -> Result<Self, ModelError> {
        let n_batteries = rows.len();
        let horizon = rows.first().map_or(0, Vec::len);
        if let Some((b, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != horizon) {
            return Err(ModelError::Dimension(format!(
                "row B{} has {} hours, expected {horizon}",
                b + 1,
                row.len()
            )));
        }
        Ok(ScheduleGrid {
            n_batteries,
            horizon,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n_batteries(&self) -> usize {
        self.n_batteries
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// State of battery `b` at hour index `t` (both 0-based).
    pub fn get(&self, b: usize, t: usize) -> BatteryState {
        self.cells[b * self.horizon + t]
    }

    pub fn set(&mut self, b: usize, t: usize, state: BatteryState) {
        self.cells[b * self.horizon + t] = state;
    }

    pub fn row(&self, b: usize) -> &[BatteryState] {
        &self.cells[b * self.horizon..(b + 1) * self.horizon]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BatteryState]> {
        self.cells
            .chunks(self.horizon.max(1))
            .take(self.n_batteries)
    }

    pub fn matches_config(&self, config: &StationConfig) -> bool {
        self.n_batteries == config.n_batteries && self.horizon == config.horizon
    }

    /// Number of batteries in `state` at hour index `t`.
    pub fn count_at(&self, t: usize, state: BatteryState) -> usize {
        (0..self.n_batteries)
            .filter(|&b| self.get(b, t) == state)
            .count()
    }

    /// Per-hour counts indexed `[t][state.index()]`.
    pub fn hourly_counts(&self) -> Vec<[usize; 4]> {
        (0..self.horizon)
            .map(|t| {
                let mut counts = [0; 4];
                for b in 0..self.n_batteries {
                    counts[self.get(b, t).index()] += 1;
                }
                counts
            })
            .collect()
    }

    /// Every adjacent pair outside the transition relation, as 0-based
    /// (battery, hour-of-`to`) pairs.
    pub fn illegal_transitions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.n_batteries {
            let row = self.row(b);
            for t in 1..self.horizon {
                if !legal_transition(row[t - 1], row[t]) {
                    out.push((b, t));
                }
            }
        }
        out
    }

    /// Number of batteries moving `from` at hour index `t-1` to `to` at `t`.
    pub fn edges_at(&self, t: usize, from: BatteryState, to: BatteryState) -> usize {
        if t == 0 {
            return 0;
        }
        (0..self.n_batteries)
            .filter(|&b| self.get(b, t - 1) == from && self.get(b, t) == to)
            .count()
    }
}

/// Per-hour demand, arrivals and electricity price. Vectors are indexed by
/// hour - 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventProfiles {
    /// Swaps landing at each hour (F at t-1, O at t).
    pub demand: Vec<u32>,
    /// Batteries returning empty at each hour (O at t-1, E at t).
    pub arrivals: Vec<u32>,
    /// Price per kWh.
    pub price: Vec<Decimal>,
}

impl EventProfiles {
    pub fn zeros(horizon: usize) -> Self {
        EventProfiles {
            demand: vec![0; horizon],
            arrivals: vec![0; horizon],
            price: vec![Decimal::ZERO; horizon],
        }
    }

    pub fn horizon(&self) -> usize {
        self.demand.len()
    }

    pub fn with_price(mut self, price: Vec<Decimal>) -> Self {
        self.price = price;
        self
    }

    pub fn total_demand(&self) -> u32 {
        self.demand.iter().sum()
    }

    pub fn total_arrivals(&self) -> u32 {
        self.arrivals.iter().sum()
    }

    pub fn check(&self, horizon: usize) -> Result<(), ModelError> {
        let lens = [
            ("demand", self.demand.len()),
            ("arrivals", self.arrivals.len()),
            ("price", self.price.len()),
        ];
        for (name, len) in lens {
            if len != horizon {
                return Err(ModelError::Dimension(format!(
                    "{name} profile covers {len} hours, horizon is {horizon}"
                )));
            }
        }
        if let Some(p) = self
            .price
            .iter()
            .position(|p| p.is_sign_negative() && !p.is_zero())
        {
            return Err(ModelError::InvalidProfile(format!(
                "negative price at hour {}",
                p + 1
            )));
        }
        Ok(())
    }
}

/// Reads the demand and arrival streams a grid realizes. Price is zeroed.
pub fn extract_events(grid: &ScheduleGrid) -> Result<EventProfiles, ModelError> {
    if let Some(&(b, t)) = grid.illegal_transitions().first() {
        return Err(ModelError::Transition {
            battery: b + 1,
            hour: t + 1,
            from: grid.get(b, t - 1),
            to: grid.get(b, t),
        });
    }
    let mut events = EventProfiles::zeros(grid.horizon());
    for t in 1..grid.horizon() {
        events.demand[t] = grid.edges_at(t, BatteryState::Full, BatteryState::Out) as u32;
        events.arrivals[t] = grid.edges_at(t, BatteryState::Out, BatteryState::Empty) as u32;
    }
    Ok(events)
}

/// Everything needed to check or solve a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub config: StationConfig,
    pub initial: InitialConditions,
    pub events: EventProfiles,
}

impl Instance {
    pub fn new(
        config: StationConfig,
        initial: InitialConditions,
        events: EventProfiles,
    ) -> Result<Self, ModelError> {
        let instance = Instance {
            config,
            initial,
            events,
        };
        instance.check()?;
        Ok(instance)
    }

    pub fn check(&self) -> Result<(), ModelError> {
        self.config.check()?;
        self.initial.check(&self.config)?;
        self.events.check(self.config.horizon)?;
        if self.events.demand[0] != 0 || self.events.arrivals[0] != 0 {
            return Err(ModelError::InvalidProfile(
                "no swap or arrival can land on hour 1".to_string(),
            ));
        }
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.config.horizon
    }
}
