//! The 12-battery, 4-charger, 24-hour reference station and its published
//! schedule.

use rust_decimal::Decimal;

use crate::grid_text::parse_grid;
use crate::model::{
    extract_events, InitialBattery, InitialConditions, Instance, ScheduleGrid, StationConfig,
};

pub const TABLE1_TEXT: &str = "\
hours: 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20 21 22 23 24
B1: E E E E C C C C C C F F F F F F F F O O O O O O
B2: E E E E E C C C C C C F F F F F F F F F O O O O
B3: E E E E E E C C C C C C F F F F F F F F F F O O
B4: F O O O O O O O O O E E C C C C C C F F F F F F
B5: F F F F O O O O O O O O E C C C C C C F F F F F
B6: C C C C F F O O O O O O O E C C C C C C C C F F
B7: C C C C C F F F F F O O O O O O O O O E C C C C
B8: C C C C C C F F F F F F O O O O O O O O E C C C
B9: C C C C C C F F F F F F F O O O O O O O O O E C
B10: O E E E E E C C C C C C F F F F F F F F F F F F
B11: O O O O E E E E E E C C C C C C F F F F F F F F
B12: O O O O O O E E E E E C C C C C C F F F F F F F
";

pub fn table1_config() -> StationConfig {
    StationConfig::new(12, 4, 6, 100.0, 24).expect("reference config is valid")
}

/// B1-B3 empty, B4 and B5 full (ranked by index), B6 and B7 part-charged
/// (2 h and 1 h done), B8 and B9 just started, B10-B12 out.
pub fn table1_initial() -> InitialConditions {
    let mut batteries = vec![InitialBattery::empty(); 3];
    batteries.push(InitialBattery::full(0));
    batteries.push(InitialBattery::full(1));
    batteries.push(InitialBattery::charging(2));
    batteries.push(InitialBattery::charging(1));
    batteries.push(InitialBattery::charging(0));
    batteries.push(InitialBattery::charging(0));
    batteries.extend(vec![InitialBattery::out(); 3]);
    InitialConditions::new(batteries)
}

pub fn table1_grid() -> ScheduleGrid {
    parse_grid(TABLE1_TEXT, &table1_config()).expect("embedded table parses")
}

/// The reference instance (events read off the published grid, all prices
/// zero) together with that grid.
pub fn builtin_table1_instance() -> (Instance, ScheduleGrid) {
    let grid = table1_grid();
    let events = extract_events(&grid).expect("embedded table has legal transitions");
    let events = events.with_price(vec![Decimal::ZERO; grid.horizon()]);
    let instance = Instance::new(table1_config(), table1_initial(), events)
        .expect("reference instance is consistent");
    (instance, grid)
}
