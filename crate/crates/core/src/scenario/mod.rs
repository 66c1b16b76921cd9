//! Instances from files, from the built-in reference station, and from
//! seeded generators.

mod bundle;
mod fixture;
mod generate;
mod profiles;

pub use bundle::{
    read_bundle, read_config, write_bundle, Bundle, CONFIG_FILE, INITIAL_FILE, PROFILES_FILE,
    SCHEDULE_FILE,
};
pub use fixture::{
    builtin_table1_instance, table1_config, table1_grid, table1_initial, TABLE1_TEXT,
};
pub use generate::{generate, label_feasibility, CountShape, ScenarioSpec, TariffShape};
pub use profiles::{load_profiles, write_profiles};
