//! Instance bundle directory: `config.json`, `profiles.csv`,
//! `initial.json` and an optional `schedule.txt`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{IngestError, ModelError};
use crate::grid_text::{parse_grid, render_grid};
use crate::model::{
    BatteryState, InitialBattery, InitialConditions, Instance, ScheduleGrid, StationConfig,
};

use super::profiles::{load_profiles, write_profiles};

pub const CONFIG_FILE: &str = "config.json";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const INITIAL_FILE: &str = "initial.json";
pub const SCHEDULE_FILE: &str = "schedule.txt";

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InitialRecord {
    battery: usize,
    state: BatteryState,
    #[serde(default)]
    progress: usize,
    #[serde(default)]
    full_rank: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct Bundle {
    pub instance: Instance,
    pub schedule: Option<ScheduleGrid>,
}

fn read(path: &Path) -> Result<String, IngestError> {
    fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), IngestError> {
    fs::write(path, contents).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IngestError> {
    serde_json::from_str(&read(path)?).map_err(|source| IngestError::Json {
        file: path.display().to_string(),
        source,
    })
}

pub fn read_config(path: &Path) -> Result<StationConfig, IngestError> {
    let config: StationConfig = json(path)?;
    config.check()?;
    Ok(config)
}

pub fn read_bundle(dir: &Path) -> Result<Bundle, IngestError> {
    let config = read_config(&dir.join(CONFIG_FILE))?;
    let records: Vec<InitialRecord> = json(&dir.join(INITIAL_FILE))?;
    let mut batteries = Vec::with_capacity(records.len());
    for (i, r) in records.into_iter().enumerate() {
        if r.battery != i + 1 {
            return Err(ModelError::InvalidInitial(format!(
                "entry {} names battery {}, expected {}",
                i + 1,
                r.battery,
                i + 1
            ))
            .into());
        }
        batteries.push(InitialBattery {
            state: r.state,
            progress: r.progress,
            full_rank: r.full_rank,
        });
    }
    let events = load_profiles(&read(&dir.join(PROFILES_FILE))?, config.horizon)?;
    let instance = Instance::new(config, InitialConditions::new(batteries), events)?;
    let schedule_path = dir.join(SCHEDULE_FILE);
    let schedule = if schedule_path.exists() {
        Some(parse_grid(&read(&schedule_path)?, &instance.config)?)
    } else {
        None
    };
    Ok(Bundle { instance, schedule })
}

pub fn write_bundle(
    dir: &Path,
    instance: &Instance,
    schedule: Option<&ScheduleGrid>,
) -> Result<(), IngestError> {
    fs::create_dir_all(dir).map_err(|source| IngestError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let config = serde_json::to_string_pretty(&instance.config).expect("config serializes");
    write(&dir.join(CONFIG_FILE), &(config + "\n"))?;
    let records: Vec<InitialRecord> = instance
        .initial
        .batteries
        .iter()
        .enumerate()
        .map(|(i, b)| InitialRecord {
            battery: i + 1,
            state: b.state,
            progress: b.progress,
            full_rank: b.full_rank,
        })
        .collect();
    let initial = serde_json::to_string_pretty(&records).expect("initial serializes");
    write(&dir.join(INITIAL_FILE), &(initial + "\n"))?;
    write(&dir.join(PROFILES_FILE), &write_profiles(&instance.events))?;
    if let Some(grid) = schedule {
        write(&dir.join(SCHEDULE_FILE), &render_grid(grid))?;
    }
    Ok(())
}
