//! `bss` subcommands. Exit codes: 0 ok/feasible, 1 infeasible, 2 input
//! error, 3 oracle budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use bss_core::scenario::{
    builtin_table1_instance, generate, read_bundle, write_bundle, ScenarioSpec, SCHEDULE_FILE,
};
use bss_core::scheduler::DEFAULT_BUDGET;
use bss_core::{
    parse_grid, parse_grid_inferred, render_counts, render_grid, solve_exact, solve_greedy,
    solve_oracle, validate, BatteryState, DurationMode, ScheduleGrid, SolveError, SolveObjective,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Infeasible = 1,
    InputError = 2,
    Budget = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Parser)]
#[command(name = "bss", about = "Battery swapping station charging schedules")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Lenient,
    Strict,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Objective {
    Feasibility,
    MinCost,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Greedy,
    Exact,
    Oracle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a schedule against an instance bundle.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        /// Defaults to schedule.txt inside the bundle.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "lenient")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a schedule for an instance bundle.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "feasibility")]
        objective: Objective,
        #[arg(long, value_enum, default_value = "greedy")]
        method: Method,
        /// Schedule text output; the cost report goes next to it as
        /// `<out>.cost.json` unless --cost-out is given.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cost_out: Option<PathBuf>,
        /// Largest number of start vectors the oracle may enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Write an instance bundle from a scenario spec (JSON).
    Generate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a schedule as a letter grid.
    Render {
        #[arg(long)]
        schedule: PathBuf,
        /// Bundle whose config fixes the expected dimensions.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Append per-hour state counts and charger usage.
        #[arg(long)]
        counts: bool,
    },
    /// Reference 12-battery station: print its published schedule, check it,
    /// and compare with the greedy schedule.
    Demo {
        /// Also write the reference instance bundle (with schedule.txt) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Validate {
            instance,
            schedule,
            mode,
            format,
        } => cmd_validate(&instance, schedule.as_deref(), mode, format),
        Command::Solve {
            instance,
            objective,
            method,
            out,
            cost_out,
            budget,
        } => cmd_solve(&instance, objective, method, out, cost_out, budget),
        Command::Generate { spec, out } => cmd_generate(&spec, &out),
        Command::Render {
            schedule,
            instance,
            counts,
        } => cmd_render(&schedule, instance.as_deref(), counts),
        Command::Demo { out } => cmd_demo(out.as_deref()),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_validate(
    instance_dir: &Path,
    schedule: Option<&Path>,
    mode: Mode,
    format: Format,
) -> Result<Status> {
    let bundle = read_bundle(instance_dir)?;
    let grid = match schedule {
        Some(path) => parse_grid(&read_text(path)?, &bundle.instance.config)
            .with_context(|| format!("parsing {}", path.display()))?,
        None => bundle
            .schedule
            .with_context(|| format!("no --schedule and no {SCHEDULE_FILE} in bundle"))?,
    };
    let mode = match mode {
        Mode::Lenient => DurationMode::Lenient,
        Mode::Strict => DurationMode::Strict,
    };
    let report = validate(&grid, &bundle.instance, mode)?;
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text(&grid)),
    }
    Ok(if report.feasible {
        Status::Ok
    } else {
        Status::Infeasible
    })
}

fn cmd_solve(
    instance_dir: &Path,
    objective: Objective,
    method: Method,
    out: Option<PathBuf>,
    cost_out: Option<PathBuf>,
    budget: u128,
) -> Result<Status> {
    let instance = read_bundle(instance_dir)?.instance;
    let objective = match objective {
        Objective::Feasibility => SolveObjective::Feasibility,
        Objective::MinCost => SolveObjective::MinCost,
    };
    let result = match method {
        Method::Greedy => solve_greedy(&instance),
        Method::Exact => solve_exact(&instance, objective),
        Method::Oracle => solve_oracle(&instance, objective, budget),
    };
    let solution = match result {
        Ok(s) => s,
        Err(SolveError::Infeasible { hour, reason }) => {
            println!("infeasible at hour {hour}: {reason}");
            return Ok(Status::Infeasible);
        }
        Err(err @ SolveError::BudgetExceeded { .. }) => {
            eprintln!("error: {err}");
            return Ok(Status::Budget);
        }
        Err(err) => return Err(err.into()),
    };

    let text = render_grid(&solution.grid);
    let cost_json = solution.cost.to_json() + "\n";
    match out {
        Some(path) => {
            fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            let cost_path = cost_out.unwrap_or_else(|| {
                let mut p = path.clone().into_os_string();
                p.push(".cost.json");
                PathBuf::from(p)
            });
            fs::write(&cost_path, &cost_json)
                .with_context(|| format!("writing {}", cost_path.display()))?;
        }
        None => {
            print!("{text}");
            if let Some(path) = cost_out {
                fs::write(&path, &cost_json)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    println!("total cost: {}", solution.cost.total);
    println!("energy kWh: {}", solution.cost.energy_kwh);
    println!("swaps served: {}", solution.swaps_served());
    let starts: Vec<String> = solution
        .starts
        .iter()
        .map(|s| s.map_or("-".to_string(), |h| h.to_string()))
        .collect();
    println!("start hours: {}", starts.join(" "));
    Ok(Status::Ok)
}

fn cmd_generate(spec_path: &Path, out: &Path) -> Result<Status> {
    let spec: ScenarioSpec = serde_json::from_str(&read_text(spec_path)?)
        .with_context(|| format!("parsing {}", spec_path.display()))?;
    let instance = generate(&spec)?;
    write_bundle(out, &instance, None)?;
    Ok(Status::Ok)
}

fn cmd_render(schedule: &Path, instance: Option<&Path>, counts: bool) -> Result<Status> {
    let text = read_text(schedule)?;
    let grid = match instance {
        Some(dir) => parse_grid(&text, &read_bundle(dir)?.instance.config)?,
        None => parse_grid_inferred(&text)?,
    };
    print!("{}", render_grid(&grid));
    if counts {
        print!("{}", render_counts(&grid));
    }
    Ok(Status::Ok)
}

fn charge_starts(grid: &ScheduleGrid) -> Vec<String> {
    let mut out = Vec::new();
    for (b, row) in grid.rows().enumerate() {
        for t in 0..row.len() {
            let starts = row[t] == BatteryState::Charging
                && (t == 0 || row[t - 1] != BatteryState::Charging);
            if starts {
                out.push(format!("B{}:{}", b + 1, t + 1));
            }
        }
    }
    out
}

fn cmd_demo(out: Option<&Path>) -> Result<Status> {
    let (instance, published) = builtin_table1_instance();
    if let Some(dir) = out {
        write_bundle(dir, &instance, Some(&published))?;
    }
    println!("published schedule");
    print!("{}", render_grid(&published));
    print!("{}", render_counts(&published));
    for mode in [DurationMode::Lenient, DurationMode::Strict] {
        let report = validate(&published, &instance, mode)?;
        println!(
            "{mode:?}: {}",
            if report.feasible {
                "feasible"
            } else {
                "infeasible"
            }
        );
        for v in &report.violations {
            println!("  {v}");
        }
    }

    println!();
    println!("greedy schedule");
    let greedy = match solve_greedy(&instance) {
        Ok(g) => g,
        Err(SolveError::Infeasible { hour, reason }) => {
            println!("infeasible at hour {hour}: {reason}");
            return Ok(Status::Infeasible);
        }
        Err(err) => return Err(err.into()),
    };
    print!("{}", render_grid(&greedy.grid));
    println!("charge starts: {}", charge_starts(&greedy.grid).join(" "));
    let mut diffs = Vec::new();
    for b in 0..published.n_batteries() {
        for t in 0..published.horizon() {
            let (p, g) = (published.get(b, t), greedy.grid.get(b, t));
            if p != g {
                diffs.push(format!(
                    "B{} hour {}: published {p}, greedy {g}",
                    b + 1,
                    t + 1
                ));
            }
        }
    }
    println!(
        "cells differing from the published schedule: {}",
        diffs.len()
    );
    for d in diffs {
        println!("  {d}");
    }
    Ok(Status::Ok)
}
