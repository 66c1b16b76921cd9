//! Reference-station facts: the published grid, its event streams, what the
//! validator makes of it, and what the greedy scheduler rebuilds from it.

use bss_core::scenario::{builtin_table1_instance, table1_grid, TABLE1_TEXT};
use bss_core::validator::{
    check_arrivals, check_charge_duration, check_charger_capacity, check_conservation,
    check_demand_coverage, check_initial,
};
use bss_core::{
    build_jobs, extract_events, parse_grid, render_grid, schedule_cost, solve_greedy, validate,
    BatteryState, ConstraintId, DurationMode, EventProfiles, InitialBattery, JobOrigin,
    ScheduleGrid,
};
use rust_decimal::Decimal;

use BatteryState::*;

/// Hours (1-based) at which some row of the published text goes `from` -> `to`,
/// read straight off the letters.
fn letter_edges(from: char, to: char) -> Vec<usize> {
    let mut hours = Vec::new();
    for line in TABLE1_TEXT.lines().skip(1) {
        let letters: Vec<char> = line
            .split(' ')
            .skip(1)
            .map(|s| s.chars().next().unwrap())
            .collect();
        for t in 1..letters.len() {
            if letters[t - 1] == from && letters[t] == to {
                hours.push(t + 1);
            }
        }
    }
    hours.sort_unstable();
    hours
}

fn hours_of(profile: &[u32]) -> Vec<usize> {
    profile
        .iter()
        .enumerate()
        .flat_map(|(t, &n)| std::iter::repeat_n(t + 1, n as usize))
        .collect()
}

#[test]
fn swap_and_return_hours() {
    let events = extract_events(&table1_grid()).unwrap();
    assert_eq!(
        hours_of(&events.demand),
        vec![2, 5, 7, 11, 13, 14, 19, 21, 23]
    );
    assert_eq!(
        hours_of(&events.arrivals),
        vec![2, 5, 7, 11, 13, 14, 20, 21, 23]
    );
    assert_eq!(hours_of(&events.demand), letter_edges('F', 'O'));
    assert_eq!(hours_of(&events.arrivals), letter_edges('O', 'E'));
}

#[test]
fn parses_twelve_by_twentyfour() {
    let (inst, grid) = builtin_table1_instance();
    let parsed = parse_grid(TABLE1_TEXT, &inst.config).unwrap();
    assert_eq!((parsed.n_batteries(), parsed.horizon()), (12, 24));
    assert_eq!(parsed, grid);
    assert_eq!(render_grid(&parsed), TABLE1_TEXT);
}

#[test]
fn hourly_counts_match_columns() {
    let (inst, grid) = builtin_table1_instance();
    let report = validate(&grid, &inst, DurationMode::Lenient).unwrap();
    assert_eq!(report.hourly.at(1), (3, 4, 2, 3));
    assert_eq!(report.hourly.at(7), (2, 4, 3, 3));
    assert_eq!(report.hourly.chargers[0], 4);
    assert!(check_conservation(&grid, &inst.config).is_empty());
}

#[test]
fn hour_one_chargers_are_b6_to_b9() {
    let grid = table1_grid();
    let charging: Vec<usize> = (0..12)
        .filter(|&b| grid.get(b, 0) == Charging)
        .map(|b| b + 1)
        .collect();
    assert_eq!(charging, vec![6, 7, 8, 9]);
}

#[test]
fn published_grid_overbooks_chargers_at_15_and_16() {
    // B4, B5, B6, B11 and B12 all show C in these two columns
    let (inst, grid) = builtin_table1_instance();
    let v = check_charger_capacity(&grid, &inst.config);
    let hours: Vec<_> = v.iter().map(|v| v.hour.unwrap()).collect();
    assert_eq!(hours, vec![15, 16]);
    for t in [14, 15] {
        let on: Vec<usize> = (0..12)
            .filter(|&b| grid.get(b, t) == Charging)
            .map(|b| b + 1)
            .collect();
        assert_eq!(on, vec![4, 5, 6, 11, 12]);
    }
}

#[test]
fn b6_queued_reading_is_strictly_feasible() {
    // with B6 waiting (E) at hours 15-16 and charging 17-22 the table is
    // consistent with four chargers and exact six-hour charges
    let (inst, mut grid) = builtin_table1_instance();
    grid.set(5, 14, Empty);
    grid.set(5, 15, Empty);
    let report = validate(&grid, &inst, DurationMode::Strict).unwrap();
    assert!(report.feasible, "{:?}", report.violations);
}

#[test]
fn charger_mutation_at_hour_five() {
    let (inst, mut grid) = builtin_table1_instance();
    grid.set(1, 4, Charging); // B2 starts at hour 5 instead of 6
    let expected = (0..12).filter(|&b| grid.get(b, 4) == Charging).count();
    assert_eq!(expected, 5);
    let v = check_charger_capacity(&grid, &inst.config);
    assert!(v.iter().any(|v| v.hour == Some(5)));
}

#[test]
fn demand_and_arrival_checks() {
    let (inst, grid) = builtin_table1_instance();
    assert!(check_demand_coverage(&grid, &inst.events).is_empty());
    assert!(check_arrivals(&grid, &inst.events).is_empty());

    let mut raised = inst.events.clone();
    raised.demand[1] = 2;
    let v = check_demand_coverage(&grid, &raised);
    assert!(!v.is_empty());
    assert!(v.iter().all(|v| v.hour == Some(2)));

    let no_returns = EventProfiles {
        arrivals: vec![0; 24],
        ..inst.events.clone()
    };
    let hours: Vec<_> = check_arrivals(&grid, &no_returns)
        .iter()
        .map(|v| v.hour.unwrap())
        .collect();
    assert_eq!(hours, vec![2, 5, 7, 11, 13, 14, 20, 21, 23]);

    let idle = ScheduleGrid::filled(12, 24, Out);
    assert!(check_arrivals(&idle, &EventProfiles::zeros(24)).is_empty());
}

#[test]
fn duration_checks_on_b6() {
    let (inst, grid) = builtin_table1_instance();
    let lenient = check_charge_duration(&grid, &inst.config, &inst.initial, DurationMode::Lenient);
    assert!(lenient.is_empty());
    let strict = check_charge_duration(&grid, &inst.config, &inst.initial, DurationMode::Strict);
    assert_eq!(strict.len(), 1);
    assert_eq!((strict[0].battery, strict[0].hour), (Some(6), Some(15)));
}

#[test]
fn initial_conditions() {
    let (inst, grid) = builtin_table1_instance();
    assert!(check_initial(&grid, &inst.initial).is_empty());
    let mut wrong = inst.initial.clone();
    wrong.batteries[0] = InitialBattery::full(9);
    let v = check_initial(&grid, &wrong);
    assert_eq!(v.len(), 1);
    assert_eq!(
        (v[0].constraint, v[0].battery, v[0].hour),
        (ConstraintId::InitialState, Some(1), Some(1))
    );
}

#[test]
fn f_to_c_mutation_is_infeasible() {
    let (inst, mut grid) = builtin_table1_instance();
    grid.set(0, 11, Charging);
    let report = validate(&grid, &inst, DurationMode::Lenient).unwrap();
    assert!(!report.feasible);
    assert!(report.classes().contains(&ConstraintId::Adjacency));
}

#[test]
fn jobs_of_reference_instance() {
    let (inst, grid) = builtin_table1_instance();
    let jobs = build_jobs(&inst);
    // counted from the fixture: batteries C / E in column 1, plus O->E edges
    let col1_c = (0..12).filter(|&b| grid.get(b, 0) == Charging).count();
    let col1_e = (0..12).filter(|&b| grid.get(b, 0) == Empty).count();
    let returns = letter_edges('O', 'E').len();
    let count = |o| jobs.iter().filter(|j| j.origin == o).count();
    assert_eq!(count(JobOrigin::Continuation), col1_c);
    assert_eq!(count(JobOrigin::InitialEmpty), col1_e);
    assert_eq!(count(JobOrigin::Arrival), returns);
    assert_eq!(jobs.len(), 16);
    let remaining: Vec<_> = jobs
        .iter()
        .filter(|j| j.origin == JobOrigin::Continuation)
        .map(|j| (j.battery.unwrap() + 1, j.duration))
        .collect();
    assert_eq!(remaining, vec![(6, 4), (7, 5), (8, 6), (9, 6)]);
}

#[test]
fn flat_price_cost_counts_charging_cells() {
    let (inst, grid) = builtin_table1_instance();
    let c_cells = TABLE1_TEXT
        .lines()
        .skip(1)
        .flat_map(|l| l.split(' ').skip(1))
        .filter(|s| *s == "C")
        .count();
    assert_eq!(c_cells, 85);
    let cost = schedule_cost(&grid, &inst.config, &[Decimal::ONE; 24]).unwrap();
    assert_eq!(cost.price_charge_hours, Decimal::from(c_cells));
    let expected = (100.0 / 6.0) * c_cells as f64;
    assert!((cost.total - expected).abs() < 1e-9);
    assert!((cost.energy_kwh - expected).abs() < 1e-9);
}

fn charge_starts(grid: &ScheduleGrid) -> Vec<(usize, usize)> {
    let mut starts = Vec::new();
    for b in 0..grid.n_batteries() {
        for t in 1..grid.horizon() {
            if grid.get(b, t) == Charging && grid.get(b, t - 1) == Empty {
                starts.push((b + 1, t + 1));
            }
        }
    }
    starts
}

fn swaps(grid: &ScheduleGrid) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for t in 1..grid.horizon() {
        for b in 0..grid.n_batteries() {
            if grid.get(b, t - 1) == Full && grid.get(b, t) == Out {
                out.push((t + 1, b + 1));
            }
        }
    }
    out
}

#[test]
fn greedy_swap_order_matches_table() {
    let (inst, grid) = builtin_table1_instance();
    let sol = solve_greedy(&inst).unwrap();
    assert_eq!(swaps(&sol.grid), swaps(&grid));
    let order: Vec<usize> = swaps(&sol.grid).iter().map(|&(_, b)| b).collect();
    assert_eq!(order, vec![4, 5, 6, 7, 8, 9, 1, 2, 3]);
}

#[test]
fn greedy_starts_every_battery_but_b6_as_published() {
    let (inst, grid) = builtin_table1_instance();
    let sol = solve_greedy(&inst).unwrap();
    let ours = charge_starts(&sol.grid);
    let published = charge_starts(&grid);
    let without_b6 = |v: &[(usize, usize)]| {
        v.iter()
            .copied()
            .filter(|&(b, _)| b != 6)
            .collect::<Vec<_>>()
    };
    assert_eq!(without_b6(&ours), without_b6(&published));
    // first free charger for B6 after its return at hour 14
    assert!(ours.contains(&(6, 17)));
    assert!(published.contains(&(6, 15)));
    let report = validate(&sol.grid, &inst, DurationMode::Strict).unwrap();
    assert!(report.feasible, "{:?}", report.violations);
}

#[test]
fn tiny_greedy_schedule() {
    use bss_core::{InitialConditions, Instance, StationConfig};
    let cfg = StationConfig::new(1, 1, 2, 20.0, 4).unwrap();
    let init = InitialConditions::new(vec![InitialBattery::empty()]);
    let mut ev = EventProfiles::zeros(4);
    ev.demand[3] = 1;
    let inst = Instance::new(cfg, init, ev).unwrap();
    let sol = solve_greedy(&inst).unwrap();
    assert_eq!(sol.grid.row(0), &[Charging, Charging, Full, Out]);
}
