//! Plain-text schedule format, one row per battery:
//!
//! ```text
//! hours: 1 2 3
//! B1: E C C
//! ```
//!
//! The header is written by [`render_grid`] and optional on input.

use std::fmt::Write as _;

use crate::error::{ParseError, ParseErrorKind};
use crate::model::{legal_transition, BatteryState, ScheduleGrid, StationConfig};

const HEADER: &str = "hours:";

pub fn render_grid(grid: &ScheduleGrid) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    for t in 1..=grid.horizon() {
        let _ = write!(out, " {t}");
    }
    out.push('\n');
    for (b, row) in grid.rows().enumerate() {
        let _ = write!(out, "B{}:", b + 1);
        for s in row {
            out.push(' ');
            out.push(s.letter());
        }
        out.push('\n');
    }
    out
}

/// Per-hour E/C/F/O counts followed by a charger-usage row.
pub fn render_counts(grid: &ScheduleGrid) -> String {
    let counts = grid.hourly_counts();
    let mut out = String::new();
    for state in BatteryState::ALL {
        let _ = write!(out, "{}:", state.letter());
        for c in &counts {
            let _ = write!(out, " {}", c[state.index()]);
        }
        out.push('\n');
    }
    out.push_str("chargers:");
    for c in &counts {
        let _ = write!(out, " {}", c[BatteryState::Charging.index()]);
    }
    out.push('\n');
    out
}

pub fn parse_grid(text: &str, config: &StationConfig) -> Result<ScheduleGrid, ParseError> {
    parse_rows(text, Some((config.n_batteries, config.horizon)))
}

/// Parses a grid taking its dimensions from the text itself.
pub fn parse_grid_inferred(text: &str) -> Result<ScheduleGrid, ParseError> {
    parse_rows(text, None)
}

fn parse_rows(text: &str, dims: Option<(usize, usize)>) -> Result<ScheduleGrid, ParseError> {
    let mut rows: Vec<Vec<BatteryState>> = Vec::new();
    let mut last_line = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        if line.trim().is_empty() || line.starts_with(HEADER) {
            continue;
        }
        let expected = rows.len() + 1;
        let label = format!("B{expected}:");
        let err = |column, kind| ParseError {
            line: line_no,
            column,
            kind,
        };
        let Some(rest) = line.strip_prefix(&label) else {
            return Err(err(1, ParseErrorKind::BadLabel { expected }));
        };
        if !rest.is_empty() && !rest.starts_with(' ') {
            return Err(err(label.len() + 1, ParseErrorKind::BadLabel { expected }));
        }
        let mut column = label.len() + 1;
        let mut states = Vec::new();
        for token in rest.split(' ').skip(1) {
            column += 1;
            let mut chars = token.chars();
            let state = match (chars.next(), chars.next()) {
                (Some(c), None) => BatteryState::from_letter(c),
                _ => None,
            };
            let Some(state) = state else {
                return Err(err(
                    column,
                    ParseErrorKind::UnknownLetter(token.to_string()),
                ));
            };
            if let Some(&prev) = states.last() {
                if !legal_transition(prev, state) {
                    return Err(err(
                        column,
                        ParseErrorKind::Adjacency {
                            battery: expected,
                            hour: states.len() + 1,
                            from: prev,
                            to: state,
                        },
                    ));
                }
            }
            states.push(state);
            column += token.len();
        }
        let want = dims.map(|(_, h)| h).or_else(|| rows.first().map(Vec::len));
        if let Some(want) = want {
            if states.len() != want {
                return Err(err(
                    column,
                    ParseErrorKind::WrongHours {
                        found: states.len(),
                        expected: want,
                    },
                ));
            }
        }
        rows.push(states);
    }
    if let Some((n, _)) = dims {
        if rows.len() != n {
            return Err(ParseError {
                line: last_line.max(1),
                column: 1,
                kind: ParseErrorKind::WrongBatteries {
                    found: rows.len(),
                    expected: n,
                },
            });
        }
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(ParseError {
            line: last_line.max(1),
            column: 1,
            kind: ParseErrorKind::Empty,
        });
    }
    Ok(ScheduleGrid::from_rows(rows).expect("row lengths checked above"))
}
