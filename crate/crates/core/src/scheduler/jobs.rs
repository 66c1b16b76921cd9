use serde::Serialize;

use crate::model::{BatteryState, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JobOrigin {
    /// Battery already charging before hour 1; its start is fixed.
    Continuation,
    /// Battery sitting empty at hour 1.
    InitialEmpty,
    /// One returning battery; which physical battery is decided when it lands.
    Arrival,
}

/// One non-preemptive block of charging.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChargeJob {
    /// 0-based battery, known up front for continuation and initial-empty jobs.
    pub battery: Option<usize>,
    /// Earliest hour the block may start (1-based).
    pub release_hour: usize,
    /// Hours of charging left.
    pub duration: usize,
    pub origin: JobOrigin,
    /// Hour the battery lands in the station, arrival jobs only.
    pub arrival_hour: Option<usize>,
}

impl ChargeJob {
    pub fn is_fixed(&self) -> bool {
        self.origin == JobOrigin::Continuation
    }

    /// Two jobs are interchangeable when swapping their start hours yields an
    /// equally valid schedule of equal cost.
    pub(crate) fn interchangeable(&self, other: &ChargeJob) -> bool {
        self.origin == other.origin
            && self.release_hour == other.release_hour
            && self.duration == other.duration
            && self.origin != JobOrigin::Continuation
    }
}

/// Compiles an instance into charge jobs, ordered continuations first (by
/// battery), then initially empty batteries (by battery), then arrival units
/// by arrival hour. Non-continuation jobs are the decision variables, in this
/// order.
pub fn build_jobs(instance: &Instance) -> Vec<ChargeJob> {
    let charge_hours = instance.config.charge_hours;
    let mut jobs = Vec::new();
    for (b, init) in instance.initial.batteries.iter().enumerate() {
        if init.state == BatteryState::Charging {
            jobs.push(ChargeJob {
                battery: Some(b),
                release_hour: 1,
                duration: charge_hours - init.progress,
                origin: JobOrigin::Continuation,
                arrival_hour: None,
            });
        }
    }
    for (b, init) in instance.initial.batteries.iter().enumerate() {
        if init.state == BatteryState::Empty {
            jobs.push(ChargeJob {
                battery: Some(b),
                release_hour: 1,
                duration: charge_hours,
                origin: JobOrigin::InitialEmpty,
                arrival_hour: None,
            });
        }
    }
    for (t, &count) in instance.events.arrivals.iter().enumerate() {
        let hour = t + 1;
        for _ in 0..count {
            jobs.push(ChargeJob {
                battery: None,
                release_hour: hour + 1,
                duration: charge_hours,
                origin: JobOrigin::Arrival,
                arrival_hour: Some(hour),
            });
        }
    }
    jobs
}

/// The decision jobs (everything but continuations), in solver order.
pub fn decision_jobs(jobs: &[ChargeJob]) -> Vec<ChargeJob> {
    jobs.iter().filter(|j| !j.is_fixed()).cloned().collect()
}
