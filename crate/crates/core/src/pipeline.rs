//! Validate, merge common courses, evolve sessions, then evolve rooms.

use thiserror::Error;

use crate::ga::{GaError, GaRunResult};
use crate::instance::{validate_instance, Catalog, ExamInstance, InstanceError, ValidationReport};
use crate::room_ga::{evolve_rooms_with_restarts, session_headcounts, RoomChromosome};
use crate::schedule::Schedule;
use crate::session_ga::{evolve_sessions_with_restarts, SessionChromosome};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid instance:\n{0}")]
    Validation(ValidationReport),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Ga(#[from] GaError),
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub schedule: Schedule,
    pub sessions: GaRunResult<SessionChromosome>,
    pub rooms: GaRunResult<RoomChromosome>,
}

/// Solves with the instance's own parameters and a single run per stage.
pub fn solve(instance: &ExamInstance) -> Result<Solution, SolveError> {
    solve_with_restarts(instance, 1)
}

/// Each stage keeps the best of `restarts` independently seeded runs.
pub fn solve_with_restarts(instance: &ExamInstance, restarts: usize) -> Result<Solution, SolveError> {
    let report = validate_instance(instance);
    if !report.is_valid() {
        return Err(SolveError::Validation(report));
    }
    let params = &instance.params;
    let catalog = Catalog::new(instance)?;
    let sessions = evolve_sessions_with_restarts(&catalog, params, restarts)?;
    let headcounts: Vec<u32> =
        session_headcounts(&sessions.best_individual, &catalog.index).iter().map(|h| h.students).collect();
    let rooms = evolve_rooms_with_restarts(&instance.classrooms, &headcounts, params, restarts)?;
    let schedule =
        Schedule::assemble(&catalog, &instance.classrooms, params, &sessions.best_individual, &rooms.best_individual);
    Ok(Solution { schedule, sessions, rooms })
}
