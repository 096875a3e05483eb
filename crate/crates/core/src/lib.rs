//! Two-stage genetic algorithm for central exam scheduling.
//!
//! Stage 1 partitions the (unified) course list into fixed-length exam
//! sessions, rewarding sessions whose students sit every exam together.
//! Stage 2 seats each session's examinees in classrooms, penalizing empty
//! seats, invigilators and the number of buildings in use.

pub mod chromosome;
pub mod ga;
pub mod generate;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod room_ga;
pub mod schedule;
pub mod session_ga;

pub use ga::{GaError, GaProblem, GaRunResult};
pub use instance::{
    Catalog, Classroom, Course, CourseId, Department, Enrollment, ExamInstance, SchedulingParams, Student,
    UnifiedCourse,
};
pub use io::{load_instance, write_instance, LoadError};
pub use pipeline::{solve, solve_with_restarts, Solution, SolveError};
pub use report::render_report;
pub use room_ga::{RoomChromosome, RoomId};
pub use schedule::{read_schedule, write_schedule, Schedule, ScheduleError};
pub use session_ga::SessionChromosome;
