//! The solved timetable as a self-describing JSON document.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Catalog, Classroom, SchedulingParams, SessionStats};
use crate::io::write_atomic;
use crate::room_ga::{stage2_cost, RoomChromosome, SessionCost};
use crate::session_ga::{stage1_raw_score, SessionChromosome};

pub const SCHEDULE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledCourse {
    pub unified_id: String,
    pub course_code: String,
    /// Owning department code, or `COMMON`.
    pub owner: String,
    pub exam_minutes: u32,
    pub students: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledRoom {
    pub id: String,
    pub building: String,
    pub quota: u32,
    pub supervisors: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduledSession {
    /// 1-based.
    pub number: usize,
    pub courses: Vec<ScheduledCourse>,
    pub stats: SessionStats,
    pub headcount: u32,
    pub rooms: Vec<ScheduledRoom>,
    pub cost: SessionCost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exam_name: Option<String>,
    pub seed: u64,
    pub params: SchedulingParams,
    pub sessions: Vec<ScheduledSession>,
    pub stage1_raw_score: i64,
    pub stage2_cost: u64,
}

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: serde_json::Error },
    #[error("{}: unsupported format version {found} (expected {SCHEDULE_FORMAT_VERSION})", path.display())]
    Version { path: PathBuf, found: u32 },
    #[error("{}: inconsistent schedule: {}", path.display(), problems.join("; "))]
    Inconsistent { path: PathBuf, problems: Vec<String> },
}

impl Schedule {
    /// A schedule with no sessions.
    pub fn empty(params: &SchedulingParams) -> Self {
        Self {
            format_version: SCHEDULE_FORMAT_VERSION,
            exam_name: params.exam_name.clone(),
            seed: params.seed,
            params: params.clone(),
            sessions: Vec::new(),
            stage1_raw_score: 0,
            stage2_cost: 0,
        }
    }

    /// Builds the document from the two stages' best individuals.
    pub fn assemble(
        catalog: &Catalog,
        classrooms: &[Classroom],
        params: &SchedulingParams,
        sessions: &SessionChromosome,
        rooms: &RoomChromosome,
    ) -> Self {
        let headcounts: Vec<u32> =
            sessions.sessions().iter().map(|s| catalog.index.session_stats(s).distinct_enrollees as u32).collect();
        let cost = stage2_cost(rooms, classrooms, &headcounts);
        let scheduled = sessions
            .sessions()
            .iter()
            .enumerate()
            .map(|(s, ids)| ScheduledSession {
                number: s + 1,
                courses: ids
                    .iter()
                    .map(|&id| {
                        let c = &catalog.courses[id.0];
                        ScheduledCourse {
                            unified_id: c.unified_id.clone(),
                            course_code: c.course_code.clone(),
                            owner: c.owner.to_string(),
                            exam_minutes: c.exam_minutes,
                            students: c.enrolled_students.len(),
                        }
                    })
                    .collect(),
                stats: catalog.index.session_stats(ids),
                headcount: headcounts[s],
                rooms: rooms
                    .sessions()
                    .get(s)
                    .map_or(&[][..], Vec::as_slice)
                    .iter()
                    .map(|r| {
                        let room = &classrooms[r.0];
                        ScheduledRoom {
                            id: room.id.clone(),
                            building: room.building.clone(),
                            quota: room.quota,
                            supervisors: room.supervisors,
                        }
                    })
                    .collect(),
                cost: cost.sessions.get(s).copied().unwrap_or_default(),
            })
            .collect();
        Self {
            format_version: SCHEDULE_FORMAT_VERSION,
            exam_name: params.exam_name.clone(),
            seed: params.seed,
            params: params.clone(),
            sessions: scheduled,
            stage1_raw_score: stage1_raw_score(sessions, &catalog.index),
            stage2_cost: cost.total,
        }
    }

    pub fn total_vacancies(&self) -> u64 {
        self.sessions.iter().map(|s| s.cost.vacancies).sum()
    }

    pub fn total_supervisors(&self) -> u64 {
        self.sessions.iter().map(|s| s.cost.supervisors).sum()
    }

    pub fn total_buildings(&self) -> u64 {
        self.sessions.iter().map(|s| s.cost.buildings).sum()
    }

    /// Every derived number that can be recomputed from the document itself.
    /// Common-student counts cannot be rechecked without rosters, so only
    /// their bounds are.
    pub fn consistency_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen_courses = BTreeSet::new();
        for (i, s) in self.sessions.iter().enumerate() {
            let n = i + 1;
            if s.number != n {
                out.push(format!("session record {n} is numbered {}", s.number));
            }
            let st = &s.stats;
            if st.common_students + st.different_students != st.distinct_enrollees {
                out.push(format!(
                    "session {n}: CS {} + DS {} != {} distinct students",
                    st.common_students, st.different_students, st.distinct_enrollees
                ));
            }
            if s.headcount as usize != st.distinct_enrollees {
                out.push(format!(
                    "session {n}: headcount {} != {} distinct students",
                    s.headcount, st.distinct_enrollees
                ));
            }
            let minutes: u32 = s.courses.iter().map(|c| c.exam_minutes).sum();
            if minutes != st.total_exam_minutes {
                out.push(format!("session {n}: course minutes sum to {minutes}, stats say {}", st.total_exam_minutes));
            }
            if minutes > self.params.max_session_minutes {
                out.push(format!("session {n}: {minutes} minutes exceeds {}", self.params.max_session_minutes));
            }
            let largest = s.courses.iter().map(|c| c.students).max().unwrap_or(0);
            let smallest = s.courses.iter().map(|c| c.students).min().unwrap_or(0);
            if st.distinct_enrollees < largest || st.distinct_enrollees > s.courses.iter().map(|c| c.students).sum() {
                out.push(format!(
                    "session {n}: {} distinct students impossible for its courses",
                    st.distinct_enrollees
                ));
            }
            if st.common_students > smallest {
                out.push(format!("session {n}: {} common students exceeds smallest course", st.common_students));
            }
            for c in &s.courses {
                if !seen_courses.insert(c.unified_id.as_str()) {
                    out.push(format!("course {} scheduled more than once", c.unified_id));
                }
            }

            let mut buildings = BTreeSet::new();
            let mut ids = BTreeSet::new();
            for r in &s.rooms {
                buildings.insert(r.building.as_str());
                if !ids.insert(r.id.as_str()) {
                    out.push(format!("session {n}: room {} used twice", r.id));
                }
            }
            let seats: u64 = s.rooms.iter().map(|r| u64::from(r.quota)).sum();
            if seats < u64::from(s.headcount) {
                out.push(format!("session {n}: {seats} seats for {} students", s.headcount));
            }
            let expected = if s.rooms.is_empty() {
                SessionCost::default()
            } else {
                SessionCost {
                    vacancies: seats.saturating_sub(u64::from(s.headcount)),
                    supervisors: s.rooms.iter().map(|r| u64::from(r.supervisors)).sum(),
                    buildings: buildings.len() as u64,
                }
            };
            if expected != s.cost {
                out.push(format!("session {n}: cost row {:?} != recomputed {:?}", s.cost, expected));
            }
        }

        // A room id must describe the same room everywhere it appears.
        let mut rooms: BTreeMap<&str, &ScheduledRoom> = BTreeMap::new();
        for r in self.sessions.iter().flat_map(|s| &s.rooms) {
            if let Some(prev) = rooms.insert(&r.id, r) {
                if prev != r {
                    out.push(format!("room {} described inconsistently", r.id));
                }
            }
        }

        let raw: i64 = self.sessions.iter().map(|s| s.stats.balance()).sum();
        if raw != self.stage1_raw_score {
            out.push(format!("stage-1 score {} != recomputed {raw}", self.stage1_raw_score));
        }
        let f: u64 = self.sessions.iter().map(|s| s.cost.total()).sum();
        if f != self.stage2_cost {
            out.push(format!("stage-2 cost {} != recomputed {f}", self.stage2_cost));
        }
        if self.seed != self.params.seed {
            out.push(format!("seed {} != params seed {}", self.seed, self.params.seed));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("schedule serializes");
        text.push('\n');
        text
    }
}

/// Writes atomically; a failed write leaves any existing file untouched.
pub fn write_schedule(schedule: &Schedule, path: &Path) -> Result<(), ScheduleError> {
    write_atomic(path, schedule.to_json().as_bytes())
        .map_err(|source| ScheduleError::Io { path: path.to_path_buf(), source })
}

pub fn read_schedule(path: &Path) -> Result<Schedule, ScheduleError> {
    let text = fs::read_to_string(path).map_err(|source| ScheduleError::Io { path: path.to_path_buf(), source })?;
    let schedule: Schedule =
        serde_json::from_str(&text).map_err(|source| ScheduleError::Format { path: path.to_path_buf(), source })?;
    if schedule.format_version != SCHEDULE_FORMAT_VERSION {
        return Err(ScheduleError::Version { path: path.to_path_buf(), found: schedule.format_version });
    }
    let problems = schedule.consistency_problems();
    if !problems.is_empty() {
        return Err(ScheduleError::Inconsistent { path: path.to_path_buf(), problems });
    }
    Ok(schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{CourseId, CourseOwner, UnifiedCourse};
    use crate::room_ga::RoomId;

    fn toy() -> (Catalog, Vec<Classroom>) {
        let course = |i: usize, owner: CourseOwner, students: &[&str]| UnifiedCourse {
            unified_id: format!("D{}", i + 1),
            course_code: format!("C{i}"),
            credit: 3,
            exam_minutes: 30,
            owner,
            enrolled_students: students.iter().map(|s| s.to_string()).collect(),
        };
        let courses = vec![
            course(0, CourseOwner::Common, &["a", "b", "c"]),
            course(1, CourseOwner::Department("X".into()), &["a", "b"]),
            course(2, CourseOwner::Department("Y".into()), &["c"]),
        ];
        let rooms = vec![
            Classroom { id: "R1".into(), building: "B1".into(), name: "r1".into(), quota: 2, supervisors: 1 },
            Classroom { id: "R2".into(), building: "B2".into(), name: "r2".into(), quota: 5, supervisors: 3 },
        ];
        (Catalog::from_courses(courses), rooms)
    }

    fn toy_schedule() -> Schedule {
        let (catalog, rooms) = toy();
        let sessions = SessionChromosome::new(vec![vec![CourseId(0), CourseId(1)], vec![CourseId(2)]]);
        let assigned = RoomChromosome::new(vec![vec![RoomId(1)], vec![RoomId(0)]]);
        Schedule::assemble(&catalog, &rooms, &SchedulingParams::default(), &sessions, &assigned)
    }

    #[test]
    fn assembled_schedule_is_consistent() {
        let s = toy_schedule();
        assert_eq!(s.consistency_problems(), Vec::<String>::new());
        assert_eq!(s.sessions[0].stats.common_students, 2);
        assert_eq!(s.sessions[0].stats.different_students, 1);
        assert_eq!(s.stage1_raw_score, 1 + 1);
        // (5-3) + 3 + 10, then (2-1) + 1 + 10
        assert_eq!(s.stage2_cost, 15 + 12);
    }

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("schedule.json");
        let s = toy_schedule();
        write_schedule(&s, &path).unwrap();
        assert_eq!(read_schedule(&path).unwrap(), s);
    }

    #[test]
    fn broken_cs_ds_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("schedule.json");
        let mut s = toy_schedule();
        s.sessions[0].stats.different_students += 1;
        fs::write(&path, s.to_json()).unwrap();
        let err = read_schedule(&path).unwrap_err();
        assert!(err.to_string().contains("CS 2 + DS 2 != 3"), "{err}");
    }

    #[test]
    fn future_version_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("schedule.json");
        let mut s = toy_schedule();
        s.format_version = 2;
        fs::write(&path, s.to_json()).unwrap();
        assert!(matches!(read_schedule(&path), Err(ScheduleError::Version { found: 2, .. })));
    }

    #[test]
    fn missing_file_names_path() {
        let err = read_schedule(Path::new("/nonexistent/sched.json")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/sched.json"));
    }
}
