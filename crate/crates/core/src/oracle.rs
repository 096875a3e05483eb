//! Exhaustive optima and a greedy baseline for small instances. Nothing here
//! shares code with the GA operators or their scoring shortcuts.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::instance::{Classroom, CourseId, UnifiedCourse};
use crate::room_ga::{RoomChromosome, RoomId, BUILDING_WEIGHT};
use crate::session_ga::SessionChromosome;

pub const STAGE1_MAX_COURSES: usize = 10;
pub const STAGE1_MAX_SESSIONS: usize = 3;
pub const STAGE2_MAX_ROOMS: usize = 12;
pub const STAGE2_MAX_SESSIONS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} exceeds the enumeration budget ({actual} > {limit})")]
    BudgetExceeded { what: &'static str, actual: usize, limit: usize },
    #[error("session {session} needs {headcount} seats but all classrooms together offer {capacity}")]
    InfeasibleRooms { session: usize, headcount: u32, capacity: u64 },
    #[error("no partition satisfies the session length cap")]
    NoFeasiblePartition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult<S> {
    pub best_value: i64,
    pub best_solution: S,
    /// Candidates examined.
    pub enumerated: usize,
}

/// Enumeration caps; the defaults are the module constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_courses: usize,
    pub max_sessions: usize,
    pub max_rooms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_courses: STAGE1_MAX_COURSES,
            max_sessions: STAGE1_MAX_SESSIONS.max(STAGE2_MAX_SESSIONS),
            max_rooms: STAGE2_MAX_ROOMS,
        }
    }
}

fn over(what: &'static str, actual: usize, limit: usize) -> Result<(), OracleError> {
    if actual > limit {
        Err(OracleError::BudgetExceeded { what, actual, limit })
    } else {
        Ok(())
    }
}

/// Stage-1 score of one block computed straight from the rosters.
fn block_score(block: &[usize], courses: &[UnifiedCourse]) -> i64 {
    let mut everyone: BTreeSet<&String> = BTreeSet::new();
    for &c in block {
        everyone.extend(courses[c].enrolled_students.iter());
    }
    let common =
        everyone.iter().filter(|s| block.iter().all(|&c| courses[c].enrolled_students.contains(**s))).count() as i64;
    common - (everyone.len() as i64 - common)
}

/// Maximum of `sum(CS - DS)` over every split of the courses into exactly
/// `session_count` non-empty unordered sessions respecting the length cap.
pub fn exhaustive_stage1(
    courses: &[UnifiedCourse],
    session_count: usize,
    max_session_minutes: u32,
) -> Result<OracleResult<SessionChromosome>, OracleError> {
    exhaustive_stage1_with_budget(courses, session_count, max_session_minutes, Budget::default())
}

pub fn exhaustive_stage1_with_budget(
    courses: &[UnifiedCourse],
    session_count: usize,
    max_session_minutes: u32,
    budget: Budget,
) -> Result<OracleResult<SessionChromosome>, OracleError> {
    over("course count", courses.len(), budget.max_courses)?;
    over("session count", session_count, budget.max_sessions)?;
    let n = courses.len();
    if session_count == 0 || session_count > n {
        return Err(OracleError::NoFeasiblePartition);
    }

    // Restricted growth strings: labels[i] <= 1 + max(labels[..i]) lists each
    // unordered partition exactly once.
    let mut labels = vec![0usize; n];
    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut enumerated = 0usize;
    loop {
        let blocks = labels.iter().max().map_or(0, |m| m + 1);
        if blocks == session_count {
            enumerated += 1;
            let mut minutes = vec![0u32; session_count];
            for (i, &l) in labels.iter().enumerate() {
                minutes[l] += courses[i].exam_minutes;
            }
            if minutes.iter().all(|&m| m <= max_session_minutes) {
                let score: i64 = (0..session_count)
                    .map(|b| {
                        let block: Vec<usize> = (0..n).filter(|&i| labels[i] == b).collect();
                        block_score(&block, courses)
                    })
                    .sum();
                if best.as_ref().is_none_or(|(s, _)| score > *s) {
                    best = Some((score, labels.clone()));
                }
            }
        }
        if !next_growth_string(&mut labels, session_count) {
            break;
        }
    }

    let (best_value, labels) = best.ok_or(OracleError::NoFeasiblePartition)?;
    let mut sessions = vec![Vec::new(); session_count];
    for (i, &l) in labels.iter().enumerate() {
        sessions[l].push(CourseId(i));
    }
    Ok(OracleResult { best_value, best_solution: SessionChromosome::new(sessions), enumerated })
}

/// Advances to the next restricted growth string with labels below `k`.
fn next_growth_string(labels: &mut [usize], k: usize) -> bool {
    for i in (1..labels.len()).rev() {
        let prefix_max = labels[..i].iter().max().copied().unwrap_or(0);
        if labels[i] <= prefix_max && labels[i] + 1 < k {
            labels[i] += 1;
            for l in &mut labels[i + 1..] {
                *l = 0;
            }
            return true;
        }
    }
    false
}

fn subset_cost(mask: u32, classrooms: &[Classroom], headcount: u32) -> Option<i64> {
    let members: Vec<&Classroom> =
        (0..classrooms.len()).filter(|&r| mask >> r & 1 == 1).map(|r| &classrooms[r]).collect();
    let seats: i64 = members.iter().map(|r| i64::from(r.quota)).sum();
    if seats < i64::from(headcount) {
        return None;
    }
    let supervisors: i64 = members.iter().map(|r| i64::from(r.supervisors)).sum();
    let buildings = members.iter().map(|r| r.building.as_str()).collect::<BTreeSet<_>>().len() as i64;
    Some(seats - i64::from(headcount) + supervisors + buildings * BUILDING_WEIGHT as i64)
}

/// Minimum total cost with each session covered by its own cheapest subset of
/// classrooms. Sessions are independent, so per-session minima add up.
/// `best_value` is the minimum `F` (not negated).
pub fn exhaustive_stage2(
    classrooms: &[Classroom],
    headcounts: &[u32],
) -> Result<OracleResult<RoomChromosome>, OracleError> {
    exhaustive_stage2_with_budget(classrooms, headcounts, Budget::default())
}

pub fn exhaustive_stage2_with_budget(
    classrooms: &[Classroom],
    headcounts: &[u32],
    budget: Budget,
) -> Result<OracleResult<RoomChromosome>, OracleError> {
    over("classroom count", classrooms.len(), budget.max_rooms.min(31))?;
    over("session count", headcounts.len(), budget.max_sessions)?;
    let capacity: u64 = classrooms.iter().map(|r| u64::from(r.quota)).sum();
    let mut total = 0i64;
    let mut enumerated = 0usize;
    let mut sessions = Vec::with_capacity(headcounts.len());
    for (s, &headcount) in headcounts.iter().enumerate() {
        if headcount == 0 {
            sessions.push(Vec::new());
            continue;
        }
        let mut best: Option<(i64, u32)> = None;
        for mask in 1..(1u32 << classrooms.len()) {
            enumerated += 1;
            if let Some(cost) = subset_cost(mask, classrooms, headcount) {
                if best.is_none_or(|(b, _)| cost < b) {
                    best = Some((cost, mask));
                }
            }
        }
        let (cost, mask) = best.ok_or(OracleError::InfeasibleRooms { session: s + 1, headcount, capacity })?;
        total += cost;
        sessions.push((0..classrooms.len()).filter(|&r| mask >> r & 1 == 1).map(RoomId).collect());
    }
    Ok(OracleResult { best_value: total, best_solution: RoomChromosome::new(sessions), enumerated })
}

/// Largest rooms first until each session is covered; ties by input order.
pub fn greedy_stage2_baseline(classrooms: &[Classroom], headcounts: &[u32]) -> Result<RoomChromosome, OracleError> {
    let capacity: u64 = classrooms.iter().map(|r| u64::from(r.quota)).sum();
    let mut order: Vec<usize> = (0..classrooms.len()).collect();
    order.sort_by(|&a, &b| classrooms[b].quota.cmp(&classrooms[a].quota).then(a.cmp(&b)));
    let mut sessions = Vec::with_capacity(headcounts.len());
    for (s, &headcount) in headcounts.iter().enumerate() {
        if u64::from(headcount) > capacity {
            return Err(OracleError::InfeasibleRooms { session: s + 1, headcount, capacity });
        }
        let mut seats = 0u64;
        let mut rooms = Vec::new();
        for &r in &order {
            if seats >= u64::from(headcount) {
                break;
            }
            seats += u64::from(classrooms[r].quota);
            rooms.push(RoomId(r));
        }
        sessions.push(rooms);
    }
    Ok(RoomChromosome::new(sessions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::CourseOwner;

    fn course(i: usize, minutes: u32, students: &[&str]) -> UnifiedCourse {
        UnifiedCourse {
            unified_id: format!("D{}", i + 1),
            course_code: format!("C{i}"),
            credit: 0,
            exam_minutes: minutes,
            owner: CourseOwner::Department("X".into()),
            enrolled_students: students.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn room(id: &str, building: &str, quota: u32, supervisors: u32) -> Classroom {
        Classroom { id: id.into(), building: building.into(), name: id.into(), quota, supervisors }
    }

    fn stirling2(n: usize, k: usize) -> usize {
        match (n, k) {
            (0, 0) => 1,
            (_, 0) | (0, _) => 0,
            _ => k * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
        }
    }

    #[test]
    fn growth_strings_count_set_partitions() {
        for n in 1..=7 {
            for k in 1..=3.min(n) {
                let courses: Vec<_> = (0..n).map(|i| course(i, 1, &[])).collect();
                let r = exhaustive_stage1(&courses, k, 1000).unwrap();
                assert_eq!(r.enumerated, stirling2(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn toy_pairs() {
        let courses = vec![
            course(0, 30, &["s1", "s2"]),
            course(1, 30, &["s1", "s2"]),
            course(2, 30, &["s3"]),
            course(3, 30, &["s3"]),
        ];
        let r = exhaustive_stage1(&courses, 2, 60).unwrap();
        assert_eq!(r.best_value, 3);
        assert_eq!(r.best_solution.sessions(), &[vec![CourseId(0), CourseId(1)], vec![CourseId(2), CourseId(3)]]);
        // the three balanced pairings are the only feasible candidates
        assert_eq!(block_score(&[0, 2], &courses) + block_score(&[1, 3], &courses), -6);
        assert_eq!(block_score(&[0, 3], &courses) + block_score(&[1, 2], &courses), -6);
    }

    #[test]
    fn single_session_and_full_overlap() {
        let everyone = ["a", "b", "c"];
        let courses: Vec<_> = (0..4).map(|i| course(i, 30, &everyone)).collect();
        assert_eq!(exhaustive_stage1(&courses, 1, 120).unwrap().best_value, 3);
        assert_eq!(exhaustive_stage1(&courses, 2, 120).unwrap().best_value, 6);
        assert_eq!(exhaustive_stage1(&courses, 3, 120).unwrap().best_value, 9);
    }

    #[test]
    fn budget_is_enforced() {
        let courses: Vec<_> = (0..11).map(|i| course(i, 1, &[])).collect();
        assert!(matches!(exhaustive_stage1(&courses, 2, 100), Err(OracleError::BudgetExceeded { .. })));
        let relaxed = Budget { max_courses: 11, ..Budget::default() };
        assert!(exhaustive_stage1_with_budget(&courses, 2, 100, relaxed).is_ok());
        let rooms: Vec<_> = (0..13).map(|i| room(&format!("R{i}"), "b", 1, 1)).collect();
        assert!(matches!(exhaustive_stage2(&rooms, &[1]), Err(OracleError::BudgetExceeded { .. })));
    }

    #[test]
    fn three_room_toy() {
        let rooms = vec![room("A", "b1", 12, 1), room("B", "b1", 5, 1), room("C", "b2", 6, 1)];
        let r = exhaustive_stage2(&rooms, &[10]).unwrap();
        assert_eq!(r.best_value, 13);
        assert_eq!(r.best_solution.sessions(), &[vec![RoomId(0)]]);
        assert_eq!(r.enumerated, 7);
        // hand enumeration of the covering subsets
        assert_eq!(subset_cost(0b001, &rooms, 10), Some(2 + 1 + 10));
        assert_eq!(subset_cost(0b110, &rooms, 10), Some(1 + 2 + 20));
        assert_eq!(subset_cost(0b011, &rooms, 10), Some(7 + 2 + 10));
        assert_eq!(subset_cost(0b010, &rooms, 10), None);
    }

    #[test]
    fn exact_fit_and_empty_sessions() {
        let rooms = vec![room("R", "b", 30, 1)];
        assert_eq!(exhaustive_stage2(&rooms, &[30]).unwrap().best_value, 11);
        let r = exhaustive_stage2(&rooms, &[0, 30]).unwrap();
        assert!(r.best_solution.sessions()[0].is_empty());
        assert_eq!(r.best_value, 11);
        assert!(matches!(exhaustive_stage2(&rooms, &[31]), Err(OracleError::InfeasibleRooms { session: 1, .. })));
    }

    #[test]
    fn greedy_edge_cases() {
        let rooms = vec![room("R", "b", 30, 1)];
        assert_eq!(greedy_stage2_baseline(&rooms, &[0]).unwrap().sessions(), &[Vec::<RoomId>::new()]);
        assert_eq!(greedy_stage2_baseline(&rooms, &[7]).unwrap().sessions(), &[vec![RoomId(0)]]);
        assert!(greedy_stage2_baseline(&rooms, &[31]).is_err());
    }
}
