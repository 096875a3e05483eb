//! Plain-text rendering of a [`Schedule`].

use std::fmt::Write;

use crate::schedule::Schedule;

fn join<'a>(items: impl Iterator<Item = &'a str>) -> String {
    let v: Vec<&str> = items.collect();
    if v.is_empty() {
        "-".to_string()
    } else {
        v.join(",")
    }
}

/// Two tables: courses per session with common/different student counts, and
/// rooms per session with vacancies, supervisors and buildings. Totals follow
/// each table when there is at least one session.
pub fn render_report(schedule: &Schedule) -> String {
    let mut out = String::new();
    let title = schedule.exam_name.as_deref().unwrap_or("Exam schedule");
    writeln!(out, "{title}").unwrap();
    writeln!(
        out,
        "seed {}, {} sessions of at most {} minutes",
        schedule.seed,
        schedule.sessions.len(),
        schedule.params.max_session_minutes
    )
    .unwrap();
    writeln!(out).unwrap();

    let courses: Vec<String> =
        schedule.sessions.iter().map(|s| join(s.courses.iter().map(|c| c.unified_id.as_str()))).collect();
    let cw = courses.iter().map(String::len).max().unwrap_or(0).max("courses".len());
    writeln!(out, "{:<8} {:<cw$} {:>7} {:>8} {:>6} {:>6}", "session", "courses", "minutes", "students", "CS", "DS")
        .unwrap();
    for (s, c) in schedule.sessions.iter().zip(&courses) {
        let st = &s.stats;
        writeln!(
            out,
            "{:<8} {:<cw$} {:>7} {:>8} {:>6} {:>6}",
            s.number, c, st.total_exam_minutes, st.distinct_enrollees, st.common_students, st.different_students
        )
        .unwrap();
    }
    if !schedule.sessions.is_empty() {
        let cs: usize = schedule.sessions.iter().map(|s| s.stats.common_students).sum();
        let ds: usize = schedule.sessions.iter().map(|s| s.stats.different_students).sum();
        writeln!(out, "{:<8} {:<cw$} {:>7} {:>8} {:>6} {:>6}", "total", "", "", "", cs, ds).unwrap();
        writeln!(out, "score (CS - DS): {}", schedule.stage1_raw_score).unwrap();
    }
    writeln!(out).unwrap();

    let rooms: Vec<String> = schedule.sessions.iter().map(|s| join(s.rooms.iter().map(|r| r.id.as_str()))).collect();
    let rw = rooms.iter().map(String::len).max().unwrap_or(0).max("rooms".len());
    writeln!(
        out,
        "{:<8} {:>8} {:<rw$} {:>5} {:>5} {:>5} {:>6}",
        "session", "students", "rooms", "VC", "TS", "DB", "cost"
    )
    .unwrap();
    for (s, r) in schedule.sessions.iter().zip(&rooms) {
        let c = &s.cost;
        writeln!(
            out,
            "{:<8} {:>8} {:<rw$} {:>5} {:>5} {:>5} {:>6}",
            s.number,
            s.headcount,
            r,
            c.vacancies,
            c.supervisors,
            c.buildings,
            c.total()
        )
        .unwrap();
    }
    if !schedule.sessions.is_empty() {
        writeln!(
            out,
            "{:<8} {:>8} {:<rw$} {:>5} {:>5} {:>5} {:>6}",
            "total",
            "",
            "",
            schedule.total_vacancies(),
            schedule.total_supervisors(),
            schedule.total_buildings(),
            schedule.stage2_cost
        )
        .unwrap();
    }
    out
}
