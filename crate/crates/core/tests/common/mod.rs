#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use central_exam::instance::{CourseOwner, UnifiedCourse};
use central_exam::{load_instance, Catalog, Classroom, CourseId, ExamInstance, SessionChromosome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/gazi")
}

pub fn fixture() -> ExamInstance {
    load_instance(&fixture_dir()).expect("bundled fixture loads")
}

pub fn classroom(id: &str, building: &str, quota: u32, supervisors: u32) -> Classroom {
    Classroom { id: id.into(), building: building.into(), name: id.into(), quota, supervisors }
}

/// Sessions given as `D<n>` labels.
pub fn sessions_by_label(catalog: &Catalog, sessions: &[&[&str]]) -> SessionChromosome {
    SessionChromosome::new(
        sessions
            .iter()
            .map(|s| s.iter().map(|l| catalog.course_by_label(l).unwrap_or_else(|| panic!("no {l}"))).collect())
            .collect(),
    )
}

/// The reference best individual for the fixture, cut into 150-minute sessions.
pub const BEST_INDIVIDUAL: [&[&str]; 4] = [
    &["D9", "D13", "D11", "D8", "D10"],
    &["D19", "D16", "D14", "D17", "D18"],
    &["D5", "D15", "D7", "D12", "D6"],
    &["D1", "D4", "D2", "D3"],
];

/// Small stage-1 instance: 4-8 courses of 30 or 60 minutes in 120-minute
/// sessions, needing 2 or 3 sessions, and 10-30 students in 2-3 departments.
/// Students mostly take their own department's courses; a course may be
/// common to all.
pub struct ToySessions {
    pub courses: Vec<UnifiedCourse>,
    pub session_count: usize,
    pub max_minutes: u32,
}

pub fn toy_sessions(seed: u64) -> ToySessions {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_minutes = 120;
    loop {
        let n = rng.gen_range(4..=8);
        let minutes: Vec<u32> = (0..n).map(|_| if rng.gen_bool(0.3) { 60 } else { 30 }).collect();
        let total: u32 = minutes.iter().sum();
        let k = total.div_ceil(max_minutes) as usize;
        if !(2..=3).contains(&k) {
            continue;
        }
        let departments = rng.gen_range(2..=3);
        let owners: Vec<Option<usize>> =
            (0..n).map(|_| if rng.gen_bool(0.2) { None } else { Some(rng.gen_range(0..departments)) }).collect();
        let students = rng.gen_range(10..=30);
        let mut rosters = vec![BTreeSet::new(); n];
        for s in 0..students {
            let home = rng.gen_range(0..departments);
            for (c, owner) in owners.iter().enumerate() {
                let p = match owner {
                    None => 0.9,
                    Some(d) if *d == home => 0.75,
                    Some(_) => 0.05,
                };
                if rng.gen_bool(p) {
                    rosters[c].insert(format!("s{s:02}"));
                }
            }
        }
        let courses = (0..n)
            .map(|c| UnifiedCourse {
                unified_id: format!("D{}", c + 1),
                course_code: format!("C{c}"),
                credit: 3,
                exam_minutes: minutes[c],
                owner: owners[c].map_or(CourseOwner::Common, |d| CourseOwner::Department(format!("P{d}"))),
                enrolled_students: std::mem::take(&mut rosters[c]),
            })
            .collect();
        return ToySessions { courses, session_count: k, max_minutes };
    }
}

/// Small stage-2 instance: 4-12 rooms over 2-3 buildings, 1-3 sessions whose
/// headcounts never exceed the combined quota.
pub struct ToyRooms {
    pub classrooms: Vec<Classroom>,
    pub headcounts: Vec<u32>,
}

pub fn toy_rooms(seed: u64) -> ToyRooms {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_0002);
    let rooms = rng.gen_range(4..=12);
    let buildings = rng.gen_range(2..=3);
    let classrooms: Vec<Classroom> = (0..rooms)
        .map(|r| {
            let big = rng.gen_bool(0.3);
            let quota = if big { rng.gen_range(80..=150) } else { rng.gen_range(15..=40) };
            classroom(
                &format!("S{}", r + 1),
                &format!("B{}", rng.gen_range(1..=buildings)),
                quota,
                if big { 3 } else { 1 },
            )
        })
        .collect();
    let capacity: u32 = classrooms.iter().map(|c| c.quota).sum();
    let sessions = rng.gen_range(1..=3);
    let headcounts = (0..sessions).map(|_| rng.gen_range(1..=capacity * 3 / 5)).collect();
    ToyRooms { classrooms, headcounts }
}

pub fn ids(chrom: &SessionChromosome) -> Vec<Vec<usize>> {
    chrom.sessions().iter().map(|s| s.iter().map(|c: &CourseId| c.0).collect()).collect()
}
