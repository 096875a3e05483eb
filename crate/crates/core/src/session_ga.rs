//! Stage 1: partition unified courses into exam sessions so that sessions
//! gather students who sit all of their exams together.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chromosome::{draw_session_cuts, draw_swap_positions, exchange_sessions, SlotChromosome};
use crate::ga::{run_ga, run_ga_with_restarts, GaError, GaProblem, GaRng, GaRunResult};
use crate::instance::{Catalog, CourseId, CourseOwner, EnrollmentIndex, SchedulingParams, UnifiedCourse};

/// Course ids per session; the flat gene view reads sessions back to back.
pub type SessionChromosome = SlotChromosome<CourseId>;

/// Why a stage-1 chromosome breaks a hard constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionDefect {
    WrongSessionCount { expected: usize, found: usize },
    UnknownCourse(CourseId),
    Missing(CourseId),
    Repeated(CourseId),
    OverLength { session: usize, minutes: u32 },
}

/// Lists every hard-constraint violation: each course exactly once, the
/// expected number of sessions, and every session within the length cap.
pub fn session_defects(
    chrom: &SessionChromosome,
    courses: &[UnifiedCourse],
    session_count: usize,
    max_session_minutes: u32,
) -> Vec<SessionDefect> {
    let mut defects = Vec::new();
    if chrom.session_count() != session_count {
        defects.push(SessionDefect::WrongSessionCount { expected: session_count, found: chrom.session_count() });
    }
    let mut seen = vec![0usize; courses.len()];
    for c in chrom.genes() {
        match seen.get_mut(c.0) {
            Some(n) => *n += 1,
            None => defects.push(SessionDefect::UnknownCourse(c)),
        }
    }
    for (i, &n) in seen.iter().enumerate() {
        match n {
            0 => defects.push(SessionDefect::Missing(CourseId(i))),
            1 => {}
            _ => defects.push(SessionDefect::Repeated(CourseId(i))),
        }
    }
    for (s, genes) in chrom.sessions().iter().enumerate() {
        let minutes: u32 = genes.iter().filter_map(|c| courses.get(c.0)).map(|c| c.exam_minutes).sum();
        if minutes > max_session_minutes {
            defects.push(SessionDefect::OverLength { session: s, minutes });
        }
    }
    defects
}

/// One randomized pass of the course assignment procedure. Sessions are filled
/// in order; after the first pick a session only draws courses owned by the
/// same department as its last departmental course, or common courses, and
/// widens to every fitting course once that pool runs dry. A session closes
/// when nothing left fits. Returns `None` if a course is stranded.
pub fn pack_sessions_randomly(
    courses: &[UnifiedCourse],
    session_count: usize,
    max_session_minutes: u32,
    rng: &mut impl Rng,
) -> Option<SessionChromosome> {
    let mut unassigned: Vec<CourseId> = (0..courses.len()).map(CourseId).collect();
    let mut sessions = Vec::with_capacity(session_count);
    for _ in 0..session_count {
        let mut session: Vec<CourseId> = Vec::new();
        let mut remaining = max_session_minutes;
        // Last departmental course placed; common courses leave it unchanged.
        let mut anchor: Option<&CourseOwner> = None;
        loop {
            let fitting: Vec<usize> =
                (0..unassigned.len()).filter(|&i| courses[unassigned[i].0].exam_minutes <= remaining).collect();
            if fitting.is_empty() {
                break;
            }
            let pool: Vec<usize> = if session.is_empty() {
                fitting.clone()
            } else {
                fitting
                    .iter()
                    .copied()
                    .filter(|&i| {
                        let owner = &courses[unassigned[i].0].owner;
                        owner.is_common() || Some(owner) == anchor
                    })
                    .collect()
            };
            let pool = if pool.is_empty() { fitting } else { pool };
            let pick = unassigned.remove(pool[rng.gen_range(0..pool.len())]);
            let course = &courses[pick.0];
            remaining -= course.exam_minutes;
            if !course.owner.is_common() {
                anchor = Some(&course.owner);
            }
            session.push(pick);
        }
        sessions.push(session);
    }
    unassigned.is_empty().then(|| SessionChromosome::new(sessions))
}

/// Deterministic first-fit-decreasing packing into exactly `session_count` sessions.
pub fn first_fit_decreasing(
    courses: &[UnifiedCourse],
    session_count: usize,
    max_session_minutes: u32,
) -> Option<SessionChromosome> {
    let mut order: Vec<CourseId> = (0..courses.len()).map(CourseId).collect();
    order.sort_by(|a, b| courses[b.0].exam_minutes.cmp(&courses[a.0].exam_minutes).then(a.cmp(b)));
    let mut sessions = vec![Vec::new(); session_count];
    let mut load = vec![0u32; session_count];
    for c in order {
        let minutes = courses[c.0].exam_minutes;
        let slot = (0..session_count).find(|&s| load[s] + minutes <= max_session_minutes)?;
        load[slot] += minutes;
        sessions[slot].push(c);
    }
    Some(SessionChromosome::new(sessions))
}

/// Builds one initial individual: up to `seeding_retries` randomized packings,
/// then first-fit-decreasing, then [`GaError::SeedingFailed`].
pub fn seed_course_chromosome(
    courses: &[UnifiedCourse],
    session_count: usize,
    params: &SchedulingParams,
    rng: &mut impl Rng,
) -> Result<SessionChromosome, GaError> {
    let attempts = params.seeding_retries.max(1);
    for _ in 0..attempts {
        if let Some(c) = pack_sessions_randomly(courses, session_count, params.max_session_minutes, rng) {
            return Ok(c);
        }
    }
    first_fit_decreasing(courses, session_count, params.max_session_minutes).ok_or(GaError::SeedingFailed { attempts })
}

/// Sum over sessions of common minus different students.
pub fn stage1_raw_score(chrom: &SessionChromosome, index: &EnrollmentIndex) -> i64 {
    chrom.sessions().iter().map(|s| index.session_stats(s).balance()).sum()
}

/// Shifts raw scores so the population minimum becomes zero.
pub fn stage1_fitness(raw_scores: &[i64]) -> Vec<u64> {
    let Some(&min) = raw_scores.iter().min() else {
        return Vec::new();
    };
    raw_scores.iter().map(|&r| (r - min) as u64).collect()
}

/// Share of the total fitness rounded half-up to whole percentage points.
/// All zeros when the total is zero.
pub fn stage1_selection_weights(fitness: &[u64]) -> Vec<u64> {
    let total: u64 = fitness.iter().sum();
    if total == 0 {
        return vec![0; fitness.len()];
    }
    fitness.iter().map(|&f| (200 * f + total) / (2 * total)).collect()
}

/// Exchanges the session blocks between cut points `lo` and `hi`.
pub fn crossover_sessions_at(
    a: &SessionChromosome,
    b: &SessionChromosome,
    lo: usize,
    hi: usize,
) -> (SessionChromosome, SessionChromosome) {
    exchange_sessions(a, b, lo, hi)
}

/// Two-point crossover on session boundaries. Children usually need repair.
pub fn crossover_sessions(
    a: &SessionChromosome,
    b: &SessionChromosome,
    rng: &mut impl Rng,
) -> (SessionChromosome, SessionChromosome) {
    let (lo, hi) = draw_session_cuts(a.session_count().min(b.session_count()), rng);
    exchange_sessions(a, b, lo, hi)
}

/// Swaps the genes at flat positions `i` and `j`.
pub fn mutate_course_swap_at(chrom: &SessionChromosome, i: usize, j: usize) -> SessionChromosome {
    let mut out = chrom.clone();
    out.swap_genes(i, j);
    out
}

/// Swaps two random distinct flat positions. With mixed exam lengths this can
/// push a session over the cap; [`repair_course_chromosome`] rebalances it.
pub fn mutate_course_swap(chrom: &SessionChromosome, rng: &mut impl Rng) -> SessionChromosome {
    match draw_swap_positions(chrom.gene_count(), rng) {
        Some((i, j)) => mutate_course_swap_at(chrom, i, j),
        None => chrom.clone(),
    }
}

fn session_minutes(genes: &[CourseId], courses: &[UnifiedCourse]) -> u32 {
    genes.iter().map(|c| courses[c.0].exam_minutes).sum()
}

/// Session with the most free minutes that can take `minutes`, lowest index on ties.
fn roomiest_session(load: &[u32], max: u32, minutes: u32, skip: Option<usize>) -> Option<usize> {
    (0..load.len()).filter(|&s| Some(s) != skip && load[s] + minutes <= max).min_by_key(|&s| (load[s], s))
}

/// Restores the exactly-once and session-length constraints.
///
/// Duplicates keep one random occurrence; every other occurrence takes a
/// random missing course, or is dropped when nothing is missing. Courses still
/// missing go to the roomiest session. Finally, overfull sessions shed random
/// courses into the roomiest session able to take them, giving up with
/// [`GaError::RepairFailed`] after `n * n` moves.
pub fn repair_course_chromosome(
    chrom: SessionChromosome,
    courses: &[UnifiedCourse],
    session_count: usize,
    max_session_minutes: u32,
    rng: &mut impl Rng,
) -> Result<SessionChromosome, GaError> {
    let n = courses.len();
    let mut sessions = chrom.into_sessions();
    sessions.resize_with(session_count, Vec::new);
    for s in &mut sessions {
        s.retain(|c| c.0 < n);
    }

    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (s, genes) in sessions.iter().enumerate() {
        for (o, c) in genes.iter().enumerate() {
            occurrences[c.0].push((s, o));
        }
    }
    let mut missing: Vec<CourseId> = (0..n).filter(|&c| occurrences[c].is_empty()).map(CourseId).collect();

    let mut dropped: Vec<(usize, usize)> = Vec::new();
    for places in occurrences.iter_mut().filter(|p| p.len() > 1) {
        let keep = rng.gen_range(0..places.len());
        places.remove(keep);
        for &(s, o) in places.iter() {
            if missing.is_empty() {
                dropped.push((s, o));
            } else {
                let pick = rng.gen_range(0..missing.len());
                sessions[s][o] = missing.swap_remove(pick);
            }
        }
    }
    dropped.sort_unstable_by(|a, b| b.cmp(a));
    for (s, o) in dropped {
        sessions[s].remove(o);
    }

    let mut load: Vec<u32> = sessions.iter().map(|s| session_minutes(s, courses)).collect();
    missing.shuffle(rng);
    for c in missing {
        let minutes = courses[c.0].exam_minutes;
        let slot = roomiest_session(&load, max_session_minutes, minutes, None)
            .or_else(|| (0..session_count).min_by_key(|&s| (load[s], s)))
            .ok_or(GaError::RepairFailed)?;
        sessions[slot].push(c);
        load[slot] += minutes;
    }

    let mut moves = 0usize;
    while let Some(over) = (0..session_count).find(|&s| load[s] > max_session_minutes) {
        if moves >= n * n {
            return Err(GaError::RepairFailed);
        }
        let movable: Vec<usize> = (0..sessions[over].len())
            .filter(|&o| {
                roomiest_session(&load, max_session_minutes, courses[sessions[over][o].0].exam_minutes, Some(over))
                    .is_some()
            })
            .collect();
        if movable.is_empty() {
            return Err(GaError::RepairFailed);
        }
        let o = movable[rng.gen_range(0..movable.len())];
        let c = sessions[over].remove(o);
        let minutes = courses[c.0].exam_minutes;
        let target = roomiest_session(&load, max_session_minutes, minutes, Some(over)).expect("checked movable");
        sessions[target].push(c);
        load[over] -= minutes;
        load[target] += minutes;
        moves += 1;
    }

    Ok(SessionChromosome::new(sessions))
}

/// Stage-1 problem bound to a catalog and a fixed session count.
#[derive(Debug, Clone, Copy)]
pub struct SessionProblem<'a> {
    pub catalog: &'a Catalog,
    pub session_count: usize,
    pub max_session_minutes: u32,
    pub seeding_retries: usize,
}

impl<'a> SessionProblem<'a> {
    pub fn new(catalog: &'a Catalog, params: &SchedulingParams) -> Result<Self, GaError> {
        Ok(Self {
            catalog,
            session_count: catalog.session_count(params.max_session_minutes)?,
            max_session_minutes: params.max_session_minutes,
            seeding_retries: params.seeding_retries,
        })
    }

    pub fn defects(&self, chrom: &SessionChromosome) -> Vec<SessionDefect> {
        session_defects(chrom, &self.catalog.courses, self.session_count, self.max_session_minutes)
    }
}

impl GaProblem for SessionProblem<'_> {
    type Individual = SessionChromosome;
    type Fitness = u64;

    fn seed_individual(&self, rng: &mut GaRng) -> Result<SessionChromosome, GaError> {
        let params = SchedulingParams {
            max_session_minutes: self.max_session_minutes,
            seeding_retries: self.seeding_retries,
            ..SchedulingParams::default()
        };
        seed_course_chromosome(&self.catalog.courses, self.session_count, &params, rng)
    }

    fn raw_score(&self, chrom: &SessionChromosome) -> i64 {
        stage1_raw_score(chrom, &self.catalog.index)
    }

    fn fitness(&self, raw_scores: &[i64]) -> Vec<u64> {
        stage1_fitness(raw_scores)
    }

    fn selection_weights(&self, fitness: &[u64]) -> Vec<u64> {
        stage1_selection_weights(fitness)
    }

    fn crossover(
        &self,
        a: &SessionChromosome,
        b: &SessionChromosome,
        rng: &mut GaRng,
    ) -> (SessionChromosome, SessionChromosome) {
        crossover_sessions(a, b, rng)
    }

    fn mutate(&self, chrom: SessionChromosome, rng: &mut GaRng) -> SessionChromosome {
        mutate_course_swap(&chrom, rng)
    }

    fn repair(&self, chrom: SessionChromosome, rng: &mut GaRng) -> Result<SessionChromosome, GaError> {
        repair_course_chromosome(chrom, &self.catalog.courses, self.session_count, self.max_session_minutes, rng)
    }

    fn is_feasible(&self, chrom: &SessionChromosome) -> bool {
        self.defects(chrom).is_empty()
    }
}

/// Runs the stage-1 GA, maximizing [`stage1_raw_score`].
pub fn evolve_sessions(
    catalog: &Catalog,
    params: &SchedulingParams,
) -> Result<GaRunResult<SessionChromosome>, GaError> {
    run_ga(&SessionProblem::new(catalog, params)?, params)
}

/// Best of `restarts` independent stage-1 runs.
pub fn evolve_sessions_with_restarts(
    catalog: &Catalog,
    params: &SchedulingParams,
    restarts: usize,
) -> Result<GaRunResult<SessionChromosome>, GaError> {
    run_ga_with_restarts(&SessionProblem::new(catalog, params)?, params, restarts)
}
