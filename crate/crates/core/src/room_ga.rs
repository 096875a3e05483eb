//! Stage 2: seat each session's examinees in classrooms while keeping empty
//! seats, invigilators and buildings to a minimum.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chromosome::{draw_session_cuts, draw_swap_positions, exchange_sessions, SlotChromosome};
use crate::ga::{run_ga, run_ga_with_restarts, GaError, GaProblem, GaRng, GaRunResult};
use crate::instance::{Classroom, EnrollmentIndex, SchedulingParams};
use crate::session_ga::SessionChromosome;

/// Weight of each extra building in the cost.
pub const BUILDING_WEIGHT: u64 = 10;

/// Index into the classroom list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RoomId(pub usize);

/// Classroom ids per session; a room may serve several sessions but only once per session.
pub type RoomChromosome = SlotChromosome<RoomId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionHeadcount {
    pub session_index: usize,
    pub students: u32,
}

/// Distinct students sitting at least one exam of each session.
pub fn session_headcounts(sessions: &SessionChromosome, index: &EnrollmentIndex) -> Vec<SessionHeadcount> {
    sessions
        .sessions()
        .iter()
        .enumerate()
        .map(|(i, s)| SessionHeadcount { session_index: i, students: index.session_stats(s).distinct_enrollees as u32 })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SessionCost {
    pub vacancies: u64,
    pub supervisors: u64,
    pub buildings: u64,
}

impl SessionCost {
    pub fn total(&self) -> u64 {
        self.vacancies + self.supervisors + self.buildings * BUILDING_WEIGHT
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoomCost {
    pub sessions: Vec<SessionCost>,
    pub total: u64,
}

impl RoomCost {
    pub fn from_sessions(sessions: Vec<SessionCost>) -> Self {
        let total = sessions.iter().map(SessionCost::total).sum();
        Self { sessions, total }
    }

    pub fn vacancies(&self) -> u64 {
        self.sessions.iter().map(|s| s.vacancies).sum()
    }

    pub fn supervisors(&self) -> u64 {
        self.sessions.iter().map(|s| s.supervisors).sum()
    }

    pub fn buildings(&self) -> u64 {
        self.sessions.iter().map(|s| s.buildings).sum()
    }
}

/// Dense building numbering for a classroom list.
fn building_indices(classrooms: &[Classroom]) -> Vec<usize> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    classrooms
        .iter()
        .map(|r| {
            let next = ids.len();
            *ids.entry(r.building.as_str()).or_insert(next)
        })
        .collect()
}

fn session_cost(rooms: &[RoomId], classrooms: &[Classroom], buildings: &[usize], headcount: u32) -> SessionCost {
    if rooms.is_empty() {
        return SessionCost::default();
    }
    let seats: u64 = rooms.iter().map(|r| u64::from(classrooms[r.0].quota)).sum();
    let mut used: Vec<usize> = rooms.iter().map(|r| buildings[r.0]).collect();
    used.sort_unstable();
    used.dedup();
    SessionCost {
        vacancies: seats.saturating_sub(u64::from(headcount)),
        supervisors: rooms.iter().map(|r| u64::from(classrooms[r.0].supervisors)).sum(),
        buildings: used.len() as u64,
    }
}

/// Vacant seats, invigilators and buildings per session, and
/// `F = sum(VC + TS + 10 * DB)`.
pub fn stage2_cost(chrom: &RoomChromosome, classrooms: &[Classroom], headcounts: &[u32]) -> RoomCost {
    let buildings = building_indices(classrooms);
    RoomCost::from_sessions(
        chrom
            .sessions()
            .iter()
            .enumerate()
            .map(|(s, rooms)| session_cost(rooms, classrooms, &buildings, headcounts.get(s).copied().unwrap_or(0)))
            .collect(),
    )
}

/// `1 / F`, kept exact by storing `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseCost {
    pub cost: u64,
}

impl InverseCost {
    pub fn value(&self) -> f64 {
        1.0 / self.cost as f64
    }
}

pub fn stage2_fitness(cost: &RoomCost) -> Result<InverseCost, GaError> {
    if cost.total == 0 {
        return Err(GaError::NothingToAssign);
    }
    Ok(InverseCost { cost: cost.total })
}

/// Roulette weights: population total cost over each cost, rounded half-up.
pub fn stage2_selection_weights(costs: &[u64]) -> Vec<u64> {
    let total: u64 = costs.iter().sum();
    costs
        .iter()
        .map(|&f| {
            let f = f.max(1);
            (2 * total + f) / (2 * f)
        })
        .collect()
}

fn check_capacity(classrooms: &[Classroom], headcounts: &[u32]) -> Result<(), GaError> {
    let capacity: u64 = classrooms.iter().map(|r| u64::from(r.quota)).sum();
    match headcounts.iter().position(|&h| u64::from(h) > capacity) {
        Some(s) => Err(GaError::InfeasibleRooms { session: s + 1, headcount: headcounts[s], capacity }),
        None => Ok(()),
    }
}

/// Per session, draws random distinct classrooms until their quotas cover the
/// headcount. Empty sessions get no rooms.
pub fn seed_room_chromosome(
    classrooms: &[Classroom],
    headcounts: &[u32],
    rng: &mut impl Rng,
) -> Result<RoomChromosome, GaError> {
    check_capacity(classrooms, headcounts)?;
    let sessions = headcounts
        .iter()
        .map(|&headcount| {
            let mut pool: Vec<RoomId> = (0..classrooms.len()).map(RoomId).collect();
            let mut rooms = Vec::new();
            let mut seats = 0u64;
            while seats < u64::from(headcount) {
                let r = pool.swap_remove(rng.gen_range(0..pool.len()));
                seats += u64::from(classrooms[r.0].quota);
                rooms.push(r);
            }
            rooms
        })
        .collect();
    Ok(RoomChromosome::new(sessions))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoomDefect {
    WrongSessionCount { expected: usize, found: usize },
    UnknownRoom { session: usize, room: RoomId },
    Repeated { session: usize, room: RoomId },
    Undercapacity { session: usize, seats: u64, headcount: u32 },
    RoomsForEmptySession { session: usize },
}

/// Lists violations of in-session distinctness, coverage and empty-session rules.
pub fn room_defects(chrom: &RoomChromosome, classrooms: &[Classroom], headcounts: &[u32]) -> Vec<RoomDefect> {
    let mut defects = Vec::new();
    if chrom.session_count() != headcounts.len() {
        defects.push(RoomDefect::WrongSessionCount { expected: headcounts.len(), found: chrom.session_count() });
    }
    for (s, (rooms, &headcount)) in chrom.sessions().iter().zip(headcounts).enumerate() {
        let mut seen = vec![false; classrooms.len()];
        let mut seats = 0u64;
        for &r in rooms {
            match seen.get_mut(r.0) {
                None => defects.push(RoomDefect::UnknownRoom { session: s, room: r }),
                Some(true) => defects.push(RoomDefect::Repeated { session: s, room: r }),
                Some(flag) => {
                    *flag = true;
                    seats += u64::from(classrooms[r.0].quota);
                }
            }
        }
        if headcount == 0 {
            if !rooms.is_empty() {
                defects.push(RoomDefect::RoomsForEmptySession { session: s });
            }
        } else if seats < u64::from(headcount) {
            defects.push(RoomDefect::Undercapacity { session: s, seats, headcount });
        }
    }
    defects
}

pub fn crossover_rooms_at(
    a: &RoomChromosome,
    b: &RoomChromosome,
    lo: usize,
    hi: usize,
) -> (RoomChromosome, RoomChromosome) {
    exchange_sessions(a, b, lo, hi)
}

/// Two-point crossover on session slots; whole room lists move.
pub fn crossover_rooms(a: &RoomChromosome, b: &RoomChromosome, rng: &mut impl Rng) -> (RoomChromosome, RoomChromosome) {
    let (lo, hi) = draw_session_cuts(a.session_count().min(b.session_count()), rng);
    exchange_sessions(a, b, lo, hi)
}

pub fn mutate_room_swap_at(chrom: &RoomChromosome, i: usize, j: usize) -> RoomChromosome {
    let mut out = chrom.clone();
    out.swap_genes(i, j);
    out
}

/// Swaps two random flat positions, possibly across sessions.
pub fn mutate_room_swap(chrom: &RoomChromosome, rng: &mut impl Rng) -> RoomChromosome {
    match draw_swap_positions(chrom.gene_count(), rng) {
        Some((i, j)) => mutate_room_swap_at(chrom, i, j),
        None => chrom.clone(),
    }
}

/// Restores distinctness and coverage. Repeated rooms in a session are
/// replaced by random rooms unused there (dropped if none are left); then
/// random unused rooms are appended until the quota covers the headcount.
/// Excess rooms are kept.
pub fn repair_room_chromosome(
    chrom: RoomChromosome,
    classrooms: &[Classroom],
    headcounts: &[u32],
    rng: &mut impl Rng,
) -> Result<RoomChromosome, GaError> {
    let n = classrooms.len();
    let mut sessions = chrom.into_sessions();
    sessions.resize_with(headcounts.len(), Vec::new);

    for (s, (rooms, &headcount)) in sessions.iter_mut().zip(headcounts).enumerate() {
        if headcount == 0 {
            rooms.clear();
            continue;
        }
        rooms.retain(|r| r.0 < n);
        let mut used = vec![false; n];
        let mut repeats = Vec::new();
        for (o, r) in rooms.iter().enumerate() {
            if used[r.0] {
                repeats.push(o);
            } else {
                used[r.0] = true;
            }
        }
        let mut unused: Vec<RoomId> = (0..n).filter(|&r| !used[r]).map(RoomId).collect();
        let mut dropped = Vec::new();
        for o in repeats {
            if unused.is_empty() {
                dropped.push(o);
            } else {
                rooms[o] = unused.swap_remove(rng.gen_range(0..unused.len()));
            }
        }
        for o in dropped.into_iter().rev() {
            rooms.remove(o);
        }

        let mut seats: u64 = rooms.iter().map(|r| u64::from(classrooms[r.0].quota)).sum();
        while seats < u64::from(headcount) {
            if unused.is_empty() {
                let capacity = classrooms.iter().map(|r| u64::from(r.quota)).sum();
                return Err(GaError::InfeasibleRooms { session: s + 1, headcount, capacity });
            }
            let r = unused.swap_remove(rng.gen_range(0..unused.len()));
            seats += u64::from(classrooms[r.0].quota);
            rooms.push(r);
        }
    }
    Ok(RoomChromosome::new(sessions))
}

/// Stage-2 problem over fixed classrooms and session headcounts. The engine
/// maximizes `-F`.
#[derive(Debug, Clone)]
pub struct RoomProblem<'a> {
    classrooms: &'a [Classroom],
    headcounts: &'a [u32],
    buildings: Vec<usize>,
}

impl<'a> RoomProblem<'a> {
    pub fn new(classrooms: &'a [Classroom], headcounts: &'a [u32]) -> Result<Self, GaError> {
        if headcounts.iter().all(|&h| h == 0) {
            return Err(GaError::NothingToAssign);
        }
        check_capacity(classrooms, headcounts)?;
        Ok(Self { classrooms, headcounts, buildings: building_indices(classrooms) })
    }

    pub fn cost(&self, chrom: &RoomChromosome) -> u64 {
        chrom
            .sessions()
            .iter()
            .zip(self.headcounts)
            .map(|(rooms, &h)| session_cost(rooms, self.classrooms, &self.buildings, h).total())
            .sum()
    }

    pub fn defects(&self, chrom: &RoomChromosome) -> Vec<RoomDefect> {
        room_defects(chrom, self.classrooms, self.headcounts)
    }
}

impl GaProblem for RoomProblem<'_> {
    type Individual = RoomChromosome;
    type Fitness = InverseCost;

    fn seed_individual(&self, rng: &mut GaRng) -> Result<RoomChromosome, GaError> {
        seed_room_chromosome(self.classrooms, self.headcounts, rng)
    }

    fn raw_score(&self, chrom: &RoomChromosome) -> i64 {
        -(self.cost(chrom) as i64)
    }

    fn fitness(&self, raw_scores: &[i64]) -> Vec<InverseCost> {
        raw_scores.iter().map(|&r| InverseCost { cost: r.unsigned_abs() }).collect()
    }

    fn selection_weights(&self, fitness: &[InverseCost]) -> Vec<u64> {
        let costs: Vec<u64> = fitness.iter().map(|f| f.cost).collect();
        stage2_selection_weights(&costs)
    }

    fn crossover(&self, a: &RoomChromosome, b: &RoomChromosome, rng: &mut GaRng) -> (RoomChromosome, RoomChromosome) {
        crossover_rooms(a, b, rng)
    }

    fn mutate(&self, chrom: RoomChromosome, rng: &mut GaRng) -> RoomChromosome {
        mutate_room_swap(&chrom, rng)
    }

    fn repair(&self, chrom: RoomChromosome, rng: &mut GaRng) -> Result<RoomChromosome, GaError> {
        repair_room_chromosome(chrom, self.classrooms, self.headcounts, rng)
    }

    fn is_feasible(&self, chrom: &RoomChromosome) -> bool {
        self.defects(chrom).is_empty()
    }
}

/// Runs the stage-2 GA; the best individual minimizes `F`, reported as `-F`.
pub fn evolve_rooms(
    classrooms: &[Classroom],
    headcounts: &[u32],
    params: &SchedulingParams,
) -> Result<GaRunResult<RoomChromosome>, GaError> {
    run_ga(&RoomProblem::new(classrooms, headcounts)?, params)
}

pub fn evolve_rooms_with_restarts(
    classrooms: &[Classroom],
    headcounts: &[u32],
    params: &SchedulingParams,
    restarts: usize,
) -> Result<GaRunResult<RoomChromosome>, GaError> {
    run_ga_with_restarts(&RoomProblem::new(classrooms, headcounts)?, params, restarts)
}
