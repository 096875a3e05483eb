//! Generational GA loop with elitism and roulette-wheel selection.
//!
//! Random draws come from a single ChaCha8 stream seeded from
//! [`SchedulingParams::seed`]. The stream is consumed in a fixed order:
//! seeding of the initial population, then for each offspring pair of each
//! generation: two selection draws, the crossover coin (plus cut draws), and
//! for each child its mutation coin (plus swap draws) followed by any repair
//! draws. Scoring never touches the stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{InstanceError, SchedulingParams};

pub type GaRng = ChaCha8Rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no feasible individual after {attempts} seeding attempts")]
    SeedingFailed { attempts: usize },
    #[error("repair could not restore feasibility")]
    RepairFailed,
    #[error("all selection weights are zero")]
    AllZeroWeights,
    #[error("session {session} needs {headcount} seats but all classrooms together offer {capacity}")]
    InfeasibleRooms { session: usize, headcount: u32, capacity: u64 },
    #[error("no session has examinees; nothing to assign")]
    NothingToAssign,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// A stage-specific problem plugged into [`run_ga`]. Scores are maximized.
pub trait GaProblem {
    type Individual: Clone;
    type Fitness;

    fn seed_individual(&self, rng: &mut GaRng) -> Result<Self::Individual, GaError>;

    /// Pure objective; larger is better.
    fn raw_score(&self, individual: &Self::Individual) -> i64;

    fn fitness(&self, raw_scores: &[i64]) -> Vec<Self::Fitness>;

    fn selection_weights(&self, fitness: &[Self::Fitness]) -> Vec<u64>;

    fn crossover(
        &self,
        a: &Self::Individual,
        b: &Self::Individual,
        rng: &mut GaRng,
    ) -> (Self::Individual, Self::Individual);

    fn mutate(&self, individual: Self::Individual, rng: &mut GaRng) -> Self::Individual;

    fn repair(&self, individual: Self::Individual, rng: &mut GaRng) -> Result<Self::Individual, GaError>;

    fn is_feasible(&self, individual: &Self::Individual) -> bool;
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaRunResult<I> {
    pub best_individual: I,
    pub best_raw_score: i64,
    /// Best raw score of the initial population.
    pub initial_best_raw_score: i64,
    pub generations_run: usize,
    /// Best raw score of each generation after the initial one.
    pub history: Vec<i64>,
}

impl<I> GaRunResult<I> {
    /// First generation whose best reached the final best; 0 when the initial
    /// population already held it.
    pub fn generations_to_best(&self) -> usize {
        if self.initial_best_raw_score >= self.best_raw_score {
            return 0;
        }
        self.history.iter().position(|&h| h >= self.best_raw_score).map_or(self.generations_run, |p| p + 1)
    }
}

/// Spins a wheel whose slots are proportional to `weights`.
pub fn roulette_select(weights: &[u64], rng: &mut impl Rng) -> Result<usize, GaError> {
    let total: u64 = weights.iter().sum();
    if total == 0 {
        return Err(GaError::AllZeroWeights);
    }
    let mut ticket = rng.gen_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if ticket < w {
            return Ok(i);
        }
        ticket -= w;
    }
    unreachable!("ticket below total weight")
}

/// True once the generation cap is hit or the last `stagnation_limit`
/// history entries show no improvement.
pub fn should_terminate(history: &[i64], params: &SchedulingParams) -> bool {
    if history.len() >= params.max_generations {
        return true;
    }
    let window = params.stagnation_limit;
    window > 0 && history.len() >= window && history[history.len() - 1] <= history[history.len() - window]
}

/// Indices ordered best first; ties keep the lower index first.
fn ranking(scores: &[i64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].cmp(&scores[a]).then(a.cmp(&b)));
    order
}

fn pick_parent(weights: &[u64], rng: &mut GaRng) -> usize {
    match roulette_select(weights, rng) {
        Ok(i) => i,
        Err(_) => rng.gen_range(0..weights.len()),
    }
}

/// Population snapshot handed to observers; generation 0 is the seeded population.
#[derive(Debug)]
pub struct GenerationView<'a, I> {
    pub generation: usize,
    pub population: &'a [I],
    pub scores: &'a [i64],
}

pub fn run_ga<P: GaProblem>(problem: &P, params: &SchedulingParams) -> Result<GaRunResult<P::Individual>, GaError> {
    run_ga_observed(problem, params, |_| {})
}

/// [`run_ga`] with a callback invoked on every population, initial one included.
pub fn run_ga_observed<P, F>(
    problem: &P,
    params: &SchedulingParams,
    mut observe: F,
) -> Result<GaRunResult<P::Individual>, GaError>
where
    P: GaProblem,
    F: FnMut(&GenerationView<'_, P::Individual>),
{
    let problems = params.problems();
    if !problems.is_empty() {
        return Err(GaError::InvalidParams(problems.join("; ")));
    }
    let mut rng = GaRng::seed_from_u64(params.seed);

    let mut population = Vec::with_capacity(params.population_size);
    for _ in 0..params.population_size {
        population.push(seed_feasible(problem, params.seeding_retries, &mut rng)?);
    }
    let mut scores: Vec<i64> = population.iter().map(|i| problem.raw_score(i)).collect();
    observe(&GenerationView { generation: 0, population: &population, scores: &scores });

    let top = ranking(&scores)[0];
    let mut best = population[top].clone();
    let mut best_score = scores[top];
    let initial_best = best_score;
    let mut history = Vec::new();

    while !should_terminate(&history, params) {
        let order = ranking(&scores);
        let weights = problem.selection_weights(&problem.fitness(&scores));

        let mut next: Vec<P::Individual> = order[..params.elite_count].iter().map(|&i| population[i].clone()).collect();

        while next.len() < params.population_size {
            let pa = pick_parent(&weights, &mut rng);
            let pb = pick_parent(&weights, &mut rng);
            let (c1, c2) = if rng.gen_bool(params.crossover_rate) {
                problem.crossover(&population[pa], &population[pb], &mut rng)
            } else {
                (population[pa].clone(), population[pb].clone())
            };
            for (child, parent) in [(c1, pa), (c2, pb)] {
                if next.len() == params.population_size {
                    break;
                }
                let child = if rng.gen_bool(params.mutation_rate) { problem.mutate(child, &mut rng) } else { child };
                let child = if problem.is_feasible(&child) {
                    child
                } else {
                    match problem.repair(child, &mut rng) {
                        Ok(fixed) if problem.is_feasible(&fixed) => fixed,
                        _ => population[parent].clone(),
                    }
                };
                next.push(child);
            }
        }

        population = next;
        scores = population.iter().map(|i| problem.raw_score(i)).collect();
        observe(&GenerationView { generation: history.len() + 1, population: &population, scores: &scores });
        let top = ranking(&scores)[0];
        if scores[top] > best_score {
            best_score = scores[top];
            best = population[top].clone();
        }
        history.push(scores[top]);
    }

    Ok(GaRunResult {
        best_individual: best,
        best_raw_score: best_score,
        initial_best_raw_score: initial_best,
        generations_run: history.len(),
        history,
    })
}

fn seed_feasible<P: GaProblem>(problem: &P, retries: usize, rng: &mut GaRng) -> Result<P::Individual, GaError> {
    for _ in 0..retries.max(1) {
        match problem.seed_individual(rng) {
            Ok(ind) if problem.is_feasible(&ind) => return Ok(ind),
            Ok(_) | Err(GaError::SeedingFailed { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GaError::SeedingFailed { attempts: retries.max(1) })
}

/// Seed used by restart `k`; restart 0 keeps the configured seed.
pub fn restart_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs `restarts` independent GAs (at least one) and keeps the best result;
/// ties go to the earliest run.
pub fn run_ga_with_restarts<P: GaProblem>(
    problem: &P,
    params: &SchedulingParams,
    restarts: usize,
) -> Result<GaRunResult<P::Individual>, GaError> {
    let mut best: Option<GaRunResult<P::Individual>> = None;
    for k in 0..restarts.max(1) {
        let run_params = SchedulingParams { seed: restart_seed(params.seed, k), ..params.clone() };
        let run = run_ga(problem, &run_params)?;
        if best.as_ref().is_none_or(|b| run.best_raw_score > b.best_raw_score) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one run"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maximize the number of ones in a 12-bit string.
    struct OneMax;

    impl GaProblem for OneMax {
        type Individual = Vec<bool>;
        type Fitness = u64;

        fn seed_individual(&self, rng: &mut GaRng) -> Result<Vec<bool>, GaError> {
            Ok((0..12).map(|_| rng.gen_bool(0.3)).collect())
        }
        fn raw_score(&self, ind: &Vec<bool>) -> i64 {
            ind.iter().filter(|&&b| b).count() as i64
        }
        fn fitness(&self, raw: &[i64]) -> Vec<u64> {
            let min = raw.iter().copied().min().unwrap_or(0);
            raw.iter().map(|r| (r - min) as u64).collect()
        }
        fn selection_weights(&self, fitness: &[u64]) -> Vec<u64> {
            fitness.to_vec()
        }
        fn crossover(&self, a: &Vec<bool>, b: &Vec<bool>, rng: &mut GaRng) -> (Vec<bool>, Vec<bool>) {
            let cut = rng.gen_range(0..a.len());
            let mut c1 = a[..cut].to_vec();
            c1.extend_from_slice(&b[cut..]);
            let mut c2 = b[..cut].to_vec();
            c2.extend_from_slice(&a[cut..]);
            (c1, c2)
        }
        fn mutate(&self, mut ind: Vec<bool>, rng: &mut GaRng) -> Vec<bool> {
            let i = rng.gen_range(0..ind.len());
            ind[i] = !ind[i];
            ind
        }
        fn repair(&self, ind: Vec<bool>, _rng: &mut GaRng) -> Result<Vec<bool>, GaError> {
            Ok(ind)
        }
        fn is_feasible(&self, _ind: &Vec<bool>) -> bool {
            true
        }
    }

    fn params(seed: u64) -> SchedulingParams {
        SchedulingParams { seed, mutation_rate: 0.3, ..SchedulingParams::default() }
    }

    #[test]
    fn single_weight_always_selected() {
        let mut rng = GaRng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(roulette_select(&[100], &mut rng), Ok(0));
        }
    }

    #[test]
    fn zero_weight_never_selected() {
        let weights = [11, 0, 5, 5, 3, 1, 22, 23, 15, 15];
        let mut rng = GaRng::seed_from_u64(9);
        for _ in 0..20_000 {
            assert_ne!(roulette_select(&weights, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn all_zero_weights_is_an_error() {
        let mut rng = GaRng::seed_from_u64(0);
        assert_eq!(roulette_select(&[0, 0], &mut rng), Err(GaError::AllZeroWeights));
        assert_eq!(roulette_select(&[], &mut rng), Err(GaError::AllZeroWeights));
    }

    #[test]
    fn even_weights_split_evenly() {
        let mut rng = GaRng::seed_from_u64(1234);
        let n = 100_000;
        let hits = (0..n).filter(|_| roulette_select(&[50, 50], &mut rng).unwrap() == 0).count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.01, "frequency {freq}");
    }

    #[test]
    fn selection_frequencies_pass_chi_square() {
        let weights = [11u64, 0, 5, 5, 3, 1, 22, 23, 15, 15];
        let total: u64 = weights.iter().sum();
        let n = 50_000usize;
        let mut counts = [0usize; 10];
        let mut rng = GaRng::seed_from_u64(77);
        for _ in 0..n {
            counts[roulette_select(&weights, &mut rng).unwrap()] += 1;
        }
        let chi2: f64 = weights
            .iter()
            .zip(counts)
            .filter(|(&w, _)| w > 0)
            .map(|(&w, c)| {
                let expected = n as f64 * w as f64 / total as f64;
                (c as f64 - expected).powi(2) / expected
            })
            .sum();
        // 8 degrees of freedom, 0.999 quantile
        assert!(chi2 < 26.12, "chi-square {chi2}");
    }

    #[test]
    fn termination_rules() {
        let p = SchedulingParams { max_generations: 100, stagnation_limit: 3, ..SchedulingParams::default() };
        assert!(should_terminate(&[5, 5, 5], &p));
        assert!(!should_terminate(&[5, 6, 7], &p));
        assert!(!should_terminate(&[5, 5], &p));
        let capped = SchedulingParams { max_generations: 3, stagnation_limit: 50, ..SchedulingParams::default() };
        assert!(should_terminate(&[1, 2, 3], &capped));
        let zero = SchedulingParams { max_generations: 0, ..SchedulingParams::default() };
        assert!(should_terminate(&[], &zero));
    }

    #[test]
    fn zero_generations_returns_initial_best() {
        let p = SchedulingParams { max_generations: 0, ..params(5) };
        let r = run_ga(&OneMax, &p).unwrap();
        assert_eq!(r.generations_run, 0);
        assert!(r.history.is_empty());
        assert_eq!(r.best_raw_score, r.initial_best_raw_score);
        assert_eq!(r.generations_to_best(), 0);
    }

    #[test]
    fn onemax_converges_and_history_is_monotone() {
        let r = run_ga(&OneMax, &params(42)).unwrap();
        assert_eq!(r.best_raw_score, 12);
        assert!(r.history.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(r.generations_run, r.history.len());
    }

    #[test]
    fn elites_survive_unmodified() {
        let p = SchedulingParams { mutation_rate: 1.0, ..params(11) };
        let mut previous: Option<(Vec<Vec<bool>>, Vec<i64>)> = None;
        let mut checked = 0;
        run_ga_observed(&OneMax, &p, |view| {
            assert_eq!(view.population.len(), p.population_size);
            if let Some((pop, scores)) = &previous {
                let elites: Vec<_> = ranking(scores)[..p.elite_count].iter().map(|&i| pop[i].clone()).collect();
                assert_eq!(&view.population[..p.elite_count], elites.as_slice());
                checked += 1;
            }
            previous = Some((view.population.to_vec(), view.scores.to_vec()));
        })
        .unwrap();
        assert!(checked > 0);
    }

    #[test]
    fn same_seed_same_result() {
        assert_eq!(run_ga(&OneMax, &params(42)).unwrap(), run_ga(&OneMax, &params(42)).unwrap());
    }

    #[test]
    fn invalid_params_rejected() {
        let p = SchedulingParams { elite_count: 10, ..params(1) };
        assert!(matches!(run_ga(&OneMax, &p), Err(GaError::InvalidParams(_))));
    }

    #[test]
    fn restarts_never_worse_than_first_run() {
        let p = SchedulingParams { max_generations: 3, ..params(8) };
        let single = run_ga(&OneMax, &p).unwrap();
        let multi = run_ga_with_restarts(&OneMax, &p, 4).unwrap();
        assert!(multi.best_raw_score >= single.best_raw_score);
        assert_eq!(restart_seed(8, 0), 8);
    }
}
