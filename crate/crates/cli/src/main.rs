use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use central_exam::generate::{generate_instance, GeneratorSpec};
use central_exam::room_ga::{evolve_rooms, session_headcounts};
use central_exam::session_ga::evolve_sessions;
use central_exam::{
    load_instance, read_schedule, render_report, solve_with_restarts, write_instance, write_schedule, Catalog, GaError,
    LoadError, SchedulingParams, SolveError,
};
use clap::{Parser, Subcommand};

const SEED_ENV: &str = "CENTRAL_EXAM_SEED";

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

/// Two-stage genetic scheduler for centrally held exams.
#[derive(Parser)]
#[command(name = "central-exam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Default)]
struct Tuning {
    /// Random seed [default: $CENTRAL_EXAM_SEED, else the params file]
    #[arg(long, env = SEED_ENV)]
    seed: Option<u64>,
    #[arg(long)]
    population: Option<usize>,
    /// Maximum generations per stage
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    crossover_rate: Option<f64>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    /// Individuals copied unchanged into each generation
    #[arg(long)]
    elite: Option<usize>,
    #[arg(long)]
    max_session_minutes: Option<u32>,
}

impl Tuning {
    fn apply(&self, params: &mut SchedulingParams) {
        if let Some(v) = self.seed {
            params.seed = v;
        }
        if let Some(v) = self.population {
            params.population_size = v;
        }
        if let Some(v) = self.generations {
            params.max_generations = v;
        }
        if let Some(v) = self.crossover_rate {
            params.crossover_rate = v;
        }
        if let Some(v) = self.mutation_rate {
            params.mutation_rate = v;
        }
        if let Some(v) = self.elite {
            params.elite_count = v;
        }
        if let Some(v) = self.max_session_minutes {
            params.max_session_minutes = v;
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance directory and summarize it
    Validate { dir: PathBuf },
    /// Schedule sessions and rooms for an instance directory
    Solve {
        dir: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        /// Independent runs per stage; the best is kept
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        /// Write the schedule here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a schedule file as text tables
    Report { schedule: PathBuf },
    /// Generate a synthetic instance directory from a TOML spec
    Gen {
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generations needed to reach the final best, per population size
    Bench {
        dir: PathBuf,
        /// Comma-separated population sizes
        #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
        populations: Vec<usize>,
        /// Runs per population size
        #[arg(long, default_value_t = 5)]
        runs: u64,
        #[command(flatten)]
        tuning: Tuning,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Self { code, message: message.to_string() }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::new(EXIT_INVALID, e)
    }
}

impl From<GaError> for Failure {
    fn from(e: GaError) -> Self {
        let code = match e {
            GaError::InvalidParams(_) | GaError::Instance(_) => EXIT_INVALID,
            _ => EXIT_INFEASIBLE,
        };
        Failure::new(code, e)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Ga(g) => g.into(),
            other => Failure::new(EXIT_INVALID, other),
        }
    }
}

fn tuned_params(base: &SchedulingParams, tuning: &Tuning) -> Result<SchedulingParams, Failure> {
    let mut params = base.clone();
    tuning.apply(&mut params);
    let problems = params.problems();
    if problems.is_empty() {
        Ok(params)
    } else {
        Err(Failure::new(EXIT_USAGE, format!("invalid options: {}", problems.join("; "))))
    }
}

fn validate(dir: &Path) -> Result<(), Failure> {
    let inst = load_instance(dir)?;
    let catalog = Catalog::new(&inst).map_err(|e| Failure::new(EXIT_INVALID, e))?;
    let sessions = catalog.session_count(inst.params.max_session_minutes).map_err(|e| Failure::new(EXIT_INVALID, e))?;
    println!(
        "{}: {} departments, {} course rows ({} exams after merging), {} students, {} enrollments, {} classrooms; {} sessions of {} minutes",
        dir.display(),
        inst.departments.len(),
        inst.courses.len(),
        catalog.courses.len(),
        inst.students.len(),
        inst.enrollments.len(),
        inst.classrooms.len(),
        sessions,
        inst.params.max_session_minutes
    );
    Ok(())
}

fn solve(dir: &Path, tuning: &Tuning, restarts: usize, out: Option<&Path>) -> Result<(), Failure> {
    let mut inst = load_instance(dir)?;
    inst.params = tuned_params(&inst.params, tuning)?;
    if restarts == 0 {
        return Err(Failure::new(EXIT_USAGE, "--restarts must be at least 1"));
    }
    let solution = solve_with_restarts(&inst, restarts)?;
    let schedule = &solution.schedule;
    match out {
        Some(path) => {
            write_schedule(schedule, path).map_err(|e| Failure::new(EXIT_INVALID, e))?;
            eprintln!(
                "seed {}: {} sessions, score {} after {} generations, room cost {} after {} generations -> {}",
                schedule.seed,
                schedule.sessions.len(),
                schedule.stage1_raw_score,
                solution.sessions.generations_run,
                schedule.stage2_cost,
                solution.rooms.generations_run,
                path.display()
            );
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(schedule.to_json().as_bytes()).map_err(|e| Failure::new(EXIT_INVALID, e))?;
        }
    }
    Ok(())
}

fn report(path: &Path) -> Result<(), Failure> {
    let schedule = read_schedule(path).map_err(|e| Failure::new(EXIT_INVALID, e))?;
    print!("{}", render_report(&schedule));
    Ok(())
}

fn gen(spec_path: &Path, seed: u64, out: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(spec_path)
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", spec_path.display())))?;
    let spec: GeneratorSpec =
        toml::from_str(&text).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", spec_path.display())))?;
    let problems = spec.problems();
    if !problems.is_empty() {
        return Err(Failure::new(EXIT_INVALID, format!("{}: {}", spec_path.display(), problems.join("; "))));
    }
    write_instance(&generate_instance(&spec, seed), out)?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn bench(dir: &Path, populations: &[usize], runs: u64, tuning: &Tuning) -> Result<(), Failure> {
    let inst = load_instance(dir)?;
    let base = tuned_params(&inst.params, tuning)?;
    if runs == 0 || populations.is_empty() {
        return Err(Failure::new(EXIT_USAGE, "need at least one run and one population size"));
    }
    let catalog = Catalog::new(&inst).map_err(|e| Failure::new(EXIT_INVALID, e))?;
    println!(
        "{:>10} {:>5} {:>12} {:>10} {:>12} {:>10} {:>10}",
        "population", "runs", "stage1 best", "gens", "stage2 F", "gens", "ms/run"
    );
    for &population in populations {
        let params =
            tuned_params(&SchedulingParams { population_size: population, ..base.clone() }, &Tuning::default())?;
        let (mut best1, mut gens1, mut cost2, mut gens2) = (i64::MIN, 0usize, u64::MAX, 0usize);
        let start = Instant::now();
        for r in 0..runs {
            let p = SchedulingParams { seed: params.seed.wrapping_add(r), ..params.clone() };
            let sessions = evolve_sessions(&catalog, &p)?;
            let heads: Vec<u32> =
                session_headcounts(&sessions.best_individual, &catalog.index).iter().map(|h| h.students).collect();
            let rooms = evolve_rooms(&inst.classrooms, &heads, &p)?;
            best1 = best1.max(sessions.best_raw_score);
            cost2 = cost2.min(rooms.best_raw_score.unsigned_abs());
            gens1 += sessions.generations_to_best();
            gens2 += rooms.generations_to_best();
        }
        let ms = start.elapsed().as_secs_f64() * 1000.0 / runs as f64;
        let n = runs as f64;
        println!(
            "{:>10} {:>5} {:>12} {:>10.1} {:>12} {:>10.1} {:>10.1}",
            population,
            runs,
            best1,
            gens1 as f64 / n,
            cost2,
            gens2 as f64 / n,
            ms
        );
    }
    println!("gens: mean generations until the run's final best; ms/run is informational only");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { dir } => validate(&dir),
        Command::Solve { dir, tuning, restarts, out } => solve(&dir, &tuning, restarts, out.as_deref()),
        Command::Report { schedule } => report(&schedule),
        Command::Gen { spec, seed, out } => gen(&spec, seed, &out),
        Command::Bench { dir, populations, runs, tuning } => bench(&dir, &populations, runs, &tuning),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
