//! Instance directories: one CSV table per entity plus `params.toml`.
//!
//! ```text
//! departments.csv  code,name
//! courses.csv      code,name,credit,department_code,is_common,exam_minutes
//! students.csv     id,name,department_code
//! enrollments.csv  student_id,course_code,department_code
//! classrooms.csv   id,building,name,quota,supervisors
//! params.toml      SchedulingParams fields (optional; defaults apply)
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::instance::{validate_instance, ExamInstance, SchedulingParams, ValidationReport};

pub const DEPARTMENTS_FILE: &str = "departments.csv";
pub const COURSES_FILE: &str = "courses.csv";
pub const STUDENTS_FILE: &str = "students.csv";
pub const ENROLLMENTS_FILE: &str = "enrollments.csv";
pub const CLASSROOMS_FILE: &str = "classrooms.csv";
pub const PARAMS_FILE: &str = "params.toml";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}{}: {message}", path.display(), location(*line, *column))]
    Parse { path: PathBuf, line: Option<u64>, column: Option<usize>, message: String },
    #[error("invalid instance:\n{0}")]
    Validation(ValidationReport),
}

fn location(line: Option<u64>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(":{l}:{c}"),
        (Some(l), None) => format!(":{l}"),
        _ => String::new(),
    }
}

fn parse_error(path: &Path, err: csv::Error) -> LoadError {
    // Record index rather than the reader's line count, which stays at 1 for CRLF files.
    let line = err.position().map(|p| p.record() + 1);
    let (column, message) = match err.kind() {
        csv::ErrorKind::Deserialize { err: de, .. } => (de.field().map(|f| f as usize + 1), de.kind().to_string()),
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            (None, format!("expected {expected_len} fields, found {len}"))
        }
        _ => (None, err.to_string()),
    };
    LoadError::Parse { path: path.to_path_buf(), line, column, message }
}

fn read_table<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<Vec<T>, LoadError> {
    let path = dir.join(name);
    let file = fs::File::open(&path).map_err(|source| LoadError::Io { path: path.clone(), source })?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    reader.deserialize().collect::<Result<Vec<T>, _>>().map_err(|e| parse_error(&path, e))
}

pub fn read_params(path: &Path) -> Result<SchedulingParams, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.to_path_buf(), source })?;
    toml::from_str(&text).map_err(|e| {
        let line = e.span().map(|span| text[..span.start].bytes().filter(|&b| b == b'\n').count() as u64 + 1);
        LoadError::Parse { path: path.to_path_buf(), line, column: None, message: e.message().to_string() }
    })
}

/// Parses an instance directory without validating it.
pub fn read_instance(dir: &Path) -> Result<ExamInstance, LoadError> {
    let params_path = dir.join(PARAMS_FILE);
    let params = if params_path.exists() { read_params(&params_path)? } else { SchedulingParams::default() };
    Ok(ExamInstance {
        departments: read_table(dir, DEPARTMENTS_FILE)?,
        courses: read_table(dir, COURSES_FILE)?,
        students: read_table(dir, STUDENTS_FILE)?,
        enrollments: read_table(dir, ENROLLMENTS_FILE)?,
        classrooms: read_table(dir, CLASSROOMS_FILE)?,
        params,
    })
}

/// Parses and validates an instance directory.
pub fn load_instance(dir: &Path) -> Result<ExamInstance, LoadError> {
    let instance = read_instance(dir)?;
    let report = validate_instance(&instance);
    if report.is_valid() {
        Ok(instance)
    } else {
        Err(LoadError::Validation(report))
    }
}

fn write_table<T: Serialize>(dir: &Path, name: &str, header: &[&str], rows: &[T]) -> Result<(), LoadError> {
    let path = dir.join(name);
    let io_err = |source| LoadError::Io { path: path.clone(), source };
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    writer.write_record(header).map_err(|e| io_err(e.into()))?;
    for row in rows {
        writer.serialize(row).map_err(|e| io_err(e.into()))?;
    }
    let bytes = writer.into_inner().map_err(|e| io_err(e.into_error()))?;
    write_atomic(&path, &bytes).map_err(io_err)
}

/// Writes every table of `instance` into `dir`, creating it if needed.
pub fn write_instance(instance: &ExamInstance, dir: &Path) -> Result<(), LoadError> {
    fs::create_dir_all(dir).map_err(|source| LoadError::Io { path: dir.to_path_buf(), source })?;
    write_table(dir, DEPARTMENTS_FILE, &["code", "name"], &instance.departments)?;
    write_table(
        dir,
        COURSES_FILE,
        &["code", "name", "credit", "department_code", "is_common", "exam_minutes"],
        &instance.courses,
    )?;
    write_table(dir, STUDENTS_FILE, &["id", "name", "department_code"], &instance.students)?;
    write_table(dir, ENROLLMENTS_FILE, &["student_id", "course_code", "department_code"], &instance.enrollments)?;
    write_table(dir, CLASSROOMS_FILE, &["id", "building", "name", "quota", "supervisors"], &instance.classrooms)?;
    let params_path = dir.join(PARAMS_FILE);
    let text = toml::to_string(&instance.params).expect("params serialize to TOML");
    write_atomic(&params_path, text.as_bytes()).map_err(|source| LoadError::Io { path: params_path, source })
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
