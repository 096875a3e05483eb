//! Problem input: departments, courses, students, enrollments and classrooms,
//! plus the merged course list and enrollment index shared by both GA stages.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Department {
    pub code: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Course {
    pub code: String,
    pub name: String,
    /// Informational only; no algorithm reads it.
    pub credit: u32,
    pub department_code: String,
    pub is_common: bool,
    pub exam_minutes: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Student {
    pub id: String,
    pub name: String,
    pub department_code: String,
}

/// A student sitting a course as offered by `department_code`. For common
/// courses the offering department need not be the student's own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enrollment {
    pub student_id: String,
    pub course_code: String,
    pub department_code: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classroom {
    pub id: String,
    pub building: String,
    pub name: String,
    pub quota: u32,
    /// Invigilators required whenever the room is used.
    pub supervisors: u32,
}

/// GA and session configuration. Defaults match the reference setup:
/// population 10, crossover 0.7, mutation 0.05, two elites, 150 minute sessions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchedulingParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exam_name: Option<String>,
    pub max_session_minutes: u32,
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub elite_count: usize,
    pub max_generations: usize,
    pub stagnation_limit: usize,
    pub seed: u64,
    pub seeding_retries: usize,
}

impl Default for SchedulingParams {
    fn default() -> Self {
        Self {
            exam_name: None,
            max_session_minutes: 150,
            population_size: 10,
            crossover_rate: 0.7,
            mutation_rate: 0.05,
            elite_count: 2,
            max_generations: 200,
            stagnation_limit: 50,
            seed: 0,
            seeding_retries: 20,
        }
    }
}

impl SchedulingParams {
    /// Returns a description of every invalid field.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.max_session_minutes == 0 {
            out.push("max_session_minutes must be positive".to_string());
        }
        if self.population_size == 0 {
            out.push("population_size must be positive".to_string());
        }
        if self.elite_count >= self.population_size {
            out.push(format!(
                "elite_count {} must be smaller than population_size {}",
                self.elite_count, self.population_size
            ));
        }
        for (name, rate) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                out.push(format!("{name} {rate} is outside [0, 1]"));
            }
        }
        if self.stagnation_limit == 0 {
            out.push("stagnation_limit must be positive".to_string());
        }
        if self.seeding_retries == 0 {
            out.push("seeding_retries must be positive".to_string());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExamInstance {
    pub departments: Vec<Department>,
    pub courses: Vec<Course>,
    pub students: Vec<Student>,
    pub enrollments: Vec<Enrollment>,
    pub classrooms: Vec<Classroom>,
    pub params: SchedulingParams,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyCourseSet,
    EmptyIdentifier { entity: &'static str },
    DuplicateDepartment(String),
    DuplicateCourse { code: String, department: String },
    DuplicateStudent(String),
    DuplicateClassroom(String),
    UnknownDepartment { entity: &'static str, id: String, department: String },
    NonPositiveExamMinutes { code: String, department: String },
    ExamTooLong { code: String, department: String, minutes: u32, max: u32 },
    ConflictingCommonDuration { code: String },
    UnknownStudent { student_id: String },
    UnknownCourse { course_code: String, department: String },
    DuplicateEnrollment { student_id: String, course_code: String },
    ZeroQuota(String),
    ZeroSupervisors(String),
    InvalidParams(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyCourseSet => write!(f, "empty course set"),
            Violation::EmptyIdentifier { entity } => write!(f, "{entity} with empty identifier"),
            Violation::DuplicateDepartment(code) => write!(f, "duplicate department {code}"),
            Violation::DuplicateCourse { code, department } => {
                write!(f, "duplicate course {code} in department {department}")
            }
            Violation::DuplicateStudent(id) => write!(f, "duplicate student {id}"),
            Violation::DuplicateClassroom(id) => write!(f, "duplicate classroom {id}"),
            Violation::UnknownDepartment { entity, id, department } => {
                write!(f, "{entity} {id} references unknown department {department}")
            }
            Violation::NonPositiveExamMinutes { code, department } => {
                write!(f, "course {code} ({department}) has a zero-minute exam")
            }
            Violation::ExamTooLong { code, department, minutes, max } => {
                write!(f, "course {code} ({department}) exam of {minutes} min exceeds the {max} min session")
            }
            Violation::ConflictingCommonDuration { code } => {
                write!(f, "common course {code} has conflicting exam durations")
            }
            Violation::UnknownStudent { student_id } => {
                write!(f, "enrollment references unknown student {student_id}")
            }
            Violation::UnknownCourse { course_code, department } => {
                write!(f, "enrollment references unknown course {course_code} ({department})")
            }
            Violation::DuplicateEnrollment { student_id, course_code } => {
                write!(f, "student {student_id} enrolled twice in {course_code}")
            }
            Violation::ZeroQuota(id) => write!(f, "classroom {id} has zero quota"),
            Violation::ZeroSupervisors(id) => write!(f, "classroom {id} requires zero supervisors"),
            Violation::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("empty course set")]
    EmptyCourseSet,
    #[error("course {code} exam of {minutes} min exceeds the {max} min session")]
    CourseExceedsSession { code: String, minutes: u32, max: u32 },
    #[error("common course {code} has conflicting exam durations")]
    ConflictingDuration { code: String },
}

/// Collects every structural problem in `raw`. Violations are data; an
/// instance is valid iff the returned report is empty.
pub fn validate_instance(raw: &ExamInstance) -> ValidationReport {
    let mut v = Vec::new();
    let max = raw.params.max_session_minutes;

    for p in raw.params.problems() {
        v.push(Violation::InvalidParams(p));
    }

    let mut dept_codes = HashSet::new();
    for d in &raw.departments {
        if d.code.is_empty() {
            v.push(Violation::EmptyIdentifier { entity: "department" });
        } else if !dept_codes.insert(d.code.as_str()) {
            v.push(Violation::DuplicateDepartment(d.code.clone()));
        }
    }

    if raw.courses.is_empty() {
        v.push(Violation::EmptyCourseSet);
    }
    let mut course_keys = HashSet::new();
    let mut common_minutes: HashMap<&str, u32> = HashMap::new();
    let mut conflicting = BTreeSet::new();
    for c in &raw.courses {
        if c.code.is_empty() {
            v.push(Violation::EmptyIdentifier { entity: "course" });
            continue;
        }
        if !course_keys.insert((c.code.as_str(), c.department_code.as_str())) {
            v.push(Violation::DuplicateCourse { code: c.code.clone(), department: c.department_code.clone() });
        }
        if !dept_codes.contains(c.department_code.as_str()) {
            v.push(Violation::UnknownDepartment {
                entity: "course",
                id: c.code.clone(),
                department: c.department_code.clone(),
            });
        }
        if c.exam_minutes == 0 {
            v.push(Violation::NonPositiveExamMinutes { code: c.code.clone(), department: c.department_code.clone() });
        } else if c.exam_minutes > max {
            v.push(Violation::ExamTooLong {
                code: c.code.clone(),
                department: c.department_code.clone(),
                minutes: c.exam_minutes,
                max,
            });
        }
        if c.is_common {
            let seen = *common_minutes.entry(c.code.as_str()).or_insert(c.exam_minutes);
            if seen != c.exam_minutes {
                conflicting.insert(c.code.clone());
            }
        }
    }
    v.extend(conflicting.into_iter().map(|code| Violation::ConflictingCommonDuration { code }));

    let mut student_ids = HashSet::new();
    for s in &raw.students {
        if s.id.is_empty() {
            v.push(Violation::EmptyIdentifier { entity: "student" });
        } else if !student_ids.insert(s.id.as_str()) {
            v.push(Violation::DuplicateStudent(s.id.clone()));
        }
        if !dept_codes.contains(s.department_code.as_str()) {
            v.push(Violation::UnknownDepartment {
                entity: "student",
                id: s.id.clone(),
                department: s.department_code.clone(),
            });
        }
    }

    let common_codes: HashSet<&str> = raw.courses.iter().filter(|c| c.is_common).map(|c| c.code.as_str()).collect();
    let mut seen_enrollments = HashSet::new();
    for e in &raw.enrollments {
        if !student_ids.contains(e.student_id.as_str()) {
            v.push(Violation::UnknownStudent { student_id: e.student_id.clone() });
        }
        if !course_keys.contains(&(e.course_code.as_str(), e.department_code.as_str())) {
            v.push(Violation::UnknownCourse {
                course_code: e.course_code.clone(),
                department: e.department_code.clone(),
            });
            continue;
        }
        // Common offerings collapse to one exam, so the department drops out of the key.
        let dept = if common_codes.contains(e.course_code.as_str()) { "" } else { e.department_code.as_str() };
        if !seen_enrollments.insert((e.student_id.as_str(), e.course_code.as_str(), dept)) {
            v.push(Violation::DuplicateEnrollment {
                student_id: e.student_id.clone(),
                course_code: e.course_code.clone(),
            });
        }
    }

    let mut room_ids = HashSet::new();
    for r in &raw.classrooms {
        if r.id.is_empty() {
            v.push(Violation::EmptyIdentifier { entity: "classroom" });
        } else if !room_ids.insert(r.id.as_str()) {
            v.push(Violation::DuplicateClassroom(r.id.clone()));
        }
        if r.quota == 0 {
            v.push(Violation::ZeroQuota(r.id.clone()));
        }
        if r.supervisors == 0 {
            v.push(Violation::ZeroSupervisors(r.id.clone()));
        }
    }

    ValidationReport { violations: v }
}

/// Owner of a unified course: a single department, or every department
/// offering a common course.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CourseOwner {
    Department(String),
    Common,
}

impl CourseOwner {
    pub fn is_common(&self) -> bool {
        matches!(self, CourseOwner::Common)
    }
}

impl fmt::Display for CourseOwner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CourseOwner::Department(code) => f.write_str(code),
            CourseOwner::Common => f.write_str("COMMON"),
        }
    }
}

/// Index of a unified course in the list returned by [`unify_common_courses`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CourseId(pub usize);

impl CourseId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnifiedCourse {
    /// `D1`, `D2`, ... in output order.
    pub unified_id: String,
    pub course_code: String,
    pub credit: u32,
    pub exam_minutes: u32,
    pub owner: CourseOwner,
    pub enrolled_students: BTreeSet<String>,
}

/// Merges same-code common courses across departments into one exam.
///
/// Output follows first appearance in `instance.courses`, so a course file
/// listed department by department yields `D1..Dn` in that order.
pub fn unify_common_courses(instance: &ExamInstance) -> Result<Vec<UnifiedCourse>, InstanceError> {
    let mut out: Vec<UnifiedCourse> = Vec::new();
    let mut by_key: HashMap<(String, CourseOwner), usize> = HashMap::new();

    for c in &instance.courses {
        let owner = if c.is_common { CourseOwner::Common } else { CourseOwner::Department(c.department_code.clone()) };
        let key = (c.code.clone(), owner.clone());
        match by_key.get(&key) {
            Some(&i) => {
                if out[i].exam_minutes != c.exam_minutes {
                    return Err(InstanceError::ConflictingDuration { code: c.code.clone() });
                }
            }
            None => {
                by_key.insert(key, out.len());
                out.push(UnifiedCourse {
                    unified_id: String::new(),
                    course_code: c.code.clone(),
                    credit: c.credit,
                    exam_minutes: c.exam_minutes,
                    owner,
                    enrolled_students: BTreeSet::new(),
                });
            }
        }
    }

    let common: HashSet<&str> = instance.courses.iter().filter(|c| c.is_common).map(|c| c.code.as_str()).collect();
    for e in &instance.enrollments {
        let owner = if common.contains(e.course_code.as_str()) {
            CourseOwner::Common
        } else {
            CourseOwner::Department(e.department_code.clone())
        };
        if let Some(&i) = by_key.get(&(e.course_code.clone(), owner)) {
            out[i].enrolled_students.insert(e.student_id.clone());
        }
    }

    for (i, c) in out.iter_mut().enumerate() {
        c.unified_id = format!("D{}", i + 1);
    }
    Ok(out)
}

/// Number of sessions: total exam minutes divided by the session length, rounded up.
pub fn required_session_count(courses: &[UnifiedCourse], max_session_minutes: u32) -> Result<usize, InstanceError> {
    if courses.is_empty() {
        return Err(InstanceError::EmptyCourseSet);
    }
    if let Some(c) = courses.iter().find(|c| c.exam_minutes > max_session_minutes) {
        return Err(InstanceError::CourseExceedsSession {
            code: c.course_code.clone(),
            minutes: c.exam_minutes,
            max: max_session_minutes,
        });
    }
    let total: u64 = courses.iter().map(|c| u64::from(c.exam_minutes)).sum();
    Ok(total.div_ceil(u64::from(max_session_minutes)) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SessionStats {
    /// Students enrolled in every course of the session.
    pub common_students: usize,
    /// Distinct enrollees minus common students.
    pub different_students: usize,
    pub distinct_enrollees: usize,
    pub total_exam_minutes: u32,
}

impl SessionStats {
    /// `CS - DS`, the per-session summand of the stage-1 score.
    pub fn balance(&self) -> i64 {
        self.common_students as i64 - self.different_students as i64
    }
}

/// Bitset rosters over a dense student numbering, one per unified course.
#[derive(Debug, Clone)]
pub struct EnrollmentIndex {
    students: Vec<String>,
    rosters: Vec<FixedBitSet>,
    minutes: Vec<u32>,
}

impl EnrollmentIndex {
    pub fn new(courses: &[UnifiedCourse]) -> Self {
        let students: Vec<String> = courses
            .iter()
            .flat_map(|c| c.enrolled_students.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let position: HashMap<&str, usize> = students.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let rosters = courses
            .iter()
            .map(|c| {
                let mut bits = FixedBitSet::with_capacity(students.len());
                for s in &c.enrolled_students {
                    bits.insert(position[s.as_str()]);
                }
                bits
            })
            .collect();
        let minutes = courses.iter().map(|c| c.exam_minutes).collect();
        Self { students, rosters, minutes }
    }

    pub fn course_count(&self) -> usize {
        self.rosters.len()
    }

    pub fn student_count(&self) -> usize {
        self.students.len()
    }

    pub fn enrolled(&self, course: CourseId) -> usize {
        self.rosters[course.0].count_ones(..)
    }

    pub fn exam_minutes(&self, course: CourseId) -> u32 {
        self.minutes[course.0]
    }

    /// Common/different student counts for a set of courses. An empty
    /// session yields all zeros.
    pub fn session_stats(&self, session: &[CourseId]) -> SessionStats {
        let Some((first, rest)) = session.split_first() else {
            return SessionStats::default();
        };
        let mut all = self.rosters[first.0].clone();
        let mut any = self.rosters[first.0].clone();
        for c in rest {
            all.intersect_with(&self.rosters[c.0]);
            any.union_with(&self.rosters[c.0]);
        }
        let common = all.count_ones(..);
        let distinct = any.count_ones(..);
        SessionStats {
            common_students: common,
            different_students: distinct - common,
            distinct_enrollees: distinct,
            total_exam_minutes: session.iter().map(|c| self.minutes[c.0]).sum(),
        }
    }
}

/// Unified courses together with their enrollment index.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub courses: Vec<UnifiedCourse>,
    pub index: EnrollmentIndex,
}

impl Catalog {
    pub fn new(instance: &ExamInstance) -> Result<Self, InstanceError> {
        Ok(Self::from_courses(unify_common_courses(instance)?))
    }

    pub fn from_courses(courses: Vec<UnifiedCourse>) -> Self {
        let index = EnrollmentIndex::new(&courses);
        Self { courses, index }
    }

    pub fn session_count(&self, max_session_minutes: u32) -> Result<usize, InstanceError> {
        required_session_count(&self.courses, max_session_minutes)
    }

    /// Looks a course up by its `D<n>` label.
    pub fn course_by_label(&self, label: &str) -> Option<CourseId> {
        self.courses.iter().position(|c| c.unified_id == label).map(CourseId)
    }
}

/// Free-function form of [`EnrollmentIndex::session_stats`].
pub fn session_stats(session: &[CourseId], index: &EnrollmentIndex) -> SessionStats {
    index.session_stats(session)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn course(code: &str, dept: &str, common: bool, minutes: u32) -> Course {
        Course {
            code: code.into(),
            name: code.into(),
            credit: 2,
            department_code: dept.into(),
            is_common: common,
            exam_minutes: minutes,
        }
    }

    fn small_instance() -> ExamInstance {
        ExamInstance {
            departments: vec![
                Department { code: "A".into(), name: "Alpha".into() },
                Department { code: "B".into(), name: "Beta".into() },
            ],
            courses: vec![
                course("M", "A", true, 30),
                course("A1", "A", false, 30),
                course("M", "B", true, 30),
                course("B1", "B", false, 60),
            ],
            students: vec![
                Student { id: "s1".into(), name: "One".into(), department_code: "A".into() },
                Student { id: "s2".into(), name: "Two".into(), department_code: "B".into() },
            ],
            enrollments: vec![
                Enrollment { student_id: "s1".into(), course_code: "M".into(), department_code: "A".into() },
                Enrollment { student_id: "s1".into(), course_code: "A1".into(), department_code: "A".into() },
                Enrollment { student_id: "s2".into(), course_code: "M".into(), department_code: "B".into() },
                Enrollment { student_id: "s2".into(), course_code: "B1".into(), department_code: "B".into() },
            ],
            classrooms: vec![Classroom {
                id: "R1".into(),
                building: "X".into(),
                name: "Hall".into(),
                quota: 10,
                supervisors: 1,
            }],
            params: SchedulingParams::default(),
        }
    }

    #[test]
    fn small_instance_is_valid() {
        let report = validate_instance(&small_instance());
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn overlong_exam_is_one_violation() {
        let mut inst = small_instance();
        inst.courses[1].exam_minutes = 200;
        let report = validate_instance(&inst);
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(report.violations[0], Violation::ExamTooLong { minutes: 200, max: 150, .. }));
    }

    #[test]
    fn dangling_student_is_one_violation() {
        let mut inst = small_instance();
        inst.enrollments.push(Enrollment {
            student_id: "s999".into(),
            course_code: "A1".into(),
            department_code: "A".into(),
        });
        let report = validate_instance(&inst);
        assert_eq!(report.violations, vec![Violation::UnknownStudent { student_id: "s999".into() }]);
    }

    #[test]
    fn empty_course_set_reported() {
        let mut inst = small_instance();
        inst.courses.clear();
        inst.enrollments.clear();
        let report = validate_instance(&inst);
        assert!(report.violations.contains(&Violation::EmptyCourseSet));
    }

    #[test]
    fn duplicate_common_enrollment_across_departments() {
        let mut inst = small_instance();
        inst.enrollments.push(Enrollment {
            student_id: "s1".into(),
            course_code: "M".into(),
            department_code: "B".into(),
        });
        let report = validate_instance(&inst);
        assert_eq!(report.violations.len(), 1);
        assert!(matches!(report.violations[0], Violation::DuplicateEnrollment { .. }));
    }

    #[test]
    fn bad_params_are_violations() {
        let mut inst = small_instance();
        inst.params.elite_count = 10;
        inst.params.mutation_rate = 1.5;
        assert_eq!(validate_instance(&inst).violations.len(), 2);
    }

    #[test]
    fn unify_merges_common_courses() {
        let unified = unify_common_courses(&small_instance()).unwrap();
        let ids: Vec<_> = unified
            .iter()
            .map(|c| (c.unified_id.as_str(), c.course_code.as_str(), c.enrolled_students.len()))
            .collect();
        assert_eq!(ids, vec![("D1", "M", 2), ("D2", "A1", 1), ("D3", "B1", 1)]);
        assert!(unified[0].owner.is_common());
    }

    #[test]
    fn unify_without_common_courses_is_identity() {
        let mut inst = small_instance();
        for c in &mut inst.courses {
            c.is_common = false;
        }
        let unified = unify_common_courses(&inst).unwrap();
        assert_eq!(unified.len(), inst.courses.len());
        for (u, c) in unified.iter().zip(&inst.courses) {
            assert_eq!(u.course_code, c.code);
            assert_eq!(u.owner, CourseOwner::Department(c.department_code.clone()));
        }
    }

    #[test]
    fn unify_rejects_conflicting_durations() {
        let mut inst = small_instance();
        inst.courses[2].exam_minutes = 45;
        assert_eq!(unify_common_courses(&inst), Err(InstanceError::ConflictingDuration { code: "M".into() }));
        assert!(validate_instance(&inst)
            .violations
            .contains(&Violation::ConflictingCommonDuration { code: "M".into() }));
    }

    fn uniform(n: usize, minutes: u32) -> Vec<UnifiedCourse> {
        (0..n)
            .map(|i| UnifiedCourse {
                unified_id: format!("D{}", i + 1),
                course_code: format!("C{i}"),
                credit: 0,
                exam_minutes: minutes,
                owner: CourseOwner::Department("X".into()),
                enrolled_students: BTreeSet::new(),
            })
            .collect()
    }

    #[test]
    fn session_count_examples() {
        assert_eq!(required_session_count(&uniform(19, 30), 150), Ok(4));
        assert_eq!(required_session_count(&uniform(5, 30), 150), Ok(1));
        let mut courses = uniform(5, 30);
        courses[0].exam_minutes = 31;
        assert_eq!(required_session_count(&courses, 150), Ok(2));
        assert_eq!(required_session_count(&[], 150), Err(InstanceError::EmptyCourseSet));
        assert!(matches!(
            required_session_count(&uniform(1, 200), 150),
            Err(InstanceError::CourseExceedsSession { .. })
        ));
    }

    #[test]
    fn single_course_session_has_no_different_students() {
        let unified = unify_common_courses(&small_instance()).unwrap();
        let index = EnrollmentIndex::new(&unified);
        let stats = index.session_stats(&[CourseId(0)]);
        assert_eq!(stats.common_students, 2);
        assert_eq!(stats.different_students, 0);
        assert_eq!(stats.total_exam_minutes, 30);
        assert_eq!(index.session_stats(&[]), SessionStats::default());
    }

    #[test]
    fn mixed_session_counts() {
        let unified = unify_common_courses(&small_instance()).unwrap();
        let index = EnrollmentIndex::new(&unified);
        let stats = session_stats(&[CourseId(0), CourseId(1), CourseId(2)], &index);
        assert_eq!(stats.common_students, 0);
        assert_eq!(stats.distinct_enrollees, 2);
        assert_eq!(stats.different_students, 2);
        assert_eq!(stats.total_exam_minutes, 120);
    }
}
