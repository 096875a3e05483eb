//! Seeded synthetic instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::{Classroom, Course, Department, Enrollment, ExamInstance, SchedulingParams, Student};

/// Shape of a generated instance. The defaults resemble a three-department
/// faculty of ~130 students each with four shared first-year courses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorSpec {
    pub departments: usize,
    pub students_per_department: usize,
    pub courses_per_department: usize,
    /// Taken by every student of every department.
    pub common_courses: usize,
    /// Chance that a student takes each of their department's own courses.
    pub enrollment_probability: f64,
    /// Exam lengths to draw from, uniformly.
    pub exam_minutes: Vec<u32>,
    pub buildings: usize,
    pub amphitheaters: usize,
    pub amphitheater_quota: (u32, u32),
    pub amphitheater_supervisors: u32,
    pub classrooms: usize,
    pub classroom_quota: (u32, u32),
    pub classroom_supervisors: u32,
    pub params: SchedulingParams,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self {
            departments: 3,
            students_per_department: 130,
            courses_per_department: 5,
            common_courses: 4,
            enrollment_probability: 0.95,
            exam_minutes: vec![30],
            buildings: 3,
            amphitheaters: 3,
            amphitheater_quota: (100, 150),
            amphitheater_supervisors: 3,
            classrooms: 12,
            classroom_quota: (20, 60),
            classroom_supervisors: 1,
            params: SchedulingParams::default(),
        }
    }
}

impl GeneratorSpec {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, n) in [
            ("departments", self.departments),
            ("students_per_department", self.students_per_department),
            ("buildings", self.buildings),
            ("amphitheaters + classrooms", self.amphitheaters + self.classrooms),
            ("courses_per_department + common_courses", self.courses_per_department + self.common_courses),
        ] {
            if n == 0 {
                out.push(format!("{name} must be positive"));
            }
        }
        if !(0.0..=1.0).contains(&self.enrollment_probability) {
            out.push(format!("enrollment_probability {} is outside [0, 1]", self.enrollment_probability));
        }
        if self.exam_minutes.is_empty() || self.exam_minutes.contains(&0) {
            out.push("exam_minutes must be a non-empty list of positive lengths".to_string());
        }
        for (name, (lo, hi)) in
            [("amphitheater_quota", self.amphitheater_quota), ("classroom_quota", self.classroom_quota)]
        {
            if lo == 0 || lo > hi {
                out.push(format!("{name} ({lo}, {hi}) must satisfy 0 < low <= high"));
            }
        }
        out.extend(self.params.problems());
        out
    }
}

fn department_code(i: usize) -> String {
    let mut code = String::new();
    let mut n = i + 1;
    while n > 0 {
        n -= 1;
        code.insert(0, (b'A' + (n % 26) as u8) as char);
        n /= 26;
    }
    code
}

/// Deterministic in `(spec, seed)`. Course rows are listed department by
/// department, each department's common courses first.
pub fn generate_instance(spec: &GeneratorSpec, seed: u64) -> ExamInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let departments: Vec<Department> = (0..spec.departments)
        .map(|d| {
            let code = department_code(d);
            Department { name: format!("Department {code}"), code }
        })
        .collect();

    let common_minutes: Vec<u32> =
        (0..spec.common_courses).map(|_| *spec.exam_minutes.choose(&mut rng).unwrap_or(&30)).collect();
    let mut courses = Vec::new();
    for dept in &departments {
        for (c, &minutes) in common_minutes.iter().enumerate() {
            courses.push(Course {
                code: format!("COM-{}", 101 + c),
                name: format!("Common course {}", c + 1),
                credit: 2,
                department_code: dept.code.clone(),
                is_common: true,
                exam_minutes: minutes,
            });
        }
        for c in 0..spec.courses_per_department {
            courses.push(Course {
                code: format!("{}-{}", dept.code, 201 + c),
                name: format!("{} course {}", dept.name, c + 1),
                credit: rng.gen_range(2..=5),
                department_code: dept.code.clone(),
                is_common: false,
                exam_minutes: *spec.exam_minutes.choose(&mut rng).unwrap_or(&30),
            });
        }
    }

    let mut students = Vec::new();
    let mut enrollments = Vec::new();
    for dept in &departments {
        for s in 0..spec.students_per_department {
            let id = format!("{}{:04}", dept.code.to_lowercase(), s + 1);
            for c in 0..spec.common_courses {
                enrollments.push(Enrollment {
                    student_id: id.clone(),
                    course_code: format!("COM-{}", 101 + c),
                    department_code: dept.code.clone(),
                });
            }
            for c in 0..spec.courses_per_department {
                if rng.gen_bool(spec.enrollment_probability) {
                    enrollments.push(Enrollment {
                        student_id: id.clone(),
                        course_code: format!("{}-{}", dept.code, 201 + c),
                        department_code: dept.code.clone(),
                    });
                }
            }
            students.push(Student { name: format!("Student {id}"), id, department_code: dept.code.clone() });
        }
    }

    let mut classrooms = Vec::new();
    let kinds =
        std::iter::repeat_n((spec.amphitheater_quota, spec.amphitheater_supervisors, "Anfi"), spec.amphitheaters)
            .chain(std::iter::repeat_n((spec.classroom_quota, spec.classroom_supervisors, "Class"), spec.classrooms));
    for (i, ((lo, hi), supervisors, kind)) in kinds.enumerate() {
        let building = format!("Building_{}", rng.gen_range(1..=spec.buildings.max(1)));
        classrooms.push(Classroom {
            id: format!("S{}", i + 1),
            name: format!("{kind}_{}", i + 1),
            building,
            quota: rng.gen_range(lo..=hi.max(lo)),
            supervisors,
        });
    }

    ExamInstance { departments, courses, students, enrollments, classrooms, params: spec.params.clone() }
}
