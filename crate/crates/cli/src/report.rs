use std::fmt;
use std::io::Write;
use std::time::{Duration, Instant};

use sqz_core::error::Result;
use sqz_core::table::format_number;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    /// A statement tested literally and recorded, not asserted.
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Warn => "warn",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    pub notes: String,
    /// Time spent on the evaluation this check came from.
    pub elapsed: Duration,
}

/// Ordered checks of one suite; the overall status is the worst member.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

/// Runs `f` and returns its value with the elapsed wall time.
pub fn timed<T>(f: impl FnOnce() -> Result<T>) -> (Result<T>, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), checks: Vec::new() }
    }

    pub fn status(&self) -> Status {
        self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: String, status: Status, residual: f64, tolerance: f64, notes: String, elapsed: Duration) {
        assert!(self.get(&name).is_none(), "duplicate check `{name}`");
        self.checks.push(CheckResult { name, status, residual, tolerance, notes, elapsed });
    }

    /// Passes iff `residual ≤ tolerance` (NaN fails).
    pub fn bound(&mut self, name: impl Into<String>, residual: f64, tolerance: f64, elapsed: Duration) {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        self.push(name.into(), status, residual, tolerance, String::new(), elapsed);
    }

    /// A literal statement whose failure is a documented outcome: warns when
    /// the residual is nonzero.
    pub fn recorded(&mut self, name: impl Into<String>, residual: f64, notes: impl Into<String>, elapsed: Duration) {
        let status = if residual == 0.0 { Status::Pass } else { Status::Warn };
        self.push(name.into(), status, residual, 0.0, notes.into(), elapsed);
    }

    /// A check whose evaluation itself failed.
    pub fn error(&mut self, name: impl Into<String>, err: impl fmt::Display, elapsed: Duration) {
        self.push(name.into(), Status::Fail, f64::NAN, 0.0, err.to_string(), elapsed);
    }

    /// Appends `other`'s checks with names prefixed by its suite name.
    pub fn absorb(&mut self, other: SuiteReport) {
        for c in other.checks {
            self.push(format!("{}/{}", other.suite, c.name), c.status, c.residual, c.tolerance, c.notes, c.elapsed);
        }
    }

    /// `name<TAB>status<TAB>residual<TAB>tolerance`, one line per check.
    pub fn write_tsv(&self, out: &mut impl Write) -> Result<()> {
        for c in &self.checks {
            writeln!(out, "{}\t{}\t{}\t{}", c.name, c.status, format_number(c.residual), format_number(c.tolerance))?;
        }
        Ok(())
    }

    pub fn write_text(&self, out: &mut impl Write) -> Result<()> {
        for c in &self.checks {
            write!(
                out,
                "{:<4}  {}  residual {} (tol {}, {:.1} ms)",
                c.status.to_string().to_uppercase(),
                c.name,
                format_number(c.residual),
                format_number(c.tolerance),
                c.elapsed.as_secs_f64() * 1e3
            )?;
            if !c.notes.is_empty() {
                write!(out, "  [{}]", c.notes)?;
            }
            writeln!(out)?;
        }
        writeln!(
            out,
            "{}: {} ({} pass, {} warn, {} fail)",
            self.suite,
            self.status().to_string().to_uppercase(),
            self.count(Status::Pass),
            self.count(Status::Warn),
            self.count(Status::Fail)
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_status_wins() {
        let mut r = SuiteReport::new("t");
        assert_eq!(r.status(), Status::Pass);
        r.bound("a", 1e-14, 1e-13, Duration::ZERO);
        r.recorded("b", 0.5, "literal form", Duration::ZERO);
        assert_eq!(r.status(), Status::Warn);
        r.bound("c", f64::NAN, 1.0, Duration::ZERO);
        assert_eq!(r.status(), Status::Fail);
        assert_eq!((r.count(Status::Pass), r.count(Status::Warn), r.count(Status::Fail)), (1, 1, 1));
    }

    #[test]
    fn tsv_lines() {
        let mut r = SuiteReport::new("t");
        r.bound("exact", 0.0, 0.0, Duration::from_millis(3));
        let mut all = SuiteReport::new("all");
        all.absorb(r);
        let mut buf = Vec::new();
        all.write_tsv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t/exact\tpass\t0\t0\n");
    }

    #[test]
    #[should_panic(expected = "duplicate")]
    fn names_are_unique() {
        let mut r = SuiteReport::new("t");
        r.bound("x", 0.0, 0.0, Duration::ZERO);
        r.bound("x", 0.0, 0.0, Duration::ZERO);
    }
}
