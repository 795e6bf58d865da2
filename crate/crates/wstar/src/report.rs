//! Structured check reports: named residuals with tolerances, rendered as a
//! text table or JSON.

use serde::Serialize;

/// The tolerance ladder. Construction residuals are tightest, derived
/// identities looser, and geometry/orthogonality verdicts loosest, since
/// error grows through eigendecompositions and subspace projections.
/// `scale` multiplies every rung.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { scale: 1.0 }
    }
}

impl Tolerances {
    pub fn scaled(scale: f64) -> Self {
        Self { scale }
    }

    pub fn construction(&self) -> f64 {
        1e-10 * self.scale
    }

    pub fn derived(&self) -> f64 {
        1e-9 * self.scale
    }

    pub fn geometry(&self) -> f64 {
        1e-8 * self.scale
    }

    pub fn probe_feasibility(&self) -> f64 {
        1e-7 * self.scale
    }

    pub fn exactness(&self) -> f64 {
        1e-10 * self.scale
    }
}

/// One named check with its residual and tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// A command report: checks, notes, and wall time.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub wall_ms: f64,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            checks: Vec::new(),
            notes: Vec::new(),
            wall_ms: 0.0,
        }
    }

    /// Pass iff residual ≤ tol.
    pub fn check_le(&mut self, name: impl Into<String>, residual: f64, tol: f64) -> &mut Self {
        let pass = residual <= tol;
        self.checks.push(Check {
            name: name.into(),
            residual,
            tol,
            pass,
        });
        self
    }

    /// A check whose pass flag is decided by the caller; the residual is
    /// reported for context.
    pub fn check_flag(
        &mut self,
        name: impl Into<String>,
        residual: f64,
        tol: f64,
        pass: bool,
    ) -> &mut Self {
        self.checks.push(Check {
            name: name.into(),
            residual,
            tol,
            pass,
        });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {}\n", self.command));
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(8)
            .max(8);
        for c in &self.checks {
            out.push_str(&format!(
                "  {:<width$}  residual {:>9.2e}  tol {:>8.1e}  [{}]\n",
                c.name,
                c.residual,
                c.tol,
                if c.pass { "PASS" } else { "FAIL" },
                width = width
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(&format!(
            "  {} checks, {} failed, {:.1} ms\n",
            self.checks.len(),
            self.checks.iter().filter(|c| !c.pass).count(),
            self.wall_ms
        ));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization")
    }
}

/// Runs a closure and records the wall time on the produced report.
pub fn timed<F: FnOnce() -> Report>(f: F) -> Report {
    let start = std::time::Instant::now();
    let mut report = f();
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    report
}
