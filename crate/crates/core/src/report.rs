//! Machine-readable verification reports.
//!
//! A report is a list of checks sorted by id. Each check carries a citation
//! string drawn from [`citation`], a status, how many cases it covered, and the
//! first failing case when there is one. Wall times are recorded but only
//! serialized on request, so reports with the same seed are byte-identical.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Partial,
    NotChecked,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Partial => "partial",
            Status::NotChecked => "not checked",
        }
    }
}

/// Maps a check id to its citation. The first dotted segment selects the entry.
pub fn citation(id: &str) -> &'static str {
    let family = id.split('.').next().unwrap_or(id);
    match family {
        "ecom" => "commutator formulas for elementary matrices",
        "prop" => "sign matrices A_ij: elementary decomposition and the subgroup Z_2^(n-1)",
        "normal-conj" => "E_n(R, 2R) normality: e_12(2r) = e_12(r) A e_12(-r) A^-1",
        "b" => "order-3 matrices B_i and the regeneration commutators",
        "gen" => "generation of E_n(R) by e_(i,i+1)(x) and e_(n,1)(x)",
        "fuu" => "elementary matrices as commutators in nilpotent subgroups",
        "st" => "Steinberg relations St1-St3 under x_ij(r) -> e_ij(r)",
        "form" => "form ring axioms: eps = eps^-1, x** = eps x eps*, R_eps in Lambda in R^eps",
        "rho" => "elementary unitary generators and their a' cases",
        "uinv" => "block formula for the inverse of a unitary matrix",
        "ucom" => "commutator formulas for elementary unitary matrices",
        "fuu-unitary" => "short-root unitary generators as products of commutators",
        "gamma" => "generation of EU_2n(R, Lambda) by the subgroups Gamma_1..Gamma_(n+1)",
        "c" => "order-3 unitary matrices C_i",
        "embed" => "hyperbolic embedding A -> diag(A, (A*)^-1)",
        "closure" => "artifact plumbing: closure enumeration",
        "normal" => "normal generation inside a finite elementary group",
        "perfect" => "perfectness of E_n(R)",
        "sr" => "stable range condition sr_m",
        "lambda-sr" => "Lambda-stable range condition",
        "k1" => "K_1 stabilization: GL_n(R)/E_n(R) -> K_1(R)",
        "ku1" => "KU_1 stabilization: U_2n(R, Lambda)/EU_2n(R, Lambda) -> KU_1(R, Lambda)",
        _ => "artifact plumbing",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub citation: &'static str,
    pub status: Status,
    pub cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Value>,
    #[serde(skip)]
    pub wall_ms: f64,
}

impl Check {
    pub fn new(id: impl Into<String>) -> Self {
        let id = id.into();
        Self {
            citation: citation(&id),
            id,
            status: Status::Pass,
            cases: 0,
            witness: None,
            values: BTreeMap::new(),
            wall_ms: 0.0,
        }
    }

    /// Records one case; the first failure becomes the witness.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.status != Status::Fail {
            self.status = Status::Fail;
            self.witness = Some(witness());
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.cases += 1;
        if self.status != Status::Fail {
            self.status = Status::Fail;
            self.witness = Some(witness.into());
        }
    }

    pub fn partial(mut self, why: impl Into<String>) -> Self {
        if self.status != Status::Fail {
            self.status = Status::Partial;
            self.witness = Some(why.into());
        }
        self
    }

    pub fn not_checked(mut self, why: impl Into<String>) -> Self {
        self.status = Status::NotChecked;
        self.witness = Some(why.into());
        self
    }

    pub fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    pub fn set_value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.to_string(), v.into());
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Runs `f` and stores its wall time on the returned check.
pub fn timed(f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut c = f();
    c.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    c
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub context: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
struct TimedCheck<'a> {
    #[serde(flatten)]
    check: &'a Check,
    wall_ms: f64,
}

#[derive(Serialize)]
struct Rendered<'a> {
    status: Status,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    context: &'a BTreeMap<String, Value>,
    checks: Vec<TimedCheck<'a>>,
}

#[derive(Serialize)]
struct RenderedPlain<'a> {
    status: Status,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    context: &'a BTreeMap<String, Value>,
    checks: &'a [Check],
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Sorts checks by id; ties keep their insertion order.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    /// Fail dominates partial; not-checked entries are neutral.
    pub fn status(&self) -> Status {
        let mut out = Status::Pass;
        for c in &self.checks {
            match c.status {
                Status::Fail => return Status::Fail,
                Status::Partial => out = Status::Partial,
                _ => {}
            }
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Process exit code: 0 pass, 1 fail, 3 partial only.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Fail => 1,
            Status::Partial => 3,
            _ => 0,
        }
    }

    pub fn to_json(&self, timings: bool) -> String {
        let status = self.status();
        let text = if timings {
            serde_json::to_string_pretty(&Rendered {
                status,
                context: &self.context,
                checks: self
                    .checks
                    .iter()
                    .map(|check| TimedCheck {
                        check,
                        wall_ms: check.wall_ms,
                    })
                    .collect(),
            })
        } else {
            serde_json::to_string_pretty(&RenderedPlain {
                status,
                context: &self.context,
                checks: &self.checks,
            })
        };
        text.expect("report serializes") + "\n"
    }

    /// One line per check, for terminals.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<8} {:<36} {:>8} cases", c.status.as_str(), c.id, c.cases));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  [{w}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!("overall: {}\n", self.status().as_str()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_aggregation() {
        let mut r = Report::new();
        assert_eq!(r.exit_code(), 0);
        r.push(Check::new("sr.m1").not_checked("skipped"));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::new("k1.index").partial("cap"));
        assert_eq!(r.exit_code(), 3);
        let mut bad = Check::new("ecom.2");
        bad.record(true, String::new);
        bad.record(false, || "first".into());
        bad.record(false, || "second".into());
        assert_eq!(bad.witness.as_deref(), Some("first"));
        assert_eq!(bad.cases, 3);
        r.push(bad);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn json_is_sorted_and_untimed_by_default() {
        let mut r = Report::new();
        r.push(timed(|| Check::new("st.2")));
        r.push(Check::new("ecom.1"));
        let r = r.finish();
        let json = r.to_json(false);
        assert!(json.find("ecom.1").unwrap() < json.find("st.2").unwrap());
        assert!(!json.contains("wall_ms"));
        assert!(r.to_json(true).contains("wall_ms"));
    }

    #[test]
    fn every_family_has_a_citation() {
        for id in ["ecom.1", "ucom.4.ij_le_n", "k1.index", "misc"] {
            assert!(!citation(id).is_empty());
        }
    }
}
