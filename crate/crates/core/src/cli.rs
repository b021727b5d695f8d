//! Suite dispatch behind the command line: parse ring and form specs, run
//! the requested suites and collect one sorted report.

use std::str::FromStr;
use std::time::Instant;

use serde_json::Value;

use crate::elementary::{
    self, verify_b, verify_ecom, verify_fuu_linear, verify_generation_identities, verify_normal_conjugation,
    verify_prop,
};
use crate::error::{Error, Result};
use crate::exactmat::{Matrix, MatrixJson};
use crate::finite::{
    self, check_lambda_sr, check_sr, k1_stabilization_check, ku1_stabilization_probe, normal_closure, verify_perfect,
    verify_normal_generation, FiniteGroupTable,
};
use crate::formring::{validate_form_ring, FormRing};
use crate::report::{Check, Report};
use crate::rings::Ring;
use crate::sampling::SampleConfig;
use crate::steinberg::verify_st_relations;
use crate::unitary::{verify_c, verify_embed, verify_fuu_unitary, verify_gamma_identities, verify_generators, verify_ucom};

/// Number of random generator products the unitary inverse check uses.
pub const INVERSE_PRODUCTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteId {
    Ecom,
    Prop,
    NormalConj,
    BIdentities,
    Generation,
    Fuu,
    St,
    Form,
    Rho,
    Ucom,
    FuuUnitary,
    Gamma,
    COrder,
    Embed,
    NormalGeneration,
}

impl SuiteId {
    pub const ELEMENTARY: [SuiteId; 7] = [
        SuiteId::Ecom,
        SuiteId::Prop,
        SuiteId::NormalConj,
        SuiteId::BIdentities,
        SuiteId::Generation,
        SuiteId::Fuu,
        SuiteId::St,
    ];

    pub const UNITARY: [SuiteId; 7] = [
        SuiteId::Form,
        SuiteId::Rho,
        SuiteId::Ucom,
        SuiteId::FuuUnitary,
        SuiteId::Gamma,
        SuiteId::COrder,
        SuiteId::Embed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Ecom => "ecom",
            SuiteId::Prop => "prop",
            SuiteId::NormalConj => "normal-conj",
            SuiteId::BIdentities => "b-identities",
            SuiteId::Generation => "generation",
            SuiteId::Fuu => "fuu",
            SuiteId::St => "st",
            SuiteId::Form => "form",
            SuiteId::Rho => "rho",
            SuiteId::Ucom => "ucom",
            SuiteId::FuuUnitary => "fuu-unitary",
            SuiteId::Gamma => "gamma",
            SuiteId::COrder => "c-order",
            SuiteId::Embed => "embed",
            SuiteId::NormalGeneration => "normal",
        }
    }

    pub fn needs_form(self) -> bool {
        SuiteId::UNITARY.contains(&self)
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ELEMENTARY
            .iter()
            .chain(&SuiteId::UNITARY)
            .chain(&[SuiteId::NormalGeneration])
            .find(|id| id.name() == s)
            .copied()
            .ok_or_else(|| Error::Spec(format!("unknown suite {s:?}")))
    }
}

/// Expands `all` and comma lists into distinct suites in canonical order.
/// `all` means every elementary suite, plus the unitary ones when a form is
/// given.
pub fn parse_suites(items: &[String], have_form: bool) -> Result<Vec<SuiteId>> {
    let mut out = Vec::new();
    for item in items.iter().flat_map(|s| s.split(',')).map(str::trim).filter(|s| !s.is_empty()) {
        if item == "all" {
            out.extend(SuiteId::ELEMENTARY);
            if have_form {
                out.extend(SuiteId::UNITARY);
            }
        } else {
            out.push(item.parse()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Which group the `closure` verb enumerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupChoice {
    Elementary,
    GeneralLinear,
    ElementaryUnitary,
    Signs,
    OrderThree,
}

impl FromStr for GroupChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "e" => GroupChoice::Elementary,
            "gl" => GroupChoice::GeneralLinear,
            "eu" => GroupChoice::ElementaryUnitary,
            "a" => GroupChoice::Signs,
            "b" => GroupChoice::OrderThree,
            _ => return Err(Error::Spec(format!("unknown group {s:?}; expected e, gl, eu, a or b"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    Verify(Vec<SuiteId>),
    Closure(GroupChoice),
    /// Normal closure in E_n(R) of the given matrix, or of e_12(1).
    NormalClosure(Option<Matrix>),
    Perfect,
    Sr(usize),
    LambdaSr(usize),
    K1,
    Ku1,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub task: Task,
    pub ring: Option<Ring>,
    pub form: Option<FormRing>,
    pub n: usize,
    pub sample: SampleConfig,
    pub cap: usize,
}

impl SuiteConfig {
    fn ring(&self) -> Result<&Ring> {
        match (&self.ring, &self.form) {
            (Some(r), _) => Ok(r),
            (None, Some(f)) => Ok(f.base()),
            (None, None) => Err(Error::Spec("this command needs --ring or --form".into())),
        }
    }

    fn form(&self) -> Result<&FormRing> {
        self.form
            .as_ref()
            .ok_or_else(|| Error::Spec("this command needs --form".into()))
    }

    fn context(&self) -> Vec<(&'static str, Value)> {
        let mut ctx = vec![
            ("n", Value::from(self.n as u64)),
            ("seed", Value::from(self.sample.seed)),
            ("trials", Value::from(self.sample.trials as u64)),
            ("cap", Value::from(self.cap as u64)),
            ("task", Value::from(self.task_name())),
        ];
        if let Some(r) = &self.ring {
            ctx.push(("ring", serde_json::to_value(r.to_spec()).expect("ring specs serialize")));
        }
        if let Some(f) = &self.form {
            ctx.push(("form", serde_json::to_value(f.to_spec()).expect("form specs serialize")));
        }
        ctx
    }

    fn task_name(&self) -> String {
        match &self.task {
            Task::Verify(s) => format!("verify {}", s.iter().map(|s| s.name()).collect::<Vec<_>>().join(",")),
            Task::Closure(_) => "closure".into(),
            Task::NormalClosure(_) => "normal-closure".into(),
            Task::Perfect => "perfect".into(),
            Task::Sr(m) => format!("sr {m}"),
            Task::LambdaSr(m) => format!("lambda-sr {m}"),
            Task::K1 => "k1".into(),
            Task::Ku1 => "ku1".into(),
        }
    }
}

/// Reads a JSON argument given inline or as `@path`.
pub fn load_spec(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Spec(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn parse_matrix(ring: &Ring, text: &str) -> Result<Matrix> {
    let json: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        pos: e.column(),
        msg: format!("matrix: {e}"),
    })?;
    Matrix::from_json(ring, &json)
}

fn run_one(cfg: &SuiteConfig, suite: SuiteId) -> Result<Report> {
    let (n, s, cap) = (cfg.n, &cfg.sample, cfg.cap);
    if suite.needs_form() {
        let f = cfg.form()?;
        return match suite {
            SuiteId::Form => validate_form_ring(f, s),
            SuiteId::Rho => verify_generators(f, n, s, INVERSE_PRODUCTS),
            SuiteId::Ucom => verify_ucom(f, n, s),
            SuiteId::FuuUnitary => verify_fuu_unitary(f, n, s),
            SuiteId::Gamma => verify_gamma_identities(f, n, s),
            SuiteId::COrder => verify_c(f, n, cap),
            _ => verify_embed(f, n, s),
        };
    }
    let r = cfg.ring()?;
    match suite {
        SuiteId::Ecom => verify_ecom(r, n, s),
        SuiteId::Prop => verify_prop(r, n, cap),
        SuiteId::NormalConj => verify_normal_conjugation(r, n, s),
        SuiteId::BIdentities => verify_b(r, n, cap),
        SuiteId::Generation => verify_generation_identities(r, n, s),
        SuiteId::Fuu => verify_fuu_linear(r, n, s),
        SuiteId::St => verify_st_relations(r, n, s),
        _ => verify_normal_generation(r, n, cap),
    }
}

fn stamp(mut rep: Report, start: Instant) -> Report {
    let ms = start.elapsed().as_secs_f64() * 1000.0;
    for c in &mut rep.checks {
        c.wall_ms = ms;
    }
    rep
}

fn table_check(id: &str, t: &FiniteGroupTable) -> Check {
    let c = Check::new(id).value("order", t.order() as u64);
    if t.is_complete() {
        let mut c = c;
        c.record(true, String::new);
        c
    } else {
        c.partial(format!("cap {} reached", t.cap()))
    }
}

fn closure_report(cfg: &SuiteConfig, choice: GroupChoice) -> Result<Report> {
    let n = cfg.n;
    let mut report = Report::new();
    let (ring, gens) = match choice {
        GroupChoice::Elementary => {
            let r = cfg.ring()?;
            (r.clone(), finite::elementary_generators(r, n)?)
        }
        GroupChoice::GeneralLinear => {
            let r = cfg.ring()?;
            (r.clone(), finite::general_linear_generators(r, n)?)
        }
        GroupChoice::ElementaryUnitary => {
            let f = cfg.form()?;
            (f.base().clone(), finite::elementary_unitary_generators(f, n)?)
        }
        GroupChoice::Signs => {
            let r = cfg.ring()?;
            let g = (1..n).map(|i| elementary::a_diag(r, n, i, i + 1)).collect::<Result<Vec<_>>>()?;
            (r.clone(), g)
        }
        GroupChoice::OrderThree => {
            let r = cfg.ring()?;
            let g = (1..=n / 2).map(|i| elementary::b_matrix(r, n, i)).collect::<Result<Vec<_>>>()?;
            (r.clone(), g)
        }
    };
    let dim = if choice == GroupChoice::ElementaryUnitary { 2 * n } else { n };
    let t = FiniteGroupTable::closure(&ring, dim, gens, cfg.cap)?;
    let mut c = table_check("closure.order", &t).value("generators", t.generators().len() as u64);
    if choice == GroupChoice::GeneralLinear && t.is_complete() {
        let formula = finite::gl_order_formula(ring.characteristic(), n);
        c = c.value("formula", formula.to_string());
        let ok = formula.to_string() == t.order().to_string();
        let mut c2 = Check::new("closure.formula");
        c2.record(ok, || format!("BFS {} against formula {formula}", t.order()));
        report.push(c2);
    }
    report.push(c);
    Ok(report)
}

fn normal_closure_report(cfg: &SuiteConfig, seed: Option<&Matrix>) -> Result<Report> {
    let (r, n) = (cfg.ring()?, cfg.n);
    let ambient = FiniteGroupTable::closure(r, n, finite::elementary_generators(r, n)?, cfg.cap)?;
    let mut report = Report::new();
    if !ambient.is_complete() {
        report.push(Check::new("closure.normal").partial(format!("cap {} reached", cfg.cap)));
        return Ok(report);
    }
    let g = match seed {
        None => elementary::e(r, n, 1, 2, &r.one())?,
        Some(m) => {
            let idx = (0..ambient.order())
                .find(|&k| ambient.element(k) == *m)
                .ok_or_else(|| Error::Spec("the seed matrix is not in E_n(R)".into()))?;
            ambient.group_element(idx)?
        }
    };
    let t = normal_closure(&[g], &ambient, cfg.cap)?;
    let mut c = table_check("closure.normal", &t).value("ambient", ambient.order() as u64);
    if t.is_complete() {
        c.record(t.is_normal_in(&ambient)?, || "not normalized by the ambient generators".into());
    }
    report.push(c);
    Ok(report)
}

fn perfect_report(cfg: &SuiteConfig) -> Result<Report> {
    let (r, n) = (cfg.ring()?, cfg.n);
    let t = FiniteGroupTable::closure(r, n, finite::elementary_generators(r, n)?, cfg.cap)?;
    let mut c = Check::new("perfect.e_n").value("order", t.order() as u64);
    if !t.is_complete() {
        c = c.partial(format!("cap {} reached", cfg.cap));
    } else {
        match verify_perfect(&t, cfg.cap) {
            Ok(p) => c.record(p, || "the commutator subgroup is proper".into()),
            Err(Error::Incomplete(cap)) => c = c.partial(format!("cap {cap} reached")),
            Err(e) => return Err(e),
        }
    }
    let mut report = Report::new();
    report.push(c);
    Ok(report)
}

fn sr_report(cfg: &SuiteConfig, m: usize) -> Result<Report> {
    let r = cfg.ring()?;
    let out = check_sr(r, m)?;
    let mut c = Check::new(format!("sr.m{m}")).value("vectors", out.vectors);
    c.record(out.holds, || format!("counterexample {:?}", out.counterexample.as_ref().map(|v| fmt_vec(r, v))));
    let mut report = Report::new();
    report.push(c);
    if out.holds {
        // sr_m implies sr_(m+1)
        let next = check_sr(r, m + 1)?;
        let mut mono = Check::new("sr.monotone").value("vectors", next.vectors);
        mono.record(next.holds, || format!("sr_{} fails", m + 1));
        report.push(mono);
    }
    Ok(report)
}

fn lambda_sr_report(cfg: &SuiteConfig, m: usize) -> Result<Report> {
    let f = cfg.form()?;
    let r = f.base();
    let out = check_lambda_sr(f, m)?;
    let mut c = Check::new(format!("lambda-sr.m{m}"))
        .value("vectors", out.vectors)
        .value("gammas", out.gammas as u64)
        .value("sr", out.sr.holds);
    c.record(out.holds(), || match &out.counterexample {
        Some((a, b)) => format!("a = {}, b = {}", fmt_vec(r, a), fmt_vec(r, b)),
        None => "sr fails".into(),
    });
    let mut report = Report::new();
    report.push(c);
    Ok(report)
}

fn fmt_vec(r: &Ring, v: &[crate::rings::Elem]) -> String {
    format!("({})", v.iter().map(|x| r.format(x)).collect::<Vec<_>>().join(", "))
}

/// Runs the configured task. Context is limited to configuration values so
/// that equal configurations give byte-identical reports.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    let start = Instant::now();
    let mut report = match &cfg.task {
        Task::Verify(suites) => {
            let mut rep = Report::new();
            for &s in suites {
                let t = Instant::now();
                rep.extend(stamp(run_one(cfg, s)?, t));
            }
            rep
        }
        Task::Closure(g) => stamp(closure_report(cfg, *g)?, start),
        Task::NormalClosure(m) => stamp(normal_closure_report(cfg, m.as_ref())?, start),
        Task::Perfect => stamp(perfect_report(cfg)?, start),
        Task::Sr(m) => stamp(sr_report(cfg, *m)?, start),
        Task::LambdaSr(m) => stamp(lambda_sr_report(cfg, *m)?, start),
        Task::K1 => stamp(k1_stabilization_check(cfg.ring()?, cfg.n, cfg.cap)?, start),
        Task::Ku1 => stamp(ku1_stabilization_probe(cfg.form()?, cfg.n, cfg.cap)?, start),
    };
    for (k, v) in cfg.context() {
        report.context.insert(k.to_string(), v);
    }
    Ok(report.finish())
}

/// Exit status for an error raised before or during a run.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Incomplete(_) => 3,
        _ => 2,
    }
}
