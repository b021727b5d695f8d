//! Form rings `(R, Λ, *, ε)` with ε = ±1 central, and decidable membership
//! for Λ and for the matrix set Λ_n.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::Matrix;
use crate::report::{Check, Report};
use crate::rings::{Elem, Ring, RingKind, RingSpecJson};
use crate::sampling::{self, SampleConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaStrategy {
    /// Λ = R_ε = {x - x*ε}.
    Minimal,
    /// Λ = R^ε = {x : x = -x*ε}.
    Maximal,
    /// The smallest form parameter containing the listed elements.
    Generated(Vec<Elem>),
}

#[derive(Clone, Debug)]
pub struct FormRing {
    base: Ring,
    epsilon: i8,
    eps: Elem,
    strategy: LambdaStrategy,
    closure: Option<Arc<BTreeSet<Elem>>>,
}

impl PartialEq for FormRing {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.epsilon == other.epsilon && self.strategy == other.strategy
    }
}

impl Eq for FormRing {}

impl FormRing {
    /// In characteristic 2 the two signs coincide and ε is stored as +1.
    pub fn new(base: &Ring, epsilon: i8, strategy: LambdaStrategy) -> Result<Self> {
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::Spec(format!("epsilon must be +1 or -1, got {epsilon}")));
        }
        if !base.has_involution() {
            return Err(Error::NoInvolution);
        }
        let epsilon = if base.characteristic() == 2 { 1 } else { epsilon };
        let mut form = Self {
            base: base.clone(),
            epsilon,
            eps: base.from_int(epsilon as i64),
            strategy,
            closure: None,
        };
        if let LambdaStrategy::Generated(gens) = &form.strategy {
            for g in gens {
                base.check(g)?;
            }
            if base.is_finite() {
                form.closure = Some(Arc::new(form.generated_closure(gens)?));
            }
        }
        Ok(form)
    }

    pub fn symplectic(base: &Ring) -> Result<Self> {
        Self::new(base, -1, LambdaStrategy::Maximal)
    }

    pub fn orthogonal(base: &Ring) -> Result<Self> {
        Self::new(base, 1, LambdaStrategy::Minimal)
    }

    /// The same form over a larger ring (used when free rings gain generators).
    pub fn rebase(&self, base: &Ring) -> Result<Self> {
        Self::new(base, self.epsilon, self.strategy.clone())
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn eps(&self) -> &Elem {
        &self.eps
    }

    pub fn strategy(&self) -> &LambdaStrategy {
        &self.strategy
    }

    pub fn star(&self, x: &Elem) -> Result<Elem> {
        self.base.star(x)
    }

    /// `x - x*ε`, the generic element of R_ε.
    pub fn lower_of(&self, x: &Elem) -> Result<Elem> {
        let r = &self.base;
        Ok(r.sub(x, &r.mul(&r.star(x)?, &self.eps)))
    }

    /// Membership in R^ε: `x = -x*ε`.
    pub fn in_upper(&self, x: &Elem) -> Result<bool> {
        let r = &self.base;
        Ok(r.is_zero(&r.add(x, &r.mul(&r.star(x)?, &self.eps))))
    }

    /// Membership in R_ε, decided on the whole catalog.
    ///
    /// On the commutative rings R_ε = (1 - ε)R. On free and group rings the
    /// involution permutes the basis, and x lies in R_ε exactly when
    /// coef(w*) = -ε coef(w) for w* ≠ w and coef(w) ∈ (1 - ε)Z for w* = w.
    pub fn in_lower(&self, x: &Elem) -> Result<bool> {
        self.base.check(x)?;
        let e = self.epsilon;
        Ok(match (self.base.kind(), x) {
            (_, Elem::Int(v)) => {
                if e == 1 {
                    num_traits::Zero::is_zero(v)
                } else {
                    num_integer::Integer::is_even(v)
                }
            }
            (RingKind::Modular { m }, Elem::Residue(v)) => {
                if e == 1 {
                    *v == 0
                } else {
                    m % 2 == 1 || v % 2 == 0
                }
            }
            (_, Elem::Lin(map)) => map.iter().all(|(w, c)| {
                let ws = self.base.star_basis(w);
                if ws == *w {
                    if e == 1 {
                        false
                    } else {
                        num_integer::Integer::is_even(c)
                    }
                } else {
                    let partner = map.get(&ws).cloned().unwrap_or_default();
                    partner == -(c * e)
                }
            }),
            _ => return Err(Error::Foreign(format!("{x:?}"))),
        })
    }

    pub fn lambda_contains(&self, x: &Elem) -> Result<bool> {
        match &self.strategy {
            LambdaStrategy::Maximal => self.in_upper(x),
            LambdaStrategy::Minimal => self.in_lower(x),
            LambdaStrategy::Generated(_) => match &self.closure {
                Some(set) => {
                    self.base.check(x)?;
                    Ok(set.contains(x))
                }
                None => Err(Error::Undecidable(format!(
                    "generated form parameter over the infinite ring {}",
                    self.base
                ))),
            },
        }
    }

    /// Membership in Λ* = {a : a* ∈ Λ}.
    pub fn lambda_star_contains(&self, x: &Elem) -> Result<bool> {
        self.lambda_contains(&self.star(x)?)
    }

    /// Λ_n: `a_ij = -a_ji* ε` off the diagonal and `a_ii ∈ Λ`.
    pub fn lambda_n_contains(&self, m: &Matrix) -> Result<bool> {
        if !m.is_square() {
            return Err(Error::Dimension("Λ_n membership needs a square matrix".into()));
        }
        if *m.ring() != self.base {
            return Err(Error::DistinctRings);
        }
        let r = &self.base;
        let n = m.rows();
        for i in 0..n {
            for j in 0..n {
                let ok = if i == j {
                    self.lambda_contains(m.get(i, i))?
                } else {
                    let rhs = r.neg(&r.mul(&r.star(m.get(j, i))?, &self.eps));
                    *m.get(i, j) == rhs
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All elements of Λ, for finite base rings.
    pub fn lambda_elements(&self) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        for x in self.base.elements()? {
            if self.lambda_contains(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    pub fn lambda_star_elements(&self) -> Result<Vec<Elem>> {
        let mut out = Vec::new();
        for x in self.base.elements()? {
            if self.lambda_star_contains(&x)? {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Smallest additive subgroup containing R_ε and `gens` that is stable
    /// under `λ -> r*λr`, by exhaustive closure.
    fn generated_closure(&self, gens: &[Elem]) -> Result<BTreeSet<Elem>> {
        let r = &self.base;
        let all = r.elements()?;
        let mut seeds: Vec<Elem> = gens.to_vec();
        for x in &all {
            seeds.push(self.lower_of(x)?);
        }
        let mut set = BTreeSet::from([r.zero()]);
        loop {
            // additive span of the current seeds
            let mut frontier: Vec<Elem> = set.iter().cloned().collect();
            while let Some(s) = frontier.pop() {
                for g in &seeds {
                    let t = r.add(&s, g);
                    if set.insert(t.clone()) {
                        frontier.push(t);
                    }
                }
            }
            let mut grew = false;
            for l in set.iter() {
                for x in &all {
                    let c = r.mul(&r.mul(&r.star(x)?, l), x);
                    if !set.contains(&c) && !seeds.contains(&c) {
                        seeds.push(c);
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok(set);
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FormSpecJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("form spec: {e}"),
        })?;
        spec.build()
    }

    pub fn to_spec(&self) -> FormSpecJson {
        FormSpecJson {
            base: self.base.to_spec(),
            epsilon: Some(self.epsilon),
            lambda: match &self.strategy {
                LambdaStrategy::Minimal => LambdaJson::Named(LambdaName::Minimal),
                LambdaStrategy::Maximal => LambdaJson::Named(LambdaName::Maximal),
                LambdaStrategy::Generated(g) => LambdaJson::Generated {
                    generated: g.iter().map(|x| self.base.format(x)).collect(),
                },
            },
        }
    }
}

impl std::fmt::Display for FormRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let lambda = match &self.strategy {
            LambdaStrategy::Minimal => "minimal".to_string(),
            LambdaStrategy::Maximal => "maximal".to_string(),
            LambdaStrategy::Generated(g) => format!("generated by {} elements", g.len()),
        };
        write!(f, "({}, eps = {}, Lambda {lambda})", self.base, self.epsilon)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaName {
    Minimal,
    Maximal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaJson {
    Named(LambdaName),
    Generated { generated: Vec<String> },
}

/// `{"base": <ring>, "epsilon": -1, "lambda": "maximal" | "minimal" | {"generated": [...]}}`.
///
/// A missing epsilon defaults to the free ring's own sign, or -1 elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpecJson {
    pub base: RingSpecJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i8>,
    pub lambda: LambdaJson,
}

impl FormSpecJson {
    pub fn build(&self) -> Result<FormRing> {
        let base = self.base.build()?;
        let ring_eps = match base.kind() {
            RingKind::Free { epsilon, .. } => Some(*epsilon),
            _ => None,
        };
        let epsilon = match (self.epsilon, ring_eps) {
            (Some(e), Some(r)) if e != r => {
                return Err(Error::Spec(format!(
                    "form epsilon {e} disagrees with the free ring's epsilon {r}"
                )))
            }
            (Some(e), _) => e,
            (None, Some(r)) => r,
            (None, None) => -1,
        };
        let strategy = match &self.lambda {
            LambdaJson::Named(LambdaName::Minimal) => LambdaStrategy::Minimal,
            LambdaJson::Named(LambdaName::Maximal) => LambdaStrategy::Maximal,
            LambdaJson::Generated { generated } => LambdaStrategy::Generated(
                generated
                    .iter()
                    .map(|s| base.parse(s))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        FormRing::new(&base, epsilon, strategy)
    }
}

/// Checks the form ring axioms on exhausted (finite) or sampled elements.
/// Finite generation of Λ/R_ε is listed but never decided.
pub fn validate_form_ring(form: &FormRing, cfg: &SampleConfig) -> Result<Report> {
    let r = form.base();
    let xs = sampling::elements(r, cfg)?;
    let mut report = Report::new();

    let mut eps_sq = Check::new("form.eps_square");
    eps_sq.record(r.mul(form.eps(), form.eps()) == r.one(), || "eps^2 != 1".into());
    report.push(eps_sq);

    let mut dbl = Check::new("form.double_star");
    for x in &xs {
        let lhs = r.star(&r.star(x)?)?;
        let rhs = r.mul(&r.mul(form.eps(), x), &r.star(form.eps())?);
        dbl.record(lhs == rhs, || format!("x = {}", r.format(x)));
    }
    report.push(dbl);

    let decidable = form.lambda_contains(&r.zero()).is_ok();
    let mut lambda_members = Vec::new();
    if decidable {
        let mut lower = Check::new("form.lower_in_lambda");
        let mut upper = Check::new("form.lambda_in_upper");
        for x in &xs {
            let l = form.lower_of(x)?;
            lower.record(form.lambda_contains(&l)?, || format!("x - x*eps for x = {}", r.format(x)));
            lambda_members.push(l);
            if form.lambda_contains(x)? {
                upper.record(form.in_upper(x)?, || format!("{} in Lambda but not in R^eps", r.format(x)));
                lambda_members.push(x.clone());
            }
        }
        if let LambdaStrategy::Generated(gens) = form.strategy() {
            for g in gens {
                upper.record(form.in_upper(g)?, || format!("generator {} not in R^eps", r.format(g)));
            }
        }
        report.push(lower);
        report.push(upper);

        let mut conj = Check::new("form.conjugation");
        let mut add = Check::new("form.additive");
        for l in &lambda_members {
            for x in &xs {
                let c = r.mul(&r.mul(&r.star(x)?, l), x);
                conj.record(form.lambda_contains(&c)?, || {
                    format!("r*lr for l = {}, r = {}", r.format(l), r.format(x))
                });
            }
        }
        for a in lambda_members.iter().take(64) {
            for b in lambda_members.iter().take(64) {
                add.record(form.lambda_contains(&r.add(a, b))?, || {
                    format!("{} + {}", r.format(a), r.format(b))
                });
            }
        }
        report.push(conj);
        report.push(add);
    } else {
        for id in ["form.lower_in_lambda", "form.lambda_in_upper", "form.conjugation", "form.additive"] {
            report.push(Check::new(id).not_checked("Lambda membership is undecidable for this form"));
        }
    }
    report.push(Check::new("form.finite_generation").not_checked("finite generation of Lambda/R_eps is not decided"));
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Ring {
        Ring::integers()
    }

    #[test]
    fn symplectic_integers_have_lambda_everything() {
        let f = FormRing::symplectic(&z()).unwrap();
        for v in -5..=5 {
            assert!(f.lambda_contains(&z().from_int(v)).unwrap());
        }
    }

    #[test]
    fn orthogonal_integers_have_lambda_zero() {
        let f = FormRing::orthogonal(&z()).unwrap();
        assert!(f.lambda_contains(&z().zero()).unwrap());
        assert!(!f.lambda_contains(&z().one()).unwrap());
    }

    #[test]
    fn minimal_symplectic_is_even_integers() {
        let f = FormRing::new(&z(), -1, LambdaStrategy::Minimal).unwrap();
        assert!(f.lambda_contains(&z().from_int(4)).unwrap());
        assert!(!f.lambda_contains(&z().from_int(3)).unwrap());
    }

    #[test]
    fn lambda_n_predicate() {
        let f = FormRing::symplectic(&z()).unwrap();
        let zero = Matrix::zero(&z(), 3, 3);
        assert!(f.lambda_n_contains(&zero).unwrap());
        assert!(f.lambda_n_contains(&Matrix::unit(&z(), 2, 0, 0)).unwrap());
        assert!(!f.lambda_n_contains(&Matrix::unit(&z(), 2, 0, 1)).unwrap());
    }

    #[test]
    fn free_ring_minimal_membership_by_basis_orbits() {
        let r = Ring::free(&["x", "y"], true, -1).unwrap();
        let f = FormRing::new(&r, -1, LambdaStrategy::Minimal).unwrap();
        let p = |s: &str| r.parse(s).unwrap();
        assert!(f.lambda_contains(&p("x + x*")).unwrap());
        assert!(f.lambda_contains(&p("2·xx*")).unwrap());
        assert!(!f.lambda_contains(&p("xx*")).unwrap());
        assert!(!f.lambda_contains(&p("x")).unwrap());
        let max = FormRing::symplectic(&r).unwrap();
        assert!(max.lambda_contains(&p("xx*")).unwrap());
        let orth = FormRing::new(&r, 1, LambdaStrategy::Minimal).unwrap();
        assert!(orth.lambda_contains(&p("x - x*")).unwrap());
        assert!(!orth.lambda_contains(&p("x + x*")).unwrap());
    }

    #[test]
    fn generated_form_over_finite_ring() {
        let r = Ring::modular(4).unwrap();
        let f = FormRing::new(&r, -1, LambdaStrategy::Generated(vec![r.one()])).unwrap();
        assert_eq!(f.lambda_elements().unwrap().len(), 4);
        let g = FormRing::new(&r, -1, LambdaStrategy::Generated(vec![])).unwrap();
        let min = FormRing::new(&r, -1, LambdaStrategy::Minimal).unwrap();
        assert_eq!(g.lambda_elements().unwrap(), min.lambda_elements().unwrap());
        let inf = FormRing::new(&z(), -1, LambdaStrategy::Generated(vec![z().one()])).unwrap();
        assert!(matches!(inf.lambda_contains(&z().one()), Err(Error::Undecidable(_))));
    }

    #[test]
    fn characteristic_two_canonicalizes_epsilon() {
        let r = Ring::modular(2).unwrap();
        assert_eq!(FormRing::symplectic(&r).unwrap().epsilon(), 1);
    }

    #[test]
    fn json_forms() {
        let f = FormRing::from_json(r#"{"base":{"kind":"modular","m":3},"epsilon":-1,"lambda":"maximal"}"#)
            .unwrap();
        assert_eq!(f, FormRing::symplectic(&Ring::modular(3).unwrap()).unwrap());
        let g = FormRing::from_json(
            r#"{"base":{"kind":"modular","m":4},"lambda":{"generated":["1"]}}"#,
        )
        .unwrap();
        let back = serde_json::to_string(&g.to_spec()).unwrap();
        assert_eq!(FormRing::from_json(&back).unwrap(), g);
        assert!(FormRing::from_json(
            r#"{"base":{"kind":"free","gens":["x"],"involution":true,"epsilon":1},"epsilon":-1,"lambda":"minimal"}"#
        )
        .is_err());
        assert_eq!(
            FormRing::from_json(r#"{"base":{"kind":"free","gens":["x"]},"lambda":"minimal"}"#),
            Err(Error::NoInvolution)
        );
    }

    #[test]
    fn validation_reports() {
        let cfg = SampleConfig::default();
        let f = FormRing::symplectic(&Ring::modular(3).unwrap()).unwrap();
        let rep = validate_form_ring(&f, &cfg).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        let o = FormRing::new(&z(), 1, LambdaStrategy::Maximal).unwrap();
        assert!(validate_form_ring(&o, &cfg).unwrap().passed());
        let free = FormRing::symplectic(&Ring::free(&["x", "y"], true, -1).unwrap()).unwrap();
        let rep = validate_form_ring(&free, &cfg).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.get("form.finite_generation").unwrap().status, crate::report::Status::NotChecked);
    }

    #[test]
    fn bad_generator_is_reported() {
        // 1 is not in R^eps when eps = +1 over Z/3
        let r = Ring::modular(3).unwrap();
        let f = FormRing::new(&r, 1, LambdaStrategy::Generated(vec![r.one()])).unwrap();
        let rep = validate_form_ring(&f, &SampleConfig::default()).unwrap();
        assert_eq!(rep.get("form.lambda_in_upper").unwrap().status, crate::report::Status::Fail);
    }
}
