//! Elementary unitary matrices ρ_ij(a) over a form ring, the membership test
//! for U_2n(R, Λ), the block inverse formula, and the unitary identity suites.
//!
//! Indices run over 1..=2n and pair up under σk = k ± n.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use crate::elementary::{self, nilpotency_class, Family};
use crate::error::{Error, Result};
use crate::exactmat::{block_diag, commutator, GroupElement, Matrix};
use crate::finite::FiniteGroupTable;
use crate::formring::{FormRing, LambdaStrategy};
use crate::report::{Check, Report};
use crate::rings::{Elem, Ring, RingKind};
use crate::sampling::{form_plan, random_element, Mode, Plan, SampleConfig, Slot};
use crate::word::{Letter, Word};

pub fn sigma(k: usize, n: usize) -> Result<usize> {
    match k {
        _ if k == 0 || k > 2 * n => Err(Error::Index(format!("sigma({k}) with n = {n}"))),
        _ if k <= n => Ok(k + n),
        _ => Ok(k - n),
    }
}

fn sig(k: usize, n: usize) -> usize {
    if k <= n {
        k + n
    } else {
        k - n
    }
}

/// Which of the four a' formulas applies to the long root (i, j).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeCase {
    BothLow,
    LowHigh,
    HighLow,
    BothHigh,
}

impl PrimeCase {
    pub fn of(i: usize, j: usize, n: usize) -> Self {
        match (i <= n, j <= n) {
            (true, true) => PrimeCase::BothLow,
            (true, false) => PrimeCase::LowHigh,
            (false, true) => PrimeCase::HighLow,
            (false, false) => PrimeCase::BothHigh,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            PrimeCase::BothLow => "ij_le_n",
            PrimeCase::LowHigh => "i_le_n_lt_j",
            PrimeCase::HighLow => "j_le_n_lt_i",
            PrimeCase::BothHigh => "ij_gt_n",
        }
    }
}

/// `a'`: a* when i, j ≤ n; ε*a* when i ≤ n < j; a*ε when j ≤ n < i;
/// ε*a*ε when both exceed n.
pub fn prime(form: &FormRing, n: usize, i: usize, j: usize, a: &Elem) -> Result<Elem> {
    let r = form.base();
    let a_star = r.star(a)?;
    let eps = form.eps();
    let eps_star = r.star(eps)?;
    Ok(match PrimeCase::of(i, j, n) {
        PrimeCase::BothLow => a_star,
        PrimeCase::LowHigh => r.mul(&eps_star, &a_star),
        PrimeCase::HighLow => r.mul(&a_star, eps),
        PrimeCase::BothHigh => r.mul(&r.mul(&eps_star, &a_star), eps),
    })
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > 2 * n || j > 2 * n {
        return Err(Error::Index(format!("rho_({i},{j}) with n = {n}")));
    }
    Ok(())
}

/// The short-root condition: a* ∈ Λ when i ≤ n, a ∈ Λ when i > n.
pub fn short_allowed(form: &FormRing, n: usize, i: usize, a: &Elem) -> Result<bool> {
    if i <= n {
        form.lambda_star_contains(a)
    } else {
        form.lambda_contains(a)
    }
}

/// ρ_(i,σi)(a) = I + aE_(i,σi), or ρ_ij(a) = I + aE_ij - a'E_(σj,σi) for j ≠ σi.
pub fn rho(form: &FormRing, n: usize, i: usize, j: usize, a: &Elem) -> Result<GroupElement> {
    check_pair(n, i, j)?;
    let r = form.base();
    r.check(a)?;
    let id = Matrix::identity(r, 2 * n);
    let (mut value, mut inverse) = (id.clone(), id);
    if j == sig(i, n) {
        if !short_allowed(form, n, i, a)? {
            let side = if i <= n { "a* in Lambda" } else { "a in Lambda" };
            return Err(Error::LambdaViolation(format!(
                "rho_({i},{j})({}) needs {side}",
                r.format(a)
            )));
        }
        value.set(i - 1, j - 1, a.clone());
        inverse.set(i - 1, j - 1, r.neg(a));
    } else {
        let ap = prime(form, n, i, j, a)?;
        let (si, sj) = (sig(i, n), sig(j, n));
        value.set(i - 1, j - 1, a.clone());
        value.set(sj - 1, si - 1, r.neg(&ap));
        inverse.set(i - 1, j - 1, r.neg(a));
        inverse.set(sj - 1, si - 1, ap);
    }
    Ok(GroupElement::from_formula(value, inverse))
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryLetter {
    pub i: usize,
    pub j: usize,
    pub a: Elem,
}

#[derive(Clone, Debug)]
pub struct UnitaryCtx {
    pub form: FormRing,
    pub n: usize,
}

impl Letter for UnitaryLetter {
    type Ctx = UnitaryCtx;

    fn eval(&self, ctx: &UnitaryCtx) -> Result<GroupElement> {
        rho(&ctx.form, ctx.n, self.i, self.j, &self.a)
    }

    fn identity(ctx: &UnitaryCtx) -> GroupElement {
        GroupElement::identity(ctx.form.base(), 2 * ctx.n)
    }

    fn is_trivial(&self) -> bool {
        match &self.a {
            Elem::Int(v) => num_traits::Zero::is_zero(v),
            Elem::Residue(v) => *v == 0,
            Elem::Lin(m) => m.is_empty(),
        }
    }
}

impl fmt::Display for UnitaryLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rho{},{}({:?})", self.i, self.j, self.a)
    }
}

pub type UnitaryWord = Word<UnitaryLetter>;

/// The quadrants (α β; γ δ) of a 2n x 2n matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryBlockView {
    pub alpha: Matrix,
    pub beta: Matrix,
    pub gamma: Matrix,
    pub delta: Matrix,
}

impl UnitaryBlockView {
    pub fn of(m: &Matrix) -> Result<Self> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(Error::Dimension(format!("{}x{} is not 2n x 2n", m.rows(), m.cols())));
        }
        let n = m.rows() / 2;
        Ok(Self {
            alpha: m.block(0, 0, n, n),
            beta: m.block(0, n, n, n),
            gamma: m.block(n, 0, n, n),
            delta: m.block(n, n, n, n),
        })
    }

    pub fn assemble(&self) -> Matrix {
        let n = self.alpha.rows();
        let mut m = Matrix::zero(self.alpha.ring(), 2 * n, 2 * n);
        m.paste(0, 0, &self.alpha);
        m.paste(0, n, &self.beta);
        m.paste(n, 0, &self.gamma);
        m.paste(n, n, &self.delta);
        m
    }
}

/// φ_n = (0 I; εI 0).
pub fn phi(form: &FormRing, n: usize) -> Matrix {
    let r = form.base();
    let mut m = Matrix::zero(r, 2 * n, 2 * n);
    for k in 0..n {
        m.set(k, n + k, r.one());
        m.set(n + k, k, form.eps().clone());
    }
    m
}

/// α*δ + γ*εβ = I with α*γ and β*δ in Λ_n.
pub fn unitary_membership(form: &FormRing, m: &Matrix) -> Result<bool> {
    if *m.ring() != *form.base() {
        return Err(Error::DistinctRings);
    }
    let q = UnitaryBlockView::of(m)?;
    let (a_s, g_s) = (q.alpha.star()?, q.gamma.star()?);
    let lhs = a_s.mul(&q.delta)?.add(&g_s.mul(&q.beta.scale(form.eps()))?)?;
    if !lhs.is_identity() {
        return Ok(false);
    }
    Ok(form.lambda_n_contains(&a_s.mul(&q.gamma)?)? && form.lambda_n_contains(&q.beta.star()?.mul(&q.delta)?)?)
}

/// The inverse (ε*δ*ε  ε*β*; γ*ε  α*), checked on both sides.
pub fn unitary_inverse(form: &FormRing, m: &Matrix) -> Result<GroupElement> {
    if !unitary_membership(form, m)? {
        return Err(Error::NotUnitary);
    }
    let r = form.base();
    let q = UnitaryBlockView::of(m)?;
    let eps = form.eps();
    let eps_star = r.star(eps)?;
    let right_eps = |x: &Matrix| -> Result<Matrix> { x.mul(&Matrix::identity(r, x.cols()).scale(eps)) };
    let inv = UnitaryBlockView {
        alpha: right_eps(&q.delta.star()?.scale(&eps_star))?,
        beta: q.beta.star()?.scale(&eps_star),
        gamma: right_eps(&q.gamma.star()?)?,
        delta: q.alpha.star()?,
    };
    GroupElement::new(m.clone(), inv.assemble())
}

/// A ↦ diag(A, (A*)^-1), using the inverse A carries.
pub fn hyperbolic_embed(form: &FormRing, a: &GroupElement) -> Result<GroupElement> {
    if *a.ring() != *form.base() {
        return Err(Error::DistinctRings);
    }
    let bottom = GroupElement::new(a.inverse_matrix().star()?, a.value().star()?)?;
    block_diag(a, &bottom)
}

/// `C_i = ρ_(i,n+i)(1) ρ_(n+i,i)(-1) ρ_(i,n+i)(1) ρ_(n+i,i)(-1)`; needs 1 ∈ Λ.
pub fn c_matrix(form: &FormRing, n: usize, i: usize) -> Result<GroupElement> {
    let r = form.base();
    if !form.lambda_contains(&r.one())? {
        return Err(Error::LambdaViolation("C_i needs 1 in Lambda".into()));
    }
    if i == 0 || i > n {
        return Err(Error::Index(format!("C_{i} with n = {n}")));
    }
    let x = rho(form, n, i, n + i, &r.one())?.mul(&rho(form, n, n + i, i, &r.from_int(-1))?)?;
    x.mul(&x)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Symbolic => "symbolic",
        Mode::Exhaustive => "exhaustive",
        Mode::Random => "random",
    }
}

fn params(ring: &Ring, names: &[&str], case: &[Elem]) -> String {
    names
        .iter()
        .zip(case)
        .map(|(n, v)| format!("{n} = {}", ring.format(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Records an identity outcome; a generator that the form parameter refuses
/// counts as a failure of the identity, not as an error.
fn outcome(check: &mut Check, res: Result<bool>, witness: impl FnOnce() -> String) -> Result<()> {
    match res {
        Ok(ok) => {
            check.record(ok, witness);
            Ok(())
        }
        Err(Error::LambdaViolation(msg)) => {
            check.fail(format!("{}: {msg}", witness()));
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn plan_form(plan: &Plan) -> &FormRing {
    plan.form.as_ref().expect("form plans carry a form")
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::Dimension(format!("needs n >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

fn long_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=2 * n).flat_map(move |i| (1..=2 * n).filter(move |&j| j != i && j != sig(i, n)).map(move |j| (i, j)))
}

fn short_slot(n: usize, i: usize) -> Slot {
    if i <= n {
        Slot::LambdaStar
    } else {
        Slot::Lambda
    }
}

/// The four commutator families for elementary unitary matrices, split by
/// case branch.
pub fn verify_ucom(form: &FormRing, n: usize, cfg: &SampleConfig) -> Result<Report> {
    check_n(n, 3)?;
    let mut report = Report::new();
    let any = form_plan(form, &[Slot::Any, Slot::Any], cfg)?;
    let low = form_plan(form, &[Slot::LambdaStar, Slot::LambdaStar], cfg)?;
    let high = form_plan(form, &[Slot::Lambda, Slot::Lambda], cfg)?;
    let b_low = form_plan(form, &[Slot::Any, Slot::LambdaStar], cfg)?;
    let b_high = form_plan(form, &[Slot::Any, Slot::Lambda], cfg)?;
    let names = ["a", "b"];

    // (1) additivity
    let mut add_long = Check::new("ucom.1.long");
    let mut add_short = Check::new("ucom.1.short");
    {
        let f = plan_form(&any);
        let r = f.base();
        for case in &any.cases {
            let (a, b) = (&case[0], &case[1]);
            for (i, j) in long_pairs(n) {
                let res = (|| {
                    Ok(rho(f, n, i, j, a)?.mul(&rho(f, n, i, j, b)?)?.value()
                        == rho(f, n, i, j, &r.add(a, b))?.value())
                })();
                outcome(&mut add_long, res, || format!("({i}, {j}), {}", params(r, &names, case)))?;
            }
        }
        for i in 1..=2 * n {
            let plan = if i <= n { &low } else { &high };
            let f = plan_form(plan);
            let r = f.base();
            let j = sig(i, n);
            for case in &plan.cases {
                let (a, b) = (&case[0], &case[1]);
                let res = (|| {
                    Ok(rho(f, n, i, j, a)?.mul(&rho(f, n, i, j, b)?)?.value()
                        == rho(f, n, i, j, &r.add(a, b))?.value())
                })();
                outcome(&mut add_short, res, || format!("({i}, {j}), {}", params(r, &names, case)))?;
            }
        }
    }

    // (2) and (3)
    let mut c2 = Check::new("ucom.2");
    let mut c3_low = Check::new("ucom.3.i_le_n");
    let mut c3_high = Check::new("ucom.3.i_gt_n");
    {
        let f = plan_form(&any);
        let r = f.base();
        let eps = f.eps();
        let eps_star = r.star(eps)?;
        for case in &any.cases {
            let (a, b) = (&case[0], &case[1]);
            let ab = r.mul(a, b);
            for (i, j) in long_pairs(n) {
                for k in 1..=2 * n {
                    let idx = [i, j, k, sig(i, n), sig(j, n), sig(k, n)];
                    let distinct = (0..6).all(|p| (p + 1..6).all(|q| idx[p] != idx[q]));
                    if !distinct {
                        continue;
                    }
                    let res = (|| Ok(commutator(&rho(f, n, i, j, a)?, &rho(f, n, j, k, b)?)?.value() == rho(f, n, i, k, &ab)?.value()))();
                    outcome(&mut c2, res, || format!("({i}, {j}, {k}), {}", params(r, &names, case)))?;
                }
                let si = sig(i, n);
                let (b_s, a_s) = (r.star(b)?, r.star(a)?);
                let c = if i > n {
                    r.mul(&r.mul(&b_s, &a_s), eps)
                } else {
                    r.mul(&r.mul(&eps_star, &b_s), &a_s)
                };
                let res = (|| {
                    Ok(commutator(&rho(f, n, i, j, a)?, &rho(f, n, j, si, b)?)?.value()
                        == rho(f, n, i, si, &r.sub(&ab, &c))?.value())
                })();
                let target = if i <= n { &mut c3_low } else { &mut c3_high };
                outcome(target, res, || format!("({i}, {j}), {}", params(r, &names, case)))?;
            }
        }
    }

    // (4)
    let mut c4 = [
        Check::new("ucom.4.ij_le_n"),
        Check::new("ucom.4.j_le_n_lt_i"),
        Check::new("ucom.4.i_le_n_lt_j"),
        Check::new("ucom.4.ij_gt_n"),
    ];
    for (i, j) in long_pairs(n) {
        let plan = if j <= n { &b_low } else { &b_high };
        let f = plan_form(plan);
        let r = f.base();
        let eps = f.eps();
        let (sj, si) = (sig(j, n), sig(i, n));
        let slot = match (i <= n, j <= n) {
            (true, true) => 0,
            (false, true) => 1,
            (true, false) => 2,
            (false, false) => 3,
        };
        for case in &plan.cases {
            let (a, b) = (&case[0], &case[1]);
            let a_s = r.star(a)?;
            let aba = r.mul(&r.mul(a, b), &a_s);
            let ab_a = r.mul(&r.mul(a, &r.star(b)?), &a_s);
            let c = match slot {
                0 => aba,
                1 => r.mul(&aba, eps),
                2 => r.neg(&ab_a),
                _ => r.neg(&r.mul(&ab_a, eps)),
            };
            let res = (|| {
                let lhs = commutator(&rho(f, n, i, j, a)?, &rho(f, n, j, sj, b)?)?;
                let rhs = rho(f, n, i, sj, &r.mul(a, b))?.mul(&rho(f, n, i, si, &c)?)?;
                Ok(lhs.value() == rhs.value())
            })();
            outcome(&mut c4[slot], res, || format!("({i}, {j}), {}", params(r, &names, case)))?;
        }
    }

    let mode = mode_name(any.mode);
    for c in [add_long, add_short, c2, c3_low, c3_high] {
        report.push(c.value("mode", mode));
    }
    for c in c4 {
        report.push(c.value("mode", mode));
    }
    Ok(report)
}

/// Generator well-definedness: membership for every a' case and both short
/// sides, the duality ρ_ij(a) = ρ_(σj,σi)(-a'), and the block inverse formula
/// on `products` random products of five generators.
pub fn verify_generators(form: &FormRing, n: usize, cfg: &SampleConfig, products: usize) -> Result<Report> {
    check_n(n, 1)?;
    let mut report = Report::new();
    let any = form_plan(form, &[Slot::Any], cfg)?;
    let lam = form_plan(form, &[Slot::Lambda], cfg)?;
    let lam_star = form_plan(form, &[Slot::LambdaStar], cfg)?;

    let mut long_checks: Vec<Check> = [
        PrimeCase::BothLow,
        PrimeCase::LowHigh,
        PrimeCase::HighLow,
        PrimeCase::BothHigh,
    ]
    .iter()
    .map(|c| Check::new(format!("rho.long.{}", c.tag())))
    .collect();
    let mut dual = Check::new("rho.duality");
    {
        let f = plan_form(&any);
        let r = f.base();
        for case in &any.cases {
            let a = &case[0];
            for (i, j) in long_pairs(n) {
                let g = rho(f, n, i, j, a)?;
                let slot = PrimeCase::of(i, j, n) as usize;
                let ok = unitary_membership(f, g.value())? && g.mul(&g.inv())?.is_identity();
                long_checks[slot].record(ok, || format!("({i}, {j}), a = {}", r.format(a)));
                let other = rho(f, n, sig(j, n), sig(i, n), &r.neg(&prime(f, n, i, j, a)?))?;
                dual.record(other.value() == g.value(), || format!("({i}, {j}), a = {}", r.format(a)));
            }
        }
    }
    let mut short_low = Check::new("rho.short.i_le_n");
    let mut short_high = Check::new("rho.short.i_gt_n");
    for i in 1..=2 * n {
        let (plan, check) = if i <= n {
            (&lam_star, &mut short_low)
        } else {
            (&lam, &mut short_high)
        };
        let f = plan_form(plan);
        for case in &plan.cases {
            let g = rho(f, n, i, sig(i, n), &case[0])?;
            check.record(unitary_membership(f, g.value())?, || {
                format!("({i}, {}), a = {}", sig(i, n), f.base().format(&case[0]))
            });
        }
    }
    for c in long_checks {
        report.push(c.value("mode", mode_name(any.mode)));
    }
    report.push(dual);
    report.push(short_low);
    report.push(short_high);

    let mut ident = Check::new("uinv.identity");
    let id = Matrix::identity(form.base(), 2 * n);
    let inv = unitary_inverse(form, &id)?;
    ident.record(inv.inverse_matrix().is_identity(), || "inverse of I".into());
    report.push(ident);

    // random products of generators
    let mut rng = cfg.rng();
    let mut prod = Check::new("uinv.products");
    let symplectic = is_commutative_symplectic(form);
    let mut sym = Check::new("uinv.symplectic_form");
    let ctx_form = plan_form(&any).clone();
    let ctx = UnitaryCtx {
        form: ctx_form.clone(),
        n,
    };
    let phi_n = phi(&ctx_form, n);
    for _ in 0..products {
        let word = random_word(&ctx_form, n, 5, &mut rng)?;
        let g = word.evaluate(&ctx)?;
        let r = ctx_form.base();
        let res = unitary_inverse(&ctx_form, g.value());
        let ok = matches!(&res, Ok(h) if h.inverse_matrix() == g.inverse_matrix());
        prod.record(ok, || format!("word {}", describe(r, &word)));
        if symplectic {
            let lhs = g.value().transpose().mul(&phi_n)?.mul(g.value())?;
            sym.record(lhs == phi_n, || format!("word {}", describe(r, &word)));
        }
    }
    report.push(prod.value("products", products as u64));
    if symplectic {
        // non-members too: random matrices are unitary exactly when they
        // preserve the alternating form
        let r = ctx_form.base();
        for _ in 0..products {
            let rows = (0..2 * n)
                .map(|_| (0..2 * n).map(|_| random_element(r, &mut rng)).collect())
                .collect();
            let m = Matrix::from_rows(r, rows)?;
            let preserves = m.transpose().mul(&phi_n)?.mul(&m)? == phi_n;
            sym.record(unitary_membership(&ctx_form, &m)? == preserves, || format!("matrix {m}"));
        }
        report.push(sym);
    }
    Ok(report)
}

/// * = id, ε = -1 and Λ = R over a commutative ring: U_2n is Sp_2n.
fn is_commutative_symplectic(form: &FormRing) -> bool {
    matches!(form.base().kind(), RingKind::Integers | RingKind::Modular { .. })
        && form.epsilon() == -1
        && *form.strategy() == LambdaStrategy::Maximal
}

fn describe(r: &Ring, w: &UnitaryWord) -> String {
    w.syllables
        .iter()
        .map(|s| format!("rho{},{}({})", s.letter.i, s.letter.j, r.format(&s.letter.a)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A parameter for slot `slot`, drawn from the domain or built from a
/// random element.
fn random_param(form: &FormRing, slot: Slot, rng: &mut ChaCha8Rng) -> Result<Elem> {
    let r = form.base();
    if r.is_finite() {
        let dom = match slot {
            Slot::Any => r.elements()?,
            Slot::Lambda => form.lambda_elements()?,
            Slot::LambdaStar => form.lambda_star_elements()?,
        };
        return Ok(dom.choose(rng).expect("domains contain zero").clone());
    }
    let x = random_element(r, rng);
    let l = match form.lambda_contains(&x) {
        Ok(true) => x.clone(),
        _ => form.lower_of(&x)?,
    };
    Ok(match slot {
        Slot::Any => x,
        Slot::Lambda => l,
        Slot::LambdaStar => r.star(&l)?,
    })
}

pub fn random_word(form: &FormRing, n: usize, len: usize, rng: &mut ChaCha8Rng) -> Result<UnitaryWord> {
    let mut w = Word::empty();
    for _ in 0..len {
        let i = rng.gen_range(1..=2 * n);
        let mut j = rng.gen_range(1..=2 * n);
        while j == i {
            j = rng.gen_range(1..=2 * n);
        }
        let slot = if j == sig(i, n) { short_slot(n, i) } else { Slot::Any };
        let a = random_param(form, slot, rng)?;
        w = w.then(&Word::letter(UnitaryLetter { i, j, a }));
    }
    Ok(w)
}

/// A Λ* parameter built from an unconstrained one.
fn to_lambda_star(form: &FormRing, x: &Elem) -> Result<Elem> {
    if form.lambda_star_contains(x)? {
        Ok(x.clone())
    } else {
        form.star(&form.lower_of(x)?)
    }
}

fn nilpotent_check(id: &str, form: &FormRing, families: Vec<Family<'_>>, cfg: &SampleConfig) -> Result<Check> {
    let r = form.base();
    let budget_ok = match r.order() {
        None => true,
        Some(q) => {
            let f = families.len() as u64;
            (2..=5u32).all(|w| f.pow(w).saturating_mul(q.saturating_pow(w)) <= 50_000)
        }
    };
    let mut c = Check::new(id);
    if !matches!(r.kind(), RingKind::Free { .. }) && !budget_ok {
        return Ok(c.not_checked("exhaustive nilpotency search exceeds the case budget"));
    }
    let (class, cases, witness) = nilpotency_class(r, &families, 4, cfg)?;
    c.cases = cases;
    match class {
        Some(k) => c.set_value("class", k as u64),
        None => c.fail(witness),
    }
    Ok(c)
}

/// Family `x -> ρ_ij(x)`, or `x -> ρ_ij(x')` with x' ∈ Λ* for short roots.
fn family<'a>(form: &'a FormRing, n: usize, i: usize, j: usize) -> Family<'a> {
    Box::new(move |r: &Ring, x: &Elem| {
        let f = form.rebase(r)?;
        let a = if j == sig(i, n) { to_lambda_star(&f, x)? } else { x.clone() };
        rho(&f, n, i, j, &a)
    })
}

/// ρ_(1,n+1)(r) = ρ_(1,n+2)(-r)[ρ_12(1), ρ_(2,n+2)(r)]
///             = [ρ_13(1), ρ_(3,n+2)(-r)][ρ_12(1), ρ_(2,n+2)(r)]  for r ∈ Λ*,
/// and nilpotency of ⟨ρ_12, ρ_13, ρ_(3,n+2), ρ_(2,n+2)⟩.
pub fn verify_fuu_unitary(form: &FormRing, n: usize, cfg: &SampleConfig) -> Result<Report> {
    check_n(n, 3)?;
    let plan = form_plan(form, &[Slot::LambdaStar], cfg)?;
    let f = plan_form(&plan);
    let r = f.base();
    let one = r.one();
    let mut first = Check::new("fuu-unitary.first");
    let mut second = Check::new("fuu-unitary.second");
    for case in &plan.cases {
        let x = &case[0];
        let res = (|| {
            let target = rho(f, n, 1, n + 1, x)?;
            let tail = commutator(&rho(f, n, 1, 2, &one)?, &rho(f, n, 2, n + 2, x)?)?;
            let a = rho(f, n, 1, n + 2, &r.neg(x))?.mul(&tail)?;
            let b = commutator(&rho(f, n, 1, 3, &one)?, &rho(f, n, 3, n + 2, &r.neg(x))?)?.mul(&tail)?;
            Ok((a.value() == target.value(), b.value() == target.value()))
        })();
        match res {
            Ok((p, q)) => {
                first.record(p, || params(r, &["r"], case));
                second.record(q, || params(r, &["r"], case));
            }
            Err(Error::LambdaViolation(m)) => {
                first.fail(m.clone());
                second.fail(m);
            }
            Err(e) => return Err(e),
        }
    }
    let fams = vec![
        family(form, n, 1, 2),
        family(form, n, 1, 3),
        family(form, n, 3, n + 2),
        family(form, n, 2, n + 2),
    ];
    let nil = nilpotent_check("fuu-unitary.nilpotent", form, fams, cfg)?;
    let mut report = Report::new();
    for c in [first, second, nil] {
        report.push(c.value("mode", mode_name(plan.mode)));
    }
    Ok(report)
}

/// The identities showing Γ_1, ..., Γ_(n+1) generate EU_2n(R, Λ).
pub fn verify_gamma_identities(form: &FormRing, n: usize, cfg: &SampleConfig) -> Result<Report> {
    check_n(n, 3)?;
    let plan = form_plan(form, &[Slot::Any, Slot::LambdaStar], cfg)?;
    let f = plan_form(&plan);
    let r = f.base();
    let one = r.one();
    let names = ["r", "x"];
    let mut chain1 = Check::new("gamma.chain_first");
    let mut chain2 = Check::new("gamma.chain_second");
    let mut upper = Check::new("gamma.upper_2n");
    let mut dual = Check::new("gamma.duality");
    let mut mixed = Check::new("gamma.mixed");
    let mut lower_row = Check::new("gamma.lower_row");
    let mut general = Check::new("gamma.general");
    for case in &plan.cases {
        let (s, x) = (&case[0], &case[1]);
        let w = || params(r, &names, case);
        let rx = r.sub(s, x);
        let res = (|| {
            let lhs = rho(f, n, n, 2 * n - 1, s)?.mul(&rho(f, n, n, 2 * n, x)?)?;
            let tail = commutator(&rho(f, n, n, n - 1, &one)?, &rho(f, n, n - 1, 2 * n - 1, x)?)?;
            let a = rho(f, n, n, 2 * n - 1, &rx)?.mul(&tail)?;
            let b = commutator(&rho(f, n, n, 1, &rx)?, &rho(f, n, 1, 2 * n - 1, &one)?)?.mul(&tail)?;
            Ok((lhs.value() == a.value(), a.value() == b.value()))
        })();
        match res {
            Ok((p, q)) => {
                chain1.record(p, w);
                chain2.record(q, w);
            }
            Err(Error::LambdaViolation(m)) => {
                chain1.fail(m.clone());
                chain2.fail(m);
            }
            Err(e) => return Err(e),
        }
        for i in 1..=n - 2 {
            let res = (|| {
                Ok(rho(f, n, i, 2 * n, s)?.value()
                    == commutator(&rho(f, n, i, n - 1, &one)?, &rho(f, n, n - 1, 2 * n, s)?)?.value())
            })();
            outcome(&mut upper, res, || format!("i = {i}, {}", w()))?;
        }
        for i in 1..n {
            let d = r.neg(&r.mul(&r.star(f.eps())?, &r.star(s)?));
            let res = (|| Ok(rho(f, n, i, 2 * n, s)?.value() == rho(f, n, n, n + i, &d)?.value()))();
            outcome(&mut dual, res, || format!("i = {i}, {}", w()))?;
        }
        for i in 1..n {
            for j in n + 1..2 * n {
                if j == n + i {
                    continue;
                }
                let res = (|| {
                    Ok(rho(f, n, i, j, s)?.value()
                        == commutator(&rho(f, n, i, n, &one)?, &rho(f, n, n, j, s)?)?.value())
                })();
                outcome(&mut mixed, res, || format!("({i}, {j}), {}", w()))?;
            }
        }
        for i in 1..=2 * n {
            if [1, 2, n + 1, n + 2].contains(&i) {
                continue;
            }
            let res = (|| {
                Ok(rho(f, n, n + 1, i, s)?.value()
                    == commutator(&rho(f, n, n + 1, 2, s)?, &rho(f, n, 2, i, &one)?)?.value())
            })();
            outcome(&mut lower_row, res, || format!("i = {i}, {}", w()))?;
        }
        for i in 1..=2 * n {
            for j in 1..=2 * n {
                let idx = [i, j, sig(i, n), sig(j, n)];
                let distinct = (0..4).all(|p| (p + 1..4).all(|q| idx[p] != idx[q]));
                if !distinct || [1, n + 1].contains(&i) || [1, n + 1].contains(&j) {
                    continue;
                }
                let res = (|| {
                    Ok(rho(f, n, i, j, s)?.value()
                        == commutator(&rho(f, n, i, 1, &one)?, &rho(f, n, 1, j, s)?)?.value())
                })();
                outcome(&mut general, res, || format!("({i}, {j}), {}", w()))?;
            }
        }
    }
    let fams = vec![
        family(form, n, n, 1),
        family(form, n, n, n - 1),
        family(form, n, 1, 2 * n - 1),
        family(form, n, n - 1, 2 * n - 1),
    ];
    let nil = nilpotent_check("gamma.nilpotent", form, fams, cfg)?;
    let mut report = Report::new();
    for c in [chain1, chain2, upper, dual, mixed, lower_row, general, nil] {
        report.push(c.value("mode", mode_name(plan.mode)));
    }
    Ok(report)
}

/// C_i: block shape, order 3, commutation and the Z_3^n closure.
pub fn verify_c(form: &FormRing, n: usize, cap: usize) -> Result<Report> {
    check_n(n, 1)?;
    let r = form.base();
    let mut report = Report::new();
    let cs: Vec<GroupElement> = match (1..=n).map(|i| c_matrix(form, n, i)).collect::<Result<Vec<_>>>() {
        Ok(cs) => cs,
        Err(Error::LambdaViolation(m)) => {
            report.push(Check::new("c.order").not_checked(m));
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let mut block = Check::new("c.block");
    let mut order = Check::new("c.order");
    let mut com = Check::new("c.commute");
    for (k, c) in cs.iter().enumerate() {
        let m = c.value();
        let (p, q) = (k, n + k);
        let got = [m.get(p, p), m.get(p, q), m.get(q, p), m.get(q, q)];
        let want = [-1, 1, -1, 0].map(|v| r.from_int(v));
        block.record(got.iter().zip(&want).all(|(a, b)| *a == b), || format!("C_{}", k + 1));
        order.record(c.order(6)? == Some(3), || format!("C_{} has order {:?}", k + 1, c.order(6)));
        for (l, d) in cs.iter().enumerate().skip(k + 1) {
            com.record(commutator(c, d)?.is_identity(), || format!("[C_{}, C_{}]", k + 1, l + 1));
        }
    }
    let expected = 3u64.pow(n as u32);
    let table = FiniteGroupTable::closure(r, 2 * n, cs, cap)?;
    let mut clo = Check::new("c.closure")
        .value("order", table.order() as u64)
        .value("expected", expected);
    if table.is_complete() {
        clo.record(table.order() as u64 == expected, || format!("order {}", table.order()));
    } else {
        clo = clo.partial(format!("cap {cap} reached"));
    }
    for c in [block, order, com, clo] {
        report.push(c);
    }
    Ok(report)
}

/// Hyperbolic embedding: identity, membership, agreement with ρ_ij for
/// i, j ≤ n, and multiplicativity.
pub fn verify_embed(form: &FormRing, n: usize, cfg: &SampleConfig) -> Result<Report> {
    check_n(n, 2)?;
    let plan = form_plan(form, &[Slot::Any, Slot::Any], cfg)?;
    let f = plan_form(&plan);
    let r = f.base();
    let mut ident = Check::new("embed.identity");
    ident.record(hyperbolic_embed(f, &GroupElement::identity(r, n))?.is_identity(), || "embed(I)".into());
    let mut member = Check::new("embed.membership");
    let mut agrees = Check::new("embed.rho");
    let mut hom = Check::new("embed.homomorphism");
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    for case in &plan.cases {
        let (a, b) = (&case[0], &case[1]);
        for &(i, j) in &pairs {
            let g = elementary::e(r, n, i, j, a)?;
            let emb = hyperbolic_embed(f, &g)?;
            member.record(unitary_membership(f, emb.value())?, || format!("e_({i},{j}), a = {}", r.format(a)));
            agrees.record(emb.value() == rho(f, n, i, j, a)?.value(), || format!("e_({i},{j}), a = {}", r.format(a)));
            for &(k, l) in &pairs {
                let h = elementary::e(r, n, k, l, b)?;
                let lhs = hyperbolic_embed(f, &g.mul(&h)?)?;
                let rhs = emb.mul(&hyperbolic_embed(f, &h)?)?;
                hom.record(lhs.value() == rhs.value(), || {
                    format!("e_({i},{j})(a) e_({k},{l})(b), {}", params(r, &["a", "b"], case))
                });
            }
        }
    }
    let mut report = Report::new();
    for c in [ident, member, agrees, hom] {
        report.push(c.value("mode", mode_name(plan.mode)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(m: u64) -> FormRing {
        FormRing::symplectic(&Ring::modular(m).unwrap()).unwrap()
    }

    fn free_form(eps: i8) -> FormRing {
        let r = Ring::free(&["a", "b"], true, eps).unwrap();
        FormRing::new(&r, eps, LambdaStrategy::Maximal).unwrap()
    }

    #[test]
    fn sigma_pairs_indices() {
        assert_eq!(sigma(1, 3).unwrap(), 4);
        assert_eq!(sigma(4, 3).unwrap(), 1);
        assert_eq!(sigma(3, 3).unwrap(), 6);
        assert!(sigma(7, 3).is_err());
        for k in 1..=6 {
            assert_eq!(sigma(sigma(k, 3).unwrap(), 3).unwrap(), k);
        }
    }

    #[test]
    fn symplectic_short_root() {
        let z = Ring::integers();
        let f = FormRing::symplectic(&z).unwrap();
        let g = rho(&f, 2, 1, 3, &z.one()).unwrap();
        let mut want = Matrix::identity(&z, 4);
        want.set(0, 2, z.one());
        assert_eq!(g.value(), &want);
        assert!(unitary_membership(&f, g.value()).unwrap());
        let inv = unitary_inverse(&f, g.value()).unwrap();
        let mut back = Matrix::identity(&z, 4);
        back.set(0, 2, z.from_int(-1));
        assert_eq!(inv.inverse_matrix(), &back);
    }

    #[test]
    fn long_root_over_free_ring() {
        let f = free_form(-1);
        let r = f.base();
        let a = r.parse("a").unwrap();
        let g = rho(&f, 2, 1, 2, &a).unwrap();
        let mut want = Matrix::identity(r, 4);
        want.set(0, 1, a.clone());
        want.set(3, 2, r.neg(&r.star(&a).unwrap()));
        assert_eq!(g.value(), &want);
        assert!(rho(&f, 2, 1, 2, &r.zero()).unwrap().is_identity());
    }

    #[test]
    fn orthogonal_short_roots_are_refused() {
        let r = Ring::modular(3).unwrap();
        let f = FormRing::orthogonal(&r).unwrap();
        assert!(matches!(rho(&f, 2, 1, 3, &r.one()), Err(Error::LambdaViolation(_))));
        assert!(matches!(c_matrix(&f, 2, 1), Err(Error::LambdaViolation(_))));
        assert!(rho(&f, 2, 1, 3, &r.zero()).unwrap().is_identity());
    }

    #[test]
    fn ucom_over_free_rings() {
        let cfg = SampleConfig::default();
        for eps in [-1, 1] {
            let rep = verify_ucom(&free_form(eps), 3, &cfg).unwrap();
            assert!(rep.passed(), "eps {eps}\n{}", rep.summary());
            assert!(rep.checks.iter().all(|c| c.cases > 0), "{}", rep.summary());
        }
    }

    #[test]
    fn generators_and_inverse_formula() {
        let cfg = SampleConfig::default();
        let rep = verify_generators(&sp(3), 2, &cfg, 50).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        let rep = verify_generators(&free_form(1), 2, &cfg, 20).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
    }

    #[test]
    fn fuu_and_gamma() {
        let cfg = SampleConfig::default();
        for f in [free_form(-1), free_form(1), sp(3)] {
            let rep = verify_fuu_unitary(&f, 3, &cfg).unwrap();
            assert!(rep.passed(), "{f}\n{}", rep.summary());
            let rep = verify_gamma_identities(&f, 3, &cfg).unwrap();
            assert!(rep.passed(), "{f}\n{}", rep.summary());
        }
    }

    #[test]
    fn c_matrices() {
        let rep = verify_c(&sp(5), 2, 1000).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        let z = FormRing::symplectic(&Ring::integers()).unwrap();
        assert_eq!(c_matrix(&z, 2, 1).unwrap().order(6).unwrap(), Some(3));
    }

    #[test]
    fn embedding() {
        let cfg = SampleConfig::default();
        assert!(verify_embed(&sp(3), 2, &cfg).unwrap().passed());
        assert!(verify_embed(&free_form(-1), 2, &cfg).unwrap().passed());
        let z = FormRing::symplectic(&Ring::integers()).unwrap();
        let g = elementary::e(z.base(), 2, 1, 2, &z.base().one()).unwrap();
        assert!(unitary_membership(&z, hyperbolic_embed(&z, &g).unwrap().value()).unwrap());
    }

    #[test]
    fn block_view_round_trip() {
        let r = Ring::modular(7).unwrap();
        let m = Matrix::from_ints(&r, &[&[1, 2, 3, 4], &[5, 6, 0, 1], &[2, 2, 2, 2], &[3, 1, 4, 1]]).unwrap();
        assert_eq!(UnitaryBlockView::of(&m).unwrap().assemble(), m);
    }
}
