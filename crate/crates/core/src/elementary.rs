//! Elementary matrices e_ij(r), the sign and order-3 torsion matrices built
//! from them, and the identity suites over E_n(R).
//!
//! Indices are one-based throughout, matching the usual matrix notation.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactmat::{commutator, GroupElement, Matrix};
use crate::finite::FiniteGroupTable;
use crate::report::{Check, Report};
use crate::rings::{Elem, Ring};
use crate::sampling::{ring_plan, Mode, SampleConfig};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct ElemLetter {
    pub i: usize,
    pub j: usize,
    pub r: Elem,
}

#[derive(Clone, Debug)]
pub struct ElemCtx {
    pub ring: Ring,
    pub n: usize,
}

impl Letter for ElemLetter {
    type Ctx = ElemCtx;

    fn eval(&self, ctx: &ElemCtx) -> Result<GroupElement> {
        e(&ctx.ring, ctx.n, self.i, self.j, &self.r)
    }

    fn identity(ctx: &ElemCtx) -> GroupElement {
        GroupElement::identity(&ctx.ring, ctx.n)
    }

    fn is_trivial(&self) -> bool {
        match &self.r {
            Elem::Int(v) => num_traits::Zero::is_zero(v),
            Elem::Residue(v) => *v == 0,
            Elem::Lin(m) => m.is_empty(),
        }
    }
}

impl fmt::Display for ElemLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{},{}({:?})", self.i, self.j, self.r)
    }
}

pub type ElemWord = Word<ElemLetter>;

pub fn letter(i: usize, j: usize, r: Elem) -> ElemWord {
    Word::letter(ElemLetter { i, j, r })
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::Index(format!("e_({i},{j}) in size {n}")));
    }
    Ok(())
}

/// `e_ij(r) = I + rE_ij`, carrying `I - rE_ij` as its inverse.
pub fn e(ring: &Ring, n: usize, i: usize, j: usize, r: &Elem) -> Result<GroupElement> {
    check_pair(n, i, j)?;
    ring.check(r)?;
    let id = Matrix::identity(ring, n);
    let mut value = id.clone();
    value.set(i - 1, j - 1, r.clone());
    let mut inverse = id;
    inverse.set(i - 1, j - 1, ring.neg(r));
    Ok(GroupElement::from_formula(value, inverse))
}

fn e_int(ring: &Ring, n: usize, i: usize, j: usize, r: i64) -> Result<GroupElement> {
    e(ring, n, i, j, &ring.from_int(r))
}

/// Diagonal matrix with -1 at positions i and j. Over characteristic 2 this
/// is the identity.
pub fn a_diag(ring: &Ring, n: usize, i: usize, j: usize) -> Result<GroupElement> {
    check_pair(n, i, j)?;
    let mut diag = vec![ring.one(); n];
    diag[i - 1] = ring.from_int(-1);
    diag[j - 1] = ring.from_int(-1);
    GroupElement::involutory(Matrix::diagonal(ring, &diag))
}

/// `e_ij(1) e_ji(-1) e_ij(1) e_ij(1) e_ji(-1) e_ij(1)`.
pub fn a_decomposition(ring: &Ring, n: usize, i: usize, j: usize) -> Result<GroupElement> {
    let w = e_int(ring, n, i, j, 1)?
        .mul(&e_int(ring, n, j, i, -1)?)?
        .mul(&e_int(ring, n, i, j, 1)?)?;
    w.mul(&w)
}

/// `B_i = e_(2i-1,2i)(1) e_(2i,2i-1)(-1) e_(2i-1,2i)(1) e_(2i,2i-1)(-1)`.
pub fn b_matrix(ring: &Ring, n: usize, i: usize) -> Result<GroupElement> {
    if i == 0 || 2 * i > n {
        return Err(Error::Index(format!("B_{i} needs 2i <= n, got n = {n}")));
    }
    let (p, q) = (2 * i - 1, 2 * i);
    let x = e_int(ring, n, p, q, 1)?.mul(&e_int(ring, n, q, p, -1)?)?;
    x.mul(&x)
}

/// A word in the letters e_(k,k+1)(x) and e_(n,1)(x) that evaluates to e_ij(r).
pub fn expand(ring: &Ring, n: usize, i: usize, j: usize, r: &Elem) -> Result<ElemWord> {
    check_pair(n, i, j)?;
    let one = ring.one();
    Ok(if j == i + 1 || (i == n && j == 1) {
        letter(i, j, r.clone())
    } else if i < j {
        Word::commutator(&letter(i, i + 1, r.clone()), &expand(ring, n, i + 1, j, &one)?)
    } else if i < n {
        Word::commutator(&expand(ring, n, i, n, r)?, &expand(ring, n, n, j, &one)?)
    } else {
        Word::commutator(&letter(n, 1, r.clone()), &expand(ring, n, 1, j, &one)?)
    })
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

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::Dimension(format!("needs n >= {min}, got {n}")))
    } else {
        Ok(())
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
}

/// Checks additivity, `[e_ij(r), e_jk(s)] = e_ik(rs)` and
/// `[e_ij(r), e_kl(s)] = I` (j ≠ k, i ≠ l) over every admissible index tuple.
pub fn verify_ecom(ring: &Ring, n: usize, cfg: &SampleConfig) -> Result<Report> {
    check_n(n, 2)?;
    let plan = ring_plan(ring, 2, cfg)?;
    let r = &plan.ring;
    let mut c1 = Check::new("ecom.1");
    let mut c2 = Check::new("ecom.2");
    let mut c3 = Check::new("ecom.3");
    let id = Matrix::identity(r, n);
    for case in &plan.cases {
        let (a, b) = (&case[0], &case[1]);
        let mut ea = HashMap::new();
        let mut eb = HashMap::new();
        for (i, j) in pairs(n) {
            ea.insert((i, j), e(r, n, i, j, a)?);
            eb.insert((i, j), e(r, n, i, j, b)?);
        }
        let ab = r.mul(a, b);
        let sum = r.add(a, b);
        for (i, j) in pairs(n) {
            let lhs = ea[&(i, j)].mul(&eb[&(i, j)])?;
            c1.record(lhs.value() == e(r, n, i, j, &sum)?.value(), || {
                format!("i = {i}, j = {j}, {}", params(r, &["r", "s"], case))
            });
            for k in (1..=n).filter(|&k| k != i && k != j) {
                let c = commutator(&ea[&(i, j)], &eb[&(j, k)])?;
                c2.record(c.value() == e(r, n, i, k, &ab)?.value(), || {
                    format!("(i, j, k) = ({i}, {j}, {k}), {}", params(r, &["r", "s"], case))
                });
            }
            for (k, l) in pairs(n).filter(|&(k, l)| k != j && l != i) {
                let c = commutator(&ea[&(i, j)], &eb[&(k, l)])?;
                c3.record(*c.value() == id, || {
                    format!("(i, j, k, l) = ({i}, {j}, {k}, {l}), {}", params(r, &["r", "s"], case))
                });
            }
        }
    }
    let mut report = Report::new();
    for c in [c1, c2, c3] {
        report.push(c.value("mode", mode_name(plan.mode)));
    }
    Ok(report)
}

/// Sign matrices: six-factor decomposition, involutions, commutation and the
/// size of the subgroup generated by A_12, ..., A_(n-1,n).
pub fn verify_prop(ring: &Ring, n: usize, cap: usize) -> Result<Report> {
    check_n(n, 2)?;
    let mut dec = Check::new("prop.decomposition");
    for (i, j) in pairs(n) {
        let ok = a_diag(ring, n, i, j)?.value() == a_decomposition(ring, n, i, j)?.value();
        dec.record(ok, || format!("A_({i},{j})"));
    }
    let gens: Vec<GroupElement> = (1..n).map(|i| a_diag(ring, n, i, i + 1)).collect::<Result<_>>()?;
    let mut inv = Check::new("prop.involution");
    let mut com = Check::new("prop.commute");
    for (k, g) in gens.iter().enumerate() {
        inv.record(g.mul(g)?.is_identity(), || format!("A_({},{})^2", k + 1, k + 2));
        for (l, h) in gens.iter().enumerate().skip(k + 1) {
            com.record(commutator(g, h)?.is_identity(), || {
                format!("[A_({},{}), A_({},{})]", k + 1, k + 2, l + 1, l + 2)
            });
        }
    }
    let two_is_zero = ring.is_zero(&ring.from_int(2));
    let expected: u64 = if two_is_zero { 1 } else { 1 << (n - 1) };
    let table = FiniteGroupTable::closure(ring, n, gens, cap)?;
    let mut clo = Check::new("prop.closure")
        .value("order", table.order() as u64)
        .value("expected", expected);
    if table.is_complete() {
        clo.record(table.order() as u64 == expected, || format!("order {}", table.order()));
    } else {
        clo = clo.partial(format!("cap {cap} reached"));
    }
    let mut report = Report::new();
    for c in [dec, inv, com, clo] {
        report.push(c);
    }
    Ok(report)
}

/// `e_12(r) A e_12(-r) A^-1 = e_12(2r)` with `A = diag(1, -1, -1, 1, ...)`.
pub fn verify_normal_conjugation(ring: &Ring, n: usize, cfg: &SampleConfig) -> Result<Report> {
    check_n(n, 3)?;
    let plan = ring_plan(ring, 1, cfg)?;
    let r = &plan.ring;
    let a = a_diag(r, n, 2, 3)?;
    let mut c = Check::new("normal-conj.e12");
    for case in &plan.cases {
        let x = &case[0];
        let lhs = e(r, n, 1, 2, x)?
            .mul(&a)?
            .mul(&e(r, n, 1, 2, &r.neg(x))?)?
            .mul(&a.inv())?;
        let rhs = e(r, n, 1, 2, &r.mul_int(x, 2))?;
        c.record(lhs.value() == rhs.value(), || params(r, &["r"], case));
    }
    let mut report = Report::new();
    report.push(c.value("mode", mode_name(plan.mode)));
    Ok(report)
}

/// B_i block shape, order 3, commutation, the Z_3^k closure and the two
/// regeneration commutators.
pub fn verify_b(ring: &Ring, n: usize, cap: usize) -> Result<Report> {
    check_n(n, 3)?;
    let k = n / 2;
    let bs: Vec<GroupElement> = (1..=k).map(|i| b_matrix(ring, n, i)).collect::<Result<_>>()?;
    let mut block = Check::new("b.block");
    let mut order = Check::new("b.order");
    let mut com = Check::new("b.commute");
    for (idx, b) in bs.iter().enumerate() {
        let p = 2 * idx;
        let mut expect = Matrix::identity(ring, n);
        expect.paste(p, p, &Matrix::from_ints(ring, &[&[-1, 1], &[-1, 0]])?);
        block.record(*b.value() == expect, || format!("B_{} = {}", idx + 1, b.value()));
        order.record(b.order(6)? == Some(3), || format!("B_{} has order {:?}", idx + 1, b.order(6)));
        for (jdx, c) in bs.iter().enumerate().skip(idx + 1) {
            com.record(commutator(b, c)?.is_identity(), || format!("[B_{}, B_{}]", idx + 1, jdx + 1));
        }
    }
    let expected = 3u64.pow(k as u32);
    let table = FiniteGroupTable::closure(ring, n, bs.clone(), cap)?;
    let mut clo = Check::new("b.closure")
        .value("order", table.order() as u64)
        .value("expected", expected);
    if table.is_complete() {
        clo.record(table.order() as u64 == expected, || format!("order {}", table.order()));
    } else {
        clo = clo.partial(format!("cap {cap} reached"));
    }

    let mut regen = Check::new("b.regeneration");
    let lhs = commutator(&e_int(ring, n, 3, 2, 1)?, &bs[0])?;
    let mid = e_int(ring, n, 3, 1, -1)?.mul(&e_int(ring, n, 3, 2, 2)?)?;
    regen.record(lhs.value() == mid.value(), || format!("[e32(1), B1] = {}", lhs.value()));
    let back = commutator(&mid, &e_int(ring, n, 1, 2, -1)?)?;
    regen.record(back.value() == e_int(ring, n, 3, 2, 1)?.value(), || {
        format!("[e31(-1)e32(2), e12(-1)] = {}", back.value())
    });

    let mut report = Report::new();
    for c in [block, order, com, clo, regen] {
        report.push(c);
    }
    Ok(report)
}

/// Nested-commutator expressions for every e_ij(r) in terms of the
/// superdiagonal letters and e_(n,1).
pub fn verify_generation_identities(ring: &Ring, n: usize, cfg: &SampleConfig) -> Result<Report> {
    check_n(n, 3)?;
    let plan = ring_plan(ring, 1, cfg)?;
    let r = &plan.ring;
    let ctx = ElemCtx {
        ring: r.clone(),
        n,
    };
    let one = r.one();
    let e1 = |i, j| e(r, n, i, j, &one);
    let mut upper = Check::new("gen.upper");
    let mut upper_nested = Check::new("gen.upper_nested");
    let mut lower = Check::new("gen.lower");
    let mut lower_nested = Check::new("gen.lower_nested");
    let mut expansion = Check::new("gen.expansion");
    for case in &plan.cases {
        let x = &case[0];
        let w = |i, j| format!("e_({i},{j}), {}", params(r, &["r"], case));
        for i in 1..=n {
            for j in i + 2..=n {
                let target = e(r, n, i, j, x)?;
                let one_step = commutator(&e(r, n, i, i + 1, x)?, &e1(i + 1, j)?)?;
                upper.record(one_step.value() == target.value(), || w(i, j));
                if j > i + 2 {
                    let inner = commutator(&e1(i + 1, i + 2)?, &e1(i + 2, j)?)?;
                    let nested = commutator(&e(r, n, i, i + 1, x)?, &inner)?;
                    upper_nested.record(nested.value() == target.value(), || w(i, j));
                }
            }
        }
        for i in 1..n {
            for j in i + 1..=n {
                let target = e(r, n, j, i, x)?;
                if j < n {
                    let c = commutator(&e(r, n, j, n, x)?, &e1(n, i)?)?;
                    lower.record(c.value() == target.value(), || w(j, i));
                    if i > 1 {
                        let inner = commutator(&e1(n, 1)?, &e1(1, i)?)?;
                        let c = commutator(&e(r, n, j, n, x)?, &inner)?;
                        lower_nested.record(c.value() == target.value(), || w(j, i));
                    }
                } else if i > 1 {
                    let c = commutator(&e(r, n, n, 1, x)?, &e1(1, i)?)?;
                    lower.record(c.value() == target.value(), || w(j, i));
                }
            }
        }
        for (i, j) in pairs(n) {
            let word = expand(r, n, i, j, x)?;
            let letters_ok = word.letters().all(|l| l.j == l.i + 1 || (l.i == n && l.j == 1));
            let ok = letters_ok && word.evaluate(&ctx)?.value() == e(r, n, i, j, x)?.value();
            expansion.record(ok, || w(i, j));
        }
    }
    let mut report = Report::new();
    for c in [upper, upper_nested, lower, lower_nested, expansion] {
        report.push(c.value("mode", mode_name(plan.mode)));
    }
    Ok(report)
}

/// A matrix family indexed by a ring parameter, e.g. `x -> e_13(x)`.
pub(crate) type Family<'a> = Box<dyn Fn(&Ring, &Elem) -> Result<GroupElement> + 'a>;

/// Smallest class c ≤ `max_class` such that all left-normed commutators of
/// weight c + 1 in the families vanish, with a fresh parameter per position.
/// Returns the class, or `None` with the first nonvanishing commutator.
pub(crate) fn nilpotency_class(
    ring: &Ring,
    families: &[Family<'_>],
    max_class: usize,
    cfg: &SampleConfig,
) -> Result<(Option<usize>, u64, String)> {
    let mut cases = 0u64;
    let mut last = String::new();
    for weight in 2..=max_class + 1 {
        let plan = ring_plan(ring, weight, cfg)?;
        let r = &plan.ring;
        let mut all_vanish = true;
        let f = families.len();
        'tuples: for code in 0..f.pow(weight as u32) {
            let picks: Vec<usize> = (0..weight).map(|p| code / f.pow(p as u32) % f).collect();
            for case in &plan.cases {
                let mut acc = families[picks[0]](r, &case[0])?;
                for p in 1..weight {
                    acc = commutator(&acc, &families[picks[p]](r, &case[p])?)?;
                }
                cases += 1;
                if !acc.is_identity() {
                    all_vanish = false;
                    last = format!("families {picks:?} at weight {weight}");
                    break 'tuples;
                }
            }
        }
        if all_vanish {
            return Ok((Some(weight - 1), cases, String::new()));
        }
    }
    Ok((None, cases, last))
}

/// `e_12(r) = [e_13(1), e_32(r)]`, centrality of `[e_13(x), e_32(y)] = e_12(xy)`,
/// and the class of ⟨e_13(*), e_32(*)⟩.
pub fn verify_fuu_linear(ring: &Ring, n: usize, cfg: &SampleConfig) -> Result<Report> {
    check_n(n, 3)?;
    let plan = ring_plan(ring, 3, cfg)?;
    let r = &plan.ring;
    let mut lin = Check::new("fuu.linear");
    let mut central = Check::new("fuu.central");
    for case in &plan.cases {
        let (x, y, s) = (&case[0], &case[1], &case[2]);
        let c = commutator(&e(r, n, 1, 3, &r.one())?, &e(r, n, 3, 2, s)?)?;
        lin.record(c.value() == e(r, n, 1, 2, s)?.value(), || params(r, &["r"], &case[2..]));
        let z = commutator(&e(r, n, 1, 3, x)?, &e(r, n, 3, 2, y)?)?;
        let names = ["x", "y", "s"];
        central.record(z.value() == e(r, n, 1, 2, &r.mul(x, y))?.value(), || params(r, &names, case));
        central.record(commutator(&z, &e(r, n, 1, 3, s)?)?.is_identity(), || params(r, &names, case));
        central.record(commutator(&z, &e(r, n, 3, 2, s)?)?.is_identity(), || params(r, &names, case));
    }
    let families: Vec<Family> = vec![
        Box::new(move |r: &Ring, x: &Elem| e(r, n, 1, 3, x)),
        Box::new(move |r: &Ring, x: &Elem| e(r, n, 3, 2, x)),
    ];
    let (class, cases, witness) = nilpotency_class(ring, &families, 3, cfg)?;
    let mut nil = Check::new("fuu.nilpotent");
    nil.cases = cases;
    match class {
        Some(c) => nil.set_value("class", c as u64),
        None => nil.fail(witness),
    }
    let mut report = Report::new();
    for c in [lin, central, nil] {
        report.push(c.value("mode", mode_name(plan.mode)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free() -> Ring {
        Ring::free(&["r", "s"], false, 1).unwrap()
    }

    #[test]
    fn zero_parameter_is_identity() {
        let r = Ring::integers();
        assert!(e(&r, 3, 1, 2, &r.zero()).unwrap().is_identity());
        assert!(e(&r, 3, 2, 2, &r.one()).is_err());
        assert!(e(&r, 3, 1, 4, &r.one()).is_err());
    }

    #[test]
    fn additivity_in_two_dimensions() {
        let r = free();
        let a = r.parse("r").unwrap();
        let b = r.parse("s").unwrap();
        let p = e(&r, 2, 1, 2, &a).unwrap().mul(&e(&r, 2, 1, 2, &b).unwrap()).unwrap();
        assert_eq!(p, e(&r, 2, 1, 2, &r.add(&a, &b)).unwrap());
    }

    #[test]
    fn order_two_over_f2() {
        let r = Ring::modular(2).unwrap();
        assert_eq!(e(&r, 3, 1, 2, &r.one()).unwrap().order(4).unwrap(), Some(2));
    }

    #[test]
    fn ecom_symbolic_and_exhaustive() {
        let cfg = SampleConfig::default();
        for n in [3, 4] {
            assert!(verify_ecom(&free(), n, &cfg).unwrap().passed());
        }
        let rep = verify_ecom(&Ring::modular(4).unwrap(), 3, &cfg).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.get("ecom.2").unwrap().cases, 16 * 6);
    }

    #[test]
    fn sign_matrices() {
        let z = Ring::integers();
        let a = a_diag(&z, 3, 1, 2).unwrap();
        assert!(a.mul(&a).unwrap().is_identity());
        assert!(verify_prop(&z, 4, 1000).unwrap().passed());
        let rep = verify_prop(&Ring::modular(2).unwrap(), 4, 1000).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.get("prop.closure").unwrap().values["order"], 1);
    }

    #[test]
    fn b_matrices() {
        let z = Ring::integers();
        let b = b_matrix(&z, 4, 1).unwrap();
        assert_eq!(b.value().block(0, 0, 2, 2), Matrix::from_ints(&z, &[&[-1, 1], &[-1, 0]]).unwrap());
        assert!(b_matrix(&z, 3, 2).is_err());
        for ring in [z, Ring::modular(2).unwrap(), Ring::modular(5).unwrap()] {
            let rep = verify_b(&ring, 4, 1000).unwrap();
            assert!(rep.passed(), "{}", rep.summary());
        }
    }

    #[test]
    fn conjugation_doubles_the_parameter() {
        let cfg = SampleConfig::default();
        assert!(verify_normal_conjugation(&Ring::free(&["r"], false, 1).unwrap(), 3, &cfg).unwrap().passed());
        assert!(verify_normal_conjugation(&Ring::modular(3).unwrap(), 3, &cfg).unwrap().passed());
    }

    #[test]
    fn generation_and_expansion() {
        let cfg = SampleConfig::default();
        for n in [3, 4, 5] {
            let rep = verify_generation_identities(&free(), n, &cfg).unwrap();
            assert!(rep.passed(), "{}", rep.summary());
        }
    }

    #[test]
    fn lower_nested_form_needs_the_matching_inner_commutator() {
        let r = free();
        let x = r.parse("r").unwrap();
        let one = r.one();
        let target = e(&r, 3, 2, 1, &x).unwrap();
        // [e31(1), e12(1)] = e32(1), not e31(1)
        let inner = commutator(&e(&r, 3, 3, 1, &one).unwrap(), &e(&r, 3, 1, 2, &one).unwrap()).unwrap();
        assert_eq!(inner, e(&r, 3, 3, 2, &one).unwrap());
        let wrong = commutator(&e(&r, 3, 2, 3, &x).unwrap(), &inner).unwrap();
        assert_ne!(wrong, target);
        let right = commutator(&e(&r, 3, 2, 3, &x).unwrap(), &e(&r, 3, 3, 1, &one).unwrap()).unwrap();
        assert_eq!(right, target);
    }

    #[test]
    fn fuu_linear() {
        let cfg = SampleConfig::default();
        let rep = verify_fuu_linear(&free(), 3, &cfg).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        assert_eq!(rep.get("fuu.nilpotent").unwrap().values["class"], 2);
        assert!(verify_fuu_linear(&Ring::modular(2).unwrap(), 3, &cfg).unwrap().passed());
    }
}
