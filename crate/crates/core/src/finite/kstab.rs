//! K_1 and KU_1 stabilization at desk scale: orders of GL_n, E_n, U_2n and
//! EU_2n over Z/m, and the indices at n and n + 1.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::elementary::e;
use crate::error::{Error, Result};
use crate::exactmat::{GroupElement, Matrix};
use crate::finite::FiniteGroupTable;
use crate::formring::FormRing;
use crate::report::{Check, Report};
use crate::rings::{units_of, Elem, Ring, RingKind};
use crate::unitary::{rho, sigma, unitary_membership};

/// Prime-power factorisation by trial division.
pub fn factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        let mut k = 0;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// |GL_n(Z/m)| = Π over p^k ∥ m of p^((k-1)n²) Π_(i<n) (p^n - p^i).
pub fn gl_order_formula(m: u64, n: usize) -> BigUint {
    let mut total = BigUint::one();
    for (p, k) in factor(m) {
        let p = BigUint::from(p);
        total *= p.pow((k - 1) * (n * n) as u32);
        let pn = p.pow(n as u32);
        for i in 0..n {
            total *= &pn - p.pow(i as u32);
        }
    }
    total
}

/// e_ij(g) for every i ≠ j and every additive generator g.
pub fn elementary_generators(ring: &Ring, n: usize) -> Result<Vec<GroupElement>> {
    let gens = ring.additive_generators()?;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                for g in &gens {
                    out.push(e(ring, n, i, j, g)?);
                }
            }
        }
    }
    Ok(out)
}

/// Elementary generators together with diag(u, 1, ..., 1) for each unit u ≠ 1.
pub fn general_linear_generators(ring: &Ring, n: usize) -> Result<Vec<GroupElement>> {
    let mut out = elementary_generators(ring, n)?;
    for u in units_of(ring)? {
        if u == ring.one() {
            continue;
        }
        let mut d = vec![ring.one(); n];
        let mut di = d.clone();
        d[0] = u.clone();
        di[0] = inverse_unit(ring, &u)?;
        out.push(GroupElement::new(Matrix::diagonal(ring, &d), Matrix::diagonal(ring, &di))?);
    }
    Ok(out)
}

fn inverse_unit(ring: &Ring, u: &Elem) -> Result<Elem> {
    ring.elements()?
        .into_iter()
        .find(|v| ring.mul(u, v) == ring.one())
        .ok_or_else(|| Error::Spec(format!("{} is not a unit", ring.format(u))))
}

struct Level {
    gl: FiniteGroupTable,
    e: FiniteGroupTable,
}

fn k1_level(ring: &Ring, n: usize, cap: usize, report: &mut Report, units: usize) -> Result<Option<usize>> {
    let lv = Level {
        gl: FiniteGroupTable::closure(ring, n, general_linear_generators(ring, n)?, cap)?,
        e: FiniteGroupTable::closure(ring, n, elementary_generators(ring, n)?, cap)?,
    };
    let m = ring.characteristic();
    let formula = gl_order_formula(m, n);
    let mut gl = Check::new(format!("k1.gl_order.n{n}"))
        .value("bfs", lv.gl.order() as u64)
        .value("formula", formula.to_string());
    let mut idx = Check::new(format!("k1.index.n{n}"))
        .value("e_order", lv.e.order() as u64)
        .value("units", units as u64);
    if !(lv.gl.is_complete() && lv.e.is_complete()) {
        report.push(gl.partial(format!("cap {cap} reached")));
        report.push(idx.partial(format!("cap {cap} reached")));
        return Ok(None);
    }
    gl.record(formula.to_u64() == Some(lv.gl.order() as u64), || {
        format!("BFS gives {}, formula gives {formula}", lv.gl.order())
    });
    let divides = lv.gl.order().is_multiple_of(lv.e.order());
    let index = lv.gl.order() / lv.e.order();
    idx.set_value("index", index as u64);
    idx.record(divides && index == units, || {
        format!("|GL| = {}, |E| = {}, units = {units}", lv.gl.order(), lv.e.order())
    });
    report.push(gl);
    report.push(idx);
    Ok(Some(index))
}

/// [GL_k : E_k] for k = n, n + 1 against the unit count, and their agreement.
pub fn k1_stabilization_check(ring: &Ring, n: usize, cap: usize) -> Result<Report> {
    if !matches!(ring.kind(), RingKind::Modular { .. }) {
        return Err(Error::InfiniteRing);
    }
    if n == 0 {
        return Err(Error::Dimension("n must be at least 1".into()));
    }
    let units = units_of(ring)?.len();
    let mut report = Report::new();
    let a = k1_level(ring, n, cap, &mut report, units)?;
    let b = k1_level(ring, n + 1, cap, &mut report, units)?;
    report.push(stable_check("k1.stable", n, a, b));
    Ok(report)
}

fn stable_check(id: &str, n: usize, a: Option<usize>, b: Option<usize>) -> Check {
    let mut c = Check::new(id);
    match (a, b) {
        (Some(a), Some(b)) => {
            c.set_value(&format!("n{n}"), a as u64);
            c.set_value(&format!("n{}", n + 1), b as u64);
            c.record(a == b, || format!("index {a} at n = {n}, {b} at n = {}", n + 1));
            c
        }
        _ => c.partial("an index is missing"),
    }
}

/// Generators of EU_2n(R, Λ): ρ_ij(g) for long roots and additive generators
/// g, and ρ_(i,σi)(λ) for every nonzero admissible λ.
pub fn elementary_unitary_generators(form: &FormRing, n: usize) -> Result<Vec<GroupElement>> {
    let r = form.base();
    let gens = r.additive_generators()?;
    let lam = form.lambda_elements()?;
    let lam_star = form.lambda_star_elements()?;
    let mut out = Vec::new();
    for i in 1..=2 * n {
        let si = sigma(i, n)?;
        for j in 1..=2 * n {
            if j == i || j == si {
                continue;
            }
            for g in &gens {
                out.push(rho(form, n, i, j, g)?);
            }
        }
        let dom = if i <= n { &lam_star } else { &lam };
        for a in dom.iter().filter(|a| !r.is_zero(a)) {
            out.push(rho(form, n, i, si, a)?);
        }
    }
    Ok(out)
}

/// Number of matrices enumerated by the full-space filter at most.
const FULL_SPACE_LIMIT: u64 = 1 << 24;

/// |U_2n(Z/m, Λ)| by membership over the whole matrix space, when that
/// space has at most 2^24 elements.
pub fn count_unitary_full_space(form: &FormRing, n: usize) -> Result<Option<u64>> {
    let r = form.base();
    let m = match r.kind() {
        RingKind::Modular { m } => *m,
        _ => return Err(Error::InfiniteRing),
    };
    let cells = 4 * n * n;
    match m.checked_pow(cells as u32) {
        Some(t) if t <= FULL_SPACE_LIMIT => {
            let mut count = 0;
            for code in 0..t {
                let mut c = code;
                let rows = (0..2 * n)
                    .map(|_| {
                        (0..2 * n)
                            .map(|_| {
                                let v = c % m;
                                c /= m;
                                Elem::Residue(v)
                            })
                            .collect()
                    })
                    .collect();
                if unitary_membership(form, &Matrix::from_rows(r, rows)?)? {
                    count += 1;
                }
            }
            Ok(Some(count))
        }
        _ => Ok(None),
    }
}

/// |U_2n(Z/m, Λ)| by choosing columns one at a time, left column p then
/// right column n + p, keeping every block condition that the chosen columns
/// already determine. Returns the count and whether it finished below `cap`.
pub fn count_unitary(form: &FormRing, n: usize, cap: u64) -> Result<(u64, bool)> {
    let r = form.base();
    let m = match r.kind() {
        RingKind::Modular { m } => *m,
        _ => return Err(Error::InfiniteRing),
    };
    let dim = 2 * n;
    match m.checked_pow(dim as u32) {
        Some(t) if t <= FULL_SPACE_LIMIT => {}
        _ => return Err(Error::Overflow(format!("{m}^{dim} candidate columns"))),
    }
    let eps = match form.eps() {
        Elem::Residue(v) => *v,
        _ => unreachable!("residue rings hold residues"),
    };
    let mut in_lambda = vec![false; m as usize];
    for l in form.lambda_elements()? {
        if let Elem::Residue(v) = l {
            in_lambda[v as usize] = true;
        }
    }
    let dot = |u: &[u64], v: &[u64]| -> u64 { u.iter().zip(v).fold(0u128, |acc, (a, b)| acc + (*a as u128) * (*b as u128)) as u64 % m };
    // a column (top; bottom) pairs with itself to a diagonal entry of Λ_n
    let candidates: Vec<Vec<u64>> = (0..m.pow(dim as u32))
        .map(|mut c| {
            (0..dim)
                .map(|_| {
                    let v = c % m;
                    c /= m;
                    v
                })
                .collect::<Vec<u64>>()
        })
        .filter(|v| in_lambda[dot(&v[..n], &v[n..]) as usize])
        .collect();
    let order: Vec<usize> = (0..n).flat_map(|p| [p, n + p]).collect();
    let mut search = Search {
        n,
        m,
        eps,
        dot: &dot,
        candidates: &candidates,
        order: &order,
        chosen: Vec::with_capacity(dim),
        count: 0,
        cap,
    };
    let complete = search.run();
    Ok((search.count, complete))
}

struct Search<'a> {
    n: usize,
    m: u64,
    eps: u64,
    dot: &'a dyn Fn(&[u64], &[u64]) -> u64,
    candidates: &'a [Vec<u64>],
    order: &'a [usize],
    chosen: Vec<usize>,
    count: u64,
    cap: u64,
}

impl Search<'_> {
    /// Does candidate `v` in column `col` fit with column `d` holding `w`?
    fn compatible(&self, col: usize, v: &[u64], d: usize, w: &[u64]) -> bool {
        let (n, m, eps) = (self.n, self.m, self.eps);
        let (vt, vb, wt, wb) = (&v[..n], &v[n..], &w[..n], &w[n..]);
        if (col < n) == (d < n) {
            // α*γ or β*δ off the diagonal: X_pq = -X_qp ε
            let x = (self.dot)(vt, wb);
            let y = (self.dot)(wt, vb);
            (x + y * eps % m).is_multiple_of(m)
        } else {
            let (lt, lb, rt, rb, p, q) = if col < n { (vt, vb, wt, wb, col, d - n) } else { (wt, wb, vt, vb, d, col - n) };
            let s = ((self.dot)(lt, rb) + eps * (self.dot)(lb, rt) % m) % m;
            s == u64::from(p == q)
        }
    }

    fn run(&mut self) -> bool {
        let depth = self.chosen.len();
        if depth == self.order.len() {
            self.count += 1;
            return self.count <= self.cap;
        }
        let col = self.order[depth];
        for k in 0..self.candidates.len() {
            let v = &self.candidates[k];
            let ok = self
                .chosen
                .iter()
                .enumerate()
                .all(|(t, &c)| self.compatible(col, v, self.order[t], &self.candidates[c]));
            if ok {
                self.chosen.push(k);
                let go_on = self.run();
                self.chosen.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

fn ku1_level(form: &FormRing, n: usize, cap: usize, report: &mut Report) -> Result<Option<usize>> {
    let (u, u_complete) = count_unitary(form, n, cap as u64)?;
    let mut uc = Check::new(format!("ku1.u_order.n{n}")).value("count", u);
    if let Some(full) = count_unitary_full_space(form, n)? {
        uc.set_value("full_space", full);
        uc.record(full == u, || format!("column search {u}, full space {full}"));
    } else if u_complete {
        uc.record(u > 0, || "no unitary matrices found, not even I".into());
    }
    let eu = FiniteGroupTable::closure(form.base(), 2 * n, elementary_unitary_generators(form, n)?, cap)?;
    let mut ec = Check::new(format!("ku1.eu_order.n{n}")).value("bfs", eu.order() as u64);
    let mut idx = Check::new(format!("ku1.index.n{n}"));
    let complete = u_complete && eu.is_complete();
    if !u_complete {
        uc = uc.partial(format!("more than {cap} unitary matrices"));
    }
    if eu.is_complete() {
        // every generator is unitary, so EU sits inside U
        let mut bad = None;
        for g in eu.generators() {
            if !unitary_membership(form, g.value())? {
                bad = Some(g.value().to_string());
                break;
            }
        }
        ec.record(bad.is_none(), || bad.unwrap_or_default());
    } else {
        ec = ec.partial(format!("cap {cap} reached"));
    }
    let out = if complete {
        let eu_order = eu.order() as u64;
        idx.record(u % eu_order == 0, || format!("|U| = {u} is not a multiple of |EU| = {eu_order}"));
        idx.set_value("index", u / eu_order);
        Some((u / eu_order) as usize)
    } else {
        idx = idx.partial("an order is missing");
        None
    };
    report.push(uc);
    report.push(ec);
    report.push(idx);
    Ok(out)
}

/// [U_2k : EU_2k] for k = n, n + 1 and their agreement; reaching the cap
/// makes the report partial.
pub fn ku1_stabilization_probe(form: &FormRing, n: usize, cap: usize) -> Result<Report> {
    if !matches!(form.base().kind(), RingKind::Modular { .. }) {
        return Err(Error::InfiniteRing);
    }
    if n == 0 {
        return Err(Error::Dimension("n must be at least 1".into()));
    }
    let mut report = Report::new();
    let a = ku1_level(form, n, cap, &mut report)?;
    let b = ku1_level(form, n + 1, cap, &mut report)?;
    report.push(stable_check("ku1.stable", n, a, b));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    /// |Sp_2n(F_q)| = q^(n²) Π_(i=1..n) (q^(2i) - 1).
    fn sp_order(q: u64, n: u32) -> u64 {
        q.pow(n * n) * (1..=n).map(|i| q.pow(2 * i) - 1).product::<u64>()
    }

    #[test]
    fn gl_formula_values() {
        assert_eq!(gl_order_formula(2, 3), BigUint::from(168u32));
        assert_eq!(gl_order_formula(5, 2), BigUint::from(480u32));
        assert_eq!(gl_order_formula(5, 3), BigUint::from(1_488_000u32));
        assert_eq!(gl_order_formula(3, 3), BigUint::from(11232u32));
        // Z/4: kernel of reduction has 2^(n²) elements
        assert_eq!(gl_order_formula(4, 2), BigUint::from(16u32 * 6));
        assert_eq!(gl_order_formula(6, 2), BigUint::from(6u32 * 48));
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
    }

    #[test]
    fn k1_over_small_fields() {
        for (m, units) in [(2u64, 1u64), (3, 2), (5, 4)] {
            let r = Ring::modular(m).unwrap();
            let rep = k1_stabilization_check(&r, 2, 5_000_000).unwrap();
            assert!(rep.passed(), "Z/{m}\n{}", rep.summary());
            assert_eq!(rep.get("k1.index.n2").unwrap().values["index"], units);
        }
    }

    #[test]
    fn k1_cap_is_partial() {
        let r = Ring::modular(3).unwrap();
        let rep = k1_stabilization_check(&r, 2, 10).unwrap();
        assert_eq!(rep.status(), Status::Partial);
        assert!(k1_stabilization_check(&Ring::integers(), 2, 10).is_err());
    }

    #[test]
    fn unitary_counts_agree_with_symplectic_orders() {
        for (m, n) in [(2u64, 1usize), (3, 1), (2, 2), (5, 1)] {
            let f = FormRing::symplectic(&Ring::modular(m).unwrap()).unwrap();
            let (c, done) = count_unitary(&f, n, u64::MAX).unwrap();
            assert!(done);
            assert_eq!(c, sp_order(m, n as u32), "Z/{m}, n = {n}");
            if let Some(full) = count_unitary_full_space(&f, n).unwrap() {
                assert_eq!(full, c);
            }
        }
        let f = FormRing::symplectic(&Ring::modular(3).unwrap()).unwrap();
        assert_eq!(count_unitary(&f, 2, u64::MAX).unwrap().0, 51840);
    }

    #[test]
    fn column_search_matches_full_space_for_other_forms() {
        for m in [2u64, 3, 4] {
            let f = FormRing::orthogonal(&Ring::modular(m).unwrap()).unwrap();
            let (c, _) = count_unitary(&f, 1, u64::MAX).unwrap();
            assert_eq!(Some(c), count_unitary_full_space(&f, 1).unwrap(), "Z/{m}");
        }
        let f = FormRing::orthogonal(&Ring::modular(2).unwrap()).unwrap();
        let (c, _) = count_unitary(&f, 2, u64::MAX).unwrap();
        assert_eq!(Some(c), count_unitary_full_space(&f, 2).unwrap());
    }

    #[test]
    fn ku1_probe_symplectic_f2() {
        let f = FormRing::symplectic(&Ring::modular(2).unwrap()).unwrap();
        let rep = ku1_stabilization_probe(&f, 1, 5_000_000).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        assert_eq!(rep.get("ku1.index.n2").unwrap().values["index"], 1u64);
    }

    #[test]
    fn ku1_probe_orthogonal_smoke() {
        let f = FormRing::orthogonal(&Ring::modular(2).unwrap()).unwrap();
        let rep = ku1_stabilization_probe(&f, 2, 100_000).unwrap();
        assert!(!rep.checks.is_empty());
    }

    #[test]
    fn ku1_cap_is_partial() {
        let f = FormRing::symplectic(&Ring::modular(3).unwrap()).unwrap();
        let rep = ku1_stabilization_probe(&f, 2, 1000).unwrap();
        assert_eq!(rep.status(), Status::Partial);
    }
}
