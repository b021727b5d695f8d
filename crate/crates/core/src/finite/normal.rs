//! Normal generation desk checks: every noncentral A in the A-subgroup
//! normally generates a group containing E_n(R, 2R).

use crate::elementary::{a_diag, e};
use crate::error::Result;
use crate::exactmat::{GroupElement, Matrix};
use crate::finite::kstab::elementary_generators;
use crate::finite::{normal_closure, FiniteGroupTable};
use crate::report::{Check, Report};
use crate::rings::Ring;

/// E_n(R, 2R): the normal closure of {e_ij(2)} in E_n(R).
pub fn relative_elementary(ambient: &FiniteGroupTable, cap: usize) -> Result<FiniteGroupTable> {
    let (r, n) = (ambient.ring(), ambient.dim());
    let two = r.from_int(2);
    let mut seeds = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                seeds.push(e(r, n, i, j, &two)?);
            }
        }
    }
    normal_closure(&seeds, ambient, cap)
}

fn is_central_sign(m: &Matrix) -> bool {
    let r = m.ring();
    let n = m.rows();
    m.is_identity() || *m == Matrix::identity(r, n).scale(&r.from_int(-1))
}

/// For each A ≠ ±I in ⟨A_12, ..., A_(n-1,n)⟩, checks
/// E_n(R, 2R) ⊆ normal_closure({A}) inside E_n(R).
pub fn verify_normal_generation(ring: &Ring, n: usize, cap: usize) -> Result<Report> {
    let mut report = Report::new();
    let ambient = FiniteGroupTable::closure(ring, n, elementary_generators(ring, n)?, cap)?;
    let mut c = Check::new("normal.contains_relative").value("ambient", ambient.order() as u64);
    if !ambient.is_complete() {
        report.push(c.partial(format!("cap {cap} reached")));
        return Ok(report);
    }
    let rel = relative_elementary(&ambient, cap)?;
    c.set_value("relative", rel.order() as u64);
    let a_gens = (1..n).map(|i| a_diag(ring, n, i, i + 1)).collect::<Result<Vec<GroupElement>>>()?;
    let a_sub = FiniteGroupTable::closure(ring, n, a_gens, cap)?;
    c.set_value("a_subgroup", a_sub.order() as u64);
    let mut tested = 0u64;
    for idx in 0..a_sub.order() {
        let m = a_sub.element(idx);
        if is_central_sign(&m) {
            continue;
        }
        tested += 1;
        let nc = normal_closure(&[a_sub.group_element(idx)?], &ambient, cap)?;
        if !nc.is_complete() {
            c = c.partial(format!("cap {cap} reached"));
            break;
        }
        c.record(rel.is_subset_of(&nc), || format!("A = {m}"));
    }
    c.set_value("noncentral", tested);
    report.push(c);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_in_dimension_three() {
        let r = Ring::modular(3).unwrap();
        let rep = verify_normal_generation(&r, 3, 100_000).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        let c = rep.get("normal.contains_relative").unwrap();
        assert_eq!(c.values["noncentral"], 3u64);
        assert_eq!(c.values["relative"], 5616u64);
    }

    #[test]
    fn relative_group_over_z4_is_proper() {
        let r = Ring::modular(4).unwrap();
        let amb = FiniteGroupTable::closure(&r, 3, elementary_generators(&r, 3).unwrap(), 100_000).unwrap();
        assert_eq!(amb.order(), 43008);
        let rel = relative_elementary(&amb, 100_000).unwrap();
        assert!(rel.order() < amb.order() && amb.order() % rel.order() == 0);
        assert!(rel.is_normal_in(&amb).unwrap());
    }
}
